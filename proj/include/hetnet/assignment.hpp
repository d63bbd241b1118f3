#pragma once

#include <limits>
#include <vector>

#include "hetnet/types.hpp"

namespace hetnet {

constexpr double kForbidden = std::numeric_limits<double>::infinity();

/// Rectangular cost matrix, rows = users, cols = candidate slots.  Entries
/// may be kForbidden.
class CostMatrix {
  public:
    CostMatrix() = default;
    CostMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * cols, fill) {}

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    /// Appends `count` columns with a constant cost for every row.
    void pad_columns(int count, double cost);

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

struct AssignmentResult {
    std::vector<int> col_of_row; // -1 when matched to a dummy column
    double total_cost = 0.0;     // finite assignments only
    bool complete = false;       // every row matched to a real, finite column
};

/// Exact minimum-cost assignment (Jonker-Volgenant shortest augmenting
/// paths).  Requires rows <= cols after padding; rows > cols is completed
/// internally with zero-cost dummy columns (those rows come back as -1).
/// Ties are broken toward the lowest column index.  Throws InfeasibleError
/// if some row has no finite entry at all.
AssignmentResult solve_assignment(const CostMatrix& costs);

} // namespace hetnet
