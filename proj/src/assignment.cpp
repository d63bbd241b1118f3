#include "hetnet/assignment.hpp"

#include <algorithm>
#include <cmath>

namespace hetnet {

namespace {
// Internal stand-in for forbidden entries; large enough to dominate any
// feasible total, small enough that sums stay well inside double range.
constexpr double kSentinel = 1e15;
} // namespace

void CostMatrix::pad_columns(int count, double cost) {
    std::vector<double> grown(static_cast<std::size_t>(rows_) * (cols_ + count));
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c)
            grown[static_cast<std::size_t>(r) * (cols_ + count) + c] = at(r, c);
        for (int c = cols_; c < cols_ + count; ++c)
            grown[static_cast<std::size_t>(r) * (cols_ + count) + c] = cost;
    }
    cols_ += count;
    data_ = std::move(grown);
}

AssignmentResult solve_assignment(const CostMatrix& input) {
    if (input.rows() == 0)
        return AssignmentResult{{}, 0.0, true};

    for (int r = 0; r < input.rows(); ++r) {
        bool any_finite = false;
        for (int c = 0; c < input.cols(); ++c)
            if (std::isfinite(input.at(r, c))) {
                any_finite = true;
                break;
            }
        if (!any_finite)
            throw InfeasibleError("assignment row has no finite entry");
    }

    CostMatrix costs = input;
    const bool padded = costs.rows() > costs.cols();
    if (padded) costs.pad_columns(costs.rows() - costs.cols(), 0.0);

    const int n = costs.rows();
    const int m = costs.cols();

    // Jonker-Volgenant shortest augmenting paths with potentials (1-based).
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> matched_row(m + 1, 0); // column -> row
    std::vector<int> way(m + 1, 0);
    auto cost_at = [&](int row1, int col1) {
        const double c = costs.at(row1 - 1, col1 - 1);
        return std::isfinite(c) ? c : kSentinel;
    };

    std::vector<double> minv(m + 1);
    std::vector<char> used(m + 1);
    for (int i = 1; i <= n; ++i) {
        matched_row[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), std::numeric_limits<double>::infinity());
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = matched_row[j0];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = -1;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost_at(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (matched_row[j0] != 0);
        do {
            const int j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    AssignmentResult result;
    result.col_of_row.assign(n, -1);
    result.complete = true;
    for (int j = 1; j <= m; ++j) {
        const int row = matched_row[j];
        if (row == 0) continue;
        const int col = j - 1;
        const bool dummy = col >= input.cols();
        const double c = dummy ? 0.0 : input.at(row - 1, col);
        if (dummy || !std::isfinite(c)) {
            result.col_of_row[row - 1] = -1;
            result.complete = false;
        } else {
            result.col_of_row[row - 1] = col;
            result.total_cost += c;
        }
    }
    return result;
}

} // namespace hetnet
