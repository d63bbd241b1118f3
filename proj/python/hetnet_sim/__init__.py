"""Python surface of the HetNet energy-management simulator.

The heavy lifting lives in the C++ core; this package exposes the channel
formulas, the Hungarian assignment, both solvers, and the operator-FAP
pricing optimizer.
"""

from ._hetnet import (
    __version__,
    default_config_text,
    pathloss_indoor_indoor_db,
    pathloss_outdoor_indoor_db,
    pathloss_outdoor_outdoor_db,
    rate_bps,
    required_power_w,
    solve,
    solve_assignment,
    solve_pricing,
    tiny_oracle_comparison,
)

__all__ = [
    "__version__",
    "default_config_text",
    "pathloss_indoor_indoor_db",
    "pathloss_outdoor_indoor_db",
    "pathloss_outdoor_outdoor_db",
    "rate_bps",
    "required_power_w",
    "solve",
    "solve_assignment",
    "solve_pricing",
    "tiny_oracle_comparison",
]
