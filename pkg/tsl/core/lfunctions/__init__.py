from tsl.core.lfunctions.bounds import degree_bound_report
from tsl.core.lfunctions.fiber import (
    FiberL,
    fiber_determinant,
    fiber_L,
    fiber_l_polynomial,
    np_lower_bound,
    zero_fiber_L,
)
from tsl.core.lfunctions.global_l import GlobalLTruncation, global_L_truncated
from tsl.core.lfunctions.operations import OpSpec, op_char_poly, op_trace, op_traces, power_sums
from tsl.core.lfunctions.sums import (
    character_sum,
    conjugate_sums_agree,
    exp_sum,
    level_sum,
    multiparam_exp_sum,
    shift_character,
    zero_fiber_sum,
)

__all__ = [
    "FiberL",
    "GlobalLTruncation",
    "OpSpec",
    "character_sum",
    "conjugate_sums_agree",
    "degree_bound_report",
    "exp_sum",
    "fiber_determinant",
    "fiber_L",
    "fiber_l_polynomial",
    "global_L_truncated",
    "level_sum",
    "multiparam_exp_sum",
    "np_lower_bound",
    "op_char_poly",
    "op_trace",
    "op_traces",
    "power_sums",
    "shift_character",
    "zero_fiber_L",
    "zero_fiber_sum",
]
