from .bounds import (
    BoundReport, bound_report, cumulative_bound, linearized_bound,
    per_butterfly_bound, reproduce_table1, reproduce_table2,
)
from .measure import (
    ButterflyConstantReport, ErrorReport, measure_error,
    observe_butterfly_constant, random_inputs, relative_l2_error,
)
from .verify import CheckResult, run_verification

__all__ = [
    "BoundReport",
    "ButterflyConstantReport",
    "CheckResult",
    "ErrorReport",
    "bound_report",
    "cumulative_bound",
    "linearized_bound",
    "measure_error",
    "observe_butterfly_constant",
    "per_butterfly_bound",
    "random_inputs",
    "relative_l2_error",
    "reproduce_table1",
    "reproduce_table2",
    "run_verification",
]
