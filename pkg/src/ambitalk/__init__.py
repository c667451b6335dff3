"""Robust cheap-talk toolkit.

Solves the receiver's KL-penalized worst-case decision problem on message
intervals, builds sender partition equilibria by forward shooting, and
runs welfare and ex-ante comparisons between the Bayesian and
ambiguity-averse regimes.  The ``ambitalk`` CLI exposes the same
operations over a flat key-value config.
"""

from .analysis import (
    ExAnteSolution,
    WelfareReport,
    compare_regimes,
    example1_signs,
    kl_decomposition_check,
    mirror_pairing_check,
    sender_welfare,
    solve_ex_ante,
)
from .density import (
    Density,
    Interval,
    ZeroMassError,
    kl_divergence,
    make_counterexample,
    make_piecewise_linear,
    make_truncated_normal,
    make_uniform,
    mean,
    mirror,
    restrict,
    variance,
)
from .numerics import (
    BracketError,
    DEFAULT_SPEC,
    NumericsError,
    QuadratureError,
    QuadratureSpec,
    find_root,
    integrate,
    log_integrate_exp,
    minimize_scalar,
)
from .partition import (
    PartitionEquilibrium,
    PartitionError,
    babbling_threshold,
    best_partition,
    max_intervals,
    next_threshold,
    solve_partition,
)
from .receiver import (
    AmbiguityLevel,
    BETA_FLOOR,
    EndpointLottery,
    ReceiverSolution,
    action_sweep,
    dual_objective,
    foc_residual,
    solve_action,
    worst_case_density,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityLevel",
    "BETA_FLOOR",
    "BracketError",
    "DEFAULT_SPEC",
    "Density",
    "EndpointLottery",
    "ExAnteSolution",
    "Interval",
    "NumericsError",
    "PartitionEquilibrium",
    "PartitionError",
    "QuadratureError",
    "QuadratureSpec",
    "ReceiverSolution",
    "WelfareReport",
    "ZeroMassError",
    "action_sweep",
    "babbling_threshold",
    "best_partition",
    "compare_regimes",
    "dual_objective",
    "example1_signs",
    "find_root",
    "foc_residual",
    "integrate",
    "kl_decomposition_check",
    "kl_divergence",
    "log_integrate_exp",
    "make_counterexample",
    "make_piecewise_linear",
    "make_truncated_normal",
    "make_uniform",
    "max_intervals",
    "mean",
    "minimize_scalar",
    "mirror",
    "mirror_pairing_check",
    "next_threshold",
    "restrict",
    "sender_welfare",
    "solve_action",
    "solve_ex_ante",
    "solve_partition",
    "variance",
    "worst_case_density",
]
