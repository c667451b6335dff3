"""Sender partition equilibria via forward shooting.

A partition 0 = t_0 < t_1 < ... < t_N = 1 with induced actions a_1..a_N is
an equilibrium when every interior threshold type is indifferent between
the two adjacent actions: a_i + a_{i+1} = 2 (t_i + d).  The first interior
threshold is the shooting variable; the chain of indifference conditions
pins down the rest, and the miss t_N(t_1) - 1 is driven to zero by
bracketed root finding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .density import Density, Interval, ZeroMassError, restrict
from .numerics import BracketError, DEFAULT_SPEC, QuadratureSpec, find_root, integrate
from .receiver import BETA_FLOOR, AmbiguityLevel, ReceiverSolution, solve_action

__all__ = [
    "PartitionError",
    "PartitionEquilibrium",
    "next_threshold",
    "solve_partition",
    "best_partition",
    "max_intervals",
    "babbling_threshold",
]

_CHAIN_DEAD = 1e6  # miss-function sentinel: the threshold chain left [0, 1]
_EDGE_TOL = 1e-9  # boundary-tie tolerance on required vs feasible actions
_INDIFF_TOL = 1e-6


class PartitionError(RuntimeError):
    """Solver failure with diagnostics, distinct from clean non-existence."""


@dataclass(frozen=True)
class PartitionEquilibrium:
    thresholds: tuple
    actions: tuple
    bias: float
    level: AmbiguityLevel
    per_interval: tuple

    @property
    def n_intervals(self) -> int:
        return len(self.actions)

    def intervals(self) -> list[Interval]:
        return [Interval(lo, hi) for lo, hi in zip(self.thresholds[:-1], self.thresholds[1:])]

    def indifference_residuals(self) -> list[float]:
        return [
            self.actions[i] + self.actions[i + 1] - 2.0 * (self.thresholds[i + 1] + self.bias)
            for i in range(self.n_intervals - 1)
        ]


def _midpoint_level(level: AmbiguityLevel) -> bool:
    return level.mode == "full" or (level.mode == "finite" and level.beta < BETA_FLOOR)


def _induced_action(g: Density, lo: float, hi: float, level: AmbiguityLevel, spec: QuadratureSpec) -> float:
    """Receiver's action on [lo, hi]; may raise ZeroMassError for null intervals."""
    if _midpoint_level(level):
        return 0.5 * (lo + hi)
    if level.mode == "bayesian":
        # Conditional mean without building the restricted density.
        bps = [b for b in g.breakpoints if lo < b < hi]
        m0 = integrate(g.pdf, (lo, hi), bps, spec)
        if not m0 > 1e-12:
            raise ZeroMassError(f"reference mass on [{lo}, {hi}] is zero")
        m1 = integrate(lambda t: t * g.pdf(t), (lo, hi), bps, spec)
        return m1 / m0
    iv = Interval(lo, hi)
    return solve_action(restrict(g, iv, spec), iv, level, spec).action


def _next_from(
    a_cur: float,
    theta_cur: float,
    g: Density,
    d: float,
    level: AmbiguityLevel,
    spec: QuadratureSpec,
) -> Optional[float]:
    """Next threshold from the indifference a_cur + a_next = 2 (theta_cur + d)."""
    required = 2.0 * (theta_cur + d) - a_cur
    if _midpoint_level(level):
        theta_next = 2.0 * required - theta_cur
        if theta_next > 1.0 + _EDGE_TOL:
            return None
        return min(theta_next, 1.0)
    top = _induced_action(g, theta_cur, 1.0, level, spec)
    if required > top + _EDGE_TOL:
        return None
    if required >= top - _EDGE_TOL:
        return 1.0

    def gap(x):
        try:
            return _induced_action(g, theta_cur, x, level, spec) - required
        except ZeroMassError:
            # No mass yet: the interval cannot induce the required action.
            return required - 2.0  # negative sentinel below any feasible gap

    try:
        return find_root(gap, (theta_cur + 1e-9, 1.0), tol=1e-12)
    except BracketError as exc:
        raise PartitionError(f"threshold bracket failed after {theta_cur:.6g}: {exc}") from exc


def next_threshold(
    theta_prev: float,
    theta_cur: float,
    g: Density,
    d: float,
    level: AmbiguityLevel,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> Optional[float]:
    """Threshold after ``theta_cur`` given the previous one, or None if infeasible."""
    if not 0.0 <= theta_prev < theta_cur < 1.0:
        raise ValueError("need 0 <= theta_prev < theta_cur < 1")
    a_cur = _induced_action(g, theta_prev, theta_cur, level, spec)
    return _next_from(a_cur, theta_cur, g, d, level, spec)


def _chain(theta1: float, g: Density, d: float, n: int, level: AmbiguityLevel, spec) -> Optional[list[float]]:
    thresholds = [0.0, theta1]
    a_cur = _induced_action(g, 0.0, theta1, level, spec)
    for step in range(n - 1):
        nxt = _next_from(a_cur, thresholds[-1], g, d, level, spec)
        if nxt is None or nxt <= thresholds[-1]:
            return None
        last_step = step == n - 2
        if not last_step:
            if nxt >= 1.0 - 1e-12:  # an interior threshold hit the boundary
                return None
            a_cur = _induced_action(g, thresholds[-1], nxt, level, spec)
        thresholds.append(nxt)
    return thresholds


def _assemble(g, d, level, interior, spec) -> PartitionEquilibrium:
    thresholds = (0.0, *interior, 1.0)
    solutions: list[ReceiverSolution] = []
    for lo, hi in zip(thresholds[:-1], thresholds[1:]):
        iv = Interval(lo, hi)
        solutions.append(solve_action(restrict(g, iv, spec), iv, level, spec))
    actions = tuple(s.action for s in solutions)
    eq = PartitionEquilibrium(thresholds, actions, d, level, tuple(solutions))
    gaps = np.diff(actions)
    if len(gaps) and (gaps.min() < d - 1e-6):
        raise PartitionError(f"adjacent actions closer than the bias: min gap {gaps.min():.3g}")
    resid = max((abs(r) for r in eq.indifference_residuals()), default=0.0)
    if resid > _INDIFF_TOL:
        raise PartitionError(f"indifference residual {resid:.3g} above {_INDIFF_TOL}")
    return eq


def solve_partition(
    g: Density,
    d: float,
    n: int,
    level: AmbiguityLevel,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> Optional[PartitionEquilibrium]:
    """Equilibrium with exactly ``n`` intervals, or None when none exists."""
    if not d > 0:
        raise ValueError("bias d must be strictly positive")
    if n < 1:
        raise ValueError("need at least one interval")
    if abs(g.support.lo) > 1e-12 or abs(g.support.hi - 1.0) > 1e-12:
        raise ValueError("partition construction expects a reference on [0, 1]")
    if n == 1:
        return _assemble(g, d, level, (), spec)

    def miss(theta1):
        try:
            chain = _chain(theta1, g, d, n, level, spec)
        except ZeroMassError:
            return _CHAIN_DEAD
        if chain is None:
            return _CHAIN_DEAD
        return chain[-1] - 1.0

    lo, hi = 1e-6, 1.0 - 1e-6
    m_lo, m_hi = miss(lo), miss(hi)
    bracket = None
    if m_lo < 0.0 <= m_hi:
        bracket = (lo, hi)
    else:
        # Scan for a sign change; zero-mass gaps in g can make miss jump.
        grid = np.linspace(lo, hi, 33)
        vals = [miss(t) for t in grid]
        for t1, t2, v1, v2 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if v1 < 0.0 <= v2:
                bracket = (float(t1), float(t2))
                break
    if bracket is None:
        return None
    theta1 = find_root(miss, bracket, tol=1e-11)
    chain = _chain(theta1, g, d, n, level, spec)
    if chain is None:
        raise PartitionError("threshold chain died at the fitted shooting variable")
    if abs(chain[-1] - 1.0) > 1e-5:
        return None
    return _assemble(g, d, level, tuple(chain[1:-1]), spec)


def best_partition(
    g: Density, d: float, level: AmbiguityLevel, spec: QuadratureSpec = DEFAULT_SPEC
) -> PartitionEquilibrium:
    """Most informative equilibrium: largest n for which one exists."""
    cap = int(1.0 / (2.0 * d)) + 2  # adjacent actions are separated by >= 2d
    best = None
    for n in range(1, cap + 1):
        eq = solve_partition(g, d, n, level, spec)
        if eq is None:
            break
        best = eq
    if best is None:
        raise PartitionError("babbling equilibrium missing; reference may be degenerate")
    return best


def max_intervals(g: Density, d: float, level: AmbiguityLevel, spec: QuadratureSpec = DEFAULT_SPEC) -> int:
    """Largest interval count supported by ``(g, d, level)``."""
    return best_partition(g, d, level, spec).n_intervals


def babbling_threshold(
    g: Density, level: AmbiguityLevel, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = 1e-6
) -> float:
    """Largest bias that still admits a two-interval equilibrium, by bisection."""

    def exists(d):
        return solve_partition(g, d, 2, level, spec) is not None

    lo, hi = 1e-6, 0.5 + 1e-6
    if not exists(lo):
        return lo
    if exists(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if exists(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
