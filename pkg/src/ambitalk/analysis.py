"""Welfare comparisons between regimes and the ex-ante robust solution.

The sender's welfare under an equilibrium is the partition-weighted
expectation of -(a_i - theta - d)^2 against the sender's own prior.  The
ex-ante problem decomposes interval by interval: nature picks the interval
with the smallest maximized normalizer, and the receiver's conditional
actions coincide with her interval-by-interval (posterior) actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .density import (
    Density,
    Interval,
    _clean_breakpoints,
    _kl_integral,
    kl_divergence,
    make_truncated_normal,
    mean,
    mirror,
    restrict,
)
from .numerics import DEFAULT_SPEC, QuadratureSpec, integrate
from .partition import PartitionEquilibrium, best_partition
from .receiver import AmbiguityLevel, solve_action

__all__ = [
    "WelfareReport",
    "ExAnteSolution",
    "sender_welfare",
    "compare_regimes",
    "mirror_pairing_check",
    "example1_signs",
    "solve_ex_ante",
    "kl_decomposition_check",
]

_VERDICT_TOL = 1e-10


@dataclass(frozen=True)
class WelfareReport:
    sender_prior: Density
    u_bayes: float
    u_amb: float
    d: float
    beta: float
    per_interval_action_shift: tuple
    verdict: str


@dataclass(frozen=True)
class ExAnteSolution:
    partition: PartitionEquilibrium
    c_star: tuple
    worst_interval: int
    p_hat: tuple
    value: float
    conditional_actions: tuple


def sender_welfare(
    eq: PartitionEquilibrium,
    sender_prior: Density,
    d: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Expected sender payoff -(a - theta - d)^2 under the prior, per interval."""
    total = 0.0
    for iv, a in zip(eq.intervals(), eq.actions):
        bps = [b for b in sender_prior.breakpoints if iv.lo < b < iv.hi]
        total += integrate(
            lambda t, a=a: -((a - t - d) ** 2) * sender_prior.pdf(t), iv, bps, spec
        )
    return total


def compare_regimes(
    g: Density,
    sender_prior: Optional[Density],
    d: float,
    beta: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> WelfareReport:
    """Sender welfare at each regime's most informative equilibrium.

    Action shifts are recorded on the ambiguity equilibrium's own intervals:
    shift_i = a_i - conditional mean of the reference there, so a positive
    shift means the penalty moved the receiver up relative to Bayes.
    """
    prior = sender_prior if sender_prior is not None else g
    eq_b = best_partition(g, d, AmbiguityLevel.bayesian(), spec)
    eq_a = best_partition(g, d, AmbiguityLevel.finite(beta), spec)
    u_b = sender_welfare(eq_b, prior, d, spec)
    u_a = sender_welfare(eq_a, prior, d, spec)
    shifts = tuple(
        sol.action - mean(restrict(g, iv, spec), spec)
        for iv, sol in zip(eq_a.intervals(), eq_a.per_interval)
    )
    if u_a > u_b + _VERDICT_TOL:
        verdict = "better"
    elif u_a < u_b - _VERDICT_TOL:
        verdict = "worse"
    else:
        verdict = "equal"
    return WelfareReport(prior, u_b, u_a, d, beta, shifts, verdict)


def mirror_pairing_check(
    g: Density,
    sender_prior: Optional[Density],
    d: float,
    beta: float,
    tol: float = 1e-6,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> bool:
    """Reflecting the reference (and prior) must flip the action shifts.

    This is the mechanically checkable content of the pairing between
    references that help the sender and references that hurt him.
    """
    report = compare_regimes(g, sender_prior, d, beta, spec)
    prior_m = mirror(sender_prior) if sender_prior is not None else None
    report_m = compare_regimes(mirror(g), prior_m, d, beta, spec)
    if len(report.per_interval_action_shift) != len(report_m.per_interval_action_shift):
        return False
    flipped = tuple(reversed(report_m.per_interval_action_shift))
    return all(
        abs(s + t) <= tol for s, t in zip(report.per_interval_action_shift, flipped)
    )


def example1_signs(
    h: float,
    sigma: float,
    beta: float,
    iv: Interval,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> tuple[int, str]:
    """Sign of a* - h for a truncated-normal reference, with its regime cell.

    Cells are (location vs midpoint) x (penalty vs 2 sigma^2); the returned
    sign is +1, -1 or 0 for the solved action relative to the location h.
    """
    g = make_truncated_normal(h, sigma, iv)
    a = solve_action(g, iv, AmbiguityLevel.finite(beta), spec).action
    mid = iv.midpoint
    loc = "h<m" if h < mid else ("h>m" if h > mid else "h=m")
    pen = "beta>2sigma^2" if beta > 2.0 * sigma**2 else "beta<2sigma^2"
    gap = a - h
    sign = 1 if gap > 0 else (-1 if gap < 0 else 0)
    return sign, f"{loc},{pen}"


def solve_ex_ante(
    g: Density,
    eq: PartitionEquilibrium,
    beta: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> ExAnteSolution:
    """Ex-ante robust solution over the intervals of ``eq`` at penalty ``beta``.

    Per interval the interval-level problem is re-solved; nature's weights
    land entirely on the interval with the smallest maximized normalizer
    (ties break to the lowest index), and the value is beta times that
    normalizer.
    """
    if not beta > 0:
        raise ValueError("beta must be strictly positive")
    level = AmbiguityLevel.finite(beta)
    solutions = [solve_action(restrict(g, iv, spec), iv, level, spec) for iv in eq.intervals()]
    c_star = tuple(s.normalizer for s in solutions)
    worst = int(np.argmin(c_star))
    p_hat = tuple(1.0 if i == worst else 0.0 for i in range(len(c_star)))
    return ExAnteSolution(
        partition=eq,
        c_star=c_star,
        worst_interval=worst,
        p_hat=p_hat,
        value=beta * c_star[worst],
        conditional_actions=tuple(s.action for s in solutions),
    )


def kl_decomposition_check(
    weights: Sequence[float],
    f_parts: Sequence[Density],
    g_parts: Sequence[Density],
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> tuple[float, float]:
    """Mixture relative entropy vs its interval decomposition, independently.

    The parts must tile [0, 1] with pairwise disjoint supports and the same
    weights apply to both mixtures.  Returns (mixture KL, sum of weighted
    per-part KLs); the two are equal in exact arithmetic.
    """
    w = [float(x) for x in weights]
    if len(w) != len(f_parts) or len(w) != len(g_parts):
        raise ValueError("weights and parts must have matching lengths")
    if any(x < -1e-15 for x in w) or abs(sum(w) - 1.0) > 1e-10:
        raise ValueError("weights must form a probability vector")
    order = sorted(range(len(w)), key=lambda i: f_parts[i].support.lo)
    edge = 0.0
    for i in order:
        fi, gi = f_parts[i], g_parts[i]
        if abs(fi.support.lo - gi.support.lo) > 1e-12 or abs(fi.support.hi - gi.support.hi) > 1e-12:
            raise ValueError("paired parts must share supports")
        if fi.support.lo < edge - 1e-12:
            raise ValueError("part supports overlap")
        if abs(fi.support.lo - edge) > 1e-12:
            raise ValueError("part supports leave a gap; they must tile [0, 1]")
        edge = fi.support.hi
    if abs(edge - 1.0) > 1e-12:
        raise ValueError("part supports must reach 1")

    def mix(parts):
        def pdf(theta):
            theta = np.asarray(theta, dtype=float)
            out = np.zeros_like(theta)
            for wi, di in zip(w, parts):
                if wi > 0.0:
                    out = out + wi * di.pdf(theta)
            return out

        return pdf

    full = Interval(0.0, 1.0)
    cuts = set()
    for di in list(f_parts) + list(g_parts):
        cuts.add(di.support.lo)
        cuts.add(di.support.hi)
        cuts.update(di.breakpoints)
    lhs = _kl_integral(mix(f_parts), mix(g_parts), full, _clean_breakpoints(cuts, full), spec)
    rhs = 0.0
    for wi, fi, gi in zip(w, f_parts, g_parts):
        if wi > 0.0:
            rhs += wi * kl_divergence(fi, gi, spec)
    return lhs, rhs
