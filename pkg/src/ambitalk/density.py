"""Probability densities on sub-intervals of [0, 1].

A :class:`Density` bundles a support interval, a vectorized pointwise
evaluator and the interior breakpoints where smoothness may fail, so that
quadrature can split there.  Densities are immutable after construction
and every constructor normalizes the evaluator to integrate to one.

Zero-density regions inside the support are legal (the smoothed step
family needs them); Kullback-Leibler integrands follow the 0*log(0) = 0
convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .numerics import DEFAULT_SPEC, QuadratureSpec, integrate

__all__ = [
    "Interval",
    "Density",
    "ZeroMassError",
    "make_uniform",
    "make_piecewise_linear",
    "make_truncated_normal",
    "make_counterexample",
    "restrict",
    "mean",
    "variance",
    "kl_divergence",
    "mirror",
]

# Mass below this at a restriction target is treated as zero: the adaptive
# quadrature cannot certify anything smaller than its absolute tolerance.
_MASS_FLOOR = 1e-12


class ZeroMassError(ValueError):
    """The restriction target carries no reference mass."""


@dataclass(frozen=True)
class Interval:
    """A non-degenerate sub-interval of [0, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (0.0 <= lo and hi <= 1.0):
            raise ValueError(f"interval [{lo}, {hi}] is not inside [0, 1]")
        if not lo < hi:
            raise ValueError(f"degenerate interval [{lo}, {hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, other: "Interval", tol: float = 1e-12) -> bool:
        return other.lo >= self.lo - tol and other.hi <= self.hi + tol


@dataclass(frozen=True, eq=False)
class Density:
    """Normalized density with known breakpoints; evaluates to 0 off-support."""

    support: Interval
    kind: str
    breakpoints: tuple
    pdf: Callable = field(repr=False)

    def __call__(self, theta):
        arr = np.asarray(theta, dtype=float)
        out = self.pdf(arr)
        if np.ndim(theta) == 0:
            return float(out)
        return out


def _clean_breakpoints(points, iv: Interval) -> tuple:
    out: list[float] = []
    for b in sorted(float(p) for p in points):
        if iv.lo + 1e-12 < b < iv.hi - 1e-12 and (not out or b - out[-1] > 1e-12):
            out.append(b)
    return tuple(out)


def _masked(fn, iv: Interval):
    lo, hi = iv.lo, iv.hi

    def pdf(theta):
        theta = np.asarray(theta, dtype=float)
        inside = (theta >= lo) & (theta <= hi)
        return np.where(inside, fn(np.clip(theta, lo, hi)), 0.0)

    return pdf


def _normalized(kind: str, fn, iv: Interval, breakpoints, spec: QuadratureSpec = DEFAULT_SPEC) -> Density:
    bps = _clean_breakpoints(breakpoints, iv)
    mass = integrate(fn, iv, bps, spec)
    if not mass > _MASS_FLOOR:
        raise ValueError(f"density has zero total mass on [{iv.lo}, {iv.hi}]")
    scale = 1.0 / mass
    return Density(iv, kind, bps, _masked(lambda t: scale * fn(t), iv))


def make_uniform(iv: Interval) -> Density:
    """Uniform density on ``iv``."""
    value = 1.0 / iv.width
    return Density(iv, "uniform", (), _masked(lambda t: np.full_like(t, value), iv))


def make_piecewise_linear(knots: Sequence[tuple[float, float]], iv: Interval) -> Density:
    """Linear interpolation through ``knots``, rescaled to unit mass on ``iv``.

    Knot abscissae must be strictly increasing and cover ``iv``; values must
    be nonnegative and not identically zero.
    """
    if len(knots) < 2:
        raise ValueError("need at least two knots")
    xs = np.array([float(k[0]) for k in knots])
    ys = np.array([float(k[1]) for k in knots])
    if np.any(np.diff(xs) <= 0):
        raise ValueError("knot abscissae must be strictly increasing")
    if np.any(ys < 0):
        raise ValueError(f"negative knot value {ys.min()}")
    if not np.any(ys > 0):
        raise ValueError("knot values are identically zero")
    if xs[0] > iv.lo + 1e-12 or xs[-1] < iv.hi - 1e-12:
        raise ValueError("knots do not cover the support interval")
    return _normalized("piecewise-linear", lambda t: np.interp(t, xs, ys), iv, xs)


def make_truncated_normal(h: float, sigma: float, iv: Interval) -> Density:
    """Normal bell with location ``h`` and scale ``sigma``, renormalized on ``iv``."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    h = float(h)
    sigma = float(sigma)
    return _normalized(
        f"truncated-normal(h={h:g}, sigma={sigma:g})",
        lambda t: np.exp(-0.5 * ((t - h) / sigma) ** 2),
        iv,
        (),
    )


# Plateau levels of the four-step profile and the jump locations between them.
_STEP_LEVELS = (0.0, 3.0, 0.0, 1.0)
_STEP_JUMPS = (0.25, 0.5, 0.75)


def _smoothstep(t):
    return t * t * (3.0 - 2.0 * t)


def make_counterexample(epsilon: float) -> Density:
    """Smooth version of the four-level step profile 0/3/0/1 on [0, 1].

    Each jump is replaced by a cubic Hermite blend on a window of half-width
    ``epsilon`` (matched values, zero slopes at the window edges), then the
    result is renormalized.  Its mean stays within O(epsilon^2) of 1/2 while
    the optimal robust action at moderate penalty levels moves strictly away
    from it, which is what this family is for.
    """
    eps = float(epsilon)
    if not 0.0 < eps < 0.125:
        raise ValueError(f"epsilon must lie in (0, 1/8), got {epsilon}")

    def fn(theta):
        theta = np.asarray(theta, dtype=float)
        out = np.select(
            [theta < _STEP_JUMPS[0], theta < _STEP_JUMPS[1], theta < _STEP_JUMPS[2]],
            _STEP_LEVELS[:3],
            default=_STEP_LEVELS[3],
        )
        for b, v_left, v_right in zip(_STEP_JUMPS, _STEP_LEVELS[:-1], _STEP_LEVELS[1:]):
            in_window = (theta >= b - eps) & (theta <= b + eps)
            t = np.clip((theta - (b - eps)) / (2.0 * eps), 0.0, 1.0)
            out = np.where(in_window, v_left + (v_right - v_left) * _smoothstep(t), out)
        return out

    edges = [b + s * eps for b in _STEP_JUMPS for s in (-1.0, 1.0)]
    return _normalized(f"counterexample(epsilon={eps:g})", fn, Interval(0.0, 1.0), edges)


def restrict(g: Density, iv: Interval, spec: QuadratureSpec = DEFAULT_SPEC) -> Density:
    """Bayesian update of ``g`` onto ``iv``: g(theta) / integral of g over iv.

    Raises :class:`ZeroMassError` when ``iv`` carries no reference mass,
    which signals that the message interval is null under the reference.
    """
    if not g.support.contains(iv):
        raise ValueError(f"[{iv.lo}, {iv.hi}] is not contained in the support of {g.kind}")
    bps = _clean_breakpoints(g.breakpoints, iv)
    mass = integrate(g.pdf, iv, bps, spec)
    if not mass > _MASS_FLOOR:
        raise ZeroMassError(f"reference mass on [{iv.lo}, {iv.hi}] is zero")
    scale = 1.0 / mass
    return Density(iv, g.kind, bps, _masked(lambda t: scale * g.pdf(t), iv))


def mean(f: Density, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """First moment of ``f`` over its support."""
    return integrate(lambda t: t * f.pdf(t), f.support, f.breakpoints, spec)


def variance(f: Density, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    m = mean(f, spec)
    second = integrate(lambda t: t * t * f.pdf(t), f.support, f.breakpoints, spec)
    return max(second - m * m, 0.0)


def _kl_integral(f_pdf, g_pdf, iv, breakpoints, spec: QuadratureSpec) -> float:
    """Integral of f*log(f/g) with 0*log(0) = 0; +inf when f charges a g-null set."""
    violated = False

    def integrand(theta):
        nonlocal violated
        fv = f_pdf(theta)
        gv = g_pdf(theta)
        if np.any((fv > 0.0) & (gv <= 0.0)):
            violated = True
        pos = (fv > 0.0) & (gv > 0.0)
        safe_f = np.where(pos, fv, 1.0)
        safe_g = np.where(pos, gv, 1.0)
        return np.where(pos, fv * (np.log(safe_f) - np.log(safe_g)), 0.0)

    value = integrate(integrand, iv, breakpoints, spec)
    return math.inf if violated else value


def kl_divergence(f: Density, g: Density, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Relative entropy of ``f`` with respect to ``g`` on their common support.

    Returns the +inf sentinel if ``f`` is positive somewhere ``g`` vanishes
    (detected at the quadrature nodes).
    """
    if abs(f.support.lo - g.support.lo) > 1e-12 or abs(f.support.hi - g.support.hi) > 1e-12:
        raise ValueError("densities must share the same support")
    bps = _clean_breakpoints(set(f.breakpoints) | set(g.breakpoints), f.support)
    return _kl_integral(f.pdf, g.pdf, f.support, bps, spec)


def mirror(g: Density) -> Density:
    """Reflection of ``g`` about its support midpoint: theta -> lo + hi - theta."""
    s = g.support.lo + g.support.hi
    bps = tuple(sorted(s - b for b in g.breakpoints))
    fn = _masked(lambda t: g.pdf(s - np.asarray(t, dtype=float)), g.support)
    return Density(g.support, f"mirror({g.kind})", bps, fn)
