"""Quadrature and scalar search primitives shared by every solver module.

Integrals use composite Gauss-Legendre rules per smooth segment (segments
split at density breakpoints), adaptively halved until two successive
estimates agree.  Strongly peaked integrands go through
``log_integrate_exp``, which never leaves the log domain, so exponents of
several hundred are routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "QuadratureSpec",
    "DEFAULT_SPEC",
    "NumericsError",
    "QuadratureError",
    "BracketError",
    "integrate",
    "log_integrate_exp",
    "minimize_scalar",
    "find_root",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class NumericsError(RuntimeError):
    """Base class for quadrature and scalar search failures."""


class QuadratureError(NumericsError):
    """Non-finite integrand value or refinement limit exhausted."""


class BracketError(NumericsError):
    """Root bracket carries no sign change."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Node count and tolerances for adaptive composite quadrature."""

    nodes_per_segment: int = 64
    refinement_limit: int = 14
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10

    def __post_init__(self):
        if self.nodes_per_segment < 2:
            raise ValueError("nodes_per_segment must be at least 2")
        if self.refinement_limit < 1:
            raise ValueError("refinement_limit must be at least 1")
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("tolerances must be positive")


DEFAULT_SPEC = QuadratureSpec()


def _bounds(iv) -> tuple[float, float]:
    """Accept an Interval-like object or a (lo, hi) pair."""
    if hasattr(iv, "lo"):
        return float(iv.lo), float(iv.hi)
    lo, hi = iv
    return float(lo), float(hi)


@lru_cache(maxsize=None)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=256)
def _grid(lo: float, hi: float, breakpoints: tuple, splits: int, n: int):
    """Composite nodes/weights with each smooth segment halved `splits` times."""
    x, w = _leggauss(n)
    edges = [lo]
    for b in breakpoints:
        if edges[-1] + 1e-14 < b < hi - 1e-14:
            edges.append(float(b))
    edges.append(hi)
    xs, ws = [], []
    m = 2**splits
    for a, b in zip(edges[:-1], edges[1:]):
        sub = np.linspace(a, b, m + 1)
        c = 0.5 * (sub[:-1] + sub[1:])
        h = 0.5 * (sub[1:] - sub[:-1])
        xs.append((c[:, None] + h[:, None] * x).ravel())
        ws.append((h[:, None] * w).ravel())
    return np.concatenate(xs), np.concatenate(ws)


def _values(fn, xs: np.ndarray) -> np.ndarray:
    """Evaluate fn on a node array, falling back to a scalar loop."""
    out = None
    try:
        out = np.asarray(fn(xs), dtype=float)
    except (TypeError, ValueError):
        out = None
    if out is None or out.shape != xs.shape:
        out = np.array([float(fn(float(t))) for t in xs])
    return out


def integrate(fn, iv, breakpoints=(), spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integrate ``fn`` over ``iv``, splitting segments at ``breakpoints``."""
    lo, hi = _bounds(iv)
    bps = tuple(sorted(float(b) for b in breakpoints))
    prev = None
    for level in range(spec.refinement_limit + 1):
        xs, ws = _grid(lo, hi, bps, level, spec.nodes_per_segment)
        vals = _values(fn, xs)
        bad = ~np.isfinite(vals)
        if bad.any():
            raise QuadratureError(f"non-finite integrand value at theta={xs[bad][0]!r}")
        est = float(ws @ vals)
        if prev is not None and abs(est - prev) <= max(spec.abs_tol, spec.rel_tol * abs(est)):
            return est
        prev = est
    raise QuadratureError("refinement limit exceeded without convergence")


def log_integrate_exp(logfn, iv, breakpoints=(), spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Return ``log(integral of exp(logfn))`` computed in the log domain.

    Node values of ``-inf`` are allowed (zero integrand there); ``+inf`` and
    NaN are not.  The node maximum is shifted out before exponentiating, the
    standard log-sum-exp guard.
    """
    lo, hi = _bounds(iv)
    bps = tuple(sorted(float(b) for b in breakpoints))
    prev = None
    for level in range(spec.refinement_limit + 1):
        xs, ws = _grid(lo, hi, bps, level, spec.nodes_per_segment)
        vals = _values(logfn, xs)
        if np.isnan(vals).any() or (vals == np.inf).any():
            raise QuadratureError("log-integrand must be finite or -inf at every node")
        top = float(vals.max())
        if top == -math.inf:
            raise QuadratureError("integrand vanishes at every quadrature node")
        est = top + math.log(float(ws @ np.exp(vals - top)))
        if prev is not None and abs(est - prev) <= max(spec.abs_tol, spec.rel_tol * abs(est)):
            return est
        prev = est
    raise QuadratureError("refinement limit exceeded without convergence")


def _parabola_vertex(x1, x2, x3, f1, f2, f3):
    num = (x2 - x1) ** 2 * (f2 - f3) - (x2 - x3) ** 2 * (f2 - f1)
    den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1)
    if abs(den) < 1e-300:
        return None
    return x2 - 0.5 * num / den


def minimize_scalar(fn, iv, tol: float = 1e-10, max_iter: int = 500) -> tuple[float, float]:
    """Golden-section search with a parabolic polish; returns ``(x, fn(x))``.

    Assumes ``fn`` is continuous and unimodal on ``iv``.  Boundary minima
    are honored by comparing against the endpoint values.
    """
    lo, hi = _bounds(iv)

    def f(x):
        v = float(fn(x))
        if not math.isfinite(v):
            raise NumericsError(f"non-finite objective value at x={x!r}")
        return v

    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol and it < max_iter:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        it += 1
    x_best, f_best = (c, fc) if fc <= fd else (d, fd)
    if a < x_best < b:
        xv = _parabola_vertex(a, x_best, b, f(a), f_best, f(b))
        if xv is not None and lo < xv < hi:
            fv = f(xv)
            if fv < f_best:
                x_best, f_best = xv, fv
    for xe in (lo, hi):
        fe = f(xe)
        if fe < f_best:
            x_best, f_best = xe, fe
    return x_best, f_best


def find_root(fn, bracket, tol: float = 1e-12, max_iter: int = 256) -> float:
    """Bracketed bisection/secant hybrid with Illinois damping on stale ends.

    Stops when ``|fn(x)| <= tol`` or the bracket width drops below ``tol``.
    Every fourth step bisects, so convergence is guaranteed even when the
    function jumps to large sentinel values inside the bracket.
    """
    a, b = float(bracket[0]), float(bracket[1])
    if not a < b:
        raise ValueError("bracket must satisfy lo < hi")

    def f(x):
        v = float(fn(x))
        if math.isnan(v) or math.isinf(v):
            raise NumericsError(f"non-finite function value at x={x!r}")
        return v

    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise BracketError(f"no sign change on [{a:.6g}, {b:.6g}]: f() = {fa:.3g}, {fb:.3g}")
    side = 0
    for it in range(max_iter):
        w = b - a
        if w <= tol:
            break
        x = None
        if it % 4 != 3 and abs(fb - fa) > 1e-300:
            s = b - fb * (b - a) / (fb - fa)
            if a + 0.01 * w <= s <= b - 0.01 * w:
                x = s
        if x is None:
            x = 0.5 * (a + b)
        fx = f(x)
        if fx == 0.0 or abs(fx) <= tol:
            return x
        if (fx > 0.0) == (fa > 0.0):
            a, fa = x, fx
            if side == -1:
                fb *= 0.5
            side = -1
        else:
            b, fb = x, fx
            if side == 1:
                fa *= 0.5
            side = 1
    return 0.5 * (a + b)
