"""Independent brute-force checks for the analytical solvers.

Nothing here shares a code path with the solvers it validates: action
grids are minimized by exhaustive evaluation (no bracketing), integrals
use composite Simpson rules (not Gauss-Legendre), and the discrete inner
problem is searched over an explicit simplex grid.  Golden values frozen
from these routines live in ``data/golden_values.txt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .density import Density, Interval

__all__ = [
    "GridSpec",
    "GoldenRecord",
    "grid_action",
    "discrete_inner_min",
    "discrete_tilt_weights",
    "cs_uniform_thresholds",
    "endpoint_lottery_value",
    "load_golden",
]

_SIMPSON_NODES = 257  # odd node count per smooth segment
_ACTION_CHUNK = 256  # rows of the (action x node) tilt matrix held at once
_MAX_SIMPLEX_POINTS = 2_000_000


@dataclass(frozen=True)
class GridSpec:
    """Grid resolution: action-grid point count, or steps per simplex axis."""

    n_points: int = 100_000

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError("n_points must be at least 3")


@dataclass(frozen=True)
class GoldenRecord:
    case_id: str
    inputs: str
    value: float
    oracle: str
    resolution: float


def _simpson_grid(lo: float, hi: float, breakpoints) -> tuple[np.ndarray, np.ndarray]:
    xs, ws = [], []
    edges = [lo] + [float(b) for b in sorted(breakpoints) if lo < b < hi] + [hi]
    for a, b in zip(edges[:-1], edges[1:]):
        t = np.linspace(a, b, _SIMPSON_NODES)
        h = (b - a) / (_SIMPSON_NODES - 1)
        w = np.ones(_SIMPSON_NODES)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        xs.append(t)
        ws.append(w * (h / 3.0))
    return np.concatenate(xs), np.concatenate(ws)


def grid_action(g_m: Density, iv: Interval, beta: float, grid: GridSpec = GridSpec()) -> float:
    """Minimizer of log J(a) over a uniform action grid; no refinement.

    Ties break to the lowest grid index.  The per-action log is evaluated
    with a row-wise max shift so small penalties do not overflow.
    """
    if not beta > 0:
        raise ValueError("beta must be strictly positive")
    actions = np.linspace(iv.lo, iv.hi, grid.n_points)
    theta, w = _simpson_grid(iv.lo, iv.hi, g_m.breakpoints)
    wg = w * g_m(theta)
    best_val = math.inf
    best_a = actions[0]
    for start in range(0, len(actions), _ACTION_CHUNK):
        block = actions[start : start + _ACTION_CHUNK]
        expo = (theta[None, :] - block[:, None]) ** 2 / beta
        top = expo.max(axis=1, keepdims=True)
        logj = top[:, 0] + np.log(np.exp(expo - top) @ wg)
        i = int(np.argmin(logj))
        if logj[i] < best_val:
            best_val = float(logj[i])
            best_a = float(block[i])
    return best_a


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head, *tail)


def discrete_tilt_weights(g_weights, support_points, a: float, beta: float) -> np.ndarray:
    """Closed-form worst case at discrete scale: f_j proportional to g_j * exp((theta_j - a)^2 / beta)."""
    g = np.asarray(g_weights, dtype=float)
    pts = np.asarray(support_points, dtype=float)
    raw = g * np.exp((pts - a) ** 2 / beta)
    return raw / raw.sum()


def discrete_inner_min(
    g_weights, support_points, a: float, beta: float, grid: GridSpec = GridSpec(n_points=40)
) -> tuple[np.ndarray, float]:
    """Exhaustive simplex-grid minimizer of E_f[v] + beta * KL(f, g).

    Restricted to at most four support points so the grid stays tractable;
    ties break to the first composition in lexicographic order.
    """
    g = np.asarray(g_weights, dtype=float)
    pts = np.asarray(support_points, dtype=float)
    if len(g) != len(pts) or len(pts) < 2 or len(pts) > 4:
        raise ValueError("need between two and four support points")
    if np.any(g <= 0):
        raise ValueError("degenerate weights: reference must be strictly positive")
    if abs(g.sum() - 1.0) > 1e-10:
        raise ValueError("reference weights must sum to one")
    k = grid.n_points
    if math.comb(k + len(pts) - 1, len(pts) - 1) > _MAX_SIMPLEX_POINTS:
        raise ValueError("simplex grid too large; lower n_points")
    losses = -((a - pts) ** 2)
    log_g = np.log(g)
    best_f = None
    best_val = math.inf
    for counts in _compositions(k, len(pts)):
        f = np.array(counts, dtype=float) / k
        pos = f > 0
        klv = float(np.sum(f[pos] * (np.log(f[pos]) - log_g[pos])))
        val = float(f @ losses) + beta * klv
        if val < best_val:
            best_val = val
            best_f = f
    return best_f, best_val


def cs_uniform_thresholds(d: float, n: int) -> list[float]:
    """Closed-form uniform-reference thresholds t_i = i/n + 2 d i (i - n).

    Feasible only while every interior threshold stays strictly inside
    (0, 1), i.e. 2 n (n - 1) d < 1.
    """
    if not d > 0:
        raise ValueError("bias d must be strictly positive")
    if n < 1:
        raise ValueError("need at least one interval")
    thresholds = [i / n + 2.0 * d * i * (i - n) for i in range(n + 1)]
    interior = thresholds[1:-1]
    if any(not 0.0 < t < 1.0 for t in interior) or any(
        b - a <= 0 for a, b in zip(thresholds[:-1], thresholds[1:])
    ):
        raise ValueError(f"(d={d}, n={n}) is infeasible for the uniform reference")
    return thresholds


def endpoint_lottery_value(iv: Interval, a: float) -> float:
    """Worst expected -(a - theta)^2 over endpoint lotteries: the far endpoint wins."""
    if not iv.lo <= a <= iv.hi:
        raise ValueError("action must lie inside the interval")
    return -max((a - iv.lo) ** 2, (iv.hi - a) ** 2)


def load_golden() -> dict[str, GoldenRecord]:
    """Parse the frozen oracle fixture shipped with the package."""
    text = resources.files("ambitalk").joinpath("data/golden_values.txt").read_text()
    records: dict[str, GoldenRecord] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        case_id, inputs, value, oracle_name, resolution = (p.strip() for p in line.split("|"))
        records[case_id] = GoldenRecord(case_id, inputs, float(value), oracle_name, float(resolution))
    return records
