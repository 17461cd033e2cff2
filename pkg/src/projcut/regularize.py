"""Smoothing of bounded functions on P^k by averaging over automorphisms.

An evaluator is smoothed by drawing S traceless matrices x_j from the unit
mollifier once, freezing the group elements g_j = exp_chart(theta * x_j), and
returning the average of f over the moved points.  The frozen sample (common
random numbers) is the load-bearing choice: it makes the Monte-Carlo average
a single smooth function of the evaluation point, so finite differences see
the smooth limit instead of resampling noise.

Functions on P^k are represented as vectorised evaluators on stacked
homogeneous rows:

    f(rows: (m, k+1) complex ndarray) -> (m,) float ndarray with values in [0, 1]

Rows are arbitrary nonzero homogeneous representatives; evaluators normalise
internally where needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import StepTooSmall
from .geometry import ChartCoordinates, ProjectivePoint
from .lie import _expm, _normalize_stack
from .measure import MollifierSpec, ScaledMeasure, sample_matrices

FunctionOnP = Callable[[np.ndarray], np.ndarray]

EVAL_CHUNK = 2048


def regularize(f: FunctionOnP, theta: float, S: int, seed, mollifier: MollifierSpec) -> "RegularizedFunction":
    """Freeze S group elements exp_chart(theta * x_j), x_j drawn once from the
    unit-scale mollifier, and return the averaging evaluator.

    theta = 0 returns the pass-through evaluator (the Dirac case).  The same
    seed yields the same x_j for every theta, so evaluators at different
    scales share their randomness.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if S < 1:
        raise ValueError("S must be at least 1")
    d = mollifier.k + 1
    if theta == 0.0:
        mats = np.zeros((0, d, d), dtype=np.complex128)
    else:
        x = sample_matrices(ScaledMeasure(mollifier, 1.0), S, seed)
        mats = _normalize_stack(_expm(theta * x))
    mats.setflags(write=False)
    return RegularizedFunction(source=f, theta=float(theta), matrices=mats,
                               sample_seed=seed, S=int(S))


@dataclass(frozen=True, eq=False)
class RegularizedFunction:
    """Frozen-sample smoothing of a bounded evaluator.

    ``matrices`` holds the S stored group elements, shape (S, k+1, k+1)
    (empty for the pass-through case theta = 0).  Evaluation is
    deterministic: the same (seed, S, theta, point) gives the same value
    bit for bit.
    """

    source: FunctionOnP
    theta: float
    matrices: np.ndarray
    sample_seed: int
    S: int

    def eval_homog(self, rows) -> np.ndarray:
        """Average of f over the moved points, for stacked homogeneous rows."""
        Z = np.asarray(rows, dtype=np.complex128)
        if Z.ndim != 2:
            raise ValueError("expected stacked homogeneous rows of shape (m, k+1)")
        if self.theta == 0.0:
            return np.asarray(self.source(Z), dtype=np.float64)
        m = Z.shape[0]
        total = np.zeros(m)
        for lo in range(0, self.matrices.shape[0], EVAL_CHUNK):
            g = self.matrices[lo:lo + EVAL_CHUNK]
            images = np.einsum("sij,mj->smi", g, Z)
            vals = np.asarray(self.source(images.reshape(-1, Z.shape[1])), dtype=np.float64)
            total += vals.reshape(g.shape[0], m).sum(axis=0)
        return total / self.S

    def __call__(self, p: ProjectivePoint) -> float:
        return float(self.eval_homog(p.homog[None, :])[0])


def _real_directions(c: ChartCoordinates) -> list:
    slots = [j for j in range(c.k + 1) if j != c.chart_index]
    units = []
    for w in (1.0, 1.0j):
        for j in slots:
            u = np.zeros(c.k + 1, dtype=np.complex128)
            u[j] = w
            units.append(u)
    return units


def _noise_guard(numerators, values):
    nz = np.abs(numerators[numerators != 0.0])
    if nz.size and nz.max() < 8.0 * np.finfo(np.float64).eps * float(np.abs(values).max()):
        raise StepTooSmall("finite differences sit below the roundoff floor of the values")


def finite_diff(rf: RegularizedFunction, c: ChartCoordinates, order: int, step: float) -> float:
    """Central-difference derivative proxy in the 2k real chart directions.

    Order 1 returns the Euclidean norm of the gradient; order 2 the largest
    absolute Hessian entry.  Every stencil point is evaluated with the same
    stored sample matrices, so the differenced function is the smooth frozen
    average.  Differences that are nonzero yet smaller than 8 units of
    roundoff raise :class:`StepTooSmall`; exactly-zero differences (plateaus)
    are genuine zero derivatives.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if not 1e-5 <= step <= 1e-2:
        raise ValueError("step must lie in [1e-5, 1e-2]")
    base = c.coords
    units = _real_directions(c)
    q = len(units)

    if order == 1:
        rows = np.empty((2 * q, base.size), dtype=np.complex128)
        for a, u in enumerate(units):
            rows[2 * a] = base + step * u
            rows[2 * a + 1] = base - step * u
        vals = rf.eval_homog(rows)
        diffs = vals[0::2] - vals[1::2]
        _noise_guard(diffs, vals)
        return float(np.linalg.norm(diffs / (2.0 * step)))

    rows = [base]
    for u in units:
        rows.append(base + step * u)
        rows.append(base - step * u)
    pairs = [(a, b) for a in range(q) for b in range(a + 1, q)]
    for a, b in pairs:
        rows.append(base + step * (units[a] + units[b]))
        rows.append(base + step * (units[a] - units[b]))
        rows.append(base - step * (units[a] - units[b]))
        rows.append(base - step * (units[a] + units[b]))
    vals = rf.eval_homog(np.stack(rows))

    f0 = vals[0]
    hess = np.empty((q, q))
    numerators = []
    pos = 1
    for a in range(q):
        num = vals[pos] - 2.0 * f0 + vals[pos + 1]
        hess[a, a] = num / step ** 2
        numerators.append(num)
        pos += 2
    for a, b in pairs:
        num = vals[pos] - vals[pos + 1] - vals[pos + 2] + vals[pos + 3]
        hess[a, b] = hess[b, a] = num / (4.0 * step ** 2)
        numerators.append(num)
        pos += 4
    _noise_guard(np.asarray(numerators), vals)
    return float(np.max(np.abs(hess)))


def c_alpha_estimate(rf: RegularizedFunction, grid, alpha: int, step: float) -> float:
    """Empirical C^alpha seminorm proxy: max of finite_diff over the grid."""
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be nonempty")
    return max(finite_diff(rf, c, alpha, step) for c in grid)


def scaling_slope(rows):
    """Least-squares slope of log(seminorm) against log(delta), with its
    standard error.  Needs at least 3 strictly positive rows."""
    rows = list(rows)
    if len(rows) < 3:
        raise ValueError("need at least 3 rows")
    deltas = np.array([r[0] for r in rows], dtype=np.float64)
    semis = np.array([r[1] for r in rows], dtype=np.float64)
    if np.any(deltas <= 0.0) or np.any(semis <= 0.0):
        raise ValueError("rows must be strictly positive")
    x = np.log(deltas)
    y = np.log(semis)
    xc = x - x.mean()
    sxx = float((xc ** 2).sum())
    slope = float((xc * y).sum() / sxx)
    resid = y - (y.mean() + slope * xc)
    dof = len(rows) - 2
    stderr = math.sqrt(float((resid ** 2).sum()) / dof / sxx)
    return slope, stderr


@dataclass(frozen=True, eq=False)
class ScalingReport:
    """Rows (delta, theta, seminorm) sorted by delta descending, with the
    log-log regression of seminorm against delta."""

    alpha: int
    rows: tuple
    slope: float
    slope_stderr: float
    degenerate: bool = False

    def __post_init__(self):
        rows = tuple(sorted(self.rows, key=lambda r: -r[0]))
        object.__setattr__(self, "rows", rows)
