"""Points, charts, and distances on complex projective space.

A point of P^k is a line through the origin of C^(k+1).  We store the
canonical homogeneous representative (unit Euclidean norm, first significant
component rotated onto the positive real axis), so equality and hashing
behave like values.  Distances are geodesic distances of the Fubini-Study
metric, normalised so the diameter of the space is pi/2.

Batch helpers operate on stacked homogeneous rows, shape (m, k+1); rows need
not be normalised.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ChartUndefined
from .rng import make_rng

EQ_TOL = 1e-12


def _canonical(homog) -> np.ndarray:
    v = np.asarray(homog, dtype=np.complex128).reshape(-1)
    if v.size < 2:
        raise ValueError("need at least two homogeneous components")
    if not np.all(np.isfinite(v.view(np.float64))):
        raise ValueError("homogeneous coordinates must be finite")
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("homogeneous coordinates must not all vanish")
    v = v / norm
    lead = int(np.argmax(np.abs(v) > EQ_TOL))
    pivot = v[lead]
    v = v * (np.conj(pivot) / abs(pivot))
    v[lead] = abs(pivot)  # exactly real positive
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A point of P^k held as its canonical homogeneous representative."""

    homog: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "homog", _canonical(self.homog))

    @property
    def k(self) -> int:
        return self.homog.size - 1

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if self.homog.size != other.homog.size:
            return False
        return bool(np.max(np.abs(self.homog - other.homog)) <= EQ_TOL)

    def __hash__(self):
        return hash(np.round(self.homog, 9).tobytes())

    def __repr__(self):
        body = " : ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in self.homog)
        return f"ProjectivePoint([{body}])"


@dataclass(frozen=True, eq=False)
class ChartCoordinates:
    """Affine coordinates in the chart where component ``chart_index`` is 1."""

    chart_index: int
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=np.complex128).reshape(-1)
        if c.size < 2:
            raise ValueError("need at least two components")
        if not 0 <= self.chart_index < c.size:
            raise ValueError("chart_index out of range")
        if c[self.chart_index] != 1.0 + 0.0j:
            raise ValueError("the chart slot must be exactly 1")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def k(self) -> int:
        return self.coords.size - 1

    def to_point(self) -> ProjectivePoint:
        return ProjectivePoint(self.coords)


@dataclass(frozen=True)
class Ball:
    """A closed Fubini-Study ball; radius 0 is a single point."""

    center: ProjectivePoint
    radius: float

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius >= 0.0):
            raise ValueError("radius must be a nonnegative real")


@dataclass(frozen=True, eq=False)
class CompactSetSpec:
    """A compact set given as a finite union of closed Fubini-Study balls."""

    balls: tuple

    def __post_init__(self):
        balls = tuple(self.balls)
        if not balls:
            raise ValueError("at least one ball is required")
        k = balls[0].center.k
        if any(b.center.k != k for b in balls):
            raise ValueError("all balls must live in the same P^k")
        object.__setattr__(self, "balls", balls)

    @property
    def k(self) -> int:
        return self.balls[0].center.k

    def to_dict(self) -> dict:
        return {
            "balls": [
                {
                    "center": [[z.real, z.imag] for z in b.center.homog],
                    "radius": b.radius,
                }
                for b in self.balls
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CompactSetSpec":
        balls = []
        for entry in data["balls"]:
            center = np.array([complex(re, im) for re, im in entry["center"]])
            balls.append(Ball(ProjectivePoint(center), float(entry["radius"])))
        return cls(tuple(balls))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CompactSetSpec":
        return cls.from_dict(json.loads(text))


def fs_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    """Geodesic distance arccos|<p,q>|, in [0, pi/2]."""
    ip = abs(np.vdot(q.homog, p.homog))
    return float(math.acos(min(ip, 1.0)))


def to_chart(p: ProjectivePoint, chart_index: Optional[int] = None) -> ChartCoordinates:
    """Divide through by component ``chart_index``; defaults to the
    maximum-modulus component (ties to the lowest index)."""
    if chart_index is None:
        chart_index = int(np.argmax(np.abs(p.homog)))
    pivot = p.homog[chart_index]
    if abs(pivot) <= EQ_TOL:
        raise ChartUndefined(
            f"component {chart_index} vanishes; the point lies outside this chart"
        )
    coords = p.homog / pivot
    coords[chart_index] = 1.0
    return ChartCoordinates(chart_index, coords)


def chart_norm(c: ChartCoordinates) -> float:
    """Euclidean norm of the coordinates, the unit slot excluded."""
    return float(np.linalg.norm(np.delete(c.coords, c.chart_index)))


def full_norm(c: ChartCoordinates) -> float:
    """Euclidean norm of the full vector including the unit slot; >= 1."""
    return float(np.linalg.norm(c.coords))


def rows_dist_to_set(rows, sspec: CompactSetSpec) -> np.ndarray:
    """Distance of each homogeneous row to the set, vectorised."""
    Z = np.asarray(rows, dtype=np.complex128)
    zn = np.linalg.norm(Z, axis=1)
    best = np.full(Z.shape[0], np.inf)
    for b in sspec.balls:
        ip = np.abs(Z @ np.conj(b.center.homog))
        d = np.arccos(np.clip(ip / zn, 0.0, 1.0))
        np.minimum(best, np.maximum(d - b.radius, 0.0), out=best)
    return best


def dist_to_set(p: ProjectivePoint, sspec: CompactSetSpec) -> float:
    """min over balls of max(fs_distance(p, center) - radius, 0)."""
    return float(rows_dist_to_set(p.homog[None, :], sspec)[0])


def uniform_rows(k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Fubini-Study-uniform homogeneous rows (complex Gaussian, normalised)."""
    z = rng.standard_normal((count, k + 1)) + 1j * rng.standard_normal((count, k + 1))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def tangent_row(center: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Unit vector Hermitian-orthogonal to a unit homogeneous vector."""
    for _ in range(32):
        g = rng.standard_normal(center.size) + 1j * rng.standard_normal(center.size)
        v = g - np.vdot(center, g) * center
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return v / norm
    raise RuntimeError("failed to draw a tangent direction")


def geodesic_row(center: np.ndarray, direction: np.ndarray, t: float) -> np.ndarray:
    """Point at Fubini-Study distance t from ``center`` along ``direction``."""
    return math.cos(t) * center + math.sin(t) * direction


@dataclass(frozen=True)
class BallComparisonReport:
    ok: bool
    worst_ratio: float
    trials: int


def ball_comparison_check(
    c: ChartCoordinates, r: float, trials: int, seed: int = 0
) -> BallComparisonReport:
    """Sample the chart-Euclidean ball of radius (r/2)*full_norm(c) around c
    and report whether every sample stays within Fubini-Study distance r.

    The first sample is c itself; ``worst_ratio`` is the largest observed
    fs_distance / r.
    """
    if not 0.0 < r <= 0.5:
        raise ValueError("r must lie in (0, 0.5]")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = make_rng(seed, 11)
    k = c.k
    s = 0.5 * r * full_norm(c)
    dirs = rng.standard_normal((trials, 2 * k))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = s * rng.random(trials) ** (1.0 / (2 * k))
    off = dirs * radii[:, None]

    W = np.repeat(c.coords[None, :], trials, axis=0)
    mask = np.ones(k + 1, dtype=bool)
    mask[c.chart_index] = False
    W[:, mask] += off[:, :k] + 1j * off[:, k:]
    W[0] = c.coords

    ip = np.abs(W @ np.conj(c.coords))
    denom = np.linalg.norm(W, axis=1) * full_norm(c)
    fs = np.arccos(np.clip(ip / denom, 0.0, 1.0))
    return BallComparisonReport(bool(np.all(fs < r)), float(fs.max() / r), trials)
