"""Deterministic quadrature: smooth integrals, principal values, circle contours.

Everything here is a pure function of its inputs.  Summations run in fixed
ascending-node order (numpy's pairwise reduction), so repeated calls are
bit-identical and the module is safe to use from many threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidInterval, InvalidOrder, NonfiniteValue, PoleOutside

__all__ = [
    "Grid",
    "Circle",
    "gauss_grid",
    "composite_grid",
    "integrate",
    "pv_integral",
    "cauchy_pv",
    "contour_integral",
    "integrate_graded",
]

# Singularity-subtraction constants, relative to the interval length.
PV_SUBTRACT_DELTA = 1e-6
PV_DIFF_STEP = 1e-5


@dataclass(frozen=True)
class Grid:
    """Quadrature nodes and weights on an interval (a, b)."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]
    rule: str = "gauss_legendre"

    def __post_init__(self):
        a, b = self.interval
        if not (np.all(self.nodes > a) and np.all(self.nodes < b)):
            raise InvalidInterval("grid nodes must lie strictly inside (a, b)")
        if np.any(self.weights <= 0):
            raise InvalidInterval("grid weights must be positive")


@dataclass(frozen=True)
class Circle:
    """Counter-clockwise circular contour with equispaced sample points."""

    center: complex
    radius: float
    n_points: int = 256

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise InvalidInterval("circle radius must be finite and positive")
        if self.n_points < 8 or self.n_points % 2 != 0:
            raise InvalidOrder("n_points must be even and >= 8")

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Sample points z_j and the factors dz_j/dθ = i(z_j - center)."""
        theta = 2.0 * np.pi * np.arange(self.n_points) / self.n_points
        z = self.center + self.radius * np.exp(1j * theta)
        return z, 1j * (z - self.center)


@lru_cache(maxsize=64)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_grid(a: float, b: float, n: int) -> Grid:
    """n-point Gauss-Legendre rule mapped to (a, b).

    Deterministic: identical inputs give bit-identical nodes and weights.
    """
    if not a < b:
        raise InvalidInterval(f"need a < b, got ({a}, {b})")
    if n < 2:
        raise InvalidOrder(f"need n >= 2, got {n}")
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return Grid(a + half * (x + 1.0), half * w.copy(), (a, b), "gauss_legendre")


def composite_grid(a: float, b: float, n_panels: int, order: int = 8) -> Grid:
    """Composite Gauss rule: `n_panels` equal panels of the given order."""
    if not a < b:
        raise InvalidInterval(f"need a < b, got ({a}, {b})")
    if n_panels < 1 or order < 2:
        raise InvalidOrder("need n_panels >= 1 and order >= 2")
    edges = np.linspace(a, b, n_panels + 1)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        g = gauss_grid(lo, hi, order)
        nodes.append(g.nodes)
        weights.append(g.weights)
    return Grid(np.concatenate(nodes), np.concatenate(weights), (a, b), "composite")


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate f on the node array, accepting scalar-only callables."""
    try:
        vals = np.asarray(f(x))
        if vals.shape != x.shape:
            raise ValueError
    except Exception:
        vals = np.asarray([f(xi) for xi in x])
    if not np.all(np.isfinite(vals)):
        raise NonfiniteValue("integrand is not finite at a quadrature node")
    return vals


def integrate(f: Callable, grid: Grid) -> complex:
    """Σ w_i f(x_i) in fixed ascending-node order."""
    vals = _sample(f, grid.nodes)
    return complex(np.sum(grid.weights * vals))


def pv_integral(f: Callable, pole: float, a: float, b: float, n: int = 256) -> complex:
    """PV ∫_a^b f(x)/(x - pole) dx by singularity subtraction.

    The smooth part ∫ (f(x) - f(pole))/(x - pole) dx is handled by the n-point
    Gauss rule; the extracted pole integrates exactly to
    f(pole)·log((b - pole)/(pole - a)).  Nodes closer to the pole than
    1e-6·(b-a) use a centred-difference derivative instead of the raw
    difference quotient.
    """
    if not a < pole < b:
        raise PoleOutside(f"pole {pole} not inside ({a}, {b})")
    grid = gauss_grid(a, b, n)
    out = cauchy_pv(f, a, b, np.array([pole]), grid=grid)
    return complex(out[0])


def cauchy_pv(
    f: Callable,
    a: float,
    b: float,
    poles: np.ndarray,
    n: int = 256,
    grid: Grid | None = None,
) -> np.ndarray:
    """PV ∫_a^b f(t)/(t - p) dt for a batch of poles p.

    Poles inside (a, b) get the subtraction rule of :func:`pv_integral`;
    poles outside are ordinary smooth integrals.  f must be smooth on [a, b]
    and evaluable at the interior poles.
    """
    if grid is None:
        grid = gauss_grid(a, b, n)
    poles = np.atleast_1d(np.asarray(poles, dtype=float))
    x, w = grid.nodes, grid.weights
    fx = _sample(f, x)
    out = np.empty(poles.shape, dtype=complex)

    inside = (poles > a) & (poles < b)
    if np.any(inside):
        p = poles[inside]
        span = b - a
        delta = PV_SUBTRACT_DELTA * span
        h = PV_DIFF_STEP * span
        fp = _sample(f, p)
        dfp = (_sample(f, p + h) - _sample(f, p - h)) / (2.0 * h)
        diff = x[:, None] - p[None, :]
        quot = np.where(
            np.abs(diff) < delta,
            np.broadcast_to(dfp[None, :], diff.shape),
            (fx[:, None] - fp[None, :]) / np.where(np.abs(diff) < delta, 1.0, diff),
        )
        out[inside] = w @ quot + fp * np.log((b - p) / (p - a))
    if np.any(~inside):
        p = poles[~inside]
        out[~inside] = w @ (fx[:, None] / (x[:, None] - p[None, :]))
    return out


def contour_integral(F: Callable, circle: Circle) -> np.ndarray:
    """(1/2πi) ∮ F(z) dz on the circle by the trapezoid rule.

    Spectrally accurate when F is analytic in an annulus around the contour.
    F may return scalars or matrices; the result is always a 2-d array.
    """
    z, dz_dtheta = circle.points()
    total = None
    for zj, dj in zip(z, dz_dtheta):
        val = np.atleast_2d(np.asarray(F(zj), dtype=complex))
        if not np.all(np.isfinite(val)):
            raise NonfiniteValue(f"contour integrand not finite at z = {zj}")
        term = val * dj
        total = term if total is None else total + term
    # (1/2πi)·(2π/N)·Σ F·iz e^{iθ}  →  Σ F·(z-c)e^{iθ}... folded into dz factor
    return total / (1j * circle.n_points)


def _graded_edges(a: float, b: float, center: float, min_width: float) -> np.ndarray:
    """Panel edges on [a, b], geometrically refined toward `center`."""
    c = min(max(center, a), b)
    edges = {a, b}
    if a < c < b:
        edges.add(c)
    d = max(min_width, 1e-14 * (b - a))
    while d < (b - a):
        for e in (c - d, c + d):
            if a < e < b:
                edges.add(e)
        d *= 2.0
    return np.array(sorted(edges))


def panel_nodes(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes/weights for every panel between consecutive edges, flattened."""
    x, w = _leggauss(order)
    centers = 0.5 * (edges[1:] + edges[:-1])
    halves = 0.5 * (edges[1:] - edges[:-1])
    nodes = (centers[:, None] + halves[:, None] * x[None, :]).ravel()
    weights = (halves[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_graded(
    f: Callable,
    a: float,
    b: float,
    center: float,
    min_width: float,
    order: int = 16,
) -> complex:
    """Composite Gauss integral with panels graded toward a boundary layer.

    Used for integrands smooth on (a, b) but with features on scale
    `min_width` near `center` (e.g. 1/(x + iu) kernels with small u).
    """
    if not a < b:
        raise InvalidInterval(f"need a < b, got ({a}, {b})")
    edges = _graded_edges(a, b, center, min_width)
    nodes, weights = panel_nodes(edges, order)
    vals = _sample(f, nodes)
    return complex(np.sum(weights * vals))


def weighted_sum(values: Sequence[complex], weights: Sequence[float]) -> complex:
    """Fixed-order pairwise-summed dot product (determinism helper)."""
    return complex(np.sum(np.asarray(weights) * np.asarray(values)))
