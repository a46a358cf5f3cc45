"""Brute-force equilibrium finder, independent of the polynomial route.

Scans a square box of quantity pairs for cells where both firms'
best-response residuals change sign, then runs a damped 2-D Newton from
each such cell.  Deliberately simple and slow; used to cross-check
``enumerate_equilibria``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import EntangledGame, QuantityPair

CONVERGED = 1e-10
DEDUPE = 1e-6
MAX_HALVINGS = 30
MAX_ITER = 100


class InvalidGrid(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    cells: int = 400

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidGrid(f"need lo < hi, got ({self.lo}, {self.hi})")
        if self.cells < 100:
            raise InvalidGrid(f"need at least 100 cells per axis, got {self.cells}")

    @classmethod
    def around(cls, a: float, half_width: float = 3.0, cells: int = 400) -> "GridSpec":
        return cls(a - half_width, a + half_width, cells)

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / self.cells


def _residuals(game: EntangledGame, q1, q2):
    # best-response conditions exactly as (a + q_j - q_i - (q_j - a)^3) cosh g - e^g q_j
    a, g = game.a, game.gamma
    ch, eg = math.cosh(g), math.exp(g)
    r1 = (a + q1 - q2 - (q1 - a) ** 3) * ch - eg * q1
    r2 = (a + q2 - q1 - (q2 - a) ** 3) * ch - eg * q2
    return r1, r2


def _jacobian(game: EntangledGame, q1: float, q2: float) -> np.ndarray:
    a, g = game.a, game.gamma
    ch, eg = math.cosh(g), math.exp(g)
    return np.array([
        [(1 - 3 * (q1 - a) ** 2) * ch - eg, -ch],
        [-ch, (1 - 3 * (q2 - a) ** 2) * ch - eg],
    ])


def damped_newton(game: EntangledGame, start) -> np.ndarray | None:
    """Newton with step halving on residual-norm increase; None if it fails."""
    x = np.asarray(start, dtype=float)
    norm = np.max(np.abs(_residuals(game, *x)))
    for _ in range(MAX_ITER):
        if norm < CONVERGED:
            return x
        try:
            step = np.linalg.solve(_jacobian(game, *x), -np.array(_residuals(game, *x)))
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        for _ in range(MAX_HALVINGS):
            trial = x + lam * step
            tnorm = np.max(np.abs(_residuals(game, *trial)))
            if tnorm < norm:
                break
            lam *= 0.5
        else:
            return x if norm < CONVERGED else None
        x, norm = trial, tnorm
    return x if norm < CONVERGED else None


def _sign_change(r: np.ndarray) -> np.ndarray:
    corners = np.stack([r[:-1, :-1], r[1:, :-1], r[:-1, 1:], r[1:, 1:]])
    return (corners.min(axis=0) <= 0) & (corners.max(axis=0) >= 0)


def grid_equilibria(game: EntangledGame, grid: GridSpec | None = None) -> list[QuantityPair]:
    grid = grid or GridSpec.around(game.a)
    edges = np.linspace(grid.lo, grid.hi, grid.cells + 1)
    Q1, Q2 = np.meshgrid(edges, edges, indexing="ij")
    r1, r2 = _residuals(game, Q1, Q2)
    seeds = np.argwhere(_sign_change(r1) & _sign_change(r2))
    centres = 0.5 * (edges[:-1] + edges[1:])

    found: list[np.ndarray] = []
    for i, j in seeds:
        x = damped_newton(game, (centres[i], centres[j]))
        if x is None:
            continue
        if any(np.max(np.abs(x - f)) <= DEDUPE for f in found):
            continue
        found.append(x)
    found.sort(key=lambda v: (v[0], v[1]))
    return [QuantityPair(float(v[0]), float(v[1])) for v in found]


def near_boundary(points: list[QuantityPair], grid: GridSpec, cells: int = 2) -> bool:
    margin = cells * grid.spacing
    return any(
        min(q - grid.lo, grid.hi - q) < margin for p in points for q in p
    )
