"""Equilibrium branches over the entanglement parameter and count thresholds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import groupby

import numpy as np

from .equilibria import Equilibrium, enumerate_equilibria, pareto_optimum
from .model import GAMMA_MAX, EntangledGame, ModelParams
from .realroots import Polynomial, real_roots_cubic

COARSE_POINTS = 512
BRACKET_WIDTH = 1e-6
EXPECTED_PATTERN = (3, 5, 1)

TABLE_COLUMNS = (
    "gamma", "branch_id", "q1", "q2", "u1", "u2", "symmetric", "u_pareto", "u_classical_sym",
)


class InvalidRange(ValueError):
    pass


class PatternNotFound(RuntimeError):
    def __init__(self, observed: list[int]):
        self.observed = observed
        super().__init__(f"expected count pattern {list(EXPECTED_PATTERN)}, observed {observed}")


@dataclass(frozen=True)
class SweepRecord:
    gamma: float
    equilibria: tuple[Equilibrium, ...]

    @property
    def count(self) -> int:
        return len(self.equilibria)


@dataclass(frozen=True)
class Thresholds:
    gamma1: float
    gamma2: float
    bracket_width: float
    # exact tangency points (pitchfork of the symmetric branch, fold of the
    # asymmetric pairs); None if the Newton refinement did not converge
    gamma1_tangency: float | None = None
    gamma2_tangency: float | None = None


def gamma_grid(gamma_lo: float, gamma_hi: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise InvalidRange(f"steps must be >= 2, got {steps}")
    if not (0.0 <= gamma_lo < gamma_hi <= GAMMA_MAX):
        raise InvalidRange(f"need 0 <= from < to <= {GAMMA_MAX}, got [{gamma_lo}, {gamma_hi}]")
    return np.linspace(gamma_lo, gamma_hi, steps)


def sweep(params: ModelParams, gamma_lo: float, gamma_hi: float, steps: int) -> list[SweepRecord]:
    return [
        SweepRecord(float(g), tuple(enumerate_equilibria(EntangledGame(params, float(g)))))
        for g in gamma_grid(gamma_lo, gamma_hi, steps)
    ]


def equilibrium_count(params: ModelParams, gamma: float) -> int:
    return len(enumerate_equilibria(EntangledGame(params, gamma)))


def _bisect_count(params, lo, hi, upper):
    """Shrink [lo, hi] keeping ``upper(count)`` False at lo and True at hi."""
    while hi - lo > BRACKET_WIDTH:
        mid = 0.5 * (lo + hi)
        if upper(equilibrium_count(params, mid)):
            hi = mid
        else:
            lo = mid
    return lo, hi


def pitchfork_gamma(params: ModelParams, near: float) -> float | None:
    """Entanglement at which the symmetric equilibrium loses stability.

    At the pitchfork the best-response slope at the symmetric point is -1,
    which leaves the cubic 2 s^3 + 3 a s^2 - 2 s - a = 0 in s = q - a with
    tanh(gamma) = 1 - 3 s^2.
    """
    a = params.a
    best = None
    for s in real_roots_cubic(Polynomial([-a, -2.0, 3.0 * a, 2.0])).roots:
        t = 1.0 - 3.0 * s * s
        if 0.0 <= t < 1.0:
            g = math.atanh(t)
            if best is None or abs(g - near) < abs(best - near):
                best = g
    return best


def fold_gamma(params: ModelParams, near: float, s1: float, s2: float) -> float | None:
    """Newton on the fold of an asymmetric equilibrium pair.

    Unknowns (s1, s2, t): s2 = psi(s1), s1 = psi(s2), psi'(s1) psi'(s2) = 1,
    with psi(s) = -(s^3 + t s + a t).
    """
    a = params.a
    v = np.array([s1, s2, math.tanh(near)])
    for _ in range(50):
        x1, x2, t = v
        d1, d2 = 3 * x1 * x1 + t, 3 * x2 * x2 + t
        f = np.array([
            x2 + x1 ** 3 + t * x1 + a * t,
            x1 + x2 ** 3 + t * x2 + a * t,
            d1 * d2 - 1.0,
        ])
        jac = np.array([
            [d1, 1.0, x1 + a],
            [1.0, d2, x2 + a],
            [6 * x1 * d2, 6 * x2 * d1, d1 + d2],
        ])
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        v = v + step
        if np.max(np.abs(step)) < 1e-15:
            break
    t = v[2]
    if not (0.0 <= t < 1.0) or abs(v[0] - v[1]) < 1e-6:
        return None
    g = math.atanh(t)
    return g if abs(g - near) < 1e-3 else None


def _closest_pair(eqs) -> tuple[float, float] | None:
    asym = sorted(e.quantities.q1 for e in eqs if not e.symmetric)
    if len(asym) < 2:
        return None
    gaps = [(asym[i + 1] - asym[i], i) for i in range(len(asym) - 1)]
    _, i = min(gaps)
    return asym[i], asym[i + 1]


def find_thresholds(params: ModelParams) -> Thresholds:
    """Locate the count changes 3 -> 5 (gamma1) and 5 -> 1 (gamma2).

    A coarse scan on [0, 1] brackets each change, bisection on the
    equilibrium count shrinks the brackets below ``BRACKET_WIDTH`` and the
    reported value is the bracket midpoint.
    """
    grid = np.linspace(0.0, 1.0, COARSE_POINTS)
    counts = [equilibrium_count(params, float(g)) for g in grid]
    runs = [k for k, _ in groupby(counts)]
    if tuple(runs) != EXPECTED_PATTERN:
        raise PatternNotFound(runs)

    i1 = next(i for i, c in enumerate(counts) if c == 5)
    i2 = next(i for i, c in enumerate(counts) if c == 1)
    lo1, hi1 = _bisect_count(params, float(grid[i1 - 1]), float(grid[i1]), lambda c: c >= 5)
    lo2, hi2 = _bisect_count(params, float(grid[i2 - 1]), float(grid[i2]), lambda c: c <= 1)
    g1, g2 = 0.5 * (lo1 + hi1), 0.5 * (lo2 + hi2)

    g2_tan = None
    pair = _closest_pair(enumerate_equilibria(EntangledGame(params, lo2)))
    if pair is not None:
        # the merging roots share s1; the partner is the opponent's quantity
        s1 = 0.5 * (pair[0] + pair[1]) - params.a
        t = math.tanh(lo2)
        s2 = -(s1 ** 3 + t * s1 + params.a * t)
        g2_tan = fold_gamma(params, g2, s1, s2)
        if g2_tan is not None and not (lo2 - 1e-6 <= g2_tan <= hi2 + 1e-6):
            g2_tan = None
    g1_tan = pitchfork_gamma(params, g1)
    if g1_tan is not None and not (lo1 - 1e-6 <= g1_tan <= hi1 + 1e-6):
        g1_tan = None
    return Thresholds(
        gamma1=g1,
        gamma2=g2,
        bracket_width=max(hi1 - lo1, hi2 - lo2),
        gamma1_tangency=g1_tan,
        gamma2_tangency=g2_tan,
    )


def _track(prev: dict[int, tuple[float, float]], points: list[tuple[float, float]], next_id: int):
    """Greedy nearest-neighbour assignment of branch ids."""
    pairs = sorted(
        (math.dist(p, q), bid, j)
        for bid, p in prev.items()
        for j, q in enumerate(points)
    )
    ids: list[int | None] = [None] * len(points)
    used = set()
    for _, bid, j in pairs:
        if bid in used or ids[j] is not None:
            continue
        ids[j] = bid
        used.add(bid)
    for j in range(len(points)):
        if ids[j] is None:
            ids[j] = next_id
            next_id += 1
    return ids, next_id


def profit_branches(params: ModelParams, gamma_lo: float, gamma_hi: float, steps: int) -> list[dict]:
    """Rows (gamma, branch_id, q1, q2, u1, u2, symmetric) with reference levels.

    ``u_pareto`` is the per-firm profit at the joint optimum (7/4 + d when
    a = 3) and ``u_classical_sym`` the classical symmetric profit d.
    """
    u_pareto = pareto_optimum(params).profit_each
    rows = []
    prev: dict[int, tuple[float, float]] = {}
    next_id = 0
    for rec in sweep(params, gamma_lo, gamma_hi, steps):
        points = [tuple(e.quantities) for e in rec.equilibria]
        ids, next_id = _track(prev, points, next_id)
        prev = dict(zip(ids, points))
        for bid, eq in zip(ids, rec.equilibria):
            rows.append({
                "gamma": rec.gamma,
                "branch_id": bid,
                "q1": eq.quantities.q1,
                "q2": eq.quantities.q2,
                "u1": eq.profits.u1,
                "u2": eq.profits.u2,
                "symmetric": eq.symmetric,
                "u_pareto": u_pareto,
                "u_classical_sym": params.d,
            })
    return rows
