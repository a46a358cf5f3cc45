"""Best responses and complete Nash-equilibrium enumeration.

Working in centred quantities ``s = q - a`` with ``t = tanh(gamma)``, the
best-response locus of firm j reads ``s_i = psi(s_j)`` where

    psi(s) = -(s**3 + t*s + a*t)

Equilibria are the real roots of ``psi(psi(s)) - s`` (degree 9): every root
``s1`` pairs with ``s2 = psi(s1)`` and, conversely, ``psi(s2) = s1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    EntangledGame,
    ModelParams,
    ProfitPair,
    QuantityPair,
    StrategyPair,
    profit_classical,
    quantity_map_inverse,
)
from .realroots import Polynomial, real_roots, real_roots_cubic

ALPHA = (2.0 / 3.0) ** (1.0 / 3.0)
SYMMETRY_TOL = 1e-7
DEDUPE_TOL = 1e-7


class SymmetricInput(ValueError):
    pass


class SolverFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class Equilibrium:
    quantities: QuantityPair
    strategies: StrategyPair
    profits: ProfitPair
    symmetric: bool
    negative_quantity: bool
    residual: float
    tangency: bool = False


@dataclass(frozen=True)
class ParetoOptimum:
    q_star: float
    alpha: float
    beta: float
    profit_each: float

    def foc_residual(self, a: float) -> float:
        s = self.q_star - a
        return s ** 3 + 2.0 * s + a


@dataclass(frozen=True)
class SymmetricSolution:
    x_star: float
    eta: float
    q_star_gamma: float


def _response_map(game: EntangledGame) -> Polynomial:
    t = math.tanh(game.gamma)
    return Polynomial([-game.a * t, -t, 0.0, -1.0])


def br_conjugate(game: EntangledGame, q_j: float) -> float:
    """Opponent quantity ``q_i`` that makes ``q_j`` firm j's best response."""
    a = game.a
    return a + q_j - (q_j - a) ** 3 - game.bias * q_j


def best_response(game: EntangledGame, q_i: float) -> float:
    """Firm j's quantity on its best-response locus against ``q_i``.

    The locus cubic ``s**3 + t*s + (q_i - a + a*t) = 0`` is strictly
    monotone for gamma >= 0, so it has exactly one real root.
    """
    a, t = game.a, math.tanh(game.gamma)
    roots = real_roots_cubic(Polynomial([q_i - a + a * t, t, 0.0, 1.0]))
    if len(roots) != 1:
        raise SolverFailure(f"best response cubic returned {len(roots)} roots")
    return a + roots.roots[0]


def br_residual(game: EntangledGame, q: QuantityPair) -> tuple[float, float]:
    """Best-response locus conditions for both firms, divided by cosh(gamma)."""
    a, k = game.a, game.bias
    q1, q2 = q
    r1 = a + q1 - q2 - (q1 - a) ** 3 - k * q1
    r2 = a + q2 - q1 - (q2 - a) ** 3 - k * q2
    return r1, r2


def strategy_foc(game: EntangledGame, x: StrategyPair, j: int) -> float:
    """d u_j / d x_j written in strategies (no division by cosh)."""
    g = game.gamma
    xj, xi = (x.x1, x.x2) if j == 1 else (x.x2, x.x1)
    ch = math.cosh(g)
    return (
        -xj * math.sinh(2 * g)
        - xi * math.cosh(2 * g)
        - (xj * ch + xi * math.sinh(g) - game.a) ** 3 * ch
        + game.a * ch
    )


def equilibrium_polynomial(game: EntangledGame, centered: bool = False) -> Polynomial:
    """Degree-9 polynomial whose real roots are the equilibrium ``q1`` values.

    With ``centered=True`` the variable is ``q1 - a``; that form is better
    conditioned and is what the enumeration uses.
    """
    psi = _response_map(game)
    p = psi.compose(psi) - Polynomial([0.0, 1.0])
    return p if centered else p.shift(-game.a)


def symmetric_closed_form(game: EntangledGame) -> SymmetricSolution:
    a, g = game.a, game.gamma
    sech, th = 1.0 / math.cosh(g), math.tanh(g)
    eta = (9 * a * th + math.sqrt(12 * math.exp(3 * g) * sech ** 3 + 81 * a * a * th * th)) ** (1 / 3)
    x = a * math.exp(-g) + sech * ALPHA / eta - 0.5 * ALPHA ** 2 * eta * math.exp(-g)
    return SymmetricSolution(x_star=x, eta=eta, q_star_gamma=math.exp(g) * x)


def _symmetric_root(game: EntangledGame) -> float:
    # fixed point of psi: s**3 + (1 + t) s + a t = 0, monotone in s
    t = math.tanh(game.gamma)
    roots = real_roots_cubic(Polynomial([game.a * t, 1.0 + t, 0.0, 1.0]))
    return roots.roots[0]


def _refine(psi: Polynomial, s: float, steps: int = 3) -> float:
    """Newton on psi(psi(s)) - s evaluated by nesting rather than expansion."""
    dpsi = psi.derivative()
    for _ in range(steps):
        inner = psi(s)
        f = psi(inner) - s
        df = dpsi(inner) * dpsi(s) - 1.0
        if f == 0.0 or df == 0.0:
            break
        ns = s - f / df
        if abs(psi(psi(ns)) - ns) >= abs(f):
            break
        s = ns
    return s


def _make(game: EntangledGame, q: QuantityPair, tangency: bool = False) -> Equilibrium:
    r = br_residual(game, q)
    return Equilibrium(
        quantities=q,
        strategies=quantity_map_inverse(game, q),
        profits=profit_classical(game.params, q),
        symmetric=abs(q.q1 - q.q2) <= SYMMETRY_TOL,
        negative_quantity=q.q1 < 0 or q.q2 < 0,
        residual=max(abs(r[0]), abs(r[1])),
        tangency=tangency,
    )


def residual_tolerance(a: float) -> float:
    return 1e-8 * (1.0 + abs(a) ** 3)


def enumerate_equilibria(game: EntangledGame) -> list[Equilibrium]:
    """All pure-strategy Nash equilibria, sorted by ``q1``.

    The symmetric equilibrium is taken from its own (well-conditioned)
    cubic; the remaining roots of the degree-9 polynomial are polished on
    the nested composition and paired through the best-response map.
    """
    a = game.a
    psi = _response_map(game)
    roots = real_roots(equilibrium_polynomial(game, centered=True))
    s_sym = _symmetric_root(game)

    found: list[tuple[float, float, bool]] = [(s_sym, s_sym, False)]
    for s, flag in zip(roots.roots, roots.multiplicity_flags):
        if abs(s - s_sym) <= 1e-6 * max(1.0, abs(s)):
            if flag:
                found[0] = (s_sym, s_sym, True)
            continue
        if not flag:
            s = _refine(psi, s)
        partner = psi(s)
        if abs(partner - s) <= SYMMETRY_TOL:
            continue
        if any(abs(s - f[0]) <= DEDUPE_TOL for f in found):
            continue
        found.append((s, partner, flag))

    out = []
    tol = residual_tolerance(a)
    for s1, s2, flag in sorted(found):
        eq = _make(game, QuantityPair(a + s1, a + s2), tangency=flag)
        if eq.residual > tol:
            raise SolverFailure(f"equilibrium residual {eq.residual:.3g} exceeds {tol:.3g}")
        out.append(eq)
    return out


def pareto_optimum(params: ModelParams) -> ParetoOptimum:
    a = params.a
    beta = (9 * a + math.sqrt(96 + 81 * a * a)) ** (1 / 3)
    q = a + 2 * ALPHA / beta - 0.5 * ALPHA ** 2 * beta
    u = profit_classical(params, QuantityPair(q, q))
    return ParetoOptimum(q_star=q, alpha=ALPHA, beta=beta, profit_each=u.u1)


def asymmetry_identity(game: EntangledGame, eq: Equilibrium) -> float:
    """Residual of delta^2 + 3 A delta + 3 A^2 - sech(g)/e^g at an equilibrium.

    Obtained by subtracting the two firms' best-response conditions and
    dividing by delta; zero at any genuine asymmetric equilibrium.
    """
    q1, q2 = eq.quantities
    delta = q2 - q1
    if abs(delta) <= SYMMETRY_TOL:
        raise SymmetricInput("identity is only defined for asymmetric equilibria")
    A = q1 - game.a
    return delta * delta + 3 * A * delta + 3 * A * A - game.sech_over_exp


def asymmetry_bound(game: EntangledGame) -> float:
    """Largest |q1 - a| compatible with an asymmetric equilibrium."""
    return math.sqrt(4.0 / 3.0 * game.sech_over_exp)
