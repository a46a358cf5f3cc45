"""Demand, cost and profit of the quartic-cost Cournot duopoly.

The entangled game enters only through the hyperbolic mixing of the two
firms' strategies into market quantities::

    q1 = x1 cosh(g) + x2 sinh(g)
    q2 = x2 cosh(g) + x1 sinh(g)

whose determinant is 1, so the inverse is the same matrix at ``-g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

GAMMA_MAX = 50.0


class InvalidParameter(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    a: float = 3.0
    b: float = 5.0
    d: float = 10.0

    def __post_init__(self):
        for name in ("a", "b", "d"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameter(f"{name} must be a positive finite number, got {v!r}")


@dataclass(frozen=True)
class EntangledGame:
    params: ModelParams
    gamma: float = 0.0

    def __post_init__(self):
        g = self.gamma
        if not (math.isfinite(g) and 0.0 <= g <= GAMMA_MAX):
            raise InvalidParameter(f"gamma must lie in [0, {GAMMA_MAX}], got {g!r}")

    @property
    def a(self) -> float:
        return self.params.a

    @property
    def bias(self) -> float:
        """e^g sech g = 1 + tanh g, the own-quantity weight in the best response."""
        return 1.0 + math.tanh(self.gamma)

    @property
    def sech_over_exp(self) -> float:
        """sech g / e^g, written to stay finite for large g."""
        return 2.0 / (math.exp(2.0 * self.gamma) + 1.0)


class StrategyPair(NamedTuple):
    x1: float
    x2: float


class QuantityPair(NamedTuple):
    q1: float
    q2: float


class ProfitPair(NamedTuple):
    u1: float
    u2: float


def inverse_demand(params: ModelParams, total_quantity: float) -> float:
    return params.a + params.b - total_quantity


def cost(params: ModelParams, q: float) -> float:
    return 0.25 * (q - params.a) ** 4 - q * q + params.b * q - params.d


def profit_classical(params: ModelParams, q: QuantityPair) -> ProfitPair:
    q1, q2 = q
    price = inverse_demand(params, q1 + q2)
    return ProfitPair(price * q1 - cost(params, q1), price * q2 - cost(params, q2))


def quantity_map(game: EntangledGame, x: StrategyPair) -> QuantityPair:
    ch, sh = math.cosh(game.gamma), math.sinh(game.gamma)
    x1, x2 = x
    return QuantityPair(x1 * ch + x2 * sh, x2 * ch + x1 * sh)


def quantity_map_inverse(game: EntangledGame, q: QuantityPair) -> StrategyPair:
    ch, sh = math.cosh(game.gamma), math.sinh(game.gamma)
    q1, q2 = q
    return StrategyPair(q1 * ch - q2 * sh, q2 * ch - q1 * sh)


def profit_quantum(game: EntangledGame, x: StrategyPair) -> ProfitPair:
    return profit_classical(game.params, quantity_map(game, x))
