import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcournot.equilibria import (
    ALPHA,
    SymmetricInput,
    asymmetry_bound,
    asymmetry_identity,
    best_response,
    br_conjugate,
    br_residual,
    enumerate_equilibria,
    equilibrium_polynomial,
    pareto_optimum,
    residual_tolerance,
    strategy_foc,
    symmetric_closed_form,
)
from qcournot.model import (
    EntangledGame,
    ModelParams,
    QuantityPair,
    StrategyPair,
    profit_quantum,
    quantity_map_inverse,
)
from qcournot.oracle import grid_equilibria
from qcournot.realroots import real_roots


def quantities(eqs):
    return [tuple(e.quantities) for e in eqs]


def test_br_conjugate_examples(game_at):
    assert br_conjugate(game_at(0.0), 3.0) == 3.0
    assert br_conjugate(game_at(0.0), 2.0) == 4.0
    # e^g sech g = 2 e^{2g} / (e^{2g} + 1) = 1.6 at g = ln 2, so 3 + 3 - 1.6 * 3
    assert br_conjugate(game_at(math.log(2)), 3.0) == pytest.approx(1.2, abs=1e-14)


def test_best_response_examples(game_at):
    assert best_response(game_at(0.0), 4.0) == pytest.approx(2.0, abs=1e-14)
    assert best_response(game_at(0.0), 3.0) == pytest.approx(3.0, abs=1e-14)
    game = game_at(0.6)
    q = symmetric_closed_form(game).q_star_gamma
    assert best_response(game, q) == pytest.approx(q, abs=1e-12)


@settings(max_examples=300)
@given(a=st.floats(0.1, 10), g=st.floats(0, 3), qi=st.floats(-3, 3))
def test_best_response_inverts_conjugate(a, g, qi):
    game = EntangledGame(ModelParams(a, 1, 1), g)
    qj = best_response(game, a + qi)
    assert br_conjugate(game, qj) == pytest.approx(a + qi, abs=1e-9 * (1 + a ** 3))


@settings(max_examples=300)
@given(a=st.floats(0.1, 10), g=st.floats(0, 3), qi=st.floats(-3, 3))
def test_strategy_foc_matches_quantity_locus(a, g, qi):
    game = EntangledGame(ModelParams(a, 1, 1), g)
    q_i = a + qi
    q_j = best_response(game, q_i)
    x = quantity_map_inverse(game, QuantityPair(q_j, q_i))
    assert abs(strategy_foc(game, x, 1)) <= 1e-8 * (1 + a ** 3)


def test_polynomial_classical(game_at):
    p = equilibrium_polynomial(game_at(0.0))
    assert p.degree == 9
    assert real_roots(p).roots == pytest.approx((2, 3, 4), abs=1e-9)
    oracle = grid_equilibria(game_at(0.0))
    assert len(oracle) == 3


@pytest.mark.parametrize("gamma, count", [(0.0, 3), (0.285, 5), (0.6, 1)])
def test_polynomial_root_counts(game_at, gamma, count):
    assert len(real_roots(equilibrium_polynomial(game_at(gamma)))) == count
    assert len(real_roots(equilibrium_polynomial(game_at(gamma), centered=True))) == count


def test_polynomial_centered_is_shift(game_at):
    game = game_at(0.4)
    p, c = equilibrium_polynomial(game), equilibrium_polynomial(game, centered=True)
    for q in np.linspace(0, 6, 13):
        assert p(q) == pytest.approx(c(q - 3), rel=1e-9, abs=1e-9)


def test_enumerate_classical(game_at):
    eqs = enumerate_equilibria(game_at(0.0))
    assert quantities(eqs) == [(2, 4), (3, 3), (4, 2)]
    assert [tuple(e.profits) for e in eqs] == pytest.approx([(7.75, 13.75), (10, 10), (13.75, 7.75)])
    assert [e.symmetric for e in eqs] == [False, True, False]
    assert not any(e.negative_quantity for e in eqs)


@pytest.mark.parametrize("gamma, count", [(0.285, 5), (0.6, 1)])
def test_enumerate_counts(game_at, gamma, count):
    eqs = enumerate_equilibria(game_at(gamma))
    assert len(eqs) == count
    assert sum(e.symmetric for e in eqs) == 1


def test_equilibrium_invariants(game_at):
    for g in np.linspace(0, 1, 21):
        game = game_at(float(g))
        for e in enumerate_equilibria(game):
            assert e.residual <= residual_tolerance(3.0)
            assert e.strategies == quantity_map_inverse(game, e.quantities)
            assert e.symmetric == (abs(e.quantities.q1 - e.quantities.q2) <= 1e-7)


def test_negative_quantities_flagged_not_dropped():
    # with a < 1 each classical asymmetric pair (a - 1, a + 1) has one negative firm
    game = EntangledGame(ModelParams(0.5, 1, 1), 0.0)
    eqs = enumerate_equilibria(game)
    assert len(eqs) == 3
    assert [e.negative_quantity for e in eqs] == [True, False, True]
    assert eqs[0].quantities == pytest.approx((-0.5, 1.5))


@pytest.mark.parametrize("gamma", np.linspace(0, 1, 11))
def test_set_is_swap_symmetric(game_at, gamma):
    qs = quantities(enumerate_equilibria(game_at(float(gamma))))
    swapped = sorted((q2, q1) for q1, q2 in qs)
    assert np.allclose(qs, swapped, atol=1e-8)


@pytest.mark.parametrize("gamma", np.linspace(0, 1, 11))
def test_mutual_best_responses(game_at, gamma):
    game = game_at(float(gamma))
    for e in enumerate_equilibria(game):
        q1, q2 = e.quantities
        assert best_response(game, q2) == pytest.approx(q1, abs=1e-8)
        assert best_response(game, q1) == pytest.approx(q2, abs=1e-8)


@pytest.mark.parametrize("gamma", [0.0, 0.1, 0.27, 0.285, 0.6])
def test_equilibria_are_local_maxima(game_at, gamma):
    game = game_at(gamma)
    h = 1e-3
    for e in enumerate_equilibria(game):
        x1, x2 = e.strategies
        for firm in (1, 2):
            def u(v):
                x = StrategyPair(v, x2) if firm == 1 else StrategyPair(x1, v)
                return profit_quantum(game, x)[firm - 1]
            xj = x1 if firm == 1 else x2
            second = (u(xj + h) - 2 * u(xj) + u(xj - h)) / h ** 2
            assert second <= 1e-6
            assert u(xj) >= max(u(xj + h), u(xj - h)) - 1e-9


@pytest.mark.parametrize("a", [0.3, 1.0, 3.0, 7.5])
def test_closed_form_classical(a):
    sol = symmetric_closed_form(EntangledGame(ModelParams(a, 1, 1), 0.0))
    assert sol.x_star == pytest.approx(a, abs=1e-13)
    assert sol.eta == pytest.approx(12 ** (1 / 6), rel=1e-15)


def test_closed_form_limit(params, game_at):
    q_star = pareto_optimum(params).q_star
    assert abs(symmetric_closed_form(game_at(20.0)).q_star_gamma - q_star) < 1e-6


def test_closed_form_matches_enumeration(game_at):
    game = game_at(0.6)
    (eq,) = enumerate_equilibria(game)
    assert symmetric_closed_form(game).q_star_gamma == pytest.approx(eq.quantities.q1, abs=1e-8)


@settings(max_examples=200)
@given(a=st.floats(0.1, 10), g=st.floats(0, 10))
def test_closed_form_on_locus(a, g):
    game = EntangledGame(ModelParams(a, 1, 1), g)
    sol = symmetric_closed_form(game)
    assert sol.eta > 0
    r1, r2 = br_residual(game, QuantityPair(sol.q_star_gamma, sol.q_star_gamma))
    assert max(abs(r1), abs(r2)) <= 1e-8 * (1 + a ** 3)


def test_symmetric_quantity_falls_to_optimum(params):
    q = [symmetric_closed_form(EntangledGame(params, float(g))).q_star_gamma for g in np.linspace(0, 10, 200)]
    assert q[0] == pytest.approx(3.0, abs=1e-13)
    assert all(b <= a + 1e-15 for a, b in zip(q, q[1:]))
    assert min(q) >= pareto_optimum(params).q_star - 1e-12


def test_pareto(params):
    po = pareto_optimum(params)
    assert po.q_star == pytest.approx(2.0, abs=1e-12)
    assert po.profit_each == pytest.approx(11.75, abs=1e-12)
    assert po.alpha == pytest.approx(0.873580464736, abs=1e-12)
    assert po.beta == pytest.approx((27 + math.sqrt(825)) ** (1 / 3), rel=1e-15)
    assert abs(po.foc_residual(3.0)) < 1e-10
    assert ALPHA == po.alpha


@pytest.mark.parametrize("a", [0.2, 1.0, 3.0, 6.0])
def test_pareto_beats_symmetric_equilibrium(a):
    params = ModelParams(a, 1, 2)
    joint = 2 * pareto_optimum(params).profit_each
    for g in (0.0, 0.3, 1.0):
        sym = [e for e in enumerate_equilibria(EntangledGame(params, g)) if e.symmetric]
        assert joint >= sum(sym[0].profits) - 1e-12


@pytest.mark.parametrize("a", [0.2, 1.0, 3.0, 6.0])
def test_pareto_maximises_symmetric_joint_profit(a):
    # brute-force scan of the symmetric diagonal
    params = ModelParams(a, 1, 2)
    grid = np.linspace(a - 4, a + 4, 80001)
    joint = 2 * ((a - grid) * grid - 0.25 * (grid - a) ** 4 + 2)
    assert pareto_optimum(params).q_star == pytest.approx(grid[np.argmax(joint)], abs=2e-4)


def test_asymmetry_identity_classical(game_at):
    game = game_at(0.0)
    eqs = enumerate_equilibria(game)
    assert asymmetry_identity(game, eqs[0]) == pytest.approx(0, abs=1e-14)
    assert asymmetry_identity(game, eqs[2]) == pytest.approx(0, abs=1e-14)
    with pytest.raises(SymmetricInput):
        asymmetry_identity(game, eqs[1])


def test_asymmetry_identity_entangled(game_at):
    game = game_at(0.285)
    asym = [e for e in enumerate_equilibria(game) if not e.symmetric]
    assert len(asym) == 4
    for e in asym:
        assert abs(asymmetry_identity(game, e)) <= 1e-8


def test_asymmetry_bound(game_at):
    assert asymmetry_bound(game_at(0.0)) == pytest.approx(math.sqrt(4 / 3), rel=1e-15)
    assert asymmetry_bound(game_at(0.296)) == pytest.approx(math.sqrt(4 / 3 * 2 / (math.exp(0.592) + 1)), rel=1e-14)
    assert asymmetry_bound(game_at(0.296)) == pytest.approx(0.9746, abs=1e-4)
    assert asymmetry_bound(game_at(50.0)) < 1e-20
