import numpy as np
import pytest

from qcournot.bifurcation import (
    TABLE_COLUMNS,
    InvalidRange,
    PatternNotFound,
    equilibrium_count,
    find_thresholds,
    profit_branches,
    sweep,
)
from qcournot.equilibria import asymmetry_bound, enumerate_equilibria
from qcournot.model import EntangledGame, ModelParams


@pytest.fixture(scope="module")
def thresholds():
    return find_thresholds(ModelParams(3, 5, 10))


@pytest.mark.parametrize("lo, hi, steps, count", [(0, 0.2, 3, 3), (0.27, 0.29, 3, 5), (0.4, 1.0, 4, 1)])
def test_sweep_plateaus(params, lo, hi, steps, count):
    recs = sweep(params, lo, hi, steps)
    assert [r.gamma for r in recs] == pytest.approx(np.linspace(lo, hi, steps).tolist())
    assert all(r.count == count for r in recs)


@pytest.mark.parametrize("lo, hi, steps", [(0, 1, 1), (0.5, 0.5, 3), (-0.1, 1, 3), (0, 51, 3)])
def test_sweep_rejects_bad_range(params, lo, hi, steps):
    with pytest.raises(InvalidRange):
        sweep(params, lo, hi, steps)


def test_sweep_structure(params):
    for rec in sweep(params, 0.0, 1.0, 101):
        sym = [e for e in rec.equilibria if e.symmetric]
        assert len(sym) == 1
        assert (rec.count - 1) % 2 == 0
        q1 = [e.quantities.q1 for e in rec.equilibria]
        assert q1 == sorted(q1)
        bound = asymmetry_bound(EntangledGame(params, rec.gamma))
        for e in rec.equilibria:
            if not e.symmetric:
                assert abs(e.quantities.q1 - params.a) <= bound + 1e-8


def test_thresholds_values(thresholds):
    assert 0.250 <= thresholds.gamma1 <= 0.260
    assert 0.291 <= thresholds.gamma2 <= 0.301
    assert 0 < thresholds.gamma1 < thresholds.gamma2
    assert thresholds.bracket_width <= 1e-6


def test_threshold_counts(params, thresholds):
    assert equilibrium_count(params, thresholds.gamma1 - 1e-6) == 3
    assert equilibrium_count(params, thresholds.gamma1 + 1e-6) == 5
    assert equilibrium_count(params, thresholds.gamma2 - 1e-3) > 1
    assert equilibrium_count(params, thresholds.gamma2 + 1e-6) == 1
    assert equilibrium_count(params, thresholds.gamma2 + 1e-3) == 1


def test_pitchfork_is_exact(thresholds):
    # for a = 3 the symmetric branch splits at s = -1/2, tanh(gamma) = 1/4
    assert thresholds.gamma1_tangency == pytest.approx(np.arctanh(0.25), abs=1e-14)
    assert abs(thresholds.gamma1_tangency - thresholds.gamma1) <= thresholds.bracket_width


def test_count_at_fold_tangency(params, thresholds):
    g2 = thresholds.gamma2_tangency
    assert g2 is not None and abs(g2 - thresholds.gamma2) <= thresholds.bracket_width
    eqs = enumerate_equilibria(EntangledGame(params, g2))
    assert len(eqs) == 3
    assert [e.tangency for e in eqs] == [True, False, True]


def test_pattern_not_found_carries_sequence():
    with pytest.raises(PatternNotFound) as info:
        find_thresholds(ModelParams(0.1, 1, 1))
    assert info.value.observed == [3]


def test_profit_branches_table(params):
    rows = profit_branches(params, 0.0, 5.0, 101)
    assert set(rows[0]) == set(TABLE_COLUMNS)
    sym = [r for r in rows if r["symmetric"]]
    assert len(sym) == 101
    assert sym[0]["u1"] == pytest.approx(10.0, abs=1e-12)
    u = [r["u1"] for r in sym]
    assert all(b >= a - 1e-12 for a, b in zip(u, u[1:]))
    assert max(u) <= 11.75 + 1e-9
    assert abs(sym[-1]["u1"] - 11.75) < 0.01
    assert all(r["u_pareto"] == pytest.approx(11.75) and r["u_classical_sym"] == 10 for r in rows)
    first = [(r["u1"], r["u2"]) for r in rows if r["gamma"] == 0 and not r["symmetric"]]
    assert sorted(first) == pytest.approx([(7.75, 13.75), (13.75, 7.75)])


def test_branch_ids_are_continuous(params):
    rows = profit_branches(params, 0.0, 0.8, 200)
    by_id = {}
    for r in rows:
        by_id.setdefault(r["branch_id"], []).append(r)
    # three branches from gamma = 0, two born at gamma1; all but the symmetric die at gamma2
    assert len(by_id) == 5
    sym_ids = {r["branch_id"] for r in rows if r["symmetric"]}
    assert len(sym_ids) == 1
    for branch in by_id.values():
        steps = [abs(b["q1"] - a["q1"]) + abs(b["q2"] - a["q2"]) for a, b in zip(branch, branch[1:])]
        assert max(steps, default=0) < 0.2
