"""The (1,2) survival search and its reduction."""

import random

import pytest

from percduel.engine import Bias, Status, apply_move, breaker_won, new_game
from percduel.survival import minimal_cuts, survival_search
from percduel.lattice import edge_sort_key


@pytest.fixture(scope="module")
def results():
    return {r: survival_search(r) for r in (1, 2, 3, 4, 5)}


def test_cut_family_small_rounds():
    assert minimal_cuts(1) == []          # no region has boundary <= 2
    assert len(minimal_cuts(2)) == 1      # the origin's star
    assert len(minimal_cuts(3)) == 5      # star + the four dominoes
    assert len(minimal_cuts(5)) == 151


def test_cut_family_matches_engine_confinement():
    """A claim set confines the origin iff it contains some enumerated cut."""
    cuts = minimal_cuts(5)
    universe = sorted({e for c in cuts for e in c}, key=edge_sort_key)
    rng = random.Random(3)
    for _ in range(400):
        claims = set(rng.sample(universe, 10))
        by_cuts = any(c <= claims for c in cuts)
        g = new_game("unlimited", Bias(1, 20), None, (0, 0))
        g.breaker.update(claims)
        g._grow_claims_box(claims)
        assert by_cuts == breaker_won(g)


def test_survival_values_up_to_four(results):
    for r in (1, 2, 3, 4):
        assert results[r].survives is True, r


def test_survival_round_five_is_refuted(results):
    """The search conclusively refutes 5-round survival; the witness line is
    pinned below so the refutation stays verified against the engine."""
    res = results[5]
    assert res.survives is False
    assert res.nodes < 10_000_000


def test_survival_monotone(results):
    values = [results[r].survives for r in (1, 2, 3, 4, 5)]
    # once False, never True again at deeper rounds
    seen_false = False
    for v in values:
        if seen_false:
            assert v is not True
        if v is False:
            seen_false = True


def test_breaker_witness_line_wins_in_engine():
    """The box fence found by the search, replayed move for move."""
    g = new_game("unlimited", Bias(1, 2), None, (0, 0))
    maker = [("H", -1, 0), ("V", -1, -1), ("H", -1, -1), ("V", -1, 0), ("H", -1, 1)]
    breaker = [
        [("H", -2, 0), ("H", 0, 0)],
        [("H", -2, -1), ("V", -1, -2)],
        [("H", 0, -1), ("V", 0, -2)],
        [("H", -2, 1), ("V", -1, 1)],
        [("H", 0, 1), ("V", 0, 1)],
    ]
    for i in range(5):
        apply_move(g, "maker", [maker[i]])
        apply_move(g, "breaker", breaker[i])
        if i < 4:
            assert g.status is Status.ONGOING
    assert g.status is Status.BREAKER_WON
    assert g.round_no == 5


def test_forced_line_maker_loses_at_five():
    res = survival_search(5, forced_line_maker=True)
    assert res.survives is False


def test_budget_exhaustion_is_explicit():
    res = survival_search(5, node_budget=50)
    assert res.survives is None
    assert "budget" in res.note
