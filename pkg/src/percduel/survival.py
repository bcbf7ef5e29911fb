"""Bounded adversarial search: can Maker survive r rounds of the (1,2) game?

Maker's claims never change the passable graph (her edges plus unclaimed
edges is simply the complement of Breaker's set), so her claims matter only
as denials.  Breaker wins by round r exactly when he owns the full edge
boundary of some finite vertex region W containing the origin, and with 2r
claims available only regions with |boundary(W)| <= 2r qualify; the edge
isoperimetric bound 4|W| - 2e(W) then caps |W| at floor((r/2)^2).  The game
is therefore equivalent to a blocking game on that finite family of cuts:

* Breaker claims any 2 unclaimed edges of still-completable cuts per round
  (claiming elsewhere or claiming fewer is dominated),
* Maker claims 1 such edge per round (likewise dominated otherwise),
* Breaker wins when some cut is fully his.

The search runs plain boolean minimax over this reduced game with a
transposition table keyed on dihedrally-canonicalised positions; exceeding
the node budget reports an explicit inconclusive result, never a guess.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

from .lattice import Edge, Vertex, edge_between, edge_sort_key

_TRANSFORMS = (
    lambda x, y: (x, y),
    lambda x, y: (-x, y),
    lambda x, y: (x, -y),
    lambda x, y: (-x, -y),
    lambda x, y: (y, x),
    lambda x, y: (-y, x),
    lambda x, y: (y, -x),
    lambda x, y: (-y, -x),
)


class SearchBudgetExceeded(Exception):
    pass


@dataclass
class SurvivalResult:
    rounds: int
    survives: bool | None  # None = inconclusive (budget exceeded)
    nodes: int
    elapsed: float
    cuts: int
    note: str = ""

    def __bool__(self) -> bool:  # pragma: no cover - convenience only
        return bool(self.survives)


def _neighbours(v: Vertex):
    x, y = v
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def _vertex_cut(region: frozenset[Vertex]) -> frozenset[Edge]:
    out = set()
    for v in region:
        for nb in _neighbours(v):
            if nb not in region:
                out.add(edge_between(v, nb))
    return frozenset(out)


def minimal_cuts(rounds: int) -> list[frozenset[Edge]]:
    """Edge boundaries of connected origin regions completable within the
    round budget (|cut| <= 2 rounds)."""
    cap = int((rounds / 2) ** 2)
    cuts: set[frozenset[Edge]] = set()
    level: set[frozenset[Vertex]] = {frozenset({(0, 0)})}
    for _size in range(1, cap + 1):
        for region in level:
            cut = _vertex_cut(region)
            if len(cut) <= 2 * rounds:
                cuts.add(cut)
        grown: set[frozenset[Vertex]] = set()
        for region in level:
            for v in region:
                for nb in _neighbours(v):
                    if nb not in region:
                        grown.add(region | {nb})
        level = grown
    return sorted(cuts, key=lambda c: (len(c), tuple(sorted(c, key=edge_sort_key))))


def _permutations(universe: list[Edge]) -> list[tuple[int, ...]]:
    from .lattice import endpoints

    index = {e: i for i, e in enumerate(universe)}
    perms: list[tuple[int, ...]] = []
    for t in _TRANSFORMS:
        perm = []
        for e in universe:
            a, b = endpoints(e)
            et = edge_between(t(*a), t(*b))
            perm.append(index[et])
        perms.append(tuple(perm))
    return perms


def _apply_perm(mask: int, perm: tuple[int, ...]) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


class _Search:
    def __init__(self, rounds: int, node_budget: int, forced_line_maker: bool):
        self.rounds = rounds
        self.node_budget = node_budget
        self.forced = forced_line_maker
        cuts = minimal_cuts(rounds)
        universe = sorted({e for c in cuts for e in c}, key=edge_sort_key)
        self.universe = universe
        index = {e: i for i, e in enumerate(universe)}
        self.cut_masks = [
            sum(1 << index[e] for e in c) for c in cuts
        ]
        self.perms = _permutations(universe)
        self.line_bits = [
            index.get(("H", x, 0)) for x in range(0, 40)
        ]
        self.memo: dict[tuple, bool] = {}
        self.nodes = 0

    def _canon(self, maker: int, breaker: int) -> tuple[int, int]:
        best = (maker, breaker)
        for perm in self.perms[1:]:
            cand = (_apply_perm(maker, perm), _apply_perm(breaker, perm))
            if cand < best:
                best = cand
        return best

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SearchBudgetExceeded

    def _live(self, maker: int, breaker: int, done: int) -> list[int]:
        cap = 2 * (self.rounds - done)
        out = []
        for c in self.cut_masks:
            if c & maker:
                continue
            missing = c & ~breaker
            if bin(missing).count("1") <= cap:
                out.append(missing)
        return out

    def maker_node(self, maker: int, breaker: int, done: int) -> bool:
        self._tick()
        live = self._live(maker, breaker, done)
        if not live:
            return True
        key = ("M", done) + self._canon(maker, breaker) if not self.forced else (
            "M", done, maker, breaker)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if self.forced:
            move = self._forced_line_move(maker, breaker)
            result = self.breaker_node(maker | move, breaker, done)
            self.memo[key] = result
            return result
        live.sort(key=lambda m: bin(m).count("1"))
        candidates: list[int] = []
        seen = 0
        for missing in live:
            bits = missing & ~maker & ~seen
            seen |= bits
            while bits:
                low = bits & -bits
                candidates.append(low)
                bits ^= low
        result = False
        for bit in candidates:
            if self.breaker_node(maker | bit, breaker, done):
                result = True
                break
        self.memo[key] = result
        return result

    def _forced_line_move(self, maker: int, breaker: int) -> int:
        for bit in self.line_bits:
            if bit is None:
                return 0  # the forced edge left the cut universe: irrelevant
            b = 1 << bit
            if not ((maker | breaker) & b):
                return b
        return 0

    def breaker_node(self, maker: int, breaker: int, done: int) -> bool:
        """True when Maker survives every Breaker reply from here."""
        self._tick()
        live = self._live(maker, breaker, done)
        if not live:
            return True
        key = ("B", done) + self._canon(maker, breaker) if not self.forced else (
            "B", done, maker, breaker)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        useful = 0
        for missing in live:
            useful |= missing
        bits = []
        m = useful
        while m:
            low = m & -m
            bits.append(low)
            m ^= low
        # Immediate threats first: replies finishing a near-complete cut.
        near = [miss for miss in live if bin(miss).count("1") <= 2]
        result = True
        replies: list[int]
        if len(bits) >= 2:
            replies = [a | b for a, b in combinations(bits, 2)]
        else:
            replies = [bits[0]] if bits else [0]

        def reply_rank(p: int) -> int:
            return min((bin(miss & ~p).count("1") for miss in live), default=9)

        replies.sort(key=reply_rank)
        for p in replies:
            nb = breaker | p
            lost = any(miss & ~nb == 0 for miss in near) or any(
                miss & ~nb == 0 for miss in live)
            if lost:
                result = False
                break
            if done + 1 == self.rounds:
                continue
            if not self.maker_node(maker, nb, done + 1):
                result = False
                break
        self.memo[key] = result
        return result


def survival_search(
    rounds: int,
    *,
    node_budget: int = 50_000_000,
    forced_line_maker: bool = False,
) -> SurvivalResult:
    """Does Maker survive `rounds` full rounds of the (1,2) game on Z^2
    against every Breaker reply?  Exact within the stated reduction; an
    exceeded budget yields survives=None."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    start = time.time()
    search = _Search(rounds, node_budget, forced_line_maker)
    try:
        value = search.maker_node(0, 0, 0)
        return SurvivalResult(
            rounds=rounds, survives=value, nodes=search.nodes,
            elapsed=time.time() - start, cuts=len(search.cut_masks))
    except SearchBudgetExceeded:
        return SurvivalResult(
            rounds=rounds, survives=None, nodes=search.nodes,
            elapsed=time.time() - start, cuts=len(search.cut_masks),
            note=f"node budget {node_budget} exceeded")
