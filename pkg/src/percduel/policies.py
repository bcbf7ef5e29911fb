"""Maker opponents used to exercise and falsify the Breaker strategies.

All policies are stateful per game (bind happens lazily on the first move)
and emit only moves that pass the engine's legality check.  Seeds make every
move sequence reproducible.

Policy spec strings for the CLI and batch harness:

    random:<seed>
    greedy:<seed>
    banking:<seed>[:<m1,m2,...>]
    wrapped:<inner spec>
    minimax:<rounds>          (survival-optimal (1,2) Maker within the horizon)
    line                      (degenerate straight-line Maker, for controls)
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass

from .engine import GameState, Variant
from .lattice import (
    H,
    V,
    Box,
    Edge,
    Vertex,
    edge_sort_key,
    endpoints,
    incident_edges,
    vertex_box,
)


class PolicyError(ValueError):
    pass


def _required_claims(state: GameState) -> int:
    boost = state.bias.c if state.round_no == 0 else 0
    return state.bias.m + boost


def _edge_box(e: Edge) -> Box:
    a, b = endpoints(e)
    return vertex_box(a).hull(vertex_box(b))


class _Pool:
    """Uniform sampling with lazy invalidation (swap-pop on stale hits)."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.items: list[Edge] = []
        self.known: set[Edge] = set()

    def add(self, e: Edge) -> None:
        if e not in self.known:
            self.known.add(e)
            self.items.append(e)

    def draw(self, valid) -> Edge | None:
        items = self.items
        while items:
            i = self.rng.randrange(len(items))
            e = items[i]
            if valid(e):
                return e
            items[i] = items[-1]
            items.pop()
        return None


class _VariantSampler:
    """Draws legal single-edge extensions for either constrained variant,
    tracking the extensions provisionally made within the current move."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.pool = _Pool(rng)
        self.box: Box | None = None
        self.state: GameState | None = None

    def bind(self, state: GameState) -> None:
        self.state = state
        if state.variant is Variant.BOX_LIMITED:
            self.box = vertex_box(state.origin)
        for e in incident_edges(state.origin):
            self._offer(e)

    def _offer(self, e: Edge) -> None:
        if self.state.board is None or self.state.board.is_open(e):
            self.pool.add(e)

    def _valid(self, e: Edge, chosen: set[Edge], extra: set[Vertex]) -> bool:
        state = self.state
        if e in chosen or state.is_claimed(e):
            return False
        if state.board is not None and not state.board.is_open(e):
            return False
        a, b = endpoints(e)
        if state.variant is Variant.LIMITED:
            verts = state._maker_vertices
            return a in verts or b in verts or a in extra or b in extra
        return self.box.contains_vertex(a) or self.box.contains_vertex(b)

    def accept(self, e: Edge, extra: set[Vertex]) -> None:
        """Register a chosen edge: grow the region and offer new candidates."""
        state = self.state
        if state.variant is Variant.LIMITED:
            for v in endpoints(e):
                extra.add(v)
                for f in incident_edges(v):
                    self._offer(f)
            return
        new = self.box.hull(_edge_box(e))
        if new != self.box:
            for y in range(new.ymin, new.ymax + 1):
                for x in range(new.xmin, new.xmax + 1):
                    if not self.box.contains_vertex((x, y)):
                        for f in incident_edges((x, y)):
                            self._offer(f)
            self.box = new

    def draw(self, chosen: set[Edge], extra: set[Vertex]) -> Edge | None:
        return self.pool.draw(lambda f: self._valid(f, chosen, extra))


class RandomMaker:
    """Claims the round's full budget, uniformly at random edge by edge
    among the variant's legal single-edge extensions.

    Unlimited on the full lattice samples uniformly over the active box
    (claims bounding box grown by 2); a uniform measure over all of the
    lattice does not exist.
    """

    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.state: GameState | None = None
        self.sampler: _VariantSampler | None = None
        self.open_pool: _Pool | None = None

    def _bind(self, state: GameState) -> None:
        self.state = state
        if state.variant is Variant.UNLIMITED:
            if state.board is not None:
                self.open_pool = _Pool(self.rng)
                for e in state.board.open_sorted():
                    self.open_pool.add(e)
        else:
            self.sampler = _VariantSampler(self.rng)
            self.sampler.bind(state)

    def _lattice_uniform(self, chosen: set[Edge]) -> Edge | None:
        state = self.state
        box = (state.claims_box() or vertex_box(state.origin)).expand(2)
        for _ in range(10_000):
            orient = self.rng.choice((H, V))
            x = self.rng.randint(box.xmin, box.xmax - (1 if orient == H else 0))
            y = self.rng.randint(box.ymin, box.ymax - (1 if orient == V else 0))
            e = (orient, x, y)
            if e not in chosen and not state.is_claimed(e):
                return e
        return None  # pragma: no cover - the active box is never that full

    def move(self, state: GameState) -> list[Edge]:
        if self.state is None:
            self._bind(state)
        move: list[Edge] = []
        chosen: set[Edge] = set()
        extra: set[Vertex] = set()
        for _ in range(_required_claims(state)):
            if state.variant is Variant.UNLIMITED:
                if state.board is None:
                    e = self._lattice_uniform(chosen)
                else:
                    e = self.open_pool.draw(
                        lambda f: f not in chosen and not state.is_claimed(f))
            else:
                e = self.sampler.draw(chosen, extra)
            if e is None:
                break
            move.append(e)
            chosen.add(e)
            if self.sampler is not None:
                self.sampler.accept(e, extra)
        return move


class GreedyBoundaryMaker:
    """Grows a connected graph from the origin, each edge maximising the
    resulting free boundary (ties broken by the seed).

    Empirically the hardest legal Maker for boundary-counting Breakers:
    path-like growth beats square-closing, and awful edges are claimed only
    when nothing better remains.  Scores live in a lazy heap; a claim only
    perturbs scores within distance two, so those entries are re-pushed.
    """

    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.state: GameState | None = None
        self.vset: set[Vertex] = set()
        self.score: dict[Edge, int] = {}
        self.heap: list[tuple[int, float, Edge]] = []
        self._breaker_seen = 0
        self._fallback: _Pool | None = None

    def _bind(self, state: GameState) -> None:
        self.state = state
        self.vset = {state.origin}
        for e in incident_edges(state.origin):
            if state.is_playable(e):
                self._push(e)
        if state.variant is Variant.UNLIMITED and state.board is not None:
            self._fallback = _Pool(self.rng)
            for e in state.board.open_sorted():
                self._fallback.add(e)

    def _gain(self, e: Edge) -> int:
        gain = -1
        a, b = endpoints(e)
        for w, other in ((a, b), (b, a)):
            if w in self.vset:
                continue
            x, y = w
            for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if nb == other or nb in self.vset:
                    continue
                f = (H, min(x, nb[0]), y) if nb[1] == y else (V, x, min(y, nb[1]))
                if self.state.is_playable(f):
                    gain += 1
        return gain

    def _push(self, e: Edge) -> None:
        g = self._gain(e)
        self.score[e] = g
        heapq.heappush(self.heap, (-g, self.rng.random(), e))

    def _sync_breaker(self, state: GameState) -> None:
        log = state.breaker_log
        while self._breaker_seen < len(log):
            e = log[self._breaker_seen]
            self.score.pop(e, None)
            self._refresh_near(e)
            self._breaker_seen += 1

    def _refresh_near(self, e: Edge) -> None:
        """Re-score boundary candidates within the claim's influence."""
        hot: set[Vertex] = set()
        for v in endpoints(e):
            hot.add(v)
            hot.update(_neighbours4(v))
        for v in hot:
            for f in incident_edges(v):
                if f in self.score:
                    self._push(f)

    def _boundary_candidate(self, f: Edge) -> bool:
        a, b = endpoints(f)
        return (a in self.vset or b in self.vset) and self.state.is_playable(f)

    def _claim(self, e: Edge) -> None:
        self.score.pop(e, None)
        a, b = endpoints(e)
        self.vset.add(a)
        self.vset.add(b)
        for w in (a, b):
            for f in incident_edges(w):
                if f != e and self.state.is_playable(f) and f not in self.score:
                    self._push(f)
        self._refresh_near(e)

    def move(self, state: GameState) -> list[Edge]:
        if self.state is None:
            self._bind(state)
        self._sync_breaker(state)
        move: list[Edge] = []
        chosen: set[Edge] = set()
        for _ in range(_required_claims(state)):
            pick: Edge | None = None
            while self.heap:
                negg, _, e = self.heap[0]
                if e not in self.score or e in chosen or not self._boundary_candidate(e):
                    heapq.heappop(self.heap)
                    if e not in chosen and not self._boundary_candidate(e):
                        self.score.pop(e, None)
                    continue
                if -negg != self.score[e]:
                    heapq.heappop(self.heap)  # stale score entry
                    continue
                pick = e
                heapq.heappop(self.heap)
                break
            if pick is None and self._fallback is not None:
                pick = self._fallback.draw(
                    lambda f: f not in chosen and state.is_playable(f))
                if pick is not None:
                    move.append(pick)
                    chosen.add(pick)
                    continue
            if pick is None:
                break
            move.append(pick)
            chosen.add(pick)
            self._claim(pick)
        return move


def _neighbours4(v: Vertex) -> tuple[Vertex, Vertex, Vertex, Vertex]:
    x, y = v
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


class BankingMaker:
    """Banks budget per an explicit schedule of per-round claim counts, then
    claims m per round; edges drawn like RandomMaker."""

    def __init__(self, seed: int, schedule: tuple[int, ...] = ()):
        self.schedule = tuple(schedule)
        self.rng = random.Random(seed)
        self.sampler: _VariantSampler | None = None
        self._validated = False

    def _validate(self, state: GameState) -> None:
        m, c = state.bias.m, state.bias.c
        total = 0
        for i, count in enumerate(self.schedule, start=1):
            if count < 0:
                raise PolicyError("schedule counts must be non-negative")
            total += count
            if total > i * m + c:
                raise PolicyError(
                    f"schedule violates the budget at round {i}: {total} > {i * m + c}")
        self._validated = True

    def move(self, state: GameState) -> list[Edge]:
        if not self._validated:
            self._validate(state)
        if self.sampler is None:
            if state.variant is Variant.UNLIMITED:
                raise PolicyError("banking applies to the budgeted variants")
            self.sampler = _VariantSampler(self.rng)
            self.sampler.bind(state)
        idx = state.round_no  # rounds completed; we move in round idx+1
        if idx < len(self.schedule):
            want = min(self.schedule[idx], state.maker_budget())
        else:
            want = min(state.bias.m, state.maker_budget())
        move: list[Edge] = []
        chosen: set[Edge] = set()
        extra: set[Vertex] = set()
        for _ in range(want):
            e = self.sampler.draw(chosen, extra)
            if e is None:
                break
            move.append(e)
            chosen.add(e)
            self.sampler.accept(e, extra)
        return move


class _Shadow:
    """Just enough unlimited-game state for an inner policy to play against."""

    def __init__(self, state: GameState):
        self.variant = Variant.UNLIMITED
        self.bias = state.bias
        self.board = state.board
        self.origin = state.origin
        self.maker: set[Edge] = set()
        self.breaker: set[Edge] = set()
        self.round_no = 0
        self.maker_counts: list[int] = []
        self.last_maker_edges: tuple[Edge, ...] = ()
        self.maker_log: list[Edge] = []
        self.breaker_log: list[Edge] = []
        self._maker_vertices = {state.origin}
        self._claims_box: Box | None = None

    is_claimed = GameState.is_claimed
    is_playable = GameState.is_playable
    claims_box = GameState.claims_box
    _grow_claims_box = GameState._grow_claims_box

    def maker_budget(self) -> int:
        return (self.round_no + 1) * self.bias.m + self.bias.c - sum(self.maker_counts)


class ImaginaryEdgeWrapper:
    """Turns an unlimited-game policy into a limited/box-limited one.

    Inner moves that would leave the origin's component (box-component) are
    held back as imaginary and released in the round where a played edge
    first puts them inside.  Released claims always fit the budget: the
    inner game spends exactly its per-round allowance, and we never play
    more than was proposed.
    """

    def __init__(self, inner):
        self.inner = inner
        self.shadow: _Shadow | None = None
        self.bank: set[Edge] = set()
        self._breaker_seen = 0

    def _sync(self, state: GameState) -> None:
        if self.shadow is None:
            self.shadow = _Shadow(state)
        log = state.breaker_log
        fresh = log[self._breaker_seen:]
        if fresh:
            self.shadow.breaker.update(fresh)
            self.shadow._grow_claims_box(fresh)
            self._breaker_seen = len(log)

    def move(self, state: GameState) -> list[Edge]:
        if state.variant is Variant.UNLIMITED:
            raise PolicyError("wrap a policy for the limited variants only")
        self._sync(state)
        shadow = self.shadow
        proposed = list(self.inner.move(shadow))
        shadow.maker.update(proposed)
        shadow.maker_log.extend(proposed)
        for e in proposed:
            for v in endpoints(e):
                shadow._maker_vertices.add(v)
        shadow.maker_counts.append(len(proposed))
        shadow.last_maker_edges = tuple(proposed)
        shadow._grow_claims_box(proposed)
        shadow.round_no += 1

        pending = set(proposed) | self.bank
        placed: list[Edge] = []
        budget = state.maker_budget()
        if state.variant is Variant.LIMITED:
            verts = set(state._maker_vertices)

            def fits(e: Edge) -> bool:
                a, b = endpoints(e)
                return a in verts or b in verts

            def take(e: Edge) -> None:
                verts.update(endpoints(e))
        else:
            from .lattice import box_component_of

            region = (box_component_of(state.maker, state.origin)
                      if state.maker else vertex_box(state.origin))

            def fits(e: Edge) -> bool:
                a, b = endpoints(e)
                return region.contains_vertex(a) or region.contains_vertex(b)

            def take(e: Edge) -> None:
                nonlocal region
                region = region.hull(_edge_box(e))

        changed = True
        while changed and len(placed) < budget:
            changed = False
            for e in sorted(pending, key=edge_sort_key):
                if len(placed) >= budget:
                    break
                if fits(e):
                    placed.append(e)
                    pending.discard(e)
                    take(e)
                    changed = True
        self.bank = pending
        return placed


class MinimaxMaker:
    """Plays the survival-optimal denial in the (1,2) game: each round a cut
    edge from which the bounded search still certifies survival, falling
    back to random play once the horizon has passed or nothing survives."""

    def __init__(self, rounds: int, seed: int = 0):
        if rounds < 1:
            raise PolicyError("minimax horizon must be >= 1")
        self.rounds = rounds
        self.fallback = RandomMaker(seed ^ 0x5EED)
        self.search = None
        self.origin = None

    def _bind(self, state: GameState) -> None:
        from .survival import _Search

        if state.variant is not Variant.UNLIMITED or state.board is not None \
                or (state.bias.m, state.bias.b) != (1, 2):
            raise PolicyError("minimax plays the (1,2) game on the lattice")
        self.origin = state.origin
        self.search = _Search(self.rounds, 50_000_000, False)

    def _mask(self, state: GameState, edges) -> int:
        ox, oy = self.origin
        idx = self.search.universe
        table = {e: i for i, e in enumerate(idx)}
        mask = 0
        for orient, x, y in edges:
            key = (orient, x - ox, y - oy)
            if key in table:
                mask |= 1 << table[key]
        return mask

    def move(self, state: GameState) -> list[Edge]:
        if self.search is None:
            self._bind(state)
        done = state.round_no
        if done >= self.rounds:
            return self.fallback.move(state)
        maker = self._mask(state, state.maker)
        breaker = self._mask(state, state.breaker)
        live = self.search._live(maker, breaker, done)
        if not live:
            return self.fallback.move(state)
        ox, oy = self.origin
        candidates = []
        seen = 0
        for missing in sorted(live, key=lambda m: bin(m).count("1")):
            bits = missing & ~maker & ~seen
            seen |= bits
            while bits:
                low = bits & -bits
                candidates.append(low)
                bits ^= low
        pick = None
        for bit in candidates:
            if self.search.breaker_node(maker | bit, breaker, done):
                pick = bit
                break
        if pick is None and candidates:
            pick = candidates[0]
        if pick is None:
            return self.fallback.move(state)
        orient, x, y = self.search.universe[pick.bit_length() - 1]
        return [(orient, x + ox, y + oy)]


class LineMaker:
    """Degenerate control: claims the least unclaimed edges of the +x ray."""

    def __init__(self, seed: int = 0):
        self.next_x = 0

    def move(self, state: GameState) -> list[Edge]:
        move: list[Edge] = []
        x = self.next_x
        want = _required_claims(state)
        while len(move) < want and x < self.next_x + 10_000:
            e = (H, x, 0)
            if state.is_playable(e):
                move.append(e)
            x += 1
        self.next_x = x
        return move


@dataclass(frozen=True)
class PolicySpec:
    """Parsed policy string; build() yields a fresh per-game policy."""

    kind: str
    seed: int = 0
    schedule: tuple[int, ...] = ()
    rounds: int = 4
    inner: "PolicySpec | None" = None

    def build(self, seed_offset: int = 0):
        seed = (self.seed + 0x9E3779B9 * (seed_offset + 1)) & 0xFFFFFFFF
        if self.kind == "random":
            return RandomMaker(seed)
        if self.kind == "greedy":
            return GreedyBoundaryMaker(seed)
        if self.kind == "banking":
            return BankingMaker(seed, self.schedule)
        if self.kind == "wrapped":
            return ImaginaryEdgeWrapper(self.inner.build(seed_offset))
        if self.kind == "minimax":
            return MinimaxMaker(self.rounds, seed)
        if self.kind == "line":
            return LineMaker(seed)
        raise PolicyError(f"unknown policy kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "wrapped":
            return f"wrapped:{self.inner.describe()}"
        if self.kind == "banking" and self.schedule:
            return f"banking:{self.seed}:{','.join(map(str, self.schedule))}"
        if self.kind == "minimax":
            return f"minimax:{self.rounds}"
        if self.kind == "line":
            return "line"
        return f"{self.kind}:{self.seed}"


def parse_policy(spec: str) -> PolicySpec:
    parts = spec.split(":")
    kind = parts[0]
    if kind == "wrapped":
        if len(parts) < 2:
            raise PolicyError("wrapped needs an inner policy, e.g. wrapped:random:7")
        return PolicySpec(kind="wrapped", inner=parse_policy(":".join(parts[1:])))
    if kind == "line":
        return PolicySpec(kind="line")
    if kind == "minimax":
        rounds = int(parts[1]) if len(parts) > 1 else 4
        return PolicySpec(kind="minimax", rounds=rounds)
    if kind in ("random", "greedy"):
        seed = int(parts[1]) if len(parts) > 1 else 0
        return PolicySpec(kind=kind, seed=seed)
    if kind == "banking":
        seed = int(parts[1]) if len(parts) > 1 else 0
        schedule = tuple(int(t) for t in parts[2].split(",")) if len(parts) > 2 else ()
        return PolicySpec(kind="banking", seed=seed, schedule=schedule)
    raise PolicyError(f"unknown policy spec {spec!r}")
