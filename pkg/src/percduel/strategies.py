"""Breaker's three strategies and their supporting classifiers.

* Strategy 3 (box-limited, b = 2m - s, m >= 29): three rounds of gate-and-fence
  play around the bounding boxes of Maker's graph.
* Strategy 4 (limited, b = 2m): claim free-boundary edges by classification
  priority good > bad > awful.
* Strategy 5 ((1,1) on a polluted board): barrier pairing inside B_{d+1}
  around a certified origin.

Edge classification (relative to Maker's connected graph C):

    awful  if |boundary(C+e)| - |boundary(C)| <= 1
    bad    if not awful but claiming e creates a new boundary edge touching e
           that is awful for C+e
    good   otherwise

The boundary delta is local: claiming e removes it from the boundary and
adds the edges at e's new endpoint whose far end is also outside V(C).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .boards import BarrednessCertificate, cluster_edges
from .engine import GameState, Variant, breaker_won, free_boundary
from .lattice import (
    H,
    V,
    Box,
    Edge,
    Vertex,
    ball,
    bounding_box,
    box_component_of,
    box_components_with_members,
    edge_between,
    edge_boundary,
    edge_sort_key,
    endpoints,
    sorted_edges,
    vertex_box,
    vertices_of,
)
from .match import FORFEIT

AWFUL = "awful"
BAD = "bad"
GOOD = "good"


class StrategyPrecondition(ValueError):
    """The game's variant or bias is outside the strategy's guarantee."""


# ---------------------------------------------------------------------------
# Classification (Strategy 4's core)


def _neighbours(v: Vertex) -> tuple[Vertex, Vertex, Vertex, Vertex]:
    x, y = v
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def boundary_delta(vset: set[Vertex] | frozenset[Vertex], e: Edge) -> int:
    """|boundary(C+e)| - |boundary(C)| for e in the boundary of C, V(C)=vset."""
    a, b = endpoints(e)
    delta = -1
    for w, other in ((a, b), (b, a)):
        if w in vset:
            continue
        for nb in _neighbours(w):
            if nb != other and nb not in vset:
                delta += 1
    return delta


def _new_boundary_edges(vset, e: Edge) -> list[Edge]:
    """Boundary edges created by claiming e; all of them touch e."""
    a, b = endpoints(e)
    out = []
    for w, other in ((a, b), (b, a)):
        if w in vset:
            continue
        for nb in _neighbours(w):
            if nb != other and nb not in vset:
                out.append(edge_between(w, nb))
    return out


def classify_edge(
    maker: set[Edge] | frozenset[Edge],
    e: Edge,
    *,
    origin: Vertex | None = None,
    vset: set[Vertex] | None = None,
) -> str:
    """Class of a boundary edge e relative to Maker's graph.

    Pass ``vset`` (the graph's vertex set, or {origin} for the empty graph)
    to skip recomputing it in hot loops.
    """
    if vset is None:
        vset = vertices_of(maker) if maker else None
        if vset is None:
            if origin is None:
                raise StrategyPrecondition("empty graph needs an origin")
            vset = {origin}
    if e in maker:
        raise StrategyPrecondition(f"{e} is not a boundary edge")
    a, b = endpoints(e)
    if a not in vset and b not in vset:
        raise StrategyPrecondition(f"{e} is not a boundary edge")
    if boundary_delta(vset, e) <= 1:
        return AWFUL
    vset2 = set(vset)
    vset2.add(a)
    vset2.add(b)
    for f in _new_boundary_edges(vset, e):
        if boundary_delta(vset2, f) <= 1:
            return BAD
    return GOOD


def classify_boundary(state: GameState) -> dict[Edge, str]:
    """Classes of every free-boundary edge of the current position."""
    vset = state._maker_vertices
    return {
        e: classify_edge(state.maker, e, vset=vset)
        for e in free_boundary(state)
    }


def potentials(state: GameState) -> tuple[int, int]:
    """(v, w): 2|C| + 4 - |boundary C|, and the awful count of the free
    boundary.  v is 0 by convention for the empty graph."""
    if state.maker:
        v = 2 * len(state.maker) + 4 - len(edge_boundary(state.maker))
    else:
        v = 0
    vset = state._maker_vertices
    w = sum(
        1 for e in free_boundary(state)
        if boundary_delta(vset, e) <= 1
    )
    return v, w


# ---------------------------------------------------------------------------
# Strategy 4


class Strategy4:
    """Claim up to b free-boundary edges per turn, good before bad before
    awful, canonical order within a class.

    Classes depend only on Maker's graph, which does not change during
    Breaker's turn, so one classification pass per turn equals classifying
    edge by edge.
    """

    name = "strategy4"

    def __init__(self):
        self._checked = False

    def _check(self, state: GameState) -> None:
        if state.variant is not Variant.LIMITED:
            raise StrategyPrecondition("strategy4 plays the limited game")
        if state.bias.b != 2 * state.bias.m:
            raise StrategyPrecondition("strategy4 needs b = 2m")
        self._checked = True

    def move(self, state: GameState) -> list[Edge]:
        if not self._checked:
            self._check(state)
        ranked = sorted(
            classify_boundary(state).items(),
            key=lambda kv: (
                0 if kv[1] == GOOD else 1 if kv[1] == BAD else 2,
                edge_sort_key(kv[0]),
            ),
        )
        return [e for e, _ in ranked[: state.bias.b]]

    def diagnostics(self, state: GameState) -> dict:
        v, w = potentials(state)
        return {"classes": {repr(e): c for e, c in classify_boundary(state).items()},
                "v": v, "w": w}


# ---------------------------------------------------------------------------
# Barrier pairing and Strategy 5


def barrier_pair(origin: Vertex, e: Edge) -> Edge | None:
    """Partner of a non-axial edge under the quadrant pairing; None for
    axial edges (both endpoints sharing a coordinate with the origin).

    Relative to the origin, a horizontal edge is axial iff it lies on the
    x-axis and a vertical edge iff it lies on the y-axis.  The owner corner
    is the endpoint farther from the axis; the partner leaves the owner
    toward the other axis.
    """
    orient, x, y = e
    rx, ry = x - origin[0], y - origin[1]
    if orient == H:
        if ry == 0:
            return None
        ox = rx + 1 if rx >= 0 else rx
        # vertical partner from (ox, ry) toward the x-axis
        py = ry - 1 if ry > 0 else ry
        return (V, ox + origin[0], py + origin[1])
    if rx == 0:
        return None
    oy = ry + 1 if ry >= 0 else ry
    px = rx - 1 if rx > 0 else rx
    return (H, px + origin[0], oy + origin[1])


class Strategy5:
    """Pairing Breaker for the (1,1) game on a certified barred board.

    Replies to a non-axial Maker claim inside B_{d+1} with its partner when
    that is open and unclaimed; otherwise claims the canonically least open
    unclaimed edge inside B_{d+1}, then falls back to the origin's open
    cluster.  Returns [] when nothing is left (Breaker has won).
    """

    name = "strategy5"

    def __init__(self, certificate: BarrednessCertificate):
        self.certificate = certificate
        self.origin = certificate.origin
        self.d = certificate.d
        self.scope = ball(self.origin, self.d + 1)
        self._scope_edges: list[Edge] | None = None
        self._scope_idx = 0
        self._cluster_edges: list[Edge] | None = None
        self._cluster_idx = 0
        self._checked = False

    def _check(self, state: GameState) -> None:
        if state.board is None:
            raise StrategyPrecondition("strategy5 plays on a polluted board")
        if state.variant is not Variant.UNLIMITED or (state.bias.m, state.bias.b) != (1, 1):
            raise StrategyPrecondition("strategy5 plays the (1,1) game")
        if state.origin != self.origin:
            raise StrategyPrecondition("certificate origin differs from the game origin")
        self._checked = True

    def _ensure_scope(self, state: GameState) -> list[Edge]:
        if self._scope_edges is None:
            self._scope_edges = sorted_edges(
                e for e in state.board.open_edges if self.scope.contains_edge(e)
            )
        return self._scope_edges

    def scope_exhausted(self, state: GameState) -> bool:
        edges = self._ensure_scope(state)
        while self._scope_idx < len(edges) and state.is_claimed(edges[self._scope_idx]):
            self._scope_idx += 1
        return self._scope_idx >= len(edges)

    def move(self, state: GameState) -> list[Edge]:
        if not self._checked:
            self._check(state)
        if state.last_maker_edges:
            last = state.last_maker_edges[-1]
            if self.scope.contains_edge(last):
                partner = barrier_pair(self.origin, last)
                if partner is not None and state.is_playable(partner):
                    return [partner]
        edges = self._ensure_scope(state)
        while self._scope_idx < len(edges):
            e = edges[self._scope_idx]
            if not state.is_claimed(e):
                return [e]
            self._scope_idx += 1
        if self._cluster_edges is None:
            self._cluster_edges = cluster_edges(state.board, self.origin)
        while self._cluster_idx < len(self._cluster_edges):
            e = self._cluster_edges[self._cluster_idx]
            if not state.is_claimed(e):
                return [e]
            self._cluster_idx += 1
        return []

    def diagnostics(self, state: GameState) -> dict:
        return {
            "d": self.d,
            "scope": [self.scope.xmin, self.scope.ymin, self.scope.xmax, self.scope.ymax],
        }


# ---------------------------------------------------------------------------
# Strategy 3


def _gate_slice(run: list[Edge], g: int) -> tuple[list[Edge], int]:
    """Middle g edges of a side run, shifted one edge toward the low end on
    parity ties."""
    start = (len(run) - g) // 2
    return run[start:start + g], start


def _outer_vertices(gate: list[Edge], box: Box) -> list[Vertex]:
    out = []
    for e in gate:
        for v in endpoints(e):
            if not box.contains_vertex(v):
                out.append(v)
    return sorted(set(out))


def _induced_path(verts: list[Vertex]) -> set[Edge]:
    vset = set(verts)
    out: set[Edge] = set()
    for (x, y) in verts:
        if (x + 1, y) in vset:
            out.add((H, x, y))
        if (x, y + 1) in vset:
            out.add((V, x, y))
    return out


def _edge_distance(e: Edge, targets: list[Edge]) -> int:
    pts = [p for t in targets for p in endpoints(t)]
    return min(
        abs(a[0] - p[0]) + abs(a[1] - p[1])
        for a in endpoints(e) for p in pts
    )


def _boxes_union_boundary(boxes: list[Box]) -> set[Edge]:
    """Edge boundary of the union-of-boxes subgraph (spanning edges between
    two boxes count as boundary)."""
    inner: set[Edge] = set()
    verts: set[Vertex] = set()
    for b in boxes:
        inner.update(b.edges())
        verts.update(b.vertices())
    out: set[Edge] = set()
    for v in verts:
        x, y = v
        for e in ((H, x, y), (H, x - 1, y), (V, x, y), (V, x, y - 1)):
            if e not in inner:
                out.add(e)
    return out


@dataclass
class Strategy3State:
    """Everything round 3 needs from rounds 1 and 2, in board coordinates."""

    b1: Box | None = None
    g1: list[Edge] = field(default_factory=list)
    gate_side: str = ""
    run_before: list[Edge] = field(default_factory=list)
    run_after: list[Edge] = field(default_factory=list)
    c1: set[Edge] = field(default_factory=set)
    b2: Box | None = None
    g2: list[Edge] = field(default_factory=list)
    c2: set[Edge] = field(default_factory=set)
    r1_is_after: bool = True
    returned: set[Edge] = field(default_factory=set)
    box_a: Box | None = None
    box_a_prime: Box | None = None
    q_boxes: list[Box] = field(default_factory=list)


class Strategy3:
    """Gate-and-fence Breaker for the box-limited (m, 2m - s) game.

    Round 1 fences Maker's bounding box, leaving a middle gate G1 on a
    longest side when the budget falls short.  Round 2 either shuts the gate
    or fences the new box B2 grown through it, leaving a second gate G2.
    Round 3 tries the four explicit fences from the win analysis (G2, the
    corner box A, the bounding box A' of Maker's incursion into A, and A'
    together with the boxes hanging off its boundary) and claims the first
    affordable one that actually wins; anything else is a forfeit.
    """

    name = "strategy3"

    def __init__(self, *, audit: bool = True, strict: bool = True):
        self.round = 0
        self.s3 = Strategy3State()
        self.audit = audit
        self.strict = strict
        self.violations: list[str] = []
        self._checked = False

    # -- bookkeeping ---------------------------------------------------------

    def _check(self, state: GameState) -> None:
        bias = state.bias
        if state.variant is not Variant.BOX_LIMITED:
            raise StrategyPrecondition("strategy3 plays the box-limited game")
        problems = []
        if bias.c != 0:
            problems.append("strategy3 plays the unboosted game (c = 0)")
        if bias.m < 29:
            problems.append("strategy3 needs m >= 29")
        if not 0 <= bias.s <= (bias.m - 22) / 14:
            problems.append("strategy3 needs 0 <= s <= (m - 22)/14")
        if bias.b != 2 * bias.m - bias.s:
            problems.append("strategy3 needs b = 2m - s")
        if problems:
            # Outside the guarantee the steps still play, and any dead end is
            # recorded as a forfeit rather than extrapolated into a claim.
            if self.strict:
                raise StrategyPrecondition("; ".join(problems))
            self.violations.extend(problems)
        self._checked = True

    def _note(self, msg: str) -> None:
        if self.audit:
            self.violations.append(msg)

    def _assert_claim_region(self, state: GameState, claim: list[Edge]) -> None:
        """Claims must sit inside or on the boundary of the bounding box of
        Maker's box-component together with the strategy's boxes."""
        if not self.audit:
            return
        box = box_component_of(state.maker, state.origin)
        for b in (self.s3.b1, self.s3.b2):
            if b is not None:
                box = box.hull(b)
        for e in claim:
            a, bpt = endpoints(e)
            if not (box.contains_vertex(a) or box.contains_vertex(bpt)):
                self._note(f"claim {e} outside the play region {box}")

    def _wins(self, state: GameState, claim: list[Edge]) -> bool:
        trial = state.copy()
        trial.breaker.update(claim)
        trial._grow_claims_box(claim)
        return breaker_won(trial)

    def _claimable(self, state: GameState, edges) -> list[Edge]:
        return sorted_edges(e for e in set(edges) if state.is_playable(e))

    # -- rounds ---------------------------------------------------------------

    def move(self, state: GameState):
        if not self._checked:
            self._check(state)
        self.round += 1
        if self.round == 1:
            return self._round1(state)
        if self.round == 2:
            return self._round2(state)
        if self.round == 3:
            return self._round3(state)
        self._note("strategy has no step beyond round 3")
        return FORFEIT

    def _round1(self, state: GameState):
        s3 = self.s3
        budget = state.bias.b
        if state.maker:
            b1 = box_component_of(state.maker, state.origin)
        else:
            b1 = vertex_box(state.origin)
        s3.b1 = b1
        boundary = b1.boundary_size()
        if boundary <= budget:
            claim = self._claimable(state, b1.boundary_edges())
            self._assert_claim_region(state, claim)
            if not self._wins(state, claim):
                self._note("round-1 full fence does not win")
            return claim
        g1 = boundary - budget
        side = "bottom" if b1.width >= b1.height else "left"
        run = b1.side_run(side)
        if g1 > len(run):
            self._note(f"gate g1={g1} exceeds the longest side {len(run)}")
            return FORFEIT
        gate, start = _gate_slice(run, g1)
        s3.gate_side = side
        s3.g1 = gate
        s3.run_before = run[:start]
        s3.run_after = run[start + g1:]
        s3.c1 = set(b1.edges()) | b1.boundary_edges()
        claim = self._claimable(state, set(b1.boundary_edges()) - set(gate))
        self._assert_claim_region(state, claim)
        if self.audit and g1 > state.bias.s + 4:
            self._note(f"g1={g1} exceeds s+4={state.bias.s + 4}")
        return claim

    def _round2(self, state: GameState):
        s3 = self.s3
        budget = state.bias.b
        if s3.b1 is None:
            self._note("round 2 without round-1 state")
            return FORFEIT
        if not s3.g1:
            # Round 1 fenced completely; the game should already be over.
            self._note("round 2 reached after a full round-1 fence")
            return FORFEIT
        m2 = set(state.last_maker_edges)
        gate = set(s3.g1)
        if not (m2 & gate):
            claim = self._claimable(state, gate)
            if len(claim) < len(gate):
                self._note("gate G1 not fully claimable")
            if not self._wins(state, claim):
                self._note("closing G1 does not win")
            return claim
        # Maker came through the gate: fence the new box.
        v1 = _outer_vertices(s3.g1, s3.b1)
        p1 = _induced_path(v1)
        m2_prime = (m2 | p1) - s3.c1
        comps = box_components_with_members(m2_prime)
        anchor = next(iter(p1)) if p1 else None
        picked = None
        for box, members in comps:
            if anchor is None or anchor in members:
                picked = (box, members)
                break
        if picked is None:  # pragma: no cover - p1 is never empty here
            picked = comps[0]
        b2, members = picked
        s3.b2 = b2
        s3.returned = (m2_prime - members) & m2
        if self.audit and not (s3.b1.xmin <= b2.xmin and b2.xmax <= s3.b1.xmax
                               if s3.gate_side == "bottom"
                               else s3.b1.ymin <= b2.ymin and b2.ymax <= s3.b1.ymax):
            self._note("B2 left the stripe of B1")
        bd2 = b2.boundary_edges() - s3.c1
        s3.c2 = s3.c1 | set(b2.edges()) | b2.boundary_edges()
        # The side split of the gate run, named so that R1 has the smaller
        # overlap with the boundary of B2.
        overlap_before = sum(1 for e in s3.run_before if e in b2.boundary_edges())
        overlap_after = sum(1 for e in s3.run_after if e in b2.boundary_edges())
        s3.r1_is_after = overlap_after <= overlap_before
        if len(bd2) <= budget:
            claim = self._claimable(state, bd2)
            self._assert_claim_region(state, claim)
            if not self._wins(state, claim):
                self._note("round-2 full fence does not win")
            return claim
        g2_count = len(bd2) - budget
        ring = b2.boundary_ring()
        arc = [e for e in ring if e in bd2]
        # Nearest to G1, ties toward the R1-facing side run of B2 (the side
        # the round-3 box A hangs off), then canonical.  On non-tied
        # geometries the nearest edge sits on that run anyway.
        r1_run = set(self._r1_side_run(b2))
        start_edge = min(arc, key=lambda e: (
            _edge_distance(e, s3.g1), 0 if e in r1_run else 1, edge_sort_key(e)))
        pos = ring.index(start_edge)
        n = len(ring)
        step = 1 if ring[(pos + 1) % n] in bd2 else -1
        g2: list[Edge] = []
        i = pos
        while len(g2) < g2_count:
            e = ring[i % n]
            if e in bd2:
                g2.append(e)
            i += step
        s3.g2 = g2
        claim = self._claimable(state, bd2 - set(g2))
        self._assert_claim_region(state, claim)
        return claim

    def _round3(self, state: GameState):
        s3 = self.s3
        budget = state.bias.b
        candidates: list[tuple[str, set[Edge]]] = []
        if s3.g2:
            candidates.append(("G2", set(s3.g2)))
        box_a = self._box_a()
        s3.box_a = box_a
        m3 = set(state.last_maker_edges) | s3.returned
        if box_a is not None:
            candidates.append(("A", box_a.boundary_edges() - s3.c2))
            if s3.b2 is not None and s3.g2:
                v2 = _outer_vertices(s3.g2, s3.b2)
                p2 = _induced_path(v2)
                m3_prime = (m3 | p2) - s3.c2
                m3_in_a = {e for e in m3_prime if box_a.contains_edge(e)}
                if m3_in_a:
                    a_prime = bounding_box(m3_in_a)
                    s3.box_a_prime = a_prime
                    candidates.append(("A'", a_prime.boundary_edges() - s3.c2))
                    rest = m3_prime - m3_in_a
                    q_boxes = []
                    if rest:
                        a_bd = a_prime.boundary_edges()
                        for box, members in box_components_with_members(rest):
                            if members & a_bd:
                                q_boxes.append(box)
                    s3.q_boxes = q_boxes
                    if q_boxes:
                        union_bd = _boxes_union_boundary([a_prime] + q_boxes)
                        candidates.append(("A'+Q", union_bd - s3.c2))
        for name, cand in candidates:
            claim = self._claimable(state, cand)
            if len(claim) <= budget and self._wins(state, claim):
                self._assert_claim_region(state, claim)
                return claim
        self._note("no round-3 candidate wins")
        return FORFEIT

    def _r1_side_run(self, b2: Box) -> list[Edge]:
        """B2's side run facing R1: where the gate G2 starts and A attaches."""
        if self.s3.gate_side == "bottom":
            return b2.side_run("right" if self.s3.r1_is_after else "left")
        return b2.side_run("top" if self.s3.r1_is_after else "bottom")

    def _box_a(self) -> Box | None:
        s3 = self.s3
        if s3.b1 is None or s3.b2 is None:
            return None
        b1, b2 = s3.b1, s3.b2
        try:
            if s3.gate_side == "bottom":
                ymin, ymax = b2.ymin, b1.ymin - 1
                if s3.r1_is_after:
                    xmin, xmax = b2.xmax + 1, b1.xmax
                else:
                    xmin, xmax = b1.xmin, b2.xmin - 1
            else:  # gate on the left side
                xmin, xmax = b2.xmin, b1.xmin - 1
                if s3.r1_is_after:
                    ymin, ymax = b2.ymax + 1, b1.ymax
                else:
                    ymin, ymax = b1.ymin, b2.ymin - 1
            if xmin > xmax or ymin > ymax:
                return None
            return Box(xmin, xmax, ymin, ymax)
        except Exception:  # degenerate geometry: skip the A-based fences
            return None

    def diagnostics(self, state: GameState) -> dict:
        s3 = self.s3

        def fmt_box(b: Box | None):
            return None if b is None else [b.xmin, b.ymin, b.xmax, b.ymax]

        return {
            "round": self.round,
            "B1": fmt_box(s3.b1),
            "B2": fmt_box(s3.b2),
            "A": fmt_box(s3.box_a),
            "A_prime": fmt_box(s3.box_a_prime),
            "G1": [list(e) for e in s3.g1],
            "G2": [list(e) for e in s3.g2],
            "violations": list(self.violations),
        }
