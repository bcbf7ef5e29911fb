"""Rules, legality, budgets, and win detection for the percolation duel.

Three variants share one engine:

* ``unlimited``   — the base game: Maker claims exactly m edges per round
  (m + c in round 1), anywhere.
* ``box_limited`` — Maker additionally keeps all her edges inside the
  box-component of the origin.
* ``limited``     — Maker keeps her graph connected to the origin, and may
  bank budget: she claims any m_i >= 0 with sum m_j <= i*m + c.

Breaker claims at most b unclaimed edges per round.  Breaker has won when
the component of the origin in (Maker's edges plus unclaimed open edges) is
finite.  On the full lattice this is decided exactly by an escape search:
outside the claimed region's bounding box (grown by one) every edge is
unclaimed, so the component is infinite iff the search leaves that box.  On
a finite window the stand-in for "infinite" is touching the window border.

Claims only shrink the passable graph (Maker's own edges stay passable), so
"Breaker has won" is a latch and a cached escape path certifies "not yet
won" cheaply between claims that miss it.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .boards import PollutedBoard
from .lattice import (
    H,
    V,
    Box,
    Edge,
    Vertex,
    bounding_box,
    box_component_of,
    edge_boundary,
    endpoints,
    incident_edges,
)


class Variant(str, Enum):
    UNLIMITED = "unlimited"
    BOX_LIMITED = "box_limited"
    LIMITED = "limited"


class Status(str, Enum):
    ONGOING = "ongoing"
    BREAKER_WON = "breaker_won"
    MAKER_ESCAPED_HORIZON = "maker_escaped_horizon"
    FORFEIT_BY_BREAKER = "forfeit_by_breaker"


@dataclass(frozen=True)
class Bias:
    """Per-round claim counts: Maker m, Breaker b, boost c, deficit s."""

    m: int
    b: int
    c: int = 0
    s: int = 0

    def __post_init__(self) -> None:
        if self.m < 1 or self.b < 1 or self.c < 0 or self.s < 0:
            raise IllegalMove("bias out of range", rule="bias")


class IllegalMove(ValueError):
    def __init__(self, message: str, *, rule: str = "illegal"):
        super().__init__(message)
        self.rule = rule


class GameState:
    """Mutable game position; one actor mutates at a time, copy() to snapshot."""

    __slots__ = (
        "variant", "bias", "board", "origin", "maker", "breaker",
        "round_no", "maker_counts", "status", "last_maker_edges",
        "maker_log", "breaker_log",
        "_maker_vertices", "_claims_box", "_confined",
        "_witness_edges", "_witness_end",
    )

    def __init__(
        self,
        variant: Variant,
        bias: Bias,
        board: PollutedBoard | None,
        origin: Vertex,
    ):
        self.variant = Variant(variant)
        self.bias = bias
        self.board = board
        self.origin = origin
        self.maker: set[Edge] = set()
        self.breaker: set[Edge] = set()
        self.round_no = 0
        self.maker_counts: list[int] = []
        self.status = Status.ONGOING
        self.last_maker_edges: tuple[Edge, ...] = ()
        self.maker_log: list[Edge] = []
        self.breaker_log: list[Edge] = []
        self._maker_vertices: set[Vertex] = {origin}
        self._claims_box: Box | None = None
        self._confined = False
        self._witness_edges: set[Edge] | None = None
        self._witness_end: Vertex | None = None

    def copy(self) -> "GameState":
        other = GameState.__new__(GameState)
        for name in GameState.__slots__:
            val = getattr(self, name)
            if isinstance(val, (set, list)):
                val = val.copy()
            setattr(other, name, val)
        return other

    # -- basic predicates ---------------------------------------------------

    def on_window(self) -> bool:
        return self.board is not None

    def is_claimed(self, e: Edge) -> bool:
        return e in self.maker or e in self.breaker

    def is_playable(self, e: Edge) -> bool:
        """Unclaimed, and open when on a polluted board."""
        if self.is_claimed(e):
            return False
        return self.board is None or self.board.is_open(e)

    def is_passable(self, e: Edge) -> bool:
        """Part of Maker's escape graph: her edges plus unclaimed open edges."""
        if e in self.breaker:
            return False
        return self.board is None or self.board.is_open(e)

    def maker_budget(self, round_no: int | None = None) -> int:
        """Edges Maker may still claim in the given round."""
        i = self.round_no + 1 if round_no is None else round_no
        cap = i * self.bias.m + self.bias.c
        return cap - sum(self.maker_counts)

    def claims_box(self) -> Box | None:
        return self._claims_box

    def _grow_claims_box(self, edges: Iterable[Edge]) -> None:
        for e in edges:
            b = bounding_box([e])
            self._claims_box = b if self._claims_box is None else self._claims_box.hull(b)


def new_game(
    variant: Variant | str,
    bias: Bias,
    board: PollutedBoard | None,
    origin: Vertex,
    *,
    check_status: bool = True,
) -> GameState:
    """Fresh state; on a polluted board an already-confined origin is an
    immediate Breaker win (zero rounds)."""
    if board is not None and not board.contains(origin):
        raise IllegalMove(f"origin {origin} outside the window", rule="origin")
    state = GameState(Variant(variant), bias, board, origin)
    if check_status and board is not None and breaker_won(state):
        state.status = Status.BREAKER_WON
    return state


# ---------------------------------------------------------------------------
# Maker legality


def explain_maker_move(state: GameState, edges: Sequence[Edge]) -> str | None:
    """None when legal, else the violated rule's name."""
    edge_list = list(edges)
    if len(set(edge_list)) != len(edge_list):
        return "duplicate edges"
    for e in edge_list:
        if state.is_claimed(e):
            return "edge already claimed"
        if state.board is not None and not state.board.is_open(e):
            return "edge not open"
    if state.variant is Variant.UNLIMITED:
        required = state.bias.m + (state.bias.c if state.round_no == 0 else 0)
        if len(edge_list) != required and not _board_exhausted(state, len(edge_list), required):
            return "unlimited move must claim exactly m edges"
        return None
    if len(edge_list) > state.maker_budget():
        return "budget exceeded"
    if state.variant is Variant.LIMITED:
        if not _attaches_connected(state, edge_list):
            return "edges must stay connected to the origin"
        return None
    # box_limited: every edge inside the box-component of the origin.
    combined = state.maker | set(edge_list)
    if not combined:
        return None
    box = box_component_of(combined, state.origin)
    if not all(box.contains_edge(e) for e in combined):
        return "edges must stay in the origin's box-component"
    return None


def legal_maker_move(state: GameState, edges: Sequence[Edge]) -> bool:
    if state.status is not Status.ONGOING:
        return False
    return explain_maker_move(state, edges) is None


def _board_exhausted(state: GameState, claimed: int, required: int) -> bool:
    """Short claims are tolerated only when the board has nothing left."""
    if claimed >= required or state.board is None:
        return False
    available = sum(1 for e in state.board.open_edges if not state.is_claimed(e))
    return claimed == min(available, required)


def _attaches_connected(state: GameState, edge_list: list[Edge]) -> bool:
    """Greedy placement: each edge must touch the growing vertex set.

    Exact for graph connectivity; the vertex set only grows, so the fixpoint
    does not depend on placement order.
    """
    touched: set[Vertex] = set()
    pending = list(edge_list)
    base = state._maker_vertices
    while pending:
        placed_any = False
        rest: list[Edge] = []
        for e in pending:
            a, b = endpoints(e)
            if a in base or b in base or a in touched or b in touched:
                touched.add(a)
                touched.add(b)
                placed_any = True
            else:
                rest.append(e)
        if not placed_any:
            return False
        pending = rest
    return True


# ---------------------------------------------------------------------------
# Status


def _escape_targets(state: GameState) -> tuple[Box | None, Box | None]:
    """(window, X) for the escape search; X is the grown claims box."""
    window = state.board.window if state.board is not None else None
    box = state._claims_box
    return window, (box.expand(1) if box is not None else None)


def _heuristic(v: Vertex, window: Box | None, xbox: Box | None) -> int:
    if window is not None:
        return min(v[0] - window.xmin, window.xmax - v[0],
                   v[1] - window.ymin, window.ymax - v[1])
    assert xbox is not None
    return min(
        max(v[0] - xbox.xmin + 1, 0), max(xbox.xmax - v[0] + 1, 0),
        max(v[1] - xbox.ymin + 1, 0), max(xbox.ymax - v[1] + 1, 0),
    )


def _reached_target(v: Vertex, window: Box | None, xbox: Box | None) -> bool:
    if window is not None:
        return v[0] in (window.xmin, window.xmax) or v[1] in (window.ymin, window.ymax)
    assert xbox is not None
    return not xbox.contains_vertex(v)


def _search_escape(state: GameState) -> list[Edge] | None:
    """Best-first search for a passable path from the origin out of the
    claimed region (or to the window border).  None when confined."""
    window, xbox = _escape_targets(state)
    start = state.origin
    if _reached_target(start, window, xbox):
        return []
    came: dict[Vertex, tuple[Vertex, Edge]] = {}
    seen = {start}
    frontier: list[tuple[int, int, Vertex]] = [(_heuristic(start, window, xbox), 0, start)]
    tick = 0
    board = state.board
    breaker = state.breaker
    while frontier:
        _, _, u = heapq.heappop(frontier)
        x, y = u
        for e, w in (
            ((H, x, y), (x + 1, y)),
            ((H, x - 1, y), (x - 1, y)),
            ((V, x, y), (x, y + 1)),
            ((V, x, y - 1), (x, y - 1)),
        ):
            if w in seen or e in breaker:
                continue
            if board is not None and e not in board.open_edges:
                continue
            seen.add(w)
            came[w] = (u, e)
            if _reached_target(w, window, xbox):
                path = []
                node = w
                while node != start:
                    node, via = came[node]
                    path.append(via)
                return path
            tick += 1
            heapq.heappush(frontier, (_heuristic(w, window, xbox), tick, w))
    return None


def breaker_won(state: GameState) -> bool:
    """Exact: the origin's component of (maker + unclaimed open) is finite
    (full lattice) / avoids the window border (polluted window)."""
    if state._confined:
        return True
    if state.board is None and state._claims_box is None:
        return False  # nothing claimed: the whole lattice is passable
    if state._witness_edges is not None:
        window, xbox = _escape_targets(state)
        if (
            not (state._witness_edges & state.breaker)
            and state._witness_end is not None
            and _reached_target(state._witness_end, window, xbox)
        ):
            return False
        state._witness_edges = None
        state._witness_end = None
    path = _search_escape(state)
    if path is None:
        state._confined = True
        return True
    window, xbox = _escape_targets(state)
    if path:
        state._witness_edges = set(path)
        ends = [v for v in endpoints(path[-1]) if _reached_target(v, window, xbox)]
        state._witness_end = ends[0] if ends else None
    return False


def maker_escaped_horizon(state: GameState) -> bool:
    """Window-border contact of the origin's component; a truncation
    diagnostic, never a Maker win."""
    if state.board is None:
        raise IllegalMove("horizon escape is defined on polluted windows only",
                          rule="board")
    return not breaker_won(state)


def free_boundary(state: GameState) -> set[Edge]:
    """Unclaimed (open) boundary edges of Maker's graph; incident edges of
    the origin while her graph is empty."""
    if state.maker:
        boundary = edge_boundary(state.maker)
    else:
        boundary = set(incident_edges(state.origin))
    out = set()
    for e in boundary:
        if not state.is_claimed(e):
            if state.board is None or state.board.is_open(e):
                out.add(e)
    return out


# ---------------------------------------------------------------------------
# Applying moves


def apply_move(
    state: GameState,
    side: str,
    edges: Sequence[Edge],
    *,
    check_status: bool = True,
) -> GameState:
    """Mutates state (and returns it).  Breaker's move ends the round and
    re-evaluates the status unless check_status is disabled for batch play."""
    if state.status is not Status.ONGOING:
        raise IllegalMove("the game is over", rule="game over")
    edge_list = list(edges)
    if side == "maker":
        if len(state.maker_counts) != state.round_no:
            raise IllegalMove("maker already moved this round", rule="turn order")
        reason = explain_maker_move(state, edge_list)
        if reason is not None:
            raise IllegalMove(reason, rule=reason)
        state.maker.update(edge_list)
        state.maker_log.extend(edge_list)
        for e in edge_list:
            a, b = endpoints(e)
            state._maker_vertices.add(a)
            state._maker_vertices.add(b)
        state.maker_counts.append(len(edge_list))
        state.last_maker_edges = tuple(edge_list)
        state._grow_claims_box(edge_list)
        return state
    if side != "breaker":
        raise IllegalMove(f"unknown side {side!r}", rule="side")
    if len(edge_list) > state.bias.b:
        raise IllegalMove("breaker claims at most b edges", rule="breaker budget")
    if len(set(edge_list)) != len(edge_list):
        raise IllegalMove("duplicate edges", rule="duplicate edges")
    for e in edge_list:
        if state.is_claimed(e):
            raise IllegalMove(f"{e} already claimed", rule="edge already claimed")
        if state.board is not None and not state.board.is_open(e):
            raise IllegalMove(f"{e} is closed", rule="edge not open")
    if len(state.maker_counts) != state.round_no + 1:
        raise IllegalMove("breaker moves after maker", rule="turn order")
    state.breaker.update(edge_list)
    state.breaker_log.extend(edge_list)
    state._grow_claims_box(edge_list)
    state.round_no += 1
    if check_status and breaker_won(state):
        state.status = Status.BREAKER_WON
    return state
