"""Bond-percolation boards on finite windows.

Sampling is counter-based: each edge is opened independently by hashing
(seed, canonical absolute edge coordinates), so the same (window, p, seed)
always yields the same board, any sub-window restricts consistently, and
coupling in p is monotone under a shared seed.

Also provides open-cluster analysis, quadrantal (oriented) reachability,
and the barredness certificate giving the confinement radius d: when no
two-direction monotone open path from the origin can leave B_d, the pairing
strategy confines the origin inside B_{d+1}.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .lattice import (
    H,
    V,
    Box,
    Edge,
    Vertex,
    LatticeError,
    edge_sort_key,
    format_edge,
    parse_edge,
)

QUADRANTS = ("NE", "NW", "SE", "SW")
_QUAD_STEPS = {
    "NE": (1, 1),
    "NW": (-1, 1),
    "SE": (1, -1),
    "SW": (-1, -1),
}

_PHI1 = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix(x: np.ndarray) -> np.ndarray:
    x = (x + _PHI1).astype(np.uint64)
    x ^= x >> np.uint64(30)
    x *= _M1
    x ^= x >> np.uint64(27)
    x *= _M2
    x ^= x >> np.uint64(31)
    return x


def window_edges(window: Box) -> list[Edge]:
    """Window-interior edges (both endpoints inside), canonical order."""
    edges = list(window.edges())
    edges.sort(key=edge_sort_key)
    return edges


@dataclass
class PollutedBoard:
    """A sampled percolation configuration on a finite window."""

    window: Box
    p: float
    seed: int
    open_edges: frozenset[Edge]

    _adjacency: dict[Vertex, list[tuple[Vertex, Edge]]] | None = field(
        default=None, repr=False, compare=False)
    _extremes: dict[str, tuple[np.ndarray, np.ndarray]] | None = field(
        default=None, repr=False, compare=False)

    def is_open(self, e: Edge) -> bool:
        return e in self.open_edges

    def contains(self, v: Vertex) -> bool:
        return self.window.contains_vertex(v)

    def on_border(self, v: Vertex) -> bool:
        w = self.window
        return v[0] in (w.xmin, w.xmax) or v[1] in (w.ymin, w.ymax)

    def open_sorted(self) -> list[Edge]:
        return sorted(self.open_edges, key=edge_sort_key)

    def adjacency(self) -> dict[Vertex, list[tuple[Vertex, Edge]]]:
        if self._adjacency is None:
            adj: dict[Vertex, list[tuple[Vertex, Edge]]] = {}
            for e in self.open_edges:
                orient, x, y = e
                a = (x, y)
                b = (x + 1, y) if orient == H else (x, y + 1)
                adj.setdefault(a, []).append((b, e))
                adj.setdefault(b, []).append((a, e))
            self._adjacency = adj
        return self._adjacency


def _edge_keys(edges: list[Edge], seed: int) -> np.ndarray:
    n = len(edges)
    xs = np.fromiter((e[1] for e in edges), dtype=np.int64, count=n)
    ys = np.fromiter((e[2] for e in edges), dtype=np.int64, count=n)
    os_ = np.fromiter((1 if e[0] == V else 0 for e in edges), dtype=np.int64, count=n)
    ux = xs.astype(np.uint64)
    uy = ys.astype(np.uint64)
    uo = os_.astype(np.uint64)
    k = _splitmix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) ^ _splitmix(ux))
    k = _splitmix(k ^ _splitmix(uy ^ (uo << np.uint64(62))))
    return k


def sample_bond_percolation(window: Box, p: float, seed: int) -> PollutedBoard:
    """Open each window-interior edge independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise LatticeError(f"p must be in [0,1], got {p}")
    edges = window_edges(window)
    if edges:
        with np.errstate(over="ignore"):
            keys = _edge_keys(edges, seed)
        u = keys.astype(np.float64) / float(2**64)
        mask = u < p
        open_edges = frozenset(e for e, m in zip(edges, mask) if m)
    else:
        open_edges = frozenset()
    return PollutedBoard(window=window, p=p, seed=seed, open_edges=open_edges)


def open_cluster(board: PollutedBoard, v: Vertex) -> set[Vertex]:
    """Vertices of the open cluster of v (BFS over open edges)."""
    if not board.contains(v):
        raise LatticeError(f"{v} is outside the window")
    adj = board.adjacency()
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w, _ in adj.get(u, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def cluster_edges(board: PollutedBoard, v: Vertex) -> list[Edge]:
    """Open edges of v's cluster, canonical order."""
    verts = open_cluster(board, v)
    adj = board.adjacency()
    out = {e for u in verts for _, e in adj.get(u, ())}
    return sorted(out, key=edge_sort_key)


def quadrant_reach(board: PollutedBoard, v: Vertex, quad: str) -> set[Vertex]:
    """Vertices reachable from v stepping only in the quadrant's 2 directions.

    NE reachability is exactly north-east oriented percolation reachability.
    """
    if quad not in _QUAD_STEPS:
        raise LatticeError(f"unknown quadrant {quad!r}")
    if not board.contains(v):
        raise LatticeError(f"{v} is outside the window")
    dx, dy = _QUAD_STEPS[quad]
    open_edges = board.open_edges
    seen = {v}
    stack = [v]
    while stack:
        x, y = stack.pop()
        nx = (x + dx, y)
        e = (H, min(x, x + dx), y)
        if board.contains(nx) and e in open_edges and nx not in seen:
            seen.add(nx)
            stack.append(nx)
        ny = (x, y + dy)
        e = (V, x, min(y, y + dy))
        if board.contains(ny) and e in open_edges and ny not in seen:
            seen.add(ny)
            stack.append(ny)
    return seen


@dataclass(frozen=True)
class BarrednessCertificate:
    """Origin-local witness that every unbarred path stays inside B_d."""

    origin: Vertex
    d: int
    reach: frozenset[Vertex]


def _scan_extremes(board: PollutedBoard) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Per-vertex extreme x and y reachable in each quadrant (DP over the DAG)."""
    if board._extremes is not None:
        return board._extremes
    w = board.window
    nx = w.width
    ny = w.height
    open_h = np.zeros((nx, ny), dtype=bool)  # edge (x,y)-(x+1,y), index by anchor
    open_v = np.zeros((nx, ny), dtype=bool)
    for orient, x, y in board.open_edges:
        if orient == H:
            open_h[x - w.xmin, y - w.ymin] = True
        else:
            open_v[x - w.xmin, y - w.ymin] = True
    out: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    xs = np.arange(w.xmin, w.xmax + 1, dtype=np.int32)
    ys = np.arange(w.ymin, w.ymax + 1, dtype=np.int32)
    for quad, (dx, dy) in _QUAD_STEPS.items():
        ex = np.tile(xs[:, None], (1, ny)).astype(np.int32)
        ey = np.tile(ys[None, :], (nx, 1)).astype(np.int32)
        xrange_ = range(nx - 1, -1, -1) if dx > 0 else range(nx)
        yrange_ = range(ny - 1, -1, -1) if dy > 0 else range(ny)
        for i in xrange_:
            for j in yrange_:
                if dx > 0:
                    if i + 1 < nx and open_h[i, j]:
                        ex[i, j] = max(ex[i, j], ex[i + 1, j])
                        ey[i, j] = max(ey[i, j], ey[i + 1, j]) if dy > 0 else min(ey[i, j], ey[i + 1, j])
                else:
                    if i - 1 >= 0 and open_h[i - 1, j]:
                        ex[i, j] = min(ex[i, j], ex[i - 1, j])
                        ey[i, j] = max(ey[i, j], ey[i - 1, j]) if dy > 0 else min(ey[i, j], ey[i - 1, j])
                if dy > 0:
                    if j + 1 < ny and open_v[i, j]:
                        ex[i, j] = max(ex[i, j], ex[i, j + 1]) if dx > 0 else min(ex[i, j], ex[i, j + 1])
                        ey[i, j] = max(ey[i, j], ey[i, j + 1])
                else:
                    if j - 1 >= 0 and open_v[i, j - 1]:
                        ex[i, j] = max(ex[i, j], ex[i, j - 1]) if dx > 0 else min(ex[i, j], ex[i, j - 1])
                        ey[i, j] = min(ey[i, j], ey[i, j - 1])
        out[quad] = (ex, ey)
    board._extremes = out
    return out


def certification_scan(board: PollutedBoard) -> tuple[np.ndarray, np.ndarray]:
    """(certified, d) arrays over the window grid.

    A vertex certifies when none of its four quadrant reaches touches the
    window border; d is then the exact max Chebyshev radius of the union.
    """
    w = board.window
    ext = _scan_extremes(board)
    xs = np.arange(w.xmin, w.xmax + 1, dtype=np.int32)[:, None]
    ys = np.arange(w.ymin, w.ymax + 1, dtype=np.int32)[None, :]
    certified = np.ones((w.width, w.height), dtype=bool)
    d = np.zeros((w.width, w.height), dtype=np.int32)
    for quad, (dx, dy) in _QUAD_STEPS.items():
        ex, ey = ext[quad]
        touch_x = ex == (w.xmax if dx > 0 else w.xmin)
        touch_y = ey == (w.ymax if dy > 0 else w.ymin)
        certified &= ~(touch_x | touch_y)
        reach = np.maximum(np.abs(ex - xs), np.abs(ey - ys))
        d = np.maximum(d, reach)
    return certified, d


def certify_barred(board: PollutedBoard, v: Vertex) -> BarrednessCertificate | None:
    """Certificate for v, or None when a quadrant reach hits the border."""
    if not board.contains(v):
        raise LatticeError(f"{v} is outside the window")
    reach: set[Vertex] = set()
    for quad in QUADRANTS:
        r = quadrant_reach(board, v, quad)
        if any(board.on_border(u) for u in r):
            return None
        reach |= r
    d = max(max(abs(u[0] - v[0]), abs(u[1] - v[1])) for u in reach)
    return BarrednessCertificate(origin=v, d=d, reach=frozenset(reach))


def choose_origin(
    board: PollutedBoard,
    policy: str = "scan_adversarial",
    *,
    margin: int = 2,
) -> Vertex | None:
    """Pick the game origin after the randomness is realised.

    ``largest_cluster`` takes a certified vertex of the biggest open cluster;
    ``scan_adversarial`` takes the certified vertex with the largest d, the
    hardest case for the pairing strategy.  ``margin`` additionally requires
    B_{d+margin}(v) to fit inside the window, so the finite-window truncation
    can actually contain the confinement argument.
    """
    w = board.window
    certified, dgrid = certification_scan(board)
    if margin:
        xs = np.arange(w.xmin, w.xmax + 1, dtype=np.int32)[:, None]
        ys = np.arange(w.ymin, w.ymax + 1, dtype=np.int32)[None, :]
        dist = np.minimum(
            np.minimum(xs - w.xmin, w.xmax - xs),
            np.minimum(ys - w.ymin, w.ymax - ys),
        )
        certified = certified & (dgrid + margin <= dist)
    if not certified.any():
        return None
    if policy == "scan_adversarial":
        best = dgrid.max(initial=0, where=certified)
        cand = np.argwhere(certified & (dgrid == best))
        picks = sorted((int(j), int(i)) for i, j in cand)  # least (y, x)
        j, i = picks[0]
        return (w.xmin + i, w.ymin + j)
    if policy == "largest_cluster":
        seen: set[Vertex] = set()
        clusters: list[tuple[int, Vertex, set[Vertex]]] = []
        for v in board.window.vertices():
            if v in seen or v not in board.adjacency():
                continue
            cl = open_cluster(board, v)
            seen |= cl
            least = min(cl, key=lambda u: (u[1], u[0]))
            clusters.append((len(cl), least, cl))
        clusters.sort(key=lambda t: (-t[0], t[1][1], t[1][0]))
        for _, _, cl in clusters:
            certified_members = [
                u for u in cl
                if certified[u[0] - w.xmin, u[1] - w.ymin]
            ]
            if certified_members:
                return min(certified_members, key=lambda u: (u[1], u[0]))
        # Every open cluster failed; fall back to any certified isolated vertex.
        cand = np.argwhere(certified)
        picks = sorted((int(j), int(i)) for i, j in cand)
        j, i = picks[0]
        return (w.xmin + i, w.ymin + j)
    raise LatticeError(f"unknown origin policy {policy!r}")


# ---------------------------------------------------------------------------
# Board files


def board_header(board: PollutedBoard) -> str:
    w = board.window
    return (
        f"BOARD v1 window={w.xmin},{w.ymin},{w.xmax},{w.ymax} "
        f"p={board.p!r} seed={board.seed}"
    )


def write_board(board: PollutedBoard, path: str) -> None:
    lines = [board_header(board)]
    lines += [format_edge(e) for e in board.open_sorted()]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_board_header(line: str) -> tuple[Box, float, int]:
    parts = line.strip().split()
    if len(parts) != 5 or parts[0] != "BOARD" or parts[1] != "v1":
        raise LatticeError(f"bad board header {line!r}")
    fields = dict(p.split("=", 1) for p in parts[2:])
    xmin, ymin, xmax, ymax = (int(t) for t in fields["window"].split(","))
    return Box(xmin, xmax, ymin, ymax), float(fields["p"]), int(fields["seed"])


def read_board(path: str, *, verify: bool = True) -> PollutedBoard:
    """Load a board file; the open set must match regeneration from the header."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    window, p, seed = parse_board_header(lines[0])
    listed = frozenset(parse_edge(ln) for ln in lines[1:])
    board = sample_bond_percolation(window, p, seed)
    if verify and listed != board.open_edges:
        raise LatticeError(f"{os.path.basename(path)} does not match its header")
    return board
