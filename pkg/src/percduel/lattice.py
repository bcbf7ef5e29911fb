"""Pure square-lattice geometry.

Canonical edges, edge boundaries, bounding boxes, box-components, and the
brute-force enumerator of small connected edge sets used as the oracle for
the perimetric inequalities.

An edge is a tuple ``(orient, x, y)`` with ``orient`` in ``{"H", "V"}``:

    ("H", x, y)  is the edge {(x, y), (x+1, y)}
    ("V", x, y)  is the edge {(x, y), (x, y+1)}

Every unordered lattice edge has exactly one such encoding.  The canonical
iteration order everywhere is lexicographic on ``(orient, y, x)`` so that
transcripts and hashes are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

Vertex = tuple[int, int]
Edge = tuple[str, int, int]

H = "H"
V = "V"

MAX_ENUMERATION_EDGES = 8


class LatticeError(ValueError):
    """Raised on contract violations of the geometry operations."""


def edge(orient: str, x: int, y: int) -> Edge:
    if orient not in (H, V):
        raise LatticeError(f"bad orientation {orient!r}")
    return (orient, x, y)


def endpoints(e: Edge) -> tuple[Vertex, Vertex]:
    orient, x, y = e
    if orient == H:
        return (x, y), (x + 1, y)
    return (x, y), (x, y + 1)


def edge_between(u: Vertex, v: Vertex) -> Edge:
    """Canonical edge joining two adjacent vertices."""
    (ux, uy), (vx, vy) = u, v
    if abs(ux - vx) + abs(uy - vy) != 1:
        raise LatticeError(f"{u} and {v} are not lattice neighbours")
    if uy == vy:
        return (H, min(ux, vx), uy)
    return (V, ux, min(uy, vy))


def incident_edges(v: Vertex) -> frozenset[Edge]:
    """The 4 canonical edges containing v."""
    x, y = v
    return frozenset(((H, x, y), (H, x - 1, y), (V, x, y), (V, x, y - 1)))


def edge_sort_key(e: Edge) -> tuple[str, int, int]:
    orient, x, y = e
    return (orient, y, x)


def sorted_edges(edges: Iterable[Edge]) -> list[Edge]:
    return sorted(edges, key=edge_sort_key)


def format_edge(e: Edge) -> str:
    orient, x, y = e
    return f"{orient} {x} {y}"


def parse_edge(token: str) -> Edge:
    parts = token.split()
    if len(parts) != 3 or parts[0] not in (H, V):
        raise LatticeError(f"bad edge token {token!r}")
    return (parts[0], int(parts[1]), int(parts[2]))


def translate_edge(e: Edge, dx: int, dy: int) -> Edge:
    orient, x, y = e
    return (orient, x + dx, y + dy)


def vertices_of(edges: Iterable[Edge]) -> set[Vertex]:
    out: set[Vertex] = set()
    for e in edges:
        a, b = endpoints(e)
        out.add(a)
        out.add(b)
    return out


def edge_boundary(edges: Iterable[Edge]) -> set[Edge]:
    """All edges outside the set with at least one endpoint in its vertex set.

    The boundary of a bare vertex is not representable here (an edge set has
    no isolated vertices); use incident_edges for that case.
    """
    inner = set(edges)
    out: set[Edge] = set()
    for v in vertices_of(inner):
        for f in incident_edges(v):
            if f not in inner:
                out.add(f)
    return out


# ---------------------------------------------------------------------------
# Boxes


@dataclass(frozen=True)
class Box:
    """Axis-aligned vertex rectangle [xmin, xmax] x [ymin, ymax]."""

    xmin: int
    xmax: int
    ymin: int
    ymax: int

    def __post_init__(self) -> None:
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise LatticeError(f"degenerate box bounds {self}")

    @property
    def width(self) -> int:
        """Vertex count of the horizontal sides."""
        return self.xmax - self.xmin + 1

    @property
    def height(self) -> int:
        """Vertex count of the vertical sides."""
        return self.ymax - self.ymin + 1

    def is_single_vertex(self) -> bool:
        return self.xmin == self.xmax and self.ymin == self.ymax

    def contains_vertex(self, v: Vertex) -> bool:
        return self.xmin <= v[0] <= self.xmax and self.ymin <= v[1] <= self.ymax

    def contains_edge(self, e: Edge) -> bool:
        a, b = endpoints(e)
        return self.contains_vertex(a) and self.contains_vertex(b)

    def vertices(self) -> Iterator[Vertex]:
        for y in range(self.ymin, self.ymax + 1):
            for x in range(self.xmin, self.xmax + 1):
                yield (x, y)

    def edges(self) -> Iterator[Edge]:
        """All lattice edges with both endpoints inside the box."""
        for y in range(self.ymin, self.ymax + 1):
            for x in range(self.xmin, self.xmax):
                yield (H, x, y)
        for y in range(self.ymin, self.ymax):
            for x in range(self.xmin, self.xmax + 1):
                yield (V, x, y)

    def edge_count(self) -> int:
        return self.height * (self.width - 1) + self.width * (self.height - 1)

    def boundary_size(self) -> int:
        """|edge boundary| of the induced subgraph: 2a + 2b for side counts a, b."""
        return 2 * self.width + 2 * self.height

    def side_run(self, side: str) -> list[Edge]:
        """Boundary edges hanging off one side, in increasing coordinate order.

        ``bottom``/``top`` runs are vertical edges (one per column),
        ``left``/``right`` runs are horizontal edges (one per row).
        """
        if side == "bottom":
            return [(V, x, self.ymin - 1) for x in range(self.xmin, self.xmax + 1)]
        if side == "top":
            return [(V, x, self.ymax) for x in range(self.xmin, self.xmax + 1)]
        if side == "left":
            return [(H, self.xmin - 1, y) for y in range(self.ymin, self.ymax + 1)]
        if side == "right":
            return [(H, self.xmax, y) for y in range(self.ymin, self.ymax + 1)]
        raise LatticeError(f"unknown side {side!r}")

    def boundary_edges(self) -> set[Edge]:
        return set(self.boundary_ring())

    def boundary_ring(self) -> list[Edge]:
        """The boundary edges in one fixed cyclic order.

        Walks bottom (left to right), right (bottom to top), top (right to
        left), left (top to bottom).  Length is always 2a + 2b.
        """
        ring = self.side_run("bottom")
        ring += self.side_run("right")
        ring += list(reversed(self.side_run("top")))
        ring += list(reversed(self.side_run("left")))
        return ring

    def expand(self, k: int) -> "Box":
        return Box(self.xmin - k, self.xmax + k, self.ymin - k, self.ymax + k)

    def hull(self, other: "Box") -> "Box":
        return Box(
            min(self.xmin, other.xmin),
            max(self.xmax, other.xmax),
            min(self.ymin, other.ymin),
            max(self.ymax, other.ymax),
        )


def vertex_box(v: Vertex) -> Box:
    return Box(v[0], v[0], v[1], v[1])


def ball(v: Vertex, d: int) -> Box:
    """Chebyshev ball v + [-d, d]^2."""
    return Box(v[0] - d, v[0] + d, v[1] - d, v[1] + d)


def bounding_box(edges: Iterable[Edge], *, extra: Iterable[Vertex] = ()) -> Box:
    """Minimal box containing every endpoint (and any extra vertices)."""
    xs: list[int] = []
    ys: list[int] = []
    for e in edges:
        a, b = endpoints(e)
        xs += (a[0], b[0])
        ys += (a[1], b[1])
    for v in extra:
        xs.append(v[0])
        ys.append(v[1])
    if not xs:
        raise LatticeError("bounding box of an empty set is undefined")
    return Box(min(xs), max(xs), min(ys), max(ys))


def box_boundary_size(box: Box) -> int:
    return box.boundary_size()


def box_intersects(b1: Box, b2: Box) -> bool:
    """Literal reading: (E(b1) u boundary(b1)) meets E(b2).

    E(b1) u boundary(b1) is exactly the edges with an endpoint in b1, and a
    non-degenerate box has an edge at each of its vertices, so the condition
    collapses to: the vertex rectangles share a vertex and b2 has an edge.
    A single-vertex b2 never box-intersects anything (E(b2) is empty).
    """
    if b2.is_single_vertex():
        return False
    return (
        max(b1.xmin, b2.xmin) <= min(b1.xmax, b2.xmax)
        and max(b1.ymin, b2.ymin) <= min(b1.ymax, b2.ymax)
    )


def boxes_mergeable(b1: Box, b2: Box) -> bool:
    """Symmetric closure of box_intersects, used by the merging process."""
    return box_intersects(b1, b2) or box_intersects(b2, b1)


def connected_edge_components(edges: Iterable[Edge]) -> list[set[Edge]]:
    """Connected components of an edge set (edges sharing a vertex)."""
    remaining = set(edges)
    at: dict[Vertex, list[Edge]] = {}
    for e in remaining:
        a, b = endpoints(e)
        at.setdefault(a, []).append(e)
        at.setdefault(b, []).append(e)
    comps: list[set[Edge]] = []
    while remaining:
        seed = next(iter(remaining))
        comp = {seed}
        remaining.discard(seed)
        stack = [seed]
        while stack:
            e = stack.pop()
            for v in endpoints(e):
                for f in at[v]:
                    if f in remaining:
                        remaining.discard(f)
                        comp.add(f)
                        stack.append(f)
        comps.append(comp)
    return comps


def box_components_with_members(
    edges: Iterable[Edge],
    *,
    seed_vertex: Vertex | None = None,
    rng=None,
) -> list[tuple[Box, set[Edge]]]:
    """Box-components with the edges each one absorbed.

    Starts from the bounding boxes of the connected components (plus a
    single-vertex component for ``seed_vertex`` when it is not already
    covered) and repeatedly replaces a mergeable pair by the bounding box of
    their union.  The result is independent of merge order; pass ``rng`` to
    shuffle the scan between steps for the order-independence tests.
    """
    items: list[tuple[Box, set[Edge]]] = []
    for comp in connected_edge_components(edges):
        items.append((bounding_box(comp), comp))
    items.sort(key=lambda it: (it[0].ymin, it[0].xmin, it[0].ymax, it[0].xmax))
    if seed_vertex is not None:
        covered = any(seed_vertex in vertices_of(members) for _, members in items)
        if not covered:
            items.append((vertex_box(seed_vertex), set()))
    while True:
        if rng is not None:
            rng.shuffle(items)
        pair = None
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if boxes_mergeable(items[i][0], items[j][0]):
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            break
        i, j = pair
        bi, mi = items[i]
        bj, mj = items[j]
        items = [items[k] for k in range(len(items)) if k not in (i, j)]
        items.append((bi.hull(bj), mi | mj))
    items.sort(key=lambda it: (it[0].ymin, it[0].xmin, it[0].ymax, it[0].xmax))
    return items


def box_components(
    edges: Iterable[Edge],
    *,
    seed_vertex: Vertex | None = None,
    rng=None,
) -> list[Box]:
    return [box for box, _ in box_components_with_members(
        edges, seed_vertex=seed_vertex, rng=rng)]


def is_box_connected(edges: Iterable[Edge]) -> bool:
    edges = set(edges)
    if not edges:
        raise LatticeError("box-connectivity of an empty set is undefined")
    return len(box_components(edges)) == 1


def box_component_of(edges: Iterable[Edge], v: Vertex) -> Box:
    """The unique final box containing v, with v as a single-vertex component."""
    for box, _ in box_components_with_members(edges, seed_vertex=v):
        if box.contains_vertex(v):
            return box
    raise LatticeError(f"no box-component contains {v}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Enumeration of small connected edge sets (up to translation)


def canonical_translate(edges: frozenset[Edge]) -> frozenset[Edge]:
    """Translate so the lexicographically least endpoint is (0, 0)."""
    mx, my = min(vertices_of(edges))
    if mx == 0 and my == 0:
        return edges
    return frozenset(translate_edge(e, -mx, -my) for e in edges)


def enumerate_connected_edge_sets(n: int) -> Iterator[frozenset[Edge]]:
    """Every connected edge set of size n up to translation, exactly once.

    Grown level by level: each connected set of size k+1 arises from a
    connected subset of size k by adding one boundary edge (remove a
    non-bridge, or a leaf edge of a tree).  Budget capped at 8 edges.
    """
    if not 1 <= n <= MAX_ENUMERATION_EDGES:
        raise LatticeError(f"enumeration budget is 1..{MAX_ENUMERATION_EDGES}, got {n}")
    level: set[frozenset[Edge]] = {
        frozenset({(H, 0, 0)}),
        frozenset({(V, 0, 0)}),
    }
    for _ in range(n - 1):
        grown: set[frozenset[Edge]] = set()
        for s in level:
            for e in edge_boundary(s):
                grown.add(canonical_translate(s | {e}))
        level = grown
    for s in sorted(level, key=lambda s: tuple(sorted_edges(s))):
        yield s
