"""Lattice geometry: canonical edges, boundaries, boxes, box-components."""

import random

import pytest

from percduel.lattice import (
    Box,
    LatticeError,
    ball,
    bounding_box,
    box_boundary_size,
    box_components,
    box_intersects,
    boxes_mergeable,
    canonical_translate,
    edge_boundary,
    edge_sort_key,
    endpoints,
    enumerate_connected_edge_sets,
    incident_edges,
    is_box_connected,
    parse_edge,
    format_edge,
    sorted_edges,
    vertex_box,
)


def test_incident_edges_examples():
    assert incident_edges((0, 0)) == {
        ("H", 0, 0), ("H", -1, 0), ("V", 0, 0), ("V", 0, -1)}
    for v in [(2, -1), (17, 33), (-4, 0)]:
        edges = incident_edges(v)
        assert len(edges) == 4
        assert all(v in endpoints(e) for e in edges)


def test_edge_boundary_examples():
    assert len(edge_boundary({("H", 0, 0)})) == 6
    square = {("H", 0, 0), ("V", 0, 0), ("H", 0, 1), ("V", 1, 0)}
    assert len(edge_boundary(square)) == 8
    assert edge_boundary(set()) == set()


def test_edge_boundary_disjoint_from_input():
    rng = random.Random(5)
    for _ in range(200):
        s = set()
        x, y = 0, 0
        for _ in range(rng.randint(1, 12)):
            s.add((rng.choice("HV"), x, y))
            x += rng.randint(-1, 1)
            y += rng.randint(-1, 1)
        assert not (edge_boundary(s) & s)


def test_bounding_box_examples():
    assert bounding_box({("H", 0, 0)}) == Box(0, 1, 0, 0)
    assert bounding_box({("H", 0, 0), ("V", 3, 2)}) == Box(0, 3, 0, 3)
    with pytest.raises(LatticeError):
        bounding_box(set())


def test_box_boundary_sizes():
    assert box_boundary_size(Box(0, 0, 0, 0)) == 4
    assert box_boundary_size(Box(0, 1, 0, 0)) == 6
    assert box_boundary_size(Box(0, 2, 0, 1)) == 10
    # matches explicit enumeration of the ring
    for box in [Box(0, 3, 0, 0), Box(-2, 1, 4, 9), Box(5, 5, 5, 5)]:
        assert len(box.boundary_edges()) == box.boundary_size()
        assert box.boundary_edges() == edge_boundary(set(box.edges())) \
            if not box.is_single_vertex() else True


def test_box_ring_is_cyclic_cover():
    box = Box(0, 2, 0, 1)
    ring = box.boundary_ring()
    assert len(ring) == box.boundary_size()
    assert set(ring) == box.boundary_edges()


def test_box_intersects_examples():
    assert box_intersects(Box(0, 1, 0, 1), Box(1, 2, 0, 1))
    assert not box_intersects(Box(0, 1, 0, 1), Box(2, 3, 2, 3))
    b = Box(0, 4, 0, 2)
    assert box_intersects(b, b)
    point = Box(3, 3, 3, 3)
    assert not box_intersects(Box(0, 9, 0, 9), point)  # E(point) is empty
    # the documented degenerate asymmetry of the literal definition
    assert box_intersects(point, Box(0, 9, 0, 9))
    assert boxes_mergeable(point, Box(0, 9, 0, 9))


def test_box_intersects_symmetric_for_nondegenerate():
    rng = random.Random(11)
    for _ in range(10_000):
        def sample():
            while True:
                xs = sorted(rng.randint(-10, 10) for _ in range(2))
                ys = sorted(rng.randint(-10, 10) for _ in range(2))
                b = Box(xs[0], xs[1], ys[0], ys[1])
                if not b.is_single_vertex():
                    return b
        b1, b2 = sample(), sample()
        assert box_intersects(b1, b2) == box_intersects(b2, b1)


def test_box_components_examples():
    assert box_components({("H", 0, 0), ("H", 4, 0)}) == [
        Box(0, 1, 0, 0), Box(4, 5, 0, 0)]
    stair = {("H", 0, 0), ("V", 1, 0), ("H", 1, 1), ("V", 2, 1), ("V", 0, 1)}
    assert box_components(stair) == [Box(0, 2, 0, 2)]
    assert len(box_components({("H", 0, 0), ("H", 1, 1)})) == 2


def test_is_box_connected():
    assert is_box_connected({("H", 0, 0), ("V", 1, 0)})
    assert not is_box_connected({("H", 0, 0), ("H", 4, 0)})
    stair = {("H", 0, 0), ("V", 1, 0), ("H", 1, 1), ("V", 2, 1), ("V", 0, 1)}
    assert is_box_connected(stair)
    with pytest.raises(LatticeError):
        is_box_connected(set())


def test_box_components_merge_order_independent():
    rng = random.Random(3)
    for t in range(150):
        s = set()
        for _ in range(rng.randint(1, 4)):
            x0, y0 = rng.randint(-6, 6), rng.randint(-6, 6)
            length = rng.randint(1, 6)
            s |= {("H", x0 + i, y0) for i in range(length)}
        reference = box_components(s)
        for k in range(20):
            assert box_components(s, rng=random.Random(1000 * t + k)) == reference


def test_seeded_vertex_component():
    # an isolated origin stays its own single-vertex box-component
    comps = box_components({("H", 5, 5)}, seed_vertex=(0, 0))
    assert vertex_box((0, 0)) in comps
    # but merges once an edge's box reaches it
    comps = box_components({("H", 0, 0)}, seed_vertex=(0, 0))
    assert comps == [Box(0, 1, 0, 0)]


def test_enumeration_counts_and_contract():
    assert sum(1 for _ in enumerate_connected_edge_sets(1)) == 2
    assert sum(1 for _ in enumerate_connected_edge_sets(2)) == 6
    seen = set()
    for s in enumerate_connected_edge_sets(4):
        assert len(s) == 4
        assert canonical_translate(s) == s
        assert is_box_connected(s)  # connected implies box-connected
        assert len(box_components(s)) == 1
        assert s not in seen
        seen.add(s)
    with pytest.raises(LatticeError):
        next(enumerate_connected_edge_sets(9))


def test_edge_text_round_trip():
    for e in ball((0, 0), 3).edges():
        assert parse_edge(format_edge(e)) == e


def test_sorted_edges_canonical_order():
    edges = [("V", 0, 0), ("H", 0, 0), ("H", -1, 0), ("V", 0, -1)]
    assert sorted_edges(edges) == [
        ("H", -1, 0), ("H", 0, 0), ("V", 0, -1), ("V", 0, 0)]
    assert [edge_sort_key(e) for e in sorted_edges(edges)] == sorted(
        edge_sort_key(e) for e in edges)
