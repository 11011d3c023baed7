import random
from fractions import Fraction

import pytest

from paperfold.geometry import (
    CENTER,
    ORIENTATIONS,
    SCALE,
    TRI_CENTROIDS,
    CreaseLine,
    InputError,
    TriRef,
    index_tri,
    reflect_orientation,
    reflect_point,
    rotation_ccw,
    tri_index,
    triangle_at,
    triangle_centroid,
    triangle_vertices,
)


def test_tri_index_examples():
    assert tri_index(TriRef(0, 0, 0)) == 1
    assert tri_index(TriRef(3, 3, 1)) == 32
    assert tri_index(TriRef(1, 2, 0)) == 13


def test_tri_index_round_trip():
    for v in range(1, 33):
        assert tri_index(index_tri(v)) == v
    refs = {index_tri(v) for v in range(1, 33)}
    assert len(refs) == 32


def test_tri_index_rejects_out_of_range():
    with pytest.raises(InputError):
        tri_index(TriRef(4, 0, 0))
    with pytest.raises(InputError):
        index_tri(0)
    with pytest.raises(InputError):
        index_tri(33)


def test_triangle_vertices_left_cell():
    assert set(triangle_vertices(TriRef(0, 0, 0))) == {(0, 0), (0, 1), (1, 1)}


def test_triangle_vertices_tr_cell_right_triangle():
    # Cell (0,3) splits TR-BL; the right triangle holds the cell's right edge.
    assert set(triangle_vertices(TriRef(0, 3, 1))) == {(4, 0), (4, 1), (3, 1)}
    assert set(triangle_vertices(TriRef(0, 3, 0))) == {(3, 0), (4, 0), (3, 1)}


def test_triangle_contains_cell_side_edges():
    for ref in (index_tri(v) for v in range(1, 33)):
        verts = set(triangle_vertices(ref))
        x_edge = ref.col if ref.tri == 0 else ref.col + 1
        assert {(x_edge, ref.row), (x_edge, ref.row + 1)} <= verts


def test_triangle_centroid_example():
    assert triangle_centroid(TriRef(0, 0, 0)) == (Fraction(1, 3), Fraction(2, 3))


def test_triangle_at_round_trip():
    for tid in range(32):
        assert triangle_at(*TRI_CENTROIDS[tid]) == tid


def test_triangle_at_rejects_edges_and_outside():
    with pytest.raises(InputError):
        triangle_at(SCALE, SCALE)
    with pytest.raises(InputError):
        triangle_at(-1, 5)


def test_reflect_point_examples():
    # (1,0) across the vertical line x=2 -> (3,0)
    assert reflect_point((SCALE, 0), CreaseLine("v", 2 * SCALE)) == (3 * SCALE, 0)
    # (1,0) across y=x -> (0,1)
    assert reflect_point((SCALE, 0), CreaseLine("main", 0)) == (0, SCALE)


def test_reflect_point_involution():
    rng = random.Random(5)
    for _ in range(200):
        p = (rng.randrange(0, 49), rng.randrange(0, 49))
        crease = CreaseLine(rng.choice(["h", "v", "main", "anti"]), rng.randrange(-48, 96, 12))
        assert reflect_point(reflect_point(p, crease), crease) == p


def test_reflect_orientation_examples():
    assert reflect_orientation(90, 0) == 270
    assert reflect_orientation(0, 45) == 90
    assert reflect_orientation(180, 90) == 0


def test_reflect_orientation_formula_and_closure():
    for phi in ORIENTATIONS:
        for theta in (0, 45, 90, 135):
            got = reflect_orientation(phi, theta)
            assert got == (2 * theta - phi) % 360
            assert got in ORIENTATIONS
            assert reflect_orientation(got, theta) == phi


def test_reflect_orientation_matches_matrix_transport():
    for kind, theta in (("h", 0), ("anti", 45), ("v", 90), ("main", 135)):
        mirror = CreaseLine(kind, 24).reflection()
        for phi in ORIENTATIONS:
            assert mirror.transport_orientation(phi) == reflect_orientation(phi, theta)


def test_rotation_transport_and_closure():
    for rot in (0, 90, 180, 270):
        turn = rotation_ccw(rot, CENTER)
        for phi in ORIENTATIONS:
            assert turn.transport_orientation(phi) == (phi + rot) % 360


def test_transform_compose_invert():
    rng = random.Random(9)
    creases = [CreaseLine(k, c) for k in ("h", "v", "main", "anti") for c in (0, 12, 24, 36)]
    for _ in range(100):
        t = rotation_ccw(rng.choice((0, 90, 180, 270)))
        for _ in range(3):
            t = rng.choice(creases).reflection().compose(t)
        inv = t.invert()
        p = (rng.randrange(0, 49), rng.randrange(0, 49))
        assert inv.apply(t.apply(p)) == p
        assert t.apply(inv.apply(p)) == p


def test_crease_mesh_alignment_flag():
    assert CreaseLine("h", 24).on_mesh
    assert not CreaseLine("h", 18).on_mesh
    assert CreaseLine("anti", 48).on_mesh
