import math

import numpy as np
import pytest

from hotspots import shapes
from hotspots.geometry import diameter
from hotspots.meshing import (
    DIRICHLET,
    NEUMANN,
    Mesh,
    MeshError,
    check,
    connectivity,
    default_grading,
    dirichlet_geometry_error,
    levels,
    read_off,
    refine,
    triangulate,
    write_off,
)
from hotspots.shapes import make_example


def edge_use_counts(mesh):
    edges, tedge = mesh.edges()
    return edges, np.bincount(tedge.ravel(), minlength=len(edges))


def assert_valid(mesh):
    check(mesh)
    V, T = mesh.vertices, mesh.triangles
    a, b, c = V[T[:, 0]], V[T[:, 1]], V[T[:, 2]]
    signed = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    assert np.all(signed > 0)
    edges, count = edge_use_counts(mesh)
    assert count.max() <= 2
    lookup = {tuple(e): count[i] for i, e in enumerate(map(tuple, edges))}
    for e in map(tuple, np.sort(mesh.boundary_edges, axis=1)):
        assert lookup[e] == 1
    for e in map(tuple, np.sort(mesh.interior_edges.reshape(-1, 2), axis=1)):
        assert lookup[e] == 2


@pytest.mark.parametrize(
    "spec",
    [
        shapes.box(),
        make_example("square2disks", 0.1),
        make_example("triangle3disks", 0.05),
        make_example("annulus", math.exp(-2), 1.0),
        make_example("disk_arc", 1.0),
        make_example("Kn", 5),
        make_example("wild", 4.0),
        shapes.square_segment((0.3, 0.5), (0.7, 0.5)),
    ],
    ids=lambda s: s.name,
)
def test_mesh_invariants(spec):
    mesh = triangulate(spec, 0.1)
    assert_valid(mesh)
    assert mesh.min_angle() >= 20.0
    assert dirichlet_geometry_error(mesh) <= 1e-10
    assert connectivity(mesh) == 1


def test_square2disks_circles_resolved():
    mesh = triangulate(make_example("square2disks", 0.1), 0.05)
    P = mesh.vertices[mesh.dirichlet_mask]
    for sx in (-1, 1):
        on = np.abs(np.hypot(P[:, 0] - sx * 0.1, P[:, 1]) - 0.05) < 1e-12
        assert on.sum() >= 16
    assert connectivity(mesh) == 1


def test_annulus_tags():
    R1 = math.exp(-2)
    mesh = triangulate(make_example("annulus", R1, 1.0), 0.05)
    V = mesh.vertices
    r = np.hypot(*V[mesh.boundary_edges].mean(axis=1).T)
    inner = mesh.boundary_tags[r < 0.5]
    outer = mesh.boundary_tags[r > 0.5]
    assert np.all(inner == DIRICHLET) and np.all(outer == NEUMANN)
    assert len(inner) >= 8 and len(outer) > 100
    rv = np.hypot(*V[mesh.boundary_mask].T)
    assert np.all(np.minimum(np.abs(rv - R1), np.abs(rv - 1.0)) < 1e-12)


def test_chord_error_bound():
    h = 0.1
    mesh = triangulate(shapes.disk(1.0, dirichlet=False), h)
    V = mesh.vertices
    mid = V[mesh.boundary_edges].mean(axis=1)
    sag = 1.0 - np.hypot(*mid.T)
    assert sag.max() <= h * h / 8 * (1 + 1e-9)


def test_interior_segment_constrained():
    spec = shapes.square_segment((0.3, 0.5), (0.7, 0.5))
    mesh = triangulate(spec, 0.1)
    assert len(mesh.interior_edges) > 0
    P = mesh.vertices[np.unique(mesh.interior_edges)]
    assert np.allclose(P[:, 1], 0.5)
    assert P[:, 0].min() == pytest.approx(0.3) and P[:, 0].max() == pytest.approx(0.7)
    assert np.all(mesh.boundary_tags == NEUMANN)


def test_full_chord_splits_domain():
    mesh = triangulate(shapes.square_segment((0.0, 0.5), (1.0, 0.5)), 0.1)
    assert connectivity(mesh) == 2


def test_empty_mesh_has_no_components():
    mesh = triangulate(shapes.box(), 0.2)
    empty = Mesh(mesh.vertices, np.zeros((0, 3), int), mesh.boundary_edges, mesh.boundary_tags, mesh.boundary_curves,
                 mesh.curves, mesh.interior_edges, mesh.h, 0, mesh.d)
    assert connectivity(empty) == 0


def test_refine_quadruples_and_snaps():
    spec = make_example("annulus", math.exp(-2), 1.0)
    m0 = triangulate(spec, 0.1)
    ms = levels(m0, 3)
    for a, b in zip(ms, ms[1:]):
        assert b.n_triangles == 4 * a.n_triangles
        assert b.level == a.level + 1
        assert np.array_equal(b.vertices[: a.n_vertices], a.vertices)
        assert_valid(b)
        assert b.min_angle() >= a.min_angle() - 1.0
    V = ms[-1].vertices[ms[-1].boundary_mask]
    r = np.hypot(*V.T)
    assert np.all(np.minimum(np.abs(r - math.exp(-2)), np.abs(r - 1)) <= 1e-10)


def test_refine_keeps_segment_constraint():
    m = refine(triangulate(shapes.square_segment((0.3, 0.5), (0.7, 0.5)), 0.1))
    assert_valid(m)
    assert np.allclose(m.vertices[np.unique(m.interior_edges), 1], 0.5)


def test_area_convergence_on_disk():
    spec = shapes.disk(1.0, dirichlet=False)
    ms = levels(triangulate(spec, 0.2, use_symmetry=False), 4)
    err = [abs(math.pi - m.areas().sum()) for m in ms]
    rates = [math.log2(a / b) for a, b in zip(err, err[1:])]
    assert min(rates) >= 1.9


def test_graded_mesh_around_small_disk():
    eps = 0.0073
    spec = shapes.square_disk(0.5, 0.5, eps)
    mesh = triangulate(spec, 0.1)
    assert_valid(mesh)
    P = mesh.vertices[mesh.dirichlet_mask]
    assert len(P) >= 8
    # local edge lengths near D are of order eps/8
    near = np.hypot(*(mesh.vertices[mesh.boundary_edges[:, 0]] - 0.5).T) < eps
    L = np.hypot(*np.diff(mesh.vertices[mesh.boundary_edges[near]], axis=1)[:, 0].T)
    assert L.max() <= eps / 4
    g = default_grading(spec, 0.1)
    assert g(np.array([[0.5 + eps / 2, 0.5]]))[0] == pytest.approx(eps / 8)


def test_too_coarse_for_dirichlet_disk():
    with pytest.raises(MeshError):
        triangulate(shapes.square_disk(0.5, 0.5, 0.05), 0.5, grading=False)


def test_bad_h():
    with pytest.raises(MeshError):
        triangulate(shapes.box(), 0.0)


def test_determinism():
    spec = make_example("square2disks", 0.1)
    a, b = triangulate(spec, 0.1), triangulate(spec, 0.1)
    assert a.vertices.tobytes() == b.vertices.tobytes()
    assert a.triangles.tobytes() == b.triangles.tobytes()
    assert a.boundary_tags.tobytes() == b.boundary_tags.tobytes()


def test_symmetric_unfolding_matches_plain_area():
    spec = make_example("triangle3disks", 0.05)
    a = triangulate(spec, 0.1)
    b = triangulate(spec, 0.1, use_symmetry=False)
    assert a.areas().sum() == pytest.approx(b.areas().sum(), rel=1e-4)
    # the unfolded mesh is symmetric: reflected vertices land on vertices
    W = a.vertices * np.array([-1.0, 1.0])
    from scipy.spatial import cKDTree

    d, _ = cKDTree(a.vertices).query(W)
    assert d.max() < 1e-12


def test_off_export(tmp_path):
    mesh = triangulate(make_example("disk_arc", 1.0), 0.2)
    path = tmp_path / "m.off"
    write_off(mesh, path)
    V, T = read_off(path)
    assert np.allclose(V, mesh.vertices) and np.array_equal(T, mesh.triangles)
    tags = (tmp_path / "m.off.tags").read_text().split("\n")
    assert any("DIRICHLET" in t for t in tags) and any("NEUMANN" in t for t in tags)


def test_mesh_diameter_matches_geometry():
    spec = make_example("Kn", 4)
    assert triangulate(spec, 0.2).d == pytest.approx(diameter(spec), rel=1e-6)
