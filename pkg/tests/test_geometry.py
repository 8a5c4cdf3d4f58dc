import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hotspots import shapes
from hotspots.geometry import (
    DirichletPiece,
    DomainSpec,
    GeometryError,
    GeometrySummary,
    Segment,
    connectedness_check,
    diameter,
    domain_area,
    epsilon_threshold,
    neumann_convexity_check,
    polygon_chain,
    summarize,
)
from hotspots.shapes import make_example


def test_square2disks_construction():
    s = make_example("square2disks", 0.1)
    assert [p.kind for p in s.dirichlet] == ["disk", "disk"]
    centres = sorted(p.params for p in s.dirichlet)
    assert centres[0] == pytest.approx((-0.1, 0.0, 0.05))
    assert centres[1] == pytest.approx((0.1, 0.0, 0.05))
    assert domain_area(s) == pytest.approx(4.0)


def test_examples_are_deterministic():
    for name, args in [("square2disks", (0.1,)), ("triangle3disks", (0.05,)), ("Kn", (4,)), ("disk_arc", (1.0,)), ("wild", (10.0,))]:
        assert make_example(name, *args).dumps() == make_example(name, *args).dumps()


def test_kn_is_two_squares():
    s = make_example("Kn", 4)
    assert s.dirichlet == ()
    assert domain_area(s) == pytest.approx(2.0)
    assert diameter(s) == pytest.approx(math.sqrt(5), rel=1e-6)


@pytest.mark.parametrize(
    "name,args",
    [("annulus", (1.0, 1.0)), ("square2disks", (0.0,)), ("disk_arc", (4.0,)), ("triangle3disks", (0.5,)), ("nonexistent", ())],
)
def test_parameter_errors(name, args):
    with pytest.raises(GeometryError):
        make_example(name, *args)


def test_wild_rejects_bad_gamma():
    with pytest.raises(GeometryError):
        shapes.wild(10.0, [(0, 0), (-0.5, 0.8), (-0.5, 0.2), (0, 1), (0, 1)])
    with pytest.raises(GeometryError):
        shapes.wild(10.0, [(0, 0), (0.5, 0.5), (0, 1)])
    with pytest.raises(GeometryError):
        shapes.wild(10.0, [(0, 0), (-0.6, 0.6), (-0.6, 0.4), (-0.1, 0.9), (-0.9, 0.5), (0, 1)])


def test_invalid_chains():
    with pytest.raises(GeometryError):
        DomainSpec("open", (Segment(0, 0, 1, 0), Segment(1, 0, 1, 1))).validate()
    with pytest.raises(GeometryError):
        DomainSpec("cw", polygon_chain([(0, 0), (0, 1), (1, 1), (1, 0)])).validate()
    with pytest.raises(GeometryError):
        DomainSpec("bowtie", polygon_chain([(0, 0), (1, 1), (1, 0), (0, 1)])).validate()


def test_json_round_trip():
    for s in [make_example("square2disks", 0.1), make_example("disk_arc", 1.0), make_example("annulus", 0.2, 1.0), make_example("Kn", 5)]:
        back = DomainSpec.from_json(s.to_json())
        assert back == s
        assert back.dumps() == s.dumps()


def test_json_schema_keys():
    d = make_example("disk_arc", 1.0).to_json()
    assert set(d) >= {"name", "outer", "holes", "dirichlet"}
    assert list(d["outer"][0]) == ["arc"]
    assert list(make_example("box").to_json()["outer"][0]) == ["seg"]


def test_summary_disk_arc_ratio():
    s = summarize(make_example("disk_arc", math.pi / 2), miyamoto=True)
    assert s.diameter * s.projection_length / s.quadrant_area == pytest.approx(4 / (math.pi - math.pi / 4 + 0.5), rel=1e-6)
    assert s.diameter * s.projection_length / s.quadrant_area == pytest.approx(1.4005, abs=1e-4)


def test_summary_rectangle():
    s = summarize(make_example("rectangle", 1.0, 1.0), miyamoto=True)
    assert s.projection_length == pytest.approx(1.0)
    assert s.quadrant_area == pytest.approx(1.0)


def test_summary_square_isodiametric():
    s = summarize(shapes.box(-1, -1, 1, 1))
    assert s.diameter == pytest.approx(2 * math.sqrt(2), rel=1e-9)
    assert s.area == pytest.approx(4.0)
    assert s.diameter**2 / s.area >= 4 / math.pi


def test_summary_miyamoto_placement_error():
    with pytest.raises(GeometryError):
        summarize(make_example("square2disks", 0.1), miyamoto=True)


def test_summary_r2_formula():
    s = summarize(shapes.square_disk(0.0, 0.0, 0.1, -1.0, 1.0))
    assert s.R1 == pytest.approx(0.1)
    assert s.R2 == math.sqrt(s.R1**2 + s.omega_plus_area / math.pi)
    assert s.omega_plus_area == pytest.approx(4 - math.pi * 0.01, rel=1e-9)


def test_summary_round_trip():
    s = summarize(make_example("disk_arc", 1.0), checks=True)
    assert GeometrySummary.from_json(s.to_json()) == s


def test_epsilon_threshold_values():
    sq = summarize(shapes.box())
    assert epsilon_threshold(sq) == pytest.approx(0.0073123204, rel=1e-8)
    dk = summarize(shapes.disk(1.0, dirichlet=False))
    assert epsilon_threshold(dk) == pytest.approx(math.exp(-16 / 2.404825557695773**2), rel=1e-6)


@pytest.mark.parametrize("c", [0.5, 2.0, 7.0])
def test_epsilon_threshold_scaling(c):
    base = epsilon_threshold(summarize(shapes.box()))
    assert epsilon_threshold(summarize(shapes.box(0, 0, c, c))) == pytest.approx(c * base, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_epsilon_threshold_below_e2_radius(w, hgt):
    s = summarize(shapes.box(0, 0, w, hgt))
    assert epsilon_threshold(s) <= math.exp(-2) * math.sqrt(s.area / math.pi)


@settings(max_examples=10, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(-5, 5), st.floats(-5, 5))
def test_rigid_motion_invariance(theta, tx, ty):
    spec = make_example("triangle3disks", 0.05)
    a = summarize(spec)
    b = summarize(spec, (theta, tx, ty))
    assert b.diameter == pytest.approx(a.diameter, rel=1e-6)
    assert b.area == pytest.approx(a.area, rel=1e-9)
    assert b.R1 == pytest.approx(a.R1, rel=1e-6)


def test_rigid_motion_invariance_exact_pieces():
    spec = make_example("disk_arc", 1.0)
    moved = spec.transformed(0.7, (1.5, -2.0))
    assert domain_area(moved) == pytest.approx(domain_area(spec), rel=1e-9)
    assert diameter(moved) == pytest.approx(diameter(spec), rel=1e-9)


def test_convexity_convex_domains_pass():
    for spec in [shapes.box(), make_example("disk_arc", 1.0), make_example("regular_polygon_edge", 5)]:
        assert neumann_convexity_check(spec).passed


def test_convexity_wild_passes():
    assert neumann_convexity_check(make_example("wild", 10.0)).passed


def test_convexity_lshape_fails_at_reentrant_corner():
    v = neumann_convexity_check(shapes.lshape())
    assert not v.passed
    assert v.worst < 0
    bx, by = v.witness_boundary
    # the violated normals belong to the two edges meeting at (1, 1)
    assert (abs(bx - 1) < 1e-9 and 1 <= by <= 2) or (abs(by - 1) < 1e-9 and 1 <= bx <= 2)


def test_convexity_monotone_in_d():
    plain = shapes.lshape()
    covered = DomainSpec("lshape-D", plain.outer, (), (DirichletPiece("edge", (0, 2)), DirichletPiece("edge", (0, 3)))).validate()
    assert not neumann_convexity_check(plain).passed
    assert neumann_convexity_check(covered).passed


def test_connectedness_examples():
    assert connectedness_check(make_example("square2disks", 0.1)).dirichlet_components == 2
    assert connectedness_check(make_example("triangle3disks", 0.05)).dirichlet_components == 3
    c = connectedness_check(make_example("disk_arc", 1.0))
    assert c.dirichlet_connected and c.dirichlet_components == 1


def test_touching_pieces_are_connected():
    spec = DomainSpec(
        "two-edges", polygon_chain([(0, 0), (1, 0), (1, 1), (0, 1)]), (), (DirichletPiece("edge", (0, 0)), DirichletPiece("edge", (0, 1)))
    ).validate()
    assert connectedness_check(spec).dirichlet_connected


def test_scaled_spec():
    s = make_example("disk_arc", 1.0)
    assert domain_area(s.scaled(3.0)) == pytest.approx(9 * math.pi, rel=1e-9)
    assert np.isclose(diameter(s.scaled(3.0)), 6.0, rtol=1e-6)
