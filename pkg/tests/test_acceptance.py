"""Acceptance criteria 1-10; each test carries ``criterion(n, title)`` and the
terminal summary prints one PASS/FAIL line per criterion."""

import math
from functools import lru_cache

import numpy as np
import pytest

from hotspots import bounds as B
from hotspots import fem, shapes
from hotspots.bessel import J0_FIRST_ZERO as j0
from hotspots.bessel import bessel, bessel_zero_j0
from hotspots.geometry import DirichletPiece, DomainSpec, polygon_chain
from hotspots.meshing import triangulate
from hotspots.registry import run_case
from hotspots.shapes import make_example
from hotspots.svg import render_svg

criterion = pytest.mark.criterion
NO_CRIT = "NO_INTERIOR_CRITICAL_POINTS"
FOUND = "CRITICAL_POINTS_FOUND"
E2 = math.exp(-2.0)

# frozen oracle values
J0_ZERO = 2.404825557695773
ANNULUS_E2 = 1.4702541105282245


@lru_cache(maxsize=None)
def case(name):
    return run_case(name)


def value(rep, i=0):
    return rep.eigen["values"][i], rep.eigen["abs_error"][i], rep.eigen["rel_error"][i]


# ----------------------------------------------------------------------------
# 1
# ----------------------------------------------------------------------------


@criterion(1, "solver calibration: disk Dirichlet and square Neumann")
def test_c1_disk_dirichlet():
    lam, _, _ = value(case("disk_dirichlet"))
    assert lam == pytest.approx(j0**2, rel=5e-3)
    assert j0**2 == pytest.approx(5.78319, abs=1e-5)


@criterion(1, "solver calibration: disk Dirichlet and square Neumann")
def test_c1_square_neumann():
    rep = case("square_neumann")
    assert rep.eigen["labels"][1] == "mu2"
    mu2, _, _ = value(rep, 1)
    assert mu2 == pytest.approx(math.pi**2, rel=5e-3)


# ----------------------------------------------------------------------------
# 2
# ----------------------------------------------------------------------------


@criterion(2, "projection bound is sharp only for the rectangle")
def test_c2_rectangle_equality():
    rep = case("rectangle")
    lam, _, _ = value(rep)
    assert rep.summary["quadrant_area"] == pytest.approx(1.0)
    assert rep.summary["projection_length"] == pytest.approx(1.0)
    assert lam == pytest.approx((math.pi / 2) ** 2, rel=1e-2)


@criterion(2, "projection bound is sharp only for the rectangle")
def test_c2_bulged_rectangle_strictly_below():
    rect, bulged = case("rectangle"), case("bulged_rectangle")
    for key in ("quadrant_area", "projection_length"):
        assert bulged.summary[key] == pytest.approx(rect.summary[key], rel=1e-9)
    lam, err, _ = value(bulged)
    assert (math.pi / 2) ** 2 - lam > 3 * err


# ----------------------------------------------------------------------------
# 3
# ----------------------------------------------------------------------------


@criterion(3, "annulus bracket and radial oracle")
@pytest.mark.parametrize("R1,R2", [(E2, 1.0), (1e-3, 1.0), (1e-4, 1.0)])
def test_c3_radial_bracket(R1, R2):
    lam = B.annulus_lambda1(R1, R2)
    scale = R2 * R2 * math.log(R2 / R1)
    assert 2.0 / scale <= lam <= 4.0 / scale


@criterion(3, "annulus bracket and radial oracle")
def test_c3_fem_matches_radial():
    rep = case("annulus")
    assert rep.summary["R1"] == pytest.approx(E2) and rep.summary["R2"] == pytest.approx(1.0)
    lam, _, _ = value(rep)
    assert lam == pytest.approx(B.annulus_lambda1(E2, 1.0), rel=1e-2)


# ----------------------------------------------------------------------------
# 4
# ----------------------------------------------------------------------------


@criterion(4, "annulus maximality for a centred disk in the square")
def test_c4_square_disk_center():
    rep = case("square_disk_center")
    s = rep.summary
    # R1 is the diameter of D; R2 matches the area of the part outside B(0, R1)
    assert s["R1"] == pytest.approx(0.1)
    assert s["R2"] == pytest.approx(math.sqrt(0.01 + (4.0 - math.pi * 0.01) / math.pi), rel=1e-9)
    lam, err, _ = value(rep)
    assert lam <= B.annulus_lambda1(s["R1"], s["R2"]) + 3 * err


# ----------------------------------------------------------------------------
# 5
# ----------------------------------------------------------------------------


def _at(c, p, tol):
    return math.dist(c["location"], p) <= tol


@criterion(5, "disconnected Dirichlet sets force interior critical points")
def test_c5_square2disks():
    rep = case("square2disks")
    assert rep.verdict == FOUND
    h = rep.mesh["h"] / 2 ** (rep.mesh["levels"] - 1)
    (c,) = [c for c in rep.critical_points["candidates"] if _at(c, (0.0, 0.0), 2 * h)]
    assert c["confirmed"]
    assert c["ratios"][-1] <= 1e-3


@criterion(5, "disconnected Dirichlet sets force interior critical points")
def test_c5_triangle3disks():
    rep = case("triangle3disks")
    spec = make_example("triangle3disks", 0.05)
    V = np.array([e.start for e in spec.outer])
    side = np.array([np.linalg.norm(V[(i + 1) % 3] - V[(i + 2) % 3]) for i in range(3)])
    incenter = side @ V / side.sum()
    h = rep.mesh["h"] / 2 ** (rep.mesh["levels"] - 1)
    (c,) = [c for c in rep.critical_points["candidates"] if _at(c, incenter, 2 * h)]
    assert c["confirmed"]
    assert c["classification"] in ("local-max", "local-min")


# ----------------------------------------------------------------------------
# 6
# ----------------------------------------------------------------------------


@criterion(6, "hot-spots certification for the disk with a Dirichlet arc")
@pytest.mark.parametrize("name,alpha", [("disk_arc", math.pi / 2), ("disk_arc_1.9", 1.9)])
def test_c6_disk_arc(name, alpha):
    rep = case(name)
    assert rep.spec == make_example("disk_arc", alpha).to_json()
    lam, _, _ = value(rep)
    d = rep.summary["diameter"]
    assert d == pytest.approx(2.0)
    assert lam * d * d <= j0**2
    assert rep.verdict == NO_CRIT


@criterion(6, "hot-spots certification for the disk with a Dirichlet arc")
def test_c6_threshold_root():
    assert B.disk_arc_threshold() == pytest.approx(1.976, abs=1e-3)


# ----------------------------------------------------------------------------
# 7
# ----------------------------------------------------------------------------


@criterion(7, "regular polygons with a Dirichlet edge")
@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_c7_polygon_fem(n):
    rep = case("polygon_edge" if n == 4 else f"polygon_edge_{n}")
    assert rep.spec == make_example("regular_polygon_edge", n).to_json()
    lam, _, rel = value(rep)
    assert lam <= B.hotspots_threshold(rep.summary["diameter"]) * (1 + 3 * rel)


@criterion(7, "regular polygons with a Dirichlet edge")
def test_c7_formulas():
    for n in range(7, 40):
        assert B.polygon_area_ratio(n) < B.MIYAMOTO_RATIO
    assert B.pentagon_ratio() == pytest.approx(1.4472, abs=1e-4)
    assert B.pentagon_ratio() < 1.531 < B.MIYAMOTO_RATIO + 1e-3
    assert B.MIYAMOTO_RATIO == pytest.approx(1.531, abs=1e-3)


@criterion(7, "regular polygons with a Dirichlet edge")
def test_c7_hexagon_rayleigh_quotient():
    # P6 of width 1 with D the edge on x = 0, test function sin(pi x / 2)
    verts = shapes.regular_polygon_vertices(6, 1 / math.sqrt(3))
    spec = DomainSpec("P6", polygon_chain(verts), (), (DirichletPiece("edge", (0, 5)),)).validate()
    mesh = triangulate(spec, 0.05)
    assert mesh.vertices[:, 0].min() == pytest.approx(0.0, abs=1e-12)
    assert mesh.vertices[:, 0].max() == pytest.approx(1.0)
    f = lambda P: np.sin(math.pi * P[:, 0] / 2)
    g = lambda P: np.column_stack([math.pi / 2 * np.cos(math.pi * P[:, 0] / 2), np.zeros(len(P))])
    q = fem.rayleigh_quotient(mesh, f, g)
    thr = (j0 / (2 / math.sqrt(3))) ** 2
    assert q <= 3.797 < thr
    assert thr == pytest.approx(4.337, abs=1e-3)
    hb = B.hexagon_bound()
    assert hb.bound <= 3.797 and hb.verdict == B.HOLDS


# ----------------------------------------------------------------------------
# 8
# ----------------------------------------------------------------------------


@criterion(8, "Kn: simple, odd second Neumann eigenfunction without critical points")
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_c8_Kn(n):
    rep = case("Kn" if n == 4 else f"Kn_{n}")
    assert rep.spec == make_example("Kn", n).to_json()
    mu = rep.eigen["values"]
    rel = rep.eigen["rel_error"]
    assert (mu[2] - mu[1]) / mu[1] > 10 * rel[1]
    checks = {c["kind"]: c for c in rep.checks}
    assert checks["symmetry"]["detail"]["verdict"] == "odd"
    assert checks["symmetry"]["value"] <= 1e-2
    assert rep.verdict == NO_CRIT
    half = run_case("Pn_e", {"n": n, "h": rep.mesh["h"], "levels": rep.mesh["levels"]})
    assert mu[1] == pytest.approx(half.eigen["values"][0], rel=1e-2)


# ----------------------------------------------------------------------------
# 9
# ----------------------------------------------------------------------------


@criterion(9, "small Dirichlet disk anywhere in the square")
@pytest.mark.parametrize("name", ["eps_square_center", "eps_square_corner", "eps_square_edge"])
def test_c9_small_disk(name):
    rep = case(name)
    assert [p["disk"][2] for p in rep.spec["dirichlet"]] == [pytest.approx(0.007316 / 2)]
    lam, _, _ = value(rep)
    assert lam <= (j0 / math.sqrt(2.0)) ** 2
    assert (j0 / math.sqrt(2.0)) ** 2 == pytest.approx(2.8916, abs=1e-4)
    assert rep.verdict == NO_CRIT


# ----------------------------------------------------------------------------
# 10
# ----------------------------------------------------------------------------


def _random_poly(rng, deg=3):
    c = rng.normal(size=(deg + 1, deg + 1))
    c[np.add.outer(np.arange(deg + 1), np.arange(deg + 1)) > deg] = 0

    def p(P):
        x, y = P[:, 0], P[:, 1]
        return sum(c[i, j] * x**i * y**j for i in range(deg + 1) for j in range(deg + 1))

    def dp(P):
        x, y = P[:, 0], P[:, 1]
        gx = sum(i * c[i, j] * x ** max(i - 1, 0) * y**j for i in range(1, deg + 1) for j in range(deg + 1))
        gy = sum(j * c[i, j] * x**i * y ** max(j - 1, 0) for i in range(deg + 1) for j in range(1, deg + 1))
        return np.column_stack([gx, gy])

    return p, dp


def _admissible_rectangle(rng):
    # vanishes on x = 0
    p, dp = _random_poly(rng)
    f = lambda P: P[:, 0] * (1 + 0.5 * np.tanh(p(P)))

    def g(P):
        t = np.tanh(p(P))
        s = 0.5 * (1 - t * t)[:, None] * dp(P)
        return np.column_stack([1 + 0.5 * t, np.zeros(len(P))]) + P[:, [0]] * s

    return f, g


def _admissible_disk_hole(rng, R):
    # vanishes on the circle r = R
    p, dp = _random_poly(rng)

    def f(P):
        return (P[:, 0] ** 2 + P[:, 1] ** 2 - R * R) * (2 + np.tanh(p(P)))

    def g(P):
        t = np.tanh(p(P))
        q = P[:, 0] ** 2 + P[:, 1] ** 2 - R * R
        return 2 * P * (2 + t)[:, None] + q[:, None] * (1 - t * t)[:, None] * dp(P)

    return f, g


@criterion(10, "property suites and determinism")
def test_c10_variational_upper_bound():
    rng = np.random.default_rng(20240611)
    R = 0.1
    rect = fem.solve_levels(make_example("rectangle", 1.0, 1.0), 0.1, 3)
    hole = fem.solve_levels(shapes.square_disk(0.0, 0.0, 2 * R, -1.0, 1.0), 0.1, 3)
    quotients = []
    for i in range(20):
        res, (f, g) = (rect, _admissible_rectangle(rng)) if i % 2 == 0 else (hole, _admissible_disk_hole(rng, R))
        q = fem.rayleigh_quotient(res.finest.mesh, f, g)
        quotients.append((q, float(res.value[0]), float(res.extrapolation.abs_error[0])))
    assert len(quotients) == 20
    for q, lam, err in quotients:
        assert q >= lam - err


NESTED = [
    (shapes.box(dirichlet_edges=(3,)), shapes.box(dirichlet_edges=(3, 0))),
    (shapes.square_disk(0.5, 0.5, 0.1), shapes.square_disk(0.5, 0.5, 0.2)),
    (make_example("regular_polygon_edge", 5, 0.5), make_example("regular_polygon_edge", 5, 1.0)),
    (shapes.disk_slit(0.2), shapes.disk_slit(0.5)),
    (make_example("annulus", 0.1, 1.0), make_example("annulus", 0.2, 1.0)),
]


@criterion(10, "property suites and determinism")
@pytest.mark.parametrize("small,large", NESTED, ids=[f"pair{i}" for i in range(len(NESTED))])
def test_c10_domain_monotonicity(small, large):
    a = fem.solve_levels(small, 0.1, 3)
    b = fem.solve_levels(large, 0.1, 3)
    tol = 3 * (a.extrapolation.abs_error[0] + b.extrapolation.abs_error[0])
    assert a.value[0] <= b.value[0] + tol


@criterion(10, "property suites and determinism")
def test_c10_bessel_and_annulus_regression():
    for _ in range(2):
        assert abs(bessel_zero_j0() - J0_ZERO) <= 1e-12
        assert abs(j0 - J0_ZERO) <= 1e-12
        assert abs(B.annulus_lambda1(E2, 1.0) - ANNULUS_E2) <= 1e-12 * ANNULUS_E2
    k = B.annulus_root(E2, 1.0)
    cross = bessel("Y0", k * E2) * bessel("J1", k) - bessel("J0", k * E2) * bessel("Y1", k)
    assert abs(cross) <= 1e-12


@criterion(10, "property suites and determinism")
@pytest.mark.parametrize("name", ["rectangle", "annulus", "disk_arc"])
def test_c10_byte_identical_reports(name):
    a, b = run_case(name), run_case(name)
    assert a.dumps(wall_time=False) == b.dumps(wall_time=False)
    assert render_svg(a) == render_svg(b)
