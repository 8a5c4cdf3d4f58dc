"""Constructors for every (domain, Dirichlet region) pair used in the experiments."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
import shapely

from .geometry import (
    Arc,
    DirichletPiece,
    DomainSpec,
    GeometryError,
    Segment,
    Symmetry,
    TWO_PI,
    circle_chain,
    polygon_chain,
)

IDENTITY = (1.0, 0.0, 0.0, 1.0)
FLIP_X = (-1.0, 0.0, 0.0, 1.0)  # x -> -x
FLIP_Y = (1.0, 0.0, 0.0, -1.0)  # y -> -y
HALF_TURN = (-1.0, 0.0, 0.0, -1.0)

DEFAULT_ZIGZAG = ((0.0, 0.0), (-0.5, 0.15), (-0.15, 0.35), (-0.8, 0.55), (-0.3, 0.8), (0.0, 1.0))


def _rot(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def square2disks(eps: float) -> DomainSpec:
    """(-1,1)² with D the two disks B((±eps, 0), eps/2)."""
    if not 0 < eps < 0.5:
        raise GeometryError("square2disks needs 0 < eps < 1/2")
    r = eps / 2
    outer = polygon_chain([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    pieces = (DirichletPiece("disk", (eps, 0.0, r)), DirichletPiece("disk", (-eps, 0.0, r)))
    quarter = DomainSpec(
        "square2disks-quarter",
        (
            Segment(0.0, 0.0, eps - r, 0.0, mirror=True),
            Arc(eps, 0.0, r, math.pi, 0.0),
            Segment(eps + r, 0.0, 1.0, 0.0, mirror=True),
            Segment(1.0, 0.0, 1.0, 1.0),
            Segment(1.0, 1.0, 0.0, 1.0),
            Segment(0.0, 1.0, 0.0, 0.0, mirror=True),
        ),
        dirichlet=(DirichletPiece("edge", (0, 1)),),
    )
    sym = Symmetry((0.0, 0.0), (IDENTITY, FLIP_X, FLIP_Y, HALF_TURN), quarter)
    return DomainSpec(f"square2disks(eps={eps:g})", outer, (), pieces, sym).validate()


def triangle3disks(eps: float) -> DomainSpec:
    """Equilateral triangle (circumradius 1, incenter 0) with three disks of radius eps/2.

    The disk centres sit on the angle bisectors at distance 2 eps/sqrt(3)
    from the incenter.
    """
    if eps <= 0:
        raise GeometryError("triangle3disks needs eps > 0")
    r = eps / 2
    c = 2 * eps / math.sqrt(3)
    # disk must stay inside: distance from a bisector point to the sides is (1 - t)/2
    if c + r >= 1 or (1 - c) / 2 <= r:
        raise GeometryError("triangle3disks: disks escape the triangle for this eps")
    angles = [math.pi / 2 + k * TWO_PI / 3 for k in range(3)]
    verts = [(math.cos(a), math.sin(a)) for a in angles]
    outer = polygon_chain(verts)
    pieces = tuple(DirichletPiece("disk", (c * math.cos(a), c * math.sin(a), r)) for a in angles)
    m = ((verts[0][0] + verts[1][0]) / 2, (verts[0][1] + verts[1][1]) / 2)
    sixth = DomainSpec(
        "triangle3disks-sixth",
        (
            Segment(0.0, 0.0, 0.0, c - r, mirror=True),
            Arc(0.0, c, r, 1.5 * math.pi, 0.5 * math.pi),
            Segment(0.0, c + r, 0.0, 1.0, mirror=True),
            Segment(0.0, 1.0, m[0], m[1]),
            Segment(m[0], m[1], 0.0, 0.0, mirror=True),
        ),
        dirichlet=(DirichletPiece("edge", (0, 1)),),
    )
    ops = []
    for k in range(3):
        R = _rot(k * TWO_PI / 3)
        ops.append(tuple(R.ravel()))
        ops.append(tuple((R @ np.array(FLIP_X).reshape(2, 2)).ravel()))
    sym = Symmetry((0.0, 0.0), tuple(ops), sixth)
    return DomainSpec(f"triangle3disks(eps={eps:g})", outer, (), pieces, sym).validate()


def disk_arc(alpha: float) -> DomainSpec:
    """Unit disk with D a boundary arc of length alpha, chord on the y-axis.

    The disk is placed at centre (cos(alpha/2), 1), so it lies in the upper
    half plane and D lies in the closed second quadrant.
    """
    if not 0 < alpha <= math.pi:
        raise GeometryError("disk_arc needs 0 < alpha <= pi")
    cx, cy = math.cos(alpha / 2), 1.0
    t0 = math.pi + alpha / 2
    outer = (Arc(cx, cy, 1.0, t0, t0 + TWO_PI),)
    piece = DirichletPiece("arc", (0, TWO_PI - alpha, TWO_PI))
    return DomainSpec(f"disk_arc(alpha={alpha:.17g})", outer, (), (piece,)).validate()


def regular_polygon_vertices(n: int, circumradius: float = 1.0) -> list[tuple]:
    """Vertices (CCW) with one edge on the y-axis and min y = 0; that edge is last."""
    R = circumradius
    a = R * math.cos(math.pi / n)
    s = 2 * R * math.sin(math.pi / n)
    c = (a, s / 2)
    phis = [math.pi + math.pi / n + TWO_PI * k / n for k in range(n)]
    pts = [(c[0] + R * math.cos(p), c[1] + R * math.sin(p)) for p in phis]
    pts[0] = (0.0, 0.0)
    pts[-1] = (0.0, s)
    ymin = min(p[1] for p in pts)
    return [(p[0], p[1] - ymin) for p in pts]


def regular_polygon_edge(n: int, fraction: float = 1.0) -> DomainSpec:
    """Regular n-gon (circumradius 1) with D a centred sub-segment of one edge."""
    n = int(n)
    if n < 3:
        raise GeometryError("regular polygon needs n >= 3")
    if not 0 < fraction <= 1:
        raise GeometryError("sub-segment fraction must lie in (0, 1]")
    verts = regular_polygon_vertices(n)
    outer = polygon_chain(verts)
    if fraction == 1.0:
        piece = DirichletPiece("edge", (0, n - 1))
    else:
        s = outer[-1].length
        L = n * s
        pad = (1 - fraction) * s / 2
        piece = DirichletPiece("arc", (0, L - s + pad, L - pad))
    return DomainSpec(f"regular_polygon_edge(n={n},fraction={fraction:g})", outer, (), (piece,)).validate()


def _unit_side_polygon(n: int) -> list[tuple]:
    v = [(0.0, 0.0)]
    for k in range(n - 1):
        th = TWO_PI * k / n
        v.append((v[-1][0] + math.cos(th), v[-1][1] + math.sin(th)))
    v[1] = (1.0, 0.0)
    return v


def polygon_with_dirichlet_edge(n: int) -> DomainSpec:
    """P_n with unit sides, e = [0,1]×{0} carrying the Dirichlet condition."""
    v = _unit_side_polygon(int(n))
    return DomainSpec(f"Pn_e(n={n})", polygon_chain(v), (), (DirichletPiece("edge", (0, 0)),)).validate()


def Kn(n: int) -> DomainSpec:
    """K_n = P_n ∪ e ∪ Q_n: a unit-side regular n-gon doubled across e = (0,1)×{0}."""
    n = int(n)
    if n < 3:
        raise GeometryError("K_n needs n >= 3")
    v = _unit_side_polygon(n)
    refl = [(x, -y) for x, y in v]
    ring = v[1:] + [v[0]] + refl[::-1][:-2]
    outer = polygon_chain(ring)
    half = DomainSpec(f"Kn-half(n={n})", polygon_chain(v, mirror=[0]))
    sym = Symmetry((0.0, 0.0), (IDENTITY, FLIP_Y), half)
    return DomainSpec(f"Kn(n={n})", outer, (), (), sym).validate()


def wild(a: float, gamma: Sequence[Sequence[float]] = DEFAULT_ZIGZAG) -> DomainSpec:
    """Region bounded by the rectangle (0,a-1)×(0,1) (minus its left side) and γ.

    γ is a polyline from (0,0) to (0,1) inside [-1,0]×[0,1]; D = γ.
    """
    if not a > 1:
        raise GeometryError("wild needs a > 1")
    g = [tuple(map(float, p)) for p in gamma]
    if len(g) < 2 or g[0] != (0.0, 0.0) or g[-1] != (0.0, 1.0):
        raise GeometryError("gamma must run from (0,0) to (0,1)")
    if any(not (-1 <= x <= 0 and 0 <= y <= 1) for x, y in g):
        raise GeometryError("gamma must stay inside [-1,0]×[0,1]")
    if not shapely.LineString(g).is_simple:
        raise GeometryError("gamma is not simple")
    w = a - 1
    verts = [(0.0, 0.0), (w, 0.0), (w, 1.0), (0.0, 1.0), *g[-2:0:-1]]
    outer = polygon_chain(verts)
    pieces = tuple(DirichletPiece("edge", (0, i)) for i in range(3, len(verts)))
    return DomainSpec(f"wild(a={a:g})", outer, (), pieces).validate()


def rectangle(A: float = 1.0, ell: float = 1.0) -> DomainSpec:
    """(0, A/ell)×(0, ell) with D the left side: the Miyamoto extremizer."""
    if A <= 0 or ell <= 0:
        raise GeometryError("rectangle needs A, ell > 0")
    w = A / ell
    outer = polygon_chain([(0, 0), (w, 0), (w, ell), (0, ell)])
    return DomainSpec(f"rectangle(A={A:g},ell={ell:g})", outer, (), (DirichletPiece("edge", (0, 3)),)).validate()


def bulged_rectangle(A: float = 1.0, ell: float = 1.0, bulge: float = 0.2) -> DomainSpec:
    """Convex pentagon with the same A and ell as :func:`rectangle`, right side pushed out."""
    w = A / ell
    if not 0 < bulge < w:
        raise GeometryError("bulge must lie in (0, A/ell)")
    outer = polygon_chain([(0, 0), (w - bulge, 0), (w + bulge, ell / 2), (w - bulge, ell), (0, ell)])
    return DomainSpec(
        f"bulged_rectangle(A={A:g},ell={ell:g},bulge={bulge:g})", outer, (), (DirichletPiece("edge", (0, 4)),)
    ).validate()


def annulus(R1: float, R2: float) -> DomainSpec:
    """A(R1, R2) with D the inner circle."""
    if not 0 < R1 < R2:
        raise GeometryError("degenerate annulus: need 0 < R1 < R2")
    return DomainSpec(
        f"annulus(R1={R1:.17g},R2={R2:.17g})",
        circle_chain(0.0, 0.0, R2),
        (circle_chain(0.0, 0.0, R1, ccw=False),),
        (DirichletPiece("edge", (1, 0)),),
    ).validate()


def disk(radius: float = 1.0, dirichlet: bool = True) -> DomainSpec:
    pieces = (DirichletPiece("edge", (0, 0)),) if dirichlet else ()
    tag = "D" if dirichlet else "N"
    return DomainSpec(f"disk(r={radius:g},{tag})", circle_chain(0.0, 0.0, radius), (), pieces).validate()


def box(x0: float = 0.0, y0: float = 0.0, x1: float = 1.0, y1: float = 1.0, dirichlet_edges: Sequence[int] = ()) -> DomainSpec:
    """Axis-aligned rectangle; edges numbered bottom, right, top, left."""
    outer = polygon_chain([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    pieces = tuple(DirichletPiece("edge", (0, i)) for i in dirichlet_edges)
    return DomainSpec(f"box({x0:g},{y0:g},{x1:g},{y1:g})", outer, (), pieces).validate()


def lshape() -> DomainSpec:
    outer = polygon_chain([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
    return DomainSpec("lshape", outer).validate()


def square_disk(cx: float, cy: float, diam: float, lo: float = 0.0, hi: float = 1.0) -> DomainSpec:
    """Square (lo,hi)² with a closed Dirichlet disk of the given diameter."""
    outer = polygon_chain([(lo, lo), (hi, lo), (hi, hi), (lo, hi)])
    piece = DirichletPiece("disk", (cx, cy, diam / 2))
    return DomainSpec(f"square_disk(c=({cx:g},{cy:g}),diam={diam:.6g})", outer, (), (piece,)).validate()


def square_segment(p: Sequence[float], q: Sequence[float], lo: float = 0.0, hi: float = 1.0) -> DomainSpec:
    outer = polygon_chain([(lo, lo), (hi, lo), (hi, hi), (lo, hi)])
    piece = DirichletPiece("segment", (*map(float, p), *map(float, q)))
    return DomainSpec("square_segment", outer, (), (piece,)).validate()


def disk_slit(length: float, radius: float = 1.0) -> DomainSpec:
    """Disk with a radial Dirichlet slit starting at the centre."""
    outer = circle_chain(0.0, 0.0, radius)
    piece = DirichletPiece("segment", (0.0, 0.0, length, 0.0))
    return DomainSpec(f"disk_slit(len={length:g})", outer, (), (piece,)).validate()


EXAMPLES = {
    "square2disks": square2disks,
    "triangle3disks": triangle3disks,
    "disk_arc": disk_arc,
    "regular_polygon_edge": regular_polygon_edge,
    "Kn": Kn,
    "Pn_e": polygon_with_dirichlet_edge,
    "wild": wild,
    "rectangle": rectangle,
    "bulged_rectangle": bulged_rectangle,
    "annulus": annulus,
    "disk": disk,
    "box": box,
    "lshape": lshape,
    "square_disk": square_disk,
    "square_segment": square_segment,
    "disk_slit": disk_slit,
}


def make_example(name: str, *params) -> DomainSpec:
    """Build a named example; ``params`` are passed positionally."""
    try:
        fn = EXAMPLES[name]
    except KeyError:
        raise GeometryError(f"unknown example {name!r}; known: {sorted(EXAMPLES)}") from None
    return fn(*params)
