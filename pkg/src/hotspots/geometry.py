"""Planar domains with mixed boundary data.

A domain is an outer closed chain (counterclockwise) plus optional hole
chains (clockwise).  Chains are built from straight segments and circular
arcs, so disk and annulus areas stay exact.  The Dirichlet region is a list
of :class:`DirichletPiece` objects of four kinds:

``arc``      portion ``[s0, s1]`` (arclength from the chain start) of a chain
``edge``     a whole entry of a chain
``disk``     closed disk ``B((cx, cy), r)`` inside the domain
``segment``  closed straight segment inside the closure of the domain
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
import shapely
from scipy.spatial import ConvexHull

# first zero of J0, duplicated here to keep geometry import-light;
# tests pin it against bounds.bessel_zero_j0()
J0_ZERO = 2.404825557695773

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    """Invalid domain or parameters."""


# ----------------------------------------------------------------------------
# chain primitives
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    x1: float
    y1: float
    x2: float
    y2: float
    mirror: bool = False

    @property
    def start(self) -> np.ndarray:
        return np.array([self.x1, self.y1])

    @property
    def end(self) -> np.ndarray:
        return np.array([self.x2, self.y2])

    @property
    def length(self) -> float:
        return math.hypot(self.x2 - self.x1, self.y2 - self.y1)

    def points(self, s) -> np.ndarray:
        t = np.atleast_1d(np.asarray(s, float)) / self.length
        return np.column_stack([self.x1 + t * (self.x2 - self.x1), self.y1 + t * (self.y2 - self.y1)])

    def tangents(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, float))
        d = (self.end - self.start) / self.length
        return np.tile(d, (len(s), 1))

    def area_term(self) -> float:
        return 0.5 * (self.x1 * self.y2 - self.x2 * self.y1)

    def sub(self, s0: float, s1: float) -> "Segment":
        p, q = self.points([s0, s1])
        return Segment(p[0], p[1], q[0], q[1], self.mirror)

    def reversed(self) -> "Segment":
        return Segment(self.x2, self.y2, self.x1, self.y1, self.mirror)

    def transformed(self, R: np.ndarray, t: np.ndarray) -> "Segment":
        p = R @ self.start + t
        q = R @ self.end + t
        return Segment(p[0], p[1], q[0], q[1], self.mirror)

    def to_json(self) -> dict:
        out = {"seg": [self.x1, self.y1, self.x2, self.y2]}
        if self.mirror:
            out["mirror"] = True
        return out


@dataclass(frozen=True)
class Arc:
    """Circular arc from angle ``t1`` to ``t2`` (counterclockwise iff t2 > t1)."""

    cx: float
    cy: float
    r: float
    t1: float
    t2: float
    mirror: bool = False

    @property
    def sweep(self) -> float:
        return self.t2 - self.t1

    @property
    def start(self) -> np.ndarray:
        return np.array([self.cx + self.r * math.cos(self.t1), self.cy + self.r * math.sin(self.t1)])

    @property
    def end(self) -> np.ndarray:
        return np.array([self.cx + self.r * math.cos(self.t2), self.cy + self.r * math.sin(self.t2)])

    @property
    def length(self) -> float:
        return self.r * abs(self.sweep)

    def angles(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, float))
        return self.t1 + math.copysign(1.0, self.sweep) * s / self.r

    def points(self, s) -> np.ndarray:
        th = self.angles(s)
        return np.column_stack([self.cx + self.r * np.cos(th), self.cy + self.r * np.sin(th)])

    def tangents(self, s) -> np.ndarray:
        th = self.angles(s)
        sg = math.copysign(1.0, self.sweep)
        return sg * np.column_stack([-np.sin(th), np.cos(th)])

    def area_term(self) -> float:
        r, cx, cy = self.r, self.cx, self.cy
        return 0.5 * (
            r * r * self.sweep
            + r * cx * (math.sin(self.t2) - math.sin(self.t1))
            - r * cy * (math.cos(self.t2) - math.cos(self.t1))
        )

    def sub(self, s0: float, s1: float) -> "Arc":
        a0, a1 = self.angles([s0, s1])
        return Arc(self.cx, self.cy, self.r, float(a0), float(a1), self.mirror)

    def reversed(self) -> "Arc":
        return Arc(self.cx, self.cy, self.r, self.t2, self.t1, self.mirror)

    def transformed(self, R: np.ndarray, t: np.ndarray) -> "Arc":
        c = R @ np.array([self.cx, self.cy]) + t
        det = R[0, 0] * R[1, 1] - R[0, 1] * R[1, 0]
        phi = math.atan2(R[1, 0], R[0, 0])
        if det > 0:
            return Arc(c[0], c[1], self.r, self.t1 + phi, self.t2 + phi, self.mirror)
        # reflection: angle theta -> phi - theta with phi from R = [[c, s], [s, -c]]
        return Arc(c[0], c[1], self.r, phi - self.t1, phi - self.t2, self.mirror)

    def to_json(self) -> dict:
        out = {"arc": [self.cx, self.cy, self.r, self.t1, self.t2]}
        if self.mirror:
            out["mirror"] = True
        return out


Entry = Segment | Arc
Chain = tuple  # tuple[Entry, ...]


def chain_length(chain: Sequence[Entry]) -> float:
    return float(sum(e.length for e in chain))


def chain_area(chain: Sequence[Entry]) -> float:
    """Signed area enclosed by a closed chain (positive if counterclockwise)."""
    return float(sum(e.area_term() for e in chain))


def sample_entry(e: Entry, spacing: float, include_end: bool = False) -> np.ndarray:
    n = max(1, int(math.ceil(e.length / spacing)))
    s = np.linspace(0.0, e.length, n + 1)
    if not include_end:
        s = s[:-1]
    return e.points(s)


def sample_chain(chain: Sequence[Entry], spacing: float) -> np.ndarray:
    return np.vstack([sample_entry(e, spacing) for e in chain])


def split_entry(e: Entry, params: Sequence[float]) -> list[Entry]:
    """Cut ``e`` at the given arclength parameters (ignores those at the ends)."""
    L = e.length
    tol = 1e-12 * max(L, 1.0)
    cuts = sorted({float(p) for p in params if tol < p < L - tol})
    knots = [0.0, *cuts, L]
    return [e.sub(a, b) for a, b in zip(knots[:-1], knots[1:])]


def _seg_params_on_line(e: Segment, p: np.ndarray, d: np.ndarray) -> list[float]:
    """Arclength params where segment ``e`` crosses the infinite line p + t d."""
    a, b = e.start, e.end
    u = b - a
    den = u[0] * d[1] - u[1] * d[0]
    if abs(den) < 1e-14 * (np.linalg.norm(u) * np.linalg.norm(d)):
        return []
    w = p - a
    t = (w[0] * d[1] - w[1] * d[0]) / den
    return [t * e.length] if -1e-12 <= t <= 1 + 1e-12 else []


def _on_arc(e: Arc, theta: float) -> float | None:
    """Arclength param of angle ``theta`` on arc ``e`` or None."""
    sg = math.copysign(1.0, e.sweep)
    rel = (sg * (theta - e.t1)) % TWO_PI
    if rel <= abs(e.sweep) + 1e-12:
        return rel * e.r
    if abs(rel - TWO_PI) < 1e-12:
        return 0.0
    return None


def entry_intersections(e: Entry, other: Entry) -> list[float]:
    """Arclength params on ``e`` where it meets ``other`` (overlaps give their ends)."""
    out: list[float] = []
    if isinstance(e, Segment) and isinstance(other, Segment):
        d = other.end - other.start
        u = e.end - e.start
        cross = u[0] * d[1] - u[1] * d[0]
        if abs(cross) < 1e-12 * np.linalg.norm(u) * np.linalg.norm(d):
            w = other.start - e.start
            if abs(u[0] * w[1] - u[1] * w[0]) < 1e-12 * np.linalg.norm(u) * max(np.linalg.norm(w), 1e-300):
                # collinear overlap: ends of other projected on e
                for q in (other.start, other.end):
                    t = float(np.dot(q - e.start, u) / np.dot(u, u))
                    if 0 <= t <= 1:
                        out.append(t * e.length)
            return out
        for s in _seg_params_on_line(e, other.start, d):
            q = e.points([s])[0]
            t = float(np.dot(q - other.start, d) / np.dot(d, d))
            if -1e-12 <= t <= 1 + 1e-12:
                out.append(s)
        return out
    if isinstance(e, Segment):
        arc = other
        a = e.start
        u = (e.end - e.start) / e.length
        w = a - np.array([arc.cx, arc.cy])
        b = float(np.dot(w, u))
        c = float(np.dot(w, w) - arc.r**2)
        disc = b * b - c
        if disc < 0:
            return out
        for s in (-b - math.sqrt(disc), -b + math.sqrt(disc)):
            if -1e-12 * e.length <= s <= e.length * (1 + 1e-12):
                q = a + s * u
                if _on_arc(arc, math.atan2(q[1] - arc.cy, q[0] - arc.cx)) is not None:
                    out.append(min(max(s, 0.0), e.length))
        return out
    # arc against segment or arc
    if isinstance(other, Segment):
        for s in entry_intersections(other, e):
            q = other.points([s])[0]
            p = _on_arc(e, math.atan2(q[1] - e.cy, q[0] - e.cx))
            if p is not None:
                out.append(p)
        return out
    c1 = np.array([e.cx, e.cy])
    c2 = np.array([other.cx, other.cy])
    dist = float(np.linalg.norm(c2 - c1))
    if dist < 1e-12 * e.r and abs(e.r - other.r) < 1e-12 * e.r:
        for q in (other.start, other.end):
            p = _on_arc(e, math.atan2(q[1] - e.cy, q[0] - e.cx))
            if p is not None:
                out.append(p)
        return out
    if dist > e.r + other.r or dist < abs(e.r - other.r) or dist == 0:
        return out
    a = (e.r**2 - other.r**2 + dist**2) / (2 * dist)
    hh = max(e.r**2 - a * a, 0.0)
    base = math.atan2(c2[1] - c1[1], c2[0] - c1[0])
    half = math.atan2(math.sqrt(hh), a)
    for th in {base - half, base + half}:
        q = c1 + e.r * np.array([math.cos(th), math.sin(th)])
        if _on_arc(other, math.atan2(q[1] - other.cy, q[0] - other.cx)) is not None:
            p = _on_arc(e, th)
            if p is not None:
                out.append(p)
    return out


def chain_from_json(items: Sequence[dict]) -> Chain:
    out = []
    for it in items:
        mirror = bool(it.get("mirror", False))
        if "seg" in it:
            out.append(Segment(*map(float, it["seg"]), mirror=mirror))
        elif "arc" in it:
            out.append(Arc(*map(float, it["arc"]), mirror=mirror))
        else:
            raise GeometryError(f"unknown chain entry {it!r}")
    return tuple(out)


def polygon_chain(vertices: Sequence[Sequence[float]], mirror: Sequence[int] = ()) -> Chain:
    """Closed chain through ``vertices``; entries listed in ``mirror`` are mirror lines."""
    v = [tuple(map(float, p)) for p in vertices]
    n = len(v)
    return tuple(
        Segment(v[i][0], v[i][1], v[(i + 1) % n][0], v[(i + 1) % n][1], mirror=i in mirror) for i in range(n)
    )


def circle_chain(cx: float, cy: float, r: float, ccw: bool = True, start: float = 0.0) -> Chain:
    if ccw:
        return (Arc(cx, cy, r, start, start + TWO_PI),)
    return (Arc(cx, cy, r, start, start - TWO_PI),)


# ----------------------------------------------------------------------------
# Dirichlet pieces and the domain spec
# ----------------------------------------------------------------------------

PIECE_KINDS = ("arc", "edge", "disk", "segment")


@dataclass(frozen=True)
class DirichletPiece:
    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in PIECE_KINDS:
            raise GeometryError(f"unknown Dirichlet piece kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    def to_json(self) -> dict:
        p = list(self.params)
        if self.kind in ("arc", "edge"):
            p[0] = int(p[0])
        if self.kind == "edge":
            p[1] = int(p[1])
        return {self.kind: p}

    @classmethod
    def from_json(cls, d: dict) -> "DirichletPiece":
        (kind, params), = d.items()
        return cls(kind, tuple(params))


@dataclass(frozen=True)
class Symmetry:
    """Meshing hint: the domain is the union of ``ops`` images of ``fundamental``.

    ``ops`` are 2x2 orthogonal matrices (row-major 4-tuples) acting about
    ``center``.  Mirror entries of the fundamental chain become interior edges.
    """

    center: tuple
    ops: tuple
    fundamental: "DomainSpec"

    def matrices(self) -> list[np.ndarray]:
        return [np.array(op, float).reshape(2, 2) for op in self.ops]

    def to_json(self) -> dict:
        return {"center": list(self.center), "ops": [list(o) for o in self.ops], "fundamental": self.fundamental.to_json()}


@dataclass(frozen=True)
class DomainSpec:
    name: str
    outer: Chain
    holes: tuple = ()
    dirichlet: tuple = ()
    symmetry: Symmetry | None = field(default=None, compare=False)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "outer": [e.to_json() for e in self.outer],
            "holes": [[e.to_json() for e in h] for h in self.holes],
            "dirichlet": [p.to_json() for p in self.dirichlet],
        }
        if self.symmetry is not None:
            out["symmetry"] = self.symmetry.to_json()
        return out

    @classmethod
    def from_json(cls, d: dict) -> "DomainSpec":
        sym = None
        if d.get("symmetry"):
            s = d["symmetry"]
            sym = Symmetry(
                tuple(map(float, s["center"])),
                tuple(tuple(map(float, o)) for o in s["ops"]),
                cls.from_json(s["fundamental"]),
            )
        return cls(
            name=str(d["name"]),
            outer=chain_from_json(d["outer"]),
            holes=tuple(chain_from_json(h) for h in d.get("holes", [])),
            dirichlet=tuple(DirichletPiece.from_json(p) for p in d.get("dirichlet", [])),
            symmetry=sym,
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def load(cls, path) -> "DomainSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    # -- helpers -----------------------------------------------------------
    @property
    def chains(self) -> list[Chain]:
        return [self.outer, *self.holes]

    def without_dirichlet(self) -> "DomainSpec":
        return replace(self, dirichlet=(), symmetry=None)

    def with_dirichlet(self, pieces: Sequence[DirichletPiece], name: str | None = None) -> "DomainSpec":
        return replace(self, dirichlet=tuple(pieces), symmetry=None, name=name or self.name)

    def transformed(self, theta: float = 0.0, shift: Sequence[float] = (0.0, 0.0)) -> "DomainSpec":
        """Apply the rigid motion x -> R(theta) x + shift."""
        R = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        t = np.asarray(shift, float)
        pieces = []
        for p in self.dirichlet:
            if p.kind == "disk":
                c = R @ np.array(p.params[:2]) + t
                pieces.append(DirichletPiece("disk", (c[0], c[1], p.params[2])))
            elif p.kind == "segment":
                a = R @ np.array(p.params[:2]) + t
                b = R @ np.array(p.params[2:]) + t
                pieces.append(DirichletPiece("segment", (a[0], a[1], b[0], b[1])))
            else:
                pieces.append(p)
        sym = None
        if self.symmetry is not None:
            c = R @ np.array(self.symmetry.center) + t
            ops = tuple(tuple((R @ m @ R.T).ravel()) for m in self.symmetry.matrices())
            sym = Symmetry(tuple(c), ops, self.symmetry.fundamental.transformed(theta, shift))
        return DomainSpec(
            self.name,
            tuple(e.transformed(R, t) for e in self.outer),
            tuple(tuple(e.transformed(R, t) for e in h) for h in self.holes),
            tuple(pieces),
            sym,
        )

    def scaled(self, c: float) -> "DomainSpec":
        def se(e):
            if isinstance(e, Segment):
                return Segment(c * e.x1, c * e.y1, c * e.x2, c * e.y2, e.mirror)
            return Arc(c * e.cx, c * e.cy, c * e.r, e.t1, e.t2, e.mirror)

        pieces = []
        for p in self.dirichlet:
            if p.kind == "disk":
                pieces.append(DirichletPiece("disk", tuple(c * v for v in p.params)))
            elif p.kind == "segment":
                pieces.append(DirichletPiece("segment", tuple(c * v for v in p.params)))
            elif p.kind == "arc":
                pieces.append(DirichletPiece("arc", (p.params[0], c * p.params[1], c * p.params[2])))
            else:
                pieces.append(p)
        sym = None
        if self.symmetry is not None:
            sym = Symmetry(tuple(c * v for v in self.symmetry.center), self.symmetry.ops, self.symmetry.fundamental.scaled(c))
        return DomainSpec(
            self.name, tuple(map(se, self.outer)), tuple(tuple(map(se, h)) for h in self.holes), tuple(pieces), sym
        )

    # -- validation --------------------------------------------------------
    def validate(self) -> "DomainSpec":
        scale = bbox_diagonal(self)
        if scale <= 0:
            raise GeometryError("degenerate domain")
        for k, ch in enumerate(self.chains):
            if not ch:
                raise GeometryError(f"chain {k} is empty")
            for a, b in zip(ch, ch[1:] + ch[:1]):
                if np.linalg.norm(a.end - b.start) > 1e-9 * scale:
                    raise GeometryError(f"chain {k} is not closed at {a.end}")
            ring = shapely.LinearRing(sample_chain(ch, scale / 2000))
            if not ring.is_simple:
                raise GeometryError(f"chain {k} is self-intersecting")
            area = chain_area(ch)
            if (k == 0) != (area > 0):
                raise GeometryError(f"chain {k} has the wrong orientation")
        poly = domain_polygon(self)
        outer_poly = shapely.Polygon(poly.exterior)
        for k, h in enumerate(self.holes, start=1):
            hp = shapely.Polygon(sample_chain(h, scale / 2000))
            if not outer_poly.contains(hp):
                raise GeometryError(f"hole {k} is not strictly inside the outer boundary")
            for j, h2 in enumerate(self.holes[k:], start=k + 1):
                if hp.intersects(shapely.Polygon(sample_chain(h2, scale / 2000))):
                    raise GeometryError(f"holes {k} and {j} intersect")
        tol = 1e-9 * scale
        for p in self.dirichlet:
            if p.kind in ("arc", "edge"):
                c = int(p.params[0])
                if not 0 <= c < len(self.chains):
                    raise GeometryError(f"Dirichlet piece refers to missing chain {c}")
                if p.kind == "edge" and not 0 <= int(p.params[1]) < len(self.chains[c]):
                    raise GeometryError("Dirichlet edge index out of range")
                if p.kind == "arc":
                    L = chain_length(self.chains[c])
                    if not (0 <= p.params[1] < p.params[2] <= L + tol):
                        raise GeometryError("Dirichlet arc parameters out of range")
            elif p.kind == "disk":
                cx, cy, r = p.params
                if r <= 0:
                    raise GeometryError("Dirichlet disk radius must be positive")
                pt = shapely.Point(cx, cy)
                if not poly.contains(pt) or poly.exterior.distance(pt) <= r + tol or any(
                    i.distance(pt) <= r + tol for i in poly.interiors
                ):
                    raise GeometryError("Dirichlet disk is not contained in the domain")
            else:
                seg = shapely.LineString([p.params[:2], p.params[2:]])
                if seg.length == 0 or not poly.buffer(tol).covers(seg):
                    raise GeometryError("Dirichlet segment is not inside the domain closure")
        return self


# ----------------------------------------------------------------------------
# measurements
# ----------------------------------------------------------------------------


def bbox_diagonal(spec: DomainSpec) -> float:
    pts = np.vstack([sample_entry(e, max(e.length, 1e-300) / 64, include_end=True) for e in spec.outer])
    return float(np.linalg.norm(pts.max(0) - pts.min(0)))


def boundary_spacing(spec: DomainSpec, rel: float = 1e-4) -> float:
    return rel * bbox_diagonal(spec) / math.sqrt(2.0)


def domain_polygon(spec: DomainSpec, spacing: float | None = None) -> shapely.Polygon:
    """Polygonal approximation of the domain (outer minus holes)."""
    if spacing is None:
        spacing = boundary_spacing(spec, 2e-5)
    return shapely.Polygon(sample_chain(spec.outer, spacing), [sample_chain(h, spacing) for h in spec.holes])


def domain_area(spec: DomainSpec) -> float:
    """Exact area of the domain (shoelace plus circular segment terms)."""
    return float(sum(chain_area(c) for c in spec.chains))


def hull_diameter(points: np.ndarray) -> float:
    """Diameter of a point cloud by rotating calipers on its convex hull."""
    pts = np.unique(np.asarray(points, float), axis=0)
    if len(pts) < 2:
        return 0.0
    if len(pts) == 2:
        return float(np.linalg.norm(pts[1] - pts[0]))
    try:
        hull = ConvexHull(pts)
    except Exception:  # collinear input
        d = pts - pts[0]
        u = d[np.argmax(np.einsum("ij,ij->i", d, d))]
        t = d @ u
        return float(np.linalg.norm(u) * (t.max() - t.min()) / np.dot(u, u))
    P = pts[hull.vertices]
    n = len(P)

    def area2(a, b, c):
        return abs((P[b, 0] - P[a, 0]) * (P[c, 1] - P[a, 1]) - (P[b, 1] - P[a, 1]) * (P[c, 0] - P[a, 0]))

    best = 0.0
    j = 1
    for i in range(n):
        ni = (i + 1) % n
        while area2(i, ni, (j + 1) % n) > area2(i, ni, j):
            j = (j + 1) % n
        best = max(best, float(np.hypot(*(P[i] - P[j]))), float(np.hypot(*(P[ni] - P[j]))))
    return best


def boundary_samples(spec: DomainSpec, rel: float = 1e-4) -> np.ndarray:
    return np.vstack([sample_chain(spec.outer, boundary_spacing(spec, rel))])


def diameter(spec: DomainSpec, rel: float = 1e-4) -> float:
    return hull_diameter(boundary_samples(spec, rel))


def piece_points(spec: DomainSpec, piece: DirichletPiece, spacing: float) -> np.ndarray:
    """Sample points of a Dirichlet piece (disks sampled on their circle)."""
    if piece.kind == "disk":
        cx, cy, r = piece.params
        return sample_entry(Arc(cx, cy, r, 0.0, TWO_PI), spacing)
    if piece.kind == "segment":
        return sample_entry(Segment(*piece.params), spacing, include_end=True)
    return np.vstack([sample_entry(e, spacing, include_end=True) for e in piece_entries(spec, piece)])


def piece_entries(spec: DomainSpec, piece: DirichletPiece) -> list[Entry]:
    """Boundary entries covered by an ``arc`` or ``edge`` piece."""
    chain = spec.chains[int(piece.params[0])]
    if piece.kind == "edge":
        return [chain[int(piece.params[1])]]
    s0, s1 = piece.params[1], piece.params[2]
    out = []
    pos = 0.0
    for e in chain:
        a, b = max(s0 - pos, 0.0), min(s1 - pos, e.length)
        if b > a + 1e-14 * e.length:
            out.append(e.sub(a, b))
        pos += e.length
    return out


def dirichlet_points(spec: DomainSpec, rel: float = 1e-4) -> np.ndarray:
    sp = boundary_spacing(spec, rel)
    if not spec.dirichlet:
        return np.zeros((0, 2))
    return np.vstack([piece_points(spec, p, sp) for p in spec.dirichlet])


def dirichlet_diameter(spec: DomainSpec, pieces: Sequence[DirichletPiece] | None = None) -> float:
    """Diameter of the union of Dirichlet pieces; disk pieces enter exactly."""
    pieces = spec.dirichlet if pieces is None else pieces
    sp = boundary_spacing(spec)
    disks = np.array([p.params for p in pieces if p.kind == "disk"]).reshape(-1, 3)
    rest = [piece_points(spec, p, sp) for p in pieces if p.kind != "disk"]
    pts = np.vstack(rest) if rest else np.zeros((0, 2))
    best = hull_diameter(pts) if len(pts) else 0.0
    for i, (cx, cy, r) in enumerate(disks):
        best = max(best, 2 * r)
        for cx2, cy2, r2 in disks[i + 1 :]:
            best = max(best, math.hypot(cx - cx2, cy - cy2) + r + r2)
        if len(pts):
            best = max(best, float(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy).max()) + r)
    return best


def piece_diameter(spec: DomainSpec, piece: DirichletPiece) -> float:
    if piece.kind == "disk":
        return 2.0 * piece.params[2]
    if piece.kind == "segment":
        return Segment(*piece.params).length
    pts = piece_points(spec, piece, max(chain_length(piece_entries(spec, piece)), 1e-300) * 1e-4)
    return hull_diameter(pts)


# ----------------------------------------------------------------------------
# clipped areas (exact, via Green's theorem on split pieces)
# ----------------------------------------------------------------------------


def _split_against(entries: Sequence[Entry], cutters: Sequence[Entry]) -> list[Entry]:
    out = []
    for e in entries:
        params = []
        for c in cutters:
            params.extend(entry_intersections(e, c))
        out.extend(split_entry(e, params))
    return out


def _clip_area(spec: DomainSpec, region: Sequence[Entry], inside: Callable[[np.ndarray], bool]) -> float:
    """Area of (domain ∩ region); ``region`` is a closed CCW chain, ``inside`` its membership."""
    scale = bbox_diagonal(spec)
    eta = 1e-7 * scale
    poly = domain_polygon(spec)
    total = 0.0
    bnd = [e for ch in spec.chains for e in ch]
    for piece in _split_against(bnd, region):
        m = piece.points([piece.length / 2])[0]
        t = piece.tangents([piece.length / 2])[0]
        probe = m + eta * np.array([-t[1], t[0]])
        if inside(probe):
            total += piece.area_term()
    for piece in _split_against(region, bnd):
        m = piece.points([piece.length / 2])[0]
        pt = shapely.Point(*m)
        if poly.contains(pt) and poly.boundary.distance(pt) > 10 * eta:
            total += piece.area_term()
    return total


def quadrant_area(spec: DomainSpec) -> float:
    """Exact area of the domain inside the closed first quadrant."""
    pts = sample_chain(spec.outer, bbox_diagonal(spec) / 100)
    M = 4.0 * (np.abs(pts).max() + 1.0)
    box = polygon_chain([(0, 0), (M, 0), (M, M), (0, M)])
    return _clip_area(spec, box, lambda p: p[0] >= 0 and p[1] >= 0)


def disk_intersection_area(spec: DomainSpec, center: Sequence[float], radius: float) -> float:
    cx, cy = map(float, center)
    circ = circle_chain(cx, cy, radius)
    return _clip_area(spec, circ, lambda p: (p[0] - cx) ** 2 + (p[1] - cy) ** 2 <= radius**2)


# ----------------------------------------------------------------------------
# summary, thresholds and predicates
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GeometrySummary:
    diameter: float
    area: float
    projection_length: float
    quadrant_area: float
    R1: float
    R2: float
    omega_plus_area: float
    ball_center: tuple = (0.0, 0.0)
    miyamoto_placement: bool = False
    neumann_convex: bool | None = None
    dirichlet_connected: bool | None = None
    placement: tuple = (0.0, 0.0, 0.0)

    @property
    def d(self) -> float:
        return self.diameter

    def to_json(self) -> dict:
        return {
            "diameter": self.diameter,
            "area": self.area,
            "projection_length": self.projection_length,
            "quadrant_area": self.quadrant_area,
            "R1": self.R1,
            "R2": self.R2,
            "omega_plus_area": self.omega_plus_area,
            "ball_center": list(self.ball_center),
            "miyamoto_placement": self.miyamoto_placement,
            "neumann_convex": self.neumann_convex,
            "dirichlet_connected": self.dirichlet_connected,
            "placement": list(self.placement),
        }

    @classmethod
    def from_json(cls, d: dict) -> "GeometrySummary":
        d = dict(d)
        d["ball_center"] = tuple(d["ball_center"])
        d["placement"] = tuple(d["placement"])
        return cls(**d)


def miyamoto_position_ok(spec: DomainSpec, rel_tol: float = 1e-9) -> bool:
    """Domain in the closed upper half plane and D in the closed second quadrant."""
    scale = bbox_diagonal(spec)
    tol = rel_tol * scale
    pts = boundary_samples(spec, 1e-3)
    if pts[:, 1].min() < -tol:
        return False
    dp = dirichlet_points(spec, 1e-3)
    if len(dp) == 0:
        return False
    return bool(dp[:, 0].max() <= tol and dp[:, 1].min() >= -tol)


def summarize(
    spec: DomainSpec,
    placement: Sequence[float] = (0.0, 0.0, 0.0),
    *,
    miyamoto: bool = False,
    ball: Sequence[float] | None = None,
    checks: bool = False,
) -> GeometrySummary:
    """Closed-form geometric quantities of ``spec`` after a rigid motion.

    Parameters
    ----------
    placement : (theta, tx, ty)
        Rotation angle and translation applied before measuring.
    miyamoto : bool
        Require the projection/quadrant placement (domain in the upper half
        plane, D in the closed second quadrant); raise otherwise.
    ball : (cx, cy, R1), optional
        Explicit ball containing D.  By default R1 is the diameter of D and the
        ball is centred at the centre of D's bounding box.
    checks : bool
        Also run the Neumann convexity and D-connectedness predicates.
    """
    theta, tx, ty = map(float, placement)
    s = spec.transformed(theta, (tx, ty)) if (theta or tx or ty) else spec
    d = diameter(s)
    area = domain_area(s)
    pts = boundary_samples(s)
    ell = float(pts[:, 1].max() - pts[:, 1].min())
    ok = miyamoto_position_ok(s)
    if miyamoto and not ok:
        raise GeometryError("D is not in the closed second quadrant (or the domain leaves the upper half plane)")
    A = quadrant_area(s)
    if ball is not None:
        cx, cy, R1 = map(float, ball)
    elif s.dirichlet:
        dp = dirichlet_points(s)
        cx, cy = (dp.max(0) + dp.min(0)) / 2
        R1 = dirichlet_diameter(s)
    else:
        cx = cy = R1 = 0.0
    if R1 > 0:
        plus = area - disk_intersection_area(s, (cx, cy), R1)
    else:
        plus = area
    R2 = math.sqrt(R1 * R1 + plus / math.pi)
    nc = conn = None
    if checks:
        nc = neumann_convexity_check(s).passed
        conn = connectedness_check(s).dirichlet_connected
    return GeometrySummary(
        float(d), float(area), ell, float(A), float(R1), float(R2), float(plus),
        (float(cx), float(cy)), bool(ok), nc, conn, (theta, tx, ty),
    )


def epsilon_threshold(summary: GeometrySummary, j0: float = J0_ZERO) -> float:
    """Largest admissible Dirichlet diameter sqrt(|Ω|/π) exp(-(4π/j0²) d²/|Ω|)."""
    d, area = summary.diameter, summary.area
    if d <= 0 or area <= 0:
        raise GeometryError("diameter and area must be positive")
    return math.sqrt(area / math.pi) * math.exp(-(4 * math.pi / j0**2) * d * d / area)


@dataclass(frozen=True)
class ConvexityVerdict:
    passed: bool
    worst: float
    witness_boundary: tuple | None
    witness_interior: tuple | None


def _neumann_entries(spec: DomainSpec) -> list[Entry]:
    """Boundary entries that carry the Neumann condition (D arcs/edges cut out)."""
    out = []
    for ci, chain in enumerate(spec.chains):
        pieces = [p for p in spec.dirichlet if p.kind in ("arc", "edge") and int(p.params[0]) == ci]
        pos = 0.0
        for ei, e in enumerate(chain):
            blocked = []
            for p in pieces:
                if p.kind == "edge":
                    if int(p.params[1]) == ei:
                        blocked.append((0.0, e.length))
                else:
                    a, b = max(p.params[1] - pos, 0.0), min(p.params[2] - pos, e.length)
                    if b > a:
                        blocked.append((a, b))
            pos += e.length
            free = [(0.0, e.length)]
            for a, b in blocked:
                nxt = []
                for u, v in free:
                    if b <= u or a >= v:
                        nxt.append((u, v))
                        continue
                    if a > u:
                        nxt.append((u, a))
                    if b < v:
                        nxt.append((b, v))
                free = nxt
            out.extend(e.sub(u, v) for u, v in free if v - u > 1e-12 * e.length)
    return out


def interior_samples(spec: DomainSpec, rel: float = 1e-2) -> np.ndarray:
    """Grid points of Ω∖D at spacing ``rel``·d."""
    poly = domain_polygon(spec, boundary_spacing(spec, 1e-3))
    d = diameter(spec, 1e-3)
    h = rel * d
    x0, y0, x1, y1 = poly.bounds
    xs = np.arange(x0 + h / 2, x1, h)
    ys = np.arange(y0 + h / 2, y1, h)
    X, Y = np.meshgrid(xs, ys)
    P = np.column_stack([X.ravel(), Y.ravel()])
    keep = shapely.contains_xy(poly, P[:, 0], P[:, 1])
    for p in spec.dirichlet:
        if p.kind == "disk":
            cx, cy, r = p.params
            keep &= (P[:, 0] - cx) ** 2 + (P[:, 1] - cy) ** 2 > r * r
    return P[keep]


def neumann_convexity_check(
    spec: DomainSpec, tol: float = 1e-9, boundary_rel: float = 1e-4, interior_rel: float = 1e-2
) -> ConvexityVerdict:
    """Check (y - x)·ν(y) >= 0 for sampled Neumann points y and interior points x.

    Values are divided by the diameter; the verdict passes iff the most
    negative value is >= -tol.  Corners (entry endpoints) are skipped since
    the normal is undefined there.
    """
    d = diameter(spec, 1e-3)
    X = interior_samples(spec, interior_rel)
    if len(X) >= 3:
        try:
            X = X[ConvexHull(X).vertices]
        except Exception:
            pass
    spacing = boundary_rel * d
    worst = math.inf
    wy = wx = None
    for e in _neumann_entries(spec):
        n = max(2, int(math.ceil(e.length / spacing)))
        s = (np.arange(n) + 0.5) * (e.length / n)
        Y = e.points(s)
        T = e.tangents(s)
        N = np.column_stack([T[:, 1], -T[:, 0]])
        if len(X) == 0:
            continue
        # min over x of (y - x)·ν = y·ν - max_x x·ν
        XN = N @ X.T
        jmax = XN.argmax(axis=1)
        vals = (np.einsum("ij,ij->i", Y, N) - XN[np.arange(len(Y)), jmax]) / d
        k = int(np.argmin(vals))
        if vals[k] < worst:
            worst = float(vals[k])
            wy = tuple(map(float, Y[k]))
            wx = tuple(map(float, X[jmax[k]]))
    if worst is math.inf:
        worst = 0.0
    return ConvexityVerdict(worst >= -tol, worst, wy, wx)


@dataclass(frozen=True)
class ConnectivityVerdict:
    dirichlet_components: int
    dirichlet_connected: bool
    complement_components: int | None = None


def _piece_geometry(spec: DomainSpec, piece: DirichletPiece, spacing: float):
    if piece.kind == "disk":
        cx, cy, r = piece.params
        return ("disk", (cx, cy, r))
    return ("line", shapely.LineString(piece_points(spec, piece, spacing)))


def _piece_distance(a, b) -> float:
    ka, ga = a
    kb, gb = b
    if ka == "disk" and kb == "disk":
        return math.hypot(ga[0] - gb[0], ga[1] - gb[1]) - ga[2] - gb[2]
    if ka == "disk":
        return gb.distance(shapely.Point(ga[0], ga[1])) - ga[2]
    if kb == "disk":
        return ga.distance(shapely.Point(gb[0], gb[1])) - gb[2]
    return ga.distance(gb)


def dirichlet_components(spec: DomainSpec) -> list[list[int]]:
    """Connected groups of Dirichlet pieces (pairwise intersection graph)."""
    n = len(spec.dirichlet)
    if n == 0:
        return []
    scale = bbox_diagonal(spec)
    geoms = [_piece_geometry(spec, p, 1e-4 * scale) for p in spec.dirichlet]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if _piece_distance(geoms[i], geoms[j]) <= 1e-9 * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def connectedness_check(spec: DomainSpec, mesh=None) -> ConnectivityVerdict:
    """Connectivity of D; that of Ω∖D is read off ``mesh`` when given."""
    comps = dirichlet_components(spec)
    cc = None
    if mesh is not None:
        from .meshing import connectivity

        cc = connectivity(mesh)
    return ConnectivityVerdict(len(comps), len(comps) <= 1, cc)
