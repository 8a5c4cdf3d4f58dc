"""Conforming triangulations of Ω∖int(D) with boundary-condition tags.

Meshes are built by Triangle (constrained Delaunay with a 20° minimum
angle) from a boundary discretization that follows a local size field.
Specs carrying a :class:`~hotspots.geometry.Symmetry` hint are meshed on
the fundamental domain and unfolded, so the discrete problem keeps the
exact symmetry of the continuum one.  :func:`refine` performs red
refinement; old vertex indices are preserved, so levels are nested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
import shapely
import triangle as tr
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .geometry import (
    Arc,
    DomainSpec,
    GeometryError,
    Segment,
    bbox_diagonal,
    diameter,
    piece_diameter,
    piece_entries,
    piece_points,
    split_entry,
)

NEUMANN = 0
DIRICHLET = 1
MIRROR = 2
TAG_NAMES = {NEUMANN: "NEUMANN", DIRICHLET: "DIRICHLET", MIRROR: "MIRROR"}

MIN_ANGLE = 20.0
MAX_REFINE_PASSES = 12


class MeshError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Mesh:
    """Triangulation of Ω∖int(D).

    ``boundary_curves[i]`` is the index into ``curves`` (rows ``cx, cy, r``)
    of the circle that boundary edge ``i`` approximates, or -1 if straight.
    ``interior_edges`` are constrained Dirichlet edges inside the domain.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    boundary_tags: np.ndarray
    boundary_curves: np.ndarray
    curves: np.ndarray
    interior_edges: np.ndarray
    h: float
    level: int
    d: float
    spec_key: str = ""
    spec: DomainSpec | None = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def dirichlet_mask(self) -> np.ndarray:
        mask = np.zeros(len(self.vertices), bool)
        mask[self.boundary_edges[self.boundary_tags == DIRICHLET].ravel()] = True
        mask[self.interior_edges.ravel()] = True
        return mask

    @property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(len(self.vertices), bool)
        mask[self.boundary_edges.ravel()] = True
        return mask

    def areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        u = p[:, 1] - p[:, 0]
        v = p[:, 2] - p[:, 0]
        return 0.5 * (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])

    def angles(self) -> np.ndarray:
        """Interior angles in degrees, shape (T, 3)."""
        p = self.vertices[self.triangles]
        out = np.empty((len(p), 3))
        for k in range(3):
            a = p[:, (k + 1) % 3] - p[:, k]
            b = p[:, (k + 2) % 3] - p[:, k]
            cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
            out[:, k] = np.degrees(np.arctan2(np.abs(cross), np.einsum("ij,ij->i", a, b)))
        return out

    def min_angle(self) -> float:
        return float(self.angles().min()) if len(self.triangles) else 0.0

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Unique undirected edges and, per triangle, the index of edge k (opposite vertex k)."""
        t = self.triangles
        e = np.concatenate([t[:, [1, 2]], t[:, [2, 0]], t[:, [0, 1]]])
        e.sort(axis=1)
        uniq, inv = np.unique(e, axis=0, return_inverse=True)
        return uniq, inv.reshape(3, -1).T

    def boundary_distance(self, points: np.ndarray) -> np.ndarray:
        """Distance from ``points`` to the boundary edges and Dirichlet edges."""
        segs = [self.vertices[self.boundary_edges], self.vertices[self.interior_edges]]
        lines = shapely.multilinestrings(np.concatenate(segs))
        pts = np.asarray(points, float).reshape(-1, 2)
        return shapely.distance(lines, shapely.points(pts))


# ----------------------------------------------------------------------------
# size field
# ----------------------------------------------------------------------------


def _piece_distance_fn(spec: DomainSpec, piece) -> Callable[[np.ndarray], np.ndarray]:
    if piece.kind == "disk":
        cx, cy, r = piece.params
        return lambda P: np.maximum(np.hypot(P[:, 0] - cx, P[:, 1] - cy) - r, 0.0)
    # nearest sample at spacing R/256 overestimates the distance by at most R/512
    tree = cKDTree(piece_points(spec, piece, piece_diameter(spec, piece) / 256))
    return lambda P: tree.query(P)[0]


def default_grading(spec: DomainSpec, h: float = math.inf) -> Callable[[np.ndarray], np.ndarray]:
    """Local size R/8 + dist/16 up to distance 2R of each Dirichlet piece of diameter R, then growth 0.3.

    Pieces with R/8 >= h never bind below ``h`` and are skipped.
    """
    rules = []
    for p in spec.dirichlet:
        R = piece_diameter(spec, p)
        if R / 8 < h:
            rules.append((R, _piece_distance_fn(spec, p)))

    def size(P: np.ndarray) -> np.ndarray:
        out = np.full(len(P), np.inf)
        for R, dist in rules:
            t = dist(P)
            g = np.where(t <= 2 * R, R / 8 + t / 16, R / 4 + 0.3 * (t - 2 * R))
            out = np.minimum(out, g)
        return out

    return size


def size_field(spec: DomainSpec, h: float, grading=None) -> Callable[[np.ndarray], np.ndarray]:
    """Local target edge length min(h, grading), clamped to at least h/64."""
    if grading is False:
        return lambda P: np.full(len(P), h)
    g = default_grading(spec, h) if grading is None else grading
    return lambda P: np.clip(g(np.asarray(P, float)), h / 64, h)


# ----------------------------------------------------------------------------
# boundary discretization
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class _Piece:
    entry: Segment | Arc
    tag: int
    constrained: bool = False


def _dirichlet_cuts(spec: DomainSpec, ci: int, chain) -> list[list[float]]:
    """Per-entry arclength cuts induced by Dirichlet arcs on chain ``ci``."""
    cuts: list[list[float]] = [[] for _ in chain]
    pos = 0.0
    starts = []
    for e in chain:
        starts.append(pos)
        pos += e.length
    for p in spec.dirichlet:
        if p.kind != "arc" or int(p.params[0]) != ci:
            continue
        for s in p.params[1:]:
            for k, e in enumerate(chain):
                if starts[k] <= s <= starts[k] + e.length:
                    cuts[k].append(s - starts[k])
    return cuts


def _is_dirichlet(spec: DomainSpec, ci: int, ei: int, mid_s: float) -> bool:
    for p in spec.dirichlet:
        if p.kind == "edge" and int(p.params[0]) == ci and int(p.params[1]) == ei:
            return True
        if p.kind == "arc" and int(p.params[0]) == ci and p.params[1] <= mid_s <= p.params[2]:
            return True
    return False


def _boundary_pieces(spec: DomainSpec) -> tuple[list[list[_Piece]], list[_Piece]]:
    """Closed loops of tagged pieces plus the constrained interior pieces."""
    scale = bbox_diagonal(spec)
    seg_ends = [np.array(p.params[:2]) for p in spec.dirichlet if p.kind == "segment"]
    seg_ends += [np.array(p.params[2:]) for p in spec.dirichlet if p.kind == "segment"]
    loops = []
    for ci, chain in enumerate(spec.chains):
        cuts = _dirichlet_cuts(spec, ci, chain)
        pos = 0.0
        loop = []
        for ei, e in enumerate(chain):
            params = list(cuts[ei])
            # T-junctions where a Dirichlet segment ends on the boundary
            if isinstance(e, Segment):
                u = e.end - e.start
                for q in seg_ends:
                    t = float(np.dot(q - e.start, u) / np.dot(u, u))
                    foot = e.start + t * u
                    if 0 < t < 1 and np.linalg.norm(q - foot) <= 1e-12 * scale:
                        params.append(t * e.length)
            off = 0.0
            for sub in split_entry(e, params):
                if e.mirror:
                    tag = MIRROR
                else:
                    tag = DIRICHLET if _is_dirichlet(spec, ci, ei, pos + off + sub.length / 2) else NEUMANN
                loop.append(_Piece(sub, tag))
                off += sub.length
            pos += e.length
        loops.append(loop)
    constrained = []
    for p in spec.dirichlet:
        if p.kind == "disk":
            cx, cy, r = p.params
            loops.append([_Piece(Arc(cx, cy, r, 0.0, -2 * math.pi), DIRICHLET)])
        elif p.kind == "segment":
            constrained.append(_Piece(Segment(*p.params), DIRICHLET, True))
    return loops, constrained


def _discretize(e, size: Callable, min_n: int = 1) -> np.ndarray:
    """Arclength knots on ``e`` with spacing following ``size``."""
    L = e.length
    s = np.linspace(0.0, L, 257)
    smin = float(size(e.points(s)).min())
    n0 = int(min(max(256, math.ceil(4 * L / smin)), 400_000))
    s = np.linspace(0.0, L, n0 + 1)
    f = 1.0 / size(e.points(s))
    F = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(s))])
    n = max(int(math.ceil(F[-1] - 1e-9)), min_n)
    knots = np.interp(np.linspace(0.0, F[-1], n + 1), F, s)
    knots[0], knots[-1] = 0.0, L
    return knots


def _pslg(loops, constrained, size, spec: DomainSpec):
    """Vertices, segments, markers and hole points for Triangle."""
    pts: list[np.ndarray] = []
    segs: list[tuple[int, int]] = []
    markers: list[int] = []
    records: list[_Piece] = []

    def add_points(P):
        base = sum(len(p) for p in pts)
        pts.append(P)
        return base

    for piece in [p for loop in loops for p in loop] + constrained:
        e = piece.entry
        min_n = 1
        if isinstance(e, Arc):
            min_n = max(1, int(math.ceil(abs(e.sweep) / (math.pi / 2))))
        knots = _discretize(e, size, min_n)
        if isinstance(e, Arc) and piece.tag == DIRICHLET and abs(abs(e.sweep) - 2 * math.pi) < 1e-12 and len(knots) - 1 < 8:
            raise MeshError(f"h too large to resolve a Dirichlet disk of radius {e.r:g} (fewer than 8 segments)")
        P = e.points(knots)
        P[0], P[-1] = e.start, e.end
        base = add_points(P)
        rec = len(records)
        records.append(piece)
        for k in range(len(P) - 1):
            segs.append((base + k, base + k + 1))
            markers.append(rec + 2)
    V = np.vstack(pts)
    scale = bbox_diagonal(spec)
    # merge coincident points (shared entry endpoints)
    tree = cKDTree(V)
    parent = np.arange(len(V))
    for i, j in sorted(tree.query_pairs(1e-11 * scale)):
        a, b = parent[i], parent[j]
        while parent[a] != a:
            a = parent[a]
        while parent[b] != b:
            b = parent[b]
        if a != b:
            parent[max(a, b)] = min(a, b)
    for i in range(len(V)):
        r = i
        while parent[r] != r:
            r = parent[r]
        parent[i] = r
    keep, new_index = np.unique(parent, return_inverse=True)
    V = V[keep]
    S = new_index[np.array(segs)]
    M = np.array(markers)
    ok = S[:, 0] != S[:, 1]
    holes = []
    for p in spec.dirichlet:
        if p.kind == "disk":
            holes.append(p.params[:2])
    for hch in spec.holes:
        from .geometry import sample_chain

        poly = shapely.Polygon(sample_chain(hch, scale / 2000))
        rp = poly.representative_point()
        holes.append((rp.x, rp.y))
    return V, S[ok], M[ok], np.array(holes, float).reshape(-1, 2), records


def _triangle_area(s: np.ndarray) -> np.ndarray:
    return math.sqrt(3.0) / 4.0 * s * s


def _mesh_region(spec: DomainSpec, size: Callable, h: float):
    loops, constrained = _boundary_pieces(spec)
    V, S, M, H, records = _pslg(loops, constrained, size, spec)
    data = {"vertices": V, "segments": S, "segment_markers": M.reshape(-1, 1)}
    if len(H):
        data["holes"] = H
    amax = float(_triangle_area(np.array(h)))
    t = tr.triangulate(data, f"pq{MIN_ANGLE:g}a{amax:.17g}Q")
    for _ in range(MAX_REFINE_PASSES):
        P = t["vertices"][t["triangles"]]
        c = P.mean(axis=1)
        u = P[:, 1] - P[:, 0]
        v = P[:, 2] - P[:, 0]
        area = 0.5 * np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
        target = _triangle_area(size(c))
        if np.all(area <= 1.5 * target):
            break
        t = dict(t)
        t["triangle_max_area"] = target
        t = tr.triangulate(t, f"rpq{MIN_ANGLE:g}aQ")
    return t, records


def _snap(V: np.ndarray, segs: np.ndarray, markers: np.ndarray, records) -> None:
    """Project vertices of arc segments radially onto their circle (in place)."""
    for (a, b), m in zip(segs, markers):
        e = records[m - 2].entry
        if isinstance(e, Arc):
            for i in (a, b):
                d = V[i] - (e.cx, e.cy)
                V[i] = (e.cx, e.cy) + e.r * d / np.hypot(*d)


def _curve_table(records) -> tuple[np.ndarray, dict]:
    circles: list[tuple] = []
    index = {}
    for k, r in enumerate(records):
        e = r.entry
        if isinstance(e, Arc):
            key = (e.cx, e.cy, e.r)
            if key not in index:
                index[key] = len(circles)
                circles.append(key)
    return np.array(circles, float).reshape(-1, 3), index


def _from_triangle(t, records):
    V = np.array(t["vertices"], float)
    T = np.array(t["triangles"], int)
    S = np.array(t["segments"], int)
    M = np.array(t["segment_markers"], int).ravel()
    valid = M >= 2
    S, M = S[valid], M[valid]
    _snap(V, S, M, records)
    curves, cindex = _curve_table(records)
    tags = np.array([records[m - 2].tag for m in M], int)
    cons = np.array([records[m - 2].constrained for m in M], bool)
    cid = np.array(
        [cindex[(records[m - 2].entry.cx, records[m - 2].entry.cy, records[m - 2].entry.r)] if isinstance(records[m - 2].entry, Arc) else -1 for m in M],
        int,
    )
    # orient triangles counterclockwise
    P = V[T]
    sa = (P[:, 1, 0] - P[:, 0, 0]) * (P[:, 2, 1] - P[:, 0, 1]) - (P[:, 1, 1] - P[:, 0, 1]) * (P[:, 2, 0] - P[:, 0, 0])
    T[sa < 0] = T[sa < 0][:, [0, 2, 1]]
    return V, T, S[~cons], tags[~cons], cid[~cons], S[cons], curves


def _unfold(spec: DomainSpec, V, T, B, tags, cid, C, curves):
    """Images of a fundamental-domain mesh under the symmetry group, glued."""
    sym = spec.symmetry
    c = np.array(sym.center, float)
    Vs, Ts, Bs, tgs, cids, Cs = [], [], [], [], [], []
    curve_rows: list[np.ndarray] = []
    off = 0
    for m in sym.matrices():
        W = (V - c) @ m.T + c
        TT = T + off
        if np.linalg.det(m) < 0:
            TT = TT[:, [0, 2, 1]]
        keep = tags != MIRROR
        Vs.append(W)
        Ts.append(TT)
        Bs.append(B[keep] + off)
        tgs.append(tags[keep])
        cc = cid[keep].copy()
        if len(curves):
            moved = curves.copy()
            moved[:, :2] = (curves[:, :2] - c) @ m.T + c
            cc[cc >= 0] += len(curve_rows) * len(curves)
            curve_rows.append(moved)
        cids.append(cc)
        Cs.append(C + off)
        off += len(V)
    V = np.vstack(Vs)
    scale = bbox_diagonal(spec)
    tree = cKDTree(V)
    rep = np.arange(len(V))
    for i, j in sorted(tree.query_pairs(1e-9 * scale)):
        ri, rj = rep[i], rep[j]
        while rep[ri] != ri:
            ri = rep[ri]
        while rep[rj] != rj:
            rj = rep[rj]
        if ri != rj:
            rep[max(ri, rj)] = min(ri, rj)
    for i in range(len(V)):
        r = i
        while rep[r] != r:
            r = rep[r]
        rep[i] = r
    keep, new = np.unique(rep, return_inverse=True)
    V = V[keep]
    T = new[np.vstack(Ts)]
    B = new[np.vstack(Bs)]
    C = new[np.vstack(Cs)] if sum(len(x) for x in Cs) else np.zeros((0, 2), int)
    tags = np.concatenate(tgs)
    cid = np.concatenate(cids)
    curves_all = np.vstack(curve_rows) if curve_rows else np.zeros((0, 3))
    # deduplicate circles and edges shared between images
    if len(curves_all):
        rounded = np.round(curves_all / scale, 9)
        _, first, cinv = np.unique(rounded, axis=0, return_index=True, return_inverse=True)
        order = np.argsort(first)
        remap = np.empty(len(order), int)
        remap[order] = np.arange(len(order))
        curves_all = curves_all[first[order]]
        cid = np.where(cid >= 0, remap[cinv.ravel()[np.maximum(cid, 0)]], -1)
    key = np.sort(B, axis=1)
    _, first = np.unique(key, axis=0, return_index=True)
    first.sort()
    B, tags, cid = B[first], tags[first], cid[first]
    if len(C):
        _, firstc = np.unique(np.sort(C, axis=1), axis=0, return_index=True)
        firstc.sort()
        C = C[firstc]
    return V, T, B, tags, cid, C, curves_all


def _spec_key(spec: DomainSpec) -> str:
    import hashlib

    return hashlib.sha256(spec.dumps().encode()).hexdigest()[:16]


def triangulate(spec: DomainSpec, h: float, grading=None, use_symmetry: bool = True) -> Mesh:
    """Mesh Ω∖int(D) with target edge length ``h``.

    Parameters
    ----------
    grading : None, False or callable
        ``None`` applies :func:`default_grading`; ``False`` gives a uniform
        size ``h``; a callable maps an (n, 2) array of points to local sizes.
        Sizes are clamped to ``[h/64, h]``.
    use_symmetry : bool
        Mesh the fundamental domain of ``spec.symmetry`` and unfold it.
    """
    if not h > 0:
        raise MeshError("h must be positive")
    size = size_field(spec, h, grading)
    region = spec
    if use_symmetry and spec.symmetry is not None:
        region = spec.symmetry.fundamental
    try:
        t, records = _mesh_region(region, size, h)
    except MeshError:
        raise
    except Exception as exc:  # Triangle fails on self-intersecting input
        raise MeshError(f"triangulation failed: {exc}") from exc
    if "triangles" not in t or len(t["triangles"]) == 0:
        raise MeshError("triangulation produced no triangles (self-intersecting or empty input)")
    V, T, B, tags, cid, C, curves = _from_triangle(t, records)
    if region is not spec:
        V, T, B, tags, cid, C, curves = _unfold(spec, V, T, B, tags, cid, C, curves)
    if np.any(tags == MIRROR):
        raise MeshError("mirror edges left on the boundary after unfolding")
    mesh = Mesh(V, T, B, tags, cid, curves, C.reshape(-1, 2), float(h), 0, diameter(spec, 1e-3), _spec_key(spec), spec)
    check(mesh)
    return mesh


# ----------------------------------------------------------------------------
# refinement and checks
# ----------------------------------------------------------------------------


def refine(mesh: Mesh) -> Mesh:
    """Red refinement: every triangle split into 4; new boundary vertices snapped to their circles."""
    V, T = mesh.vertices, mesh.triangles
    edges, tedge = mesh.edges()
    nv = len(V)
    mid = 0.5 * (V[edges[:, 0]] + V[edges[:, 1]])
    # snap midpoints of curved boundary edges
    bkey = np.sort(mesh.boundary_edges, axis=1)
    eidx = {tuple(e): i for i, e in enumerate(map(tuple, edges))}
    bidx = np.array([eidx[tuple(e)] for e in map(tuple, bkey)], int).reshape(-1)
    for k in np.nonzero(mesh.boundary_curves >= 0)[0]:
        cx, cy, r = mesh.curves[mesh.boundary_curves[k]]
        p = mid[bidx[k]] - (cx, cy)
        mid[bidx[k]] = (cx, cy) + r * p / np.hypot(*p)
    newV = np.vstack([V, mid])
    m = tedge + nv  # m[:, k] is the midpoint opposite vertex k
    a, b, c = T[:, 0], T[:, 1], T[:, 2]
    ma, mb, mc = m[:, 0], m[:, 1], m[:, 2]
    newT = np.vstack(
        [
            np.column_stack([a, mc, mb]),
            np.column_stack([mc, b, ma]),
            np.column_stack([mb, ma, c]),
            np.column_stack([ma, mb, mc]),
        ]
    )
    Bm = bidx + nv
    newB = np.vstack([np.column_stack([mesh.boundary_edges[:, 0], Bm]), np.column_stack([Bm, mesh.boundary_edges[:, 1]])])
    newtags = np.concatenate([mesh.boundary_tags, mesh.boundary_tags])
    newcid = np.concatenate([mesh.boundary_curves, mesh.boundary_curves])
    if len(mesh.interior_edges):
        ckey = np.sort(mesh.interior_edges, axis=1)
        cidx = np.array([eidx[tuple(e)] for e in map(tuple, ckey)], int) + nv
        newC = np.vstack([np.column_stack([mesh.interior_edges[:, 0], cidx]), np.column_stack([cidx, mesh.interior_edges[:, 1]])])
    else:
        newC = mesh.interior_edges
    out = replace(
        mesh,
        vertices=newV,
        triangles=newT,
        boundary_edges=newB,
        boundary_tags=newtags,
        boundary_curves=newcid,
        interior_edges=newC,
        h=mesh.h / 2,
        level=mesh.level + 1,
    )
    return out


def levels(mesh: Mesh, n: int) -> list[Mesh]:
    """``mesh`` followed by ``n - 1`` successive red refinements."""
    out = [mesh]
    for _ in range(n - 1):
        out.append(refine(out[-1]))
    return out


def check(mesh: Mesh) -> None:
    """Raise :class:`MeshError` unless the mesh is conforming with positive areas."""
    if len(mesh.triangles) == 0:
        return
    if np.any(mesh.areas() <= 0):
        raise MeshError("mesh has non-positive triangle areas")
    edges, tedge = mesh.edges()
    count = np.bincount(tedge.ravel(), minlength=len(edges))
    if np.any(count > 2):
        raise MeshError("non-conforming mesh: edge shared by more than two triangles")
    boundary = {tuple(e) for e in map(tuple, edges[count == 1])}
    tagged = {tuple(sorted(e)) for e in map(tuple, mesh.boundary_edges)}
    if boundary != tagged:
        raise MeshError("boundary edges and tagged edges disagree")
    eidx = {tuple(e): i for i, e in enumerate(map(tuple, edges))}
    for e in map(tuple, np.sort(mesh.interior_edges, axis=1)):
        if count[eidx[e]] != 2:
            raise MeshError("constrained Dirichlet edge is not interior")


def connectivity(mesh: Mesh) -> int:
    """Triangle-adjacency components; constrained Dirichlet edges separate triangles."""
    nt = len(mesh.triangles)
    if nt == 0:
        return 0
    edges, tedge = mesh.edges()
    cut = np.zeros(len(edges), bool)
    if len(mesh.interior_edges):
        eidx = {tuple(e): i for i, e in enumerate(map(tuple, edges))}
        for e in map(tuple, np.sort(mesh.interior_edges, axis=1)):
            cut[eidx[e]] = True
    owner = np.full((len(edges), 2), -1)
    flat = tedge.ravel()
    tri = np.repeat(np.arange(nt), 3)
    order = np.argsort(flat, kind="stable")
    fs, ts = flat[order], tri[order]
    first = np.ones(len(fs), bool)
    first[1:] = fs[1:] != fs[:-1]
    owner[fs[first], 0] = ts[first]
    owner[fs[~first], 1] = ts[~first]
    ok = (owner[:, 1] >= 0) & ~cut
    A = coo_matrix((np.ones(ok.sum()), (owner[ok, 0], owner[ok, 1])), shape=(nt, nt))
    n, _ = connected_components(A, directed=False)
    return int(n)


def dirichlet_geometry_error(mesh: Mesh) -> float:
    """Max distance from vertices on Dirichlet edges to the exact Dirichlet set, relative to d."""
    spec = mesh.spec
    if spec is None:
        raise MeshError("mesh carries no spec")
    idx = np.nonzero(mesh.dirichlet_mask)[0]
    if len(idx) == 0:
        return 0.0
    P = mesh.vertices[idx]
    best = np.full(len(P), np.inf)
    for p in spec.dirichlet:
        if p.kind == "disk":
            cx, cy, r = p.params
            best = np.minimum(best, np.abs(np.hypot(P[:, 0] - cx, P[:, 1] - cy) - r))
            continue
        if p.kind == "segment":
            ents = [Segment(*p.params)]
        else:
            ents = piece_entries(spec, p)
        for e in ents:
            if isinstance(e, Arc):
                th = np.arctan2(P[:, 1] - e.cy, P[:, 0] - e.cx)
                on = np.array([_arc_contains(e, t) for t in th])
                dd = np.where(on, np.abs(np.hypot(P[:, 0] - e.cx, P[:, 1] - e.cy) - e.r), np.inf)
                dd = np.minimum(dd, np.minimum(np.hypot(*(P - e.start).T), np.hypot(*(P - e.end).T)))
            else:
                u = e.end - e.start
                t = np.clip(((P - e.start) @ u) / (u @ u), 0, 1)
                dd = np.hypot(*(P - (e.start + t[:, None] * u)).T)
            best = np.minimum(best, dd)
    return float(best.max() / mesh.d)


def _arc_contains(e: Arc, theta: float) -> bool:
    sg = math.copysign(1.0, e.sweep)
    rel = (sg * (theta - e.t1)) % (2 * math.pi)
    return rel <= abs(e.sweep) + 1e-9 or rel >= 2 * math.pi - 1e-9


# ----------------------------------------------------------------------------
# export
# ----------------------------------------------------------------------------


def write_off(mesh: Mesh, path) -> None:
    """OFF file (z = 0) plus a sidecar ``<path>.tags`` listing tagged edges."""
    with open(path, "w") as fh:
        fh.write("OFF\n")
        fh.write(f"{len(mesh.vertices)} {len(mesh.triangles)} 0\n")
        for x, y in mesh.vertices:
            fh.write(f"{x:.17g} {y:.17g} 0\n")
        for a, b, c in mesh.triangles:
            fh.write(f"3 {a} {b} {c}\n")
    with open(f"{path}.tags", "w") as fh:
        fh.write("# edge_index v0 v1 tag\n")
        k = 0
        for (a, b), t in zip(mesh.boundary_edges, mesh.boundary_tags):
            fh.write(f"{k} {a} {b} {TAG_NAMES[int(t)]}\n")
            k += 1
        for a, b in mesh.interior_edges:
            fh.write(f"{k} {a} {b} DIRICHLET_INTERIOR\n")
            k += 1


def read_off(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path) as fh:
        lines = [ln for ln in fh.read().split("\n") if ln and not ln.startswith("#")]
    if lines[0].strip() != "OFF":
        raise MeshError("not an OFF file")
    nv, nt, _ = map(int, lines[1].split())
    V = np.array([list(map(float, ln.split()[:2])) for ln in lines[2 : 2 + nv]])
    T = np.array([list(map(int, ln.split()[1:4])) for ln in lines[2 + nv : 2 + nv + nt]])
    return V, T
