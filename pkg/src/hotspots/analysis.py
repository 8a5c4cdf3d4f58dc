"""Post-processing of eigenfields.

Gradient recovery, interior critical points across refinement levels,
extremum classification, nodal sets, symmetry checks, the Bessel
comparison field and the nodal-domain diameter report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .bessel import J0_FIRST_ZERO, bessel
from .fem import EigenSolution, solve_levels
from .geometry import DomainSpec, hull_diameter
from .meshing import Mesh

NO_CRITICAL = "NO_INTERIOR_CRITICAL_POINTS"
FOUND = "CRITICAL_POINTS_FOUND"
INCONCLUSIVE = "INCONCLUSIVE"

SADDLE = "saddle-like"
LOCAL_MAX = "local-max"
LOCAL_MIN = "local-min"
UNRESOLVED = "unresolved"

ZERO_BAND = 1e-10


# ----------------------------------------------------------------------------
# mesh adjacency helpers
# ----------------------------------------------------------------------------


def vertex_adjacency(mesh: Mesh) -> csr_matrix:
    edges, _ = mesh.edges()
    n = mesh.n_vertices
    A = coo_matrix((np.ones(2 * len(edges)), (np.r_[edges[:, 0], edges[:, 1]], np.r_[edges[:, 1], edges[:, 0]])), shape=(n, n))
    return A.tocsr()


def ring(A: csr_matrix, v: int, k: int) -> np.ndarray:
    """Vertices within ``k`` edge hops of ``v`` (excluding ``v``)."""
    seen = {v}
    frontier = [v]
    for _ in range(k):
        nxt = []
        for u in frontier:
            for w in A.indices[A.indptr[u] : A.indptr[u + 1]]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    seen.discard(v)
    return np.array(sorted(seen), int)


def _neighbors(A: csr_matrix, v: int) -> np.ndarray:
    return A.indices[A.indptr[v] : A.indptr[v + 1]]


def local_edge_length(mesh: Mesh, A: csr_matrix | None = None) -> np.ndarray:
    """Longest edge incident to each vertex."""
    edges, _ = mesh.edges()
    L = np.hypot(*(mesh.vertices[edges[:, 0]] - mesh.vertices[edges[:, 1]]).T)
    out = np.zeros(mesh.n_vertices)
    np.maximum.at(out, edges[:, 0], L)
    np.maximum.at(out, edges[:, 1], L)
    return out


# ----------------------------------------------------------------------------
# gradient recovery
# ----------------------------------------------------------------------------


def element_gradient_field(mesh: Mesh, u: np.ndarray) -> np.ndarray:
    P = mesh.vertices[mesh.triangles]
    U = np.asarray(u, float)[mesh.triangles]
    area2 = (P[:, 1, 0] - P[:, 0, 0]) * (P[:, 2, 1] - P[:, 0, 1]) - (P[:, 1, 1] - P[:, 0, 1]) * (P[:, 2, 0] - P[:, 0, 0])
    gx = np.zeros(len(P))
    gy = np.zeros(len(P))
    for k in range(3):
        a, b = (k + 1) % 3, (k + 2) % 3
        gx += U[:, k] * (P[:, a, 1] - P[:, b, 1])
        gy += U[:, k] * (P[:, b, 0] - P[:, a, 0])
    return np.column_stack([gx, gy]) / area2[:, None]


def recover_gradient(mesh: Mesh, u: np.ndarray) -> np.ndarray:
    """Per-vertex gradient: area-weighted average of the adjacent element gradients."""
    G = element_gradient_field(mesh, u)
    w = np.abs(mesh.areas())
    n = mesh.n_vertices
    out = np.zeros((n, 2))
    W = np.zeros(n)
    for k in range(3):
        idx = mesh.triangles[:, k]
        np.add.at(out, idx, G * w[:, None])
        np.add.at(W, idx, w)
    return out / W[:, None]


# ----------------------------------------------------------------------------
# critical points
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    location: tuple
    vertex: int
    ratios: tuple  # |G|/max|G| per level, coarse to fine (None where not tracked)
    distance: float  # to ∂Ω ∪ D, in units of d
    classification: str
    confirmed: bool

    def to_json(self) -> dict:
        return {
            "location": list(self.location),
            "vertex": self.vertex,
            "ratios": list(self.ratios),
            "distance": self.distance,
            "classification": self.classification,
            "confirmed": self.confirmed,
        }


@dataclass(frozen=True)
class CriticalPointReport:
    candidates: tuple
    tau: float
    delta_factor: float
    delta: float | None
    verdict: str
    levels: int

    def to_json(self) -> dict:
        return {
            "candidates": [c.to_json() for c in self.candidates],
            "tau": self.tau,
            "delta_factor": self.delta_factor,
            "delta": self.delta,
            "verdict": self.verdict,
            "levels": self.levels,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CriticalPointReport":
        cands = tuple(
            Candidate(tuple(c["location"]), c["vertex"], tuple(c["ratios"]), c["distance"], c["classification"], c["confirmed"])
            for c in d["candidates"]
        )
        return cls(cands, d["tau"], d["delta_factor"], d["delta"], d["verdict"], d["levels"])


def classify(mesh: Mesh, u: np.ndarray, v: int, A: csr_matrix | None = None) -> str:
    """Extremum type of vertex ``v`` from the signs of u(v) - u(w).

    All 2-ring values below (above) u(v) gives local-max (local-min).
    Otherwise the Hessian of a least-squares cubic fit on the 3-ring
    decides when it is clearly nondegenerate; this resolves extrema whose
    neighbourhood is dominated by a cubic term.  The fallback is saddle-like
    for at least four sign changes around the ordered 1-ring.
    """
    if A is None:
        A = vertex_adjacency(mesh)
    r2 = ring(A, v, 2)
    diff = u[v] - u[r2]
    if np.all(diff > 0):
        return LOCAL_MAX
    if np.all(diff < 0):
        return LOCAL_MIN
    H = fitted_hessian(mesh, u, v, A)
    if H is not None:
        ev = np.linalg.eigvalsh(H)
        if abs(ev).min() > 1e-3 * abs(ev).max():
            if ev.max() < 0:
                return LOCAL_MAX
            if ev.min() > 0:
                return LOCAL_MIN
            return SADDLE
    nb = _neighbors(A, v)
    d = mesh.vertices[nb] - mesh.vertices[v]
    order = np.argsort(np.arctan2(d[:, 1], d[:, 0]))
    s = np.sign(u[v] - u[nb[order]])
    s = s[s != 0]
    changes = int(np.sum(s != np.roll(s, 1))) if len(s) else 0
    if changes >= 4:
        return SADDLE
    return UNRESOLVED


def fitted_hessian(mesh: Mesh, u: np.ndarray, v: int, A: csr_matrix | None = None, rings: int = 3) -> np.ndarray | None:
    """Hessian at vertex ``v`` from a least-squares cubic fit over its ``rings``-ring."""
    if A is None:
        A = vertex_adjacency(mesh)
    r = ring(A, v, rings)
    if len(r) < 15:
        return None
    d = mesh.vertices[r] - mesh.vertices[v]
    s = float(np.abs(d).max())
    x, y = d[:, 0] / s, d[:, 1] / s
    X = np.column_stack([np.ones_like(x), x, y, x * x, x * y, y * y, x**3, x * x * y, x * y * y, y**3])
    c, *_ = np.linalg.lstsq(X, u[r] - u[v], rcond=None)
    return np.array([[2 * c[3], c[4]], [c[4], 2 * c[5]]]) / (s * s)


def _level_candidates(mesh: Mesh, u: np.ndarray, tau: float, delta, delta_factor: float, A: csr_matrix):
    G = recover_gradient(mesh, u)
    g = np.hypot(G[:, 0], G[:, 1])
    gmax = float(g.max())
    if gmax == 0:
        return [], g, 0.0
    ratio = g / gmax
    interior = ~mesh.boundary_mask
    interior[mesh.interior_edges.ravel()] = False
    sel = np.nonzero(interior & (ratio <= tau))[0]
    if len(sel) == 0:
        return [], ratio, gmax
    dist = mesh.boundary_distance(mesh.vertices[sel])
    margin = np.full(len(sel), delta) if delta is not None else delta_factor * local_edge_length(mesh)[sel]
    out = []
    for v, dv, mv in zip(sel, dist, margin):
        if dv < mv:
            continue
        # local minimum of |G| over the 2-ring
        r2 = ring(A, v, 2)
        if np.all(g[v] <= g[r2]):
            out.append((int(v), float(dv), float(mv)))
    return out, ratio, gmax


def _fields(solutions, index: int):
    out = []
    for s in solutions:
        if isinstance(s, EigenSolution):
            out.append((s.mesh, np.asarray(s.fields[index], float)))
        else:
            out.append((s[0], np.asarray(s[1], float)))
    return out


def find_critical_points(
    solutions: Sequence,
    tau: float = 0.02,
    delta: float | None = None,
    delta_factor: float = 2.0,
    index: int = 0,
) -> CriticalPointReport:
    """Interior critical points of a field given on nested refinement levels.

    ``solutions`` are :class:`EigenSolution` objects (field ``index``) or
    ``(mesh, values)`` pairs, coarse to fine.  A vertex is a candidate at a
    level iff its recovered-gradient ratio |G|/max|G| is at most ``tau``, it
    is a local minimum of |G| over its 2-ring, and it lies at distance at
    least ``delta`` from ∂Ω ∪ D (default: ``delta_factor`` times the
    longest incident edge).  A finest-level candidate is confirmed when a
    candidate sits within 3 local edge lengths on the previous level and
    the ratio has not increased, and the ratio either reached ``tau/2`` or
    fell by a factor of at least 1.5 per level.  Unconfirmed candidates make
    the verdict INCONCLUSIVE.
    """
    data = _fields(solutions, index)
    keys = {m.spec_key for m, _ in data}
    if len(keys) != 1:
        raise ValueError("critical point search needs levels of one spec")
    per_level = []
    adj = []
    for mesh, u in data:
        A = vertex_adjacency(mesh)
        adj.append(A)
        per_level.append(_level_candidates(mesh, u, tau, delta, delta_factor, A))
    mesh_f, u_f = data[-1]
    cands_f, ratio_f, _ = per_level[-1]
    if not cands_f:
        return CriticalPointReport((), tau, delta_factor, delta, NO_CRITICAL, len(data))
    d = mesh_f.d
    h_local = local_edge_length(mesh_f)
    out = []
    for v, dist, margin in cands_f:
        p = mesh_f.vertices[v]
        ratios = [None] * len(data)
        ratios[-1] = float(ratio_f[v])
        reach = 3.0 * h_local[v]
        for lv in range(len(data) - 2, -1, -1):
            mesh_c, _ = data[lv]
            cands_c, ratio_c, _ = per_level[lv]
            reach *= 2.0
            best = None
            for vc, _, _ in cands_c:
                dd = float(np.hypot(*(mesh_c.vertices[vc] - p)))
                if dd <= reach and (best is None or dd < best[0]):
                    best = (dd, vc)
            if best is None:
                break
            ratios[lv] = float(ratio_c[best[1]])
        tracked = [r for r in ratios if r is not None]
        confirmed = False
        if len(tracked) >= 2:
            nonincr = all(b <= a * (1 + 1e-9) + 1e-14 for a, b in zip(tracked, tracked[1:]))
            small = tracked[-1] <= tau / 2
            fast = all(b <= a / 1.5 for a, b in zip(tracked, tracked[1:]))
            floor = tracked[-1] <= 1e-8
            confirmed = nonincr and (floor or fast or small)
        out.append(
            Candidate(
                tuple(map(float, p)),
                v,
                tuple(ratios),
                dist / d,
                classify(mesh_f, u_f, v, adj[-1]),
                confirmed,
            )
        )
    verdict = FOUND if all(c.confirmed for c in out) else INCONCLUSIVE
    return CriticalPointReport(tuple(out), tau, delta_factor, delta, verdict, len(data))


# ----------------------------------------------------------------------------
# comparison field
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonField:
    vertex: int
    point: tuple
    components: int
    ring_vertices: np.ndarray = field(repr=False)
    ring_values: np.ndarray = field(repr=False)
    dirichlet_min: float | None


def sign_components(A: csr_matrix, verts: np.ndarray, values: np.ndarray, band: float = 0.0) -> int:
    """Connected components of {values > band} plus those of {values < -band} within ``verts``."""
    verts = np.asarray(verts, int)
    total = 0
    for sgn in (1, -1):
        keep = verts[sgn * values > band]
        if len(keep) == 0:
            continue
        sub = A[keep][:, keep]
        n, _ = connected_components(sub, directed=False)
        total += n
    return total


def comparison_field(solution: EigenSolution, p, rings: int = 3, index: int = 0) -> ComparisonField:
    """Sign structure of f = u(p) J0(√λ r) - u near the vertex ``p`` (r measured from p).

    ``p`` is a vertex index or a point (snapped to the nearest vertex).
    Counts the sign components of f on the ``rings``-ring of ``p`` with p
    itself removed, and reports min f over the Dirichlet nodes.
    """
    mesh = solution.mesh
    u = np.asarray(solution.fields[index], float)
    lam = float(solution.eigenvalues[index])
    if np.ndim(p) == 0:
        v = int(p)
    else:
        v = int(cKDTree(mesh.vertices).query(np.asarray(p, float))[1])
    if mesh.boundary_mask[v] or mesh.dirichlet_mask[v]:
        raise ValueError("comparison point must be an interior vertex")
    A = vertex_adjacency(mesh)
    rv = ring(A, v, rings)
    k = math.sqrt(lam)

    def f_at(idx):
        r = np.hypot(*(mesh.vertices[idx] - mesh.vertices[v]).T)
        return u[v] * bessel("J0", k * r) - u[idx]

    fr = f_at(rv)
    band = ZERO_BAND * float(np.abs(u).max())
    comps = sign_components(A, rv, fr, band)
    dn = np.nonzero(mesh.dirichlet_mask)[0]
    dmin = float(f_at(dn).min()) if len(dn) else None
    return ComparisonField(v, tuple(map(float, mesh.vertices[v])), comps, rv, fr, dmin)


# ----------------------------------------------------------------------------
# nodal sets
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class NodalSet:
    polylines: tuple  # arrays of shape (k, 2)
    domains: int
    positive_domains: int
    negative_domains: int
    domain_vertices: tuple = field(repr=False)  # per domain: (sign, vertex indices)


def _signs(u: np.ndarray, band: float) -> np.ndarray:
    s = np.zeros(len(u), int)
    s[u > band] = 1
    s[u < -band] = -1
    return s


def nodal_set(mesh: Mesh, u: np.ndarray, band: float = ZERO_BAND) -> NodalSet:
    """Zero set of a P1 field as polylines, plus its nodal-domain count.

    Values with |u| <= band·max|u| count as zero.  Raises ValueError when
    the field does not change sign.
    """
    u = np.asarray(u, float)
    scale = float(np.abs(u).max())
    s = _signs(u, band * scale)
    if not (np.any(s > 0) and np.any(s < 0)):
        raise ValueError("field does not change sign")
    A = vertex_adjacency(mesh)
    domains = []
    npos = nneg = 0
    for sgn in (1, -1):
        idx = np.nonzero(s == sgn)[0]
        n, lab = connected_components(A[idx][:, idx], directed=False)
        for c in range(n):
            domains.append((sgn, idx[lab == c]))
        if sgn > 0:
            npos = n
        else:
            nneg = n
    # crossing points: zero vertices and sign-change edges
    edges, tedge = mesh.edges()
    key_of_vertex = {}
    pts: list[np.ndarray] = []

    def point_for_vertex(v):
        if ("v", v) not in key_of_vertex:
            key_of_vertex[("v", v)] = len(pts)
            pts.append(mesh.vertices[v])
        return key_of_vertex[("v", v)]

    def point_for_edge(e):
        if ("e", e) not in key_of_vertex:
            a, b = edges[e]
            t = u[a] / (u[a] - u[b])
            key_of_vertex[("e", e)] = len(pts)
            pts.append(mesh.vertices[a] + t * (mesh.vertices[b] - mesh.vertices[a]))
        return key_of_vertex[("e", e)]

    segs = set()
    for ti, tri in enumerate(mesh.triangles):
        st = s[tri]
        if np.all(st == st[0]) and st[0] != 0:
            continue
        found = []
        for k in range(3):
            if st[k] == 0:
                found.append(point_for_vertex(int(tri[k])))
        for k in range(3):
            a, b = (k + 1) % 3, (k + 2) % 3
            if st[a] * st[b] < 0:
                found.append(point_for_edge(int(tedge[ti, k])))
        if len(found) == 2 and found[0] != found[1]:
            segs.add(tuple(sorted(found)))
    polylines = _chain(segs, np.array(pts).reshape(-1, 2))
    return NodalSet(tuple(polylines), len(domains), npos, nneg, tuple(domains))


def _chain(segs, P: np.ndarray) -> list[np.ndarray]:
    adj: dict[int, list[int]] = {}
    for a, b in sorted(segs):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    used = set()
    lines = []
    # start from endpoints (degree != 2) first, then close loops
    starts = [v for v in sorted(adj) if len(adj[v]) != 2] + sorted(adj)
    for s0 in starts:
        for nb in adj[s0]:
            if (min(s0, nb), max(s0, nb)) in used:
                continue
            path = [s0]
            prev, cur = s0, nb
            used.add((min(prev, cur), max(prev, cur)))
            path.append(cur)
            while len(adj[cur]) == 2:
                nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
                e = (min(cur, nxt), max(cur, nxt))
                if e in used:
                    break
                used.add(e)
                prev, cur = cur, nxt
                path.append(cur)
            lines.append(P[path])
    return lines


# ----------------------------------------------------------------------------
# symmetry
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryResult:
    even_deviation: float
    odd_deviation: float
    verdict: str  # "even", "odd" or "neither"


def interpolate(mesh: Mesh, u: np.ndarray, points: np.ndarray, tol: float | None = None) -> np.ndarray:
    """P1 interpolation of ``u`` at ``points`` (nearest vertex within ``tol`` outside the mesh)."""
    points = np.asarray(points, float).reshape(-1, 2)
    V, T = mesh.vertices, mesh.triangles
    tol = mesh.h / 10 if tol is None else tol
    vt = cKDTree(V)
    dv, iv = vt.query(points)
    out = np.empty(len(points))
    exact = dv <= 1e-12 * mesh.d
    out[exact] = u[iv[exact]]
    rest = np.nonzero(~exact)[0]
    if len(rest):
        C = V[T].mean(axis=1)
        ct = cKDTree(C)
        k = min(24, len(T))
        _, near = ct.query(points[rest], k=k)
        near = np.atleast_2d(near)
        for j, i in enumerate(rest):
            p = points[i]
            hit = False
            for t in near[j]:
                a, b, c = V[T[t]]
                m = np.array([[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]])
                l1, l2 = np.linalg.solve(m, p - a)
                l0 = 1 - l1 - l2
                if min(l0, l1, l2) >= -1e-10:
                    out[i] = l0 * u[T[t][0]] + l1 * u[T[t][1]] + l2 * u[T[t][2]]
                    hit = True
                    break
            if not hit:
                if dv[i] <= tol:
                    out[i] = u[iv[i]]
                else:
                    raise ValueError(f"point {p} lies outside the mesh: the map is not a symmetry of the domain")
    return out


def symmetry_check(mesh: Mesh, u: np.ndarray, isometry, center=(0.0, 0.0), tol: float = 1e-2) -> SymmetryResult:
    """Compare ``u∘σ`` with ``u`` for σ(x) = R (x - c) + c.

    ``isometry`` is a 2x2 orthogonal matrix or a 4-tuple (row major).
    Verdict "even" (or "odd") when max|u∘σ ∓ u|/max|u| <= ``tol``.
    """
    R = np.asarray(isometry, float).reshape(2, 2)
    if not np.allclose(R @ R.T, np.eye(2), atol=1e-12):
        raise ValueError("isometry must be orthogonal")
    c = np.asarray(center, float)
    V = mesh.vertices
    W = (V - c) @ R.T + c
    bidx = np.nonzero(mesh.boundary_mask)[0]
    off = mesh.boundary_distance(W[bidx])
    if off.max() > mesh.h / 10:
        raise ValueError("map is not a symmetry of the domain")
    u = np.asarray(u, float)
    scale = float(np.abs(u).max())
    if scale == 0:
        return SymmetryResult(0.0, 0.0, "even")
    us = interpolate(mesh, u, W)
    even = float(np.abs(us - u).max() / scale)
    odd = float(np.abs(us + u).max() / scale)
    verdict = "even" if even <= tol else ("odd" if odd <= tol else "neither")
    return SymmetryResult(even, odd, verdict)


# ----------------------------------------------------------------------------
# nodal domain diameters
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class NodalDomainReport:
    mu2: float
    multiplicity: int
    d: float
    d_plus: float
    d_minus: float
    hypothesis: bool
    combinations_tested: int
    critical_points: CriticalPointReport | None

    def to_json(self) -> dict:
        return {
            "mu2": self.mu2,
            "multiplicity": self.multiplicity,
            "d": self.d,
            "d_plus": self.d_plus,
            "d_minus": self.d_minus,
            "hypothesis": self.hypothesis,
            "combinations_tested": self.combinations_tested,
            "critical_points": None if self.critical_points is None else self.critical_points.to_json(),
        }


def _domain_diameters(mesh: Mesh, u: np.ndarray) -> tuple[float, float]:
    ns = nodal_set(mesh, u)
    crossings = np.vstack(ns.polylines) if ns.polylines else np.zeros((0, 2))
    best = {1: 0.0, -1: 0.0}
    for sgn, verts in ns.domain_vertices:
        pts = np.vstack([mesh.vertices[verts], crossings])
        # the closure of a nodal domain only meets the crossings that bound it
        if len(crossings):
            tree = cKDTree(mesh.vertices[verts])
            dd, _ = tree.query(crossings)
            pts = np.vstack([mesh.vertices[verts], crossings[dd <= 1.5 * mesh.h * 2]])
        best[sgn] = max(best[sgn], hull_diameter(pts))
    return best[1], best[-1]


def nodal_domain_report(
    spec: DomainSpec,
    h: float = 0.05,
    n_levels: int = 2,
    multiplicity_tol: float = 1e-3,
    samples: int = 16,
    tau: float = 0.02,
) -> NodalDomainReport:
    """Check whether the nodal domains of a second Neumann eigenfunction have diameter <= d/2.

    For a multiple μ₂ the check runs over ``samples`` unit combinations of
    the eigenspace basis; the hypothesis holds if some combination meets it.
    When it holds, the critical-point search runs on that combination.
    """
    if spec.dirichlet:
        raise ValueError("nodal domain report needs D = ∅")
    res = solve_levels(spec, h, n_levels, k=4)
    sol = res.finest
    mesh = sol.mesh
    mu = sol.eigenvalues
    mult = 1 + int(np.sum(np.abs(mu[2:] - mu[1]) <= multiplicity_tol * mu[1]))
    basis = sol.fields[1 : 1 + mult]
    if mult == 1:
        combos = [np.array([1.0])]
    else:
        rng = np.random.default_rng(0)
        combos = []
        for j in range(samples):
            if mult == 2:
                th = math.pi * j / samples
                combos.append(np.array([math.cos(th), math.sin(th)]))
            else:
                w = rng.normal(size=mult)
                combos.append(w / np.linalg.norm(w))
    d = mesh.d
    best = None
    for w in combos:
        u = w @ basis
        dp, dm = _domain_diameters(mesh, u)
        ok = dp <= d / 2 and dm <= d / 2
        key = (ok, -max(dp, dm))
        if best is None or key > best[0]:
            best = (key, dp, dm, w)
    (ok, _), dp, dm, w = best
    cp = None
    if ok:
        fields = [(s.mesh, w @ s.fields[1 : 1 + mult]) for s in res.solutions]
        cp = find_critical_points(fields, tau=tau)
    return NodalDomainReport(float(res.value[1]), mult, d, dp, dm, bool(ok), len(combos), cp)


def j0_threshold_check(lambda1: float, d: float, est_error: float = 0.0) -> bool:
    """λ₁·d² <= j0²·(1 - 5·est_error): the regime where no interior critical points may appear."""
    return lambda1 * d * d <= J0_FIRST_ZERO**2 * (1 - 5 * est_error)
