"""P1 finite elements for the mixed Laplace eigenproblem.

Dirichlet nodes are eliminated; the reduced generalized problem
``K x = λ M x`` is solved by shift-invert Lanczos (ARPACK via scipy).
Eigenvalues from nested red-refinement levels are combined by Richardson
extrapolation, which also supplies the discretization-error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh, splu

from .meshing import Mesh, levels, triangulate

RESIDUAL_TOL = 1e-10


class SolverError(RuntimeError):
    pass


class AssemblyError(ValueError):
    pass


# ----------------------------------------------------------------------------
# assembly
# ----------------------------------------------------------------------------


def element_gradients(mesh: Mesh) -> tuple[np.ndarray, np.ndarray]:
    """Barycentric gradients, shape (T, 3, 2), and triangle areas."""
    P = mesh.vertices[mesh.triangles]
    area = mesh.areas()
    if np.any(area <= 0):
        raise AssemblyError("degenerate or inverted triangle")
    G = np.empty((len(P), 3, 2))
    for k in range(3):
        a = P[:, (k + 1) % 3]
        b = P[:, (k + 2) % 3]
        G[:, k, 0] = (a[:, 1] - b[:, 1]) / (2 * area)
        G[:, k, 1] = (b[:, 0] - a[:, 0]) / (2 * area)
    return G, area


def assemble(mesh: Mesh) -> tuple[sp.csr_matrix, sp.csr_matrix, np.ndarray]:
    """Stiffness ``K``, consistent mass ``M`` and the boolean Dirichlet node mask."""
    G, area = element_gradients(mesh)
    Ke = np.einsum("tid,tjd->tij", G, G) * area[:, None, None]
    Me = (np.ones((3, 3)) + np.eye(3))[None] * (area / 12.0)[:, None, None]
    T = mesh.triangles
    rows = np.repeat(T, 3, axis=1).ravel()
    cols = np.tile(T, (1, 3)).ravel()
    n = mesh.n_vertices
    K = sp.coo_matrix((Ke.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    M = sp.coo_matrix((Me.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return K, M, mesh.dirichlet_mask


# ----------------------------------------------------------------------------
# eigen solve
# ----------------------------------------------------------------------------


@dataclass(eq=False)
class EigenSolution:
    """Lowest eigenpairs on one mesh.

    ``fields[k]`` holds nodal values (zero on Dirichlet nodes) with unit
    discrete L² norm.  ``est_error`` is the relative discretization-error
    estimate per eigenvalue (``None`` until extrapolation supplies it) and
    ``abs_error`` the absolute one.
    """

    eigenvalues: np.ndarray
    fields: np.ndarray
    mesh: Mesh | None = field(repr=False)
    residuals: np.ndarray | None = None
    est_error: np.ndarray | None = None
    abs_error: np.ndarray | None = None

    @property
    def neumann(self) -> bool:
        return self.mesh is not None and not self.mesh.dirichlet_mask.any()

    @property
    def labels(self) -> list[str]:
        if self.neumann:
            return [f"mu{k + 1}" for k in range(len(self.eigenvalues))]
        return [f"lambda{k + 1}_D" for k in range(len(self.eigenvalues))]


def _residual_norms(K, M, lam, X, Mlu) -> np.ndarray:
    R = K @ X - (M @ X) * lam[None, :]
    MinvR = Mlu.solve(R)
    return np.sqrt(np.maximum(np.einsum("ij,ij->j", R, MinvR), 0.0))


def _rounding_floor(K, M, lam, X, Mlu) -> np.ndarray:
    """Size of the float64 rounding in K x - λ M x, measured in the M⁻¹ norm."""
    A = abs(K) @ np.abs(X) + (abs(M) @ np.abs(X)) * np.abs(lam)[None, :]
    return np.finfo(float).eps * np.sqrt(np.maximum(np.einsum("ij,ij->j", A, Mlu.solve(A)), 0.0))


def residual_tolerance(K, M, lam, X, Mlu) -> np.ndarray:
    """RESIDUAL_TOL·max(1, λ), relaxed to 64× the rounding floor on strongly graded meshes."""
    return np.maximum(RESIDUAL_TOL * np.maximum(1.0, np.abs(lam)), 64 * _rounding_floor(K, M, lam, X, Mlu))


def solve_lowest(
    K: sp.spmatrix,
    M: sp.spmatrix,
    dirichlet: np.ndarray,
    k: int = 1,
    mesh: Mesh | None = None,
    sigma: float | None = None,
) -> EigenSolution:
    """The ``k`` smallest eigenpairs of the reduced problem.

    The shift is 0 when Dirichlet nodes exist and ``-1/|Ω|`` for the pure
    Neumann problem (so the constant mode is captured without a singular
    factorization).  The start vector is the normalized vector of ones.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    dirichlet = np.asarray(dirichlet, bool)
    free = np.nonzero(~dirichlet)[0]
    n = len(free)
    if n == 0:
        raise SolverError("no free degrees of freedom after eliminating Dirichlet nodes")
    Kf = sp.csc_matrix(K[free][:, free])
    Mf = sp.csc_matrix(M[free][:, free])
    if sigma is None:
        sigma = 0.0 if dirichlet.any() else -1.0 / float(np.ones(n) @ (Mf @ np.ones(n)))
    Mlu = splu(Mf)
    if n <= max(3 * k, 40):
        import scipy.linalg as sl

        lam, X = sl.eigh(Kf.toarray(), Mf.toarray())
        lam, X = lam[:k], X[:, :k]
    else:
        v0 = np.ones(n) / math.sqrt(n)
        lam = X = None
        for ncv in (min(n - 1, max(2 * k + 1, 20)), min(n - 1, max(4 * k + 1, 60))):
            try:
                lam, X = eigsh(Kf, k=k, M=Mf, sigma=sigma, which="LM", v0=v0, ncv=ncv, tol=0, maxiter=20 * n)
            except ArpackNoConvergence as exc:
                lam = X = None
                err = exc
                continue
            Xn = X / np.sqrt(np.einsum("ij,ij->j", X, Mf @ X))
            if np.all(_residual_norms(Kf, Mf, lam, Xn, Mlu) <= residual_tolerance(Kf, Mf, lam, Xn, Mlu)):
                break
        if lam is None:
            raise SolverError(f"eigensolver did not converge: {err}")
        order = np.argsort(lam)
        lam, X = lam[order], X[:, order]
    # M-orthonormalize (Gram-Schmidt handles clustered eigenvalues)
    MX = Mf @ X
    for j in range(X.shape[1]):
        for i in range(j):
            X[:, j] -= (X[:, i] @ (Mf @ X[:, j])) * X[:, i]
        X[:, j] /= math.sqrt(X[:, j] @ (Mf @ X[:, j]))
    MX = Mf @ X
    res = _residual_norms(Kf, Mf, lam, X, Mlu)
    tol = residual_tolerance(Kf, Mf, lam, X, Mlu)
    if np.any(res > tol):
        raise SolverError(f"eigen residual {res.max():.3e} exceeds tolerance {tol.max():.3e}")
    if np.any(lam < -1e-9 * max(1.0, abs(lam).max())):
        raise SolverError("negative eigenvalue: stiffness matrix is not positive semidefinite")
    lam = np.where(lam < 0, 0.0, lam)
    # signs: field 0 has nonnegative mean; others have their largest entry positive
    for j in range(X.shape[1]):
        if j == 0:
            s = np.sum(MX[:, 0])
            flip = s < 0 or (s == 0 and X[np.argmax(np.abs(X[:, 0])), 0] < 0)
        else:
            flip = X[np.argmax(np.abs(X[:, j])), j] < 0
        if flip:
            X[:, j] = -X[:, j]
    full = np.zeros((X.shape[1], len(dirichlet)))
    full[:, free] = X.T
    return EigenSolution(np.asarray(lam, float), full, mesh, res)


def solve_mesh(mesh: Mesh, k: int = 1) -> EigenSolution:
    K, M, d = assemble(mesh)
    return solve_lowest(K, M, d, k, mesh=mesh)


# ----------------------------------------------------------------------------
# extrapolation
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Extrapolation:
    value: np.ndarray
    abs_error: np.ndarray
    rel_error: np.ndarray
    order: np.ndarray
    monotone: np.ndarray

    @property
    def est_error(self) -> np.ndarray:
        return self.rel_error


def extrapolate(coarse: EigenSolution, fine: EigenSolution, order=2.0) -> Extrapolation:
    """Richardson extrapolation of consecutive red-refinement levels.

    With error model ``c h^p`` the improved value is
    ``λ_fine + (λ_fine - λ_coarse)/(2^p - 1)``; the error estimate is the
    size of that correction (``|Δ|/3`` for ``p = 2``).  Pairs where the
    fine eigenvalue exceeds the coarse one are flagged non-monotone.
    """
    if coarse.mesh is not None and fine.mesh is not None:
        if coarse.mesh.spec_key != fine.mesh.spec_key or fine.mesh.level != coarse.mesh.level + 1:
            raise ValueError("extrapolation needs consecutive levels of the same spec")
    a = np.asarray(coarse.eigenvalues, float)
    b = np.asarray(fine.eigenvalues, float)
    p = np.broadcast_to(np.asarray(order, float), b.shape)
    delta = b - a
    corr = delta / (2.0**p - 1.0)
    value = b + corr
    abs_err = np.abs(corr)
    # zero eigenvalues (Neumann constants) get an absolute estimate
    scale = np.where(np.abs(value) > 1e-9, np.abs(value), 1.0)
    mono = delta <= 1e-12 * np.maximum(np.abs(a), 1.0)
    return Extrapolation(value, abs_err, abs_err / scale, p.copy(), mono)


def observed_order(sols: Sequence[EigenSolution], lo: float = 1.0, hi: float = 2.0) -> np.ndarray:
    """Convergence order from the last three levels, clipped to ``[lo, hi]`` (2 if unavailable)."""
    if len(sols) < 3:
        return np.full(len(sols[-1].eigenvalues), 2.0)
    a, b, c = (np.asarray(s.eigenvalues, float) for s in sols[-3:])
    d1, d2 = np.abs(b - a), np.abs(c - b)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.log2(d1 / d2)
    p = np.where(np.isfinite(p), p, 2.0)
    return np.clip(p, lo, hi)


def raw_order(sols: Sequence[EigenSolution]) -> np.ndarray:
    """Unclipped observed order from the last three levels."""
    a, b, c = (np.asarray(s.eigenvalues, float) for s in sols[-3:])
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log2(np.abs(b - a) / np.abs(c - b))


@dataclass(eq=False)
class LevelSolve:
    """Solutions on nested levels plus the extrapolated eigenvalues."""

    solutions: list
    extrapolation: Extrapolation

    @property
    def finest(self) -> EigenSolution:
        return self.solutions[-1]

    @property
    def value(self) -> np.ndarray:
        return self.extrapolation.value

    @property
    def meshes(self) -> list[Mesh]:
        return [s.mesh for s in self.solutions]


def solve_levels(
    spec=None,
    h: float | None = None,
    n_levels: int = 3,
    k: int = 1,
    grading=None,
    meshes: Sequence[Mesh] | None = None,
    use_symmetry: bool = True,
) -> LevelSolve:
    """Solve on ``n_levels`` nested meshes and extrapolate with the observed order."""
    if meshes is None:
        meshes = levels(triangulate(spec, h, grading, use_symmetry), n_levels)
    sols = [solve_mesh(m, k) for m in meshes]
    if len(sols) == 1:
        z = np.full(k, np.nan)
        ex = Extrapolation(sols[0].eigenvalues.copy(), z, z, z, np.ones(k, bool))
    else:
        ex = extrapolate(sols[-2], sols[-1], observed_order(sols))
    for s in sols[-1:]:
        s.est_error = ex.rel_error
        s.abs_error = ex.abs_error
    return LevelSolve(sols, ex)


# ----------------------------------------------------------------------------
# Rayleigh quotient
# ----------------------------------------------------------------------------

# 7-point degree-5 rule on the reference triangle: barycentric coords and weights (sum 1)
_A1, _B1 = 0.059715871789770, 0.470142064105115
_A2, _B2 = 0.797426985353087, 0.101286507323456
_W0, _W1, _W2 = 0.225, 0.132394152788506, 0.125939180544827
DUNAVANT7 = (
    np.array(
        [
            [1 / 3, 1 / 3, 1 / 3],
            [_A1, _B1, _B1],
            [_B1, _A1, _B1],
            [_B1, _B1, _A1],
            [_A2, _B2, _B2],
            [_B2, _A2, _B2],
            [_B2, _B2, _A2],
        ]
    ),
    np.array([_W0, _W1, _W1, _W1, _W2, _W2, _W2]),
)


def _integrate_triangles(mesh: Mesh, g: Callable[[np.ndarray], np.ndarray]) -> float:
    bary, w = DUNAVANT7
    P = mesh.vertices[mesh.triangles]
    Q = np.einsum("qk,tkd->tqd", bary, P).reshape(-1, 2)
    vals = np.asarray(g(Q), float).reshape(len(P), len(w))
    return float(np.sum(mesh.areas() * (vals @ w)))


def _segment_corrections(mesh: Mesh, g: Callable[[np.ndarray], np.ndarray], n: int = 8) -> float:
    """Signed integral of ``g`` over the circular segments between curved boundary edges and their arcs."""
    curved = np.nonzero(mesh.boundary_curves >= 0)[0]
    if len(curved) == 0:
        return 0.0
    x, wx = np.polynomial.legendre.leggauss(n)
    total = 0.0
    # third vertex of the triangle owning each curved edge decides the sign
    edges, tedge = mesh.edges()
    owner = np.full(len(edges), -1)
    owner[tedge.ravel()] = np.repeat(np.arange(len(mesh.triangles)), 3)
    eidx = {tuple(e): i for i, e in enumerate(map(tuple, edges))}
    for k in curved:
        a, b = mesh.boundary_edges[k]
        cx, cy, r = mesh.curves[mesh.boundary_curves[k]]
        c = np.array([cx, cy])
        pa, pb = mesh.vertices[a] - c, mesh.vertices[b] - c
        ta, tb = math.atan2(pa[1], pa[0]), math.atan2(pb[1], pb[0])
        dt = (tb - ta + math.pi) % (2 * math.pi) - math.pi
        tm = ta + dt / 2
        half = abs(dt) / 2
        dist = r * math.cos(half)  # centre-to-chord distance
        tri = mesh.triangles[owner[eidx[tuple(sorted((a, b)))]]]
        third = mesh.vertices[[v for v in tri if v not in (a, b)][0]] - c
        # triangle on the centre side of the chord -> segment lies outside the mesh
        sign = 1.0 if third @ np.array([math.cos(tm), math.sin(tm)]) < dist else -1.0
        th = tm + half * x
        rho0 = dist / np.cos(th - tm)
        s = 0.5 * (x[None, :] + 1.0)
        rho = rho0[:, None] + (r - rho0[:, None]) * s
        pts = c + np.stack([rho * np.cos(th)[:, None], rho * np.sin(th)[:, None]], axis=-1)
        vals = np.asarray(g(pts.reshape(-1, 2)), float).reshape(rho.shape)
        jac = rho * 0.5 * (r - rho0[:, None])
        total += sign * half * float(np.einsum("i,j,ij->", wx, wx, vals * jac))
    return total


def integrate(mesh: Mesh, g: Callable[[np.ndarray], np.ndarray], curved: bool = True) -> float:
    """∫ g over the exact domain: triangle quadrature plus curved-edge corrections."""
    out = _integrate_triangles(mesh, g)
    if curved:
        out += _segment_corrections(mesh, g)
    return out


def rayleigh_parts(mesh: Mesh, f, grad_f=None, curved: bool = True, check_dirichlet: bool = True) -> tuple[float, float]:
    """Numerator ∫|∇f|² and denominator ∫f² of the Rayleigh quotient."""
    if isinstance(f, np.ndarray):
        K, M, _ = assemble(mesh)
        return float(f @ (K @ f)), float(f @ (M @ f))
    if grad_f is None:
        raise ValueError("an analytic f needs its gradient")
    if check_dirichlet:
        V = mesh.vertices
        fv = np.asarray(f(V), float)
        scale = float(np.abs(fv).max())
        if scale == 0:
            raise ValueError("test function vanishes identically")
        bad = np.abs(fv[mesh.dirichlet_mask]) > 1e-8 * scale
        if np.any(bad):
            raise ValueError(f"test function does not vanish on D (max {np.abs(fv[mesh.dirichlet_mask]).max():.3e})")
    num = integrate(mesh, lambda P: np.sum(np.asarray(grad_f(P), float) ** 2, axis=1), curved)
    den = integrate(mesh, lambda P: np.asarray(f(P), float) ** 2, curved)
    return num, den


def rayleigh_quotient(mesh: Mesh, f, grad_f=None, curved: bool = True) -> float:
    """∫|∇f|² / ∫f² for an analytic ``f`` (with ``grad_f``) or a nodal vector."""
    num, den = rayleigh_parts(mesh, f, grad_f, curved)
    if den <= 0:
        raise ValueError("test function vanishes identically")
    return num / den
