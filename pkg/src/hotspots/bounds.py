"""Closed-form eigenvalue bounds, thresholds and the radial annulus oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bessel import J0_FIRST_ZERO as j0
from .bessel import bessel
from .geometry import GeometrySummary

HOLDS = "HOLDS"
VIOLATED = "VIOLATED"
NOT_APPLICABLE = "NOT_APPLICABLE"

MIYAMOTO_RATIO = 2 * j0 / math.pi  # ≈ 1.531


class BoundsError(ValueError):
    pass


# ----------------------------------------------------------------------------
# annulus oracle
# ----------------------------------------------------------------------------


def _cross(k: float, R1: float, R2: float) -> float:
    return bessel("Y0", k * R1) * bessel("J1", k * R2) - bessel("J0", k * R1) * bessel("Y1", k * R2)


def _cross_dk(k: float, R1: float, R2: float) -> float:
    a, b = k * R1, k * R2
    J0a, Y0a, J1a, Y1a = (bessel(n, a) for n in ("J0", "Y0", "J1", "Y1"))
    J0b, Y0b, J1b, Y1b = (bessel(n, b) for n in ("J0", "Y0", "J1", "Y1"))
    dJ1b = J0b - J1b / b
    dY1b = Y0b - Y1b / b
    return -R1 * Y1a * J1b + Y0a * R2 * dJ1b + R1 * J1a * Y1b - J0a * R2 * dY1b


def annulus_root(R1: float, R2: float, k_max: float | None = None) -> float:
    """Smallest k > 0 with Y0(kR1) J1(kR2) = J0(kR1) Y1(kR2)."""
    if not 0 < R1 < R2:
        raise BoundsError("degenerate radii: need 0 < R1 < R2")
    step = math.pi / (8 * (R2 - R1))
    if k_max is None:
        k_max = 4 * (j0 + 2 * math.pi) / (R2 - R1)
    a = step / 64
    fa = _cross(a, R1, R2)
    b = step
    while True:
        if b > k_max:
            raise BoundsError(f"no root of the annulus cross product below k={k_max:g}")
        fb = _cross(b, R1, R2)
        if fa == 0:
            return a
        if fa * fb <= 0:
            break
        a, fa = b, fb
        b += step
    # bisection to a tight bracket, then safeguarded Newton
    while b - a > 1e-8 * b:
        m = 0.5 * (a + b)
        fm = _cross(m, R1, R2)
        if fa * fm <= 0:
            b = m
        else:
            a, fa = m, fm
    k = 0.5 * (a + b)
    for _ in range(20):
        dk = _cross(k, R1, R2) / _cross_dk(k, R1, R2)
        k_new = k - dk
        if not a <= k_new <= b:
            break
        k = k_new
        if abs(dk) <= 1e-16 * k:
            break
    return k


def annulus_lambda1(R1: float, R2: float) -> float:
    """First eigenvalue of A(R1, R2), Dirichlet on r = R1 and Neumann on r = R2."""
    return float(annulus_root(float(R1), float(R2)) ** 2)


def annulus_upper(R1: float, R2: float) -> float:
    return 4.0 / (R2 * R2 * math.log(R2 / R1))


def annulus_lower(R1: float, R2: float) -> float:
    return 2.0 / (R2 * R2 * math.log(R2 / R1))


def annulus_bracket_applies(R1: float, R2: float) -> bool:
    return R1 <= math.exp(-2.0) * R2


# ----------------------------------------------------------------------------
# formula checks
# ----------------------------------------------------------------------------


def hotspots_threshold(d: float) -> float:
    return (j0 / d) ** 2


def miyamoto_bound(ell: float, A: float) -> float:
    return (math.pi * ell / (2 * A)) ** 2


def kroger_bound(d: float) -> float:
    return 4 * (j0 / d) ** 2


def disk_arc_ratio(alpha: float) -> float:
    """dℓ/A for the unit disk with a Dirichlet arc of length alpha."""
    return 4.0 / (math.pi - alpha / 2 + math.sin(alpha / 2) * math.cos(alpha / 2))


def disk_arc_threshold(tol: float = 1e-14) -> float:
    """Largest arc length alpha with dℓ/A <= 2 j0/π (bisection)."""
    lo, hi = 0.0, math.pi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if disk_arc_ratio(mid) <= MIYAMOTO_RATIO:
            lo = mid
        else:
            hi = mid
    return lo


def polygon_area_ratio(n: int) -> float:
    """4/A for the regular n-gon of circumradius 1; bounds dℓ/A since d, ℓ <= 2."""
    return 4.0 / (n * math.sin(math.pi / n) * math.cos(math.pi / n))


def pentagon_ratio() -> float:
    """The pentagon value 2 sin(2π/5)(1 + cos(π/5)) / (5 sin(π/5) cos(π/5))."""
    s = math.pi / 5
    return 2 * math.sin(2 * s) * (1 + math.cos(s)) / (5 * math.sin(s) * math.cos(s))


def wild_ratio(a: float) -> float:
    """Upper bound sqrt(a² + 1)/(a - 1) on dℓ/A for the wild example."""
    return math.sqrt(a * a + 1) / (a - 1)


def first_wild_integer(limit: int = 1000) -> int:
    for a in range(2, limit):
        if wild_ratio(a) < MIYAMOTO_RATIO:
            return a
    raise BoundsError("no integer a below the limit")


@dataclass(frozen=True)
class HexagonBound:
    bound: float
    threshold: float
    verdict: str


def hexagon_bound() -> HexagonBound:
    """Test-function bound on λ₁ for P₆ (width 1, D on an edge) against (j0/d)², d = 2/√3."""
    b = (math.pi / 2) ** 2 * (1.5 + 1 / math.pi) / (1.5 - 1 / math.pi)
    thr = (j0 / (2 / math.sqrt(3))) ** 2
    return HexagonBound(b, thr, HOLDS if b < thr else VIOLATED)


# ----------------------------------------------------------------------------
# the report
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    name: str
    verdict: str
    value: float | None = None
    bound: float | None = None
    slack: float | None = None
    tolerance: float = 0.0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "value": self.value,
            "bound": self.bound,
            "slack": self.slack,
            "tolerance": self.tolerance,
        }


def compare(name: str, value: float | None, bound: float, tolerance: float = 0.0, applicable: bool = True) -> Verdict:
    """``value <= bound`` with slack ``bound - value``; HOLDS within ``tolerance``."""
    if not applicable:
        return Verdict(name, NOT_APPLICABLE, None if value is None else float(value), float(bound))
    bound = float(bound)
    if value is None:
        return Verdict(name, NOT_APPLICABLE, None, bound)
    value = float(value)
    slack = bound - value
    return Verdict(name, HOLDS if slack >= -tolerance else VIOLATED, value, bound, slack, tolerance)


@dataclass(frozen=True)
class BoundReport:
    lambda1_fem: float | None
    hotspots_threshold: float
    miyamoto_bound: float | None
    miyamoto_ratio: float | None
    miyamoto_ratio_limit: float
    annulus_lambda: float | None
    annulus_upper: float | None
    annulus_lower: float | None
    kroger_bound: float
    verdicts: tuple = field(default=())

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "lambda1_fem": self.lambda1_fem,
            "hotspots_threshold": self.hotspots_threshold,
            "miyamoto_bound": self.miyamoto_bound,
            "miyamoto_ratio": self.miyamoto_ratio,
            "miyamoto_ratio_limit": self.miyamoto_ratio_limit,
            "annulus_lambda": self.annulus_lambda,
            "annulus_upper": self.annulus_upper,
            "annulus_lower": self.annulus_lower,
            "kroger_bound": self.kroger_bound,
            "verdicts": [v.to_json() for v in self.verdicts],
        }


def evaluate_bounds(
    summary: GeometrySummary,
    lambda1: float | None = None,
    est_error: float = 0.0,
    mu2: float | None = None,
) -> BoundReport:
    """Evaluate every closed-form bound for ``summary`` and compare ``lambda1`` with them.

    ``est_error`` (absolute, same units as ``lambda1``) becomes the verdict
    tolerance 3·est_error so a discretization-level excess is not reported as
    a violation.
    """
    d = summary.diameter
    tol = 3.0 * est_error
    hs = hotspots_threshold(d)
    verdicts = [compare("hotspots", lambda1, hs, tol)]

    mb = mr = None
    if summary.miyamoto_placement and summary.quadrant_area > 0:
        mb = miyamoto_bound(summary.projection_length, summary.quadrant_area)
        mr = d * summary.projection_length / summary.quadrant_area
        verdicts.append(compare("miyamoto", lambda1, mb, tol))
        verdicts.append(compare("miyamoto_ratio", mr, MIYAMOTO_RATIO))
    else:
        verdicts.append(Verdict("miyamoto", NOT_APPLICABLE))
        verdicts.append(Verdict("miyamoto_ratio", NOT_APPLICABLE))

    al = au = alo = None
    R1, R2 = summary.R1, summary.R2
    if R1 > 0 and R2 > R1:
        al = annulus_lambda1(R1, R2)
        verdicts.append(compare("annulus_optimal", lambda1, al, tol))
        if annulus_bracket_applies(R1, R2):
            au = annulus_upper(R1, R2)
            alo = annulus_lower(R1, R2)
            verdicts.append(compare("annulus_upper", lambda1, au, tol))
            verdicts.append(compare("annulus_bracket_lower", alo, al))
            verdicts.append(compare("annulus_bracket_upper", al, au))
        else:
            verdicts.append(Verdict("annulus_upper", NOT_APPLICABLE))
    else:
        verdicts.append(Verdict("annulus_optimal", NOT_APPLICABLE))
        verdicts.append(Verdict("annulus_upper", NOT_APPLICABLE))

    kb = kroger_bound(d)
    verdicts.append(compare("kroger", mu2, kb, tol, applicable=bool(summary.neumann_convex is not False)))
    return BoundReport(lambda1, hs, mb, mr, MIYAMOTO_RATIO, al, au, alo, kb, tuple(verdicts))
