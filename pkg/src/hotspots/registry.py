"""Case registry, the end-to-end pipeline and the JSON report format.

A case definition is a plain dict (see ``cases.json``) naming a shape
constructor and its parameters, the mesh/solver settings and a list of
checks.  :func:`run_definition` runs geometry, meshing on nested levels,
the eigen-solve, critical-point analysis and the closed-form bounds, then
evaluates the checks.  Reports serialize with sorted keys and 17
significant digits so identical inputs give identical bytes.
"""

from __future__ import annotations

import copy
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field as dc_field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    comparison_field,
    find_critical_points,
    nodal_set,
    symmetry_check,
)
from .bessel import J0_FIRST_ZERO
from .bounds import evaluate_bounds
from .fem import solve_levels
from .geometry import DomainSpec, epsilon_threshold, summarize
from .meshing import DIRICHLET, NEUMANN, connectivity, dirichlet_geometry_error, levels, triangulate
from .shapes import EXAMPLES

SCHEMA_VERSION = 1

PIPELINE_KEYS = {
    "h": ("mesh", "h"),
    "levels": ("mesh", "levels"),
    "grading": ("mesh", "grading"),
    "use_symmetry": ("mesh", "use_symmetry"),
    "k": ("solve", "k"),
    "field": ("solve", "field"),
    "tau": ("analysis", "tau"),
    "delta_factor": ("analysis", "delta_factor"),
}

CONSTANTS = {
    "j0_squared": J0_FIRST_ZERO**2,
    "pi_squared": math.pi**2,
    "quarter_pi_squared": (math.pi / 2) ** 2,
}


class CaseError(RuntimeError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, case: str, stage: str, exc: BaseException):
        super().__init__(f"case {case!r} failed in stage {stage!r}: {exc}")
        self.case = case
        self.stage = stage


# ----------------------------------------------------------------------------
# deterministic JSON
# ----------------------------------------------------------------------------


def plain(obj):
    """Convert numpy scalars/arrays and tuples into JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _emit(obj, out: list, indent: int, depth: int) -> None:
    pad = "\n" + " " * (indent * (depth + 1)) if indent else ""
    end = "\n" + " " * (indent * depth) if indent else ""
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            out.append("null")
        else:
            text = "%.17g" % obj
            # keep floats floats on reload
            out.append(text if any(c in text for c in ".en") else text + ".0")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        # numeric rows stay on one line
        flat = all(not isinstance(v, (list, dict)) for v in obj)
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", " if flat else ",")
            if not flat:
                out.append(pad)
            _emit(v, out, indent, depth + 1)
        if not flat:
            out.append(end)
        out.append("]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, k in enumerate(sorted(obj)):
            if i:
                out.append(",")
            out.append(pad)
            out.append(json.dumps(k, ensure_ascii=False))
            out.append(": ")
            _emit(obj[k], out, indent, depth + 1)
        out.append(end)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 1) -> str:
    """Serialize with sorted keys, floats as ``%.17g`` and non-finite floats as null."""
    out: list[str] = []
    _emit(plain(obj), out, indent, 0)
    return "".join(out) + "\n"


# ----------------------------------------------------------------------------
# the report
# ----------------------------------------------------------------------------


@dataclass
class CaseReport:
    """Everything one pipeline run produced, as JSON-ready data."""

    case: str
    anchor: str
    definition: dict
    spec: dict
    summary: dict
    bounds: dict
    eigen: dict
    critical_points: dict
    mesh: dict
    checks: list
    field: dict | None = None
    tool_version: str = __version__
    wall_time: float | None = None
    schema_version: int = SCHEMA_VERSION
    extra: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [c["label"] for c in self.checks if not c["passed"]]

    @property
    def verdict(self) -> str:
        return self.critical_points["verdict"]

    def eigenvalue(self, label: str) -> float:
        return self.eigen["values"][self.eigen["labels"].index(label)]

    def to_json(self) -> dict:
        return plain(
            {
                "schema_version": self.schema_version,
                "case": self.case,
                "anchor": self.anchor,
                "definition": self.definition,
                "spec": self.spec,
                "summary": self.summary,
                "bounds": self.bounds,
                "eigen": self.eigen,
                "critical_points": self.critical_points,
                "mesh": self.mesh,
                "checks": self.checks,
                "field": self.field,
                "tool_version": self.tool_version,
                "wall_time": self.wall_time,
                "extra": self.extra,
            }
        )

    @classmethod
    def from_json(cls, d: dict) -> "CaseReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        return cls(**d)

    def dumps(self, wall_time: bool = True) -> str:
        data = self.to_json()
        if not wall_time:
            data["wall_time"] = None
        return dumps(data)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path) -> "CaseReport":
        return cls.from_json(json.loads(Path(path).read_text()))


# ----------------------------------------------------------------------------
# manifest
# ----------------------------------------------------------------------------


def load_manifest(path=None) -> dict:
    """The pinned case manifest (package data unless ``path`` is given)."""
    if path is None:
        text = resources.files("hotspots").joinpath("cases.json").read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "params":
            out[k] = _merge(out[k], v)
        elif k == "params" and isinstance(out.get(k), dict):
            out[k] = {**out[k], **v}
        else:
            out[k] = copy.deepcopy(v)
    return out


def case_names(manifest: dict | None = None) -> list[str]:
    manifest = load_manifest() if manifest is None else manifest
    return [c["name"] for c in manifest["cases"]]


def resolve(name: str, manifest: dict | None = None) -> dict:
    """Fully merged definition of a registered case (``base`` chains applied)."""
    manifest = load_manifest() if manifest is None else manifest
    table = {c["name"]: c for c in manifest["cases"]}
    if name not in table:
        raise KeyError(f"unknown case {name!r}")
    entry = table[name]
    if "base" in entry:
        base = resolve(entry["base"], manifest)
        over = {k: v for k, v in entry.items() if k != "base"}
        return _merge(base, over)
    return copy.deepcopy(entry)


def _default_definition(name: str, spec: DomainSpec | None = None, example: str | None = None) -> dict:
    neumann = spec is not None and not spec.dirichlet
    d = {
        "name": name,
        "anchor": "user supplied domain",
        "mesh": {"h": None, "levels": 3, "grading": True, "use_symmetry": True},
        "solve": {"k": 3 if neumann else 1, "field": 1 if neumann else 0},
        "analysis": {"tau": 0.02, "delta_factor": 2.0},
        "bounds": {"ball": None},
        "checks": [],
    }
    if example is not None:
        d["example"] = example
        d["params"] = {}
    if spec is not None:
        d["spec"] = spec.to_json()
    return d


def parse_value(text: str):
    """``--param`` values: JSON literals where possible, strings otherwise."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(defn: dict, overrides: dict | None) -> dict:
    """Route ``h``/``levels``/``k``/``tau``/... to their sections, everything else to ``params``."""
    defn = copy.deepcopy(defn)
    for k, v in (overrides or {}).items():
        if k in PIPELINE_KEYS:
            sec, key = PIPELINE_KEYS[k]
            defn.setdefault(sec, {})[key] = v
        else:
            if "params" not in defn:
                raise KeyError(f"case {defn['name']!r} takes no shape parameter {k!r}")
            defn["params"][k] = v
    return defn


def definition_for(target, overrides: dict | None = None, manifest: dict | None = None) -> dict:
    """Definition for a registered case, an example constructor name, or a spec JSON file."""
    manifest = load_manifest() if manifest is None else manifest
    target = str(target)
    if target in case_names(manifest):
        defn = resolve(target, manifest)
    elif target in EXAMPLES:
        defn = apply_overrides(_default_definition(target, example=target), overrides)
        try:
            spec = build_spec(defn)
        except Exception:
            return defn  # reported by the geometry stage
        if not spec.dirichlet:
            solve = {"k": 3, "field": 1}
            solve.update({k: v for k, v in (overrides or {}).items() if k in solve})
            defn["solve"] = solve
        return defn
    else:
        path = Path(target)
        if not path.exists():
            raise KeyError(f"{target!r} is neither a registered case, an example, nor a spec file")
        spec = DomainSpec.load(path)
        defn = _default_definition(path.stem, spec)
    return apply_overrides(defn, overrides)


def _substitute(obj, params: dict):
    if isinstance(obj, str) and obj.startswith("$"):
        key = obj[1:]
        if key not in params:
            raise KeyError(f"unbound parameter {obj}")
        return params[key]
    if isinstance(obj, dict):
        return {k: _substitute(v, params) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_substitute(v, params) for v in obj]
    return obj


def build_spec(defn: dict) -> DomainSpec:
    if "spec" in defn:
        return DomainSpec.from_json(defn["spec"])
    fn = EXAMPLES[defn["example"]]
    return fn(**defn.get("params", {}))


# ----------------------------------------------------------------------------
# checks
# ----------------------------------------------------------------------------


@dataclass
class _Context:
    defn: dict
    spec: DomainSpec
    summary: object
    bounds: object
    level_solve: object
    critical: object
    quantities: dict

    def q(self, key):
        if isinstance(key, (int, float)):
            return float(key)
        if key not in self.quantities:
            raise KeyError(f"unknown quantity {key!r}")
        return self.quantities[key]

    def abs_err(self, key) -> float:
        if isinstance(key, str):
            v = self.quantities.get(f"{key}_abs_error")
            if v is not None and math.isfinite(v):
                return v
        return 0.0

    def rel_err(self, key) -> float:
        if isinstance(key, str):
            v = self.quantities.get(f"{key}_rel_error")
            if v is not None and math.isfinite(v):
                return v
        return 0.0


def _result(chk: dict, passed: bool, value=None, target=None, **detail) -> dict:
    label = chk.get("label") or chk["kind"]
    return plain(
        {
            "kind": chk["kind"],
            "label": label,
            "passed": bool(passed),
            "value": value,
            "target": target,
            "detail": detail,
        }
    )


def _check_close(ctx: _Context, chk: dict) -> dict:
    v, t = ctx.q(chk["value"]), ctx.q(chk["target"])
    rel = abs(v - t) / abs(t)
    return _result(chk, rel <= chk["rel"], v, t, rel_diff=rel, rel_tol=chk["rel"])


def _slack_allowance(ctx: _Context, chk: dict, bound: float) -> float:
    mode = chk.get("slack", "abs3")
    if mode == "abs3":
        return 3.0 * ctx.abs_err(chk["value"])
    if mode == "rel3":
        return 3.0 * ctx.rel_err(chk["value"]) * bound
    if mode == "none":
        return 0.0
    raise ValueError(f"unknown slack mode {mode!r}")


def _check_below(ctx: _Context, chk: dict) -> dict:
    v, b = ctx.q(chk["value"]), ctx.q(chk["bound"])
    allow = _slack_allowance(ctx, chk, b)
    return _result(chk, v <= b + allow, v, b, slack=b - v, allowance=allow)


def _check_strictly_below(ctx: _Context, chk: dict) -> dict:
    v, b = ctx.q(chk["value"]), ctx.q(chk["bound"])
    margin = 3.0 * ctx.abs_err(chk["value"])
    return _result(chk, b - v > margin, v, b, slack=b - v, required=margin)


def _check_bracket(ctx: _Context, chk: dict) -> dict:
    lo, v, hi = ctx.q(chk["lower"]), ctx.q(chk["value"]), ctx.q(chk["upper"])
    return _result(chk, lo <= v <= hi, v, [lo, hi])


def _finest(ctx: _Context):
    return ctx.level_solve.finest


def _check_critical(ctx: _Context, chk: dict) -> dict:
    rep = ctx.critical
    want = chk["verdict"]
    ok = rep.verdict == want
    detail = {"verdict": rep.verdict, "candidates": len(rep.candidates)}
    if ok and "at" in chk:
        mesh = _finest(ctx).mesh
        p = np.asarray(chk["at"], float)
        reach = chk.get("radius", 2.0 * mesh.h / 2**mesh.level)
        near = [c for c in rep.candidates if np.hypot(*(np.asarray(c.location) - p)) <= reach]
        ok = bool(near)
        if near:
            c = min(near, key=lambda c: np.hypot(*(np.asarray(c.location) - p)))
            detail.update(location=list(c.location), ratio=c.ratios[-1], classification=c.classification, confirmed=c.confirmed)
            if "max_ratio" in chk:
                ok = ok and c.ratios[-1] <= chk["max_ratio"]
            if "classification" in chk:
                ok = ok and c.classification in chk["classification"]
    return _result(chk, ok, rep.verdict, want, **detail)


def _check_simple(ctx: _Context, chk: dict) -> dict:
    ex = ctx.level_solve.extrapolation
    i = int(chk["index"])
    v = np.asarray(ex.value, float)
    if i + 1 >= len(v):
        raise ValueError("simplicity check needs the next eigenvalue; raise k")
    scale = abs(v[i])
    gaps = [(v[i + 1] - v[i]) / scale]
    if i > 0:
        gaps.append((v[i] - v[i - 1]) / scale)
    need = 10.0 * float(ex.rel_error[i])
    gap = min(gaps)
    return _result(chk, gap > need, gap, need)


def _check_symmetry(ctx: _Context, chk: dict) -> dict:
    sol = _finest(ctx)
    u = sol.fields[int(chk.get("field", ctx.defn["solve"].get("field", 0)))]
    res = symmetry_check(sol.mesh, u, chk["op"], chk.get("center", (0.0, 0.0)), chk.get("tol", 1e-2))
    dev = res.even_deviation if chk["parity"] == "even" else res.odd_deviation
    return _result(chk, res.verdict == chk["parity"] and dev <= chk.get("tol", 1e-2), dev, chk.get("tol", 1e-2), verdict=res.verdict)


def _check_nodal_line(ctx: _Context, chk: dict) -> dict:
    sol = _finest(ctx)
    mesh = sol.mesh
    u = sol.fields[int(chk.get("field", ctx.defn["solve"].get("field", 0)))]
    ns = nodal_set(mesh, u)
    a = np.asarray(chk["segment"][:2], float)
    b = np.asarray(chk["segment"][2:], float)
    pts = np.vstack(ns.polylines) if ns.polylines else np.zeros((0, 2))
    t = np.clip(((pts - a) @ (b - a)) / ((b - a) @ (b - a)), 0, 1)
    dist = np.hypot(*(pts - (a + t[:, None] * (b - a))).T) if len(pts) else np.zeros(0)
    cell = mesh.h / 2**mesh.level
    worst = float(dist.max()) if len(dist) else math.inf
    ok = worst <= cell and ns.domains == chk.get("domains", ns.domains)
    return _result(chk, ok, worst, cell, domains=ns.domains, polylines=len(ns.polylines))


def _check_comparison(ctx: _Context, chk: dict) -> dict:
    cf = comparison_field(_finest(ctx), chk["at"])
    ok = cf.components >= chk["min_components"]
    if chk.get("dirichlet_positive"):
        ok = ok and cf.dirichlet_min is not None and cf.dirichlet_min > 0
    return _result(chk, ok, cf.components, chk["min_components"], dirichlet_min=cf.dirichlet_min, point=list(cf.point))


def _check_geometry(ctx: _Context, chk: dict) -> dict:
    v = ctx.q(chk["property"])
    return _result(chk, v == chk["expect"], v, chk["expect"])


def _check_companion(ctx: _Context, chk: dict) -> dict:
    sub = {
        "name": f"{ctx.defn['name']}:companion",
        "example": chk["example"],
        "params": chk.get("params", {}),
        "mesh": ctx.defn["mesh"],
    }
    spec = build_spec(sub)
    res = _solve(spec, sub["mesh"], k=1)
    cv = float(res.value[0])
    v = ctx.q(chk["value"])
    rel = abs(v - cv) / abs(cv)
    return _result(chk, rel <= chk["rel"], v, cv, rel_diff=rel, companion_abs_error=float(res.extrapolation.abs_error[0]))


CHECKS = {
    "close": _check_close,
    "below": _check_below,
    "strictly_below": _check_strictly_below,
    "bracket": _check_bracket,
    "critical": _check_critical,
    "simple": _check_simple,
    "symmetry": _check_symmetry,
    "nodal_line": _check_nodal_line,
    "comparison": _check_comparison,
    "geometry": _check_geometry,
    "companion": _check_companion,
}


# ----------------------------------------------------------------------------
# pipeline
# ----------------------------------------------------------------------------


def _mesh_h(spec: DomainSpec, mesh_cfg: dict, d: float) -> float:
    h = mesh_cfg.get("h")
    return float(h) if h else d / 20.0


def _meshes(spec: DomainSpec, mesh_cfg: dict, d: float):
    grading = None if mesh_cfg.get("grading", True) else False
    m0 = triangulate(spec, _mesh_h(spec, mesh_cfg, d), grading, mesh_cfg.get("use_symmetry", True))
    return levels(m0, int(mesh_cfg.get("levels", 3)))


def _solve(spec: DomainSpec, mesh_cfg: dict, k: int):
    from .geometry import diameter

    return solve_levels(meshes=_meshes(spec, mesh_cfg, diameter(spec)), k=k)


def _field_payload(sol0, u0, candidates) -> dict:
    mesh = sol0.mesh
    b = mesh.boundary_edges
    payload = {
        "vertices": mesh.vertices,
        "triangles": mesh.triangles,
        "values": u0,
        "dirichlet_edges": np.vstack([b[mesh.boundary_tags == DIRICHLET], mesh.interior_edges.reshape(-1, 2)]),
        "neumann_edges": b[mesh.boundary_tags == NEUMANN],
        "nodal_lines": [],
        "markers": [list(c["location"]) for c in candidates],
    }
    try:
        payload["nodal_lines"] = [pl for pl in nodal_set(mesh, u0).polylines]
    except ValueError:
        pass
    return payload


def run_definition(defn: dict) -> CaseReport:
    """Run the full pipeline for one case definition."""
    t0 = time.perf_counter()
    name = defn["name"]
    stage = "geometry"
    try:
        params = defn.get("params", {})
        defn = dict(defn)
        defn["checks"] = _substitute(defn.get("checks", []), params)
        defn["bounds"] = _substitute(defn.get("bounds", {}), params)
        for sec in ("mesh", "solve", "analysis"):
            defn.setdefault(sec, {})
        spec = build_spec(defn)
        ball = defn["bounds"].get("ball")
        summary = summarize(spec, ball=ball, checks=True)

        stage = "meshing"
        meshes = _meshes(spec, defn["mesh"], summary.diameter)
        components = connectivity(meshes[0])
        geo_err = dirichlet_geometry_error(meshes[0])

        stage = "solve"
        k = int(defn["solve"].get("k", 1))
        fidx = int(defn["solve"].get("field", 0))
        res = solve_levels(meshes=meshes, k=k)
        ex = res.extrapolation
        fin = res.finest

        stage = "analysis"
        an = defn["analysis"]
        crit = find_critical_points(
            res.solutions, tau=float(an.get("tau", 0.02)), delta_factor=float(an.get("delta_factor", 2.0)), index=fidx
        )

        stage = "bounds"
        labels = fin.labels
        neumann = fin.neumann
        lam1 = None if neumann else float(ex.value[0])
        err1 = 0.0 if neumann else float(ex.abs_error[0])
        mu2 = float(ex.value[1]) if neumann and k >= 2 else None
        if mu2 is not None:
            err1 = float(ex.abs_error[1])
        br = evaluate_bounds(summary, lam1, err1, mu2)

        stage = "checks"
        qs = dict(CONSTANTS)
        qs.update({key: val for key, val in br.to_json().items() if key != "verdicts"})
        qs.update(
            diameter=summary.diameter,
            area=summary.area,
            R1=summary.R1,
            R2=summary.R2,
            epsilon_threshold=epsilon_threshold(summary),
            neumann_convex=summary.neumann_convex,
            dirichlet_connected=summary.dirichlet_connected,
            omega_components=components,
        )
        for i, lab in enumerate(labels):
            qs[lab] = float(ex.value[i])
            qs[f"{lab}_abs_error"] = float(ex.abs_error[i])
            qs[f"{lab}_rel_error"] = float(ex.rel_error[i])
        ctx = _Context(defn, spec, summary, br, res, crit, qs)
        checks = []
        for chk in defn["checks"]:
            fn = CHECKS.get(chk["kind"])
            if fn is None:
                raise ValueError(f"unknown check kind {chk['kind']!r}")
            checks.append(fn(ctx, chk))

        stage = "report"
        cp = crit.to_json()
        payload = _field_payload(res.solutions[0], res.solutions[0].fields[fidx], cp["candidates"])
        report = CaseReport(
            case=name,
            anchor=defn.get("anchor", ""),
            definition=defn,
            spec=spec.to_json(),
            summary=summary.to_json(),
            bounds=br.to_json(),
            eigen={
                "labels": labels,
                "values": ex.value,
                "abs_error": ex.abs_error,
                "rel_error": ex.rel_error,
                "order": ex.order,
                "monotone": ex.monotone,
                "per_level": [s.eigenvalues for s in res.solutions],
                "field": fidx,
            },
            critical_points=cp,
            mesh={
                "h": _mesh_h(spec, defn["mesh"], summary.diameter),
                "levels": len(meshes),
                "grading": bool(defn["mesh"].get("grading", True)),
                "use_symmetry": bool(defn["mesh"].get("use_symmetry", True)),
                "vertices": [m.n_vertices for m in meshes],
                "triangles": [m.n_triangles for m in meshes],
                "min_angle": [m.min_angle() for m in meshes],
                "components": components,
                "dirichlet_geometry_error": geo_err,
            },
            checks=checks,
            field=payload,
        )
    except CaseError:
        raise
    except Exception as exc:
        raise CaseError(name, stage, exc) from exc
    report.wall_time = time.perf_counter() - t0
    # normalise through JSON so in-memory and loaded reports compare equal
    return CaseReport.from_json(json.loads(report.dumps()))


def run_case(target, overrides: dict | None = None, manifest: dict | None = None) -> CaseReport:
    """Run a registered case, an example constructor, or a spec JSON file."""
    return run_definition(definition_for(target, overrides, manifest))


def reproduce(report: CaseReport) -> CaseReport:
    """Re-run the embedded definition; the result should match byte for byte (wall time aside)."""
    return run_definition(report.definition)


# ----------------------------------------------------------------------------
# batch
# ----------------------------------------------------------------------------


@dataclass
class VerifyRow:
    case: str
    passed: bool
    checks: int
    failed: list
    verdict: str | None
    wall_time: float | None
    error: str | None = None


@dataclass
class VerifyResult:
    rows: list
    profile: str

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)

    def table(self) -> str:
        lines = [f"{'case':28s} {'result':6s} {'checks':>6s} {'time/s':>8s}  verdict / failures"]
        for r in self.rows:
            status = "PASS" if r.passed else "FAIL"
            t = f"{r.wall_time:8.1f}" if r.wall_time is not None else " " * 8
            note = r.error or (", ".join(r.failed) if r.failed else (r.verdict or ""))
            lines.append(f"{r.case:28s} {status:6s} {r.checks:6d} {t}  {note}")
        n_ok = sum(r.passed for r in self.rows)
        lines.append(f"{n_ok}/{len(self.rows)} cases passed ({self.profile} profile)")
        return "\n".join(lines)


def _verify_one(args) -> VerifyRow:
    name, defn = args
    try:
        rep = run_definition(defn)
    except CaseError as exc:
        return VerifyRow(name, False, 0, [], None, None, str(exc))
    return VerifyRow(name, rep.passed, len(rep.checks), rep.failed, rep.verdict, rep.wall_time)


def select_cases(profile: str = "fast", manifest: dict | None = None) -> list[str]:
    manifest = load_manifest() if manifest is None else manifest
    if profile not in ("fast", "full"):
        raise ValueError("profile must be 'fast' or 'full'")
    names = []
    for entry in manifest["cases"]:
        if entry.get("template"):
            continue
        prof = resolve(entry["name"], manifest).get("profile", "fast")
        if profile == "full" or prof == "fast":
            names.append(entry["name"])
    return names


def verify_all(
    profile: str = "fast",
    tau: float | None = None,
    cases: list[str] | None = None,
    manifest: dict | None = None,
    jobs: int = 1,
) -> VerifyResult:
    """Run every selected registry case; failures are rows, never exceptions."""
    manifest = load_manifest() if manifest is None else manifest
    names = select_cases(profile, manifest) if cases is None else list(cases)
    over = {} if tau is None else {"tau": tau}
    work = [(n, definition_for(n, over, manifest)) for n in names]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_verify_one, work))
    else:
        rows = [_verify_one(w) for w in work]
    return VerifyResult(rows, profile)
