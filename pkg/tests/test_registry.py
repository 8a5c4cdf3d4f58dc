import json
import math
import re

import pytest

from hotspots import cli, registry
from hotspots.registry import CaseError, CaseReport, dumps, run_case, verify_all
from hotspots.shapes import make_example
from hotspots.svg import render_svg

QUICK = {"h": 0.2, "levels": 2}


@pytest.fixture(scope="module")
def rect_report():
    return run_case("rectangle", QUICK)


@pytest.fixture(scope="module")
def s2d_report():
    return run_case("square2disks", {"h": 0.1})


def test_dumps_format():
    text = dumps({"b": 0.1, "a": [1, 2.0, float("nan")], "c": {"z": None, "y": True}})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert "0.10000000000000001" in text
    assert "null" in text and "NaN" not in text
    back = json.loads(text)
    assert back["b"] == 0.1 and type(back["a"][1]) is float and back["a"][0] == 1


def test_dumps_round_trip_is_lossless():
    values = [math.pi, 1e-300, -2.5e17, 1 / 3, 0.0, 123456789.123456789]
    back = json.loads(dumps(values))
    assert back == values
    assert dumps(back) == dumps(values)


def test_report_round_trip(rect_report):
    text = rect_report.dumps()
    again = CaseReport.from_json(json.loads(text))
    assert again.dumps() == text
    assert again == rect_report


def test_report_rejects_unknown_schema(rect_report):
    data = rect_report.to_json()
    data["schema_version"] = 99
    with pytest.raises(ValueError):
        CaseReport.from_json(data)


def test_report_contents(rect_report):
    r = rect_report
    assert r.case == "rectangle" and r.anchor
    assert r.mesh["h"] == 0.2 and r.mesh["levels"] == 2
    assert r.eigen["labels"] == ["lambda1_D"]
    assert r.summary["area"] == pytest.approx(1.0)
    assert {c["label"] for c in r.checks} >= {"critical points"}
    assert r.tool_version and r.wall_time > 0
    assert r.spec == make_example("rectangle", 1.0, 1.0).to_json()


def test_reproduce(rect_report):
    again = registry.reproduce(rect_report)
    assert again.dumps(wall_time=False) == rect_report.dumps(wall_time=False)


def test_every_case_has_an_anchor_and_resolves():
    for name in registry.case_names():
        d = registry.resolve(name)
        assert d["anchor"]
        assert d["checks"]
        assert "example" in d and "mesh" in d


def test_overrides_route_to_sections():
    d = registry.definition_for("Kn", {"n": 5, "h": 0.3, "tau": 0.01})
    assert d["params"]["n"] == 5 and d["mesh"]["h"] == 0.3 and d["analysis"]["tau"] == 0.01


def test_unknown_targets():
    with pytest.raises(KeyError):
        registry.definition_for("no-such-case")
    with pytest.raises(CaseError) as info:
        run_case("rectangle", {"bogus": 1})
    assert info.value.stage == "geometry"


def test_stage_reported_on_mesh_failure():
    with pytest.raises(CaseError) as info:
        run_case("square2disks", {"h": -1.0})
    assert info.value.stage == "meshing"


def test_example_constructor_target():
    rep = run_case("lshape", QUICK)
    assert rep.case == "lshape" and rep.checks == []
    assert rep.eigen["labels"] == ["mu1", "mu2", "mu3"]
    assert abs(rep.eigenvalue("mu1")) < 1e-8
    rep = run_case("square_disk", {"cx": 0.5, "cy": 0.5, "diam": 0.2, **QUICK})
    assert rep.eigen["labels"] == ["lambda1_D"]


def test_spec_file_target(tmp_path):
    path = tmp_path / "dom.json"
    path.write_text(make_example("Kn", 3).dumps())
    rep = run_case(path, QUICK)
    assert rep.case == "dom"
    assert rep.eigen["labels"] == ["mu1", "mu2", "mu3"]


def test_verify_empty_registry():
    res = verify_all(manifest={"manifest_version": 1, "cases": []})
    assert res.rows == [] and res.ok
    assert "0/0" in res.table()


def test_verify_small_tau_keeps_forced_critical_point():
    res = verify_all(tau=1e-6, cases=["square2disks"])
    (row,) = res.rows
    assert row.passed and row.verdict == "CRITICAL_POINTS_FOUND"


def test_verify_reports_failures_as_rows():
    manifest = registry.load_manifest()
    bad = {"name": "bad", "example": "rectangle", "params": {}, "anchor": "x", "mesh": {"h": 0.2, "levels": 2},
           "checks": [{"kind": "close", "label": "wrong", "value": "lambda1_D", "target": "pi_squared", "rel": 1e-3}]}
    res = verify_all(cases=["bad"], manifest={"cases": [*manifest["cases"], bad]})
    assert not res.ok and res.rows[0].failed == ["wrong"]


def test_svg_square2disks(s2d_report):
    svg = render_svg(s2d_report)
    assert svg == render_svg(s2d_report)
    assert svg.startswith("<?xml")
    assert svg.count("<circle") == 1
    assert 'id="dirichlet"' in svg
    assert len(re.findall(r'<path fill="#', svg)) == 10
    # the marker sits at the centre of the square
    cx, cy = map(float, re.search(r'<circle cx="([\d.]+)" cy="([\d.]+)"', svg).groups())
    assert cx == pytest.approx(320.0) and cy == pytest.approx(320.0)


def test_svg_without_critical_points(rect_report):
    svg = render_svg(rect_report)
    assert "<circle" not in svg and 'id="dirichlet"' in svg


def test_svg_wild_draws_gamma():
    rep = run_case("wild", {"h": 0.2, "levels": 2})
    svg = render_svg(rep)
    d = re.search(r'id="dirichlet"[^>]* d="([^"]+)"', svg).group(1)
    # five zigzag legs of gamma, each split into mesh edges
    assert d.count("M") >= 5


def test_svg_needs_field(rect_report):
    data = rect_report.to_json()
    data["field"] = None
    with pytest.raises(ValueError):
        render_svg(data)


def test_cli_list(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    assert "square2disks" in out and "Kn_6" in out


def test_cli_case_writes_outputs(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HOTSPOTS_THREADS", "1")
    out, svg = tmp_path / "r.json", tmp_path / "r.svg"
    rc = cli.main(["case", "rectangle", "--param", "h=0.2", "--param", "levels=2", "--out", str(out), "--svg", str(svg)])
    assert rc == 0
    assert "critical points" in capsys.readouterr().out
    assert CaseReport.load(out).case == "rectangle"
    assert svg.read_text().startswith("<?xml")


def test_cli_solve_and_bounds(tmp_path, capsys):
    path = tmp_path / "dom.json"
    path.write_text(make_example("disk_arc", 1.0).dumps())
    assert cli.main(["solve", str(path), "--param", "h=0.2", "--param", "levels=2", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["critical_points"]["verdict"] == "NO_INTERIOR_CRITICAL_POINTS"
    assert cli.main(["bounds", str(path), "--lambda1", "0.6"]) == 0
    b = json.loads(capsys.readouterr().out)
    names = {v["name"]: v["verdict"] for v in b["bounds"]["verdicts"]}
    assert names["hotspots"] == "HOLDS" and names["miyamoto"] == "HOLDS"
    assert cli.main(["bounds", str(path), "--lambda1", "5.0"]) == 1


def test_cli_errors(capsys):
    assert cli.main(["case", "no-such-case"]) == 2
    assert "error" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        cli.main(["case", "rectangle", "--param", "novalue"])


def test_cli_verify_subset(capsys):
    assert cli.main(["verify", "--case", "rectangle"]) == 0
    assert "1/1 cases passed" in capsys.readouterr().out
