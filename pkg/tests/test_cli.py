from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from dehnkit import __version__
from dehnkit.cli import V2788_H, V2788_V, run


def call(*argv: str) -> tuple[int, dict | str]:
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    text = buf.getvalue()
    try:
        return code, json.loads(text)
    except json.JSONDecodeError:
        return code, text


@pytest.fixture
def mats(tmp_path):
    paths = {}
    for name, obj in {
        "v": V2788_V.to_json(),
        "h": V2788_H.to_json()["rows"],
        "float": [[0.5, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        "small": [["1", "0"], ["0", "1"]],
        "demo": [["1/2", "1"], ["3/4", "-1/2"]],
        "gens": {"generators": [V2788_V.to_json()["rows"], [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]]},
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        paths[name] = str(p)
    (tmp_path / "broken.json").write_text("{not json")
    paths["broken"] = str(tmp_path / "broken.json")
    return paths


def test_classify_v2788(mats):
    code, rep = call("classify", "--matrix", mats["v"], "--tau", "sqrt(-2)")
    assert code == 0
    assert set(rep) == {"command", "inputs", "inputs_digest", "results", "verdicts", "version"}
    assert rep["version"] == __version__
    r = rep["results"]
    assert r["type"] == "III" and r["min_poly"] == "x^2-x+1" and r["template"] == "III/sqrt-2/b-"
    assert r["field_D"] == -2 and r["aut_necessary"] == "RootsOfUnity"


def test_classify_infers_shapes(mats):
    code, rep = call("classify", "--matrix", mats["h"])
    assert code == 0 and rep["results"]["template"] == "III/sqrt-2/a"
    assert len(rep["results"]["cusp_shapes"]) == 2


def test_output_is_deterministic(mats):
    a = call("classify", "--matrix", mats["v"], "--tau", "sqrt(-2)")
    b = call("classify", "--matrix", mats["v"], "--tau", "sqrt(-2)")
    assert a == b
    _, c = call("classify", "--matrix", mats["h"], "--tau", "sqrt(-2)")
    assert c["inputs_digest"] != a[1]["inputs_digest"]


@pytest.mark.parametrize(
    "argv,code,error",
    [
        (("classify", "--matrix", "FLOAT"), 2, "malformed rational"),
        (("classify", "--matrix", "BROKEN"), 2, "malformed JSON"),
        (("classify", "--matrix", "/nonexistent.json"), 2, "cannot read"),
        (("classify", "--matrix", "SMALL"), 2, "4x4"),
        (("classify", "--matrix", "V", "--tau", "sqrt(2)"), 2, None),
        (("group", "--scenario", "TypeI_II", "--field", "-3", "--cap", "10"), 3, "cap"),
        (("group", "--scenario", "generic", "--field", "-3"), 3, None),
        (("group", "--scenario", "nonsense"), 3, "unknown scenario"),
        (("symmetry", "--scenario", "generic", "--field", "-7", "--pair", "5/7"), 2, None),
        (("dependent", "--field", "-3", "--pair", "5/7,3/11", "--sigmas", "SMALL"), 2, None),
        (("funceq", "--matrix", "DEMO", "--field", "-1", "--degree", "4"), 2, "even"),
    ],
)
def test_error_exit_codes(mats, argv, code, error):
    argv = tuple(mats[a.lower()] if a.isupper() else a for a in argv)
    got, rep = call(*argv)
    assert got == code
    assert "error" in rep
    if error:
        assert error in rep["error"]


def test_malformed_rational_detail(mats):
    _, rep = call("classify", "--matrix", mats["float"])
    assert rep["error"] == "malformed rational" and rep["detail"].startswith("malformed rational")


def test_group_verify_reports_checks():
    code, rep = call("group", "--scenario", "sqrt2_III", "--verify")
    assert code == 0
    assert rep["results"]["order"] == 48
    v = rep["verdicts"]
    assert v["iota M iota M = M^3 iota"] == "pass"
    assert v["closed"] == "pass"


def test_group_from_generators(mats):
    code, rep = call("group", "--generators", mats["gens"], "--verify", "--kind", "sqrt2")
    assert code == 0
    assert rep["results"]["order"] == 48


def test_symmetry_command():
    code, rep = call("symmetry", "--scenario", "TypeI_II", "--field", "-3", "--pair", "5/7,3/11")
    assert code == 0 and rep["results"]["count"] == 18
    code, rep = call("symmetry", "--scenario", "sqrt1_III_pair", "--pair", "5/7,3/11", "--apply-filters")
    assert rep["results"]["count"] == 8


def test_dependent_command():
    code, rep = call("dependent", "--field", "-3", "--pair", "5/7,3/11", "--mode", "SGI")
    assert code == 0 and rep["results"]["count"] == 9
    _, rep = call("dependent", "--field", "-5", "--pair", "5/7,3/11")
    assert rep["results"]["count"] == 1


def test_funceq_command(mats):
    code, rep = call("funceq", "--matrix", mats["demo"], "--field", "-1", "--a", "3/4")
    assert code == 0
    r = rep["results"]
    assert r["kernel_dim"] == 4 and r["filtered_dim"] == 1
    assert r["split"][0]["full"] is True


def test_funceq_on_block_matrix(mats):
    code, rep = call("funceq", "--matrix", mats["v"], "--tau", "sqrt(-2)")
    assert code == 0 and rep["results"]["field_D"] == -2


def test_examples_all_pass():
    code, rep = call("examples")
    assert code == 0
    assert all(v == "pass" for v in rep["verdicts"].values())
    assert rep["results"]["symmetry_counts"]["D=-3"]["count"] == 18


def test_summary_mode():
    code, text = call("group", "--scenario", "generic", "--field", "-7", "--summary")
    assert code == 0 and isinstance(text, str)
    assert "order: 8" in text


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "dehnkit", "group", "--scenario", "generic", "--field", "-7"],
        capture_output=True, text=True, check=False,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["order"] == 8


def test_usage_error_exit_code():
    assert run(["bogus-command"], out=io.StringIO()) == 2
