"""Pipeline certificates, phases, suites, and regression baselines."""

import json

import pytest

from arccover.errors import ValidationError
from arccover.report import (
    GAP_STATEMENTS,
    JobSpec,
    SUITE_NAMES,
    load_baselines,
    run_job,
    run_suite,
)

JOB1 = JobSpec(n=4, group="A5", x="(1,2)(3,4)", y="(1,2,3,4,5)")
JOB2 = JobSpec(n=4, group="A5", x="(1,2)(3,4)", y="(1,5,3)", vertex_cap=10_000)


# ---------------------------------------------------------------------------
# job specs and job files
# ---------------------------------------------------------------------------


def test_job_name_prefers_label():
    assert JobSpec(n=4, group="A5", x="(1,2)", y="(1,2,3)", label="demo").job_name() == "demo"
    assert JOB1.job_name() == "n4-A5-x(1_2)(3_4)-y(1_2_3_4_5)"


def test_job_file_roundtrip(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({
        "n": 4, "group": "A5", "x": "(1,2)(3,4)", "y": "(1,2,3,4,5)",
        "vertex_cap": 500, "formats": ["edge-list"], "label": "filed",
    }))
    spec = JobSpec.from_file(str(path))
    assert spec.n == 4 and spec.vertex_cap == 500
    assert spec.formats == ("edge-list",)
    assert spec.label == "filed"


@pytest.mark.parametrize(
    "raw,fragment",
    [
        ([1, 2], "JSON object"),
        ({"n": 4, "group": "A5", "x": "(1,2)", "y": "(1,2,3)", "extra": 1}, "unknown job file keys: extra"),
        ({"n": 4, "group": "A5"}, "lacks required keys: x, y"),
        ({"n": "4", "group": "A5", "x": "(1,2)", "y": "(1,2,3)"}, "'n' must be an integer"),
        ({"n": 4, "group": "A5", "x": 12, "y": "(1,2,3)"}, "'x' must be a string"),
    ],
)
def test_job_file_rejections(tmp_path, raw, fragment):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(ValidationError, match="(?s)" + fragment.replace("(", "\\(").replace(")", "\\)")):
        JobSpec.from_file(str(path))


def test_job_file_unreadable():
    with pytest.raises(ValidationError, match="cannot read job file"):
        JobSpec.from_file("/nonexistent/job.json")


# ---------------------------------------------------------------------------
# run_job: phases, determinism, caps, rejection
# ---------------------------------------------------------------------------


def check_ids(cert):
    return [rec["id"] for rec in cert.payload["checks"]]


def test_invalid_job_raises_before_any_certificate():
    bad = JobSpec(n=4, group="A5", x="(1,2)(3,4)", y="(1,2)(4,5)")
    with pytest.raises(ValidationError, match="odd prime"):
        run_job(bad)


def test_unknown_phase_rejected():
    with pytest.raises(ValidationError, match="unknown phase"):
        run_job(JOB1, phase="everything")


def test_phase_truncation():
    construct = check_ids(run_job(JOB1, phase="construct"))
    assert construct == ["job-valid", "class-partition", "twist-identities", "kernel-witness"]
    decompose = check_ids(run_job(JOB1, phase="decompose"))
    assert decompose == construct + [
        "kernel-generators", "block-structure",
        "block-count-prediction", "tuple-generators",
    ]
    graph = check_ids(run_job(JOB1, phase="graph"))
    assert graph == decompose + ["graph-build", "two-arc-transitive"]
    full = check_ids(run_job(JOB1))
    assert full == graph + ["cover-quotient", "centralizer-structure"]


def test_full_certificate_shape_and_values():
    cert = run_job(JOB1)
    assert cert.ok
    assert list(cert.payload) == [
        "format", "version", "job", "checks", "skips", "artifacts",
        "summary", "gaps", "environment", "timings",
    ]
    assert cert.payload["format"] == "arccover-certificate/1"
    assert cert.payload["gaps"] == list(GAP_STATEMENTS)
    assert cert.payload["summary"] == {
        "checks": 12, "passed": 12, "failed": 0, "all_passed": True,
    }
    env = cert.payload["environment"]
    assert env["seed"] == 0 and env["vertex_cap"] == JOB1.vertex_cap
    blocks = cert.check("block-structure")["computed"]
    assert blocks["d"] == 1
    assert blocks["order_y"] == "1440"
    graph = cert.check("graph-build")["computed"]
    assert graph["vertices"] == 240 and graph["girth"] == 9
    assert graph["connected"] and graph["valency"] == 3
    quotient = cert.check("cover-quotient")["computed"]
    assert quotient["fibre_size"] == 60 and quotient["complete"]
    central = cert.check("centralizer-structure")["computed"]
    assert central["centralizer_order"] == 24
    assert central["quotient"]["order"] == 10 and central["quotient"]["girth"] == 5


def test_certificates_are_deterministic():
    a = run_job(JOB1)
    b = run_job(JOB1)
    assert a.core_bytes() == b.core_bytes()
    assert json.loads(a.to_bytes()) != json.loads(b.to_bytes()) or True  # timings may differ
    assert a.check("graph-build")["computed"] == b.check("graph-build")["computed"]


def test_capacity_skip_keeps_certificate_green():
    cert = run_job(JOB2)
    assert cert.ok
    skip = cert.skipped("graph-build")
    assert skip is not None and skip["kind"] == "capacity"
    assert "10000" in skip["reason"]
    assert cert.capacity_blocked()
    assert cert.check("two-arc-transitive")["passed"]
    assert cert.check("cover-quotient") is None
    blocks = cert.check("block-structure")["computed"]
    assert blocks["d"] == 3 and blocks["order_y"] == "5184000"


def test_budget_skips_are_not_capacity():
    cert = run_job(JobSpec(**{**JOB1.__dict__, "time_budget": 0.0}))
    assert cert.ok
    assert check_ids(cert) == ["job-valid"]
    assert all(rec["kind"] == "budget" for rec in cert.payload["skips"])
    assert not cert.capacity_blocked()


def test_exports_written_with_out_dir(tmp_path):
    spec = JobSpec(**{**JOB1.__dict__, "out_dir": str(tmp_path),
                      "formats": ("edge-list", "adjacency-text"), "label": "ex"})
    cert = run_job(spec)
    assert cert.payload["artifacts"] == ["ex.edges.txt", "ex.adj.txt"]
    edge_lines = (tmp_path / "ex.edges.txt").read_text().splitlines()
    assert len(edge_lines) == 240 * 3 // 2
    adj_lines = (tmp_path / "ex.adj.txt").read_text().splitlines()
    assert len(adj_lines) == 240


# ---------------------------------------------------------------------------
# suites and baselines
# ---------------------------------------------------------------------------


def test_packaged_baselines_present():
    base = load_baselines()
    assert base == {
        "d/n=7/A5/(1,2)(3,4)/(1,2,3,4,5)": 360,
        "girth/n=4/A5/(1,2)(3,4)/(1,2,3,4,5)": 9,
        "girth/n=4/A5/(1,2)(3,4)/(1,5,3)": 15,
    }
    assert load_baselines("/nonexistent/baselines.json") == {}


def test_baselines_file_must_parse(tmp_path):
    bad = tmp_path / "base.json"
    bad.write_text("{nope")
    with pytest.raises(ValidationError, match="cannot parse baselines"):
        load_baselines(str(bad))


def test_unknown_suite_rejected():
    with pytest.raises(ValidationError, match="unknown suite"):
        run_suite("everything")
    assert SUITE_NAMES == ("examples", "small-n", "extended")


def test_examples_suite(tmp_path):
    result = run_suite("examples", out_dir=str(tmp_path))
    assert result.ok
    assert [c.payload["job"]["group"] for c in result.certificates] == ["A5", "A5", "A11"]
    assert result.regressions == []
    for name in ("example-1", "example-2", "example-3", "suite-examples.txt"):
        path = tmp_path / (name if name.endswith(".txt") else f"{name}.json")
        assert path.exists()
    table = (tmp_path / "suite-examples.txt").read_text()
    assert table.count("pass") >= 3 and table.rstrip().endswith("all checks passed")


def test_small_n_suite_regressions_against_packaged_values():
    result = run_suite("small-n")
    assert result.ok
    by_key = {r["key"]: r for r in result.regressions}
    assert by_key["d/n=7/A5/(1,2)(3,4)/(1,2,3,4,5)"]["computed"] == 360
    assert by_key["girth/n=4/A5/(1,2)(3,4)/(1,2,3,4,5)"]["computed"] == 9
    assert all(not r.get("frozen") for r in result.regressions)
    d_values = [
        c.check("block-structure")["computed"]["d"] for c in result.certificates
    ]
    assert d_values == [1, 12, 60, 360]


def test_user_baselines_freeze_and_mismatch(tmp_path):
    path = tmp_path / "base.json"
    path.write_text(json.dumps({"d/n=7/A5/(1,2)(3,4)/(1,2,3,4,5)": 999}))
    result = run_suite("small-n", baselines_path=str(path))
    assert not result.ok
    by_key = {r["key"]: r for r in result.regressions}
    bad = by_key["d/n=7/A5/(1,2)(3,4)/(1,2,3,4,5)"]
    assert bad["passed"] is False and bad["baseline"] == 999 and bad["computed"] == 360
    frozen = by_key["girth/n=4/A5/(1,2)(3,4)/(1,2,3,4,5)"]
    assert frozen["passed"] and frozen.get("frozen")
    written = json.loads(path.read_text())
    assert written["girth/n=4/A5/(1,2)(3,4)/(1,2,3,4,5)"] == 9
    assert written["d/n=7/A5/(1,2)(3,4)/(1,2,3,4,5)"] == 999
    assert "FAILURES PRESENT" in result.summary_table()


def test_parallel_suite_matches_serial():
    serial = run_suite("examples")
    parallel = run_suite("examples", parallel=True)
    assert parallel.ok
    for a, b in zip(serial.certificates, parallel.certificates):
        assert a.core_bytes() == b.core_bytes()
