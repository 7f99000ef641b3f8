"""Document round-trips, golden reports, determinism, exit codes."""

import json
import os
import subprocess
import sys

import pytest

from satmon import cli, documents as D
from satmon import homs as H
from satmon import monoid as M
from satmon import valuative as V
from satmon.errors import SchemaError

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "golden")


def _golden(name):
    with open(os.path.join(GOLDEN, name), "r", encoding="utf-8") as fh:
        return fh.read()


# ---------------------------------------------------------------------------
# round trips


def test_monoid_roundtrip(nat2):
    doc = D.monoid_out(nat2)
    again = D.parse_monoid(doc)
    assert again == nat2
    assert D.monoid_out(again) == doc


def test_hom_roundtrip(half_inclusion):
    doc = D.hom_out(half_inclusion)
    f = D.parse_hom(doc)
    assert D.hom_out(f) == doc


def test_lattice_roundtrip(lex2):
    doc = D.lattice_out(lex2)
    lat = D.parse_lattice(doc)
    assert lat == lex2
    assert D.lattice_out(lat) == doc


def test_typev_roundtrip(half_v_presentation):
    doc = D.typev_out(half_v_presentation)
    tv = D.parse_typev(doc)
    assert D.typev_out(tv) == doc


def test_fp_monoid_roundtrip():
    p = M.FpMonoid(3, (((1, 1, 1), (2, 0, 0)),))
    doc = D.fp_monoid_out(p)
    assert D.parse_fp_monoid(doc) == p


def test_ideal_roundtrip(nat2):
    ideal = V.MonoidIdeal(nat2, ((1, 0), (0, 1)))
    doc = D.ideal_out(ideal)
    again = D.parse_ideal(doc)
    assert D.ideal_out(again) == doc


def test_large_integers_roundtrip():
    big = 10 ** 40 + 7
    m = M.monoid_from_vectors([(big,)])
    doc = D.monoid_out(m)
    assert D.parse_monoid(doc).gens[0][0] == big
    assert json.loads(json.dumps(doc))["gens"][0][0] == str(big)


# ---------------------------------------------------------------------------
# schema diagnostics


def test_schema_unknown_field(nat):
    doc = D.monoid_out(nat)
    doc["extra"] = 1
    with pytest.raises(SchemaError) as e:
        D.parse_monoid(doc)
    assert "extra" in str(e.value)


def test_schema_bad_relation_image():
    # a hom whose image violates a source relation names the offending field
    mono, _, _ = M.from_presentation(M.FpMonoid(2, (((2, 0), (0, 3)),)))
    doc = {
        "format": "satmon/1",
        "kind": "hom",
        "source": D.monoid_out(mono),
        "target": D.monoid_out(M.free_monoid(1)),
        "gen_images": [["1"], ["1"]],
    }
    with pytest.raises(SchemaError) as e:
        D.parse_hom(doc)
    assert e.value.path == "$.gen_images"


def test_version_mismatch():
    with pytest.raises(SchemaError):
        D.check_format({"format": "satmon/0", "kind": "monoid"})


# ---------------------------------------------------------------------------
# goldens (byte-exact)


@pytest.mark.parametrize(
    "name",
    ["saturate_numsg", "classify_half_s3", "covers_n2", "ogus_pushout"],
)
def test_golden_reports(name):
    request = json.loads(_golden(f"{name}.request.json"))
    report, code = cli.run_request(request)
    text = json.dumps(report, indent=2, ensure_ascii=True) + "\n"
    assert text == _golden(f"{name}.report.json")


def test_golden_repeat_run_is_byte_identical():
    request = json.loads(_golden("covers_n2.request.json"))
    r1, _ = cli.run_request(request)
    r2, _ = cli.run_request(request)
    assert json.dumps(r1) == json.dumps(r2)


def test_batch_jobs_1_vs_4_byte_identical():
    batch = json.loads(_golden("batch.request.json"))
    r1, c1 = cli.run_batch(batch, jobs=1)
    r4, c4 = cli.run_batch(batch, jobs=4)
    assert json.dumps(r1) == json.dumps(r4)
    assert c1 == c4 == 0
    assert json.dumps(r1, indent=2, ensure_ascii=True) + "\n" == _golden(
        "batch.report.json"
    )


# ---------------------------------------------------------------------------
# exit codes and the console entry point


def _run_cli(args, stdin_text):
    return subprocess.run(
        [sys.executable, "-m", "satmon.cli", *args],
        input=stdin_text,
        capture_output=True,
        text=True,
        cwd=HERE,
    )


def test_cli_subcommand_saturate():
    doc = {"monoid": D.monoid_out(M.monoid_from_vectors([(2,), (3,)]))}
    proc = _run_cli(["saturate"], json.dumps(doc))
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["result"]["saturation"]["gens"] == [["1"]]


def test_cli_exit_one_on_negative_verdict(half_inclusion):
    doc = {"hom": D.hom_out(half_inclusion)}
    proc = _run_cli(["classify", "--sigma", "2"], json.dumps(doc))
    assert proc.returncode == 1
    rep = json.loads(proc.stdout)
    assert rep["status"] == "verdict-false"
    assert rep["result"]["verdicts"]["smooth"]["holds"] is False


def test_cli_exit_two_on_error():
    proc = _run_cli(["saturate"], json.dumps({"monoid": {"bad": True}}))
    assert proc.returncode == 2
    rep = json.loads(proc.stdout)
    assert rep["status"] == "error"


def test_cli_run_golden_file():
    path = os.path.join(GOLDEN, "classify_half_s3.request.json")
    proc = _run_cli(["run", path], "")
    assert proc.returncode == 0
    assert proc.stdout == _golden("classify_half_s3.report.json")


def test_cli_batch_jobs_flag():
    path = os.path.join(GOLDEN, "batch.request.json")
    p1 = _run_cli(["run", path, "--jobs", "1"], "")
    p4 = _run_cli(["run", path, "--jobs", "4"], "")
    assert p1.returncode == p4.returncode == 0
    assert p1.stdout == p4.stdout == _golden("batch.report.json")


def test_cli_no_deterministic_fills_timing():
    doc = {"monoid": D.monoid_out(M.free_monoid(1))}
    proc = _run_cli(["spec", "--no-deterministic"], json.dumps(doc))
    rep = json.loads(proc.stdout)
    assert rep["timing_ms"] is not None


def test_cli_out_file(tmp_path):
    doc = {"monoid": D.monoid_out(M.free_monoid(1))}
    out = tmp_path / "report.json"
    proc = _run_cli(["spec", "--out", str(out)], json.dumps(doc))
    assert proc.returncode == 0
    rep = json.loads(out.read_text())
    assert rep["status"] == "ok"


def test_cli_budget_env(monkeypatch):
    doc = {"monoid": D.monoid_out(M.monoid_from_vectors([(2,), (3,)]))}
    proc = subprocess.run(
        [sys.executable, "-m", "satmon.cli", "saturate"],
        input=json.dumps(doc),
        capture_output=True,
        text=True,
        env={**os.environ, "SATMON_BUDGET": "250000"},
    )
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["request"]["budget"] == "250000"
