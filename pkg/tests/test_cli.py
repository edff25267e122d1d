import io
import os
import random
import re
import subprocess
import sys

import pytest

from translen.cli import (
    EXIT_BOUNDARY,
    EXIT_INVALID,
    EXIT_MISMATCH,
    EXIT_NOT_FIBRATION,
    EXIT_OK,
    EXIT_USAGE,
    main,
)
from translen.fixtures import DRIFT_GRAPH, TRIANGULATION, braid_drift_graph, read_text


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_atl_output():
    code, out = run("atl", "--phi", "0,-1")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "ell = 2/3; witness = B P"


def test_mu_output():
    code, out = run("mu", "--phi", "1,-5", "--d", "1")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "mu = 50/9"


def test_g_output():
    code, out = run("g", "--point", "t=1/3")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "g = 9"
    code, out = run("g", "--point", "1/4,-1/2")
    assert out.splitlines()[0] == "g = 32/3"
    code, out = run("g", "--point", "t=1/3", "--float")
    assert out.splitlines()[0] == "g = 9.0"


def test_ingest_report(tmp_path):
    code, out = run("ingest")
    assert code == EXIT_OK
    assert "rank 2; B = {(-2,2),(-1,1),(0,1),(1,1),(2,2)}; cone rays (-1,1) (1,1)" in out
    assert "4 tetrahedra, 8 faces, 4 edge classes" in out
    dg = tmp_path / "fixture.dg"
    dg.write_text(read_text(DRIFT_GRAPH))
    code, out2 = run("ingest", str(dg))
    assert code == EXIT_OK
    assert out2.startswith("input: drift graph")
    assert out2.splitlines()[3:] == out.splitlines()[3:]


def test_corrupt_gluing_exits_2(tmp_path):
    bad = tmp_path / "bad.tri"
    bad.write_text(re.sub(r"^glue 0 0 3 1 1023$", "glue 0 0 0 0 0123", read_text(TRIANGULATION), flags=re.M))
    code, _ = run("ingest", str(bad))
    assert code == EXIT_INVALID
    empty = tmp_path / "empty.tri"
    empty.write_text("tetrahedra 0\n")
    assert run("ingest", str(empty))[0] == EXIT_INVALID


def test_error_exit_codes(tmp_path):
    assert run("atl", "--phi", "1,-1")[0] == EXIT_NOT_FIBRATION
    assert run("atl", "--phi", "0,0")[0] == EXIT_NOT_FIBRATION
    assert run("g", "--point", "t=1")[0] == EXIT_BOUNDARY
    assert run("g", "--point", "1/2,-1/2")[0] == EXIT_BOUNDARY
    assert run("atl")[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE
    assert run("atl", "--phi", "1,2,3")[0] == EXIT_USAGE
    assert run("atl", "--phi", "x,1")[0] == EXIT_INVALID
    assert run("mu", "--phi", "1,-5", "--d", "2")[0] == EXIT_INVALID
    assert run("atl", "--phi", "0,-1", str(tmp_path / "missing.dg"))[0] == EXIT_USAGE
    dg = tmp_path / "fixture.dg"
    dg.write_text(read_text(DRIFT_GRAPH))
    assert run("mu", "--phi", "0,-1", str(dg))[0] == EXIT_USAGE  # a slice is required for custom input
    bad_slice = tmp_path / "bad.slice"
    bad_slice.write_text("dim 1\nbasis 1 0\nbasis 0 1\nnorm 0 2\n")
    assert run("mu", "--phi", "0,-1", "--slice", str(bad_slice))[0] == EXIT_INVALID


def test_scan_csv_and_tsv(tmp_path):
    code, out = run("scan", "--depth", "3")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "point;norm;ell_num/ell_den;mu;g;gap"
    assert "(0,-1/2);2;2/3;8/3;8;16/3" in lines
    target = tmp_path / "scan.tsv"
    code, out = run("scan", "--depth", "3", "--format", "tsv", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text().splitlines()[0] == "point\tnorm\tell_num/ell_den\tmu\tg\tgap"
    assert run("scan", "--depth", "0")[0] == EXIT_USAGE


def test_converge_table():
    code, out = run("converge", "--phi", "1,0", "--direction", "0,-1", "--from", "5", "--to", "9")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].split(";")[:3] == ["k", "phi", "norm"]
    assert lines[1].startswith("5;(1,-5);10;18;9/50;1/8;11/200;")
    assert len(lines) == 4


def test_graph_and_cone_commands():
    code, out = run("graph", "--phi", "0,-1")
    assert code == EXIT_OK
    assert "minimal cycles:" in out and "minimal good paths:" in out
    assert sum(1 for line in out.splitlines() if "->" in line) == 16
    code, out = run("cone", "--phi", "1,-1")
    assert code == EXIT_OK and "(1,-1): boundary" in out
    assert "(0,-1): interior" in run("cone", "--phi", "0,-1")[1]
    assert "(0,1): outside" in run("cone", "--phi", "0,1")[1]


@pytest.mark.parametrize(
    "argv",
    [["scan", "--depth", "6"], ["atl", "--phi", "1,-7"], ["graph"], ["converge", "--phi", "1,0", "--direction", "0,-1"]],
)
def test_output_is_deterministic(argv):
    assert run(*argv) == run(*argv)


def test_output_is_deterministic_across_processes():
    cmd = [sys.executable, "-m", "translen", "scan", "--depth", "5"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True, env={**os.environ, "PYTHONHASHSEED": "123"}).stdout
    assert first == second


def test_verify_example_passes():
    code, out = run("verify-example")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "211/211 checks passed"
    assert not any(line.startswith("FAIL") for line in out.splitlines())


def test_verify_example_with_a_coboundary(tmp_path):
    rng = random.Random(5)
    fg = braid_drift_graph()
    pot = {v: (rng.randint(-9, 9), rng.randint(-9, 9)) for v in fg.vertices}
    path = tmp_path / "shifted.dg"
    path.write_text(fg.apply_coboundary(pot).to_text())
    code, out = run("verify-example", str(path))
    assert code == EXIT_OK, out


def test_verify_example_detects_a_perturbed_drift(tmp_path):
    path = tmp_path / "perturbed.dg"
    path.write_text(read_text(DRIFT_GRAPH).replace("tri R B 0 0", "tri R B 0 1"))
    code, out = run("verify-example", str(path))
    assert code == EXIT_MISMATCH
    assert "first mismatch: cycle RBR drift" in out
