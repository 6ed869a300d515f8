from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from dqcount import cli
from dqcount.bigcount import BigCount
from dqcount.reductions.fomc import SMOKER_FRIEND


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def two_col(tmp_path, capsys):
    path = tmp_path / "tc.dqcir"
    assert run(capsys, "generate", "two-col", "--n", 3, "-o", path)[0] == 0
    return path


@pytest.fixture
def three_exist(tmp_path, capsys):
    path = tmp_path / "r3.dqcir"
    code, _, _ = run(capsys, "generate", "random", "--n", 2, "--w1", 1, "--w2", 1, "--w", 2,
                     "--seed", 5, "--gates", 3, "-o", path)
    assert code == 0
    return path


@pytest.fixture
def corrupted_expansion(monkeypatch):
    """A deliberately broken build: the expansion counter is off by one."""
    import dqcount.expansion as ex
    real = ex.count_via_expansion
    monkeypatch.setattr(ex, "count_via_expansion", lambda d, b=None: real(d, b) + BigCount.one())


@pytest.mark.parametrize("method", ["auto", "symbolic", "expansion", "brute", "reduction"])
def test_count_methods(capsys, two_col, method):
    code, out, _ = run(capsys, "count", two_col, "--method", method)
    assert code == 0
    rep = json.loads(out)
    assert rep["count"]["decimal"] == "2" and rep["schema"] == 1


def test_count_output_is_deterministic(capsys, two_col):
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "count", two_col, "--method", "symbolic", "--jobs", 2)
        outs.append(json.loads(out))
        outs[-1].pop("elapsed_ms")
    assert json.dumps(outs[0], sort_keys=True) == json.dumps(outs[1], sort_keys=True)


def test_count_text_and_dump_bdd(capsys, two_col, tmp_path):
    dot = tmp_path / "closure.dot"
    code, out, _ = run(capsys, "count", two_col, "--format", "text", "--dump-bdd", dot)
    assert code == 0 and out.startswith("count 2\n")
    assert dot.read_text().startswith("digraph")


def test_compare_equal(capsys, two_col):
    code, out, _ = run(capsys, "compare", two_col)
    assert code == 0 and json.loads(out)["status"] == "EQUAL"


def test_compare_detects_corrupted_build(capsys, two_col, corrupted_expansion):
    code, out, err = run(capsys, "compare", two_col, "--methods", "symbolic,expansion")
    assert code == 3
    assert json.loads(out)["status"] == "MISMATCH"
    assert json.loads(err)["error"] == "mismatch"


def test_expand_writes_dimacs(capsys, two_col, tmp_path):
    target = tmp_path / "tc.cnf"
    code, out, _ = run(capsys, "expand", two_col, "-o", target)
    assert code == 0
    text = target.read_text()
    assert text.startswith("c map 1 ")
    assert json.loads(out)["clauses"] == sum(1 for ln in text.splitlines() if ln.endswith(" 0"))


def test_info(capsys, two_col):
    code, out, _ = run(capsys, "info", two_col)
    info = json.loads(out)
    assert code == 0 and info["satisfiable"] is True
    assert set(info) >= {"support_cells", "weak_components", "closure_iterations"}
    assert len(info["support_cells"]) == 2


def test_reduce_uniform(capsys, three_exist, tmp_path):
    target = tmp_path / "u.dqcir"
    assert run(capsys, "reduce", "uniform", three_exist, "-o", target)[0] == 0
    a = run(capsys, "count", three_exist, "--method", "brute")[1]
    b = run(capsys, "count", target, "--method", "expansion")[1]
    assert json.loads(a)["count"] == json.loads(b)["count"]


def test_reduce_to_2dqbf_manifest(capsys, three_exist, tmp_path):
    prefix = tmp_path / "pair"
    code, out, _ = run(capsys, "reduce", "to-2dqbf", three_exist, "-o", prefix)
    assert code == 0
    manifest = json.loads((tmp_path / "pair.manifest.json").read_text())
    counts = [int(json.loads(run(capsys, "count", manifest[k])[1])["count"]["decimal"])
              for k in ("minuend", "subtrahend")]
    direct = int(json.loads(run(capsys, "count", three_exist, "--method", "brute")[1])["count"]["decimal"])
    assert counts[0] - counts[1] == direct


def test_encode_fomc(capsys, tmp_path):
    src = tmp_path / "sf.fo"
    src.write_text(SMOKER_FRIEND)
    target = tmp_path / "sf.dqcir"
    assert run(capsys, "encode", "fomc", src, "--log-domain", 1, "-o", target)[0] == 0
    code, out, _ = run(capsys, "count", target)
    assert code == 0 and json.loads(out)["count"]["decimal"] == "112"


def test_generate_is_reproducible(capsys):
    a = run(capsys, "generate", "random", "--n", 4, "--seed", 3, "--w1", 2, "--w2", 3)[1]
    b = run(capsys, "generate", "random", "--n", 4, "--seed", 3, "--w1", 2, "--w2", 3)[1]
    assert a == b and a.startswith("#dqcir")
    assert run(capsys, "generate", "ind-set", "--n", 3, "--k", 1)[0] == 0


@pytest.mark.parametrize("argv", [
    ["count", "/nonexistent/file"],
    ["generate", "two-col", "--n", "2", "--k", "5"],
    ["generate", "random", "--n", "2", "--w1", "3"],
    ["count"],
    ["compare", "-", "--methods", "symbolic"],
])
def test_input_errors_exit_1(capsys, argv, monkeypatch):
    monkeypatch.setattr(sys, "stdin", __import__("io").StringIO("#dqcir\nforall(x)\noutput(x)\n"))
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert json.loads(err)["schema"] == 1


def test_parse_error_has_location(capsys, tmp_path):
    bad = tmp_path / "bad.dqcir"
    bad.write_text("#dqcir\nforall(x)\nexists(y; x)\ng = foo(x)\noutput(g)\n")
    code, _, err = run(capsys, "count", bad)
    assert code == 1 and json.loads(err)["line"] == 4


def test_budget_exit_2(capsys, two_col, monkeypatch):
    code, _, err = run(capsys, "count", two_col, "--method", "brute", "--brute-cells", 2)
    assert code == 2 and json.loads(err)["error"] == "budget"
    monkeypatch.setenv("DQCOUNT_EXPANSION_CLAUSES", "1")
    code, _, err = run(capsys, "expand", two_col)
    assert code == 2


def test_timeout_exit_2(capsys, tmp_path):
    big = tmp_path / "is.dqcir"
    run(capsys, "generate", "ind-set", "--n", 10, "--k", 3, "-o", big)
    code, _, err = run(capsys, "count", big, "--method", "symbolic", "--timeout", 0.01)
    assert code == 2 and json.loads(err)["error"] == "timeout"


@pytest.mark.skipif(shutil.which("dqcount") is None, reason="console script not installed")
def test_console_script(two_col):
    res = subprocess.run(["dqcount", "count", str(two_col)], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["count"]["decimal"] == "2"
