import json
import subprocess
import sys

import pytest

from finkit.canon import Canonized, Coloring, CountRow, Front, MixReport, count_canonical
from finkit.cli import build_parser, main
from finkit.finvec import BlockSequence, KVector, SpanTerm, unit_blocks
from finkit.results import Exhausted
from finkit.staircase import StairFunction


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


def test_parse_examples():
    ns = build_parser().parse_args(["span", "--k", "2", "--blocks", "2:{0:2} 2:{2:2}"])
    assert ns.command == "span" and ns.k == 2
    ns = build_parser().parse_args(["count", "--k", "3", "--d", "4", "--format", "csv"])
    assert (ns.command, ns.k, ns.d, ns.format) == ("count", 3, 4, "csv")


@pytest.mark.parametrize(
    "argv",
    [
        ["span", "--k"],
        [],
        ["bogus"],
        ["count", "--k", "1"],
        ["count", "--k", "1", "--d", "1"],
        ["homog", "--k", "1"],  # no coloring
        ["homog", "--k", "1", "--rule", "union", "--coloring", "{}"],
        ["mixing", "--k", "1", "--rule", "union", "--pair", "x0"],
        ["span", "--k", "1", "--blocks", "1:{0:2}"],
        ["mixing", "--k", "1", "--rule", "union", "--pair", "x0 | x99"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and err.startswith("finkit")


def test_span_command(capsys):
    code, doc = run_json(capsys, "span", "--k", "1", "--blocks", "1:{0:1} 1:{1:1}")
    assert code == 0 and doc["size"] == 3
    for row in doc["rows"]:
        w = KVector.parse(row["vector"])
        t = SpanTerm.parse(row["term"])
        assert w.level == 1 and t.indices


def test_sos_command(capsys):
    code, doc = run_json(capsys, "sos", "--k", "2", "--vector", "2:{0:1,2:2,4:1,5:2,7:1}")
    assert code == 0 and doc["all_sos"]
    code, doc = run_json(capsys, "sos", "--k", "1", "--vector", "1:{0:1}")
    assert code == 0 and not doc["all_sos"]
    assert doc["rows"][0]["violated"].startswith("middle")
    code, doc = run_json(capsys, "sos", "--k", "3", "--make", "2", "--strong")
    assert doc["all_sos"] and all(r["strong"] for r in doc["rows"])


def test_stairs_command(capsys):
    code, doc = run_json(capsys, "stairs", "--k", "1")
    assert code == 0 and doc["deduped_count"] == 5 and doc["raw_count"] == 12
    funcs = [StairFunction.from_dict(r["params"]) for r in doc["rows"]]
    assert [str(f) for f in funcs] == [r["function"] for r in doc["rows"]]


def test_count_command(capsys):
    code, doc = run_json(capsys, "count", "--k", "1", "--d", "2")
    row = CountRow.from_dict(doc["rows"][0])
    assert code == 0 and row.C == row.t_tilde == 1 * row.t_prime == 1
    code, out, _ = run(capsys, "count", "--k", "3", "--d", "4", "--format", "csv")
    header, line = out.strip().splitlines()
    got = dict(zip(header.split(","), line.split(",")))
    assert int(got["C"]) == count_canonical(3, 4).C


def test_homog_command(capsys):
    code, doc = run_json(capsys, "homog", "--k", "1", "--rule", "min-parity")
    assert code == 0 and doc["status"] == "found"
    Y = BlockSequence.parse(" ".join(doc["Y"]), 1)
    assert len(Y) == 3
    code, doc = run_json(capsys, "homog", "--k", "1", "--rule", "union", "--universe", "4", "--target-len", "2")
    assert code == 1
    assert Exhausted.from_dict(doc).reason == "exhausted"


def test_homog_threads_identical(capsys):
    base = ["homog", "--k", "2", "--rule", "first-value", "--universe", "6", "--target-len", "2"]
    _, a, _ = run(capsys, *base, "--threads", "1")
    _, b, _ = run(capsys, *base, "--threads", "2")
    assert a == b


def test_mixing_command(capsys):
    code, doc = run_json(capsys, "mixing", "--rule", "union", "--k", "1", "--pair", "x0 | x0+x2")
    assert code == 0
    rep = MixReport.from_dict(doc["report"], 1)
    assert rep.verdict == "MixedAtHorizon"
    assert rep.to_dict() == doc["report"]


def test_canonize_command(capsys):
    code, doc = run_json(capsys, "canonize", "--k", "1", "--rank", "2", "--rule", "union", "--universe", "6")
    assert code == 0
    res = Canonized.from_dict(doc, 1)
    assert res.to_dict() == {k: v for k, v in doc.items() if k not in ("k", "display")}
    code, doc = run_json(capsys, "canonize", "--k", "1", "--rank", "2", "--rule", "union", "--budget-nodes", "1")
    assert code == 1 and doc["status"] == "exhausted"


def test_coloring_from_file(capsys, tmp_path):
    # only singleton-block members are listed, so the table is partial
    table = {"table": [[["1:{%d:1}" % i], i % 2] for i in range(4)]}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(table))
    code, out, err = run(capsys, "homog", "--k", "1", "--universe", "4", "--target-len", "2", "--coloring", f"@{path}")
    assert code == 2 and out == ""

    c = Coloring.tabulate(Front.uniform(unit_blocks(1, 4), 1), lambda s: s[0].min_support % 2)
    path.write_text(c.to_json())
    code, doc = run_json(capsys, "homog", "--k", "1", "--universe", "4", "--target-len", "2", "--coloring", f"@{path}")
    assert code == 0 and doc["color"] in (0, 1)


@pytest.mark.parametrize("fmt", ["json", "csv", "table"])
def test_formats_are_deterministic(capsys, fmt):
    argv = ["stairs", "--k", "2", "--format", fmt]
    outs = {run(capsys, *argv)[1] for _ in range(2)}
    assert len(outs) == 1


def test_byte_identical_subprocess():
    cmd = [sys.executable, "-m", "finkit", "mixing", "--rule", "union", "--k", "1", "--pair", "x0 | x0+x2"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["report"]["verdict"] == "MixedAtHorizon"


def test_global_format_flag(capsys):
    code, out, _ = run(capsys, "--format", "table", "span", "--k", "1", "--blocks", "1:{0:1} 1:{1:1}")
    lines = out.strip().splitlines()
    assert lines[0].split() == ["index", "vector", "term"]
    assert len(lines) == 5
