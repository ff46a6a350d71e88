import json
from pathlib import Path

import pytest

from basecraft.cli import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main

GOLDEN = Path(__file__).parent / "golden"

# (golden name, argv, expected exit code)
GOLDEN_RUNS = [
    ("order", ["order", "--group", "Sp-4-3", "--action", "iso-points"], EXIT_OK),
    ("basesize", ["basesize", "--case", "psl2/q7/split/PGL", "--seed", "1"], EXIT_OK),
    ("qbound", ["qbound", "--case", "psl2/q7/P1/PGL", "-c", "4", "--seed", "1"], EXIT_OK),
    ("prob_exact", ["prob", "--case", "psl2/q7/split/PGL", "-c", "2", "--seed", "1"], EXIT_OK),
    ("prob_mc", ["prob", "--case", "psl2/q13/split/PSL", "-c", "2", "--samples", "3000",
                 "--seed", "5"], EXIT_OK),
    ("certify", ["certify-norego", "--case", "psl2/q7/nonsplit/PGL", "--seed", "1"], EXIT_OK),
    ("certify_fail", ["certify-norego", "--case", "psl2/q7/split/PGL", "--seed", "1"],
     EXIT_MISMATCH),
    ("prodact", ["prodact", "--case", "as1/S5/S4", "--top", "C2", "-k", "5", "--seed", "1"], EXIT_OK),
    ("prodact4", ["prodact", "--case", "as1/S5/S4", "--top", "C2", "-k", "4", "--seed", "1"],
     EXIT_OK),
    ("table", ["table", "--suite", "as3", "--seed", "1"], EXIT_OK),
    ("case", ["case", "--case", "as1/S8/S4wrS2"], EXIT_OK),
]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


@pytest.mark.parametrize("name,argv,code", GOLDEN_RUNS, ids=[r[0] for r in GOLDEN_RUNS])
def test_golden_output(capsys, name, argv, code):
    got_code, out = run(capsys, argv + ["--no-meta"])
    assert got_code == code
    assert out == (GOLDEN / f"{name}.json").read_text()


def test_golden_values():
    load = lambda n: json.loads((GOLDEN / f"{n}.json").read_text())["result"]
    assert load("basesize")["exact"] == 2
    assert load("qbound")["total"] == "87/256"
    assert load("prob_exact")["exact"] == "3/7"
    lo, hi = load("prob_mc")["monte_carlo"]["wilson95"]
    assert lo <= 60 / 91 <= hi
    assert load("prodact")["reg"] == 11 and load("prodact4")["reg"] == 1
    assert load("order")["order"] * 2 == 51840


def test_same_seed_same_bytes_across_threads(capsys):
    argv = ["prob", "--case", "psl2/q11/split/PGL", "-c", "2", "--samples", "2500",
            "--seed", "3", "--no-meta"]
    _, a = run(capsys, argv)
    _, b = run(capsys, argv + ["--threads", "4"])
    assert a == b


def test_meta_block(capsys):
    code, out = run(capsys, ["order", "--case", "as1/A5/A4"])
    doc = json.loads(out)
    assert code == EXIT_OK and doc["schema"] == "basecraft/1"
    assert set(doc["meta"]) == {"version", "elapsed_s", "timestamp"}


@pytest.mark.parametrize("argv", [
    ["basesize", "--case", "as1/S5/S4"],                       # no seed
    ["basesize", "--case", "nope/none", "--seed", "1"],
    ["basesize", "--seed", "1"],                               # no group
    ["order", "--group", "SU-9-9", "--action", "points"],
    ["prob", "--case", "as1/S5/S4", "--seed", "1"],            # -c missing
    ["basesize", "--case", "as1/S16/S4wrS4", "--seed", "1"],   # unsupported
    ["order", "--case", "as1/A5/A4", "--threads", "0"],
])
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_USAGE


def test_budget_exit(capsys):
    code, out = run(capsys, ["basesize", "--case", "as1/S8/S4wrS2", "--seed", "1", "--budget", "2",
                             "--no-meta"])
    assert code == EXIT_BUDGET
    res = json.loads(out)["result"]
    # an interrupted search still reports certified bounds
    assert res["exact"] is None and res["matches_expected"] is None
    assert res["lo"] <= 5 <= res["hi"]


def test_gens_file_input(tmp_path, capsys):
    path = tmp_path / "a5.gens"
    path.write_text("# degree: 5\n# order: 60\n(1,2,3)\n(1,2,3,4,5)\n")
    code, out = run(capsys, ["basesize", "--gens", str(path), "--seed", "1", "--no-meta"])
    assert code == EXIT_OK
    assert json.loads(out)["result"]["exact"] == 3
