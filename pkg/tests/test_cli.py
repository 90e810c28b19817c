import json
import subprocess
import sys

import pytest

from lpmkit.cli import main
from lpmkit.fixtures import running_example_path


@pytest.fixture()
def db_path():
    return str(running_example_path())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lpmkit", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "demo" in res.stdout


def test_spm_and_merge(tmp_path, capsys, db_path):
    pats = tmp_path / "p.json"
    code, out, _ = run(capsys, "spm", "--input", db_path, "--min-sup", "3", "--out", str(pats))
    assert code == 0 and out.startswith("29 closed patterns")
    sel = tmp_path / "s.json"
    code, out, _ = run(capsys, "select", "--method", "clogsgrow-merge", "--input", db_path,
                       "--patterns", str(pats), "--out", str(sel))
    assert code == 0 and out.startswith("coverage=39/39")


def test_mine_is_byte_identical(tmp_path, capsys, db_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"m{k}.json"
        code, _, _ = run(capsys, "mine", "--input", db_path, "--exp-max", "2", "--threads", "1",
                         "--top-k", "50", "--out", str(p))
        assert code == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert len(json.loads(outs[0])) == 50


def test_select_and_evaluate(tmp_path, capsys, db_path):
    from lpmkit import io
    from lpmkit.fixtures import reference_lpms
    lp = tmp_path / "ref.json"
    io.save_lpms(reference_lpms(), lp)
    for method, expected in [("align", "coverage=38/39"), ("greedy", "coverage=38/39"),
                             ("greedy-fscore", "coverage=38/39"), ("heuristic", "coverage=38/39")]:
        code, out, _ = run(capsys, "select", "--method", method, "--input", db_path, "--lpms", str(lp),
                           "--out", str(tmp_path / "sel.json"))
        assert code == 0 and out.startswith(expected), (method, out)
    code, out, _ = run(capsys, "select", "--method", "align", "--remine", "--input", db_path, "--lpms", str(lp),
                       "--out", str(tmp_path / "sel.json"))
    assert code == 0 and out.startswith("coverage=38/39")
    rep = tmp_path / "rep.json"
    code, out, _ = run(capsys, "evaluate", "--input", db_path, "--lpms", str(lp), "--out", str(rep))
    assert code == 0 and "patterns=3" in out
    assert json.loads(rep.read_text())["pattern_count"] == 3


def test_evaluate_empty_lpm_file(tmp_path, capsys, db_path):
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    code, out, _ = run(capsys, "evaluate", "--input", db_path, "--lpms", str(empty))
    assert code == 0 and out.startswith("coverage=0/39")


def test_export(tmp_path, capsys):
    lp = tmp_path / "a.json"
    lp.write_text(json.dumps([{"tree": "->(A, +(B, ->(C, D)))"}]))
    code, out, _ = run(capsys, "export", "--lpms", str(lp), "--dot", "--pnml", "--out", str(tmp_path / "x"))
    assert code == 0
    dot = (tmp_path / "x" / "lpm0.dot").read_text()
    assert dot.count("shape=box") == 5 and dot.count("fillcolor=gray") == 1
    assert (tmp_path / "x" / "lpm0.pnml").exists()


def test_exit_codes(tmp_path, capsys, db_path):
    code, _, err = run(capsys, "evaluate", "--input", "missing.txt", "--lpms", "x.json")
    assert code == 2 and "--input" in err
    bad = tmp_path / "bad.json"
    bad.write_text("[\n{\"tree\": \"->(A\"}\n]")
    code, _, err = run(capsys, "evaluate", "--input", db_path, "--lpms", str(bad))
    assert code == 3 and "bad.json" in err
    csv = tmp_path / "db.csv"
    csv.write_text("case,activity\n1,a\n2\n")
    code, _, err = run(capsys, "spm", "--input", str(csv), "--format", "csv", "--out", str(tmp_path / "p.json"))
    assert code == 3 and "db.csv:3" in err
    lp = tmp_path / "ref.json"
    lp.write_text(json.dumps([{"tree": "->(A, +(B, ->(C, D)))"}]))
    code, _, err = run(capsys, "evaluate", "--input", db_path, "--lpms", str(lp), "--state-budget", "2")
    assert code == 4
    code, _, err = run(capsys, "mine", "--input", db_path, "--operators", "seq,nope", "--out", str(tmp_path / "m"))
    assert code == 2 and "--operators" in err
    with pytest.raises(SystemExit) as exc:
        main(["select", "--input", db_path, "--out", "x"])
    assert exc.value.code == 2


def test_demo(capsys):
    code, out, _ = run(capsys, "demo", "--threads", "1")
    assert code == 0
    assert "alignment-based -> {a,b}: coverage=38/39" in out
    assert "greedy F-score  -> {b,a}: coverage=38/39" in out
