import json

import pytest

from cohomstab import cli


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_cohomology_v4_f2(capsys):
    code, recs = run_cli(
        ["cohomology", "--group", "V4", "--ring", "F2", "--cap", "6"], capsys
    )
    assert code == 0
    rec = recs[0]
    assert [g["degree"] for g in rec["generators"]] == [1, 1]
    assert rec["relations"] == []


def test_cohomology_c2_integral(capsys):
    code, recs = run_cli(
        ["cohomology", "--group", "C2", "--ring", "Z", "--cap", "6"], capsys
    )
    assert code == 0
    degs = recs[0]["degrees"]
    assert degs["0"] == [0]
    assert degs["2"] == [2] and degs["4"] == [2]
    assert degs["1"] == [] and degs["3"] == []


def test_cohomology_c2_rational(capsys):
    code, recs = run_cli(
        ["cohomology", "--group", "C2", "--ring", "Q", "--cap", "4"], capsys
    )
    assert code == 0
    degs = recs[0]["degrees"]
    assert all(degs[str(n)] == [] for n in range(1, 5))


def test_support_examples(capsys):
    code, recs = run_cli(
        ["support", "--group", "V4", "--ring", "F2", "--module", "Lzeta:x1"], capsys
    )
    assert code == 0
    assert recs[0]["support"] == [{"prime": 2, "ideal": ["x1"]}]

    code, recs = run_cli(
        ["support", "--group", "C6", "--ring", "Z", "--module", "trivial"], capsys
    )
    assert code == 0
    assert {f["prime"] for f in recs[0]["support"]} == {2, 3}

    code, recs = run_cli(
        ["support", "--group", "C2", "--ring", "Z", "--module", "regular"], capsys
    )
    assert code == 0
    assert recs[0]["support"] == []


def test_verify_tate_unit_suite(capsys):
    code, recs = run_cli(
        ["verify", "tate-unit", "--group", "C2,C3", "--tate-range", "2"], capsys
    )
    assert code == 0
    assert all(r["passed"] for r in recs)
    assert len(recs) == 10


def test_usage_errors_exit_2(capsys):
    assert cli.main(["support", "--group", "C2", "--ring", "bogus",
                     "--module", "trivial"]) == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as e:
        cli.main(["verify", "not-a-suite"])
    assert e.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as e:
        cli.main(["cohomology", "--ring", "Z"])  # missing --group
    assert e.value.code == 2
    capsys.readouterr()


def test_failed_check_exits_1(monkeypatch, capsys):
    # plumbing: a failing record must flip the exit code to 1
    def fake_check(G, n):
        return {"group": G.name, "n": n, "stable_hom": [], "tate": [2],
                "match": False}

    monkeypatch.setattr(cli, "tate_unit_check", fake_check)
    code, recs = run_cli(
        ["verify", "tate-unit", "--group", "C2", "--tate-range", "1"], capsys
    )
    assert code == 1
    assert all(r["passed"] is False for r in recs)


def test_report_file_deterministic(tmp_path):
    p1 = tmp_path / "a.jsonl"
    p2 = tmp_path / "b.jsonl"
    args = ["verify", "fracture", "--seed", "4", "--count", "5"]
    assert cli.main(args + ["--out", str(p1)]) == 0
    assert cli.main(args + ["--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_text_format(capsys):
    code = cli.main(["verify", "tate-unit", "--group", "C2",
                     "--tate-range", "1", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") == 3
