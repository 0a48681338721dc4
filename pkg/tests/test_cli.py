import json
import logging

import pandas as pd
import pytest

from cubench import cli
from cubench.cube import Variant
from cubench.verdict import CheckLine, Status


def check_lines(out):
    return [CheckLine.parse(line) for line in out.splitlines() if line.startswith("CHECK ")]


def test_exit_status():
    passed = CheckLine.of("a", Status.PASS)
    open_ = CheckLine.of("b", Status.INCONCLUSIVE)
    failed = CheckLine.of("c", Status.FAIL)
    assert cli.exit_status([passed]) == 0
    assert cli.exit_status([passed, open_]) == 2
    assert cli.exit_status([open_, failed]) == 1
    assert cli.exit_status([]) == 0


def test_run_config_rejects_bad_settings():
    with pytest.raises(ValueError, match="Level bound"):
        cli.RunConfig(level=9)
    with pytest.raises(ValueError, match="Tracker size"):
        cli.RunConfig(tracker_size=-1)
    assert cli.RunConfig(tracker_size=0).variant is Variant.B_ORD


def test_homs(capsys):
    assert cli.main(["homs", "1", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1] == "count B_ord(1, 1) = 3"
    assert len(out) == 4


def test_homs_as_json(capsys):
    assert cli.main(["homs", "0", "1", "--variant", "B", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 2
    assert payload["homs"] == ["mor B 0->1 [*↦0]", "mor B 0->1 [*↦1]"]


def test_axioms(capsys):
    assert cli.main(["axioms", "--level", "2"]) == 0
    lines = check_lines(capsys.readouterr().out)
    assert len(lines) == 10
    assert {line.status for line in lines} == {Status.PASS}


def test_corrupted_axioms_exit_one(capsys):
    assert cli.main(["axioms", "--level", "2", "--corrupt-min", "3"]) == 1
    failed = [line.name for line in check_lines(capsys.readouterr().out) if line.status is Status.FAIL]
    assert failed == ["ax2.connection_min"]


def test_non_monotone_corruption_is_refused(capsys):
    assert cli.main(["axioms", "--level", "2", "--corrupt-min", "0"]) == 1
    err = capsys.readouterr().err
    assert "cubench: DimensionError:" in err
    assert "not monotone" in err


def test_non_monotone_corruption_runs_on_full_cubes(capsys):
    assert cli.main(["axioms", "--level", "2", "--variant", "B", "--corrupt-min", "0"]) == 1
    failed = [line.name for line in check_lines(capsys.readouterr().out) if line.status is Status.FAIL]
    assert "ax2.connection_min" in failed


def test_comp_on_a_sample(capsys, samples_dir):
    assert cli.main(["comp", str(samples_dir / "nabla_mixed.prob")]) == 0
    out = capsys.readouterr().out
    assert "RESULT line 9: (b b)" in out
    (line,) = check_lines(out)
    assert line.name == "comp.N.line9"
    assert dict(line.details) == {"solver": "nabla", "result": "(b_b)"}


def test_comp_on_a_bare_cubeset(capsys, samples_dir):
    assert cli.main(["comp", str(samples_dir / "interval.cubeset")]) == 0
    (line,) = check_lines(capsys.readouterr().out)
    assert line.name == "cubeset.I"
    assert line.status is Status.PASS


def test_comp_on_the_universe_sample(capsys, samples_dir):
    assert cli.main(["comp", str(samples_dir / "universe.prob")]) == 0
    lines = check_lines(capsys.readouterr().out)
    assert [line.name for line in lines] == ["universe.line2", "universe.line3"]


def test_parse_errors_exit_one(capsys, tmp_path):
    bad = tmp_path / "bad.prob"
    bad.write_text("family A discrete { a }\n", encoding="utf-8")
    assert cli.main(["comp", str(bad)]) == 1
    assert "ParseError: line 1" in capsys.readouterr().err


def test_invalid_level_exits_one(capsys):
    assert cli.main(["axioms", "--level", "9"]) == 1
    assert "capped" in capsys.readouterr().err


def test_glue_demo_needs_level_three(capsys):
    assert cli.main(["glue-demo", "--level", "2"]) == 2
    (line,) = check_lines(capsys.readouterr().out)
    assert line.name == "glue.demo"


def test_glue_demo(capsys):
    assert cli.main(["glue-demo", "--instances", "100", "--seed", "2"]) == 0
    names = [line.name for line in check_lines(capsys.readouterr().out)]
    assert names == ["glue.preserves_comp", "sglue.strict", "universe.strict"]


def test_counterexample_without_sections(capsys):
    assert cli.main(["counterexample", "--tracker-size", "0", "--n-bound", "4"]) == 2
    out = capsys.readouterr().out
    assert "inconclusive: sections unchecked" in out
    assert "CHECK resizing.verdict INCONCLUSIVE" in out


def test_injected_survivor_fails_the_counterexample(capsys):
    argv = ["counterexample", "--tracker-size", "1", "--n-bound", "4", "--inject", "(K 20)", "--json"]
    assert cli.main(argv) == 1
    rows = {row["name"]: row for row in json.loads(capsys.readouterr().out)}
    assert rows["resizing.sections"]["status"] == "FAIL"
    assert rows["resizing.sections"]["details"]["survivors"] == "1"


def test_quiet_silences_warnings():
    cli.main(["homs", "0", "0", "-q"])
    assert logging.getLogger("cubench").level == logging.ERROR


@pytest.mark.slow
def test_report_writes_text_and_table(capsys, tmp_path):
    out = tmp_path / "build" / "report.txt"
    assert cli.main(["report", "--tracker-size", "0", "--n-bound", "4", "--out", str(out)]) == 2
    assert "== axioms ==" in out.read_text(encoding="utf-8")
    table = pd.read_csv(out.with_suffix(".csv"))
    assert list(table.columns) == ["suite", "check", "status", "details"]
    assert "resizing.sections" in set(table["check"])
    assert "== verdict ==" in capsys.readouterr().out
