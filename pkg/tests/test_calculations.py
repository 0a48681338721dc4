import pandas as pd

from cubench import resizing
from cubench.cube import Variant
from cubench.verdict import CheckLine, Status
from data.calculations import (
    checks_frame,
    code_count_table,
    hom_count_table,
    load_samples,
    orthogonality_frame,
    status_summary,
)
from data.validation import InputValidator


def sample_lines():
    return [
        CheckLine.of("ax1.distinct_endpoints", Status.PASS, objects=3),
        CheckLine.of("ax2.connection_min", Status.FAIL, first="min"),
        CheckLine.of("resizing.sections", Status.INCONCLUSIVE, candidates=17),
    ]


def test_checks_frame():
    frame = checks_frame(sample_lines())
    assert list(frame.columns) == ["suite", "check", "status", "details"]
    assert list(frame["suite"]) == ["ax1", "ax2", "resizing"]
    assert frame.loc[2, "details"] == "candidates=17"


def test_status_summary_keeps_every_status():
    summary = status_summary(checks_frame(sample_lines(), suite="all"))
    assert list(summary.columns) == ["suite", "PASS", "FAIL", "INCONCLUSIVE"]
    assert summary.iloc[0].tolist() == ["all", 1, 1, 1]
    assert list(status_summary(pd.DataFrame()).columns) == ["suite", "PASS", "FAIL", "INCONCLUSIVE"]


def test_hom_count_table():
    ordered = hom_count_table(Variant.B_ORD, max_dim=2)
    assert ordered.loc[1, 1] == 3
    assert ordered.loc[2, 1] == 6
    assert ordered.loc[0, 2] == 4
    full = hom_count_table(Variant.B)
    assert full.loc[1, 1] == 4
    assert full.loc[4, 4] == -1


def test_code_counts():
    assert code_count_table(2)["codes up to size"].tolist() == [17, 306]


def test_samples_are_found():
    assert set(load_samples()) == {"discrete.prob", "glue_total.prob", "interval.cubeset",
                                   "nabla_mixed.prob", "universe.prob"}


def test_validation_messages():
    assert InputValidator.validate_all(3, "B_ord", 3, 2000, 16) == []
    problems = InputValidator.validate_all(0, "C", 9, 0, 1)
    assert len(problems) == 5
    assert InputValidator.validate_dimension(5)[0] is False


def test_orthogonality_frame_counts_cells():
    report = resizing.run_pipeline(n_bound=4, level=1, width=3, check_sections=False)
    frame = orthogonality_frame(report)
    assert frame["sample"].tolist() == ["X1", "X2", "X3", "Xγ"]
    assert frame["cells"].tolist() == [10] * 4
    assert frame["undecided cells"].sum() == 0
    assert frame["natural"].all()
