import math

import pytest

from components import charts
from cubench.cube import Variant
from cubench.verdict import CheckLine, Status
from data.calculations import checks_frame, code_count_table, hom_count_table, status_summary


def test_status_bar_has_a_trace_per_status():
    lines = [CheckLine.of("ax1.a", Status.PASS), CheckLine.of("glue.b", Status.FAIL)]
    fig = charts.status_bar(status_summary(checks_frame(lines)))
    assert [trace.name for trace in fig.data] == ["PASS", "FAIL", "INCONCLUSIVE"]
    assert fig.layout.barmode == "stack"


def test_capped_cells_are_blank_in_the_heatmap():
    fig = charts.hom_count_heatmap(hom_count_table(Variant.B), "B")
    z = fig.data[0].z
    assert math.isnan(z[4][4])
    assert z[1][1] == pytest.approx(math.log10(4))


def test_code_growth_is_on_a_log_axis():
    fig = charts.code_growth(code_count_table(3))
    assert fig.layout.yaxis.type == "log"
    assert list(fig.data[0].y) == [17, 306, 10132]
