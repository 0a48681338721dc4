import pytest

from cubench import asm, pca, resizing
from cubench.verdict import Status


@pytest.fixture(scope="module")
def small_window():
    return resizing.build_nabla_A(level_bound=1, n_max=4, width=3)


def test_window_family_is_a_proposition(small_window):
    certificate = small_window.hprop
    assert certificate.ok, certificate.failures
    # five base points, three one-vertex elements each
    assert certificate.pairs_checked == 5 * 3 * 3


def test_window_family_is_fibrant(small_window):
    certificate = resizing.check_fibrancy(small_window, samples=30, seed=7)
    assert certificate.ok, certificate.failures
    assert certificate.problems_checked == 30


def test_fibers_are_uniform_and_well_supported(small_window):
    uniformity, support = resizing.certify_uniform_well_supported(small_window)
    assert uniformity.ok, uniformity.failures
    assert uniformity.common[(1, 2)] == pca.constant_code(2)
    assert len(uniformity.common) == 2 * 5
    assert support.ok, support.failures
    assert support.base_code == pca.identity_code()


def test_injected_large_constant_survives():
    summary = resizing.refute_all_sections(size_bound=0, n_bound=16, inject=[pca.constant_code(20)])
    assert summary.candidates == 1
    assert [r.candidate for r in summary.survivors] == [pca.constant_code(20)]


def test_two_leaf_sections_are_all_refuted():
    summary = resizing.refute_all_sections(size_bound=2, n_bound=16)
    assert summary.candidates == 17 + 306
    assert summary.survivors == ()
    assert summary.inconclusive == ()


def test_orthogonal_to_the_modest_samples(small_window):
    outcomes = resizing.orthogonality_suite(small_window)
    assert [o.name for o in outcomes] == ["X1", "X2", "X3", "Xγ"]
    for outcome in outcomes:
        assert outcome.modest and outcome.result.status is Status.PASS, outcome.result.note
        # two stages over five base points
        assert len(outcome.cells) == 2 * 5
        assert outcome.unnatural == () and outcome.skipped == 0
    cells = dict(outcomes[1].cells)
    assert set(cells[(1, 2)].points) == {"a", "b"}
    graded = dict(outcomes[3].cells)
    assert [len(graded[(0, gamma)].points) for gamma in range(5)] == [1, 2, 3, 1, 2]


def test_stage_one_window_fiber_is_realized_by_gamma_and_diagonals(small_window):
    source = resizing.window_assembly(small_window, 1, 2)
    assert len(source) == 3 ** 2
    assert source.E((3, 3)) == frozenset({2, 3})
    assert source.E((3, 5)) == frozenset({2})


def test_shared_realizer_control_fails(small_window):
    (outcome,) = resizing.orthogonality_suite(small_window, [resizing.non_modest_control()])
    assert not outcome.modest
    assert outcome.result.status is Status.FAIL
    assert not outcome.result.constants_bijective


def test_control_cells_over_the_map_space_cap_are_skipped(small_window):
    (outcome,) = resizing.orthogonality_suite(small_window, [resizing.non_modest_control()], map_space_cap=100)
    # 2 ** 9 maps out of every stage-one fiber
    assert outcome.skipped == 5
    assert len(outcome.cells) == 5
    assert "5 cells over the map-space cap skipped" in outcome.result.note


def test_points_that_do_not_restrict_are_reported(small_window):
    X2 = asm.assembly({"a": {0}, "b": {1}}, "X2")
    leaky = resizing.SampleFamily("Xleaky", lambda c, gamma: X2,
                                  lambda x, gamma, sigma: x if sigma.src == sigma.dst else "ghost")
    (outcome,) = resizing.orthogonality_suite(small_window, [leaky])
    assert outcome.modest
    assert all(r.status is Status.PASS for _, r in outcome.cells)
    assert outcome.result.status is Status.FAIL
    assert outcome.unnatural and "'ghost'" in outcome.unnatural[0]


def test_undecided_cells_are_reported_per_sample(small_window):
    X2 = resizing.constant_sample(asm.assembly({"a": {0}, "b": {1}}, "X2"))
    # no single leaf sends every realizer of a window fiber to one numeral
    (outcome,) = resizing.orthogonality_suite(small_window, [X2], size_bound=1)
    assert outcome.result.status is Status.INCONCLUSIVE
    assert len(outcome.undecided_cells) == 10
    assert outcome.result.inconclusive == 10 * 4
    assert outcome.result.note.startswith("undecided at 10 cells (stage 0 over 0")


def test_undecided_sample_is_named_in_the_verdict(small_window):
    X2 = resizing.constant_sample(asm.assembly({"a": {0}, "b": {1}}, "X2"))
    report = resizing.run_pipeline(n_bound=4, level=1, width=3, check_sections=False, samples=[X2])
    report.orthogonality = resizing.orthogonality_suite(small_window, [X2], size_bound=1)
    status, line = resizing.final_verdict(report)
    assert status is Status.INCONCLUSIVE
    assert line.startswith("inconclusive: orthogonality undecided for X2 undecided at 10 cells")


def _data_without_own_realizer(broken: int) -> asm.FamilyOfAssemblies:
    """A(broken) still names broken as its common realizer but no longer accepts it."""
    base, honest = asm.counterexample_data()

    def fiber(n):
        A = honest.fiber(n)
        if n != broken:
            return A
        return asm.EnumerableAssembly(A.name, A.element_at, lambda r, m: r == m, A.sample_realizer,
                                      designated=n)

    return asm.FamilyOfAssemblies(base, fiber, "A")


def test_fiber_missing_its_common_realizer_fails_uniformity():
    nabla = resizing.build_nabla_A(level_bound=1, n_max=4, width=3, data=_data_without_own_realizer(2))
    uniformity, _ = resizing.certify_uniform_well_supported(nabla)
    assert not uniformity.ok
    assert [f for f in uniformity.failures if "A(2)" in f]
    assert not [key for key in uniformity.common if key[1] == 2]
    assert len(uniformity.common) == 2 * 4


def test_surviving_section_fails_the_verdict():
    report = resizing.run_pipeline(size_bound=0, n_bound=4, level=1, width=3, inject=[pca.constant_code(20)])
    status, line = resizing.final_verdict(report)
    assert status is Status.FAIL
    assert "(K 20)" in line
    sections = next(l for l in report.check_lines() if l.name == "resizing.sections")
    assert sections.status is Status.FAIL


def test_unchecked_sections_leave_the_verdict_open():
    report = resizing.run_pipeline(n_bound=4, level=1, width=3, check_sections=False)
    assert resizing.final_verdict(report) == (Status.INCONCLUSIVE, "inconclusive: sections unchecked")
    assert "== verdict ==" in report.render()


@pytest.mark.slow
def test_too_few_candidates_is_inconclusive():
    report = resizing.run_pipeline(size_bound=2)
    status, line = resizing.final_verdict(report)
    assert status is Status.INCONCLUSIVE
    assert "only 323 candidates" in line


@pytest.mark.slow
def test_counterexample_confirmed_at_bounds():
    report = resizing.run_pipeline()
    status, line = resizing.final_verdict(report)
    assert status is Status.PASS, report.render()
    assert line == f"{resizing.CONFIRMED} (S=3, N=16, budget=2000)"
    assert report.sections.candidates == 17 + 306 + 10132
    assert all(o.result.status is Status.PASS and len(o.cells) == 3 * 17 for o in report.orthogonality)
    assert report.check_lines()[-1].render() == "CHECK resizing.verdict PASS"
