import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubench import asm, pca
from cubench.errors import NotModestError, PERError
from cubench.pca import App, K, Num
from cubench.verdict import Status


def omega():
    self_apply = pca.app(pca.S, pca.identity_code(), pca.identity_code())
    return App(self_apply, self_apply)


@pytest.fixture
def shared():
    """Two points that cannot be told apart: both realized by 7."""
    return asm.assembly({"p": {7, 1}, "q": {7, 2}}, "A")


@pytest.fixture
def two_points():
    return asm.assembly({"a": {0}, "b": {1}}, "X2")


def test_every_element_needs_a_realizer():
    with pytest.raises(ValueError):
        asm.assembly({"a": {0}, "b": set()})


def test_modest_means_disjoint_realizers(shared, two_points):
    assert asm.is_modest(two_points)
    assert not asm.is_modest(shared)


def test_per_classes():
    per = asm.PER.of({(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)})
    assert per.classes() == [frozenset({0, 1}), frozenset({2})]
    modest = asm.modest_of_per(per)
    assert asm.is_modest(modest)
    assert asm.per_of_modest(modest) == per


def test_per_must_be_symmetric():
    with pytest.raises(PERError):
        asm.PER.of({(0, 0), (0, 1), (1, 1)})


def test_non_modest_assembly_has_no_per(shared):
    with pytest.raises(NotModestError):
        asm.per_of_modest(shared)


def test_uniform_finite_assembly(shared, two_points):
    verdict = asm.is_uniform(shared)
    assert verdict.ok
    assert verdict.common == {None: 7}
    refused = asm.is_uniform(two_points)
    assert not refused.ok
    assert refused.refutation == ("a", "b")


def test_constant_map_is_tracked_by_k(shared):
    X1 = asm.assembly({"*": {0}}, "X1")
    tracker = asm.find_tracker(shared, X1, {"p": "*", "q": "*"}, size_bound=2)
    assert tracker == pca.constant_code(0)
    assert asm.tracks(tracker, shared, X1, {"p": "*", "q": "*"})


def test_split_map_is_untrackable(shared, two_points):
    function = {"p": "a", "q": "b"}
    assert asm.untrackable_witness(shared, two_points, function) == ("p", "q", 7)
    assert asm.find_tracker(shared, two_points, function, size_bound=3) is None


def test_check_tracks_reports_a_witness(two_points):
    swap = asm.TrackedMap(two_points, two_points, {"a": "b", "b": "a"}, pca.identity_code())
    failure = asm.check_tracks(swap)
    assert failure is not None
    assert failure.element == "a"
    assert failure.realizer == 0


def test_isomorphic_relabelling(two_points):
    other = asm.assembly({"u": {0}, "v": {1}}, "Y")
    found = asm.is_isomorphic(two_points, other)
    assert found is not None
    bijection, there, back = found
    assert bijection == {"a": "u", "b": "v"}
    assert asm.tracks(there, two_points, other, bijection)


def test_orthogonal_to_modest_target(shared, two_points):
    result = asm.orthogonality_check(shared, two_points, size_bound=2)
    assert result.status is Status.PASS
    assert result.constants_bijective and result.precomposition_bijective
    # p and q share 7, so the two split maps are never enumerated
    assert (result.tracked, result.refuted, result.inconclusive, result.ruled_out) == (2, 0, 0, 2)
    assert result.points == {"a": pca.constant_code(0), "b": pca.constant_code(1)}


def test_sharing_components_follow_chains_of_realizers():
    chain = asm.assembly({"p": {1, 2}, "q": {2, 3}, "r": {3}, "s": {9}}, "chain")
    assert sorted(asm.sharing_components(chain)) == [("p", "q", "r"), ("s",)]


def test_exponential_into_modest_target_skips_split_maps(two_points):
    chain = asm.assembly({"p": {1, 2}, "q": {2, 3}, "r": {3}, "s": {9}}, "chain")
    maps = asm.exponential(chain, two_points, size_bound=2)
    assert maps.ruled_out == 2 ** 4 - 2 ** 2
    assert maps.refuted == {}
    assert all(image[0] == image[1] == image[2] for image in [*maps.tracked, *maps.inconclusive])


def test_exponential_into_non_modest_target_enumerates_everything(shared):
    control = asm.assembly({"a": {0, 1}, "b": {1}}, "Xshared")
    maps = asm.exponential(shared, control, size_bound=2)
    assert maps.ruled_out == 0
    assert len(maps.tracked) + len(maps.refuted) + len(maps.inconclusive) == 4


def test_shared_realizer_in_target_breaks_orthogonality(shared):
    control = asm.assembly({"a": {0, 1}, "b": {1}}, "Xshared")
    result = asm.orthogonality_check(shared, control, size_bound=2)
    assert result.status is Status.FAIL
    assert not result.constants_bijective


def test_truncation_unions_realizers(shared):
    truncated = asm.trunc_assembly(shared)
    assert truncated.elements == ("*",)
    assert truncated.E("*") == frozenset({1, 2, 7})


# ----------------------------------------------------------------------------
# the counterexample family
# ----------------------------------------------------------------------------

def test_counterexample_data():
    gamma, family = asm.counterexample_data()
    assert gamma.realizes(3, 2) and not gamma.realizes(2, 2)
    fiber = family.fiber(2)
    assert fiber.elements(3) == [3, 4, 5]
    assert fiber.realizes(2, 5) and fiber.realizes(5, 5)
    assert not fiber.realizes(4, 5)


@given(st.integers(min_value=0, max_value=40))
def test_each_fiber_is_uniform_in_its_index(n):
    _, family = asm.counterexample_data()
    verdict = asm.is_uniform(family.fiber(n), sample_bound=8)
    assert verdict.ok
    assert verdict.common == {None: n}


def test_family_is_well_supported_by_identity():
    _, family = asm.counterexample_data()
    verdict = asm.is_well_supported(family, pca.identity_code(), sample_bound=6)
    assert verdict.ok
    assert verdict.checked > 0
    assert not asm.is_well_supported(family, pca.constant_code(0), sample_bound=6).ok


def test_truncated_fiber_is_realized_from_its_index():
    _, family = asm.counterexample_data()
    truncated = asm.trunc_assembly(family.fiber(3))
    assert truncated.elements(5) == ["*"]
    assert truncated.realizes(3, "*") and truncated.realizes(9, "*")
    assert not truncated.realizes(2, "*")


def test_large_constant_survives_a_short_window():
    outcome = asm.refute_section(pca.constant_code(20), n_bound=16)
    assert not outcome.refuted
    assert asm.refute_section(pca.constant_code(20), n_bound=25).kind == "too-small"


def test_identity_is_refuted_by_a_conflict():
    outcome = asm.refute_section(pca.identity_code(), n_bound=16)
    assert outcome.refuted
    assert (outcome.kind, outcome.n, outcome.m, outcome.values) == ("conflict", 0, 3, (2, 3))
    assert "forced to both 2 and 3" in outcome.describe()


def test_small_constant_is_too_small():
    outcome = asm.refute_section(pca.constant_code(0), n_bound=16)
    assert (outcome.kind, outcome.n, outcome.m, outcome.values) == ("too-small", 1, 2, (0,))


def test_numeral_candidate_is_stuck():
    outcome = asm.refute_section(Num(5), n_bound=16)
    assert outcome.refuted
    assert outcome.kind == "stuck"


def test_diverging_candidate_is_marked():
    outcome = asm.refute_section(App(K, omega()), n_bound=16, budget=300)
    assert outcome.kind == "diverged"


@given(st.integers(min_value=0, max_value=14))
def test_every_small_constant_is_refuted(k):
    assert asm.refute_section(pca.constant_code(k), n_bound=16).refuted
