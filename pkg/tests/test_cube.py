import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubench import cube
from cubench.cube import CubeMor, Variant
from cubench.errors import CapExceededError, DimensionError, ParseError


def homs(m, n, variant=Variant.B_ORD):
    return st.sampled_from(cube.enumerate_homs(m, n, variant))


@pytest.mark.parametrize("m, n, variant, expected", [
    (0, 1, Variant.B_ORD, 2),
    (1, 1, Variant.B_ORD, 3),
    (2, 1, Variant.B_ORD, 6),
    (1, 2, Variant.B_ORD, 9),
    (0, 1, Variant.B, 2),
    (1, 1, Variant.B, 4),
    (2, 1, Variant.B, 16),
])
def test_hom_counts(m, n, variant, expected):
    assert len(cube.enumerate_homs(m, n, variant)) == expected
    assert cube.hom_count(m, n, variant) == expected


def test_homs_are_listed_by_table():
    listed = [h.table for h in cube.enumerate_homs(1, 1)]
    assert listed == sorted(listed) == [(0, 0), (0, 1), (1, 1)]


def test_b_contains_the_reversal():
    reversal = CubeMor(Variant.B, 1, 1, (1, 0))
    assert reversal in cube.enumerate_homs(1, 1, Variant.B)
    with pytest.raises(DimensionError):
        CubeMor(Variant.B_ORD, 1, 1, (1, 0))


def test_oversized_hom_set_is_capped():
    with pytest.raises(CapExceededError):
        cube.enumerate_homs(4, 4, Variant.B)


@given(homs(1, 2), homs(2, 2), homs(2, 1))
def test_composition_is_associative(f, g, h):
    assert cube.compose(h, cube.compose(g, f)) == cube.compose(cube.compose(h, g), f)


@given(homs(2, 1))
def test_identities_are_units(f):
    assert cube.compose(cube.identity(1), f) == f
    assert cube.compose(f, cube.identity(2)) == f


def test_category_laws_on_small_cubes(variant):
    assert cube.check_category_laws(1, variant).ok


def test_connections_satisfy_their_equations(variant):
    verdict = cube.check_path_connection_algebra(variant)
    assert verdict.ok, verdict.failures


def test_corrupted_min_breaks_the_equations():
    broken = cube.corrupt(cube.mu(0), 3)
    assert broken.table == (0, 0, 0, 0)
    failures = cube.check_path_connection_algebra(Variant.B_ORD, mu0=broken).failures
    assert any(name.startswith("min") for name in failures)
    assert not any(name.startswith("max") for name in failures)


def test_corruption_must_stay_in_the_variant():
    with pytest.raises(DimensionError, match="not monotone"):
        cube.corrupt(cube.mu(0), 0)
    with pytest.raises(DimensionError, match="row 4"):
        cube.corrupt(cube.mu(0), 4)
    assert cube.corrupt(cube.mu(0, Variant.B), 0).table == (1, 0, 0, 1)


def test_endpoints_differ(variant):
    assert cube.delta(0, variant) != cube.delta(1, variant)
    assert cube.global_points_of_interval(variant) == [cube.delta(0, variant), cube.delta(1, variant)]


@pytest.mark.parametrize("c", [0, 1, 2])
def test_faces_split_the_projection(c):
    for e in (0, 1):
        assert cube.compose(cube.proj(c), cube.face(c, e)) == cube.identity(c)
        point = cube.compose(cube.last(c), cube.face(c, e))
        assert point == cube.compose(cube.delta(e), cube.bang(c))


@pytest.mark.parametrize("c", [0, 1])
def test_connection_map_restricts_to_the_path(c):
    # at j = 1 - e the squeeze mu_e(i, j) is i again
    for e in (0, 1):
        squeeze = cube.connection_map(c, e)
        keep = cube.face(c + 1, 1 - e)
        assert cube.compose(squeeze, keep) == cube.identity(c + 1)


def test_lift_keeps_the_last_coordinate():
    sigma = cube.delta(1)
    lifted = cube.lift(sigma)
    assert (lifted.src, lifted.dst) == (1, 2)
    assert lifted.table == (0b10, 0b11)


def test_format_uses_vertex_labels():
    assert cube.format_mor(cube.delta(0)) == "mor B_ord 0->1 [*↦0]"
    assert cube.format_mor(cube.bang(1)) == "mor B_ord 1->0 [0↦* 1↦*]"
    assert cube.format_mor(cube.mu(1)) == "mor B_ord 2->1 [00↦0 01↦1 10↦1 11↦1]"


@given(st.sampled_from([(1, 2), (2, 1), (2, 2), (0, 2)]).flatmap(lambda mn: homs(*mn)))
def test_printed_morphism_parses_back(f):
    assert cube.parse_mor(cube.format_mor(f)) == f


def test_ascii_arrow_is_accepted():
    assert cube.parse_mor("mor B 1->1 [0|->1 1|->0]") == CubeMor(Variant.B, 1, 1, (1, 0))


@pytest.mark.parametrize("text", [
    "mor B_ord 1->1 [0↦1 1↦0]",
    "mor B_ord 1->1 [0↦0]",
    "mor B_ord 1->1 [0↦0 1↦1 10↦1]",
    "mor C 0->1 [*↦0]",
    "mor B 2->1 [0↦0 1↦1 10↦1 11↦0]",
    "mor B 1->2 [0↦01 1↦1]",
    "mor B 1->1 [*↦0 1↦1]",
    "mor B 1->1 [0↦0 0↦1 1↦1]",
    "mor B 9->1 []",
])
def test_malformed_morphisms(text):
    with pytest.raises(ParseError):
        cube.parse_mor(text)


def test_repeated_vertex_is_named():
    with pytest.raises(ParseError, match="vertex 01 is given twice"):
        cube.parse_mor("mor B_ord 2->1 [00↦0 01↦0 01↦1 10↦0 11↦1]", line=4)
