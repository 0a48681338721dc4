import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubench import pca
from cubench.errors import ParseError
from cubench.pca import IFZ, K, PRED, S, SUCC, App, Num


def codes(max_leaves=4):
    leaves = st.sampled_from(pca.leaves())
    return st.recursive(leaves, lambda inner: st.builds(App, inner, inner), max_leaves=max_leaves)


def omega():
    self_apply = pca.app(S, pca.identity_code(), pca.identity_code())
    return App(self_apply, self_apply)


@given(st.integers(min_value=0, max_value=500))
def test_identity_returns_its_argument(n):
    assert pca.result_number(pca.apply_to_number(pca.identity_code(), n)) == n


@given(st.integers(min_value=0, max_value=50), st.integers(min_value=0, max_value=50))
def test_constant_ignores_its_argument(k, n):
    assert pca.result_number(pca.apply_to_number(pca.constant_code(k), n)) == k


def test_arithmetic_primitives():
    assert pca.result_number(pca.apply_to_number(SUCC, 4)) == 5
    assert pca.result_number(pca.apply_to_number(PRED, 4)) == 3
    assert pca.result_number(pca.apply_to_number(PRED, 0)) == 0


def test_ifz_branches():
    zero_test = pca.app(IFZ, Num(0), Num(7), Num(9))
    nonzero_test = pca.app(IFZ, Num(3), Num(7), Num(9))
    assert pca.result_number(pca.evaluate(zero_test)) == 7
    assert pca.result_number(pca.evaluate(nonzero_test)) == 9


def test_pairs_project():
    pair = pca.app(pca.PAIR, Num(1), Num(2))
    assert pca.result_number(pca.evaluate(App(pca.FST, pair))) == 1
    assert pca.result_number(pca.evaluate(App(pca.SND, pair))) == 2


def test_self_application_runs_out_of_budget():
    result = pca.evaluate(omega(), budget=300)
    assert isinstance(result, pca.Diverged)
    assert result.budget == 300
    assert pca.result_number(result) is None


def test_numeral_applied_is_stuck():
    result = pca.apply_to_number(Num(5), 2)
    assert isinstance(result, pca.Stuck)
    assert pca.result_number(result) is None


def test_partial_application_is_a_value():
    result = pca.apply_to_number(K, 3)
    assert isinstance(result, pca.Value)
    assert result.code == App(K, Num(3))
    assert pca.result_number(result) is None


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        pca.evaluate(Num(0), budget=0)


@pytest.mark.parametrize("size, expected", [(1, 17), (2, 306), (3, 10132)])
def test_code_counts(size, expected):
    assert pca.count_codes(size) == expected
    assert sum(1 for _ in pca.enumerate_codes(size)) == expected


def test_enumeration_starts_with_constants_then_literals():
    first = list(pca.enumerate_codes(1))
    assert first[0] == S
    assert first[1] == K
    assert first[-1] == Num(8)


def test_enumeration_rejects_empty_bound():
    with pytest.raises(ValueError):
        list(pca.enumerate_codes(0))


@given(codes(3))
def test_index_matches_enumeration_order(code):
    size = pca.code_size(code)
    index = pca.index_of_code(code)
    assert index is not None
    assert next(c for i, c in enumerate(pca.enumerate_codes(size)) if i == index) == code


@given(codes(6))
def test_printed_code_parses_back(code):
    assert pca.parse_code(pca.format_code(code)) == code


def test_format_flattens_left_spine():
    assert pca.format_code(pca.identity_code()) == "(S K K)"
    assert pca.parse_code("(K 20)") == pca.constant_code(20)


@pytest.mark.parametrize("text", ["", "(K)", "(S K", "Q 1", "K )"])
def test_malformed_code_text(text):
    with pytest.raises(ParseError):
        pca.parse_code(text)
