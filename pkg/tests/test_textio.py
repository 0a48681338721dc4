import pytest

from cubench import asm, cli, kan, textio
from cubench.errors import ParseError

CUBESET_T2 = """cubeset T variant=B_ord level=2
object 0 { * }
object 1 { * }
object 2 { * }
end
"""


def uncommented(text):
    return "".join(line + "\n" for line in text.splitlines() if not line.startswith("#"))


@pytest.mark.parametrize("name", ["discrete.prob", "glue_total.prob", "interval.cubeset",
                                  "nabla_mixed.prob", "universe.prob"])
def test_samples_print_back(samples_dir, name):
    text = (samples_dir / name).read_text(encoding="utf-8")
    assert textio.format_document(textio.parse_document(text)) == uncommented(text)


@pytest.mark.parametrize("name, expected", [
    ("discrete.prob", "a"),
    ("nabla_mixed.prob", "(b b)"),
    ("glue_total.prob", "[a|x]"),
])
def test_sample_problems_solve(samples_dir, name, expected):
    doc = textio.parse_document((samples_dir / name).read_text(encoding="utf-8"))
    (decl,) = doc.problems()
    problem, built = textio.build_problem(doc, decl)
    result = kan.comp(built.fib, problem)
    assert textio.show(built, result, problem.c, problem.end) == expected


def test_universe_sample_is_strict(samples_dir):
    doc = textio.parse_document((samples_dir / "universe.prob").read_text(encoding="utf-8"))
    assert doc.cubeset is None
    first, second = doc.problems()
    result, far = textio.run_universe(first)
    assert cli.carrier_labels(result) == cli.carrier_labels(far) == ["a", "b"]
    assert second.cof == "bot" and second.direction == "1to0"


def test_terms():
    term = textio.parse_term("((a b) [|y] {x↦1})")
    assert term == (("a", "b"), textio.GlueTerm(None, "y"), {"x": "1"})
    assert textio.format_term(term) == "((a b) [|y] {x↦1})"


def test_unknown_variant_points_at_its_line():
    with pytest.raises(ParseError) as info:
        textio.parse_document("# header\ncubeset T variant=C level=1\n")
    assert info.value.line == 2
    assert "unknown variant" in str(info.value)


def test_unterminated_tuple_reports_a_column():
    with pytest.raises(ParseError) as info:
        textio.parse_term("(a b", line=4)
    assert info.value.line == 4
    assert info.value.column > 1


def test_missing_action_is_rejected():
    text = "cubeset I variant=B_ord level=1\nobject 0 { 0 1 }\nobject 1 { 0 i 1 }\nend\n"
    with pytest.raises(ParseError, match="no action given"):
        textio.parse_document(text)


def test_sieve_table_must_be_downward_closed():
    text = CUBESET_T2 + "sieve s at 1 level 1 { mor B_ord 1->1 [0↦0 1↦1]:1 }\n"
    with pytest.raises(ParseError) as info:
        textio.parse_document(text)
    assert info.value.line == 6


def test_families_need_a_cubeset():
    with pytest.raises(ParseError, match="cubeset first"):
        textio.parse_document("family A discrete { a b }\n")


def test_unknown_family_in_a_problem():
    doc = textio.parse_document(CUBESET_T2 + "sieve none at 0 level 0 bot\n"
                                "comp family=Z stage=0 path=* dir=0to1 sieve=none partial={} base=a\n")
    with pytest.raises(ParseError, match="unknown family"):
        textio.build_problem(doc, doc.problems()[0])


def test_base_must_name_an_element():
    doc = textio.parse_document(CUBESET_T2 + "family A discrete { a b }\nsieve none at 0 level 0 bot\n"
                                "comp family=A stage=0 path=* dir=0to1 sieve=none partial={} base=z\n")
    with pytest.raises(ParseError, match="not an element"):
        textio.build_problem(doc, doc.problems()[0])


def test_assembly_text():
    A = asm.assembly({"a": {0}, "b": {2, 1}}, "A")
    text = textio.assembly_to_text(A)
    assert text == "element a realizers 0\nelement b realizers 1 2\n"
    back = textio.assembly_from_text(text, "A")
    assert back.elements == ("a", "b")
    assert back.E("b") == frozenset({1, 2})


@pytest.mark.parametrize("text, message", [
    ("element a realizers\n", "no realizer"),
    ("element a realizers 0\nelement a realizers 1\n", "declared twice"),
    ("element a 0\n", "realizers"),
])
def test_malformed_assemblies(text, message):
    with pytest.raises(ParseError, match=message):
        textio.assembly_from_text(text)


def test_family_text():
    fibers = {"0": asm.assembly({"1": {0, 1}}), "1": asm.assembly({"2": {1, 2}, "3": {1, 3}})}
    parsed = textio.family_from_text(textio.family_to_text(fibers))
    assert list(parsed) == ["0", "1"]
    assert parsed["1"].E("3") == frozenset({1, 3})
    assert not asm.is_modest(parsed["1"])


def test_unclosed_fiber():
    with pytest.raises(ParseError, match="not closed"):
        textio.family_from_text("fiber 0 {\n  element 1 realizers 0\n")
