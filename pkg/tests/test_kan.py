import numpy as np
import pytest

from cubench import cli, cube, kan, psh, textio
from cubench.cube import Variant
from cubench.errors import AdherenceError, LevelBudgetError, PostconditionError


@pytest.fixture
def letters(terminal3):
    return psh.constant_family(terminal3, ["a", "b"], name="A")


@pytest.fixture
def nabla2():
    return psh.codiscrete(psh.terminal(2), lambda gamma: ["a", "b"])


def test_discrete_composition_returns_the_base(letters):
    alpha = kan.discrete_fib(letters)
    tube = psh.cof_top(0, 1)
    partial = {s: "b" for s in tube.members}
    P = kan.make_problem(letters, 0, "*", 0, tube, partial, "b")
    assert kan.comp(alpha, P) == "b"
    assert kan.admissible(P) == ["b"]


def test_transport_and_fill_in_a_discrete_family(letters):
    alpha = kan.discrete_fib(letters)
    assert kan.tp(alpha, 0, "*", 1, "a") == "a"
    assert kan.fill(alpha, kan.empty_problem(letters, 0, "*", 0, "a")) == "a"


def test_interval_is_not_discrete():
    I = psh.presheaf_family(psh.terminal(2), psh.interval(2))
    with pytest.raises(ValueError):
        kan.discrete_fib(I)


def test_base_off_the_fiber_is_rejected(letters):
    with pytest.raises(AdherenceError):
        kan.empty_problem(letters, 0, "*", 0, "z")


def test_tube_must_cover_the_sieve(letters):
    with pytest.raises(AdherenceError):
        kan.make_problem(letters, 0, "*", 0, psh.cof_top(0, 1), {}, "a")


def test_problem_above_the_level_is_refused(letters):
    with pytest.raises(LevelBudgetError):
        kan.empty_problem(letters, 3, "*", 0, "a")


def test_solver_answer_is_checked(letters):
    liar = kan.FibStructure(letters, lambda P: "b", "liar")
    tube = psh.cof_top(0, 1)
    P = kan.make_problem(letters, 0, "*", 0, tube, {s: "a" for s in tube.members}, "a")
    with pytest.raises(PostconditionError):
        kan.comp(liar, P)


def test_codiscrete_tube_wins_on_the_sieve(nabla2):
    alpha = kan.nabla_fib(nabla2)
    tube = psh.cof_top(0, 0)
    P = kan.make_problem(nabla2, 0, "*", 0, tube, {cube.identity(0): ("a", "b")}, ("a",))
    assert kan.comp(alpha, P) == ("b",)
    assert kan.admissible(P) == [("b",)]


def test_codiscrete_base_wins_off_the_sieve(nabla2):
    alpha = kan.nabla_fib(nabla2)
    assert kan.tp(alpha, 0, "*", 0, ("a",)) == ("a",)
    assert kan.tp(alpha, 0, "*", 1, ("b",)) == ("b",)


def test_nabla_path_joins_its_ends():
    assert kan.nabla_path(("a",), ("b",)) == ("a", "b")
    assert kan.nabla_path(("a", "b"), ("b", "a")) == ("a", "b", "b", "a")
    with pytest.raises(ValueError):
        kan.nabla_path(("a",), ("a", "b"))


def test_sigma_composes_componentwise(terminal3, letters):
    B = psh.constant_family(psh.sigma(terminal3, letters), ["p", "q"], name="B")
    fib = kan.fib_sigma(kan.discrete_fib(letters), kan.discrete_fib(B))
    P = kan.empty_problem(fib.family, 0, "*", 0, ("a", "q"))
    assert kan.comp(fib, P) == ("a", "q")


def test_paths_in_a_discrete_family(letters):
    a0 = psh.global_section(letters, "a")
    fib = kan.fib_path(kan.discrete_fib(letters), a0, a0)
    assert fib.family.fiber(0, "*") == ("a",)
    assert kan.comp(fib, kan.empty_problem(fib.family, 0, "*", 0, "a")) == "a"


def test_iso_equivalence_extends_the_empty_system(terminal3):
    A = psh.constant_family(terminal3, ["a", "b"], name="A")
    B = psh.constant_family(terminal3, ["x", "y"], name="B")
    table = {"a": "x", "b": "y"}
    undo = {v: k for k, v in table.items()}
    equiv = kan.iso_equiv(lambda x, c, g: table[x], lambda y, c, g: undo[y], kan.discrete_fib(B))
    a, q = equiv.extend(0, "*", psh.cof_bot(0, 2), {}, "y")
    assert a == "b"
    assert kan.path_ends(B, q, 0, "*") == ("y", "y")


def test_glue_over_a_total_cofibration_is_a():
    line = cli.glue_preservation(Variant.B_ORD, instances=100, seed=3)
    details = dict(line.details)
    assert line.status.value == "PASS", details
    assert details["instances"] == 100
    # top sieves on non-degenerate paths carry the composite off the base
    assert details["moved"] > 0


def test_strict_glue_is_a_on_the_cofibration():
    line = cli.sglue_strictness(Variant.B_ORD, instances=100, seed=1)
    assert line.status.value == "PASS", line.details
    assert dict(line.details)["instances"] == 100


def test_glue_needs_two_levels():
    small = psh.constant_family(psh.terminal(1), ["a"], name="S")
    G = kan.GlueData(psh.constant_cof(small.base, True, 0), kan.discrete_fib(small), kan.discrete_fib(small),
                     lambda x, c, g: x, kan.iso_equiv(lambda x, c, g: x, lambda y, c, g: y, kan.discrete_fib(small)))
    with pytest.raises(LevelBudgetError):
        kan.glue_type(G)


def test_relabelled_line_ends():
    line = kan.relabelled_line(["a", "b", "c"], {"a": "b", "b": "c", "c": "a"}, 3)
    assert kan.line_endpoint(line, 0).family.fiber(0, "*") == ("a", "b", "c")
    assert kan.line_endpoint(line, 1).family.fiber(0, "*") == ("b", "c", "a")


def test_universe_composition_is_strict_where_phi_holds():
    line = kan.relabelled_line(["a", "b"], {"a": "b", "b": "a"}, 3)
    near = kan.line_endpoint(line, 0)
    result = kan.universe_comp(0, True, line, near)
    assert cli.carrier_labels(result) == ["a", "b"]


def test_universe_composition_without_a_line():
    B = kan.discrete_code(["u", "v"], 3)
    result = kan.universe_comp(1, False, None, B)
    assert cli.carrier_labels(result) == ["u", "v"]
    with pytest.raises(AdherenceError):
        kan.universe_comp(1, True, None, B)


def test_identity_elimination_on_refl():
    P = psh.interval(2)
    a = cube.delta(0)
    ids, total = kan.id_telescope(P, a)
    C = psh.constant_family(total, ["u", "v"], name="C")
    target = kan.refl_point(P, a, ids.sieve_level)
    assert kan.id_elim(P, a, kan.discrete_fib(C), "v", target) == "v"


def test_path_elimination_and_its_computation_path():
    P = psh.interval(3)
    a = cube.delta(0)
    _, total = kan.path_telescope(P, a)
    C = psh.constant_family(total, ["u", "v"], name="C")
    out = kan.path_elim(P, a, kan.discrete_fib(C), "u", (cube.delta(1), cube.identity(1)))
    assert out.value == "u"
    assert out.ends == ("u", "u")


def _built_families():
    T2, T3, I2 = psh.terminal(2), psh.terminal(3), psh.interval(2)
    pair = {"elements": ("a", "b"), "second": ("x", "y")}
    glue = {**pair, "f": {"a": "y", "b": "x"}}
    specs = [
        ("discrete", {"elements": ("a", "b", "c")}, I2, 1),
        ("nabla", {"elements": ("a", "b")}, T2, 1),
        ("path", {"elements": ("a", "b"), "from": "a", "to": "b"}, T3, 1),
        ("id", {"elements": ("a", "b"), "from": "a", "to": "a"}, T3, 0),
        ("sigma", pair, T3, 1),
        ("pi", pair, T3, 0),
        ("glue", {**glue, "cof": "top"}, T3, 0),
        ("glue", {**glue, "cof": "bot"}, T3, 0),
    ]
    cases = []
    for kind, args, Gamma, top_stage in specs:
        built = textio.build_family(kind, args, Gamma, 0)
        cases.append((kind, built.family, built.fib, top_stage))
    line = kan.relabelled_line(["s0", "s1"], {"s0": "t1", "s1": "t0"}, 3)
    for e, holds in ((0, True), (1, True), (0, False)):
        code = kan.universe_comp(e, holds, line if holds else None, kan.line_endpoint(line, e))
        cases.append(("universe", code.family, code.fib, 0))
    return cases


def _cut_problem(F, rng, top_stage, sieves):
    """A problem read off a random element one stage up, on a random sieve."""
    variant = F.variant
    c = int(rng.integers(min(F.level, top_stage + 1)))
    key = (c, F.level - 1)
    if key not in sieves:
        sieves[key] = psh.enumerate_sieves(c, F.level - 1, variant)
    phi = sieves[key][int(rng.integers(len(sieves[key])))]
    paths = F.base.carrier(c + 1)
    path = paths[int(rng.integers(len(paths)))]
    above = F.fiber(c + 1, path)
    y = above[int(rng.integers(len(above)))]
    e = int(rng.integers(2))
    partial = {s: F.act(y, path, cube.lift(s)) for s in phi.members}
    return kan.make_problem(F, c, path, e, phi, partial, F.act(y, path, cube.face(c, e, variant)))


def test_random_problems_on_every_built_family_are_solved_admissibly():
    rng = np.random.default_rng(2024)
    cases = _built_families()
    sieves: dict = {}
    checked, mixed, seen = 0, 0, set()
    for k in range(660):
        kind, F, fib, top_stage = cases[k % len(cases)]
        P = _cut_problem(F, rng, top_stage, sieves)
        result = kan.comp(fib, P)
        assert result in kan.admissible(P), (kind, P.c, P.e, P.phi.sorted_members())
        full = set(psh.cof_top(P.c, P.phi.level, P.variant).members)
        mixed += bool(P.phi.members) and set(P.phi.members) != full
        seen.add(kind)
        checked += 1
    assert checked >= 500
    assert mixed > 0
    assert seen == {"discrete", "nabla", "path", "id", "sigma", "pi", "glue", "universe"}
