"""
Assemblies over the combinatory evaluator.

An assembly is a set whose elements carry non-empty sets of natural-number
realizers; a map between assemblies is tracked by a code that sends every
realizer of an element to a realizer of its image. Finite assemblies list
their realizers; enumerable ones (the counterexample data lives over the
naturals) give a generator and a decidable realizer predicate, and every
check over them takes explicit bounds.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Union

from config.constants import LITERAL_BOUND, STEP_BUDGET
from cubench import pca
from cubench.errors import NotModestError, PERError
from cubench.verdict import Status

logger = logging.getLogger(__name__)

# tracker search gives up after this many candidates and reports inconclusive
MAX_CANDIDATES = 250_000


# ============================================================================
# TYPES
# ============================================================================

@dataclass(frozen=True, eq=False)
class Assembly:
    elements: tuple
    realizers: Mapping[Hashable, frozenset]
    name: str = ""

    def __post_init__(self) -> None:
        for a in self.elements:
            if not self.realizers.get(a):
                raise ValueError(f"element {a!r} of {self.name or 'assembly'} has no realizer")

    def E(self, a) -> frozenset:
        return self.realizers[a]

    def __len__(self) -> int:
        return len(self.elements)

    def same_as(self, other: "Assembly") -> bool:
        return (set(self.elements) == set(other.elements)
                and all(self.E(a) == other.E(a) for a in self.elements))


def assembly(spec: Mapping[Hashable, Iterable[int]], name: str = "") -> Assembly:
    """Finite assembly from a mapping element -> realizers."""
    return Assembly(tuple(spec), {a: frozenset(rs) for a, rs in spec.items()}, name)


@dataclass(frozen=True, eq=False)
class EnumerableAssembly:
    name: str
    element_at: Callable[[int], Hashable]
    realizes: Callable[[int, Hashable], bool]
    sample_realizer: Callable[[Hashable], int]
    size: int | None = None
    designated: int | None = None
    union_realizes: Callable[[int], bool] | None = None

    def elements(self, count: int) -> list:
        if self.size is not None:
            count = min(count, self.size)
        return [self.element_at(i) for i in range(count)]

    def materialize(self, count: int, realizer_bound: int) -> Assembly:
        spec = {}
        for a in self.elements(count):
            rs = {r for r in range(realizer_bound + 1) if self.realizes(r, a)}
            spec[a] = rs or {self.sample_realizer(a)}
        return assembly(spec, self.name)

    def witness_for(self, r: int, limit: int):
        for a in self.elements(limit):
            if self.realizes(r, a):
                return a
        return None


AnyAssembly = Union[Assembly, EnumerableAssembly]


@dataclass(frozen=True, eq=False)
class FamilyOfAssemblies:
    base: AnyAssembly
    fiber: Callable[[Hashable], AnyAssembly]
    name: str = ""


@dataclass(frozen=True, eq=False)
class TrackedMap:
    source: Assembly
    target: Assembly
    function: Mapping[Hashable, Hashable]
    tracker: pca.Code
    budget: int = STEP_BUDGET


@dataclass(frozen=True)
class PER:
    pairs: frozenset

    def __post_init__(self) -> None:
        for n, m in self.pairs:
            if (m, n) not in self.pairs:
                raise PERError(f"not symmetric: ({n}, {m}) without ({m}, {n})")
        related: dict[int, set[int]] = {}
        for n, m in self.pairs:
            related.setdefault(n, set()).add(m)
        for n, ms in related.items():
            for m in ms:
                missing = related.get(m, set()) - ms
                if missing:
                    raise PERError(f"not transitive: {n} ~ {m} ~ {min(missing)} but not {n} ~ {min(missing)}")

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "PER":
        return cls(frozenset(pairs))

    def classes(self) -> list[frozenset]:
        seen = set()
        out = []
        for n in sorted({n for n, _ in self.pairs}):
            if n in seen:
                continue
            cls = frozenset(m for k, m in self.pairs if k == n)
            seen |= cls
            out.append(cls)
        return out


@dataclass(frozen=True)
class TrackFailure:
    element: Hashable
    realizer: int
    cause: str


@dataclass(frozen=True)
class UniformVerdict:
    ok: bool
    common: dict = field(default_factory=dict)
    refutation: tuple | None = None


@dataclass(frozen=True)
class SupportVerdict:
    ok: bool
    code: pca.Code | None
    checked: int = 0
    failure: tuple | None = None


# ============================================================================
# TRACKING
# ============================================================================

def _failure(code: pca.Code, a, n: int, target: AnyAssembly, image, budget: int,
             limit: int = 0) -> TrackFailure | None:
    result = pca.apply_to_number(code, n, budget)
    if isinstance(result, pca.Diverged):
        return TrackFailure(a, n, f"diverged within budget {budget}")
    if isinstance(result, pca.Stuck):
        return TrackFailure(a, n, f"stuck: {result.reason}")
    m = pca.decode(result.code)
    if m is None:
        return TrackFailure(a, n, f"value {pca.format_code(result.code)} is not a numeral")
    if isinstance(target, Assembly):
        ok = m in target.E(image)
    else:
        ok = target.realizes(m, image)
    if not ok:
        return TrackFailure(a, n, f"{m} does not realize {image!r}")
    return None


def tracks(code: pca.Code, source: Assembly, target: AnyAssembly, function: Mapping,
           budget: int = STEP_BUDGET) -> bool:
    for a in source.elements:
        for n in sorted(source.E(a)):
            if _failure(code, a, n, target, function[a], budget) is not None:
                return False
    return True


def check_tracks(f: TrackedMap, sample_bound: int = 16) -> TrackFailure | None:
    """None when the tracker works on every checked realizer, else a counter witness."""
    source = f.source
    if isinstance(source, EnumerableAssembly):
        source = source.materialize(sample_bound, sample_bound)
    for a in source.elements:
        for n in sorted(source.E(a)):
            failure = _failure(f.tracker, a, n, f.target, f.function[a], f.budget)
            if failure is not None:
                logger.debug("tracker %s fails at %r: %s", pca.format_code(f.tracker), a, failure.cause)
                return failure
    return None


def untrackable_witness(source: Assembly, target: Assembly, function: Mapping) -> tuple | None:
    """Two elements sharing a realizer whose images have disjoint realizers."""
    holders: dict[int, list] = {}
    for a in source.elements:
        for n in source.E(a):
            holders.setdefault(n, []).append(a)
    for n in sorted(holders):
        first_with_image: dict[Hashable, Hashable] = {}
        for a in holders[n]:
            first_with_image.setdefault(function[a], a)
        for (x, a), (y, b) in itertools.combinations(first_with_image.items(), 2):
            if not (target.E(x) & target.E(y)):
                return (a, b, n)
    return None


def find_tracker(source: Assembly, target: Assembly, function: Mapping, size_bound: int,
                 budget: int = STEP_BUDGET, literal_bound: int = LITERAL_BOUND,
                 max_candidates: int = MAX_CANDIDATES) -> pca.Code | None:
    """First code in canonical order tracking function, or None."""
    if untrackable_witness(source, target, function) is not None:
        return None
    # the outcome depends on the realizer and the image only
    checks = list({(n, function[a]): (a, n) for a in source.elements for n in sorted(source.E(a))}.values())
    for count, code in enumerate(pca.enumerate_codes(size_bound, literal_bound)):
        if count >= max_candidates:
            logger.warning("tracker search stopped after %d candidates", count)
            return None
        if all(_failure(code, a, n, target, function[a], budget) is None for a, n in checks):
            logger.debug("tracker %s found after %d candidates", pca.format_code(code), count + 1)
            return code
    return None


# ============================================================================
# MODEST, UNIFORM, WELL-SUPPORTED
# ============================================================================

def is_modest(A: Assembly) -> bool:
    seen: set[int] = set()
    for a in A.elements:
        if seen & A.E(a):
            return False
        seen |= A.E(a)
    return True


def modest_of_per(R: PER) -> Assembly:
    return assembly({cls: cls for cls in R.classes()}, "N/R")


def per_of_modest(A: Assembly) -> PER:
    if not is_modest(A):
        raise NotModestError(f"{A.name or 'assembly'} has overlapping realizer sets")
    return PER.of((n, m) for a in A.elements for n in A.E(a) for m in A.E(a))


def is_isomorphic(A: Assembly, B: Assembly, size_bound: int = 3,
                  budget: int = STEP_BUDGET) -> tuple[dict, pca.Code, pca.Code] | None:
    """A bijection tracked both ways, with both trackers."""
    if len(A) != len(B):
        return None
    for image in itertools.permutations(B.elements):
        forth = dict(zip(A.elements, image))
        back = {b: a for a, b in forth.items()}
        there = find_tracker(A, B, forth, size_bound, budget)
        if there is None:
            continue
        again = find_tracker(B, A, back, size_bound, budget)
        if again is not None:
            return forth, there, again
    return None


def _uniform_one(A: AnyAssembly, sample_bound: int) -> tuple[bool, int | None, tuple | None]:
    if isinstance(A, Assembly):
        if not A.elements:
            return False, None, ("empty",)
        common = frozenset.intersection(*(A.E(a) for a in A.elements))
        if common:
            return True, min(common), None
        first = A.elements[0]
        for other in A.elements[1:]:
            if not A.E(first) & A.E(other):
                return False, None, (first, other)
        return False, None, tuple(A.elements)
    candidate = A.designated
    elements = A.elements(sample_bound)
    if not elements:
        return False, None, ("empty",)
    if candidate is None:
        candidate = A.sample_realizer(elements[0])
    for a in elements:
        if not A.realizes(candidate, a):
            return False, None, (elements[0], a)
    return True, candidate, None


def is_uniform(A: AnyAssembly | FamilyOfAssemblies, sample_bound: int = 16) -> UniformVerdict:
    if not isinstance(A, FamilyOfAssemblies):
        ok, common, refutation = _uniform_one(A, sample_bound)
        return UniformVerdict(ok, {None: common} if ok else {}, refutation)
    common = {}
    for gamma in _base_elements(A.base, sample_bound):
        ok, realizer, refutation = _uniform_one(A.fiber(gamma), sample_bound)
        if not ok:
            return UniformVerdict(False, common, (gamma,) + tuple(refutation or ()))
        common[gamma] = realizer
    return UniformVerdict(True, common)


def _base_elements(base: AnyAssembly, sample_bound: int) -> list:
    if isinstance(base, Assembly):
        return list(base.elements)
    return base.elements(sample_bound)


def _base_realizers(base: AnyAssembly, gamma, sample_bound: int) -> list[int]:
    if isinstance(base, Assembly):
        return sorted(base.E(gamma))
    found = [r for r in range(sample_bound * 2 + 2) if base.realizes(r, gamma)]
    return found[:sample_bound] or [base.sample_realizer(gamma)]


def _supports(code: pca.Code, F: FamilyOfAssemblies, budget: int, sample_bound: int) -> SupportVerdict:
    checked = 0
    for gamma in _base_elements(F.base, sample_bound):
        fiber = F.fiber(gamma)
        for c in _base_realizers(F.base, gamma, sample_bound):
            k = pca.result_number(pca.apply_to_number(code, c, budget))
            if k is None:
                return SupportVerdict(False, code, checked, (gamma, c, "no numeral result"))
            if isinstance(fiber, Assembly):
                hit = next((a for a in fiber.elements if k in fiber.E(a)), None)
            else:
                hit = fiber.witness_for(k, 2 * sample_bound + k + 2)
            if hit is None:
                return SupportVerdict(False, code, checked, (gamma, c, f"{k} realizes nothing"))
            checked += 1
    return SupportVerdict(True, code, checked)


def is_well_supported(F: FamilyOfAssemblies, code: pca.Code | None = None,
                      budget: int = STEP_BUDGET, sample_bound: int = 16,
                      size_bound: int = 2) -> SupportVerdict:
    """Check a supporting code, or search one when none is given."""
    for gamma in _base_elements(F.base, sample_bound):
        fiber = F.fiber(gamma)
        empty = not fiber.elements if isinstance(fiber, Assembly) else not fiber.elements(1)
        if empty:
            return SupportVerdict(False, code, 0, (gamma, None, "empty fiber"))
    if code is not None:
        return _supports(code, F, budget, sample_bound)
    for candidate in pca.enumerate_codes(size_bound):
        verdict = _supports(candidate, F, budget, sample_bound)
        if verdict.ok:
            return verdict
    return SupportVerdict(False, None, 0, (None, None, f"no supporting code of size <= {size_bound}"))


# ============================================================================
# TRUNCATION
# ============================================================================

def trunc_assembly(A: AnyAssembly) -> AnyAssembly:
    if isinstance(A, Assembly):
        if not A.elements:
            return A
        return assembly({"*": frozenset().union(*(A.E(a) for a in A.elements))}, f"|{A.name}|")
    if A.union_realizes is None:
        raise ValueError(f"{A.name} gives no predicate for the union of its realizers")
    union = A.union_realizes
    return EnumerableAssembly(
        name=A.name if A.name.startswith("|") else f"|{A.name}|",
        element_at=lambda i: "*",
        realizes=lambda r, a: union(r),
        sample_realizer=lambda a: A.sample_realizer(A.element_at(0)),
        size=1,
        designated=A.designated,
        union_realizes=union,
    )


def trunc(F: FamilyOfAssemblies) -> FamilyOfAssemblies:
    return FamilyOfAssemblies(F.base, lambda gamma: trunc_assembly(F.fiber(gamma)), f"|{F.name}|")


# ============================================================================
# EXPONENTIALS AND ORTHOGONALITY
# ============================================================================

@dataclass
class Exponential:
    """Maps A -> X sorted by what tracker search could establish."""

    source: Assembly
    target: Assembly
    tracked: dict = field(default_factory=dict)
    refuted: dict = field(default_factory=dict)
    inconclusive: list = field(default_factory=list)
    # maps into a modest target that are not constant on a sharing component
    ruled_out: int = 0

    def as_assembly(self, literal_bound: int = LITERAL_BOUND) -> Assembly:
        """Tracked maps realized by the canonical index of their tracker."""
        return assembly({f: {pca.index_of_code(code, literal_bound)} for f, code in self.tracked.items()},
                        f"{self.source.name}->{self.target.name}")


def sharing_components(A: Assembly) -> list[tuple]:
    """Classes of the elements of A joined whenever two share a realizer."""
    parent = {a: a for a in A.elements}

    def root(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner: dict[int, Hashable] = {}
    for a in A.elements:
        for n in A.E(a):
            if n in owner:
                parent[root(a)] = root(owner[n])
            else:
                owner[n] = a
    classes: dict[Hashable, list] = {}
    for a in A.elements:
        classes.setdefault(root(a), []).append(a)
    return [tuple(members) for members in classes.values()]


def _candidate_maps(A: Assembly, X: Assembly) -> tuple[Iterable[tuple], int]:
    """
    Images to try, with the number of maps skipped. Into a modest X a
    tracked map is constant on every sharing component, so only those are
    enumerated.
    """
    if not is_modest(X):
        return itertools.product(X.elements, repeat=len(A.elements)), 0
    components = sharing_components(A)
    if len(components) == len(A.elements):
        return itertools.product(X.elements, repeat=len(A.elements)), 0
    position = {a: k for k, members in enumerate(components) for a in members}

    def images():
        for choice in itertools.product(X.elements, repeat=len(components)):
            yield tuple(choice[position[a]] for a in A.elements)

    skipped = len(X.elements) ** len(A.elements) - len(X.elements) ** len(components)
    return images(), skipped


def exponential(A: Assembly, X: Assembly, size_bound: int, budget: int = STEP_BUDGET,
                literal_bound: int = LITERAL_BOUND) -> Exponential:
    candidates, skipped = _candidate_maps(A, X)
    out = Exponential(A, X, ruled_out=skipped)
    for image in candidates:
        function = dict(zip(A.elements, image))
        witness = untrackable_witness(A, X, function)
        if witness is not None:
            out.refuted[image] = witness
            continue
        code = find_tracker(A, X, function, size_bound, budget, literal_bound)
        if code is None:
            out.inconclusive.append(image)
        else:
            out.tracked[image] = code
    return out


@dataclass(frozen=True)
class OrthogonalityResult:
    status: Status
    constants_bijective: bool
    precomposition_bijective: bool
    tracked: int
    refuted: int
    inconclusive: int
    note: str = ""
    ruled_out: int = 0
    # x -> tracker of the constant map at x
    points: Mapping = field(default_factory=dict, compare=False)


def orthogonality_check(A: Assembly, X: Assembly, size_bound: int,
                        budget: int = STEP_BUDGET) -> OrthogonalityResult:
    """Is x |-> (a |-> x) a bijection X -> (A -> X), and is |A| -> X -> (A -> X) one?"""
    maps = exponential(A, X, size_bound, budget)
    over_trunc = exponential(trunc_assembly(A), X, size_bound, budget)
    undecided = len(maps.inconclusive) + len(over_trunc.inconclusive)
    constants = {tuple([x] * len(A.elements)): x for x in X.elements}
    constants_ok = set(maps.tracked) == set(constants) and len(constants) == len(X.elements)
    images = [tuple([image[0]] * len(A.elements)) for image in over_trunc.tracked]
    precomp_ok = len(set(images)) == len(images) and set(images) == set(maps.tracked)
    points = {x: maps.tracked[image] for image, x in constants.items() if image in maps.tracked}
    if undecided:
        status = Status.INCONCLUSIVE
        note = f"{undecided} maps undecided at tracker size {size_bound}"
        logger.warning("orthogonality inconclusive: %s", note)
    else:
        status = Status.PASS if constants_ok and precomp_ok else Status.FAIL
        note = ""
    return OrthogonalityResult(status, constants_ok, precomp_ok, len(maps.tracked),
                               len(maps.refuted), undecided, note, maps.ruled_out + over_trunc.ruled_out,
                               points)


# ============================================================================
# THE COUNTEREXAMPLE FAMILY
# ============================================================================

def counterexample_data() -> tuple[EnumerableAssembly, FamilyOfAssemblies]:
    """Gamma = (N, n |-> {m | m > n}) and A(n) = ({m | m > n}, m |-> {n, m})."""
    gamma = EnumerableAssembly(
        name="Gamma",
        element_at=lambda i: i,
        realizes=lambda r, n: r > n,
        sample_realizer=lambda n: n + 1,
    )

    def fiber(n: int) -> EnumerableAssembly:
        return EnumerableAssembly(
            name=f"A({n})",
            element_at=lambda i: n + 1 + i,
            realizes=lambda r, m: r == n or r == m,
            sample_realizer=lambda m: m,
            designated=n,
            union_realizes=lambda r: r >= n,
        )

    return gamma, FamilyOfAssemblies(gamma, fiber, "A")


@dataclass(frozen=True)
class SectionRefutation:
    candidate: pca.Code
    refuted: bool
    kind: str = "inconclusive"
    n: int | None = None
    m: int | None = None
    values: tuple = ()

    def describe(self) -> str:
        code = pca.format_code(self.candidate)
        if not self.refuted:
            return f"{code}: no contradiction on the checked range"
        if self.kind == "conflict":
            return f"{code}: f({self.n}) forced to both {self.values[0]} and {self.values[1]} (m={self.m})"
        if self.kind == "too-small":
            return f"{code}: e({self.m}) = {self.values[0]} must be f({self.n}) > {self.n}"
        return f"{code}: {self.kind} on input {self.m}"


def refute_section(candidate: pca.Code, n_bound: int, budget: int = STEP_BUDGET) -> SectionRefutation:
    """
    Look for a contradiction in e(m) in {n, f(n)}, f(n) > n, for n < m <= n_bound.

    The chain m <= e(m+1) = f(0) is tried first; full constraint propagation
    over every pair (n, m) runs when the chain finds nothing.
    """
    cache: dict[int, object] = {}

    def value(m: int):
        if m not in cache:
            result = pca.apply_to_number(candidate, m, budget)
            if isinstance(result, pca.Diverged):
                cache[m] = "diverged"
            elif isinstance(result, pca.Stuck):
                cache[m] = "stuck"
            else:
                k = pca.decode(result.code)
                cache[m] = "not-a-numeral" if k is None else k
        return cache[m]

    def broken(m: int):
        v = value(m)
        if isinstance(v, str):
            return SectionRefutation(candidate, True, v, None, m)
        return None

    # chain: for m >= 2, e(m) lies in {0, f(0)} and in {1, f(1)}, so e(m) = f(0)
    f0 = None
    for m in range(2, n_bound + 1):
        failure = broken(m)
        if failure is not None:
            return failure
        v = value(m)
        if v < 1:
            return SectionRefutation(candidate, True, "too-small", 1, m, (v,))
        if f0 is None:
            f0 = v
        elif v != f0:
            return SectionRefutation(candidate, True, "conflict", 0, m, (f0, v))
        if v < m - 1:
            return SectionRefutation(candidate, True, "too-small", m - 1, m, (v,))

    forced: dict[int, int] = {}
    for m in range(1, n_bound + 1):
        failure = broken(m)
        if failure is not None:
            return failure
        v = value(m)
        for n in range(m):
            if v == n:
                continue
            if v <= n:
                return SectionRefutation(candidate, True, "too-small", n, m, (v,))
            if n in forced and forced[n] != v:
                return SectionRefutation(candidate, True, "conflict", n, m, (forced[n], v))
            forced[n] = v
    return SectionRefutation(candidate, False)
