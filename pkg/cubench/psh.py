"""
Level-truncated presheaves on the cube category.

A TruncPresheaf stores carriers for the objects 0..level and a right action
x . sigma; a Family over a base presheaf stores fibers over every element of
the base. Everything is brute force: carriers are tuples, cached on first
use, and an operation that would look above the level bound raises
LevelBudgetError. Pi types only quantify over stages up to their own level,
so they are correct relative to the truncation and no further.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from config.constants import MAX_FIBER
from cubench import cube
from cubench.cube import CubeMor, Variant
from cubench.errors import (
    CapExceededError,
    IncompatibleSystemError,
    IncompleteSystemError,
    LevelBudgetError,
    NotASieveError,
)
from cubench.verdict import Verdict

logger = logging.getLogger(__name__)

Section = Callable[[int, Hashable], Hashable]

# sieve enumeration is a subset search over the homs into the object
MAX_SIEVE_HOMS = 16


# ============================================================================
# PRESHEAVES AND FAMILIES
# ============================================================================

@dataclass(eq=False)
class TruncPresheaf:
    level: int
    carrier_fn: Callable[[int], Iterable]
    act: Callable[[Hashable, CubeMor], Hashable]
    variant: Variant = Variant.B_ORD
    name: str = ""
    _carriers: dict = field(default_factory=dict, repr=False)

    def carrier(self, n: int) -> tuple:
        if n < 0 or n > self.level:
            raise LevelBudgetError(n, self.level, self.name or "presheaf")
        if n not in self._carriers:
            items = tuple(self.carrier_fn(n))
            if len(items) > MAX_FIBER:
                raise CapExceededError(f"{self.name}({n}) has {len(items)} elements, cap {MAX_FIBER}")
            self._carriers[n] = items
        return self._carriers[n]

    def elements(self) -> Iterator[tuple[int, Hashable]]:
        for n in range(self.level + 1):
            for x in self.carrier(n):
                yield n, x


@dataclass(eq=False)
class Family:
    base: TruncPresheaf
    level: int
    fiber_fn: Callable[[int, Hashable], Iterable]
    act: Callable[[Hashable, Hashable, CubeMor], Hashable]
    name: str = ""
    _fibers: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.level > self.base.level:
            raise LevelBudgetError(self.level, self.base.level, f"family {self.name}")

    @property
    def variant(self) -> Variant:
        return self.base.variant

    def fiber(self, c: int, gamma: Hashable) -> tuple:
        if c < 0 or c > self.level:
            raise LevelBudgetError(c, self.level, self.name or "family")
        key = (c, gamma)
        if key not in self._fibers:
            items = tuple(self.fiber_fn(c, gamma))
            if len(items) > MAX_FIBER:
                raise CapExceededError(f"fiber of {self.name} at stage {c} has {len(items)} elements")
            self._fibers[key] = items
        return self._fibers[key]

    def base_act(self, gamma: Hashable, sigma: CubeMor) -> Hashable:
        return self.base.act(gamma, sigma)


@dataclass(eq=False)
class FamilyIso:
    """A natural isomorphism between two families over the same base."""

    src: Family
    dst: Family
    forward: Callable[[Hashable, int, Hashable], Hashable]
    backward: Callable[[Hashable, int, Hashable], Hashable]

    def inverse(self) -> "FamilyIso":
        return FamilyIso(self.dst, self.src, self.backward, self.forward)


def identity_iso(A: Family) -> FamilyIso:
    same = lambda x, c, gamma: x
    return FamilyIso(A, A, same, same)


# ============================================================================
# CONSTRUCTIONS
# ============================================================================

def yoneda(c: int, level: int, variant: Variant = Variant.B_ORD) -> TruncPresheaf:
    if c > level:
        raise LevelBudgetError(c, level, "representable")
    return TruncPresheaf(level, lambda n: cube.enumerate_homs(n, c, variant),
                         lambda x, sigma: cube.compose(x, sigma), variant, f"y{c}")


def interval(level: int, variant: Variant = Variant.B_ORD) -> TruncPresheaf:
    return yoneda(1, level, variant)


def constant_presheaf(elements: Sequence, level: int, variant: Variant = Variant.B_ORD,
                      name: str = "") -> TruncPresheaf:
    items = tuple(elements)
    return TruncPresheaf(level, lambda n: items, lambda x, sigma: x, variant, name or f"Δ{len(items)}")


def terminal(level: int, variant: Variant = Variant.B_ORD) -> TruncPresheaf:
    return constant_presheaf(("*",), level, variant, "1")


def disjoint_union(P: TruncPresheaf, Q: TruncPresheaf) -> TruncPresheaf:
    level = min(P.level, Q.level)

    def carrier(n):
        return [(0, x) for x in P.carrier(n)] + [(1, y) for y in Q.carrier(n)]

    def act(tagged, sigma):
        tag, x = tagged
        return (tag, (P if tag == 0 else Q).act(x, sigma))

    return TruncPresheaf(level, carrier, act, P.variant, f"{P.name}+{Q.name}")


def constant_family(base: TruncPresheaf, elements: Sequence, level: int | None = None,
                    name: str = "") -> Family:
    items = tuple(elements)
    return Family(base, base.level if level is None else level,
                  lambda c, gamma: items, lambda x, gamma, sigma: x, name or f"Δ{len(items)}")


def presheaf_family(base: TruncPresheaf, P: TruncPresheaf) -> Family:
    """P as a family over base that ignores the base point."""
    return Family(base, min(base.level, P.level), lambda c, gamma: P.carrier(c),
                  lambda x, gamma, sigma: P.act(x, sigma), P.name)


def sigma(Gamma: TruncPresheaf, A: Family) -> TruncPresheaf:
    """Context extension: dependent pairs (gamma, a)."""

    def carrier(n):
        return [(gamma, a) for gamma in Gamma.carrier(n) for a in A.fiber(n, gamma)]

    def act(pair, s):
        gamma, a = pair
        return Gamma.act(gamma, s), A.act(a, gamma, s)

    return TruncPresheaf(A.level, carrier, act, Gamma.variant, f"{Gamma.name}.{A.name}")


def sigma_family(A: Family, B: Family, level: int | None = None) -> Family:
    """Dependent sum over Gamma of A and B, B living over sigma(Gamma, A)."""
    level = min(A.level, B.level) if level is None else level

    def fiber(c, gamma):
        return [(a, b) for a in A.fiber(c, gamma) for b in B.fiber(c, (gamma, a))]

    def act(pair, gamma, s):
        a, b = pair
        return A.act(a, gamma, s), B.act(b, (gamma, a), s)

    return Family(A.base, level, fiber, act, f"Σ({A.name},{B.name})")


def reindex_family(A: Family, base: TruncPresheaf, along: Callable[[int, Hashable], Hashable],
                   name: str = "") -> Family:
    """A pulled back along a presheaf map base -> A.base given stagewise."""
    level = min(A.level, base.level)
    return Family(base, level, lambda c, delta: A.fiber(c, along(c, delta)),
                  lambda x, delta, s: A.act(x, along(s.dst, delta), s), name or A.name)


def codiscrete(Gamma: TruncPresheaf, values: Callable[[Hashable], Sequence], level: int | None = None,
               name: str = "∇A") -> Family:
    """
    Functions from the global points of the stage into A(gamma).

    Global points of the c-cube are its vertices, so an element at stage c is
    a tuple indexed by vertices and acts by x . sigma = (x[sigma(v)])_v.
    Gamma must act trivially.
    """

    def fiber(c, gamma):
        return itertools.product(tuple(values(gamma)), repeat=2 ** c)

    def act(x, gamma, s):
        return tuple(x[t] for t in s.table)

    return Family(Gamma, Gamma.level if level is None else level, fiber, act, name)


def global_section(A: Family, x: Hashable, point: Hashable | None = None) -> Section:
    """The section c |-> x . ! of a family over a base with a single global point."""
    gamma0 = A.base.carrier(0)[0] if point is None else point
    if x not in A.fiber(0, gamma0):
        raise ValueError(f"{x!r} is not in the fiber of {A.name} at stage 0")
    return lambda c, gamma: A.act(x, gamma0, cube.bang(c, A.variant))


# ============================================================================
# FUNCTORIALITY
# ============================================================================

def check_presheaf(P: TruncPresheaf, max_dim: int | None = None) -> Verdict:
    top = P.level if max_dim is None else min(max_dim, P.level)
    failures = []
    for n in range(top + 1):
        ident = cube.identity(n, P.variant)
        for x in P.carrier(n):
            if P.act(x, ident) != x:
                failures.append(f"identity at {n}, {x!r}")
    for k, m, n in itertools.product(range(top + 1), repeat=3):
        for s in cube.enumerate_homs(m, n, P.variant):
            for t in cube.enumerate_homs(k, m, P.variant):
                st = cube.compose(s, t)
                for x in P.carrier(n):
                    if P.act(x, st) != P.act(P.act(x, s), t):
                        failures.append(f"composition at {x!r}, {s}, {t}")
    return Verdict.from_failures(failures[:20], checked_dim=top)


def check_family(A: Family, max_dim: int | None = None) -> Verdict:
    top = A.level if max_dim is None else min(max_dim, A.level)
    Gamma = A.base
    failures = []
    for k, m, n in itertools.product(range(top + 1), repeat=3):
        for s in cube.enumerate_homs(m, n, A.variant):
            for t in cube.enumerate_homs(k, m, A.variant):
                st = cube.compose(s, t)
                for gamma in Gamma.carrier(n):
                    gs = Gamma.act(gamma, s)
                    fiber_m = set(A.fiber(m, gs))
                    for x in A.fiber(n, gamma):
                        xs = A.act(x, gamma, s)
                        if xs not in fiber_m:
                            failures.append(f"action leaves the fiber at {x!r}, {s}")
                        elif A.act(x, gamma, st) != A.act(xs, gs, t):
                            failures.append(f"composition at {x!r}, {s}, {t}")
    for n in range(top + 1):
        ident = cube.identity(n, A.variant)
        for gamma in Gamma.carrier(n):
            for x in A.fiber(n, gamma):
                if A.act(x, gamma, ident) != x:
                    failures.append(f"identity at {x!r}")
    return Verdict.from_failures(failures[:20], checked_dim=top)


def check_natural(P: TruncPresheaf, Q: TruncPresheaf, component: Callable[[int, Hashable], Hashable],
                  max_dim: int | None = None) -> Verdict:
    top = min(P.level, Q.level) if max_dim is None else max_dim
    failures = []
    for m, n in itertools.product(range(top + 1), repeat=2):
        for s in cube.enumerate_homs(m, n, P.variant):
            for x in P.carrier(n):
                if component(m, P.act(x, s)) != Q.act(component(n, x), s):
                    failures.append(f"naturality at {x!r}, {s}")
    return Verdict.from_failures(failures[:20])


def check_iso(iso: FamilyIso, max_dim: int | None = None) -> Verdict:
    A, B = iso.src, iso.dst
    top = min(A.level, B.level) if max_dim is None else max_dim
    failures = []
    for n in range(top + 1):
        for gamma in A.base.carrier(n):
            image = [iso.forward(x, n, gamma) for x in A.fiber(n, gamma)]
            if sorted(map(repr, image)) != sorted(map(repr, B.fiber(n, gamma))):
                failures.append(f"not a bijection at stage {n} over {gamma!r}")
            for x in A.fiber(n, gamma):
                if iso.backward(iso.forward(x, n, gamma), n, gamma) != x:
                    failures.append(f"backward does not invert forward at {x!r}")
    for m, n in itertools.product(range(top + 1), repeat=2):
        for s in cube.enumerate_homs(m, n, A.variant):
            for gamma in A.base.carrier(n):
                gs = A.base.act(gamma, s)
                for x in A.fiber(n, gamma):
                    if iso.forward(A.act(x, gamma, s), m, gs) != B.act(iso.forward(x, n, gamma), gamma, s):
                        failures.append(f"naturality at {x!r}, {s}")
    return Verdict.from_failures(failures[:20])


# ============================================================================
# SIEVES
# ============================================================================

@dataclass(frozen=True)
class Cofibration:
    """A sieve on c, decided for every sigma into c with source at most level."""

    c: int
    level: int
    members: frozenset
    variant: Variant = Variant.B_ORD

    def contains(self, s: CubeMor) -> bool:
        if s.dst != self.c:
            raise ValueError(f"{s} does not land in {self.c}")
        if s.src > self.level:
            raise LevelBudgetError(s.src, self.level, "sieve decision")
        return s in self.members

    def __contains__(self, s: CubeMor) -> bool:
        return s in self.members

    @property
    def holds(self) -> bool:
        """Whether the identity (and hence everything) is in the sieve."""
        return cube.identity(self.c, self.variant) in self.members

    def sorted_members(self) -> list[CubeMor]:
        return sorted(self.members, key=CubeMor.sort_key)


def sieve_violation(c: int, level: int, members: frozenset,
                    variant: Variant = Variant.B_ORD) -> tuple | None:
    for s in members:
        for k in range(level + 1):
            for t in cube.enumerate_homs(k, s.src, variant):
                if cube.compose(s, t) not in members:
                    return s, t
    return None


def make_cofibration(c: int, level: int, members: Iterable[CubeMor],
                     variant: Variant = Variant.B_ORD) -> Cofibration:
    members = frozenset(members)
    for s in members:
        if s.dst != c or s.src > level:
            raise NotASieveError(f"{s} is not a morphism into {c} with source <= {level}")
    bad = sieve_violation(c, level, members, variant)
    if bad is not None:
        s, t = bad
        raise NotASieveError(f"{s} is in the sieve but {cube.compose(s, t)} is not")
    return Cofibration(c, level, members, variant)


def from_decision(c: int, level: int, decide: Callable[[CubeMor], bool],
                  variant: Variant = Variant.B_ORD) -> Cofibration:
    return make_cofibration(c, level, (s for s in cube.homs_into(c, level, variant) if decide(s)), variant)


def cof_top(c: int, level: int, variant: Variant = Variant.B_ORD) -> Cofibration:
    return Cofibration(c, level, frozenset(cube.homs_into(c, level, variant)), variant)


def cof_bot(c: int, level: int, variant: Variant = Variant.B_ORD) -> Cofibration:
    return Cofibration(c, level, frozenset(), variant)


def _same_place(phi: Cofibration, psi: Cofibration) -> None:
    if (phi.c, phi.level, phi.variant) != (psi.c, psi.level, psi.variant):
        raise ValueError("sieves live on different objects or levels")


def cof_and(phi: Cofibration, psi: Cofibration) -> Cofibration:
    _same_place(phi, psi)
    return Cofibration(phi.c, phi.level, phi.members & psi.members, phi.variant)


def cof_or(phi: Cofibration, psi: Cofibration) -> Cofibration:
    _same_place(phi, psi)
    return Cofibration(phi.c, phi.level, phi.members | psi.members, phi.variant)


def cof_sigma(phi: Cofibration, psi: Cofibration) -> Cofibration:
    """Sum of psi over phi; with decidable sieves this is the meet."""
    return cof_and(phi, psi)


def cof_eq_interval(i: CubeMor, e: int, level: int) -> Cofibration:
    """Sieve of sigma with i . sigma = d_e on i : c -> 1."""
    if i.dst != 1:
        raise ValueError(f"{i} is not an element of the interval")
    c, variant = i.src, i.variant

    def decide(s):
        target = cube.compose(cube.delta(e, variant), cube.bang(s.src, variant))
        return cube.equal(cube.compose(i, s), target)

    return Cofibration(c, level, frozenset(s for s in cube.homs_into(c, level, variant) if decide(s)), variant)


def cof_forall_interval(phi: Cofibration) -> Cofibration:
    """sigma is in the result iff sigma x I is in phi; one level lower."""
    if phi.c < 1:
        raise ValueError("forall over the interval needs a sieve on c + 1")
    c, level = phi.c - 1, phi.level - 1
    if level < 0:
        raise LevelBudgetError(1, phi.level, "forall over the interval")
    return Cofibration(c, level, frozenset(
        s for s in cube.homs_into(c, level, phi.variant) if cube.lift(s) in phi.members), phi.variant)


def cof_reindex(phi: Cofibration, tau: CubeMor, level: int | None = None) -> Cofibration:
    """phi . tau, a sieve on tau.src."""
    level = phi.level if level is None else level
    if level > phi.level:
        raise LevelBudgetError(level, phi.level, "reindexed sieve")
    return Cofibration(tau.src, level, frozenset(
        s for s in cube.homs_into(tau.src, level, phi.variant)
        if cube.compose(tau, s) in phi.members), phi.variant)


def cof_restrict(phi: Cofibration, level: int) -> Cofibration:
    if level > phi.level:
        raise LevelBudgetError(level, phi.level, "restricted sieve")
    return Cofibration(phi.c, level, frozenset(s for s in phi.members if s.src <= level), phi.variant)


def enumerate_sieves(c: int, level: int, variant: Variant = Variant.B_ORD) -> list[Cofibration]:
    """Every sieve on c at the given level, smallest first."""
    homs = cube.homs_into(c, level, variant)
    if len(homs) > MAX_SIEVE_HOMS:
        raise CapExceededError(f"{len(homs)} morphisms into {c}; sieve enumeration is capped at {MAX_SIEVE_HOMS}")
    index = {s: k for k, s in enumerate(homs)}
    closure = []
    for s in homs:
        mask = 0
        for k in range(level + 1):
            for t in cube.enumerate_homs(k, s.src, variant):
                mask |= 1 << index[cube.compose(s, t)]
        closure.append(mask)
    out = []
    for subset in range(2 ** len(homs)):
        if all(closure[k] & ~subset == 0 for k in range(len(homs)) if subset >> k & 1):
            out.append(Cofibration(c, level, frozenset(homs[k] for k in range(len(homs)) if subset >> k & 1),
                                   variant))
    out.sort(key=lambda phi: (len(phi.members), sorted(s.sort_key() for s in phi.members)))
    return out


@dataclass(eq=False)
class CofFamily:
    """A cofibration over a base: a sieve phi(c, gamma) natural in gamma."""

    base: TruncPresheaf
    level: int
    decide: Callable[[int, Hashable], Cofibration]
    name: str = "φ"
    _cache: dict = field(default_factory=dict, repr=False)

    def at(self, c: int, gamma: Hashable) -> Cofibration:
        key = (c, gamma)
        if key not in self._cache:
            self._cache[key] = self.decide(c, gamma)
        return self._cache[key]

    def holds(self, c: int, gamma: Hashable) -> bool:
        return self.at(c, gamma).holds


def constant_cof(base: TruncPresheaf, value: bool, level: int) -> CofFamily:
    make = cof_top if value else cof_bot
    return CofFamily(base, level, lambda c, gamma: make(c, level, base.variant), "⊤" if value else "⊥")


def interval_endpoint_cof(base: TruncPresheaf, e: int, level: int) -> CofFamily:
    """Over the interval: the sieve of stages where the point equals d_e."""
    return CofFamily(base, level, lambda c, i: cof_eq_interval(i, e, level), f"(i={e})")


def check_cof_family(phi: CofFamily, max_dim: int | None = None) -> Verdict:
    top = phi.base.level if max_dim is None else max_dim
    failures = []
    for m, n in itertools.product(range(top + 1), repeat=2):
        for s in cube.enumerate_homs(m, n, phi.base.variant):
            for gamma in phi.base.carrier(n):
                left = phi.at(m, phi.base.act(gamma, s))
                right = cof_reindex(phi.at(n, gamma), s)
                if left.members != right.members:
                    failures.append(f"not natural at {gamma!r}, {s}")
    return Verdict.from_failures(failures[:20])


def system(parts: Sequence[tuple[Cofibration, dict]]) -> dict:
    """Amalgamate compatible partial assignments into one on the join."""
    merged: dict = {}
    for phi, values in parts:
        for s in phi.members:
            if s not in values:
                raise IncompleteSystemError(s)
            if s in merged and merged[s] != values[s]:
                raise IncompatibleSystemError(s, merged[s], values[s])
            merged[s] = values[s]
    return merged


# ============================================================================
# PATH AND IDENTITY TYPES
# ============================================================================

def constant_path(A: Family, x: Hashable, c: int, gamma: Hashable) -> Hashable:
    return A.act(x, gamma, cube.proj(c, A.variant))


def path_type(A: Family, a0: Section, a1: Section) -> Family:
    """Elements of A(c + 1) over gamma . p with faces a0 and a1."""
    Gamma, variant = A.base, A.variant
    level = A.level - 1
    if level < 0:
        raise LevelBudgetError(1, A.level, "path type")

    def fiber(c, gamma):
        over = Gamma.act(gamma, cube.proj(c, variant))
        f0, f1 = cube.face(c, 0, variant), cube.face(c, 1, variant)
        start, end = a0(c, gamma), a1(c, gamma)
        return [x for x in A.fiber(c + 1, over)
                if A.act(x, over, f0) == start and A.act(x, over, f1) == end]

    def act(x, gamma, s):
        over = Gamma.act(gamma, cube.proj(s.dst, variant))
        return A.act(x, over, cube.lift(s))

    return Family(Gamma, level, fiber, act, f"Path({A.name})")


def id_type(A: Family, a0: Section, a1: Section) -> Family:
    """
    Pairs (path, psi) whose path is constant at a0 on the sieve psi.

    psi is carried at level - 1, the highest level a composition tube over
    the family can reach, so sieves are truncated there. Stage-c elements
    with c = level record psi only up to level - 1.
    """
    paths = path_type(A, a0, a1)
    Gamma, variant = A.base, A.variant
    level = paths.level
    sieve_level = level - 1
    if sieve_level < 0:
        raise LevelBudgetError(2, A.level, "identity type")

    def degenerate_on(x, psi, gamma):
        for s in psi.members:
            g = Gamma.act(gamma, s)
            if paths.act(x, gamma, s) != constant_path(A, a0(s.src, g), s.src, g):
                return False
        return True

    def fiber(c, gamma):
        sieves = enumerate_sieves(c, sieve_level, variant)
        return [(x, psi) for x in paths.fiber(c, gamma) for psi in sieves if degenerate_on(x, psi, gamma)]

    def act(pair, gamma, s):
        x, psi = pair
        return paths.act(x, gamma, s), cof_reindex(psi, s, sieve_level)

    family = Family(Gamma, level, fiber, act, f"Id({A.name})")
    family.paths = paths
    family.sieve_level = sieve_level
    return family


def refl_path(A: Family, a: Section, c: int, gamma: Hashable) -> Hashable:
    return constant_path(A, a(c, gamma), c, gamma)


def refl_id(A: Family, a: Section, c: int, gamma: Hashable, sieve_level: int) -> tuple:
    return refl_path(A, a, c, gamma), cof_top(c, sieve_level, A.variant)


# ============================================================================
# DISCRETENESS AND CONNECTEDNESS
# ============================================================================

def is_discrete(P: TruncPresheaf | Family) -> bool:
    """Every element of stage n + 1 restricts equally along all interval points."""
    variant = P.variant
    for n in range(P.level):
        f0 = cube.face(n, 0, variant)
        ident = cube.identity(n, variant)
        points = [cube.pair(ident, i) for i in cube.enumerate_homs(n, 1, variant)]
        if isinstance(P, Family):
            for gamma in P.base.carrier(n + 1):
                for x in P.fiber(n + 1, gamma):
                    start = P.act(x, gamma, f0)
                    if any(P.act(x, gamma, q) != start for q in points):
                        return False
        else:
            for x in P.carrier(n + 1):
                start = P.act(x, f0)
                if any(P.act(x, q) != start for q in points):
                    return False
    return True


def components(P: TruncPresheaf) -> list[set]:
    """Connected components of the category of elements of P."""
    parent: dict = {}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for node in P.elements():
        parent[node] = node
    for n in range(P.level + 1):
        for m in range(P.level + 1):
            for s in cube.enumerate_homs(m, n, P.variant):
                for x in P.carrier(n):
                    a, b = find((n, x)), find((m, P.act(x, s)))
                    if a != b:
                        parent[a] = b
    groups: dict = {}
    for node in parent:
        groups.setdefault(find(node), set()).add(node)
    return list(groups.values())


def check_connected(P: TruncPresheaf) -> Verdict:
    """
    Every natural transformation P -> Δ2 is constant.

    Such transformations are exactly the 2-colourings of the components of
    the category of elements, so the check counts components.
    """
    parts = components(P)
    transformations = 2 ** len(parts)
    non_constant = transformations - 2 if parts else 0
    failures = [f"{non_constant} non-constant maps into Δ2"] if non_constant > 0 else []
    return Verdict.from_failures(failures, components=len(parts), transformations=transformations)


# ============================================================================
# NATURAL ASSIGNMENTS, PI, EXPONENTIALS
# ============================================================================

def natural_assignments(keys: Sequence, choices: Callable[[Hashable], Sequence],
                        constraints: Sequence[tuple[Hashable, Hashable, Callable]]) -> Iterator[dict]:
    """
    Assignments key -> value with value[to] == transform(value[frm]).

    Keys are assigned in the given order; a constraint is checked as soon as
    both ends carry a value.
    """
    position = {k: i for i, k in enumerate(keys)}
    pending: list[list] = [[] for _ in keys]
    for frm, to, transform in constraints:
        pending[max(position[frm], position[to])].append((frm, to, transform))
    values: dict = {}

    def extend(i):
        if i == len(keys):
            yield dict(values)
            return
        key = keys[i]
        for v in choices(key):
            values[key] = v
            if all(values[to] == transform(values[frm]) for frm, to, transform in pending[i]):
                yield from extend(i + 1)
        values.pop(key, None)

    yield from extend(0)


def pi_family(A: Family, B: Family, level: int | None = None) -> Family:
    """
    Dependent product: natural families (sigma, a) |-> b over stages <= level.

    B lives over sigma(Gamma, A). Values are frozensets of ((sigma, a), b).
    """
    Gamma, variant = A.base, A.variant
    level = min(A.level, B.level) if level is None else level
    if level > min(A.level, B.level):
        raise LevelBudgetError(level, min(A.level, B.level), "dependent product")

    def keys_for(c, gamma):
        keys = []
        for s in sorted(cube.homs_into(c, level, variant), key=lambda m: (-m.src, m.table)):
            gs = Gamma.act(gamma, s)
            keys.extend((s, a) for a in A.fiber(s.src, gs))
        return keys

    def fiber(c, gamma):
        keys = keys_for(c, gamma)
        constraints = []
        for s, a in keys:
            gs = Gamma.act(gamma, s)
            for k in range(level + 1):
                for t in cube.enumerate_homs(k, s.src, variant):
                    target = (cube.compose(s, t), A.act(a, gs, t))
                    constraints.append(((s, a), target,
                                        lambda b, t=t, over=(gs, a): B.act(b, over, t)))

        def choices(key):
            s, a = key
            return B.fiber(s.src, (Gamma.act(gamma, s), a))

        out = []
        for assignment in natural_assignments(keys, choices, constraints):
            out.append(frozenset(assignment.items()))
            if len(out) > MAX_FIBER:
                raise CapExceededError(f"dependent product fiber exceeds {MAX_FIBER}")
        return out

    def act(F, gamma, rho):
        table = dict(F)
        d = rho.src
        g = Gamma.act(gamma, rho)
        return frozenset(((s, a), table[(cube.compose(rho, s), a)])
                         for s in cube.homs_into(d, level, variant)
                         for a in A.fiber(s.src, Gamma.act(g, s)))

    return Family(Gamma, level, fiber, act, f"Π({A.name},{B.name})")


def pi_apply(F: frozenset, s: CubeMor, a: Hashable) -> Hashable:
    return dict(F)[(s, a)]


def exponential_by_naturality(P: TruncPresheaf, c: int, c_prime: int) -> list[dict]:
    """Natural assignments (rho : d -> c', tau : d -> c) |-> P(d), d <= c' + c."""
    top = c + c_prime
    if top > P.level:
        raise LevelBudgetError(top, P.level, "exponential by naturality")
    keys = [(rho, tau) for d in range(top, -1, -1)
            for rho in cube.enumerate_homs(d, c_prime, P.variant)
            for tau in cube.enumerate_homs(d, c, P.variant)]
    constraints = []
    for rho, tau in keys:
        for k in range(top + 1):
            for t in cube.enumerate_homs(k, rho.src, P.variant):
                constraints.append(((rho, tau), (cube.compose(rho, t), cube.compose(tau, t)),
                                    lambda x, t=t: P.act(x, t)))
    return list(natural_assignments(keys, lambda key: P.carrier(key[0].src), constraints))


def check_exponential_iso(P: TruncPresheaf, c: int, c_prime: int) -> Verdict:
    """Natural assignments match P(c' x c) through evaluation at the projections."""
    assignments = exponential_by_naturality(P, c, c_prime)
    probe = (cube.proj_left(c_prime, c, P.variant), cube.proj_right(c_prime, c, P.variant))
    values = [t[probe] for t in assignments]
    failures = []
    if len(set(values)) != len(values):
        failures.append("evaluation at the projections is not injective")
    if set(values) != set(P.carrier(c_prime + c)):
        failures.append("evaluation at the projections is not surjective")
    return Verdict.from_failures(failures, assignments=len(assignments))


# ============================================================================
# LIFTING UNIVERSES
# ============================================================================

def hs_lift(universe: Sequence[tuple[str, Sequence]], level: int,
            variant: Variant = Variant.B_ORD) -> TruncPresheaf:
    """
    Functors from the slice over c (objects of source <= level) into a finite
    universe of named sets. A functor is a pair (names, maps): names gives a
    universe index per object sigma, maps gives per slice morphism (sigma, tau)
    the function U(sigma) -> U(sigma . tau) as a tuple of indices.
    """
    sets = [tuple(elements) for _, elements in universe]

    def carrier(c):
        objects = cube.homs_into(c, level, variant)
        arrows = [(s, t) for s in objects for k in range(level + 1)
                  for t in cube.enumerate_homs(k, s.src, variant)]
        out = []
        for names in itertools.product(range(len(sets)), repeat=len(objects)):
            name_of = dict(zip(objects, names))

            def choices(arrow):
                s, t = arrow
                size_from, size_to = len(sets[name_of[s]]), len(sets[name_of[cube.compose(s, t)]])
                if t == cube.identity(s.src, variant):
                    return [tuple(range(size_from))] if size_from == size_to else []
                return list(itertools.product(range(size_to), repeat=size_from))

            for maps in natural_assignments(arrows, choices, []):
                if _functorial(maps, arrows, variant, level):
                    out.append((frozenset(name_of.items()), frozenset(maps.items())))
                    if len(out) > MAX_FIBER:
                        raise CapExceededError(f"lifted universe at stage {c} exceeds {MAX_FIBER}")
        return out

    def act(F, rho):
        names, maps = dict(F[0]), dict(F[1])
        objects = cube.homs_into(rho.src, level, variant)
        new_names = frozenset((s, names[cube.compose(rho, s)]) for s in objects)
        new_maps = frozenset(((s, t), maps[(cube.compose(rho, s), t)])
                             for s in objects for k in range(level + 1)
                             for t in cube.enumerate_homs(k, s.src, variant))
        return new_names, new_maps

    return TruncPresheaf(level, carrier, act, variant, "U↑")


def _functorial(maps: dict, arrows: list, variant: Variant, level: int) -> bool:
    for s, t in arrows:
        first = maps[(s, t)]
        st = cube.compose(s, t)
        for k in range(level + 1):
            for u in cube.enumerate_homs(k, t.src, variant):
                second = maps[(st, u)]
                if maps[(s, cube.compose(t, u))] != tuple(second[v] for v in first):
                    return False
    return True


def lift_iea(phi: CofFamily, A: Family, B: Family, f: FamilyIso) -> tuple[Family, FamilyIso]:
    """
    Extend the iso f : A ≅ B given over phi to D ≅ B over the whole base.

    D is literally A where phi holds and B elsewhere; its action is B's action
    conjugated by g, and g is f where phi holds and the identity elsewhere.
    """
    Gamma = B.base
    level = min(A.level, B.level)

    def g_fwd(x, c, gamma):
        return f.forward(x, c, gamma) if phi.holds(c, gamma) else x

    def g_back(y, c, gamma):
        return f.backward(y, c, gamma) if phi.holds(c, gamma) else y

    def fiber(c, gamma):
        return A.fiber(c, gamma) if phi.holds(c, gamma) else B.fiber(c, gamma)

    def act(x, gamma, s):
        moved = B.act(g_fwd(x, s.dst, gamma), gamma, s)
        return g_back(moved, s.src, Gamma.act(gamma, s))

    D = Family(Gamma, level, fiber, act, f"D({A.name}|{B.name})")
    return D, FamilyIso(D, B, g_fwd, g_back)
