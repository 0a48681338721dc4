"""
Composition structures and the constructions that preserve them.

A composition problem at stage c lives over a path p in Gamma(c + 1) whose
last coordinate is the direction of travel. It carries a sieve phi on c, a
compatible partial tube (sigma in phi |-> element over p . (sigma x I)) and a
base over the e-face of p. A solver returns an element over the opposite
face that agrees with the tube there; every call to comp checks this.

Fillers come from composing along connections, paths and identity types
compose pointwise in an extra coordinate, and Glue follows the gluing
algorithm step by step (comp in B, forall over the interval, comp and pres
in A, equivalence extension, final comp in B). Glue, Pi and universe
results sit two levels below their components.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Hashable

from cubench import cube, psh
from cubench.cube import CubeMor
from cubench.errors import (
    AdherenceError,
    IncompatibleSystemError,
    LevelBudgetError,
    PostconditionError,
)
from cubench.psh import Cofibration, CofFamily, Family, FamilyIso

logger = logging.getLogger(__name__)

FamilyMap = Callable[[Hashable, int, Hashable], Hashable]


# ============================================================================
# PROBLEMS
# ============================================================================

@dataclass(eq=False)
class CompProblem:
    family: Family
    c: int
    path: Hashable
    e: int
    phi: Cofibration
    partial: dict
    base: Hashable

    @property
    def e_bar(self) -> int:
        return 1 - self.e

    @property
    def variant(self):
        return self.family.variant

    def over(self, s: CubeMor) -> Hashable:
        """Base point of the tube at sigma: p . (sigma x I)."""
        return self.family.base.act(self.path, cube.lift(s))

    @property
    def start(self) -> Hashable:
        return self.family.base.act(self.path, cube.face(self.c, self.e, self.variant))

    @property
    def end(self) -> Hashable:
        return self.family.base.act(self.path, cube.face(self.c, self.e_bar, self.variant))

    def forced(self) -> dict:
        """The values the result must restrict to on phi."""
        A = self.family
        return {s: A.act(x, self.over(s), cube.face(s.src, self.e_bar, self.variant))
                for s, x in self.partial.items()}


def make_problem(A: Family, c: int, path: Hashable, e: int, phi: Cofibration,
                 partial: dict, base: Hashable) -> CompProblem:
    """Build a problem and check that it is well formed."""
    if c + 1 > A.level:
        raise LevelBudgetError(c + 1, A.level, f"composition in {A.name}")
    if phi.c != c:
        raise ValueError(f"sieve lives on {phi.c}, problem on {c}")
    if phi.level > A.level - 1:
        raise LevelBudgetError(phi.level + 1, A.level, "tube")
    if set(partial) != set(phi.members):
        raise AdherenceError("tube must be given exactly on the sieve")
    P = CompProblem(A, c, path, e, phi, dict(partial), base)
    variant = A.variant
    if base not in A.fiber(c, P.start):
        raise AdherenceError(f"base {base!r} is not over the {e}-face")
    for s, x in P.partial.items():
        if x not in A.fiber(s.src + 1, P.over(s)):
            raise AdherenceError(f"tube value at {s} is not over p . (sigma x I)")
        if A.act(x, P.over(s), cube.face(s.src, e, variant)) != A.act(base, P.start, s):
            raise AdherenceError(f"tube and base disagree at {s}")
        for k in range(phi.level + 1):
            for t in cube.enumerate_homs(k, s.src, variant):
                st = cube.compose(s, t)
                if P.partial[st] != A.act(x, P.over(s), cube.lift(t)):
                    raise IncompatibleSystemError(st, P.partial[st], A.act(x, P.over(s), cube.lift(t)))
    return P


def satisfies(P: CompProblem, result: Hashable) -> bool:
    A = P.family
    if result not in A.fiber(P.c, P.end):
        return False
    return all(A.act(result, P.end, s) == value for s, value in P.forced().items())


def admissible(P: CompProblem) -> list:
    """Every element over the far face that agrees with the tube."""
    return [x for x in P.family.fiber(P.c, P.end) if satisfies(P, x)]


def base_change(P: CompProblem, tau: CubeMor) -> CompProblem:
    """The problem P . tau at stage tau.src."""
    A = P.family
    phi = psh.cof_reindex(P.phi, tau)
    partial = {r: P.partial[cube.compose(tau, r)] for r in phi.members}
    path = A.base.act(P.path, cube.lift(tau))
    return make_problem(A, tau.src, path, P.e, phi, partial, A.act(P.base, P.start, tau))


def empty_problem(A: Family, c: int, path: Hashable, e: int, base: Hashable) -> CompProblem:
    phi = psh.cof_bot(c, A.level - 1, A.variant)
    return make_problem(A, c, path, e, phi, {}, base)


def generated(phi: Cofibration, values: dict, level: int,
              act: Callable[[Hashable, CubeMor, CubeMor], Hashable]) -> tuple[Cofibration, dict]:
    """
    The sieve generated by phi at a higher level, with values carried along.

    act(value, sigma, kappa) restricts the value at sigma along kappa. Two
    factorizations of one morphism must give the same value.
    """
    out: dict = {}
    for s in sorted(phi.members, key=CubeMor.sort_key):
        for k in range(level + 1):
            for kappa in cube.enumerate_homs(k, s.src, phi.variant):
                r = cube.compose(s, kappa)
                v = values[s] if kappa == cube.identity(s.src, phi.variant) else act(values[s], s, kappa)
                if r in out and out[r] != v:
                    raise IncompatibleSystemError(r, out[r], v)
                out[r] = v
    return psh.Cofibration(phi.c, level, frozenset(out), phi.variant), out


def extended_tube(P: CompProblem, level: int) -> tuple[Cofibration, dict]:
    A = P.family
    return generated(P.phi, P.partial, level, lambda x, s, kappa: A.act(x, P.over(s), cube.lift(kappa)))


# ============================================================================
# FIBRATION STRUCTURES
# ============================================================================

@dataclass(eq=False)
class FibStructure:
    family: Family
    solve: Callable[[CompProblem], Hashable]
    name: str = ""


def comp(alpha: FibStructure, P: CompProblem) -> Hashable:
    if P.family is not alpha.family:
        raise ValueError(f"problem over {P.family.name} given to a structure on {alpha.family.name}")
    result = alpha.solve(P)
    if not satisfies(P, result):
        raise PostconditionError(f"{alpha.name or 'solver'} returned {result!r} violating the tube at stage {P.c}")
    return result


def tp(alpha: FibStructure, c: int, path: Hashable, e: int, x: Hashable) -> Hashable:
    """Transport along path from face e with the empty system."""
    return comp(alpha, empty_problem(alpha.family, c, path, e, x))


def fill(alpha: FibStructure, P: CompProblem) -> Hashable:
    """
    A filler over p itself: restricts to the tube on phi x I and to the base
    on the e-face. Obtained by composing at stage c + 1 along the connection
    (x, i, j) |-> (x, mu_e(i, j)).
    """
    A = P.family
    Gamma, variant = A.base, A.variant
    c, e = P.c, P.e
    if c + 2 > A.level:
        raise LevelBudgetError(c + 2, A.level, f"filling in {A.name}")
    level = A.level - 1
    phi_ext, tube = extended_tube(P, level)
    path = Gamma.act(P.path, cube.connection_map(c, e, variant))
    i_coord = cube.last(c, variant)
    cof = psh.cof_or(psh.cof_reindex(phi_ext, cube.proj(c, variant)),
                     psh.cof_eq_interval(i_coord, e, level))
    partial = {}
    for r in cof.members:
        k = r.src
        rx = cube.compose(cube.proj(c, variant), r)
        if rx in phi_ext.members:
            ri = cube.compose(i_coord, r)
            squeeze = cube.compose(cube.mu(e, variant),
                                   cube.pair(cube.compose(ri, cube.proj(k, variant)), cube.last(k, variant)))
            theta = cube.pair(cube.proj(k, variant), squeeze)
            partial[r] = A.act(tube[rx], Gamma.act(P.path, cube.lift(rx)), theta)
        else:
            partial[r] = A.act(P.base, P.start, cube.compose(rx, cube.proj(k, variant)))
    base = A.act(P.base, P.start, cube.proj(c, variant))
    return comp(alpha, make_problem(A, c + 1, path, e, cof, partial, base))


def discrete_fib(A: Family) -> FibStructure:
    """a' := a, for a family constant along every interval."""
    if not psh.is_discrete(A):
        raise ValueError(f"{A.name} is not discrete")
    return FibStructure(A, lambda P: P.base, f"discrete({A.name})")


def nabla_fib(A: Family) -> FibStructure:
    """
    Composition in a codiscrete family, one global point at a time: the tube
    value at the point when the point lies in phi, the base otherwise.
    """

    def solve(P):
        variant = P.variant
        out = []
        for v in range(2 ** P.c):
            point = CubeMor(variant, 0, P.c, (v,))
            if point in P.phi.members:
                out.append(P.partial[point][P.e_bar])
            else:
                out.append(P.base[v])
        return tuple(out)

    return FibStructure(A, solve, f"nabla({A.name})")


def nabla_path(a0: tuple, a1: tuple, variant: cube.Variant = cube.Variant.B_ORD) -> tuple:
    """The path in a codiscrete family from a0 to a1: a0 on the 0-face, a1 on the 1-face."""
    if len(cube.global_points_of_interval(variant)) != 2:
        raise ValueError("the interval has a global point other than 0 and 1")
    if len(a0) != len(a1):
        raise ValueError("end-points live at different stages")
    return tuple((a0, a1)[w & 1][w >> 1] for w in range(2 * len(a0)))


def fib_along_iso(alpha: FibStructure, iso: FamilyIso) -> FibStructure:
    """Move a structure on iso.dst to iso.src."""
    D = iso.src

    def solve(P):
        partial = {s: iso.forward(x, s.src + 1, P.over(s)) for s, x in P.partial.items()}
        moved = make_problem(alpha.family, P.c, P.path, P.e, P.phi, partial,
                             iso.forward(P.base, P.c, P.start))
        return iso.backward(comp(alpha, moved), P.c, P.end)

    return FibStructure(D, solve, f"{alpha.name} along iso")


def reindex_fib(alpha: FibStructure, family: Family, along: Callable[[int, Hashable], Hashable]) -> FibStructure:
    """Base change of a structure along a map of bases given stagewise."""

    def solve(P):
        path = along(P.c + 1, P.path)
        moved = make_problem(alpha.family, P.c, path, P.e, P.phi, P.partial, P.base)
        return comp(alpha, moved)

    return FibStructure(family, solve, f"{alpha.name} reindexed")


# ============================================================================
# SIGMA, PI, PATH, ID
# ============================================================================

def sigma_type(A: Family, B: Family) -> Family:
    """Dependent sum one level below A, so that A can be filled."""
    return psh.sigma_family(A, B, min(A.level - 1, B.level))


def fib_sigma(alpha_A: FibStructure, alpha_B: FibStructure, family: Family | None = None) -> FibStructure:
    A, B = alpha_A.family, alpha_B.family
    S = family or sigma_type(A, B)

    def solve(P):
        a, b = P.base
        PA = make_problem(A, P.c, P.path, P.e, P.phi, {s: x for s, (x, _) in P.partial.items()}, a)
        filler = fill(alpha_A, PA)
        PB = make_problem(B, P.c, (P.path, filler), P.e, P.phi,
                          {s: y for s, (_, y) in P.partial.items()}, b)
        b_end = comp(alpha_B, PB)
        a_end = A.act(filler, P.path, cube.face(P.c, P.e_bar, P.variant))
        return a_end, b_end

    return FibStructure(S, solve, f"Σ({alpha_A.name},{alpha_B.name})")


def pi_type(A: Family, B: Family) -> Family:
    return psh.pi_family(A, B, min(A.level - 2, B.level - 1))


def fib_pi(alpha_A: FibStructure, alpha_B: FibStructure, family: Family | None = None) -> FibStructure:
    """
    For each argument a over the far face: fill A backwards from a, then
    compose in B over the filled line with the tube applied to the filler.
    """
    A, B = alpha_A.family, alpha_B.family
    Pi = family or pi_type(A, B)
    level = Pi.level

    def solve(P):
        Gamma, variant = A.base, P.variant
        out = {}
        base_table = dict(P.base)
        for s in cube.homs_into(P.c, level, variant):
            over = Gamma.act(P.path, cube.lift(s))
            for a in A.fiber(s.src, Gamma.act(P.end, s)):
                back = empty_problem(A, s.src, over, P.e_bar, a)
                line = fill(alpha_A, back)
                phi_s = psh.cof_reindex(P.phi, s)
                tube = {}
                for t in phi_s.members:
                    ident = cube.identity(t.src + 1, variant)
                    arg = A.act(line, over, cube.lift(t))
                    tube[t] = psh.pi_apply(P.partial[cube.compose(s, t)], ident, arg)
                start_arg = A.act(line, over, cube.face(s.src, P.e, variant))
                PB = make_problem(B, s.src, (over, line), P.e, phi_s, tube, base_table[(s, start_arg)])
                out[(s, a)] = comp(alpha_B, PB)
        return frozenset(out.items())

    return FibStructure(Pi, solve, f"Π({alpha_A.name},{alpha_B.name})")


def _path_tube(P: CompProblem, A: Family, a0: psh.Section, a1: psh.Section,
               values: Callable[[Hashable], Hashable]) -> CompProblem:
    """
    Recast a problem in a path family as a problem in A one stage up, with
    coordinates (x, j, i): j the path coordinate, i the direction of travel.
    """
    Gamma, variant = A.base, A.variant
    c, e = P.c, P.e
    if c + 2 > A.level:
        raise LevelBudgetError(c + 2, A.level, f"composition of paths in {A.name}")
    level = A.level - 2
    tubes = {s: values(x) for s, x in P.partial.items()}
    phi_ext, tube = generated(P.phi, tubes, level, lambda x, s, kappa: A.act(
        x, Gamma.act(P.over(s), cube.proj(s.src + 1, variant)), cube.lift(cube.lift(kappa))))
    keep_i = cube.pair(cube.proj_left(c, 2, variant), cube.last(c + 1, variant))
    path = Gamma.act(P.path, keep_i)
    j_coord = cube.last(c, variant)
    cof = psh.cof_or(psh.cof_reindex(phi_ext, cube.proj(c, variant)),
                     psh.cof_or(psh.cof_eq_interval(j_coord, 0, level), psh.cof_eq_interval(j_coord, 1, level)))
    partial = {}
    for r in cof.members:
        k = r.src
        rx = cube.compose(cube.proj(c, variant), r)
        rj = cube.compose(j_coord, r)
        over = Gamma.act(P.path, cube.lift(rx))
        if rx in phi_ext.members:
            theta = cube.pair(cube.identity(k + 1, variant), cube.compose(rj, cube.proj(k, variant)))
            partial[r] = A.act(tube[rx], Gamma.act(over, cube.proj(k + 1, variant)), theta)
        elif rj.table == (0,) * (2 ** k):
            partial[r] = a0(k + 1, over)
        else:
            partial[r] = a1(k + 1, over)
    return make_problem(A, c + 1, path, e, cof, partial, values(P.base))


def fib_path(alpha_A: FibStructure, a0: psh.Section, a1: psh.Section,
             family: Family | None = None) -> FibStructure:
    A = alpha_A.family
    paths = family or psh.path_type(A, a0, a1)

    def solve(P):
        return comp(alpha_A, _path_tube(P, A, a0, a1, lambda x: x))

    return FibStructure(paths, solve, f"Path({alpha_A.name})")


def fib_id(alpha_A: FibStructure, a0: psh.Section, a1: psh.Section,
           family: Family | None = None) -> FibStructure:
    """
    Paths compose as in fib_path; the sieve of the result collects the sigma
    in phi whose tube value is degenerate on its far face.
    """
    A = alpha_A.family
    ids = family or psh.id_type(A, a0, a1)
    sieve_level = ids.sieve_level

    def solve(P):
        path = comp(alpha_A, _path_tube(P, A, a0, a1, lambda pair: pair[0]))
        if P.phi.level > sieve_level:
            raise LevelBudgetError(P.phi.level, sieve_level, "identity-type tube")
        Id = P.family
        phi_ext, tube = generated(P.phi, P.partial, sieve_level,
                                  lambda x, s, kappa: Id.act(x, P.over(s), cube.lift(kappa)))
        chi = psh.make_cofibration(P.c, sieve_level, (
            r for r in phi_ext.members
            if cube.face(r.src, P.e_bar, P.variant) in tube[r][1].members), P.variant)
        return path, chi

    return FibStructure(ids, solve, f"Id({alpha_A.name})")


# ============================================================================
# DERIVED OPERATIONS
# ============================================================================

def map_problem(P: CompProblem, h: FamilyMap, target: Family) -> CompProblem:
    """h applied to the tube and base of P."""
    partial = {s: h(x, s.src + 1, P.over(s)) for s, x in P.partial.items()}
    return make_problem(target, P.c, P.path, P.e, P.phi, partial, h(P.base, P.c, P.start))


def pres(h: FamilyMap, alpha_A: FibStructure, alpha_B: FibStructure, P: CompProblem) -> Hashable:
    """
    A path over the far face from (filler of h . P) to h(filler of P),
    constant at h of the tube on phi. Coordinates are (x, j, i) as for paths.
    """
    A, B = alpha_A.family, alpha_B.family
    Gamma, variant = B.base, B.variant
    c, e = P.c, P.e
    if c + 2 > B.level:
        raise LevelBudgetError(c + 2, B.level, "pres")
    level = B.level - 2
    filled_A = fill(alpha_A, P)
    filled_B = fill(alpha_B, map_problem(P, h, B))
    phi_ext, tube = extended_tube(P, level)
    keep_i = cube.pair(cube.proj_left(c, 2, variant), cube.last(c + 1, variant))
    path = Gamma.act(P.path, keep_i)
    j_coord = cube.last(c, variant)
    cof = psh.cof_or(psh.cof_reindex(phi_ext, cube.proj(c, variant)),
                     psh.cof_or(psh.cof_eq_interval(j_coord, 0, level), psh.cof_eq_interval(j_coord, 1, level)))
    partial = {}
    for r in cof.members:
        k = r.src
        rx = cube.compose(cube.proj(c, variant), r)
        rj = cube.compose(j_coord, r)
        over = Gamma.act(P.path, cube.lift(rx))
        if rx in phi_ext.members:
            partial[r] = h(tube[rx], k + 1, over)
        elif rj.table == (0,) * (2 ** k):
            partial[r] = B.act(filled_B, P.path, cube.lift(rx))
        else:
            partial[r] = h(A.act(filled_A, P.path, cube.lift(rx)), k + 1, over)
    base = h(A.act(P.base, P.start, cube.proj(c, variant)), c + 1, Gamma.act(P.start, cube.proj(c, variant)))
    return comp(alpha_B, make_problem(B, c + 1, path, e, cof, partial, base))


def path_ends(family: Family, x: Hashable, c: int, gamma: Hashable) -> tuple:
    """The 0- and 1-face of a path x in family(c + 1) over gamma . p."""
    over = family.base.act(gamma, cube.proj(c, family.variant))
    return (family.act(x, over, cube.face(c, 0, family.variant)),
            family.act(x, over, cube.face(c, 1, family.variant)))


@dataclass(eq=False)
class Equiv:
    """
    Extension structure for f : A -> B. Given b over gamma and a compatible
    system rho |-> (a_rho, q_rho), q_rho a path from b . rho to f(a_rho),
    extend returns (a, q) restricting to the system.
    """

    forward: FamilyMap
    backward: FamilyMap
    extend: Callable[[int, Hashable, Cofibration, dict, Hashable], tuple]
    name: str = ""


def iso_equiv(forward: FamilyMap, backward: FamilyMap, alpha_B: FibStructure) -> Equiv:
    """
    Canonical structure on an isomorphism: compose in B, over a constant
    line, the squeezed system paths together with the constant path at b;
    the 1-face of the result is f(a).
    """
    B = alpha_B.family
    Gamma, variant = B.base, B.variant

    def extend(c, gamma, chi, system, b):
        if c + 2 > B.level:
            raise LevelBudgetError(c + 2, B.level, "equivalence extension")
        level = B.level - 1
        chi_ext, tube = generated(chi, {r: q for r, (_, q) in system.items()}, level,
                                  lambda q, r, kappa: B.act(q, Gamma.act(Gamma.act(gamma, r),
                                                                         cube.proj(r.src, variant)),
                                                            cube.lift(kappa)))
        line = Gamma.act(gamma, cube.proj_left(c, 2, variant))
        j_coord = cube.last(c, variant)
        cof = psh.cof_or(psh.cof_reindex(chi_ext, cube.proj(c, variant)),
                         psh.cof_eq_interval(j_coord, 0, level))
        partial = {}
        for r in cof.members:
            k = r.src
            rx = cube.compose(cube.proj(c, variant), r)
            if rx in chi_ext.members:
                rj = cube.compose(j_coord, r)
                squeeze = cube.compose(cube.mu(0, variant),
                                       cube.pair(cube.compose(rj, cube.proj(k, variant)), cube.last(k, variant)))
                theta = cube.pair(cube.proj(k, variant), squeeze)
                over = Gamma.act(Gamma.act(gamma, rx), cube.proj(k, variant))
                partial[r] = B.act(tube[rx], over, theta)
            else:
                partial[r] = B.act(b, gamma, cube.compose(rx, cube.proj(k, variant)))
        flat = Gamma.act(gamma, cube.proj(c, variant))
        path = comp(alpha_B, make_problem(B, c + 1, line, 0, cof, partial, B.act(b, gamma, cube.proj(c, variant))))
        end = B.act(path, flat, cube.face(c, 1, variant))
        return backward(end, c, gamma), path

    return Equiv(forward, backward, extend, "iso")


def codiscrete_equiv(forward: FamilyMap, backward: FamilyMap,
                     variant: cube.Variant = cube.Variant.B_ORD) -> Equiv:
    """Pointwise structure for a map of codiscrete families; paths are nabla paths."""

    def extend(c, gamma, chi, system, b):
        pulled = backward(b, c, gamma)
        a = []
        for v in range(2 ** c):
            point = CubeMor(variant, 0, c, (v,))
            a.append(system[point][0][0] if point in chi.members else pulled[v])
        a = tuple(a)
        return a, nabla_path(b, forward(a, c, gamma), variant)

    return Equiv(forward, backward, extend, "codiscrete")


def table_inverse(iso_src: Family, forward: FamilyMap) -> FamilyMap:
    """Inverse of a fiberwise bijection, by search."""

    def backward(y, c, gamma):
        hits = [x for x in iso_src.fiber(c, gamma) if forward(x, c, gamma) == y]
        if len(hits) != 1:
            raise ValueError(f"map is not a bijection at {y!r}")
        return hits[0]

    return backward


# ============================================================================
# GLUING
# ============================================================================

@dataclass(eq=False)
class GlueData:
    """
    A over the cofibration phi glued onto B along f. phi must be decided up
    to the level of the glued family, two below its components.
    """

    phi: CofFamily
    alpha_A: FibStructure
    alpha_B: FibStructure
    f: FamilyMap
    equiv: Equiv
    name: str = "Glue"

    def __post_init__(self) -> None:
        self._glue: Family | None = None
        self._sglue: tuple | None = None

    @property
    def A(self) -> Family:
        return self.alpha_A.family

    @property
    def B(self) -> Family:
        return self.alpha_B.family

    @property
    def level(self) -> int:
        return min(self.A.level, self.B.level) - 2


def glue_type(G: GlueData) -> Family:
    """Pairs (a, b): a natural partial element of A on phi, b in B with f(a) = b on phi."""
    if G._glue is not None:
        return G._glue
    A, B = G.A, G.B
    Gamma, variant = B.base, B.variant
    level = G.level
    if level < 0:
        raise LevelBudgetError(2, min(A.level, B.level), "glue")
    if G.phi.level != level:
        raise LevelBudgetError(G.phi.level, level, "glue cofibration")

    def fiber(c, gamma):
        keys = sorted(G.phi.at(c, gamma).members, key=lambda s: (-s.src, s.table))
        constraints = []
        for s in keys:
            gs = Gamma.act(gamma, s)
            for k in range(G.phi.level + 1):
                for t in cube.enumerate_homs(k, s.src, variant):
                    constraints.append((s, cube.compose(s, t), lambda x, gs=gs, t=t: A.act(x, gs, t)))
        out = []
        for b in B.fiber(c, gamma):
            def choices(s, b=b):
                gs = Gamma.act(gamma, s)
                return [x for x in A.fiber(s.src, gs) if G.f(x, s.src, gs) == B.act(b, gamma, s)]

            for assignment in psh.natural_assignments(keys, choices, constraints):
                out.append((frozenset(assignment.items()), b))
        return out

    def act(element, gamma, t):
        a, b = element
        table = dict(a)
        phi_d = G.phi.at(t.src, Gamma.act(gamma, t))
        return frozenset((r, table[cube.compose(t, r)]) for r in phi_d.members), B.act(b, gamma, t)

    G._glue = Family(Gamma, level, fiber, act, f"{G.name}({G.phi.name})")
    return G._glue


def glue_iso(G: GlueData) -> FamilyIso:
    """Glue ≅ A where phi holds: (a, b) |-> a(id), inverse x |-> (x restricted, f(x))."""
    glue = glue_type(G)
    A = G.A

    def unglue(element, c, gamma):
        return dict(element[0])[cube.identity(c, A.variant)]

    def reglue(x, c, gamma):
        phi = G.phi.at(c, gamma)
        return frozenset((s, A.act(x, gamma, s)) for s in phi.members), G.f(x, c, gamma)

    return FamilyIso(glue, A, unglue, reglue)


def glue_fib(G: GlueData) -> FibStructure:
    glue = glue_type(G)
    A, B = G.A, G.B
    Gamma, variant = B.base, B.variant
    alpha_A, alpha_B = G.alpha_A, G.alpha_B

    def solve(P):
        c, e, e_bar = P.c, P.e, P.e_bar
        psi = P.phi
        a_tube = {s: dict(a) for s, (a, _) in P.partial.items()}
        b_tube = {s: b for s, (_, b) in P.partial.items()}
        a_base, b_base = dict(P.base[0]), P.base[1]

        b1 = comp(alpha_B, make_problem(B, c, P.path, e, psi, b_tube, b_base))

        delta = psh.cof_forall_interval(G.phi.at(c + 1, P.path))
        a1, q = {}, {}
        for r in delta.members:
            k = r.src
            over = Gamma.act(P.path, cube.lift(r))
            psi_r = psh.cof_reindex(psi, r)
            tube = {t: a_tube[cube.compose(r, t)][cube.identity(t.src + 1, variant)] for t in psi_r.members}
            PA = make_problem(A, k, over, e, psi_r, tube, a_base[r])
            a1[r] = comp(alpha_A, PA)
            q[r] = pres(G.f, alpha_A, alpha_B, PA)
            end_r = Gamma.act(P.end, r)
            start, finish = path_ends(B, q[r], k, end_r)
            if start != B.act(b1, P.end, r) or finish != G.f(a1[r], k, end_r):
                raise PostconditionError(f"composition in {B.name} is not stable under restriction at {r}")

        phi_end = G.phi.at(c, P.end)
        level = min(delta.level, psi.level)
        a_end, q2 = {}, {}
        for r in sorted(phi_end.members, key=CubeMor.sort_key):
            k = r.src
            end_r = Gamma.act(P.end, r)
            on_delta = psh.cof_reindex(delta, r, level)
            on_psi = psh.cof_reindex(psi, r, level)
            parts = [(on_delta, {t: (a1[cube.compose(r, t)], q[cube.compose(r, t)]) for t in on_delta.members})]
            from_tube = {}
            for t in on_psi.members:
                s = cube.compose(r, t)
                a_far, _ = glue.act(P.partial[s], P.over(s), cube.face(s.src, e_bar, variant))
                still = B.act(b1, P.end, cube.compose(s, cube.proj(t.src, variant)))
                from_tube[t] = (dict(a_far)[cube.identity(t.src, variant)], still)
            parts.append((on_psi, from_tube))
            chi = psh.cof_or(on_delta, on_psi)
            system = psh.system(parts)
            a_end[r], q2[r] = G.equiv.extend(k, end_r, chi, system, B.act(b1, P.end, r))

        flat = Gamma.act(P.end, cube.proj(c, variant))
        top = min(B.level - 1, G.phi.level)
        psi_ext, still_tube = generated(
            psi,
            {s: B.act(b, P.over(s), cube.compose(cube.face(s.src, e_bar, variant), cube.proj(s.src, variant)))
             for s, b in b_tube.items()},
            top,
            lambda v, s, kappa: B.act(v, Gamma.act(Gamma.act(P.end, s), cube.proj(s.src, variant)),
                                      cube.lift(kappa)))
        on_phi = psh.cof_restrict(phi_end, top)
        final = psh.system([(on_phi, {r: q2[r] for r in on_phi.members}), (psi_ext, still_tube)])
        b_end = comp(alpha_B, make_problem(B, c, flat, 0, psh.cof_or(on_phi, psi_ext), final, b1))
        return frozenset(a_end.items()), b_end

    return FibStructure(glue, solve, f"glue({G.phi.name})")


def sglue(G: GlueData) -> tuple[Family, FamilyIso]:
    """The strict glue family, literally A where phi holds, with its iso to Glue."""
    if G._sglue is None:
        glue = glue_type(G)
        G._sglue = psh.lift_iea(G.phi, G.A, glue, glue_iso(G).inverse())
    return G._sglue


def sglue_fib(G: GlueData) -> FibStructure:
    D, g = sglue(G)
    return fib_along_iso(glue_fib(G), g)


# ============================================================================
# UNIVERSE
# ============================================================================

@dataclass(eq=False)
class UniverseCode:
    """A family with a composition structure, standing in for a point of the universe."""

    family: Family
    fib: FibStructure
    name: str = ""


def discrete_code(elements, level: int, variant: cube.Variant = cube.Variant.B_ORD,
                  name: str = "") -> UniverseCode:
    base = psh.terminal(level, variant)
    family = psh.constant_family(base, elements, name=name)
    return UniverseCode(family, discrete_fib(family), name or family.name)


def line_endpoint(line: UniverseCode, e: int) -> UniverseCode:
    """Restrict a code over the interval to the end-point e."""
    L = line.family
    variant = L.variant
    T = psh.terminal(L.level, variant)
    along = lambda c, _: cube.compose(cube.delta(e, variant), cube.bang(c, variant))
    family = psh.reindex_family(L, T, along, f"{L.name}[{e}]")
    return UniverseCode(family, reindex_fib(line.fib, family, along), family.name)


def relabelled_line(elements, relabel: dict, level: int,
                    variant: cube.Variant = cube.Variant.B_ORD) -> UniverseCode:
    """
    A line of codes over the interval: the discrete set elements, replaced
    by its image under relabel over the end-point 1.
    """
    I = psh.interval(level, variant)
    plain = psh.constant_family(I, elements, name="S")
    renamed = psh.constant_family(I, [relabel[x] for x in elements], name="S'")
    undo = {v: k for k, v in relabel.items()}
    f = FamilyIso(renamed, plain, lambda x, c, g: undo[x], lambda y, c, g: relabel[y])
    D, g = psh.lift_iea(psh.interval_endpoint_cof(I, 1, level), renamed, plain, f)
    return UniverseCode(D, fib_along_iso(discrete_fib(plain), g), "S→S'")


def _same_fibers(X: Family, Y: Family, gamma) -> bool:
    return all(set(X.fiber(c, gamma)) == set(Y.fiber(c, gamma)) for c in range(min(X.level, Y.level) + 1))


def universe_comp(e: int, phi_holds: bool, line: UniverseCode | None, B: UniverseCode) -> UniverseCode:
    """
    Composition in the universe at the global stage. Where phi holds the
    result is, at carrier level, the far end of the line; elsewhere it is
    the glue of nothing onto B.
    """
    e_bar = 1 - e
    T = B.family.base
    point = T.carrier(0)[0]
    if line is None:
        if phi_holds:
            raise AdherenceError("a line of codes is required where phi holds")
        far = B
        forward = lambda x, c, g: x
    else:
        near = line_endpoint(line, e)
        if not _same_fibers(near.family, B.family, point):
            raise AdherenceError(f"line does not start at {B.name}")
        far = line_endpoint(line, e_bar)
        variant = line.family.variant

        def forward(x, c, g):
            return tp(line.fib, c, cube.last(c, variant), e_bar, x)

    backward = table_inverse(far.family, forward)
    level = min(far.family.level, B.family.level) - 2
    G = GlueData(psh.constant_cof(T, phi_holds, level), far.fib, B.fib, forward,
                 iso_equiv(forward, backward, B.fib), "SGlue")
    D, _ = sglue(G)
    if phi_holds and not all(set(D.fiber(c, point)) == set(far.family.fiber(c, point))
                             for c in range(D.level + 1)):
        raise PostconditionError("universe composition is not strict on phi")
    return UniverseCode(D, sglue_fib(G), f"comp({B.name})")


# ============================================================================
# ELIMINATORS
# ============================================================================

def path_telescope(P: psh.TruncPresheaf, a) -> tuple[Family, psh.TruncPresheaf]:
    """Paths in P out of a, and the total space of (x, path from a to x)."""
    A = psh.presheaf_family(P, P)
    start = lambda c, x: P.act(a, cube.bang(c, P.variant))
    paths = psh.path_type(A, start, lambda c, x: x)
    return paths, psh.sigma(P, paths)


def id_telescope(P: psh.TruncPresheaf, a) -> tuple[Family, psh.TruncPresheaf]:
    A = psh.presheaf_family(P, P)
    start = lambda c, x: P.act(a, cube.bang(c, P.variant))
    ids = psh.id_type(A, start, lambda c, x: x)
    return ids, psh.sigma(P, ids)


def refl_point(P: psh.TruncPresheaf, a, sieve_level: int | None = None) -> tuple:
    path = P.act(a, cube.proj(0, P.variant))
    if sieve_level is None:
        return a, path
    return a, (path, psh.cof_top(0, sieve_level, P.variant))


def _constant_tube(C: Family, c_a, anchor, phi: Cofibration) -> dict:
    return {s: C.act(c_a, anchor, cube.bang(s.src + 1, C.variant)) for s in phi.members}


def id_elim(P: psh.TruncPresheaf, a, alpha_C: FibStructure, c_a, target) -> Hashable:
    """
    Eliminate an identity proof (x, (w, psi)) out of a into C, given c_a over
    refl. Composes along the contraction i |-> (w(i), w(i and -), (i = 0) or psi).
    """
    C = alpha_C.family
    variant = P.variant
    x, (w, psi) = target
    level = psi.level
    squeezed = P.act(w, cube.mu(0, variant))
    psi_line = psh.cof_or(psh.cof_eq_interval(cube.identity(1, variant), 0, level),
                          psh.cof_reindex(psi, cube.bang(1, variant), level))
    contraction = (w, (squeezed, psi_line))
    anchor = refl_point(P, a, level)
    phi = psh.cof_restrict(psi, min(level, C.level - 1))
    problem = make_problem(C, 0, contraction, 0, phi, _constant_tube(C, c_a, anchor, phi), c_a)
    return comp(alpha_C, problem)


@dataclass(frozen=True)
class PathElim:
    value: Hashable
    witness: Hashable
    ends: tuple


def path_elim(P: psh.TruncPresheaf, a, alpha_C: FibStructure, c_a, target) -> PathElim:
    """
    Transport c_a along the contraction of the path, plus the computation
    path H over refl from the transport of c_a to c_a.
    """
    C = alpha_C.family
    T = C.base
    variant = P.variant
    x, w = target
    contraction = (w, P.act(w, cube.mu(0, variant)))
    value = tp(alpha_C, 0, contraction, 0, c_a)
    anchor = refl_point(P, a)
    still = T.act(anchor, cube.bang(2, variant))
    level = C.level - 1
    phi = psh.cof_eq_interval(cube.identity(1, variant), 1, level)
    base = C.act(c_a, anchor, cube.bang(1, variant))
    H = comp(alpha_C, make_problem(C, 1, still, 0, phi, _constant_tube(C, c_a, anchor, phi), base))
    return PathElim(value, H, path_ends(C, H, 0, anchor))
