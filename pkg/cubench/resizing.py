"""
The counterexample to propositional resizing, run at finite bounds.

Gamma is the naturals with n realized by every m > n, and A(n) is the set
{m | m > n} with m realized by n and by m. Over the constant presheaf on a
window of Gamma the codiscrete family of A is a fibrant homotopy
proposition whose fibers are uniform and well supported, so every modest
target sees it as a point. A itself has no section. The pipeline below
produces each of these facts as a certificate that can be checked again
from its data, and the verdict only claims what the certificates carry.

The quantification over all propositions in the universe is not
materialized; the orthogonality suite checks one modest sample family at
a time, cell by cell over the window.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from config.constants import (
    DEFAULT_SEED,
    FIBER_WIDTH,
    MAX_MAP_SPACE,
    MIN_CANDIDATES,
    N_BOUND,
    ORTHOGONALITY_SIZE_BOUND,
    STEP_BUDGET,
    TRACKER_SIZE_BOUND,
    WINDOW_LEVELS,
)
from cubench import asm, cube, kan, pca, psh
from cubench.cube import Variant
from cubench.errors import CubenchError
from cubench.verdict import CheckLine, Status

logger = logging.getLogger(__name__)

# realizer of the section-free family's well-supportedness, lifted pointwise:
# r |-> (y |-> r)
NABLA_SUPPORT_TRACKER = pca.app(pca.S, pca.App(pca.K, pca.K), pca.identity_code())

CONFIRMED = "propositional resizing fails at bounds"


# ============================================================================
# WINDOW AND FAMILY
# ============================================================================

@dataclass(frozen=True)
class Window:
    """Gamma restricted to 0..n_max, fibers of A to width elements, stages to level."""

    n_max: int = N_BOUND
    width: int = FIBER_WIDTH
    level: int = WINDOW_LEVELS
    variant: Variant = Variant.B_ORD

    def values(self, n: int) -> range:
        return range(n + 1, n + 1 + self.width)

    def cells(self) -> list[tuple[int, int]]:
        return [(c, gamma) for c in range(self.level + 1) for gamma in range(self.n_max + 1)]


@dataclass(frozen=True)
class HpropCertificate:
    pairs_checked: int
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.pairs_checked > 0 and not self.failures


@dataclass(frozen=True)
class FibrancyCertificate:
    problems_checked: int
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.problems_checked > 0 and not self.failures


@dataclass(eq=False)
class NablaA:
    window: Window
    data: asm.FamilyOfAssemblies
    family: psh.Family
    fib: kan.FibStructure
    hprop: HpropCertificate


def build_nabla_A(level_bound: int = WINDOW_LEVELS, n_max: int = N_BOUND, width: int = FIBER_WIDTH,
                  variant: Variant = Variant.B_ORD,
                  data: asm.FamilyOfAssemblies | None = None) -> NablaA:
    """
    The codiscrete family of A over the constant presheaf on the Gamma window,
    with its composition structure and a checked path between every pair.
    """
    window = Window(n_max, width, level_bound, variant)
    if data is None:
        _, data = asm.counterexample_data()
    base = psh.constant_presheaf(range(n_max + 1), level_bound, variant, "ΔΓ")
    family = psh.codiscrete(base, window.values, level_bound, "∇A")
    fib = kan.nabla_fib(family)
    hprop = check_hprop(family, window)
    logger.info("∇A built over %d base points at levels <= %d, %d path pairs checked",
                n_max + 1, level_bound, hprop.pairs_checked)
    return NablaA(window, data, family, fib, hprop)


def check_hprop(family: psh.Family, window: Window) -> HpropCertificate:
    """nabla_path joins every pair of elements one stage below the top."""
    variant = window.variant
    checked = 0
    failures = []
    for gamma in range(window.n_max + 1):
        for c in range(window.level):
            fiber = family.fiber(c, gamma)
            above = set(family.fiber(c + 1, gamma))
            for a0 in fiber:
                for a1 in fiber:
                    p = kan.nabla_path(a0, a1, variant)
                    ends = (family.act(p, gamma, cube.face(c, 0, variant)),
                            family.act(p, gamma, cube.face(c, 1, variant)))
                    if p not in above or ends != (a0, a1):
                        failures.append(f"path {a0}->{a1} over {gamma} has ends {ends}")
                    checked += 1
    return HpropCertificate(checked, tuple(failures[:20]))


def check_fibrancy(nabla: NablaA, samples: int = 200, seed: int = DEFAULT_SEED) -> FibrancyCertificate:
    """
    Run nabla_fib on problems cut out of random elements one stage up: every
    tube on every sieve, with the result checked against all admissible outputs.
    """
    rng = np.random.default_rng(seed)
    A, window = nabla.family, nabla.window
    variant = window.variant
    sieves = {c: psh.enumerate_sieves(c, A.level - 1, variant) for c in range(A.level)}
    checked = 0
    failures = []
    for _ in range(samples):
        c = int(rng.integers(A.level))
        gamma = int(rng.integers(window.n_max + 1))
        e = int(rng.integers(2))
        phi = sieves[c][int(rng.integers(len(sieves[c])))]
        fiber = A.fiber(c + 1, gamma)
        y = fiber[int(rng.integers(len(fiber)))]
        partial = {s: A.act(y, gamma, cube.lift(s)) for s in phi.members}
        base = A.act(y, gamma, cube.face(c, e, variant))
        try:
            P = kan.make_problem(A, c, gamma, e, phi, partial, base)
            result = kan.comp(nabla.fib, P)
        except CubenchError as exc:
            failures.append(f"stage {c} over {gamma}: {exc}")
            continue
        if result not in kan.admissible(P):
            failures.append(f"stage {c} over {gamma}: {result} not admissible")
        checked += 1
    return FibrancyCertificate(checked, tuple(failures[:20]))


# ============================================================================
# UNIFORMITY AND WELL-SUPPORTEDNESS
# ============================================================================

@dataclass(frozen=True)
class UniformityCertificate:
    """Per (stage, base point) the constant code realizing every element."""

    common: dict = field(default_factory=dict)
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return bool(self.common) and not self.failures


@dataclass(frozen=True)
class SupportCertificate:
    base_code: pca.Code
    lifted_code: pca.Code
    checked: int
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures


def _outputs(code: pca.Code, points: int, budget: int) -> list[int | None]:
    return [pca.result_number(pca.apply_to_number(code, v, budget)) for v in range(points)]


def realizes_element(outputs: Sequence[int | None], element: tuple, fiber: asm.AnyAssembly) -> bool:
    """A code realizes a codiscrete element when its value at each vertex realizes the entry there."""
    return all(r is not None and fiber.realizes(r, m) for r, m in zip(outputs, element))


def certify_uniform_well_supported(nabla: NablaA, budget: int = STEP_BUDGET
                                   ) -> tuple[UniformityCertificate, SupportCertificate]:
    A, window, data = nabla.family, nabla.window, nabla.data
    common: dict = {}
    failures: list[str] = []
    for gamma in range(window.n_max + 1):
        fiber = data.fiber(gamma)
        verdict = asm.is_uniform(fiber, sample_bound=window.width)
        if not verdict.ok:
            failures.append(f"A({gamma}) has no common realizer: {verdict.refutation}")
            continue
        code = pca.constant_code(verdict.common[None])
        for c in range(window.level + 1):
            outputs = _outputs(code, 2 ** c, budget)
            bad = next((x for x in A.fiber(c, gamma) if not realizes_element(outputs, x, fiber)), None)
            if bad is None:
                common[(c, gamma)] = code
            else:
                failures.append(f"{pca.format_code(code)} does not realize {bad} over {gamma}")
    uniformity = UniformityCertificate(common, tuple(failures[:20]))

    base_code = pca.identity_code()
    support = asm.is_well_supported(data, base_code, budget, sample_bound=window.n_max + 1)
    checked = support.checked
    failures = [] if support.ok else [f"A is not supported by {pca.format_code(base_code)}: {support.failure}"]
    for gamma in range(window.n_max + 1):
        fiber = data.fiber(gamma)
        for r in window.values(gamma):
            lifted = pca.apply(NABLA_SUPPORT_TRACKER, pca.numeral(r), budget)
            if not isinstance(lifted, pca.Value):
                failures.append(f"tracker on realizer {r} of {gamma}: {lifted}")
                continue
            for c in range(window.level + 1):
                outputs = _outputs(lifted.code, 2 ** c, budget)
                if not any(realizes_element(outputs, x, fiber) for x in A.fiber(c, gamma)):
                    failures.append(f"{pca.format_code(lifted.code)} realizes nothing over {gamma} at stage {c}")
                checked += 1
    return uniformity, SupportCertificate(base_code, NABLA_SUPPORT_TRACKER, checked, tuple(failures[:20]))


# ============================================================================
# SECTIONS
# ============================================================================

@dataclass(frozen=True)
class RefutationSummary:
    size_bound: int
    n_bound: int
    budget: int
    refuted: tuple[asm.SectionRefutation, ...] = ()
    survivors: tuple[asm.SectionRefutation, ...] = ()
    inconclusive: tuple[asm.SectionRefutation, ...] = ()

    @property
    def candidates(self) -> int:
        return len(self.refuted) + len(self.survivors) + len(self.inconclusive)


def _refute_one(args: tuple) -> asm.SectionRefutation:
    code, n_bound, budget = args
    return asm.refute_section(code, n_bound, budget)


def refute_all_sections(size_bound: int = TRACKER_SIZE_BOUND, n_bound: int = N_BOUND,
                        budget: int = STEP_BUDGET, inject: Iterable[pca.Code] = (),
                        workers: int = 1) -> RefutationSummary:
    """
    Try every code up to size_bound leaves (plus any injected ones) as a
    tracker of a section of A. Running out of budget is not a contradiction,
    so diverging candidates are kept apart as inconclusive.
    """
    candidates = list(inject)
    if size_bound >= 1:
        candidates += list(pca.enumerate_codes(size_bound))
    jobs = [(code, n_bound, budget) for code in candidates]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_refute_one, jobs, chunksize=256))
    else:
        outcomes = [_refute_one(job) for job in jobs]

    refuted, survivors, inconclusive = [], [], []
    for outcome in outcomes:
        if not outcome.refuted:
            logger.warning("candidate section %s survives n <= %d", pca.format_code(outcome.candidate), n_bound)
            survivors.append(outcome)
        elif outcome.kind == "diverged":
            inconclusive.append(outcome)
        else:
            logger.debug("refuted %s", outcome.describe())
            refuted.append(outcome)
    if inconclusive:
        logger.warning("%d candidates ran out of budget %d", len(inconclusive), budget)
    return RefutationSummary(size_bound, n_bound, budget, tuple(refuted), tuple(survivors), tuple(inconclusive))


# ============================================================================
# ORTHOGONALITY
# ============================================================================

def _stay(x: Hashable, gamma: int, sigma: cube.CubeMor) -> Hashable:
    return x


@dataclass(frozen=True, eq=False)
class SampleFamily:
    """Assemblies X(c, gamma) over the window, restricted along cube maps into stage c."""

    name: str
    fiber: Callable[[int, int], asm.Assembly]
    restrict: Callable[[Hashable, int, cube.CubeMor], Hashable] = _stay

    def is_modest(self, window: Window) -> bool:
        return all(asm.is_modest(self.fiber(c, gamma)) for c, gamma in window.cells())


@dataclass(frozen=True)
class OrthogonalityOutcome:
    name: str
    modest: bool
    result: asm.OrthogonalityResult
    cells: tuple = ()
    unnatural: tuple[str, ...] = ()
    skipped: int = 0

    @property
    def undecided_cells(self) -> list[tuple[int, int]]:
        return [(c, gamma) for (c, gamma), r in self.cells if r.status is Status.INCONCLUSIVE]


def constant_sample(X: asm.Assembly) -> SampleFamily:
    return SampleFamily(X.name, lambda c, gamma: X)


@lru_cache(maxsize=None)
def _points(count: int) -> asm.Assembly:
    return asm.assembly({k: {k} for k in range(count)}, f"X{count}")


def graded_sample() -> SampleFamily:
    """One, two or three points over gamma as gamma mod 3 is 0, 1 or 2."""
    return SampleFamily("Xγ", lambda c, gamma: _points(gamma % 3 + 1))


def default_samples() -> list[SampleFamily]:
    """Modest targets: constant with one, two and three points, and one varying over gamma."""
    return [
        constant_sample(asm.assembly({"*": {0}}, "X1")),
        constant_sample(asm.assembly({"a": {0}, "b": {1}}, "X2")),
        constant_sample(asm.assembly({"a": {0}, "b": {1}, "c": {2}}, "X3")),
        graded_sample(),
    ]


def non_modest_control() -> SampleFamily:
    """Two points sharing realizer 1: a constant code tracks non-constant maps into it."""
    return constant_sample(asm.assembly({"a": {0, 1}, "b": {1}}, "Xshared"))


def window_assembly(nabla: NablaA, c: int, gamma: int) -> asm.Assembly:
    """∇A at stage c over gamma: a vertex tuple is realized by what realizes all its entries."""
    fiber = nabla.data.fiber(gamma)
    top = gamma + nabla.window.width
    spec = {x: {r for r in range(top + 1) if all(fiber.realizes(r, m) for m in set(x))}
            for x in nabla.family.fiber(c, gamma)}
    return asm.assembly(spec, f"∇A({c}, {gamma})")


def _unnatural_points(sample: SampleFamily, results: dict, variant: Variant) -> list[str]:
    """Points extracted at (c, gamma) must restrict to points extracted one stage down."""
    failures = []
    for (c, gamma), result in results.items():
        for x in result.points:
            if sample.restrict(x, gamma, cube.identity(c, variant)) != x:
                failures.append(f"{sample.name}: {x!r} over {gamma} moves under the identity of {c}")
            for sigma in cube.homs_into(c, c, variant):
                below = results.get((sigma.src, gamma))
                if below is None:
                    continue
                y = sample.restrict(x, gamma, sigma)
                if y not in below.points:
                    failures.append(f"{sample.name}: point {x!r} at stage {c} over {gamma} restricts along "
                                    f"{cube.format_mor(sigma)} to {y!r}, not a point at stage {sigma.src}")
    return failures


def _combine(results: dict, unnatural: list[str], skipped: int) -> asm.OrthogonalityResult:
    checked = list(results.values())
    undecided = [cell for cell, r in results.items() if r.status is Status.INCONCLUSIVE]
    if unnatural or any(r.status is Status.FAIL for r in checked):
        status = Status.FAIL
    elif undecided or not checked:
        status = Status.INCONCLUSIVE
    else:
        status = Status.PASS
    notes = []
    if undecided:
        shown = ", ".join(f"stage {c} over {gamma}" for c, gamma in undecided[:4])
        notes.append(f"undecided at {len(undecided)} cells ({shown})")
    if skipped:
        notes.append(f"{skipped} cells over the map-space cap skipped")
    if unnatural:
        notes.append(f"{len(unnatural)} points not natural")
    return asm.OrthogonalityResult(
        status,
        all(r.constants_bijective for r in checked),
        all(r.precomposition_bijective for r in checked),
        sum(r.tracked for r in checked),
        sum(r.refuted for r in checked),
        sum(r.inconclusive for r in checked),
        "; ".join(notes),
        sum(r.ruled_out for r in checked),
    )


def orthogonality_suite(nabla: NablaA, samples: Sequence[SampleFamily] | None = None,
                        size_bound: int = ORTHOGONALITY_SIZE_BOUND, budget: int = STEP_BUDGET,
                        map_space_cap: int = MAX_MAP_SPACE) -> list[OrthogonalityOutcome]:
    """
    For each sample X and every cell (c, gamma) of the window: the tracked
    maps from ∇A(c, gamma) to X(c, gamma) are exactly the constants, and
    factoring through the truncation changes nothing. The points so
    extracted must then commute with restriction.

    Cells of a non-modest sample whose map space exceeds map_space_cap are
    skipped; modest samples only ever enumerate maps constant on sharing
    components.
    """
    samples = default_samples() if samples is None else list(samples)
    window = nabla.window
    sources = {(c, gamma): window_assembly(nabla, c, gamma) for c, gamma in window.cells()}
    outcomes = []
    for sample in samples:
        results = {}
        skipped = 0
        for (c, gamma), source in sources.items():
            X = sample.fiber(c, gamma)
            if not asm.is_modest(X) and len(X.elements) ** len(source.elements) > map_space_cap:
                skipped += 1
                continue
            results[(c, gamma)] = asm.orthogonality_check(source, X, size_bound, budget)
        unnatural = _unnatural_points(sample, results, window.variant)
        result = _combine(results, unnatural, skipped)
        logger.info("orthogonality against %s: %s over %d cells", sample.name, result.status.value, len(results))
        if result.note:
            logger.warning("orthogonality against %s: %s", sample.name, result.note)
        outcomes.append(OrthogonalityOutcome(sample.name, sample.is_modest(window), result,
                                             tuple(results.items()), tuple(unnatural[:20]), skipped))
    return outcomes


# ============================================================================
# REPORT
# ============================================================================

@dataclass
class ResizingReport:
    window: Window
    hprop: HpropCertificate
    fibrancy: FibrancyCertificate
    uniformity: UniformityCertificate
    support: SupportCertificate
    orthogonality: list[OrthogonalityOutcome]
    sections: RefutationSummary | None
    size_bound: int
    budget: int
    min_candidates: int = MIN_CANDIDATES

    @property
    def bounds(self) -> str:
        return f"S={self.size_bound}, N={self.window.n_max}, budget={self.budget}"

    def check_lines(self) -> list[CheckLine]:
        def status(ok: bool) -> Status:
            return Status.PASS if ok else Status.FAIL

        lines = [
            CheckLine.of("resizing.hprop", status(self.hprop.ok), pairs=self.hprop.pairs_checked),
            CheckLine.of("resizing.fibrancy", status(self.fibrancy.ok), problems=self.fibrancy.problems_checked),
            CheckLine.of("resizing.uniform", status(self.uniformity.ok), fibers=len(self.uniformity.common)),
            CheckLine.of("resizing.well_supported", status(self.support.ok), checked=self.support.checked,
                         tracker=pca.format_code(self.support.lifted_code)),
        ]
        for outcome in self.orthogonality:
            r = outcome.result
            lines.append(CheckLine.of(f"resizing.orthogonality.{outcome.name}", r.status,
                                      cells=len(outcome.cells), tracked=r.tracked, refuted=r.refuted,
                                      inconclusive=r.inconclusive, unnatural=len(outcome.unnatural)))
        if self.sections is None:
            lines.append(CheckLine.of("resizing.sections", Status.INCONCLUSIVE, candidates=0))
        else:
            s = self.sections
            if s.survivors:
                sec_status = Status.FAIL
            elif s.inconclusive or s.candidates < self.min_candidates:
                sec_status = Status.INCONCLUSIVE
            else:
                sec_status = Status.PASS
            lines.append(CheckLine.of("resizing.sections", sec_status, candidates=s.candidates,
                                      refuted=len(s.refuted), survivors=len(s.survivors),
                                      inconclusive=len(s.inconclusive)))
        verdict_status, _ = final_verdict(self)
        lines.append(CheckLine.of("resizing.verdict", verdict_status))
        return lines

    def render(self) -> str:
        out = ["== ∇A over ΔΓ ==",
               f"window: gamma <= {self.window.n_max}, fiber width {self.window.width}, "
               f"levels <= {self.window.level}, {self.window.variant.value}",
               "",
               "== homotopy proposition ==",
               f"nabla_path checked on {self.hprop.pairs_checked} pairs"]
        out += [f"  ! {f}" for f in self.hprop.failures]
        out += ["", "== fibrancy ==", f"nabla_fib checked on {self.fibrancy.problems_checked} problems"]
        out += [f"  ! {f}" for f in self.fibrancy.failures]
        out += ["", "== uniformity =="]
        for (c, gamma), code in sorted(self.uniformity.common.items())[: 2 * (self.window.level + 1)]:
            out.append(f"  stage {c}, gamma {gamma}: {pca.format_code(code)}")
        out.append(f"  ... {len(self.uniformity.common)} fibers in all")
        out += [f"  ! {f}" for f in self.uniformity.failures]
        out += ["", "== well-supportedness ==",
                f"A supported by {pca.format_code(self.support.base_code)}, "
                f"∇A by {pca.format_code(self.support.lifted_code)} ({self.support.checked} checks)"]
        out += [f"  ! {f}" for f in self.support.failures]
        out += ["", "== orthogonality (per sample; the full quantifier over propositions is not built) =="]
        for outcome in self.orthogonality:
            r = outcome.result
            kind = "modest" if outcome.modest else "not modest"
            out.append(f"  {outcome.name} ({kind}): {r.status.value} over {len(outcome.cells)} cells, "
                       f"constants {r.constants_bijective}, truncation {r.precomposition_bijective}")
            if r.note:
                out.append(f"    {r.note}")
            out += [f"  ! {f}" for f in outcome.unnatural]
        out += ["", "== sections =="]
        if self.sections is None:
            out.append("  not checked")
        else:
            s = self.sections
            out.append(f"  {s.candidates} candidates, {len(s.refuted)} refuted, "
                       f"{len(s.survivors)} survive, {len(s.inconclusive)} out of budget")
            out += [f"  survivor: {r.describe()}" for r in s.survivors]
            out += [f"  e.g. {r.describe()}" for r in s.refuted[:5]]
        _, line = final_verdict(self)
        out += ["", "== verdict ==", line]
        return "\n".join(out) + "\n"


def final_verdict(report: ResizingReport) -> tuple[Status, str]:
    broken = [name for name, cert in (("hprop", report.hprop), ("fibrancy", report.fibrancy),
                                      ("uniformity", report.uniformity), ("well-supportedness", report.support))
              if not cert.ok]
    if broken:
        return Status.FAIL, f"certificates failed: {', '.join(broken)}"
    modest = [o for o in report.orthogonality if o.modest]
    if not modest:
        return Status.INCONCLUSIVE, "inconclusive: no modest sample checked"
    if any(o.result.status is Status.FAIL for o in modest):
        failed = ", ".join(o.name for o in modest if o.result.status is Status.FAIL)
        return Status.FAIL, f"orthogonality fails for {failed}"
    if any(o.result.status is Status.INCONCLUSIVE for o in modest):
        open_ = "; ".join(f"{o.name} {o.result.note}" for o in modest if o.result.status is Status.INCONCLUSIVE)
        return Status.INCONCLUSIVE, f"inconclusive: orthogonality undecided for {open_}"
    s = report.sections
    if s is None:
        return Status.INCONCLUSIVE, "inconclusive: sections unchecked"
    if s.survivors:
        shown = ", ".join(pca.format_code(r.candidate) for r in s.survivors[:5])
        return Status.FAIL, f"section not refuted: {shown}"
    if s.inconclusive:
        return Status.INCONCLUSIVE, f"inconclusive: {len(s.inconclusive)} candidates out of budget, raise --budget"
    if s.candidates < report.min_candidates:
        return (Status.INCONCLUSIVE,
                f"inconclusive: only {s.candidates} candidates (need {report.min_candidates}), raise --tracker-size")
    return Status.PASS, f"{CONFIRMED} ({report.bounds})"


def run_pipeline(size_bound: int = TRACKER_SIZE_BOUND, n_bound: int = N_BOUND, budget: int = STEP_BUDGET,
                 level: int = WINDOW_LEVELS, width: int = FIBER_WIDTH, variant: Variant = Variant.B_ORD,
                 seed: int = DEFAULT_SEED, check_sections: bool = True, inject: Iterable[pca.Code] = (),
                 samples: Sequence[SampleFamily] | None = None, min_candidates: int = MIN_CANDIDATES,
                 workers: int = 1) -> ResizingReport:
    """Every stage of the counterexample, timed, gathered into one report."""

    def stage(name, fn, *args, **kwargs):
        start = time.perf_counter()
        logger.info("%s ...", name)
        value = fn(*args, **kwargs)
        logger.info("%s done in %.2fs", name, time.perf_counter() - start)
        return value

    nabla = stage("building ∇A", build_nabla_A, level, n_bound, width, variant)
    fibrancy = stage("checking fibrancy", check_fibrancy, nabla, seed=seed)
    uniformity, support = stage("certifying uniformity", certify_uniform_well_supported, nabla, budget)
    orthogonality = stage("orthogonality", orthogonality_suite, nabla, samples, budget=budget)
    sections = None
    if check_sections:
        sections = stage("refuting sections", refute_all_sections, size_bound, n_bound, budget, inject, workers)
    report = ResizingReport(nabla.window, nabla.hprop, fibrancy, uniformity, support, orthogonality,
                            sections, size_bound, budget, min_candidates)
    logger.info("verdict: %s", final_verdict(report)[1])
    return report
