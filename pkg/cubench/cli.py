"""
Command line driver.

    python -m cubench axioms --level 3
    python -m cubench homs 1 1 --variant B
    python -m cubench comp samples/discrete.prob
    python -m cubench glue-demo
    python -m cubench counterexample --tracker-size 3 --json
    python -m cubench report --out build/report.txt

Every suite prints CHECK lines on stdout; logging goes to stderr. The exit
status is 0 when nothing failed, 1 on a failure or an engine error and 2 when
some check was inconclusive but none failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from config.constants import (
    DEFAULT_LEVEL_BOUND,
    DEFAULT_SEED,
    LITERAL_BOUND,
    N_BOUND,
    STEP_BUDGET,
    TRACKER_SIZE_BOUND,
)
from cubench import axioms, cube, kan, log, pca, psh, resizing, textio
from cubench.cube import CubeMor, Variant
from cubench.errors import CubenchError
from cubench.verdict import CheckLine, Status
from data.validation import InputValidator

logger = logging.getLogger(__name__)

# glue and universe composites sit two levels below their components
GLUE_LEVEL = 3


@dataclass(frozen=True)
class RunConfig:
    level: int = DEFAULT_LEVEL_BOUND
    variant: Variant = Variant.B_ORD
    tracker_size: int = TRACKER_SIZE_BOUND
    budget: int = STEP_BUDGET
    n_bound: int = N_BOUND
    literal_bound: int = LITERAL_BOUND
    seed: int = DEFAULT_SEED
    json: bool = False
    out: str | None = None

    def __post_init__(self) -> None:
        problems = InputValidator.validate_all(self.level, self.variant.value, self.tracker_size,
                                               self.budget, self.n_bound)
        if problems:
            raise ValueError("; ".join(problems))

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            level=args.level,
            variant=Variant(args.variant),
            tracker_size=args.tracker_size,
            budget=args.budget,
            n_bound=args.n_bound,
            seed=args.seed,
            json=args.json,
            out=args.out,
        )


def exit_status(lines: list[CheckLine]) -> int:
    statuses = {line.status for line in lines}
    if Status.FAIL in statuses:
        return 1
    if Status.INCONCLUSIVE in statuses:
        return 2
    return 0


def emit(lines: list[CheckLine], config: RunConfig, extra: list[str] = ()) -> None:
    if config.json:
        print(json.dumps([{"name": line.name, "status": line.status.value,
                           "details": {k: str(v) for k, v in line.details}} for line in lines], indent=2))
        return
    for text in extra:
        print(text)
    for line in lines:
        print(line.render())


# ============================================================================
# SUITES
# ============================================================================

def cmd_axioms(config: RunConfig, mu0: CubeMor | None = None, mu1: CubeMor | None = None) -> list[CheckLine]:
    return axioms.run_axioms(axioms.AxiomSettings(config.level, config.variant, mu0, mu1))


def cmd_homs(m: int, n: int, variant: Variant) -> tuple[list[str], int]:
    for dim in (m, n):
        ok, message = InputValidator.validate_dimension(dim)
        if not ok:
            raise ValueError(message)
    homs = cube.enumerate_homs(m, n, variant)
    listing = [cube.format_mor(h) for h in homs]
    listing.append(f"count {variant.value}({m}, {n}) = {len(homs)}")
    return listing, len(homs)


def carrier_labels(code: kan.UniverseCode) -> list:
    """The global fiber of a code; glued pairs off the cofibration are read by their B part."""
    point = code.family.base.carrier(0)[0]
    return sorted(x[1] if isinstance(x, tuple) else x for x in code.family.fiber(0, point))


def cmd_comp(text: str) -> tuple[list[CheckLine], list[str]]:
    """Run every problem in a parsed file; a bare cubeset gets a functoriality check."""
    doc = textio.parse_document(text)
    lines, results = [], []
    if doc.context is not None and not doc.problems():
        verdict = psh.check_presheaf(doc.context)
        lines.append(CheckLine.of(f"cubeset.{doc.context.name}", verdict.status,
                                  level=doc.context.level, elements=sum(1 for _ in doc.context.elements())))
    for decl in doc.problems():
        if isinstance(decl, textio.UniverseDecl):
            result, far = textio.run_universe(decl)
            target = far if decl.cof == "top" else kan.line_endpoint(
                kan.relabelled_line(decl.elements, decl.relabel, decl.level), 0 if decl.direction == "0to1" else 1)
            labels = carrier_labels(result)
            strict = labels == carrier_labels(target)
            shown = textio.format_term(textio.ElementSet(tuple(labels)))
            results.append(f"RESULT line {decl.line}: {shown}")
            lines.append(CheckLine.of(f"universe.line{decl.line}", Status.PASS if strict else Status.FAIL,
                                      result=shown))
            continue
        problem, built = textio.build_problem(doc, decl)
        result = kan.comp(built.fib, problem)
        ok = result in kan.admissible(problem)
        shown = textio.show(built, result, problem.c, problem.end)
        results.append(f"RESULT line {decl.line}: {shown}")
        kind = doc.families()[decl.family].kind
        lines.append(CheckLine.of(f"comp.{decl.family}.line{decl.line}", Status.PASS if ok else Status.FAIL,
                                  solver=kind, result=shown))
    return lines, results


def _discrete_pair(T: psh.TruncPresheaf, size: int, shift: int) -> tuple:
    A = psh.constant_family(T, [f"a{k}" for k in range(size)], name="A")
    B = psh.constant_family(T, [f"b{k}" for k in range(size)], name="B")
    table = {f"a{k}": f"b{(k + shift) % size}" for k in range(size)}
    undo = {v: k for k, v in table.items()}
    return A, B, (lambda x, c, g: table[x]), (lambda y, c, g: undo[y])


def _codiscrete_pair(Gamma: psh.TruncPresheaf, size: int, shift: int) -> tuple:
    """∇ of two relabelled finite sets, with the vertexwise relabelling between them."""
    A = psh.codiscrete(Gamma, lambda gamma: [f"a{k}" for k in range(size)], name="∇A")
    B = psh.codiscrete(Gamma, lambda gamma: [f"b{k}" for k in range(size)], name="∇B")
    table = {f"a{k}": f"b{(k + shift) % size}" for k in range(size)}
    undo = {v: k for k, v in table.items()}
    return A, B, (lambda x, c, g: tuple(table[v] for v in x)), (lambda y, c, g: tuple(undo[v] for v in y))


def _glue_data(phi: psh.CofFamily, A, B, forward, backward, fib=kan.discrete_fib) -> kan.GlueData:
    alpha_B = fib(B)
    return kan.GlueData(phi, fib(A), alpha_B, forward, kan.iso_equiv(forward, backward, alpha_B))


def glue_preservation(variant: Variant, instances: int, seed: int) -> CheckLine:
    """
    Glue composition over a total cofibration, read through the iso, is
    composition in A. A and B are codiscrete over the interval and every
    tube is cut from a random glued path, so the composite moves.
    """
    rng = np.random.default_rng(seed)
    I = psh.interval(GLUE_LEVEL, variant)
    level = GLUE_LEVEL - 2
    sieves = psh.enumerate_sieves(0, level - 1, variant)
    failures, checked, moved = [], 0, 0
    for _ in range(instances):
        size, shift, e = int(rng.integers(2, 4)), int(rng.integers(3)), int(rng.integers(2))
        A, B, forward, backward = _codiscrete_pair(I, size, shift)
        G = _glue_data(psh.constant_cof(I, True, level), A, B, forward, backward, fib=kan.nabla_fib)
        glue, iso = kan.glue_type(G), kan.glue_iso(G)
        paths = I.carrier(1)
        path = paths[int(rng.integers(len(paths)))]
        above = A.fiber(1, path)
        y = iso.backward(above[int(rng.integers(len(above)))], 1, path)
        sieve = sieves[int(rng.integers(len(sieves)))]
        partial = {s: glue.act(y, path, cube.lift(s)) for s in sieve.members}
        P = kan.make_problem(glue, 0, path, e, sieve, partial, glue.act(y, path, cube.face(0, e, variant)))
        via_glue = iso.forward(kan.comp(kan.glue_fib(G), P), 0, P.end)
        in_A = kan.comp(G.alpha_A, kan.map_problem(P, iso.forward, A))
        if via_glue != in_A:
            failures.append(f"size {size}, e={e}: {via_glue} != {in_A}")
        moved += via_glue != iso.forward(P.base, 0, P.start)
        checked += 1
    status = Status.FAIL if failures else Status.PASS
    return CheckLine.of("glue.preserves_comp", status, instances=checked, moved=moved,
                        **({"first": failures[0]} if failures else {}))


def sglue_strictness(variant: Variant, instances: int, seed: int) -> CheckLine:
    """Over the interval: SGlue is A where the cofibration holds and isomorphic to Glue everywhere."""
    rng = np.random.default_rng(seed)
    I = psh.interval(GLUE_LEVEL, variant)
    level = GLUE_LEVEL - 2
    failures, checked = [], 0
    for _ in range(instances):
        size, shift, e = int(rng.integers(1, 4)), int(rng.integers(3)), int(rng.integers(2))
        A, B, forward, backward = _discrete_pair(I, size, shift)
        phi = psh.interval_endpoint_cof(I, e, level)
        G = _glue_data(phi, A, B, forward, backward)
        D, g = kan.sglue(G)
        for c in range(level + 1):
            for gamma in I.carrier(c):
                if phi.holds(c, gamma) and set(D.fiber(c, gamma)) != set(A.fiber(c, gamma)):
                    failures.append(f"carrier differs from A at {gamma}")
        verdict = psh.check_iso(g)
        failures.extend(verdict.failures)
        checked += 1
    status = Status.FAIL if failures else Status.PASS
    return CheckLine.of("sglue.strict", status, instances=checked, **({"first": failures[0]} if failures else {}))


def universe_strictness(variant: Variant, instances: int, seed: int) -> CheckLine:
    rng = np.random.default_rng(seed)
    failures, checked = [], 0
    for _ in range(instances):
        size, shift, e = int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(2))
        holds = bool(rng.integers(2))
        elements = [f"s{k}" for k in range(size)]
        relabel = {x: f"t{(k + shift) % size}" for k, x in enumerate(elements)}
        line = kan.relabelled_line(elements, relabel, GLUE_LEVEL, variant)
        near, far = kan.line_endpoint(line, e), kan.line_endpoint(line, 1 - e)
        result = kan.universe_comp(e, holds, line if holds else None, near)
        target = far if holds else near
        if carrier_labels(result) != carrier_labels(target):
            failures.append(f"size {size}, e={e}, holds={holds}")
        checked += 1
    status = Status.FAIL if failures else Status.PASS
    return CheckLine.of("universe.strict", status, instances=checked, **({"first": failures[0]} if failures else {}))


def cmd_glue_demo(config: RunConfig, instances: int = 100) -> list[CheckLine]:
    if config.level < GLUE_LEVEL:
        return [CheckLine.of("glue.demo", Status.INCONCLUSIVE, needs_level=GLUE_LEVEL)]
    return [
        glue_preservation(config.variant, instances, config.seed),
        sglue_strictness(config.variant, instances, config.seed),
        universe_strictness(config.variant, max(instances // 4, 1), config.seed),
    ]


def cmd_counterexample(config: RunConfig, check_sections: bool = True, inject=()) -> resizing.ResizingReport:
    return resizing.run_pipeline(
        size_bound=config.tracker_size,
        n_bound=config.n_bound,
        budget=config.budget,
        variant=config.variant,
        seed=config.seed,
        check_sections=check_sections and config.tracker_size > 0,
        inject=inject,
    )


def cmd_report(config: RunConfig) -> tuple[list[CheckLine], str]:
    """Every suite in one pass: the CHECK lines and a readable report."""
    from data.calculations import load_samples

    lines = cmd_axioms(config)
    sections = ["== axioms ==", *(line.render() for line in lines), ""]

    counts = []
    for m, n in ((0, 1), (1, 1), (1, 2)):
        _, k = cmd_homs(m, n, config.variant)
        counts.append(f"count {config.variant.value}({m}, {n}) = {k}")
    sections += ["== hom-sets ==", *counts, ""]

    sections.append("== composition samples ==")
    for name, text in load_samples().items():
        comp_lines, results = cmd_comp(text)
        lines += comp_lines
        sections += [f"{name}:", *(f"  {r}" for r in results), *(f"  {line.render()}" for line in comp_lines)]
    sections.append("")

    glue_lines = cmd_glue_demo(config)
    lines += glue_lines
    sections += ["== glue ==", *(line.render() for line in glue_lines), ""]

    report = cmd_counterexample(config)
    lines += report.check_lines()
    sections.append(report.render())
    return lines, "\n".join(sections)


# ============================================================================
# ENTRY POINTS
# ============================================================================

def run_axioms(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    mu0 = cube.corrupt(cube.mu(0, config.variant), args.corrupt_min) if args.corrupt_min is not None else None
    lines = cmd_axioms(config, mu0=mu0)
    emit(lines, config)
    return exit_status(lines)


def run_homs(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    listing, count = cmd_homs(args.m, args.n, config.variant)
    if config.json:
        print(json.dumps({"variant": config.variant.value, "m": args.m, "n": args.n,
                          "count": count, "homs": listing[:-1]}, indent=2))
    else:
        print("\n".join(listing))
    return 0


def run_comp(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    path = Path(args.file)
    lines, results = cmd_comp(path.read_text(encoding="utf-8"))
    emit(lines, config, results)
    return exit_status(lines)


def run_glue_demo(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    lines = cmd_glue_demo(config, args.instances)
    emit(lines, config)
    return exit_status(lines)


def run_counterexample(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    inject = [pca.parse_code(text) for text in args.inject]
    report = cmd_counterexample(config, check_sections=not args.skip_sections, inject=inject)
    lines = report.check_lines()
    if config.json:
        emit(lines, config)
    else:
        print(report.render(), end="")
        for line in lines:
            print(line.render())
    return exit_status(lines)


def run_report(args: argparse.Namespace) -> int:
    from data.calculations import checks_frame, write_report

    config = RunConfig.from_args(args)
    lines, text = cmd_report(config)
    if config.out:
        text_path, csv_path = write_report(text, checks_frame(lines), Path(config.out))
        logger.info("report written to %s and %s", text_path, csv_path)
    if config.json:
        emit(lines, config)
    else:
        print(text)
    return exit_status(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--level", type=int, default=DEFAULT_LEVEL_BOUND, help="level bound L")
    common.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.B_ORD.value)
    common.add_argument("--tracker-size", type=int, default=TRACKER_SIZE_BOUND,
                        help="largest code searched for trackers and sections (0 skips sections)")
    common.add_argument("--budget", type=int, default=STEP_BUDGET, help="reduction steps per application")
    common.add_argument("--n-bound", type=int, default=N_BOUND, help="refutation window 0..N")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", default=None, help="write the report here (report only)")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="store_true")

    ap = argparse.ArgumentParser(prog="cubench", description="Bounded checks for cubical assemblies.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("axioms", parents=[common], help="check the ten cofibration and interval axioms")
    p.add_argument("--corrupt-min", type=int, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=run_axioms)

    p = sub.add_parser("homs", parents=[common], help="list the morphisms m -> n")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=run_homs)

    p = sub.add_parser("comp", parents=[common], help="solve the composition problems in a file")
    p.add_argument("file")
    p.set_defaults(func=run_comp)

    p = sub.add_parser("glue-demo", parents=[common], help="glue, strict glue and universe composition")
    p.add_argument("--instances", type=int, default=100)
    p.set_defaults(func=run_glue_demo)

    p = sub.add_parser("counterexample", parents=[common], help="the propositional resizing counterexample")
    p.add_argument("--skip-sections", action="store_true")
    p.add_argument("--inject", action="append", default=[], metavar="CODE",
                   help="extra candidate section, e.g. '(K 20)'")
    p.set_defaults(func=run_counterexample)

    p = sub.add_parser("report", parents=[common], help="run every suite")
    p.set_defaults(func=run_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    log.configure(-1 if args.quiet else args.verbose)
    try:
        return args.func(args)
    except (CubenchError, ValueError, OSError) as exc:
        logger.debug("aborted", exc_info=True)
        print(f"cubench: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
