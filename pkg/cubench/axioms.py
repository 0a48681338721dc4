"""
The ten cofibration and interval axioms, checked on the truncated model.

Cofibrations are decidable sieves, so every axiom is a finite check: the
interval axioms by table equality, the closure axioms by building the sieve
and testing the sieve condition, and isomorphism extension by constructing
the extension over the interval for each kind of cofibration.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

from config.constants import DEFAULT_LEVEL_BOUND
from cubench import cube, psh
from cubench.cube import CubeMor, Variant
from cubench.errors import CapExceededError
from cubench.verdict import CheckLine, Status

logger = logging.getLogger(__name__)

# sieve enumeration stops at this object and level
SIEVE_DIM = 2
# B has (2^n)^(2^m) maps m -> n, so its endpoint checks stop at this level
B_REACH = 2


@dataclass(frozen=True)
class AxiomSettings:
    level: int = DEFAULT_LEVEL_BOUND
    variant: Variant = Variant.B_ORD
    mu0: CubeMor | None = None
    mu1: CubeMor | None = None


def _line(name: str, failures: list[str], **details) -> CheckLine:
    status = Status.FAIL if failures else Status.PASS
    if failures:
        details["first"] = failures[0]
        logger.warning("%s failed: %s", name, failures[0])
    return CheckLine.of(name, status, **details)


def _small_sieves(variant: Variant, top: int):
    """(c, level, sieves) for every object and level the enumeration cap allows."""
    for c in range(min(top, SIEVE_DIM) + 1):
        for level in range(min(top, SIEVE_DIM) + 1):
            try:
                yield c, level, psh.enumerate_sieves(c, level, variant)
            except CapExceededError:
                continue


def ax_distinct_endpoints(s: AxiomSettings) -> CheckLine:
    failures = []
    for c in range(s.level + 1):
        bang = cube.bang(c, s.variant)
        if cube.equal(cube.compose(cube.delta(0, s.variant), bang), cube.compose(cube.delta(1, s.variant), bang)):
            failures.append(f"d0 . ! = d1 . ! at {c}")
    return _line("ax1.distinct_endpoints", failures, objects=s.level + 1)


def _connection(s: AxiomSettings, e: int, name: str) -> CheckLine:
    label = "min" if e == 0 else "max"
    equations = [eq for eq in cube.connection_equations(s.variant, s.mu0, s.mu1) if eq[0].startswith(label)]
    failures = [text for text, lhs, rhs in equations if not cube.equal(lhs, rhs)]
    return _line(name, failures, equations=len(equations))


def ax_meet(s: AxiomSettings) -> CheckLine:
    return _connection(s, 0, "ax2.connection_min")


def ax_join(s: AxiomSettings) -> CheckLine:
    return _connection(s, 1, "ax3.connection_max")


def _endpoint_cof(s: AxiomSettings, e: int, name: str) -> CheckLine:
    reach = s.level if s.variant is Variant.B_ORD else min(s.level, B_REACH)
    failures, checked = [], 0
    for c in range(reach + 1):
        for i in cube.enumerate_homs(c, 1, s.variant):
            phi = psh.cof_eq_interval(i, e, reach)
            if psh.sieve_violation(c, reach, phi.members, s.variant) is not None:
                failures.append(f"(i = {e}) is not a sieve at {i}")
            for sigma in cube.homs_into(c, reach, s.variant):
                constant = cube.compose(cube.delta(e, s.variant), cube.bang(sigma.src, s.variant))
                if (sigma in phi) != cube.equal(cube.compose(i, sigma), constant):
                    failures.append(f"(i = {e}) decides {sigma} wrongly at {i}")
            checked += 1
    return _line(name, failures, points=checked)


def ax_eq_zero(s: AxiomSettings) -> CheckLine:
    return _endpoint_cof(s, 0, "ax4.eq_zero")


def ax_eq_one(s: AxiomSettings) -> CheckLine:
    return _endpoint_cof(s, 1, "ax5.eq_one")


def _binary(s: AxiomSettings, name: str, op: Callable, expected: Callable) -> CheckLine:
    failures, pairs = [], 0
    for c, level, sieves in _small_sieves(s.variant, s.level):
        for phi in sieves:
            for psi in sieves:
                out = op(phi, psi)
                if psh.sieve_violation(c, level, out.members, s.variant) is not None:
                    failures.append(f"not a sieve on {c}")
                if out.members != expected(phi.members, psi.members):
                    failures.append(f"wrong members on {c}")
                pairs += 1
    return _line(name, failures, pairs=pairs)


def ax_or(s: AxiomSettings) -> CheckLine:
    return _binary(s, "ax6.or", psh.cof_or, lambda a, b: a | b)


def ax_sigma(s: AxiomSettings) -> CheckLine:
    return _binary(s, "ax7.sigma", psh.cof_sigma, lambda a, b: a & b)


def ax_forall(s: AxiomSettings) -> CheckLine:
    failures, checked = [], 0
    for c, level, sieves in _small_sieves(s.variant, s.level):
        if c < 1 or level < 1:
            continue
        for phi in sieves:
            out = psh.cof_forall_interval(phi)
            if psh.sieve_violation(c - 1, level - 1, out.members, s.variant) is not None:
                failures.append(f"forall is not a sieve on {c - 1}")
            for sigma in cube.homs_into(c - 1, level - 1, s.variant):
                if (sigma in out) != (cube.lift(sigma) in phi):
                    failures.append(f"forall decides {sigma} wrongly")
            checked += 1
    return _line("ax8.forall", failures, sieves=checked)


def ax_extensionality(s: AxiomSettings) -> CheckLine:
    failures, pairs = [], 0
    for c, level, sieves in _small_sieves(s.variant, s.level):
        homs = cube.homs_into(c, level, s.variant)
        for phi in sieves:
            for psi in sieves:
                same_decisions = all((sigma in phi) == (sigma in psi) for sigma in homs)
                if same_decisions != (phi == psi):
                    failures.append(f"equal decisions but different values on {c}")
                pairs += 1
    return _line("ax9.extensionality", failures, pairs=pairs)


def ax_iso_extension(s: AxiomSettings) -> CheckLine:
    level = min(s.level, SIEVE_DIM)
    I = psh.interval(level, s.variant)
    A = psh.constant_family(I, ("a", "b"), name="A")
    B = psh.constant_family(I, ("x", "y"), name="B")
    table = {"a": "x", "b": "y"}
    undo = {v: k for k, v in table.items()}
    f = psh.FamilyIso(A, B, lambda x, c, g: table[x], lambda y, c, g: undo[y])
    cases = {
        "top": psh.constant_cof(I, True, level),
        "bot": psh.constant_cof(I, False, level),
        "i=0": psh.interval_endpoint_cof(I, 0, level),
        "i=1": psh.interval_endpoint_cof(I, 1, level),
    }
    failures = []
    for label, phi in cases.items():
        D, g = psh.lift_iea(phi, A, B, f)
        for c in range(level + 1):
            for gamma in I.carrier(c):
                if not phi.holds(c, gamma):
                    continue
                if D.fiber(c, gamma) != A.fiber(c, gamma):
                    failures.append(f"{label}: carrier differs from A at {gamma}")
                if any(g.forward(x, c, gamma) != f.forward(x, c, gamma) for x in A.fiber(c, gamma)):
                    failures.append(f"{label}: iso differs from f at {gamma}")
        for verdict in (psh.check_family(D), psh.check_iso(g)):
            failures.extend(f"{label}: {failure}" for failure in verdict.failures)
    return _line("ax10.iso_extension", failures, cases=len(cases))


AXIOMS = (
    ax_distinct_endpoints,
    ax_meet,
    ax_join,
    ax_eq_zero,
    ax_eq_one,
    ax_or,
    ax_sigma,
    ax_forall,
    ax_extensionality,
    ax_iso_extension,
)


def run_axioms(settings: AxiomSettings | None = None) -> list[CheckLine]:
    settings = settings or AxiomSettings()
    lines = []
    for check in AXIOMS:
        lines.append(check(settings))
        logger.debug("%s", lines[-1].render())
    return lines
