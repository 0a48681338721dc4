"""
Step-budgeted combinatory evaluator.

Codes are finite term trees over the constants S, K, PAIR, FST, SND, SUCC,
PRED, IFZ and numeral literals, joined by binary application. Evaluation is
normal order, small step, and every contraction costs one unit of budget.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

from config.constants import LITERAL_BOUND, STEP_BUDGET
from cubench.errors import ParseError

logger = logging.getLogger(__name__)


class Op(Enum):
    S = "S"
    K = "K"
    PAIR = "PAIR"
    FST = "FST"
    SND = "SND"
    SUCC = "SUCC"
    PRED = "PRED"
    IFZ = "IFZ"


# number of arguments a constant consumes when it fires
ARITY = {
    Op.S: 3,
    Op.K: 2,
    Op.PAIR: 2,
    Op.FST: 1,
    Op.SND: 1,
    Op.SUCC: 1,
    Op.PRED: 1,
    Op.IFZ: 3,
}


@dataclass(frozen=True)
class Prim:
    op: Op

    def __str__(self) -> str:
        return self.op.value


@dataclass(frozen=True)
class Num:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class App:
    fun: "Code"
    arg: "Code"

    def __str__(self) -> str:
        return format_code(self)


Code = Union[Prim, Num, App]

S = Prim(Op.S)
K = Prim(Op.K)
PAIR = Prim(Op.PAIR)
FST = Prim(Op.FST)
SND = Prim(Op.SND)
SUCC = Prim(Op.SUCC)
PRED = Prim(Op.PRED)
IFZ = Prim(Op.IFZ)


@dataclass(frozen=True)
class Value:
    code: Code


@dataclass(frozen=True)
class Diverged:
    budget: int


@dataclass(frozen=True)
class Stuck:
    reason: str


EvalResult = Union[Value, Diverged, Stuck]


# ============================================================================
# CONSTRUCTION HELPERS
# ============================================================================

def app(*parts: Code) -> Code:
    """Left-associated application of two or more codes."""
    head = parts[0]
    for part in parts[1:]:
        head = App(head, part)
    return head


def numeral(n: int) -> Num:
    if n < 0:
        raise ValueError(f"numerals are natural numbers, got {n}")
    return Num(n)


def decode(code: Code) -> int | None:
    if isinstance(code, Num):
        return code.value
    return None


def identity_code() -> Code:
    return app(S, K, K)


def constant_code(n: int) -> Code:
    return App(K, numeral(n))


def code_size(code: Code) -> int:
    """Number of leaves of the term tree."""
    size = 0
    stack = [code]
    while stack:
        node = stack.pop()
        if isinstance(node, App):
            stack.append(node.fun)
            stack.append(node.arg)
        else:
            size += 1
    return size


def _spine(code: Code) -> tuple[Code, list[Code]]:
    args = []
    while isinstance(code, App):
        args.append(code.arg)
        code = code.fun
    args.reverse()
    return code, args


# ============================================================================
# EVALUATION
# ============================================================================

class _OutOfFuel(Exception):
    pass


class _StuckTerm(Exception):
    pass


class _Machine:
    def __init__(self, budget: int) -> None:
        self.fuel = budget

    def _tick(self) -> None:
        if self.fuel <= 0:
            raise _OutOfFuel
        self.fuel -= 1

    def _number(self, code: Code, op: Op) -> int:
        value = self.whnf(code)
        if not isinstance(value, Num):
            raise _StuckTerm(f"{op.value} expects a numeral, got {format_code(value)}")
        return value.value

    def whnf(self, code: Code) -> Code:
        head, args = _spine(code)
        while True:
            if isinstance(head, App):
                head, more = _spine(head)
                args = more + args
                continue
            if isinstance(head, Num):
                if args:
                    raise _StuckTerm(f"numeral {head.value} applied to an argument")
                return head
            op = head.op
            if op is Op.PAIR:
                if len(args) > 2:
                    raise _StuckTerm("pair applied to an argument")
                return app(head, *args) if args else head
            if len(args) < ARITY[op]:
                return app(head, *args) if args else head
            self._tick()
            if op is Op.K:
                head, args = args[0], args[2:]
            elif op is Op.S:
                f, g, x = args[:3]
                head, args = f, [x, App(g, x)] + args[3:]
            elif op in (Op.FST, Op.SND):
                pair_head, pair_args = _spine(self.whnf(args[0]))
                if pair_head != PAIR or len(pair_args) != 2:
                    raise _StuckTerm(f"{op.value} of a non-pair")
                head = pair_args[0] if op is Op.FST else pair_args[1]
                args = args[1:]
            elif op is Op.SUCC:
                head, args = Num(self._number(args[0], op) + 1), args[1:]
            elif op is Op.PRED:
                head, args = Num(max(self._number(args[0], op) - 1, 0)), args[1:]
            else:
                branch = args[1] if self._number(args[0], op) == 0 else args[2]
                head, args = branch, args[3:]

    def normalize(self, code: Code) -> Code:
        head, args = _spine(self.whnf(code))
        if not args:
            return head
        return app(head, *[self.normalize(arg) for arg in args])


def evaluate(code: Code, budget: int = STEP_BUDGET) -> EvalResult:
    if budget < 1:
        raise ValueError(f"budget must be at least 1, got {budget}")
    machine = _Machine(budget)
    try:
        return Value(machine.normalize(code))
    except _OutOfFuel:
        return Diverged(budget)
    except _StuckTerm as exc:
        return Stuck(str(exc))
    except RecursionError:
        # terms deeper than the interpreter stack count as exhausted budget
        return Diverged(budget)


def apply(f: Code, a: Code, budget: int = STEP_BUDGET) -> EvalResult:
    return evaluate(App(f, a), budget)


def apply_to_number(f: Code, n: int, budget: int = STEP_BUDGET) -> EvalResult:
    return apply(f, numeral(n), budget)


def result_number(result: EvalResult) -> int | None:
    if isinstance(result, Value):
        return decode(result.code)
    return None


# ============================================================================
# ENUMERATION
# ============================================================================

def leaves(literal_bound: int = LITERAL_BOUND) -> list[Code]:
    return [Prim(op) for op in Op] + [Num(n) for n in range(literal_bound + 1)]


def count_codes(max_size: int, literal_bound: int = LITERAL_BOUND) -> int:
    per_size = _counts(max_size, literal_bound)
    return sum(per_size[1:])


def _counts(max_size: int, literal_bound: int) -> list[int]:
    counts = [0, len(leaves(literal_bound))]
    for size in range(2, max_size + 1):
        counts.append(sum(counts[k] * counts[size - k] for k in range(1, size)))
    return counts[: max_size + 1]


def enumerate_codes(max_size: int, literal_bound: int = LITERAL_BOUND) -> Iterator[Code]:
    """Every code with at most max_size leaves, by size, then split, then parts."""
    if max_size < 1:
        raise ValueError(f"max_size must be at least 1, got {max_size}")
    by_size: list[list[Code]] = [[], leaves(literal_bound)]
    yield from by_size[1]
    for size in range(2, max_size + 1):
        current: list[Code] = []
        for k in range(1, size):
            for fun in by_size[k]:
                for arg in by_size[size - k]:
                    code = App(fun, arg)
                    current.append(code)
                    yield code
        by_size.append(current)


def index_of_code(code: Code, literal_bound: int = LITERAL_BOUND) -> int | None:
    """Position of code in enumerate_codes order, or None if never enumerated."""
    size = code_size(code)
    counts = _counts(size, literal_bound)
    within = _index_within(code, size, counts, literal_bound)
    if within is None:
        return None
    return sum(counts[1:size]) + within


def _index_within(code: Code, size: int, counts: list[int], literal_bound: int) -> int | None:
    if not isinstance(code, App):
        pool = leaves(literal_bound)
        return pool.index(code) if code in pool else None
    k = code_size(code.fun)
    fun_index = _index_within(code.fun, k, counts, literal_bound)
    arg_index = _index_within(code.arg, size - k, counts, literal_bound)
    if fun_index is None or arg_index is None:
        return None
    offset = sum(counts[j] * counts[size - j] for j in range(1, k))
    return offset + fun_index * counts[size - k] + arg_index


# ============================================================================
# TEXT FORM
# ============================================================================

def format_code(code: Code) -> str:
    if not isinstance(code, App):
        return str(code)
    head, args = _spine(code)
    parts = [format_code(head)]
    for arg in args:
        parts.append(format_code(arg))
    return "(" + " ".join(parts) + ")"


_TOKEN = re.compile(r"\s*(?:(\()|(\))|([A-Z]+)|(\d+))")


def parse_code(text: str) -> Code:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        tokens.append((match.lastindex, match.group(match.lastindex), match.start(match.lastindex)))
        pos = match.end()
    if not tokens:
        raise ParseError("empty code", 1, 1)
    code, used = _parse_tokens(tokens, 0)
    if used != len(tokens):
        raise ParseError("trailing input after code", 1, tokens[used][2] + 1)
    return code


def _parse_tokens(tokens, index):
    kind, text, column = tokens[index]
    if kind == 3:
        try:
            return Prim(Op(text)), index + 1
        except ValueError:
            raise ParseError(f"unknown constant {text}", 1, column + 1) from None
    if kind == 4:
        return Num(int(text)), index + 1
    if kind == 2:
        raise ParseError("unbalanced ')'", 1, column + 1)
    parts = []
    index += 1
    while index < len(tokens) and tokens[index][0] != 2:
        part, index = _parse_tokens(tokens, index)
        parts.append(part)
    if index >= len(tokens):
        raise ParseError("missing ')'", 1, column + 1)
    if len(parts) < 2:
        raise ParseError("an application needs at least two parts", 1, column + 1)
    return app(*parts), index + 1
