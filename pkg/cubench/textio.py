"""
Text formats for cubesets, composition problems and finite assemblies.

A problem file starts with an explicit cubeset (objects up to its level and
the action of every non-identity morphism that moves an element), then
declares families, sieves and problems, one per line:

    cubeset T variant=B_ord level=2
    object 0 { * }
    object 1 { * }
    object 2 { * }
    end
    family N nabla { a b }
    sieve left at 1 level 1 { mor B_ord 0->1 [*↦0]:1 mor B_ord 1->1 [0↦0 1↦0]:1 }
    comp family=N stage=1 path=* dir=0to1 sieve=left partial={...} base=(a b)

Elements are written as atoms, tuples (x y), maps {k↦v}, morphisms and glue
pairs [a|b]; each family kind says how its elements look in text, and a
parsed element is found by searching the fiber for the one that looks like
it. Lines starting with # are skipped. Printing a parsed file gives the file
back when it is written in the canonical spacing used here.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Hashable

from cubench import asm, cube, kan, psh
from cubench.cube import CubeMor, Variant
from cubench.errors import NotASieveError, ParseError

logger = logging.getLogger(__name__)

_ATOM = re.compile(r"[A-Za-z0-9_*'.+\-]+")
MAPS_TO = "↦"


# ============================================================================
# TERMS
# ============================================================================

@dataclass(frozen=True)
class GlueTerm:
    """[a|b]: the A-part at the identity (absent off the cofibration) and the B-part."""

    a: Hashable | None
    b: Hashable


@dataclass(frozen=True)
class ElementSet:
    """{ a b c }: an unordered list of atoms, kept in written order."""

    items: tuple


class Cursor:
    def __init__(self, text: str, line: int = 0, column: int = 0) -> None:
        self.text = text
        self.pos = 0
        self.line = line
        self.column = column

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.column + self.pos + 1)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def done(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, token: str) -> bool:
        self.skip()
        return self.text.startswith(token, self.pos)

    def expect(self, token: str) -> None:
        if not self.peek(token):
            found = self.text[self.pos:self.pos + 12] or "end of line"
            raise self.error(f"expected {token!r}, found {found!r}")
        self.pos += len(token)

    def word(self) -> str:
        self.skip()
        match = _ATOM.match(self.text, self.pos)
        if not match:
            raise self.error(f"expected a name at {self.text[self.pos:self.pos + 12]!r}")
        self.pos = match.end()
        return match.group(0)

    def keyword(self, key: str) -> None:
        self.expect(key)
        self.expect("=")

    def mor(self) -> CubeMor:
        self.skip()
        start = self.pos
        close = self.text.find("]", start)
        if close < 0:
            raise self.error("unterminated morphism table")
        self.pos = close + 1
        return cube.parse_mor(self.text[start:self.pos], self.line)

    def term(self):
        self.skip()
        if self.peek("mor "):
            return self.mor()
        if self.peek("("):
            self.expect("(")
            items = []
            while not self.peek(")"):
                if self.done():
                    raise self.error("unterminated tuple")
                items.append(self.term())
            self.expect(")")
            return tuple(items)
        if self.peek("["):
            self.expect("[")
            a = None if self.peek("|") else self.term()
            self.expect("|")
            b = self.term()
            self.expect("]")
            return GlueTerm(a, b)
        if self.peek("{"):
            return self.braces()
        return self.word()

    def braces(self):
        self.expect("{")
        if self.peek("}"):
            self.expect("}")
            return {}
        items, mapping = [], {}
        while not self.peek("}"):
            if self.done():
                raise self.error("unterminated braces")
            key = self.term()
            if self.peek(MAPS_TO):
                if items:
                    raise self.error("cannot mix list entries and map entries")
                self.expect(MAPS_TO)
                mapping[key] = self.term()
            else:
                if mapping:
                    raise self.error("cannot mix list entries and map entries")
                items.append(key)
        self.expect("}")
        return mapping if mapping else ElementSet(tuple(items))


def format_term(term) -> str:
    if isinstance(term, CubeMor):
        return cube.format_mor(term)
    if isinstance(term, tuple):
        return "(" + " ".join(format_term(t) for t in term) + ")"
    if isinstance(term, GlueTerm):
        a = "" if term.a is None else format_term(term.a)
        return f"[{a}|{format_term(term.b)}]"
    if isinstance(term, ElementSet):
        return "{ " + " ".join(format_term(t) for t in term.items) + " }"
    if isinstance(term, dict):
        return "{" + " ".join(f"{format_term(k)}{MAPS_TO}{format_term(v)}" for k, v in term.items()) + "}"
    return str(term)


def parse_term(text: str, line: int = 0):
    cursor = Cursor(text, line)
    term = cursor.term()
    if not cursor.done():
        raise cursor.error("trailing text after element")
    return term


# ============================================================================
# CUBESETS
# ============================================================================

@dataclass
class CubesetSpec:
    name: str
    variant: Variant
    level: int
    objects: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)

    def presheaf(self) -> psh.TruncPresheaf:
        objects, actions = self.objects, self.actions

        def act(x, sigma):
            table = actions.get(sigma)
            return x if table is None else table[x]

        return psh.TruncPresheaf(self.level, lambda n: objects[n], act, self.variant, self.name)

    def lines(self) -> list[str]:
        out = [f"cubeset {self.name} variant={self.variant.value} level={self.level}"]
        out += [f"object {n} " + format_term(ElementSet(tuple(items))) for n, items in self.objects.items()]
        out += [f"action {cube.format_mor(mor)} {format_term(table)}" for mor, table in self.actions.items()]
        out.append("end")
        return out


def _check_cubeset(spec: CubesetSpec, line: int) -> psh.TruncPresheaf:
    missing = [n for n in range(spec.level + 1) if n not in spec.objects]
    if missing:
        raise ParseError(f"cubeset {spec.name} has no object {missing[0]}", line, 1)
    for mor, table in spec.actions.items():
        if mor.dst > spec.level or mor.src > spec.level:
            raise ParseError(f"action {cube.format_mor(mor)} is above level {spec.level}", line, 1)
        if set(table) != set(spec.objects[mor.dst]):
            raise ParseError(f"action {cube.format_mor(mor)} must be given on every element of object {mor.dst}",
                             line, 1)
        stray = [y for y in table.values() if y not in spec.objects[mor.src]]
        if stray:
            raise ParseError(f"action {cube.format_mor(mor)} lands outside object {mor.src}: {stray[0]}", line, 1)
    P = spec.presheaf()
    for n in range(spec.level + 1):
        for m in range(spec.level + 1):
            for sigma in cube.enumerate_homs(m, n, spec.variant):
                if sigma not in spec.actions and any(x not in P.carrier(m) for x in P.carrier(n)):
                    raise ParseError(f"no action given for {cube.format_mor(sigma)}", line, 1)
    verdict = psh.check_presheaf(P)
    if not verdict.ok:
        raise ParseError(f"cubeset {spec.name} is not functorial: {verdict.failures[0]}", line, 1)
    return P


# ============================================================================
# FAMILY KINDS
# ============================================================================

@dataclass(eq=False)
class BuiltFamily:
    family: psh.Family
    fib: kan.FibStructure
    view: Callable[[Hashable, int, Hashable], object]


def _atoms(term, cursor: Cursor) -> tuple:
    if isinstance(term, dict) and not term:
        return ()
    if not isinstance(term, ElementSet):
        raise cursor.error("expected an element list { a b ... }")
    return term.items


def _require_constant(Gamma: psh.TruncPresheaf, kind: str, line: int) -> None:
    first = set(Gamma.carrier(0))
    for n in range(Gamma.level + 1):
        if set(Gamma.carrier(n)) != first:
            raise ParseError(f"{kind} families need a context that acts trivially", line, 1)
    for n in range(Gamma.level + 1):
        for m in range(Gamma.level + 1):
            for s in cube.enumerate_homs(m, n, Gamma.variant):
                if any(Gamma.act(g, s) != g for g in Gamma.carrier(n)):
                    raise ParseError(f"{kind} families need a context that acts trivially", line, 1)


def _point_section(x) -> psh.Section:
    return lambda c, gamma: (x,) * (2 ** c)


def _as_is(x, c, gamma):
    return x


def build_family(kind: str, args: dict, Gamma: psh.TruncPresheaf, line: int) -> BuiltFamily:
    """Family, composition structure and text view for one declaration."""
    variant = Gamma.variant
    if kind == "discrete":
        A = psh.constant_family(Gamma, args["elements"], name="A")
        return BuiltFamily(A, kan.discrete_fib(A), _as_is)
    if kind in ("nabla", "path", "id"):
        _require_constant(Gamma, kind, line)
        values = args["elements"]
        A = psh.codiscrete(Gamma, lambda gamma: values)
        if kind == "nabla":
            return BuiltFamily(A, kan.nabla_fib(A), _as_is)
        ends = (args["from"], args["to"])
        for x in ends:
            if x not in values:
                raise ParseError(f"end-point {x} is not one of {values}", line, 1)
        a0, a1 = _point_section(ends[0]), _point_section(ends[1])
        if kind == "path":
            fib = kan.fib_path(kan.nabla_fib(A), a0, a1)
            return BuiltFamily(fib.family, fib, _as_is)
        fib = kan.fib_id(kan.nabla_fib(A), a0, a1)
        view = lambda pair, c, gamma: (pair[0], tuple(pair[1].sorted_members()))
        return BuiltFamily(fib.family, fib, view)
    if kind in ("sigma", "pi"):
        A = psh.constant_family(Gamma, args["elements"], name="A")
        B = psh.constant_family(psh.sigma(Gamma, A), args["second"], name="B")
        if kind == "sigma":
            fib = kan.fib_sigma(kan.discrete_fib(A), kan.discrete_fib(B))
            return BuiltFamily(fib.family, fib, _as_is)
        fib = kan.fib_pi(kan.discrete_fib(A), kan.discrete_fib(B))

        def view(F, c, gamma):
            ident = cube.identity(c, variant)
            return {a: psh.pi_apply(F, ident, a) for a in A.fiber(c, gamma)}

        return BuiltFamily(fib.family, fib, view)
    if kind == "glue":
        A = psh.constant_family(Gamma, args["elements"], name="A")
        B = psh.constant_family(Gamma, args["second"], name="B")
        table = args["f"]
        if sorted(table) != sorted(A.fiber(0, Gamma.carrier(0)[0])) or len(set(table.values())) != len(table):
            raise ParseError("glue map must be a bijection given on every element", line, 1)
        undo = {v: k for k, v in table.items()}
        forward = lambda x, c, gamma: table[x]
        backward = lambda y, c, gamma: undo[y]
        alpha_B = kan.discrete_fib(B)
        level = min(A.level, B.level) - 2
        phi = psh.constant_cof(Gamma, args["cof"] == "top", level)
        G = kan.GlueData(phi, kan.discrete_fib(A), alpha_B, forward,
                         kan.iso_equiv(forward, backward, alpha_B))
        fib = kan.glue_fib(G)

        def view(element, c, gamma):
            a, b = element
            return GlueTerm(dict(a).get(cube.identity(c, variant)), b)

        return BuiltFamily(fib.family, fib, view)
    raise ParseError(f"unknown family kind {kind!r}", line, 1)


def _family_args(kind: str, cursor: Cursor) -> dict:
    args: dict = {}
    if kind == "glue":
        cursor.keyword("cof")
        args["cof"] = cursor.word()
        if args["cof"] not in ("top", "bot"):
            raise cursor.error("glue cofibration must be top or bot")
    args["elements"] = _atoms(cursor.term(), cursor)
    if kind in ("sigma", "pi", "glue"):
        args["second"] = _atoms(cursor.term(), cursor)
    if kind in ("path", "id"):
        cursor.keyword("from")
        args["from"] = cursor.word()
        cursor.keyword("to")
        args["to"] = cursor.word()
    if kind == "glue":
        cursor.keyword("f")
        args["f"] = cursor.term()
    return args


def _format_family_args(kind: str, args: dict) -> str:
    parts = []
    if kind == "glue":
        parts.append(f"cof={args['cof']}")
    parts.append(format_term(ElementSet(args["elements"])))
    if "second" in args:
        parts.append(format_term(ElementSet(args["second"])))
    if kind in ("path", "id"):
        parts += [f"from={args['from']}", f"to={args['to']}"]
    if kind == "glue":
        parts.append(f"f={format_term(args['f'])}")
    return " ".join(parts)


# ============================================================================
# DECLARATIONS
# ============================================================================

@dataclass
class FamilyDecl:
    name: str
    kind: str
    args: dict
    line: int

    def text(self) -> str:
        return f"family {self.name} {self.kind} {_format_family_args(self.kind, self.args)}"


@dataclass
class SieveDecl:
    name: str
    c: int
    level: int
    shorthand: str | None
    table: tuple = ()
    line: int = 0

    def text(self) -> str:
        head = f"sieve {self.name} at {self.c} level {self.level}"
        if self.shorthand:
            return f"{head} {self.shorthand}"
        rows = " ".join(f"{cube.format_mor(m)}:{bit}" for m, bit in self.table)
        return f"{head} {{ {rows} }}"

    def cofibration(self, variant: Variant) -> psh.Cofibration:
        if self.shorthand == "top":
            return psh.cof_top(self.c, self.level, variant)
        if self.shorthand == "bot":
            return psh.cof_bot(self.c, self.level, variant)
        for m, _ in self.table:
            if m.dst != self.c or m.src > self.level or m.variant is not variant:
                raise ParseError(f"{cube.format_mor(m)} is not a morphism into {self.c} at level {self.level}",
                                 self.line, 1)
        members = [m for m, bit in self.table if bit == 1]
        try:
            return psh.make_cofibration(self.c, self.level, members, variant)
        except NotASieveError as exc:
            raise ParseError(f"sieve {self.name}: {exc}", self.line, 1) from None


@dataclass
class CompDecl:
    family: str
    stage: int
    path: str
    direction: str
    sieve: str
    partial: dict
    base: object
    line: int = 0

    @property
    def e(self) -> int:
        return 0 if self.direction == "0to1" else 1

    def text(self) -> str:
        return (f"comp family={self.family} stage={self.stage} path={self.path} dir={self.direction} "
                f"sieve={self.sieve} partial={format_term(self.partial)} base={format_term(self.base)}")


@dataclass
class UniverseDecl:
    direction: str
    cof: str
    elements: tuple
    relabel: dict
    level: int
    line: int = 0

    def text(self) -> str:
        return (f"universe dir={self.direction} cof={self.cof} elements={format_term(ElementSet(self.elements))} "
                f"relabel={format_term(self.relabel)} level={self.level}")


@dataclass
class Document:
    cubeset: CubesetSpec | None = None
    context: psh.TruncPresheaf | None = None
    decls: list = field(default_factory=list)

    def families(self) -> dict:
        return {d.name: d for d in self.decls if isinstance(d, FamilyDecl)}

    def sieves(self) -> dict:
        return {d.name: d for d in self.decls if isinstance(d, SieveDecl)}

    def problems(self) -> list:
        return [d for d in self.decls if isinstance(d, (CompDecl, UniverseDecl))]


def _direction(cursor: Cursor) -> str:
    word = cursor.word()
    if word not in ("0to1", "1to0"):
        raise cursor.error(f"direction must be 0to1 or 1to0, got {word!r}")
    return word


def _integer(cursor: Cursor) -> int:
    word = cursor.word()
    if not word.isdigit():
        raise cursor.error(f"expected a natural number, got {word!r}")
    return int(word)


def _parse_cubeset(lines: list[tuple[int, str]], start: int) -> tuple[CubesetSpec, int]:
    number, text = lines[start]
    cursor = Cursor(text, number)
    cursor.expect("cubeset")
    name = cursor.word()
    cursor.keyword("variant")
    variant_word = cursor.word()
    try:
        variant = Variant(variant_word)
    except ValueError:
        raise cursor.error(f"unknown variant {variant_word!r}") from None
    cursor.keyword("level")
    spec = CubesetSpec(name, variant, _integer(cursor))
    index = start + 1
    while index < len(lines):
        number, text = lines[index]
        cursor = Cursor(text, number)
        if cursor.peek("end"):
            _check_cubeset(spec, number)
            return spec, index + 1
        if cursor.peek("object"):
            cursor.expect("object")
            n = _integer(cursor)
            spec.objects[n] = list(_atoms(cursor.term(), cursor))
        elif cursor.peek("action"):
            cursor.expect("action")
            mor = cursor.mor()
            table = cursor.term()
            if not isinstance(table, dict):
                raise cursor.error("an action is a map {x↦y ...}")
            spec.actions[mor] = table
        else:
            raise cursor.error("expected object, action or end inside a cubeset")
        if not cursor.done():
            raise cursor.error("trailing text")
        index += 1
    raise ParseError(f"cubeset {spec.name} is missing its end line", lines[start][0], 1)


def _parse_decl(number: int, text: str):
    cursor = Cursor(text, number)
    head = cursor.word()
    if head == "family":
        name = cursor.word()
        kind = cursor.word()
        decl = FamilyDecl(name, kind, _family_args(kind, cursor), number)
    elif head == "sieve":
        name = cursor.word()
        cursor.expect("at")
        c = _integer(cursor)
        cursor.expect("level")
        level = _integer(cursor)
        if cursor.peek("{"):
            cursor.expect("{")
            table = []
            while not cursor.peek("}"):
                if cursor.done():
                    raise cursor.error("unterminated sieve table")
                mor = cursor.mor()
                cursor.expect(":")
                bit = cursor.word()
                if bit not in ("0", "1"):
                    raise cursor.error(f"sieve entries are 0 or 1, got {bit!r}")
                table.append((mor, int(bit)))
            cursor.expect("}")
            decl = SieveDecl(name, c, level, None, tuple(table), number)
        else:
            shorthand = cursor.word()
            if shorthand not in ("top", "bot"):
                raise cursor.error("a sieve is top, bot or a table { mor:0|1 ... }")
            decl = SieveDecl(name, c, level, shorthand, (), number)
    elif head == "comp":
        cursor.keyword("family")
        family = cursor.word()
        cursor.keyword("stage")
        stage = _integer(cursor)
        cursor.keyword("path")
        path = cursor.word()
        cursor.keyword("dir")
        direction = _direction(cursor)
        cursor.keyword("sieve")
        sieve = cursor.word()
        cursor.keyword("partial")
        partial = cursor.term()
        if not isinstance(partial, dict) or not all(isinstance(k, CubeMor) for k in partial):
            raise cursor.error("partial is a map from morphisms to elements")
        cursor.keyword("base")
        decl = CompDecl(family, stage, path, direction, sieve, partial, cursor.term(), number)
    elif head == "universe":
        cursor.keyword("dir")
        direction = _direction(cursor)
        cursor.keyword("cof")
        cof = cursor.word()
        if cof not in ("top", "bot"):
            raise cursor.error("universe cofibration must be top or bot")
        cursor.keyword("elements")
        elements = _atoms(cursor.term(), cursor)
        cursor.keyword("relabel")
        relabel = cursor.term()
        if not isinstance(relabel, dict):
            raise cursor.error("relabel is a map {x↦y ...}")
        cursor.keyword("level")
        decl = UniverseDecl(direction, cof, elements, relabel, _integer(cursor), number)
    else:
        raise ParseError(f"unknown declaration {head!r}", number, 1)
    if not cursor.done():
        raise cursor.error("trailing text")
    return decl


def parse_document(text: str) -> Document:
    lines = [(number, raw) for number, raw in enumerate(text.splitlines(), start=1)
             if raw.strip() and not raw.lstrip().startswith("#")]
    doc = Document()
    index = 0
    if lines and lines[0][1].lstrip().startswith("cubeset"):
        doc.cubeset, index = _parse_cubeset(lines, 0)
        doc.context = doc.cubeset.presheaf()
    while index < len(lines):
        number, raw = lines[index]
        decl = _parse_decl(number, raw)
        if isinstance(decl, (FamilyDecl, CompDecl, SieveDecl)) and doc.context is None:
            raise ParseError("families, sieves and problems need a cubeset first", number, 1)
        if isinstance(decl, SieveDecl):
            decl.cofibration(doc.context.variant)
        doc.decls.append(decl)
        index += 1
    logger.debug("parsed %d declarations", len(doc.decls))
    return doc


def format_document(doc: Document) -> str:
    out = doc.cubeset.lines() if doc.cubeset else []
    out += [decl.text() for decl in doc.decls]
    return "\n".join(out) + "\n"


# ============================================================================
# PROBLEMS
# ============================================================================

def resolve(built: BuiltFamily, term, c: int, gamma: Hashable, line: int = 0) -> Hashable:
    """The element of the fiber at (c, gamma) whose text view is term."""
    hits = [x for x in built.family.fiber(c, gamma) if built.view(x, c, gamma) == term]
    if not hits:
        raise ParseError(f"{format_term(term)} is not an element of {built.family.name} "
                         f"at stage {c} over {gamma}", line, 1)
    if len(hits) > 1:
        raise ParseError(f"{format_term(term)} names {len(hits)} elements of {built.family.name}", line, 1)
    return hits[0]


def show(built: BuiltFamily, x: Hashable, c: int, gamma: Hashable) -> str:
    return format_term(built.view(x, c, gamma))


def build_problem(doc: Document, decl: CompDecl) -> tuple[kan.CompProblem, BuiltFamily]:
    families, sieves = doc.families(), doc.sieves()
    if decl.family not in families:
        raise ParseError(f"unknown family {decl.family!r}", decl.line, 1)
    if decl.sieve not in sieves:
        raise ParseError(f"unknown sieve {decl.sieve!r}", decl.line, 1)
    Gamma = doc.context
    fdecl = families[decl.family]
    built = build_family(fdecl.kind, fdecl.args, Gamma, fdecl.line)
    A = built.family
    phi = sieves[decl.sieve].cofibration(Gamma.variant)
    c, e = decl.stage, decl.e
    if decl.path not in Gamma.carrier(c + 1):
        raise ParseError(f"path {decl.path} is not an element of {Gamma.name} at stage {c + 1}", decl.line, 1)
    over = lambda s: Gamma.act(decl.path, cube.lift(s))
    partial = {s: resolve(built, term, s.src + 1, over(s), decl.line) for s, term in decl.partial.items()}
    start = Gamma.act(decl.path, cube.face(c, e, Gamma.variant))
    base = resolve(built, decl.base, c, start, decl.line)
    return kan.make_problem(A, c, decl.path, e, phi, partial, base), built


def run_universe(decl: UniverseDecl) -> tuple[kan.UniverseCode, kan.UniverseCode]:
    """Compose a relabelling line of codes; returns the composite and the far end of the line."""
    e = 0 if decl.direction == "0to1" else 1
    if sorted(decl.relabel) != sorted(decl.elements):
        raise ParseError("relabel must be given on every element", decl.line, 1)
    line = kan.relabelled_line(decl.elements, decl.relabel, decl.level)
    near = kan.line_endpoint(line, e)
    result = kan.universe_comp(e, decl.cof == "top", line if decl.cof == "top" else None, near)
    return result, kan.line_endpoint(line, 1 - e)


# ============================================================================
# ASSEMBLIES
# ============================================================================

def assembly_to_text(A: asm.Assembly) -> str:
    lines = [f"element {a} realizers " + " ".join(str(r) for r in sorted(A.E(a))) for a in A.elements]
    return "\n".join(lines) + "\n"


def _assembly_lines(lines: list[tuple[int, str]], name: str) -> asm.Assembly:
    spec: dict = {}
    for number, text in lines:
        cursor = Cursor(text, number)
        cursor.expect("element")
        a = cursor.word()
        cursor.expect("realizers")
        realizers = []
        while not cursor.done() and not cursor.peek("}"):
            realizers.append(_integer(cursor))
        if not realizers:
            raise cursor.error(f"element {a} has no realizer")
        if a in spec:
            raise ParseError(f"element {a} declared twice", number, 1)
        spec[a] = realizers
    return asm.assembly(spec, name)


def assembly_from_text(text: str, name: str = "") -> asm.Assembly:
    lines = [(n, raw) for n, raw in enumerate(text.splitlines(), start=1) if raw.strip()]
    return _assembly_lines(lines, name)


def family_to_text(fibers: dict) -> str:
    """fibers maps a base element to the assembly over it."""
    out = []
    for gamma, A in fibers.items():
        out.append(f"fiber {gamma} {{")
        out += ["  " + line for line in assembly_to_text(A).splitlines()]
        out.append("}")
    return "\n".join(out) + "\n"


def family_from_text(text: str) -> dict:
    lines = [(n, raw.strip()) for n, raw in enumerate(text.splitlines(), start=1) if raw.strip()]
    fibers: dict = {}
    index = 0
    while index < len(lines):
        number, raw = lines[index]
        cursor = Cursor(raw, number)
        cursor.expect("fiber")
        gamma = cursor.word()
        cursor.expect("{")
        body = []
        index += 1
        while index < len(lines) and lines[index][1] != "}":
            body.append(lines[index])
            index += 1
        if index == len(lines):
            raise ParseError(f"fiber {gamma} is not closed", number, 1)
        fibers[gamma] = _assembly_lines(body, f"A({gamma})")
        index += 1
    return fibers
