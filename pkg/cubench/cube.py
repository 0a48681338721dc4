"""
Cube categories B and B_ord.

Objects are natural numbers n, standing for the vertex set of the boolean
n-cube. A morphism m -> n is stored as its vertex table: entry v is the image
of source vertex v, vertices being integers whose binary expansion (most
significant bit first) is the bit-vector. In B_ord tables must be monotone
for the pointwise order 0 < 1.

Products are m + n with the left factor in the high bits, the terminal
object is 0, the interval I is 1.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from config.constants import MAX_CUBE_DIM, MAX_HOM_SET
from cubench.errors import CapExceededError, DimensionError, ParseError
from cubench.verdict import Verdict

logger = logging.getLogger(__name__)

# objects are plain dimensions
CubeObj = int


class Variant(Enum):
    B = "B"
    B_ORD = "B_ord"


@dataclass(frozen=True)
class CubeMor:
    variant: Variant
    src: int
    dst: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != 2 ** self.src:
            raise DimensionError(f"table of a {self.src}-cube needs {2 ** self.src} rows, got {len(self.table)}")
        if any(not 0 <= t < 2 ** self.dst for t in self.table):
            raise DimensionError(f"table entries must be vertices of the {self.dst}-cube")
        if self.variant is Variant.B_ORD and not is_monotone(self.src, self.table):
            raise DimensionError(f"table {self.table} is not monotone")

    def __str__(self) -> str:
        return format_mor(self)

    def sort_key(self) -> tuple:
        return (self.src, self.dst, self.table)


# ============================================================================
# VERTICES AND ORDER
# ============================================================================

def vertex_label(v: int, n: int) -> str:
    if n == 0:
        return "*"
    return format(v, f"0{n}b")


def vertex_bits(n: int) -> np.ndarray:
    """Row v holds the bit-vector of vertex v."""
    verts = np.arange(2 ** n)
    shifts = np.arange(n - 1, -1, -1)
    return (verts[:, None] >> shifts[None, :]) & 1


@lru_cache(maxsize=None)
def _order_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    bits = vertex_bits(n)
    below = np.all(bits[:, None, :] <= bits[None, :, :], axis=2)
    us, vs = np.nonzero(below)
    return us, vs


@lru_cache(maxsize=65536)
def is_monotone(src: int, table: tuple[int, ...]) -> bool:
    us, vs = _order_pairs(src)
    values = np.asarray(table)
    # u <= v pointwise means the bits of u are a subset of the bits of v
    return bool(np.all((values[us] & ~values[vs]) == 0))


# ============================================================================
# CATEGORY STRUCTURE
# ============================================================================

def _check_dim(*dims: int) -> None:
    for d in dims:
        if d < 0 or d > MAX_CUBE_DIM:
            raise CapExceededError(f"cube dimension {d} outside 0..{MAX_CUBE_DIM}")


def identity(c: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    return CubeMor(variant, c, c, tuple(range(2 ** c)))


def compose(g: CubeMor, f: CubeMor) -> CubeMor:
    """g after f."""
    if f.dst != g.src:
        raise DimensionError(f"cannot compose {g.src}->{g.dst} after {f.src}->{f.dst}")
    if f.variant is not g.variant:
        raise DimensionError("cannot compose morphisms of different variants")
    return _compose_cached(g, f)


@lru_cache(maxsize=1 << 18)
def _compose_cached(g: CubeMor, f: CubeMor) -> CubeMor:
    return CubeMor(f.variant, f.src, g.dst, tuple(g.table[v] for v in f.table))


def equal(f: CubeMor, g: CubeMor) -> bool:
    return f == g


def bang(c: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    return CubeMor(variant, c, 0, (0,) * (2 ** c))


def delta(e: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    """End-point e of the interval, a global point 0 -> 1."""
    return CubeMor(variant, 0, 1, (e,))


def mu(e: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    """Connection 2 -> 1: minimum for e = 0, maximum for e = 1."""
    return CubeMor(variant, 2, 1, (0, 0, 0, 1) if e == 0 else (0, 1, 1, 1))


def product(m: int, n: int) -> int:
    return m + n


def proj_left(m: int, n: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    return CubeMor(variant, m + n, m, tuple(w >> n for w in range(2 ** (m + n))))


def proj_right(m: int, n: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    mask = 2 ** n - 1
    return CubeMor(variant, m + n, n, tuple(w & mask for w in range(2 ** (m + n))))


def pair(f: CubeMor, g: CubeMor) -> CubeMor:
    if f.src != g.src:
        raise DimensionError("paired morphisms need a common source")
    if f.variant is not g.variant:
        raise DimensionError("cannot pair morphisms of different variants")
    return CubeMor(f.variant, f.src, f.dst + g.dst,
                   tuple((a << g.dst) | b for a, b in zip(f.table, g.table)))


def cross(f: CubeMor, g: CubeMor) -> CubeMor:
    """f x g on products."""
    left = compose(f, proj_left(f.src, g.src, f.variant))
    right = compose(g, proj_right(f.src, g.src, f.variant))
    return pair(left, right)


def face(c: int, e: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    """c -> c + 1 placing the last coordinate at end-point e."""
    return pair(identity(c, variant), compose(delta(e, variant), bang(c, variant)))


def proj(c: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    """c + 1 -> c forgetting the last coordinate."""
    return proj_left(c, 1, variant)


def last(c: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    """c + 1 -> 1, the last coordinate."""
    return proj_right(c, 1, variant)


def lift(sigma: CubeMor) -> CubeMor:
    """sigma x I."""
    return cross(sigma, identity(1, sigma.variant))


def connection_map(c: int, e: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    """c + 2 -> c + 1 sending (x, i, j) to (x, mu_e(i, j))."""
    keep = proj_left(c, 2, variant)
    joined = compose(mu(e, variant), proj_right(c, 2, variant))
    return pair(keep, joined)


def swap_last(c: int, variant: Variant = Variant.B_ORD) -> CubeMor:
    """c + 2 -> c + 2 exchanging the two last coordinates."""
    x = proj_left(c, 2, variant)
    i = compose(proj_left(1, 1, variant), proj_right(c, 2, variant))
    j = compose(proj_right(1, 1, variant), proj_right(c, 2, variant))
    return pair(pair(x, j), i)


def corrupt(mor: CubeMor, vertex: int) -> CubeMor:
    """Flip the lowest bit of one row; a negative control for law checks."""
    if not 0 <= vertex < len(mor.table):
        raise DimensionError(f"row {vertex} is not a vertex of the {mor.src}-cube")
    table = list(mor.table)
    table[vertex] ^= 1
    if mor.variant is Variant.B_ORD and not is_monotone(mor.src, tuple(table)):
        raise DimensionError(f"flipping row {vertex} of {format_mor(mor)} is not monotone; "
                             f"pick another row or the variant B")
    return CubeMor(mor.variant, mor.src, mor.dst, tuple(table))


# ============================================================================
# HOM-SETS
# ============================================================================

@lru_cache(maxsize=None)
def monotone_functions(m: int) -> tuple[tuple[int, ...], ...]:
    """Tables of all monotone maps from the m-cube to {0, 1}."""
    rows = 2 ** m
    codes = np.arange(2 ** rows)
    tables = (codes[:, None] >> np.arange(rows - 1, -1, -1)[None, :]) & 1
    us, vs = _order_pairs(m)
    keep = np.all(tables[:, us] <= tables[:, vs], axis=1)
    return tuple(tuple(int(b) for b in row) for row in tables[keep])


def hom_count(m: int, n: int, variant: Variant) -> int:
    if variant is Variant.B:
        return (2 ** n) ** (2 ** m)
    return len(monotone_functions(m)) ** n


@lru_cache(maxsize=None)
def enumerate_homs(m: int, n: int, variant: Variant = Variant.B_ORD) -> tuple[CubeMor, ...]:
    """All morphisms m -> n in lexicographic order of their tables."""
    _check_dim(m, n)
    size = hom_count(m, n, variant)
    if size > MAX_HOM_SET:
        raise CapExceededError(f"|{variant.value}({m}, {n})| = {size} exceeds cap {MAX_HOM_SET}")
    if variant is Variant.B:
        tables = itertools.product(range(2 ** n), repeat=2 ** m)
    else:
        coords = monotone_functions(m)
        tables = sorted(
            tuple(
                sum(bit << (n - 1 - k) for k, bit in enumerate(column))
                for column in zip(*choice)
            ) if n else (0,) * (2 ** m)
            for choice in itertools.product(coords, repeat=n)
        )
    homs = tuple(CubeMor(variant, m, n, tuple(t)) for t in tables)
    logger.debug("enumerated %s(%d, %d): %d morphisms", variant.value, m, n, len(homs))
    return homs


def homs_into(c: int, max_src: int, variant: Variant = Variant.B_ORD) -> list[CubeMor]:
    """Every morphism into c whose source is at most max_src."""
    out = []
    for k in range(max_src + 1):
        out.extend(enumerate_homs(k, c, variant))
    return out


def global_points_of_interval(variant: Variant = Variant.B_ORD) -> list[CubeMor]:
    return list(enumerate_homs(0, 1, variant))


# ============================================================================
# LAW CHECKS
# ============================================================================

def connection_equations(variant: Variant, mu0: CubeMor | None = None,
                         mu1: CubeMor | None = None) -> list[tuple[str, CubeMor, CubeMor]]:
    """The eight absorption and unit equations as (name, lhs, rhs)."""
    tables = {0: mu0 or mu(0, variant), 1: mu1 or mu(1, variant)}
    one = identity(1, variant)
    const = {e: compose(delta(e, variant), bang(1, variant)) for e in (0, 1)}
    equations = []
    for e in (0, 1):
        m = tables[e]
        other = 1 - e
        name = "min" if e == 0 else "max"
        equations.append((f"{name}(d{e} x I) = d{e}", compose(m, pair(const[e], one)), const[e]))
        equations.append((f"{name}(I x d{e}) = d{e}", compose(m, pair(one, const[e])), const[e]))
        equations.append((f"{name}(d{other} x I) = id", compose(m, pair(const[other], one)), one))
        equations.append((f"{name}(I x d{other}) = id", compose(m, pair(one, const[other])), one))
    return equations


def check_path_connection_algebra(variant: Variant = Variant.B_ORD, mu0: CubeMor | None = None,
                                  mu1: CubeMor | None = None) -> Verdict:
    failures = [name for name, lhs, rhs in connection_equations(variant, mu0, mu1)
                if not equal(lhs, rhs)]
    if equal(delta(0, variant), delta(1, variant)):
        failures.append("d0 != d1")
    return Verdict.from_failures(failures, equations=8)


def check_category_laws(max_dim: int, variant: Variant = Variant.B_ORD) -> Verdict:
    """Unit and associativity on every composable triple with dims <= max_dim."""
    failures = []
    dims = range(max_dim + 1)
    for a, b in itertools.product(dims, repeat=2):
        for f in enumerate_homs(a, b, variant):
            if compose(identity(b, variant), f) != f or compose(f, identity(a, variant)) != f:
                failures.append(f"unit law at {f}")
    for a, b, c, d in itertools.product(dims, repeat=4):
        for f in enumerate_homs(a, b, variant):
            for g in enumerate_homs(b, c, variant):
                gf = compose(g, f)
                for h in enumerate_homs(c, d, variant):
                    if compose(h, gf) != compose(compose(h, g), f):
                        failures.append(f"associativity at {f}, {g}, {h}")
    return Verdict.from_failures(failures)


# ============================================================================
# TEXT FORM
# ============================================================================

_MOR = re.compile(r"^\s*mor\s+(B_ord|B)\s+(\d+)->(\d+)\s+\[(.*)\]\s*$")
_ROW = re.compile(r"^([01]+|\*)(?:↦|\|->)([01]+|\*)$")


def format_mor(mor: CubeMor) -> str:
    rows = " ".join(f"{vertex_label(v, mor.src)}↦{vertex_label(t, mor.dst)}"
                    for v, t in enumerate(mor.table))
    return f"mor {mor.variant.value} {mor.src}->{mor.dst} [{rows}]"


def _vertex(label: str, dim: int) -> int | None:
    """Vertex of the dim-cube named by label, or None when the label has the wrong shape."""
    if dim == 0:
        return 0 if label == "*" else None
    if label == "*" or len(label) != dim:
        return None
    return int(label, 2)


def parse_mor(text: str, line: int = 0) -> CubeMor:
    match = _MOR.match(text)
    if not match:
        raise ParseError(f"not a morphism: {text.strip()!r}", line, 1)
    variant = Variant(match.group(1))
    src, dst = int(match.group(2)), int(match.group(3))
    if max(src, dst) > MAX_CUBE_DIM:
        raise ParseError(f"cube dimension {max(src, dst)} above {MAX_CUBE_DIM}", line, 1)
    rows = match.group(4).split()
    table = [None] * (2 ** src)
    for row in rows:
        column = text.find(row) + 1
        parsed = _ROW.match(row)
        if not parsed:
            raise ParseError(f"bad table row {row!r}", line, column)
        source, target = _vertex(parsed.group(1), src), _vertex(parsed.group(2), dst)
        if source is None:
            raise ParseError(f"row {row!r}: {parsed.group(1)!r} is not a vertex of the {src}-cube", line, column)
        if target is None:
            raise ParseError(f"row {row!r}: {parsed.group(2)!r} is not a vertex of the {dst}-cube", line, column)
        if table[source] is not None:
            raise ParseError(f"vertex {parsed.group(1)} is given twice", line, column)
        table[source] = target
    if None in table:
        raise ParseError("table does not cover every source vertex", line, 1)
    try:
        return CubeMor(variant, src, dst, tuple(table))
    except DimensionError as exc:
        raise ParseError(str(exc), line, 1) from None
