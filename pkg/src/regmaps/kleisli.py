"""Kleisli morphisms as semiring-valued matrices.

Orientation: rows are the source, columns the target, and
``compose(f, g)`` means "f then g" (diagrammatic order).  Categorical
notation usually writes this as ``g . f``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import SemiringSpec, Value, same_spec
from .errors import (ColsMismatch, DimensionMismatch, IndexOutOfRange, NoConvergence,
                     NotABaseMap, SpecMismatch)
from .report import LawReport, collect, law


@dataclass(frozen=True)
class KMatrix:
    spec: SemiringSpec
    rows: int
    cols: int
    entries: tuple[tuple[Value, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch(
                f"entries do not form a {self.rows}x{self.cols} array")

    @classmethod
    def from_rows(cls, spec: SemiringSpec, rows: Sequence[Sequence[Value]], cols: int | None = None) -> "KMatrix":
        entries = tuple(tuple(r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(spec, len(entries), cols, entries)

    @classmethod
    def zeros(cls, spec: SemiringSpec, rows: int, cols: int) -> "KMatrix":
        z = spec.zero
        return cls(spec, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def build(cls, spec: SemiringSpec, rows: int, cols: int, fn: Callable[[int, int], Value]) -> "KMatrix":
        return cls(spec, rows, cols, tuple(tuple(fn(i, j) for j in range(cols)) for i in range(rows)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Value, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Value, ...]:
        return tuple(r[j] for r in self.entries)

    def is_valid(self) -> bool:
        return all(self.spec.contains(x) for r in self.entries for x in r)

    def to_tsv(self) -> str:
        fmt = self.spec.format_value
        return "\n".join("\t".join(fmt(x) for x in r) for r in self.entries)

    def __matmul__(self, other: "KMatrix") -> "KMatrix":
        return compose(self, other)

    def __repr__(self):
        return f"KMatrix({self.spec.name}, {self.rows}x{self.cols}, {self.entries!r})"


def _same(f: KMatrix, g: KMatrix):
    if not same_spec(f.spec, g.spec):
        raise SpecMismatch(f"{f.spec.name} vs {g.spec.name}")


def compose(f: KMatrix, g: KMatrix) -> KMatrix:
    """f then g: ``(f;g)[i][k] = sum_j f[i][j] * g[j][k]``."""
    _same(f, g)
    if f.cols != g.rows:
        raise DimensionMismatch(f"cannot compose {f.rows}x{f.cols} with {g.rows}x{g.cols}")
    spec = f.spec
    plus, times, zero = spec.plus, spec.times, spec.zero
    gcols = [g.column(k) for k in range(g.cols)]
    out = []
    for frow in f.entries:
        nz = [(j, x) for j, x in enumerate(frow) if x != zero]
        row = []
        for col in gcols:
            acc = zero
            for j, x in nz:
                acc = plus(acc, times(x, col[j]))
            row.append(acc)
        out.append(tuple(row))
    return KMatrix(spec, f.rows, g.cols, tuple(out))


def identity(spec: SemiringSpec, n: int) -> KMatrix:
    if n < 0:
        raise DimensionMismatch("negative size")
    return KMatrix.build(spec, n, n, lambda i, j: spec.one if i == j else spec.zero)


def base_map(spec: SemiringSpec, f: Sequence[int] | Callable[[int], int], p: int | None = None,
             q: int | None = None) -> KMatrix:
    """Matrix of a function ``{0..p-1} -> {0..q-1}``.

    ``f`` is either a sequence of images (``p`` defaults to its length) or a
    callable, in which case ``p`` is required.  ``q`` defaults to one more
    than the largest image.
    """
    if callable(f):
        if p is None:
            raise ValueError("p is required when f is a callable")
        images = [f(i) for i in range(p)]
    else:
        images = list(f)
        if p is None:
            p = len(images)
        elif p != len(images):
            raise DimensionMismatch(f"{len(images)} images for domain of size {p}")
    if q is None:
        q = max(images) + 1 if images else 0
    for i, y in enumerate(images):
        if not (isinstance(y, int) and 0 <= y < q):
            raise IndexOutOfRange(f"f({i}) = {y!r} outside 0..{q - 1}")
    return KMatrix.build(spec, p, q, lambda i, j: spec.one if images[i] == j else spec.zero)


def cotuple(fs: Sequence[KMatrix]) -> KMatrix:
    """Stack matrices with a common target vertically, in order."""
    if not fs:
        raise ValueError("cotuple of an empty sequence")
    first = fs[0]
    for g in fs[1:]:
        _same(first, g)
        if g.cols != first.cols:
            raise ColsMismatch(f"{g.cols} columns vs {first.cols}")
    entries = tuple(r for g in fs for r in g.entries)
    return KMatrix(first.spec, len(entries), first.cols, entries)


def direct_sum(fs: Sequence[KMatrix]) -> KMatrix:
    """Block-diagonal matrix."""
    if not fs:
        raise ValueError("direct sum of an empty sequence")
    spec = fs[0].spec
    for g in fs[1:]:
        _same(fs[0], g)
    cols = sum(g.cols for g in fs)
    out = []
    offset = 0
    for g in fs:
        for r in g.entries:
            out.append((spec.zero,) * offset + r + (spec.zero,) * (cols - offset - g.cols))
        offset += g.cols
    return KMatrix(spec, len(out), cols, tuple(out))


def add(f: KMatrix, g: KMatrix) -> KMatrix:
    """Entrywise sum (join, for idempotent specs)."""
    _same(f, g)
    if f.shape != g.shape:
        raise DimensionMismatch(f"{f.shape} vs {g.shape}")
    plus = f.spec.plus
    return KMatrix(f.spec, f.rows, f.cols,
                   tuple(tuple(plus(x, y) for x, y in zip(a, b)) for a, b in zip(f.entries, g.entries)))


def leq(f: KMatrix, g: KMatrix) -> bool:
    _same(f, g)
    if f.shape != g.shape:
        raise DimensionMismatch(f"{f.shape} vs {g.shape}")
    le = f.spec.leq
    return all(le(x, y) for a, b in zip(f.entries, g.entries) for x, y in zip(a, b))


def close(f: KMatrix, g: KMatrix) -> bool:
    """Entrywise equality, within tolerance for approximate specs."""
    _same(f, g)
    if f.shape != g.shape:
        return False
    eq = f.spec.eq
    return all(eq(x, y) for a, b in zip(f.entries, g.entries) for x, y in zip(a, b))


def transpose(f: KMatrix) -> KMatrix:
    return KMatrix(f.spec, f.cols, f.rows, tuple(zip(*f.entries)) if f.rows else ((),) * f.cols)


def is_base_map(f: KMatrix) -> bool:
    spec = f.spec
    for r in f.entries:
        ones = sum(1 for x in r if x == spec.one)
        zeros = sum(1 for x in r if x == spec.zero)
        if ones != 1 or ones + zeros != f.cols:
            return False
    return True


def check_adjunction(f: KMatrix) -> LawReport:
    """A base map is left adjoint to its transpose in the hom-order.

    With "then" composition these read ``id <= f;f_`` on the source and
    ``f_;f <= id`` on the target.
    """
    if not is_base_map(f):
        raise NotABaseMap("expected exactly one unit entry per row and zeros elsewhere")
    ft = transpose(f)
    unit = law("unit: id <= f;f_")
    counit = law("counit: f_;f <= id")
    unit.check(leq(identity(f.spec, f.rows), compose(f, ft)), f)
    counit.check(leq(compose(ft, f), identity(f.spec, f.cols)), f)
    return collect(unit, counit)


def _widen(spec, prev, cur):
    top = spec.top
    return KMatrix(spec, cur.rows, cur.cols, tuple(
        tuple(y if x == y else top for x, y in zip(a, b))
        for a, b in zip(prev.entries, cur.entries)))


def star_iterations(alpha: KMatrix, max_iter: int = 10_000) -> tuple[KMatrix, int]:
    """Least solution of ``X = id + alpha;X`` and the number of rounds used.

    Iterates from ``X = id``.  Exact specs stop at the first repeated value,
    approximate ones once no entry moves by more than a thousandth of the
    tolerance.  A spec with a saturating ``top`` (and non-idempotent plus)
    sends entries that still grow after ``n`` rounds straight to ``top``:
    such growth needs a path longer than ``n``, hence a pumpable cycle of
    non-zero weight, whose sum is infinite.
    """
    if alpha.rows != alpha.cols:
        raise DimensionMismatch(f"star of a non-square {alpha.rows}x{alpha.cols} matrix")
    spec = alpha.spec
    n = alpha.rows
    ident = identity(spec, n)
    widen = spec.top is not None and not spec.idempotent_plus and not spec.approx
    if spec.approx:
        tight = _tight(spec)
    x = ident
    for k in range(1, max_iter + 1):
        nxt = add(ident, compose(alpha, x))
        if spec.approx:
            if tight(x, nxt):
                return nxt, k
        elif nxt == x:
            return x, k
        if widen and k > n:
            nxt = _widen(spec, x, nxt)
        x = nxt
    raise NoConvergence(f"star did not stabilise within {max_iter} rounds")


def _tight(spec):
    tol = spec.tolerance * 1e-3

    def tight(f, g):
        for a, b in zip(f.entries, g.entries):
            for x, y in zip(a, b):
                if x == y:
                    continue
                if x == float("inf") or y == float("inf"):
                    return False
                if abs(x - y) > tol * max(1.0, abs(x), abs(y)):
                    return False
        return True

    return tight


def star(alpha: KMatrix, max_iter: int = 10_000) -> KMatrix:
    return star_iterations(alpha, max_iter)[0]


def power(alpha: KMatrix, k: int) -> KMatrix:
    x = identity(alpha.spec, alpha.rows)
    for _ in range(k):
        x = compose(x, alpha)
    return x
