"""Weighted word automata with internal (epsilon) moves.

An automaton stores one-step letter matrices plus an optional matrix of
internal moves; saturated behaviour is computed on demand.  Running a word
``a1...ak`` from the left gives the matrix

    E* ; M(a1) ; E* ; ... ; M(ak) ; E*

with ``E*`` the star of the internal moves.  Its rows, pushed through the
exit weights, are the language weights.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .algebra import SemiringSpec, Value, same_spec
from .errors import (AlphabetMismatch, ArityMismatch, DimensionMismatch, IndexOutOfRange,
                     SpecMismatch, UnknownSymbol)
from .kleisli import KMatrix, close, compose, direct_sum, identity, star, transpose
from .kleisli import leq as mat_leq
from .report import LawReport, collect, law

Word = tuple


def as_word(w, alphabet: Sequence[str] = ()) -> Word:
    """Normalise a word to a tuple of symbols.

    Strings are split on whitespace when they contain any, otherwise into
    characters (so ``"ab"`` is ``("a", "b")``).  A string that is itself a
    multi-character symbol of ``alphabet`` is kept whole.
    """
    if isinstance(w, str):
        if w in alphabet and len(w) > 1:
            return (w,)
        if any(c.isspace() for c in w):
            return tuple(w.split())
        return tuple(w)
    return tuple(w)


def format_word(w: Word) -> str:
    if not w:
        return "ε"
    if all(len(s) == 1 for s in w):
        return "".join(w)
    return " ".join(w)


def words_upto(alphabet: Sequence[str], max_len: int) -> Iterator[Word]:
    """All words of length <= max_len, shortest first, then in alphabet order."""
    for k in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=k)


def vecmat(spec: SemiringSpec, v: Sequence[Value], m: KMatrix) -> tuple:
    plus, times, zero = spec.plus, spec.times, spec.zero
    out = [zero] * m.cols
    for j, x in enumerate(v):
        if x == zero:
            continue
        for k, y in enumerate(m.entries[j]):
            out[k] = plus(out[k], times(x, y))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class WordAutomaton:
    spec: SemiringSpec
    n: int
    alphabet: tuple[str, ...]
    letters: Mapping[str, KMatrix]
    finals: KMatrix
    eps: Optional[KMatrix] = None
    labels: tuple[str, ...] = ()
    entries: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet symbols must be distinct")
        if set(self.letters) != set(self.alphabet):
            raise UnknownSymbol(f"letter matrices {sorted(self.letters)} vs alphabet {list(self.alphabet)}")
        mats = list(self.letters.values()) + ([self.eps] if self.eps is not None else [])
        for m in mats:
            if not same_spec(m.spec, self.spec):
                raise SpecMismatch(f"{m.spec.name} vs {self.spec.name}")
            if m.shape != (self.n, self.n):
                raise DimensionMismatch(f"transition matrix {m.shape}, expected {(self.n, self.n)}")
        if not same_spec(self.finals.spec, self.spec):
            raise SpecMismatch("finals spec")
        if self.finals.rows != self.n:
            raise DimensionMismatch(f"finals has {self.finals.rows} rows, expected {self.n}")
        if self.labels and len(self.labels) != self.n:
            raise ValueError("one label per state")
        for name, q in self.entries:
            if not 0 <= q < self.n:
                raise IndexOutOfRange(f"entry {name} -> {q}")

    @classmethod
    def from_edges(cls, spec: SemiringSpec, n: int, alphabet: Sequence[str],
                   edges: Iterable[tuple], finals: Mapping[int, Value] | Iterable[tuple],
                   exits: int = 1, **kw) -> "WordAutomaton":
        """Build from ``(src, sym, dst[, weight])`` edges; ``sym`` None is an internal move.

        ``finals`` maps state to weight (single exit) or lists
        ``(state, exit, weight)`` triples.  Parallel edges add up.
        """
        alphabet = tuple(alphabet)
        grids = {a: [[spec.zero] * n for _ in range(n)] for a in alphabet}
        eps = None
        for e in edges:
            src, sym, dst = e[:3]
            w = e[3] if len(e) > 3 else spec.one
            if not (0 <= src < n and 0 <= dst < n):
                raise IndexOutOfRange(f"edge {e!r}")
            if sym is None:
                if eps is None:
                    eps = [[spec.zero] * n for _ in range(n)]
                g = eps
            elif sym in grids:
                g = grids[sym]
            else:
                raise UnknownSymbol(f"edge symbol {sym!r} not in alphabet")
            g[src][dst] = spec.plus(g[src][dst], w)
        fin = [[spec.zero] * exits for _ in range(n)]
        items = finals.items() if isinstance(finals, Mapping) else finals
        for item in items:
            if len(item) == 2:
                q, w = item
                j = 0
            else:
                q, j, w = item
            if not 0 <= q < n:
                raise IndexOutOfRange(f"final state {q}")
            if not 0 <= j < exits:
                raise IndexOutOfRange(f"exit {j} >= {exits}")
            fin[q][j] = spec.plus(fin[q][j], w)
        return cls(
            spec=spec, n=n, alphabet=alphabet,
            letters={a: KMatrix.from_rows(spec, grids[a], n) for a in alphabet},
            finals=KMatrix.from_rows(spec, fin, exits),
            eps=KMatrix.from_rows(spec, eps, n) if eps is not None else None,
            **kw)

    @property
    def exits(self) -> int:
        return self.finals.cols

    def label(self, q: int) -> str:
        return self.labels[q] if self.labels else f"q{q}"

    def letter(self, a: str) -> KMatrix:
        try:
            return self.letters[a]
        except KeyError:
            raise UnknownSymbol(f"symbol {a!r} not in alphabet {list(self.alphabet)}") from None

    @cached_property
    def eps_closure(self) -> KMatrix:
        if self.eps is None:
            return identity(self.spec, self.n)
        return star(self.eps)

    @cached_property
    def _steps(self) -> dict:
        # M(a);E* per letter
        es = self.eps_closure
        return {a: compose(m, es) if self.eps is not None else m for a, m in self.letters.items()}


def eps_star(A: WordAutomaton) -> KMatrix:
    """Star of the internal moves (identity when there are none)."""
    return A.eps_closure


def _check_word(A: WordAutomaton, w) -> Word:
    w = as_word(w, A.alphabet)
    for a in w:
        if a not in A.letters:
            raise UnknownSymbol(f"symbol {a!r} not in alphabet {list(A.alphabet)}")
    return w


def step_matrix(A: WordAutomaton, w) -> KMatrix:
    """``M(a1);E*;...;M(ak);E*``, the run matrix without the leading closure."""
    w = _check_word(A, w)
    x = identity(A.spec, A.n)
    for a in w:
        x = compose(x, A._steps[a])
    return x


def run_dual(A: WordAutomaton, w) -> KMatrix:
    """Total weight of moving from state i to state j while reading ``w``."""
    w = _check_word(A, w)
    x = A.eps_closure
    for a in w:
        x = compose(x, A._steps[a])
    return x


def _check_state(A, i):
    if not (isinstance(i, int) and 0 <= i < A.n):
        raise IndexOutOfRange(f"state {i!r} outside 0..{A.n - 1}")


def weight(A: WordAutomaton, i: int, w) -> tuple:
    """Exit-weight vector of word ``w`` from state ``i``."""
    _check_state(A, i)
    w = _check_word(A, w)
    v = A.eps_closure.row(i)
    for a in w:
        v = vecmat(A.spec, v, A._steps[a])
    return vecmat(A.spec, v, A.finals)


def brute_force_weight(A: WordAutomaton, i: int, w, eps_bound: int = 0) -> tuple:
    """Explicit path sum, the independent check on :func:`weight`.

    Sums, over every state sequence starting at ``i`` that reads ``w`` with
    at most ``eps_bound`` internal moves before each letter and at the end,
    the product of the step weights and the exit weight.  Path suffixes
    that share a state, position and remaining internal budget are summed
    once; this never touches the closure ``E*``.
    """
    _check_state(A, i)
    w = _check_word(A, w)
    spec = A.spec
    zero = spec.zero
    p = A.exits
    eps = A.eps.entries if A.eps is not None else None
    mats = [A.letters[a].entries for a in w]
    fin = A.finals.entries
    memo: dict = {}

    def suffix(q, pos, eps_left):
        key = (q, pos, eps_left)
        if key in memo:
            return memo[key]
        totals = list(fin[q]) if pos == len(mats) else [zero] * p
        moves = []
        if pos < len(mats):
            moves += [(x, r, pos + 1, eps_bound) for r, x in enumerate(mats[pos][q]) if x != zero]
        if eps is not None and eps_left > 0:
            moves += [(x, r, pos, eps_left - 1) for r, x in enumerate(eps[q]) if x != zero]
        for x, r, pos2, left2 in moves:
            rest = suffix(r, pos2, left2)
            for j in range(p):
                totals[j] = spec.plus(totals[j], spec.times(x, rest[j]))
        memo[key] = tuple(totals)
        return memo[key]

    return suffix(i, 0, eps_bound)


def saturation_slice(A: WordAutomaton, i: int, max_len: int) -> dict:
    """Row ``i`` of :func:`run_dual` for every word up to ``max_len``."""
    _check_state(A, i)
    out = {(): A.eps_closure.row(i)}
    frontier = [((), out[()])]
    for _ in range(max_len):
        nxt = []
        for w, v in frontier:
            for a in A.alphabet:
                u = w + (a,)
                out[u] = vecmat(A.spec, v, A._steps[a])
                nxt.append((u, out[u]))
        frontier = nxt
    return out


def language_slice(A: WordAutomaton, i: int, max_len: int) -> dict:
    """Exit-weight vector for every word up to ``max_len``."""
    return {w: vecmat(A.spec, v, A.finals) for w, v in saturation_slice(A, i, max_len).items()}


def check_em_laws(A: WordAutomaton, words: Iterable) -> LawReport:
    """Unit and multiplication laws of the run action on sample words.

    ``action`` (every spec): ``run(uv) = run(u);steps(v)``.  When the closure
    of internal moves is idempotent, which is automatic for idempotent
    specs, ``multiplicative``: ``run(uv) = run(u);run(v)`` is checked too.
    """
    words = [_check_word(A, w) for w in words]
    es = A.eps_closure
    spec = A.spec
    unit = law("unit: run(ε) = E*")
    reflexive = law("unit: id <= E*")
    unit.check(close(run_dual(A, ()), es), ())
    reflexive.check(mat_leq(identity(spec, A.n), es), es)
    laws = [unit, reflexive]
    idempotent_closure = close(compose(es, es), es)
    if spec.idempotent_plus:
        idem = law("unit: E*;E* = E*")
        idem.check(idempotent_closure, es)
        laws.append(idem)
    runs = {w: run_dual(A, w) for w in words}
    steps = {w: step_matrix(A, w) for w in words}
    action = law("action: run(uv) = run(u);steps(v)")
    mult = law("multiplicative: run(uv) = run(u);run(v)")
    for u in words:
        for v in words:
            uv = run_dual(A, u + v)
            action.check(close(uv, compose(runs[u], steps[v])), (u, v))
            if idempotent_closure:
                mult.check(close(uv, compose(runs[u], runs[v])), (u, v))
    laws.append(action)
    if idempotent_closure:
        laws.append(mult)
    return collect(*laws)


def reverse_edges(A: WordAutomaton) -> WordAutomaton:
    """Same states, every letter and internal edge reversed; exits unchanged."""
    return WordAutomaton(
        spec=A.spec, n=A.n, alphabet=A.alphabet,
        letters={a: transpose(m) for a, m in A.letters.items()},
        finals=A.finals,
        eps=transpose(A.eps) if A.eps is not None else None,
        labels=A.labels)


# -- regular maps -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RegularWordMap:
    """A behaviour ``entry ; saturated run ; exit`` from ``p`` entries to ``q`` exits."""

    entry: tuple[int, ...]
    automaton: WordAutomaton

    def __post_init__(self):
        for e in self.entry:
            if not 0 <= e < self.automaton.n:
                raise IndexOutOfRange(f"entry state {e} outside automaton of {self.automaton.n} states")

    @property
    def arity_in(self) -> int:
        return len(self.entry)

    @property
    def arity_out(self) -> int:
        return self.automaton.exits

    @property
    def spec(self) -> SemiringSpec:
        return self.automaton.spec

    def weight(self, j: int, w) -> tuple:
        return weight(self.automaton, self.entry[j], w)

    def slice(self, max_len: int) -> dict:
        """word -> tuple (over entries) of exit-weight vectors."""
        per_entry = [language_slice(self.automaton, e, max_len) for e in self.entry]
        return {w: tuple(s[w] for s in per_entry) for w in per_entry[0]} if per_entry else {}


def _check_compatible(a: WordAutomaton, b: WordAutomaton):
    if not same_spec(a.spec, b.spec):
        raise SpecMismatch(f"{a.spec.name} vs {b.spec.name}")
    if tuple(a.alphabet) != tuple(b.alphabet):
        raise AlphabetMismatch(f"{list(a.alphabet)} vs {list(b.alphabet)}")


def _block_eps(spec, n1, n2, e1, e2, bridge):
    """Internal moves of a two-block automaton with an upper-right bridge block."""
    rows = []
    z = spec.zero
    for x in range(n1):
        left = e1.entries[x] if e1 is not None else (z,) * n1
        rows.append(tuple(left) + tuple(bridge[x]))
    for y in range(n2):
        right = e2.entries[y] if e2 is not None else (z,) * n2
        rows.append((z,) * n1 + tuple(right))
    return KMatrix.from_rows(spec, rows, n1 + n2)


def compose_regular(r1: RegularWordMap, r2: RegularWordMap) -> RegularWordMap:
    """Sequential composite: run ``r1``, leave through exit ``j`` into entry ``j`` of ``r2``."""
    A, B = r1.automaton, r2.automaton
    _check_compatible(A, B)
    if r1.arity_out != r2.arity_in:
        raise ArityMismatch(f"{r1.arity_out} exits feed {r2.arity_in} entries")
    spec = A.spec
    n1, n2 = A.n, B.n
    bridge = [[spec.zero] * n2 for _ in range(n1)]
    for x in range(n1):
        for j, target in enumerate(r2.entry):
            bridge[x][target] = spec.plus(bridge[x][target], A.finals[x, j])
    need_eps = A.eps is not None or B.eps is not None or any(
        v != spec.zero for row in bridge for v in row)
    eps = _block_eps(spec, n1, n2, A.eps, B.eps, bridge) if need_eps else None
    letters = {a: direct_sum([A.letters[a], B.letters[a]]) for a in A.alphabet}
    finals = KMatrix.from_rows(
        spec, [(spec.zero,) * B.exits] * n1 + [B.finals.row(y) for y in range(n2)], B.exits)
    C = WordAutomaton(spec=spec, n=n1 + n2, alphabet=A.alphabet, letters=letters,
                      finals=finals, eps=eps)
    return RegularWordMap(tuple(r1.entry), C)


def cotuple_regular(rs: Sequence[RegularWordMap]) -> RegularWordMap:
    """Disjoint union of single-entry maps; entry ``j`` behaves like ``rs[j]``."""
    if not rs:
        raise ValueError("cotuple of no maps")
    first = rs[0].automaton
    for r in rs:
        _check_compatible(first, r.automaton)
        if r.arity_out != rs[0].arity_out:
            raise ArityMismatch("exit arities differ")
        if r.arity_in != 1:
            raise ArityMismatch("cotuple_regular takes single-entry maps")
    spec = first.spec
    autos = [r.automaton for r in rs]
    letters = {a: direct_sum([A.letters[a] for A in autos]) for a in first.alphabet}
    if any(A.eps is not None for A in autos):
        eps = direct_sum([A.eps if A.eps is not None else KMatrix.zeros(spec, A.n, A.n) for A in autos])
    else:
        eps = None
    finals = KMatrix.from_rows(spec, [r for A in autos for r in A.finals.entries], first.exits)
    entry = []
    offset = 0
    for r in rs:
        entry.append(offset + r.entry[0])
        offset += r.automaton.n
    C = WordAutomaton(spec=spec, n=offset, alphabet=first.alphabet, letters=letters,
                      finals=finals, eps=eps)
    return RegularWordMap(tuple(entry), C)


def unit_regular(spec: SemiringSpec, alphabet: Sequence[str], q: int) -> RegularWordMap:
    """Identity on ``q``: accepts only the empty word, entry ``i`` at exit ``i``."""
    alphabet = tuple(alphabet)
    zero = KMatrix.zeros(spec, q, q)
    A = WordAutomaton(spec=spec, n=q, alphabet=alphabet, letters={a: zero for a in alphabet},
                      finals=identity(spec, q))
    return RegularWordMap(tuple(range(q)), A)


def slices_close(spec: SemiringSpec, s1: Mapping, s2: Mapping) -> bool:
    """Compare two word -> nested-tuple slices with the semiring's equality."""
    if s1.keys() != s2.keys():
        return False

    def eq(a, b):
        if isinstance(a, tuple):
            return len(a) == len(b) and all(eq(x, y) for x, y in zip(a, b))
        return spec.eq(a, b)

    return all(eq(s1[w], s2[w]) for w in s1)
