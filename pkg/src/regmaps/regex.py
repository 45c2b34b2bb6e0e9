"""Regular expressions over a semiring, compiled to regular word maps.

Concrete syntax, loosest binding first::

    expr   := term ('|' term)*
    term   := factor ('.' factor)*
    factor := base '*'*
    base   := '0' | '1' | SYMBOL ['{' WEIGHT '}'] | '(' expr ')'

``SYMBOL`` is ``[A-Za-z_][A-Za-z0-9_]*``; ``WEIGHT`` is any text without
``}`` and is parsed by the semiring.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union as TUnion

from .algebra import SemiringSpec, Value
from .errors import NoConvergence, NonIdempotentStar, ParseError, UnknownSymbol
from .kleisli import KMatrix
from .word import (RegularWordMap, WordAutomaton, compose_regular, cotuple_regular,
                   unit_regular, words_upto)


@dataclass(frozen=True)
class Atom:
    sym: str
    weight: Optional[Value] = None  # None means the semiring's one

    def __str__(self):
        return self.sym if self.weight is None else f"{self.sym}{{{self.weight}}}"


@dataclass(frozen=True)
class Unit:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Zero:
    def __str__(self):
        return "0"


@dataclass(frozen=True)
class Union:
    left: "RegExpr"
    right: "RegExpr"

    def __str__(self):
        return f"({self.left}|{self.right})"


@dataclass(frozen=True)
class Comp:
    left: "RegExpr"
    right: "RegExpr"

    def __str__(self):
        return f"({self.left}.{self.right})"


@dataclass(frozen=True)
class Star:
    inner: "RegExpr"

    def __str__(self):
        return f"{self.inner}*" if isinstance(self.inner, (Atom, Unit, Zero)) else f"({self.inner})*"


RegExpr = TUnion[Atom, Unit, Zero, Union, Comp, Star]


def _atom_weight(spec, e):
    return spec.one if e.weight is None else e.weight


def check_symbols(e: RegExpr, alphabet: Sequence[str]) -> None:
    if isinstance(e, Atom):
        if e.sym not in alphabet:
            raise UnknownSymbol(f"symbol {e.sym!r} not in alphabet {list(alphabet)}")
    elif isinstance(e, (Union, Comp)):
        check_symbols(e.left, alphabet)
        check_symbols(e.right, alphabet)
    elif isinstance(e, Star):
        check_symbols(e.inner, alphabet)


def _with_extra_state(A: WordAutomaton, eps_edges, finals_rows) -> WordAutomaton:
    """Append one fresh state (index ``A.n``) with the given internal edges and finals."""
    spec = A.spec
    n = A.n + 1
    z = spec.zero
    letters = {a: KMatrix.from_rows(spec, [r + (z,) for r in m.entries] + [(z,) * n], n)
               for a, m in A.letters.items()}
    grid = [list(r) + [z] for r in A.eps.entries] if A.eps is not None else [[z] * n for _ in range(A.n)]
    grid.append([z] * n)
    for src, dst, w in eps_edges:
        grid[src][dst] = spec.plus(grid[src][dst], w)
    eps = KMatrix.from_rows(spec, grid, n)
    finals = KMatrix.from_rows(spec, finals_rows, A.exits)
    return WordAutomaton(spec=spec, n=n, alphabet=A.alphabet, letters=letters, finals=finals, eps=eps)


def compile(e: RegExpr, spec: SemiringSpec, alphabet: Sequence[str]) -> RegularWordMap:
    """Build a single-entry, single-exit regular map with the language of ``e``."""
    alphabet = tuple(alphabet)
    check_symbols(e, alphabet)
    return _compile(e, spec, alphabet)


def _compile(e, spec, alphabet):
    if isinstance(e, Atom):
        A = WordAutomaton.from_edges(spec, 2, alphabet, [(0, e.sym, 1, _atom_weight(spec, e))], {1: spec.one})
        return RegularWordMap((0,), A)
    if isinstance(e, Unit):
        return unit_regular(spec, alphabet, 1)
    if isinstance(e, Zero):
        return RegularWordMap((0,), WordAutomaton.from_edges(spec, 1, alphabet, [], {}))
    if isinstance(e, Comp):
        return compose_regular(_compile(e.left, spec, alphabet), _compile(e.right, spec, alphabet))
    if isinstance(e, Union):
        c = cotuple_regular([_compile(e.left, spec, alphabet), _compile(e.right, spec, alphabet)])
        A = c.automaton
        fan = A.n
        B = _with_extra_state(A, [(fan, c.entry[0], spec.one), (fan, c.entry[1], spec.one)],
                              list(A.finals.entries) + [(spec.zero,)])
        return RegularWordMap((fan,), B)
    if isinstance(e, Star):
        r = _compile(e.inner, spec, alphabet)
        A = r.automaton
        loop = A.n
        # fresh entry: accepting, jumps into the body; accepting body states jump back
        back = [(x, loop, A.finals[x, 0]) for x in range(A.n) if A.finals[x, 0] != spec.zero]
        B = _with_extra_state(A, [(loop, r.entry[0], spec.one)] + back,
                              [(spec.zero,)] * A.n + [(spec.one,)])
        try:
            B.eps_closure
        except NoConvergence as exc:
            raise NonIdempotentStar(f"star of {e.inner} does not converge over {spec.name}") from exc
        return RegularWordMap((loop,), B)
    raise TypeError(f"not a regular expression: {e!r}")


def denote_slice(e: RegExpr, spec: SemiringSpec, alphabet: Sequence[str], max_len: int,
                 max_iter: int = 10_000) -> dict:
    """Direct denotation of ``e`` on every word of length <= max_len."""
    alphabet = tuple(alphabet)
    check_symbols(e, alphabet)
    words = list(words_upto(alphabet, max_len))
    zero = spec.zero

    def const(f):
        return {w: f(w) for w in words}

    def comp(d1, d2):
        out = {}
        for w in words:
            acc = zero
            for k in range(len(w) + 1):
                x = d1[w[:k]]
                if x != zero:
                    acc = spec.plus(acc, spec.times(x, d2[w[k:]]))
            out[w] = acc
        return out

    def go(e):
        if isinstance(e, Atom):
            return const(lambda w: _atom_weight(spec, e) if w == (e.sym,) else zero)
        if isinstance(e, Unit):
            return const(lambda w: spec.one if w == () else zero)
        if isinstance(e, Zero):
            return const(lambda w: zero)
        if isinstance(e, Union):
            d1, d2 = go(e.left), go(e.right)
            return {w: spec.plus(d1[w], d2[w]) for w in words}
        if isinstance(e, Comp):
            return comp(go(e.left), go(e.right))
        if isinstance(e, Star):
            body = go(e.inner)
            unit = const(lambda w: spec.one if w == () else zero)
            cur = unit
            for _ in range(max_iter):
                step = comp(body, cur)
                nxt = {w: spec.plus(unit[w], step[w]) for w in words}
                if all(spec.eq(nxt[w], cur[w]) for w in words):
                    return nxt
                cur = nxt
            raise NonIdempotentStar(f"powers of {e.inner} do not stabilise over {spec.name}")
        raise TypeError(f"not a regular expression: {e!r}")

    return go(e)


def compiled_slice(r: RegularWordMap, max_len: int) -> dict:
    """word -> weight for a single-entry, single-exit map."""
    return {w: v[0][0] for w, v in r.slice(max_len).items()}


_TOKEN = re.compile(r"\s*(?:(?P<sym>[A-Za-z_][A-Za-z0-9_]*)|(?P<digit>[01])(?![0-9])|(?P<op>[|.*()])|(?P<weight>\{[^}]*\}))")


def parse_regex(text: str, spec: Optional[SemiringSpec] = None) -> RegExpr:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(1, f"regex: unexpected character at column {pos + 1}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    k = 0

    def peek():
        return tokens[k] if k < len(tokens) else (None, None, len(text))

    def take():
        nonlocal k
        tok = peek()
        k += 1
        return tok

    def fail(msg, col):
        raise ParseError(1, f"regex: {msg} at column {col + 1}")

    def expr():
        e = term()
        while peek()[:2] == ("op", "|"):
            take()
            e = Union(e, term())
        return e

    def term():
        e = factor()
        while peek()[:2] == ("op", "."):
            take()
            e = Comp(e, factor())
        return e

    def factor():
        e = base()
        while peek()[:2] == ("op", "*"):
            take()
            e = Star(e)
        return e

    def base():
        kind, val, col = take()
        if kind == "digit":
            return Unit() if val == "1" else Zero()
        if kind == "sym":
            if peek()[0] == "weight":
                _, w, wcol = take()
                raw = w[1:-1].strip()
                if spec is None:
                    return Atom(val, raw)
                try:
                    return Atom(val, spec.parse_value(raw))
                except ValueError as exc:
                    fail(f"bad weight {raw!r} ({exc})", wcol)
            return Atom(val)
        if (kind, val) == ("op", "("):
            e = expr()
            kind2, val2, col2 = take()
            if (kind2, val2) != ("op", ")"):
                fail("expected ')'", col2)
            return e
        if kind is None:
            fail("unexpected end of expression", col)
        fail(f"unexpected {val!r}", col)

    e = expr()
    if k != len(tokens):
        fail(f"unexpected {peek()[1]!r}", peek()[2])
    return e
