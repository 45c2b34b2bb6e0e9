"""Finite theories of state-set functions for boolean automata.

A term (word or tree) acts on sets of states: it sends ``X`` to the set of
states from which the term can be read with every exit landing in ``X``.
The functions arising this way are finitely many, and a term is accepted
from ``i`` exactly when ``i`` lies in its function applied to the final
states.  Subsets are bitmasks: bit ``q`` set means state ``q`` is present.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import (ArityMismatch, CapExceeded, DimensionMismatch, IndexOutOfRange, NotBoolean,
                     UnknownSymbol, VariableOutOfRange)
from .kleisli import compose
from .tree import Leaf, TreeAutomaton
from .word import WordAutomaton, as_word


@dataclass(frozen=True)
class StateSetFunction:
    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != 1 << self.n:
            raise DimensionMismatch(f"table of length {len(self.table)} for {self.n} states")

    def __call__(self, subset: int) -> int:
        return self.table[subset]

    def is_monotone(self) -> bool:
        t = self.table
        for x in range(len(t)):
            for q in range(self.n):
                bigger = x | (1 << q)
                if t[x] & ~t[bigger]:
                    return False
        return True


def identity_function(n: int) -> StateSetFunction:
    return StateSetFunction(n, tuple(range(1 << n)))


def constant_function(n: int, value: int = 0) -> StateSetFunction:
    return StateSetFunction(n, (value,) * (1 << n))


def compose_functions(f: StateSetFunction, g: StateSetFunction) -> StateSetFunction:
    """``f . g``: apply ``g`` first."""
    if f.n != g.n:
        raise DimensionMismatch(f"{f.n} vs {g.n} states")
    ft = f.table
    return StateSetFunction(f.n, tuple(ft[y] for y in g.table))


def subset_bits(states) -> int:
    bits = 0
    for q in states:
        bits |= 1 << q
    return bits


def subset_members(bits: int) -> list[int]:
    out = []
    q = 0
    while bits:
        if bits & 1:
            out.append(q)
        bits >>= 1
        q += 1
    return out


def render_subset(bits: int, labels: Optional[Sequence[str]] = None) -> str:
    names = [labels[q] if labels else f"q{q}" for q in subset_members(bits)]
    return "{" + ",".join(names) + "}"


@dataclass(frozen=True)
class FiniteTheory:
    """Closure of the identity under a family of term-forming operations."""

    n: int
    elements: tuple[StateSetFunction, ...]
    generator_names: dict = field(default_factory=dict)

    def __contains__(self, g) -> bool:
        return g in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {g: k for k, g in enumerate(self.elements)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def name(self, g: StateSetFunction) -> str:
        if g in self.generator_names:
            return self.generator_names[g]
        return f"e{self._index[g]}"

    def names(self) -> list[str]:
        return [self.name(g) for g in self.elements]

    def by_name(self, name: str) -> StateSetFunction:
        for g in self.elements:
            if self.name(g) == name:
                return g
        raise KeyError(name)

    def to_tsv(self, labels: Optional[Sequence[str]] = None) -> str:
        lines = ["\t".join(["input"] + self.names())]
        for x in range(1 << self.n):
            cells = [render_subset(x, labels)] + [render_subset(g(x), labels) for g in self.elements]
            lines.append("\t".join(cells))
        return "\n".join(lines)


def _require_boolean(A):
    if A.spec.name != "boolean":
        raise NotBoolean(f"recognition needs the boolean semiring, got {A.spec.name}")


# per-automaton memo tables; automata are immutable so entries never go stale
_letter_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
_term_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _mask_function(n: int, masks: Sequence[int]) -> StateSetFunction:
    # q is in f(X) iff masks[q] meets X
    return StateSetFunction(n, tuple(
        sum(1 << q for q in range(n) if masks[q] & x) for x in range(1 << n)))


def word_letter_action(A: WordAutomaton, a: str) -> StateSetFunction:
    """Predecessors through ``a``: ``{q | q reaches some q' in X reading a}``.

    Internal moves are absorbed on both sides of the letter.
    """
    _require_boolean(A)
    if a not in A.letters:
        raise UnknownSymbol(f"symbol {a!r} not in alphabet {list(A.alphabet)}")
    cache = _letter_cache.setdefault(A, {})
    if a not in cache:
        m = compose(A.eps_closure, compose(A.letters[a], A.eps_closure))
        masks = [subset_bits(j for j in range(A.n) if m[q, j]) for q in range(A.n)]
        cache[a] = _mask_function(A.n, masks)
    return cache[a]


def _pair_table(A: TreeAutomaton, sym: str) -> tuple:
    """``table[y1][y2]``: states with a ``sym`` transition into ``y1 x y2``."""
    cache = _letter_cache.setdefault(A, {})
    key = ("pairs", sym)
    if key not in cache:
        trans = [(q, q1, q2) for q, q1, q2, w in A.transitions(sym) if w]
        size = 1 << A.n
        cache[key] = tuple(
            tuple(sum({1 << q for q, q1, q2 in trans if (y1 >> q1) & 1 and (y2 >> q2) & 1})
                  for y2 in range(size))
            for y1 in range(size))
    return cache[key]


def tree_combine(A: TreeAutomaton, sym: str, g1: StateSetFunction, g2: StateSetFunction
                 ) -> StateSetFunction:
    """``X -> {q | q -sym-> (q1, q2) with q1 in g1(X), q2 in g2(X)}``."""
    _require_boolean(A)
    if sym not in A.alphabet:
        raise UnknownSymbol(f"symbol {sym!r} not in alphabet {list(A.alphabet)}")
    if g1.n != A.n or g2.n != A.n:
        raise DimensionMismatch(f"functions on {g1.n}/{g2.n} states, automaton has {A.n}")
    pairs = _pair_table(A, sym)
    return StateSetFunction(A.n, tuple(pairs[y1][y2] for y1, y2 in zip(g1.table, g2.table)))


def generate_theory(A: Union[WordAutomaton, TreeAutomaton], cap: int = 100_000) -> FiniteTheory:
    """Least set of state-set functions containing the identity and closed
    under the automaton's term formation.

    Words: ``g -> a_A . g`` for each letter.  Trees: ``(g1, g2) ->
    combine(sym, g1, g2)`` for every ordered pair and symbol.
    """
    _require_boolean(A)
    n = A.n
    ident = identity_function(n)
    elements = [ident]
    seen = {ident}
    names = {ident: "id"}

    def add(g):
        if g not in seen:
            if len(elements) >= cap:
                raise CapExceeded(f"more than {cap} elements")
            seen.add(g)
            elements.append(g)
            return True
        return False

    if isinstance(A, WordAutomaton):
        actions = [(a, word_letter_action(A, a)) for a in A.alphabet]
        for a, f in actions:
            names.setdefault(f, f"{a}_A")
        k = 0
        while k < len(elements):
            g = elements[k]
            for _a, f in actions:
                add(compose_functions(f, g))
            k += 1
    else:
        for s in A.alphabet:
            names.setdefault(tree_combine(A, s, ident, ident), f"{s}_A")
        # work on raw tables; wrapping every candidate would dominate the cost
        pair_tables = [_pair_table(A, s) for s in A.alphabet]
        tables = [ident.table]
        known = {ident.table}
        k = 0
        while k < len(tables):
            g = tables[k]
            # pair the new element with everything found so far, both orders
            for h in tables[: k + 1]:
                gh = tuple(zip(g, h))
                for pt in pair_tables:
                    for cand in (tuple(pt[y1][y2] for y1, y2 in gh),
                                 tuple(pt[y2][y1] for y1, y2 in gh)):
                        if cand not in known:
                            if len(tables) >= cap:
                                raise CapExceeded(f"more than {cap} elements")
                            known.add(cand)
                            tables.append(cand)
            k += 1
        elements = [StateSetFunction(n, t) for t in tables]
        seen = set(elements)
    return FiniteTheory(n, tuple(elements), {g: nm for g, nm in names.items() if g in seen})


def theory_morphism(A: Union[WordAutomaton, TreeAutomaton], term) -> StateSetFunction:
    """The state-set function of a word or a one-variable tree."""
    _require_boolean(A)
    if isinstance(A, WordAutomaton):
        w = as_word(term, A.alphabet)
        f = identity_function(A.n)
        for a in reversed(w):
            f = compose_functions(word_letter_action(A, a), f)
        return f
    cache = _term_cache.setdefault(A, {})
    ident = identity_function(A.n)

    def go(t):
        if isinstance(t, Leaf):
            if t.var != 0:
                raise VariableOutOfRange(f"theory terms use the single variable x0, got x{t.var}")
            return ident
        hit = cache.get(t)
        if hit is None:
            hit = tree_combine(A, t.sym, go(t.left), go(t.right))
            cache[t] = hit
        return hit

    return go(term)


def final_set(A: Union[WordAutomaton, TreeAutomaton]) -> int:
    """Final states as a bitmask; internal moves are absorbed for word automata."""
    _require_boolean(A)
    if A.exits != 1:
        raise ArityMismatch(f"recognition needs a single exit, got {A.exits}")
    if isinstance(A, WordAutomaton):
        closure = A.eps_closure
        return subset_bits(q for q in range(A.n)
                           if any(closure[q, j] and A.finals[j, 0] for j in range(A.n)))
    return subset_bits(q for q in range(A.n) if A.finals[q, 0])


def recognize_membership(A: Union[WordAutomaton, TreeAutomaton], i: int, term) -> bool:
    if not (isinstance(i, int) and 0 <= i < A.n):
        raise IndexOutOfRange(f"state {i!r} outside 0..{A.n - 1}")
    return bool((theory_morphism(A, term)(final_set(A)) >> i) & 1)


@dataclass(frozen=True)
class RecognizingSubset:
    membership: tuple[StateSetFunction, ...]
    # elements g with g(F) == {i}
    equality: tuple[StateSetFunction, ...]

    def __iter__(self):
        return iter(self.membership)

    def __len__(self):
        return len(self.membership)

    def __contains__(self, g):
        return g in self.membership


def recognizing_subset(A: Union[WordAutomaton, TreeAutomaton], i: int,
                       theory: Optional[FiniteTheory] = None, cap: int = 100_000
                       ) -> RecognizingSubset:
    if not (isinstance(i, int) and 0 <= i < A.n):
        raise IndexOutOfRange(f"state {i!r} outside 0..{A.n - 1}")
    if theory is None:
        theory = generate_theory(A, cap)
    F = final_set(A)
    return RecognizingSubset(
        membership=tuple(g for g in theory if (g(F) >> i) & 1),
        equality=tuple(g for g in theory if g(F) == 1 << i))
