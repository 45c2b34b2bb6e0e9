"""Binary trees and weighted bottom-up tree automata."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .algebra import SemiringSpec, Value, same_spec
from .errors import (IndexOutOfRange, ParseError, ResultTooLarge, SpecMismatch, UnknownSymbol,
                     VariableOutOfRange, DimensionMismatch)
from .kleisli import KMatrix, identity
from .report import LawReport, collect, law


@dataclass(frozen=True)
class Leaf:
    var: int

    def __str__(self):
        return f"x{self.var}"


@dataclass(frozen=True)
class Node:
    left: "Tree"
    sym: str
    right: "Tree"

    def __str__(self):
        return f"({self.sym} {self.left} {self.right})"


Tree = Union[Leaf, Node]


def height(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + max(height(t.left), height(t.right))


def domain(t: Tree, prefix: str = "") -> list[str]:
    """Node addresses as words over ``l``/``r``, in preorder."""
    if isinstance(t, Leaf):
        return [prefix]
    return [prefix] + domain(t.left, prefix + "l") + domain(t.right, prefix + "r")


def frontier(t: Tree) -> list[str]:
    """Addresses of the leaves."""
    return [a for a in domain(t) if isinstance(subtree(t, a), Leaf)]


def inner(t: Tree) -> list[str]:
    return [a for a in domain(t) if isinstance(subtree(t, a), Node)]


def subtree(t: Tree, address: str) -> Tree:
    for c in address:
        if not isinstance(t, Node):
            raise KeyError(address)
        t = t.left if c == "l" else t.right
    return t


def variables(t: Tree) -> set[int]:
    if isinstance(t, Leaf):
        return {t.var}
    return variables(t.left) | variables(t.right)


def symbols(t: Tree) -> set[str]:
    if isinstance(t, Leaf):
        return set()
    return {t.sym} | symbols(t.left) | symbols(t.right)


def substitute(t: Tree, subst: Mapping[int, Tree] | Sequence[Tree]) -> Tree:
    """Replace every leaf ``x_j`` by ``subst[j]``."""
    if isinstance(t, Leaf):
        return subst[t.var]
    return Node(substitute(t.left, subst), t.sym, substitute(t.right, subst))


def trees_upto(alphabet: Sequence[str], nvars: int, max_height: int) -> list[Tree]:
    """Every complete tree of height <= max_height over ``nvars`` variables."""
    layer = [Leaf(j) for j in range(nvars)]
    for _ in range(max_height):
        layer = [Leaf(j) for j in range(nvars)] + [
            Node(l, s, r) for s in alphabet for l in layer for r in layer]
    return layer


def parse_term(text: str) -> Tree:
    """Parse ``term := x<digits> | ( <sym> <term> <term> )``."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def fail(msg):
        raise ParseError(1, f"term: {msg}")

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            fail("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] in "()":
                fail("expected a symbol after '('")
            sym = tokens[pos]
            pos += 1
            left = parse()
            right = parse()
            if pos >= len(tokens) or tokens[pos] != ")":
                fail("expected ')'")
            pos += 1
            return Node(left, sym, right)
        if tok[0] == "x" and tok[1:].isdigit():
            return Leaf(int(tok[1:]))
        fail(f"unexpected token {tok!r}")

    t = parse()
    if pos != len(tokens):
        fail(f"trailing input {' '.join(tokens[pos:])!r}")
    return t


def format_term(t: Tree) -> str:
    return str(t)


@dataclass(frozen=True, eq=False)
class TreeAutomaton:
    """``delta[(q, sym)]`` maps child pairs ``(q1, q2)`` to weights."""

    spec: SemiringSpec
    n: int
    alphabet: tuple[str, ...]
    delta: Mapping[tuple[int, str], Mapping[tuple[int, int], Value]]
    finals: KMatrix
    labels: tuple[str, ...] = ()
    entries: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet symbols must be distinct")
        for (q, s), pairs in self.delta.items():
            if s not in self.alphabet:
                raise UnknownSymbol(f"transition symbol {s!r} not in alphabet")
            for (q1, q2), w in pairs.items():
                if not all(0 <= x < self.n for x in (q, q1, q2)):
                    raise IndexOutOfRange(f"transition {(q, s, q1, q2)}")
        if not same_spec(self.finals.spec, self.spec):
            raise SpecMismatch("finals spec")
        if self.finals.rows != self.n:
            raise DimensionMismatch(f"finals has {self.finals.rows} rows, expected {self.n}")
        if self.labels and len(self.labels) != self.n:
            raise ValueError("one label per state")

    @classmethod
    def from_edges(cls, spec: SemiringSpec, n: int, alphabet: Sequence[str],
                   edges: Iterable[tuple], finals: Mapping[int, Value] | Iterable[tuple],
                   exits: int = 1, **kw) -> "TreeAutomaton":
        """Build from ``(src, sym, left, right[, weight])`` edges; duplicates add up."""
        alphabet = tuple(alphabet)
        delta: dict = {}
        for e in edges:
            q, s, q1, q2 = e[:4]
            w = e[4] if len(e) > 4 else spec.one
            if s not in alphabet:
                raise UnknownSymbol(f"edge symbol {s!r} not in alphabet")
            pairs = delta.setdefault((q, s), {})
            pairs[(q1, q2)] = spec.plus(pairs.get((q1, q2), spec.zero), w)
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
        return cls(spec=spec, n=n, alphabet=alphabet, delta=delta,
                   finals=KMatrix.from_rows(spec, fin, exits), **kw)

    @property
    def exits(self) -> int:
        return self.finals.cols

    def label(self, q: int) -> str:
        return self.labels[q] if self.labels else f"q{q}"

    def transitions(self, sym: str) -> list[tuple[int, int, int, Value]]:
        """``(q, q1, q2, weight)`` for every non-zero transition on ``sym``."""
        zero = self.spec.zero
        return [(q, q1, q2, w) for (q, s), pairs in self.delta.items() if s == sym
                for (q1, q2), w in pairs.items() if w != zero]

    def weight_of(self, q: int, sym: str, q1: int, q2: int) -> Value:
        return self.delta.get((q, sym), {}).get((q1, q2), self.spec.zero)

    def with_finals(self, finals: KMatrix) -> "TreeAutomaton":
        return TreeAutomaton(self.spec, self.n, self.alphabet, self.delta, finals,
                             self.labels, self.entries)


def _check_state(A, i):
    if not (isinstance(i, int) and 0 <= i < A.n):
        raise IndexOutOfRange(f"state {i!r} outside 0..{A.n - 1}")


def eval_with_leaves(A: TreeAutomaton, t: Tree, leaf_value) -> tuple:
    """Bottom-up value of ``t`` with ``leaf_value(j)`` giving the vector at leaf ``x_j``."""
    spec = A.spec
    plus, times, zero = spec.plus, spec.times, spec.zero
    trans = {}

    def go(s):
        if isinstance(s, Leaf):
            return tuple(leaf_value(s.var))
        if s.sym not in A.alphabet:
            raise UnknownSymbol(f"symbol {s.sym!r} not in alphabet {list(A.alphabet)}")
        vl = go(s.left)
        vr = go(s.right)
        if s.sym not in trans:
            trans[s.sym] = A.transitions(s.sym)
        out = [zero] * A.n
        for q, q1, q2, w in trans[s.sym]:
            x = vl[q1]
            if x == zero:
                continue
            y = vr[q2]
            if y == zero:
                continue
            out[q] = plus(out[q], times(times(w, x), y))
        return tuple(out)

    return go(t)


def eval_tree(A: TreeAutomaton, t: Tree) -> tuple:
    """Weight with which each state accepts ``t``; leaf ``x_j`` reads exit column ``j``."""
    p = A.exits

    def leaf(j):
        if not 0 <= j < p:
            raise VariableOutOfRange(f"variable x{j} but only {p} exits")
        return A.finals.column(j)

    return eval_with_leaves(A, t, leaf)


def accepts(A: TreeAutomaton, i: int, t: Tree) -> Value:
    _check_state(A, i)
    return eval_tree(A, t)[i]


def brute_force_accepts(A: TreeAutomaton, i: int, t: Tree) -> Value:
    """Sum over runs: state labellings of every node with the root labelled ``i``.

    Each labelling contributes the product of its transition weights at inner
    nodes and exit weights at leaves.  Labellings through a zero-weight
    transition contribute nothing and are skipped.
    """
    _check_state(A, i)
    spec = A.spec
    for v in variables(t):
        if not 0 <= v < A.exits:
            raise VariableOutOfRange(f"variable x{v} but only {A.exits} exits")
    for s in symbols(t):
        if s not in A.alphabet:
            raise UnknownSymbol(f"symbol {s!r} not in alphabet")
    addresses = domain(t)
    nodes = {a: subtree(t, a) for a in addresses}
    inner_addrs = [a for a in addresses if isinstance(nodes[a], Node)]
    pairs = list(itertools.product(range(A.n), repeat=2))
    total = spec.zero

    def run_weight(labels):
        acc = spec.one
        for a in addresses:
            s = nodes[a]
            if isinstance(s, Node):
                acc = spec.times(acc, A.weight_of(labels[a], s.sym, labels[a + "l"], labels[a + "r"]))
            else:
                acc = spec.times(acc, A.finals[labels[a], s.var])
        return acc

    def extend(k, labels):
        nonlocal total
        if k == len(inner_addrs):
            total = spec.plus(total, run_weight(labels))
            return
        a = inner_addrs[k]
        s = nodes[a]
        for q1, q2 in pairs:
            if A.weight_of(labels[a], s.sym, q1, q2) == spec.zero:
                continue
            labels[a + "l"] = q1
            labels[a + "r"] = q2
            extend(k + 1, labels)
        labels.pop(a + "l", None)
        labels.pop(a + "r", None)

    extend(0, {"": i})
    return total


def saturation_slice_trees(A: TreeAutomaton, i: int, max_height: int, cap: int = 10**6) -> dict:
    """Trees in the saturated transition from ``i`` up to ``max_height``.

    Leaves ``x_j`` stand for state ``j``.  Candidate trees are grown layer by
    layer: layer ``k+1`` at state ``q`` is ``x_q`` plus ``(l, s, r)`` for
    every transition ``q -s-> (q1, q2)`` with ``l``, ``r`` from layer ``k``
    at ``q1``, ``q2``.  Each candidate is then weighted by bottom-up
    evaluation with unit leaf vectors, and those with non-zero weight at
    ``i`` are returned.
    """
    _check_state(A, i)
    spec = A.spec
    trans = {s: A.transitions(s) for s in A.alphabet}
    layer = [[Leaf(q)] for q in range(A.n)]
    total = A.n
    for _ in range(max_height):
        nxt = []
        total = 0
        for q in range(A.n):
            seen = {Leaf(q)}
            out = [Leaf(q)]
            for s in A.alphabet:
                for src, q1, q2, _w in trans[s]:
                    if src != q:
                        continue
                    if total + len(out) + len(layer[q1]) * len(layer[q2]) > cap:
                        raise ResultTooLarge(f"more than {cap} trees")
                    for l in layer[q1]:
                        for r in layer[q2]:
                            t = Node(l, s, r)
                            if t not in seen:
                                seen.add(t)
                                out.append(t)
            nxt.append(out)
            total += len(out)
        layer = nxt
    unit = identity(spec, A.n)
    result = {}
    for t in layer[i]:
        v = eval_with_leaves(A, t, unit.row)
        if v[i] != spec.zero:
            result[t] = v
    return result


def check_substitution_law(A: TreeAutomaton, outer: Iterable[Tree], inner_trees: Sequence[Tree],
                           ) -> LawReport:
    """Evaluating ``t[s_j]`` equals evaluating ``t`` with leaf ``j`` valued ``eval(s_j)``.

    Every variable of every outer tree is substituted by each inner tree in
    turn (all leaves of a given variable get the same tree).
    """
    lw = law("substitution: eval(t[s]) = eval_t(eval(s))")
    inner_vals = [eval_tree(A, s) for s in inner_trees]
    for t in outer:
        vs = sorted(variables(t))
        for choice in itertools.product(range(len(inner_trees)), repeat=len(vs)):
            subst = dict(zip(vs, (inner_trees[c] for c in choice)))
            vals = dict(zip(vs, (inner_vals[c] for c in choice)))
            lhs = eval_tree(A, substitute(t, subst))
            rhs = eval_with_leaves(A, t, vals.__getitem__)
            ok = all(A.spec.eq(x, y) for x, y in zip(lhs, rhs))
            lw.check(ok, (str(t), {v: str(s) for v, s in subst.items()}))
    return collect(lw)
