"""Law suites run against a concrete automaton (``aut laws``)."""
from __future__ import annotations

import random
from typing import Union

from . import kleisli as K
from .report import LawReport, collect, law
from .theory import recognize_membership
from .tree import Leaf, TreeAutomaton, accepts, check_substitution_law, saturation_slice_trees, trees_upto
from .word import (WordAutomaton, check_em_laws, reverse_edges, run_dual, saturation_slice, weight,
                   words_upto)

SUITES = ("duality", "em", "saturation", "recognition")

Automaton = Union[WordAutomaton, TreeAutomaton]


def random_base_map(spec, rng: random.Random, p: int, q: int) -> K.KMatrix:
    return K.base_map(spec, [rng.randrange(q) for _ in range(p)], p, q)


def random_matrix(spec, rng: random.Random, p: int, q: int, density: float = 0.4) -> K.KMatrix:
    return K.KMatrix.build(spec, p, q, lambda i, j: spec.sample(rng) if rng.random() < density else spec.zero)


def check_duality(spec, rng: random.Random, samples: int = 200, max_size: int = 4) -> LawReport:
    """Adjunction of base maps and the involution/order/composition laws of transpose."""
    unit = law("unit: id <= f;f_")
    counit = law("counit: f_;f <= id")
    invol = law("involution: (f_)_ = f")
    rev = law("transpose reverses composition")
    order = law("transpose preserves order")
    for _ in range(samples):
        p, q, r = (rng.randint(1, max_size) for _ in range(3))
        f = random_base_map(spec, rng, p, q)
        g = random_base_map(spec, rng, q, r)
        adj = K.check_adjunction(f)
        unit.check(adj["unit: id <= f;f_"].passed, f)
        counit.check(adj["counit: f_;f <= id"].passed, f)
        invol.check(K.transpose(K.transpose(f)) == f, f)
        # general matrices too, not just base maps
        h = random_matrix(spec, rng, p, q)
        k = random_matrix(spec, rng, q, r)
        for a, b in ((f, g), (h, k)):
            rev.check(K.close(K.transpose(K.compose(a, b)), K.compose(K.transpose(b), K.transpose(a))), (a, b))
        bigger = K.add(h, random_matrix(spec, rng, p, q))
        if K.leq(h, bigger):
            order.check(K.leq(K.transpose(h), K.transpose(bigger)), (h, bigger))
    return collect(unit, counit, invol, rev, order)


def check_star_laws(alpha: K.KMatrix) -> LawReport:
    s = K.star(alpha)
    ident = K.identity(alpha.spec, alpha.rows)
    refl = law("star: id <= a*")
    ext = law("star: a <= a*")
    trans = law("star: a*;a* <= a*")
    fix = law("star: a* = id + a;a*")
    refl.check(K.leq(ident, s), s)
    ext.check(K.leq(alpha, s), (alpha, s))
    ss = K.compose(s, s)
    trans.check(K.leq(ss, s), (s, ss))
    fix.check(K.close(K.add(ident, K.compose(alpha, s)), s), s)
    laws = [refl, ext, fix]
    if alpha.spec.idempotent_plus:
        laws.insert(2, trans)
    return collect(*laws)


def _duality_word_lifting(A: WordAutomaton, max_len: int) -> LawReport:
    lw = law("lifting: run(w)_ = run_reversed(reverse w)")
    R = reverse_edges(A)
    for w in words_upto(A.alphabet, max_len):
        lhs = K.transpose(run_dual(A, w))
        rhs = run_dual(R, tuple(reversed(w)))
        lw.check(K.close(lhs, rhs), w)
    return collect(lw)


def duality_suite(A: Automaton, rng: random.Random, samples: int) -> LawReport:
    report = check_duality(A.spec, rng, samples, max_size=max(2, A.n))
    if isinstance(A, WordAutomaton):
        report.extend(_duality_word_lifting(A, 3))
    return report


def em_suite(A: Automaton) -> LawReport:
    if isinstance(A, WordAutomaton):
        return check_em_laws(A, list(words_upto(A.alphabet, 2 if len(A.alphabet) > 3 else 3)))
    small = trees_upto(A.alphabet, A.exits, 1)
    return check_substitution_law(A, small, small)


def saturation_suite(A: Automaton, max_len: int = 3) -> LawReport:
    spec = A.spec
    report = LawReport()
    reflexive = law("slice: unit at i in the empty-word row" if isinstance(A, WordAutomaton)
                    else "slice: leaf x_i present with unit weight")
    grows = law("slice: monotone in the bound")
    for i in range(A.n):
        if isinstance(A, WordAutomaton):
            prev = None
            for L in range(max_len + 1):
                s = saturation_slice(A, i, L)
                if prev is not None:
                    grows.check(all(w in s for w in prev), (i, L))
                prev = s
            reflexive.check(spec.leq(spec.one, s[()][i]), i)
        else:
            prev = None
            for H in range(min(max_len, 2) + 1):
                s = saturation_slice_trees(A, i, H)
                if prev is not None:
                    grows.check(all(t in s for t in prev), (i, H))
                prev = s
            reflexive.check(Leaf(i) in s and spec.eq(s[Leaf(i)][i], spec.one), i)
    report.extend(collect(reflexive, grows))
    if isinstance(A, WordAutomaton) and A.eps is not None:
        report.extend(check_star_laws(A.eps))
    return report


def recognition_suite(A: Automaton, max_len: int = 5, max_height: int = 2) -> LawReport:
    lw = law("recognition: membership = semantics")
    if isinstance(A, WordAutomaton):
        for i in range(A.n):
            for w in words_upto(A.alphabet, max_len):
                direct = weight(A, i, w)[0] != A.spec.zero
                lw.check(recognize_membership(A, i, w) == direct, (i, w))
    else:
        for t in trees_upto(A.alphabet, 1, max_height):
            for i in range(A.n):
                lw.check(recognize_membership(A, i, t) == bool(accepts(A, i, t)), (i, str(t)))
    return collect(lw)
