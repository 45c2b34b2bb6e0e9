import random

import pytest

from regmaps.algebra import BOOLEAN, NATURAL, REAL, TROPICAL, chain_quantale
from regmaps.errors import NonIdempotentStar, ParseError, UnknownSymbol
from regmaps.regex import (Atom, Comp, Star, Union, Unit, Zero, compile, compiled_slice,
                           denote_slice, parse_regex)

from strategies import random_regex

a, b = Atom("a"), Atom("b")


def support(sl, spec=BOOLEAN):
    return {w for w, v in sl.items() if v != spec.zero}


def same(spec, s1, s2):
    return s1.keys() == s2.keys() and all(spec.eq(s1[w], s2[w]) for w in s1)


def test_compile_examples():
    assert support(compiled_slice(compile(Comp(a, b), BOOLEAN, "ab"), 3)) == {("a", "b")}
    assert support(compiled_slice(compile(Star(a), BOOLEAN, "ab"), 2)) == {(), ("a",), ("a", "a")}
    assert support(compiled_slice(compile(Union(a, Star(b)), BOOLEAN, "ab"), 1)) == {(), ("a",), ("b",)}


def test_compile_atoms():
    r = compile(Atom("a", 5), NATURAL, "ab")
    assert r.automaton.n == 2
    assert compiled_slice(r, 2) == {(): 0, ("a",): 5, ("b",): 0, ("a", "a"): 0, ("a", "b"): 0,
                                    ("b", "a"): 0, ("b", "b"): 0}
    assert support(compiled_slice(compile(Zero(), BOOLEAN, "a"), 3)) == set()
    assert support(compiled_slice(compile(Unit(), BOOLEAN, "a"), 3)) == {()}


def test_denote_examples():
    assert support(denote_slice(Zero(), BOOLEAN, "ab", 3)) == set()
    assert support(denote_slice(Unit(), BOOLEAN, "ab", 3)) == {()}
    assert support(denote_slice(Star(a), BOOLEAN, "a", 2)) == {(), ("a",), ("a", "a")}


def test_star_of_nested_star():
    # the fresh star entry keeps (a*.b)* from accepting a bare "a"
    e = Star(Comp(Star(a), b))
    got = support(compiled_slice(compile(e, BOOLEAN, "ab"), 4))
    assert ("a",) not in got
    assert got == support(denote_slice(e, BOOLEAN, "ab", 4))


@pytest.mark.parametrize("spec", [BOOLEAN, TROPICAL, chain_quantale(3)], ids=lambda s: s.name)
def test_compile_matches_denotation(spec):
    rng = random.Random(51)
    for _ in range(60):
        e = random_regex(rng, "ab", 3)
        assert same(spec, compiled_slice(compile(e, spec, "ab"), 4), denote_slice(e, spec, "ab", 4)), str(e)


def test_natural_weights_multiply_and_add():
    e = parse_regex("a{2}.b{3} | a{1}.b", NATURAL)
    sl = compiled_slice(compile(e, NATURAL, "ab"), 2)
    assert sl[("a", "b")] == 7
    assert same(NATURAL, sl, denote_slice(e, NATURAL, "ab", 2))


def test_natural_star_without_empty_word():
    e = Star(Union(a, Comp(a, a)))
    # compositions of n into parts 1 and 2: Fibonacci
    sl = compiled_slice(compile(e, NATURAL, "a"), 5)
    assert [sl[("a",) * k] for k in range(6)] == [1, 1, 2, 3, 5, 8]
    assert sl == denote_slice(e, NATURAL, "a", 5)


def test_non_idempotent_star_diverges():
    with pytest.raises(NonIdempotentStar):
        compile(Star(Unit()), REAL, "a")
    with pytest.raises(NonIdempotentStar):
        denote_slice(Star(Unit()), NATURAL, "a", 2, max_iter=100)


def test_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        compile(Atom("c"), BOOLEAN, "ab")
    with pytest.raises(UnknownSymbol):
        denote_slice(Atom("c"), BOOLEAN, "ab", 1)


def test_slice_laws():
    rng = random.Random(52)
    for _ in range(30):
        e, f, g = (random_regex(rng, "ab", 2) for _ in range(3))

        def sl(x):
            return compiled_slice(compile(x, BOOLEAN, "ab"), 4)

        assert sl(Comp(Unit(), e)) == sl(e) == sl(Comp(e, Unit()))
        assert sl(Comp(Comp(e, f), g)) == sl(Comp(e, Comp(f, g)))
        assert sl(Star(e)) == sl(Union(Unit(), Comp(e, Star(e))))


# concrete syntax

def test_parse_precedence():
    assert parse_regex("a|b.c*") == Union(a, Comp(b, Star(Atom("c"))))
    assert parse_regex("(a|b)*") == Star(Union(a, b))
    assert parse_regex("a**") == Star(Star(a))
    assert parse_regex("0 | 1") == Union(Zero(), Unit())
    assert parse_regex("x1") == Atom("x1")


def test_parse_weights():
    assert parse_regex("a{3}", NATURAL) == Atom("a", 3)
    assert parse_regex("a{3}") == Atom("a", "3")
    with pytest.raises(ParseError):
        parse_regex("a{-1}", NATURAL)


@pytest.mark.parametrize("text", ["", "a|", "(a", "a)", "a..b", "#", "*a"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_regex(text)


def test_printing_round_trip():
    rng = random.Random(53)
    for _ in range(100):
        e = random_regex(rng, "ab", 4)
        assert parse_regex(str(e)) == e
