import random

import pytest
from hypothesis import given, settings, strategies as st

from regmaps.algebra import BOOLEAN, NATURAL, TROPICAL, chain_quantale
from regmaps.errors import IndexOutOfRange, ParseError, UnknownSymbol, VariableOutOfRange
from regmaps.kleisli import identity
from regmaps.tree import (Leaf, Node, TreeAutomaton, accepts, brute_force_accepts,
                          check_substitution_law, domain, eval_tree, eval_with_leaves, frontier,
                          height, parse_term, saturation_slice_trees, substitute, trees_upto)

from strategies import random_tree_automaton

T, F = True, False
x0 = Leaf(0)
P1, P2 = 0, 1  # states named 1 and 2


@pytest.fixture
def tree2():
    return TreeAutomaton.from_edges(BOOLEAN, 2, "ab", [(P2, "a", P2, P2), (P2, "b", P1, P1)], {P1: T},
                                    labels=("1", "2"))


def test_term_syntax():
    t = parse_term("(a (b x0 x0) x1)")
    assert t == Node(Node(x0, "b", x0), "a", Leaf(1))
    assert str(t) == "(a (b x0 x0) x1)"
    assert height(t) == 2
    assert domain(t) == ["", "l", "ll", "lr", "r"]
    assert frontier(t) == ["ll", "lr", "r"]
    for bad in ["(a x0)", "(a x0 x0", "x", "(a x0 x0) x0", "()"]:
        with pytest.raises(ParseError):
            parse_term(bad)


@settings(max_examples=100)
@given(st.integers(0, 10**6))
def test_term_round_trip(seed):
    rng = random.Random(seed)
    t = rng.choice(trees_upto("ab", 2, 2))
    assert parse_term(str(t)) == t


def test_trees_upto_counts():
    assert len(trees_upto("ab", 1, 0)) == 1
    assert len(trees_upto("ab", 1, 1)) == 3
    assert len(trees_upto("ab", 1, 2)) == 1 + 2 * 9


# evaluation on the worked example

def test_worked_evaluation(tree2):
    assert eval_tree(tree2, x0) == (T, F)
    b = Node(x0, "b", x0)
    assert eval_tree(tree2, b) == (F, T)
    assert eval_tree(tree2, Node(b, "a", b))[P2] is True
    assert accepts(tree2, P1, x0) is True
    assert accepts(tree2, P2, x0) is False
    assert accepts(tree2, P2, b) is True
    assert accepts(tree2, P2, Node(x0, "a", x0)) is False


def test_evaluation_errors(tree2):
    with pytest.raises(UnknownSymbol):
        eval_tree(tree2, Node(x0, "c", x0))
    with pytest.raises(VariableOutOfRange):
        eval_tree(tree2, Leaf(1))
    with pytest.raises(IndexOutOfRange):
        accepts(tree2, 2, x0)


def test_brute_force_on_worked_example(tree2):
    for t in trees_upto("ab", 1, 3):
        for i in range(2):
            assert brute_force_accepts(tree2, i, t) == accepts(tree2, i, t)


def test_brute_force_empty_delta():
    A = TreeAutomaton.from_edges(BOOLEAN, 1, "a", [], {0: T})
    assert brute_force_accepts(A, 0, Node(x0, "a", x0)) is False


def test_natural_counts_runs():
    # two edges on the same child pair add up; runs are counted with multiplicity
    A = TreeAutomaton.from_edges(NATURAL, 2, "a", [(0, "a", 0, 1, 2), (0, "a", 0, 1, 1), (0, "a", 1, 0, 3)],
                                 {0: 1, 1: 1})
    t = Node(x0, "a", x0)
    # by hand: (0,1) contributes 2+1 and (1,0) contributes 3
    assert brute_force_accepts(A, 0, t) == 6
    assert accepts(A, 0, t) == 6
    assert accepts(A, 1, t) == 0


@pytest.mark.parametrize("spec", [BOOLEAN, NATURAL, TROPICAL, chain_quantale(3)], ids=lambda s: s.name)
def test_eval_matches_brute_force(spec):
    rng = random.Random(31)
    for _ in range(20):
        A = random_tree_automaton(spec, rng, exits=rng.randint(1, 2))
        for t in trees_upto(A.alphabet, A.exits, 2):
            for i in range(A.n):
                assert accepts(A, i, t) == brute_force_accepts(A, i, t)


# saturation

def _slice_oracle(A, i, max_height):
    """Trees whose leaves x_j can be labelled j by some run from i, by run enumeration."""
    B = A.with_finals(identity(A.spec, A.n))
    return {t for t in trees_upto(A.alphabet, A.n, max_height)
            if brute_force_accepts(B, i, t) != A.spec.zero}


def test_saturation_examples(tree2):
    assert saturation_slice_trees(tree2, P2, 0) == {Leaf(P2): (F, T)}
    one = set(saturation_slice_trees(tree2, P2, 1))
    assert one == {Leaf(P2), Node(Leaf(P2), "a", Leaf(P2)), Node(Leaf(P1), "b", Leaf(P1))}
    two = set(saturation_slice_trees(tree2, P2, 2))
    assert one < two
    # substituting the height-1 trees into the leaves of (a x1 x1)
    for l in one:
        for r in one:
            assert Node(l, "a", r) in two


def test_saturation_matches_run_oracle(tree2):
    for H in range(3):
        for i in range(2):
            assert set(saturation_slice_trees(tree2, i, H)) == _slice_oracle(tree2, i, H)
    rng = random.Random(32)
    for _ in range(15):
        A = random_tree_automaton(BOOLEAN, rng, n=2)
        for i in range(A.n):
            assert set(saturation_slice_trees(A, i, 2)) == _slice_oracle(A, i, 2)


# substitution

def test_substitution_law(tree2):
    small = trees_upto("ab", 1, 2)
    assert check_substitution_law(tree2, small, small).ok


@pytest.mark.parametrize("spec", [NATURAL, TROPICAL], ids=lambda s: s.name)
def test_substitution_law_weighted(spec):
    rng = random.Random(33)
    for _ in range(5):
        A = random_tree_automaton(spec, rng, exits=2)
        outer = trees_upto(A.alphabet, 2, 1)
        inner = trees_upto(A.alphabet, 2, 1)
        assert check_substitution_law(A, outer, inner).ok


def test_substitute():
    t = Node(x0, "a", Leaf(1))
    assert substitute(t, {0: Leaf(1), 1: x0}) == Node(Leaf(1), "a", x0)


def test_boolean_evaluation_is_monotone():
    rng = random.Random(34)
    for _ in range(10):
        A = random_tree_automaton(BOOLEAN, rng)
        trees = trees_upto(A.alphabet, 1, 2)
        for lo in range(1 << A.n):
            for hi in range(1 << A.n):
                if lo & ~hi:
                    continue
                for t in trees:
                    a = eval_with_leaves(A, t, lambda j: tuple(bool(lo >> q & 1) for q in range(A.n)))
                    b = eval_with_leaves(A, t, lambda j: tuple(bool(hi >> q & 1) for q in range(A.n)))
                    assert all(y or not x for x, y in zip(a, b))
