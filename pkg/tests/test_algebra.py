import math
import operator
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from regmaps import algebra
from regmaps.algebra import (BOOLEAN, NATURAL, REAL, TROPICAL, UNIT_INTERVAL, SemiringSpec,
                             ascending_sup, by_name, chain_quantale, check_algebra_laws,
                             check_quantale_laws)
from regmaps.errors import NoConvergence, NotAscending, SamplerMissing

BUILTIN = [BOOLEAN, NATURAL, TROPICAL, REAL, UNIT_INTERVAL, chain_quantale(2), chain_quantale(4),
           chain_quantale(4, "lukasiewicz")]


@pytest.mark.parametrize("spec", BUILTIN, ids=lambda s: s.name)
def test_builtin_specs_satisfy_laws(spec):
    report = check_algebra_laws(spec, 500, 7)
    assert report.ok, report.render()


@pytest.mark.parametrize("spec", [s for s in BUILTIN if s.idempotent_plus], ids=lambda s: s.name)
def test_idempotent_specs_are_quantales(spec):
    assert "plus_idempotent" in [r.name for r in check_algebra_laws(spec, 100, 1)]
    assert check_quantale_laws(spec, 300, 3).ok


def test_boolean_and_natural_examples():
    assert check_algebra_laws(BOOLEAN, 100, 7).ok
    assert check_algebra_laws(NATURAL, 100, 7)["zerosumfree"].passed


def _integers():
    return SemiringSpec(name="integers", plus=operator.add, times=operator.mul, zero=0, one=1,
                        leq=operator.le, sampler=lambda rng: rng.randint(-5, 5))


def test_integer_addition_breaks_zerosumfree():
    report = check_algebra_laws(_integers(), 100, 7)
    zsf = report["zerosumfree"]
    assert not zsf.passed
    x, y = zsf.counterexample
    assert x + y == 0 and x != 0


def test_missing_sampler():
    spec = SemiringSpec(name="opaque", plus=operator.add, times=operator.mul, zero=0, one=1,
                        leq=operator.le)
    with pytest.raises(SamplerMissing):
        check_algebra_laws(spec, 10, 0)


def test_non_associative_rounded_product_is_caught():
    # rounding the real product to the nearest grid point is not associative
    k = 4

    def rounded(x, y):
        return Fraction(round(x * y * (k - 1)), k - 1)

    elems = tuple(Fraction(i, k - 1) for i in range(k))
    spec = SemiringSpec(name="rounded", plus=max, times=rounded, zero=elems[0], one=elems[-1],
                        leq=operator.le, idempotent_plus=True, elements=elems)
    assert not check_algebra_laws(spec)["times_associative"].passed


def test_tropical_order_is_reversed():
    assert TROPICAL.leq(math.inf, 3)
    assert TROPICAL.leq(5, 2)
    assert not TROPICAL.leq(2, 5)
    assert TROPICAL.plus(2, 5) == 2 and TROPICAL.times(2, 5) == 7


def test_natural_saturates():
    assert NATURAL.times(0, math.inf) == 0
    assert NATURAL.plus(3, math.inf) == math.inf
    assert NATURAL.times(2, math.inf) == math.inf


def test_chain_quantale_carrier():
    c = chain_quantale(4)
    assert c.elements == tuple(Fraction(i, 4) for i in range(5))
    assert c.times(Fraction(1, 4), Fraction(3, 4)) == Fraction(1, 4)
    luk = chain_quantale(4, "lukasiewicz")
    assert luk.times(Fraction(3, 4), Fraction(3, 4)) == Fraction(1, 2)
    assert luk.times(Fraction(1, 4), Fraction(3, 4)) == 0
    with pytest.raises(ValueError):
        chain_quantale(0)
    with pytest.raises(ValueError):
        chain_quantale(3, "drastic")


@pytest.mark.parametrize("token,name", [("boolean", "boolean"), ("natural", "natural"),
                                        ("tropical", "tropical"), ("real", "real"),
                                        ("unit-interval", "unit-interval"), ("chain:3", "chain:3"),
                                        ("chain:5:lukasiewicz", "chain:5:lukasiewicz")])
def test_by_name(token, name):
    assert by_name(token).name == name


def test_by_name_unknown():
    with pytest.raises(KeyError):
        by_name("octonions")


def test_parse_and_format_round_trip():
    for spec, text in [(BOOLEAN, "true"), (NATURAL, "7"), (NATURAL, "inf"), (TROPICAL, "inf"),
                       (REAL, "0.25"), (chain_quantale(4), "3/4")]:
        assert spec.format_value(spec.parse_value(text)) == text


# ascending suprema

def test_ascending_sup_boolean():
    assert ascending_sup(BOOLEAN, [False, True, True, True]) is True


def test_ascending_sup_geometric():
    chain = (1 - 2.0 ** -k for k in range(10_000))
    assert abs(ascending_sup(REAL, chain) - 1.0) <= 1e-9


def test_ascending_sup_constant_chain():
    c = chain_quantale(4)
    assert ascending_sup(c, [Fraction(1, 2)] * 5) == Fraction(1, 2)


def test_ascending_sup_rejects_descending():
    with pytest.raises(NotAscending):
        ascending_sup(NATURAL, [3, 2, 2])


def test_ascending_sup_divergent():
    with pytest.raises(NoConvergence):
        ascending_sup(NATURAL, iter(range(10**6)), max_iter=100)


@given(st.sets(st.integers(min_value=0, max_value=50), min_size=1, max_size=10))
def test_ascending_sup_of_strict_chain_then_constant(xs):
    chain = sorted(xs)
    s = ascending_sup(NATURAL, chain + [chain[-1]] * 3)
    assert s == chain[-1]
    assert all(NATURAL.leq(x, s) for x in chain)


def test_ascending_sup_stops_at_first_repeat():
    assert ascending_sup(NATURAL, [0, 0, 1]) == 0


@given(st.integers(min_value=0, max_value=4), st.integers(min_value=0, max_value=4),
       st.integers(min_value=0, max_value=4))
def test_chain_distributes(a, b, c):
    spec = chain_quantale(4)
    x, y, z = (spec.elements[i] for i in (a, b, c))
    assert spec.times(x, spec.plus(y, z)) == spec.plus(spec.times(x, y), spec.times(x, z))


def test_samplers_stay_in_carrier():
    rng = random.Random(0)
    for spec in (NATURAL, TROPICAL, REAL, UNIT_INTERVAL):
        assert all(spec.contains(spec.sample(rng)) for _ in range(200))


def test_module_aliases():
    assert algebra.by_name("boolean") is BOOLEAN
