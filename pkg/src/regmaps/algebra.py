"""Coefficient algebras: semirings and quantales.

A :class:`SemiringSpec` bundles a carrier (implicitly, via ``contains``),
the two operations, their units and a partial order.  Every other module is
parameterised by one of these values.
"""
from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional

from .errors import NoConvergence, NotAscending, SamplerMissing
from .report import LawReport, collect, law

INF = math.inf

Value = Any


@dataclass(frozen=True, eq=False)
class SemiringSpec:
    name: str
    plus: Callable[[Value, Value], Value]
    times: Callable[[Value, Value], Value]
    zero: Value
    one: Value
    leq: Callable[[Value, Value], bool]
    idempotent_plus: bool = False
    elements: Optional[tuple] = None
    approx: bool = False
    tolerance: float = 0.0
    sampler: Optional[Callable[[random.Random], Value]] = None
    # saturating top element; lets star widen divergent entries
    top: Optional[Value] = None
    contains: Callable[[Value], bool] = field(default=lambda x: True)
    parse_value: Callable[[str], Value] = field(default=lambda s: s)
    format_value: Callable[[Value], str] = field(default=str)

    @property
    def finite_carrier(self) -> bool:
        return self.elements is not None

    @property
    def is_quantale(self) -> bool:
        return self.idempotent_plus

    def eq(self, x: Value, y: Value) -> bool:
        if x == y:
            return True
        if not self.approx:
            return False
        if math.isinf(x) or math.isinf(y):
            return False
        return abs(x - y) <= self.tolerance * max(1.0, abs(x), abs(y))

    def is_zero(self, x: Value) -> bool:
        return self.eq(x, self.zero)

    def sum(self, xs: Iterable[Value]) -> Value:
        acc = self.zero
        for x in xs:
            acc = self.plus(acc, x)
        return acc

    def prod(self, xs: Iterable[Value]) -> Value:
        acc = self.one
        for x in xs:
            acc = self.times(acc, x)
        return acc

    def sample(self, rng: random.Random) -> Value:
        if self.sampler is not None:
            return self.sampler(rng)
        if self.elements is not None:
            return rng.choice(self.elements)
        raise SamplerMissing(f"{self.name}: no sampler and no finite enumeration")

    def __repr__(self):
        return f"SemiringSpec({self.name})"


QuantaleSpec = SemiringSpec


def _approx_leq(tol):
    def leq(x, y):
        if x <= y:
            return True
        if math.isinf(x) or math.isinf(y):
            return False
        return abs(x - y) <= tol * max(1.0, abs(x), abs(y))

    return leq


def _parse_bool(s):
    t = s.strip().lower()
    if t in ("true", "1", "t", "yes"):
        return True
    if t in ("false", "0", "f", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_nat(s):
    t = s.strip().lower()
    if t in ("inf", "∞", "infinity"):
        return INF
    v = int(t)
    if v < 0:
        raise ValueError(f"negative value {s!r}")
    return v


def _format_num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return repr(x) if isinstance(x, float) else str(x)


def _parse_nonneg_real(s):
    t = s.strip().lower()
    v = INF if t in ("inf", "∞", "infinity") else float(t)
    if not v >= 0:
        raise ValueError(f"negative value {s!r}")
    return v


def _parse_unit(s):
    v = float(s)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{s!r} not in [0,1]")
    return v


def _is_nat(x):
    return (isinstance(x, int) and not isinstance(x, bool) and x >= 0) or x == INF


def _nat_times(x, y):
    if x == 0 or y == 0:
        return 0
    return x * y


def _real_times(x, y):
    if x == 0 or y == 0:
        return 0.0
    return x * y


def _nat_sampler(rng):
    r = rng.random()
    if r < 0.1:
        return 0
    if r < 0.15:
        return INF
    return rng.randint(1, 20)


def _real_sampler(rng):
    r = rng.random()
    if r < 0.1:
        return 0.0
    if r < 0.15:
        return INF
    if r < 0.2:
        return 1.0
    return rng.uniform(0.0, 10.0)


def _unit_sampler(rng):
    r = rng.random()
    if r < 0.1:
        return 0.0
    if r < 0.2:
        return 1.0
    return rng.random()


BOOLEAN = SemiringSpec(
    name="boolean",
    plus=lambda x, y: x or y,
    times=lambda x, y: x and y,
    zero=False,
    one=True,
    leq=lambda x, y: (not x) or y,
    idempotent_plus=True,
    elements=(False, True),
    contains=lambda x: isinstance(x, bool),
    parse_value=_parse_bool,
    format_value=lambda x: "true" if x else "false",
)

NATURAL = SemiringSpec(
    name="natural",
    plus=lambda x, y: x + y,
    times=_nat_times,
    zero=0,
    one=1,
    leq=lambda x, y: x <= y,
    sampler=_nat_sampler,
    top=INF,
    contains=_is_nat,
    parse_value=_parse_nat,
    format_value=_format_num,
)

TROPICAL = SemiringSpec(
    name="tropical",
    plus=min,
    times=lambda x, y: x + y,
    zero=INF,
    one=0,
    # natural order of (min,+): larger distances sit lower, inf is bottom
    leq=lambda x, y: x >= y,
    idempotent_plus=True,
    sampler=_nat_sampler,
    contains=_is_nat,
    parse_value=_parse_nat,
    format_value=_format_num,
)

REAL = SemiringSpec(
    name="real",
    plus=lambda x, y: x + y,
    times=_real_times,
    zero=0.0,
    one=1.0,
    leq=_approx_leq(1e-9),
    approx=True,
    tolerance=1e-9,
    sampler=_real_sampler,
    contains=lambda x: isinstance(x, (int, float)) and x >= 0,
    parse_value=_parse_nonneg_real,
    format_value=_format_num,
)

UNIT_INTERVAL = SemiringSpec(
    name="unit-interval",
    plus=max,
    times=_real_times,
    zero=0.0,
    one=1.0,
    leq=_approx_leq(1e-9),
    idempotent_plus=True,
    approx=True,
    tolerance=1e-9,
    sampler=_unit_sampler,
    contains=lambda x: isinstance(x, (int, float)) and 0 <= x <= 1,
    parse_value=_parse_unit,
    format_value=_format_num,
)

# Long-form aliases.
NaturalSat = NATURAL
TropicalMinPlus = TROPICAL
ExtNonnegReal = REAL
UnitIntervalProduct = UNIT_INTERVAL
Boolean = BOOLEAN


def _format_fraction(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def chain_quantale(k: int, product: str = "min") -> SemiringSpec:
    """The chain 0 < 1/k < ... < 1 with max as join.

    ``product`` is ``"min"`` (Goedel) or ``"lukasiewicz"``, the bounded
    product ``max(0, x + y - 1)``.
    """
    if k < 1:
        raise ValueError("chain length must be positive")
    elements = tuple(Fraction(i, k) for i in range(k + 1))
    if product == "min":
        times = min
        name = f"chain:{k}"
    elif product == "lukasiewicz":
        def times(x, y):
            return max(Fraction(0), x + y - 1)
        name = f"chain:{k}:lukasiewicz"
    else:
        raise ValueError(f"unknown chain product {product!r}")

    def contains(x):
        return isinstance(x, (Fraction, int)) and 0 <= x <= 1 and (Fraction(x) * k).denominator == 1

    def parse(s):
        v = Fraction(s.strip())
        if not contains(v):
            raise ValueError(f"{s!r} is not on the chain 0..1 step 1/{k}")
        return v

    return SemiringSpec(
        name=name,
        plus=max,
        times=times,
        zero=Fraction(0),
        one=Fraction(1),
        leq=lambda x, y: x <= y,
        idempotent_plus=True,
        elements=elements,
        contains=contains,
        parse_value=parse,
        format_value=_format_fraction,
    )


ChainQuantale = chain_quantale

_NAMED = {
    "boolean": BOOLEAN,
    "natural": NATURAL,
    "tropical": TROPICAL,
    "real": REAL,
    "unit-interval": UNIT_INTERVAL,
}

_CHAIN_RE = re.compile(r"chain:([1-9][0-9]*)(?::(min|lukasiewicz))?\Z")


def by_name(token: str) -> SemiringSpec:
    """Look up a semiring by its file/CLI name."""
    if token in _NAMED:
        return _NAMED[token]
    m = _CHAIN_RE.match(token)
    if m:
        return _chain_cached(int(m.group(1)), m.group(2) or "min")
    raise KeyError(token)


_chain_cache: dict = {}


def _chain_cached(k, product):
    # equality of specs is identity, so reuse instances per name
    key = (k, product)
    if key not in _chain_cache:
        _chain_cache[key] = chain_quantale(k, product)
    return _chain_cache[key]


def same_spec(a: SemiringSpec, b: SemiringSpec) -> bool:
    return a is b or a.name == b.name


# -- law checking ----------------------------------------------------------

EXHAUSTIVE_CAP = 4096


def _triples(spec, samples, seed):
    if spec.finite_carrier and len(spec.elements) ** 3 <= EXHAUSTIVE_CAP:
        return list(itertools.product(spec.elements, repeat=3))
    if not spec.finite_carrier and spec.sampler is None:
        raise SamplerMissing(f"{spec.name}: cannot generate values")
    rng = random.Random(seed)
    fixed = [spec.zero, spec.one] + ([spec.top] if spec.top is not None else [])
    out = [(x, y, z) for x in fixed for y in fixed for z in fixed]
    out += [(spec.sample(rng), spec.sample(rng), spec.sample(rng)) for _ in range(samples)]
    return out


def check_algebra_laws(spec: SemiringSpec, samples: int = 1000, seed: int = 0) -> LawReport:
    """Check the semiring, order and (if flagged) idempotence laws.

    Finite carriers are checked on every triple when small enough; otherwise
    ``samples`` random triples are drawn from ``spec.sampler``.
    """
    triples = _triples(spec, samples, seed)
    P, T, E, L = spec.plus, spec.times, spec.eq, spec.leq
    zero, one = spec.zero, spec.one

    plus_assoc = law("plus_associative")
    plus_comm = law("plus_commutative")
    plus_unit = law("plus_identity")
    times_assoc = law("times_associative")
    times_unit = law("times_identity")
    dist_l = law("distributive_left")
    dist_r = law("distributive_right")
    annihil = law("zero_annihilates")
    zsf = law("zerosumfree")
    refl = law("leq_reflexive")
    trans = law("leq_transitive")
    antisym = law("leq_antisymmetric")
    bottom = law("zero_bottom")
    plus_mono = law("plus_monotone")
    times_mono = law("times_monotone")
    idem = law("plus_idempotent")

    for x, y, z in triples:
        c = (x, y, z)
        plus_assoc.check(E(P(P(x, y), z), P(x, P(y, z))), c)
        plus_comm.check(E(P(x, y), P(y, x)), (x, y))
        plus_unit.check(E(P(x, zero), x) and E(P(zero, x), x), (x,))
        times_assoc.check(E(T(T(x, y), z), T(x, T(y, z))), c)
        times_unit.check(E(T(x, one), x) and E(T(one, x), x), (x,))
        dist_l.check(E(T(x, P(y, z)), P(T(x, y), T(x, z))), c)
        dist_r.check(E(T(P(x, y), z), P(T(x, z), T(y, z))), c)
        annihil.check(E(T(x, zero), zero) and E(T(zero, x), zero), (x,))
        if E(P(x, y), zero):
            zsf.check(E(x, zero) and E(y, zero), (x, y))
        # the inverse pair probes zerosumfree for carriers closed under negation
        try:
            neg = -x
        except TypeError:
            neg = None
        if neg is not None and spec.contains(neg) and E(P(x, neg), zero):
            zsf.check(E(x, zero) and E(neg, zero), (x, neg))
        refl.check(L(x, x), (x,))
        if L(x, y) and L(y, z):
            trans.check(L(x, z), c)
        if L(x, y) and L(y, x):
            antisym.check(E(x, y), (x, y))
        bottom.check(L(zero, x), (x,))
        if L(x, y):
            plus_mono.check(L(P(x, z), P(y, z)) and L(P(z, x), P(z, y)), c)
            times_mono.check(L(T(x, z), T(y, z)) and L(T(z, x), T(z, y)), c)
        if spec.idempotent_plus:
            idem.check(E(P(x, x), x), (x,))

    laws = [plus_assoc, plus_comm, plus_unit, times_assoc, times_unit, dist_l, dist_r,
            annihil, zsf, refl, trans, antisym, bottom, plus_mono, times_mono]
    if spec.idempotent_plus:
        laws.append(idem)
    return collect(*laws)


def check_quantale_laws(spec: SemiringSpec, samples: int = 1000, seed: int = 0) -> LawReport:
    """Binary-join laws of a quantale: plus is an idempotent join preserved by times."""
    triples = _triples(spec, samples, seed)
    P, T, E, L = spec.plus, spec.times, spec.eq, spec.leq
    idem = law("join_idempotent")
    upper = law("join_upper_bound")
    least = law("join_least")
    pres = law("times_preserves_join")
    for x, y, z in triples:
        idem.check(E(P(x, x), x), (x,))
        j = P(x, y)
        upper.check(L(x, j) and L(y, j), (x, y))
        if L(x, z) and L(y, z):
            least.check(L(j, z), (x, y, z))
        pres.check(E(T(z, j), P(T(z, x), T(z, y))) and E(T(j, z), P(T(x, z), T(y, z))), (x, y, z))
    return collect(idem, upper, least, pres)


def ascending_sup(spec: SemiringSpec, chain: Iterable[Value], max_iter: int = 10_000) -> Value:
    """Supremum of an ascending chain, taken as its point of stabilisation.

    Consecutive elements must be ordered by ``spec.leq``.  For approximate
    carriers the chain counts as stable once a step moves less than the
    tolerance; the later element of that step is returned.
    """
    it = iter(chain)
    try:
        prev = next(it)
    except StopIteration:
        raise NoConvergence("empty chain") from None
    for count, cur in enumerate(it, start=2):
        if not spec.leq(prev, cur):
            raise NotAscending(f"step {count - 1}: {prev!r} not <= {cur!r}")
        if spec.eq(prev, cur):
            return cur
        if count >= max_iter:
            break
        prev = cur
    else:
        # a finite chain's supremum is its last element
        return prev
    raise NoConvergence(f"no stabilisation within {max_iter} elements")
