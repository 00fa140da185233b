import random
from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from srgames.provenance import (
    Monomial, PolySemiring, Polynomial, ResourceLimitError, bounded_polynomials, exponent_sum_eY,
    find_Y_separating, kronecker_hom, monomial_absorbs, normalize_absorptive, parse_polynomial, poly_add,
    poly_mul, project, within_bounds,
)
from srgames.semiring import INF, SemiringError, verify_hom


def P(text, q="NX"):
    return parse_polynomial(text, q)


def M(**exps):
    return Monomial.of(exps)


def test_normal_forms():
    assert P("x + x*y", "SX") == P("x", "SX")
    assert str(P("x + y", "WX") * P("x + y", "WX")) == "x + x*y + y"
    assert P("2*x^2 + 3") + Polynomial.zero("NX") == P("2*x^2 + 3")
    assert str(P("2*x^2 + 3")) == "2*x^2 + 3"
    assert str(P("x^2*y + x*y^2", "WX")) == "x*y"


def test_normalize_absorptive():
    assert normalize_absorptive([M(x=1), M(x=1, y=1)]).monomials == (M(x=1),)
    assert set(normalize_absorptive([M(x=2), M(x=1, y=1)]).monomials) == {M(x=2), M(x=1, y=1)}
    assert normalize_absorptive([]) == Polynomial.zero("SX")


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=6), st.randoms(use_true_random=False))
def test_normalize_absorptive_order_independent(exps, rnd):
    monos = [M(x=a, y=b) for a, b in exps]
    p = normalize_absorptive(monos)
    shuffled = list(monos)
    rnd.shuffle(shuffled)
    assert normalize_absorptive(shuffled) == p
    assert normalize_absorptive(p.monomials) == p
    # antichain: no monomial absorbs another
    for m1, m2 in permutations(p.monomials, 2):
        assert not monomial_absorbs(m1, m2)
    # every input monomial is absorbed by some survivor
    for m in monos:
        assert any(monomial_absorbs(k, m) for k in p.monomials)


def test_absorption_and_exponent_sums():
    assert monomial_absorbs(M(x=1), M(x=2, y=1))
    assert monomial_absorbs(M(x=3, y=INF), M(x=INF, y=INF), {"x"})
    assert not monomial_absorbs(M(x=INF, y=INF), M(x=3, y=INF), {"x"})
    assert not monomial_absorbs(M(x=2), M(x=1))
    assert exponent_sum_eY(M(x=5, y=INF), {"x"}) == 5
    assert exponent_sum_eY(M(x=5, y=INF), set()) == 0
    assert exponent_sum_eY(M(x=2, y=3), {"x", "y"}) == 5


def test_find_Y_separating_examples():
    sep = find_Y_separating(P("x^3*y^inf", "SInfX"), P("x^inf*y^inf", "SInfX"))
    assert sep.Y == frozenset({"x"}) and sep.monomial == M(x=3, y=INF) and sep.bound == 3
    p = P("x*y^2 + x^2", "SInfX")
    assert find_Y_separating(p, p) is None
    sep = find_Y_separating(P("x + y", "SX"), P("x*y", "SX"))
    assert sep.Y == frozenset({"x", "y"}) and sep.monomial in (M(x=1), M(y=1)) and sep.bound == 1


def _random_sinf(rng, X):
    terms = []
    for _ in range(rng.randint(0, 3)):
        terms.append(Monomial.of({x: rng.choice((0, 1, 2, INF)) for x in X}))
    return normalize_absorptive(terms, "SInfX")


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_find_Y_separating_property(seed):
    rng = random.Random(seed)
    X = ("x", "y")[: rng.randint(1, 2)]
    p, q = _random_sinf(rng, X), _random_sinf(rng, X)
    sep = find_Y_separating(p, q)
    if p == q:
        assert sep is None
        return
    assert sep is not None
    other = q if sep.side == 0 else p
    assert sep.bound is not INF
    assert not any(monomial_absorbs(o, sep.monomial, sep.Y) for o in other.monomials)


def test_projections():
    p = P("2*x^2 + 3")
    assert project(p, "BX") == P("x^2 + 1", "BX")
    assert project(project(p, "BX"), "WX") == P("x + 1", "WX")
    assert project(p, "SX") == Polynomial.one("SX")
    with pytest.raises(SemiringError):
        project(P("x", "WX"), "NX")


def _naive_mul(p, q):
    # dictionary convolution over N[X]; used as an oracle for the NX product
    acc = {}
    for (m1, c1), (m2, c2) in product(p.terms, q.terms):
        key = tuple(sorted({v: m1.exp(v) + m2.exp(v) for v in m1.variables | m2.variables}.items()))
        acc[key] = acc.get(key, 0) + c1 * c2
    return Polynomial.make("NX", [(Monomial.of(k), c) for k, c in acc.items()])


@settings(max_examples=250, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_projection_is_homomorphic(seed):
    rng = random.Random(seed)
    S = PolySemiring("NX", ("x", "y"))
    p, q = S.sample(rng), S.sample(rng)
    assert poly_mul(p, q) == _naive_mul(p, q)
    for target in ("BX", "WX", "SX", "SInfX", "PosBool"):
        assert project(poly_add(p, q), target) == poly_add(project(p, target), project(q, target))
        assert project(poly_mul(p, q), target) == poly_mul(project(p, target), project(q, target))


def test_text_roundtrip():
    rng = random.Random(11)
    for q in ("NX", "BX", "WX", "SX", "SInfX", "PosBool"):
        S = PolySemiring(q, ("x", "y"))
        for _ in range(40):
            p = S.sample(rng)
            assert parse_polynomial(str(p), q) == p


@pytest.mark.parametrize("bad", ["", "x +", "2*", "x^-1", "x^y", "x**2"])
def test_parse_errors(bad):
    with pytest.raises(SemiringError):
        parse_polynomial(bad, "NX")


def test_infinite_exponent_only_in_sinf():
    with pytest.raises(SemiringError):
        parse_polynomial("x^inf", "SX")
    assert str(parse_polynomial("x^inf*y", "SInfX")) == "x^inf*y"


def test_size_cap():
    S = PolySemiring("NX", tuple(f"v{i}" for i in range(14)))
    p = parse_polynomial(" + ".join(S.vars) + " + 1", "NX")
    q = p
    with pytest.raises(ResourceLimitError):
        for _ in range(6):
            q = S.mul(q, p)


@pytest.mark.parametrize("c, e, n", [(2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1), (2, 2, 3), (4, 2, 2), (2, 4, 2)])
def test_kronecker_bijection(c, e, n):
    X = ("x", "y", "z")[:n]
    h = kronecker_hom(c, e, X)
    images = [h(p) for p in bounded_polynomials(c, e, X)]
    assert sorted(images) == list(range(c ** (e ** n)))


def test_kronecker_small_case():
    h = kronecker_hom(2, 2, ("x",))
    assert [h(P(t)) for t in ("0", "1", "x", "x + 1")] == [0, 1, 2, 3]
    assert h(Polynomial.zero("NX")) == 0


@pytest.mark.parametrize("c, e, n", [(2, 2, 1), (2, 2, 2), (3, 2, 1)])
def test_kronecker_is_homomorphism(c, e, n):
    assert verify_hom(kronecker_hom(c, e, ("x", "y")[:n])).ok


def test_within_bounds():
    assert within_bounds(P("x + 1"), 2, 2)
    assert not within_bounds(P("2*x"), 2, 2)
    assert not within_bounds(P("x^2"), 2, 2)
