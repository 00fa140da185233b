import random
from functools import lru_cache
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from srgames.gallery import minmax_pair, nat_count_pair
from srgames.interp import Interpretation, Vocabulary
from srgames.logic import (
    And, Eq, EvaluationError, Evaluator, Exists, Forall, FormulaSyntaxError, NegLit, Neq, Or, PosLit, Repeat,
    enumerate_formulas, evaluate, expand_repeats, parse_formula, print_formula, quantifier_rank, var_pool,
)
from srgames.provenance import ResourceLimitError
from srgames.semiring import Boolean, MinMax, Nat, NatTrunc

from .oracles import naive_eval, random_monadic

R1 = Vocabulary.of([("R", 1)])


def test_parse_shapes():
    assert parse_formula("E x. R(x)") == Exists("x", PosLit("R", ("x",)))
    f = parse_formula("A y. (x = y | E(x,y))")
    assert f == Forall("y", Or([Eq("x", "y"), PosLit("E", ("x", "y"))]))
    assert parse_formula("R(x) | Q(x) & !R(y)") == Or([PosLit("R", ("x",)), And([PosLit("Q", ("x",)),
                                                                                NegLit("R", ("y",))])])
    assert parse_formula("E x. R(x) | Q(x)") == Exists("x", Or([PosLit("R", ("x",)), PosLit("Q", ("x",))]))
    assert parse_formula("or^3(x != y)") == Repeat("or", Neq("x", "y"), 3)
    assert parse_formula("true") == And(())
    assert parse_formula("and(R(x))") == And((PosLit("R", ("x",)),))
    # quantifier keywords used as relation names
    assert parse_formula("E(x,y)") == PosLit("E", ("x", "y"))
    assert parse_formula("A(x)") == PosLit("A", ("x",))


@pytest.mark.parametrize("text", ["!(R(x) & R(y))", "E x R(x)", "R(x", "R(x) &", "x =", "!x = y", "or^(R(x))",
                                  "R(x) $ R(y)"])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert 0 <= info.value.position <= len(text)


def test_quantifier_rank():
    assert quantifier_rank(parse_formula("R(x)")) == 0
    assert quantifier_rank(parse_formula("E x. A y. E(x,y)")) == 2
    assert quantifier_rank(parse_formula("(E x. R(x)) & A y. E z. R(z)")) == 2
    assert quantifier_rank(Repeat("and", parse_formula("E x. R(x)"), 5)) == 1


@lru_cache(maxsize=None)
def _all_formulas(vocab, free, qr, nodes):
    return list(enumerate_formulas(vocab, free, qr, nodes))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_print_parse_roundtrip(i):
    pool = _all_formulas(Vocabulary.of([("R", 1), ("E", 2)]), ("x1",), 2, 5)
    phi = pool[i % len(pool)]
    assert parse_formula(print_formula(phi)) == phi
    rep = Repeat("or", phi, 3)
    assert parse_formula(print_formula(rep)) == rep
    assert parse_formula(print_formula(And((phi,)))) == And((phi,))


def test_expand_repeats():
    phi = Repeat("and", PosLit("R", ("x",)), 3)
    assert expand_repeats(phi) == And([PosLit("R", ("x",))] * 3)
    assert expand_repeats(Repeat("or", PosLit("R", ("x",)), 1)) == Or((PosLit("R", ("x",)),))


def test_evaluate_examples():
    a, b = nat_count_pair()
    ex = parse_formula("E x. R(x)")
    assert (evaluate(a, ex), evaluate(b, ex)) == (4, 5)
    a, b = minmax_pair()
    fa = parse_formula("A x. R(x)")
    assert (evaluate(a, fa), evaluate(b, fa)) == (1, 1)
    assert evaluate(a, parse_formula("x = x"), {"x": "a1"}) == a.semiring.one
    assert evaluate(a, parse_formula("x != x"), {"x": "a1"}) == 0
    assert evaluate(a, parse_formula("true")) == a.semiring.one
    assert evaluate(a, parse_formula("false")) == 0


def test_evaluate_errors():
    a, _ = nat_count_pair()
    with pytest.raises(EvaluationError):
        evaluate(a, parse_formula("R(x)"))
    with pytest.raises(EvaluationError):
        evaluate(a, parse_formula("R(x)"), {"x": "nope"})
    with pytest.raises(EvaluationError):
        evaluate(a, parse_formula("R(x,x)"), {"x": "a1"})


def test_repeat_is_exact_power():
    a, _ = nat_count_pair()
    body = parse_formula("E x. R(x)")
    assert evaluate(a, Repeat("and", body, 5)) == 4**5
    assert evaluate(a, Repeat("or", body, 5)) == 20
    big = Repeat("and", Repeat("and", body, 1000), 1000)
    assert evaluate(a, big) == 4 ** (10**6)


def test_enumeration_smallest_cases():
    got = _all_formulas(R1, ("x",), 0, 1)
    assert set(got) == {PosLit("R", ("x",)), NegLit("R", ("x",)), Eq("x", "x"), Neq("x", "x")}
    assert _all_formulas(R1, ("x",), 0, 0) == []


def test_enumeration_contains_neighbourhood_formula():
    E2 = Vocabulary.of([("E", 2)])
    target = Forall("x2", Or([Eq("x1", "x2"), PosLit("E", ("x1", "x2"))]))
    found = [f for f in enumerate_formulas(E2, ("x1",), 1, 5) if isinstance(f, Forall)
             and isinstance(f.body, Or) and set(f.body.children) == set(target.body.children)]
    assert len(found) == 1


def test_enumeration_deterministic_and_bounded():
    a = [print_formula(f) for f in enumerate_formulas(R1, ("x1",), 1, 6)]
    b = [print_formula(f) for f in enumerate_formulas(R1, ("x1",), 1, 6)]
    assert a == b
    assert len(set(a)) == len(a)
    fs = _all_formulas(R1, ("x1",), 1, 6)
    assert all(f.size <= 6 and f.qr <= 1 for f in fs)
    assert [f.size for f in fs] == sorted(f.size for f in fs)
    with pytest.raises(ResourceLimitError):
        list(enumerate_formulas(R1, ("x1",), 2, 9, max_formulas=1000))


# an independent generator: junctions as sets of child keys, built by combinations


def _key(f):
    if isinstance(f, (PosLit, NegLit)):
        return (type(f).__name__, f.rel, f.args)
    if isinstance(f, (Eq, Neq)):
        return (type(f).__name__, f.left, f.right)
    if isinstance(f, (Exists, Forall)):
        return (type(f).__name__, f.var, _key(f.body))
    return (type(f).__name__, frozenset(_key(c) for c in f.children))


def _second_generator(vocab, free, qr, nodes):
    by_size = {}

    def gen(size, scope, q):
        k = (size, scope, q)
        if k in by_size:
            return by_size[k]
        out = set()
        if size == 1:
            for rel, ar in vocab.relations:
                for args in product(scope, repeat=ar):
                    out.add(("PosLit", rel, args))
                    out.add(("NegLit", rel, args))
            for u, v in combinations(scope, 2):
                out |= {("Eq", u, v), ("Neq", u, v)}
            for u in scope:
                out |= {("Eq", u, u), ("Neq", u, u)}
        else:
            if q:
                v = next(f"x{i}" for i in range(1, 20) if f"x{i}" not in scope)
                for body in gen(size - 1, scope + (v,), q - 1):
                    out |= {("Exists", v, body), ("Forall", v, body)}
            pool = [(s, f) for s in range(1, size - 1) for f in gen(s, scope, q)]
            for op in ("And", "Or"):
                allowed = [(s, f) for s, f in pool if f[0] != op]
                for r in range(2, size):
                    for kids in combinations(allowed, r):
                        if sum(s for s, _ in kids) == size - 1:
                            out.add((op, frozenset(f for _, f in kids)))
        by_size[k] = out
        return out

    return set().union(*(gen(s, tuple(free), qr) for s in range(1, nodes + 1)))


@pytest.mark.parametrize("vocab, free, qr, nodes", [
    (R1, ("x1",), 0, 5), (R1, ("x1",), 1, 5), (R1, (), 2, 6), (Vocabulary.of([("E", 2)]), ("x1",), 1, 4),
])
def test_enumeration_matches_second_generator(vocab, free, qr, nodes):
    fs = _all_formulas(vocab, free, qr, nodes)
    keys = [_key(f) for f in fs]
    assert len(set(keys)) == len(keys)
    assert set(keys) == _second_generator(vocab, free, qr, nodes)


def _classical(pi, phi, asg):
    # plain truth for model-defining Boolean interpretations
    if isinstance(phi, PosLit):
        return pi.value(phi.rel, True, tuple(asg[v] for v in phi.args)) == 1
    if isinstance(phi, NegLit):
        return not _classical(pi, PosLit(phi.rel, phi.args), asg)
    if isinstance(phi, Eq):
        return asg[phi.left] == asg[phi.right]
    if isinstance(phi, Neq):
        return asg[phi.left] != asg[phi.right]
    if isinstance(phi, And):
        return all(_classical(pi, c, asg) for c in phi.children)
    if isinstance(phi, Or):
        return any(_classical(pi, c, asg) for c in phi.children)
    test = all if isinstance(phi, Forall) else any
    return test(_classical(pi, phi.body, {**asg, phi.var: a}) for a in pi.universe)


FORMULAS_Q2 = None


def _formulas_q2():
    global FORMULAS_Q2
    if FORMULAS_Q2 is None:
        FORMULAS_Q2 = _all_formulas(Vocabulary.of([("R", 1), ("Q", 1)]), ("x1",), 2, 5)
    return FORMULAS_Q2


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_boolean_evaluation_is_classical(seed):
    rng = random.Random(seed)
    pi = random_monadic(Boolean(), ("R", "Q"), rng.randint(1, 3), rng, model_defining=True)
    phi = rng.choice(_formulas_q2())
    asg = {"x1": rng.choice(pi.universe)}
    assert evaluate(pi, phi, asg) == int(_classical(pi, phi, asg))


@pytest.mark.parametrize("S", [Nat(), MinMax(3), NatTrunc(2)], ids=lambda S: S.name)
@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_evaluator_matches_naive(S, seed):
    rng = random.Random(seed)
    pi = random_monadic(S, ("R", "Q"), rng.randint(1, 3), rng, values=S.elements() or (0, 1, 2, 3))
    phi = rng.choice(_formulas_q2())
    asg = {"x1": rng.choice(pi.universe)}
    ev = Evaluator(pi)
    assert ev.value(phi, asg) == naive_eval(pi, phi, asg)
    # reuse of the memo across calls gives the same answers
    assert ev.value(phi, asg) == naive_eval(pi, phi, asg)


def _rename_bound(f, ren):
    if isinstance(f, (Exists, Forall)):
        v = ren.get(f.var, f.var)
        return type(f)(v, _rename_bound(f.body, ren))
    if isinstance(f, (And, Or)):
        return type(f)([_rename_bound(c, ren) for c in f.children])
    if isinstance(f, (PosLit, NegLit)):
        return type(f)(f.rel, tuple(ren.get(a, a) for a in f.args))
    if isinstance(f, (Eq, Neq)):
        return type(f)(ren.get(f.left, f.left), ren.get(f.right, f.right))
    return f


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reordering_and_renaming_invariance(seed):
    rng = random.Random(seed)
    pi = random_monadic(Nat(), ("R", "Q"), rng.randint(1, 3), rng, values=(0, 1, 2, 5))
    phi = rng.choice(_formulas_q2())
    asg = {"x1": rng.choice(pi.universe)}
    v = evaluate(pi, phi, asg)
    if isinstance(phi, (And, Or)):
        kids = list(phi.children)
        rng.shuffle(kids)
        assert evaluate(pi, type(phi)(kids), asg) == v
    renamed = _rename_bound(phi, {"x2": "y", "x3": "z"})
    assert evaluate(pi, renamed, asg) == v


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_isomorphism_invariance(seed):
    rng = random.Random(seed)
    pi = random_monadic(MinMax(2), ("R", "Q"), 3, rng)
    names = ["c0", "c1", "c2"]
    rng.shuffle(names)
    ren = dict(zip(pi.universe, names))
    rows = {ren[a]: tuple(pi.value(r, p, (a,)) for p in (True, False) for r in ("R", "Q")) for a in pi.universe}
    other = Interpretation.from_table(pi.semiring, ["R", "Q"], rows)
    phi = rng.choice(_formulas_q2())
    a = rng.choice(pi.universe)
    assert evaluate(pi, phi, {"x1": a}) == evaluate(other, phi, {"x1": ren[a]})


def test_var_pool():
    assert var_pool(3) == ("x1", "x2", "x3")
    assert var_pool(0) == ()
