"""Worked examples with executable expectations.

Each check recomputes its claim through the public operations.  Tags:
``reference`` for values stated with the original example, ``derived`` for
values computed by an independent procedure here, ``trivial`` for sanity facts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .equiv import decide_equiv_boolean, decide_equiv_lattice, decide_equiv_nat, find_separator, tropical_v1_criterion
from .games import (build_back_and_forth, solve_bijection, solve_counting, solve_ef, solve_hom_game,
                    solve_unbounded)
from .homsets import idc_elements, idc_homset, make_h_s, prime_homset, prime_ideals, verify_separating
from .interp import Interpretation, find_isomorphism, is_model_defining
from .logic import evaluate, parse_formula
from .provenance import PolySemiring
from .semiring import INF, Boolean, MinMax, Nat, Tropical, sr_check_n_idempotent

__all__ = ["Check", "GalleryEntry", "GALLERY", "gallery_ids", "get_entry", "run_entry", "pi_st", "nonmodel_pair",
           "sigma4_pair", "nat_count_pair", "minmax_pair", "wxy_rows", "tropical_pair"]


@dataclass
class Check:
    name: str
    tag: str
    fn: Callable[[dict], tuple]


@dataclass
class GalleryEntry:
    id: str
    description: str
    build: Callable[[], dict]
    checks: list = field(default_factory=list)

    def interpretations(self) -> dict:
        return self.build()


# --------------------------------------------------------------------------
# builders


def nat_count_pair():
    N = Nat()
    a = Interpretation.from_table(N, ["R"], {"a1": (1, 0), "a2": (1, 0), "a3": (2, 0)})
    b = Interpretation.from_table(N, ["R"], {"b1": (1, 0), "b2": (2, 0), "b3": (2, 0)})
    return a, b


def minmax_pair():
    S = MinMax(4)
    a = Interpretation.from_table(S, ["R"], {"a1": (1, 0), "a2": (2, 0), "a3": (4, 0)})
    b = Interpretation.from_table(S, ["R"], {"b1": (1, 0), "b2": (3, 0), "b3": (4, 0)})
    return a, b


def idem_witness_pair(S=None, s=1):
    S = S or Nat()
    a = Interpretation.from_table(S, ["R"], {"a1": (s, S.zero), "a2": (s, S.zero)})
    b = Interpretation.from_table(S, ["R"], {"b": (s, S.zero)})
    return a, b


def wxy_rows(n: int, prefix: str):
    W = PolySemiring("WX", ("x", "y"))
    p = W.parse_value("x + y")
    return Interpretation.from_table(W, ["R"], {f"{prefix}{i}": (p, W.zero) for i in range(1, n + 1)})


def pi_st(S, s, t):
    rows_a = {"a1": (S.zero, t, s, S.zero), "a2": (s, S.zero, S.zero, t),
              "a3": (t, s, S.zero, S.zero), "a4": (S.zero, S.zero, t, s)}
    rows_b = {"b1": (t, S.zero, S.zero, s), "b2": (S.zero, s, t, S.zero),
              "b3": (s, t, S.zero, S.zero), "b4": (S.zero, S.zero, s, t)}
    return (Interpretation.from_table(S, ["R1", "R2"], rows_a),
            Interpretation.from_table(S, ["R1", "R2"], rows_b))


def tropical_pair():
    T = Tropical()
    a = Interpretation.from_table(T, ["R"], {"a0": (0, INF), "a1": (1, INF), "a2": (1, INF)})
    b = Interpretation.from_table(T, ["R"], {"b0": (0, INF), "b1": (2, INF)})
    return a, b


def sigma4_pair(perturb: bool = False):
    S = MinMax(3)
    a = Interpretation.from_table(S, ["Q", "R"], {"a1": (1, 3, 0, 0), "a2": (2, 1, 0, 0), "a3": (3, 2, 0, 0)})
    b = Interpretation.from_table(S, ["Q", "R"], {"b1": (0 if perturb else 3, 1, 0, 0),
                                                  "b2": (1, 2, 0, 0), "b3": (2, 3, 0, 0)})
    return a, b


def nonmodel_pair(m: int):
    """Truncations to a_0..a_2m and b_1..b_2m of the non-model-defining Boolean pair."""
    B = Boolean()
    zero, both = (0, 0, 0, 0), (1, 1, 0, 0)
    rows_a = {"a0": (1, 0, 0, 0)}
    for i in range(1, 2 * m + 1):
        rows_a[f"a{i}"] = zero if i % 2 else both
    rows_b = {f"b{i}": (zero if i % 2 else both) for i in range(1, 2 * m + 1)}
    return (Interpretation.from_table(B, ["R1", "R2"], rows_a),
            Interpretation.from_table(B, ["R1", "R2"], rows_b))


# --------------------------------------------------------------------------
# check helpers


def _eq(actual, expected) -> tuple:
    return actual == expected, f"got {actual}, expected {expected}"


def _value(key, text, expected):
    def fn(env):
        S = env[key].semiring
        v = evaluate(env[key], parse_formula(text))
        return v == expected, f"{text} = {S.format_value(v)}"
    return fn


def _winner(solver, expected, *args, **kw):
    def fn(env):
        a, b = env["A"], env["B"]
        res = solver(a, (), b, (), *args, **kw)
        return _eq(res.winner, expected)
    return fn


def _separator(expect_found: bool, qr: int, nodes: int = 9, a="A", b="B"):
    def fn(env):
        v = find_separator(env[a], (), env[b], (), qr, nodes, time_limit=None)
        if v.separated:
            S = env[a].semiring
            vals = ", ".join(S.format_value(x) for x in v.values)
            return expect_found, f"separator {v.formula} with values {vals}"
        return not expect_found, v.detail
    return fn


def _lattice_equiv(max_m: int, expected: str = "equivalent", a="A", b="B"):
    def fn(env):
        got = [decide_equiv_lattice(env[a], (), env[b], (), m).status for m in range(max_m + 1)]
        return all(g == expected for g in got), f"statuses for m=0..{max_m}: {got}"
    return fn


def _hom_game(kind: str, max_m: int):
    def fn(env):
        a = env["A"]
        H = prime_homset(a.semiring) if kind == "prime" else idc_homset(a.semiring)
        got = [solve_hom_game(H, a, env["B"], m).winner for m in range(max_m + 1)]
        return all(g == "Duplicator" for g in got), f"winners for m=0..{max_m}: {got}"
    return fn


def _no_iso(env):
    return find_isomorphism(env["A"], env["B"]) is None, "no isomorphism"


# --------------------------------------------------------------------------
# entries


def _nat_count():
    def build():
        a, b = nat_count_pair()
        return {"A": a, "B": b}
    return GalleryEntry("nat-count", "N tables with R-values 1,1,2 and 1,2,2", build, [
        Check("A: E x. R(x) = 4", "reference", _value("A", "E x. R(x)", 4)),
        Check("B: E x. R(x) = 5", "reference", _value("B", "E x. R(x)", 5)),
        Check("Duplicator wins G_1", "reference", _winner(solve_ef, "Duplicator", 1)),
        Check("Spoiler wins BG_1", "derived", _winner(solve_bijection, "Spoiler", 1)),
        Check("separator of rank 1 found", "derived", _separator(True, 1)),
        Check("not isomorphic", "derived", _no_iso),
        Check("decide_equiv_nat separates at m=1", "derived",
              lambda env: _eq(decide_equiv_nat(env["A"], (), env["B"], (), 1).status, "separated")),
    ])


def _minmax_quant():
    def build():
        a, b = minmax_pair()
        return {"A": a, "B": b}
    return GalleryEntry("minmax-quant", "min-max {0..4} tables with R-values 1,2,4 and 1,3,4", build, [
        Check("A: E x. R(x) = 4", "reference", _value("A", "E x. R(x)", 4)),
        Check("B: E x. R(x) = 4", "reference", _value("B", "E x. R(x)", 4)),
        Check("A: A x. R(x) = 1", "reference", _value("A", "A x. R(x)", 1)),
        Check("B: A x. R(x) = 1", "reference", _value("B", "A x. R(x)", 1)),
        Check("Spoiler wins G_1", "reference", _winner(solve_ef, "Spoiler", 1)),
        Check("no separator at rank 1, nodes <= 9", "derived", _separator(False, 1, 9)),
        Check("lattice decision: equivalent for m <= 1", "derived", _lattice_equiv(1)),
    ])


def _idem_witness():
    def build():
        a, b = idem_witness_pair()
        return {"A": a, "B": b}
    return GalleryEntry("idem-witness", "two s-rows against one s-row over N, s = 1", build, [
        Check("Duplicator wins G_1", "reference", _winner(solve_ef, "Duplicator", 1)),
        Check("separator of rank 1 found", "reference", _separator(True, 1)),
        Check("E x. R(x): 2 vs 1", "derived",
              lambda env: _eq((evaluate(env["A"], parse_formula("E x. R(x)")),
                               evaluate(env["B"], parse_formula("E x. R(x)"))), (2, 1))),
    ])


def _wxy_counting():
    def build():
        return {"A": wxy_rows(1, "a"), "B": wxy_rows(2, "b"), "C": wxy_rows(3, "c")}

    def counting(x, y, expected):
        def fn(env):
            return _eq(solve_counting(env[x], (), env[y], (), 1, 2).winner, expected)
        return fn

    def square(env):
        W = env["A"].semiring
        p = W.parse_value("x + y")
        return _eq(str(W.mul(p, p)), "x + x*y + y")

    return GalleryEntry("wxy-counting", "W[x,y]: one, two and three rows valued x + y", build, [
        Check("(x+y)(x+y) = x + xy + y", "reference", square),
        Check("W[x,y] is 2-idempotent", "reference",
              lambda env: _eq(sr_check_n_idempotent(env["A"].semiring, 2), True)),
        Check("W[x,y] is not 1-idempotent", "derived",
              lambda env: _eq(sr_check_n_idempotent(env["A"].semiring, 1), False)),
        Check("Spoiler wins CG^2_1 (1 vs 2 rows)", "derived", counting("A", "B", "Spoiler")),
        Check("Duplicator wins CG^2_1 (2 vs 3 rows)", "derived", counting("B", "C", "Duplicator")),
        Check("1 vs 2 rows separated at rank 1", "reference", _separator(True, 1, 9, "A", "B")),
        Check("2 vs 3 rows: no separator at rank 1", "reference", _separator(False, 1, 9, "B", "C")),
    ])


def _pi_st():
    def build():
        a, b = pi_st(MinMax(2), 1, 2)
        return {"A": a, "B": b}

    def bnf(env):
        return build_back_and_forth(env["A"], env["B"], 1) is None, "no 1-back-and-forth system"

    return GalleryEntry("pi-st", "the four-row pair with s = 1, t = 2 over min-max {0,1,2}", build, [
        Check("Spoiler wins G_1", "reference", _winner(solve_ef, "Spoiler", 1)),
        Check("not isomorphic", "reference", _no_iso),
        Check("Spoiler wins the unbounded game", "derived",
              lambda env: _eq(solve_unbounded(env["A"], env["B"]).winner, "Spoiler")),
        Check("no back-and-forth system at m = 1", "derived", bnf),
        Check("lattice decision: equivalent for m <= 3", "reference", _lattice_equiv(3)),
        Check("Duplicator wins HG_m with prime-ideal homs, m <= 3", "reference", _hom_game("prime", 3)),
    ])


def _tropical_v1():
    def build():
        a, b = tropical_pair()
        return {"A": a, "B": b}

    def crit(env):
        holds, conds = tropical_v1_criterion(env["A"], env["B"])
        return holds, f"conditions {conds}"

    return GalleryEntry("tropical-v1", "tropical R-values (0,1,1) against (0,2), negations infinite", build, [
        Check("all three criterion conditions hold", "reference", crit),
        Check("Spoiler wins G_1", "reference", _winner(solve_ef, "Spoiler", 1)),
        Check("no separator at rank 1, nodes <= 7", "reference", _separator(False, 1, 7)),
    ])


def _sigma4():
    def build():
        a, b = sigma4_pair()
        _, bp = sigma4_pair(perturb=True)
        return {"A": a, "B": b, "Bp": bp}

    def idc(env):
        return _eq(idc_elements(env["A"].semiring).elements, (1, 2, 3))

    def ideals(env):
        return _eq([sorted(P.members) for P in prime_ideals(env["A"].semiring)], [[0], [0, 1], [0, 1, 2]])

    def separating(env):
        S = env["A"].semiring
        a, b = verify_separating(S, idc_homset(S)).ok, verify_separating(S, prime_homset(S)).ok
        return a and b, f"idc set separating: {a}, prime-ideal set separating: {b}"

    def h2(env):
        S = env["A"].semiring
        h = make_h_s(S, 2)
        return _eq([h(j) for j in range(4)], [0, 0, 1, 1])

    def perturbed(env):
        v = decide_equiv_lattice(env["A"], (), env["Bp"], (), 1)
        w = find_separator(env["A"], (), env["Bp"], (), 1, 9, time_limit=None)
        return v.separated and w.separated, f"decision {v.status}, search {w.formula}"

    return GalleryEntry("sigma4-majority", "Q/R majority pair over the four-element min-max semiring", build, [
        Check("idc = {1, 2, 3}", "reference", idc),
        Check("prime ideals = the three proper down-sets", "reference", ideals),
        Check("both homomorphism sets are separating", "reference", separating),
        Check("h_2 equals h_{>=2}", "reference", h2),
        Check("Spoiler wins G_1", "derived", _winner(solve_ef, "Spoiler", 1)),
        Check("lattice decision: equivalent for m <= 3", "reference", _lattice_equiv(3)),
        Check("Duplicator wins HG_m with prime-ideal homs, m <= 3", "reference", _hom_game("prime", 3)),
        Check("Duplicator wins HG_m with idc homs, m <= 3", "derived", _hom_game("idc", 3)),
        Check("perturbed Q-value separates at m = 1", "derived", perturbed),
    ])


def _nonmodel(m: int):
    def build():
        a, b = nonmodel_pair(m)
        return {"A": a, "B": b}

    def not_model_defining(env):
        return not is_model_defining(env["A"]) and not is_model_defining(env["B"]), "both not model-defining"

    def equiv(env):
        return _eq(decide_equiv_boolean(env["A"], (), env["B"], (), m).status, "equivalent")

    def spoiler_a0(env):
        res = solve_ef(env["A"], (), env["B"], (), m)
        first = getattr(res.witness, "move", None)
        return res.winner == "Spoiler" and first == ("A", "a0"), f"{res.winner}, first move {first}"

    def one_move(env):
        return _eq(solve_ef(env["A"], (), env["B"], (), 1).winner, "Spoiler")

    return GalleryEntry(f"nonmodel-m{m}", f"Boolean truncations to a_0..a_{2 * m} and b_1..b_{2 * m}", build, [
        Check("neither side is model-defining", "reference", not_model_defining),
        Check(f"equivalent at rank {m} (one-sided games)", "reference", equiv),
        Check(f"Spoiler wins G_{m} by picking a0", "reference", spoiler_a0),
        Check("Spoiler already wins G_1", "reference", one_move),
    ])


def _random_coherence(seed: int, pairs: int = 20):
    def build():
        rng = random.Random(seed)
        S = MinMax(2)
        out = {}
        for i in range(pairs):
            sides = []
            for side in "ab":
                size = rng.randint(1, 3)
                rows = {f"{side}{j}": (rng.randint(0, 2), rng.randint(0, 2)) for j in range(size)}
                sides.append(Interpretation.from_table(S, ["R"], rows))
            out[f"A{i}"], out[f"B{i}"] = sides
        return out

    def coherent(env):
        bad = []
        for i in range(pairs):
            a, b = env[f"A{i}"], env[f"B{i}"]
            for m in (1, 2):
                g = solve_ef(a, (), b, (), m).winner
                c = solve_counting(a, (), b, (), m, 1).winner
                bg = solve_bijection(a, (), b, (), m).winner
                if g != c or (bg == "Duplicator" and g != "Duplicator"):
                    bad.append((i, m))
        return not bad, f"{pairs} pairs, violations: {bad}"

    return GalleryEntry("random-coherence", f"{pairs} seeded random min-max pairs (seed {seed:#x})", build, [
        Check("CG^1_m = G_m and BG_m => G_m, m <= 2", "derived", coherent),
    ])


DEFAULT_SEED = 0xEF01


def _entries(seed: int = DEFAULT_SEED) -> list:
    return [_nat_count(), _minmax_quant(), _idem_witness(), _wxy_counting(), _pi_st(), _tropical_v1(),
            _sigma4(), _nonmodel(1), _nonmodel(2), _random_coherence(seed)]


GALLERY = {e.id: e for e in _entries()}


def gallery_ids() -> list:
    return list(GALLERY)


def get_entry(entry_id: str, seed: int = DEFAULT_SEED) -> GalleryEntry:
    if entry_id == "random-coherence":
        return _random_coherence(seed)
    try:
        return GALLERY[entry_id]
    except KeyError:
        raise KeyError(f"unknown gallery id {entry_id!r}; known: {', '.join(GALLERY)}") from None


def run_entry(entry: GalleryEntry) -> list:
    """``[(check, ok, detail), ...]``; exceptions count as failures."""
    env = entry.build()
    results = []
    for check in entry.checks:
        try:
            ok, detail = check.fn(env)
        except Exception as exc:  # a crash is a failed expectation, reported rather than raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((check, bool(ok), detail))
    return results
