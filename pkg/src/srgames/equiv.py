"""Deciding and refuting m-equivalence.

Exact procedures exist for the Boolean semiring (one-sided games), finite
lattice semirings (prime-ideal homomorphisms), N (bijection games) and bounded
N[X] (through the Kronecker embedding).  Everything else is only refuted, by
searching for a separating formula.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .charform import ExponentBudgetError, boolean_one_sided_chi, lattice_chi_P, nat_chi, nat_schedule
from .games import solve_bijection, solve_one_sided
from .homsets import is_lattice_semiring, make_h_P, prime_ideals
from .interp import Interpretation, InterpretationError, compose_hom_interp
from .logic import Evaluator, Formula, enumerate_formulas, var_pool
from .provenance import PolySemiring, ResourceLimitError, kronecker_hom, within_bounds
from .semiring import INF, Boolean, Nat, SemiringError, Tropical

__all__ = [
    "EQUIVALENT", "SEPARATED", "UNKNOWN", "EquivVerdict", "LeqVerdict", "find_separator",
    "decide_equiv_lattice", "decide_equiv_nat", "decide_equiv_natpoly", "decide_leq_boolean",
    "decide_equiv_boolean", "decide_equiv", "tropical_v1_criterion", "separates",
]

EQUIVALENT = "equivalent"
SEPARATED = "separated"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class EquivVerdict:
    status: str
    m: int
    method: str
    formula: Formula | None = None
    values: tuple | None = None
    detail: str = ""

    @property
    def equivalent(self) -> bool:
        return self.status == EQUIVALENT

    @property
    def separated(self) -> bool:
        return self.status == SEPARATED


@dataclass(frozen=True)
class LeqVerdict:
    holds: bool
    m: int
    formula: Formula | None = None  # on failure: left value 1, right value 0
    values: tuple | None = None


def _asg(tup: Sequence[str]) -> dict:
    return dict(zip(var_pool(len(tup)), tup))


def _check_pair(pi_a: Interpretation, abar, pi_b: Interpretation, bbar) -> None:
    if pi_a.vocab != pi_b.vocab:
        raise InterpretationError("vocabulary mismatch")
    if pi_a.semiring != pi_b.semiring:
        raise InterpretationError(f"semiring mismatch: {pi_a.semiring.name} vs {pi_b.semiring.name}")
    if len(abar) != len(bbar):
        raise InterpretationError("tuples of different length")


def separates(pi_a, abar, pi_b, bbar, phi: Formula) -> tuple | None:
    """The two values of ``phi`` if they differ, else ``None``."""
    va = Evaluator(pi_a).value(phi, _asg(abar))
    vb = Evaluator(pi_b).value(phi, _asg(bbar))
    return None if va == vb else (va, vb)


def _separated(pi_a, abar, pi_b, bbar, phi, m, method, detail="") -> EquivVerdict:
    values = separates(pi_a, abar, pi_b, bbar, phi)
    if values is None:
        raise AssertionError(f"claimed separator {phi} does not separate")
    return EquivVerdict(SEPARATED, m, method, phi, values, detail)


# --------------------------------------------------------------------------
# bounded search


def find_separator(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation, bbar: Sequence[str],
                   max_qr: int = 2, max_nodes: int = 9, time_limit: float | None = 10.0,
                   max_formulas: int | None = None) -> EquivVerdict:
    """First enumerated formula with different values on the two sides.

    A semi-decision: returns Separated or Unknown, never Equivalent.
    """
    _check_pair(pi_a, abar, pi_b, bbar)
    ea, eb = Evaluator(pi_a), Evaluator(pi_b)
    asg_a, asg_b = _asg(abar), _asg(bbar)
    start = time.monotonic()
    count = 0
    try:
        for phi in enumerate_formulas(pi_a.vocab, var_pool(len(abar)), max_qr, max_nodes, max_formulas):
            count += 1
            if ea.value(phi, asg_a) != eb.value(phi, asg_b):
                return _separated(pi_a, abar, pi_b, bbar, phi, phi.qr, "search",
                                  f"formula #{count} of the enumeration")
            if time_limit is not None and count % 256 == 0 and time.monotonic() - start > time_limit:
                return EquivVerdict(UNKNOWN, max_qr, "search", detail=f"time limit after {count} formulas")
    except ResourceLimitError as exc:
        return EquivVerdict(UNKNOWN, max_qr, "search", detail=str(exc))
    return EquivVerdict(UNKNOWN, max_qr, "search",
                        detail=f"no separator among {count} formulas (qr <= {max_qr}, nodes <= {max_nodes})")


# --------------------------------------------------------------------------
# Boolean: one-sided games


def decide_leq_boolean(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation,
                       bbar: Sequence[str], m: int) -> LeqVerdict:
    """Whether every formula of rank <= m has value on the left <= value on the right."""
    _check_pair(pi_a, abar, pi_b, bbar)
    if not isinstance(pi_a.semiring, Boolean):
        raise InterpretationError(f"expected Boolean interpretations, got {pi_a.semiring.name}")
    if solve_one_sided(pi_a, abar, pi_b, bbar, m, depth=1).duplicator_wins:
        return LeqVerdict(True, m)
    chi = boolean_one_sided_chi(pi_a, abar, m)
    values = separates(pi_a, abar, pi_b, bbar, chi)
    if values != (1, 0):
        raise AssertionError("characteristic formula does not witness the failed comparison")
    return LeqVerdict(False, m, chi, values)


def decide_equiv_boolean(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation,
                         bbar: Sequence[str], m: int) -> EquivVerdict:
    for left, lt, right, rt, flip in ((pi_a, abar, pi_b, bbar, False), (pi_b, bbar, pi_a, abar, True)):
        v = decide_leq_boolean(left, lt, right, rt, m)
        if not v.holds:
            return _separated(pi_a, abar, pi_b, bbar, v.formula, m, "boolean-one-sided",
                              "characteristic formula of the " + ("second" if flip else "first") + " side")
    return EquivVerdict(EQUIVALENT, m, "boolean-one-sided")


# --------------------------------------------------------------------------
# finite lattice semirings


def decide_equiv_lattice(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation,
                         bbar: Sequence[str], m: int) -> EquivVerdict:
    """Equivalent iff for every prime ideal P both one-sided games on the h_P images are won."""
    _check_pair(pi_a, abar, pi_b, bbar)
    S = pi_a.semiring
    if not is_lattice_semiring(S):
        raise SemiringError(f"{S.name} is not a finite lattice semiring")
    for P in prime_ideals(S):
        h = make_h_P(S, P)
        ia, ib = compose_hom_interp(h, pi_a), compose_hom_interp(h, pi_b)
        for p0, t0, i0, i1, t1 in ((pi_a, abar, ia, ib, bbar), (pi_b, bbar, ib, ia, abar)):
            if not solve_one_sided(i0, t0, i1, t1, m, depth=1).duplicator_wins:
                chi = lattice_chi_P(p0, t0, m, P)
                return _separated(pi_a, abar, pi_b, bbar, chi, m, "lattice-hom",
                                  f"characteristic formula for {h.label}")
    return EquivVerdict(EQUIVALENT, m, "lattice-hom")


# --------------------------------------------------------------------------
# N and N[X]


def _max_value(pi: Interpretation) -> int:
    return max((v for _, v in pi.items()), default=0)


def _nat_witness(pi_a, abar, pi_b, bbar, m, search_nodes, time_limit):
    found = find_separator(pi_a, abar, pi_b, bbar, max_qr=m, max_nodes=search_nodes, time_limit=time_limit)
    if found.separated:
        return found.formula, "found by search"
    c1 = max(_max_value(pi_a), _max_value(pi_b)) + 1
    c2 = max(len(pi_a), len(pi_b)) + 1
    n = len(abar)
    k = len(pi_a.vocab.literals(var_pool(n + m)))
    try:
        sched = nat_schedule(c1, c2, k, m)
    except ExponentBudgetError as exc:
        return None, f"no formula: search found none and {exc}"
    return nat_chi(sched, pi_a.vocab, n, m), f"characteristic formula, exponents {sched.e}"


def decide_equiv_nat(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation, bbar: Sequence[str],
                     m: int, witness: bool = True, search_nodes: int = 7,
                     time_limit: float = 5.0) -> EquivVerdict:
    """Equivalent iff Duplicator wins BG_m.

    A Separated verdict carries a formula when one is found by bounded search
    or the characteristic-formula schedule is computable; otherwise the game
    result alone stands (formula ``None``).
    """
    _check_pair(pi_a, abar, pi_b, bbar)
    if not isinstance(pi_a.semiring, Nat):
        raise InterpretationError(f"expected N-interpretations, got {pi_a.semiring.name}")
    if solve_bijection(pi_a, abar, pi_b, bbar, m, depth=1).duplicator_wins:
        return EquivVerdict(EQUIVALENT, m, "nat-bijection")
    if not witness:
        return EquivVerdict(SEPARATED, m, "nat-bijection", detail="Spoiler wins the bijection game")
    phi, detail = _nat_witness(pi_a, abar, pi_b, bbar, m, search_nodes, time_limit)
    if phi is None:
        return EquivVerdict(SEPARATED, m, "nat-bijection", detail=f"Spoiler wins the bijection game; {detail}")
    return _separated(pi_a, abar, pi_b, bbar, phi, m, "nat-bijection", detail)


def decide_equiv_natpoly(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation,
                         bbar: Sequence[str], m: int, c: int | None = None, e: int | None = None,
                         witness: bool = True) -> EquivVerdict:
    """Map N[X] values through the Kronecker embedding (injective on N[X](c, e)) and decide on N."""
    _check_pair(pi_a, abar, pi_b, bbar)
    S = pi_a.semiring
    if not isinstance(S, PolySemiring) or S.quotient != "NX":
        raise InterpretationError(f"expected N[X]-interpretations, got {S.name}")
    values = [v for pi in (pi_a, pi_b) for _, v in pi.items()]
    if c is None:
        c = max([2] + [coeff + 1 for p in values for _, coeff in p.terms])
    if e is None:
        e = max([1] + [k + 1 for p in values for mono in p.monomials for _, k in mono.powers])
    for p in values:
        if not within_bounds(p, c, e):
            raise SemiringError(f"value {p} is outside N[X](c={c}, e={e})")
    h = kronecker_hom(c, e, S.vars)
    ia, ib = compose_hom_interp(h, pi_a), compose_hom_interp(h, pi_b)
    inner = decide_equiv_nat(ia, abar, ib, bbar, m, witness=witness)
    if inner.equivalent:
        return EquivVerdict(EQUIVALENT, m, "natpoly-kronecker", detail=f"c={c}, e={e}")
    if inner.formula is None:
        return EquivVerdict(SEPARATED, m, "natpoly-kronecker", detail=inner.detail)
    return _separated(pi_a, abar, pi_b, bbar, inner.formula, m, "natpoly-kronecker", inner.detail)


# --------------------------------------------------------------------------
# tropical special case


def tropical_v1_criterion(pi_a: Interpretation, pi_b: Interpretation) -> tuple:
    """The sufficient condition for 1-equivalence of tropical interpretations over one unary R.

    Returns ``(holds, (negations_infinite, same_min, same_total))``; the total is
    the semiring product, i.e. the ordinary sum of the R-values.
    """
    for pi in (pi_a, pi_b):
        if not isinstance(pi.semiring, Tropical):
            raise InterpretationError("expected tropical interpretations")
        if len(pi.vocab.relations) != 1 or pi.vocab.relations[0][1] != 1:
            raise InterpretationError("criterion needs a single unary relation")
    rel = pi_a.vocab.relations[0][0]
    S = pi_a.semiring
    ra = [pi_a.value(rel, True, (a,)) for a in pi_a.universe]
    rb = [pi_b.value(rel, True, (b,)) for b in pi_b.universe]
    neg = all(pi_a.value(rel, False, (a,)) is INF for a in pi_a.universe) and \
        all(pi_b.value(rel, False, (b,)) is INF for b in pi_b.universe)
    same_min = S.sum(ra) == S.sum(rb)
    same_total = S.prod(ra) == S.prod(rb)
    conds = (neg, same_min, same_total)
    return all(conds), conds


# --------------------------------------------------------------------------
# dispatch


def decide_equiv(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation, bbar: Sequence[str],
                 m: int, method: str = "auto", max_nodes: int = 9, time_limit: float | None = 10.0) -> EquivVerdict:
    _check_pair(pi_a, abar, pi_b, bbar)
    S = pi_a.semiring
    if method == "auto":
        if isinstance(S, Boolean):
            method = "boolean"
        elif isinstance(S, Nat):
            method = "nat"
        elif isinstance(S, PolySemiring) and S.quotient == "NX":
            method = "natpoly"
        elif S.elements() is not None and is_lattice_semiring(S):
            method = "lattice"
        else:
            method = "search"
    if method == "boolean":
        return decide_equiv_boolean(pi_a, abar, pi_b, bbar, m)
    if method == "lattice":
        return decide_equiv_lattice(pi_a, abar, pi_b, bbar, m)
    if method == "nat":
        return decide_equiv_nat(pi_a, abar, pi_b, bbar, m)
    if method == "natpoly":
        return decide_equiv_natpoly(pi_a, abar, pi_b, bbar, m)
    if method == "search":
        return find_separator(pi_a, abar, pi_b, bbar, m, max_nodes, time_limit)
    raise ValueError(f"unknown method {method!r}")
