"""Characteristic formulas: one-sided Boolean and lattice variants, and the N schedule.

All constructions share subformulas (the result is a DAG of immutable nodes);
repeated disjuncts/conjuncts are :class:`~srgames.logic.Repeat` nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from decimal import Decimal, localcontext
from math import comb
from typing import Sequence

from .homsets import LatticeError, PrimeIdeal, idc_elements, make_h_P
from .interp import Interpretation, InterpretationError, Vocabulary
from .logic import And, Eq, Exists, Forall, Formula, NegLit, Neq, Or, PosLit, Repeat, var_pool
from .provenance import ResourceLimitError
from .semiring import Boolean

__all__ = [
    "ExponentBudgetError", "NatSchedule", "nat_exponent", "exponent_collision",
    "dominance_exponent", "nat_schedule", "nat_chi", "nat_theta", "literal_formulas",
    "equality_pattern", "boolean_one_sided_chi", "lattice_chi_s", "lattice_chi_P",
    "DEFAULT_MAX_E", "DEFAULT_BUDGET",
]

DEFAULT_MAX_E = 64
DEFAULT_BUDGET = 10**7


class ExponentBudgetError(ResourceLimitError):
    def __init__(self, message: str, level: int | None = None):
        super().__init__(message)
        self.level = level


# --------------------------------------------------------------------------
# power-sum exponents


def _multisets(ell: int, d: int):
    return combinations_with_replacement(range(d), max(ell - 1, 0))


def exponent_collision(ell: int, d: int, e: int):
    """Two distinct multisets of size ``ell - 1`` over ``range(d)`` with equal e-th power sums.

    Smaller lengths are covered by padding with zeros, since ``0**e == 0``.
    """
    seen: dict = {}
    for ms in _multisets(ell, d):
        s = sum(r**e for r in ms)
        if s in seen:
            return seen[s], ms
        seen[s] = ms
    return None


def nat_exponent(ell: int, d: int, budget: int = DEFAULT_BUDGET, max_e: int = DEFAULT_MAX_E) -> int:
    """Least ``e >= 1`` making ``multiset -> sum(r**e)`` injective for lengths < ell, entries < d.

    Exhaustive; each candidate exponent costs one pass over all multisets and
    counts against ``budget``.
    """
    if ell < 2 or d < 1:
        raise ValueError("need ell >= 2 and d >= 1")
    per_pass = comb(d + ell - 2, ell - 1)
    spent = 0
    for e in range(1, max_e + 1):
        if spent + per_pass > budget:
            raise ExponentBudgetError(
                f"exponent search for ell={ell}, d={d} needs {per_pass} multisets per exponent; "
                f"budget {budget} exhausted at e={e}")
        spent += per_pass
        if exponent_collision(ell, d, e) is None:
            return e
    raise ExponentBudgetError(f"no injective exponent <= {max_e} for ell={ell}, d={d}")


def dominance_exponent(ell: int, d: int) -> int:
    """Least e with ``(ell-1) * (d-2)**e < (d-1)**e``.

    Then a power sum of fewer than ``ell`` entries below ``d`` determines its
    largest entry (the ranges ``[r**e, (ell-1) r**e]`` are disjoint), and by
    induction the whole multiset.  Injective, but far from minimal.
    """
    if ell < 2 or d < 1:
        raise ValueError("need ell >= 2 and d >= 1")
    if d <= 2 or ell == 2:
        return 1
    r = d - 2
    # monotone in e: (ell-1) * r^e < (r+1)^e  <=>  e * ln(1 + 1/r) > ln(ell-1)
    with localcontext() as ctx:
        ctx.prec = 60
        step = (Decimal(r + 1) / Decimal(r)).ln()
        target = Decimal(ell - 1).ln()
        e = int(target / step) + 1
        tiny = Decimal(10) ** -40
        if e * step - target > tiny and (e - 1) * step - target < -tiny:
            return e
    while (ell - 1) * r**e >= (r + 1) ** e:  # exact fallback near a tie
        e += 1
    while e > 1 and (ell - 1) * r ** (e - 1) < (r + 1) ** (e - 1):
        e -= 1
    return e


@dataclass(frozen=True)
class NatSchedule:
    c1: int
    c2: int
    k: int
    e: tuple
    d: tuple
    methods: tuple = ()

    @property
    def ell(self) -> int:
        return max(self.c2, 4)


def nat_schedule(c1: int, c2: int, k: int, m: int, budget: int = DEFAULT_BUDGET,
                 max_e: int = DEFAULT_MAX_E, fallback: str | None = None) -> NatSchedule:
    """Exponents e_0..e_m and bounds d_0..d_m.

    ``d_0 = c1**(k+1)``, ``d_{i+1} = c2 * d_i**e_i``, each ``e_i`` the least
    exponent for ``ell = max(c2, 4)`` and ``d_i``.  When exhaustive search is
    over budget, ``fallback="dominance"`` substitutes the certified (non-minimal)
    exponent of :func:`dominance_exponent`; otherwise the failing level is reported.
    """
    if c1 < 1 or c2 < 1 or k < 0 or m < 0:
        raise ValueError("invalid schedule parameters")
    ell = max(c2, 4)
    d = [c1 ** (k + 1)]
    e: list = []
    methods: list = []
    for i in range(m + 1):
        try:
            e.append(nat_exponent(ell, d[i], budget, max_e))
            methods.append("exhaustive")
        except ExponentBudgetError as exc:
            if fallback != "dominance":
                raise ExponentBudgetError(f"level {i}: {exc}", level=i) from None
            e.append(dominance_exponent(ell, d[i]))
            methods.append("dominance")
        if i < m:
            d.append(c2 * d[i] ** e[i])
    return NatSchedule(c1, c2, k, tuple(e), tuple(d), tuple(methods))


# --------------------------------------------------------------------------
# literals and equality patterns


def literal_formulas(vocab: Vocabulary, xs: Sequence[str]) -> list:
    """Literals over ``xs``: relations in vocabulary order, positive before
    negative, argument tuples in lexicographic order."""
    return [(PosLit if positive else NegLit)(rel, args) for rel, positive, args in vocab.literals(tuple(xs))]


def equality_pattern(abar: Sequence[str], xs: Sequence[str]) -> list:
    """``x_i = x_j`` or ``x_i != x_j`` for every ``i <= j``, following ``abar``."""
    out = []
    for i in range(len(xs)):
        for j in range(i, len(xs)):
            out.append((Eq if abar[i] == abar[j] else Neq)(xs[i], xs[j]))
    return out


# --------------------------------------------------------------------------
# the N schedule


def nat_theta(schedule: NatSchedule, vocab: Vocabulary, n: int, m: int) -> Formula:
    xs = var_pool(n)
    if m == 0:
        lits = literal_formulas(vocab, xs)
        if len(lits) != schedule.k:
            raise ValueError(f"schedule built for k={schedule.k} literals, level has {len(lits)}")
        parts = []
        for i, lit in enumerate(lits):
            count = schedule.c1 ** i
            parts.append(lit if count == 1 else Repeat("or", lit, count))
        return Or(parts)
    if len(schedule.e) < m:
        raise ValueError(f"schedule has no exponent e_{m - 1}")
    x = f"x{n + 1}"
    inner = nat_theta(schedule, vocab, n + 1, m - 1)
    body = And([Neq(x, xi) for xi in xs] + [inner]) if xs else inner
    return Exists(x, Repeat("and", body, schedule.e[m - 1]))


def nat_chi(schedule: NatSchedule, vocab: Vocabulary, n: int, m: int) -> Formula:
    """chi^m over free variables x1..xn: theta^0 for m = 0, otherwise
    ``(E x.x=x | E x.x=x | theta^m)`` raised to the power e_m."""
    theta = nat_theta(schedule, vocab, n, m)
    if m == 0:
        return theta
    if len(schedule.e) <= m:
        raise ValueError(f"schedule has no exponent e_{m}")
    x = f"x{n + 1}"
    size = Exists(x, Eq(x, x))
    return Repeat("and", Or([size, size, theta]), schedule.e[m])


# --------------------------------------------------------------------------
# one-sided characteristic formulas


def _one_sided(pi: Interpretation, abar: Sequence[str], m: int, include) -> Formula:
    for a in abar:
        if a not in pi._index:
            raise InterpretationError(f"{a!r} is not in the universe")
    memo: dict = {}

    def chi(tup: tuple, j: int) -> Formula:
        key = (tup, j)
        if key in memo:
            return memo[key]
        xs = var_pool(len(tup))
        if j == 0:
            parts = equality_pattern(tup, xs)
            for (rel, positive, args), lit in zip(pi.vocab.literals(tup), literal_formulas(pi.vocab, xs)):
                if include(pi.value(rel, positive, args)):
                    parts.append(lit)
            out = And(parts)
        else:
            x = f"x{len(tup) + 1}"
            subs = [chi(tup + (a,), j - 1) for a in pi.universe]
            out = And([Exists(x, s) for s in subs] + [Forall(x, Or(subs))])
        memo[key] = out
        return out

    return chi(tuple(abar), m)


def boolean_one_sided_chi(pi: Interpretation, abar: Sequence[str], m: int) -> Formula:
    """chi^m for a Boolean interpretation: equality pattern plus the literals valued 1,
    then alternately ``E x.`` per element and ``A x.`` over the disjunction."""
    if not isinstance(pi.semiring, Boolean):
        raise InterpretationError(f"expected a Boolean interpretation, got {pi.semiring.name}")
    return _one_sided(pi, abar, m, lambda v: v == 1)


def lattice_chi_s(pi: Interpretation, abar: Sequence[str], m: int, s) -> Formula:
    """Literals L with ``pi(L(a)) + s = pi(L(a))`` at the base level."""
    S = pi.semiring
    if s not in idc_elements(S):
        raise LatticeError(f"{S.format_value(s)} is not +-indecomposable")
    return _one_sided(pi, abar, m, lambda v: S.add(v, s) == v)


def lattice_chi_P(pi: Interpretation, abar: Sequence[str], m: int, P) -> Formula:
    """Literals L with ``pi(L(a))`` outside the prime ideal P at the base level."""
    h = make_h_P(pi.semiring, P)
    members = h.ideal.members
    return _one_sided(pi, abar, m, lambda v: v not in members)
