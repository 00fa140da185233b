"""Provenance polynomials: N[X] and its quotients B[X], W[X], S[X], S^inf[X], PosBool[X]."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping, NamedTuple

from .semiring import INF, Nat, Semiring, SemiringError, SemiringHom

QUOTIENTS = ("NX", "BX", "WX", "SX", "SInfX", "PosBool")
ABSORPTIVE = frozenset({"SX", "SInfX", "PosBool"})
MAX_TERMS = 10_000

# direct projections; reachability is their reflexive-transitive closure
_PROJECTIONS = {"NX": ("BX", "SX"), "BX": ("WX",), "SX": ("SInfX", "PosBool")}


class ResourceLimitError(RuntimeError):
    """A computation exceeded a configured size or time budget."""


def _exp_key(e):
    return (1, 0) if e is INF else (0, e)


def _add_exp(a, b):
    return INF if a is INF or b is INF else a + b


@dataclass(frozen=True)
class Monomial:
    """Sparse exponent map, variables sorted by name, zero exponents omitted."""

    powers: tuple = ()

    @classmethod
    def of(cls, mapping: Mapping[str, object] | Iterable = ()) -> "Monomial":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        acc: dict[str, object] = {}
        for var, e in items:
            if e is not INF and (not isinstance(e, int) or e < 0):
                raise SemiringError(f"bad exponent {e!r} for {var}")
            acc[var] = _add_exp(acc.get(var, 0), e)
        return cls(tuple(sorted((v, e) for v, e in acc.items() if e != 0)))

    def exp(self, var: str):
        for v, e in self.powers:
            if v == var:
                return e
        return 0

    @property
    def variables(self) -> frozenset:
        return frozenset(v for v, _ in self.powers)

    @property
    def key(self):
        return tuple((v, _exp_key(e)) for v, e in self.powers)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial.of(list(self.powers) + list(other.powers))

    def has_inf(self) -> bool:
        return any(e is INF for _, e in self.powers)

    def collapse(self) -> "Monomial":
        return Monomial(tuple((v, 1) for v, _ in self.powers))

    def __str__(self) -> str:
        if not self.powers:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self.powers)


ONE_MONOMIAL = Monomial()


def monomial_absorbs(m1: Monomial, m2: Monomial, Y: Iterable[str] | None = None) -> bool:
    """``m1`` (Y-)absorbs ``m2``: ``m1(x) <= m2(x)`` for every ``x`` in ``Y`` (all variables if ``None``)."""
    vars_ = m1.variables if Y is None else Y
    return all(m1.exp(x) <= m2.exp(x) for x in vars_)


def exponent_sum_eY(m: Monomial, Y: Iterable[str]):
    total = 0
    for x in Y:
        total = _add_exp(total, m.exp(x))
    return total


def _antichain(monos: Iterable[Monomial]) -> list[Monomial]:
    monos = sorted(set(monos), key=lambda m: m.key)
    return [m for m in monos
            if not any(o != m and monomial_absorbs(o, m) for o in monos)]


@dataclass(frozen=True)
class Polynomial:
    """Normalised polynomial; build through :meth:`make` rather than directly."""

    quotient: str
    terms: tuple = ()  # ((Monomial, coefficient), ...) sorted by monomial key

    @classmethod
    def make(cls, quotient: str, terms) -> "Polynomial":
        if quotient not in QUOTIENTS:
            raise SemiringError(f"unknown quotient {quotient!r}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for m, c in items:
            if not isinstance(c, int) or c < 0:
                raise SemiringError(f"bad coefficient {c!r}")
            if m.has_inf() and quotient != "SInfX":
                raise SemiringError(f"infinite exponents are only allowed in SInfX, not {quotient}")
            if quotient in ("WX", "PosBool"):
                m = m.collapse()
            acc[m] = acc.get(m, 0) + c
        acc = {m: c for m, c in acc.items() if c}
        if len(acc) > MAX_TERMS:
            raise ResourceLimitError(f"polynomial exceeds {MAX_TERMS} monomials")
        if quotient == "NX":
            ordered = sorted(acc.items(), key=lambda mc: mc[0].key)
        else:
            monos = _antichain(acc) if quotient in ABSORPTIVE else sorted(acc, key=lambda m: m.key)
            ordered = [(m, 1) for m in monos]
        return cls(quotient, tuple(ordered))

    @classmethod
    def zero(cls, quotient: str) -> "Polynomial":
        return cls.make(quotient, ())

    @classmethod
    def one(cls, quotient: str) -> "Polynomial":
        return cls.make(quotient, [(ONE_MONOMIAL, 1)])

    @classmethod
    def var(cls, quotient: str, name: str) -> "Polynomial":
        return cls.make(quotient, [(Monomial.of({name: 1}), 1)])

    @property
    def monomials(self) -> tuple:
        return tuple(m for m, _ in self.terms)

    @property
    def variables(self) -> frozenset:
        return frozenset().union(*(m.variables for m in self.monomials))

    def coefficient(self, m: Monomial) -> int:
        for mono, c in self.terms:
            if mono == m:
                return c
        return 0

    def __add__(self, other):
        return poly_add(self, other)

    def __mul__(self, other):
        return poly_mul(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        # constant term printed last
        for m, c in sorted(self.terms, key=lambda mc: (not mc[0].powers, mc[0].key)):
            if not m.powers:
                parts.append(str(c))
            elif c == 1:
                parts.append(str(m))
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts)


def _same_quotient(p: Polynomial, q: Polynomial) -> str:
    if not isinstance(p, Polynomial) or not isinstance(q, Polynomial):
        raise SemiringError("polynomial operands expected")
    if p.quotient != q.quotient:
        raise SemiringError(f"quotient mismatch: {p.quotient} vs {q.quotient}")
    return p.quotient


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    quotient = _same_quotient(p, q)
    return Polynomial.make(quotient, list(p.terms) + list(q.terms))


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    quotient = _same_quotient(p, q)
    if len(p.terms) * len(q.terms) > 50 * MAX_TERMS:
        raise ResourceLimitError("product too large")
    return Polynomial.make(quotient, [(m1 * m2, c1 * c2)
                                      for m1, c1 in p.terms for m2, c2 in q.terms])


def normalize_absorptive(terms: Iterable[Monomial], quotient: str = "SX") -> Polynomial:
    if quotient not in ABSORPTIVE:
        raise SemiringError(f"{quotient} is not an absorptive quotient")
    return Polynomial.make(quotient, [(m, 1) for m in terms])


class YSeparation(NamedTuple):
    Y: frozenset
    monomial: Monomial
    bound: int
    side: int  # 0: monomial taken from p, 1: from q


def find_Y_separating(p: Polynomial, q: Polynomial) -> YSeparation | None:
    """A monomial of one polynomial that no monomial of the other Y-absorbs, with finite ``e_Y``."""
    if p == q:
        return None
    universe = p.variables | q.variables
    for side, (mine, other) in enumerate(((p, q), (q, p))):
        for m in mine.monomials:
            if any(monomial_absorbs(o, m) for o in other.monomials):
                continue
            Y = frozenset(x for x in universe if m.exp(x) is not INF)
            return YSeparation(Y, m, exponent_sum_eY(m, Y), side)
    # distinct non-antichain polynomials (e.g. NX) may still absorb each other
    for side, (mine, other) in enumerate(((p, q), (q, p))):
        for m in mine.monomials:
            if m not in other.monomials:
                Y = frozenset(x for x in universe if m.exp(x) is not INF)
                return YSeparation(Y, m, exponent_sum_eY(m, Y), side)
    raise AssertionError("distinct polynomials without a separating monomial")


def _reachable(src: str) -> set[str]:
    seen, todo = {src}, [src]
    while todo:
        for nxt in _PROJECTIONS.get(todo.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def project(p: Polynomial, target: str) -> Polynomial:
    if target not in _reachable(p.quotient):
        raise SemiringError(f"{target} is not a quotient of {p.quotient}")
    return Polynomial.make(target, p.terms)


# --------------------------------------------------------------------------
# polynomial text syntax

_TERM_RE = re.compile(r"^\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+|inf))?)\s*$")


def parse_polynomial(text: str, quotient: str) -> Polynomial:
    """Parse ``3*x^2*y + x*y^inf + 1``."""
    text = text.strip()
    if not text:
        raise SemiringError("empty polynomial")
    terms = []
    for raw in text.split("+"):
        coeff, powers = 1, []
        if not raw.strip():
            raise SemiringError(f"empty term in {text!r}")
        for factor in raw.split("*"):
            m = _TERM_RE.match(factor)
            if not m:
                raise SemiringError(f"cannot parse factor {factor.strip()!r}")
            num, var, e = m.groups()
            if num is not None:
                coeff *= int(num)
            else:
                powers.append((var, 1 if e is None else INF if e == "inf" else int(e)))
        terms.append((Monomial.of(powers), coeff))
    return Polynomial.make(quotient, terms)


# --------------------------------------------------------------------------
# polynomial semirings


def _subsets(xs):
    for r in range(len(xs) + 1):
        yield from combinations(xs, r)


@dataclass(frozen=True)
class PolySemiring(Semiring):
    quotient: str = "NX"
    vars: tuple = ()

    def __post_init__(self):
        if self.quotient not in QUOTIENTS:
            raise SemiringError(f"unknown quotient {self.quotient!r}")

    @property
    def idempotent_add(self):
        return self.quotient != "NX"

    @property
    def zero(self):
        return Polynomial.zero(self.quotient)

    @property
    def one(self):
        return Polynomial.one(self.quotient)

    @property
    def name(self) -> str:
        return f"poly:{self.quotient.lower()}:{','.join(self.vars)}"

    def var(self, name: str) -> Polynomial:
        return Polynomial.var(self.quotient, name)

    def contains(self, v) -> bool:
        return (isinstance(v, Polynomial) and v.quotient == self.quotient
                and v.variables <= set(self.vars))

    def add(self, s, t):
        return poly_add(s, t)

    def mul(self, s, t):
        return poly_mul(s, t)

    def leq(self, s, t) -> bool:
        if self.quotient == "NX":
            return all(t.coefficient(m) >= c for m, c in s.terms)
        return poly_add(s, t) == t

    def times(self, s, n):
        if self.quotient == "NX":
            return Polynomial.make("NX", [(m, c * n) for m, c in s.terms])
        return s if n else self.zero

    def elements(self):
        if self.quotient not in ("WX", "PosBool") or len(self.vars) > 3:
            return None
        monos = [Monomial.of({x: 1 for x in sub}) for sub in _subsets(self.vars)]
        if self.quotient == "WX":
            return tuple(Polynomial.make("WX", [(m, 1) for m in sub]) for sub in _subsets(monos))
        seen = {}
        for sub in _subsets(monos):
            p = normalize_absorptive(sub, "PosBool")
            seen.setdefault(p, None)
        return tuple(seen)

    def sample(self, rng):
        terms = []
        for _ in range(rng.randint(0, 3)):
            exps = {}
            for x in self.vars:
                e = rng.choice((0, 0, 1, 2))
                if self.quotient == "SInfX" and rng.random() < 0.2:
                    e = INF
                exps[x] = e
            coeff = rng.randint(1, 3) if self.quotient == "NX" else 1
            terms.append((Monomial.of(exps), coeff))
        return Polynomial.make(self.quotient, terms)

    def parse_value(self, text):
        p = parse_polynomial(text, self.quotient)
        return self.check(p)


# --------------------------------------------------------------------------
# Kronecker embedding N[X] -> N


@dataclass(frozen=True)
class KroneckerHom(SemiringHom):
    """Evaluation at ``x_j = c**(e**(j-1))``."""

    c: int = 2
    e: int = 2

    @property
    def label(self) -> str:
        return f"kronecker(c={self.c},e={self.e})"

    def weight(self, var: str) -> int:
        j = self.source.vars.index(var)
        return self.c ** (self.e ** j)

    def __call__(self, p: Polynomial) -> int:
        total = 0
        for m, coeff in p.terms:
            value = coeff
            for var, k in m.powers:
                value *= self.weight(var) ** k
            total += value
        return total


def kronecker_hom(c: int, e: int, X: Iterable[str]) -> KroneckerHom:
    if c < 2 or e < 1:
        raise SemiringError("kronecker_hom needs c >= 2 and e >= 1")
    return KroneckerHom(PolySemiring("NX", tuple(X)), Nat(), c, e)


def bounded_polynomials(c: int, e: int, X: Iterable[str]):
    """All of ``N[X](c, e)``: coefficients below ``c``, exponents below ``e``."""
    X = tuple(X)
    monos = [Monomial.of(dict(zip(X, exps))) for exps in product(range(e), repeat=len(X))]
    for coeffs in product(range(c), repeat=len(monos)):
        yield Polynomial.make("NX", list(zip(monos, coeffs)))


def within_bounds(p: Polynomial, c: int, e: int) -> bool:
    return all(coeff < c and all(k is not INF and k < e for _, k in m.powers)
               for m, coeff in p.terms)
