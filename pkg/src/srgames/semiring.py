"""Commutative, naturally ordered semirings with exact arithmetic.

Every family is an immutable object exposing ``zero``, ``one``, ``add``,
``mul`` and ``leq``.  Values are plain Python objects: ``int`` for the
counting and bounded families, :class:`fractions.Fraction` for the
unit-interval and tropical families, carrier indices for table semirings and
:class:`srgames.provenance.Polynomial` for provenance semirings.  ``INF`` is a
dedicated sentinel, never a float.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Any, Callable, Iterable, NamedTuple, Sequence

__all__ = [
    "INF", "SemiringError", "TableSemiringError", "Semiring", "Boolean", "Nat",
    "NatInf", "NatTrunc", "Tropical", "Viterbi", "Lukasiewicz", "Doubt",
    "MinMax", "TableSemiring", "FiniteTable", "SemiringHom", "FiniteMapHom",
    "TruncateToNatTrunc", "TropicalScale", "IdentityHom", "HomCheck",
    "sr_add", "sr_mul", "sr_nat_leq", "sr_check_n_idempotent",
    "validate_table_semiring", "parse_table_semiring", "verify_hom",
    "parse_semiring", "is_fully_idempotent", "is_absorptive", "HOM_SEED",
]

HOM_SEED = 0xEF01


class _Infinity:
    """Greatest element of the extended naturals / non-negative rationals."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self) -> int:
        return hash("srgames.INF")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True


INF = _Infinity()


class SemiringError(ValueError):
    """A value does not belong to the semiring it is used with."""


class TableSemiringError(SemiringError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_rational(v) -> bool:
    return isinstance(v, Fraction) or _is_int(v)


def _fmt_rational(v) -> str:
    if v is INF:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _parse_rational(text: str):
    text = text.strip()
    if text == "inf":
        return INF
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SemiringError(f"not a rational number: {text!r}") from None


class Semiring:
    """Base class.  Subclasses are frozen dataclasses, so equality is structural."""

    zero: Any
    one: Any
    idempotent_add = False

    @property
    def name(self) -> str:
        raise NotImplementedError

    def contains(self, v) -> bool:
        raise NotImplementedError

    def add(self, s, t):
        raise NotImplementedError

    def mul(self, s, t):
        raise NotImplementedError

    def leq(self, s, t) -> bool:
        """Natural order ``s <= t`` iff ``s + r = t`` for some ``r``."""
        if self.idempotent_add:
            return self.add(s, t) == t
        elems = self.elements()
        if elems is None:
            raise NotImplementedError(f"no natural order for {self.name}")
        return any(self.add(s, r) == t for r in elems)

    def elements(self) -> tuple | None:
        """The whole carrier for finite families, else ``None``."""
        return None

    def sample(self, rng: random.Random):
        elems = self.elements()
        if elems is None:
            raise NotImplementedError
        return rng.choice(elems)

    def check(self, v):
        if not self.contains(v):
            raise SemiringError(f"{v!r} is not an element of {self.name}")
        return v

    def parse_value(self, text: str):
        raise NotImplementedError

    def format_value(self, v) -> str:
        return str(v)

    # folds used by the evaluator
    def sum(self, values: Iterable):
        return reduce(self.add, values, self.zero)

    def prod(self, values: Iterable):
        return reduce(self.mul, values, self.one)

    def times(self, s, n: int):
        """``s + ... + s`` with ``n`` summands, by doubling."""
        acc, base = self.zero, s
        while n:
            if n & 1:
                acc = self.add(acc, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return acc

    def power(self, s, n: int):
        acc, base = self.one, s
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return acc

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Boolean(Semiring):
    zero = 0
    one = 1
    idempotent_add = True

    @property
    def name(self) -> str:
        return "boolean"

    def contains(self, v) -> bool:
        return _is_int(v) and v in (0, 1)

    def add(self, s, t):
        return s | t

    def mul(self, s, t):
        return s & t

    def leq(self, s, t) -> bool:
        return s <= t

    def elements(self):
        return (0, 1)

    def parse_value(self, text):
        text = text.strip()
        if text in ("0", "false"):
            return 0
        if text in ("1", "true"):
            return 1
        raise SemiringError(f"not a Boolean value: {text!r}")


@dataclass(frozen=True)
class Nat(Semiring):
    zero = 0
    one = 1

    @property
    def name(self) -> str:
        return "nat"

    def contains(self, v) -> bool:
        return _is_int(v) and v >= 0

    def add(self, s, t):
        return s + t

    def mul(self, s, t):
        return s * t

    def leq(self, s, t) -> bool:
        return s <= t

    def times(self, s, n):
        return s * n

    def power(self, s, n):
        return s ** n

    def sample(self, rng):
        return rng.randint(0, 6)

    def parse_value(self, text):
        try:
            v = int(text.strip())
        except ValueError:
            raise SemiringError(f"not a natural number: {text!r}") from None
        return self.check(v)


@dataclass(frozen=True)
class NatInf(Semiring):
    zero = 0
    one = 1

    @property
    def name(self) -> str:
        return "natinf"

    def contains(self, v) -> bool:
        return v is INF or (_is_int(v) and v >= 0)

    def add(self, s, t):
        if s is INF or t is INF:
            return INF
        return s + t

    def mul(self, s, t):
        if s == 0 or t == 0:
            return 0
        if s is INF or t is INF:
            return INF
        return s * t

    def leq(self, s, t) -> bool:
        return s <= t

    def sample(self, rng):
        return INF if rng.random() < 0.2 else rng.randint(0, 5)

    def parse_value(self, text):
        text = text.strip()
        if text == "inf":
            return INF
        return Nat().parse_value(text)

    def format_value(self, v):
        return "inf" if v is INF else str(v)


@dataclass(frozen=True)
class _Bounded(Semiring):
    k: int = 2

    def __post_init__(self):
        if not _is_int(self.k) or self.k < 1:
            raise SemiringError(f"bound must be a positive integer, got {self.k!r}")

    def contains(self, v) -> bool:
        return _is_int(v) and 0 <= v <= self.k

    def leq(self, s, t) -> bool:
        return s <= t

    def elements(self):
        return tuple(range(self.k + 1))

    def parse_value(self, text):
        try:
            v = int(text.strip())
        except ValueError:
            raise SemiringError(f"not an integer: {text!r}") from None
        return self.check(v)


@dataclass(frozen=True)
class NatTrunc(_Bounded):
    """Naturals truncated at ``k``: sum and product are capped at ``k``."""

    zero = 0
    one = 1

    @property
    def name(self) -> str:
        return f"nattrunc:{self.k}"

    def add(self, s, t):
        return min(s + t, self.k)

    def mul(self, s, t):
        return min(s * t, self.k)


@dataclass(frozen=True)
class MinMax(_Bounded):
    """``({0..k}, max, min, 0, k)``."""

    zero = 0
    idempotent_add = True

    @property
    def one(self):
        return self.k

    @property
    def name(self) -> str:
        return f"minmax:{self.k}"

    def add(self, s, t):
        return max(s, t)

    def mul(self, s, t):
        return min(s, t)


@dataclass(frozen=True)
class Tropical(Semiring):
    """``(Q>=0 plus inf, min, +, inf, 0)``."""

    zero = INF
    one = Fraction(0)
    idempotent_add = True

    @property
    def name(self) -> str:
        return "tropical"

    def contains(self, v) -> bool:
        return v is INF or (_is_rational(v) and v >= 0)

    def add(self, s, t):
        return t if s is INF else s if t is INF else min(s, t)

    def mul(self, s, t):
        if s is INF or t is INF:
            return INF
        return Fraction(s) + Fraction(t)

    def leq(self, s, t) -> bool:
        return t <= s

    def times(self, s, n):
        return INF if n == 0 else s

    def power(self, s, n):
        if s is INF:
            return INF if n else self.one
        return Fraction(s) * n

    def sample(self, rng):
        if rng.random() < 0.15:
            return INF
        return Fraction(rng.randint(0, 8), rng.randint(1, 3))

    def parse_value(self, text):
        return self.check(_parse_rational(text))

    def format_value(self, v):
        return _fmt_rational(v)


@dataclass(frozen=True)
class _UnitInterval(Semiring):
    idempotent_add = True

    def contains(self, v) -> bool:
        return _is_rational(v) and 0 <= v <= 1

    def sample(self, rng):
        q = rng.randint(1, 6)
        return Fraction(rng.randint(0, q), q)

    def parse_value(self, text):
        v = _parse_rational(text)
        if v is INF:
            raise SemiringError("inf is not in the unit interval")
        return self.check(v)

    def format_value(self, v):
        return _fmt_rational(v)


@dataclass(frozen=True)
class Viterbi(_UnitInterval):
    zero = Fraction(0)
    one = Fraction(1)

    @property
    def name(self) -> str:
        return "viterbi"

    def add(self, s, t):
        return max(Fraction(s), Fraction(t))

    def mul(self, s, t):
        return Fraction(s) * Fraction(t)

    def leq(self, s, t) -> bool:
        return s <= t


@dataclass(frozen=True)
class Lukasiewicz(_UnitInterval):
    zero = Fraction(0)
    one = Fraction(1)

    @property
    def name(self) -> str:
        return "lukasiewicz"

    def add(self, s, t):
        return max(Fraction(s), Fraction(t))

    def mul(self, s, t):
        return max(Fraction(s) + Fraction(t) - 1, Fraction(0))

    def leq(self, s, t) -> bool:
        return s <= t


@dataclass(frozen=True)
class Doubt(_UnitInterval):
    """``([0,1], min, bounded +, 1, 0)``."""

    zero = Fraction(1)
    one = Fraction(0)

    @property
    def name(self) -> str:
        return "doubt"

    def add(self, s, t):
        return min(Fraction(s), Fraction(t))

    def mul(self, s, t):
        return min(Fraction(s) + Fraction(t), Fraction(1))

    def leq(self, s, t) -> bool:
        return t <= s


# --------------------------------------------------------------------------
# user supplied finite tables


@dataclass(frozen=True)
class TableSemiring:
    """Validated carrier and operation tables (entries are carrier indices)."""

    carrier: tuple[str, ...]
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    zero: int
    one: int


_ERR = TableSemiringError


def validate_table_semiring(carrier: Sequence[str], add, mul, zero, one) -> TableSemiring:
    """Check every semiring axiom exhaustively and return the frozen tables.

    ``add``/``mul`` rows may hold carrier names or indices; ``zero``/``one``
    likewise.  Raises :class:`TableSemiringError` with a code naming the first
    violated axiom.
    """
    carrier = tuple(str(c) for c in carrier)
    k = len(carrier)
    if k == 0:
        raise _ERR("shape", "empty carrier")
    if len(set(carrier)) != k:
        raise _ERR("shape", "duplicate carrier names")
    index = {c: i for i, c in enumerate(carrier)}

    def idx(x):
        if _is_int(x) and 0 <= x < k:
            return x
        if str(x) in index:
            return index[str(x)]
        raise _ERR("unknown-element", f"{x!r} is not in the carrier")

    def table(rows, what):
        rows = [list(r) for r in rows]
        if len(rows) != k or any(len(r) != k for r in rows):
            raise _ERR("shape", f"{what} table must be {k}x{k}")
        return tuple(tuple(idx(x) for x in r) for r in rows)

    A, M = table(add, "add"), table(mul, "mul")
    z, o = idx(zero), idx(one)
    E = range(k)
    if z == o:
        raise _ERR("zero-equals-one", "0 and 1 must differ")
    for name, T in (("add", A), ("mul", M)):
        for s, t in product(E, E):
            if T[s][t] != T[t][s]:
                raise _ERR(f"{name}-not-commutative", f"{carrier[s]}, {carrier[t]}")
        for s, t, r in product(E, E, E):
            if T[T[s][t]][r] != T[s][T[t][r]]:
                raise _ERR(f"{name}-not-associative",
                           f"{carrier[s]}, {carrier[t]}, {carrier[r]}")
    for s in E:
        if A[z][s] != s:
            raise _ERR("zero-not-additive-identity", carrier[s])
        if M[o][s] != s:
            raise _ERR("one-not-multiplicative-identity", carrier[s])
        if M[z][s] != z:
            raise _ERR("zero-not-annihilating", carrier[s])
    for s, t, r in product(E, E, E):
        if M[s][A[t][r]] != A[M[s][t]][M[s][r]]:
            raise _ERR("not-distributive", f"{carrier[s]}*({carrier[t]}+{carrier[r]})")
    below = [{t for t in E if any(A[s][r] == t for r in E)} for s in E]
    for s, t in product(E, E):
        if s != t and t in below[s] and s in below[t]:
            raise _ERR("natural-order-not-antisymmetric", f"{carrier[s]} <= {carrier[t]} <= {carrier[s]}")
    return TableSemiring(carrier, A, M, z, o)


def parse_table_semiring(text: str) -> TableSemiring:
    """Parse the line-oriented table format (``carrier``/``zero``/``one``/``add``/``mul``)."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    fields: dict[str, Any] = {}
    i = 0
    while i < len(lines):
        head, *rest = lines[i].split()
        i += 1
        if head == "carrier":
            fields["carrier"] = rest
        elif head in ("zero", "one"):
            if len(rest) != 1:
                raise _ERR("syntax", f"'{head}' takes one element")
            fields[head] = rest[0]
        elif head in ("add", "mul"):
            if "carrier" not in fields:
                raise _ERR("syntax", "'carrier' must precede the tables")
            k = len(fields["carrier"])
            rows = [rest] if rest else []
            while len(rows) < k:
                if i >= len(lines):
                    raise _ERR("shape", f"{head} table needs {k} rows")
                rows.append(lines[i].split())
                i += 1
            fields[head] = rows
        else:
            raise _ERR("syntax", f"unknown directive {head!r}")
    missing = {"carrier", "zero", "one", "add", "mul"} - fields.keys()
    if missing:
        raise _ERR("syntax", f"missing {', '.join(sorted(missing))}")
    return validate_table_semiring(fields["carrier"], fields["add"], fields["mul"],
                                   fields["zero"], fields["one"])


@dataclass(frozen=True)
class FiniteTable(Semiring):
    table: TableSemiring
    label: str = "table"

    @property
    def zero(self):
        return self.table.zero

    @property
    def one(self):
        return self.table.one

    @property
    def name(self) -> str:
        return f"table:{self.label}"

    def contains(self, v) -> bool:
        return _is_int(v) and 0 <= v < len(self.table.carrier)

    def add(self, s, t):
        return self.table.add[s][t]

    def mul(self, s, t):
        return self.table.mul[s][t]

    def elements(self):
        return tuple(range(len(self.table.carrier)))

    def parse_value(self, text):
        text = text.strip()
        try:
            return self.table.carrier.index(text)
        except ValueError:
            raise SemiringError(f"{text!r} is not in the carrier of {self.name}") from None

    def format_value(self, v):
        return self.table.carrier[v]


# --------------------------------------------------------------------------
# operations with membership checks


def _both(S: Semiring, s, t):
    S.check(s)
    S.check(t)


def sr_add(S: Semiring, s, t):
    _both(S, s, t)
    return S.add(s, t)


def sr_mul(S: Semiring, s, t):
    _both(S, s, t)
    return S.mul(s, t)


def sr_nat_leq(S: Semiring, s, t) -> bool:
    _both(S, s, t)
    return S.leq(s, t)


def _never_idempotent(S) -> bool:
    from .provenance import PolySemiring

    if isinstance(S, (Nat, NatInf, Tropical, Viterbi, Lukasiewicz, Doubt)):
        return True
    return isinstance(S, PolySemiring) and S.quotient in ("NX", "BX", "SX", "SInfX")


def sr_check_n_idempotent(S: Semiring, n: int) -> bool:
    """Whether ``n*s == (n+1)*s`` and ``s**n == s**(n+1)`` for every element.

    Finite carriers are checked exhaustively.  ``W[X]`` uses the closed form
    ``n >= max(|X|, 1)``; families with an element whose multiples or powers
    never stabilise (``N``, ``N^inf``, tropical, Viterbi, Lukasiewicz, doubt,
    ``N[X]``, ``B[X]``, ``S[X]``, ``S^inf[X]``) are never n-idempotent.
    """
    from .provenance import PolySemiring

    if not _is_int(n) or n < 1:
        raise ValueError("n must be a positive integer")
    if isinstance(S, PolySemiring) and S.quotient == "WX":
        return n >= max(len(S.vars), 1)
    elems = S.elements()
    if elems is not None:
        return all(S.times(s, n) == S.times(s, n + 1) and S.power(s, n) == S.power(s, n + 1)
                   for s in elems)
    if _never_idempotent(S):
        return False
    raise SemiringError(f"n-idempotence of {S.name} is not decidable here")


def is_fully_idempotent(S: Semiring) -> bool:
    elems = S.elements()
    if elems is None:
        raise SemiringError(f"{S.name} has no finite carrier")
    return all(S.add(s, s) == s and S.mul(s, s) == s for s in elems)


def is_absorptive(S: Semiring) -> bool:
    elems = S.elements()
    if elems is None:
        raise SemiringError(f"{S.name} has no finite carrier")
    return all(S.add(s, S.mul(s, t)) == s for s in elems for t in elems)


# --------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class SemiringHom:
    source: Semiring
    target: Semiring

    @property
    def label(self) -> str:
        return type(self).__name__

    def __call__(self, v):
        raise NotImplementedError


@dataclass(frozen=True)
class IdentityHom(SemiringHom):
    def __call__(self, v):
        return v


@dataclass(frozen=True)
class FiniteMapHom(SemiringHom):
    """Explicit table from a finite carrier, stored as ``((s, h(s)), ...)``."""

    mapping: tuple = ()
    name: str = "map"

    @classmethod
    def from_function(cls, source, target, fn: Callable, name: str = "map"):
        return cls(source, target, tuple((s, fn(s)) for s in source.elements()), name)

    @property
    def label(self) -> str:
        return self.name

    def __call__(self, v):
        for s, image in self.mapping:
            if s == v:
                return image
        raise SemiringError(f"{v!r} outside the domain of {self.name}")


@dataclass(frozen=True)
class TruncateToNatTrunc(SemiringHom):
    """``n -> min(n, k)`` from ``N`` or ``N^inf`` into the truncated naturals."""

    k: int = 2

    @classmethod
    def make(cls, k: int, source: Semiring | None = None):
        return cls(source or NatInf(), NatTrunc(k), k)

    @property
    def label(self) -> str:
        return f"min(n,{self.k})"

    def __call__(self, v):
        return self.k if v is INF else min(v, self.k)


@dataclass(frozen=True)
class TropicalScale(SemiringHom):
    factor: Fraction = Fraction(2)

    @classmethod
    def make(cls, factor):
        factor = Fraction(factor)
        if factor <= 0:
            raise SemiringError("scale factor must be positive")
        return cls(Tropical(), Tropical(), factor)

    @property
    def label(self) -> str:
        return f"s->{_fmt_rational(self.factor)}s"

    def __call__(self, v):
        return INF if v is INF else Fraction(v) * self.factor


class HomCheck(NamedTuple):
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_hom(h: SemiringHom, samples: int = 1000, seed: int = HOM_SEED) -> HomCheck:
    """Check ``h(0)=0``, ``h(1)=1`` and additivity/multiplicativity.

    Exhaustive over pairs when the source carrier is finite, otherwise over
    ``samples`` random pairs drawn with a fixed seed.  A failing check carries
    ``(law, s, t)`` for the first violation.
    """
    S, T = h.source, h.target
    if h(S.zero) != T.zero:
        return HomCheck(False, ("zero", S.zero, None))
    if h(S.one) != T.one:
        return HomCheck(False, ("one", S.one, None))
    elems = S.elements()
    if elems is not None:
        pairs: Iterable = product(elems, elems)
    else:
        rng = random.Random(seed)
        pairs = [(S.sample(rng), S.sample(rng)) for _ in range(samples)]
    for s, t in pairs:
        if h(S.add(s, t)) != T.add(h(s), h(t)):
            return HomCheck(False, ("add", s, t))
        if h(S.mul(s, t)) != T.mul(h(s), h(t)):
            return HomCheck(False, ("mul", s, t))
    return HomCheck(True)


# --------------------------------------------------------------------------
# descriptors


def parse_semiring(text: str, base_dir=None) -> Semiring:
    """Build a semiring from its descriptor string, e.g. ``minmax:3``, ``poly:sx:x,y``."""
    from pathlib import Path

    text = text.strip()
    head, _, arg = text.partition(":")
    head = head.lower()
    simple = {"boolean": Boolean, "nat": Nat, "natinf": NatInf, "tropical": Tropical,
              "viterbi": Viterbi, "lukasiewicz": Lukasiewicz, "doubt": Doubt}
    if head in simple and not arg:
        return simple[head]()
    if head in ("nattrunc", "minmax"):
        try:
            k = int(arg)
        except ValueError:
            raise SemiringError(f"bad bound in {text!r}") from None
        return NatTrunc(k) if head == "nattrunc" else MinMax(k)
    if head == "table":
        path = Path(arg)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return FiniteTable(parse_table_semiring(path.read_text(encoding="utf-8")), path.stem)
    if head == "poly":
        from .provenance import PolySemiring

        quotient, _, vars_ = arg.partition(":")
        names = tuple(v for v in (x.strip() for x in vars_.split(",")) if v)
        return PolySemiring(_QUOTIENT_ALIASES.get(quotient.lower(), quotient), names)
    raise SemiringError(f"unknown semiring descriptor {text!r}")


_QUOTIENT_ALIASES = {"nx": "NX", "bx": "BX", "wx": "WX", "sx": "SX", "sinfx": "SInfX",
                     "posbool": "PosBool"}
