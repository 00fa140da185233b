"""Separating sets of homomorphisms into the Boolean semiring for finite lattice semirings."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .semiring import (Boolean, HomCheck, Semiring, SemiringError, SemiringHom,
                       is_absorptive, is_fully_idempotent)

__all__ = [
    "LatticeError", "IdcSet", "PrimeIdeal", "IdcHom", "PrimeIdealHom",
    "is_lattice_semiring", "idc_elements", "make_h_s", "prime_ideals", "make_h_P",
    "verify_separating", "idc_homset", "prime_homset", "MAX_IDEAL_CARRIER",
]

MAX_IDEAL_CARRIER = 16


class LatticeError(SemiringError):
    pass


def is_lattice_semiring(S: Semiring) -> bool:
    """Finite carrier, fully idempotent and absorptive."""
    if S.elements() is None:
        return False
    return is_fully_idempotent(S) and is_absorptive(S)


def _require_lattice(S: Semiring) -> tuple:
    if not is_lattice_semiring(S):
        raise LatticeError(f"{S.name} is not a finite lattice semiring")
    return S.elements()


@dataclass(frozen=True)
class IdcSet:
    semiring: Semiring
    elements: tuple

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, s) -> bool:
        return s in self.elements


@dataclass(frozen=True)
class PrimeIdeal:
    members: frozenset

    def __contains__(self, s) -> bool:
        return s in self.members

    def __len__(self) -> int:
        return len(self.members)


def _is_idc(S: Semiring, elems: tuple, s) -> bool:
    if s == S.zero:
        return False
    return not any(S.add(r, t) == s for r in elems if r != s for t in elems if t != s)


def idc_elements(S: Semiring) -> IdcSet:
    """Non-zero elements that are not a sum of two elements both different from them."""
    elems = _require_lattice(S)
    return IdcSet(S, tuple(s for s in elems if _is_idc(S, elems, s)))


@dataclass(frozen=True)
class IdcHom(SemiringHom):
    """``t -> 1`` iff ``t + s = t``."""

    s: object = None

    @property
    def label(self) -> str:
        return f"h_{self.source.format_value(self.s)}"

    def __call__(self, t):
        return 1 if self.source.add(t, self.s) == t else 0


def make_h_s(S: Semiring, s) -> IdcHom:
    elems = _require_lattice(S)
    S.check(s)
    if not _is_idc(S, elems, s):
        raise LatticeError(f"{S.format_value(s)} is not +-indecomposable in {S.name}")
    return IdcHom(S, Boolean(), s)


def _check_prime(S: Semiring, elems: tuple, P: frozenset) -> str | None:
    """Name of the first violated prime-ideal condition, or ``None``."""
    if not P:
        return "empty"
    if len(P) == len(elems):
        return "not proper"
    for s in P:
        for t in P:
            if S.add(s, t) not in P:
                return "not closed under +"
        for t in elems:
            if S.mul(s, t) not in P:
                return "not closed under multiplication by arbitrary elements"
    for s in elems:
        if s in P:
            continue
        for t in elems:
            if t not in P and S.mul(s, t) in P:
                return "not prime"
    return None


def prime_ideals(S: Semiring) -> list:
    """All prime ideals by a scan over downward-closed subsets, smallest first."""
    elems = _require_lattice(S)
    k = len(elems)
    if k > MAX_IDEAL_CARRIER:
        raise LatticeError(f"carrier of {S.name} has {k} > {MAX_IDEAL_CARRIER} elements")
    # in a lattice semiring, ideals are down-sets of the natural order
    down = []
    for i, s in enumerate(elems):
        mask = 0
        for j, t in enumerate(elems):
            if S.leq(t, s):
                mask |= 1 << j
        down.append(mask)
    found = []
    for mask in range(1, (1 << k) - 1):
        if any(mask >> i & 1 and down[i] & ~mask for i in range(k)):
            continue
        P = frozenset(elems[i] for i in range(k) if mask >> i & 1)
        if _check_prime(S, elems, P) is None:
            found.append((len(P), mask, PrimeIdeal(P)))
    found.sort(key=lambda x: (x[0], x[1]))
    return [p for _, _, p in found]


@dataclass(frozen=True)
class PrimeIdealHom(SemiringHom):
    """``s -> 0`` iff ``s`` lies in the prime ideal."""

    ideal: PrimeIdeal = PrimeIdeal(frozenset())

    @property
    def label(self) -> str:
        S = self.source
        names = sorted((S.format_value(s) for s in self.ideal.members), key=lambda x: (len(x), x))
        return "h_P{" + ",".join(names) + "}"

    def __call__(self, s):
        return 0 if s in self.ideal.members else 1


def make_h_P(S: Semiring, P) -> PrimeIdealHom:
    elems = _require_lattice(S)
    members = frozenset(P.members if isinstance(P, PrimeIdeal) else P)
    for s in members:
        S.check(s)
    problem = _check_prime(S, elems, members)
    if problem is not None:
        raise LatticeError(f"invalid prime ideal: {problem}")
    return PrimeIdealHom(S, Boolean(), PrimeIdeal(members))


def verify_separating(S: Semiring, H) -> HomCheck:
    """Every pair of distinct carrier elements is told apart by some member of ``H``."""
    elems = S.elements()
    if elems is None:
        raise SemiringError(f"{S.name} has no finite carrier")
    H = list(H)
    for s, t in combinations(elems, 2):
        if all(h(s) == h(t) for h in H):
            return HomCheck(False, ("unseparated", s, t))
    return HomCheck(True)


def idc_homset(S: Semiring) -> list:
    return [make_h_s(S, s) for s in idc_elements(S)]


def prime_homset(S: Semiring) -> list:
    return [make_h_P(S, P) for P in prime_ideals(S)]
