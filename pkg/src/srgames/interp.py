"""Finite semiring interpretations, local isomorphisms and isomorphism search."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .semiring import Semiring, SemiringError, SemiringHom, parse_semiring

__all__ = [
    "Vocabulary", "Interpretation", "PartialMap", "InterpretationError",
    "is_model_defining", "local_iso", "find_isomorphism", "compose_hom_interp",
    "parse_interpretation", "load_interpretation", "format_interpretation",
]


class InterpretationError(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    relations: tuple  # ((name, arity), ...) in declaration order

    @classmethod
    def of(cls, spec: Mapping[str, int] | Iterable) -> "Vocabulary":
        items = tuple(spec.items() if isinstance(spec, Mapping) else spec)
        names = [n for n, _ in items]
        if len(set(names)) != len(names):
            raise InterpretationError("duplicate relation names")
        for name, arity in items:
            if not isinstance(arity, int) or arity < 1:
                raise InterpretationError(f"arity of {name} must be positive")
        return cls(items)

    def arity(self, rel: str) -> int:
        for name, arity in self.relations:
            if name == rel:
                return arity
        raise InterpretationError(f"unknown relation {rel!r}")

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.relations)

    def literals(self, elements: Sequence) -> list:
        """Every ``(rel, positive, args)`` over ``elements``, in the fixed literal order."""
        out = []
        for rel, arity in self.relations:
            for positive in (True, False):
                for args in product(elements, repeat=arity):
                    out.append((rel, positive, args))
        return out

    def __str__(self) -> str:
        return " ".join(f"{n}/{a}" for n, a in self.relations)


class Interpretation:
    """Total map from instantiated literals to semiring values over a finite universe."""

    __slots__ = ("semiring", "vocab", "universe", "_values", "_index")

    def __init__(self, semiring: Semiring, vocab: Vocabulary, universe: Sequence[str],
                 values: Mapping, allow_empty: bool = False):
        universe = tuple(str(a) for a in universe)
        if not universe and not allow_empty:
            raise InterpretationError("empty universe (pass allow_empty=True to permit it)")
        if len(set(universe)) != len(universe):
            raise InterpretationError("duplicate universe elements")
        vals = {}
        for key in vocab.literals(universe):
            if key not in values:
                rel, positive, args = key
                raise InterpretationError(
                    f"no value for {'' if positive else '!'}{rel}({','.join(args)})")
            vals[key] = semiring.check(values[key])
        extra = set(values) - set(vals)
        if extra:
            raise InterpretationError(f"literals outside vocabulary/universe: {sorted(extra)[:3]}")
        self.semiring = semiring
        self.vocab = vocab
        self.universe = universe
        self._values = vals
        self._index = {a: i for i, a in enumerate(universe)}

    @classmethod
    def from_table(cls, semiring: Semiring, relations: Sequence[str], rows: Mapping) -> "Interpretation":
        """Monadic interpretation from rows ``element -> (R1, ..., Rk, !R1, ..., !Rk)``."""
        k = len(relations)
        values = {}
        for elem, row in rows.items():
            if len(row) != 2 * k:
                raise InterpretationError(f"row {elem} needs {2 * k} entries")
            for i, rel in enumerate(relations):
                values[(rel, True, (elem,))] = row[i]
                values[(rel, False, (elem,))] = row[k + i]
        return cls(semiring, Vocabulary.of([(r, 1) for r in relations]), list(rows), values)

    def value(self, rel: str, positive: bool, args: Sequence[str]):
        try:
            return self._values[(rel, positive, tuple(args))]
        except KeyError:
            raise InterpretationError(f"no literal {rel}{tuple(args)} in this interpretation") from None

    def items(self):
        return self._values.items()

    def index(self, element: str) -> int:
        return self._index[element]

    def __len__(self) -> int:
        return len(self.universe)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Interpretation) and self.semiring == other.semiring
                and self.vocab == other.vocab and self.universe == other.universe
                and self._values == other._values)

    def __hash__(self):
        return hash((self.semiring, self.vocab, self.universe))

    def __repr__(self) -> str:
        return f"<Interpretation over {self.semiring.name}, |A|={len(self.universe)}, vocab {self.vocab}>"

    def map_values(self, fn, semiring: Semiring) -> "Interpretation":
        return Interpretation(semiring, self.vocab, self.universe,
                              {k: fn(v) for k, v in self._values.items()}, allow_empty=True)

    def restrict(self, elements: Sequence[str]) -> "Interpretation":
        keep = tuple(a for a in self.universe if a in set(elements))
        return Interpretation(self.semiring, self.vocab, keep,
                              {k: v for k, v in self._values.items() if set(k[2]) <= set(keep)})


@dataclass(frozen=True)
class PartialMap:
    pairs: tuple = ()

    def as_dict(self) -> dict:
        return dict(self.pairs)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a}->{b}" for a, b in self.pairs) + "}"


def is_model_defining(pi: Interpretation) -> bool:
    S = pi.semiring
    for (rel, positive, args), v in pi.items():
        if positive and ((v == S.zero) == (pi.value(rel, False, args) == S.zero)):
            return False
    return True


def _same_pattern(a: Sequence, b: Sequence) -> bool:
    n = len(a)
    return all((a[i] == a[j]) == (b[i] == b[j]) for i in range(n) for j in range(i + 1, n))


def local_iso(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation, bbar: Sequence[str]) -> bool:
    """``abar -> bbar`` is well defined, injective, and preserves every literal value."""
    if len(abar) != len(bbar):
        raise InterpretationError("tuples of different length")
    if pi_a.vocab != pi_b.vocab:
        raise InterpretationError("vocabulary mismatch")
    if not _same_pattern(abar, bbar):
        return False
    n = len(abar)
    for rel, arity in pi_a.vocab.relations:
        for pos in product(range(n), repeat=arity):
            ta = tuple(abar[i] for i in pos)
            tb = tuple(bbar[i] for i in pos)
            for positive in (True, False):
                if pi_a.value(rel, positive, ta) != pi_b.value(rel, positive, tb):
                    return False
    return True


def _diag_profile(pi: Interpretation, a: str) -> tuple:
    return tuple(pi.value(rel, positive, (a,) * arity)
                 for rel, arity in pi.vocab.relations for positive in (True, False))


def find_isomorphism(pi_a: Interpretation, pi_b: Interpretation) -> PartialMap | None:
    """Backtracking search for a bijection preserving all literal values."""
    if pi_a.vocab != pi_b.vocab:
        raise InterpretationError("vocabulary mismatch")
    if len(pi_a) != len(pi_b):
        return None
    prof_a = {a: _diag_profile(pi_a, a) for a in pi_a.universe}
    prof_b = {b: _diag_profile(pi_b, b) for b in pi_b.universe}
    if sorted(map(repr, prof_a.values())) != sorted(map(repr, prof_b.values())):
        return None
    order = list(pi_a.universe)
    abar: list[str] = []
    bbar: list[str] = []
    used: set[str] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        a = order[i]
        for b in pi_b.universe:
            if b in used or prof_b[b] != prof_a[a]:
                continue
            abar.append(a)
            bbar.append(b)
            if local_iso(pi_a, abar, pi_b, bbar):
                used.add(b)
                if extend(i + 1):
                    return True
                used.discard(b)
            abar.pop()
            bbar.pop()
        return False

    return PartialMap(tuple(zip(abar, bbar))) if extend(0) else None


def compose_hom_interp(h: SemiringHom, pi: Interpretation) -> Interpretation:
    if h.source != pi.semiring:
        raise InterpretationError(f"homomorphism source {h.source.name} does not match {pi.semiring.name}")
    return pi.map_values(h, h.target)


# --------------------------------------------------------------------------
# file format

_LIT_RE = re.compile(r"^(!?)([A-Za-z_][A-Za-z0-9_]*)\(([^)]*)\)\s*=\s*(.+)$")


def parse_interpretation(text: str, base_dir=None, allow_empty: bool = False) -> Interpretation:
    semiring = vocab = universe = None
    complement = False
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "semiring":
                semiring = parse_semiring(rest, base_dir)
            elif head == "vocab":
                spec = []
                for item in rest.split():
                    name, _, ar = item.partition("/")
                    spec.append((name, int(ar)))
                vocab = Vocabulary.of(spec)
            elif head == "universe":
                universe = rest.split()
            elif head == "default" and rest == "complement":
                complement = True
            elif head == "lit":
                if semiring is None or vocab is None:
                    raise InterpretationError("'semiring' and 'vocab' must precede literals")
                m = _LIT_RE.match(rest)
                if not m:
                    raise InterpretationError(f"cannot parse literal {rest!r}")
                neg, rel, args, val = m.groups()
                args = tuple(x.strip() for x in args.split(",") if x.strip())
                if len(args) != vocab.arity(rel):
                    raise InterpretationError(f"arity mismatch for {rel}")
                key = (rel, not neg, args)
                if key in values:
                    raise InterpretationError(f"literal {rest.split('=')[0].strip()} given twice")
                values[key] = semiring.parse_value(val)
            else:
                raise InterpretationError(f"unknown directive {head!r}")
        except (InterpretationError, SemiringError, ValueError) as exc:
            raise InterpretationError(f"line {lineno}: {exc}") from None
    if semiring is None or vocab is None or universe is None:
        raise InterpretationError("file must declare semiring, vocab and universe")
    if complement:
        for rel, positive, args in vocab.literals(universe):
            if positive:
                values.setdefault((rel, True, args), semiring.zero)
        for rel, positive, args in vocab.literals(universe):
            if not positive:
                pos_val = values[(rel, True, args)]
                values.setdefault((rel, False, args),
                                  semiring.one if pos_val == semiring.zero else semiring.zero)
    return Interpretation(semiring, vocab, universe, values, allow_empty=allow_empty)


def load_interpretation(path, allow_empty: bool = False) -> Interpretation:
    path = Path(path)
    return parse_interpretation(path.read_text(encoding="utf-8"), path.parent, allow_empty)


def format_interpretation(pi: Interpretation) -> str:
    S = pi.semiring
    lines = [f"semiring {S.name}", f"vocab {pi.vocab}", "universe " + " ".join(pi.universe)]
    for rel, positive, args in pi.vocab.literals(pi.universe):
        v = pi.value(rel, positive, args)
        lines.append(f"lit {'' if positive else '!'}{rel}({','.join(args)}) = {S.format_value(v)}")
    return "\n".join(lines) + "\n"
