"""First-order formulas in negation normal form: syntax, evaluation, enumeration.

Text syntax::

    E x. phi            existential, scope extends maximally to the right
    A x. phi            universal
    phi & psi           conjunction (binds tighter than |)
    phi | psi           disjunction
    R(x,y)  !R(x,y)     literals
    x = y   x != y      (in)equalities
    true  false         empty conjunction / disjunction
    and(phi)  or(phi)   one-element conjunction / disjunction
    or^n(phi) and^n(phi)  n-fold repetition of phi under | or &

Negation is only allowed directly on relation atoms.
"""

from __future__ import annotations

import re
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .interp import Interpretation, Vocabulary
from .provenance import ResourceLimitError

__all__ = [
    "Formula", "PosLit", "NegLit", "Eq", "Neq", "And", "Or", "Exists", "Forall",
    "Repeat", "FormulaSyntaxError", "EvaluationError", "parse_formula",
    "print_formula", "quantifier_rank", "evaluate", "Evaluator",
    "enumerate_formulas", "var_pool", "expand_repeats",
]


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EvaluationError(ValueError):
    pass


def _var_key(v: str):
    m = re.fullmatch(r"x(\d+)", v)
    return (0, int(m.group(1)), "") if m else (1, 0, v)


class Formula:
    """Immutable formula node with cached hash, free variables, size and rank."""

    __slots__ = ("_hash", "free", "size", "qr")

    def _init(self, fields: tuple, free: frozenset, size: int, qr: int):
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + fields))
        object.__setattr__(self, "free", tuple(sorted(free, key=_var_key)))
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "qr", qr)

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def _fields(self) -> tuple:
        raise NotImplementedError

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (type(self) is type(other) and self._hash == other._hash
                and self._fields() == other._fields())

    def __ne__(self, other) -> bool:
        return not self == other

    def __repr__(self) -> str:
        return f"{type(self).__name__}({print_formula(self)!r})"

    def __str__(self) -> str:
        return print_formula(self)


class _Lit(Formula):
    __slots__ = ("rel", "args")

    def __init__(self, rel: str, args: Sequence[str]):
        args = tuple(args)
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "args", args)
        self._init((rel, args), frozenset(args), 1, 0)

    def _fields(self):
        return (self.rel, self.args)


class PosLit(_Lit):
    __slots__ = ()


class NegLit(_Lit):
    __slots__ = ()


class _Cmp(Formula):
    __slots__ = ("left", "right")

    def __init__(self, left: str, right: str):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._init((left, right), frozenset((left, right)), 1, 0)

    def _fields(self):
        return (self.left, self.right)


class Eq(_Cmp):
    __slots__ = ()


class Neq(_Cmp):
    __slots__ = ()


class _Junction(Formula):
    __slots__ = ("children",)

    def __init__(self, children: Iterable[Formula]):
        children = tuple(children)
        object.__setattr__(self, "children", children)
        free = frozenset().union(*(c.free for c in children))
        self._init(children, free, 1 + sum(c.size for c in children),
                   max((c.qr for c in children), default=0))

    def _fields(self):
        return self.children


class And(_Junction):
    __slots__ = ()


class Or(_Junction):
    __slots__ = ()


class _Quant(Formula):
    __slots__ = ("var", "body")

    def __init__(self, var: str, body: Formula):
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "body", body)
        self._init((var, body), frozenset(body.free) - {var}, 1 + body.size, 1 + body.qr)

    def _fields(self):
        return (self.var, self.body)


class Exists(_Quant):
    __slots__ = ()


class Forall(_Quant):
    __slots__ = ()


class Repeat(Formula):
    """``count`` copies of ``body`` joined by ``op`` ("or" or "and"), kept unexpanded."""

    __slots__ = ("op", "body", "count")

    def __init__(self, op: str, body: Formula, count: int):
        if op not in ("or", "and"):
            raise ValueError("op must be 'or' or 'and'")
        if count < 0:
            raise ValueError("count must be non-negative")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "count", count)
        self._init((op, body, count), frozenset(body.free), 1 + body.size, body.qr)

    def _fields(self):
        return (self.op, self.body, self.count)


def quantifier_rank(phi: Formula) -> int:
    return phi.qr


def expand_repeats(phi: Formula) -> Formula:
    """Replace every :class:`Repeat` by the literal n-fold disjunction/conjunction."""
    memo: dict = {}

    def go(f):
        if f in memo:
            return memo[f]
        if isinstance(f, Repeat):
            body = go(f.body)
            out = (Or if f.op == "or" else And)([body] * f.count)
        elif isinstance(f, _Junction):
            out = type(f)(go(c) for c in f.children)
        elif isinstance(f, _Quant):
            out = type(f)(f.var, go(f.body))
        else:
            out = f
        memo[f] = out
        return out

    return go(phi)


# --------------------------------------------------------------------------
# printing


def print_formula(phi: Formula, expand: bool = False) -> str:
    if expand:
        phi = expand_repeats(phi)
    return _show(phi)


def _show(f: Formula) -> str:
    if isinstance(f, PosLit):
        return f"{f.rel}({','.join(f.args)})"
    if isinstance(f, NegLit):
        return f"!{f.rel}({','.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Neq):
        return f"{f.left} != {f.right}"
    if isinstance(f, _Quant):
        q = "E" if isinstance(f, Exists) else "A"
        return f"{q} {f.var}. {_show(f.body)}"
    if isinstance(f, Repeat):
        return f"{f.op}^{f.count}({_show(f.body)})"
    if isinstance(f, _Junction):
        word = "and" if isinstance(f, And) else "or"
        if not f.children:
            return "true" if word == "and" else "false"
        if len(f.children) == 1:
            return f"{word}({_show(f.children[0])})"
        sep = " & " if word == "and" else " | "
        parts = []
        for c in f.children:
            s = _show(c)
            wrap = isinstance(c, (_Quant, Or)) or (isinstance(c, And) and len(c.children) > 1)
            if isinstance(f, Or) and isinstance(c, And) and len(c.children) > 1:
                wrap = True
            parts.append(f"({s})" if wrap else s)
        return sep.join(parts)
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(!=)|([A-Za-z_][A-Za-z0-9_]*)|(\d+)|([()&|!=.,^]))")


def _tokenize(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> str:
        return self.toks[min(self.i + k, len(self.toks) - 1)][0]

    def pos(self) -> int:
        return self.toks[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.peek()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) or tok == "<end>":
            raise FormulaSyntaxError(f"expected identifier, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.disj()
        if self.peek() != "<end>":
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.pos())
        return f

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(parts)

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(parts)

    def unary(self) -> Formula:
        tok, nxt = self.peek(), self.peek(1)
        if tok in ("E", "A") and nxt not in ("(", "=", "!=", "<end>"):
            self.take()
            var = self.ident()
            self.take(".")
            body = self.disj()
            return (Exists if tok == "E" else Forall)(var, body)
        if tok == "(":
            self.take()
            f = self.disj()
            self.take(")")
            return f
        if tok == "!":
            start = self.pos()
            self.take()
            if self.peek(1) != "(" or not re.fullmatch(r"[A-Za-z_]\w*", self.peek()):
                raise FormulaSyntaxError("negation is only allowed on relation atoms (NNF)", start)
            rel = self.ident()
            return NegLit(rel, self.args())
        if tok in ("true", "false") and nxt not in ("(", "=", "!="):
            self.take()
            return And(()) if tok == "true" else Or(())
        if tok in ("and", "or") and nxt in ("(", "^"):
            self.take()
            if self.peek() == "^":
                self.take()
                count = self.peek()
                if not count.isdigit():
                    raise FormulaSyntaxError("expected repetition count", self.pos())
                self.take()
                self.take("(")
                body = self.disj()
                self.take(")")
                return Repeat(tok, body, int(count))
            self.take("(")
            body = self.disj()
            self.take(")")
            return (And if tok == "and" else Or)((body,))
        name = self.ident()
        if self.peek() == "(":
            return PosLit(name, self.args())
        if self.peek() in ("=", "!="):
            op = self.take()
            other = self.ident()
            return Eq(name, other) if op == "=" else Neq(name, other)
        raise FormulaSyntaxError(f"expected atom after {name!r}", self.pos())

    def args(self) -> tuple:
        self.take("(")
        out = [self.ident()]
        while self.peek() == ",":
            self.take()
            out.append(self.ident())
        self.take(")")
        return tuple(out)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# evaluation


class Evaluator:
    """Evaluates formulas on one interpretation, memoising per (subformula, bound values)."""

    def __init__(self, pi: Interpretation):
        self.pi = pi
        self.S = pi.semiring
        self.memo: dict = {}

    def value(self, phi: Formula, asg: Mapping[str, str] | None = None):
        asg = dict(asg or {})
        for v in phi.free:
            if v not in asg:
                raise EvaluationError(f"unbound variable {v}")
            if asg[v] not in self.pi._index:
                raise EvaluationError(f"{asg[v]!r} is not in the universe")
        return self._ev(phi, asg)

    def _ev(self, f: Formula, env: dict):
        key = (f, tuple(env[v] for v in f.free))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        S = self.S
        if isinstance(f, _Lit):
            if len(f.args) != self.pi.vocab.arity(f.rel):
                raise EvaluationError(f"arity mismatch in {f}")
            out = self.pi.value(f.rel, isinstance(f, PosLit), tuple(env[v] for v in f.args))
        elif isinstance(f, _Cmp):
            same = env[f.left] == env[f.right]
            out = S.one if same == isinstance(f, Eq) else S.zero
        elif isinstance(f, And):
            out = S.prod(self._ev(c, env) for c in f.children)
        elif isinstance(f, Or):
            out = S.sum(self._ev(c, env) for c in f.children)
        elif isinstance(f, _Quant):
            saved = env.get(f.var, _MISSING)
            vals = []
            for a in self.pi.universe:
                env[f.var] = a
                vals.append(self._ev(f.body, env))
            if saved is _MISSING:
                del env[f.var]
            else:
                env[f.var] = saved
            out = S.sum(vals) if isinstance(f, Exists) else S.prod(vals)
        elif isinstance(f, Repeat):
            inner = self._ev(f.body, env)
            out = S.times(inner, f.count) if f.op == "or" else S.power(inner, f.count)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.memo[key] = out
        return out


_MISSING = object()


def evaluate(pi: Interpretation, phi: Formula, asg: Mapping[str, str] | None = None):
    return Evaluator(pi).value(phi, asg)


# --------------------------------------------------------------------------
# canonical enumeration


def var_pool(n: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, n + 1))


class _Enumerator:
    def __init__(self, vocab: Vocabulary, max_formulas: int | None):
        self.vocab = vocab
        self.max_formulas = max_formulas
        self.count = 0
        self.cache: dict = {}

    def fresh(self, scope: tuple) -> str:
        i = 1
        while f"x{i}" in scope:
            i += 1
        return f"x{i}"

    def exact(self, size: int, scope: tuple, q: int) -> list:
        key = (size, scope, q)
        if key in self.cache:
            return self.cache[key]
        out: list = []
        if size == 1:
            for rel, arity in self.vocab.relations:
                for cls in (PosLit, NegLit):
                    for args in product(scope, repeat=arity):
                        out.append(cls(rel, args))
            for cls in (Eq, Neq):
                for i, u in enumerate(scope):
                    for v in scope[i:]:
                        out.append(cls(u, v))
        else:
            if q >= 1:
                v = self.fresh(scope)
                inner = self.exact(size - 1, scope + (v,), q - 1)
                for cls in (Exists, Forall):
                    out.extend(cls(v, body) for body in inner)
            if size >= 3:
                for cls in (And, Or):
                    for kids in self._combos(size - 1, scope, q, cls, (1, -1)):
                        if len(kids) >= 2:
                            out.append(cls(kids))
        self.count += len(out)
        if self.max_formulas is not None and self.count > self.max_formulas:
            raise ResourceLimitError(f"formula enumeration exceeded {self.max_formulas} formulas")
        self.cache[key] = out
        return out

    def _combos(self, total: int, scope: tuple, q: int, kind, start) -> Iterator[tuple]:
        s0, i0 = start
        for s in range(s0, total + 1):
            rest = total - s
            if 0 < rest < s:
                continue
            items = self.exact(s, scope, q)
            for i in range(i0 + 1 if s == s0 else 0, len(items)):
                child = items[i]
                if isinstance(child, kind):
                    continue
                if rest == 0:
                    yield (child,)
                else:
                    for tail in self._combos(rest, scope, q, kind, (s, i)):
                        yield (child,) + tail


def enumerate_formulas(vocab: Vocabulary, free_vars: Sequence[str], max_qr: int,
                       max_nodes: int = 9, max_formulas: int | None = None) -> Iterator[Formula]:
    """Canonical NNF formulas by increasing node count.

    And/Or are n-ary with at least two distinct children, no child of the same
    connective, children in enumeration order; bound variables are the first
    pool names ``x1, x2, ...`` not already in scope.
    """
    gen = _Enumerator(vocab, max_formulas)
    scope = tuple(free_vars)
    for size in range(1, max_nodes + 1):
        yield from gen.exact(size, scope, max_qr)
