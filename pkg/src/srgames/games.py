"""Exact solvers for model-comparison games on finite interpretations.

Positions are sets of pairs ``(a, b)``.  The winning condition (local
isomorphism, or literal-wise ``<=`` for the one-sided game) is hereditary, so a
position that violates it is lost for Duplicator immediately and every solver
stops there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping, Sequence

from .interp import Interpretation, InterpretationError, PartialMap, compose_hom_interp, find_isomorphism
from .semiring import Boolean, SemiringHom

__all__ = [
    "SPOILER", "DUPLICATOR", "GameError", "SpoilerTrace", "DuplicatorTable", "GameResult",
    "BackAndForthSystem", "solve_ef", "solve_bijection", "solve_counting", "solve_unbounded",
    "solve_one_sided", "solve_hom_game", "build_back_and_forth", "render_witness",
    "position_ok",
]

SPOILER = "Spoiler"
DUPLICATOR = "Duplicator"


class GameError(ValueError):
    pass


@dataclass(eq=False)
class SpoilerTrace:
    """Spoiler's winning move and, per Duplicator reply, how Spoiler continues.

    ``replies`` maps a reply (for EF-style games the answered element, for set
    games the resulting pair) to the next trace, or to ``None`` when the reply
    already violates the winning condition or the depth cap was reached.
    """

    move: tuple
    replies: dict = field(default_factory=dict)


@dataclass(eq=False)
class DuplicatorTable:
    """Duplicator's answer to every Spoiler move: ``move -> (reply, next table)``."""

    responses: dict = field(default_factory=dict)


@dataclass(eq=False)
class GameResult:
    winner: str
    kind: str
    m: int | None
    witness: object = None

    @property
    def duplicator_wins(self) -> bool:
        return self.winner == DUPLICATOR

    def __str__(self) -> str:
        return self.winner


@dataclass(eq=False)
class BackAndForthSystem:
    levels: list  # levels[j] = I_j, a set of frozensets of pairs; printed from I_m down to I_0

    def __len__(self) -> int:
        return len(self.levels)


# --------------------------------------------------------------------------
# arena: incremental checking of the winning condition


class _Arena:
    def __init__(self, pi_a: Interpretation, pi_b: Interpretation, one_sided: bool = False):
        if pi_a.vocab != pi_b.vocab:
            raise InterpretationError("vocabulary mismatch")
        if pi_a.semiring != pi_b.semiring:
            raise GameError(f"semiring mismatch: {pi_a.semiring.name} vs {pi_b.semiring.name}")
        self.pa, self.pb = pi_a, pi_b
        self.A, self.B = pi_a.universe, pi_b.universe
        self.rels = pi_a.vocab.relations
        self.leq = pi_a.semiring.leq if one_sided else None
        self._idx: dict = {}

    def _tuples(self, k: int, arity: int):
        key = (k, arity)
        if key not in self._idx:
            self._idx[key] = [t for t in product(range(k + 1), repeat=arity) if k in t]
        return self._idx[key]

    def extend_ok(self, pairs: tuple, a: str, b: str) -> bool:
        """Assuming ``pairs`` satisfies the condition, does ``pairs + (a, b)``?"""
        for x, y in pairs:
            if (x == a) != (y == b):
                return False
            if x == a:
                return True
        xs = [x for x, _ in pairs] + [a]
        ys = [y for _, y in pairs] + [b]
        k = len(pairs)
        va, vb = self.pa._values, self.pb._values
        leq = self.leq
        for rel, arity in self.rels:
            for t in self._tuples(k, arity):
                ta = tuple(xs[i] for i in t)
                tb = tuple(ys[i] for i in t)
                for positive in (True, False):
                    s, u = va[(rel, positive, ta)], vb[(rel, positive, tb)]
                    if leq is None:
                        if s != u:
                            return False
                    elif not leq(s, u):
                        return False
        return True

    def start(self, abar: Sequence[str], bbar: Sequence[str]):
        """Initial position as a frozenset, or ``None`` if it already fails."""
        if len(abar) != len(bbar):
            raise GameError("start tuples of different length")
        for a in abar:
            if a not in self.pa._index:
                raise GameError(f"{a!r} is not in the first universe")
        for b in bbar:
            if b not in self.pb._index:
                raise GameError(f"{b!r} is not in the second universe")
        pairs: list = []
        for a, b in zip(abar, bbar):
            if (a, b) in pairs:
                continue
            if not self.extend_ok(tuple(pairs), a, b):
                return None
            pairs.append((a, b))
        return frozenset(pairs)

    def add(self, pos: frozenset, a: str, b: str):
        """The extended position, or ``None`` if the condition breaks."""
        if (a, b) in pos:
            return pos
        if not self.extend_ok(tuple(pos), a, b):
            return None
        return pos | {(a, b)}


def position_ok(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation,
                bbar: Sequence[str], one_sided: bool = False) -> bool:
    """The winning condition of a finished play: local isomorphism, or literal-wise ``<=``."""
    return _Arena(pi_a, pi_b, one_sided).start(abar, bbar) is not None


def _depth_cap(m: int, depth: int | None) -> int:
    if depth is not None:
        return depth
    return m if m <= 3 else 1


# --------------------------------------------------------------------------
# Ehrenfeucht-Fraisse style games (also the one-sided variant)


class _EF:
    def __init__(self, arena: _Arena):
        self.ar = arena
        self.memo: dict = {}

    def wins(self, pos: frozenset, r: int) -> bool:
        if r == 0:
            return True
        key = (pos, r)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        ar = self.ar
        out = all(self._answer(pos, r, "A", a) is not None for a in ar.A) and \
            all(self._answer(pos, r, "B", b) is not None for b in ar.B)
        self.memo[key] = out
        return out

    def _answer(self, pos, r, side, x):
        """Duplicator's first winning reply to Spoiler's move, or ``None``."""
        ar = self.ar
        for y in (ar.B if side == "A" else ar.A):
            nxt = ar.add(pos, x, y) if side == "A" else ar.add(pos, y, x)
            if nxt is not None and self.wins(nxt, r - 1):
                return y, nxt
        return None

    def spoiler_trace(self, pos, r, depth) -> SpoilerTrace:
        ar = self.ar
        for side, xs in (("A", ar.A), ("B", ar.B)):
            for x in xs:
                if self._answer(pos, r, side, x) is None:
                    replies = {}
                    for y in (ar.B if side == "A" else ar.A):
                        nxt = ar.add(pos, x, y) if side == "A" else ar.add(pos, y, x)
                        if nxt is None or depth <= 1:
                            replies[y] = None
                        else:
                            replies[y] = self.spoiler_trace(nxt, r - 1, depth - 1)
                    return SpoilerTrace((side, x), replies)
        raise AssertionError("Spoiler has no winning move")

    def duplicator_table(self, pos, r, depth) -> DuplicatorTable:
        ar = self.ar
        table = DuplicatorTable()
        if r == 0:
            return table
        for side, xs in (("A", ar.A), ("B", ar.B)):
            for x in xs:
                y, nxt = self._answer(pos, r, side, x)
                sub = self.duplicator_table(nxt, r - 1, depth - 1) if depth > 1 and r > 1 else None
                table.responses[(side, x)] = (y, sub)
        return table


def _solve_ef_like(arena: _Arena, abar, bbar, m: int, kind: str, depth) -> GameResult:
    if m < 0:
        raise GameError("number of moves must be non-negative")
    pos = arena.start(abar, bbar)
    if pos is None:
        return GameResult(SPOILER, kind, m, SpoilerTrace(("start",)))
    solver = _EF(arena)
    cap = _depth_cap(m, depth)
    if solver.wins(pos, m):
        return GameResult(DUPLICATOR, kind, m, solver.duplicator_table(pos, m, cap))
    return GameResult(SPOILER, kind, m, solver.spoiler_trace(pos, m, cap))


def solve_ef(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation, bbar: Sequence[str],
             m: int, depth: int | None = None) -> GameResult:
    """Winner of the m-move Ehrenfeucht-Fraisse game G_m by minimax."""
    return _solve_ef_like(_Arena(pi_a, pi_b), abar, bbar, m, "ef", depth)


def solve_one_sided(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation,
                    bbar: Sequence[str], m: int, depth: int | None = None) -> GameResult:
    """Winner of the one-sided game: final positions need the same equality
    pattern on both tuples and every literal value on the left ``<=`` its image."""
    return _solve_ef_like(_Arena(pi_a, pi_b, one_sided=True), abar, bbar, m, "onesided", depth)


# --------------------------------------------------------------------------
# counting games and bijection games


class _SetGame:
    """Shared machinery for CG^n_m and BG_m.

    ``good(pos, r, a, b)``: the pair can be added and Duplicator then wins the
    remaining ``r - 1`` rounds.
    """

    def __init__(self, arena: _Arena, n: int | None):
        self.ar = arena
        self.n = n  # None: bijection game
        self.memo: dict = {}
        self.good_memo: dict = {}

    def good(self, pos, r):
        key = (pos, r)
        hit = self.good_memo.get(key)
        if hit is None:
            ar = self.ar
            hit = {}
            for a in ar.A:
                for b in ar.B:
                    nxt = ar.add(pos, a, b)
                    hit[(a, b)] = nxt if nxt is not None and self.wins(nxt, r - 1) else None
            self.good_memo[key] = hit
        return hit

    def wins(self, pos, r) -> bool:
        if r == 0:
            return True
        key = (pos, r)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._round_violation(pos, r) is None
            self.memo[key] = hit
        return hit

    def _round_violation(self, pos, r):
        """Spoiler's winning set move for this round, or ``None``."""
        ar = self.ar
        good = self.good(pos, r)
        if self.n is None:
            if len(ar.A) != len(ar.B):
                return ("size",)
            match = _perfect_matching(ar.A, ar.B, lambda a, b: good[(a, b)] is not None)
            if match is not None:
                return None
            return ("A", _hall_violator(ar.A, ar.B, lambda a, b: good[(a, b)] is not None))
        for side, xs, ys in (("A", ar.A, ar.B), ("B", ar.B, ar.A)):
            def ok(x, y):
                return good[(x, y) if side == "A" else (y, x)] is not None
            for size in range(1, self.n + 1):
                for X in combinations(xs, size):
                    nbrs = [y for y in ys if any(ok(x, y) for x in X)]
                    if len(nbrs) < size:
                        return (side, frozenset(X))
        return None

    def spoiler_trace(self, pos, r, depth) -> SpoilerTrace:
        move = self._round_violation(pos, r)
        trace = SpoilerTrace(move)
        if move == ("size",):
            return trace
        side, X = move
        good = self.good(pos, r)
        ar = self.ar
        others = ar.B if side == "A" else ar.A

        def pair(x, y):
            return (x, y) if side == "A" else (y, x)

        nbrs = {y for y in others if any(good[pair(x, y)] is not None for x in X)}
        for x in sorted(X, key=(ar.pa if side == "A" else ar.pb).index):
            for y in others:
                if y in nbrs:
                    continue
                a, b = pair(x, y)
                nxt = ar.add(pos, a, b)
                if nxt is None or depth <= 1:
                    trace.replies[(a, b)] = None
                else:
                    trace.replies[(a, b)] = self.spoiler_trace(nxt, r - 1, depth - 1)
        return trace

    def duplicator_table(self, pos, r, depth) -> DuplicatorTable:
        table = DuplicatorTable()
        if r == 0:
            return table
        ar = self.ar
        good = self.good(pos, r)

        def sub(a, b):
            return self.duplicator_table(good[(a, b)], r - 1, depth - 1) if depth > 1 and r > 1 else None

        if self.n is None:
            f = _perfect_matching(ar.A, ar.B, lambda a, b: good[(a, b)] is not None)
            table.responses["bijection"] = (tuple(f.items()), {a: sub(a, f[a]) for a in ar.A})
            return table
        for side, xs, ys in (("A", ar.A, ar.B), ("B", ar.B, ar.A)):
            def pair(x, y):
                return (x, y) if side == "A" else (y, x)
            for size in range(1, self.n + 1):
                for X in combinations(xs, size):
                    Y = [y for y in ys if any(good[pair(x, y)] is not None for x in X)][:size]
                    answers = {}
                    for y in Y:
                        x = next(x for x in X if good[pair(x, y)] is not None)
                        answers[y] = (x, sub(*pair(x, y)))
                    table.responses[(side, frozenset(X))] = (tuple(Y), answers)
        return table


def _perfect_matching(A, B, edge) -> dict | None:
    """Augmenting-path bipartite matching; returns a bijection A -> B or ``None``."""
    match_b: dict = {}

    def augment(a, seen) -> bool:
        for b in B:
            if b in seen or not edge(a, b):
                continue
            seen.add(b)
            if b not in match_b or augment(match_b[b], seen):
                match_b[b] = a
                return True
        return False

    for a in A:
        if not augment(a, set()):
            return None
    return {a: b for b, a in match_b.items()}


def _hall_violator(A, B, edge) -> frozenset:
    """A smallest set X of A with fewer than |X| neighbours (exists when no perfect matching does)."""
    for size in range(1, len(A) + 1):
        for X in combinations(A, size):
            if sum(1 for b in B if any(edge(a, b) for a in X)) < size:
                return frozenset(X)
    raise AssertionError("no Hall violator although matching failed")


def _solve_set_game(pi_a, abar, pi_b, bbar, m, n, kind, depth) -> GameResult:
    if m < 0:
        raise GameError("number of moves must be non-negative")
    arena = _Arena(pi_a, pi_b)
    pos = arena.start(abar, bbar)
    if pos is None:
        return GameResult(SPOILER, kind, m, SpoilerTrace(("start",)))
    game = _SetGame(arena, n)
    cap = _depth_cap(m, depth)
    if game.wins(pos, m):
        return GameResult(DUPLICATOR, kind, m, game.duplicator_table(pos, m, cap))
    return GameResult(SPOILER, kind, m, game.spoiler_trace(pos, m, cap))


def solve_bijection(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation,
                    bbar: Sequence[str], m: int, depth: int | None = None) -> GameResult:
    """Winner of BG_m.

    Duplicator survives a round iff some bijection uses only "good" pairs,
    i.e. iff the good-pair graph has a perfect matching; this replaces the
    enumeration of all |A|! bijections.
    """
    return _solve_set_game(pi_a, abar, pi_b, bbar, m, None, "bijection", depth)


def solve_counting(pi_a: Interpretation, abar: Sequence[str], pi_b: Interpretation,
                   bbar: Sequence[str], m: int, n: int, depth: int | None = None) -> GameResult:
    """Winner of CG^n_m.

    Spoiler's set X (|X| <= n) is answered by Y of the same size; Spoiler then
    picks y in Y and Duplicator some x in X.  Duplicator survives iff every such
    X has at least |X| elements on the other side that pair well with some x in X.
    """
    if n < 1:
        raise GameError("set size n must be at least 1")
    return _solve_set_game(pi_a, abar, pi_b, bbar, m, n, "counting", depth)


# --------------------------------------------------------------------------
# unbounded and homomorphism games


def solve_unbounded(pi_a: Interpretation, pi_b: Interpretation) -> GameResult:
    """Duplicator wins the unbounded game iff the interpretations are isomorphic."""
    _Arena(pi_a, pi_b)
    iso = find_isomorphism(pi_a, pi_b)
    if iso is not None:
        return GameResult(DUPLICATOR, "unbounded", None, iso)
    m = max(len(pi_a), len(pi_b))
    res = solve_ef(pi_a, (), pi_b, (), m, depth=1)
    if res.duplicator_wins:
        raise AssertionError("EF game at full length disagrees with isomorphism search")
    return GameResult(SPOILER, "unbounded", m, res.witness)


def solve_hom_game(H: Sequence[SemiringHom], pi_a: Interpretation, pi_b: Interpretation, m: int,
                   abar: Sequence[str] = (), bbar: Sequence[str] = (),
                   depth: int | None = None) -> GameResult:
    """HG_m: Spoiler picks h and an orientation, then the one-sided game runs on Boolean images."""
    if not H:
        raise GameError("empty homomorphism set")
    for h in H:
        if not isinstance(h.target, Boolean):
            raise GameError(f"homomorphism {h.label} does not target the Boolean semiring")
        if h.source != pi_a.semiring or h.source != pi_b.semiring:
            raise GameError(f"homomorphism {h.label} has the wrong source semiring")
    table = DuplicatorTable()
    for h in H:
        ia, ib = compose_hom_interp(h, pi_a), compose_hom_interp(h, pi_b)
        for orient, (p0, t0, p1, t1) in (("A<=B", (ia, abar, ib, bbar)), ("B<=A", (ib, bbar, ia, abar))):
            res = solve_one_sided(p0, t0, p1, t1, m, depth)
            if not res.duplicator_wins:
                return GameResult(SPOILER, "hom", m, SpoilerTrace(("hom", h.label, orient), {"game": res.witness}))
            table.responses[(h.label, orient)] = (None, res.witness)
    return GameResult(DUPLICATOR, "hom", m, table)


# --------------------------------------------------------------------------
# back-and-forth systems


def build_back_and_forth(pi_a: Interpretation, pi_b: Interpretation, m: int,
                         abar: Sequence[str] = (), bbar: Sequence[str] = ()) -> BackAndForthSystem | None:
    """Iterated refinement of partial isomorphisms extending the start map.

    I_0 holds every local isomorphism with at most m extra pairs; I_{j+1}
    keeps the maps with at most m - j - 1 extra pairs that have forth and back
    extensions into I_j.  A system exists iff the start map survives into I_m.
    """
    arena = _Arena(pi_a, pi_b)
    root = arena.start(abar, bbar)
    if root is None:
        return None
    by_depth = [{root}]
    for _ in range(m):
        nxt = set()
        for pos in by_depth[-1]:
            for a in arena.A:
                for b in arena.B:
                    q = arena.add(pos, a, b)
                    if q is not None:
                        nxt.add(q)
        by_depth.append(nxt | by_depth[-1])
    levels = [set(by_depth[m])]
    for j in range(1, m + 1):
        prev = levels[-1]
        cur = set()
        for pos in by_depth[m - j]:
            forth = all(any(arena.add(pos, a, b) in prev for b in arena.B) for a in arena.A)
            back = forth and all(any(arena.add(pos, a, b) in prev for a in arena.A) for b in arena.B)
            if forth and back:
                cur.add(pos)
        levels.append(cur)
    if root not in levels[m]:
        return None
    return BackAndForthSystem(levels)


# --------------------------------------------------------------------------
# rendering


def _fmt_move(move) -> str:
    if move == ("start",):
        return "start position already violates the winning condition"
    if move == ("size",):
        return "universes differ in size: no bijection"
    if move[0] == "hom":
        return f"choose {move[1]}, orientation {move[2]}"
    side, x = move
    if isinstance(x, frozenset):
        return f"pick set {{{', '.join(sorted(x))}}} in {side}"
    return f"pick {x} in {side}"


def render_witness(w, indent: int = 0) -> list:
    pad = "  " * indent
    lines: list = []
    if isinstance(w, PartialMap):
        lines.append(f"{pad}isomorphism {w}")
    elif isinstance(w, SpoilerTrace):
        lines.append(f"{pad}Spoiler: {_fmt_move(w.move)}")
        for reply, sub in w.replies.items():
            if reply == "game":
                lines.extend(render_witness(sub, indent + 1))
                continue
            label = "->".join(reply) if isinstance(reply, tuple) else str(reply)
            if sub is None:
                lines.append(f"{pad}  reply {label}: Duplicator loses")
            else:
                lines.append(f"{pad}  reply {label}:")
                lines.extend(render_witness(sub, indent + 2))
    elif isinstance(w, DuplicatorTable):
        for move, (reply, sub) in w.responses.items():
            if move == "bijection":
                lines.append(f"{pad}Duplicator: bijection " + ", ".join(f"{a}->{b}" for a, b in reply))
                for a, t in sub.items():
                    if t is not None and t.responses:
                        lines.append(f"{pad}  after {a}:")
                        lines.extend(render_witness(t, indent + 2))
                continue
            if isinstance(move[0], str) and len(move) == 2 and "<=" in str(move[1]):
                lines.append(f"{pad}Duplicator wins for {move[0]}, orientation {move[1]}")
                lines.extend(render_witness(sub, indent + 1))
                continue
            head = f"{pad}{_fmt_move(move)} -> "
            if isinstance(reply, tuple):
                lines.append(head + "answer {" + ", ".join(reply) + "}")
                for y, (x, t) in sub.items():
                    lines.append(f"{pad}  Spoiler {y}: reply {x}")
                    if t is not None and t.responses:
                        lines.extend(render_witness(t, indent + 2))
            else:
                lines.append(head + f"reply {reply}")
                if sub is not None and sub.responses:
                    lines.extend(render_witness(sub, indent + 1))
    elif w is None:
        pass
    else:
        lines.append(f"{pad}{w}")
    return lines
