import random

import pytest
from hypothesis import given, settings, strategies as st

from srgames.games import (
    DUPLICATOR, SPOILER, DuplicatorTable, GameError, SpoilerTrace, build_back_and_forth, position_ok,
    render_witness, solve_bijection, solve_counting, solve_ef, solve_hom_game, solve_one_sided, solve_unbounded,
)
from srgames.gallery import nat_count_pair, pi_st, sigma4_pair, wxy_rows
from srgames.homsets import prime_homset
from srgames.interp import Interpretation, InterpretationError, Vocabulary
from srgames.semiring import IdentityHom, MinMax, Nat, NatTrunc

from .oracles import (
    naive_bg, naive_cg, naive_ef, naive_isomorphic, naive_local_iso, naive_one_sided, naive_one_sided_ok,
    random_monadic, random_pair,
)

S3 = MinMax(2)


def _binary(S, prefix, size, rng, values):
    names = [f"{prefix}{i}" for i in range(size)]
    vocab = Vocabulary.of([("E", 2)])
    return Interpretation(S, vocab, names, {k: rng.choice(values) for k in vocab.literals(names)})


def _pair(rng, max_size=3):
    if rng.random() < 0.3:
        return (_binary(S3, "a", rng.randint(1, 2), rng, (0, 1, 2)),
                _binary(S3, "b", rng.randint(1, 2), rng, (0, 1, 2)))
    # few values make Duplicator wins common enough to matter
    return random_pair(S3, rng, max_size, ("R",), values=(0, 2))


def _start(rng, pa, pb):
    k = rng.choice((0, 0, 1))
    return (tuple(rng.choice(pa.universe) for _ in range(k)), tuple(rng.choice(pb.universe) for _ in range(k)))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ef_matches_minimax(seed):
    rng = random.Random(seed)
    pa, pb = _pair(rng)
    abar, bbar = _start(rng, pa, pb)
    m = rng.randint(0, 2)
    res = solve_ef(pa, abar, pb, bbar, m)
    assert res.duplicator_wins == naive_ef(pa, abar, pb, bbar, m)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_one_sided_matches_minimax(seed):
    rng = random.Random(seed)
    pa, pb = random_pair(S3, rng, 3, ("R", "Q"))
    m = rng.randint(0, 2)
    assert solve_one_sided(pa, (), pb, (), m).duplicator_wins == naive_one_sided(pa, (), pb, (), m)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bijection_matches_permutation_search(seed):
    rng = random.Random(seed)
    pa, pb = _pair(rng)
    abar, bbar = _start(rng, pa, pb)
    m = rng.randint(0, 2)
    assert solve_bijection(pa, abar, pb, bbar, m).duplicator_wins == naive_bg(pa, abar, pb, bbar, m)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_counting_matches_set_minimax(seed):
    rng = random.Random(seed)
    pa, pb = _pair(rng)
    abar, bbar = _start(rng, pa, pb)
    m, n = rng.randint(0, 2), rng.randint(1, 3)
    assert solve_counting(pa, abar, pb, bbar, m, n).duplicator_wins == naive_cg(pa, abar, pb, bbar, m, n)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_hierarchy(seed):
    rng = random.Random(seed)
    pa, pb = _pair(rng)
    m = rng.randint(1, 3)
    ef = solve_ef(pa, (), pb, (), m).duplicator_wins
    bg = solve_bijection(pa, (), pb, (), m).duplicator_wins
    cg = [solve_counting(pa, (), pb, (), m, n).duplicator_wins for n in (1, 2, 3)]
    assert cg[0] == ef
    if bg:
        assert all(cg)
    for hi, lo in zip(cg[1:], cg):
        assert not hi or lo
    assert (build_back_and_forth(pa, pb, m) is not None) == ef


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_unbounded_is_isomorphism(seed):
    rng = random.Random(seed)
    pa, pb = random_pair(NatTrunc(1), rng, 3, ("R", "Q"))
    res = solve_unbounded(pa, pb)
    assert res.duplicator_wins == naive_isomorphic(pa, pb)


# witness replay


def _replay_spoiler(pa, pb, pos, trace, r, one_sided=False):
    """Every Duplicator reply either breaks the condition or loses the rest by the trace."""
    ok = naive_one_sided_ok if one_sided else naive_local_iso
    side, x = trace.move
    others = pb.universe if side == "A" else pa.universe
    assert set(trace.replies) == set(others)
    for y, sub in trace.replies.items():
        a, b = (x, y) if side == "A" else (y, x)
        abar, bbar = pos[0] + (a,), pos[1] + (b,)
        if sub is None:
            assert not ok(pa, abar, pb, bbar)
        else:
            assert ok(pa, abar, pb, bbar)
            _replay_spoiler(pa, pb, (abar, bbar), sub, r - 1, one_sided)


def _replay_duplicator(pa, pb, pos, table, r):
    for (side, x), (y, sub) in table.responses.items():
        a, b = (x, y) if side == "A" else (y, x)
        abar, bbar = pos[0] + (a,), pos[1] + (b,)
        assert naive_ef(pa, abar, pb, bbar, r - 1)
        if sub is not None:
            _replay_duplicator(pa, pb, (abar, bbar), sub, r - 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ef_witnesses_replay(seed):
    rng = random.Random(seed)
    pa, pb = _pair(rng)
    m = rng.randint(1, 3)
    res = solve_ef(pa, (), pb, (), m, depth=m)
    if res.duplicator_wins:
        assert isinstance(res.witness, DuplicatorTable)
        assert len(res.witness.responses) == len(pa) + len(pb)
        _replay_duplicator(pa, pb, ((), ()), res.witness, m)
    else:
        _replay_spoiler(pa, pb, ((), ()), res.witness, m)
    assert render_witness(res.witness)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_one_sided_spoiler_witness_replays(seed):
    rng = random.Random(seed)
    pa, pb = random_pair(S3, rng, 3, ("R",))
    res = solve_one_sided(pa, (), pb, (), 2, depth=2)
    if not res.duplicator_wins:
        _replay_spoiler(pa, pb, ((), ()), res.witness, 2, one_sided=True)


def _replay_set_spoiler(pa, pb, pos, trace, r, n):
    if trace.move == ("size",):
        assert len(pa) != len(pb)
        return
    side, X = trace.move
    assert 1 <= len(X) <= (n or len(X))
    for (a, b), sub in trace.replies.items():
        assert (a if side == "A" else b) in X
        abar, bbar = pos[0] + (a,), pos[1] + (b,)
        if sub is None:
            ok = naive_local_iso(pa, abar, pb, bbar)
            assert not ok or (naive_cg(pa, abar, pb, bbar, r - 1, n) is False if n else
                              not naive_bg(pa, abar, pb, bbar, r - 1))
        else:
            _replay_set_spoiler(pa, pb, (abar, bbar), sub, r - 1, n)
    # Duplicator's set must contain a reply outside X's good neighbours, so Spoiler needs one per x
    replied = {b if side == "A" else a for a, b in trace.replies}
    other = pb.universe if side == "A" else pa.universe
    assert len(other) - len(replied) < len(X)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_set_game_witnesses_replay(seed):
    rng = random.Random(seed)
    pa, pb = _pair(rng)
    m = rng.randint(1, 2)
    for res, n in ((solve_counting(pa, (), pb, (), m, 2, depth=m), 2), (solve_bijection(pa, (), pb, (), m, depth=m), None)):
        if not res.duplicator_wins:
            _replay_set_spoiler(pa, pb, ((), ()), res.witness, m, n)
        assert render_witness(res.witness)


def test_bijection_duplicator_table_is_a_bijection():
    a, b = pi_st(S3, 1, 1)
    res = solve_bijection(a, (), b, (), 2, depth=2)
    assert res.duplicator_wins
    f = dict(res.witness.responses["bijection"][0])
    assert sorted(f) == sorted(a.universe) and sorted(f.values()) == sorted(b.universe)


def test_gallery_games():
    a, b = pi_st(S3, 1, 2)
    assert solve_ef(a, (), b, (), 1).winner == SPOILER
    a, b = nat_count_pair()
    assert solve_bijection(a, (), b, (), 1).winner == SPOILER
    # the EF game misses the difference that counting reveals
    assert solve_ef(a, (), b, (), 1).winner == DUPLICATOR
    one, two, three = (wxy_rows(k, p) for k, p in ((1, "a"), (2, "b"), (3, "c")))
    assert solve_counting(one, (), two, (), 1, 2).winner == SPOILER
    assert solve_counting(two, (), three, (), 1, 2).winner == DUPLICATOR


def test_hom_game_on_sigma4():
    a, b = sigma4_pair()
    H = prime_homset(a.semiring)
    assert solve_hom_game(H, a, b, 2).duplicator_wins
    assert solve_ef(a, (), b, (), 1).winner == SPOILER


def test_back_and_forth_levels():
    a, b = pi_st(S3, 1, 1)
    system = build_back_and_forth(a, b, 2)
    assert system is not None and len(system) == 3
    assert frozenset() in system.levels[2]
    a, b = pi_st(S3, 1, 2)
    assert build_back_and_forth(a, b, 1) is None


def test_position_ok():
    a, b = nat_count_pair()
    assert position_ok(a, (), b, ())
    assert not position_ok(a, ("a1", "a1"), b, ("b1", "b2"))


def test_errors():
    a, b = nat_count_pair()
    with pytest.raises(GameError):
        solve_ef(a, (), b, (), -1)
    with pytest.raises(GameError):
        solve_counting(a, (), b, (), 1, 0)
    with pytest.raises(GameError):
        solve_ef(a, ("a1",), b, (), 1)
    with pytest.raises(GameError):
        solve_ef(a, ("zz",), b, ("b1",), 1)
    c = Interpretation.from_table(S3, ["R"], {"c": (1, 0)})
    with pytest.raises(GameError, match="semiring mismatch"):
        solve_ef(a, (), c, (), 1)
    other = Interpretation.from_table(Nat(), ["Q"], {"q": (1, 0)})
    with pytest.raises(InterpretationError):
        solve_ef(a, (), other, (), 1)
    with pytest.raises(GameError):
        solve_hom_game([], a, b, 1)
    with pytest.raises(GameError, match="Boolean"):
        solve_hom_game([IdentityHom(Nat(), Nat())], a, b, 1)


def test_start_failure_is_reported():
    a, b = nat_count_pair()
    res = solve_ef(a, ("a1", "a2"), b, ("b1", "b1"), 2)
    assert res.winner == SPOILER and res.witness.move == ("start",)
    assert "already violates" in render_witness(res.witness)[0]
