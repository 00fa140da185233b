"""Command line front end.

Interpretation arguments are file paths, or ``gallery:<id>:<key>`` for a
built-in example (keys are usually ``A`` and ``B``).

Exit codes: 0 success, 1 check failure, 2 usage or input error, 3 resource
budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .charform import (ExponentBudgetError, boolean_one_sided_chi, lattice_chi_P, lattice_chi_s, nat_chi,
                       nat_schedule)
from .equiv import decide_equiv
from .gallery import DEFAULT_SEED, gallery_ids, get_entry, run_entry
from .games import (GameError, render_witness, solve_bijection, solve_counting, solve_ef, solve_hom_game,
                    solve_one_sided, solve_unbounded)
from .homsets import LatticeError, idc_elements, idc_homset, prime_homset, prime_ideals, verify_separating
from .interp import Interpretation, InterpretationError, load_interpretation
from .logic import EvaluationError, FormulaSyntaxError, evaluate, parse_formula, print_formula, quantifier_rank
from .provenance import ResourceLimitError
from .semiring import (Boolean, FiniteMapHom, FiniteTable, SemiringError, is_absorptive, is_fully_idempotent,
                       parse_semiring, parse_table_semiring, verify_hom)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _out(line: str = "") -> None:
    print(line)


# --------------------------------------------------------------------------
# argument helpers


def load_interp(ref: str) -> Interpretation:
    if ref.startswith("gallery:"):
        _, _, rest = ref.partition(":")
        entry_id, _, key = rest.partition(":")
        try:
            env = get_entry(entry_id).interpretations()
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        if key not in env:
            raise UsageError(f"gallery entry {entry_id} has no interpretation {key!r}; keys: {', '.join(env)}")
        return env[key]
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"no such file: {ref}")
    return load_interpretation(path)


def _tuple(text: str | None) -> tuple:
    if not text:
        return ()
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _assignment(items) -> dict:
    asg = {}
    for item in items or ():
        var, sep, elem = item.partition("=")
        if not sep:
            raise UsageError(f"assignment {item!r} must look like x1=a")
        asg[var.strip()] = elem.strip()
    return asg


def load_homset(spec: str, S):
    """``idc``/``prime`` or a file of lines ``name: s=0 t=1 ...`` (images in the Boolean semiring)."""
    if spec == "idc":
        return idc_homset(S)
    if spec == "prime":
        return prime_homset(S)
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"--homset expects idc, prime or a file, got {spec!r}")
    B = Boolean()
    homs = []
    for n, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition(":")
        if not sep:
            raise UsageError(f"{path}:{n}: expected 'name: value=bit ...'")
        pairs = []
        for item in body.split():
            v, eq, bit = item.partition("=")
            if not eq or bit not in ("0", "1"):
                raise UsageError(f"{path}:{n}: bad entry {item!r}")
            pairs.append((S.parse_value(v), int(bit)))
        h = FiniteMapHom(S, B, tuple(pairs), name.strip())
        if {s for s, _ in pairs} != set(S.elements() or ()):
            raise UsageError(f"{path}:{n}: {name.strip()} must map every carrier element")
        check = verify_hom(h)
        if not check.ok:
            raise UsageError(f"{path}:{n}: {name.strip()} is not a homomorphism ({check.witness[0]})")
        homs.append(h)
    if not homs:
        raise UsageError(f"{path}: no homomorphisms")
    return homs


# --------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    pi = load_interp(args.interp)
    phi = parse_formula(args.formula)
    _out(pi.semiring.format_value(evaluate(pi, phi, _assignment(args.assign))))
    return EXIT_OK


def cmd_game(args) -> int:
    if args.setsize is not None and args.kind != "counting":
        raise UsageError("--setsize only applies to the counting game")
    if args.homset is not None and args.kind != "hom":
        raise UsageError("--homset only applies to the hom game")
    if args.kind not in ("unbounded",) and args.moves is None:
        raise UsageError(f"the {args.kind} game needs --moves")
    if args.kind == "unbounded" and (args.start_a or args.start_b):
        raise UsageError("the unbounded game starts from the empty position")
    pa, pb = load_interp(args.a), load_interp(args.b)
    abar, bbar = _tuple(args.start_a), _tuple(args.start_b)
    m = args.moves
    if args.kind == "ef":
        res = solve_ef(pa, abar, pb, bbar, m, args.depth)
    elif args.kind == "bijection":
        res = solve_bijection(pa, abar, pb, bbar, m, args.depth)
    elif args.kind == "counting":
        res = solve_counting(pa, abar, pb, bbar, m, args.setsize or 1, args.depth)
    elif args.kind == "onesided":
        res = solve_one_sided(pa, abar, pb, bbar, m, args.depth)
    elif args.kind == "hom":
        res = solve_hom_game(load_homset(args.homset or "prime", pa.semiring), pa, pb, m, abar, bbar, args.depth)
    else:
        res = solve_unbounded(pa, pb)
    _out(res.winner)
    if not args.quiet:
        for line in render_witness(res.witness):
            _out(line)
    return EXIT_OK


def cmd_equiv(args) -> int:
    pa, pb = load_interp(args.a), load_interp(args.b)
    v = decide_equiv(pa, _tuple(args.start_a), pb, _tuple(args.start_b), args.qr, args.method,
                     args.max_nodes, args.time_limit)
    _out(f"{v.status} (m={v.m}, method {v.method})")
    S = pa.semiring
    if v.formula is not None:
        _out(f"formula: {print_formula(v.formula)}")
    if v.values is not None:
        _out("values: " + ", ".join(S.format_value(x) for x in v.values))
    if v.detail:
        _out(f"detail: {v.detail}")
    return EXIT_OK


def cmd_char(args) -> int:
    pi = load_interp(args.interp)
    abar = _tuple(args.tuple)
    m = args.moves
    if args.kind == "nat":
        n = len(abar) if abar else args.free
        k = len(pi.vocab.literals(tuple(f"x{i}" for i in range(1, n + m + 1))))
        sched = nat_schedule(args.c1, args.c2, k, m, fallback="dominance" if args.dominance else None)
        _out(f"schedule: e={list(sched.e)} d={[d if d < 10**12 else f'~2^{d.bit_length()}' for d in sched.d]} "
             f"methods={list(sched.methods)}")
        phi = nat_chi(sched, pi.vocab, n, m)
    elif args.kind == "boolean":
        phi = boolean_one_sided_chi(pi, abar, m)
    elif args.kind == "lattice-s":
        if args.element is None:
            raise UsageError("--kind lattice-s needs --element")
        phi = lattice_chi_s(pi, abar, m, pi.semiring.parse_value(args.element))
    else:
        if args.ideal is None:
            raise UsageError("--kind lattice-p needs --ideal")
        S = pi.semiring
        phi = lattice_chi_P(pi, abar, m, {S.parse_value(x) for x in _tuple(args.ideal)})
    _out(f"quantifier rank: {quantifier_rank(phi)}")
    _out(print_formula(phi, expand=args.expand))
    if abar and args.kind != "nat":
        asg = {f"x{i}": a for i, a in enumerate(abar, 1)}
        _out(f"value at ({', '.join(abar)}): {pi.semiring.format_value(evaluate(pi, phi, asg))}")
    return EXIT_OK


def cmd_homset(args) -> int:
    S = parse_semiring(args.semiring)
    if args.kind == "idc":
        _out("idc: {" + ", ".join(S.format_value(s) for s in idc_elements(S)) + "}")
        H = idc_homset(S)
    else:
        for P in prime_ideals(S):
            names = sorted(S.format_value(s) for s in P.members)
            _out("prime ideal: {" + ", ".join(names) + "}")
        H = prime_homset(S)
    for h in H:
        _out(f"{h.label}: " + " ".join(f"{S.format_value(s)}->{h(s)}" for s in S.elements()))
    check = verify_separating(S, H)
    if check.ok:
        _out("separating: yes")
        return EXIT_OK
    _, s, t = check.witness
    _out(f"separating: no ({S.format_value(s)} and {S.format_value(t)} are identified)")
    return EXIT_FAIL


def cmd_validate_semiring(args) -> int:
    path = Path(args.source)
    try:
        if path.is_file():
            table = parse_table_semiring(path.read_text(encoding="utf-8"))
            S = FiniteTable(table, path.stem)
        else:
            S = parse_semiring(args.source)
    except SemiringError as exc:
        _out(f"invalid: {exc}")
        return EXIT_FAIL
    _out(f"valid: {S.name}")
    elems = S.elements()
    if elems is not None:
        _out(f"carrier size: {len(elems)}")
        _out(f"fully idempotent: {'yes' if is_fully_idempotent(S) else 'no'}")
        _out(f"absorptive: {'yes' if is_absorptive(S) else 'no'}")
    return EXIT_OK


def cmd_repro(args) -> int:
    _out(f"seed: {args.seed:#x}")
    ids = gallery_ids() if args.id == "all" else [args.id]
    failures = 0
    for entry_id in ids:
        try:
            entry = get_entry(entry_id, args.seed)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        _out(f"{entry.id}: {entry.description}")
        for check, ok, detail in run_entry(entry):
            failures += not ok
            _out(f"  {'PASS' if ok else 'FAIL'} [{check.tag}] {check.name}" + ("" if ok else f" ({detail})"))
    _out(f"{'all checks passed' if not failures else f'{failures} check(s) failed'}")
    return EXIT_FAIL if failures else EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="srgames", description="Games and equivalence for semiring interpretations.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a formula")
    e.add_argument("interp")
    e.add_argument("formula")
    e.add_argument("--assign", action="append", metavar="VAR=ELEM")
    e.set_defaults(fn=cmd_eval)

    g = sub.add_parser("game", help="solve a game")
    g.add_argument("kind", choices=["ef", "bijection", "counting", "unbounded", "onesided", "hom"])
    g.add_argument("a")
    g.add_argument("b")
    g.add_argument("--moves", type=int)
    g.add_argument("--setsize", type=int)
    g.add_argument("--homset", help="idc, prime, or a file of Boolean-valued maps")
    g.add_argument("--start-a", help="comma separated start tuple in A")
    g.add_argument("--start-b", help="comma separated start tuple in B")
    g.add_argument("--depth", type=int, help="depth of the rendered strategy")
    g.add_argument("--quiet", action="store_true", help="print the winner only")
    g.set_defaults(fn=cmd_game)

    q = sub.add_parser("equiv", help="decide m-equivalence")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--qr", type=int, required=True)
    q.add_argument("--max-nodes", type=int, default=9)
    q.add_argument("--method", default="auto", choices=["auto", "lattice", "nat", "natpoly", "boolean", "search"])
    q.add_argument("--time-limit", type=float, default=10.0)
    q.add_argument("--start-a")
    q.add_argument("--start-b")
    q.set_defaults(fn=cmd_equiv)

    c = sub.add_parser("char", help="print a characteristic formula")
    c.add_argument("interp")
    c.add_argument("--kind", required=True, choices=["nat", "boolean", "lattice-s", "lattice-p"])
    c.add_argument("--moves", type=int, required=True)
    c.add_argument("--tuple", help="comma separated start tuple")
    c.add_argument("--free", type=int, default=0, help="free variables for --kind nat without --tuple")
    c.add_argument("--element", help="idc element for lattice-s")
    c.add_argument("--ideal", help="comma separated prime ideal for lattice-p")
    c.add_argument("--c1", type=int, default=2)
    c.add_argument("--c2", type=int, default=3)
    c.add_argument("--dominance", action="store_true", help="fall back to certified exponents when over budget")
    c.add_argument("--expand", action="store_true", help="expand repeated conjunctions and disjunctions")
    c.set_defaults(fn=cmd_char)

    h = sub.add_parser("homset", help="separating homomorphisms of a finite lattice semiring")
    h.add_argument("semiring", help="descriptor, e.g. minmax:3 or table:path")
    h.add_argument("--kind", required=True, choices=["idc", "prime"])
    h.set_defaults(fn=cmd_homset)

    v = sub.add_parser("validate-semiring", help="check the semiring axioms of a table file or descriptor")
    v.add_argument("source")
    v.set_defaults(fn=cmd_validate_semiring)

    r = sub.add_parser("repro", help="run the gallery checks")
    r.add_argument("id", help="gallery id or 'all'")
    r.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    r.set_defaults(fn=cmd_repro)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ResourceLimitError, ExponentBudgetError) as exc:
        print(f"error: resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FormulaSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, InterpretationError, EvaluationError, SemiringError, LatticeError, GameError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
