"""Command-line driver.

Every report is a sequence of lines ``KIND name text`` where KIND is one of
COMMAND, INFO, VALUE, WITNESS or VERDICT. Exit status: 0 when every verdict is
PASS or FEASIBLE, 1 when some verdict is FAIL or INFEASIBLE, 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from itertools import product
from math import factorial
from pathlib import Path
from typing import Sequence

from . import load_fixture
from .connections import (Connection, Derivation, ExtendedConnection, NotFlatError, NotLinearError,
                          apply_extended, compare_extended, equiviter_rhs, extend_flat, flatness_residuals,
                          is_flat_connection, is_homogeneous_connection, iterate_connection,
                          solve_connection, ti_residual, validate_connection, validate_derivation,
                          validate_extended, extended_flatness_failures)
from .elements import Space, tensor_sum
from .hasse import (check_hasse_axioms, cocycle_check, compose, equivalence, hasse_apply, hasse_from_extended,
                    phi_from_lambda, verify_equivalence)
from .polynomial import Polynomial
from .presentation import Presentation, validate_presentation, weighted_monomials
from .scenario import ParseError, Scenario, parse_scenario, render_polynomial, render_tensor

PASS, FAIL, FEASIBLE, INFEASIBLE = "PASS", "FAIL", "FEASIBLE", "INFEASIBLE"


class InputError(Exception):
    pass


class Report:
    def __init__(self, argv: Sequence[str]):
        self.lines = ["COMMAND " + " ".join(argv)]
        self.verdicts: list[str] = []

    def info(self, text: str) -> None:
        self.lines.append(f"INFO {text}")

    def value(self, name: str, text: str) -> None:
        self.lines.append(f"VALUE {name} = {text}")

    def witness(self, name: str, text: str) -> None:
        self.lines.append(f"WITNESS {name} {text}")

    def verdict(self, name: str, outcome: str | bool) -> bool:
        if isinstance(outcome, bool):
            outcome = PASS if outcome else FAIL
        self.verdicts.append(outcome)
        self.lines.append(f"VERDICT {name} {outcome}")
        return outcome in (PASS, FEASIBLE)

    @property
    def exit_code(self) -> int:
        return 0 if all(v in (PASS, FEASIBLE) for v in self.verdicts) else 1

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


# ------------------------------------------------------------------ helpers

def _load(path: str) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_scenario(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _presentation(s: Scenario) -> Presentation:
    problems = validate_presentation(s.ring, s.module)
    if problems:
        raise InputError("invalid presentation: " + "; ".join(problems))
    return s.presentation


def _derivation(s: Scenario) -> Derivation:
    return Derivation(_presentation(s), s.derivation_degree, s.derivation)


def _connection(s: Scenario, path: str = "scenario") -> Connection:
    if s.connection is None:
        raise InputError(f"{path} has no [connection] section")
    return Connection(_derivation(s), s.connection, s.connection_degree)


def _order(args, s: Scenario | None) -> int:
    if args.order is not None:
        order = args.order
    else:
        order = s.options.order if s is not None else 5
    if order < 1:
        raise InputError("--order must be at least 1")
    return order


def _seed(args, s: Scenario | None) -> int:
    if args.seed is not None:
        return args.seed
    return s.options.seed if s is not None else 0


def _nf(pres: Presentation, t, space: Space | None = None) -> str:
    return render_tensor(pres.normal_form(t, space), pres)


def _extended(gamma: Connection, N: int) -> ExtendedConnection:
    """The flat extension when gamma is flat, otherwise the iterated connection."""
    return extend_flat(gamma, N) if is_flat_connection(gamma) else iterate_connection(gamma, N)


def _same_data(a: Scenario, b: Scenario, what: str) -> None:
    if (a.ring, a.module, a.derivation_degree, a.derivation) != (b.ring, b.module, b.derivation_degree, b.derivation):
        raise InputError(f"{what}: scenarios differ in ring, module or derivation")


# --------------------------------------------------------------- subcommands

def _report_derivation(rep: Report, D: Derivation) -> bool:
    problems = validate_derivation(D)
    for p in problems:
        rep.witness("derivation", p)
    return rep.verdict("derivation", not problems)


def _report_connection(rep: Report, gamma: Connection) -> bool:
    problems = validate_connection(gamma)
    for p in problems:
        rep.witness("connection", p)
    rep.info(f"connection homogeneous of degree {gamma.degree}: {'yes' if is_homogeneous_connection(gamma) else 'no'}")
    return rep.verdict("connection", not problems)


def _report_flat(rep: Report, gamma: Connection) -> bool:
    pres = gamma.pres
    ok = True
    for v, res in flatness_residuals(gamma):
        if res.terms:
            ok = False
            rep.witness("flat", f"(1 - sigma) gamma D({pres.ring.names[v]}) = {render_tensor(res, pres)}")
    return rep.verdict("flat", ok)


def cmd_validate(args, rep: Report) -> None:
    s = _load(args.file)
    problems = validate_presentation(s.ring, s.module)
    for p in problems:
        rep.witness("presentation", p)
    pres_ok = rep.verdict("presentation", not problems)
    rep.info(f"{len(s.ring.names)} variables, {len(s.ring.ideal)} ideal generators, "
             f"{len(s.module.names)} module generators, {len(s.module.relations)} relations")
    if not pres_ok:
        return
    D = _derivation(s)
    if _report_derivation(rep, D) and s.connection is not None:
        _report_connection(rep, _connection(s))


def cmd_check_derivation(args, rep: Report) -> None:
    _report_derivation(rep, _derivation(_load(args.file)))


def cmd_check_connection(args, rep: Report) -> None:
    s = _load(args.file)
    gamma = _connection(s, args.file)
    if _report_derivation(rep, gamma.derivation):
        _report_connection(rep, gamma)


def cmd_check_flat(args, rep: Report) -> None:
    s = _load(args.file)
    gamma = _connection(s, args.file)
    if _report_derivation(rep, gamma.derivation) and _report_connection(rep, gamma):
        _report_flat(rep, gamma)


def cmd_solve_connection(args, rep: Report) -> None:
    s = _load(args.file)
    D = _derivation(s)
    if not _report_derivation(rep, D):
        return
    degree = args.degree if args.degree is not None else s.connection_degree
    _solve(rep, D, degree, args.flat or s.options.flat)


def _solve(rep: Report, D: Derivation, degree: int, flat: bool) -> None:
    pres = D.pres
    result = solve_connection(D, degree, require_flat=flat)
    kind = "flat connection" if flat else "connection"
    if result:
        rep.info(f"{kind} of degree {degree} found; free parameters set to zero (nullity {result.nullity})")
        for j, name in enumerate(pres.module.names):
            rep.value(f"G({name})", _nf(pres, result.assignment[j]))
        rep.verdict("solve-connection", FEASIBLE)
        return
    label, w, residual = result.obstructions[0]
    rep.witness("obstruction", f"{label} weight {w}: {render_tensor(residual, pres)}")
    if degree == D.degree:
        rep.info("certificate: all degrees (weight pieces of other degrees cannot reach the derivation terms)")
    else:
        rep.info(f"certificate: degree {degree} only")
    rep.verdict("solve-connection", INFEASIBLE)


def _report_extension(rep: Report, T: ExtendedConnection, show: bool = True) -> bool:
    pres = T.pres
    if show:
        for i in range(2, T.order + 1):
            for j, name in enumerate(pres.module.names):
                rep.value(f"T{i}({name})", _nf(pres, T.values[i][j], Space("R", i + 1)))
    problems = validate_extended(T)
    for p in problems:
        rep.witness("extended", p)
    ok = rep.verdict("extended", not problems)
    bad = extended_flatness_failures(T)
    for i, v in bad:
        rep.witness("flat-extended", f"T{i} D({pres.ring.names[v]}) is not in K^{i + 1}")
    ok = rep.verdict("flat-extended", not bad) and ok
    ti_bad = [(i, j) for i in range(1, T.order + 1) for j in range(pres.ngens)
              if not pres.is_zero(ti_residual(T, i, pres.gen(j)))]
    for i, j in ti_bad:
        rep.witness("Ti", f"order {i} at {pres.module.names[j]}")
    return rep.verdict("Ti", not ti_bad) and ok


def cmd_extend(args, rep: Report) -> None:
    s = _load(args.file)
    gamma = _connection(s, args.file)
    N = _order(args, s)
    if not (_report_derivation(rep, gamma.derivation) and _report_connection(rep, gamma)
            and _report_flat(rep, gamma)):
        return
    _report_extension(rep, extend_flat(gamma, N))


def cmd_hasse(args, rep: Report) -> None:
    s = _load(args.file)
    gamma = _connection(s, args.file)
    N = _order(args, s)
    pres = gamma.pres
    if not (_report_derivation(rep, gamma.derivation) and _report_connection(rep, gamma)):
        return
    T = _extended(gamma, max(N - 1, 1))
    rep.info(f"extended connection: {'flat extension' if T.label == 'flat' else 'iterated'} of order {T.order}")
    h = hasse_from_extended(T, N)
    if args.var is not None:
        if args.var not in pres.ring.names:
            raise InputError(f"unknown variable {args.var!r}")
        names = [args.var]
    else:
        names = list(pres.ring.names)
    for name in names:
        x = pres.ring.var(name)
        for i in range(1, N + 1):
            rep.value(f"h{i}({name})", _nf(pres, hasse_apply(h, x, i), Space("S", i)))
    r = check_hasse_axioms(h, sample_budget=args.samples, seed=_seed(args, s))
    if r.failure:
        i, a, b, res = r.failure
        rep.witness("hasse-axioms", f"order {i} at a = {render_polynomial(a, pres.ring)}, "
                                    f"b = {render_polynomial(b, pres.ring)}: {render_tensor(res, pres)}")
    else:
        rep.info(f"{r.checked} random pairs checked")
    rep.verdict("hasse-axioms", bool(r))


def cmd_compare(args, rep: Report) -> None:
    sa, sb = _load(args.file_a), _load(args.file_b)
    _same_data(sa, sb, "compare")
    ga, gb = _connection(sa, args.file_a), _connection(sb, args.file_b)
    N = _order(args, sa)
    pres = ga.pres
    T, S = _extended(ga, N), _extended(gb, N)
    try:
        lam = compare_extended(T, S)
    except NotFlatError as exc:
        rep.witness("comparison", f"reference is not flat: {exc}")
        rep.verdict("comparison", FAIL)
        return
    except NotLinearError as exc:
        rep.witness("comparison", str(exc))
        rep.verdict("comparison", FAIL)
        return
    for i in range(1, N + 1):
        for j, name in enumerate(pres.module.names):
            rep.value(f"lambda{i}({name})", _nf(pres, lam.values[i][j], Space("R", i + 1)))
    rep.verdict("comparison", PASS)
    ok = all(pres.equal(equiviter_rhs(lam, T, i, pres.gen(j)), apply_extended(S, i, pres.gen(j)), Space("R", i + 1))
             for i in range(N + 1) for j in range(pres.ngens))
    rep.verdict("equiviter", ok)
    h, h2 = hasse_from_extended(T), hasse_from_extended(S)
    r = verify_equivalence(h, h2, phi_from_lambda(lam))
    if r.failure:
        i, v, res = r.failure
        rep.witness("equivalence", f"order {i} at {pres.ring.names[v]}: {render_tensor(res, pres)}")
    rep.verdict("equivalence", bool(r))


def cmd_cocycle(args, rep: Report) -> None:
    scen = [_load(f) for f in (args.file_a, args.file_b, args.file_c)]
    _same_data(scen[0], scen[1], "cocycle")
    _same_data(scen[0], scen[2], "cocycle")
    N = _order(args, scen[0])
    hs = []
    for s, path in zip(scen, (args.file_a, args.file_b, args.file_c)):
        T = _extended(_connection(s, path), max(N - 1, 1))
        hs.append(hasse_from_extended(T, N))
    try:
        r = cocycle_check(*hs, N)
    except ValueError as exc:
        rep.witness("cocycle", str(exc))
        rep.verdict("cocycle", FAIL)
        return
    rep.info("phi12, phi23, phi13 obtained by " + ", ".join(r.methods))
    for name, ok in zip(("equivalence-12", "equivalence-23", "equivalence-13"), r.equivalences):
        rep.verdict(name, ok)
    for f in r.failures:
        rep.witness("cocycle", f)
    rep.verdict("cocycle", r.cocycle)
    phi21, _ = equivalence(hs[1], hs[0], N)
    rep.verdict("reverse-identity", compose(phi21, r.phi12).is_identity(N - 1))


# ------------------------------------------------------------------ demos

def taylor_component(a: Polynomial, q: int, ngens: int) -> dict[tuple[int, ...], Polynomial]:
    """Coefficients of sum_{j_1..j_q} D_{j_1}...D_{j_q}(a) / q! e_{j_1}...e_{j_q}, keyed by sorted word."""
    out: dict[tuple[int, ...], Polynomial] = {}
    for word in product(range(ngens), repeat=q):
        d = a
        for j in word:
            d = d.diff(j)
        key = tuple(sorted(word))
        out[key] = out.get(key, Polynomial(a.nvars)) + d * Fraction(1, factorial(q))
    return out


def demo_nodal(args, rep: Report) -> None:
    s = load_fixture("nodal")
    D = _derivation(s)
    rep.info("ring Q[x,y]/(xy), module <dx, dy | y*dx + x*dy>, D = d")
    if _report_derivation(rep, D):
        _solve(rep, D, 0, False)


def demo_nongorenstein(args, rep: Report) -> None:
    s = load_fixture("nongorenstein")
    gamma = _connection(s)
    pres = gamma.pres
    N = _order(args, None)
    rep.info("ring Q[t^3,t^4,t^5] as Q[x,y,z]/(y^2-xz, x^3-yz, x^2y-z^2), dualizing module <n1, n2>")
    if not (_report_derivation(rep, gamma.derivation) and _report_connection(rep, gamma)):
        return
    x, y = pres.ring.var("x"), pres.ring.var("y")
    n1, n2 = pres.gen("n1"), pres.gen("n2")
    lhs = gamma(n1.mul_poly(x))
    mid = pres.word(("n1", "n1")).mul_poly(y).scale(7)
    rep.value("G(x*n1)", _nf(pres, lhs))
    rep.verdict("identity-chain", pres.equal(lhs, mid) and pres.equal(mid, gamma(n2.mul_poly(y))))
    if _report_flat(rep, gamma):
        _report_extension(rep, extend_flat(gamma, N), show=False)
        rep.info(f"flat extension built to order {N}")


def demo_taylor(args, rep: Report) -> None:
    s = load_fixture("free_plane")
    gamma = _connection(s)
    pres = gamma.pres
    N = _order(args, None)
    if not (_report_derivation(rep, gamma.derivation) and _report_connection(rep, gamma)):
        return
    h = hasse_from_extended(iterate_connection(gamma, N - 1), N)
    rep.info("h_q(a) compared with sum D_j1...D_jq(a)/q! e_j1...e_jq on monomials of degree <= 3")
    ok = True
    for d in range(4):
        for exps in reversed(weighted_monomials(d, pres.ring)):
            a = Polynomial.monomial(exps)
            for q in range(1, N + 1):
                got = hasse_apply(h, a, q)
                want = tensor_sum((pres.word(w, "S").mul_poly(c) for w, c in taylor_component(a, q, pres.ngens).items()),
                                  Space("S", q), pres.nvars)
                same = pres.equal(got, want, Space("S", q))
                ok = ok and same
                if got.terms:
                    rep.value(f"h{q}({render_polynomial(a, pres.ring)})", _nf(pres, got, Space("S", q)))
                if not same:
                    rep.witness("taylor", f"h{q}({render_polynomial(a, pres.ring)})")
    rep.verdict("taylor", ok)


DEMOS = {"nodal": demo_nodal, "nongorenstein": demo_nongorenstein, "taylor": demo_taylor}


def cmd_demo(args, rep: Report) -> None:
    DEMOS[args.name](args, rep)


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for randomized property checks")
    common.add_argument("--order", type=int, default=None, help="truncation order (default 5)")

    parser = argparse.ArgumentParser(prog="jetcalc", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "validate presentation, derivation and connection").add_argument("file")
    add("check-derivation", cmd_check_derivation, "check that D respects the ideal").add_argument("file")
    add("check-connection", cmd_check_connection, "check the connection on the module relations").add_argument("file")
    add("check-flat", cmd_check_flat, "check flatness of the connection").add_argument("file")
    p = add("solve-connection", cmd_solve_connection, "search for a connection of a given degree")
    p.add_argument("file")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--flat", action="store_true")
    add("extend", cmd_extend, "build a flat extended connection").add_argument("file")
    p = add("hasse", cmd_hasse, "Hasse derivation components")
    p.add_argument("file")
    p.add_argument("--var", default=None)
    p.add_argument("--samples", type=int, default=50, help="random pairs for the axiom check")
    p = add("compare", cmd_compare, "comparison map between two connections")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p = add("cocycle", cmd_cocycle, "cocycle identity for three connections")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("file_c")
    add("demo", cmd_demo, "bundled examples").add_argument("name", choices=sorted(DEMOS))
    return parser


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Run one command; returns (exit status, report text)."""
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), ""
    rep = Report(argv)
    try:
        args.fn(args, rep)
    except (InputError, ParseError) as exc:
        rep.lines.append(f"ERROR {exc}")
        return 2, rep.render()
    return rep.exit_code, rep.render()


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
