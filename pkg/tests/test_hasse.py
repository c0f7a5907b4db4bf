import itertools
import math
from fractions import Fraction

import pytest
import sympy

from jetcalc.connections import compare_extended, extend_flat, iterate_connection
from jetcalc.elements import Space, TensorElement, concat
from jetcalc.hasse import (AlgebraAutomorphism, HasseDerivation, check_hasse_axioms, cocycle_check, compose,
                           hasse_apply, hasse_from_extended, inverse, phi_from_lambda, solve_phi,
                           verify_equivalence)
from jetcalc.polynomial import Polynomial
from jetcalc.presentation import weighted_monomials
from tests.conftest import build

X1, X2 = sympy.symbols("x1 x2")


def taylor_oracle(pres, a: Polynomial, q: int) -> TensorElement:
    """sum over words of D_{j1}...D_{jq}(a)/q! e_{j1}...e_{jq}, via sympy."""
    expr = sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * X1 ** m[0] * X2 ** m[1]
                       for m, c in a.terms.items()])
    syms = (X1, X2)
    terms = {}
    for word in itertools.product(range(2), repeat=q):
        d = sympy.diff(expr, *[syms[j] for j in word]) / math.factorial(q)
        for (e1, e2), c in sympy.Poly(d, X1, X2).terms() if d != 0 else []:
            key = (word, (e1, e2))
            terms[key] = terms.get(key, 0) + Fraction(int(c.p), int(c.q))
    return TensorElement(Space("S", q), pres.nvars, terms)


def test_taylor_reproduction(free):
    pres = free.pres
    h = hasse_from_extended(iterate_connection(free.gamma, 4), 5)
    for d in range(5):
        for exps in weighted_monomials(d, pres.ring):
            a = Polynomial.monomial(exps)
            for q in range(6):
                want = taylor_oracle(pres, a, q) if q else TensorElement.scalar(a)
                assert pres.equal(hasse_apply(h, a, q), want, Space("S", q)), (exps, q)


def test_hasse_examples(free, curve):
    h = hasse_from_extended(iterate_connection(free.gamma, 2))
    assert free.pres.equal(h(2, free.p("x1^2*x2")), free.p("x2*(e1@e1) + 2*x1*(e1@e2)").retag("S"))
    assert h(0, free.p("x1")).as_polynomial() == free.p("x1")
    one = free.pres.ring.one()
    assert all(not h(i, one).terms for i in range(1, 4))
    hc = hasse_from_extended(extend_flat(curve.gamma, 3))
    assert curve.pres.equal(hc(1, curve.p("x")), curve.p("3*y*n1").retag("S"))
    # h_2(x^2) from the connection agrees with multiplicativity h_1(x)^2 + 2 x h_2(x)
    x = curve.p("x")
    lhs = hc(2, x * x)
    rhs = concat(hc(1, x), hc(1, x), "S") + hc(2, x).mul_poly(x).scale(2)
    assert curve.pres.equal(lhs, rhs, Space("S", 2))
    with pytest.raises(ValueError):
        hasse_apply(hc, x, 5)


@pytest.mark.parametrize("name", ["nongorenstein", "free_plane", "free_plane_nu2"])
def test_hasse_axioms(name):
    s = build(name)
    T = extend_flat(s.gamma, 4) if name != "free_plane_nu2" else iterate_connection(s.gamma, 4)
    h = hasse_from_extended(T)
    report = check_hasse_axioms(h, sample_budget=30, seed=3)
    assert report and report.checked == 30


def test_corrupted_hasse_fails_at_two(curve):
    h = hasse_from_extended(extend_flat(curve.gamma, 3))
    bad = h.with_component(2, lambda t: t.scale(2))
    report = check_hasse_axioms(bad, sample_budget=30, seed=1)
    assert not report
    assert report.failure[0] == 2


def test_order_one_is_leibniz(curve):
    h = hasse_from_extended(extend_flat(curve.gamma, 1), 1)
    assert h.order == 1
    assert check_hasse_axioms(h, sample_budget=20)


def test_order_too_large(curve):
    with pytest.raises(ValueError):
        hasse_from_extended(iterate_connection(curve.gamma, 2), 4)


# ------------------------------------------------------------ automorphisms

def test_phi_identity_and_example(free):
    pres = free.pres
    ident = AlgebraAutomorphism.identity(pres, 3)
    assert ident.is_identity()
    zero2 = TensorElement.zero(Space("S", 2), pres.nvars)
    zero3 = TensorElement.zero(Space("S", 3), pres.nvars)
    phi = AlgebraAutomorphism(pres, [[pres.gen(0, "S"), pres.gen(1, "S")], [free.p("e2@e2"), zero2],
                                     [zero3, zero3]])
    # phi(e1) = e1 + e2e2
    parts = phi.apply(pres.gen(0, "S"), 3)
    assert pres.equal(parts[0], pres.gen(0, "S")) and pres.equal(parts[1], free.p("e2@e2").retag("S"))
    # multiplicativity: phi(e1 e1) = phi(e1) phi(e1) through order 4
    sq = phi.apply(free.p("e1@e1").retag("S"), 4)
    assert pres.equal(sq[1], free.p("2*(e1@e2@e2)").retag("S"))
    assert pres.equal(sq[2], free.p("e2@e2@e2@e2").retag("S"))
    assert phi.component(1, TensorElement.scalar(free.p("x1"))).terms == {}
    with pytest.raises(ValueError):
        AlgebraAutomorphism(pres, [[pres.gen(1, "S"), pres.gen(1, "S")]])


def test_inverse_and_composition(free):
    T = iterate_connection(free.gamma, 3)
    S = iterate_connection(free.gamma + [free.p("e1@e2 + e2@e1"), free.p("x1*(e2@e2)")], 3)
    phi = phi_from_lambda(compare_extended(T, S))
    assert not phi.is_identity()
    assert compose(inverse(phi), phi).is_identity()
    assert compose(phi, inverse(phi)).is_identity()


NUS = {
    "a": ["e1@e1", "0*(e1@e1)"],
    "b": ["e1@e2 + e2@e1", "x1*(e2@e2)"],
    "c": ["2*(e2@e2)", "e1@e1 - 1/2*x2*(e1@e2 + e2@e1)"],
}


def iterated(free, key, N=4):
    nu = [free.p(t) for t in NUS[key]] if key else [free.p("0*(e1@e1)")] * 2
    return hasse_from_extended(iterate_connection(free.gamma + nu, N))


def test_equivalence_pipeline(free):
    h = iterated(free, None)
    for key in NUS:
        h2 = iterated(free, key)
        phi = phi_from_lambda(compare_extended(h.source, h2.source))
        assert verify_equivalence(h, h2, phi)
        assert verify_equivalence(h2, h2, AlgebraAutomorphism.identity(free.pres, 4))


def test_tampered_phi_fails_at_three(free):
    h, h2 = iterated(free, None), iterated(free, "b")
    phi = phi_from_lambda(compare_extended(h.source, h2.source))
    rows = [list(r) for r in phi.values]
    rows[2][0] = rows[2][0] + free.p("e2@e2@e2").retag("S")
    bad = AlgebraAutomorphism(free.pres, rows)
    report = verify_equivalence(h, h2, bad)
    assert not report and report.failure[0] == 3


def test_solve_phi_agrees_with_comparison(free):
    h, h2 = iterated(free, None), iterated(free, "c")
    phi, nullity = solve_phi(h, h2)
    assert nullity == 0
    assert phi.equals(phi_from_lambda(compare_extended(h.source, h2.source)))


def test_solve_phi_detects_non_equivalence(free, curve):
    h = iterated(free, None)
    other = HasseDerivation(free.pres, 3, lambda i, a: hasse_apply(h, a, i).scale(2) if i == 1 else hasse_apply(h, a, i),
                            h.source)
    assert not solve_phi(h, other)


def test_cocycle(free):
    hs = [iterated(free, None), iterated(free, "a"), iterated(free, "b"), iterated(free, "c")]
    for trio in itertools.permutations(hs, 3):
        assert cocycle_check(*trio, 5)
    same = cocycle_check(hs[0], hs[0], hs[0], 5)
    assert same and same.phi12.is_identity()


def test_cocycle_needs_common_presentation(free, curve):
    hc = hasse_from_extended(extend_flat(curve.gamma, 2))
    h = iterated(free, None, 2)
    with pytest.raises(ValueError):
        cocycle_check(h, hc, h, 3)
