"""Hasse derivations, equivalence automorphisms and the cocycle identity.

A Hasse derivation ``h = (h_0, ..., h_N)`` sends a ring element to its
components ``h_i(a)`` in ``S^i``, with ``h_0 = id``. Iterated ones come from an
extended connection by ``h_i(a) = (1/i) T_{i-1}(D a)``.

An automorphism ``phi`` of the symmetric algebra with ``phi_0 = id`` is stored
by its graded parts on generators, ``phi_q(g) = lambda_q(g)`` in ``S^(q+1)``,
and acts on ``S^p`` by ``s~_q(lambda)``. It fixes ring elements.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .connections import (ComparisonMap, Derivation, ExtendedConnection, apply_derivation, apply_extended,
                          NotFlatError, compare_extended, s_tilde)
from .elements import Space, TensorElement, concat, tensor_sum
from .polynomial import Exps, Polynomial
from .presentation import Presentation
from .sampling import random_homogeneous_pair
from .solver import AffineConstraint, Infeasible, Unknown, solve_affine


def _scalar(a: Polynomial) -> TensorElement:
    return TensorElement.scalar(a, "S")


def _zero(pres: Presentation, n: int) -> TensorElement:
    return TensorElement.zero(Space("S", n), pres.nvars)


# ------------------------------------------------------------ Hasse derivations

class HasseDerivation:
    """h = (h_0, ..., h_N), evaluated by ``rule(i, a)`` for i >= 1."""

    def __init__(self, pres: Presentation, order: int, rule: Callable[[int, Polynomial], TensorElement],
                 source: ExtendedConnection | None = None, label: str = ""):
        self.pres = pres
        self.order = order
        self._rule = rule
        self.source = source
        self.label = label
        self._mono: dict[tuple[int, Exps], TensorElement] = {}

    @property
    def derivation(self) -> Derivation | None:
        return None if self.source is None else self.source.derivation

    def __call__(self, i: int, a: Polynomial) -> TensorElement:
        return hasse_apply(self, a, i)

    def _on_monomial(self, i: int, exps: Exps) -> TensorElement:
        key = (i, exps)
        out = self._mono.get(key)
        if out is None:
            out = self._rule(i, Polynomial.monomial(exps)).retag("S")
            self._mono[key] = out
        return out

    def on_variables(self, i: int) -> list[TensorElement]:
        return [hasse_apply(self, self.pres.ring.var(v), i) for v in range(self.pres.nvars)]

    def with_component(self, i: int, fn: Callable[[TensorElement], TensorElement]) -> "HasseDerivation":
        """A copy whose i-th component is post-composed with ``fn``; for building counterexamples."""
        base = self

        def rule(k: int, a: Polynomial) -> TensorElement:
            out = base._rule(k, a)
            return fn(out) if k == i else out

        return HasseDerivation(self.pres, self.order, rule, None, self.label + f"~{i}")


def hasse_apply(h: HasseDerivation, a: Polynomial, i: int) -> TensorElement:
    if i < 0 or i > h.order:
        raise ValueError(f"h_{i} is not defined for an order-{h.order} Hasse derivation")
    if i == 0:
        return _scalar(a)
    return tensor_sum((h._on_monomial(i, m).scale(c) for m, c in a.terms.items()),
                      Space("S", i), h.pres.nvars)


def hasse_from_extended(T: ExtendedConnection, N: int | None = None) -> HasseDerivation:
    """h_i(a) = (1/i) T_{i-1}(D a) projected to S^i, for i <= N <= T.order + 1."""
    N = T.order + 1 if N is None else N
    if N > T.order + 1 or N < 0:
        raise ValueError(f"an order-{T.order} extended connection gives Hasse components up to {T.order + 1}")
    D = T.derivation

    def rule(i: int, a: Polynomial) -> TensorElement:
        return apply_extended(T, i - 1, apply_derivation(D, a)).scale(Fraction(1, i)).retag("S")

    return HasseDerivation(T.pres, N, rule, T, T.label)


@dataclass
class AxiomReport:
    checked: int
    failure: tuple[int, Polynomial, Polynomial, TensorElement] | None = None

    def __bool__(self) -> bool:
        return self.failure is None


def multiplicativity_residual(h: HasseDerivation, a: Polynomial, b: Polynomial, i: int) -> TensorElement:
    """h_i(ab) - sum_j h_j(a) h_{i-j}(b) in S^i."""
    parts = [hasse_apply(h, a * b, i)]
    for j in range(i + 1):
        parts.append(concat(hasse_apply(h, a, j), hasse_apply(h, b, i - j), "S").scale(-1))
    return tensor_sum(parts, Space("S", i), h.pres.nvars)


def check_hasse_axioms(h: HasseDerivation, sample_budget: int = 50, seed: int = 0,
                       weight_cap: int | None = None) -> AxiomReport:
    """Multiplicativity on seeded random homogeneous pairs, all orders up to h.order.

    Also checks h_0 = id on the variables and, when the source derivation is
    known, h_1 = D. Stops at the first failure.
    """
    pres = h.pres
    cap = weight_cap if weight_cap is not None else 2 * max(pres.ring.weights)
    for v in range(pres.nvars):
        x = pres.ring.var(v)
        if h.order >= 1 and h.derivation is not None:
            res = hasse_apply(h, x, 1) - apply_derivation(h.derivation, x).retag("S")
            if not pres.is_zero(res):
                return AxiomReport(0, (1, x, pres.ring.one(), pres.normal_form(res)))
    rng = random.Random(seed)
    for n in range(sample_budget):
        a, b = random_homogeneous_pair(pres, rng, cap)
        for i in range(h.order + 1):
            res = multiplicativity_residual(h, a, b, i)
            if not pres.is_zero(res):
                return AxiomReport(n, (i, a, b, pres.normal_form(res)))
    return AxiomReport(sample_budget)


# ---------------------------------------------------------------- automorphisms

class AlgebraAutomorphism:
    """phi with phi_0 = id, stored as phi_q(g_j) in S^(q+1) for q <= order."""

    def __init__(self, pres: Presentation, values: Sequence[Sequence[TensorElement]]):
        self.pres = pres
        self.values = tuple(tuple(v.retag("S") for v in row) for row in values)
        for q, row in enumerate(self.values):
            if len(row) != pres.ngens:
                raise ValueError(f"phi_{q} needs one value per generator")
            for v in row:
                if v.length != q + 1:
                    raise ValueError(f"phi_{q} values must lie in S^{q + 1}")
        for j in range(pres.ngens):
            if not pres.is_zero(self.values[0][j] - pres.gen(j, "S")):
                raise ValueError("phi_0 must be the identity on generators")
        self.lam = ComparisonMap(pres, [[v.retag("R") for v in row] for row in self.values])

    @property
    def order(self) -> int:
        return len(self.values) - 1

    @classmethod
    def identity(cls, pres: Presentation, order: int) -> "AlgebraAutomorphism":
        rows = [[pres.gen(j, "S") for j in range(pres.ngens)]]
        rows += [[_zero(pres, q + 1) for _ in range(pres.ngens)] for q in range(1, order + 1)]
        return cls(pres, rows)

    def component(self, q: int, omega: TensorElement) -> TensorElement:
        """phi_q on S^p: s~_q(lambda) for p >= 1, and zero on ring elements for q >= 1."""
        if q > self.order:
            raise ValueError(f"phi_{q} is beyond order {self.order}")
        p = omega.length
        if p == 0:
            return omega.retag("S") if q == 0 else _zero(self.pres, q)
        return s_tilde(self.lam, q, omega.retag("S"))

    def apply(self, omega: TensorElement, top: int) -> list[TensorElement]:
        """Graded components of phi(omega) in S^p, ..., S^top (omega in S^p)."""
        p = omega.length
        return [self.component(q, omega) for q in range(0, min(top - p, self.order) + 1)]

    def truncate(self, k: int) -> "AlgebraAutomorphism":
        return AlgebraAutomorphism(self.pres, self.values[:k + 1])

    def equals(self, other: "AlgebraAutomorphism", upto: int | None = None) -> bool:
        top = min(self.order, other.order) if upto is None else upto
        return all(self.pres.is_zero(self.values[q][j] - other.values[q][j])
                   for q in range(top + 1) for j in range(self.pres.ngens))

    def is_identity(self, upto: int | None = None) -> bool:
        return self.equals(AlgebraAutomorphism.identity(self.pres, self.order), upto)


def phi_from_lambda(lam: ComparisonMap) -> AlgebraAutomorphism:
    if not lam.is_identity_at_zero():
        raise ValueError("lambda_0 must be the identity")
    return AlgebraAutomorphism(lam.pres, [[v.retag("S") for v in row] for row in lam.values])


def compose(outer: AlgebraAutomorphism, inner: AlgebraAutomorphism) -> AlgebraAutomorphism:
    """outer o inner: (outer o inner)_k(g) = sum_{q+r=k} outer_r(inner_q(g))."""
    pres = outer.pres
    top = min(outer.order, inner.order)
    rows = []
    for k in range(top + 1):
        rows.append([tensor_sum((outer.component(k - q, inner.values[q][j]) for q in range(k + 1)),
                                Space("S", k + 1), pres.nvars) for j in range(pres.ngens)])
    return AlgebraAutomorphism(pres, rows)


def inverse(phi: AlgebraAutomorphism) -> AlgebraAutomorphism:
    """psi with phi o psi = id, degree by degree: psi_k = -sum_{q>=1} phi_q psi_{k-q}."""
    pres = phi.pres
    rows = [[pres.gen(j, "S") for j in range(pres.ngens)]]
    for k in range(1, phi.order + 1):
        rows.append([
            tensor_sum((phi.component(q, rows[k - q][j]) for q in range(1, k + 1)),
                       Space("S", k + 1), pres.nvars).scale(-1)
            for j in range(pres.ngens)])
    return AlgebraAutomorphism(pres, rows)


# ------------------------------------------------------------------ equivalence

def _pushforward(phi: AlgebraAutomorphism, h: HasseDerivation, a: Polynomial, i: int) -> TensorElement:
    """(phi h)_i(a) = sum_{q+j=i} phi_q(h_j(a))."""
    return tensor_sum((phi.component(i - j, hasse_apply(h, a, j)) for j in range(1, i + 1)),
                      Space("S", i), h.pres.nvars) if i else hasse_apply(h, a, 0)


@dataclass
class EquivalenceReport:
    failure: tuple[int, int, TensorElement] | None = None

    def __bool__(self) -> bool:
        return self.failure is None


def verify_equivalence(h: HasseDerivation, h2: HasseDerivation, phi: AlgebraAutomorphism,
                       N: int | None = None) -> EquivalenceReport:
    """h2_i(x_v) = sum_{q+j=i} phi_q(h_j(x_v)) for every variable and i <= N."""
    pres = h.pres
    if h2.pres != pres or phi.pres != pres:
        raise ValueError("Hasse derivations and automorphism over different presentations")
    N = min(h.order, h2.order, phi.order + 1) if N is None else N
    for i in range(N + 1):
        for v in range(pres.nvars):
            x = pres.ring.var(v)
            res = hasse_apply(h2, x, i) - _pushforward(phi, h, x, i)
            if not pres.is_zero(res):
                return EquivalenceReport((i, v, pres.normal_form(res)))
    return EquivalenceReport()


def _candidate_weights(pres: Presentation, D: Derivation, targets: dict[int, list[int]], j: int) -> list[int]:
    # weights of lambda(g_j) that can reach a target weight through some D(x_v)
    out = set()
    for v, dx in enumerate(D.values):
        coeff = dx.module_coefficients(pres.ngens)[j]
        for m in coeff.terms:
            for t in targets.get(v, []):
                out.add(t - pres.ring.weight(m))
    return sorted(out)


def solve_phi(h: HasseDerivation, h2: HasseDerivation, N: int | None = None) -> tuple[AlgebraAutomorphism, int] | Infeasible:
    """Solve h2 = phi h for phi degree by degree; returns (phi, nullity) or the obstruction.

    At order i the only unknown entering is phi_{i-1} on generators, through
    phi_{i-1}(h_1(x_v)) = lambda_{i-1}(D x_v). Free coordinates are set to zero;
    a zero nullity at every step certifies uniqueness.
    """
    pres = h.pres
    if h2.pres != pres:
        raise ValueError("Hasse derivations over different presentations")
    D = h.derivation or h2.derivation
    if D is None:
        raise ValueError("solve_phi needs the derivation of an iterated Hasse derivation")
    N = min(h.order, h2.order) if N is None else N
    for v in range(pres.nvars):
        x = pres.ring.var(v)
        if N >= 1 and not pres.equal(hasse_apply(h, x, 1), hasse_apply(h2, x, 1)):
            return Infeasible([(f"h_1({pres.ring.names[v]})", 1, pres.normal_form(
                hasse_apply(h2, x, 1) - hasse_apply(h, x, 1)))])
    rows = [[pres.gen(j, "S") for j in range(pres.ngens)]]
    nullity = 0
    for i in range(2, N + 1):
        known = AlgebraAutomorphism(pres, rows + [[_zero(pres, i) for _ in range(pres.ngens)]])
        base = {v: hasse_apply(h2, pres.ring.var(v), i) - _pushforward(known, h, pres.ring.var(v), i)
                for v in range(pres.nvars)}
        targets = {v: pres.weights_of(pres.normal_form(b)) for v, b in base.items()}
        unknowns = []
        for j in range(pres.ngens):
            for w in _candidate_weights(pres, D, targets, j):
                if pres.quotient_basis(Space("S", i), w):
                    unknowns.append(Unknown((j, w), Space("S", i), w))

        def lam_value(assign, j: int) -> TensorElement:
            return tensor_sum((val for (jj, _), val in assign.items() if jj == j), Space("S", i), pres.nvars)

        constraints = []
        for v, dx in enumerate(D.values):
            def evaluate(assign, v=v, dx=dx) -> TensorElement:
                parts = [base[v]]
                for ((j,), exps), c in dx.terms.items():
                    parts.append(lam_value(assign, j).mul_monomial(exps, -c))
                return tensor_sum(parts, Space("S", i), pres.nvars)
            constraints.append(AffineConstraint(f"order {i} at {pres.ring.names[v]}", Space("S", i), evaluate))
        result = solve_affine(pres, unknowns, constraints)
        if not result:
            return result
        nullity += result.nullity
        rows.append([lam_value(result.assignment, j) for j in range(pres.ngens)])
    return AlgebraAutomorphism(pres, rows), nullity


def equivalence(h: HasseDerivation, h2: HasseDerivation, N: int | None = None) -> tuple[AlgebraAutomorphism, str]:
    """phi with h2 = phi h, and how it was obtained.

    Uses the comparison map when h comes from a flat extended connection,
    and otherwise solves for phi directly.
    """
    N = min(h.order, h2.order) if N is None else N
    T, S = h.source, h2.source
    if T is not None and S is not None and N >= 1:
        try:
            lam = compare_extended(T.truncate(N - 1), S.truncate(N - 1))
            return phi_from_lambda(lam), "comparison"
        except NotFlatError:
            pass
    solved = solve_phi(h, h2, N)
    if not solved:
        raise ValueError(f"no automorphism relates the two Hasse derivations: {solved.obstructions[0][0]}")
    return solved[0], "solved"


@dataclass
class CocycleReport:
    phi12: AlgebraAutomorphism
    phi23: AlgebraAutomorphism
    phi13: AlgebraAutomorphism
    methods: tuple[str, str, str]
    equivalences: tuple[bool, bool, bool]
    cocycle: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.cocycle and all(self.equivalences)


def cocycle_check(h1: HasseDerivation, h2: HasseDerivation, h3: HasseDerivation, N: int | None = None) -> CocycleReport:
    """phi_23 o phi_12 = phi_13 on generators through order N - 1 (landing in S^{<=N})."""
    pres = h1.pres
    if h2.pres != pres or h3.pres != pres:
        raise ValueError("cocycle check needs a common presentation")
    D = [h.derivation for h in (h1, h2, h3) if h.derivation is not None]
    if any(d != D[0] for d in D[1:]):
        raise ValueError("cocycle check needs a common derivation")
    N = min(h1.order, h2.order, h3.order) if N is None else N
    p12, m12 = equivalence(h1, h2, N)
    p23, m23 = equivalence(h2, h3, N)
    p13, m13 = equivalence(h1, h3, N)
    eqs = (bool(verify_equivalence(h1, h2, p12, N)), bool(verify_equivalence(h2, h3, p23, N)),
           bool(verify_equivalence(h1, h3, p13, N)))
    failures = [f"phi_{ab} does not relate h_{ab[0]} and h_{ab[1]}" for ab, ok in zip(("12", "23", "13"), eqs) if not ok]
    top = N - 1
    ok = compose(p23, p12).equals(p13, top)
    if not ok:
        failures.append("phi_23 o phi_12 differs from phi_13")
    return CocycleReport(p12, p23, p13, (m12, m23, m13), eqs, ok, failures)


__all__ = [
    "AlgebraAutomorphism", "AxiomReport", "CocycleReport", "EquivalenceReport", "HasseDerivation",
    "check_hasse_axioms", "cocycle_check", "compose", "equivalence", "hasse_apply", "hasse_from_extended",
    "inverse", "multiplicativity_residual", "phi_from_lambda", "solve_phi", "verify_equivalence",
]
