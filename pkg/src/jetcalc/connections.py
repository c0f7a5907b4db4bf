"""Derivations, connections and extended connections.

A derivation ``D`` is stored by its values on the ring variables and extended
by the Leibniz rule. A connection ``gamma`` is stored by its values on the
module generators and extended by ``gamma(a m) = D(a) m + a gamma(m)``.
An extended connection ``T = (T_0, ..., T_N)`` is stored the same way and
extended to arbitrary module elements by the higher Leibniz identity

    T_i(a m) = a T_i(m) + sum_{j=1}^{i} (1/j) T_{j-1}(D a) T_{i-j}(m).

Iterated extended connections (``T_n = (1/n!) nabla^n`` on generators) and
the flat extensions built by :func:`extend_flat` additionally carry a direct
evaluator that computes ``T_n(m)`` from its defining expression, so the
identity above can be checked rather than assumed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .elements import Space, TensorElement, concat, tensor_sum
from .polynomial import Exps, Polynomial
from .presentation import Presentation
from .solver import AffineConstraint, Infeasible, Solution, Unknown, solve_affine
from .tensors import in_K, mul_graded, n_minus_sigma, n_minus_sigma_star


class NotFlatError(ValueError):
    """A flatness hypothesis failed."""


class NotLinearError(ValueError):
    """A map that must be O_X-linear is not."""


def _zero(pres: Presentation, tag: str, n: int) -> TensorElement:
    return TensorElement.zero(Space(tag, n), pres.nvars)


def _split_exps(exps: Exps) -> tuple[int, Exps] | None:
    # a variable dividing the monomial, and the quotient
    for v, e in enumerate(exps):
        if e:
            return v, exps[:v] + (e - 1,) + exps[v + 1:]
    return None


# ----------------------------------------------------------------- derivations

class Derivation:
    """D: O_X -> F given by its values on the ring variables."""

    def __init__(self, pres: Presentation, degree: int, values: Sequence[TensorElement]):
        if len(values) != pres.nvars:
            raise ValueError("a derivation needs one value per ring variable")
        self.pres = pres
        self.degree = degree
        self.values = tuple(v.retag("T") for v in values)
        for v in self.values:
            if v.length != 1:
                raise ValueError("derivation values must be module elements")
        self._mono: dict[Exps, TensorElement] = {}

    def __eq__(self, other) -> bool:
        return (isinstance(other, Derivation) and self.pres == other.pres
                and self.degree == other.degree and self.values == other.values)

    def __hash__(self) -> int:
        return hash((self.pres, self.degree, self.values))

    def on_monomial(self, exps: Exps) -> TensorElement:
        out = self._mono.get(exps)
        if out is None:
            parts = []
            for v, e in enumerate(exps):
                if e:
                    rest = exps[:v] + (e - 1,) + exps[v + 1:]
                    parts.append(self.values[v].mul_monomial(rest, e))
            out = tensor_sum(parts, Space("T", 1), self.pres.nvars)
            self._mono[exps] = out
        return out

    def __call__(self, a: Polynomial) -> TensorElement:
        return apply_derivation(self, a)


def apply_derivation(D: Derivation, a: Polynomial) -> TensorElement:
    return tensor_sum((D.on_monomial(m).scale(c) for m, c in a.terms.items()),
                      Space("T", 1), D.pres.nvars)


def validate_derivation(D: Derivation) -> list[str]:
    pres = D.pres
    problems = []
    for v, val in enumerate(D.values):
        ws = pres.weights_of(val)
        want = pres.ring.weights[v] + D.degree
        if ws and ws != [want]:
            problems.append(f"D({pres.ring.names[v]}) has weights {ws}, expected {want}")
    for i, f in enumerate(pres.ring.ideal):
        nf = pres.normal_form(apply_derivation(D, f))
        if nf.terms:
            problems.append(f"ideal generator {i + 1}: D(f) is not zero in F")
    return problems


# ----------------------------------------------------------------- connections

class Connection:
    """gamma: F -> T^2(F), stored on generators."""

    def __init__(self, derivation: Derivation, values: Sequence[TensorElement], degree: int | None = None):
        pres = derivation.pres
        if len(values) != pres.ngens:
            raise ValueError("a connection needs one value per module generator")
        self.derivation = derivation
        self.pres = pres
        self.values = tuple(v.retag("T") for v in values)
        for v in self.values:
            if v.length != 2:
                raise ValueError("connection values must lie in T^2")
        self.degree = derivation.degree if degree is None else degree

    def __call__(self, m: TensorElement) -> TensorElement:
        return apply_connection(self, m)

    def __add__(self, nu: Sequence[TensorElement]) -> "Connection":
        """gamma + nu for an O_X-linear nu given on generators."""
        return Connection(self.derivation, [a + b.retag("T") for a, b in zip(self.values, nu)], self.degree)


def apply_connection(gamma: Connection, m: TensorElement) -> TensorElement:
    pres = gamma.pres
    D = gamma.derivation
    parts = []
    for ((j,), exps), c in m.terms.items():
        g = TensorElement.word((j,), pres.nvars)
        parts.append(concat(D.on_monomial(exps), g, "T").scale(c))
        parts.append(gamma.values[j].mul_monomial(exps, c))
    return tensor_sum(parts, Space("T", 2), pres.nvars)


def relation_element(pres: Presentation, k: int) -> TensorElement:
    return pres.module_element(pres.module.relations[k])


def connection_residuals(gamma: Connection) -> list[tuple[int, TensorElement]]:
    """Normal forms of gamma applied to each module relation (all zero iff valid)."""
    pres = gamma.pres
    out = []
    for k in range(len(pres.module.relations)):
        out.append((k, pres.normal_form(apply_connection(gamma, relation_element(pres, k)))))
    return out


def validate_connection(gamma: Connection) -> list[str]:
    problems = []
    for k, res in connection_residuals(gamma):
        if res.terms:
            problems.append(f"relation {k + 1}: residual {res!r}")
    return problems


def is_homogeneous_connection(gamma: Connection) -> bool:
    """Each gamma(g_j) is homogeneous of weight w(g_j) + degree.

    Only the connection search needs this; every check below works piecewise.
    """
    pres = gamma.pres
    return all(pres.weights_of(v) in ([], [pres.module.weights[j] + gamma.degree])
               for j, v in enumerate(gamma.values))


def flatness_residuals(gamma: Connection) -> list[tuple[int, TensorElement]]:
    pres = gamma.pres
    out = []
    for v, dx in enumerate(gamma.derivation.values):
        val = apply_connection(gamma, dx)
        out.append((v, pres.normal_form(n_minus_sigma_star(val.retag("R")), Space("R", 2))))
    return out


def is_flat_connection(gamma: Connection) -> bool:
    """gamma D(x_v) lies in K^2 for every ring variable.

    Variables suffice: gamma D(ab) = a gamma D(b) + b gamma D(a) + D(a)D(b) + D(b)D(a),
    and the last two terms form a symmetric tensor.
    """
    return all(not res.terms for _, res in flatness_residuals(gamma))


def solve_connection(D: Derivation, conn_degree: int, require_flat: bool = False) -> Solution | Infeasible:
    """Search for a (flat) D-connection of the given degree.

    Returns a :class:`Solution` whose assignment maps generator index to
    gamma(g_j), or :class:`Infeasible` carrying the obstruction.
    """
    pres = D.pres
    unknowns = [Unknown(j, Space("T", 2), pres.module.weights[j] + conn_degree)
                for j in range(pres.ngens)]

    def as_conn(assign) -> Connection:
        return Connection(D, [assign[j] for j in range(pres.ngens)], conn_degree)

    constraints = []
    for k in range(len(pres.module.relations)):
        rel = relation_element(pres, k)
        constraints.append(AffineConstraint(
            f"relation {k + 1}", Space("T", 2),
            lambda a, rel=rel: apply_connection(as_conn(a), rel)))
    if require_flat:
        for v, dx in enumerate(D.values):
            constraints.append(AffineConstraint(
                f"flat {pres.ring.names[v]}", Space("R", 2),
                lambda a, dx=dx: n_minus_sigma_star(apply_connection(as_conn(a), dx).retag("R"))))
    result = solve_affine(pres, unknowns, constraints)
    if isinstance(result, Solution):
        result.assignment = {j: result.assignment[j] for j in range(pres.ngens)}
    return result


# -------------------------------------------------------------------- nabla

def nabla(gamma: Connection, omega: TensorElement) -> TensorElement:
    """Slot-wise insertion of gamma on R^n, with nabla(a w) = D(a) w + a nabla(w)."""
    pres = gamma.pres
    D = gamma.derivation
    n = omega.length
    if n < 1:
        raise ValueError("nabla is defined on R^n for n >= 1")
    parts = []
    word_cache: dict = {}
    for (word, exps), c in omega.terms.items():
        w = TensorElement.word(word, pres.nvars, "R")
        if any(exps):
            parts.append(concat(D.on_monomial(exps), w, "R").scale(c))
        nw = word_cache.get(word)
        if nw is None:
            pieces = []
            for i, g in enumerate(word):
                left = TensorElement.word(word[:i], pres.nvars)
                right = TensorElement.word(word[i + 1:], pres.nvars)
                pieces.append(concat(concat(left, gamma.values[g], "T"), right, "R"))
            nw = tensor_sum(pieces, Space("R", n + 1), pres.nvars)
            word_cache[word] = nw
        parts.append(nw.mul_monomial(exps, c))
    return tensor_sum(parts, Space("R", n + 1), pres.nvars)


# ------------------------------------------------------- extended connections

class ExtendedConnection:
    """T = (T_0, ..., T_N) given on generators; T_0 is the identity.

    ``direct`` optionally evaluates T_i(m) on arbitrary module elements from
    an independent defining expression.
    """

    def __init__(self, derivation: Derivation, values: Sequence[Sequence[TensorElement]],
                 direct: Callable[[int, TensorElement], TensorElement] | None = None,
                 label: str = ""):
        pres = derivation.pres
        self.derivation = derivation
        self.pres = pres
        self.values = tuple(tuple(v.retag("R") for v in row) for row in values)
        if not self.values:
            raise ValueError("an extended connection needs at least T_0")
        for i, row in enumerate(self.values):
            if len(row) != pres.ngens:
                raise ValueError(f"T_{i} needs one value per generator")
            for v in row:
                if v.length != i + 1:
                    raise ValueError(f"T_{i} values must lie in R^{i + 1}")
        self.direct = direct
        self.label = label
        self._memo: dict = {}

    @property
    def order(self) -> int:
        return len(self.values) - 1

    @property
    def connection(self) -> Connection:
        if self.order < 1:
            raise ValueError("order-0 extended connection has no T_1")
        return Connection(self.derivation, self.values[1])

    def truncate(self, k: int) -> "ExtendedConnection":
        if k > self.order:
            raise ValueError("cannot truncate above the order")
        return ExtendedConnection(self.derivation, self.values[:k + 1], self.direct, self.label)

    def __call__(self, i: int, m: TensorElement) -> TensorElement:
        return apply_extended(self, i, m)

    def on_term(self, i: int, exps: Exps, j: int) -> TensorElement:
        key = (i, exps, j)
        out = self._memo.get(key)
        if out is not None:
            return out
        pres = self.pres
        if not any(exps):
            out = self.values[i][j]
        else:
            a_t = self.values[i][j].mul_monomial(exps)
            parts = [a_t]
            da = self.derivation.on_monomial(exps)
            for k in range(1, i + 1):
                left = apply_extended(self, k - 1, da)
                if left.terms:
                    parts.append(mul_graded(left, self.values[i - k][j]).scale(Fraction(1, k)))
            out = tensor_sum(parts, Space("R", i + 1), pres.nvars)
        self._memo[key] = out
        return out


def apply_extended(T: ExtendedConnection, i: int, m: TensorElement) -> TensorElement:
    if i > T.order or i < 0:
        raise ValueError(f"T_{i} is not defined for an order-{T.order} extended connection")
    if m.length != 1:
        raise ValueError("extended connections act on module elements")
    if i == 0:
        return m.retag("R")
    return tensor_sum((T.on_term(i, exps, j).scale(c) for ((j,), exps), c in m.terms.items()),
                      Space("R", i + 1), T.pres.nvars)


def iterate_connection(gamma: Connection, N: int) -> ExtendedConnection:
    """T_0 = id and T_n = (1/n) nabla T_{n-1} on generators."""
    pres = gamma.pres
    rows = [[pres.gen(j, "R") for j in range(pres.ngens)]]
    for n in range(1, N + 1):
        rows.append([nabla(gamma, v).scale(Fraction(1, n)) for v in rows[-1]])

    def direct(i: int, m: TensorElement) -> TensorElement:
        out = m.retag("R")
        for n in range(1, i + 1):
            out = nabla(gamma, out).scale(Fraction(1, n))
        return out

    return ExtendedConnection(gamma.derivation, rows, direct, label="iterated")


def validate_extended(T: ExtendedConnection) -> list[str]:
    """Check T_0 = id, homogeneity, well-definedness on relations, and the
    higher Leibniz identity against the direct evaluator when there is one."""
    pres = T.pres
    problems = []
    for j in range(pres.ngens):
        if not pres.is_zero(T.values[0][j] - pres.gen(j, "R")):
            problems.append(f"T_0({pres.module.names[j]}) is not the generator")
    for i in range(1, T.order + 1):
        for k in range(len(pres.module.relations)):
            if not pres.is_zero(apply_extended(T, i, relation_element(pres, k))):
                problems.append(f"T_{i} is not well defined on relation {k + 1}")
        if T.direct is not None:
            for j in range(pres.ngens):
                for v in range(pres.nvars):
                    m = pres.gen(j).mul_poly(pres.ring.var(v))
                    if not pres.equal(T.direct(i, m), apply_extended(T, i, m)):
                        problems.append(f"T_{i}({pres.ring.names[v]}*{pres.module.names[j]}) "
                                        "violates the higher Leibniz identity")
    return problems


def extended_flatness_failures(T: ExtendedConnection, upto: int | None = None) -> list[tuple[int, int]]:
    pres = T.pres
    top = T.order if upto is None else upto
    bad = []
    for i in range(0, top + 1):
        for v, dx in enumerate(T.derivation.values):
            if not in_K(apply_extended(T, i, dx), pres):
                bad.append((i, v))
    return bad


def is_flat_extended(T: ExtendedConnection) -> bool:
    return not extended_flatness_failures(T)


# ------------------------------------------------------------ T' and sigma

def _tprime_word(T: ExtendedConnection, j: int, g1: int, g2: int) -> TensorElement:
    key = ("tp", j, g1, g2)
    out = T._memo.get(key)
    if out is None:
        parts = [mul_graded(T.values[i][g1], T.values[j - i][g2]) for i in range(j + 1)]
        out = tensor_sum(parts, Space("R", j + 2), T.pres.nvars)
        T._memo[key] = out
    return out


def tprime(T: ExtendedConnection, j: int, omega: TensorElement) -> TensorElement:
    """T'_j on R^2 = T^2, extended to coefficients by the twisted Leibniz rule."""
    if j > T.order or j < 0:
        raise ValueError(f"T'_{j} needs T up to order {j}")
    if omega.length != 2:
        raise ValueError("T' acts on R^2")
    pres = T.pres
    parts = []
    for ((g1, g2), exps), c in omega.terms.items():
        parts.append(_tprime_word(T, j, g1, g2).mul_monomial(exps, c))
        if any(exps):
            da = T.derivation.on_monomial(exps)
            for i in range(1, j + 1):
                left = apply_extended(T, j - i, da)
                if left.terms:
                    parts.append(mul_graded(left, _tprime_word(T, i - 1, g1, g2))
                                 .scale(Fraction(1, j + 1 - i) * c))
    return tensor_sum(parts, Space("R", j + 2), pres.nvars)


def one_minus_sigma(omega: TensorElement) -> TensorElement:
    return n_minus_sigma(omega, 1)


def ti_residual(T: ExtendedConnection, i: int, m: TensorElement) -> TensorElement:
    """(i - sigma)((i+1) T_i(m) - T'_{i-1}((1 - sigma) T_1(m)))."""
    t1 = apply_extended(T, 1, m)
    inner = apply_extended(T, i, m).scale(i + 1) - tprime(T, i - 1, one_minus_sigma(t1))
    return n_minus_sigma(inner, i)


# ------------------------------------------------------- comparison maps

class ComparisonMap:
    """lambda = (lambda_0, ..., lambda_N), O_X-linear, lambda_0 = id."""

    def __init__(self, pres: Presentation, values: Sequence[Sequence[TensorElement]]):
        self.pres = pres
        self.values = tuple(tuple(v.retag("R") for v in row) for row in values)
        for i, row in enumerate(self.values):
            if len(row) != pres.ngens:
                raise ValueError(f"lambda_{i} needs one value per generator")
            for v in row:
                if v.length != i + 1:
                    raise ValueError(f"lambda_{i} values must lie in R^{i + 1}")
        self._memo: dict = {}

    @property
    def order(self) -> int:
        return len(self.values) - 1

    @classmethod
    def identity(cls, pres: Presentation, order: int = 0) -> "ComparisonMap":
        rows = [[pres.gen(j, "R") for j in range(pres.ngens)]]
        for i in range(1, order + 1):
            rows.append([_zero(pres, "R", i + 1) for _ in range(pres.ngens)])
        return cls(pres, rows)

    def apply(self, i: int, m: TensorElement) -> TensorElement:
        return tensor_sum((self.values[i][j].mul_monomial(exps, c) for ((j,), exps), c in m.terms.items()),
                          Space("R", i + 1), self.pres.nvars)

    def is_identity_at_zero(self) -> bool:
        return all(self.pres.is_zero(self.values[0][j] - self.pres.gen(j, "R"))
                   for j in range(self.pres.ngens))


def compositions(q: int, p: int, cap: int):
    """Tuples of p non-negative integers summing to q, each at most cap."""
    if p == 0:
        if q == 0:
            yield ()
        return
    for first in range(min(q, cap) + 1):
        for rest in compositions(q - first, p - 1, cap):
            yield (first,) + rest


def _slotwise(lam: ComparisonMap, word, comp, tag: str) -> TensorElement:
    key = (tag, word, comp)
    out = lam._memo.get(key)
    if out is None:
        out = TensorElement.word((), lam.pres.nvars, "T")
        for g, i in zip(word, comp):
            out = concat(out, lam.values[i][g], "T")
        out = out.retag(tag)
        lam._memo[key] = out
    return out


def s_map(lam: ComparisonMap, q: int, omega: TensorElement) -> TensorElement:
    """s_q(lambda) on R^p: sum over compositions of (i_p + 1) lambda_{i_1} ... lambda_{i_p}."""
    p = omega.length
    if p < 1:
        raise ValueError("s_q acts on R^p with p >= 1")
    if q > lam.order:
        raise ValueError(f"s_{q} needs lambda up to order {q}")
    parts = []
    for (word, exps), c in omega.terms.items():
        for comp in compositions(q, p, lam.order):
            t = _slotwise(lam, word, comp, "R")
            if t.terms:
                parts.append(t.mul_monomial(exps, c * (comp[-1] + 1)))
    return tensor_sum(parts, Space("R", p + q), lam.pres.nvars)


def s_tilde(lam: ComparisonMap, q: int, omega: TensorElement) -> TensorElement:
    """s~_q(lambda) on S^p, no weighting factor."""
    p = omega.length
    if p < 1:
        raise ValueError("s~_q acts on S^p with p >= 1")
    if q > lam.order:
        raise ValueError(f"s~_{q} needs lambda up to order {q}")
    parts = []
    for (word, exps), c in omega.terms.items():
        for comp in compositions(q, p, lam.order):
            t = _slotwise(lam, word, comp, "S")
            if t.terms:
                parts.append(t.mul_monomial(exps, c))
    return tensor_sum(parts, Space("S", p + q), lam.pres.nvars)


def equiviter_rhs(lam: ComparisonMap, T: ExtendedConnection, i: int, m: TensorElement) -> TensorElement:
    """sum_{l=0}^{i} s_{i-l}(lambda) T_l(m)."""
    parts = [s_map(lam, i - l, apply_extended(T, l, m)) for l in range(i + 1)]
    return tensor_sum(parts, Space("R", i + 1), T.pres.nvars)


def compare_extended(T: ExtendedConnection, S: ExtendedConnection) -> ComparisonMap:
    """The unique O_X-linear lambda with S_i = sum_l s_{i-l}(lambda) T_l, for flat T."""
    if T.order != S.order:
        raise ValueError("extended connections of different orders")
    if T.pres != S.pres:
        raise ValueError("extended connections over different presentations")
    pres = T.pres
    bad = extended_flatness_failures(T, T.order - 1)
    if bad:
        i, v = bad[0]
        raise NotFlatError(f"T_{i} D({pres.ring.names[v]}) is not in K^{i + 1}")
    rows = [[pres.gen(j, "R") for j in range(pres.ngens)]]
    for i in range(1, T.order + 1):
        lam = ComparisonMap(pres, rows)

        def raw(m: TensorElement, i=i, lam=lam) -> TensorElement:
            r = [s_map(lam, i - l, apply_extended(T, l, m)) for l in range(1, i)]
            diff = apply_extended(S, i, m) - apply_extended(T, i, m)
            return (diff - tensor_sum(r, Space("R", i + 1), pres.nvars)).scale(Fraction(1, i + 1))

        row = [raw(pres.gen(j)) for j in range(pres.ngens)]
        rows.append(row)
        candidate = ComparisonMap(pres, rows)
        for k in range(len(pres.module.relations)):
            if not pres.is_zero(candidate.apply(i, relation_element(pres, k))):
                raise NotLinearError(f"lambda_{i} is not well defined on relation {k + 1}")
        for j in range(pres.ngens):
            for v in range(pres.nvars):
                m = pres.gen(j).mul_poly(pres.ring.var(v))
                if not pres.equal(raw(m), candidate.apply(i, m)):
                    raise NotLinearError(f"lambda_{i} has a Leibniz term at "
                                         f"{pres.ring.names[v]}*{pres.module.names[j]}")
    return ComparisonMap(pres, rows)


# ------------------------------------------------------------ flat extension

def _flat_step(gamma: Connection, S_full: ExtendedConnection, prev: ExtendedConnection,
               lam: ComparisonMap, n: int, m: TensorElement) -> TensorElement:
    pres = gamma.pres
    corr = [s_map(lam, n - l, apply_extended(prev, l, m)) for l in range(1, n)]
    u = S_full.direct(n, m) - tensor_sum(corr, Space("R", n + 1), pres.nvars)
    w = tprime(prev, n - 1, one_minus_sigma(apply_connection(gamma, m).retag("R")))
    w = w.scale(Fraction(1, n + 1))
    return u - n_minus_sigma(u - w, n).scale(Fraction(1, n + 1))


def extend_flat(gamma: Connection, N: int) -> ExtendedConnection:
    """A flat extended connection with T_1 = gamma, built degree by degree.

    Step n: iterate gamma to S, compare with T_{<n} to get lambda, set
    U = S_n - sum_{l=1}^{n-1} s_{n-l}(lambda) T_l (lambda_n := 0) and
    W = T'_{n-1}((1 - sigma) gamma) / (n + 1), then
    T_n = U - (n - sigma)(U - W) / (n + 1).
    """
    pres = gamma.pres
    if N < 1:
        raise ValueError("order must be at least 1")
    for v, res in flatness_residuals(gamma):
        if res.terms:
            raise NotFlatError(f"gamma D({pres.ring.names[v]}) is not in K^2")
    D = gamma.derivation
    S_full = iterate_connection(gamma, N)
    rows = [[pres.gen(j, "R") for j in range(pres.ngens)], [v.retag("R") for v in gamma.values]]
    steps: dict[int, tuple[ExtendedConnection, ComparisonMap]] = {}
    T = ExtendedConnection(D, rows, label="flat")
    for n in range(2, N + 1):
        lam = compare_extended(T, S_full.truncate(n - 1))
        steps[n] = (T, lam)
        rows = rows + [[_flat_step(gamma, S_full, T, lam, n, pres.gen(j)) for j in range(pres.ngens)]]
        T = ExtendedConnection(D, rows, label="flat")

    def direct(i: int, m: TensorElement) -> TensorElement:
        if i == 0:
            return m.retag("R")
        if i == 1:
            return apply_connection(gamma, m).retag("R")
        prev, lam = steps[i]
        return _flat_step(gamma, S_full, prev, lam, i, m)

    return ExtendedConnection(D, rows, direct, label="flat")


def extended_from_lambda(T: ExtendedConnection, lam: ComparisonMap) -> ExtendedConnection:
    """S with S_i = sum_l s_{i-l}(lambda) T_l on generators."""
    pres = T.pres
    order = min(T.order, lam.order)
    rows = [[equiviter_rhs(lam, T, i, pres.gen(j)) for j in range(pres.ngens)] for i in range(order + 1)]

    def direct(i: int, m: TensorElement) -> TensorElement:
        return equiviter_rhs(lam, T, i, m)

    return ExtendedConnection(T.derivation, rows, direct, label="equiviter")


__all__ = [
    "ComparisonMap", "Connection", "Derivation", "ExtendedConnection", "NotFlatError", "NotLinearError",
    "apply_connection", "apply_derivation", "apply_extended", "compare_extended", "compositions",
    "connection_residuals", "equiviter_rhs", "is_homogeneous_connection", "extend_flat", "extended_flatness_failures",
    "extended_from_lambda", "flatness_residuals", "is_flat_connection", "is_flat_extended",
    "iterate_connection", "nabla", "one_minus_sigma", "s_map", "s_tilde", "solve_connection",
    "ti_residual", "tprime", "validate_connection", "validate_derivation", "validate_extended",
    "Infeasible", "Solution",
]
