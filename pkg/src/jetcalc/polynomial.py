"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are plain tuples of exponents, one entry per ambient variable.
A polynomial does not know its ring; weights and names are supplied by a
:class:`~jetcalc.presentation.RingPresentation` when needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Exps = tuple[int, ...]


def mono_mul(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def mono_weight(exps: Exps, weights: tuple[int, ...]) -> int:
    return sum(e * w for e, w in zip(exps, weights))


def unit_exps(nvars: int, v: int) -> Exps:
    return tuple(1 if i == v else 0 for i in range(nvars))


class Polynomial:
    """Immutable polynomial: a finite map from exponent tuples to Fractions."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exps, Fraction | int] | None = None):
        self.nvars = nvars
        clean: dict[Exps, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    if len(exps) != nvars:
                        raise ValueError(f"monomial {exps} has wrong arity for {nvars} variables")
                    clean[exps] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exps, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, nvars: int, c: Fraction | int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, v: int) -> "Polynomial":
        return cls._raw(nvars, {unit_exps(nvars, v): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Exps, c: Fraction | int = 1) -> "Polynomial":
        return cls(len(exps), {exps: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Exps, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in rings of different arity")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial._raw(self.nvars, {})
            return Polynomial._raw(self.nvars, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        out: dict[Exps, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, v: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``v``."""
        out: dict[Exps, Fraction] = {}
        for m, c in self.terms.items():
            if m[v]:
                m2 = m[:v] + (m[v] - 1,) + m[v + 1:]
                out[m2] = out.get(m2, 0) + c * m[v]
        return Polynomial(self.nvars, out)

    def weight_parts(self, weights: tuple[int, ...]) -> dict[int, "Polynomial"]:
        parts: dict[int, dict[Exps, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(mono_weight(m, weights), {})[m] = c
        return {w: Polynomial._raw(self.nvars, t) for w, t in sorted(parts.items())}

    def is_homogeneous(self, weights: tuple[int, ...]) -> bool:
        return len(self.weight_parts(weights)) <= 1

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {dict(sorted(self.terms.items()))!r})"


def poly_sum(polys: Iterable[Polynomial], nvars: int) -> Polynomial:
    acc: dict[Exps, Fraction] = {}
    for p in polys:
        for m, c in p.terms.items():
            acc[m] = acc.get(m, 0) + c
    return Polynomial(nvars, acc)
