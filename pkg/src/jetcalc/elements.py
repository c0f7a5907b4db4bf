"""Tensor words with polynomial coefficients.

A :class:`TensorElement` is stored flat, as a map ``(word, exps) -> Fraction``
where ``word`` is a tuple of module-generator indices and ``exps`` a
monomial. The space tag only changes which relations the zero-test uses;
all four spaces share the tensor-word coordinates. Length-1 elements are
module elements, length-0 elements are ring elements.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple

from .polynomial import Exps, Polynomial, mono_mul

Word = tuple[int, ...]
Key = tuple[Word, Exps]

TAGS = ("T", "S", "A", "R")

# Quotient maps that exist between the tagged spaces of a fixed length.
_QUOTIENTS = {
    "T": {"T", "S", "A", "R"},
    "R": {"R", "S"},
    "S": {"S"},
    "A": {"A"},
}


class Space(NamedTuple):
    tag: str
    length: int

    def __str__(self) -> str:
        return f"{self.tag}^{self.length}"

    def check(self) -> "Space":
        if self.tag not in TAGS:
            raise ValueError(f"unknown space tag {self.tag!r}")
        if self.length < 0:
            raise ValueError("negative tensor length")
        return self

    def is_quotient_of(self, other: "Space") -> bool:
        if self.length != other.length:
            return False
        if self.length <= 1:
            return True
        if other.tag == "R" and self.length == 2 and self.tag == "T":
            return True  # R^2 = S^1 (x) F = T^2
        return self.tag in _QUOTIENTS[other.tag]


class TensorElement:
    __slots__ = ("space", "nvars", "terms", "_hash")

    def __init__(self, space: Space, nvars: int, terms: Mapping[Key, Fraction | int] | None = None):
        self.space = Space(*space).check()
        self.nvars = nvars
        clean: dict[Key, Fraction] = {}
        if terms:
            n = self.space.length
            for (word, exps), c in terms.items():
                if not c:
                    continue
                if len(word) != n:
                    raise ValueError(f"word {word} does not have length {n}")
                if len(exps) != nvars:
                    raise ValueError(f"monomial {exps} has wrong arity")
                clean[(tuple(word), tuple(exps))] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, space: Space, nvars: int, terms: dict[Key, Fraction]) -> "TensorElement":
        t = cls.__new__(cls)
        t.space = space
        t.nvars = nvars
        t.terms = terms
        t._hash = None
        return t

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, space: Space, nvars: int) -> "TensorElement":
        return cls._raw(Space(*space), nvars, {})

    @classmethod
    def word(cls, word: Iterable[int], nvars: int, tag: str = "T", coeff: Fraction | int = 1,
             exps: Exps | None = None) -> "TensorElement":
        word = tuple(word)
        exps = exps if exps is not None else (0,) * nvars
        return cls(Space(tag, len(word)), nvars, {(word, exps): coeff})

    @classmethod
    def scalar(cls, p: Polynomial, tag: str = "S") -> "TensorElement":
        return cls._raw(Space(tag, 0), p.nvars, {((), m): c for m, c in p.terms.items()})

    @classmethod
    def from_coefficients(cls, coeffs: Mapping[Word, Polynomial], space: Space, nvars: int) -> "TensorElement":
        terms: dict[Key, Fraction] = {}
        for word, p in coeffs.items():
            for m, c in p.terms.items():
                terms[(tuple(word), m)] = terms.get((tuple(word), m), 0) + c
        return cls(space, nvars, terms)

    @classmethod
    def module_element(cls, coeffs: Iterable[Polynomial], nvars: int) -> "TensorElement":
        """Module element sum_j coeffs[j] * g_j."""
        return cls.from_coefficients({(j,): p for j, p in enumerate(coeffs)}, Space("T", 1), nvars)

    # accessors ----------------------------------------------------------
    @property
    def length(self) -> int:
        return self.space.length

    @property
    def tag(self) -> str:
        return self.space.tag

    def is_trivial(self) -> bool:
        """True when the representative has no terms (not a zero-test)."""
        return not self.terms

    def __iter__(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def words(self) -> list[Word]:
        return sorted({w for w, _ in self.terms})

    def coefficient(self, word: Word) -> Polynomial:
        return Polynomial(self.nvars, {m: c for (w, m), c in self.terms.items() if w == tuple(word)})

    def coefficients(self) -> dict[Word, Polynomial]:
        out: dict[Word, dict] = {}
        for (w, m), c in self.terms.items():
            out.setdefault(w, {})[m] = c
        return {w: Polynomial(self.nvars, t) for w, t in sorted(out.items())}

    def as_polynomial(self) -> Polynomial:
        if self.length != 0:
            raise ValueError("only length-0 tensors are ring elements")
        return Polynomial(self.nvars, {m: c for (_, m), c in self.terms.items()})

    def module_coefficients(self, ngens: int) -> list[Polynomial]:
        if self.length != 1:
            raise ValueError("only length-1 tensors are module elements")
        return [self.coefficient((j,)) for j in range(ngens)]

    # structural equality (of representatives) --------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.space == other.space and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"TensorElement({self.space}, {dict(sorted(self.terms.items()))!r})"

    # linear structure ---------------------------------------------------
    def _check_compatible(self, other: "TensorElement") -> None:
        if self.length != other.length:
            raise ValueError(f"cannot add tensors of lengths {self.length} and {other.length}")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check_compatible(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TensorElement._raw(self.space, self.nvars, out)

    def __neg__(self) -> "TensorElement":
        return TensorElement._raw(self.space, self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "TensorElement":
        if not c:
            return TensorElement._raw(self.space, self.nvars, {})
        c = Fraction(c)
        return TensorElement._raw(self.space, self.nvars, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Polynomial):
            return self.mul_poly(other)
        return NotImplemented

    __rmul__ = __mul__

    def mul_poly(self, p: Polynomial) -> "TensorElement":
        out: dict[Key, Fraction] = {}
        for (w, m1), c1 in self.terms.items():
            for m2, c2 in p.terms.items():
                k = (w, mono_mul(m1, m2))
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return TensorElement._raw(self.space, self.nvars, out)

    def mul_monomial(self, exps: Exps, c: Fraction | int = 1) -> "TensorElement":
        c = Fraction(c)
        return TensorElement._raw(self.space, self.nvars,
                                  {(w, mono_mul(m, exps)): v * c for (w, m), v in self.terms.items()})

    def retag(self, tag: str) -> "TensorElement":
        return TensorElement._raw(Space(tag, self.length).check(), self.nvars, self.terms)

    def map_words(self, fn: Callable[[Word], Iterable[tuple[Word, Fraction | int]]],
                  space: Space | None = None) -> "TensorElement":
        """Apply a word-level linear map, extended linearly over coefficients."""
        out: dict[Key, Fraction] = {}
        target = space or self.space
        for (w, m), c in self.terms.items():
            for w2, c2 in fn(w):
                k = (w2, m)
                s = out.get(k, 0) + c * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return TensorElement(target, self.nvars, out)


def concat(a: TensorElement, b: TensorElement, tag: str) -> TensorElement:
    """Word concatenation a.b, bilinear over polynomial coefficients."""
    out: dict[Key, Fraction] = {}
    for (w1, m1), c1 in a.terms.items():
        for (w2, m2), c2 in b.terms.items():
            k = (w1 + w2, mono_mul(m1, m2))
            s = out.get(k, 0) + c1 * c2
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return TensorElement._raw(Space(tag, a.length + b.length).check(), a.nvars, out)


def tensor_sum(elems: Iterable[TensorElement], space: Space, nvars: int) -> TensorElement:
    out: dict[Key, Fraction] = {}
    for e in elems:
        if e.length != space.length:
            raise ValueError(f"cannot add a length-{e.length} tensor into {space}")
        for k, c in e.terms.items():
            out[k] = out.get(k, 0) + c
    return TensorElement(space, nvars, out)
