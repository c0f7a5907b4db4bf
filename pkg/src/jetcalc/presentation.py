"""Weighted-graded rings, finitely presented graded modules, and zero-tests.

Equality in every tensor space is decided one graded piece at a time.
Coefficients are first reduced modulo the ideal (a per-weight echelon of
monomial multiples of the ideal generators), words are then brought to a
canonical order for the symmetric, exterior and ``R`` quotients, and what is
left is reduced against the span of the inserted module relations. The
result is a canonical normal form, so an element is zero iff its normal form
has no terms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .elements import Key, Space, TensorElement, Word
from .linalg import Echelon
from .polynomial import Exps, Polynomial, mono_mul, mono_weight


@dataclass(frozen=True)
class RingPresentation:
    """Q[vars] / (ideal) with positive variable weights."""

    names: tuple[str, ...]
    weights: tuple[int, ...]
    ideal: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise ValueError("one weight per variable is required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def var(self, name_or_index: str | int) -> Polynomial:
        v = self.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return Polynomial.variable(self.nvars, v)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def one(self) -> Polynomial:
        return Polynomial.constant(self.nvars, 1)

    def zero(self) -> Polynomial:
        return Polynomial(self.nvars)

    def weight(self, exps: Exps) -> int:
        return mono_weight(exps, self.weights)


@dataclass(frozen=True)
class ModulePresentation:
    """Generators with integer weights and relation vectors (one poly per generator)."""

    names: tuple[str, ...]
    weights: tuple[int, ...]
    relations: tuple[tuple[Polynomial, ...], ...] = ()

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise ValueError("one weight per generator is required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        for rel in self.relations:
            if len(rel) != len(self.names):
                raise ValueError("each relation needs one coefficient per generator")

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


def weighted_monomials(w: int, ring: RingPresentation) -> list[Exps]:
    """All monomials of weight exactly ``w``, in (weight, lex) order."""
    if w < 0:
        return []
    return list(_weighted_monomials(w, ring.weights))


@lru_cache(maxsize=None)
def _weighted_monomials(w: int, weights: tuple[int, ...]) -> tuple[Exps, ...]:
    if any(x <= 0 for x in weights):
        raise ValueError("variable weights must be positive")
    out: list[Exps] = []

    def rec(i: int, remaining: int, acc: list[int]) -> None:
        if i == len(weights):
            if remaining == 0:
                out.append(tuple(acc))
            return
        for e in range(remaining // weights[i] + 1):
            acc.append(e)
            rec(i + 1, remaining - e * weights[i], acc)
            acc.pop()

    rec(0, w, [])
    return tuple(sorted(out))


def graded_split(p: Polynomial, ring: RingPresentation) -> dict[int, Polynomial]:
    return p.weight_parts(ring.weights)


def words(length: int, ngens: int) -> Iterable[Word]:
    return itertools.product(range(ngens), repeat=length)


# ---------------------------------------------------------------- validation

def relation_weight(rel: Sequence[Polynomial], ring: RingPresentation,
                    module: ModulePresentation) -> set[int]:
    ws = set()
    for j, p in enumerate(rel):
        for m, _ in p:
            ws.add(ring.weight(m) + module.weights[j])
    return ws


def validate_presentation(ring: RingPresentation, module: ModulePresentation | None = None) -> list[str]:
    """Return a list of violated invariants (empty when valid)."""
    problems: list[str] = []
    for name, w in zip(ring.names, ring.weights):
        if w <= 0:
            problems.append(f"variable {name}: non-positive weight {w}")
    for i, f in enumerate(ring.ideal):
        if f.nvars != ring.nvars:
            problems.append(f"ideal generator {i + 1}: wrong number of variables")
        elif not f.is_homogeneous(ring.weights):
            problems.append(f"ideal generator {i + 1}: not weighted-homogeneous "
                            f"(weights {sorted(f.weight_parts(ring.weights))})")
    if module is not None:
        for i, rel in enumerate(module.relations):
            ws = relation_weight(rel, ring, module)
            if len(ws) > 1:
                problems.append(f"relation {i + 1}: not homogeneous (weights {sorted(ws)})")
    return problems


# ------------------------------------------------------------- normal forms

def canonical_word(word: Word, tag: str) -> tuple[Word, int]:
    """Canonical representative of a word in the tagged quotient, with sign.

    The sign is 0 when the word vanishes (repeated letter in the exterior power).
    """
    n = len(word)
    if n <= 1 or tag == "T":
        return word, 1
    if tag == "S":
        return tuple(sorted(word)), 1
    if tag == "R":
        return tuple(sorted(word[:-1])) + (word[-1],), 1
    if tag == "A":
        if len(set(word)) < n:
            return word, 0
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if word[i] > word[j])
        return tuple(sorted(word)), -1 if inversions % 2 else 1
    raise ValueError(f"unknown tag {tag!r}")


def _slots(tag: str, n: int) -> tuple[int, ...]:
    # Slots that give distinct relation spans after canonicalization.
    if n <= 1:
        return (0,)
    if tag in ("S", "A"):
        return (0,)
    if tag == "R":
        return (0, n - 1)
    return tuple(range(n))


@dataclass(frozen=True, eq=True)
class Presentation:
    """A ring and a module over it, with cached graded normal-form data."""

    ring: RingPresentation
    module: ModulePresentation
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    @property
    def ngens(self) -> int:
        return self.module.rank

    def validate(self) -> list[str]:
        return validate_presentation(self.ring, self.module)

    # weights -----------------------------------------------------------
    def word_weight(self, word: Word) -> int:
        return sum(self.module.weights[g] for g in word)

    def term_weight(self, key: Key) -> int:
        word, exps = key
        return self.ring.weight(exps) + self.word_weight(word)

    def weight_pieces(self, elem: TensorElement) -> dict[int, TensorElement]:
        parts: dict[int, dict] = {}
        for k, c in elem.terms.items():
            parts.setdefault(self.term_weight(k), {})[k] = c
        return {w: TensorElement._raw(elem.space, elem.nvars, t) for w, t in sorted(parts.items())}

    def weights_of(self, elem: TensorElement) -> list[int]:
        return sorted({self.term_weight(k) for k in elem.terms})

    def is_homogeneous(self, elem: TensorElement) -> bool:
        return len(self.weights_of(elem)) <= 1

    # ring normal form ----------------------------------------------------
    def _ideal_echelon(self, w: int) -> Echelon:
        key = ("ideal", w)
        ech = self._cache.get(key)
        if ech is None:
            ech = Echelon()
            for f in self.ring.ideal:
                fw = next(iter(f.weight_parts(self.ring.weights)), None)
                if fw is None:
                    continue
                for m in weighted_monomials(w - fw, self.ring):
                    ech.add({mono_mul(e, m): c for e, c in f.terms.items()})
            self._cache[key] = ech
        return ech

    def standard_monomials(self, w: int) -> list[Exps]:
        """Monomials of weight ``w`` forming a basis of the quotient ring in that weight."""
        key = ("std", w)
        out = self._cache.get(key)
        if out is None:
            piv = set(self._ideal_echelon(w).rows)
            out = [m for m in weighted_monomials(w, self.ring) if m not in piv]
            self._cache[key] = out
        return out

    def reduce_monomial(self, exps: Exps) -> dict[Exps, Fraction]:
        key = ("mono", exps)
        out = self._cache.get(key)
        if out is None:
            out = self._ideal_echelon(self.ring.weight(exps)).residual({exps: Fraction(1)})
            self._cache[key] = out
        return out

    def ring_normal_form(self, p: Polynomial) -> Polynomial:
        acc: dict[Exps, Fraction] = {}
        for m, c in p.terms.items():
            for m2, c2 in self.reduce_monomial(m).items():
                acc[m2] = acc.get(m2, 0) + c * c2
        return Polynomial(self.nvars, acc)

    def ring_is_zero(self, p: Polynomial) -> bool:
        return self.ring_normal_form(p).is_zero()

    # tensor normal form ------------------------------------------------
    def _canonical_terms(self, terms, tag: str) -> dict[Key, Fraction]:
        acc: dict[Key, Fraction] = {}
        for (word, exps), c in terms:
            w2, sign = canonical_word(word, tag)
            if not sign:
                continue
            for m2, c2 in self.reduce_monomial(exps).items():
                k = (w2, m2)
                s = acc.get(k, 0) + sign * c * c2
                if s:
                    acc[k] = s
                else:
                    acc.pop(k, None)
        return acc

    def _relation_echelon(self, tag: str, n: int, w: int) -> Echelon:
        key = ("rel", tag, n, w)
        ech = self._cache.get(key)
        if ech is not None:
            return ech
        ech = Echelon()
        if n >= 1:
            for rel in self.module.relations:
                rws = relation_weight(rel, self.ring, self.module)
                if not rws:
                    continue
                rw = next(iter(rws))
                for s in _slots(tag, n):
                    seen = set()
                    for u in words(n - 1, self.ngens):
                        cu = canonical_word(u, "S" if tag in ("S", "A") else "T")[0]
                        if tag == "R" and n >= 2:
                            cu = (tuple(sorted(u[:-1])) + (u[-1],)) if s == 0 else tuple(sorted(u))
                        if cu in seen:
                            continue
                        seen.add(cu)
                        mw = w - rw - self.word_weight(u)
                        for m in self.standard_monomials(mw):
                            raw = []
                            for j, p in enumerate(rel):
                                word = u[:s] + (j,) + u[s:]
                                for e, c in p.terms.items():
                                    raw.append(((word, mono_mul(e, m)), c))
                            vec = self._canonical_terms(raw, tag)
                            if vec:
                                ech.add(vec)
        self._cache[key] = ech
        return ech

    def normal_form(self, elem: TensorElement, space: Space | None = None) -> TensorElement:
        """Canonical representative of ``elem`` in ``space`` (default: its own)."""
        space = Space(*(space or elem.space))
        if space.length != elem.length:
            raise ValueError("normal_form: length mismatch")
        canon = self._canonical_terms(elem.terms.items(), space.tag)
        pieces: dict[int, dict] = {}
        for k, c in canon.items():
            pieces.setdefault(self.term_weight(k), {})[k] = c
        out: dict[Key, Fraction] = {}
        for w, vec in pieces.items():
            out.update(self._relation_echelon(space.tag, space.length, w).residual(vec))
        return TensorElement._raw(space, elem.nvars, out)

    def is_zero(self, elem: TensorElement, space: Space | None = None) -> bool:
        return not self.normal_form(elem, space).terms

    def equal(self, a: TensorElement, b: TensorElement, space: Space | None = None) -> bool:
        return self.is_zero(a - b, space or a.space)

    def quotient_basis(self, space: Space, w: int) -> list[Key]:
        """Coordinates spanning the graded piece ``w`` of ``space`` modulo relations."""
        space = Space(*space)
        ech = self._relation_echelon(space.tag, space.length, w)
        seen: set[Key] = set()
        out: list[Key] = []
        for word in words(space.length, self.ngens):
            cw, sign = canonical_word(word, space.tag)
            if not sign or cw in seen:
                continue
            seen.add(cw)
            for m in self.standard_monomials(w - self.word_weight(cw)):
                k = (cw, m)
                if k not in ech.rows:
                    out.append(k)
        return sorted(out)

    # ring / module element helpers --------------------------------------
    def module_element(self, coeffs: Sequence[Polynomial]) -> TensorElement:
        return TensorElement.module_element(coeffs, self.nvars)

    def gen(self, j: int | str, tag: str = "T") -> TensorElement:
        if isinstance(j, str):
            j = self.module.index(j)
        return TensorElement.word((j,), self.nvars, tag)

    def word(self, word: Sequence[int | str], tag: str = "T") -> TensorElement:
        idx = tuple(self.module.index(g) if isinstance(g, str) else g for g in word)
        return TensorElement.word(idx, self.nvars, tag)


# --------------------------------------------------- naive relation spanning set

def relation_space_basis(target_weight: int, length: int, space: Space | str,
                         ring: RingPresentation, module: ModulePresentation) -> list[dict[Key, Fraction]]:
    """Spanning set of degree-``target_weight`` relations among length-n words.

    Vectors are in raw tensor-word coordinates and comprise module relations
    inserted in every slot, ideal generators times basis words, and the
    symmetrization relations of the tagged quotient. Used as the reference
    against which the fast normal form is checked.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    tag = space if isinstance(space, str) else space.tag
    ngens = module.rank
    wweight = lambda u: sum(module.weights[g] for g in u)  # noqa: E731
    out: list[dict[Key, Fraction]] = []
    for rel in module.relations:
        rws = relation_weight(rel, ring, module)
        if not rws:
            continue
        rw = next(iter(rws))
        for s in range(length):
            for u in words(length - 1, ngens):
                for m in weighted_monomials(target_weight - rw - wweight(u), ring):
                    vec: dict[Key, Fraction] = {}
                    for j, p in enumerate(rel):
                        word = u[:s] + (j,) + u[s:]
                        for e, c in p.terms.items():
                            k = (word, mono_mul(e, m))
                            vec[k] = vec.get(k, 0) + c
                    vec = {k: c for k, c in vec.items() if c}
                    if vec:
                        out.append(vec)
    for f in ring.ideal:
        parts = f.weight_parts(ring.weights)
        if not parts:
            continue
        fw = next(iter(parts))
        for u in words(length, ngens):
            for m in weighted_monomials(target_weight - fw - wweight(u), ring):
                out.append({(u, mono_mul(e, m)): c for e, c in f.terms.items()})
    if tag in ("S", "A", "R") and length >= 2:
        span = length if tag in ("S", "A") else length - 1
        for u in words(length, ngens):
            mons = weighted_monomials(target_weight - wweight(u), ring)
            if not mons:
                continue
            if tag == "A" and len(set(u)) < length:
                for m in mons:
                    out.append({(u, m): Fraction(1)})
            for i, j in itertools.combinations(range(span), 2):
                v = list(u)
                v[i], v[j] = v[j], v[i]
                v = tuple(v)
                sign = 1 if tag == "A" else -1
                for m in mons:
                    vec = {(u, m): Fraction(1)}
                    vec[(v, m)] = vec.get((v, m), 0) + sign
                    vec = {k: c for k, c in vec.items() if c}
                    if vec:
                        out.append(vec)
    return out


def naive_zero_test(elem: TensorElement, space: Space, ring: RingPresentation,
                    module: ModulePresentation) -> bool:
    """Zero-test by direct elimination against :func:`relation_space_basis`."""
    pres = Presentation(ring, module)
    for w, piece in pres.weight_pieces(elem).items():
        if space.length == 0:
            ech = Echelon()
            for f in ring.ideal:
                parts = f.weight_parts(ring.weights)
                if not parts:
                    continue
                for m in weighted_monomials(w - next(iter(parts)), ring):
                    ech.add({((), mono_mul(e, m)): c for e, c in f.terms.items()})
        else:
            ech = Echelon().extend(relation_space_basis(w, space.length, space, ring, module))
        if not ech.contains(piece.terms):
            return False
    return True
