"""Seeded random homogeneous elements for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .elements import Space, TensorElement
from .polynomial import Polynomial
from .presentation import Presentation


def _coeff(rng: random.Random) -> Fraction:
    c = rng.choice((-3, -2, -1, 1, 2, 3))
    return Fraction(c, rng.choice((1, 1, 1, 2)))


def random_polynomial(pres: Presentation, w: int, rng: random.Random, terms: int = 3) -> Polynomial:
    """A random combination of standard monomials of weight w."""
    basis = pres.standard_monomials(w)
    if not basis:
        return Polynomial(pres.nvars)
    picks = rng.sample(basis, min(terms, len(basis)))
    return Polynomial(pres.nvars, {m: _coeff(rng) for m in picks})


def ring_weights(pres: Presentation, cap: int) -> list[int]:
    """Weights in [0, cap] carrying a nonzero ring element."""
    return [w for w in range(cap + 1) if pres.standard_monomials(w)]


def random_homogeneous_pair(pres: Presentation, rng: random.Random, cap: int) -> tuple[Polynomial, Polynomial]:
    ws = ring_weights(pres, cap)
    return (random_polynomial(pres, rng.choice(ws), rng),
            random_polynomial(pres, rng.choice(ws), rng))


def random_tensor(pres: Presentation, space: Space, w: int, rng: random.Random, terms: int = 3) -> TensorElement:
    """A random element of the weight-w piece of ``space`` in normal-form coordinates."""
    basis = pres.quotient_basis(space, w)
    if not basis:
        return TensorElement.zero(space, pres.nvars)
    picks = rng.sample(basis, min(terms, len(basis)))
    return TensorElement(space, pres.nvars, {k: _coeff(rng) for k in picks})


def tensor_weights(pres: Presentation, space: Space, lo: int, hi: int) -> list[int]:
    return [w for w in range(lo, hi + 1) if pres.quotient_basis(space, w)]
