"""Exact sparse Gaussian elimination over the rationals.

Vectors are dicts from hashable, mutually comparable column keys to
Fractions. The pivot of a row is its largest column, so a vector reduced
against an :class:`Echelon` is a canonical representative of its class
modulo the row span: it has no entries in pivot columns.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Vector = dict


def axpy(target: dict, scale: Fraction, source: Mapping) -> None:
    """target += scale * source, in place, dropping zeros."""
    for k, v in source.items():
        s = target.get(k, 0) + scale * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


class Echelon:
    """Row echelon basis of a subspace, optionally tracking combinations.

    With ``track=True`` every stored row remembers which combination of the
    vectors passed to :meth:`add` (identified by their labels) produced it.
    That is what :func:`solve_combination` uses to recover solutions.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.rows: dict[Hashable, dict] = {}
        self.combos: dict[Hashable, dict] = {}
        self._pivots: list = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list:
        return list(self._pivots)

    def reduce(self, vec: Mapping, combo: Mapping | None = None) -> tuple[dict, dict]:
        v = dict(vec)
        comb = dict(combo) if combo else {}
        for p in reversed(self._pivots):
            c = v.get(p)
            if c:
                axpy(v, -c, self.rows[p])
                if self.track:
                    axpy(comb, -c, self.combos[p])
        return v, comb

    def residual(self, vec: Mapping) -> dict:
        return self.reduce(vec)[0]

    def contains(self, vec: Mapping) -> bool:
        return not self.residual(vec)

    def add(self, vec: Mapping, label: Hashable | None = None) -> bool:
        """Insert ``vec``; return True when it enlarged the span."""
        combo = {label: Fraction(1)} if self.track else None
        v, comb = self.reduce(vec, combo)
        if not v:
            return False
        p = max(v)
        inv = 1 / Fraction(v[p])
        self.rows[p] = {k: c * inv for k, c in v.items()}
        if self.track:
            self.combos[p] = {k: c * inv for k, c in comb.items()}
        bisect.insort(self._pivots, p)
        return True

    def extend(self, vecs: Iterable[Mapping]) -> "Echelon":
        for v in vecs:
            self.add(v)
        return self


def rank(vectors: Iterable[Mapping]) -> int:
    return Echelon().extend(vectors).rank


def solve_combination(columns: Mapping[Hashable, Mapping], target: Mapping):
    """Find coefficients u with sum_k u[k] * columns[k] == target.

    Returns ``(solution, residual, nullity)``. When the target is outside the
    span, ``solution`` is None and ``residual`` is the nonzero remainder of the
    target after reduction; otherwise the residual is empty. Redundant
    columns get coefficient zero.
    """
    ech = Echelon(track=True)
    for label, col in columns.items():
        ech.add(col, label)
    # reduce(target) == target - sum(combo_k * column_k)
    v, comb = ech.reduce(target, {})
    nullity = len(columns) - ech.rank
    if v:
        return None, v, nullity
    return {k: -c for k, c in comb.items() if c}, {}, nullity


def kernel_dimension(columns: Mapping[Hashable, Mapping]) -> int:
    """Dimension of the kernel of the linear map whose images are ``columns``."""
    return len(columns) - rank(columns.values())
