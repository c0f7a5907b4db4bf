"""Affine feasibility over graded pieces of the tensor spaces.

Unknowns are tensors in a fixed graded piece. Each constraint is an affine
map from an assignment of the unknowns to a tensor that must vanish in its
space. Because the maps are affine, evaluating at zero and at each basis
coordinate recovers the linear system exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from .elements import Key, Space, TensorElement
from .linalg import solve_combination
from .presentation import Presentation

Assignment = Mapping[Hashable, TensorElement]


@dataclass(frozen=True)
class Unknown:
    name: Hashable
    space: Space
    weight: int


@dataclass(frozen=True)
class AffineConstraint:
    label: str
    space: Space
    evaluate: Callable[[Assignment], TensorElement]


@dataclass
class Solution:
    assignment: dict
    nullity: int

    def __bool__(self) -> bool:
        return True


@dataclass
class Infeasible:
    """No rational solution. ``obstructions`` holds (label, weight, residual) triples,
    lowest weight first: the constant part of the system reduced modulo both the
    relations and everything the unknowns can reach."""

    obstructions: list[tuple[str, int, TensorElement]]

    def __bool__(self) -> bool:
        return False


def _zero_assignment(pres: Presentation, unknowns: Sequence[Unknown]) -> dict:
    return {u.name: TensorElement.zero(u.space, pres.nvars) for u in unknowns}


def _flatten(pres: Presentation, constraints: Sequence[AffineConstraint], values) -> dict:
    vec: dict[tuple[int, Key], Fraction] = {}
    for idx, (con, val) in enumerate(zip(constraints, values)):
        nf = pres.normal_form(val.retag(con.space.tag) if val.length == con.space.length else val,
                              con.space)
        for k, c in nf.terms.items():
            vec[(idx, k)] = c
    return vec


def solve_affine(pres: Presentation, unknowns: Sequence[Unknown],
                 constraints: Sequence[AffineConstraint]) -> Solution | Infeasible:
    zero = _zero_assignment(pres, unknowns)
    base_vals = [con.evaluate(zero) for con in constraints]
    base = _flatten(pres, constraints, base_vals)

    columns: dict[tuple[Hashable, Key], dict] = {}
    for u in unknowns:
        for key in pres.quotient_basis(u.space, u.weight):
            trial = dict(zero)
            trial[u.name] = TensorElement(u.space, pres.nvars, {key: 1})
            vals = [con.evaluate(trial) for con in constraints]
            col = _flatten(pres, constraints, vals)
            for k, c in base.items():
                s = col.get(k, 0) - c
                if s:
                    col[k] = s
                else:
                    col.pop(k, None)
            columns[(u.name, key)] = col

    target = {k: -c for k, c in base.items()}
    sol, residual, nullity = solve_combination(columns, target)
    if sol is None:
        per: dict[int, dict] = {}
        for (idx, k), c in residual.items():
            per.setdefault(idx, {})[k] = -c
        obs = []
        for idx, terms in sorted(per.items()):
            con = constraints[idx]
            elem = TensorElement(con.space, pres.nvars, terms)
            for w, piece in pres.weight_pieces(elem).items():
                obs.append((con.label, w, piece))
        obs.sort(key=lambda t: t[1])
        return Infeasible(obs)

    assignment = {}
    for u in unknowns:
        terms = {key: c for (name, key), c in sol.items() if name == u.name}
        assignment[u.name] = TensorElement(u.space, pres.nvars, terms)
    return Solution(assignment, nullity)
