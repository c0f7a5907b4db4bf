"""The truncated jet algebra J^N = S^0 x S^1 x ... x S^N and its Hasse derivation tau."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .elements import Space, TensorElement, concat, tensor_sum
from .hasse import HasseDerivation, hasse_apply
from .polynomial import Polynomial
from .presentation import Presentation


@dataclass(frozen=True)
class JetElement:
    """Dense components (c_0, ..., c_N) with c_i in S^i; c_0 is a length-0 tensor."""

    components: tuple[TensorElement, ...]

    def __post_init__(self):
        comps = tuple(c.retag("S") for c in self.components)
        for i, c in enumerate(comps):
            if c.length != i:
                raise ValueError(f"jet component {i} must lie in S^{i}")
        object.__setattr__(self, "components", comps)

    @property
    def order(self) -> int:
        return len(self.components) - 1

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @classmethod
    def zero(cls, nvars: int, N: int) -> "JetElement":
        return cls(tuple(TensorElement.zero(Space("S", i), nvars) for i in range(N + 1)))

    @classmethod
    def scalar(cls, a: Polynomial, N: int) -> "JetElement":
        z = cls.zero(a.nvars, N).components
        return cls((TensorElement.scalar(a),) + z[1:])

    @classmethod
    def top(cls, c: TensorElement) -> "JetElement":
        """The element (0, ..., 0, c) of J^N with N the length of c."""
        z = cls.zero(c.nvars, c.length).components
        return cls(z[:-1] + (c,))

    def __add__(self, other: "JetElement") -> "JetElement":
        if self.order != other.order:
            raise ValueError("jets of different orders")
        return JetElement(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "JetElement") -> "JetElement":
        return self + other.scale(-1)

    def scale(self, c) -> "JetElement":
        return JetElement(tuple(a.scale(c) for a in self.components))


def jet_product(u: JetElement, v: JetElement, N: int | None = None) -> JetElement:
    """Convolution product truncated at N."""
    N = min(u.order, v.order) if N is None else N
    if N > min(u.order, v.order):
        raise ValueError("cannot multiply above the order of the factors")
    comps = []
    for k in range(N + 1):
        comps.append(tensor_sum((concat(u.components[i], v.components[k - i], "S") for i in range(k + 1)),
                                Space("S", k), u.nvars))
    return JetElement(tuple(comps))


def tau(h: HasseDerivation, a: Polynomial, N: int | None = None) -> JetElement:
    N = h.order if N is None else N
    return JetElement(tuple(hasse_apply(h, a, i) for i in range(N + 1)))


def truncate(u: JetElement, k: int) -> JetElement:
    if k > u.order or k < 0:
        raise ValueError("truncation order out of range")
    return JetElement(u.components[:k + 1])


def jet_equal(pres: Presentation, u: JetElement, v: JetElement) -> bool:
    if u.order != v.order:
        return False
    return all(pres.equal(a, b, Space("S", i)) for i, (a, b) in enumerate(zip(u.components, v.components)))


def jet_is_zero(pres: Presentation, u: JetElement) -> bool:
    return all(pres.is_zero(c, Space("S", i)) for i, c in enumerate(u.components))


def in_truncation_kernel(pres: Presentation, u: JetElement) -> bool:
    """u maps to zero in J^(N-1)."""
    return jet_is_zero(pres, truncate(u, u.order - 1))


def kernel_part(u: JetElement) -> TensorElement:
    """The S^N component, which spans the truncation kernel."""
    return u.components[-1]


def check_kernel(pres: Presentation, samples: Sequence[JetElement]) -> list[str]:
    """Exactness of 0 -> S^N -> J^N -> J^(N-1) -> 0 on the given elements.

    For each u: u - top(c_N) lies in the kernel iff it is zero, products of two
    kernel elements vanish, and kernel times u only sees c_0.
    """
    problems = []
    for n, u in enumerate(samples):
        N = u.order
        k = JetElement.top(kernel_part(u))
        if not in_truncation_kernel(pres, k):
            problems.append(f"sample {n}: top component escapes the kernel")
        if in_truncation_kernel(pres, u) != jet_is_zero(pres, u - k):
            problems.append(f"sample {n}: kernel membership disagrees with the lower components")
        if not jet_is_zero(pres, jet_product(k, k, N)):
            problems.append(f"sample {n}: kernel squares to a nonzero element")
        expected = JetElement.top(concat(u.components[0], kernel_part(u), "S"))
        if not jet_equal(pres, jet_product(u, k, N), expected):
            problems.append(f"sample {n}: kernel is not an S^N-module over c_0")
    return problems


__all__ = ["JetElement", "check_kernel", "in_truncation_kernel", "jet_equal", "jet_is_zero", "jet_product",
           "kernel_part", "tau", "truncate"]
