"""Operations on the graded quotients T, S, A and R of the tensor algebra.

``R^n`` is ``S^(n-1) (x) F``: words whose first n-1 letters commute. The
switch operator moves each of the first n-1 letters to the final slot in
turn, and ``K^n`` is the kernel of ``n - (1 + switch)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .elements import Space, TensorElement, Word, concat
from .linalg import rank
from .presentation import Presentation


def _require_r(omega: TensorElement, op: str) -> None:
    if omega.tag != "R" and not (omega.length <= 2 and omega.tag == "T"):
        raise ValueError(f"{op} is defined on R^n only, got {omega.space}")


def switch_word(word: Word):
    """Terms of the switch operator on one word, following the displayed formula.

    sigma(m1...mn) = sum_{i=1}^{n-1} m_n m_{n-1} ... m_{n-i+1} m_1 ... m_{n-i}
    """
    n = len(word)
    for i in range(1, n):
        head = tuple(reversed(word[n - i:]))
        yield head + word[:n - i], 1


def sigma(omega: TensorElement) -> TensorElement:
    _require_r(omega, "sigma")
    if omega.length <= 1:
        return TensorElement.zero(Space("R", omega.length), omega.nvars)
    return omega.map_words(switch_word, Space("R", omega.length))


def sigma_star(omega: TensorElement) -> TensorElement:
    return omega.retag("R") + sigma(omega)


def n_minus_sigma(omega: TensorElement, n: int | Fraction) -> TensorElement:
    """(n - sigma)(omega)."""
    return omega.retag("R").scale(n) - sigma(omega)


def n_minus_sigma_star(omega: TensorElement) -> TensorElement:
    """(n - sigma_star)(omega) for omega in R^n; zero exactly on K^n."""
    return n_minus_sigma(omega, omega.length - 1)


def in_K(omega: TensorElement, pres: Presentation) -> bool:
    if omega.length < 1:
        raise ValueError("K^n is defined for n >= 1")
    return pres.is_zero(n_minus_sigma_star(omega), Space("R", omega.length))


def project(omega: TensorElement, target: Space | str) -> TensorElement:
    tag = target if isinstance(target, str) else target.tag
    if not isinstance(target, str) and target.length != omega.length:
        raise ValueError("projection cannot change the tensor length")
    tgt = Space(tag, omega.length)
    if not tgt.is_quotient_of(omega.space):
        raise ValueError(f"{tgt} is not a quotient of {omega.space}")
    return omega.retag(tag)


def mul_graded(a: TensorElement, b: TensorElement) -> TensorElement:
    """Product of a in S^p (or R^p) with b in R^q, landing in R^(p+q).

    The final letter of b stays final; a enters through its symmetric image.
    """
    if b.length == 0:
        raise ValueError("right factor must have positive length")
    return concat(a, b, "R")


def mul_symmetric(a: TensorElement, b: TensorElement) -> TensorElement:
    """Product in the symmetric algebra S."""
    return concat(a, b, "S")


def graded_kernel_dimension(pres: Presentation, source: Space, w: int,
                            fn: Callable[[TensorElement], TensorElement], target: Space) -> int:
    """Dimension of the kernel of a linear map restricted to the weight-w piece of ``source``."""
    basis = pres.quotient_basis(source, w)
    images = []
    for key in basis:
        img = pres.normal_form(fn(TensorElement(source, pres.nvars, {key: 1})), target)
        images.append(dict(img.terms))
    return len(basis) - rank(images)


def k_dimension(pres: Presentation, n: int, w: int) -> int:
    """dim of the weight-w piece of K^n = ker(n - sigma_star) on R^n."""
    return graded_kernel_dimension(pres, Space("R", n), w, n_minus_sigma_star, Space("R", n))
