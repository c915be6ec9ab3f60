"""Closed-form first L2-Betti numbers and the inequalities built on them.

Everything here is exact: values are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .presentations import Family, OrbifoldSignature

__all__ = [
    "ExtensionData",
    "KernelOrderBound",
    "format_rational",
    "parse_rational",
    "beta1_one_relator",
    "beta1_orbifold",
    "euler_char_orbifold",
    "beta1_free",
    "beta1_scaled",
    "beta1_extension",
    "vanishing_rule",
    "beta1_family",
    "kernel_order_bound",
    "hillman_check",
]

INFINITE = "infinite"


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class ExtensionData:
    """``1 -> K -> G -> Q -> 1`` with ``kernel_order`` an int or ``"infinite"``."""

    kernel_order: int | str
    quotient_beta1: Fraction

    def __post_init__(self):
        if self.kernel_order != INFINITE and (not isinstance(self.kernel_order, int)
                                              or self.kernel_order < 1):
            raise ValueError(f"kernel order must be a positive integer or 'infinite', "
                             f"got {self.kernel_order!r}")
        object.__setattr__(self, "quotient_beta1", Fraction(self.quotient_beta1))


def beta1_one_relator(a: int, n: int) -> Fraction:
    """``a - 1 - 1/n`` for an infinite group on ``a`` generators whose relator is an n-th power.

    ``n`` is the exponent from :func:`fpgroups.words.power_decompose` applied to the
    cyclically reduced relator. The value also equals minus the rational Euler
    characteristic.
    """
    if a < 2 or n < 1:
        raise ValueError(f"need a >= 2 and n >= 1, got a={a}, n={n}")
    return a - 1 - Fraction(1, n)


def euler_char_orbifold(sig: OrbifoldSignature) -> Fraction:
    return 2 - 2 * sig.genus - sum(1 - Fraction(1, m) for m in sig.multiplicities)


def beta1_orbifold(sig: OrbifoldSignature) -> Fraction:
    return 2 * sig.genus - 2 + sig.k - sum(Fraction(1, m) for m in sig.multiplicities)


def beta1_free(n: int) -> Fraction:
    if n < 0:
        raise ValueError("rank must be >= 0")
    return Fraction(max(n - 1, 0))


def beta1_scaled(beta1_quotient: Fraction, kernel_order: int) -> Fraction:
    """First L2-Betti number of an extension of the quotient by a finite kernel."""
    if kernel_order == 0:
        raise ZeroDivisionError("kernel order must be positive")
    if kernel_order < 0:
        raise ValueError("kernel order must be positive")
    return Fraction(beta1_quotient) / kernel_order


def vanishing_rule(kernel_infinite: bool | None, kernel_finitely_generated: bool | None,
                   quotient_infinite: bool | None) -> Fraction | None:
    """Infinite finitely generated normal subgroup with infinite quotient forces zero.

    Inputs are caller assertions; ``None`` means unknown. Returns 0 when the rule
    applies and ``None`` otherwise.
    """
    if kernel_infinite is True and kernel_finitely_generated is True and quotient_infinite is True:
        return Fraction(0)
    return None


def beta1_extension(ext: ExtensionData, kernel_finitely_generated: bool | None = None,
                    quotient_infinite: bool | None = None) -> Fraction | None:
    if ext.kernel_order == INFINITE:
        return vanishing_rule(True, kernel_finitely_generated, quotient_infinite)
    return beta1_scaled(ext.quotient_beta1, ext.kernel_order)


def _single_factor_beta1(f: Family) -> Fraction:
    if f.kind == "surface":
        return beta1_orbifold(OrbifoldSignature(f.param))
    if f.kind == "orbifold":
        return beta1_orbifold(f.param)
    if f.kind == "free":
        return beta1_free(f.param)
    # free abelian and finite cyclic groups
    return Fraction(0)


def beta1_family(factors: Sequence[Family]) -> Fraction:
    """First L2-Betti number of a direct product of family groups.

    Two or more infinite factors: the vanishing rule applies with one infinite
    factor as kernel. Exactly one infinite factor: the finite factors form a
    finite kernel and the value is scaled by their order. No infinite factor:
    the group is finite and the value is zero.
    """
    infinite = [f for f in factors if f.is_infinite]
    finite_order = 1
    for f in factors:
        if f.kind == "cyclic":
            finite_order *= f.param
    if len(infinite) >= 2:
        # any infinite factor is a finitely generated infinite normal subgroup
        # whose quotient contains another infinite factor
        return vanishing_rule(True, True, True)
    if not infinite:
        return Fraction(0)
    return beta1_scaled(_single_factor_beta1(infinite[0]), finite_order)


@dataclass(frozen=True)
class KernelOrderBound:
    ratio: Fraction
    chain_bound: Fraction

    @property
    def forces_trivial_kernel(self) -> bool:
        return self.ratio < 2


def kernel_order_bound(g: int, m: int, n: int) -> KernelOrderBound:
    """Kernel order estimate ``(2g-1-1/m) / (2g-1-1/n)`` and its bound ``1 + 1/((2g-1)n - 1)``.

    ``m`` is the orbifold multiplicity and ``n`` the power of the relator. The
    case ``g = n = 1`` is excluded: the denominator vanishes there.
    """
    if g < 1 or m < 1 or n < 1:
        raise ValueError(f"need g, m, n >= 1; got g={g}, m={m}, n={n}")
    if g == 1 and n == 1:
        raise ValueError("the estimate needs g >= 2, or g = 1 with n > 1")
    h = 2 * g - 1
    ratio = (h - Fraction(1, m)) / (h - Fraction(1, n))
    chain = 1 + Fraction(1, h * n - 1)
    return KernelOrderBound(ratio, chain)


def hillman_check(beta1: Fraction, def_value: int) -> tuple[bool, bool]:
    """Check ``beta1 >= def - 1``; returns ``(holds, equality)``."""
    beta1 = Fraction(beta1)
    return beta1 >= def_value - 1, beta1 == def_value - 1
