"""Ring elements carried over a power of c_3.

A localized element stores value = num * c3^(-denom_exp) and keeps the pair
normalized: either the denominator exponent is zero or c3 does not divide the
numerator.  Arbitrary denominator exponents are supported so that intermediate
matrix products are representable; membership in the depth-one module is
asserted where the theory requires it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ring import (
    ColstabError,
    NotDivisibleError,
    RingElement,
    _divide_c,
    c_adic_decompose,
)


class DenomTooDeepError(ColstabError):
    pass


PIVOT = 3


class LocalizedElement:
    """num / c3^denom_exp over a ring with at least three variables."""

    __slots__ = ("num", "denom_exp", "_hash")

    def __init__(self, num: RingElement, denom_exp: int = 0):
        if num.ring.nvars < PIVOT:
            raise ValueError("localization needs at least three variables")
        if denom_exp < 0:
            raise ValueError("denominator exponent must be >= 0")
        if num.is_zero:
            denom_exp = 0
        while denom_exp > 0:
            try:
                num = _divide_c(num, PIVOT)
            except NotDivisibleError:
                break
            denom_exp -= 1
        self.num = num
        self.denom_exp = denom_exp
        self._hash = None

    @property
    def ring(self):
        return self.num.ring

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def _coerce(self, other):
        if isinstance(other, LocalizedElement):
            return other
        if isinstance(other, RingElement):
            return LocalizedElement(other, 0)
        if isinstance(other, (int, Fraction)):
            return LocalizedElement(self.ring.const(other), 0)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        e = max(self.denom_exp, other.denom_exp)
        c3 = self.ring.c(PIVOT)
        num = (
            self.num * c3 ** (e - self.denom_exp)
            + other.num * c3 ** (e - other.denom_exp)
        )
        return LocalizedElement(num, e)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedElement(-self.num, self.denom_exp)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return LocalizedElement(self.num * other.num, self.denom_exp + other.denom_exp)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.denom_exp == other.denom_exp and self.num == other.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.denom_exp))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero

    def __str__(self):
        if self.denom_exp == 0:
            return str(self.num)
        return f"{self.num} / c3^{self.denom_exp}"

    def __repr__(self):
        return f"LocalizedElement({self!s})"

    def is_unit(self) -> bool:
        return self.unit_inverse() is not None

    def unit_inverse(self) -> LocalizedElement | None:
        """Inverse in the localized ring: units are ring units times powers of c3."""
        if self.num.is_zero:
            return None
        stripped = self.num
        c3_power = 0
        while True:
            try:
                stripped = _divide_c(stripped, PIVOT)
            except NotDivisibleError:
                break
            c3_power += 1
        witness = stripped.unit_inverse()
        if witness is None:
            return None
        shift = self.denom_exp - c3_power
        if shift >= 0:
            return LocalizedElement(witness * self.ring.c(PIVOT) ** shift, 0)
        return LocalizedElement(witness, -shift)


@dataclass(frozen=True)
class LocDecomposition:
    """f = pole * c3^-1 + sum_i heads[i] * c3^i + tail * c3^depth."""

    pole: RingElement
    heads: tuple
    tail: RingElement

    def reconstruct(self) -> LocalizedElement:
        ring = self.tail.ring
        c3 = ring.c(PIVOT)
        acc = LocalizedElement(self.pole, 1)
        power = ring.one
        for head in self.heads:
            acc = acc + head * power
            power = power * c3
        return acc + self.tail * power


def loc_decompose(f: LocalizedElement, t: int) -> LocDecomposition:
    """Split f along powers of c3 from the pole up to depth t.

    The pole and the heads are free of variable 3; the tail may involve it.
    Inputs with denominator exponent >= 2 lie outside the depth-one module and
    are rejected.
    """
    if t < 0:
        raise ValueError("depth must be >= 0")
    if f.denom_exp >= 2:
        raise DenomTooDeepError(
            f"denominator exponent {f.denom_exp} exceeds the depth-one module"
        )
    ring = f.ring
    if f.denom_exp == 0:
        if t == 0:
            return LocDecomposition(ring.zero, (), f.num)
        dec = c_adic_decompose(f.num, PIVOT, t)
        return LocDecomposition(ring.zero, dec.heads, dec.tail)
    dec = c_adic_decompose(f.num, PIVOT, t + 1)
    return LocDecomposition(dec.heads[0], dec.heads[1:], dec.tail)
