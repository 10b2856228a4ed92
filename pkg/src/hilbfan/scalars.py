"""Exact scalar arithmetic in characteristic zero or a prime characteristic.

A Scalar is a reduced rational number (char 0) or a residue modulo a prime
(char p > 0), always kept canonical: char 0 stores a gcd-reduced num/den
with den > 0, char p stores 0 <= num < p and den == 1. Plain ints coerce in
mixed arithmetic; two Scalars must agree on characteristic.
"""

from __future__ import annotations

from math import gcd, isqrt

from .errors import DomainError


def check_char(char: int) -> None:
    """Reject characteristics that are neither 0 nor a prime."""
    if char == 0:
        return
    if char < 2:
        raise DomainError(f"characteristic must be 0 or a prime, got {char}")
    if char in (2, 3):
        return
    if char % 2 == 0:
        raise DomainError(f"characteristic {char} is not prime")
    d = 3
    while d <= isqrt(char):
        if char % d == 0:
            raise DomainError(f"characteristic {char} is not prime")
        d += 2


class Scalar:
    """An immutable exact field element."""

    __slots__ = ("char", "num", "den")

    def __init__(self, num: int, den: int = 1, char: int = 0):
        if den == 0:
            raise ZeroDivisionError("scalar with zero denominator")
        if char == 0:
            if den < 0:
                num, den = -num, -den
            g = gcd(num, den)
            if g > 1:
                num //= g
                den //= g
        else:
            check_char(char)
            if den % char == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {char}")
            num = num * pow(den, -1, char) % char
            den = 1
        self.num = num
        self.den = den
        self.char = char

    @classmethod
    def zero(cls, char: int = 0) -> "Scalar":
        return cls(0, 1, char)

    @classmethod
    def one(cls, char: int = 0) -> "Scalar":
        return cls(1, 1, char)

    def _other(self, other) -> "Scalar | None":
        # Coerce an operand, enforcing equal characteristic for Scalars.
        if isinstance(other, Scalar):
            if other.char != self.char:
                raise DomainError(
                    f"characteristic mismatch: {self.char} vs {other.char}"
                )
            return other
        if isinstance(other, int):
            return Scalar(other, 1, self.char)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.num * o.den + o.num * self.den, self.den * o.den, self.char)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.num * o.den - o.num * self.den, self.den * o.den, self.char)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.num * o.num, self.den * o.den, self.char)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.num == 0:
            raise ZeroDivisionError("division by zero scalar")
        return Scalar(self.num * o.den, self.den * o.num, self.char)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den, self.char)

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        if self.char:
            return Scalar(pow(self.num, k, self.char), 1, self.char)
        return Scalar(self.num**k, self.den**k, 0)

    def inv(self) -> "Scalar":
        if self.num == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.den, self.num, self.char)

    def __bool__(self) -> bool:
        return self.num != 0

    def __eq__(self, other) -> bool:
        try:
            o = self._other(other)
        except DomainError:
            return False
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.char, self.num, self.den))

    def sign(self) -> int:
        if self.char:
            raise DomainError("sign is meaningless in positive characteristic")
        return (self.num > 0) - (self.num < 0)

    def as_int(self) -> int:
        if self.den != 1:
            raise ValueError(f"{self} is not an integer")
        return self.num

    def __repr__(self) -> str:
        if self.char:
            return f"Scalar({self.num}, char={self.char})"
        if self.den == 1:
            return f"Scalar({self.num})"
        return f"Scalar({self.num}, {self.den})"

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"{self.num}/{self.den}"
