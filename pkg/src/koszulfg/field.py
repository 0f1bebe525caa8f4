"""Exact scalar fields.

Scalars are ``flint.fmpq`` (rationals) or ``flint.nmod`` (prime fields).  Both
support the ordinary arithmetic operators, so kernel code is written once and
works over either field.
"""
from __future__ import annotations

from fractions import Fraction

import flint

from .errors import ParameterError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """A prime field F_p (``characteristic = p``) or the rationals (``0``)."""

    def __init__(self, characteristic: int = 0):
        characteristic = int(characteristic)
        if characteristic != 0 and not _is_prime(characteristic):
            raise ParameterError(f"characteristic must be 0 or a prime, got {characteristic}")
        self.characteristic = characteristic
        self.zero = self(0)
        self.one = self(1)

    def __call__(self, x):
        p = self.characteristic
        if p == 0:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, str):
                f = Fraction(x)
                return flint.fmpq(f.numerator, f.denominator)
            if isinstance(x, flint.nmod):
                raise ParameterError("cannot coerce a prime-field element into QQ")
            return flint.fmpq(x)
        if isinstance(x, flint.nmod):
            if x.modulus() != p:
                raise ParameterError("scalar from a different prime field")
            return x
        if isinstance(x, (flint.fmpq, Fraction, str)):
            f = Fraction(str(x)) if not isinstance(x, Fraction) else x
            num = flint.nmod(f.numerator, p)
            den = flint.nmod(f.denominator, p)
            if den == 0:
                raise ParameterError(f"denominator of {x} vanishes mod {p}")
            return num / den
        return flint.nmod(int(x), p)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    def to_str(self, x) -> str:
        if self.characteristic == 0:
            return str(x)
        return str(int(x))

    def to_json(self, x):
        """JSON-friendly scalar: int when integral, else "p/q"."""
        if self.characteristic:
            return int(x)
        if x.q == 1:
            return int(x.p)
        return f"{x.p}/{x.q}"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)
