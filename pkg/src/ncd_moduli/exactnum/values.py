"""Exact nonzero complex values.

A value is stored multiplicatively: a finitely supported map ``prime ->
rational exponent`` giving the magnitude, together with a rational number of
turns in [0, 1) giving the argument.  The represented number is

    (prod_p p^{e_p}) * exp(2*pi*i*arg)

which is never 0 or infinity.  The group is divisible, so rational powers and
n-th roots stay inside it, and equality is exact structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

RationalLike = Union[int, str, Fraction]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, strings like '3/2', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _factor(n: int) -> dict[int, int]:
    # sympy handles arbitrary magnitudes; fixture inputs are tiny.
    from sympy import factorint

    return {int(p): int(e) for p, e in factorint(n).items()}


def _norm_mag(items: Iterable[tuple[int, Fraction]]) -> tuple[tuple[int, Fraction], ...]:
    acc: dict[int, Fraction] = {}
    for p, e in items:
        if p < 2:
            raise ValueError(f"magnitude keys must be primes >= 2, got {p}")
        acc[p] = acc.get(p, Fraction(0)) + e
    return tuple(sorted((p, e) for p, e in acc.items() if e != 0))


@dataclass(frozen=True)
class ExactNonzeroComplex:
    """A nonzero complex value with exact multiplicative data."""

    mag: tuple[tuple[int, Fraction], ...] = ()
    arg: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "mag", _norm_mag(self.mag))
        object.__setattr__(self, "arg", as_rational(self.arg) % 1)

    # -- constructors ------------------------------------------------------

    @classmethod
    def one(cls) -> "ExactNonzeroComplex":
        return cls()

    @classmethod
    def from_rational(cls, q: RationalLike) -> "ExactNonzeroComplex":
        q = as_rational(q)
        if q == 0:
            raise ValueError("0 is not an element of the nonzero multiplicative group")
        arg = Fraction(0) if q > 0 else Fraction(1, 2)
        num, den = abs(q).numerator, abs(q).denominator
        mag = [(p, Fraction(e)) for p, e in _factor(num).items()]
        mag += [(p, Fraction(-e)) for p, e in _factor(den).items()]
        return cls(tuple(mag), arg)

    @classmethod
    def from_parts(cls, mag: Mapping[int, RationalLike], arg: RationalLike = 0) -> "ExactNonzeroComplex":
        return cls(tuple((int(p), as_rational(e)) for p, e in mag.items()), as_rational(arg))

    # -- views -------------------------------------------------------------

    @property
    def mag_dict(self) -> dict[int, Fraction]:
        return dict(self.mag)

    def is_one(self) -> bool:
        return not self.mag and self.arg == 0

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.mag)

    # -- group operations ----------------------------------------------------

    def __mul__(self, other: "ExactNonzeroComplex") -> "ExactNonzeroComplex":
        if not isinstance(other, ExactNonzeroComplex):
            return NotImplemented
        return ExactNonzeroComplex(self.mag + other.mag, self.arg + other.arg)

    def inverse(self) -> "ExactNonzeroComplex":
        return ExactNonzeroComplex(tuple((p, -e) for p, e in self.mag), -self.arg)

    def __truediv__(self, other: "ExactNonzeroComplex") -> "ExactNonzeroComplex":
        return self * other.inverse()

    def pow(self, q: RationalLike) -> "ExactNonzeroComplex":
        """Principal rational power: exponents scale, argument scales mod 1.

        All n-th roots of a value are recovered with :meth:`roots`, not here.
        """
        q = as_rational(q)
        return ExactNonzeroComplex(tuple((p, e * q) for p, e in self.mag), self.arg * q)

    def roots(self, n: int) -> frozenset["ExactNonzeroComplex"]:
        """All n-th roots; exactly n pairwise distinct values."""
        if n < 1:
            raise ValueError("root order must be >= 1")
        mag = tuple((p, e / n) for p, e in self.mag)
        return frozenset(
            ExactNonzeroComplex(mag, (self.arg + j) / n) for j in range(n)
        )

    # -- display only (never used in computations) ---------------------------

    def approx(self) -> complex:
        import cmath
        import math

        r = 1.0
        for p, e in self.mag:
            r *= math.exp(float(e) * math.log(p))
        return r * cmath.exp(2j * cmath.pi * float(self.arg))

    def __str__(self) -> str:
        if not self.mag:
            mag = "1"
        else:
            mag = "*".join(f"{p}^{e}" if e != 1 else str(p) for p, e in self.mag)
        return f"({mag}, {self.arg} turn)"


ONE = ExactNonzeroComplex.one()


def mul(a: ExactNonzeroComplex, b: ExactNonzeroComplex) -> ExactNonzeroComplex:
    return a * b


def coeff_to_json(a: ExactNonzeroComplex) -> dict:
    return {
        "primes": {str(p): str(e) for p, e in a.mag},
        "arg": str(a.arg),
    }


def coeff_from_json(obj: Mapping) -> ExactNonzeroComplex:
    primes = obj.get("primes", {})
    return ExactNonzeroComplex.from_parts(
        {int(p): Fraction(str(e)) for p, e in primes.items()},
        Fraction(str(obj.get("arg", "0"))),
    )
