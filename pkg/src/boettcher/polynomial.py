"""Univariate polynomials in a parameter ``t`` with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def _strip(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class RationalPolynomial:
    """An element of Q[t], stored as a canonical tuple of coefficients.

    ``coeffs[i]`` is the coefficient of ``t**i``; the zero polynomial is the
    empty tuple, and otherwise the last stored coefficient is nonzero.
    Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        object.__setattr__(self, "coeffs", _strip(Fraction(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("RationalPolynomial is immutable")

    @classmethod
    def coerce(cls, value) -> "RationalPolynomial":
        if isinstance(value, cls):
            return value
        if isinstance(value, (int, Fraction)):
            return cls((value,))
        if isinstance(value, str):
            return cls((Fraction(value),))
        raise TypeError(f"cannot coerce {value!r} to a polynomial in t")

    @classmethod
    def t(cls) -> "RationalPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree in t; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial((other,))
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else Fraction(0))
        return hash(self.coeffs)

    def __add__(self, other) -> "RationalPolynomial":
        try:
            other = RationalPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "RationalPolynomial":
        try:
            other = RationalPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalPolynomial":
        return RationalPolynomial.coerce(other) - self

    def __mul__(self, other) -> "RationalPolynomial":
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial(c * other for c in self.coeffs)
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "RationalPolynomial":
        if isinstance(scalar, RationalPolynomial):
            if scalar.degree != 0:
                return NotImplemented
            scalar = scalar.coeffs[0]
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return RationalPolynomial(c / scalar for c in self.coeffs)

    def __pow__(self, n: int) -> "RationalPolynomial":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result, base = RationalPolynomial((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, t0: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t0 + c
        return acc

    def common_denominator(self) -> int:
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return den

    def __repr__(self) -> str:
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        den = self.common_denominator()
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i] * den
            if c == 0:
                continue
            n = int(c)
            mag = abs(n)
            if i == 0:
                body = str(mag)
            else:
                var = "t" if i == 1 else f"t^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            sign = "-" if n < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        if den == 1:
            return text
        return f"({text})/{den}"


def mahler_expansion(poly: RationalPolynomial) -> list[Fraction]:
    """Coefficients ``d_j`` with ``poly(t) == sum(d_j * binomial(t, j))``.

    Computed by forward differences at 0: ``d_j`` is the j-th difference of
    the values ``poly(0), poly(1), ...``. The polynomial is integer-valued on
    the integers exactly when every ``d_j`` is an integer.
    """
    n = max(poly.degree, 0)
    values = [poly(i) for i in range(n + 1)]
    out = []
    for _ in range(n + 1):
        out.append(values[0])
        values = [values[i + 1] - values[i] for i in range(len(values) - 1)]
    return out


def eval_mahler(d: Sequence[Fraction], n: int) -> Fraction:
    """Evaluate ``sum(d_j * binomial(n, j))`` at a non-negative integer n."""
    return sum((dj * comb(n, j) for j, dj in enumerate(d)), Fraction(0))


def is_integer_valued(poly: RationalPolynomial) -> bool:
    return all(d.denominator == 1 for d in mahler_expansion(poly))
