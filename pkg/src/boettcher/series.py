"""Exact truncated power series over Q or Q[t].

A :class:`TruncatedSeries` of order ``N`` is known modulo ``x**(N+1)``: it
stores exactly ``N + 1`` coefficients and never reports anything beyond.
Binary operations return the smaller of the two input orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from boettcher.polynomial import RationalPolynomial

Rational = Fraction


class SeriesError(ValueError):
    """Raised when a series operation's precondition is violated."""


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: exact add/sub/mul plus division by nonzero rationals."""

    name: str
    zero: Any
    one: Any
    coerce: Callable[[Any], Any]

    def __repr__(self) -> str:
        return self.name


QQ = Ring("QQ", Fraction(0), Fraction(1), Fraction)
QQt = Ring("QQ[t]", RationalPolynomial(), RationalPolynomial((1,)), RationalPolynomial.coerce)


def ring_of(value) -> Ring:
    return QQt if isinstance(value, RationalPolynomial) else QQ


class TruncatedSeries:
    """Power series ``c_0 + c_1 x + ... + c_N x^N + O(x^(N+1))``.

    Immutable. Coefficients live in ``ring`` (QQ or QQt). Equality compares
    coefficients up to the smaller order of the two operands.
    """

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs: Iterable, ring: Ring = QQ, order: int | None = None):
        c = tuple(ring.coerce(x) for x in coeffs)
        if order is not None:
            if order < 0:
                raise SeriesError("order must be non-negative")
            if len(c) > order + 1:
                c = c[: order + 1]
            else:
                c = c + (ring.zero,) * (order + 1 - len(c))
        if not c:
            raise SeriesError("a series needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, coeffs: list, ring: Ring) -> "TruncatedSeries":
        # Skips coercion; callers guarantee coefficients already live in ring.
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        object.__setattr__(obj, "ring", ring)
        return obj

    @classmethod
    def x(cls, order: int, ring: Ring = QQ) -> "TruncatedSeries":
        if order < 1:
            raise SeriesError("the series x needs order >= 1")
        return cls((ring.zero, ring.one), ring, order)

    @classmethod
    def constant(cls, value, order: int, ring: Ring = QQ) -> "TruncatedSeries":
        return cls((value,), ring, order)

    @classmethod
    def monomial(cls, coeff, exponent: int, order: int, ring: Ring = QQ) -> "TruncatedSeries":
        c = [ring.zero] * (order + 1)
        if exponent <= order:
            c[exponent] = ring.coerce(coeff)
        return cls._raw(c, ring)

    # -- basic accessors ------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int):
        """Exact coefficient of ``x**k``; raises beyond the truncation order."""
        if k < 0:
            raise SeriesError(f"negative index {k}")
        if k > self.order:
            raise SeriesError(f"unknown coefficient: x^{k} is beyond order {self.order}")
        return self.coeffs[k]

    __getitem__ = coeff

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all known are zero."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def truncate(self, k: int) -> "TruncatedSeries":
        if k < 0 or k > self.order:
            raise SeriesError(f"cannot truncate order {self.order} series to order {k}")
        return TruncatedSeries._raw(self.coeffs[: k + 1], self.ring)

    def extend(self, order: int) -> "TruncatedSeries":
        """Treat the known part as an exact polynomial and pad with zeros.

        Only valid when the caller knows the missing tail cannot influence
        the coefficients it will read.
        """
        if order < self.order:
            return self.truncate(order)
        return TruncatedSeries._raw(
            list(self.coeffs) + [self.ring.zero] * (order - self.order), self.ring
        )

    def map(self, fn: Callable, ring: Ring = QQ) -> "TruncatedSeries":
        return TruncatedSeries((fn(c) for c in self.coeffs), ring)

    def specialize(self, t0) -> "TruncatedSeries":
        """Evaluate every Q[t] coefficient at ``t = t0``."""
        if self.ring is not QQt:
            raise SeriesError("only series over Q[t] can be specialized")
        return self.map(lambda c: c(t0), QQ)

    # -- equality -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1))

    __hash__ = None  # equality is order-relative, so not hashable

    def __repr__(self) -> str:
        return f"TruncatedSeries({[str(c) for c in self.coeffs]}, {self.ring}, order={self.order})"

    def __str__(self) -> str:
        return format_series(self)

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self.ring is not other.ring:
            raise SeriesError(f"coefficient rings differ: {self.ring} vs {other.ring}")

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        return TruncatedSeries.constant(other, self.order, self.ring)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._lift(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        return TruncatedSeries._raw([a[i] + b[i] for i in range(n + 1)], self.ring)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries._raw([-c for c in self.coeffs], self.ring)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return _cauchy(self.coeffs, other.coeffs, min(self.order, other.order), self.ring)
        s = self.ring.coerce(other) if self.ring is QQ else other
        return TruncatedSeries._raw([c * s for c in self.coeffs], self.ring)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "TruncatedSeries":
        if isinstance(scalar, TruncatedSeries):
            raise SeriesError("series division is not supported; divide by a scalar")
        return TruncatedSeries._raw([c / scalar for c in self.coeffs], self.ring)

    def __pow__(self, m: int) -> "TruncatedSeries":
        return pow_int(self, m)

    def __call__(self, g: "TruncatedSeries") -> "TruncatedSeries":
        return compose(self, g)


def _cauchy(a: Sequence, b: Sequence, n: int, ring: Ring) -> TruncatedSeries:
    zero = ring.zero
    out = [zero] * (n + 1)
    # Skip leading zeros of both factors; common for x^k-shifted series.
    ia = next((i for i in range(n + 1) if a[i] != 0), n + 1)
    ib = next((i for i in range(n + 1) if b[i] != 0), n + 1)
    for i in range(ia, n + 1 - ib):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(ib, n + 1 - i):
            bj = b[j]
            if bj != 0:
                out[i + j] += ai * bj
    return TruncatedSeries._raw(out, ring)


# -- module-level operations ----------------------------------------------------


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f + g


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f * g


def coeff(f: TruncatedSeries, k: int):
    return f.coeff(k)


def truncate(f: TruncatedSeries, k: int) -> TruncatedSeries:
    return f.truncate(k)


def pow_int(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """``f**m`` by binary exponentiation; order is preserved."""
    if m < 0:
        raise SeriesError("negative powers are not supported")
    result = TruncatedSeries.constant(f.ring.one, f.order, f.ring)
    base = f
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return result


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g(x))`` truncated to ``min(order(f), order(g))``.

    Horner evaluation in the truncated ring. Runs of zero coefficients in f
    are skipped with a single power of g, so sparse polynomials such as
    germs ``x^m (1 + c x)`` cost a handful of multiplications.
    """
    f._check(g)
    if g.coeffs[0] != 0:
        raise SeriesError("composition requires g(0)=0")
    n = min(f.order, g.order)
    g = g.truncate(n)
    support = [i for i in range(n + 1) if f.coeffs[i] != 0]
    ring = f.ring
    if not support:
        return TruncatedSeries.constant(ring.zero, n, ring)
    top = support[-1]
    acc = TruncatedSeries.constant(f.coeffs[top], n, ring)
    prev = top
    powers: dict[int, TruncatedSeries] = {}
    for i in reversed(support[:-1]):
        gap = prev - i
        step = powers.get(gap)
        if step is None:
            step = powers[gap] = g if gap == 1 else pow_int(g, gap)
        acc = acc * step + f.coeffs[i]
        prev = i
    if prev:
        acc = acc * pow_int(g, prev)
    return acc


def substitute_power(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """``f(x**m)``, of order ``m * order(f)``."""
    if m < 1:
        raise SeriesError("substitute_power needs m >= 1")
    out = [f.ring.zero] * (m * f.order + 1)
    for i, c in enumerate(f.coeffs):
        out[m * i] = c
    return TruncatedSeries._raw(out, f.ring)


def _binomial_series(alpha: Fraction, n: int, ring: Ring) -> TruncatedSeries:
    # sum_j binomial(alpha, j) u^j, coefficients built by the ratio recurrence.
    c = [Fraction(1)]
    for j in range(1, n + 1):
        c.append(c[-1] * (alpha - (j - 1)) / j)
    return TruncatedSeries(c, ring)


def nth_root(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """The unique ``g`` with ``g(0) = 1`` and ``g**m == f``.

    Uses the binomial series ``(1 + u)**(1/m)`` with ``u = f - 1``,
    evaluated by composition.
    """
    if m < 1:
        raise SeriesError("nth_root needs m >= 1")
    if f.coeffs[0] != f.ring.one:
        raise SeriesError("nth_root requires constant term 1")
    if m == 1:
        return f
    u = f - f.ring.one
    return compose(_binomial_series(Fraction(1, m), f.order, f.ring), u)


def reversion(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of a series ``x + c_2 x^2 + ...``.

    Writing ``g = x v(x)``, the coefficient of ``x^n`` in ``f(g)`` is
    ``v_{n-1} + sum_{j>=2} c_j [x^(n-j)] v^j``, which is triangular in the
    unknowns; each new coefficient is solved from the powers ``v^j`` built up
    so far.
    """
    ring = f.ring
    if f.order < 1 or f.coeffs[0] != 0 or f.coeffs[1] != ring.one:
        raise SeriesError("reversion requires tangent-to-identity series")
    n_max = f.order
    c = f.coeffs
    v = [ring.one]
    # powers[j][t] = [x^t] v^j, grown lazily; powers[1] aliases v.
    powers: list[list] = [[ring.one], v]
    for n in range(2, n_max + 1):
        total = ring.zero
        for j in range(2, n + 1):
            t = n - j
            if j >= len(powers):
                powers.append([ring.one])
            row = powers[j]
            prev = powers[j - 1]
            while len(row) <= t:
                s = len(row)
                acc = ring.zero
                for i in range(s + 1):
                    vi = v[i]
                    if vi != 0 and prev[s - i] != 0:
                        acc += vi * prev[s - i]
                row.append(acc)
            if c[j] != 0:
                total += c[j] * row[t]
        v.append(-total)
    return TruncatedSeries._raw([ring.zero] + v, ring)


# -- formatting -------------------------------------------------------------------


def format_series(f: TruncatedSeries, var: str = "x") -> str:
    """Human-readable form, e.g. ``x - x^2 + 7/2*x^3 + O(x^4)``."""
    terms = []
    for i, c in enumerate(f.coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if isinstance(c, RationalPolynomial):
            sign, body = "+", (f"({c})*{mono}" if mono else f"({c})")
        else:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
        terms.append((sign, body))
    tail = f"O({var}^{f.order + 1})"
    if not terms:
        return tail
    text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return f"{text} + {tail}"
