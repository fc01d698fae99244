"""Böttcher coordinates of superattracting germs ``x^m (1 + b_1 x + ...)``.

The coordinate ``f`` is the unique series ``x + O(x^2)`` with
``phi(f(x)) == f(x^m)``; its inverse ``F`` satisfies ``F(phi(x)) == F(x)^m``.
Three independent constructions are provided:

* :func:`bottcher_coordinate` solves for one coefficient at a time from the
  defining equation (the new coefficient enters linearly with factor ``m``);
* :func:`inverse_bottcher_direct` solves ``F(phi(x)) == F(x)^m`` directly;
* :func:`bottcher_limit_oracle` takes ``m^n``-th roots of the iterates of
  ``phi``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from boettcher.polynomial import RationalPolynomial
from boettcher.series import (
    QQ,
    QQt,
    Ring,
    SeriesError,
    TruncatedSeries,
    compose,
    nth_root,
    pow_int,
    reversion,
    substitute_power,
)


class GermError(ValueError):
    pass


class CoefficientGrowthError(RuntimeError):
    """A coefficient exceeded the configured digit cap."""


class VerificationError(AssertionError):
    """The defining equation failed on a computed coordinate (an internal bug)."""


@dataclass(frozen=True)
class GermSpec:
    """The germ ``phi(x) = x^m * sum(b[k] x^k)`` with ``b[0] == 1``."""

    m: int
    b: tuple
    ring: Ring = QQ

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise GermError(f"ramification degree must be an integer >= 2, got {self.m!r}")
        b = tuple(self.ring.coerce(c) for c in self.b) or (self.ring.one,)
        if b[0] != self.ring.one:
            raise GermError("germ must be normalized with b_0 = 1")
        while len(b) > 1 and b[-1] == 0:
            b = b[:-1]
        object.__setattr__(self, "b", b)

    @classmethod
    def family(cls, m: int, c=None) -> "GermSpec":
        """``x^m + c x^(m+1)``; ``c`` defaults to ``m``."""
        return cls(m, (1, m if c is None else c))

    @classmethod
    def parametric_family(cls, m: int) -> "GermSpec":
        """``x^m + m t x^(m+1)`` over Q[t]."""
        return cls(m, (RationalPolynomial((1,)), RationalPolynomial((0, m))), QQt)

    @classmethod
    def from_series(cls, phi: TruncatedSeries, m: int | None = None) -> "GermSpec":
        """Read ``m`` and the ``b_k`` off a series known to some order."""
        v = phi.valuation()
        if v is None:
            raise GermError("series has no nonzero coefficient")
        if m is None:
            m = v
        if v != m:
            raise GermError(f"series starts at x^{v}, expected x^{m}")
        return cls(m, phi.coeffs[m:], phi.ring)

    @property
    def degree(self) -> int:
        return self.m + len(self.b) - 1

    def unit(self, order: int) -> TruncatedSeries:
        """``sum(b_k x^k)`` to the given order."""
        return TruncatedSeries(self.b, self.ring, order)

    def series(self, order: int) -> TruncatedSeries:
        """``phi`` itself as a series of the given order."""
        c = [self.ring.zero] * self.m + list(self.b)
        return TruncatedSeries(c, self.ring, order)

    def specialize(self, t0) -> "GermSpec":
        if self.ring is not QQt:
            return self
        return GermSpec(self.m, tuple(c(t0) for c in self.b), QQ)

    def __str__(self) -> str:
        from boettcher.series import format_series

        text = format_series(self.series(self.degree))
        return text.rsplit(" + O(", 1)[0]


@dataclass(frozen=True)
class BottcherResult:
    f: TruncatedSeries
    f_inv: TruncatedSeries | None
    germ: GermSpec
    verified_order: int


class Normalization(str, enum.Enum):
    RAW = "raw"
    OVER_K_FACTORIAL = "over_k_factorial"
    OVER_MK_K_FACTORIAL = "over_mk_k_factorial"


@dataclass(frozen=True)
class NormalizedCoefficients:
    """``f = x * sum(a_k x^k / scale_k)`` with ``scale_k`` fixed by ``mode``."""

    mode: Normalization
    a: tuple
    integral: tuple

    @property
    def all_integral(self) -> bool:
        return all(self.integral)

    def first_nonintegral(self) -> int | None:
        for k, ok in enumerate(self.integral):
            if not ok:
                return k
        return None


# -- incremental powers ------------------------------------------------------------


class _OnlinePower:
    """Coefficients of ``u**alpha`` (``u_0 == 1``) grown one index at a time.

    Uses the power recurrence ``n h_n = sum_{i=1..n} ((alpha+1) i - n) u_i h_{n-i}``.
    The ``u_n`` term contributes exactly ``alpha * u_n`` to ``h_n``, which lets
    a solver read ``h_n`` before ``u_n`` is known and patch it afterwards.
    """

    __slots__ = ("alpha", "h")

    def __init__(self, alpha: int, one):
        self.alpha = alpha
        self.h = [one]

    def _partial(self, u: Sequence, n: int, upto: int):
        a1 = self.alpha + 1
        h = self.h
        acc = None
        for i in range(1, upto + 1):
            ui = u[i]
            if ui == 0:
                continue
            term = ui * (a1 * i - n) * h[n - i]
            acc = term if acc is None else acc + term
        if acc is None:
            return h[0] * 0
        return acc / n

    def extend_to(self, u: Sequence, idx: int) -> None:
        """Fill ``h`` through ``idx``; needs ``u`` known through ``idx``."""
        while len(self.h) <= idx:
            n = len(self.h)
            self.h.append(self._partial(u, n, n))

    def provisional(self, u: Sequence):
        """``h_n`` for ``n = len(h)`` with the (unknown) ``u_n`` taken as zero."""
        n = len(self.h)
        return self._partial(u, n, n - 1)

    def commit(self, provisional, u_n) -> None:
        self.h.append(provisional + u_n * self.alpha)


def _digit_guard(value, cap: int | None, index: int) -> None:
    if cap is None:
        return
    limit = 10**cap
    parts = value.coeffs if isinstance(value, RationalPolynomial) else (value,)
    for c in parts:
        if abs(c.numerator) >= limit or c.denominator >= limit:
            raise CoefficientGrowthError(
                f"coefficient of x^{index} exceeds {cap} decimal digits; "
                "lower the order or raise the cap"
            )


# -- the three constructions -----------------------------------------------------


def solve_coordinate(germ: GermSpec, order: int, max_coeff_digits: int | None = None) -> TruncatedSeries:
    """The Böttcher coordinate ``f`` to the given order, without verification.

    With ``f = x u(x)`` the coefficient ``u_n`` (of ``x^(n+1)``) is the value
    that makes ``phi(f)`` and ``f(x^m)`` agree at ``x^(m+n)``::

        u_n = (f(x^m)[x^(m+n)] - phi(f_trunc)[x^(m+n)]) / m

    where ``f_trunc`` omits ``u_n`` and everything after it.
    """
    if order < 1:
        raise SeriesError("order must be at least 1")
    ring, m, b = germ.ring, germ.m, germ.b
    zero, one = ring.zero, ring.one
    u = [one]
    # phi(f) = sum_i b_i x^(m+i) u^(m+i); coefficient x^(m+n) reads (u^(m+i))_(n-i).
    powers = {i: _OnlinePower(m + i, one) for i, bi in enumerate(b) if bi != 0 and i < order}
    lead = powers[0]
    for n in range(1, order):
        s = zero
        for i, P in powers.items():
            if i == 0 or i > n:
                continue
            P.extend_to(u, n - i)
            s = s + b[i] * P.h[n - i]
        prov = lead.provisional(u)
        s = s + prov
        rhs = u[n // m] if n % m == 0 else zero
        un = (rhs - s) / m
        _digit_guard(un, max_coeff_digits, n + 1)
        u.append(un)
        lead.commit(prov, un)
    return TruncatedSeries._raw([zero] + u, ring)


def verify_coordinate(germ: GermSpec, f: TruncatedSeries) -> int:
    """Check ``phi(f) == f(x^m)`` coefficientwise; return the order checked.

    The known part of ``f`` determines both sides through ``x^(m+N-1)``
    (the unknown tail starts at ``x^(N+1)`` and is pushed up by ``m - 1``).
    """
    n, m = f.order, germ.m
    top = m + n - 1
    fe = f.extend(top)
    lhs = compose(germ.series(top), fe)
    rhs = substitute_power(f, m)
    for k in range(top + 1):
        if lhs.coeffs[k] != rhs.coeffs[k]:
            raise VerificationError(
                f"defining equation fails at x^{k}: {lhs.coeffs[k]} != {rhs.coeffs[k]}"
            )
    return top


def bottcher_coordinate(
    germ: GermSpec,
    order: int,
    *,
    with_inverse: bool = True,
    max_coeff_digits: int | None = None,
) -> BottcherResult:
    """Böttcher coordinate of ``germ`` through ``x^order``, self-verified.

    >>> bottcher_coordinate(GermSpec.family(2), 5).f.coeffs[1:]
    (Fraction(1, 1), Fraction(-1, 1), Fraction(2, 1), Fraction(-7, 1), Fraction(26, 1))
    """
    f = solve_coordinate(germ, order, max_coeff_digits)
    checked = verify_coordinate(germ, f)
    f_inv = reversion(f) if with_inverse else None
    return BottcherResult(f, f_inv, germ, checked)


def inverse_bottcher_direct(germ: GermSpec, order: int) -> TruncatedSeries:
    """The inverse coordinate ``F`` from ``F(phi(x)) == F(x)^m``, no reversion.

    Writing ``phi = x^m nu`` and ``F = x G`` the equation becomes
    ``nu(x) G(x^m nu(x)) == G(x)^m``. The left side at ``x^k`` only involves
    ``g_l`` with ``l <= k/m``; the right side is ``m g_k`` plus older terms.
    """
    if order < 1:
        raise SeriesError("order must be at least 1")
    ring, m = germ.ring, germ.m
    zero, one = ring.zero, ring.one
    top = order - 1
    nu = germ.unit(top)
    nu_pows = [nu]
    for _ in range(top // m):
        nu_pows.append(nu_pows[-1] * nu)
    g = [one]
    gm = _OnlinePower(m, one)
    for k in range(1, top + 1):
        left = zero
        for ell in range(k // m + 1):
            if g[ell] != 0:
                left = left + g[ell] * nu_pows[ell].coeffs[k - m * ell]
        prov = gm.provisional(g)
        gk = (left - prov) / m
        g.append(gk)
        gm.commit(prov, gk)
    return TruncatedSeries._raw([zero] + g, ring)


def _iterate_root(germ: GermSpec, order: int, n_iters: int) -> TruncatedSeries:
    # phi^n(x) = x^M u_n(x) with M = m^n; u_{n+1} = u_n^m * nu(x^M u_n).
    ring, m = germ.ring, germ.m
    top = order - 1
    nu = germ.unit(top)
    u = TruncatedSeries.constant(ring.one, top, ring)
    big = 1
    for _ in range(n_iters):
        if big <= top:
            y = TruncatedSeries._raw([ring.zero] * big + list(u.coeffs[: top + 1 - big]), ring)
            inner = compose(nu, y)
        else:
            inner = TruncatedSeries.constant(ring.one, top, ring)
        u = pow_int(u, m) * inner
        big *= m
    root = nth_root(u, big)
    return TruncatedSeries._raw([ring.zero] + list(root.coeffs), ring)


def bottcher_limit_inverse(germ: GermSpec, order: int, n_iters: int) -> TruncatedSeries:
    """``(phi^n(x))^(1/m^n)`` truncated to ``order``.

    The iterates satisfy ``phi^n = f(F(x)^(m^n))``, so this root equals the
    inverse coordinate ``F`` through ``x^(m^n)``.
    """
    if order < 1:
        raise SeriesError("order must be at least 1")
    if germ.m**n_iters <= order:
        raise SeriesError("insufficient iterations for requested order")
    return _iterate_root(germ, order, n_iters)


def bottcher_limit_oracle(
    germ: GermSpec, order: int, n_iters: int, *, confirm: bool = True
) -> TruncatedSeries:
    """Böttcher coordinate via the iterate-root limit, then reversion.

    With ``confirm`` the limit is recomputed with one more iteration and the
    two truncations must coincide.
    """
    limit = bottcher_limit_inverse(germ, order, n_iters)
    if confirm:
        again = _iterate_root(germ, order, n_iters + 1)
        if again != limit:
            raise VerificationError("iterate-root limit did not stabilize")
    return reversion(limit)


def germ_from_coordinate(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """The germ ``f(f^-1(x)^m)`` whose Böttcher coordinate is ``f``.

    Returned to order ``m + N - 1`` for ``f`` of order ``N``: neither the
    unknown tail of ``f`` nor of its inverse reaches that far.
    """
    if m < 2:
        raise GermError("m must be at least 2")
    top = m + f.order - 1
    g = reversion(f)
    return compose(f.extend(top), pow_int(g.extend(top), m))


# -- normalizations --------------------------------------------------------------


def _scales(mode: Normalization, m: int, count: int) -> list[int]:
    mode = Normalization(mode)
    out, fact = [], 1
    for k in range(count):
        if k:
            fact *= k
        if mode is Normalization.RAW:
            out.append(1)
        elif mode is Normalization.OVER_K_FACTORIAL:
            out.append(fact)
        else:
            out.append(m**k * fact)
    return out


def normalize_series(f: TruncatedSeries, mode, m: int = 1) -> NormalizedCoefficients:
    """``a_k = f[x^(k+1)] * scale_k`` for ``k = 0 .. order-1``."""
    if f.ring is not QQ:
        raise SeriesError("normalization is defined for rational coefficients")
    mode = Normalization(mode)
    scales = _scales(mode, m, f.order)
    a = tuple(f.coeffs[k + 1] * s for k, s in enumerate(scales))
    return NormalizedCoefficients(mode, a, tuple(x.denominator == 1 for x in a))


def normalize(result: BottcherResult, mode, *, inverse: bool = False) -> NormalizedCoefficients:
    series = result.f_inv if inverse else result.f
    if series is None:
        raise SeriesError("result was computed without its inverse")
    return normalize_series(series, mode, result.germ.m)


def denormalize(a: Sequence, mode, m: int = 1) -> TruncatedSeries:
    """Inverse of :func:`normalize_series`: the series ``x * sum(a_k x^k / scale_k)``."""
    scales = _scales(Normalization(mode), m, len(a))
    return TruncatedSeries([0] + [Fraction(x) / s for x, s in zip(a, scales)], QQ)


# -- decomposition of the k!-normalized recursion for x^q + c x^(q+1) --------------


def ak_decomposition(p: int, r_offset: int, k: int, prior_a: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    """Split ``a_k`` for the germ ``x^q + p^(2+r) x^(q+1)``, ``q = p^2``.

    With ``S(x) = sum_{l<k} a_l x^l / l!`` and ``f = x * sum a_l x^l / l!``,
    comparing ``x^(q+k)`` in ``phi(f) == f(x^q)`` gives ``a_k = A - B - C``:

    * ``A = (k!/q) a_(k/q) / (k/q)!``  (zero unless ``q | k``),
    * ``B = (k!/q) [x^k] S^q``,
    * ``C = (c/q) k! [x^(k-1)] S^(q+1)`` with ``c = p^(2+r)``.

    ``prior_a`` must hold the exact ``a_0 .. a_(k-1)``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if len(prior_a) < k:
        raise ValueError(f"need a_0..a_{k - 1}, got {len(prior_a)} values")
    q = p * p
    c = p ** (2 + r_offset)
    kf = factorial(k)
    S = TruncatedSeries([Fraction(prior_a[ell]) / factorial(ell) for ell in range(k)], QQ, k)
    if k % q == 0:
        j = k // q
        A = Fraction(kf, q) * Fraction(prior_a[j]) / factorial(j)
    else:
        A = Fraction(0)
    B = Fraction(kf, q) * pow_int(S, q).coeffs[k]
    C = Fraction(c, q) * kf * pow_int(S.truncate(k - 1), q + 1).coeffs[k - 1]
    return A, B, C
