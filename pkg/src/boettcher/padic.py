"""p-adic valuations, digit sums, and the multinomial valuation formulas.

The multinomial coefficients studied here come from expanding the
k!-normalized Böttcher recursion for ``x^q + c x^(q+1)``. Writing
``S(x) = sum a_n x^n / n!``, the coefficient of ``a^e = prod a_n^(e_n)``

* in ``(k!/q) [x^k] S^q`` is ``(k!/q) * q!/prod(e_n!) * prod(1/n!^(e_n))``,
  over vectors with ``sum e_n = q`` and ``sum n e_n = k``;
* in ``k! * q!/prod(e_n!) * prod(1/n!^(e_n))`` over vectors with
  ``sum e_n = q + 1`` and ``sum n e_n = k - q - 1`` (the C-type term).

Each valuation is computed by exact arithmetic and by a closed form built
from base-p digit sums; the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Sequence


class NotPrimeError(ValueError):
    pass


class EnumerationBudgetExceeded(RuntimeError):
    pass


class FormulaMismatch(AssertionError):
    """Closed-form and direct valuations disagree; carries both values."""

    def __init__(self, what: str, direct, closed):
        super().__init__(f"{what}: direct {direct} != closed form {closed}")
        self.direct = direct
        self.closed = closed


class _Infinity:
    """Valuation of zero. Compares above every integer; absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("boettcher.INF")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = _Infinity()

DEFAULT_NODE_BUDGET = 10**7


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0 or p % 3 == 0:
        return False
    i = 5
    while i * i <= p:
        if p % i == 0 or p % (i + 2) == 0:
            return False
        i += 6
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise NotPrimeError(f"{p!r} is not a prime")


def _ord_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ord_p(x, p: int):
    """Exponent of ``p`` in a nonzero rational; ``INF`` for zero."""
    _require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return _ord_int(x.numerator, p) - _ord_int(x.denominator, p)


def is_p_integral(x, p: int) -> bool:
    return Fraction(x).denominator % p != 0


def base_p_digits(n: int, p: int) -> list[int]:
    """Least-significant digit first; ``[]`` for zero."""
    if n < 0:
        raise ValueError("digits of a negative number")
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of ``n``."""
    return sum(base_p_digits(n, p))


def legendre_factorial_ord(n: int, p: int) -> int:
    """``ord_p(n!)`` from Legendre's formula ``(n - S_p(n)) / (p - 1)``."""
    if n < 0:
        raise ValueError("factorial of a negative number")
    _require_prime(p)
    return (n - digit_sum(n, p)) // (p - 1)


def prime_to_p_part(n: int, p: int) -> int:
    """``n`` with every factor of ``p`` removed, sign kept."""
    if n == 0:
        raise ValueError("the prime-to-p part of 0 is undefined")
    _require_prime(p)
    while n % p == 0:
        n //= p
    return n


@dataclass(frozen=True)
class TpFactorialResidue:
    r: int
    p: int
    residue: int
    status: str  # "verified" or "formula-only"
    direct: int | None = None


def tp_factorial_mod_p(r: int, p: int, cap: int = 10**6) -> TpFactorialResidue:
    """Residue of the prime-to-p part of ``(p^r)!`` modulo ``p``.

    The closed form is ``(-1)^r mod p``. When ``p^r <= cap`` the residue is
    also computed as the product of ``T_p(n) mod p`` over ``1 <= n <= p^r``
    and the two must agree.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    _require_prime(p)
    closed = (-1) ** r % p
    n = p**r
    if n > cap:
        return TpFactorialResidue(r, p, closed, "formula-only")
    acc = 1
    for i in range(2, n + 1):
        acc = acc * (prime_to_p_part(i, p) % p) % p
    if acc != closed:
        raise FormulaMismatch(f"T_{p}(({p}^{r})!) mod {p}", acc, closed)
    return TpFactorialResidue(r, p, closed, "verified", acc)


# -- exponent vectors --------------------------------------------------------------


@dataclass(frozen=True)
class ExponentVector:
    """Non-negative exponents ``e[0], e[1], ...`` of a monomial ``prod a_n^(e_n)``."""

    e: tuple

    def __post_init__(self):
        e = tuple(int(x) for x in self.e)
        if any(x < 0 for x in e):
            raise ValueError("exponents must be non-negative")
        while e and e[-1] == 0:
            e = e[:-1]
        object.__setattr__(self, "e", e)

    @classmethod
    def from_support(cls, support: dict) -> "ExponentVector":
        size = max(support, default=-1) + 1
        e = [0] * size
        for n, v in support.items():
            e[n] = v
        return cls(tuple(e))

    @property
    def sigma(self) -> int:
        return sum(self.e)

    @property
    def nu(self) -> int:
        return sum(n * x for n, x in enumerate(self.e))

    def get(self, n: int) -> int:
        return self.e[n] if n < len(self.e) else 0

    @property
    def support(self) -> dict:
        return {n: x for n, x in enumerate(self.e) if x}

    def monomial(self, var: str = "a") -> str:
        parts = []
        for n, x in self.support.items():
            parts.append(f"{var}_{n}" if x == 1 else f"{var}_{n}^{x}")
        return "*".join(parts) or "1"

    def __str__(self) -> str:
        return self.monomial()


def enumerate_exponent_vectors(
    total: int,
    weight: int,
    max_index: int,
    budget: int = DEFAULT_NODE_BUDGET,
) -> Iterator[ExponentVector]:
    """All vectors with ``sigma == total``, ``nu == weight`` and support in ``[0, max_index]``.

    Equivalently, partitions of ``weight`` into at most ``total`` parts of
    size at most ``max_index``, with ``e_0`` absorbing the remaining slots.
    Depth-first; raises once more than ``budget`` nodes are visited.
    """
    if total < 0 or weight < 0:
        return
    nodes = 0
    counts: dict[int, int] = {}

    def walk(remaining: int, slots: int, largest: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationBudgetExceeded(
                f"exponent-vector enumeration exceeded {budget} nodes"
            )
        if remaining == 0:
            support = dict(counts)
            used = sum(support.values())
            if total - used:
                support[0] = total - used
            yield ExponentVector.from_support(support)
            return
        if slots == 0:
            return
        for part in range(min(largest, remaining), 0, -1):
            # the remaining weight must fit in the remaining slots
            if part * slots < remaining:
                break
            counts[part] = counts.get(part, 0) + 1
            yield from walk(remaining - part, slots - 1, part)
            counts[part] -= 1
            if not counts[part]:
                del counts[part]

    if weight == 0:
        yield ExponentVector.from_support({0: total} if total else {})
        return
    if max_index < 1:
        return
    yield from walk(weight, total, max_index)


def multinomial(top: int, parts: Iterable[int]) -> Fraction:
    """``top! / prod(part!)`` as an exact rational (parts need not sum to top)."""
    den = 1
    for x in parts:
        den *= factorial(x)
    return Fraction(factorial(top), den)


def _inv_factorial_power(e: ExponentVector) -> Fraction:
    den = 1
    for n, x in e.support.items():
        den *= factorial(n) ** x
    return Fraction(1, den)


# -- B-type coefficients -------------------------------------------------------------


def bk_coefficient(e: ExponentVector, k: int, q: int) -> Fraction:
    """``(k!/q) * q!/prod(e_n!) * prod(1/n!^(e_n))``."""
    return Fraction(factorial(k), q) * multinomial(q, e.e) * _inv_factorial_power(e)


def _check_bk(e: ExponentVector, k: int, q: int) -> None:
    if e.sigma != q or e.nu != k:
        raise ValueError(
            f"exponent vector {e.e} needs sum e_n = {q} and sum n*e_n = {k}; "
            f"has {e.sigma} and {e.nu}"
        )
    if len(e.e) > k:
        raise ValueError(f"exponent vector uses a_n with n >= k = {k}")


def bk_valuation_closed(e: ExponentVector, k: int, q: int, p: int) -> Fraction:
    """Digit-sum formula for ``ord_p`` of :func:`bk_coefficient`, any ``q`` and ``k``.

    ``(p-1) ord = -S(k) - (p-1) ord_p(q) - S(q) + sum(S(e_n) + e_n S(n))``.
    """
    S = lambda n: digit_sum(n, p)  # noqa: E731
    total = -S(k) - (p - 1) * ord_p(q, p) - S(q)
    total += sum(S(x) + x * S(n) for n, x in e.support.items())
    return Fraction(total, p - 1)


def bk_valuation_prime_square(e: ExponentVector, k: int, p: int) -> Fraction:
    """Specialization for ``q = p^2`` and ``k`` a power of ``p``.

    ``(p-1) ord = -2p + sum(e_n S(n) + S(e_n))``.
    """
    total = -2 * p + sum(x * digit_sum(n, p) + digit_sum(x, p) for n, x in e.support.items())
    return Fraction(total, p - 1)


def is_power_of(k: int, p: int) -> bool:
    if k < 1:
        return False
    while k % p == 0:
        k //= p
    return k == 1


def bk_valuation_paths(e: ExponentVector, k: int, q: int, p: int) -> tuple:
    """``(direct, closed)`` valuations of the B-type coefficient."""
    _require_prime(p)
    _check_bk(e, k, q)
    return ord_p(bk_coefficient(e, k, q), p), bk_valuation_closed(e, k, q, p)


def bk_coefficient_valuation(e: ExponentVector, k: int, q: int, p: int) -> Fraction:
    """``ord_p`` of the B-type coefficient, cross-checked against the closed form.

    When ``q == p^2`` and ``k`` is a power of ``p`` the specialized formula is
    checked as well.
    """
    direct, closed = bk_valuation_paths(e, k, q, p)
    if direct != closed:
        raise FormulaMismatch(f"B_{k} valuation at {e.monomial()}", direct, closed)
    if q == p * p and is_power_of(k, p):
        special = bk_valuation_prime_square(e, k, p)
        if special != direct:
            raise FormulaMismatch(f"B_{k} prime-square valuation at {e.monomial()}", direct, special)
    return Fraction(direct)


def bk_mod_p_monomials(
    k: int, p: int, budget: int = DEFAULT_NODE_BUDGET
) -> list[ExponentVector]:
    """Monomials of the B-type sum for ``q = p^2`` whose coefficient is a p-adic unit.

    These are exactly the terms that survive reduction mod ``p``. Vectors
    come back in enumeration order (largest part first).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    q = p * p
    out = []
    for e in enumerate_exponent_vectors(q, k, k - 1, budget):
        if bk_coefficient_valuation(e, k, q, p) == 0:
            out.append(e)
    return out


def bk_negative_monomials(k: int, p: int, budget: int = DEFAULT_NODE_BUDGET) -> list[ExponentVector]:
    """B-type monomials whose coefficient is not p-integral (reduction mod p undefined)."""
    q = p * p
    return [
        e
        for e in enumerate_exponent_vectors(q, k, k - 1, budget)
        if bk_coefficient_valuation(e, k, q, p) < 0
    ]


# -- C-type coefficients -------------------------------------------------------------


def ck_coefficient(e: ExponentVector, k: int, q: int) -> Fraction:
    """``k! * q!/prod(e_n!) * prod(1/n!^(e_n))`` with ``sum e_n == q + 1``."""
    return factorial(k) * multinomial(q, e.e) * _inv_factorial_power(e)


def _check_ck(e: ExponentVector, k: int, q: int) -> None:
    if e.sigma != q + 1 or e.nu != k - q - 1:
        raise ValueError(
            f"exponent vector {e.e} needs sum e_n = {q + 1} and sum n*e_n = {k - q - 1}; "
            f"has {e.sigma} and {e.nu}"
        )


def ck_valuation_closed(e: ExponentVector, k: int, q: int, p: int) -> Fraction:
    """``(p-1) ord = q - S(k) - S(q) + sum(S(e_n) + e_n S(n))``.

    For ``k`` and ``q`` powers of ``p`` this is ``q - 2 + sum(...)``.
    """
    S = lambda n: digit_sum(n, p)  # noqa: E731
    total = q - S(k) - S(q) + sum(S(x) + x * S(n) for n, x in e.support.items())
    return Fraction(total, p - 1)


def ck_valuation_paths(e: ExponentVector, k: int, q: int, p: int) -> tuple:
    _require_prime(p)
    _check_ck(e, k, q)
    return ord_p(ck_coefficient(e, k, q), p), ck_valuation_closed(e, k, q, p)


def ck_coefficient_valuation(e: ExponentVector, k: int, q: int, p: int) -> Fraction:
    direct, closed = ck_valuation_paths(e, k, q, p)
    if direct != closed:
        raise FormulaMismatch(f"C_{k} valuation at {e.monomial()}", direct, closed)
    return Fraction(direct)


def ck_vectors(k: int, q: int, budget: int = DEFAULT_NODE_BUDGET) -> list[ExponentVector]:
    if k < q + 1:
        return []
    return list(enumerate_exponent_vectors(q + 1, k - q - 1, k - 1, budget))


# -- A-type term ---------------------------------------------------------------------


def ak_factor_valuation(k: int, p: int) -> tuple[int, int]:
    """``ord_p(k! / (q (k/q)!))`` for ``q = p^2 | k``: ``(direct, closed)``.

    Closed form for ``k`` a power of ``p``: ``(k/q)(p+1) - 2``.
    """
    q = p * p
    if k % q:
        raise ValueError(f"{k} is not a multiple of {q}")
    direct = ord_p(Fraction(factorial(k), q * factorial(k // q)), p)
    closed = (k // q) * (p + 1) - 2 if is_power_of(k, p) else None
    return direct, closed


# -- valuation profiles --------------------------------------------------------------


@dataclass(frozen=True)
class ValuationProfile:
    """``ord_p`` of a coefficient sequence ``a_0, a_1, ...`` (``INF`` for zeros)."""

    p: int
    ords: tuple
    mode: str = "raw"
    m: int = 1
    window: tuple = field(default=())

    def __post_init__(self):
        if not self.window:
            object.__setattr__(self, "window", (0, len(self.ords) - 1))

    def __len__(self) -> int:
        return len(self.ords)

    def entries(self) -> list[tuple[int, object]]:
        return list(enumerate(self.ords))

    def differences(self, start: int = 0, step: int = 1) -> list[tuple[int, object]]:
        """``(k, ord(a_(k+step)) - ord(a_k))`` for ``k = start, start+step, ...``.

        Differences involving an infinite valuation are reported as ``None``.
        """
        out = []
        k = start
        while k + step < len(self.ords):
            a, b = self.ords[k], self.ords[k + step]
            out.append((k, None if INF in (a, b) else b - a))
            k += step
        return out

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "mode": self.mode,
            "ords": [[k, "inf" if v is INF else v] for k, v in enumerate(self.ords)],
        }


def valuation_profile(a: Sequence, p: int, mode: str = "raw", m: int = 1) -> ValuationProfile:
    _require_prime(p)
    return ValuationProfile(p, tuple(ord_p(x, p) for x in a), str(mode), m)


def radius_exponent_estimate(profile: ValuationProfile) -> Fraction:
    """Window estimate of ``log_p`` of the radius of convergence of ``x * sum(c_k x^k)``.

    With the profile holding ``ord_p(a_k)`` for ``c_k = a_k / scale_k``,
    returns ``min_k ord_p(a_k)/(k+1)`` over the finite window, minus the
    exact limiting slope of ``ord_p(scale_k)/(k+1)``: ``0`` for raw
    coefficients, ``1/(p-1)`` for ``k!`` and ``ord_p(m) + 1/(p-1)`` for
    ``m^k k!``. A finite window only samples the liminf; the window is
    carried on the profile.
    """
    finite = [Fraction(v, k + 1) for k, v in enumerate(profile.ords) if v is not INF]
    if not profile.ords:
        raise ValueError("empty valuation profile")
    if not finite:
        raise ValueError("every coefficient in the window is zero")
    p = profile.p
    drift = Fraction(0)
    if profile.mode in ("over_k_factorial", "over_mk_k_factorial"):
        drift += Fraction(1, p - 1)
    if profile.mode == "over_mk_k_factorial":
        drift += ord_p(profile.m, p)
    return min(finite) - drift
