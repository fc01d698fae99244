"""Reproducible integrality, congruence and valuation checks with JSON-lines reports.

Every check is a pure function of its parameters and a seed. Randomness comes
from ``random.Random("<check_id>:<seed>")``, so equal inputs give byte-equal
reports apart from ``runtime_ms``.

Checks come in two grades. A *theorem* check verifies a proven statement and
a failure means a bug; a *conjecture* check surveys a pattern and its
failures are findings that never fail the suite.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, gcd
from typing import Callable, Iterator

from boettcher.coordinate import (
    GermSpec,
    Normalization,
    bottcher_coordinate,
    bottcher_limit_oracle,
    inverse_bottcher_direct,
    normalize,
)
from boettcher.padic import (
    INF,
    ExponentVector,
    ak_factor_valuation,
    bk_coefficient_valuation,
    bk_mod_p_monomials,
    ck_coefficient_valuation,
    ck_vectors,
    enumerate_exponent_vectors,
    is_p_integral,
    is_prime,
    radius_exponent_estimate,
    tp_factorial_mod_p,
    valuation_profile,
)
from boettcher.serialization import germ_to_json, rational_to_str
from boettcher.series import TruncatedSeries, reversion

PASS, FAIL, FORMULA_ONLY = "pass", "fail", "formula-only"
THEOREM, CONJECTURE = "theorem", "conjecture"

# failing witnesses beyond this many are counted, not listed
MAX_WITNESSES = 25


class UnknownCheckError(KeyError):
    def __init__(self, check_id: str):
        super().__init__(check_id)
        self.check_id = check_id

    def __str__(self) -> str:
        return f"unknown check id {self.check_id!r}; valid ids: {', '.join(CHECK_ORDER)}"


@dataclass
class VerificationReport:
    check_id: str
    parameters: dict
    status: str
    witnesses: list
    runtime_ms: int = 0

    def payload(self) -> dict:
        """Everything except the runtime; deterministic for fixed inputs."""
        return {
            "check_id": self.check_id,
            "parameters": self.parameters,
            "status": self.status,
            "witnesses": self.witnesses,
        }

    def to_json(self) -> dict:
        return {**self.payload(), "runtime_ms": self.runtime_ms}


class _Outcome:
    """Collects failing witnesses (capped) and a few spot checks."""

    def __init__(self, spot_limit: int = 3):
        self.failures: list = []
        self.failure_count = 0
        self.spots: list = []
        self.spot_limit = spot_limit
        self.notes: list = []

    def fail(self, record: dict) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_WITNESSES:
            self.failures.append({"kind": "counterexample", **record})

    def spot(self, record: dict) -> None:
        if len(self.spots) < self.spot_limit:
            self.spots.append({"kind": "spot-check", **record})

    def note(self, record: dict) -> None:
        self.notes.append({"kind": "observation", **record})

    def result(self) -> tuple[str, list]:
        if self.failure_count:
            extra = self.failure_count - len(self.failures)
            tail = [{"kind": "truncated", "omitted": extra}] if extra > 0 else []
            return FAIL, self.failures + tail + self.notes
        return PASS, self.spots + self.notes


def _as_list(value) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _rng(check_id: str, seed: int) -> random.Random:
    return random.Random(f"{check_id}:{seed}")


def _germ_record(germ: GermSpec) -> dict:
    return {"germ": str(germ), **germ_to_json(germ)}


def random_germ(
    rng: random.Random,
    m: int,
    bound: int = 50,
    degree: int | None = None,
    multiplier: Callable[[int], int] = lambda k: 1,
) -> GermSpec:
    """``x^m (1 + sum_{k=1}^{degree-m} multiplier(k) * c_k x^k)``, ``c_k`` uniform in ``[-bound, bound]``."""
    degree = m + 5 if degree is None else degree
    b = [1] + [multiplier(k) * rng.randint(-bound, bound) for k in range(1, degree - m + 1)]
    return GermSpec(m, tuple(b))


def _p_integrality(out: _Outcome, germ: GermSpec, order: int, p: int) -> None:
    res = bottcher_coordinate(germ, order)
    for name, series in (("f", res.f), ("f_inv", res.f_inv)):
        for k, c in enumerate(series.coeffs):
            if not is_p_integral(c, p):
                out.fail({**_germ_record(germ), "series": name, "index": k,
                          "coefficient": rational_to_str(c), "p": p})
                break
    out.spot({**_germ_record(germ), "p": p, "coefficient_index": order,
              "f": rational_to_str(res.f.coeffs[order]),
              "f_inv": rational_to_str(res.f_inv.coeffs[order])})


# -- integrality of the coordinate ------------------------------------------------


def check_coprime_integrality(*, m=3, p=2, trials=20, order=30, bound=50, seed=0):
    """Random ``phi`` in ``x^m + x^(m+1) Z[x]`` with ``p`` not dividing ``m``: ``f``, ``f^-1`` are p-integral."""
    if not is_prime(p) or m % p == 0:
        raise ValueError(f"need a prime p not dividing m; got m={m}, p={p}")
    rng = _rng("coprime-integrality", seed)
    out = _Outcome()
    for _ in range(trials):
        _p_integrality(out, random_germ(rng, m, bound), order, p)
    return out.result()


def _normalization_trials(check_id, part, m, trials, order, bound, seed):
    rng = _rng(check_id, seed)
    out = _Outcome()
    if part == "a":
        mode, mult = Normalization.OVER_MK_K_FACTORIAL, (lambda k: 1)
    else:
        # k! b_k in mZ for 1 <= k < m
        mode = Normalization.OVER_K_FACTORIAL
        mult = lambda k: m // gcd(m, factorial(k)) if k < m else 1  # noqa: E731
    for _ in range(trials):
        germ = random_germ(rng, m, bound, multiplier=mult)
        res = bottcher_coordinate(germ, order)
        for inverse in (False, True):
            norm = normalize(res, mode, inverse=inverse)
            k = norm.first_nonintegral()
            if k is not None:
                out.fail({**_germ_record(germ), "series": "f_inv" if inverse else "f",
                          "normalization": mode.value, "index": k,
                          "a_k": rational_to_str(norm.a[k])})
        a = normalize(res, mode).a
        out.spot({**_germ_record(germ), "normalization": mode.value,
                  "a": [rational_to_str(x) for x in a[:6]]})
    return out.result()


def check_factorial_normalization_a(*, m=6, trials=10, order=30, bound=50, seed=0):
    """Any germ: ``f`` and ``f^-1`` have integral ``a_k`` under the ``m^k k!`` normalization."""
    return _normalization_trials("factorial-normalization-a", "a", m, trials, order, bound, seed)


def check_factorial_normalization_b(*, m=6, trials=10, order=30, bound=50, seed=0):
    """Germs with ``k! b_k`` divisible by ``m`` for ``k < m``: integral under ``k!``."""
    return _normalization_trials("factorial-normalization-b", "b", m, trials, order, bound, seed)


def check_prime_integrality(*, p=(2, 3, 5), trials=20, order=50, bound=50, seed=0):
    """Random ``phi`` in ``x^p + p x^(p+1) Z[x]``: raw coefficients of ``f``, ``f^-1`` are p-integral."""
    rng = _rng("prime-integrality", seed)
    out = _Outcome(spot_limit=6)
    for prime in _as_list(p):
        if not is_prime(prime):
            raise ValueError(f"{prime} is not prime")
        for _ in range(trials):
            germ = random_germ(rng, prime, bound, multiplier=lambda k: prime)
            _p_integrality(out, germ, order, prime)
    return out.result()


# -- congruences at powers of p ---------------------------------------------------


def _family_a(p: int, r_offset: int, k_max: int) -> tuple:
    """``a_0 .. a_k_max`` (k!-normalized) for ``x^(p^2) + p^(2+r) x^(p^2+1)``."""
    q = p * p
    res = bottcher_coordinate(GermSpec.family(q, p ** (2 + r_offset)), k_max + 1, with_inverse=False)
    return normalize(res, Normalization.OVER_K_FACTORIAL).a


def check_powers_of_p_congruence(*, p=(2, 3), max_power=None, order_cap=128, structure_k_max=32):
    """``x^(p^2) + p^2 x^(p^2+1)``: ``a_k == -1 (mod p)`` whenever ``k`` is a power of ``p``.

    Also confirms the structural step behind it: for those ``k`` the B-type sum
    has a single p-adic unit coefficient, at ``a_0^(p^2-p) a_(k/p)^p``.
    """
    out = _Outcome(spot_limit=64)
    formula_only = []
    for prime in _as_list(p):
        if not is_prime(prime):
            raise ValueError(f"{prime} is not prime")
        j_max = max_power
        if j_max is None:
            j_max = 0
            while prime ** (j_max + 1) <= 64:
                j_max += 1
        if prime**j_max > order_cap:
            formula_only.append({"kind": "budget", "p": prime, "max_power": j_max,
                                 "explanation": f"p^max_power = {prime**j_max} exceeds the order cap {order_cap}"})
            continue
        a = _family_a(prime, 0, prime**j_max)
        for j in range(j_max + 1):
            k = prime**j
            if a[k].denominator != 1 or int(a[k]) % prime != prime - 1:
                out.fail({"p": prime, "k": k, "a_k": rational_to_str(a[k]),
                          "expected_residue": prime - 1})
            else:
                out.spot({"p": prime, "k": k, "a_k_mod_p": int(a[k]) % prime})
        q = prime * prime
        for j in range(1, j_max + 1):
            k = prime**j
            if k > structure_k_max:
                break
            mons = bk_mod_p_monomials(k, prime)
            expected = ExponentVector.from_support({0: q - prime, k // prime: prime})
            if mons != [expected]:
                out.fail({"p": prime, "k": k, "unit_monomials": [e.monomial() for e in mons],
                          "expected": expected.monomial()})
    status, witnesses = out.result()
    if formula_only and status == PASS:
        return FORMULA_ONLY, witnesses + formula_only
    return status, witnesses + formula_only


# -- the combinatorial divisibility -------------------------------------------------


def partition_vectors(n: int) -> Iterator[dict]:
    """Exponent vectors ``{j: e_j}`` with ``sum j e_j == n`` (zero entries dropped)."""
    for e in enumerate_exponent_vectors(n, n, n):
        yield {j: x for j, x in e.support.items() if j}


def pointed_partition_value(e: dict, n: int, with_sigma: bool = True) -> Fraction:
    """``n! prod(1/(j!^e_j e_j!)) * sigma * prod(j^e_j)`` as an exact rational."""
    value = Fraction(factorial(n))
    for j, x in e.items():
        value /= factorial(j) ** x * factorial(x)
        value *= j**x
    if with_sigma:
        value *= sum(e.values())
    return value


def pointed_partition_count(e: dict, n: int) -> int:
    """Count of pointed partitions of ``Z/nZ`` with block type ``e`` and one block distinguished.

    Blocks are chosen one at a time (binomials, ordered), then the order
    among equal-size blocks is forgotten, then a point in every block and a
    distinguished block are chosen. Integer arithmetic throughout.
    """
    ordered, left = 1, n
    for j in sorted(e):
        for _ in range(e[j]):
            ordered *= comb(left, j)
            left -= j
    symmetries = 1
    for x in e.values():
        symmetries *= factorial(x)
    if ordered % symmetries:
        raise ArithmeticError("block choices not divisible by block symmetries")
    points = 1
    for j, x in e.items():
        points *= j**x
    return ordered // symmetries * points * sum(e.values())


def _set_partitions(items: list) -> Iterator[list]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for size in range(len(rest) + 1):
        for others in combinations(rest, size):
            block = (first,) + others
            remaining = [x for x in rest if x not in others]
            for tail in _set_partitions(remaining):
                yield [block] + tail


def brute_force_pointed_counts(n: int) -> dict:
    """``#Z(e)`` for every block type, by listing every pointed structure on ``Z/nZ``."""
    counts: dict = {}
    for blocks in _set_partitions(list(range(n))):
        key = tuple(sorted(len(b) for b in blocks))
        pointings = 1
        for b in blocks:
            pointings *= len(b)
        counts[key] = counts.get(key, 0) + pointings * len(blocks)
    return counts


def _type_key(e: dict) -> tuple:
    return tuple(sorted(j for j, x in e.items() for _ in range(x)))


def check_pointed_partition_divisibility(*, n_max=20, brute_max=8):
    """Every partition type of every ``n <= n_max`` gives a value divisible by ``n``."""
    out = _Outcome(spot_limit=4)
    for n in range(1, n_max + 1):
        brute = brute_force_pointed_counts(n) if n <= brute_max else None
        seen = 0
        for e in partition_vectors(n):
            seen += 1
            value = pointed_partition_value(e, n)
            rec = {"n": n, "e": {str(j): x for j, x in sorted(e.items())}, "value": rational_to_str(value)}
            if value.denominator != 1 or value.numerator % n:
                out.fail({**rec, "reason": "not divisible by n"})
            count = pointed_partition_count(e, n)
            if count != value:
                out.fail({**rec, "reason": "closed count differs", "count": count})
            if brute is not None and brute.get(_type_key(e)) != count:
                out.fail({**rec, "reason": "brute-force count differs",
                          "brute_force": brute.get(_type_key(e))})
            if n == 4 and e == {1: 2, 2: 1}:
                out.spot(rec)
        if brute is not None and seen != len(brute):
            out.fail({"n": n, "reason": "partition type counts differ", "enumerated": seen,
                      "brute_force_types": len(brute)})
    return out.result()


def check_sigma_free_divisibility(*, n_max=20):
    """Drop the ``sigma`` factor: still divisible by ``n`` when ``e_1 < n``? (an open question)"""
    out = _Outcome(spot_limit=2)
    tested = 0
    for n in range(1, n_max + 1):
        for e in partition_vectors(n):
            if e.get(1, 0) >= n:
                continue
            tested += 1
            value = pointed_partition_value(e, n, with_sigma=False)
            rec = {"n": n, "e": {str(j): x for j, x in sorted(e.items())}, "value": rational_to_str(value)}
            if value.denominator != 1 or value.numerator % n:
                out.fail(rec)
            elif n == 4:
                out.spot(rec)
    out.note({"vectors_tested": tested, "n_max": n_max})
    return out.result()


# -- inverse classes ----------------------------------------------------------------


def class_scales(class_id: str, count: int, m: int = 3) -> list[int]:
    """``scale_k`` with ``f = x * sum(a_k x^k / scale_k)`` for classes P1..P4."""
    if class_id == "P1":
        return [1] * count
    if class_id == "P2":
        return [factorial(k + 1) for k in range(count)]
    if class_id == "P3":
        return [factorial(k) for k in range(count)]
    if class_id == "P4":
        return [m**k * factorial(k) for k in range(count)]
    raise ValueError(f"unknown class {class_id!r}; expected P1, P2, P3 or P4")


def check_inverse_classes(*, classes=("P1", "P2", "P3", "P4"), trials=50, order=25, m=3, bound=100, seed=0):
    """A series in class P_i has its compositional inverse in P_i."""
    rng = _rng("inverse-classes", seed)
    out = _Outcome(spot_limit=4)
    for cid in _as_list(classes):
        scales = class_scales(cid, order, m)
        for trial in range(trials):
            a = [1] + [rng.randint(-bound, bound) for _ in range(order - 1)]
            f = TruncatedSeries([0] + [Fraction(x, s) for x, s in zip(a, scales)])
            g = reversion(f)
            b = [g.coeffs[k + 1] * s for k, s in enumerate(scales)]
            bad = next((k for k, x in enumerate(b) if x.denominator != 1), None)
            if bad is not None or b[0] != 1:
                out.fail({"class": cid, "m": m, "a": [str(x) for x in a], "index": bad,
                          "b_k": rational_to_str(b[bad]) if bad is not None else None})
            elif trial == 0:
                out.spot({"class": cid, "a": [str(x) for x in a[:5]],
                          "inverse_b": [rational_to_str(x) for x in b[:5]]})
    return out.result()


# -- the mod p pattern ----------------------------------------------------------------


def mod_p_deviations(p: int, a) -> list[dict]:
    """Indices where the three conjectured congruence families fail (p=2, k=1 excused)."""
    out = []
    for k, ak in enumerate(a):
        if ak.denominator != 1:
            out.append({"p": p, "k": k, "a_k": rational_to_str(ak), "family": "integrality"})
            continue
        res = int(ak) % p
        if p == 2 and k == 1:
            if res != 1:
                out.append({"p": p, "k": k, "residue": res, "family": "exception a_1 = 1"})
            continue
        if k % p == 0 and res != (-1) ** (k // p) % p:
            out.append({"p": p, "k": k, "residue": res, "family": "k = 0 mod p"})
        if (k + 2) % p == 0 and res != p - 1:
            out.append({"p": p, "k": k, "residue": res, "family": "k = -2 mod p"})
        if ((k + 1) % p == 0) != (res == 0):
            out.append({"p": p, "k": k, "residue": res, "family": "k = -1 mod p iff a_k = 0"})
    return out


def check_mod_p_pattern(*, p=(2, 3, 5), k_max=50):
    """Residues of ``a_k`` mod ``p`` for ``x^(p^2) + p^2 x^(p^2+1)``, ``k <= k_max``."""
    out = _Outcome(spot_limit=0)
    for prime in _as_list(p):
        if not is_prime(prime):
            raise ValueError(f"{prime} is not prime")
        a = _family_a(prime, 0, k_max)
        for dev in mod_p_deviations(prime, a):
            out.fail(dev)
        out.note({"p": prime, "k_max": k_max,
                  "residues": "".join(str(int(x) % prime) if prime < 10 else f"{int(x) % prime}," for x in a)})
    return out.result()


# -- valuation growth -------------------------------------------------------------------


def least_squares_slope(points: list) -> Fraction:
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    sx = sum(Fraction(x) for x, _ in points)
    sy = sum(Fraction(y) for _, y in points)
    sxx = sum(Fraction(x) * x for x, _ in points)
    sxy = sum(Fraction(x) * y for x, y in points)
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)


def r6_expected_step(n: int) -> int:
    """Observed ``ord_2(a_(2n+2)) - ord_2(a_(2n))`` for ``x^4 + 2^8 x^5``."""
    if n % 2 == 0:
        return 12
    if n % 32 == 31:
        return -21
    if n % 8 == 7:
        return -16
    return -5


def parity_recursion(r: int) -> tuple[int, int] | None:
    """``(step, increment)`` of the p=2 even-index recursion, or ``None`` when it leaves the even indices."""
    if r % 2:
        return 2 ** (r + 1), 2 ** (r + 1) - 2
    if r == 0:
        return None
    return 2**r, 2**r - 1


def check_valuation_growth(*, p=2, r=(0, 1, 2, 3), k_max=64, residual_bound=8):
    """Valuations of ``a_k`` for ``x^(p^2) + p^(2+r) x^(p^2+1)`` at ``p | k`` grow like ``(1-p^-r)/(p-1) k``.

    With the conjectured slope ``s``, the deviations ``ord_p(a_k) - s k`` must
    stay within ``residual_bound`` of their mid-range over the window.
    For ``p = 2`` the even-index difference recursions are asserted too; the
    four-case recursion for ``r = 6`` is recorded, not asserted.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    out = _Outcome(spot_limit=0)
    for r_off in _as_list(r):
        a = _family_a(p, r_off, k_max)
        prof = valuation_profile(a, p, Normalization.OVER_K_FACTORIAL.value)
        ords = prof.ords
        pts = [(k, ords[k]) for k in range(p, k_max + 1, p) if ords[k] is not INF]
        slope = Fraction(p**r_off - 1, p**r_off * (p - 1))
        dev = [y - slope * k for k, y in pts]
        half_spread = (max(dev) - min(dev)) / 2
        rec = {"p": p, "r": r_off, "window": [p, k_max], "conjectured_slope": str(slope),
               "fitted_slope": str(least_squares_slope(pts)), "half_spread": str(half_spread),
               "residual_bound": residual_bound,
               "radius_exponent_estimate": str(radius_exponent_estimate(prof)),
               "conjectured_radius_exponent": str(Fraction(-1, p**r_off * (p - 1)))}
        if half_spread > residual_bound:
            out.fail({**rec, "reason": "deviation from the conjectured slope exceeds the bound"})
        else:
            out.note(rec)
        if p != 2:
            continue
        rule = parity_recursion(r_off)
        if rule is not None:
            step, inc = rule
            misses = [k for k in range(2, k_max - step + 1, 2) if ords[k + step] - ords[k] != inc]
            rrec = {"p": 2, "r": r_off, "recursion": f"ord(a_(k+{step})) = ord(a_k) + {inc}",
                    "k_range": [2, k_max - step]}
            if misses:
                out.fail({**rrec, "failing_k": misses})
            else:
                out.note({**rrec, "holds": True})
        if r_off == 6:
            agree = [n for n in range((k_max - 2) // 2 + 1) if ords[2 * n + 2] - ords[2 * n] == r6_expected_step(n)]
            out.note({"p": 2, "r": 6, "four_case_recursion": "observed",
                      "n_range": [0, (k_max - 2) // 2], "agreeing_n": len(agree),
                      "disagreeing_n": [n for n in range((k_max - 2) // 2 + 1) if n not in agree]})
    return out.result()


# -- internal consistency of the valuation formulas and the three constructions -------


def check_valuation_formulas(*, k_max=30, p3_samples=200, seed=0):
    """Digit-sum valuation formulas agree with direct factorization.

    Exhaustive over B- and C-type vectors for ``p = 2, q = 4, k <= k_max``;
    sampled for ``p = 3, q = 9``. C-type valuations must be positive. Also
    the A-type factor and the prime-to-p factorial residues.
    """
    from boettcher.padic import FormulaMismatch

    out = _Outcome(spot_limit=0)
    rng = _rng("valuation-formulas", seed)
    counted = {"b_vectors": 0, "c_vectors": 0}
    for p, exhaustive in ((2, True), (3, False)):
        q = p * p
        pool_b, pool_c = [], []
        for k in range(1, k_max + 1):
            pool_b += [(e, k) for e in enumerate_exponent_vectors(q, k, k - 1)]
            pool_c += [(e, k) for e in ck_vectors(k, q)]
        if not exhaustive:
            pool_b = rng.sample(pool_b, min(p3_samples, len(pool_b)))
            pool_c = rng.sample(pool_c, min(p3_samples, len(pool_c)))
        for e, k in pool_b:
            counted["b_vectors"] += 1
            try:
                bk_coefficient_valuation(e, k, q, p)
            except FormulaMismatch as exc:
                out.fail({"type": "B", "p": p, "k": k, "e": list(e.e),
                          "direct": str(exc.direct), "closed": str(exc.closed)})
        for e, k in pool_c:
            counted["c_vectors"] += 1
            try:
                v = ck_coefficient_valuation(e, k, q, p)
            except FormulaMismatch as exc:
                out.fail({"type": "C", "p": p, "k": k, "e": list(e.e),
                          "direct": str(exc.direct), "closed": str(exc.closed)})
                continue
            if v <= 0:
                out.fail({"type": "C", "p": p, "k": k, "e": list(e.e), "valuation": str(v),
                          "reason": "not positive"})
        k = q
        while k <= 4 * q * p:
            direct, closed = ak_factor_valuation(k, p)
            if direct != closed or direct <= 0:
                out.fail({"type": "A", "p": p, "k": k, "direct": direct, "closed": closed})
            k *= p
    for p in (2, 3, 5, 7):
        r = 0
        while p**r <= 10**4:
            tp_factorial_mod_p(r, p, cap=10**4)
            r += 1
    out.note(counted)
    return out.result()


def check_oracle_agreement(*, germs=30, max_m=9, max_order=24, bound=50, seed=0):
    """The solver, the iterate-root limit and the reverted direct inverse agree exactly."""
    rng = _rng("oracle-agreement", seed)
    out = _Outcome(spot_limit=3)
    for _ in range(germs):
        m = rng.randint(2, max_m)
        order = rng.randint(min(8, max_order), max_order)
        germ = random_germ(rng, m, bound)
        n_iters = 1
        while m**n_iters <= order:
            n_iters += 1
        f = bottcher_coordinate(germ, order, with_inverse=False).f
        routes = {
            "limit": bottcher_limit_oracle(germ, order, n_iters),
            "direct_inverse": reversion(inverse_bottcher_direct(germ, order)),
        }
        for name, g in routes.items():
            if g != f:
                k = next(i for i in range(order + 1) if g.coeffs[i] != f.coeffs[i])
                out.fail({**_germ_record(germ), "order": order, "route": name, "index": k,
                          "solver": rational_to_str(f.coeffs[k]), "other": rational_to_str(g.coeffs[k])})
        out.spot({**_germ_record(germ), "order": order,
                  "coefficient": rational_to_str(f.coeffs[order])})
    return out.result()


# -- registry and runner ------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    check_id: str
    grade: str
    run: Callable
    randomized: bool = False


CHECKS: dict[str, Check] = {
    c.check_id: c
    for c in (
        Check("coprime-integrality", THEOREM, check_coprime_integrality, True),
        Check("factorial-normalization-a", THEOREM, check_factorial_normalization_a, True),
        Check("factorial-normalization-b", THEOREM, check_factorial_normalization_b, True),
        Check("prime-integrality", THEOREM, check_prime_integrality, True),
        Check("powers-of-p-congruence", THEOREM, check_powers_of_p_congruence),
        Check("inverse-classes", THEOREM, check_inverse_classes, True),
        Check("pointed-partition-divisibility", THEOREM, check_pointed_partition_divisibility),
        Check("valuation-formulas", THEOREM, check_valuation_formulas, True),
        Check("oracle-agreement", THEOREM, check_oracle_agreement, True),
        Check("sigma-free-divisibility", CONJECTURE, check_sigma_free_divisibility),
        Check("mod-p-pattern", CONJECTURE, check_mod_p_pattern),
        Check("valuation-growth", CONJECTURE, check_valuation_growth),
    )
}
CHECK_ORDER = tuple(CHECKS)


def check_parameters(check_id: str) -> dict:
    """Default keyword parameters of a check."""
    import inspect

    fn = _lookup(check_id).run
    return {name: p.default for name, p in inspect.signature(fn).parameters.items()}


def _lookup(check_id: str) -> Check:
    try:
        return CHECKS[check_id]
    except KeyError:
        raise UnknownCheckError(check_id) from None


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def run_check(check_id: str, seed: int = 0, **overrides) -> VerificationReport:
    """Run one check; unknown parameter names raise ``TypeError``."""
    check = _lookup(check_id)
    params = check_parameters(check_id)
    unknown = set(overrides) - set(params)
    if unknown:
        raise TypeError(f"{check_id} has no parameter(s) {', '.join(sorted(unknown))}")
    params.update(overrides)
    if "seed" in params:
        params["seed"] = seed
    start = time.perf_counter()
    status, witnesses = check.run(**params)
    elapsed = round((time.perf_counter() - start) * 1000)
    shown = {k: _jsonable(v) for k, v in sorted(params.items())}
    return VerificationReport(check_id, shown, status, witnesses, elapsed)


@dataclass
class HarnessConfig:
    checks: tuple = CHECK_ORDER
    seed: int = 0
    overrides: dict = field(default_factory=dict)
    workers: int = 1


def _run_task(task: tuple) -> VerificationReport:
    check_id, seed, overrides = task
    return run_check(check_id, seed, **overrides)


def run_all(config: HarnessConfig | None = None) -> list[VerificationReport]:
    """Run the selected checks; reports come back in ``config.checks`` order."""
    config = config or HarnessConfig()
    for cid in config.checks:
        _lookup(cid)
    tasks = [(cid, config.seed, dict(config.overrides.get(cid, {}))) for cid in config.checks]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(t) for t in tasks]


def suite_failed(reports: list[VerificationReport]) -> bool:
    """True when a theorem-grade check failed; conjecture-grade failures never count."""
    return any(r.status == FAIL and CHECKS[r.check_id].grade == THEOREM for r in reports)
