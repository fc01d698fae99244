"""Deliberately naive reference computations used as test oracles.

Nothing here imports the library's series arithmetic: products are plain
double loops over dicts and composition expands powers one at a time.
"""

from fractions import Fraction


def poly_mul(a, b, top):
    out = [Fraction(0)] * (top + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= top:
                out[i + j] += x * y
    return out


def poly_pow(a, n, top):
    out = [Fraction(1)] + [Fraction(0)] * top
    for _ in range(n):
        out = poly_mul(out, a, top)
    return out


def poly_compose(f, g, top):
    """``f(g(x))`` truncated at ``x^top``; ``g[0]`` must be 0."""
    out = [Fraction(0)] * (top + 1)
    power = [Fraction(1)] + [Fraction(0)] * top
    for c in f[: top + 1]:
        for i in range(top + 1):
            out[i] += c * power[i]
        power = poly_mul(power, g, top)
    return out


def substitute_power(f, m, top):
    out = [Fraction(0)] * (top + 1)
    for i, c in enumerate(f):
        if i * m <= top:
            out[i * m] = c
    return out


def bottcher_equation_holds(m, b, f, top):
    """Check ``phi(f(x)) == f(x^m)`` through ``x^top`` with ``phi = x^m sum b_k x^k``."""
    phi = [Fraction(0)] * m + [Fraction(x) for x in b]
    lhs = poly_compose(phi, list(f) + [Fraction(0)] * (top + 1 - len(f)), top)
    rhs = substitute_power(f, m, top)
    return lhs == rhs


def ord_p_by_division(x, p):
    x = Fraction(x)
    if x == 0:
        return None
    v, n, d = 0, abs(x.numerator), x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def factorial_ord_by_product(n, p):
    prod = 1
    for i in range(2, n + 1):
        prod *= i
    return ord_p_by_division(prod, p)
