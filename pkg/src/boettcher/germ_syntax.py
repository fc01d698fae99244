"""Inline germ notation such as ``x^2+2x^3`` or ``x^4 - 3/2*x^(5) + 2t*x^6``.

Grammar (whitespace ignored)::

    germ  := term (('+' | '-') term)*      a leading sign is allowed
    term  := coeff? 'x' ('^' exp)?  |  coeff
    coeff := rational ('*'? 't' ('^' int)?)? '*'?  |  't' ('^' int)? '*'?
    exp   := int | '(' int ')'

Like terms are added. The result must have the shape ``x^m (1 + ...)``
with ``m >= 2``. A coefficient mentioning ``t`` makes the germ live over
Q[t].
"""

from __future__ import annotations

from fractions import Fraction

from boettcher.coordinate import GermError, GermSpec
from boettcher.polynomial import RationalPolynomial
from boettcher.series import QQ, QQt


class GermSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.src = [(i, ch) for i, ch in enumerate(text) if not ch.isspace()]
        self.i = 0

    def pos(self) -> int:
        return self.src[self.i][0] if self.i < len(self.src) else len(self.text)

    def peek(self) -> str:
        return self.src[self.i][1] if self.i < len(self.src) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.i += 1
            return True
        return False

    def fail(self, message: str):
        raise GermSyntaxError(message, self.text, self.pos())

    def integer(self) -> int:
        start = self.i
        while self.peek().isdigit():
            self.i += 1
        if self.i == start:
            self.fail("expected an integer")
        return int("".join(ch for _, ch in self.src[start : self.i]))

    def exponent(self) -> int:
        if self.take("("):
            n = self.integer()
            if not self.take(")"):
                self.fail("expected ')'")
            return n
        return self.integer()

    def coefficient(self) -> RationalPolynomial | None:
        value = None
        if self.peek().isdigit():
            num = self.integer()
            den = 1
            if self.take("/"):
                start = self.i
                den = self.integer()
                if den == 0:
                    self.i = start
                    self.fail("zero denominator")
            value = RationalPolynomial((Fraction(num, den),))
            self.take("*")
        if self.take("t"):
            power = self.exponent() if self.take("^") else 1
            tp = RationalPolynomial((0,) * power + (1,))
            value = tp if value is None else value * tp
            self.take("*")
        return value

    def term(self) -> tuple[int, RationalPolynomial]:
        coeff = self.coefficient()
        if self.take("x"):
            power = self.exponent() if self.take("^") else 1
        elif coeff is None:
            self.fail("expected a coefficient or 'x'")
        else:
            power = 0
        return power, coeff if coeff is not None else RationalPolynomial((1,))

    def germ(self) -> dict[int, RationalPolynomial]:
        terms: dict[int, RationalPolynomial] = {}
        if not self.src:
            self.fail("empty germ")
        sign = 1
        if self.take("-"):
            sign = -1
        else:
            self.take("+")
        while True:
            power, coeff = self.term()
            terms[power] = terms.get(power, RationalPolynomial()) + coeff * sign
            if self.take("+"):
                sign = 1
            elif self.take("-"):
                sign = -1
            elif self.peek():
                self.fail(f"unexpected {self.peek()!r}")
            else:
                return terms


def parse_germ(text: str) -> GermSpec:
    """Parse inline notation into a :class:`GermSpec`."""
    terms = {k: v for k, v in _Parser(text).germ().items() if v}
    if not terms:
        raise GermSyntaxError("germ is identically zero", text, 0)
    m = min(terms)
    if m < 2:
        raise GermSyntaxError(f"lowest term is x^{m}; a superattracting germ needs m >= 2", text, 0)
    if terms[m] != 1:
        raise GermSyntaxError(f"leading coefficient of x^{m} must be 1, got {terms[m]}", text, 0)
    over_t = any(v.degree > 0 for v in terms.values())
    top = max(terms)
    b = [terms.get(k, RationalPolynomial()) for k in range(m, top + 1)]
    try:
        if over_t:
            return GermSpec(m, tuple(b), QQt)
        return GermSpec(m, tuple(c(0) for c in b), QQ)
    except GermError as exc:
        raise GermSyntaxError(str(exc), text, 0) from exc
