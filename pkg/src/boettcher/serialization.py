"""Exact JSON and CSV encodings for series, germs and valuation profiles.

Rationals are written as strings, ``"3"`` or ``"-7/2"``, so nothing passes
through a float. Polynomials in ``t`` are lists of such strings, lowest
degree first.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from boettcher.coordinate import BottcherResult, GermSpec, NormalizedCoefficients
from boettcher.padic import INF, ValuationProfile
from boettcher.polynomial import RationalPolynomial
from boettcher.series import QQ, QQt, TruncatedSeries


class FormatError(ValueError):
    pass


def rational_to_str(x) -> str:
    return str(Fraction(x))


def rational_from_json(value) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise FormatError(f"expected an integer or a 'num/den' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"not an exact rational: {value!r}") from exc


def poly_to_json(p: RationalPolynomial) -> list[str]:
    return [rational_to_str(c) for c in p.coeffs]


def poly_from_json(value) -> RationalPolynomial:
    if not isinstance(value, list):
        raise FormatError(f"a polynomial in t is a list of rationals, got {value!r}")
    return RationalPolynomial(rational_from_json(c) for c in value)


def series_to_json(f: TruncatedSeries) -> dict:
    if f.ring is QQt:
        return {"order": f.order, "tcoeffs": [poly_to_json(c) for c in f.coeffs]}
    return {"order": f.order, "coeffs": [rational_to_str(c) for c in f.coeffs]}


def series_from_json(obj: dict) -> TruncatedSeries:
    try:
        order = obj["order"]
        if "tcoeffs" in obj:
            coeffs, ring = [poly_from_json(c) for c in obj["tcoeffs"]], QQt
        else:
            coeffs, ring = [rational_from_json(c) for c in obj["coeffs"]], QQ
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed series object: {exc}") from exc
    if not isinstance(order, int) or len(coeffs) != order + 1:
        raise FormatError("series 'order' must equal the number of coefficients minus one")
    return TruncatedSeries(coeffs, ring)


def germ_to_json(germ: GermSpec) -> dict:
    if germ.ring is QQt:
        return {"m": germ.m, "b_t": [poly_to_json(c) for c in germ.b]}
    return {"m": germ.m, "b": [rational_to_str(c) for c in germ.b]}


def germ_from_json(obj: dict) -> GermSpec:
    if not isinstance(obj, dict) or "m" not in obj:
        raise FormatError("a germ object needs 'm' and 'b' (or 'b_t')")
    m = obj["m"]
    if not isinstance(m, int) or isinstance(m, bool):
        raise FormatError(f"'m' must be an integer, got {m!r}")
    if "b_t" in obj:
        return GermSpec(m, tuple(poly_from_json(c) for c in obj["b_t"]), QQt)
    if "b" not in obj or not isinstance(obj["b"], list):
        raise FormatError("a germ object needs a list 'b'")
    return GermSpec(m, tuple(rational_from_json(c) for c in obj["b"]))


def normalized_to_json(n: NormalizedCoefficients) -> dict:
    return {
        "mode": n.mode.value,
        "a": [rational_to_str(x) for x in n.a],
        "all_integral": n.all_integral,
        "first_nonintegral": n.first_nonintegral(),
    }


def result_to_json(result: BottcherResult, order: int, normalized: dict | None = None) -> dict:
    out: dict[str, Any] = {
        "germ": germ_to_json(result.germ),
        "order": order,
        "verified_order": result.verified_order,
        "f": series_to_json(result.f),
        "f_inv": series_to_json(result.f_inv) if result.f_inv is not None else None,
    }
    if normalized:
        out["normalized"] = {k: normalized_to_json(v) for k, v in normalized.items()}
    return out


def profile_to_json(profile: ValuationProfile) -> dict:
    return profile.to_json()


def profile_from_json(obj: dict) -> ValuationProfile:
    try:
        ords = []
        for i, (k, v) in enumerate(obj["ords"]):
            if k != i:
                raise FormatError("profile indices must run 0, 1, 2, ...")
            ords.append(INF if v == "inf" else int(v))
        return ValuationProfile(int(obj["p"]), tuple(ords), obj.get("mode", "raw"))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed profile: {exc}") from exc


def dumps(obj) -> str:
    """Canonical one-line JSON (stable key order, no whitespace variance)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def csv_cell(x) -> str:
    if x is INF:
        return "inf"
    if isinstance(x, RationalPolynomial):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return rational_to_str(x)
    return str(x)
