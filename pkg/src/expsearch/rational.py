"""Exact rational lengths and their text representation.

Edge lengths are `fractions.Fraction` throughout the package so that search
times, ratios and game values compare exactly.  File formats store lengths
as decimal strings (or `p/q` when the denominator is not 10-smooth), which
parse back bit-exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FormatError


def as_rational(value) -> Fraction:
    """Coerce a user-supplied length/probability to an exact Fraction.

    Accepts int, Fraction, strings like "3", "2.75" or "7/3", and floats
    (converted through their shortest decimal repr, so 2.5 -> 5/2).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"cannot parse rational literal {value!r}") from exc
    raise TypeError(f"cannot interpret {value!r} as a rational length")


def format_rational(q: Fraction) -> str:
    """Render a Fraction so that as_rational(format_rational(q)) == q.

    Uses an exact terminating decimal when the denominator is of the form
    2^a * 5^b, otherwise falls back to "p/q".
    """
    den = q.denominator
    if den == 1:
        return str(q.numerator)
    twos = fives = 0
    rest = den
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{q.numerator}/{q.denominator}"
    k = max(twos, fives)
    scaled = q.numerator * 10**k // den
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(k + 1, "0")
    whole, frac = digits[:-k], digits[-k:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"
