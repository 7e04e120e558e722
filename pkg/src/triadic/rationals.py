"""Exact rational helpers: coercion and the "p/q" wire format.

Every probability and loss constant in this package is a `fractions.Fraction`,
so threshold comparisons (including equalities at decision boundaries) are
decided exactly, never by floating-point tolerance.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ScenarioParseError

RationalLike = "Fraction | int | str"


def frac(value) -> Fraction:
    """Coerce an int, Fraction, or "p/q" / "p" string to an exact Fraction.

    Floats are rejected: they would smuggle rounding error into computations
    whose whole point is exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational value")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ScenarioParseError(f"not a rational: {value!r}") from exc
    raise TypeError(f"expected int, str, or Fraction, got {type(value).__name__}")


def frac_vector(values) -> tuple[Fraction, ...]:
    return tuple(frac(v) for v in values)


def frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(frac_vector(row) for row in rows)


def rational_str(value: Fraction):
    """Render a Fraction for JSON: plain int when integral, else "p/q"."""
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"
