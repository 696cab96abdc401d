"""Fixed-point edge weights: unsigned 64-bit raw values scaled by 2^16.

The sampler compares integer weight sums against 32-bit random numbers, so
edge weights are stored as integers.  Sixteen fractional bits represent the
reciprocals used by second-order walk scaling (1/p, 1/q) with relative error
at most 2^-16, and small integer weights exactly.  All rounding is
round-half-up.
"""

from __future__ import annotations

from fractions import Fraction

FRACTION_BITS = 16
ONE = 1 << FRACTION_BITS

# A neighbor list whose raw weights sum past this bound would overflow the
# sampler's 128-bit acceptance arithmetic.
MAX_LIST_SUM = 1 << 48


def encode(value) -> int:
    """Encode a nonnegative number as a raw fixed-point weight.

    Accepts int, float, Fraction, or a decimal string; rounds half up.
    """
    v = Fraction(value)
    if v < 0:
        raise ValueError(f"edge weight must be nonnegative, got {value!r}")
    # floor(v * ONE + 1/2) without going through floats
    return (2 * v.numerator * ONE + v.denominator) // (2 * v.denominator)


def decode(raw: int) -> float:
    """Raw fixed-point weight back to a float."""
    return raw / ONE


def scaled_div(raw: int, divisor: Fraction) -> int:
    """raw / divisor in fixed point, rounded half up.

    divisor must be a positive rational; the result stays a raw integer
    weight.  Equals floor(raw * den / num + 1/2).
    """
    num, den = divisor.numerator, divisor.denominator
    if num <= 0:
        raise ValueError(f"divisor must be positive, got {divisor}")
    return (2 * raw * den + num) // (2 * num)
