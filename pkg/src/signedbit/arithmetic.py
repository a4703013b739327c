"""Arithmetic on signed-bit numbers.

Everything except negation (digit-wise) and power-of-two scaling
(re-indexing) goes through :func:`signedbit.streams.from_oracle`: build an
approximation oracle for the result from partial sums of the inputs, with
enough extra precision that its error stays below ``2**-k``.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from signedbit.dyadic import ceil_log2, pow2
from signedbit.streams import SignedBitNumber, from_oracle, zero


class Order(enum.Enum):
    LESS = "LESS"
    GREATER = "GREATER"
    WITHIN = "WITHIN"


def negate(x: SignedBitNumber) -> SignedBitNumber:
    return SignedBitNumber(x.start, lambda i: -x.digit(i))


def add(x: SignedBitNumber, y: SignedBitNumber) -> SignedBitNumber:
    return from_oracle(lambda k: x.approx(k + 1) + y.approx(k + 1))


def sub(x: SignedBitNumber, y: SignedBitNumber) -> SignedBitNumber:
    return add(x, negate(y))


def _power_of_two_exponent(q: Fraction):
    """``e`` if ``|q| == 2**e``, else None."""
    a = abs(q)
    num, den = a.numerator, a.denominator
    if num & (num - 1) == 0 and den == 1:
        return num.bit_length() - 1
    if num == 1 and den & (den - 1) == 0:
        return -(den.bit_length() - 1)
    return None


def scale_padding(q: Fraction) -> int:
    """``max(0, ceil(log2 |q|) + 1)``."""
    return max(0, ceil_log2(abs(q)) + 1)


def scale(q, x: SignedBitNumber) -> SignedBitNumber:
    q = Fraction(q)
    if q == 0:
        return zero()
    e = _power_of_two_exponent(q)
    if e is not None:
        # sum a_{i+e} 2**-i == 2**e * sum a_j 2**-j
        sign = 1 if q > 0 else -1
        return SignedBitNumber(x.start - e, lambda i: sign * x.digit(i + e))
    s = scale_padding(q)
    return from_oracle(lambda k: q * x.approx(k + s))


def min_sb(x: SignedBitNumber, y: SignedBitNumber) -> SignedBitNumber:
    return from_oracle(lambda k: min(x.approx(k), y.approx(k)))


def max_sb(x: SignedBitNumber, y: SignedBitNumber) -> SignedBitNumber:
    return from_oracle(lambda k: max(x.approx(k), y.approx(k)))


def avg(x: SignedBitNumber, y: SignedBitNumber) -> SignedBitNumber:
    return scale(Fraction(1, 2), add(x, y))


def mul_padding(x: SignedBitNumber, y: SignedBitNumber) -> int:
    """Extra precision for :func:`mul`: ``2 + max(0, ceil(log2(Bx+By+1)))``."""
    return 2 + max(0, ceil_log2(x.bound() + y.bound() + 1))


def mul(x: SignedBitNumber, y: SignedBitNumber) -> SignedBitNumber:
    # |ab - xy| <= |a||b-y| + |y||a-x| <= (Bx + By) 2**-j
    pad = mul_padding(x, y)
    return from_oracle(lambda k: x.approx(k + pad) * y.approx(k + pad))


def compare(x: SignedBitNumber, y: SignedBitNumber, l: int) -> Order:
    """Three-valued order at precision ``l``.

    WITHIN guarantees ``|x - y| <= 2**(2-l)``; LESS and GREATER are exact.
    """
    a, b = x.approx(l), y.approx(l)
    eps = pow2(-l)
    if a + eps < b - eps:
        return Order.LESS
    if b + eps < a - eps:
        return Order.GREATER
    return Order.WITHIN
