"""Signed-bit numbers as paths through the pseudotree.

A :class:`SignedBitNumber` has a start index ``n`` and a digit oracle over
``{-1, 0, 1}`` for indices ``i >= n``; it represents ``sum(a_i * 2**-i)``.
The path starts at the node ``(-1, n-1)`` (midpoint 0, radius ``2**(1-n)``)
and digit ``a_i`` selects the left, middle or right child on the way to
level ``i``.  The partial sum ``m_l`` after digit ``l`` is the midpoint of the
level-``l`` path node and always satisfies ``|value - m_l| <= 2**-l``.

Approximation oracles are plain callables ``k -> Fraction`` returning a
rational within ``2**-k`` of a fixed real.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Iterable, Optional

from signedbit.dyadic import ROLE_OF_DIGIT, Node, pow2

Oracle = Callable[[int], Fraction]

DIGIT_CHARS = {-1: "-", 0: "0", 1: "+"}
CHAR_DIGITS = {v: k for k, v in DIGIT_CHARS.items()}

# from_oracle keeps |value - m_l| <= (3/4) 2**-l and reads the oracle at l+4
ORACLE_PAD = 4
_INVARIANT = Fraction(3, 4)


class SignedBitNumber:
    """A lazily evaluated signed-bit digit stream.

    ``digit`` is called at most once per index and always in increasing
    index order, so it may read earlier digits or partial sums of the number
    under construction.  Results are cached behind a lock; the cache is not
    observable from outside.
    """

    def __init__(self, start: int, digit: Callable[[int], int]):
        self.start = start
        self._digit = digit
        self._digits: list[int] = []
        self._sums: list[Fraction] = []
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        return f"SignedBitNumber(start={self.start})"

    def _fill(self, l: int) -> None:
        with self._lock:
            while self.start + len(self._digits) <= l:
                i = self.start + len(self._digits)
                d = self._digit(i)
                if d not in (-1, 0, 1):
                    raise ValueError(f"digit {d!r} at index {i} is not in {{-1,0,1}}")
                prev = self._sums[-1] if self._sums else Fraction(0)
                self._digits.append(d)
                self._sums.append(prev + d * pow2(-i))

    def digit(self, i: int) -> int:
        if i < self.start:
            return 0
        self._fill(i)
        return self._digits[i - self.start]

    def digits(self, depth: int) -> list[int]:
        """Digits at indices ``start..depth`` inclusive."""
        if depth < self.start:
            return []
        self._fill(depth)
        return list(self._digits[: depth - self.start + 1])

    def approx(self, l: int) -> Fraction:
        """Partial sum ``m_l``; within ``2**-l`` of the represented value.

        Defined for every integer ``l``: below the start index it is 0, which
        is still within ``2**(1-start) <= 2**-l`` of the value.
        """
        if l < self.start:
            return Fraction(0)
        self._fill(l)
        return self._sums[l - self.start]

    # the approximation oracle view of the number
    __call__ = approx

    def path_node(self, l: int) -> Node:
        return Node.with_midpoint(self.approx(l), l)

    def path(self, depth: int) -> list[Node]:
        """Path nodes from the start node (level ``start-1``) to ``depth``."""
        return [self.path_node(l) for l in range(self.start - 1, depth + 1)]

    def bound(self) -> Fraction:
        """``2**(1-start)``: bounds ``|value|`` and every partial sum."""
        return pow2(1 - self.start)

    def to_text(self, depth: Optional[int] = None) -> str:
        """Serialize as ``start=<n>`` plus a digit line over ``-0+``.

        With ``depth`` the stream is truncated after that index and a
        ``depth=<l>`` line is appended.
        """
        if depth is None:
            raise ValueError("infinite streams need an explicit depth")
        line = "".join(DIGIT_CHARS[d] for d in self.digits(depth))
        return f"start={self.start}\n{line}\ndepth={depth}\n"


def approx(x: SignedBitNumber, l: int) -> Fraction:
    return x.approx(l)


def path_node(x: SignedBitNumber, l: int) -> Node:
    return x.path_node(l)


def role_of_digit(d: int) -> str:
    return ROLE_OF_DIGIT[d]


def _nearest_digit(offset: Fraction, step: Fraction) -> int:
    """Digit ``a`` minimising ``|offset - a*step|``; ties go to 0."""
    best = 0
    best_err = abs(offset)
    for a in (-1, 1):
        err = abs(offset - a * step)
        if err < best_err:
            best, best_err = a, err
    return best


def from_digits(start: int, digits: Iterable[int]) -> SignedBitNumber:
    """A finite digit string padded with zeros."""
    ds = list(digits)

    def digit(i: int) -> int:
        j = i - start
        return ds[j] if j < len(ds) else 0

    return SignedBitNumber(start, digit)


def zero() -> SignedBitNumber:
    return SignedBitNumber(0, lambda i: 0)


def start_level(r: Fraction) -> int:
    """Largest ``n`` with ``|r| <= 2**-n`` (0 for ``r == 0``)."""
    a = abs(Fraction(r))
    if a == 0:
        return 0
    # |r| <= 2**-n  <=>  n <= -log2|r|
    n = a.denominator.bit_length() - a.numerator.bit_length() + 1
    while a > pow2(-n):
        n -= 1
    while a <= pow2(-(n + 1)):
        n += 1
    return n


def from_rational(r) -> SignedBitNumber:
    """Greedy signed-bit expansion of an exact rational."""
    r = Fraction(r)
    n = start_level(r)
    x: SignedBitNumber

    def digit(i: int) -> int:
        return _nearest_digit(r - x.approx(i - 1), pow2(-i))

    x = SignedBitNumber(n, digit)
    return x


def from_oracle(oracle: Oracle) -> SignedBitNumber:
    """Signed-bit stream of the real approximated by ``oracle``.

    The oracle must return values within ``2**-k`` of a fixed real at every
    precision ``k``.  Each digit reads the oracle ``ORACLE_PAD`` levels past
    the current one, which keeps ``|value - m_l| <= (3/4) 2**-l``.
    """
    n = 0
    while abs(oracle(n + ORACLE_PAD)) > pow2(-n - 1):
        n -= 1
    x: SignedBitNumber

    def digit(i: int) -> int:
        l = i - 1
        m = x.approx(l)
        return _nearest_digit(oracle(l + ORACLE_PAD) - m, pow2(-i))

    x = SignedBitNumber(n, digit)
    return x


def parse_stream_text(text: str) -> tuple[int, list[int], Optional[int]]:
    """Inverse of :meth:`SignedBitNumber.to_text`: ``(start, digits, depth)``."""
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if len(lines) < 2 or not lines[0].startswith("start="):
        raise ValueError("expected 'start=<n>' followed by a digit line")
    start = int(lines[0][len("start="):])
    try:
        digits = [CHAR_DIGITS[c] for c in lines[1]]
    except KeyError as exc:
        raise ValueError(f"bad digit character {exc.args[0]!r}") from None
    depth = None
    if len(lines) > 2:
        if not lines[2].startswith("depth="):
            raise ValueError("third line must be 'depth=<l>'")
        depth = int(lines[2][len("depth="):])
        if depth != start + len(digits) - 1:
            raise ValueError("depth does not match the digit count")
    return start, digits, depth
