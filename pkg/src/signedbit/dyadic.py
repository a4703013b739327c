"""Dyadic rationals and the ternary pseudotree.

A node ``(k, n)`` is the open interval ``(k/2**n, (k+2)/2**n)``.  It sits on
level ``n``, has radius ``2**-n`` and three children ``(2k, n+1)``,
``(2k+1, n+1)`` and ``(2k+2, n+1)``.  Levels run over all of the integers, so
there is no root and every algorithm here is local.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

LAMBDA = "λ"
MU = "μ"
RHO = "ρ"
ROLES = (LAMBDA, MU, RHO)

# digit value <-> child role
ROLE_OF_DIGIT = {-1: LAMBDA, 0: MU, 1: RHO}
DIGIT_OF_ROLE = {v: k for k, v in ROLE_OF_DIGIT.items()}

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*$")
_NODE_RE = re.compile(r"^\s*\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``<num>/<den>`` (or a bare integer) into a reduced Fraction."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"malformed rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(q: Union[Fraction, int]) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def pow2(e: int) -> Fraction:
    """Exact ``2**e`` for any integer ``e``."""
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def ceil_log2(q: Fraction) -> int:
    """Smallest integer ``e`` with ``q <= 2**e``; ``q`` must be positive."""
    if q <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    num, den = q.numerator, q.denominator
    # start from a bit-length estimate, then correct
    e = num.bit_length() - den.bit_length()
    while q > pow2(e):
        e += 1
    while q <= pow2(e - 1):
        e -= 1
    return e


def floor_mul_pow2(q: Fraction, n: int) -> int:
    """``floor(q * 2**n)``."""
    return (q * pow2(n)).__floor__()


@dataclass(frozen=True, order=False)
class Node:
    """A pseudotree node, the open interval ``(k/2**n, (k+2)/2**n)``."""

    k: int
    n: int

    @property
    def level(self) -> int:
        return self.n

    @property
    def left(self) -> Fraction:
        return Fraction(self.k) * pow2(-self.n)

    @property
    def right(self) -> Fraction:
        return Fraction(self.k + 2) * pow2(-self.n)

    @property
    def midpoint(self) -> Fraction:
        return Fraction(self.k + 1) * pow2(-self.n)

    @property
    def radius(self) -> Fraction:
        return pow2(-self.n)

    @property
    def length(self) -> Fraction:
        return pow2(1 - self.n)

    def sort_key(self) -> tuple[int, int]:
        return (self.n, self.k)

    def child(self, role: str) -> "Node":
        return Node(2 * self.k + ROLES.index(role), self.n + 1)

    def __str__(self) -> str:
        return f"({self.k},{self.n})"

    def interval_str(self) -> str:
        return f"({format_rational(self.left)}, {format_rational(self.right)})"

    @classmethod
    def parse(cls, text: str) -> "Node":
        m = _NODE_RE.match(text)
        if not m:
            raise ValueError(f"malformed node: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def with_midpoint(cls, midpoint: Fraction, level: int) -> "Node":
        """The level-``level`` node centred at ``midpoint``."""
        k = Fraction(midpoint) * pow2(level) - 1
        if k.denominator != 1:
            raise ValueError(f"{midpoint} is not a level-{level} midpoint")
        return cls(int(k), level)


def children(node: Node) -> tuple[Node, Node, Node]:
    k, n = node.k, node.n
    return Node(2 * k, n + 1), Node(2 * k + 1, n + 1), Node(2 * k + 2, n + 1)


def parents(node: Node) -> set[tuple[Node, str]]:
    """All ``(parent, role)`` pairs with ``parent.child(role) == node``.

    Odd ``k`` has a single parent (as the middle child); even ``k`` has two.
    """
    k, n = node.k, node.n
    if k % 2:
        return {(Node((k - 1) // 2, n - 1), MU)}
    return {(Node(k // 2, n - 1), LAMBDA), (Node((k - 2) // 2, n - 1), RHO)}


def lambda_parent(node: Node) -> Node:
    """Canonical parent: the one having ``node`` as its left child, else the
    unique (middle) parent."""
    for p, role in parents(node):
        if role in (LAMBDA, MU):
            return p
    raise AssertionError("unreachable")


def _scaled(node: Node, level: int) -> tuple[int, int]:
    """Integer endpoints of ``node`` in units of ``2**-level`` (``level >= node.n``)."""
    s = level - node.n
    return node.k << s, (node.k + 2) << s


def contains(node: Node, other: Node) -> bool:
    """Whether the interval of ``other`` is a subset of that of ``node``."""
    if other.n < node.n:
        return False
    a, b = _scaled(node, other.n)
    return a <= other.k and other.k + 2 <= b


def contains_point(node: Node, r: Fraction, closed: bool = False) -> bool:
    if closed:
        return node.left <= r <= node.right
    return node.left < r < node.right


def node_of_interval(left: Fraction, right: Fraction) -> Optional[Node]:
    """The node whose interval is exactly ``(left, right)``, if there is one."""
    length = right - left
    if length <= 0:
        return None
    # length must be 2**(1-n)
    if length.numerator != 1 and length.denominator != 1:
        return None
    if length.denominator == 1:
        m = length.numerator
        if m & (m - 1):
            return None
        n = 1 - (m.bit_length() - 1)
    else:
        d = length.denominator
        if d & (d - 1):
            return None
        n = 1 + (d.bit_length() - 1)
    k = left * pow2(n)
    if k.denominator != 1:
        return None
    return Node(int(k), n)


def join(a: Node, b: Node) -> Optional[Node]:
    """The node equal to the intersection of ``a`` and ``b``, or None."""
    if contains(a, b):
        return b
    if contains(b, a):
        return a
    L = max(a.n, b.n)
    a0, a1 = _scaled(a, L)
    b0, b1 = _scaled(b, L)
    lo, hi = max(a0, b0), min(a1, b1)
    width = hi - lo
    if width <= 0 or width & (width - 1):
        return None
    # width == 2**(L + 1 - n) for the level n of the intersection
    e = width.bit_length() - 1
    if e == 0:
        return Node(2 * lo, L + 1)
    if lo % (1 << (e - 1)):
        return None
    return Node(lo >> (e - 1), L + 1 - e)


def left_extreme(node: Node, i: int) -> Node:
    """``λ^i node``."""
    return Node(node.k * (1 << i), node.n + i)


def right_extreme(node: Node, i: int) -> Node:
    """``ρ^i node``."""
    return Node((node.k + 2) * (1 << i) - 2, node.n + i)


def extreme_descendants(node: Node, depth: int) -> set[Node]:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out = set()
    for i in range(1, depth + 1):
        out.add(left_extreme(node, i))
        out.add(right_extreme(node, i))
    return out


def is_extreme_descendant(node: Node, other: Node) -> bool:
    """Whether ``other`` is ``λ^i node`` or ``ρ^i node`` for some ``i >= 1``."""
    i = other.n - node.n
    if i < 1:
        return False
    return other == left_extreme(node, i) or other == right_extreme(node, i)


def level_nodes_meeting(lo: Fraction, hi: Fraction, level: int) -> Iterator[Node]:
    """Level-``level`` nodes whose closed interval meets ``[lo, hi]``."""
    k_lo = floor_mul_pow2(lo, level) - 2
    k_hi = floor_mul_pow2(hi, level)
    for k in range(k_lo, k_hi + 1):
        node = Node(k, level)
        if node.right >= lo and node.left <= hi:
            yield node
