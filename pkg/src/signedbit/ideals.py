"""Truncated o-ideals, c-ideals and Cauchy subsets of the pseudotree.

For a real ``r`` the o-ideal ``O_r`` is the set of nodes whose open interval
contains ``r``, and ``C_r`` the set whose closure does.  Both are infinite, so
everything here works on a window of levels ``[l0, l1]``.  Closure properties
are only asserted where the window can see them: a node on the last level has
no children in the window, a node on the first level no parents.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

from signedbit.dyadic import (
    Node,
    children,
    contains,
    contains_point,
    floor_mul_pow2,
    format_rational,
    is_extreme_descendant,
    left_extreme,
    parents,
    parse_rational,
    pow2,
    right_extreme,
)
from signedbit.sequences import Modulus, RationalSequence
from signedbit.streams import SignedBitNumber

O = "O"
C = "C"


def o_slice(r, l: int) -> set[Node]:
    """Level-``l`` nodes of ``O_r``: ``k/2**l < r < (k+2)/2**l``."""
    r = Fraction(r)
    f = floor_mul_pow2(r, l)
    return {Node(k, l) for k in (f - 2, f - 1, f) if contains_point(Node(k, l), r)}


def c_slice(r, l: int) -> set[Node]:
    """Level-``l`` nodes of ``C_r``: ``k/2**l <= r <= (k+2)/2**l``."""
    r = Fraction(r)
    f = floor_mul_pow2(r, l)
    return {Node(k, l) for k in (f - 2, f - 1, f) if contains_point(Node(k, l), r, closed=True)}


class Membership(enum.Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"


def stream_membership(x: SignedBitNumber, node: Node, precision: int, closed: bool = False) -> Membership:
    """Membership of a stream-given real in ``node``, decided at ``precision``.

    Uses ``|x - approx(x, precision)| <= 2**-precision``; the answer is
    UNKNOWN when that window straddles an endpoint of the node.
    """
    a = x.approx(precision)
    eps = pow2(-precision)
    lo, hi = a - eps, a + eps
    if closed:
        if node.left <= lo and hi <= node.right:
            return Membership.IN
        if hi < node.left or lo > node.right:
            return Membership.OUT
    else:
        if node.left < lo and hi < node.right:
            return Membership.IN
        if hi <= node.left or lo >= node.right:
            return Membership.OUT
    return Membership.UNKNOWN


def stream_slice(x: SignedBitNumber, l: int, precision: int, closed: bool = False) -> dict[Node, Membership]:
    """Level-``l`` nodes that may contain ``x``, with their membership."""
    a = x.approx(precision)
    eps = pow2(-precision)
    out = {}
    for k in range(floor_mul_pow2(a - eps, l) - 2, floor_mul_pow2(a + eps, l) + 1):
        node = Node(k, l)
        m = stream_membership(x, node, precision, closed)
        if m is not Membership.OUT:
            out[node] = m
    return out


def sort_nodes(nodes: Iterable[Node]) -> list[Node]:
    return sorted(nodes, key=Node.sort_key)


def by_level(nodes: Iterable[Node]) -> dict[int, list[Node]]:
    levels: dict[int, list[Node]] = {}
    for node in sort_nodes(nodes):
        levels.setdefault(node.n, []).append(node)
    return levels


@dataclass(frozen=True)
class IdealTruncation:
    """The part of ``O_r`` or ``C_r`` (``kind`` O or C) on levels ``l0..l1``."""

    kind: str
    r: Fraction
    l0: int
    l1: int
    nodes: frozenset

    def level(self, l: int) -> list[Node]:
        return sorted((n for n in self.nodes if n.n == l), key=Node.sort_key)

    def with_nodes(self, nodes: Iterable[Node]) -> "IdealTruncation":
        return IdealTruncation(self.kind, self.r, self.l0, self.l1, frozenset(nodes))

    def to_text(self) -> str:
        head = f"kind={self.kind} r={format_rational(self.r)} levels={self.l0}..{self.l1}"
        return "\n".join([head] + [str(n) for n in sort_nodes(self.nodes)]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IdealTruncation":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        fields = dict(part.split("=", 1) for part in lines[0].split())
        if set(fields) != {"kind", "r", "levels"} or fields["kind"] not in (O, C):
            raise ValueError(f"bad truncation header: {lines[0]!r}")
        l0, l1 = (int(v) for v in fields["levels"].split(".."))
        nodes = frozenset(Node.parse(ln) for ln in lines[1:])
        return cls(fields["kind"], parse_rational(fields["r"]), l0, l1, nodes)


def truncate_ideal(kind: str, r, l0: int, l1: int) -> IdealTruncation:
    if l0 > l1:
        raise ValueError("need l0 <= l1")
    if kind not in (O, C):
        raise ValueError(f"kind must be O or C, not {kind!r}")
    slicer = o_slice if kind == O else c_slice
    nodes = set()
    for l in range(l0, l1 + 1):
        nodes |= slicer(r, l)
    return IdealTruncation(kind, Fraction(r), l0, l1, frozenset(nodes))


def _adjacent(level_nodes: list[Node]) -> bool:
    ks = [n.k for n in level_nodes]
    return all(b - a == 1 for a, b in zip(ks, ks[1:]))


def check_downset(nodes: frozenset, l0: int, l1: int) -> bool:
    """Closed under superset within the window.

    Every level-``l`` node containing a deeper node ``J`` contains one of
    ``J``'s parents, so checking parents one level up is enough.
    """
    for node in nodes:
        if node.n <= l0 or node.n > l1:
            continue
        if any(p not in nodes for p, _ in parents(node)):
            return False
    return True


def _join_closed(nodes, l0: int, l1: int) -> bool:
    """Every join of two nodes that lands on a window level is in ``nodes``.

    Nested pairs join to the smaller node, so only properly overlapping
    pairs are examined, on integer endpoints at the deepest level.
    """
    deepest = max((n.n for n in nodes), default=l1)
    spans = sorted(((n.k << (deepest - n.n), (n.k + 2) << (deepest - n.n)) for n in nodes))
    for i, (a0, a1) in enumerate(spans):
        for b0, b1 in spans[i + 1:]:
            if b0 >= a1:
                break
            if b1 <= a1 or (b0 == a0):
                continue  # nested
            j = _span_node(b0, a1, deepest)
            if j is not None and l0 <= j.n <= l1 and j not in nodes:
                return False
    return True


def _span_node(lo: int, hi: int, level: int):
    """The node spanning ``(lo, hi)`` in units of ``2**-level``, if any."""
    width = hi - lo
    if width <= 0 or width & (width - 1):
        return None
    e = width.bit_length() - 1
    if e == 0:
        return Node(2 * lo, level + 1)
    if lo % (1 << (e - 1)):
        return None
    return Node(lo >> (e - 1), level + 1 - e)


@dataclass
class CReport:
    """Outcome of :func:`check_c_properties`, one flag per property."""

    child: bool
    adjacent: bool
    double_negation: bool
    left_or_right: bool
    endpoint_chains: bool
    join: bool
    downset: bool
    depth_bound: int
    undecided_chains: int = 0

    @property
    def properties(self) -> list[bool]:
        return [self.child, self.adjacent, self.double_negation,
                self.left_or_right, self.endpoint_chains, self.join]

    @property
    def ok(self) -> bool:
        return all(self.properties) and self.downset

    def lines(self) -> list[str]:
        names = [
            "each node has a child",
            "nodes per level adjacent, at most three",
            "double negation (decidable membership)",
            "lambda child out => rho child in",
            f"endpoint chains (bounded, depth {self.depth_bound})",
            "closed under join",
        ]
        out = [f"property {i} ({name}): {'PASS' if ok else 'FAIL'}"
               for i, (name, ok) in enumerate(zip(names, self.properties), 1)]
        out.append(f"downset: {'PASS' if self.downset else 'FAIL'}")
        return out


def _chain_present(nodes, node: Node, extreme, depth: int) -> bool:
    return all(extreme(node, i) in nodes for i in range(1, depth + 1))


def check_c_properties(t: IdealTruncation, depth_bound: int) -> CReport:
    """Check the c-ideal closure properties on the finite window of ``t``.

    Property 3 has no content once membership is decidable and is reported
    as satisfied.  Property 5 is bounded: for nodes with ``depth_bound``
    levels below them in the window, being the leftmost of three adjacent
    nodes must force ``ρ^i I`` present for ``i <= depth_bound`` (and
    symmetrically rightmost / ``λ``).  The forward direction of 5 cannot be
    decided from finite data (a real just inside an endpoint keeps a long
    ``ρ`` chain alive), so unbroken chains at non-endpoint nodes are counted
    as undecided rather than failed.
    """
    nodes = t.nodes
    l0, l1 = t.l0, t.l1
    levels = by_level(nodes)
    report = CReport(True, True, True, True, True, True, True, depth_bound)

    for l in range(l0, l1 + 1):
        row = levels.get(l, [])
        if not row or len(row) > 3 or not _adjacent(row):
            report.adjacent = False

    for node in nodes:
        if node.n >= l1:
            continue
        lam, mid, rho = children(node)
        if not (lam in nodes or mid in nodes or rho in nodes):
            report.child = False
        if lam not in nodes and rho not in nodes:
            report.left_or_right = False

    report.join = _join_closed(nodes, l0, l1)
    report.downset = check_downset(nodes, l0, l1)

    undecided = 0
    for l in range(l0, l1 - depth_bound + 1):
        row = levels.get(l, [])
        ks = {n.k for n in row}
        for node in row:
            leftmost_of_three = {node.k + 1, node.k + 2} <= ks
            rightmost_of_three = {node.k - 1, node.k - 2} <= ks
            rho_chain = _chain_present(nodes, node, right_extreme, depth_bound)
            lam_chain = _chain_present(nodes, node, left_extreme, depth_bound)
            if leftmost_of_three and not rho_chain:
                report.endpoint_chains = False
            if rightmost_of_three and not lam_chain:
                report.endpoint_chains = False
            if rho_chain and not leftmost_of_three:
                undecided += 1
            if lam_chain and not rightmost_of_three:
                undecided += 1
    report.undecided_chains = undecided
    return report


def o_ideal_undecided(t: IdealTruncation) -> list[Node]:
    """Nodes whose descendants in the window are all extreme.

    Such a node may still have a nonextreme descendant below the window
    (``r = 2**-10`` and the node ``(0,1)`` need level 11), so the clause is
    open for them rather than failed.
    """
    out = []
    for node in sort_nodes(t.nodes):
        below = [o for o in t.nodes if o.n > node.n and contains(node, o)]
        if below and all(is_extreme_descendant(node, o) for o in below):
            out.append(node)
    return out


def check_o_ideal(t: IdealTruncation) -> bool:
    """Downset, join-closed, and descendants down to the bottom level.

    Every node of ``O_r`` above the bottom has descendants on every deeper
    level (its children cover it).  If both extreme chains of a node stop
    inside the window, its bottom-level descendants are nonextreme, so the
    nonextreme-descendant clause is checked wherever the window can decide
    it; see :func:`o_ideal_undecided` for the rest.
    """
    nodes = t.nodes
    if not nodes:
        return False
    if not check_downset(nodes, t.l0, t.l1):
        return False
    if not _join_closed(nodes, t.l0, t.l1):
        return False
    bottom = [o for o in nodes if o.n == t.l1]
    for node in nodes:
        if node.n < t.l1 and not any(contains(node, o) for o in bottom):
            return False
    return True


@dataclass(frozen=True)
class CauchySubset:
    """A finite window of a Cauchy subset.

    ``modulus`` maps ``p`` to a level ``l(p)`` such that left endpoints of all
    nodes beyond ``l(p)`` are less than ``2**-p`` apart.
    """

    nodes: frozenset
    min_level: int
    max_level: int
    modulus: dict = field(default_factory=dict)

    def to_text(self) -> str:
        head = f"cauchy levels={self.min_level}..{self.max_level}"
        mods = [f"modulus p={p} l={l}" for p, l in sorted(self.modulus.items())]
        return "\n".join([head] + mods + [str(n) for n in sort_nodes(self.nodes)]) + "\n"


def _convergence_ok(nodes, level: int, p: int) -> bool:
    deep = [n.left for n in nodes if n.n > level]
    if not deep:
        return True
    return max(deep) - min(deep) < pow2(-p)


def cauchy_check(S: CauchySubset) -> bool:
    """Downset within the window, every level populated, declared moduli hold."""
    if not check_downset(S.nodes, S.min_level, S.max_level):
        return False
    present = {n.n for n in S.nodes}
    if any(l not in present for l in range(S.min_level, S.max_level + 1)):
        return False
    return all(_convergence_ok(S.nodes, l, p) for p, l in S.modulus.items())


def is_unblocked(S: CauchySubset) -> bool:
    """Every node above the last level has a child in the set."""
    for node in S.nodes:
        if node.n < S.max_level and not any(c in S.nodes for c in children(node)):
            return False
    return True


def limit_bounds(S: CauchySubset, p: int) -> tuple[Fraction, Fraction]:
    """Closed interval around the limit from a node beyond ``l(p)``.

    Uses the first node (in ``(n, k)`` order) on level ``l(p) + 1``; its
    midpoint is within ``2**-p + 2**-l(p)`` of the limit.
    """
    if p not in S.modulus:
        raise ValueError(f"no modulus declared at p={p}")
    l = S.modulus[p]
    beyond = sort_nodes(n for n in S.nodes if n.n > l)
    if not beyond:
        raise ValueError(f"no node beyond level {l}")
    node = beyond[0]
    slack = pow2(-p) + pow2(-l)
    return node.midpoint - slack, node.midpoint + slack


def downset(generators: Iterable[Node], min_level: int) -> set[Node]:
    """All nodes on levels ``>= min_level`` containing some generator."""
    out = set()
    frontier = [g for g in generators if g.n >= min_level]
    while frontier:
        node = frontier.pop()
        if node in out:
            continue
        out.add(node)
        if node.n > min_level:
            frontier.extend(p for p, _ in parents(node))
    return out


def sequence_nodes(c: RationalSequence, depth: int) -> list[Node]:
    """``J_n = (floor(c(n) 2**n), n)`` for ``n = 1..depth``."""
    return [Node(floor_mul_pow2(Fraction(c(n)), n), n) for n in range(1, depth + 1)]


def induced_cauchy_modulus(mu: Modulus, depth: int) -> dict[int, int]:
    """Levels ``l(p)`` for a downset of :func:`sequence_nodes`.

    ``mu`` is a limit-form modulus of the sequence (``|c(m) - r| <= 1/i`` for
    ``m >= mu(i)``).  A node ``(j, s)`` of the downset contains some ``J_n``
    with ``n >= s``, so ``|j/2**s - r| < 2**(1-s) + |c(n) - r|``.  Taking
    ``i = 2**(p+2)`` and ``l(p) >= p+3`` keeps any two left endpoints beyond
    ``l(p)`` within ``2**-(p+2) + 2**-(p+1) < 2**-p``.
    """
    out = {}
    p = 0
    while True:
        l = max(mu(1 << (p + 2)), p + 3)
        if l >= depth:
            return out
        out[p] = l
        p += 1


def cauchy_from_sequence(
    c: RationalSequence,
    depth: int,
    mu: Optional[Modulus] = None,
    min_level: int = 1,
) -> CauchySubset:
    """Downset generated by ``J_1..J_depth`` on levels ``min_level..depth``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    nodes = frozenset(downset(sequence_nodes(c, depth), min_level))
    modulus = induced_cauchy_modulus(mu, depth) if mu is not None else {}
    return CauchySubset(nodes, min_level, depth, modulus)


def as_cauchy_subset(t: IdealTruncation, modulus: Callable[[int], int]) -> CauchySubset:
    """View a truncation as a Cauchy subset with ``p -> modulus(p)``."""
    mods = {}
    p = 0
    while modulus(p) < t.l1:
        mods[p] = modulus(p)
        p += 1
    return CauchySubset(t.nodes, t.l0, t.l1, mods)


def sibling_family(J: Node) -> list[Node]:
    """``J`` together with the other children of its parents."""
    out = set()
    for p, _ in parents(J):
        out.update(children(p))
    return sort_nodes(out)


def _rounds(J: Node) -> Iterator[Node]:
    """Fair schedule over ``J``'s siblings and their descendants.

    Round ``t`` lists every node at depth ``0..t`` below the sibling family,
    level by level, so each node recurs in every later round.
    """
    base = sibling_family(J)
    lo = min(n.left for n in base)
    hi = max(n.right for n in base)
    t = 0
    while True:
        for d in range(t + 1):
            l = J.n + d
            k_lo = (lo * pow2(l)).__ceil__()
            k_hi = (hi * pow2(l)).__floor__() - 2
            for k in range(k_lo, k_hi + 1):
                node = Node(k, l)
                if d == 0 and node not in base:
                    continue
                yield node
        t += 1


def o_enumerate(r, J: Node, steps: int, c: Optional[RationalSequence] = None) -> dict[int, Node]:
    """Count the part of ``O_r`` at ``J``'s level and below.

    Walks the fair schedule of :func:`_rounds`; at step ``i`` the scheduled
    node ``J_i`` is kept iff ``[c(i) - 1/i, c(i) + 1/i]`` lies inside it,
    where ``|c(i) - r| <= 1/i`` (default ``c(i) = r``).  Returns the defined
    steps only.
    """
    r = Fraction(r)
    if not contains_point(J, r):
        raise ValueError(f"{r} is not in {J}")
    if c is None:
        c = lambda i: r  # noqa: E731
    out = {}
    schedule = _rounds(J)
    for i in range(1, steps + 1):
        node = next(schedule)
        ci = Fraction(c(i))
        w = Fraction(1, i)
        if node.left < ci - w and ci + w < node.right:
            out[i] = node
    return out
