"""Riesz spaces ``Q^d`` with the pointwise order and unit ``(1, ..., 1)``.

Here ``U(a) = {q : a < q}`` is located: its infimum is the largest
coordinate of ``a``.  So ``Pos(a)`` ("some positive rational lies below all
of ``U(a)``") just asks for a positive coordinate, and the signed-bit
representation ``X_T`` of a finite set ``X`` becomes decidable: an
assignment ``y -> I_y`` is a member iff one coordinate ``j`` has ``y_j``
strictly inside ``I_y`` for every ``y`` at once.

Homomorphisms into the reals are the coordinate projections.  The o-ideal
induced by projection ``j`` sends ``x`` to ``O_{x_j}``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Optional, Sequence

from signedbit.dyadic import Node, format_rational, level_nodes_meeting, parents, parse_rational
from signedbit.ideals import IdealTruncation, truncate_ideal


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class RieszElement:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @classmethod
    def of(cls, *coords) -> "RieszElement":
        return cls(tuple(coords))

    @classmethod
    def const(cls, q, d: int) -> "RieszElement":
        return cls((Fraction(q),) * d)

    @classmethod
    def unit(cls, d: int) -> "RieszElement":
        return cls.const(1, d)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _check(self, other: "RieszElement") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "RieszElement") -> "RieszElement":
        self._check(other)
        return RieszElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RieszElement") -> "RieszElement":
        self._check(other)
        return RieszElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RieszElement":
        return RieszElement(tuple(-a for a in self.coords))

    def __le__(self, other: "RieszElement") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __str__(self) -> str:
        return "[" + ",".join(format_rational(c) for c in self.coords) + "]"

    @classmethod
    def parse(cls, text: str) -> "RieszElement":
        m = re.fullmatch(r"\s*\[(.*)\]\s*", text)
        if not m or not m.group(1).strip():
            raise ValueError(f"malformed Riesz element: {text!r}")
        return cls(tuple(parse_rational(part) for part in m.group(1).split(",")))


def vee(x: RieszElement, y: RieszElement) -> RieszElement:
    x._check(y)
    return RieszElement(tuple(max(a, b) for a, b in zip(x.coords, y.coords)))


def wedge(x: RieszElement, y: RieszElement) -> RieszElement:
    x._check(y)
    return RieszElement(tuple(min(a, b) for a, b in zip(x.coords, y.coords)))


def plus(x: RieszElement, y: RieszElement) -> RieszElement:
    return x + y


def scale(q, x: RieszElement) -> RieszElement:
    q = Fraction(q)
    return RieszElement(tuple(q * a for a in x.coords))


def _zero(d: int) -> RieszElement:
    return RieszElement.const(0, d)


def pos_part(x: RieszElement) -> RieszElement:
    return vee(x, _zero(x.dim))


def neg_part(x: RieszElement) -> RieszElement:
    return vee(-x, _zero(x.dim))


def abs_val(x: RieszElement) -> RieszElement:
    return pos_part(x) + neg_part(x)


def sup_cut(a: RieszElement) -> Fraction:
    """Infimum of ``U(a)``, i.e. the largest coordinate."""
    return max(a.coords)


def pos(a: RieszElement) -> bool:
    return sup_cut(a) > 0


def seminorm(a: RieszElement) -> Fraction:
    return sup_cut(abs_val(a))


def elem_in_interval(a: RieszElement, node: Node) -> RieszElement:
    """``(a - p) ∧ (q - a)`` for the node ``(p, q)``."""
    d = a.dim
    return wedge(a - RieszElement.const(node.left, d), RieszElement.const(node.right, d) - a)


# A ChiAssignment maps (a finite subset of) registered elements to nodes.
ChiAssignment = Mapping[RieszElement, Node]


def chi_member(assignment: ChiAssignment) -> bool:
    """Membership in ``X_T``: ``Pos`` of the wedge of ``y ∈ I_y``.

    The empty assignment is a member (the empty wedge counts as positive).
    """
    items = list(assignment.items())
    if not items:
        return True
    acc = elem_in_interval(*items[0])
    for y, node in items[1:]:
        acc = wedge(acc, elem_in_interval(y, node))
    return pos(acc)


def _key(assignment: ChiAssignment) -> frozenset:
    return frozenset(assignment.items())


def signed_bit_representation(X: Sequence[RieszElement], l0: int, l1: int) -> set[frozenset]:
    """All members of ``X_T`` with nodes on levels ``l0..l1``.

    Only nodes meeting the coordinate range of their element can occur, so
    the enumeration is exhaustive for that window.
    """
    candidates = {}
    for x in X:
        lo, hi = min(x.coords), max(x.coords)
        candidates[x] = [n for l in range(l0, l1 + 1) for n in level_nodes_meeting(lo, hi, l)]
    out = set()
    for size in range(len(X) + 1):
        for Y in combinations(X, size):
            for choice in product(*(candidates[y] for y in Y)):
                a = dict(zip(Y, choice))
                if chi_member(a):
                    out.add(_key(a))
    return out


def well_formed_check(chi: Iterable[frozenset], X: Iterable[RieszElement], min_level: Optional[int] = None) -> bool:
    """Domain is ``X`` and ``chi`` is closed downwards, on finite data.

    Downward closure is checked one step at a time: dropping one element
    from the domain, or replacing one node by a parent not above
    ``min_level`` (default: the shallowest level occurring in ``chi``).
    """
    chi = {frozenset(c) for c in chi}
    domain = {y for c in chi for y, _ in c}
    if domain != set(X):
        return False
    levels = [n.n for c in chi for _, n in c]
    if min_level is None:
        min_level = min(levels) if levels else 0
    for c in chi:
        items = dict(c)
        for y in items:
            smaller = {k: v for k, v in items.items() if k != y}
            if _key(smaller) not in chi:
                return False
            if items[y].n > min_level:
                for p, _ in parents(items[y]):
                    coarser = dict(items)
                    coarser[y] = p
                    if _key(coarser) not in chi:
                        return False
    return True


def extendible_check(
    member: Callable[[ChiAssignment], bool],
    I: ChiAssignment,
    u: RieszElement,
    n: int,
) -> Optional[dict]:
    """Look for ``J`` in ``chi`` extending ``I`` with ``u`` in its domain at
    level ``>= n``.

    Other entries of ``I`` are kept; the node for ``u`` ranges over level
    ``L = max(n, level(I_u))`` inside ``I_u`` when ``u`` is already assigned.
    A solution at a deeper level yields one at ``L`` (its ancestor), and any
    node making ``Pos`` true meets the seminorm box of ``u``, so for
    ``chi = X_T`` over ``Q^d`` the search is complete.
    """
    current = I.get(u)
    L = n if current is None else max(n, current.n)
    if current is not None and current.n >= n and member(I):
        return dict(I)
    bound = seminorm(u)
    for node in level_nodes_meeting(-bound, bound, L):
        if current is not None and not (current.left <= node.left and node.right <= current.right):
            continue
        J = dict(I)
        J[u] = node
        if member(J):
            return J
    return None


def induced_family(j: int, X: Iterable[RieszElement], depth: int, l0: int = 1) -> dict:
    """``x -> O-truncation of x_j`` on levels ``l0..depth`` (``j`` is 1-based)."""
    out = {}
    for x in X:
        if not 1 <= j <= x.dim:
            raise DimensionError(f"coordinate {j} out of range for dimension {x.dim}")
        out[x] = truncate_ideal("O", x.coords[j - 1], l0, depth)
    return out


def random_selection(family: Mapping[RieszElement, IdealTruncation], rng: random.Random) -> dict:
    """One node per element, drawn from its truncation."""
    return {x: rng.choice(sorted(t.nodes, key=Node.sort_key)) for x, t in family.items()}


def deepest_node(t: IdealTruncation) -> Node:
    row = t.level(max(n.n for n in t.nodes))
    return row[0]


@dataclass
class LawCheck:
    law: str
    detail: str
    ok: bool
    lhs: Fraction = Fraction(0)
    rhs: Fraction = Fraction(0)
    tolerance: Fraction = Fraction(0)

    def line(self) -> str:
        return (f"{self.law} {self.detail}: |{format_rational(self.lhs)} - {format_rational(self.rhs)}|"
                f" <= {format_rational(self.tolerance)} {'PASS' if self.ok else 'FAIL'}")


@dataclass
class HomReport:
    epsilon: Fraction
    precondition: bool
    checks: list = field(default_factory=list)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.precondition and all(c.ok for c in self.checks)

    def laws(self, name: str) -> list:
        return [c for c in self.checks if c.law == name]

    def lines(self) -> list[str]:
        head = f"epsilon={format_rational(self.epsilon)} precondition={'PASS' if self.precondition else 'FAIL'}"
        out = [head]
        if self.message:
            out.append(self.message)
        out.extend(c.line() for c in self.checks)
        out.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return out


def reconstruct_hom(
    family: Mapping[RieszElement, IdealTruncation],
    probes: Iterable[tuple],
    epsilon,
    scalars: Iterable = (),
) -> HomReport:
    """Read a homomorphism off an o-ideal family and check its laws.

    ``f(x)`` is the midpoint of the deepest node for ``x``.  The deepest
    nodes must be shorter than ``epsilon/4``; then each ``f(x)`` is within
    ``epsilon/8`` of the real the o-ideal encodes.  For each probe ``(x, y)``
    present in the family, additivity (``x+y``) and the meet law
    (``x ∧ y``) are checked within ``epsilon``; the unit within ``epsilon``;
    and for each scalar ``q`` and element ``x`` with ``q x`` in the family,
    ``|f(qx) - q f(x)| <= epsilon (1 + |q|)``.
    """
    eps = Fraction(epsilon)
    f = {x: deepest_node(t).midpoint for x, t in family.items()}
    report = HomReport(eps, True)
    too_coarse = [x for x, t in family.items() if deepest_node(t).length >= eps / 4]
    if too_coarse:
        report.precondition = False
        report.message = (f"truncation too shallow for epsilon: node length "
                          f"{format_rational(deepest_node(family[too_coarse[0]]).length)} >= epsilon/4")
        return report

    def check(law, detail, lhs, rhs, tol):
        report.checks.append(LawCheck(law, detail, abs(lhs - rhs) <= tol, lhs, rhs, tol))

    elems = list(family)
    d = elems[0].dim if elems else 0
    unit = RieszElement.unit(d) if d else None
    if unit in f:
        check("unit", "f(1)", f[unit], Fraction(1), eps)
    for x, y in probes:
        if x not in f or y not in f:
            continue
        s = x + y
        if s in f:
            check("additivity", f"{x}+{y}", f[s], f[x] + f[y], eps)
        w = wedge(x, y)
        if w in f:
            check("wedge", f"{x}^{y}", f[w], min(f[x], f[y]), eps)
    for q in scalars:
        q = Fraction(q)
        for x in elems:
            qx = scale(q, x)
            if qx in f and qx != x:
                check("scale", f"{format_rational(q)}*{x}", f[qx], q * f[x], eps * (1 + abs(q)))
    return report


def closure_for_probes(X: Iterable[RieszElement], probes: Iterable[tuple], scalars: Iterable = ()) -> list:
    """``X`` plus the unit, the sums and meets of probe pairs, and scalar
    multiples of ``X``, without duplicates and in first-seen order."""
    X = list(X)
    out: dict = {}
    for x in X:
        out.setdefault(x, None)
    if X:
        out.setdefault(RieszElement.unit(X[0].dim), None)
    for x, y in probes:
        out.setdefault(x + y, None)
        out.setdefault(wedge(x, y), None)
    for q in scalars:
        for x in X:
            out.setdefault(scale(q, x), None)
    return list(out)


def random_element(rng: random.Random, d: int, bound: int = 8, den: int = 16) -> RieszElement:
    return RieszElement(tuple(Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den)) for _ in range(d)))


def family_text(family: Mapping[RieszElement, IdealTruncation]) -> str:
    """Truncations keyed by element text: ``element=<x>`` then the truncation."""
    chunks = []
    for x, t in family.items():
        chunks.append(f"element={x}\n{t.to_text()}")
    return "".join(chunks)
