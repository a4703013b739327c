from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from signedbit.dyadic import (
    LAMBDA,
    MU,
    RHO,
    ROLES,
    Node,
    ceil_log2,
    children,
    contains,
    extreme_descendants,
    format_rational,
    join,
    parents,
    parse_rational,
    right_extreme,
)

nodes = st.builds(Node, st.integers(-64, 64), st.integers(-4, 8))


def interval(node):
    return (node.left, node.right)


def test_children_of_unit_node():
    # (0,1) is the node (0,1) at level 1
    lam, mid, rho = children(Node(0, 1))
    assert [interval(c) for c in (lam, mid, rho)] == [
        (F(0), F(1, 2)), (F(1, 4), F(3, 4)), (F(1, 2), F(1)),
    ]


@pytest.mark.parametrize("node, expected", [
    (Node(-1, 0), [(F(-1), F(0)), (F(-1, 2), F(1, 2)), (F(0), F(1))]),
    (Node(1, 1), [(F(1, 2), F(1)), (F(3, 4), F(5, 4)), (F(1), F(3, 2))]),
])
def test_children_examples(node, expected):
    assert [interval(c) for c in children(node)] == expected


def test_unit_node_level_and_radius():
    node = Node(0, 1)
    assert interval(node) == (F(0), F(1))
    assert node.level == 1 and node.radius == F(1, 2)


def test_parents_examples():
    assert parents(Node(1, 2)) == {(Node(0, 1), MU)}
    # (1/2, 1): right child of (0,1), left child of (1/2, 3/2)
    assert parents(Node(2, 2)) == {(Node(0, 1), RHO), (Node(1, 1), LAMBDA)}
    assert interval(Node(1, 1)) == (F(1, 2), F(3, 2))
    # (0, 1/2)
    assert parents(Node(0, 2)) == {(Node(0, 1), LAMBDA), (Node(-1, 1), RHO)}


def test_contains_examples():
    assert contains(Node(0, 1), Node(1, 2))
    assert contains(Node(0, 1), Node(0, 1))
    assert not contains(Node(0, 1), Node(1, 1))


def test_join_examples():
    assert join(Node(-1, 1), Node(0, 1)) == Node(0, 2)
    assert join(Node(0, 1), Node(0, 1)) == Node(0, 1)
    assert join(Node(-1, 0), Node(0, 0)) == Node(0, 1)
    assert join(Node(-2, 0), Node(0, 0)) is None
    assert join(Node(0, 2), Node(1, 2)) == Node(2, 3)
    assert join(Node(0, 2), Node(2, 2)) is None


def test_extreme_descendants():
    assert extreme_descendants(Node(0, 1), 1) == {Node(0, 2), Node(2, 2)}
    two = extreme_descendants(Node(0, 1), 2)
    assert {interval(n) for n in two} >= {(F(0), F(1, 4)), (F(3, 4), F(1))}
    assert len(two) == 4
    # rho^3 of (0,1): midpoints 3/4, 7/8, 15/16
    assert right_extreme(Node(0, 1), 3).midpoint == F(15, 16)
    with pytest.raises(ValueError):
        extreme_descendants(Node(0, 1), 0)


@given(nodes)
def test_children_are_contained_halves(node):
    for c in children(node):
        assert contains(node, c)
        assert c.level == node.level + 1
        assert c.radius == node.radius / 2


@given(nodes)
def test_parents_children_round_trip(node):
    for role in ROLES:
        assert (node, role) in parents(node.child(role))
    for p, role in parents(node):
        assert p.child(role) == node


@given(nodes)
def test_every_superset_one_level_up_is_a_parent(node):
    above = node.n - 1
    supersets = {Node(k, above) for k in range(node.k // 2 - 3, node.k // 2 + 3)
                 if contains(Node(k, above), node)}
    assert supersets == {p for p, _ in parents(node)}


def _brute_join(a, b):
    lo, hi = max(a.left, b.left), min(a.right, b.right)
    if hi <= lo:
        return None
    length = hi - lo
    # try every level that could give this length
    for n in range(-8, 14):
        if Node(0, n).length == length:
            k = lo * 2 ** n if n >= 0 else lo / F(2) ** (-n)
            k = F(k)
            return Node(int(k), n) if k.denominator == 1 else None
    return None


@given(nodes, nodes)
def test_join_matches_interval_intersection(a, b):
    assert join(a, b) == _brute_join(a, b)


@given(nodes, nodes)
def test_join_commutative(a, b):
    assert join(a, b) == join(b, a)


@given(nodes, nodes, nodes)
def test_join_associative_where_defined(a, b, c):
    ab, bc = join(a, b), join(b, c)
    if ab is not None and bc is not None:
        left, right = join(ab, c), join(a, bc)
        if left is not None and right is not None:
            assert left == right


@given(nodes)
def test_join_idempotent(a):
    assert join(a, a) == a


def test_text_forms():
    assert str(Node(-3, 4)) == "(-3,4)"
    assert Node.parse("(-3,4)") == Node(-3, 4)
    assert parse_rational("6/4") == F(3, 2)
    assert format_rational(F(6, 4)) == "3/2"
    assert format_rational(0) == "0/1"
    for bad in ("1//2", "1/0", "a/2", "", "1/-2"):
        with pytest.raises(ValueError):
            parse_rational(bad)


@pytest.mark.parametrize("q, e", [(F(1), 0), (F(3), 2), (F(4), 2), (F(1, 3), -1), (F(1, 4), -2), (F(5, 4), 1)])
def test_ceil_log2(q, e):
    assert ceil_log2(q) == e
