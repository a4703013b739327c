import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from signedbit.dyadic import Node, pow2
from signedbit.riesz import (
    DimensionError,
    RieszElement,
    abs_val,
    chi_member,
    closure_for_probes,
    elem_in_interval,
    extendible_check,
    induced_family,
    neg_part,
    pos,
    pos_part,
    random_element,
    random_selection,
    reconstruct_hom,
    scale,
    seminorm,
    signed_bit_representation,
    vee,
    wedge,
    well_formed_check,
)

coords = st.fractions(min_value=-10, max_value=10, max_denominator=20)
elems = st.lists(coords, min_size=3, max_size=3).map(lambda c: RieszElement(tuple(c)))

E = RieszElement.of


def test_lattice_ops_pointwise():
    a, b = E(1, -2, F(1, 2)), E(0, 3, -1)
    assert vee(a, b) == E(1, 3, F(1, 2))
    assert wedge(a, b) == E(0, -2, -1)
    assert pos_part(a) == E(1, 0, F(1, 2))
    assert neg_part(a) == E(0, 2, 0)
    assert abs_val(a) == E(1, 2, F(1, 2))
    assert scale(F(-2), a) == E(-2, 4, -1)
    assert seminorm(a) == 2
    assert str(a) == "[1/1,-2/1,1/2]"
    assert RieszElement.parse(str(a)) == a


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        E(1, 2) + E(1, 2, 3)


def test_pos():
    assert pos(E(-1, F(1, 100), -5))
    assert not pos(E(0, 0, 0))
    assert not pos(E(-1, -2))


@given(elems, elems)
def test_riesz_identities(a, b):
    assert a + b == vee(a, b) + wedge(a, b)
    assert pos_part(a) - neg_part(a) == a
    assert wedge(wedge(a, b), -(a + b)) <= RieszElement.const(0, 3)


@given(elems)
def test_elem_in_interval_detects_coordinates(a):
    # Pos(a in I) iff some coordinate of a lies in the open interval I
    for node in (Node(-1, 0), Node(0, 1), Node(3, 2)):
        inside = any(node.left < c < node.right for c in a.coords)
        assert pos(elem_in_interval(a, node)) == inside


def test_chi_member_examples():
    x, y = E(F(1, 3), 2), E(F(1, 3), -2)
    assert chi_member({})
    assert chi_member({x: Node(0, 1)})
    # first coordinate works for both
    assert chi_member({x: Node(0, 1), y: Node(0, 1)})
    # x via coordinate 2, y via coordinate 1: no common coordinate
    assert not chi_member({x: Node(3, 1), y: Node(0, 1)})


def test_signed_bit_representation_is_well_formed():
    X = [E(0, 1), E(1, 0)]
    chi = signed_bit_representation(X, 0, 2)
    assert frozenset() in chi
    assert well_formed_check(chi, X)
    pair = next(c for c in chi if len(c) == 2)
    single = frozenset(list(pair)[:1])
    assert single in chi
    assert not well_formed_check(chi - {single}, X)
    assert not well_formed_check(chi, X + [E(5, 5)])


def test_extendible():
    X = [E(F(1, 3), 2), E(F(1, 3), -2)]
    x, y = X
    J = extendible_check(chi_member, {x: Node(0, 1)}, y, 4)
    assert J is not None and J[y].n == 4 and chi_member(J)
    # x only via coordinate 2, y confined to (0,1): no shared coordinate
    assert extendible_check(chi_member, {x: Node(3, 1), y: Node(0, 1)}, y, 3) is None


def test_induced_family_and_reconstruction():
    rng = random.Random(3)
    X = [random_element(rng, 3) for _ in range(4)]
    probes = [(X[0], X[1]), (X[2], X[3])]
    elems = closure_for_probes(X, probes, [F(3)])
    for j in (1, 2, 3):
        family = induced_family(j, elems, 16)
        for _ in range(10):
            assert chi_member(random_selection(family, rng))
        report = reconstruct_hom(family, probes, pow2(-10), [F(3)])
        assert report.ok, report.lines()
        assert {c.law for c in report.checks} == {"unit", "additivity", "wedge", "scale"}
    with pytest.raises(DimensionError):
        induced_family(4, elems, 5)


def test_reconstruction_precondition():
    X = [E(1, 2)]
    report = reconstruct_hom(induced_family(1, X, 8), [], pow2(-10))
    assert not report.precondition and not report.ok
