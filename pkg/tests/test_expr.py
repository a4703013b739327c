from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signedbit.dyadic import pow2
from signedbit.expr import Add, Call, Lit, Mul, Neg, ParseError, exact_value, parse, to_stream


def test_precedence():
    assert parse("1+2*3") == Add(Lit(F(1)), Mul(Lit(F(2)), Lit(F(3))))
    assert exact_value(parse("(1+2)*3")) == 9
    assert exact_value(parse("1-2-3")) == -4
    assert exact_value(parse("--1/2")) == F(1, 2)
    assert parse("-1/2") == Neg(Lit(F(1, 2)))


def test_functions():
    assert parse("min(1/3, 1/4)") == Call("min", Lit(F(1, 3)), Lit(F(1, 4)))
    assert exact_value(parse("avg(1, max(2, 3))")) == 2


@pytest.mark.parametrize("text, offset", [
    ("1//3", 2),
    ("1/0", 2),
    ("foo(1,2)", 0),
    ("(1+2", 0),
    ("1+2)", 3),
    ("1+", 2),
    ("min(1)", 5),
])
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


exprs = st.recursive(
    st.fractions(min_value=-4, max_value=4, max_denominator=50).map(
        lambda q: f"{q.numerator}/{q.denominator}" if q >= 0 else f"-{-q.numerator}/{q.denominator}"),
    lambda inner: st.one_of(
        st.tuples(inner, st.sampled_from("+-*"), inner).map(lambda t: f"({t[0]}{t[1]}{t[2]})"),
        st.tuples(st.sampled_from(["min", "max", "avg"]), inner, inner).map(lambda t: f"{t[0]}({t[1]},{t[2]})"),
    ),
    max_leaves=5,
)


@settings(max_examples=40, deadline=None)
@given(exprs)
def test_stream_matches_exact(text):
    e = parse(text)
    assert abs(to_stream(e).approx(30) - exact_value(e)) <= pow2(-30)
