"""Expressions over signed-bit reals.

Grammar (standard precedence, left-associative binary operators)::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | atom
    atom    := RATIONAL | NAME '(' expr ',' expr ')' | '(' expr ')'
    RATIONAL:= DIGITS ('/' DIGITS)?       (no spaces inside)
    NAME    := 'min' | 'max' | 'avg'

There is no division operator: ``1/3`` is a single literal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from signedbit import arithmetic
from signedbit.streams import SignedBitNumber, from_rational

FUNCTIONS = ("min", "max", "avg")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


@dataclass(frozen=True)
class Lit:
    value: Fraction


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    left: "Expr"
    right: "Expr"


Expr = Union[Lit, Neg, Add, Sub, Mul, Call]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def parse(self) -> Expr:
        node = self.expr()
        if self.peek():
            ch = self.peek()
            if ch == ")":
                raise ParseError("unbalanced ')'", self.pos)
            raise ParseError(f"unexpected {ch!r}", self.pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek() == "*":
            self.pos += 1
            node = Mul(node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.peek() == "-":
            self.pos += 1
            return Neg(self.unary())
        return self.atom()

    def digits(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]

    def atom(self) -> Expr:
        ch = self.peek()
        if ch.isdigit():
            num = self.digits()
            den = "1"
            if self.pos < len(self.text) and self.text[self.pos] == "/":
                self.pos += 1
                den = self.digits()
                if not den:
                    raise ParseError("malformed rational: expected denominator digits", self.pos)
                if int(den) == 0:
                    raise ParseError("malformed rational: zero denominator", self.pos - len(den))
            return Lit(Fraction(int(num), int(den)))
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in FUNCTIONS:
                raise ParseError(f"unknown identifier {name!r}", start)
            self.expect("(")
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(")")
            return Call(name, left, right)
        if ch == "(":
            open_at = self.pos
            self.pos += 1
            node = self.expr()
            if self.peek() != ")":
                raise ParseError("unbalanced '('", open_at)
            self.pos += 1
            return node
        if not ch:
            raise ParseError("unexpected end of input", self.pos)
        raise ParseError(f"unexpected {ch!r}", self.pos)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


def to_stream(e: Expr) -> SignedBitNumber:
    if isinstance(e, Lit):
        return from_rational(e.value)
    if isinstance(e, Neg):
        return arithmetic.negate(to_stream(e.arg))
    if isinstance(e, Add):
        return arithmetic.add(to_stream(e.left), to_stream(e.right))
    if isinstance(e, Sub):
        return arithmetic.sub(to_stream(e.left), to_stream(e.right))
    if isinstance(e, Mul):
        return arithmetic.mul(to_stream(e.left), to_stream(e.right))
    if isinstance(e, Call):
        op = {"min": arithmetic.min_sb, "max": arithmetic.max_sb, "avg": arithmetic.avg}[e.name]
        return op(to_stream(e.left), to_stream(e.right))
    raise TypeError(f"not an expression: {e!r}")


def exact_value(e: Expr) -> Fraction:
    """Evaluate with exact rationals (the reference for stream evaluation)."""
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Neg):
        return -exact_value(e.arg)
    if isinstance(e, Add):
        return exact_value(e.left) + exact_value(e.right)
    if isinstance(e, Sub):
        return exact_value(e.left) - exact_value(e.right)
    if isinstance(e, Mul):
        return exact_value(e.left) * exact_value(e.right)
    if isinstance(e, Call):
        a, b = exact_value(e.left), exact_value(e.right)
        return {"min": min, "max": max, "avg": lambda u, v: (u + v) / 2}[e.name](a, b)
    raise TypeError(f"not an expression: {e!r}")
