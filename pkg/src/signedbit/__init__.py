"""Signed-bit reals on the ternary pseudotree of dyadic intervals."""

from signedbit.dyadic import Node, parse_rational, format_rational
from signedbit.streams import SignedBitNumber, from_rational, from_oracle

__all__ = [
    "Node",
    "SignedBitNumber",
    "format_rational",
    "from_oracle",
    "from_rational",
    "parse_rational",
]

__version__ = "0.1.0"
