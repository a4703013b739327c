"""Rational sequences, regularity and moduli of convergence.

Sequences are 1-indexed callables ``n -> Fraction``.  Statements quantified
over all indices are checked on finite prefixes, so a passing check is a
necessary condition only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from signedbit.dyadic import parse_rational

RationalSequence = Callable[[int], Fraction]
Modulus = Callable[[int], int]
# ConvergenceWitness: eps -> k with |p_n - r| <= eps for all n >= k
ConvergenceWitness = Callable[[Fraction], int]


class ContractViolation(ValueError):
    """An input broke the documented contract of an operation."""


def check_regular(q: RationalSequence, N: int) -> bool:
    """``|q(m) - q(n)| <= 1/m + 1/n`` for all ``1 <= m, n <= N``."""
    terms = [Fraction(q(i)) for i in range(1, N + 1)]
    for m in range(1, N + 1):
        qm = terms[m - 1]
        for n in range(m + 1, N + 1):
            if abs(qm - terms[n - 1]) > Fraction(1, m) + Fraction(1, n):
                return False
    return True


def check_modulus(q: RationalSequence, mu: Modulus, I: int, N: int) -> bool:
    """Cauchy form of the modulus condition, on ``i, j <= I`` and indices ``<= N``.

    For every ``i, j <= I``, ``m`` in ``[mu(i), N]`` and ``n`` in ``[mu(j), N]``:
    ``|q(m) - q(n)| <= 1/i + 1/j``.
    """
    terms = {n: Fraction(q(n)) for n in range(1, N + 1)}
    mus = {i: mu(i) for i in range(1, I + 1)}
    for i in range(1, I + 1):
        lo_i = max(mus[i], 1)
        if lo_i > N:
            continue
        tail_i = [terms[m] for m in range(lo_i, N + 1)]
        hi_i, lo_val_i = max(tail_i), min(tail_i)
        for j in range(i, I + 1):
            lo_j = max(mus[j], 1)
            if lo_j > N:
                continue
            tail_j = [terms[n] for n in range(lo_j, N + 1)]
            # the largest |q(m) - q(n)| over both tails
            spread = max(hi_i - min(tail_j), max(tail_j) - lo_val_i)
            if spread > Fraction(1, i) + Fraction(1, j):
                return False
    return True


def check_limit_modulus(q: RationalSequence, mu: Modulus, r: Fraction, I: int, N: int) -> bool:
    """Limit form: ``|q(m) - r| <= 1/i`` for ``i <= I`` and ``mu(i) <= m <= N``."""
    r = Fraction(r)
    for i in range(1, I + 1):
        for m in range(max(mu(i), 1), N + 1):
            if abs(Fraction(q(m)) - r) > Fraction(1, i):
                return False
    return True


def compute_modulus(
    p: RationalSequence,
    q: RationalSequence,
    K: ConvergenceWitness,
    m: int,
) -> int:
    """Modulus of convergence of ``p`` at ``m``, given a regular ``q`` with the
    same limit and a convergence witness ``K`` for ``p``.

    With ``k = K(1/(6m))`` the result is the least ``mu <= k`` such that
    ``|p(n) - q(3m)| <= 1/(2m)`` for every ``n`` in ``[mu, k]``.  Then
    ``|p(n) - r| <= 1/m`` for all ``n >= mu``, and any larger valid ``k``
    gives the same answer.
    """
    if m < 1:
        raise ContractViolation("m must be a positive integer")
    k = K(Fraction(1, 6 * m))
    if k < 1:
        raise ContractViolation(f"witness returned k={k} < 1")
    target = Fraction(q(3 * m))
    bound = Fraction(1, 2 * m)
    if abs(Fraction(p(k)) - target) > bound:
        raise ContractViolation(
            f"|p({k}) - q({3 * m})| > 1/{2 * m}: the witness is invalid or p does not converge to the limit of q"
        )
    mu = k
    while mu > 1 and abs(Fraction(p(mu - 1)) - target) <= bound:
        mu -= 1
    return mu


def modulus_from(p, q, K) -> Modulus:
    """The whole modulus ``m -> compute_modulus(p, q, K, m)``."""
    return lambda m: compute_modulus(p, q, K, m)


def regularize(q: RationalSequence, mu: Modulus) -> RationalSequence:
    """``m -> q(mu(m))``."""
    return lambda m: q(mu(m))


def approx_numerators(r, n: int) -> set[int]:
    """``{m : |r - m/n| <= 1/n}``; nonempty, of diameter at most 2."""
    if n < 1:
        raise ValueError("n must be positive")
    r = Fraction(r)
    # |r n - m| <= 1
    t = r * n
    lo = (t - 1).__ceil__()
    hi = (t + 1).__floor__()
    return set(range(lo, hi + 1))


def from_terms(terms: Sequence[Fraction]) -> RationalSequence:
    """A finite sequence as a 1-indexed callable; out of range is an error."""

    def term(n: int) -> Fraction:
        if not 1 <= n <= len(terms):
            raise ContractViolation(f"index {n} outside the sequence (length {len(terms)})")
        return terms[n - 1]

    return term


def read_sequence(path) -> list[Fraction]:
    """Read one rational per line; line ``n`` holds term ``n``."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                raise ValueError(f"{path}:{lineno}: empty line")
            try:
                out.append(parse_rational(text))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return out


def write_sequence(terms, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in terms:
            t = Fraction(t)
            fh.write(f"{t.numerator}/{t.denominator}\n")
