"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 contract violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from signedbit import expr as expr_mod
from signedbit.dyadic import format_rational, parse_rational, pow2
from signedbit.ideals import (
    C,
    O,
    IdealTruncation,
    Membership,
    cauchy_check,
    cauchy_from_sequence,
    check_c_properties,
    is_unblocked,
    sort_nodes,
    stream_slice,
    truncate_ideal,
)
from signedbit.riesz import (
    chi_member,
    closure_for_probes,
    family_text,
    induced_family,
    random_element,
    random_selection,
    reconstruct_hom,
)
from signedbit.sequences import (
    ContractViolation,
    check_regular,
    compute_modulus,
    from_terms,
    read_sequence,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONTRACT = 2

OP_BUDGET = """\
error budget of 'eval' (the printed midpoint is within 2^-(N-e) of the exact value):
  literal      e = 0   greedy expansion, |value - m_N| <= 2^-N
  -x           e = 0   digit-wise negation
  x+y, x-y     e = 0   oracle k -> m_{k+1}(x) + m_{k+1}(y)
  x*y          e = 0   oracle at k + 2 + ceil(log2(Bx + By + 1))
  min, max     e = 0   oracle k -> min/max of m_k
  avg          e = 0   sum, then exact halving by re-indexing
every composed stream keeps |value - m_N| <= 2^-N, so budgets do not add up.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def cmd_eval(args, out) -> int:
    tree = expr_mod.parse(args.expr)
    x = expr_mod.to_stream(tree)
    n = args.bits
    mid = x.approx(n)
    if args.json:
        payload = {
            "start": x.start,
            "digits": x.to_text(n).splitlines()[1],
            "depth": n,
            "midpoint": format_rational(mid),
            "error_bound": format_rational(pow2(-n)),
        }
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(x.to_text(n))
        out.write(f"midpoint={format_rational(mid)}\n")
    return EXIT_OK


def _truncation_for(kind: str, text: str, depth: int, bits) -> tuple:
    """Exact truncation for a rational literal, stream-backed otherwise."""
    try:
        r = parse_rational(text)
    except ValueError:
        r = None
    if r is not None:
        return truncate_ideal(kind, r, 1, depth), None
    x = expr_mod.to_stream(expr_mod.parse(text))
    precision = bits if bits is not None else depth + 8
    rows = {}
    for l in range(1, depth + 1):
        rows.update(stream_slice(x, l, precision, closed=(kind == C)))
    return None, (precision, rows)


def _write_stream_truncation(kind, text, depth, precision, rows, out):
    out.write(f"kind={kind} expr={text.strip()} levels=1..{depth} precision={precision}\n")
    for node in sort_nodes(rows):
        mark = "" if rows[node] is Membership.IN else "?"
        out.write(f"{node}{mark}\n")


def _truncation_json(t: IdealTruncation) -> dict:
    return {
        "kind": t.kind,
        "r": format_rational(t.r),
        "levels": [t.l0, t.l1],
        "nodes": [str(n) for n in sort_nodes(t.nodes)],
    }


def cmd_oideal(args, out) -> int:
    t, streamed = _truncation_for(O, args.r, args.depth, args.bits)
    if streamed:
        _write_stream_truncation(O, args.r, args.depth, *streamed, out)
    elif args.json:
        out.write(json.dumps(_truncation_json(t), sort_keys=True) + "\n")
    else:
        out.write(t.to_text())
    return EXIT_OK


def cmd_cideal(args, out) -> int:
    t, streamed = _truncation_for(C, args.r, args.depth, args.bits)
    if streamed:
        if args.check:
            raise UsageError("--check needs an exact rational")
        _write_stream_truncation(C, args.r, args.depth, *streamed, out)
        return EXIT_OK
    bound = args.chain_depth if args.chain_depth is not None else max(1, args.depth // 2)
    report = check_c_properties(t, bound) if args.check else None
    if args.json:
        payload = _truncation_json(t)
        if report:
            payload["check"] = report.lines()
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(t.to_text())
        if report:
            out.write("\n".join(report.lines()) + "\n")
    if report and not report.ok:
        return EXIT_CONTRACT
    return EXIT_OK


def cmd_cauchy(args, out) -> int:
    terms = read_sequence(args.file)
    if args.depth > len(terms):
        raise ContractViolation(f"depth {args.depth} exceeds the sequence length {len(terms)}")
    S = cauchy_from_sequence(from_terms(terms), args.depth)
    ok = cauchy_check(S)
    unblocked = is_unblocked(S)
    if args.json:
        payload = {
            "levels": [S.min_level, S.max_level],
            "nodes": [str(n) for n in sort_nodes(S.nodes)],
            "cauchy_check": ok,
            "unblocked": unblocked,
        }
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(S.to_text())
        out.write(f"cauchy_check: {'PASS' if ok else 'FAIL'}\n")
        out.write(f"unblocked: {'PASS' if unblocked else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_CONTRACT


def cmd_modulus(args, out) -> int:
    p_terms = read_sequence(args.p)
    q_terms = read_sequence(args.q)
    p, q = from_terms(p_terms), from_terms(q_terms)
    m, k = args.m, args.witness
    if 3 * m > len(q_terms):
        raise ContractViolation(f"q needs at least {3 * m} terms")
    if k > len(p_terms):
        raise ContractViolation(f"witness {k} exceeds the length of p ({len(p_terms)})")
    if not check_regular(q, len(q_terms)):
        raise ContractViolation("q is not regular on its prefix")
    mu = compute_modulus(p, q, lambda eps: k, m)
    target = q(3 * m)
    bound = Fraction(1, 2 * m)
    verified = all(abs(p(n) - target) <= bound for n in range(mu, k + 1))
    if args.json:
        payload = {"m": m, "mu": mu, "witness": k, "q_3m": format_rational(target),
                   "verified": verified}
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(f"mu={mu}\n")
        out.write(f"q_regular: PASS (n <= {len(q_terms)})\n")
        out.write(
            f"verify: |p(n) - q({3 * m})| <= {format_rational(bound)} for n in [{mu}, {k}]: "
            f"{'PASS' if verified else 'FAIL'}\n"
        )
    return EXIT_OK if verified else EXIT_CONTRACT


def cmd_riesz_demo(args, out) -> int:
    d, j = args.dim, args.coord
    if not 1 <= j <= d:
        raise UsageError(f"--coord must be between 1 and {d}")
    rng = random.Random(args.seed)
    X = [random_element(rng, d, bound=4, den=8) for _ in range(args.elements)]
    probes = [(X[i], X[(i + 1) % len(X)]) for i in range(len(X))]
    scalars = [Fraction(3), Fraction(-1, 2)]
    elems = closure_for_probes(X, probes, scalars)
    family = induced_family(j, elems, args.depth)
    sample = random_selection({x: family[x] for x in X}, rng)
    eps = args.epsilon
    report = reconstruct_hom(family, probes, eps, scalars)
    if args.json:
        payload = {
            "family": {str(x): [str(n) for n in sort_nodes(t.nodes)] for x, t in family.items()},
            "sample": {str(x): str(n) for x, n in sample.items()},
            "sample_member": chi_member(sample),
            "report": report.lines(),
        }
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(family_text(family))
        out.write("sample:\n")
        for x, node in sample.items():
            out.write(f"  {x} -> {node}\n")
        out.write(f"chi_member: {'PASS' if chi_member(sample) else 'FAIL'}\n")
        out.write("\n".join(report.lines()) + "\n")
    return EXIT_OK if report.ok and chi_member(sample) else EXIT_CONTRACT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="signedbit",
        description="Signed-bit reals on the ternary pseudotree.",
        epilog=OP_BUDGET,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate an expression to N signed bits",
                       epilog=OP_BUDGET, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("expr")
    p.add_argument("--bits", type=_positive, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    for name, func, helptext in (("oideal", cmd_oideal, "truncated o-ideal O_r on levels 1..D"),
                                 ("cideal", cmd_cideal, "truncated c-ideal C_r on levels 1..D")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("r", help="a rational <num>/<den>, or an expression (stream-backed)")
        p.add_argument("--depth", type=_positive, required=True)
        p.add_argument("--bits", type=_positive, default=None,
                       help="precision for stream-backed membership (default depth+8)")
        p.add_argument("--json", action="store_true")
        if name == "cideal":
            p.add_argument("--check", action="store_true", help="run the c-ideal property checks")
            p.add_argument("--chain-depth", type=_positive, default=None,
                           help="bound for the endpoint-chain property (default depth//2)")
        p.set_defaults(func=func)

    p = sub.add_parser("cauchy-from-seq", help="Cauchy subset generated by a sequence file")
    p.add_argument("file")
    p.add_argument("--depth", type=_positive, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cauchy)

    p = sub.add_parser("modulus", help="modulus of convergence of p at m")
    p.add_argument("--p", required=True, help="sequence file for p")
    p.add_argument("--q", required=True, help="sequence file for a regular q with the same limit")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--witness", type=_positive, required=True,
                   help="index k with |p(n) - r| <= 1/(6m) for all n >= k")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_modulus)

    p = sub.add_parser("riesz-demo", help="o-ideal family of a coordinate projection in Q^d")
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--coord", type=_positive, required=True)
    p.add_argument("--depth", type=_positive, required=True)
    p.add_argument("--elements", type=_positive, default=3)
    p.add_argument("--epsilon", type=_rational_arg, default=Fraction(1, 1024))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_riesz_demo)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except expr_mod.ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ContractViolation as exc:
        sys.stderr.write(f"contract violation: {exc}\n")
        return EXIT_CONTRACT
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
