"""Command line entry point: ``cdtwist <subcommand> ...``.

Exit status is 0 on success, 1 when a computation or verification fails and
2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from . import atlas, bench, treewalk, verify
from .cdcore import MAX_INDEX, ProductVariant, basis_mul, omega
from .elements import ElementParseError, format_element, mul_doubling, mul_twist, parse_element


def _index(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a non-negative integer: {text!r}") from None
    if not 0 <= value <= MAX_INDEX:
        raise argparse.ArgumentTypeError(f"index {value} outside [0, 2**63)")
    return value


def _variant(text: str) -> ProductVariant:
    try:
        return ProductVariant.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bounded(lo: int, hi: int):
    def parse(text):
        try:
            value = int(text, 10)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if not lo <= value <= hi:
            raise argparse.ArgumentTypeError(f"{value} outside {lo}..{hi}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdtwist", description="Cayley-Dickson basis products and twist signs.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def variant_flag(p):
        p.add_argument("--variant", "-v", type=_variant, default=ProductVariant.P2,
                       help="doubling product P0..P3 or T0..T3 (default P2)")

    p = sub.add_parser("basis-mul", help="product of two basis vectors, e.g. 87 340 -> -e259")
    p.add_argument("p", type=_index)
    p.add_argument("q", type=_index)
    variant_flag(p)

    p = sub.add_parser("mul", help="product of two elements such as '3*e0 - 1/2*e5'")
    p.add_argument("x")
    p.add_argument("y")
    variant_flag(p)
    p.add_argument("--strategy", choices=("twist", "doubling"),
                   help="twist (P2 only) or recursive doubling; default twist for P2")

    p = sub.add_parser("omega", help="twist sign omega(p, q)")
    p.add_argument("p", type=_index)
    p.add_argument("q", type=_index)
    variant_flag(p)

    p = sub.add_parser("tree", help="walk the omega2 tree: 'tree P Q [--trace]' or 'tree dump'")
    p.add_argument("args", nargs="+", metavar="P Q | dump")
    p.add_argument("--trace", action="store_true", help="also print the visited states")

    p = sub.add_parser("atlas", help="render a twist sign table")
    p.add_argument("n", type=_bounded(1, atlas.MAX_TABLE_EXP), help="table is 2**n by 2**n")
    variant_flag(p)
    p.add_argument("--format", choices=("pgm", "txt"), default="pgm")
    p.add_argument("--out", help="output path (default omega_<variant>_<n>.<format>)")
    p.add_argument("--sums", help="record the digest in this atlas.sums manifest")

    p = sub.add_parser("bench", help="closed form vs recursive doubling timings")
    p.add_argument("kind", choices=("basis", "elements"))
    p.add_argument("--max-exp", type=_bounded(1, 20), default=16, help="basis: index bound 2**max_exp")
    p.add_argument("--exp", type=_bounded(0, 14), default=10, help="elements: index bound 2**exp")
    p.add_argument("--terms", type=_bounded(1, 1 << 14), default=4)
    p.add_argument("--samples", type=_bounded(1, 10**7), default=10_000)
    p.add_argument("--seed", type=int, help="default from CDTWIST_SEED or a fixed constant")
    p.add_argument("--workers", type=_bounded(1, 256), default=1)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--max-exp", type=_bounded(1, 10), default=8)
    return parser


def _cmd_mul(args, parser):
    try:
        x = parse_element(args.x)
        y = parse_element(args.y)
    except ElementParseError as exc:
        parser.error(str(exc))
    strategy = args.strategy or ("twist" if args.variant is ProductVariant.P2 else "doubling")
    if strategy == "twist" and args.variant is not ProductVariant.P2:
        parser.error(f"--strategy twist only implements P2, not {args.variant.value}")
    z = mul_twist(x, y) if strategy == "twist" else mul_doubling(args.variant, x, y)
    print(format_element(z))
    return 0


def _cmd_tree(args, parser):
    a = treewalk.default_automaton()
    if args.args == ["dump"]:
        sys.stdout.write(a.dumps())
        return 0
    if len(args.args) != 2:
        parser.error("tree expects P Q or 'dump'")
    try:
        p, q = (_index(t) for t in args.args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    path = treewalk.trace(p, q, a)
    print(f"{a.sign(path[-1]):+d}")
    if args.trace:
        print("doublets: " + ",".join(treewalk.interleave_bits(p, q)))
        print("states: " + ",".join(path))
    return 0


def _cmd_atlas(args):
    table = atlas.build_table(args.variant, args.n)
    out = args.out or f"omega_{args.variant.value}_{args.n}.{args.format}"
    try:
        atlas.write_table(table, out, args.format)
    except OSError as exc:
        print(f"cdtwist: cannot write {out}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    digest = atlas.table_checksum(table)
    if args.sums:
        try:
            try:
                sums = atlas.read_sums(args.sums)
            except FileNotFoundError:
                sums = {}
            sums[args.variant.value, args.n] = digest
            with open(args.sums, "w") as fh:
                fh.write(atlas.format_sums(sums))
        except OSError as exc:
            print(f"cdtwist: cannot update {args.sums}: {exc.strerror or exc}", file=sys.stderr)
            return 1
    print(f"{args.variant.value} {args.n} {digest}")
    return 0


def _cmd_bench(args):
    try:
        if args.kind == "basis":
            report = bench.bench_basis_products(args.max_exp, args.samples, args.seed, args.workers)
        else:
            report = bench.bench_element_mul(args.exp, args.terms, args.samples, args.seed, args.workers)
    except bench.VerificationError as exc:
        print(f"cdtwist: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(report.to_json() + "\n" if args.json else report.to_text())
    return 0


def _cmd_verify(args):
    results = verify.run_all(args.max_exp)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "ok" if r.ok else "FAIL"
        print(f"{r.name:<{width}}  {status:<4}  {r.checked:>9} checked")
    failed = [r for r in results if not r.ok]
    if failed:
        print(f"counterexample: {failed[0].counterexample}")
        return 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "basis-mul":
        print(basis_mul(args.variant, args.p, args.q))
        return 0
    if args.command == "mul":
        return _cmd_mul(args, parser)
    if args.command == "omega":
        print(f"{omega(args.variant, args.p, args.q):+d}")
        return 0
    if args.command == "tree":
        return _cmd_tree(args, parser)
    if args.command == "atlas":
        return _cmd_atlas(args)
    if args.command == "bench":
        return _cmd_bench(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
