"""Command line: ``cartlabel {gen,encode,query,verify,stats,bench}``.

Exit codes: 0 ok, 1 decode/oracle mismatch or failed build, 2 usage error,
3 unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as cio
from .base import SCHEMES
from .exceptions import BuildError, FormatError, SizeBudgetError, ValidationError
from .graph import gen_dense_monotone, gen_grid, gen_hamming, gen_hypercube, gen_random_sub
from .labeler import DEFAULT_SEED, decode, encode, label_stats
from .sketch import DEFAULT_VERIFY_CAP
from .validation import check_seed
from .verify import bench_sizes, reports_to_csv, verify_all_pairs

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_FORMAT = 0, 1, 2, 3
FAMILIES = ("hypercube", "hamming", "grid", "random-sub", "dense-monotone")


class UsageError(Exception):
    pass


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dims(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise UsageError(f"bad list {text!r}") from None


def _base_instance(family: str, args):
    if family == "hypercube":
        return gen_hypercube(_need(args.d, "--d"))
    if family == "hamming":
        return gen_hamming(_need(args.d, "--d"), args.a)
    if family == "grid":
        return gen_grid(_dims(_need(args.dims, "--dims")))
    raise UsageError(f"unknown family {family!r}")


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this family")
    return value


def cmd_gen(args) -> int:
    if args.family == "random-sub":
        base = cio.read_instance(args.instance) if args.instance else _base_instance(args.base, args)
        inst = gen_random_sub(base, args.density, check_seed(args.seed))
    elif args.family == "dense-monotone":
        inst = gen_dense_monotone(cio.read_graph(_need(args.gprime, "--gprime")), _need(args.n, "--n"))
    else:
        inst = _base_instance(args.family, args)
    _emit(cio.format_instance(inst), args.out)
    return EXIT_OK


def cmd_encode(args) -> int:
    inst = cio.read_instance(args.instance)
    mode = args.mode or ("induced" if inst.induced else "subgraph")
    if mode == "subgraph" and inst.induced:
        raise UsageError("an induced instance has no explicit edges to encode in subgraph mode")
    if mode == "induced" and not inst.induced:
        inst = inst.as_induced()
    desc, labels = encode(
        inst, mode, scheme=args.base, seed=check_seed(args.seed), q_mode=args.q_mode, verify_cap=args.cap
    )
    report = verify_all_pairs(inst, desc, labels, cap=args.cap)
    if not report.passed:
        print(f"encode: internal verification failed on {len(report.mismatches)} pairs", file=sys.stderr)
        return EXIT_MISMATCH
    _emit(cio.format_labels(desc, labels), args.out)
    return EXIT_OK


def cmd_query(args) -> int:
    with open(args.labels) as fh:
        try:
            desc, lx, ly = cio.read_query_labels(fh, args.x, args.y)
        except KeyError as exc:
            print(f"query: no label for vertex {exc.args[0]}", file=sys.stderr)
            return EXIT_USAGE
    print("adjacent" if decode(desc, lx, ly) else "not-adjacent")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = cio.read_instance(args.instance)
    desc, labels = cio.read_labels(args.labels)
    if desc.mode == "induced" and not inst.induced:
        inst = inst.as_induced()
    if len(labels) != inst.n:
        raise FormatError(f"label file has {len(labels)} vertices, instance has {inst.n}")
    report = verify_all_pairs(inst, desc, labels, cap=args.cap)
    print(
        f"pairs_checked {report.pairs_checked} mismatches {len(report.mismatches)} "
        f"sampled {int(report.sampled)} phase1_tries {report.retries['phase1']} "
        f"lift_tries {report.retries['lift']} seconds {report.wall_time:.3f}"
    )
    for x, y, expected, got in report.mismatches[:50]:
        print(f"mismatch {x} {y} expected {int(expected)} got {'error' if got is None else int(got)}")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_stats(args) -> int:
    desc, labels = cio.read_labels(args.labels)
    st = label_stats(desc, labels)
    if args.json:
        print(json.dumps(st, indent=2))
    else:
        for key, value in st.items():
            print(f"{key} {value:.3f}" if isinstance(value, float) else f"{key} {value}")
    return EXIT_OK


def cmd_bench(args) -> int:
    reports = bench_sizes(
        args.family,
        _dims(args.n),
        tuple(m for m in args.modes.split(",") if m),
        seed=check_seed(args.seed),
        q_mode=args.q_mode,
        density=args.density,
        base=args.base,
    )
    _emit(reports_to_csv(reports), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", default=f"{DEFAULT_SEED:016x}", help="master seed, hex")
    common.add_argument("--cap", type=int, default=DEFAULT_VERIFY_CAP, help="exhaustive verification cap")
    encoding = argparse.ArgumentParser(add_help=False)
    encoding.add_argument("--q-mode", choices=("paper", "adaptive"), default="paper")

    parser = argparse.ArgumentParser(prog="cartlabel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="write a product instance (.cpi)")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--d", type=int)
    p.add_argument("--a", type=int, default=3, help="alphabet size for hamming")
    p.add_argument("--dims", help="comma-separated grid side lengths")
    p.add_argument("--base", choices=("hypercube", "hamming", "grid"), default="hypercube",
                   help="base family for random-sub")
    p.add_argument("--instance", help="base instance file for random-sub")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--gprime", help=".gr file of the seed graph for dense-monotone")
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", parents=[common, encoding], help="label an instance (.lbl)")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("induced", "subgraph"))
    p.add_argument("--base", choices=("auto",) + SCHEMES, default="auto")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("query", help="decode adjacency of two vertices")
    p.add_argument("labels")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", parents=[common], help="check labels against the instance")
    p.add_argument("instance")
    p.add_argument("labels")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="label size breakdown")
    p.add_argument("labels")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", parents=[common, encoding], help="size benchmark as CSV")
    p.add_argument("--family", choices=("hypercube", "hamming", "grid"), default="hypercube")
    p.add_argument("--n", default="256,512,1024", help="comma-separated vertex counts")
    p.add_argument("--modes", default="induced")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--base", choices=SCHEMES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SizeBudgetError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, OSError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except BuildError as exc:
        print(f"{args.command}: build failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValidationError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
