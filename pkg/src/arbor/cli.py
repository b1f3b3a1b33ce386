"""Command-line front end: generate, inspect, solve, verify, benchmark.

Exit codes are the machine contract: 0 = YES/success, 1 = NO/invalid,
2 = usage error, 3 = undecided at the configured oracle cap.  Stdout
carries data (edge lists, JSON, DOT, CSV); stderr carries trace and
diagnostics.
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
import time
from pathlib import Path
from typing import Sequence

from .decomposition import build_cut_decomposition, validate
from .digraph import (
    ContractViolation,
    Digraph,
    ParseError,
    format_edge_list,
    parse_edge_list,
)
from .generators import (
    backward_complete_chain,
    bidirected_cycle,
    dag,
    degenerate_chain,
    gnp,
)
from .render import (
    certificate_to_dot,
    decomposition_to_dot,
    decomposition_to_json,
)
from .solver import (
    Certificate,
    OracleCapExceeded,
    oracle_cap,
    oracle_solve,
    solve,
    verify_certificate,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_UNDECIDED = 3

_BENCH_HEADER = re.compile(r"#\s*solve\s+(\d+)\s+(\d+)\s+(\d+)")


def _read_digraph(path: str, dedup: bool = False) -> Digraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_edge_list(text, dedup=dedup)


# -- gen -----------------------------------------------------------------------


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.model == "gnp":
        d = gnp(args.n, args.p, args.seed)
    elif args.model == "dag":
        d = dag(args.n, args.p, args.seed)
    elif args.model == "paper3":
        d = backward_complete_chain(args.n, close=args.close)
    elif args.model == "degenerate-chain":
        d = degenerate_chain(args.n, extra=args.extra, seed=args.seed)
    else:
        d = bidirected_cycle(args.n)
    sys.stdout.write(format_edge_list(d))
    return EXIT_YES


# -- decompose -----------------------------------------------------------------


def _cmd_decompose(args: argparse.Namespace) -> int:
    d = _read_digraph(args.file)
    try:
        dec = build_cut_decomposition(d, args.root)
    except ContractViolation as exc:
        print(f"decompose: {exc}", file=sys.stderr)
        return EXIT_NO
    problems = validate(dec)
    if args.format == "dot":
        sys.stdout.write(decomposition_to_dot(dec))
    else:
        sys.stdout.write(decomposition_to_json(dec) + "\n")
    if problems:
        for p in problems:
            print(f"violation: {p}", file=sys.stderr)
        print(f"validation: {len(problems)} violations", file=sys.stderr)
        return EXIT_NO
    print("validation: ok", file=sys.stderr)
    return EXIT_YES


# -- solve ---------------------------------------------------------------------


def _cmd_solve(args: argparse.Namespace) -> int:
    d = _read_digraph(args.file)
    mode = args.mode
    if mode == "auto":
        mode = "oracle" if d.n <= oracle_cap() else "fpt"
        print(f"mode: auto -> {mode}", file=sys.stderr)
    if mode == "oracle":
        try:
            answer, cert = oracle_solve(d, args.s, args.t, args.k)
        except OracleCapExceeded as exc:
            print(f"undecided: {exc}", file=sys.stderr)
            return EXIT_UNDECIDED
        branch = "oracle"
        trace: tuple[str, ...] = ("exhaustive search over rooted out-branchings",)
    else:
        res = solve(d, args.s, args.t, args.k)
        answer, cert, trace, branch = res.answer, res.certificate, res.trace, res.branch
    for line in trace:
        print(line, file=sys.stderr)
    print(f"branch: {branch}", file=sys.stderr)
    if answer is None:
        print(
            f"undecided: no structural branch fired and |V| exceeds the "
            f"oracle cap {oracle_cap()}",
            file=sys.stderr,
        )
        return EXIT_UNDECIDED
    if answer:
        if cert is None or not verify_certificate(d, args.s, args.t, args.k, cert):
            raise ContractViolation("YES answer without a verifiable certificate")
        if args.cert:
            Path(args.cert).write_text(cert.to_json() + "\n")
        if args.dot:
            Path(args.dot).write_text(certificate_to_dot(cert, d))
        print(f"YES (distinctness {cert.distinctness})", file=sys.stderr)
        return EXIT_YES
    print("NO", file=sys.stderr)
    return EXIT_NO


# -- verify --------------------------------------------------------------------


def _cmd_verify(args: argparse.Namespace) -> int:
    d = _read_digraph(args.file)
    try:
        cert = Certificate.from_json(Path(args.cert).read_text(), d)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"invalid certificate: {exc}", file=sys.stderr)
        return EXIT_NO
    k = cert.k if args.k is None else args.k
    ok = verify_certificate(d, cert.t_plus.root, cert.t_minus.root, k, cert)
    print("valid" if ok else "invalid")
    return EXIT_YES if ok else EXIT_NO


# -- bench ---------------------------------------------------------------------


def _bench_one(d: Digraph, s: int, t: int, k: int, mode: str) -> tuple[str, str]:
    if mode == "auto":
        mode = "oracle" if d.n <= oracle_cap() else "fpt"
    if mode == "oracle":
        try:
            answer, _ = oracle_solve(d, s, t, k)
        except OracleCapExceeded:
            return "undecided", "cap"
        return ("yes" if answer else "no"), "oracle"
    res = solve(d, s, t, k)
    if res.answer is None:
        return "undecided", res.branch
    return ("yes" if res.answer else "no"), res.branch


def _cmd_bench(args: argparse.Namespace) -> int:
    corpus = Path(args.corpus)
    paths = sorted(corpus.glob("*.edges"))
    if not paths:
        print(f"bench: no *.edges files under {corpus}", file=sys.stderr)
        return EXIT_USAGE
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    unknown = [m for m in modes if m not in ("fpt", "oracle", "auto")]
    if unknown:
        print(f"bench: unknown modes {unknown}", file=sys.stderr)
        return EXIT_USAGE
    writer = csv.writer(sys.stdout)
    writer.writerow(
        ["instance", "mode", "n", "m", "s", "t", "k", "answer", "branch", "seconds"]
    )
    for path in paths:
        text = path.read_text()
        header = _BENCH_HEADER.search(text)
        if header is None:
            print(f"bench: {path.name} lacks a '# solve s t k' line", file=sys.stderr)
            return EXIT_USAGE
        s, t, k = (int(g) for g in header.groups())
        d = parse_edge_list(text)
        for mode in modes:
            start = time.perf_counter()
            answer, branch = _bench_one(d, s, t, k, mode)
            elapsed = time.perf_counter() - start
            writer.writerow(
                [path.name, mode, d.n, d.m, s, t, k, answer, branch, f"{elapsed:.6f}"]
            )
    return EXIT_YES


# -- bench-kernels -------------------------------------------------------------


def _cmd_bench_kernels(args: argparse.Namespace) -> int:
    from ._kernels import load_backend

    backends = []
    for name in ("c", "py"):
        try:
            backends.append((name, load_backend(name)))
        except ImportError:
            print(f"kernel backend {name!r} unavailable, skipping", file=sys.stderr)
    sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    writer = csv.writer(sys.stdout)
    writer.writerow(["kernel", "backend", "n", "m", "seconds"])
    for n in sizes:
        d = gnp(n, min(1.0, 8.0 / n), seed=args.seed)
        indptr, indices = d.csr()
        tails = [u for u, _ in d.arcs]
        heads = [v for _, v in d.arcs]
        weights = [1 + ((u + 2 * v) % 5) for u, v in d.arcs]
        roots = range(min(n, 32))
        reference: dict[str, object] = {}
        for name, mod in backends:
            start = time.perf_counter()
            reach_out = [bytes(mod.reach(n, indptr, indices, r)) for r in roots]
            t_reach = time.perf_counter() - start
            start = time.perf_counter()
            bi_out = [bytes(mod.bireach(n, indptr, indices, r)) for r in roots]
            t_bi = time.perf_counter() - start
            start = time.perf_counter()
            ed_out = []
            for r in roots:
                res = mod.edmonds(n, tails, heads, weights, r)
                ed_out.append(None if res is None else res[0])
            t_ed = time.perf_counter() - start
            for kernel, seconds in (
                ("reach", t_reach),
                ("bireach", t_bi),
                ("edmonds", t_ed),
            ):
                writer.writerow([kernel, name, n, d.m, f"{seconds:.6f}"])
            got = {"reach": reach_out, "bireach": bi_out, "edmonds": ed_out}
            if not reference:
                reference = got
            elif reference != got:
                print(f"bench-kernels: backend disagreement at n={n}", file=sys.stderr)
                return EXIT_NO
    return EXIT_YES


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arbor",
        description="Digraph branchings: decompositions and k-distinct pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a generated digraph as an edge list")
    p.add_argument(
        "--model",
        required=True,
        choices=["gnp", "dag", "paper3", "degenerate-chain", "bidirected-cycle"],
    )
    p.add_argument("--n", type=int, required=True, help="size parameter")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.3, help="arc probability (gnp, dag)")
    p.add_argument(
        "--close",
        action="store_true",
        help="paper3: add the closing arc from the last vertex to the first",
    )
    p.add_argument(
        "--extra", type=int, default=0, help="degenerate-chain: extra upward arcs"
    )
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("decompose", help="build and validate a cut decomposition")
    p.add_argument("file", help="edge-list file, or - for stdin")
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("solve", help="decide k-distinct branchings for (s, t)")
    p.add_argument("file", help="edge-list file, or - for stdin")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["auto", "fpt", "oracle"], default="auto")
    p.add_argument("--cert", help="write the certificate JSON here on YES")
    p.add_argument("--dot", help="write a DOT rendering of the certificate on YES")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a certificate against a digraph")
    p.add_argument("file", help="edge-list file, or - for stdin")
    p.add_argument("cert", help="certificate JSON file")
    p.add_argument("--k", type=int, default=None, help="override the claimed k")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="run a corpus of instances, emit CSV")
    p.add_argument("corpus", help="directory of *.edges files with '# solve s t k'")
    p.add_argument("--modes", default="fpt,oracle", help="comma list: fpt,oracle,auto")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("bench-kernels", help="compare the kernel backends")
    p.add_argument("--sizes", default="16,32,64", help="comma list of vertex counts")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench_kernels)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
