"""Command-line surface: generate, mast, verify, pack, bounds, probe.

All machine output is JSON on stdout; diagnostics go to stderr.  Exit code
0 means the requested computation or check succeeded (for ``verify`` and
``bounds --certify``: the report passed); anything else is nonzero.

The optional environment variable ``MAST_FORGE_THREADS`` caps how many
probe trials run concurrently.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bounds as bounds_mod
from . import construct, newick
from .mast import mast_bruteforce, mast_dp
from .tree import TreeError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mastforge",
        description="Maximum agreement subtrees of rooted binary trees: "
        "compute, construct extremal pairs, verify, certify bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write an extremal balanced tree pair")
    pick = gen.add_mutually_exclusive_group(required=True)
    pick.add_argument("--k", type=int, help="construction parameter k >= 1")
    pick.add_argument("--c", type=float, help="choose k so that mast < c*sqrt(n)")
    gen.add_argument("--out-s", required=True, help="output file for the first tree")
    gen.add_argument("--out-t", required=True, help="output file for the second tree")

    mast = sub.add_parser("mast", help="MAST size of two Newick files")
    mast.add_argument("s", help="first tree file")
    mast.add_argument("t", help="second tree file")
    mast.add_argument("--brute", action="store_true", help="force the subset oracle")
    mast.add_argument("--witness", help="write one agreement tree as Newick")

    verify = sub.add_parser("verify", help="verify an extremal pair end to end")
    verify.add_argument("--k", type=int, required=True)
    verify.add_argument("--s", help="first tree file (default: generate)")
    verify.add_argument("--t", help="second tree file (default: generate)")

    pack = sub.add_parser("pack", help="pack disjoint n-caterpillars")
    pack.add_argument("--n", type=int, required=True)

    bnd = sub.add_parser("bounds", help="lower-bound values and certificates")
    mode = bnd.add_mutually_exclusive_group(required=True)
    mode.add_argument("--certify", action="store_true")
    mode.add_argument("--n", type=int)

    probe = sub.add_parser("probe", help="randomized floor probe on 2**m leaves")
    probe.add_argument("--m", type=int, required=True)
    probe.add_argument("--trials", type=int, required=True)
    probe.add_argument("--seed", type=int, default=0)

    return parser


def _emit(payload) -> None:
    print(json.dumps(payload))


class _InputError(Exception):
    """A named-input failure already formatted for stderr."""


def _load_tree(path: str):
    try:
        return newick.read_file(path)
    except newick.NewickError as exc:
        raise _InputError(f"parse error in {path}: {exc}") from exc
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from exc


def _cmd_generate(args) -> int:
    k = args.k if args.k is not None else construct.choose_k_for_c(args.c)
    pair = construct.build_counterexample(k)
    newick.write_file(args.out_s, pair.s)
    newick.write_file(args.out_t, pair.t)
    _emit({"k": k, "n": pair.n, "expected_mast": pair.expected_mast})
    return 0


def _cmd_mast(args) -> int:
    s = _load_tree(args.s)
    t = _load_tree(args.t)
    if args.brute:
        if args.witness:
            print("the subset oracle reports only a size; drop --witness",
                  file=sys.stderr)
            return 1
        _emit(mast_bruteforce(s, t))
        return 0
    result = mast_dp(s, t)
    if args.witness:
        if result.agreement_tree is None:
            print("no common labels, nothing to write as a witness",
                  file=sys.stderr)
            return 1
        newick.write_file(args.witness, result.agreement_tree)
    _emit(result.size)
    return 0


def _cmd_verify(args) -> int:
    if (args.s is None) != (args.t is None):
        print("supply both --s and --t, or neither", file=sys.stderr)
        return 1
    if args.s is None:
        pair = construct.build_counterexample(args.k)
    else:
        params = construct.counterexample_parameters(args.k)
        pair = construct.CounterexamplePair(
            args.k,
            _load_tree(args.s),
            _load_tree(args.t),
            params["expected_mast"],
            params["n"],
        )
    report = construct.verify_counterexample(pair)
    print(report.to_json())
    return 0 if report.passed else 1


def _cmd_pack(args) -> int:
    plan = construct.pack_caterpillars(args.n)
    payload = {"n": args.n, **plan.as_dict()}
    _emit(payload)
    return 0


def _cmd_bounds(args) -> int:
    if args.certify:
        delta_star, beta_star = bounds_mod.maximize_beta(1e-9)
        report = bounds_mod.check_case_certificates()
        _emit(
            {
                "beta": {"delta": delta_star, "beta": beta_star},
                "certificates": report.as_dict(),
            }
        )
        return 0 if report.passed else 1
    _emit(
        {
            "n": args.n,
            "floor": bounds_mod.lower_bound(args.n),
            "sixth_root": bounds_mod.sixth_root(args.n),
        }
    )
    return 0


def _cmd_probe(args) -> int:
    threads = int(os.environ.get("MAST_FORGE_THREADS", "1") or "1")
    result = bounds_mod.empirical_probe(
        args.m, args.trials, args.seed, threads=max(threads, 1)
    )
    _emit(result.as_dict())
    return 0


_HANDLERS = {
    "generate": _cmd_generate,
    "mast": _cmd_mast,
    "verify": _cmd_verify,
    "pack": _cmd_pack,
    "bounds": _cmd_bounds,
    "probe": _cmd_probe,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own diagnostics
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except _InputError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (TreeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot read or write {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
