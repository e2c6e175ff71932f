"""Command-line entry point: ``codecomp compare-awgn | compare-discrete | export-zonotope``.

Exit codes: 0 for any verdict (Incomparable included), 1 when ``--verify``
finds an error rate contradicting the verdict, 2 for configuration errors,
3 when a size guard is exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import _random
from .codes import CodeSpecError, build_code, load_code_file, real_code_matrix, NORMALIZATIONS
from .discrete import (
    ChannelSpecError,
    DegenerateDichotomy,
    build_channel,
    equivalent_bit_dichotomy,
    load_channel_file,
    load_prior_file,
    Prior,
    transfer_matrix,
)
from .errors import GuardExceeded
from .gaussian import (
    DeficiencyEstimate,
    Relation,
    deficiency_bound,
    loewner_compare,
    range_contains,
)
from .majorize import (
    BOUNDARY_TOL,
    LP_TOL,
    MajorizationRelation,
    compare_dichotomies,
    compare_lp,
    compare_transfer_matrices,
    write_boundary_csv,
    zonotope_boundary,
)
from .oracle import exact_bit_error_bsc, exact_block_error_bsc, packet_error_mc

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_CONFIG, EXIT_GUARD = 0, 1, 2, 3
BIT_ERROR_SLACK = 1e-12


class ConfigError(Exception):
    pass


def _count(text: str) -> int:
    value = float(text)
    if value != int(value) or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def _tagged(kind: str):
    def parse(text: str):
        return kind, text
    return parse


def _load_codes(items):
    codes = []
    for kind, text in items or []:
        codes.append(load_code_file(text) if kind == "file" else build_code(text))
    return codes


def _load_channels(items):
    return [load_channel_file(t) if kind == "file" else build_channel(t) for kind, t in items or []]


def _prior(spec: str | None, k: int) -> Prior:
    if spec in (None, "uniform"):
        return Prior.uniform(k)
    return load_prior_file(spec, k)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = _random.fresh_seed()
    print(f"seed={seed}", file=sys.stderr)
    return seed


# --- compare-awgn ----------------------------------------------------------

def cmd_compare_awgn(args) -> tuple[dict, int]:
    codes = _load_codes(args.codes)
    if len(codes) != 2:
        raise ConfigError("compare-awgn needs exactly two codes")
    if not args.sigma > 0:
        raise ConfigError("--sigma must be positive")
    A, B = (real_code_matrix(c, normalization=args.normalization, sigma=args.sigma) for c in codes)
    if A.M != B.M:
        raise ConfigError(f"codes have {A.M} and {B.M} messages; the comparison needs equal counts")
    seed = _seed(args)
    verdict = loewner_compare(A, B, args.tol)
    contains = range_contains(A, B, args.tol)
    if verdict.relation in (Relation.FIRST_SUFFICIENT, Relation.EQUIVALENT):
        deficiency = DeficiencyEstimate(0.0, 0.0, 0, None, False)
    else:
        deficiency = deficiency_bound(A, B, samples=args.samples, seed=seed, tol=args.tol)
    out = {
        "command": "compare-awgn",
        "codes": [c.name for c in codes],
        "sigma": args.sigma,
        "normalization": args.normalization,
        "seed": seed,
        **verdict.to_dict(),
        "range_contains": contains,
        "deficiency": deficiency.to_dict(),
    }
    status = EXIT_OK
    if args.verify:
        messages = list(range(A.M)) if args.messages == "all" else [int(m) for m in args.messages.split(",")]
        if any(not 0 <= m < A.M for m in messages):
            raise ConfigError(f"--messages must lie in 0..{A.M - 1}")
        rows = []
        ok_all = True
        for m in messages:
            ra = packet_error_mc(A, m, args.trials, seed)
            rb = packet_error_mc(B, m, args.trials, seed)
            slack = 3.0 * math.hypot(ra.std_error, rb.std_error)
            gap = ra.value - rb.value
            ok = gap <= deficiency.value + 3.0 * deficiency.std_error + slack
            if verdict.relation in (Relation.FIRST_SUFFICIENT, Relation.EQUIVALENT):
                ok = ok and gap <= slack
            if verdict.relation in (Relation.SECOND_SUFFICIENT, Relation.EQUIVALENT):
                ok = ok and -gap <= slack
            ok_all &= ok
            rows.append({"message": m, "first": ra.to_dict(), "second": rb.to_dict(),
                         "consistent": ok})
        out["verification"] = {"trials": args.trials, "messages": rows, "consistent": ok_all}
        if not ok_all:
            status = EXIT_VERIFY_FAILED
    return out, status


# --- compare-discrete ------------------------------------------------------

def _bits_for(args, k: int) -> list[int] | None:
    if args.all_bits:
        return list(range(1, k + 1))
    if args.bit is not None:
        if not 1 <= args.bit <= k:
            raise ConfigError(f"--bit must lie in 1..{k}")
        return [args.bit]
    return None


def _consistent_bits(relation: MajorizationRelation, e1: float, e2: float) -> bool:
    ok = True
    if relation in (MajorizationRelation.FIRST_MAJORIZES, MajorizationRelation.EQUIVALENT):
        ok &= e1 <= e2 + BIT_ERROR_SLACK
    if relation in (MajorizationRelation.SECOND_MAJORIZES, MajorizationRelation.EQUIVALENT):
        ok &= e2 <= e1 + BIT_ERROR_SLACK
    return ok


def cmd_compare_discrete(args) -> tuple[dict, int]:
    codes = _load_codes(args.codes)
    channels = _load_channels(args.channels)
    if not 1 <= len(codes) <= 2 or not 1 <= len(channels) <= 2:
        raise ConfigError("compare-discrete takes one or two codes and one or two channels")
    (c1, c2), (ch1, ch2) = (codes[0], codes[-1]), (channels[0], channels[-1])
    if args.prior not in (None, "uniform") and c1.k != c2.k:
        raise ConfigError("an explicit prior requires both codes to have the same k")
    p1, p2 = _prior(args.prior, c1.k), _prior(args.prior, c2.k)
    T1, T2 = transfer_matrix(c1, ch1), transfer_matrix(c2, ch2)
    k = min(c1.k, c2.k)
    bits = _bits_for(args, k)
    method = args.method
    tol = args.tol if args.tol is not None else (LP_TOL if method == "lp" else BOUNDARY_TOL)
    out = {
        "command": "compare-discrete",
        "first": {"code": c1.name, "channel": ch1.tag},
        "second": {"code": c2.name, "channel": ch2.tag},
        "prior": args.prior or "uniform",
        "method": method,
        "tol": tol,
    }
    status = EXIT_OK

    if method == "lp" and bits is None:
        if c1.k != c2.k:
            raise ConfigError("full transfer-matrix comparison needs codes with equal k")
        verdict = compare_transfer_matrices(T1, T2, tol)
        out.update(verdict.to_dict())
        out["scope"] = "transfer"
        if args.verify:
            e1 = exact_block_error_bsc(c1, ch1, p1)
            e2 = exact_block_error_bsc(c2, ch2, p2)
            per_bit = []
            ok_all = _consistent_bits(verdict.relation, e1.value, e2.value)
            for r in range(1, k + 1):
                b1 = exact_bit_error_bsc(c1, ch1, p1, r)
                b2 = exact_bit_error_bsc(c2, ch2, p2, r)
                ok = _consistent_bits(verdict.relation, b1.value, b2.value)
                ok_all &= ok
                per_bit.append({"bit": r, "first": b1.to_dict(), "second": b2.to_dict(),
                                "consistent": ok})
            out["verification"] = {"block": {"first": e1.to_dict(), "second": e2.to_dict()},
                                   "bits": per_bit, "consistent": ok_all}
            if not ok_all:
                status = EXIT_VERIFY_FAILED
        return out, status

    if bits is None:
        bits = list(range(1, k + 1))
    results = []
    fwd_all = bwd_all = True
    ok_all = True
    for r in bits:
        D1 = equivalent_bit_dichotomy(T1, p1, r)
        D2 = equivalent_bit_dichotomy(T2, p2, r)
        verdict = compare_lp(D1.rows, D2.rows, tol) if method == "lp" else compare_dichotomies(D1, D2, tol)
        rel = verdict.relation
        fwd_all &= rel in (MajorizationRelation.FIRST_MAJORIZES, MajorizationRelation.EQUIVALENT)
        bwd_all &= rel in (MajorizationRelation.SECOND_MAJORIZES, MajorizationRelation.EQUIVALENT)
        entry = {"bit": r, **verdict.to_dict()}
        if args.verify:
            e1 = exact_bit_error_bsc(c1, ch1, p1, r)
            e2 = exact_bit_error_bsc(c2, ch2, p2, r)
            ok = _consistent_bits(rel, e1.value, e2.value)
            ok_all &= ok
            entry["verification"] = {"first": e1.to_dict(), "second": e2.to_dict(), "consistent": ok}
        results.append(entry)
    out["scope"] = "bits"
    out["relation"] = MajorizationRelation.from_flags(fwd_all, bwd_all).value
    out["bits"] = results
    if args.verify:
        out["consistent"] = ok_all
        if not ok_all:
            status = EXIT_VERIFY_FAILED
    return out, status


# --- export-zonotope -------------------------------------------------------

def cmd_export_zonotope(args) -> tuple[str, int]:
    codes = _load_codes(args.codes)
    channels = _load_channels(args.channels)
    if len(codes) != 1 or len(channels) != 1:
        raise ConfigError("export-zonotope takes exactly one code and one channel")
    code, channel = codes[0], channels[0]
    bits = _bits_for(args, code.k) or [1]
    prior = _prior(args.prior, code.k)
    T = transfer_matrix(code, channel)
    chunks = {}
    for r in bits:
        D = equivalent_bit_dichotomy(T, prior, r)
        boundary = zonotope_boundary(D)
        meta = {"code": code.name, "channel": channel.tag, "bit": r,
                "prior": args.prior or "uniform"}
        if args.output == "json":
            chunks[r] = json.dumps({**meta, "breakpoints": boundary.breakpoints.tolist()}, indent=2) + "\n"
        else:
            buf = io.StringIO()
            write_boundary_csv(boundary, buf, meta)
            chunks[r] = buf.getvalue()
    if args.out:
        if len(bits) > 1 and "{bit}" not in args.out:
            raise ConfigError("with several bits, --out must contain a {bit} placeholder")
        try:
            for r, text in chunks.items():
                with open(args.out.format(bit=r), "w", newline="") as fh:
                    fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write output: {exc}") from None
        return "", EXIT_OK
    return "".join(chunks.values()), EXIT_OK


# --- plumbing --------------------------------------------------------------

def _to_csv(result: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if result["command"] == "compare-awgn":
        keys = ["relation", "min_eig_fwd", "min_eig_bwd", "tol", "range_contains"]
        writer.writerow(keys + ["deficiency", "deficiency_stderr", "psd_repair"])
        d = result["deficiency"]
        writer.writerow([result[k] for k in keys] + [d["value"], d["stderr"], d["psd_repair"]])
    elif result.get("scope") == "bits":
        writer.writerow(["bit", "relation", "method"])
        for entry in result["bits"]:
            writer.writerow([entry["bit"], entry["relation"], entry["method"]])
    else:
        writer.writerow(["relation", "method"])
        writer.writerow([result["relation"], result["method"]])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codecomp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_code_args(p):
        p.add_argument("--code", dest="codes", action="append", type=_tagged("spec"),
                       metavar="FAMILY:PARAMS", help="e.g. bch:4,2, rep:3, hamming:3, parity:4")
        p.add_argument("--code-file", dest="codes", action="append", type=_tagged("file"),
                       metavar="PATH", help="JSON code spec")

    def add_channel_args(p):
        p.add_argument("--channel", dest="channels", action="append", type=_tagged("spec"),
                       metavar="bsc:P")
        p.add_argument("--channel-file", dest="channels", action="append", type=_tagged("file"),
                       metavar="PATH", help="JSON channel spec")

    def add_bits(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--bit", type=int, help="information bit index (1-based)")
        g.add_argument("--all-bits", action="store_true")

    def add_output(p, default):
        p.add_argument("--output", choices=("json", "csv"), default=default)
        p.add_argument("--out", help="write to this path instead of stdout")

    p = sub.add_parser("compare-awgn", help="Loewner comparison of two codes on an AWGN channel")
    add_code_args(p)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--normalization", choices=NORMALIZATIONS, default="none")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--samples", type=_count, default=100_000, help="deficiency Monte-Carlo samples")
    p.add_argument("--verify", action="store_true", help="check the verdict with ML decoding")
    p.add_argument("--trials", type=_count, default=10_000)
    p.add_argument("--messages", default="0", help="comma-separated message indices or 'all'")
    p.add_argument("--seed", type=int)
    add_output(p, "json")

    p = sub.add_parser("compare-discrete", help="majorization comparison on discrete channels")
    add_code_args(p)
    add_channel_args(p)
    add_bits(p)
    p.add_argument("--prior", help="'uniform' (default) or a JSON prior file")
    p.add_argument("--method", choices=("zonotope", "lp"), default="zonotope")
    p.add_argument("--tol", type=float)
    p.add_argument("--verify", action="store_true", help="attach exact MAP error rates")
    add_output(p, "json")

    p = sub.add_parser("export-zonotope", help="write zonotope upper-boundary breakpoints")
    add_code_args(p)
    add_channel_args(p)
    add_bits(p)
    p.add_argument("--prior")
    p.add_argument("--output", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path; use {bit} when exporting several bits")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "export-zonotope":
            text, status = cmd_export_zonotope(args)
        else:
            handler = cmd_compare_awgn if args.command == "compare-awgn" else cmd_compare_discrete
            result, status = handler(args)
            text = _to_csv(result) if args.output == "csv" else json.dumps(result, indent=2) + "\n"
            if args.out:
                try:
                    with open(args.out, "w", newline="") as fh:
                        fh.write(text)
                except OSError as exc:
                    raise ConfigError(f"cannot write output: {exc}") from None
                text = ""
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ConfigError, CodeSpecError, ChannelSpecError, DegenerateDichotomy,
            ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
