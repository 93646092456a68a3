"""Command-line interface.

Subcommands::

    modrecon crt 0:5 2:7 85:101        # 590 mod 3535
    modrecon farey 590 3535            # 5/6
    modrecon etr 2711 3535 -v --bad 5  # 5/6, with the reduction steps
    modrecon gb ideal.txt --mode modular --report run.json
    modrecon bench --bits 500 --trials 100

Exit codes: 0 success; 1 no rational found (farey, etr); 2 usage error or
non-coprime moduli; 3 unreadable ideal or fault-plan file; 4 round limit
exceeded in modular mode.  The default seed comes from ``MODRECON_SEED``.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import statistics
import sys
import time

from .arith import Residue, format_rational, parse_int
from .crt import crt_list
from .engine import FaultPlan, ModularOptions, modular_groebner
from .errors import ModuliNotCoprime, RoundLimitExceeded, WorkerNeverApplicable
from .groebner import buchberger
from .poly import format_ideal, parse_ideal
from .reconstruct import LatticeBasis2, error_tolerant, farey_preimage, gauss_lagrange_trace

EXIT_OK = 0
EXIT_NONE = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_ROUNDS = 4

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["mode", "status", "rounds", "result", "timings"],
    "properties": {
        "mode": {"enum": ["rational", "modular"]},
        "status": {"enum": ["success", "failed"]},
        "result": {"type": ["string", "null"]},
        "options": {"type": "object"},
        "timings": {
            "type": "object",
            "required": ["total"],
            "additionalProperties": {"type": "number", "minimum": 0},
        },
        "rounds": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["round", "new_primes", "runs", "outcome"],
                "properties": {
                    "round": {"type": "integer", "minimum": 1},
                    "new_primes": {"type": "array", "items": {"type": "integer"}},
                    "runs": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["prime", "status", "signature"],
                            "properties": {
                                "prime": {"type": "integer"},
                                "status": {"enum": ["ok", "inapplicable", "failed", "done"]},
                                "signature": {"type": ["string", "null"]},
                                "reason": {"type": "string"},
                            },
                        },
                    },
                    "tally": {"type": "object", "additionalProperties": {"type": "integer"}},
                    "winner": {"type": "string"},
                    "supporters": {"type": "array", "items": {"type": "integer"}},
                    "discarded": {"type": "array", "items": {"type": "integer"}},
                    "tie": {"type": "boolean"},
                    "lift": {"type": "string"},
                    "extra_prime_checks": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["prime", "passed"],
                            "properties": {"prime": {"type": ["integer", "null"]},
                                           "passed": {"type": "boolean"}},
                        },
                    },
                    "verified": {"type": "boolean"},
                    "outcome": {"type": "string"},
                },
            },
        },
    },
}


def _default_seed():
    return int(os.environ.get("MODRECON_SEED", "0"))


def _residue_arg(text):
    value, sep, modulus = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected r:m, got {text!r}")
    try:
        m = parse_int(modulus)
        if m < 2:
            raise ValueError
        return Residue(parse_int(value), m)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed residue {text!r}") from None


def _int_arg(text):
    try:
        return parse_int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _prime_list(text):
    try:
        return [parse_int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _residue_from(parser, r, n):
    if n < 2 or not 0 <= r < n:
        parser.error(f"need 0 <= r < N and N >= 2, got r={r}, N={n}")
    return Residue(r, n)


def cmd_crt(args, parser):
    try:
        res = crt_list(args.residues)
    except ModuliNotCoprime as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(res)
    return EXIT_OK


def cmd_farey(args, parser):
    q = farey_preimage(_residue_from(parser, args.r, args.N))
    if q is None:
        print("none")
        return EXIT_NONE
    print(format_rational(q))
    return EXIT_OK


def cmd_etr(args, parser):
    r = _residue_from(parser, args.r, args.N)
    if args.verbose:
        (x, y), steps = gauss_lagrange_trace(LatticeBasis2.for_residue(r))
        for step in steps:
            print(step)
        print(f"shortest vector: ({x}, {y})  squared norm {x * x + y * y}"
              f" {'<' if x * x + y * y < r.modulus else '>='} N = {r.modulus}")
    res = error_tolerant(r)
    if res is None:
        print("none")
        return EXIT_NONE
    if args.verbose:
        print(f"gcd(x, y) = {res.reduced_by}")
        if args.bad is not None:
            m = args.bad
            a, b = res.value.numerator, res.value.denominator
            good = r.modulus // m if r.modulus % m == 0 else None
            divides = "divides" if m % res.reduced_by == 0 else "does not divide"
            print(f"gcd {res.reduced_by} {divides} M = {m}")
            if good is not None:
                lhs = (a * a + b * b) * m
                rel = "<" if lhs < good else ">="
                print(f"({a}^2 + {b}^2) * {m} = {lhs} {rel} {good} = N/M")
    print(format_rational(res.value))
    return EXIT_OK


def _write_report(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path == "-":
        print(text, file=sys.stderr)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def cmd_gb(args, parser):
    try:
        with open(args.file) as fh:
            ring, F = parse_ideal(fh.read(), order=args.order)
        plan = None
        if args.inject:
            with open(args.inject) as fh:
                plan = FaultPlan.parse(fh.read(), seed=args.seed)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if ring is not None and ring.modulus is not None:
        print("error: gb expects an ideal over Q", file=sys.stderr)
        return EXIT_PARSE

    t0 = time.perf_counter()
    if args.mode == "rational" or not F:
        basis = buchberger(F)
        payload = {"mode": args.mode, "status": "success", "rounds": [],
                   "result": format_ideal(ring, basis),
                   "timings": {"total": time.perf_counter() - t0}}
    else:
        opts = ModularOptions(initial_primes=args.initial_primes, bit_size=args.bits,
                              max_rounds=args.max_rounds, extra_primes=args.strict,
                              seed=args.seed, parallelism=args.jobs, primes=args.primes)
        try:
            outcome = modular_groebner(F, opts, plan)
        except (RoundLimitExceeded, WorkerNeverApplicable) as exc:
            print(f"error: {exc}", file=sys.stderr)
            if args.report and getattr(exc, "report", None) is not None:
                _write_report(args.report, {"mode": "modular", **exc.report.to_dict()})
            return EXIT_ROUNDS
        basis = outcome.value
        payload = {"mode": "modular", **outcome.report.to_dict()}

    text = format_ideal(ring, basis)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.report:
        _write_report(args.report, payload)
    return EXIT_OK


def random_instance(rng: random.Random, bits: int) -> Residue:
    n = rng.getrandbits(bits) | (1 << (bits - 1))
    return Residue(rng.randrange(n), n)


def cmd_bench(args, parser):
    if args.bits < 8:
        parser.error("--bits must be >= 8")
    rng = random.Random(args.seed)
    times = []
    for _ in range(args.trials):
        r = random_instance(rng, args.bits)
        t0 = time.perf_counter()
        error_tolerant(r)
        times.append(time.perf_counter() - t0)
    print(f"{'bits':>6} {'trials':>7} {'mean_s':>12} {'median_s':>12}")
    print(f"{args.bits:>6} {args.trials:>7} {statistics.fmean(times):>12.6f} "
          f"{statistics.median(times):>12.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modrecon", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crt", help="combine residues r:m with coprime moduli")
    p.add_argument("residues", nargs="+", type=_residue_arg, metavar="r:m")
    p.set_defaults(func=cmd_crt)

    p = sub.add_parser("farey", help="rational reconstruction via the Farey map")
    p.add_argument("r", type=_int_arg)
    p.add_argument("N", type=_int_arg)
    p.set_defaults(func=cmd_farey)

    p = sub.add_parser("etr", help="error-tolerant rational reconstruction")
    p.add_argument("r", type=_int_arg)
    p.add_argument("N", type=_int_arg)
    p.add_argument("-v", "--verbose", action="store_true", help="show the reduction steps")
    p.add_argument("--bad", type=_int_arg, metavar="M",
                   help="product of the primes known to be bad, for the bound check")
    p.set_defaults(func=cmd_etr)

    p = sub.add_parser("gb", help="reduced Groebner basis of an ideal file")
    p.add_argument("file")
    p.add_argument("--order", choices=["lex", "deglex", "degrevlex"])
    p.add_argument("--mode", choices=["rational", "modular"], default="modular")
    p.add_argument("--inject", metavar="PLAN", help="fault plan file: lines 'prime type'")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--report", metavar="PATH", help="write a JSON run report ('-' for stderr)")
    p.add_argument("--primes", type=_prime_list, help="comma-separated initial primes")
    p.add_argument("--bits", type=int, default=61, help="bit size of drawn primes")
    p.add_argument("--initial-primes", type=int, default=4)
    p.add_argument("--max-rounds", type=int, default=8)
    p.add_argument("--strict", type=int, default=1, metavar="K", help="extra primes to test")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("bench", help="time error-tolerant reconstruction")
    p.add_argument("--bits", type=int, default=500)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
