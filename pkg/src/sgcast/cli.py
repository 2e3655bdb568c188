"""Command-line front end.

    sgcast synthesize --named SG4 --p 5
    sgcast synthesize --n 2 --e 2 --d 3 --gamma 2 --seed 7 --out scheme.json
    sgcast verify scheme.json
    sgcast bounds --named SG3 --p 5
    sgcast curve --n 2 --e 2 --gamma 1:3:0.05
    sgcast profile --named SG1 --p 2
    sgcast oracle scheme.json
    sgcast sz-trial --predicate f1 --trials 100

Every command prints one canonical JSON report on stdout. Exit status:
0 success, 1 verification failure, 2 usage or input error, 3 retries
exhausted or unsolved regime.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds, construct, oracle, serialize
from .errors import BadDimensions, BadGamma, SgcastError
from .gf import DEFAULT_PRIME
from .keymodel import entropy_profile, is_monotone, is_submodular, named_instance, sample_generic_instance
from .scheme import exact_decoding_deficit, exact_leakage, verify_feasibility

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSOLVED = 0, 1, 2, 3


class UsageError(SgcastError):
    code = "usage"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_gamma_grid(text: str) -> list[Fraction]:
    """'a:b:step' (inclusive of b when it lands on the grid) or 'g1,g2,...'.

    Decimals are read exactly, so 0.05 is 1/20 and no breakpoint drifts.
    """
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (parse_rational(x) for x in parts)
        if step <= 0:
            raise UsageError("grid step must be positive")
        out, g = [], start
        while g <= stop:
            out.append(g)
            g += step
        return out
    return [parse_rational(x) for x in text.split(",") if x.strip()]


def _rng(args) -> np.random.Generator:
    return np.random.default_rng(args.seed)


def _instance_sources(args) -> list[str]:
    chosen = []
    if getattr(args, "instance", None):
        chosen.append("instance file")
    if getattr(args, "named", None):
        chosen.append("named instance")
    if any(getattr(args, k, None) is not None for k in ("d", "m", "gamma")):
        chosen.append("generic parameters")
    return chosen


def build_instance(args, rng: np.random.Generator):
    sources = _instance_sources(args)
    if len(sources) != 1:
        raise UsageError(f"give exactly one of --instance, --named, or generic parameters (got {sources or 'none'})")
    p = args.p if args.p is not None else DEFAULT_PRIME
    if args.instance:
        return serialize.load_instance(args.instance)
    if args.named:
        return named_instance(args.named, p)
    if args.d is None or (args.m is None) == (args.gamma is None):
        raise UsageError("generic instances need --d and exactly one of --m, --gamma")
    if args.n is None or args.e is None:
        raise UsageError("generic instances need --n and --e")
    m = args.m
    if m is None:
        mm = parse_rational(args.gamma) * args.d
        if mm.denominator != 1:
            raise BadDimensions(f"gamma * d = {mm} is not an integer")
        m = int(mm)
    return sample_generic_instance(p, args.d, m, args.n, args.e, rng, diagonal=args.diagonal)


def _emit(report: dict, out=None) -> None:
    text = serialize.dumps(report)
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text, encoding="utf-8")


# ----------------------------------------------------------------------------
# Commands


def cmd_synthesize(args) -> int:
    rng = _rng(args)
    if args.delta is not None:
        if args.n is None or args.e is None:
            raise UsageError("--delta needs --n and --e")
        p = args.p if args.p is not None else DEFAULT_PRIME
        if args.n > 2:
            outcome = construct.construct_asymptotic_N(p, args.n, args.delta, rng, E=args.e, max_retries=args.max_retries)
        else:
            outcome = construct.construct_asymptotic_E(p, args.e, args.delta, rng, N=args.n, max_retries=args.max_retries)
    elif args.named:
        if _instance_sources(args) != ["named instance"]:
            raise UsageError("--named cannot be combined with other instance sources")
        outcome = construct.construct_extra_entropic(args.named, args.p if args.p is not None else DEFAULT_PRIME)
    else:
        inst = build_instance(args, rng)
        outcome = construct.synthesize(inst, rng, args.max_retries)
    sch = outcome.scheme
    if args.out:
        serialize.save_scheme(sch, args.out)
    report = {
        "command": "synthesize",
        "scheme": serialize.scheme_to_dict(sch),
        "verification": outcome.report.to_dict(),
        "rate": outcome.rate,
        "normalized_rate": outcome.normalized_rate if sch.inst.d else None,
        "bandwidth": Fraction(sch.L_X, sch.L),
        "retries_used": outcome.retries_used,
        "notes": outcome.notes,
    }
    _emit(report)
    return EXIT_OK


def _load_scheme(args):
    inst = serialize.load_instance(args.instance) if args.instance else None
    return serialize.load_scheme(args.scheme, inst)


def cmd_verify(args) -> int:
    sch = _load_scheme(args)
    report = verify_feasibility(sch)
    _emit({"command": "verify", "verification": report.to_dict()}, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_bounds(args) -> int:
    inst = build_instance(args, _rng(args))
    rep = bounds.bound_report(inst, R=parse_rational(args.rate) if args.rate else None)
    _emit({"command": "bounds", "bounds": rep.to_dict()}, args.out)
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.n is None or args.e is None or args.gamma is None:
        raise UsageError("curve needs --n, --e and --gamma")
    rows = []
    for g in parse_gamma_grid(args.gamma):
        res = bounds.generic_capacity(args.n, args.e, g)
        rows.append(
            {
                "gamma": g,
                "value": res.value,
                "regime": res.regime,
                "bracket": list(res.bracket) if res.bracket else None,
            }
        )
    _emit({"command": "curve", "N": args.n, "E": args.e, "rows": rows}, args.out)
    return EXIT_OK


def cmd_profile(args) -> int:
    inst = build_instance(args, _rng(args))
    prof = entropy_profile(inst)
    entries = {",".join(map(str, sorted(S))): h for S, h in sorted(prof.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))}
    _emit(
        {
            "command": "profile",
            "K": inst.K,
            "N": inst.N,
            "entropies": entries,
            "submodular": is_submodular(prof, inst.K),
            "monotone": is_monotone(prof),
        },
        args.out,
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    sch = _load_scheme(args)
    ent = oracle.entropic_check(sch, cap=args.oracle_cap)
    rank_deficits = {q: exact_decoding_deficit(sch, q) for q in sch.inst.qualified}
    rank_leakages = {e: exact_leakage(sch, e) for e in sch.inst.eavesdroppers}
    agrees = ent.deficits == rank_deficits and ent.leakages == rank_leakages
    secure = not any(ent.deficits.values()) and not any(ent.leakages.values())
    _emit(
        {"command": "oracle", "entropic": ent.to_dict(), "agrees_with_ranks": agrees, "pass": secure},
        args.out,
    )
    return EXIT_OK if secure and agrees else EXIT_FAIL


def cmd_sz_trial(args) -> int:
    params = {k: v for k, v in (("N", args.n), ("E", args.e), ("d", args.d), ("m", args.m)) if v is not None}
    p = args.p if args.p is not None else DEFAULT_PRIME
    frac = oracle.schwartz_zippel_trial(args.predicate, p, params, args.trials, _rng(args))
    _emit(
        {
            "command": "sz-trial",
            "predicate": args.predicate,
            "p": p,
            "params": {**oracle.DEFAULT_PARAMS[args.predicate], **params},
            "trials": args.trials,
            "success_fraction": frac,
        },
        args.out,
    )
    return EXIT_OK


# ----------------------------------------------------------------------------


def _add_instance_args(sp, generic=True):
    sp.add_argument("--instance", help="instance JSON file")
    sp.add_argument("--named", choices=["SG1", "SG2", "SG3", "SG4"], type=str.upper)
    sp.add_argument("--p", type=int, help=f"prime field size (default {DEFAULT_PRIME})")
    if generic:
        sp.add_argument("--d", type=int)
        sp.add_argument("--m", type=int)
        sp.add_argument("--gamma", help="space expansion factor, e.g. 5/2")
        sp.add_argument("--n", type=int, help="qualified receivers")
        sp.add_argument("--e", type=int, help="eavesdroppers")
        sp.add_argument("--diagonal", action="store_true")


def _add_common(sp):
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-retries", type=int, default=construct.DEFAULT_MAX_RETRIES)
    sp.add_argument("--oracle-cap", type=int, default=oracle.DEFAULT_CAP)
    sp.add_argument("--out", help="also write the JSON output here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sgcast", description="Secure groupcast with generic linear keys.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synthesize", help="construct a scheme for an instance")
    _add_instance_args(sp)
    sp.add_argument("--delta", type=int, help="degree for the asymptotic alignment schemes")
    _add_common(sp)
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("verify", help="check a scheme JSON")
    sp.add_argument("scheme")
    sp.add_argument("--instance", help="override the embedded instance")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bounds", help="converse bounds for an instance")
    _add_instance_args(sp)
    sp.add_argument("--rate", help="rate at which to evaluate the bandwidth bound")
    _add_common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("curve", help="normalized capacity over a gamma grid")
    sp.add_argument("--n", type=int)
    sp.add_argument("--e", type=int)
    sp.add_argument("--gamma", help="a:b:step or a comma list")
    _add_common(sp)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("profile", help="entropy of every receiver subset")
    _add_instance_args(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("oracle", help="brute-force entropic check of a scheme")
    sp.add_argument("scheme")
    sp.add_argument("--instance", help="override the embedded instance")
    _add_common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("sz-trial", help="success rate of a generic rank condition")
    sp.add_argument("--predicate", choices=oracle.PREDICATES, required=True)
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--e", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--trials", type=int, default=100)
    _add_common(sp)
    sp.set_defaults(func=cmd_sz_trial)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SgcastError as exc:
        sys.stdout.write(serialize.dumps({"error": exc.code, "message": str(exc)}))
        return exc.exit_status
    except (ValueError, OSError) as exc:
        sys.stdout.write(serialize.dumps({"error": "usage", "message": str(exc)}))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
