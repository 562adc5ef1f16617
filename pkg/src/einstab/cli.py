"""einstab command line: run the exact checks and emit JSON or text reports.

Exit codes: 0 when every check passes, 1 when a check fails (the failing
anchor goes to stderr), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from .errors import EinstabError, NormalizationError
from .g2 import build_g2_structure, default_structure, random_unit_spinor, random_vector, verify_structure
from .reps import C2Weight, alt_power, branching_record, killing_certificate, su2_char, su2_decompose, sym_power
from .sasaki import verify_fibre
from .stability import (BERGER, SCAL_42, berger_verdict, betti_coindex_summary, coindex_record, context_for,
                        g2_b3_margin, sasaki_margin, spectrum_report)

OUTPUT_DIR_ENV = "EINSTAB_OUTPUT_DIR"
COUNTERFACTUAL_COMMANDS = {"berger report", "g2-margin"}
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


# -- subcommand bodies: each returns (payload, failing anchor or None) --------

def _g2_verify(args):
    rng = random.Random(args.seed)
    structures = [default_structure()]
    for _ in range(args.spinors):
        structures.append(build_g2_structure(random_unit_spinor(rng)))
    vectors = [random_vector(rng) for _ in range(args.vectors)]
    results = [verify_structure(G, vectors) for G in structures]
    failing = None
    for res in results:
        if not res["pass"]:
            bad = [r["anchor"] for r in res["identities"] if not r["pass"]]
            failing = bad[0] if bad else "ranks, kernels, stabilizer or S/Cas values"
            break
    return {"seed": args.seed, "random_spinors": args.spinors, "random_vectors": args.vectors,
            "structures": results, "pass": failing is None}, failing


def _sasaki_verify(args):
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    records = verify_fibre(args.n)
    margin = sasaki_margin(args.n).to_json()
    bad = [r for r in records if not r["pass"]]
    failing = f"{bad[0]['lemma']} on {bad[0]['class']}" if bad else None
    return {"n": args.n, "checks": records, "margin": margin, "pass": failing is None}, failing


def _parse_weight(text: str) -> C2Weight:
    try:
        return C2Weight.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad highest weight {text!r}: expected K,L with K >= L >= 0") from exc


def _rep_branch(args):
    return branching_record(_parse_weight(args.hw)), None


def _rep_decompose(args):
    if (args.sym is None) == (args.alt is None):
        raise UsageError("give exactly one of --sym M or --alt M")
    if args.of < 0:
        raise UsageError("--of must be >= 0")
    op, m = ("sym", args.sym) if args.sym is not None else ("alt", args.alt)
    if m < 0:
        raise UsageError("power must be >= 0")
    c = (sym_power if op == "sym" else alt_power)(su2_char(args.of), m)
    dec = su2_decompose(c)
    return {"operation": op, "power": m, "of": args.of, "dim": dec.dim(), "decomposition": dec.to_json()}, None


def _berger_certificate(args):
    cert = killing_certificate(_parse_weight(args.weight), trace_removed=not args.keep_trace)
    failing = None
    if not cert["valid"]:
        failing = "Killing certificate: " + ", ".join(f"{k}={v}" for k, v in cert["offending"].items())
    return cert, failing


def _berger_report(args):
    return berger_verdict(args.tau0_squared, k=args.k).to_json(), None


def _g2_margin(args):
    if args.tau0_squared is not None:
        ctx = context_for(args.tau0_squared)
    else:
        ctx = BERGER if args.context == "berger" else SCAL_42
    rep = g2_b3_margin(ctx)
    failing = None if rep.margin == -ctx.tau0_squared / 2 else "margin = -tau0^2/2"
    return rep.to_json(), failing


def _spectrum(args):
    bound = _fraction(args.bound)
    return spectrum_report(bound), None


def _coindex(args):
    rec = coindex_record(args.b2, args.b3, args.kind)
    rec["text"] = betti_coindex_summary(args.b2, args.b3, args.kind)
    return rec, None


def _all(args):
    ns = argparse.Namespace(seed=args.seed, spinors=0, vectors=3)
    sections = {"g2": _g2_verify(ns)}
    for n in (2, 3, 4):
        sections[f"sasaki_n{n}"] = _sasaki_verify(argparse.Namespace(n=n))
    sections["branching"] = ({"weights": [branching_record(C2Weight(k, l)) for k in range(5) for l in range(k + 1)]},
                             None)
    sections["killing_certificate"] = _berger_certificate(argparse.Namespace(weight="1,1", keep_trace=False))
    sections["berger_report"] = (berger_verdict().to_json(), None)
    sections["g2_margin"] = (g2_b3_margin(SCAL_42).to_json(), None)
    sections["spectrum"] = (spectrum_report(Fraction(8, 3)), None)
    failing = next((f"{name}: {fail}" for name, (_, fail) in sections.items() if fail), None)
    return {"seed": args.seed, **{k: v for k, (v, _) in sections.items()}, "pass": failing is None}, failing


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


# -- parser --------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", help="write the report here (default: stdout, or $%s/<command>.json)" % OUTPUT_DIR_ENV)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized identity sampling")
    p.add_argument("--counterfactual", action="store_true",
                   help="allow a nonstandard tau0^2 (berger and g2-margin only; reports are labelled)")
    p.add_argument("--tau0-squared", type=_fraction_arg, default=None)
    p.add_argument("--golden", help="compare the rendered report byte-for-byte with this file")
    return p


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="einstab", description="Exact instability certificates for Einstein metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    g2 = sub.add_parser("g2", help="G2 structure from a spinor").add_subparsers(dest="action", required=True)
    p = g2.add_parser("verify", parents=[common], help="identity suite, ranks, kernels, S/Cas values")
    p.add_argument("--spinors", type=int, default=0, help="also check this many seeded random unit spinors")
    p.add_argument("--vectors", type=int, default=3, help="seeded random vectors added to the identity suite")
    p.set_defaults(func=_g2_verify, name="g2 verify")

    sas = sub.add_parser("sasaki", help="Sasaki fibre model").add_subparsers(dest="action", required=True)
    p = sas.add_parser("verify", parents=[common], help="curvature-endomorphism checks on a fibre")
    p.add_argument("--n", type=int, required=True, help="fibre dimension is 2n+1")
    p.set_defaults(func=_sasaki_verify, name="sasaki verify")

    rep = sub.add_parser("rep", help="sp(1)/sp(2) characters").add_subparsers(dest="action", required=True)
    p = rep.add_parser("branch", parents=[common], help="principal branching of V(k,l)")
    p.add_argument("--hw", required=True, metavar="K,L")
    p.set_defaults(func=_rep_branch, name="rep branch")
    p = rep.add_parser("decompose", parents=[common], help="Sym^m or Lambda^m of Sym^k E")
    p.add_argument("--sym", type=int, metavar="M")
    p.add_argument("--alt", type=int, metavar="M")
    p.add_argument("--of", type=int, required=True, metavar="K")
    p.set_defaults(func=_rep_decompose, name="rep decompose")

    ber = sub.add_parser("berger", help="Berger space Sp(2)/Sp(1)").add_subparsers(dest="action", required=True)
    p = ber.add_parser("certificate", parents=[common], help="Killing-tensor multiplicity certificate")
    p.add_argument("--weight", default="1,1", metavar="K,L")
    p.add_argument("--keep-trace", action="store_true", help="use Sym^2 instead of Sym^2_0")
    p.set_defaults(func=_berger_certificate, name="berger certificate")
    p = ber.add_parser("report", parents=[common], help="stability report")
    p.add_argument("--k", type=int, default=4, choices=(4, 8, 12), help="Sym^k E summand of Sym^2_0 T")
    p.set_defaults(func=_berger_report, name="berger report")

    p = sub.add_parser("g2-margin", parents=[common], help="b3 instability margin on a nearly parallel G2 space")
    p.add_argument("--context", choices=("scal42", "berger"), default="scal42")
    p.set_defaults(func=_g2_margin, name="g2-margin")

    p = sub.add_parser("spectrum", parents=[common], help="Sp(1)-invariant function spectrum")
    p.add_argument("--bound", required=True, metavar="P/Q")
    p.set_defaults(func=_spectrum, name="spectrum")

    p = sub.add_parser("coindex", parents=[common], help="coindex lower bound from Betti numbers")
    p.add_argument("--b2", type=int, default=0)
    p.add_argument("--b3", type=int, default=0)
    p.add_argument("--kind", choices=("sasaki", "g2", "sasaki-g2"), required=True)
    p.set_defaults(func=_coindex, name="coindex")

    p = sub.add_parser("all", parents=[common], help="every default check in one report")
    p.set_defaults(func=_all, name="all")
    return parser


# -- rendering -----------------------------------------------------------------

def render_json(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj if not isinstance(obj, list) else ", ".join(str(x) for x in obj)


def render_text(payload) -> str:
    rows = list(_flatten(payload))
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _validate(args):
    if args.counterfactual and args.name not in COUNTERFACTUAL_COMMANDS:
        raise UsageError("--counterfactual is only allowed for 'berger report' and 'g2-margin'")
    if args.tau0_squared is not None and not args.counterfactual:
        raise UsageError("--tau0-squared requires --counterfactual")
    if args.counterfactual and args.tau0_squared is None:
        raise UsageError("--counterfactual requires --tau0-squared")


def _destination(args) -> Path | None:
    if args.output:
        return Path(args.output)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / (args.name.replace(" ", "_") + ".json" if args.format == "json"
                            else args.name.replace(" ", "_") + ".txt")
    return None


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        payload, failing = args.func(args)
    except (UsageError, NormalizationError) as exc:
        print(f"einstab: error: {exc}", file=sys.stderr)
        return 2
    except EinstabError as exc:
        if isinstance(exc, ValueError):
            print(f"einstab: error: {exc}", file=sys.stderr)
            return 2
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1
    text = render_json(payload) if args.format == "json" else render_text(payload)
    dest = _destination(args)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text, encoding="utf-8")
    if args.golden:
        golden = Path(args.golden)
        if not golden.exists() or golden.read_text(encoding="utf-8") != text:
            print(f"FAIL: output differs from golden file {golden}", file=sys.stderr)
            return 1
    if failing:
        print(f"FAIL: {failing}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
