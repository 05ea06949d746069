"""Command-line front end: ``nonfree verify-example N``, kernel commands on a ring-spec
file (``nonfree --ring FILE <command>``) and ``nonfree --recheck REPORT``."""

from __future__ import annotations

import argparse
import sys

from .constructions import (
    Item,
    _run,
    build_example1,
    build_example2,
    build_example3,
    certify_indecomposable,
    periodic_item,
    shrink_item,
)
from .loci import grade_positive, w0_witness_ideal
from .modules import annihilator, canonical_module, ext, tor
from .report import Report, ReportFormatError, recheck_report
from .ringspec import RingSpecError, load_ring_spec
from .serial import digest, module_payload, ring_payload
from .totref import check_semidualizing, check_totally_c_reflexive_bounded


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nonfree", description=__doc__.splitlines()[0])
    ap.add_argument("--ring", metavar="FILE", help="ring-spec file for the kernel commands")
    ap.add_argument("--recheck", metavar="REPORT", help="re-verify every item of a report from its payloads")
    ap.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    ap.add_argument("--no-timings", action="store_true", help="omit the trailing timings section")
    sub = ap.add_subparsers(dest="command")

    ve = sub.add_parser("verify-example", help="verify one of the three worked examples")
    ve.add_argument("n", type=int, choices=(1, 2, 3))
    ve.add_argument("--char", type=int, default=0, help="characteristic (0 or a prime)")
    ve.add_argument("--count", type=int, default=10, help="example 3: number of sampled f")
    ve.add_argument("--max-degree", type=int, default=3, help="example 3: degree bound for f")
    ve.add_argument("--seed", type=int, default=7, help="example 3: PRNG seed")
    ve.add_argument("--trunc", type=int, default=3, help="example 3: truncation for indecomposability")
    ve.add_argument("--defining", help="example 1: replacement defining ideal, 'f1; f2; ...'")
    ve.add_argument("--prime", help="example 2: replacement prime, 'f1; f2; ...'")

    g = sub.add_parser("gb", help="reduced Groebner bases of the named ideals")
    g.add_argument("ideals", nargs="*", metavar="IDEAL")
    g = sub.add_parser("nf-locus", help="nonfree locus of a module")
    g.add_argument("module")
    for name in ("ext", "tor"):
        g = sub.add_parser(name, help=f"{name.capitalize()}^i(M, N)")
        g.add_argument("module")
        g.add_argument("other")
        g.add_argument("index", type=int)
    g = sub.add_parser("ann", help="annihilator of a module")
    g.add_argument("module")
    g = sub.add_parser("grade-positive", help="whether an ideal contains a nonzerodivisor")
    g.add_argument("ideal")
    g = sub.add_parser("shrink", help="shrink the nonfree locus of M onto V(p)")
    g.add_argument("module")
    g.add_argument("ideal")
    g.add_argument("--hint", action="append", default=[], metavar="IDEAL")
    g.add_argument("--max-iter", type=int, default=10)
    g = sub.add_parser("totref-check", help="total reflexivity: periodic certificate or bounded check")
    g.add_argument("module")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--bound", type=int)
    mode.add_argument("--periodic", type=int, metavar="P")
    g.add_argument("--dualizing", metavar="MODULE", default="R",
                   help="module C for the bounded G_C check ('canonical' for the canonical module)")
    g = sub.add_parser("indecomposable", help="indecomposability certificate")
    g.add_argument("module")
    g.add_argument("--trunc", type=int, default=3)
    g = sub.add_parser("canonical-module", help="canonical module of a Cohen-Macaulay ring")
    g.add_argument("--bound", type=int, default=3, help="bound for the semidualizing check")
    g = sub.add_parser("semidualizing", help="bounded semidualizing check")
    g.add_argument("module")
    g.add_argument("--bound", type=int, required=True)
    return ap


def _split(text: str | None):
    if not text:
        return None
    return [s.strip() for s in text.split(";") if s.strip()]


def _command_line(args) -> str:
    """A normalized rendering of the parsed command, independent of flag order."""
    skip = {"ring", "recheck", "out", "no_timings", "command"}
    parts = [args.command]
    for key in sorted(vars(args)):
        if key in skip:
            continue
        v = getattr(args, key)
        if v is None or v == []:
            continue
        parts.append(f"{key}={v}")
    if args.ring:
        parts.insert(0, f"--ring {args.ring}")
    return " ".join(str(p) for p in parts)


def verify_example(args) -> list[Item]:
    if args.n == 1:
        return build_example1(args.char, _split(args.defining))
    if args.n == 2:
        return build_example2(args.char, _split(args.prime))
    return build_example3(args.count, args.max_degree, args.seed, args.trunc, args.char)


def generic(args, spec) -> list[Item]:
    R = spec.ring
    rp = ring_payload(R)
    cmd = args.command
    # names are resolved up front so that unknown names are usage errors, not items
    try:
        if cmd == "gb":
            names = args.ideals or sorted(spec.ideals)
            ideals = {n: spec.ideal(n) for n in names}
        if cmd in ("nf-locus", "ext", "tor", "ann", "shrink", "totref-check", "indecomposable", "semidualizing"):
            M = spec.module(args.module)
        if cmd in ("ext", "tor"):
            N = spec.module(args.other)
        if cmd in ("grade-positive", "shrink"):
            p = spec.ideal(args.ideal)
        if cmd == "shrink":
            hints = [spec.ideal(h) for h in args.hint]
        if cmd == "totref-check" and args.bound is not None and args.dualizing != "canonical":
            C = spec.module(args.dualizing)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None

    if cmd == "gb":
        items = []
        for n, J in ideals.items():
            def one(J=J):
                return J.is_groebner_basis_valid(), {"kind": "groebner_basis", "ring": rp,
                                                    "generators": [str(g) for g in J.gens],
                                                    "gb": J.to_strings()}

            items.append(_run(f"gb_{n}", one))
        return items
    if cmd == "nf-locus":
        def fn():
            J = w0_witness_ideal(M)
            return True, {"kind": "nonfree_locus", "ring": rp, "module": module_payload(M),
                          "ideal": J.to_strings()}

        return [_run(f"nf_locus_{args.module}", fn)]
    if cmd in ("ext", "tor"):
        def fn():
            res = (ext if cmd == "ext" else tor)(M, N, args.index)
            return True, {"kind": cmd, "ring": rp, "module": module_payload(M), "other": module_payload(N),
                          "index": args.index, "result": module_payload(res), "is_zero": res.is_zero(),
                          "annihilator": annihilator(res).to_strings()}

        return [_run(f"{cmd}_{args.module}_{args.other}_{args.index}", fn)]
    if cmd == "ann":
        def fn():
            return True, {"kind": "annihilator", "ring": rp, "module": module_payload(M),
                          "ideal": annihilator(M).to_strings()}

        return [_run(f"ann_{args.module}", fn)]
    if cmd == "grade-positive":
        def fn():
            v = grade_positive(R, p)
            return v, {"kind": "grade_positive", "ring": rp, "ideal": p.to_strings(), "value": v,
                       "expected": True}

        return [_run(f"grade_positive_{args.ideal}", fn)]
    if cmd == "shrink":
        return [_run(f"shrink_{args.module}_{args.ideal}", lambda: shrink_item(M, p, hints, args.max_iter))]
    if cmd == "totref-check":
        if args.bound is None:
            period = args.periodic if args.periodic is not None else 4
            return [_run(f"totref_{args.module}", lambda: periodic_item(M, period))]

        def fn():
            D = canonical_module(R) if args.dualizing == "canonical" else C
            res = check_totally_c_reflexive_bounded(M, D, args.bound)
            return res.ok, {"kind": "totref_bounded", "ring": rp, "module": module_payload(M),
                            "dualizing": module_payload(D), "bound": args.bound,
                            "verdict": res.verdict, "reason": res.reason}

        return [_run(f"totref_{args.module}", fn)]
    if cmd == "indecomposable":
        def fn():
            res = certify_indecomposable(M, args.trunc)
            ok = res.verdict == "indecomposable"
            return ok, {"kind": "indecomposable", "ring": rp, "module": module_payload(M),
                        "truncation": args.trunc, "verdict": res.verdict,
                        "algebra_dim": res.algebra_dim}, "PASS" if ok else "UNSUPPORTED"

        return [_run(f"indecomposable_{args.module}", fn)]
    if cmd == "canonical-module":
        def fn():
            K = canonical_module(R)
            res = check_semidualizing(K, args.bound)
            return res.ok, {"kind": "canonical_module", "ring": rp, "result": module_payload(K),
                            "bound": args.bound, "semidualizing": res.verdict}

        return [_run("canonical_module", fn)]
    if cmd == "semidualizing":
        def fn():
            res = check_semidualizing(M, args.bound)
            return res.ok, {"kind": "semidualizing", "ring": rp, "module": module_payload(M),
                            "bound": args.bound, "verdict": res.verdict, "reason": res.reason}

        return [_run(f"semidualizing_{args.module}", fn)]
    raise UsageError(f"unknown command {cmd!r}")


def run(argv=None) -> tuple[int, str, bool]:
    """Parse ``argv`` and produce (exit status, report text, whether to print it)."""
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.recheck:
        with open(args.recheck, encoding="utf-8") as fh:
            text = fh.read()
        rep = recheck_report(text)
    else:
        if args.command is None:
            raise UsageError("a command or --recheck is required")
        command = _command_line(args)
        if args.command == "verify-example":
            if args.ring:
                raise UsageError("verify-example builds its own rings; --ring is not used")
            rep = Report(command, digest(command))
            rep.items = verify_example(args)
        else:
            if not args.ring:
                raise UsageError(f"{args.command} needs --ring FILE")
            spec = load_ring_spec(args.ring)
            rep = Report(command, digest(command + "\n" + spec.text))
            rep.items = generic(args, spec)
    text = rep.render(timings=not args.no_timings)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return (0 if rep.all_pass else 1), text, not args.out


def main(argv=None) -> int:
    try:
        status, text, show = run(argv)
    except (RingSpecError, ReportFormatError, UsageError, OSError) as exc:
        print(f"nonfree: error: {exc}", file=sys.stderr)
        return 2
    if show:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
