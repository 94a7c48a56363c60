"""Command-line interface.

Standard output carries only the JSON result document; diagnostics go to
standard error. Exit codes: 0 success, 2 malformed input, 3 internal
invariant failure or theorem discrepancy, 4 verification failure, 5 digest
mismatch, 6 module infinite or above the exhaustive-search cap.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, codec
from .codec import DocumentError
from .modules import InfiniteModule, SystemInstance
from .oracle import (DEFAULT_BOX, DEFAULT_CAP, DigestMismatch, ModuleTooLarge, TheoremViolation,
                     all_systems, cross_validate, exhaustive_pr, partition_blocks, sampled_systems,
                     verify_certificate)
from .rings import CATALOG, Integers
from .witness import (CertificateInvariantError, DegenerateSystem, NotPartitionRegular, WitnessCertificate,
                      circle_plan, colour_classes, decide)

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_INTERNAL = 3
EXIT_VERIFY_FAILED = 4
EXIT_DIGEST = 5
EXIT_TOO_LARGE = 6


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _header(system: SystemInstance | None = None) -> dict:
    doc = {"tool": "radocert", "version": __version__}
    if system is not None:
        doc["input_digest"] = codec.system_digest(system)
    return doc


def _read_system(path: str) -> SystemInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, f"cannot read {path}: {exc.strerror}") from None
    try:
        return codec.parse_system(text)
    except DocumentError as exc:
        raise CliError(EXIT_MALFORMED, f"{path}: {exc}") from None


def _read_certificate(path: str) -> WitnessCertificate:
    import json

    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_MALFORMED, f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return WitnessCertificate.from_doc(raw)
    except DocumentError as exc:
        raise CliError(EXIT_MALFORMED, f"{path}: {exc}") from None


def _budget(args, system: SystemInstance):
    if args.exhaustive:
        return "exhaustive"
    if args.box is not None:
        return args.box
    return "exhaustive" if system.module.is_finite else DEFAULT_BOX


def _emit(doc: dict) -> None:
    sys.stdout.write(codec.dumps(doc))


def cmd_decide(args) -> int:
    system = _read_system(args.system)
    try:
        verdict = decide(system)
    except DegenerateSystem as exc:
        raise CliError(EXIT_MALFORMED, f"{args.system}: b must be nonzero ({exc})") from None
    doc = _header(system)
    if not isinstance(verdict, NotPartitionRegular):
        doc["verdict"] = "partition_regular"
        doc["constant_solution"] = codec.module_element_to_doc(system.module, verdict.constant_solution)
        _emit(doc)
        return EXIT_OK

    cert = verdict.certificate
    doc["verdict"] = "not_partition_regular"
    doc["certificate"] = cert.to_doc()
    doc["colour_bound"] = str(cert.d ** cert.n)
    if system.module.is_finite:
        classes = colour_classes(system, cert)
        doc["realized_colours"] = str(len(classes))
        doc["colour_classes"] = [[codec.module_element_to_doc(system.module, t) for t in c] for c in classes]
    doc["circle"] = circle_plan(system, cert)
    if args.check:
        try:
            report = verify_certificate(system, cert, _budget(args, system))
        except InfiniteModule as exc:
            raise CliError(EXIT_TOO_LARGE, str(exc)) from None
        doc["check"] = report.to_doc(system)
        if not report.passed:
            _emit(doc)
            print(f"self-check failed: {report.failed_checks or 'monochromatic solution found'}",
                  file=sys.stderr)
            return EXIT_INTERNAL
    _emit(doc)
    return EXIT_OK


def cmd_verify(args) -> int:
    system = _read_system(args.system)
    cert = _read_certificate(args.certificate)
    try:
        report = verify_certificate(system, cert, _budget(args, system))
    except DigestMismatch as exc:
        raise CliError(EXIT_DIGEST, f"{args.certificate}: {exc}") from None
    except InfiniteModule as exc:
        raise CliError(EXIT_TOO_LARGE, str(exc)) from None
    doc = _header(system)
    doc.update(report.to_doc(system))
    _emit(doc)
    if not report.passed:
        reason = ", ".join(report.failed_checks) or "monochromatic solution found"
        print(f"verification failed: {reason}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_exhaust(args) -> int:
    system = _read_system(args.system)
    try:
        is_pr, part = exhaustive_pr(system, args.cap)
    except (InfiniteModule, ModuleTooLarge) as exc:
        raise CliError(EXIT_TOO_LARGE, str(exc)) from None
    doc = _header(system)
    doc["partition_regular"] = is_pr
    if part is None:
        doc["blocking_partition"] = None
    else:
        blocks = partition_blocks(part, system.module.elements())
        doc["blocking_partition"] = [[codec.module_element_to_doc(system.module, t) for t in blk]
                                     for blk in blocks]
        doc["restricted_growth_string"] = [str(p) for p in part]
    _emit(doc)
    return EXIT_OK


def _catalog(names: str):
    out = []
    for name in filter(None, (x.strip() for x in names.split(","))):
        ring = CATALOG.get(name)
        if ring is None:
            raise CliError(EXIT_MALFORMED, f"unknown ring {name!r}; known: {', '.join(CATALOG)}")
        if not ring.is_finite:
            raise CliError(EXIT_TOO_LARGE, f"ring {name} is infinite")
        out.append((name, ring))
    return out


def cmd_survey(args) -> int:
    catalog = _catalog(args.ring_catalog)
    doc = _header()
    doc["seed"] = str(args.seed)
    doc["sample"] = None if args.sample is None else str(args.sample)
    rings, total = [], 0
    for name, ring in catalog:
        if ring.size > args.cap:
            raise CliError(EXIT_TOO_LARGE, f"ring {name} has {ring.size} elements, cap is {args.cap}")
        shapes, ring_total = [], 0
        for m in range(1, args.max_m + 1):
            for n in range(1, args.max_n + 1):
                if args.sample is None:
                    systems = all_systems(ring, m, n)
                else:
                    systems = sampled_systems(ring, m, n, args.sample, args.seed)
                try:
                    summary = cross_validate(systems, args.cap)
                except TheoremViolation as exc:
                    doc["discrepancies"] = "1"
                    doc["counterexample"] = exc.bundle
                    _emit(doc)
                    print(f"discrepancy over {name} with m={m}, n={n}", file=sys.stderr)
                    return EXIT_INTERNAL
                shapes.append({"m": str(m), "n": str(n),
                               **{k: str(v) for k, v in summary.items() if k != "discrepancies"}})
                ring_total += summary["systems"]
        rings.append({"ring": name, "systems": str(ring_total), "shapes": shapes})
        total += ring_total
        print(f"{name}: {ring_total} systems, no discrepancies", file=sys.stderr)
    doc["rings"] = rings
    doc["systems"] = str(total)
    doc["discrepancies"] = "0"
    _emit(doc)
    return EXIT_OK


def selftest_checks() -> list[tuple[str, bool]]:
    """Small built-in battery: known verdicts, certificate verification, a mini survey."""
    z = Integers()
    out = []
    v = decide(SystemInstance.build(z, [[1, 1]], [2]))
    out.append(("Z: x+y=2 is partition regular", not isinstance(v, NotPartitionRegular)))
    parity = SystemInstance.build(z, [[1, 1]], [1])
    v = decide(parity)
    ok = isinstance(v, NotPartitionRegular) and v.certificate.d == 2
    out.append(("Z: x+y=1 has a parity certificate", ok))
    out.append(("Z: parity certificate passes box search",
                ok and verify_certificate(parity, v.certificate, DEFAULT_BOX).passed))
    nil = SystemInstance.build(CATALOG["Z2[x]/(x^2)"], [[[0, 1], [0, 1]]], [[0, 1]])
    v = decide(nil)
    out.append(("Z2[x]/(x^2): xy+xz=x certificate passes exhaustive search",
                isinstance(v, NotPartitionRegular) and verify_certificate(nil, v.certificate).passed))
    try:
        cross_validate(all_systems(CATALOG["Z4"], 1, 2))
        out.append(("Z4, m=1, n=2: exhaustive search agrees with constant solutions", True))
    except TheoremViolation:
        out.append(("Z4, m=1, n=2: exhaustive search agrees with constant solutions", False))
    return out


def cmd_selftest(args) -> int:
    checks = selftest_checks()
    doc = _header()
    doc["checks"] = [{"name": n, "passed": ok} for n, ok in checks]
    doc["verdict"] = "pass" if all(ok for _, ok in checks) else "fail"
    _emit(doc)
    for n, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {n}", file=sys.stderr)
    return EXIT_OK if doc["verdict"] == "pass" else EXIT_INTERNAL


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radocert", description=(
        "Decide partition regularity of Ax = b over rings and modules, with witness colourings."))
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def budget_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--box", type=_nonneg, metavar="RADIUS",
                       help=f"box search radius for infinite modules (default {DEFAULT_BOX})")
        g.add_argument("--exhaustive", action="store_true", help="search all of M^n (finite modules)")

    p = sub.add_parser("decide", help="decide a system; emit a constant solution or a certificate")
    p.add_argument("system")
    p.add_argument("--check", action="store_true", help="also verify the certificate by search")
    budget_flags(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", help="check a certificate against a system")
    p.add_argument("system")
    p.add_argument("certificate")
    budget_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exhaust", help="brute-force partition regularity over a finite module")
    p.add_argument("system")
    p.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="largest module size searched")
    p.set_defaults(func=cmd_exhaust)

    p = sub.add_parser("survey", help="cross-validate the theorem over catalog rings")
    p.add_argument("--ring-catalog", default="Z2,Z3,Z4,Z2[x]/(x^2),F4,Z2xZ2",
                   help=f"comma-separated ring names from: {', '.join(CATALOG)}")
    p.add_argument("--max-m", type=_positive, default=1)
    p.add_argument("--max-n", type=_positive, default=2)
    p.add_argument("--sample", type=_positive, default=None,
                   help="draw this many random systems per shape instead of enumerating all")
    p.add_argument("--seed", type=_nonneg, default=0, help="64-bit seed for --sample")
    p.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("selftest", help="run the built-in sanity battery")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) >= 2 ** 64:
        parser.error("--seed must fit in 64 bits")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"radocert: {exc}", file=sys.stderr)
        return exc.code
    except CertificateInvariantError as exc:
        print(f"radocert: internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
