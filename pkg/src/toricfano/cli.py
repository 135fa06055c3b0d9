"""Command line entry point: ``toricfano <command> ...``.

Exit status 0 on success, 1 when the input fails validation or a check
comes out negative, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .classify import canonical_form, classify, enumerate_iib, enumerate_polygons_iib, key_digest
from .constructions import crepant_resolve_2d, family_i, fan_from_polygon, sporadic, surface_family
from .documents import emit_fan, export_gamma_off, parse_fan, parse_polygon_file
from .errors import ToricError
from .local_fano import fano_grade

CLASSIFIED = ("Affine", "FamilyI", "PolytopeType", "Sporadic")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().rstrip()}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toricfano", description="Local toric Fano fans over the affine space.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("check", help="grade a fan document")
    s.add_argument("fan_file")
    s = sub.add_parser("classify", help="classify a fan document")
    s.add_argument("fan_file")

    s = sub.add_parser("construct", help="emit a fan document for a named construction")
    csub = s.add_subparsers(dest="family", metavar="family", parser_class=_Parser)
    csub.required = True
    c = csub.add_parser("family-i", help="face fan of Conv(0,e1,e2,e3,(m,m,1))")
    c.add_argument("--m", type=int, required=True)
    c = csub.add_parser("surface", help="smooth weak Fano surface fan or its Gorenstein model")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--gorenstein", action="store_true")
    c = csub.add_parser("polygon", help="fan of an admissible polygon file")
    c.add_argument("polygon_file")
    c = csub.add_parser("sporadic", help="row k of the sporadic table")
    c.add_argument("--k", type=int, required=True)

    s = sub.add_parser("resolve2d", help="crepant resolution of a Gorenstein surface fan")
    s.add_argument("fan_file")

    s = sub.add_parser("enumerate", help="exhaustive searches")
    esub = s.add_subparsers(dest="target", metavar="target", parser_class=_Parser)
    esub.required = True
    esub.add_parser("iib", help="Gorenstein local Fano fans in the case-IIb region")
    esub.add_parser("polygons", help="polygons in the case-IIb plane")

    s = sub.add_parser("export-gamma", help="write the body of a fan as OFF")
    s.add_argument("fan_file")
    return p


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _check(args, out):
    grade = fano_grade(parse_fan(_read(args.fan_file)))
    out.write("\n".join(grade.lines()) + "\n")
    return 0 if grade.gorenstein and grade.fano else 1


def _classify(args, out):
    f = parse_fan(_read(args.fan_file))
    label = classify(f)
    out.write(f"{label}\n")
    if label.detail:
        out.write(f"detail: {label.detail}\n")
    out.write(f"label={label} key={key_digest(canonical_form(f))}\n")
    return 0 if label.kind in CLASSIFIED else 1


def _construct(args, out):
    if args.family == "family-i":
        f, name = family_i(args.m), f"family-i m={args.m}"
    elif args.family == "surface":
        f = surface_family(args.n, args.gorenstein)
        name = f"surface n={args.n}" + (" gorenstein" if args.gorenstein else "")
    elif args.family == "polygon":
        text = _read(args.polygon_file).decode("utf-8")
        f, name = fan_from_polygon(parse_polygon_file(text)), f"polygon {args.polygon_file}"
    else:
        f, name = sporadic(args.k), f"sporadic k={args.k}"
    out.write(emit_fan(f, name=name, source="toricfano construct"))
    return 0


def _resolve2d(args, out):
    f = crepant_resolve_2d(parse_fan(_read(args.fan_file)))
    out.write(emit_fan(f, source="toricfano resolve2d"))
    return 0


def _enumerate(args, out):
    report = enumerate_iib() if args.target == "iib" else enumerate_polygons_iib()
    out.write("\n".join(report.lines()) + "\n")
    return 0


def _export(args, out):
    out.write(export_gamma_off(parse_fan(_read(args.fan_file))))
    return 0


COMMANDS = {
    "check": _check,
    "classify": _classify,
    "construct": _construct,
    "resolve2d": _resolve2d,
    "enumerate": _enumerate,
    "export-gamma": _export,
}


def run_command(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except ToricError as exc:
        cause = getattr(exc, "cause", None)
        extra = f" [{cause.code}]" if isinstance(cause, ToricError) else ""
        err.write(f"error: {exc.code}{extra}: {exc}\n")
        return 1
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main(argv=None) -> int:
    try:
        return run_command(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
