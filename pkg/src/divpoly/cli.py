"""Command-line front end.

Commands: validate, dualize, fansy, invariants, cone, recover, generators,
normality, downgrade, render.  Inputs are JSON documents (see serialize);
outputs are canonical JSON or SVG, written atomically.

Exit codes: 0 success, 1 a computed negative verdict, 2 errors (parsing,
precondition failures), 3 an UNKNOWN verdict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import serialize as ser
from .curves import NO, UNKNOWN, YES
from .divisorial import (
    DivisorialPolytope,
    degree_number,
    dualize_psi,
    ehrhart_psi,
    hilbert_polynomial,
    is_smooth,
    toric_downgrade,
    validate as validate_psi,
)
from .errors import DivpolyError
from .fansy import from_divisorial_fan, to_divisorial_fan, validate as validate_fansy
from .pdiv import properness_report
from .samples import LITERAL_VARIANT_NOTE, matches_literal_variant
from .support import dualize_h, is_ample, is_cartier
from .cones import cone_divisor, generators, recover, recover_divpoly

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2
EXIT_UNKNOWN = 3


def _verdict_str(v):
    return {YES: "yes", NO: "no", UNKNOWN: "unknown"}[v]


def _verdict_exit(v):
    return {YES: EXIT_OK, NO: EXIT_NEGATIVE, UNKNOWN: EXIT_UNKNOWN}[v]


def _load(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise DivpolyError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ser.ParseError(path, f"invalid JSON: {exc}") from None
    return ser.from_json(obj)


def _write_atomic(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".divpoly-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(doc, args):
    _write_atomic(ser.dumps(doc), args.out)


def _apply_genus_override(kind, value, genus):
    if genus is None:
        return value
    if kind != "divisorial_polytope":
        raise DivpolyError("--genus-override applies to divisorial polytope inputs")
    curve = value.curve.with_genus(genus)
    relabel = {p.label: q for q in curve.points for p in value.curve.points if p.label == q.label}
    pieces = {relabel[p.label]: affines for p, affines in value.pieces}
    return DivisorialPolytope(curve, value.box, pieces)


def _fmt_vec(v):
    return ",".join(str(x) for x in v)


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args):
    kind, value = _load(args.input)
    value = _apply_genus_override(kind, value, args.genus_override)
    if kind == "divisorial_polytope":
        verdict, report = validate_psi(value)
        doc = {
            "type": "validation",
            "subject": kind,
            "verdict": _verdict_str(verdict),
            "report": {
                name: {"verdict": _verdict_str(v), "witnesses": [str(w) for w in wit]}
                for name, (v, wit) in report.items()
            },
        }
        _emit(doc, args)
        return _verdict_exit(verdict)
    if kind == "marked_fansy_divisor":
        verdict, report = validate_fansy(value)
        doc = {
            "type": "validation",
            "subject": kind,
            "verdict": _verdict_str(verdict),
            "report": {
                name: {"verdict": _verdict_str(v), "witnesses": [str(w) for w in wit]}
                for name, (v, wit) in report.items()
            },
        }
        _emit(doc, args)
        return _verdict_exit(verdict)
    if kind == "support_function":
        ok, problems = value.validate()
        cart = is_cartier(value) if ok is YES else UNKNOWN
        amp = is_ample(value) if cart is YES else UNKNOWN
        verdict = ok.both(cart)
        doc = {
            "type": "validation",
            "subject": kind,
            "verdict": _verdict_str(verdict),
            "problems": problems,
            "cartier": _verdict_str(cart),
            "ample": _verdict_str(amp),
        }
        _emit(doc, args)
        return _verdict_exit(verdict)
    if kind == "polyhedral_divisor":
        verdict, details = properness_report(value)
        doc = {
            "type": "validation",
            "subject": kind,
            "verdict": _verdict_str(verdict),
            "proper": _verdict_str(verdict),
            "locus": details.get("locus"),
        }
        if "witness" in details:
            doc["witness"] = ser.vec_to_json(details["witness"])
            doc["reason"] = details.get("reason")
        if matches_literal_variant(value):
            doc["note"] = LITERAL_VARIANT_NOTE
        _emit(doc, args)
        return _verdict_exit(verdict)
    if kind == "divisorial_fan":
        try:
            contracted = from_divisorial_fan(value)
        except DivpolyError as exc:
            doc = {"type": "validation", "subject": kind, "verdict": "no", "reason": str(exc)}
            _emit(doc, args)
            return EXIT_NEGATIVE
        doc = {
            "type": "validation",
            "subject": kind,
            "verdict": "yes",
            "fansy": ser.fansy_to_json(contracted),
        }
        _emit(doc, args)
        return EXIT_OK
    raise DivpolyError(f"validate does not handle {kind}")


def cmd_dualize(args):
    kind, value = _load(args.input)
    if kind == "divisorial_polytope":
        _base, h = dualize_psi(value)
        _emit(ser.support_to_json(h), args)
        return EXIT_OK
    if kind == "support_function":
        psi = dualize_h(value)
        _emit(ser.divpoly_to_json(psi), args)
        return EXIT_OK
    raise DivpolyError("dualize expects a divisorial polytope or a support function")


def cmd_fansy(args):
    kind, value = _load(args.input)
    if kind == "marked_fansy_divisor":
        verdict, report = validate_fansy(value)
        if verdict is NO:
            doc = {
                "type": "validation",
                "subject": kind,
                "verdict": "no",
                "report": {
                    name: {"verdict": _verdict_str(v), "witnesses": [str(w) for w in wit]}
                    for name, (v, wit) in report.items()
                },
            }
            _emit(doc, args)
            return EXIT_NEGATIVE
        family = to_divisorial_fan(value)
        _emit(ser.divisorial_fan_to_json(family), args)
        return EXIT_OK
    if kind == "divisorial_fan":
        contracted = from_divisorial_fan(value)
        _emit(ser.fansy_to_json(contracted), args)
        return EXIT_OK
    raise DivpolyError("fansy expects a marked fansy divisor or a divisorial fan")


def cmd_invariants(args):
    kind, value = _load(args.input)
    value = _apply_genus_override(kind, value, args.genus_override)
    if kind == "support_function":
        value = dualize_h(value)
        kind = "divisorial_polytope"
    if kind != "divisorial_polytope":
        raise DivpolyError("invariants expects a divisorial polytope (or support function)")
    psi = value
    verdict, _report = validate_psi(psi)
    if verdict is NO:
        raise DivpolyError("input is not a valid divisorial polytope; run validate")
    smooth, witnesses = is_smooth(psi)
    hp = hilbert_polynomial(psi)
    doc = {
        "type": "invariants",
        "degree": ser.rat_to_json(degree_number(psi)),
        "ehrhart": [ser.rat_to_json(c) for c in ehrhart_psi(psi).coeffs],
        "smooth": smooth,
        "witnesses": [[label, _fmt_vec(v)] for label, v in witnesses],
    }
    if isinstance(hp, tuple):
        doc["hilbert_upper"] = [ser.rat_to_json(c) for c in hp[0].coeffs]
        doc["hilbert_lower"] = [ser.rat_to_json(c) for c in hp[1].coeffs]
    else:
        doc["hilbert"] = [ser.rat_to_json(c) for c in hp.coeffs]
        if args.hilbert_k:
            doc["hilbert_table"] = {str(k): ser.rat_to_json(hp(k)) for k in args.hilbert_k}
    _emit(doc, args)
    return EXIT_OK


def cmd_cone(args):
    kind, value = _load(args.input)
    if kind == "divisorial_polytope":
        _base, value = dualize_psi(value)
        kind = "support_function"
    if kind != "support_function":
        raise DivpolyError("cone expects a support function (or divisorial polytope)")
    d = cone_divisor(value)
    _emit(ser.pdiv_to_json(d), args)
    return EXIT_OK


def cmd_recover(args):
    kind, value = _load(args.input)
    if kind != "polyhedral_divisor":
        raise DivpolyError("recover expects a polyhedral divisor")
    verdict, details = properness_report(value)
    if verdict is not YES:
        doc = {
            "type": "validation",
            "subject": kind,
            "verdict": _verdict_str(verdict),
            "proper": _verdict_str(verdict),
        }
        if "witness" in details:
            doc["witness"] = ser.vec_to_json(details["witness"])
            doc["reason"] = details.get("reason")
        if matches_literal_variant(value):
            doc["note"] = LITERAL_VARIANT_NOTE
        _emit(doc, args)
        return _verdict_exit(verdict)
    base, h = recover(value)
    psi = recover_divpoly(value)
    doc = {
        "type": "recovered",
        "support_function": ser.support_to_json(h),
        "divisorial_polytope": ser.divpoly_to_json(psi),
    }
    _emit(doc, args)
    return EXIT_OK


def _generator_report_json(report):
    doc = {
        "type": "generator_report",
        "constant": report.constant,
        "weights": [list(w) for w in report.g_all],
        "alphas": [
            {"weight": list(w), "alpha": a}
            for w, a in sorted(report.alphas.items())
        ],
        "g_tau": [
            {"cone": ser.cone_to_json(c), "weights": [list(w) for w in ws]}
            for c, ws in sorted(report.g_tau.items(), key=lambda cw: cw[0].sort_key())
        ],
    }
    if report.g_min is not None:
        doc["g_min"] = [list(w) for w in report.g_min]
    if report.generators is not None:
        doc["generators"] = [
            {"weight": list(w), "sections": report.generators[w].function_strings()}
            for w in report.g_min
        ]
    doc["normality"] = _verdict_str(report.normality)
    return doc


def cmd_generators(args):
    kind, value = _load(args.input)
    if kind == "support_function":
        value = cone_divisor(value)
    elif kind != "polyhedral_divisor":
        raise DivpolyError("generators expects a polyhedral divisor or support function")
    report = generators(value, cap=args.alpha_cap)
    _emit(_generator_report_json(report), args)
    return EXIT_OK


def cmd_normality(args):
    kind, value = _load(args.input)
    if kind == "support_function":
        d = cone_divisor(value)
    elif kind == "polyhedral_divisor":
        d = value
    else:
        raise DivpolyError("normality expects a support function or polyhedral divisor")
    report = generators(d, cap=args.alpha_cap)
    doc = {
        "type": "normality",
        "normality": _verdict_str(report.normality),
        "g_min": [list(w) for w in report.g_min],
    }
    _emit(doc, args)
    return _verdict_exit(report.normality)


def cmd_downgrade(args):
    try:
        with open(args.input) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DivpolyError(f"cannot read {args.input}: {exc}") from None
    delta = ser.poly_from_json(obj.get("polytope"), "$.polytope")
    f = ser.vec_from_json(obj.get("subgroup"), "$.subgroup")
    g_rows = [ser.vec_from_json(r, f"$.projection[{i}]") for i, r in enumerate(obj.get("projection", []))]
    s_cols = [ser.vec_from_json(r, f"$.section[{i}]") for i, r in enumerate(obj.get("section", []))]
    psi = toric_downgrade(delta, f, g_rows, s_cols)
    _emit(ser.divpoly_to_json(psi), args)
    return EXIT_OK


def cmd_render(args):
    from .render import render_divisorial_polytope, render_fansy, render_support_function

    kind, value = _load(args.input)
    if kind == "divisorial_polytope":
        svg = render_divisorial_polytope(value)
    elif kind == "marked_fansy_divisor":
        svg = render_fansy(value)
    elif kind == "support_function":
        svg = render_support_function(value)
    else:
        raise DivpolyError("render expects a divisorial polytope, fansy divisor or support function")
    _write_atomic(svg, args.out)
    return EXIT_OK


_COMMANDS = {
    "validate": cmd_validate,
    "dualize": cmd_dualize,
    "fansy": cmd_fansy,
    "invariants": cmd_invariants,
    "cone": cmd_cone,
    "recover": cmd_recover,
    "generators": cmd_generators,
    "normality": cmd_normality,
    "downgrade": cmd_downgrade,
    "render": cmd_render,
}


def _parse_hilbert_k(text):
    try:
        return [int(k) for k in text.split(",") if k.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of integers")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="divpoly",
        description="Exact computations with divisorial polytopes and their relatives",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="input", required=True, help="input JSON document")
        p.add_argument("--out", dest="out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "svg"), default=None)
        p.add_argument("--genus-override", type=int, default=None)
        p.add_argument("--alpha-cap", type=int, default=None)
        p.add_argument("--hilbert-k", type=_parse_hilbert_k, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ser.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except DivpolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
