"""Command line front end: ``nipval VERB INPUT [options]``.

Exit codes: 0 NIP / success, 1 IP / refuted, 2 unknown / inconclusive,
64 usage, 65 parse or descriptor error, 70 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Optional

from sympy import factorint

from . import __version__
from . import serialize as S
from .classifier import classify_nip, imperfect_coarsening_audit, necessary_conditions
from .dsl import format_valued_field, parse_element, parse_group, parse_valued_field
from .errors import DescriptorError, NipvalError, ParseError, PreconditionError, UnsupportedCut, UnsupportedExtension
from .fields import Finite
from .hahn.coeffs import coeff_field
from .hahn.newton import hensel_lift
from .hahn.oracle import (
    CATALOGUE,
    PADIC_CATALOGUE,
    LaurentBase,
    PadicBase,
    cases_from_json,
    fundamental_equality_oracle,
)
from .hahn.parse import parse_poly, parse_series
from .hahn.series import _gauge, invert_trunc
from .logic import show
from .oag import INFINITY, OAGDesc, Z, quotient_and_subgroup, rel_div_hull
from .theories import CompatibleCore, mixed_case, shelah_family, theory_of
from .valfield import QpExt, ValuedFieldDesc, build, hahn, standard_decomposition, structural_flags, triv

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 64, 65, 70

VERBS = ("classify", "decompose", "theory", "shelah", "audit", "eval", "oracle")


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="nipval", description="Decide NIP for henselian valued-field descriptors.")
    p.add_argument("--version", action="version", version=f"nipval {__version__}")
    sub = p.add_subparsers(dest="verb", metavar="VERB", parser_class=_ArgumentParser)
    sub.required = True

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--explain", action="store_true", help="include the justification of every step")

    helps = {
        "classify": "classify a descriptor as NIP, IP or unknown",
        "decompose": "standard decomposition of a mixed characteristic descriptor",
        "theory": "complete-theory tag and completeness hypotheses",
        "shelah": "route an NIP descriptor to its family of NIP valued fields",
        "audit": "check which coarsenings have an imperfect residue field",
    }
    for verb, text in helps.items():
        sp = sub.add_parser(verb, help=text)
        sp.add_argument("input", help="descriptor expression, or a file with one expression per line")
        common(sp)
        if verb == "theory":
            sp.add_argument(
                "--compatible",
                action="store_true",
                help="assume the compatible algebraic core with value group [G]_v(p) (mixed, case c)",
            )

    sp = sub.add_parser("eval", help="evaluate a series literal, invert it or Hensel-lift a root")
    sp.add_argument("input", help="series expression in t, or with --lift a polynomial in X")
    sp.add_argument("--group", default="Z", help="exponent group (default Z)")
    sp.add_argument("--coeffs", default="Q", help="coefficient field: Q or F<q> (default Q)")
    sp.add_argument("--order", type=int, default=None, help="truncation multiplier N (bound N*g)")
    sp.add_argument("--gauge", default=None, help="positive gauge element g (default: least positive element)")
    sp.add_argument("--invert", action="store_true", help="compute a truncated inverse")
    sp.add_argument("--lift", metavar="A0", default=None, help="Hensel-lift the residue root A0 of the polynomial")
    common(sp)

    sp = sub.add_parser("oracle", help="run the fundamental equality oracle")
    sp.add_argument("input", nargs="?", default="catalogue", help="catalogue, padic, or a JSON case file")
    sp.add_argument("--precision", type=int, default=None, help="override the p-adic precision of every case")
    common(sp)
    return p


# ---------------------------------------------------------------- reports


class Report:
    def __init__(self, code: int, text: str, data: dict):
        self.code, self.text, self.data = code, text, data


def _group_text(G) -> str:
    return "trivial" if G.is_trivial else str(G)


def _trail_lines(trail, explain: bool) -> list:
    out = []
    for c in trail:
        out.append(f"  [{c.clause}] {show(c.result)}: {c.detail}")
        if explain:
            out.append(f"      basis: {c.basis}")
    return out


def _classify(K: ValuedFieldDesc, args) -> Report:
    if structural_flags(K).henselian is not True:
        r = necessary_conditions(K)
        lines = [f"input: {format_valued_field(K)}"]
        lines.append("IP: necessary condition fails" if r.refuted else "no conclusion: not known to be henselian")
        lines += _trail_lines(r.trail, args.explain)
        lines.append(f"note: {r.note}")
        return Report(EXIT_REFUTED if r.refuted else EXIT_UNKNOWN, "\n".join(lines), S.necessary_json(K, r))
    v = classify_nip(K)
    lines = [f"input: {format_valued_field(K)}", v.summary()]
    if v.outcome == "IP" and len(v.failed_clauses) > 1:
        lines.append("failing clauses: " + ", ".join(v.failed_clauses))
    lines.append("trail:")
    lines += _trail_lines(v.trail, args.explain)
    code = {"NIP": EXIT_OK, "IP": EXIT_REFUTED}.get(v.outcome, EXIT_UNKNOWN)
    return Report(code, "\n".join(lines), S.verdict_json(K, v))


def _decompose(K: ValuedFieldDesc, args) -> Report:
    d = standard_decomposition(K)
    G = K.value_group
    q0 = quotient_and_subgroup(G, d.delta_0)
    qp = quotient_and_subgroup(G, d.delta_p)
    mid = OAGDesc(G.summands[d.delta_0.index:d.delta_p.index])
    kind = "discrete" if d.quotient_discrete else "dense"
    lines = [
        f"input: {format_valued_field(K)}",
        f"value group {G}, v(p) = {K.value_of_p}",
        f"Delta_0 = {_group_text(q0.subgroup)} (cut {d.delta_0.index})",
        f"Delta_p = {_group_text(qp.subgroup)} (cut {d.delta_p.index})",
        f"Delta_0/Delta_p = {_group_text(mid)} ({kind})",
        f"K --v_0 [{_group_text(q0.quotient)}]--> Kv_0 --v-bar_p [{_group_text(mid)}]--> Kv_p "
        f"--v-bar [{_group_text(qp.subgroup)}]--> Kv",
    ]
    pieces = S.decomposition_json(K, d)["pieces"]
    labels = {
        "K_with_v0": "(K, v_0)",
        "Kv0_with_vbar": "(Kv_0, v-bar)",
        "Kv0_with_vbar_p": "(Kv_0, v-bar_p)",
        "Kvp_with_vbar": "(Kv_p, v-bar)",
        "K_with_vp": "(K, v_p)",
    }
    for key, label in labels.items():
        val = pieces[key]
        lines.append(f"  {label:<16} {val if val is not None else 'not determined by the descriptor'}")
    if args.explain:
        lines += [f"note: {n}" for n in d.notes]
        lines.append("Delta_0 is the smallest convex subgroup containing v(p); Delta_p the largest one not containing it")
    return Report(EXIT_OK, "\n".join(lines), S.decomposition_json(K, d))


def _verdict_gate(K: ValuedFieldDesc, args):
    v = classify_nip(K)
    if v.outcome == "NIP":
        return v, None
    rep = _classify(K, args)
    return v, rep


def _theory(K: ValuedFieldDesc, args) -> Report:
    v, gate = _verdict_gate(K, args)
    if gate is not None:
        gate.text += "\nno theory tag: the descriptor is not NIP"
        return gate
    compatible = None
    if args.compatible and K.is_mixed and v.case == "c":
        compatible = CompatibleCore(rel_div_hull(K.value_group, K.value_of_p))
    tag = theory_of(K, v, compatible)
    mixed = mixed_case(K, v) if K.is_mixed else None
    data = S.theory_json(K, v, tag, mixed)
    lines = [f"input: {format_valued_field(K)}", f"NIP (case {v.case})", f"theory: {tag.notation()}"]
    if mixed is not None:
        lines.append(f"mixed characteristic description: {mixed}")
    complete = data["complete"]
    lines.append("complete: " + ("yes" if complete else "not established"))
    if args.explain or not complete:
        for name, val in data["hypotheses"].items():
            lines.append(f"  {name}: {show(val)}")
    return Report(EXIT_OK, "\n".join(lines), data)


def _shelah(K: ValuedFieldDesc, args) -> Report:
    v, gate = _verdict_gate(K, args)
    if gate is not None:
        gate.text += "\nno family: the descriptor is not NIP"
        return gate
    r = shelah_family(K, v)
    lines = [f"input: {format_valued_field(K)}", r.message]
    if args.explain:
        lines.append(f"note: {r.note}")
    return Report(EXIT_OK, "\n".join(lines), S.shelah_json(K, r))


def _audit(K: ValuedFieldDesc, args) -> Report:
    a = imperfect_coarsening_audit(K)
    lines = [f"input: {format_valued_field(K)}"]
    for c, k in a.residues:
        mark = ""
        if c in a.offending_cuts:
            mark = "  <- imperfect"
        elif c == a.coarsest_char_p_cut and c in a.imperfect_cuts:
            mark = "  (coarsest of residue characteristic p: allowed)"
        lines.append(f"  cut {c}: residue {k if k is not None else 'unknown'}{mark}")
    status = {True: "ok", False: "fails", None: "undetermined"}[a.ok]
    lines.append(f"audit {status}: at most the coarsest residue-characteristic-p coarsening may be imperfect")
    if args.explain and a.offending_cuts:
        lines.append("offending cuts: " + ", ".join(map(str, a.offending_cuts)))
    code = {True: EXIT_OK, False: EXIT_REFUTED, None: EXIT_UNKNOWN}[a.ok]
    return Report(code, "\n".join(lines), S.audit_json(K, a))


DESCRIPTOR_VERBS: dict = {
    "classify": _classify,
    "decompose": _decompose,
    "theory": _theory,
    "shelah": _shelah,
    "audit": _audit,
}


def _eval(args) -> Report:
    group = parse_group(args.group)
    field = coeff_field(args.coeffs)
    gauge = None if args.gauge is None else parse_element(args.gauge)
    if args.lift is not None:
        f = parse_poly(args.input, group, field)
        root_series = parse_series(args.lift, group, field)
        if root_series.is_zero():
            a0 = field.zero
        elif len(root_series.terms) == 1 and root_series.terms[0][0].is_zero():
            a0 = root_series.terms[0][1]
        else:
            raise PreconditionError("the residue root must be a constant")
        N = 10 if args.order is None else args.order
        r = hensel_lift(f, a0, N, gauge)
        final = f(r.root).valuation()
        extra = {
            "order": N,
            "gauge": str(_gauge(group, gauge)),
            "lift": {
                "polynomial": str(f),
                "residue_root": str(a0),
                "root": str(r.root),
                "bound": str(r.bound),
                "defects": ["inf" if d is INFINITY else str(d) for d in r.defects],
                "doubling": r.doubling_holds(),
                "final_defect": "inf" if final is INFINITY else str(final),
            },
        }
        data = S.series_json(args.input, group, field.name, r.root, extra)
        lines = [
            f"f = {f}",
            f"root lifting {a0}: {r.root}",
            f"v(f(x)) = {extra['lift']['final_defect']} > {r.bound}",
            "defect per Newton step: " + ", ".join(extra["lift"]["defects"]),
            "defect at least doubles each step: " + ("yes" if r.doubling_holds() else "no"),
        ]
        return Report(EXIT_OK, "\n".join(lines), data)
    x = parse_series(args.input, group, field)
    extra: dict = {}
    lines = [f"value: {x}"]
    if args.invert:
        N = 10 if args.order is None else args.order
        g = _gauge(group, gauge)
        y = invert_trunc(x, N, g)
        check = (x * y - 1).valuation()
        extra = {
            "order": N,
            "gauge": str(g),
            "inverse": str(y),
            "check_valuation": "inf" if check is INFINITY else str(check),
        }
        lines.append(f"inverse up to {g * N}: {y}")
        lines.append(f"v(x*y - 1) = {extra['check_valuation']}")
    elif args.order is not None:
        g = _gauge(group, gauge)
        x = x.truncate(g * args.order)
        extra = {"order": args.order, "gauge": str(g)}
        lines[0] = f"value up to {g * args.order}: {x}"
    data = S.series_json(args.input, group, field.name, x, extra)
    lines.append(f"valuation: {data['valuation']}, residue: {data['residue']}")
    return Report(EXIT_OK, "\n".join(lines), data)


def _oracle_cases(args) -> list:
    if args.input == "catalogue":
        cases = list(CATALOGUE)
    elif args.input == "padic":
        cases = list(PADIC_CATALOGUE)
    else:
        with open(args.input, encoding="utf-8") as fh:
            try:
                cases = cases_from_json(fh.read())
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DescriptorError(f"malformed oracle case file: {exc}") from exc
    if args.precision is not None:
        cases = [
            (n, PadicBase(b.p, args.precision) if isinstance(b, PadicBase) else b, st) for n, b, st in cases
        ]
    return cases


def _symbolic_defectless(base) -> tuple:
    if isinstance(base, LaurentBase):
        (p, n), = factorint(base.q).items()
        K = hahn(triv(Finite(p, n)), Z)
    else:
        K = build([], QpExt(base.p))
    return format_valued_field(K), structural_flags(K).defectless


def _oracle(args) -> Report:
    cases = _oracle_cases(args)
    results = [(n, fundamental_equality_oracle(b, st)) for n, b, st in cases]
    symbolic = dict(_symbolic_defectless(b) for _, b, _ in cases)
    lines = []
    for name, r in results:
        if r.status == "ok":
            ef = " + ".join(f"{e}*{f}" for e, f in r.terms)
            lines.append(f"{name}: [L:K] = {r.lhs}, sum e*f = {ef} = {r.rhs}, {'equal' if r.equal else 'NOT equal'}")
        else:
            lines.append(f"{name}: {r.detail}")
    for text, flag in symbolic.items():
        lines.append(f"symbolic defectless flag of {text}: {show(flag)}")
    if any(r.status == "ok" and not r.equal for _, r in results):
        code = EXIT_REFUTED
    elif any(r.status != "ok" for _, r in results):
        code = EXIT_UNKNOWN
    else:
        code = EXIT_OK
    return Report(code, "\n".join(lines), S.oracle_json(results, symbolic))


# ---------------------------------------------------------------- driver


def _error_report(category: str, exc: Exception, code: int) -> Report:
    if isinstance(exc, ParseError):
        text = f"{category} error at {exc.line}:{exc.column}: {exc.message}"
        if exc.text and "\n" not in exc.text:
            text += f"\n  {exc.text}\n  {' ' * (exc.column - 1)}^"
        return Report(code, text, S.error_json(category, exc.message, exc.line, exc.column))
    return Report(code, f"{category} error: {exc}", S.error_json(category, str(exc)))


def _guarded(fn: Callable[[], Report]) -> Report:
    try:
        return fn()
    except ParseError as exc:
        semantic = isinstance(exc.__cause__, (DescriptorError, PreconditionError))
        return _error_report("descriptor" if semantic else "parse", exc, EXIT_DATA)
    except UnsupportedExtension as exc:
        return _error_report("unsupported", exc, EXIT_DATA)
    except UnsupportedCut as exc:
        return _error_report("unsupported", exc, EXIT_DATA)
    except PreconditionError as exc:
        return _error_report("precondition", exc, EXIT_DATA)
    except (DescriptorError, NipvalError, ValueError, ZeroDivisionError, OSError) as exc:
        return _error_report("descriptor", exc, EXIT_DATA)
    except Exception as exc:  # noqa: BLE001 - reported with the internal exit code
        return _error_report("internal", exc, EXIT_INTERNAL)


def _descriptor_report(verb: str, text: str, args) -> Report:
    return _guarded(lambda: DESCRIPTOR_VERBS[verb](parse_valued_field(text), args))


def _emit(rep: Report, as_json: bool, compact: bool = False, stream=None) -> None:
    stream = stream or sys.stdout
    if as_json:
        stream.write((json.dumps(rep.data) if compact else S.dumps(rep.data)) + "\n")
    else:
        target = sys.stderr if rep.data.get("kind") == "error" else stream
        target.write(rep.text + "\n")


def _batch_lines(path: str) -> list:
    with open(path, encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]


def main(argv: Optional[list] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    if args.verb in DESCRIPTOR_VERBS:
        if os.path.isfile(args.input):
            worst = EXIT_OK
            for line in _batch_lines(args.input):
                rep = _descriptor_report(args.verb, line, args)
                if not args.json:
                    sys.stdout.write(f"== {line}\n")
                _emit(rep, args.json, compact=True)
                worst = max(worst, rep.code)
            return worst
        rep = _descriptor_report(args.verb, args.input, args)
    elif args.verb == "eval":
        rep = _guarded(lambda: _eval(args))
    else:
        rep = _guarded(lambda: _oracle(args))
    _emit(rep, args.json)
    return rep.code


if __name__ == "__main__":
    sys.exit(main())
