"""Command-line front end.

Exit codes: 0 certified yes / success, 1 certified no, 2 unknown (budget
exhausted), 3 error.  Reports go to stdout as text or JSON (``--format``);
``--out`` also writes the JSON report to a file and ``--cert`` writes the
replayable certificate when the verdict has one.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .certificates import verify_certificate
from .decide import medvedev_zero_witness, nonmembership_semidecide, proper_containment_detect
from .io import Workspace, read_json
from .morphism import build_Yp, forbid_additionally, lift_to_free, phi_pattern, pullback_sft
from .oned import language_exact_1d
from .patterns import consistency_check, pattern_doc, presentation_doc, to_word
from .subshift import (LangApprox, language, locally_admissible, metric_D, render_grid, sft_doc,
                       subset_semidecide)
from .verdict import SymdynError

ERROR_EXIT = 3


def _show(ctx, q) -> str:
    if getattr(ctx, "d", None) == 1:
        try:
            lo = min(g[0] for g in q.support) if q.cells else 0
            return f"{to_word(q)} @ {lo}"
        except ValueError:
            pass
    if getattr(ctx, "d", None) == 2 and q.cells:
        return "\n" + render_grid(q)
    return json.dumps(pattern_doc(ctx, q))


def _verdict_report(verb, v, **extra):
    report = {"verb": verb, "verdict": v.status.value, "detail": v.detail, **extra}
    return report, v.exit_code, v.certificate


def cmd_group_info(args, ws):
    G = ws.load_group(args.group)
    n = args.n if args.n is not None else 2
    rows = []
    for k in range(n + 1):
        row = {"n": k, "words": len(G.words_upto(k))}
        if G.decidable:
            row["ball"] = len(G.ball(k))
        else:
            row["classes"] = {str(f): len(G.ball_approx(k, f)) for f in range(args.fuel + 1)}
        rows.append(row)
    report = {"verb": "group-info", "group": G.to_doc(), "kind": G.kind, "generators": list(G.generators),
              "letters": "".join(G.letters), "decidable": G.decidable, "sizes": rows}
    return report, 0, None


def _group_info_text(r):
    lines = [f"kind: {r['kind']}", f"generators: {' '.join(r['generators'])} (S = {r['letters']})",
             f"word problem: {'decidable' if r['decidable'] else 'semi-decidable'}"]
    for row in r["sizes"]:
        if "ball" in row:
            lines.append(f"n={row['n']}: |W_n| = {row['words']}, |B_n| = {row['ball']}")
        else:
            cls = ", ".join(f"fuel {f}: {c}" for f, c in row["classes"].items())
            lines.append(f"n={row['n']}: |W_n| = {row['words']}, classes {cls}")
    return "\n".join(lines)


def cmd_check_consistency(args, ws):
    ws.load_group(args.group)
    p = ws.load_presentation("pattern", args.pattern)
    v = consistency_check(ws.group, p, args.fuel)
    return _verdict_report("check-consistency", v, pattern=presentation_doc(p), fuel=args.fuel)


def cmd_language(args, ws):
    X = ws.load_sft("sft", args.sft, args.fuel)
    n = args.n if args.n is not None else 1
    L = language(X, n, args.margin)
    pats = L.sorted(X.alphabet)
    report = {"verb": "language", "n": n, "margin": None if L.exact else args.margin, "exact": L.exact,
              "count": len(pats), "patterns": [pattern_doc(X.ctx, q) for q in pats]}
    report["shown"] = [_show(X.ctx, q) for q in pats]
    return report, 0, None


def cmd_admissible(args, ws):
    X = ws.load_sft("sft", args.sft, args.fuel)
    q = ws.load_pattern("pattern", args.pattern)
    if args.sweep:
        v = nonmembership_semidecide(X, q, args.margin)
        return _verdict_report("admissible", v, question="outside the language", max_margin=args.margin,
                               witness=pattern_doc(X.ctx, v.witness) if v.witness else None)
    v = locally_admissible(X, q, args.margin)
    return _verdict_report("admissible", v, question="locally admissible", margin=args.margin,
                           witness=pattern_doc(X.ctx, v.witness) if v.witness else None)


def cmd_dist(args, ws):
    X = ws.load_sft("a", args.a, args.fuel)
    Y = ws.load_sft("b", args.b, args.fuel)
    n = args.n if args.n is not None else 4
    m = metric_D(X, Y, n, args.margin)
    report = {"verb": "dist", "value": str(m.value), "agree_radius": m.agree_radius, "nmax": n,
              "certified": m.certified, "upto_nmax": m.upto_nmax, "text": str(m)}
    return report, 0, None


def _rule_group(args, ws):
    if args.group:
        ws.load_group(args.group)
    elif args.sft:
        ws.load_sft("sft", args.sft, args.fuel)


def cmd_apply_rule(args, ws):
    _rule_group(args, ws)
    rule = ws.load_rule("rule", args.rule)
    q = ws.load_pattern("pattern", args.pattern)
    image = phi_pattern(rule, q)
    report = {"verb": "apply-rule", "image": pattern_doc(rule.ctx, image), "shown": _show(rule.ctx, image)}
    return report, 0, None


def _sft_report(verb, X):
    return {"verb": verb, "sft": sft_doc(X), "forbidden_count": len(X.forbidden), "range": X.range}


def cmd_pullback(args, ws):
    X = ws.load_sft("sft", args.sft, args.fuel)
    rule = ws.load_rule("rule", args.rule)
    return _sft_report("pullback", pullback_sft(rule, X)), 0, None


def cmd_forbid(args, ws):
    X = ws.load_sft("sft", args.sft, args.fuel)
    p = ws.load_pattern("pattern", args.pattern)
    return _sft_report("forbid", forbid_additionally(X, p)), 0, None


def cmd_build_yp(args, ws):
    Y = ws.load_sft("y", args.y, args.fuel)
    X = ws.load_sft("x", args.x, args.fuel)
    rule = ws.load_rule("rule", args.rule)
    p = ws.load_pattern("pattern", args.pattern)
    return _sft_report("build-yp", build_Yp(Y, rule, X, p)), 0, None


def cmd_subset(args, ws):
    Y = ws.load_sft("y", args.y, args.fuel)
    X = ws.load_sft("x", args.x, args.fuel)
    v = subset_semidecide(Y, X, args.margin)
    return _verdict_report("subset", v, margin=args.margin)


def cmd_lift_free(args, ws):
    Z = ws.load_sft("sft", args.sft, args.fuel)
    lift = lift_to_free(Z)
    st = lift.stage(args.fuel)
    report = {"verb": "lift-free", "fuel": args.fuel, "free_group": lift.free.to_doc(),
              "kernel": list(st.kernel),
              "forbidden": [pattern_doc(lift.free, f) for f in st.forbidden]}
    return report, 0, None


def cmd_detect_membership(args, ws):
    Y = ws.load_sft("y", args.y, args.fuel)
    X = ws.load_sft("x", args.x, args.fuel)
    rule = ws.load_rule("rule", args.rule)
    p = ws.load_pattern("pattern", args.pattern)
    k = args.k
    if args.language:
        doc = read_json(args.language)
        from .patterns import pattern_from_doc

        pats = [pattern_from_doc(Y.ctx, d) for d in doc.get("patterns", [])]
        exact = bool(doc.get("exact", False)) and not args.unsound_override
        Lk = LangApprox(k, None, frozenset(pats), exact) if exact else pats
    elif Y.is_1d:
        Lk = language_exact_1d(Y, k)
    else:
        raise SymdynError("no certified language for Y: pass --language (with --unsound-override if uncertified)")
    v = proper_containment_detect(Y, rule, X, k, Lk, p, args.margin, override=args.unsound_override)
    return _verdict_report("detect-membership", v, k=k, budget=args.margin,
                           unsound=bool(args.unsound_override))


def cmd_extract_point(args, ws):
    X = ws.load_sft("sft", args.sft, args.fuel)
    n = args.n if args.n is not None else 3
    q, cert = medvedev_zero_witness(X, n)
    report = {"verb": "extract-point", "n": n, "pattern": pattern_doc(X.ctx, q), "shown": _show(X.ctx, q)}
    return report, 0, cert


def cmd_verify_cert(args, ws):
    raw = Path(args.certificate).read_bytes()
    res = verify_certificate(raw)
    report = {"verb": "verify-cert", "ok": res.ok, "kind": res.kind, "reason": res.reason}
    return report, 0 if res.ok else ERROR_EXIT, None


def cmd_render(args, ws):
    ws.load_group(args.group)
    q = ws.load_pattern("pattern", args.pattern)
    if getattr(ws.group, "d", None) != 2:
        raise SymdynError("render draws patterns over Z^2 only")
    grid = render_grid(q)
    return {"verb": "render", "grid": grid}, 0, None


COMMANDS = {
    "group-info": cmd_group_info,
    "check-consistency": cmd_check_consistency,
    "language": cmd_language,
    "admissible": cmd_admissible,
    "dist": cmd_dist,
    "apply-rule": cmd_apply_rule,
    "pullback": cmd_pullback,
    "forbid": cmd_forbid,
    "build-yp": cmd_build_yp,
    "subset": cmd_subset,
    "lift-free": cmd_lift_free,
    "detect-membership": cmd_detect_membership,
    "extract-point": cmd_extract_point,
    "verify-cert": cmd_verify_cert,
    "render": cmd_render,
}


def _text(report) -> str:
    verb = report["verb"]
    if verb == "group-info":
        return _group_info_text(report)
    if verb == "language":
        head = f"{report['count']} patterns on B_{report['n']}" + (
            " (exact)" if report["exact"] else f" (margin {report['margin']}, upper approximation)")
        return "\n".join([head] + report["shown"])
    if verb == "dist":
        return report["text"]
    if verb in ("apply-rule", "extract-point"):
        return report["shown"]
    if verb in ("pullback", "forbid", "build-yp"):
        return json.dumps(report["sft"], indent=1)
    if verb == "lift-free":
        return (f"stage {report['fuel']}: {len(report['kernel'])} kernel words, "
                f"{len(report['forbidden'])} forbidden patterns\n" + json.dumps(report["forbidden"]))
    if verb == "verify-cert":
        return f"certificate OK ({report['kind']})" if report["ok"] else f"certificate REJECTED: {report['reason']}"
    if verb == "render":
        return report["grid"]
    if "verdict" in report:
        line = report["verdict"]
        if report.get("detail"):
            line += f": {report['detail']}"
        return line
    return json.dumps(report, indent=1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--out", help="also write the JSON report here")
    common.add_argument("--cert", help="write the certificate here when there is one")
    common.add_argument("--fuel", type=int, default=0, help="word-problem fuel (rewriting steps)")
    common.add_argument("--margin", type=int, default=0, help="margin radius, or margin budget for sweeps")
    common.add_argument("--n", type=int, help="ball radius")

    parser = argparse.ArgumentParser(prog="symdyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, help_, *specs):
        p = sub.add_parser(name, parents=[common], help=help_)
        for args, kw in specs:
            p.add_argument(*args, **kw)
        return p

    req = {"required": True}
    add("group-info", "sizes of word sets and balls", (("group",), {}))
    add("check-consistency", "is a pattern presentation consistent?",
        (("--group",), req), (("--pattern",), req))
    add("language", "language of an SFT on B_n", (("--sft",), req))
    add("admissible", "local admissibility of a pattern",
        (("--sft",), req), (("--pattern",), req),
        (("--sweep",), {"action": "store_true", "help": "sweep margins 0..--margin; exit 0 = outside the language"}))
    add("dist", "the metric D between two SFTs", (("--a",), req), (("--b",), req))
    add("apply-rule", "image of a pattern under a local rule",
        (("--rule",), req), (("--pattern",), req), (("--group",), {}), (("--sft",), {}))
    add("pullback", "preimage SFT of a local rule", (("--rule",), req), (("--sft",), req))
    add("forbid", "forbid one more pattern", (("--sft",), req), (("--pattern",), req))
    add("build-yp", "Y intersected with the preimage of X_p",
        (("--y",), req), (("--rule",), req), (("--x",), req), (("--pattern",), req))
    add("subset", "semi-decide Y inside X", (("--y",), req), (("--x",), req))
    add("lift-free", "forbidden patterns of the lift to the free group", (("--sft",), req))
    add("detect-membership", "certify p in the language of phi(Y)",
        (("--y",), req), (("--rule",), req), (("--x",), req), (("--pattern",), req),
        (("--k",), {"type": int, "default": 1}),
        (("--language",), {"help": "certified language document for Y on B_k"}),
        (("--unsound-override",), {"action": "store_true"}))
    add("extract-point", "prefix of a computable configuration", (("--sft",), req))
    add("verify-cert", "re-check a certificate without searching", (("certificate",), {}))
    add("render", "draw a Z^2 pattern as a text grid", (("--group",), req), (("--pattern",), req))
    return parser


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    ws = Workspace()
    try:
        report, code, cert = COMMANDS[args.verb](args, ws)
    except (SymdynError, OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=stderr)
        return ERROR_EXIT
    if cert is not None:
        report["certificate_kind"] = cert.kind
        if args.cert:
            Path(args.cert).write_text(cert.to_json() + "\n", encoding="utf-8")
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=1, default=_jsonable) + "\n", encoding="utf-8")
    if args.format == "json":
        print(json.dumps(report, indent=1, default=_jsonable), file=stdout)
    else:
        print(_text(report), file=stdout)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
