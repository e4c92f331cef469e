"""Command-line front end.

Every subcommand prints either ``key: value`` text or one JSON object
(``--format json``); collections are always emitted in sorted canonical
order so output is byte-stable.  Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bass, groupring, groups, trzero, witt
from .errors import CyclotraceError, IntegralityViolation, ParseError
from .groups import DEFAULT_ORDER_CAP


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP, metavar="N",
                   help="maximum group order accepted by closure enumeration")
    return p


def _rational(text: str) -> Fraction:
    try:
        return groups.parse_fraction(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    root = _Parser(prog="cyclotrace", description=__doc__.splitlines()[0])
    sub = root.add_subparsers(dest="area", required=True, parser_class=_Parser)

    g = sub.add_parser("group", help="finite groups").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("classes", parents=[common], help="list conjugacy classes")
    p.add_argument("spec")
    p = g.add_parser("powermap", parents=[common], help="power map on classes")
    p.add_argument("spec")
    p.add_argument("--s", type=_positive, required=True)

    p = sub.add_parser("rank", parents=[common], help="Hattori-Stallings rank of an idempotent matrix")
    p.add_argument("spec")
    p.add_argument("matrix")
    p.add_argument("--trace-only", action="store_true",
                   help="skip the idempotency requirement and print the trace class")

    p = sub.add_parser("witt", parents=[common], help="big Witt vector arithmetic")
    p.add_argument("op", choices=("ghost", "add", "mul", "neg", "F", "V", "R", "vone"))
    p.add_argument("--set", required=True, dest="tset", metavar="S",
                   help="truncation set: divisors-of:<r> or {1,2,...}")
    p.add_argument("--s", type=_positive)
    p.add_argument("--to", metavar="T", help="target set for R")
    p.add_argument("vectors", nargs="*")

    t = sub.add_parser("tr", help="TR_0 operators").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = t.add_parser("apply", parents=[common], help="apply R_s, F_s or V_s to an element file")
    p.add_argument("--op", choices=("R", "F", "V"), required=True)
    p.add_argument("--s", type=_positive, required=True)
    p.add_argument("--group", metavar="SPEC", help="group spec (overrides the file's group= line)")
    p.add_argument("elem")
    p = t.add_parser("exactness", parents=[common], help="check the R_p / V_{p^u} exact sequence")
    p.add_argument("spec")
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--p", type=_positive, required=True)

    b = sub.add_parser("bass", help="trace-conjecture analysis").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = b.add_parser("linnell", parents=[common], help="classes g with g ~ g^(s^m) for all s")
    p.add_argument("spec")
    p.add_argument("--m-max", type=_positive)
    p = b.add_parser("fixedpoint", parents=[common], help="Frobenius-invariance analysis of a limit element")
    p.add_argument("elemfile")
    p.add_argument("--group", metavar="SPEC")
    p.add_argument("--s-max", type=_positive, help="test s = 1..N (default: group exponent)")
    p = b.add_parser("sl2", parents=[common], help="is g^k conjugate to g in SL(2,Q)?")
    p.add_argument("--k", type=_rational, required=True)
    p = b.add_parser("bezout", parents=[common], help="Bezout witness for m")
    p.add_argument("--m", type=_positive, required=True)
    return root


# --------------------------------------------------------------------------
# helpers

def _load_group(path, cap):
    return groups.load_group(path, cap)


def _group_info(G) -> dict:
    return {
        "name": G.name or G.kind,
        "kind": G.kind,
        "order": G.order,
        "exponent": G.exponent(),
        "classes": G.num_classes,
    }


def _read_element_file(path, group_override, cap):
    """Split an element file into ``(group, element text)``.

    An optional ``group=<path>`` line names the group spec, relative to the
    element file; without it (and without ``--group``) the trivial group is
    used.
    """
    path = Path(path)
    group_ref, body = None, []
    for line in path.read_text().splitlines():
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("group="):
            group_ref = stripped[len("group="):].strip()
        else:
            body.append(stripped)
    if group_override:
        G = _load_group(group_override, cap)
    elif group_ref:
        G = _load_group(path.parent / group_ref, cap)
    else:
        G = groups.catalog_group("trivial")
    if len(body) != 1:
        raise ParseError(f"{path}: expected exactly one element line, found {len(body)}")
    return G, body[0]


def _class_label(G, c):
    return f"{c}:{G.classes[c].representative}"


def _emit(out, fmt, payload: dict, text_lines):
    if fmt == "json":
        out.write(json.dumps(payload) + "\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


def _kv(d: dict) -> list:
    return [f"{k}: {v}" for k, v in d.items()]


# --------------------------------------------------------------------------
# subcommands

def cmd_group_classes(a, out):
    G = _load_group(a.spec, a.order_cap)
    rows = [
        {"id": c.id, "size": c.size, "order": G.element_order(c.members[0]),
         "representative": c.representative}
        for c in G.classes
    ]
    lines = _kv({"command": "group classes", **_group_info(G)})
    lines += [f"class {r['id']}: size={r['size']} order={r['order']} rep={r['representative']}" for r in rows]
    _emit(out, a.format, {"command": "group classes", "group": _group_info(G), "classes": rows}, lines)


def cmd_group_powermap(a, out):
    G = _load_group(a.spec, a.order_cap)
    pm = G.power_map(a.s)
    rows = [{"class": c, "image": pm(c)} for c in range(G.num_classes)]
    lines = _kv({"command": "group powermap", **_group_info(G), "s": a.s})
    lines += [f"{_class_label(G, r['class'])} -> {_class_label(G, r['image'])}" for r in rows]
    _emit(out, a.format, {"command": "group powermap", "group": _group_info(G), "s": a.s, "mapping": rows}, lines)


def _hh0_rows(v):
    return [{"class": c, "representative": v.group.classes[c].representative, "coeff": n} for c, n in v.items()]


def cmd_rank(a, out):
    G = _load_group(a.spec, a.order_cap)
    M = groupring.load_matrix(a.matrix, G)
    idem = groupring.is_idempotent(M)
    v = groupring.trace_to_hh0(M) if a.trace_only else groupring.hattori_stallings_rank(M)
    rows = _hh0_rows(v)
    head = {"command": "rank", "dimension": M.n, "idempotent": idem,
            "value": "trace" if a.trace_only else "hattori-stallings rank"}
    flat = {"command": "rank", **_group_info(G), **head}
    lines = _kv({k: str(x).lower() if isinstance(x, bool) else x for k, x in flat.items()})
    lines += [f"coeff {_class_label(G, r['class'])} = {r['coeff']}" for r in rows] or ["coeff (none) = 0"]
    lines.append(f"nonidentity support: {len(v.nonidentity_support())}")
    _emit(out, a.format, {**head, "group": _group_info(G), "rank": rows,
                          "nonidentity_support": len(v.nonidentity_support())}, lines)


def cmd_witt(a, out):
    S = witt.TruncationSet.parse(a.tset)
    arity = {"ghost": 1, "add": 2, "mul": 2, "neg": 1, "F": 1, "V": 1, "R": 1, "vone": 0}[a.op]
    if len(a.vectors) != arity:
        raise ParseError(f"witt {a.op} takes {arity} vector(s), got {len(a.vectors)}")
    if a.op in ("F", "V", "vone") and a.s is None:
        raise ParseError(f"witt {a.op} needs --s")
    if a.op == "R" and a.to is None:
        raise ParseError("witt R needs --to")
    payload = {"command": f"witt {a.op}", "set": str(S)}
    if a.op == "V":
        src = S.quotient(a.s)
        if src is None:
            raise witt.IndexNotInTruncation(f"{a.s} is not in {S}")
        x = witt.parse_witt(a.vectors[0], src)
        result = witt.w_verschiebung(a.s, x, S)
    else:
        xs = [witt.parse_witt(v, S) for v in a.vectors]
        if a.op == "ghost":
            g = xs[0].ghost()
            result = None
            payload["ghost"] = ",".join(f"{n}:{g[n]}" for n in S)
        elif a.op == "add":
            result = xs[0] + xs[1]
        elif a.op == "mul":
            result = xs[0] * xs[1]
        elif a.op == "neg":
            result = -xs[0]
        elif a.op == "F":
            result = witt.w_frobenius(a.s, xs[0])
        elif a.op == "R":
            result = witt.w_restrict(xs[0], witt.TruncationSet.parse(a.to))
        else:
            result = witt.v_one(a.s, S)
    if a.s is not None:
        payload["s"] = a.s
    if result is not None:
        payload["result_set"] = str(result.S)
        payload["result"] = str(result)
        payload["result_ghost"] = ",".join(f"{n}:{w}" for n, w in sorted(result.ghost().items()))
    _emit(out, a.format, payload, _kv(payload))


def cmd_tr_apply(a, out):
    G, text = _read_element_file(a.elem, a.group, a.order_cap)
    x = trzero.parse_tr(text, G)
    op = {"R": trzero.tr_restriction, "F": trzero.tr_frobenius, "V": trzero.tr_verschiebung}[a.op]
    y = op(a.s, x)
    payload = {"command": "tr apply", "op": a.op, "s": a.s, "group": G.name or G.kind,
               "input": trzero.format_tr(x), "output": trzero.format_tr(y)}
    _emit(out, a.format, {**payload, "group": _group_info(G)}, _kv(payload))


def cmd_tr_exactness(a, out):
    G = _load_group(a.spec, a.order_cap)
    rep = trzero.exactness_check(G, a.r, a.p)
    keys = lambda ks: " ".join(f"V{t}[{G.classes[c].representative}]" for t, c in ks) or "(none)"
    payload = {
        "command": "tr exactness", "group": G.name or G.kind, "r": rep.r, "p": rep.p,
        "u": rep.u, "d": rep.d, "surjective": rep.surjective,
        "kernel_equals_image": rep.kernel_equals_image, "v_injective": rep.v_injective,
        "verdict": "PASS" if rep.passed else "FAIL",
        "kernel": keys(rep.kernel_keys), "image": keys(rep.image_keys),
        "witnesses": rep.witnesses,
    }
    text = {k: (str(v).lower() if isinstance(v, bool) else v) for k, v in payload.items() if k != "witnesses"}
    lines = _kv(text) + [f"witness: {w}" for w in rep.witnesses]
    _emit(out, a.format, {**payload, "group": _group_info(G)}, lines)


def cmd_bass_linnell(a, out):
    G = _load_group(a.spec, a.order_cap)
    rep = bass.linnell_admissible(G, a.m_max)
    rows = []
    for v in rep.verdicts:
        rows.append({
            "class": v.class_id, "representative": v.representative,
            "verdict": "admissible" if v.admissible else "refuted",
            "witness_m": v.witness_m, "refuting_s": v.refuting_s,
            "bound_independent": v.bound_independent,
        })
    head = {"command": "bass linnell", "s_range": f"1..{rep.s_range}",
            "m_max": rep.m_max, "admissible": rep.admissible}
    lines = _kv({"command": "bass linnell", **_group_info(G), **head,
                 "admissible": " ".join(map(str, rep.admissible)) or "(none)"})
    for r in rows:
        if r["verdict"] == "admissible":
            lines.append(f"class {_class_label(G, r['class'])}: admissible m={r['witness_m']}")
        else:
            scope = "all m" if r["bound_independent"] else f"m<={rep.m_max}"
            lines.append(f"class {_class_label(G, r['class'])}: refuted s={r['refuting_s']} ({scope})")
    _emit(out, a.format, {**head, "group": _group_info(G), "classes": rows}, lines)


def cmd_bass_fixedpoint(a, out):
    G, text = _read_element_file(a.elemfile, a.group, a.order_cap)
    x = trzero.parse_limit(text, G)
    s_max = a.s_max or G.exponent()
    invariance = {}
    for s in range(1, s_max + 1):
        try:
            invariance[s] = bass.frobenius_invariance_check(x, s)
        except bass.TruncationTooSmall:
            invariance[s] = None
    fixed = all(v for v in invariance.values() if v is not None)
    payload = {"command": "bass fixedpoint", "group": G.name or G.kind,
               "element": trzero.format_limit(x), "s_range": f"1..{s_max}",
               "invariant": {str(s): v for s, v in invariance.items()}, "fixed": fixed}
    lines = _kv({k: payload[k] for k in ("command", "group", "element", "s_range")})
    for s, v in invariance.items():
        lines.append(f"F_{s} invariant: " + ("undetermined" if v is None else str(v).lower()))
    lines.append(f"fixed: {str(fixed).lower()}")
    if x.full_support_declared:
        try:
            cert = bass.vanishing_certificate(x)
            payload["cascade"] = cert.verdict
            payload["cascade_chains"] = len(cert.chains)
            lines.append(f"cascade: {cert.verdict} ({len(cert.chains)} chains, primes {list(cert.primes_checked)})")
        except bass.NotFrobeniusInvariant as exc:
            payload["cascade"] = "rejected"
            payload["cascade_reason"] = str(exc)
            lines.append(f"cascade: rejected ({exc})")
        if payload.get("cascade") == "AllHigherVanish":
            rank = groupring.HH0Vector(G, {c: v for (t, c), v in x.coeffs.items() if t == 1})
            pc = bass.permutation_condition(rank)
            bad = next((c for c in pc.certificates if not c.ok), None)
            payload["permutation_condition"] = pc.holds
            payload["m"] = pc.m
            lines.append(f"permutation condition: {str(pc.holds).lower()} (m={pc.m})")
            if bad is not None:
                payload["failing_s"] = bad.s
                lines.append(f"failing s: {bad.s} {bad.detail}".rstrip())
    else:
        payload["cascade"] = "not applicable"
        payload["cascade_reason"] = "support not declared"
        lines.append("cascade: not applicable (support not declared)")
    _emit(out, a.format, {**payload, "group": _group_info(G)}, lines)


def cmd_bass_sl2(a, out):
    k = a.k
    h = bass.sl2_unipotent_conjugacy(k)
    kstr = groups._frac_str(k)
    payload = {"command": "bass sl2", "k": kstr, "g": "[1,1;0,1]",
               "g^k": bass.unipotent(k).encode(), "conjugate": h is not None}
    if h is not None:
        payload["witness"] = h.encode()
        payload["check"] = f"h g h^-1 = {(h * bass.unipotent(1) * h.inverse()).encode()}"
        lines = _kv({**payload, "conjugate": "yes",
                     "witness": f"diag({groups._frac_str(h.a)}, {groups._frac_str(h.d)}) = {h.encode()}"})
    else:
        payload["reason"] = bass.NON_SQUARE_REASON
        lines = _kv({**payload, "conjugate": "no"})
    _emit(out, a.format, payload, lines)


def cmd_bass_bezout(a, out):
    w = bass.bezout_witness(a.m)
    a_val, b_val = 2**a.m - 1, w.s**a.m - 1
    payload = {"command": "bass bezout", "m": a.m, "s": w.s, "2^m-1": a_val, "s^m-1": b_val,
               "k": w.k, "l": w.l, "check": w.k * a_val + w.l * b_val}
    _emit(out, a.format, {k: (str(v) if isinstance(v, int) and abs(v) > 2**53 else v)
                          for k, v in payload.items()}, _kv(payload))


DISPATCH = {
    ("group", "classes"): cmd_group_classes,
    ("group", "powermap"): cmd_group_powermap,
    ("rank", None): cmd_rank,
    ("witt", None): cmd_witt,
    ("tr", "apply"): cmd_tr_apply,
    ("tr", "exactness"): cmd_tr_exactness,
    ("bass", "linnell"): cmd_bass_linnell,
    ("bass", "fixedpoint"): cmd_bass_fixedpoint,
    ("bass", "sl2"): cmd_bass_sl2,
    ("bass", "bezout"): cmd_bass_bezout,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # witt vectors may follow the options; argparse leaves them over
        if extra and args.area == "witt" and not any(e.startswith("-") and not e[1:2].isdigit() for e in extra):
            args.vectors = list(args.vectors) + extra
        elif extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = DISPATCH[(args.area, getattr(args, "cmd", None))]
    try:
        handler(args, stdout)
    except (CyclotraceError, IntegralityViolation) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except OSError as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc.filename}: {exc.strerror}\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
