"""Command-line front end.

Every subcommand builds an ordered report (nested dicts and lists of exact
rationals) and renders it either as aligned text or, with
``--format structured``, as a JSON document with the same keys.

Exit codes: 0 success, 2 validation error, 3 resource cap, 4 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import conjugacy as conj
from . import lattice as lat
from . import semiconj as sc
from .errors import CarcassError, InvariantError, ResourceError, ValidationError
from .rational_pl import (
    PLMap,
    denominator_bit_cap,
    dumps,
    format_rational,
    kinks,
    load_map,
    one_sided_slope,
    parse_rational,
    to_document,
)
from .suite import EvidenceSuiteReport, run_evidence_suite
from .unimodal import CarcassMap, asym_tent, firmness, positive_fixed_point, tent, validate_carcass

EXIT_OK, EXIT_VALIDATION, EXIT_RESOURCE, EXIT_INTERNAL = 0, 2, 3, 4


# --- rendering -------------------------------------------------------------


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, PLMap):
        return to_document(value)["breakpoints"]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _text_scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "[" + ", ".join(_text_scalar(v) for v in value) + "]"
    return str(value)


def _render_text(report: Dict[str, Any], indent: int = 0) -> List[str]:
    lines = []
    pad = "  " * indent
    width = max((len(str(k)) for k in report), default=0)
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                sub = _render_text(item, indent + 2)
                sub[0] = f"{pad}  - " + sub[0].lstrip()
                lines.extend(sub)
        else:
            lines.append(f"{pad}{str(key).ljust(width)} : {_text_scalar(value)}")
    return lines


def render(report: Dict[str, Any], fmt: str) -> str:
    plain = _plain(report)
    if fmt == "structured":
        return json.dumps(plain, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(_render_text(plain)) + "\n"


def _table(rows: Sequence[Sequence[Any]], header: Sequence[str]) -> str:
    cells = [list(header)] + [[_text_scalar(_plain(c)) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells) + "\n"


# --- report builders ------------------------------------------------------


def _load_carcass(path: str) -> CarcassMap:
    return validate_carcass(load_map(path))


def _check(c: lat.Check) -> Dict[str, Any]:
    out: Dict[str, Any] = {"holds": c.holds, "checked": c.checked, "failures": c.failures}
    if c.violations:
        v = c.violations[0]
        out["first_violation"] = {"n": v.n, "k": v.k, "expected": v.expected, "actual": v.actual}
    return out


def structure_section(s: lat.StructureReport) -> Dict[str, Any]:
    return {
        "n0": s.n0,
        "depth": s.depth,
        "delta_table": s.delta_table,
        "l_constants": list(s.l_constants),
        "checks": {c.name: _check(c) for c in s.checks()},
    }


def conjugacy_section(v: conj.PLConjugacyVerdict) -> Dict[str, Any]:
    out: Dict[str, Any] = {"verdict": v.verdict}
    if v.witness_tangent is not None:
        out["w"] = v.witness_tangent
    out["r"] = v.witness_threshold
    if v.failed_condition:
        out["failed_condition"] = v.failed_condition
    out["evidence_levels"] = v.evidence_levels
    if v.mismatch:
        n, k, mu, pred = v.mismatch
        out["lattice_mismatch"] = {"n": n, "k": k, "mu": mu, "w_k_over_2^(n-1)": pred}
    return out


def analyze_report(g: CarcassMap, depth: int, n_max: int, window: int = 1) -> Dict[str, Any]:
    firm = firmness(g, n_max)
    x0 = positive_fixed_point(g)
    report: Dict[str, Any] = {
        "breakpoints": g.map,
        "peak": g.peak,
        "kinks": kinks(g.map),
        "slope_at_0": one_sided_slope(g.map, 0, "right"),
        "fixed_point": x0,
        "slopes_at_fixed_point": [one_sided_slope(g.map, x0, "left"), one_sided_slope(g.map, x0, "right")],
        "firmness": {
            "status": firm.status,
            "n0": firm.n0,
            "hit_times": {format_rational(k): t for k, t in firm.hit_times},
        },
    }
    if firm.firm:
        s_depth = max(depth, 4 * firm.n0 + window)
        s = lat.structure_report(lat.build_lattice(g, s_depth), firm, window)
        report["structure"] = structure_section(s)
    else:
        report["structure"] = "skipped (conjugacy-to-tent assumed; firmness unknown within bound)"
    report["pl_conjugacy"] = conjugacy_section(conj.pl_conjugacy_detect(g, depth))
    return report


def suite_section(r: EvidenceSuiteReport) -> Dict[str, Any]:
    per_t = []
    for t in r.per_t:
        item: Dict[str, Any] = {"t": t.t, "exact_solution": t.exact is not None}
        if t.exact is not None:
            item["tangent_at_0"] = t.tangent
            item["commutes"] = t.commutes
            item["lattice_identity_defects"] = t.lattice_identity_defects
        item["lattice_commutation_defects"] = t.lattice_commutation_defects
        item["defect_levels"] = list(t.nonlinearity.levels)
        item["defect_counts"] = list(t.nonlinearity.counts)
        item["nonlinearity"] = t.nonlinearity.verdict
        item["share_uniformity"] = t.share_uniformity.status
        item["share_uniformity_detail"] = t.share_uniformity.detail
        per_t.append(item)
    out: Dict[str, Any] = {
        "map": r.name,
        "depth": r.depth,
        "firmness": {"status": r.firmness.status, "n0": r.firmness.n0},
    }
    if r.structure is not None:
        s = r.structure
        out["structure"] = {
            "n0": s.n0,
            "depth": s.depth,
            "delta_table": s.delta_table,
            "l_constants": list(s.l_constants),
            "holding": [c.name for c in s.checks() if c.holds],
            "violated": [c.name for c in s.checks() if not c.holds],
        }
    else:
        out["structure"] = r.structure_note
    out["pl_conjugacy"] = conjugacy_section(r.conjugacy)
    if r.conjugacy_map is not None:
        out["conjugacy_map"] = r.conjugacy_map
    out["per_t"] = per_t
    out["rigidity"] = {"status": r.rigidity, "witness": r.rigidity_witness}
    out["conjugacy_transfer"] = {"status": r.conjugacy_transfer, "witness": r.conjugacy_transfer_witness}
    return out


# --- subcommands -----------------------------------------------------------


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _t_list(text: str) -> List[int]:
    return [_positive(p) for p in text.split(",") if p.strip()]


def _cmd_analyze(args) -> str:
    g = _load_carcass(args.map)
    return render(analyze_report(g, args.depth, args.n_max, args.window), args.format)


def _cmd_lattice(args) -> str:
    g = _load_carcass(args.map)
    L = lat.build_lattice(g, args.depth)
    levels = [args.level] if args.level else range(1, L.depth + 1)
    if args.table == "delta":
        levels = [n for n in levels if n < L.depth]
    data: Dict[str, Any] = {}
    for n in levels:
        if args.table == "mu":
            data[f"level {n}"] = list(L.level(n))
        elif args.table == "len":
            data[f"level {n}"] = lat.interval_lengths(L, n)
        else:
            data[f"level {n}"] = lat.deltas(L, n)
    if args.format == "structured":
        return render({"table": args.table, "levels": data}, "structured")
    out = []
    for key, values in data.items():
        out.append(f"# {key}")
        out.append(_table([(k, v) for k, v in enumerate(values)], ["k", args.table]))
    return "\n".join(out)


def _cmd_conjugacy(args) -> str:
    if args.build:
        return dumps(conj.conjugate_by(load_map(args.build)).map)
    if args.verify:
        h, g = load_map(args.verify[0]), _load_carcass(args.verify[1])
        report = {"h": h, "conjugates_tent_to_g": conj.verify_conjugacy(h, tent(), g)}
        return render(report, args.format)
    if args.detect:
        g = _load_carcass(args.detect)
        report = {"necessary_conditions": conj.pl_conjugacy_necessary(g).detail}
        report.update(conjugacy_section(conj.pl_conjugacy_detect(g, args.depth)))
        return render(report, args.format)
    g1, g2 = _load_carcass(args.profile[0]), _load_carcass(args.profile[1])
    profile = conj.conjugacy_convergence_profile(g1, g2, args.depth)
    report = {"levels": list(range(2, args.depth)), "max_change": profile,
              "stabilized": bool(profile) and profile[-1] == 0}
    return render(report, args.format)


def _cmd_semiconj(args) -> str:
    if args.xi is not None:
        return dumps(sc.xi(args.xi))
    if args.psi_exact:
        h, t = load_map(args.psi_exact[0]), _positive(args.psi_exact[1])
        return dumps(sc.psi_exact(h, t).body)
    if args.psi_lattice:
        g = _load_carcass(args.psi_lattice[0])
        t, n = _positive(args.psi_lattice[1]), _positive(args.psi_lattice[2])
        pts = sc.psi_lattice(g, t, n).points
        if args.format == "structured":
            return render({"t": t, "level": n, "points": [list(p) for p in pts]}, "structured")
        return _table(pts, ["x", "psi(x)"])
    if args.verify:
        psi, g = load_map(args.verify[0]), _load_carcass(args.verify[1])
        return render({"commutes": sc.verify_commutation(psi, g)}, args.format)
    if args.evidence:
        g = _load_carcass(args.evidence[0])
        t, lo, hi = (_positive(v) for v in args.evidence[1:])
        p = sc.nonlinearity_evidence(g, t, lo, hi)
        report = {"t": t, "levels": list(p.levels), "defect_counts": list(p.counts), "verdict": p.verdict}
        return render(report, args.format)
    g = _load_carcass(args.lemma35[0])
    t, depth = _positive(args.lemma35[1]), _positive(args.lemma35[2])
    r = sc.lemma_3_5_check(g, t, depth)
    report = {"status": r.status, "detail": r.detail, "collinear_nodes": r.collinear_nodes,
              "threshold": r.threshold, "delta_table": r.delta_table}
    return render(report, args.format)


def _cmd_theorems(args) -> str:
    g = _load_carcass(args.map)
    if args.depth < 5:
        raise ValidationError("theorems needs --depth >= 5")
    r = run_evidence_suite(g, args.t, args.depth, name=Path(args.map).name, n_max=args.n_max)
    return render(suite_section(r), args.format)


def _cmd_mapgen(args) -> str:
    if args.kind == "conjugate":
        if not args.h:
            raise ValidationError("mapgen conjugate needs --h FILE")
        g = conj.conjugate_by(load_map(args.h))
    else:
        if args.v is None:
            raise ValidationError("mapgen asym-tent needs --v RATIONAL")
        g = asym_tent(parse_rational(args.v))
    text = dumps(g.map)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        return ""
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text")
    common.add_argument("--max-points", type=_positive, default=lat.DEFAULT_MAX_POINTS,
                        help="cap on total lattice points")
    common.add_argument("--max-denominator-bits", type=_positive, default=None,
                        help="abort when a denominator exceeds this many bits")

    parser = argparse.ArgumentParser(prog="carcass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="kinks, slopes, firmness, structure and PL verdict")
    p.add_argument("map")
    p.add_argument("--depth", type=_positive, default=10)
    p.add_argument("--n-max", type=_positive, default=32)
    p.add_argument("--window", type=int, default=1)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("lattice", parents=[common], help="preimage lattice tables")
    p.add_argument("map")
    p.add_argument("--depth", type=_positive, default=6)
    p.add_argument("--level", type=_positive)
    p.add_argument("--table", choices=["mu", "len", "delta"], default="mu")
    p.set_defaults(func=_cmd_lattice)

    p = sub.add_parser("conjugacy", parents=[common], help="build, verify, detect or profile conjugacies")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--build", metavar="H")
    g.add_argument("--verify", nargs=2, metavar=("H", "G"))
    g.add_argument("--detect", metavar="G")
    g.add_argument("--profile", nargs=2, metavar=("G1", "G2"))
    p.add_argument("--depth", type=_positive, default=8)
    p.set_defaults(func=_cmd_conjugacy)

    p = sub.add_parser("semiconj", parents=[common], help="self-semiconjugations")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--xi", type=_positive, metavar="T")
    g.add_argument("--psi-exact", nargs=2, metavar=("H", "T"))
    g.add_argument("--psi-lattice", nargs=3, metavar=("G", "T", "N"))
    g.add_argument("--verify", nargs=2, metavar=("PSI", "G"))
    g.add_argument("--evidence", nargs=4, metavar=("G", "T", "N_MIN", "N_MAX"))
    g.add_argument("--lemma35", nargs=3, metavar=("G", "T", "DEPTH"))
    p.set_defaults(func=_cmd_semiconj)

    p = sub.add_parser("theorems", parents=[common], help="run the evidence suite")
    p.add_argument("map")
    p.add_argument("--t", type=_t_list, default=[3])
    p.add_argument("--depth", type=_positive, default=8)
    p.add_argument("--n-max", type=_positive, default=32)
    p.set_defaults(func=_cmd_theorems)

    p = sub.add_parser("mapgen", parents=[common], help="generate carcass map files")
    p.add_argument("kind", choices=["conjugate", "asym-tent"])
    p.add_argument("--h", metavar="FILE")
    p.add_argument("--v", metavar="RATIONAL")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_mapgen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with denominator_bit_cap(args.max_denominator_bits), lat.point_cap(args.max_points):
            sys.stdout.write(args.func(args))
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvariantError, CarcassError) as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
