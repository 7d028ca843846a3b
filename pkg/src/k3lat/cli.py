"""Command-line front end.  Every command can print a JSON envelope
``{command, input, budgets, results, tool_version}``; ``--timing`` adds
wall-clock seconds, which is the only field that varies between runs."""

import argparse
import json
import sys
import time

from . import __version__
from .catalog import LIST_NAMES, get_list, membership
from .chamber import ChamberLimits, chamber_to_json, two_reflectivity, vinberg_chamber
from .enumeration import SearchBudget, has_isotropic, roots
from .exceptional import (NotApplicable, arithmeticity_report, enriques_screen,
                          exceptional_sublattice, fibration_census, rational_curve_finiteness,
                          root_existence)
from .expr import LatticeSyntaxError, parse_lattice_expr
from .fibration import FibrationEngine, check_condition_finel, isotropic_representatives
from .lattice import GramLattice, lattice, smith_invariants

__all__ = ["main", "run", "read_gram"]

COMMANDS = ("parse", "analyze", "roots", "isotropic", "fibrations", "vinberg",
            "exceptional", "census", "verify-lists", "report")


def read_gram(path):
    """Gram matrix file: rank on the first line, then one row per line."""
    with open(path) as fh:
        rows = [line.split() for line in fh if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty Gram file")
    n = int(rows[0][0])
    body = [[int(x) for x in r] for r in rows[1:]]
    if len(body) != n or any(len(r) != n for r in body):
        raise ValueError(f"{path}: expected {n} rows of {n} integers")
    return GramLattice(body)


def _budget(args):
    return SearchBudget(args.bound, args.max_candidates)


def _limits(args):
    return ChamberLimits(max_roots=args.max_roots)


def _input(args):
    if args.gram:
        return read_gram(args.gram)
    if args.expr is None:
        raise ValueError("give a lattice expression or --gram FILE")
    return lattice(args.expr)


def _describe(S):
    sig = S.signature
    return {
        "lattice": str(S),
        "rank": S.rank,
        "signature": [sig.positive, sig.negative],
        "determinant": S.determinant,
        "elementary_divisors": [abs(d) for d in smith_invariants(S)],
        "even": all(S.gram[i][i] % 2 == 0 for i in range(S.rank)),
        "hyperbolic": S.is_hyperbolic,
    }


# ------------------------------------------------------------- commands


def cmd_parse(args, unknown):
    if args.gram:
        S = read_gram(args.gram)
        return {"gram": [list(r) for r in S.gram], "rank": S.rank}
    e = parse_lattice_expr(args.expr)
    nf = e.normal_form()
    return {"expression": str(e), "normal_form": str(nf), "rank": e.rank,
            "summands": [{"atom": str(a), "scale": s} for a, s in nf.blocks()]}


def cmd_analyze(args, unknown):
    S = _input(args)
    out = _describe(S)
    out["catalog"] = membership(S.expr if S.expr is not None else S.gram).to_json()
    return out


def cmd_roots(args, unknown):
    S = _input(args)
    if S.is_negative_definite:
        rs = roots(S)
        return {"count": len(rs), "positive_roots": [list(v) for v in rs.positive],
                "certified": True}
    v = root_existence(S, _budget(args))
    if v.is_unknown:
        unknown.append("roots")
    return {"has_root": v.to_json()}


def cmd_isotropic(args, unknown):
    S = _input(args)
    v = has_isotropic(S, _budget(args))
    out = {"has_isotropic": v.to_json()}
    if v.is_unknown:
        unknown.append("isotropic")
    if v.is_true and S.is_hyperbolic:
        reps, info = isotropic_representatives(S, _budget(args))
        out["representatives"] = [list(c) for c in reps]
        out["search"] = info
    return out


def cmd_fibrations(args, unknown):
    S = _input(args)
    engine = FibrationEngine(S)
    reps, info = isotropic_representatives(S, _budget(args))
    classes = [{"c": list(c), "mw_rank": engine.mw_rank(c)} for c in reps]
    cond = check_condition_finel(S, _budget(args), engine)
    if cond.is_unknown:
        unknown.append("condition")
    return {"classes": classes, "search": info, "condition": cond.to_json()}


def cmd_vinberg(args, unknown):
    S = _input(args)
    Ch = vinberg_chamber(S, None, _limits(args))
    if Ch.status != "FiniteVolumeCertified":
        unknown.append("vinberg")
    out = chamber_to_json(Ch)
    out["walls"] = len(Ch.accepted_roots)
    out["cusps"] = [list(c) for c in Ch.cusps]
    return out


def cmd_exceptional(args, unknown):
    S = _input(args)
    try:
        rep = exceptional_sublattice(S, _budget(args), _limits(args))
    except NotApplicable as exc:
        return {"not_applicable": str(exc),
                "condition": exc.verdict.to_json() if exc.verdict else None}
    if not rep.certified:
        unknown.append("exceptional")
    return rep.to_json()


def cmd_census(args, unknown):
    S = _input(args)
    rep = fibration_census(S, _budget(args), _limits(args))
    if rep.verdict.label == "Unknown":
        unknown.append("census")
    out = rep.to_json()
    out["verdict"] = rep.verdict.label
    return out


def _list_row(entry, args):
    cond = check_condition_finel(entry, _budget(args))
    tr = two_reflectivity(entry, _limits(args), cond)
    return cond, tr


def cmd_verify_lists(args, unknown):
    pl = get_list(args.expr)
    entries = pl.members(args.count)
    if args.entries:
        wanted = {parse_lattice_expr(x).normal_form() for x in args.entries}
        entries = [e for e in entries if e.normal_form() in wanted]
    rows = []
    for e in entries:
        cond, tr = _list_row(e, args)
        no_witness = not cond.is_false
        if pl.is_series:
            # the reflection group has infinite index, so a certified finite chamber is wrong
            ok = no_witness and not tr.is_true
        else:
            ok = no_witness and not tr.is_false
        if tr.is_unknown and not pl.is_series:
            unknown.append(str(e))
        rows.append({
            "entry": str(e),
            "condition": cond.answer.value,
            "witness": list(cond.witness) if cond.witness else None,
            "representatives": cond.evidence.get("representatives"),
            "search_exhausted": cond.evidence.get("exhausted"),
            "two_reflective": tr.answer.value,
            "chamber": tr.evidence.get("chamber_status"),
            "pass": ok,
        })
    return {"list": pl.name, "entries": rows,
            "passed": sum(r["pass"] for r in rows), "total": len(rows)}


def cmd_report(args, unknown):
    S = _input(args)
    budget, limits = _budget(args), _limits(args)
    out = {"invariants": _describe(S)}
    if not S.is_hyperbolic:
        out["enriques"] = enriques_screen(S).to_json()
        return out
    cond = None
    if S.blocks is not None and any(b.atom.kind == "U" for b in S.blocks):
        cond = check_condition_finel(S, SearchBudget(budget.coefficient_bound,
                                                     budget.max_candidates))
        out["condition"] = cond.to_json()
    tr = two_reflectivity(S, limits, cond)
    census = fibration_census(S, budget, limits)
    curves = rational_curve_finiteness(S, limits, budget, cond)
    arith = arithmeticity_report(S, limits, budget)
    out["two_reflectivity"] = tr.to_json()
    out["census"] = dict(census.to_json(), verdict=census.verdict.label)
    out["rational_curves"] = curves.to_json()
    out["enriques"] = enriques_screen(S).to_json()
    out["arithmeticity"] = arith.to_json()
    for key, label in (("census", census.verdict.label), ("rational_curves", curves.label),
                       ("arithmeticity", arith.label)):
        if label == "Unknown":
            unknown.append(key)
    return out


_DISPATCH = {
    "parse": cmd_parse, "analyze": cmd_analyze, "roots": cmd_roots,
    "isotropic": cmd_isotropic, "fibrations": cmd_fibrations, "vinberg": cmd_vinberg,
    "exceptional": cmd_exceptional, "census": cmd_census,
    "verify-lists": cmd_verify_lists, "report": cmd_report,
}


# ------------------------------------------------------------- output


def _render(value, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict):
                sub = _render(v, indent + 1)
                lines.append(pad + "- " + sub[0].lstrip())
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _flat(v):
    items = v.values() if isinstance(v, dict) else v
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in items)


def _scalar(v):
    if isinstance(v, list):
        return "(" + ", ".join(_scalar(x) for x in v) + ")"
    if v is None:
        return "-"
    return str(v)


def _table(results):
    lines = [f"{'entry':<22} {'condition':<16} {'2-reflective':<16} pass"]
    for r in results["entries"]:
        lines.append(f"{r['entry']:<22} {r['condition']:<16} {r['two_reflective']:<16} "
                     f"{'yes' if r['pass'] else 'NO'}")
    lines.append(f"{results['passed']}/{results['total']} pass")
    return lines


def _parser():
    p = argparse.ArgumentParser(prog="k3lat", description=__doc__.split("\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("expr", nargs="?", help="lattice expression, or a list name for verify-lists")
    p.add_argument("--gram", metavar="FILE", help="read a Gram matrix instead of an expression")
    p.add_argument("--bound", type=int, default=20, help="coefficient bound B (default 20)")
    p.add_argument("--max-candidates", type=int, default=10 ** 7)
    p.add_argument("--max-roots", type=int, default=200, help="Vinberg wall cap (default 200)")
    p.add_argument("--count", type=int, default=None, help="series members for verify-lists")
    p.add_argument("--entries", nargs="+", help="restrict verify-lists to these entries")
    p.add_argument("--json", action="store_true", help="emit the JSON envelope")
    p.add_argument("--strict", action="store_true", help="exit 2 on an UnknownAtBudget verdict")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to the output")
    return p


def run(argv=None, out=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    if args.command == "verify-lists" and args.expr not in LIST_NAMES:
        print(f"error: unknown list {args.expr!r}; choose from {', '.join(LIST_NAMES)}",
              file=sys.stderr)
        return 1
    unknown = []
    t0 = time.perf_counter()
    try:
        results = _DISPATCH[args.command](args, unknown)
    except LatticeSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.text:
            print("  " + exc.text, file=sys.stderr)
            print("  " + " " * exc.offset + "^", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - t0
    envelope = {
        "command": args.command,
        "input": {"expression": args.expr, "gram_file": args.gram},
        "budgets": {"coefficient_bound": args.bound, "max_candidates": args.max_candidates,
                    "max_roots": args.max_roots},
        "results": results,
        "tool_version": __version__,
    }
    if args.timing:
        envelope["timing"] = {"seconds": round(elapsed, 3)}
    if args.json:
        out.write(json.dumps(envelope, indent=2) + "\n")
    else:
        lines = _table(results) if args.command == "verify-lists" else _render(results)
        if unknown:
            lines.append("UnknownAtBudget: " + ", ".join(unknown))
        if args.timing:
            lines.append(f"time: {elapsed:.3f}s")
        out.write("\n".join(lines) + "\n")
    return 2 if (args.strict and unknown) else 0


def main():
    sys.exit(run())
