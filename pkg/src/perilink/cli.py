"""Batch command-line surface.  JSON in, JSON out.

Commands: parse, present, homs, check, ribbon, sum, homology, qscan, sweep.
Exit codes: 0 success, 1 usage, 2 bad input, 3 check failure, 4 resource cap.
The default homology order cap comes from PERILINK_CAP_ORDER (else 16).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import catalog
from .diagram import (
    LinkDiagram,
    PDError,
    linking_number,
    multi_connected_sum,
    parse_pd,
    self_writhe,
    to_text,
)
from .groups import CapExceeded, FiniteGroup, GroupError, GroupPresentation, abelianization, build_group
from .homenum import SearchLimitExceeded, enumerate_homs, peripheral_system
from .homology import DEFAULT_CAP_ORDER, homology_group, q_group
from .realize import (
    ConstructionError,
    RibbonInput,
    RibbonInputError,
    check_full,
    check_weak,
    construct_ribbon,
)
from .wirtinger import longitude_raw, preferred_longitude, preferred_system, presentation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_CHECK = 3
EXIT_CAP = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"usage error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class InputError(ValueError):
    pass


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.exists(arg):
        with open(arg) as f:
            return f.read()
    return arg


def _load_diagram(arg: str) -> tuple[str, LinkDiagram]:
    """A corpus name, a path to PD text or a {"name","pd"} JSON file, raw PD
    text, or "-" for stdin."""
    if arg in catalog.CORPUS_NAMES:
        return arg, catalog.corpus_diagram(arg)
    text = _read_text(arg)
    stripped = text.strip()
    name = os.path.basename(arg) if os.path.exists(arg) else "inline"
    if stripped.startswith("{"):
        obj = json.loads(stripped)
        return obj.get("name", name), parse_pd(obj["pd"])
    return name, parse_pd(text)


def _load_group(arg: str) -> FiniteGroup:
    """A catalog name, a path to a group-spec JSON file, or inline JSON."""
    try:
        return catalog.catalog_group(arg)
    except KeyError:
        pass
    text = _read_text(arg)
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"not a catalog group or group JSON: {arg!r} ({e})")
    return build_group(spec)


def _hash(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _report(command: str, inputs: dict, results, started: float,
            threads: int = 1) -> dict:
    from . import __version__
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "timing_ms": int((time.time() - started) * 1000),
        "version": __version__,
        "threads": threads,
    }


def _emit(report: dict, out: str | None):
    text = json.dumps(report, indent=1, sort_keys=True)
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_parse(args) -> tuple[dict, int]:
    name, d = _load_diagram(args.diagram)
    r = d.num_components
    results = {
        "name": name,
        "pd": to_text(d),
        "components": r,
        "crossings": len(d.crossings),
        "crossingless_components": d.crossingless_components,
        "self_writhe": [self_writhe(d, i) for i in range(r)],
        "linking_matrix": [[0 if i == j else linking_number(d, i, j)
                            for j in range(r)] for i in range(r)],
    }
    return results, EXIT_OK


def cmd_present(args) -> tuple[dict, int]:
    name, d = _load_diagram(args.diagram)
    p = presentation(d)
    results = {
        "name": name,
        "presentation": p.to_json(),
        "longitudes_raw": [longitude_raw(d, i).to_signed_ints()
                           for i in range(d.num_components)],
        "preferred_longitudes": [preferred_longitude(d, i).to_signed_ints()
                                 for i in range(d.num_components)],
        "preferred_system": [w.to_signed_ints() for w in preferred_system(d)],
    }
    return results, EXIT_OK


def _conjugacy_pattern(G: FiniteGroup, mu) -> list[int]:
    classes: list[frozenset] = []
    pattern = []
    for m in mu:
        c = G.conjugacy_class(m)
        if c not in classes:
            classes.append(c)
        pattern.append(classes.index(c))
    return pattern


def cmd_homs(args) -> tuple[dict, int]:
    G = _load_group(args.group)
    code = EXIT_OK
    limited = False
    if args.presentation:
        pres = GroupPresentation.from_json(json.loads(_read_text(args.presentation)))
        name = args.presentation
        try:
            homs = enumerate_homs(pres, G, surjective_only=args.surjective_only,
                                  limit=args.limit)
        except SearchLimitExceeded as e:
            homs, limited, code = e.partial, True, EXIT_CAP
        hom_rows = [h.to_json() for h in homs]
    else:
        name, d = _load_diagram(args.diagram)
        p = presentation(d)
        try:
            homs = enumerate_homs(p, G, surjective_only=args.surjective_only,
                                  limit=args.limit, threads=args.threads)
        except SearchLimitExceeded as e:
            homs, limited, code = e.partial, True, EXIT_CAP
        hom_rows = []
        for h in homs:
            row = h.to_json()
            ps = peripheral_system(d, h)
            row["peripheral"] = ps.to_json()
            row["mu_conjugacy_pattern"] = _conjugacy_pattern(G, ps.mu)
            hom_rows.append(row)
    results = {
        "name": name,
        "group": G.name,
        "count": len(hom_rows),
        "surjective_count": sum(1 for r in hom_rows if r["surjective"]),
        "limit_exceeded": limited,
        "homs": hom_rows,
    }
    return results, code


def cmd_check(args) -> tuple[dict, int]:
    obj = json.loads(_read_text(args.input))
    G = _load_group(json.dumps(obj["group"]) if isinstance(obj["group"], dict)
                    else obj["group"])
    mu = obj["mu"]
    lam = obj["lambda"]
    cap = args.cap_order
    v = check_full(G, mu, lam, cap) if args.mode == "full" else \
        check_weak(G, mu, lam, cap)
    results = {"group": G.name, "mu": mu, "lambda": lam,
               "mu_names": [G.element_names[m] for m in mu],
               "lambda_names": [G.element_names[l] for l in lam],
               "mode": args.mode, "verdict": v.to_json()}
    if v.cap_skipped:
        return results, EXIT_CAP
    passed = v.weakly_realizable if args.mode == "weak" else v.realizable is True
    return results, EXIT_OK if passed else EXIT_CHECK


def cmd_ribbon(args) -> tuple[dict, int]:
    obj = json.loads(_read_text(args.input))
    G = _load_group(json.dumps(obj["group"]) if isinstance(obj["group"], dict)
                    else obj["group"])
    inp = RibbonInput.from_json(G, obj)
    rr = construct_ribbon(inp)
    p = presentation(rr.diagram)
    results = {
        "group": G.name,
        "pd": to_text(rr.diagram),
        "components": rr.diagram.num_components,
        "crossings": len(rr.diagram.crossings),
        "band_count": rr.band_count,
        "labelling": {f"x{g}": G.element_names[v]
                      for g, v in sorted(rr.labelling.items())},
        "assignment": list(rr.hom.assignment),
        "surjective": rr.hom.surjective,
        "meridian_images": [G.element_names[m] for m in rr.mu],
        "pairwise_linking": [[0 if i == j else linking_number(rr.diagram, i, j)
                              for j in range(rr.diagram.num_components)]
                             for i in range(rr.diagram.num_components)],
    }
    return results, EXIT_OK


def cmd_sum(args) -> tuple[dict, int]:
    name_k, dk = _load_diagram(args.k)
    name_j, dj = _load_diagram(args.j)
    splice = None
    if args.splice:
        pairs = json.loads(args.splice)
        splice = [tuple(p) for p in pairs]
    d = multi_connected_sum(dk, dj, splice)
    r = d.num_components
    results = {
        "k": name_k,
        "j": name_j,
        "pd": to_text(d),
        "components": r,
        "linking_matrix": [[0 if i == j else linking_number(d, i, j)
                            for j in range(r)] for i in range(r)],
        "self_writhe": [self_writhe(d, i) for i in range(r)],
    }
    return results, EXIT_OK


def cmd_homology(args) -> tuple[dict, int]:
    G = _load_group(args.group)
    degrees = [int(k) for k in args.degrees.split(",")]
    out = {"group": G.name, "order": G.order, "homology": {}}
    for k in degrees:
        h = homology_group(G, k, args.cap_order)
        entry = {"invariant_factors": list(h.invariant_factors)}
        if args.generators:
            entry["generator_cycles"] = [
                sorted((idx, c) for idx, c in cyc.items())
                for cyc in h.generator_cycles()]
        out["homology"][str(k)] = entry
    if args.q:
        q = q_group(G, args.cap_order)
        out["q"] = q.to_json()
    return out, EXIT_OK


def cmd_qscan(args) -> tuple[dict, int]:
    if args.max_order > args.cap_order:
        raise CapExceeded(
            f"requested max order {args.max_order} exceeds cap {args.cap_order}")
    rows = []
    nontrivial = []
    for G in catalog.catalog_groups(max_order=args.max_order):
        ab = abelianization(G)
        if not ab.is_cyclic:
            continue
        h2 = homology_group(G, 2, args.cap_order)
        h3 = homology_group(G, 3, args.cap_order)
        q = q_group(G, args.cap_order)
        trivial = not q.invariant_factors
        if not trivial:
            nontrivial.append(G.name)
        rows.append({
            "group": G.name,
            "order": G.order,
            "n": ab.quotient_order,
            "h2": list(h2.invariant_factors),
            "h3": list(h3.invariant_factors),
            "q": list(q.invariant_factors),
            "q_trivial": trivial,
        })
    results = {
        "max_order": args.max_order,
        "groups": rows,
        "nontrivial_q": nontrivial,
        "q_all_trivial": not nontrivial,
        "note": ("every scanned quotient is trivial, so the independence of "
                 "the secondary class from the choice of filling is witnessed "
                 "only at the membership level" if not nontrivial else
                 "nontrivial quotients found"),
    }
    return results, EXIT_OK


def _sweep_cell(d, name, G, cap_order, limit, threads):
    cell = {"diagram": name, "group": G.name, "homs": 0, "surjections": 0,
            "weak_checked": 0, "weak_pass": 0, "full_checked": 0,
            "full_pass": 0, "cap_skipped": 0, "limit_exceeded": False,
            "failures": []}
    p = presentation(d)
    try:
        homs = enumerate_homs(p, G, limit=limit, threads=threads)
    except SearchLimitExceeded as e:
        cell["limit_exceeded"] = True
        homs = e.partial
    cell["homs"] = len(homs)
    for h in homs:
        if not h.surjective:
            continue
        cell["surjections"] += 1
        ps = peripheral_system(d, h)
        v = check_full(G, ps.mu, ps.lam, cap_order)
        if v.cap_skipped:
            cell["cap_skipped"] += 1
            continue
        cell["weak_checked"] += 1
        if v.weakly_realizable:
            cell["weak_pass"] += 1
        else:
            cell["failures"].append(
                {"kind": "weak", "assignment": list(h.assignment),
                 "verdict": v.to_json()})
        if v.conjugate_meridians:
            cell["full_checked"] += 1
            if v.realizable is True:
                cell["full_pass"] += 1
            else:
                cell["failures"].append(
                    {"kind": "full", "assignment": list(h.assignment),
                     "verdict": v.to_json()})
    return cell


def cmd_sweep(args) -> tuple[dict, int]:
    if args.corpus_dir:
        diagrams = []
        for fn in sorted(os.listdir(args.corpus_dir)):
            if fn.endswith(".json"):
                with open(os.path.join(args.corpus_dir, fn)) as f:
                    obj = json.load(f)
                diagrams.append((obj.get("name", fn), parse_pd(obj["pd"])))
    else:
        diagrams = catalog.corpus()
    if args.groups:
        groups = [_load_group(g) for g in args.groups.split(",")]
    else:
        groups = catalog.catalog_groups()
    cells = []
    for name, d in diagrams:
        for G in groups:
            cells.append(_sweep_cell(d, name, G, args.cap_order, args.limit,
                                     args.threads))
    failures = sum(len(c["failures"]) for c in cells)
    results = {
        "cells": cells,
        "total_surjections": sum(c["surjections"] for c in cells),
        "total_failures": failures,
        "total_cap_skipped": sum(c["cap_skipped"] for c in cells),
        "all_pass": failures == 0,
    }
    return results, EXIT_OK if failures == 0 else EXIT_CHECK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    cap_default = int(os.environ.get("PERILINK_CAP_ORDER", DEFAULT_CAP_ORDER))
    p = _Parser(prog="perilink",
                description="peripheral structures of link groups")
    p.add_argument("--out", help="write the JSON report to a file")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, cap=True, threads=True, limit=True):
        if cap:
            sp.add_argument("--cap-order", type=int, default=cap_default,
                            help="group order cap for homology computations")
        if threads:
            sp.add_argument("--threads", type=int, default=1)
        if limit:
            sp.add_argument("--limit", type=int, default=10 ** 6,
                            help="search node budget for enumeration")

    sp = sub.add_parser("parse", help="validate and canonicalize a PD code")
    sp.add_argument("diagram")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("present", help="Wirtinger presentation and longitudes")
    sp.add_argument("diagram")
    sp.set_defaults(func=cmd_present)

    sp = sub.add_parser("homs", help="enumerate homomorphisms into a group")
    sp.add_argument("group")
    sp.add_argument("--diagram", help="diagram input (corpus name, file, PD)")
    sp.add_argument("--presentation", help="presentation JSON (file or inline)")
    sp.add_argument("--surjective-only", action="store_true")
    common(sp, cap=False)
    sp.set_defaults(func=cmd_homs)

    sp = sub.add_parser("check", help="realizability conditions for (G, mu, lambda)")
    sp.add_argument("input", help="JSON with group, mu, lambda")
    sp.add_argument("--mode", choices=["weak", "full"], default="full")
    common(sp, threads=False, limit=False)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("ribbon", help="build a labelled ribbon link")
    sp.add_argument("input", help="JSON with group, mu, words")
    sp.set_defaults(func=cmd_ribbon)

    sp = sub.add_parser("sum", help="componentwise connected sum")
    sp.add_argument("k")
    sp.add_argument("j")
    sp.add_argument("--splice", help="JSON list of [edge_k, edge_j] pairs")
    sp.set_defaults(func=cmd_sum)

    sp = sub.add_parser("homology", help="integer homology of a finite group")
    sp.add_argument("group")
    sp.add_argument("--degrees", default="2,3")
    sp.add_argument("--generators", action="store_true",
                    help="include generator cycles (large)")
    sp.add_argument("--q", action="store_true",
                    help="include the secondary quotient data")
    common(sp, threads=False, limit=False)
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("qscan", help="scan the catalog for nontrivial quotients")
    sp.add_argument("--max-order", type=int, default=12)
    sp.add_argument("--out-dir", help="write JSON, CSV and figures here")
    common(sp, threads=False, limit=False)
    sp.set_defaults(func=cmd_qscan)

    sp = sub.add_parser("sweep", help="corpus x catalog necessity sweep")
    sp.add_argument("--corpus-dir", help="directory of {name, pd} JSON files")
    sp.add_argument("--groups", help="comma-separated group names/specs")
    sp.add_argument("--out-dir", help="write JSON, CSV and figures here")
    common(sp)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    started = time.time()
    inputs = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "command") and v is not None
              and not callable(v)}
    inputs["hash"] = _hash(json.dumps(inputs, sort_keys=True, default=str))
    try:
        results, code = args.func(args)
    except (PDError, GroupError, RibbonInputError, InputError,
            json.JSONDecodeError, KeyError, FileNotFoundError) as e:
        print(json.dumps({"error": f"{type(e).__name__}: {e}"}),
              file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as e:
        print(json.dumps({"error": f"CapExceeded: {e}"}), file=sys.stderr)
        return EXIT_CAP
    except ConstructionError as e:
        print(json.dumps({"error": f"ConstructionError: {e}"}), file=sys.stderr)
        return EXIT_CHECK
    report = _report(args.command, inputs, results, started,
                     threads=getattr(args, "threads", 1))
    _emit(report, args.out)
    if args.command == "qscan" and getattr(args, "out_dir", None):
        from .report import write_qscan_outputs
        write_qscan_outputs(report, args.out_dir)
    if args.command == "sweep" and getattr(args, "out_dir", None):
        from .report import write_sweep_outputs
        write_sweep_outputs(report, args.out_dir)
    return code


if __name__ == "__main__":
    sys.exit(main())
