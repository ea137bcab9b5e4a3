"""Command-line entry point: ``racforge <subcommand> ...``.

Exit codes: 0 success, 1 domain failure (not RAC, violations found,
unsatisfying assignment, inconsistent geometry), 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import io
from .checker import check_rac, diagnose_three_mutual, diagnose_triangle_fence
from .errors import (DegenerateDrawing, DimacsSyntaxError, GraphMismatch, InconsistentGeometry,
                     InvalidAttachment, InvalidParameter, Not3Sat, SchemaError, UnsatAssignment)
from .graph import Drawing, LabeledGraph, augmented_antiprism, extend, seed_drawing
from .layout import LayoutConfig, optimize, survey_embeddings
from .reduction import Assignment, compile_formula, extract_assignment, parse_dimacs, synthesize_drawing
from .svg import SvgOptions, render_svg

INPUT_ERRORS = (SchemaError, DimacsSyntaxError, Not3Sat, InvalidParameter, InvalidAttachment,
                GraphMismatch, FileNotFoundError, IsADirectoryError, PermissionError)
DOMAIN_ERRORS = (UnsatAssignment, InconsistentGeometry, DegenerateDrawing)


def _emit(text: str, out: str = None):
    if out:
        io.write_text(out, text)
    else:
        sys.stdout.write(text)


def _read_cnf(path):
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


def _exact_drawing(path):
    d, lg = io.read_drawing(path)
    if not isinstance(d, Drawing):
        raise SchemaError("this command needs an exact drawing", "$.kind")
    return d, lg


def _config(args) -> LayoutConfig:
    cfg = io.read_config(args.config) if getattr(args, "config", None) else LayoutConfig()
    env = os.environ.get("RACFORGE_SEED")
    if env is not None:
        try:
            cfg = replace(cfg, seed=int(env))
        except ValueError:
            raise InvalidParameter(f"RACFORGE_SEED must be an integer, got {env!r}")
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "restarts", None) is not None:
        cfg = replace(cfg, restarts=args.restarts)
    if getattr(args, "seeded_fraction", None) is not None:
        cfg = replace(cfg, seeded_fraction=args.seeded_fraction)
    return cfg


# ---------------------------------------------------------------------------


def cmd_gen_antiprism(args):
    lg = augmented_antiprism(args.k, args.prefix)
    if args.drawing:
        if args.k != 4 or args.prefix:
            raise InvalidParameter("fixture drawings exist for k=4 without prefix only")
        _emit(io.dumps(io.drawing_to_obj(seed_drawing(args.drawing), lg.roles)), args.out)
    else:
        _emit(io.dumps(io.graph_to_obj(lg)), args.out)
    return 0


def cmd_extend(args):
    g, h = io.read_graph(args.left), io.read_graph(args.right)
    _emit(io.dumps(io.graph_to_obj(extend(g, h, args.mode))), args.out)
    return 0


def cmd_compile_cnf(args):
    f = _read_cnf(args.cnf)
    lg, labels = compile_formula(f)
    _emit(io.dumps(io.graph_to_obj(LabeledGraph(lg.graph, {}))), args.out)
    if args.labels:
        io.write_labels(args.labels, labels)
    return 0


def cmd_synthesize(args):
    f = _read_cnf(args.cnf)
    a = Assignment.parse(args.assignment, f.n)
    d = synthesize_drawing(f, a)
    _emit(io.dumps(io.drawing_to_obj(d)), args.out)
    if args.labels:
        io.write_labels(args.labels, compile_formula(f)[1])
    return 0


def cmd_check(args):
    d, _ = _exact_drawing(args.drawing)
    rep = check_rac(d)
    if args.json:
        _emit(json.dumps(rep.to_dict(), indent=2) + "\n")
    else:
        perp = sum(c.perpendicular for c in rep.crossings)
        lines = [f"rac: {'yes' if rep.is_rac else 'no'}",
                 f"crossings: {len(rep.crossings)} ({perp} perpendicular)",
                 f"degeneracies: {len(rep.degeneracies)}",
                 f"min angle: {rep.min_angle_degrees if rep.min_angle_degrees is not None else '-'}",
                 f"edge bound: {rep.edge_bound.status} ({rep.edge_bound.edges} vs {rep.edge_bound.bound})"]
        lines += [f"  {x}" for x in rep.degeneracies[:20]]
        _emit("\n".join(lines) + "\n")
    return 0 if rep.is_rac else 1


def cmd_diagnose(args):
    d, _ = _exact_drawing(args.drawing)
    triples = diagnose_three_mutual(d)
    fence = diagnose_triangle_fence(d)
    if args.json:
        _emit(json.dumps({"three_mutual": [[list(e) for e in t] for t in triples],
                          "triangle_fence": [v.to_dict() for v in fence]}, indent=2) + "\n")
    else:
        lines = [f"three mutually crossing edges: {len(triples)}"]
        lines += [f"  {t}" for t in triples]
        lines.append(f"triangle fence violations: {len(fence)}")
        lines += [f"  triangle {v.triangle}: {v.apex} has {list(v.inner_neighbors)} inside" for v in fence]
        _emit("\n".join(lines) + "\n")
    return 1 if (triples or fence) else 0


def cmd_optimize(args):
    lg = io.read_graph(args.graph)
    cfg = _config(args)
    fd, rep = optimize(lg.graph, cfg)
    _emit(io.dumps(io.drawing_to_obj(fd, lg.roles)), args.out)
    if args.report:
        io.write_text(args.report, io.dumps(rep.to_dict()))
    near = rep.min_angle is None or rep.min_angle >= 90.0 - cfg.eps_deg
    sys.stderr.write(f"energy {rep.energy:.3e}, min angle {rep.min_angle}, restart {rep.best_restart}\n")
    return 0 if near else 1


def cmd_survey(args):
    lg = io.read_graph(args.graph)
    cfg = _config(args)
    fixtures = []
    for path in args.fixture or ():
        d, _ = _exact_drawing(path)
        if d.graph != lg.graph:
            raise GraphMismatch(f"fixture {path} is not a drawing of the surveyed graph")
        fixtures.append(d)
    res = survey_embeddings(lg.graph, cfg, fixtures, run_log=args.runs)
    _emit(io.dumps(res.to_dict()), args.out)
    return 0 if res.near_rac else 1


def cmd_svg(args):
    d, lg = io.read_drawing(args.drawing)
    roles = dict(lg.roles)
    if args.labels:
        roles.update(io.read_labels(args.labels).roles)
    opts = SvgOptions(scale=args.scale, show_crossings=not args.no_crossings,
                      highlight_roles=tuple(args.highlight or ()))
    _emit(render_svg(d, opts, roles), args.out)
    return 0


def cmd_extract(args):
    d, _ = _exact_drawing(args.drawing)
    labels = io.read_labels(args.labels)
    a = extract_assignment(d, labels)
    ok = True
    if args.cnf:
        from .reduction import satisfies
        ok = satisfies(_read_cnf(args.cnf), a)
    _emit(a.to_string() + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="racforge", description="RAC drawing toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-antiprism", help="augmented k-gon antiprism graph (or a k=4 fixture drawing)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--prefix", default="")
    s.add_argument("--drawing", choices=("A", "B"), help="emit the exact fixture drawing of this class")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen_antiprism)

    s = sub.add_parser("extend", help="glue two labelled square antiprism graphs")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--mode", choices=("horizontal", "vertical"), default="horizontal")
    s.add_argument("--out")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("compile-cnf", help="gadget graph of a 3-CNF formula")
    s.add_argument("--cnf", required=True)
    s.add_argument("--labels", help="write gadget labels here")
    s.add_argument("--out")
    s.set_defaults(func=cmd_compile_cnf)

    s = sub.add_parser("synthesize", help="exact RAC drawing for a satisfying assignment")
    s.add_argument("--cnf", required=True)
    s.add_argument("--assignment", required=True, help='e.g. "101", "1,0,1" or "1 -2 3"')
    s.add_argument("--labels", help="also write gadget labels here")
    s.add_argument("--out")
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("check", help="exact RAC check of a drawing")
    s.add_argument("--drawing", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("diagnose", help="three-mutual-crossing and triangle-fence diagnostics")
    s.add_argument("--drawing", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_diagnose)

    s = sub.add_parser("optimize", help="search for a near-RAC layout")
    s.add_argument("--graph", required=True)
    s.add_argument("--config")
    s.add_argument("--seed", type=int)
    s.add_argument("--restarts", type=int)
    s.add_argument("--report", help="write the optimizer report here")
    s.add_argument("--out")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("survey", help="histogram of near-RAC embedding classes over restarts")
    s.add_argument("--graph", required=True)
    s.add_argument("--config")
    s.add_argument("--seed", type=int)
    s.add_argument("--restarts", type=int)
    s.add_argument("--fixture", action="append", help="exact drawing used for seeded starts (repeatable)")
    s.add_argument("--seeded-fraction", type=float)
    s.add_argument("--runs", action="store_true", help="include the per-restart log")
    s.add_argument("--out")
    s.set_defaults(func=cmd_survey)

    s = sub.add_parser("svg", help="render a drawing")
    s.add_argument("--drawing", required=True)
    s.add_argument("--labels")
    s.add_argument("--highlight", action="append", help="role name to colour (repeatable)")
    s.add_argument("--scale", type=float, default=20.0)
    s.add_argument("--no-crossings", action="store_true", help="omit right-angle glyphs")
    s.add_argument("--out")
    s.set_defaults(func=cmd_svg)

    s = sub.add_parser("extract-assignment", help="read the truth assignment off a gadget drawing")
    s.add_argument("--drawing", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--cnf", help="also verify the assignment against this formula")
    s.set_defaults(func=cmd_extract)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        sys.stderr.write(f"racforge: {exc}\n")
        return 1
    except INPUT_ERRORS as exc:
        sys.stderr.write(f"racforge: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"racforge: invalid input: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
