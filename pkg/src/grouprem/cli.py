"""Command-line front end.

Results go to stdout as JSON (or CSV), logs to stderr.  Exit codes:
0 ok, 2 bad instance/config, 3 no representation found, 4 size limit hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import applications
from .blowup import MAX_ARCS, blowup_for_system, count_copies, to_dot
from .counting import count_solutions
from .cycles import (
    bfs_tree,
    integrally_generates,
    is_graph_representation,
    is_strong_representation,
    search_representation,
    search_strong_representation,
    spanning_trees,
)
from .errors import ConfigError, ContractViolation, GroupRemError, RepresentationNotFound, SizeLimitError
from .instance import load_instance
from .removal import ExperimentConfig, exact_min_removal, records_to_csv, removal_experiment, run_pipeline
from .systems import OrderedSystem, format_system

log = logging.getLogger("grouprem")

EXIT_OK, EXIT_BAD_INPUT, EXIT_NOT_FOUND, EXIT_SIZE = 0, 2, 3, 4


def _need(inst, *fields):
    for f in fields:
        if getattr(inst, f) is None:
            raise ConfigError(f"instance needs '{f}' for this command")


def cmd_count(args) -> dict:
    inst = load_instance(args.instance, args.seed)
    _need(inst, "system", "sets")
    sys_ = inst.system
    n = inst.group.order
    sols = count_solutions(inst.group, inst.sets, sys_)
    return {
        "solutions": sols,
        "normalized": sols / n ** (sys_.m - sys_.k),
        "N": n,
        "m": sys_.m,
        "k": sys_.k,
    }


def _strong_tree(graph, system, tree):
    if not isinstance(system, OrderedSystem):
        return None, None
    if tree is not None:
        return bool(is_strong_representation(graph, tree, system)), tree
    for t in spanning_trees(graph):
        if is_strong_representation(graph, t, system):
            return True, t
    return False, None


def cmd_represent(args) -> dict:
    inst = load_instance(args.instance, args.seed)
    if inst.vectors is not None:
        _need(inst, "graph")
        verdict = integrally_generates(inst.vectors, inst.graph)
        return {
            "representable-by-given-vectors": verdict.ok,
            "reason": verdict.reason,
            "determinant": verdict.determinant,
        }
    _need(inst, "system")
    system = inst.system
    if inst.graph is not None:
        verdict = is_graph_representation(inst.graph, system)
        strong, tree = _strong_tree(inst.graph, system, inst.tree)
        return {
            "representable": verdict.ok,
            "strong": strong,
            "graph": inst.graph.to_json(),
            "tree": sorted((tree or inst.tree or bfs_tree(inst.graph)).arcs),
            "reason": verdict.reason,
        }
    if isinstance(system, OrderedSystem):
        found = search_strong_representation(system, inst.max_vertices)
        if found is not None:
            graph, tree = found
            return {"representable": True, "strong": True, "graph": graph.to_json(),
                    "tree": sorted(tree.arcs), "reason": None}
    graph = search_representation(system, inst.max_vertices)
    if graph is None:
        raise RepresentationNotFound(f"no representation of '{format_system(system)}' within the caps")
    strong = False if isinstance(system, OrderedSystem) else None
    return {"representable": True, "strong": strong, "graph": graph.to_json(),
            "tree": sorted(bfs_tree(graph).arcs), "reason": None}


def _blowup(inst, args):
    _need(inst, "system", "sets")
    return blowup_for_system(inst.group, inst.sets, inst.system, inst.graph, inst.max_vertices, args.max_arcs)


def cmd_verify(args) -> dict:
    inst = load_instance(args.instance, args.seed)
    blowup = _blowup(inst, args)
    copies = count_copies(blowup)
    sols = count_solutions(inst.group, inst.sets, inst.system)
    n = inst.group.order
    return {
        "N": n,
        "solutions": sols,
        "copies": copies,
        "N_times_solutions": n * sols,
        "match": copies == n * sols,
    }


def cmd_dot(args) -> str:
    inst = load_instance(args.instance, args.seed)
    return to_dot(_blowup(inst, args))


def cmd_removal(args):
    if args.sweep:
        try:
            cfg = json.loads(open(args.sweep).read())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read sweep config {args.sweep}: {exc}") from exc
        if args.seed is not None:
            cfg["seed"] = args.seed
        records = removal_experiment(ExperimentConfig.from_json(cfg), jobs=args.jobs)
        if args.format == "json":
            return {"records": records}
        return records_to_csv(records)
    if args.instance is None:
        raise ConfigError("removal needs an instance file unless --sweep is given")
    inst = load_instance(args.instance, args.seed)
    _need(inst, "system", "sets")
    before = count_solutions(inst.group, inst.sets, inst.system)
    if args.exact:
        result = exact_min_removal(inst.group, inst.sets, inst.system)
        return {"mode": "exact", "solutions_before": before, **result.to_json()}
    report = run_pipeline(_blowup(inst, args))
    log.info("pipeline finished in %.3fs", report.seconds)
    return {"mode": "pipeline", "solutions_before": before, **report.to_json()}


def cmd_app(args) -> dict:
    inst = load_instance(args.instance, args.seed)
    sets = inst.named_sets
    try:
        if args.which == "product-free":
            res = applications.product_free_removal(inst.group, sets["A"], sets["E"])
        elif args.which == "doubling":
            res = applications.small_doubling_removal(inst.group, sets["A"])
        else:
            res = applications.commuting_pairs_removal(inst.group, sets["A"], sets["B"])
    except KeyError as exc:
        raise ConfigError(f"application '{args.which}' needs set {exc.args[0]!r} in the instance") from exc
    return {"application": args.which, **res.to_json()}


def _emit(result, fmt: str) -> str:
    if isinstance(result, str):
        return result
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(result))
        writer.writerow([v if isinstance(v, (int, float, str)) or v is None else json.dumps(v) for v in result.values()])
        return buf.getvalue()
    return json.dumps(result, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the instance seed")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--max-arcs", type=int, default=MAX_ARCS, dest="max_arcs")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="grouprem", description="Removal-lemma machinery for finite groups.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="count solutions")
    s.add_argument("instance")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("represent", parents=[common], help="test or search graph representations")
    s.add_argument("instance")
    s.set_defaults(func=cmd_represent)

    s = sub.add_parser("verify", parents=[common], help="compare copy count with N x solutions")
    s.add_argument("instance")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("dot", parents=[common], help="Graphviz source of a small blow-up")
    s.add_argument("instance")
    s.set_defaults(func=cmd_dot)

    s = sub.add_parser("removal", parents=[common], help="run the removal pipeline, the exact oracle, or a sweep")
    s.add_argument("instance", nargs="?")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--pipeline", action="store_true", help="greedy hitting set + pigeonhole (default)")
    mode.add_argument("--exact", action="store_true", help="minimum removal by branch and bound")
    mode.add_argument("--sweep", metavar="CONFIG", help="experiment sweep; CSV by default")
    s.set_defaults(func=cmd_removal, format=None)

    s = sub.add_parser("app", parents=[common], help="product-free / doubling / commuting applications")
    s.add_argument("which", choices=("product-free", "doubling", "commuting"))
    s.add_argument("instance")
    s.set_defaults(func=cmd_app)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "removal" and args.format is None:
        args.format = "csv" if args.sweep else "json"
    try:
        result = args.func(args)
    except RepresentationNotFound as exc:
        log.error("%s", exc)
        return EXIT_NOT_FOUND
    except SizeLimitError as exc:
        log.error("%s", exc)
        return EXIT_SIZE
    except (GroupRemError, ContractViolation) as exc:
        log.error("%s", exc)
        return EXIT_BAD_INPUT
    sys.stdout.write(_emit(result, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
