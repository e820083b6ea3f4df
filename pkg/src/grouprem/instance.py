"""Instance files: a group, an equation system, the sets, optional base graph.

Example::

    {
      "group": {"type": "cyclic", "n": 7},
      "system": "x1 x2 x4^-1 x3^-1 = 1; x1 x2 x5^-1 = 1",
      "sets": {"density": 0.4},
      "seed": 1
    }

``sets`` is either one entry per variable or a single entry applied to all
of them.  An entry is a list of element indices, ``"full"``, ``"empty"``
or ``{"density": d}``; density sets are drawn with SplitMix64 seeded by
``derive_seed(seed, variable_index)``.  Application instances name their
sets ``"A"``, ``"B"`` and ``"E"`` at top level instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .cycles import ColoredDigraph, SpanningTree
from .errors import ConfigError, InvalidParameter
from .groups import ElementSet, GroupTable, group_from_descriptor
from .rng import SplitMix64, derive_seed
from .systems import SingleEquation, System, parse_system_json


@dataclass
class Instance:
    group: GroupTable
    system: System | None
    sets: list[ElementSet] | None
    graph: ColoredDigraph | None
    tree: SpanningTree | None
    vectors: list[list[int]] | None
    named_sets: dict[str, ElementSet]
    seed: int
    max_vertices: int


def make_set(entry, group_order: int, seed: int, index: int) -> ElementSet:
    if entry == "full":
        return ElementSet.full(group_order)
    if entry == "empty":
        return ElementSet.empty(group_order)
    if isinstance(entry, dict) and "density" in entry:
        d = float(entry["density"])
        if not 0.0 <= d <= 1.0:
            raise InvalidParameter(f"density {d} outside [0, 1]")
        rng = SplitMix64(derive_seed(int(entry.get("seed", seed)), index))
        return ElementSet.of(rng.subset(group_order, d), group_order)
    if isinstance(entry, list):
        if len(set(entry)) != len(entry):
            raise InvalidParameter(f"set {index + 1} lists an element twice")
        return ElementSet.of(entry, group_order)
    raise InvalidParameter(f"cannot read set {index + 1} from {entry!r}")


def load_instance(source, seed: int | None = None) -> Instance:
    """Read and cross-validate an instance from a path or an already-parsed dict."""
    if isinstance(source, (str, Path)):
        try:
            raw = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read instance {source}: {exc}") from exc
    else:
        raw = source
    if not isinstance(raw, dict) or "group" not in raw:
        raise ConfigError("instance must be a JSON object with a 'group'")
    group = group_from_descriptor(raw["group"])
    n = group.order
    seed = int(raw.get("seed", 0)) if seed is None else seed

    system = None
    if "system" in raw:
        system = parse_system_json(raw["system"])
    elif "m" in raw:
        system = SingleEquation(int(raw["m"]), int(raw.get("g", group.identity)))
    if isinstance(system, SingleEquation) and not 0 <= system.rhs < n:
        raise InvalidParameter(f"right-hand side g{system.rhs} is not an element of {group.name}")

    sets = None
    if "sets" in raw:
        if system is None:
            raise ConfigError("'sets' given without a system")
        entries = raw["sets"]
        if not isinstance(entries, list) or (entries and all(isinstance(x, int) for x in entries)):
            entries = [entries] * system.m
        if len(entries) != system.m:
            raise InvalidParameter(f"system has {system.m} variables but {len(entries)} sets were given")
        sets = [make_set(e, n, seed, i) for i, e in enumerate(entries)]

    graph = ColoredDigraph.from_json(raw["graph"]) if raw.get("graph") is not None else None
    if graph is not None and system is not None and graph.m != system.m:
        raise InvalidParameter(f"graph has {graph.m} arcs but the system has {system.m} variables")
    tree = None
    if raw.get("tree") is not None:
        if graph is None:
            raise ConfigError("'tree' given without a 'graph'")
        tree = SpanningTree.of(graph, raw["tree"], root=int(raw.get("root", 0)))
    vectors = raw.get("vectors")
    if vectors is not None and graph is not None and any(len(v) != graph.m for v in vectors):
        raise InvalidParameter("every vector needs one entry per graph arc")

    named = {}
    for i, key in enumerate(("A", "B", "E")):
        if key in raw:
            named[key] = make_set(raw[key], n, seed, 100 + i)
    return Instance(group, system, sets, graph, tree, vectors, named, seed, int(raw.get("max_vertices", 12)))
