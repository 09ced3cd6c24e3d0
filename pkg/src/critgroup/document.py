"""The JSON input document: a graph plus an optional dihedral action.

Layout::

    {"graph": {"vertices": [...], "edges": [[u, v], ...]},
     "action": {"n": 4, "sigma1": "(z1 z4)(z2 z3)(x y)", "sigma2": {"z2": "z4", ...},
                "sigma1_edges": {"0": 3, ...}, "sigma2_edges": {...}}}

Permutations are cycle strings or label maps with fixed points omitted.
Edge permutations are optional maps from edge index to edge index and are
required only for graphs with parallel edges.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .action import (
    ActionError,
    DihedralAction,
    GeneratorPerm,
    identity_perm,
    perm_from_cycles,
    perm_from_mapping,
    perm_to_cycles,
    validate_action,
)
from .graph import Multigraph, build_graph


class DocumentError(ValueError):
    """Malformed input; ``where`` is ``(line, column)`` or a JSON path."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"parse error at {where}: {message}" if where else f"parse error: {message}")
        self.where = where


def _parse_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc


def _label(x: Any, where: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise DocumentError(f"vertex labels must be strings or integers, got {x!r}", where)
    return x


def parse_graph(obj: Any, where: str = "graph") -> Multigraph:
    """Graph from ``{"vertices": [...], "edges": [[u, v], ...]}``.

    Raises:
        DocumentError: wrong shape.
        GraphError: the data do not describe a connected loopless multigraph.
    """
    if not isinstance(obj, Mapping):
        raise DocumentError("expected an object with 'vertices' and 'edges'", where)
    for key in ("vertices", "edges"):
        if not isinstance(obj.get(key), list):
            raise DocumentError(f"'{key}' must be a list", where)
    labels = [_label(x, f"{where}.vertices[{i}]") for i, x in enumerate(obj["vertices"])]
    edges = []
    for i, e in enumerate(obj["edges"]):
        if not isinstance(e, list) or len(e) != 2:
            raise DocumentError("an edge is a two-element list", f"{where}.edges[{i}]")
        edges.append((_label(e[0], f"{where}.edges[{i}]"), _label(e[1], f"{where}.edges[{i}]")))
    return build_graph(labels, edges)


def parse_perm(G: Multigraph, spec: Any, where: str) -> tuple[int, ...]:
    try:
        if isinstance(spec, str):
            return perm_from_cycles(G, spec)
        if isinstance(spec, Mapping):
            return perm_from_mapping(G, spec)
    except (ActionError, ValueError) as exc:
        raise DocumentError(str(exc), where) from exc
    raise DocumentError("a permutation is a cycle string or a label map", where)


def parse_edge_perm(G: Multigraph, spec: Any, where: str) -> tuple[int, ...]:
    p = list(identity_perm(G.num_edges))
    if isinstance(spec, list):
        spec = dict(enumerate(spec))
    if not isinstance(spec, Mapping):
        raise DocumentError("an edge permutation is a map from edge index to edge index", where)
    for a, b in spec.items():
        try:
            a, b = int(a), int(b)
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"edge indices must be integers: {a!r} -> {b!r}", where) from exc
        if not (0 <= a < G.num_edges and 0 <= b < G.num_edges):
            raise DocumentError(f"edge index out of range: {a} -> {b}", where)
        p[a] = b
    return tuple(p)


def parse_action(G: Multigraph, obj: Any, where: str = "action") -> DihedralAction:
    """Action from its JSON object; validation errors surface as ``ActionError``."""
    if not isinstance(obj, Mapping):
        raise DocumentError("expected an object with 'n', 'sigma1', 'sigma2'", where)
    n = obj.get("n")
    if isinstance(n, bool) or not isinstance(n, int):
        raise DocumentError("'n' must be an integer", where)
    gens = []
    for name in ("sigma1", "sigma2"):
        if name not in obj:
            raise DocumentError(f"missing '{name}'", where)
        vp = parse_perm(G, obj[name], f"{where}.{name}")
        key = f"{name}_edges"
        if key in obj:
            gens.append(GeneratorPerm(vp, parse_edge_perm(G, obj[key], f"{where}.{key}")))
        else:
            gens.append(vp)
    return validate_action(G, gens[0], gens[1], n)


def load_document(text: str, need_action: bool = True) -> tuple[Multigraph, DihedralAction | None]:
    """Parse an input document.

    Raises:
        DocumentError: malformed JSON or wrong shape (with a position).
        GraphError, ActionError: well-formed input that breaks an invariant.
    """
    doc = _parse_json(text)
    if not isinstance(doc, Mapping) or "graph" not in doc:
        raise DocumentError("top level must be an object with a 'graph' key", "document")
    G = parse_graph(doc["graph"])
    if "action" not in doc or doc["action"] is None:
        if need_action:
            raise DocumentError("this command needs an 'action'", "document")
        return G, None
    return G, parse_action(G, doc["action"])


def parse_divisor(G: Multigraph, text: str) -> tuple[int, ...]:
    """Divisor from ``{"vertex": value, ...}``; missing vertices get 0."""
    obj = _parse_json(text)
    if not isinstance(obj, Mapping):
        raise DocumentError("a divisor is an object mapping vertices to integers", "divisor")
    out = [0] * G.num_vertices
    for k, v in obj.items():
        if isinstance(v, bool) or not isinstance(v, int):
            raise DocumentError(f"value for {k!r} must be an integer", "divisor")
        idx = G.index.get(k)
        if idx is None and k.lstrip("-").isdigit():
            idx = G.index.get(int(k))
        if idx is None:
            raise DocumentError(f"unknown vertex {k!r}", "divisor")
        out[idx] = v
    return tuple(out)


def graph_to_json(G: Multigraph) -> dict[str, Any]:
    return {"vertices": list(G.labels), "edges": [[G.labels[a], G.labels[b]] for a, b in G.edges]}


def document_to_json(G: Multigraph, action: DihedralAction | None) -> dict[str, Any]:
    """Inverse of :func:`load_document`; edge maps are written only for multigraphs."""
    doc: dict[str, Any] = {"graph": graph_to_json(G)}
    if action is not None:
        act: dict[str, Any] = {"n": action.n}
        for name, s in (("sigma1", action.sigma1), ("sigma2", action.sigma2)):
            act[name] = perm_to_cycles(G, s.vertex_perm)
            if not G.is_simple():
                act[f"{name}_edges"] = {str(e): f for e, f in enumerate(s.edge_perm) if e != f}
        doc["action"] = act
    return doc
