"""Versioned JSON graph files and DOT export."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .gkm import GKMEdge, GKMGraph, format_weight, normalize_weight
from .sparsity import LieType, SparsityGraph, Spectrum, validate_spectrum

GRAPH_SCHEMA = "isogkm-graph/1"
REPORT_SCHEMA = "isogkm-report/1"


class GraphFileError(ValueError):
    pass


class UnknownFormat(ValueError):
    pass


def _number(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else str(float(x))


def graph_to_dict(gr: GKMGraph) -> dict[str, Any]:
    if gr.mode is LieType.A:
        verts = [{"sigma": list(v)} for v in gr.vertices]
    else:
        verts = [{"sigma": list(sig), "s": list(s)} for sig, s in gr.vertices]
    return {
        "schema": GRAPH_SCHEMA,
        "mode": gr.mode.value,
        "n": gr.n,
        "gamma": [list(e) for e in gr.gamma],
        "component": gr.component,
        "lambda": None if gr.lam is None else [_number(v) for v in gr.lam.exact],
        "vertices": verts,
        "edges": [
            {"u": e.u, "v": e.v, "blockPair": list(e.pair), "weight": list(e.weight)} for e in gr.edges
        ],
    }


def dumps(doc: dict, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def graph_from_dict(doc: dict) -> GKMGraph:
    try:
        if doc.get("schema") != GRAPH_SCHEMA:
            raise GraphFileError(f"expected schema {GRAPH_SCHEMA!r}, got {doc.get('schema')!r}")
        mode = LieType(doc["mode"])
        n = int(doc["n"])
        gamma = SparsityGraph(n, tuple(tuple(p) for p in doc["gamma"])).edges
        lam = None if doc.get("lambda") is None else validate_spectrum(doc["lambda"], mode)
        if mode is LieType.A:
            verts = tuple(tuple(v["sigma"]) for v in doc["vertices"])
        else:
            verts = tuple((tuple(v["sigma"]), tuple(v["s"])) for v in doc["vertices"])
        edges = []
        for e in doc["edges"]:
            u, v = int(e["u"]), int(e["v"])
            if not (0 <= u < len(verts) and 0 <= v < len(verts)) or u == v:
                raise GraphFileError(f"bad edge endpoints {u}, {v}")
            w = tuple(int(c) for c in e["weight"])
            if len(w) != n or not any(w):
                raise GraphFileError(f"bad weight {w}")
            edges.append(GKMEdge(min(u, v), max(u, v), tuple(e["blockPair"]), normalize_weight(w)))
        return GKMGraph(mode, n, gamma, verts, tuple(sorted(edges)), lam, doc.get("component"))
    except (KeyError, TypeError) as exc:
        raise GraphFileError(f"malformed graph file: {exc!r}") from None


def loads_graph(text: str) -> GKMGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"not JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphFileError("graph file must hold a JSON object")
    return graph_from_dict(doc)


def to_dot(gr: GKMGraph) -> str:
    name = {None: "gkm"}.get(gr.component, f"gkm_{gr.component}")
    lines = [f"graph {name} {{"]
    for k in range(len(gr.vertices)):
        lines.append(f'  v{k} [label="{gr.label_text(k)}"];')
    for e in gr.edges:
        lines.append(f'  v{e.u} -- v{e.v} [label="{format_weight(e.weight)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(gr: GKMGraph, fmt: str) -> str:
    if fmt == "dot":
        return to_dot(gr)
    if fmt == "json":
        return dumps(graph_to_dict(gr))
    raise UnknownFormat(f"unknown export format {fmt!r}")


def spectrum_to_list(lam: Spectrum) -> list[str]:
    return [_number(v) for v in lam.exact]
