"""File formats: bcg graph text, solution JSON, cover JSON.

bcg format: header line ``p bcg <nA> <nB> <m>``, then m lines
``e <a> <b>`` with 1-based indices; lines starting with ``c`` are
comments.  Vertex tokens in JSON are 1-based: ``a3``, ``b1``; split
copies append ``#<counter>`` (``b1#2``).
"""

from __future__ import annotations

import json
import re

from .graphs import BipartiteGraph, VertexRef, build_graph
from .editing import CopyId, EdgeAdd, EdgeDelete, Mode, Split
from .covers import APartitioningCover, BiclusterCover


class FileFormatError(ValueError):
    pass


def write_bcg(g: BipartiteGraph, comment: str = "") -> str:
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"c {part}")
    lines.append(f"p bcg {g.a_count} {g.b_count} {g.edge_count}")
    for (i, j) in g.edges():
        lines.append(f"e {i + 1} {j + 1}")
    return "\n".join(lines) + "\n"


def parse_bcg(text: str) -> BipartiteGraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise FileFormatError(f"line {lineno}: duplicate header")
            if len(parts) != 5 or parts[1] != "bcg":
                raise FileFormatError(f"line {lineno}: bad header {line!r}")
            try:
                header = tuple(int(x) for x in parts[2:])
            except ValueError:
                raise FileFormatError(f"line {lineno}: bad header {line!r}")
        elif parts[0] == "e":
            if header is None:
                raise FileFormatError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise FileFormatError(f"line {lineno}: bad edge {line!r}")
            try:
                a, b = int(parts[1]), int(parts[2])
            except ValueError:
                raise FileFormatError(f"line {lineno}: bad edge {line!r}")
            if not (1 <= a <= header[0] and 1 <= b <= header[1]):
                raise FileFormatError(f"line {lineno}: edge out of range")
            edges.append((a - 1, b - 1))
        else:
            raise FileFormatError(f"line {lineno}: unknown line {line!r}")
    if header is None:
        raise FileFormatError("missing header line")
    if len(edges) != header[2]:
        raise FileFormatError(
            f"header announced {header[2]} edges, found {len(edges)}")
    return build_graph(header[0], header[1], edges)


_TOKEN = re.compile(r"^([ab])(\d+)(?:#(\d+))?$")


def copy_token(c: CopyId) -> str:
    return c.token()


def parse_copy_token(token: str) -> CopyId:
    m = _TOKEN.match(token)
    if not m:
        raise FileFormatError(f"bad vertex token {token!r}")
    side = "A" if m.group(1) == "a" else "B"
    index = int(m.group(2)) - 1
    if index < 0:
        raise FileFormatError(f"bad vertex token {token!r}")
    return CopyId(side, index, int(m.group(3)) if m.group(3) else 0)


def op_to_json(op) -> dict:
    if isinstance(op, EdgeAdd):
        return {"op": "add", "u": op.u.token(), "v": op.v.token()}
    if isinstance(op, EdgeDelete):
        return {"op": "delete", "u": op.u.token(), "v": op.v.token()}
    if isinstance(op, Split):
        return {"op": "split", "v": op.v.token(),
                "n1": sorted(c.token() for c in op.n1),
                "n2": sorted(c.token() for c in op.n2)}
    raise FileFormatError(f"unknown operation {op!r}")


def op_from_json(obj: dict):
    try:
        kind = obj["op"]
        if kind == "add":
            return EdgeAdd(parse_copy_token(obj["u"]),
                           parse_copy_token(obj["v"]))
        if kind == "delete":
            return EdgeDelete(parse_copy_token(obj["u"]),
                              parse_copy_token(obj["v"]))
        if kind == "split":
            return Split(parse_copy_token(obj["v"]),
                         frozenset(parse_copy_token(t) for t in obj["n1"]),
                         frozenset(parse_copy_token(t) for t in obj["n2"]))
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"bad operation object {obj!r}: {exc}")
    raise FileFormatError(f"unknown operation kind {obj.get('op')!r}")


def mode_to_json(mode: Mode) -> dict:
    out = {"mode": mode.kind}
    if mode.split_side is not None:
        out["split_side"] = mode.split_side
    return out


def mode_from_json(obj: dict) -> Mode:
    kind = obj.get("mode")
    if kind == "bcevs":
        return Mode.bcevs()
    if kind == "bceovs":
        return Mode.bceovs(obj.get("split_side", "B"))
    raise FileFormatError(f"unknown mode {kind!r}")


def solution_to_json(mode: Mode, ops) -> str:
    out = mode_to_json(mode)
    out["operations"] = [op_to_json(op) for op in ops]
    return json.dumps(out, indent=2) + "\n"


def solution_from_json(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"bad JSON: {exc}")
    if not isinstance(obj, dict) or "operations" not in obj:
        raise FileFormatError("solution file needs an 'operations' array")
    mode = mode_from_json(obj) if "mode" in obj else None
    ops = [op_from_json(o) for o in obj["operations"]]
    return mode, ops


def cover_sets_to_json(sets) -> list:
    return [[{"side": v.side, "index": v.index + 1} for v in sorted(s)]
            for s in sets]


def cover_to_json(cover) -> str:
    kind = ("a-partitioning" if isinstance(cover, APartitioningCover)
            else "bicluster")
    return json.dumps({"kind": kind,
                       "sets": cover_sets_to_json(cover.sets)},
                      indent=2) + "\n"


def cover_from_json(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"bad JSON: {exc}")
    try:
        sets = [frozenset(VertexRef(m["side"], m["index"] - 1) for m in s)
                for s in obj["sets"]]
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"bad cover object: {exc}")
    if obj.get("kind") == "bicluster":
        return BiclusterCover.of(sets)
    return APartitioningCover.of(sets)
