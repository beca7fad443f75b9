"""Operation semantics: edge edits, vertex splits, verification.

A split replaces a live copy `v` by two fresh copies whose neighborhoods
union to the neighborhood of `v` at application time (overlap permitted;
an exclusivity switch exists for experiments).  Copies are addressed by
``CopyId(side, index, copy)`` where copy 0 is the original vertex and
fresh copies draw increasing counters per original, never reusing ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .graphs import (
    BipartiteGraph,
    VertexRef,
    components_of_adjacency,
    first_conflict_in_adjacency,
    is_biclique_union_adjacency,
)


class CopyId(NamedTuple):
    side: str
    index: int
    copy: int = 0

    @property
    def origin(self) -> VertexRef:
        return VertexRef(self.side, self.index)

    def token(self) -> str:
        base = f"{self.side.lower()}{self.index + 1}"
        return base if self.copy == 0 else f"{base}#{self.copy}"


def copy_of(v, copy: int = 0) -> CopyId:
    """CopyId from a VertexRef or (side, index) pair."""
    return CopyId(v[0], v[1], copy)


@dataclass(frozen=True)
class EdgeAdd:
    u: CopyId
    v: CopyId

    def kind(self) -> str:
        return "add"


@dataclass(frozen=True)
class EdgeDelete:
    u: CopyId
    v: CopyId

    def kind(self) -> str:
        return "delete"


@dataclass(frozen=True)
class Split:
    v: CopyId
    n1: frozenset
    n2: frozenset

    def kind(self) -> str:
        return "split"


Operation = object  # EdgeAdd | EdgeDelete | Split


def add(u, v) -> EdgeAdd:
    return EdgeAdd(copy_of(u) if not isinstance(u, CopyId) else u,
                   copy_of(v) if not isinstance(v, CopyId) else v)


def delete(u, v) -> EdgeDelete:
    return EdgeDelete(copy_of(u) if not isinstance(u, CopyId) else u,
                      copy_of(v) if not isinstance(v, CopyId) else v)


def split(v, n1, n2) -> Split:
    as_copy = lambda x: x if isinstance(x, CopyId) else copy_of(x)
    return Split(as_copy(v), frozenset(as_copy(x) for x in n1),
                 frozenset(as_copy(x) for x in n2))


@dataclass(frozen=True)
class Mode:
    kind: str                       # "bcevs" or "bceovs"
    split_side: Optional[str] = None  # side allowed to split, bceovs only

    def __post_init__(self):
        if self.kind not in ("bcevs", "bceovs"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.kind == "bceovs" and self.split_side not in ("A", "B"):
            raise ValueError("one-sided mode needs split_side 'A' or 'B'")
        if self.kind == "bcevs" and self.split_side is not None:
            raise ValueError("two-sided mode takes no split_side")

    @staticmethod
    def bcevs() -> "Mode":
        return Mode("bcevs")

    @staticmethod
    def bceovs(split_side: str = "B") -> "Mode":
        return Mode("bceovs", split_side)

    def allows_split(self, side: str) -> bool:
        return self.kind == "bcevs" or self.split_side == side

    def describe(self) -> str:
        if self.kind == "bcevs":
            return "bcevs"
        return f"bceovs(split={self.split_side})"


@dataclass(frozen=True)
class Instance:
    graph: BipartiteGraph
    k: int
    mode: Mode

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("budget k must be non-negative")


class OperationError(ValueError):
    """An operation was invalid at its application point."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"operation {index}: {reason}")
        self.index = index
        self.reason = reason


class EditedGraph:
    """Working graph over copy ids with provenance back to the original."""

    def __init__(self, g: BipartiteGraph):
        self.adj = {}
        for v in g.vertices():
            self.adj[copy_of(v)] = {copy_of(w) for w in g.neighbors(v)}
        self.copy_count = {v: 1 for v in g.vertices()}
        self.next_copy = {v: 1 for v in g.vertices()}
        self.split_count = 0

    # provenance is carried inside each CopyId
    def provenance(self, cid: CopyId) -> VertexRef:
        return cid.origin

    def clone(self) -> "EditedGraph":
        new = object.__new__(EditedGraph)
        new.adj = {k: set(v) for k, v in self.adj.items()}
        new.copy_count = dict(self.copy_count)
        new.next_copy = dict(self.next_copy)
        new.split_count = self.split_count
        return new

    def vertices(self) -> list:
        return sorted(self.adj)

    def has(self, cid: CopyId) -> bool:
        return cid in self.adj

    def apply(self, op, index: int = 0, exclusive: bool = False) -> None:
        if isinstance(op, (EdgeAdd, EdgeDelete)):
            u, v = op.u, op.v
            if u.side == v.side:
                raise OperationError(index, f"same-side pair {u.token()},{v.token()}")
            if u.side == "B":
                u, v = v, u
            for c in (u, v):
                if c not in self.adj:
                    raise OperationError(index, f"dead or unknown copy {c.token()}")
            if isinstance(op, EdgeAdd):
                if v in self.adj[u]:
                    raise OperationError(index, f"edge {u.token()}-{v.token()} already present")
                self.adj[u].add(v)
                self.adj[v].add(u)
            else:
                if v not in self.adj[u]:
                    raise OperationError(index, f"edge {u.token()}-{v.token()} not present")
                self.adj[u].remove(v)
                self.adj[v].remove(u)
        elif isinstance(op, Split):
            v = op.v
            if v not in self.adj:
                raise OperationError(index, f"dead or unknown copy {v.token()}")
            hood = self.adj[v]
            if op.n1 | op.n2 != hood:
                raise OperationError(
                    index, f"split of {v.token()}: n1 ∪ n2 differs from its neighborhood")
            if exclusive and op.n1 & op.n2:
                raise OperationError(
                    index, f"split of {v.token()}: copies overlap under exclusive splitting")
            origin = v.origin
            c1 = CopyId(v.side, v.index, self.next_copy[origin])
            c2 = CopyId(v.side, v.index, self.next_copy[origin] + 1)
            self.next_copy[origin] += 2
            # detach v, attach the two fresh copies
            for w in hood:
                self.adj[w].discard(v)
            del self.adj[v]
            self.adj[c1] = set(op.n1)
            self.adj[c2] = set(op.n2)
            for w in op.n1:
                self.adj[w].add(c1)
            for w in op.n2:
                self.adj[w].add(c2)
            self.copy_count[origin] += 1
            self.split_count += 1
        else:
            raise OperationError(index, f"unknown operation {op!r}")

    # -- structure checks over copies --------------------------------------

    def is_biclique_union(self) -> bool:
        return is_biclique_union_adjacency(self.vertices(), self.adj,
                                           lambda c: c.side)

    def first_conflict(self):
        return first_conflict_in_adjacency(self.vertices(), self.adj)

    def components(self) -> list:
        return components_of_adjacency(self.vertices(), self.adj)

    def to_bipartite(self):
        """Flatten copies into a plain BipartiteGraph.

        Returns (graph, a_map, b_map) where the maps list the CopyId behind
        each new index.
        """
        a_ids = sorted(c for c in self.adj if c.side == "A")
        b_ids = sorted(c for c in self.adj if c.side == "B")
        a_pos = {c: i for i, c in enumerate(a_ids)}
        b_pos = {c: i for i, c in enumerate(b_ids)}
        edges = [(a_pos[u], b_pos[w]) for u in a_ids for w in self.adj[u]]
        from .graphs import build_graph
        return build_graph(len(a_ids), len(b_ids), edges), a_ids, b_ids


def apply_sequence(g: BipartiteGraph, seq, exclusive: bool = False) -> EditedGraph:
    """Apply operations in order; raises OperationError with the failing index."""
    eg = EditedGraph(g)
    for i, op in enumerate(seq):
        eg.apply(op, i, exclusive=exclusive)
    return eg


def sequence_cost(seq) -> int:
    """Every operation costs one."""
    return len(seq)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    reason: Optional[str] = None
    failing_index: Optional[int] = None

    def __bool__(self):
        return self.ok


def validate_solution(g: BipartiteGraph, seq, mode: Mode,
                      exclusive: bool = False) -> ValidationResult:
    """Check that seq applies cleanly, respects the mode's split side, and
    leaves a disjoint union of bicliques."""
    eg = EditedGraph(g)
    for i, op in enumerate(seq):
        if isinstance(op, Split) and not mode.allows_split(op.v.side):
            return ValidationResult(False, "split-side", i)
        try:
            eg.apply(op, i, exclusive=exclusive)
        except OperationError as exc:
            return ValidationResult(False, exc.reason, i)
    if not eg.is_biclique_union():
        return ValidationResult(False, "not-biclique-union", None)
    return ValidationResult(True)
