"""Bipartite graph core: representation, connectivity, conflicts, twin classes.

Vertices live on two sides, A and B, and are addressed by ``VertexRef(side,
index)`` with 0-based indices.  Graphs are immutable after construction;
every operation here is a pure function.  All orderings are deterministic:
the global vertex order is A-side by index, then B-side by index.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple, Optional


class VertexRef(NamedTuple):
    side: str  # "A" or "B"
    index: int

    def token(self) -> str:
        """1-based text form used in files, e.g. ``a3`` or ``b1``."""
        return f"{self.side.lower()}{self.index + 1}"

    def flip(self) -> "VertexRef":
        return VertexRef("B" if self.side == "A" else "A", self.index)


class GraphError(ValueError):
    """Raised for malformed graph constructions."""


class BipartiteGraph:
    """Two-sided vertex set with cross-side adjacency.

    Adjacency is stored as per-vertex frozensets with a mirrored B-to-A view
    so that neighborhood hashing and biclique checks work from both sides.
    """

    __slots__ = ("a_count", "b_count", "adj_a", "adj_b", "_edge_count")

    def __init__(self, a_count: int, b_count: int,
                 adj_a: tuple, adj_b: tuple):
        self.a_count = a_count
        self.b_count = b_count
        self.adj_a = adj_a
        self.adj_b = adj_b
        self._edge_count = sum(len(s) for s in adj_a)

    # -- construction ------------------------------------------------------

    @staticmethod
    def build(a_count: int, b_count: int,
              edges: Iterable[tuple]) -> "BipartiteGraph":
        return build_graph(a_count, b_count, edges)

    # -- basic queries -----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def vertex_count(self) -> int:
        return self.a_count + self.b_count

    def vertices(self) -> list:
        """All vertices in global order (A side first)."""
        return ([VertexRef("A", i) for i in range(self.a_count)]
                + [VertexRef("B", j) for j in range(self.b_count)])

    def has_vertex(self, v: VertexRef) -> bool:
        n = self.a_count if v.side == "A" else self.b_count
        return v.side in ("A", "B") and 0 <= v.index < n

    def has_edge(self, a_index: int, b_index: int) -> bool:
        return b_index in self.adj_a[a_index]

    def neighbor_indices(self, v: VertexRef) -> frozenset:
        return self.adj_a[v.index] if v.side == "A" else self.adj_b[v.index]

    def neighbors(self, v: VertexRef) -> tuple:
        """Neighbors of v as VertexRefs, sorted by index."""
        other = "B" if v.side == "A" else "A"
        return tuple(VertexRef(other, i)
                     for i in sorted(self.neighbor_indices(v)))

    def degree(self, v: VertexRef) -> int:
        return len(self.neighbor_indices(v))

    def edges(self) -> list:
        """Sorted (a_index, b_index) pairs."""
        return [(i, j) for i in range(self.a_count)
                for j in sorted(self.adj_a[i])]

    def transpose(self) -> "BipartiteGraph":
        """Swap the two sides."""
        return BipartiteGraph(self.b_count, self.a_count, self.adj_b, self.adj_a)

    def adjacency(self) -> dict:
        """VertexRef -> set of VertexRef view (fresh mutable copy)."""
        adj = {}
        for i in range(self.a_count):
            adj[VertexRef("A", i)] = {VertexRef("B", j) for j in self.adj_a[i]}
        for j in range(self.b_count):
            adj[VertexRef("B", j)] = {VertexRef("A", i) for i in self.adj_b[j]}
        return adj

    def induced(self, keep: Iterable[VertexRef]):
        """Induced subgraph on `keep`.

        Returns (subgraph, vertex_map) where vertex_map maps each subgraph
        vertex to its originating VertexRef.  Kept vertices stay in index
        order within each side.
        """
        keep = set(keep)
        a_old = sorted(v.index for v in keep if v.side == "A")
        b_old = sorted(v.index for v in keep if v.side == "B")
        a_pos = {old: new for new, old in enumerate(a_old)}
        b_pos = {old: new for new, old in enumerate(b_old)}
        edges = [(a_pos[i], b_pos[j]) for (i, j) in self.edges()
                 if i in a_pos and j in b_pos]
        sub = build_graph(len(a_old), len(b_old), edges)
        vmap = {VertexRef("A", n): VertexRef("A", o) for o, n in a_pos.items()}
        vmap.update({VertexRef("B", n): VertexRef("B", o) for o, n in b_pos.items()})
        return sub, vmap

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, BipartiteGraph)
                and self.a_count == other.a_count
                and self.b_count == other.b_count
                and self.adj_a == other.adj_a)

    def __hash__(self):
        return hash((self.a_count, self.b_count, self.adj_a))

    def __repr__(self):
        return (f"BipartiteGraph(|A|={self.a_count}, |B|={self.b_count}, "
                f"m={self.edge_count})")


def build_graph(a_count: int, b_count: int,
                edges: Iterable[tuple]) -> BipartiteGraph:
    """Build a bipartite graph from (a_index, b_index) pairs.

    Duplicate edges collapse; out-of-range indices are rejected.
    """
    if a_count < 0 or b_count < 0:
        raise GraphError("side sizes must be non-negative")
    adj_a = [set() for _ in range(a_count)]
    adj_b = [set() for _ in range(b_count)]
    for e in edges:
        if len(e) != 2:
            raise GraphError(f"edge {e!r} is not a pair")
        i, j = e
        if not (0 <= i < a_count):
            raise GraphError(f"A-index {i} out of range [0, {a_count})")
        if not (0 <= j < b_count):
            raise GraphError(f"B-index {j} out of range [0, {b_count})")
        adj_a[i].add(j)
        adj_b[j].add(i)
    return BipartiteGraph(a_count, b_count,
                          tuple(frozenset(s) for s in adj_a),
                          tuple(frozenset(s) for s in adj_b))


# -- generic adjacency-dict helpers (shared with the edited-graph layer) ---

def components_of_adjacency(order: list, adj: dict) -> list:
    """Connected components of an adjacency dict, each sorted, listed by
    smallest contained vertex.  `order` fixes the vertex universe and order."""
    seen = set()
    comps = []
    for root in order:
        if root in seen:
            continue
        comp = [root]
        seen.add(root)
        queue = [root]
        while queue:
            u = queue.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def component_is_biclique(comp: list, adj: dict, side_of) -> bool:
    a_side = [v for v in comp if side_of(v) == "A"]
    b_side = [v for v in comp if side_of(v) == "B"]
    need = len(a_side) * len(b_side)
    have = sum(len(adj[v]) for v in a_side)
    return have == need


def is_biclique_union_adjacency(order: list, adj: dict, side_of) -> bool:
    return all(component_is_biclique(c, adj, side_of)
               for c in components_of_adjacency(order, adj))


def first_conflict_in_adjacency(order: list, adj: dict) -> Optional[tuple]:
    """Lexicographically smallest path (a, b, c, d) with dist(a, d) = 3.

    `order` must be sorted in the global vertex order; adjacency sets are
    iterated in sorted order for determinism.
    """
    pos = {v: k for k, v in enumerate(order)}
    for a in order:
        # BFS depth-2 reachability from a, to recognize distance-3 targets.
        dist = {a: 0}
        frontier = [a]
        for d in (1, 2):
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        for b in sorted(adj[a], key=pos.__getitem__):
            for c in sorted(adj[b], key=pos.__getitem__):
                if c == a or dist.get(c) != 2:
                    continue
                for d_ in sorted(adj[c], key=pos.__getitem__):
                    if d_ not in dist:
                        return (a, b, c, d_)
    return None


# -- public graph-level operations -----------------------------------------

def connected_components(g: BipartiteGraph) -> list:
    """Partition of the vertices into maximal connected sets."""
    return components_of_adjacency(g.vertices(), g.adjacency())


def distance(g: BipartiteGraph, u: VertexRef, v: VertexRef):
    """Edge count of a shortest u-v path; math.inf when disconnected."""
    for w in (u, v):
        if not g.has_vertex(w):
            raise GraphError(f"vertex {w} not in graph")
    if u == v:
        return 0
    adj = g.adjacency()
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for x in frontier:
            for w in adj[x]:
                if w not in dist:
                    dist[w] = dist[x] + 1
                    if w == v:
                        return dist[w]
                    nxt.append(w)
        frontier = nxt
    return math.inf


def find_conflict_geodesic(g: BipartiteGraph) -> Optional[tuple]:
    """First length-3 geodesic (a, b, c, d), or None if none exists."""
    return first_conflict_in_adjacency(g.vertices(), g.adjacency())


def is_biclique_union(g: BipartiteGraph) -> bool:
    """True iff every connected component is a complete bipartite graph.

    Isolated vertices count as degenerate bicliques.
    """
    for comp in connected_components(g):
        na = sum(1 for v in comp if v.side == "A")
        nb = len(comp) - na
        have = sum(g.degree(v) for v in comp if v.side == "A")
        if have != na * nb:
            return False
    return True


class TwinClassDecomposition(NamedTuple):
    classes: tuple          # tuple of tuples of VertexRef, each on one side
    class_of: dict          # VertexRef -> class id

    def classes_on(self, side: str) -> list:
        return [c for c in self.classes if c[0].side == side]


def twin_classes(g: BipartiteGraph) -> TwinClassDecomposition:
    """Partition vertices into maximal same-neighborhood classes.

    Classes are keyed by hashed neighborhoods per side; vertices with empty
    neighborhoods on the same side share one class.  Classes are ordered by
    their smallest member.
    """
    groups = {}
    for v in g.vertices():
        key = (v.side, g.neighbor_indices(v))
        groups.setdefault(key, []).append(v)
    classes = sorted((tuple(sorted(vs)) for vs in groups.values()),
                     key=lambda c: c[0])
    class_of = {}
    for cid, cls in enumerate(classes):
        for v in cls:
            class_of[v] = cid
    return TwinClassDecomposition(tuple(classes), class_of)


def all_conflict_geodesics(g: BipartiteGraph) -> list:
    """Every length-3 geodesic, one canonical tuple per path.

    Canonical direction starts at the smaller endpoint; the list is sorted
    by the sorted vertex set first, then by the path tuple, which is the
    enumeration order the greedy packing uses.
    """
    verts = g.vertices()
    adj = g.adjacency()
    # distance-2 sets per vertex to recognize dist-3 pairs quickly
    seen = set()
    out = []
    for a in verts:
        dist = {a: 0}
        frontier = [a]
        for d in (1, 2, 3):
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        for b in adj[a]:
            for c in adj[b]:
                if c == a or dist.get(c, 4) != 2:
                    continue
                for d_ in adj[c]:
                    if dist.get(d_, 4) != 3:
                        continue
                    path = (a, b, c, d_) if a < d_ else (d_, c, b, a)
                    if path not in seen:
                        seen.add(path)
                        out.append(path)
    out.sort(key=lambda p: (tuple(sorted(p)), p))
    return out


def geodesic_packing_bound(g: BipartiteGraph) -> int:
    """Greedy packing of conflict geodesics; a diagnostic lower bound.

    Packed geodesics pairwise share no edge and no inner vertex, and no two
    share the same endpoint pair.  Admissibility for exact-search pruning is
    not established; solvers only consult this behind an opt-in flag.
    """
    used_edges = set()
    used_inner = set()
    used_pairs = set()
    count = 0
    for (a, b, c, d) in all_conflict_geodesics(g):
        edges = {frozenset((a, b)), frozenset((b, c)), frozenset((c, d))}
        pair = frozenset((a, d))
        if edges & used_edges or b in used_inner or c in used_inner \
                or pair in used_pairs:
            continue
        used_edges |= edges
        used_inner.update((b, c))
        used_pairs.add(pair)
        count += 1
    return count
