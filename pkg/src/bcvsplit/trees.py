"""Polynomial exact solver for trees via a postorder interval DP.

Vertices get a deepest-branch-first postorder numbering 1..n, under which
every subtree is a contiguous interval [phi(v), v].  The table value
t[i, j] is the optimum for the subtree induced by numbers i..j (j an
ancestor of i); recurrences cut off the star hanging below the left
endpoint's grandparent.  Witnesses consist of edge deletions only.

Intervals whose left endpoint is a collapsed internal vertex (reachable
through the t[y+1, j] branch) can violate the star precondition the
recurrences rely on; such intervals are re-solved as fresh subtrees with
their own numbering.  Exhaustive comparison against the sequence-search
oracle on small trees gates this construction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .graphs import BipartiteGraph, GraphError, VertexRef, connected_components
from .editing import EdgeDelete, Mode, copy_of, validate_solution
from .solvers import SolveResult


@dataclass(frozen=True)
class TreeNumbering:
    numbers: dict      # VertexRef -> 1..n
    vertex_at: tuple   # number -> VertexRef (index 0 unused)
    parent_of: dict    # number -> number or None (root)
    phi: dict          # number -> smallest descendant number
    children: dict     # number -> tuple of child numbers, ascending


def _check_tree(g: BipartiteGraph) -> None:
    n = g.vertex_count
    if n == 0:
        raise GraphError("empty graph is not a tree")
    if g.edge_count != n - 1 or len(connected_components(g)) != 1:
        raise GraphError("input is not a tree")


def number_tree(g: BipartiteGraph, root: VertexRef) -> TreeNumbering:
    """Deepest-first postorder numbering rooted at `root`.

    Children are visited in order of decreasing subtree depth, ties by
    vertex order, so descendants of v occupy exactly [phi(v), v].
    """
    _check_tree(g)
    if not g.has_vertex(root):
        raise GraphError(f"root {root} not in graph")
    adj = g.adjacency()
    parent = {root: None}
    depth_order = []
    stack = [root]
    while stack:
        u = stack.pop()
        depth_order.append(u)
        for w in sorted(adj[u]):
            if w not in parent:
                parent[w] = u
                stack.append(w)
    subtree_depth = {v: 0 for v in parent}
    for u in reversed(depth_order):
        p = parent[u]
        if p is not None:
            subtree_depth[p] = max(subtree_depth[p], subtree_depth[u] + 1)
    kids = {v: [] for v in parent}
    for u in depth_order:
        p = parent[u]
        if p is not None:
            kids[p].append(u)
    for v in kids:
        kids[v].sort(key=lambda c: (-subtree_depth[c], c))

    numbers = {}
    counter = [0]
    stack = [(root, iter(kids[root]))]
    while stack:
        v, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            counter[0] += 1
            numbers[v] = counter[0]
            stack.pop()
        else:
            stack.append((nxt, iter(kids[nxt])))

    n = g.vertex_count
    vertex_at = [None] * (n + 1)
    for v, num in numbers.items():
        vertex_at[num] = v
    parent_of = {}
    children = {}
    phi = {}
    for num in range(1, n + 1):
        v = vertex_at[num]
        p = parent[v]
        parent_of[num] = numbers[p] if p is not None else None
        children[num] = tuple(sorted(numbers[c] for c in kids[v]))
        phi[num] = min((phi[c] for c in children[num]), default=num)
    return TreeNumbering(numbers, tuple(vertex_at), parent_of, phi, children)


class _TreeDP:
    def __init__(self, g: BipartiteGraph, vertices, root, shared_cache):
        self.g = g
        self.verts = sorted(vertices)
        self.cache = shared_cache
        sub = {v: None for v in self.verts}
        # adjacency restricted to the vertex set
        self.adj_full = {v: sorted(w for w in g.neighbors(v) if w in sub)
                         for v in self.verts}
        # a numbering needs a proper subtree; build over the induced tree
        self.numbering = self._number(root)
        num = self.numbering
        self.n = len(self.verts)
        self.nbrs = {i: tuple(sorted(num.numbers[w] for w in
                                     self.adj_full[num.vertex_at[i]]))
                     for i in range(1, self.n + 1)}
        self.memo = {}

    def _number(self, root):
        # like number_tree but over the an induced subtree
        adj = self.adj_full
        parent = {root: None}
        order = []
        stack = [root]
        while stack:
            u = stack.pop()
            order.append(u)
            for w in adj[u]:
                if w not in parent:
                    parent[w] = u
                    stack.append(w)
        depth = {v: 0 for v in parent}
        for u in reversed(order):
            p = parent[u]
            if p is not None:
                depth[p] = max(depth[p], depth[u] + 1)
        kids = {v: [] for v in parent}
        for u in order:
            p = parent[u]
            if p is not None:
                kids[p].append(u)
        for v in kids:
            kids[v].sort(key=lambda c: (-depth[c], c))
        numbers = {}
        counter = [0]
        stack = [(root, iter(kids[root]))]
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                counter[0] += 1
                numbers[v] = counter[0]
                stack.pop()
            else:
                stack.append((nxt, iter(kids[nxt])))
        n = len(self.verts)
        vertex_at = [None] * (n + 1)
        for v, numv in numbers.items():
            vertex_at[numv] = v
        parent_of = {}
        children = {}
        phi = {}
        for numv in range(1, n + 1):
            v = vertex_at[numv]
            p = parent[v]
            parent_of[numv] = numbers[p] if p is not None else None
            children[numv] = tuple(sorted(numbers[c] for c in kids[v]))
            phi[numv] = min((phi[c] for c in children[numv]), default=numv)
        return TreeNumbering(numbers, tuple(vertex_at), parent_of, phi,
                             children)

    def _int_neighbors(self, v, i, j):
        return [w for w in self.nbrs[v] if i <= w <= j]

    def _is_star(self, i, j):
        size = j - i + 1
        if size <= 2:
            return True
        return any(len(self._int_neighbors(v, i, j)) == size - 1
                   for v in range(i, j + 1))

    def solve(self):
        return self._t(1, self.n)

    def _edge(self, u, v):
        return (u, v) if u < v else (v, u)

    def _t(self, i, j):
        """Returns (value, ops) with ops as pairs of interval numbers."""
        if i == j:
            return 0, ()
        key = (i, j)
        if key in self.memo:
            return self.memo[key]
        if self._is_star(i, j):
            self.memo[key] = (0, ())
            return self.memo[key]
        num = self.numbering
        x = num.parent_of[i]
        bad = x is None or x > j or x == j
        if not bad:
            for c in num.children[x]:
                if i < c <= j and num.phi[c] != c:
                    bad = True
                    break
        if bad:
            res = self._fresh(i, j)
            self.memo[key] = res
            return res
        y = num.parent_of[x]
        int_nbrs_y = self._int_neighbors(y, i, j)
        d_y = len(int_nbrs_y)
        if d_y == 2:
            if y != j:
                val, ops = self._t(y + 1, j)
                res = (1 + val, ((y, num.parent_of[y]),) + ops)
            else:
                z = next(w for w in int_nbrs_y if w != x)
                val, ops = self._t(x + 1, z)
                res = (1 + val, ((y, z),) + ops)
        else:
            v1, o1 = self._t(x + 1, j)
            opt1 = (1 + v1, ((x, y),) + o1)
            cut_ops = tuple((y, u) for u in int_nbrs_y if u != x)
            v2 = d_y - 1
            o2 = []
            for kchild in num.children[y]:
                if kchild != x and i < kchild <= j:
                    vk, ok = self._t(num.phi[kchild], kchild)
                    v2 += vk
                    o2.extend(ok)
            if y != j:
                vr, orest = self._t(y + 1, j)
                v2 += vr
                o2.extend(orest)
            opt2 = (v2, cut_ops + tuple(o2))
            res = opt1 if opt1[0] <= v2 else opt2
        self.memo[key] = res
        return res

    def _fresh(self, i, j):
        """Re-solve the induced subtree with its own numbering."""
        num = self.numbering
        vset = frozenset(num.vertex_at[t] for t in range(i, j + 1))
        if vset in self.cache:
            val, ref_ops = self.cache[vset]
        else:
            root = num.vertex_at[j]
            dp = _TreeDP(self.g, vset, root, self.cache)
            val, numbered_ops = dp.solve()
            ref_ops = tuple(dp.ops_to_refs(numbered_ops))
            self.cache[vset] = (val, ref_ops)
        back = {}
        for t in range(i, j + 1):
            back[num.vertex_at[t]] = t
        return val, tuple((back[u], back[v]) for (u, v) in ref_ops)

    def ops_to_refs(self, ops):
        num = self.numbering
        return [(num.vertex_at[u], num.vertex_at[v]) for (u, v) in ops]


def solve_tree(g: BipartiteGraph) -> SolveResult:
    """Exact optimum on a tree with a deletion-only witness.

    The value is simultaneously the two-sided and the one-sided optimum
    (for either split side); the witness validates in every mode.
    """
    _check_tree(g)
    start = time.perf_counter()
    if g.vertex_count == 1:
        return SolveResult(0, [], Mode.bcevs(), None, {"nodes": 0,
                                                       "elapsed_s": 0.0})
    root = g.vertices()[0]
    cache = {}
    dp = _TreeDP(g, g.vertices(), root, cache)
    value, numbered_ops = dp.solve()
    ops = []
    for (u, v) in dp.ops_to_refs(numbered_ops):
        a_end, b_end = (u, v) if u.side == "A" else (v, u)
        ops.append(EdgeDelete(copy_of(a_end), copy_of(b_end)))
    assert len(ops) == value
    assert validate_solution(g, ops, Mode.bcevs())
    stats = {"nodes": len(dp.memo), "elapsed_s": time.perf_counter() - start}
    return SolveResult(value, ops, Mode.bcevs(), None, stats)
