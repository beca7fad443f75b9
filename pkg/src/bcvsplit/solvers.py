"""Exact solvers with independent cross-checking engines.

Three genuinely different engines compute optima at desk scale:

* ``solve_bceovs`` searches twin-adapted A-partitioning covers: it
  enumerates partitions of the partition-side twin classes and picks each
  split-side twin class's cheapest part pattern independently.
* ``solve_bcevs`` enumerates edit sets in increasing size with a
  split-cover feasibility check per edited graph; above a small flip
  universe it switches to an equivalent branch-and-bound over two-sided
  covers (``minimum_bicover``).
* ``oracle_search`` is an iterative-deepening search over raw operation
  sequences, branching on a conflict geodesic's resolving operations.  It
  knows nothing about covers and exists to validate the other two.

Size guards refuse oversized instances instead of running unbounded.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional

from .graphs import (
    BipartiteGraph,
    VertexRef,
    build_graph,
    connected_components,
    geodesic_packing_bound,
    is_biclique_union,
    twin_classes,
)
from .editing import (
    CopyId,
    EdgeAdd,
    EdgeDelete,
    EditedGraph,
    Mode,
    Split,
    copy_of,
    sequence_cost,
    validate_solution,
)
from .covers import (
    APartitioningCover,
    BiclusterCover,
    bicover_cost,
    bicover_to_sequence,
    cover_cost,
    cover_to_sequence,
)


class SolverRefused(RuntimeError):
    """Instance exceeds the configured size guard."""


class BudgetExceeded(RuntimeError):
    def __init__(self, lower_bound: int):
        super().__init__(f"no solution within budget (optimum >= {lower_bound})")
        self.lower_bound = lower_bound


@dataclass
class SolveResult:
    value: int
    witness: list
    mode: Mode
    witness_cover: object = None
    stats: dict = field(default_factory=dict)


def _flip_copy(c: CopyId) -> CopyId:
    return CopyId("B" if c.side == "A" else "A", c.index, c.copy)


def _flip_ops(ops) -> list:
    out = []
    for op in ops:
        if isinstance(op, EdgeAdd):
            out.append(EdgeAdd(_flip_copy(op.u), _flip_copy(op.v)))
        elif isinstance(op, EdgeDelete):
            out.append(EdgeDelete(_flip_copy(op.u), _flip_copy(op.v)))
        else:
            out.append(Split(_flip_copy(op.v),
                             frozenset(_flip_copy(x) for x in op.n1),
                             frozenset(_flip_copy(x) for x in op.n2)))
    return out


def _flip_cover_sets(sets):
    return [frozenset(VertexRef(*vr).flip() for vr in s) for s in sets]


def set_partitions(n: int):
    """All set partitions of range(n) in restricted-growth order."""
    blocks = []

    def rec(i):
        if i == n:
            yield [tuple(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1)
        blocks.pop()

    yield from rec(0)


# ---------------------------------------------------------------------------
# One-sided solver: twin-adapted A-partitioning cover search
# ---------------------------------------------------------------------------

def solve_bceovs(g: BipartiteGraph, budget: Optional[int] = None,
                 split_side: str = "B",
                 max_a_classes: int = 12) -> SolveResult:
    """Minimum one-sided solution via cover search.

    Enumerates partitions of the partition-side twin classes; given a
    partition, each split-side twin class independently picks the part
    sub-collection minimizing multiplicity plus edge edits, which is exact
    because twin-adapted covers achieve the optimum.
    """
    mode = Mode.bceovs(split_side)
    work = g if split_side == "B" else g.transpose()
    start = time.perf_counter()

    tc = twin_classes(work)
    a_classes = [cls for cls in tc.classes if cls[0].side == "A"]
    b_classes = [cls for cls in tc.classes if cls[0].side == "B"]
    if len(a_classes) > max_a_classes:
        raise SolverRefused(
            f"refused: instance too large ({len(a_classes)} partition-side "
            f"twin classes > {max_a_classes})")

    a_sets = [frozenset(v.index for v in cls) for cls in a_classes]
    a_sizes = [len(s) for s in a_sets]
    b_hoods = [frozenset(work.adj_b[cls[0].index]) for cls in b_classes]
    b_sizes = [len(cls) for cls in b_classes]
    # overlap[bc][ac] = |neighborhood of the b-class ∩ a-class|
    overlap = [[len(h & s) for s in a_sets] for h in b_hoods]

    best_cost = None
    best_partition = None
    best_patterns = None
    explored = 0

    for partition in set_partitions(len(a_classes)):
        explored += 1
        part_sizes = [sum(a_sizes[ci] for ci in blk) for blk in partition]
        cost = 0
        patterns = []
        for bc in range(len(b_classes)):
            hood_size = len(b_hoods[bc])
            gains = []
            for pi, blk in enumerate(partition):
                inter = sum(overlap[bc][ci] for ci in blk)
                gains.append(inter - (part_sizes[pi] - inter))
            chosen = tuple(pi for pi, gain in enumerate(gains) if gain >= 2)
            if chosen:
                per = hood_size - 1 + sum(1 - gains[pi] for pi in chosen)
            elif gains and max(gains) == 1:
                chosen = (gains.index(1),)
                per = hood_size - 1
            else:
                chosen = ()
                per = hood_size
            patterns.append(chosen)
            cost += per * b_sizes[bc]
            if best_cost is not None and cost >= best_cost:
                break
        else:
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_partition = [list(blk) for blk in partition]
                best_patterns = list(patterns)
            continue
        # inner break: partition already worse

    elapsed = time.perf_counter() - start
    if budget is not None and best_cost > budget:
        raise BudgetExceeded(best_cost)
    sets = []
    for pi, blk in enumerate(best_partition):
        members = set()
        for ci in blk:
            members.update(a_classes[ci])
        for bc, pattern in enumerate(best_patterns):
            if pi in pattern:
                members.update(b_classes[bc])
        sets.append(frozenset(members))
    for bc, pattern in enumerate(best_patterns):
        if not pattern:
            for b in b_classes[bc]:
                sets.append(frozenset([b]))
    cover = APartitioningCover.of(sets)
    breakdown = cover_cost(work, cover)
    assert breakdown.total == best_cost, "cover cost drifted from search cost"
    ops = cover_to_sequence(work, cover)
    if split_side == "A":
        ops = _flip_ops(ops)
        cover = APartitioningCover.of(_flip_cover_sets(cover.sets))
    assert validate_solution(g, ops, mode)
    stats = {"nodes": explored, "elapsed_s": elapsed}
    return SolveResult(best_cost, ops, mode, cover, stats)


# ---------------------------------------------------------------------------
# Split-only completion: minimum-multiplicity biclique cover
# ---------------------------------------------------------------------------

def _min_split_masks(a_n, b_n, adj_a_masks, adj_b_masks, budget,
                     restrict_side=None):
    """Minimum total split count over biclique systems covering all
    vertices and edges; None if above budget.

    Cost is the sum over vertices of (occurrences - 1); `restrict_side`
    confines multiplicity > 1 to one side.  Returns (cost, sets) with sets
    as (a_mask, b_mask) pairs, singleton sets for untouched vertices
    included.
    """
    edges = [(i, j) for i in range(a_n) for j in range(b_n)
             if adj_a_masks[i] >> j & 1]
    m = len(edges)
    pair_bit = {e: t for t, e in enumerate(edges)}
    full = (1 << m) - 1
    best = [budget + 1, None]
    mult_a = [0] * a_n
    mult_b = [0] * b_n
    chosen = []

    def cover_bits(am, bm):
        bits = 0
        i = 0
        rem = am
        while rem:
            if rem & 1:
                row = adj_a_masks[i] & bm
                j = 0
                r2 = row
                while r2:
                    if r2 & 1:
                        bits |= 1 << pair_bit[(i, j)]
                    r2 >>= 1
                    j += 1
            rem >>= 1
            i += 1
        return bits

    def rec(covered, cost):
        if cost >= best[0]:
            return
        if covered == full:
            best[0] = cost
            best[1] = list(chosen)
            return
        t = ((~covered) & full).bit_length() - 1
        # pick the highest-index uncovered edge (deterministic, cheap)
        i, j = edges[t]
        pool_a = adj_b_masks[j] & ~(1 << i)
        sub_a = pool_a
        while True:
            a_mask = sub_a | (1 << i)
            common = full_b_mask
            rem = a_mask
            ii = 0
            ok = True
            while rem:
                if rem & 1:
                    common &= adj_a_masks[ii]
                rem >>= 1
                ii += 1
            if common >> j & 1:
                extra_a = 0
                bad = False
                rem, ii = a_mask, 0
                while rem:
                    if rem & 1 and mult_a[ii]:
                        if restrict_side == "B":
                            bad = True
                            break
                        extra_a += 1
                    rem >>= 1
                    ii += 1
                if not bad:
                    pool_b = common & ~(1 << j)
                    sub_b = pool_b
                    while True:
                        b_mask = sub_b | (1 << j)
                        extra = extra_a
                        rem, jj = b_mask, 0
                        okb = True
                        while rem:
                            if rem & 1 and mult_b[jj]:
                                if restrict_side == "A":
                                    okb = False
                                    break
                                extra += 1
                            rem >>= 1
                            jj += 1
                        if okb and cost + extra < best[0]:
                            rem, ii = a_mask, 0
                            while rem:
                                if rem & 1:
                                    mult_a[ii] += 1
                                rem >>= 1
                                ii += 1
                            rem, jj = b_mask, 0
                            while rem:
                                if rem & 1:
                                    mult_b[jj] += 1
                                rem >>= 1
                                jj += 1
                            chosen.append((a_mask, b_mask))
                            rec(covered | cover_bits(a_mask, b_mask),
                                cost + extra)
                            chosen.pop()
                            rem, ii = a_mask, 0
                            while rem:
                                if rem & 1:
                                    mult_a[ii] -= 1
                                rem >>= 1
                                ii += 1
                            rem, jj = b_mask, 0
                            while rem:
                                if rem & 1:
                                    mult_b[jj] -= 1
                                rem >>= 1
                                jj += 1
                        if sub_b == 0:
                            break
                        sub_b = (sub_b - 1) & pool_b
            if sub_a == 0:
                break
            sub_a = (sub_a - 1) & pool_a

    full_b_mask = (1 << b_n) - 1
    rec(0, 0)
    if best[1] is None:
        return None
    sets = list(best[1])
    seen_a = 0
    seen_b = 0
    for am, bm in sets:
        seen_a |= am
        seen_b |= bm
    for i in range(a_n):
        if not (seen_a >> i & 1):
            sets.append((1 << i, 0))
    for j in range(b_n):
        if not (seen_b >> j & 1):
            sets.append((0, 1 << j))
    return best[0], sets


def _masks_of(g: BipartiteGraph):
    adj_a = [0] * g.a_count
    adj_b = [0] * g.b_count
    for (i, j) in g.edges():
        adj_a[i] |= 1 << j
        adj_b[j] |= 1 << i
    return adj_a, adj_b


def _mask_sets_to_refs(sets):
    out = []
    for am, bm in sets:
        members = set()
        i = 0
        while am:
            if am & 1:
                members.add(VertexRef("A", i))
            am >>= 1
            i += 1
        j = 0
        while bm:
            if bm & 1:
                members.add(VertexRef("B", j))
            bm >>= 1
            j += 1
        out.append(frozenset(members))
    return out


def min_split_biclique_cover(g: BipartiteGraph, split_budget: int,
                             side: Optional[str] = None):
    """Can splits alone finish the job within `split_budget`?

    Returns (cost, sets) with the witness biclique system, or None when
    infeasible.  `side` restricts multiplicity > 1 to that side.
    """
    adj_a, adj_b = _masks_of(g)
    res = _min_split_masks(g.a_count, g.b_count, adj_a, adj_b, split_budget,
                           restrict_side=side)
    if res is None:
        return None
    cost, sets = res
    return cost, tuple(_mask_sets_to_refs(sets))


# ---------------------------------------------------------------------------
# Two-sided solver
# ---------------------------------------------------------------------------

def _greedy_edit_solution(g: BipartiteGraph) -> list:
    """Deletion-only upper bound: repeatedly cut a conflict's third edge."""
    from .graphs import first_conflict_in_adjacency
    adj = g.adjacency()
    order = g.vertices()
    ops = []
    while True:
        conflict = first_conflict_in_adjacency(order, adj)
        if conflict is None:
            break
        _, _, c, d = conflict
        adj[c].discard(d)
        adj[d].discard(c)
        a_end, b_end = (c, d) if c.side == "A" else (d, c)
        ops.append(EdgeDelete(copy_of(a_end), copy_of(b_end)))
    return ops


def _cover_from_edits(g: BipartiteGraph, deletions) -> BiclusterCover:
    adj = g.adjacency()
    for op in deletions:
        u = VertexRef(op.u.side, op.u.index)
        v = VertexRef(op.v.side, op.v.index)
        adj[u].discard(v)
        adj[v].discard(u)
    from .graphs import components_of_adjacency
    comps = components_of_adjacency(g.vertices(), adj)
    return BiclusterCover.of(frozenset(c) for c in comps)


def _enum_edit_search(g: BipartiteGraph, cap: int):
    """Minimum |edit set| + split completion, strictly below `cap`.

    Enumerates edit sets in increasing size with canonical pair order;
    each edited graph is finished by the split-cover optimizer.
    """
    adj_a, adj_b = _masks_of(g)
    a_n, b_n = g.a_count, g.b_count
    pairs = [(i, j) for i in range(a_n) for j in range(b_n)]
    best = cap
    best_witness = None
    nodes = 0
    for e in range(0, cap):
        if e >= best:
            break
        for combo in itertools.combinations(pairs, e):
            s_budget = best - 1 - e
            if s_budget < 0:
                break
            wa = list(adj_a)
            wb = list(adj_b)
            for (i, j) in combo:
                wa[i] ^= 1 << j
                wb[j] ^= 1 << i
            nodes += 1
            res = _min_split_masks(a_n, b_n, wa, wb, s_budget)
            if res is not None:
                s, sets = res
                best = e + s
                best_witness = (combo, sets)
    if best_witness is None:
        return None, nodes
    combo, sets = best_witness
    edge_set = set(g.edges())
    ops = []
    for (i, j) in combo:
        u, v = CopyId("A", i), CopyId("B", j)
        ops.append(EdgeDelete(u, v) if (i, j) in edge_set else EdgeAdd(u, v))
    cover = BiclusterCover.of(_mask_sets_to_refs(sets))
    return (best, ops, cover), nodes


def minimum_bicover(g: BipartiteGraph, budget: Optional[int] = None):
    """Minimum-cost two-sided cover by branch and bound over cluster
    memberships, assigned vertex by vertex in component BFS order.

    Returns (cost, BiclusterCover).  Raises BudgetExceeded when a budget is
    given and the optimum lies above it.
    """
    adj = g.adjacency()
    order = []
    for comp in connected_components(g):
        seen = {comp[0]}
        queue = [comp[0]]
        local = []
        while queue:
            u = queue.pop(0)
            local.append(u)
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        order.extend(local)

    greedy = _greedy_edit_solution(g)
    greedy_cover = _cover_from_edits(g, greedy)
    ub = len(greedy)
    cap = ub if budget is None else min(ub, budget + 1)

    best = [cap, None]  # strictly-better search below the cap
    clusters = []          # list of sets of vertices
    nodes = [0]

    def rec(pos, cost):
        if cost >= best[0]:
            return
        if pos == len(order):
            best[0] = cost
            best[1] = [frozenset(c) for c in clusters]
            return
        nodes[0] += 1
        v = order[pos]
        earlier = [u for u in order[:pos] if u.side != v.side]
        hood = adj[v]
        left = best[0] - 1 - cost
        k = len(clusters)
        # identical clusters are interchangeable: later vertices must join
        # the lowest-id representative first
        blocked = set()
        for c2 in range(k):
            for c1 in range(c2):
                if clusters[c1] == clusters[c2]:
                    blocked.add((c1, c2))

        def mismatch(sel):
            inc = 0
            for u in earlier:
                shares = any(u in clusters[c] for c in sel)
                if shares != (u in hood):
                    inc += 1
            return inc

        max_size = left + 1
        for size in range(1, max_size + 1):
            for n_old in range(min(size, k), -1, -1):
                n_new = size - n_old
                for sel in itertools.combinations(range(k), n_old):
                    if any((c1, c2) in blocked and c1 not in sel
                           for c2 in sel for c1 in range(c2)):
                        continue
                    inc = (size - 1) + mismatch(sel)
                    if cost + inc >= best[0]:
                        continue
                    for c in sel:
                        clusters[c].add(v)
                    fresh = []
                    for _ in range(n_new):
                        clusters.append({v})
                        fresh.append(len(clusters) - 1)
                    rec(pos + 1, cost + inc)
                    for _ in fresh:
                        clusters.pop()
                    for c in sel:
                        clusters[c].discard(v)

    rec(0, 0)
    if best[1] is None:
        # nothing strictly below the cap: the greedy value is the optimum
        # unless the cap came from the budget
        if budget is not None and ub > budget:
            raise BudgetExceeded(budget + 1)
        value, cover = ub, greedy_cover
    else:
        value, cover = best[0], BiclusterCover.of(best[1])
    got = bicover_cost(g, cover)
    assert got == value, f"bicover cost {got} != searched {value}"
    return value, cover, {"nodes": nodes[0]}


def solve_bcevs(g: BipartiteGraph, budget: Optional[int] = None,
                max_vertices: int = 14, engine: str = "auto") -> SolveResult:
    """Minimum two-sided solution.

    The exact value is the minimum over edit sets of |edits| plus the
    split-cover completion of the edited graph.  The 'enumerate' engine
    computes that directly; 'bicover' branch-and-bounds over two-sided
    covers, an equivalent formulation enforced empirically by the test
    suite.  'auto' picks by flip-universe size.
    """
    mode = Mode.bcevs()
    n = g.vertex_count
    if n > max_vertices and (budget is None or budget > 6):
        raise SolverRefused(
            f"refused: instance too large ({n} vertices > {max_vertices} "
            "and no small budget given)")
    start = time.perf_counter()
    if engine == "auto":
        engine = "enumerate" if g.a_count * g.b_count <= 40 else "bicover"

    greedy = _greedy_edit_solution(g)
    ub = len(greedy)
    cap = ub if budget is None else min(ub, budget + 1)

    if engine == "enumerate":
        found, nodes = _enum_edit_search(g, cap)
        if found is None:
            if budget is not None and ub > budget:
                raise BudgetExceeded(budget + 1)
            value, cover = ub, _cover_from_edits(g, greedy)
        else:
            value, _, cover = found
    elif engine == "bicover":
        value, cover, st = minimum_bicover(g, budget=budget)
        nodes = st["nodes"]
    else:
        raise ValueError(f"unknown engine {engine!r}")

    witness = bicover_to_sequence(g, cover)
    assert sequence_cost(witness) == value
    assert bicover_cost(g, cover) == value
    assert validate_solution(g, witness, mode)
    stats = {"nodes": nodes, "elapsed_s": time.perf_counter() - start,
             "engine": engine}
    return SolveResult(value, witness, mode, cover, stats)


# ---------------------------------------------------------------------------
# Sequence-search oracle
# ---------------------------------------------------------------------------

def _split_variants(hood, keep1, keep2, exclusive):
    """All (n1, n2) with n1 ∪ n2 = hood separating keep1 from keep2."""
    rest = sorted(x for x in hood if x != keep1 and x != keep2)
    choices = (0, 1) if exclusive else (0, 1, 2)  # n1, n2, both
    for assign in itertools.product(choices, repeat=len(rest)):
        n1 = {keep1}
        n2 = {keep2}
        for x, where in zip(rest, assign):
            if where in (0, 2):
                n1.add(x)
            if where in (1, 2):
                n2.add(x)
        yield frozenset(n1), frozenset(n2)


def oracle_search(g: BipartiteGraph, k: Optional[int], mode: Mode,
                  max_vertices: int = 10, max_budget: int = 4,
                  exclusive: bool = False,
                  use_packing_prune: bool = False) -> Optional[SolveResult]:
    """Exact optimum within budget k by iterative-deepening sequence search.

    Branches on the first conflict geodesic's resolving operations: the
    three path-edge deletions, the endpoint addition, and every
    neighborhood bipartition of a splittable inner vertex that separates
    its two path neighbors.  Independent of the cover machinery; intended
    solely for cross-validation on tiny instances.

    Returns None when no solution of length <= k exists.
    """
    if g.vertex_count > max_vertices:
        raise SolverRefused(
            f"refused: instance too large ({g.vertex_count} vertices "
            f"> {max_vertices})")
    hard_cap = len(_greedy_edit_solution(g))
    cap = hard_cap if k is None else min(k, hard_cap)
    if cap > max_budget:
        raise SolverRefused(
            f"refused: oracle budget {cap} > {max_budget}")
    start = time.perf_counter()
    nodes = [0]
    failed = {}  # state-key -> largest budget already refuted

    def state_key(eg):
        return tuple(sorted((c, tuple(sorted(eg.adj[c]))) for c in eg.adj))

    def packing_of(eg):
        bg, _, _ = eg.to_bipartite()
        return geodesic_packing_bound(bg)

    def dfs(eg, left):
        nodes[0] += 1
        if eg.is_biclique_union():
            return []
        if left == 0:
            return None
        key = state_key(eg)
        if failed.get(key, -1) >= left:
            return None
        if use_packing_prune and packing_of(eg) > left:
            if failed.get(key, -1) < left:
                failed[key] = left
            return None
        a, b, c, d = eg.first_conflict()
        branch_ops = [EdgeDelete(a, b) if a.side == "A" else EdgeDelete(b, a),
                      EdgeDelete(c, b) if c.side == "A" else EdgeDelete(b, c),
                      EdgeDelete(c, d) if c.side == "A" else EdgeDelete(d, c),
                      EdgeAdd(a, d) if a.side == "A" else EdgeAdd(d, a)]
        for inner, s1, s2 in ((b, a, c), (c, b, d)):
            if mode.allows_split(inner.side):
                for n1, n2 in _split_variants(eg.adj[inner], s1, s2, exclusive):
                    branch_ops.append(Split(inner, n1, n2))
        for op in branch_ops:
            child = eg.clone()
            child.apply(op, exclusive=exclusive)
            sub = dfs(child, left - 1)
            if sub is not None:
                return [op] + sub
        if failed.get(key, -1) < left:
            failed[key] = left
        return None

    for depth in range(cap + 1):
        eg = EditedGraph(g)
        ops = dfs(eg, depth)
        if ops is not None:
            assert validate_solution(g, ops, mode, exclusive=exclusive)
            return SolveResult(len(ops), ops, mode, None,
                               {"nodes": nodes[0],
                                "elapsed_s": time.perf_counter() - start})
    return None
