"""Set-system reformulations of bicluster editing solutions.

An A-partitioning cover encodes a one-sided solution (splits on B): sets of
vertices whose nonempty A-restrictions partition A.  Its cost charges each
A-vertex the edge edits against its set and each B-vertex one less than its
set multiplicity.  The two-sided generalization drops the partition
constraint and charges multiplicities on both sides plus the symmetric
edge difference.

B-only sets (empty A-restriction) are permitted so a B-vertex stripped of
all edges can sit in its own degenerate biclique.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import BipartiteGraph, VertexRef, twin_classes
from .editing import (
    CopyId,
    EdgeAdd,
    EdgeDelete,
    Mode,
    Split,
    apply_sequence,
    copy_of,
    validate_solution,
)


class CoverError(ValueError):
    """Raised for covers violating their invariants."""


def _canonical_sets(sets) -> tuple:
    out = tuple(sorted((frozenset(s) for s in sets),
                       key=lambda s: tuple(sorted(s))))
    return out


@dataclass(frozen=True)
class APartitioningCover:
    sets: tuple

    @staticmethod
    def of(sets) -> "APartitioningCover":
        return APartitioningCover(_canonical_sets(sets))


@dataclass(frozen=True)
class BiclusterCover:
    sets: tuple

    @staticmethod
    def of(sets) -> "BiclusterCover":
        return BiclusterCover(_canonical_sets(sets))


@dataclass(frozen=True)
class CoverCostBreakdown:
    a_costs: dict
    b_costs: dict
    total: int


def _check_common(g: BipartiteGraph, sets) -> None:
    if any(len(s) == 0 for s in sets):
        raise CoverError("empty set in cover")
    seen = set()
    for s in sets:
        if s in seen:
            raise CoverError("duplicate set in cover")
        seen.add(s)
        for v in s:
            if not g.has_vertex(VertexRef(*v)):
                raise CoverError(f"set member {v} not a graph vertex")
    covered = set().union(*sets) if sets else set()
    for v in g.vertices():
        if v not in covered:
            raise CoverError(f"vertex {v.token()} not covered")


def check_cover(g: BipartiteGraph, c: APartitioningCover) -> None:
    """Raise CoverError unless c is a valid A-partitioning cover of g."""
    _check_common(g, c.sets)
    seen_a = set()
    for s in c.sets:
        a_part = {v for v in s if v.side == "A"}
        if a_part & seen_a:
            raise CoverError("A-restrictions are not pairwise disjoint")
        seen_a |= a_part
    if len(seen_a) != g.a_count:
        raise CoverError("A-restrictions do not cover A")


def check_bicover(g: BipartiteGraph, c: BiclusterCover) -> None:
    _check_common(g, c.sets)


def components_as_cover(g: BipartiteGraph) -> APartitioningCover:
    """The component cover; cost 0 exactly when g is a biclique union."""
    from .graphs import connected_components
    return APartitioningCover.of(frozenset(comp)
                                 for comp in connected_components(g))


def cover_cost(g: BipartiteGraph, c: APartitioningCover) -> CoverCostBreakdown:
    """Per-vertex costs: A-vertices pay edge edits against their set,
    B-vertices pay multiplicity minus one."""
    check_cover(g, c)
    a_costs = {}
    b_costs = {}
    set_of_a = {}
    for si, s in enumerate(c.sets):
        for v in s:
            if v.side == "A":
                set_of_a[v] = si
    for i in range(g.a_count):
        a = VertexRef("A", i)
        s = c.sets[set_of_a[a]]
        hood = {VertexRef("B", j) for j in g.adj_a[i]}
        in_set_b = {v for v in s if v.side == "B"}
        a_costs[a] = len(in_set_b - hood) + len(hood - s)
    for j in range(g.b_count):
        b = VertexRef("B", j)
        mult = sum(1 for s in c.sets if b in s)
        b_costs[b] = mult - 1
    total = sum(a_costs.values()) + sum(b_costs.values())
    return CoverCostBreakdown(a_costs, b_costs, total)


def cover_to_sequence(g: BipartiteGraph, c: APartitioningCover) -> list:
    """Realize a cover as operations: per-A edge edits, then per-B splits
    distributing the A-parts.  Length equals the cover cost exactly."""
    check_cover(g, c)
    set_of_a = {}
    for si, s in enumerate(c.sets):
        for v in s:
            if v.side == "A":
                set_of_a[v] = si
    ops = []
    for i in range(g.a_count):
        a = VertexRef("A", i)
        s = c.sets[set_of_a[a]]
        hood = {VertexRef("B", j) for j in g.adj_a[i]}
        in_set_b = {v for v in s if v.side == "B"}
        for b in sorted(in_set_b - hood):
            ops.append(EdgeAdd(copy_of(a), copy_of(b)))
        for b in sorted(hood - s):
            ops.append(EdgeDelete(copy_of(a), copy_of(b)))
    for j in range(g.b_count):
        b = VertexRef("B", j)
        holding = [s for s in c.sets if b in s]
        if len(holding) <= 1:
            continue
        parts = [frozenset(copy_of(v) for v in s if v.side == "A")
                 for s in holding]
        cur = copy_of(b)
        counter = 1
        remaining = parts
        while len(remaining) > 1:
            n1 = remaining[0]
            n2 = frozenset().union(*remaining[1:])
            ops.append(Split(cur, n1, n2))
            cur = CopyId("B", j, counter + 1)  # the copy holding n2
            counter += 2
            remaining = remaining[1:]
    return ops


def sequence_to_cover(g: BipartiteGraph, seq) -> APartitioningCover:
    """Map a valid one-sided solution back to a cover: each final biclique
    becomes the set of A-vertices present plus B-originals owning a copy."""
    res = validate_solution(g, seq, Mode.bceovs("B"))
    if not res:
        raise CoverError(f"sequence is not a valid one-sided solution: {res.reason}")
    eg = apply_sequence(g, seq)
    sets = {frozenset(c.origin for c in comp) for comp in eg.components()}
    return APartitioningCover.of(sets)


def _pattern_quantity(g, sets, pattern, b) -> int:
    """Multiplicity cost plus edge edits attributable to b under `pattern`
    (the indices of the sets that contain b)."""
    hood = {VertexRef("A", i) for i in g.adj_b[b.index]}
    q = len(pattern) - 1
    union_a = set()
    for si in pattern:
        a_part = {v for v in sets[si] if v.side == "A"}
        q += len(a_part - hood)
        union_a |= a_part
    q += len(hood - union_a)
    return q


def twin_adapt(g: BipartiteGraph, c: APartitioningCover) -> APartitioningCover:
    """Align every twin class to one membership pattern without raising cost.

    A-vertices move to the set of their cheapest twin; each B-twin-class
    adopts the member pattern minimizing multiplicity plus attributable
    edits.  Emptied sets drop and duplicates merge afterwards.
    """
    check_cover(g, c)
    sets = [set(s) for s in c.sets]
    tc = twin_classes(g)

    def a_cost(a, s):
        hood = {VertexRef("B", j) for j in g.adj_a[a.index]}
        in_set_b = {v for v in s if v.side == "B"}
        return len(in_set_b - hood) + len(hood - s)

    for cls in tc.classes:
        if cls[0].side != "A" or len(cls) == 1:
            continue
        where = {}
        for a in cls:
            for si, s in enumerate(sets):
                if a in s:
                    where[a] = si
                    break
        best = min(cls, key=lambda a: (a_cost(a, sets[where[a]]), a))
        target = where[best]
        for a in cls:
            if where[a] != target:
                sets[where[a]].discard(a)
                sets[target].add(a)

    for cls in tc.classes:
        if cls[0].side != "B" or len(cls) == 1:
            continue
        patterns = {b: frozenset(si for si, s in enumerate(sets) if b in s)
                    for b in cls}
        best = min(cls, key=lambda b: (_pattern_quantity(g, sets, patterns[b], b), b))
        target = patterns[best]
        for b in cls:
            if patterns[b] != target:
                for si in patterns[b]:
                    sets[si].discard(b)
                for si in target:
                    sets[si].add(b)

    cleaned = {frozenset(s) for s in sets if s}
    return APartitioningCover.of(cleaned)


def is_twin_adapted(g: BipartiteGraph, c: APartitioningCover) -> bool:
    tc = twin_classes(g)
    for cls in tc.classes:
        cset = set(cls)
        for s in c.sets:
            inter = cset & s
            if inter and inter != cset:
                return False
    return True


def bicover_cost(g: BipartiteGraph, c: BiclusterCover) -> int:
    """Split multiplicities on both sides plus the edge difference to the
    co-residency relation."""
    check_bicover(g, c)
    mult = {}
    pairs = set()
    for s in c.sets:
        a_part = sorted(v for v in s if v.side == "A")
        b_part = sorted(v for v in s if v.side == "B")
        for v in s:
            mult[v] = mult.get(v, 0) + 1
        for a in a_part:
            for b in b_part:
                pairs.add((a.index, b.index))
    edges = set(g.edges())
    return sum(m - 1 for m in mult.values()) + len(edges ^ pairs)


def bicover_to_sequence(g: BipartiteGraph, c: BiclusterCover) -> list:
    """Realize a two-sided cover: edit edges to the co-residency relation,
    split A-vertices into per-set copies, then B-vertices."""
    check_bicover(g, c)
    pairs = set()
    for s in c.sets:
        for a in s:
            if a.side != "A":
                continue
            for b in s:
                if b.side == "B":
                    pairs.add((a.index, b.index))
    edges = set(g.edges())
    ops = []
    for (i, j) in sorted(pairs - edges):
        ops.append(EdgeAdd(CopyId("A", i), CopyId("B", j)))
    for (i, j) in sorted(edges - pairs):
        ops.append(EdgeDelete(CopyId("A", i), CopyId("B", j)))

    holding = {v: [] for v in g.vertices()}
    for si, s in enumerate(c.sets):
        for v in s:
            holding[v].append(si)

    acopy = {}
    for i in range(g.a_count):
        a = VertexRef("A", i)
        own = holding[a]
        if len(own) == 1:
            acopy[(a, own[0])] = CopyId("A", i)
            continue
        cur = CopyId("A", i)
        counter = 1
        rest = own
        while len(rest) > 1:
            si = rest[0]
            n1 = frozenset(copy_of(v) for v in c.sets[si] if v.side == "B")
            n2 = frozenset(copy_of(v) for sj in rest[1:]
                           for v in c.sets[sj] if v.side == "B")
            ops.append(Split(cur, n1, n2))
            acopy[(a, si)] = CopyId("A", i, counter)
            cur = CopyId("A", i, counter + 1)
            counter += 2
            rest = rest[1:]
        acopy[(a, rest[0])] = cur

    for j in range(g.b_count):
        b = VertexRef("B", j)
        own = holding[b]
        if len(own) <= 1:
            continue

        def b_side_view(si):
            return frozenset(acopy[(v, si)] for v in c.sets[si] if v.side == "A")

        cur = CopyId("B", j)
        counter = 1
        rest = own
        while len(rest) > 1:
            n1 = b_side_view(rest[0])
            n2 = frozenset().union(*(b_side_view(sj) for sj in rest[1:]))
            ops.append(Split(cur, n1, n2))
            cur = CopyId("B", j, counter + 1)
            counter += 2
            rest = rest[1:]
    return ops
