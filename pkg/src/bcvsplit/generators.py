"""Instance construction: hardness gadgets, named families, planted covers.

The 3-CNF gadget builds one even cycle of length 6*d(v) per variable plus
one vertex per clause, wired to the variable-clause positions 6(j-1)+1
(positive) and 6(j-1)+3 (negative) of the j-th occurrence.  A satisfying
assignment translates into a deletion-only solution of length exactly 8m.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .graphs import BipartiteGraph, GraphError, VertexRef, build_graph
from .editing import EdgeDelete, Instance, Mode, copy_of
from .covers import APartitioningCover


class CnfError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None
                         else f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: tuple          # tuples of 3 signed ints over distinct variables
    occurrence: dict        # var -> tuple of (clause_index, positive)

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def degree(self, var: int) -> int:
        return len(self.occurrence[var])


def _occurrence_lists(variable_count, clauses) -> dict:
    occ = {v: [] for v in range(1, variable_count + 1)}
    for ci, clause in enumerate(clauses):
        for lit in clause:
            occ[abs(lit)].append((ci, lit > 0))
    # A variable appearing twice positive and twice negative gets an
    # alternating occurrence list (positive first), as the inapproximability
    # gadget ordering requires; other patterns keep clause order.
    for v, lst in occ.items():
        if len(lst) == 4:
            pos = [x for x in lst if x[1]]
            neg = [x for x in lst if not x[1]]
            if len(pos) == 2 and len(neg) == 2:
                occ[v] = [pos[0], neg[0], pos[1], neg[1]]
    return {v: tuple(lst) for v, lst in occ.items()}


def make_formula(variable_count: int, clauses) -> CnfFormula:
    norm = []
    for ci, clause in enumerate(clauses):
        lits = tuple(clause)
        if len(lits) != 3:
            raise CnfError(f"clause {ci} has {len(lits)} literals, need 3")
        if any(lit == 0 or abs(lit) > variable_count for lit in lits):
            raise CnfError(f"clause {ci} has a literal out of range")
        if len({abs(lit) for lit in lits}) != 3:
            raise CnfError(f"clause {ci} repeats a variable")
        norm.append(lits)
    return CnfFormula(variable_count, tuple(norm),
                      _occurrence_lists(variable_count, norm))


def parse_dimacs_cnf(text: str) -> CnfFormula:
    """Parse DIMACS CNF text with 3-literal clauses."""
    variable_count = None
    clause_count = None
    clauses = []
    pending = []
    pending_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"bad problem line {line!r}", lineno)
            try:
                variable_count = int(parts[2])
                clause_count = int(parts[3])
            except ValueError:
                raise CnfError(f"bad problem line {line!r}", lineno)
            continue
        if variable_count is None:
            raise CnfError("clause before problem line", lineno)
        try:
            tokens = [int(t) for t in line.split()]
        except ValueError:
            raise CnfError(f"non-integer token in {line!r}", lineno)
        for t in tokens:
            if t == 0:
                if not pending:
                    raise CnfError("empty clause", lineno)
                if len(pending) != 3:
                    raise CnfError(
                        f"clause arity {len(pending)}, need 3", pending_line)
                clauses.append(tuple(pending))
                pending = []
                pending_line = None
            else:
                if abs(t) > variable_count:
                    raise CnfError(f"literal {t} out of range", lineno)
                if pending_line is None:
                    pending_line = lineno
                pending.append(t)
    if pending:
        raise CnfError("unterminated clause", pending_line)
    if variable_count is None:
        raise CnfError("missing problem line")
    if clause_count is not None and clause_count != len(clauses):
        raise CnfError(f"header announced {clause_count} clauses, "
                       f"found {len(clauses)}")
    return make_formula(variable_count, clauses)


@dataclass(frozen=True)
class ReductionMap:
    """Where each gadget vertex came from.

    cycle_vertices[v][p-1] is the graph vertex for position p of v's cycle
    (positions 1..6*d(v)); literal_position[(v, ci)] is the cycle position
    of the variable-clause vertex for clause ci.
    """
    formula: CnfFormula
    cycle_vertices: dict
    clause_vertices: tuple
    literal_position: dict


def sat_to_instance(f: CnfFormula):
    """Construction of the hardness gadget; returns (Instance, ReductionMap).

    The graph has 19m vertices (6 per literal occurrence plus one per
    clause), maximum degree 3, and budget k = 8m.  Even cycle positions and
    the clause vertices form side A; odd positions form side B.
    """
    m = f.clause_count
    for v in range(1, f.variable_count + 1):
        if f.degree(v) == 0:
            raise CnfError(f"variable {v} occurs in no clause")

    a_counter = 0
    b_counter = 0
    cycle_vertices = {}
    for v in range(1, f.variable_count + 1):
        refs = []
        for p in range(1, 6 * f.degree(v) + 1):
            if p % 2 == 0:
                refs.append(VertexRef("A", a_counter))
                a_counter += 1
            else:
                refs.append(VertexRef("B", b_counter))
                b_counter += 1
        cycle_vertices[v] = tuple(refs)
    clause_vertices = []
    for _ in range(m):
        clause_vertices.append(VertexRef("A", a_counter))
        a_counter += 1
    clause_vertices = tuple(clause_vertices)

    edges = []

    def add_edge(u, w):
        a, b = (u, w) if u.side == "A" else (w, u)
        edges.append((a.index, b.index))

    for v in range(1, f.variable_count + 1):
        refs = cycle_vertices[v]
        size = len(refs)
        for p in range(size):
            add_edge(refs[p], refs[(p + 1) % size])

    literal_position = {}
    for v in range(1, f.variable_count + 1):
        for j, (ci, positive) in enumerate(f.occurrence[v], start=1):
            pos = 6 * (j - 1) + (1 if positive else 3)
            literal_position[(v, ci)] = pos
            add_edge(clause_vertices[ci], cycle_vertices[v][pos - 1])

    g = build_graph(a_counter, b_counter, edges)
    inst = Instance(g, 8 * m, Mode.bceovs("B"))
    return inst, ReductionMap(f, cycle_vertices, clause_vertices,
                              literal_position)


def assignment_to_sequence(rmap: ReductionMap, assignment) -> list:
    """Deletion sequence realized by a truth assignment.

    Length is 8m plus one per unsatisfied clause; with a satisfying
    assignment the sequence has length exactly 8m.  `assignment` maps
    variable -> bool and must be total.
    """
    f = rmap.formula
    for v in range(1, f.variable_count + 1):
        if v not in assignment:
            raise ValueError(f"assignment misses variable {v}")

    ops = []

    def delete(u, w):
        a, b = (u, w) if u.side == "A" else (w, u)
        ops.append(EdgeDelete(copy_of(a), copy_of(b)))

    # True deletes position pairs (2+3i, 3+3i), making positive occurrence
    # positions star centers; false deletes (1+3i, 2+3i) for the negative
    # positions.
    for v in range(1, f.variable_count + 1):
        refs = rmap.cycle_vertices[v]
        start = 2 if assignment[v] else 1
        for i in range(2 * f.degree(v)):
            p = start + 3 * i
            delete(refs[p - 1], refs[p])

    for ci, clause in enumerate(f.clauses):
        satisfied = None
        for lit in clause:
            if assignment[abs(lit)] == (lit > 0):
                satisfied = abs(lit)
                break
        for lit in clause:
            v = abs(lit)
            if v == satisfied:
                continue
            pos = rmap.literal_position[(v, ci)]
            delete(rmap.clause_vertices[ci], rmap.cycle_vertices[v][pos - 1])
        if satisfied is None:
            # unsatisfied clause: all three incident edges went; the budget
            # grows by the one extra deletion
            pass
    return ops


def figure1_graph() -> BipartiteGraph:
    """The 10-vertex gap example: two 4-cycles through hubs on opposite
    sides, a hub-hub edge, and a second hub-to-hub path of length 3.

    A = [h1, u, q, w1, w2], B = [c1, c2, p, h2, z]; the two-sided optimum
    splits both hubs while the one-sided optimum needs three operations.
    """
    edges = [
        (0, 0), (0, 1),          # h1 in the left 4-cycle
        (1, 0), (1, 1),          # u closes the left 4-cycle
        (0, 2), (0, 3),          # h1 - p, h1 - h2
        (2, 2), (2, 3),          # q - p, q - h2
        (3, 3), (3, 4),          # w1 in the right 4-cycle
        (4, 3), (4, 4),          # w2 closes the right 4-cycle
    ]
    return build_graph(5, 5, edges)


def family(kind: str, *sizes: int) -> BipartiteGraph:
    """Named families: path(n), cycle(n), star(a, b), biclique(a, b).

    Paths and cycles lay out positions alternately, even positions on side
    A.  Cycles must be even and have at least 4 vertices.
    """
    if kind == "path":
        (n,) = sizes
        if n < 0:
            raise GraphError("path size must be non-negative")
        edges = []
        for p in range(n - 1):
            u, v = (p, p + 1) if p % 2 == 0 else (p + 1, p)
            edges.append((u // 2, v // 2))
        return build_graph((n + 1) // 2, n // 2, edges)
    if kind == "cycle":
        (n,) = sizes
        if n % 2 == 1:
            raise GraphError("odd cycles are not bipartite")
        if n < 4:
            raise GraphError("cycle needs at least 4 vertices")
        edges = []
        for p in range(n):
            q = (p + 1) % n
            u, v = (p, q) if p % 2 == 0 else (q, p)
            edges.append((u // 2, v // 2))
        return build_graph(n // 2, n // 2, edges)
    if kind in ("star", "biclique"):
        a, b = sizes
        if a < 0 or b < 0:
            raise GraphError("side sizes must be non-negative")
        if kind == "star" and not (a == 1 or b == 1):
            raise GraphError("a star has a single center")
        return build_graph(a, b, [(i, j) for i in range(a) for j in range(b)])
    raise GraphError(f"unknown family {kind!r}")


def random_planted(a_parts, b_parts, overlap_splits: int, noise_edits: int,
                   seed: int):
    """Disjoint bicliques, overlapped B-vertices, then random edge flips.

    Returns (graph, ground_truth_cover); the cover costs at most
    overlap_splits + noise_edits and certifies an optimum upper bound.
    Deterministic per seed.
    """
    if len(a_parts) != len(b_parts) or not a_parts:
        raise GraphError("a_parts and b_parts must be equally sized, nonempty")
    if any(x < 0 for x in a_parts) or any(x < 0 for x in b_parts):
        raise GraphError("part sizes must be non-negative")
    if any(a + b == 0 for a, b in zip(a_parts, b_parts)):
        raise GraphError("empty block")
    rng = random.Random(seed)
    blocks = len(a_parts)
    a_of_block = []
    b_of_block = []
    a_total = 0
    b_total = 0
    for size in a_parts:
        a_of_block.append(list(range(a_total, a_total + size)))
        a_total += size
    for size in b_parts:
        b_of_block.append(list(range(b_total, b_total + size)))
        b_total += size

    edges = set()
    for blk in range(blocks):
        for i in a_of_block[blk]:
            for j in b_of_block[blk]:
                edges.add((i, j))

    block_of_b = {}
    for blk in range(blocks):
        for j in b_of_block[blk]:
            block_of_b[j] = blk
    overlap_pairs = set()
    candidates = [(j, blk) for j in range(b_total) for blk in range(blocks)
                  if blk != block_of_b[j]]
    if overlap_splits > len(candidates):
        raise GraphError("overlap_splits exceeds available vertex/block pairs")
    for _ in range(overlap_splits):
        j, blk = candidates.pop(rng.randrange(len(candidates)))
        overlap_pairs.add((j, blk))
        for i in a_of_block[blk]:
            edges.add((i, j))

    all_pairs = a_total * b_total
    if noise_edits > all_pairs:
        raise GraphError("noise_edits exceeds the number of vertex pairs")
    flipped = set()
    while len(flipped) < noise_edits:
        i = rng.randrange(a_total)
        j = rng.randrange(b_total)
        if (i, j) in flipped:
            continue
        flipped.add((i, j))
        if (i, j) in edges:
            edges.remove((i, j))
        else:
            edges.add((i, j))

    g = build_graph(a_total, b_total, sorted(edges))
    sets = []
    for blk in range(blocks):
        members = {VertexRef("A", i) for i in a_of_block[blk]}
        members |= {VertexRef("B", j) for j in b_of_block[blk]}
        members |= {VertexRef("B", j) for (j, b2) in overlap_pairs if b2 == blk}
        if members:
            sets.append(frozenset(members))
    cover = APartitioningCover.of(sets)
    return g, cover
