"""Shared test utilities: instance generators and oracle assertions."""

import itertools
import random

from bcvsplit import (
    Mode,
    build_graph,
    family,
    oracle_search,
)


def path(n):
    return family("path", n)


def cycle(n):
    return family("cycle", n)


def biclique(a, b):
    return family("biclique", a, b)


def random_bipartite(rng, a_max=4, b_max=4, total_max=None):
    a = rng.randint(1, a_max)
    b_hi = b_max if total_max is None else max(1, min(b_max, total_max - a))
    b = rng.randint(1, b_hi)
    p = rng.choice([0.3, 0.5, 0.7])
    edges = [(i, j) for i in range(a) for j in range(b) if rng.random() < p]
    return build_graph(a, b, edges)


def canonical_key(g):
    """Isomorphism key under independent side relabelings (sides fixed)."""
    best = None
    edges = set(g.edges())
    for pa in itertools.permutations(range(g.a_count)):
        for pb in itertools.permutations(range(g.b_count)):
            key = tuple(sorted((pa[i], pb[j]) for (i, j) in edges))
            if best is None or key < best:
                best = key
    return (g.a_count, g.b_count, best)


def all_small_graphs(a_max=3, b_max=3):
    """One representative per isomorphism class, sides up to the maxima."""
    seen = set()
    out = []
    for a in range(0, a_max + 1):
        for b in range(0, b_max + 1):
            pairs = [(i, j) for i in range(a) for j in range(b)]
            for r in range(len(pairs) + 1):
                for combo in itertools.combinations(pairs, r):
                    g = build_graph(a, b, combo)
                    key = canonical_key(g)
                    if key not in seen:
                        seen.add(key)
                        out.append(g)
    return out


def random_tree_graph(rng, n):
    """Uniform labeled tree via a random Pruefer sequence, two-colored."""
    if n == 1:
        return build_graph(1, 0, [])
    if n == 2:
        return build_graph(1, 1, [(0, 0)])
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    import heapq
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    # two-color by BFS
    color = {0: 0}
    adj = {v: [] for v in range(n)}
    for u, w in edges:
        adj[u].append(w)
        adj[w].append(u)
    queue = [0]
    while queue:
        u = queue.pop()
        for w in adj[u]:
            if w not in color:
                color[w] = 1 - color[u]
                queue.append(w)
    a_nodes = sorted(v for v in range(n) if color[v] == 0)
    b_nodes = sorted(v for v in range(n) if color[v] == 1)
    ai = {v: i for i, v in enumerate(a_nodes)}
    bi = {v: i for i, v in enumerate(b_nodes)}
    out = []
    for u, w in edges:
        if color[u] == 1:
            u, w = w, u
        out.append((ai[u], bi[w]))
    return build_graph(len(a_nodes), len(b_nodes), out)


def nx_tree_to_graph(t):
    import networkx as nx
    if t.number_of_nodes() == 1:
        return build_graph(1, 0, [])
    color = nx.bipartite.color(t)
    a_nodes = sorted(v for v in t if color[v] == 0)
    b_nodes = sorted(v for v in t if color[v] == 1)
    ai = {v: i for i, v in enumerate(a_nodes)}
    bi = {v: i for i, v in enumerate(b_nodes)}
    edges = []
    for u, v in t.edges():
        if color[u] == 1:
            u, v = v, u
        edges.append((ai[u], bi[v]))
    return build_graph(len(a_nodes), len(b_nodes), edges)


def assert_oracle_value(g, mode, value, max_vertices=14, max_budget=12):
    """The oracle refutes value-1 and realizes value: exact optimum check."""
    res = oracle_search(g, value, mode, max_vertices=max_vertices,
                        max_budget=max_budget)
    assert res is not None, f"oracle found nothing within {value} for {mode}"
    assert res.value == value, (
        f"oracle optimum {res.value} != {value} under {mode}")
    return res
