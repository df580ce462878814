"""Shared test utilities: small random instances and independent oracles.

The oracles here intentionally avoid the package's bitmask machinery; they
work on plain sets so that agreement with the package is meaningful.
"""

from __future__ import annotations

import heapq
import itertools
import random
from pathlib import Path

from greedytp.hypergraph import Hypergraph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


def rand_hypergraph(rng: random.Random, max_nodes=8, max_edges=6, max_arity=3,
                    min_edges=1) -> Hypergraph:
    """A small random hypergraph; every node is covered by construction."""
    n = rng.randint(2, max_nodes)
    universe = ["N%d" % i for i in range(n)]
    k = rng.randint(min_edges, max_edges)
    pairs = []
    for i in range(k):
        arity = rng.randint(1, max_arity)
        edge = rng.sample(universe, min(arity, n))
        pairs.append(("e%d" % (i + 1), edge))
    return Hypergraph.from_named_edges(pairs)


def edge_name_sets(h: Hypergraph) -> list[set[str]]:
    return [set(h.names_of(e)) for e in h.edges]


def components_oracle(h: Hypergraph, blocked: set[str]) -> set[frozenset[str]]:
    """[blocked]-components by plain BFS over an explicit adjacency dict."""
    edges = edge_name_sets(h)
    free = {n for es in edges for n in es} - blocked
    adj = {n: set() for n in free}
    for es in edges:
        live = [n for n in es if n in free]
        for a, b in itertools.combinations(live, 2):
            adj[a].add(b)
            adj[b].add(a)
    out = set()
    todo = set(free)
    while todo:
        start = sorted(todo)[0]
        comp = {start}
        queue = [start]
        while queue:
            x = queue.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        out.add(frozenset(comp))
        todo -= comp
    return out


def _prufer_trees(n: int):
    """All labeled trees on n >= 2 vertices, as edge lists (Prufer decoding)."""
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        heap = [i for i in range(n) if degree[i] == 1]
        heapq.heapify(heap)
        tree = []
        for x in seq:
            leaf = heapq.heappop(heap)
            tree.append((leaf, x))
            degree[x] -= 1
            if degree[x] == 1:
                heapq.heappush(heap, x)
        tree.append((heapq.heappop(heap), heapq.heappop(heap)))
        yield tree


def has_join_tree_oracle(h: Hypergraph) -> bool:
    """Brute-force join-tree existence: try every labeled tree on the edges.

    Only usable for a handful of edges; the point is independence, not speed.
    """
    edges = edge_name_sets(h)
    n = len(edges)
    if n <= 1:
        return True
    nodes = sorted({x for es in edges for x in es})
    for tree in _prufer_trees(n):
        adj = {i: [] for i in range(n)}
        for a, b in tree:
            adj[a].append(b)
            adj[b].append(a)
        ok = True
        for x in nodes:
            holders = {i for i in range(n) if x in edges[i]}
            start = next(iter(holders))
            reach = {start}
            queue = [start]
            while queue:
                a = queue.pop()
                for b in adj[a]:
                    if b in holders and b not in reach:
                        reach.add(b)
                        queue.append(b)
            if reach != holders:
                ok = False
                break
        if ok:
            return True
    return False
