"""Hypergraphs over an interned node universe.

Nodes are interned to dense integer ids in order of first appearance, and
every node set is represented as an int bitmask (bit ``i`` set iff node ``i``
is a member).  Masks are hashable, cheap to copy and compare, and iterate in
ascending id order, which keeps every operation in this package deterministic.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import ParseError, ValidationError

log = logging.getLogger(__name__)

NodeId = int
# A NodeSet is just an int used as a bitmask over node ids.
NodeSet = int

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_EDGE_RE = re.compile(r"(?P<name>[A-Za-z0-9_]+)\s*\((?P<body>[^()]*)\)\s*,?\Z")


def iter_bits(mask: NodeSet) -> Iterator[int]:
    """Yield the set bit positions of *mask* in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of_ids(ids: Iterable[int]) -> NodeSet:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


class Hypergraph:
    """An ordered multiset of named hyperedges over an interned node universe.

    Duplicate edges are preserved (they matter for provenance and for query
    atoms); duplicate edge *names* are rejected.  Derived hypergraphs built by
    other modules share the universe of their base so that masks stay
    compatible.
    """

    def __init__(
        self,
        names: tuple[str, ...],
        edges: tuple[NodeSet, ...],
        edge_names: tuple[str, ...],
        provenance: Optional[tuple[tuple[int, ...], ...]] = None,
        keep_universe: bool = False,
    ):
        if len(edges) != len(edge_names):
            raise ValueError("edges and edge_names must have equal length")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        if len(self.index) != len(names):
            raise ValueError("duplicate node name in universe")
        self.edges = edges
        self.edge_names = edge_names
        self.edge_index = {n: i for i, n in enumerate(edge_names)}
        if len(self.edge_index) != len(edge_names):
            raise ValueError("duplicate edge name")
        # Optional provenance: for derived hypergraphs, the base edge ids each
        # edge was assembled from.
        self.provenance = provenance
        self.all_nodes: NodeSet = 0
        for e in edges:
            self.all_nodes |= e
        uncovered = len(names) - self.all_nodes.bit_count()
        if uncovered and not keep_universe:
            # Isolated nodes cannot occur: the universe is rebuilt from edges.
            covered = [names[i] for i in iter_bits(self.all_nodes)]
            log.warning("dropping %d isolated node(s) from universe", uncovered)
            self.names = tuple(covered)
            self.index = {n: i for i, n in enumerate(self.names)}
            remap = {old: self.index[names[old]] for old in iter_bits(self.all_nodes)}
            self.edges = tuple(
                mask_of_ids(remap[v] for v in iter_bits(e)) for e in edges
            )
            self.all_nodes = (1 << len(self.names)) - 1
        # adjacency[v]: union of all edges containing v (v's bit included)
        adj = [0] * len(self.names)
        for e in self.edges:
            for v in iter_bits(e):
                adj[v] |= e
        self._adj = tuple(adj)
        self._comp_cache: dict[NodeSet, tuple[NodeSet, ...]] = {}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_named_edges(cls, pairs: Iterable[tuple[str, Iterable[str]]]) -> "Hypergraph":
        """Build a hypergraph from (edge name, node names) pairs.

        Nodes are interned in order of first appearance.
        """
        names: list[str] = []
        index: dict[str, int] = {}
        masks: list[int] = []
        edge_names: list[str] = []
        for ename, nodes in pairs:
            m = 0
            for n in nodes:
                if n not in index:
                    index[n] = len(names)
                    names.append(n)
                m |= 1 << index[n]
            masks.append(m)
            edge_names.append(ename)
        return cls(tuple(names), tuple(masks), tuple(edge_names))

    @classmethod
    def from_masks(
        cls,
        base: "Hypergraph",
        edges: Iterable[NodeSet],
        name_prefix: str = "e",
        provenance: Optional[tuple[tuple[int, ...], ...]] = None,
    ) -> "Hypergraph":
        """Build a derived hypergraph over the same universe as *base*.

        The universe is kept verbatim (no isolated-node dropping) so that
        masks stay compatible with *base*.
        """
        masks = tuple(edges)
        enames = tuple("%s%d" % (name_prefix, i + 1) for i in range(len(masks)))
        return cls(base.names, masks, enames, provenance, keep_universe=True)

    def reindexed(self, names: tuple[str, ...]) -> "Hypergraph":
        """Remap this hypergraph onto the node universe given by *names*.

        The name sets must agree; only the id assignment may differ.  Used to
        align two separately parsed hypergraphs before playing a game on them.
        """
        if names == self.names:
            return self
        if set(names) != set(self.names):
            missing = sorted(set(self.names) - set(names))
            raise ValueError("universes differ: %s not in target" % ", ".join(missing) if missing else "universes differ")
        target = {n: i for i, n in enumerate(names)}
        remap = {i: target[n] for i, n in enumerate(self.names)}
        edges = tuple(mask_of_ids(remap[v] for v in iter_bits(e)) for e in self.edges)
        return Hypergraph(tuple(names), edges, self.edge_names, self.provenance,
                          keep_universe=True)

    # -- small accessors ------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.names)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def mask_of(self, nodes: Iterable[str]) -> NodeSet:
        m = 0
        for n in nodes:
            try:
                m |= 1 << self.index[n]
            except KeyError:
                raise KeyError("unknown node %r" % n) from None
        return m

    def names_of(self, mask: NodeSet) -> tuple[str, ...]:
        return tuple(self.names[v] for v in iter_bits(mask))

    def max_arity(self) -> int:
        return max((e.bit_count() for e in self.edges), default=0)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return "Hypergraph(%d nodes, %d edges)" % (self.n_nodes, self.n_edges)


# -- text format --------------------------------------------------------------


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse the line-oriented hypergraph format.

    One edge per line, ``name(node,node,...)``, optionally followed by a
    trailing comma.  ``%`` and ``#`` start comments; blank lines are skipped.
    Names are ``[A-Za-z0-9_]+``.  Repeated node names inside one edge are
    collapsed; repeated edge names are an error.
    """
    pairs: list[tuple[str, list[str]]] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw
        for marker in ("%", "#"):
            pos = line.find(marker)
            if pos >= 0:
                line = line[:pos]
        line = line.strip()
        if not line:
            continue
        m = _EDGE_RE.match(line)
        if not m:
            raise ParseError("expected name(node,...), got %r" % line, lineno)
        ename = m.group("name")
        if ename in seen:
            raise ParseError("duplicate edge name %r" % ename, lineno)
        seen.add(ename)
        body = m.group("body").strip()
        if not body:
            raise ParseError("edge %r has no nodes" % ename, lineno)
        nodes = []
        for tok in body.split(","):
            tok = tok.strip()
            if not _NAME_RE.match(tok):
                raise ParseError("bad node name %r in edge %r" % (tok, ename), lineno)
            if tok not in nodes:
                nodes.append(tok)
        pairs.append((ename, nodes))
    return Hypergraph.from_named_edges(pairs)


def format_hypergraph(h: Hypergraph) -> str:
    """Serialize back to the text format (inverse of parse up to whitespace)."""
    lines = []
    for name, e in zip(h.edge_names, h.edges):
        lines.append("%s(%s)" % (name, ",".join(h.names_of(e))))
    return "\n".join(lines) + "\n"


# -- connectivity -------------------------------------------------------------


def components(h: Hypergraph, m: NodeSet) -> tuple[NodeSet, ...]:
    """All [m]-components of *h*: maximal sets of nodes outside *m* that are
    pairwise connected by paths avoiding *m*.

    Two nodes outside *m* are adjacent here iff some edge contains both.
    Returned in ascending order of their smallest node id.  Results are cached
    per mask on the hypergraph; the cache is the main performance lever of the
    game engine.
    """
    cached = h._comp_cache.get(m)
    if cached is not None:
        return cached
    free = h.all_nodes & ~m
    out: list[NodeSet] = []
    adj = h._adj
    while free:
        seed = free & -free
        comp = 0
        cur = seed
        while cur:
            comp |= cur
            grow = 0
            for v in iter_bits(cur):
                grow |= adj[v]
            cur = grow & free & ~comp
        out.append(comp)
        free &= ~comp
    result = tuple(out)
    h._comp_cache[m] = result
    return result


def component_of(h: Hypergraph, m: NodeSet, seed: NodeSet) -> NodeSet:
    """The [m]-component containing the lowest node of *seed* (seed & m == 0)."""
    for c in components(h, m):
        if c & seed:
            return c
    raise ValueError("seed lies inside the blocked set")


def frontier(h: Hypergraph, c: NodeSet) -> NodeSet:
    """Union of all edges that intersect *c* (always a superset of c)."""
    out = 0
    for e in h.edges:
        if e & c:
            out |= e
    return out


def border(h: Hypergraph, c: NodeSet) -> NodeSet:
    """Frontier of *c* minus *c* itself."""
    return frontier(h, c) & ~c


def gaifman(h: Hypergraph) -> tuple[NodeSet, ...]:
    """Neighbor mask per node in the Gaifman (primal) graph, self excluded."""
    return tuple(h._adj[v] & ~(1 << v) for v in range(h.n_nodes))


# -- acyclicity ---------------------------------------------------------------


@dataclass
class GyoReduction:
    """Outcome of running the ear-removal reduction to a fixpoint.

    ``parent[e]`` records the edge that absorbed edge ``e`` (None if ``e``
    survived), ``works`` the reduced content of each edge, ``alive`` the
    surviving edge ids.
    """

    parent: tuple[Optional[int], ...]
    works: tuple[NodeSet, ...]
    alive: tuple[int, ...]

    @property
    def acyclic(self) -> bool:
        return len(self.alive) <= 1


def gyo_reduce(h: Hypergraph) -> GyoReduction:
    """Reduce *h* by repeatedly deleting nodes that occur in a single edge and
    absorbing edges contained in another edge.

    The input is acyclic iff at most one edge survives.  Absorption parents
    double as join-tree arcs.
    """
    n = h.n_edges
    work = list(h.edges)
    alive = [True] * n
    parent: list[Optional[int]] = [None] * n
    changed = True
    while changed:
        changed = False
        # delete nodes occurring in exactly one live edge
        occ: dict[int, int] = {}
        count: dict[int, int] = {}
        for e in range(n):
            if not alive[e]:
                continue
            for v in iter_bits(work[e]):
                count[v] = count.get(v, 0) + 1
                occ[v] = e
        for v, cnt in count.items():
            if cnt == 1:
                work[occ[v]] &= ~(1 << v)
                changed = True
        # absorb covered edges (identical edges collapse onto the earliest)
        for e in range(n):
            if not alive[e]:
                continue
            for f in range(n):
                if f == e or not alive[f]:
                    continue
                if work[e] & ~work[f]:
                    continue
                if work[e] == work[f] and f > e:
                    continue
                parent[e] = f
                alive[e] = False
                changed = True
                break
    live = tuple(e for e in range(n) if alive[e])
    return GyoReduction(tuple(parent), tuple(work), live)


def is_acyclic(h: Hypergraph) -> bool:
    return gyo_reduce(h).acyclic


@dataclass
class JoinTree:
    """A rooted tree over the edge ids of some hypergraph.

    For every node X of the hypergraph, the tree vertices whose edge contains
    X must induce a connected subtree.
    """

    parent: tuple[Optional[int], ...]
    root: Optional[int]

    def children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {e: [] for e in range(len(self.parent))}
        for e, p in enumerate(self.parent):
            if p is not None:
                ch[p].append(e)
        return ch

    def undirected(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {e: [] for e in range(len(self.parent))}
        for e, p in enumerate(self.parent):
            if p is not None:
                adj[e].append(p)
                adj[p].append(e)
        return adj


def join_tree(h: Hypergraph) -> Optional[JoinTree]:
    """A join tree of *h*, or None if *h* is cyclic.

    Built from the reduction's absorption arcs, then re-checked from scratch;
    a check failure is a bug, not bad input.
    """
    red = gyo_reduce(h)
    if not red.acyclic:
        return None
    if h.n_edges == 0:
        return JoinTree((), None)
    root = red.alive[0]
    jt = JoinTree(red.parent, root)
    if not join_tree_valid(h, jt):
        raise ValidationError("reduction produced an invalid join tree")
    return jt


def join_tree_valid(h: Hypergraph, jt: JoinTree) -> bool:
    """Check the connectedness condition of *jt* against the edges of *h*.

    Deliberately independent of how the tree was built: for every node X the
    set of tree vertices containing X is tested for connectivity by BFS.
    """
    n = h.n_edges
    if len(jt.parent) != n:
        return False
    if n == 0:
        return jt.root is None
    # exactly one root, everything reachable from it
    roots = [e for e in range(n) if jt.parent[e] is None]
    if len(roots) != 1 or roots[0] != jt.root:
        return False
    adj = jt.undirected()
    seen = {jt.root}
    queue = [jt.root]
    while queue:
        x = queue.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if len(seen) != n:
        return False
    for v in range(h.n_nodes):
        bit = 1 << v
        holders = [e for e in range(n) if h.edges[e] & bit]
        if not holders:
            return False
        start = holders[0]
        hset = set(holders)
        reach = {start}
        queue = [start]
        while queue:
            x = queue.pop()
            for y in adj[x]:
                if y in hset and y not in reach:
                    reach.add(y)
                    queue.append(y)
        if reach != hset:
            return False
    return True


# -- pair ordering ------------------------------------------------------------


def leq(h1: Hypergraph, h2: Hypergraph) -> Optional[tuple[int, ...]]:
    """Cover witness for h1 <= h2: for each h1 edge, the first h2 edge
    containing it.  None if some edge has no cover.

    Both hypergraphs must live on the same universe.
    """
    if h1.names != h2.names:
        raise ValueError("leq requires a shared node universe")
    witness = []
    for e in h1.edges:
        for j, f in enumerate(h2.edges):
            if not e & ~f:
                witness.append(j)
                break
        else:
            return None
    return tuple(witness)
