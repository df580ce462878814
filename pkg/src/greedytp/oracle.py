"""Brute-force ground truth for differential testing at desk scale.

Everything here is deliberately independent of the main engine: the
unrestricted capture game is solved by plain backward induction over
explicit positions, projection existence is re-decided by a memoized search
over candidate bags, treewidth by the classic subset dynamic program, and
query answers by an unoptimized left-to-right join.  Hard ceilings turn
exponential blowups into errors instead of hangs.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import BudgetError, InputError
from .hypergraph import (Hypergraph, NodeSet, border, component_of,
                         components, frontier, gaifman, iter_bits)
from .methods import power_hypergraph
from .query import (ConjunctiveQuery, Database, Relation, Rows, _bind_atom,
                    _constant_filters_hold, _join, parse_query)

log = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 10
DEFAULT_MAX_EDGES = 12
DEFAULT_MAX_ARITY = 6


def _check_ceilings(h1: Hypergraph, h2: Hypergraph, max_nodes: int,
                    max_edges: int, max_arity: int) -> None:
    if h1.n_nodes > max_nodes:
        raise BudgetError("instance has %d nodes, oracle ceiling is %d"
                          % (h1.n_nodes, max_nodes))
    if h2.n_edges > max_edges:
        raise BudgetError("H2 has %d edges, oracle ceiling is %d"
                          % (h2.n_edges, max_edges))
    if max(h2.max_arity(), h1.max_arity()) > max_arity:
        raise BudgetError("arity %d exceeds oracle ceiling %d"
                          % (max(h2.max_arity(), h1.max_arity()), max_arity))


def _submasks_desc(mask: NodeSet):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def tp_exists_bruteforce(h1: Hypergraph, h2: Hypergraph,
                         max_nodes: int = DEFAULT_MAX_NODES,
                         max_edges: int = DEFAULT_MAX_EDGES,
                         max_arity: int = DEFAULT_MAX_ARITY) -> bool:
    """Does any (not necessarily greedy) capture strategy win?

    Exhaustive backward induction over positions (cops, component), where
    the cop set ranges over arbitrary subsets of squad-edge-and-frontier
    intersections.  Exponential in arity; the ceilings keep it at desk
    scale.
    """
    if h1.names != h2.names:
        raise InputError("the two hypergraphs must share a node universe")
    _check_ceilings(h1, h2, max_nodes, max_edges, max_arity)

    # Expand the reachable position graph.  AND nodes are (position, move)
    # pairs; a position wins when some move has all its options winning.
    moves: dict = {}          # position -> list of tuples of successor keys
    initial = [(0, c) for c in components(h1, 0)]
    stack = list(initial)
    while stack:
        state = stack.pop()
        if state in moves:
            continue
        m_p, c_p = state
        fr = frontier(h1, c_p)
        out = []
        seen_opts = set()
        for e in h2.edges:
            base = e & fr
            for m_r in _submasks_desc(base):
                k = component_of(h1, m_p & m_r, c_p)
                opts = tuple(c for c in components(h1, m_r) if c & k)
                key = (m_r, opts)
                if key in seen_opts:
                    continue
                seen_opts.add(key)
                out.append(tuple((m_r, c) for c in opts))
        moves[state] = out
        for succs in out:
            for s in succs:
                if s not in moves:
                    stack.append(s)

    # Backward propagation: a move fires when its unmet-option count hits
    # zero; cycles never fire and therefore lose.
    pending: dict = {}
    watchers: dict = {}
    winning: set = set()
    queue = []
    for state, outs in moves.items():
        for mi, succs in enumerate(outs):
            if not succs:
                if state not in winning:
                    winning.add(state)
                    queue.append(state)
                continue
            pending[(state, mi)] = len(set(succs))
            for s in set(succs):
                watchers.setdefault(s, []).append((state, mi))
    while queue:
        won = queue.pop()
        for state, mi in watchers.get(won, ()):
            if state in winning:
                continue
            pending[(state, mi)] -= 1
            if pending[(state, mi)] == 0:
                winning.add(state)
                queue.append(state)
    return all(s in winning for s in initial)


def tp_exists_coversearch(h1: Hypergraph, h2: Hypergraph,
                          max_nodes: int = DEFAULT_MAX_NODES,
                          max_edges: int = DEFAULT_MAX_EDGES,
                          max_arity: int = DEFAULT_MAX_ARITY) -> bool:
    """Second, game-free projection-existence oracle.

    Searches for an acyclic sandwich directly: a component C is coverable
    if some candidate bag (a subedge of H2) seals its border, touches it,
    stays on its frontier, and leaves only coverable sub-components.  Bags
    are exactly the edge sets a normal-form candidate hypergraph could use,
    so this enumerates candidate decompositions with memoization instead of
    materializing edge subsets.
    """
    if h1.names != h2.names:
        raise InputError("the two hypergraphs must share a node universe")
    _check_ceilings(h1, h2, max_nodes, max_edges, max_arity)
    bags: set[NodeSet] = set()
    for e in h2.edges:
        for sub in _submasks_desc(e):
            if sub:
                bags.add(sub)
    bag_list = sorted(bags, key=lambda b: (-b.bit_count(), b))
    memo: dict[NodeSet, bool] = {}

    def solve(c: NodeSet) -> bool:
        got = memo.get(c)
        if got is not None:
            return got
        memo[c] = False  # occurs-check value; cycles are impossible anyway
        bd = border(h1, c)
        fr = bd | c
        ok = False
        for b in bag_list:
            if bd & ~b or b & ~fr or not b & c:
                continue
            for child in components(h1, b):
                if not child & c:
                    continue
                assert not child & ~c
                if not solve(child):
                    break
            else:
                ok = True
                break
        memo[c] = ok
        return ok

    return all(solve(c) for c in components(h1, 0))


def ghw_bruteforce(h: Hypergraph, kmax: int,
                   max_nodes: int = DEFAULT_MAX_NODES,
                   max_edges: int = DEFAULT_MAX_EDGES,
                   max_arity: int = DEFAULT_MAX_ARITY) -> Optional[int]:
    """Exact generalized hypertree width by projection search against the
    k-union families; None when it exceeds kmax."""
    if h.n_edges == 0:
        return 0
    _check_ceilings(h, h, max_nodes, max_edges, max_arity)
    for k in range(1, kmax + 1):
        views = power_hypergraph(h, k, budget_edges=10**6)
        # ceilings apply to the base instance; the derived family is bounded
        # by 2^nodes distinct bags either way
        if tp_exists_coversearch(h, views, max_nodes, views.n_edges,
                                 h.n_nodes):
            return k
    return None


def tw_bruteforce(h: Hypergraph, max_nodes: int = 14) -> int:
    """Exact treewidth of the Gaifman graph by the subset dynamic program
    over elimination prefixes (exponential in nodes, so capped)."""
    g = gaifman(h)
    n = len(g)
    if n > max_nodes:
        raise BudgetError("treewidth search over %d nodes exceeds the "
                          "%d-node ceiling" % (n, max_nodes))
    if n == 0:
        return -1

    def q_size(s: int, v: int) -> int:
        # vertices outside s+{v} reachable from v through s
        seen = 1 << v
        stack = [v]
        reach = 0
        while stack:
            u = stack.pop()
            for w in iter_bits(g[u]):
                b = 1 << w
                if seen & b:
                    continue
                seen |= b
                if (s >> w) & 1:
                    stack.append(w)
                else:
                    reach += 1
        return reach

    @lru_cache(maxsize=None)
    def dp(s: int) -> int:
        if s == 0:
            return -1
        return min(max(dp(s & ~(1 << v)), q_size(s & ~(1 << v), v))
                   for v in iter_bits(s))

    try:
        return dp((1 << n) - 1)
    finally:
        dp.cache_clear()


def naive_join(q: ConjunctiveQuery, db: Database,
               budget_rows: int = 5_000_000) -> Rows:
    """Ground-truth answers: left-to-right pairwise joins, then project to
    the head variables (in head order)."""
    if not _constant_filters_hold(q, db):
        return set()
    vs: tuple = ()
    rows: Rows = {()}
    for a in q.atoms:
        if not a.variables():
            continue
        bv, br = _bind_atom(a, db)
        vs, rows = _join(vs, rows, bv, br, budget_rows)
    return {tuple(t[vs.index(hv)] for hv in q.head_vars) for t in rows}


# -- instance generation ------------------------------------------------------


Q0_TEXT = ("ans(A,B,C,D,E,F,G,H,I,J,K) :- r1(A,B,C), r2(A,F), r3(C,D), "
           "r4(D,E,F), r5(E,F,G), r6(G,H,I), r7(I,J), r8(J,K).")


@dataclass(frozen=True)
class InstanceSpec:
    """Everything a reproducible random instance depends on."""

    seed: int
    mode: str = "power"        # power | cover | query
    nodes: int = 8
    edges: int = 6             # H1 edge-count ceiling
    max_arity: int = 3
    min_arity: int = 1
    k: int = 1                 # power mode: H2 = H^k
    edges2: int = 12           # cover mode: H2 edge-count ceiling
    max_arity2: int = 6        # cover mode: H2 arity cap
    rows: int = 50             # query mode: tuples per relation
    domain: int = 8            # query mode: distinct constants


def _random_h1(rng: random.Random, spec: InstanceSpec) -> Hypergraph:
    n = rng.randint(max(2, spec.min_arity), spec.nodes)
    e = rng.randint(1, spec.edges)
    names = tuple("v%d" % i for i in range(n))
    edges = []
    for _ in range(e):
        a = rng.randint(min(spec.min_arity, n), min(spec.max_arity, n))
        edges.append(tuple(sorted(rng.sample(range(n), a))))
    named = [("e%d" % (i + 1), tuple(names[v] for v in vs))
             for i, vs in enumerate(edges)]
    return Hypergraph.from_named_edges(named)


def generate(spec: InstanceSpec):
    """Deterministic instance from a spec: a hypergraph pair for the game
    modes, or (query, database) for end-to-end evaluation."""
    if spec.nodes < 2 or spec.edges < 1 or spec.min_arity > spec.nodes:
        raise InputError("unsatisfiable instance spec: %r" % (spec,))
    if spec.min_arity > spec.max_arity:
        raise InputError("unsatisfiable instance spec: %r" % (spec,))
    rng = random.Random(spec.seed)
    if spec.mode == "power":
        h1 = _random_h1(rng, spec)
        return h1, power_hypergraph(h1, spec.k)
    if spec.mode == "cover":
        h1 = _random_h1(rng, spec)
        cap = max(spec.max_arity2, h1.max_arity())
        # strength dials how generous the cover is, so the corpus mixes
        # trivial wins, hard wins and genuine losses
        strength = rng.random()
        covers: list[int] = []
        for e in h1.edges:
            grown = [i for i, c in enumerate(covers)
                     if (c | e).bit_count() <= cap]
            if covers and grown and rng.random() < strength:
                i = rng.choice(grown)
                covers[i] |= e
            else:
                covers.append(e)
        extra = rng.randint(0, max(0, spec.edges2 - len(covers)))
        nodes = list(range(h1.n_nodes))
        for _ in range(extra):
            if rng.random() > strength:
                continue
            a = rng.randint(1, min(cap, h1.n_nodes))
            m = 0
            for v in rng.sample(nodes, a):
                m |= 1 << v
            covers.append(m)
        # pad covers with a sprinkle of extra nodes, capped
        for i, c in enumerate(covers):
            room = cap - c.bit_count()
            if room > 0 and rng.random() < strength / 2:
                pool = [v for v in nodes if not (c >> v) & 1]
                for v in rng.sample(pool, min(room, len(pool),
                                              rng.randint(1, 2))):
                    c |= 1 << v
                covers[i] = c
        dedup = sorted(set(covers))
        h2 = Hypergraph.from_masks(h1, tuple(dedup), "c")
        return h1, h2
    if spec.mode == "query":
        q = parse_query(Q0_TEXT)
        db: Database = {}
        for a in q.atoms:
            rel = Relation(a.rel, len(a.terms))
            count = rng.randint(1, spec.rows)
            for _ in range(count):
                rel.rows.add(tuple(str(rng.randrange(spec.domain))
                                   for _ in a.terms))
            db[a.rel] = rel
        return q, db
    raise InputError("unknown generation mode %r" % spec.mode)
