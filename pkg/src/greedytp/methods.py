"""Width notions as capture games against derived view hypergraphs.

All four deciders reduce to the same engine against a different opponent
hypergraph: unions of up to k edges for the hypertree family, all small node
sets for treewidth, and the subset closure when exactness over arbitrary
covers is needed.  Derived edges carry provenance (which base edges they were
assembled from) so certificates can report cover labels.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import BudgetError
from .game import (
    component_graph,
    extract_strategy,
    greedy_wins,
    make_nice,
    marshal_monotone_wins,
)
from .hypergraph import Hypergraph, NodeSet
from .monotonize import TreeProjection, extract_tree_projection, monotonize

log = logging.getLogger(__name__)

DEFAULT_EDGE_BUDGET = 10**6


def _submasks(mask: NodeSet):
    """All non-empty submasks of mask (descending; deterministic)."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def power_hypergraph(h: Hypergraph, k: int,
                     budget_edges: int = DEFAULT_EDGE_BUDGET) -> Hypergraph:
    """Unions of up to k edges of *h*, deduplicated, same universe.

    Provenance records the sorted base-edge index tuple of each union; on a
    duplicate union the first (lexicographically smallest) tuple is kept.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    total = sum(math.comb(h.n_edges, i) for i in range(1, k + 1))
    if total > budget_edges:
        raise BudgetError("power hypergraph would enumerate %d unions "
                          "(budget %d)" % (total, budget_edges))
    masks: list[NodeSet] = []
    prov: list[tuple[int, ...]] = []
    seen: dict[NodeSet, int] = {}
    for r in range(1, k + 1):
        for comb in itertools.combinations(range(h.n_edges), r):
            u = 0
            for i in comb:
                u |= h.edges[i]
            if u not in seen:
                seen[u] = len(masks)
                masks.append(u)
                prov.append(comb)
    return Hypergraph.from_masks(h, tuple(masks), "u", tuple(prov))


def tk_hypergraph(h: Hypergraph, k: int,
                  budget_edges: int = DEFAULT_EDGE_BUDGET) -> Hypergraph:
    """Every non-empty node set of size at most k+1, as an edge."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = h.n_nodes
    total = sum(math.comb(n, i) for i in range(1, min(k + 1, n) + 1))
    if total > budget_edges:
        raise BudgetError("tk hypergraph would enumerate %d node sets "
                          "(budget %d)" % (total, budget_edges))
    masks = []
    for r in range(1, min(k + 1, n) + 1):
        for comb in itertools.combinations(range(n), r):
            m = 0
            for v in comb:
                m |= 1 << v
            masks.append(m)
    return Hypergraph.from_masks(h, tuple(masks), "t")


def simplicial(h: Hypergraph,
               budget_edges: int = DEFAULT_EDGE_BUDGET) -> Hypergraph:
    """All non-empty subsets of every edge, deduplicated.

    Keeps the provenance of the first edge contributing each subset (the
    base combination when *h* itself is derived), so certificates built
    against the closure still resolve to base edges.
    """
    total = sum((1 << e.bit_count()) - 1 for e in h.edges)
    if total > budget_edges:
        raise BudgetError("subset closure would enumerate %d subedges "
                          "(budget %d)" % (total, budget_edges))
    masks: list[NodeSet] = []
    prov: list[tuple[int, ...]] = []
    seen: set[NodeSet] = set()
    for j, e in enumerate(h.edges):
        source = h.provenance[j] if h.provenance else (j,)
        for sub in sorted(_submasks(e), reverse=True):
            if sub not in seen:
                seen.add(sub)
                masks.append(sub)
                prov.append(source)
    return Hypergraph.from_masks(h, tuple(masks), "s", tuple(prov))


def subedge_views(h: Hypergraph, k: int,
                  subedges_of: Optional[Callable[[Hypergraph], Iterable[NodeSet]]] = None,
                  budget_edges: int = DEFAULT_EDGE_BUDGET) -> Hypergraph:
    """The generic view family: H^k plus a method-specific set of subedges.

    ``subedges_of`` receives H^k and returns extra edge masks, each of which
    must be a subset of some H^k edge; None means no extras.  The two shipped
    generators are None (plain hypertree-style views) and ``all_subedges``
    (the full closure, giving exact generalized-hypertree decisions).
    """
    power = power_hypergraph(h, k, budget_edges)
    if subedges_of is None:
        return power
    masks = list(power.edges)
    prov = list(power.provenance)
    seen = set(masks)
    for m in subedges_of(power):
        if not m or m in seen:
            continue
        for j, e in enumerate(power.edges):
            if not m & ~e:
                break
        else:
            raise ValueError("generator returned a non-subedge")
        seen.add(m)
        masks.append(m)
        prov.append(power.provenance[j])
        if len(masks) > budget_edges:
            raise BudgetError("view family exceeded the %d-edge budget"
                              % budget_edges)
    return Hypergraph.from_masks(h, tuple(masks), "s", tuple(prov))


def all_subedges(power: Hypergraph) -> Iterable[NodeSet]:
    """Subedge generator for ``subedge_views``: every subset of every edge."""
    total = sum((1 << e.bit_count()) - 1 for e in power.edges)
    if total > DEFAULT_EDGE_BUDGET:
        raise BudgetError("subset closure would enumerate %d subedges" % total)
    out = []
    seen: set[NodeSet] = set()
    for e in power.edges:
        for sub in sorted(_submasks(e), reverse=True):
            if sub not in seen:
                seen.add(sub)
                out.append(sub)
    return out


# -- decisions ----------------------------------------------------------------


def certificate_for(h1: Hypergraph, h2: Hypergraph, gg) -> TreeProjection:
    """Extract, normalize, monotonize and read off the projection."""
    sg = make_nice(extract_strategy(gg))
    cg = component_graph(sg)
    mono = monotonize(cg, h1, h2)
    return extract_tree_projection(mono, h1, h2)


def hw_decide(h: Hypergraph, k: int,
              budget_edges: int = DEFAULT_EDGE_BUDGET
              ) -> tuple[bool, Optional[TreeProjection]]:
    """Hypertree width at most k?  Monotone game against the k-unions."""
    views = power_hypergraph(h, k, budget_edges)
    won, gg = marshal_monotone_wins(h, views)
    if not won:
        return False, None
    return True, certificate_for(h, views, gg)


def greedy_hw_decide(h: Hypergraph, k: int,
                     budget_edges: int = DEFAULT_EDGE_BUDGET
                     ) -> tuple[bool, Optional[TreeProjection]]:
    """Greedy hypertree width at most k?  Free game against the k-unions."""
    views = power_hypergraph(h, k, budget_edges)
    won, gg = greedy_wins(h, views)
    if not won:
        return False, None
    return True, certificate_for(h, views, gg)


def ghw_decide_fpt(h: Hypergraph, k: int,
                   budget_edges: int = DEFAULT_EDGE_BUDGET
                   ) -> tuple[bool, Optional[TreeProjection]]:
    """Generalized hypertree width at most k, exactly.

    Greedy play against the subset closure of the k-unions loses nothing:
    any cover by subsets of k-unions can be mimicked move for move, at the
    price of the closure's 2^arity edge count (fixed-parameter, not
    polynomial).
    """
    views = subedge_views(h, k, all_subedges, budget_edges)
    won, gg = greedy_wins(h, views)
    if not won:
        return False, None
    return True, certificate_for(h, views, gg)


def tw_decide(h: Hypergraph, k: int,
              budget_edges: int = DEFAULT_EDGE_BUDGET
              ) -> tuple[bool, Optional[TreeProjection]]:
    """Treewidth at most k?  Game against all node sets of size k+1.

    The bag family is closed under subsets, so greedy play is exact here.
    """
    views = tk_hypergraph(h, k, budget_edges)
    won, gg = greedy_wins(h, views)
    if not won:
        return False, None
    return True, certificate_for(h, views, gg)


_METHODS: dict[str, tuple[Callable, int]] = {
    # name -> (decide(h, k, budget) -> (bool, tp), smallest sensible k)
    "grhw": (greedy_hw_decide, 1),
    "ghw": (ghw_decide_fpt, 1),
    "hw": (hw_decide, 1),
    "tw": (tw_decide, 0),
}


@dataclass
class WidthReport:
    """Outcome of a width search: the first k that works, with evidence."""

    method: str
    kmax: int
    width: Optional[int]  # None: every k up to kmax failed
    certificate: Optional[TreeProjection]
    decisions: list[tuple[int, bool]] = field(default_factory=list)
    seconds: float = 0.0
    _views: Optional[Hypergraph] = field(default=None, repr=False)
    _base: Optional[Hypergraph] = field(default=None, repr=False)

    def cover_labels(self) -> list[str]:
        """Human-readable cover of each certificate edge by base edges."""
        if (self.certificate is None or self._views is None
                or self._views.provenance is None):
            return []
        tp = self.certificate
        out = []
        for i, name in enumerate(tp.ha.edge_names):
            combo = self._views.provenance[tp.upper[i]]
            label = "+".join(self._base.edge_names[b] for b in combo)
            out.append("%s <= %s" % (name, label))
        return out

    def to_text(self, timings: bool = False) -> str:
        lines = ["%s = %s" % (self.method,
                              self.width if self.width is not None
                              else "exceeds kmax=%d" % self.kmax)]
        for k, won in self.decisions:
            lines.append("  k=%d: %s" % (k, "yes" if won else "no"))
        for lab in self.cover_labels():
            lines.append("  " + lab)
        if timings:  # off by default so repeated runs are byte-identical
            lines.append("  %.3fs" % self.seconds)
        return "\n".join(lines)

    def to_json_dict(self, timings: bool = False) -> dict:
        doc = {
            "method": self.method,
            "kmax": self.kmax,
            "width": self.width,
            "decisions": [{"k": k, "holds": won} for k, won in self.decisions],
        }
        if timings:
            doc["seconds"] = round(self.seconds, 3)
        if self.certificate is not None:
            doc["cover"] = self.certificate.serialize()
            doc["cover_labels"] = self.cover_labels()
        return doc


def width_search(h: Hypergraph, method: str, kmax: int,
                 budget_edges: int = DEFAULT_EDGE_BUDGET) -> WidthReport:
    """Smallest k within kmax at which *method* succeeds on *h*.

    Decisions are monotone in k, so the linear sweep stops at the first hit.
    """
    if method not in _METHODS:
        raise ValueError("unknown method %r (choose from %s)"
                         % (method, "/".join(sorted(_METHODS))))
    decide, kmin = _METHODS[method]
    t0 = time.perf_counter()
    report = WidthReport(method, kmax, None, None)
    report._base = h
    for k in range(kmin, kmax + 1):
        won, tp = decide(h, k, budget_edges)
        report.decisions.append((k, won))
        if won:
            report.width = k
            report.certificate = tp
            if method in ("grhw", "hw"):
                report._views = power_hypergraph(h, k, budget_edges)
            elif method == "ghw":
                report._views = subedge_views(h, k, all_subedges, budget_edges)
            break
    report.seconds = time.perf_counter() - t0
    return report
