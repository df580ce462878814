"""Rewriting winning strategies into monotone ones, and reading off the
acyclic cover that proves the pair admits one.

A move is monotone when the robber cannot win back territory.  The rewrite
walks the component graph leaves-to-root; at a node whose move lets the robber
escape, the cops forming the escape door are simply never placed by the
parent, which enlarges the node's component so that the formerly escaping
options are swallowed.  Each step is local (one parent arc), checked
immediately, and the whole pass terminates within nodes x max-in-degree
steps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from .errors import ValidationError
from .game import (
    CgNode,
    ComponentGraph,
    is_monotone,
    robber_options,
    validate_component_graph,
)
from .hypergraph import (
    Hypergraph,
    JoinTree,
    NodeSet,
    border,
    component_of,
    components,
    format_hypergraph,
    frontier,
    join_tree,
    join_tree_valid,
    leq,
)

log = logging.getLogger(__name__)


def escape_door(h1: Hypergraph, m_r: NodeSet, c_r: NodeSet,
                m_s: NodeSet) -> NodeSet:
    """Cops from the placement *m_r* that the robber in *c_r* can reclaim when
    the next placement is *m_s*: m_r int Fr(c_r) minus m_s.

    Requires c_r to be an [m_r]-component; the result equals
    border(c_r) minus m_s, and the move to *m_s* is monotone iff it is empty.
    """
    if not c_r or c_r & m_r or component_of(h1, m_r, c_r & -c_r) != c_r:
        raise ValueError("c_r must be an [m_r]-component")
    return m_r & frontier(h1, c_r) & ~m_s


def _copy_graph(g: ComponentGraph) -> ComponentGraph:
    nodes = {
        i: CgNode(n.ident, n.squad, n.comp, n.move_squad, n.move_cops,
                  list(n.children), list(n.parents))
        for i, n in g.nodes.items()
    }
    return ComponentGraph(g.h1, g.h2, nodes, list(g.roots), list(g.seq),
                          next_id=max(nodes, default=-1) + 1)


def _gc(cg: ComponentGraph, seeds: list[int]) -> list[int]:
    """Drop nodes left without parents (roots excluded), cascading."""
    removed = []
    stack = [i for i in seeds if i in cg.nodes]
    roots = set(cg.roots)
    while stack:
        i = stack.pop()
        n = cg.nodes.get(i)
        if n is None or i in roots or n.parents:
            continue
        for ch in n.children:
            child = cg.nodes.get(ch)
            if child is not None:
                child.parents.remove(i)
                stack.append(ch)
        del cg.nodes[i]
        removed.append(i)
    if removed:
        gone = set(removed)
        cg.seq = [i for i in cg.seq if i not in gone]
    return removed


def monotonize(g: ComponentGraph, h1: Hypergraph, h2: Hypergraph,
               check_steps: bool = True,
               trace: Optional[list[str]] = None) -> ComponentGraph:
    """Turn a valid winning component graph into a monotone one.

    Processes the topological sequence leaves first.  On reaching a node whose
    move has an escaping option, one parent (the earliest in the sequence) is
    rewritten: its cop set loses the escape door, the node is replaced for
    that parent by a fresh node with the enlarged component and the same
    attack, and orphaned nodes are collected.  The node is then reconsidered
    for its remaining parents.  With ``check_steps`` every step re-validates
    the local option algebra and the whole graph.

    The input graph is not modified.
    """
    probs = validate_component_graph(g)
    if probs:
        raise ValidationError("monotonize: invalid input graph: " + probs[0])
    cg = _copy_graph(g)
    budget = len(cg.nodes) * max(
        (len(n.parents) for n in cg.nodes.values()), default=1)
    budget = max(budget, 1)
    rewrites = 0
    j = 0
    while j < len(cg.seq):
        v = cg.nodes[cg.seq[j]]
        bad = [ch for ch in v.children if cg.nodes[ch].comp & ~v.comp]
        if v.is_capture or not bad:
            j += 1
            continue
        rewrites += 1
        if rewrites > budget:
            raise ValidationError(
                "monotonize: exceeded the %d-step rewrite budget" % budget)
        if v.squad is None:
            raise ValidationError("monotonize: the root cannot escape")
        # the move played at v, and the door its options escape through
        m_s = v.move_cops
        door = border(h1, v.comp) & ~m_s
        # the offending child with the smallest representative, for the trace
        v_s = min(bad, key=lambda ch: cg.nodes[ch].comp & -cg.nodes[ch].comp)
        pos = {ident: k for k, ident in enumerate(cg.seq)}
        p = cg.nodes[min(v.parents, key=pos.__getitem__)]
        if p.move_squad != v.squad:
            raise ValidationError("monotonize: parent move squad mismatch")
        m_new = p.move_cops & ~door
        c_new = component_of(h1, m_new, v.comp)
        if trace is not None:
            trace.append(
                "rewrite %d: node %d %s escape door %s (child %d) via parent "
                "%d: cops %s -> %s" %
                (rewrites, v.ident, cg.fmt_node(v), cg._fmt_set(door), v_s,
                 p.ident, cg._fmt_set(p.move_cops), cg._fmt_set(m_new)))
        if not door or c_new == v.comp:
            raise ValidationError("monotonize: rewrite made no progress")
        # fresh replacement node with the enlarged component, same attack
        v2 = cg.new_node(v.squad, c_new)
        v2.move_squad, v2.move_cops = v.move_squad, v.move_cops
        v2.children = list(v.children)
        for ch in v2.children:
            cg.nodes[ch].parents.append(v2.ident)
        # rewire the parent under its reduced cop set
        opts = robber_options(h1, p.comp, border(h1, p.comp) & m_new, m_new)
        if not opts:
            raise ValidationError("monotonize: options vanished at the parent")
        old_children = list(p.children)
        by_comp = {cg.nodes[ch].comp: ch for ch in old_children}
        new_children = []
        for c_r in opts:
            if c_r == c_new:
                new_children.append(v2.ident)
            elif c_r in by_comp:
                new_children.append(by_comp[c_r])
            else:
                raise ValidationError(
                    "monotonize: unexpected fresh option at the parent")
        p.move_cops = m_new
        p.children = new_children
        v2.parents = [p.ident]
        dropped = [ch for ch in old_children if ch not in new_children]
        for ch in dropped:
            cg.nodes[ch].parents.remove(p.ident)
        # splice the new node right before v, then let the loop reconsider
        # v (for its other parents) or garbage-collect it
        cg.seq.insert(j, v2.ident)
        _gc(cg, dropped)
        if check_steps:
            _check_step(cg, h1, v, m_s, by_comp, opts, c_new)
    out_probs = validate_component_graph(cg)
    if out_probs:
        raise ValidationError("monotonize: output invalid: " + out_probs[0])
    if not is_monotone(cg):
        raise ValidationError("monotonize: output is not monotone")
    cg.rewrites = rewrites
    if trace is not None:
        trace.append("rewrites: %d (budget %d)" % (rewrites, budget))
    return cg


def _check_step(cg, h1, v, m_s, by_comp, opts, c_new):
    """The per-rewrite sanity battery; every failure is an engine bug.

    (1) the replacement's own move has an empty escape door;
    (2) every old option of the parent is swallowed by the new component or
        survives as an option;
    (3) every surviving option except the new component was already there;
    (4) the replacement answers the robber exactly like the node it replaces;
    (5) the whole graph still validates.
    """
    if border(h1, c_new) & ~m_s:
        raise ValidationError("step check (1): replacement still leaks")
    for comp, ch in by_comp.items():
        if comp & ~c_new and comp not in opts:
            raise ValidationError("step check (2): old option lost")
    for c_r in opts:
        if c_r != c_new and c_r not in by_comp:
            raise ValidationError("step check (3): option appeared from nowhere")
    if robber_options(h1, c_new, border(h1, c_new) & m_s, m_s) != \
            robber_options(h1, v.comp, border(h1, v.comp) & m_s, m_s):
        raise ValidationError("step check (4): replacement answers differ")
    probs = validate_component_graph(cg)
    if probs:
        raise ValidationError("step check (5): " + probs[0])


# -- tree projections ---------------------------------------------------------


@dataclass
class TreeProjection:
    """An acyclic hypergraph sandwiched between the pair, with its join tree
    and both coverage witnesses."""

    ha: Hypergraph
    jt: JoinTree
    lower: tuple[int, ...]  # h1 edge -> covering ha edge
    upper: tuple[int, ...]  # ha edge -> covering h2 edge

    def serialize(self) -> str:
        out = [format_hypergraph(self.ha).rstrip("\n"), "",
               "# join tree (child parent)"]
        for e, par in enumerate(self.jt.parent):
            if par is not None:
                out.append("%s %s" % (self.ha.edge_names[e],
                                      self.ha.edge_names[par]))
        return "\n".join(out) + "\n"


def extract_tree_projection(g: ComponentGraph, h1: Hypergraph,
                            h2: Hypergraph) -> TreeProjection:
    """Read the acyclic cover off a monotone winning component graph.

    Its edges are all cop sets the strategy ever stands: each node's attack
    placement plus, for non-root nodes, the border the cops retract to first.
    Empty sets are dropped and duplicates merged.  The join tree is rebuilt
    from the cover by reduction rather than lifted from the strategy arcs
    (nodes shared between branches make the arcs a DAG, not a tree).
    """
    probs = validate_component_graph(g)
    if probs:
        raise ValidationError("extract: invalid component graph: " + probs[0])
    if not is_monotone(g):
        raise ValidationError("extract: graph is not monotone")
    masks: list[NodeSet] = []
    seen: set[NodeSet] = set()
    root_set = set(g.roots)
    for i in sorted(g.nodes):
        n = g.nodes[i]
        if n.is_capture:
            continue
        sets = [n.move_cops]
        if i not in root_set:
            sets.append(border(g.h1, n.comp))
        for m in sets:
            if m and m not in seen:
                seen.add(m)
                masks.append(m)
    ha = Hypergraph.from_masks(h1, tuple(masks), "m")
    lower = leq(h1, ha)
    if lower is None:
        raise ValidationError("extract: cover misses an edge of H1")
    upper = leq(ha, h2)
    if upper is None:
        raise ValidationError("extract: a cop set escapes every H2 edge")
    jt = join_tree(ha)
    if jt is None:
        raise ValidationError("extract: monotone strategy gave a cyclic cover")
    tp = TreeProjection(ha, jt, lower, upper)
    ok, diags = validate_tree_projection(tp, h1, h2)
    if not ok:
        raise ValidationError("extract: " + diags[0])
    return tp


def validate_tree_projection(tp: TreeProjection, h1: Hypergraph,
                             h2: Hypergraph) -> tuple[bool, list[str]]:
    """Re-check a tree projection from first principles.

    Returns (ok, diagnostics); diagnostics name every violated condition:
    acyclicity, the join tree's shape and connectedness, both sandwich
    inclusions, and that the stored witnesses actually witness them.
    """
    diags: list[str] = []
    ha = tp.ha
    if join_tree(ha) is None:
        diags.append("cover hypergraph is cyclic")
    if not join_tree_valid(ha, tp.jt):
        diags.append("join tree fails the connectedness condition")
    if h1.names != ha.names or ha.names != h2.names:
        diags.append("node universes differ")
        return False, diags
    if len(tp.lower) != h1.n_edges:
        diags.append("lower witness has wrong length")
    else:
        for i, j in enumerate(tp.lower):
            if not 0 <= j < ha.n_edges or h1.edges[i] & ~ha.edges[j]:
                diags.append("edge %s not covered by its witness"
                             % h1.edge_names[i])
                break
    if len(tp.upper) != ha.n_edges:
        diags.append("upper witness has wrong length")
    else:
        for i, j in enumerate(tp.upper):
            if not 0 <= j < h2.n_edges or ha.edges[i] & ~h2.edges[j]:
                diags.append("cover edge %s not inside its witness"
                             % ha.edge_names[i])
                break
    return not diags, diags
