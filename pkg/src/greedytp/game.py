"""The capture game on a pair of hypergraphs, with greedy cop placement.

The Captain repeatedly picks a squad (an edge of H2) and stands cops on every
squad member inside the frontier of the robber's current component; the robber
then slips to any component reachable while only the cops common to the old
and new placement stay on the board.  Capture happens when no component is
left.  The engine decides who wins, extracts a winning strategy as an explicit
DAG, rewrites it into the "nice" form (cops retract to the border before an
attack), quotients it into the component graph consumed by the monotonizer,
and also plays the monotone-move-only variant that characterizes hypertree
width.

Implementation note: during greedy play the cop set of a configuration beyond
the border of its component never matters — the surviving-cop set M_p & M_r
always equals border(C_p) & M_r, because cops off the border are not on the
frontier at all.  Subgames therefore depend only on (component) when the squad
has left the component, and on (squad, component) when it still straddles it.
The fixpoint runs on these collapsed states, and full configurations are only
unfolded while extracting a strategy.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ValidationError
from .hypergraph import (
    Hypergraph,
    NodeSet,
    border,
    component_of,
    components,
    frontier,
    iter_bits,
)

log = logging.getLogger(__name__)

# A configuration is (squad index or None, cop mask, component mask).
# Component 0 encodes capture; squad None only occurs initially.
Config = tuple[Optional[int], NodeSet, NodeSet]

# Collapsed state keys: ("f", comp) when the squad is clear of the component,
# ("o", squad, comp) when the squad still occupies part of it ("owned" squad is
# forced to move again), ("c", squad, cops) for captures.
StateKey = tuple


def greedy_bound(h1: Hypergraph, h2: Hypergraph) -> int:
    """Ceiling on the number of configurations a greedy strategy can reach."""
    base = h2.n_edges * h1.n_nodes
    return base * (base + 1) + 1


def robber_options(h1: Hypergraph, c: NodeSet, connect: NodeSet,
                   m_move: NodeSet) -> tuple[NodeSet, ...]:
    """The components the robber may choose after a move with cops *m_move*,
    given that only the cops in *connect* stood their ground during the move.

    These are the [m_move]-components lying inside the [connect]-component
    around *c* (the robber travels while just *connect* blocks the way).
    """
    k = component_of(h1, connect, c)
    return tuple(cr for cr in components(h1, m_move) if cr & k)


@dataclass(frozen=True)
class Arc:
    """An and-node: one candidate move and all robber answers to it."""

    squad: int
    cops: NodeSet
    succs: tuple[StateKey, ...]


@dataclass
class GameGraph:
    """The explored AND/OR graph of collapsed states plus the win marking.

    ``rank[key]`` is the backward-marking round at which *key* was marked won
    (captures are round 0); unmarked states are lost — cycles of the play
    never get marked, which is exactly the losing condition.
    """

    h1: Hypergraph
    h2: Hypergraph
    mode: str  # "greedy" or "marshal"
    initial: tuple[StateKey, ...]
    arcs: dict[StateKey, tuple[Arc, ...]]
    rank: dict[StateKey, int]

    @property
    def won(self) -> bool:
        return all(k in self.rank for k in self.initial)

    @property
    def n_states(self) -> int:
        return len(self.arcs)

    @property
    def n_moves(self) -> int:
        return sum(len(a) for a in self.arcs.values())


def _decide(h1: Hypergraph, h2: Hypergraph, monotone_only: bool) -> GameGraph:
    if h1.names != h2.names:
        raise ValueError("both hypergraphs must share one node universe "
                         "(use Hypergraph.reindexed to align them)")
    parts = components(h1, 0)
    initial = tuple(("f", p) for p in parts)
    arcs: dict[StateKey, tuple[Arc, ...]] = {}
    queue = deque(initial)
    while queue:
        key = queue.popleft()
        if key in arcs:
            continue
        if key[0] == "c":
            arcs[key] = ()
            continue
        if key[0] == "f":
            c = key[1]
            squads: Iterable[int] = range(h2.n_edges)
        else:
            c = key[2]
            squads = (key[1],)
        bdr = border(h1, c)
        fr = bdr | c
        out = []
        for s in squads:
            edge = h2.edges[s]
            if monotone_only and bdr & ~edge:
                # some border cop would be missing from the new placement, so
                # the robber could escape through it: not a monotone move
                continue
            m = edge & fr
            opts = robber_options(h1, c, bdr & m, m)
            if opts:
                succs = tuple(
                    ("o", s, cr) if edge & cr else ("f", cr) for cr in opts
                )
                if monotone_only:
                    for t in succs:
                        if t[0] == "o":
                            raise AssertionError(
                                "monotone move left the squad inside an option")
            else:
                succs = (("c", s, m),)
            out.append(Arc(s, m, succs))
            for t in succs:
                if t not in arcs:
                    queue.append(t)
        arcs[key] = tuple(out)

    # Backward marking: captures seed the won set; an and-arc completes once
    # every successor is won; a state is won when its first arc completes.
    parents: dict[StateKey, list[tuple[StateKey, int]]] = defaultdict(list)
    pending: dict[tuple[StateKey, int], int] = {}
    for key, arc_list in arcs.items():
        for i, arc in enumerate(arc_list):
            pending[(key, i)] = len(arc.succs)
            for t in arc.succs:
                parents[t].append((key, i))
    rank: dict[StateKey, int] = {}
    wave = [k for k in arcs if k[0] == "c"]
    for k in wave:
        rank[k] = 0
    rnd = 0
    while wave:
        nxt = []
        for k in wave:
            for p, i in parents[k]:
                pending[(p, i)] -= 1
                if pending[(p, i)] == 0 and p not in rank:
                    rank[p] = rnd + 1
                    nxt.append(p)
        wave = nxt
        rnd += 1
    gg = GameGraph(h1, h2, "marshal" if monotone_only else "greedy",
                   initial, arcs, rank)
    log.debug("%s game: %d states, %d moves, won=%s",
              gg.mode, gg.n_states, gg.n_moves, gg.won)
    return gg


def greedy_wins(h1: Hypergraph, h2: Hypergraph) -> tuple[bool, GameGraph]:
    """Decide the greedy capture game on (h1, h2).

    True iff the Captain can force capture from the initial configuration of
    every connected part of h1.
    """
    gg = _decide(h1, h2, monotone_only=False)
    return gg.won, gg


def marshal_monotone_wins(h1: Hypergraph, h2: Hypergraph) -> tuple[bool, GameGraph]:
    """Decide the game restricted to monotone moves (robber space only ever
    shrinks).  This is the classic single-marshal view of hypertree width."""
    gg = _decide(h1, h2, monotone_only=True)
    return gg.won, gg


# -- strategies ---------------------------------------------------------------


@dataclass
class StrategyGraph:
    """A chosen winning strategy, unfolded to full configurations.

    ``nodes`` maps each configuration to its move ``(squad, cops, successor
    configurations)``; capture configurations map to None.  Insertion order is
    the discovery BFS order, so serialization is deterministic.
    """

    h1: Hypergraph
    h2: Hypergraph
    initial: tuple[Config, ...]
    nodes: dict[Config, Optional[tuple[int, NodeSet, tuple[Config, ...]]]]

    @property
    def n_configs(self) -> int:
        return len(self.nodes)

    def _fmt_set(self, mask: NodeSet) -> str:
        return "{%s}" % ",".join(self.h1.names_of(mask))

    def _fmt_config(self, cfg: Config) -> str:
        sq, m, c = cfg
        squad = "-" if sq is None else self.h2.edge_names[sq]
        comp = "CAPTURE" if c == 0 else self._fmt_set(c)
        return "(%s, %s, %s)" % (squad, self._fmt_set(m), comp)

    def trace_lines(self) -> list[str]:
        """One line per configuration and per arc, in discovery order."""
        idx = {cfg: i for i, cfg in enumerate(self.nodes)}
        out = []
        for cfg, move in self.nodes.items():
            if move is None:
                out.append("config %d %s" % (idx[cfg], self._fmt_config(cfg)))
                continue
            s, m, succs = move
            out.append("config %d %s move (%s, %s)"
                       % (idx[cfg], self._fmt_config(cfg),
                          self.h2.edge_names[s], self._fmt_set(m)))
            for t in succs:
                out.append("arc %d -> %d" % (idx[cfg], idx[t]))
        return out

    def to_dot(self, title: str = "strategy") -> str:
        idx = {cfg: i for i, cfg in enumerate(self.nodes)}
        lines = ["digraph \"%s\" {" % title, "  rankdir=TB;"]
        for cfg, move in self.nodes.items():
            shape = "doublecircle" if move is None else "box"
            lines.append("  n%d [shape=%s,label=\"%s\"];"
                         % (idx[cfg], shape, self._fmt_config(cfg)))
        for cfg, move in self.nodes.items():
            if move is None:
                continue
            s, m, succs = move
            lab = "%s %s" % (self.h2.edge_names[s], self._fmt_set(m))
            for t in succs:
                lines.append("  n%d -> n%d [label=\"%s\"];"
                             % (idx[cfg], idx[t], lab))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _state_key(h2: Hypergraph, sq: Optional[int], c: NodeSet) -> StateKey:
    if sq is not None and h2.edges[sq] & c:
        return ("o", sq, c)
    return ("f", c)


def extract_strategy(gg: GameGraph) -> Optional[StrategyGraph]:
    """Pick one winning move per state and unfold to configurations.

    Returns None when the game is lost.  Among an or-state's winning arcs the
    pick minimizes the worst successor rank first and the squad index second:
    rank descent is what makes the unfolded graph provably acyclic (an arc
    whose successors are all marked may still loop back; the arc that caused
    the marking cannot), the squad index is just a deterministic tie-break.
    """
    if not gg.won:
        return None
    h1, h2 = gg.h1, gg.h2
    rank = gg.rank
    choice: dict[StateKey, Arc] = {}

    def arc_for(key: StateKey) -> Arc:
        got = choice.get(key)
        if got is None:
            best = None
            for arc in gg.arcs[key]:
                if all(t in rank for t in arc.succs):
                    score = (max(rank[t] for t in arc.succs), arc.squad)
                    if best is None or score < best[0]:
                        best = (score, arc)
            if best is None:
                raise ValidationError("won state has no winning arc")
            got = best[1]
            choice[key] = got
        return got

    initial = tuple((None, 0, p) for p in (k[1] for k in gg.initial))
    nodes: dict[Config, Optional[tuple[int, NodeSet, tuple[Config, ...]]]] = {}
    queue = deque(initial)
    while queue:
        cfg = queue.popleft()
        if cfg in nodes:
            continue
        sq, m, c = cfg
        if c == 0:
            nodes[cfg] = None
            continue
        arc = arc_for(_state_key(h2, sq, c))
        succs = tuple(
            (arc.squad, arc.cops, 0 if t[0] == "c" else t[-1])
            for t in arc.succs
        )
        nodes[cfg] = (arc.squad, arc.cops, succs)
        for t in succs:
            if t not in nodes:
                queue.append(t)
    sg = StrategyGraph(h1, h2, initial, nodes)
    cap = greedy_bound(h1, h2)
    if sg.n_configs > cap:
        raise ValidationError("strategy has %d configurations, ceiling is %d"
                              % (sg.n_configs, cap))
    return sg


def strategy_problems(sg: StrategyGraph) -> list[str]:
    """Re-derive every invariant of a winning greedy strategy from scratch.

    Returns human-readable violations (empty list = valid).  Used by tests and
    by the trace path; intentionally recomputes options from the literal
    definition (shared cops = M_p & M_r) rather than reusing engine internals.
    """
    h1, h2 = sg.h1, sg.h2
    probs: list[str] = []
    parts = components(h1, 0)
    if sg.initial != tuple((None, 0, p) for p in parts):
        probs.append("initial configurations do not match the parts of H1")
    for cfg, move in sg.nodes.items():
        sq, m, c = cfg
        name = sg._fmt_config(cfg)
        if c == 0:
            if move is not None:
                probs.append("capture %s has a move" % name)
            if sq is None or m & ~h2.edges[sq]:
                probs.append("capture %s cops exceed squad" % name)
            continue
        if sq is None:
            if m or cfg not in sg.initial:
                probs.append("unanchored non-initial configuration %s" % name)
        else:
            if m & ~h2.edges[sq]:
                probs.append("%s: cops off squad" % name)
            if m & c:
                probs.append("%s: cops inside the component" % name)
            if component_of(h1, m, c & -c) != c:
                probs.append("%s: component not an [M]-component" % name)
        if border(h1, c) & ~m and sq is not None:
            probs.append("%s: border not fully guarded" % name)
        if move is None:
            probs.append("%s: missing move" % name)
            continue
        s, mr, succs = move
        if mr != h2.edges[s] & frontier(h1, c):
            probs.append("%s: move is not the greedy placement" % name)
        forced = sq is not None and h2.edges[sq] & c
        if forced and s != sq:
            probs.append("%s: squad switched while occupying the component" % name)
        opts = robber_options(h1, c, m & mr, mr)
        want = tuple((s, mr, cr) for cr in opts) if opts else ((s, mr, 0),)
        if succs != want:
            probs.append("%s: successor set mismatch" % name)
        if forced:
            for (s2, _, c2) in succs:
                if c2 and h2.edges[s2] & c2:
                    probs.append("%s: two occupied configurations in a row" % name)
        for t in succs:
            if t not in sg.nodes:
                probs.append("%s: dangling successor" % name)
    # acyclicity by iterative 3-color DFS
    color: dict[Config, int] = {}
    for start in sg.nodes:
        if color.get(start):
            continue
        stack = [(start, 0)]
        while stack:
            v, i = stack.pop()
            if i == 0:
                if color.get(v) == 2:
                    continue
                color[v] = 1
            move = sg.nodes[v]
            succs = move[2] if move else ()
            if i < len(succs):
                stack.append((v, i + 1))
                t = succs[i]
                st = color.get(t, 0)
                if st == 1:
                    probs.append("cycle through %s" % sg._fmt_config(t))
                elif st == 0:
                    stack.append((t, 0))
            else:
                color[v] = 2
    return probs


def make_nice(sg: StrategyGraph) -> StrategyGraph:
    """Insert the cop-retraction move in front of every attack from a
    configuration that still guards more than the border of its component.

    From (h, M, C) with border(C) properly below M and the squad h clear of C,
    the Captain first replays squad h with cops exactly border(C) — a legal
    greedy move whose only robber answer is C itself — and attacks from there.
    Configurations whose squad still occupies C are left alone: their forced
    move is the only greedy one available.
    """
    h1, h2 = sg.h1, sg.h2
    nodes: dict[Config, Optional[tuple[int, NodeSet, tuple[Config, ...]]]] = {}
    for cfg, move in sg.nodes.items():
        sq, m, c = cfg
        if move is None:
            nodes[cfg] = None
            continue
        bdr = border(h1, c)
        occupied = sq is not None and h2.edges[sq] & c
        if sq is not None and not occupied and m != bdr:
            body = (sq, bdr, c)
            nodes[cfg] = (sq, bdr, (body,))
            old = nodes.get(body)
            if old is not None and old != move:
                raise ValidationError("retraction target already has a "
                                      "different move")
            nodes[body] = move
        else:
            prev = nodes.get(cfg)
            if prev is not None and prev != move:
                raise ValidationError("conflicting moves for one configuration")
            nodes[cfg] = move
    return StrategyGraph(h1, h2, sg.initial, nodes)


# -- component graph ----------------------------------------------------------


@dataclass
class CgNode:
    """A component-graph node: (squad, component) plus the stored move.

    ``comp == 0`` marks a capture node (no move).  The move keeps its own cop
    set: the union-of-child-borders formula one might use to reconstruct it
    can drop cops that never let the robber back in but do cut his options,
    so reconstruction is only valid as a lower bound (checked in the
    validator) and the actual set travels with the node.
    """

    ident: int
    squad: Optional[int]
    comp: NodeSet
    move_squad: Optional[int] = None
    move_cops: Optional[NodeSet] = None
    children: list[int] = field(default_factory=list)
    parents: list[int] = field(default_factory=list)

    @property
    def is_capture(self) -> bool:
        return self.comp == 0


@dataclass
class ComponentGraph:
    """Quotient of a nice winning strategy by (squad, component).

    Retraction arcs collapse into their node; every non-capture node carries
    the single attack played from it.  ``seq`` is a topological order of the
    node ids with leaves first and roots last — the monotonizer's worksheet.
    """

    h1: Hypergraph
    h2: Hypergraph
    nodes: dict[int, CgNode]
    roots: list[int]
    seq: list[int]
    next_id: int = 0
    rewrites: int = 0  # filled in by the monotonizer

    def new_node(self, squad: Optional[int], comp: NodeSet) -> CgNode:
        n = CgNode(self.next_id, squad, comp)
        self.nodes[n.ident] = n
        self.next_id += 1
        return n

    def _fmt_set(self, mask: NodeSet) -> str:
        return "{%s}" % ",".join(self.h1.names_of(mask))

    def fmt_node(self, n: CgNode) -> str:
        squad = "-" if n.squad is None else self.h2.edge_names[n.squad]
        comp = "CAPTURE" if n.is_capture else self._fmt_set(n.comp)
        return "(%s, %s)" % (squad, comp)

    def trace_lines(self) -> list[str]:
        out = []
        for i in sorted(self.nodes):
            n = self.nodes[i]
            if n.is_capture:
                out.append("node %d %s" % (i, self.fmt_node(n)))
                continue
            out.append("node %d %s move (%s, %s)"
                       % (i, self.fmt_node(n),
                          self.h2.edge_names[n.move_squad],
                          self._fmt_set(n.move_cops)))
            for ch in n.children:
                out.append("arc %d -> %d" % (i, ch))
        return out

    def to_dot(self, title: str = "component graph") -> str:
        lines = ["digraph \"%s\" {" % title, "  rankdir=TB;"]
        for i in sorted(self.nodes):
            n = self.nodes[i]
            shape = "doublecircle" if n.is_capture else "ellipse"
            lines.append("  n%d [shape=%s,label=\"%s\"];"
                         % (i, shape, self.fmt_node(n)))
        for i in sorted(self.nodes):
            n = self.nodes[i]
            if n.is_capture:
                continue
            lab = "%s %s" % (self.h2.edge_names[n.move_squad],
                             self._fmt_set(n.move_cops))
            for ch in n.children:
                lines.append("  n%d -> n%d [label=\"%s\"];" % (i, ch, lab))
        lines.append("}")
        return "\n".join(lines) + "\n"


def component_graph(sg: StrategyGraph) -> ComponentGraph:
    """Quotient the nice strategy *sg* into its component graph."""
    h1, h2 = sg.h1, sg.h2
    cg = ComponentGraph(h1, h2, {}, [], [])
    by_label: dict[tuple, CgNode] = {}

    def node_for(sq: Optional[int], c: NodeSet) -> CgNode:
        lab = (sq, c)
        n = by_label.get(lab)
        if n is None:
            n = cg.new_node(sq, c)
            by_label[lab] = n
        return n

    for cfg in sg.initial:
        cg.roots.append(node_for(None, cfg[2]).ident)
    queue = deque(sg.initial)
    seen = set(sg.initial)
    while queue:
        cfg = queue.popleft()
        sq, m, c = cfg
        move = sg.nodes[cfg]
        if move is None:
            continue
        s, mr, succs = move
        src = node_for(sq, c)
        if len(succs) == 1 and succs[0][0] == sq and succs[0][2] == c:
            # the retraction move: same squad, same component — internal to
            # the quotient node, only follow it
            if succs[0] not in seen:
                seen.add(succs[0])
                queue.append(succs[0])
            continue
        if src.move_squad is None:
            src.move_squad, src.move_cops = s, mr
        elif (src.move_squad, src.move_cops) != (s, mr):
            raise ValidationError("one component-graph node with two moves")
            # (cannot happen: moves are chosen per collapsed state)
        for t in succs:
            tgt = node_for(t[0], t[2])
            if tgt.ident not in src.children:
                src.children.append(tgt.ident)
            if src.ident not in tgt.parents:
                tgt.parents.append(src.ident)
            if t not in seen:
                seen.add(t)
                queue.append(t)

    for n in cg.nodes.values():
        if not n.is_capture and n.move_squad is None:
            raise ValidationError("component-graph node without an attack")
    cg.seq = _topo_leaves_first(cg)
    return cg


def _topo_leaves_first(cg: ComponentGraph) -> list[int]:
    """Topological sequence of node ids, children strictly before parents."""
    state: dict[int, int] = {}
    order: list[int] = []
    for root in cg.roots:
        stack = [(root, 0)]
        while stack:
            v, i = stack.pop()
            if i == 0:
                if state.get(v):
                    continue
                state[v] = 1
            kids = cg.nodes[v].children
            if i < len(kids):
                stack.append((v, i + 1))
                t = kids[i]
                if state.get(t, 0) == 1:
                    raise ValidationError("component graph has a cycle")
                if state.get(t, 0) == 0:
                    stack.append((t, 0))
            else:
                state[v] = 2
                order.append(v)
    return order


def validate_component_graph(cg: ComponentGraph) -> list[str]:
    """Check the component-graph conditions from scratch; [] means valid.

    Per non-capture node: the component is its own border-blocked component,
    the stored move stays within squad and frontier, the lower-bound
    reconstruction of the cop set is respected, and the robber options under
    the stored cops are exactly the children.  Also: roots are exactly the
    in-degree-0 nodes (one per part of H1), arcs mirror, the graph is acyclic
    with captures as its only leaves, and ``seq`` is a leaves-first topological
    order.
    """
    h1, h2 = cg.h1, cg.h2
    probs: list[str] = []
    parts = components(h1, 0)
    root_set = set(cg.roots)
    if len(cg.roots) != len(parts):
        probs.append("expected one root per part of H1")
    else:
        for r, p in zip(cg.roots, parts):
            n = cg.nodes.get(r)
            if n is None or n.squad is not None or n.comp != p:
                probs.append("root %d is not (-, part)" % r)
    for i, n in cg.nodes.items():
        if n.ident != i:
            probs.append("node id mismatch at %d" % i)
        if not n.parents and i not in root_set:
            probs.append("non-root node %d has no incoming arcs" % i)
        if n.parents and i in root_set:
            probs.append("root %d has incoming arcs" % i)
        for ch in n.children:
            if ch not in cg.nodes:
                probs.append("dangling child of %d" % i)
            elif i not in cg.nodes[ch].parents:
                probs.append("arc %d->%d not mirrored" % (i, ch))
        for pa in n.parents:
            if pa not in cg.nodes or i not in cg.nodes[pa].children:
                probs.append("parent list of %d is stale" % i)
        if n.is_capture:
            if n.children:
                probs.append("capture node %d has children" % i)
            continue
        name = cg.fmt_node(n)
        bdr = border(h1, n.comp)
        if n.squad is not None and bdr & ~h2.edges[n.squad]:
            probs.append("%s: border not inside the squad" % name)
        if component_of(h1, bdr, n.comp & -n.comp) != n.comp:
            probs.append("%s: component not closed under its border" % name)
        if n.move_squad is None or n.move_cops is None:
            probs.append("%s: missing move" % name)
            continue
        ms, mm = n.move_squad, n.move_cops
        if mm & ~(h2.edges[ms] & frontier(h1, n.comp)):
            probs.append("%s: move cops leave squad or frontier" % name)
        # note: no squad-reuse check here — that rule is part of greedy play
        # (checked on strategies); rewritten graphs may legally break it
        opts = robber_options(h1, n.comp, bdr & mm, mm)
        kids = [cg.nodes[ch] for ch in n.children if ch in cg.nodes]
        if not opts:
            if n.comp & ~h2.edges[ms]:
                probs.append("%s: capture without covering the component" % name)
            if n.comp & ~mm:
                probs.append("%s: capture cops miss part of the component" % name)
            if len(kids) != 1 or not kids[0].is_capture or kids[0].squad != ms:
                probs.append("%s: capture child malformed" % name)
        else:
            want = list(opts)
            got = [k.comp for k in kids]
            if got != want:
                probs.append("%s: children do not match the options" % name)
            reconstructed = 0
            rest = n.comp
            for k in kids:
                reconstructed |= border(h1, k.comp)
                rest &= ~k.comp
            reconstructed |= rest
            if reconstructed & ~mm:
                probs.append("%s: reconstructed cops exceed the stored move" % name)
            if any(k.squad != ms for k in kids):
                probs.append("%s: child squad differs from the move" % name)
    # seq: permutation, children before parents
    if sorted(cg.seq) != sorted(cg.nodes):
        probs.append("seq is not a permutation of the nodes")
    else:
        pos = {v: i for i, v in enumerate(cg.seq)}
        for i, n in cg.nodes.items():
            for ch in n.children:
                if pos[ch] >= pos[i]:
                    probs.append("seq: child %d not before %d" % (ch, i))
    # reachability from the roots
    seen: set[int] = set()
    queue = list(cg.roots)
    while queue:
        v = queue.pop()
        if v in seen:
            continue
        seen.add(v)
        queue.extend(cg.nodes[v].children)
    if seen != set(cg.nodes):
        probs.append("unreachable nodes present")
    return probs


def is_monotone(cg: ComponentGraph) -> bool:
    """True iff every child component is contained in its parents'."""
    for n in cg.nodes.values():
        for ch in n.children:
            child = cg.nodes[ch]
            if child.comp & ~n.comp:
                return False
    return True
