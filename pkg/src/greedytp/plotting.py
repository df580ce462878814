"""Figure rendering for reports: hypergraphs, join trees and game graphs.

Everything draws with deterministic layouts (circle for hypergraphs, layered
longest-path ranks for the game graphs) so repeated runs produce the same
files.  All functions save to a path and return it.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .hypergraph import Hypergraph, iter_bits


_EDGE_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red",
                "tab:purple", "tab:brown", "tab:pink", "tab:olive",
                "tab:cyan", "tab:gray")


def _circle_layout(n):
    return [(math.cos(2 * math.pi * i / n - math.pi / 2),
             math.sin(2 * math.pi * i / n - math.pi / 2))
            for i in range(n)]


def _inflate(points, factor=1.35):
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    out = []
    for x, y in points:
        dx, dy = x - cx, y - cy
        d = math.hypot(dx, dy) or 1.0
        grow = factor + 0.18 / d
        out.append((cx + dx * grow, cy + dy * grow))
    return out


def plot_hypergraph(h: Hypergraph, path, title=None):
    """Nodes on a circle; hyperedges as translucent blobs, pairs as lines."""
    pos = _circle_layout(max(h.n_nodes, 1))
    fig, ax = plt.subplots(figsize=(6, 6))
    for j, e in enumerate(h.edges):
        pts = [pos[v] for v in iter_bits(e)]
        color = _EDGE_COLORS[j % len(_EDGE_COLORS)]
        if len(pts) == 1:
            ax.scatter(*pts[0], s=900, facecolors="none", edgecolors=color)
        elif len(pts) == 2:
            (x1, y1), (x2, y2) = pts
            ax.plot([x1, x2], [y1, y2], color=color, lw=2.5, alpha=0.7)
        else:
            cx = sum(p[0] for p in pts) / len(pts)
            cy = sum(p[1] for p in pts) / len(pts)
            ring = sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
            ax.add_patch(Polygon(_inflate(ring), closed=True, alpha=0.22,
                                 facecolor=color, edgecolor=color, lw=1.5))
        # label near the first member, nudged outward per edge index
        lx, ly = pts[0]
        ax.annotate(h.edge_names[j], (lx * 1.18, ly * 1.18 + 0.05 * j),
                    color=color, fontsize=9, ha="center")
    for v, (x, y) in enumerate(pos[:h.n_nodes]):
        ax.scatter(x, y, s=320, color="white", edgecolors="black", zorder=3)
        ax.annotate(h.names[v], (x, y), ha="center", va="center",
                    fontsize=10, zorder=4)
    ax.set_xlim(-1.7, 1.7)
    ax.set_ylim(-1.7, 1.7)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return Path(path)


def _tree_layout(parent):
    """x by leaf order, y by depth; returns dict node -> (x, y)."""
    kids = {}
    roots = []
    for v, p in enumerate(parent):
        if p is None:
            roots.append(v)
        else:
            kids.setdefault(p, []).append(v)
    pos = {}
    next_x = [0.0]

    def place(v, depth):
        ch = sorted(kids.get(v, ()))
        if not ch:
            pos[v] = (next_x[0], -depth)
            next_x[0] += 1.0
            return
        for c in ch:
            place(c, depth + 1)
        xs = [pos[c][0] for c in ch]
        pos[v] = (sum(xs) / len(xs), -depth)

    for r in roots:
        place(r, 0)
        next_x[0] += 0.5
    return pos


def plot_join_tree(h: Hypergraph, jt, path, title=None):
    """The join tree with each vertex labeled by its hyperedge contents."""
    pos = _tree_layout(jt.parent)
    fig, ax = plt.subplots(figsize=(max(4, 1.8 * len(pos)), 5))
    for v, p in enumerate(jt.parent):
        if p is None:
            continue
        (x1, y1), (x2, y2) = pos[v], pos[p]
        ax.plot([x1, x2], [y1, y2], color="black", lw=1.2, zorder=1)
    for v, (x, y) in pos.items():
        label = "%s\n{%s}" % (h.edge_names[v], ",".join(h.names_of(h.edges[v])))
        ax.annotate(label, (x, y), ha="center", va="center", fontsize=9,
                    bbox=dict(boxstyle="round", facecolor="lightyellow",
                              edgecolor="black"), zorder=2)
    ax.margins(0.25)
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return Path(path)


def _layered_positions(ids, arcs):
    """Longest-path layering of a DAG given (src, dst) arcs."""
    depth = {v: 0 for v in ids}
    changed = True
    n = len(ids)
    rounds = 0
    while changed and rounds <= n + 1:
        changed = False
        rounds += 1
        for s, d in arcs:
            if depth[d] < depth[s] + 1:
                depth[d] = depth[s] + 1
                changed = True
    layers = {}
    for v in ids:
        layers.setdefault(depth[v], []).append(v)
    pos = {}
    for d, vs in layers.items():
        for i, v in enumerate(sorted(vs)):
            pos[v] = (i - (len(vs) - 1) / 2, -d)
    return pos


def plot_component_graph(cg, path, title=None):
    """Boxes per (squad, component) state, arrows to robber options."""
    ids = sorted(cg.nodes)
    arcs = [(i, c) for i in ids for c in cg.nodes[i].children]
    pos = _layered_positions(ids, arcs)
    xs = [x for x, _ in pos.values()]
    fig, ax = plt.subplots(figsize=(max(6, 2.2 * (1 + max(xs) - min(xs))),
                                    max(4, 1.6 * len(set(
                                        y for _, y in pos.values())))))
    for s, d in arcs:
        (x1, y1), (x2, y2) = pos[s], pos[d]
        ax.annotate("", xy=(x2, y2 + 0.18), xytext=(x1, y1 - 0.18),
                    arrowprops=dict(arrowstyle="->", color="gray", lw=1.1))
    for i in ids:
        n = cg.nodes[i]
        ax.annotate("%d %s" % (i, cg.fmt_node(n)), pos[i],
                    ha="center", va="center", fontsize=8,
                    bbox=dict(boxstyle="round",
                              facecolor="#dff2df" if n.is_capture
                              else "white", edgecolor="black"))
    ax.margins(0.2)
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return Path(path)


def plot_strategy(sg, path, title=None):
    """The unfolded strategy: configurations and the moves between them."""
    idx = {cfg: i for i, cfg in enumerate(sg.nodes)}
    ids = list(idx.values())
    arcs = []
    for cfg, move in sg.nodes.items():
        if move is None:
            continue
        _, _, succs = move
        arcs.extend((idx[cfg], idx[t]) for t in succs)
    pos = _layered_positions(ids, arcs)
    xs = [x for x, _ in pos.values()]
    fig, ax = plt.subplots(figsize=(max(6, 2.4 * (1 + max(xs) - min(xs))),
                                    max(4, 1.7 * len(set(
                                        y for _, y in pos.values())))))
    for s, d in arcs:
        (x1, y1), (x2, y2) = pos[s], pos[d]
        ax.annotate("", xy=(x2, y2 + 0.2), xytext=(x1, y1 - 0.2),
                    arrowprops=dict(arrowstyle="->", color="gray", lw=1.1))
    for cfg, i in idx.items():
        ax.annotate("%d: %s" % (i, sg._fmt_config(cfg)), pos[i],
                    ha="center", va="center", fontsize=8,
                    bbox=dict(boxstyle="round", facecolor="white",
                              edgecolor="black"))
    ax.margins(0.2)
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return Path(path)
