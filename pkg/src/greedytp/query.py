"""Conjunctive-query answering through acyclic rewritings.

The pipeline: parse the rule, take its variable hypergraph, win the capture
game against the k-atom view family, monotonize, and read off an acyclic
hypergraph sandwiched between query and views.  Each of its edges becomes a
fresh atom whose relation is a projection of a materialized view; the
rewritten query is acyclic and Yannakakis' semijoin algorithm finishes the
job in polynomial input+output time.

Relations are sets of string tuples; intermediate relations keep their
columns sorted by variable name so joins and projections are deterministic.
"""

from __future__ import annotations

import csv
import io
import logging
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .errors import (BudgetError, InputError, NoTreeProjection, ParseError,
                     ValidationError)
from .game import greedy_wins, marshal_monotone_wins
from .hypergraph import Hypergraph, components, iter_bits
from .methods import (DEFAULT_EDGE_BUDGET, all_subedges, certificate_for,
                      power_hypergraph, subedge_views)
from .monotonize import TreeProjection, validate_tree_projection

log = logging.getLogger(__name__)

DEFAULT_ROW_BUDGET = 5_000_000


@dataclass(frozen=True)
class Const:
    """A quoted constant term; bare identifiers are variables."""

    value: str


Term = Union[str, Const]


@dataclass(frozen=True)
class Atom:
    rel: str
    terms: tuple[Term, ...]

    def variables(self) -> tuple[str, ...]:
        seen = []
        for t in self.terms:
            if isinstance(t, str) and t not in seen:
                seen.append(t)
        return tuple(seen)


@dataclass
class ConjunctiveQuery:
    head_name: str
    head_vars: tuple[str, ...]
    atoms: list[Atom]

    def variables(self) -> tuple[str, ...]:
        seen = []
        for a in self.atoms:
            for v in a.variables():
                if v not in seen:
                    seen.append(v)
        return tuple(seen)


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"""
    \s+
  | %[^\n]*
  | (?P<quoted>"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*')
  | (?P<ident>[A-Za-z0-9_]+)
  | (?P<sym>:-|[(),.])
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    line = 1
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError("unexpected character %r" % text[pos], line)
        line += text.count("\n", pos, m.end())
        pos = m.end()
        if m.lastgroup == "quoted":
            raw = m.group("quoted")
            value = re.sub(r"\\(.)", r"\1", raw[1:-1])
            out.append(("const", value, line))
        elif m.lastgroup == "ident":
            out.append(("ident", m.group("ident"), line))
        elif m.lastgroup == "sym":
            out.append(("sym", m.group("sym"), line))
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, kind, value=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of query")
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError("expected %s, found %r" % (want, tok[1]), tok[2])
        self.i += 1
        return tok

    def atom(self) -> Atom:
        name = self.take("ident")[1]
        self.take("sym", "(")
        terms: list[Term] = []
        if self.peek() and self.peek()[1] != ")":
            while True:
                tok = self.peek()
                if tok is None:
                    raise ParseError("unexpected end of query")
                if tok[0] == "ident":
                    terms.append(tok[1])
                    self.i += 1
                elif tok[0] == "const":
                    terms.append(Const(tok[1]))
                    self.i += 1
                else:
                    raise ParseError("expected a term, found %r" % tok[1],
                                     tok[2])
                if self.peek() and self.peek()[1] == ",":
                    self.i += 1
                    continue
                break
        self.take("sym", ")")
        return Atom(name, tuple(terms))


def parse_query(text: str) -> ConjunctiveQuery:
    """Parse a single rule ``name(V,...) :- atom(...), ..., atom(...).``

    Bare identifiers are variables, quoted tokens constants.  Raises
    ParseError on malformed input, an empty body, or a head variable that
    never occurs in the body.
    """
    p = _Parser(_tokenize(text))
    head = p.atom()
    for t in head.terms:
        if isinstance(t, Const):
            raise ParseError("constants are not allowed in the head")
    p.take("sym", ":-")
    atoms = []
    while True:
        tok = p.peek()
        if tok is None:
            raise ParseError("unexpected end of query (missing '.')")
        if tok[1] == ".":
            break
        atoms.append(p.atom())
        tok = p.peek()
        if tok and tok[1] == ",":
            p.i += 1
            continue
        break
    p.take("sym", ".")
    if p.peek() is not None:
        tok = p.peek()
        raise ParseError("trailing input after '.'", tok[2])
    if not atoms:
        raise ParseError("query body is empty")
    q = ConjunctiveQuery(head.rel, tuple(head.terms), list(atoms))
    body_vars = set(q.variables())
    for v in q.head_vars:
        if v not in body_vars:
            raise ParseError("head variable %s not bound by the body" % v)
    return q


def query_hypergraph(q: ConjunctiveQuery) -> Hypergraph:
    """One hyperedge per variable-bearing atom; constants are dropped.

    All-constant atoms contribute no edge (they act as pure filters during
    evaluation).  A disconnected query is legal and merely logged.
    """
    named = []
    counts: dict[str, int] = {}
    for a in q.atoms:
        counts[a.rel] = counts.get(a.rel, 0) + 1
    seen_rel: dict[str, int] = {}
    for a in q.atoms:
        vs = a.variables()
        if not vs:
            continue
        if counts[a.rel] == 1:
            name = a.rel
        else:
            seen_rel[a.rel] = seen_rel.get(a.rel, 0) + 1
            name = "%s_%d" % (a.rel, seen_rel[a.rel])
        named.append((name, vs))
    if not named:
        raise InputError("query has no variable-bearing atoms")
    h = Hypergraph.from_named_edges(named)
    if len(components(h, 0)) > 1:
        log.info("query is disconnected (%d components)",
                 len(components(h, 0)))
    return h


# -- relations ----------------------------------------------------------------

Rows = set  # of tuple[str, ...]


@dataclass
class Relation:
    name: str
    arity: Optional[int]  # None until the first tuple fixes it
    rows: Rows = field(default_factory=set)


Database = dict


def load_database(path) -> Database:
    """Read every ``<relation>.csv`` in a directory; no headers, all strings."""
    d = Path(path)
    if not d.is_dir():
        raise InputError("database path %s is not a directory" % d)
    db: Database = {}
    for f in sorted(d.glob("*.csv")):
        rel = Relation(f.stem, None)
        with f.open(newline="", encoding="utf-8") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row:
                    continue
                if rel.arity is None:
                    rel.arity = len(row)
                elif len(row) != rel.arity:
                    raise InputError(
                        "%s: row %d has %d columns, expected %d"
                        % (f.name, lineno, len(row), rel.arity))
                rel.rows.add(tuple(row))
        db[rel.name] = rel
    return db


def save_rows(rows: Rows, header: Sequence[str], out) -> None:
    """Write rows as CSV, sorted, to a text stream."""
    w = csv.writer(out, lineterminator="\n")
    for row in sorted(rows):
        w.writerow(row)


def format_rows(rows: Rows, header: Sequence[str]) -> str:
    buf = io.StringIO()
    save_rows(rows, header, buf)
    return buf.getvalue()


def _bind_atom(a: Atom, db: Database) -> tuple[tuple[str, ...], Rows]:
    """Filter by constants and repeated variables, project to sorted vars."""
    if a.rel not in db:
        raise InputError("unknown relation %r" % a.rel)
    rel = db[a.rel]
    if rel.arity is not None and rel.arity != len(a.terms):
        raise InputError("relation %s has arity %d, atom uses %d"
                         % (a.rel, rel.arity, len(a.terms)))
    vs = tuple(sorted(a.variables()))
    first_pos = {}
    for i, t in enumerate(a.terms):
        if isinstance(t, str) and t not in first_pos:
            first_pos[t] = i
    out: Rows = set()
    for t in rel.rows:
        ok = True
        for i, term in enumerate(a.terms):
            if isinstance(term, Const):
                if t[i] != term.value:
                    ok = False
                    break
            elif t[i] != t[first_pos[term]]:
                ok = False
                break
        if ok:
            out.add(tuple(t[first_pos[v]] for v in vs))
    return vs, out


def _join(va, ra, vb, rb, budget_rows=DEFAULT_ROW_BUDGET):
    """Hash join on shared variables; output columns sorted by name."""
    shared = tuple(v for v in va if v in vb)
    vo = tuple(sorted(set(va) | set(vb)))
    ia = [va.index(v) for v in shared]
    ib = [vb.index(v) for v in shared]
    if len(ra) > len(rb):  # build on the smaller side
        va, ra, vb, rb, ia, ib = vb, rb, va, ra, ib, ia
    index: dict = {}
    for t in ra:
        index.setdefault(tuple(t[i] for i in ia), []).append(t)
    pos = {}
    for i, v in enumerate(va):
        pos[v] = (0, i)
    for i, v in enumerate(vb):
        pos.setdefault(v, (1, i))
    out: Rows = set()
    for tb in rb:
        for ta in index.get(tuple(tb[i] for i in ib), ()):
            pair = (ta, tb)
            out.add(tuple(pair[s][i] for s, i in (pos[v] for v in vo)))
            if len(out) > budget_rows:
                raise BudgetError("intermediate join exceeded %d rows"
                                  % budget_rows)
    return vo, out


def _project(vs, rows, keep) -> tuple[tuple[str, ...], Rows]:
    keep = tuple(k for k in keep if k in vs)
    idx = [vs.index(k) for k in keep]
    return keep, {tuple(t[i] for i in idx) for t in rows}


def _semijoin(va, ra, vb, rb) -> Rows:
    shared = tuple(v for v in va if v in vb)
    ia = [va.index(v) for v in shared]
    ib = [vb.index(v) for v in shared]
    keys = {tuple(t[i] for i in ib) for t in rb}
    return {t for t in ra if tuple(t[i] for i in ia) in keys}


# -- views and rewriting ------------------------------------------------------


@dataclass
class ViewSet:
    """Materialized joins, one per distinct union of at most k atom edges."""

    hv: Hypergraph                      # the view hypergraph over query vars
    var_lists: list                     # per edge: sorted variable tuple
    relations: list                     # per edge: set of rows
    by_combo: dict                      # base-atom index combo -> edge index
    k: int


def materialize_views(q: ConjunctiveQuery, db: Database, k: int,
                      budget_edges: int = DEFAULT_EDGE_BUDGET,
                      budget_rows: int = DEFAULT_ROW_BUDGET) -> ViewSet:
    """Join, for every distinct union U of <= k atom variable sets, all
    atoms whose variables fall inside U; project to U.

    Joining every covered atom (not just the generating combination) keeps
    each view at least as restrictive as any other view over the same
    variables, so the rewriting stays equivalent no matter which covering
    view a hyperedge later picks.
    """
    hq = query_hypergraph(q)
    hv = power_hypergraph(hq, k, budget_edges)
    atoms = [a for a in q.atoms if a.variables()]
    bound = {}
    var_lists = []
    relations = []
    for j, u in enumerate(hv.edges):
        uvars = set(hv.names_of(u))
        cover = [i for i, a in enumerate(atoms)
                 if set(a.variables()) <= uvars]
        vs: tuple[str, ...] = ()
        rows: Rows = {()}
        for i in cover:
            if i not in bound:
                bound[i] = _bind_atom(atoms[i], db)
            bv, br = bound[i]
            vs, rows = _join(vs, rows, bv, br, budget_rows)
        var_lists.append(tuple(sorted(uvars)))
        vs2, rows2 = _project(vs, rows, var_lists[-1])
        assert vs2 == var_lists[-1]
        relations.append(rows2)
    by_combo = {hv.provenance[j]: j for j in range(hv.n_edges)}
    return ViewSet(hv, var_lists, relations, by_combo, k)


@dataclass
class AcyclicQuery:
    """The rewritten query: one fresh atom per projection edge."""

    ha: Hypergraph
    jt: object                          # JoinTree over ha edge indices
    var_lists: list                     # per ha edge: sorted variable tuple
    relations: list                     # per ha edge: set of rows
    head_vars: tuple


def acyclic_rewrite(q: ConjunctiveQuery, vs: ViewSet,
                    tp: TreeProjection,
                    upper_combos: Optional[list] = None) -> AcyclicQuery:
    """One fresh atom per edge of the sandwiched acyclic hypergraph.

    Each edge's relation is the projection of a covering view, located via
    the projection's upper witness; ``upper_combos`` overrides the witness
    with explicit base-atom combinations (used when the decision ran against
    the subedge closure rather than the view hypergraph itself).
    """
    hq = query_hypergraph(q)
    ok, diags = validate_tree_projection(tp, hq, vs.hv) \
        if upper_combos is None else (True, [])
    if not ok:
        raise ValidationError("tree projection rejected: %s" % "; ".join(diags))
    var_lists = []
    relations = []
    for i, e in enumerate(tp.ha.edges):
        evars = tuple(sorted(tp.ha.names_of(e)))
        if upper_combos is None:
            j = tp.upper[i]
        else:
            j = vs.by_combo[upper_combos[i]]
        vvars, vrows = vs.var_lists[j], vs.relations[j]
        if not set(evars) <= set(vvars):
            raise ValidationError("edge %s not covered by its view"
                                  % tp.ha.edge_names[i])
        pv, pr = _project(vvars, vrows, evars)
        var_lists.append(pv)
        relations.append(pr)
    return AcyclicQuery(tp.ha, tp.jt, var_lists, relations, q.head_vars)


@dataclass
class EvalStats:
    m: int = 0          # atoms in the acyclic rewriting
    r: int = 0          # largest materialized view
    r_prime: int = 0    # largest rewritten relation
    s: int = 0          # answer size
    seconds: dict = field(default_factory=dict)

    def to_json_dict(self, timings: bool = False):
        doc = {"m": self.m, "r": self.r, "r_prime": self.r_prime, "s": self.s}
        if timings:
            doc["seconds"] = {k: round(v, 3) for k, v in self.seconds.items()}
        return doc


def yannakakis(aq: AcyclicQuery) -> tuple[Rows, EvalStats]:
    """Full reducer (leaf-up then root-down semijoins), then root-down joins
    projected to the head plus whatever later subtrees still need."""
    stats = EvalStats()
    stats.m = len(aq.relations)
    stats.r_prime = max((len(r) for r in aq.relations), default=0)
    rels = {i: (aq.var_lists[i], set(rows))
            for i, rows in enumerate(aq.relations)}
    jt = aq.jt
    order = _bottom_up_order(jt)
    for v in order:                      # leaf-to-root pass
        p = jt.parent[v]
        if p is None:
            continue
        pv, pr = rels[p]
        rels[p] = (pv, _semijoin(pv, pr, *rels[v]))
    for v in reversed(order):            # root-to-leaf pass
        p = jt.parent[v]
        if p is None:
            continue
        vv, vr = rels[v]
        rels[v] = (vv, _semijoin(vv, vr, *rels[p]))
    head = aq.head_vars
    still_needed = {v: set() for v in rels}
    pre = list(reversed(order))          # root first
    suffix: set = set()
    for v in reversed(pre):
        still_needed[v] = set(suffix)
        suffix |= set(rels[v][0])
    acc_v: tuple = ()
    acc_r: Rows = {()}
    for v in pre:                        # root-down joins
        acc_v, acc_r = _join(acc_v, acc_r, *rels[v])
        keep = sorted(set(head) | (set(acc_v) & still_needed[v]))
        acc_v, acc_r = _project(acc_v, acc_r, keep)
    out = {tuple(t[acc_v.index(h)] for h in head) for t in acc_r}
    stats.s = len(out)
    return out, stats


def _bottom_up_order(jt):
    """Tree nodes ordered so every node precedes its parent (forest-safe)."""
    kids: dict[int, list[int]] = {}
    roots = []
    for v, p in enumerate(jt.parent):
        if p is None:
            roots.append(v)
        else:
            kids.setdefault(p, []).append(v)
    out = []
    for root in roots:
        stack = [(root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                out.append(v)
                continue
            stack.append((v, True))
            for c in sorted(kids.get(v, ()), reverse=True):
                stack.append((c, False))
    return out


def _constant_filters_hold(q: ConjunctiveQuery, db: Database) -> bool:
    for a in q.atoms:
        if a.variables():
            continue
        if a.rel not in db:
            raise InputError("unknown relation %r" % a.rel)
        want = tuple(t.value for t in a.terms)
        if want not in db[a.rel].rows:
            return False
    return True


def answer(q: ConjunctiveQuery, db: Database, kmax: int = 2,
           method: str = "grhw",
           budget_edges: int = DEFAULT_EDGE_BUDGET,
           budget_rows: int = DEFAULT_ROW_BUDGET
           ) -> tuple[Rows, EvalStats]:
    """Decide, rewrite, evaluate.

    Tries k = 1..kmax until the chosen game is won, then materializes the
    k-atom views and runs Yannakakis on the rewriting.  Raises
    NoTreeProjection when every k fails; the caller may fall back to a naive
    join.
    """
    if method not in ("grhw", "hw", "ghw"):
        raise InputError("method must be grhw, hw or ghw")
    if not _constant_filters_hold(q, db):
        return set(), EvalStats()
    hq = query_hypergraph(q)
    t0 = time.perf_counter()
    tp = None
    upper_combos = None
    k_used = None
    for k in range(1, kmax + 1):
        if method == "ghw":
            views_h = subedge_views(hq, k, all_subedges, budget_edges)
            won, gg = greedy_wins(hq, views_h)
        elif method == "hw":
            views_h = power_hypergraph(hq, k, budget_edges)
            won, gg = marshal_monotone_wins(hq, views_h)
        else:
            views_h = power_hypergraph(hq, k, budget_edges)
            won, gg = greedy_wins(hq, views_h)
        if won:
            tp = certificate_for(hq, views_h, gg)
            upper_combos = [views_h.provenance[u] for u in tp.upper]
            k_used = k
            break
    t_decide = time.perf_counter() - t0
    if tp is None:
        raise NoTreeProjection(
            "no greedy tree projection within kmax=%d (method %s)"
            % (kmax, method))
    t0 = time.perf_counter()
    vs = materialize_views(q, db, k_used, budget_edges, budget_rows)
    t_views = time.perf_counter() - t0
    t0 = time.perf_counter()
    aq = acyclic_rewrite(q, vs, tp, upper_combos)
    out, stats = yannakakis(aq)
    stats.seconds = {"decide": t_decide, "views": t_views,
                     "eval": time.perf_counter() - t0}
    stats.r = max((len(r) for r in vs.relations), default=0)
    log.info("answered with k=%d: m=%d r=%d r'=%d s=%d",
             k_used, stats.m, stats.r, stats.r_prime, stats.s)
    return out, stats
