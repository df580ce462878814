import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedytp.errors import ParseError
from greedytp.hypergraph import (
    Hypergraph,
    JoinTree,
    border,
    components,
    component_of,
    format_hypergraph,
    frontier,
    gaifman,
    gyo_reduce,
    is_acyclic,
    iter_bits,
    join_tree,
    join_tree_valid,
    leq,
    parse_hypergraph,
)

from helpers import (
    components_oracle,
    has_join_tree_oracle,
    load_fixture,
    rand_hypergraph,
)


@pytest.fixture(scope="module")
def hq0():
    return parse_hypergraph(load_fixture("hq0.hg"))


@pytest.fixture(scope="module")
def ha(hq0):
    return parse_hypergraph(load_fixture("ha.hg")).reindexed(hq0.names)


def test_parse_basic():
    h = parse_hypergraph("% comment\nr1(A,B,C)\nr2(A,F),\n\n# tail comment\n")
    assert h.edge_names == ("r1", "r2")
    assert h.names == ("A", "B", "C", "F")
    assert h.names_of(h.edges[1]) == ("A", "F")


def test_parse_inline_comment_and_duplicate_nodes():
    h = parse_hypergraph("e(X,Y,X)  % X listed twice\n")
    assert h.names_of(h.edges[0]) == ("X", "Y")


@pytest.mark.parametrize(
    "bad",
    ["r1(A,B", "r1()", "r1(A,,B)", "(A,B)", "r-x(A)", "r1(A) r2(B)"],
)
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_hypergraph(bad + "\n")


def test_parse_rejects_duplicate_edge_name():
    with pytest.raises(ParseError) as err:
        parse_hypergraph("r1(A,B)\nr1(B,C)\n")
    assert err.value.line == 2


def test_format_round_trip(hq0):
    again = parse_hypergraph(format_hypergraph(hq0))
    assert again.names == hq0.names
    assert again.edges == hq0.edges
    assert again.edge_names == hq0.edge_names


def test_iter_bits_order():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    assert list(iter_bits(0)) == []


def test_components_running_example(hq0):
    m = hq0.mask_of(["E", "F", "G"])
    comps = components(hq0, m)
    assert [set(hq0.names_of(c)) for c in comps] == [
        {"A", "B", "C", "D"},
        {"H", "I", "J", "K"},
    ]
    # cache must return the identical tuple on a second call
    assert components(hq0, m) is comps


def test_component_of(hq0):
    m = hq0.mask_of(["E", "F", "G"])
    c = component_of(hq0, m, hq0.mask_of(["J"]))
    assert set(hq0.names_of(c)) == {"H", "I", "J", "K"}
    with pytest.raises(ValueError):
        component_of(hq0, m, hq0.mask_of(["E"]))


def test_frontier_border_running_example(hq0):
    c = hq0.mask_of(["H", "I", "J", "K"])
    assert set(hq0.names_of(frontier(hq0, c))) == {"G", "H", "I", "J", "K"}
    assert hq0.names_of(border(hq0, c)) == ("G",)


def test_components_no_blockers_is_connectivity(hq0):
    comps = components(hq0, 0)
    assert comps == (hq0.all_nodes,)


@settings(deadline=None, max_examples=120)
@given(st.integers(0, 10**6))
def test_components_match_set_oracle(seed):
    rng = random.Random(seed)
    h = rand_hypergraph(rng)
    blocked_ids = [v for v in range(h.n_nodes) if rng.random() < 0.35]
    m = 0
    for v in blocked_ids:
        m |= 1 << v
    got = {frozenset(h.names_of(c)) for c in components(h, m)}
    want = components_oracle(h, {h.names[v] for v in blocked_ids})
    assert got == want


@settings(deadline=None, max_examples=80)
@given(st.integers(0, 10**6))
def test_frontier_contains_component(seed):
    rng = random.Random(seed)
    h = rand_hypergraph(rng)
    m = 0
    for v in range(h.n_nodes):
        if rng.random() < 0.3:
            m |= 1 << v
    for c in components(h, m):
        fr = frontier(h, c)
        assert c & ~fr == 0
        assert border(h, c) == fr & ~c
        # the border of a component always sits inside the blocking set
        assert border(h, c) & ~m == 0


def test_gaifman_triangle():
    tri = parse_hypergraph("a(X,Y)\nb(Y,Z)\nc(X,Z)\n")
    adj = gaifman(tri)
    assert all(adj[v].bit_count() == 2 for v in range(3))
    assert all(not adj[v] & (1 << v) for v in range(3))


def test_acyclicity_fixtures(hq0, ha):
    assert not is_acyclic(hq0)
    assert is_acyclic(ha)
    assert join_tree(hq0) is None


def test_triangle_cyclic():
    tri = parse_hypergraph("a(X,Y)\nb(Y,Z)\nc(X,Z)\n")
    assert not is_acyclic(tri)
    red = gyo_reduce(tri)
    assert len(red.alive) == 3  # nothing reducible at all


def test_join_tree_of_cover(hq0, ha):
    jt = join_tree(ha)
    assert jt is not None
    assert join_tree_valid(ha, jt)
    # m2 = {A,D,E,F,J,K} glues the two other bags together
    assert jt.root == 1
    assert jt.parent == (1, None, 1)


def test_join_tree_single_and_empty():
    one = parse_hypergraph("e(A,B)\n")
    jt = join_tree(one)
    assert jt.root == 0 and jt.parent == (None,)
    empty = Hypergraph((), (), ())
    jt0 = join_tree(empty)
    assert jt0.root is None and jt0.parent == ()


def test_join_tree_disconnected():
    h = parse_hypergraph("e1(A,B)\ne2(B,C)\ne3(X,Y)\n")
    assert is_acyclic(h)
    jt = join_tree(h)
    assert join_tree_valid(h, jt)


def test_join_tree_valid_rejects_broken_tree(ha):
    # hang m1 off m3 instead of m2: node A's holders {m1, m2} disconnect
    bad = JoinTree(parent=(2, None, 1), root=1)
    assert not join_tree_valid(ha, bad)


@settings(deadline=None, max_examples=100)
@given(st.integers(0, 10**6))
def test_gyo_agrees_with_tree_enumeration(seed):
    rng = random.Random(seed)
    h = rand_hypergraph(rng, max_nodes=6, max_edges=5, max_arity=3)
    assert is_acyclic(h) == has_join_tree_oracle(h)


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10**6))
def test_join_tree_always_validates_when_acyclic(seed):
    rng = random.Random(seed)
    h = rand_hypergraph(rng, max_nodes=7, max_edges=6, max_arity=3)
    jt = join_tree(h)
    if jt is not None:
        assert join_tree_valid(h, jt)
    else:
        assert not is_acyclic(h)


def test_leq_running_example(hq0, ha):
    w = leq(hq0, ha)
    assert w is not None
    for i, j in enumerate(w):
        assert hq0.edges[i] & ~ha.edges[j] == 0
    assert leq(ha, hq0) is None


def test_leq_chain():
    base = Hypergraph.from_named_edges(
        [("p", ["C", "D"]), ("q", ["A", "B", "C", "D"]), ("r", ["A", "B", "C", "D", "H"])]
    )
    small = Hypergraph.from_masks(base, (base.edges[0],), "p")
    mid = Hypergraph.from_masks(base, (base.edges[1],), "q")
    big = Hypergraph.from_masks(base, (base.edges[2],), "r")
    assert leq(small, mid) == (0,)
    assert leq(mid, big) == (0,)
    assert leq(small, big) == (0,)
    assert leq(big, mid) is None


def test_leq_requires_shared_universe(hq0):
    other = parse_hypergraph("z(Q,R)\n")
    with pytest.raises(ValueError):
        leq(hq0, other)


def test_reindexed_preserves_contents(hq0, ha):
    raw = parse_hypergraph(load_fixture("ha.hg"))
    assert raw.names != hq0.names  # different first-appearance order
    aligned = raw.reindexed(hq0.names)
    assert aligned.names == hq0.names
    assert [set(aligned.names_of(e)) for e in aligned.edges] == [
        set(raw.names_of(e)) for e in raw.edges
    ]


def test_isolated_node_universe_shrinks(caplog):
    # build with an explicit universe containing a node no edge covers
    h = Hypergraph(("A", "B", "Z"), (0b011,), ("e",))
    assert h.names == ("A", "B")
    assert h.all_nodes == 0b11
