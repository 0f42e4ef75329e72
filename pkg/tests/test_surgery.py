from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import random_tree, random_unicyclic
from treechk.checkers import accepts, preset, view_set_checker
from treechk.constructions import gen_ary_pended, gen_increasing_caterpillar, gen_k_rake, gen_path, gen_star
from treechk.core import (
    ColoredGraph,
    ColoredTree,
    RootedTree,
    are_isomorphic,
    bfs,
    canonical_code,
    component,
    diameter,
    enumerate_trees,
    node_view,
    path_between,
    views_equal,
)
from treechk.surgery import (
    SurgeryError,
    binary_logcase_witness,
    build_logcase_family,
    depump,
    distance_without,
    duplicate,
    equal_edge_views,
    find_equal_degree_pair_path,
    find_equal_view_edge_pair,
    find_zigzag,
    graft,
    is_zigzag,
    middle_component,
    order_relation,
    pump,
    pump_tracked,
    repeated_pair_on_branch,
    rooted_height,
    transitive_closure,
    useful_pairs,
    verify_witness,
)

seeds = st.integers(0, 10**6)


# ---------------------------------------------------------------- graft

@given(seeds, st.integers(2, 14), st.integers(2, 14))
def test_graft_vertex_count(seed, n1, n2):
    rng = random.Random(seed)
    t, t2 = random_tree(rng, n1, 2), random_tree(rng, n2, 2)
    uv = rng.choice(t.edges)[::rng.choice((1, -1))]
    u2v2 = rng.choice(t2.edges)[::rng.choice((1, -1))]
    g = graft(t, uv, t2, u2v2)
    assert g.n == t.n - len(component(t, *uv)) + len(component(t2, *u2v2))


@given(seeds, st.integers(2, 14))
def test_identity_graft(seed, n):
    rng = random.Random(seed)
    t = random_tree(rng, n, 2)
    uv = rng.choice(t.edges)
    assert are_isomorphic(graft(t, uv, t, uv), t)


def test_graft_star_leaf_into_path_end():
    p, s = gen_path(5), gen_star(4)
    g = graft(p, (3, 4), s, (1, 0))  # replace the last path vertex by the star seen from a leaf
    assert g.n == 5 - 1 + 3 and diameter(g) == 5


@pytest.mark.parametrize("name", ["paths", "binary", "rake:2"])
def test_graft_preserves_acceptance_for_presets(name):
    ch = preset(name)
    rng = random.Random(hash(name) % 1000)
    pool = [t for n in range(2, 9) for t in enumerate_trees(n, ch.c, rule=ch.rule) if accepts(ch, t).accept]
    trials = 0
    for _ in range(400):
        t, t2 = rng.choice(pool), rng.choice(pool)
        uv = rng.choice(t.edges)[::rng.choice((1, -1))]
        u2v2 = rng.choice(t2.edges)[::rng.choice((1, -1))]
        if equal_edge_views(t, uv, t2, u2v2, ch.d):
            assert accepts(ch, graft(t, uv, t2, u2v2)).accept
            trials += 1
    assert trials > 20


def test_graft_rejects_non_edges():
    with pytest.raises(SurgeryError):
        graft(gen_path(4), (0, 2), gen_path(3), (0, 1))


# ---------------------------------------------------------------- pump

def test_pump_path_example():
    t = gen_path(8)
    r = pump_tracked(t, (1, 2), (4, 5), 4, 1)
    c2 = len(middle_component(t, (1, 2), (4, 5)))
    assert c2 == 3 and r.tree.n == 8 + 3 * c2
    assert diameter(r.tree) == r.tree.n - 1
    assert are_isomorphic(pump(t, (1, 2), (4, 5), 1), t)


def test_pump_errors():
    t = gen_star(5)
    with pytest.raises(SurgeryError):
        pump(t, (1, 0), (2, 0), 2)
    p = ColoredTree((1, 2, 1, 1), ((0, 1), (1, 2), (2, 3)), 2)
    with pytest.raises(SurgeryError):
        pump(p, (0, 1), (2, 3), 2, d=1)


@given(seeds, st.integers(3, 16), st.integers(1, 2), st.integers(1, 3))
def test_pumped_trees_stay_accepted(seed, n, c, d):
    t = random_tree(random.Random(seed), n, c)
    found = find_equal_view_edge_pair(t, d)
    if found is None:
        return
    ch = view_set_checker([t], d, c)
    sizes = []
    for i in range(1, 5):
        ti = pump(t, *found, i, d)
        assert accepts(ch, ti).accept
        sizes.append(ti.n)
    steps = {b - a for a, b in zip(sizes, sizes[1:])}
    assert steps == {len(middle_component(t, *found))}


# ---------------------------------------------------------------- duplication

def test_duplicate_cycle():
    c6 = ColoredGraph((1,) * 6, tuple((i, (i + 1) % 6) for i in range(6)), 1)
    d = duplicate(c6, (0, 1))
    assert d.n == 12 and distance_without(c6, 0, 1) == 5 and distance_without(d, 0, 7) == 11
    assert nx.is_isomorphic(nx.Graph(list(d.edges)), nx.cycle_graph(12))


@given(seeds, st.integers(3, 14), st.integers(1, 2))
def test_duplicate_preserves_views(seed, n, d):
    g, (u, v) = random_unicyclic(random.Random(seed), n)
    if distance_without(g, u, v) < 2 * d:
        return
    dup = duplicate(g, (u, v))
    assert dup.n == 2 * g.n
    for x in range(dup.n):
        assert views_equal(node_view(dup, x, d), node_view(g, x % g.n, d))


# ---------------------------------------------------------------- detectors

def test_equal_view_pair_examples():
    found = find_equal_view_edge_pair(gen_path(6), 1)
    assert found is not None
    assert find_equal_view_edge_pair(gen_increasing_caterpillar(8), 2) is None
    # paths on c^2 + 2 vertices always give a pair at distance 1
    for c in (1, 2):
        for cols in itertools.product(range(1, c + 1), repeat=c * c + 2):
            t = ColoredTree(cols, tuple((i, i + 1) for i in range(c * c + 1)), c)
            assert find_equal_view_edge_pair(t, 1) is not None


@given(seeds, st.integers(2, 14), st.integers(1, 2))
def test_equal_view_pair_is_valid(seed, n, d):
    t = random_tree(random.Random(seed), n, 2)
    found = find_equal_view_edge_pair(t, d)
    if found is None:
        return
    (u, v), (x, y) = found
    p = path_between(t, u, y)
    assert p[1] == v and p[-2] == x and (u, v) != (x, y)
    assert equal_edge_views(t, (u, v), t, (x, y), d)


def _zigzag_exists(t) -> bool:
    """Scan every path for a peak window followed by a disjoint dip window."""
    deg = t.degree
    for s, e in itertools.permutations(range(t.n), 2):
        p = path_between(t, s, e)
        peaks = [i for i in range(len(p) - 2) if deg(p[i]) == deg(p[i + 2]) == deg(p[i + 1]) - 1]
        dips = [j for j in range(len(p) - 2) if deg(p[j]) == deg(p[j + 2]) == deg(p[j + 1]) + 1]
        if any(j >= i + 3 for i in peaks for j in dips):
            return True
    return False


def test_zigzag_exhaustive_small():
    for n in range(1, 11):
        for t in enumerate_trees(n, 1):
            z = find_zigzag(t)
            assert (z is not None) == _zigzag_exists(t)
            if z is not None:
                assert is_zigzag(t, z)


@given(seeds, st.integers(10, 40))
def test_zigzag_random(seed, n):
    t = random_tree(random.Random(seed), n)
    z = find_zigzag(t)
    assert (z is not None) == _zigzag_exists(t)
    if z is not None:
        assert is_zigzag(t, z)


def test_equal_degree_pair_examples():
    assert find_equal_degree_pair_path(gen_path(6)) is not None
    assert find_equal_degree_pair_path(gen_star(6)) is None
    assert find_equal_degree_pair_path(gen_increasing_caterpillar(7)) is None
    (u1, u2), (v1, v2) = find_equal_degree_pair_path(gen_path(6))
    p = path_between(gen_path(6), u1, v2)
    assert [p[0], p[1], p[-2], p[-1]] == [u1, u2, v1, v2]


# ---------------------------------------------------------------- de-pumping

def test_depump_examples():
    out = depump(RootedTree(gen_path(10), 0), 1)
    assert rooted_height(out) <= 1
    star = RootedTree(gen_star(6), 0)
    assert canonical_code(depump(star, 1)) == canonical_code(star)


@given(seeds, st.integers(1, 40), st.integers(1, 3))
def test_depump_bounds(seed, n, c):
    rng = random.Random(seed)
    t = random_tree(rng, n, c)
    root = rng.randrange(n)
    out = depump(RootedTree(t, root), c)
    assert rooted_height(out) <= c * c
    assert not repeated_pair_on_branch(out)
    assert out.tree.n <= t.n


def test_depump_respects_given_order():
    rng = random.Random(3)
    for _ in range(30):
        t = random_tree(rng, 25, 2)
        order = [(2, 2), (2, 1), (1, 2), (1, 1)]
        out = depump(RootedTree(t, 0), 2, order)
        assert rooted_height(out) <= 4 and not repeated_pair_on_branch(out)


# ---------------------------------------------------------------- order relation

def test_useful_pairs():
    assert useful_pairs([gen_path(5)]) == {(1, 1)}
    assert useful_pairs([gen_path(3)]) == set()
    assert useful_pairs([gen_star(7)]) == set()


def test_order_relation_examples():
    binary = preset("binary")
    samples = [t for n in range(1, 16) for t in enumerate_trees(n, 1, rule=binary.rule)]
    rel = order_relation(samples)
    assert rel.less((1, 1), (1, 1)) and not rel.strict
    assert order_relation([gen_path(10)]).edges == []
    rakes = order_relation([gen_k_rake(2, ell) for ell in range(2, 7)])
    assert rakes.strict and rakes.k == 2
    for (p, q), w in rakes.witnesses.items():
        assert verify_witness(w) and (w.lower, w.upper) == (p, q)
    # closure is transitive
    cl = rakes.closure
    assert all((a, d) in cl for (a, b) in cl for (c, d) in cl if b == c)
    assert set(rakes.to_dict()) == {"pairs", "edges", "chain", "strict"}


def test_transitive_closure():
    pairs = [(1, 1), (1, 2), (2, 1)]
    cl = transitive_closure(pairs, [((1, 1), (1, 2)), ((1, 2), (2, 1))])
    assert ((1, 1), (2, 1)) in cl and ((2, 1), (1, 1)) not in cl


def test_logcase_family_grows():
    w = binary_logcase_witness()
    assert verify_witness(w)
    sizes = [build_logcase_family(w, i).n for i in range(1, 5)]
    assert sizes == [10, 14, 22, 38]
    assert all(accepts(preset("binary"), build_logcase_family(w, i)).accept for i in range(1, 6))
    # the diameter grows like the logarithm of the size
    ds = [diameter(build_logcase_family(w, i)) for i in range(2, 7)]
    assert all(b - a <= 4 for a, b in zip(ds, ds[1:]))


def test_depump_handles_pended_trees():
    t = gen_ary_pended(2, 4)
    out = depump(RootedTree(t, 0), 1)
    assert rooted_height(out) <= 1
    assert max(bfs(out.tree, out.root)) == rooted_height(out)
