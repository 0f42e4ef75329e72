from __future__ import annotations

import json
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import ahu_free, random_tree
from treechk.core import (
    CapExceeded,
    ColoredGraph,
    ColoredTree,
    InvalidGraph,
    RootedGenerator,
    RootedTree,
    are_isomorphic,
    canonical_code,
    component,
    count_trees,
    diameter,
    distance,
    edge_view,
    edge_view_code,
    enumerate_trees,
    free_code,
    nested_from_tree,
    nested_height,
    nested_size,
    node_view,
    node_view_code,
    path_between,
    read_trees,
    rooted_trees,
    tree_centers,
    tree_from_json,
    tree_from_nested,
    tree_to_json,
    views_equal,
    write_trees,
)


def path(n, c=1):
    return ColoredTree((1,) * n, tuple((i, i + 1) for i in range(n - 1)), c)


def star(leaves):
    return ColoredTree((1,) * (leaves + 1), tuple((0, i) for i in range(1, leaves + 1)), 1)


trees = st.builds(lambda seed, n, c: random_tree(random.Random(seed), n, c),
                  st.integers(0, 10**6), st.integers(1, 14), st.integers(1, 3))


# ---------------------------------------------------------------- validation

def test_invalid_trees_are_rejected():
    with pytest.raises(InvalidGraph):
        ColoredTree((1, 1, 1), ((0, 1), (1, 2), (2, 0)), 1)
    with pytest.raises(InvalidGraph):
        ColoredTree((1, 1, 1), ((0, 1),), 1)
    with pytest.raises(InvalidGraph):
        ColoredTree((1, 4), ((0, 1),), 2)
    with pytest.raises(InvalidGraph):
        tree_from_json({"colors": [1]})


def test_graph_allows_cycles():
    g = ColoredGraph((1,) * 4, ((0, 1), (1, 2), (2, 3), (3, 0)), 1)
    assert diameter(g) == 2


# ---------------------------------------------------------------- distances

def test_diameter_small_cases():
    assert diameter(path(1)) == 0
    assert diameter(path(6)) == 5
    assert diameter(star(5)) == 2


@given(trees)
def test_diameter_matches_networkx(t):
    g = nx.Graph()
    g.add_nodes_from(range(t.n))
    g.add_edges_from(t.edges)
    assert diameter(t) == (nx.diameter(g) if t.n > 1 else 0)


@given(trees)
def test_path_and_distance_agree(t):
    rng = random.Random(t.n)
    u, v = rng.randrange(t.n), rng.randrange(t.n)
    p = path_between(t, u, v)
    assert p[0] == u and p[-1] == v and len(p) == distance(t, u, v) + 1
    assert all(t.has_edge(a, b) for a, b in zip(p, p[1:]))


@given(trees)
def test_centers_minimize_eccentricity(t):
    ecc = [max(distance(t, v, w) for w in range(t.n)) for v in range(t.n)]
    assert sorted(tree_centers(t)) == [v for v in range(t.n) if ecc[v] == min(ecc)]


def test_component_is_far_side():
    t = path(5)
    assert sorted(component(t, 1, 2)) == [2, 3, 4]
    assert sorted(component(t, 2, 1)) == [0, 1]


# ---------------------------------------------------------------- codes

@given(trees, st.integers(0, 10**6))
def test_free_code_invariant_under_relabeling(t, seed):
    perm = list(range(t.n))
    random.Random(seed).shuffle(perm)
    colors = [0] * t.n
    for v in range(t.n):
        colors[perm[v]] = t.colors[v]
    t2 = ColoredTree(tuple(colors), tuple((perm[a], perm[b]) for a, b in t.edges), t.c)
    assert free_code(t) == free_code(t2)
    assert are_isomorphic(t, t2)


@given(trees, trees)
def test_free_code_agrees_with_networkx_isomorphism(a, b):
    ga, gb = nx.Graph(), nx.Graph()
    for g, t in ((ga, a), (gb, b)):
        g.add_nodes_from((v, {"c": t.colors[v]}) for v in range(t.n))
        g.add_edges_from(t.edges)
    same = nx.is_isomorphic(ga, gb, node_match=lambda x, y: x["c"] == y["c"])
    assert (free_code(a) == free_code(b)) == same


def test_rooted_codes_distinguish_roots():
    t = path(3)
    assert canonical_code(RootedTree(t, 0)) != canonical_code(RootedTree(t, 1))
    assert canonical_code(RootedTree(t, 0)) == canonical_code(RootedTree(t, 2))


def test_nested_round_trip():
    t = random_tree(random.Random(1), 12, 2)
    nested = nested_from_tree(t, 0)
    assert nested_size(nested) == 12
    assert nested_height(nested) == max(distance(t, 0, v) for v in range(t.n))
    assert are_isomorphic(tree_from_nested(nested, 2), t)


# ---------------------------------------------------------------- views

def test_node_view_of_path_center():
    v = node_view(path(5), 2, 1)
    assert v.ball.n == 3


def test_star_leaf_views_equal():
    t = star(5)
    assert node_view_code(t, 1, 1) == node_view_code(t, 2, 1)
    assert node_view_code(t, 0, 1) != node_view_code(t, 1, 1)


def test_edge_view_radius_one_is_color_pair():
    t = ColoredTree((1, 2, 1), ((0, 1), (1, 2)), 2)
    assert edge_view_code(t, 0, 1, 1) == edge_view_code(t, 2, 1, 1)
    assert edge_view_code(t, 0, 1, 1) != edge_view_code(t, 1, 0, 1)
    # extra structure beyond radius 0 around the endpoints is invisible at d=1
    t2 = ColoredTree((1, 2, 1, 1), ((0, 1), (1, 2), (1, 3)), 2)
    assert edge_view_code(t, 0, 1, 1) == edge_view_code(t2, 0, 1, 1)


def test_views_in_cyclic_graph():
    c6 = ColoredGraph((1,) * 6, tuple((i, (i + 1) % 6) for i in range(6)), 1)
    c5 = ColoredGraph((1,) * 5, tuple((i, (i + 1) % 5) for i in range(5)), 1)
    assert views_equal(node_view(c6, 0, 2), node_view(c6, 3, 2))
    # at radius 2 the edge between the two far vertices of C5 is not seen
    assert views_equal(node_view(c5, 0, 2), node_view(c6, 0, 2))
    assert not views_equal(node_view(c5, 0, 3), node_view(c6, 0, 3))
    assert views_equal(edge_view(c6, 0, 1, 2), edge_view(c6, 3, 4, 2))


# ---------------------------------------------------------------- enumeration

def test_counts_uncolored():
    assert [count_trees(n) for n in range(1, 13)] == [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551]


def test_enumeration_is_exhaustive_and_distinct():
    for n in range(2, 9):
        listed = list(enumerate_trees(n, 1))
        codes = {ahu_free(t.n, t.edges) for t in listed}
        assert len(codes) == len(listed) == sum(1 for _ in nx.nonisomorphic_trees(n))


def test_colored_counts_against_brute_force():
    # every coloring of every shape, deduplicated
    for c in (2, 3):
        for n in range(1, 6):
            seen = set()
            for shape in enumerate_trees(n, 1):
                for cols in _colorings(n, c):
                    seen.add(ahu_free(n, shape.edges, cols))
            assert count_trees(n, c) == len(seen)


def _colorings(n, c):
    import itertools

    return itertools.product(range(1, c + 1), repeat=n)


def test_rule_pruned_enumeration_matches_filter():
    rule = lambda own, nbrs: len(nbrs) in (1, 3) or (len(nbrs) == 0)  # noqa: E731
    for n in range(1, 11):
        pruned = {free_code(t) for t in enumerate_trees(n, 1, rule=rule)}
        full = {free_code(t) for t in enumerate_trees(n, 1) if all(t.degree(v) in (0, 1, 3) for v in range(n))}
        assert pruned == full


def test_cap_is_enforced(monkeypatch):
    monkeypatch.setenv("TREECHK_CAP", "5")
    with pytest.raises(CapExceeded):
        list(enumerate_trees(8, 1))


def test_rooted_generator_heights():
    gen = RootedGenerator(1)
    assert len(gen.exact(1, 0)) == 1
    assert len(gen.exact(3, 1)) == 1 and len(gen.exact(3, 2)) == 1
    assert all(nested_height(x) <= 2 for x in rooted_trees(6, 2))


# ---------------------------------------------------------------- I/O

def test_json_round_trip(tmp_path):
    ts = [random_tree(random.Random(s), 7, 2) for s in range(3)]
    for t in ts:
        assert tree_from_json(tree_to_json(t)) == t
        assert json.loads(tree_to_json(t)).keys() == {"c", "colors", "edges"}
    p = tmp_path / "trees.jsonl"
    write_trees(str(p), ts)
    assert read_trees(str(p)) == ts
    single = tmp_path / "one.json"
    single.write_text(json.dumps(ts[0].to_json(), indent=2))
    assert read_trees(str(single)) == [ts[0]]
