import itertools
import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from eflab.graphs import (
    Graph,
    GraphError,
    RootedTree,
    automorphism_count,
    canonical_code,
    complete_graph,
    components,
    connected_components,
    count_copies,
    count_injective_homomorphisms,
    density,
    disjoint_union,
    empty_graph,
    enumerate_graphs,
    format_graph,
    format_rooted_tree,
    is_strictly_balanced,
    is_tree,
    metrics,
    parse_graph,
    parse_rooted_tree,
    path_graph,
    star_graph,
    subtree,
    tree_canonical_code,
    tree_centers,
)


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges)
    return h


def from_nx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(h.nodes))}
    return Graph.from_edges(len(idx), [(idx[u], idx[v]) for u, v in h.edges])


@st.composite
def random_trees(draw, max_order=10):
    n = draw(st.integers(1, max_order))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    return Graph.from_edges(n, [(p, v) for v, p in enumerate(parents, start=1)])


@st.composite
def random_graphs(draw, max_order=7):
    n = draw(st.integers(0, max_order))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph.from_edges(n, chosen)


def shuffled(g: Graph, data) -> Graph:
    perm = data.draw(st.permutations(range(g.vertex_count)))
    return g.relabel(perm)


# --- components and metrics


def test_components_examples():
    assert [c.vertex_count for c in components(empty_graph(3))] == [1, 1, 1]
    assert components(path_graph(3)) == [path_graph(3)]
    parts = components(disjoint_union([path_graph(2), empty_graph(1)]))
    assert parts == [path_graph(2), empty_graph(1)]


def test_metrics_examples():
    m = metrics(path_graph(3))
    assert (m.radius, m.diameter, m.centers) == (1, 2, (1,))
    m = metrics(path_graph(5))
    assert (m.radius, m.diameter, m.centers) == (2, 4, (2,))
    assert metrics(disjoint_union([path_graph(2), path_graph(2)])).diameter == math.inf


@settings(max_examples=60, deadline=None)
@given(random_graphs())
def test_metrics_match_networkx_on_connected_graphs(g):
    h = to_nx(g)
    if g.vertex_count == 0 or not nx.is_connected(h):
        return
    m = metrics(g)
    assert m.diameter == nx.diameter(h)
    assert m.radius == nx.radius(h)
    assert set(m.centers) == set(nx.center(h))
    lengths = dict(nx.all_pairs_shortest_path_length(h))
    for u in range(g.vertex_count):
        for v in range(g.vertex_count):
            assert m.distances[u][v] == lengths[u][v]


@settings(max_examples=60, deadline=None)
@given(random_trees())
def test_tree_centers_match_networkx(t):
    assert set(tree_centers(t)) == set(nx.center(to_nx(t)))


# --- canonical codes


def test_rooted_code_examples():
    single = RootedTree.from_edges(1, 0, [])
    assert canonical_code(single) == canonical_code(RootedTree.from_edges(1, 0, []))
    end = RootedTree.from_graph(path_graph(3), 0)
    mid = RootedTree.from_graph(path_graph(3), 1)
    assert canonical_code(end) != canonical_code(mid)


def test_unrooted_code_examples():
    p4a = path_graph(4)
    p4b = Graph.from_edges(4, [(2, 0), (0, 3), (3, 1)])
    assert tree_canonical_code(p4a) == tree_canonical_code(p4b)
    assert tree_canonical_code(path_graph(4)) != tree_canonical_code(star_graph(3))


def test_all_relabelings_of_six_vertex_tree_share_one_code():
    t = Graph.from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])
    codes = {tree_canonical_code(t.relabel(p)) for p in itertools.permutations(range(6))}
    assert len(codes) == 1


@settings(max_examples=80, deadline=None)
@given(random_trees(), st.data())
def test_tree_code_is_relabeling_invariant(t, data):
    assert tree_canonical_code(shuffled(t, data)) == tree_canonical_code(t)


@settings(max_examples=80, deadline=None)
@given(random_trees(9), random_trees(9))
def test_tree_code_decides_isomorphism(a, b):
    same = tree_canonical_code(a) == tree_canonical_code(b)
    assert same == nx.is_isomorphic(to_nx(a), to_nx(b))


@settings(max_examples=60, deadline=None)
@given(random_trees(), st.data())
def test_rooted_code_relabeling_invariant(t, data):
    root = data.draw(st.integers(0, t.vertex_count - 1))
    perm = data.draw(st.permutations(range(t.vertex_count)))
    a = RootedTree.from_graph(t, root)
    b = RootedTree.from_graph(t.relabel(perm), perm[root])
    assert canonical_code(a) == canonical_code(b)


# --- automorphisms


def brute_automorphisms(g: Graph) -> int:
    return sum(
        1
        for p in itertools.permutations(range(g.vertex_count))
        if all(tuple(sorted((p[u], p[v]))) in g.edges for u, v in g.edges)
    )


def test_automorphism_examples():
    assert automorphism_count(path_graph(2)) == 2
    assert automorphism_count(path_graph(3)) == 2
    assert automorphism_count(star_graph(3)) == 6


@settings(max_examples=50, deadline=None)
@given(random_trees(7))
def test_automorphisms_match_brute_force(t):
    assert automorphism_count(t) == brute_automorphisms(t)


# --- density, balance, copies


def test_density_examples():
    assert density(path_graph(2)) == Fraction(1, 2)
    assert density(path_graph(3)) == Fraction(2, 3)
    assert density(complete_graph(3)) == 1


def test_balance_examples():
    assert is_strictly_balanced(complete_graph(3))
    pendant = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert not is_strictly_balanced(pendant)


def test_every_small_tree_is_strictly_balanced():
    for n in range(2, 8):
        for h in nx.nonisomorphic_trees(n):
            assert is_strictly_balanced(from_nx(h))


def brute_strictly_balanced(g: Graph) -> bool:
    # every proper subgraph (any vertex and edge subset with >= 1 vertex) is sparser
    d = density(g)
    n = g.vertex_count
    edges = sorted(g.edges)
    for r in range(1, n + 1):
        for vs in itertools.combinations(range(n), r):
            inside = [e for e in edges if e[0] in vs and e[1] in vs]
            for m in range(len(inside) + 1):
                if r == n and m == len(edges):
                    continue
                if Fraction(m, r) >= d:
                    return False
    return True


@pytest.mark.parametrize("g", [h for n in range(2, 6) for h in enumerate_graphs(n)
                               if nx.is_connected(to_nx(h)) and h.edge_count])
def test_strict_balance_matches_subgraph_enumeration(g):
    assert is_strictly_balanced(g) == brute_strictly_balanced(g)


def test_copy_examples():
    tri = complete_graph(3)
    assert count_copies(tri, path_graph(2)) == 3
    assert count_copies(tri, path_graph(3)) == 3
    assert count_copies(path_graph(3), path_graph(2)) == 2


@settings(max_examples=40, deadline=None)
@given(random_graphs(6))
def test_injective_homomorphisms_match_networkx_monomorphisms(g):
    pattern = path_graph(3)
    matcher = nx.algorithms.isomorphism.GraphMatcher(to_nx(g), to_nx(pattern))
    expected = sum(1 for _ in matcher.subgraph_monomorphisms_iter())
    assert count_injective_homomorphisms(g, pattern) == expected
    assert count_copies(g, pattern) * automorphism_count(pattern) == expected


# --- subtrees


def test_subtree_examples():
    t = RootedTree.from_edges(3, 0, [(0, 1), (1, 2)])
    assert canonical_code(subtree(t, 0)) == canonical_code(t)
    assert subtree(t, 2).vertex_count == 1
    assert canonical_code(subtree(t, 1)) == canonical_code(RootedTree.from_edges(2, 0, [(0, 1)]))


# --- enumeration and text format


def test_enumerate_graphs_counts():
    # graphs up to isomorphism on 1..5 vertices
    assert [len(enumerate_graphs(n)) for n in range(1, 6)] == [1, 2, 4, 11, 34]


def test_graph_text_round_trip():
    g = Graph.from_edges(5, [(0, 1), (3, 4), (1, 2)])
    text = format_graph(g)
    assert text == "5 3\n0 1\n1 2\n3 4\n"
    assert parse_graph(text) == g
    assert format_graph(parse_graph(text)) == text


@settings(max_examples=60, deadline=None)
@given(random_graphs())
def test_graph_round_trip_property(g):
    assert parse_graph(format_graph(g)) == g


def test_rooted_tree_round_trip():
    t = RootedTree.from_edges(4, 2, [(2, 0), (0, 1), (2, 3)])
    text = format_rooted_tree(t)
    assert parse_rooted_tree(text) == t
    assert format_rooted_tree(parse_rooted_tree(text)) == text


@pytest.mark.parametrize("text", ["", "2\n", "2 1\n", "2 1\n0 5\n", "2 1\n0 0\n", "x y\n"])
def test_malformed_graph_text(text):
    with pytest.raises(GraphError):
        parse_graph(text)


def test_is_tree():
    assert is_tree(path_graph(4))
    assert not is_tree(complete_graph(3))
    assert not is_tree(empty_graph(2))


# --- invariants over whole families


def test_rooted_codes_survive_many_relabelings():
    import random

    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 10)
        t = Graph.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])
        root = rng.randrange(n)
        code = canonical_code(RootedTree.from_graph(t, root))
        for _ in range(20):
            perm = list(range(n))
            rng.shuffle(perm)
            assert canonical_code(RootedTree.from_graph(t.relabel(perm), perm[root])) == code


def test_automorphisms_of_every_tree_up_to_seven_vertices():
    for n in range(1, 8):
        for h in (nx.nonisomorphic_trees(n) if n > 1 else [nx.empty_graph(1)]):
            t = from_nx(h)
            assert automorphism_count(t) == brute_automorphisms(t)


def test_tree_density_is_exact():
    for n in range(1, 10):
        for h in (nx.nonisomorphic_trees(n) if n > 1 else [nx.empty_graph(1)]):
            assert density(from_nx(h)) == Fraction(n - 1, n)


def _brute_images(host: Graph, pattern: Graph) -> int:
    edges = pattern.edges
    return sum(
        all(tuple(sorted((img[u], img[v]))) in host.edges for u, v in edges)
        for img in itertools.permutations(range(host.vertex_count), pattern.vertex_count)
    )


@settings(max_examples=60, deadline=None)
@given(random_graphs(6), random_graphs(4))
def test_copies_times_automorphisms_is_injective_image_count(host, pattern):
    if pattern.vertex_count == 0:
        return
    brute = _brute_images(host, pattern)
    assert count_injective_homomorphisms(host, pattern) == brute
    assert count_copies(host, pattern) * count_injective_homomorphisms(pattern, pattern) == brute


@settings(max_examples=80, deadline=None)
@given(random_graphs(9))
def test_components_partition_the_graph(g):
    comps = connected_components(g)
    seen = [v for c in comps for v in c]
    assert sorted(seen) == list(range(g.vertex_count))
    inside = sum(g.induced(c).edge_count for c in comps)
    assert inside == g.edge_count
    assert sum(c.vertex_count for c in components(g)) == g.vertex_count
