import itertools

import pytest
from hypothesis import given, settings, strategies as st

from eflab.forests import (
    ClassPool,
    SignatureMismatch,
    find_union_threshold,
    forest_signature,
    signature_from_counts,
    signatures_equal,
    union_congruence_check,
)
from eflab.game import FO, MSO, GameEngine
from eflab.graphs import Graph, disjoint_union, empty_graph, enumerate_graphs, path_graph, star_graph

K1, K2 = empty_graph(1), path_graph(2)
SMALL = [g for n in range(1, 4) for g in enumerate_graphs(n)]
TREES = [K1, K2, path_graph(3), path_graph(4), star_graph(3)]


def test_k1_thresholds():
    assert [find_union_threshold(K1, k, FO).threshold for k in (1, 2, 3)] == [1, 2, 3]


def test_threshold_certificate_fields():
    cert = find_union_threshold(K2, 2, FO, max_probe=8, probes=3)
    assert cert.found and cert.threshold == 2 and cert.probes_verified == 3
    assert cert.to_json()["threshold"] == 2


def test_threshold_not_found_when_probe_budget_is_too_small():
    cert = find_union_threshold(K1, 3, FO, max_probe=2)
    assert not cert.found and cert.threshold is None


def test_threshold_respects_vertex_guard():
    cert = find_union_threshold(path_graph(3), 1, MSO, max_probe=8, max_vertices=7)
    # only 1*P3 vs 2*P3 fits under the guard
    assert cert.probes_verified <= 1


def test_threshold_is_certified_by_games():
    eng = GameEngine(FO)
    for g in TREES[:4]:
        for k in (1, 2):
            a = find_union_threshold(g, k, FO, engine=eng).threshold
            for j in range(1, 4):
                assert eng.equivalent(disjoint_union([g] * a), disjoint_union([g] * (a + j)), k)
            if a > 1:
                assert not eng.equivalent(disjoint_union([g] * (a - 1)), disjoint_union([g] * a), k)


def test_union_congruence_examples():
    assert union_congruence_check(K2, K2, K1, K1, 2)
    assert union_congruence_check(empty_graph(2), empty_graph(3), K2, K2, 2)


@pytest.mark.parametrize("logic,k", [(FO, 1), (FO, 2), (FO, 3), (MSO, 1), (MSO, 2)])
def test_union_congruence_exhaustive_small(logic, k):
    eng = GameEngine(logic)
    classes: dict[int, list] = {}
    for g in SMALL:
        classes.setdefault(eng.value(g, (), (), k), []).append(g)
    pairs = [(a, b) for group in classes.values() for a, b in itertools.product(group, repeat=2)]
    for (h1, h2), (g1, g2) in itertools.product(pairs, repeat=2):
        assert union_congruence_check(h1, h2, g1, g2, k, logic, eng)


def test_signature_examples():
    pool = ClassPool(2, FO)
    sig = forest_signature(empty_graph(5), 2, FO, pool, cap=2)
    assert sig.to_json()["entries"] == {"0": ">=2"}
    empty = forest_signature(empty_graph(0), 2, FO, ClassPool(2, FO))
    assert empty.entries == ()
    mixed = forest_signature(disjoint_union([K1, K2]), 2, FO, ClassPool(2, FO))
    assert sorted(m for _, m in mixed.entries) == [1, 1]


def test_signature_equality_examples():
    pool = ClassPool(2, FO)
    ten = forest_signature(empty_graph(10), 2, FO, pool, cap=2)
    seven = forest_signature(empty_graph(7), 2, FO, pool, cap=2)
    assert signatures_equal(ten, seven)
    one = forest_signature(disjoint_union([K1, K2]), 2, FO, pool, cap=2)
    two = forest_signature(disjoint_union([K1, K1, K2]), 2, FO, pool, cap=2)
    assert not signatures_equal(one, two)
    assert signatures_equal(one, one)


def test_signature_parameter_mismatch():
    a = forest_signature(K1, 2, FO, ClassPool(2, FO), cap=2)
    b = forest_signature(K1, 2, FO, ClassPool(2, FO), cap=3)
    with pytest.raises(SignatureMismatch):
        signatures_equal(a, b)
    with pytest.raises(SignatureMismatch):
        forest_signature(K1, 1, FO, ClassPool(2, FO))


def test_equivalent_components_share_a_class():
    pool = ClassPool(1, FO)
    # every nonempty graph has the same 1-type
    sig = signature_from_counts([(K1, 1), (K2, 1), (path_graph(3), 2)], 1, FO, pool, cap=8)
    assert sig.entries == ((0, 4),)


def test_uniform_cap_is_max_threshold():
    pool = ClassPool(3, FO)
    for g in (K1, K2):
        pool.class_id(g)
    assert pool.uniform_cap() == max(pool.threshold(0), pool.threshold(1))


forests = st.lists(st.sampled_from(TREES), min_size=1, max_size=5).map(disjoint_union)


@settings(max_examples=60, deadline=None)
@given(forests, forests)
def test_equal_signatures_imply_equivalence(f1, f2):
    eng = GameEngine(FO)
    pool = ClassPool(2, FO, engine=eng)
    forest_signature(f1, 2, FO, pool, cap=1)
    forest_signature(f2, 2, FO, pool, cap=1)
    cap = pool.uniform_cap()
    s1 = forest_signature(f1, 2, FO, pool, cap=cap)
    s2 = forest_signature(f2, 2, FO, pool, cap=cap)
    if signatures_equal(s1, s2):
        assert eng.equivalent(f1, f2, 2)


SETTINGS = [(FO, 1), (FO, 2), (FO, 3), (MSO, 1), (MSO, 2)]
POOLS = {s: ClassPool(s[1], s[0], max_vertices=64) for s in SETTINGS}


def _bounded_forest(draw_list):
    out, total = [], 0
    for t in draw_list:
        if total + t.vertex_count > 10:
            break
        out.append(t)
        total += t.vertex_count
    return disjoint_union(out) if out else K1


bounded_forests = st.lists(st.sampled_from(TREES), min_size=1, max_size=6).map(_bounded_forest)


@settings(max_examples=100, deadline=None)
@given(bounded_forests, bounded_forests, st.sampled_from(SETTINGS))
def test_signature_soundness_across_logics(f1, f2, setting):
    logic, k = setting
    pool = POOLS[setting]
    for f in (f1, f2):
        forest_signature(f, k, logic, pool, cap=1)
    cap = pool.uniform_cap()
    if signatures_equal(forest_signature(f1, k, logic, pool, cap=cap),
                        forest_signature(f2, k, logic, pool, cap=cap)):
        assert pool.engine.equivalent(f1, f2, k)


@pytest.mark.parametrize("g", [K1, K2, path_graph(3)])
def test_cap_saturation(g):
    pool = ClassPool(2, FO)
    cap = pool.threshold(pool.class_id(g))
    sigs = [forest_signature(disjoint_union([g] * a), 2, FO, pool, cap=cap) for a in range(cap, cap + 4)]
    assert all(signatures_equal(sigs[0], s) for s in sigs)


@pytest.mark.parametrize("g", [K1, K2, path_graph(3), star_graph(3)])
def test_threshold_is_monotone_in_rounds(g):
    found = [find_union_threshold(g, k, FO).threshold for k in (1, 2, 3)]
    assert found == sorted(found)
