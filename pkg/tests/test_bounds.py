import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eflab.bounds import (
    GRAPHS,
    TREES,
    Irrational,
    LawVerdict,
    TowerExpr,
    class_count_bound,
    count_small_structures,
    ehr_bound,
    law_region,
    lit,
    log_star,
    min_representative_bound,
    pow2,
    representative_composite,
    tower,
    tower_int,
    verify_constants,
    z_budget,
)
from eflab.game import FO, GRAPH, GameEngine
from eflab.graphs import enumerate_graphs


# --- towers


def test_tower_values():
    assert [tower(s).value() for s in (1, 2, 3, 4)] == [2, 4, 16, 65536]
    t5 = tower(5)
    assert t5.log2() == 65536.0
    assert str(t5) == "T(5)"
    with pytest.raises(ValueError):
        tower(0)


def test_tower_int_matches_iteration():
    v = 2
    for s in range(1, 5):
        assert tower_int(s) == v
        v = 2**v


def test_log_star_examples():
    assert [log_star(k) for k in (1, 2, 4, 16, 17)] == [1, 1, 2, 3, 4]
    assert log_star(5) == 3 and log_star(6) == 3


def test_symbolic_towers_compare():
    assert tower(6) > tower(5) > lit(2**100)
    assert tower(10) >= tower(10)
    assert pow2(tower(7)) == tower(8)
    assert lit(2) * tower(3) == 32


# --- TowerExpr against big integers


def _exprs():
    leaf = st.integers(0, 40).map(lit)

    def extend(children):
        return st.one_of(
            st.tuples(children, children).map(lambda p: p[0] + p[1]),
            st.tuples(children, children).map(lambda p: p[0] * p[1]),
            children.filter(lambda e: e.value() is not None and e.value() <= 3000).map(pow2),
        )

    return st.recursive(leaf, extend, max_leaves=6)


def _int_of(e: TowerExpr) -> int:
    # independent evaluation from the expression tree
    if e.op == "lit":
        return e.args[0]
    if e.op == "pow2":
        return 2 ** _int_of(e.args[0])
    a, b = (_int_of(x) for x in e.args)
    return a + b if e.op == "add" else a * b


@settings(max_examples=1000, deadline=None)
@given(_exprs(), _exprs())
def test_comparison_agrees_with_big_integers(a, b):
    x, y = _int_of(a), _int_of(b)
    assert (a < b) == (x < y)
    assert (a <= b) == (x <= y)
    assert (a == b) == (x == y)
    assert (a > b) == (x > y)


@settings(max_examples=300, deadline=None)
@given(_exprs(), _exprs())
def test_magnitude_order_agrees_when_clearly_separated(a, b):
    # the route used above the cutoff, exercised where exact values exist
    x, y = _int_of(a), _int_of(b)
    if x < 2 or y < 2:
        return
    lx, ly = math.log2(x) if x < 2**1000 else x.bit_length(), math.log2(y) if y < 2**1000 else y.bit_length()
    if abs(lx - ly) > 2:
        assert (a.magnitude() < b.magnitude()) == (x < y)


def test_unevaluable_arithmetic():
    big = pow2(tower(5))
    assert big.value() is None
    assert big + 1 > big * 0 + tower(5)
    assert big.to_json()["evaluable"] is False


# --- EHR bounds


def test_ehr_bound_bases():
    for k in (2, 3, 4):
        assert ehr_bound(k, k, 0) == 2 ** (k * k - k)
        assert ehr_bound(k, 1, k - 1) == 2 ** (k * k - k)
    assert ehr_bound(4, 2, 2, TREES).value() == 3 * 2**13
    assert ehr_bound(5, 5, 0, TREES) == pow2(2**5 - 2)
    with pytest.raises(ValueError):
        ehr_bound(2, 2, 1)
    with pytest.raises(ValueError):
        ehr_bound(2, -1, 0)


@pytest.mark.parametrize("structure", [GRAPHS, TREES])
def test_ehr_bound_recursion_identity(structure):
    for k in range(1, 6):
        for t, l in itertools.product(range(k + 1), repeat=2):
            if t + l < k:
                b = ehr_bound(k, t, l, structure)
                assert b.op == "pow2"
                inner = b.args[0]
                assert inner.op == "add"
                assert inner.args[0] is ehr_bound(k, t + 1, l, structure)
                assert inner.args[1] is ehr_bound(k, t, l + 1, structure)


def test_small_recursion_value():
    # k = 1, graphs: bound(1,1,0) = bound(1,0,1) = 1, so bound(1,0,0) = 4
    assert ehr_bound(1, 0, 0).value() == 4


# --- class counts and representatives


def test_class_count_examples():
    bound, audit = class_count_bound(2, "mso", GRAPHS)
    assert bound == tower(5) and str(bound) == "T(5)"
    assert audit.all_evaluable_hold
    assert all(ok is True for _, ok in audit.checks)
    assert len(audit.checks) == 3
    bound, audit = class_count_bound(4, "mso", TREES)
    assert str(bound) == "T(8)"
    with pytest.raises(ValueError):
        class_count_bound(1, "mso", GRAPHS)
    with pytest.raises(ValueError):
        class_count_bound(3, "mso", TREES)
    with pytest.raises(ValueError):
        class_count_bound(3, "fo", GRAPHS)


def test_class_count_audits_hold_where_evaluable():
    for k in (2, 3, 4, 5):
        assert class_count_bound(k, "mso", GRAPHS)[1].all_evaluable_hold
    for k in (5, 6):
        assert class_count_bound(k, "mso", TREES)[1].all_evaluable_hold


def test_min_representative_examples():
    assert str(min_representative_bound(4)) == "T(10)"
    assert str(min_representative_bound(5)) == "T(11)"
    with pytest.raises(ValueError):
        min_representative_bound(3)


def test_representative_composite():
    assert representative_composite(3, 2).value() == 6**3
    assert representative_composite(tower(5), 100).value() is None


def test_empirical_counts_below_bounds():
    four = [g for n in range(1, 5) for g in enumerate_graphs(n)]
    eng = GameEngine(FO, GRAPH)
    for k in (1, 2):
        classes = len({eng.value(g, (), (), k) for g in four})
        assert ehr_bound(k, 0, 0) >= classes
        assert lit(classes) <= tower(k + 2 + log_star(k))


# --- z budget


def test_z_budget_examples():
    for k in (1, 2, 3):
        z, table = z_budget(k, [1] * (k + 1))
        assert z.value() == 2**k
        for i in range(k + 1):
            for m in range(i + 1):
                if (i, m) in table:
                    assert table[(i, m)].value() == 2 ** (k - i)
    z, table = z_budget(1, [1, 7])
    assert table[(0, 0)].value() == 8 and z.value() == 14
    with pytest.raises(ValueError):
        z_budget(2, [1, 1])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(1, 9), min_size=k + 1, max_size=k + 1))))
def test_z_budget_audit_holds(args):
    k, f = args
    z, table = z_budget(k, f)
    assert all(ok for _, _, ok in table["audit"])
    assert table[(0, 0)] <= z


# --- constants


def test_small_structure_counts():
    assert count_small_structures(2, "directed_forests") == 3
    assert count_small_structures(4, "directed_forests") == 201
    assert count_small_structures(4, "equality_patterns") == 51
    with pytest.raises(ValueError):
        count_small_structures(5, "directed_forests")


def test_directed_forest_oracle():
    # oriented forests on t labelled vertices: sum over forests of 2^edges
    def brute(t):
        pairs = list(itertools.combinations(range(t), 2))
        total = 0
        for r in range(len(pairs) + 1):
            for es in itertools.combinations(pairs, r):
                comp = list(range(t))
                ok = True
                for u, v in es:
                    a, b = comp[u], comp[v]
                    if a == b:
                        ok = False
                        break
                    comp = [a if c == b else c for c in comp]
                if ok:
                    total += 2 ** len(es)
        return total

    assert [brute(t) for t in range(1, 5)] == [count_small_structures(t, "directed_forests") for t in range(1, 5)]


def test_equality_patterns_are_bell_minus_one():
    bell = [1, 1, 2, 5, 15, 52]
    assert [count_small_structures(t, "equality_patterns") for t in range(1, 5)] == [bell[t + 1] - 1 for t in range(1, 5)]


def test_verify_constants_report():
    rep = verify_constants()
    assert len(rep["rows"]) == 12
    fe = [r for r in rep["rows"] if r["kind"] != "membership_patterns"]
    assert all(r["match"] for r in fe)
    assert rep["arithmetic"]["holds"]
    assert rep["arithmetic"]["sum"] == 3**4 * 5**3 + 201 * 51


# --- law regions


def _verdicts(vs):
    return {(v.law, v.kind): v.status for v in vs}


def test_law_region_examples():
    v = _verdicts(law_region("3/2"))
    assert v[("FO", "zero-one law")] == "fails" and v[("MSO", "zero-one law")] == "fails"
    v = _verdicts(law_region(Fraction(13, 10)))
    assert v[("FO", "zero-one law")] == "holds" and v[("MSO", "zero-one law")] == "holds"
    v = _verdicts(law_region(k=7, l=16))
    assert v[("FO", "zero-one k-law")] == "fails"
    v = _verdicts(law_region(k=4, l=tower(10)))
    assert v[("MSO", "zero-one k-law")] == "holds"
    assert v[("FO", "zero-one k-law")] == "holds"


def test_law_region_errors():
    with pytest.raises(ValueError):
        law_region("3/2", 7, 16)
    with pytest.raises(ValueError):
        law_region()
    with pytest.raises(ValueError):
        law_region(0)
    with pytest.raises(ValueError):
        law_region(1.5)


def test_open_verdicts_carry_no_citation():
    with pytest.raises(ValueError):
        LawVerdict("FO", "zero-one k-law", "open", "something", 3)
    with pytest.raises(ValueError):
        LawVerdict("FO", "zero-one k-law", "holds", None, 3)


@settings(max_examples=300, deadline=None)
@given(st.fractions(min_value=Fraction(1, 40), max_value=3, max_denominator=40), st.one_of(st.none(), st.integers(1, 9)))
def test_law_region_is_total_and_consistent(alpha, k):
    out = law_region(alpha, k)
    assert out == law_region(alpha, k)
    for v in out:
        assert (v.status == "open") == (v.citation is None)
    d = _verdicts(out)
    # MSO law holding implies the FO law; FO failing implies MSO failing
    for kind in ("zero-one law", "zero-one k-law"):
        if (("MSO", kind)) in d:
            if d[("MSO", kind)] == "holds":
                assert d[("FO", kind)] == "holds"
            if d[("FO", kind)] == "fails":
                assert d[("MSO", kind)] == "fails"


def test_irrational_alpha():
    v = _verdicts(law_region(Irrational(math.sqrt(2)), 3))
    assert v[("FO", "zero-one law")] == "holds" and v[("MSO", "zero-one law")] == "holds"
    v = _verdicts(law_region("irrational:0.7071"))
    assert v[("FO", "zero-one law")] == "holds" and v[("MSO", "zero-one law")] == "fails"
