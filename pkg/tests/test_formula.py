import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from eflab.formula import (
    CONNECTIVITY,
    Adj,
    And,
    Const,
    Eq,
    Iff,
    Implies,
    Member,
    Not,
    Or,
    Parent,
    ParseError,
    Quant,
    ScopeError,
    VocabularyError,
    evaluate,
    formula_library,
    free_variables,
    parse,
    quantifier_depth,
    to_text,
    uses_set_quantifiers,
)
from eflab.graphs import Graph, RootedTree, complete_graph, empty_graph, enumerate_graphs, path_graph


# --- a naive oracle: substitute concrete values for variables, evaluate closed atoms


def _subst(f, var, token):
    if isinstance(f, Adj):
        return Adj(token if f.left == var else f.left, token if f.right == var else f.right)
    if isinstance(f, Eq):
        return Eq(token if f.left == var else f.left, token if f.right == var else f.right)
    if isinstance(f, Parent):
        return Parent(token if f.parent == var else f.parent, token if f.child == var else f.child)
    if isinstance(f, Member):
        return Member(token if f.set_var == var else f.set_var, token if f.term == var else f.term)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(_subst(f.body, var, token))
    if isinstance(f, Quant):
        return f if f.var == var else Quant(f.kind, f.var, _subst(f.body, var, token))
    return type(f)(_subst(f.left, var, token), _subst(f.right, var, token))


def _elem(token, s):
    if token == "R":
        return s.root
    return int(token[1:])


def _set(token):
    body = token[2:-1]
    return {int(x) for x in body.split(",") if x}


def oracle(f, s) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Adj):
        u, v = _elem(f.left, s), _elem(f.right, s)
        return (min(u, v), max(u, v)) in s.edges
    if isinstance(f, Eq):
        return _elem(f.left, s) == _elem(f.right, s)
    if isinstance(f, Parent):
        child = _elem(f.child, s)
        return child != s.root and s.parent[child] == _elem(f.parent, s)
    if isinstance(f, Member):
        return _elem(f.term, s) in _set(f.set_var)
    if isinstance(f, Not):
        return not oracle(f.body, s)
    if isinstance(f, And):
        return oracle(f.left, s) and oracle(f.right, s)
    if isinstance(f, Or):
        return oracle(f.left, s) or oracle(f.right, s)
    if isinstance(f, Implies):
        return (not oracle(f.left, s)) or oracle(f.right, s)
    if isinstance(f, Iff):
        return oracle(f.left, s) == oracle(f.right, s)
    n = s.vertex_count
    if f.is_set:
        tokens = ["@{" + ",".join(map(str, c)) + "}" for r in range(n + 1) for c in itertools.combinations(range(n), r)]
    else:
        tokens = [f"@{v}" for v in range(n)]
    results = (oracle(_subst(f.body, f.var, t), s) for t in tokens)
    return any(results) if f.kind == "exists" else all(results)


# --- random sentences


ELEM = ["x", "y", "z"]
SETS = ["X", "Y"]


def formulas(bound: tuple, sets: tuple, depth: int, vocab: str, allow_sets: bool = True):
    atoms = [st.just(Const(True)), st.just(Const(False))]
    if bound:
        b = st.sampled_from(bound)
        if vocab == "graph":
            atoms.append(st.builds(Adj, b, b))
        else:
            terms = st.sampled_from(bound + ("R",))
            atoms.append(st.builds(Parent, terms, terms))
        atoms.append(st.builds(Eq, b, b))
        if sets:
            atoms.append(st.builds(Member, st.sampled_from(sets), b))
    base = st.one_of(atoms)
    if depth == 0:
        return base
    sub = st.deferred(lambda: formulas(bound, sets, depth - 1, vocab, allow_sets))
    options = [
        base,
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Iff, sub, sub),
    ]
    free_elem = [v for v in ELEM if v not in bound]
    if free_elem:
        v = free_elem[0]
        options.append(st.builds(Quant, st.sampled_from(["exists", "forall"]), st.just(v),
                                 formulas(bound + (v,), sets, depth - 1, vocab, allow_sets)))
    free_set = [v for v in SETS if v not in sets] if allow_sets else []
    if free_set:
        v = free_set[0]
        options.append(st.builds(Quant, st.sampled_from(["exists", "forall"]), st.just(v),
                                 formulas(bound, sets + (v,), depth - 1, vocab)))
    return st.one_of(options)


@st.composite
def small_graphs(draw, max_order=4):
    n = draw(st.integers(1, max_order))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, edges)


@st.composite
def small_rooted_trees(draw, max_order=4):
    n = draw(st.integers(1, max_order))
    return RootedTree.from_edges(n, 0, [(draw(st.integers(0, v - 1)), v) for v in range(1, n)])


@settings(max_examples=200, deadline=None)
@given(formulas((), (), 4, "graph"), small_graphs())
def test_evaluate_matches_substitution_oracle_on_graphs(f, g):
    assert evaluate(f, g) == oracle(f, g)


@settings(max_examples=500, deadline=None)
@given(formulas((), (), 4, "graph", allow_sets=False), small_graphs(8))
def test_first_order_evaluation_matches_oracle_up_to_eight_vertices(f, g):
    assert evaluate(f, g) == oracle(f, g)


@settings(max_examples=150, deadline=None)
@given(formulas((), (), 4, "rooted_tree"), small_rooted_trees())
def test_evaluate_matches_substitution_oracle_on_trees(f, t):
    assert evaluate(f, t) == oracle(f, t)


@settings(max_examples=200, deadline=None)
@given(formulas((), (), 4, "graph"))
def test_text_round_trip(f):
    g = parse(to_text(f), "graph")
    assert g == f
    assert quantifier_depth(g) == quantifier_depth(f)


# --- worked examples


def test_parse_examples():
    f = parse("exists x. forall y. !(x ~ y)", "graph")
    assert quantifier_depth(f) == 2
    with pytest.raises(ScopeError):
        parse("exists X. X(x)", "graph")
    with pytest.raises(VocabularyError):
        parse("exists x. P(R, x)", "graph")
    with pytest.raises(VocabularyError):
        parse("exists x. exists y. x ~ y", "rooted_tree")


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse("exists x. (x ~ y", "graph", sentence=False)
    assert info.value.position == len("exists x. (x ~ y")


def test_depth_examples():
    conn = parse(CONNECTIVITY)
    assert quantifier_depth(conn) == 3
    assert quantifier_depth(parse("x ~ y", sentence=False)) == 0
    assert quantifier_depth(parse("exists x. exists y. x ~ y")) == 2
    assert uses_set_quantifiers(conn)
    assert free_variables(parse("exists x. x ~ y", sentence=False)) == {"y"}


def test_evaluate_examples():
    conn = parse(CONNECTIVITY)
    assert evaluate(conn, path_graph(3))
    assert not evaluate(conn, empty_graph(2))
    assert not evaluate(parse("exists x. forall y. !(x ~ y)"), path_graph(2))


@pytest.mark.parametrize("g", [g for n in range(1, 6) for g in enumerate_graphs(n)])
def test_connectivity_sentence_agrees_with_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges)
    assert evaluate(parse(CONNECTIVITY), g) == nx.is_connected(h)


def test_library_contents():
    fo2 = [text for text, _, _ in formula_library(2, "graph", "fo")]
    assert "exists x. exists y. x ~ y" in fo2
    mso3 = formula_library(3, "graph", "mso")
    assert any(f == parse(CONNECTIVITY) for _, f, _ in mso3)
    for k in range(4):
        assert all(d <= k for _, _, d in formula_library(k, "graph", "fo"))
    fo3 = formula_library(3, "graph", "fo")
    assert not any(uses_set_quantifiers(f) for _, f, _ in fo3)


def test_tree_sentences():
    t = RootedTree.from_edges(3, 0, [(0, 1), (0, 2)])
    assert evaluate(parse("exists x. P(R, x)", "rooted_tree"), t)
    assert not evaluate(parse("exists x. P(x, R)", "rooted_tree"), t)
    two_children = parse("exists x. exists y. (!(x = y) & P(R, x) & P(R, y))", "rooted_tree")
    assert evaluate(two_children, t)


def test_complete_graph_sentence():
    clique = parse("forall x. forall y. (x = y | x ~ y)")
    assert evaluate(clique, complete_graph(4))
    assert not evaluate(clique, path_graph(3))


# --- structural properties


@settings(max_examples=50, deadline=None)
@given(small_graphs(6))
def test_negation_flips_every_library_formula(g):
    for _, f, _ in formula_library(3, "graph", "mso"):
        assert evaluate(Not(f), g) == (not evaluate(f, g))


@settings(max_examples=100, deadline=None)
@given(formulas((), (), 3, "graph", allow_sets=False), small_graphs(5))
def test_vacuous_set_quantifier_does_not_change_first_order_truth(f, g):
    # forces the set-enumerating path while the body stays first order
    assert not uses_set_quantifiers(f)
    assert evaluate(Quant("exists", "X", f), g) == evaluate(f, g)
    assert evaluate(Quant("forall", "Y", f), g) == evaluate(f, g)


@settings(max_examples=200, deadline=None)
@given(formulas(("x", "y"), ("X",), 3, "graph"), formulas(("x", "y"), ("X",), 3, "graph"))
def test_depth_is_structural(a, b):
    for op in (And, Or, Implies, Iff):
        assert quantifier_depth(op(a, b)) == max(quantifier_depth(a), quantifier_depth(b))
    assert quantifier_depth(Not(a)) == quantifier_depth(a)
    assert quantifier_depth(Quant("exists", "z", a)) == 1 + quantifier_depth(a)
    assert quantifier_depth(Quant("forall", "Y", b)) == 1 + quantifier_depth(b)
