"""Explicit trees and forests: catalogs, T0 forests, diverging trees and the
reduction of rooted trees to small equivalent representatives."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .game import FO, MSO, ROOTED_TREE, GameEngine, _check_logic
from .graphs import (
    Forest,
    Graph,
    GraphError,
    RootedTree,
    _children_from,
    _rooted_codes,
    canonical_code,
    is_tree,
    metrics,
    subtree,
    subtree_codes,
    tree_canonical_code,
    tree_centers,
)

__all__ = [
    "CATALOG_LIMIT",
    "TreeCatalog",
    "ReductionBudget",
    "ReductionResult",
    "ConstructionError",
    "enumerate_trees",
    "tree_from_code",
    "rooted_trees",
    "build_T0",
    "is_diverging",
    "build_diverging_tree",
    "diverging_order_range",
    "reduce_tree",
    "reduce_tree_report",
]

CATALOG_LIMIT = 12
DIVERGING_LIMIT = 16


class ConstructionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# catalogs


def tree_from_code(code: bytes) -> Graph:
    """Tree whose rooted code is ``code``; vertices numbered in preorder."""
    edges = []
    stack: list[int] = []
    count = 0
    for ch in code:
        if ch == ord("("):
            if stack:
                edges.append((stack[-1], count))
            stack.append(count)
            count += 1
        else:
            stack.pop()
    return Graph.from_edges(count, edges)


@dataclass(frozen=True)
class TreeCatalog:
    max_order: int
    trees: tuple
    codes: tuple

    def by_order(self, order: int) -> list[Graph]:
        return [t for t in self.trees if t.vertex_count == order]

    def counts(self) -> list[int]:
        c = Counter(t.vertex_count for t in self.trees)
        return [c[i] for i in range(1, self.max_order + 1)]

    def __len__(self):
        return len(self.trees)


def enumerate_trees(max_order: int) -> TreeCatalog:
    """One tree per isomorphism class on 1..``max_order`` vertices, grown by
    leaf additions and deduplicated by canonical code."""
    if max_order > CATALOG_LIMIT:
        raise GraphError(f"tree catalog limited to {CATALOG_LIMIT} vertices")
    if max_order < 1:
        return TreeCatalog(max_order, (), ())
    layer = {tree_canonical_code(Graph(1, frozenset())): None}
    codes = list(layer)
    for order in range(2, max_order + 1):
        nxt: dict[bytes, None] = {}
        for code in layer:
            t = tree_from_code(code)
            for v in range(t.vertex_count):
                grown = Graph(order, t.edges | {(v, order - 1)})
                nxt.setdefault(tree_canonical_code(grown), None)
        layer = dict.fromkeys(sorted(nxt))
        codes.extend(layer)
    return TreeCatalog(max_order, tuple(tree_from_code(c) for c in codes), tuple(codes))


def rooted_trees(max_order: int) -> list[RootedTree]:
    """One rooted tree per rooted-isomorphism class on 1..``max_order`` vertices."""
    seen: dict[bytes, RootedTree] = {}
    for t in enumerate_trees(max_order).trees:
        for r in range(t.vertex_count):
            rt = RootedTree.from_graph(t, r)
            seen.setdefault(canonical_code(rt), rt)
    return [seen[c] for c in sorted(seen, key=lambda c: (len(c), c))]


def build_T0(l: int, a: int, include_order: str = "<=l+1") -> Forest:
    """``a`` copies of every tree on at most ``l + 1`` (or ``l``) vertices."""
    if l < 1 or a < 0:
        raise ValueError("need l >= 1 and a >= 0")
    orders = {"<=l+1": l + 1, "<=l": l}
    if include_order not in orders:
        raise ValueError("include_order must be '<=l+1' or '<=l'")
    catalog = enumerate_trees(orders[include_order])
    return Forest(tuple(t for t in catalog.trees for _ in range(a)))


# ---------------------------------------------------------------------------
# diverging trees


def is_diverging(t: Graph) -> bool:
    """Rooted at each center, every vertex has pairwise nonisomorphic
    branches."""
    if not is_tree(t):
        raise GraphError("is_diverging needs a tree")
    for c in tree_centers(t):
        children = _children_from(t, c)
        codes = _rooted_codes(children, c)
        for u in range(t.vertex_count):
            branch = [codes[w] for w in children[u]]
            if len(set(branch)) != len(branch):
                return False
    return True


def diverging_order_range(i: int) -> tuple[int, int]:
    """Orders for which a diverging tree of radius ``i + 1`` is guaranteed:
    ``2i + 2`` up to ``2 T(i - 1) + 1``."""
    from .bounds import tower_int

    top = tower_int(i - 1) if i - 1 <= 4 else None
    return 2 * i + 2, (2 * top + 1 if top is not None else math.inf)


def _radius(g: Graph) -> int:
    return metrics(g).radius


def build_diverging_tree(order: int, i: int, limit: int = DIVERGING_LIMIT) -> Graph:
    """A diverging tree with ``order`` vertices and radius ``i + 1``.

    Starts from the path on ``2i + 2`` vertices and adds leaves one at a
    time.  Attachments that keep the tree diverging are tried first; the
    search backtracks over all attachments (deduplicated by canonical code,
    pruned on radius) when the greedy path gets stuck.
    """
    if i < 3:
        raise ValueError("i must be at least 3")
    low, high = diverging_order_range(i)
    if not low <= order <= high:
        raise ValueError(f"order {order} outside [{low}, {high}] for i={i}")
    if order > limit:
        raise ConstructionError(f"construction limited to {limit} vertices")
    radius = i + 1
    seed = Graph.from_edges(low, [(v, v + 1) for v in range(low - 1)])
    seen: set[bytes] = set()

    def grow(t: Graph) -> Graph | None:
        if t.vertex_count == order:
            return t if is_diverging(t) and _radius(t) == radius else None
        cands = []
        for v in range(t.vertex_count):
            g = Graph(t.vertex_count + 1, t.edges | {(v, t.vertex_count)})
            code = tree_canonical_code(g)
            if code in seen or _radius(g) > radius:
                continue
            seen.add(code)
            cands.append((not is_diverging(g), g))
        for _, g in sorted(cands, key=lambda c: c[0]):
            found = grow(g)
            if found is not None:
                return found
        return None

    result = grow(seed)
    if result is None:
        raise ConstructionError(f"no diverging tree of order {order} and radius {radius} found")
    return result


# ---------------------------------------------------------------------------
# reduction of rooted trees


@dataclass(frozen=True)
class ReductionBudget:
    """Caps for reducing a rooted tree: at most ``z`` children per class of
    sibling subtrees and depth at most ``depth_cap``.

    ``f_values[b]`` is the number of classes of rooted trees with ``b``
    marked objects (elements or subsets).  ``exact`` says whether the
    values are exact class counts or merely inputs.
    """

    k: int
    f_values: tuple
    z: int
    depth_cap: int
    exact: bool = False
    logic: str = MSO

    def __post_init__(self):
        if self.z < 1 or self.depth_cap < 1:
            raise ValueError("caps must be positive")

    @classmethod
    def from_f_values(cls, k: int, f_values, logic: str = MSO, exact: bool = False) -> "ReductionBudget":
        f = tuple(int(x) for x in f_values)
        if len(f) != k + 1:
            raise ValueError("need f(k, 0..k)")
        z = 2**k * math.prod(f[1:])
        return cls(k, f, z, f[0], exact, logic)

    @classmethod
    def with_caps(cls, k: int, z: int, depth_cap: int | None = None, logic: str = MSO) -> "ReductionBudget":
        """Explicit caps; ``depth_cap`` defaults to unbounded-in-practice."""
        return cls(k, (), z, depth_cap or 10**9, False, logic)

    @classmethod
    def empirical(cls, k: int, logic: str = MSO, max_order: int = 6,
                  engine: GameEngine | None = None) -> "ReductionBudget":
        """Class counts measured on all rooted trees up to ``max_order``
        vertices with every choice of marked elements and subsets.  These
        are lower bounds for the true counts; the resulting caps are checked
        by the game in verified mode."""
        logic = _check_logic(logic)
        eng = engine or GameEngine(logic, ROOTED_TREE)
        trees = rooted_trees(max_order)
        f = []
        for beta in range(k + 1):
            best = 0
            for t_el in range(beta + 1):
                n_sub = beta - t_el
                if n_sub and logic == FO:
                    continue
                values = set()
                for t in trees:
                    for pins in _tuples(t.vertex_count, t_el):
                        for subs in _tuples(1 << t.vertex_count, n_sub):
                            values.add(eng.value(t, pins, subs, k - beta))
                best = max(best, len(values))
            f.append(best)
        return cls.from_f_values(k, f, logic, exact=False)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "logic": self.logic,
            "f_values": list(self.f_values),
            "z": self.z,
            "depth_cap": self.depth_cap,
            "exact": self.exact,
        }


def _tuples(n: int, length: int):
    if length == 0:
        yield ()
        return
    for head in range(n):
        for rest in _tuples(n, length - 1):
            yield (head,) + rest


@dataclass
class ReductionResult:
    tree: RootedTree
    verified: bool
    passes: int
    removed: int
    log: list = field(default_factory=list)

    def to_json(self) -> dict:
        from .graphs import format_rooted_tree

        return {
            "tree": format_rooted_tree(self.tree),
            "vertex_count": self.tree.vertex_count,
            "depth": self.tree.depth,
            "verified": self.verified,
            "passes": self.passes,
            "removed": self.removed,
            "log": self.log,
        }


def _keep(t, keep: set[int]) -> RootedTree:
    order = [v for v in t.order if v in keep]
    index = {v: i for i, v in enumerate(order)}
    parent = tuple(None if v == t.root else index[t.parent[v]] for v in order)
    return RootedTree(len(order), 0, parent)


def _descendants(t: RootedTree, v: int) -> set[int]:
    out = [v]
    for u in out:
        out.extend(t.children[u])
    return set(out)


def _replace_subtree(t: RootedTree, w1: int, w2: int) -> RootedTree:
    """Hang ``T(w2)`` where ``T(w1)`` was."""
    keep = (set(range(t.vertex_count)) - _descendants(t, w1)) | _descendants(t, w2)
    return _keep(_Reparented(t, w2, t.parent[w1]), keep)


class _Reparented:
    """Minimal view of ``t`` with one vertex moved under a new parent."""

    def __init__(self, t: RootedTree, v: int, new_parent: int):
        self.root = t.root
        parent = list(t.parent)
        parent[v] = new_parent
        self.parent = parent
        children: list[list[int]] = [[] for _ in range(t.vertex_count)]
        for u in t.order:
            for c in t.children[u]:
                if c != v:
                    children[u].append(c)
            if u == new_parent:
                children[u].append(v)
        order = [t.root]
        for u in order:
            order.extend(children[u])
        self.order = order


def reduce_tree_report(t: RootedTree, k: int, budget: ReductionBudget, logic: str | None = None,
                       verify: bool = True, max_vertices: int | None = None) -> ReductionResult:
    """Shrink ``t`` without changing its ``k``-equivalence class.

    Repeats two steps until neither changes the tree: keep at most ``z``
    children per class of sibling subtrees, and replace ``T(w1)`` by
    ``T(w2)`` whenever ``w2`` lies below ``w1`` (both non-root) and the two
    subtrees are equivalent.  With ``verify=True`` subtree classes come from
    the game and the result is checked against the input; otherwise only
    isomorphic siblings are merged and the result is not checked.
    """
    logic = _check_logic(logic or budget.logic)
    eng = GameEngine(logic, ROOTED_TREE, max_vertices) if verify else None
    current = t
    passes = 0
    log: list[str] = []

    def classes(tree: RootedTree) -> list:
        if eng is None:
            return list(subtree_codes(tree))
        return [eng.value(subtree(tree, v), (), (), k) for v in range(tree.vertex_count)]

    while True:
        passes += 1
        cls = classes(current)
        # sibling cap
        drop: set[int] = set()
        for u in current.order:
            seen: Counter = Counter()
            for c in current.children[u]:
                seen[cls[c]] += 1
                if seen[cls[c]] > budget.z:
                    drop |= _descendants(current, c)
        if drop:
            log.append(f"sibling cap removed {len(drop)} vertices")
            current = _keep(current, set(range(current.vertex_count)) - drop)
            continue
        if eng is None:
            break
        # path collapse: first (w1, w2) in BFS order of w2
        depth = current.depths
        swap = None
        for w2 in current.order:
            a = current.parent[w2]
            while a is not None and a != current.root:
                if cls[a] == cls[w2]:
                    swap = (a, w2)
                a = current.parent[a]
            if swap:
                break
        if swap is None:
            break
        w1, w2 = swap
        log.append(f"replaced subtree at depth {depth[w1]} by the one at depth {depth[w2]}")
        current = _replace_subtree(current, w1, w2)

    verified = False
    if eng is not None:
        if eng.value(current, (), (), k) != eng.value(t, (), (), k):
            raise ConstructionError("reduced tree is not equivalent to the input")
        verified = True
    return ReductionResult(current, verified, passes, t.vertex_count - current.vertex_count, log)


def reduce_tree(t: RootedTree, k: int, budget: ReductionBudget, logic: str | None = None,
                verify: bool = True, max_vertices: int | None = None) -> RootedTree:
    return reduce_tree_report(t, k, budget, logic, verify, max_vertices).tree
