"""scikit-learn style wrappers around the game engine.

These follow the estimator conventions (constructor stores parameters
verbatim, ``fit`` learns state in trailing-underscore attributes,
``get_params``/``set_params`` come from :class:`BaseEstimator`), so they
can sit in a pipeline that turns structures into feature vectors.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .constructions import ReductionBudget, reduce_tree
from .forests import ClassPool, forest_signature
from .game import FO, GRAPH, MSO, ROOTED_TREE, GameEngine
from .graphs import Forest, Graph, RootedTree, is_tree, connected_components

__all__ = [
    "check_structures",
    "EhrenfeuchtClusterer",
    "ForestSignatureTransformer",
    "TreeReducer",
]


def check_structures(X, vocab: str = GRAPH, forests: bool = False) -> list:
    """Validate a sequence of structures for ``vocab``.  Forests are
    converted to graphs; with ``forests=True`` every graph must be
    acyclic."""
    if isinstance(X, (Graph, RootedTree, Forest)):
        raise TypeError("expected a sequence of structures, got a single structure")
    out = []
    for i, s in enumerate(X):
        if isinstance(s, Forest):
            s = s.to_graph()
        if vocab == ROOTED_TREE:
            if not isinstance(s, RootedTree):
                raise TypeError(f"item {i}: rooted-tree vocabulary needs RootedTree, got {type(s).__name__}")
        elif vocab == GRAPH:
            if isinstance(s, RootedTree):
                s = s.to_graph()
            if not isinstance(s, Graph):
                raise TypeError(f"item {i}: expected Graph, got {type(s).__name__}")
            if forests and not all(is_tree(s.induced(c)) for c in connected_components(s)):
                raise ValueError(f"item {i}: graph is not a forest")
        else:
            raise ValueError(f"unknown vocabulary {vocab!r}")
        out.append(s)
    if not out:
        raise ValueError("need at least one structure")
    return out


def _check_logic(logic: str) -> str:
    if logic not in (FO, MSO):
        raise ValueError(f"logic must be {FO!r} or {MSO!r}")
    return logic


class EhrenfeuchtClusterer(ClusterMixin, BaseEstimator):
    """Groups structures by ``k``-equivalence.

    ``labels_[i]`` is the index of the first training structure equivalent
    to structure ``i``.  :meth:`predict` maps new structures to those ids,
    or ``-1`` when no training structure is equivalent.
    """

    def __init__(self, k: int = 2, logic: str = FO, vocab: str = GRAPH, max_vertices: int | None = None):
        self.k = k
        self.logic = logic
        self.vocab = vocab
        self.max_vertices = max_vertices

    def fit(self, X, y=None):
        _check_logic(self.logic)
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        X = check_structures(X, self.vocab)
        self.engine_ = GameEngine(self.logic, self.vocab, self.max_vertices)
        first: dict[int, int] = {}
        labels = []
        for i, s in enumerate(X):
            labels.append(first.setdefault(self.engine_.value(s, (), (), self.k), i))
        self.value_to_label_ = first
        self.labels_ = np.asarray(labels, dtype=np.int64)
        self.n_classes_ = len(first)
        return self

    def predict(self, X):
        check_is_fitted(self, "labels_")
        X = check_structures(X, self.vocab)
        return np.asarray(
            [self.value_to_label_.get(self.engine_.value(s, (), (), self.k), -1) for s in X],
            dtype=np.int64,
        )


class ForestSignatureTransformer(TransformerMixin, BaseEstimator):
    """Forests to capped class-multiplicity vectors.

    ``fit`` registers the component classes seen in training and fixes a
    common cap (the largest certified union threshold, unless ``cap`` is
    given).  Columns of :meth:`transform` follow class-id order; classes
    first met at transform time are dropped and counted in
    ``n_unseen_``.
    """

    def __init__(self, k: int = 2, logic: str = FO, cap: int | None = None, max_probe: int = 8):
        self.k = k
        self.logic = logic
        self.cap = cap
        self.max_probe = max_probe

    def fit(self, X, y=None):
        _check_logic(self.logic)
        X = check_structures(X, GRAPH, forests=True)
        self.pool_ = ClassPool(self.k, self.logic, max_probe=self.max_probe)
        for g in X:
            forest_signature(g, self.k, self.logic, self.pool_, cap=1)
        self.n_classes_ = len(self.pool_)
        self.cap_ = self.cap if self.cap is not None else self.pool_.uniform_cap()
        return self

    def transform(self, X):
        check_is_fitted(self, "pool_")
        X = check_structures(X, GRAPH, forests=True)
        out = np.zeros((len(X), self.n_classes_), dtype=np.int64)
        self.n_unseen_ = 0
        for row, g in enumerate(X):
            sig = forest_signature(g, self.k, self.logic, self.pool_, cap=self.cap_)
            for cid, m in sig.entries:
                if cid < self.n_classes_:
                    out[row, cid] = m
                else:
                    self.n_unseen_ += 1
        return out


class TreeReducer(TransformerMixin, BaseEstimator):
    """Shrinks rooted trees to smaller ``k``-equivalent ones."""

    def __init__(self, k: int = 2, logic: str = MSO, z: int | None = None, verify: bool = True,
                 budget_order: int = 6):
        self.k = k
        self.logic = logic
        self.z = z
        self.verify = verify
        self.budget_order = budget_order

    def fit(self, X=None, y=None):
        _check_logic(self.logic)
        if self.z is not None:
            self.budget_ = ReductionBudget.with_caps(self.k, self.z, logic=self.logic)
        else:
            self.budget_ = ReductionBudget.empirical(self.k, self.logic, self.budget_order)
        return self

    def transform(self, X):
        check_is_fitted(self, "budget_")
        X = check_structures(X, ROOTED_TREE)
        return [reduce_tree(t, self.k, self.budget_, self.logic, self.verify) for t in X]
