"""Exact Ehrenfeucht-Fraisse games for FO and MSO.

Two routes decide a position:

* :class:`GameEngine` computes the *Ehrenfeucht value* of one side of a
  position bottom-up.  With ``r`` rounds left the value is the atomic type
  of the pinned configuration together with the set of values (``r - 1``
  rounds left) reachable by one element move and, in MSO, by one subset
  move.  Duplicator wins iff both sides have the same value.  Values are
  interned to small integers, so comparing positions is integer equality.
* :func:`search_game` is a plain minimax over Spoiler moves and Duplicator
  replies with a memo table keyed on canonicalised positions.  It is only
  practical for very small structures and serves as an independent check.

Positions never need the interleaving of element and subset moves: the
final check only relates elements to elements and elements to subsets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graphs import Forest, Graph, RootedTree

__all__ = [
    "FO",
    "MSO",
    "SPOILER",
    "DUPLICATOR",
    "Structure",
    "GamePosition",
    "GameOutcome",
    "Move",
    "GameEngine",
    "SizeGuardError",
    "as_structure",
    "initial_position",
    "final_check",
    "game_value",
    "search_game",
    "equiv",
    "classify",
    "ehrenfeucht_value",
    "default_engine",
    "DEFAULT_LIMITS",
]

FO = "fo"
MSO = "mso"
GRAPH = "graph"
ROOTED_TREE = "rooted_tree"
SPOILER = "spoiler"
DUPLICATOR = "duplicator"

#: Vertex limits per logic; the MSO recursion enumerates subsets.
DEFAULT_LIMITS = {FO: 24, MSO: 12}


class SizeGuardError(ValueError):
    pass


def _check_logic(logic: str) -> str:
    logic = logic.lower()
    if logic not in (FO, MSO):
        raise ValueError(f"unknown logic {logic!r}")
    return logic


@dataclass(frozen=True, eq=False)
class Structure:
    """Bitmask view of a graph or rooted tree.

    ``out[u]`` has bit ``v`` set iff ``rel(u, v)``: adjacency for graphs,
    ``u`` is the parent of ``v`` for rooted trees.  ``inn`` is the
    transpose.  ``consts`` holds the root for the tree vocabulary.
    """

    n: int
    out: tuple
    inn: tuple
    consts: tuple
    directed: bool
    source: object = field(default=None, repr=False)


def as_structure(obj, vocab: str = GRAPH) -> Structure:
    if isinstance(obj, Structure):
        return obj
    if isinstance(obj, Forest):
        obj = obj.to_graph()
    if vocab == ROOTED_TREE:
        if not isinstance(obj, RootedTree):
            raise TypeError("the rooted-tree vocabulary needs a RootedTree")
        out = [0] * obj.vertex_count
        inn = [0] * obj.vertex_count
        for v, p in enumerate(obj.parent):
            if p is not None:
                out[p] |= 1 << v
                inn[v] |= 1 << p
        return Structure(obj.vertex_count, tuple(out), tuple(inn), (obj.root,), True, obj)
    if vocab != GRAPH:
        raise ValueError(f"unknown vocabulary {vocab!r}")
    if isinstance(obj, RootedTree):
        obj = obj.to_graph()
    if not isinstance(obj, Graph):
        raise TypeError(f"cannot play on {type(obj).__name__}")
    return Structure(obj.vertex_count, obj.masks, obj.masks, (), False, obj)


# ---------------------------------------------------------------------------
# atomic types


def _mask_set(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _base(s: Structure, terms: Sequence[int], subsets: Sequence[int], u: int) -> int:
    """Relation of vertex ``u`` to the terms and subsets, packed in an int."""
    t = len(terms)
    eq = out = inn = 0
    for j, a in enumerate(terms):
        bit = 1 << j
        if a == u:
            eq |= bit
        if s.out[u] >> a & 1:
            out |= bit
        if s.directed and s.inn[u] >> a & 1:
            inn |= bit
    mem = 0
    for j, m in enumerate(subsets):
        if m >> u & 1:
            mem |= 1 << j
    return eq | out << t | inn << 2 * t | mem << 3 * t


def _atomic(s: Structure, terms: Sequence[int], subsets: Sequence[int]) -> tuple:
    """Atomic type: each term against the earlier ones, then memberships."""
    out = []
    for i, a in enumerate(terms):
        out.append(_base(s, terms[:i], (), a))
    for m in subsets:
        out.append(sum(1 << j for j, a in enumerate(terms) if m >> a & 1))
    return tuple(out)


# ---------------------------------------------------------------------------
# positions


@dataclass(frozen=True)
class Move:
    side: str  # "left" or "right"
    kind: str  # "element" or "subset"
    value: object  # vertex, or frozenset of vertices

    def to_json(self):
        value = sorted(self.value) if self.kind == "subset" else self.value
        return {"side": self.side, "kind": self.kind, "value": value}


@dataclass(frozen=True)
class GamePosition:
    left: object
    right: object
    pinned_elements: tuple = ()
    pinned_subsets: tuple = ()
    rounds_left: int = 0
    logic: str = FO
    vocab: str = GRAPH

    def __post_init__(self):
        object.__setattr__(self, "logic", _check_logic(self.logic))
        object.__setattr__(self, "pinned_elements", tuple(tuple(p) for p in self.pinned_elements))
        object.__setattr__(
            self,
            "pinned_subsets",
            tuple((frozenset(a), frozenset(b)) for a, b in self.pinned_subsets),
        )
        if self.rounds_left < 0:
            raise ValueError("rounds_left must be nonnegative")
        if self.pinned_subsets and self.logic == FO:
            raise ValueError("FO positions cannot pin subsets")

    @property
    def total_rounds(self) -> int:
        return len(self.pinned_elements) + len(self.pinned_subsets) + self.rounds_left

    def sides(self):
        ls, rs = as_structure(self.left, self.vocab), as_structure(self.right, self.vocab)
        lp = tuple(a for a, _ in self.pinned_elements)
        rp = tuple(b for _, b in self.pinned_elements)
        lsub = tuple(_mask_set(a) for a, _ in self.pinned_subsets)
        rsub = tuple(_mask_set(b) for _, b in self.pinned_subsets)
        return (ls, lp, lsub), (rs, rp, rsub)


def initial_position(left, right, k: int, logic: str = FO, vocab: str = GRAPH) -> GamePosition:
    return GamePosition(left, right, (), (), k, logic, vocab)


@dataclass(frozen=True)
class GameOutcome:
    winner: str
    witness: Move | None = None
    rounds: int = 0

    def to_json(self):
        return {
            "winner": self.winner,
            "rounds": self.rounds,
            "witness": self.witness.to_json() if self.witness else None,
        }


def final_check(pos: GamePosition) -> bool:
    """Pinned elements (and the root) span a partial isomorphism respecting
    every pinned subset."""
    (ls, lp, lsub), (rs, rp, rsub) = pos.sides()
    return _atomic(ls, ls.consts + lp, lsub) == _atomic(rs, rs.consts + rp, rsub)


# ---------------------------------------------------------------------------
# the value engine


class GameEngine:
    """Interning calculator of Ehrenfeucht values.

    Values computed by one engine are comparable with each other, so keep
    one engine per (logic, vocabulary) and reuse it.  The memo table only
    ever maps a key to the one value it determines, so concurrent inserts
    are idempotent.
    """

    def __init__(self, logic: str = FO, vocab: str = GRAPH, max_vertices: int | None = None):
        self.logic = _check_logic(logic)
        self.vocab = vocab
        self.max_vertices = DEFAULT_LIMITS[self.logic] if max_vertices is None else max_vertices
        self._intern: dict = {}
        self._memo: dict = {}
        self._structures: dict = {}

    # -- bookkeeping -----------------------------------------------------
    def structure(self, obj) -> Structure:
        if isinstance(obj, Structure):
            s = obj
            # memo keys use id(s); holding a reference keeps ids unique
            self._structures.setdefault((id(s), Structure), (s, s))
        else:
            key = (id(obj), type(obj))
            hit = self._structures.get(key)
            if hit is not None and hit[0] is obj:
                return hit[1]
            s = as_structure(obj, self.vocab)
            self._structures[key] = (obj, s)
        if s.n > self.max_vertices:
            raise SizeGuardError(
                f"{self.logic.upper()} game limited to {self.max_vertices} vertices (got {s.n})"
            )
        return s

    def _id(self, key) -> int:
        v = self._intern.get(key)
        if v is None:
            v = len(self._intern)
            self._intern[key] = v
        return v

    def clear(self) -> None:
        self._intern.clear()
        self._memo.clear()
        self._structures.clear()

    # -- values ------------------------------------------------------------
    def value(self, obj, pins: Sequence[int] = (), subsets: Sequence = (), rounds: int = 0) -> int:
        """Interned value of ``(obj, pins, subsets)`` with ``rounds`` left."""
        s = self.structure(obj)
        subsets = tuple(m if isinstance(m, int) else _mask_set(m) for m in subsets)
        if subsets and self.logic == FO:
            raise ValueError("FO positions cannot pin subsets")
        for p in pins:
            if not 0 <= p < s.n:
                raise ValueError(f"pinned vertex {p} out of range")
        return self._value(s, tuple(pins), subsets, rounds)

    def _value(self, s: Structure, pins: tuple, subsets: tuple, r: int) -> int:
        key = (id(s), pins, subsets, r)
        v = self._memo.get(key)
        if v is not None:
            return v
        terms = s.consts + pins
        atomic = _atomic(s, terms, subsets)
        if r == 0:
            v = self._id((0, atomic))
        elif r == 1:
            # last round: an element move is described by its relation to the
            # configuration; a subset move only colours the terms, which the
            # atomic type already constrains
            elems = frozenset(_base(s, terms, subsets, u) for u in range(s.n))
            v = self._id((1, atomic, elems))
        elif r == 2 and self.logic == MSO:
            elems = frozenset(self._value(s, pins + (u,), subsets, 1) for u in range(s.n))
            # after a subset move with one round left only the pattern
            # (U meets class, class leaves U) per base class matters, so the
            # reachable set is fixed by the class sizes capped at 2
            counts = Counter(_base(s, terms, subsets, u) for u in range(s.n))
            sets = frozenset((c, min(m, 2)) for c, m in counts.items())
            v = self._id((2, atomic, elems, sets))
        else:
            elems = frozenset(self._value(s, pins + (u,), subsets, r - 1) for u in range(s.n))
            if self.logic == MSO:
                sets = frozenset(
                    self._value(s, pins, subsets + (m,), r - 1) for m in range(1 << s.n)
                )
            else:
                sets = None
            v = self._id((r, atomic, elems, sets))
        self._memo[key] = v
        return v

    def value_brute(self, obj, pins=(), subsets=(), rounds: int = 0) -> int:
        """Same as :meth:`value` but without the closed forms for the last two
        rounds; every subset is enumerated.  Used to cross-check them."""
        s = self.structure(obj)
        subsets = tuple(m if isinstance(m, int) else _mask_set(m) for m in subsets)
        return self._brute(s, tuple(pins), subsets, rounds)

    def _brute(self, s, pins, subsets, r):
        atomic = _atomic(s, s.consts + pins, subsets)
        if r == 0:
            return self._id(("b", 0, atomic))
        elems = frozenset(self._brute(s, pins + (u,), subsets, r - 1) for u in range(s.n))
        sets = None
        if self.logic == MSO:
            sets = frozenset(self._brute(s, pins, subsets + (m,), r - 1) for m in range(1 << s.n))
        return self._id(("b", r, atomic, elems, sets))

    # -- game level ------------------------------------------------------
    def equivalent(self, left, right, k: int, lp=(), rp=(), lsub=(), rsub=()) -> bool:
        return self.value(left, lp, lsub, k) == self.value(right, rp, rsub, k)

    def rounds_to_win(self, left, right, k: int, lp=(), rp=(), lsub=(), rsub=()) -> int | None:
        """Fewest rounds in which Spoiler wins, or ``None`` if Duplicator
        survives ``k`` rounds."""
        for r in range(k + 1):
            if self.value(left, lp, lsub, r) != self.value(right, rp, rsub, r):
                return r
        return None

    def winning_move(self, left, right, k: int, lp=(), rp=(), lsub=(), rsub=()) -> Move | None:
        """First Spoiler move after which Duplicator loses, if any."""
        if k == 0:
            return None
        sides = (("left", left, lp, lsub, right, rp, rsub), ("right", right, rp, rsub, left, lp, lsub))
        for name, a, ap, asub, b, bp, bsub in sides:
            sa, sb = self.structure(a), self.structure(b)
            replies = {self._value(sb, tuple(bp) + (v,), tuple(bsub), k - 1) for v in range(sb.n)}
            for u in range(sa.n):
                if self._value(sa, tuple(ap) + (u,), tuple(asub), k - 1) not in replies:
                    return Move(name, "element", u)
        if self.logic == MSO:
            for name, a, ap, asub, b, bp, bsub in sides:
                sa, sb = self.structure(a), self.structure(b)
                replies = {
                    self._value(sb, tuple(bp), tuple(bsub) + (m,), k - 1) for m in range(1 << sb.n)
                }
                for m in range(1 << sa.n):
                    if self._value(sa, tuple(ap), tuple(asub) + (m,), k - 1) not in replies:
                        return Move(name, "subset", frozenset(v for v in range(sa.n) if m >> v & 1))
        return None


_ENGINES: dict = {}


def default_engine(logic: str = FO, vocab: str = GRAPH, max_vertices: int | None = None) -> GameEngine:
    """Shared engine per (logic, vocabulary, limit)."""
    logic = _check_logic(logic)
    key = (logic, vocab, max_vertices)
    eng = _ENGINES.get(key)
    if eng is None:
        eng = _ENGINES[key] = GameEngine(logic, vocab, max_vertices)
    return eng


# ---------------------------------------------------------------------------
# explicit search


def _side_key(s: Structure, pins: tuple, subsets: tuple) -> tuple:
    """Rename vertices by BFS order from the constants and pinned elements
    (remaining vertices in index order) and encode the pinned side."""
    order: list[int] = []
    seen = 0
    starts = list(s.consts) + list(pins) + list(range(s.n))
    for st in starts:
        if seen >> st & 1:
            continue
        seen |= 1 << st
        order.append(st)
        i = len(order) - 1
        while i < len(order):
            u = order[i]
            nb = s.out[u] | s.inn[u]
            for w in range(s.n):
                if nb >> w & 1 and not seen >> w & 1:
                    seen |= 1 << w
                    order.append(w)
            i += 1
    index = {v: i for i, v in enumerate(order)}
    rel = tuple(sorted((index[u], index[w]) for u in range(s.n) for w in range(s.n) if s.out[u] >> w & 1))
    return (
        s.n,
        rel,
        tuple(index[c] for c in s.consts),
        tuple(index[p] for p in pins),
        tuple(_mask_set(index[v] for v in range(s.n) if m >> v & 1) for m in subsets),
    )


def search_game(pos: GamePosition, memo: dict | None = None, dedup: bool = True) -> GameOutcome:
    """Minimax over the explicit game tree.

    Spoiler may move in either structure, with an element or (MSO) a
    subset; Duplicator answers in the other structure with the same kind.
    ``memo`` may be ``None`` to disable memoisation.
    """
    (ls, lp, lsub), (rs, rp, rsub) = pos.sides()
    mso = pos.logic == MSO
    use_memo = memo is not None

    def partial_iso(lp, lsub, rp, rsub):
        return _atomic(ls, ls.consts + lp, lsub) == _atomic(rs, rs.consts + rp, rsub)

    def moves(s, pins, subsets):
        out = [("element", (pins + (u,), subsets)) for u in range(s.n)]
        if mso:
            out += [("subset", (pins, subsets + (m,))) for m in range(1 << s.n)]
        if not dedup:
            return out
        seen, kept = set(), []
        for kind, (p, q) in out:
            key = (kind, _side_key(s, p, q))
            if key not in seen:
                seen.add(key)
                kept.append((kind, (p, q)))
        return kept

    def spoiler_wins(lp, lsub, rp, rsub, r):
        if not partial_iso(lp, lsub, rp, rsub):
            return True
        if r == 0:
            return False
        key = None
        if use_memo:
            key = (_side_key(ls, lp, lsub), _side_key(rs, rp, rsub), r)
            if key in memo:
                return memo[key]
        result = _find_spoiler_move(lp, lsub, rp, rsub, r) is not None
        if use_memo:
            memo[key] = result
        return result

    def _find_spoiler_move(lp, lsub, rp, rsub, r):
        for kind, (np_, nsub) in moves(ls, lp, lsub):
            replies = [x for x in moves(rs, rp, rsub) if x[0] == kind]
            if all(spoiler_wins(np_, nsub, q, qs, r - 1) for _, (q, qs) in replies):
                return Move("left", kind, _describe(kind, np_, nsub, ls))
        for kind, (np_, nsub) in moves(rs, rp, rsub):
            replies = [x for x in moves(ls, lp, lsub) if x[0] == kind]
            if all(spoiler_wins(q, qs, np_, nsub, r - 1) for _, (q, qs) in replies):
                return Move("right", kind, _describe(kind, np_, nsub, rs))
        return None

    r = pos.rounds_left
    if not partial_iso(lp, lsub, rp, rsub):
        return GameOutcome(SPOILER, None, r)
    if r == 0:
        return GameOutcome(DUPLICATOR, None, 0)
    witness = _find_spoiler_move(lp, lsub, rp, rsub, r)
    return GameOutcome(SPOILER if witness else DUPLICATOR, witness, r)


def _describe(kind, pins, subsets, s):
    if kind == "element":
        return pins[-1]
    m = subsets[-1]
    return frozenset(v for v in range(s.n) if m >> v & 1)


# ---------------------------------------------------------------------------
# public operations


def _limit(logic: str, max_vertices: int | None) -> int:
    return DEFAULT_LIMITS[logic] if max_vertices is None else max_vertices


def game_value(
    pos: GamePosition,
    method: str = "values",
    engine: GameEngine | None = None,
    memo: bool = True,
    max_vertices: int | None = None,
) -> GameOutcome:
    """Winner of ``pos`` and, when Spoiler wins, a first winning move.

    ``method="values"`` compares Ehrenfeucht values; ``method="search"``
    runs the explicit minimax (small structures only).
    """
    limit = _limit(pos.logic, max_vertices)
    (ls, lp, lsub), (rs, rp, rsub) = pos.sides()
    if max(ls.n, rs.n) > limit:
        raise SizeGuardError(f"{pos.logic.upper()} game limited to {limit} vertices")
    if method == "search":
        return search_game(pos, {} if memo else None)
    if method != "values":
        raise ValueError(f"unknown method {method!r}")
    eng = engine or GameEngine(pos.logic, pos.vocab, limit)
    r = pos.rounds_left
    if not final_check(pos):
        return GameOutcome(SPOILER, None, r)
    if eng.equivalent(ls, rs, r, lp, rp, lsub, rsub):
        return GameOutcome(DUPLICATOR, None, r)
    return GameOutcome(SPOILER, eng.winning_move(ls, rs, r, lp, rp, lsub, rsub), r)


def equiv(a, b, k: int, logic: str = FO, vocab: str = GRAPH, engine: GameEngine | None = None,
          max_vertices: int | None = None) -> bool:
    """``a`` and ``b`` agree on every sentence of quantifier depth <= ``k``."""
    logic = _check_logic(logic)
    eng = engine or default_engine(logic, vocab, max_vertices)
    return eng.equivalent(a, b, k)


def classify(structures: Sequence, k: int, logic: str = FO, vocab: str = GRAPH,
             engine: GameEngine | None = None, max_vertices: int | None = None) -> list[int]:
    """Class id per structure: the index of the first structure in its class."""
    logic = _check_logic(logic)
    eng = engine or default_engine(logic, vocab, max_vertices)
    first: dict[int, int] = {}
    out = []
    for i, s in enumerate(structures):
        out.append(first.setdefault(eng.value(s, (), (), k), i))
    return out


def ehrenfeucht_value(structure, pins: Sequence[int] = (), subsets: Sequence = (), k: int = 0,
                      logic: str = FO, vocab: str = GRAPH, pool: Sequence = (),
                      engine: GameEngine | None = None) -> int:
    """Class of ``(structure, pins, subsets)`` relative to ``pool``.

    ``pool`` holds ``(structure, pins, subsets)`` candidates; the result is
    the index of the first pool entry in the same class, or ``len(pool)`` if
    none is.  ``k`` counts the pinned elements and subsets, so ``k -
    len(pins) - len(subsets)`` rounds remain.
    """
    logic = _check_logic(logic)
    eng = engine or default_engine(logic, vocab)
    rounds = k - len(pins) - len(subsets)
    if rounds < 0:
        raise ValueError("more pinned objects than rounds")
    target = eng.value(structure, tuple(pins), tuple(subsets), rounds)
    for i, (s, p, q) in enumerate(pool):
        if len(p) != len(pins) or len(q) != len(subsets):
            continue
        if eng.value(s, tuple(p), tuple(q), rounds) == target:
            return i
    return len(pool)
