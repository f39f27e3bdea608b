"""Scripted Spoiler for FO games on forests.

Setting: ``A`` has a component isomorphic to a diverging tree ``S`` and
``B`` has no copy of ``S``.  The script:

1. pins a central vertex ``x1`` of ``S^A``; Duplicator answers ``y1`` in
   some component ``S^B`` of ``B``;
2. ``diameter``: if the diameters differ, pins two vertices at distance
   one more than the smaller diameter in the larger component, then wins
   by distance halving;
3. ``non-central``: if the diameters agree but ``y1`` is not central, pins
   a vertex farther from ``y1`` than the radius, then halves distances;
4. ``branch-descent``: if ``S^B`` is diverging, walks down both rooted
   trees, always entering a branch with no isomorphic counterpart;
5. ``path-selection``: otherwise walks in ``B`` to a vertex ``t`` with two
   isomorphic branches rooted at ``z1``, ``z2`` and continues with a depth
   race, a descent, or the ``z2`` move.

Duplicator is either the game engine's best reply ("optimal") or every
reply in turn ("exhaustive").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .game import DUPLICATOR, FO, GRAPH, SPOILER, GameEngine, GameOutcome, Move
from .graphs import (
    Forest,
    Graph,
    _children_from,
    _rooted_codes,
    canonical_code,
    connected_components,
    contains_copy,
    disjoint_union,
    is_tree,
    metrics,
    tree_canonical_code,
)
from .constructions import is_diverging

__all__ = [
    "RoundRecord",
    "StrategyTranscript",
    "StrategyError",
    "spoiler_play",
    "distance_double",
    "expected_branch",
    "PHASES",
    "Instance",
    "scaled_instances",
]

PHASES = ("opening", "diameter", "non-central", "distance-doubling", "branch-descent",
          "path-selection", "depth-race", "twin-branch")


class StrategyError(ValueError):
    """Precondition violated or the script met a case it does not cover."""


@dataclass(frozen=True)
class RoundRecord:
    round: int
    side: str  # side Spoiler moved on
    spoiler_vertex: int
    duplicator_vertex: int | None
    phase: str
    note: str = ""

    def to_json(self) -> dict:
        return {
            "round": self.round,
            "spoiler_side": self.side,
            "spoiler_vertex": self.spoiler_vertex,
            "duplicator_vertex": self.duplicator_vertex,
            "phase": self.phase,
            "note": self.note,
        }


@dataclass
class StrategyTranscript:
    rounds: list
    outcome: GameOutcome
    phases: list
    k: int
    playouts: int = 1
    all_won: bool = True
    max_rounds: int = 0
    branches: dict = field(default_factory=dict)
    branch_mismatches: int = 0

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "rounds": [r.to_json() for r in self.rounds],
            "outcome": self.outcome.to_json(),
            "phases": self.phases,
            "playouts": self.playouts,
            "all_won": self.all_won,
            "max_rounds": self.max_rounds,
            "branches": self.branches,
            "branch_mismatches": self.branch_mismatches,
        }


# ---------------------------------------------------------------------------
# board


class _Side:
    def __init__(self, g: Graph):
        self.g = g
        self.n = g.vertex_count
        m = metrics(g)
        self.dist = m.distances
        self.comp_of = [0] * self.n
        self.comps = connected_components(g)
        for i, c in enumerate(self.comps):
            for v in c:
                self.comp_of[v] = i
        self.ecc = [max(self.dist[v][u] for u in self.comps[self.comp_of[v]]) for v in range(self.n)]

    def comp(self, v: int) -> tuple[int, ...]:
        return self.comps[self.comp_of[v]]

    def diameter(self, v: int) -> int:
        return max(self.ecc[u] for u in self.comp(v))

    def radius(self, v: int) -> int:
        return min(self.ecc[u] for u in self.comp(v))

    def path(self, a: int, b: int) -> list[int]:
        """A shortest path from ``a`` to ``b``."""
        out = [a]
        while out[-1] != b:
            u = out[-1]
            out.append(next(w for w in self.g.adjacency[u] if self.dist[w][b] == self.dist[u][b] - 1))
        return out

    def rooted(self, root: int):
        """Children lists, parent map and subtree codes of the component
        of ``root`` rooted at ``root``."""
        children = _children_from(self.g, root)
        codes = _rooted_codes(children, root)
        parent = {root: None}
        for u in codes:
            for c in children[u]:
                parent[c] = u
        depth = {}
        for u in _preorder(children, root):
            depth[u] = 0 if parent[u] is None else depth[parent[u]] + 1
        height = {}
        for u in reversed(_preorder(children, root)):
            height[u] = max((height[c] + 1 for c in children[u]), default=0)
        return children, parent, codes, height


def _preorder(children, root):
    out = [root]
    for u in out:
        out.extend(children[u])
    return out


def _as_graph(x) -> Graph:
    if isinstance(x, Forest):
        return x.to_graph()
    return x


def _ceil_log2(d) -> int:
    return 0 if d <= 1 else math.ceil(math.log2(d))


class _Game:
    """Pinned vertices of one playout."""

    def __init__(self, a: _Side, b: _Side, k: int):
        self.sides = {"A": a, "B": b}
        self.k = k
        self.xs: list[int] = []
        self.ys: list[int] = []

    def copy(self):
        g = _Game(self.sides["A"], self.sides["B"], self.k)
        g.xs, g.ys = list(self.xs), list(self.ys)
        return g

    @property
    def played(self) -> int:
        return len(self.xs)

    def pin(self, side: str, v: int, reply: int):
        if side == "A":
            self.xs.append(v)
            self.ys.append(reply)
        else:
            self.xs.append(reply)
            self.ys.append(v)

    def violated(self) -> bool:
        a, b = self.sides["A"], self.sides["B"]
        for i in range(self.played):
            for j in range(i):
                da, db = a.dist[self.xs[i]][self.xs[j]], b.dist[self.ys[i]][self.ys[j]]
                if (da == 0) != (db == 0) or (da == 1) != (db == 1):
                    return True
        return False

    def best_mismatch(self):
        """Pinned pair with differing distances that halving settles
        fastest: ``(rounds, small, side, i, j)``."""
        a, b = self.sides["A"], self.sides["B"]
        best = None
        for i in range(self.played):
            for j in range(i):
                da, db = a.dist[self.xs[i]][self.xs[j]], b.dist[self.ys[i]][self.ys[j]]
                if da == db:
                    continue
                side = "A" if da < db else "B"
                small = min(da, db)
                cand = (_ceil_log2(small), small, side, j, i)
                if best is None or cand < best:
                    best = cand
        return best


# ---------------------------------------------------------------------------
# Duplicator


class _Duplicator:
    def __init__(self, mode: str, a: Graph, b: Graph, k: int, engine: GameEngine | None):
        if mode not in ("optimal", "exhaustive"):
            raise ValueError("duplicator must be 'optimal' or 'exhaustive'")
        self.mode = mode
        self.a, self.b, self.k = a, b, k
        self.engine = engine

    def replies(self, game: _Game, side: str, v: int) -> list[int]:
        other = "B" if side == "A" else "A"
        n = game.sides[other].n
        if self.mode == "exhaustive":
            return list(range(n))
        return [self._best(game, side, v, n)]

    def _best(self, game: _Game, side: str, v: int, n: int) -> int:
        eng = self.engine
        left = game.k - game.played - 1
        best, best_key = 0, None
        for w in range(n):
            xs = game.xs + [v if side == "A" else w]
            ys = game.ys + [w if side == "A" else v]
            r = eng.rounds_to_win(self.a, self.b, left, tuple(xs), tuple(ys))
            key = math.inf if r is None else r
            if best_key is None or key > best_key:
                best, best_key = w, key
        return best


# ---------------------------------------------------------------------------
# the script as a generator of Spoiler moves


class _Script:
    """Spoiler's moves for one playout.  :meth:`next_move` inspects the
    pinned vertices and returns ``(side, vertex, phase, note)``."""

    def __init__(self, game: _Game, s_code: bytes, s_diam: int, s_rad: int):
        self.game = game
        self.s_code = s_code
        self.s_diam = s_diam
        self.s_rad = s_rad
        self.phase = "opening"
        self.plan: list = []  # queued (side, vertex, phase, note)
        self.mode = None  # current continuing sub-strategy
        self.branch = None
        self.state: dict = {}

    # helpers --------------------------------------------------------------
    def _a(self):
        return self.game.sides["A"]

    def _b(self):
        return self.game.sides["B"]

    def copy(self, game):
        s = _Script(game, self.s_code, self.s_diam, self.s_rad)
        s.phase, s.plan, s.mode, s.branch = self.phase, list(self.plan), self.mode, self.branch
        s.state = dict(self.state)
        return s

    def next_move(self):
        g = self.game
        if g.played == 0:
            return self._opening()
        if g.played == 1 and self.branch is None:
            self._choose_branch()
        if self.plan:
            return self.plan.pop(0)
        mis = g.best_mismatch()
        if self.mode == "halving" or (mis is not None and self.mode not in ("descent", "race", "walk")):
            return self._halve(mis)
        if self.mode == "walk":
            return self._after_walk()
        if self.mode == "race":
            return self._race()
        if self.mode == "descent":
            return self._descent()
        raise StrategyError(f"no move planned in phase {self.phase}")

    # opening ------------------------------------------------------------
    def _opening(self):
        a = self._a()
        for comp in a.comps:
            g = a.g.induced(comp)
            if is_tree(g) and tree_canonical_code(g) == self.s_code:
                centre = min((v for v in comp), key=lambda v: (a.ecc[v], v))
                self.state["SA"] = comp
                return ("A", centre, "opening", "central vertex of the S component")
        raise StrategyError("A has no component isomorphic to S")

    def _choose_branch(self):
        a, b, g = self._a(), self._b(), self.game
        x1, y1 = g.xs[0], g.ys[0]
        da, db = a.diameter(x1), b.diameter(y1)
        if da != db:
            self.branch = "diameter"
            self._plan_diameter(da, db)
            return
        if b.ecc[y1] != b.radius(y1):
            self.branch = "non-central"
            target = next(v for v in b.comp(y1) if b.dist[y1][v] == a.ecc[x1] + 1)
            self.plan.append(("B", target, "non-central", f"vertex at distance {a.ecc[x1] + 1} from y1"))
            self.mode = "halving"
            return
        comp_b = b.g.induced(b.comp(y1))
        if is_diverging(comp_b):
            self.branch = "branch-descent"
            self.mode = "descent"
            self.state["pair"] = (0, 0)
            self.state["twin"] = False
            return
        self.branch = "path-selection"
        self._plan_walk()

    # diameter mismatch --------------------------------------------------
    def _plan_diameter(self, da: int, db: int):
        g = self.game
        x1, y1 = g.xs[0], g.ys[0]
        if da < db:
            big, small, centre, side = self._b(), da, y1, "B"
        else:
            big, small, centre, side = self._a(), db, x1, "A"
        comp = big.comp(centre)
        best = None
        for u in comp:
            if big.dist[centre][u] > small:
                continue
            for w in comp:
                if big.dist[u][w] == small + 1:
                    key = (big.dist[centre][u], big.dist[centre][w], u, w)
                    if best is None or key < best:
                        best = key
        if best is None:
            raise StrategyError("no pair at distance diameter + 1 found")
        _, _, u, w = best
        note = f"pair at distance {small + 1} in the larger component"
        if u != centre:
            self.plan.append((side, u, "diameter", note))
        else:
            note += " (first vertex is the already pinned centre)"
        self.plan.append((side, w, "diameter", note))
        self.mode = "halving"

    # distance halving ---------------------------------------------------------
    def _halve(self, mis):
        if mis is None:
            raise StrategyError("distance phase without a distance mismatch")
        _, small, side, i, j = mis
        g = self.game
        board = g.sides[side]
        ends = (g.xs[i], g.xs[j]) if side == "A" else (g.ys[i], g.ys[j])
        path = board.path(*ends)
        mid = path[len(path) // 2]
        self.mode = "halving"
        return (side, mid, "distance-doubling", f"midpoint of a pinned pair at distance {small}")

    # descent ------------------------------------------------------------------
    def _roots(self):
        g = self.game
        key = ("rooted", g.xs[0], g.ys[0])
        if key not in self.state:
            self.state[key] = (self._a().rooted(g.xs[0]), self._b().rooted(g.ys[0]))
        return self.state[key]

    def _descent(self):
        """Enter a branch with no isomorphic counterpart on the other side."""
        (ca, pa, codes_a, ha), (cb, pb, codes_b, hb) = self._roots()
        g = self.game
        i = self.state["pair"][0]
        xi, yi = g.xs[i], g.ys[i]
        bx = {codes_a[c]: c for c in ca[xi]}
        by = {codes_b[c]: c for c in cb[yi]}
        for code, c in sorted(bx.items()):
            if code not in by:
                self.state["pair"] = (g.played, g.played)
                return ("A", c, "branch-descent", "child of x whose branch has no copy below y")
        for code, c in sorted(by.items()):
            if code not in bx:
                self.state["pair"] = (g.played, g.played)
                return ("B", c, "branch-descent", "child of y whose branch has no copy below x")
        raise StrategyError("descent reached isomorphic subtrees")

    def _plan_walk(self):
        (ca, pa, codes_a, ha), (cb, pb, codes_b, hb) = self._roots()
        y1 = self.game.ys[0]
        order = _preorder(cb, y1)
        t = None
        for u in reversed(order):
            seen = {}
            for c in cb[u]:
                if codes_b[c] in seen:
                    t, z1, z2 = u, seen[codes_b[c]], c
                    break
                seen[codes_b[c]] = c
            if t is not None:
                break
        if t is None:
            raise StrategyError("non-diverging component without repeated branches")
        path = [z1]
        while pb[path[-1]] != y1 and path[-1] != y1:
            path.append(pb[path[-1]])
        path = [v for v in reversed(path) if v != y1]
        for v in path:
            note = "walk towards t" if v != z1 else "first of two isomorphic branches"
            self.plan.append(("B", v, "path-selection", note))
        self.state.update(t=t, z1=z1, z2=z2)
        self.mode = "walk"

    def _after_walk(self):
        (ca, pa, codes_a, ha), (cb, pb, codes_b, hb) = self._roots()
        g = self.game
        xi, z1 = g.xs[-1], g.ys[-1]
        if ha[xi] != hb[z1]:
            self.mode = "race"
            self.state["race"] = "A" if ha[xi] > hb[z1] else "B"
            return self._race()
        if codes_a[xi] != codes_b[z1]:
            self.mode = "descent"
            self.state["pair"] = (g.played - 1, g.played - 1)
            return self._descent()
        self.mode = "descent"
        self.state["pair"] = (g.played, g.played)
        return ("B", self.state["z2"], "twin-branch", "second isomorphic branch z2")

    def _race(self):
        """Walk down the deeper side; Duplicator runs out of children."""
        (ca, pa, codes_a, ha), (cb, pb, codes_b, hb) = self._roots()
        g = self.game
        side = self.state["race"]
        v = g.xs[-1] if side == "A" else g.ys[-1]
        children, height = (ca, ha) if side == "A" else (cb, hb)
        nxt = max(children[v], key=lambda c: (height[c], -c))
        return (side, nxt, "depth-race", "child on the deeper side")


# ---------------------------------------------------------------------------
# playouts


def _check_instance(A: Graph, B: Graph, S: Graph, k: int):
    if not is_tree(S):
        raise StrategyError("S must be a tree")
    if not is_diverging(S):
        raise StrategyError("S must be diverging")
    if metrics(S).radius > k - 2:
        raise StrategyError("S must have radius at most k - 2")
    for g in (A, B):
        if any(not is_tree(g.induced(c)) for c in connected_components(g)):
            raise StrategyError("A and B must be forests")
    code = tree_canonical_code(S)
    if not any(tree_canonical_code(A.induced(c)) == code for c in connected_components(A)):
        raise StrategyError("A has no component isomorphic to S")
    if any(contains_copy(B.induced(c), S) for c in connected_components(B) if len(c) >= S.vertex_count):
        raise StrategyError("B contains a copy of S")


def spoiler_play(A, B, S: Graph, k: int, duplicator: str = "optimal",
                 engine: GameEngine | None = None, max_playouts: int = 2_000_000) -> StrategyTranscript:
    """Play the script against Duplicator.

    With ``duplicator="optimal"`` the transcript is the single playout
    against the engine's best replies.  With ``"exhaustive"`` every reply
    is explored; the returned transcript is a longest playout, and
    ``all_won`` says whether Spoiler won every playout within ``k`` rounds.
    ``branches`` counts the case branch taken after the opening.
    """
    A, B = _as_graph(A), _as_graph(B)
    _check_instance(A, B, S, k)
    a, b = _Side(A), _Side(B)
    sm = metrics(S)
    if duplicator == "optimal" and engine is None:
        engine = GameEngine(FO, GRAPH, max(A.vertex_count, B.vertex_count))
    dup = _Duplicator(duplicator, A, B, k, engine)
    root_game = _Game(a, b, k)
    root = _Script(root_game, tree_canonical_code(S), sm.diameter, sm.radius)

    stats = {"playouts": 0, "all_won": True, "worst": None, "branches": {}, "mismatch": 0}
    expected = {}

    def finish(records, script, won_at):
        stats["playouts"] += 1
        if stats["playouts"] > max_playouts:
            raise StrategyError("too many playouts")
        if won_at is None:
            stats["all_won"] = False
        br = script.branch or "opening"
        if script.branch is not None:
            y1 = records[0].duplicator_vertex
            if y1 not in expected:
                expected[y1] = expected_branch(A, B, S, y1)
            if expected[y1] != br:
                stats["mismatch"] += 1
        stats["branches"][br] = stats["branches"].get(br, 0) + 1
        length = won_at if won_at is not None else math.inf
        worst = stats["worst"]
        if worst is None or (worst[0] is not None and (won_at is None or length > worst[0])):
            stats["worst"] = (won_at, list(records))

    def play(game: _Game, script: _Script, records: list):
        if game.played >= k:
            finish(records, script, None)
            return
        side, v, phase, note = script.next_move()
        script.phase = phase
        for w in dup.replies(game, side, v):
            g2 = game.copy()
            g2.pin(side, v, w)
            s2 = script.copy(g2)
            rec = records + [RoundRecord(g2.played, side, v, w, phase, note)]
            if g2.violated():
                finish(rec, s2, g2.played)
            else:
                play(g2, s2, rec)

    play(root_game, root, [])
    won_at, records = stats["worst"]
    outcome = GameOutcome(SPOILER if won_at is not None else DUPLICATOR,
                          Move("left" if records[0].side == "A" else "right", "element",
                               records[0].spoiler_vertex) if records else None,
                          won_at or k)
    phases = []
    for r in records:
        if not phases or phases[-1] != r.phase:
            phases.append(r.phase)
    return StrategyTranscript(records, outcome, phases, k, stats["playouts"], stats["all_won"],
                              won_at or k, stats["branches"], stats["mismatch"])


def expected_branch(A, B, S: Graph, y1: int) -> str:
    """Case the analysis prescribes when Duplicator answers the opening with
    ``y1`` (independent of the script's own bookkeeping)."""
    B = _as_graph(B)
    b = _Side(B)
    sm = metrics(S)
    if b.diameter(y1) != sm.diameter:
        return "diameter"
    if b.ecc[y1] != b.radius(y1):
        return "non-central"
    return "branch-descent" if is_diverging(B.induced(b.comp(y1))) else "path-selection"


def distance_double(A, B, pins, rounds: int, duplicator: str = "exhaustive",
                    engine: GameEngine | None = None) -> StrategyTranscript:
    """Halving play from pinned pairs ``[(x, y), ...]`` whose distances
    disagree somewhere.  Wins within ``rounds`` rounds when ``rounds`` is
    at least ``ceil(log2(d))`` for the smaller distance ``d`` of the best
    mismatched pair."""
    A, B = _as_graph(A), _as_graph(B)
    a, b = _Side(A), _Side(B)
    total = len(pins) + rounds
    game = _Game(a, b, total)
    for x, y in pins:
        game.xs.append(x)
        game.ys.append(y)
    mis = game.best_mismatch()
    if mis is None:
        raise StrategyError("pinned distances agree")
    if mis[0] > rounds:
        raise StrategyError(f"halving needs {mis[0]} rounds, only {rounds} given")
    if duplicator == "optimal" and engine is None:
        engine = GameEngine(FO, GRAPH, max(A.vertex_count, B.vertex_count))
    dup = _Duplicator(duplicator, A, B, total, engine)
    stats = {"playouts": 0, "all_won": True, "worst": None}

    def play(g: _Game, records):
        if g.violated():
            stats["playouts"] += 1
            if stats["worst"] is None or (stats["worst"][0] is not None and g.played > stats["worst"][0]):
                stats["worst"] = (g.played, records)
            return
        if g.played >= total:
            stats["playouts"] += 1
            stats["all_won"] = False
            stats["worst"] = (None, records)
            return
        script = _Script(g, b"", 0, 0)
        script.mode = "halving"
        side, v, phase, note = script._halve(g.best_mismatch())
        for w in dup.replies(g, side, v):
            g2 = g.copy()
            g2.pin(side, v, w)
            play(g2, records + [RoundRecord(g2.played, side, v, w, phase, note)])

    play(game, [])
    won_at, records = stats["worst"]
    if won_at is None and stats["all_won"]:
        won_at = len(pins)
    outcome = GameOutcome(SPOILER if stats["all_won"] else DUPLICATOR, None,
                          (won_at or total) - len(pins))
    return StrategyTranscript(records, outcome, ["distance-doubling"] if records else [], total,
                              stats["playouts"], stats["all_won"], (won_at or total) - len(pins))


# ---------------------------------------------------------------------------
# instance library


@dataclass(frozen=True)
class Instance:
    name: str
    k: int
    S: Graph
    A: Graph
    B: Graph


def _leafy_path(n: int, at: int) -> Graph:
    """Path on ``n`` vertices with one extra leaf hanging off vertex ``at``."""
    return Graph.from_edges(n + 1, [(i, i + 1) for i in range(n - 1)] + [(at, n)])


def _star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def _path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def scaled_instances() -> list[Instance]:
    """Small instances for k in {4, 5}: ``S`` is diverging with radius
    ``k - 2``, ``A`` contains ``S`` as a component, ``B`` avoids ``S``,
    and every forest has at most 14 vertices."""
    u = disjoint_union
    k1 = Graph.from_edges(1, [])
    p4, p6 = _path(4), _path(6)
    s5 = _leafy_path(6, 2)
    return [
        Instance("k4-star-mix", 4, p4, u([p4, k1]), u([_star(3), _path(3), _path(2), k1])),
        Instance("k4-short-paths", 4, p4, u([p4, _path(2)]), u([_path(3), _path(3), _path(2)])),
        Instance("k4-stars", 4, p4, p4, u([_star(4), _star(2)])),
        Instance("k4-twin-stars", 4, p4, u([p4, k1, k1]), u([_star(3), _star(3), _path(3)])),
        Instance("k5-two-paths", 5, s5, u([s5, k1]), u([p6, p6])),
        Instance("k5-shifted-leaf", 5, s5, s5, _leafy_path(6, 1)),
        Instance("k5-shifted-leaf-extra", 5, s5, u([s5, _path(2)]), u([_leafy_path(6, 1), _path(4)])),
        Instance("k5-path-vs-shorter", 5, p6, u([p6, _path(3)]), u([_path(5), _path(5), k1])),
        Instance("k5-path-pair", 5, s5, s5, u([p6, _path(5)])),
        Instance("k5-star-path", 5, s5, s5, u([_star(3), _path(5), _path(4)])),
    ]
