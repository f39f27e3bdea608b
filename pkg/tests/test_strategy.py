import pytest

from eflab.game import FO, GRAPH, SPOILER, GameEngine
from eflab.graphs import Graph, disjoint_union, empty_graph, path_graph, star_graph
from eflab.strategy import (
    PHASES,
    StrategyError,
    distance_double,
    expected_branch,
    scaled_instances,
    spoiler_play,
)

INSTANCES = scaled_instances()


def test_instance_library_shape():
    assert len(INSTANCES) >= 10
    assert len({i.name for i in INSTANCES}) == len(INSTANCES)
    assert all(max(i.A.vertex_count, i.B.vertex_count) <= 14 for i in INSTANCES)


@pytest.mark.parametrize("inst", INSTANCES, ids=lambda i: i.name)
def test_script_beats_every_duplicator_reply(inst):
    tr = spoiler_play(inst.A, inst.B, inst.S, inst.k, duplicator="exhaustive")
    assert tr.all_won
    assert tr.max_rounds <= inst.k
    assert tr.branch_mismatches == 0
    assert tr.outcome.winner == SPOILER
    assert set(tr.phases) <= set(PHASES)


@pytest.mark.parametrize("inst", INSTANCES[:4], ids=lambda i: i.name)
def test_game_engine_confirms_instances_are_separated(inst):
    # independent route: the interned game values must also see a Spoiler win
    eng = GameEngine(FO, GRAPH, 20)
    assert not eng.equivalent(inst.A, inst.B, inst.k)


def test_optimal_duplicator_playout():
    inst = INSTANCES[0]
    tr = spoiler_play(inst.A, inst.B, inst.S, inst.k, duplicator="optimal")
    assert tr.outcome.winner == SPOILER and tr.playouts == 1
    assert tr.rounds[0].phase == "opening"
    assert tr.to_json()["k"] == inst.k


def test_preconditions():
    p4 = path_graph(4)
    with pytest.raises(StrategyError):
        spoiler_play(p4, p4, p4, 4)  # B contains S
    with pytest.raises(StrategyError):
        spoiler_play(p4, star_graph(3), p4, 3)  # radius too large for k
    with pytest.raises(StrategyError):
        spoiler_play(star_graph(3), path_graph(3), star_graph(3), 4)  # S not diverging
    with pytest.raises(StrategyError):
        spoiler_play(path_graph(3), star_graph(3), p4, 4)  # A lacks S
    triangle = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(StrategyError):
        spoiler_play(disjoint_union([p4, triangle]), star_graph(3), p4, 4)


def test_distance_doubling():
    tr = distance_double(path_graph(3), path_graph(4), [(0, 0), (2, 3)], 2)
    assert tr.all_won and tr.max_rounds <= 2
    far = distance_double(path_graph(5), disjoint_union([path_graph(5), empty_graph(1)]),
                          [(0, 0), (4, 5)], 3)
    assert far.all_won and far.max_rounds <= 3
    with pytest.raises(StrategyError):
        distance_double(path_graph(3), path_graph(3), [(0, 0), (2, 2)], 2)
    with pytest.raises(StrategyError):
        distance_double(path_graph(9), path_graph(10), [(0, 0), (8, 9)], 1)


def test_expected_branch_cases():
    inst = next(i for i in INSTANCES if i.name == "k4-stars")
    # the stars in B have diameter 2 while S has diameter 3
    assert expected_branch(inst.A, inst.B, inst.S, 0) == "diameter"
    inst = next(i for i in INSTANCES if i.name == "k5-shifted-leaf")
    assert expected_branch(inst.A, inst.B, inst.S, 0) == "non-central"
