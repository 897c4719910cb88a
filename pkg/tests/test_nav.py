import itertools

import pytest
from cases import EXIT_CASES
from graphgen import random_graph
from oracles import bfs_distance

from arigraph.graph import KnowledgeGraph
from arigraph.nav import (
    DIRECTIONS,
    OPPOSITE,
    NoRoute,
    SpatialMap,
    SpatialPatterns,
    all_unexplored_exits,
    expand_goto_actions,
    find_route,
    goto_target,
    next_goto_step,
    unexplored_exits,
)


def _graph(triplets):
    g = KnowledgeGraph()
    g.upsert_triplets(0, triplets)
    return g


@pytest.mark.parametrize("edges,location,expected", EXIT_CASES)
def test_unexplored_exits_crafted(edges, location, expected):
    got = [e.as_triplet() for e in unexplored_exits(_graph(edges), location)]
    assert sorted(got) == sorted(expected)


@pytest.mark.parametrize("exit_dir,spatial_dir", list(itertools.product(DIRECTIONS, DIRECTIONS)))
def test_direction_pairs(exit_dir, spatial_dir):
    g = _graph([("room", "has exit", exit_dir), ("other", f"is {spatial_dir} of", "room")])
    kept = [e.object.canonical for e in unexplored_exits(g, "room")]
    assert kept == ([] if exit_dir == spatial_dir else [exit_dir])


def test_tombstoned_link_reopens_exit():
    g = _graph([("a", "has exit", "east"), ("b", "is east of", "a")])
    assert unexplored_exits(g, "a") == []
    g.apply_replacements(1, [(("b", "is east of", "a"), ("b", "is near", "a"))])
    assert [e.object.canonical for e in unexplored_exits(g, "a")] == ["east"]


def test_all_unexplored_exits_current_first():
    g = _graph([("a", "has exit", "north"), ("b", "has exit", "south"), ("c", "has exit", "west")])
    rooms = [e.subject.canonical for e in all_unexplored_exits(g, "c")]
    assert rooms == ["c", "a", "b"]


def test_spatial_map_symmetry():
    g = random_graph(3, max_edges=80)
    g.upsert_triplets(1, [("a", "is east of", "b"), ("c", "north of", "a")])
    smap = SpatialMap.from_graph(g)
    for src, links in smap.links.items():
        for direction, dst in links:
            assert (OPPOSITE[direction], src) in smap.links[dst]


def test_patterns_are_configurable():
    g = _graph([("a", "leads", "north"), ("b", "lies north of", "a")])
    p = SpatialPatterns(exit=r"\bleads\b", spatial=r"^lies (north|south|east|west) of$")
    assert unexplored_exits(g, "a", p) == []
    assert find_route(g, "a", "b", p) == ["go north"]


def test_find_route_chain():
    g = _graph([("b", "is east of", "a"), ("c", "is east of", "b")])
    assert find_route(g, "a", "c") == ["go east", "go east"]
    assert find_route(g, "c", "a") == ["go west", "go west"]
    assert find_route(g, "a", "a") == []
    assert find_route(g, "nowhere", "nowhere") == []


def test_find_route_ties_prefer_direction_order():
    # two shortest routes a->d: via north (b) or via east (c)
    g = _graph([("b", "is north of", "a"), ("c", "is east of", "a"),
                ("d", "is east of", "b"), ("d", "is north of", "c")])
    assert find_route(g, "a", "d") == ["go north", "go east"]


def test_no_route():
    g = _graph([("b", "is east of", "a"), ("d", "is east of", "c")])
    with pytest.raises(NoRoute):
        find_route(g, "a", "d")
    with pytest.raises(NoRoute):
        find_route(g, "a", "zzz")


def test_route_matches_bfs_on_grid():
    rooms = {}
    names = [[f"r{x}{y}" for y in range(4)] for x in range(4)]
    triplets = []
    for x in range(4):
        for y in range(4):
            if x < 3:
                triplets.append((names[x + 1][y], "is east of", names[x][y]))
            if y < 3:
                triplets.append((names[x][y + 1], "is north of", names[x][y]))
    for s, rel, o in triplets:
        d = rel.split()[1]
        rooms.setdefault(o, {})[d] = s
        rooms.setdefault(s, {})[OPPOSITE[d]] = o
    g = _graph(triplets)
    for a in ("r00", "r12", "r33"):
        for b in rooms:
            assert len(find_route(g, a, b)) == bfs_distance(rooms, a, b)


def test_expand_goto_actions():
    g = _graph([("b", "is east of", "a"), ("c", "is east of", "b"), ("d", "is north of", "c"),
                ("island", "is west of", "sea")])
    actions = expand_goto_actions(g, "a", ["look"])
    assert actions == ["look", "go to b", "go to c", "go to d"]
    assert expand_goto_actions(g, None, ["look"]) == ["look"]
    assert "go to nowhere" not in expand_goto_actions(g, "a", [])


def test_goto_step_follows_live_graph():
    g = _graph([("b", "is east of", "a"), ("c", "is east of", "b")])
    assert next_goto_step(g, "a", "c") == "go east"
    assert next_goto_step(g, "c", "c") is None
    g.apply_replacements(1, [(("c", "is east of", "b"), ("c", "is far from", "b"))])
    with pytest.raises(NoRoute):
        next_goto_step(g, "a", "c")


def test_goto_target():
    assert goto_target("Go to Room B ") == "room b"
    assert goto_target("go east") is None
