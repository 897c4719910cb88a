import pytest
from scenarios import cleaning_penalty_game, solved, walk_to, wrong_tool_game

from arigraph.worlds import (
    STEP_CAPS,
    TerminalState,
    WorldSpec,
    bfs_route,
    generate_world,
    make_game,
    oracle_annotations,
)
from arigraph.worlds.base import bfs_distances
from arigraph.worlds.solvers import coverage_walk, next_intent

ALL = [(t, d) for t in ("treasure_hunt", "cleaning", "cooking") for d in ("easy", "medium", "hard")]


@pytest.mark.parametrize("task,difficulty", ALL)
def test_generation_is_deterministic_and_connected(task, difficulty):
    a = generate_world(task, difficulty, 7)
    assert a.dumps() == generate_world(task, difficulty, 7).dumps()
    assert a.dumps() != generate_world(task, difficulty, 8).dumps()
    assert set(bfs_distances(a.rooms, a.start)) == set(a.rooms)
    for room, links in a.rooms.items():
        for d, other in links.items():
            assert a.rooms[other][{"north": "south", "south": "north", "east": "west", "west": "east"}[d]] == room


@pytest.mark.parametrize("task,difficulty", ALL)
def test_spec_text_round_trip(task, difficulty, tmp_path):
    spec = generate_world(task, difficulty, 3)
    spec.save(tmp_path / "w.spec")
    again = WorldSpec.load(tmp_path / "w.spec")
    assert again == spec
    assert again.dumps() == spec.dumps()


def test_spec_rejects_garbage():
    with pytest.raises(ValueError):
        WorldSpec.loads("nope")
    with pytest.raises(ValueError):
        WorldSpec.loads("WORLDSPEC v1\nQ\tx")


@pytest.mark.parametrize("seed", range(5))
def test_counts(seed):
    for difficulty, (rooms, keys) in {"easy": (12, 4), "hard": (16, 5)}.items():
        game = make_game(generate_world("treasure_hunt", difficulty, seed))
        assert len(game.spec.rooms) == rooms
        assert len(game.chain) == keys
        assert game.chain[-1]["locker"] == "golden locker"
        assert game.max_score == keys + 1
    clean = make_game(generate_world("cleaning", "medium", seed))
    assert len(clean.spec.rooms) == 9
    assert len(clean.misplaced) == 11
    assert all(not clean.correctly_placed(i) for i in clean.misplaced)
    assert clean.max_score == 22
    for difficulty, (rooms, ingredients) in {"medium": (9, 3), "hard": (12, 4)}.items():
        cook = make_game(generate_world("cooking", difficulty, seed))
        assert len(cook.spec.rooms) == rooms
        assert len(cook.recipe) == ingredients
        steps = sum(bool(r["cut"]) + bool(r["cook"]) for r in cook.recipe.values())
        assert cook.max_score == ingredients + steps + 2


def test_note_chain():
    game = make_game(generate_world("treasure_hunt", "easy", 0))
    game.reset()
    chain = game.chain
    assert game.spec.placements[chain[0]["key"]] == game.spec.start
    for prev, link in zip(chain, chain[1:]):
        # the note found with a key names the locker that key opens
        assert game.spec.placements[link["note"]] == prev["locker"]
        assert game.note_text[prev["note"]] == (prev["key"], prev["locker"])


def test_take_key_scores_once():
    game = make_game(generate_world("treasure_hunt", "easy", 0))
    game.reset()
    key = game.chain[0]["key"]
    result = game.step(f"take {key}")
    assert result.reward == 1
    assert key in game.state.inventory
    ann = oracle_annotations(game)
    assert ((key, "is in", game.spec.start), (key, "is in", "inventory")) in ann.replacements


def test_invalid_action_is_a_noop():
    game = make_game(generate_world("treasure_hunt", "easy", 0))
    game.reset()
    before = (game.state.location, game.state.score)
    result = game.step("dance wildly")
    assert result.observation == "You can't do that."
    assert result.reward == 0
    assert (game.state.location, game.state.score) == before
    assert game.state.moves == 1


def test_entering_room_annotations():
    game = make_game(generate_world("treasure_hunt", "easy", 0))
    game.reset()
    d, dst = sorted(game.spec.rooms[game.spec.start].items())[0]
    game.step(f"go {d}")
    ann = oracle_annotations(game)
    assert ann.location == dst
    assert (dst, f"is {d} of", game.spec.start) in ann.triplets
    for exit_dir in game.spec.rooms[dst]:
        assert (dst, "has exit", exit_dir) in ann.triplets
    for locker in game.fixtures_in(dst):
        assert (dst, "contains", locker) in ann.triplets


@pytest.mark.parametrize("task,difficulty", ALL)
@pytest.mark.parametrize("seed", range(4))
def test_solver_wins_at_max_score(task, difficulty, seed):
    game, trace = solved(task, difficulty, seed)
    assert game.state.status == "won"
    assert game.state.score == game.max_score
    assert len(trace) <= STEP_CAPS[task]
    assert game.state.score == sum(e.delta for e in game.state.events)
    with pytest.raises(TerminalState):
        game.step("look")


@pytest.mark.parametrize("seed", range(4))
def test_hardest_cooking_is_solvable(seed):
    game, trace = solved("cooking", "hard", seed, hardest=True)
    assert game.state.status == "won"
    assert len(trace) <= STEP_CAPS["cooking"]


def test_valid_actions_never_empty_while_running():
    game = make_game(generate_world("cleaning", "medium", 1))
    game.reset()
    while game.state.status == "running":
        assert game.valid_actions()
        game.step(next_intent(game).action)
    assert game.valid_actions() == []


def test_cleaning_penalty_for_correctly_placed_item():
    game, reward = cleaning_penalty_game()
    assert reward == -1
    assert game.state.score == -1


def test_cleaning_scoring_events():
    game, _ = solved("cleaning", "medium", 2)
    picks = [e for e in game.state.events if e.reason.startswith("picked misplaced")]
    returns = [e for e in game.state.events if e.reason.startswith("returned")]
    assert len(picks) == len(returns) == 11


def test_cleaning_repeat_pickups_do_not_score_twice():
    game = make_game(generate_world("cleaning", "medium", 0))
    game.reset()
    item = game.misplaced[0]
    walk_to(game, game.room_of(game.state.item_locations[item]))
    assert game.step(f"take {item}").reward == 1
    furniture = game.fixtures_in(game.state.location)[0]
    assert game.step(f"put {item} on {furniture}").reward == 0
    assert game.step(f"take {item}").reward == 0


def test_cooking_wrong_tool_loses():
    game, result, before = wrong_tool_game()
    assert result.terminal
    assert game.state.status == "lost"
    assert game.state.score == before
    with pytest.raises(TerminalState):
        game.step("look")


def test_cooking_alias_and_recipe_annotations():
    game = make_game(generate_world("cooking", "medium", 0))
    game.reset()
    walk_to(game, "kitchen")
    game.step("examine cookbook")
    ann = oracle_annotations(game)
    for item in game.recipe:
        assert ("recipe", "requires", item) in ann.triplets
    assert game.resolve_alias("grill carrot") == "cook carrot with bbq"


def test_bfs_route_on_spec():
    spec = generate_world("treasure_hunt", "hard", 0)
    dist = bfs_distances(spec.rooms, spec.start)
    for room in spec.rooms:
        assert len(bfs_route(spec.rooms, spec.start, room)) == dist[room]


def test_coverage_walk_traverses_every_link():
    spec = generate_world("treasure_hunt", "hard", 1)
    game = make_game(spec)
    game.reset()
    for action in coverage_walk(spec.rooms, spec.start):
        game.step(action)
    assert game.state.location == spec.start
    links = {(r, d) for r, ls in spec.rooms.items() for d in ls}
    assert {(src, d) for src, d, _ in game.traversed} == links
