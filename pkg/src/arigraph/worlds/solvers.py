"""Ground-truth solvers: greedy play with full knowledge of the world."""

from __future__ import annotations

from dataclasses import dataclass

from arigraph.worlds.base import (
    INVENTORY,
    OPPOSITE,
    Game,
    StepResult,
    bfs_distances,
    bfs_route,
)
from arigraph.worlds.cleaning import Cleaning
from arigraph.worlds.cooking import COOKS, KNIFE, MEAL, Cooking
from arigraph.worlds.treasure import TreasureHunt


@dataclass
class Intent:
    action: str
    sub_goal: str
    target_room: str
    explore: bool = False


def _travel(game: Game, target: str) -> str:
    here = game.state.location
    route = bfs_route(game.spec.rooms, here, target)
    if not route:
        raise RuntimeError(f"solver cannot reach {target} from {here}")
    d = route[0]
    return f"go {d}" if game.door_open(here, d) else f"open door to the {d}"


def _towards(game: Game, target: str, local_action: str, sub_goal: str) -> Intent:
    explore = target not in game.visited
    if game.state.location == target:
        return Intent(local_action, sub_goal, target, explore)
    return Intent(_travel(game, target), sub_goal, target, explore)


def _treasure(game: TreasureHunt) -> Intent:
    s = game.state
    for link in game.chain:
        key = link["key"]
        if s.item_locations[key] == INVENTORY:
            continue
        loc = s.item_locations[key]
        room = game.room_of(loc)
        if loc in game.fixtures and not game.is_open(loc):
            return _towards(game, room, f"open {loc}", f"Open the {loc} to get the {key}")
        return _towards(game, room, f"take {key}", f"Take the {key}")
    golden = game.chain[-1]["locker"]
    return _towards(game, game.room_of(golden), f"open {golden}", f"Open the {golden}")


def _nearest(game: Game, rooms: list[str]) -> str:
    dist = bfs_distances(game.spec.rooms, game.state.location)
    return min(rooms, key=lambda r: (dist[r], r))


def _cleaning(game: Cleaning) -> Intent:
    s = game.state
    here = s.location
    for item in s.inventory:
        if game.proper[item] == here:
            furniture = game.fixtures_in(here)[0]
            return Intent(f"put {item} on {furniture}", f"Return the {item} to the {here}", here)
    for item in game.visible_items():
        if item in game.misplaced and not game.correctly_placed(item):
            return Intent(f"take {item}", f"Pick up the misplaced {item}", here)
    targets = {game.proper[i]: i for i in s.inventory}
    for item in game.misplaced:
        loc = s.item_locations[item]
        if loc != INVENTORY and not game.correctly_placed(item):
            targets.setdefault(game.room_of(loc), item)
    room = _nearest(game, sorted(targets))
    item = targets[room]
    goal = (f"Return the {item} to the {room}" if s.item_locations[item] == INVENTORY
            else f"Find and pick up the misplaced {item}")
    return _towards(game, room, "look", goal)


def _cooking(game: Cooking) -> Intent:
    s = game.state
    here = s.location
    if "recipe:read" not in s.credited:
        return _towards(game, "kitchen", "examine cookbook", "Find and read the recipe in the cookbook")
    if s.item_locations.get(MEAL) == INVENTORY:
        return Intent("eat meal", "Eat the meal", here)
    if s.item_locations[KNIFE] != INVENTORY:
        return _towards(game, "kitchen", f"take {KNIFE}", "Take the knife")
    held = [i for i in game.recipe if s.item_locations.get(i) == INVENTORY]
    for item in held:
        cut = game.recipe[item]["cut"]
        if cut and cut not in game.processed(item):
            return Intent(f"{cut} {item} with {KNIFE}", f"{cut.capitalize()} the {item}", here)
    for item in held:
        cook = game.recipe[item]["cook"]
        appliance = COOKS[cook] if cook else None
        if appliance and cook not in game.processed(item) and game.fixtures[appliance]["room"] == here:
            return Intent(f"cook {item} with {appliance}", f"{cook.capitalize()} the {item}", here)
    missing = [i for i in game.recipe if s.item_locations.get(i) not in (INVENTORY, MEAL)]
    if missing:
        rooms = {game.room_of(s.item_locations[i]): i for i in sorted(missing, reverse=True)}
        room = _nearest(game, sorted(rooms))
        return _towards(game, room, f"take {rooms[room]}", f"Find and take the {rooms[room]}")
    for item in held:
        cook = game.recipe[item]["cook"]
        if cook and cook not in game.processed(item):
            room = game.fixtures[COOKS[cook]]["room"]
            return _towards(game, room, "look", f"{cook.capitalize()} the {item} with the {COOKS[cook]}")
    return _towards(game, "kitchen", "prepare meal", "Prepare the meal in the kitchen")


def next_intent(game: Game) -> Intent:
    if isinstance(game, TreasureHunt):
        return _treasure(game)
    if isinstance(game, Cleaning):
        return _cleaning(game)
    if isinstance(game, Cooking):
        return _cooking(game)
    raise TypeError(f"no solver for {type(game).__name__}")


def solve(game: Game, cap: int = 1000) -> list[tuple[str, StepResult]]:
    """Play the game to the end with the ground-truth solver."""
    trace = []
    if not game.annotation.triplets:
        game.reset()
    while game.state.status == "running" and len(trace) < cap:
        action = next_intent(game).action
        trace.append((action, game.step(action)))
    return trace


def coverage_walk(rooms: dict[str, dict[str, str]], start: str) -> list[str]:
    """Moves that traverse every connection at least once, starting and ending at ``start``."""
    actions: list[str] = []
    done: set[frozenset] = set()
    seen = {start}

    def visit(room: str) -> None:
        for d in ("north", "south", "east", "west"):
            nxt = rooms[room].get(d)
            if nxt is None or frozenset((room, nxt)) in done:
                continue
            done.add(frozenset((room, nxt)))
            actions.append(f"go {d}")
            if nxt not in seen:
                seen.add(nxt)
                visit(nxt)
            actions.append(f"go {OPPOSITE[d]}")

    visit(start)
    return actions
