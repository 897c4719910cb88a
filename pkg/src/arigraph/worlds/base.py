"""Room/fixture/item engine shared by the three task families.

Locations are plain strings: a room name, a fixture name (a surface or a
container standing in a room), ``"inventory"``, or a task-specific sink
such as ``"meal"``. Every observation comes with an :class:`OracleAnnotation`
listing the triplets a perfect extractor would pull out of it.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

DIRECTIONS = ("north", "south", "east", "west")
OPPOSITE = {"north": "south", "south": "north", "east": "west", "west": "east"}
DELTA = {"north": (0, 1), "south": (0, -1), "east": (1, 0), "west": (-1, 0)}
INVENTORY = "inventory"
TASKS = ("treasure_hunt", "cleaning", "cooking")
DIFFICULTIES = ("easy", "medium", "hard")


class TerminalState(RuntimeError):
    """An action was sent to a finished game."""


def fold(text: str) -> str:
    return " ".join(text.split()).lower()


def join_names(names: list[str]) -> str:
    if len(names) <= 1:
        return "".join(names)
    return ", ".join(names[:-1]) + " and " + names[-1]


@dataclass
class WorldSpec:
    task: str
    difficulty: str
    seed: int
    rooms: dict[str, dict[str, str]]
    start: str
    placements: dict[str, str]
    payload: dict = field(default_factory=dict)

    def dumps(self) -> str:
        lines = ["WORLDSPEC v1", f"T\t{self.task}\t{self.difficulty}\t{self.seed}", f"S\t{self.start}"]
        for room in sorted(self.rooms):
            lines.append(f"R\t{room}")
        for room in sorted(self.rooms):
            for d in DIRECTIONS:
                if d in self.rooms[room]:
                    lines.append(f"L\t{room}\t{d}\t{self.rooms[room][d]}")
        for item in sorted(self.placements):
            lines.append(f"I\t{item}\t{self.placements[item]}")
        lines.append("X\t" + json.dumps(self.payload, sort_keys=True, ensure_ascii=False))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> WorldSpec:
        lines = [ln for ln in text.split("\n") if ln]
        if not lines or lines[0] != "WORLDSPEC v1":
            raise ValueError("not a world spec")
        rooms: dict[str, dict[str, str]] = {}
        placements: dict[str, str] = {}
        task = difficulty = start = ""
        seed = 0
        payload: dict = {}
        for no, line in enumerate(lines[1:], start=2):
            f = line.split("\t")
            if f[0] == "T":
                task, difficulty, seed = f[1], f[2], int(f[3])
            elif f[0] == "S":
                start = f[1]
            elif f[0] == "R":
                rooms.setdefault(f[1], {})
            elif f[0] == "L":
                rooms.setdefault(f[1], {})[f[2]] = f[3]
            elif f[0] == "I":
                placements[f[1]] = f[2]
            elif f[0] == "X":
                payload = json.loads(f[1])
            else:
                raise ValueError(f"line {no}: unknown record {f[0]!r}")
        return cls(task, difficulty, seed, rooms, start, placements, payload)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> WorldSpec:
        return cls.loads(Path(path).read_text(encoding="utf-8"))


@dataclass
class ScoreEvent:
    move: int
    delta: int
    reason: str


@dataclass
class GameState:
    location: str
    item_locations: dict[str, str]
    containers: dict[str, str] = field(default_factory=dict)
    item_states: dict[str, list[str]] = field(default_factory=dict)
    open_doors: set[frozenset] = field(default_factory=set)
    score: int = 0
    events: list[ScoreEvent] = field(default_factory=list)
    status: str = "running"
    moves: int = 0
    credited: set[str] = field(default_factory=set)

    @property
    def inventory(self) -> list[str]:
        return sorted(i for i, loc in self.item_locations.items() if loc == INVENTORY)


@dataclass
class OracleAnnotation:
    triplets: list[tuple[str, str, str]] = field(default_factory=list)
    replacements: list[tuple[tuple[str, str, str], tuple[str, str, str]]] = field(default_factory=list)
    location: str = ""

    def add(self, s: str, r: str, o: str) -> None:
        t = (s, r, o)
        if t not in self.triplets:
            self.triplets.append(t)

    def replace(self, old: tuple[str, str, str], new: tuple[str, str, str]) -> None:
        self.replacements.append((old, new))
        self.add(*new)


@dataclass
class StepResult:
    observation: str
    reward: int
    valid_actions: list[str]
    terminal: bool


def grid_layout(rng: random.Random, names: list[str], extra_links: float = 0.2) -> dict[str, dict[str, str]]:
    """Place rooms on a grid by random growth; link along growth plus some extra neighbours."""
    coords = {names[0]: (0, 0)}
    cells = {(0, 0): names[0]}
    rooms: dict[str, dict[str, str]] = {names[0]: {}}
    for name in names[1:]:
        while True:
            parent = rng.choice(sorted(coords))
            d = rng.choice(DIRECTIONS)
            x, y = coords[parent]
            cell = (x + DELTA[d][0], y + DELTA[d][1])
            if cell not in cells:
                break
        coords[name] = cell
        cells[cell] = name
        rooms[name] = {}
        rooms[parent][d] = name
        rooms[name][OPPOSITE[d]] = parent
    for name in sorted(coords):
        x, y = coords[name]
        for d in ("north", "east"):
            other = cells.get((x + DELTA[d][0], y + DELTA[d][1]))
            if other and d not in rooms[name] and rng.random() < extra_links:
                rooms[name][d] = other
                rooms[other][OPPOSITE[d]] = name
    return rooms


def bfs_route(rooms: dict[str, dict[str, str]], start: str, goal: str) -> list[str] | None:
    """Shortest list of directions on the ground-truth map (north<south<east<west ties)."""
    if start == goal:
        return []
    parent: dict[str, tuple[str, str]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        room = queue.popleft()
        for d in DIRECTIONS:
            nxt = rooms[room].get(d)
            if nxt is None or nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (room, d)
            if nxt == goal:
                path = []
                while nxt != start:
                    nxt, step = parent[nxt]
                    path.append(step)
                return path[::-1]
            queue.append(nxt)
    return None


def bfs_distances(rooms: dict[str, dict[str, str]], start: str) -> dict[str, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        room = queue.popleft()
        for nxt in rooms[room].values():
            if nxt not in dist:
                dist[nxt] = dist[room] + 1
                queue.append(nxt)
    return dist


class Game:
    """A running game. Subclasses add task items, actions and scoring."""

    task = ""
    goal = ""

    def __init__(self, spec: WorldSpec):
        self.spec = spec
        self.fixtures: dict[str, dict] = spec.payload.get("fixtures", {})
        self.state = GameState(
            location=spec.start,
            item_locations=dict(spec.placements),
            containers={n: f["state"] for n, f in self.fixtures.items() if f["kind"] == "container"},
        )
        self.visited = {spec.start}
        self.traversed: set[tuple[str, str, str]] = set()
        self.annotation = OracleAnnotation(location=spec.start)
        self.doors = bool(spec.payload.get("doors"))

    # -- scoring -----------------------------------------------------------

    @property
    def max_score(self) -> int:
        raise NotImplementedError

    @property
    def normalized_score(self) -> float:
        return self.state.score / self.max_score

    def _reward(self, delta: int, reason: str) -> int:
        self.state.score += delta
        self.state.events.append(ScoreEvent(self.state.moves, delta, reason))
        return delta

    # -- world queries -----------------------------------------------------

    def room_of(self, loc: str) -> str | None:
        if loc in self.spec.rooms:
            return loc
        if loc in self.fixtures:
            return self.fixtures[loc]["room"]
        return None

    def items_at(self, loc: str) -> list[str]:
        return sorted(i for i, where in self.state.item_locations.items() if where == loc)

    def fixtures_in(self, room: str) -> list[str]:
        return sorted(n for n, f in self.fixtures.items() if f["room"] == room)

    def is_open(self, fixture: str) -> bool:
        return self.fixtures[fixture]["kind"] != "container" or self.state.containers[fixture] == "open"

    def visible_items(self, room: str | None = None) -> list[str]:
        room = room or self.state.location
        items = self.items_at(room)
        for f in self.fixtures_in(room):
            if self.is_open(f):
                items += self.items_at(f)
        return sorted(items)

    def portable(self, item: str) -> bool:
        return True

    def door_open(self, room: str, direction: str) -> bool:
        if not self.doors:
            return True
        return frozenset((room, self.spec.rooms[room][direction])) in self.state.open_doors

    # -- text --------------------------------------------------------------

    def display(self, room: str) -> str:
        return room.title()

    def intro(self, ann: OracleAnnotation) -> str:
        return ""

    def fixture_details(self, fixture: str, ann: OracleAnnotation) -> list[str]:
        return []

    def room_extras(self, room: str, ann: OracleAnnotation) -> list[str]:
        return []

    def describe_room(self, ann: OracleAnnotation) -> str:
        room = self.state.location
        lines = [f"-= {self.display(room)} =-", f"You are in {self.in_phrase(room)}."]
        fixtures = self.fixtures_in(room)
        if fixtures:
            lines.append(f"You see {join_names([_a(f) for f in fixtures])}.")
        for f in fixtures:
            ann.add(room, "contains", f)
            lines += self.fixture_details(f, ann)
            if self.is_open(f):
                inside = self.items_at(f)
                prep = "In" if self.fixtures[f]["kind"] == "container" else "On"
                if inside:
                    lines.append(f"{prep} the {f} you see: {', '.join(inside)}.")
                    for item in inside:
                        ann.add(item, "is in", f)
        floor = self.items_at(room)
        if floor:
            lines.append(f"On the floor you see: {', '.join(floor)}.")
            for item in floor:
                ann.add(item, "is in", room)
        lines += self.room_extras(room, ann)
        exits = [d for d in DIRECTIONS if d in self.spec.rooms[room]]
        for d in exits:
            ann.add(room, "has exit", d)
        if len(exits) == 1:
            lines.append(f"There is an exit to the {exits[0]}.")
        else:
            lines.append(f"There are exits to the {join_names(exits)}.")
        closed = [d for d in exits if not self.door_open(room, d)]
        if closed:
            lines.append(f"The door{'s' if len(closed) > 1 else ''} to the {join_names(closed)} "
                         f"{'are' if len(closed) > 1 else 'is'} closed.")
        return "\n".join(lines)

    def in_phrase(self, room: str) -> str:
        return f"the {room}"

    # -- actions -----------------------------------------------------------

    def reset(self) -> str:
        ann = OracleAnnotation(location=self.state.location)
        intro = self.intro(ann)
        text = self.describe_room(ann)
        self.annotation = ann
        return f"{intro}\n\n{text}" if intro else text

    def valid_actions(self) -> list[str]:
        if self.state.status != "running":
            return []
        room = self.state.location
        acts = []
        for d in DIRECTIONS:
            if d in self.spec.rooms[room]:
                if self.door_open(room, d):
                    acts.append(f"go {d}")
                else:
                    acts.append(f"open door to the {d}")
        acts += [f"take {i}" for i in self.visible_items() if self.portable(i)]
        acts += self.task_actions()
        acts += ["look", "inventory"]
        return acts

    def task_actions(self) -> list[str]:
        return []

    def resolve_alias(self, action: str) -> str:
        return action

    def step(self, action: str) -> StepResult:
        if self.state.status != "running":
            raise TerminalState(f"game is {self.state.status}")
        act = self.resolve_alias(fold(action))
        valid = {fold(a): a for a in self.valid_actions()}
        self.state.moves += 1
        ann = OracleAnnotation(location=self.state.location)
        if act not in valid:
            reward, text = 0, "You can't do that."
        else:
            reward, text = self.perform(act, ann)
        ann.location = self.state.location
        self.annotation = ann
        terminal = self.state.status != "running"
        return StepResult(text, reward, self.valid_actions(), terminal)

    def perform(self, act: str, ann: OracleAnnotation) -> tuple[int, str]:
        verb, _, rest = act.partition(" ")
        if verb == "go" and rest in DIRECTIONS:
            return 0, self._move(rest, ann)
        if act.startswith("open door to the "):
            d = act.rsplit(" ", 1)[1]
            self.state.open_doors.add(frozenset((self.state.location, self.spec.rooms[self.state.location][d])))
            return 0, f"You open the door to the {d}."
        if verb == "take":
            return self.take(rest, ann)
        if act == "look":
            return 0, self.describe_room(ann)
        if act == "inventory":
            inv = self.state.inventory
            for item in inv:
                ann.add(item, "is in", INVENTORY)
            return 0, f"You are carrying: {', '.join(inv)}." if inv else "You are carrying nothing."
        return self.task_action(act, ann)

    def task_action(self, act: str, ann: OracleAnnotation) -> tuple[int, str]:
        raise NotImplementedError(act)

    def _move(self, d: str, ann: OracleAnnotation) -> str:
        src = self.state.location
        dst = self.spec.rooms[src][d]
        self.state.location = dst
        self.visited.add(dst)
        self.traversed.add((src, d, dst))
        ann.add(dst, f"is {d} of", src)
        ann.add(src, f"is {OPPOSITE[d]} of", dst)
        return f"You go {d}.\n\n" + self.describe_room(ann)

    def take(self, item: str, ann: OracleAnnotation) -> tuple[int, str]:
        prev = self.state.item_locations[item]
        reward = self.on_take(item)
        self.state.item_locations[item] = INVENTORY
        ann.replace((item, "is in", prev), (item, "is in", INVENTORY))
        return reward, f"You take the {item}."

    def on_take(self, item: str) -> int:
        return 0


def _a(name: str) -> str:
    return ("an " if name[0] in "aeiou" else "a ") + name
