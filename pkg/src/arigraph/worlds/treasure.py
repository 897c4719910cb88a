"""Treasure Hunt: follow a chain of keys and notes to the golden locker."""

from __future__ import annotations

import random
import string

from arigraph.worlds.base import (
    Game,
    OracleAnnotation,
    WorldSpec,
    bfs_distances,
    grid_layout,
)

COLORS = ["blue", "red", "green", "yellow", "white", "black", "purple", "orange", "pink",
          "brown", "grey", "cyan", "violet", "teal", "beige", "maroon", "crimson"]
KEYS = ["rusty key", "iron key", "brass key", "copper key", "bronze key", "steel key"]
SIZES = {"easy": (12, 4), "medium": (12, 4), "hard": (16, 5)}
TREASURE = "treasure"


def generate(difficulty: str, seed: int) -> WorldSpec:
    n_rooms, n_keys = SIZES[difficulty]
    rng = random.Random(f"treasure_hunt:{difficulty}:{seed}")
    names = [f"room {c}" for c in string.ascii_lowercase[:n_rooms]]
    rooms = grid_layout(rng, names)
    start = names[0]

    others = names[1:]
    rng.shuffle(others)
    chain_rooms = others[:n_keys]
    if difficulty == "hard":
        # the first locker in the chain (holding the second key) sits farthest away
        dist = bfs_distances(rooms, start)
        far = max(others, key=lambda r: (dist[r], r))
        chain_rooms = [far] + [r for r in others if r != far][: n_keys - 1]

    colors = rng.sample(COLORS, n_rooms - 1)
    lockers = {}
    for room in names:
        color = "golden" if room == chain_rooms[-1] else colors.pop()
        lockers[room] = f"{color} locker"
    keys = rng.sample(KEYS, n_keys)

    fixtures = {lockers[r]: {"room": r, "kind": "container", "state": "locked"} for r in names}
    chain = []
    placements = {}
    for i, key in enumerate(keys):
        locker = lockers[chain_rooms[i]]
        note = f"note {i + 1}"
        holder = start if i == 0 else lockers[chain_rooms[i - 1]]
        placements[key] = holder
        placements[note] = holder
        chain.append({"key": key, "locker": locker, "note": note})
    placements[TREASURE] = lockers[chain_rooms[-1]]
    payload = {"fixtures": fixtures, "chain": chain}
    return WorldSpec("treasure_hunt", difficulty, seed, rooms, start, placements, payload)


class TreasureHunt(Game):
    task = "treasure_hunt"
    goal = ("Find the treasure: follow the keys and the notes to unlock the golden locker "
            "and retrieve the treasure hidden inside.")

    def __init__(self, spec: WorldSpec):
        super().__init__(spec)
        self.chain = spec.payload["chain"]
        self.key_for = {c["locker"]: c["key"] for c in self.chain}
        self.note_text = {c["note"]: (c["key"], c["locker"]) for c in self.chain}

    @property
    def max_score(self) -> int:
        return len(self.chain) + 1

    def display(self, room: str) -> str:
        return room.title()

    def in_phrase(self, room: str) -> str:
        return room.title()

    def portable(self, item: str) -> bool:
        return item not in self.note_text

    def intro(self, ann: OracleAnnotation) -> str:
        return ("Welcome to the treasure hunt! Somewhere in this house a golden locker hides a treasure. "
                "Every locker is locked. Keys and notes will show you the way.")

    def fixture_details(self, fixture: str, ann: OracleAnnotation) -> list[str]:
        state = self.state.containers[fixture]
        ann.add(fixture, "state", state)
        return [f"The {fixture} is {state}."]

    def room_extras(self, room: str, ann: OracleAnnotation) -> list[str]:
        lines = []
        for note in sorted(n for n in self.visible_items(room) if n in self.note_text):
            key, locker = self.note_text[note]
            lines.append(f'The {note} reads: "The {key} opens the {locker}."')
            ann.add(note, "mentions", key)
            ann.add(key, "opens", locker)
        return lines

    def task_actions(self) -> list[str]:
        room = self.state.location
        return [f"open {f}" for f in self.fixtures_in(room) if self.state.containers[f] != "open"]

    def on_take(self, item: str) -> int:
        if item in self.key_for.values() and item not in self.state.credited:
            self.state.credited.add(item)
            return self._reward(1, f"picked {item}")
        return 0

    def task_action(self, act: str, ann: OracleAnnotation) -> tuple[int, str]:
        locker = act[len("open "):]
        key = self.key_for.get(locker)
        if key is None or self.state.item_locations.get(key) != "inventory":
            ann.add(locker, "state", "locked")
            return 0, f"The {locker} is locked."
        self.state.containers[locker] = "open"
        ann.add(key, "opens", locker)
        ann.replace((locker, "state", "locked"), (locker, "state", "open"))
        inside = self.items_at(locker)
        for item in inside:
            ann.add(item, "is in", locker)
        lines = [f"You unlock the {locker} with the {key} and open it."]
        if inside:
            lines.append(f"Inside the {locker} you see: {', '.join(inside)}.")
        for note in inside:
            if note in self.note_text:
                k, target = self.note_text[note]
                lines.append(f'The {note} reads: "The {k} opens the {target}."')
                ann.add(note, "mentions", k)
                ann.add(k, "opens", target)
        reward = 0
        if TREASURE in inside:
            reward = self._reward(1, "opened the golden locker")
            self.state.status = "won"
            lines.append("You found the treasure! *** You have won ***")
        return reward, "\n".join(lines)
