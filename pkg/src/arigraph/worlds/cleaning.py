"""Cleaning: return misplaced household items to the rooms they belong in."""

from __future__ import annotations

import random

from arigraph.worlds.base import Game, OracleAnnotation, WorldSpec, grid_layout

# room -> (furniture, items that belong there)
HOUSE = {
    "kitchen": (["kitchen counter", "dish rack"], ["frying pan", "spatula", "dish sponge"]),
    "bathroom": (["sink", "bathtub"], ["toothbrush", "shampoo", "bath towel"]),
    "bedroom": (["bed", "nightstand"], ["pillow", "alarm clock", "pajamas"]),
    "living room": (["sofa", "coffee table"], ["tv remote", "throw cushion", "magazine"]),
    "dining room": (["dining table", "sideboard"], ["napkin holder", "salt shaker", "candlestick"]),
    "pool": (["pool chair", "towel rack"], ["swim goggles", "pool noodle", "sunscreen"]),
    "garage": (["workbench", "tool shelf"], ["wrench", "hammer", "car wax"]),
    "laundry room": (["washing machine", "laundry shelf"], ["detergent", "clothespins", "lint brush"]),
    "office": (["desk", "bookshelf"], ["stapler", "notebook", "desk lamp"]),
}
N_MISPLACED = 11


def generate(difficulty: str, seed: int) -> WorldSpec:
    rng = random.Random(f"cleaning:{difficulty}:{seed}")
    names = sorted(HOUSE)
    rng.shuffle(names)
    rooms = grid_layout(rng, names)
    fixtures = {f: {"room": r, "kind": "surface"} for r, (furn, _) in HOUSE.items() for f in furn}
    proper = {item: r for r, (_, items) in HOUSE.items() for item in items}

    all_items = sorted(proper)
    misplaced = sorted(rng.sample(all_items, N_MISPLACED))
    placements = {}
    for item in misplaced:
        room = rng.choice([r for r in sorted(HOUSE) if r != proper[item]])
        placements[item] = rng.choice(HOUSE[room][0])
    for room in sorted(HOUSE):
        spare = [i for i in HOUSE[room][1] if i not in misplaced]
        if spare:
            placements[rng.choice(spare)] = rng.choice(HOUSE[room][0])
    payload = {"fixtures": fixtures, "proper": proper, "misplaced": misplaced}
    return WorldSpec("cleaning", difficulty, seed, rooms, names[0], placements, payload)


class Cleaning(Game):
    task = "cleaning"
    goal = ("Clean the house: find the items that are out of place and put each of them "
            "in the room where it belongs.")

    def __init__(self, spec: WorldSpec):
        super().__init__(spec)
        self.proper: dict[str, str] = spec.payload["proper"]
        self.misplaced: list[str] = spec.payload["misplaced"]

    @property
    def max_score(self) -> int:
        return 2 * len(self.misplaced)

    def correctly_placed(self, item: str) -> bool:
        return self.room_of(self.state.item_locations[item]) == self.proper[item]

    def intro(self, ann: OracleAnnotation) -> str:
        return ("The house is a mess. Some items are not where they belong. "
                "Take every misplaced item and put it on a piece of furniture in its proper room.")

    def task_actions(self) -> list[str]:
        furniture = self.fixtures_in(self.state.location)
        return [f"put {i} on {f}" for i in self.state.inventory for f in furniture]

    def on_take(self, item: str) -> int:
        if self.correctly_placed(item):
            return self._reward(-1, f"moved correctly placed {item}")
        key = f"pick:{item}"
        if item in self.misplaced and key not in self.state.credited:
            self.state.credited.add(key)
            return self._reward(1, f"picked misplaced {item}")
        return 0

    def task_action(self, act: str, ann: OracleAnnotation) -> tuple[int, str]:
        item, _, furniture = act[len("put "):].partition(" on ")
        self.state.item_locations[item] = furniture
        ann.replace((item, "is in", "inventory"), (item, "is in", furniture))
        reward = 0
        key = f"place:{item}"
        if self.correctly_placed(item):
            if item in self.misplaced and key not in self.state.credited:
                self.state.credited.add(key)
                reward = self._reward(1, f"returned {item}")
        elif item not in self.misplaced:
            reward = self._reward(-1, f"misplaced {item}")
        text = f"You put the {item} on the {furniture}."
        if all(self.correctly_placed(i) for i in self.misplaced):
            self.state.status = "won"
            text += "\nThe house is clean! *** You have won ***"
        return reward, text
