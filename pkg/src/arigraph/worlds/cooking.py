"""Cooking: read the recipe, gather and process ingredients, prepare and eat the meal.

Any wrong processing step, including using the wrong appliance, loses the
game. The ``hardest`` variant adds closed doors, an inventory limit and one
extra ingredient.
"""

from __future__ import annotations

import random

from arigraph.worlds.base import (
    INVENTORY,
    Game,
    OracleAnnotation,
    WorldSpec,
    grid_layout,
)

LOCATIONS = {
    "easy": ["kitchen", "pantry", "backyard", "garden", "living room", "corridor"],
    "medium": ["kitchen", "pantry", "backyard", "garden", "living room", "corridor",
               "bedroom", "bathroom", "shed"],
    "hard": ["kitchen", "pantry", "backyard", "garden", "living room", "corridor",
             "bedroom", "bathroom", "shed", "street", "supermarket", "driveway"],
}
N_INGREDIENTS = {"easy": 2, "medium": 3, "hard": 4}
INGREDIENTS = ["carrot", "red potato", "yellow bell pepper", "red onion", "purple potato",
               "white onion", "red apple", "tomato", "cucumber", "chicken wing", "pork chop",
               "banana", "parsley"]
CUTS = ("slice", "dice", "chop")
COOKS = {"grill": "bbq", "fry": "stove", "roast": "oven"}
PAST = {"slice": "sliced", "dice": "diced", "chop": "chopped",
        "grill": "grilled", "fry": "fried", "roast": "roasted"}
GERUND = {"grill": "grilling", "fry": "frying", "roast": "roasting"}
APPLIANCE_METHOD = {v: k for k, v in COOKS.items()}
SURFACES = {"kitchen": "counter", "pantry": "shelf", "supermarket": "showcase"}
MEAL = "meal"
KNIFE = "knife"
COOKBOOK = "cookbook"


def generate(difficulty: str, seed: int, hardest: bool = False) -> WorldSpec:
    rng = random.Random(f"cooking:{difficulty}:{seed}:{int(hardest)}")
    names = list(LOCATIONS["hard" if hardest else difficulty])
    n = N_INGREDIENTS["hard"] + 1 if hardest else N_INGREDIENTS[difficulty]
    start = rng.choice(names)
    layout_order = [start] + sorted(r for r in names if r != start)
    rooms = grid_layout(rng, layout_order)

    fixtures = {}
    for room, surface in SURFACES.items():
        if room in names:
            fixtures[surface] = {"room": room, "kind": "surface"}
    fixtures["stove"] = {"room": "kitchen", "kind": "appliance"}
    fixtures["oven"] = {"room": "kitchen", "kind": "appliance"}
    fixtures["bbq"] = {"room": "backyard", "kind": "appliance"}

    chosen = rng.sample(INGREDIENTS, n + 2)
    recipe_items, distractors = chosen[:n], chosen[n:]
    spots = sorted(SURFACES[r] for r in SURFACES if r in names) + [r for r in ("garden", "shed") if r in names]
    placements = {KNIFE: "counter", COOKBOOK: "counter"}
    for item in chosen:
        placements[item] = rng.choice(spots)
    recipe = []
    for item in recipe_items:
        cut = rng.choice(CUTS + (None,))
        cook = rng.choice(sorted(COOKS) + [None])
        if cut is None and cook is None:
            cook = rng.choice(sorted(COOKS))
        recipe.append({"ingredient": item, "cut": cut, "cook": cook})
    payload = {"fixtures": fixtures, "recipe": recipe, "distractors": distractors}
    if hardest:
        payload["doors"] = True
        payload["inventory_limit"] = n + 1
    return WorldSpec("cooking", difficulty, seed, rooms, start, placements, payload)


class Cooking(Game):
    task = "cooking"
    goal = ("Prepare and eat the meal: find the recipe, gather the ingredients, process them "
            "exactly as the recipe says, then prepare the meal and eat it.")

    def __init__(self, spec: WorldSpec):
        super().__init__(spec)
        self.recipe = {r["ingredient"]: r for r in spec.payload["recipe"]}
        self.limit = spec.payload.get("inventory_limit")

    @property
    def max_score(self) -> int:
        steps = sum((r["cut"] is not None) + (r["cook"] is not None) for r in self.recipe.values())
        return len(self.recipe) + steps + 2

    def portable(self, item: str) -> bool:
        return item != COOKBOOK and (self.limit is None or len(self.state.inventory) < self.limit)

    def processed(self, item: str) -> list[str]:
        return self.state.item_states.setdefault(item, [])

    def ready(self, item: str) -> bool:
        want = [v for v in (self.recipe[item]["cut"], self.recipe[item]["cook"]) if v]
        return sorted(want) == sorted(self.processed(item))

    def intro(self, ann: OracleAnnotation) -> str:
        for method, appliance in sorted(COOKS.items()):
            ann.add(appliance, "used for", GERUND[method])
        ann.add(KNIFE, "used for", "cutting")
        ann.add("recipe", "is in", COOKBOOK)
        ann.add(COOKBOOK, "is kept in", "kitchen")
        limit = f" You can carry at most {self.limit} items." if self.limit else ""
        return ("Instructions: the recipe is in the cookbook in the kitchen. Gather every ingredient it "
                "lists and process each one exactly as described. Slice, dice or chop with the knife. "
                "The BBQ is used for grilling, the stove is used for frying and the oven is used for "
                "roasting. Any wrong action with an ingredient ruins the meal and the game is lost. "
                f"When everything is ready, prepare the meal in the kitchen and eat it.{limit}")

    def _held_ingredients(self) -> list[str]:
        return [i for i in self.state.inventory if i not in (KNIFE, MEAL)]

    def task_actions(self) -> list[str]:
        room = self.state.location
        acts = []
        if room == "kitchen":
            acts.append(f"examine {COOKBOOK}")
        held = self._held_ingredients()
        if KNIFE in self.state.inventory:
            acts += [f"{cut} {i} with {KNIFE}" for i in held for cut in CUTS]
        appliances = [f for f in self.fixtures_in(room) if self.fixtures[f]["kind"] == "appliance"]
        acts += [f"cook {i} with {a}" for i in held for a in appliances]
        if room == "kitchen" and all(self.state.item_locations.get(i) == INVENTORY for i in self.recipe):
            acts.append("prepare meal")
        if self.state.item_locations.get(MEAL) == INVENTORY:
            acts.append("eat meal")
        if self.limit is not None:
            acts += [f"drop {i}" for i in self.state.inventory]
        return acts

    def resolve_alias(self, action: str) -> str:
        verb, _, item = action.partition(" ")
        if verb in COOKS and " with " not in item:
            return f"cook {item} with {COOKS[verb]}"
        return action

    def on_take(self, item: str) -> int:
        if item in self.recipe and item not in self.state.credited:
            self.state.credited.add(item)
            return self._reward(1, f"took {item}")
        return 0

    def _lose(self, text: str) -> tuple[int, str]:
        self.state.status = "lost"
        return 0, text + "\n*** You have lost ***"

    def task_action(self, act: str, ann: OracleAnnotation) -> tuple[int, str]:
        verb, _, rest = act.partition(" ")
        if act == f"examine {COOKBOOK}":
            return 0, self._read_recipe(ann)
        if verb == "drop":
            self.state.item_locations[rest] = self.state.location
            ann.replace((rest, "is in", INVENTORY), (rest, "is in", self.state.location))
            return 0, f"You drop the {rest}."
        if verb in CUTS:
            item = rest[: -len(f" with {KNIFE}")]
            return self._process(item, verb, ann, f"You {verb} the {item}.")
        if verb == "cook":
            item, _, appliance = rest.partition(" with ")
            method = APPLIANCE_METHOD[appliance]
            return self._process(item, method, ann, f"You {method} the {item} with the {appliance}.")
        if act == "prepare meal":
            return self._prepare(ann)
        if act == "eat meal":
            self.state.item_locations[MEAL] = "eaten"
            ann.replace((MEAL, "is in", INVENTORY), (MEAL, "state", "eaten"))
            reward = self._reward(1, "ate the meal")
            self.state.status = "won"
            return reward, "You eat the meal. Delicious! *** You have won ***"
        raise ValueError(act)

    def _read_recipe(self, ann: OracleAnnotation) -> str:
        self.state.credited.add("recipe:read")
        lines = ["You open the cookbook and read the recipe.", "Ingredients:"]
        directions = []
        for item, r in self.recipe.items():
            lines.append(f"  {item}")
            ann.add("recipe", "requires", item)
            for step in (r["cut"], r["cook"]):
                if step:
                    directions.append(f"  {step} the {item}")
                    ann.add(item, "to be", PAST[step])
        lines += ["Directions:"] + directions + ["  prepare meal"]
        return "\n".join(lines)

    def _process(self, item: str, step: str, ann: OracleAnnotation, text: str) -> tuple[int, str]:
        spec = self.recipe.get(item)
        slot = "cut" if step in CUTS else "cook"
        done = self.processed(item)
        if spec is None or spec[slot] != step or step in done:
            return self._lose(text + f" That was not what the recipe asked for: the {item} is ruined.")
        done.append(step)
        ann.add(item, "is", PAST[step])
        return self._reward(1, f"{PAST[step]} {item}"), text

    def _prepare(self, ann: OracleAnnotation) -> tuple[int, str]:
        if not all(self.ready(i) for i in self.recipe):
            return self._lose("You prepare the meal, but some ingredients were not processed as the recipe says.")
        for item in self.recipe:
            self.state.item_locations[item] = MEAL
            ann.replace((item, "is in", INVENTORY), (item, "is in", MEAL))
        self.state.item_locations[MEAL] = INVENTORY
        ann.add(MEAL, "is in", INVENTORY)
        return self._reward(1, "prepared the meal"), "You prepare the meal. It smells delicious."
