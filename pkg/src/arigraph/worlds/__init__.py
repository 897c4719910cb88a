from arigraph.worlds import cleaning, cooking, treasure
from arigraph.worlds.base import (
    DIFFICULTIES,
    TASKS,
    Game,
    GameState,
    OracleAnnotation,
    StepResult,
    TerminalState,
    WorldSpec,
    bfs_route,
)
from arigraph.worlds.cleaning import Cleaning
from arigraph.worlds.cooking import Cooking
from arigraph.worlds.treasure import TreasureHunt

STEP_CAPS = {"treasure_hunt": 150, "cleaning": 150, "cooking": 60}
_GAMES = {"treasure_hunt": TreasureHunt, "cleaning": Cleaning, "cooking": Cooking}


def generate_world(task: str, difficulty: str, seed: int, hardest: bool = False) -> WorldSpec:
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}; expected one of {TASKS}")
    if difficulty not in DIFFICULTIES:
        raise ValueError(f"unknown difficulty {difficulty!r}; expected one of {DIFFICULTIES}")
    if task == "treasure_hunt":
        return treasure.generate(difficulty, seed)
    if task == "cleaning":
        return cleaning.generate(difficulty, seed)
    return cooking.generate(difficulty, seed, hardest=hardest)


def make_game(spec: WorldSpec) -> Game:
    return _GAMES[spec.task](spec)


def oracle_annotations(game: Game) -> OracleAnnotation:
    """Ground-truth triplets and replacements for the game's latest observation."""
    return game.annotation


__all__ = [
    "DIFFICULTIES", "TASKS", "STEP_CAPS", "Game", "GameState", "OracleAnnotation", "StepResult",
    "TerminalState", "WorldSpec", "bfs_route", "generate_world", "make_game", "oracle_annotations",
    "TreasureHunt", "Cleaning", "Cooking",
]
