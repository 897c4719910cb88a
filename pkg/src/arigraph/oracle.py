"""A language model that answers from the simulator's ground truth.

It is used to produce fixture files for offline closed-loop runs: wrap it in a
:class:`~arigraph.llm.models.TranscriptLM`, play an episode, and write the
recorded responses. The answers are well-formed protocol payloads, so a replay
through :class:`~arigraph.llm.models.ScriptedLM` exercises every parser.
"""

from __future__ import annotations

import json
import re

from arigraph.worlds.base import Game, bfs_distances
from arigraph.worlds.solvers import next_intent

_ACTIONS_LINE = re.compile(r"Possible actions in current situation: (\[[^\n]*\])")


def _t(triplet) -> str:
    return ", ".join(triplet)


class OracleLM:
    def __init__(self, game: Game):
        self.game = game

    def complete(self, system_prompt, user_prompt, params=None, *, stage, step):
        handler = getattr(self, f"_{stage}", None)
        if handler is None:
            raise ValueError(f"oracle has no answer for stage {stage!r}")
        return handler(user_prompt)

    def _extract(self, prompt: str) -> str:
        return "; ".join(_t(t) for t in self.game.annotation.triplets)

    def _replace(self, prompt: str) -> str:
        pairs = [f"[{_t(old)} -> {_t(new)}]" for old, new in self.game.annotation.replacements]
        return f"[{', '.join(pairs)}]"

    def _explore_check(self, prompt: str) -> str:
        return "True" if next_intent(self.game).explore else "False"

    def _plan(self, prompt: str) -> str:
        intent = next_intent(self.game)
        plan = {
            "main_goal": self.game.goal,
            "plan_steps": [{"sub_goal_1": intent.sub_goal, "reason": f"next step toward the {intent.target_room}"}],
            "your_emotion": {"your_current_emotion": "focused", "reason_behind_emotion": "the way is clear"},
        }
        return json.dumps(plan, indent=2)

    def _action(self, prompt: str) -> str:
        intent = next_intent(self.game)
        action = intent.action
        m = _ACTIONS_LINE.search(prompt)
        offered = json.loads(m.group(1)) if m else []
        goto = f"go to {intent.target_room}"
        here = self.game.state.location
        if goto in offered and bfs_distances(self.game.spec.rooms, here)[intent.target_room] > 1:
            action = goto
        return json.dumps({"reason_for_action": intent.sub_goal, "action_to_take": action}, indent=2)

    def _summary(self, prompt: str) -> str:
        s = self.game.state
        return (f"You are in the {s.location}. Score so far: {s.score}. "
                f"Carrying: {', '.join(s.inventory) or 'nothing'}.")

    def _importance(self, prompt: str) -> str:
        return "5"
