"""Prompt protocols: render a template, call the model, parse the answer.

Degradations (unparseable plans, invalid actions, failed checks) are
reported by appending a marker to the optional ``flags`` list rather than by
raising, so an agent step always completes.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from arigraph.graph import NormalizationEmpty, normalize_entity
from arigraph.llm.models import DecodeParams, LanguageModel, LMTransportError
from arigraph.llm.parsing import (
    extract_json_object,
    parse_bool_strict,
    parse_replacements,
    parse_triplet_list,
)
from arigraph.llm.prompts import render
from arigraph.triplets import Triplet, collapse_ws, triplet_text

logger = logging.getLogger(__name__)

SYSTEM_PROMPT = ""


class ExtractionFailed(RuntimeError):
    pass


class ReplacementFailed(RuntimeError):
    pass


@dataclass
class PlanStep:
    sub_goal: str
    reason: str = ""


@dataclass
class Plan:
    main_goal: str
    steps: list[PlanStep]
    emotion: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "main_goal": self.main_goal,
            "plan_steps": [
                {f"sub_goal_{i}": s.sub_goal, "reason": s.reason} for i, s in enumerate(self.steps, 1)
            ],
            "your_emotion": {
                "your_current_emotion": self.emotion.get("label", ""),
                "reason_behind_emotion": self.emotion.get("reason", ""),
            },
        }

    def render(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=2)


@dataclass
class ActionChoice:
    reason: str
    action: str


def _flag(flags: list[str] | None, marker: str) -> None:
    logger.warning("degraded: %s", marker)
    if flags is not None:
        flags.append(marker)


def _normalized(t: Triplet) -> Triplet | None:
    try:
        return Triplet(normalize_entity(t.subject).canonical, t.relation,
                       normalize_entity(t.object).canonical)
    except NormalizationEmpty:
        return None


def extract_triplets(
    lm: LanguageModel,
    observation: str,
    prior_examples: Sequence,
    *,
    step: int,
    params: DecodeParams | None = None,
    flags: list[str] | None = None,
) -> list[Triplet]:
    prompt = render("extraction", {
        "example": "; ".join(triplet_text(t) for t in prior_examples),
        "observation": observation,
    })
    try:
        response = lm.complete(SYSTEM_PROMPT, prompt, params, stage="extract", step=step)
    except LMTransportError as exc:
        raise ExtractionFailed(str(exc)) from exc
    parsed = parse_triplet_list(response)
    if parsed.rejected:
        _flag(flags, f"TripletSegmentsSkipped:{len(parsed.rejected)}")
    if not parsed.items and response.strip():
        logger.warning("no triplets recovered from extraction response %r", response[:200])
    return [t for t in map(_normalized, parsed.items) if t is not None]


def _quoted_list(triplets: Iterable) -> str:
    return "; ".join(f'"{triplet_text(t)}"' for t in triplets)


def select_outdated(
    lm: LanguageModel,
    existing: Sequence,
    new: Sequence,
    *,
    step: int,
    params: DecodeParams | None = None,
    flags: list[str] | None = None,
) -> list[tuple[Triplet, Triplet]]:
    prompt = render("replacement", {"ex_triplets": _quoted_list(existing), "new_triplets": _quoted_list(new)})
    try:
        response = lm.complete(SYSTEM_PROMPT, prompt, params, stage="replace", step=step)
    except LMTransportError as exc:
        raise ReplacementFailed(str(exc)) from exc
    parsed = parse_replacements(response)
    if parsed.rejected:
        _flag(flags, f"ReplacementPairsSkipped:{len(parsed.rejected)}")
    return parsed.items


def check_exploration_need(
    lm: LanguageModel, plan: Plan, *, step: int,
    params: DecodeParams | None = None, flags: list[str] | None = None,
) -> bool:
    prompt = render("exploration_check", {"plan0": plan.render()})
    try:
        response = lm.complete(SYSTEM_PROMPT, prompt, params, stage="explore_check", step=step)
    except LMTransportError:
        _flag(flags, "ExplorationCheckFailed")
        return False
    answer = parse_bool_strict(response)
    if answer is None:
        _flag(flags, "ExplorationCheckUnparsed")
        return False
    return answer


def parse_plan(text: str) -> Plan | None:
    obj = extract_json_object(text)
    if obj is None:
        return None
    steps_raw = obj.get("plan_steps")
    if not isinstance(steps_raw, list):
        return None
    steps = []
    for item in steps_raw:
        if not isinstance(item, dict):
            continue
        goal = next((v for k, v in item.items() if str(k).startswith("sub_goal")), None)
        if isinstance(goal, str) and goal.strip():
            steps.append(PlanStep(goal.strip(), str(item.get("reason", ""))))
    if not steps:
        return None
    emotion_raw = obj.get("your_emotion")
    emotion = {}
    if isinstance(emotion_raw, dict):
        emotion = {
            "label": str(emotion_raw.get("your_current_emotion", "")),
            "reason": str(emotion_raw.get("reason_behind_emotion", "")),
        }
    return Plan(str(obj.get("main_goal", "")), steps, emotion)


def generate_plan(
    lm: LanguageModel,
    slots: Mapping[str, object],
    previous: Plan | None,
    *,
    step: int,
    explore: bool = False,
    params: DecodeParams | None = None,
    flags: list[str] | None = None,
) -> Plan | None:
    """Ask for a new plan; one retry, then keep ``previous``."""
    prompt = render("planning", dict(slots), explore=explore)
    for _ in range(2):
        try:
            response = lm.complete(SYSTEM_PROMPT, prompt, params, stage="plan", step=step)
        except LMTransportError:
            continue
        plan = parse_plan(response)
        if plan is not None:
            return plan
    _flag(flags, "PlanParseFailure")
    return previous


def fold_action(action: str) -> str:
    return collapse_ws(action).casefold()


def select_action(
    lm: LanguageModel,
    slots: Mapping[str, object],
    valid_actions: Sequence[str],
    *,
    step: int,
    params: DecodeParams | None = None,
    flags: list[str] | None = None,
) -> ActionChoice:
    if not valid_actions:
        raise ValueError("valid_actions must not be empty")
    by_fold = {fold_action(a): a for a in reversed(valid_actions)}
    prompt = render("decision", {**slots, "valid_actions": json.dumps(list(valid_actions), ensure_ascii=False)})
    for attempt in range(2):
        try:
            response = lm.complete(SYSTEM_PROMPT, prompt, params, stage="action", step=step)
        except LMTransportError:
            continue
        obj = extract_json_object(response) or {}
        proposed = obj.get("action_to_take")
        reason = str(obj.get("reason_for_action", ""))
        if isinstance(proposed, str) and fold_action(proposed) in by_fold:
            return ActionChoice(reason, by_fold[fold_action(proposed)])
        offending = proposed if isinstance(proposed, str) else response.strip()
        prompt = (
            f"{prompt}\n\nYour previous answer {json.dumps(offending, ensure_ascii=False)} "
            "is not in the list of possible actions. "
            "You may choose actions only from the list of possible actions."
        )
    _flag(flags, "ForcedFallback")
    return ActionChoice("fallback: no valid action selected", valid_actions[0])


def summarize_history(
    lm: LanguageModel,
    slots: Mapping[str, object],
    previous_summary: str,
    *,
    step: int,
    params: DecodeParams | None = None,
    flags: list[str] | None = None,
) -> str:
    prompt = render("summarization", {**slots, "summary": previous_summary})
    try:
        return lm.complete(SYSTEM_PROMPT, prompt, params, stage="summary", step=step)
    except LMTransportError:
        _flag(flags, "SummaryFailed")
        return previous_summary


def rate_importance(
    lm: LanguageModel, main_goal: str, observation: str, *, step: int,
    params: DecodeParams | None = None, flags: list[str] | None = None,
) -> int:
    """1-10 importance for a RAG memory record; 5 when unparseable."""
    prompt = render("importance", {"main_goal": main_goal, "observation": observation})
    try:
        response = lm.complete(SYSTEM_PROMPT, prompt, params, stage="importance", step=step)
    except LMTransportError:
        _flag(flags, "ImportanceFailed")
        return 5
    m = re.search(r"\d+", response)
    if not m:
        _flag(flags, "ImportanceUnparsed")
        return 5
    return min(10, max(1, int(m.group())))
