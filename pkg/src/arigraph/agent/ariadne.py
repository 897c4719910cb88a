"""The plan-then-act agent loop and its memory configurations.

One call to :meth:`Ariadne.step` runs, in order: learn the observation into
the graph, graph search, exploration check, planning, ``go to`` expansion and
action selection. The baseline modes swap the graph for full history, a
running summary, or scored retrieval, and keep the planner and decider.
"""

from __future__ import annotations

import logging
import re
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable

from arigraph.agent.memory import WorkingMemory, build_queries, render_history
from arigraph.agent.rag import RagMemory, RagParams
from arigraph.embed import Embedder
from arigraph.graph import (
    KnowledgeGraph,
    LearnError,
    NormalizationEmpty,
    normalize_entity,
)
from arigraph.llm.gateway import (
    Plan,
    ReplacementFailed,
    check_exploration_need,
    extract_triplets,
    fold_action,
    generate_plan,
    rate_importance,
    select_action,
    select_outdated,
    summarize_history,
)
from arigraph.llm.models import DecodeParams, FixtureMissing, LanguageModel
from arigraph.nav import (
    NoRoute,
    all_unexplored_exits,
    expand_goto_actions,
    goto_target,
    next_goto_step,
)
from arigraph.retrieval import SearchParams, memory_graph_search, semantic_search

logger = logging.getLogger(__name__)

MODES = ("arigraph", "arigraph_no_episodic", "full_history", "summary", "rag")
GRAPH_MODES = ("arigraph", "arigraph_no_episodic")
_HEADER = re.compile(r"^-= (.+?) =-\s*$", re.MULTILINE)


@dataclass(frozen=True)
class AgentConfig:
    memory_mode: str = "arigraph"
    n_prev: int = 5
    search: SearchParams = field(default_factory=SearchParams)
    rag: RagParams = field(default_factory=RagParams)
    step_cap: int | None = None
    history_token_budget: int = 32_000  # full_history only; 4 characters per token
    extraction_examples: int = 10
    exploration: bool = True
    goto: bool = True
    decode: DecodeParams = field(default_factory=DecodeParams)

    def __post_init__(self):
        if self.memory_mode not in MODES:
            raise ValueError(f"unknown memory mode {self.memory_mode!r}; expected one of {MODES}")
        if self.n_prev < 0:
            raise ValueError("n_prev must be >= 0")
        if self.history_token_budget < 1:
            raise ValueError("history_token_budget must be >= 1")


class LogicalClock:
    """Deterministic stand-in for a timer: every reading advances by one tick."""

    def __init__(self) -> None:
        self.ticks = 0

    def __call__(self) -> float:
        self.ticks += 1
        return float(self.ticks)


@dataclass
class StepOutcome:
    action: str
    chosen: str
    reason: str = ""
    flags: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)


def parse_location(observation: str) -> str | None:
    headers = _HEADER.findall(observation)
    if not headers:
        return None
    try:
        return normalize_entity(headers[-1]).canonical
    except NormalizationEmpty:
        return None


class Ariadne:
    def __init__(
        self,
        config: AgentConfig,
        lm: LanguageModel,
        embedder: Embedder,
        main_goal: str,
        clock: Callable[[], float] | None = None,
    ):
        self.config = config
        self.lm = lm
        self.embedder = embedder
        self.clock = clock or time.perf_counter
        self.graph = KnowledgeGraph()
        self.memory = WorkingMemory(main_goal)
        self.history: list[tuple[str, str]] = []
        self.plan: Plan | None = None
        self.summary = ""
        self.rag = RagMemory(embedder, config.rag)
        self.location: str | None = None
        self.goto: str | None = None
        self.last_action: str | None = None

    @property
    def mode(self) -> str:
        return self.config.memory_mode

    @contextmanager
    def _timed(self, timings: dict[str, float], stage: str):
        start = self.clock()
        try:
            yield
        finally:
            timings[stage] = round(self.clock() - start, 6)

    def step(self, t: int, observation: str, valid_actions: list[str]) -> StepOutcome:
        """Choose the next primitive action; it is always one of ``valid_actions``."""
        if not valid_actions:
            raise ValueError("valid_actions must not be empty")
        flags: list[str] = []
        timings: dict[str, float] = {}
        cfg = self.config
        mem = self.memory
        self.location = parse_location(observation) or self.location
        mem.current_observation = observation
        mem.valid_actions = list(valid_actions)
        mem.recent_history = self.history[-cfg.n_prev:] if cfg.n_prev else []
        mem.retrieved_triplets, mem.retrieved_episodes, mem.memory_text = [], [], ""
        mem.unexplored_exits, mem.topk_episodic = None, 0
        explore = False

        if self.mode in GRAPH_MODES:
            with self._timed(timings, "learn"):
                self._learn(t, observation, flags)
            if self.goto is not None:
                with self._timed(timings, "goto"):
                    move = self._goto_step(valid_actions, flags)
                if move is not None:
                    return self._finish(observation, StepOutcome(move, f"go to {self.goto}", "", flags, timings))
            with self._timed(timings, "search"):
                found = memory_graph_search(self.graph, build_queries(mem), cfg.search, self.embedder)
            mem.retrieved_triplets = found.triplets
            if self.mode == "arigraph":
                mem.retrieved_episodes = [s.episode.observation for s in found.episodes]
                mem.topk_episodic = cfg.search.episodic_k
            if cfg.exploration and self.plan is not None:
                with self._timed(timings, "explore_check"):
                    explore = check_exploration_need(self.lm, self.plan, step=t, params=cfg.decode, flags=flags)
            if explore:
                mem.unexplored_exits = all_unexplored_exits(self.graph, self.location)
        elif self.mode == "full_history":
            mem.recent_history = self._fitted_history(flags)
        elif self.mode == "summary":
            with self._timed(timings, "summary"):
                self.summary = summarize_history(
                    self.lm, {k: v for k, v in mem.slots().items()
                              if k in ("main_goal", "n_prev", "observations", "observation")},
                    self.summary, step=t, params=cfg.decode, flags=flags)
            mem.memory_text = self.summary
        else:
            mem.recent_history = self.history[-cfg.rag.recent:] if cfg.rag.recent else []
            with self._timed(timings, "retrieve"):
                records = self.rag.retrieve(observation, t, exclude_after=t - cfg.rag.recent)
            mem.retrieved_episodes = [r.text for r in records]
            mem.topk_episodic = cfg.rag.top_k
            with self._timed(timings, "importance"):
                importance = rate_importance(self.lm, mem.main_goal, observation, step=t,
                                             params=cfg.decode, flags=flags)
            self.rag.add(t, observation, importance)

        with self._timed(timings, "plan"):
            self.plan = generate_plan(self.lm, mem.slots(), self.plan, step=t, explore=explore,
                                      params=cfg.decode, flags=flags)
        mem.current_plan = self.plan

        actions = list(valid_actions)
        if self.mode in GRAPH_MODES and cfg.goto:
            actions = expand_goto_actions(self.graph, self.location, actions)
        with self._timed(timings, "action"):
            choice = select_action(self.lm, mem.slots(), actions, step=t, params=cfg.decode, flags=flags)

        action = choice.action
        target = goto_target(action)
        if target is not None and fold_action(action) not in {fold_action(a) for a in valid_actions}:
            self.goto = target
            move = self._goto_step(valid_actions, flags)
            if move is None:
                flags.append("ForcedFallback")
                move = valid_actions[0]
            action = move
        return self._finish(observation, StepOutcome(action, choice.action, choice.reason, flags, timings))

    def _finish(self, observation: str, outcome: StepOutcome) -> StepOutcome:
        self.history.append((observation, outcome.action))
        self.last_action = outcome.action
        return outcome

    def _learn(self, t: int, observation: str, flags: list[str]) -> None:
        cfg = self.config
        examples = semantic_search(self.graph, observation, cfg.search.depth, cfg.search.width,
                                   self.embedder)[: cfg.extraction_examples]

        def extractor(obs: str):
            return extract_triplets(self.lm, obs, examples, step=t, params=cfg.decode, flags=flags)

        def replacer(related, new):
            try:
                return select_outdated(self.lm, related, new, step=t, params=cfg.decode, flags=flags)
            except ReplacementFailed as exc:
                logger.warning("replacement selection failed at step %d: %s", t, exc)
                flags.append("ReplacementFailed")
                return []

        try:
            self.graph.learn(t, observation, self.last_action, extractor, replacer)
        except LearnError as exc:
            if isinstance(exc.cause, FixtureMissing):
                raise exc.cause
            logger.warning("learning skipped at step %d: %s", t, exc)
            flags.append(f"LearnFailed:{exc.stage}")

    def _goto_step(self, valid_actions: list[str], flags: list[str]) -> str | None:
        """Next move of an ongoing ``go to``; None (and the journey dropped) when it cannot continue."""
        target = self.goto
        if target is None or self.location is None:
            self.goto = None
            return None
        try:
            move = next_goto_step(self.graph, self.location, target)
        except NoRoute:
            flags.append("GotoNoRoute")
            self.goto = None
            self.memory.current_observation += f"\nThere is no known route to {target}."
            return None
        if move is None:
            self.goto = None
            return None
        valid = {fold_action(a): a for a in valid_actions}
        if fold_action(move) not in valid:
            flags.append("GotoBlocked")
            self.goto = None
            self.memory.current_observation += f"\nCannot continue to {target}: {move} is not possible here."
            return None
        return valid[fold_action(move)]

    def _fitted_history(self, flags: list[str]) -> list[tuple[str, str]]:
        budget = self.config.history_token_budget * 4
        pairs = list(self.history)
        dropped = 0
        while pairs and len(render_history(pairs)) > budget:
            pairs.pop(0)
            dropped += 1
        if dropped:
            logger.info("full history truncated: dropped %d oldest pairs", dropped)
            flags.append(f"HistoryTruncated:{dropped}")
        return pairs
