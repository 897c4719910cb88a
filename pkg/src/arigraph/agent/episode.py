"""Run one agent through one game and keep everything needed to replay it."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

from arigraph import snapshot
from arigraph.agent.ariadne import AgentConfig, Ariadne, LogicalClock
from arigraph.embed import CachedEmbedder, Embedder, HashEmbedder
from arigraph.llm.models import (
    FixtureMissing,
    LanguageModel,
    TranscriptLM,
    write_fixtures,
)
from arigraph.worlds import STEP_CAPS, Game

logger = logging.getLogger(__name__)


@dataclass
class StepRecord:
    step: int
    observation: str
    action: str
    reward: int
    score_norm: float
    stage_timings: dict[str, float]
    degraded_flags: list[str]


@dataclass
class EpisodeLog:
    task: str
    difficulty: str
    seed: int
    mode: str
    step_cap: int
    records: list[StepRecord] = field(default_factory=list)
    status: str = "running"
    score: int = 0
    max_score: int = 1
    error: str | None = None
    transcript: list[dict] = field(default_factory=list)
    fixtures: list[dict] = field(default_factory=list)
    usage: dict = field(default_factory=dict)
    snapshot: str = ""

    @property
    def score_norm(self) -> float:
        return self.score / self.max_score

    @property
    def steps(self) -> int:
        return len(self.records)

    def curve(self, cap: int | None = None) -> list[float]:
        """Normalized cumulative score per step, padded with the final value up to ``cap``."""
        values = [r.score_norm for r in self.records]
        cap = self.step_cap if cap is None else cap
        last = values[-1] if values else 0.0
        return values + [last] * max(0, cap - len(values))

    def summary(self) -> dict:
        return {
            "task": self.task, "difficulty": self.difficulty, "seed": self.seed, "mode": self.mode,
            "status": self.status, "steps": self.steps, "score": self.score,
            "max_score": self.max_score, "score_norm": self.score_norm, "step_cap": self.step_cap,
            "error": self.error, "usage": self.usage,
        }

    def jsonl(self) -> str:
        return "".join(json.dumps(asdict(r), ensure_ascii=False, sort_keys=True) + "\n" for r in self.records)

    def write(self, directory: str | Path) -> Path:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        (out / "episode.jsonl").write_text(self.jsonl(), encoding="utf-8")
        with (out / "transcript.jsonl").open("w", encoding="utf-8") as fh:
            for call in self.transcript:
                fh.write(json.dumps(call, ensure_ascii=False, sort_keys=True) + "\n")
        write_fixtures(self.fixtures, out / "fixtures.jsonl")
        (out / "graph.snapshot").write_text(self.snapshot, encoding="utf-8")
        (out / "summary.json").write_text(json.dumps(self.summary(), indent=2, sort_keys=True) + "\n",
                                          encoding="utf-8")
        return out

    @classmethod
    def read(cls, directory: str | Path) -> EpisodeLog:
        d = Path(directory)
        meta = json.loads((d / "summary.json").read_text(encoding="utf-8"))
        log = cls(meta["task"], meta["difficulty"], meta["seed"], meta["mode"], meta["step_cap"],
                  status=meta["status"], score=meta["score"], max_score=meta["max_score"],
                  error=meta.get("error"), usage=meta.get("usage", {}))
        with (d / "episode.jsonl").open(encoding="utf-8") as fh:
            log.records = [StepRecord(**json.loads(line)) for line in fh if line.strip()]
        return log


def run_episode(
    game: Game,
    config: AgentConfig,
    lm: LanguageModel,
    *,
    seed: int = 0,
    step_cap: int | None = None,
    embedder: Embedder | None = None,
    clock: Callable[[], float] | None = None,
) -> EpisodeLog:
    """Play until the game ends or the step cap is reached.

    The default clock is logical, so logs of a scripted run are byte-identical
    across runs. Pass ``time.perf_counter`` for wall-clock stage timings.
    """
    cap = step_cap if step_cap is not None else (config.step_cap or STEP_CAPS[game.task])
    log = EpisodeLog(game.task, game.spec.difficulty, seed, config.memory_mode, cap, max_score=game.max_score)
    recorder = TranscriptLM(lm)
    agent = Ariadne(config, recorder, CachedEmbedder(embedder or HashEmbedder()), game.goal,
                    clock=clock or LogicalClock())
    observation = game.reset()
    valid = game.valid_actions()
    try:
        for t in range(cap):
            outcome = agent.step(t, observation, valid)
            result = game.step(outcome.action)
            log.records.append(StepRecord(
                t, observation, outcome.action, result.reward, game.normalized_score,
                outcome.timings, outcome.flags))
            observation, valid = result.observation, result.valid_actions
            if result.terminal:
                break
        log.status = game.state.status if game.state.status != "running" else "capped"
    except FixtureMissing as exc:
        logger.error("episode stopped: %s", exc)
        log.status, log.error = "error", f"FixtureMissing: {exc}"
    except Exception as exc:  # noqa: BLE001 - recorded in the log, the bundle continues
        logger.exception("episode failed")
        log.status, log.error = "error", f"{type(exc).__name__}: {exc}"
    log.score = game.state.score
    log.transcript = [asdict(c) for c in recorder.calls]
    log.fixtures = recorder.fixtures()
    u = recorder.usage
    log.usage = {"calls": u.calls, "prompt_chars": u.prompt_chars, "response_chars": u.response_chars,
                 "est_tokens": u.est_tokens, "by_stage": dict(sorted(u.by_stage.items()))}
    log.snapshot = snapshot.dumps(agent.graph)
    return log
