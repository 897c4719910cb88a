"""Experiment runner: several runs per memory mode, best-of selection, aggregation.

Layout of an experiment directory::

    <out>/summary.json                 config, hash, version, run table, selected seeds
    <out>/<mode>/seed<N>/              one EpisodeLog (see EpisodeLog.write) plus
                                       world.spec and agent.json for replay
    <out>/aggregate/                   CSV tables and PNG figures
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
import yaml

from arigraph import __version__
from arigraph.agent import MODES, AgentConfig, EpisodeLog, RagParams, run_episode
from arigraph.embed import Embedder, HashEmbedder, RemoteEmbedder
from arigraph.llm.models import DecodeParams, LanguageModel, OpenAIChatLM, ScriptedLM
from arigraph.oracle import OracleLM
from arigraph.retrieval import SearchParams
from arigraph.worlds import DIFFICULTIES, STEP_CAPS, TASKS, generate_world, make_game

logger = logging.getLogger(__name__)

API_KEY_ENV = "ARIGRAPH_API_KEY"
LM_SOURCES = ("oracle", "fixtures", "endpoint")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    task: str
    difficulty: str = "easy"
    modes: list[str] = field(default_factory=lambda: ["arigraph"])
    runs: int = 5
    report_best: int = 3
    seed_base: int = 0
    vary_world: bool = False
    hardest: bool = False
    step_cap: int | None = None
    lm: str = "oracle"
    fixtures: str | None = None
    endpoint: str | None = None
    model: str | None = None
    temperature: float = 0.0
    embed_endpoint: str | None = None
    embed_model: str | None = None
    n_prev: int = 5
    depth: int = 2
    width: int = 5
    episodic_k: int = 2
    history_token_budget: int = 32_000
    workers: int = 1
    out: str = "runs"

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if isinstance(data.get("modes"), str):
            data = {**data, "modes": [m.strip() for m in data["modes"].split(",") if m.strip()]}
        return cls(**data)

    @classmethod
    def from_yaml(cls, path: str | Path) -> ExperimentConfig:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a mapping at the top level")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def config_hash(self) -> str:
        payload = {k: v for k, v in self.to_dict().items() if k not in ("out", "workers")}
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]

    @property
    def seeds(self) -> list[int]:
        return [self.seed_base + i for i in range(self.runs)]

    def world_seed(self, run_seed: int) -> int:
        return run_seed if self.vary_world else self.seed_base

    def cap(self) -> int:
        return self.step_cap if self.step_cap is not None else STEP_CAPS[self.task]

    def validate(self) -> None:
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; expected one of {TASKS}")
        if self.difficulty not in DIFFICULTIES:
            raise ConfigError(f"unknown difficulty {self.difficulty!r}")
        bad = [m for m in self.modes if m not in MODES]
        if bad or not self.modes:
            raise ConfigError(f"unknown memory modes {bad}; expected some of {MODES}")
        if self.runs < 1 or not 1 <= self.report_best <= self.runs:
            raise ConfigError("need runs >= report_best >= 1")
        if self.step_cap is not None and self.step_cap < 0:
            raise ConfigError("step_cap must be >= 0")
        if self.lm not in LM_SOURCES:
            raise ConfigError(f"lm must be one of {LM_SOURCES}")
        if self.lm == "fixtures":
            if not self.fixtures:
                raise ConfigError("lm=fixtures needs a fixtures path")
            for mode in self.modes:
                for seed in self.seeds:
                    fixture_path(self.fixtures, mode, seed)
        if self.lm == "endpoint" and not (self.endpoint and self.model):
            raise ConfigError("lm=endpoint needs endpoint and model")
        if bool(self.embed_endpoint) != bool(self.embed_model):
            raise ConfigError("embed_endpoint and embed_model go together")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def agent_config(self, mode: str) -> AgentConfig:
        return AgentConfig(
            memory_mode=mode,
            n_prev=self.n_prev,
            search=SearchParams(self.depth, self.width, self.episodic_k),
            step_cap=self.cap(),
            history_token_budget=self.history_token_budget,
            decode=DecodeParams(temperature=self.temperature),
        )


def fixture_path(root: str | Path, mode: str, seed: int) -> Path:
    """Fixture file for one run: a single file, or ``<dir>/<mode>/seed<N>.jsonl`` / ``<dir>/seed<N>.jsonl``."""
    root = Path(root)
    if root.is_file():
        return root
    for candidate in (root / mode / f"seed{seed}.jsonl", root / f"seed{seed}.jsonl"):
        if candidate.is_file():
            return candidate
    raise ConfigError(f"no fixtures for mode={mode} seed={seed} under {root}")


def agent_config_to_dict(cfg: AgentConfig) -> dict:
    return asdict(cfg)


def agent_config_from_dict(data: dict) -> AgentConfig:
    return AgentConfig(
        memory_mode=data["memory_mode"],
        n_prev=data["n_prev"],
        search=SearchParams(**data["search"]),
        rag=RagParams(**data["rag"]),
        step_cap=data["step_cap"],
        history_token_budget=data["history_token_budget"],
        extraction_examples=data["extraction_examples"],
        exploration=data["exploration"],
        goto=data["goto"],
        decode=DecodeParams(**data["decode"]),
    )


def _embedder(config: ExperimentConfig) -> Embedder:
    if config.embed_endpoint:
        return RemoteEmbedder(config.embed_endpoint, config.embed_model, os.environ.get(API_KEY_ENV))
    return HashEmbedder()


def _lm(config: ExperimentConfig, mode: str, seed: int, game) -> LanguageModel:
    if config.lm == "oracle":
        return OracleLM(game)
    if config.lm == "fixtures":
        return ScriptedLM.from_jsonl(fixture_path(config.fixtures, mode, seed))
    return OpenAIChatLM(config.endpoint, config.model, os.environ.get(API_KEY_ENV),
                        default_params=DecodeParams(temperature=config.temperature))


def run_one(config: ExperimentConfig, mode: str, seed: int) -> EpisodeLog:
    spec = generate_world(config.task, config.difficulty, config.world_seed(seed), hardest=config.hardest)
    game = make_game(spec)
    agent_cfg = config.agent_config(mode)
    run_dir = Path(config.out) / mode / f"seed{seed}"
    try:
        log = run_episode(game, agent_cfg, _lm(config, mode, seed, game), seed=seed,
                          step_cap=config.cap(), embedder=_embedder(config))
    except Exception as exc:  # noqa: BLE001 - a broken run must not sink the bundle
        logger.exception("run %s/seed%d failed before starting", mode, seed)
        log = EpisodeLog(config.task, config.difficulty, seed, mode, config.cap(),
                         status="error", max_score=game.max_score, error=f"{type(exc).__name__}: {exc}")
    log.write(run_dir)
    spec.save(run_dir / "world.spec")
    (run_dir / "agent.json").write_text(json.dumps(agent_config_to_dict(agent_cfg), indent=2, sort_keys=True) + "\n",
                                        encoding="utf-8")
    logger.info("%s seed %d: %s, score %d/%d in %d steps", mode, seed, log.status, log.score,
                log.max_score, log.steps)
    return log


def select_best(logs: list[EpisodeLog], k: int) -> list[EpisodeLog]:
    """Best ``k`` runs by final normalized score; fewer steps, then lower seed, break ties."""
    return sorted(logs, key=lambda run: (-run.score_norm, run.steps, run.seed))[:k]


def run_experiment(config: ExperimentConfig) -> dict:
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(mode, seed) for mode in config.modes for seed in config.seeds]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        logs = list(pool.map(lambda job: run_one(config, *job), jobs))
    selected = {
        mode: [run.seed for run in select_best([run for run in logs if run.mode == mode], config.report_best)]
        for mode in config.modes
    }
    summary = {
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "version": __version__,
        "seeds": config.seeds,
        "world_seeds": [config.world_seed(s) for s in config.seeds],
        "runs": [run.summary() for run in logs],
        "selected": selected,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return summary


# -- aggregation -------------------------------------------------------------


def mean_std(curves: list[list[float]]) -> tuple[np.ndarray, np.ndarray]:
    """Per-step mean and sample standard deviation (0 when there is a single curve)."""
    arr = np.asarray(curves, dtype=np.float64)
    # shifting by the first curve keeps identical runs at exactly zero spread
    shifted = arr - arr[0]
    mean = arr[0] + shifted.mean(axis=0)
    std = shifted.std(axis=0, ddof=1) if len(arr) > 1 else np.zeros(arr.shape[1])
    return mean, std


def load_bundle(directory: str | Path) -> tuple[dict, dict[str, list[EpisodeLog]]]:
    root = Path(directory)
    summary = json.loads((root / "summary.json").read_text(encoding="utf-8"))
    logs: dict[str, list[EpisodeLog]] = {}
    for mode in summary["config"]["modes"]:
        logs[mode] = [EpisodeLog.read(root / mode / f"seed{seed}") for seed in summary["seeds"]]
    return summary, logs


def aggregate_results(directory: str | Path, figures: bool = True) -> dict[str, dict]:
    """Recompute selection, curves and tables from the logs on disk."""
    root = Path(directory)
    summary, logs = load_bundle(root)
    report_best = summary["config"]["report_best"]
    agg_dir = root / "aggregate"
    agg_dir.mkdir(exist_ok=True)
    table: dict[str, dict] = {}
    for mode, mode_logs in logs.items():
        chosen = select_best(mode_logs, report_best)
        cap = max(run.step_cap for run in chosen)
        curves = [np.clip(run.curve(cap), 0.0, 1.0).tolist() for run in chosen]
        mean, std = mean_std(curves) if cap else (np.zeros(0), np.zeros(0))
        with (agg_dir / f"{mode}.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "mean", "std", "n"])
            for i in range(cap):
                w.writerow([i + 1, f"{mean[i]:.6f}", f"{std[i]:.6f}", len(chosen)])
        final_mean, final_std = mean_std([[c[-1] if c else 0.0] for c in curves])
        table[mode] = {
            "mean": mean, "std": std, "seeds": [run.seed for run in chosen],
            "final_mean": float(final_mean[0]),
            "final_std": float(final_std[0]),
            "won": sum(run.status == "won" for run in chosen),
            "steps_mean": float(np.mean([run.steps for run in chosen])),
        }
    with (agg_dir / "comparison.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mode", "selected_seeds", "final_mean", "final_std", "won", "steps_mean"])
        for mode, row in table.items():
            w.writerow([mode, " ".join(map(str, row["seeds"])), f"{row['final_mean']:.6f}",
                        f"{row['final_std']:.6f}", row["won"], f"{row['steps_mean']:.2f}"])
    if figures:
        from arigraph import plotting

        title = f"{summary['config']['task']} ({summary['config']['difficulty']})"
        plotting.score_curves(table, agg_dir / "scores.png", title=title)
        plotting.final_scores(table, agg_dir / "final.png", title=title)
    return table
