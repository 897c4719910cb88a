"""Command line: run experiments, aggregate them, replay episodes, play games, inspect graphs."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from arigraph import snapshot
from arigraph.agent import MODES, EpisodeLog, run_episode
from arigraph.harness import (
    ConfigError,
    ExperimentConfig,
    agent_config_from_dict,
    aggregate_results,
    run_experiment,
)
from arigraph.llm.models import ScriptedLM
from arigraph.worlds import (
    DIFFICULTIES,
    TASKS,
    TerminalState,
    WorldSpec,
    generate_world,
    make_game,
)

logger = logging.getLogger("arigraph")


def _run(args: argparse.Namespace) -> int:
    data = {}
    if args.config:
        data = ExperimentConfig.from_yaml(args.config).to_dict()
    overrides = {
        "task": args.task, "difficulty": args.difficulty, "runs": args.runs,
        "report_best": args.report_best, "seed_base": args.seed_base, "step_cap": args.step_cap,
        "out": args.out, "workers": args.workers, "model": args.model, "endpoint": args.endpoint,
        "fixtures": args.fixtures, "temperature": args.temperature,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.mode:
        data["modes"] = [m for chunk in args.mode for m in chunk.split(",") if m]
    if args.hardest:
        data["hardest"] = True
    if args.vary_world:
        data["vary_world"] = True
    if args.oracle:
        data["lm"] = "oracle"
    elif args.fixtures:
        data["lm"] = "fixtures"
    elif args.endpoint:
        data["lm"] = "endpoint"
    if "task" not in data:
        raise ConfigError("--task is required (or set task in --config)")
    config = ExperimentConfig.from_dict(data)
    summary = run_experiment(config)
    for run in summary["runs"]:
        print(f"{run['mode']:<22} seed {run['seed']:<4} {run['status']:<7} "
              f"{run['score']}/{run['max_score']} in {run['steps']} steps")
    if not args.no_aggregate:
        _print_table(aggregate_results(config.out, figures=not args.no_figures))
    return 0


def _print_table(table: dict) -> None:
    print(f"{'mode':<22} {'final':>7} {'std':>7} {'won':>4}  seeds")
    for mode, row in table.items():
        print(f"{mode:<22} {row['final_mean']:>7.3f} {row['final_std']:>7.3f} {row['won']:>4}  "
              f"{' '.join(map(str, row['seeds']))}")


def _aggregate(args: argparse.Namespace) -> int:
    _print_table(aggregate_results(args.directory, figures=not args.no_figures))
    return 0


def _replay(args: argparse.Namespace) -> int:
    run_dir = Path(args.directory)
    recorded = EpisodeLog.read(run_dir)
    spec = WorldSpec.load(run_dir / "world.spec")
    cfg = agent_config_from_dict(json.loads((run_dir / "agent.json").read_text(encoding="utf-8")))
    fixtures = Path(args.fixtures) if args.fixtures else run_dir / "fixtures.jsonl"
    log = run_episode(make_game(spec), cfg, ScriptedLM.from_jsonl(fixtures),
                      seed=recorded.seed, step_cap=recorded.step_cap)
    original = (run_dir / "episode.jsonl").read_text(encoding="utf-8")
    if log.jsonl() == original:
        print(f"replay identical: {log.status}, score {log.score}/{log.max_score} in {log.steps} steps")
        return 0
    ours, theirs = log.jsonl().splitlines(), original.splitlines()
    first = next((i for i, (a, b) in enumerate(zip(ours, theirs)) if a != b), min(len(ours), len(theirs)))
    print(f"replay diverged at step {first} (recorded {len(theirs)} steps, replayed {len(ours)})")
    return 1


def _play(args: argparse.Namespace) -> int:
    game = make_game(generate_world(args.task, args.difficulty, args.seed, hardest=args.hardest))
    print(f"Goal: {game.goal}\n")
    print(game.reset())
    while True:
        try:
            line = input("\n> ").strip()
        except EOFError:
            print()
            break
        if line in ("quit", "exit"):
            break
        if line in ("help", "?"):
            print("Valid actions: " + "; ".join(game.valid_actions()))
            continue
        try:
            result = game.step(line)
        except TerminalState:
            break
        print(result.observation)
        print(f"[score {game.state.score}/{game.max_score}, moves {game.state.moves}]")
        if result.terminal:
            break
    print(f"Final score: {game.state.score}/{game.max_score} ({game.state.status})")
    return 0


def _snapshot(args: argparse.Namespace) -> int:
    text = Path(args.path).read_text(encoding="utf-8")
    graph = snapshot.loads(text)
    active = graph.active_edges()
    print(f"{len(graph.vertices)} vertices, {len(graph.edges)} edges ({len(active)} active), "
          f"{len(graph.episodes)} episodes")
    print("round trip: " + ("identical" if snapshot.dumps(graph) == text else "DIFFERS"))
    if args.triplets:
        for edge in active:
            print(f"{edge.subject.canonical}, {edge.relation}, {edge.object.canonical}")
    if args.episode is not None:
        ep = graph.episodes[args.episode]
        print(f"step {ep.step} action {ep.action_taken!r} links {sorted(ep.linked_edge_ids)}")
        print(ep.observation)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arigraph", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment")
    run.add_argument("--config", help="YAML experiment configuration")
    run.add_argument("--task", choices=TASKS)
    run.add_argument("--difficulty", choices=DIFFICULTIES)
    run.add_argument("--mode", action="append", help=f"memory mode(s), comma separated: {', '.join(MODES)}")
    run.add_argument("--runs", type=int)
    run.add_argument("--report-best", type=int)
    run.add_argument("--seed-base", type=int)
    run.add_argument("--step-cap", type=int)
    run.add_argument("--workers", type=int)
    run.add_argument("--hardest", action="store_true", help="cooking with closed doors and an inventory limit")
    run.add_argument("--vary-world", action="store_true", help="generate a different world for every run")
    source = run.add_mutually_exclusive_group()
    source.add_argument("--oracle", action="store_true", help="answer prompts from the simulator's ground truth")
    source.add_argument("--fixtures", help="JSONL fixture file or directory")
    source.add_argument("--endpoint", help="OpenAI-compatible chat completions URL")
    run.add_argument("--model")
    run.add_argument("--temperature", type=float)
    run.add_argument("--out")
    run.add_argument("--no-aggregate", action="store_true")
    run.add_argument("--no-figures", action="store_true")
    run.set_defaults(func=_run)

    agg = sub.add_parser("aggregate", help="tables and figures from an experiment directory")
    agg.add_argument("directory")
    agg.add_argument("--no-figures", action="store_true")
    agg.set_defaults(func=_aggregate)

    rep = sub.add_parser("replay", help="re-run a logged episode against its fixtures")
    rep.add_argument("directory")
    rep.add_argument("--fixtures")
    rep.set_defaults(func=_replay)

    play = sub.add_parser("play", help="play a game in the terminal")
    play.add_argument("--task", choices=TASKS, default="treasure_hunt")
    play.add_argument("--difficulty", choices=DIFFICULTIES, default="easy")
    play.add_argument("--seed", type=int, default=0)
    play.add_argument("--hardest", action="store_true")
    play.set_defaults(func=_play)

    snap = sub.add_parser("snapshot", help="inspect and verify a graph snapshot")
    snap.add_argument("path")
    snap.add_argument("--triplets", action="store_true", help="list active triplets")
    snap.add_argument("--episode", type=int, help="show one episode")
    snap.set_defaults(func=_snapshot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
