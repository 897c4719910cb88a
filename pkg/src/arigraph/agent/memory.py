"""Working memory: the payload the planner and decider prompts are filled from."""

from __future__ import annotations

from dataclasses import dataclass, field

from arigraph.llm.gateway import Plan
from arigraph.triplets import triplet_text

NO_PLAN = "No plan yet."


@dataclass
class WorkingMemory:
    main_goal: str
    current_observation: str = ""
    recent_history: list[tuple[str, str]] = field(default_factory=list)
    retrieved_triplets: list = field(default_factory=list)
    retrieved_episodes: list[str] = field(default_factory=list)
    memory_text: str = ""
    current_plan: Plan | None = None
    unexplored_exits: list | None = None
    valid_actions: list[str] = field(default_factory=list)
    topk_episodic: int = 0

    def slots(self) -> dict[str, object]:
        """Slot fills shared by the planning and decision templates."""
        subgraph = render_triplets(self.retrieved_triplets)
        if self.memory_text:
            subgraph = self.memory_text
        return {
            "main_goal": self.main_goal,
            "n_prev": len(self.recent_history),
            "observations": render_history(self.recent_history),
            "observation": self.current_observation,
            "subgraph": subgraph,
            "topk_episodic": self.topk_episodic,
            "top_episodic": render_episodes(self.retrieved_episodes),
            "plan0": self.current_plan.render() if self.current_plan else NO_PLAN,
            "all_unexpl_exits": render_triplets(self.unexplored_exits or []),
        }


def render_history(pairs: list[tuple[str, str]]) -> str:
    if not pairs:
        return ""
    return "\n" + "\n".join(f"Observation: {obs}\nAction: {act}" for obs, act in pairs)


def render_triplets(edges) -> str:
    return "; ".join(triplet_text(e) for e in edges)


def render_episodes(texts: list[str]) -> str:
    if not texts:
        return ""
    return "\n" + "\n".join(texts)


def build_queries(memory: WorkingMemory) -> list[str]:
    """Graph-search queries: observation, goal, then every sub-goal; deduplicated in order."""
    queries = [memory.current_observation, memory.main_goal]
    if memory.current_plan is not None:
        queries += [s.sub_goal for s in memory.current_plan.steps]
    return list(dict.fromkeys(q for q in queries if q))
