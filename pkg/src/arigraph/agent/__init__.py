from arigraph.agent.ariadne import (
    MODES,
    AgentConfig,
    Ariadne,
    LogicalClock,
    StepOutcome,
    parse_location,
)
from arigraph.agent.episode import EpisodeLog, StepRecord, run_episode
from arigraph.agent.memory import WorkingMemory, build_queries
from arigraph.agent.rag import MemoryRecord, RagMemory, RagParams, rag_score

__all__ = [
    "MODES", "AgentConfig", "Ariadne", "LogicalClock", "StepOutcome", "parse_location", "EpisodeLog",
    "StepRecord", "run_episode", "WorkingMemory", "build_queries", "MemoryRecord", "RagMemory",
    "RagParams", "rag_score",
]
