"""Retrieval baseline memory scored by recency, importance and relevance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from arigraph.embed import Embedder, score


@dataclass(frozen=True)
class RagParams:
    decay: float = 0.99
    w_recency: float = 1.0
    w_importance: float = 1.0
    w_relevance: float = 1.0
    top_k: int = 5
    recent: int = 5


@dataclass
class MemoryRecord:
    step: int
    text: str
    importance: int
    embedding: np.ndarray


def rag_score(record: MemoryRecord, query_embedding: np.ndarray, current_step: int,
              params: RagParams = RagParams()) -> float:
    recency = params.decay ** (current_step - record.step)
    relevance = score(query_embedding, record.embedding, normalized=True)
    return (params.w_recency * recency
            + params.w_importance * record.importance / 10
            + params.w_relevance * relevance)


class RagMemory:
    def __init__(self, embedder: Embedder, params: RagParams = RagParams()):
        self.embedder = embedder
        self.params = params
        self.records: list[MemoryRecord] = []

    def add(self, step: int, text: str, importance: int) -> MemoryRecord:
        rec = MemoryRecord(step, text, importance, self.embedder.embed(text))
        self.records.append(rec)
        return rec

    def retrieve(self, query: str, current_step: int, exclude_after: int | None = None) -> list[MemoryRecord]:
        """Top-k records; those with ``step >= exclude_after`` are already in the recent window."""
        q = self.embedder.embed(query)
        pool = [r for r in self.records if exclude_after is None or r.step < exclude_after]
        # highest score first, newer record first on ties
        ranked = sorted(pool, key=lambda r: (-rag_score(r, q, current_step, self.params), -r.step))
        return ranked[: self.params.top_k]
