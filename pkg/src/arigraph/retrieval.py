"""Graph-aware retrieval over a :class:`~arigraph.graph.KnowledgeGraph`.

Semantic search is a breadth-first expansion where each frontier item is a
*text* (first the query, then vertex names) and its neighbours are whatever
the embedder ranks highest among all active edges. Episodic search then
scores every episode by how many of the retrieved edges it links.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from arigraph.embed import Embedder
from arigraph.graph import Episode, KnowledgeGraph, SemanticEdge
from arigraph.triplets import triplet_text


@dataclass(frozen=True)
class SearchParams:
    depth: int = 2
    width: int = 5
    episodic_k: int = 2

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.width < 1:
            raise ValueError("width must be >= 1")
        if self.episodic_k < 0:
            raise ValueError("episodic_k must be >= 0")


@dataclass(frozen=True)
class ScoredEpisode:
    episode: Episode
    relevance: float
    n: int
    N: int

    @property
    def step(self) -> int:
        return self.episode.step


@dataclass
class MemoryResult:
    triplets: list[SemanticEdge]
    episodes: list[ScoredEpisode]


class _EdgeIndex:
    """Embeddings of a fixed edge list, stacked for one search."""

    def __init__(self, edges: Sequence[SemanticEdge], embedder: Embedder):
        self.edges = sorted(edges, key=lambda e: e.id)
        self.embedder = embedder
        if self.edges:
            self.matrix = np.vstack([embedder.embed(triplet_text(e)) for e in self.edges])
        else:
            self.matrix = np.zeros((0, embedder.dimension()))

    def top(self, query: str, w: int) -> list[SemanticEdge]:
        if not self.edges:
            return []
        scores = self.matrix @ self.embedder.embed(query)
        # edges are id-sorted, so a stable sort on -score breaks ties by id
        order = np.argsort(-scores, kind="stable")[:w]
        return [self.edges[i] for i in order]


def embed_and_retrieve(
    query: str, edges: Sequence[SemanticEdge], w: int, embedder: Embedder
) -> list[SemanticEdge]:
    if w < 1:
        raise ValueError("w must be >= 1")
    return _EdgeIndex(edges, embedder).top(query, w)


def semantic_search(
    graph: KnowledgeGraph, query: str, depth: int, width: int, embedder: Embedder,
    _index: _EdgeIndex | None = None,
) -> list[SemanticEdge]:
    """Edges reachable from ``query`` within ``depth`` retrieval hops, id-ordered."""
    index = _index or _EdgeIndex(graph.active_edges(), embedder)
    found: dict[int, SemanticEdge] = {}
    queue = deque([query])
    distance = {query: 0}
    while queue:
        current = queue.popleft()
        if distance[current] >= depth:
            continue
        retrieved = index.top(current, width)
        for edge in retrieved:
            for vertex in (edge.subject.canonical, edge.object.canonical):
                if vertex not in distance:
                    distance[vertex] = distance[current] + 1
                    queue.append(vertex)
        for edge in retrieved:
            found[edge.id] = edge
    return [found[i] for i in sorted(found)]


def episodic_relevance(episode: Episode, input_edge_ids: Iterable[int], log=math.log) -> float:
    n = len(episode.linked_edge_ids.intersection(input_edge_ids))
    big_n = max(episode.original_link_count, 1)
    return (n / big_n) * log(big_n)


def episodic_search(graph: KnowledgeGraph, input_edges: Iterable, k: int) -> list[ScoredEpisode]:
    """Top-``k`` episodes by relevance; zero-relevance episodes are never returned."""
    if k <= 0:
        return []
    ids = {e.id if isinstance(e, SemanticEdge) else int(e) for e in input_edges}
    scored = []
    for ep in graph.episodes.values():
        rel = episodic_relevance(ep, ids)
        if rel > 0:
            n = len(ep.linked_edge_ids & ids)
            scored.append(ScoredEpisode(ep, rel, n, ep.original_link_count))
    scored.sort(key=lambda s: (-s.relevance, -s.step))
    return scored[:k]


def memory_graph_search(
    graph: KnowledgeGraph, queries: Iterable[str], params: SearchParams, embedder: Embedder
) -> MemoryResult:
    index = _EdgeIndex(graph.active_edges(), embedder)
    found: dict[int, SemanticEdge] = {}
    for q in dict.fromkeys(queries):
        for edge in semantic_search(graph, q, params.depth, params.width, embedder, _index=index):
            found[edge.id] = edge
    triplets = [found[i] for i in sorted(found)]
    return MemoryResult(triplets, episodic_search(graph, triplets, params.episodic_k))
