"""Joint semantic/episodic memory graph.

Semantic memory is a set of ``(subject, relation, object)`` edges between
entity vertices. Episodic memory is one :class:`Episode` per step, holding the
raw observation and the ids of every edge extracted from it. Outdated edges
are tombstoned rather than deleted so episodes keep their original links.
"""

from __future__ import annotations

import logging
import string
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from arigraph.triplets import Triplet, collapse_ws

logger = logging.getLogger(__name__)

_STRIP = string.punctuation + "‘’“” "


class NormalizationEmpty(ValueError):
    """Entity text is empty once normalized."""


class DuplicateEpisode(ValueError):
    pass


class LearnError(RuntimeError):
    """A learning stage failed before the graph was touched."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"learn failed at stage {stage!r}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True, order=True)
class EntityName:
    canonical: str
    raw: str = field(default="", compare=False, hash=False)

    def __str__(self) -> str:
        return self.canonical


def normalize_entity(raw: str) -> EntityName:
    canonical = collapse_ws(raw.lower()).strip(_STRIP)
    canonical = collapse_ws(canonical)
    if not canonical:
        raise NormalizationEmpty(f"entity {raw!r} is empty after normalization")
    return EntityName(canonical, raw)


def relation_key(relation: str) -> str:
    return collapse_ws(relation).casefold()


class EdgeStatus(str, Enum):
    ACTIVE = "active"
    TOMBSTONED = "tombstoned"


@dataclass
class SemanticEdge:
    id: int
    subject: EntityName
    relation: str
    object: EntityName
    status: EdgeStatus = EdgeStatus.ACTIVE
    created_step: int = 0
    replaced_by: int | None = None

    @property
    def active(self) -> bool:
        return self.status is EdgeStatus.ACTIVE

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.subject.canonical, relation_key(self.relation), self.object.canonical)

    def as_triplet(self) -> Triplet:
        return Triplet(self.subject.canonical, self.relation, self.object.canonical)


@dataclass(frozen=True)
class Episode:
    step: int
    observation: str
    action_taken: str | None
    linked_edge_ids: frozenset[int]
    original_link_count: int


@dataclass
class UpsertResult:
    added: list[int] = field(default_factory=list)
    matched_existing: list[int] = field(default_factory=list)
    skipped: list[tuple] = field(default_factory=list)

    @property
    def edge_ids(self) -> list[int]:
        """Added and matched ids in extraction order, deduplicated."""
        seen: dict[int, None] = {}
        for eid in self._order:
            seen.setdefault(eid, None)
        return list(seen)

    _order: list[int] = field(default_factory=list, repr=False)


@dataclass
class ReplaceResult:
    tombstoned: list[int] = field(default_factory=list)
    ignored: int = 0


@dataclass
class LearnReport:
    step: int
    extracted: list[Triplet]
    added: list[int]
    matched: list[int]
    tombstoned: list[int]
    ignored_replacements: int
    skipped: list[tuple]
    episode: Episode


Extractor = Callable[[str], Sequence[Sequence[str]]]
Replacer = Callable[[list[SemanticEdge], list[Triplet]], Sequence[tuple]]


class KnowledgeGraph:
    """Single-writer store for semantic edges and episodes."""

    def __init__(self) -> None:
        self.vertices: set[EntityName] = set()
        self.edges: dict[int, SemanticEdge] = {}
        self.episodes: dict[int, Episode] = {}
        self.next_edge_id = 0
        self._active: dict[tuple[str, str, str], int] = {}
        self._by_vertex: dict[str, set[int]] = {}

    # -- queries ---------------------------------------------------------

    def active_edges(self) -> list[SemanticEdge]:
        return [e for e in self.edges.values() if e.active]

    def find_active(self, triplet: Sequence[str]) -> SemanticEdge | None:
        try:
            key = _triplet_key(triplet)
        except NormalizationEmpty:
            return None
        eid = self._active.get(key)
        return self.edges[eid] if eid is not None else None

    def incident_edges(self, vertices: Iterable[EntityName | str]) -> list[SemanticEdge]:
        """Active edges touching any of ``vertices``, ordered by edge id."""
        ids: set[int] = set()
        for v in vertices:
            name = v.canonical if isinstance(v, EntityName) else normalize_entity(v).canonical
            ids |= self._by_vertex.get(name, set())
        return [self.edges[i] for i in sorted(ids) if self.edges[i].active]

    def outgoing(self, vertex: str) -> list[SemanticEdge]:
        return [e for e in self.incident_edges([vertex]) if e.subject.canonical == vertex]

    def incoming(self, vertex: str) -> list[SemanticEdge]:
        return [e for e in self.incident_edges([vertex]) if e.object.canonical == vertex]

    def triplet_set(self) -> set[tuple[str, str, str]]:
        return {e.key for e in self.active_edges()}

    # -- mutation --------------------------------------------------------

    def _new_edge(self, step: int, s: EntityName, relation: str, o: EntityName) -> SemanticEdge:
        edge = SemanticEdge(self.next_edge_id, s, collapse_ws(relation), o, created_step=step)
        self.next_edge_id += 1
        self.edges[edge.id] = edge
        self.vertices.update((s, o))
        self._active[edge.key] = edge.id
        for v in (s.canonical, o.canonical):
            self._by_vertex.setdefault(v, set()).add(edge.id)
        return edge

    def upsert_triplets(self, step: int, triplets: Iterable[Sequence[str]]) -> UpsertResult:
        result = UpsertResult()
        for t in triplets:
            try:
                s, r, o = t
                if not collapse_ws(r):
                    raise NormalizationEmpty("empty relation")
                s_name, o_name = normalize_entity(s), normalize_entity(o)
            except (ValueError, TypeError) as exc:
                logger.debug("skipping triplet %r: %s", t, exc)
                result.skipped.append(tuple(t) if isinstance(t, (list, tuple)) else (t,))
                continue
            key = (s_name.canonical, relation_key(r), o_name.canonical)
            existing = self._active.get(key)
            if existing is not None:
                if existing not in result.added and existing not in result.matched_existing:
                    result.matched_existing.append(existing)
                result._order.append(existing)
                continue
            edge = self._new_edge(step, s_name, r, o_name)
            result.added.append(edge.id)
            result._order.append(edge.id)
        return result

    def tombstone(self, edge_id: int, replaced_by: int | None = None) -> None:
        edge = self.edges[edge_id]
        if not edge.active:
            return
        edge.status = EdgeStatus.TOMBSTONED
        edge.replaced_by = replaced_by
        del self._active[edge.key]

    def apply_replacements(self, step: int, replacements: Iterable) -> ReplaceResult:
        """Tombstone each outdated edge, pointing it at its replacement.

        Pairs whose outdated side is not an active edge, or which are
        malformed, are counted in ``ignored``.
        """
        result = ReplaceResult()
        for pair in replacements:
            try:
                outdated, actual = pair
                old_key = _triplet_key(outdated)
                new_key = _triplet_key(actual)
            except (ValueError, TypeError):
                result.ignored += 1
                continue
            old_id = self._active.get(old_key)
            if old_id is None or old_key == new_key:
                result.ignored += 1
                continue
            new_ids = self.upsert_triplets(step, [actual]).edge_ids
            if not new_ids:
                result.ignored += 1
                continue
            self.tombstone(old_id, replaced_by=new_ids[0])
            result.tombstoned.append(old_id)
        return result

    def add_episode(
        self,
        step: int,
        observation: str,
        action_taken: str | None,
        edge_ids: Iterable[int],
    ) -> Episode:
        if step in self.episodes:
            raise DuplicateEpisode(f"episode already recorded at step {step}")
        if self.episodes and step < max(self.episodes):
            raise ValueError(f"episode step {step} precedes step {max(self.episodes)}")
        ids = frozenset(edge_ids)
        missing = [i for i in ids if i not in self.edges]
        if missing:
            raise KeyError(f"unknown edge ids {sorted(missing)}")
        episode = Episode(step, observation, action_taken, ids, len(ids))
        self.episodes[step] = episode
        return episode

    def learn(
        self,
        step: int,
        observation: str,
        action_taken: str | None,
        extractor: Extractor,
        replacer: Replacer,
    ) -> LearnReport:
        """Run one learning step: extract, find related, replace, expand, record.

        Extraction and replacement selection happen before any mutation, so a
        failure in either leaves the graph as it was.
        """
        if step in self.episodes:
            raise DuplicateEpisode(f"episode already recorded at step {step}")
        try:
            raw = list(extractor(observation))
        except Exception as exc:
            raise LearnError("extract", exc) from exc

        extracted: list[Triplet] = []
        skipped: list[tuple] = []
        new_vertices: set[EntityName] = set()
        for t in raw:
            try:
                s, r, o = t
                s_name, o_name = normalize_entity(s), normalize_entity(o)
                if not collapse_ws(r):
                    raise NormalizationEmpty("empty relation")
            except (ValueError, TypeError):
                skipped.append(tuple(t) if isinstance(t, (list, tuple)) else (t,))
                continue
            extracted.append(Triplet(s_name.canonical, collapse_ws(r), o_name.canonical))
            new_vertices.update((s_name, o_name))

        related = self.incident_edges(new_vertices)
        try:
            replacements = list(replacer(related, extracted)) if related and extracted else []
        except Exception as exc:
            raise LearnError("replace", exc) from exc

        replaced = self.apply_replacements(step, replacements)
        upserted = self.upsert_triplets(step, extracted)
        episode = self.add_episode(step, observation, action_taken, upserted.edge_ids)
        return LearnReport(
            step=step,
            extracted=extracted,
            added=upserted.added,
            matched=upserted.matched_existing,
            tombstoned=replaced.tombstoned,
            ignored_replacements=replaced.ignored,
            skipped=skipped + upserted.skipped,
            episode=episode,
        )


def _triplet_key(triplet: Sequence[str]) -> tuple[str, str, str]:
    s, r, o = triplet
    if not collapse_ws(r):
        raise NormalizationEmpty("empty relation")
    return (normalize_entity(s).canonical, relation_key(r), normalize_entity(o).canonical)
