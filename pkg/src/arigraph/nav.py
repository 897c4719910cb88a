"""Spatial reasoning over learned room links.

Rooms are linked by edges such as ``("hall", "is east of", "kitchen")`` and
exits by ``("kitchen", "has exit", "south")``. Both patterns are regexes and
can be swapped via :class:`SpatialPatterns`.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from arigraph.graph import KnowledgeGraph, SemanticEdge

DIRECTIONS = ("north", "south", "east", "west")
OPPOSITE = {"north": "south", "south": "north", "east": "west", "west": "east"}
_DIR_RANK = {d: i for i, d in enumerate(DIRECTIONS)}
GOTO_PREFIX = "go to "


class NoRoute(LookupError):
    pass


@dataclass(frozen=True)
class SpatialPatterns:
    exit: str = r"\bhas (?:an? )?(?:unexplored )?exit\b"
    spatial: str = r"^(?:is )?(north|south|east|west) of$"

    def is_exit(self, edge: SemanticEdge) -> bool:
        return re.search(self.exit, edge.relation, re.IGNORECASE) is not None

    def spatial_direction(self, edge: SemanticEdge) -> str | None:
        m = re.match(self.spatial, edge.relation.strip(), re.IGNORECASE)
        return m.group(1).lower() if m else None


DEFAULT_PATTERNS = SpatialPatterns()


@dataclass
class SpatialMap:
    locations: set[str] = field(default_factory=set)
    links: dict[str, set[tuple[str, str]]] = field(default_factory=dict)

    def add_link(self, src: str, direction: str, dst: str) -> None:
        self.locations.update((src, dst))
        self.links.setdefault(src, set()).add((direction, dst))
        self.links.setdefault(dst, set()).add((OPPOSITE[direction], src))

    def neighbours(self, loc: str) -> list[tuple[str, str]]:
        return sorted(self.links.get(loc, ()), key=lambda p: (_DIR_RANK[p[0]], p[1]))

    @classmethod
    def from_graph(cls, graph: KnowledgeGraph, patterns: SpatialPatterns = DEFAULT_PATTERNS) -> SpatialMap:
        smap = cls()
        for edge in graph.active_edges():
            direction = patterns.spatial_direction(edge)
            if direction:
                # "A is east of B": from B going east reaches A
                smap.add_link(edge.object.canonical, direction, edge.subject.canonical)
        return smap


def unexplored_exits(
    graph: KnowledgeGraph, location: str, patterns: SpatialPatterns = DEFAULT_PATTERNS
) -> list[SemanticEdge]:
    """Exit edges from ``location`` whose direction has no known destination."""
    exits = [e for e in graph.outgoing(location) if patterns.is_exit(e)]
    for edge in graph.incoming(location):
        direction = patterns.spatial_direction(edge)
        if direction:
            exits = [e for e in exits if e.object.canonical != direction]
    return exits


def all_unexplored_exits(
    graph: KnowledgeGraph, current: str | None, patterns: SpatialPatterns = DEFAULT_PATTERNS
) -> list[SemanticEdge]:
    """Unexplored exits of every known location, current location first."""
    rooms = sorted({e.subject.canonical for e in graph.active_edges() if patterns.is_exit(e)})
    if current in rooms:
        rooms.remove(current)
        rooms.insert(0, current)
    out: list[SemanticEdge] = []
    for room in rooms:
        out.extend(unexplored_exits(graph, room, patterns))
    return out


def find_route(
    graph: KnowledgeGraph | SpatialMap, start: str, goal: str,
    patterns: SpatialPatterns = DEFAULT_PATTERNS,
) -> list[str]:
    if start == goal:
        return []
    smap = graph if isinstance(graph, SpatialMap) else SpatialMap.from_graph(graph, patterns)
    if start not in smap.locations or goal not in smap.locations:
        raise NoRoute(f"unknown location: {start if start not in smap.locations else goal}")
    parent: dict[str, tuple[str, str]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        loc = queue.popleft()
        for direction, nxt in smap.neighbours(loc):
            if nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (loc, direction)
            if nxt == goal:
                route = []
                while nxt != start:
                    nxt, d = parent[nxt]
                    route.append(f"go {d}")
                return route[::-1]
            queue.append(nxt)
    raise NoRoute(f"no known route from {start} to {goal}")


def expand_goto_actions(
    graph: KnowledgeGraph, current: str | None, valid_actions: list[str],
    patterns: SpatialPatterns = DEFAULT_PATTERNS,
) -> list[str]:
    actions = list(valid_actions)
    if current is None:
        return actions
    smap = SpatialMap.from_graph(graph, patterns)
    for loc in sorted(smap.locations - {current}):
        try:
            find_route(smap, current, loc)
        except NoRoute:
            continue
        actions.append(GOTO_PREFIX + loc)
    return actions


def goto_target(action: str) -> str | None:
    a = action.strip().lower()
    return a[len(GOTO_PREFIX):].strip() if a.startswith(GOTO_PREFIX) else None


def next_goto_step(graph: KnowledgeGraph, current: str, target: str,
                   patterns: SpatialPatterns = DEFAULT_PATTERNS) -> str | None:
    """First primitive move toward ``target``; None once arrived. Raises NoRoute."""
    route = find_route(graph, current, target, patterns)
    return route[0] if route else None
