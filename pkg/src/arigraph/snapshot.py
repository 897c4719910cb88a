"""Line-oriented, tab-separated snapshot format for :class:`KnowledgeGraph`.

::

    ARIGRAPH-SNAPSHOT v1
    V<TAB>canonical_name
    E<TAB>id<TAB>status<TAB>step<TAB>subject<TAB>relation<TAB>object<TAB>replaced_by
    P<TAB>step<TAB>link_count<TAB>ids,comma,sep<TAB>b64(observation)<TAB>b64(action) or - when absent

Records are emitted in a canonical order (vertices sorted, edges by id,
episodes by step) so that ``save(load(text)) == text``.
"""

from __future__ import annotations

import base64
import binascii
from pathlib import Path

from arigraph.graph import EdgeStatus, EntityName, Episode, KnowledgeGraph, SemanticEdge

HEADER = "ARIGRAPH-SNAPSHOT v1"
NO_ACTION = "-"  # never produced by base64


class SnapshotCorrupt(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


def _b64(text: str | None) -> str:
    return base64.b64encode((text or "").encode("utf-8")).decode("ascii")


def _action_field(action: str | None) -> str:
    return NO_ACTION if action is None else _b64(action)


def _unb64(field: str) -> str:
    return base64.b64decode(field.encode("ascii"), validate=True).decode("utf-8")


def dumps(graph: KnowledgeGraph) -> str:
    lines = [HEADER]
    for v in sorted(graph.vertices):
        lines.append(f"V\t{v.canonical}")
    for eid in sorted(graph.edges):
        e = graph.edges[eid]
        replaced = "" if e.replaced_by is None else str(e.replaced_by)
        lines.append(
            f"E\t{e.id}\t{e.status.value}\t{e.created_step}\t{e.subject.canonical}"
            f"\t{e.relation}\t{e.object.canonical}\t{replaced}"
        )
    for step in sorted(graph.episodes):
        p = graph.episodes[step]
        ids = ",".join(str(i) for i in sorted(p.linked_edge_ids))
        lines.append(
            f"P\t{p.step}\t{p.original_link_count}\t{ids}\t{_b64(p.observation)}\t{_action_field(p.action_taken)}"
        )
    return "\n".join(lines) + "\n"


def loads(text: str) -> KnowledgeGraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != HEADER:
        raise SnapshotCorrupt(1, "missing snapshot header")

    graph = KnowledgeGraph()
    for no, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        tag = fields[0]
        try:
            if tag == "V":
                _expect(fields, 2, no)
                if not fields[1]:
                    raise SnapshotCorrupt(no, "empty vertex name")
                graph.vertices.add(EntityName(fields[1], fields[1]))
            elif tag == "E":
                _expect(fields, 8, no)
                _, eid, status, step, s, r, o, replaced = fields
                edge = SemanticEdge(
                    id=int(eid),
                    subject=EntityName(s, s),
                    relation=r,
                    object=EntityName(o, o),
                    status=EdgeStatus(status),
                    created_step=int(step),
                    replaced_by=int(replaced) if replaced else None,
                )
                if edge.id in graph.edges:
                    raise SnapshotCorrupt(no, f"duplicate edge id {edge.id}")
                _restore_edge(graph, edge, no)
            elif tag == "P":
                _expect(fields, 6, no)
                _, step, count, ids, obs, act = fields
                linked = frozenset(int(i) for i in ids.split(",") if i)
                if any(i not in graph.edges for i in linked):
                    raise SnapshotCorrupt(no, "episode links an unknown edge")
                action = None if act == NO_ACTION else _unb64(act)
                episode = Episode(int(step), _unb64(obs), action, linked, int(count))
                if graph.episodes and episode.step <= max(graph.episodes):
                    raise SnapshotCorrupt(no, "episode steps must increase")
                graph.episodes[episode.step] = episode
            else:
                raise SnapshotCorrupt(no, f"unknown record tag {tag!r}")
        except SnapshotCorrupt:
            raise
        except (ValueError, binascii.Error, UnicodeDecodeError) as exc:
            raise SnapshotCorrupt(no, str(exc)) from exc
    return graph


def _expect(fields: list[str], n: int, no: int) -> None:
    if len(fields) != n:
        raise SnapshotCorrupt(no, f"expected {n} fields, got {len(fields)}")


def _restore_edge(graph: KnowledgeGraph, edge: SemanticEdge, no: int) -> None:
    graph.edges[edge.id] = edge
    graph.next_edge_id = max(graph.next_edge_id, edge.id + 1)
    graph.vertices.update((edge.subject, edge.object))
    for v in (edge.subject.canonical, edge.object.canonical):
        graph._by_vertex.setdefault(v, set()).add(edge.id)
    if edge.active:
        if edge.key in graph._active:
            raise SnapshotCorrupt(no, f"duplicate active triplet {edge.key}")
        graph._active[edge.key] = edge.id


def save(graph: KnowledgeGraph, path: str | Path) -> None:
    Path(path).write_text(dumps(graph), encoding="utf-8", newline="")


def load(path: str | Path) -> KnowledgeGraph:
    return loads(Path(path).read_text(encoding="utf-8"))
