"""Triplet surface forms: ``"subject, relation, object"`` text <-> tuples."""

from __future__ import annotations

import re
from typing import NamedTuple

_WS = re.compile(r"\s+")
_EDGE_PUNCT = "\"'`.,;:!?()[]{}<>*_-"


class Triplet(NamedTuple):
    subject: str
    relation: str
    object: str


class TripletParseError(ValueError):
    pass


def collapse_ws(text: str) -> str:
    return _WS.sub(" ", text).strip()


def strip_quotes(text: str) -> str:
    return collapse_ws(text).strip(_EDGE_PUNCT + " ")


def parse_triplet(text: str) -> Triplet:
    """Parse one comma-separated triplet.

    More than three parts keep the first as subject and the last as object;
    everything in between is re-joined as the relation.
    """
    parts = [strip_quotes(p) for p in text.split(",")]
    if len(parts) < 3:
        raise TripletParseError(f"need at least 3 comma-separated parts: {text!r}")
    subject, obj = parts[0], parts[-1]
    relation = ", ".join(p for p in parts[1:-1] if p)
    if not subject or not relation or not obj:
        raise TripletParseError(f"empty slot in triplet: {text!r}")
    return Triplet(subject, relation, obj)


def triplet_text(edge) -> str:
    """Render an edge or a plain ``(s, r, o)`` as ``"s, r, o"``."""
    if hasattr(edge, "subject") and hasattr(edge.subject, "canonical"):
        return f"{edge.subject.canonical}, {edge.relation}, {edge.object.canonical}"
    s, r, o = edge
    return f"{s}, {r}, {o}"


def format_triplet_list(triplets) -> str:
    return "; ".join(triplet_text(t) for t in triplets)
