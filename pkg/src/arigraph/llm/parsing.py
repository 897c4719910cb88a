"""Total parsers for model output. None of these raise on bad input."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from arigraph.triplets import Triplet, TripletParseError, parse_triplet

_QUOTED = re.compile(r"'([^']*)'|\"([^\"]*)\"")
_LABEL = re.compile(r"^\s*extracted triplets\s*:", re.IGNORECASE)


@dataclass
class Parsed:
    items: list = field(default_factory=list)
    rejected: list[str] = field(default_factory=list)


def _segments(text: str) -> list[str]:
    out = []
    for seg in re.split(r"[;\n]", text):
        seg = seg.strip()
        if not seg:
            continue
        quoted = [a or b for a, b in _QUOTED.findall(seg)]
        if len(quoted) >= 2 and all(q.count(",") >= 2 for q in quoted):
            out.extend(quoted)
        else:
            out.append(seg)
    return out


def parse_triplet_list(text: str) -> Parsed:
    """``"s1, r1, o1; s2, r2, o2"`` -> triplets; segments with < 2 commas are rejected."""
    result = Parsed()
    if not isinstance(text, str):
        return result
    text = _LABEL.sub("", text, count=1)
    for seg in _segments(text):
        try:
            result.items.append(parse_triplet(seg))
        except TripletParseError:
            result.rejected.append(seg)
    return result


def _parse_side(text: str) -> Triplet:
    return parse_triplet(text.strip().strip("[]").strip())


def parse_replacements(text: str) -> Parsed:
    """``[[a -> b], [c -> d]]`` -> ``[(Triplet, Triplet), ...]``.

    Surrounding prose is ignored: the payload is the span from the first
    ``[[`` to the last ``]]``. A bare ``[]`` means no replacements.
    """
    result = Parsed()
    if not isinstance(text, str):
        return result
    start, end = text.find("[["), text.rfind("]]")
    if start < 0 or end < start:
        if "->" in text:
            result.rejected.append(text.strip())
        return result
    body = text[start + 1 : end + 1]
    for chunk in re.split(r"\]\s*,\s*\[", body):
        chunk = chunk.strip().strip("[]").strip()
        if not chunk:
            continue
        sides = chunk.split("->")
        if len(sides) != 2:
            result.rejected.append(chunk)
            continue
        try:
            result.items.append((_parse_side(sides[0]), _parse_side(sides[1])))
        except TripletParseError:
            result.rejected.append(chunk)
    return result


def parse_bool_strict(text: str) -> bool | None:
    if not isinstance(text, str):
        return None
    folded = text.strip().casefold()
    if folded == "true":
        return True
    if folded == "false":
        return False
    return None


_MISSING_COMMA = re.compile(r'("|\d|true|false|null|\]|\})(\s*\n\s*)(")')
_TRAILING_COMMA = re.compile(r",(\s*[}\]])")


def extract_json_object(text: str) -> dict | None:
    """Outermost ``{...}`` in ``text`` parsed as JSON, tolerating common slips."""
    if not isinstance(text, str):
        return None
    start, end = text.find("{"), text.rfind("}")
    if start < 0 or end < start:
        return None
    blob = text[start : end + 1]
    for candidate in (blob, _TRAILING_COMMA.sub(r"\1", _MISSING_COMMA.sub(r"\1,\2\3", blob))):
        try:
            obj = json.loads(candidate)
        except (json.JSONDecodeError, RecursionError):
            continue
        if isinstance(obj, dict):
            return obj
    return None
