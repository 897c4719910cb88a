"""Prompt templates shipped as text assets, rendered by exact slot substitution.

Templates contain literal JSON braces, so ``str.format`` is not usable; only
the named ``{slot}`` tokens are replaced.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

TEMPLATES = ("extraction", "replacement", "exploration_check", "planning", "decision",
             "summarization", "importance")
EXPLORE_MARKER = "*if is explore* "


class MissingSlot(KeyError):
    pass


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    if name not in TEMPLATES:
        raise KeyError(f"unknown template {name!r}")
    return resources.files("arigraph.llm").joinpath(f"templates/{name}.txt").read_text(encoding="utf-8")


def render(name: str, slots: dict[str, object], explore: bool = False) -> str:
    text = load_template(name)
    lines = []
    for line in text.split("\n"):
        if line.startswith(EXPLORE_MARKER):
            if not explore:
                continue
            line = line[len(EXPLORE_MARKER):]
        lines.append(line)
    text = "\n".join(lines).rstrip("\n")
    names = _SLOTS[name]

    def fill(m: re.Match) -> str:
        key = m.group(1)
        if key not in names:
            return m.group(0)
        if key not in slots:
            raise MissingSlot(f"template {name!r} needs slot {key!r}")
        return str(slots[key])

    return _SLOT.sub(fill, text)


_SLOT = re.compile(r"\{(\w+)\}")
_SLOTS = {
    "extraction": ("example", "observation"),
    "replacement": ("ex_triplets", "new_triplets"),
    "exploration_check": ("plan0",),
    "planning": ("main_goal", "n_prev", "observations", "observation", "subgraph",
                 "topk_episodic", "top_episodic", "plan0", "all_unexpl_exits"),
    "decision": ("main_goal", "n_prev", "observations", "observation", "subgraph",
                 "topk_episodic", "top_episodic", "plan0", "all_unexpl_exits", "valid_actions"),
    "summarization": ("main_goal", "n_prev", "observations", "observation", "summary"),
    "importance": ("main_goal", "observation"),
}

