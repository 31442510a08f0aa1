"""JSON and DOT serialisation of posets.

The JSON form is ``{"labels": [...], "covers": [[i, j], ...]}`` where the
covers are Hasse pairs; readers take the transitive closure.  Writers emit
the cover pairs only, sorted lexicographically.
"""

from __future__ import annotations

import json
from pathlib import Path

from .poset import FinitePoset, RankFunction, cover_pairs, from_cover_relations, grading


def poset_to_dict(P: FinitePoset) -> dict:
    return {"labels": list(P.labels), "covers": [[x, y] for x, y in cover_pairs(P)]}


def poset_from_dict(data: dict) -> FinitePoset:
    try:
        labels = [str(label) for label in data["labels"]]
        covers = [(int(x), int(y)) for x, y in data.get("covers", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed poset document: {exc}") from None
    return from_cover_relations(labels, covers)


def dumps(P: FinitePoset) -> str:
    return json.dumps(poset_to_dict(P))


def loads(text: str) -> FinitePoset:
    return poset_from_dict(json.loads(text))


def read_poset(path) -> FinitePoset:
    return loads(Path(path).read_text())


def write_poset(P: FinitePoset, path) -> None:
    Path(path).write_text(dumps(P) + "\n")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(P: FinitePoset, name: str = "P") -> str:
    """Hasse diagram in DOT, drawn bottom to top; rank rows when graded."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for x, label in enumerate(P.labels):
        lines.append(f"  n{x} [label={_quote(label)}];")
    for x, y in cover_pairs(P):
        lines.append(f"  n{x} -> n{y};")
    rank = grading(P)
    if isinstance(rank, RankFunction):
        rows: dict[int, list[int]] = {}
        for x in range(P.size):
            rows.setdefault(rank[x], []).append(x)
        for r in sorted(rows):
            members = " ".join(f"n{x};" for x in rows[r])
            lines.append(f"  {{ rank=same; {members} }}")
    lines.append("}")
    return "\n".join(lines) + "\n"
