"""JSON poset documents and DOT export.

Document shape:
    {"elements": [{"id": 3, "label": "a3"}, ...],
     "leq": [[i, j], ...],
     "closed": true}

With closed=true (the default) the pair list must already be the full
reflexive-transitive relation; nothing is repaired on the way in.  With
closed=false the pairs are covers and the reflexive-transitive closure is
taken before validation.
"""

from __future__ import annotations

import json
from typing import Any

from .poset import Poset, from_covers, validate


class DocumentError(ValueError):
    """Malformed poset document (shape problems, not order-axiom problems)."""


def poset_from_document(doc: Any) -> Poset:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    elements = doc.get("elements")
    if not isinstance(elements, list):
        raise DocumentError("'elements' must be a list")
    ids = []
    labels = []
    for e in elements:
        if not isinstance(e, dict) or not isinstance(e.get("id"), int) or isinstance(e.get("id"), bool):
            raise DocumentError("each element needs an integer 'id'")
        label = e.get("label")
        if label is not None and not isinstance(label, str):
            raise DocumentError("element 'label' must be a string when present")
        ids.append(e["id"])
        labels.append(label)
    order = sorted(range(len(ids)), key=lambda k: ids[k])
    ids_sorted = [ids[k] for k in order]
    labels_sorted = [labels[k] for k in order]
    if len(set(ids_sorted)) != len(ids_sorted):
        raise DocumentError("element ids must be distinct")
    pairs = doc.get("leq")
    if not isinstance(pairs, list):
        raise DocumentError("'leq' must be a list of [x, y] pairs")
    index = {x: i for i, x in enumerate(ids_sorted)}
    checked: list[tuple[int, int]] = []
    for p in pairs:
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in p)):
            raise DocumentError(f"bad leq pair {p!r}")
        if p[0] not in index or p[1] not in index:
            raise DocumentError(f"leq pair {p} mentions an unknown id")
        checked.append((index[p[0]], index[p[1]]))
    closed = doc.get("closed", True)
    if not isinstance(closed, bool):
        raise DocumentError("'closed' must be a boolean")
    n = len(ids_sorted)
    if closed:
        rows = [0] * n
        for i, j in checked:
            rows[i] |= 1 << j
        return validate(rows, ids_sorted, labels_sorted)
    return from_covers(n, checked, ids_sorted, labels_sorted)


def poset_to_document(P: Poset) -> dict:
    elements = []
    for i in range(P.n):
        e: dict[str, Any] = {"id": P.ids[i]}
        if P.labels[i] is not None:
            e["label"] = P.labels[i]
        elements.append(e)
    pairs = []
    for i in range(P.n):
        for j in range(P.n):
            if P.up[i] >> j & 1:
                pairs.append([P.ids[i], P.ids[j]])
    pairs.sort()
    return {"elements": elements, "leq": pairs, "closed": True}


def load_poset(text: str) -> Poset:
    return poset_from_document(json.loads(text))


def dump_poset(P: Poset) -> str:
    return json.dumps(poset_to_document(P), indent=2, sort_keys=True) + "\n"


def to_dot(P: Poset) -> str:
    """Hasse diagram in DOT, bottom-up rank, deterministic node/edge order."""
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for i in range(P.n):
        x = P.ids[i]
        label = P.labels[i] if P.labels[i] is not None else str(x)
        lines.append(f'  n{x} [label="{label}"];')
    for x, y in P.cover_pairs():
        lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
