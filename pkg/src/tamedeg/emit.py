"""DOT and JSON renderings of deformation posets."""
from __future__ import annotations

import json
from typing import Callable

from .catalog import Catalog, Indec, ModuleSum
from .order import DegenOrder, DeformationPoset
from .tubes import extension_set_K, is_extension_regular_pair


def extension_predicate(order: DegenOrder, u: Indec, v: Indec) -> Callable[[ModuleSum], bool] | None:
    """Which deformations of U + V are middle terms of extensions, when known."""
    cat = order.catalog
    if u.kind == "R" and v.kind == "R":
        if u.a != v.a:
            return None
        return lambda m: is_extension_regular_pair(cat, m, u, v)
    if u.kind != "R" and v.kind != "R":
        return lambda m: True
    if cat.affine and u.kind == "P" and sum(u.dim) == 1 and v.kind == "R":
        if v.dim == cat.delta and cat.period(v.a) >= 2:
            return extension_set_K(order, u, v)
        return lambda m: True
    return None


def bold_set(poset: DeformationPoset, pred: Callable[[ModuleSum], bool] | None) -> tuple[int, ...]:
    """Proper deformations that are extensions (the target itself is never bold)."""
    if pred is None:
        return ()
    return tuple(i for i, m in enumerate(poset.elements) if m != poset.target and pred(m))


def most_generic_non_extensions(order: DegenOrder, elems: list[ModuleSum],
                                pred: Callable[[ModuleSum], bool]) -> list[ModuleSum]:
    """Non-extensions with no other non-extension strictly more generic."""
    non = [m for m in elems if not pred(m)]
    return [m for m in non if not any(l != m and order.leq(l, m) for l in non)]


def emit_dot(poset: DeformationPoset, bold: tuple[int, ...] = (), name: str = "deformations") -> str:
    """Hasse diagram: one node per element, ranked by codim, edges along covers (lower -> upper)."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    bold = set(bold)
    for i, m in enumerate(poset.elements):
        style = ", style=bold" if i in bold else ""
        lines.append(f'  n{i} [label="{m.text()}", codim={poset.codims[i]}{style}];')
    for c in sorted(set(poset.codims)):
        same = " ".join(f"n{i};" for i, k in enumerate(poset.codims) if k == c)
        lines.append(f"  {{ rank=same; {same} }}")
    for i, j in poset.covers:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_to_json(poset: DeformationPoset, bold: tuple[int, ...] = ()) -> dict:
    return {
        "target": poset.target.text(),
        "elements": [
            {"summands": [x.text() for x in m.summands], "codim": c}
            for m, c in zip(poset.elements, poset.codims)
        ],
        "covers": [list(e) for e in poset.covers],
        "bold": list(bold),
    }


def poset_from_json(cat: Catalog, data: dict) -> tuple[DeformationPoset, tuple[int, ...]]:
    elems = [cat.msum(cat.parse_indec(t)[0] for t in e["summands"]) for e in data["elements"]]
    codims = [e["codim"] for e in data["elements"]]
    covers = [tuple(e) for e in data["covers"]]
    poset = DeformationPoset(cat.parse(data["target"]), elems, codims, covers)
    return poset, tuple(data.get("bold", ()))


def dumps(data: dict) -> str:
    return json.dumps(data, indent=1, sort_keys=True) + "\n"
