"""Deformation poset of U + V as DOT and JSON, with the extensions marked.

Examples:
  python scripts/hasse_diagram.py --tube 4 E1:10 E3:10 --dot fig.dot
  python scripts/hasse_diagram.py --type E~7 --sink 4 'P(4)' 'E1_1(4)' --non-extensions
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from tamedeg import from_type
from tamedeg.catalog import Catalog
from tamedeg.emit import bold_set, dumps, emit_dot, extension_predicate, most_generic_non_extensions, poset_to_json
from tamedeg.order import DegenOrder
from tamedeg.tubes import TubeCategory


@dataclass
class Config:
    U: str
    V: str
    tube_period: int | None
    type_name: str | None
    sink: int | None
    dot: Path | None
    json: Path | None
    non_extensions: bool


def parse_args(argv=None) -> Config:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("U")
    ap.add_argument("V")
    ap.add_argument("--tube", type=int, dest="tube_period", help="period of a stand-alone tube")
    ap.add_argument("--type", dest="type_name")
    ap.add_argument("--sink", type=int)
    ap.add_argument("--dot", type=Path)
    ap.add_argument("--json", type=Path)
    ap.add_argument("--non-extensions", action="store_true", help="list the most generic non-extensions")
    a = ap.parse_args(argv)
    if (a.tube_period is None) == (a.type_name is None):
        ap.error("give exactly one of --tube and --type")
    return Config(a.U, a.V, a.tube_period, a.type_name, a.sink, a.dot, a.json, a.non_extensions)


def main(argv=None) -> int:
    cfg = parse_args(argv)
    if cfg.tube_period is not None:
        cat = TubeCategory(cfg.tube_period)
    else:
        cat = Catalog(from_type(cfg.type_name, sink=cfg.sink))
    order = DegenOrder(cat)
    u, v = cat.parse_indec(cfg.U)[0], cat.parse_indec(cfg.V)[0]
    n = cat.msum([u, v])
    tube = u.a if cfg.tube_period is not None else None
    elems = order.deformations(n, tube=tube)
    poset = order.poset(n, elems)
    pred = extension_predicate(order, u, v)
    bold = bold_set(poset, pred)
    codims = sorted(set(poset.codims))
    print(f"{n.text()}: {len(poset.elements)} elements, {len(poset.covers)} covers, "
          f"{len(bold)} extensions, codims {codims[0]}..{codims[-1]}")
    if cfg.non_extensions:
        if pred is None:
            print("no extension criterion applies to this pair")
        else:
            for m in most_generic_non_extensions(order, [m for m in elems if m != n], pred):
                print(f"  not an extension: {m.pretty()} (codim {order.codim(n, m)})")
    if cfg.dot:
        cfg.dot.write_text(emit_dot(poset, bold))
    if cfg.json:
        cfg.json.write_text(dumps(poset_to_json(poset, bold)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
