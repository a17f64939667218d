"""Fit the tube relabelling against the reference one-tube tables and freeze it.

For every (type, sink) in the golden rows the one-tube blocs of each listed
target are computed in every non-homogeneous tube; then a tube permutation
and socle rotation is chosen so that each listed row is among our blocs.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

from tamedeg import from_type
from tamedeg.blocs import classify
from tamedeg.calibration import fit, golden_rows
from tamedeg.catalog import Catalog
from tamedeg.order import DegenOrder


@dataclass
class Config:
    out: Path
    types: tuple[str, ...]
    extras: Path | None


def parse_args(argv=None) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/tamedeg/data/calibration.json")
    ap.add_argument("--types", nargs="*", default=["D~8", "E~6", "E~7", "E~8"])
    ap.add_argument("--extras", type=Path, default=None, help="write our blocs missing from the tables here")
    a = ap.parse_args(argv)
    return Config(a.out, tuple(a.types), a.extras)


def main(argv=None) -> int:
    cfg = parse_args(argv)
    rows = [r for r in golden_rows() if r["type"] in cfg.types]
    by_quiver = defaultdict(list)
    for r in rows:
        by_quiver[(r["type"], r["sink"])].append(r)
    result, extras, failed = {}, [], 0
    for (typ, sink), rs in sorted(by_quiver.items()):
        t0 = time.time()
        cat = Catalog(from_type(typ, sink=sink))
        order = DegenOrder(cat)
        u = cat.P(sink)
        found = {}
        for r in rs:
            v = cat.I(r["v_vertex"], r["v_shift"])
            for t in cat.tubes:
                key = (r["v_vertex"], r["v_shift"], t.mu)
                if key not in found:
                    found[key] = [sorted((x.b, x.l) for x in b.M.summands) for b in classify(order, u, v, tube=t.mu)]
        periods = [t.period for t in cat.tubes]
        rel, misses = fit(rs, found, periods)
        failed += len(misses)
        result[f"{typ}:{sink}"] = rel.to_json()
        listed = defaultdict(int)
        for r in rs:
            listed[(r["v_vertex"], r["v_shift"], rel.perm[r["tube"] - 1])] += 1
        for key, ms in sorted(found.items()):
            if len(ms) > listed[key]:
                extras.append({"type": typ, "sink": sink, "v_vertex": key[0], "v_shift": key[1], "tube": key[2],
                               "ours": ms})
        print(f"{typ} P({sink}): {len(rs)} rows, perm {rel.perm}, rotation {rel.rotation}, "
              f"unmatched {len(misses)}, {time.time() - t0:.1f}s")
        for r in misses:
            print("  unmatched:", r)
    cfg.out.write_text(json.dumps({"description": "reference tube k -> our tube perm[k-1]; "
                                   "our socle = reference socle + rotation[k-1] mod period",
                                   "quivers": result}, indent=1, sort_keys=True) + "\n")
    if cfg.extras:
        cfg.extras.write_text(json.dumps(extras, indent=1) + "\n")
    print(f"{len(extras)} (target, tube) cells hold more blocs than the tables list")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
