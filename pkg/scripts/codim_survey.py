"""Classify building blocs under the dimension cap and audit their codimensions.

One-tube blocs are computed for every preinjective target with
dim V <= (p(Q) + 2) d(V) delta; all blocs (any shape) for targets up to a
small tau-shift.  Writes the run files and prints a codim histogram with the
audit results.
"""
from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from tamedeg import from_type
from tamedeg.blocs import (
    audit_structural_lemmas,
    audit_codimension,
    dump_run,
    run_classification,
    target_family,
    targets_within_cap,
)
from tamedeg.calibration import relabel_for
from tamedeg.catalog import Catalog
from tamedeg.order import DegenOrder


@dataclass
class Config:
    type_name: str
    sink: int
    factor: int | None
    general_shift: int
    out_dir: Path | None


def parse_args(argv=None) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--type", dest="type_name", default="E~6")
    ap.add_argument("--sink", type=int, default=3)
    ap.add_argument("--factor", type=int, default=None, help="cap factor (default p(Q) + 2)")
    ap.add_argument("--general-shift", type=int, default=3, help="tau-shift bound for the all-shapes run")
    ap.add_argument("--out-dir", type=Path, default=None)
    a = ap.parse_args(argv)
    return Config(a.type_name, a.sink, a.factor, a.general_shift, a.out_dir)


def main(argv=None) -> int:
    cfg = parse_args(argv)
    cat = Catalog(from_type(cfg.type_name, sink=cfg.sink))
    order = DegenOrder(cat)
    u = cat.P(cfg.sink)
    rel = relabel_for(cfg.type_name, cfg.sink, [t.period for t in cat.tubes]) if cat.affine else None
    plans = []
    if cat.affine:
        plans.append(("tubes", targets_within_cap(cat, ("I",), cfg.factor)))
        plans.append(("general", target_family(cat, cfg.general_shift, ("I", "P", "R"))))
    else:
        plans.append(("general", [x for x in order._dynkin_indecs]))
    bad = 0
    for mode, targets in plans:
        t0 = time.perf_counter()
        run = run_classification(order, u, targets, mode, type_name=cfg.type_name, sink=cfg.sink, relabel=rel)
        reps = [audit_codimension(order, run)] + list(audit_structural_lemmas(order, run).values())
        hist = Counter(b.codim for b in run.blocs)
        print(f"{mode}: {len(targets)} targets, {len(run.blocs)} blocs, codims {dict(sorted(hist.items()))}, "
              f"{time.perf_counter() - t0:.1f}s")
        for rep in reps:
            print(f"  {rep.name}: {rep.checked} checks, {len(rep.violations)} violations")
            bad += len(rep.violations)
        if cfg.out_dir:
            cfg.out_dir.mkdir(parents=True, exist_ok=True)
            name = f"{cfg.type_name.replace('~', 't')}_sink{cfg.sink}_{mode}.json"
            (cfg.out_dir / name).write_text(dump_run(run))
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
