"""Shift reference table rows by whole periods and compare with direct classification.

For each row M < P(i) + tau^k I(j) whose tube satisfies the shift condition,
the bloc is shifted ``--times`` times by tau^p(Q) and each image is checked
against the one-tube blocs computed directly at the shifted target.
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from tamedeg import from_type
from tamedeg.blocs import classify
from tamedeg.calibration import golden_rows, load_calibration, row_in_our_labels
from tamedeg.catalog import Catalog
from tamedeg.order import DegenOrder
from tamedeg.tubes import make_bloc, periodic_shift, shift_tube, single_tube


@dataclass
class Config:
    types: tuple[str, ...]
    times: int
    limit: int | None


def parse_args(argv=None) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--types", nargs="*", default=["E~6", "D~8", "E~7"])
    ap.add_argument("--times", type=int, default=1)
    ap.add_argument("--limit", type=int, default=None, help="stop after this many rows")
    a = ap.parse_args(argv)
    return Config(tuple(a.types), a.times, a.limit)


def main(argv=None) -> int:
    cfg = parse_args(argv)
    cal = load_calibration()
    orders: dict = {}
    done = bad = skipped = 0
    for r in golden_rows():
        if r["type"] not in cfg.types or (cfg.limit is not None and done >= cfg.limit):
            continue
        key = (r["type"], r["sink"])
        if key not in orders:
            orders[key] = DegenOrder(Catalog(from_type(*key[:1], sink=key[1])))
        order = orders[key]
        cat = order.catalog
        mu, summ = row_in_our_labels(cal[key], r)
        b = make_bloc(order, cat.P(r["sink"]), cat.I(r["v_vertex"], r["v_shift"]),
                      cat.msum(cat.R(mu, s, l) for s, l in summ))
        if shift_tube(order, b) != mu:
            skipped += 1
            continue
        t0 = time.perf_counter()
        ok = True
        for _ in range(cfg.times):
            b = periodic_shift(order, b, mu=mu)
            direct = [d.M for d in classify(order, b.U, b.V, tube=single_tube(b.M))]
            ok = ok and b.M in direct
        done += 1
        bad += not ok
        print(f"{r['type']} {b.U.pretty()} {b.V.pretty()}: {b.M.text()} {'ok' if ok else 'MISMATCH'} "
              f"({time.perf_counter() - t0:.1f}s)")
    print(f"{done} rows shifted, {bad} mismatches, {skipped} rows without an eligible tube")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
