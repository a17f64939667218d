"""Relabelling between our tube numbering and the reference one-tube tables.

Our tubes are numbered by descending period (ties broken by the smallest
simple), and inside a tube E_1 is the lexicographically smallest simple.  The
reference tables fix their own numbering, so each (type, sink) needs a tube
permutation among tubes of equal period and a rotation of the socle index in
each tube.  The fitted correspondence is frozen in ``data/calibration.json``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class Relabel:
    perm: tuple[int, ...]  # reference tube k -> our tube perm[k - 1]
    rotation: tuple[int, ...]  # our socle = reference socle + rotation[k - 1] (mod period)
    periods: tuple[int, ...]  # periods of the reference tubes

    def to_ours(self, k: int, socle: int) -> tuple[int, int]:
        p = self.periods[k - 1]
        return self.perm[k - 1], (socle - 1 + self.rotation[k - 1]) % p + 1

    def to_reference(self, mu: int, socle: int) -> tuple[int, int]:
        k = self.perm.index(mu) + 1
        p = self.periods[k - 1]
        return k, (socle - 1 - self.rotation[k - 1]) % p + 1

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "rotation": list(self.rotation), "periods": list(self.periods)}

    @classmethod
    def from_json(cls, d: Mapping) -> "Relabel":
        return cls(tuple(d["perm"]), tuple(d["rotation"]), tuple(d["periods"]))

    @classmethod
    def identity(cls, periods: Sequence[int]) -> "Relabel":
        return cls(tuple(range(1, len(periods) + 1)), (0,) * len(periods), tuple(periods))


def _data(name: str) -> dict:
    return json.loads(resources.files("tamedeg").joinpath("data", name).read_text())


def golden_rows() -> list[dict]:
    """Rows {type, sink, v_vertex, v_shift, tube, summands} of the reference tables."""
    return _data("golden_rows.json")["rows"]


def load_calibration() -> dict[tuple[str, int], Relabel]:
    raw = _data("calibration.json")["quivers"]
    out = {}
    for key, val in raw.items():
        typ, sink = key.split(":")
        out[(typ, int(sink))] = Relabel.from_json(val)
    return out


def relabel_for(type_name: str, sink: int, periods: Sequence[int]) -> Relabel:
    """Frozen relabelling, or the identity if this quiver was never calibrated."""
    return load_calibration().get((type_name, sink), Relabel.identity(periods))


def row_in_our_labels(rel: Relabel, row: Mapping) -> tuple[int, list[tuple[int, int]]]:
    """(our tube, sorted [(socle, length)]) for a reference row."""
    mu = rel.perm[row["tube"] - 1]
    summands = sorted((rel.to_ours(row["tube"], s)[1], l) for s, l in row["summands"])
    return mu, summands


def fit(
    rows: Iterable[Mapping],
    found: Mapping[tuple[int, int, int], Sequence[Sequence[tuple[int, int]]]],
    periods: Sequence[int],
) -> tuple[Relabel, list[Mapping]]:
    """Search permutations (within equal periods) and rotations.

    ``found[(v_vertex, v_shift, mu)]`` lists our one-tube minimal
    deformations as sorted (socle, length) lists.  Returns the relabelling
    with fewest unmatched rows (ties: lexicographically first) and those rows.
    """
    rows = list(rows)
    t = len(periods)
    best: tuple[Relabel, list[Mapping]] | None = None
    for perm in itertools.permutations(range(1, t + 1)):
        if any(periods[perm[i] - 1] != periods[i] for i in range(t)):
            continue
        for rot in itertools.product(*[range(p) for p in periods]):
            rel = Relabel(tuple(perm), tuple(rot), tuple(periods))
            misses = []
            for r in rows:
                mu, summ = row_in_our_labels(rel, r)
                got = [sorted(map(tuple, m)) for m in found.get((r["v_vertex"], r["v_shift"], mu), ())]
                if summ not in got:
                    misses.append(r)
            if best is None or len(misses) < len(best[1]):
                best = (rel, misses)
            if not misses:
                return best
    assert best is not None
    return best
