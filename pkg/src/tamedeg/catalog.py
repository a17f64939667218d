"""Symbolic indecomposables, the tau calculus and the tube structure.

An indecomposable is one of

* ``P(i)^-k``  the preprojective tau^{-k} P(i),
* ``E{mu}_{s}({l})``  the module of the tube mu with regular socle E_s and
  regular length l,
* ``I(i)^+k``  the preinjective tau^k I(i).

Tubes 1..t are the non-homogeneous ones (descending period, ties broken by the
lexicographically smallest simple).  Every id above t names a homogeneous
tube; their simple has dimension delta.  Ids are taken literally (equal ids
mean the same tube); ``Catalog.canonical`` renumbers the homogeneous tubes
that are not shared with a reference module.

Regular top convention: Top(E_s(l)) = E_{s+l-1}, tau E_s = E_{s-1}.

In Dynkin mode every indecomposable is preprojective, so only the ``P``
encoding is used; ``I(i)^+k`` inputs are converted on parsing.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .quiver import Quiver, QuiverError, Vector, add, is_positive, leq_vec, scale, sub

MINUS_INFINITY = float("-inf")
KIND_ORDER = {"P": 0, "R": 1, "I": 2}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Indec:
    kind: str  # 'P', 'R' or 'I'
    a: int  # vertex (P, I) or tube id (R)
    b: int  # shift (P, I) or socle index (R)
    l: int = 0  # regular length (R only)
    dim: Vector = field(default=(), compare=False, repr=False)
    homogeneous: bool = field(default=False, compare=False, repr=False)

    @property
    def sort_key(self) -> tuple:
        return (KIND_ORDER[self.kind], self.a, self.b, self.l)

    def __lt__(self, other: "Indec") -> bool:
        return self.sort_key < other.sort_key

    @property
    def is_preprojective(self) -> bool:
        return self.kind == "P"

    @property
    def is_regular(self) -> bool:
        return self.kind == "R"

    @property
    def is_preinjective(self) -> bool:
        return self.kind == "I"

    # regular coordinates
    @property
    def tube(self) -> int:
        return self.a

    @property
    def socle(self) -> int:
        return self.b

    @property
    def length(self) -> int:
        return self.l

    # preprojective / preinjective coordinates
    @property
    def vertex(self) -> int:
        return self.a

    @property
    def shift(self) -> int:
        return self.b

    def text(self) -> str:
        if self.kind == "P":
            return f"P({self.a})" + (f"^-{self.b}" if self.b else "")
        if self.kind == "I":
            return f"I({self.a})" + (f"^+{self.b}" if self.b else "")
        return f"E{self.a}_{self.b}({self.l})"

    def pretty(self) -> str:
        if self.kind == "P":
            return f"tau^-{self.b} P({self.a})" if self.b else f"P({self.a})"
        if self.kind == "I":
            return f"tau^{self.b} I({self.a})" if self.b else f"I({self.a})"
        return self.text()

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class TubeData:
    mu: int
    period: int
    simples: tuple[Vector, ...]

    def simple_dim(self, s: int) -> Vector:
        return self.simples[(s - 1) % self.period]

    def index(self, s: int) -> int:
        """Normalise a simple index into 1..period."""
        return (s - 1) % self.period + 1

    def top(self, s: int, l: int) -> int:
        return self.index(s + l - 1)

    def factors(self, s: int, l: int) -> list[int]:
        return [self.index(s + j) for j in range(l)]


@dataclass(frozen=True)
class ModuleSum:
    """Canonical multiset of indecomposables.  Build through ``Catalog.msum``."""

    items: tuple[tuple[Indec, int], ...]
    dim: Vector = field(compare=False, repr=False)

    def __iter__(self) -> Iterator[tuple[Indec, int]]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    @property
    def summands(self) -> list[Indec]:
        out = []
        for x, m in self.items:
            out += [x] * m
        return out

    @property
    def count(self) -> int:
        return sum(m for _, m in self.items)

    def multiplicity(self, x: Indec) -> int:
        for y, m in self.items:
            if y == x:
                return m
        return 0

    def part(self, kind: str) -> list[tuple[Indec, int]]:
        return [(x, m) for x, m in self.items if x.kind == kind]

    @property
    def tubes(self) -> list[int]:
        return sorted({x.a for x, _ in self.items if x.kind == "R"})

    def text(self) -> str:
        if not self.items:
            return "0"
        return "+".join(x.text() + (f"*{m}" if m > 1 else "") for x, m in self.items)

    def pretty(self) -> str:
        if not self.items:
            return "0"
        return " + ".join(x.pretty() + (f"*{m}" if m > 1 else "") for x, m in self.items)

    def __str__(self) -> str:
        return self.text()


class Catalog:
    """All indecomposables of one quiver, with tau and dimension lookups."""

    def __init__(self, quiver: Quiver):
        self.quiver = quiver
        self.n = quiver.n
        self.affine = quiver.kind == "ExtendedDynkin"
        self._pp: dict[int, list[Vector]] = {i: [quiver.dim_projective(i)] for i in quiver.vertices}
        self._pi: dict[int, list[Vector]] = {i: [quiver.dim_injective(i)] for i in quiver.vertices}
        self._proj_index = {quiver.dim_projective(i): i for i in quiver.vertices}
        self._inj_index = {quiver.dim_injective(i): i for i in quiver.vertices}
        self._reg_cache: dict[tuple[int, int, int], Vector] = {}
        if self.affine:
            self.delta = quiver.delta
            self.tubes = self._discover_tubes()
            self.t = len(self.tubes)
        else:
            self.delta = None
            self.tubes = []
            self.t = 0

    # --- tubes -----------------------------------------------------------
    def _discover_tubes(self) -> list[TubeData]:
        q = self.quiver
        delta = self.delta
        grids = np.meshgrid(*[np.arange(d + 1) for d in delta], indexing="ij")
        vecs = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
        e = np.array(q.euler_matrix, dtype=np.int64)
        qv = np.einsum("ij,jk,ik->i", vecs, e, vecs)
        dv = vecs @ (np.array(delta, dtype=np.int64) @ e)
        tot = vecs.sum(axis=1)
        mask = (qv == 1) & (dv == 0) & (tot > 0) & (tot < sum(delta))
        roots = {tuple(int(a) for a in v) for v in vecs[mask]}
        tubes = []
        seen: set[Vector] = set()
        for r in sorted(roots):
            if r in seen:
                continue
            orbit = [r]
            x = q.c(r)
            while x != r:
                orbit.append(x)
                x = q.c(x)
                if len(orbit) > len(roots):
                    raise RuntimeError("c-orbit of a regular root does not close")
            seen.update(orbit)
            total = orbit[0]
            for y in orbit[1:]:
                total = add(total, y)
            if total != delta:
                continue
            first = min(orbit)
            simples = [first]
            for _ in range(len(orbit) - 1):
                simples.append(q.c(simples[-1], -1))
            tubes.append(tuple(simples))
        tubes.sort(key=lambda s: (-len(s), s[0]))
        out = [TubeData(mu, len(s), s) for mu, s in enumerate(tubes, start=1)]
        if sum(t.period - 1 for t in out) != self.n - 2:
            raise RuntimeError("tube periods do not satisfy sum(p - 1) = n - 2")
        return out

    def discover_tubes(self) -> list[TubeData]:
        return list(self.tubes)

    @property
    def homogeneous_id(self) -> int:
        """Id of the representative homogeneous tube."""
        return self.t + 1

    def is_homogeneous(self, mu: int) -> bool:
        return mu > self.t

    def tube(self, mu: int) -> TubeData:
        if not self.affine:
            raise CatalogError("Dynkin quivers have no tubes")
        if mu < 1:
            raise CatalogError(f"unknown tube {mu}")
        if mu <= self.t:
            return self.tubes[mu - 1]
        return TubeData(mu, 1, (self.delta,))

    def period(self, mu: int) -> int:
        return self.tube(mu).period

    # --- constructors ----------------------------------------------------
    def _orbit_dim(self, table: dict[int, list[Vector]], i: int, k: int, step: int) -> Vector | None:
        seq = table[i]
        while len(seq) <= k:
            nxt = self.quiver.c(seq[-1], step)
            if not is_positive(nxt):
                return None
            seq.append(nxt)
        return seq[k]

    def P(self, i: int, k: int = 0) -> Indec:
        if i not in self.quiver.vertices or k < 0:
            raise CatalogError(f"no preprojective P({i})^-{k}")
        d = self._orbit_dim(self._pp, i, k, -1)
        if d is None:
            raise CatalogError(f"tau^-{k} P({i}) is zero")
        return Indec("P", i, k, 0, d)

    def I(self, i: int, k: int = 0) -> Indec:
        if i not in self.quiver.vertices or k < 0:
            raise CatalogError(f"no preinjective I({i})^+{k}")
        d = self._orbit_dim(self._pi, i, k, 1)
        if d is None:
            raise CatalogError(f"tau^{k} I({i}) is zero")
        if not self.affine:
            return self.from_dim(d)[0]
        return Indec("I", i, k, 0, d)

    def R(self, mu: int, s: int, l: int) -> Indec:
        tube = self.tube(mu)
        if l < 1:
            raise CatalogError("regular length must be positive")
        s = tube.index(s)
        key = (mu if mu <= self.t else 0, s, l)
        d = self._reg_cache.get(key)
        if d is None:
            d = (0,) * self.n
            for j in range(l):
                d = add(d, tube.simple_dim(s + j))
            self._reg_cache[key] = d
        return Indec("R", mu, s, l, d, mu > self.t)

    def simple(self, mu: int, s: int) -> Indec:
        return self.R(mu, s, 1)

    def simples(self, mu: int) -> list[Indec]:
        return [self.R(mu, s, 1) for s in range(1, self.period(mu) + 1)]

    def all_regular_simples(self) -> list[Indec]:
        out = []
        for t in self.tubes:
            out += self.simples(t.mu)
        return out

    # --- tau -------------------------------------------------------------
    def is_projective(self, x: Indec) -> bool:
        return x.kind == "P" and x.b == 0

    def is_injective(self, x: Indec) -> bool:
        if x.kind == "I":
            return x.b == 0
        if x.kind == "P" and not self.affine:
            return self._orbit_dim(self._pp, x.a, x.b + 1, -1) is None
        return False

    def tau(self, x: Indec) -> Indec:
        if self.is_projective(x):
            raise CatalogError(f"projective {x} has no tau")
        if x.kind == "P":
            return self.P(x.a, x.b - 1)
        if x.kind == "I":
            return self.I(x.a, x.b + 1)
        return self.R(x.a, x.b - 1, x.l)

    def tau_inv(self, x: Indec) -> Indec:
        if self.is_injective(x):
            raise CatalogError(f"injective {x} has no tau inverse")
        if x.kind == "P":
            return self.P(x.a, x.b + 1)
        if x.kind == "I":
            return self.I(x.a, x.b - 1)
        return self.R(x.a, x.b + 1, x.l)

    def tau_power(self, x: Indec, k: int) -> Indec:
        """tau^k (k may be negative)."""
        for _ in range(abs(k)):
            x = self.tau(x) if k > 0 else self.tau_inv(x)
        return x

    def defect(self, x: Indec | Sequence[int]) -> int:
        d = x.dim if isinstance(x, Indec) else x
        return self.quiver.defect(d)

    def top(self, x: Indec) -> Indec:
        return self.R(x.a, self.tube(x.a).top(x.b, x.l), 1)

    def soc(self, x: Indec) -> Indec:
        return self.R(x.a, x.b, 1)

    def with_top(self, mu: int, top: int, l: int) -> Indec:
        """Tube module with regular top E_top and length l."""
        return self.R(mu, top - l + 1, l)

    # --- lookup by dimension vector ---------------------------------------
    @cached_property
    def _partial_sums(self) -> dict[Vector, tuple[int, int, int]]:
        table = {}
        for t in self.tubes:
            for s in range(1, t.period + 1):
                for r in range(1, t.period):
                    table[self.R(t.mu, s, r).dim] = (t.mu, s, r)
        return table

    def from_dim(self, d: Sequence[int]) -> list[Indec]:
        """All indecomposables with dimension vector d.

        Real roots give a single module.  For d = m*delta the tube modules
        E_s(m p) of the non-homogeneous tubes are listed together with the
        homogeneous module of the representative tube.
        """
        d = tuple(d)
        if len(d) != self.n or not is_positive(d):
            return []
        q = self.quiver
        qd = q.tits_form(d)
        if not self.affine:
            if qd != 1:
                return []
            x, k = d, 0
            while x not in self._proj_index:
                x = q.c(x)
                k += 1
                if not is_positive(x):
                    return []
            return [self.P(self._proj_index[x], k)]
        df = q.defect(d)
        if df < 0 and qd == 1:
            x, k = d, 0
            while x not in self._proj_index:
                x = q.c(x)
                k += 1
                if not is_positive(x):
                    return []
            return [self.P(self._proj_index[x], k)]
        if df > 0 and qd == 1:
            x, k = d, 0
            while x not in self._inj_index:
                x = q.c(x, -1)
                k += 1
                if not is_positive(x):
                    return []
            return [self.I(self._inj_index[x], k)]
        if df != 0:
            return []
        if qd == 1:
            m = 0
            x = d
            while is_positive(x):
                hit = self._partial_sums.get(x)
                if hit:
                    mu, s, r = hit
                    return [self.R(mu, s, r + m * self.period(mu))]
                x = sub(x, self.delta)
                m += 1
            return []
        if qd == 0:
            m = d[0] // self.delta[0]
            if d != scale(m, self.delta):
                return []
            out = [self.R(t.mu, s, m * t.period) for t in self.tubes for s in range(1, t.period + 1)]
            out.append(self.R(self.homogeneous_id, 1, m))
            return out
        return []

    def unique_from_dim(self, d: Sequence[int]) -> Indec:
        found = self.from_dim(d)
        if len(found) != 1:
            raise CatalogError(f"no unique indecomposable of dimension {tuple(d)}")
        return found[0]

    # --- enumeration -----------------------------------------------------
    def _component_up_to(self, kind: str, bound: Sequence[int]) -> list[Indec]:
        table, step = (self._pp, -1) if kind == "P" else (self._pi, 1)
        period = self.quiver.coxeter_period
        out = []
        for i in self.quiver.vertices:
            k, misses = 0, 0
            while True:
                d = self._orbit_dim(table, i, k, step)
                if d is None:
                    break
                if leq_vec(d, bound):
                    out.append(Indec(kind, i, k, 0, d))
                    misses = 0
                else:
                    misses += 1
                    # tau^{-p} adds a positive multiple of delta, so a full
                    # period of misses means every later shift misses too
                    if self.affine and misses >= period:
                        break
                k += 1
        return out

    def preprojectives_up_to(self, bound: Sequence[int]) -> list[Indec]:
        return self._component_up_to("P", tuple(bound))

    def preinjectives_up_to(self, bound: Sequence[int]) -> list[Indec]:
        if not self.affine:
            return []
        return self._component_up_to("I", tuple(bound))

    def regulars_up_to(self, bound: Sequence[int], tubes: Iterable[int] | None = None) -> list[Indec]:
        if not self.affine:
            return []
        mus = list(tubes) if tubes is not None else [t.mu for t in self.tubes] + [self.homogeneous_id]
        out = []
        for mu in mus:
            p = self.period(mu)
            for s in range(1, p + 1):
                l = 1
                while True:
                    x = self.R(mu, s, l)
                    if not leq_vec(x.dim, bound):
                        break
                    out.append(x)
                    l += 1
        return out

    def roots_up_to(self, bound: Sequence[int]) -> list[Indec]:
        """All indecomposables with dim <= bound (one homogeneous representative)."""
        bound = tuple(bound)
        out = self.preprojectives_up_to(bound) + self.regulars_up_to(bound) + self.preinjectives_up_to(bound)
        return sorted(set(out))

    # --- AR components -----------------------------------------------------
    def _exists(self, kind: str, i: int, k: int) -> bool:
        if k < 0:
            return False
        table = self._pp if kind == "P" else self._pi
        return self._orbit_dim(table, i, k, -1 if kind == "P" else 1) is not None

    def ar_successors(self, x: Indec) -> list[Indec]:
        """Targets of the arrows starting at x in its AR component."""
        q = self.quiver
        out = set()
        if x.kind == "P":
            i, k = x.a, x.b
            for s, t in q.arrows:
                if t == i and self._exists("P", s, k):
                    out.add(("P", s, k))
                if s == i and self._exists("P", t, k + 1):
                    out.add(("P", t, k + 1))
        elif x.kind == "I":
            i, k = x.a, x.b
            for s, t in q.arrows:
                if t == i and self._exists("I", s, k):
                    out.add(("I", s, k))
                if s == i and k >= 1:
                    out.add(("I", t, k - 1))
        else:
            raise CatalogError("regular modules are not in a preprojective or preinjective component")
        return [self.P(i, k) if kind == "P" else self.I(i, k) for kind, i, k in sorted(out)]

    def ar_predecessors(self, x: Indec) -> list[Indec]:
        """Sources of the arrows ending at x in its AR component."""
        q = self.quiver
        out = set()
        if x.kind == "R":
            raise CatalogError("regular modules are not in a preprojective or preinjective component")
        j, k = x.a, x.b
        for s, t in q.arrows:
            if s == j and self._exists(x.kind, t, k):
                out.add((t, k))
            if t == j:
                kk = k - 1 if x.kind == "P" else k + 1
                if self._exists(x.kind, s, kk):
                    out.add((s, kk))
        make = self.P if x.kind == "P" else self.I
        return [make(i, kk) for i, kk in sorted(out)]

    def ball(self, x: Indec, radius: int, forward: bool = True) -> dict[Indec, int]:
        """Modules reachable from x (or reaching x) by AR paths of length <= radius."""
        step = self.ar_successors if forward else self.ar_predecessors
        dist = {x: 0}
        queue = deque([x])
        while queue:
            v = queue.popleft()
            if dist[v] == radius:
                continue
            for w in step(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def path_distance(self, x: Indec, y: Indec) -> float:
        """Length of a shortest path x -> y in the AR quiver, or -inf."""
        if x.kind == "R" or y.kind == "R":
            raise CatalogError("path distance is only defined on preprojective/preinjective components")
        if x.kind != y.kind:
            raise CatalogError("arguments lie in different components")
        if x == y:
            return 0
        if x.kind == "P" and y.b < x.b:
            return MINUS_INFINITY
        if x.kind == "I" and y.b > x.b:
            return MINUS_INFINITY
        lo, hi = sorted((x.b, y.b))
        dist = {x: 0}
        queue = deque([x])
        while queue:
            v = queue.popleft()
            for w in self.ar_successors(v):
                if not lo <= w.b <= hi or w in dist:
                    continue
                dist[w] = dist[v] + 1
                if w == y:
                    return dist[w]
                queue.append(w)
        return MINUS_INFINITY

    def precedes(self, x: Indec, y: Indec) -> bool:
        """x is a predecessor of y: a chain of non-zero maps x -> ... -> y exists."""
        if x == y:
            return True
        kx, ky = KIND_ORDER[x.kind], KIND_ORDER[y.kind]
        if kx != ky:
            return kx < ky
        if x.kind == "R":
            return x.a == y.a
        return self.path_distance(x, y) != MINUS_INFINITY

    # --- module sums -------------------------------------------------------
    def msum(self, items: Iterable[Indec | tuple[Indec, int]] = ()) -> ModuleSum:
        counts: dict[Indec, int] = {}
        for it in items:
            x, m = (it, 1) if isinstance(it, Indec) else it
            if m < 0:
                raise CatalogError("negative multiplicity")
            if m:
                counts[x] = counts.get(x, 0) + m
        ordered = tuple(sorted(counts.items(), key=lambda xm: xm[0].sort_key))
        d = (0,) * self.n
        for x, m in ordered:
            d = add(d, scale(m, x.dim))
        return ModuleSum(ordered, d)

    def canonical(self, ms: ModuleSum, keep: Iterable[int] = ()) -> ModuleSum:
        """Renumber the homogeneous tubes of ms that are not in ``keep``.

        Tubes listed in ``keep`` are left alone; the others become fresh ids
        above all kept ones, ordered by their content.  Two sums that differ
        only in the choice of fresh homogeneous tubes become equal.
        """
        keep = set(keep)
        groups: dict[int, list[tuple[int, int]]] = {}
        for x, m in ms:
            if x.kind == "R" and x.a > self.t and x.a not in keep:
                groups.setdefault(x.a, []).append((x.l, m))
        if not groups:
            return ms
        base = max(keep | {self.t}) + 1
        order = sorted(groups, key=lambda mu: (sorted(groups[mu]), mu))
        relabel = {mu: base + j for j, mu in enumerate(order)}
        items = []
        for x, m in ms:
            if x.kind == "R" and x.a in relabel:
                x = self.R(relabel[x.a], 1, x.l)
            items.append((x, m))
        return self.msum(items)

    def homogeneous_ids(self, ms: ModuleSum) -> set[int]:
        return {x.a for x, _ in ms if x.kind == "R" and x.a > self.t}

    def join(self, *parts: ModuleSum | Indec) -> ModuleSum:
        """Direct sum (tube ids are taken literally)."""
        items = []
        for part in parts:
            items += list(part) if isinstance(part, ModuleSum) else [(part, 1)]
        return self.msum(items)

    def remove(self, ms: ModuleSum, sub_items: Iterable[tuple[Indec, int]]) -> ModuleSum:
        counts = dict(ms.items)
        for x, m in sub_items:
            if counts.get(x, 0) < m:
                raise CatalogError(f"{x} does not occur {m} times")
            counts[x] -= m
        return self.msum(counts.items())

    # --- text parsing ------------------------------------------------------
    _TOKEN = re.compile(
        r"""^\s*(?:
            (?P<pk>P)\((?P<pi>\d+)\)(?:\^-(?P<ps>\d+))? |
            (?P<ik>I)\((?P<ii>\d+)\)(?:\^\+?(?P<is>\d+))? |
            tau\^\{?(?P<ts>-?\d+)\}?\s*(?P<tk>[PI])\((?P<ti>\d+)\) |
            E(?P<mu>\d+)_\{?(?P<s>\d+)\}?\((?P<l>\d+)\) |
            E(?P<mu2>\d+):(?P<s2>\d+):(?P<l2>\d+)
        )\s*(?:\*\s*(?P<mult>\d+))?\s*$""",
        re.X,
    )

    def parse_indec(self, text: str) -> tuple[Indec, int]:
        m = self._TOKEN.match(text)
        if not m:
            raise CatalogError(f"cannot parse module {text!r}")
        g = m.groupdict()
        mult = int(g["mult"] or 1)
        if g["pk"]:
            return self.P(int(g["pi"]), int(g["ps"] or 0)), mult
        if g["ik"]:
            return self.I(int(g["ii"]), int(g["is"] or 0)), mult
        if g["tk"]:
            k = int(g["ts"])
            if g["tk"] == "P":
                if k > 0:
                    raise CatalogError("tau^k P(i) with k > 0 is not a preprojective shift")
                return self.P(int(g["ti"]), -k), mult
            if k < 0:
                raise CatalogError("tau^-k I(i) is not a preinjective shift")
            return self.I(int(g["ti"]), k), mult
        if g["mu"]:
            return self.R(int(g["mu"]), int(g["s"]), int(g["l"])), mult
        return self.R(int(g["mu2"]), int(g["s2"]), int(g["l2"])), mult

    def parse(self, text: str) -> ModuleSum:
        text = text.strip()
        if text in ("", "0"):
            return self.msum()
        return self.msum(self.parse_indec(tok) for tok in _split_sum(text))


def _split_sum(text: str) -> list[str]:
    """Split on '+' signs that separate summands (not the '^+k' of a shift)."""
    parts, cur = [], ""
    for i, ch in enumerate(text):
        if ch == "+" and not cur.rstrip().endswith("^"):
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def catalog_for(quiver: Quiver) -> Catalog:
    return Catalog(quiver)
