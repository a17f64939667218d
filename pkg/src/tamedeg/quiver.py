"""Quivers of Dynkin and extended Dynkin type and their integer invariants.

Conventions.  Vertices are numbered 1..n and dimension vectors are tuples of
length n (entry v-1 belongs to vertex v).  The Euler form is

    <x, y> = sum_i x_i y_i - sum_{arrows s->t} x_s y_t,

i.e. E = I - A with A[s][t] the number of arrows s->t.  The Coxeter map c acts
on dimension vectors with c(dim X) = dim tau X for non-projective X; it is
c = -E^{-1} E^T, which is integral because E is unitriangular up to a
reordering of the vertices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import sympy

Vector = tuple[int, ...]

PERIOD_CAP = 100


class QuiverError(ValueError):
    pass


def _matmul(m: Sequence[Sequence[int]], x: Sequence[int]) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in m)


def add(x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def scale(k: int, x: Sequence[int]) -> Vector:
    return tuple(k * a for a in x)


def leq_vec(x: Sequence[int], y: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(x, y))


def is_positive(x: Sequence[int]) -> bool:
    return all(a >= 0 for a in x) and any(a > 0 for a in x)


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[tuple[int, int], ...]
    label: str = ""
    kind: str = field(init=False, default="")

    def __post_init__(self):
        n = self.vertex_count
        if n < 1:
            raise QuiverError("a quiver needs at least one vertex")
        arrows = tuple((int(s), int(t)) for s, t in self.arrows)
        for s, t in arrows:
            if not (1 <= s <= n and 1 <= t <= n):
                raise QuiverError(f"arrow {s}->{t} uses an unknown vertex")
            if s == t:
                raise QuiverError("loops are not allowed")
        object.__setattr__(self, "arrows", arrows)
        if not self._connected():
            raise QuiverError("underlying graph is not connected")
        if self._has_oriented_cycle():
            raise QuiverError("oriented cycles are not allowed")
        kind = self._classify_form()
        object.__setattr__(self, "kind", kind)
        if not self.label:
            object.__setattr__(self, "label", _diagram_name(self))

    # --- graph helpers -------------------------------------------------
    def _neighbours(self) -> dict[int, set[int]]:
        nb: dict[int, set[int]] = {v: set() for v in range(1, self.vertex_count + 1)}
        for s, t in self.arrows:
            nb[s].add(t)
            nb[t].add(s)
        return nb

    def _connected(self) -> bool:
        nb = self._neighbours()
        seen, stack = {1}, [1]
        while stack:
            v = stack.pop()
            for w in nb[v] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self.vertex_count

    def _has_oriented_cycle(self) -> bool:
        try:
            self.topological_order
        except QuiverError:
            return True
        return False

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        indeg = {v: 0 for v in range(1, self.vertex_count + 1)}
        for _, t in self.arrows:
            indeg[t] += 1
        ready = sorted(v for v, d in indeg.items() if d == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
        if len(order) != self.vertex_count:
            raise QuiverError("oriented cycle")
        return tuple(order)

    def _classify_form(self) -> str:
        sym = sympy.Matrix(self.symmetrized_form)
        if sym.is_positive_definite:
            return "Dynkin"
        if sym.is_positive_semidefinite and len(sym.nullspace()) == 1:
            return "ExtendedDynkin"
        raise QuiverError("quiver is neither Dynkin nor extended Dynkin (wild quivers are not supported)")

    # --- basic data ----------------------------------------------------
    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    @cached_property
    def arrow_counts(self) -> tuple[tuple[int, ...], ...]:
        a = [[0] * self.n for _ in range(self.n)]
        for s, t in self.arrows:
            a[s - 1][t - 1] += 1
        return tuple(tuple(r) for r in a)

    @cached_property
    def euler_matrix(self) -> tuple[tuple[int, ...], ...]:
        a = self.arrow_counts
        return tuple(tuple((i == j) - a[i][j] for j in range(self.n)) for i in range(self.n))

    @cached_property
    def symmetrized_form(self) -> tuple[tuple[int, ...], ...]:
        e = self.euler_matrix
        return tuple(tuple(e[i][j] + e[j][i] for j in range(self.n)) for i in range(self.n))

    @cached_property
    def sinks(self) -> tuple[int, ...]:
        sources = {s for s, _ in self.arrows}
        return tuple(v for v in self.vertices if v not in sources)

    @property
    def one_sink(self) -> bool:
        return len(self.sinks) == 1

    @property
    def sink(self) -> int:
        if not self.one_sink:
            raise QuiverError("quiver is not in one-sink orientation")
        return self.sinks[0]

    def _check(self, x: Sequence[int]) -> None:
        if len(x) != self.n:
            raise QuiverError(f"vector of length {len(x)} for a quiver with {self.n} vertices")

    # --- forms -----------------------------------------------------------
    def euler_form(self, x: Sequence[int], y: Sequence[int]) -> int:
        self._check(x)
        self._check(y)
        val = sum(a * b for a, b in zip(x, y))
        for s, t in self.arrows:
            val -= x[s - 1] * y[t - 1]
        return val

    def tits_form(self, x: Sequence[int]) -> int:
        return self.euler_form(x, x)

    def unit(self, v: int) -> Vector:
        return tuple(int(i == v) for i in self.vertices)

    # --- projectives and injectives by path counting ---------------------
    @cached_property
    def path_counts(self) -> tuple[tuple[int, ...], ...]:
        """paths[i][j] = number of paths from vertex i+1 to vertex j+1."""
        n = self.n
        paths = [[int(i == j) for j in range(n)] for i in range(n)]
        for v in reversed(self.topological_order):
            for s, t in self.arrows:
                if s == v:
                    for j in range(n):
                        paths[v - 1][j] += paths[t - 1][j]
        return tuple(tuple(r) for r in paths)

    def dim_projective(self, i: int) -> Vector:
        return self.path_counts[i - 1]

    def dim_injective(self, i: int) -> Vector:
        return tuple(self.path_counts[j][i - 1] for j in range(self.n))

    # --- Coxeter data ----------------------------------------------------
    @cached_property
    def coxeter(self) -> tuple[tuple[int, ...], ...]:
        e = sympy.Matrix(self.euler_matrix)
        c = -e.inv() * e.T
        if any(not entry.is_integer for entry in c):
            raise QuiverError("non-integral Coxeter matrix")
        cm = tuple(tuple(int(c[i, j]) for j in range(self.n)) for i in range(self.n))
        for i in self.vertices:
            if _matmul(cm, self.dim_projective(i)) != scale(-1, self.dim_injective(i)):
                raise QuiverError("Coxeter matrix fails c(P(i)) = -I(i)")
        return cm

    @cached_property
    def coxeter_inverse(self) -> tuple[tuple[int, ...], ...]:
        c = sympy.Matrix(self.coxeter).inv()
        return tuple(tuple(int(c[i, j]) for j in range(self.n)) for i in range(self.n))

    def c(self, x: Sequence[int], k: int = 1) -> Vector:
        """Apply c^k (k may be negative)."""
        m = self.coxeter if k >= 0 else self.coxeter_inverse
        x = tuple(x)
        for _ in range(abs(k)):
            x = _matmul(m, x)
        return x

    # --- extended Dynkin data --------------------------------------------
    @cached_property
    def delta(self) -> Vector:
        if self.kind != "ExtendedDynkin":
            raise QuiverError("null root only exists for extended Dynkin quivers")
        (v,) = sympy.Matrix(self.symmetrized_form).nullspace()
        den = math.lcm(*(sympy.fraction(a)[1] for a in v))
        ints = [int(a * den) for a in v]
        g = math.gcd(*ints)
        ints = [a // g for a in ints]
        if ints[0] < 0:
            ints = [-a for a in ints]
        if min(ints) <= 0:
            raise QuiverError("radical of the Tits form is not spanned by a positive vector")
        return tuple(ints)

    def defect(self, x: Sequence[int]) -> int:
        return self.euler_form(self.delta, x)

    @cached_property
    def coxeter_period(self) -> int:
        """p(Q): order of c modulo delta (extended Dynkin) or order of c (Dynkin)."""
        basis = [self.unit(v) for v in self.vertices]
        images = list(basis)
        for p in range(1, PERIOD_CAP + 1):
            images = [self.c(x) for x in images]
            if self.kind == "Dynkin":
                if images == basis:
                    return p
            elif all(_multiple_of(sub(y, x), self.delta) is not None for x, y in zip(basis, images)):
                return p
        raise RuntimeError("Coxeter period exceeds the iteration cap")

    @cached_property
    def epsilon(self) -> int:
        if self.kind != "ExtendedDynkin":
            raise QuiverError("epsilon is only defined for extended Dynkin quivers")
        p = self.coxeter_period
        eps = None
        for v in self.vertices:
            x = self.unit(v)
            t = _multiple_of(sub(self.c(x, p), x), self.delta)
            d = self.defect(x)
            if d == 0:
                assert t == 0
                continue
            if t % d:
                raise RuntimeError("c^p(x) - x is not an integral multiple of defect * delta")
            if eps is None:
                eps = t // d
            elif eps != t // d:
                raise RuntimeError("inconsistent epsilon")
        if eps is None or eps <= 0:
            raise RuntimeError("epsilon must be positive")
        return eps

    @cached_property
    def diameter(self) -> int:
        """Number of edges of a longest simple path in the underlying graph."""
        nb = self._neighbours()
        best = 0

        def walk(v, seen, length):
            nonlocal best
            best = max(best, length)
            for w in nb[v]:
                if w not in seen:
                    seen.add(w)
                    walk(w, seen, length + 1)
                    seen.discard(w)

        for v in self.vertices:
            walk(v, {v}, 0)
        return best

    # --- text format -----------------------------------------------------
    def to_text(self) -> str:
        lines = [f"vertices {self.n}"]
        lines += [f"arrow {s} {t}" for s, t in self.arrows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, label: str = "") -> "Quiver":
        n = None
        arrows = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "vertices" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "arrow" and len(parts) == 3:
                arrows.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "label" and len(parts) == 2:
                label = parts[1]
            else:
                raise QuiverError(f"cannot parse line {raw!r}")
        if n is None:
            raise QuiverError("missing 'vertices N' line")
        return cls(n, tuple(arrows), label)


def _multiple_of(x: Sequence[int], d: Sequence[int]) -> int | None:
    """Return t with x = t*d, or None."""
    j = next(i for i, a in enumerate(d) if a != 0)
    if x[j] % d[j]:
        return None
    t = x[j] // d[j]
    return t if tuple(x) == scale(t, d) else None


def _diagram_name(q: Quiver) -> str:
    nb = q._neighbours()
    n = q.n
    edges = len(q.arrows)
    if q.kind == "ExtendedDynkin" and edges == n:
        return f"A~{n - 1}"
    degrees = sorted(len(nb[v]) for v in q.vertices)
    branch = [v for v in q.vertices if len(nb[v]) >= 3]
    if not branch:
        return f"A_{n}" if q.kind == "Dynkin" else "?"
    if len(branch) == 2 or degrees[-1] == 4:
        return f"D~{n - 1}" if q.kind == "ExtendedDynkin" else "?"
    arms = []
    b = branch[0]
    for w in nb[b]:
        length, prev, cur = 1, b, w
        while len(nb[cur]) == 2:
            nxt = next(iter(nb[cur] - {prev}))
            prev, cur = cur, nxt
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D_{n}" if q.kind == "Dynkin" else f"D~{n - 1}"
    if q.kind == "Dynkin":
        return f"E_{n}"
    return f"E~{n - 1}"


# --- built-in diagrams ---------------------------------------------------

def _edges_affine(kind: str) -> tuple[int, list[tuple[int, int]]]:
    kind = kind.upper().replace("~", "")
    if kind == "E6":
        return 7, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7)]
    if kind == "E7":
        return 8, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (4, 8)]
    if kind == "E8":
        return 9, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (3, 9)]
    if kind.startswith("D"):
        m = int(kind[1:])
        if m < 4:
            raise QuiverError("D~m needs m >= 4")
        if m == 4:
            return 5, [(1, 3), (2, 3), (3, 4), (3, 5)]
        edges = [(1, 3), (2, 3)] + [(v, v + 1) for v in range(3, m - 1)]
        edges += [(m - 1, m), (m - 1, m + 1)]
        return m + 1, edges
    raise QuiverError(f"unknown extended Dynkin type {kind!r}")


def _edges_dynkin(kind: str) -> tuple[int, list[tuple[int, int]]]:
    kind = kind.upper().replace("_", "")
    t, m = kind[0], int(kind[1:])
    if t == "A":
        return m, [(v, v + 1) for v in range(1, m)]
    if t == "D" and m >= 4:
        return m, [(1, 3), (2, 3)] + [(v, v + 1) for v in range(3, m)]
    if t == "E" and m in (6, 7, 8):
        return m, [(v, v + 1) for v in range(1, m - 1)] + [(3, m)]
    raise QuiverError(f"unknown Dynkin type {kind!r}")


def orient_towards(n: int, edges: Iterable[tuple[int, int]], sink: int) -> tuple[tuple[int, int], ...]:
    """Orient the edges of a tree so that every arrow points towards ``sink``."""
    if not 1 <= sink <= n:
        raise QuiverError(f"sink {sink} is not a vertex")
    nb: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for a, b in edges:
        nb[a].append(b)
        nb[b].append(a)
    arrows = []
    seen, frontier = {sink}, [sink]
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(nb[v]):
                if w not in seen:
                    seen.add(w)
                    arrows.append((w, v))
                    nxt.append(w)
        frontier = nxt
    return tuple(sorted(arrows))


def extended_dynkin(kind: str, sink: int) -> Quiver:
    """D~m, E~6, E~7 or E~8 in one-sink orientation with the given sink."""
    n, edges = _edges_affine(kind)
    name = kind.upper().replace("~", "")
    return Quiver(n, orient_towards(n, edges, sink), f"{name[0]}~{name[1:]}")


def dynkin(kind: str, sink: int | None = None) -> Quiver:
    """A_n, D_n, E_6..8; one-sink orientation (default sink: last vertex)."""
    n, edges = _edges_dynkin(kind)
    name = kind.upper().replace("_", "")
    return Quiver(n, orient_towards(n, edges, sink or n), f"{name[0]}_{name[1:]}")


def linear_a(n: int, orientation: str | None = None) -> Quiver:
    """A_n with edge v--v+1 oriented v->v+1 for '>' and v+1->v for '<'."""
    orientation = orientation or ">" * (n - 1)
    if len(orientation) != n - 1 or set(orientation) - set("<>"):
        raise QuiverError("orientation must be a string of n-1 characters from '<>'")
    arrows = [(v, v + 1) if o == ">" else (v + 1, v) for v, o in zip(range(1, n), orientation)]
    return Quiver(n, tuple(arrows), f"A_{n}")


def affine_a(m: int, orientation: str | None = None) -> Quiver:
    """A~m on vertices 1..m+1 around a cycle.

    Edge j (1 <= j <= m+1) joins j and j+1 (vertex m+2 meaning 1); it points
    j->j+1 for '>' and backwards for '<'.  The default has paths
    1->2->...->m+1 and 1->m+1, so the unique sink is m+1.
    """
    if m < 1:
        raise QuiverError("A~m needs m >= 1")
    orientation = orientation or ">" * m + "<"
    if len(orientation) != m + 1 or set(orientation) - set("<>"):
        raise QuiverError("orientation must be a string of m+1 characters from '<>'")
    arrows = []
    for j, o in enumerate(orientation, start=1):
        a, b = j, j % (m + 1) + 1
        arrows.append((a, b) if o == ">" else (b, a))
    return Quiver(m + 1, tuple(arrows), f"A~{m}")


def kronecker() -> Quiver:
    return Quiver(2, ((1, 2), (1, 2)), "A~1")


def from_type(name: str, sink: int | None = None, orientation: str | None = None) -> Quiver:
    """Resolve names such as 'E6', 'E~6', 'D8', 'A~3', 'A_3', 'D_5'.

    Plain D/E names mean the extended diagrams; Dynkin D/E need an underscore.
    """
    key = name.upper().replace(" ", "")
    if key.startswith("A~"):
        m = int(key[2:])
        if orientation is None and sink is not None:
            orientation = _affine_a_orientation_for_sink(m, sink)
        return affine_a(m, orientation)
    if key.startswith("A"):
        n = int(key[1:].lstrip("_"))
        if orientation is None and sink is not None:
            return dynkin(f"A{n}", sink)
        return linear_a(n, orientation)
    if "_" in key:
        return dynkin(key, sink)
    if sink is None:
        raise QuiverError("a sink vertex is required for extended Dynkin types")
    return extended_dynkin(key, sink)


def _affine_a_orientation_for_sink(m: int, sink: int) -> str:
    """Orientation with paths from vertex 1 going both ways round to ``sink``."""
    if not 2 <= sink <= m + 1:
        raise QuiverError("sink must differ from the source vertex 1")
    return "".join(">" if j < sink else "<" for j in range(1, m + 2))
