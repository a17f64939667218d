"""The degeneration order M <= N  ([M, X] <= [N, X] for all X), its finite
tests, deformation enumeration, minimality and codimension.

Finite test for arbitrary pairs of equal dimension (tame, extended Dynkin).
Write g(X) = [N, X] - [M, X].

* X = tau^-k P(i) with k beyond every preprojective shift K_P of M and N:
  g(X) = <dim N_P - dim M_P, dim X> and one Coxeter period changes it by
  eps * d(X) * (d(N_P) - d(M_P)) with d(X) < 0.  So d(N_P) <= d(M_P) is
  necessary, and then shifts up to K_P + p suffice.
* dually X = tau^k I(i): d(M_I) <= d(N_I) and shifts up to K_I + p.
* X = E_s(L) in a tube mu: once L >= (longest summand in mu) + p_mu the tube
  part is constant and the preprojective part drifts by d(M_P) - d(N_P) >= 0
  per period; lengths up to L_mu + 2 p_mu suffice.  Untouched homogeneous
  tubes are covered by the drift condition.

``window_scale`` multiplies all the windows (used for cross-checks).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import networkx as nx
import numpy as np
import sympy

from .catalog import Catalog, CatalogError, Indec, ModuleSum
from .hom import HomTable
from .quiver import Vector, add, leq_vec, sub


class OrderError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Window:
    """Test modules: tau^-k P(i) for k <= kp, tau^k I(i) for k <= ki, and
    the tube modules of length <= top for each (mu, top) in tubes."""

    kp: int
    ki: int
    tubes: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DegenPair:
    lower: ModuleSum
    upper: ModuleSum
    codim: int


@dataclass
class DeformationPoset:
    target: ModuleSum
    elements: list[ModuleSum]
    codims: list[int]
    covers: list[tuple[int, int]]  # (i, j): elements[i] < elements[j] is a cover
    bold: set[int] = field(default_factory=set)

    def index(self, m: ModuleSum) -> int:
        return self.elements.index(m)

    @property
    def maximum(self) -> int:
        return self.elements.index(self.target)


def tube_decompositions(
    counts: Sequence[int],
    top_bound: Sequence[int] | None = None,
    max_summands: int | None = None,
) -> Iterator[list[tuple[int, int]]]:
    """Multisets of tube modules (socle s, length l) with the given regular
    composition counts (counts[i] = multiplicity of E_{i+1}).

    ``top_bound[i]`` caps the number of summands with regular top E_{i+1}.
    """
    p = len(counts)
    total = sum(counts)
    cands = []
    for s in range(1, p + 1):
        for l in range(1, total + 1):
            f = [0] * p
            for j in range(l):
                f[(s - 1 + j) % p] += 1
            if all(a <= b for a, b in zip(f, counts)):
                cands.append((s, l, tuple(f), (s + l - 2) % p))
    tops = list(top_bound) if top_bound is not None else [total] * p
    rem = list(counts)
    chosen: list[tuple[int, int]] = []

    def rec(start: int, left: int):
        if left == 0:
            yield list(chosen)
            return
        if max_summands is not None and len(chosen) >= max_summands:
            return
        for idx in range(start, len(cands)):
            s, l, f, top = cands[idx]
            if tops[top] == 0 or any(a > b for a, b in zip(f, rem)):
                continue
            for j in range(p):
                rem[j] -= f[j]
            tops[top] -= 1
            chosen.append((s, l))
            yield from rec(idx, left - l)
            chosen.pop()
            tops[top] += 1
            for j in range(p):
                rem[j] += f[j]

    yield from rec(0, total)


class DegenOrder:
    """Degeneration order on the modules of one catalog."""

    def __init__(self, catalog: Catalog, homs: HomTable | None = None):
        self.catalog = catalog
        self.homs = homs or HomTable(catalog)
        self.tube_mode = catalog.quiver is None
        self._arrays: dict = {}
        self._profiles: dict = {}
        if not self.tube_mode:
            self._euler = np.array(catalog.quiver.euler_matrix, dtype=np.int64)

    # --- basic quantities ----------------------------------------------------
    def hom(self, m, n) -> int:
        return self.homs.hom_sum(m, n)

    def defect_part(self, ms: ModuleSum, kind: str) -> int:
        return sum(m * self.catalog.defect(x) for x, m in ms.part(kind))

    @cached_property
    def _dynkin_indecs(self) -> list[Indec]:
        big = (10**9,) * self.catalog.n
        return self.catalog.preprojectives_up_to(big)

    # --- the finite test ------------------------------------------------------
    def window(self, m: ModuleSum, n: ModuleSum, window_scale: int = 1) -> "Window | None":
        """Window of test modules deciding M <= N; None if a drift condition fails."""
        cat = self.catalog
        both = list(m) + list(n)
        if self.tube_mode:
            tubes = []
            for mu in sorted(set(m.tubes) | set(n.tubes)):
                p = cat.period(mu)
                top = max(x.l for x, _ in both if x.a == mu)
                tubes.append((mu, top + 2 * p * window_scale))
            return Window(-1, -1, tuple(tubes))
        if not cat.affine:
            return Window(-1, -1, ())
        if self.defect_part(n, "P") > self.defect_part(m, "P"):
            return None
        if self.defect_part(n, "I") < self.defect_part(m, "I"):
            return None
        p = cat.quiver.coxeter_period
        kp = max((x.b for x, _ in both if x.kind == "P"), default=0)
        ki = max((x.b for x, _ in both if x.kind == "I"), default=0)
        mus = [t.mu for t in cat.tubes] + sorted(cat.homogeneous_ids(m) | cat.homogeneous_ids(n))
        tubes = []
        for mu in mus:
            pm = cat.period(mu)
            top = max((x.l for x, _ in both if x.kind == "R" and x.a == mu), default=0)
            tubes.append((mu, top + 2 * pm * window_scale))
        return Window(kp + p * window_scale, ki + p * window_scale, tuple(tubes))

    def test_set(self, m: ModuleSum, n: ModuleSum, window_scale: int = 1) -> list[Indec] | None:
        """Test modules X deciding M <= N, or None if a drift condition fails."""
        w = self.window(m, n, window_scale)
        return None if w is None else self._window_modules(w)

    def _window_modules(self, w: "Window") -> list[Indec]:
        cat = self.catalog
        if not cat.affine and not self.tube_mode:
            return self._dynkin_indecs
        out = []
        if not self.tube_mode:
            for i in cat.quiver.vertices:
                out += [cat.P(i, k) for k in range(w.kp + 1)]
            for i in cat.quiver.vertices:
                out += [cat.I(i, k) for k in range(w.ki + 1)]
        for mu, top in w.tubes:
            for s in range(1, cat.period(mu) + 1):
                out += [cat.R(mu, s, l) for l in range(1, top + 1)]
        return out

    def _orbit_array(self, kind: str, top: int) -> np.ndarray:
        """dims of tau^-k P(i) (or tau^k I(i)) as an array [i - 1, k, :] for k <= top."""
        cache = self._arrays.setdefault(kind, None)
        if cache is None or cache.shape[1] <= top:
            size = max(top + 1, 2 * (cache.shape[1] if cache is not None else 16))
            cat = self.catalog
            make = cat.P if kind == "P" else cat.I
            cache = np.array(
                [[make(i, k).dim for k in range(size)] for i in cat.quiver.vertices], dtype=np.int64
            )
            self._arrays[kind] = cache
        return cache

    def _tube_array(self, mu: int, top: int) -> np.ndarray:
        key = ("R", mu, top)
        arr = self._arrays.get(key)
        if arr is None:
            cat = self.catalog
            arr = np.array(
                [cat.R(mu, s, l).dim for s in range(1, cat.period(mu) + 1) for l in range(1, top + 1)],
                dtype=np.int64,
            )
            self._arrays[key] = arr
        return arr

    def profile(self, ms: ModuleSum, w: "Window") -> np.ndarray:
        """The vector ([M, X])_X over the test modules of the window."""
        key = (ms, w)
        hit = self._profiles.get(key)
        if hit is not None:
            return hit
        cat = self.catalog
        if self.tube_mode or not cat.affine:
            h = self.homs.hom
            vals = [sum(c * h(y, x) for y, c in ms.items) for x in self._window_modules(w)]
            out = np.array(vals, dtype=np.int64)
        else:
            out = self._affine_profile(ms, w)
        if len(self._profiles) > 200000:
            self._profiles.clear()
        self._profiles[key] = out
        return out

    def _affine_profile(self, ms: ModuleSum, w: "Window") -> np.ndarray:
        cat = self.catalog
        n = cat.n
        e = self._euler
        pd = self._orbit_array("P", w.kp)
        idim = self._orbit_array("I", w.ki)
        prof_p = np.zeros((n, w.kp + 1), dtype=np.int64)
        prof_i = np.zeros((n, w.ki + 1), dtype=np.int64)
        lin_pr = np.zeros(n, dtype=np.int64)  # sum of c * dim(y)^T E over P and R summands
        lin_p = np.zeros(n, dtype=np.int64)
        for y, c in ms.items:
            if y.kind == "P":
                row = c * (np.array(y.dim, dtype=np.int64) @ e)
                lin_p += row
                lin_pr += row
                j, k = y.a - 1, y.b
                if k <= w.kp:
                    prof_p[:, k:] += c * pd[:, : w.kp + 1 - k, j]
            elif y.kind == "R":
                lin_pr += c * (np.array(y.dim, dtype=np.int64) @ e)
            else:
                j, k = y.a - 1, y.b
                top = min(k, w.ki)
                ms_ = np.arange(top + 1)
                prof_i[:, : top + 1] += c * idim[j, k - ms_, :].T
        prof_i += idim[:, : w.ki + 1, :] @ lin_pr
        parts = [prof_p.ravel(), prof_i.ravel()]
        h = self.homs.hom
        for mu, top in w.tubes:
            block = self._tube_array(mu, top) @ lin_p
            regs = [(y, c) for y, c in ms.items if y.kind == "R" and y.a == mu]
            if regs:
                idx = 0
                for s in range(1, cat.period(mu) + 1):
                    for l in range(1, top + 1):
                        x = cat.R(mu, s, l)
                        block[idx] += sum(c * h(y, x) for y, c in regs)
                        idx += 1
            parts.append(block)
        return np.concatenate(parts)

    def leq(self, m: ModuleSum, n: ModuleSum, window_scale: int = 1) -> bool:
        if m.dim != n.dim:
            raise OrderError(f"dimension vectors differ: {m.dim} vs {n.dim}")
        if m == n:
            return True
        w = self.window(m, n, window_scale)
        if w is None:
            return False
        return bool((self.profile(m, w) <= self.profile(n, w)).all())

    def lt(self, m: ModuleSum, n: ModuleSum) -> bool:
        return m != n and self.leq(m, n)

    def codim(self, n: ModuleSum, m: ModuleSum, check: bool = True) -> int:
        if check and not self.lt(m, n):
            raise OrderError(f"{m} is not a proper deformation of {n}")
        return self.hom(n, n) - self.hom(m, m)

    # --- the test for targets U + V --------------------------------------------
    def degeneration_test_UV(self, m: ModuleSum, u: Indec, v: Indec, window_scale: int = 1) -> bool:
        """Conditions (i)-(iii) of the windowed test for U preprojective, V preinjective."""
        cat = self.catalog
        if not (cat.affine and u.kind == "P" and v.kind == "I"):
            raise OrderError("the test needs U preprojective and V preinjective")
        if m.dim != add(u.dim, v.dim):
            raise OrderError("dimension vectors differ")
        q = cat.quiver
        radius = 2 * (q.coxeter_period + q.diameter) * window_scale
        h = self.homs.hom
        if m == cat.msum([u, v]):
            return True
        mp, mi = m.part("P"), m.part("I")
        # (iii)
        d = cat.defect(v) - self.defect_part(m, "I")
        if d <= 0:
            return False
        simples = cat.all_regular_simples()
        simples += [cat.simple(mu, 1) for mu in sorted(cat.homogeneous_ids(m))]
        fresh = max([cat.t] + sorted(cat.homogeneous_ids(m))) + 1
        simples.append(cat.simple(fresh, 1))
        for e in simples:
            if h(u, e) < sum(c * h(y, e) for y, c in m):
                return False
        # (i)
        seen: set[Indec] = set()
        for x, _ in mp:
            for t in cat.ball(x, radius, forward=True):
                if t in seen:
                    continue
                seen.add(t)
                if h(u, t) < sum(c * h(y, t) for y, c in mp):
                    return False
        # (ii)
        seen = set()
        for x, _ in mi:
            for t in cat.ball(x, radius, forward=False):
                if t in seen:
                    continue
                seen.add(t)
                if h(t, v) < sum(c * h(t, y) for y, c in mi):
                    return False
        return True

    def regular_degeneration_test(self, m: ModuleSum, u: Indec, v: Indec) -> bool:
        """One-tube test: equal dimensions and [U, E] >= [M, E] for the simples E of the tube."""
        mus = {x.a for x, _ in m if x.kind == "R"}
        if len(mus) != 1 or any(x.kind != "R" for x, _ in m):
            raise OrderError("M must lie in a single tube")
        if m.dim != add(u.dim, v.dim):
            return False
        mu = mus.pop()
        h = self.homs.hom
        return all(h(u, e) >= sum(c * h(y, e) for y, c in m) for e in self.catalog.simples(mu))

    # --- enumeration ------------------------------------------------------------
    def composition_counts(self, dim: Vector, mu: int) -> tuple[int, ...] | None:
        """Regular composition counts of a module in tube mu with dimension dim."""
        cat = self.catalog
        tube = cat.tube(mu)
        if self.tube_mode:
            return tuple(dim)
        cols = sympy.Matrix([list(s) for s in tube.simples]).T
        try:
            sol, params = cols.gauss_jordan_solve(sympy.Matrix(dim))
        except ValueError:
            return None
        if params.shape[0] or any(not (c.is_integer and c >= 0) for c in sol):
            return None
        return tuple(int(c) for c in sol)

    def tube_candidates(
        self,
        dim: Vector,
        mu: int,
        top_bound: Sequence[int] | None = None,
        max_summands: int | None = None,
    ) -> list[ModuleSum]:
        """All modules of the tube mu with dimension vector dim."""
        counts = self.composition_counts(dim, mu)
        if counts is None:
            return []
        cat = self.catalog
        out = []
        for dec in tube_decompositions(counts, top_bound, max_summands):
            out.append(cat.msum(cat.R(mu, s, l) for s, l in dec))
        return sorted(out, key=_sum_key)

    def _fresh_ids(self, *sums: ModuleSum, count: int) -> list[int]:
        cat = self.catalog
        used = set()
        for s in sums:
            used |= cat.homogeneous_ids(s)
        start = max(used | {cat.t}) + 1
        return list(range(start, start + count))

    def summand_pool(self, n: ModuleSum, extra: Iterable[ModuleSum] = (), fresh: int | None = None) -> list[Indec]:
        """Indecomposables Y that can be summands of some L <= N.

        They satisfy dim Y <= dim N, [Y, N] >= 1 and [N, Y] >= 1.  Homogeneous
        modules are offered in the tubes used by N (and ``extra``) and in
        ``fresh`` new tubes.
        """
        cat = self.catalog
        dim = n.dim
        if self.tube_mode:
            cands = cat.regulars_up_to(dim, n.tubes)
        else:
            cands = cat.preprojectives_up_to(dim) + cat.preinjectives_up_to(dim)
            if cat.affine:
                cands += cat.regulars_up_to(dim, [t.mu for t in cat.tubes])
                ids = set(cat.homogeneous_ids(n))
                for e in extra:
                    ids |= cat.homogeneous_ids(e)
                mult = min(a // b for a, b in zip(dim, cat.delta))
                k = mult if fresh is None else fresh
                ids |= set(self._fresh_ids(n, *extra, count=k))
                for mu in sorted(ids):
                    cands += [cat.R(mu, 1, l) for l in range(1, mult + 1)]
        h = self.homs.hom
        out = []
        for y in cands:
            if sum(c * h(y, z) for z, c in n) >= 1 and sum(c * h(z, y) for z, c in n) >= 1:
                out.append(y)
        return out

    def deformations(
        self,
        n: ModuleSum,
        tube: int | None = None,
        cap: int | None = None,
        predicate: Callable[[ModuleSum], bool] | None = None,
    ) -> list[ModuleSum]:
        """All M with dim M = dim N and M <= N (N included), canonically labelled.

        ``tube`` restricts to modules of one tube.  ``cap`` bounds the number
        of candidates examined.
        """
        cat = self.catalog
        if tube is not None:
            # M <= N forces [M, E] <= [N, E] for the simples E, bounding the tops
            tops = [self.homs.hom_sum(n, e) for e in cat.simples(tube)]
            cands = self.tube_candidates(n.dim, tube, top_bound=tops)
            found = [m for m in cands if self.leq(m, n)]
            if n.tubes == [tube] and all(x.kind == "R" for x, _ in n) and n not in found:
                found.append(n)
        else:
            found = []
            keep = cat.homogeneous_ids(n)
            seen = set()
            for m in self._knapsack(n, cap):
                m = cat.canonical(m, keep)
                if m in seen:
                    continue
                seen.add(m)
                if self.leq(m, n):
                    found.append(m)
        if predicate is not None:
            found = [m for m in found if predicate(m) or m == n]
        return sorted(found, key=_sum_key)

    def _knapsack(self, n: ModuleSum, cap: int | None) -> Iterator[ModuleSum]:
        """Multisets of pool modules with dimension dim N that respect
        [X, M] <= [X, N] and [M, X] <= [N, X] for all pool modules X."""
        cat = self.catalog
        pool = self.summand_pool(n)
        pool.sort(key=lambda y: (-sum(y.dim), y.sort_key))
        h = self.homs.hom
        size = len(pool)
        if not size:
            return
        left = np.array([[h(x, y) for x in pool] for y in pool], dtype=np.int64)  # [X, Y]
        right = np.array([[h(y, x) for x in pool] for y in pool], dtype=np.int64)  # [Y, X]
        coef = np.concatenate([left, right], axis=1)
        bound = np.array(
            [sum(c * h(x, z) for z, c in n) for x in pool] + [sum(c * h(z, x) for z, c in n) for x in pool],
            dtype=np.int64,
        )
        dims = np.array([y.dim for y in pool], dtype=np.int64)
        target = np.array(n.dim, dtype=np.int64)
        chosen: list[int] = []
        budget = [cap]

        def rec(start: int, rem: np.ndarray, slack: np.ndarray):
            if not rem.any():
                if budget[0] is not None:
                    budget[0] -= 1
                    if budget[0] < 0:
                        raise CapExceeded(f"more than {cap} candidate decompositions")
                yield cat.msum(pool[i] for i in chosen)
                return
            for j in range(start, size):
                r2 = rem - dims[j]
                if (r2 < 0).any():
                    continue
                s2 = slack - coef[j]
                if (s2 < 0).any():
                    continue
                chosen.append(j)
                yield from rec(j, r2, s2)
                chosen.pop()

        yield from rec(0, target, bound)

    # --- minimality --------------------------------------------------------------
    def is_minimal(self, m: ModuleSum, n: ModuleSum, assume_leq: bool = False) -> bool:
        """True iff M < N and there is no L with M < L < N.

        A witness L may be taken of the form (M minus M') + A + B with
        M' < A + B for indecomposable A, B (any minimal degeneration of M has
        this shape up to common summands), so only such L are searched.
        """
        if m == n or (not assume_leq and not self.leq(m, n)):
            return False
        # codim drops strictly along M < L < N
        if self.hom(n, n) - self.hom(m, m) == 1:
            return True
        return self.upper_witness(m, n) is None

    def upper_witness(self, m: ModuleSum, n: ModuleSum) -> ModuleSum | None:
        cat = self.catalog
        pool = self.summand_pool(n, extra=[m], fresh=2)
        by_dim: dict[Vector, list[Indec]] = {}
        for y in pool:
            by_dim.setdefault(y.dim, []).append(y)
        items = m.summands
        subs = set()
        for r in range(1, len(items) + 1):
            for idx in combinations(range(len(items)), r):
                subs.add(tuple(items[i] for i in idx))
        for sub_items in sorted(subs, key=lambda s: (len(s), [x.sort_key for x in s])):
            mprime = cat.msum(sub_items)
            rest = cat.remove(m, mprime.items)
            for a in pool:
                if not leq_vec(a.dim, mprime.dim):
                    continue
                for b in by_dim.get(sub(mprime.dim, a.dim), ()):
                    if b < a:
                        continue
                    ab = cat.msum([a, b])
                    if ab == mprime:
                        continue
                    big = cat.join(rest, ab)
                    if big == n:
                        continue
                    if self.leq(mprime, ab) and self.leq(big, n):
                        return big
        return None

    def minimal_degenerations(self, n: ModuleSum, tube: int | None = None, cap: int | None = None) -> list[DegenPair]:
        out = []
        for m in self.deformations(n, tube=tube, cap=cap):
            if m != n and self.is_minimal(m, n, assume_leq=True):
                out.append(DegenPair(m, n, self.codim(n, m, check=False)))
        return out

    # --- posets -----------------------------------------------------------------
    def poset(self, n: ModuleSum, elements: list[ModuleSum] | None = None, tube: int | None = None) -> DeformationPoset:
        """Deformation poset of N with cover edges (transitive reduction)."""
        elems = elements if elements is not None else self.deformations(n, tube=tube)
        if n not in elems:
            elems = elems + [n]
        elems = sorted(elems, key=_sum_key)
        g = nx.DiGraph()
        g.add_nodes_from(range(len(elems)))
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                if i != j and self.leq(a, b):
                    g.add_edge(i, j)
        for i, j in g.edges:
            if g.has_edge(j, i):
                raise OrderError(f"antisymmetry fails for {elems[i]} and {elems[j]}")
        red = nx.transitive_reduction(g)
        covers = sorted(red.edges)
        codims = [self.hom(n, n) - self.hom(e, e) for e in elems]
        return DeformationPoset(n, elems, codims, covers)

    def deformation_poset(self, u: Indec, v: Indec, tube: int | None = None) -> DeformationPoset:
        return self.poset(self.catalog.msum([u, v]), tube=tube)


def _sum_key(ms: ModuleSum) -> tuple:
    return tuple(x.sort_key + (m,) for x, m in ms.items)
