"""Dimensions of Hom and Ext between indecomposables and direct sums.

The rule system (for tame hereditary algebras):

* no maps from preinjectives to preprojectives or regulars, from regulars to
  preprojectives, or between different tubes;
* inside a tube [X, Y] = min(l_{Top X}(Y), l_{Soc Y}(X));
* [P(i), Y] = dim Y_i and [X, I(i)] = dim X_i; two preprojectives (or two
  preinjectives) are shifted by tau until one of them is projective
  (injective);
* in the remaining forward directions P->R, P->I, R->I the Ext term vanishes,
  so [X, Y] is the Euler form.

Ext is [X, Y]^1 = [Y, tau X] (zero for projective X).
"""
from __future__ import annotations

import threading

from .catalog import Catalog, Indec, ModuleSum


def composition_count(catalog: Catalog, simple_index: int, x: Indec) -> int:
    """l_E(X): multiplicity of the regular simple E_{simple_index} in X."""
    tube = catalog.tube(x.a)
    return sum(1 for f in tube.factors(x.b, x.l) if f == simple_index)


class HomTable:
    """Memoised hom/ext for one catalog."""

    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        self.quiver = catalog.quiver
        self._hom: dict[tuple[Indec, Indec], int] = {}
        self._lock = threading.Lock()
        e = self.quiver.euler_matrix if self.quiver is not None else []
        self._rows = [[(j, e[i][j]) for j in range(len(e)) if e[i][j]] for i in range(len(e))]

    def euler(self, x, y) -> int:
        total = 0
        for i, row in enumerate(self._rows):
            xi = x[i]
            if xi:
                total += xi * sum(c * y[j] for j, c in row)
        return total

    def hom(self, x: Indec, y: Indec) -> int:
        key = (x, y)
        val = self._hom.get(key)
        if val is None:
            val = self._compute_hom(x, y)
            with self._lock:
                self._hom[key] = val
        return val

    def _compute_hom(self, x: Indec, y: Indec) -> int:
        cat = self.catalog
        if x.kind == "I":
            if y.kind != "I":
                return 0
            if x.b < y.b:
                return 0
            return cat.I(x.a, x.b - y.b).dim[y.a - 1]
        if x.kind == "R":
            if y.kind == "P":
                return 0
            if y.kind == "R":
                if x.a != y.a:
                    return 0
                tube = cat.tube(x.a)
                top_x = tube.top(x.b, x.l)
                return min(composition_count(cat, top_x, y), composition_count(cat, y.b, x))
            return self.euler(x.dim, y.dim)
        if y.kind == "P":
            if y.b < x.b:
                return 0
            return cat.P(y.a, y.b - x.b).dim[x.a - 1]
        return self.euler(x.dim, y.dim)

    def ext(self, x: Indec, y: Indec) -> int:
        if self.catalog.is_projective(x):
            return 0
        return self.hom(y, self.catalog.tau(x))

    def hom_sum(self, m: ModuleSum | Indec, n: ModuleSum | Indec) -> int:
        m_items = [(m, 1)] if isinstance(m, Indec) else m.items
        n_items = [(n, 1)] if isinstance(n, Indec) else n.items
        return sum(a * b * self.hom(x, y) for x, a in m_items for y, b in n_items)

    def ext_sum(self, m: ModuleSum | Indec, n: ModuleSum | Indec) -> int:
        m_items = [(m, 1)] if isinstance(m, Indec) else m.items
        n_items = [(n, 1)] if isinstance(n, Indec) else n.items
        return sum(a * b * self.ext(x, y) for x, a in m_items for y, b in n_items)
