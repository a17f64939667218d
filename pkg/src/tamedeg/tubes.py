"""Tube calculus: extension posets between two tube modules, the generic
extension operator e, socle reduction and the periodic shift of blocs.

Two coordinate systems for a tube module are in use:

* socle coordinates E_s(l) (the ``Indec`` encoding),
* top coordinates S_t[l] (regular top E_t, length l), in which the
  extension-poset arithmetic is written.

``top_coords`` / ``from_top`` convert between them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .catalog import Catalog, CatalogError, Indec, ModuleSum, TubeData
from .order import DegenOrder, OrderError
from .quiver import add, leq_vec, scale, sub


class TubeError(ValueError):
    pass


class TubeCategory(Catalog):
    """A single tube of period p, i.e. nilpotent representations of the
    oriented cycle with p vertices.  The "dimension vector" of a module is
    its vector of regular composition counts."""

    def __init__(self, p: int):
        if p < 1:
            raise TubeError("period must be positive")
        self.quiver = None
        self.n = p
        self.affine = True
        self.delta = (1,) * p
        simples = tuple(tuple(int(i == j) for j in range(p)) for i in range(p))
        self.tubes = [TubeData(1, p, simples)]
        self.t = 1
        self._reg_cache = {}

    @property
    def p(self) -> int:
        return self.n

    def defect(self, x) -> int:
        return 0

    def homogeneous_ids(self, ms: ModuleSum) -> set[int]:
        return set()

    def canonical(self, ms: ModuleSum, keep=()) -> ModuleSum:
        return ms

    _SHORT = re.compile(r"^\s*E(\d+)[:_]\{?(\d+)\}?(?:\((\d+)\))?\s*(?:\*\s*(\d+))?\s*$")

    def parse_indec(self, text: str) -> tuple[Indec, int]:
        # "E1:10" / "E1_10" / "E_1(10)" are socle 1, length 10; "E1_3(10)" keeps the tube id
        m = re.match(r"^\s*E_\{?(\d+)\}?\((\d+)\)\s*(?:\*\s*(\d+))?\s*$", text)
        if m:
            return self.R(1, int(m.group(1)), int(m.group(2))), int(m.group(3) or 1)
        m = self._SHORT.match(text)
        if m and m.group(3) is None:
            return self.R(1, int(m.group(1)), int(m.group(2))), int(m.group(4) or 1)
        return super().parse_indec(text)


# --- coordinates ----------------------------------------------------------------

def top_coords(cat: Catalog, x: Indec) -> tuple[int, int]:
    """(top index, length) of a tube module."""
    if x.kind != "R":
        raise TubeError(f"{x} is not a tube module")
    return cat.tube(x.a).top(x.b, x.l), x.l


def from_top(cat: Catalog, mu: int, top: int, length: int) -> Indec | None:
    """S_top[length] in tube mu; None for length 0."""
    if length == 0:
        return None
    return cat.with_top(mu, top, length)


# --- extension posets ----------------------------------------------------------

@dataclass
class ExtensionPoset:
    U: Indec
    V: Indec
    r: int
    S_set: list[int]
    E_set: list[ModuleSum]  # E_set[j] is the middle term for S_set[j]; largest first
    minimal: ModuleSum | None
    minimal_codim: int | None


def extension_poset(cat: Catalog, u: Indec, v: Indec) -> ExtensionPoset:
    """Non-split middle terms of extensions of V by U (0 -> U -> M -> V -> 0)
    for U = S_i[k], V = S_j[l] in one tube of period p.

    r is the least length of a module with top S_j and socle S_{i+1}; the
    middle terms are S_j[k + r + m p] + S_i[l - r - m p] for the m >= 0 with
    l >= r + m p > l - k.  m = 0 gives the largest one, which is a minimal
    degeneration of U + V.
    """
    if u.kind != "R" or v.kind != "R" or u.a != v.a:
        raise TubeError("U and V must lie in one tube")
    mu = u.a
    p = cat.period(mu)
    i, k = top_coords(cat, u)
    j, l = top_coords(cat, v)
    r = (j - i - 1) % p + 1
    s_set = []
    m = 0
    while r + m * p <= l:
        if r + m * p > l - k:
            s_set.append(m)
        m += 1
    e_set = []
    for m in s_set:
        a = from_top(cat, mu, j, k + r + m * p)
        b = from_top(cat, mu, i, l - r - m * p)
        e_set.append(cat.msum([x for x in (a, b) if x is not None]))
    minimal = e_set[0] if e_set else None
    codim = None
    if minimal is not None:
        soc_u, soc_v = u.b, v.b
        if k >= l and i == j:
            codim = 2
        elif k < l and soc_u == soc_v:
            codim = 2
        else:
            codim = 1
    return ExtensionPoset(u, v, r, s_set, e_set, minimal, codim)


def is_extension_regular_pair(cat: Catalog, m: ModuleSum, u: Indec, v: Indec) -> bool:
    """M is the middle term of some extension between U and V (either order)."""
    if u.kind != "R" or v.kind != "R" or u.a != v.a:
        raise TubeError("U and V must lie in one tube")
    if m == cat.msum([u, v]):
        return True
    return m in extension_poset(cat, u, v).E_set or m in extension_poset(cat, v, u).E_set


# --- generic extensions ---------------------------------------------------------

def generic_extension_e(order: DegenOrder, x: Indec | ModuleSum, mu: int) -> Indec | ModuleSum:
    """e(X): middle term of the universal extension of X by the simples of tube mu."""
    cat = order.catalog
    if isinstance(x, ModuleSum):
        return cat.msum((generic_extension_e(order, y, mu), c) for y, c in x)
    if x.kind == "R":
        if x.a != mu:
            return x
        return cat.R(mu, x.b - 1, x.l + 1)
    if x.kind == "I":
        d = x.dim
        for e in cat.simples(mu):
            d = add(d, scale(order.homs.ext(x, e), e.dim))
        found = [y for y in cat.from_dim(d) if y.kind == "I"]
        if len(found) != 1:
            raise TubeError(f"no preinjective of dimension {d}")
        return found[0]
    return x


def e_power(order: DegenOrder, x, mu: int, k: int):
    for _ in range(k):
        x = generic_extension_e(order, x, mu)
    return x


def socle_quotient_V(order: DegenOrder, v: Indec, mu: int) -> Indec:
    """V' with 0 -> (+) E_i^[E_i, V] -> V -> V' -> 0 (tube mu); e(V') = V."""
    cat = order.catalog
    if v.kind != "I":
        raise TubeError("V must be preinjective")
    d = v.dim
    for e in cat.simples(mu):
        d = sub(d, scale(order.homs.hom(e, v), e.dim))
    if not leq_vec((0,) * cat.n, d) or not any(d):
        raise TubeError(f"{v} is not larger than its socle in tube {mu}")
    found = [y for y in cat.from_dim(d) if y.kind == "I"]
    if len(found) != 1:
        raise TubeError(f"no preinjective of dimension {d}")
    return found[0]


# --- blocs ------------------------------------------------------------------------

@dataclass
class BlocRecord:
    U: Indec
    V: Indec
    M: ModuleSum
    codim: int
    provenance: str = "direct"  # direct | reduced-from | periodic-image-of
    parent: "BlocRecord | None" = field(default=None, repr=False)

    @property
    def target(self) -> tuple[Indec, Indec]:
        return self.U, self.V

    def key(self) -> tuple:
        return (self.U.sort_key, self.V.sort_key, self.M.text())


def make_bloc(order: DegenOrder, u: Indec, v: Indec, m: ModuleSum, provenance: str = "direct",
              parent: BlocRecord | None = None) -> BlocRecord:
    n = order.catalog.msum([u, v])
    return BlocRecord(u, v, m, order.codim(n, m, check=False), provenance, parent)


def single_tube(m: ModuleSum) -> int | None:
    mus = {x.a for x, _ in m}
    if len(mus) == 1 and all(x.kind == "R" for x, _ in m):
        return mus.pop()
    return None


def strip_socles(cat: Catalog, m: ModuleSum) -> ModuleSum:
    """M / soc M for a tube module sum."""
    items = []
    for x, c in m:
        if x.l > 1:
            items.append((cat.R(x.a, x.b + 1, x.l - 1), c))
    return cat.msum(items)


def reduce_bloc_by_socle(order: DegenOrder, b: BlocRecord) -> BlocRecord:
    """Q < U + V' with Q = M / soc M and V' the generic quotient of V by soc M."""
    cat = order.catalog
    mu = single_tube(b.M)
    if mu is None:
        raise TubeError("M must lie in one tube")
    if b.V.kind != "I":
        raise TubeError("V must be preinjective")
    if b.M.count != cat.defect(b.V):
        raise TubeError("M must have d(V) indecomposable summands")
    if all(x.l == 1 for x, _ in b.M):
        raise TubeError("M is regular semisimple; nothing to strip")
    q = strip_socles(cat, b.M)
    v2 = socle_quotient_V(order, b.V, mu)
    return make_bloc(order, b.U, v2, q, "reduced-from", b)


def reduce_bloc_by_partial_socle(order: DegenOrder, b: BlocRecord, indices: list[int]) -> BlocRecord:
    """Experimental: divide by E' = (+)_{j in J} E_j^{n_j} only.

    Requires n_j = [E_j, M] = [E_j, V] and q(dim V - dim E') = 1.
    """
    cat = order.catalog
    mu = single_tube(b.M)
    if mu is None or b.V.kind != "I":
        raise TubeError("M must lie in one tube and V must be preinjective")
    h = order.homs
    d = b.V.dim
    items = dict(b.M.items)
    for j in indices:
        e = cat.simple(mu, j)
        nj = h.hom(e, b.V)
        if nj != h.hom_sum(e, b.M):
            raise TubeError(f"[E_{j}, M] != [E_{j}, V]")
        d = sub(d, scale(nj, e.dim))
    if cat.quiver.tits_form(d) != 1:
        raise TubeError("dim V - dim E' is not a real root")
    found = [y for y in cat.from_dim(d) if y.kind == "I"]
    if len(found) != 1:
        raise TubeError("quotient is not preinjective")
    q_items = []
    for x, c in b.M:
        if cat.tube(mu).index(x.b) in [cat.tube(mu).index(j) for j in indices]:
            if x.l > 1:
                q_items.append((cat.R(mu, x.b + 1, x.l - 1), c))
        else:
            q_items.append((x, c))
    return make_bloc(order, b.U, found[0], cat.msum(q_items), "reduced-from", b)


def shift_tube(order: DegenOrder, b: BlocRecord) -> int | None:
    """The tube mu that makes b eligible for the periodic shift, if any."""
    cat = order.catalog
    h = order.homs
    mp = cat.msum(b.M.part("P"))
    for t in cat.tubes:
        r = cat.msum([(x, c) for x, c in b.M if x.kind == "R" and x.a == t.mu])
        if all(h.hom(b.U, e) == h.hom_sum(cat.join(mp, r), e) for e in cat.simples(t.mu)):
            return t.mu
    return None


def periodic_shift(order: DegenOrder, b: BlocRecord, mu: int | None = None, homogeneous: bool = False) -> BlocRecord:
    """M_P + M_R + R + M_I < U + V  ->  M_P + M_R + e^p(R) + tau^p(Q) M_I < U + tau^p(Q) V.

    R is the part of M in tube mu.  With ``homogeneous`` R is empty and
    e^p(R) is replaced by E^(d(V) - d(M_I)) for the simple E of a fresh
    homogeneous tube.
    """
    cat = order.catalog
    q = cat.quiver
    if q is None or not cat.affine:
        raise TubeError("periodic shift needs an extended Dynkin quiver")
    if q.epsilon != 1:
        raise TubeError("periodic shift is stated for epsilon(Q) = 1")
    h = order.homs
    m = b.M
    mp = cat.msum(m.part("P"))
    mi = cat.msum(m.part("I"))
    gap_p = sum(c * cat.defect(x) for x, c in mp) - cat.defect(b.U)
    gap_i = cat.defect(b.V) - sum(c * cat.defect(x) for x, c in mi)
    if gap_p != gap_i or gap_p <= 0:
        raise TubeError("defect condition d(M_P) - d(U) = d(V) - d(M_I) > 0 fails")
    pq = q.coxeter_period
    if homogeneous:
        fresh = max(cat.homogeneous_ids(m) | {cat.t}) + 1
        rest = cat.msum([(x, c) for x, c in m if x.kind == "R"])
        new_r = cat.msum([(cat.simple(fresh, 1), gap_i)])
    else:
        if mu is None:
            mu = shift_tube(order, b)
            if mu is None:
                raise TubeError("no tube satisfies [U, E_i] = [M_P + R, E_i]")
        r = cat.msum([(x, c) for x, c in m if x.kind == "R" and x.a == mu])
        if not all(h.hom(b.U, e) == h.hom_sum(cat.join(mp, r), e) for e in cat.simples(mu)):
            raise TubeError(f"[U, E_i] != [M_P + R, E_i] in tube {mu}")
        rest = cat.msum([(x, c) for x, c in m if x.kind == "R" and x.a != mu])
        new_r = e_power(order, r, mu, cat.period(mu))
    new_i = cat.msum((cat.tau_power(x, pq), c) for x, c in mi)
    v2 = cat.tau_power(b.V, pq)
    m2 = cat.join(mp, rest, new_r, new_i)
    if m2.dim != add(b.U.dim, v2.dim):
        raise TubeError("shifted bloc has mismatched dimension vectors")
    return make_bloc(order, b.U, v2, m2, "periodic-image-of", b)


# --- extensions for V regular of dimension delta ---------------------------------

def extension_set_K(order: DegenOrder, u: Indec, v: Indec) -> Callable[[ModuleSum], bool]:
    """Membership test for K = {M : M_R != 0 or M <= M' for a preprojective
    minimal deformation M' of U + V}, U simple projective, V regular with
    dim V = delta in a tube of period >= 2."""
    cat = order.catalog
    if not cat.is_projective(u) or sum(u.dim) != 1:
        raise TubeError("U must be simple projective")
    if v.kind != "R" or v.dim != cat.delta or cat.period(v.a) < 2:
        raise TubeError("V must be regular of dimension delta in a tube of period >= 2")
    n = cat.msum([u, v])
    pre = [d.lower for d in order.minimal_degenerations(n) if all(x.kind == "P" for x, _ in d.lower)]

    def member(m: ModuleSum) -> bool:
        if m == n or m.part("R"):
            return True
        return any(order.leq(m, mm) for mm in pre)

    member.generators = pre  # type: ignore[attr-defined]
    return member
