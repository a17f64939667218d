"""Independent matrix-level oracles, used by the test-suite only.

* explicit representations (string and band modules of A_n and A~m, and
  uniserial nilpotent representations of an oriented cycle) together with an
  intertwiner-system solver for dim Hom;
* a brute-force enumerator of extension middle terms between two uniserial
  nilpotent representations of an oriented cycle (cocycle classes over GF(2),
  middle terms identified by ranks of powers of the nilpotent operator);
* a combinatorial tube hom (count of overlaps between a quotient of X and a
  submodule of Y).

Ranks are computed modulo large primes with numpy int64 arithmetic; all
entries are integers, so nothing here touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .catalog import Catalog, Indec
from .quiver import Quiver, is_positive

PRIME = 2147483647
MAX_TUBE_LENGTH = 32
MAX_EXT_DIM = 60


def sparse_rank(rows: list[dict[int, int]], p: int = PRIME) -> int:
    """Rank modulo p of a matrix given by sparse rows {column: value}.

    The rank modulo a prime never exceeds the rank over the rationals, so an
    unlucky prime could only make a Hom dimension look too large.
    """
    pivots: dict[int, dict[int, int]] = {}
    r = 0
    for row in rows:
        d = {c: v % p for c, v in row.items() if v % p}
        while d:
            c = min(d)
            v = d[c]
            prow = pivots.get(c)
            if prow is None:
                inv = pow(v, p - 2, p)
                pivots[c] = {k: (x * inv) % p for k, x in d.items()}
                r += 1
                break
            for k, x in prow.items():
                nv = (d.get(k, 0) - v * x) % p
                if nv:
                    d[k] = nv
                else:
                    d.pop(k, None)
    return r


@dataclass
class Rep:
    """Representation: dims per vertex (0-based) and a matrix per arrow."""

    dims: tuple[int, ...]
    maps: list[np.ndarray]  # maps[a] has shape (dims[t], dims[s]) for arrow a: s -> t


def hom_dim(arrows: list[tuple[int, int]], x: Rep, y: Rep) -> int:
    """dim Hom(x, y): solve y_a f_s = f_t x_a for all arrows a: s -> t (0-based).

    Unknown f_v[i, j] (i indexes y_v, j indexes x_v) is variable
    offsets[v] + i * dim x_v + j.
    """
    n = len(x.dims)
    offsets, total = [], 0
    for v in range(n):
        offsets.append(total)
        total += x.dims[v] * y.dims[v]
    if total == 0:
        return 0
    rows = []
    for a, (s, t) in enumerate(arrows):
        xs, xt, ys, yt = x.dims[s], x.dims[t], y.dims[s], y.dims[t]
        if xs * yt == 0:
            continue
        ya = y.maps[a]
        xa = x.maps[a]
        y_rows = [[(k, int(ya[i, k])) for k in np.nonzero(ya[i])[0]] for i in range(yt)] if ys else [[]] * yt
        x_cols = [[(k, int(xa[k, j])) for k in np.nonzero(xa[:, j])[0]] for j in range(xs)] if xt else [[]] * xs
        for i in range(yt):
            for j in range(xs):
                row: dict[int, int] = {}
                for k, val in y_rows[i]:
                    c = offsets[s] + k * xs + j
                    row[c] = row.get(c, 0) + val
                for k, val in x_cols[j]:
                    c = offsets[t] + i * xt + k
                    row[c] = row.get(c, 0) - val
                if row:
                    rows.append(row)
    return total - sparse_rank(rows)


# --- oriented cycles -------------------------------------------------------

def cycle_arrows(p: int) -> list[tuple[int, int]]:
    """Arrows v -> v-1 on the cycle with vertices 0..p-1 (a loop when p = 1)."""
    return [(v, (v - 1) % p) for v in range(p)]


def uniserial(p: int, s: int, l: int) -> Rep:
    """E_s(l): basis b_0..b_{l-1}, b_j at vertex s+j, arrows b_j -> b_{j-1}."""
    if l > MAX_TUBE_LENGTH:
        raise ValueError("tube oracle length cap exceeded")
    verts = [(s - 1 + j) % p for j in range(l)]
    dims = [0] * p
    local = []
    for v in verts:
        local.append(dims[v])
        dims[v] += 1
    maps = [np.zeros((dims[(v - 1) % p], dims[v]), dtype=np.int64) for v in range(p)]
    for j in range(1, l):
        v = verts[j]
        maps[v][local[j - 1], local[j]] = 1
    return Rep(tuple(dims), maps)


def oracle_hom_tube(p: int, x: tuple[int, int], y: tuple[int, int]) -> int:
    """dim Hom(E_s(l), E_s'(l')) in the tube of period p, by linear algebra."""
    return hom_dim(cycle_arrows(p), uniserial(p, *x), uniserial(p, *y))


def overlap_hom_tube(p: int, x: tuple[int, int], y: tuple[int, int]) -> int:
    """Combinatorial tube hom: count j with top_j(X) isomorphic to soc_j(Y).

    A map X -> Y factors as X ->> X/rad^j ~ soc_j Y >-> Y; the images of
    length j with matching factors are independent.
    """
    (s, l), (s2, l2) = x, y
    count = 0
    for j in range(1, min(l, l2) + 1):
        # quotient of X of length j has socle E_{s+l-j}; submodule of Y has socle E_{s2}
        if (s + l - j - s2) % p == 0:
            count += 1
    return count


# --- string and band modules --------------------------------------------

def _walk_rep(quiver: Quiver, verts: list[int], steps: list[tuple[int, int]], lam: int = 1, band: bool = False,
              block: int = 1) -> Rep:
    """Representation of a string (or band) given by a walk.

    verts are 0-based vertices v_0..v_L, steps[j] = (arrow index, +1 if the
    arrow goes v_j -> v_{j+1} else -1).  For a band the last step closes the
    walk and carries a Jordan block of eigenvalue lam and size ``block``.
    """
    n = quiver.n
    arrows = [(s - 1, t - 1) for s, t in quiver.arrows]
    basis = []  # (vertex, position, copy)
    for c in range(block):
        for j, v in enumerate(verts):
            basis.append((v, j, c))
    dims = [0] * n
    local = {}
    for v, j, c in basis:
        local[(j, c)] = dims[v]
        dims[v] += 1
    maps = [np.zeros((dims[t], dims[s]), dtype=np.int64) for s, t in arrows]
    L = len(verts)
    for j, (a, direction) in enumerate(steps):
        j2 = (j + 1) % L if band else j + 1
        closing = band and j == len(steps) - 1
        for c in range(block):
            src, dst = ((j, c), (j2, c)) if direction > 0 else ((j2, c), (j, c))
            coeff = lam if closing else 1
            maps[a][local[dst], local[src]] += coeff
            if closing and c + 1 < block:
                src2 = (src[0], c + 1)
                maps[a][local[dst], local[src2]] += 1
    return Rep(tuple(dims), maps)


def strings(quiver: Quiver, max_dim: int) -> list[tuple[list[int], list[tuple[int, int]]]]:
    """Reduced walks (strings) up to reversal with at most max_dim vertices."""
    arrows = [(s - 1, t - 1) for s, t in quiver.arrows]
    out = []
    seen = set()

    def key(verts, steps):
        return tuple(verts), tuple(steps)

    def reverse(verts, steps):
        return list(reversed(verts)), [(a, -d) for a, d in reversed(steps)]

    def extend(verts, steps):
        k = key(verts, steps)
        rk = key(*reverse(verts, steps))
        canon = min(k, rk)
        if canon not in seen:
            seen.add(canon)
            out.append((list(canon[0]), list(canon[1])))
        if len(verts) == max_dim:
            return
        v = verts[-1]
        for a, (s, t) in enumerate(arrows):
            for direction, (frm, to) in ((1, (s, t)), (-1, (t, s))):
                if frm != v:
                    continue
                if steps and steps[-1] == (a, -direction):
                    continue  # immediate backtrack along the same arrow
                extend(verts + [to], steps + [(a, direction)])

    for v in range(quiver.n):
        extend([v], [])
    return out


def band_walk(quiver: Quiver) -> tuple[list[int], list[tuple[int, int]]]:
    """The primitive band of A~m (m >= 2): once around the cycle."""
    arrows = [(s - 1, t - 1) for s, t in quiver.arrows]
    n = quiver.n
    verts, steps = [0], []
    used = set()
    v = 0
    while len(steps) < n:
        for a, (s, t) in enumerate(arrows):
            if a in used:
                continue
            if s == v:
                used.add(a)
                steps.append((a, 1))
                v = t
                break
            if t == v:
                used.add(a)
                steps.append((a, -1))
                v = s
                break
        if len(steps) < n:
            verts.append(v)
    return verts, steps


class SmallQuiverOracle:
    """Explicit representations of all indecomposables of A_n / A~m up to a size."""

    def __init__(self, catalog: Catalog, max_dim: int = 24):
        q = catalog.quiver
        name = q.label
        if not (name.startswith("A_") or (name.startswith("A~") and q.n >= 2)):
            raise ValueError("oracle only supports types A_n and A~m")
        self.catalog = catalog
        self.quiver = q
        self.arrows = [(s - 1, t - 1) for s, t in q.arrows]
        self.max_dim = max_dim
        self.reps: dict[Indec, Rep] = {}
        self._build()

    def _build(self):
        cat = self.catalog
        pending = []
        for verts, steps in strings(self.quiver, self.max_dim):
            rep = _walk_rep(self.quiver, verts, steps)
            d = rep.dims
            found = cat.from_dim(d)
            if len(found) == 1 and not (cat.affine and found[0].kind == "R" and cat.is_homogeneous(found[0].a)):
                self._store(found[0], rep)
            else:
                pending.append(rep)
        # strings of dimension m*delta lie in non-homogeneous tubes: the
        # socle is the unique regular simple with a non-zero map into them
        if not cat.tubes:
            pending = []  # Kronecker: string modules of dimension m*delta are not tracked
        for rep in pending:
            m = rep.dims[0] // cat.delta[0]
            hits = []
            for t in cat.tubes:
                for e in cat.simples(t.mu):
                    if hom_dim(self.arrows, self.reps[e], rep):
                        hits.append(e)
            if not hits:
                # the string lies in a tube of period one at a special parameter
                self._store(cat.R(cat.homogeneous_id + 2, 1, m), rep)
                continue
            if len(hits) != 1:
                raise RuntimeError(f"cannot place string module of dimension {rep.dims}")
            e = hits[0]
            self._store(cat.R(e.a, e.b, m * cat.period(e.a)), rep)
        if cat.affine:
            verts, steps = band_walk(self.quiver)
            size = len(verts)
            for lam in (1, 2):
                mu = cat.homogeneous_id + lam - 1
                for block in range(1, self.max_dim // size + 1):
                    rep = _walk_rep(self.quiver, verts, steps, lam=lam, band=True, block=block)
                    self._store(cat.R(mu, 1, block), rep)

    def _store(self, x: Indec, rep: Rep):
        if x in self.reps:
            raise RuntimeError(f"two representations claim {x}")
        if tuple(rep.dims) != tuple(x.dim):
            raise RuntimeError(f"dimension mismatch for {x}")
        self.reps[x] = rep

    def indecomposables(self) -> list[Indec]:
        return sorted(self.reps)

    def hom(self, x: Indec, y: Indec) -> int:
        return hom_dim(self.arrows, self.reps[x], self.reps[y])


def oracle_hom_small_quiver(catalog: Catalog, x: Indec, y: Indec, max_dim: int = 24) -> int:
    return SmallQuiverOracle(catalog, max_dim).hom(x, y)


# --- extension middle terms in a tube --------------------------------------

class CycleModule:
    """Uniserial E_s(l) on the cycle with p vertices, as a graded basis."""

    def __init__(self, p: int, s: int, l: int):
        self.p, self.s, self.l = p, s, l
        self.verts = [(s - 1 + j) % p for j in range(l)]


def middle_terms(p: int, u: tuple[int, int], v: tuple[int, int]) -> dict[tuple[tuple[int, int, int], ...], int]:
    """Middle terms of all extensions 0 -> U -> M -> V -> 0 (over GF(2)).

    U = E_s(k), V = E_s'(l) in the tube of period p.  Returns a map from the
    middle-term type (sorted tuple of (socle, length, multiplicity)) to the
    number of extension classes with that middle term.
    """
    (su, k), (sv, l) = u, v
    if k + l > MAX_EXT_DIM:
        raise ValueError("extension oracle dimension cap exceeded")
    U, V = CycleModule(p, su, k), CycleModule(p, sv, l)
    n = k + l
    vert = U.verts + V.verts  # basis: U part 0..k-1, V part k..n-1
    # operator A: b_j -> b_{j-1} inside U and inside V
    base = np.zeros((n, n), dtype=np.uint8)
    for j in range(1, k):
        base[j - 1, j] = 1
    for j in range(1, l):
        base[k + j - 1, k + j] = 1
    # cocycle coordinates: V basis vector at vertex w may map to U vectors at vertex w-1
    z_coords = [(i, k + j) for j in range(l) for i in range(k) if U.verts[i] == (V.verts[j] - 1) % p]
    zi = {c: t for t, c in enumerate(z_coords)}
    # coboundaries: A_U h - h A_V for degree-0 maps h: V -> U
    h_coords = [(i, j) for j in range(l) for i in range(k) if U.verts[i] == V.verts[j]]
    cob = []
    for (i, j) in h_coords:
        vec = np.zeros(len(z_coords), dtype=np.uint8)
        # A_U h: e_j(V) -> A_U b_i = b_{i-1}
        if i >= 1:
            vec[zi[(i - 1, k + j)]] ^= 1
        # h A_V: e_{j+1}(V) -> A_V e_{j+1} = e_j -> h -> b_i
        if j + 1 < l:
            vec[zi[(i, k + j + 1)]] ^= 1
        cob.append(vec)
    complement = _complement_basis(cob, len(z_coords))
    e = len(complement)
    classes = list(product((0, 1), repeat=e))
    ops = np.repeat(base[None, :, :], len(classes), axis=0)
    for ci, bits in enumerate(classes):
        for b, t in zip(bits, complement):
            if b:
                i, j = z_coords[t]
                ops[ci, i, j] ^= 1
    types = _module_types(ops, vert, p)
    out: dict = {}
    for ty in types:
        out[ty] = out.get(ty, 0) + 1
    return out


def _complement_basis(vectors: list[np.ndarray], dim: int) -> list[int]:
    """Standard basis indices completing span(vectors) to GF(2)^dim."""
    rows = [int("".join(str(int(b)) for b in v[::-1]) or "0", 2) for v in vectors]
    basis: dict[int, int] = {}  # pivot bit -> row

    def reduce(x):
        for bit in sorted(basis, reverse=True):
            if (x >> bit) & 1:
                x ^= basis[bit]
        return x

    for r in rows:
        r = reduce(r)
        if r:
            basis[r.bit_length() - 1] = r
    chosen = []
    for t in range(dim):
        r = reduce(1 << t)
        if r:
            basis[r.bit_length() - 1] = r
            chosen.append(t)
    return chosen


def _gf2_rank_batch(vecs: np.ndarray, bits) -> np.ndarray:
    """Ranks of batches of GF(2) vectors given as int64 bitmasks, shape (B, d);
    ``bits`` lists the bit positions that may be set."""
    vecs = vecs.copy()
    B, d = vecs.shape
    ranks = np.zeros(B, dtype=np.int64)
    if d == 0:
        return ranks
    rows = np.arange(B)
    for bit in bits:
        has = ((vecs >> bit) & 1).astype(bool)
        any_ = has.any(axis=1)
        idx = np.argmax(has, axis=1)
        piv = vecs[rows, idx] * any_
        ranks += any_
        flip = has & any_[:, None]
        vecs = np.where(flip, vecs ^ piv[:, None], vecs)
        vecs[rows[any_], idx[any_]] = 0
    return ranks


def _module_types(ops: np.ndarray, vert: list[int], p: int) -> list[tuple]:
    """Decompose nilpotent graded operators into uniserials via ranks of powers."""
    B, n, _ = ops.shape
    weights = (1 << np.arange(n, dtype=np.int64))
    cols = (ops.astype(np.int64) * weights[None, :, None]).sum(axis=1)  # column bitmasks (B, n)
    by_vertex = [[c for c in range(n) if vert[c] == v] for v in range(p)]
    # r[j][v] = rank of A^j restricted to vertex v
    r = []
    power = np.tile(weights, (B, 1))  # A^0 columns
    zero = [np.zeros(B, dtype=np.int64) for _ in range(p)]
    for j in range(n + 2):
        if not power.any():
            r += [zero] * (n + 2 - j)
            break
        # A^j maps vertex v into vertex v - j
        r.append([_gf2_rank_batch(power[:, by_vertex[v]], by_vertex[(v - j) % p]) for v in range(p)])
        nxt = np.zeros_like(power)
        for c in range(n):
            bits = (power >> c) & 1
            nxt ^= bits * cols[:, c][:, None]
        power = nxt
    types = []
    for b in range(B):
        summands = []
        for v in range(p):
            for j in range(n):
                t = (r[j][v][b] - r[j + 1][v][b]) - (r[j + 1][(v + 1) % p][b] - r[j + 2][(v + 1) % p][b])
                if t:
                    # top at vertex v, length j+1, socle at vertex v-j
                    summands.append((((v - j) % p) + 1, j + 1, int(t)))
        types.append(tuple(sorted(summands)))
    return types


def positive_roots_brute(quiver: Quiver, bound) -> list[tuple[int, ...]]:
    """Positive vectors x <= bound with q(x) in {0, 1} (roots of tame quivers)."""
    out = []
    for x in product(*[range(b + 1) for b in bound]):
        if is_positive(x) and quiver.tits_form(x) in (0, 1):
            out.append(x)
    return out
