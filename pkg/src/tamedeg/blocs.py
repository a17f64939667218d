"""Enumeration and audit of building blocs M < U + V.

A building bloc is a minimal degeneration M < U + V with U, V indecomposable
and no summand common to M and U + V.  ``classify`` finds them for one
target, ``run_classification`` over a family of targets, and the audit
functions re-check codimension bounds and structural lemmas on a finished run.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .calibration import Relabel
from .catalog import Catalog, CatalogError, Indec, ModuleSum
from .order import CapExceeded, DegenOrder, OrderError
from .quiver import Quiver, add, leq_vec, scale, sub
from .tubes import (
    BlocRecord,
    TubeError,
    make_bloc,
    periodic_shift,
    reduce_bloc_by_socle,
    shift_tube,
    single_tube,
)

RUN_FORMAT = 1


class ReductionError(ValueError):
    pass


# --- classification ---------------------------------------------------------------

def is_disjoint(m: ModuleSum, n: ModuleSum) -> bool:
    keys = {x for x, _ in n}
    return not any(x in keys for x, _ in m)


def classify(
    order: DegenOrder,
    u: Indec,
    v: Indec,
    tube: int | None = None,
    cap: int | None = None,
) -> list[BlocRecord]:
    """All building blocs M < U + V; with ``tube`` only those with M in that tube."""
    cat = order.catalog
    n = cat.msum([u, v])
    if tube is not None:
        found = _one_tube_minimal(order, u, v, tube)
    else:
        elems = [m for m in order.deformations(n, cap=cap) if m != n]
        found = _maximal(order, elems, n)
    out = [make_bloc(order, u, v, m) for m in found if is_disjoint(m, n)]
    return sorted(out, key=lambda b: b.key())


def _one_tube_minimal(order: DegenOrder, u: Indec, v: Indec, mu: int) -> list[ModuleSum]:
    cat = order.catalog
    n = cat.msum([u, v])
    pair_test = cat.affine and u.kind == "P" and v.kind == "I"
    if pair_test:
        # tops are bounded by [U, E_i]; at most d(V) summands
        tops = [order.homs.hom(u, e) for e in cat.simples(mu)]
        cands = order.tube_candidates(n.dim, mu, top_bound=tops, max_summands=cat.defect(v))
        cands = [m for m in cands if order.regular_degeneration_test(m, u, v)]
    else:
        cands = [m for m in order.tube_candidates(n.dim, mu) if order.leq(m, n)]
    # a candidate strictly between M and N already rules M out
    survivors = _maxima_by_codim(order, [m for m in cands if m != n], n)
    return [m for m in survivors if order.is_minimal(m, n, assume_leq=True)]


def _maxima_by_codim(order: DegenOrder, elems: list[ModuleSum], n: ModuleSum) -> list[ModuleSum]:
    cod = {m: order.codim(n, m, check=False) for m in elems}
    tops: list[ModuleSum] = []
    for m in sorted(elems, key=lambda m: cod[m]):
        if not any(cod[t] < cod[m] and order.leq(m, t) for t in tops):
            tops.append(m)
    return [m for m in elems if m in set(tops)]


def _maximal(order: DegenOrder, elems: list[ModuleSum], n: ModuleSum | None = None) -> list[ModuleSum]:
    """Elements with nothing strictly above them (inside elems).

    With ``n`` (a common upper bound) elements are visited by increasing codim
    and compared only with the maxima found so far: anything above M lies
    below some maximum of smaller codim.
    """
    if n is not None:
        return _maxima_by_codim(order, elems, n)
    out = []
    for i, m in enumerate(elems):
        if not any(j != i and order.leq(m, l) for j, l in enumerate(elems)):
            out.append(m)
    return out


# --- runs ---------------------------------------------------------------------------

@dataclass
class ClassificationRun:
    quiver: Quiver
    type_name: str
    sink: int | None
    U: Indec
    targets: list[Indec]
    mode: str  # "tubes" (one-tube blocs in non-homogeneous tubes) or "general"
    blocs: list[BlocRecord] = field(default_factory=list)
    audit: dict = field(default_factory=dict)
    relabel: Relabel | None = None


def target_family(
    cat: Catalog,
    vrange: int,
    kinds: Sequence[str] = ("I",),
    vertices: Iterable[int] | None = None,
) -> list[Indec]:
    """Targets V: tau^k I(i) and tau^-k P(i) for 0 <= k <= vrange, and regular V with
    dim V <= delta (one homogeneous simple stands for all homogeneous tubes)."""
    out: list[Indec] = []
    verts = list(vertices) if vertices is not None else list(cat.quiver.vertices)
    for kind in kinds:
        if kind == "R":
            if not cat.affine:
                continue
            for t in cat.tubes:
                for s in range(1, t.period + 1):
                    out += [cat.R(t.mu, s, l) for l in range(1, t.period + 1)]
            out.append(cat.simple(cat.t + 1, 1))
            continue
        make = cat.I if kind == "I" else cat.P
        for k in range(vrange + 1):
            for i in verts:
                if cat._exists(kind, i, k):
                    out.append(make(i, k))
    return out


def targets_within_cap(cat: Catalog, kinds: Sequence[str] = ("I",), factor: int | None = None,
                       vertices: Iterable[int] | None = None) -> list[Indec]:
    """Non-regular V with dim V <= factor * |d(V)| * delta (default factor p(Q) + 2);
    regular V with dim V <= delta."""
    q = cat.quiver
    f = q.coxeter_period + 2 if factor is None else factor
    verts = list(vertices) if vertices is not None else list(q.vertices)
    out: list[Indec] = []
    for kind in kinds:
        if kind == "R":
            out += [v for v in target_family(cat, 0, ("R",)) if leq_vec(v.dim, cat.delta)]
            continue
        make = cat.I if kind == "I" else cat.P
        k = 0
        while True:
            layer = [make(i, k) for i in verts if cat._exists(kind, i, k)]
            layer = [v for v in layer if leq_vec(v.dim, scale(f * abs(cat.defect(v)), cat.delta))]
            if not layer:
                break
            out += layer
            k += 1
    return out


def run_classification(
    order: DegenOrder,
    u: Indec,
    targets: Sequence[Indec],
    mode: str = "tubes",
    cap: int | None = None,
    type_name: str = "",
    sink: int | None = None,
    relabel: Relabel | None = None,
) -> ClassificationRun:
    cat = order.catalog
    if mode not in ("tubes", "general"):
        raise ValueError(f"unknown mode {mode!r}")
    run = ClassificationRun(cat.quiver, type_name or cat.quiver.label, sink, u, list(targets), mode,
                            relabel=relabel)
    for v in targets:
        if mode == "tubes":
            for t in cat.tubes:
                run.blocs += classify(order, u, v, tube=t.mu)
        else:
            run.blocs += classify(order, u, v, cap=cap)
    return run


# --- reductions ---------------------------------------------------------------------

def is_directed(cat: Catalog, m1: ModuleSum, m2: ModuleSum) -> bool:
    """No summand of M2 is a predecessor of a regular summand of M1, nor a
    proper predecessor of a non-regular one."""
    for y, _ in m1:
        for z, _ in m2:
            if y.kind == "R":
                if cat.precedes(z, y):
                    return False
            elif cat.precedes(z, y) and not cat.precedes(y, z):
                return False
    return True


def directed_splits(cat: Catalog, m: ModuleSum) -> list[tuple[ModuleSum, ModuleSum]]:
    """All directed disjoint decompositions M = M1 + M2 with both parts non-zero."""
    keys = [x for x, _ in m]
    out = []
    for r in range(1, len(keys)):
        for idx in combinations(range(len(keys)), r):
            m1 = cat.msum([(keys[i], m.multiplicity(keys[i])) for i in idx])
            m2 = cat.remove(m, m1.items)
            if is_directed(cat, m1, m2):
                out.append((m1, m2))
    return out


@dataclass(frozen=True)
class ReductionResult:
    bloc: BlocRecord
    C: Indec
    delta: int  # the closed formula
    codim_drop: int  # codim(U + V, M) - codim(U + C, M1), computed directly
    minimal: bool


def reduce_I(order: DegenOrder, b: BlocRecord, m1: ModuleSum, m2: ModuleSum) -> ReductionResult:
    """Divide a bloc by the directed summand M2: M1 < U + C with dim C = dim M1 - dim U."""
    cat = order.catalog
    h = order.homs
    if not (cat.is_projective(b.U) and sum(b.U.dim) == 1):
        raise ReductionError("U must be simple projective")
    if cat.join(m1, m2) != b.M:
        raise ReductionError("M1 + M2 is not M")
    if m2 and not is_directed(cat, m1, m2):
        raise ReductionError("decomposition is not directed")
    if not is_disjoint(m1, m2):
        raise ReductionError("decomposition is not disjoint")
    if not m2:
        c = b.V
    else:
        d = sub(m1.dim, b.U.dim)
        if not leq_vec((0,) * cat.n, d) or not any(d):
            raise ReductionError(f"dim M1 - dim U = {d} is not a root")
        try:
            cands = cat.from_dim(d)
        except CatalogError as exc:
            raise ReductionError(str(exc)) from exc
        if not cands:
            raise ReductionError(f"dim M1 - dim U = {d} is not a root")
        if len(cands) > 1:
            # imaginary root: keep C with M1 -> C and V -> C non-zero and M1 <= U + C
            cands = [c for c in cands
                     if h.hom_sum(m1, c) and h.hom(b.V, c) and order.leq(m1, cat.msum([b.U, c]))]
            if len(cands) != 1:
                raise ReductionError(f"ambiguous cokernel for dimension {d}")
        c = cands[0]
    target = cat.msum([b.U, c])
    delta = (h.hom(b.V, b.V) - h.hom(c, c) - h.hom_sum(b.V, m2) + h.ext_sum(b.V, m2)
             - h.ext_sum(m2, m2) - h.hom_sum(m2, m1))
    reduced = make_bloc(order, b.U, c, m1, "reduced-from", b)
    minimal = order.is_minimal(m1, target)
    return ReductionResult(reduced, c, delta, b.codim - reduced.codim, minimal)


def reduce_regular_target(order: DegenOrder, b: BlocRecord) -> ReductionResult:
    """M_P + R < U + V with V regular  ->  M_P < U + C where C = V / R."""
    cat = order.catalog
    h = order.homs
    if b.V.kind != "R":
        raise ReductionError("V must be regular")
    if b.M.part("I"):
        raise ReductionError("M has a preinjective part")
    regs = b.M.part("R")
    mp = cat.msum(b.M.part("P"))
    if not regs:
        c = b.V
    else:
        if len(regs) != 1 or regs[0][1] != 1:
            raise ReductionError("the regular part of M is not indecomposable")
        r = regs[0][0]
        if r.a != b.V.a or r.b != b.V.b or r.l >= b.V.l:
            raise ReductionError(f"{r} is not a proper submodule of {b.V}")
        c = cat.R(b.V.a, b.V.b + r.l, b.V.l - r.l)
    reduced = make_bloc(order, b.U, c, mp, "reduced-from", b)
    target = cat.msum([b.U, c])
    minimal = order.is_minimal(mp, target)
    return ReductionResult(reduced, c, 1 + h.ext(c, c), b.codim - reduced.codim, minimal)


# --- audits -------------------------------------------------------------------------

@dataclass
class AuditReport:
    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"name": self.name, "checked": self.checked, "violations": list(self.violations)}


def _bloc_text(b: BlocRecord) -> str:
    return f"{b.M.text()} < {b.U.text()}+{b.V.text()}"


def audit_codimension(order: DegenOrder, run: ClassificationRun) -> AuditReport:
    """codim is 1 or 2 for every bloc, and 1 when U is preprojective and V preinjective."""
    rep = AuditReport("codimension")
    for b in run.blocs:
        rep.checked += 1
        if b.codim not in (1, 2):
            rep.violations.append(f"codim {b.codim}: {_bloc_text(b)}")
        elif b.U.kind == "P" and b.V.kind == "I" and b.codim != 1:
            rep.violations.append(f"codim {b.codim} with U preprojective, V preinjective: {_bloc_text(b)}")
    run.audit[rep.name] = rep.to_json()
    return rep


def audit_structural_lemmas(order: DegenOrder, run: ClassificationRun) -> dict[str, AuditReport]:
    cat = order.catalog
    q = cat.quiver
    h = order.homs
    reps = {name: AuditReport(name) for name in (
        "defect-gap", "multiplicity", "distance", "short-summands", "equal-lengths",
        "few-summands", "equidistribution", "summand-count", "one-maximum")}
    affine = cat.affine
    p, diam = (q.coxeter_period, q.diameter) if affine else (0, 0)
    u_simple_proj = cat.is_projective(run.U) and sum(run.U.dim) == 1

    for b in run.blocs:
        text = _bloc_text(b)
        mp = cat.msum(b.M.part("P"))
        mi = cat.msum(b.M.part("I"))
        mu = single_tube(b.M)
        dv = cat.defect(b.V)
        # the defect gaps are positive
        if u_simple_proj and b.V.kind == "I" and affine:
            rep = reps["defect-gap"]
            rep.checked += 1
            gp = sum(c * cat.defect(x) for x, c in mp)
            gi = sum(c * cat.defect(x) for x, c in mi)
            if not (gp > cat.defect(b.U) and gi < dv):
                rep.violations.append(text)
        # repeated preprojective summands
        if affine and b.M.part("P") and len(b.M.part("P")) == len(b.M.items):
            for x, n in b.M:
                if n < 2:
                    continue
                rep = reps["multiplicity"]
                rep.checked += 1
                problems = multiplicity_violations(order, b, x)
                rep.violations += [f"{text}: {s}" for s in problems]
        # summands stay close to U and V
        if affine:
            rep = reps["distance"]
            bound = 4 * p + diam
            if b.U.kind == "P":
                for x, _ in mp:
                    rep.checked += 1
                    if cat.path_distance(b.U, x) >= bound:
                        rep.violations.append(f"{text}: d(U,{x.text()}) >= {bound}")
            if b.V.kind == "I":
                for x, _ in mi:
                    rep.checked += 1
                    if cat.path_distance(x, b.V) >= bound:
                        rep.violations.append(f"{text}: d({x.text()},V) >= {bound}")
        if mu is not None and affine and not cat.is_homogeneous(mu) and b.U.kind == "P" and b.V.kind == "I":
            tube = cat.tube(mu)
            # a simple with spare homs from U is only a top, summands are short
            rep = reps["short-summands"]
            for e in cat.simples(mu):
                if h.hom(b.U, e) > h.hom_sum(b.M, e):
                    rep.checked += 1
                    s = e.b
                    for x, _ in b.M:
                        facs = tube.factors(x.b, x.l)
                        if x.l > tube.period or (s in facs and facs.index(s) != x.l - 1) or facs.count(s) > 1:
                            rep.violations.append(f"{text}: simple E{mu}_{s}")
                            break
            # lengths differ by at most p
            rep = reps["equal-lengths"]
            rep.checked += 1
            lens = [x.l for x, _ in b.M]
            if max(lens) - min(lens) > tube.period:
                rep.violations.append(text)
            # fewer summands than d(V) forces codim 1
            s_count = b.M.count
            if s_count < dv:
                rep = reps["few-summands"]
                rep.checked += 1
                if b.codim != 1:
                    rep.violations.append(text)
            rep = reps["summand-count"]
            rep.checked += 1
            if s_count > dv or s_count > -cat.defect(b.U):
                rep.violations.append(text)
        # homs from a preprojective to the simples of a tube are nearly constant
        if affine:
            rep = reps["equidistribution"]
            mods = [x for x, _ in mp] + [x for x, _ in mi]
            mods += [y for y in (b.U, b.V) if y.kind != "R"]
            for x in mods:
                for t in cat.tubes:
                    if t.period < 2:
                        continue
                    rep.checked += 1
                    if x.kind == "P":
                        vals = [h.hom(x, e) for e in cat.simples(t.mu)]
                    else:
                        vals = [h.hom(e, x) for e in cat.simples(t.mu)]
                    if max(vals) - min(vals) > 1:
                        rep.violations.append(f"{text}: {x.text()} in tube {t.mu}")
    # the one-tube deformations of each target have at most one maximal element
    if affine and run.U.kind == "P":
        rep = reps["one-maximum"]
        for v in run.targets:
            if v.kind != "I":
                continue
            n = cat.msum([run.U, v])
            for t in cat.tubes:
                d = [m for m in order.deformations(n, tube=t.mu) if m != n]
                rep.checked += 1
                tops = _maximal(order, d, n)
                if len(tops) > 1:
                    rep.violations.append(f"{v.text()} tube {t.mu}: {len(tops)} maximal elements")
                elif tops and not order.is_minimal(tops[0], n, assume_leq=True) and cat.defect(v) < t.period + 1:
                    rep.violations.append(f"{v.text()} tube {t.mu}: maximum not minimal with d(V) <= p")
    for rep in reps.values():
        run.audit[rep.name] = rep.to_json()
    return reps


def multiplicity_violations(order: DegenOrder, b: BlocRecord, x: Indec) -> list[str]:
    """Consequences of a repeated preprojective summand X of M (M preprojective).

    With M1' the summands strictly below X: V is preprojective, X occurs
    exactly twice, every other summand once, d(X) = -1 and
    dim(M1' + X) = delta + dim U.
    """
    cat = order.catalog
    m1 = cat.msum([(y, c) for y, c in b.M if y != x and cat.precedes(y, x)])
    out = []
    if b.V.kind != "P":
        out.append("V is not preprojective")
    if b.M.multiplicity(x) != 2:
        out.append(f"{x.text()} occurs {b.M.multiplicity(x)} times")
    if any(c > 1 for y, c in b.M if y != x):
        out.append("another summand is repeated")
    if cat.defect(x) != -1:
        out.append(f"defect of {x.text()} is {cat.defect(x)}")
    if add(m1.dim, x.dim) != add(cat.delta, b.U.dim):
        out.append("dim(M1' + X) != delta + dim U")
    return out


# --- periodicity ----------------------------------------------------------------------

def periodic_closure(order: DegenOrder, run: ClassificationRun, shift_bound: int, verify: int = 3) -> ClassificationRun:
    """Extend the run by periodic images of its blocs up to tau-shift ``shift_bound``.

    The base run must contain tau^k I(i) for every k < p(Q) and every i that
    occurs.  The first ``verify`` new blocs are recomputed by direct
    classification.
    """
    cat = order.catalog
    p = cat.quiver.coxeter_period
    inj = [v for v in run.targets if v.kind == "I"]
    verts = {v.a for v in inj}
    have = {(v.a, v.b) for v in inj}
    if not inj or any((i, k) not in have for i in verts for k in range(p) if cat._exists("I", i, k)):
        raise TubeError(f"base run must cover all shifts below p(Q) = {p}")
    seen = {b.key() for b in run.blocs}
    new: list[BlocRecord] = []
    frontier = [b for b in run.blocs if b.V.kind == "I"]
    while frontier:
        nxt = []
        for b in frontier:
            if shift_tube(order, b) is None:
                continue
            try:
                img = periodic_shift(order, b)
            except TubeError:
                continue
            if img.V.b > shift_bound or img.key() in seen:
                continue
            seen.add(img.key())
            new.append(img)
            nxt.append(img)
        frontier = nxt
    new.sort(key=lambda b: b.key())
    for b in new[:verify]:
        mu = single_tube(b.M)
        direct = classify(order, b.U, b.V, tube=mu) if mu is not None and not cat.is_homogeneous(mu) \
            else classify(order, b.U, b.V)
        if b.M not in [d.M for d in direct]:
            raise TubeError(f"periodic image {_bloc_text(b)} is not found by direct classification")
    targets = list(run.targets)
    for b in new:
        if b.V not in targets:
            targets.append(b.V)
    return ClassificationRun(run.quiver, run.type_name, run.sink, run.U, targets, run.mode,
                             run.blocs + new, dict(run.audit), run.relabel)


def reducible_by_socle(order: DegenOrder, b: BlocRecord) -> BlocRecord | None:
    try:
        return reduce_bloc_by_socle(order, b)
    except TubeError:
        return None


# --- output ---------------------------------------------------------------------------

def reference_text(cat: Catalog, rel: Relabel | None, ms: ModuleSum) -> str:
    """Summands of a one-tube module in the reference notation S_i(l), S'_i(l), S''_i(l)."""
    parts = []
    for x in ms.summands:
        if x.kind != "R" or cat.is_homogeneous(x.a) or rel is None:
            parts.append(x.text())
            continue
        k, s = rel.to_reference(x.a, x.b)
        parts.append(f"S{chr(39) * (k - 1)}_{s}({x.l})")
    return "+".join(sorted(parts, key=_ref_key))


def _ref_key(t: str):
    m = re.match(r"S('*)_(\d+)\((\d+)\)", t)
    if not m:
        return (1, t)
    return (0, len(m.group(1)), int(m.group(2)), int(m.group(3)))


def render_table(order: DegenOrder, run: ClassificationRun) -> str:
    """One line per bloc: |Q|, U, V, k, M_k (k is '-' for blocs not in one
    non-homogeneous tube)."""
    cat = order.catalog
    rel = run.relabel
    rows = []
    pos = {v: i for i, v in enumerate(run.targets)}
    for b in run.blocs:
        mu = single_tube(b.M)
        if mu is not None and not cat.is_homogeneous(mu):
            k = rel.to_reference(mu, 1)[0] if rel else mu
            text = reference_text(cat, rel, b.M)
        else:
            k = "-"
            text = b.M.text()
        rows.append(((pos.get(b.V, len(pos)), str(k), text), b, k, text))
    rows.sort(key=lambda r: r[0])
    lines = ["|Q|\tU\tV\tk\tM_k\tcodim"]
    for _, b, k, text in rows:
        lines.append(f"{run.type_name}\t{b.U.pretty()}\t{b.V.pretty()}\t{k}\t{text}\t{b.codim}")
    return "\n".join(lines) + "\n"


def run_to_json(run: ClassificationRun) -> dict:
    return {
        "format": RUN_FORMAT,
        "quiver": {"type": run.type_name, "sink": run.sink, "vertices": run.quiver.vertex_count,
                   "arrows": [list(a) for a in run.quiver.arrows]},
        "U": run.U.text(),
        "targets": [v.text() for v in run.targets],
        "mode": run.mode,
        "calibration": run.relabel.to_json() if run.relabel else None,
        "blocs": [
            {"U": b.U.text(), "V": b.V.text(), "M": b.M.text(), "codim": b.codim, "provenance": b.provenance}
            for b in run.blocs
        ],
        "audit": run.audit,
    }


def run_from_json(data: dict) -> tuple[DegenOrder, ClassificationRun]:
    if data.get("format") != RUN_FORMAT:
        raise ValueError(f"unsupported run format {data.get('format')!r}")
    qd = data["quiver"]
    quiver = Quiver(qd["vertices"], tuple(tuple(a) for a in qd["arrows"]))
    cat = Catalog(quiver)
    order = DegenOrder(cat)
    u = cat.parse_indec(data["U"])[0]
    targets = [cat.parse_indec(t)[0] for t in data["targets"]]
    blocs = []
    for d in data["blocs"]:
        bu, bv = cat.parse_indec(d["U"])[0], cat.parse_indec(d["V"])[0]
        blocs.append(BlocRecord(bu, bv, cat.parse(d["M"]), d["codim"], d["provenance"]))
    rel = Relabel.from_json(data["calibration"]) if data.get("calibration") else None
    run = ClassificationRun(quiver, qd["type"], qd["sink"], u, targets, data["mode"], blocs,
                            dict(data.get("audit", {})), rel)
    return order, run


def dump_run(run: ClassificationRun) -> str:
    return json.dumps(run_to_json(run), indent=1, sort_keys=True) + "\n"


__all__ = [
    "AuditReport", "CapExceeded", "ClassificationRun", "OrderError", "ReductionError", "ReductionResult",
    "audit_structural_lemmas", "audit_codimension", "classify", "directed_splits", "dump_run", "is_directed",
    "is_disjoint", "periodic_closure", "reduce_I", "reduce_regular_target", "render_table", "run_classification",
    "run_from_json", "run_to_json", "target_family",
]
