import itertools
import json

import pytest

from tamedeg.blocs import (
    ReductionError,
    audit_structural_lemmas,
    audit_codimension,
    classify,
    directed_splits,
    dump_run,
    multiplicity_violations,
    periodic_closure,
    reduce_I,
    reduce_regular_target,
    render_table,
    run_classification,
    run_from_json,
    target_family,
)
from tamedeg.calibration import relabel_for
from tamedeg.emit import most_generic_non_extensions
from tamedeg.tubes import extension_set_K, make_bloc

from conftest import order_for


def _ref(order, type_name, sink):
    cat = order.catalog
    return relabel_for(type_name, sink, [t.period for t in cat.tubes])


def _tube_sum(order, rel, k, pairs):
    cat = order.catalog
    items = []
    for s, l in pairs:
        mu, ours = rel.to_ours(k, s)
        items.append(cat.R(mu, ours, l))
    return cat.msum(items)


def test_e6_three_tubes():
    order = order_for("E~6", 2)
    cat = order.catalog
    rel = _ref(order, "E~6", 2)
    u, v = cat.P(2), cat.I(2, 2)
    expect = {1: [(1, 1), (2, 2)], 2: [(1, 1), (2, 2)], 3: [(1, 1), (2, 1)]}
    for k, pairs in expect.items():
        mu = rel.perm[k - 1]
        got = [b.M for b in classify(order, u, v, tube=mu)]
        assert got == [_tube_sum(order, rel, k, pairs)]


def test_d8_tube_rows():
    order = order_for("D~8", 3)
    cat = order.catalog
    rel = _ref(order, "D~8", 3)
    u, v = cat.P(3), cat.I(7, 4)
    rows = {1: [(4, 1), (5, 5)], 2: [(1, 1), (2, 1)], 3: [(1, 1), (2, 1)]}
    for k, pairs in rows.items():
        got = [b.M for b in classify(order, u, v, tube=rel.perm[k - 1])]
        assert _tube_sum(order, rel, k, pairs) in got
    assert all(b.codim == 1 for b in classify(order, u, v, tube=rel.perm[0]))


def test_blocs_are_minimal_and_disjoint(e6):
    cat = e6.catalog
    u = cat.P(3)
    for v in [cat.I(3, 1), cat.I(2, 2), cat.P(5, 3)]:
        n = cat.msum([u, v])
        for b in classify(e6, u, v):
            assert e6.is_minimal(b.M, n)
            assert not {x for x, _ in b.M} & {u, v}


def _defect_one_closed_form(order, u, v):
    """Sums of regular indecomposables from pairwise different tubes with [U, top] = 1."""
    cat = order.catalog
    n = cat.msum([u, v])
    dim = n.dim
    per_tube = {}
    for t in cat.tubes:
        per_tube[t.mu] = [x for x in cat.regulars_up_to(dim, tubes=[t.mu])
                          if order.homs.hom(u, cat.top(x)) == 1]
    out = set()
    delta = cat.delta
    for choice in itertools.product(*[[None] + xs for xs in per_tube.values()]):
        parts = [x for x in choice if x is not None]
        rest = list(dim)
        for x in parts:
            rest = [a - b for a, b in zip(rest, x.dim)]
        if min(rest) < 0:
            continue
        h = rest[0] // delta[0] if delta[0] else 0
        if any(r != h * d for r, d in zip(rest, delta)):
            continue
        # homogeneous part: one module per tube, so a partition of h
        for lens in _partitions(h):
            homog = [cat.R(cat.t + 1 + j, 1, l) for j, l in enumerate(lens)]
            m = cat.canonical(cat.msum(parts + homog))
            if m != n:
                out.add(m)
    return out


def _partitions(h, top=None):
    if h == 0:
        yield []
        return
    top = h if top is None else top
    for a in range(min(h, top), 0, -1):
        for rest in _partitions(h - a, a):
            yield [a] + rest


@pytest.mark.parametrize("sink", [2, 3, 4])
def test_defect_one_closed_form(sink):
    order = order_for("A~3", sink)
    cat = order.catalog
    u = cat.P(sink)
    assert cat.defect(u) == -1
    seen = 0
    for k in range(3):
        for i in cat.quiver.vertices:
            v = cat.I(i, k)
            if cat.defect(v) != 1:
                continue
            n = cat.msum([u, v])
            blocs = {b.M for b in classify(order, u, v)}
            assert blocs == _defect_one_closed_form(order, u, v)
            assert blocs == {m for m in order.deformations(n) if m != n}
            assert all(b.codim == 1 for b in classify(order, u, v))
            seen += 1
    assert seen >= 4


def test_reduce_I_identity_and_delta(e6):
    cat = e6.catalog
    u = cat.P(3)
    checked = 0
    for v in [cat.I(3, 1), cat.I(2, 2), cat.I(3, 2)]:
        for b in classify(e6, u, v):
            r = reduce_I(e6, b, b.M, cat.msum([]))
            assert r.C == v and r.codim_drop == 0 and r.minimal
            for m1, m2 in directed_splits(cat, b.M):
                try:
                    r = reduce_I(e6, b, m1, m2)
                except ReductionError:
                    continue
                checked += 1
                assert r.delta >= 0
                assert r.delta == r.codim_drop
                assert r.minimal
    assert checked > 0


def test_reduce_I_rejects_bad_split(e6):
    cat = e6.catalog
    b = classify(e6, cat.P(3), cat.I(3, 1), tube=1)[0]
    with pytest.raises(ReductionError):
        reduce_I(e6, b, b.M, b.M)


def test_reduce_regular_target(e6):
    cat = e6.catalog
    u = cat.P(3)
    checked = 0
    two_delta = tuple(2 * d for d in cat.delta)
    for v in cat.regulars_up_to(two_delta):
        if cat.is_homogeneous(v.a) and v.a > cat.t + 1:
            continue
        for b in classify(e6, u, v):
            if b.M.part("I"):
                continue
            try:
                r = reduce_regular_target(e6, b)
            except ReductionError:
                continue
            checked += 1
            assert r.codim_drop == 0
            assert all(a <= d for a, d in zip(r.C.dim, cat.delta))
            assert r.bloc.codim == r.delta
    assert checked > 0


def test_codimension_audit_small_run(e6):
    cat = e6.catalog
    run = run_classification(e6, cat.P(3), target_family(cat, 2, ("I", "P", "R")), mode="general")
    rep = audit_codimension(e6, run)
    assert rep.ok and rep.checked == len(run.blocs)
    assert any(b.codim == 2 for b in run.blocs)
    reps = audit_structural_lemmas(e6, run)
    assert all(r.ok for r in reps.values()), {k: r.violations for k, r in reps.items() if not r.ok}


def test_dynkin_run_has_codim_one():
    order = order_for("A_3", 3)
    cat = order.catalog
    run = run_classification(order, cat.P(3), order._dynkin_indecs, mode="general")
    assert run.blocs and all(b.codim == 1 for b in run.blocs)


def test_multiplicity_example():
    order = order_for("E~8", 3)
    cat = order.catalog
    u, v = cat.P(3), cat.P(3, 15)
    m = cat.msum([cat.P(8, i) for i in range(11)] + [cat.P(8, 5)])
    n = cat.msum([u, v])
    assert order.is_minimal(m, n)
    b = make_bloc(order, u, v, m)
    assert b.codim == 1
    assert multiplicity_violations(order, b, cat.P(8, 5)) == []


def test_extension_set_for_delta_dimensional_target():
    order = order_for("E~7", 4)
    cat = order.catalog
    rel = _ref(order, "E~7", 4)
    mu, s = rel.to_ours(1, 2)
    u, v = cat.P(4), cat.R(mu, s, 4)
    assert v.dim == cat.delta
    n = cat.msum([u, v])
    elems = [m for m in order.deformations(n) if m != n]
    codims = {m: order.codim(n, m) for m in elems}
    assert sorted(set(codims.values())) == [1, 2, 3, 4, 5]
    assert [m for m, c in codims.items() if c == 5] == [cat.msum([cat.P(4, 3)])]
    pred = extension_set_K(order, u, v)
    got = set(most_generic_non_extensions(order, elems, pred))
    assert got == {
        cat.msum([cat.P(2, 3), cat.P(2, 1)]),
        cat.msum([cat.P(2, 4), cat.P(6)]),
        cat.msum([cat.P(7, 4), cat.P(8, 2), cat.P(1)]),
    }


def test_periodic_closure(e6):
    cat = e6.catalog
    p = cat.quiver.coxeter_period
    base = run_classification(e6, cat.P(3), target_family(cat, p - 1, ("I",)))
    closed = periodic_closure(e6, base, p + 1)
    assert len(closed.blocs) > len(base.blocs)
    for b in closed.blocs[len(base.blocs):]:
        assert b.provenance == "periodic-image-of"
        assert b.V.b <= p + 1
    with pytest.raises(Exception):
        periodic_closure(e6, run_classification(e6, cat.P(3), target_family(cat, 0, ("I",))), p)


def test_run_json_round_trip(e6):
    cat = e6.catalog
    rel = _ref(e6, "E~6", 3)
    run = run_classification(e6, cat.P(3), target_family(cat, 1), type_name="E~6", sink=3, relabel=rel)
    text = dump_run(run)
    order2, run2 = run_from_json(json.loads(text))
    assert dump_run(run2) == text
    assert render_table(order2, run2) == render_table(e6, run)
    assert "S_1(1)+S_2(1)+S_3(1)" in render_table(e6, run)
