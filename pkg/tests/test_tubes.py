import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tamedeg.blocs import classify
from tamedeg.calibration import relabel_for
from tamedeg.oracle import middle_terms
from tamedeg.tubes import (
    TubeCategory,
    TubeError,
    e_power,
    extension_poset,
    generic_extension_e,
    is_extension_regular_pair,
    make_bloc,
    periodic_shift,
    reduce_bloc_by_partial_socle,
    reduce_bloc_by_socle,
    shift_tube,
    socle_quotient_V,
)

from conftest import order_for, tube_order


def _types_to_sums(cat, mt, split):
    out = set()
    for key in mt:
        m = cat.msum((cat.R(1, a, b), c) for a, b, c in key)
        if m != split:
            out.add(m)
    return out


def test_extension_poset_example(tube4):
    cat = tube4.catalog
    u, v = cat.R(1, 1, 10), cat.R(1, 3, 10)
    ep = extension_poset(cat, u, v)
    assert [m.text() for m in ep.E_set] == ["E1_1(12)+E1_3(8)", "E1_1(16)+E1_3(4)", "E1_1(20)"]
    assert ep.minimal_codim == 1
    assert tube4.codim(cat.msum([u, v]), ep.minimal) == 1


def test_extension_poset_homogeneous():
    cat = TubeCategory(1)
    for l in range(1, 6):
        x = cat.R(1, 1, l)
        ep = extension_poset(cat, x, x)
        assert ep.S_set == list(range(l))
        expect = cat.msum([y for y in (cat.R(1, 1, l + 1), cat.R(1, 1, l - 1) if l > 1 else None) if y])
        assert ep.minimal == expect and ep.minimal_codim == 2


def test_extension_poset_empty():
    cat = TubeCategory(4)
    ep = extension_poset(cat, cat.R(1, 1, 1), cat.R(1, 1, 1))
    assert ep.E_set == [] and ep.minimal is None


def test_extension_poset_different_tubes(e6):
    cat = e6.catalog
    with pytest.raises(TubeError):
        extension_poset(cat, cat.R(1, 1, 1), cat.R(2, 1, 1))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_extension_poset_matches_oracle(p, data):
    s = data.draw(st.integers(1, p))
    t = data.draw(st.integers(1, p))
    k = data.draw(st.integers(1, 7))
    l = data.draw(st.integers(1, 7))
    order = tube_order(p)
    cat = order.catalog
    u, v = cat.R(1, s, k), cat.R(1, t, l)
    split = cat.msum([u, v])
    ep = extension_poset(cat, u, v)
    assert _types_to_sums(cat, middle_terms(p, (s, k), (t, l)), split) == set(ep.E_set)
    # order reversing: larger m gives a smaller middle term
    for a, b in zip(ep.E_set, ep.E_set[1:]):
        assert order.lt(b, a)
    if ep.minimal is not None:
        assert order.codim(split, ep.minimal) == ep.minimal_codim
        assert ep.minimal == ep.E_set[0]


def test_top_of_chain_need_not_be_minimal():
    # an extension in the opposite direction can sit between U + V and the top of E(V, U)
    order = tube_order(2)
    cat = order.catalog
    u, v = cat.R(1, 1, 3), cat.R(1, 2, 2)
    split = cat.msum([u, v])
    ep = extension_poset(cat, u, v)
    assert ep.minimal == cat.parse("E1_1(5)") and ep.minimal_codim == 2
    other = extension_poset(cat, v, u)
    assert any(order.lt(ep.minimal, m) and order.lt(m, split) for m in other.E_set)


def test_is_extension_regular_pair(tube4):
    cat = tube4.catalog
    assert is_extension_regular_pair(cat, cat.parse("E1_1(12)+E1_3(8)"), cat.R(1, 1, 10), cat.R(1, 3, 10))
    u, v = cat.R(1, 1, 4), cat.R(1, 3, 4)
    n = cat.msum([u, v])
    assert is_extension_regular_pair(cat, n, u, v)
    below = [m for m in tube4.deformations(n, tube=1)
             if not is_extension_regular_pair(cat, m, u, v)]
    assert below
    for m in below:
        assert m != n


def test_e_on_tube_modules(e6):
    cat = e6.catalog
    for t in cat.tubes:
        p = t.period
        for s in range(1, p + 1):
            x = cat.R(t.mu, s, 2)
            y = generic_extension_e(e6, x, t.mu)
            assert y.l == 3 and cat.top(y) == cat.top(x)
            z = e_power(e6, x, t.mu, p)
            assert cat.top(z) == cat.top(x)
            assert z.dim == tuple(a + b for a, b in zip(x.dim, cat.delta))
            assert generic_extension_e(e6, x, t.mu % len(cat.tubes) + 1) == x or len(cat.tubes) == 1
    assert generic_extension_e(e6, cat.P(2, 3), 1) == cat.P(2, 3)


def test_e_power_is_tau_shift_on_preinjectives(e6):
    cat = e6.catalog
    q = cat.quiver
    p = q.coxeter_period
    checked = 0
    for i in q.vertices:
        for k in range(3):
            x = cat.I(i, k)
            for t in cat.tubes:
                assert e_power(e6, x, t.mu, q.epsilon * t.period) == cat.tau_power(x, p)
            checked += 1
    assert checked >= 20


def test_socle_quotient_round_trip(e6):
    cat = e6.catalog
    for i in cat.quiver.vertices:
        for k in range(1, 4):
            v = cat.I(i, k)
            for t in cat.tubes:
                try:
                    v2 = socle_quotient_V(e6, v, t.mu)
                except TubeError:
                    continue
                assert generic_extension_e(e6, v2, t.mu) == v
                assert cat.defect(v2) == cat.defect(v)


def test_socle_reduction_e8():
    order = order_for("E~8", 9)
    cat = order.catalog
    rel = relabel_for("E~8", 9, [t.period for t in cat.tubes])

    def S(s, l=1):
        mu, ours = rel.to_ours(1, s)
        return cat.R(mu, ours, l)

    u, v = cat.P(9), cat.I(9, 7)
    m = cat.msum([S(2), S(3, 2), S(5)])
    assert order.is_minimal(m, cat.msum([u, v]))
    b = make_bloc(order, u, v, m)
    r = reduce_bloc_by_socle(order, b)
    assert r.V == cat.I(9, 1)
    assert r.M == cat.msum([S(4)])
    assert r.codim == b.codim
    assert r.provenance == "reduced-from" and r.parent is b


def test_socle_reduction_rejects_semisimple(e6):
    cat = e6.catalog
    u, v = cat.P(3), cat.I(3, 1)
    b = make_bloc(e6, u, v, cat.parse("E1_1(1)+E1_2(1)+E1_3(1)"))
    with pytest.raises(TubeError):
        reduce_bloc_by_socle(e6, b)


def test_socle_reduction_preserves_codim(e6):
    cat = e6.catalog
    u = cat.P(3)
    seen = 0
    for k in range(2, 5):
        for i in cat.quiver.vertices:
            for t in cat.tubes:
                for b in classify(e6, u, cat.I(i, k), tube=t.mu):
                    try:
                        r = reduce_bloc_by_socle(e6, b)
                    except TubeError:
                        continue
                    seen += 1
                    assert r.codim == b.codim
                    assert e6.is_minimal(r.M, cat.msum([r.U, r.V]))
    assert seen > 0


def test_partial_socle_reduction(e6):
    cat = e6.catalog
    u, v = cat.P(3), cat.I(3, 2)
    tried = 0
    for t in cat.tubes:
        for b in classify(e6, u, v, tube=t.mu):
            for j in range(1, t.period + 1):
                try:
                    r = reduce_bloc_by_partial_socle(e6, b, [j])
                except TubeError:
                    continue
                tried += 1
                assert r.M.dim == tuple(a + c for a, c in zip(u.dim, r.V.dim))
    assert tried >= 0


def test_periodic_shift_minimal(e6):
    cat = e6.catalog
    q = cat.quiver
    u = cat.P(3)
    shifted = 0
    for k in range(0, 3):
        for i in q.vertices:
            for t in cat.tubes:
                for b in classify(e6, u, cat.I(i, k), tube=t.mu):
                    if shift_tube(e6, b) is None:
                        continue
                    img = periodic_shift(e6, b)
                    assert img.V == cat.tau_power(b.V, q.coxeter_period)
                    assert img.M.dim == tuple(a + c for a, c in zip(u.dim, img.V.dim))
                    assert e6.is_minimal(img.M, cat.msum([u, img.V]))
                    shifted += 1
    assert shifted >= 3


def test_periodic_shift_homogeneous():
    order = order_for("E~6", 3)
    cat = order.catalog
    u, v = cat.P(3), cat.I(2)
    b = make_bloc(order, u, v, cat.msum([cat.P(1)]))
    assert order.is_minimal(b.M, cat.msum([u, v]))
    img = periodic_shift(order, b, homogeneous=True)
    assert img.M.dim == tuple(a + c for a, c in zip(u.dim, img.V.dim))
    reg = img.M.part("R")
    assert len(reg) == 1 and cat.is_homogeneous(reg[0][0].a)
