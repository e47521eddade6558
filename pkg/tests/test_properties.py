"""Property-based checks of algebraic invariants over randomly drawn data."""

import math
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from discrete_hbl import oracle
from discrete_hbl.catalog import S_GRID
from discrete_hbl.constants import HblDatum, global_constant
from discrete_hbl.factored import FactoredValue
from discrete_hbl.groups import AbelianGroup, Homomorphism, kernel, quotient_group
from discrete_hbl.subgroups import enumerate_subgroups, image_subgroup, sum_and_intersection

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def finite_groups(draw, max_order=32):
    mods = draw(st.lists(st.integers(2, 8), max_size=3))
    while math.prod(mods) > max_order:
        mods.pop()
    return AbelianGroup.finite(*mods)


@st.composite
def homomorphisms(draw, D, max_target=8):
    C = draw(finite_groups(max_order=max_target))
    rows = []
    for e in C.moduli:
        rows.append(tuple(
            (e // math.gcd(d, e)) * draw(st.integers(0, math.gcd(d, e) - 1)) for d in D.moduli
        ))
    return Homomorphism(D, C, tuple(rows))


@st.composite
def data(draw):
    D = draw(finite_groups())
    m = draw(st.integers(1, 3))
    maps = tuple(draw(homomorphisms(D)) for _ in range(m))
    s = tuple(draw(st.sampled_from(S_GRID)) for _ in range(m))
    return HblDatum(D, maps), s


@SETTINGS
@given(finite_groups(), st.data())
def test_homomorphism_laws(G, dd):
    phi = dd.draw(homomorphisms(G))
    els = list(G.elements())
    a, b = dd.draw(st.sampled_from(els)), dd.draw(st.sampled_from(els))
    assert phi(a + b) == phi(a) + phi(b)
    K = kernel(phi)
    assert K.order * image_subgroup(phi, enumerate_subgroups(G)[-1]).order == G.order


@SETTINGS
@given(finite_groups(max_order=24), st.data())
def test_lattice_closed_under_sum_and_meet(G, dd):
    lat = enumerate_subgroups(G)
    keys = {H.key for H in lat}
    a = dd.draw(st.sampled_from(lat.subgroups))
    b = dd.draw(st.sampled_from(lat.subgroups))
    total, meet = sum_and_intersection(a, b)
    assert total.key in keys and meet.key in keys
    assert total.order * meet.order == a.order * b.order
    Q, pi = quotient_group(G, a)
    assert Q.order * a.order == G.order
    assert all(pi(x).is_zero for x in a.elements())


@SETTINGS
@given(finite_groups(max_order=24))
def test_count_is_isomorphism_invariant(G):
    canon = AbelianGroup.finite(*G.invariant_factors)
    assert len(enumerate_subgroups(G)) == len(enumerate_subgroups(canon))
    assert canon.order == G.order


@SETTINGS
@given(data())
def test_constant_bounds_and_monotonicity(ds):
    d, s = ds
    A = global_constant(d, s).value
    assert FactoredValue.one() <= A <= d.domain.order
    # raising one exponent can only lower the constant
    for j in range(d.m):
        if s[j] < 1:
            t = s[:j] + (Fraction(1),) + s[j + 1:]
            assert global_constant(d, t).value <= A


@SETTINGS
@given(data(), st.data())
def test_log_convexity(ds, dd):
    d, s = ds
    t = tuple(dd.draw(st.sampled_from(S_GRID)) for _ in range(d.m))
    mid = tuple((a + b) / 2 for a, b in zip(s, t))
    a, b, c = (global_constant(d, x).value for x in (s, t, mid))
    assert c * c <= a * b


@SETTINGS
@given(data())
def test_indicator_search_equals_constant(ds):
    d, s = ds
    assert oracle.indicator_search(d, s).value == global_constant(d, s).value


@SETTINGS
@given(data(), st.integers(0, 2**32 - 1))
def test_ascent_upper_bound(ds, seed):
    d, s = ds
    A = float(global_constant(d, s).value)
    tr = oracle.alternating_ascent(d, s, seed=seed, max_iters=50)
    assert max(tr.ratios) <= A * (1 + 1e-9)
