import random
from fractions import Fraction

import numpy as np
import pytest

from discrete_hbl import oracle
from discrete_hbl.catalog import catalog, klein_projections, random_datum, random_exponents, trivial_datum, z4_mod2
from discrete_hbl.constants import HblDatum, closed_form_single_index, global_constant, local_constant
from discrete_hbl.errors import BudgetExceededError, DegenerateAscentError, PreconditionError
from discrete_hbl.factored import FactoredValue
from discrete_hbl.groups import AbelianGroup, Homomorphism, Subgroup
from discrete_hbl.subgroups import enumerate_subgroups

from _util import brute_force_indicator_max

H = Fraction(1, 2)


def test_evaluate_form_examples():
    d = klein_projections()
    assert oracle.evaluate_form(d, ([1, 1], [1, 1])) == 4
    assert oracle.evaluate_form(d, ([0, 1], [0, 1])) == 1
    G = d.domain
    whole = oracle.subgroup_indicators(d, Subgroup.whole(G))
    assert oracle.evaluate_form(d, whole) == 4
    assert isinstance(oracle.evaluate_form(d, ([1.0, 0.5], [1, 1])), float)


def test_ratio_examples():
    d = klein_projections()
    assert oracle.ratio(d, (H, H), ([1, 1], [1, 1]), exact=True) == 2
    assert oracle.ratio(d, (H, H), ([1, 1], [1, 1])) == pytest.approx(2.0)
    zero = oracle.subgroup_indicators(d, Subgroup.trivial(d.domain))
    assert oracle.ratio(d, (H, H), zero, exact=True) == 1
    with pytest.raises(ValueError):
        oracle.ratio(d, (H, H), ([0, 0], [1, 1]))


def test_ratio_sup_norm_and_irrational_inputs():
    d = z4_mod2()
    assert oracle.ratio(d, (0,), ([1, 1],), exact=True) == 4
    with pytest.raises(PreconditionError):
        oracle.ratio(d, (Fraction(2, 3),), ([2, 1],), exact=True)


def test_ratio_scale_invariance():
    rng = np.random.default_rng(5)
    for e in catalog()[:30]:
        f = oracle.random_init(e.datum, rng)
        base = oracle.ratio(e.datum, e.s, f)
        scaled = tuple(fj * c for fj, c in zip(f, rng.uniform(0.1, 10, size=len(f))))
        assert oracle.ratio(e.datum, e.s, scaled) == pytest.approx(base, rel=1e-12)


def _fan(d, Hs):
    # elements whose every image lands in the image of Hs
    imgs = [set(cm[Hs.codes].tolist()) for cm in (phi.code_map for phi in d.maps)]
    return sum(all(phi.code_map[x] in I for phi, I in zip(d.maps, imgs)) for x in range(d.domain.order))


def test_subgroup_indicators_bound_local_constants():
    # image indicators count the whole fan over H, so they give at least A(H, s),
    # with equality exactly when that fan is H itself
    for e in catalog()[:40]:
        d = e.datum
        for Hs in enumerate_subgroups(d.domain):
            r = oracle.ratio(d, e.s, oracle.subgroup_indicators(d, Hs), exact=True)
            a = local_constant(d, Hs, e.s)
            assert r >= a
            assert (r == a) == (_fan(d, Hs) == Hs.order)


def test_klein_diagonal_fan():
    d = klein_projections()
    diag = Subgroup.generated_by(d.domain, [(1, 1)])
    assert local_constant(d, diag, (H, H)) == 1
    assert oracle.ratio(d, (H, H), oracle.subgroup_indicators(d, diag), exact=True) == 2


def test_indicator_search_examples():
    r = oracle.indicator_search(klein_projections(), (H, H))
    assert r.value == 2 and r.sets == ((0, 1), (0, 1)) and r.space == 9
    r = oracle.indicator_search(z4_mod2(), (H,))
    assert str(r.value) == "2^(3/2)" and r.sets == ((0, 1),)
    G = AbelianGroup.finite(4, 2)
    d = HblDatum(G, (Homomorphism(G, AbelianGroup.cyclic(4), ((1, 0),)), Homomorphism(G, AbelianGroup.cyclic(2), ((0, 1),))))
    r = oracle.indicator_search(d, (0, 0))
    assert r.value == G.order and r.sets == ((0, 1, 2, 3), (0, 1))


def test_indicator_search_matches_brute_force():
    rng = random.Random(11)
    for _ in range(40):
        d = random_datum(rng, max_order=16, max_target=6)
        s = random_exponents(rng, d.m)
        assert oracle.indicator_search(d, s).value == brute_force_indicator_max(d, s)


def test_indicator_budget():
    with pytest.raises(BudgetExceededError):
        oracle.indicator_search(klein_projections(), (H, H), budget=8)


def test_ascent_from_witness_never_decreases():
    for e in catalog():
        rep = global_constant(e.datum, e.s)
        tr = oracle.alternating_ascent(e.datum, e.s, oracle.subgroup_indicators(e.datum, rep.witness))
        assert tr.ratios[0] == pytest.approx(float(rep.value), rel=1e-12)
        assert all(b >= a * (1 - 1e-12) for a, b in zip(tr.ratios, tr.ratios[1:]))
        assert max(tr.ratios) <= float(rep.value) * (1 + 1e-9)


def test_ascent_monotone_from_random_starts():
    rng = np.random.default_rng(3)
    for e in catalog():
        tr = oracle.alternating_ascent(e.datum, e.s, oracle.random_init(e.datum, rng))
        assert all(b >= a * (1 - 1e-12) for a, b in zip(tr.ratios, tr.ratios[1:])), e.name


@pytest.mark.parametrize("s1", [Fraction(0), Fraction(1, 4), H, Fraction(3, 4), Fraction(1)])
def test_ascent_limit_single_index(s1):
    d = z4_mod2()
    tr = oracle.alternating_ascent(d, (s1,), seed=1)
    assert tr.final_ratio == pytest.approx(float(closed_form_single_index(d, (s1,), 0)), rel=1e-6)


def test_ascent_trivial_and_degenerate():
    tr = oracle.alternating_ascent(trivial_datum(), (H,), seed=0)
    assert tr.ratios[0] == 1 and tr.converged
    G = AbelianGroup.cyclic(2)
    d = HblDatum(G, tuple(Homomorphism.identity(G) for _ in range(3)))
    # f_2 f_3 vanishes everywhere, so the first fiber sums are all zero
    with pytest.raises(DegenerateAscentError):
        oracle.alternating_ascent(d, (H, H, H), ([1.0, 0.0], [1.0, 0.0], [0.0, 1.0]))


def test_fiber_reduce_examples():
    d = klein_projections()
    f = ([Fraction(1), Fraction(4)], [Fraction(9), Fraction(1)])
    r = oracle.fiber_reduce(d, Subgroup.trivial(d.domain), f, (H, H))
    assert [list(x) for x in r.functions] == [[1.0, 4.0], [9.0, 1.0]]
    whole = oracle.fiber_reduce(d, Subgroup.whole(d.domain), f, (H, H))
    assert [x.tolist() for x in whole.functions] == [[pytest.approx(17 ** 0.5)], [pytest.approx(82 ** 0.5)]]
    norms = whole.norms((H, H))
    assert norms == tuple(oracle.norm(fj, H, exact=True) for fj in f)
    # indicator of a coset of G'_j = Z_2 inside Z_4 -> |G'_j|^s at one point
    G = AbelianGroup.finite(4)
    d4 = HblDatum(G, (Homomorphism.identity(G),))
    sub = Subgroup.generated_by(G, [(2,)])
    r = oracle.fiber_reduce(d4, sub, ([0, 1, 0, 1],), (Fraction(1, 3),))
    vals = r.functions[0].tolist()
    assert sorted(vals) == [0, pytest.approx(2 ** (1 / 3))]
    with pytest.raises(PreconditionError):
        oracle.fiber_reduce(d, Subgroup.trivial(d.domain), f, (0, H))


def test_fiber_reduce_dominates_grouped_sum():
    # sum_x prod f_j <= B(sub-datum) * sum_t prod F_j over the quotient
    from discrete_hbl.constants import restrict_datum

    rng = random.Random(17)
    nprng = np.random.default_rng(17)
    for e in catalog()[:40]:
        s = e.s
        if any(x == 0 for x in s):
            continue
        d = e.datum
        lat = enumerate_subgroups(d.domain)
        sub = lat[rng.randrange(len(lat))]
        f = oracle.random_init(d, nprng)
        red = oracle.fiber_reduce(d, sub, f, s)
        lhs = oracle.evaluate_form(d, f)
        rhs = float(global_constant(restrict_datum(d, sub), s).value) * oracle.evaluate_form(red.datum, red.functions)
        assert lhs <= rhs * (1 + 1e-9)


def test_verify_examples():
    v = oracle.verify_theorem(klein_projections(), (H, H))
    assert v.passed and v.max_ratio == pytest.approx(2.0) and v.witness_ratio == 2
    v = oracle.verify_theorem(trivial_datum(), (H,))
    assert v.passed and v.max_ratio == 1
    d = z4_mod2()
    for s1 in (0, Fraction(1, 4), H, Fraction(3, 4), 1):
        v = oracle.verify_theorem(d, (s1,))
        assert v.passed
        assert v.max_ratio == pytest.approx(float(closed_form_single_index(d, (s1,), 0)), rel=1e-6)


def test_verify_partial_on_budget():
    v = oracle.verify_theorem(klein_projections(), (H, H), budget=0)
    assert v.partial and v.indicator is None and v.passed


def test_verify_is_reproducible():
    e = catalog()[5]
    a = oracle.verify_theorem(e.datum, e.s, seed=3)
    b = oracle.verify_theorem(e.datum, e.s, seed=3)
    assert [t.ratios for t in a.ascent] == [t.ratios for t in b.ascent]
