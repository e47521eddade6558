import itertools

import pytest

from discrete_hbl.errors import InfiniteSubgroupError, LatticeCapError
from discrete_hbl.groups import AbelianGroup, Homomorphism, Subgroup
from discrete_hbl.subgroups import (
    enumerate_subgroups,
    image_subgroup,
    present,
    sum_and_intersection,
)

from _util import abelian_groups


@pytest.mark.parametrize(
    "moduli, count",
    [((), 1), ((2, 2), 5), ((6,), 4), ((4, 4), 15), ((2, 2, 2), 16), ((2, 2, 2, 2), 67), ((4, 8), 22), ((2, 6), 10)],
)
def test_known_counts(moduli, count):
    assert len(enumerate_subgroups(AbelianGroup.finite(*moduli))) == count


def test_z6_orders_and_sorting():
    lat = enumerate_subgroups(AbelianGroup.cyclic(6))
    assert [H.order for H in lat] == [1, 2, 3, 6]
    keys = [H.sort_key() for H in lat]
    assert keys == sorted(keys)


def test_cap_and_infinite():
    with pytest.raises(LatticeCapError) as err:
        enumerate_subgroups(AbelianGroup.finite(4, 4), max_order=8)
    assert err.value.needed == 16
    with pytest.raises(InfiniteSubgroupError):
        enumerate_subgroups(AbelianGroup.free(1))


def test_as_given_presentation_matches_canonical_count():
    # Z_2 x Z_3 presented non-canonically still has the four subgroups of Z_6
    assert len(enumerate_subgroups(AbelianGroup.finite(2, 3))) == 4
    assert len(enumerate_subgroups(AbelianGroup.finite(3, 2, 2))) == len(enumerate_subgroups(AbelianGroup.finite(2, 6)))


def _span_by_pairs(G):
    # every subgroup of a group with at most two invariant factors needs at most two generators
    out = set()
    els = list(G.elements())
    for a, b in itertools.combinations_with_replacement(els, 2):
        out.add(Subgroup.generated_by(G, [a, b]).key)
    return out


@pytest.mark.parametrize("G", [g for n in (18, 24, 27, 32) for g in abelian_groups(n) if len(g.moduli) <= 2])
def test_rank_two_groups_against_pair_spans(G):
    assert {H.key for H in enumerate_subgroups(G)} == _span_by_pairs(G)


def test_inclusion_relation():
    lat = enumerate_subgroups(AbelianGroup.finite(2, 2))
    pairs = set(lat.inclusion)
    assert len(pairs) == 3 + 3 + 1  # 0 < lines, lines < G, 0 < G


def test_sum_intersection_and_images():
    G = AbelianGroup.finite(4, 2)
    a = Subgroup.generated_by(G, [(2, 0)])
    b = Subgroup.generated_by(G, [(0, 1)])
    total, meet = sum_and_intersection(a, b)
    assert total.order == 4 and meet.is_trivial
    phi = Homomorphism(G, AbelianGroup.cyclic(2), ((1, 1),))
    assert image_subgroup(phi, total).order == 2
    Z2 = AbelianGroup.free(2)
    x = Subgroup.generated_by(Z2, [(2, 0)])
    y = Subgroup.generated_by(Z2, [(3, 0), (0, 1)])
    t, m = sum_and_intersection(x, y)
    assert t.is_whole and m == Subgroup.generated_by(Z2, [(6, 0)])


def test_presentation_embeds():
    G = AbelianGroup.finite(4, 4)
    H = Subgroup.generated_by(G, [(2, 0), (1, 1)])
    P, emb = present(H)
    assert P.order == H.order
    imgs = {emb(x).coords for x in P.elements()}
    assert imgs == {x.coords for x in H.elements()}
