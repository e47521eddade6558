"""Exact structural constants of abelian group HBL data.

For a datum ``(G, (G_j), (phi_j))`` and exponents ``s`` in ``[0, 1]^m`` the
local constant of a finite subgroup ``H`` is

    A(H, s) = |H| * prod_j |phi_j(H)| ** (-s_j)

and the global constant is its maximum over all finite subgroups.  That
maximum is the best constant in

    sum_x prod_j f_j(phi_j(x)) <= C * prod_j ||f_j||_{1/s_j}

for finite data, and for finitely generated data whose exponents satisfy the
rank condition.  All values are :class:`FactoredValue` and every comparison is
exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AmbientMismatchError,
    InfiniteSubgroupError,
    MembershipInconclusiveError,
    PreconditionError,
)
from .factored import FactoredValue
from .groups import AbelianGroup, Homomorphism, Subgroup, kernel, quotient_data, torsion_subgroup
from .subgroups import (
    DEFAULT_MAX_ORDER,
    SubgroupPresentation,
    enumerate_subgroups,
    image_subgroup,
    sum_and_intersection,
)

ExponentVector = tuple[Fraction, ...]

_RATIONAL = re.compile(r"\s*(-?\d+)\s*(?:/\s*(\d+))?\s*")


def parse_exponent(value) -> Fraction:
    """Exact rational exponent; floats and decimal strings are rejected."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"exponent {value!r} must be an exact rational such as '1/2'")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL.fullmatch(value)
        if not m:
            raise ValueError(f"exponent {value!r} must be written as an exact rational 'p/q' (e.g. '1/2')")
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    raise ValueError(f"unsupported exponent {value!r}")


def exponent_vector(s: Iterable, m: int | None = None) -> ExponentVector:
    out = tuple(parse_exponent(v) for v in s)
    if m is not None and len(out) != m:
        raise ValueError(f"expected {m} exponents, got {len(out)}")
    for v in out:
        if not 0 <= v <= 1:
            raise ValueError(f"exponent {v} is outside [0, 1]")
    return out


@dataclass(frozen=True)
class HblDatum:
    domain: AbelianGroup
    maps: tuple[Homomorphism, ...]
    labels: tuple[str | None, ...] = ()
    # bookkeeping for derived data; ignored by equality
    embedding: Homomorphism | None = field(default=None, compare=False, repr=False)
    projection: Homomorphism | None = field(default=None, compare=False, repr=False)
    target_projections: tuple[Homomorphism, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        maps = tuple(self.maps)
        object.__setattr__(self, "maps", maps)
        if not maps:
            raise ValueError("an HBL datum needs at least one homomorphism")
        for j, phi in enumerate(maps):
            if phi.domain != self.domain:
                raise AmbientMismatchError(f"map {j} has domain {phi.domain}, expected {self.domain}")
        labels = tuple(self.labels) or (None,) * len(maps)
        if len(labels) != len(maps):
            raise ValueError("one label per map")
        object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def targets(self) -> tuple[AbelianGroup, ...]:
        return tuple(phi.codomain for phi in self.maps)

    @property
    def is_finite(self) -> bool:
        return self.domain.is_finite

    def image_orders(self, H: Subgroup) -> tuple[int, ...]:
        return tuple(image_subgroup(phi, H).order for phi in self.maps)

    def check_exponents(self, s) -> ExponentVector:
        return exponent_vector(s, self.m)


@dataclass(frozen=True)
class ConstantReport:
    value: FactoredValue | None
    witness: Subgroup | None
    attained: bool
    float_value: float | None
    status: str = "finite"
    membership: object = field(default=None, compare=False)


@lru_cache(maxsize=4096)
def _fv(n: int) -> FactoredValue:
    return FactoredValue.from_int(n)


def local_from_orders(order: int, image_orders: Sequence[int], s: Sequence[Fraction]) -> FactoredValue:
    out = _fv(order)
    for n, sj in zip(image_orders, s):
        if sj and n > 1:
            out = out * _fv(n) ** (-sj)
    return out


def local_constant(datum: HblDatum, H: Subgroup, s) -> FactoredValue:
    """``|H| * prod_j |phi_j(H)|^(-s_j)`` for a finite subgroup ``H``."""
    s = datum.check_exponents(s)
    if H.ambient != datum.domain:
        raise AmbientMismatchError("subgroup is not in the datum's source group")
    if not H.is_finite:
        raise InfiniteSubgroupError("local constants are defined for finite subgroups only")
    return local_from_orders(H.order, datum.image_orders(H), s)


@dataclass(frozen=True)
class Profile:
    """Orders attached to each subgroup, independent of the exponents."""

    subgroups: tuple[Subgroup, ...]
    orders: tuple[int, ...]
    image_orders: tuple[tuple[int, ...], ...]
    # first subgroup (in lattice order) for each distinct (order, image orders)
    representatives: tuple[tuple[int, tuple[int, ...], int], ...]


@lru_cache(maxsize=256)
def subgroup_profile(datum: HblDatum, max_order: int = DEFAULT_MAX_ORDER) -> Profile:
    lattice = enumerate_subgroups(datum.domain, max_order)
    orders, images, reps, seen = [], [], [], {}
    cmaps = [phi.code_map for phi in datum.maps]
    for i, H in enumerate(lattice):
        img = tuple(len(np.unique(cm[H.codes])) for cm in cmaps)
        orders.append(H.order)
        images.append(img)
        key = (H.order, img)
        if key not in seen:
            seen[key] = i
            reps.append((H.order, img, i))
    return Profile(lattice.subgroups, tuple(orders), tuple(images), tuple(reps))


def global_constant(datum: HblDatum, s, max_order: int = DEFAULT_MAX_ORDER) -> ConstantReport:
    """Maximum of the local constant over the whole subgroup lattice.

    The witness is the smallest maximizing subgroup, ties broken by the
    lexicographic canonical form.
    """
    s = datum.check_exponents(s)
    if not datum.is_finite:
        raise InfiniteSubgroupError("global_constant needs a finite source group; use optimal_constant")
    prof = subgroup_profile(datum, max_order)
    best, best_idx = None, None
    for order, img, i in prof.representatives:
        v = local_from_orders(order, img, s)
        c = 1 if best is None else v.compare(best)
        # representatives are in lattice order, so the first maximum is the witness
        if c > 0:
            best, best_idx = v, i
    return ConstantReport(best, prof.subgroups[best_idx], True, float(best))


def optimal_constant(
    datum: HblDatum,
    s,
    max_order: int = DEFAULT_MAX_ORDER,
    extra_subgroups: Sequence[Subgroup] = (),
) -> ConstantReport:
    """The best constant of the multilinear inequality.

    Finite data: equal to :func:`global_constant`.  Finitely generated data:
    the global constant of the torsion datum, provided the rank condition is
    verified over the checked family of subgroups; otherwise the report has
    status ``"not verified finite"`` and no value.
    """
    s = datum.check_exponents(s)
    if datum.is_finite:
        return global_constant(datum, s, max_order)
    from .polytope import membership_P

    mem = membership_P(datum, s, extra_subgroups)
    if mem.status == "inconclusive":
        raise MembershipInconclusiveError(mem.reason)
    if mem.status != "member":
        return ConstantReport(None, None, False, None, "not verified finite", mem)
    tors, _ = torsion_split(datum)
    rep = global_constant(tors, s, max_order)
    witness = image_subgroup(tors.embedding, rep.witness) if tors.embedding is not None else rep.witness
    return ConstantReport(rep.value, witness, True, rep.float_value, "member (verified family)", mem)


def restrict_datum(datum: HblDatum, sub: Subgroup) -> HblDatum:
    """The sub-datum ``phi_j : G' -> phi_j(G')`` on presentations of ``G'`` and its images."""
    if sub.ambient != datum.domain:
        raise AmbientMismatchError("subgroup is not in the datum's source group")
    pres = SubgroupPresentation(sub)
    P = pres.group
    maps = []
    for phi in datum.maps:
        tp = SubgroupPresentation(image_subgroup(phi, sub))
        images = [tp.preimage(phi(pres.embedding(P.gen(i)))) for i in range(P.ngens)]
        maps.append(Homomorphism.from_images(P, tp.group, images))
    return HblDatum(P, tuple(maps), datum.labels, embedding=pres.embedding)


def quotient_datum(datum: HblDatum, sub: Subgroup) -> HblDatum:
    """The induced datum ``psi_j : G/G' -> G_j / phi_j(G')``."""
    if sub.ambient != datum.domain:
        raise AmbientMismatchError("subgroup is not in the datum's source group")
    q = quotient_data(datum.domain, sub)
    maps, tprojs = [], []
    for phi in datum.maps:
        tq = quotient_data(phi.codomain, image_subgroup(phi, sub))
        images = [tq.projection(phi(lift)) for lift in q.lifts]
        maps.append(Homomorphism.from_images(q.group, tq.group, images))
        tprojs.append(tq.projection)
    return HblDatum(q.group, tuple(maps), datum.labels, projection=q.projection, target_projections=tuple(tprojs))


def kernel_intersection(datum: HblDatum, indices: Iterable[int] | None = None) -> Subgroup:
    """Intersection of ``Ker(phi_j)`` over ``indices`` (all maps by default)."""
    idx = range(datum.m) if indices is None else list(indices)
    out = Subgroup.whole(datum.domain)
    for j in idx:
        _, out = sum_and_intersection(out, kernel(datum.maps[j]))
    return out


def kernel_intersection_bound(datum: HblDatum) -> int:
    """``|Ker(phi_1) & ... & Ker(phi_m)|``, a lower bound for the global constant at every ``s``.

    Raises :class:`InfiniteSubgroupError` when the intersection is infinite,
    in which case the global constant is infinite for every ``s``.
    """
    K = kernel_intersection(datum)
    if not K.is_finite:
        raise InfiniteSubgroupError("the kernels intersect in an infinite subgroup")
    return K.order


def closed_form_single_index(datum: HblDatum, s, i: int) -> FactoredValue:
    """``|G|^(1-s_i) |Ker phi_i|^(s_i)`` when every other exponent vanishes."""
    s = datum.check_exponents(s)
    if not datum.is_finite:
        raise PreconditionError("closed form needs a finite source group")
    if any(sj for j, sj in enumerate(s) if j != i):
        raise PreconditionError(f"exponents other than index {i} must all be 0")
    K = kernel(datum.maps[i])
    return _fv(datum.domain.order) ** (1 - s[i]) * _fv(K.order) ** s[i]


def closed_form_injective(datum: HblDatum, s) -> FactoredValue | None:
    """1 when the kernels of the maps with exponent 1 meet trivially, else None."""
    s = datum.check_exponents(s)
    K = kernel_intersection(datum, [j for j, sj in enumerate(s) if sj == 1])
    if K.is_trivial:
        return FactoredValue.one()
    return None


def torsion_split(datum: HblDatum) -> tuple[HblDatum, HblDatum]:
    """``(torsion datum, quotient datum)`` for the torsion subgroup of the source."""
    G = datum.domain
    T = torsion_subgroup(G)
    if G.is_finite:
        return datum, quotient_datum(datum, T)
    tors = restrict_datum(datum, T)
    if T.is_trivial:
        return tors, datum
    return tors, quotient_datum(datum, T)


@dataclass(frozen=True)
class FactorizationReport:
    local: FactoredValue  # A(G', s)
    sub: FactoredValue  # constant of the sub-datum
    quotient: FactoredValue  # constant of the quotient datum
    full: FactoredValue  # constant of the datum
    hypothesis: bool
    inequality: bool

    @property
    def consistent(self) -> bool:
        return self.inequality or not self.hypothesis


def factorization_check(datum: HblDatum, s, sub: Subgroup, max_order: int = DEFAULT_MAX_ORDER) -> FactorizationReport:
    s = datum.check_exponents(s)
    if not datum.is_finite:
        raise PreconditionError("factorization check needs a finite source group")
    local = local_constant(datum, sub, s)
    sub_c = global_constant(restrict_datum(datum, sub), s, max_order).value
    quot_c = global_constant(quotient_datum(datum, sub), s, max_order).value
    full = global_constant(datum, s, max_order).value
    return FactorizationReport(local, sub_c, quot_c, full, local == sub_c, (quot_c * sub_c).compare(full) <= 0)
