"""Exponent polytopes.

``P_A = {s in [0,1]^m : A(H, s) <= A for every subgroup H}`` for finite data,
and the rank polytope ``rank(H) <= sum_j s_j rank(phi_j(H))`` for finitely
generated data (checked over an explicit family of subgroups only).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .constants import (
    HblDatum,
    local_from_orders,
    parse_exponent,
    subgroup_profile,
    torsion_split,
)
from .errors import DimensionCapError, ModeError
from .factored import FactoredValue, _factor
from .groups import Subgroup, kernel, quotient_data, torsion_subgroup
from .subgroups import DEFAULT_MAX_ORDER, image_subgroup, sum_and_intersection

DEFAULT_TOL = 1e-9
DEFAULT_MAX_DIM = 6


def _mult(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(_factor(n).items())) if n > 1 else ()


@dataclass(frozen=True)
class PolytopeConstraint:
    """``log|H| - sum_j s_j log|phi_j(H)| <= log A`` kept as prime multiplicities."""

    subgroup: Subgroup
    order: int
    image_orders: tuple[int, ...]

    @property
    def order_multiplicities(self) -> tuple[tuple[int, int], ...]:
        return _mult(self.order)

    @property
    def coefficients(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        return tuple(_mult(n) for n in self.image_orders)

    def value(self, s: Sequence[Fraction]) -> FactoredValue:
        return local_from_orders(self.order, self.image_orders, s)


@dataclass(frozen=True)
class HblPolytope:
    datum: HblDatum
    m: int
    constraints: tuple[PolytopeConstraint, ...]
    bound: FactoredValue

    @property
    def primes(self) -> frozenset[int]:
        ps = set(self.bound.primes)
        for c in self.constraints:
            ps.update(p for p, _ in c.order_multiplicities)
            for coef in c.coefficients:
                ps.update(p for p, _ in coef)
        return frozenset(ps)

    @property
    def single_prime(self) -> bool:
        return len(self.primes) <= 1

    def rows(self, mode: str = "exact") -> list[tuple[tuple, object, str]]:
        """All half-spaces ``a . s <= b`` with a label, box constraints last."""
        out = []
        if mode == "exact":
            if not self.single_prime:
                raise ModeError(f"exact vertices need single-prime data, found primes {sorted(self.primes)}")
            p = next(iter(self.primes), None)
            alpha = self.bound.exponents.get(p, Fraction(0)) if p else Fraction(0)
            for i, c in enumerate(self.constraints):
                a = tuple(-dict(coef).get(p, 0) for coef in c.coefficients)
                out.append((a, alpha - dict(c.order_multiplicities).get(p, 0), f"H{i}"))
            one, zero = Fraction(1), Fraction(0)
        else:
            logA = self.bound.log()
            for i, c in enumerate(self.constraints):
                a = tuple(-math.log(n) for n in c.image_orders)
                out.append((a, logA - math.log(c.order), f"H{i}"))
            one, zero = 1.0, 0.0
        for j in range(self.m):
            e = tuple(int(k == j) for k in range(self.m))
            out.append((tuple(-x for x in e), zero, f"s{j}>=0"))
            out.append((e, one, f"s{j}<=1"))
        return out


def build_PA(datum: HblDatum, bound: FactoredValue | int, max_order: int = DEFAULT_MAX_ORDER) -> HblPolytope:
    """One constraint per distinct (order, image orders) profile of a nontrivial subgroup."""
    if not isinstance(bound, FactoredValue):
        bound = FactoredValue.from_fraction(bound)
    prof = subgroup_profile(datum, max_order)
    cons = tuple(
        PolytopeConstraint(prof.subgroups[i], order, img) for order, img, i in prof.representatives if order > 1
    )
    return HblPolytope(datum, datum.m, cons, bound)


@dataclass(frozen=True)
class PAMembership:
    member: bool
    witness: Subgroup | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.member


def membership_PA(poly: HblPolytope, s) -> PAMembership:
    s = tuple(parse_exponent(v) for v in s)
    if len(s) != poly.m:
        raise ValueError(f"expected {poly.m} exponents")
    if any(not 0 <= v <= 1 for v in s):
        return PAMembership(False, None, "outside the unit box")
    for c in poly.constraints:
        if c.value(s).compare(poly.bound) > 0:
            return PAMembership(False, c.subgroup, f"A(H,s) = {c.value(s)} > {poly.bound}")
    return PAMembership(True)


@dataclass(frozen=True)
class Vertex:
    s: tuple
    active: tuple[int, ...]
    exact: bool = True


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


_BATCH = 1 << 16


def _float_bases(rows, cand: list[int], m: int, tol: float):
    """Bases (``m``-subsets of ``cand``) whose float solution is feasible, with that solution."""
    A = np.array([[float(x) for x in rows[i][0]] for i in range(len(rows))])
    b = np.array([float(rows[i][1]) for i in range(len(rows))])
    it = itertools.combinations(cand, m)
    while True:
        chunk = np.array(list(itertools.islice(it, _BATCH)), dtype=np.int64).reshape(-1, m)
        if not len(chunk):
            return
        mats = A[chunk]
        ok = np.abs(np.linalg.det(mats)) > 1e-9
        chunk, mats = chunk[ok], mats[ok]
        if not len(chunk):
            continue
        xs = np.linalg.solve(mats, b[chunk][..., None])[..., 0]
        slack = xs @ A.T - b
        feasible = (slack <= tol).all(axis=1)
        for combo, x in zip(chunk[feasible], xs[feasible]):
            yield tuple(int(i) for i in combo), x


def vertices(
    poly: HblPolytope,
    mode: str = "exact",
    tol: float = DEFAULT_TOL,
    max_dim: int = DEFAULT_MAX_DIM,
) -> list[Vertex]:
    """Every vertex, from the feasible basic solutions of ``m`` active constraints.

    Bases are screened in floating point; in exact mode each surviving basis
    is then solved and checked again in rational arithmetic, so the float
    pass only prunes.
    """
    m = poly.m
    if m > max_dim:
        raise DimensionCapError(f"dimension {m} exceeds the cap {max_dim}")
    rows = poly.rows(mode)
    # identical half-spaces would only produce duplicate bases
    uniq: dict[tuple, int] = {}
    for i, (a, b, _) in enumerate(rows):
        uniq.setdefault((a, b), i)
    cand = sorted(uniq.values())
    found: dict[tuple, Vertex] = {}
    # looser screen in exact mode: the rational check below is the real test
    screen = 1e-7 if mode == "exact" else tol
    for combo, xf in _float_bases(rows, cand, m, screen):
        if mode == "exact":
            x = _solve_exact([rows[i][0] for i in combo], [rows[i][1] for i in combo])
            if x is None:
                continue
            slack = [sum(ai * xi for ai, xi in zip(a, x)) - bi for a, bi, _ in rows]
            if any(v > 0 for v in slack):
                continue
            key = tuple(x)
            if key not in found:
                found[key] = Vertex(key, tuple(i for i, v in enumerate(slack) if v == 0), True)
        else:
            key = tuple(round(float(v) / tol) for v in xf)
            if key not in found:
                slack = [float(np.dot(a, xf)) - bi for a, bi, _ in rows]
                found[key] = Vertex(
                    tuple(float(v) for v in xf), tuple(i for i, v in enumerate(slack) if abs(v) <= tol), False
                )
    return sorted(found.values(), key=lambda v: v.s)


def vertex_is_member(poly: HblPolytope, v: Vertex, tol: float = DEFAULT_TOL) -> bool:
    if v.exact:
        return membership_PA(poly, v.s).member
    if any(x < -tol or x > 1 + tol for x in v.s):
        return False
    logA = poly.bound.log()
    return all(
        math.log(c.order) - sum(sj * math.log(n) for sj, n in zip(v.s, c.image_orders)) <= logA + tol
        for c in poly.constraints
    )


@dataclass(frozen=True)
class VertexCheck:
    vertex: Vertex
    hypotheses: bool  # G strictly beats every proper nonzero subgroup and A(G,t) >= 1
    proper_attains: Subgroup | None  # some 0 < H < G with A(H,t) = bound
    few_fractional: bool  # all but at most one coordinate in {0, 1}

    @property
    def ok(self) -> bool:
        return not self.hypotheses or self.proper_attains is not None or self.few_fractional

    @property
    def branch(self) -> str:
        names = []
        if self.proper_attains is not None:
            names.append("proper subgroup attains bound")
        if self.few_fractional:
            names.append("at most one fractional coordinate")
        return " and ".join(names) or "neither"


@dataclass(frozen=True)
class ExtremePointReport:
    checks: tuple[VertexCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def check_extreme_point_structure(
    datum: HblDatum,
    bound: FactoredValue,
    vertexlist: Sequence[Vertex],
    max_order: int = DEFAULT_MAX_ORDER,
) -> ExtremePointReport:
    prof = subgroup_profile(datum, max_order)
    N = datum.domain.order
    checks = []
    for v in vertexlist:
        if not v.exact:
            raise ModeError("extreme-point structure is checked on exact vertices only")
        t = v.s
        whole = local_from_orders(N, prof.image_orders[-1], t)
        proper = [(i, local_from_orders(o, img, t)) for o, img, i in prof.representatives if 1 < o < N]
        hyp = whole.compare(FactoredValue.one()) >= 0 and all(a.compare(whole) < 0 for _, a in proper)
        attains = next((prof.subgroups[i] for i, a in proper if a == bound), None)
        few = sum(1 for x in t if x not in (0, 1)) <= 1
        checks.append(VertexCheck(v, hyp, attains, few))
    return ExtremePointReport(tuple(checks))


@dataclass(frozen=True)
class PMembership:
    status: str  # "member" | "non-member" | "inconclusive"
    witness: Subgroup | None
    family: tuple[Subgroup, ...]
    complete: bool  # True only when the family provably covers every constraint
    reason: str = ""

    @property
    def member(self) -> bool:
        return self.status == "member"


DEFAULT_MAX_FAMILY = 512


def membership_P(
    datum: HblDatum,
    s,
    extra_subgroups: Sequence[Subgroup] = (),
    max_family: int = DEFAULT_MAX_FAMILY,
) -> PMembership:
    """Check the rank condition over the kernel family of the torsion-free quotient.

    The family is: the kernels of the induced maps on ``G/T``, the whole
    quotient, the images of ``extra_subgroups``, closed under sums and
    intersections.  A violated constraint proves non-membership; passing all
    of them only verifies membership over that family.
    """
    s = datum.check_exponents(s)
    G = datum.domain
    if G.is_finite:
        return PMembership("member", None, (), True, "finite source group: every rank is 0")
    _, quot = torsion_split(datum)
    Q = quot.domain
    proj = quot.projection
    seeds = [kernel(psi) for psi in quot.maps] + [Subgroup.whole(Q)]
    for H in extra_subgroups:
        seeds.append(image_subgroup(proj, H) if proj is not None else H)
    family: list[Subgroup] = []
    seen: set[Subgroup] = set()
    for H in seeds:
        if H not in seen:
            seen.add(H)
            family.append(H)
    frontier = list(family)
    while frontier:
        new = []
        for a in frontier:
            for b in list(family):
                for c in sum_and_intersection(a, b):
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
        family.extend(new)
        frontier = new
        if len(family) > max_family:
            return PMembership("inconclusive", None, tuple(family), False, f"closure exceeded {max_family} subgroups")
    family.sort(key=lambda H: (H.rank, H.key))

    lift = None
    if proj is not None:
        T = torsion_subgroup(G)
        qd = quotient_data(G, T)

        def lift(H: Subgroup) -> Subgroup:
            gens = [sum((qd.lifts[i] * c for i, c in enumerate(g.coords)), G.zero) for g in H.generators]
            return Subgroup(G, gens=gens + list(T.generators))

    for H in family:
        rhs = sum((sj * image_subgroup(psi, H).rank for sj, psi in zip(s, quot.maps)), Fraction(0))
        if H.rank > rhs:
            witness = lift(H) if lift else H
            return PMembership(
                "non-member", witness, tuple(family), False, f"rank {H.rank} > {rhs} for {witness}"
            )
    return PMembership("member", None, tuple(family), False, f"verified over a family of {len(family)} subgroups")
