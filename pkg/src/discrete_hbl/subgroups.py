"""Subgroup lattices of finite abelian groups, images, sums, intersections."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from . import intmat
from .errors import AmbientMismatchError, InfiniteSubgroupError, LatticeCapError
from .groups import (
    AbelianGroup,
    GroupElement,
    Homomorphism,
    Subgroup,
    _span_codes,
    primary_components,
)

DEFAULT_MAX_ORDER = 4096

_LATTICES: dict[tuple[int, ...], "SubgroupLattice"] = {}


def generate(ambient: AbelianGroup, gens: Iterable) -> Subgroup:
    return Subgroup.generated_by(ambient, gens)


@dataclass(frozen=True, eq=False)
class SubgroupLattice:
    ambient: AbelianGroup
    subgroups: tuple[Subgroup, ...]

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self) -> Iterator[Subgroup]:
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> Subgroup:
        return self.subgroups[i]

    @cached_property
    def _index(self) -> dict[Subgroup, int]:
        return {H: i for i, H in enumerate(self.subgroups)}

    def index(self, H: Subgroup) -> int:
        return self._index[H]

    @cached_property
    def inclusion(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(i, j)`` with subgroup ``i`` properly contained in subgroup ``j``."""
        N = self.ambient.order
        masks = []
        for H in self.subgroups:
            m = np.zeros(N, dtype=bool)
            m[H.codes] = True
            masks.append(m)
        out = []
        for i, Hi in enumerate(self.subgroups):
            for j, Hj in enumerate(self.subgroups):
                if i != j and Hi.order < Hj.order and Hj.order % Hi.order == 0 and masks[j][Hi.codes].all():
                    out.append((i, j))
        return tuple(out)


def _times_table(G: AbelianGroup, k: int) -> np.ndarray:
    coords = G.decode_array(np.arange(G.order))
    return G.encode_array(coords * k)


def _p_group_subgroups(P: AbelianGroup, p: int) -> list[np.ndarray]:
    """All subgroups of a finite p-group, by index-p extensions from the trivial group."""
    times_p = _times_table(P, p)
    start = np.array([0], dtype=np.int64)
    seen = {(0,): start}
    frontier = [start]
    while frontier:
        nxt = []
        for H in frontier:
            has = np.zeros(P.order, dtype=bool)
            has[H] = True
            covered = has.copy()
            for c in np.flatnonzero(has[times_p] & ~has):
                if covered[c]:
                    continue
                J = _span_codes(P, [P.element(P.decode(int(c)))], H)
                covered[J] = True
                key = tuple(J.tolist())
                if key not in seen:
                    seen[key] = J
                    nxt.append(J)
        frontier = nxt
    return list(seen.values())


def _direct_sum_codes(G: AbelianGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ca, cb = G.decode_array(a), G.decode_array(b)
    s = (ca[:, None, :] + cb[None, :, :]).reshape(-1, len(G.moduli))
    return np.unique(G.encode_array(s))


def enumerate_subgroups(G: AbelianGroup, max_order: int = DEFAULT_MAX_ORDER) -> SubgroupLattice:
    """Every subgroup of a finite group, sorted by order then code tuple.

    Each p-primary component is enumerated separately and the lattice of
    ``G`` is the set of all sums of one subgroup per component.  Results are
    cached by presentation.
    """
    if not G.is_finite:
        raise InfiniteSubgroupError(f"{G} is infinite; enumerate its torsion subgroup instead")
    if G.order > max_order:
        raise LatticeCapError(G.order, max_order)
    cached = _LATTICES.get(G.moduli)
    if cached is not None:
        return cached
    combined = [np.array([0], dtype=np.int64)]
    for p, (P, emb) in primary_components(G).items():
        embedded = [emb.code_map[c] for c in _p_group_subgroups(P, p)]
        combined = [_direct_sum_codes(G, a, b) for a in combined for b in embedded]
    subs = sorted((Subgroup(G, codes=c) for c in combined), key=Subgroup.sort_key)
    lattice = SubgroupLattice(G, tuple(subs))
    _LATTICES[G.moduli] = lattice
    return lattice


def lattice_from_codes(G: AbelianGroup, code_lists: Iterable[Iterable[int]]) -> SubgroupLattice:
    """Rebuild (and cache) a lattice from stored code lists."""
    subs = sorted((Subgroup(G, codes=list(c)) for c in code_lists), key=Subgroup.sort_key)
    lattice = SubgroupLattice(G, tuple(subs))
    _LATTICES[G.moduli] = lattice
    return lattice


def clear_lattice_cache() -> None:
    _LATTICES.clear()


def image_subgroup(phi: Homomorphism, H: Subgroup) -> Subgroup:
    if H.ambient != phi.domain:
        raise AmbientMismatchError(f"subgroup of {H.ambient} is not in the domain {phi.domain}")
    C = phi.codomain
    if C.uses_codes and phi.domain.uses_codes:
        return Subgroup(C, codes=np.unique(phi.code_map[H.codes]))
    return Subgroup(C, gens=[phi(g) for g in H.generators])


def sum_and_intersection(H1: Subgroup, H2: Subgroup) -> tuple[Subgroup, Subgroup]:
    if H1.ambient != H2.ambient:
        raise AmbientMismatchError("subgroups of different groups")
    G = H1.ambient
    if G.uses_codes:
        total = Subgroup(G, codes=_span_codes(G, H2.generators, H1.codes))
        meet = Subgroup(G, codes=np.intersect1d(H1.codes, H2.codes))
        return total, meet
    total = Subgroup(G, lattice=H1.lattice + H2.lattice)
    meet = Subgroup(G, lattice=intmat.intersect_lattices(H1.lattice, H2.lattice, G.ngens))
    return total, meet


class SubgroupPresentation:
    """An invariant-factor presentation ``P`` of a subgroup with its embedding."""

    def __init__(self, H: Subgroup):
        self.subgroup = H
        G = H.ambient
        N = G.ngens
        basis = H.lattice
        r = len(basis)
        rels = [intmat.solve_hnf(basis, rel) for rel in G.relations()]
        k = len(rels)
        _, d, v, vinv = intmat.smith(rels, k, r)
        diag = [d[i][i] if i < min(k, r) else 0 for i in range(r)]
        new_basis = intmat.matmul(vinv, basis) if r else []
        free_idx = [i for i in range(r) if diag[i] == 0]
        tors_idx = [i for i in range(r) if diag[i] > 1]
        self._order = free_idx + tors_idx
        self._basis = basis
        self._v = v
        self.group = AbelianGroup(len(free_idx), tuple(diag[i] for i in tors_idx))
        self.embedding = Homomorphism.from_images(self.group, G, [new_basis[i][:N] for i in self._order])

    def preimage(self, x: GroupElement) -> GroupElement:
        """Coordinates of an element of the subgroup in the presentation."""
        y = intmat.solve_hnf(self._basis, x.coords)
        if y is None:
            raise AmbientMismatchError(f"{x} is not in the subgroup")
        yv = intmat.vecmat(y, self._v, len(self._basis))
        return self.group.element([yv[i] for i in self._order])


def present(H: Subgroup) -> tuple[AbelianGroup, Homomorphism]:
    p = SubgroupPresentation(H)
    return p.group, p.embedding
