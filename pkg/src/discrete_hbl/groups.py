"""Finitely generated abelian groups, their elements, subgroups and homomorphisms.

A group is presented as ``Z^n x Z_{m_1} x ... x Z_{m_k}``.  Coordinates of an
element list the ``n`` free coordinates first, then one coordinate per
modulus, always reduced into ``[0, m_i)``.  The presentation is kept as given
(so a datum file's matrices keep their meaning); ``invariant_factors`` gives
the canonical form used for isomorphism tests.

Small finite groups number their elements by a mixed-radix *code* whose
integer order is the lexicographic order of the coordinate tuples.  Finite
subgroups of such groups are stored as sorted code tuples; everything else is
stored as an integer lattice in Hermite normal form containing the relations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import intmat
from .errors import (
    AmbientMismatchError,
    HomomorphismError,
    InfiniteIndexError,
    InfiniteSubgroupError,
)

# finite groups at most this large use element-code representations
CODES_LIMIT = 1 << 24


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int = 0
    moduli: tuple[int, ...] = ()

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        if int(self.free_rank) < 0:
            raise ValueError("free rank must be nonnegative")
        if any(m < 1 for m in moduli):
            raise ValueError(f"moduli must be positive integers, got {moduli}")
        object.__setattr__(self, "free_rank", int(self.free_rank))
        object.__setattr__(self, "moduli", moduli)

    # constructors

    @classmethod
    def finite(cls, *moduli: int) -> "AbelianGroup":
        return cls(0, tuple(moduli))

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls(0, (n,))

    @classmethod
    def free(cls, n: int) -> "AbelianGroup":
        return cls(n, ())

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls(0, ())

    # structure

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.moduli)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @cached_property
    def torsion_order(self) -> int:
        return math.prod(self.moduli)

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise InfiniteSubgroupError(f"{self} is infinite")
        return self.torsion_order

    @property
    def torsion(self) -> "AbelianGroup":
        return AbelianGroup(0, self.moduli)

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        k = len(self.moduli)
        diag = [[self.moduli[i] if i == j else 0 for j in range(k)] for i in range(k)]
        return tuple(d for d in intmat.smith_diagonal(diag) if d > 1)

    def is_isomorphic(self, other: "AbelianGroup") -> bool:
        return self.free_rank == other.free_rank and self.invariant_factors == other.invariant_factors

    def relations(self) -> list[list[int]]:
        n, N = self.free_rank, self.ngens
        return [[m if c == n + i else 0 for c in range(N)] for i, m in enumerate(self.moduli)]

    @property
    def uses_codes(self) -> bool:
        return self.is_finite and self.torsion_order <= CODES_LIMIT

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z_{m}" for m in self.moduli]
        return " x ".join(parts) if parts else "0"

    # elements

    def element(self, coords: Iterable[int] = ()) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    @property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.ngens)

    def gen(self, i: int) -> "GroupElement":
        return GroupElement(self, tuple(int(c == i) for c in range(self.ngens)))

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        n = self.free_rank
        if len(coords) != self.ngens:
            raise ValueError(f"{self} needs {self.ngens} coordinates, got {len(coords)}")
        return tuple(int(c) for c in coords[:n]) + tuple(
            int(c) % m for c, m in zip(coords[n:], self.moduli)
        )

    @cached_property
    def _weights(self) -> np.ndarray:
        w = [1] * len(self.moduli)
        for i in range(len(self.moduli) - 2, -1, -1):
            w[i] = w[i + 1] * self.moduli[i + 1]
        return np.array(w, dtype=np.int64)

    @cached_property
    def _moduli_array(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    def encode(self, coords: Sequence[int]) -> int:
        """Code of an element (torsion coordinates only; free ones must be zero)."""
        n = self.free_rank
        if any(coords[:n]):
            raise InfiniteSubgroupError("elements with free coordinates have no code")
        code = 0
        for c, m in zip(coords[n:], self.moduli):
            code = code * m + int(c) % m
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for m in reversed(self.moduli):
            code, r = divmod(code, m)
            out.append(r)
        return (0,) * self.free_rank + tuple(reversed(out))

    def encode_array(self, coords: np.ndarray) -> np.ndarray:
        """Encode an ``(n, k)`` array of torsion coordinates."""
        if not self.moduli:
            return np.zeros(len(coords), dtype=np.int64)
        return (np.mod(coords, self._moduli_array) * self._weights).sum(axis=1)

    def decode_array(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        if not self.moduli:
            return np.zeros((len(codes), 0), dtype=np.int64)
        return (codes[:, None] // self._weights) % self._moduli_array

    def elements(self) -> Iterator["GroupElement"]:
        for code in range(self.order):
            yield GroupElement(self, self.decode(code))


@dataclass(frozen=True)
class GroupElement:
    ambient: AbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", self.ambient.reduce(self.coords))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.ambient != self.ambient:
            raise AmbientMismatchError(f"cannot add elements of {self.ambient} and {other.ambient}")
        return GroupElement(self.ambient, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.ambient, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(self.ambient, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def code(self) -> int:
        return self.ambient.encode(self.coords)

    @property
    def order(self) -> int | None:
        """Order of the element, None when it has infinite order."""
        n = self.ambient.free_rank
        if any(self.coords[:n]):
            return None
        out = 1
        for c, m in zip(self.coords[n:], self.ambient.moduli):
            out = math.lcm(out, m // math.gcd(c, m))
        return out

    def __repr__(self) -> str:
        return f"{self.coords}"


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def _as_elements(ambient: AbelianGroup, gens: Iterable) -> list[GroupElement]:
    out = []
    for g in gens:
        if isinstance(g, GroupElement):
            if g.ambient != ambient:
                raise AmbientMismatchError(f"generator {g} is not in {ambient}")
            out.append(g)
        else:
            out.append(ambient.element(g))
    return out


class Subgroup:
    """A subgroup, canonically represented.

    Finite ambients (small enough) store the sorted tuple of element codes;
    all other ambients store the Hermite normal form of the lattice of lifts,
    which always contains the ambient relations.  Equality is structural on
    that canonical form.
    """

    def __init__(self, ambient: AbelianGroup, *, codes=None, lattice=None, gens=None):
        self.ambient = ambient
        if ambient.uses_codes:
            if codes is None:
                if lattice is not None:
                    gens = [ambient.element(r) for r in lattice]
                codes = _span_codes(ambient, _as_elements(ambient, gens or ()))
            arr = np.unique(np.asarray(codes, dtype=np.int64))
            self._codes = arr
            self._key = tuple(int(c) for c in arr)
        else:
            if lattice is None:
                lattice = [g.coords for g in _as_elements(ambient, gens or ())]
            rows = [list(r) for r in lattice] + ambient.relations()
            self._key = tuple(tuple(r) for r in intmat.hnf(rows, ambient.ngens))
            self._codes = None
        self._given_gens = gens

    # constructors

    @classmethod
    def trivial(cls, ambient: AbelianGroup) -> "Subgroup":
        return cls(ambient, codes=[0]) if ambient.uses_codes else cls(ambient, lattice=[])

    @classmethod
    def whole(cls, ambient: AbelianGroup) -> "Subgroup":
        if ambient.uses_codes:
            return cls(ambient, codes=np.arange(ambient.order))
        return cls(ambient, lattice=intmat.identity(ambient.ngens))

    @classmethod
    def generated_by(cls, ambient: AbelianGroup, gens: Iterable) -> "Subgroup":
        return cls(ambient, gens=list(gens))

    # canonical data

    @property
    def key(self) -> tuple:
        return self._key

    @property
    def codes(self) -> np.ndarray:
        if self._codes is None:
            if not self.is_finite:
                raise InfiniteSubgroupError("infinite subgroup has no element codes")
            self._codes = np.array(sorted(x.code for x in self.elements()), dtype=np.int64)
        return self._codes

    @cached_property
    def lattice(self) -> list[list[int]]:
        """HNF basis of the lifts of this subgroup (contains the relations)."""
        if not self.ambient.uses_codes:
            return [list(r) for r in self._key]
        rows = [g.coords for g in self.generators] + self.ambient.relations()
        return intmat.hnf(rows, self.ambient.ngens)

    @cached_property
    def generators(self) -> tuple[GroupElement, ...]:
        """A small generating set, chosen greedily in code order."""
        G = self.ambient
        if not G.uses_codes:
            els = [G.element(r) for r in self._key]
            return tuple(e for e in els if not e.is_zero)
        gens: list[GroupElement] = []
        has = np.zeros(G.order, dtype=bool)
        has[0] = True
        span = np.array([0], dtype=np.int64)
        for c in self._codes:
            if not has[c]:
                gens.append(G.element(G.decode(int(c))))
                span = _span_codes(G, gens[-1:], span)
                has[span] = True
        return tuple(gens)

    # queries

    @cached_property
    def is_finite(self) -> bool:
        if self.ambient.is_finite:
            return True
        n = self.ambient.free_rank
        return all(not any(r[:n]) for r in self._key)

    @cached_property
    def order(self) -> int:
        if self._codes is not None:
            return len(self._codes)
        if not self.is_finite:
            raise InfiniteSubgroupError("subgroup is infinite")
        n = self.ambient.free_rank
        index = math.prod(r[c] for r, c in zip(self._key, intmat.pivots(self._key)) if c >= n)
        return self.ambient.torsion_order // index

    @cached_property
    def rank(self) -> int:
        n = self.ambient.free_rank
        return intmat.rank([r[:n] for r in self.lattice], n)

    def __len__(self) -> int:
        return self.order

    def elements(self) -> list[GroupElement]:
        G = self.ambient
        if self._codes is not None:
            return [G.element(G.decode(int(c))) for c in self._codes]
        if not self.is_finite:
            raise InfiniteSubgroupError("cannot list an infinite subgroup")
        T = G.torsion
        n = G.free_rank
        tors_gens = [T.element(r[n:]) for r in self._key]
        codes = _span_codes(T, tors_gens) if T.uses_codes else None
        if codes is None:
            raise InfiniteSubgroupError("finite subgroup too large to list")
        return [G.element((0,) * n + T.decode(int(c))) for c in codes]

    def __contains__(self, x) -> bool:
        if not isinstance(x, GroupElement):
            x = self.ambient.element(x)
        if x.ambient != self.ambient:
            return False
        if self._codes is not None:
            c = x.code
            i = np.searchsorted(self._codes, c)
            return bool(i < len(self._codes) and self._codes[i] == c)
        return intmat.solve_hnf(self._key, x.coords) is not None

    @property
    def is_trivial(self) -> bool:
        if self._codes is not None:
            return len(self._codes) == 1
        return self.is_finite and self.order == 1

    @property
    def is_whole(self) -> bool:
        if self._codes is not None:
            return len(self._codes) == self.ambient.order
        return len(self._key) == self.ambient.ngens and all(
            r[c] == 1 for r, c in zip(self._key, intmat.pivots(self._key))
        )

    def issubgroup(self, other: "Subgroup") -> bool:
        if other.ambient != self.ambient:
            raise AmbientMismatchError("subgroups of different groups")
        if self._codes is not None:
            return bool(np.isin(self._codes, other._codes, assume_unique=True).all())
        return all(g in other for g in self.generators)

    def __le__(self, other: "Subgroup") -> bool:
        return self.issubgroup(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.ambient == other.ambient and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.ambient, self._key))

    def sort_key(self) -> tuple:
        """Smallest order first, then lexicographic canonical form."""
        if self._codes is not None:
            return (len(self._codes), self._key)
        return (0 if self.is_finite else 1, self.order if self.is_finite else 0, self._key)

    def describe(self) -> str:
        if self.is_trivial:
            return "trivial"
        if self.is_whole:
            return "full group"
        return "proper"

    def __repr__(self) -> str:
        size = f"order {self.order}" if self.is_finite else f"rank {self.rank}"
        gens = [g.coords for g in self.generators]
        return f"Subgroup({self.ambient}, {size}, gens={gens})"


def _span_codes(G: AbelianGroup, gens: Sequence[GroupElement], start: np.ndarray | None = None) -> np.ndarray:
    """Sorted codes of the subgroup generated by ``start`` (a subgroup) and ``gens``."""
    n = G.free_rank
    members = np.array([0], dtype=np.int64) if start is None else np.asarray(start, dtype=np.int64)
    has = np.zeros(G.torsion_order, dtype=bool)
    has[members] = True
    coords = G.decode_array(members)
    for g in gens:
        if any(g.coords[:n]):
            raise InfiniteSubgroupError("generator of infinite order in a finite span")
        step = np.array(g.coords[n:], dtype=np.int64)
        x = step.copy()
        blocks = [coords]
        while True:
            xc = int(G.encode_array(x[None, :])[0]) if len(x) else 0
            if has[xc]:
                break
            block = np.mod(coords + x, G._moduli_array) if len(x) else coords
            blocks.append(block)
            has[G.encode_array(block)] = True
            x = x + step
        coords = np.concatenate(blocks) if len(blocks) > 1 else coords
    return np.sort(G.encode_array(coords))


@dataclass(frozen=True)
class Homomorphism:
    """Integer matrix sending domain generator coordinates to codomain ones.

    ``matrix[r][c]`` is coordinate ``r`` of the image of domain generator ``c``.
    """

    domain: AbelianGroup
    codomain: AbelianGroup
    matrix: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        D, C = self.domain, self.codomain
        rows = [list(map(int, r)) for r in self.matrix]
        if not rows and C.ngens:
            rows = [[0] * D.ngens for _ in range(C.ngens)]
        if len(rows) != C.ngens or any(len(r) != D.ngens for r in rows):
            raise HomomorphismError(
                f"matrix must be {C.ngens}x{D.ngens} for {D} -> {C}, got "
                f"{len(rows)}x{len(rows[0]) if rows else 0}"
            )
        nc = C.free_rank
        for r, m in enumerate(C.moduli):
            rows[nc + r] = [x % m for x in rows[nc + r]]
        nd = D.free_rank
        for i, d in enumerate(D.moduli):
            col = nd + i
            for r in range(C.ngens):
                x = rows[r][col]
                bad = x != 0 if r < nc else (d * x) % C.moduli[r - nc] != 0
                if bad:
                    raise HomomorphismError(
                        f"generator {col} of {D} has order {d} but its image "
                        f"{tuple(row[col] for row in rows)} in {C} does not vanish when multiplied by {d}",
                        generator=col,
                    )
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in rows))

    @classmethod
    def from_images(cls, domain: AbelianGroup, codomain: AbelianGroup, images: Sequence) -> "Homomorphism":
        """Build from the images of the domain generators."""
        cols = [img.coords if isinstance(img, GroupElement) else tuple(img) for img in images]
        if len(cols) != domain.ngens:
            raise HomomorphismError(f"need {domain.ngens} generator images, got {len(cols)}")
        return cls(domain, codomain, tuple(tuple(c[r] for c in cols) for r in range(codomain.ngens)))

    @classmethod
    def identity(cls, G: AbelianGroup) -> "Homomorphism":
        return cls(G, G, tuple(map(tuple, intmat.identity(G.ngens))))

    @classmethod
    def zero(cls, domain: AbelianGroup, codomain: AbelianGroup) -> "Homomorphism":
        return cls(domain, codomain)

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(r[i] for r in self.matrix)

    def __call__(self, x) -> GroupElement:
        if not isinstance(x, GroupElement):
            x = self.domain.element(x)
        if x.ambient != self.domain:
            raise AmbientMismatchError(f"{x} is not in the domain {self.domain}")
        return GroupElement(self.codomain, tuple(sum(a * b for a, b in zip(r, x.coords)) for r in self.matrix))

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """``self o inner``."""
        if inner.codomain != self.domain:
            raise AmbientMismatchError("cannot compose: codomain/domain mismatch")
        return Homomorphism.from_images(inner.domain, self.codomain, [self(inner(inner.domain.gen(i))) for i in range(inner.domain.ngens)])

    @cached_property
    def code_map(self) -> np.ndarray:
        """Codomain code of the image of every domain element (small finite domains)."""
        D, C = self.domain, self.codomain
        if not D.uses_codes or not C.torsion.uses_codes:
            raise InfiniteSubgroupError("code maps need small finite groups")
        coords = D.decode_array(np.arange(D.order))
        m = np.array([r for r in self.matrix[C.free_rank:]], dtype=np.int64).reshape(len(C.moduli), D.ngens)
        return C.torsion.encode_array(coords @ m.T)


def apply(phi: Homomorphism, x: GroupElement) -> GroupElement:
    return phi(x)


def kernel(phi: Homomorphism) -> Subgroup:
    D, C = phi.domain, phi.codomain
    if D.uses_codes and C.torsion.uses_codes:
        return Subgroup(D, codes=np.flatnonzero(phi.code_map == 0))
    # rows (x, y) with x M^T + y R_C = 0
    mt = intmat.transpose(phi.matrix) if phi.matrix else [[] for _ in range(D.ngens)]
    stacked = [list(r) for r in mt] + C.relations()
    ker = intmat.left_kernel(stacked, C.ngens)
    return Subgroup(D, lattice=[k[: D.ngens] for k in ker])


def image_order_map(phi: Homomorphism) -> np.ndarray:
    return phi.code_map


def torsion_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, gens=[G.gen(G.free_rank + i) for i in range(len(G.moduli))])


@dataclass(frozen=True)
class Transversal:
    subgroup: Subgroup
    representatives: tuple[GroupElement, ...]

    def __len__(self) -> int:
        return len(self.representatives)


def coset_representatives(G: AbelianGroup, H: Subgroup) -> Transversal:
    """One representative per coset of ``H``, the least in code order."""
    if H.ambient != G:
        raise AmbientMismatchError(f"subgroup is not in {G}")
    if G.uses_codes:
        covered = np.zeros(G.order, dtype=bool)
        hc = G.decode_array(H.codes)
        reps = []
        for code in range(G.order):
            if covered[code]:
                continue
            x = G.decode(code)
            reps.append(G.element(x))
            covered[G.encode_array(hc + np.array(x, dtype=np.int64))] = True
        return Transversal(H, tuple(reps))
    lat = H.lattice
    if len(lat) < G.ngens:
        raise InfiniteIndexError(f"{H} has infinite index in {G}")
    bounds = [r[c] for r, c in zip(lat, intmat.pivots(lat))]
    reps = tuple(G.element(x) for x in itertools.product(*(range(b) for b in bounds)))
    return Transversal(H, reps)


@dataclass(frozen=True)
class QuotientData:
    group: AbelianGroup
    projection: Homomorphism
    lifts: tuple[GroupElement, ...]  # a preimage of each quotient generator


def quotient_data(G: AbelianGroup, H: Subgroup) -> QuotientData:
    if H.ambient != G:
        raise AmbientMismatchError(f"subgroup is not in {G}")
    N = G.ngens
    basis = H.lattice
    r = len(basis)
    _, d, v, vinv = intmat.smith(basis, r, N)
    diag = [d[i][i] if i < r else 0 for i in range(N)]
    free_idx = [i for i in range(N) if diag[i] == 0]
    tors_idx = [i for i in range(N) if diag[i] > 1]
    Q = AbelianGroup(len(free_idx), tuple(diag[i] for i in tors_idx))
    order = free_idx + tors_idx
    matrix = tuple(tuple(v[k][i] for k in range(N)) for i in order)
    proj = Homomorphism(G, Q, matrix)
    lifts = tuple(G.element(vinv[i]) for i in order)
    return QuotientData(Q, proj, lifts)


def quotient_group(G: AbelianGroup, H: Subgroup) -> tuple[AbelianGroup, Homomorphism]:
    """Invariant-factor presentation of ``G/H`` and the projection onto it."""
    q = quotient_data(G, H)
    return q.group, q.projection


def primary_components(G: AbelianGroup) -> dict[int, tuple[AbelianGroup, Homomorphism]]:
    """p-primary components of a finite group with their embeddings into ``G``."""
    if not G.is_finite:
        raise InfiniteSubgroupError("primary decomposition needs a finite group")
    primes = sorted({p for m in G.moduli for p in _prime_factors(m)})
    out = {}
    for p in primes:
        idx, mods = [], []
        for i, m in enumerate(G.moduli):
            e = _prime_factors(m).get(p, 0)
            if e:
                idx.append(i)
                mods.append(p**e)
        P = AbelianGroup(0, tuple(mods))
        images = []
        for i, q in zip(idx, mods):
            images.append([G.moduli[i] // q if c == i else 0 for c in range(G.ngens)])
        out[p] = (P, Homomorphism.from_images(P, G, images))
    return out


def primary_decomposition(G: AbelianGroup) -> dict[int, AbelianGroup]:
    return {p: comp for p, (comp, _) in primary_components(G).items()}
