"""Deterministic fixture data: hand-picked classics plus seeded random data."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .constants import ExponentVector, HblDatum
from .groups import AbelianGroup, Homomorphism

S_GRID: tuple[Fraction, ...] = tuple(
    Fraction(x) for x in ("0", "1/4", "1/3", "1/2", "2/3", "3/4", "1")
)

CATALOG_SEED = 20240611


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    datum: HblDatum
    s: ExponentVector


def _hom(D: AbelianGroup, C: AbelianGroup, rows) -> Homomorphism:
    return Homomorphism(D, C, tuple(tuple(r) for r in rows))


def klein_projections() -> HblDatum:
    G, Z2 = AbelianGroup.finite(2, 2), AbelianGroup.cyclic(2)
    return HblDatum(G, (_hom(G, Z2, [[1, 0]]), _hom(G, Z2, [[0, 1]])), ("x", "y"))


def z4_mod2() -> HblDatum:
    G, Z2 = AbelianGroup.cyclic(4), AbelianGroup.cyclic(2)
    return HblDatum(G, (_hom(G, Z2, [[1]]),), ("mod2",))


def trivial_datum() -> HblDatum:
    T = AbelianGroup.trivial()
    return HblDatum(T, (Homomorphism(T, T),), ("t",))


def loomis_whitney(n: int = 2) -> HblDatum:
    """``Z_n^3`` with the three coordinate-plane projections."""
    G, P = AbelianGroup.finite(n, n, n), AbelianGroup.finite(n, n)
    pairs = [(1, 2), (0, 2), (0, 1)]
    maps = tuple(_hom(G, P, [[int(c == a) for c in range(3)], [int(c == b) for c in range(3)]]) for a, b in pairs)
    return HblDatum(G, maps, ("yz", "xz", "xy"))


def _coordinate(G: AbelianGroup, i: int, C: AbelianGroup, scale: int = 1) -> Homomorphism:
    return _hom(G, C, [[scale * int(c == i) for c in range(G.ngens)]])


def structured() -> list[tuple[str, HblDatum]]:
    Z2, Z3, Z4 = AbelianGroup.cyclic(2), AbelianGroup.cyclic(3), AbelianGroup.cyclic(4)
    Z6, Z8 = AbelianGroup.cyclic(6), AbelianGroup.cyclic(8)
    out = [
        ("klein", klein_projections()),
        ("z4-mod2", z4_mod2()),
        ("trivial", trivial_datum()),
        ("loomis-whitney-z2", loomis_whitney(2)),
    ]
    G = AbelianGroup.finite(2, 2, 2)
    out.append(("z2^3-coords", HblDatum(G, tuple(_coordinate(G, i, Z2) for i in range(3)))))
    G = AbelianGroup.cyclic(6)
    out.append(("z6-crt", HblDatum(G, (_hom(G, Z2, [[1]]), _hom(G, Z3, [[1]])))))
    G = AbelianGroup.finite(3, 3)
    out.append(("z3^2-projections", HblDatum(G, (_coordinate(G, 0, Z3), _coordinate(G, 1, Z3)))))
    G = AbelianGroup.finite(3, 3)
    out.append(("z3^2-diagonal", HblDatum(G, (_coordinate(G, 0, Z3), _coordinate(G, 1, Z3), _hom(G, Z3, [[1, 1]])))))
    out.append(("z8-mod4-mod2", HblDatum(Z8, (_hom(Z8, Z4, [[1]]), _hom(Z8, Z2, [[1]])))))
    G = AbelianGroup.finite(4, 2)
    out.append(("z4xz2-mixed", HblDatum(G, (_hom(G, Z4, [[1, 2]]), _coordinate(G, 1, Z2), _hom(G, Z2, [[1, 1]])))))
    G = AbelianGroup.finite(2, 4, 4)
    out.append(("z2xz4^2-sum", HblDatum(G, (_hom(G, Z4, [[2, 1, 0]]), _hom(G, Z4, [[0, 1, 1]]), _coordinate(G, 0, Z2)))))
    G = AbelianGroup.finite(2, 2, 2, 2)
    P = AbelianGroup.finite(2, 2)
    out.append(("z2^4-pairs", HblDatum(G, (_hom(G, P, [[1, 0, 0, 0], [0, 1, 0, 0]]), _hom(G, P, [[0, 0, 1, 0], [0, 0, 0, 1]]), _hom(G, P, [[1, 0, 1, 0], [0, 1, 0, 1]])))))
    G = AbelianGroup.finite(2, 3, 5)
    out.append(("z30-crt", HblDatum(G, (_hom(G, Z6, [[3, 2, 0]]), _hom(G, AbelianGroup.cyclic(5), [[0, 0, 1]])))))
    G = AbelianGroup.cyclic(16)
    out.append(("z16-mod8", HblDatum(G, (_hom(G, Z8, [[1]]),))))
    G = AbelianGroup.finite(6, 4)
    out.append(("z6xz4-zero-map", HblDatum(G, (_hom(G, Z6, [[1, 0]]), Homomorphism.zero(G, Z4)))))
    return out


def _small_moduli(rng: random.Random, max_order: int, max_len: int) -> tuple[int, ...]:
    while True:
        k = rng.randint(0, max_len)
        mods = tuple(rng.randint(2, 8) for _ in range(k))
        if math.prod(mods) <= max_order:
            return mods


def random_homomorphism(rng: random.Random, D: AbelianGroup, C: AbelianGroup) -> Homomorphism:
    """Uniform over well-defined matrices between finite groups."""
    rows = []
    for e in C.moduli:
        row = []
        for d in D.moduli:
            step = e // math.gcd(d, e)
            row.append(step * rng.randrange(e // step))
        rows.append(row)
    return Homomorphism(D, C, tuple(map(tuple, rows)))


def random_datum(
    rng: random.Random, max_order: int = 32, max_target: int = 8, max_m: int = 3
) -> HblDatum:
    while True:
        D = AbelianGroup.finite(*_small_moduli(rng, max_order, 3))
        if D.order > 1:
            break
    m = rng.randint(1, max_m)
    maps = []
    for _ in range(m):
        C = AbelianGroup.finite(*_small_moduli(rng, max_target, 2))
        maps.append(random_homomorphism(rng, D, C))
    return HblDatum(D, tuple(maps))


def random_exponents(rng: random.Random, m: int) -> ExponentVector:
    return tuple(rng.choice(S_GRID) for _ in range(m))


def catalog(n_random: int = 48, seed: int = CATALOG_SEED) -> list[CatalogEntry]:
    """The structured data at a few grid exponents, then ``n_random`` seeded random pairs."""
    rng = random.Random(seed)
    out = []
    for name, d in structured():
        out.append(CatalogEntry(f"{name}/half", d, (Fraction(1, 2),) * d.m))
        out.append(CatalogEntry(f"{name}/rand", d, random_exponents(rng, d.m)))
    for i in range(n_random):
        d = random_datum(rng)
        out.append(CatalogEntry(f"random-{i:03d}", d, random_exponents(rng, d.m)))
    return out


def fg_fixtures() -> list[tuple[str, HblDatum, ExponentVector]]:
    """Finitely generated data with coordinate-style maps."""
    Z, Z1 = AbelianGroup.free(1), AbelianGroup.free(1)
    Z2, Z4 = AbelianGroup.cyclic(2), AbelianGroup.cyclic(4)
    F = Fraction
    out = []
    out.append(("Z", HblDatum(Z, (Homomorphism.identity(Z),)), (F(1),)))
    out.append(("Z-half", HblDatum(Z, (Homomorphism.identity(Z),)), (F(1, 2),)))
    Z2f = AbelianGroup.free(2)
    xy = (_coordinate(Z2f, 0, Z1), _coordinate(Z2f, 1, Z1))
    out.append(("Z^2", HblDatum(Z2f, xy), (F(1), F(1))))
    out.append(("Z^2-half", HblDatum(Z2f, xy), (F(1, 2), F(1, 2))))
    G = AbelianGroup(1, (2,))
    out.append(("ZxZ2", HblDatum(G, (_coordinate(G, 0, Z1), _coordinate(G, 1, Z2))), (F(1), F(1, 2))))
    out.append(("ZxZ2-zero", HblDatum(G, (_coordinate(G, 0, Z1), _coordinate(G, 1, Z2))), (F(1), F(0))))
    G = AbelianGroup(2, (4,))
    ZxZ4, ZxZ2 = AbelianGroup(1, (4,)), AbelianGroup(1, (2,))
    maps = (
        _hom(G, ZxZ4, [[1, 0, 0], [0, 0, 1]]),
        _hom(G, ZxZ2, [[0, 1, 0], [0, 0, 1]]),
        _hom(G, Z1, [[1, 1, 0]]),
    )
    out.append(("Z^2xZ4", HblDatum(G, maps), (F(1), F(1), F(0))))
    out.append(("Z^2xZ4-sym", HblDatum(G, maps), (F(2, 3), F(2, 3), F(2, 3))))
    out.append(("Z^2xZ4-low", HblDatum(G, maps), (F(1, 2), F(1, 2), F(1, 2))))
    return out
