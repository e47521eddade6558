"""Numerical and exhaustive cross-checks of the computed constants.

Functions on a target ``G_j`` are flat tables indexed by the torsion codes
of ``G_j`` (for a finite source only the torsion part of a target is ever
hit).  Values may be floats, ints or Fractions; when everything is rational
and the needed roots are exact the ratio is computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy import integer_nthroot

from . import kernels
from .constants import (
    ConstantReport,
    HblDatum,
    global_constant,
    local_constant,
    quotient_datum,
)
from .errors import (
    BudgetExceededError,
    DegenerateAscentError,
    InfiniteSubgroupError,
    PreconditionError,
)
from .factored import FactoredValue
from .groups import Subgroup
from .subgroups import DEFAULT_MAX_ORDER

FunctionTuple = tuple[Sequence, ...]

DEFAULT_BUDGET = 1 << 24
BOUND_TOL = 1e-9
ATTAIN_TOL = 1e-6


def _require_finite(datum: HblDatum) -> None:
    if not datum.is_finite:
        raise InfiniteSubgroupError("the oracle needs a finite source group")


def _code_maps(datum: HblDatum) -> list[np.ndarray]:
    return [phi.code_map for phi in datum.maps]


def _target_sizes(datum: HblDatum) -> list[int]:
    return [C.torsion_order for C in datum.targets]


def _is_exact(f: FunctionTuple) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for fj in f for v in fj)


def _check_shape(datum: HblDatum, f: FunctionTuple) -> None:
    if len(f) != datum.m:
        raise ValueError(f"need {datum.m} functions, got {len(f)}")
    for j, (fj, n) in enumerate(zip(f, _target_sizes(datum))):
        if len(fj) != n:
            raise ValueError(f"function {j} needs {n} values, got {len(fj)}")
        if any(v < 0 for v in fj):
            raise ValueError(f"function {j} has a negative value")


def indicator(datum: HblDatum, j: int, elements) -> list[int]:
    """0/1 table of a set of elements (or codes) of target ``j``."""
    C = datum.targets[j].torsion
    out = [0] * C.order
    for e in elements:
        code = e if isinstance(e, (int, np.integer)) else C.encode(e.coords[datum.targets[j].free_rank :])
        out[int(code)] = 1
    return out


def subgroup_indicators(datum: HblDatum, H: Subgroup) -> tuple[list[int], ...]:
    """Indicators of the images ``phi_j(H)``."""
    return tuple(
        indicator(datum, j, np.unique(cm[H.codes]).tolist()) for j, cm in enumerate(_code_maps(datum))
    )


def evaluate_form(datum: HblDatum, f: FunctionTuple):
    """``sum_x prod_j f_j(phi_j(x))``; exact for rational inputs."""
    _require_finite(datum)
    _check_shape(datum, f)
    cms = _code_maps(datum)
    if _is_exact(f):
        total = Fraction(0)
        for x in range(datum.domain.order):
            term = Fraction(1)
            for fj, cm in zip(f, cms):
                term *= fj[cm[x]]
                if not term:
                    break
            total += term
        return total
    prod = np.ones(datum.domain.order)
    for fj, cm in zip(f, cms):
        prod *= np.asarray(fj, dtype=float)[cm]
    return float(prod.sum())


def _exact_power(v: Fraction, e: Fraction) -> Fraction:
    """``v ** e`` when it is rational, else PreconditionError."""
    if e.denominator == 1:
        return v ** e.numerator
    q = e.denominator
    out = []
    for part in (v.numerator, v.denominator):
        r, ok = integer_nthroot(part, q)
        if not ok:
            raise PreconditionError(f"{v}^({e}) is irrational")
        out.append(r)
    return Fraction(out[0], out[1]) ** e.numerator


def power_sum(values: Sequence, s: Fraction) -> Fraction:
    """``sum_y v(y) ** (1/s)`` exactly, or ``max v`` when ``s == 0``."""
    vals = [Fraction(v) for v in values]
    if s == 0:
        return max(vals)
    return sum((_exact_power(v, 1 / s) for v in vals if v), Fraction(0))


def norm(values: Sequence, s: Fraction, exact: bool = False):
    """``||f||_{1/s}`` for counting measure; the sup norm at ``s == 0``."""
    if exact:
        p = power_sum(values, s)
        if p == 0:
            return 0
        return FactoredValue.from_fraction(p) if s == 0 else FactoredValue.from_fraction(p) ** s
    v = np.asarray(values, dtype=float)
    if s == 0:
        return float(v.max()) if len(v) else 0.0
    return float(np.sum(v ** (1 / float(s))) ** float(s))


def ratio(datum: HblDatum, s, f: FunctionTuple, exact: bool = False):
    """Form divided by ``prod_j ||f_j||_{1/s_j}``.

    With ``exact=True`` the result is a :class:`FactoredValue` (or the int 0);
    this needs rational inputs and rational power sums.
    """
    s = datum.check_exponents(s)
    form = evaluate_form(datum, f)
    if exact:
        if not _is_exact(f):
            f = tuple([Fraction(v) for v in fj] for fj in f)
            form = evaluate_form(datum, f)
        norms = [norm(fj, sj, exact=True) for fj, sj in zip(f, s)]
        if any(n == 0 for n in norms):
            raise ValueError("a function has zero norm")
        if form == 0:
            return 0
        out = FactoredValue.from_fraction(form)
        for n in norms:
            out = out / n
        return out
    norms = [norm(fj, sj) for fj, sj in zip(f, s)]
    if any(n == 0 for n in norms):
        raise ValueError("a function has zero norm")
    return float(form) / math.prod(norms)


@dataclass
class AscentTrace:
    iterations: int
    ratios: list[float]
    functions: tuple[np.ndarray, ...]
    converged: bool

    @property
    def final_ratio(self) -> float:
        return self.ratios[-1]

    @property
    def best_ratio(self) -> float:
        return max(self.ratios)


def random_init(datum: HblDatum, rng: np.random.Generator) -> tuple[np.ndarray, ...]:
    """Independent values in ``(0, 1]``."""
    return tuple(1.0 - rng.random(n) for n in _target_sizes(datum))


def alternating_ascent(
    datum: HblDatum,
    s,
    init: FunctionTuple | None = None,
    max_iters: int = 200,
    tol: float = 1e-12,
    seed: int = 0,
) -> AscentTrace:
    """Maximize the ratio one function at a time.

    Holding the others fixed, ``f_j`` is replaced by the exact maximizer of
    the ratio: a power of the fiber sums ``g_j`` when ``0 < s_j < 1``, the
    indicator of the argmax set of ``g_j`` when ``s_j = 1`` and the
    indicator of its support when ``s_j = 0``.
    """
    _require_finite(datum)
    s = datum.check_exponents(s)
    cms = _code_maps(datum)
    sizes = _target_sizes(datum)
    if init is None:
        init = random_init(datum, np.random.default_rng(seed))
    _check_shape(datum, init)
    f = [np.asarray(v, dtype=float).copy() for v in init]
    ratios = [ratio(datum, s, tuple(f))]
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        for j in range(datum.m):
            w = np.ones(datum.domain.order)
            for k in range(datum.m):
                if k != j:
                    w *= f[k][cms[k]]
            g = np.bincount(cms[j], weights=w, minlength=sizes[j])
            top = g.max()
            if top <= 0:
                raise DegenerateAscentError(f"fiber sums of function {j} vanish; restart with a fresh init")
            sj = s[j]
            if sj == 0:
                f[j] = (g > 0).astype(float)
            elif sj == 1:
                f[j] = (g >= top * (1 - 1e-12)).astype(float)
            else:
                f[j] = (g / top) ** (float(sj) / float(1 - sj))
        r = ratio(datum, s, tuple(f))
        prev = ratios[-1]
        ratios.append(r)
        if abs(r - prev) <= tol * max(abs(r), 1.0):
            converged = True
            break
    return AscentTrace(it if ratios[1:] else 0, ratios, tuple(f), converged)


@dataclass(frozen=True)
class IndicatorResult:
    value: FactoredValue
    float_value: float
    sets: tuple[tuple[int, ...], ...]  # torsion codes of each E_j
    space: int  # number of subset tuples covered

    def functions(self, datum: HblDatum) -> tuple[list[int], ...]:
        return tuple(indicator(datum, j, E) for j, E in enumerate(self.sets))


def search_space(datum: HblDatum) -> int:
    """``prod_j (2^|phi_j(G)| - 1)``, the number of tuples of nonempty image subsets."""
    return math.prod((1 << len(np.unique(cm))) - 1 for cm in _code_maps(datum))


@lru_cache(maxsize=64)
def _search_table(datum: HblDatum):
    cms = _code_maps(datum)
    images = [np.unique(cm) for cm in cms]
    local = [np.searchsorted(img, cm) for img, cm in zip(images, cms)]
    n = [len(img) for img in images]
    # the largest image is handled by the sorted prefix sums
    last = max(range(datum.m), key=lambda j: (n[j], -j))
    perm = [j for j in range(datum.m) if j != last] + [last]
    codes = np.stack([local[j] for j in perm], axis=1).astype(np.int64)
    sizes = np.array([n[j] for j in perm], dtype=np.int64)
    table = kernels.prefix_counts(codes, sizes)
    return images, perm, codes, sizes, table


def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1, 1 << n, dtype=np.int64)
    return np.array([bin(int(x)).count("1") for x in masks], dtype=np.int64)


def indicator_search(datum: HblDatum, s, budget: int = DEFAULT_BUDGET) -> IndicatorResult:
    """Exhaustive maximum of the ratio over indicators of nonempty image subsets.

    For every choice of subsets of the first ``m - 1`` images the best
    ``k``-element subset of the last image is the ``k`` heaviest fibers, so
    each size ``k`` is covered by one sorted prefix sum and the maximum is
    exact.  Ties are broken by the lexicographically smallest tuple of
    sorted code tuples.
    """
    _require_finite(datum)
    s = datum.check_exponents(s)
    space = search_space(datum)
    if space > budget:
        raise BudgetExceededError(space, budget)
    images, perm, codes, sizes, table = _search_table(datum)
    sp = [s[j] for j in perm]
    outer = np.zeros(1)
    pops = []
    for j in range(len(perm) - 1):
        pc = _popcounts(int(sizes[j]))
        pops.append(pc)
        outer = (outer[:, None] + float(sp[j]) * np.log(pc)[None, :]).reshape(-1)
    k = np.arange(1, int(sizes[-1]) + 1)
    with np.errstate(divide="ignore"):
        score = np.log(table) - outer[:, None] - float(sp[-1]) * np.log(k)[None, :]
    best = score.max()
    cand = np.argwhere(score >= best - 1e-9)
    # exact comparison, once per distinct (count, subset sizes) profile
    radix = [len(pc) for pc in pops]
    profiles: dict[tuple, list[tuple[int, int]]] = {}
    for t, kk in cand.tolist():
        digits = np.unravel_index(t, radix) if radix else ()
        key = (int(table[t, kk]), tuple(int(pops[i][d]) for i, d in enumerate(digits)) + (kk + 1,))
        profiles.setdefault(key, []).append((t, kk))
    top_val, top_keys = None, []
    for key in profiles:
        count, card = key
        v = FactoredValue.from_int(count)
        for c, sj in zip(card, sp):
            if sj and c > 1:
                v = v / FactoredValue.from_int(c) ** sj
        cmp = 1 if top_val is None else v.compare(top_val)
        if cmp > 0:
            top_val, top_keys = v, [key]
        elif cmp == 0:
            top_keys.append(key)
    best_sets = None
    for key in top_keys:
        for t, kk in profiles[key]:
            sets = _reconstruct(images, perm, codes, sizes, radix, t, kk + 1)
            if best_sets is None or sets < best_sets:
                best_sets = sets
    return IndicatorResult(top_val, float(top_val), best_sets, space)


def _reconstruct(images, perm, codes, sizes, radix, t: int, k: int) -> tuple[tuple[int, ...], ...]:
    digits = np.unravel_index(t, radix) if radix else ()
    chosen: dict[int, tuple[int, ...]] = {}
    ok = np.ones(len(codes), dtype=bool)
    for i, d in enumerate(digits):
        mask = int(d) + 1
        bits = [b for b in range(int(sizes[i])) if mask >> b & 1]
        ok &= np.isin(codes[:, i], bits)
        chosen[perm[i]] = tuple(int(images[perm[i]][b]) for b in bits)
    hist = np.bincount(codes[ok, -1], minlength=int(sizes[-1]))
    order = sorted(range(len(hist)), key=lambda b: (-hist[b], b))[:k]
    chosen[perm[-1]] = tuple(sorted(int(images[perm[-1]][b]) for b in order))
    return tuple(chosen[j] for j in range(len(perm)))


@dataclass(frozen=True)
class FiberReduction:
    datum: HblDatum  # quotient datum
    functions: tuple[np.ndarray, ...]  # F_j on each G_j / phi_j(G')
    # exact F_j^(1/s_j) per coset, when the inputs allow it
    power_sums: tuple[tuple[Fraction, ...], ...] | None

    def norms(self, s) -> tuple[FactoredValue, ...]:
        """Exact ``||F_j||_{1/s_j}``."""
        if self.power_sums is None:
            raise PreconditionError("exact norms need rational fiber power sums")
        return tuple(FactoredValue.from_fraction(sum(p)) ** sj for p, sj in zip(self.power_sums, s))


def fiber_reduce(datum: HblDatum, sub: Subgroup, f: FunctionTuple, s) -> FiberReduction:
    """``F_j(x + G'_j) = (sum_{y in G'_j} f_j(x + y)^(1/s_j))^(s_j)`` with ``G'_j = phi_j(G')``."""
    _require_finite(datum)
    s = datum.check_exponents(s)
    _check_shape(datum, f)
    if any(sj == 0 for sj in s):
        raise PreconditionError("fiber reduction needs every exponent positive")
    q = quotient_datum(datum, sub)
    exact = _is_exact(f)
    Fs, sums = [], []
    for j, (fj, sj, pi, C) in enumerate(zip(f, s, q.target_projections, datum.targets)):
        codes = _torsion_projection(pi, C)
        nq = q.targets[j].torsion_order
        if exact:
            acc = [Fraction(0)] * nq
            for y, v in enumerate(fj):
                if v:
                    acc[codes[y]] += _exact_power(Fraction(v), 1 / sj)
            sums.append(tuple(acc))
            Fs.append(np.array([float(a) ** float(sj) for a in acc]))
        else:
            P = np.bincount(codes, weights=np.asarray(fj, dtype=float) ** (1 / float(sj)), minlength=nq)
            Fs.append(P ** float(sj))
    return FiberReduction(q, tuple(Fs), tuple(sums) if exact else None)


def _torsion_projection(pi, C) -> np.ndarray:
    # codes of the quotient images of the torsion elements of C
    T = C.torsion
    coords = T.decode_array(np.arange(T.order))
    full = np.concatenate([np.zeros((T.order, C.free_rank), dtype=np.int64), coords], axis=1)
    Q = pi.codomain
    m = np.array(pi.matrix, dtype=np.int64).reshape(Q.ngens, C.ngens)
    img = full @ m.T
    return Q.torsion.encode_array(img[:, Q.free_rank :])


@dataclass
class Verdict:
    constant: ConstantReport
    indicator: IndicatorResult | None
    ascent: list[AscentTrace] = field(default_factory=list)
    partial: bool = False
    witness_ratio: FactoredValue | None = None

    @property
    def bound(self) -> float:
        return self.constant.float_value

    @property
    def measured(self) -> list[float]:
        out = [r for tr in self.ascent for r in tr.ratios]
        if self.indicator is not None:
            out.append(self.indicator.float_value)
        return out

    @property
    def max_ratio(self) -> float:
        return max(self.measured)

    @property
    def upper_ok(self) -> bool:
        if self.indicator is not None and self.indicator.value.compare(self.constant.value) > 0:
            return False
        return all(r <= self.bound * (1 + BOUND_TOL) for r in self.measured)

    @property
    def attain_ok(self) -> bool:
        return any(r >= self.bound * (1 - ATTAIN_TOL) for r in self.measured)

    @property
    def trivial_ok(self) -> bool:
        return all(r <= self.constant.witness.ambient.order * (1 + BOUND_TOL) for r in self.measured)

    @property
    def passed(self) -> bool:
        return self.upper_ok and self.attain_ok


def verify_theorem(
    datum: HblDatum,
    s,
    budget: int = DEFAULT_BUDGET,
    restarts: int = 8,
    seed: int = 0,
    max_iters: int = 200,
    tol: float = 1e-12,
    max_order: int = DEFAULT_MAX_ORDER,
) -> Verdict:
    """Run both oracles against the computed constant.

    If the exhaustive search is over budget the verdict is marked partial
    and rests on the ascent runs alone.
    """
    _require_finite(datum)
    s = datum.check_exponents(s)
    const = global_constant(datum, s, max_order)
    verdict = Verdict(const, None)
    try:
        verdict.indicator = indicator_search(datum, s, budget)
    except BudgetExceededError:
        verdict.partial = True
    wf = subgroup_indicators(datum, const.witness)
    verdict.witness_ratio = ratio(datum, s, wf, exact=True)
    verdict.ascent.append(alternating_ascent(datum, s, wf, max_iters, tol))
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        for _attempt in range(8):
            try:
                trace = alternating_ascent(datum, s, random_init(datum, rng), max_iters, tol)
            except DegenerateAscentError:
                continue
            verdict.ascent.append(trace)
            break
    return verdict


def witness_attains(datum: HblDatum, s, H: Subgroup) -> bool:
    """Whether the image indicators of ``H`` achieve ``A(H, s)`` exactly."""
    return ratio(datum, s, subgroup_indicators(datum, H), exact=True) == local_constant(datum, H, s)
