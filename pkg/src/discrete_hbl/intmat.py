"""Exact integer linear algebra on lists of Python ints.

Matrices are lists of rows.  Every routine works with arbitrary precision
integers, so nothing here can overflow.

>>> hnf([[4, 6], [2, 2]])
[[2, 0], [0, 2]]
>>> smith_diagonal([[2, 4], [6, 8]])
[2, 4]
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: Sequence[int], a: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Row vector times matrix."""
    out = [0] * ncols
    for c, row in zip(v, a):
        if c:
            for k, x in enumerate(row):
                out[k] += c * x
    return out


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    The result is the unique basis in reduced echelon form: positive pivots,
    entries above each pivot reduced into ``[0, pivot)``, zero rows dropped.
    """
    a = [list(map(int, r)) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    n = len(a)
    lead = 0
    for c in range(ncols):
        if lead >= n:
            break
        while True:
            nz = [i for i in range(lead, n) if a[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[lead], a[i0] = a[i0], a[lead]
            p = a[lead][c]
            clean = True
            for i in range(lead + 1, n):
                if a[i][c]:
                    q = a[i][c] // p
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[lead])]
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if not any(a[i][c] for i in range(lead, n)):
            continue
        if a[lead][c] < 0:
            a[lead] = [-x for x in a[lead]]
        p = a[lead][c]
        for i in range(lead):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[lead])]
        lead += 1
    return a[:lead]


def pivots(h: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for row in h:
        for c, x in enumerate(row):
            if x:
                out.append(c)
                break
    return out


def reduce_mod_hnf(x: Sequence[int], h: Sequence[Sequence[int]]) -> list[int]:
    """Canonical representative of ``x`` modulo the lattice with HNF ``h``."""
    x = list(x)
    for row, c in zip(h, pivots(h)):
        q = x[c] // row[c]
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    return x


def solve_hnf(h: Sequence[Sequence[int]], x: Sequence[int]) -> list[int] | None:
    """Integer ``y`` with ``y @ h == x``, or None when ``x`` is not in the lattice."""
    x = list(x)
    y = []
    for row, c in zip(h, pivots(h)):
        q, r = divmod(x[c], row[c])
        if r:
            return None
        y.append(q)
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    if any(x):
        return None
    return y


def left_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis (HNF) of ``{x : x @ a == 0}`` over the integers."""
    n = len(a)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    h = hnf(aug, ncols + n)
    ker = [row[ncols:] for row in h if not any(row[:ncols])]
    return hnf(ker, n)


def rank(rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return len(hnf(rows, ncols))


def intersect_lattices(b1: Sequence[Sequence[int]], b2: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """HNF basis of the intersection of two integer row lattices."""
    if not b1 or not b2:
        return []
    stacked = [list(r) for r in b1] + [[-v for v in r] for r in b2]
    ker = left_kernel(stacked, ncols)
    k1 = len(b1)
    return hnf([vecmat(k[:k1], b1, ncols) for k in ker], ncols)


def smith(a: Sequence[Sequence[int]], nrows: int | None = None, ncols: int | None = None):
    """Smith normal form with transforms.

    Returns ``(u, d, v, vinv)`` with ``u @ a @ v == d`` diagonal,
    ``d[i][i]`` nonnegative and dividing ``d[i+1][i+1]``, and ``vinv`` the
    inverse of ``v``.  ``u`` and ``v`` are unimodular.
    """
    d = [list(map(int, r)) for r in a]
    n = len(d) if nrows is None else nrows
    k = (len(d[0]) if d else 0) if ncols is None else ncols
    u = identity(n)
    v = identity(k)
    vinv = identity(k)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        # col_dst += q * col_src; the inverse gets row_src -= q * row_dst
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]
        vinv[src] = [x - q * y for x, y in zip(vinv[src], vinv[dst])]

    t = 0
    while t < min(n, k):
        best = None
        for i in range(t, n):
            for j in range(t, k):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, n):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or bool(d[i][t])
            for j in range(t + 1, k):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or bool(d[t][j])
            if dirty:
                cand = [(abs(d[i][t]), i, t) for i in range(t + 1, n) if d[i][t]]
                cand += [(abs(d[t][j]), t, j) for j in range(t + 1, k) if d[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, k) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v, vinv


def smith_diagonal(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of ``a``."""
    _, d, _, _ = smith(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]
