"""Exact linear algebra over Q, GF(2) and Z for small dense matrices.

Field arithmetic is selected by ``p``: ``p = 0`` means the rationals (with
:class:`fractions.Fraction`), ``p = 2`` means GF(2).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def field_of(name: str) -> int:
    name = name.upper()
    if name in ("Q", "QQ"):
        return 0
    if name in ("Z2", "GF2", "F2"):
        return 2
    raise ValueError(f"unknown field {name!r}")


def convert(x, p: int):
    if p == 0:
        return Fraction(x)
    return int(x) % p


def _inv(x, p: int):
    if p == 0:
        return 1 / x
    return pow(int(x), -1, p)


def rref(rows: Sequence[Sequence], ncols: int, p: int = 0):
    """Reduced row echelon form; returns ``(rows, pivot_columns)`` with zero rows dropped."""
    a = [[convert(x, p) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = _inv(a[r][c], p)
        if inv != 1:
            a[r] = [x * inv for x in a[r]]
            if p:
                a[r] = [x % p for x in a[r]]
        row = a[r]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                if p:
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], row)]
                else:
                    a[i] = [x - f * y for x, y in zip(a[i], row)]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None, p: int = 0) -> int:
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    if p == 2:
        return gf2_rank([sum(1 << j for j, x in enumerate(r) if int(x) % 2) for r in rows])
    return len(rref(rows, ncols, p)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, p: int = 0) -> list[list]:
    """Basis of ``{x : A x = 0}`` for ``A`` given by ``rows``."""
    red, piv = rref(rows, ncols, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    zero, one = convert(0, p), convert(1, p)
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, c in zip(red, piv):
            v[c] = (-r[f]) % p if p else -r[f]
        basis.append(v)
    return basis


def reduce_vector(v: Sequence, red: Sequence[Sequence], pivots: Sequence[int], p: int = 0) -> list:
    """Reduce ``v`` against RREF rows so it vanishes at every pivot column."""
    v = [convert(x, p) for x in v]
    for row, c in zip(red, pivots):
        f = v[c]
        if f:
            if p:
                v = [(x - f * y) % p for x, y in zip(v, row)]
            else:
                v = [x - f * y for x, y in zip(v, row)]
    return v


def in_span(v: Sequence, rows: Sequence[Sequence], ncols: int, p: int = 0) -> bool:
    red, piv = rref(rows, ncols, p) if rows else ([], [])
    return not any(reduce_vector(v, red, piv, p))


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of rows packed as integer bitsets."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            if h in basis:
                r ^= basis[h]
            else:
                basis[h] = r
                break
    return len(basis)


def smith_invariants(mat: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors (positive) of an integer matrix."""
    a = [list(map(int, r)) for r in mat]
    if not a or not a[0]:
        return []
    nr, nc = len(a), len(a[0])
    out = []
    t = 0
    while t < min(nr, nc):
        # pick the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            piv = a[t][t]
            done = True
            for i in range(t + 1, nr):
                q = a[i][t] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, nc):
                q = a[t][j] // piv
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if a[i][j] % piv), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move a smaller remainder to the pivot position
            best = None
            for i in range(t, nr):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(best[2])):
                    best = (i, t, a[i][t])
            for j in range(t, nc):
                if a[t][j] and (best is None or abs(a[t][j]) < abs(best[2])):
                    best = (t, j, a[t][j])
            i, j, _ = best
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        out.append(abs(a[t][t]))
        t += 1
    return out


def integer_rank_unit(mat: Sequence[Sequence[int]]) -> tuple[int, bool]:
    """Rank by elimination with unit pivots only.

    Returns ``(rank, complete)``; ``complete`` is False if a nonzero block
    without a ±1 entry remained (the caller must then fall back to Smith form).
    When complete, all invariant factors are 1, so the cokernel is torsion-free.
    """
    a = [list(map(int, r)) for r in mat]
    nr = len(a)
    nc = len(a[0]) if a else 0
    rk = 0
    rows_alive = list(range(nr))
    cols_alive = set(range(nc))
    while True:
        piv = None
        nonzero = False
        for i in rows_alive:
            for j in cols_alive:
                x = a[i][j]
                if x:
                    nonzero = True
                    if x == 1 or x == -1:
                        piv = (i, j)
                        break
            if piv:
                break
        if piv is None:
            return rk, not nonzero
        i, j = piv
        x = a[i][j]
        for k in rows_alive:
            if k != i and a[k][j]:
                f = a[k][j] * x
                a[k] = [u - f * v for u, v in zip(a[k], a[i])]
        rows_alive.remove(i)
        cols_alive.discard(j)
        rk += 1
