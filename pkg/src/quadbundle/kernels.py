"""Hot loops over F_q-points: quadric point counts and batched corank/discriminant.

Field elements are integer codes (see :mod:`quadbundle.exact.fields`).  Every
kernel exists twice: an ``@njit`` loop version and a vectorised numpy
version; :func:`quadbundle._accel.backend` picks one at call time.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _accel
from ._accel import njit
from .exact.fields import FiniteField

_CHUNK = 1 << 18


class Tables(NamedTuple):
    p: int
    r: int
    q: int
    exp: np.ndarray
    log: np.ndarray
    zech: np.ndarray
    neg: np.ndarray


def tables(field: FiniteField) -> Tables:
    return Tables(field.p, field.r, field.q, field.exp, field.log, field.zech, field.neg)


# ---------------------------------------------------------------------------
# scalar field ops (numba)


@njit
def _add(a, b, p, r, q, exp, log, zech):
    if r == 1:
        return (a + b) % p
    if a == 0:
        return b
    if b == 0:
        return a
    la = log[a]
    d = log[b] - la
    if d < 0:
        d += q - 1
    z = zech[d]
    if z < 0:
        return 0
    return exp[la + z]


@njit
def _mul(a, b, p, r, exp, log):
    if a == 0 or b == 0:
        return 0
    if r == 1:
        return (a * b) % p
    return exp[log[a] + log[b]]


@njit
def _inv(a, q, exp, log):
    e = q - 1 - log[a]
    if e == q - 1:
        e = 0
    return exp[e]


# ---------------------------------------------------------------------------
# vectorised field ops (numpy)


def vadd(a, b, T: Tables):
    if T.r == 1:
        return (a + b) % T.p
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    out = np.where(a == 0, b, a).astype(np.int64)
    both = (a != 0) & (b != 0)
    if both.any():
        la = T.log[a[both]]
        d = (T.log[b[both]] - la) % (T.q - 1)
        z = T.zech[d]
        res = np.where(z < 0, 0, T.exp[la + np.maximum(z, 0)])
        out[both] = res
    return out


def vmul(a, b, T: Tables):
    if T.r == 1:
        return (np.asarray(a, dtype=np.int64) * b) % T.p
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    nz = (a != 0) & (b != 0)
    return np.where(nz, T.exp[T.log[a] * nz + T.log[b] * nz], 0)


def vneg(a, T: Tables):
    return T.neg[a]


def vinv(a, T: Tables):
    """Inverse of nonzero codes; zero maps to zero."""
    a = np.asarray(a, dtype=np.int64)
    e = (T.q - 1 - T.log[a]) % (T.q - 1)
    return np.where(a == 0, 0, T.exp[e])


def vpow(a, k: int, T: Tables):
    a = np.asarray(a, dtype=np.int64)
    if k == 0:
        return np.ones_like(a)
    return np.where(a == 0, 0, T.exp[(T.log[a] * k) % (T.q - 1)])


def quadratic_character(codes, T: Tables):
    """+1 on nonzero squares, -1 on non-squares, 0 on zero (q odd)."""
    codes = np.asarray(codes, dtype=np.int64)
    lg = T.log[codes]
    return np.where(codes == 0, 0, np.where(lg % 2 == 0, 1, -1))


# ---------------------------------------------------------------------------
# projective enumeration


def projective_points(q: int, dim: int) -> np.ndarray:
    """All points of P^dim(F_q), first nonzero coordinate 1.

    Order: leading position 0, 1, ..., dim; within a block the trailing
    coordinates run lexicographically with the last one fastest.
    """
    blocks = []
    for k in range(dim + 1):
        tail = dim - k
        count = q**tail
        pts = np.zeros((count, dim + 1), dtype=np.int64)
        pts[:, k] = 1
        idx = np.arange(count, dtype=np.int64)
        for c in range(dim, k, -1):
            pts[:, c] = idx % q
            idx //= q
        blocks.append(pts)
    return np.concatenate(blocks, axis=0)


def projective_size(q: int, dim: int) -> int:
    return (q ** (dim + 1) - 1) // (q - 1)


# ---------------------------------------------------------------------------
# kernel 1: number of projective zeros of a quadratic form


@njit
def _count_zeros_nb(gram, p, r, q, exp, log, zech):
    n = gram.shape[0]
    # off-diagonal coefficients appear twice in x^T G x
    h = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i == j:
                h[i, j] = gram[i, i]
            elif i < j:
                h[i, j] = _add(gram[i, j], gram[j, i], p, r, q, exp, log, zech)
    x = np.zeros(n, dtype=np.int64)
    total = 0
    for k in range(n):
        for i in range(n):
            x[i] = 0
        x[k] = 1
        while True:
            if r == 1:
                # prime field: plain integers, one reduction per point
                acc = 0
                for i in range(k, n):
                    if x[i] == 0:
                        continue
                    row = 0
                    for j in range(i, n):
                        row += h[i, j] * x[j]
                    acc += x[i] * row
                if acc % p == 0:
                    total += 1
            else:
                acc = 0
                for i in range(k, n):
                    xi = x[i]
                    if xi == 0:
                        continue
                    for j in range(i, n):
                        xj = x[j]
                        if xj == 0 or h[i, j] == 0:
                            continue
                        term = _mul(h[i, j], _mul(xi, xj, p, r, exp, log), p, r, exp, log)
                        acc = _add(acc, term, p, r, q, exp, log, zech)
                if acc == 0:
                    total += 1
            # odometer over the trailing coordinates, last one fastest
            c = n - 1
            while c > k:
                x[c] += 1
                if x[c] < q:
                    break
                x[c] = 0
                c -= 1
            if c == k:
                break
    return total


def _count_zeros_np(gram: np.ndarray, T: Tables) -> int:
    n = gram.shape[0]
    q = T.q
    h = {}
    for i in range(n):
        h[(i, i)] = int(gram[i, i])
        for j in range(i + 1, n):
            h[(i, j)] = int(vadd(gram[i, j], gram[j, i], T))
    total = 0
    for k in range(n):
        tail = n - 1 - k
        count = q**tail
        for start in range(0, count, _CHUNK):
            idx = np.arange(start, min(count, start + _CHUNK), dtype=np.int64)
            cols = {}
            rem = idx.copy()
            for c in range(n - 1, k, -1):
                cols[c] = rem % q
                rem //= q
            cols[k] = np.ones_like(idx)
            acc = np.zeros_like(idx)
            for i in range(k, n):
                for j in range(i, n):
                    c = h[(i, j)]
                    if c == 0:
                        continue
                    term = vmul(c, vmul(cols[i], cols[j], T), T)
                    acc = vadd(acc, term, T)
            total += int(np.count_nonzero(acc == 0))
    return total


def count_projective_zeros(gram: np.ndarray, T: Tables) -> int:
    gram = np.ascontiguousarray(gram, dtype=np.int64)
    if _accel.backend() == "numba":
        return int(_count_zeros_nb(gram, T.p, T.r, T.q, T.exp, T.log, T.zech))
    return _count_zeros_np(gram, T)


@njit
def _count_zeros_batch_nb(mats, p, r, q, exp, log, zech):
    out = np.zeros(mats.shape[0], dtype=np.int64)
    for b in range(mats.shape[0]):
        out[b] = _count_zeros_nb(mats[b], p, r, q, exp, log, zech)
    return out


def count_projective_zeros_batch(mats: np.ndarray, T: Tables) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    if _accel.backend() == "numba":
        return _count_zeros_batch_nb(mats, T.p, T.r, T.q, T.exp, T.log, T.zech)
    return np.array([_count_zeros_np(m, T) for m in mats], dtype=np.int64)


# ---------------------------------------------------------------------------
# kernel 2: congruence diagonalisation -> (rank, product of nonzero pivots)


@njit
def _diag_one(a, p, r, q, exp, log, zech, neg):
    n = a.shape[0]
    rank = 0
    prod = 1
    for k in range(n):
        piv = -1
        for i in range(k, n):
            if a[i, i] != 0:
                piv = i
                break
        if piv < 0:
            pi = -1
            pj = -1
            for i in range(k, n):
                for j in range(i + 1, n):
                    if a[i, j] != 0:
                        pi = i
                        pj = j
                        break
                if pi >= 0:
                    break
            if pi < 0:
                break
            # e_i <- e_i + e_j makes the (i, i) entry 2 a_ij != 0
            for c in range(n):
                a[pi, c] = _add(a[pi, c], a[pj, c], p, r, q, exp, log, zech)
            for c in range(n):
                a[c, pi] = _add(a[c, pi], a[c, pj], p, r, q, exp, log, zech)
            piv = pi
        if piv != k:
            for c in range(n):
                t = a[piv, c]
                a[piv, c] = a[k, c]
                a[k, c] = t
            for c in range(n):
                t = a[c, piv]
                a[c, piv] = a[c, k]
                a[c, k] = t
        d = a[k, k]
        dinv = _inv(d, q, exp, log)
        prod = _mul(prod, d, p, r, exp, log)
        rank += 1
        for i in range(k + 1, n):
            f = _mul(a[i, k], dinv, p, r, exp, log)
            if f == 0:
                continue
            for j in range(k + 1, n):
                a[i, j] = _add(a[i, j], neg[_mul(f, a[k, j], p, r, exp, log)], p, r, q, exp, log, zech)
        for i in range(k + 1, n):
            a[i, k] = 0
            a[k, i] = 0
    return rank, prod


@njit
def _diag_batch_nb(mats, p, r, q, exp, log, zech, neg):
    m = mats.shape[0]
    ranks = np.zeros(m, dtype=np.int64)
    dets = np.zeros(m, dtype=np.int64)
    for b in range(m):
        a = mats[b].copy()
        rk, pr = _diag_one(a, p, r, q, exp, log, zech, neg)
        ranks[b] = rk
        dets[b] = pr
    return ranks, dets


def _diag_batch_np(mats: np.ndarray, T: Tables):
    a = mats.copy()
    m, n, _ = a.shape
    rows = np.arange(m)
    ranks = np.zeros(m, dtype=np.int64)
    prod = np.ones(m, dtype=np.int64)
    active = np.ones(m, dtype=bool)
    for k in range(n):
        sub = np.arange(k, n)
        diag = a[:, sub, sub]
        has_diag = (diag != 0).any(axis=1)
        piv = k + np.argmax(diag != 0, axis=1)
        # rows needing the e_i + e_j fix-up
        fix = active & ~has_diag
        if fix.any():
            fidx = np.nonzero(fix)[0]
            blk = a[np.ix_(fidx, sub, sub)]
            iu = np.triu_indices(n - k, 1)
            upper = blk[:, iu[0], iu[1]] != 0
            found = upper.any(axis=1)
            dead = fidx[~found]
            active[dead] = False
            fidx = fidx[found]
            if fidx.size:
                sel = np.argmax(upper[found], axis=1)
                pi = k + iu[0][sel]
                pj = k + iu[1][sel]
                a[fidx, pi, :] = vadd(a[fidx, pi, :], a[fidx, pj, :], T)
                a[fidx, :, pi] = vadd(a[fidx, :, pi], a[fidx, :, pj], T)
                piv[fidx] = pi
        act = np.nonzero(active)[0]
        if act.size == 0:
            break
        pv = piv[act]
        # swap row/col pv <-> k
        perm = np.tile(np.arange(n), (act.size, 1))
        perm[np.arange(act.size), k] = pv
        perm[np.arange(act.size), pv] = k
        blk = a[act]
        blk = blk[np.arange(act.size)[:, None], perm, :]
        blk = blk[np.arange(act.size)[:, None, None], np.arange(n)[None, :, None], perm[:, None, :]]
        d = blk[:, k, k]
        prod[act] = vmul(prod[act], d, T)
        ranks[act] += 1
        if k + 1 < n:
            dinv = vinv(d, T)
            f = vmul(blk[:, k + 1 :, k], dinv[:, None], T)
            upd = vmul(f[:, :, None], blk[:, k, k + 1 :][:, None, :], T)
            blk[:, k + 1 :, k + 1 :] = vadd(blk[:, k + 1 :, k + 1 :], vneg(upd, T), T)
            blk[:, k + 1 :, k] = 0
            blk[:, k, k + 1 :] = 0
        a[act] = blk
    del rows
    return ranks, prod


def diagonalize_batch(mats: np.ndarray, T: Tables):
    """Rank and product of nonzero pivots of the congruence-diagonalised forms.

    The product is the determinant of the nondegenerate quotient form up to
    squares.  Characteristic 2 is not supported.
    """
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    if mats.ndim == 2:
        mats = mats[None]
    if _accel.backend() == "numba":
        return _diag_batch_nb(mats, T.p, T.r, T.q, T.exp, T.log, T.zech, T.neg)
    return _diag_batch_np(mats, T)


# ---------------------------------------------------------------------------
# family evaluation (shared by both backends; not a hot loop)


def evaluate_polys(coeffs: np.ndarray, exps: np.ndarray, points: np.ndarray, T: Tables) -> np.ndarray:
    """Evaluate K polynomials at many points.

    ``coeffs`` has shape (K, M) with the code of the coefficient of monomial
    ``exps[m]``; ``points`` has shape (N, r + 1).  Returns (N, K) codes.
    """
    npts = points.shape[0]
    mono = np.ones((npts, exps.shape[0]), dtype=np.int64)
    for m, e in enumerate(exps):
        val = np.ones(npts, dtype=np.int64)
        for v, k in enumerate(e):
            if k:
                val = vmul(val, vpow(points[:, v], int(k), T), T)
        mono[:, m] = val
    out = np.zeros((npts, coeffs.shape[0]), dtype=np.int64)
    for k in range(coeffs.shape[0]):
        acc = np.zeros(npts, dtype=np.int64)
        for m in range(exps.shape[0]):
            c = int(coeffs[k, m])
            if c:
                acc = vadd(acc, vmul(c, mono[:, m], T), T)
        out[:, k] = acc
    return out


def evaluate_family(coeffs: np.ndarray, exps: np.ndarray, points: np.ndarray, T: Tables) -> np.ndarray:
    """Evaluate a matrix of polynomials at many points.

    ``coeffs`` has shape (n, n, M); returns (N, n, n) codes.
    """
    n = coeffs.shape[0]
    flat = evaluate_polys(coeffs.reshape(n * n, -1), exps, points, T)
    return flat.reshape(points.shape[0], n, n)


def warm_up() -> None:
    """Trigger JIT compilation on tiny inputs (no-op on the numpy backend)."""
    if _accel.backend() != "numba":
        return
    from .exact.fields import GF

    for F in (GF(3), GF(3, 2)):
        T = tables(F)
        g = np.eye(2, dtype=np.int64)
        count_projective_zeros(g, T)
        count_projective_zeros_batch(g[None], T)
        diagonalize_batch(g[None], T)
