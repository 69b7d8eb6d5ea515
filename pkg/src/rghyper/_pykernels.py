"""Pure numpy/Python twins of the compiled kernels in ``_ckernels.pyx``.

Signatures and results match the compiled versions exactly, including the
order in which squared distances are accumulated (axis by axis from 0.0),
so either backend yields bit-identical radii.
"""
import itertools
import math

import numpy as np

from rghyper.unionfind import UnionFind

BACKEND = "python"

_EPS = np.finfo(np.float64).eps
_KEY_LIMIT = 1 << 62
_CHUNK = 1 << 22  # pair distances materialised per block


def sqdist_rows(X, Y):
    """Row-wise squared distances between equally long X and Y (or one row)."""
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    acc = np.zeros(np.broadcast_shapes(X.shape, Y.shape)[:-1], dtype=np.float64)
    for k in range(X.shape[-1]):
        t = X[..., k] - Y[..., k]
        acc += t * t
    return acc


def uf_roots(n, u, v):
    u = np.ascontiguousarray(u, dtype=np.int64)
    v = np.ascontiguousarray(v, dtype=np.int64)
    if u.shape != v.shape:
        raise ValueError("edge endpoint arrays differ in length")
    if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
        raise IndexError("edge endpoint out of range")
    uf = UnionFind(n)
    for a, b in zip(u.tolist(), v.tolist()):
        uf.union(a, b)
    roots = np.array([uf.find(i) for i in range(n)], dtype=np.int64)
    return uf.count, roots


def all_pair_sqdist(A, B):
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    return sqdist_rows(A[:, None, :], B[None, :, :]).ravel()


def kruskal_sweep(na, nb, order):
    order = np.ascontiguousarray(order, dtype=np.int64)
    n = na + nb
    if n <= 1:
        return 0 if order.size else -1
    uf = UnionFind(n)
    for k, e in enumerate(order.tolist()):
        if uf.union(e // nb, na + e % nb) and uf.count == 1:
            return k
    return -1


def bottleneck_prim(A, B):
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    na, nb = A.shape[0], B.shape[0]
    if na == 0 or nb == 0:
        raise ValueError("both point sets must be non-empty")
    nv = na + nb
    key = np.full(nv, np.inf)
    parent = np.full(nv, -1, dtype=np.int64)
    intree = np.zeros(nv, dtype=bool)
    # key with tree members masked to inf; argmin picks the first minimum,
    # the same tie rule as the compiled scan
    cand = key.copy()
    key[0] = cand[0] = 0.0
    best, bu, bp = -1.0, -1, -1
    for step in range(nv):
        u = int(np.argmin(cand))
        intree[u] = True
        cand[u] = np.inf
        if step > 0 and key[u] > best:
            best, bu, bp = float(key[u]), u, int(parent[u])
        if u < na:
            lo, d2 = na, sqdist_rows(A[u], B)
        else:
            lo, d2 = 0, sqdist_rows(A, B[u - na])
        hi = lo + d2.shape[0]
        upd = ~intree[lo:hi] & (d2 < key[lo:hi])
        idx = np.flatnonzero(upd) + lo
        key[idx] = d2[upd]
        cand[idx] = d2[upd]
        parent[idx] = u
    if nv == 1:
        return 0.0, -1, -1
    if bu < na:
        return best, bu, bp - na
    return best, bp, bu - na


def grid_plan(A, B, r, cell_width):
    """Bucket B on a grid; returns None when a brute-force scan is cheaper
    (or the cell keys would overflow).

    Result: ``(keys_a, ukeys, starts, sorted_b, deltas)`` where ``ukeys`` are
    the occupied cell keys of B in ascending order, ``sorted_b[starts[c]:
    starts[c+1]]`` the B indices in cell ``ukeys[c]`` and ``deltas`` the key
    offsets of every cell within reach.
    """
    if not cell_width > 0:
        raise ValueError("cell_width must be positive")
    d = A.shape[1]
    origin = np.minimum(A.min(axis=0), B.min(axis=0))
    fa = (A - origin) / cell_width
    fb = (B - origin) / cell_width
    amax = max(float(fa.max()), float(fb.max()))
    if not math.isfinite(amax) or amax > 2.0**50:
        return None
    # float cell coordinates carry rounding error; widen the reach so that
    # no pair closer than r can land further apart than `reach` cells
    reach = max(1, math.ceil(r / cell_width + 4 * _EPS * (amax + 1.0)))
    if (2 * reach + 1) ** d > B.shape[0]:
        return None
    ca = np.floor(fa).astype(np.int64) + reach
    cb = np.floor(fb).astype(np.int64) + reach
    dims = [int(max(ca[:, k].max(), cb[:, k].max())) + reach + 1 for k in range(d)]
    if math.prod(dims) >= _KEY_LIMIT:
        return None
    strides = [math.prod(dims[k + 1:]) for k in range(d)]
    svec = np.array(strides, dtype=np.int64)
    keys_a = ca @ svec
    keys_b = cb @ svec
    sorted_b = np.argsort(keys_b, kind="stable").astype(np.int64)
    ukeys, first = np.unique(keys_b[sorted_b], return_index=True)
    starts = np.append(first, B.shape[0]).astype(np.int64)
    deltas = np.array(
        [sum(o * s for o, s in zip(off, strides))
         for off in itertools.product(range(-reach, reach + 1), repeat=d)],
        dtype=np.int64,
    )
    return keys_a, ukeys.astype(np.int64), starts, sorted_b, deltas


def radius_pairs(A, B, r, cell_width, ordered=True):
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    na, nb = A.shape[0], B.shape[0]
    if na == 0 or nb == 0 or r <= 0.0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    r2 = r * r
    plan = grid_plan(A, B, r, cell_width)
    ia_parts, ib_parts = [], []
    if plan is None:
        step = max(1, _CHUNK // nb)
        for i0 in range(0, na, step):
            d2 = sqdist_rows(A[i0:i0 + step, None, :], B[None, :, :])
            ii, jj = np.nonzero(d2 < r2)
            ia_parts.append(ii + i0)
            ib_parts.append(jj)
    else:
        keys_a, ukeys, starts, sorted_b, deltas = plan
        nu = ukeys.shape[0]
        for delta in deltas:
            q = keys_a + delta
            pos = np.searchsorted(ukeys, q)
            ok = pos < nu
            ok[ok] = ukeys[pos[ok]] == q[ok]
            ai = np.flatnonzero(ok)
            if ai.size == 0:
                continue
            cells = pos[ai]
            counts = starts[cells + 1] - starts[cells]
            rep_a = np.repeat(ai, counts)
            within = np.arange(rep_a.size) - np.repeat(np.cumsum(counts) - counts, counts)
            bj = sorted_b[np.repeat(starts[cells], counts) + within]
            keep = sqdist_rows(A[rep_a], B[bj]) < r2
            ia_parts.append(rep_a[keep])
            ib_parts.append(bj[keep])
    ia = np.concatenate(ia_parts).astype(np.int64) if ia_parts else np.empty(0, np.int64)
    ib = np.concatenate(ib_parts).astype(np.int64) if ib_parts else np.empty(0, np.int64)
    if not ordered:
        return ia, ib
    order = np.lexsort((ia, ib))
    return ia[order], ib[order]
