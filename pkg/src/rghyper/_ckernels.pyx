# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.

Every function here has a twin with the same signature and the same
results (bit for bit) in :mod:`rghyper._pykernels`. Squared distances are
always accumulated axis by axis in index order, starting from ``0.0``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY
from libc.stdint cimport int64_t
from libcpp.vector cimport vector

cnp.import_array()

BACKEND = "cython"

cdef inline double _sqdist(const double[:, ::1] A, Py_ssize_t i,
                           const double[:, ::1] B, Py_ssize_t j,
                           Py_ssize_t d) noexcept nogil:
    cdef double s = 0.0
    cdef double t
    cdef Py_ssize_t k
    for k in range(d):
        t = A[i, k] - B[j, k]
        s += t * t
    return s


cdef inline int64_t _find(int64_t* parent, int64_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef inline bint _union(int64_t* parent, int64_t* size, int64_t a, int64_t b) noexcept nogil:
    a = _find(parent, a)
    b = _find(parent, b)
    if a == b:
        return False
    if size[a] < size[b]:
        a, b = b, a
    parent[b] = a
    size[a] += size[b]
    return True


def uf_roots(Py_ssize_t n, u, v):
    """Union-find over edges ``(u[k], v[k])``; returns ``(count, roots)``."""
    cdef const int64_t[::1] uu = np.ascontiguousarray(u, dtype=np.int64)
    cdef const int64_t[::1] vv = np.ascontiguousarray(v, dtype=np.int64)
    if uu.shape[0] != vv.shape[0]:
        raise ValueError("edge endpoint arrays differ in length")
    parent_arr = np.arange(n, dtype=np.int64)
    size_arr = np.ones(n, dtype=np.int64)
    cdef int64_t[::1] parent = parent_arr
    cdef int64_t[::1] size = size_arr
    cdef Py_ssize_t k, m = uu.shape[0]
    cdef Py_ssize_t count = n
    for k in range(m):
        if uu[k] < 0 or uu[k] >= n or vv[k] < 0 or vv[k] >= n:
            raise IndexError("edge endpoint out of range")
    with nogil:
        for k in range(m):
            if _union(&parent[0], &size[0], uu[k], vv[k]):
                count -= 1
        for k in range(n):
            parent[k] = _find(&parent[0], k)
    return count, parent_arr


def all_pair_sqdist(A, B):
    """Flattened ``(len(A) * len(B),)`` squared distances, row-major in A."""
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], d = a.shape[1]
    out_arr = np.empty(na * nb, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(na):
            for j in range(nb):
                out[i * nb + j] = _sqdist(a, i, b, j, d)
    return out_arr


def kruskal_sweep(Py_ssize_t na, Py_ssize_t nb, order):
    """Scan pair ids ``order`` (``a * nb + b``) until the bipartite graph on
    ``na + nb`` vertices is connected. Returns the position in ``order`` of the
    completing pair, or -1 if the order is exhausted first."""
    cdef const int64_t[::1] o = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t n = na + nb
    parent_arr = np.arange(n, dtype=np.int64)
    size_arr = np.ones(n, dtype=np.int64)
    cdef int64_t[::1] parent = parent_arr
    cdef int64_t[::1] size = size_arr
    cdef Py_ssize_t k, m = o.shape[0], count = n, hit = -1
    cdef int64_t e
    if n <= 1:
        return 0 if m > 0 else -1
    with nogil:
        for k in range(m):
            e = o[k]
            if _union(&parent[0], &size[0], e // nb, na + e % nb):
                count -= 1
                if count == 1:
                    hit = k
                    break
    return hit


def bottleneck_prim(A, B):
    """Largest edge of a minimum spanning tree of the complete bipartite
    distance graph between A and B (dense Prim, O(n) memory).

    Returns ``(d2, a, b)``: the squared length of the bottleneck edge and its
    endpoints. Both sets must be non-empty.
    """
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], d = a.shape[1]
    if na == 0 or nb == 0:
        raise ValueError("both point sets must be non-empty")
    cdef Py_ssize_t nv = na + nb
    key_arr = np.full(nv, np.inf, dtype=np.float64)
    parent_arr = np.full(nv, -1, dtype=np.int64)
    intree_arr = np.zeros(nv, dtype=np.uint8)
    cdef double[::1] key = key_arr
    cdef int64_t[::1] parent = parent_arr
    cdef unsigned char[::1] intree = intree_arr
    cdef Py_ssize_t step, v, u, j
    cdef double m, d2, best = -1.0
    cdef int64_t bu = -1, bp = -1
    key[0] = 0.0
    with nogil:
        for step in range(nv):
            u = -1
            m = INFINITY
            for v in range(nv):
                if not intree[v] and (u < 0 or key[v] < m):
                    u = v
                    m = key[v]
            intree[u] = 1
            if step > 0 and key[u] > best:
                best = key[u]
                bu = u
                bp = parent[u]
            if u < na:
                for j in range(nb):
                    v = na + j
                    if not intree[v]:
                        d2 = _sqdist(a, u, b, j, d)
                        if d2 < key[v]:
                            key[v] = d2
                            parent[v] = u
            else:
                for j in range(na):
                    if not intree[j]:
                        d2 = _sqdist(a, j, b, u - na, d)
                        if d2 < key[j]:
                            key[j] = d2
                            parent[j] = u
    if nv == 1:
        return 0.0, -1, -1
    if bu < na:
        return best, int(bu), int(bp - na)
    return best, int(bp), int(bu - na)


cdef inline Py_ssize_t _bsearch(const int64_t[::1] keys, Py_ssize_t n, int64_t x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    if lo < n and keys[lo] == x:
        return lo
    return -1


def radius_pairs(A, B, double r, double cell_width, bint ordered=True):
    """All ``(i, j)`` with ``|A[i] - B[j]|^2 < r*r``, sorted by ``(j, i)``
    when ``ordered`` (otherwise in scan order).

    B is bucketed on a uniform grid of ``cell_width``; each A point scans the
    buckets within reach. Falls back to a brute-force scan when the
    neighbourhood has more cells than B has points.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    cdef const double[:, ::1] a = A
    cdef const double[:, ::1] b = B
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], d = a.shape[1]
    cdef double r2 = r * r
    cdef vector[int64_t] out_a, out_b
    cdef const int64_t[::1] keys_a, ukeys, starts, sorted_b, deltas
    cdef Py_ssize_t i, j, k

    if na == 0 or nb == 0 or r <= 0.0:
        return np.empty(0, np.int64), np.empty(0, np.int64)

    plan = _grid_plan(A, B, r, cell_width)
    if plan is None:
        with nogil:
            for i in range(na):
                for j in range(nb):
                    if _sqdist(a, i, b, j, d) < r2:
                        out_a.push_back(i)
                        out_b.push_back(j)
    else:
        keys_a, ukeys, starts, sorted_b, deltas = plan
        with nogil:
            _grid_scan(a, b, r2, keys_a, ukeys, starts, sorted_b, deltas, out_a, out_b)
    ia = np.empty(out_a.size(), dtype=np.int64)
    ib = np.empty(out_b.size(), dtype=np.int64)
    cdef int64_t[::1] via = ia
    cdef int64_t[::1] vib = ib
    for k in range(<Py_ssize_t>out_a.size()):
        via[k] = out_a[k]
        vib[k] = out_b[k]
    if not ordered:
        return ia, ib
    order = np.lexsort((ia, ib))
    return ia[order], ib[order]


cdef int _grid_scan(const double[:, ::1] a, const double[:, ::1] b, double r2,
                    const int64_t[::1] keys_a, const int64_t[::1] ukeys,
                    const int64_t[::1] starts, const int64_t[::1] sorted_b,
                    const int64_t[::1] deltas,
                    vector[int64_t]& out_a, vector[int64_t]& out_b) noexcept nogil:
    cdef Py_ssize_t na = a.shape[0], d = a.shape[1]
    cdef Py_ssize_t nu = ukeys.shape[0], nd = deltas.shape[0]
    cdef Py_ssize_t i, o, c, s
    cdef int64_t j
    for i in range(na):
        for o in range(nd):
            c = _bsearch(ukeys, nu, keys_a[i] + deltas[o])
            if c < 0:
                continue
            for s in range(starts[c], starts[c + 1]):
                j = sorted_b[s]
                if _sqdist(a, i, b, j, d) < r2:
                    out_a.push_back(i)
                    out_b.push_back(j)
    return 0


def _grid_plan(A, B, double r, double cell_width):
    # shared with the python backend so both pick the same cells
    from rghyper._pykernels import grid_plan
    return grid_plan(A, B, r, cell_width)
