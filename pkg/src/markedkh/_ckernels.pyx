# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: cube circle tracing, map assembly, sparse GF(2) column reduction.

Mirrors ``_pykernels`` function by function.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int8_t, int32_t, int64_t, uint8_t
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map

cnp.import_array()


cdef inline int _find(int32_t* parent, int a) noexcept nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


cdef inline void _join(int32_t* parent, int a, int b) noexcept nogil:
    cdef int ra = _find(parent, a)
    cdef int rb = _find(parent, b)
    if ra < rb:
        parent[rb] = ra
    elif rb < ra:
        parent[ra] = rb


def resolve_cube(res_slots, drop_slots, int n_edges):
    cdef int32_t[:, ::1] rs = np.ascontiguousarray(np.asarray(res_slots, dtype=np.int32).reshape(-1, 4))
    cdef int32_t[:, ::1] ds = np.ascontiguousarray(np.asarray(drop_slots, dtype=np.int32).reshape(-1, 4))
    cdef int r = rs.shape[0]
    cdef int nd = ds.shape[0]
    cdef Py_ssize_t nv = (<Py_ssize_t>1) << r
    circ_np = np.zeros((nv, n_edges), dtype=np.int8)
    ncirc_np = np.zeros(nv, dtype=np.int32)
    cdef int8_t[:, ::1] circ = circ_np
    cdef int32_t[::1] ncirc = ncirc_np
    cdef vector[int32_t] parent_v = vector[int32_t](n_edges + 1)
    cdef vector[int32_t] ids_v = vector[int32_t](n_edges + 1)
    cdef int32_t* parent = parent_v.data()
    cdef int32_t* ids = ids_v.data()
    cdef Py_ssize_t v
    cdef int i, e, bit, cnt, root
    with nogil:
        for v in range(nv):
            for e in range(n_edges):
                parent[e] = e
                ids[e] = -1
            for i in range(nd):
                _join(parent, ds[i, 0], ds[i, 2])
                _join(parent, ds[i, 1], ds[i, 3])
            for i in range(r):
                bit = (v >> i) & 1
                if bit == 0:
                    _join(parent, rs[i, 0], rs[i, 1])
                    _join(parent, rs[i, 2], rs[i, 3])
                else:
                    _join(parent, rs[i, 0], rs[i, 3])
                    _join(parent, rs[i, 1], rs[i, 2])
            cnt = 0
            for e in range(n_edges):
                root = _find(parent, e)
                if ids[root] < 0:
                    ids[root] = cnt
                    cnt += 1
                circ[v, e] = <int8_t>ids[root]
            ncirc[v] = cnt
    return circ_np, ncirc_np


cdef inline int64_t _expand(int64_t loc, int b) noexcept nogil:
    if b < 0:
        return loc
    return ((loc >> b) << (b + 1)) | (loc & ((<int64_t>1 << b) - 1))


cdef inline int64_t _compress(int64_t full, int b) noexcept nogil:
    if b < 0:
        return full
    return ((full >> (b + 1)) << b) | (full & ((<int64_t>1 << b) - 1))


def map_pairs(circ_s, circ_d, nc_s, nc_d, off_s, off_d, dim_s, dim_d,
              pairs, slots, bint ident, int based_edge):
    cdef int8_t[:, ::1] cs = np.ascontiguousarray(circ_s, dtype=np.int8)
    cdef int8_t[:, ::1] cd = np.ascontiguousarray(circ_d, dtype=np.int8)
    cdef int32_t[::1] ncs = np.ascontiguousarray(nc_s, dtype=np.int32)
    cdef int64_t[::1] os_ = np.ascontiguousarray(off_s, dtype=np.int64)
    cdef int64_t[::1] od = np.ascontiguousarray(off_d, dtype=np.int64)
    cdef int64_t[::1] dms = np.ascontiguousarray(dim_s, dtype=np.int64)
    cdef int64_t[::1] dmd = np.ascontiguousarray(dim_d, dtype=np.int64)
    cdef int64_t[:, ::1] pr = np.ascontiguousarray(np.asarray(pairs, dtype=np.int64).reshape(-1, 2))
    cdef int32_t[:, ::1] sl = np.ascontiguousarray(np.asarray(slots, dtype=np.int32).reshape(-1, 4))
    cdef Py_ssize_t npairs = pr.shape[0]
    cdef int n_edges = cs.shape[1]
    cdef vector[int64_t] rows, cols
    cdef int perm[128]
    cdef int keep[128]
    cdef int ts[4]
    cdef int td[4]
    cdef int nts, ntd, nkeep, c, k, e, j, bs, bd, a, b
    cdef bint dup
    cdef Py_ssize_t p
    cdef int64_t v, w, loc, full, base, t, t2
    with nogil:
        for p in range(npairs):
            v = pr[p, 0]
            w = pr[p, 1]
            if dms[v] == 0 or dmd[w] == 0:
                continue
            nts = 0
            ntd = 0
            for k in range(4):
                c = cs[v, sl[p, k]]
                dup = False
                for j in range(nts):
                    if ts[j] == c:
                        dup = True
                if not dup:
                    ts[nts] = c
                    nts += 1
                c = cd[w, sl[p, k]]
                dup = False
                for j in range(ntd):
                    if td[j] == c:
                        dup = True
                if not dup:
                    td[ntd] = c
                    ntd += 1
            if nts == ntd and not ident:
                continue
            if nts > 2 or ntd > 2 or (nts == 2 and ntd == 2):
                with gil:
                    raise ValueError("crossing touches an unexpected number of circles")
            for e in range(n_edges):
                perm[cs[v, e]] = cd[w, e]
            nkeep = 0
            for c in range(ncs[v]):
                dup = False
                for j in range(nts):
                    if ts[j] == c:
                        dup = True
                if not dup:
                    keep[nkeep] = c
                    nkeep += 1
            bs = cs[v, based_edge] if based_edge >= 0 else -1
            bd = cd[w, based_edge] if based_edge >= 0 else -1
            for loc in range(dms[v]):
                full = _expand(loc, bs)
                base = 0
                for j in range(nkeep):
                    if (full >> keep[j]) & 1:
                        base |= (<int64_t>1) << perm[keep[j]]
                if nts == 2:
                    a = (full >> ts[0]) & 1
                    b = (full >> ts[1]) & 1
                    if a and b:
                        continue
                    t = base | ((<int64_t>(a | b)) << td[0])
                    if bd < 0 or not ((t >> bd) & 1):
                        rows.push_back(od[w] + _compress(t, bd))
                        cols.push_back(os_[v] + loc)
                elif ntd == 2:
                    a = (full >> ts[0]) & 1
                    if a:
                        t = base | ((<int64_t>1) << td[0]) | ((<int64_t>1) << td[1])
                        if bd < 0 or not ((t >> bd) & 1):
                            rows.push_back(od[w] + _compress(t, bd))
                            cols.push_back(os_[v] + loc)
                    else:
                        t = base | ((<int64_t>1) << td[0])
                        t2 = base | ((<int64_t>1) << td[1])
                        if bd < 0 or not ((t >> bd) & 1):
                            rows.push_back(od[w] + _compress(t, bd))
                            cols.push_back(os_[v] + loc)
                        if bd < 0 or not ((t2 >> bd) & 1):
                            rows.push_back(od[w] + _compress(t2, bd))
                            cols.push_back(os_[v] + loc)
                else:
                    t = base | (((full >> ts[0]) & 1) << td[0])
                    if bd < 0 or not ((t >> bd) & 1):
                        rows.push_back(od[w] + _compress(t, bd))
                        cols.push_back(os_[v] + loc)
    out_r = np.empty(rows.size(), dtype=np.int64)
    out_c = np.empty(cols.size(), dtype=np.int64)
    cdef int64_t[::1] orv = out_r
    cdef int64_t[::1] ocv = out_c
    cdef Py_ssize_t i
    for i in range(<Py_ssize_t>rows.size()):
        orv[i] = rows[i]
        ocv[i] = cols[i]
    return out_r, out_c


cdef void _xor_into(vector[int64_t]& col, vector[int64_t]& other, vector[int64_t]& tmp) noexcept nogil:
    # symmetric difference of two ascending index lists
    tmp.clear()
    cdef size_t i = 0, j = 0
    cdef size_t n1 = col.size(), n2 = other.size()
    while i < n1 and j < n2:
        if col[i] < other[j]:
            tmp.push_back(col[i])
            i += 1
        elif other[j] < col[i]:
            tmp.push_back(other[j])
            j += 1
        else:
            i += 1
            j += 1
    while i < n1:
        tmp.push_back(col[i])
        i += 1
    while j < n2:
        tmp.push_back(other[j])
        j += 1
    col.swap(tmp)


def reduce_columns(indptr, indices, Py_ssize_t n_rows, skip):
    cdef int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t ncols = ip.shape[0] - 1
    cdef uint8_t[::1] sk
    if skip is None:
        sk = np.zeros(max(ncols, 1), dtype=np.uint8)
    else:
        sk = np.ascontiguousarray(skip, dtype=np.uint8)
    cdef vector[int64_t] pivot_col = vector[int64_t](n_rows, -1)
    cdef vector[vector[int64_t]] store
    cdef vector[int64_t] col, tmp
    cdef Py_ssize_t j, k
    cdef int64_t low, q
    cdef Py_ssize_t rank = 0
    with nogil:
        for j in range(ncols):
            if sk[j]:
                continue
            col.clear()
            for k in range(ip[j], ip[j + 1]):
                col.push_back(ix[k])
            # input columns are sorted; cancel duplicates defensively
            while col.size() > 0:
                low = col.back()
                q = pivot_col[low]
                if q < 0:
                    pivot_col[low] = store.size()
                    store.push_back(col)
                    rank += 1
                    break
                _xor_into(col, store[q], tmp)
    piv = np.nonzero(np.asarray(<int64_t[:n_rows]> pivot_col.data()) >= 0)[0].astype(np.int64) if n_rows > 0 else np.zeros(0, dtype=np.int64)
    return rank, piv
