"""Pure-Python kernels.  Same signatures as the compiled ``_ckernels`` module.

Edges are referred to by index (0..E-1), crossings by their four slot edge
indices.  Circle ids at a vertex are assigned in order of first appearance
when scanning edges by index, so they are canonical.
"""
import numpy as np

# slot pairings: 0-smoothing, 1-smoothing, strand-through (dropped)
PAIRS = (((0, 1), (2, 3)), ((0, 3), (1, 2)), ((0, 2), (1, 3)))


def resolve_cube(res_slots, drop_slots, n_edges):
    """Circle id of each edge at each vertex of the cube over the resolved crossings.

    Vertex index bit i is the resolution of the i-th resolved crossing.
    Returns (circ[V, E] int8, ncirc[V] int32).
    """
    res_slots = np.asarray(res_slots, dtype=np.int32).reshape(-1, 4)
    drop_slots = np.asarray(drop_slots, dtype=np.int32).reshape(-1, 4)
    r = len(res_slots)
    nv = 1 << r
    circ = np.zeros((nv, n_edges), dtype=np.int8)
    ncirc = np.zeros(nv, dtype=np.int32)
    for v in range(nv):
        parent = list(range(n_edges))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def join(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for sl in drop_slots:
            for p, q in PAIRS[2]:
                join(sl[p], sl[q])
        for i in range(r):
            sl = res_slots[i]
            for p, q in PAIRS[(v >> i) & 1]:
                join(sl[p], sl[q])
        ids = {}
        row = circ[v]
        for e in range(n_edges):
            root = find(e)
            if root not in ids:
                ids[root] = len(ids)
            row[e] = ids[root]
        ncirc[v] = len(ids)
    return circ, ncirc


def _expand(loc, b):
    if b < 0:
        return loc
    return ((loc >> b) << (b + 1)) | (loc & ((1 << b) - 1))


def _compress(full, b):
    if b < 0:
        return full
    return ((full >> (b + 1)) << b) | (full & ((1 << b) - 1))


def map_pairs(circ_s, circ_d, nc_s, nc_d, off_s, off_d, dim_s, dim_d,
              pairs, slots, ident, based_edge):
    """Matrix entries of the merge/split (or identity) maps between vertex pairs.

    For each pair (v, w) with crossing edges slots[p], the circles touching the
    crossing decide the map: two circles to one is m, one to two is Delta, one
    to one is the identity when ``ident`` is set and zero otherwise.  Killed
    vertices have dim 0 and contribute nothing.  With ``based_edge`` >= 0 the
    circle through that edge is frozen at label 1 (reduced theory).
    Returns (rows, cols) int64 arrays, rows in the target, cols in the source.
    """
    rows, cols = [], []
    n_edges = circ_s.shape[1]
    for p in range(len(pairs)):
        v, w = int(pairs[p][0]), int(pairs[p][1])
        if dim_s[v] == 0 or dim_d[w] == 0:
            continue
        cs, cd = circ_s[v], circ_d[w]
        sl = slots[p]
        ts = sorted({int(cs[e]) for e in sl})
        td = sorted({int(cd[e]) for e in sl})
        if len(ts) == len(td) and not ident:
            continue
        perm = {}
        for e in range(n_edges):
            perm[int(cs[e])] = int(cd[e])
        bs = int(cs[based_edge]) if based_edge >= 0 else -1
        bd = int(cd[based_edge]) if based_edge >= 0 else -1
        keep = [c for c in range(int(nc_s[v])) if c not in ts]
        for loc in range(int(dim_s[v])):
            full = _expand(loc, bs)
            base = 0
            for c in keep:
                if (full >> c) & 1:
                    base |= 1 << perm[c]
            if len(ts) == 2 and len(td) == 1:
                a, b = (full >> ts[0]) & 1, (full >> ts[1]) & 1
                if a and b:
                    outs = []
                else:
                    outs = [base | ((a | b) << td[0])]
            elif len(ts) == 1 and len(td) == 2:
                a = (full >> ts[0]) & 1
                if a:
                    outs = [base | (1 << td[0]) | (1 << td[1])]
                else:
                    outs = [base | (1 << td[0]), base | (1 << td[1])]
            elif len(ts) == 1 and len(td) == 1:
                outs = [base | (((full >> ts[0]) & 1) << td[0])]
            else:
                raise ValueError("crossing touches an unexpected number of circles")
            for t in outs:
                if bd >= 0 and (t >> bd) & 1:
                    continue
                rows.append(int(off_d[w]) + _compress(t, bd))
                cols.append(int(off_s[v]) + loc)
    return np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)


def reduce_columns(indptr, indices, n_rows, skip):
    """Rank over GF(2) of a sparse matrix given by columns (CSC), with clearing.

    Columns flagged in ``skip`` are ignored.  Uses the lowest-row pivot rule.
    Returns (rank, pivot_rows) where pivot_rows lists the pivot row of each
    nonzero reduced column.
    """
    pivot_of = {}
    reduced = {}
    for j in range(len(indptr) - 1):
        if skip is not None and skip[j]:
            continue
        col = 0
        for i in indices[indptr[j]:indptr[j + 1]]:
            col ^= 1 << int(i)
        while col:
            low = col.bit_length() - 1
            q = pivot_of.get(low)
            if q is None:
                pivot_of[low] = j
                reduced[j] = col
                break
            col ^= reduced[q]
    return len(pivot_of), np.fromiter(sorted(pivot_of), dtype=np.int64, count=len(pivot_of))
