"""Linear algebra over GF(2).

Two representations are used.  ``BitMatrix`` packs each row into a Python
int (CPython stores these as machine-word arrays, so row XOR is word
parallel); it is used for small exact computations such as kernels, products
and changes of basis.  Large cube complexes use scipy CSR matrices with
entries reduced mod 2, and ranks come from the sparse column reduction in
``kernels``.
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import NotAComplex


class BitMatrix:
    """Dense GF(2) matrix; row i is the int whose bit j is entry (i, j)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = list(rows) if rows is not None else [0] * nrows
        if len(self.rows) != nrows:
            raise ValueError("row count mismatch")

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr) % 2
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        nr, nc = arr.shape
        rows = []
        for r in arr:
            val = 0
            for j in np.nonzero(r)[0]:
                val |= 1 << int(j)
            rows.append(val)
        return cls(nr, nc, rows)

    @classmethod
    def from_sparse(cls, m):
        m = sp.csr_matrix(m)
        rows = [0] * m.shape[0]
        indptr, indices, data = m.indptr, m.indices, m.data
        for i in range(m.shape[0]):
            val = 0
            for k in range(indptr[i], indptr[i + 1]):
                if data[k] % 2:
                    val ^= 1 << int(indices[k])
            rows[i] = val
        return cls(m.shape[0], m.shape[1], rows)

    def to_array(self):
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in _bits(r):
                out[i, j] = 1
        return out

    def to_sparse(self):
        ri, ci = [], []
        for i, r in enumerate(self.rows):
            for j in _bits(r):
                ri.append(i)
                ci.append(j)
        return sp.csr_matrix((np.ones(len(ri), dtype=np.int8), (ri, ci)),
                             shape=(self.nrows, self.ncols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        return (isinstance(other, BitMatrix) and self.shape == other.shape
                and self.rows == other.rows)

    def __repr__(self):
        return f"BitMatrix({self.nrows}x{self.ncols}, nnz={sum(bin(r).count('1') for r in self.rows)})"

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return BitMatrix(self.nrows, self.ncols, [a ^ b for a, b in zip(self.rows, other.rows)])

    __sub__ = __add__

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        orows = other.rows
        for r in self.rows:
            acc = 0
            for j in _bits(r):
                acc ^= orows[j]
            out.append(acc)
        return BitMatrix(self.nrows, other.ncols, out)

    def apply(self, vec: int) -> int:
        """Image of a column vector given as an int bitmask."""
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & vec).count("1") & 1:
                out |= 1 << i
        return out

    @property
    def T(self):
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in _bits(r):
                cols[j] |= 1 << i
        return BitMatrix(self.ncols, self.nrows, cols)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def submatrix(self, row_idx, col_idx):
        col_idx = list(col_idx)
        out = []
        for i in row_idx:
            r = self.rows[i]
            val = 0
            for t, j in enumerate(col_idx):
                if (r >> j) & 1:
                    val |= 1 << t
            out.append(val)
        return BitMatrix(len(out), len(col_idx), out)

    def rank(self) -> int:
        return len(_echelon(self.rows)[0])

    def row_space(self) -> list[int]:
        return _echelon(self.rows)[0]

    def kernel(self) -> list[int]:
        """Basis of {x : self @ x = 0}, each vector an int bitmask over columns."""
        return self.T.left_kernel()

    def left_kernel(self) -> list[int]:
        """Basis of {y : y @ self = 0} as bitmasks over rows."""
        piv, comb = _echelon(self.rows, track=True)
        return comb


def _bits(r: int):
    while r:
        low = r & -r
        yield low.bit_length() - 1
        r ^= low


def _echelon(rows, track=False):
    """Reduce rows; return (pivot rows, combinations giving zero rows)."""
    pivots = {}
    basis = []
    zero_combos = []
    for i, r in enumerate(rows):
        comb = 1 << i if track else 0
        while r:
            hb = r.bit_length() - 1
            p = pivots.get(hb)
            if p is None:
                pivots[hb] = (r, comb)
                basis.append(r)
                break
            r ^= p[0]
            comb ^= p[1]
        else:
            if track:
                zero_combos.append(comb)
    return basis, zero_combos


# -- sparse helpers ------------------------------------------------------------


def gf2_csr(rows, cols, shape) -> sp.csr_matrix:
    """CSR matrix from coordinate lists, with repeated entries summed mod 2."""
    m = sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=shape)
    m.sum_duplicates()
    m.data %= 2
    m.eliminate_zeros()
    m.data = m.data.astype(np.int8)
    return m


def mod2(m) -> sp.csr_matrix:
    m = sp.csr_matrix(m, dtype=np.int64)
    m.sum_duplicates()
    m.data %= 2
    m.eliminate_zeros()
    return m.astype(np.int8)


def mul(a, b) -> sp.csr_matrix:
    return mod2(sp.csr_matrix(a, dtype=np.int64) @ sp.csr_matrix(b, dtype=np.int64))


def is_zero(m) -> bool:
    if isinstance(m, BitMatrix):
        return m.is_zero()
    return mod2(m).nnz == 0


def _as_sparse(m):
    if isinstance(m, BitMatrix):
        return m.to_sparse()
    if sp.issparse(m):
        return m
    return sp.csr_matrix(np.asarray(m) % 2)


def _columns(m, skip=None):
    csc = sp.csc_matrix(mod2(m))
    csc.sort_indices()
    return csc.indptr.astype(np.int64), csc.indices.astype(np.int64)


def rank(m, skip=None) -> int:
    """Rank over GF(2) of a BitMatrix, dense array or scipy sparse matrix."""
    if isinstance(m, BitMatrix):
        return m.rank()
    m = _as_sparse(m)
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    indptr, indices = _columns(m)
    r, _ = kernels.reduce_columns(indptr, indices, m.shape[0], skip)
    return int(r)


def rank_with_pivots(m, skip=None):
    m = _as_sparse(m)
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0, np.zeros(0, dtype=np.int64)
    indptr, indices = _columns(m)
    r, piv = kernels.reduce_columns(indptr, indices, m.shape[0], skip)
    return int(r), np.asarray(piv, dtype=np.int64)


def homology_ranks(ds, dims=None) -> list[int]:
    """Homology dimensions of C_0 -> C_1 -> ... given maps d_k : C_k -> C_{k+1}.

    Each d_k has shape (dim C_{k+1}, dim C_k).  Composites are checked.
    """
    ds = list(ds)
    if dims is None:
        if not ds:
            raise ValueError("need dims when there are no maps")
        dims = [ds[0].shape[1]] + [d.shape[0] for d in ds]
    dims = list(dims)
    if len(dims) != len(ds) + 1:
        raise ValueError("dims must have one more entry than maps")
    for k, d in enumerate(ds):
        if tuple(d.shape) != (dims[k + 1], dims[k]):
            raise ValueError(f"map {k} has shape {d.shape}, expected {(dims[k + 1], dims[k])}")
    for k in range(len(ds) - 1):
        if not _composite_zero(ds[k + 1], ds[k]):
            raise NotAComplex(f"d_{k + 1} d_{k} is nonzero")
    ranks = [rank(d) for d in ds]
    out = []
    for k, dim in enumerate(dims):
        r_out = ranks[k] if k < len(ranks) else 0
        r_in = ranks[k - 1] if k >= 1 else 0
        out.append(dim - r_out - r_in)
    return out


def _composite_zero(a, b) -> bool:
    if isinstance(a, BitMatrix) and isinstance(b, BitMatrix):
        return (a @ b).is_zero()
    return is_zero(mul(_as_sparse(a), _as_sparse(b)))


def check_square_zero(d) -> None:
    if not is_zero(mul(d, d)):
        raise NotAComplex("differential does not square to zero")


def graded_homology(d, h, j=None) -> dict[int, int]:
    """Homology by h-degree of a complex with a single differential matrix.

    ``d`` is N x N with d[target, source]; every entry must raise h by 1 and,
    when ``j`` is given, preserve j.
    """
    out = defaultdict(int)
    for (hv, _), r in bigraded_homology(d, h, j).items():
        out[hv] += r
    return {hv: out[hv] for hv in sorted(out)}


def bigraded_homology(d, h, j=None) -> dict[tuple[int, int], int]:
    """Homology ranks per (h, j) block, zero blocks omitted.

    The matrix is cut into (h, j) blocks and each block rank is found by
    column reduction; pivot rows found in degree h are used to clear the
    corresponding columns in degree h+1 within the same j.
    """
    d = mod2(d)
    h = np.asarray(h, dtype=np.int64)
    n = d.shape[0]
    if j is None:
        j = np.zeros(n, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    coo = d.tocoo()
    if coo.nnz:
        if np.any(h[coo.row] != h[coo.col] + 1):
            raise ValueError("differential entry does not raise h by one")
        if np.any(j[coo.row] != j[coo.col]):
            raise ValueError("differential entry does not preserve j")
    order = np.lexsort((h, j))
    dp = sp.csr_matrix(d)[order][:, order].tocsc()
    hs, js = h[order], j[order]
    bounds = [0]
    for i in range(1, n):
        if js[i] != js[i - 1] or hs[i] != hs[i - 1]:
            bounds.append(i)
    bounds.append(n)
    blocks = [(int(js[bounds[t]]), int(hs[bounds[t]]), bounds[t], bounds[t + 1])
              for t in range(len(bounds) - 1) if bounds[t] < bounds[t + 1]]
    dims = {(hv, jv): hi - lo for jv, hv, lo, hi in blocks}
    ranks = defaultdict(int)
    pivots = {}
    for t, (jv, hv, lo, hi) in enumerate(blocks):
        if t + 1 >= len(blocks):
            continue
        jn, hn, lo2, hi2 = blocks[t + 1]
        if jn != jv or hn != hv + 1:
            continue
        skip = None
        prev = pivots.get((jv, hv - 1))
        if prev is not None and len(prev):
            skip = np.zeros(hi - lo, dtype=np.uint8)
            skip[prev] = 1
        r, piv = rank_with_pivots(dp[lo2:hi2, lo:hi], skip)
        pivots[(jv, hv)] = piv
        ranks[(hv, jv)] += r
    out = {}
    for (hv, jv), dim in sorted(dims.items()):
        r = dim - ranks.get((hv, jv), 0) - ranks.get((hv - 1, jv), 0)
        if r:
            out[(hv, jv)] = r
    return out


def induced_rank(f: BitMatrix, d_src: BitMatrix, d_dst: BitMatrix) -> int:
    """Rank of the map on homology induced by a chain map f: (C, d_src) -> (C', d_dst)."""
    z = d_src.kernel()
    dst_b = _image_basis(d_dst)
    fz = [f.apply(v) for v in z]
    base = len(_echelon(dst_b)[0])
    return len(_echelon(dst_b + fz)[0]) - base


def _image_basis(m: BitMatrix) -> list[int]:
    return m.T.row_space()


# -- filtered complexes ------------------------------------------------------------


def spectral_page_dims(d: BitMatrix, filt, r_max: int | None = None) -> dict[int, int]:
    """Total dimension of each page E^r of a descending filtration.

    ``filt[i]`` is the filtration level of basis vector i; d must not lower it.
    Uses dim E^r_p = dim Z^r_p - dim(Z^{r-1}_{p+1} + B^{r-1}_p) with
    Z^r_p = {x in F_p : dx in F_{p+r}}, B^{r-1}_p = d(F_{p-r+1}) ∩ F_p.
    """
    filt = list(filt)
    n = d.ncols
    if n == 0:
        return {}
    for i in range(n):
        for k in _bits(d.T.rows[i]):
            if filt[k] < filt[i]:
                raise ValueError("differential lowers the filtration")
    lo, hi = min(filt), max(filt)
    span = hi - lo + 1
    r_max = r_max if r_max is not None else span + 1
    out = {}
    for r in range(0, r_max + 1):
        total = 0
        for p in range(lo, hi + 1):
            zr = _z_space(d, filt, p, r)
            zr1 = _z_space(d, filt, p + 1, r - 1)
            br1 = _b_space(d, filt, p, r - 1)
            total += len(_echelon(zr)[0]) - len(_echelon(zr1 + br1)[0])
        out[r] = total
    return out


def _mask_at_least(filt, p):
    m = 0
    for i, f in enumerate(filt):
        if f >= p:
            m |= 1 << i
    return m


def _z_space(d, filt, p, r):
    """Basis of {x in F_p : dx in F_{p+r}}; r <= 0 means all of F_p."""
    fp = [i for i, f in enumerate(filt) if f >= p]
    if r <= 0:
        return [1 << i for i in fp]
    keep_out = [i for i, f in enumerate(filt) if f < p + r]
    sub = d.submatrix(keep_out, fp)
    ker = sub.kernel()
    out = []
    for v in ker:
        x = 0
        for t in _bits(v):
            x |= 1 << fp[t]
        out.append(x)
    return out


def _b_space(d, filt, p, r):
    """Basis of d(F_{p-r}) ∩ F_p (r counts the page below)."""
    if r < 0:
        return []
    src = [i for i, f in enumerate(filt) if f >= p - r]
    imgs = [_column(d, i) for i in src]
    low = [i for i, f in enumerate(filt) if f < p]
    lowmask = 0
    for i in low:
        lowmask |= 1 << i
    # combinations of images with no component below p
    proj = BitMatrix(len(imgs), d.nrows, [v & lowmask for v in imgs])
    combos = proj.left_kernel()
    out = []
    for c in combos:
        x = 0
        for t in _bits(c):
            x ^= imgs[t]
        if x:
            out.append(x)
    return out


def _column(d: BitMatrix, j: int) -> int:
    out = 0
    for i, r in enumerate(d.rows):
        if (r >> j) & 1:
            out |= 1 << i
    return out
