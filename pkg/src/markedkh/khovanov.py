"""Marked Khovanov complexes over GF(2) and the crossing-addition cone.

Labels at a vertex are bitmasks over its circles (circle ids as in ``Cube``):
bit 0 is the unit 1 and bit 1 is x.  In the reduced theory the circle through
the basepoint is frozen at 1 (the quotient by x on that factor) and is left
out of the bitmask.  Generators are ordered by (vertex index, bitmask).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import gf2, kernels
from .cube import DEFAULT_BOUND, Cube, enumerate_cube
from .diagram import Diagram, MarkingData, _canonical
from .errors import BasepointOnOmega, ChainMapFailure, NotAComplex, SameComponent


@dataclass
class GradedComplex:
    """A complex built on a cube; ``d[target, source]`` raises h by one.

    ``h`` is the cube weight, ``Q`` the label grading (1 counts +1, x counts
    -1) and ``j = Q + h`` is preserved by every differential entry.
    """

    cube: Cube
    based: int  # edge index of the basepoint, or -1
    dims: np.ndarray
    offsets: np.ndarray
    d: sp.csr_matrix
    h: np.ndarray
    Q: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.offsets[-1])

    @property
    def j(self) -> np.ndarray:
        return self.Q + self.h

    def generator(self, i: int):
        """(vertex index, label bitmask) of generator i."""
        v = int(np.searchsorted(self.offsets, i, side="right") - 1)
        return v, int(i - self.offsets[v])

    def index(self, v: int, loc: int) -> int:
        return int(self.offsets[v] + loc)

    def full_labels(self, v: int, loc: int) -> int:
        """Label bitmask over all circles at v, the based circle included as 1."""
        b = int(self.cube.circ[v, self.based]) if self.based >= 0 else -1
        return kernels.pure._expand(loc, b)

    def local_index(self, v: int, full: int):
        """Inverse of ``full_labels``; None if the based circle carries x."""
        b = int(self.cube.circ[v, self.based]) if self.based >= 0 else -1
        if b >= 0 and (full >> b) & 1:
            return None
        return kernels.pure._compress(full, b)

    def homology(self) -> dict[int, int]:
        """Rank of homology in each cube weight."""
        return gf2.graded_homology(self.d, self.h, self.j)

    def bigraded(self) -> dict[tuple[int, int], int]:
        return gf2.bigraded_homology(self.d, self.h, self.j)

    def total_rank(self) -> int:
        return sum(self.homology().values())

    def check(self) -> None:
        if not gf2.is_zero(gf2.mul(self.d, self.d)):
            raise NotAComplex("differential does not square to zero")

    def summary(self) -> dict:
        hom = self.homology()
        return {
            "generators": self.size,
            "vertices": len(self.dims),
            "live_vertices": int(np.count_nonzero(self.dims)),
            "ranks_by_h": {str(k): v for k, v in hom.items()},
            "total_rank": sum(hom.values()),
        }


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def complex_on_cube(cube: Cube, based: int = -1, check: bool = True) -> GradedComplex:
    """Khovanov-type complex on a (possibly pseudo-diagram) cube.

    Each cube edge carries m or Delta when the circle count changes and 0
    otherwise; killed vertices carry the zero group.
    """
    nb = 1 if based >= 0 else 0
    nc = cube.ncirc.astype(np.int64)
    dims = np.where(cube.killed, 0, np.left_shift(1, nc - nb)).astype(np.int64)
    offsets = np.zeros(len(dims) + 1, dtype=np.int64)
    np.cumsum(dims, out=offsets[1:])
    n = int(offsets[-1])
    rows, cols = _edge_entries(cube, cube, offsets, offsets, dims, dims, based)
    d = gf2.gf2_csr(rows, cols, (n, n))
    gen_v = np.repeat(np.arange(len(dims)), dims)
    loc = np.arange(n, dtype=np.int64) - offsets[gen_v]
    h = _popcount(gen_v)
    Q = (nc[gen_v] - nb) - 2 * _popcount(loc) + nb
    out = GradedComplex(cube, based, dims, offsets, d, h, Q)
    if check:
        out.check()
    return out


def _edge_entries(cs: Cube, cd: Cube, off_s, off_d, dim_s, dim_d, based):
    V = len(cs.ncirc)
    if cs.dim == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    idx = np.arange(V, dtype=np.int64)
    pairs, slots = [], []
    for t, k in enumerate(cs.resolved):
        src = idx[((idx >> t) & 1) == 0]
        pairs.append(np.stack([src, src | (1 << t)], axis=1))
        slots.append(np.repeat(cs.slots[k][None, :], len(src), axis=0))
    pairs = np.concatenate(pairs)
    slots = np.concatenate(slots)
    return kernels.map_pairs(cs.circ, cd.circ, cs.ncirc, cd.ncirc, off_s, off_d,
                             dim_s, dim_d, pairs, slots, False, based)


def vertical_map(src: GradedComplex, dst: GradedComplex, crossing: int,
                 identity_when_equal) -> sp.csr_matrix:
    """Vertex-wise map between two complexes on the same cube that differ only at ``crossing``.

    Circles touching the crossing merge (m) or split (Delta); when their
    number is unchanged the map is the identity at vertices where
    ``identity_when_equal(v)`` holds and zero elsewhere.
    """
    V = len(src.dims)
    slots = src.cube.slots[crossing]
    flags = np.array([bool(identity_when_equal(v)) for v in range(V)], dtype=bool)
    rows, cols = [], []
    for ident in (False, True):
        vs = np.nonzero(flags == ident)[0].astype(np.int64)
        if not len(vs):
            continue
        pr = np.stack([vs, vs], axis=1)
        r, c = kernels.map_pairs(src.cube.circ, dst.cube.circ, src.cube.ncirc, dst.cube.ncirc,
                                 src.offsets, dst.offsets, src.dims, dst.dims, pr,
                                 np.repeat(slots[None, :], len(vs), axis=0), ident, src.based)
        rows.append(r)
        cols.append(c)
    return gf2.gf2_csr(np.concatenate(rows), np.concatenate(cols), (dst.size, src.size))


def _based_index(cube: Cube, m: MarkingData, basepoint) -> int:
    if basepoint is None:
        even = [e for e in cube.d.edges if not m.parity(e)]
        if not even:
            raise BasepointOnOmega("every edge carries an omega endpoint")
        basepoint = even[0]
    if basepoint not in cube.edge_index:
        raise BasepointOnOmega(f"basepoint edge {basepoint} is not in the diagram")
    if m.parity(basepoint):
        raise BasepointOnOmega(f"basepoint edge {basepoint} carries an omega endpoint")
    return cube.edge_index[basepoint]


def assemble(d: Diagram, m: MarkingData = MarkingData(), bound: int = DEFAULT_BOUND,
             check: bool = True) -> GradedComplex:
    """The marked Khovanov complex; d^2 = 0 is verified unless ``check`` is off."""
    m.validate(d)
    cube = enumerate_cube(d, m, (), bound)
    out = complex_on_cube(cube, -1, check)
    out.meta.update(n_plus=d.signs.count(1), n_minus=d.signs.count(-1))
    return out


def assemble_reduced(d: Diagram, m: MarkingData = MarkingData(), basepoint: int | None = None,
                     bound: int = DEFAULT_BOUND, check: bool = True) -> GradedComplex:
    """Reduced complex: the based circle's factor is A/(x).

    With no basepoint given, the smallest edge carrying no omega endpoint is used.
    """
    m.validate(d)
    cube = enumerate_cube(d, m, (), bound)
    out = complex_on_cube(cube, _based_index(cube, m, basepoint), check)
    out.meta.update(n_plus=d.signs.count(1), n_minus=d.signs.count(-1))
    return out


def edge_map(src_state, dst_state, crossing_edges, src_labels: int, based=None) -> list[int]:
    """Image of one labelled generator under the map of a single cube edge.

    Works on ``ResolvedState`` objects directly, independently of the array
    kernels: circles meeting the crossing's edges merge or split, the others
    carry their label across.  Returns the target label bitmasks (empty for
    the zero map).  A killed end gives the zero map.
    """
    if src_state.killed or dst_state.killed:
        return []
    ts = sorted({src_state.circle_of(e) for e in crossing_edges})
    td = sorted({dst_state.circle_of(e) for e in crossing_edges})
    base = 0
    for i, c in enumerate(src_state.circles):
        if i in ts:
            continue
        j = dst_state.circle_of(c[0])
        if (src_labels >> i) & 1:
            base |= 1 << j
    if len(ts) == 2 and len(td) == 1:
        a, b = (src_labels >> ts[0]) & 1, (src_labels >> ts[1]) & 1
        outs = [] if a and b else [base | ((a | b) << td[0])]
    elif len(ts) == 1 and len(td) == 2:
        if (src_labels >> ts[0]) & 1:
            outs = [base | (1 << td[0]) | (1 << td[1])]
        else:
            outs = [base | (1 << td[0]), base | (1 << td[1])]
    else:
        return []
    if based is not None:
        bd = dst_state.circle_of(based)
        outs = [t for t in outs if not (t >> bd) & 1]
    return outs


# -- crossing addition ----------------------------------------------------------------


@dataclass(frozen=True)
class AddedCrossing:
    """L' built from L by adding crossing 0 next to crossing ``k``.

    ``label_map`` sends each edge of L to an edge of L' on the same arc (the
    far piece for the two split edges); ``bigon`` holds the two new edges
    between the old and new crossings.
    """

    diagram: Diagram
    marking: MarkingData
    source: Diagram
    k: int
    label_map: dict
    bigon: tuple[int, int]


def add_crossing(d: Diagram, k: int, m: MarkingData = MarkingData()) -> AddedCrossing:
    """Add a crossing beside k between its two strands, in the corner between slots 3 and 0.

    The new crossing's 0-smoothing gives back L; omega endpoints on the two
    split edges are kept on the pieces away from the new bigon.
    """
    if not 0 <= k < d.n:
        raise IndexError(f"crossing {k} out of range")
    under, over = d.strands(k)
    if under == over:
        raise SameComponent(f"crossing {k} joins a component to itself")
    a, dd = d.pd[k][0], d.pd[k][3]
    a_far, a2, d1, d_far = ("a", "far"), ("a", "near"), ("d", "near"), ("d", "far")
    crossings = []
    # new crossing, counterclockwise (a2, d1, d_far, a_far); under passage a_far-d1
    crossings.append((d1, d_far, a_far, a2))
    for i, c in enumerate(d.pd):
        lab = []
        for s, e in enumerate(c):
            if e == a:
                lab.append(a2 if (i, s) == (k, 0) else a_far)
            elif e == dd:
                lab.append(d1 if (i, s) == (k, 3) else d_far)
            else:
                lab.append(e)
        crossings.append(tuple(lab))
    new_d, relabel = _canonical(crossings, extras=d.unknotted_extras)
    label_map = {e: relabel[e] for e in d.pd_edges if e not in (a, dd)}
    label_map[a] = relabel[a_far]
    label_map[dd] = relabel[d_far]
    for e, f in zip(d.extra_edges, new_d.extra_edges):
        label_map[e] = f
    odd = [label_map[e] for e in m.odd_edges]
    return AddedCrossing(new_d, MarkingData.from_edges(odd), d, k, label_map,
                         (relabel[a2], relabel[d1]))


def _generator_map(src: GradedComplex, dst: GradedComplex, vmap, edge_map_fn) -> sp.csr_matrix:
    """Matrix sending each generator of src to the matching generator of dst.

    ``vmap(v)`` gives the target vertex index (or None to drop it) and circles
    are matched through ``edge_map_fn`` applied to edge labels.
    """
    rows, cols = [], []
    cs, cd = src.cube, dst.cube
    for v in range(len(src.dims)):
        if not src.dims[v]:
            continue
        w = vmap(v)
        if w is None:
            continue
        if not dst.dims[w]:
            raise ChainMapFailure(f"vertex {v} is live but its image {w} is killed")
        perm = {}
        for e, idx in cs.edge_index.items():
            f = edge_map_fn(e)
            if f is None:
                continue
            perm[int(cs.circ[v, idx])] = int(cd.circ[w, cd.edge_index[f]])
        if len(perm) != int(cs.ncirc[v]) or len(set(perm.values())) != int(cd.ncirc[w]):
            raise ChainMapFailure(f"circles at vertex {v} do not match those at {w}")
        for loc in range(int(src.dims[v])):
            full = src.full_labels(v, loc)
            t = 0
            for c, c2 in perm.items():
                if (full >> c) & 1:
                    t |= 1 << c2
            tl = dst.local_index(w, t)
            rows.append(dst.offsets[w] + tl)
            cols.append(src.offsets[v] + loc)
    return gf2.gf2_csr(np.asarray(rows, np.int64), np.asarray(cols, np.int64),
                       (dst.size, src.size))


@dataclass
class ConeMaps:
    """g, h and their verification residuals (nonzero entries of d'f + fd, of hg + 1)."""

    g: sp.csr_matrix
    h: sp.csr_matrix
    C: GradedComplex
    C2: GradedComplex
    new_bit: int
    g_residual: int
    h_residual: int
    hg_residual: int

    @property
    def ok(self) -> bool:
        return not (self.g_residual or self.h_residual or self.hg_residual)

    def rank_via_cone(self) -> int:
        """Rank of H(C') from the cone of bottom cube -> top cube (new crossing 0 -> 1)."""
        C2 = self.C2
        bot = np.nonzero(_gen_mask(C2, self.new_bit, 0))[0]
        top = np.nonzero(_gen_mask(C2, self.new_bit, 1))[0]
        D = sp.csr_matrix(C2.d)
        d_bot, d_top, f = D[bot][:, bot], D[top][:, top], D[top][:, bot]
        h_bot = sum(gf2.graded_homology(d_bot, C2.h[bot], C2.j[bot]).values())
        h_top = sum(gf2.graded_homology(d_top, C2.h[top], C2.j[top]).values())
        r = gf2.induced_rank(gf2.BitMatrix.from_sparse(f), gf2.BitMatrix.from_sparse(d_bot),
                             gf2.BitMatrix.from_sparse(d_top))
        return h_bot + h_top - 2 * r


def _gen_mask(C: GradedComplex, bit: int, value: int) -> np.ndarray:
    vs = np.arange(len(C.dims))
    live = ((vs >> bit) & 1) == value
    return np.repeat(live, C.dims)


def cone_maps(ac: AddedCrossing, m: MarkingData | None = None, bound: int = DEFAULT_BOUND,
              verify: bool = True) -> ConeMaps:
    """The maps g(x, y) = (x, y, y, 0) and h(x, y, z, w) = (x, y) between C(L) and C(L').

    C(L) is split by the resolution of crossing k, and C(L') by the
    resolutions of (new crossing, k); the (1, 0) part is identified with the
    (0, 1) part through the four ends of the bigon.  With ``verify`` set, a
    nonzero residual for g or h, or h g != id, raises ChainMapFailure;
    otherwise the residuals are only recorded.

    h is always a chain map (it is the quotient by the top cube).  g fails
    exactly when some live (0, 1) resolution has the two arcs through the
    bigon ends on different circles: the saddles into (1, 1) then split the
    new bigon circle off different circles.  See ``g_defect_vertices``.
    """
    m = ac.marking if m is None else m
    src_m = MarkingData.from_edges(e for e in ac.source.edges
                                   if m.parity(ac.label_map[e]))
    C = assemble(ac.source, src_m, bound)
    C2 = assemble(ac.diagram, m, bound)
    k2 = ac.k + 1  # index of k in L'
    t_k = C.cube.resolved.index(ac.k)
    bit_new = C2.cube.resolved.index(0)
    bit_k = C2.cube.resolved.index(k2)
    old_bits = {t: C2.cube.resolved.index(kk + 1) for t, kk in enumerate(C.cube.resolved)}

    def lift(v, new_bit, k_bit):
        w = 0
        for t, t2 in old_bits.items():
            if t == t_k:
                continue
            if (v >> t) & 1:
                w |= 1 << t2
        return w | (new_bit << bit_new) | (k_bit << bit_k)

    lm = ac.label_map
    bigon = set(ac.bigon)
    # bottom cube of L' is L itself
    inc = _generator_map(C, C2, lambda v: lift(v, 0, (v >> t_k) & 1), lambda e: lm[e])
    # the (1, 0) copy of each k = 1 vertex, matched through edges off the bigon
    swap = _generator_map(C, C2, lambda v: lift(v, 1, 0) if (v >> t_k) & 1 else None,
                          lambda e: lm[e])
    g = gf2.mod2(inc + swap)
    inv = {f: e for e, f in lm.items()}
    h = _generator_map(C2, C, lambda w: _drop_bit(w, bit_new, old_bits),
                       lambda f: inv.get(f) if f not in bigon else None)
    g_res = _chain_residual(g, C.d, C2.d)
    h_res = _chain_residual(h, C2.d, C.d)
    eye = sp.identity(C.size, dtype=np.int64, format="csr")
    hg_res = gf2.mod2(gf2.mul(h, g) + eye).nnz
    out = ConeMaps(g, h, C, C2, bit_new, g_res, h_res, hg_res)
    if verify:
        for name, r in (("g", g_res), ("h", h_res)):
            if r:
                raise ChainMapFailure(f"{name} does not commute with the differentials "
                                      f"({r} nonzero entries in d'{name} + {name}d)")
        if hg_res:
            raise ChainMapFailure("h g is not the identity")
    return out


def _drop_bit(w, bit_new, old_bits):
    if (w >> bit_new) & 1:
        return None
    v = 0
    for t, t2 in old_bits.items():
        if (w >> t2) & 1:
            v |= 1 << t
    return v


def _chain_residual(f, d_src, d_dst) -> int:
    return gf2.mod2(gf2.mul(d_dst, f) + gf2.mul(f, d_src)).nnz


def g_defect_vertices(ac: AddedCrossing, m: MarkingData | None = None) -> list:
    """Vertices (0, 1, w) of L' where the two bigon-end arcs lie on different circles.

    This is a direct geometric prediction of where g(x, y) = (x, y, y, 0)
    fails to commute with the differential; it uses only circle tracing.
    """
    m = ac.marking if m is None else m
    D = ac.diagram
    cube = enumerate_cube(D, m)
    k2 = ac.k + 1
    a_far = ac.label_map[ac.source.pd[ac.k][0]]
    b_edge = ac.label_map[ac.source.pd[ac.k][1]]
    out = []
    for i in range(len(cube)):
        v = cube.vertex(i)
        if v.assignment[0] != 0 or v.assignment[k2] != 1 or cube.killed[i]:
            continue
        w = cube.vertex(i).flip(0).flip(k2)  # the (1, 0) partner
        j = cube.index(w)
        up = cube.index(v.flip(0))
        if cube.killed[up] or cube.killed[j]:
            continue
        row = cube.circ[i]
        if row[cube.edge_index[a_far]] != row[cube.edge_index[b_edge]]:
            out.append(v)
    return out
