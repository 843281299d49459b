"""Dropped-crossing complexes, the A/B/C ladder and the D/E/F splitting.

For a crossing x, A and B are the cubes over the other crossings with x
smoothed by 0 and by 1, and C is the pseudo-diagram cube with x left as a
crossing.  At each vertex x is a self-crossing of one circle of C, splitting
it into two wings.  One of the smoothings separates the wings (two circles),
the other keeps one circle.  Case 1 means A separates; case 2 means B does.
Suffix a means both wings carry an even number of omega endpoints, b means
both odd.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.sparse as sp

from . import gf2
from .cube import DEFAULT_BOUND, Cube, enumerate_cube
from .diagram import Diagram, MarkingData
from .errors import NotAdjacent, SameSign, SplitFailure
from .khovanov import GradedComplex, _based_index, complex_on_cube, vertical_map

TYPE0, TYPE1, TYPE2 = 0, 1, 2


@dataclass
class DroppedComplex:
    complex: GradedComplex
    dropped: tuple[int, ...]
    edge_types: dict

    def total_rank(self) -> int:
        return self.complex.total_rank()

    def homology(self) -> dict[int, int]:
        return self.complex.homology()


def classify_edges(cube: Cube) -> np.ndarray:
    """Type of every cube edge as rows (source, bit, type)."""
    V = len(cube)
    idx = np.arange(V, dtype=np.int64)
    rows = []
    for t in range(cube.dim):
        src = idx[((idx >> t) & 1) == 0]
        dst = src | (1 << t)
        same = cube.ncirc[src] == cube.ncirc[dst]
        killed = cube.killed[src] | cube.killed[dst]
        typ = np.where(same, TYPE2, np.where(killed, TYPE1, TYPE0))
        rows.append(np.stack([src, np.full_like(src, t), typ], axis=1))
    if not rows:
        return np.zeros((0, 3), dtype=np.int64)
    return np.concatenate(rows)


def _type_counts(cube: Cube) -> dict:
    types = classify_edges(cube)[:, 2]
    return {f"type{k}": int(np.count_nonzero(types == k)) for k in (0, 1, 2)}


def assemble_dropped(d: Diagram, m: MarkingData, x: int, reduced: bool = False,
                     basepoint: int | None = None, bound: int = DEFAULT_BOUND) -> DroppedComplex:
    """The complex on the cube of pseudo-diagram resolutions with x left unresolved.

    Type 0 edges (circle count changes, both ends live) carry m or Delta;
    Type 1 (count changes, an end killed) and Type 2 (count unchanged) carry 0.
    """
    m.validate(d)
    if not 0 <= x < d.n:
        raise IndexError(f"crossing {x} out of range")
    cube = enumerate_cube(d, m, (x,), bound)
    based = _based_index(cube, m, basepoint) if reduced else -1
    cx = complex_on_cube(cube, based)
    return DroppedComplex(cx, (x,), _type_counts(cube))


def check_adjacent(d: Diagram, m: MarkingData, x1: int, x2: int) -> tuple[int, int]:
    """Two crossings bounding a bigon region whose two edges carry no omega endpoint.

    Returns the two edges of such a bigon; raises NotAdjacent or SameSign.
    """
    if x1 == x2:
        raise NotAdjacent("a crossing is not adjacent to itself")
    bigons = []
    for face in d.faces:
        if len(face) == 2 and {face[0][0], face[1][0]} == {x1, x2}:
            bigons.append(tuple(sorted(d.pd[k][s] for k, s in face)))
    if not bigons:
        raise NotAdjacent(f"crossings {x1} and {x2} do not bound a bigon")
    clean = [b for b in bigons if not any(m.parity(e) for e in b)]
    if not clean:
        raise NotAdjacent(f"omega endpoints lie between crossings {x1} and {x2}")
    if d.signs[x1] == d.signs[x2]:
        raise SameSign(f"crossings {x1} and {x2} have the same sign")
    return min(clean)


def assemble_double_dropped(d: Diagram, m: MarkingData, x1: int, x2: int,
                            reduced: bool = False, basepoint: int | None = None,
                            bound: int = DEFAULT_BOUND) -> DroppedComplex:
    m.validate(d)
    check_adjacent(d, m, x1, x2)
    cube = enumerate_cube(d, m, (x1, x2), bound)
    based = _based_index(cube, m, basepoint) if reduced else -1
    return DroppedComplex(complex_on_cube(cube, based), (x1, x2), _type_counts(cube))


def adjacent_pairs(d: Diagram, m: MarkingData) -> list[tuple[int, int]]:
    """All pairs of crossings that pass the adjacency and opposite-sign tests."""
    out = []
    for i in range(d.n):
        for j in range(i + 1, d.n):
            try:
                check_adjacent(d, m, i, j)
            except (NotAdjacent, SameSign):
                continue
            out.append((i, j))
    return out


# -- the A/B/C ladder -----------------------------------------------------------------


@dataclass
class Ladder:
    """The three complexes for crossing x and the vertical maps A -> B -> C -> A."""

    d: Diagram
    m: MarkingData
    x: int
    A: GradedComplex
    B: GradedComplex
    C: GradedComplex
    f_AB: sp.csr_matrix
    f_BC: sp.csr_matrix
    f_CA: sp.csr_matrix
    tags: list  # per vertex: "1a", "1b", "2a", "2b" or "0" (everything killed)
    first: list  # per vertex: edge index of the first loop's marker edge, or -1

    @property
    def reduced(self) -> bool:
        return self.A.based >= 0


def _vertex_tags(A: Cube, B: Cube, C: Cube, x: int):
    slots = A.slots[x]
    tags = []
    for v in range(len(C)):
        if C.killed[v]:
            tags.append("0")
            continue
        split_A = len({int(A.circ[v, e]) for e in slots}) == 2
        case = "1" if split_A else "2"
        split = A if split_A else B
        tags.append(case + ("b" if split.killed[v] else "a"))
    return tags


def ladder(d: Diagram, m: MarkingData, x: int, reduced: bool = False,
           basepoint: int | None = None, bound: int = DEFAULT_BOUND) -> Ladder:
    m.validate(d)
    if not 0 <= x < d.n:
        raise IndexError(f"crossing {x} out of range")
    cA = enumerate_cube(d, m, (), bound, fixed={x: 0})
    cB = enumerate_cube(d, m, (), bound, fixed={x: 1})
    cC = enumerate_cube(d, m, (x,), bound)
    based = _based_index(cC, m, basepoint) if reduced else -1
    A, B, C = (complex_on_cube(c, based) for c in (cA, cB, cC))
    tags = _vertex_tags(cA, cB, cC, x)

    def odd_wings(v):
        return tags[v].endswith("b")

    f_AB = vertical_map(A, B, x, lambda v: False)
    f_BC = vertical_map(B, C, x, odd_wings)
    f_CA = vertical_map(C, A, x, odd_wings)
    first = []
    lo = int(cA.slots[x].min())  # smallest incident edge of x
    for v, t in enumerate(tags):
        first.append(lo if t != "0" else -1)
    return Ladder(d, m, x, A, B, C, f_AB, f_BC, f_CA, tags, first)


def check_ladder(L: Ladder) -> dict:
    """Commutation of the vertical maps with the cube differentials and exactness.

    Exactness at every vertex follows from exactness of the whole (block
    diagonal) sequence: composites vanish and kernel dimensions equal image
    dimensions.  Raises SplitFailure on any failure.
    """
    report = {}
    for name, f, s, t in (("AB", L.f_AB, L.A, L.B), ("BC", L.f_BC, L.B, L.C),
                          ("CA", L.f_CA, L.C, L.A)):
        res = gf2.mod2(gf2.mul(f, s.d) + gf2.mul(t.d, f)).nnz
        report[f"commute_{name}"] = res
        if res:
            raise SplitFailure(f"vertical map {name} does not commute with the differentials")
    seq = [(L.f_AB, L.f_BC, L.B.size, "B"), (L.f_BC, L.f_CA, L.C.size, "C"),
           (L.f_CA, L.f_AB, L.A.size, "A")]
    for f, g, dim, name in seq:
        if not gf2.is_zero(gf2.mul(g, f)):
            raise SplitFailure(f"composite through {name} is nonzero")
        if dim - gf2.rank(g) != gf2.rank(f):
            raise SplitFailure(f"vertical sequence is not exact at {name}")
        report[f"exact_{name}"] = True
    return report


# -- D/E/F splitting ------------------------------------------------------------------

# Active-part bases.  A vector is a list of label tuples summed together; in a
# tuple the first entry belongs to the first loop, bit 1 meaning x.
_UNREDUCED = {
    "1a": {"A": (("E", [[(0, 1), (1, 0)], [(1, 1)]]), ("F", [[(0, 0)], [(0, 1)]])),
           "B": (("F", [[(0,)], [(1,)]]),),
           "C": (("E", [[(0,)], [(1,)]]),)},
    "1b": {"A": (), "B": (("D", [[(0,)], [(1,)]]),), "C": (("D", [[(0,)], [(1,)]]),)},
    "2a": {"A": (("F", [[(0,)], [(1,)]]),),
           "B": (("D", [[(0, 0)], [(0, 1)]]), ("F", [[(0, 1), (1, 0)], [(1, 1)]])),
           "C": (("D", [[(0,)], [(1,)]]),)},
    "2b": {"A": (("E", [[(0,)], [(1,)]]),), "B": (), "C": (("E", [[(0,)], [(1,)]]),)},
}
# basepoint on the active circles: it is the second loop (or the single one)
_REDUCED = {
    "1a": {"A": (("E", [[(1, 0)]]), ("F", [[(0, 0)]])),
           "B": (("F", [[(0,)]]),), "C": (("E", [[(0,)]]),)},
    "1b": {"A": (), "B": (("D", [[(0,)]]),), "C": (("D", [[(0,)]]),)},
    "2a": {"A": (("F", [[(0,)]]),), "B": (("D", [[(0, 0)]]), ("F", [[(1, 0)]])),
           "C": (("D", [[(0,)]]),)},
    "2b": {"A": (("E", [[(0,)]]),), "B": (), "C": (("E", [[(0,)]]),)},
}


@dataclass
class DEFSplitting:
    ladder: Ladder
    tags: list
    dims: dict  # space -> total dimension
    emb: dict  # (cube, space) -> matrix space -> cube
    proj: dict  # (cube, space) -> matrix cube -> space
    blocks: dict = field(default_factory=dict)
    space_h: dict = field(default_factory=dict)  # space -> cube weight per basis vector

    def block(self, name):
        return self.blocks[name]


def _inverse(mat: np.ndarray) -> np.ndarray | None:
    n = mat.shape[0]
    if mat.shape != (n, n):
        return None
    bm = gf2.BitMatrix.from_array(np.concatenate([mat % 2, np.eye(n, dtype=np.int64)], axis=1))
    rows = list(bm.rows)
    for col in range(n):
        piv = next((r for r in range(col, n) if (rows[r] >> col) & 1), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and (rows[r] >> col) & 1:
                rows[r] ^= rows[col]
    return np.array([[(rows[i] >> (n + j)) & 1 for j in range(n)] for i in range(n)],
                    dtype=np.int64)


def split_DEF(L: Ladder) -> DEFSplitting:
    """Change of basis putting A = E+F, B = D+F, C = D+E per the case tables.

    Verifies that each decomposition is a direct sum and that the vertical
    maps are 0 + Id in the new bases, then extracts the blocks of the three
    differentials.  Raises SplitFailure if any check fails.
    """
    cubes = {"A": L.A, "B": L.B, "C": L.C}
    C = L.C.cube
    x = L.x
    xs = C.slots[x]
    based = L.A.based
    V = len(C)
    # per-vertex space sizes and rest-circle data
    counters = {"D": 0, "E": 0, "F": 0}
    entries = {(X, S): ([], [], [], []) for X in "ABC" for S in "DEF"}  # emb rows, cols, proj rows, cols
    space_h = {"D": [], "E": [], "F": []}
    for v in range(V):
        tag = L.tags[v]
        if tag == "0":
            continue
        act_C = int(C.circ[v, xs[0]])
        based_active = based >= 0 and int(C.circ[v, based]) == act_C
        table = (_REDUCED if based_active else _UNREDUCED)[tag]
        rest_edges = []
        seen = set()
        for e in range(C.n_edges):
            c = int(C.circ[v, e])
            if c != act_C and c not in seen:
                seen.add(c)
                rest_edges.append(e)
        rest_based = [based >= 0 and int(C.circ[v, based]) == int(C.circ[v, e]) for e in rest_edges]
        free_rest = [i for i, b in enumerate(rest_based) if not b]
        n_rest = 1 << len(free_rest)
        # sizes of each space at v, read from any cube listing it
        sizes = {}
        for X in "ABC":
            for S, vecs in table[X]:
                if S in sizes and sizes[S] != len(vecs):
                    raise SplitFailure("inconsistent case table")
                sizes[S] = len(vecs)
        base_idx = {}
        for S in "DEF":
            n_S = sizes.get(S, 0)
            base_idx[S] = counters[S]
            counters[S] += n_S * n_rest
            space_h[S].extend([bin(v).count("1")] * (n_S * n_rest))
        for X in "ABC":
            cx = cubes[X]
            if not table[X]:
                continue
            cube = cx.cube
            act = sorted({int(cube.circ[v, e]) for e in xs})
            if len(act) == 2:
                c_first = int(cube.circ[v, L.first[v]])
                if based_active:
                    c_second = int(cube.circ[v, based])
                    c_first = act[0] if act[1] == c_second else act[1]
                act = [c_first, act[1] if act[0] == c_first else act[0]]
            # allowed active labellings in this cube
            labels = [t for t in product((0, 1), repeat=len(act))
                      if not (based_active and t[-1])]
            lab_pos = {t: i for i, t in enumerate(labels)}
            cols = []
            owners = []
            for S, vecs in table[X]:
                for j, vec in enumerate(vecs):
                    col = np.zeros(len(labels), dtype=np.int64)
                    for t in vec:
                        col[lab_pos[t]] ^= 1
                    cols.append(col)
                    owners.append((S, j))
            M = np.stack(cols, axis=1) if cols else np.zeros((len(labels), 0), np.int64)
            inv = _inverse(M)
            if inv is None:
                raise SplitFailure(f"case {tag} bases do not span cube {X} at vertex {v}")
            rest_ids = [int(cube.circ[v, rest_edges[i]]) for i in free_rest]
            for r in range(n_rest):
                rest_full = 0
                for bit, cid in enumerate(rest_ids):
                    if (r >> bit) & 1:
                        rest_full |= 1 << cid
                gens = []
                for t in labels:
                    full = rest_full
                    for cid, lab in zip(act, t):
                        if lab:
                            full |= 1 << cid
                    gens.append(cx.index(v, cx.local_index(v, full)))
                for q, (S, j) in enumerate(owners):
                    s_idx = base_idx[S] + r * sizes[S] + j
                    er, ec, pr, pc = entries[(X, S)]
                    for a in np.nonzero(M[:, q])[0]:
                        er.append(gens[a])
                        ec.append(s_idx)
                    for a in np.nonzero(inv[q])[0]:
                        pr.append(s_idx)
                        pc.append(gens[a])
    dims = dict(counters)
    emb, proj = {}, {}
    for (X, S), (er, ec, pr, pc) in entries.items():
        n_X = cubes[X].size
        emb[(X, S)] = gf2.gf2_csr(np.asarray(er, np.int64), np.asarray(ec, np.int64), (n_X, dims[S]))
        proj[(X, S)] = gf2.gf2_csr(np.asarray(pr, np.int64), np.asarray(pc, np.int64), (dims[S], n_X))
    out = DEFSplitting(L, L.tags, dims, emb, proj,
                       space_h={S: np.asarray(h, np.int64) for S, h in space_h.items()})
    _check_direct_sums(out)
    _check_vertical(out)
    _extract_blocks(out)
    return out


def _check_direct_sums(s: DEFSplitting):
    pairs = {"A": ("E", "F"), "B": ("D", "F"), "C": ("D", "E")}
    cubes = {"A": s.ladder.A, "B": s.ladder.B, "C": s.ladder.C}
    for X, (S1, S2) in pairs.items():
        n = cubes[X].size
        total = gf2.mod2(gf2.mul(s.emb[(X, S1)], s.proj[(X, S1)]) +
                         gf2.mul(s.emb[(X, S2)], s.proj[(X, S2)]))
        if gf2.mod2(total + sp.identity(n, dtype=np.int64, format="csr")).nnz:
            raise SplitFailure(f"{X} is not the direct sum of {S1} and {S2}")
        for S in (S1, S2):
            pe = gf2.mul(s.proj[(X, S)], s.emb[(X, S)])
            if gf2.mod2(pe + sp.identity(s.dims[S], dtype=np.int64, format="csr")).nnz:
                raise SplitFailure(f"projection to {S} is not a left inverse in {X}")


def _check_vertical(s: DEFSplitting):
    """A -> B is 0 on E and Id on F; B -> C is 0 on F, Id on D; C -> A is 0 on D, Id on E."""
    L = s.ladder
    layout = (("A", "B", L.f_AB, "E", "F"), ("B", "C", L.f_BC, "F", "D"), ("C", "A", L.f_CA, "D", "E"))
    for X, Y, f, zero, ident in layout:
        kills = gf2.mul(f, s.emb[(X, zero)])
        if kills.nnz:
            raise SplitFailure(f"vertical map {X}{Y} is nonzero on {zero}")
        img = gf2.mul(s.proj[(Y, ident)], gf2.mul(f, s.emb[(X, ident)]))
        eye = sp.identity(s.dims[ident], dtype=np.int64, format="csr")
        if gf2.mod2(img + eye).nnz:
            raise SplitFailure(f"vertical map {X}{Y} is not the identity on {ident}")
        other = {"A": ("E", "F"), "B": ("D", "F"), "C": ("D", "E")}[Y]
        for S in other:
            if S != ident and gf2.mul(s.proj[(Y, S)], gf2.mul(f, s.emb[(X, ident)])).nnz:
                raise SplitFailure(f"vertical map {X}{Y} leaks {ident} into {S}")


def _extract_blocks(s: DEFSplitting):
    L = s.ladder
    cubes = {"A": L.A, "B": L.B, "C": L.C}

    def blk(X, src, dst):
        return gf2.mul(s.proj[(X, dst)], gf2.mul(cubes[X].d, s.emb[(X, src)]))

    b = s.blocks
    b["d_E"] = blk("A", "E", "E")
    b["gamma"] = blk("A", "F", "E")
    b["d_EF"] = blk("A", "E", "F")
    b["d_F"] = blk("A", "F", "F")
    b["d_D"] = blk("B", "D", "D")
    b["beta"] = blk("B", "D", "F")
    b["d_FD"] = blk("B", "F", "D")
    b["d_F_B"] = blk("B", "F", "F")
    b["d_D_C"] = blk("C", "D", "D")
    b["alpha"] = blk("C", "E", "D")
    b["d_DE"] = blk("C", "D", "E")
    b["d_E_C"] = blk("C", "E", "E")


def structural_report(s: DEFSplitting) -> dict:
    """Nonzero counts of the blocks the splitting argument says must vanish, and of alpha."""
    b = s.blocks
    agree = {
        "d_F_consistent": gf2.mod2(b["d_F"] + b["d_F_B"]).nnz == 0,
        "d_D_consistent": gf2.mod2(b["d_D"] + b["d_D_C"]).nnz == 0,
        "d_E_consistent": gf2.mod2(b["d_E"] + b["d_E_C"]).nnz == 0,
    }
    return {"d_EF": b["d_EF"].nnz, "d_FD": b["d_FD"].nnz, "d_DE": b["d_DE"].nnz,
            "alpha": b["alpha"].nnz, **agree}


def gamma_beta(s: DEFSplitting) -> sp.csr_matrix:
    """The composite D -> F -> E, raising cube weight by two."""
    return gf2.mul(s.blocks["gamma"], s.blocks["beta"])


# -- the cone of A -> B versus D + E ---------------------------------------------------


@dataclass
class ConeCheck:
    cone_matches: bool
    i_chain: bool
    pi_chain: bool
    pi_i_identity: bool
    homotopy: bool
    rank_cone: int
    rank_small: int

    @property
    def ok(self) -> bool:
        return (self.cone_matches and self.i_chain and self.pi_chain and self.pi_i_identity
                and self.homotopy and self.rank_cone == self.rank_small)


def _bmat(rows):
    return sp.bmat(rows, format="csr", dtype=np.int64)


def cone_check(s: DEFSplitting) -> ConeCheck:
    """Verify the quasi-isomorphism between Cone(A -> B) and (D + E, [[d_D, 0], [gamma beta, d_E]]).

    Coordinates on the cone are (D, F_B, E, F_A).  Checks that the cone
    differential written in these coordinates has the block form
    [[d_D,0,0,0],[beta,d_F,0,I],[0,0,d_E,gamma],[0,0,0,d_F]], that
    i(x, z) = (x, 0, z, beta x) and pi(x, y, z, w) = (x, z + gamma y) are chain
    maps with pi i = id, and that h(x, y, z, w) = (0, 0, 0, y) satisfies
    h d + d h = id + i pi.  Also compares homology ranks.
    """
    L = s.ladder
    b = s.blocks
    nD, nE, nF = s.dims["D"], s.dims["E"], s.dims["F"]
    Z = lambda r, c: sp.csr_matrix((r, c), dtype=np.int64)  # noqa: E731
    I = lambda n: sp.identity(n, dtype=np.int64, format="csr")  # noqa: E731
    # cone of f: A -> B on B + A, then change basis to (D, F_B, E, F_A)
    nA, nB = L.A.size, L.B.size
    d_cone = _bmat([[L.B.d, L.f_AB], [Z(nA, nB), L.A.d]])
    P = _bmat([[s.emb[("B", "D")], s.emb[("B", "F")], Z(nB, nE), Z(nB, nF)],
               [Z(nA, nD), Z(nA, nF), s.emb[("A", "E")], s.emb[("A", "F")]]])
    Pinv = _bmat([[s.proj[("B", "D")], Z(nD, nA)], [s.proj[("B", "F")], Z(nF, nA)],
                  [Z(nE, nB), s.proj[("A", "E")]], [Z(nF, nB), s.proj[("A", "F")]]])
    d_new = gf2.mul(Pinv, gf2.mul(d_cone, P))
    expected = _bmat([[b["d_D"], Z(nD, nF), Z(nD, nE), Z(nD, nF)],
                      [b["beta"], b["d_F"], Z(nF, nE), I(nF)],
                      [Z(nE, nD), Z(nE, nF), b["d_E"], b["gamma"]],
                      [Z(nF, nD), Z(nF, nF), Z(nF, nE), b["d_F"]]])
    cone_matches = gf2.mod2(d_new + expected).nnz == 0
    gb = gamma_beta(s)
    d_small = _bmat([[b["d_D"], Z(nD, nE)], [gb, b["d_E"]]])
    i_map = _bmat([[I(nD), Z(nD, nE)], [Z(nF, nD), Z(nF, nE)], [Z(nE, nD), I(nE)],
                   [b["beta"], Z(nF, nE)]])
    pi_map = _bmat([[I(nD), Z(nD, nF), Z(nD, nE), Z(nD, nF)],
                    [Z(nE, nD), b["gamma"], I(nE), Z(nE, nF)]])
    h_map = _bmat([[Z(nD, nD), Z(nD, nF), Z(nD, nE), Z(nD, nF)],
                   [Z(nF, nD), Z(nF, nF), Z(nF, nE), Z(nF, nF)],
                   [Z(nE, nD), Z(nE, nF), Z(nE, nE), Z(nE, nF)],
                   [Z(nF, nD), I(nF), Z(nF, nE), Z(nF, nF)]])
    zero = lambda mtx: gf2.mod2(mtx).nnz == 0  # noqa: E731
    i_chain = zero(gf2.mul(expected, i_map) + gf2.mul(i_map, d_small))
    pi_chain = zero(gf2.mul(d_small, pi_map) + gf2.mul(pi_map, expected))
    pi_i = zero(gf2.mul(pi_map, i_map) + I(nD + nE))
    n = nD + 2 * nF + nE
    homotopy = zero(gf2.mul(h_map, expected) + gf2.mul(expected, h_map) + I(n)
                    + gf2.mul(i_map, pi_map))
    rank_cone = _rank_homology(expected)
    rank_small = _rank_homology(d_small)
    return ConeCheck(cone_matches, i_chain, pi_chain, pi_i, homotopy, rank_cone, rank_small)


def _rank_homology(dm) -> int:
    """Total homology rank of a complex given only its differential (d^2 = 0)."""
    dm = gf2.mod2(dm)
    if not gf2.is_zero(gf2.mul(dm, dm)):
        raise SplitFailure("block differential does not square to zero")
    return dm.shape[0] - 2 * gf2.rank(dm)
