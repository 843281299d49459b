"""Marked binary dihedral representations via the integer crossing matrix.

A representation sending meridians into the circle of unit quaternions
cos(t)J + sin(t)K is a vector of arc angles theta with, at every crossing,
theta_in + theta_out = 2 theta_over (+ pi at a marked crossing) mod 2 pi.
Angles are kept as exact fractions of a full turn.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .cube import Vertex, resolve
from .diagram import Diagram, MarkingData, reduce_marking
from .errors import DetZero, NotAKnot, SplitUnknot, TooLarge

INFINITE = "infinite"


@dataclass
class DihedralSystem:
    d: Diagram
    M: np.ndarray  # rows: crossings (grouped by under component), columns: arcs
    e: np.ndarray  # 1 at marked crossings
    row_crossing: list  # crossing index of each row
    col_arc: list  # arc id (its first edge) of each column
    row_component: list
    signs: np.ndarray  # crossing sign per row
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.M.shape[0]

    @cached_property
    def M_minus(self) -> np.ndarray:
        return self.M[:-1, :-1]

    @cached_property
    def snf(self):
        """(D, U, V) with U M V = D, U and V unimodular."""
        return _snf(self.M)

    @cached_property
    def snf_theta(self):
        """SNF of M with the last column removed (theta_n is fixed at 0)."""
        return _snf(self.M[:, :-1])


def _snf(a: np.ndarray):
    m = Matrix(a.tolist())
    if m.rows == 0 or m.cols == 0:
        return (np.zeros(a.shape, dtype=object), np.eye(a.shape[0], dtype=object),
                np.eye(a.shape[1], dtype=object))
    D, U, V = smith_normal_decomp(m)
    return (np.array(D.tolist(), dtype=object), np.array(U.tolist(), dtype=object),
            np.array(V.tolist(), dtype=object))


def _arcs(d: Diagram) -> dict[int, int]:
    """Arc id (smallest edge on the arc) of every edge: over-strand edges join."""
    parent = {e: e for e in d.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in d.pd:
        ra, rb = find(c[1]), find(c[3])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return {e: find(e) for e in d.edges}


def build_system(d: Diagram, m: MarkingData = MarkingData()) -> DihedralSystem:
    m.validate(d)
    if d.unknotted_extras:
        raise SplitUnknot("the diagram has a crossing-free component")
    under_count = [0] * len(d.components)
    comp_of = d.component_of
    for c in d.pd:
        under_count[comp_of[c[0]]] += 1
    if any(k == 0 for k in under_count):
        raise SplitUnknot("a component never passes under; it is a split unknot")
    arc = _arcs(d)
    marked = set(reduce_marking(d, m).marked_crossings or ())
    ends_at = {c[0]: k for k, c in enumerate(d.pd)}  # incoming under edge -> crossing
    rows, cols, row_comp = [], [], []
    for i, comp in enumerate(d.components):
        # walk the component from its first edge; each under crossing closes an arc
        start = comp[0]
        first_arc = arc[start]
        e = start
        seen_arcs = [first_arc]
        order_x = []
        succ = d.successor
        for _ in range(len(comp)):
            if e in ends_at:
                order_x.append(ends_at[e])
                nxt = arc[succ[e]]
                if nxt not in seen_arcs:
                    seen_arcs.append(nxt)
            e = succ[e]
        # rotate so that row j separates arcs j and j + 1
        rows.extend(order_x)
        cols.extend(seen_arcs)
        row_comp.extend([i] * len(order_x))
    if len(rows) != len(cols):
        raise SplitUnknot("arc and crossing counts differ")
    col_index = {a: j for j, a in enumerate(cols)}
    n = len(rows)
    M = np.zeros((n, n), dtype=np.int64)
    for r, k in enumerate(rows):
        a, b, c, e = d.pd[k]
        M[r, col_index[arc[a]]] += 1
        M[r, col_index[arc[c]]] += 1
        M[r, col_index[arc[b]]] -= 2
    ev = np.array([1 if k in marked else 0 for k in rows], dtype=np.int64)
    signs = np.array([d.signs[k] for k in rows], dtype=np.int64)
    return DihedralSystem(d, M, ev, rows, cols, row_comp, signs)


def _bareiss_det(a: np.ndarray) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = a.shape[0]
    if n == 0:
        return 1
    m = [[int(x) for x in row] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def checkerboard_vector(d: Diagram) -> tuple[int, ...]:
    """+1 or -1 per crossing: the checkerboard colour of the corner between slots 0 and 1.

    The corners (k, s) and (k, s + 1) lie on either side of an edge, so
    their regions get opposite colours.
    """
    face = {corner: f for f, cyc in enumerate(d.faces) for corner in cyc}
    nf = len(d.faces)
    adj: dict[int, set] = {f: set() for f in range(nf)}
    for (k, s), f in face.items():
        g = face[(k, (s + 1) % 4)]
        adj[f].add(g)
        adj[g].add(f)
    colour: dict[int, int] = {}
    for f0 in range(nf):
        if f0 in colour:
            continue
        colour[f0] = 0
        stack = [f0]
        while stack:
            f = stack.pop()
            for g in adj[f]:
                if g not in colour:
                    colour[g] = 1 - colour[f]
                    stack.append(g)
                elif colour[g] == colour[f]:
                    raise AssertionError("faces are not two-colourable")
    return tuple(1 if colour[face[(k, 1)]] == 0 else -1 for k in range(d.n))


def kernel_vector(sys: DihedralSystem) -> np.ndarray:
    """The +-1 left-kernel vector of M, in row order.

    Crossing signs only give a kernel vector when signs alternate along
    every over-arc; the checkerboard type works for every diagram.
    """
    cb = checkerboard_vector(sys.d)
    return np.array([cb[k] for k in sys.row_crossing], dtype=np.int64)


def signs_in_kernel(sys: DihedralSystem) -> bool:
    return not np.any(sys.signs @ sys.M)


def link_det(sys: DihedralSystem) -> int:
    return abs(_bareiss_det(sys.M_minus))


def left_kernel_basis(sys: DihedralSystem) -> np.ndarray:
    """Integral basis (rows) of {w : w M = 0}; the lattice it spans is saturated."""
    D, U, _ = sys.snf
    r = sum(1 for i in range(min(D.shape)) if D[i, i] != 0)
    basis = U[r:, :]
    u = kernel_vector(sys).astype(object)
    if np.any(u @ sys.M.astype(object) != 0):
        raise AssertionError("checkerboard vector is not in the left kernel")
    if len(basis):
        # u must be an integral combination of the basis
        sol = Matrix(basis.T.tolist()).gauss_jordan_solve(Matrix(u.tolist()))[0]
        if any(not x.is_integer for x in sol):
            raise AssertionError("checkerboard vector not in the integral kernel lattice")
    return basis


def solvable(sys: DihedralSystem) -> bool:
    """M theta = pi e has a torus solution iff w . e is even for every left-kernel basis vector."""
    basis = left_kernel_basis(sys)
    return all(int(np.dot(w, sys.e.astype(object))) % 2 == 0 for w in basis)


def _homogeneous(sys: DihedralSystem):
    """Invariant factors and transform for M' t = 0 mod 1, t in (R/Z)^(n-1)."""
    D, U, V = sys.snf_theta
    k = D.shape[1]
    diag = [int(D[i, i]) if i < D.shape[0] else 0 for i in range(k)]
    return diag, U, V


def count_RB(sys: DihedralSystem):
    """Number of solutions with theta_n = 0, or INFINITE for a positive-dimensional set."""
    if not solvable(sys):
        return 0
    if sys.n == 0:
        return 1
    diag, _, _ = _homogeneous(sys)
    if any(x == 0 for x in diag):
        return INFINITE
    count = 1
    for x in diag:
        count *= abs(x)
    return count


def homogeneous_kernel_dim(sys: DihedralSystem) -> int:
    """Dimension of the real solution space of M theta = 0 with theta_n = 0."""
    diag, _, _ = _homogeneous(sys)
    return sum(1 for x in diag if x == 0)


def _particular(sys: DihedralSystem):
    """One torus solution t (fractions of a turn, t_n = 0) of M t = e/2 mod 1, or None."""
    if not solvable(sys):
        return None
    n = sys.n
    if n == 0:
        return []
    D, U, V = sys.snf_theta
    rhs = U.dot(np.array([Fraction(int(x), 2) for x in sys.e], dtype=object))
    k = D.shape[1]
    s = []
    for i in range(k):
        di = int(D[i, i]) if i < D.shape[0] else 0
        if di == 0:
            s.append(Fraction(0))
        else:
            s.append(Fraction(rhs[i]) / di)
    for i in range(k, D.shape[0]):
        if Fraction(rhs[i]).denominator != 1:
            return None
    t = V.dot(np.array(s, dtype=object))
    return [Fraction(x) % 1 for x in t] + [Fraction(0)]


def solutions(sys: DihedralSystem, limit: int = 10**6):
    """All torus solutions with theta_n = 0, as tuples of fractions of a turn."""
    base = _particular(sys)
    if base is None:
        return []
    diag, _, V = _homogeneous(sys)
    if any(x == 0 for x in diag):
        raise DetZero("solution set is positive-dimensional")
    total = 1
    for x in diag:
        total *= abs(x)
    if total > limit:
        raise TooLarge(f"{total} solutions exceed the enumeration limit")
    out = set()
    for ks in product(*(range(abs(x)) for x in diag)):
        s = np.array([Fraction(k, abs(x)) for k, x in zip(ks, diag)], dtype=object)
        t = V.dot(s) if len(s) else np.zeros(0, dtype=object)
        sol = tuple((Fraction(base[i]) + Fraction(t[i])) % 1 for i in range(len(t))) + (Fraction(0),)
        out.add(sol)
    return sorted(out)


def klassen_count(d: Diagram) -> int:
    """Nonabelian solutions up to theta -> -theta, for a knot."""
    if len(d.components) != 1:
        raise NotAKnot("Klassen's count is for knots")
    sys = build_system(d)
    sols = solutions(sys)
    nonab = [s for s in sols if len(set(s)) > 1]
    classes = {min(s, tuple((-x) % 1 for x in s)) for s in nonab}
    return len(classes)


def brute_force_oracle(sys: DihedralSystem, max_points: int = 2 * 10**6) -> int:
    """Count solutions by scanning the grid of multiples of pi/det for every angle.

    Angles are integers mod 2 det standing for multiples of pi / det; the
    marked right-hand side pi is then det.
    """
    det = link_det(sys)
    if det == 0:
        raise DetZero("grid search needs a nonzero determinant")
    n = sys.n
    mod = 2 * det
    if mod ** max(n - 1, 0) > max_points:
        raise TooLarge("grid too large for exhaustive search")
    M = sys.M
    rhs = (sys.e * det) % mod
    if n == 0:
        return 1
    if n == 1:
        grid = np.zeros((1, 0), dtype=np.int64)
    else:
        grid = np.array(list(product(range(mod), repeat=n - 1)), dtype=np.int64)
    theta = np.concatenate([grid, np.zeros((len(grid), 1), dtype=np.int64)], axis=1)
    lhs = (theta @ M.T) % mod
    count = int(np.count_nonzero(np.all(lhs == rhs[None, :], axis=1)))
    return count


def kauffman_det(d: Diagram, bound: int = 22) -> int:
    """|<D>| at A = exp(i pi / 4), an independent route to the determinant.

    At this value the loop factor -A^2 - A^-2 vanishes, so only states with a
    single circle contribute, each A^(#0 - #1).
    """
    n = d.n
    if n > bound:
        raise TooLarge("state sum limited by bound")
    counts = [0] * 8
    for bits in range(1 << n):
        v = Vertex(tuple((bits >> k) & 1 for k in range(n)))
        if resolve(d, MarkingData(), v).circle_count == 1:
            ones = bin(bits).count("1")
            counts[(n - 2 * ones) % 8] += 1
    # sum c_k zeta^k with zeta = exp(i pi/4); all k share a parity
    odd = any(counts[k] for k in range(1, 8, 2))
    if odd:
        counts = counts[1:] + counts[:1]  # multiply by zeta^-1
    re = counts[0] - counts[4]
    im = counts[2] - counts[6]
    norm2 = re * re + im * im
    root = int(round(norm2 ** 0.5))
    while root * root > norm2:
        root -= 1
    while (root + 1) ** 2 <= norm2:
        root += 1
    if root * root != norm2:
        raise ArithmeticError("bracket norm is not a perfect square")
    return root


def find_det_zero_link(rng, max_crossings: int = 10, attempts: int = 20000):
    """Random braid closures until a two-component diagram with determinant 0 turns up."""
    from .diagram import braid_closure, random_braid

    for _ in range(attempts):
        strands = int(rng.integers(2, 5))
        length = int(rng.integers(strands, max_crossings + 1))
        d = braid_closure(random_braid(rng, strands, length))
        if len(d.components) != 2 or d.unknotted_extras:
            continue
        if any(len(set(c)) < 4 for c in d.pd):  # skip diagrams with kinks
            continue
        try:
            sys = build_system(d)
        except SplitUnknot:
            continue
        if link_det(sys) == 0:
            return d
    return None


def component_omega(d: Diagram, a: int, b: int) -> MarkingData:
    """An omega arc from component a to component b, ending on their first edges."""
    ca, cb = d.components[a], d.components[b]
    return MarkingData.from_edges([ca[0], cb[0]])


def summary(d: Diagram, m: MarkingData = MarkingData()) -> dict:
    sys = build_system(d, m)
    det = link_det(sys)
    cnt = count_RB(sys)
    out = {"det": det, "solvable": solvable(sys), "count": cnt,
           "kernel_rank": int(len(left_kernel_basis(sys))),
           "marked_crossings": [int(k) for k, x in zip(sys.row_crossing, sys.e) if x]}
    if len(d.components) == 1:
        out["klassen"] = klassen_count(d)
        out["klassen_formula"] = (det - 1) // 2
    return out


def _gcd_all(xs):
    g = 0
    for x in xs:
        g = gcd(g, int(x))
    return g
