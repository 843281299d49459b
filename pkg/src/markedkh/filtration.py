"""Gradings sigma, pi, s_omega, q and h on cube complexes, and order checks.

Vertices are indexed as in ``Cube`` (bit t is the smoothing of the t-th
resolved crossing, differentials raise the weight).  The filtration literature
writes the same cube with the opposite arrow, so its vertex v corresponds to
the complement of our index; every formula below is written for our indices
and a differential from a to b always has a <= b.

q is stored doubled (``q2``) and h doubled (``h2``) so everything stays
integral.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .cube import Cube, Vertex, enumerate_cube, resolve, self_crossing
from .diagram import Diagram, MarkingData
from .errors import NoDroppedCrossing, NonTrivialVertex, OrderViolation, TooLarge
from .khovanov import GradedComplex

PANTS, HOPF, UNLINK = "pants", "hopf", "unlink"

# values pi(v) may take for a vertex, keyed by the signs of its dropped crossings
PI_TABLE = {
    (): {0},
    (-1,): {0, 2},
    (1,): {-2, 0},
    (-1, -1): {0, 2, 4},
    (-1, 1): {-2, 0, 2},
    (1, 1): {-4, -2, 0},
}


@dataclass
class GradingContext:
    cube: Cube
    origin: int  # vertex index with trivial omega, or -1 if every vertex is killed
    n_plus: int
    n_minus: int
    dropped: tuple[int, ...]
    self_sign: np.ndarray  # (V, len(dropped)): sign of each drop as a self-crossing, 0 if none
    s: np.ndarray  # (V, len(dropped)): s_omega, -1 at killed vertices
    W: np.ndarray  # per vertex: sum of self signs
    pi: np.ndarray  # per vertex pi(v); 0 at killed vertices
    meta: dict = field(default_factory=dict)

    def live(self, a: int) -> bool:
        return not self.cube.killed[a]


def s_omega(d: Diagram, m: MarkingData, v: Vertex, c: int) -> int:
    """0 if c does not divide a component or both wings are even, 1 if both are odd."""
    sign, wa, wb = self_crossing(d, v, c)
    if sign == 0:
        return 0
    pa = sum(m.parity(e) for e in wa) % 2
    pb = sum(m.parity(e) for e in wb) % 2
    if pa != pb:
        raise NonTrivialVertex(f"crossing {c} lies on a component killed by omega")
    return pa


def context(d: Diagram, m: MarkingData = MarkingData(), dropped=(), origin: int | None = None,
            bound: int = 24) -> GradingContext:
    m.validate(d)
    dropped = tuple(sorted(set(dropped)))
    cube = enumerate_cube(d, m, dropped, bound)
    V = len(cube)
    signs = d.signs
    n_plus = sum(1 for k in cube.resolved if signs[k] > 0)
    n_minus = cube.dim - n_plus
    ss = np.zeros((V, len(dropped)), dtype=np.int64)
    s = np.zeros((V, len(dropped)), dtype=np.int64)
    for a in range(V):
        v = cube.vertex(a)
        for i, c in enumerate(dropped):
            ss[a, i] = self_crossing(d, v, c)[0]
            if cube.killed[a]:
                s[a, i] = -1
            else:
                s[a, i] = s_omega(d, m, v, c)
    W = ss.sum(axis=1)
    pi = np.where(cube.killed, 0, (-2 * ss * np.maximum(s, 0)).sum(axis=1))
    if origin is None:
        live = np.nonzero(~cube.killed)[0]
        origin = int(live[0]) if len(live) else -1
    elif cube.killed[origin]:
        raise NonTrivialVertex("origin must be a vertex where omega is trivial")
    return GradingContext(cube, origin, n_plus, n_minus, dropped, ss, s, W, pi)


# -- sigma ---------------------------------------------------------------------------


def edge_cobordism(ctx: GradingContext, a: int, t: int) -> str:
    """Classify the edge a -> a + 2^t: pants if the circle count changes, else Hopf or unlink.

    For an unchanged count, keep the edge crossing y and the dropped crossing
    unresolved: the two-crossing picture is Hopf-type when its 00 smoothing
    has two circles and unlink-type when it has one.
    """
    cube = ctx.cube
    if not ctx.dropped:
        raise NoDroppedCrossing("sigma is only nonzero with a dropped crossing")
    b = a | (1 << t)
    if (a >> t) & 1:
        raise ValueError("edge must go up in bit t")
    if cube.ncirc[a] != cube.ncirc[b]:
        return PANTS
    y = cube.resolved[t]
    changed = [c for i, c in enumerate(ctx.dropped) if ctx.self_sign[a, i] != ctx.self_sign[b, i]]
    x = changed[0] if changed else ctx.dropped[0]
    assign = list(cube.vertex(a).assignment)
    assign[y] = 0
    assign[x] = 0
    st = resolve(cube.d, MarkingData(), Vertex(tuple(assign)))
    local = {st.circle_of(e) for e in cube.d.pd[x] + cube.d.pd[y]}
    return HOPF if len(local) == 2 else UNLINK


def sigma_edge(ctx: GradingContext, a: int, b: int) -> int:
    """Self-intersection of the edge cobordism between adjacent vertices a and b."""
    diff = a ^ b
    if diff == 0 or diff & (diff - 1):
        raise ValueError("vertices are not adjacent")
    lo, hi = min(a, b), max(a, b)
    kind = edge_cobordism(ctx, lo, diff.bit_length() - 1)
    val = {PANTS: 0, HOPF: -2, UNLINK: 2}[kind]
    return val if a < b else -val


def sigma(ctx: GradingContext, a: int, b: int) -> int:
    """Additive self-intersection from a to b: the change in the summed self-crossing signs."""
    if not ctx.dropped:
        return 0
    return int(ctx.W[b] - ctx.W[a])


def sigma_along(ctx: GradingContext, path) -> int:
    """Sum of ``sigma_edge`` along a path of adjacent vertices."""
    return sum(sigma_edge(ctx, p, q) for p, q in zip(path, path[1:]))


# -- pi, q, h ----------------------------------------------------------------------


def pi_vertex(ctx: GradingContext, a: int) -> int:
    if ctx.cube.killed[a]:
        raise NonTrivialVertex(f"omega is not trivial at vertex {a}")
    return int(ctx.pi[a])


def pi(ctx: GradingContext, a: int, b: int) -> int:
    return pi_vertex(ctx, b) - pi_vertex(ctx, a)


def pi_class(ctx: GradingContext, a: int) -> tuple[int, ...]:
    """Configuration class of a vertex for the pi value table."""
    signs = tuple(int(x) for x in ctx.self_sign[a])
    if len(signs) == 2 and 0 in signs:
        return (-1, 1)  # the non-dividing picture sits in the mixed column
    return tuple(sorted(signs))


def q2_grading(ctx: GradingContext, cx: GradedComplex) -> np.ndarray:
    """Twice q per generator: 2Q - 2 sum v(c) + 3 sigma(v, o) + 2 pi(v, o).

    The filtration's v(c) counts 0-smoothings, which is dim - weight here.
    """
    if ctx.origin < 0:
        return np.zeros(cx.size, dtype=np.int64)
    gen_v = np.repeat(np.arange(len(cx.dims)), cx.dims)
    dim = ctx.cube.dim
    w = cx.h
    sig = ctx.W[ctx.origin] - ctx.W[gen_v] if ctx.dropped else 0
    pio = ctx.pi[ctx.origin] - ctx.pi[gen_v]
    return 2 * cx.Q - 2 * (dim - w) + 3 * sig + 2 * pio


def h2_grading(ctx: GradingContext, cx: GradedComplex) -> np.ndarray:
    """Twice h per generator: -2 sum v(c) + sigma(v, o) + 2 n_minus."""
    if ctx.origin < 0:
        return np.zeros(cx.size, dtype=np.int64)
    gen_v = np.repeat(np.arange(len(cx.dims)), cx.dims)
    sig = ctx.W[ctx.origin] - ctx.W[gen_v] if ctx.dropped else 0
    return -2 * (ctx.cube.dim - cx.h) + sig + 2 * ctx.n_minus


# -- goodness proxy -----------------------------------------------------------------


def _geodesic_reach(live: np.ndarray, dim: int, u: int) -> np.ndarray:
    """Vertices with a path to u through live vertices flipping only bits where they differ from u."""
    V = len(live)
    idx = np.arange(V, dtype=np.int64)
    reach = np.zeros(V, dtype=bool)
    reach[u] = live[u]
    diff = idx ^ u
    pop = np.bitwise_count(diff.astype(np.uint64)).astype(np.int64)
    for k in range(1, dim + 1):
        layer = idx[pop == k]
        if not len(layer):
            continue
        ok = np.zeros(len(layer), dtype=bool)
        for t in range(dim):
            has = ((layer ^ u) >> t) & 1 == 1
            ok |= has & reach[layer ^ (1 << t)]
        reach[layer] = ok & live[layer]
    return reach


def is_good_proxy(d: Diagram, m: MarkingData, bound: int = 14) -> bool:
    """True iff every two trivial vertices are joined by a trivial path of length |v - u|_1.

    This is a consequence of goodness, used here as its stand-in.
    """
    if not m.odd_edges:
        return True
    cube = enumerate_cube(d, m)
    if cube.dim > bound:
        raise TooLarge(f"goodness proxy limited to {bound} crossings")
    live = ~np.asarray(cube.killed)
    for u in np.nonzero(live)[0]:
        reach = _geodesic_reach(live, cube.dim, int(u))
        if np.any(live & ~reach):
            return False
    return True


# -- order checks -------------------------------------------------------------------


@dataclass
class OrderReport:
    entries: int
    min_dq2: int | None
    max_dq2: int | None
    dh2_values: list
    q2_parity_classes: list
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"entries": self.entries, "min_dq2": self.min_dq2, "max_dq2": self.max_dq2,
                "dh2_values": self.dh2_values, "q2_parity_classes": self.q2_parity_classes,
                "violations": self.violations[:20], "ok": self.ok}


def check_orders(cx: GradedComplex, ctx: GradingContext, raise_on_violation: bool = True) -> OrderReport:
    """Every nonzero differential entry must have dq >= 0; with no drops dq = 0 and dh = 1."""
    q2 = q2_grading(ctx, cx)
    h2 = h2_grading(ctx, cx)
    coo = cx.d.tocoo()
    dq = q2[coo.row] - q2[coo.col]
    dh = h2[coo.row] - h2[coo.col]
    violations = []
    bad = dq < 0
    if not ctx.dropped:
        bad |= (dq != 0) | (dh != 2)
    for r, c in zip(coo.row[bad][:100], coo.col[bad][:100]):
        violations.append({"source": cx.generator(int(c)), "target": cx.generator(int(r)),
                           "dq2": int(q2[r] - q2[c]), "dh2": int(h2[r] - h2[c])})
    parity = sorted({int(x) for x in np.mod(q2, 4)}) if len(q2) else []
    if len(parity) > 1:
        violations.append({"q_parity_classes": parity})
    rep = OrderReport(int(len(dq)), int(dq.min()) if len(dq) else None,
                      int(dq.max()) if len(dq) else None,
                      sorted({int(x) for x in dh}), parity, violations)
    if violations and raise_on_violation:
        raise OrderViolation(f"{len(violations)} differential entries lower q: {violations[:3]}")
    return rep


def check_sigma_additivity(ctx: GradingContext) -> int:
    """Compare both sigma computations on every edge and check every square closes.

    Returns the number of squares checked; raises ValueError on a mismatch.
    """
    cube = ctx.cube
    if not ctx.dropped:
        return 0
    squares = 0
    for a in range(len(cube)):
        for t in range(cube.dim):
            if (a >> t) & 1:
                continue
            b = a | (1 << t)
            if sigma_edge(ctx, a, b) != sigma(ctx, a, b):
                raise ValueError(f"edge classification disagrees with self signs at {a}->{b}")
        for t1, t2 in combinations(range(cube.dim), 2):
            if (a >> t1) & 1 or (a >> t2) & 1:
                continue
            b1, b2, c = a | (1 << t1), a | (1 << t2), a | (1 << t1) | (1 << t2)
            p1 = sigma_edge(ctx, a, b1) + sigma_edge(ctx, b1, c)
            p2 = sigma_edge(ctx, a, b2) + sigma_edge(ctx, b2, c)
            if p1 != p2:
                raise ValueError(f"sigma depends on the path around square at {a}")
            squares += 1
    return squares


def check_pi_table(ctx: GradingContext) -> dict:
    """Per configuration class, the set of pi values seen; raises if any falls outside the table."""
    seen: dict = {}
    for a in range(len(ctx.cube)):
        if ctx.cube.killed[a]:
            continue
        cls = pi_class(ctx, a)
        val = int(ctx.pi[a])
        if val not in PI_TABLE[cls]:
            raise ValueError(f"pi({a}) = {val} outside the values allowed for class {cls}")
        seen.setdefault(cls, set()).add(val)
    return {k: sorted(v) for k, v in seen.items()}
