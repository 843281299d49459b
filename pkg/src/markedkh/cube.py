"""Cube of resolutions, including pseudo-diagrams with dropped crossings.

Smoothings follow the usual Khovanov convention on a PD crossing (a, b, c, d):
the 0-smoothing joins a-b and c-d, the 1-smoothing joins a-d and b-c.  A
dropped crossing is traversed straight through (a-c, b-d).  A vertex is a
tuple indexed by crossing with entries 0, 1 or None (dropped).
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .diagram import Diagram, MarkingData
from .errors import CubeTooLarge

DEFAULT_BOUND = 24
PARTNER = (
    (1, 0, 3, 2),  # 0-smoothing
    (3, 2, 1, 0),  # 1-smoothing
    (2, 3, 0, 1),  # dropped
)


@dataclass(frozen=True)
class Vertex:
    assignment: tuple

    @property
    def weight(self) -> int:
        return sum(a for a in self.assignment if a is not None)

    @property
    def dropped(self) -> tuple[int, ...]:
        return tuple(k for k, a in enumerate(self.assignment) if a is None)

    def flip(self, k: int) -> "Vertex":
        a = list(self.assignment)
        a[k] = 1 - a[k]
        return Vertex(tuple(a))

    def __le__(self, other):
        return all(x is None or x <= y for x, y in zip(self.assignment, other.assignment))


@dataclass(frozen=True)
class ResolvedState:
    vertex: Vertex
    circles: tuple[tuple[int, ...], ...]
    omega_parity: tuple[int, ...]

    @property
    def circle_count(self) -> int:
        return len(self.circles)

    @property
    def trivial(self) -> bool:
        return not any(self.omega_parity)

    @property
    def killed(self) -> bool:
        return not self.trivial

    def circle_of(self, e: int) -> int:
        for i, c in enumerate(self.circles):
            if e in c:
                return i
        raise KeyError(e)


def _slot_kind(a) -> int:
    return 2 if a is None else a


def resolve(d: Diagram, m: MarkingData, v: Vertex) -> ResolvedState:
    """Circles of one (pseudo-)resolution, by union-find over edges."""
    if len(v.assignment) != d.n:
        raise ValueError("vertex length does not match crossing count")
    parent = {e: e for e in d.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, c in enumerate(d.pd):
        part = PARTNER[_slot_kind(v.assignment[k])]
        for s in (0, 2) if part[0] != 2 else (0, 1):
            ra, rb = find(c[s]), find(c[part[s]])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for e in d.edges:
        groups.setdefault(find(e), []).append(e)
    circles = tuple(sorted((tuple(sorted(g)) for g in groups.values()), key=lambda g: g[0]))
    par = tuple(sum(m.parity(e) for e in c) % 2 for c in circles)
    return ResolvedState(v, circles, par)


class Cube(Mapping):
    """All resolutions of a diagram with a fixed set of dropped crossings.

    Vertex index bit i is the resolution of ``resolved[i]``.  Circle ids per
    vertex follow the order of the smallest edge in each circle.
    """

    def __init__(self, d: Diagram, m: MarkingData, dropped=(), bound: int = DEFAULT_BOUND,
                 fixed=None):
        self.d = d
        self.m = m
        self.dropped = tuple(sorted(set(dropped)))
        if len(self.dropped) > 2:
            raise ValueError("at most two dropped crossings")
        self.fixed = dict(sorted((fixed or {}).items()))
        if set(self.fixed) & set(self.dropped) or any(a not in (0, 1) for a in self.fixed.values()):
            raise ValueError("fixed crossings must be resolved to 0 or 1 and not dropped")
        self.resolved = tuple(k for k in range(d.n)
                              if k not in self.dropped and k not in self.fixed)
        if len(self.resolved) > bound:
            raise CubeTooLarge(f"cube dimension {len(self.resolved)} exceeds bound {bound}")
        self.edge_index = {e: i for i, e in enumerate(d.edges)}
        self.n_edges = len(d.edges)
        self.slots = np.array([[self.edge_index[e] for e in d.pd[k]] for k in range(d.n)],
                              dtype=np.int32).reshape(-1, 4)
        res = self.slots[list(self.resolved)] if self.resolved else np.zeros((0, 4), np.int32)
        # a fixed smoothing is a strand-through pairing on permuted slots
        through = [self.slots[k] for k in self.dropped]
        for k, a in self.fixed.items():
            s = self.slots[k]
            through.append(s[[0, 2, 1, 3]] if a == 0 else s[[0, 1, 3, 2]])
        drp = np.array(through, dtype=np.int32).reshape(-1, 4)
        self.circ, self.ncirc = kernels.resolve_cube(res, drp, self.n_edges)
        odd = [self.edge_index[e] for e in sorted(m.odd_edges)]
        self.odd_mask = self._odd_masks(odd)
        self.killed = np.array([mask != 0 for mask in self.odd_mask], dtype=bool)

    def _odd_masks(self, odd):
        masks = [0] * len(self.ncirc)
        if not odd:
            return masks
        sub = self.circ[:, odd].astype(np.int64)
        if int(self.ncirc.max()) < 64:
            acc = np.zeros(len(masks), dtype=np.uint64)
            for col in sub.T:
                acc ^= np.left_shift(np.uint64(1), col.astype(np.uint64))
            return [int(a) for a in acc]
        for v in range(len(masks)):
            mask = 0
            for c in sub[v]:
                mask ^= 1 << int(c)
            masks[v] = mask
        return masks

    # -- indexing -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.resolved)

    def __len__(self):
        return len(self.ncirc)

    def __iter__(self):
        for i in range(len(self)):
            yield self.vertex(i)

    def vertex(self, i: int) -> Vertex:
        a = [None] * self.d.n
        for k, f in self.fixed.items():
            a[k] = f
        for t, k in enumerate(self.resolved):
            a[k] = (i >> t) & 1
        return Vertex(tuple(a))

    def index(self, v: Vertex) -> int:
        i = 0
        for t, k in enumerate(self.resolved):
            if v.assignment[k] is None:
                raise KeyError("vertex leaves a resolved crossing unresolved")
            i |= v.assignment[k] << t
        for k in self.dropped:
            if v.assignment[k] is not None:
                raise KeyError("vertex resolves a dropped crossing")
        for k, f in self.fixed.items():
            if v.assignment[k] != f:
                raise KeyError("vertex disagrees with a fixed crossing")
        return i

    def weight(self, i: int) -> int:
        return bin(i).count("1")

    def __getitem__(self, v) -> ResolvedState:
        i = v if isinstance(v, (int, np.integer)) else self.index(v)
        return self.state(int(i))

    def state(self, i: int) -> ResolvedState:
        row = self.circ[i]
        nc = int(self.ncirc[i])
        groups = [[] for _ in range(nc)]
        for e, idx in self.edge_index.items():
            groups[row[idx]].append(e)
        circles = tuple(tuple(sorted(g)) for g in groups)
        mask = self.odd_mask[i]
        par = tuple((mask >> c) & 1 for c in range(nc))
        return ResolvedState(self.vertex(i), circles, par)

    def trivial(self, i: int) -> bool:
        return not self.killed[i]

    def neighbors_up(self, i: int):
        for t in range(self.dim):
            if not (i >> t) & 1:
                yield t, i | (1 << t)


@lru_cache(maxsize=64)
def _cached_cube(d, odd, dropped, bound, fixed):
    return Cube(d, MarkingData(odd), dropped, bound, dict(fixed))


def enumerate_cube(d: Diagram, m: MarkingData, dropped=(), bound: int = DEFAULT_BOUND,
                   fixed=None) -> Cube:
    """All 2^(n - |dropped|) states, memoized per (diagram, marking, drops).

    ``fixed`` optionally pins some crossings to a 0 or 1 smoothing; the cube
    then runs over the remaining crossings only.
    """
    return _cached_cube(d, frozenset(m.odd_edges), tuple(sorted(set(dropped))), bound,
                        tuple(sorted((fixed or {}).items())))


# -- dropped crossing geometry -------------------------------------------------


def walk_wing(d: Diagram, v: Vertex, c: int):
    """Traverse the pseudo-diagram away from crossing c through slot 0.

    Returns (edges visited, arrival slot at c).  Arrival at slot 1 or 3 means c
    is a self-crossing of one component and the visited edges form one wing.
    """
    edges = []
    k, s = c, 0
    while True:
        e = d.pd[k][s]
        edges.append(e)
        o1, o2 = d.occurrences(e)
        k2, s2 = o2 if o1 == (k, s) else o1
        if k2 == c and v.assignment[c] is None:
            return edges, s2
        s = PARTNER[_slot_kind(v.assignment[k2])][s2]
        k = k2


def self_crossing(d: Diagram, v: Vertex, c: int):
    """Sign of dropped crossing c as a self-crossing of its pseudo-diagram component.

    Returns (sign, wing_a, wing_b); sign is 0 (and wings empty) when the two
    strands at c lie on different components.  The sign does not depend on how
    the component is oriented.
    """
    if v.assignment[c] is not None:
        raise ValueError("crossing is not dropped at this vertex")
    wing_a, arrival = walk_wing(d, v, c)
    if arrival == 2:
        return 0, (), ()
    # leaving through slot 0 runs the under strand backwards; arriving at
    # slot 1 runs the over strand b -> d, also backwards, so the sign is +1
    sign = 1 if arrival == 1 else -1
    st = resolve(d, MarkingData(), v)
    comp = st.circles[st.circle_of(d.pd[c][0])]
    seen = set(wing_a)
    wing_b = tuple(e for e in comp if e not in seen)
    return sign, tuple(wing_a), wing_b


# -- trivial paths ------------------------------------------------------------------


def trivial_path_exists(d: Diagram, m: MarkingData, v: Vertex, u: Vertex, cube: Cube | None = None):
    """Search for a path v -> u of length |v-u|_1 through trivial vertices.

    Moves are tried greedily: merges first, then splits (each split is then
    followed by whatever merges it enables); every admissible split is tried
    before giving up.  Returns (found, path as a list of Vertex).
    """
    cube = cube or enumerate_cube(d, m)
    if cube.dropped or cube.fixed:
        raise ValueError("trivial paths are defined on the fully resolved cube")
    iv, iu = cube.index(v), cube.index(u)
    if cube.killed[iv] or cube.killed[iu]:
        raise ValueError("endpoints must be trivial")
    failed = set()

    def search(i):
        if i == iu:
            return [i]
        if i in failed:
            return None
        diff = i ^ iu
        merges, splits = [], []
        t = 0
        while diff >> t:
            if (diff >> t) & 1:
                j = i ^ (1 << t)
                if not cube.killed[j]:
                    (merges if cube.ncirc[j] < cube.ncirc[i] else splits).append(j)
            t += 1
        for j in merges + splits:
            rest = search(j)
            if rest is not None:
                return [i] + rest
        failed.add(i)
        return None

    path = search(iv)
    if path is None:
        return False, []
    return True, [cube.vertex(i) for i in path]
