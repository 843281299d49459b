"""Oriented link diagrams in PD form, plus marking data.

PD convention: each crossing lists its four edges counterclockwise, starting
from the incoming under-strand, so the under strand runs slot 0 -> slot 2.
Edge labels increase along the orientation of each component.  Crossing-free
circles cannot be written in PD form; they are carried as a count and given
virtual edge labels placed after the largest PD label.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import EmptyDiagram, MalformedInput, NoUnderCrossing

Crossing = tuple[int, int, int, int]


@dataclass(frozen=True)
class Diagram:
    pd: tuple[Crossing, ...]
    unknotted_extras: int = 0

    def __post_init__(self):
        pd = tuple(tuple(int(e) for e in c) for c in self.pd)
        object.__setattr__(self, "pd", pd)
        if self.unknotted_extras < 0:
            raise MalformedInput("unknotted_extras must be non-negative")
        if not pd and not self.unknotted_extras:
            raise EmptyDiagram("diagram has no crossings and no circles")
        for c in pd:
            if len(c) != 4:
                raise MalformedInput(f"crossing {c} does not have four edges")
        occ: dict[int, list[tuple[int, int]]] = {}
        for k, c in enumerate(pd):
            for s, e in enumerate(c):
                occ.setdefault(e, []).append((k, s))
        bad = sorted(e for e, o in occ.items() if len(o) != 2)
        if bad:
            raise MalformedInput(f"edge ids must appear exactly twice; offending: {bad}")
        object.__setattr__(self, "_occ", {e: tuple(o) for e, o in occ.items()})
        _check_planar(pd, self._occ)
        object.__setattr__(self, "_over_in", _orient_over(pd, self._occ))
        self._check_numbering()

    # -- basic derived data ------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.pd)

    @cached_property
    def pd_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self._occ))

    @cached_property
    def extra_edges(self) -> tuple[int, ...]:
        top = max(self._occ) if self._occ else 0
        return tuple(range(top + 1, top + 1 + self.unknotted_extras))

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return self.pd_edges + self.extra_edges

    def occurrences(self, e: int) -> tuple[tuple[int, int], tuple[int, int]]:
        return self._occ[e]

    def over_in_slot(self, k: int) -> int:
        """Slot (1 or 3) where the over strand enters crossing k."""
        return self._over_in[k]

    def head(self, e: int) -> tuple[int, int]:
        """The (crossing, slot) where edge e ends."""
        for k, s in self._occ[e]:
            if s == 0 or s == self._over_in[k]:
                return (k, s)
        raise AssertionError("edge without head")

    def tail(self, e: int) -> tuple[int, int]:
        h = self.head(e)
        a, b = self._occ[e]
        return b if a == h else a

    @cached_property
    def successor(self) -> dict[int, int]:
        nxt = {}
        for e in self.pd_edges:
            k, s = self.head(e)
            nxt[e] = self.pd[k][(s + 2) % 4]
        for e in self.extra_edges:
            nxt[e] = e
        return nxt

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = set()
        comps = []
        for e in self.pd_edges:
            if e in seen:
                continue
            cyc = [e]
            seen.add(e)
            f = self.successor[e]
            while f != e:
                cyc.append(f)
                seen.add(f)
                f = self.successor[f]
            comps.append(tuple(cyc))
        comps.extend((e,) for e in self.extra_edges)
        return tuple(comps)

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {e: i for i, comp in enumerate(self.components) for e in comp}

    @cached_property
    def signs(self) -> tuple[int, ...]:
        # under strand points "up"; over strand d -> b crosses it positively
        return tuple(1 if self._over_in[k] == 3 else -1 for k in range(self.n))

    @cached_property
    def faces(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Regions of the diagram as cycles of (crossing, slot).

        (k, s) means the boundary leaves crossing k along the edge in slot s,
        so the region has the corner between slots s - 1 and s of crossing k.
        """
        seen = set()
        out = []
        for k in range(self.n):
            for s in range(4):
                if (k, s) in seen:
                    continue
                cyc = []
                cur = (k, s)
                while cur not in seen:
                    seen.add(cur)
                    cyc.append(cur)
                    o1, o2 = self._occ[self.pd[cur[0]][cur[1]]]
                    k2, s2 = o2 if o1 == cur else o1
                    cur = (k2, (s2 + 1) % 4)
                out.append(tuple(cyc))
        return tuple(out)

    def strands(self, k: int) -> tuple[int, int]:
        """(under component, over component) at crossing k."""
        c = self.pd[k]
        return self.component_of[c[0]], self.component_of[c[1]]

    def _check_numbering(self):
        for comp in self.components:
            lo, hi = min(comp), max(comp)
            if len(set(comp)) != hi - lo + 1:
                raise MalformedInput(f"component edges {sorted(comp)} are not contiguous")
            for e in comp:
                want = lo if e == hi else e + 1
                if self.successor[e] != want:
                    raise MalformedInput(
                        f"edge numbering does not follow the orientation at edge {e}")

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"pd": [list(c) for c in self.pd], "unknotted_extras": self.unknotted_extras}


def _check_planar(pd, occ):
    """Euler characteristic test: each connected piece must embed in the sphere.

    Faces are the orbits of "cross the edge, then turn to the next slot
    counterclockwise"; a piece with n crossings is planar iff it has n + 2 faces.
    """
    n = len(pd)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (k1, _), (k2, _) in occ.values():
        parent[find(k1)] = find(k2)
    pieces = len({find(k) for k in range(n)})
    seen = set()
    faces = 0
    for k in range(n):
        for s in range(4):
            if (k, s) in seen:
                continue
            faces += 1
            cur = (k, s)
            while cur not in seen:
                seen.add(cur)
                o1, o2 = occ[pd[cur[0]][cur[1]]]
                k2, s2 = o2 if o1 == cur else o1
                cur = (k2, (s2 + 1) % 4)
    if faces != n + 2 * pieces:
        raise MalformedInput("PD code does not describe a planar diagram")


def _orient_over(pd, occ) -> tuple[int, ...]:
    """Decide for each crossing whether the over strand enters at slot 1 or 3.

    Under passages are oriented by convention.  Each edge has one head and one
    tail, which propagates direction to over passages.  Components that never
    pass under fall back to the label order.
    """
    n = len(pd)
    role: dict[tuple[int, int], str] = {}
    over_in = [0] * n
    queue = deque()

    def other(e, ks):
        a, b = occ[e]
        return b if a == ks else a

    def assign(ks, r):
        if ks in role:
            if role[ks] != r:
                raise MalformedInput(f"inconsistent orientation at crossing {ks[0]}")
            return
        role[ks] = r
        queue.append(ks)

    for k in range(n):
        assign((k, 0), "in")
        assign((k, 2), "out")

    def drain():
        while queue:
            k, s = queue.popleft()
            e = pd[k][s]
            assign(other(e, (k, s)), "out" if role[(k, s)] == "in" else "in")
            if s in (1, 3):
                assign((k, 4 - s), "out" if role[(k, s)] == "in" else "in")

    drain()
    for k in range(n):
        if (k, 1) in role:
            continue
        b, d = pd[k][1], pd[k][3]
        # orientation from numbering; b follows d when b == d + 1 (cyclically)
        s_in = 3 if (b == d + 1 or d > b + 1) else 1
        assign((k, s_in), "in")
        drain()
    for k in range(n):
        over_in[k] = 3 if role[(k, 3)] == "in" else 1
    return tuple(over_in)


# -- marking data ------------------------------------------------------------


@dataclass(frozen=True)
class MarkingData:
    """Parity of the number of omega endpoints on each edge."""

    odd_edges: frozenset[int] = frozenset()
    marked_crossings: tuple[int, ...] | None = None

    @classmethod
    def from_edges(cls, edges) -> "MarkingData":
        odd = set()
        for e in edges:
            odd ^= {int(e)}
        return cls(frozenset(odd))

    def parity(self, e: int) -> int:
        return 1 if e in self.odd_edges else 0

    def validate(self, d: Diagram):
        extra = self.odd_edges - set(d.edges)
        if extra:
            raise MalformedInput(f"omega edges not in diagram: {sorted(extra)}")
        if len(self.odd_edges) % 2:
            raise MalformedInput("omega must have an even number of endpoints in total")

    def component_parity(self, d: Diagram) -> tuple[int, ...]:
        par = [0] * len(d.components)
        for e in self.odd_edges:
            par[d.component_of[e]] ^= 1
        return tuple(par)


def reduce_marking(d: Diagram, m: MarkingData) -> MarkingData:
    """Pick one crossing per odd component: the smallest index where it passes under."""
    m.validate(d)
    marked = []
    for i, p in enumerate(m.component_parity(d)):
        if not p:
            continue
        ks = [k for k in range(d.n) if d.component_of[d.pd[k][0]] == i]
        if not ks:
            raise NoUnderCrossing(f"component {i} carries an odd number of endpoints but never passes under")
        marked.append(min(ks))
    return MarkingData(m.odd_edges, tuple(sorted(marked)))


# -- derived predicates --------------------------------------------------------


def crossing_signs(d: Diagram) -> dict[int, int]:
    return dict(enumerate(d.signs))


def is_alternating(d: Diagram) -> bool:
    for comp in d.components:
        if len(comp) == 1 and comp[0] in d.extra_edges:
            continue
        kinds = []
        for e in comp:
            k, s = d.head(e)
            kinds.append(s == 0)
        if any(kinds[i] == kinds[i - 1] for i in range(len(kinds))):
            return False
    return True


def mirror(d: Diagram) -> Diagram:
    """Change every crossing; edge labels and orientation are kept."""
    pd = []
    for k, (a, b, c, e) in enumerate(d.pd):
        pd.append((e, a, b, c) if d.over_in_slot(k) == 3 else (b, c, e, a))
    return Diagram(tuple(pd), d.unknotted_extras)


def canonical_pd(crossings, heads=None, extras: int = 0) -> Diagram:
    return _canonical(crossings, heads, extras)[0]


def _canonical(crossings, heads=None, extras: int = 0):
    """Build a valid Diagram from crossings whose under passage is slots 0-2.

    Labels may be arbitrary hashables; the passage direction is unknown.  Each
    component is traversed starting from its first-seen label, in the
    direction given by ``heads`` (label -> crossing index where it ends) when
    available.  Labels are renumbered consecutively along each component and
    every crossing is rotated to start at its incoming under edge.
    ``_canonical`` also returns the map from old labels to new ones.
    """
    heads = heads or {}
    occ: dict = {}
    order = []
    for k, c in enumerate(crossings):
        for s, e in enumerate(c):
            if e not in occ:
                order.append(e)
            occ.setdefault(e, []).append((k, s))
    for e, o in occ.items():
        if len(o) != 2:
            raise MalformedInput(f"label {e!r} appears {len(o)} times")
    label = {}
    head_slot = {}
    nxt = 1
    for start in order:
        if start in label:
            continue
        o = occ[start]
        if start in heads and o[0][0] != heads[start] and o[1][0] == heads[start]:
            h = o[1]
        elif start in heads and o[0][0] == heads[start] and o[1][0] != heads[start]:
            h = o[0]
        else:
            h = o[1]
        e = start
        while e not in label:
            label[e] = nxt
            nxt += 1
            head_slot[e] = h
            k, s = h
            f = crossings[k][(s + 2) % 4]
            fo = occ[f]
            t = (k, (s + 2) % 4)
            h = fo[1] if fo[0] == t else fo[0]
            e = f
    pd = []
    for k, c in enumerate(crossings):
        lab = [label[e] for e in c]
        if head_slot[c[0]] == (k, 0):
            pd.append(tuple(lab))
        else:
            pd.append((lab[2], lab[3], lab[0], lab[1]))
    return Diagram(tuple(pd), extras), label


def braid_closure(word, strands: int | None = None) -> Diagram:
    """Closure of a braid word; generator +i crosses positions i-1 and i.

    Positive letters put the strand entering on the left under, negative
    letters the one entering on the right.  Positions no letter touches close
    up into crossing-free circles.
    """
    word = [int(g) for g in word]
    if any(g == 0 for g in word):
        raise MalformedInput("braid letters must be nonzero")
    strands = strands or (max((abs(g) for g in word), default=0) + 1)
    if any(abs(g) >= strands for g in word):
        raise MalformedInput("braid letter exceeds strand count")
    current = [("in", p) for p in range(strands)]
    crossings, heads, tails = [], {}, {}
    for k, g in enumerate(word):
        i = abs(g) - 1
        a, b = current[i], current[i + 1]
        left, right = ("out", k, 0), ("out", k, 1)
        crossings.append((a, b, right, left) if g > 0 else (b, right, left, a))
        heads[a] = heads[b] = k
        current[i], current[i + 1] = left, right
    # close up: the last label at each position is the first one there
    rename = {}
    touched = set()
    for g in word:
        touched.update((abs(g) - 1, abs(g)))
    for p in range(strands):
        rename[current[p]] = ("in", p)
    closed = [tuple(rename.get(e, e) for e in c) for c in crossings]
    extras = strands - len(touched)
    if not closed:
        return Diagram((), extras)
    return _canonical(closed, heads, extras)[0]


def random_braid(rng, strands: int, length: int) -> list[int]:
    """A braid word touching every position, so its closure has no free circles."""
    while True:
        word = [int(rng.integers(1, strands)) * (1 if rng.random() < 0.5 else -1)
                for _ in range(length)]
        if {abs(g) for g in word} == set(range(1, strands)):
            return word


# -- input format -------------------------------------------------------------


@dataclass(frozen=True)
class LinkInput:
    diagram: Diagram
    marking: MarkingData = field(default_factory=MarkingData)
    basepoint: int | None = None
    name: str | None = None

    def to_json(self) -> dict:
        out = self.diagram.to_json()
        out["omega_edges"] = sorted(self.marking.odd_edges)
        out["basepoint_edge"] = self.basepoint
        if self.name:
            out["name"] = self.name
        return out


def load_input(source) -> LinkInput:
    """Parse the JSON input format from text or an already-decoded dict."""
    if isinstance(source, (str, bytes)):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from None
    else:
        obj = source
    if not isinstance(obj, dict) or "pd" not in obj:
        raise MalformedInput("expected an object with a 'pd' field")
    try:
        pd = tuple(tuple(int(x) for x in c) for c in obj["pd"])
        extras = int(obj.get("unknotted_extras", 0) or 0)
        omega = [int(e) for e in obj.get("omega_edges", []) or []]
        bp = obj.get("basepoint_edge")
        bp = None if bp is None else int(bp)
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"bad field type: {exc}") from None
    d = Diagram(pd, extras)
    m = MarkingData.from_edges(omega)
    m.validate(d)
    if bp is not None and bp not in d.edges:
        raise MalformedInput(f"basepoint edge {bp} not in diagram")
    return LinkInput(d, m, bp, obj.get("name"))


def parse_diagram(text) -> Diagram:
    return load_input(text).diagram


def dump_input(li: LinkInput) -> str:
    return json.dumps(li.to_json(), sort_keys=True)
