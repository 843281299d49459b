import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given

from conftest import FIGURE_EIGHT, HOPF, TREFOIL, braid_diagrams, marked_diagrams
from markedkh.cube import Cube, Vertex, enumerate_cube, resolve, self_crossing, trivial_path_exists
from markedkh.diagram import MarkingData
from markedkh.errors import CubeTooLarge

SMOOTH = {0: ((0, 1), (2, 3)), 1: ((0, 3), (1, 2)), None: ((0, 2), (1, 3))}


def circle_graph(d, v):
    """Edges of the diagram as nodes, joined through each crossing's smoothing."""
    g = nx.Graph()
    g.add_nodes_from(d.edges)
    for k, c in enumerate(d.pd):
        for s, t in SMOOTH[v.assignment[k]]:
            g.add_edge(c[s], c[t])
    return [sorted(cc) for cc in nx.connected_components(g)]


@given(marked_diagrams(max_length=7))
def test_circles_match_graph_oracle(dm):
    d, m = dm
    cube = enumerate_cube(d, m)
    for i in range(len(cube)):
        v = cube.vertex(i)
        want = sorted(circle_graph(d, v))
        st = resolve(d, m, v)
        assert sorted(map(list, st.circles)) == want
        assert int(cube.ncirc[i]) == len(want)
        odd = any(sum(m.parity(e) for e in c) % 2 for c in want)
        assert bool(cube.killed[i]) == odd == st.killed


@given(braid_diagrams(max_length=6))
def test_dropped_cube_matches_graph_oracle(d):
    for x in range(d.n):
        cube = enumerate_cube(d, MarkingData(), (x,))
        assert cube.dim == d.n - 1
        for i in range(len(cube)):
            v = cube.vertex(i)
            assert v.assignment[x] is None
            assert int(cube.ncirc[i]) == len(circle_graph(d, v))


def test_trefoil_extreme_states():
    cube = enumerate_cube(TREFOIL, MarkingData())
    assert {int(cube.ncirc[0]), int(cube.ncirc[-1])} == {2, 3}


@given(braid_diagrams(max_length=7))
def test_every_edge_merges_or_splits(d):
    cube = enumerate_cube(d, MarkingData())
    for i in range(len(cube)):
        for _, j in cube.neighbors_up(i):
            assert abs(int(cube.ncirc[i]) - int(cube.ncirc[j])) == 1


def test_vertex_indexing_round_trip():
    cube = enumerate_cube(FIGURE_EIGHT, MarkingData())
    for i in range(len(cube)):
        assert cube.index(cube.vertex(i)) == i
        assert cube.weight(i) == cube.vertex(i).weight
    assert len(list(cube)) == 16
    with pytest.raises(KeyError):
        cube.index(Vertex((None, 0, 0, 0)))


def test_bound_enforced():
    with pytest.raises(CubeTooLarge):
        Cube(FIGURE_EIGHT, MarkingData(), bound=3)
    with pytest.raises(ValueError):
        Cube(FIGURE_EIGHT, MarkingData(), dropped=(0, 1, 2))


def test_fixed_crossing_is_a_face():
    full = enumerate_cube(TREFOIL, MarkingData())
    for a in (0, 1):
        face = enumerate_cube(TREFOIL, MarkingData(), fixed={0: a})
        for i in range(len(face)):
            v = face.vertex(i)
            assert v.assignment[0] == a
            assert face.ncirc[i] == full.ncirc[full.index(v)]


def test_hopf_dropped_crossing_becomes_a_self_crossing():
    # smoothing the other crossing joins the two components into one curve
    for a in (0, 1):
        assert self_crossing(HOPF, Vertex((None, a)), 0)[0] != 0


@given(braid_diagrams(max_length=6))
def test_self_crossing_wings_cover_component(d):
    for x in range(d.n):
        cube = enumerate_cube(d, MarkingData(), (x,))
        for i in range(len(cube)):
            v = cube.vertex(i)
            sign, wa, wb = self_crossing(d, v, x)
            comps = circle_graph(d, v)
            same = any(d.pd[x][0] in c and d.pd[x][1] in c for c in comps)
            assert (sign != 0) == same
            if sign == 0:
                continue
            st = resolve(d, MarkingData(), v)
            comp = st.circles[st.circle_of(d.pd[x][0])]
            assert sorted(wa + wb) == sorted(comp)
            assert not set(wa) & set(wb)


def _monotone_oracle(cube, i, j):
    """Exhaustive search over shortest lattice paths through live vertices."""
    diff = [t for t in range(cube.dim) if (i ^ j) >> t & 1]
    for order in itertools.permutations(diff):
        cur, ok = i, True
        for t in order:
            cur ^= 1 << t
            if cube.killed[cur]:
                ok = False
                break
        if ok:
            return True
    return False


@given(marked_diagrams(max_length=5))
def test_trivial_paths_against_exhaustive_search(dm):
    d, m = dm
    cube = enumerate_cube(d, m)
    live = np.nonzero(~cube.killed)[0]
    for i in live[:6]:
        for j in live[:6]:
            found, path = trivial_path_exists(d, m, cube.vertex(int(i)), cube.vertex(int(j)), cube)
            assert found == _monotone_oracle(cube, int(i), int(j))
            if found:
                assert path[0] == cube.vertex(int(i)) and path[-1] == cube.vertex(int(j))
                assert len(path) == bin(int(i) ^ int(j)).count("1") + 1
                assert all(not cube.killed[cube.index(p)] for p in path)
