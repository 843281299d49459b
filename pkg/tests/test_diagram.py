import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIGURE_EIGHT, FLIPPED_TREFOIL, HOPF, TREFOIL, braid_diagrams
from markedkh.diagram import (Diagram, LinkInput, MarkingData, braid_closure, crossing_signs,
                              dump_input, is_alternating, load_input, mirror, parse_diagram,
                              reduce_marking)
from markedkh.errors import EmptyDiagram, MalformedInput, NoUnderCrossing


def _perm_cycles(word, strands):
    """Number of cycles of the permutation a braid word induces: the component count."""
    perm = list(range(strands))
    for g in word:
        i = abs(g) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, cycles = set(), 0
    for s in range(strands):
        if s in seen:
            continue
        cycles += 1
        while s not in seen:
            seen.add(s)
            s = perm[s]
    return cycles


def test_trefoil_basics():
    assert TREFOIL.n == 3
    assert len(TREFOIL.components) == 1
    assert is_alternating(TREFOIL)
    assert set(crossing_signs(TREFOIL).values()) == {-1}


def test_mirror_flips_every_sign():
    for d in (TREFOIL, HOPF, FIGURE_EIGHT, FLIPPED_TREFOIL):
        assert mirror(d).signs == tuple(-s for s in d.signs)
        assert mirror(mirror(d)).signs == d.signs


def test_figure_eight_has_zero_writhe():
    assert sum(FIGURE_EIGHT.signs) == 0
    assert is_alternating(FIGURE_EIGHT)


def test_flipped_trefoil_is_not_alternating():
    assert not is_alternating(FLIPPED_TREFOIL)
    assert FLIPPED_TREFOIL.signs == (1, -1, -1)


def test_hopf_link_components():
    assert len(HOPF.components) == 2
    assert HOPF.strands(0)[0] != HOPF.strands(0)[1]


@pytest.mark.parametrize("pd,exc", [
    ((), EmptyDiagram),
    (((1, 2, 3),), MalformedInput),
    (((1, 1, 2, 2), (2, 3, 3, 1)), MalformedInput),
    (((1, 3, 2, 4), (2, 1, 3, 4)), MalformedInput),  # not planar
    (((1, 2, 1, 2), (3, 4, 3, 5)), MalformedInput),
])
def test_malformed(pd, exc):
    with pytest.raises(exc):
        Diagram(pd)


def test_crossing_free_circles():
    d = Diagram((), 2)
    assert d.n == 0 and len(d.components) == 2
    assert d.edges == (1, 2)


def test_json_round_trip():
    li = LinkInput(FIGURE_EIGHT, MarkingData.from_edges([2, 7]), 3, "f8")
    back = load_input(dump_input(li))
    assert back == li
    assert parse_diagram(json.dumps({"pd": [list(c) for c in TREFOIL.pd]})) == TREFOIL


@pytest.mark.parametrize("text", ["not json", "[1, 2]", '{"pd": [[1, "a", 2, 3]]}',
                                  '{"pd": [[1, 4, 2, 5], [5, 2, 6, 3], [3, 6, 4, 1]], "omega_edges": [9, 1]}',
                                  '{"pd": [[1, 4, 2, 5], [5, 2, 6, 3], [3, 6, 4, 1]], "omega_edges": [1]}'])
def test_bad_input_text(text):
    with pytest.raises(MalformedInput):
        load_input(text)


def test_marking_parity_and_reduction():
    m = MarkingData.from_edges([1, 1, 2, 4])
    assert m.odd_edges == {2, 4}
    r = reduce_marking(TREFOIL, m)
    assert r.marked_crossings == ()  # both endpoints on the single component
    hop = reduce_marking(HOPF, MarkingData.from_edges([HOPF.components[0][0], HOPF.components[1][0]]))
    assert len(hop.marked_crossings) == 2
    for k in hop.marked_crossings:
        assert HOPF.component_of[HOPF.pd[k][0]] in (0, 1)


def test_odd_component_without_under_crossing():
    # sigma sigma^-1 closes to an R2 pair: one circle lies over the other twice
    d = braid_closure([1, -1])
    under = {d.component_of[c[0]] for c in d.pd}
    assert len(d.components) == 2 and len(under) == 1
    top = 1 - under.pop()
    ends = [d.components[0][0], d.components[1][0]]
    with pytest.raises(NoUnderCrossing, match=f"component {top}"):
        reduce_marking(d, MarkingData.from_edges(ends))


@given(st.data())
def test_braid_closure_shape(data):
    strands = data.draw(st.integers(2, 5))
    word = data.draw(st.lists(st.integers(1, strands - 1).flatmap(
        lambda g: st.sampled_from([g, -g])), min_size=strands - 1, max_size=10))
    word += [g for g in range(1, strands) if g not in {abs(x) for x in word}]
    d = braid_closure(word)
    assert d.n == len(word)
    assert len(d.components) == _perm_cycles(word, strands)
    # closed braids orient every strand the same way: letter sign fixes crossing sign
    assert sorted(d.signs) == sorted(-1 if g > 0 else 1 for g in word)
    assert sum(d.signs) == -sum(1 if g > 0 else -1 for g in word)


@given(braid_diagrams(alternating=True))
def test_alternating_braids_are_alternating(d):
    assert is_alternating(d)


@given(braid_diagrams())
def test_edge_numbering_follows_orientation(d):
    for comp in d.components:
        for a, b in zip(comp, comp[1:] + comp[:1]):
            assert d.successor[a] == b
    # each edge is entered once and left once
    for e in d.pd_edges:
        k, s = d.head(e)
        assert s in (0, d.over_in_slot(k))
