import numpy as np
import pytest
from hypothesis import given

from conftest import FIGURE_EIGHT, FLIPPED_TREFOIL, HOPF, TREFOIL, braid_diagrams, marked_diagrams
from markedkh.diagram import Diagram, MarkingData, braid_closure, is_alternating
from markedkh.dropped import (TYPE2, adjacent_pairs, assemble_double_dropped, assemble_dropped,
                              check_adjacent, check_ladder, classify_edges, cone_check,
                              gamma_beta, ladder, split_DEF, structural_report)
from markedkh.errors import BasepointOnOmega, NotAdjacent, SameSign, SplitFailure
from markedkh.khovanov import assemble, assemble_reduced

FLIPPED_OMEGA = MarkingData.from_edges([1, 2])


def _full_check(d, m, x, reduced=False):
    L = ladder(d, m, x, reduced=reduced)
    check_ladder(L)
    s = split_DEF(L)
    return s, structural_report(s), gamma_beta(s), cone_check(s)


@pytest.mark.parametrize("d", [TREFOIL, HOPF, FIGURE_EIGHT], ids=["trefoil", "hopf", "fig8"])
def test_alternating_corpus_every_crossing(d):
    full = assemble(d).total_rank()
    for x in range(d.n):
        s, rep, gb, cc = _full_check(d, MarkingData(), x)
        assert rep["d_EF"] == rep["d_FD"] == rep["d_DE"] == rep["alpha"] == 0
        assert rep["d_F_consistent"] and rep["d_D_consistent"] and rep["d_E_consistent"]
        assert gb.nnz == 0
        assert cc.ok
        assert assemble_dropped(d, MarkingData(), x).total_rank() == full


@given(marked_diagrams(alternating=True, max_strands=3, max_length=6))
def test_alternating_random(dm):
    d, m = dm
    full = assemble(d, m).total_rank()
    for x in range(d.n):
        try:
            s, rep, gb, cc = _full_check(d, m, x)
        except BasepointOnOmega:
            continue
        assert rep["alpha"] == 0 and gb.nnz == 0 and cc.ok
        assert cc.rank_small == assemble_dropped(d, m, x).total_rank() == full


@given(marked_diagrams(alternating=True, max_strands=3, max_length=6))
def test_alternating_random_reduced(dm):
    d, m = dm
    even = [e for e in d.edges if not m.parity(e)]
    if not even:
        return
    full = assemble_reduced(d, m).total_rank()
    for x in range(d.n):
        s, rep, gb, cc = _full_check(d, m, x, reduced=True)
        assert rep["alpha"] == 0 and gb.nnz == 0 and cc.ok
        assert assemble_dropped(d, m, x, reduced=True).total_rank() == full


@given(marked_diagrams(max_length=7))
def test_dropped_complexes_square_to_zero(dm):
    d, m = dm
    for x in range(d.n):
        dc = assemble_dropped(d, m, x)  # raises if d^2 != 0
        assert sum(dc.edge_types.values()) == dc.complex.cube.dim * 2 ** max(dc.complex.cube.dim - 1, 0)
    for x1, x2 in adjacent_pairs(d, m):
        assemble_double_dropped(d, m, x1, x2)


@given(braid_diagrams(max_length=7))
def test_type2_edges_keep_circle_count(d):
    for x in range(d.n):
        cube = assemble_dropped(d, MarkingData(), x).complex.cube
        for src, bit, typ in classify_edges(cube):
            same = cube.ncirc[src] == cube.ncirc[src | (1 << bit)]
            assert (typ == TYPE2) == bool(same)


def test_flipped_trefoil_with_omega():
    # rank 6 for the marked 3-crossing unknot; every drop keeps the rank and gamma beta = 0
    assert assemble(FLIPPED_TREFOIL, FLIPPED_OMEGA).total_rank() == 6
    for x in range(3):
        s, rep, gb, cc = _full_check(FLIPPED_TREFOIL, FLIPPED_OMEGA, x)
        assert gb.nnz == 0 and cc.ok


def test_flipped_trefoil_without_omega_has_gamma_beta():
    s, rep, gb, cc = _full_check(FLIPPED_TREFOIL, MarkingData(), 0)
    assert gb.nnz > 0
    assert cc.ok  # the cone identity itself still holds
    assert assemble_dropped(FLIPPED_TREFOIL, MarkingData(), 0).total_rank() == 6
    assert assemble(FLIPPED_TREFOIL).total_rank() == 2


def test_ladder_can_fail_off_alternating():
    # two circles joined by an R2 pair, omega running between them
    d = braid_closure([-1, 1])
    assert not is_alternating(d)
    with pytest.raises(SplitFailure, match="does not commute"):
        check_ladder(ladder(d, MarkingData.from_edges([1, 3]), 0))


def test_adjacency_errors():
    with pytest.raises(NotAdjacent):
        check_adjacent(TREFOIL, MarkingData(), 0, 0)
    with pytest.raises(SameSign):
        check_adjacent(TREFOIL, MarkingData(), 0, 1)
    d = braid_closure([1, 2, -1, 2])
    pairs = adjacent_pairs(d, MarkingData())
    for x1, x2 in pairs:
        shared = check_adjacent(d, MarkingData(), x1, x2)
        with pytest.raises(NotAdjacent):
            check_adjacent(d, MarkingData.from_edges([shared[0], shared[1]]), x1, x2)


def test_alternating_bigons_have_equal_signs():
    # the bigons of an alternating diagram are twists, so no opposite-sign pair exists
    for x1 in range(4):
        for x2 in range(x1 + 1, 4):
            if len(set(FIGURE_EIGHT.pd[x1]) & set(FIGURE_EIGHT.pd[x2])) == 2:
                assert FIGURE_EIGHT.signs[x1] == FIGURE_EIGHT.signs[x2]
    assert adjacent_pairs(FIGURE_EIGHT, MarkingData()) == []


def test_twist_and_kink_bigons():
    assert adjacent_pairs(TREFOIL, MarkingData()) == []
    # two consecutive kinks share two edges but no bigon region
    kinks = Diagram(((4, 1, 1, 2), (2, 4, 3, 3)))
    assert kinks.signs[0] != kinks.signs[1]
    assert len(set(kinks.pd[0]) & set(kinks.pd[1])) == 2
    with pytest.raises(NotAdjacent, match="bigon"):
        check_adjacent(kinks, MarkingData(), 0, 1)


@given(marked_diagrams(max_strands=3, max_length=7))
def test_double_drop_keeps_rank(dm):
    d, m = dm
    full = assemble(d, m).total_rank()
    for x1, x2 in adjacent_pairs(d, m):
        assert d.signs[x1] != d.signs[x2]
        assert assemble_double_dropped(d, m, x1, x2).total_rank() == full


def test_r2_unlink_double_drop():
    d = braid_closure([1, -1])
    assert adjacent_pairs(d, MarkingData()) == [(0, 1)]
    assert assemble_double_dropped(d, MarkingData(), 0, 1).total_rank() == 4


def test_homotopy_identity_on_random_instances():
    rng = np.random.default_rng(11)
    n = 0
    while n < 25:
        s = int(rng.integers(2, 4))
        gens = [int(rng.integers(1, s)) for _ in range(int(rng.integers(s, 7)))]
        gens += list(range(1, s))
        d = braid_closure([g if g % 2 else -g for g in gens])
        for x in range(d.n):
            cc = cone_check(split_DEF(ladder(d, MarkingData(), x)))
            assert cc.homotopy and cc.pi_i_identity and cc.i_chain and cc.pi_chain
            n += 1
