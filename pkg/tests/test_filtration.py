import numpy as np
import pytest
from hypothesis import given

from conftest import FIGURE_EIGHT, FLIPPED_TREFOIL, TREFOIL, marked_diagrams, random_diagrams
from markedkh import filtration as F
from markedkh.cube import enumerate_cube
from markedkh.diagram import MarkingData, braid_closure, is_alternating
from markedkh.dropped import adjacent_pairs, assemble_double_dropped, assemble_dropped
from markedkh.errors import NoDroppedCrossing, NonTrivialVertex, OrderViolation
from markedkh.khovanov import assemble
from test_cube import _monotone_oracle


@given(marked_diagrams(max_length=8))
def test_full_complex_is_graded(dm):
    d, m = dm
    cx = assemble(d, m)
    ctx = F.context(d, m)
    rep = F.check_orders(cx, ctx)
    assert rep.ok
    if rep.entries:
        assert rep.min_dq2 == rep.max_dq2 == 0
        assert rep.dh2_values == [2]


@given(marked_diagrams(max_length=7))
def test_q_without_drops_is_shifted_j(dm):
    d, m = dm
    cx = assemble(d, m)
    ctx = F.context(d, m)
    if ctx.origin < 0:
        return
    assert np.array_equal(F.q2_grading(ctx, cx), 2 * cx.j - 2 * d.n)
    assert np.array_equal(F.h2_grading(ctx, cx), 2 * cx.h - 2 * d.n + 2 * ctx.n_minus)


def test_h_counts_zero_smoothings():
    cx = assemble(TREFOIL)
    ctx = F.context(TREFOIL)
    # minus the number of 0-smoothings, shifted by n_minus = 3
    assert sorted(set(F.h2_grading(ctx, cx) // 2)) == [0, 1, 2, 3]


@given(marked_diagrams(alternating=True, max_strands=3, max_length=7))
def test_single_drop_orders_alternating(dm):
    d, m = dm
    if not F.is_good_proxy(d, m):
        return
    for x in range(d.n):
        try:
            ctx = F.context(d, m, (x,))
        except NonTrivialVertex:
            continue
        rep = F.check_orders(assemble_dropped(d, m, x).complex, ctx)
        assert rep.ok and (rep.min_dq2 is None or rep.min_dq2 >= 0)


@given(marked_diagrams(max_strands=3, max_length=7))
def test_double_drop_orders(dm):
    d, m = dm
    if not F.is_good_proxy(d, m):
        return
    for x1, x2 in adjacent_pairs(d, m):
        try:
            ctx = F.context(d, m, (x1, x2))
        except NonTrivialVertex:
            continue
        rep = F.check_orders(assemble_double_dropped(d, m, x1, x2).complex, ctx)
        assert rep.ok


@given(marked_diagrams(max_length=7))
def test_sigma_is_path_independent(dm):
    d, m = dm
    for x in range(d.n):
        try:
            ctx = F.context(d, m, (x,))
        except NonTrivialVertex:
            continue
        F.check_sigma_additivity(ctx)
        # sum over any monotone path equals the potential difference
        V = len(ctx.cube)
        path = [0]
        for t in range(ctx.cube.dim):
            path.append(path[-1] | (1 << t))
        assert F.sigma_along(ctx, path) == F.sigma(ctx, 0, V - 1)


@given(marked_diagrams(max_strands=3, max_length=7))
def test_sigma_two_drops(dm):
    d, m = dm
    for pair in adjacent_pairs(d, m):
        try:
            ctx = F.context(d, m, pair)
        except NonTrivialVertex:
            continue
        F.check_sigma_additivity(ctx)


def test_sigma_values():
    ctx = F.context(FIGURE_EIGHT, MarkingData(), (0,))
    seen = set()
    for a in range(len(ctx.cube)):
        for t in range(ctx.cube.dim):
            if not (a >> t) & 1:
                seen.add(F.sigma_edge(ctx, a, a | (1 << t)))
    assert seen <= {-2, 0, 2} and 0 in seen
    with pytest.raises(ValueError):
        F.sigma_edge(ctx, 0, 3)
    with pytest.raises(NoDroppedCrossing):
        F.edge_cobordism(F.context(TREFOIL), 0, 0)


@given(marked_diagrams(max_length=7))
def test_pi_values_within_table(dm):
    d, m = dm
    for x in range(d.n):
        try:
            ctx = F.context(d, m, (x,))
        except NonTrivialVertex:
            continue
        seen = F.check_pi_table(ctx)
        for cls, vals in seen.items():
            assert set(vals) <= F.PI_TABLE[cls]


def test_pi_zero_without_drops():
    ctx = F.context(TREFOIL, MarkingData.from_edges([1, 4]))
    live = np.nonzero(~ctx.cube.killed)[0]
    assert all(F.pi_vertex(ctx, int(a)) == 0 for a in live)


def test_pi_realized_values_one_drop():
    # over many small diagrams, both values of each one-drop column turn up
    seen = {}
    for d, m in random_diagrams(5, 60, max_strands=3, max_length=6):
        for x in range(d.n):
            try:
                ctx = F.context(d, m, (x,))
            except NonTrivialVertex:
                continue
            for cls, vals in F.check_pi_table(ctx).items():
                seen.setdefault(cls, set()).update(vals)
    assert seen[(-1,)] == {0, 2}
    assert seen[(1,)] == {-2, 0}


def test_s_omega_rejects_mixed_parity():
    hit = False
    for d, m in random_diagrams(9, 40, max_strands=3, max_length=6):
        for x in range(d.n):
            cube = enumerate_cube(d, m, (x,))
            for i in range(len(cube)):
                v = cube.vertex(i)
                try:
                    F.s_omega(d, m, v, x)
                except NonTrivialVertex:
                    assert cube.killed[i]
                    hit = True
    assert hit


@given(marked_diagrams(max_length=6))
def test_good_proxy_against_exhaustive_paths(dm):
    d, m = dm
    cube = enumerate_cube(d, m)
    live = [int(a) for a in np.nonzero(~cube.killed)[0]]
    want = all(_monotone_oracle(cube, a, b) for a in live for b in live)
    assert F.is_good_proxy(d, m) == want


def test_flipped_trefoil_orders():
    m = MarkingData.from_edges([1, 2])
    assert not is_alternating(FLIPPED_TREFOIL)
    rep = F.check_orders(assemble(FLIPPED_TREFOIL, m), F.context(FLIPPED_TREFOIL, m))
    assert rep.ok


def test_order_violation_raised():
    d = braid_closure([1, 1, 1])
    cx = assemble(d)
    ctx = F.context(d)
    ctx.W[:] = 0
    ctx.pi[:] = np.arange(len(ctx.pi)) * 2  # a fake pi that lowers q along edges
    with pytest.raises(OrderViolation):
        F.check_orders(cx, ctx)
    assert not F.check_orders(cx, ctx, raise_on_violation=False).ok
