from contextlib import contextmanager
import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import marked_diagrams
from markedkh import _pykernels as pure
from markedkh import gf2, kernels
from markedkh.cube import enumerate_cube
from markedkh.khovanov import assemble, assemble_reduced

compiled = pytest.importorskip("markedkh._ckernels")


@contextmanager
def pure_backend():
    names = ("resolve_cube", "map_pairs", "reduce_columns")
    saved = {n: getattr(kernels, n) for n in names}
    for n in names:
        setattr(kernels, n, getattr(pure, n))
    try:
        yield
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def test_compiled_backend_selected_by_default():
    assert kernels.BACKEND == "compiled"


@pytest.mark.parametrize("flag,want", [("1", "python"), ("", "compiled")])
def test_environment_switch(flag, want):
    env = {**os.environ, "MARKEDKH_PURE": flag}
    out = subprocess.run([sys.executable, "-c", "from markedkh import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == want


@given(marked_diagrams(max_length=7), st.integers(0, 2))
def test_resolve_cube_agrees(dm, ndrop):
    d, m = dm
    cube = enumerate_cube(d, m)
    res = cube.slots[ndrop:]
    drp = cube.slots[:ndrop]
    a = pure.resolve_cube(res, drp, cube.n_edges)
    b = compiled.resolve_cube(res, drp, cube.n_edges)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@given(marked_diagrams(max_length=6))
def test_complexes_agree(dm):
    d, m = dm
    fast = assemble(d, m)
    even = [e for e in d.edges if not m.parity(e)]
    fast_red = assemble_reduced(d, m, even[0]) if even else None
    with pure_backend():
        slow = assemble(d, m)
        slow_red = assemble_reduced(d, m, even[0]) if even else None
    assert (fast.d != slow.d).nnz == 0
    assert np.array_equal(fast.h, slow.h) and np.array_equal(fast.j, slow.j)
    if even:
        assert (fast_red.d != slow_red.d).nnz == 0


@given(st.integers(0, 40), st.integers(0, 40), st.floats(0.0, 0.5), st.integers(0, 2**32 - 1))
def test_reduce_columns_agrees(rows, cols, density, seed):
    rng = np.random.default_rng(seed)
    a = (rng.random((rows, cols)) < density).astype(np.int64)
    csc = sp.csc_matrix(a)
    csc.sort_indices()
    ip, ix = csc.indptr.astype(np.int64), csc.indices.astype(np.int64)
    skip = (rng.random(cols) < 0.2).astype(np.uint8)
    for s in (None, skip):
        ra, pa = pure.reduce_columns(ip, ix, rows, s)
        rb, pb = compiled.reduce_columns(ip, ix, rows, s)
        assert ra == rb
        assert sorted(np.asarray(pa).tolist()) == sorted(np.asarray(pb).tolist())
    assert gf2.rank(sp.csr_matrix(a)) == pure.reduce_columns(ip, ix, rows, None)[0]
