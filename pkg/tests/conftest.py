import json
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from markedkh.cli import corpus_files
from markedkh.diagram import Diagram, MarkingData, braid_closure, load_input

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance outcomes, criterion number -> (passed, detail); printed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

TREFOIL = braid_closure([1, 1, 1])
TREFOIL_MIRROR = braid_closure([-1, -1, -1])
HOPF = braid_closure([1, 1])
FIGURE_EIGHT = Diagram(((4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)))
# the trefoil with one crossing changed: a 3-crossing unknot
FLIPPED_TREFOIL = Diagram(((4, 2, 5, 1), (3, 6, 4, 1), (5, 2, 6, 3)))


def corpus():
    return {p.stem: load_input(p.read_text()) for p in corpus_files()}


@pytest.fixture(scope="session")
def corpus_inputs():
    return corpus()


def _touching_word(draw, strands, length):
    letters = st.integers(1, strands - 1).flatmap(lambda g: st.sampled_from([g, -g]))
    word = draw(st.lists(letters, min_size=length, max_size=length))
    return word


@st.composite
def braid_diagrams(draw, max_strands=4, max_length=8, alternating=False):
    """Closures of random braid words that use every generator (no free circles)."""
    strands = draw(st.integers(2, max_strands))
    length = draw(st.integers(strands - 1, max(max_length, strands - 1)))
    if alternating:
        # sigma_i with sign (-1)^i is alternating on any word
        gens = draw(st.lists(st.integers(1, strands - 1), min_size=length, max_size=length))
        word = [g if g % 2 else -g for g in gens]
    else:
        word = _touching_word(draw, strands, length)
    used = {abs(g) for g in word}
    missing = [g for g in range(1, strands) if g not in used]
    word = word + [g if (g % 2 or not alternating) else -g for g in missing]
    return braid_closure(word)


@st.composite
def markings(draw, d: Diagram, max_pairs=2):
    edges = list(d.edges)
    k = draw(st.integers(0, max_pairs))
    ends = draw(st.lists(st.sampled_from(edges), min_size=2 * k, max_size=2 * k))
    return MarkingData.from_edges(ends)


@st.composite
def marked_diagrams(draw, alternating=False, **kw):
    d = draw(braid_diagrams(alternating=alternating, **kw))
    return d, draw(markings(d))


def random_diagrams(seed, count, max_strands=4, max_length=10, alternating=False):
    """A reproducible list of (diagram, marking) pairs without hypothesis."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        s = int(rng.integers(2, max_strands + 1))
        n = int(rng.integers(s - 1, max_length + 1))
        gens = [int(rng.integers(1, s)) for _ in range(n)]
        gens += [g for g in range(1, s) if g not in gens]
        if alternating:
            word = [g if g % 2 else -g for g in gens]
        else:
            word = [g if rng.random() < 0.5 else -g for g in gens]
        d = braid_closure(word)
        k = int(rng.integers(0, 3))
        ends = [int(e) for e in rng.choice(list(d.edges), size=2 * k)] if k else []
        out.append((d, MarkingData.from_edges(ends)))
    return out


def load_json(path: Path):
    return json.loads(Path(path).read_text())
