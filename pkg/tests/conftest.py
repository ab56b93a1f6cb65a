import sys
import csv
import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from vslice import data_path
from vslice.diagram import GaussDiagram, parse_gauss_code
from vslice.tabulator import load_table

TEST_DATA = Path(__file__).parent / "data"


def random_diagram(rng: random.Random, n: int) -> GaussDiagram:
    """Uniformly shuffled single-circle diagram with n chords and random signs."""
    eps = [(l, k) for l in range(1, n + 1) for k in "OU"]
    rng.shuffle(eps)
    return GaussDiagram([eps], {l: rng.choice((1, -1)) for l in range(1, n + 1)})


@st.composite
def diagrams(draw, min_n=0, max_n=6):
    n = draw(st.integers(min_n, max_n))
    eps = draw(st.permutations([(l, k) for l in range(1, n + 1) for k in "OU"]))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n))
    return GaussDiagram([list(eps)], dict(zip(range(1, n + 1), signs)))


@pytest.fixture(scope="session")
def corpus():
    """The bundled table of 2-4 crossing classes as (name, diagram) pairs."""
    return load_table(data_path("knots_le4.tsv"))


@pytest.fixture(scope="session")
def corpus_by_name(corpus):
    return dict(corpus)


@pytest.fixture(scope="session")
def reference_genus():
    """name -> (theta, gs_low, gs_high) from the published small-knot listing."""
    out = {}
    with open(TEST_DATA / "reference_genus.tsv", encoding="utf-8") as fh:
        rows = csv.DictReader((l for l in fh if not l.startswith("#")), delimiter="\t")
        for r in rows:
            lo, _, hi = r["gs"].partition("-")
            out[r["name"]] = (int(r["theta"]), int(lo), int(hi or lo))
    return out


@pytest.fixture(scope="session")
def identified():
    """Published name -> local class name, for the classes pinned by a unique property."""
    out = {}
    for line in data_path("identified.tsv").read_text().splitlines():
        if line and not line.startswith("#"):
            a, b = line.split("\t")
            out[a] = b
    return out


TREFOIL = "O1+U2+O3+U1+O2+U3+"
FIGURE_EIGHT = "O1+U2+O3-U4-O2+U1+O4-U3-"
VIRTUAL_TREFOIL = "O1+O2+U1+U2+"


@pytest.fixture
def trefoil():
    return parse_gauss_code(TREFOIL)


def random_move(D: GaussDiagram, rng: random.Random):
    """A random legal Reidemeister move on a knot diagram, as a MoveSpec."""
    from vslice.moves import MoveSpec, r1_candidates, r2_candidates, r3_candidates

    L = len(D.word())
    kinds = ["r1+", "r2+"]
    r1, r2, r3 = r1_candidates(D), r2_candidates(D), r3_candidates(D)
    if r1:
        kinds.append("r1-")
    if r2:
        kinds.append("r2-")
    if r3:
        kinds += ["r3", "r3", "r3"]
    kind = rng.choice(kinds)
    if kind == "r1-":
        return MoveSpec("r1-", (rng.choice(r1),))
    if kind == "r2-":
        return MoveSpec("r2-", rng.choice(r2))
    if kind == "r3":
        x, y, z, v = rng.choice(r3)
        return MoveSpec("r3", (x, y, z), variant=v)
    g = (0, rng.randint(0, L))
    sign = rng.choice((1, -1))
    if kind == "r1+":
        return MoveSpec("r1+", gaps=(g,), sign=sign, over_first=rng.random() < 0.5)
    return MoveSpec("r2+", gaps=(g, (0, rng.randint(0, L))), sign=sign,
                    parallel=rng.random() < 0.5)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines after the test report."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
