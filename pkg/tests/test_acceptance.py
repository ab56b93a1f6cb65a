"""Acceptance checks, one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or ``python3 tests/test_acceptance.py``.

Criteria that refer to knots by their published table names need that
table.  Point VSLICE_NAMED_TABLE at a ``name<TAB>gauss-code`` file using the
published names (2.1, 3.1 ... 4.108); VSLICE_NAMED_SLICE_LIST optionally
replaces the bundled slice list.  Without the table those lines print FAIL
and the pytest outcome is an explicit xfail.  The name-free lines run on the
bundled class table and always gate.
"""
import os
import random
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

from conftest import TEST_DATA, random_diagram, random_move
from vslice import bundled_movies, data_path
from vslice.cli import main as cli_main
from vslice.cobordism import MovieError, Movie, chords_intersect, crossed_saddle, verify_movie
from vslice.diagram import SYMMETRY_GROUP, apply_symmetry, orbit_representative, parse_gauss_code
from vslice.graded import concordance_obstruction_bound, graded_genus, graded_matrix, integer_rank
from vslice.invariants import dkk_slice_genus, f_polynomial, is_flat_planar
from vslice.moves import apply_move
from vslice.tabulator import TabulateConfig, load_code_list, load_table, tabulate

RESULTS: list[str] = []

SLICE_NAMES = {"4.8", "4.55", "4.56", "4.58", "4.59", "4.71", "4.72", "4.75",
               "4.76", "4.77", "4.90", "4.98", "4.99"}
ONE_SIGNED_EXAMPLES = ("4.1", "4.37")


def report(criterion: str, ok: bool | None, detail: str) -> None:
    word = {True: "PASS", False: "FAIL", None: "NOT RUN"}[ok]
    line = f"criterion {criterion}: {word}  {detail}"
    RESULTS.append(line)
    print(line)


def _reference():
    out = {}
    for line in (TEST_DATA / "reference_genus.tsv").read_text().splitlines()[3:]:
        name, theta, gs = line.split("\t")
        lo, _, hi = gs.partition("-")
        out[name] = (int(theta), int(lo), int(hi or lo))
    return out


REFERENCE = _reference()
BUILTIN = {4: str(data_path("slice4.tsv"))}


def _named_table():
    path = os.environ.get("VSLICE_NAMED_TABLE")
    if not path:
        return None
    return load_table(path)


def _named_slice_lists():
    path = os.environ.get("VSLICE_NAMED_SLICE_LIST")
    return {4: path} if path else BUILTIN


def _unavailable(criterion: str):
    report(criterion, False, "published-name table unavailable (set VSLICE_NAMED_TABLE)")
    pytest.xfail("published-name table unavailable")


@pytest.fixture(scope="module")
def rows(corpus):
    return tabulate(corpus, TabulateConfig(slice_lists=BUILTIN, jobs=2))


# -- 1: graded genus by name ---------------------------------------------------------
def test_criterion_1_by_name(tmp_path):
    table = _named_table()
    if table is None:
        _unavailable("1")
    path = Path(os.environ["VSLICE_NAMED_TABLE"])
    out_file = tmp_path / "theta.tsv"
    start = time.perf_counter()
    with open(out_file, "w") as fh:
        code = cli_main(["graded-genus", str(path)], fh)
    took = time.perf_counter() - start
    got = dict(line.split("\t") for line in out_file.read_text().splitlines())
    wrong = [n for n in REFERENCE if n not in got or int(got[n]) != REFERENCE[n][0]]
    ok = code == 0 and not wrong and took < 10
    report("1", ok, f"{len(REFERENCE) - len(wrong)}/{len(REFERENCE)} theta values match, "
                    f"{took:.1f}s" + (f", mismatched {wrong[:10]}" if wrong else ""))
    assert ok


def test_criterion_1_name_free(corpus, identified):
    start = time.perf_counter()
    thetas = {name: graded_genus(D) for name, D in corpus}
    took = time.perf_counter() - start
    want = Counter((n.split(".")[0], t) for n, (t, _, _) in REFERENCE.items())
    have = Counter((str(D.n), thetas[name]) for name, D in corpus)
    named = all(thetas[local] == REFERENCE[pub][0] for pub, local in identified.items())
    ok = want == have and named and took < 10
    report("1 (name-free)", ok, f"theta multiset per crossing number equals the published one; "
                                f"{len(identified)} identified classes match; {took:.1f}s")
    assert ok


# -- 2: counts of theta = 0 ----------------------------------------------------------
def test_criterion_2(corpus):
    per_n = {}
    for _, D in corpus:
        tot, zero = per_n.get(D.n, (0, 0))
        per_n[D.n] = (tot + 1, zero + (graded_genus(D) == 0))
    ok = per_n.get(3) == (7, 1) and per_n.get(4) == (108, 15)
    report("2", ok, f"n=3: {per_n.get(3, (0, 0))[1]} of {per_n.get(3, (0, 0))[0]}, "
                    f"n=4: {per_n.get(4, (0, 0))[1]} of {per_n.get(4, (0, 0))[0]} with theta=0")
    assert ok


# -- 3: slice detection --------------------------------------------------------------
def test_criterion_3_by_name():
    table = _named_table()
    if table is None:
        _unavailable("3")
    got = {r.name: r for r in tabulate(table, TabulateConfig(slice_lists=_named_slice_lists()))}
    four = {n: r for n, r in got.items() if n.startswith("4.")}
    sliced = {n for n, r in four.items() if r.status == "SLICE"}
    r12 = four.get("4.12")
    interval_ok = r12 is not None and (r12.status, r12.lower, r12.upper) == ("INTERVAL", 0, 1)
    rest = [n for n, r in four.items() if n not in SLICE_NAMES | {"4.12"} and not (r.lower or 0) >= 1]
    ok = sliced == SLICE_NAMES and interval_ok and not rest and len(four) == 108
    report("3", ok, f"SLICE {sorted(sliced)}; 4.12 interval ok: {interval_ok}; "
                    f"others without lower>=1: {rest}")
    assert ok


def test_criterion_3_name_free(rows, identified):
    four = [r for r in rows if r.n == 4]
    sliced = [r for r in four if r.status == "SLICE"]
    inter = [r for r in four if r.status == "INTERVAL"]
    others_ok = all(r.lower >= 1 for r in four if r.status not in ("SLICE", "INTERVAL"))
    ok = (len(sliced) == 13 and [(r.name, r.lower, r.upper) for r in inter] == [(identified["4.12"], 0, 1)]
          and others_ok and all(r.status != "UNKNOWN" for r in rows))
    report("3 (name-free)", ok, f"{len(sliced)} four-crossing classes SLICE; INTERVAL "
                                f"{[(r.name, r.lower, r.upper) for r in inter]} (published 4.12); "
                                f"all other lower >= 1: {others_ok}")
    assert ok


# -- 4: slice-genus intervals ----------------------------------------------------------
def _one_signed_exact(D, r) -> bool:
    g = dkk_slice_genus(D)
    return r.lower == r.upper == g


def test_criterion_4_by_name():
    table = _named_table()
    if table is None:
        _unavailable("4")
    diagrams = dict(table)
    got = {r.name: r for r in tabulate(table, TabulateConfig(slice_lists=_named_slice_lists()))}
    bad = []
    for name, (_, lo, hi) in REFERENCE.items():
        r = got.get(name)
        if r is None or r.lower is None:
            bad.append(name)
        elif lo == hi and not r.lower <= lo <= r.upper:
            bad.append(name)
        elif diagrams[name].is_one_signed() and not (_one_signed_exact(diagrams[name], r) and r.lower == lo):
            bad.append(name)
    examples = all(diagrams[n].is_one_signed() for n in ONE_SIGNED_EXAMPLES if n in diagrams)
    ok = not bad and examples
    report("4", ok, f"intervals contain the listed g_s for all but {bad}; "
                    f"one-signed examples {ONE_SIGNED_EXAMPLES} one-signed: {examples}")
    assert ok


def _max_matching(left, right, edge) -> int:
    match = {}

    def augment(u, seen):
        for v in right:
            if v not in seen and edge(u, v):
                seen.add(v)
                if v not in match or augment(match[v], seen):
                    match[v] = u
                    return True
        return False

    return sum(augment(u, set()) for u in left)


def test_criterion_4_name_free(rows, corpus_by_name, identified):
    by_name = {r.name: r for r in rows}

    def fits(local, pub):
        r, (theta, lo, hi) = by_name[local], REFERENCE[pub]
        return (corpus_by_name[local].n == int(pub.split(".")[0]) and r.theta == theta
                and r.lower <= lo and hi <= r.upper)

    matched = _max_matching(list(by_name), list(REFERENCE), fits)
    pinned = all(fits(local, pub) for pub, local in identified.items())
    one_signed = [(n, r) for n, r in by_name.items() if corpus_by_name[n].is_one_signed()]
    exact = all(_one_signed_exact(corpus_by_name[n], r) for n, r in one_signed)
    ok = matched == len(REFERENCE) == len(rows) and pinned and exact
    report("4 (name-free)", ok, f"perfect matching classes -> published rows with equal theta and "
                                f"interval containing g_s: {matched}/{len(REFERENCE)}; identified "
                                f"classes fit: {pinned}; {len(one_signed)} one-signed classes exact: {exact}")
    assert ok


# -- 5: property suite ------------------------------------------------------------------
def test_criterion_5(corpus):
    from test_invariants import oracle_f

    rng = random.Random(5)
    failures = []
    for _ in range(1000):
        T = graded_matrix(random_diagram(rng, rng.randint(0, 6)))
        if not T.is_skew() or any(T.beta[i][i] for i in range(T.size)):
            failures.append("skew")
        if integer_rank(T.beta) % 2:
            failures.append("even rank")
    moves = 0
    start = [D for _, D in corpus]
    while moves < 500:
        D = rng.choice(start)
        theta = graded_genus(D)
        D = apply_move(D, random_move(D, rng))
        moves += 1
        if graded_genus(D) != theta:
            failures.append("theta under moves")
    saddles = 0
    for name, D in corpus:
        theta = graded_genus(D)
        if any(graded_genus(D.rotated(k)) != theta for k in range(2 * D.n)):
            failures.append(f"rotation {name}")
        if any(graded_genus(apply_symmetry(D, g)) != theta for g in SYMMETRY_GROUP):
            failures.append(f"symmetry {name}")
        T = graded_matrix(D)
        if T.is_zero() != is_flat_planar(D):
            failures.append(f"planar {name}")
        if D.is_one_signed() and not is_flat_planar(D) and theta == 0:
            failures.append(f"one-signed {name}")
        if f_polynomial(D).terms != oracle_f(D.code()):
            failures.append(f"f oracle {name}")
        if concordance_obstruction_bound(T, T) != 0:
            failures.append(f"self bound {name}")
        for i, x in enumerate(D.labels):
            for y in D.labels[i + 1:]:
                if chords_intersect(D, x, y):
                    E = crossed_saddle(D, x, y)
                    saddles += 1
                    if not (E.is_knot() and E.n == D.n - 2):
                        failures.append(f"crossed saddle {name}")
    ok = not failures
    report("5", ok, f"1000 random matrices, 500 random moves, {len(corpus)} corpus diagrams, "
                    f"{saddles} crossed saddles; failures: {failures[:5]}")
    assert ok


# -- 6: movies ----------------------------------------------------------------------------
def test_criterion_6(corpus):
    from test_cobordism import _corruptions

    library = bundled_movies()
    slice_names = set(load_code_list(data_path("slice4.tsv")).values())
    by_orbit = {orbit_representative(D): (name, D) for name, D in corpus}
    covered0, covered1 = set(), set()
    for code, m in library.items():
        cert = verify_movie(m)
        name, D = by_orbit[orbit_representative(parse_gauss_code(code))]
        if cert.slice and name in slice_names:
            covered0.add(name)
        if cert.unknot_terminal and cert.genus == 1 and D.n == 3:
            covered1.add(name)
    three = {name for name, D in corpus if D.n == 3}
    rejected = total = 0
    for m in library.values():
        for step, ev in enumerate(m.events, 1):
            for bad in _corruptions(ev):
                events = list(m.events)
                events[step - 1] = bad
                total += 1
                try:
                    verify_movie(Movie(m.code, events))
                except MovieError as exc:
                    rejected += exc.step == step
    ok = covered0 == slice_names and covered1 == three and rejected == total
    report("6", ok, f"genus-0 movies verify for {len(covered0)}/13 slice classes (includes 4.71), "
                    f"genus-1 movies for {len(covered1)}/7 three-crossing classes (includes 3.1); "
                    f"{rejected}/{total} corrupted events rejected at their step")
    assert ok


# -- 7: six-crossing scale (non-gating) --------------------------------------------------
def test_criterion_7():
    path = os.environ.get("VSLICE_SIX_CROSSING_TABLE")
    if not path:
        report("7", None, "six-crossing table unavailable (non-gating; set VSLICE_SIX_CROSSING_TABLE)")
        pytest.skip("six-crossing table unavailable")
    from vslice.tabulator import compare_with_reference, summarize

    counts = summarize(tabulate(load_table(path), TabulateConfig(slice_lists=BUILTIN, jobs=os.cpu_count() or 1)))
    notes = [n for n in compare_with_reference(counts) if n.startswith("n=6")]
    report("7", True, f"six-crossing run complete; differences: {notes or 'none'}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
