"""Command line front end: ``vslice <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys

from pathlib import Path

from . import bundled_movies, data_path
from .cobordism import MovieError, NotReplayable, method_movie, verify_movie
from .diagram import GaussCodeError
from .graded import graded_genus, graded_matrix
from .invariants import f_polynomial, henrich_turaev, odd_writhe, writhe_polynomial
from .tabulator import (
    TableError,
    TabulateConfig,
    compare_with_reference,
    load_table,
    read_csv,
    rows_text,
    summarize,
    summary_rows,
    tabulate,
)

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=1)
        out.write("\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    out.write(",".join(cols) + "\n")
    for r in rows:
        out.write(",".join(str(r[c]) for c in cols) + "\n")


def cmd_invariants(args, out) -> int:
    rows = []
    for name, D in load_table(args.file):
        rows.append({
            "name": name, "code": D.code(), "n": D.n, "J": odd_writhe(D),
            "W": writhe_polynomial(D).to_string("t"), "P": henrich_turaev(D).to_string("t"),
            "f": f_polynomial(D).to_string("A"),
        })
    _emit(rows, args.format, out)
    return EXIT_OK


def cmd_graded_genus(args, out) -> int:
    for name, D in load_table(args.file):
        out.write(f"{name}\t{graded_genus(D)}\n")
        if args.dump_matrix:
            out.write(graded_matrix(D).rows_text() + "\n")
    return EXIT_OK


def _slice_lists(specs) -> dict[int, str]:
    lists = {}
    for spec in specs or ():
        n, sep, path = spec.partition("=")
        if not sep or not n.isdigit():
            raise TableError(spec, 0, "slice list must be given as N=path")
        lists[int(n)] = str(data_path(f"slice{n}.tsv")) if path == "builtin" else path
    return lists


def cmd_slice_bounds(args, out) -> int:
    config = TabulateConfig(
        slice_lists=_slice_lists(args.slice_list),
        use_symmetry=not args.no_symmetry,
        use_sliceq=not args.no_sliceq,
        genus2=args.genus2,
        jobs=args.jobs,
    )
    records = load_table(args.file)
    rows = tabulate(records, config)
    out.write(rows_text(rows, args.format))
    if args.write_movies:
        _write_movies(records, rows, Path(args.write_movies))
    if any(r.method.startswith("violation") for r in rows):
        return EXIT_INTERNAL
    return EXIT_OK


def _write_movies(records, rows, folder: Path) -> None:
    """One verified witness movie per row whose method tag can be replayed."""
    folder.mkdir(parents=True, exist_ok=True)
    library = bundled_movies()
    for (name, D), row in zip(records, rows):
        if row.upper is None:
            continue
        try:
            movie = method_movie(D, row.method, library)
        except NotReplayable:
            continue
        cert = verify_movie(movie)
        if not cert.unknot_terminal or cert.genus > row.upper:
            raise ArithmeticError(f"{name}: witness movie gives {cert.line()}")
        (folder / f"{name}.movie").write_text(movie.text(), encoding="utf-8")


def cmd_verify_movie(args, out) -> int:
    with open(args.file, encoding="utf-8") as fh:
        cert = verify_movie(fh.read())
    out.write(cert.line() + "\n")
    return EXIT_OK


def cmd_summarize(args, out) -> int:
    counts = summarize(read_csv(args.csv))
    _emit(summary_rows(counts), args.format, out)
    for note in compare_with_reference(counts):
        out.write(f"# differs: {note}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vslice", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("invariants", help="index polynomials and normalized bracket")
    sp.add_argument("file")
    fmt(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("graded-genus", help="graded genus per knot")
    sp.add_argument("file")
    sp.add_argument("--dump-matrix", action="store_true")
    sp.set_defaults(func=cmd_graded_genus)

    sp = sub.add_parser("slice-bounds", help="slice-genus intervals per knot")
    sp.add_argument("file")
    sp.add_argument("--slice-list", action="append", metavar="N=PATH",
                    help="known slice knots with N crossings ('builtin' for the bundled list)")
    sp.add_argument("--genus2", action="store_true", help="also try pairs of operations")
    sp.add_argument("--no-symmetry", action="store_true")
    sp.add_argument("--no-sliceq", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--write-movies", metavar="DIR",
                    help="write a verified witness movie per knot where one can be built")
    fmt(sp)
    sp.set_defaults(func=cmd_slice_bounds)

    sp = sub.add_parser("verify-movie", help="replay a cobordism movie")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_verify_movie)

    sp = sub.add_parser("summarize", help="counts per crossing number from a result CSV")
    sp.add_argument("csv")
    fmt(sp)
    sp.set_defaults(func=cmd_summarize)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (TableError, MovieError, GaussCodeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ArithmeticError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
