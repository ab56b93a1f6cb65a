"""Concordance invariants and slice-genus bounds for virtual knots."""
from pathlib import Path

from .cobordism import (
    Movie,
    MovieError,
    SliceContext,
    arrow_op,
    crossed_saddle,
    slice_genus_bounds,
    slice_status,
    verify_movie,
)
from .diagram import (
    GaussCodeError,
    GaussDiagram,
    IllegalMoveError,
    apply_symmetry,
    emit_canonical_code,
    parse_gauss_code,
    parse_link_code,
)
from .graded import graded_genus, graded_matrix
from .invariants import f_polynomial, index, odd_writhe, writhe_polynomial
from .laurent import LaurentPoly
from .moves import simplify

__version__ = "0.1.0"


def data_path(name: str = "") -> Path:
    """Path to a bundled data file (knot tables, slice lists, movies)."""
    return Path(__file__).parent / "data" / name


def bundled_movies():
    """Movie library shipped with the package, keyed by starting code."""
    from .cobordism import load_movie_library

    return load_movie_library(sorted(data_path("movies").glob("*.movie")))
