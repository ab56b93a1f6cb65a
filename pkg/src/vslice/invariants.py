"""Index polynomials, the normalized Kauffman bracket and Seifert circles."""
from __future__ import annotations

from math import isqrt
from itertools import product

from .diagram import OVER, UNDER, GaussDiagram, GaussCodeError
from .laurent import LaurentPoly
from .unionfind import UnionFind


def _in_open_arc(p: int, a: int, b: int, length: int) -> bool:
    """Whether position p lies strictly inside the ccw arc from a to b."""
    return 0 < (p - a) % length < (b - a) % length


def index(D: GaussDiagram, x: int) -> int:
    """ind(x) = r+ - r- - l+ + l-.

    With x drawn pointing down, the ccw arc from its tail to its head is
    on the left; an arrow crossing x left to right starts in that arc.
    """
    D.require_knot("index")
    sign_x = D.sign(x)  # noqa: F841  (raises for unknown chords)
    word = D.circles[0]
    L = len(word)
    a = D.tail(x)[1]
    b = D.head(x)[1]
    total = 0
    for y, s in D.signs.items():
        if y == x:
            continue
        t_in = _in_open_arc(D.tail(y)[1], a, b, L)
        h_in = _in_open_arc(D.head(y)[1], a, b, L)
        if t_in and not h_in:
            total += s
        elif h_in and not t_in:
            total -= s
    return total


def indices(D: GaussDiagram) -> dict[int, int]:
    return {x: index(D, x) for x in D.labels}


def odd_writhe(D: GaussDiagram) -> int:
    return sum(D.sign(x) for x, i in indices(D).items() if i % 2)


def writhe_polynomial(D: GaussDiagram) -> LaurentPoly:
    return LaurentPoly([(i, D.sign(x)) for x, i in indices(D).items() if i != 0])


def henrich_turaev(D: GaussDiagram) -> LaurentPoly:
    return LaurentPoly([(abs(i), D.sign(x)) for x, i in indices(D).items() if i != 0])


def writhe(D: GaussDiagram) -> int:
    return sum(D.signs.values())


# -- smoothing ------------------------------------------------------------
def _arc_table(D: GaussDiagram):
    """Number the arcs between consecutive endpoints, circle by circle.

    Returns (arc count, in-arc and out-arc of each endpoint, count of
    chordless circles).  Arc ``k`` of a circle runs from endpoint ``k`` to
    endpoint ``k+1``.
    """
    offset = 0
    arc_in, arc_out = {}, {}
    empty = 0
    for circ in D.circles:
        L = len(circ)
        if L == 0:
            empty += 1
            continue
        for i, ep in enumerate(circ):
            arc_out[ep] = offset + i
            arc_in[ep] = offset + (i - 1) % L
        offset += L
    return offset, arc_in, arc_out, empty


def count_loops(D: GaussDiagram, oriented: dict[int, bool]) -> int:
    """Loops after smoothing every chord; ``oriented[x]`` picks the
    oriented resplice at x, otherwise the unoriented one."""
    n_arcs, arc_in, arc_out, empty = _arc_table(D)
    uf = UnionFind(n_arcs)
    for x in D.labels:
        t, h = (x, OVER), (x, UNDER)
        if oriented[x]:
            uf.union(arc_in[t], arc_out[h])
            uf.union(arc_in[h], arc_out[t])
        else:
            uf.union(arc_in[t], arc_in[h])
            uf.union(arc_out[t], arc_out[h])
    return uf.count + empty


def seifert_circles(D: GaussDiagram) -> int:
    """Circles after the oriented smoothing at every chord."""
    return count_loops(D, {x: True for x in D.labels})


def dkk_slice_genus(D: GaussDiagram) -> int:
    """(n - r + 1)/2 for a one-signed knot diagram."""
    D.require_knot("dkk_slice_genus")
    if not D.is_one_signed():
        raise ValueError("DKK formula needs all chords of one sign")
    num = D.n - seifert_circles(D) + 1
    if num % 2 or num < 0:
        raise ArithmeticError(f"non-integral DKK genus {num}/2 for {D.code()}")
    return num // 2


_A = LaurentPoly.monomial(1)
_LOOP = LaurentPoly({2: -1, -2: -1})


def kauffman_bracket(D: GaussDiagram) -> LaurentPoly:
    """State sum <D> normalized so that one loop contributes 1.

    At a positive chord the A-smoothing is the oriented one; at a negative
    chord it is the unoriented one.
    """
    labels = D.labels
    if not labels:
        return LaurentPoly.constant(1) * _LOOP ** (D.n_circles - 1)
    by_loops: dict[tuple[int, int], int] = {}
    for bits in product((True, False), repeat=len(labels)):
        # bits[i] True means A-smoothing
        oriented = {x: (b == (D.sign(x) > 0)) for x, b in zip(labels, bits)}
        n_a = sum(bits)
        key = (2 * n_a - len(labels), count_loops(D, oriented))
        by_loops[key] = by_loops.get(key, 0) + 1
    total = LaurentPoly()
    loop_pows: dict[int, LaurentPoly] = {}
    for (a_exp, loops), mult in by_loops.items():
        if loops - 1 not in loop_pows:
            loop_pows[loops - 1] = _LOOP ** (loops - 1)
        total = total + LaurentPoly.monomial(a_exp, mult) * loop_pows[loops - 1]
    return total


def f_polynomial(D: GaussDiagram) -> LaurentPoly:
    """Writhe-normalized bracket (-A^3)^(-w) <D>; equals 1 on the unknot."""
    D.require_knot("f_polynomial")
    w = writhe(D)
    norm = LaurentPoly.monomial(-3 * w, -1 if w % 2 else 1)
    return norm * kauffman_bracket(D)


def is_flat_planar(D: GaussDiagram) -> bool:
    """Cairns-Elton: the flat diagram is planar iff its graded form vanishes."""
    from .graded import graded_matrix

    return graded_matrix(D).is_zero()


def invariant_summary(D: GaussDiagram) -> dict:
    return {
        "J": odd_writhe(D),
        "W": writhe_polynomial(D),
        "P": henrich_turaev(D),
        "f": f_polynomial(D),
    }


def determinant(D: GaussDiagram) -> int | None:
    """|f(A)| at A = exp(i*pi/4), which is |V(-1)| for classical knots.

    Returns None when f has an exponent that is not a multiple of 4 (the
    value is then not an integer and has no determinant meaning).
    """
    total = 0
    for e, c in f_polynomial(D).terms.items():
        if e % 4:
            return None
        total += c if (e // 4) % 2 == 0 else -c
    return abs(total)


def classical_det_obstructs(D: GaussDiagram) -> bool:
    """True when D is a classical diagram whose determinant is not a square.

    A slice classical knot has square determinant, and a classical knot
    that is slice as a virtual knot is classically slice.
    """
    if not is_flat_planar(D):
        return False
    det = determinant(D)
    return det is not None and isqrt(det) ** 2 != det
