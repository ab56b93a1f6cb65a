"""Turaev's graded matrix, primitive reduction, simple fillings and the graded genus."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .diagram import GaussDiagram
from .invariants import _in_open_arc


@dataclass(frozen=True)
class GradedMatrix:
    """Skew form on {s} + chords.  Index 0 is s; ``labels[i-1]`` names row i."""

    labels: tuple[int, ...]
    signs: tuple[int, ...]
    beta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.labels) + 1
        if len(self.signs) != m - 1 or len(self.beta) != m or any(len(r) != m for r in self.beta):
            raise ValueError("graded matrix shape mismatch")

    @property
    def size(self) -> int:
        return len(self.beta)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.beta for v in row)

    def is_skew(self) -> bool:
        m = self.size
        return all(self.beta[i][j] == -self.beta[j][i] for i in range(m) for j in range(m))

    def positive(self) -> list[int]:
        return [i + 1 for i, s in enumerate(self.signs) if s > 0]

    def negative(self) -> list[int]:
        return [i + 1 for i, s in enumerate(self.signs) if s < 0]

    def submatrix(self, keep: list[int]) -> GradedMatrix:
        """Keep s (index 0) and the listed chord rows, in order."""
        rows = [0] + [i for i in keep if i != 0]
        return GradedMatrix(
            tuple(self.labels[i - 1] for i in rows[1:]),
            tuple(self.signs[i - 1] for i in rows[1:]),
            tuple(tuple(self.beta[i][j] for j in rows) for i in rows),
        )

    def rows_text(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.beta)


def graded_matrix(D: GaussDiagram) -> GradedMatrix:
    """Graded matrix of a knot diagram, computed on its flat diagram.

    For chords x=(a,b), y=(c,d) of the flat diagram (negative arrows
    reversed), beta(x,y) = #[(ab)->(cd)] - #[(cd)->(ab)] + eps with
    eps = [c in (ab)] - [d in (ab)].  beta(x,s) counts flat arrows leaving
    (ab) minus arrows entering it.
    """
    D.require_knot("graded_matrix")
    word = D.circles[0]
    L = len(word)
    order = []
    for l, _ in word:
        if l not in order:
            order.append(l)
    arrows = D.flat_arrows()
    ends = [arrows[l] for l in order]
    n = len(order)

    inside = [[_in_open_arc(p, a, b, L) for p in range(L)] for a, b in ends]
    beta = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        ins = inside[i]
        out_minus_in = 0
        for t, h in ends:
            if ins[t] and not ins[h]:
                out_minus_in += 1
            elif ins[h] and not ins[t]:
                out_minus_in -= 1
        beta[i + 1][0] = out_minus_in
        beta[0][i + 1] = -out_minus_in
    for i in range(n):
        a, b = ends[i]
        for j in range(i + 1, n):
            c, d = ends[j]
            ab, cd = inside[i], inside[j]
            cnt = 0
            # an arrow inside the overlap of both arcs lies in both sets
            for t, h in ends:
                if ab[t] and cd[h]:
                    cnt += 1
                if cd[t] and ab[h]:
                    cnt -= 1
            eps = int(ab[c]) - int(ab[d])
            beta[i + 1][j + 1] = cnt + eps
            beta[j + 1][i + 1] = -(cnt + eps)
    return GradedMatrix(
        tuple(order),
        tuple(D.sign(l) for l in order),
        tuple(tuple(r) for r in beta),
    )


def negate(T: GradedMatrix) -> GradedMatrix:
    """-T: crossing signs swapped and the form negated."""
    return GradedMatrix(
        T.labels,
        tuple(-s for s in T.signs),
        tuple(tuple(-v for v in row) for row in T.beta),
    )


# -- exact rank ------------------------------------------------------------
def integer_rank(M) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in M]
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][c]
        for r in range(rank + 1, rows):
            arc = A[r][c]
            row_r, row_k = A[r], A[rank]
            for k in range(c + 1, cols):
                row_r[k] = (p * row_r[k] - arc * row_k[k]) // prev
            row_r[c] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


# -- primitive reduction -----------------------------------------------------
def primitive_reduce(T: GradedMatrix) -> GradedMatrix:
    """Apply M1 (zero row), M2 (row equal to row s) and M3 (opposite-sign pair
    summing to row s) until none applies."""
    while True:
        B = T.beta
        m = T.size
        s_row = B[0]
        idx = None
        for i in range(1, m):
            if all(v == 0 for v in B[i]) or B[i] == s_row:
                idx = [i]
                break
        if idx is None:
            for i, j in combinations(range(1, m), 2):
                if T.signs[i - 1] != T.signs[j - 1] and all(
                    B[i][k] + B[j][k] == s_row[k] for k in range(m)
                ):
                    idx = [i, j]
                    break
        if idx is None:
            return T
        T = T.submatrix([k for k in range(1, m) if k not in idx])


# -- fillings ---------------------------------------------------------------
@dataclass(frozen=True)
class Filling:
    """Simple graded filling: s, singleton chords, and (positive, negative) pairs.

    Entries are row indices of the graded matrix (0 is s).
    """

    singles: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    def generators(self) -> list[tuple[int, ...]]:
        return [(0,)] + [(i,) for i in self.singles] + [tuple(p) for p in self.pairs]


def enumerate_simple_fillings(T: GradedMatrix):
    """Yield every partial matching of positive against negative chords,
    by increasing number of pairs."""
    pos, neg = T.positive(), T.negative()
    for k in range(min(len(pos), len(neg)) + 1):
        for ps in combinations(pos, k):
            for ns in permutations(neg, k):
                pairs = tuple(zip(ps, ns))
                used = set(ps) | set(ns)
                singles = tuple(i for i in range(1, T.size) if i not in used)
                yield Filling(singles, pairs)


def count_simple_fillings(n_pos: int, n_neg: int) -> int:
    from math import comb, factorial

    return sum(comb(n_pos, k) * comb(n_neg, k) * factorial(k) for k in range(min(n_pos, n_neg) + 1))


def check_filling(T: GradedMatrix, lam: Filling) -> None:
    used = list(lam.singles) + [i for p in lam.pairs for i in p]
    if sorted(used) != list(range(1, T.size)):
        raise ValueError("filling must use every chord exactly once")
    for g, h in lam.pairs:
        if T.signs[g - 1] == T.signs[h - 1]:
            raise ValueError(f"pair ({g},{h}) does not have opposite signs")


def filling_matrix(T: GradedMatrix, lam: Filling) -> list[list[int]]:
    gens = lam.generators()
    B = T.beta
    return [[sum(B[i][j] for i in g for j in h) for h in gens] for g in gens]


def filling_rank(T: GradedMatrix, lam: Filling) -> int:
    check_filling(T, lam)
    return integer_rank(filling_matrix(T, lam))


def graded_genus_of_matrix(T: GradedMatrix, reduce: bool = True) -> int:
    if reduce:
        T = primitive_reduce(T)
    best = None
    for lam in enumerate_simple_fillings(T):
        r = integer_rank(filling_matrix(T, lam)) // 2
        if best is None or r < best:
            best = r
            if best == 0:
                break
    return best


def graded_genus(obj, reduce: bool = True) -> int:
    """Graded genus of a knot diagram or of a graded matrix."""
    T = obj if isinstance(obj, GradedMatrix) else graded_matrix(obj)
    return graded_genus_of_matrix(T, reduce)


# -- two-matrix graded fillings ------------------------------------------
def _direct_sum(T1: GradedMatrix, T2: GradedMatrix):
    """Block form of T1 (+) T2 with s1 at index 0 and s2 at index T1.size."""
    m1, m2 = T1.size, T2.size
    B = [[0] * (m1 + m2) for _ in range(m1 + m2)]
    for i in range(m1):
        B[i][:m1] = T1.beta[i]
    for i in range(m2):
        B[m1 + i][m1:] = T2.beta[i]
    signs = {i: T1.signs[i - 1] for i in range(1, m1)}
    signs.update({m1 + i: T2.signs[i - 1] for i in range(1, m2)})
    return B, signs, m1


def _gram(B, gens):
    rows = []
    for g in gens:
        gb = [sum(c * B[i][j] for i, c in g.items()) for j in range(len(B))]
        rows.append([sum(gb[j] * c for j, c in h.items()) for h in gens])
    return rows


def concordance_obstruction_bound(T1: GradedMatrix, T2: GradedMatrix,
                                  coeff_bound: int = 1, max_evals: int = 20000) -> int:
    """Upper bound on the graded genus of the pair (T1, -T2).

    Searches graded fillings of T1 (+) (-T2) whose generators are
    s1 + s2, single chords and opposite-sign pairs (across the two blocks
    too), each shifted by a*s1 + b*s2 with |a|, |b| <= coeff_bound.
    Unshifted fillings are tried first.  Zero certifies that the
    obstruction vanishes; a positive value is only an upper bound.
    """
    if coeff_bound < 0:
        raise ValueError("coeff_bound must be >= 0")
    B, signs, m1 = _direct_sum(T1, negate(T2))
    pos = [i for i, s in signs.items() if s > 0]
    neg = [i for i, s in signs.items() if s < 0]
    s1, s2 = 0, m1
    base = {s1: 1, s2: 1}
    best = None
    evals = 0

    def fillings():
        for k in range(min(len(pos), len(neg)), -1, -1):
            for ps in combinations(pos, k):
                for ns in permutations(neg, k):
                    used = set(ps) | set(ns)
                    chords = [{p: 1, q: 1} for p, q in zip(ps, ns)]
                    chords += [{i: 1} for i in sorted(signs) if i not in used]
                    yield chords

    shifts = [(a, b) for a in range(-coeff_bound, coeff_bound + 1)
              for b in range(-coeff_bound, coeff_bound + 1) if (a, b) != (0, 0)]
    # pass 1: unshifted generators
    for chords in fillings():
        r = integer_rank(_gram(B, [base] + chords)) // 2
        evals += 1
        best = r if best is None else min(best, r)
        if best == 0:
            return 0
    # pass 2: shift one generator at a time, greedily
    for chords in fillings():
        current = [dict(g) for g in chords]
        improved = True
        cur = integer_rank(_gram(B, [base] + current)) // 2
        while improved and evals < max_evals:
            improved = False
            for idx in range(len(current)):
                for a, b in shifts:
                    trial = [dict(g) for g in current]
                    g = trial[idx]
                    g[s1] = g.get(s1, 0) + a
                    g[s2] = g.get(s2, 0) + b
                    r = integer_rank(_gram(B, [base] + trial)) // 2
                    evals += 1
                    if r < cur:
                        cur, current, improved = r, trial, True
                        break
                if improved or evals >= max_evals:
                    break
        best = min(best, cur)
        if best == 0 or evals >= max_evals:
            break
    return best
