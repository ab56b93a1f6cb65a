"""Reidemeister moves on Gauss diagrams, simplification, and list matching.

Gap positions are written ``(circle, index)``: gap ``i`` sits just before
the endpoint at index ``i`` (index ``len(circle)`` is the end, which is the
same place as gap 0 cyclically).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .diagram import (
    OVER,
    SYMMETRY_GROUP,
    UNDER,
    GaussDiagram,
    IllegalMoveError,
    apply_symmetry,
    emit_canonical_code,
)

Gap = tuple[int, int]

MOVE_KINDS = ("r1-", "r1+", "r2-", "r2+", "r3")


def r3_pattern_ok(order_top: int, order_mid: int, order_bot: int,
                  s_tm: int, s_tb: int, s_mb: int) -> bool:
    """Whether a crossing triangle is realisable by three straight strands.

    ``order_top`` is 0 when the top strand meets its crossing with the
    middle strand before its crossing with the bottom one; likewise
    ``order_mid`` (top-middle before middle-bottom) and ``order_bot``
    (top-bottom before middle-bottom).
    """
    return (s_tm * s_tb == (-1) ** (order_mid + order_bot)
            and s_mb * s_tb == (-1) ** (order_top + order_mid))


@dataclass(frozen=True)
class MoveSpec:
    """One Reidemeister move.

    ``r1-``: ``chords=(x,)``.  ``r2-``: ``chords=(x, y)``.
    ``r3``: ``chords=(x, y, z)`` and ``variant`` picks among the valid
    triangles those chords form (usually there is exactly one).
    ``r1+``: ``gaps=(g,)``, ``sign``, ``over_first``.
    ``r2+``: ``gaps=(g_over, g_under)``, ``sign`` of the first new chord,
    ``parallel`` for the order of the two under passes.
    """

    kind: str
    chords: tuple[int, ...] = ()
    gaps: tuple[Gap, ...] = ()
    sign: int = 1
    over_first: bool = True
    parallel: bool = True
    variant: int = 0

    def __post_init__(self):
        arity = {"r1-": (1, 0), "r2-": (2, 0), "r3": (3, 0), "r1+": (0, 1), "r2+": (0, 2)}
        if self.kind not in arity:
            raise ValueError(f"unknown move kind {self.kind!r}")
        nc, ng = arity[self.kind]
        if len(self.chords) != nc or len(self.gaps) != ng:
            raise ValueError(f"{self.kind} takes {nc} chord(s) and {ng} gap(s)")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


# -- helpers -----------------------------------------------------------
def _next(D: GaussDiagram, ep):
    c, i = D.position(ep)
    circ = D.circles[c]
    return circ[(i + 1) % len(circ)]


def _adjacent(D: GaussDiagram, e1, e2) -> bool:
    c1, i1 = D.position(e1)
    c2, i2 = D.position(e2)
    if c1 != c2:
        return False
    L = len(D.circles[c1])
    return (i1 - i2) % L in (1, L - 1)


def _delete_chords(D: GaussDiagram, labels) -> GaussDiagram:
    drop = set(labels)
    circles = [[ep for ep in c if ep[0] not in drop] for c in D.circles]
    signs = {l: s for l, s in D.signs.items() if l not in drop}
    return GaussDiagram(circles, signs)


def _fresh_label(D: GaussDiagram, k: int = 0) -> int:
    return (max(D.labels) if D.n else 0) + 1 + k


def _check_gap(D: GaussDiagram, gap: Gap) -> None:
    c, i = gap
    if not (0 <= c < D.n_circles) or not (0 <= i <= len(D.circles[c])):
        raise IllegalMoveError(f"no gap {c}:{i}")


def _insert(D: GaussDiagram, inserts: list[tuple[Gap, list]], signs: dict) -> GaussDiagram:
    circles = [list(c) for c in D.circles]
    # rightmost insertions first so earlier indices stay valid
    for (c, i), eps in sorted(inserts, key=lambda t: t[0], reverse=True):
        circles[c][i:i] = eps
    new_signs = D.signs
    new_signs.update(signs)
    return GaussDiagram(circles, new_signs)


# -- r1 ------------------------------------------------------------------
def r1_candidates(D: GaussDiagram) -> list[int]:
    return [x for x in D.labels if _adjacent(D, (x, OVER), (x, UNDER))]


def r1_remove(D: GaussDiagram, x: int) -> GaussDiagram:
    D.sign(x)
    if not _adjacent(D, (x, OVER), (x, UNDER)):
        raise IllegalMoveError(f"r1-: chord {x} does not bound an empty arc")
    return _delete_chords(D, [x])


def r1_insert(D: GaussDiagram, gap: Gap, sign: int, over_first: bool = True) -> GaussDiagram:
    _check_gap(D, gap)
    x = _fresh_label(D)
    eps = [(x, OVER), (x, UNDER)] if over_first else [(x, UNDER), (x, OVER)]
    return _insert(D, [(gap, eps)], {x: sign})


# -- r2 ------------------------------------------------------------------
def r2_pair_ok(D: GaussDiagram, x: int, y: int) -> bool:
    return (
        x != y
        and D.sign(x) == -D.sign(y)
        and _adjacent(D, (x, OVER), (y, OVER))
        and _adjacent(D, (x, UNDER), (y, UNDER))
    )


def r2_candidates(D: GaussDiagram) -> list[tuple[int, int]]:
    return [(x, y) for x, y in combinations(D.labels, 2) if r2_pair_ok(D, x, y)]


def r2_remove(D: GaussDiagram, x: int, y: int) -> GaussDiagram:
    if not r2_pair_ok(D, x, y):
        raise IllegalMoveError(f"r2-: chords {x},{y} do not form a bigon")
    return _delete_chords(D, [x, y])


def r2_insert(D: GaussDiagram, over_gap: Gap, under_gap: Gap, sign: int,
              parallel: bool = True) -> GaussDiagram:
    _check_gap(D, over_gap)
    _check_gap(D, under_gap)
    x, y = _fresh_label(D), _fresh_label(D, 1)
    overs = [(x, OVER), (y, OVER)]
    unders = [(x, UNDER), (y, UNDER)] if parallel else [(y, UNDER), (x, UNDER)]
    if over_gap == under_gap:
        inserts = [(over_gap, overs + unders)]
    else:
        inserts = [(over_gap, overs), (under_gap, unders)]
    return _insert(D, inserts, {x: sign, y: -sign})


# -- r3 ------------------------------------------------------------------
def _ordered_pairs(D: GaussDiagram, eps):
    """Adjacent ordered endpoint pairs (e, next(e)) inside ``eps`` with distinct chords."""
    s = set(eps)
    out = []
    for e in eps:
        f = _next(D, e)
        if f in s and f != e and f[0] != e[0]:
            out.append((e, f))
    return out


def r3_triangles(D: GaussDiagram, x: int, y: int, z: int):
    """All valid r3 triangles on chords x, y, z, as lists of 3 ordered pairs."""
    chords = {x, y, z}
    if len(chords) != 3:
        return []
    for c in chords:
        D.sign(c)
    eps = [(c, k) for c in sorted(chords) for k in (OVER, UNDER)]
    pairs = _ordered_pairs(D, eps)
    found = []
    for trio in combinations(pairs, 3):
        used = [e for p in trio for e in p]
        if len(set(used)) != 6:
            continue
        roles = {}
        for p in trio:
            kinds = sorted(k for _, k in p)
            role = {(OVER, OVER): "T", (OVER, UNDER): "M", (UNDER, UNDER): "B"}[tuple(kinds)]
            roles[role] = p
        if len(roles) != 3:
            continue
        T, M, B = roles["T"], roles["M"], roles["B"]
        m_over = next(e for e in M if e[1] == OVER)[0]
        m_under = next(e for e in M if e[1] == UNDER)[0]
        tm = m_under
        mb = m_over
        tb_set = {e[0] for e in T} - {tm}
        if len(tb_set) != 1:
            continue
        tb = tb_set.pop()
        if {e[0] for e in B} != {tb, mb}:
            continue
        order_top = 0 if T[0][0] == tm else 1
        order_mid = 0 if M[0][0] == tm else 1
        order_bot = 0 if B[0][0] == tb else 1
        if r3_pattern_ok(order_top, order_mid, order_bot, D.sign(tm), D.sign(tb), D.sign(mb)):
            found.append(sorted(trio))
    found.sort()
    return found


def r3_apply(D: GaussDiagram, x: int, y: int, z: int, variant: int = 0) -> GaussDiagram:
    tris = r3_triangles(D, x, y, z)
    if not (0 <= variant < len(tris)):
        raise IllegalMoveError(f"r3: chords {x},{y},{z} admit no triangle #{variant}")
    swap = {}
    for e, f in tris[variant]:
        swap[e], swap[f] = f, e
    circles = [[swap.get(ep, ep) for ep in c] for c in D.circles]
    return GaussDiagram(circles, D.signs)


def r3_candidates(D: GaussDiagram) -> list[tuple[int, int, int, int]]:
    out = []
    for x, y, z in combinations(D.labels, 3):
        for v, _ in enumerate(r3_triangles(D, x, y, z)):
            out.append((x, y, z, v))
    return out


# -- dispatch ------------------------------------------------------------
def apply_move(D: GaussDiagram, m: MoveSpec) -> GaussDiagram:
    """Apply one move; raises IllegalMoveError when the pattern does not match."""
    try:
        if m.kind == "r1-":
            return r1_remove(D, m.chords[0])
        if m.kind == "r2-":
            return r2_remove(D, *m.chords)
        if m.kind == "r3":
            return r3_apply(D, *m.chords, variant=m.variant)
        if m.kind == "r1+":
            return r1_insert(D, m.gaps[0], m.sign, m.over_first)
        return r2_insert(D, m.gaps[0], m.gaps[1], m.sign, m.parallel)
    except KeyError as exc:
        raise IllegalMoveError(str(exc)) from None


def legal_reducing_moves(D: GaussDiagram) -> list[MoveSpec]:
    moves = [MoveSpec("r1-", (x,)) for x in r1_candidates(D)]
    moves += [MoveSpec("r2-", p) for p in r2_candidates(D)]
    return moves


def simplify_trace(D: GaussDiagram) -> tuple[GaussDiagram, list[MoveSpec]]:
    """Greedy r1/r2 reduction to a fixpoint, with the moves used."""
    trace = []
    while True:
        r1 = r1_candidates(D)
        if r1:
            D = _delete_chords(D, [r1[0]])
            trace.append(MoveSpec("r1-", (r1[0],)))
            continue
        r2 = r2_candidates(D)
        if r2:
            D = _delete_chords(D, r2[0])
            trace.append(MoveSpec("r2-", r2[0]))
            continue
        return D, trace


def simplify(D: GaussDiagram) -> GaussDiagram:
    """Greedy r1/r2 reduction to a fixpoint.  Circles are never deleted."""
    return simplify_trace(D)[0]


def is_unknot(D: GaussDiagram) -> bool:
    return D.n_circles == 1 and simplify(D).n == 0


def connected_sum(D1: GaussDiagram, D2: GaussDiagram) -> GaussDiagram:
    """Splice two knot diagrams at their basepoints."""
    D1.require_knot("connected sum")
    D2.require_knot("connected sum")
    shift = max(D1.labels, default=0)
    w = list(D1.circles[0]) + [(l + shift, k) for l, k in D2.circles[0]]
    signs = D1.signs
    signs.update({l + shift: s for l, s in D2.signs.items()})
    return GaussDiagram([w], signs)


def r3_neighbourhood(D: GaussDiagram, limit: int = 2000) -> list[GaussDiagram]:
    """Knot diagrams reachable from D by r3 moves (canonical, breadth first)."""
    from .diagram import canonical_diagram

    start = canonical_diagram(D)
    seen = {emit_canonical_code(start): start}
    frontier = [start]
    while frontier and len(seen) < limit:
        nxt = []
        for E in frontier:
            for x, y, z, v in r3_candidates(E):
                F = canonical_diagram(r3_apply(E, x, y, z, v))
                code = emit_canonical_code(F)
                if code not in seen:
                    seen[code] = F
                    nxt.append(F)
        frontier = nxt
    return list(seen.values())


@dataclass
class ListMatch:
    code: str
    symmetry: str
    via_r3: bool = False


def equivalent_to_listed(D: GaussDiagram, listed, use_symmetry: bool = True,
                         r3_search: bool = False) -> ListMatch | None:
    """Return a match if a simplified symmetric image of D is on the list.

    Sound but incomplete: ``None`` says nothing about inequivalence.
    """
    listed = listed if isinstance(listed, (set, frozenset, dict)) else set(listed)
    S = simplify(D)
    if S.n_circles != 1:
        return None
    group = SYMMETRY_GROUP if use_symmetry else SYMMETRY_GROUP[:1]
    candidates = [S]
    if r3_search:
        candidates = [simplify(E) for E in r3_neighbourhood(S)]
    for i, E in enumerate(candidates):
        for g in group:
            code = emit_canonical_code(apply_symmetry(E, g))
            if code in listed:
                return ListMatch(code, g.name, via_r3=i > 0)
    return None
