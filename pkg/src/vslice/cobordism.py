"""Surgery on Gauss diagrams, cobordism movies, and slice-genus bounds.

A movie is a starting code plus a list of events.  Saddles, births and
deaths change the surface; Reidemeister moves and ``simplify`` do not.
A movie from K that ends at the unknot witnesses g_s(K) <= (s - b - d)/2.
"""
from __future__ import annotations

import re
from itertools import permutations, product
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import (
    OVER,
    UNDER,
    SYMMETRY_GROUP,
    GaussCodeError,
    GaussDiagram,
    IllegalMoveError,
    _other,
    apply_symmetry,
    emit_canonical_code,
    parse_link_code,
)
from .graded import graded_genus
from .invariants import classical_det_obstructs, dkk_slice_genus, f_polynomial
from .moves import (
    MoveSpec,
    apply_move,
    equivalent_to_listed,
    is_unknot,
    r1_candidates,
    r2_candidates,
    r3_candidates,
    simplify,
    simplify_trace,
)

Gap = tuple[int, int]

ARROW_OPS = ("cd", "cc", "sc", "or")


class MovieError(ValueError):
    """An event that cannot be replayed; ``step`` is 1-based (0 = header)."""

    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step
        self.message = message


class NotReplayable(ValueError):
    pass


# -- surgery primitives ----------------------------------------------------
def _gap_ok(D: GaussDiagram, gap: Gap) -> None:
    c, i = gap
    if not (0 <= c < D.n_circles and 0 <= i <= len(D.circles[c])):
        raise IllegalMoveError(f"no gap {c}:{i}")


def saddle(D: GaussDiagram, p: Gap, q: Gap) -> GaussDiagram:
    """Orientable saddle between gaps p and q.

    Same circle (fission): with i < j the circle keeps ``s[:i] + s[j:]``
    and ``s[i:j]`` becomes a new last circle.  Different circles (fusion):
    ``s1[:i] + s2[j:] + s2[:j] + s1[i:]`` replaces the lower-numbered
    circle and the other one disappears.
    """
    _gap_ok(D, p)
    _gap_ok(D, q)
    circles = [list(c) for c in D.circles]
    if p[0] == q[0]:
        c = p[0]
        s = circles[c]
        L = len(s)
        i, j = sorted((p[1] % L, q[1] % L)) if L else (0, 0)
        if i == j and L:
            raise IllegalMoveError("fission needs two distinct gaps")
        circles[c] = s[:i] + s[j:]
        circles.append(s[i:j])
        return GaussDiagram(circles, D.signs)
    (c1, i), (c2, j) = sorted((p, q))
    s1, s2 = circles[c1], circles[c2]
    circles[c1] = s1[:i] + s2[j:] + s2[:j] + s1[i:]
    del circles[c2]
    return GaussDiagram(circles, D.signs)


def birth(D: GaussDiagram) -> GaussDiagram:
    return GaussDiagram(list(D.circles) + [()], D.signs)


def death(D: GaussDiagram, c: int) -> GaussDiagram:
    if not 0 <= c < D.n_circles:
        raise IllegalMoveError(f"no circle {c}")
    if D.circles[c]:
        raise IllegalMoveError(f"circle {c} carries chord endpoints")
    if D.n_circles == 1:
        raise IllegalMoveError("cannot remove the last circle")
    return GaussDiagram([x for k, x in enumerate(D.circles) if k != c], D.signs)


def arrow_op(D: GaussDiagram, op: str, x: int) -> GaussDiagram:
    """cc: reverse and flip sign; cd: delete; sc: flip sign; or: reverse."""
    if op not in ARROW_OPS:
        raise ValueError(f"unknown arrow operation {op!r}")
    D.sign(x)
    signs = D.signs
    if op == "cd":
        del signs[x]
        return GaussDiagram([[e for e in c if e[0] != x] for c in D.circles], signs)
    circles = D.circles
    if op in ("cc", "or"):
        circles = [[(l, _other(k)) if l == x else (l, k) for l, k in c] for c in circles]
    if op in ("cc", "sc"):
        signs[x] = -signs[x]
    return GaussDiagram(circles, signs)


def chords_intersect(D: GaussDiagram, x: int, y: int) -> bool:
    D.require_knot("chords_intersect")
    px = sorted(p[1] for p in (D.tail(x), D.head(x)))
    py = [p[1] for p in (D.tail(y), D.head(y))]
    inside = [px[0] < p < px[1] for p in py]
    return inside[0] != inside[1]


def _crossed_layout(D: GaussDiagram, x: int, y: int):
    """Rotate so the word reads a w1 c w2 b w3 d w4 with x=(a,b), y=(c,d).

    Returns the rotation start index and the positions of a, c, b, d in
    the original word.
    """
    w = D.circles[0]
    L = len(w)
    px = sorted(p[1] for p in (D.tail(x), D.head(x)))
    start = px[0]
    rel = sorted(((p[1] - start) % L, p[1]) for p in (D.tail(x), D.head(x), D.tail(y), D.head(y)))
    return start, [p for _, p in rel]


def crossed_saddle(D: GaussDiagram, x: int, y: int) -> GaussDiagram:
    """Cancel two intersecting chords with a fission and a fusion.

    On the cyclic word a w1 c w2 b w3 d w4 (x=(a,b), y=(c,d)) the result is
    w2 w1 w4 w3.
    """
    D.require_knot("crossed_saddle")
    if x == y or not chords_intersect(D, x, y):
        raise IllegalMoveError(f"chords {x} and {y} do not intersect")
    w = D.circles[0]
    L = len(w)
    start, (a, c, b, d) = _crossed_layout(D, x, y)

    def seg(i, j):
        return [w[k % L] for k in range(i + 1, j if j > i else j + L)]

    w1, w2, w3, w4 = seg(a, c), seg(c, b), seg(b, d), seg(d, a)
    signs = D.signs
    del signs[x], signs[y]
    return GaussDiagram([w2 + w1 + w4 + w3], signs)


# -- movies ------------------------------------------------------------------
@dataclass(frozen=True)
class Event:
    kind: str
    args: tuple = ()

    def text(self) -> str:
        k, a = self.kind, self.args
        if k == "saddle":
            return f"saddle {a[0][0]}:{a[0][1]} {a[1][0]}:{a[1][1]}"
        if k == "death":
            return f"death {a[0]}"
        if k == "r1+":
            (c, i), s, of = a
            return f"r1+ {c}:{i} {'+' if s > 0 else '-'} {'O' if of else 'U'}"
        if k == "r2+":
            (c, i), (c2, j), s, par = a
            return f"r2+ {c}:{i} {c2}:{j} {'+' if s > 0 else '-'}" + ("" if par else " anti")
        if k in ("r1-", "r2-", "r3"):
            return " ".join([k] + [str(v) for v in a])
        return k


@dataclass
class Movie:
    code: str
    events: list[Event] = field(default_factory=list)

    def text(self) -> str:
        return "\n".join([f"code {self.code}".rstrip()] + [e.text() for e in self.events]) + "\n"


@dataclass
class CobordismCertificate:
    saddles: int
    births: int
    deaths: int
    terminal: GaussDiagram

    @property
    def genus(self) -> Fraction:
        return Fraction(self.saddles - self.births - self.deaths, 2)

    @property
    def unknot_terminal(self) -> bool:
        return is_unknot(self.terminal)

    @property
    def slice(self) -> bool:
        return self.unknot_terminal and self.genus == 0

    def line(self) -> str:
        g = self.genus
        gtext = str(g.numerator) if g.denominator == 1 else f"{g.numerator}/{g.denominator}"
        term = "unknot" if self.unknot_terminal else self.terminal.code()
        return f"genus={gtext} terminal={term} slice={'yes' if self.slice else 'no'}"


_GAP = re.compile(r"^(\d+):(\d+)$")


def _parse_gap(tok: str) -> Gap:
    m = _GAP.match(tok)
    if not m:
        raise ValueError(f"bad position {tok!r} (want circle:index)")
    return int(m.group(1)), int(m.group(2))


def _parse_sign(tok: str) -> int:
    if tok in ("+", "+1", "1"):
        return 1
    if tok in ("-", "-1"):
        return -1
    raise ValueError(f"bad sign {tok!r}")


def parse_event(line: str) -> Event:
    parts = line.split()
    k, rest = parts[0], parts[1:]
    arity = {"saddle": 2, "birth": 0, "death": 1, "r1-": 1, "r1+": 3, "r2-": 2,
             "r2+": (3, 4), "r3": 4, "simplify": 0}
    if k not in arity:
        raise ValueError(f"unknown event {k!r}")
    want = arity[k]
    if (len(rest) not in want) if isinstance(want, tuple) else len(rest) != want:
        raise ValueError(f"{k} takes {want} argument(s), got {len(rest)}")
    if k == "saddle":
        return Event(k, (_parse_gap(rest[0]), _parse_gap(rest[1])))
    if k == "death":
        return Event(k, (int(rest[0]),))
    if k in ("r1-", "r2-", "r3"):
        return Event(k, tuple(int(v) for v in rest))
    if k == "r1+":
        if rest[2] not in ("O", "U"):
            raise ValueError("r1+ needs O or U for the first endpoint")
        return Event(k, (_parse_gap(rest[0]), _parse_sign(rest[1]), rest[2] == "O"))
    if k == "r2+":
        par = True
        if len(rest) == 4:
            if rest[3] not in ("par", "anti"):
                raise ValueError("r2+ orientation must be par or anti")
            par = rest[3] == "par"
        return Event(k, (_parse_gap(rest[0]), _parse_gap(rest[1]), _parse_sign(rest[2]), par))
    return Event(k)


def parse_movie(text: str) -> Movie:
    """Parse a movie file.  Errors carry the 1-based event number."""
    lines = [(n, l.strip()) for n, l in enumerate(text.splitlines(), 1)]
    lines = [(n, l) for n, l in lines if l and not l.startswith("#")]
    if not lines or lines[0][1].split()[0] != "code":
        raise MovieError(0, "first line must be 'code <gauss_code>'")
    head = lines[0][1].split()
    if len(head) > 2:
        raise MovieError(0, "malformed code line")
    code = head[1] if len(head) == 2 else ""
    try:
        parse_link_code(code)
    except GaussCodeError as exc:
        raise MovieError(0, str(exc)) from None
    events = []
    for step, (_, line) in enumerate(lines[1:], 1):
        try:
            events.append(parse_event(line))
        except ValueError as exc:
            raise MovieError(step, str(exc)) from None
    return Movie(code, events)


def apply_event(D: GaussDiagram, ev: Event) -> GaussDiagram:
    k, a = ev.kind, ev.args
    if k == "saddle":
        return saddle(D, *a)
    if k == "birth":
        return birth(D)
    if k == "death":
        return death(D, a[0])
    if k == "simplify":
        return simplify(D)
    if k == "r1-":
        return apply_move(D, MoveSpec("r1-", a))
    if k == "r2-":
        return apply_move(D, MoveSpec("r2-", a))
    if k == "r3":
        return apply_move(D, MoveSpec("r3", a[:3], variant=a[3]))
    if k == "r1+":
        return apply_move(D, MoveSpec("r1+", gaps=(a[0],), sign=a[1], over_first=a[2]))
    if k == "r2+":
        return apply_move(D, MoveSpec("r2+", gaps=(a[0], a[1]), sign=a[2], parallel=a[3]))
    raise ValueError(f"unknown event {k!r}")


def verify_movie(m: Movie | str) -> CobordismCertificate:
    """Replay every event; reject the first illegal one with its step number."""
    if isinstance(m, str):
        m = parse_movie(m)
    try:
        D = parse_link_code(m.code)
    except GaussCodeError as exc:
        raise MovieError(0, str(exc)) from None
    counts = {"saddle": 0, "birth": 0, "death": 0}
    for step, ev in enumerate(m.events, 1):
        try:
            D = apply_event(D, ev)
        except (IllegalMoveError, GaussCodeError, KeyError, ValueError) as exc:
            raise MovieError(step, f"{ev.text()}: {exc}") from None
        if ev.kind in counts:
            counts[ev.kind] += 1
    cert = CobordismCertificate(counts["saddle"], counts["birth"], counts["death"], D)
    if cert.unknot_terminal and (cert.genus < 0 or cert.genus.denominator != 1):
        raise MovieError(len(m.events), f"surface genus {cert.genus} is not a nonnegative integer")
    return cert


# -- movies for the genus-one operations -----------------------------------
def arrow_op_events(D: GaussDiagram, op: str, x: int) -> list[Event]:
    """Events turning D into arrow_op(D, op, x) with at most two saddles.

    The chord is pinched off into a kink by a fission, the kink is removed
    (and, unless deleting, re-inserted with the new data), and a fusion
    puts the arc back.
    """
    D.require_knot("arrow_op_events")
    if op not in ARROW_OPS:
        raise ValueError(f"unknown arrow operation {op!r}")
    w = D.circles[0]
    p, q = sorted((D.tail(x)[1], D.head(x)[1]))
    first_over = w[p][1] == OVER
    sign = D.sign(x)
    if op == "cd":
        new = None
    else:
        new_sign = -sign if op in ("cc", "sc") else sign
        new_first_over = (not first_over) if op in ("cc", "or") else first_over
        new = (new_sign, new_first_over)
    if q == p + 1:
        evs = [Event("r1-", (x,))]
        if new is not None:
            evs.append(Event("r1+", ((0, p), new[0], new[1])))
        return evs
    if p == 0 and q == len(w) - 1:
        # endpoints adjacent across the basepoint: no surgery needed
        evs = [Event("r1-", (x,))]
        if new is not None:
            evs.append(Event("r1+", ((0, len(w) - 2), new[0], not new[1])))
        return evs
    evs = [Event("saddle", ((0, p + 1), (0, q))), Event("r1-", (x,))]
    if new is None:
        evs.append(Event("saddle", ((0, p), (1, 0))))
    else:
        evs.append(Event("r1+", ((0, p), new[0], new[1])))
        evs.append(Event("saddle", ((0, p + 1), (1, 0))))
    return evs


def crossed_saddle_movie(D: GaussDiagram, x: int, y: int) -> list[Event]:
    """Replay-checked events for crossed_saddle (two saddles, two r1-)."""
    D.require_knot("crossed_saddle_movie")
    if x == y or not chords_intersect(D, x, y):
        raise IllegalMoveError(f"chords {x} and {y} do not intersect")
    events: list[Event] = []
    E = D
    # fission: cut just after a and just before b so x becomes a kink
    for ev in _fission_kink(E, x):
        E = apply_event(E, ev)
        events.append(ev)
    ev = Event("r1-", (x,))
    E = apply_event(E, ev)
    events.append(ev)
    # y now joins the split-off circle (c) to the kept one (d): fuse just
    # after c and just before d so that y becomes a kink
    ends = [E.position((y, k)) for k in (OVER, UNDER)]
    (c_circ, c_idx), = [e for e in ends if e[0] == 1]
    (_, d_idx), = [e for e in ends if e[0] == 0]
    ev = Event("saddle", ((0, d_idx), (1, c_idx + 1)))
    E = apply_event(E, ev)
    events.append(ev)
    ev = Event("r1-", (y,))
    E = apply_event(E, ev)
    events.append(ev)
    return events


def _fission_kink(D: GaussDiagram, x: int) -> list[Event]:
    w = D.circles[0]
    p, q = sorted((D.tail(x)[1], D.head(x)[1]))
    if q == p + 1 or (p == 0 and q == len(w) - 1):
        return []
    return [Event("saddle", ((0, p + 1), (0, q)))]


# -- slice status and bounds ---------------------------------------------
SLICE = "SLICE"
UNKNOWN = "UNKNOWN"


@dataclass
class SliceContext:
    """Knowledge used to recognize slice knots.

    ``slice_list`` maps canonical codes to names (or is a set of codes).
    """

    slice_list: dict | set | frozenset = field(default_factory=dict)
    use_sliceq: bool = True
    use_symmetry: bool = True
    max_sliceq_chords: int = 4


@dataclass
class SliceVerdict:
    status: str
    reason: str = ""


def slice_status(D: GaussDiagram, ctx: SliceContext | None = None) -> SliceVerdict:
    """SLICE when D simplifies to the unknot, matches the slice list, or
    satisfies the bracket/graded-genus criterion for at most four chords.
    Never claims non-sliceness."""
    ctx = ctx or SliceContext()
    D.require_knot("slice_status")
    S = simplify(D)
    if S.n == 0:
        return SliceVerdict(SLICE, "unknot")
    if ctx.slice_list:
        hit = equivalent_to_listed(S, ctx.slice_list, use_symmetry=ctx.use_symmetry)
        if hit is not None:
            return SliceVerdict(SLICE, f"list:{hit.code}:{hit.symmetry}")
    if ctx.use_sliceq and S.n <= ctx.max_sliceq_chords:
        if f_polynomial(S) == 1 and graded_genus(S) == 0:
            return SliceVerdict(SLICE, "sliceq")
    return SliceVerdict(UNKNOWN)


class BoundViolation(ArithmeticError):
    """Lower bound exceeds a certified upper bound: something is wrong."""


@dataclass
class BoundResult:
    lower: int
    upper: int
    method: str
    theta: int = 0

    def __post_init__(self):
        if self.lower > self.upper:
            raise BoundViolation(f"lower {self.lower} > upper {self.upper} ({self.method})")


def _one_op_candidates(D: GaussDiagram):
    for op in ARROW_OPS:
        for x in D.labels:
            yield f"{op} {x}", arrow_op(D, op, x)
    for i, x in enumerate(D.labels):
        for y in D.labels[i + 1:]:
            if chords_intersect(D, x, y):
                yield f"SMOOTH {x} & {y}", crossed_saddle(D, x, y)


def slice_genus_bounds(D: GaussDiagram, ctx: SliceContext | None = None,
                       genus2: bool = False, theta: int | None = None) -> BoundResult:
    """Interval for the slice genus with a tag naming how the upper bound was found."""
    ctx = ctx or SliceContext()
    D.require_knot("slice_genus_bounds")
    if simplify(D).n == 0:
        return BoundResult(0, 0, "SLICE", 0)
    if theta is None:
        theta = graded_genus(D)
    lower = (theta + 1) // 2
    if lower == 0 and classical_det_obstructs(D):
        lower = 1
    if D.is_one_signed():
        g = dkk_slice_genus(D)
        if lower > g:
            _violation(lower, g, "DKK")
        if g == 1:
            # prefer a replayable witness when one exists
            for tag, E in _one_op_candidates(D):
                if slice_status(E, ctx).status == SLICE:
                    return BoundResult(1, 1, tag, theta)
        return BoundResult(g, g, f"DKK={g}", theta)
    n = D.n
    upper = (n - 1) // 2
    if slice_status(D, ctx).status == SLICE:
        return BoundResult(lower, 0, "SLICE", theta) if lower == 0 else _violation(lower, 0, "SLICE")
    for tag, E in _one_op_candidates(D):
        if slice_status(E, ctx).status == SLICE:
            if lower > 1:
                _violation(lower, 1, tag)
            return BoundResult(lower, 1, tag, theta)
    if genus2:
        for tag1, E in _one_op_candidates(D):
            E = simplify(E)
            if E.n == 0:
                continue
            for tag2, F in _one_op_candidates(E):
                if slice_status(F, ctx).status == SLICE:
                    if lower > 2:
                        _violation(lower, 2, tag1)
                    return BoundResult(lower, min(upper, 2), f"{tag1} & {tag2} (simplified)", theta)
    return BoundResult(lower, max(upper, lower), "!", theta)


def _violation(lower, upper, tag):
    raise BoundViolation(f"lower bound {lower} exceeds upper bound {upper} from {tag}")


# -- moving a movie onto an equivalent diagram --------------------------------
def link_key(D: GaussDiagram):
    """Isomorphism key: least token sequence over circle orders and basepoints."""
    best = None
    circles = D.circles
    for order in permutations(range(len(circles))):
        for rots in product(*[range(max(1, len(circles[c]))) for c in order]):
            mapping: dict[int, int] = {}
            key = []
            for c, r in zip(order, rots):
                w = circles[c][r:] + circles[c][:r]
                for l, k in w:
                    if l not in mapping:
                        mapping[l] = len(mapping) + 1
                    key.append((0 if k == OVER else 1, mapping[l], 0 if D.sign(l) > 0 else 1))
                key.append((2, 0, 0))
            key = tuple(key)
            if best is None or key < best:
                best = key
    return best


def _shape(D: GaussDiagram):
    return (D.n, sum(D.signs.values()), tuple(sorted(len(c) for c in D.circles)))


def _gaps(D: GaussDiagram):
    return [(c, i) for c, w in enumerate(D.circles) for i in range(max(1, len(w)))]


def _event_candidates(R: GaussDiagram, kind: str):
    gaps = _gaps(R)
    if kind == "saddle":
        for a in range(len(gaps)):
            for b in range(a + 1, len(gaps)):
                yield Event(kind, (gaps[a], gaps[b]))
    elif kind == "birth":
        yield Event(kind)
    elif kind == "death":
        for c, w in enumerate(R.circles):
            if not w:
                yield Event(kind, (c,))
    elif kind == "r1-":
        for x in r1_candidates(R):
            yield Event(kind, (x,))
    elif kind == "r2-":
        for pair in r2_candidates(R):
            yield Event(kind, pair)
    elif kind == "r3":
        for cand in r3_candidates(R):
            yield Event(kind, cand)
    elif kind == "r1+":
        for g, sg, of in product(gaps, (1, -1), (True, False)):
            yield Event(kind, (g, sg, of))
    elif kind == "r2+":
        for g1, g2, sg, par in product(gaps, gaps, (1, -1), (True, False)):
            yield Event(kind, (g1, g2, sg, par))


def transport_movie(movie: Movie, R: GaussDiagram) -> list[Event]:
    """Events that replay ``movie`` on R, a symmetric image of its start.

    R may differ from the movie's diagram by basepoints, labels, circle
    order and any symmetry.  Each event is matched by searching the events
    on R for one whose result is isomorphic to the image of the original
    step.  Raises NotReplayable when R is not in the start's orbit.
    """
    M = parse_link_code(movie.code)
    target = link_key(R)
    sym = next((g for g in SYMMETRY_GROUP if link_key(apply_symmetry(M, g)) == target), None)
    if sym is None:
        raise NotReplayable("diagram is not a symmetric image of the movie start")
    out = []
    for ev in movie.events:
        if ev.kind == "simplify":
            raise NotReplayable("movies with simplify events cannot be transported")
        M = apply_event(M, ev)
        image = apply_symmetry(M, sym)
        want, shape = link_key(image), _shape(image)
        for cand in _event_candidates(R, ev.kind):
            try:
                E = apply_event(R, cand)
            except (IllegalMoveError, GaussCodeError, KeyError, ValueError):
                continue
            if _shape(E) == shape and link_key(E) == want:
                R = E
                out.append(cand)
                break
        else:
            raise NotReplayable(f"no event on the target matches {ev.text()}")
    return out


def load_movie_library(paths) -> dict[str, Movie]:
    """Movies keyed by their starting code (as written in the file)."""
    out = {}
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            m = parse_movie(fh.read())
        out[m.code] = m
    return out


def _movie_genus(m: Movie) -> Fraction:
    kinds = [e.kind for e in m.events]
    return Fraction(kinds.count("saddle") - kinds.count("birth") - kinds.count("death"), 2)


def _finish_with_library(R: GaussDiagram, library) -> list[Event] | None:
    """Transport a genus-0 library movie onto R, if one fits."""
    for m in (library or {}).values():
        if _movie_genus(m) != 0:
            continue
        try:
            return transport_movie(m, R)
        except NotReplayable:
            continue
    return None


def _slice_by_witness(D: GaussDiagram, library) -> bool:
    S = simplify(D)
    return S.n == 0 or _finish_with_library(S, library) is not None


def find_operation_chain(D: GaussDiagram, depth: int, library=None) -> str | None:
    """A tag of at most ``depth`` genus-one operations ending at a diagram
    that simplifies to the unknot or carries a library movie."""
    def search(E, left):
        for tag, F in _one_op_candidates(E):
            if _slice_by_witness(F, library):
                return [tag]
            if left > 1:
                rest = search(simplify(F), left - 1)
                if rest:
                    return [tag] + rest
        return None

    found = search(D, depth)
    return " & ".join(found) if found else None


def method_movie(D: GaussDiagram, method: str, library: dict | None = None) -> Movie:
    """A movie witnessing the upper bound behind a method tag.

    The tagged operations are replayed as saddles and Reidemeister moves.
    When they do not end at a diagram that simplifies to the unknot, a
    movie from ``library`` (code -> Movie) is moved onto the final
    diagram.  "DKK=g" is witnessed by a chain of g operations found by
    search.  Raises NotReplayable when no witness is found.
    """
    D.require_knot("method_movie")
    if method.startswith("DKK="):
        tag = find_operation_chain(D, int(method[4:]), library)
        if tag is None:
            raise NotReplayable(f"no chain of operations found for {method}")
        return method_movie(D, tag, library)
    if method == "SLICE":
        S, trace = simplify_trace(D)
        if not S.n:
            return Movie(D.code(), [_move_event(m, {}) for m in trace])
        tail = _finish_with_library(D, library)
        if tail is None:
            raise NotReplayable("slice status does not come from simplification or a movie")
        return Movie(D.code(), tail)
    steps = [s.strip() for s in method.replace(" (simplified)", "").split(" & ")]
    ideal, real = D, D
    lmap = {l: l for l in D.labels}
    events: list[Event] = []
    k = 0
    while k < len(steps):
        part = steps[k].split()
        if part[0] == "SMOOTH":
            x, y = int(part[1]), int(steps[k + 1])
            evs = crossed_saddle_movie(real, lmap[x], lmap[y])
            ideal = crossed_saddle(ideal, x, y)
            k += 2
        elif part[0] in ARROW_OPS and len(part) == 2:
            op, x = part[0], int(part[1])
            evs = arrow_op_events(real, op, lmap[x])
            ideal = arrow_op(ideal, op, x)
            k += 1
        else:
            raise NotReplayable(f"tag {method!r} names no replayable operation")
        for ev in evs:
            real = apply_event(real, ev)
        events += evs
        known = {lmap[l] for l in ideal.labels if l in lmap and lmap[l] in real.labels}
        fresh = set(real.labels) - known
        for l in ideal.labels:
            if lmap.get(l) not in real.labels:
                lmap[l] = fresh.pop()
        ideal, trace = simplify_trace(ideal)
        for m in trace:
            ev = _move_event(m, lmap)
            real = apply_event(real, ev)
            events.append(ev)
    if ideal.n:
        tail = _finish_with_library(real, library)
        if tail is None:
            raise NotReplayable(f"{method!r} ends at {ideal.code()}, not at the unknot")
        events += tail
    return Movie(D.code(), events)


def _move_event(m: MoveSpec, lmap: dict) -> Event:
    return Event(m.kind, tuple(lmap.get(c, c) for c in m.chords))
