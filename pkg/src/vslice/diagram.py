"""Gauss diagrams of virtual knots and links.

A diagram is a list of core circles, each a cyclic sequence of chord
endpoints, plus a sign for every chord.  An endpoint is a pair
``(label, "O")`` (the over-crossing pass, i.e. the chord's tail) or
``(label, "U")`` (the under-crossing pass, the chord's head).  Circle 0
starts at the basepoint.

Diagrams are immutable; every operation returns a new one.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import product

Endpoint = tuple[int, str]

OVER = "O"
UNDER = "U"

_TOKEN = re.compile(r"([OU])(\d+)([+-])")


class GaussCodeError(ValueError):
    """Raised for malformed Gauss codes or inconsistent diagram data."""


class IllegalMoveError(ValueError):
    """Raised when a move or surgery does not match the diagram."""


def _other(kind: str) -> str:
    return UNDER if kind == OVER else OVER


class GaussDiagram:
    __slots__ = ("circles", "_signs", "_pos", "_hash")

    def __init__(self, circles: Iterable[Sequence[Endpoint]], signs):
        circles = tuple(tuple((int(l), k) for l, k in c) for c in circles)
        signs = dict(signs)
        if not circles:
            raise GaussCodeError("a diagram needs at least one circle")
        pos: dict[Endpoint, tuple[int, int]] = {}
        for ci, circ in enumerate(circles):
            for i, ep in enumerate(circ):
                if ep[1] not in (OVER, UNDER):
                    raise GaussCodeError(f"bad endpoint {ep!r}")
                if ep in pos:
                    raise GaussCodeError(f"endpoint {ep!r} listed twice")
                pos[ep] = (ci, i)
        for label, s in signs.items():
            if s not in (1, -1):
                raise GaussCodeError(f"chord {label} has sign {s!r}")
            if (label, OVER) not in pos or (label, UNDER) not in pos:
                raise GaussCodeError(f"chord {label} lacks a tail or a head")
        if len(pos) != 2 * len(signs):
            raise GaussCodeError("endpoints do not match the chord list")
        self.circles = circles
        self._signs = signs
        self._pos = pos
        self._hash = None

    # -- basic queries -------------------------------------------------
    @property
    def signs(self) -> dict[int, int]:
        return dict(self._signs)

    @property
    def labels(self) -> list[int]:
        return sorted(self._signs)

    @property
    def n(self) -> int:
        return len(self._signs)

    @property
    def n_circles(self) -> int:
        return len(self.circles)

    def sign(self, label: int) -> int:
        try:
            return self._signs[label]
        except KeyError:
            raise KeyError(f"no chord labelled {label}") from None

    def position(self, ep: Endpoint) -> tuple[int, int]:
        return self._pos[ep]

    def tail(self, label: int) -> tuple[int, int]:
        return self._pos[(label, OVER)]

    def head(self, label: int) -> tuple[int, int]:
        return self._pos[(label, UNDER)]

    def is_knot(self) -> bool:
        return len(self.circles) == 1

    def is_one_signed(self) -> bool:
        return len(set(self._signs.values())) <= 1

    def is_trivial(self) -> bool:
        """True when there are no chords at all (an unlink of circles)."""
        return not self._signs

    def require_knot(self, what: str = "operation") -> None:
        if len(self.circles) != 1:
            raise GaussCodeError(f"{what} needs a single-circle diagram")

    def word(self) -> tuple[Endpoint, ...]:
        self.require_knot()
        return self.circles[0]

    def flat_arrows(self) -> dict[int, tuple[int, int]]:
        """Chord -> (tail position, head position) in the flat diagram.

        Only for knots; negative chords are reversed.
        """
        self.require_knot()
        out = {}
        for label, s in self._signs.items():
            t = self._pos[(label, OVER)][1]
            h = self._pos[(label, UNDER)][1]
            out[label] = (t, h) if s > 0 else (h, t)
        return out

    # -- equality --------------------------------------------------------
    def _key(self):
        return (self.circles, tuple(sorted(self._signs.items())))

    def __eq__(self, other):
        if not isinstance(other, GaussDiagram):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"GaussDiagram({self.code()!r})"

    # -- serialization ---------------------------------------------------
    def code(self) -> str:
        """Code with the current labels and basepoints; circles joined by ``|``."""
        return "|".join(
            "".join(f"{k}{l}{'+' if self._signs[l] > 0 else '-'}" for l, k in circ)
            for circ in self.circles
        )

    def relabeled(self) -> GaussDiagram:
        """Relabel chords 1, 2, ... in order of first appearance."""
        mapping: dict[int, int] = {}
        for circ in self.circles:
            for l, _ in circ:
                if l not in mapping:
                    mapping[l] = len(mapping) + 1
        return GaussDiagram(
            [[(mapping[l], k) for l, k in c] for c in self.circles],
            {mapping[l]: s for l, s in self._signs.items()},
        )

    def rotated(self, shift: int, circle: int = 0) -> GaussDiagram:
        circs = list(self.circles)
        c = circs[circle]
        if c:
            shift %= len(c)
            circs[circle] = c[shift:] + c[:shift]
        return GaussDiagram(circs, self._signs)


# -- parsing -----------------------------------------------------------
def _parse_word(text: str, offset: int = 0):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GaussCodeError(
                f"malformed token at character {pos + offset}: {text[pos:pos + 6]!r}"
            )
        tokens.append((m.group(1), int(m.group(2)), 1 if m.group(3) == "+" else -1))
        pos = m.end()
    return tokens


def _build(words: list[list[tuple[str, int, int]]]) -> GaussDiagram:
    seen: dict[int, dict[str, int]] = {}
    signs: dict[int, int] = {}
    for word in words:
        for kind, label, s in word:
            passes = seen.setdefault(label, {})
            if kind in passes:
                raise GaussCodeError(f"label {label} has two {kind} passes")
            passes[kind] = s
            if label in signs and signs[label] != s:
                raise GaussCodeError(f"label {label} carries inconsistent signs")
            signs[label] = s
    for label, passes in seen.items():
        if len(passes) != 2:
            raise GaussCodeError(
                f"label {label} is used once; it needs one O and one U pass"
            )
    return GaussDiagram([[(l, k) for k, l, _ in w] for w in words], signs)


def parse_gauss_code(text: str) -> GaussDiagram:
    """Parse a single-circle signed Gauss code such as ``O1+O2+U1+U2+``.

    The empty string is the unknot.
    """
    text = text.strip()
    if "|" in text:
        raise GaussCodeError("knot codes have a single circle; use parse_link_code")
    return _build([_parse_word(text)])


def parse_link_code(text: str) -> GaussDiagram:
    """Parse a multi-circle code; circles are separated by ``|``."""
    parts = text.strip().split("|")
    words = []
    offset = 0
    for p in parts:
        words.append(_parse_word(p, offset))
        offset += len(p) + 1
    return _build(words)


# -- canonical codes ---------------------------------------------------
def _token_key(word, signs):
    mapping: dict[int, int] = {}
    key = []
    for l, k in word:
        if l not in mapping:
            mapping[l] = len(mapping) + 1
        key.append((0 if k == OVER else 1, mapping[l], 0 if signs[l] > 0 else 1))
    return tuple(key)


def _key_to_code(key) -> str:
    return "".join(f"{'OU'[k]}{l}{'+-'[s]}" for k, l, s in key)


def canonical_key(D: GaussDiagram):
    D.require_knot("canonical code")
    word = D.circles[0]
    signs = D._signs
    if not word:
        return ()
    return min(_token_key(word[i:] + word[:i], signs) for i in range(len(word)))


def emit_canonical_code(D: GaussDiagram) -> str:
    """Least code over all basepoint rotations (chords relabelled by first pass)."""
    return _key_to_code(canonical_key(D))


def canonical_diagram(D: GaussDiagram) -> GaussDiagram:
    return parse_gauss_code(emit_canonical_code(D))


# -- symmetries --------------------------------------------------------
SYMMETRY_GENERATORS = ("rev", "mir", "ou")


@dataclass(frozen=True)
class Symmetry:
    """An element of the group generated by rev, mir and ou (order 8)."""

    rev: bool = False
    mir: bool = False
    ou: bool = False

    @property
    def name(self) -> str:
        parts = [g for g in SYMMETRY_GENERATORS if getattr(self, g)]
        return "*".join(parts) if parts else "id"

    @classmethod
    def parse(cls, name: str) -> Symmetry:
        if name in ("id", ""):
            return cls()
        parts = name.split("*")
        bad = [p for p in parts if p not in SYMMETRY_GENERATORS]
        if bad:
            raise ValueError(f"unknown symmetry generator(s): {bad}")
        return cls(**{p: (parts.count(p) % 2 == 1) for p in set(parts)})


SYMMETRY_GROUP = tuple(Symmetry(*bits) for bits in product((False, True), repeat=3))


def apply_symmetry(D: GaussDiagram, g: Symmetry | str) -> GaussDiagram:
    """Apply a symmetry: ``rev`` reverses every circle, ``mir`` flips every
    sign and arrow, ``ou`` flips every arrow only."""
    if isinstance(g, str):
        g = Symmetry.parse(g)
    circles = D.circles
    signs = D._signs
    if g.rev:
        circles = tuple(tuple(reversed(c)) for c in circles)
    flip = g.mir != g.ou
    if flip:
        circles = tuple(tuple((l, _other(k)) for l, k in c) for c in circles)
    if g.mir:
        signs = {l: -s for l, s in signs.items()}
    return GaussDiagram(circles, signs)


def symmetry_orbit_codes(D: GaussDiagram) -> set[str]:
    return {emit_canonical_code(apply_symmetry(D, g)) for g in SYMMETRY_GROUP}


def orbit_representative(D: GaussDiagram) -> str:
    """Least canonical code across the symmetry orbit."""
    return _key_to_code(min(canonical_key(apply_symmetry(D, g)) for g in SYMMETRY_GROUP))
