"""Sparse integer Laurent polynomials in one variable.

A polynomial is stored as a map ``exponent -> coefficient`` with zero
coefficients dropped, so equality and hashing are exact.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for exp, coeff in items:
            acc[exp] = acc.get(exp, 0) + coeff
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1 or next(iter(self._terms.values())) not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            (e, c), = self._terms.items()
            return LaurentPoly({-e * (-k): c ** (-k)})
        result = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def substitute_inverse(self) -> LaurentPoly:
        """Return p(1/t)."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def evaluate(self, value):
        return sum(c * value ** e for e, c in self._terms.items())

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(self._terms.items())

    def to_string(self, var: str = "t") -> str:
        """Descending-exponent text form, e.g. ``t^2-2t+2t^-1-t^-2``."""
        if not self._terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(sorted(self._terms.items(), reverse=True)):
            sign = "-" if c < 0 else ("+" if i else "")
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                body = "" if mag == 1 else str(mag)
                body += var if e == 1 else f"{var}^{e}"
            out.append(sign + body)
        return "".join(out)

    @classmethod
    def parse(cls, text: str, var: str = "t") -> LaurentPoly:
        import re

        text = text.replace(" ", "")
        if text == "0":
            return cls()
        pattern = re.compile(
            rf"([+-]?)(\d*)(?:\*?({re.escape(var)})(?:\^(-?\d+))?)?"
        )
        terms: dict[int, int] = {}
        pos = 0
        while pos < len(text):
            m = pattern.match(text, pos)
            if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
                raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
            sign = -1 if m.group(1) == "-" else 1
            mag = int(m.group(2)) if m.group(2) else 1
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) is not None else 1
            else:
                exp = 0
            terms[exp] = terms.get(exp, 0) + sign * mag
            pos = m.end()
        return cls(terms)

    def __repr__(self):
        return f"LaurentPoly({self.to_string()!r})"

    def __str__(self):
        return self.to_string()
