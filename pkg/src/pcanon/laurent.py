"""Sparse Laurent polynomials in one variable v with integer coefficients.

These are the scalars of the Hecke layer.  Coefficients are arbitrary
precision Python ints; the zero polynomial is the empty dict.  Values are
immutable: every operation returns a fresh polynomial.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Mapping


class LaurentPoly:
    """An element of Z[v, v^-1], stored as {exponent: coefficient}."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        if coeffs:
            for e, a in coeffs.items():
                if a:
                    c[int(e)] = int(a)
        self._c = c

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({0: 1})

    @staticmethod
    def const(a: int) -> "LaurentPoly":
        return LaurentPoly({0: a})

    @staticmethod
    def v(exp: int = 1, coeff: int = 1) -> "LaurentPoly":
        """The monomial coeff * v^exp."""
        return LaurentPoly({exp: coeff})

    # -- inspection ---------------------------------------------------

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._c.items()))

    def support(self) -> list[int]:
        return sorted(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return min(self._c)

    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return max(self._c)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        c = dict(self._c)
        for e, a in other._c.items():
            b = c.get(e, 0) + a
            if b:
                c[e] = b
            else:
                c.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e: -a for e, a in self._c.items()}
        return out

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        c: dict[int, int] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                e = e1 + e2
                b = c.get(e, 0) + a1 * a2
                if b:
                    c[e] = b
                else:
                    c.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    def scale(self, a: int) -> "LaurentPoly":
        if a == 0:
            return LaurentPoly()
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e: a * b for e, b in self._c.items()}
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e + k: a for e, a in self._c.items()}
        return out

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^-1."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {-e: a for e, a in self._c.items()}
        return out

    def __call__(self, value: int) -> int:
        """Evaluate at an integer value (value must be +-1 for exactness)."""
        if value not in (1, -1):
            raise ValueError("exact evaluation only at v = 1 or v = -1")
        return sum(a * (value ** (e % 2)) if value == -1 else a
                   for e, a in self._c.items())

    # -- structure tests ----------------------------------------------

    def positive_part(self) -> "LaurentPoly":
        """The terms with exponent > 0."""
        return LaurentPoly({e: a for e, a in self._c.items() if e > 0})

    def in_v_times_Zv(self) -> bool:
        """True iff all exponents are >= 1."""
        return all(e >= 1 for e in self._c)

    def is_symmetric(self) -> bool:
        """True iff invariant under v -> v^-1."""
        return self == self.bar()

    def nonneg_coeffs(self) -> bool:
        return all(a >= 0 for a in self._c.values())

    # -- comparisons / hashing ----------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict[str, int]:
        """JSON form: {"exponent": coefficient} with string keys, sorted."""
        return {str(e): a for e, a in sorted(self._c.items())}

    @staticmethod
    def from_dict(d: Mapping[str, int]) -> "LaurentPoly":
        return LaurentPoly({int(e): int(a) for e, a in d.items()})

    def __str__(self) -> str:
        """Greppable form: terms "c*v^k" joined by "+", exponents ascending."""
        if not self._c:
            return "0"
        parts = []
        for e, a in sorted(self._c.items()):
            if e == 0:
                parts.append(str(a))
            elif a == 1:
                parts.append(f"v^{e}")
            elif a == -1:
                parts.append(f"-v^{e}")
            else:
                parts.append(f"{a}*v^{e}")
        return "+".join(parts).replace("+-", "-")

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
V = LaurentPoly.v()
VINV = LaurentPoly.v(-1)


def parse_laurent(text: str) -> LaurentPoly:
    """Inverse of str(): parse "v^-1+2*v^1+v^3" (also bare integers)."""
    text = text.strip().replace(" ", "")
    if text == "0":
        return LaurentPoly()
    coeffs: dict[int, int] = {}
    # re-insert '+' separators in front of '-' signs, then split
    chunks = text.replace("-", "+-").split("+")
    for chunk in chunks:
        if not chunk:
            continue
        if "v" not in chunk:
            e, a = 0, int(chunk)
        else:
            head, _, tail = chunk.partition("v")
            a = int(head.rstrip("*")) if head.rstrip("*") not in ("", "-") else (-1 if head.startswith("-") else 1)
            e = int(tail.lstrip("^")) if tail.lstrip("^") else 1
        coeffs[e] = coeffs.get(e, 0) + a
    return LaurentPoly(coeffs)
