"""Sparse multivariate polynomials over Q, and fractions with factored
linear denominators.

These realize Sym(V*) in coordinates: variable i is the i-th coordinate
function on V, placed in graded degree 2.  Division is only ever needed by
linear forms (Demazure operators, localization at root hyperplanes), so
exact synthetic division by a linear form is the one division primitive.
"""
from __future__ import annotations

from fractions import Fraction


class MultiPoly:
    """Polynomial in nvars variables: {exponent tuple: Fraction}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[e] = Fraction(c)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MultiPoly":
        return MultiPoly(nvars)

    @staticmethod
    def const(nvars: int, c) -> "MultiPoly":
        c = Fraction(c)
        return MultiPoly(nvars, {(0,) * nvars: c} if c else {})

    @staticmethod
    def variable(nvars: int, i: int) -> "MultiPoly":
        e = tuple(1 if k == i else 0 for k in range(nvars))
        return MultiPoly(nvars, {e: Fraction(1)})

    @staticmethod
    def linear(coeffs) -> "MultiPoly":
        """The linear form sum coeffs[i] * x_i."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                terms[tuple(1 if k == i else 0 for k in range(n))] = c
        return MultiPoly(n, terms)

    # -- inspection ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Max monomial degree (-1 for the zero polynomial)."""
        return max((sum(e) for e in self.terms), default=-1)

    def graded_degree(self) -> int:
        """Degree with variables in degree 2; requires homogeneity."""
        degs = {sum(e) for e in self.terms}
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return 2 * degs.pop() if degs else 0

    def is_homogeneous(self, degree_over_2: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree_over_2 is None or degs.pop() == degree_over_2

    # -- arithmetic -----------------------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = t
        return out

    def __neg__(self) -> "MultiPoly":
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        t: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = t
        return out

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        if not c:
            return MultiPoly(self.nvars)
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = {e: c * v for e, v in self.terms.items()}
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- substitution and division --------------------------------------------------

    def subs_linear(self, forms: list["MultiPoly"]) -> "MultiPoly":
        """Substitute x_i -> forms[i] (forms must be linear or constant)."""
        out = MultiPoly(self.nvars)
        pow_cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            if k == 0:
                return MultiPoly.const(self.nvars, 1)
            key = (i, k)
            got = pow_cache.get(key)
            if got is None:
                got = power(i, k - 1) * forms[i]
                pow_cache[key] = got
            return got

        for e, c in self.terms.items():
            term = MultiPoly.const(self.nvars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def divexact_linear(self, lin: "MultiPoly") -> "MultiPoly | None":
        """Exact quotient by a (nonzero) linear form, or None when inexact."""
        pivot = None
        for e, c in lin.terms.items():
            if sum(e) == 1:
                pivot = (e.index(1), c)
                break
            if sum(e) != 0:
                raise ValueError("divisor is not linear")
        if pivot is None:
            # constant divisor
            c = lin.constant_term()
            if not c:
                raise ZeroDivisionError("division by zero polynomial")
            return self.scale(Fraction(1) / c)
        i, c = pivot
        rest = lin - MultiPoly(self.nvars,
                               {tuple(1 if k == i else 0
                                      for k in range(self.nvars)): c})
        q = MultiPoly(self.nvars)
        r = self
        while True:
            # leading part: terms with maximal degree in x_i
            dmax = max((e[i] for e in r.terms), default=0)
            if dmax == 0:
                break
            lead = {e: v for e, v in r.terms.items() if e[i] == dmax}
            qpart = MultiPoly(self.nvars, {
                tuple(x - (1 if k == i else 0) for k, x in enumerate(e)):
                v / c for e, v in lead.items()})
            q = q + qpart
            r = r - qpart * lin
        return q if r.is_zero() else None

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}"
                            for i, k in enumerate(e) if k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


class RootFraction:
    """num / (scalar * prod(factors)) with linear factors; lazily cancelled.

    This is the little fraction field fragment needed by the localization
    extraction: denominators are products of (twisted) root forms.
    """

    __slots__ = ("num", "factors", "scalar")

    def __init__(self, num: MultiPoly, factors: list[MultiPoly] | None = None,
                 scalar: Fraction = Fraction(1)):
        self.num = num
        self.factors = list(factors or [])
        self.scalar = Fraction(scalar)
        self._cancel()

    def _cancel(self):
        if self.num.is_zero():
            self.factors = []
            self.scalar = Fraction(1)
            return
        kept = []
        for f in self.factors:
            q = self.num.divexact_linear(f)
            if q is not None:
                self.num = q
            else:
                kept.append(f)
        self.factors = kept

    @staticmethod
    def from_poly(p: MultiPoly) -> "RootFraction":
        return RootFraction(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "RootFraction") -> "RootFraction":
        num = self.num.scale(other.scalar)
        for f in other.factors:
            num = num * f
        num2 = other.num.scale(self.scalar)
        for f in self.factors:
            num2 = num2 * f
        return RootFraction(num + num2, self.factors + other.factors,
                            self.scalar * other.scalar)

    def __sub__(self, other: "RootFraction") -> "RootFraction":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "RootFraction":
        return RootFraction(self.num.scale(c), self.factors, self.scalar)

    def mul_poly(self, p: MultiPoly) -> "RootFraction":
        return RootFraction(self.num * p, self.factors, self.scalar)

    def div_linear(self, lin: MultiPoly) -> "RootFraction":
        if lin.is_constant():
            c = lin.constant_term()
            if not c:
                raise ZeroDivisionError
            return RootFraction(self.num, self.factors, self.scalar * c)
        q = self.num.divexact_linear(lin)
        if q is not None:
            return RootFraction(q, self.factors, self.scalar)
        return RootFraction(self.num, self.factors + [lin], self.scalar)

    def div_scalar(self, c: Fraction) -> "RootFraction":
        if not c:
            raise ZeroDivisionError
        return RootFraction(self.num, self.factors, self.scalar * c)

    def as_constant(self) -> Fraction:
        """The value as a rational constant; raises if non-constant."""
        if self.num.is_zero():
            return Fraction(0)
        num = self.num
        for f in self.factors:
            q = num.divexact_linear(f)
            if q is None:
                raise ValueError(f"non-constant fraction: {self!r}")
            num = q
        if not num.is_constant():
            raise ValueError(f"non-constant fraction: {self!r}")
        return num.constant_term() / self.scalar

    def __repr__(self):
        return f"({self.num!r}) / ({self.scalar} * {self.factors!r})"
