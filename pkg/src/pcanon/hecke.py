"""The Hecke algebra of a Coxeter system over Z[v, v^-1].

Standard basis {H_w}, with the quadratic rule

    H_w H_s = H_{ws}                      if ws > w,
    H_w H_s = (v^-1 - v) H_w + H_{ws}     if ws < w,

Bott-Samelson elements (H_{s_1}+v)...(H_{s_k}+v), the pairing
<H_x, H_y> = delta_{xy}, the bar involution, the Kazhdan-Lusztig basis
b_w (Soergel normalization: b_w = H_w + sum_{y<w} h_{y,w} H_y with
h_{y,w} in vZ[v]), and the antispherical module sgn (x)_{H_J} H.
"""
from __future__ import annotations

from .coxeter import CoxeterElement, CoxeterSystem, IDENTITY
from .errors import InputError, InternalInconsistencyError
from .laurent import ONE, V, VINV, LaurentPoly


class HeckeElement:
    """Finite support map CoxeterElement -> LaurentPoly; no zero values."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict[CoxeterElement, LaurentPoly] | None = None):
        self._c = {w: p for w, p in (coeffs or {}).items() if p}

    def coeff(self, w: CoxeterElement) -> LaurentPoly:
        return self._c.get(w, LaurentPoly.zero())

    def support(self) -> list[CoxeterElement]:
        return sorted(self._c, key=lambda w: (w.length, w.word))

    def items(self):
        return [(w, self._c[w]) for w in self.support()]

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        c = dict(self._c)
        for w, p in other._c.items():
            q = c.get(w)
            s = p if q is None else q + p
            if s:
                c[w] = s
            else:
                c.pop(w, None)
        out = HeckeElement.__new__(HeckeElement)
        out._c = c
        return out

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + other.scale(LaurentPoly.const(-1))

    def scale(self, p: LaurentPoly) -> "HeckeElement":
        if not p:
            return HeckeElement()
        out = HeckeElement.__new__(HeckeElement)
        out._c = {w: q * p for w, q in self._c.items()}
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset((w, p) for w, p in self._c.items()))

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        return " + ".join(f"({p})H[{w}]" for w, p in self.items())

    def to_dict(self) -> dict[str, dict[str, int]]:
        """JSON form {word-string: laurent-dict}; words are dot-joined indices."""
        return {".".join(map(str, w.word)): p.to_dict() for w, p in self.items()}


def _unit() -> HeckeElement:
    return HeckeElement({IDENTITY: ONE})


class HeckeAlgebra:
    """Hecke algebra operations bound to a Coxeter system (with memo tables)."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self._kl_cache: dict[CoxeterElement, HeckeElement] = {}
        self._barH_cache: dict[CoxeterElement, HeckeElement] = {}

    # -- basis elements -------------------------------------------------

    def unit(self) -> HeckeElement:
        return _unit()

    def standard(self, w: CoxeterElement) -> HeckeElement:
        return HeckeElement({w: ONE})

    def generator(self, i: int) -> HeckeElement:
        return HeckeElement({self.system.generator(i): ONE})

    # -- multiplication ----------------------------------------------------

    def _mult_gen_right(self, a: HeckeElement, i: int) -> HeckeElement:
        sys = self.system
        out: dict[CoxeterElement, LaurentPoly] = {}
        vdiff = VINV - V
        for x, c in a._c.items():
            xs = sys.right_multiply_gen(x, i)
            if xs.length > x.length:
                q = out.get(xs)
                s = c if q is None else q + c
                if s:
                    out[xs] = s
                else:
                    out.pop(xs, None)
            else:
                q = out.get(xs)
                s = c if q is None else q + c
                if s:
                    out[xs] = s
                else:
                    out.pop(xs, None)
                extra = c * vdiff
                q = out.get(x)
                s = extra if q is None else q + extra
                if s:
                    out[x] = s
                else:
                    out.pop(x, None)
        res = HeckeElement.__new__(HeckeElement)
        res._c = out
        return res

    def multiply(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        """Bilinear extension of the quadratic rule."""
        total = HeckeElement()
        for w, c in b._c.items():
            term = a.scale(c)
            for i in w.word:
                term = self._mult_gen_right(term, i)
            total = total + term
        return total

    # -- Bott-Samelson elements -----------------------------------------------

    def bs_element(self, word) -> HeckeElement:
        """(H_{s_1} + v) ... (H_{s_k} + v); the empty product is H_e."""
        out = _unit()
        for i in word:
            out = self._mult_gen_right(out, i) + out.scale(V)
        return out

    def standard_multiplicities(self, word) -> dict[tuple[CoxeterElement, int], int]:
        """Coefficients of the Bott-Samelson element, as (y, n) -> coeff of
        v^n H_y.  These are the standard and (with n -> -n) costandard
        multiplicities of the Bott-Samelson tilting object."""
        out = {}
        for y, p in self.bs_element(word).items():
            for n, c in p.items():
                out[(y, n)] = c
        return out

    # -- pairing -------------------------------------------------------------

    def pairing(self, a: HeckeElement, b: HeckeElement) -> LaurentPoly:
        """Z[v,v^-1]-bilinear symmetric pairing with <H_x, H_y> = delta_xy."""
        total = LaurentPoly.zero()
        small, big = (a, b) if len(a._c) <= len(b._c) else (b, a)
        for w, p in small._c.items():
            q = big._c.get(w)
            if q is not None:
                total = total + p * q
        return total

    def graded_hom_rank(self, vword, wword) -> LaurentPoly:
        """<BS(vword), BS(wword)>: the graded Hom rank between the
        corresponding Bott-Samelson tilting objects."""
        return self.pairing(self.bs_element(vword), self.bs_element(wword))

    # -- bar involution ---------------------------------------------------------

    def _bar_standard(self, w: CoxeterElement) -> HeckeElement:
        """bar(H_w) = (H_{w^-1})^{-1}, via bar(H_s) = H_s + (v - v^-1)H_e."""
        cached = self._barH_cache.get(w)
        if cached is not None:
            return cached
        out = _unit()
        vdiff = V - VINV
        for i in w.word:
            out = self._mult_gen_right(out, i) + out.scale(vdiff)
        self._barH_cache[w] = out
        return out

    def bar_involution(self, a: HeckeElement) -> HeckeElement:
        total = HeckeElement()
        for w, c in a._c.items():
            total = total + self._bar_standard(w).scale(c.bar())
        return total

    # -- Kazhdan-Lusztig basis ---------------------------------------------------

    def kl_basis(self, w: CoxeterElement) -> HeckeElement:
        """b_w = H_w + sum_{y < w} h_{y,w}(v) H_y, h_{y,w} in vZ[v].

        Computed by the right-descent recursion b_{w's} = b_{w'} b_s minus
        mu-corrections; bar-invariance is checked against an independent
        solver in the test suite.
        """
        cached = self._kl_cache.get(w)
        if cached is not None:
            return cached
        if w.length == 0:
            out = _unit()
        else:
            sys = self.system
            i = sys.right_descents(w)[0]
            wp = sys.right_multiply_gen(w, i)
            prev = self.kl_basis(wp)
            prod = self._mult_gen_right(prev, i) + prev.scale(V)
            corr = HeckeElement()
            for y in prev.support():
                if sys.right_multiply_gen(y, i).length < y.length:
                    mu = prev.coeff(y).coeff(1)
                    if mu:
                        corr = corr + self.kl_basis(y).scale(LaurentPoly.const(mu))
            out = prod - corr
        if out.coeff(w) != ONE:
            raise InternalInconsistencyError("KL recursion lost unitriangularity")
        self._kl_cache[w] = out
        return out

    def kl_polynomial(self, y: CoxeterElement, w: CoxeterElement) -> LaurentPoly:
        return self.kl_basis(w).coeff(y)

    def expand_in_kl(self, a: HeckeElement) -> dict[CoxeterElement, LaurentPoly]:
        """Coefficients of a in the KL basis (unitriangular back-substitution)."""
        rest = a
        out: dict[CoxeterElement, LaurentPoly] = {}
        while not rest.is_zero():
            w = rest.support()[-1]
            c = rest.coeff(w)
            out[w] = c
            rest = rest - self.kl_basis(w).scale(c)
        return out

    # -- KL inversion --------------------------------------------------------------

    def kl_inversion_check(self, max_length: int, cap: int = 100_000) -> bool:
        """Verify the Kazhdan-Lusztig inversion identity on the Bruhat ideal
        of elements of length <= max_length.

        The signed inverse G_{x,y} = (-1)^{l(x)+l(y)} (H^-1)_{x,y} of the KL
        matrix H = (h_{x,y}) is checked to be unitriangular with entries in
        vZ[v] with nonnegative coefficients (the inverse-KL contract), and

        * full finite group: G_{x,y} = h_{w0 y, w0 x} exactly;
        * dihedral systems (rank 2, finite or affine): G = H exactly
          (all inverse-KL polynomials are trivial there).

        Raises InternalInconsistencyError naming the first failing pair.
        """
        sys = self.system
        elems = sys.enumerate_elements(max_length, cap=cap)
        idx = {w: k for k, w in enumerate(elems)}
        n = len(elems)
        h = [[LaurentPoly.zero()] * n for _ in range(n)]
        for j, w in enumerate(elems):
            for y, p in self.kl_basis(w).items():
                h[idx[y]][j] = p
        # invert the unitriangular matrix by back-substitution
        ginv = [[LaurentPoly.zero()] * n for _ in range(n)]
        for j in range(n):
            ginv[j][j] = ONE
            for x in range(j - 1, -1, -1):
                acc = LaurentPoly.zero()
                for z in range(x + 1, j + 1):
                    if h[x][z] and ginv[z][j]:
                        acc = acc + h[x][z] * ginv[z][j]
                ginv[x][j] = -acc if acc else LaurentPoly.zero()

        def fail(x, y, msg):
            raise InternalInconsistencyError(
                f"KL inversion failed at pair ({elems[x]!r}, {elems[y]!r}): {msg}")

        signed = [[ginv[x][y].scale(
            -1 if (elems[x].length + elems[y].length) % 2 else 1)
            for y in range(n)] for x in range(n)]
        for x in range(n):
            for y in range(n):
                g = signed[x][y]
                if x == y:
                    if g != ONE:
                        fail(x, y, "diagonal not 1")
                elif g:
                    if not g.in_v_times_Zv():
                        fail(x, y, f"entry {g} not in vZ[v]")
                    if not g.nonneg_coeffs():
                        fail(x, y, f"entry {g} has negative coefficients")
        w0 = None
        if sys.is_finite():
            w0 = sys.longest_element()
            if w0.length > max_length:
                w0 = None
        if w0 is not None:
            for x in range(n):
                for y in range(n):
                    wy = sys.multiply(w0, elems[y])
                    wx = sys.multiply(w0, elems[x])
                    if signed[x][y] != self.kl_polynomial(wy, wx):
                        fail(x, y, "signed inverse != w0-twisted KL polynomial")
        elif sys.rank == 2:
            for x in range(n):
                for y in range(n):
                    if signed[x][y] != h[x][y]:
                        fail(x, y, "signed inverse != KL matrix (dihedral)")
        return True

    # -- antispherical module ----------------------------------------------------

    def antispherical_project(self, a: HeckeElement, J) -> "AntisphericalElement":
        """Image under H -> sgn (x)_{H_J} H: H_x -> (-v)^{l(u)} N_y, x = u y."""
        J = tuple(sorted(J))
        if not self.system.parabolic_is_finite(J):
            raise InputError("W_J must be finite")
        out: dict[CoxeterElement, LaurentPoly] = {}
        for x, c in a._c.items():
            k, y = self.system.min_coset_decompose(x, J)
            p = c.shift(k).scale((-1) ** k)
            q = out.get(y)
            s = p if q is None else q + p
            if s:
                out[y] = s
            else:
                out.pop(y, None)
        return AntisphericalElement(out, J)

    def antispherical_unit(self, J) -> "AntisphericalElement":
        return AntisphericalElement({IDENTITY: ONE}, tuple(sorted(J)))


class AntisphericalElement:
    """Element of sgn (x)_{H_J} H in the standard basis {N_y : y in ^J W}."""

    __slots__ = ("_c", "J")

    def __init__(self, coeffs: dict[CoxeterElement, LaurentPoly], J):
        self._c = {y: p for y, p in coeffs.items() if p}
        self.J = tuple(sorted(J))

    def coeff(self, y: CoxeterElement) -> LaurentPoly:
        return self._c.get(y, LaurentPoly.zero())

    def support(self) -> list[CoxeterElement]:
        return sorted(self._c, key=lambda w: (w.length, w.word))

    def items(self):
        return [(y, self._c[y]) for y in self.support()]

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other: "AntisphericalElement") -> "AntisphericalElement":
        if self.J != other.J:
            raise InputError("antispherical elements over different J")
        c = dict(self._c)
        for w, p in other._c.items():
            q = c.get(w)
            s = p if q is None else q + p
            if s:
                c[w] = s
            else:
                c.pop(w, None)
        return AntisphericalElement(c, self.J)

    def __sub__(self, other):
        return self + other.scale(LaurentPoly.const(-1))

    def scale(self, p: LaurentPoly) -> "AntisphericalElement":
        return AntisphericalElement({w: q * p for w, q in self._c.items()}, self.J)

    def __eq__(self, other):
        if not isinstance(other, AntisphericalElement):
            return NotImplemented
        return self.J == other.J and self._c == other._c

    def __repr__(self):
        if not self._c:
            return "0"
        return " + ".join(f"({p})N[{w}]" for w, p in self.items())


def antispherical_act_bs_gen(alg: HeckeAlgebra, elem: AntisphericalElement,
                             i: int) -> AntisphericalElement:
    """Right action of the Bott-Samelson generator: N_y (H_s + v).

    The quotient rule: N_{ys} + v N_y if ys > y and ys in ^J W;
    N_{ys} + v^-1 N_y if ys < y; 0 on the y-term if ys > y leaves ^J W.
    """
    sys = alg.system
    out = AntisphericalElement({}, elem.J)
    for y, c in elem.items():
        ys = sys.right_multiply_gen(y, i)
        if ys.length < y.length:
            out = out + AntisphericalElement(
                {ys: c, y: c * VINV}, elem.J)
        elif sys.is_min_coset_rep(ys, elem.J):
            out = out + AntisphericalElement({ys: c, y: c * V}, elem.J)
        # else: the term dies (u H-bar_s with u = -v kills it)
    return out
