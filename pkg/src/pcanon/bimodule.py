"""Bott-Samelson bimodules over R = Sym(V*) as free graded left modules.

B(word) has left basis indexed by 01-tuples eps: slot i holds 1 when
eps_i = 0 and delta_{s_i} = alpha_{s_i}/2 when eps_i = 1.  The basis
element eps sits in (shifted) degree 2*wt(eps) - len(word).  The right
R-action is encoded by one matrix per coordinate of V*, computed by the
splitting g = (g + s g)/2 + Demazure_s(g) * delta_s of the last slot.

Maps between Bott-Samelson bimodules are matrices with respect to the
left bases.  The five generator morphisms and their composites (light
leaves, intersection forms) all live here and in `leaves`.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import InputError, InternalInconsistencyError
from .linalg import nullspace
from .mpoly import MultiPoly
from .realization import Realization


def _as_fraction_tuple(vec) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in vec)


class SoergelCategory:
    """Bimodule computations for one realization (with memo tables).

    The realization must be over a characteristic-zero ring with 2
    invertible (the slot splitting uses delta_s = alpha_s / 2).
    """

    def __init__(self, real: Realization):
        if real.ring.tag == "GF":
            raise InputError("bimodule layer works over characteristic 0; "
                             "reduce Gram matrices mod p downstream")
        if real.ring.tag == "ZZ":
            raise InputError("bimodule layer requires 2 invertible "
                             "(use Q or Z[1/2])")
        self.real = real
        self.system = real.system
        self.nvars = real.rank
        self.ngens = real.gcm.rank
        for s in range(self.ngens):
            if all(Fraction(x) == 0 for x in real.roots[s]):
                raise InputError("realization has a zero root")
        self._alpha = [MultiPoly.linear(_as_fraction_tuple(real.roots[s]))
                       for s in range(self.ngens)]
        self._sub_forms: dict[int, list[MultiPoly]] = {}
        self._bimods: dict[tuple[int, ...], BSBimodule] = {}
        self._braids: dict[tuple[int, int], "BimoduleMap"] = {}
        self._rex_cache: dict[tuple[tuple[int, ...], tuple[int, ...]],
                              tuple["BimoduleMap", "BimoduleMap"]] = {}

    # -- polynomial action ------------------------------------------------

    def alpha(self, s: int) -> MultiPoly:
        return self._alpha[s]

    def delta(self, s: int) -> MultiPoly:
        return self._alpha[s].scale(Fraction(1, 2))

    def _forms(self, s: int) -> list[MultiPoly]:
        forms = self._sub_forms.get(s)
        if forms is None:
            n = self.nvars
            coroot = _as_fraction_tuple(self.real.coroots[s])
            forms = [MultiPoly.variable(n, i) - self._alpha[s].scale(coroot[i])
                     for i in range(n)]
            self._sub_forms[s] = forms
        return forms

    def act_gen(self, s: int, p: MultiPoly) -> MultiPoly:
        """s . p, via x_i -> x_i - <x_i, coroot_s> alpha_s."""
        return p.subs_linear(self._forms(s))

    def act_word(self, word, p: MultiPoly) -> MultiPoly:
        """(s_1 ... s_k) . p = s_1 . (s_2 . ( ... . p))."""
        for s in reversed(word):
            p = self.act_gen(s, p)
        return p

    def demazure(self, p: MultiPoly, s: int) -> MultiPoly:
        """(p - s.p) / alpha_s; exact by s-antiinvariance of the numerator."""
        num = p - self.act_gen(s, p)
        q = num.divexact_linear(self._alpha[s])
        if q is None:
            raise InternalInconsistencyError("Demazure division not exact")
        return q

    def split_invariant(self, p: MultiPoly, s: int) -> tuple[MultiPoly, MultiPoly]:
        """p = P + Q delta_s with P, Q s-invariant: P = (p + s.p)/2,
        Q = Demazure_s(p)."""
        sp = self.act_gen(s, p)
        return (p + sp).scale(Fraction(1, 2)), self.demazure(p, s)

    # -- bimodules -------------------------------------------------------------

    def bimodule(self, word) -> "BSBimodule":
        word = tuple(word)
        got = self._bimods.get(word)
        if got is None:
            got = BSBimodule(self, word)
            self._bimods[word] = got
        return got

    # -- elementary maps ----------------------------------------------------------

    def identity(self, word) -> "BimoduleMap":
        b = self.bimodule(word)
        n = b.dim
        one = MultiPoly.const(self.nvars, 1)
        zero = MultiPoly.zero(self.nvars)
        mat = [[one if i == j else zero for j in range(n)] for i in range(n)]
        return BimoduleMap(b, b, 0, mat)

    def poly_map(self, word, p: MultiPoly) -> "BimoduleMap":
        """Left multiplication by p on B(word)."""
        b = self.bimodule(word)
        zero = MultiPoly.zero(self.nvars)
        mat = [[p if i == j else zero for j in range(b.dim)]
               for i in range(b.dim)]
        return BimoduleMap(b, b, p.graded_degree(), mat)

    def upper_dot(self, s: int) -> "BimoduleMap":
        """m_s : B(s) -> B(), f (x) g -> fg; degree +1."""
        src = self.bimodule((s,))
        tgt = self.bimodule(())
        one = MultiPoly.const(self.nvars, 1)
        return BimoduleMap(tgt, src, 1, [[one, self.delta(s)]])

    def lower_dot(self, s: int) -> "BimoduleMap":
        """delta_s : B() -> B(s), 1 -> (alpha (x) 1 + 1 (x) alpha)/2; degree +1."""
        src = self.bimodule(())
        tgt = self.bimodule((s,))
        one = MultiPoly.const(self.nvars, 1)
        return BimoduleMap(tgt, src, 1, [[self.delta(s)], [one]])

    def split_trivalent(self, s: int) -> "BimoduleMap":
        """t_1 : B(s) -> B(s,s), f (x) g -> f (x) 1 (x) g; degree -1."""
        src = self.bimodule((s,))
        tgt = self.bimodule((s, s))
        one = MultiPoly.const(self.nvars, 1)
        zero = MultiPoly.zero(self.nvars)
        # rows in basis order (0,0),(0,1),(1,0),(1,1)
        mat = [[one, zero], [zero, one], [zero, zero], [zero, zero]]
        return BimoduleMap(tgt, src, -1, mat)

    def merge_trivalent(self, s: int) -> "BimoduleMap":
        """t_2 : B(s,s) -> B(s), f (x) g (x) h -> f Demazure_s(g) (x) h;
        degree -1."""
        src = self.bimodule((s, s))
        tgt = self.bimodule((s,))
        one = MultiPoly.const(self.nvars, 1)
        zero = MultiPoly.zero(self.nvars)
        mat = [[zero, zero, one, zero], [zero, zero, zero, one]]
        return BimoduleMap(tgt, src, -1, mat)

    def cap(self, s: int) -> "BimoduleMap":
        """m_s<-1> o t_2 : B(s,s) -> B(); degree 0."""
        return self.compose(self.upper_dot(s), self.merge_trivalent(s))

    def cup(self, s: int) -> "BimoduleMap":
        """t_1 o delta_s : B() -> B(s,s); degree 0."""
        return self.compose(self.split_trivalent(s), self.lower_dot(s))

    def all_dots(self, word) -> "BimoduleMap":
        """m_word = m_{s_1} (x) ... (x) m_{s_n} : B(word) -> B()."""
        b = self.bimodule(word)
        row = []
        for eps in b.basis:
            p = MultiPoly.const(self.nvars, 1)
            for i, bit in enumerate(eps):
                if bit:
                    p = p * self.delta(word[i])
            row.append(p)
        return BimoduleMap(self.bimodule(()), b, len(word), [row])

    # -- composition / tensor ---------------------------------------------------------

    def compose(self, f: "BimoduleMap", g: "BimoduleMap") -> "BimoduleMap":
        """f o g."""
        if g.target is not f.source:
            raise InputError("compose: target/source mismatch")
        a, b = f.matrix, g.matrix
        rows, mid, cols = f.target.dim, f.source.dim, g.source.dim
        zero = MultiPoly.zero(self.nvars)
        mat = [[zero] * cols for _ in range(rows)]
        for k in range(mid):
            bk = b[k]
            for i in range(rows):
                aik = a[i][k]
                if not aik:
                    continue
                row = mat[i]
                for j in range(cols):
                    if bk[j]:
                        row[j] = row[j] + aik * bk[j]
        return BimoduleMap(f.target, g.source, f.degree + g.degree, mat)

    def tensor(self, f: "BimoduleMap", g: "BimoduleMap") -> "BimoduleMap":
        """f (x) g; the middle coefficients of g are pushed through the
        right action of f's target."""
        src = self.bimodule(f.source.word + g.source.word)
        tgt = self.bimodule(f.target.word + g.target.word)
        zero = MultiPoly.zero(self.nvars)
        mat = [[zero] * src.dim for _ in range(tgt.dim)]
        fcols = [[f.matrix[r][c] for r in range(f.target.dim)]
                 for c in range(f.source.dim)]
        for c2 in range(g.source.dim):
            for r2 in range(g.target.dim):
                coeff = g.matrix[r2][c2]
                if not coeff:
                    continue
                for c1 in range(f.source.dim):
                    vec = f.target.rightmul_vector(fcols[c1], coeff)
                    for r1, entry in enumerate(vec):
                        if entry:
                            mat[r1 * g.target.dim + r2][c1 * g.source.dim + c2] = \
                                mat[r1 * g.target.dim + r2][c1 * g.source.dim + c2] + entry
        return BimoduleMap(tgt, src, f.degree + g.degree, mat)

    def tensor_id_left(self, word, g: "BimoduleMap") -> "BimoduleMap":
        return self.tensor(self.identity(word), g)

    # -- braid morphisms -----------------------------------------------------------------

    def braid_words(self, s: int, t: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        m = self.system.m[s][t]
        if m == 0:
            raise InputError("braid map needs m_st finite")
        shat = tuple(s if k % 2 == 0 else t for k in range(m))
        that = tuple(t if k % 2 == 0 else s for k in range(m))
        return shat, that

    def braid(self, s: int, t: int) -> "BimoduleMap":
        """j_{s,t} : B(s,t,s,...) -> B(t,s,t,...), the unique degree-0 map
        acting as the identity in top degree.

        Found as the kernel of the right-action intertwining equations in
        degree 0 (sparse exact solve); the normalization pins the constant
        coefficient on the all-zeros basis element to 1.
        """
        key = (s, t)
        got = self._braids.get(key)
        if got is not None:
            return got
        shat, that = self.braid_words(s, t)
        sols = self.hom_space_raw(shat, that, 0)
        if len(sols) != 1:
            raise InternalInconsistencyError(
                f"braid Hom space has dimension {len(sols)}, expected 1")
        jmap = sols[0]
        src = self.bimodule(shat)
        zidx = src.index[(0,) * len(shat)]
        tidx = self.bimodule(that).index[(0,) * len(that)]
        c = jmap.matrix[tidx][zidx].constant_term()
        if not c:
            raise InternalInconsistencyError(
                "braid solution has no top-degree identity component")
        inv = Fraction(1) / c
        mat = [[p.scale(inv) for p in row] for row in jmap.matrix]
        out = BimoduleMap(jmap.target, jmap.source, 0, mat)
        self._braids[key] = out
        return out

    # -- Hom spaces ---------------------------------------------------------------------------

    def hom_space_raw(self, vword, wword, d: int) -> list["BimoduleMap"]:
        """All degree-d bimodule maps B(vword) -> B(wword): the kernel of
        A . M_i^src - M_i^tgt . A = 0 solved exactly over Q."""
        src = self.bimodule(tuple(vword))
        tgt = self.bimodule(tuple(wword))
        nv = self.nvars
        monos_cache: dict[int, list[tuple[int, ...]]] = {}

        def monomials(deg: int) -> list[tuple[int, ...]]:
            if deg not in monos_cache:
                monos_cache[deg] = sorted(
                    e for e in itertools.product(range(deg + 1), repeat=nv)
                    if sum(e) == deg)
            return monos_cache[deg]

        unknowns: list[tuple[int, int, tuple[int, ...]]] = []
        slot: dict[tuple[int, int, tuple[int, ...]], int] = {}
        for r in range(tgt.dim):
            for c in range(src.dim):
                dd = d + src.degrees[c] - tgt.degrees[r]
                if dd < 0 or dd % 2:
                    continue
                for mono in monomials(dd // 2):
                    slot[(r, c, mono)] = len(unknowns)
                    unknowns.append((r, c, mono))
        if not unknowns:
            return []
        equations: dict[tuple, dict[int, Fraction]] = {}

        def put(eqkey, var, coeff):
            row = equations.setdefault(eqkey, {})
            val = row.get(var, Fraction(0)) + coeff
            if val:
                row[var] = val
            else:
                row.pop(var, None)

        for i in range(nv):
            msrc = src.right_matrix(i)
            mtgt = tgt.right_matrix(i)
            for r in range(tgt.dim):
                for c in range(src.dim):
                    # sum_k A[r][k] msrc[k][c] - mtgt[r][k] A[k][c] = 0
                    for k in range(src.dim):
                        known = msrc[k][c]
                        if not known:
                            continue
                        dd = d + src.degrees[k] - tgt.degrees[r]
                        if dd < 0 or dd % 2:
                            continue
                        for mono in monomials(dd // 2):
                            var = slot[(r, k, mono)]
                            for e, cf in known.terms.items():
                                tot = tuple(a + b for a, b in zip(mono, e))
                                put((i, r, c, tot), var, cf)
                    for k in range(tgt.dim):
                        known = mtgt[r][k]
                        if not known:
                            continue
                        dd = d + src.degrees[c] - tgt.degrees[k]
                        if dd < 0 or dd % 2:
                            continue
                        for mono in monomials(dd // 2):
                            var = slot[(k, c, mono)]
                            for e, cf in known.terms.items():
                                tot = tuple(a + b for a, b in zip(mono, e))
                                put((i, r, c, tot), var, -cf)
        basis = nullspace(list(equations.values()), len(unknowns))
        out = []
        zero = MultiPoly.zero(nv)
        for vec in basis:
            mat = [[zero] * src.dim for _ in range(tgt.dim)]
            for var, coeff in vec.items():
                r, c, mono = unknowns[var]
                mat[r][c] = mat[r][c] + MultiPoly(nv, {mono: coeff})
            out.append(BimoduleMap(tgt, src, d, mat))
        return out

    def hom_space(self, vword, wword, d: int) -> list["BimoduleMap"]:
        """Basis of degree-d maps modulo right-R_+ multiples of lower maps.

        The graded count over all d is the free-monodromic Hom rank, i.e.
        the Hecke pairing of the two Bott-Samelson elements.
        """
        raw = self.hom_space_raw(vword, wword, d)
        if not raw:
            return []
        src = self.bimodule(tuple(vword))
        tgt = self.bimodule(tuple(wword))
        nv = self.nvars
        dmin = -(len(tuple(vword)) + len(tuple(wword)))

        key_index: dict[tuple, int] = {}

        def hash_key(r, c, e) -> int:
            k = (r, c, e)
            got = key_index.get(k)
            if got is None:
                got = len(key_index)
                key_index[k] = got
            return got

        def vectorize(m: "BimoduleMap") -> dict[int, Fraction]:
            out: dict[int, Fraction] = {}
            for r in range(tgt.dim):
                for c in range(src.dim):
                    for e, cf in m.matrix[r][c].terms.items():
                        out[hash_key(r, c, e)] = cf
            return out

        from .linalg import add_to_span
        pivots: dict[int, dict[int, Fraction]] = {}
        for lower_d in range(d - 2, dmin - 1, -2):
            for h in self.hom_space_raw(vword, wword, lower_d):
                deg = (d - lower_d) // 2
                for mono in sorted(
                        e for e in itertools.product(range(deg + 1), repeat=nv)
                        if sum(e) == deg):
                    p = MultiPoly(nv, {mono: Fraction(1)})
                    shifted = self.rightmul_map(h, p)
                    add_to_span(vectorize(shifted), pivots)
        out = []
        for m in raw:
            if add_to_span(vectorize(m), pivots):
                out.append(m)
        return out

    def rightmul_map(self, f: "BimoduleMap", p: MultiPoly) -> "BimoduleMap":
        """The map x -> f(x) . p (equals x -> f(x . p) for bimodule maps)."""
        cols = [[f.matrix[r][c] for r in range(f.target.dim)]
                for c in range(f.source.dim)]
        newcols = [f.target.rightmul_vector(col, p) for col in cols]
        mat = [[newcols[c][r] for c in range(f.source.dim)]
               for r in range(f.target.dim)]
        return BimoduleMap(f.target, f.source,
                           f.degree + p.graded_degree(), mat)

    def graded_hom_dimensions(self, vword, wword) -> dict[int, int]:
        """dim of hom_space per degree, over the full possible range."""
        lo = -(len(tuple(vword)) + len(tuple(wword)))
        hi = len(tuple(vword)) + len(tuple(wword))
        out = {}
        for d in range(lo, hi + 1):
            k = len(self.hom_space(vword, wword, d))
            if k:
                out[d] = k
        return out


class BSBimodule:
    """Free graded left R-module of rank 2^len(word) with right action."""

    def __init__(self, cat: SoergelCategory, word: tuple[int, ...]):
        for s in word:
            if not 0 <= s < cat.ngens:
                raise InputError(f"letter {s} outside generator range")
        self.cat = cat
        self.word = word
        n = len(word)
        self.basis = list(itertools.product((0, 1), repeat=n))
        self.index = {eps: i for i, eps in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.degrees = [2 * sum(eps) - n for eps in self.basis]
        self._right: dict[int, list[list[MultiPoly]]] = {}

    def __repr__(self):
        return f"BS{self.word}"

    # -- right action ----------------------------------------------------------

    def rightmul_basis(self, eps: tuple[int, ...], g: MultiPoly
                       ) -> dict[tuple[int, ...], MultiPoly]:
        """c_eps . g as {eps': coefficient}, by slot straightening."""
        cat = self.cat
        items: dict[tuple[int, ...], MultiPoly] = {(): g}
        for k in range(len(self.word) - 1, -1, -1):
            s = self.word[k]
            new: dict[tuple[int, ...], MultiPoly] = {}
            for suffix, poly in items.items():
                if eps[k]:
                    poly = poly * cat.delta(s)
                inv, dem = cat.split_invariant(poly, s)
                if inv:
                    key = (0,) + suffix
                    new[key] = new.get(key, MultiPoly.zero(cat.nvars)) + inv
                if dem:
                    key = (1,) + suffix
                    new[key] = new.get(key, MultiPoly.zero(cat.nvars)) + dem
            items = new
        return {k: v for k, v in items.items() if v}

    def right_matrix(self, i: int) -> list[list[MultiPoly]]:
        """Right action of the coordinate generator x_i (column-indexed by
        source basis)."""
        got = self._right.get(i)
        if got is None:
            nv = self.cat.nvars
            xi = MultiPoly.variable(nv, i)
            zero = MultiPoly.zero(nv)
            mat = [[zero] * self.dim for _ in range(self.dim)]
            for c, eps in enumerate(self.basis):
                for eps2, val in self.rightmul_basis(eps, xi).items():
                    mat[self.index[eps2]][c] = val
            self._right[i] = mat
            got = mat
        return got

    def rightmul_vector(self, vec: list[MultiPoly], g: MultiPoly
                        ) -> list[MultiPoly]:
        """(sum_i vec[i] c_i) . g, as a coefficient vector.

        Constants scale; monomials chain through the cached right-action
        matrices; general polynomials sum over monomials.
        """
        nv = self.cat.nvars
        zero = MultiPoly.zero(nv)
        if g.is_constant():
            c = g.constant_term()
            if not c:
                return [zero] * self.dim
            return [p.scale(c) for p in vec]
        out = [zero] * self.dim
        for mono, coeff in g.terms.items():
            cur = [p.scale(coeff) for p in vec]
            for i, k in enumerate(mono):
                for _ in range(k):
                    cur = self._matvec(self.right_matrix(i), cur)
            out = [a + b for a, b in zip(out, cur)]
        return out

    def _matvec(self, mat: list[list[MultiPoly]], vec: list[MultiPoly]
                ) -> list[MultiPoly]:
        nv = self.cat.nvars
        out = [MultiPoly.zero(nv)] * self.dim
        for c, val in enumerate(vec):
            if not val:
                continue
            for r in range(self.dim):
                entry = mat[r][c]
                if entry:
                    out[r] = out[r] + entry * val
        return out

    def graded_rank(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out


class BimoduleMap:
    """Graded bimodule map as a matrix over R w.r.t. the left bases.

    matrix[r][c] is the coefficient of target basis r in the image of
    source basis c; homogeneous of degree
    degree + source.degrees[c] - target.degrees[r].
    """

    __slots__ = ("source", "target", "degree", "matrix")

    def __init__(self, target: BSBimodule, source: BSBimodule, degree: int,
                 matrix):
        self.target = target
        self.source = source
        self.degree = degree
        self.matrix = matrix

    def check(self) -> None:
        """Validate homogeneity and right-action compatibility (slow)."""
        cat = self.source.cat
        for r in range(self.target.dim):
            for c in range(self.source.dim):
                p = self.matrix[r][c]
                if not p:
                    continue
                want = self.degree + self.source.degrees[c] \
                    - self.target.degrees[r]
                if want < 0 or want % 2 or not p.is_homogeneous(want // 2):
                    raise InternalInconsistencyError(
                        f"entry ({r},{c}) not homogeneous of degree {want}")
        for i in range(cat.nvars):
            msrc = self.source.right_matrix(i)
            mtgt = self.target.right_matrix(i)
            for r in range(self.target.dim):
                for c in range(self.source.dim):
                    acc = MultiPoly.zero(cat.nvars)
                    for k in range(self.source.dim):
                        if self.matrix[r][k] and msrc[k][c]:
                            acc = acc + self.matrix[r][k] * msrc[k][c]
                    for k in range(self.target.dim):
                        if mtgt[r][k] and self.matrix[k][c]:
                            acc = acc - mtgt[r][k] * self.matrix[k][c]
                    if acc:
                        raise InternalInconsistencyError(
                            "map does not commute with the right action")

    def entry(self, r: int, c: int) -> MultiPoly:
        return self.matrix[r][c]

    def __repr__(self):
        return (f"BimoduleMap({self.source.word} -> {self.target.word}, "
                f"deg {self.degree})")
