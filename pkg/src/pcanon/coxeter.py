"""Crystallographic Coxeter systems with exact element arithmetic.

Group elements are canonical ShortLex-minimal reduced words.  Equality of
group elements is equality of normal forms, computed with the faithful
integral reflection representation on the root lattice:

    s_i(alpha_j) = alpha_j - a_ij * alpha_i.

A word letter is the *index* of a generator in the system's ordering; the
ordering is the order of the underlying GCM's index set, so ShortLex
output is stable only for a fixed ordering.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .cartan import (GeneralizedCartanMatrix, KacMoodyRootDatum,
                     coxeter_number, highest_root, simply_connected_datum)
from .errors import InputError, ResourceCapError


@dataclass(frozen=True)
class CoxeterElement:
    """A group element: ShortLex-minimal reduced word of generator indices."""

    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    def __repr__(self) -> str:
        return "e" if not self.word else "".join(f"s{i}" for i in self.word)


IDENTITY = CoxeterElement(())


def _mstable_from_gcm(gcm: GeneralizedCartanMatrix) -> tuple[tuple[int, ...], ...]:
    """Crystallographic rule: a_st*a_ts = 0,1,2,3,>=4 -> m = 2,3,4,6,inf(0)."""
    table = {0: 2, 1: 3, 2: 4, 3: 6}
    n = gcm.rank
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(1)
            else:
                prod = gcm.entries[i][j] * gcm.entries[j][i]
                row.append(table.get(prod, 0))  # 0 encodes infinity
        rows.append(tuple(row))
    return tuple(rows)


class CoxeterSystem:
    """A Coxeter system derived from a generalized Cartan matrix."""

    def __init__(self, gcm: GeneralizedCartanMatrix):
        self.gcm = gcm
        self.labels = gcm.labels
        self.rank = gcm.rank
        self.m = _mstable_from_gcm(gcm)
        self._mat_cache: dict[tuple[int, ...], tuple[tuple[int, ...], ...]] = {}
        self._nf_cache: dict[tuple[int, ...], CoxeterElement] = {}
        self._bruhat_cache: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}
        self._identity_mat = tuple(
            tuple(1 if i == j else 0 for j in range(self.rank))
            for i in range(self.rank))

    # -- basic structure ------------------------------------------------

    def order(self, i: int, j: int) -> int:
        """m_ij; 0 means infinite."""
        return self.m[i][j]

    def is_finite(self) -> bool:
        return self.gcm.is_finite_type()

    def reordered(self, perm: tuple[int, ...]) -> "CoxeterSystem":
        """Same system with generators reindexed by perm (new i = old perm[i])."""
        if sorted(perm) != list(range(self.rank)):
            raise InputError("ordering must be a permutation of the index set")
        return CoxeterSystem(self.gcm.submatrix(tuple(perm)))

    @property
    def identity(self) -> CoxeterElement:
        return IDENTITY

    def generator(self, i: int) -> CoxeterElement:
        return CoxeterElement((i,))

    # -- reflection representation ---------------------------------------

    def _rightmul_gen(self, mat, i: int):
        """mat * R_i via column operations: col_j -= a_ij col_i (j != i),
        col_i -> -col_i."""
        a = self.gcm.entries[i]
        n = self.rank
        cols = [[mat[k][j] for k in range(n)] for j in range(n)]
        coli = cols[i]
        newcols = []
        for j in range(n):
            if j == i:
                newcols.append([-x for x in coli])
            elif a[j]:
                newcols.append([cols[j][k] - a[j] * coli[k] for k in range(n)])
            else:
                newcols.append(cols[j])
        return tuple(tuple(newcols[j][k] for j in range(n)) for k in range(n))

    def matrix(self, word: tuple[int, ...]):
        """Matrix of the word's product acting on the root lattice."""
        if word in self._mat_cache:
            return self._mat_cache[word]
        mat = self._identity_mat
        for i in word:
            mat = self._rightmul_gen(mat, i)
        if len(word) <= 16:
            self._mat_cache[word] = mat
        return mat

    @staticmethod
    def _column_negative(mat, j: int) -> bool:
        """Is column j of mat a negative root vector?"""
        col = [row[j] for row in mat]
        if all(x == 0 for x in col):
            raise AssertionError("zero column in reflection matrix")
        return all(x <= 0 for x in col)

    # -- normal forms -----------------------------------------------------

    def normal_form(self, word) -> CoxeterElement:
        """ShortLex-least reduced word of the word's product; idempotent."""
        word = tuple(word)
        for i in word:
            if not 0 <= i < self.rank:
                raise InputError(f"letter {i} outside the generator index range")
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        # matrix of the inverse element: product over the reversed word
        inv = self.matrix(tuple(reversed(word)))
        out: list[int] = []
        n = self.rank
        while inv != self._identity_mat:
            for i in range(n):
                if self._column_negative(inv, i):
                    out.append(i)
                    inv = self._rightmul_gen(inv, i)
                    break
            else:
                raise AssertionError("no descent found for a non-identity matrix")
        result = CoxeterElement(tuple(out))
        if len(word) <= 16:
            self._nf_cache[word] = result
        return result

    def element(self, word) -> CoxeterElement:
        return self.normal_form(word)

    def multiply(self, x: CoxeterElement, y: CoxeterElement) -> CoxeterElement:
        return self.normal_form(x.word + y.word)

    def inverse(self, x: CoxeterElement) -> CoxeterElement:
        return self.normal_form(tuple(reversed(x.word)))

    def left_descents(self, x: CoxeterElement) -> list[int]:
        mat = self.matrix(tuple(reversed(x.word)))  # matrix of x^-1
        return [i for i in range(self.rank) if self._column_negative(mat, i)]

    def right_descents(self, x: CoxeterElement) -> list[int]:
        mat = self.matrix(x.word)
        return [i for i in range(self.rank) if self._column_negative(mat, i)]

    def left_multiply_gen(self, i: int, x: CoxeterElement) -> CoxeterElement:
        return self.normal_form((i,) + x.word)

    def right_multiply_gen(self, x: CoxeterElement, i: int) -> CoxeterElement:
        return self.normal_form(x.word + (i,))

    # -- Bruhat order ------------------------------------------------------

    def bruhat_leq(self, x: CoxeterElement, y: CoxeterElement) -> bool:
        """Subword property, via the standard descent recursion."""
        if x.length > y.length:
            return False
        if x == y:
            return True
        if y.length == 0:
            return x.length == 0
        key = (x.word, y.word)
        cached = self._bruhat_cache.get(key)
        if cached is not None:
            return cached
        i = self.left_descents(y)[0]
        sy = self.left_multiply_gen(i, y)
        sx = self.left_multiply_gen(i, x)
        if sx.length < x.length:
            out = self.bruhat_leq(sx, sy)
        else:
            out = self.bruhat_leq(x, sy)
        self._bruhat_cache[key] = out
        return out

    def bruhat_interval_below(self, w: CoxeterElement) -> list[CoxeterElement]:
        """All x <= w, sorted by (length, word)."""
        out = [x for x in self.enumerate_elements(w.length)
               if self.bruhat_leq(x, w)]
        return out

    # -- enumeration ---------------------------------------------------------

    def enumerate_elements(self, max_length: int, cap: int = 100_000
                           ) -> list[CoxeterElement]:
        """All elements of length <= max_length, sorted by (length, ShortLex)."""
        if max_length < 0:
            raise InputError("max_length must be >= 0")
        strata: list[list[CoxeterElement]] = [[IDENTITY]]
        seen = {IDENTITY}
        total = 1
        for ell in range(1, max_length + 1):
            new: set[CoxeterElement] = set()
            for w in strata[ell - 1]:
                for i in range(self.rank):
                    nxt = self.left_multiply_gen(i, w)
                    if nxt.length == ell:
                        new.add(nxt)
            total += len(new)
            if total > cap:
                raise ResourceCapError(
                    f"enumeration exceeded cap of {cap} elements")
            stratum = sorted(new, key=lambda x: x.word)
            strata.append(stratum)
            seen.update(stratum)
            if not stratum:
                break
        return [w for stratum in strata for w in stratum]

    def longest_element(self) -> CoxeterElement:
        if not self.is_finite():
            raise InputError("longest element requires a finite system")
        ws = [IDENTITY]
        while True:
            nxt = None
            w = ws[-1]
            for i in range(self.rank):
                cand = self.left_multiply_gen(i, w)
                if cand.length > w.length:
                    nxt = cand
                    break
            if nxt is None:
                return w
            ws.append(nxt)

    # -- reduced words and cosets ---------------------------------------------

    def reduced_words(self, x: CoxeterElement) -> list[tuple[int, ...]]:
        """All reduced words for x (exponential; intended for short elements)."""
        if x.length == 0:
            return [()]
        out = []
        for i in self.left_descents(x):
            rest = self.left_multiply_gen(i, x)
            out.extend((i,) + tail for tail in self.reduced_words(rest))
        return sorted(out)

    def parabolic_is_finite(self, J) -> bool:
        return self.gcm.submatrix(tuple(sorted(J))).is_finite_type()

    def is_min_coset_rep(self, w: CoxeterElement, J) -> bool:
        """True iff w is the minimal element of W_J w; requires W_J finite."""
        J = tuple(sorted(J))
        if not self.parabolic_is_finite(J):
            raise InputError("W_J must be finite")
        descents = set(self.left_descents(w))
        return not (descents & set(J))

    def min_coset_decompose(self, w: CoxeterElement, J
                            ) -> tuple[int, CoxeterElement]:
        """Write w = u*y with u in W_J, y minimal in W_J w; return (l(u), y)."""
        J = set(J)
        if not self.parabolic_is_finite(tuple(sorted(J))):
            raise InputError("W_J must be finite")
        count = 0
        y = w
        while True:
            ds = [i for i in self.left_descents(y) if i in J]
            if not ds:
                return count, y
            y = self.left_multiply_gen(ds[0], y)
            count += 1


def coxeter_from_gcm(gcm: GeneralizedCartanMatrix) -> CoxeterSystem:
    return CoxeterSystem(gcm)


# -- affine Weyl groups ---------------------------------------------------


class AffineWeylGroup:
    """W = W_f x| X_*(T) for a finite-type simply connected root datum.

    The Coxeter generators are the reflections in the walls of the
    fundamental alcove {v : 0 <= <v, alpha> <= 1 for all positive roots},
    ordered with the affine node "0" first and the finite generators after
    it in datum order (so the finite generator labelled i sits at index i+1
    unless reordered).

    Supports the two-way translation embedding between group elements and
    pairs (finite Weyl part, translation in the coroot lattice).
    """

    def __init__(self, datum: KacMoodyRootDatum):
        gcm = datum.gcm
        if not gcm.is_finite_type():
            raise InputError("affinization requires a finite-type datum")
        if len(gcm.components()) != 1:
            raise InputError("affinization requires an indecomposable datum")
        from .cartan import affinize
        self.datum = datum
        self.finite_gcm = gcm
        self.finite_system = CoxeterSystem(gcm)
        self.system = CoxeterSystem(affinize(gcm))
        self.rank = gcm.rank
        self.h = coxeter_number(gcm)
        n = self.rank
        # roots as linear functionals on V = Q tensor X_*(T) (dual coords)
        self._roots = [tuple(datum.simple_roots[j]) for j in range(n)]
        self._coroots = [tuple(datum.simple_coroots[j]) for j in range(n)]
        theta = highest_root(gcm)
        eps = gcm.symmetrizer()
        bform = [[eps[i] * gcm.entries[i][j] for j in range(n)] for i in range(n)]
        tt = sum(theta[i] * bform[i][j] * theta[j]
                 for i in range(n) for j in range(n))
        self.theta = tuple(sum(theta[j] * self._roots[j][k] for j in range(n))
                           for k in range(datum.lattice_rank))
        cov = []
        for i in range(n):
            num = 2 * theta[i] * eps[i]
            if num % tt:
                raise InputError("non-integral highest coroot")
            cov.append(num // tt)
        self.theta_coroot = tuple(
            sum(cov[i] * self._coroots[i][k] for i in range(n))
            for k in range(datum.lattice_rank))
        # interior alcove point rho^vee / h
        self._rho_vee = self._solve_rho_vee()
        self._wf_by_matrix: dict[tuple, CoxeterElement] | None = None

    # index conventions: affine system letter 0 = affine node, letter i+1 =
    # finite generator i

    def _solve_rho_vee(self) -> tuple[Fraction, ...]:
        """The vector with <rho_vee, alpha_j> = 1 for all simple roots."""
        n = self.rank
        m = [[Fraction(self._roots[j][k]) for k in range(n)] for j in range(n)]
        rhs = [Fraction(1)] * n
        # Gaussian elimination (the root matrix is invertible in finite type)
        for col in range(n):
            piv = next(r for r in range(col, n) if m[r][col] != 0)
            m[col], m[piv] = m[piv], m[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
            inv = 1 / m[col][col]
            m[col] = [x * inv for x in m[col]]
            rhs[col] *= inv
            for r in range(n):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
                    rhs[r] -= f * rhs[col]
        return tuple(rhs)

    # -- affine action on V -------------------------------------------------

    def _pair_root(self, root, v):
        return sum(Fraction(a) * b for a, b in zip(root, v))

    def _finite_reflect(self, j: int, v):
        c = self._pair_root(self._roots[j], v)
        return tuple(x - c * Fraction(cr) for x, cr in zip(v, self._coroots[j]))

    def _apply_letter(self, letter: int, v):
        """Action of an affine-system generator on a point of V."""
        if letter == 0:
            c = self._pair_root(self.theta, v) - 1
            return tuple(x - c * Fraction(cr)
                         for x, cr in zip(v, self.theta_coroot))
        return self._finite_reflect(letter - 1, v)

    def _letter_linear(self, letter: int):
        """(matrix, translation) of a generator acting affinely on V."""
        n = self.datum.lattice_rank
        basis = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        zero = tuple(Fraction(0) for _ in range(n))
        tau = self._apply_letter(letter, zero)
        cols = [tuple(a - b for a, b in zip(self._apply_letter(letter, e), tau))
                for e in basis]
        mat = tuple(tuple(cols[j][k] for j in range(n)) for k in range(n))
        return mat, tau

    def affine_transform(self, w: CoxeterElement):
        """(M, tau) with w acting on V as v -> M v + tau; exact rationals."""
        n = self.datum.lattice_rank
        mat = tuple(tuple(Fraction(1 if i == j else 0) for j in range(n))
                    for i in range(n))
        tau = tuple(Fraction(0) for _ in range(n))
        for letter in w.word:
            gmat, gtau = self._letter_linear(letter)
            # compose: current after g on the right: T' = T o g
            new_mat = tuple(
                tuple(sum(mat[i][k] * gmat[k][j] for k in range(n))
                      for j in range(n)) for i in range(n))
            new_tau = tuple(
                sum(mat[i][k] * gtau[k] for k in range(n)) + tau[i]
                for i in range(n))
            mat, tau = new_mat, new_tau
        return mat, tau

    def _wf_lookup(self) -> dict[tuple, CoxeterElement]:
        if self._wf_by_matrix is None:
            table = {}
            n = self.datum.lattice_rank
            for u in self.finite_system.enumerate_elements(
                    self.finite_system.longest_element().length):
                basis = [tuple(Fraction(1 if k == i else 0) for k in range(n))
                         for i in range(n)]
                cols = []
                for e in basis:
                    v = e
                    for j in reversed(u.word):
                        v = self._finite_reflect(j, v)
                    cols.append(v)
                mat = tuple(tuple(cols[j][k] for j in range(n))
                            for k in range(n))
                table[mat] = u
            self._wf_by_matrix = table
        return self._wf_by_matrix

    def to_pair(self, w: CoxeterElement) -> tuple[CoxeterElement, tuple[int, ...]]:
        """w = u t_lambda: returns (u in the finite system, lambda in X_*)."""
        mat, tau = self.affine_transform(w)
        u = self._wf_lookup().get(mat)
        if u is None:
            raise AssertionError("linear part not in the finite Weyl group")
        # lambda = u^-1(tau)
        uinv = self.finite_system.inverse(u)
        lam = tau
        for j in reversed(uinv.word):
            lam = self._finite_reflect(j, lam)
        out = []
        for x in lam:
            if x.denominator != 1:
                raise AssertionError("non-integral translation part")
            out.append(int(x))
        return u, tuple(out)

    def from_pair(self, u: CoxeterElement, lam) -> CoxeterElement:
        """Inverse of to_pair: the element u t_lambda as a CoxeterElement."""
        h = self.h
        mu0 = tuple(x / h for x in self._rho_vee)
        # target point (u t_lam)(mu0) = u(mu0 + lam)
        v = tuple(a + Fraction(b) for a, b in zip(mu0, lam))
        for j in reversed(u.word):
            v = self._finite_reflect(j, v)
        word = []
        for _ in range(10_000):
            viol = None
            if self._pair_root(self.theta, v) > 1:
                viol = 0
            else:
                for j in range(self.rank):
                    if self._pair_root(self._roots[j], v) < 0:
                        viol = j + 1
                        break
            if viol is None:
                break
            v = self._apply_letter(viol, v)
            word.append(viol)
        else:
            raise ResourceCapError("alcove walk failed to terminate")
        return self.system.normal_form(tuple(word))

    def translation(self, lam) -> CoxeterElement:
        return self.from_pair(IDENTITY, lam)

    def finite_indices(self) -> tuple[int, ...]:
        """Indices of the finite generators inside the affine system."""
        return tuple(range(1, self.rank + 1))


def affine_weyl_group(datum: KacMoodyRootDatum) -> AffineWeylGroup:
    return AffineWeylGroup(datum)


def affine_weyl_group_of_type(name: str) -> AffineWeylGroup:
    from .cartan import named_gcm
    return AffineWeylGroup(simply_connected_datum(named_gcm(name)))
