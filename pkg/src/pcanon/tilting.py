"""Tilting character data for a reductive group G in characteristic p > h.

Convention map (the Langlands bookkeeping): the group G has root system S
with weight lattice X; the affine Weyl group acting on X by the p-dilated
dot action is W_f x| ZS.  It is realized as the affine Weyl group of the
*dual* root datum (transposed Cartan matrix), whose coroot lattice equals
ZS under the index-preserving identification of generators.  The
antispherical polynomials of that affine system, evaluated at v = 1, are
the tilting multiplicities

    (T(w . 0) : nabla(y . 0)) = n_{y,w}(1)  for  w, y in ^f W.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cartan import (GeneralizedCartanMatrix, KacMoodyRootDatum,
                     coxeter_number, highest_root, positive_roots,
                     simply_connected_datum)
from .coxeter import AffineWeylGroup, CoxeterElement
from .errors import InputError
from .laurent import LaurentPoly
from .pcanonical import PCanonicalBasis
from .realization import QQ, affine_realization


@dataclass(frozen=True)
class RootDatumF:
    """Simply connected semisimple datum for the reductive group itself.

    Weights are coordinate tuples in the fundamental-weight basis, so
    rho = (1, ..., 1) and dominance is coordinatewise nonnegativity.
    """

    gcm: GeneralizedCartanMatrix

    @property
    def rank(self) -> int:
        return self.gcm.rank

    @property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    @property
    def coxeter_number(self) -> int:
        return coxeter_number(self.gcm)

    def simple_root(self, j: int) -> tuple[int, ...]:
        """alpha_j in weight coordinates: the j-th column of the GCM."""
        return tuple(self.gcm.entries[i][j] for i in range(self.rank))

    def positive_coroots(self) -> list[tuple[int, ...]]:
        """All positive coroots as pairing vectors on weight coordinates."""
        eps = self.gcm.symmetrizer()
        n = self.rank
        bform = [[eps[i] * self.gcm.entries[i][j] for j in range(n)]
                 for i in range(n)]
        out = []
        for beta in positive_roots(self.gcm):
            norm = sum(beta[i] * bform[i][j] * beta[j]
                       for i in range(n) for j in range(n))
            vec = []
            for i in range(n):
                num = 2 * beta[i] * eps[i]
                if num % norm:
                    raise InputError("non-integral coroot")
                vec.append(num // norm)
            out.append(tuple(vec))
        return out

    def highest_root_coroot(self) -> tuple[int, ...]:
        """The coroot of the highest root (pairing vector on weights)."""
        theta = highest_root(self.gcm)
        eps = self.gcm.symmetrizer()
        n = self.rank
        bform = [[eps[i] * self.gcm.entries[i][j] for j in range(n)]
                 for i in range(n)]
        norm = sum(theta[i] * bform[i][j] * theta[j]
                   for i in range(n) for j in range(n))
        return tuple(2 * theta[i] * eps[i] // norm for i in range(n))

    def reflect(self, i: int, mu: tuple[int, ...]) -> tuple[int, ...]:
        """s_i(mu) = mu - <mu, coroot_i> alpha_i on weight coordinates."""
        c = mu[i]
        alpha = self.simple_root(i)
        return tuple(m - c * a for m, a in zip(mu, alpha))

    def is_dominant(self, mu) -> bool:
        return all(m >= 0 for m in mu)


def root_datum(name_or_gcm) -> RootDatumF:
    if isinstance(name_or_gcm, GeneralizedCartanMatrix):
        gcm = name_or_gcm
    else:
        from .cartan import named_gcm
        gcm = named_gcm(str(name_or_gcm))
    if not gcm.is_finite_type():
        raise InputError("tilting data needs a finite-type datum")
    return RootDatumF(gcm)


class TiltingContext:
    """Everything needed to evaluate the character formula for one group
    and one prime: the dual affine Weyl group, its affine realization, and
    the p-canonical machinery."""

    def __init__(self, datum: RootDatumF, p: int):
        if len(datum.gcm.components()) != 1:
            raise InputError("one indecomposable component at a time")
        h = datum.coxeter_number
        if p <= h:
            raise InputError(f"the character formula needs p > h = {h}")
        self.datum = datum
        self.p = p
        n = datum.rank
        dual_gcm = GeneralizedCartanMatrix(
            datum.gcm.labels,
            tuple(tuple(datum.gcm.entries[j][i] for j in range(n))
                  for i in range(n)))
        self.dual_datum: KacMoodyRootDatum = simply_connected_datum(dual_gcm)
        self.affine: AffineWeylGroup = AffineWeylGroup(self.dual_datum)
        self.system = self.affine.system
        self.J = self.affine.finite_indices()
        self.pcan = PCanonicalBasis(affine_realization(self.dual_datum, QQ))

    # -- dot action -------------------------------------------------------------

    def dot(self, w: CoxeterElement, mu: tuple[int, ...]) -> tuple[int, ...]:
        """(u t_lambda) . mu = u(mu + p lambda + rho) - rho on X(G)."""
        u, lam = self.affine.to_pair(w)
        # lambda lives in the dual coroot lattice = the root lattice ZS of G
        n = self.datum.rank
        shift = [0] * n
        for j, c in enumerate(lam):
            alpha = self.datum.simple_root(j)
            for i in range(n):
                shift[i] += c * alpha[i]
        cur = tuple(m + self.p * s + r
                    for m, s, r in zip(mu, shift, self.datum.rho))
        vec = cur
        for i in reversed(u.word):  # innermost reflection first
            vec = self.datum.reflect(i, vec)
        return tuple(v - r for v, r in zip(vec, self.datum.rho))

    def is_restricted_dominant(self, w: CoxeterElement) -> bool:
        return self.system.is_min_coset_rep(w, self.J)

    def dominant_elements(self, weight_bound: int, cap: int = 100_000
                          ) -> list[tuple[CoxeterElement, tuple[int, ...]]]:
        """All w in ^f W with <w . 0, theta^vee> <= weight_bound, paired
        with the dominant weight w . 0."""
        theta_vee = self.datum.highest_root_coroot()
        out = []
        misses = 0
        length = 0
        while misses < 2:
            stratum = [w for w in self.system.enumerate_elements(length, cap=cap)
                       if w.length == length]
            if not stratum and length > 0:
                break
            hit = False
            for w in stratum:
                if not self.is_restricted_dominant(w):
                    continue
                mu = self.dot(w, (0,) * self.datum.rank)
                if not self.datum.is_dominant(mu):
                    raise InputError(
                        f"{w!r} in ^fW gave non-dominant {mu} (p <= h?)")
                if sum(m * t for m, t in zip(mu, theta_vee)) <= weight_bound:
                    out.append((w, mu))
                    hit = True
            misses = 0 if hit else misses + 1
            length += 1
        out.sort(key=lambda pair: (pair[0].length, pair[0].word))
        return out

    # -- multiplicities -----------------------------------------------------------

    def antispherical_polynomial(self, y: CoxeterElement, w: CoxeterElement
                                 ) -> LaurentPoly:
        return self.pcan.antispherical_pkl(y, w, self.p, self.J)

    def tilting_multiplicity(self, w: CoxeterElement, y: CoxeterElement) -> int:
        """(T(w . 0) : nabla(y . 0)) = n_{y,w}(1)."""
        if not (self.is_restricted_dominant(w)
                and self.is_restricted_dominant(y)):
            raise InputError("tilting multiplicities need w, y in ^f W")
        val = self.antispherical_polynomial(y, w)(1)
        if val < 0:
            raise InputError("negative multiplicity; inconsistent data")
        return val


def weyl_dimension(datum: RootDatumF, mu) -> int:
    """dim nabla(mu) = prod <mu + rho, beta^vee> / <rho, beta^vee>."""
    if not datum.is_dominant(mu):
        raise InputError("Weyl dimension formula needs a dominant weight")
    num = Fraction(1)
    rho = datum.rho
    for covee in datum.positive_coroots():
        top = sum((m + r) * c for m, r, c in zip(mu, rho, covee))
        bot = sum(r * c for r, c in zip(rho, covee))
        num *= Fraction(top, bot)
    if num.denominator != 1:
        raise InputError("Weyl dimension did not come out integral")
    return int(num)


@dataclass
class TiltingCharacterRow:
    w: CoxeterElement
    highest_weight: tuple[int, ...]
    multiplicities: dict[tuple[int, ...], int]
    dimension: int


def tilting_character_table(datum: RootDatumF, p: int, weight_bound: int
                            ) -> list[TiltingCharacterRow]:
    """One row per dominant w . 0 under the bound: nabla-multiplicities of
    the indecomposable tilting module T(w . 0), and its dimension."""
    ctx = TiltingContext(datum, p)
    rows = []
    for w, mu in ctx.dominant_elements(weight_bound):
        proj = ctx.pcan.project(w, p, ctx.J)
        mults: dict[tuple[int, ...], int] = {}
        dim = 0
        for y, poly in proj.items():
            m = poly(1)
            if m == 0:
                continue
            nu = ctx.dot(y, (0,) * datum.rank)
            mults[nu] = mults.get(nu, 0) + m
            dim += m * weyl_dimension(datum, nu)
        if mults.get(mu) != 1:
            raise InputError(f"row {mu}: leading multiplicity is not 1")
        rows.append(TiltingCharacterRow(w, mu, mults, dim))
    return rows
