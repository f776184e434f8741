"""The p-canonical basis from mod-p ranks of local intersection forms,
and its antispherical projection (the polynomials n_{y,w} at a prime).

For each w the ShortLex reduced word is fixed, the local Gram matrices of
the Bott-Samelson bimodule are computed once in characteristic zero, and
every prime (or 0) reuses them through ranks:

    ch = BS(word) - sum over x < w, d of m_{x,d} v^d ch(pcan_x),
    m_{x,d} = rank of the (x, d) form over F_p (over Q when p = 0).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bimodule import SoergelCategory
from .coxeter import CoxeterElement
from .errors import InputError, InternalInconsistencyError
from .hecke import AntisphericalElement, HeckeAlgebra, HeckeElement
from .laurent import LaurentPoly
from .leaves import intersection_form, light_leaves
from .linalg import rank_mod_p, rank_rational
from .realization import Realization


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass
class PCanonicalEntry:
    """One basis element: expansions in the standard and KL bases."""

    w: CoxeterElement
    p: int
    expansion_in_std: HeckeElement
    expansion_in_kl: dict[CoxeterElement, LaurentPoly]

    def equals_kl(self) -> bool:
        return (len(self.expansion_in_kl) == 1
                and self.expansion_in_kl[self.w] == LaurentPoly.one())


@dataclass
class _GramRecord:
    x: CoxeterElement
    degree: int
    matrix: list[list[int]]
    two_power: int

    def rank(self, p: int) -> int:
        if p == 0:
            return rank_rational([[Fraction(v) for v in row]
                                  for row in self.matrix])
        if p == 2 and self.two_power:
            raise InternalInconsistencyError(
                "Gram matrix needs 1/2; rank mod 2 undefined")
        return rank_mod_p(self.matrix, p)


class PCanonicalBasis:
    """p-canonical basis machinery bound to one realization."""

    def __init__(self, real: Realization):
        self.real = real
        self.cat = SoergelCategory(real)
        self.system = real.system
        self.hecke = HeckeAlgebra(real.system)
        self._grams: dict[CoxeterElement, list[_GramRecord]] = {}
        self._elements: dict[tuple[int, CoxeterElement], PCanonicalEntry] = {}

    # -- integral Gram data, computed once per w ------------------------------

    def gram_records(self, w: CoxeterElement) -> list[_GramRecord]:
        got = self._grams.get(w)
        if got is not None:
            return got
        word = w.word
        leaves = light_leaves(self.cat, word)
        by_endpoint: dict[CoxeterElement, list] = {}
        for lf in leaves:
            by_endpoint.setdefault(lf.endpoint, []).append(lf)
        records = []
        for x in sorted(by_endpoint, key=lambda z: (z.length, z.word)):
            if x == w:
                continue
            defects = sorted({lf.defect for lf in by_endpoint[x]})
            for d in defects:
                if d < 0 or (d > 0 and -d not in defects):
                    continue
                form = intersection_form(self.cat, word, x, d, leaves)
                if not form.entries or not form.entries[0]:
                    continue
                mat, k = form.integral_matrix()
                records.append(_GramRecord(x, d, mat, k))
        self._grams[w] = records
        return records

    # -- the basis ---------------------------------------------------------------

    def element(self, w: CoxeterElement, p: int) -> PCanonicalEntry:
        """pcan_w at the prime p (p = 0 is the characteristic-0 run)."""
        if p != 0 and not _is_prime(p):
            raise InputError(f"p must be 0 or prime, got {p}")
        key = (p, w)
        got = self._elements.get(key)
        if got is not None:
            return got
        std = self.hecke.bs_element(w.word)
        for rec in self.gram_records(w):
            m = rec.rank(p)
            if not m:
                continue
            lower = self.element(rec.x, p).expansion_in_std
            degrees = (rec.degree,) if rec.degree == 0 \
                else (rec.degree, -rec.degree)
            for d in degrees:
                std = std - lower.scale(LaurentPoly.v(d, m))
        if std.coeff(w) != LaurentPoly.one():
            raise InternalInconsistencyError(
                f"peel-off lost unitriangularity at {w!r}")
        kl = self.hecke.expand_in_kl(std)
        for x, c in kl.items():
            if x == w:
                continue
            if not (c.nonneg_coeffs() and c.is_symmetric()):
                raise InternalInconsistencyError(
                    f"negative or asymmetric KL coefficient {c} at {x!r} "
                    f"in pcan({w!r}, p={p})")
        entry = PCanonicalEntry(w, p, std, kl)
        self._elements[key] = entry
        return entry

    def all_gram_units_below(self, w: CoxeterElement, p: int) -> bool:
        """True iff every local Gram determinant below w is a p-adic unit,
        i.e. every form has full rank mod p."""
        for rec in self.gram_records(w):
            nr, nc = len(rec.matrix), len(rec.matrix[0])
            if rec.rank(p) < min(nr, nc):
                return False
        return True

    # -- antispherical projection --------------------------------------------------

    def antispherical_pkl(self, y: CoxeterElement, w: CoxeterElement, p: int,
                          J) -> LaurentPoly:
        """The coefficient of N_y in the projection of pcan_w; y, w must be
        minimal coset representatives."""
        J = tuple(sorted(J))
        for z in (y, w):
            if not self.system.is_min_coset_rep(z, J):
                raise InputError(f"{z!r} is not minimal in W_J {z!r}")
        proj = self.project(w, p, J)
        return proj.coeff(y)

    def project(self, w: CoxeterElement, p: int, J) -> AntisphericalElement:
        """Antispherical image of pcan_w (vanishes when w leaves ^J W)."""
        entry = self.element(w, p)
        return self.hecke.antispherical_project(entry.expansion_in_std, J)

    def pkl_table(self, p: int, max_length: int, J, cap: int = 100_000
                  ) -> list[tuple[CoxeterElement, CoxeterElement, LaurentPoly]]:
        """All (w, y, n_{y,w}) with w, y in ^J W and l(w) <= max_length,
        ordered by (w, y)."""
        J = tuple(sorted(J))
        out = []
        for w in self.system.enumerate_elements(max_length, cap=cap):
            if not self.system.is_min_coset_rep(w, J):
                continue
            proj = self.project(w, p, J)
            for y, poly in proj.items():
                if not self.system.is_min_coset_rep(y, J):
                    raise InternalInconsistencyError(
                        f"projection support {y!r} outside ^J W")
                out.append((w, y, poly))
        return out
