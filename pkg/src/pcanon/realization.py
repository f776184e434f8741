"""Realizations (V, {coroots}, {roots}) over exact coefficient rings.

A realization carries the data needed by the bimodule layer: root
covectors, coroot vectors, the W-action on V and V*, and the symmetrizer
pairing phi of the finite part.  Coordinates are exact: Fraction for the
characteristic-zero rings, ints mod p for GF(p).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import (GeneralizedCartanMatrix, KacMoodyRootDatum, affinize,
                     coxeter_number, highest_root)
from .coxeter import CoxeterSystem
from .errors import InputError


class CoefficientRing:
    """One of Z, Z[1/2], Q, or F_p; exact arithmetic on plain values."""

    def __init__(self, tag: str, p: int | None = None):
        if tag not in ("ZZ", "ZZ_HALF", "QQ", "GF"):
            raise InputError(f"unknown ring tag {tag!r}")
        if tag == "GF":
            if p is None or p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                raise InputError("GF requires a prime p")
        self.tag = tag
        self.p = p

    # -- niceties ----------------------------------------------------------

    def __repr__(self):
        return {"ZZ": "Z", "ZZ_HALF": "Z[1/2]", "QQ": "Q"}.get(
            self.tag, f"F_{self.p}")

    def __eq__(self, other):
        return (isinstance(other, CoefficientRing)
                and (self.tag, self.p) == (other.tag, other.p))

    def __hash__(self):
        return hash((self.tag, self.p))

    @property
    def characteristic(self) -> int:
        return self.p if self.tag == "GF" else 0

    def is_field(self) -> bool:
        return self.tag in ("QQ", "GF")

    # -- element operations ---------------------------------------------------

    def coerce(self, x):
        if self.tag == "GF":
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise InputError(f"denominator not invertible mod {self.p}")
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        x = Fraction(x)
        if self.tag == "ZZ" and x.denominator != 1:
            raise InputError(f"{x} is not an integer")
        if self.tag == "ZZ_HALF":
            d = x.denominator
            while d % 2 == 0:
                d //= 2
            if d != 1:
                raise InputError(f"{x} is not in Z[1/2]")
        return x

    def zero(self):
        return 0 if self.tag == "GF" else Fraction(0)

    def one(self):
        return 1 if self.tag == "GF" else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.tag == "GF" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.tag == "GF" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.tag == "GF" else a * b

    def neg(self, a):
        return (-a) % self.p if self.tag == "GF" else -a

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        if self.tag == "GF":
            return int(a) % self.p != 0
        if a == 0:
            return False
        if self.tag == "QQ":
            return True
        num, den = abs(Fraction(a).numerator), Fraction(a).denominator
        if self.tag == "ZZ":
            return num == 1 and den == 1
        while num % 2 == 0:
            num //= 2
        return num == 1

    def inv(self, a):
        if not self.is_unit(a):
            raise InputError(f"{a} is not invertible in {self!r}")
        if self.tag == "GF":
            return pow(int(a), -1, self.p)
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))


ZZ = CoefficientRing("ZZ")
ZZ_HALF = CoefficientRing("ZZ_HALF")
QQ = CoefficientRing("QQ")


def GF(p: int) -> CoefficientRing:
    return CoefficientRing("GF", p)


# -- linear algebra helpers (small matrices over a CoefficientRing) --------


def _mat_mul(ring, a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return tuple(tuple(
        _dot(ring, [a[i][t] for t in range(k)], [b[t][j] for t in range(k)])
        for j in range(m)) for i in range(n))


def _dot(ring, xs, ys):
    acc = ring.zero()
    for x, y in zip(xs, ys):
        acc = ring.add(acc, ring.mul(x, y))
    return acc


def _mat_inv(ring, a):
    """Inverse by Gauss-Jordan; raises InputError when not invertible."""
    n = len(a)
    m = [list(row) + [ring.one() if i == j else ring.zero()
                      for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if ring.is_unit(m[r][col]):
                piv = r
                break
        if piv is None:
            raise InputError("matrix not invertible over the ring")
        m[col], m[piv] = m[piv], m[col]
        inv = ring.inv(m[col][col])
        m[col] = [ring.mul(inv, x) for x in m[col]]
        for r in range(n):
            if r != col and not ring.is_zero(m[r][col]):
                f = m[r][col]
                m[r] = [ring.sub(x, ring.mul(f, y))
                        for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def _det(ring, a):
    n = len(a)
    m = [list(row) for row in a]
    det = ring.one()
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not ring.is_zero(m[r][col]):
                piv = r
                break
        if piv is None:
            return ring.zero()
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = ring.neg(det)
        # fraction-free enough: rings here embed in fields, divide directly
        pivval = m[col][col]
        det = ring.mul(det, pivval)
        if not ring.is_unit(pivval):
            # fall back to field of fractions for Z, Z[1/2]
            fra = QQ if ring.tag in ("ZZ", "ZZ_HALF") else None
            if fra is None:
                raise InputError("determinant pivot not invertible")
            return _det_fraction(a)
        inv = ring.inv(pivval)
        for r in range(col + 1, n):
            if not ring.is_zero(m[r][col]):
                f = ring.mul(m[r][col], inv)
                m[r] = [ring.sub(x, ring.mul(f, y))
                        for x, y in zip(m[r], m[col])]
    return det


def _det_fraction(a):
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


# -- the realization type ------------------------------------------------------


@dataclass
class Realization:
    """(V, {coroot vectors in V}, {root covectors on V}) over ring, for the
    Coxeter system of gcm.  V is coordinatized; covectors are coefficient
    tuples of the same length."""

    ring: CoefficientRing
    gcm: GeneralizedCartanMatrix
    rank: int
    roots: tuple[tuple, ...]
    coroots: tuple[tuple, ...]
    system: CoxeterSystem = field(init=False, repr=False)

    def __post_init__(self):
        self.system = CoxeterSystem(self.gcm)
        n = self.gcm.rank
        for i in range(n):
            for j in range(n):
                pair = _dot(self.ring, self.coroots[i], self.roots[j])
                want = self.ring.coerce(self.gcm.entries[i][j])
                if pair != want:
                    raise InputError(
                        f"<coroot_{i}, root_{j}> = {pair}, expected {want}")
        self._check_braid_relations()

    # -- W-action ---------------------------------------------------------------

    def act_on_vector(self, s: int, v: tuple) -> tuple:
        """s(v) = v - <alpha_s, v> alpha_s^vee on V."""
        ring = self.ring
        c = _dot(ring, self.roots[s], v)
        return tuple(ring.sub(x, ring.mul(c, a))
                     for x, a in zip(v, self.coroots[s]))

    def act_on_covector(self, s: int, f: tuple) -> tuple:
        """s(f) = f - f(alpha_s^vee) alpha_s on V*."""
        ring = self.ring
        c = _dot(ring, f, self.coroots[s])
        return tuple(ring.sub(x, ring.mul(c, a))
                     for x, a in zip(f, self.roots[s]))

    def word_act_on_covector(self, word, f: tuple) -> tuple:
        for s in reversed(word):
            f = self.act_on_covector(s, f)
        return f

    def _check_braid_relations(self):
        n = self.gcm.rank
        dim = self.rank
        basis = [tuple(self.ring.one() if k == i else self.ring.zero()
                       for k in range(dim)) for i in range(dim)]
        for i in range(n):
            for v in basis:
                if self.act_on_vector(i, self.act_on_vector(i, v)) != v:
                    raise InputError(f"s_{i} is not an involution on V")
            for j in range(i + 1, n):
                m = self.system.m[i][j]
                if m == 0:
                    continue
                for v in basis:
                    a = b = v
                    for k in range(m):
                        a = self.act_on_vector(i if k % 2 == 0 else j, a)
                        b = self.act_on_vector(j if k % 2 == 0 else i, b)
                    if a != b:
                        raise InputError(
                            f"braid relation ({i},{j}) fails on V")

    # -- inspection -----------------------------------------------------------

    def root(self, s: int) -> tuple:
        return self.roots[s]

    def coroot(self, s: int) -> tuple:
        return self.coroots[s]

    def roots_linearly_dependent(self) -> bool:
        """True iff the root covectors do not have full rank |S|."""
        if self.gcm.rank <= self.rank:
            rows = [list(r) for r in self.roots]
            # rank over the fraction field
            m = [[Fraction(x) if self.ring.tag != "GF" else x for x in row]
                 for row in rows]
            rk = _rank_generic(self.ring, m)
            return rk < self.gcm.rank
        return True

    def to_json(self) -> dict:
        return {
            "ring": repr(self.ring),
            "gcm": self.gcm.to_json(),
            "rank": self.rank,
            "roots": [[str(x) for x in r] for r in self.roots],
            "coroots": [[str(x) for x in r] for r in self.coroots],
        }


def _rank_generic(ring, rows) -> int:
    rows = [row[:] for row in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(rows)):
            if not ring.is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        if ring.tag == "GF":
            inv = ring.inv(rows[r][c])
            rows[r] = [ring.mul(inv, x) for x in rows[r]]
        else:
            inv = 1 / Fraction(rows[r][c])
            rows[r] = [Fraction(x) * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not ring.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [ring.sub(x, ring.mul(f, y))
                           for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


# -- constructors ---------------------------------------------------------------


def _needs_half(datum: KacMoodyRootDatum) -> bool:
    """Z' = Z[1/2] iff some root or coroot fails to be surjective onto Z."""
    def gcd_all(vec):
        g = 0
        for x in vec:
            g = _gcd(g, x)
        return g
    for v in datum.simple_roots + datum.simple_coroots:
        if gcd_all(v) != 1:
            return True
    return False


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def cartan_realization(datum: KacMoodyRootDatum,
                       ring: CoefficientRing) -> Realization:
    """V = ring (x) Hom(X, Z) with the images of the datum's roots/coroots."""
    if _needs_half(datum) and not ring.is_unit(ring.coerce(2)):
        raise InputError("this root datum requires 2 invertible in the ring")
    roots = tuple(tuple(ring.coerce(x) for x in r) for r in datum.simple_roots)
    coroots = tuple(tuple(ring.coerce(x) for x in c)
                    for c in datum.simple_coroots)
    return Realization(ring, datum.gcm, datum.lattice_rank, roots, coroots)


def affine_realization(datum: KacMoodyRootDatum,
                       ring: CoefficientRing) -> Realization:
    """The affine realization on V = ring (x) X_*(T): finite generators keep
    their root/coroot images; the affine generator gets (-theta, -theta^vee)
    for the highest root theta."""
    gcm = datum.gcm
    if not gcm.is_finite_type() or len(gcm.components()) != 1:
        raise InputError("affine realization needs an indecomposable "
                         "finite-type datum")
    n = gcm.rank
    theta = highest_root(gcm)
    eps = gcm.symmetrizer()
    bform = [[eps[i] * gcm.entries[i][j] for j in range(n)] for i in range(n)]
    tt = sum(theta[i] * bform[i][j] * theta[j]
             for i in range(n) for j in range(n))
    theta_x = tuple(sum(theta[j] * datum.simple_roots[j][k] for j in range(n))
                    for k in range(datum.lattice_rank))
    cov = []
    for i in range(n):
        num = 2 * theta[i] * eps[i]
        if num % tt:
            raise InputError("non-integral highest coroot")
        cov.append(num // tt)
    theta_vee = tuple(sum(cov[i] * datum.simple_coroots[i][k] for i in range(n))
                      for k in range(datum.lattice_rank))
    aff = affinize(gcm)
    # surjectivity bookkeeping includes the affine root -theta
    ext = KacMoodyRootDatum(gcm, datum.lattice_rank, datum.simple_roots,
                            datum.simple_coroots)
    needs_half = _needs_half(ext) or _gcd_vec(theta_x) != 1 \
        or _gcd_vec(theta_vee) != 1
    if needs_half and not ring.is_unit(ring.coerce(2)):
        raise InputError("this affine realization requires 2 invertible")
    roots = tuple([tuple(ring.neg(ring.coerce(x)) for x in theta_x)]
                  + [tuple(ring.coerce(x) for x in r)
                     for r in datum.simple_roots])
    coroots = tuple([tuple(ring.neg(ring.coerce(x)) for x in theta_vee)]
                    + [tuple(ring.coerce(x) for x in c)
                       for c in datum.simple_coroots])
    return Realization(ring, aff, datum.lattice_rank, roots, coroots)


def _gcd_vec(v):
    g = 0
    for x in v:
        g = _gcd(g, x)
    return g


def dual_realization(r: Realization) -> Realization:
    """Swap (V, coroots, roots) -> (V*, roots, coroots); GCM transposes."""
    gcm_t = GeneralizedCartanMatrix(
        r.gcm.labels,
        tuple(tuple(r.gcm.entries[j][i] for j in range(r.gcm.rank))
              for i in range(r.gcm.rank)))
    return Realization(r.ring, gcm_t, r.rank, r.coroots, r.roots)


def check_demazure_surjectivity(r: Realization) -> bool:
    """Every alpha_s : V -> k and every pairing against alpha_s^vee is onto."""
    def onto(vec) -> bool:
        ring = r.ring
        if ring.tag in ("QQ", "GF"):
            return any(not ring.is_zero(x) for x in vec)
        g = Fraction(0)
        for x in vec:
            fx = Fraction(x)
            g = _frac_gcd(g, fx)
        if g == 0:
            return False
        return ring.is_unit(g)
    return all(onto(r.roots[s]) and onto(r.coroots[s])
               for s in range(r.gcm.rank))


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    num = _gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


def w_action(r: Realization, s: int, x: tuple, kind: str = "vector") -> tuple:
    """Reflection action on a vector of V or a covector of V*."""
    if kind == "vector":
        return r.act_on_vector(s, x)
    if kind == "covector":
        return r.act_on_covector(s, x)
    raise InputError("kind must be 'vector' or 'covector'")


def symmetrizer(gcm: GeneralizedCartanMatrix) -> tuple[int, ...]:
    """Minimal positive diagonal D with D^-1 A symmetric."""
    if not gcm.is_finite_type():
        raise InputError("symmetrizer is provided for finite type only")
    return gcm.symmetrizer()


# -- very good primes ------------------------------------------------------------


def _component_type(gcm: GeneralizedCartanMatrix, comp: tuple[int, ...]) -> str:
    """Coarse classification of an indecomposable finite-type component."""
    sub = gcm.submatrix(comp)
    ms = sorted(sub.m_values() if hasattr(sub, "m_values") else
                [_m_entry(sub, i, j) for i in range(sub.rank)
                 for j in range(i + 1, sub.rank)])
    if not ms or set(ms) <= {2, 3}:
        return f"A{sub.rank}"
    if 6 in ms:
        return "G2"
    if 4 in ms:
        # B/C/F4 share the very-good condition p != 2 (F4 needs 3 as well)
        if sub.rank == 4:
            return "F4"
        return f"B{sub.rank}"
    return f"A{sub.rank}"


def _m_entry(gcm: GeneralizedCartanMatrix, i: int, j: int) -> int:
    table = {0: 2, 1: 3, 2: 4, 3: 6}
    return table.get(gcm.entries[i][j] * gcm.entries[j][i], 0)


def bad_primes_for_phi(gcm: GeneralizedCartanMatrix) -> set[int]:
    """Primes that must be invertible for the symmetrizer pairing: 2 plus
    the non-very-good primes of each component (A_n: divisors of n+1;
    B/C/D: 2; G2/F4/E6/E7: 2,3; E8: 2,3,5)."""
    out = {2}
    for comp in gcm.components():
        typ = _component_type(gcm, comp)
        if typ.startswith("A"):
            n = int(typ[1:])
            k = n + 1
            d = 2
            while d * d <= k:
                if k % d == 0:
                    out.add(d)
                    while k % d == 0:
                        k //= d
                d += 1
            if k > 1:
                out.add(k)
        elif typ.startswith("B") or typ.startswith("C") or typ.startswith("D"):
            out.add(2)
        elif typ in ("G2", "F4", "E6", "E7"):
            out.update({2, 3})
        elif typ == "E8":
            out.update({2, 3, 5})
    return out


def phi_isomorphism(r: Realization):
    """The W_f-equivariant map phi : V -> V* with phi(coroot_s) = b_s root_s.

    Built from the symmetrizer pairing <coroot_i, coroot_j> = a_ji eps_i.
    Returns (phi_matrix, {s: b_s}); phi_matrix rows are covector
    coordinates, i.e. phi(v) = v^T . phi_matrix.

    For an affine realization the pairing is built from the finite
    generators (the affine coroot is a Z-combination of them) and the b_s
    of the affine generator comes out of the same matrix.
    """
    ring = r.ring
    gcm = r.gcm
    n = gcm.rank
    # split off affine node when present (label "0" by construction)
    finite_idx = [i for i in range(n) if gcm.labels[i] != "0"]
    fin_gcm = gcm.submatrix(tuple(finite_idx))
    if not fin_gcm.is_finite_type():
        raise InputError("phi needs a finite-type (finite part of the) GCM")
    for p in bad_primes_for_phi(fin_gcm):
        if not ring.is_unit(ring.coerce(p)):
            raise InputError(f"phi requires {p} invertible in {ring!r}")
    eps = fin_gcm.symmetrizer()
    k = len(finite_idx)
    if k != r.rank:
        raise InputError("phi needs rank(V) = number of finite generators")
    # pairing in coroot coordinates: G[a][b] = a_{ba} eps_a
    G = [[ring.mul(ring.coerce(fin_gcm.entries[b][a]), ring.coerce(eps[a]))
          for b in range(k)] for a in range(k)]
    # coroot matrix C: columns are coroot coordinate vectors
    C = tuple(tuple(r.coroots[finite_idx[b]][i] for b in range(k))
              for i in range(k))
    Cinv = _mat_inv(ring, C)
    CinvT = tuple(tuple(Cinv[j][i] for j in range(k)) for i in range(k))
    phi = _mat_mul(ring, _mat_mul(ring, CinvT, G), Cinv)
    if ring.is_zero(_det(ring, phi)) or not ring.is_unit(_det(ring, phi)):
        raise InputError("symmetrizer pairing degenerate over the ring")
    bs = {}
    for s in range(n):
        image = tuple(_dot(ring, r.coroots[s],
                           [phi[i][j] for i in range(k)])
                      for j in range(k))
        root = r.roots[s]
        ratio = None
        for x, y in zip(image, root):
            if ring.is_zero(y):
                if not ring.is_zero(x):
                    raise InputError("phi(coroot) not proportional to root")
                continue
            c = ring.div(x, y)
            if ratio is None:
                ratio = c
            elif ratio != c:
                raise InputError("phi(coroot) not proportional to root")
        if ratio is None or not ring.is_unit(ratio):
            raise InputError("b_s not a unit")
        bs[s] = ratio
    return phi, bs
