"""Exact sparse linear algebra over Q and over F_p.

Rows are dicts {column: coefficient}.  Kernels over Q are found by a
mod-p candidate pass (fast machine-int elimination), lifted by rational
reconstruction and then verified exactly; a pure-Fraction elimination is
the fallback.  Since rank over F_p can only undershoot the rank over Q,
a verified lift of every mod-p kernel vector proves the Q-kernel exactly.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

KERNEL_PRIMES = (2305843009213693951, 4611686018427387847)  # M61 and a 62-bit prime


def _fully_reduce(r: dict[int, Fraction],
                  pivots: dict[int, dict[int, Fraction]]) -> dict[int, Fraction]:
    """Eliminate every pivoted column from r (used by the span helpers)."""
    while True:
        pcols = [c for c in r if c in pivots]
        if not pcols:
            return r
        c = min(pcols)
        coeff = r.pop(c)
        for k, v in pivots[c].items():
            if k == c:
                continue
            nv = r.get(k, Fraction(0)) - coeff * v
            if nv:
                r[k] = nv
            else:
                r.pop(k, None)


def _forward_eliminate_modp(rows: list[dict[int, int]], p: int
                            ) -> dict[int, dict[int, int]]:
    """Forward elimination with min-column pivoting; pivot rows normalized.

    Pivot rows may still mention later pivot columns (no back-substitution);
    kernel extraction handles that by descending substitution.
    """
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(r[c], -1, p)
                pivots[c] = {k: (v * inv) % p for k, v in r.items()}
                break
            coeff = r.pop(c)
            for k, v in piv.items():
                if k == c:
                    continue
                nv = (r.get(k, 0) - coeff * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return pivots


def _kernel_from_pivots_modp(pivots: dict[int, dict[int, int]], nvars: int,
                             p: int) -> list[dict[int, int]]:
    free = [c for c in range(nvars) if c not in pivots]
    basis = []
    for f in free:
        x: dict[int, int] = {f: 1}
        for c in sorted(pivots, reverse=True):
            acc = 0
            for k, v in pivots[c].items():
                if k != c and k in x:
                    acc = (acc + v * x[k]) % p
            if acc:
                x[c] = (-acc) % p
        basis.append(x)
    return basis


def _rational_reconstruct(a: int, p: int) -> Fraction | None:
    """num/den = a (mod p) with |num|, den <= sqrt(p/2), or None."""
    bound = isqrt(p // 2)
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if abs(s1) > bound or s1 == 0:
        return None
    return Fraction(r1, s1)


def _scale_to_int(row: dict[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = den * v.denominator // _gcd(den, v.denominator)
    out = {c: int(v * den) for c, v in row.items()}
    g = 0
    for v in out.values():
        g = _gcd(g, abs(v))
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def nullspace(rows: list[dict[int, Fraction]], nvars: int
              ) -> list[dict[int, Fraction]]:
    """Kernel basis of rows . x = 0 over Q; deterministic and exact.

    Mod-p pass first; every candidate vector is lifted and verified
    against all equations, which also certifies the kernel dimension.
    """
    int_rows = [_scale_to_int(r) for r in rows if r]
    int_rows.sort(key=lambda r: (len(r), sorted(r.items())))
    for p in KERNEL_PRIMES:
        pivots = _forward_eliminate_modp(int_rows, p)
        modp_basis = _kernel_from_pivots_modp(pivots, nvars, p)
        lifted = []
        ok = True
        for vec in modp_basis:
            lv: dict[int, Fraction] = {}
            for c, v in vec.items():
                f = _rational_reconstruct(v, p)
                if f is None:
                    ok = False
                    break
                if f:
                    lv[c] = f
            if not ok:
                break
            lifted.append(lv)
        if ok and all(_satisfies(int_rows, vec) for vec in lifted):
            return lifted
    return _nullspace_fraction(rows, nvars)


def _satisfies(int_rows: list[dict[int, int]], vec: dict[int, Fraction]) -> bool:
    for row in int_rows:
        acc = Fraction(0)
        if len(row) <= len(vec):
            for c, v in row.items():
                x = vec.get(c)
                if x is not None:
                    acc += v * x
        else:
            for c, x in vec.items():
                v = row.get(c)
                if v is not None:
                    acc += v * x
        if acc:
            return False
    return True


def _nullspace_fraction(rows: list[dict[int, Fraction]], nvars: int
                        ) -> list[dict[int, Fraction]]:
    """Fallback: forward elimination + descending substitution over Q."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = Fraction(1) / r[c]
                pivots[c] = {k: v * inv for k, v in r.items()}
                break
            coeff = r.pop(c)
            for k, v in piv.items():
                if k == c:
                    continue
                nv = r.get(k, Fraction(0)) - coeff * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    free = [c for c in range(nvars) if c not in pivots]
    basis = []
    for f in free:
        x: dict[int, Fraction] = {f: Fraction(1)}
        for c in sorted(pivots, reverse=True):
            acc = Fraction(0)
            for k, v in pivots[c].items():
                if k != c and k in x:
                    acc += v * x[k]
            if acc:
                x[c] = -acc
        basis.append(x)
    return basis


def rank_rational(rows: list[list[Fraction]]) -> int:
    """Rank over Q of a dense rational matrix."""
    if not rows:
        return 0
    m = [list(map(Fraction, r)) for r in rows]
    ncols = len(m[0])
    rank = 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        rank += 1
        if r == len(m):
            break
    return rank


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank over F_p of an integer matrix."""
    if not rows:
        return 0
    m = [[x % p for x in r] for r in rows]
    ncols = len(m[0])
    rank = 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
        rank += 1
        if r == len(m):
            break
    return rank


def span_dimension(vectors: list[dict[int, Fraction]]) -> int:
    """Dimension of the span of sparse rational vectors."""
    pivots: dict[int, dict[int, Fraction]] = {}
    dim = 0
    for vec in vectors:
        r = _fully_reduce(dict(vec), pivots)
        if r:
            c = min(r)
            inv = Fraction(1) / r[c]
            pivots[c] = {k: v * inv for k, v in r.items()}
            dim += 1
    return dim


def reduce_against(vec: dict[int, Fraction],
                   pivots: dict[int, dict[int, Fraction]]) -> dict[int, Fraction]:
    """Reduce vec against a pivot table (as built by add_to_span)."""
    return _fully_reduce(dict(vec), pivots)


def add_to_span(vec: dict[int, Fraction],
                pivots: dict[int, dict[int, Fraction]]) -> bool:
    """Add vec to the span; True if it enlarged the span."""
    r = reduce_against(vec, pivots)
    if not r:
        return False
    c = min(r)
    inv = Fraction(1) / r[c]
    pivots[c] = {k: v * inv for k, v in r.items()}
    return True
