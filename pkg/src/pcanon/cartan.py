"""Generalized Cartan matrices, Kac-Moody root data, and named types.

The named finite types A1..A4, B2, C2, G2 come with simply connected root
data (weight lattice X, coroots = standard basis of the coweight lattice).
Untwisted affinizations are available for each named finite type.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError


def _det(m: list[list[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class GeneralizedCartanMatrix:
    """Integer matrix a[i][j] with a_ii = 2, a_ij <= 0 (i != j), a_ij=0 iff a_ji=0."""

    labels: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise InputError("duplicate generator labels")
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise InputError("Cartan matrix must be square over the index set")
        for i in range(n):
            if self.entries[i][i] != 2:
                raise InputError("diagonal Cartan entries must equal 2")
            for j in range(n):
                if i != j:
                    if self.entries[i][j] > 0:
                        raise InputError("off-diagonal Cartan entries must be <= 0")
                    if (self.entries[i][j] == 0) != (self.entries[j][i] == 0):
                        raise InputError("a_ij = 0 must imply a_ji = 0")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def entry(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def submatrix(self, indices: tuple[int, ...]) -> "GeneralizedCartanMatrix":
        return GeneralizedCartanMatrix(
            tuple(self.labels[i] for i in indices),
            tuple(tuple(self.entries[i][j] for j in indices) for i in indices),
        )

    def is_finite_type(self) -> bool:
        """Kac's criterion: every principal minor is positive."""
        n = self.rank
        for r in range(1, n + 1):
            for idx in itertools.combinations(range(n), r):
                sub = [[self.entries[i][j] for j in idx] for i in idx]
                if _det(sub) <= 0:
                    return False
        return True

    def components(self) -> list[tuple[int, ...]]:
        """Connected components of the Coxeter diagram, as index tuples."""
        n = self.rank
        seen: set[int] = set()
        comps = []
        for i in range(n):
            if i in seen:
                continue
            stack, comp = [i], []
            while stack:
                k = stack.pop()
                if k in seen:
                    continue
                seen.add(k)
                comp.append(k)
                stack.extend(j for j in range(n)
                             if j not in seen and self.entries[k][j] != 0)
            comps.append(tuple(sorted(comp)))
        return comps

    def symmetrizer(self) -> tuple[int, ...]:
        """Minimal positive integers eps with eps_i * a_ij = eps_j * a_ji.

        Equivalently D = diag(eps) is the minimal matrix making D^-1 A
        symmetric.  Raises InputError when A is not symmetrizable.
        Minimality is per indecomposable component (gcd normalized to 1).
        """
        from fractions import Fraction

        n = self.rank
        eps: list[Fraction | None] = [None] * n
        for comp in self.components():
            eps[comp[0]] = Fraction(1)
            queue = [comp[0]]
            while queue:
                i = queue.pop()
                for j in comp:
                    if self.entries[i][j] == 0 or i == j:
                        continue
                    want = eps[i] * Fraction(self.entries[i][j], self.entries[j][i])
                    if eps[j] is None:
                        eps[j] = want
                        queue.append(j)
                    elif eps[j] != want:
                        raise InputError("Cartan matrix is not symmetrizable")
            denom = 1
            for i in comp:
                denom = denom * eps[i].denominator // _gcd(denom, eps[i].denominator)
            vals = [int(eps[i] * denom) for i in comp]
            g = 0
            for val in vals:
                g = _gcd(g, val)
            for i, val in zip(comp, vals):
                eps[i] = Fraction(val // g)
        # final symmetry check, covering cycles in the diagram
        out = tuple(int(e) for e in eps)
        for i in range(n):
            for j in range(n):
                if out[i] * self.entries[i][j] != out[j] * self.entries[j][i]:
                    raise InputError("Cartan matrix is not symmetrizable")
        return out

    def to_json(self) -> dict:
        return {"labels": list(self.labels),
                "matrix": [list(r) for r in self.entries]}


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class KacMoodyRootDatum:
    """A GCM with chosen root/coroot vectors in a lattice X of given rank.

    simple_roots[i] lives in X (coordinates in a fixed basis), and
    simple_coroots[i] in Hom(X, Z) (coordinates in the dual basis), so
    that <coroot_i, root_j> = sum_k coroot_i[k]*root_j[k] = a_ij.
    """

    gcm: GeneralizedCartanMatrix
    lattice_rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.gcm.rank
        if len(self.simple_roots) != n or len(self.simple_coroots) != n:
            raise InputError("need one root and one coroot per index")
        for v in self.simple_roots + self.simple_coroots:
            if len(v) != self.lattice_rank:
                raise InputError("root/coroot vectors must match lattice rank")
        for i in range(n):
            for j in range(n):
                pair = sum(a * b for a, b in zip(self.simple_coroots[i],
                                                 self.simple_roots[j]))
                if pair != self.gcm.entries[i][j]:
                    raise InputError(
                        f"<coroot_{i}, root_{j}> = {pair} != a_ij = "
                        f"{self.gcm.entries[i][j]}")

    @property
    def rank(self) -> int:
        return self.gcm.rank


def simply_connected_datum(gcm: GeneralizedCartanMatrix) -> KacMoodyRootDatum:
    """Finite-type simply connected datum: X = weight lattice.

    In the basis of fundamental weights the coroots are the standard dual
    basis and root j has coordinates (a_ij)_i.
    """
    if not gcm.is_finite_type():
        raise InputError("simply connected datum requires finite type")
    n = gcm.rank
    roots = tuple(tuple(gcm.entries[i][j] for i in range(n)) for j in range(n))
    coroots = tuple(tuple(1 if k == i else 0 for k in range(n)) for i in range(n))
    return KacMoodyRootDatum(gcm, n, roots, coroots)


def adjoint_datum(gcm: GeneralizedCartanMatrix) -> KacMoodyRootDatum:
    """Finite-type adjoint datum: X = root lattice (roots = standard basis)."""
    if not gcm.is_finite_type():
        raise InputError("adjoint datum requires finite type")
    n = gcm.rank
    roots = tuple(tuple(1 if k == j else 0 for k in range(n)) for j in range(n))
    coroots = tuple(tuple(gcm.entries[i][k] for k in range(n)) for i in range(n))
    return KacMoodyRootDatum(gcm, n, roots, coroots)


def positive_roots(gcm: GeneralizedCartanMatrix) -> list[tuple[int, ...]]:
    """All positive roots of a finite-type GCM, as simple-root coordinates.

    Closure of the simple roots under the reflections
    s_i(beta) = beta - (sum_j a_ij beta_j) alpha_i.
    """
    if not gcm.is_finite_type():
        raise InputError("positive_roots requires finite type")
    n = gcm.rank
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        beta = frontier.pop()
        for i in range(n):
            pair = sum(gcm.entries[i][j] * beta[j] for j in range(n))
            new = list(beta)
            new[i] -= pair
            new_t = tuple(new)
            if all(c >= 0 for c in new_t) and any(c > 0 for c in new_t) \
                    and new_t not in roots:
                roots.add(new_t)
                frontier.append(new_t)
    return sorted(roots, key=lambda r: (sum(r), r))


def highest_root(gcm: GeneralizedCartanMatrix) -> tuple[int, ...]:
    """Highest root of an indecomposable finite-type GCM (simple-root coords)."""
    if len(gcm.components()) != 1:
        raise InputError("highest root requires an indecomposable GCM")
    return positive_roots(gcm)[-1]


def coxeter_number(gcm: GeneralizedCartanMatrix) -> int:
    """h = 1 + height of the highest root (max over components)."""
    h = 1
    for comp in gcm.components():
        sub = gcm.submatrix(comp)
        h = max(h, 1 + sum(highest_root(sub)))
    return h


# -- named types -------------------------------------------------------

_NAMED: dict[str, list[list[int]]] = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "A4": [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]],
    # B2: alpha_1 long, alpha_2 short (a_12 = -1, a_21 = -2)
    "B2": [[2, -1], [-2, 2]],
    "C2": [[2, -2], [-1, 2]],
    "G2": [[2, -1], [-3, 2]],
}


def named_gcm(name: str) -> GeneralizedCartanMatrix:
    """A named finite type (A1..A4, B2, C2, G2) or its untwisted
    affinization ("affine A2", or the shorthand "A2~")."""
    key = name.strip()
    affine = False
    if key.lower().startswith("affine"):
        affine = True
        key = key[len("affine"):].strip()
    if key.endswith("~"):
        affine = True
        key = key[:-1]
    key = key.upper()
    if key not in _NAMED:
        raise InputError(f"unknown type {name!r}; known: {sorted(_NAMED)}")
    m = _NAMED[key]
    n = len(m)
    fin = GeneralizedCartanMatrix(tuple(str(i + 1) for i in range(n)),
                                  tuple(tuple(r) for r in m))
    if not affine:
        return fin
    return affinize(fin)


def affinize(gcm: GeneralizedCartanMatrix) -> GeneralizedCartanMatrix:
    """Untwisted affinization of an indecomposable finite-type GCM.

    The new node "0" pairs against the highest root theta:
    a_0j = -<theta^vee, alpha_j>, a_j0 = -<alpha_j^vee, theta>.
    """
    if len(gcm.components()) != 1:
        raise InputError("affinization requires an indecomposable GCM")
    n = gcm.rank
    theta = highest_root(gcm)
    eps = gcm.symmetrizer()
    # <theta^vee, alpha_j> = 2 (theta, alpha_j) / (theta, theta) for the
    # symmetrized form B_ij = eps_i * a_ij
    B = [[eps[i] * gcm.entries[i][j] for j in range(n)] for i in range(n)]
    tt = sum(theta[i] * B[i][j] * theta[j] for i in range(n) for j in range(n))
    a0 = []
    for j in range(n):
        tj = sum(theta[i] * B[i][j] for i in range(n))
        num = 2 * tj
        if num % tt:
            raise InputError("non-integral affinization pairing")
        a0.append(-(num // tt))
    aj0 = []
    for j in range(n):
        # <alpha_j^vee, theta> = sum_k theta_k a_jk
        aj0.append(-sum(theta[k] * gcm.entries[j][k] for k in range(n)))
    labels = ("0",) + gcm.labels
    rows = [tuple([2] + a0)] + [
        tuple([aj0[j]] + list(gcm.entries[j])) for j in range(n)
    ]
    return GeneralizedCartanMatrix(labels, tuple(rows))


def gcm_from_json(data: dict | str | Path) -> GeneralizedCartanMatrix:
    """Load {"type": "A2"} or {"matrix": [[2,-1],[-1,2]], "labels": [...]}."""
    if isinstance(data, (str, Path)):
        with open(data) as fh:
            data = json.load(fh)
    if not isinstance(data, dict):
        raise InputError("GCM description must be a JSON object")
    if "type" in data:
        return named_gcm(data["type"])
    if "matrix" in data:
        m = data["matrix"]
        labels = data.get("labels") or [str(i + 1) for i in range(len(m))]
        return GeneralizedCartanMatrix(tuple(str(x) for x in labels),
                                       tuple(tuple(int(v) for v in r) for r in m))
    raise InputError('GCM description needs a "type" or "matrix" key')
