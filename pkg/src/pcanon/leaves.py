"""Light leaves, standard (localized) decompositions, and local
intersection forms of Bott-Samelson bimodules.

For each 01-subexpression e of an expression, a light leaf LL_e maps
B(word) onto B(reduced word of the endpoint) with degree equal to the
defect of e.  LL_e and its vertical flip are built in lockstep from the
generator morphisms, with braid maps inserted along ShortLex-pinned rex
paths.  The local intersection form at (x, d) pairs the defect-d leaves
at x against the flipped defect-(-d) leaves, extracting the scalar on the
standard line of the all-ones subexpression in the localized
decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bimodule import BimoduleMap, SoergelCategory
from .coxeter import CoxeterElement
from .errors import InputError, InternalInconsistencyError
from .mpoly import MultiPoly, RootFraction


# -- rex moves ----------------------------------------------------------------


def _braid_move_targets(cat: SoergelCategory, word: tuple[int, ...]):
    """All single-braid-move neighbours of a reduced word, with move data
    (position, length, s, t)."""
    out = []
    m_table = cat.system.m
    n = len(word)
    for pos in range(n):
        for s in range(cat.ngens):
            for t in range(cat.ngens):
                if s == t:
                    continue
                m = m_table[s][t]
                if m == 0 or pos + m > n:
                    continue
                chunk = tuple(s if k % 2 == 0 else t for k in range(m))
                if word[pos:pos + m] == chunk:
                    new = word[:pos] + tuple(
                        t if k % 2 == 0 else s for k in range(m)) + word[pos + m:]
                    out.append(((pos, m, s, t), new))
    return out


def rex_path(cat: SoergelCategory, source: tuple[int, ...],
             target: tuple[int, ...]) -> list[tuple[int, int, int, int]]:
    """A deterministic chain of braid moves from one reduced word to
    another reduced word of the same element (BFS, Tits' theorem)."""
    if source == target:
        return []
    if cat.system.normal_form(source) != cat.system.normal_form(target):
        raise InputError("rex path requires words for the same element")
    frontier = {source: []}
    seen = {source}
    while frontier:
        new_frontier = {}
        for word, path in sorted(frontier.items()):
            for move, nxt in _braid_move_targets(cat, word):
                if nxt in seen:
                    continue
                npath = path + [move]
                if nxt == target:
                    return npath
                seen.add(nxt)
                new_frontier[nxt] = npath
        frontier = new_frontier
    raise InternalInconsistencyError("no braid path between reduced words")


def rex_map(cat: SoergelCategory, source: tuple[int, ...],
            target: tuple[int, ...]) -> tuple[BimoduleMap, BimoduleMap]:
    """(map, flip) for the chain of braid moves source -> target.

    The flip is the reversed chain with each j_{s,t} replaced by j_{t,s}.
    """
    key = (source, target)
    got = cat._rex_cache.get(key)
    if got is not None:
        return got
    path = rex_path(cat, source, target)
    fwd = cat.identity(source)
    word = source
    for (pos, m, s, t) in path:
        jmap = cat.braid(s, t)
        pre = word[:pos]
        post = word[pos + m:]
        step = cat.tensor(cat.tensor(cat.identity(pre), jmap),
                          cat.identity(post))
        fwd = cat.compose(step, fwd)
        word = word[:pos] + tuple(
            t if k % 2 == 0 else s for k in range(m)) + word[pos + m:]
    if word != target:
        raise InternalInconsistencyError("rex path landed on the wrong word")
    bwd = cat.identity(target)
    word = target
    for (pos, m, s, t) in reversed(path):
        jmap = cat.braid(t, s)
        pre = word[:pos]
        post = word[pos + m:]
        step = cat.tensor(cat.tensor(cat.identity(pre), jmap),
                          cat.identity(post))
        bwd = cat.compose(step, bwd)
        word = word[:pos] + tuple(
            s if k % 2 == 0 else t for k in range(m)) + word[pos + m:]
    if word != source:
        raise InternalInconsistencyError("flipped rex path mismatch")
    out = (fwd, bwd)
    cat._rex_cache[key] = out
    return out


# -- light leaves ------------------------------------------------------------------


@dataclass
class LightLeaf:
    """One subexpression's leaf: LL_e : B(word) -> B(ShortLex(x(e)))."""

    subexpression: tuple[int, ...]
    endpoint: CoxeterElement
    defect: int
    map: BimoduleMap
    flip: BimoduleMap


def light_leaves(cat: SoergelCategory, word: tuple[int, ...]
                 ) -> list[LightLeaf]:
    """All 2^len(word) light leaves, built inductively (U0/U1/D0/D1)."""
    word = tuple(word)
    sys = cat.system
    e0 = sys.identity
    start = LightLeaf((), e0, 0, cat.identity(()), cat.identity(()))
    states = [start]
    for k, s in enumerate(word):
        new_states = []
        for st in states:
            x = st.endpoint
            xs = sys.right_multiply_gen(x, s)
            up = xs.length > x.length
            ext = cat.tensor(st.map, cat.identity((s,)))
            ext_flip = cat.tensor(st.flip, cat.identity((s,)))
            base_word = x.word + (s,)
            if up:
                # U1: keep the strand; rex to the ShortLex word of xs
                fwd, bwd = rex_map(cat, base_word, xs.word)
                new_states.append(LightLeaf(
                    st.subexpression + (1,), xs, st.defect,
                    cat.compose(fwd, ext), cat.compose(ext_flip, bwd)))
                # U0: dot off the strand
                dot = cat.tensor(cat.identity(x.word), cat.upper_dot(s))
                dot_f = cat.tensor(cat.identity(x.word), cat.lower_dot(s))
                new_states.append(LightLeaf(
                    st.subexpression + (0,), x, st.defect + 1,
                    cat.compose(dot, ext), cat.compose(ext_flip, dot_f)))
            else:
                # rewrite x with a reduced word ending in s
                y = xs  # the shorter element
                yword = y.word + (s,)
                fwd, bwd = rex_map(cat, x.word, yword)
                fwd = cat.tensor(fwd, cat.identity((s,)))
                bwd = cat.tensor(bwd, cat.identity((s,)))
                mid = cat.compose(fwd, ext)          # B(...) -> B(y + s + s)
                mid_flip = cat.compose(ext_flip, bwd)
                # D0: merge the doubled strand, stay at x
                mg = cat.tensor(cat.identity(y.word), cat.merge_trivalent(s))
                mg_f = cat.tensor(cat.identity(y.word), cat.split_trivalent(s))
                m_fwd, m_bwd = rex_map(cat, yword, x.word)
                new_states.append(LightLeaf(
                    st.subexpression + (0,), x, st.defect - 1,
                    cat.compose(m_fwd, cat.compose(mg, mid)),
                    cat.compose(mid_flip, cat.compose(mg_f, m_bwd))))
                # D1: cap the doubled strand, move down to y
                cp = cat.tensor(cat.identity(y.word), cat.cap(s))
                cp_f = cat.tensor(cat.identity(y.word), cat.cup(s))
                new_states.append(LightLeaf(
                    st.subexpression + (1,), y, st.defect,
                    cat.compose(cp, mid),
                    cat.compose(mid_flip, cp_f)))
        states = new_states
    return states


# -- standard decomposition --------------------------------------------------------


class StandardDecomposition:
    """Localized decomposition of B(word) over Q = Frac(R).

    Column e of the change-of-basis matrix is the joint eigenvector
    q_e = prod over slots of (+-(prefix twist of delta) (x) c_0 + c_1),
    with right-eigenvalue character f -> x(e)(f).  Entries are polynomial;
    the determinant is a unit multiple of a product of twisted roots.
    """

    def __init__(self, cat: SoergelCategory, word: tuple[int, ...]):
        self.cat = cat
        self.word = tuple(word)
        self.bimodule = cat.bimodule(self.word)
        sys = cat.system
        n = len(self.word)
        subexprs = list(self.bimodule.basis)
        self.subexpressions = subexprs
        self.endpoints = []
        for e in subexprs:
            x = sys.identity
            for bit, s in zip(e, self.word):
                if bit:
                    x = sys.right_multiply_gen(x, s)
            self.endpoints.append(x)
        # change of basis, built by the slot recursion
        cols: dict[tuple[int, ...], dict[tuple[int, ...], MultiPoly]] = {
            (): {(): MultiPoly.const(cat.nvars, 1)}}
        prefix_words: dict[tuple[int, ...], tuple[int, ...]] = {(): ()}
        for k in range(n):
            s = self.word[k]
            new_cols = {}
            new_words = {}
            for e, col in cols.items():
                pw = prefix_words[e]
                twisted = cat.act_word(pw, cat.delta(s))
                for bit in (0, 1):
                    sign = Fraction(1) if bit == 0 else Fraction(-1)
                    newcol: dict[tuple[int, ...], MultiPoly] = {}
                    for eps, poly in col.items():
                        newcol[eps + (1,)] = newcol.get(
                            eps + (1,), MultiPoly.zero(cat.nvars)) + poly
                        contrib = poly * twisted.scale(sign)
                        if contrib:
                            newcol[eps + (0,)] = newcol.get(
                                eps + (0,), MultiPoly.zero(cat.nvars)) + contrib
                    new_cols[e + (bit,)] = {k2: v for k2, v in newcol.items() if v}
                    new_words[e + (bit,)] = pw + ((s,) if bit else ())
            cols = new_cols
            prefix_words = new_words
        self._columns = cols

    def change_of_basis(self) -> list[list[MultiPoly]]:
        """Matrix over R: column e expands q_e in the left basis."""
        b = self.bimodule
        zero = MultiPoly.zero(self.cat.nvars)
        mat = [[zero] * b.dim for _ in range(b.dim)]
        for j, e in enumerate(self.subexpressions):
            for eps, poly in self._columns[e].items():
                mat[b.index[eps]][j] = poly
        return mat

    def top_vector(self) -> list[MultiPoly]:
        """Coordinates of q_(1,...,1) (the standard line of the product
        element when word is reduced)."""
        b = self.bimodule
        col = self._columns[(1,) * len(self.word)]
        return [col.get(eps, MultiPoly.zero(self.cat.nvars))
                for eps in b.basis]


def standard_line_scalar(cat: SoergelCategory, word: tuple[int, ...],
                         cmatrix: list[list[MultiPoly]]) -> Fraction:
    """The coefficient of q_top in C(q_top), for C an endomorphism matrix
    of B(word) in the left basis.

    Peels slots right to left: with y = y0 (x) c_0 + y1 (x) c_1 and
    delta~ the all-ones prefix twist of the last slot's half-root,
    coeff_top(y) = (coeff_top(y1) - coeff_top(y0)/delta~) / 2.
    """
    word = tuple(word)
    sd = standard_decomposition(cat, word)
    u = sd.top_vector()
    y = []
    for r in range(len(cmatrix)):
        acc = MultiPoly.zero(cat.nvars)
        for c, val in enumerate(u):
            if val and cmatrix[r][c]:
                acc = acc + cmatrix[r][c] * val
        y.append(RootFraction.from_poly(acc))
    # twisted half-roots along the all-ones prefixes
    twists = []
    prefix: tuple[int, ...] = ()
    for s in word:
        twists.append(cat.act_word(prefix, cat.delta(s)))
        prefix = prefix + (s,)

    def peel(vec: list[RootFraction], k: int) -> RootFraction:
        if k == 0:
            return vec[0]
        y0 = vec[0::2]  # last bit 0 (the last bit varies fastest in lex order)
        y1 = vec[1::2]
        beta = peel(y1, k - 1)
        gamma = peel(y0, k - 1)
        return (beta - gamma.div_linear(twists[k - 1])).div_scalar(Fraction(2))

    out = peel(y, len(word))
    try:
        return out.as_constant()
    except ValueError as exc:
        raise InternalInconsistencyError(
            f"standard-line scalar is not a constant: {exc}") from exc


def standard_decomposition(cat: SoergelCategory, word) -> StandardDecomposition:
    word = tuple(word)
    cache = getattr(cat, "_std_cache", None)
    if cache is None:
        cache = {}
        cat._std_cache = cache
    got = cache.get(word)
    if got is None:
        got = StandardDecomposition(cat, word)
        cache[word] = got
    return got


# -- intersection forms -----------------------------------------------------------------


@dataclass
class IntersectionForm:
    """Local Gram data of B(word) at an endpoint x in degree d >= 0."""

    word: tuple[int, ...]
    x: CoxeterElement
    degree: int
    rows: list[tuple[int, ...]]      # flipped leaves, defect -d
    cols: list[tuple[int, ...]]      # leaves, defect +d
    entries: list[list[Fraction]]

    def rank_rational(self) -> int:
        from .linalg import rank_rational
        return rank_rational(self.entries)

    def integral_matrix(self) -> tuple[list[list[int]], int]:
        """(integer matrix, k) with entries = 2^-k * matrix; the smallest
        power of 2 clears all denominators.  A denominator with an odd
        factor is a hard error (it would contradict the Z' integrality)."""
        k = 0
        for row in self.entries:
            for val in row:
                d = val.denominator
                e = 0
                while d % 2 == 0:
                    d //= 2
                    e += 1
                if d != 1:
                    raise InternalInconsistencyError(
                        f"Gram entry {val} has non-2-power denominator")
                k = max(k, e)
        scale = 1 << k
        return [[int(v * scale) for v in row] for row in self.entries], k

    def rank_mod_p(self, p: int) -> int:
        from .linalg import rank_mod_p
        mat, k = self.integral_matrix()
        if p == 2 and k > 0:
            raise InternalInconsistencyError(
                "Gram matrix has 2-power denominators; rank mod 2 undefined")
        return rank_mod_p(mat, p)


def intersection_form(cat: SoergelCategory, word, x: CoxeterElement,
                      d: int, leaves: list[LightLeaf] | None = None
                      ) -> IntersectionForm:
    """Pair degree-d leaves at x against flipped degree-(-d) leaves.

    Entry (f, e) is the standard-line scalar of LL_e o flip(LL_f), an
    element of Z' = Z[1/2] for Cartan realizations.
    """
    word = tuple(word)
    if leaves is None:
        leaves = light_leaves(cat, word)
    at_x = [lf for lf in leaves if lf.endpoint == x]
    cols = [lf for lf in at_x if lf.defect == d]
    rows = [lf for lf in at_x if lf.defect == -d]
    entries = []
    for f in rows:
        row = []
        for e in cols:
            comp = cat.compose(e.map, f.flip)
            row.append(standard_line_scalar(cat, x.word, comp.matrix))
        entries.append(row)
    return IntersectionForm(word, x, d,
                            [f.subexpression for f in rows],
                            [e.subexpression for e in cols], entries)
