"""Constructive cofreeness machinery for connected graded bialgebras.

Pipeline, for a degree-truncated algebra A (bound N):

1. ``primitive_basis``: the degree-n primitives, as the exact kernel of
   the reduced coproduct on the slice.
2. ``build_omega``: a map from tensor words of primitives into A, defined
   by grafting — omega() = unit, omega(x w) = g(x) • omega(w) — where g is
   a right inverse of f(x) = x•unit.  On the tree algebras f scales a
   homogeneous element by its degree, so g divides by it; otherwise g is
   found by an exact per-degree solve.  omega is a degree-preserving
   coalgebra morphism onto A (deconcatenation on the word side) and
   invertible on every slice; both are exposed as checks.
3. ``eulerian_psi``: the convolution logarithm of the identity,
   psi = sum (−1)^{m+1}/m · mul^{m−1} ∘ reduced-Δ^{m−1}.  It fixes
   primitives and kills products of augmentation-ideal elements.
4. ``build_hopf_iso``: varpi = (length-1 component of omega⁻¹ ∘ psi),
   then F(x) = sum_m varpi^{⊗m}(reduced-Δ^{m−1}(x)) — the unique coalgebra
   morphism to the word side whose length-1 component is varpi.  F takes
   the commutative product to the shuffle product, slice by slice, and is
   invertible; again checks, not assumptions.

Everything is exact rational arithmetic.  The checks return LawReport
values (same shape as the axiom sweeps), so a failed property names its
witness.

The last section probes the converse: on the counter algebra with two
distinct labels, no element has reduced coproduct equal to the single
mixed tensor v_d ⊗ v_e; ``cofree_obstruction`` sets up that linear system
and reports it infeasible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from .axioms import AlgebraHandle, LawReport
from .linalg import invert, mat_vec, nullspace, rank, solve
from .lincomb import LinComb, bilinear_extend, unit
from .shuffle import Word, deconcat, fmt_word, shuffle_lc


class TruncatedBialgebra:
    """A connected graded bialgebra handle cut at degree N.

    Caches the slice bases and key-level product, coproduct, reduced
    coproduct, and iterated-reduced-coproduct tables; everything else in
    this module works through one of these."""

    def __init__(self, alg: AlgebraHandle, N: int):
        for piece in ("mul", "coproduct", "counit"):
            if getattr(alg, piece) is None:
                raise ValueError(f"{alg.name} lacks {piece}")
        self.alg = alg
        self.N = N
        self.slices = {n: list(alg.basis(n)) for n in range(N + 1)}
        if self.slices[0] != [alg.unit]:
            raise ValueError(f"{alg.name} is not connected")
        self.deg = {k: n for n, ks in self.slices.items() for k in ks}
        self._mul: dict = {}
        self._prelie: dict = {}
        self._cop: dict = {}
        self._iter: dict = {}
        self._psi: dict = {}
        self._prim: dict = {}
        self._index: dict = {}

    # -- memoized key-level evaluators --------------------------------------

    def mul_k(self, a, b) -> LinComb:
        out = self._mul.get((a, b))
        if out is None:
            out = self._mul[(a, b)] = self.alg.mul(a, b)
        return out

    def prelie_k(self, a, b) -> LinComb:
        out = self._prelie.get((a, b))
        if out is None:
            out = self._prelie[(a, b)] = self.alg.prelie(a, b)
        return out

    def cop_k(self, k) -> LinComb:
        out = self._cop.get(k)
        if out is None:
            out = self._cop[k] = self.alg.coproduct(k)
        return out

    def mul(self, x: LinComb, y: LinComb) -> LinComb:
        return bilinear_extend(self.mul_k, x, y)

    def prelie(self, x: LinComb, y: LinComb) -> LinComb:
        return bilinear_extend(self.prelie_k, x, y)

    def cop(self, x: LinComb) -> LinComb:
        return x.map_linear(self.cop_k)

    def reduced_k(self, k) -> LinComb:
        """Coproduct minus the two unit legs; zero on the unit itself."""
        e = self.alg.unit
        if k == e:
            return LinComb()
        return self.cop_k(k) - unit((k, e)) - unit((e, k))

    def reduced(self, x: LinComb) -> LinComb:
        return x.map_linear(self.reduced_k)

    def iter_reduced(self, k, m: int) -> LinComb:
        """(m−1)-fold iterated reduced coproduct of a key, over m-tuples."""
        if m == 1:
            return LinComb() if k == self.alg.unit else unit((k,))
        key = (k, m)
        out = self._iter.get(key)
        if out is None:
            out = LinComb()
            for t, c in self.iter_reduced(k, m - 1).items():
                for (a, b), c2 in self.reduced_k(t[-1]).items():
                    out.add_term(t[:-1] + (a, b), c * c2)
            self._iter[key] = out
        return out

    # -- coordinates ---------------------------------------------------------

    def index(self, n: int) -> dict:
        idx = self._index.get(n)
        if idx is None:
            idx = self._index[n] = {k: i for i, k in
                                    enumerate(self.slices[n])}
        return idx

    def coords(self, x: LinComb, n: int) -> list[Fraction]:
        """Coordinate vector of a homogeneous element over the slice basis."""
        idx = self.index(n)
        vec = [Fraction(0)] * len(idx)
        for k, c in x.items():
            vec[idx[k]] += c
        return vec

    def psi_k(self, k) -> LinComb:
        out = self._psi.get(k)
        if out is None:
            out = LinComb()
            for m in range(1, self.deg[k] + 1):
                sign = Fraction((-1) ** (m + 1), m)
                for t, c in self.iter_reduced(k, m).items():
                    term = unit(t[0])
                    for leg in t[1:]:
                        term = self.mul(term, unit(leg))
                    out.iadd_scaled(sign * c, term)
            self._psi[k] = out
        return out


def primitive_basis(tb: TruncatedBialgebra, n: int) -> list[LinComb]:
    """Kernel of the reduced coproduct on the degree-n slice."""
    if n > tb.N:
        raise ValueError(f"degree {n} beyond bound {tb.N}")
    if n not in tb._prim:
        keys = tb.slices[n]
        if n == 0 or not keys:
            tb._prim[n] = []
        else:
            reds = [dict(tb.reduced_k(k).items()) for k in keys]
            ks = tb.alg.key_str
            pairs = sorted({p for r in reds for p in r},
                           key=lambda p: (ks(p[0]), ks(p[1])))
            if pairs:
                vecs = nullspace([[r.get(p, 0) for r in reds]
                                  for p in pairs])
            else:  # every reduced coproduct vanished: the whole slice
                vecs = [[Fraction(int(i == j)) for j in range(len(keys))]
                        for i in range(len(keys))]
            out = []
            for v in vecs:
                p = LinComb()
                for k, c in zip(keys, v):
                    p.add_term(k, c)
                out.append(p)
            tb._prim[n] = out
    return tb._prim[n]


def eulerian_psi(tb: TruncatedBialgebra, x: LinComb) -> LinComb:
    """Convolution logarithm of the identity, applied to x: fixes
    primitives, annihilates products of augmentation-ideal elements."""
    out = LinComb()
    for k, c in x.items():
        out.iadd_scaled(c, tb.psi_k(k))
    return out


# ---------------------------------------------------------------------------
# omega: tensor words of primitives -> A, by grafting.
# ---------------------------------------------------------------------------

class Omega:
    """The grafting-built coalgebra map from words of primitive letters.

    Letters are strings "v{n}_{i}" naming the i-th degree-n primitive;
    a word's degree is the sum of its letters' degrees."""

    def __init__(self, tb: TruncatedBialgebra,
                 g: Optional[Callable] = None):
        self.tb = tb
        self.letters: list[str] = []
        self.letter_prim: dict[str, LinComb] = {}
        self.letter_deg: dict[str, int] = {}
        for n in range(1, tb.N + 1):
            for i, p in enumerate(primitive_basis(tb, n)):
                name = f"v{n}_{i}"
                self.letters.append(name)
                self.letter_prim[name] = p
                self.letter_deg[name] = n
        self._g = {name: (g(self.letter_prim[name], self.letter_deg[name])
                          if g else self._right_inverse(name))
                   for name in self.letters}
        self._words: dict[int, list[Word]] = {}
        self._omega: dict[Word, LinComb] = {}
        self._matrix: dict[int, list[list[Fraction]]] = {}
        self._inv_t: dict[int, list[list[Fraction]]] = {}

    def _f(self, x: LinComb) -> LinComb:
        return self.tb.prelie(x, unit(self.tb.alg.unit))

    def _right_inverse(self, letter: str) -> LinComb:
        """g with f(g) equal to the letter's primitive.  When f scales the
        primitive by its degree (the tree algebras), g is the primitive
        over its degree; otherwise solve f's linear system on the slice,
        free coordinates pinned to zero."""
        p = self.letter_prim[letter]
        n = self.letter_deg[letter]
        if self._f(p) == p.scale(n):
            return p.scale(Fraction(1, n))
        keys = self.tb.slices[n]
        cols = [self.tb.coords(self._f(unit(k)), n) for k in keys]
        m = [[cols[j][i] for j in range(len(keys))]
             for i in range(len(keys))]
        sol = solve(m, self.tb.coords(p, n))
        if sol is None:
            raise ValueError(
                f"f is not surjective onto primitives in degree {n}")
        g = LinComb()
        for k, c in zip(keys, sol):
            g.add_term(k, c)
        return g

    def words(self, n: int) -> list[Word]:
        """All letter words of total degree n, in letter order."""
        got = self._words.get(n)
        if got is None:
            got = []

            def rec(prefix: tuple, rem: int) -> None:
                if rem == 0:
                    got.append(prefix)
                    return
                for letter in self.letters:
                    if self.letter_deg[letter] <= rem:
                        rec(prefix + (letter,),
                            rem - self.letter_deg[letter])

            rec((), n)
            self._words[n] = got
        return got

    def word_degree(self, w: Word) -> int:
        return sum(self.letter_deg[letter] for letter in w)

    def apply_word(self, w: Word) -> LinComb:
        out = self._omega.get(w)
        if out is None:
            if not w:
                out = unit(self.tb.alg.unit)
            else:
                out = self.tb.prelie(self._g[w[0]], self.apply_word(w[1:]))
            self._omega[w] = out
        return out

    def apply(self, x: LinComb) -> LinComb:
        return x.map_linear(self.apply_word)

    def matrix(self, n: int) -> list[list[Fraction]]:
        """Rows indexed by words(n), columns by the degree-n slice."""
        got = self._matrix.get(n)
        if got is None:
            got = [self.tb.coords(self.apply_word(w), n)
                   for w in self.words(n)]
            self._matrix[n] = got
        return got

    def inverse(self, y: LinComb, n: int) -> LinComb:
        """Word expansion of a homogeneous degree-n element."""
        inv_t = self._inv_t.get(n)
        if inv_t is None:
            m = self.matrix(n)
            mt = [[m[i][j] for i in range(len(m))] for j in range(len(m))]
            inv_t = self._inv_t[n] = invert(mt)
        out = LinComb()
        for w, c in zip(self.words(n), mat_vec(inv_t, self.tb.coords(y, n))):
            out.add_term(w, c)
        return out

    # -- checks --------------------------------------------------------------

    def check_iso(self) -> list[LawReport]:
        """Per degree: as many words as slice elements, and full rank."""
        name = self.tb.alg.name
        reports = []
        for n in range(1, self.tb.N + 1):
            witness = None
            nw, nk = len(self.words(n)), len(self.tb.slices[n])
            if nw != nk:
                witness = f"{nw} words vs {nk} basis elements"
            elif rank(self.matrix(n)) != nk:
                witness = f"rank {rank(self.matrix(n))} < {nk}"
            reports.append(LawReport("omega-iso", name, n, witness))
        return reports

    def check_coalgebra(self) -> LawReport:
        """Coproduct of omega(w) equals omega⊗omega of the deconcatenation."""
        name = self.tb.alg.name
        for n in range(self.tb.N + 1):
            for w in self.words(n):
                lhs = self.tb.cop(self.apply_word(w))
                rhs = LinComb()
                for (w1, w2), c in deconcat(w).items():
                    for k1, c1 in self.apply_word(w1).items():
                        for k2, c2 in self.apply_word(w2).items():
                            rhs.add_term((k1, k2), c * c1 * c2)
                if lhs != rhs:
                    return LawReport("omega-coalgebra", name, self.tb.N,
                                     f"w={fmt_word(w)}")
        return LawReport("omega-coalgebra", name, self.tb.N)


def build_omega(tb: TruncatedBialgebra,
                g: Optional[Callable] = None) -> Omega:
    return Omega(tb, g)


# ---------------------------------------------------------------------------
# F: the induced isomorphism onto the shuffle algebra of primitive letters.
# ---------------------------------------------------------------------------

class HopfIso:
    """varpi = length-1 component of omega⁻¹ ∘ psi, and F the coalgebra
    morphism with that length-1 component: multiplicative into the shuffle
    product, invertible per slice."""

    def __init__(self, tb: TruncatedBialgebra,
                 omega: Optional[Omega] = None):
        self.tb = tb
        self.omega = omega if omega is not None else Omega(tb)
        self._varpi: dict = {}
        self._F: dict = {}

    def varpi_k(self, k) -> LinComb:
        """LinComb over letters."""
        out = self._varpi.get(k)
        if out is None:
            n = self.tb.deg[k]
            out = LinComb()
            if n > 0:
                y = self.tb.psi_k(k)
                if y:
                    for w, c in self.omega.inverse(y, n).items():
                        if len(w) == 1:
                            out.add_term(w[0], c)
            self._varpi[k] = out
        return out

    def varpi(self, x: LinComb) -> LinComb:
        return x.map_linear(self.varpi_k)

    def F_k(self, k) -> LinComb:
        """LinComb over letter words."""
        out = self._F.get(k)
        if out is None:
            if k == self.tb.alg.unit:
                out = unit(())
            else:
                out = LinComb()
                for m in range(1, self.tb.deg[k] + 1):
                    for t, c in self.tb.iter_reduced(k, m).items():
                        acc = unit(())
                        for leg in t:
                            vl = self.varpi_k(leg)
                            nxt = LinComb()
                            for w, cw in acc.items():
                                for letter, cl in vl.items():
                                    nxt.add_term(w + (letter,), cw * cl)
                            acc = nxt
                            if not acc:
                                break
                        out.iadd_scaled(c, acc)
            self._F[k] = out
        return out

    def F(self, x: LinComb) -> LinComb:
        return x.map_linear(self.F_k)

    def matrix(self, n: int) -> list[list[Fraction]]:
        """Rows indexed by the degree-n slice, columns by words(n)."""
        widx = {w: j for j, w in enumerate(self.omega.words(n))}
        rows = []
        for k in self.tb.slices[n]:
            vec = [Fraction(0)] * len(widx)
            for w, c in self.F_k(k).items():
                vec[widx[w]] += c
            rows.append(vec)
        return rows

    # -- checks --------------------------------------------------------------

    def check_multiplicative(self) -> LawReport:
        """F of the commutative product is the shuffle of the F images,
        for every basis pair within the degree bound."""
        name = self.tb.alg.name
        N = self.tb.N
        for da in range(N + 1):
            for db in range(N + 1 - da):
                for a in self.tb.slices[da]:
                    for b in self.tb.slices[db]:
                        lhs = self.F(self.tb.mul_k(a, b))
                        rhs = shuffle_lc(self.F_k(a), self.F_k(b))
                        if lhs != rhs:
                            ks = self.tb.alg.key_str
                            return LawReport(
                                "hopf-multiplicative", name, N,
                                f"x={ks(a)} y={ks(b)}")
        return LawReport("hopf-multiplicative", name, N)

    def check_projection(self) -> LawReport:
        """The length-1 component of F is varpi, and F sends the unit to
        the empty word."""
        name = self.tb.alg.name
        if self.F_k(self.tb.alg.unit) != unit(()):
            return LawReport("hopf-projection", name, self.tb.N,
                             "unit image")
        for n in range(1, self.tb.N + 1):
            for k in self.tb.slices[n]:
                head = LinComb()
                for w, c in self.F_k(k).items():
                    if len(w) == 1:
                        head.add_term(w[0], c)
                if head != self.varpi_k(k):
                    return LawReport("hopf-projection", name, self.tb.N,
                                     f"x={self.tb.alg.key_str(k)}")
        return LawReport("hopf-projection", name, self.tb.N)

    def check_coalgebra(self) -> LawReport:
        """Deconcatenation of F(x) equals F⊗F of the coproduct."""
        name = self.tb.alg.name
        for n in range(self.tb.N + 1):
            for k in self.tb.slices[n]:
                lhs = self.F_k(k).map_linear(deconcat)
                rhs = LinComb()
                for (a, b), c in self.tb.cop_k(k).items():
                    for w1, c1 in self.F_k(a).items():
                        for w2, c2 in self.F_k(b).items():
                            rhs.add_term((w1, w2), c * c1 * c2)
                if lhs != rhs:
                    return LawReport("hopf-coalgebra", name, self.tb.N,
                                     f"x={self.tb.alg.key_str(k)}")
        return LawReport("hopf-coalgebra", name, self.tb.N)

    def check_iso(self) -> list[LawReport]:
        """Full rank of the F matrix on each slice."""
        name = self.tb.alg.name
        reports = []
        for n in range(1, self.tb.N + 1):
            m = self.matrix(n)
            witness = None
            if len(m) != len(self.omega.words(n)):
                witness = f"{len(m)} keys vs {len(self.omega.words(n))} words"
            elif rank(m) != len(m):
                witness = f"rank {rank(m)} < {len(m)}"
            reports.append(LawReport("hopf-iso", name, n, witness))
        return reports

    def check_primitives(self) -> LawReport:
        """varpi restricted to the chosen primitives picks out exactly the
        matching letter — the invertibility of varpi on primitives."""
        name = self.tb.alg.name
        for letter in self.omega.letters:
            if self.varpi(self.omega.letter_prim[letter]) != unit(letter):
                return LawReport("varpi-primitives", name, self.tb.N,
                                 f"letter={letter}")
        return LawReport("varpi-primitives", name, self.tb.N)

    def run_checks(self) -> list[LawReport]:
        reports = self.omega.check_iso()
        reports.append(self.omega.check_coalgebra())
        reports += self.check_iso()
        reports.append(self.check_primitives())
        reports.append(self.check_projection())
        reports.append(self.check_coalgebra())
        reports.append(self.check_multiplicative())
        return reports


def build_hopf_iso(tb: TruncatedBialgebra,
                   omega: Optional[Omega] = None) -> HopfIso:
    return HopfIso(tb, omega)


# ---------------------------------------------------------------------------
# The obstruction on the counter algebra with two labels.
# ---------------------------------------------------------------------------

def cofree_obstruction(labels=("d", "e"),
                       counter_cap: int = 2) -> Optional[LinComb]:
    """Solve reduced-Δ(x) = v ⊗ w on the degree-2 slice, where v and w are
    the bare vertices with the first and last label.  Returns a solving x,
    or None when the linear system is infeasible (counters swept up to
    counter_cap).  With two distinct labels there is no solution; with one
    label x = (v·v)/2 works."""
    from .handles import ucp_handle
    from .ptree import parse

    alg = ucp_handle(labels=labels, counter_cap=counter_cap)
    tb = TruncatedBialgebra(alg, 2)
    target = (parse("{[%s]}" % labels[0]), parse("{[%s]}" % labels[-1]))
    keys = tb.slices[2]
    reds = [dict(tb.reduced_k(k).items()) for k in keys]
    ks = alg.key_str
    pairs = sorted({p for r in reds for p in r} | {target},
                   key=lambda p: (ks(p[0]), ks(p[1])))
    m = [[r.get(p, 0) for r in reds] for p in pairs]
    b = [Fraction(int(p == target)) for p in pairs]
    sol = solve(m, b)
    if sol is None:
        return None
    x = LinComb()
    for k, c in zip(keys, sol):
        x.add_term(k, c)
    return x
