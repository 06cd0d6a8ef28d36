"""Symmetric-word extension of a preLie product (Oudom-Guin construction).

A right preLie product on a vector space extends canonically to its
symmetric algebra.  Words of basis keys stand for symmetric monomials, kept
as tuples sorted by a caller-supplied string order, with () the unit:

* x • 1 = x;
* a • (w × c) = (a • w) • c − Σ_i a • (w with w_i replaced by w_i • c),
  for a a single key, peeling one factor off the word;
* (x × y) • z = Σ (x • z') × (y • z''), unshuffling z over positions.

The peeled factor is by convention the last one in sort order; that the
result does not depend on this choice is a theorem about preLie products
(and fails for non-preLie ones), so `peel_defect` exposes the difference
against peeling at an arbitrary position as a testable quantity.

The defect helpers at the bottom turn the compatibility laws between the
extension, a commutative product, and a coproduct into computable linear
combinations that vanish exactly when the law holds.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

from .axioms import AlgebraHandle, LawReport
from .lincomb import LinComb, bilinear_extend, unit

SymWord = tuple  # sorted tuple of basis keys; () is the symmetric unit


def fmt_symword(w: SymWord, keystr: Callable = str) -> str:
    """`1` for the empty word, else factors joined with ` x `."""
    return " x ".join(keystr(k) for k in w) if w else "1"


class Extension:
    """Extension of `bullet` (key,key -> LinComb) to symmetric words.

    `keystr` fixes the sort order of word factors; it must be injective on
    the keys in play (serialized canonical forms are).
    """

    def __init__(self, bullet: Callable, keystr: Callable):
        self._raw = bullet
        self.keystr = keystr
        self._memo: dict = {}
        self._bmemo: dict = {}

    def bullet(self, a, b) -> LinComb:
        """The base product on keys, memoized (results are shared: treat
        them as read-only, as everything here does)."""
        if (a, b) not in self._bmemo:
            self._bmemo[(a, b)] = self._raw(a, b)
        return self._bmemo[(a, b)]

    # -- words ------------------------------------------------------------

    def word(self, keys) -> SymWord:
        return tuple(sorted(keys, key=self.keystr))

    def word_lc(self, factors: Sequence[LinComb]) -> LinComb:
        """Multilinear expansion of a list of LinCombs into one LinComb of
        symmetric words."""
        out = unit(())
        for f in factors:
            nxt = LinComb()
            for wk, c1 in out.items():
                for k, c2 in f.items():
                    nxt.add_term(self.word(wk + (k,)), c1 * c2)
            out = nxt
        return out

    def mul_words(self, a: LinComb, b: LinComb) -> LinComb:
        return bilinear_extend(
            lambda u, v: unit(self.word(u + v)), a, b)

    # -- the extended product ---------------------------------------------

    def _peel(self, a, w: SymWord, pos: int) -> LinComb:
        c = w[pos]
        rest = w[:pos] + w[pos + 1:]
        out = self.bullet_word(a, rest).map_linear(
            lambda x: self.bullet(x, c))
        for i in range(len(rest)):
            corr = self.bullet(rest[i], c)
            out.iadd_scaled(-1, corr.map_linear(
                lambda y: self.bullet_word(
                    a, self.word(rest[:i] + (y,) + rest[i + 1:]))))
        return out

    def bullet_word(self, a, w: SymWord) -> LinComb:
        """a • (w_1 × … × w_k) for a single key a; lands back in the base
        span.  Memoized."""
        if not w:
            return unit(a)
        if len(w) == 1:
            return self.bullet(a, w[0])
        if (a, w) not in self._memo:
            self._memo[(a, w)] = self._peel(a, w, len(w) - 1)
        return self._memo[(a, w)]

    def peel_defect(self, a, w: SymWord, pos: int) -> LinComb:
        """bullet_word minus the same computation peeling position `pos`;
        zero for every preLie product."""
        return self.bullet_word(a, w) - self._peel(a, w, pos)

    def pair(self, u: SymWord, v: SymWord) -> LinComb:
        """u • v for symmetric words, as a LinComb of symmetric words."""
        if not u:
            return unit(()) if not v else LinComb()
        if len(u) == 1:
            return self.bullet_word(u[0], v).map_keys(lambda k: (k,))
        head, rest = u[:1], u[1:]
        out = LinComb()
        n = len(v)
        for mask in range(1 << n):
            vi = tuple(v[i] for i in range(n) if mask >> i & 1)
            vo = tuple(v[i] for i in range(n) if not mask >> i & 1)
            out.iadd_scaled(1, self.mul_words(self.pair(head, vi),
                                              self.pair(rest, vo)))
        return out

    def apply(self, a: LinComb, b: LinComb) -> LinComb:
        """Bilinear extension of `pair` to LinCombs of symmetric words."""
        return bilinear_extend(self.pair, a, b)

    def apply_flat(self, x: LinComb, args: Sequence[LinComb]) -> LinComb:
        """x • (args_1 × … × args_m) for x a LinComb of base keys; the
        result is flattened back to base keys."""
        w = self.word_lc(args)
        out = LinComb()
        for xk, cx in x.items():
            for wk, cw in w.items():
                out.iadd_scaled(cx * cw, self.bullet_word(xk, wk))
        return out


# ---------------------------------------------------------------------------
# Law defects.  Each returns a LinComb that is zero iff the law holds on the
# given arguments.
# ---------------------------------------------------------------------------

def product_rule_defect(ext: Extension, mul: Callable, a, b,
                        cs: Sequence) -> LinComb:
    """(a·b) • (c_1×…×c_n) = Σ_{I⊆[n]} (a•Π_I)·(b•Π_{[n]∖I}), the Leibniz
    rule pushed through the extension."""
    n = len(cs)
    lhs = mul(a, b).map_linear(lambda k: ext.bullet_word(k, ext.word(cs)))
    rhs = LinComb()
    for mask in range(1 << n):
        wi = ext.word([cs[i] for i in range(n) if mask >> i & 1])
        wo = ext.word([cs[i] for i in range(n) if not mask >> i & 1])
        rhs.iadd_scaled(1, bilinear_extend(mul, ext.bullet_word(a, wi),
                                           ext.bullet_word(b, wo)))
    return lhs - rhs


def coproduct_rule_defect(ext: Extension, mul: Callable, cop: Callable,
                          unit_key, a, bs: Sequence) -> LinComb:
    """Compatibility of the extended product with a coproduct:

    Δ(a•(b_1×…×b_n)) = Σ_{I⊆[n]} a'•(Π^×_{i∈I} b_i') ⊗ (Π_{i∈I} b_i'')·(a''•Π^×_{i∉I} b_i)
    """
    n = len(bs)
    lhs = ext.bullet_word(a, ext.word(bs)).map_linear(cop)
    rhs = LinComb()
    da = cop(a)
    for mask in range(1 << n):
        inside = [i for i in range(n) if mask >> i & 1]
        wo = ext.word([bs[i] for i in range(n) if not mask >> i & 1])
        # expand the coproducts of the inside factors:
        # keys (word-of-first-legs, product-of-second-legs)
        acc = unit(((), unit_key))
        for i in inside:
            nxt = LinComb()
            dbi = cop(bs[i])
            for (wl, rk), c in acc.items():
                for (b1, b2), c2 in dbi.items():
                    for rk2, c3 in mul(rk, b2).items():
                        nxt.add_term((wl + (b1,), rk2), c * c2 * c3)
            acc = nxt
        for (wl, rk), c in acc.items():
            for (a1, a2), c2 in da.items():
                left = ext.bullet_word(a1, ext.word(wl))
                core = ext.bullet_word(a2, wo)
                for lk, c3 in left.items():
                    for ck, c4 in core.items():
                        for rk2, c5 in mul(rk, ck).items():
                            rhs.add_term((lk, rk2), c * c2 * c3 * c4 * c5)
    return lhs - rhs


def absorb_defect(ext: Extension, unit_key, a, bs: Sequence,
                  k: int) -> LinComb:
    """For a with primitive-style behavior, grafting k copies of the algebra
    unit inside a symmetric word is the same as applying x ↦ x•unit k times
    first: a•(unit^{×k}×b_1×…×b_l) = f^k(a)•(b_1×…×b_l)."""
    lhs = ext.bullet_word(a, ext.word([unit_key] * k + list(bs)))
    rhs = unit(a)
    for _ in range(k):
        rhs = rhs.map_linear(lambda x: ext.bullet(x, unit_key))
    rhs = rhs.map_linear(lambda x: ext.bullet_word(x, ext.word(bs)))
    return lhs - rhs


# ---------------------------------------------------------------------------
# Handle-level entry points: the extension of a packaged algebra's preLie
# product, and exhaustive sweeps of the laws above within a degree budget.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def extension_for(alg: AlgebraHandle) -> Extension:
    """One shared extension (with its memo table) per algebra handle."""
    return Extension(alg.prelie, alg.key_str)


def extend_bullet(x: LinComb, z: LinComb, alg: AlgebraHandle) -> LinComb:
    """The extended • on LinCombs over symmetric words of alg's basis keys.
    On size-1 words it agrees with alg.prelie; the empty word is the
    symmetric unit."""
    return extension_for(alg).apply(x, z)


def _degree_pool(alg: AlgebraHandle, lo: int, hi: int) -> list:
    return [(k, n) for n in range(lo, hi + 1) for k in alg.basis(n)]


def _sym_words(pool: list, maxlen: int, maxdeg: int) -> list:
    """Multisets of ≤ maxlen pool keys with total degree ≤ maxdeg, as
    (word, degree) pairs; pool must be sorted by degree ascending."""
    out = [((), 0)]

    def rec(start: int, word: tuple, deg: int) -> None:
        for i in range(start, len(pool)):
            k, n = pool[i]
            if deg + n > maxdeg:
                break
            grown = word + (k,)
            out.append((grown, deg + n))
            if len(grown) < maxlen:
                rec(i, grown, deg + n)

    rec(0, (), 0)
    return out


def check_prop6(alg: AlgebraHandle, maxsize: int, maxarg: int = None,
                maxword: int = None) -> list[LawReport]:
    """Sweep the two compatibility identities of the extended product over
    all basis keys a, b and symmetric words w of basis keys, with total
    degree ≤ maxsize and at most maxsize word factors:

    * product rule: (a·b)•w splits as the sum over subword splittings
      w = w'⊔w'' of (a•w')·(b•w'');
    * coproduct rule: Δ(a•w) expands through Δ(a) and the factorwise
      coproducts of w (skipped when the handle has no coproduct).

    `maxarg` additionally caps the degree of a and b, and `maxword` the
    factor count and total degree of w (both default to maxsize).
    """
    maxarg = maxsize if maxarg is None else maxarg
    maxword = maxsize if maxword is None else maxword
    ext = extension_for(alg)
    pool = _degree_pool(alg, 0, maxarg)
    words = _sym_words(_degree_pool(alg, 0, maxword), maxword, maxword)
    reports = []

    def wstr(w):
        return fmt_symword(w, alg.key_str)

    witness = None
    for ai, (a, da) in enumerate(pool):
        for b, db in pool[ai:]:
            if da + db > maxsize:
                break
            for w, dw in words:
                if da + db + dw > maxsize:
                    continue
                if product_rule_defect(ext, alg.mul, a, b, list(w)):
                    witness = (f"a={alg.key_str(a)} b={alg.key_str(b)} "
                               f"w={wstr(w)}")
                    break
            if witness:
                break
        if witness:
            break
    reports.append(LawReport("product-rule", alg.name, maxsize, witness))

    if alg.coproduct is not None:
        witness = None
        for a, da in pool:
            for w, dw in words:
                if da + dw > maxsize:
                    continue
                if coproduct_rule_defect(ext, alg.mul, alg.coproduct,
                                         alg.unit, a, list(w)):
                    witness = f"a={alg.key_str(a)} w={wstr(w)}"
                    break
            if witness:
                break
        reports.append(LawReport("coproduct-rule", alg.name, maxsize,
                                 witness))
    return reports


def check_lemma7(alg: AlgebraHandle, maxk: int, maxl: int) -> LawReport:
    """Absorption of unit factors into symmetric words:

        a • (∅^{×k} × b_1 × … × b_l)  =  f^k(a) • (b_1 × … × b_l)

    with f(x) = x•∅, swept for degree-one basis keys a (the identity is
    linear in a), k ≤ maxk, and words of ≤ maxl factors with total degree
    ≤ maxl."""
    if alg.unit is None:
        raise ValueError(f"{alg.name} has no unit")
    ext = extension_for(alg)
    words = _sym_words(_degree_pool(alg, 1, maxl), maxl, maxl)
    for a in alg.basis(1):
        for k in range(maxk + 1):
            for w, _ in words:
                if absorb_defect(ext, alg.unit, a, list(w), k):
                    witness = (f"a={alg.key_str(a)} k={k} "
                               f"w={fmt_symword(w, alg.key_str)}")
                    return LawReport("unit-absorption", alg.name,
                                     maxk + maxl, witness)
    return LawReport("unit-absorption", alg.name, maxk + maxl)
