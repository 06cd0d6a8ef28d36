"""Shuffle algebras on words, and the preLie products living on them.

Words over an alphabet are tuples of letter strings; the empty word is
``()`` and prints as ``eps``.  T(V) is spanned by all words, V by the
single letters.  The Hopf structure is the shuffle product with the
deconcatenation coproduct.

A preLie product making this a Com-PreLie bialgebra is determined by its
letter-valued projection: a map ``varpi`` from pairs of words to V.  The
induced product is

    u . v  =  sum  u1 varpi(u2 (x) v1) (u3 sh v2)

over deconcatenations u = u1u2u3, v = v1v2 (concatenate the prefix, one
letter from varpi, and a shuffle of the tails).  Compatibility with the
shuffle product amounts to

    varpi((u sh v) (x) w) = eps(u) varpi(v (x) w) + eps(v) varpi(u (x) w)

and the preLie identity to

    varpi(u.v (x) w) - varpi(u (x) v.w) = varpi(u.w (x) v) - varpi(u (x) w.v).

When the induced product is homogeneous of degree N for word length, varpi
vanishes on components k (x) l with k+l+N != 1, the first identity only
needs checking in total degree k+l+n = 1-N and the second in total degree
k+l+n = 1-2N.

Two families are implemented concretely:

* degree 0 — one endomorphism f of V; the product inserts f at one letter
  of the left word and shuffles the rest of it into the right word;
* degree -1 — a preLie product ``*`` on V (the (1,1) component) and an
  antisymmetric bracket (the (2,0) component) subject to three mixed
  identities; the right action of the empty word is then a sliding
  bracket of adjacent letters.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Callable, Iterable, Iterator

from .lincomb import LinComb, unit, ZERO

Word = tuple  # tuple of letter strings
EPS: Word = ()


def fmt_word(w: Word) -> str:
    return ".".join(w) if w else "eps"


def parse_word(s: str) -> Word:
    s = s.strip()
    if s in ("eps", ""):
        return EPS
    return tuple(p.strip() for p in s.split("."))


def counit_word(w: Word):
    return 1 if w == EPS else 0


# ---------------------------------------------------------------------------
# Shuffle product and deconcatenation.
# ---------------------------------------------------------------------------

_SHUFFLE_MEMO: dict = {}


def shuffle(u: Word, v: Word) -> LinComb:
    """Shuffle product of two words, as a LinComb of words."""
    if not u:
        return unit(v)
    if not v:
        return unit(u)
    key = (u, v)
    got = _SHUFFLE_MEMO.get(key)
    if got is None:
        got = LinComb()
        for w, c in shuffle(u[1:], v).items():
            got.add_term((u[0],) + w, c)
        for w, c in shuffle(u, v[1:]).items():
            got.add_term((v[0],) + w, c)
        _SHUFFLE_MEMO[key] = got
    return got


def shuffle_lc(a: LinComb, b: LinComb) -> LinComb:
    out = LinComb()
    for u, cu in a.items():
        for v, cv in b.items():
            out.iadd_scaled(cu * cv, shuffle(u, v))
    return out


def deconcat(w: Word) -> LinComb:
    """Deconcatenation coproduct: sum of (prefix, suffix) pairs."""
    out = LinComb()
    for i in range(len(w) + 1):
        out.add_term((w[:i], w[i:]), 1)
    return out


def splits(w: Word, parts: int) -> Iterator[tuple]:
    """All ways to cut w into `parts` consecutive (possibly empty) pieces."""
    if parts == 1:
        yield (w,)
        return
    for i in range(len(w) + 1):
        for rest in splits(w[i:], parts - 1):
            yield (w[:i],) + rest


# ---------------------------------------------------------------------------
# varpi maps and the induced preLie products.
# ---------------------------------------------------------------------------

class Varpi:
    """A letter-valued bilinear map on words, given by components.

    components: dict (k, l) -> callable (u, v) -> LinComb over letters,
    defined on words of lengths k and l.  Anything outside the listed
    components is zero.  `degree` is the homogeneity degree N when every
    listed component satisfies k + l + N = 1 (None otherwise).
    """

    def __init__(self, components: dict):
        self.components = dict(components)
        degs = {1 - k - l for k, l in self.components}
        self.degree = degs.pop() if len(degs) == 1 else None

    def apply(self, u: Word, v: Word) -> LinComb:
        fn = self.components.get((len(u), len(v)))
        return fn(u, v) if fn else ZERO

    def apply_lc(self, a: LinComb, b: LinComb) -> LinComb:
        out = LinComb()
        for u, cu in a.items():
            for v, cv in b.items():
                out.iadd_scaled(cu * cv, self.apply(u, v))
        return out


def bullet_varpi(varpi: Varpi, u: Word, v: Word) -> LinComb:
    """The preLie product induced by varpi (prefix, letter, shuffled tails)."""
    out = LinComb()
    for u1, u2, u3 in splits(u, 3):
        for v1, v2 in splits(v, 2):
            mid = varpi.apply(u2, v1)
            if not mid:
                continue
            sh = shuffle(u3, v2)
            for x, cx in mid.items():
                for w, cw in sh.items():
                    out.add_term(u1 + (x,) + w, cx * cw)
    return out


def bullet_varpi_lc(varpi: Varpi, a: LinComb, b: LinComb) -> LinComb:
    out = LinComb()
    for u, cu in a.items():
        for v, cv in b.items():
            out.iadd_scaled(cu * cv, bullet_varpi(varpi, u, v))
    return out


def words_of_length(letters, n: int) -> list[Word]:
    return [tuple(w) for w in product(sorted(letters), repeat=n)]


def eq2_failures(varpi: Varpi, letters, max_total: int | None = None):
    """Counterexamples to shuffle-compatibility of varpi.

    For homogeneous varpi of degree N only total word length 1-N can fail;
    otherwise all totals up to max_total are swept.  Yields (u, v, w,
    difference) tuples; an empty sweep means the identity holds.
    """
    totals = ([1 - varpi.degree] if varpi.degree is not None
              else range((max_total or 4) + 1))
    for total in totals:
        if total < 0:
            continue
        for k in range(total + 1):
            for l in range(total - k + 1):
                n = total - k - l
                for u in words_of_length(letters, k):
                    for v in words_of_length(letters, l):
                        for w in words_of_length(letters, n):
                            lhs = varpi.apply_lc(shuffle(u, v), unit(w))
                            rhs = LinComb()
                            if not u:
                                rhs += varpi.apply(v, w)
                            if not v:
                                rhs += varpi.apply(u, w)
                            if lhs != rhs:
                                yield (u, v, w, lhs - rhs)


def eq3_failures(varpi: Varpi, letters, max_total: int | None = None):
    """Counterexamples to the letter-level preLie identity for varpi.

    For homogeneous varpi of degree N only total length 1-2N can fail.
    """
    totals = ([1 - 2 * varpi.degree] if varpi.degree is not None
              else range((max_total or 4) + 1))
    for total in totals:
        if total < 0:
            continue
        for k in range(total + 1):
            for l in range(total - k + 1):
                n = total - k - l
                for u in words_of_length(letters, k):
                    for v in words_of_length(letters, l):
                        for w in words_of_length(letters, n):
                            lhs = (varpi.apply_lc(bullet_varpi(varpi, u, v), unit(w))
                                   - varpi.apply_lc(unit(u), bullet_varpi(varpi, v, w)))
                            rhs = (varpi.apply_lc(bullet_varpi(varpi, u, w), unit(v))
                                   - varpi.apply_lc(unit(u), bullet_varpi(varpi, w, v)))
                            if lhs != rhs:
                                yield (u, v, w, lhs - rhs)


# ---------------------------------------------------------------------------
# Degree 0: one endomorphism f of V.
# ---------------------------------------------------------------------------

EndoV = dict  # letter -> LinComb over letters


def apply_endo(f: EndoV, x: str) -> LinComb:
    return f.get(x, ZERO)


def varpi_from_endo(f: EndoV) -> Varpi:
    return Varpi({(1, 0): lambda u, v: apply_endo(f, u[0])})


def bullet_tvf(f: EndoV, u: Word, v: Word) -> LinComb:
    """Degree-0 preLie product: insert f at one letter of u, shuffle the
    rest of u into v (the whole of v goes after the marked letter)."""
    out = LinComb()
    for i in range(len(u)):
        fx = apply_endo(f, u[i])
        if not fx:
            continue
        sh = shuffle(u[i + 1:], v)
        for x, cx in fx.items():
            for w, cw in sh.items():
                out.add_term(u[:i] + (x,) + w, cx * cw)
    return out


def shuffle_permutations(k: int, l: int):
    """(k,l)-shuffles as (positions, m_k): `positions` lists where the
    first word's letters land (increasing), and m_k is the length of the
    initial run positions[0..m-1] == 0..m-1."""
    for pos in combinations(range(k + l), k):
        m = 0
        while m < k and pos[m] == m:
            m += 1
        yield pos, m


def bullet_tvf_shuffles(f: EndoV, u: Word, v: Word) -> LinComb:
    """Same product, computed shuffle-by-shuffle: sum over (k,l)-shuffles
    sigma and insertion depths i up to the initial fixed run of sigma,
    applying f to the letter in position i of the shuffled word."""
    k, l = len(u), len(v)
    out = LinComb()
    for pos, m in shuffle_permutations(k, l):
        word = [None] * (k + l)
        rest = [p for p in range(k + l) if p not in set(pos)]
        for i, p in enumerate(pos):
            word[p] = u[i]
        for j, p in enumerate(rest):
            word[p] = v[j]
        for i in range(m):
            fx = apply_endo(f, word[i])
            for x, cx in fx.items():
                out.add_term(tuple(word[:i]) + (x,) + tuple(word[i + 1:]), cx)
    return out


# ---------------------------------------------------------------------------
# Degree -1: a preLie product * and a bracket on V.
# ---------------------------------------------------------------------------

PairMap = dict  # (letter, letter) -> LinComb over letters


def apply_pair(m: PairMap, x: str, y: str) -> LinComb:
    return m.get((x, y), ZERO)


def varpi_deg_minus1(star: PairMap, bracket: PairMap) -> Varpi:
    return Varpi({
        (1, 1): lambda u, v: apply_pair(star, u[0], v[0]),
        (2, 0): lambda u, v: apply_pair(bracket, u[0], u[1]),
    })


def bullet_deg_minus1(star: PairMap, bracket: PairMap,
                      u: Word, v: Word) -> LinComb:
    """Degree -1 preLie product, written out directly: a star of one letter
    of u against the first letter of v (shuffling the tails), plus a
    bracket of two adjacent letters of u (shuffling what follows into all
    of v).  With v empty only the bracket sum survives."""
    out = LinComb()
    if v:
        for i in range(len(u)):
            sxy = apply_pair(star, u[i], v[0])
            if not sxy:
                continue
            sh = shuffle(u[i + 1:], v[1:])
            for x, cx in sxy.items():
                for w, cw in sh.items():
                    out.add_term(u[:i] + (x,) + w, cx * cw)
    for i in range(len(u) - 1):
        bxy = apply_pair(bracket, u[i], u[i + 1])
        if not bxy:
            continue
        sh = shuffle(u[i + 2:], v)
        for x, cx in bxy.items():
            for w, cw in sh.items():
                out.add_term(u[:i] + (x,) + w, cx * cw)
    return out


def pair_identities_failures(star: PairMap, bracket: PairMap, letters):
    """Counterexamples among letters to the four degree -1 identities:
    * preLie; bracket antisymmetric; x*{y,z} = {x*y,z};
    {x,y}*z = {x*z,y} + {x,y*z} + {{x,y},z}."""
    def s(a: LinComb, y: str) -> LinComb:
        """(a)*y, a a combination of letters."""
        return a.map_linear(lambda t: apply_pair(star, t, y))

    def sl(x: str, a: LinComb) -> LinComb:
        """x*(a)."""
        return a.map_linear(lambda t: apply_pair(star, x, t))

    def br(a: LinComb, y: str) -> LinComb:
        """{a, y}."""
        return a.map_linear(lambda t: apply_pair(bracket, t, y))

    def brl(x: str, a: LinComb) -> LinComb:
        """{x, a}."""
        return a.map_linear(lambda t: apply_pair(bracket, x, t))

    for x in letters:
        for y in letters:
            d = apply_pair(bracket, x, y) + apply_pair(bracket, y, x)
            if d:
                yield ("antisymmetry", x, y, None, d)
            for z in letters:
                d = (s(apply_pair(star, x, y), z) - sl(x, apply_pair(star, y, z))
                     - s(apply_pair(star, x, z), y) + sl(x, apply_pair(star, z, y)))
                if d:
                    yield ("star-prelie", x, y, z, d)
                d = sl(x, apply_pair(bracket, y, z)) - br(apply_pair(star, x, y), z)
                if d:
                    yield ("star-into-bracket", x, y, z, d)
                d = (s(apply_pair(bracket, x, y), z)
                     - br(apply_pair(star, x, z), y)
                     - brl(x, apply_pair(star, y, z))
                     - br(apply_pair(bracket, x, y), z))
                if d:
                    yield ("bracket-leibniz", x, y, z, d)


def hyperboloid_products(a, b, c) -> tuple[PairMap, PairMap]:
    """The three-dimensional family on letters x, y, z with parameters
    a, b, c: x acts as identity under *, and the bracket of x with y and z
    mixes them through a, b, c.  The mixed identities hold exactly on the
    surface a^2 - a + b c = 0."""
    star = {
        ("x", "x"): unit("x"),
        ("x", "y"): unit("y"),
        ("x", "z"): unit("z"),
    }
    xy = unit("y").scale(a) + unit("z").scale(b)
    xz = unit("y").scale(c) + unit("z").scale(1 - a)
    bracket = {
        ("x", "y"): xy,
        ("y", "x"): -xy,
        ("x", "z"): xz,
        ("z", "x"): -xz,
    }
    star = {k: v for k, v in star.items() if v}
    bracket = {k: v for k, v in bracket.items() if v}
    return star, bracket
