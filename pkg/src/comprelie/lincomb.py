"""Sparse linear combinations with exact rational coefficients.

Every algebra element in this package is a ``LinComb``: a finitely supported
map from basis keys to exact rational coefficients.  Basis keys are opaque,
hashable, canonical values (nested tuples for trees, tuples of strings for
words, pairs/triples of keys for tensors).  Zero coefficients are never
stored, so equality of LinCombs is plain dict equality.

The scalar field is exact: no floats anywhere.  Coefficients are stored as
they come — int or ``fractions.Fraction`` — which is safe because the two
compare and hash identically for equal values; combinatorial code then runs
on fast int arithmetic and Fractions appear only where division does
(linear algebra, series with 1/n terms).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable


class LinComb(dict):
    """dict basis-key -> Fraction, with vector-space operators.

    The default value of any absent key is 0, and storing a zero removes
    the key.  Instances are treated as immutable by the rest of the
    package (operators return fresh objects); in-place mutation is only
    used locally while accumulating.
    """

    def __init__(self, data=()):
        super().__init__()
        if isinstance(data, dict):
            data = data.items()
        for k, c in data:
            self.add_term(k, c)

    def __getitem__(self, key):
        return self.get(key, 0)

    def add_term(self, key, coeff) -> None:
        """self += coeff * key, pruning zeros.  key=None is absorbed (drops)."""
        if key is None or coeff == 0:
            return
        c = self.get(key, 0) + coeff
        if c == 0:
            self.pop(key, None)
        else:
            self[key] = c

    def iadd_scaled(self, coeff, other: "LinComb") -> "LinComb":
        if coeff != 0:
            for k, c in other.items():
                self.add_term(k, coeff * c)
        return self

    def __add__(self, other):
        out = LinComb(self)
        out.iadd_scaled(1, other)
        return out

    def __sub__(self, other):
        out = LinComb(self)
        out.iadd_scaled(-1, other)
        return out

    def __neg__(self):
        return self.scale(-1)

    def scale(self, coeff) -> "LinComb":
        if coeff == 0:
            return LinComb()
        return LinComb((k, coeff * c) for k, c in self.items())

    def __mul__(self, coeff):
        return self.scale(coeff)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self

    def map_keys(self, f: Callable[[Hashable], Hashable]) -> "LinComb":
        """Apply a key-to-key map (f may return None to drop a term)."""
        out = LinComb()
        for k, c in self.items():
            out.add_term(f(k), c)
        return out

    def map_linear(self, f: Callable[[Hashable], "LinComb"]) -> "LinComb":
        """Apply a basis-to-LinComb map linearly."""
        out = LinComb()
        for k, c in self.items():
            out.iadd_scaled(c, f(k))
        return out

    def __repr__(self):
        return "LinComb(%r)" % (dict(self),)


def unit(key) -> LinComb:
    """The LinComb 1*key."""
    return LinComb(((key, 1),))


ZERO = LinComb()


def bilinear_extend(op_on_basis: Callable[[Hashable, Hashable], LinComb],
                    a: LinComb, b: LinComb) -> LinComb:
    """Extend a basis-level binary operation bilinearly to LinCombs."""
    out = LinComb()
    for ka, ca in a.items():
        for kb, cb in b.items():
            out.iadd_scaled(ca * cb, op_on_basis(ka, kb))
    return out


# ---------------------------------------------------------------------------
# Tensors.  A Tensor2 is a LinComb whose keys are pairs (k1,k2); a Tensor3
# has triple keys.  Nothing structural distinguishes them from LinComb, but
# the helpers below keep the leg-wise plumbing in one place.
# ---------------------------------------------------------------------------

def tensor2(a: LinComb, b: LinComb) -> LinComb:
    """a (x) b as a Tensor2."""
    out = LinComb()
    for ka, ca in a.items():
        for kb, cb in b.items():
            out.add_term((ka, kb), ca * cb)
    return out


def tensor_apply2(t: LinComb, f: Callable[[Hashable], LinComb],
                  g: Callable[[Hashable], LinComb]) -> LinComb:
    """Apply basis-to-LinComb maps f,g to the two legs of a Tensor2.

    The result keys are pairs (key-of-f-output, key-of-g-output).
    """
    out = LinComb()
    for (ka, kb), c in t.items():
        fa = f(ka)
        gb = g(kb)
        for k1, c1 in fa.items():
            for k2, c2 in gb.items():
                out.add_term((k1, k2), c * c1 * c2)
    return out


def tensor_flatten_left(t: LinComb) -> LinComb:
    """Reassociate ((a,b),c) keys to (a,b,c) triples."""
    out = LinComb()
    for ((ka, kb), kc), c in t.items():
        out.add_term((ka, kb, kc), c)
    return out


def tensor_flatten_right(t: LinComb) -> LinComb:
    """Reassociate (a,(b,c)) keys to (a,b,c) triples."""
    out = LinComb()
    for (ka, (kb, kc)), c in t.items():
        out.add_term((ka, kb, kc), c)
    return out


def tensor_swap(t: LinComb) -> LinComb:
    """Flip the two legs of a Tensor2."""
    return t.map_keys(lambda k: (k[1], k[0]))


def tensor_swap23(t: LinComb) -> LinComb:
    """The permutation (23) on a Tensor3: (a,b,c) -> (a,c,b)."""
    return t.map_keys(lambda k: (k[0], k[2], k[1]))


# ---------------------------------------------------------------------------
# Text formats.  Scalars print as `p` or `p/q` with q > 0; a LinComb prints
# as `c1*B1 + c2*B2` with terms ordered by the serialized basis string, and
# the zero element prints as `0`.
# ---------------------------------------------------------------------------

def fmt_scalar(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def parse_scalar(s: str) -> Fraction:
    return Fraction(s.strip())


def fmt_lincomb(x: LinComb, key_str: Callable[[Hashable], str]) -> str:
    if not x:
        return "0"
    parts = sorted(((key_str(k), c) for k, c in x.items()), key=lambda t: t[0])
    return " + ".join("%s*%s" % (fmt_scalar(c), ks) for ks, c in parts)


def fmt_tensor2(t: LinComb, key_str: Callable[[Hashable], str]) -> str:
    """Tensor2 format: `c*A (x) B` terms joined by ` + `."""
    return fmt_lincomb(t, lambda k: "%s (x) %s" % (key_str(k[0]), key_str(k[1])))


def lincomb_from_terms(pairs: Iterable[tuple]) -> LinComb:
    return LinComb(pairs)
