"""Free unitary Com-PreLie algebra on decorated partitioned rooted trees,
its counter-free quotients, and the Connes-Kreimer Hopf algebra.

Three bases, all canonical ``PForest`` keys from :mod:`comprelie.ptree`:

* ``UCP(D)`` — partitioned trees with counters.  Multiplication merges the
  root blocks; the preLie product ``ucp_bullet`` grafts the right argument
  at every vertex of the left one, opening a new child block each time, and
  grafting the unit bumps one counter per vertex.
* ``CP(D)`` — the counter-free quotient: same trees with all counters zero.
  Grafting the unit multiplies by the vertex count.  More generally, any
  linear decoration map f gives a quotient where grafting the unit replaces
  the decoration of one vertex at a time by its f-image
  (``cp_bullet_with_map``); the quotient map ``counter_elimination`` sends a
  vertex with counter k and decoration d to the f^k(d)-relabeled vertex.
* ``H_CK(D)`` — plain decorated rooted forests with disjoint-union product:
  the further quotient where the block structure under each vertex is
  forgotten.  This is the Connes-Kreimer Hopf algebra of rooted trees.

The coproduct cuts along leafward-closed vertex sets: the pruned subtrees
are multiplied together on the right leg (one merged root block — or a
disjoint union in the plain-forest case) while the trunk stays on the left,
with counters recording how many child blocks vanished whole (UCP only).

Also here: the block-pruning coproduct ``delta_perm`` that removes one whole
child block of one root (a permutative, preLie-compatible coproduct on the
augmentation ideal), and the Connes-Moscovici elements obtained by repeated
grafting of single leaves, with their cogenerator-level reduced coproduct.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from .lincomb import LinComb, ZERO, bilinear_extend, tensor2, unit
from .linalg import solve, sparse_nullity
from .ptree import (
    EMPTY,
    NEW_BLOCK,
    PForest,
    _edit_at,
    _multisets,
    build_root,
    canonicalize,
    enum_partitioned,
    forget_blocks,
    graft_at,
    ideals,
    is_partitioned_tree,
    mul_disjoint,
    mul_merge,
    nvertices,
    serialize,
    shift_at,
    split_ideal,
    vertices,
)
from .shuffle import Word, words_of_length


# ---------------------------------------------------------------------------
# PreLie products.
# ---------------------------------------------------------------------------

def ucp_bullet(t: PForest, u: PForest) -> LinComb:
    """Graft u at every vertex of t as a fresh child block; grafting the
    empty forest bumps one counter per vertex instead."""
    out = LinComb()
    if u == EMPTY:
        for ref, _ in vertices(t):
            out.add_term(shift_at(t, ref, +1), 1)
    else:
        for ref, _ in vertices(t):
            out.add_term(graft_at(t, ref, NEW_BLOCK, u), 1)
    return out


def cp_bullet(t: PForest, u: PForest) -> LinComb:
    """Counter-free grafting: t • ∅ = (number of vertices) t."""
    if u == EMPTY:
        return LinComb(((t, Fraction(nvertices(t))),))
    out = LinComb()
    for ref, _ in vertices(t):
        out.add_term(graft_at(t, ref, NEW_BLOCK, u), 1)
    return out


def _relabel_at(t: PForest, ref, newlabel: str) -> PForest:
    def fn(nd):
        (k, d), blocks = nd
        return ((k, newlabel), blocks)
    return canonicalize(_edit_at(t, ref, fn))


def cp_bullet_with_map(fmap: Mapping[str, Mapping]) -> Callable:
    """Counter-free grafting twisted by a linear decoration map.

    `fmap` sends a label to a linear combination of labels (any mapping
    label -> coefficient).  Grafting the empty forest applies the map to one
    vertex at a time; grafting anything else is plain new-block grafting.
    """
    def bullet(t: PForest, u: PForest) -> LinComb:
        if u != EMPTY:
            return cp_bullet(t, u)
        out = LinComb()
        for ref, nd in vertices(t):
            for e, c in fmap.get(nd[0][1], {}).items():
                out.add_term(_relabel_at(t, ref, e), c)
        return out
    return bullet


def hck_bullet(f: PForest, g: PForest) -> LinComb:
    """Grafting of plain forests: every root of g becomes a new child of one
    vertex of f (summed over vertices); f • ∅ = (number of vertices) f."""
    if g == EMPTY:
        return LinComb(((f, Fraction(nvertices(f))),))
    out = LinComb()
    for ref, _ in vertices(f):
        out.add_term(forget_blocks(graft_at(f, ref, NEW_BLOCK, g)), 1)
    return out


def mul_merge_lc(a: PForest, b: PForest) -> LinComb:
    return unit(mul_merge(a, b))


def mul_disjoint_lc(a: PForest, b: PForest) -> LinComb:
    return unit(mul_disjoint(a, b))


# ---------------------------------------------------------------------------
# Cutting coproducts.
# ---------------------------------------------------------------------------

def _coproduct(forest: PForest, bump: bool, plain: bool) -> LinComb:
    out = LinComb()
    for ideal in ideals(forest):
        trunk, pruned = split_ideal(forest, ideal, bump=bump)
        if plain:
            leg = canonicalize(tuple((nd,) for nd in pruned))
        else:
            leg = canonicalize((pruned,)) if pruned else EMPTY
        out.add_term((trunk, leg), 1)
    return out


def coproduct_ucp(t: PForest) -> LinComb:
    """Cut-and-prune coproduct with counter bumps on the trunk."""
    assert is_partitioned_tree(t), serialize(t)
    return _coproduct(t, bump=True, plain=False)


def coproduct_cp(t: PForest) -> LinComb:
    assert is_partitioned_tree(t), serialize(t)
    return _coproduct(t, bump=False, plain=False)


def coproduct_hck(f: PForest) -> LinComb:
    """Admissible-cut coproduct of plain forests (pruned part on the right)."""
    return _coproduct(f, bump=False, plain=True)


def counit(forest: PForest) -> Fraction:
    return Fraction(1 if forest == EMPTY else 0)


def reduced_coproduct(cop: Callable[[PForest], LinComb], t: PForest) -> LinComb:
    """cop(t) minus the two primitive-part terms t⊗∅ and ∅⊗t."""
    out = cop(t)
    out.add_term((t, EMPTY), -1)
    out.add_term((EMPTY, t), -1)
    return out


# ---------------------------------------------------------------------------
# Counter elimination along a decoration map.  `fmap` as above; the closed
# per-vertex rule replaces a counter-k vertex decorated d by the linear
# combination f^k(d) of zero-counter vertices.  The recursive variant
# recomputes the same morphism from its universal characterization (peeling
# the root and regrafting through the symmetric-word extension) and exists
# as an independent cross-check of the closed rule.
# ---------------------------------------------------------------------------

def _power_map(fmap: Mapping[str, Mapping]) -> Callable[[int, str], LinComb]:
    memo: dict[tuple[int, str], LinComb] = {}

    def fpow(k: int, d: str) -> LinComb:
        if (k, d) not in memo:
            if k == 0:
                memo[(k, d)] = unit(d)
            else:
                memo[(k, d)] = fpow(k - 1, d).map_linear(
                    lambda e: LinComb(fmap.get(e, {}).items()))
        return memo[(k, d)]

    return fpow


def counter_elimination(fmap: Mapping[str, Mapping]
                        ) -> Callable[[PForest], LinComb]:
    """The algebra map UCP -> counter-free quotient for a decoration map f:
    per vertex, (counter k, label d) becomes f^k(d) with counter zero."""
    fpow = _power_map(fmap)

    def expand_node(nd) -> LinComb:
        (k, d), blocks = nd
        out = LinComb()
        for bl, c2 in expand_blocks(blocks).items():
            for e, c1 in fpow(k, d).items():
                out.add_term(((0, e), bl), c1 * c2)
        return out

    def expand_block(block) -> LinComb:
        out = unit(())
        for nd in block:
            nxt = LinComb()
            for partial, c1 in out.items():
                for nd2, c2 in expand_node(nd).items():
                    nxt.add_term(partial + (nd2,), c1 * c2)
            out = nxt
        return out

    def expand_blocks(blocks) -> LinComb:
        out = unit(())
        for b in blocks:
            nxt = LinComb()
            for partial, c1 in out.items():
                for b2, c2 in expand_block(b).items():
                    nxt.add_term(partial + (b2,), c1 * c2)
            out = nxt
        return out

    def phi(t: PForest) -> LinComb:
        return expand_blocks(t).map_keys(canonicalize)

    return phi


def counter_elimination_recursive(fmap: Mapping[str, Mapping]
                                  ) -> Callable[[PForest], LinComb]:
    """Same morphism, computed by structural recursion: split multi-root
    trees as products, write a one-rooted tree as its root grafted with the
    symmetric word of its child blocks, and push both through the quotient.
    Quadratically slower than the closed rule; used to gate it."""
    from .oudom import Extension

    bullet = cp_bullet_with_map(fmap)
    ext = Extension(bullet, serialize)
    fpow = _power_map(fmap)
    memo: dict[PForest, LinComb] = {}

    def phi(t: PForest) -> LinComb:
        if t not in memo:
            memo[t] = _compute(t)
        return memo[t]

    def _compute(t: PForest) -> LinComb:
        if t == EMPTY:
            return unit(EMPTY)
        assert is_partitioned_tree(t), serialize(t)
        roots = t[0]
        if len(roots) > 1:
            res = unit(EMPTY)
            for nd in roots:
                res = bilinear_extend(mul_merge_lc, res,
                                      phi(canonicalize(((nd,),))))
            return res
        (k, d), blocks = roots[0]
        x = fpow(k, d).map_keys(lambda e: build_root(e, ()))
        if not blocks:
            return x
        args = [phi(canonicalize((b,))) for b in blocks]
        return ext.apply_flat(x, args)

    return phi


def identity_map(labels) -> dict[str, LinComb]:
    return {d: unit(d) for d in labels}


# ---------------------------------------------------------------------------
# Block-pruning coproduct on nonempty trees: remove one whole child block of
# one root; the removed block, as a partitioned tree, is the right leg.
# ---------------------------------------------------------------------------

def delta_perm(t: PForest) -> LinComb:
    assert is_partitioned_tree(t), serialize(t)
    out = LinComb()
    if t == EMPTY:
        return out
    (roots,) = t
    for ni, nd in enumerate(roots):
        dec, blocks = nd
        for bi, block in enumerate(blocks):
            piece = canonicalize((block,))
            trimmed = (dec, blocks[:bi] + blocks[bi + 1:])
            trunk = canonicalize(
                (roots[:ni] + (trimmed,) + roots[ni + 1:],))
            out.add_term((trunk, piece), 1)
    return out


def kernel_delta_dim(n: int, labels) -> int:
    """Dimension of the kernel of the block-pruning coproduct on the span of
    the n-vertex counter-free partitioned trees."""
    trees = enum_partitioned(n, labels)
    return sparse_nullity([delta_perm(t) for t in trees], len(trees))


# ---------------------------------------------------------------------------
# Connes-Moscovici elements: grow a plain tree by grafting one new leaf at
# every vertex, once per letter of a word.
# ---------------------------------------------------------------------------

def cm_grow(x: LinComb, label: str) -> LinComb:
    leaf = build_root(label, ())
    return x.map_linear(lambda t: hck_bullet(t, leaf))


def cm_x(word: Word) -> LinComb:
    """X_{word}: start from a single vertex decorated by the first letter,
    then graft a leaf for each later letter, everywhere, in order."""
    assert word
    out = unit(build_root(word[0], ()))
    for d in word[1:]:
        out = cm_grow(out, d)
    return out


def cm_delta_closed(word: Word) -> LinComb:
    """Reduced cogenerator-level coproduct of X_{word}, in closed form.

    Keys are pairs of index words (u, v) standing for X_u ⊗ X_v.  A proper
    nonempty subset I of the letter positions contributes the subword at I
    on the left and its complement on the right, with multiplicity the
    longest prefix of positions contained in I (zero terms drop out).
    """
    k = len(word)
    out = LinComb()
    for mask in range(1, (1 << k) - 1):
        m = 0
        while m < k and mask >> m & 1:
            m += 1
        if m == 0:
            continue
        u = tuple(word[i] for i in range(k) if mask >> i & 1)
        v = tuple(word[i] for i in range(k) if not mask >> i & 1)
        out.add_term((u, v), m)
    return out


def _word_multisets(total: int, letters) -> list[tuple[Word, ...]]:
    items: list[Word] = []
    for l in range(1, total + 1):
        items.extend(words_of_length(letters, l))
    items.sort()
    sizes = [len(w) for w in items]
    return list(_multisets(items, sizes, total))


def _monomial_value(words: tuple[Word, ...]) -> LinComb:
    out = unit(EMPTY)
    for w in words:
        out = bilinear_extend(mul_disjoint_lc, out, cm_x(w))
    return out


def cm_delta_oracle(word: Word, letters) -> LinComb:
    """Reduced cogenerator-level coproduct computed the long way round.

    Apply the forest coproduct to X_{word}, re-expand each bidegree in the
    basis of products of X's by an exact linear solve, and keep the terms
    where both legs are a single X.  Must agree with `cm_delta_closed`.
    """
    k = len(word)
    full = cm_x(word).map_linear(coproduct_hck)
    out = LinComb()
    for a in range(1, k):
        sub = LinComb((key, c) for key, c in full.items()
                      if nvertices(key[0]) == a)
        if sub.is_zero():
            continue
        pairs = [(m1, m2)
                 for m1 in _word_multisets(a, letters)
                 for m2 in _word_multisets(k - a, letters)]
        columns = [tensor2(_monomial_value(m1), _monomial_value(m2))
                   for m1, m2 in pairs]
        rows = set(sub)
        for col in columns:
            rows.update(col)
        row_list = sorted(rows, key=repr)
        mat = [[col[r] for col in columns] for r in row_list]
        rhs = [sub[r] for r in row_list]
        coeffs = solve(mat, rhs)
        assert coeffs is not None, "coproduct left the span of X-products"
        for (m1, m2), c in zip(pairs, coeffs):
            if c != 0 and len(m1) == 1 and len(m2) == 1:
                out.add_term((m1[0], m2[0]), c)
    return out
