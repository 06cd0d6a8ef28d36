"""Block-joining grafting products and the contraction/coarsening morphisms.

The cutting coproducts of :mod:`comprelie.ucp` prune material off a tree;
the products here put it back in every possible way, so they are the graded
duals of those coproducts (up to the usual symmetry factors).

* ``diamond`` grafts the right argument at every vertex of the left one,
  both into each existing child block and as a new block.  On the span of
  all counter-free partitioned trees it makes the tree multiplication a
  Com-PreLie algebra; restricted to one-rooted trees it is the product dual
  to ``delta_root`` below.
* ``diamond_down`` is the counterful variant: each grafting also lowers the
  counter of the grafting vertex by one, killing the term at counter zero.
  This is the product dual to the block-pruning coproduct on counterful
  trees.
* ``delta_root`` removes one singleton child block of the root of a
  one-rooted tree.  It is permutative, ``diamond`` differentiates it, and
  regrafting at the root (``root_graft``) recovers the singleton-block count
  ``varsigma`` — which is why the trees with no singleton child block at the
  root freely generate.
* ``theta`` contracts a tree along all partitions into one-rooted pieces
  with no singleton child block at their roots; it lands in plain forests
  whose vertex labels name the pieces, and it intertwines products and
  cutting coproducts (tree multiplication becomes disjoint union).
* ``psi_map`` sums all coarsenings (sibling-block merges, with multiplicity)
  of a tree; it turns new-block-only grafting into ``diamond`` and is
  invertible by triangularity in the block count.
"""

from __future__ import annotations

from fractions import Fraction

from .lincomb import LinComb, unit
from .ptree import (
    EMPTY,
    NEW_BLOCK,
    PForest,
    admissible_partitions,
    canonicalize,
    coarsenings,
    contract,
    enum_one_rooted,
    graft_at,
    graft_shift,
    is_one_rooted,
    restrict,
    ser_block,
    ser_node,
    serialize,
    varsigma,
    vertices,
)


# ---------------------------------------------------------------------------
# Grafting into existing blocks.
# ---------------------------------------------------------------------------

def diamond(t: PForest, u: PForest) -> LinComb:
    """Graft u at every vertex of t, into every child block and a new one.

    The unit as right argument gives zero (the only extension under which
    the Com-PreLie laws survive)."""
    out = LinComb()
    if u == EMPTY:
        return out
    for ref, nd in vertices(t):
        out.add_term(graft_at(t, ref, NEW_BLOCK, u), 1)
        for bi in range(len(nd[1])):
            out.add_term(graft_at(t, ref, bi, u), 1)
    return out


def diamond_down(t: PForest, u: PForest) -> LinComb:
    """Like `diamond`, but each grafting lowers the counter of its grafting
    vertex by one; graftings at counter zero vanish."""
    out = LinComb()
    if u == EMPTY:
        return out
    for ref, nd in vertices(t):
        out.add_term(graft_shift(t, ref, NEW_BLOCK, u, -1), 1)
        for bi in range(len(nd[1])):
            out.add_term(graft_shift(t, ref, bi, u, -1), 1)
    return out


# The same grafting rule underlies three preLie structures: on one-rooted
# trees with counters (the shift variant), on one-rooted trees without, and
# on arbitrary partitioned forests.  Named entry points:
diamond_ucp = diamond_down
diamond_cp = diamond
diamond_ext = diamond


# ---------------------------------------------------------------------------
# Root pruning on one-rooted trees.
# ---------------------------------------------------------------------------

def delta_root(t: PForest) -> LinComb:
    """Remove one singleton child block of the root; the removed vertex,
    with its subtree, is the right leg."""
    assert is_one_rooted(t), serialize(t)
    dec, blocks = t[0][0]
    out = LinComb()
    for bi, b in enumerate(blocks):
        if len(b) == 1:
            trunk = canonicalize(((
                (dec, blocks[:bi] + blocks[bi + 1:]),),))
            out.add_term((trunk, canonicalize((b,))), 1)
    return out


def root_graft(t: PForest, u: PForest) -> PForest:
    """Graft all roots of u as one new child block of the root of t."""
    assert is_one_rooted(t), serialize(t)
    return graft_at(t, ((0, 0),), NEW_BLOCK, u)


def free_generators(n: int, labels) -> list[PForest]:
    """One-rooted n-vertex trees with no singleton child block at the root."""
    return [t for t in enum_one_rooted(n, labels) if varsigma(t) == 0]


# ---------------------------------------------------------------------------
# Contraction morphism into plain forests over the generator alphabet.
# ---------------------------------------------------------------------------

def theta(t: PForest) -> LinComb:
    """Sum of the contractions of t along all partitions into one-rooted
    pieces with no singleton child block at their root."""
    out = LinComb()
    for part in admissible_partitions(t):
        out.add_term(contract(t, part), 1)
    return out


def generator_label(g: PForest) -> str:
    """The vertex label `contract` gives a piece shaped like g."""
    return "<" + serialize(g) + ">"


def theta_alphabet(n: int, labels) -> list[tuple[str, int]]:
    """(label, weight) pairs for the generators of weight <= n."""
    out = []
    for m in range(1, n + 1):
        for g in free_generators(m, labels):
            out.append((generator_label(g), m))
    return out


# ---------------------------------------------------------------------------
# Plain trees and forests over a weighted alphabet (for dimension counts).
# ---------------------------------------------------------------------------

def weighted_trees(n: int, gens: list[tuple[str, int]]) -> list:
    """Canonical plain-tree Nodes of total weight n, vertices labeled from
    the weighted alphabet `gens`."""
    memo: dict[int, list] = {}
    wmap = dict(gens)

    def weight_of(nd) -> int:
        return wmap[nd[0][1]] + sum(weight_of(c) for b in nd[1] for c in b)

    def trees(m: int) -> list:
        if m not in memo:
            out = []
            for lab, w in gens:
                if w <= m:
                    for kids in kid_multisets(m - w):
                        blocks = sorted(((k,) for k in kids), key=ser_block)
                        out.append(((0, lab), tuple(blocks)))
            memo[m] = sorted(out, key=ser_node)
        return memo[m]

    def kid_multisets(m: int) -> list:
        # multisets of trees of total weight m, in canonical order
        items = []
        for q in range(1, m + 1):
            items.extend(trees(q))
        items.sort(key=ser_node)
        weights = [weight_of(nd) for nd in items]

        def rec(total: int, start: int):
            if total == 0:
                yield ()
                return
            for i in range(start, len(items)):
                if weights[i] <= total:
                    for rest in rec(total - weights[i], i):
                        yield (items[i],) + rest

        return list(rec(m, 0))

    return trees(n)


def weighted_forests(n: int, gens: list[tuple[str, int]]) -> list[PForest]:
    """Canonical plain forests of total weight n over the weighted alphabet."""
    items = []
    for m in range(1, n + 1):
        items.extend(weighted_trees(m, gens))
    items.sort(key=ser_node)
    wmap = dict(gens)

    def weight_of(nd) -> int:
        return wmap[nd[0][1]] + sum(weight_of(c) for b in nd[1] for c in b)

    weights = [weight_of(nd) for nd in items]

    def rec(total: int, start: int):
        if total == 0:
            yield ()
            return
        for i in range(start, len(items)):
            if weights[i] <= total:
                for rest in rec(total - weights[i], i):
                    yield (items[i],) + rest

    return [tuple(sorted(((nd,) for nd in ms), key=ser_block))
            for ms in rec(n, 0)]


# ---------------------------------------------------------------------------
# Coarsening morphism.
# ---------------------------------------------------------------------------

def psi_map(t: PForest) -> LinComb:
    """Sum of all sibling-block coarsenings of t, with multiplicity."""
    out = LinComb()
    for c in coarsenings(t):
        out.add_term(c, 1)
    return out


def psi_inverse(t: PForest) -> LinComb:
    """Inverse of `psi_map` on the tree basis, by downward recursion in the
    number of blocks (every proper coarsening has strictly fewer)."""
    memo: dict[PForest, LinComb] = {}

    def inv(s: PForest) -> LinComb:
        if s not in memo:
            out = unit(s)
            for c, coeff in psi_map(s).items():
                if c != s:
                    out.iadd_scaled(-coeff, inv(c))
            memo[s] = out
        return memo[s]

    return inv(t)
