"""Decorated partitioned rooted trees and forests.

Data model (immutable nested tuples, usable directly as LinComb keys):

* decoration ``Dec = (counter, label)`` — a nonnegative integer counter and a
  string label;
* ``Node = (Dec, Blocks)`` — a vertex together with its child blocks;
* ``Block = tuple[Node, ...]`` — a nonempty group of sibling vertices;
* ``PForest = Blocks = tuple[Block, ...]`` — the top-level (root) blocks.

A *partitioned tree* is a PForest with at most one root block (the empty
forest ``EMPTY`` counts).  Vertices in one block are required to be siblings
— all roots, or all children of the same vertex — which the shape enforces
by construction.  A *plain* forest is one where every block is a singleton,
i.e. an ordinary decorated rooted forest.

Canonical form: within every block the nodes are sorted by their serialized
string, and every block list (child blocks of a vertex, and the root blocks)
is likewise sorted.  Canonical forests compare equal iff they are equal as
nested tuples, so they serve as basis keys.

Grammar (whitespace-insensitive)::

    pforest := '{' '}' | '{' block (',' block)* '}'
    block   := '[' node (',' node)* ']'
    node    := dec | dec '(' block (',' block)* ')'
    dec     := label | label ':' counter

with ``label`` matching [A-Za-z0-9_]+ and ``counter`` a nonnegative integer
(omitted when 0).  Examples: ``{[d]}`` is the single d-vertex;
``{[d([e],[f])]}`` a root with two child blocks; ``{[d([e,f])]}`` a root
whose two children share one block; ``{[d,e]}`` two roots in one block.

Vertex references: a ``VertexRef`` is a tuple of (block_index, node_index)
pairs giving the path from the top level down to a vertex, in canonical
coordinates.  Any surgery (grafting, counter shifts) edits the raw nested
structure at a ref and re-canonicalizes once at the end, since refs do not
survive canonicalization.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional

Dec = tuple  # (counter: int, label: str)
Node = tuple  # (Dec, Blocks)
Block = tuple  # tuple[Node, ...]
PForest = tuple  # tuple[Block, ...]
VertexRef = tuple  # tuple[(block_idx, node_idx), ...]

EMPTY: PForest = ()

NEW_BLOCK = "*"  # graft target: start a fresh child block


# ---------------------------------------------------------------------------
# Serialization and parsing.
# ---------------------------------------------------------------------------

def ser_dec(dec: Dec) -> str:
    k, d = dec
    return d if k == 0 else "%s:%d" % (d, k)


# The serializers run inside every sort in `canonicalize`, so they are
# memoized; nodes and blocks are immutable tuples.

@lru_cache(maxsize=None)
def ser_node(nd: Node) -> str:
    dec, blocks = nd
    if not blocks:
        return ser_dec(dec)
    return ser_dec(dec) + "(" + ",".join(ser_block(b) for b in blocks) + ")"


@lru_cache(maxsize=None)
def ser_block(block: Block) -> str:
    return "[" + ",".join(ser_node(n) for n in block) + "]"


def serialize(forest: PForest) -> str:
    return "{" + ",".join(ser_block(b) for b in forest) + "}"


class ParseError(ValueError):
    pass


_LABEL_RE = re.compile(r"[A-Za-z0-9_]+")
_NAT_RE = re.compile(r"\d+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise ParseError("expected %r at position %d in %r"
                             % (ch, self.pos, self.text))
        self.pos += 1

    def label(self) -> str:
        self.skip_ws()
        m = _LABEL_RE.match(self.text, self.pos)
        if not m:
            raise ParseError("expected label at position %d in %r"
                             % (self.pos, self.text))
        self.pos = m.end()
        return m.group()

    def nat(self) -> int:
        self.skip_ws()
        m = _NAT_RE.match(self.text, self.pos)
        if not m:
            raise ParseError("expected counter at position %d in %r"
                             % (self.pos, self.text))
        self.pos = m.end()
        return int(m.group())

    def node(self) -> Node:
        d = self.label()
        k = 0
        if self.peek() == ":":
            self.pos += 1
            k = self.nat()
        blocks = ()
        if self.peek() == "(":
            self.pos += 1
            bs = [self.block()]
            while self.peek() == ",":
                self.pos += 1
                bs.append(self.block())
            self.expect(")")
            blocks = tuple(bs)
        return ((k, d), blocks)

    def block(self) -> Block:
        self.expect("[")
        ns = [self.node()]
        while self.peek() == ",":
            self.pos += 1
            ns.append(self.node())
        self.expect("]")
        return tuple(ns)

    def pforest(self) -> PForest:
        self.expect("{")
        if self.peek() == "}":
            self.pos += 1
            return EMPTY
        bs = [self.block()]
        while self.peek() == ",":
            self.pos += 1
            bs.append(self.block())
        self.expect("}")
        return tuple(bs)


def parse(text: str) -> PForest:
    """Parse a partitioned forest; the result is canonicalized."""
    p = _Parser(text)
    f = p.pforest()
    p.skip_ws()
    if p.pos != len(p.text):
        raise ParseError("trailing input at position %d in %r"
                         % (p.pos, p.text))
    return canonicalize(f)


# ---------------------------------------------------------------------------
# Canonical form and basic inspection.
# ---------------------------------------------------------------------------

def canonicalize(forest: PForest) -> PForest:
    """Sort all blocks and block lists by serialized string, bottom-up.
    Memoized level by level, so re-canonicalizing a forest that shares
    subtrees with an earlier one costs only the changed spine."""
    return _canon_blocks(forest)


@lru_cache(maxsize=None)
def _canon_node(nd: Node) -> Node:
    dec, blocks = nd
    return (dec, _canon_blocks(blocks))


@lru_cache(maxsize=None)
def _canon_blocks(blocks) -> PForest:
    fixed = [tuple(sorted((_canon_node(n) for n in b), key=ser_node))
             for b in blocks if b]
    return tuple(sorted(fixed, key=ser_block))


def nvertices(forest: PForest) -> int:
    def cnt(nd: Node) -> int:
        return 1 + sum(cnt(n) for b in nd[1] for n in b)
    return sum(cnt(n) for b in forest for n in b)


def counter_total(forest: PForest) -> int:
    def tot(nd: Node) -> int:
        return nd[0][0] + sum(tot(n) for b in nd[1] for n in b)
    return sum(tot(n) for b in forest for n in b)


def vertices(forest: PForest) -> list[tuple[VertexRef, Node]]:
    """All (ref, node) pairs in depth-first order."""
    out: list[tuple[VertexRef, Node]] = []

    def walk(ref: VertexRef, nd: Node):
        out.append((ref, nd))
        for bi, b in enumerate(nd[1]):
            for ni, ch in enumerate(b):
                walk(ref + ((bi, ni),), ch)

    for bi, b in enumerate(forest):
        for ni, nd in enumerate(b):
            walk(((bi, ni),), nd)
    return out


def get_node(forest: PForest, ref: VertexRef) -> Node:
    (bi, ni), rest = ref[0], ref[1:]
    nd = forest[bi][ni]
    for bi, ni in rest:
        nd = nd[1][bi][ni]
    return nd


def is_partitioned_tree(forest: PForest) -> bool:
    """At most one root block (the empty forest qualifies)."""
    return len(forest) <= 1


def is_plain(forest: PForest) -> bool:
    """Every block (at all levels) is a singleton."""
    def ok(nd: Node) -> bool:
        return all(len(b) == 1 and ok(b[0]) for b in nd[1])
    return all(len(b) == 1 and ok(b[0]) for b in forest)


def is_one_rooted(forest: PForest) -> bool:
    """Exactly one root block containing exactly one vertex."""
    return len(forest) == 1 and len(forest[0]) == 1


def all_counters_zero(forest: PForest) -> bool:
    return counter_total(forest) == 0


# ---------------------------------------------------------------------------
# Structure maps between basis families.
# ---------------------------------------------------------------------------

def drop_counters(forest: PForest) -> PForest:
    def do_node(nd: Node) -> Node:
        dec, blocks = nd
        return ((0, dec[1]), tuple(tuple(do_node(n) for n in b)
                                   for b in blocks))
    return canonicalize(tuple(tuple(do_node(n) for n in b) for b in forest))


def forget_blocks(forest: PForest) -> PForest:
    """Split every block into singletons (partitioned -> plain forest)."""
    def do_node(nd: Node) -> Node:
        dec, blocks = nd
        return (dec, tuple((do_node(n),) for b in blocks for n in b))
    return canonicalize(tuple((do_node(n),) for b in forest for n in b))


def mul_merge(a: PForest, b: PForest) -> PForest:
    """Product merging all root blocks into one (partitioned-tree product)."""
    nodes = tuple(n for blk in a for n in blk) + tuple(n for blk in b for n in blk)
    if not nodes:
        return EMPTY
    return canonicalize((nodes,))


def mul_disjoint(a: PForest, b: PForest) -> PForest:
    """Disjoint-union product (plain forests)."""
    return canonicalize(a + b)


def build_root(label: str, trees: tuple, counter: int = 0) -> PForest:
    """One new root over the given partitioned trees.

    Each nonempty argument tree contributes its root block as one child
    block of the new vertex; the empty forest contributes nothing.
    """
    blocks = []
    for t in trees:
        for blk in t:
            blocks.append(blk)
    root: Node = ((counter, label), tuple(blocks))
    return canonicalize(((root,),))


# ---------------------------------------------------------------------------
# Surgery: grafting and counter shifts.  All take refs in canonical
# coordinates of the input and return canonical output (or None when a
# counter would go negative — the Zero sentinel absorbed by LinComb).
# ---------------------------------------------------------------------------

def _edit_at(forest: PForest, ref: VertexRef, fn) -> PForest:
    """Rebuild `forest` with fn applied to the node at `ref` (raw, no sort)."""
    def do_node(nd: Node, path: VertexRef) -> Node:
        if not path:
            return fn(nd)
        (bi, ni), rest = path[0], path[1:]
        dec, blocks = nd
        blk = blocks[bi]
        new_blk = blk[:ni] + (do_node(blk[ni], rest),) + blk[ni + 1:]
        return (dec, blocks[:bi] + (new_blk,) + blocks[bi + 1:])

    (bi, ni), rest = ref[0], ref[1:]
    blk = forest[bi]
    new_blk = blk[:ni] + (do_node(blk[ni], rest),) + blk[ni + 1:]
    return forest[:bi] + (new_blk,) + forest[bi + 1:]


class _Negative(Exception):
    pass


def graft_shift(forest: PForest, ref: VertexRef, target, graft: PForest,
                dk: int = 0) -> Optional[PForest]:
    """Graft the roots of `graft` under the vertex at `ref`, and shift that
    vertex's counter by dk, in one edit.

    `target` is NEW_BLOCK to open a fresh child block, or the index of an
    existing child block to join.  Returns None when the shifted counter
    would be negative.  (Single edit + single canonicalization: refs become
    stale once the result is sorted.)
    """
    new_nodes = tuple(n for blk in graft for n in blk)

    def fn(nd: Node) -> Node:
        (k, d), blocks = nd
        k += dk
        if k < 0:
            raise _Negative
        if new_nodes:
            if target == NEW_BLOCK:
                blocks = blocks + (new_nodes,)
            else:
                blocks = (blocks[:target] + (blocks[target] + new_nodes,)
                          + blocks[target + 1:])
        return ((k, d), blocks)

    try:
        return canonicalize(_edit_at(forest, ref, fn))
    except _Negative:
        return None


def shift_at(forest: PForest, ref: VertexRef, dk: int) -> Optional[PForest]:
    return graft_shift(forest, ref, NEW_BLOCK, EMPTY, dk)


def graft_at(forest: PForest, ref: VertexRef, target, graft: PForest) -> PForest:
    out = graft_shift(forest, ref, target, graft, 0)
    assert out is not None
    return out


def child_block_count(forest: PForest, ref: VertexRef) -> int:
    return len(get_node(forest, ref)[1])


# ---------------------------------------------------------------------------
# Ideals (leafward-closed vertex sets) and the coproduct split.
# ---------------------------------------------------------------------------

def ideals(forest: PForest) -> list[frozenset]:
    """All vertex sets closed under taking children, as frozensets of refs.

    Includes the empty set and the full vertex set.  Enumeration is by
    filtering all subsets, which is fine at the sizes this package works at.
    """
    verts = vertices(forest)
    refs = [r for r, _ in verts]
    children = {r: [r + ((bi, ni),) for bi, b in enumerate(nd[1])
                    for ni, _ in enumerate(b)]
                for r, nd in verts}
    out = []
    n = len(refs)
    for mask in range(1 << n):
        sub = frozenset(refs[i] for i in range(n) if mask >> i & 1)
        if all(c in sub for r in sub for c in children[r]):
            out.append(sub)
    return out


def split_ideal(forest: PForest, ideal: frozenset, bump: bool = True
                ) -> tuple[PForest, tuple]:
    """Cut away the subtrees spanned by `ideal`.

    Returns (trunk, pruned): `trunk` is the canonical forest on the
    complement, and `pruned` the tuple of removed subtree root nodes (each a
    full canonical subtree).  With bump=True, every remaining vertex has its
    counter increased by the number of its child blocks that vanished whole
    into the ideal; partially removed blocks just shrink and do not count.
    """
    pruned: list[Node] = []

    def do_node(ref: VertexRef, nd: Node) -> Node:
        (k, d), blocks = nd
        iota = 0
        new_blocks = []
        for bi, block in enumerate(blocks):
            kept = []
            for ni, ch in enumerate(block):
                r2 = ref + ((bi, ni),)
                if r2 in ideal:
                    pruned.append(ch)
                else:
                    kept.append(do_node(r2, ch))
            if kept:
                new_blocks.append(tuple(kept))
            else:
                iota += 1
        if bump:
            k += iota
        return ((k, d), tuple(new_blocks))

    top = []
    for bi, block in enumerate(forest):
        kept = []
        for ni, ch in enumerate(block):
            r = ((bi, ni),)
            if r in ideal:
                pruned.append(ch)
            else:
                kept.append(do_node(r, ch))
        if kept:
            top.append(tuple(kept))
    return canonicalize(tuple(top)), tuple(pruned)


# ---------------------------------------------------------------------------
# General restriction (arbitrary vertex subsets; orphaned groups float to
# the top as new root blocks).
# ---------------------------------------------------------------------------

def restrict(forest: PForest, keep: frozenset) -> PForest:
    """Sub-forest on `keep`: direct edges survive, same-block stays
    same-block, and vertices whose parent is gone become roots (one floated
    root block per surviving part of a block)."""
    floated: list[Block] = []

    def do_node(ref: VertexRef, nd: Node) -> Optional[Node]:
        dec, blocks = nd
        mine = ref in keep
        new_blocks = []
        for bi, block in enumerate(blocks):
            members = [do_node(ref + ((bi, ni),), ch)
                       for ni, ch in enumerate(block)]
            members = [m for m in members if m is not None]
            if members:
                if mine:
                    new_blocks.append(tuple(members))
                else:
                    floated.append(tuple(members))
        return (dec, tuple(new_blocks)) if mine else None

    top = []
    for bi, block in enumerate(forest):
        members = [do_node(((bi, ni),), ch) for ni, ch in enumerate(block)]
        members = [m for m in members if m is not None]
        if members:
            top.append(tuple(members))
    return canonicalize(tuple(top) + tuple(floated))


def varsigma(tree: PForest) -> int:
    """Number of singleton child blocks of the root (one-rooted trees)."""
    assert is_one_rooted(tree), serialize(tree)
    return sum(1 for b in tree[0][0][1] if len(b) == 1)


# ---------------------------------------------------------------------------
# Set partitions, coarsenings (block merges), admissible partitions.
# ---------------------------------------------------------------------------

def set_partitions(items: list) -> Iterator[list[list]]:
    """All set partitions of `items` (standard element-by-element recursion)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def coarsenings(forest: PForest) -> list[PForest]:
    """All forests obtained by merging sibling blocks, with multiplicity.

    Every vertex's child-block list (and the root block list) is merged
    along a set partition of its positions, independently and recursively.
    The returned list repeats a canonical form once per labeled choice, so
    summing over it gives the right multiplicities.
    """
    def do_blocks(blocks) -> list[tuple]:
        per_block = []
        for block in blocks:
            choices = [do_node(n) for n in block]
            per_block.append([tuple(c) for c in product(*choices)])
        out = []
        for combo in product(*per_block):
            for parts in set_partitions(list(range(len(combo)))):
                merged = tuple(tuple(n for i in grp for n in combo[i])
                               for grp in parts)
                out.append(merged)
        return out

    def do_node(nd: Node) -> list[Node]:
        dec, blocks = nd
        return [(dec, bl) for bl in do_blocks(blocks)]

    return [canonicalize(bl) for bl in do_blocks(forest)]


def coarsens_to(fine: PForest, coarse: PForest) -> bool:
    """True iff `coarse` arises from `fine` by merging sibling blocks."""
    return coarse in set(coarsenings(fine))


def admissible_partitions(tree: PForest) -> list[list[frozenset]]:
    """Vertex-set partitions all of whose pieces restrict to one-rooted
    trees with no singleton child block at their root."""
    refs = [r for r, _ in vertices(tree)]
    out = []
    for parts in set_partitions(refs):
        ok = True
        for piece in parts:
            sub = restrict(tree, frozenset(piece))
            if not (is_one_rooted(sub) and varsigma(sub) == 0):
                ok = False
                break
        if ok:
            out.append([frozenset(p) for p in parts])
    return out


def contract(tree: PForest, partition: list[frozenset]) -> PForest:
    """Collapse each piece of a vertex partition to a single vertex.

    The result is a plain forest whose vertex labels are the pieces'
    serialized restrictions wrapped in angle brackets, and whose edges are
    induced: piece P sits under piece Q when the parent of P's minimal
    vertex lies in Q.  Pieces must each have a unique minimal vertex (as
    admissible ones do).
    """
    piece_of = {}
    for i, piece in enumerate(partition):
        for r in piece:
            piece_of[r] = i
    labels = ["<" + serialize(restrict(tree, piece)) + ">"
              for piece in partition]
    # minimal vertex of a piece = the one whose parent ref is outside it
    parents = {}
    for i, piece in enumerate(partition):
        roots = [r for r in piece
                 if len(r) == 1 or r[:-1] not in piece]
        assert len(roots) == 1, "piece is not one-rooted"
        r = roots[0]
        parents[i] = piece_of[r[:-1]] if len(r) > 1 else None

    children: dict = {i: [] for i in range(len(partition))}
    top = []
    for i, par in parents.items():
        if par is None:
            top.append(i)
        else:
            children[par].append(i)

    def build(i: int) -> Node:
        return ((0, labels[i]), tuple((build(j),) for j in children[i]))

    return canonicalize(tuple((build(i),) for i in top))


# ---------------------------------------------------------------------------
# Enumeration.  All counters are 0; labels range over a fixed alphabet.
# Generation follows canonical order directly (multisets over sorted item
# lists), so no dedup pass is needed.
# ---------------------------------------------------------------------------

def _multisets(items: list, sizes: list[int], total: int, start: int = 0):
    """Multisets (as index-sorted tuples) of `items` with sizes summing to
    `total`.  items must be sorted in canonical order."""
    if total == 0:
        yield ()
        return
    for i in range(start, len(items)):
        if sizes[i] <= total:
            for rest in _multisets(items, sizes, total - sizes[i], i):
                yield (items[i],) + rest


class _Enum:
    """Memoized enumerator for one label alphabet."""

    def __init__(self, labels: tuple[str, ...]):
        self.labels = tuple(labels)
        self._nodes: dict[int, list[Node]] = {}
        self._blocks: dict[int, list[Block]] = {}
        self._plain: dict[int, list[Node]] = {}

    def nodes(self, m: int) -> list[Node]:
        """Canonical nodes (vertex + child blocks) with m vertices."""
        if m not in self._nodes:
            out = []
            for d in sorted(self.labels):
                for bl in self.blocklists(m - 1):
                    out.append(((0, d), bl))
            self._nodes[m] = sorted(out, key=ser_node)
        return self._nodes[m]

    def blocks(self, p: int) -> list[Block]:
        """Canonical nonempty blocks with p vertices total."""
        if p not in self._blocks:
            items: list[Node] = []
            for m in range(1, p + 1):
                items.extend(self.nodes(m))
            items.sort(key=ser_node)
            sizes = [_node_size(n) for n in items]
            self._blocks[p] = sorted(
                (t for t in _multisets(items, sizes, p) if t),
                key=ser_block)
        return self._blocks[p]

    def blocklists(self, m: int) -> list[PForest]:
        """Canonical block lists with m vertices total (m=0 gives ())."""
        items: list[Block] = []
        for p in range(1, m + 1):
            items.extend(self.blocks(p))
        items.sort(key=ser_block)
        sizes = [sum(_node_size(n) for n in b) for b in items]
        return list(_multisets(items, sizes, m))

    def plain_nodes(self, m: int) -> list[Node]:
        """Plain rooted trees (all blocks singleton) with m vertices."""
        if m not in self._plain:
            out = []
            if m >= 1:
                for d in sorted(self.labels):
                    items: list[Node] = []
                    for q in range(1, m):
                        items.extend(self.plain_nodes(q))
                    items.sort(key=ser_node)
                    sizes = [_node_size(n) for n in items]
                    for kids in _multisets(items, sizes, m - 1):
                        blocks = sorted(((k,) for k in kids), key=ser_block)
                        out.append(((0, d), tuple(blocks)))
            self._plain[m] = sorted(out, key=ser_node)
        return self._plain[m]


def _node_size(nd: Node) -> int:
    return 1 + sum(_node_size(n) for b in nd[1] for n in b)


_ENUMS: dict[tuple, _Enum] = {}


def _enum(labels) -> _Enum:
    key = tuple(sorted(labels))
    if key not in _ENUMS:
        _ENUMS[key] = _Enum(key)
    return _ENUMS[key]


def enum_partitioned(n: int, labels) -> list[PForest]:
    """Partitioned trees (single root block) with n vertices, counters 0."""
    if n == 0:
        return [EMPTY]
    e = _enum(labels)
    return [(b,) for b in e.blocks(n)]


def enum_plain_trees(n: int, labels) -> list[PForest]:
    """Plain rooted trees with n vertices (each its own singleton block)."""
    if n == 0:
        return [EMPTY]
    e = _enum(labels)
    return [((nd,),) for nd in e.plain_nodes(n)]


def enum_plain_forests(n: int, labels) -> list[PForest]:
    """Plain rooted forests with n vertices."""
    if n == 0:
        return [EMPTY]
    e = _enum(labels)
    items: list[Node] = []
    for m in range(1, n + 1):
        items.extend(e.plain_nodes(m))
    items.sort(key=ser_node)
    sizes = [_node_size(nd) for nd in items]
    return [tuple(sorted(((nd,) for nd in ms), key=ser_block))
            for ms in _multisets(items, sizes, n)]


def enum_one_rooted(n: int, labels) -> list[PForest]:
    """Partitioned trees whose root block is a singleton, n vertices."""
    if n == 0:
        return []
    e = _enum(labels)
    return [((nd,),) for nd in e.nodes(n)]
