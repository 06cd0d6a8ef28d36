from collections import Counter

import pytest
from hypothesis import given, strategies as st

from comprelie import ptree
from comprelie.ptree import (
    EMPTY, NEW_BLOCK, parse, serialize, canonicalize, nvertices, vertices,
    graft_at, shift_at, split_ideal, ideals, restrict, varsigma,
    coarsenings, coarsens_to, admissible_partitions, contract,
    mul_merge, mul_disjoint, forget_blocks, drop_counters, build_root,
    is_partitioned_tree, is_plain, is_one_rooted,
    enum_partitioned, enum_plain_trees, enum_plain_forests, enum_one_rooted,
    set_partitions, ParseError,
)

D1 = ("d",)
D2 = ("d", "e")


# --- parsing / serialization ----------------------------------------------

def test_parse_basics():
    assert parse("{}") == EMPTY
    assert parse("{[d]}") == (((((0, "d")), ()),),)
    assert parse(" { [ d:3 ] } ") == ((((3, "d"), ()),),)
    # canonical order does not depend on input order
    assert parse("{[d([f],[e])]}") == parse("{[d([e],[f])]}")
    assert parse("{[e,d]}") == parse("{[d,e]}")


def test_parse_errors():
    for bad in ("", "{", "{[]}", "{[d]", "{[d]} junk", "[d]", "{[d:]}"):
        with pytest.raises(ParseError):
            parse(bad)


def test_counter_display():
    t = parse("{[d:2([e])]}")
    assert serialize(t) == "{[d:2([e])]}"
    assert ptree.counter_total(t) == 2
    assert serialize(drop_counters(t)) == "{[d([e])]}"


@given(st.integers(0, 4), st.integers(0, 10000))
def test_roundtrip_enumerated(n, seed):
    trees = enum_partitioned(n, D2)
    t = trees[seed % len(trees)]
    assert parse(serialize(t)) == t
    assert canonicalize(t) == t
    assert nvertices(t) == n


# --- enumeration counts -----------------------------------------------------

def test_partitioned_counts_one_label():
    assert [len(enum_partitioned(n, D1)) for n in range(6)] == [1, 1, 2, 5, 14, 42]


def test_plain_counts():
    assert [len(enum_plain_trees(n, D1)) for n in range(6)] == [1, 1, 1, 2, 4, 9]
    assert [len(enum_plain_forests(n, D1)) for n in range(6)] == [1, 1, 2, 4, 9, 20]


def test_enumeration_is_canonical_and_distinct():
    for n in range(5):
        ts = enum_partitioned(n, D2)
        assert len(set(ts)) == len(ts)
        for t in ts:
            assert canonicalize(t) == t
            assert is_partitioned_tree(t)
    for t in enum_plain_forests(4, D1):
        assert is_plain(t)
    for t in enum_one_rooted(3, D1):
        assert is_one_rooted(t)


def test_one_rooted_are_the_singleton_root_block_trees():
    for n in range(1, 5):
        expect = [t for t in enum_partitioned(n, D2) if is_one_rooted(t)]
        assert enum_one_rooted(n, D2) == expect


# --- products ----------------------------------------------------------------

def test_mul_merge():
    a, b = parse("{[d]}"), parse("{[e([f])]}")
    assert serialize(mul_merge(a, b)) == "{[d,e([f])]}"
    assert mul_merge(a, EMPTY) == a
    assert mul_merge(EMPTY, EMPTY) == EMPTY
    # commutative by canonicalization
    assert mul_merge(a, b) == mul_merge(b, a)


def test_mul_disjoint():
    a, b = parse("{[d]}"), parse("{[e]}")
    assert serialize(mul_disjoint(a, b)) == "{[d],[e]}"
    assert mul_disjoint(a, b) == mul_disjoint(b, a)


def test_forget_blocks():
    t = parse("{[d([e,f([g]),h])]}")
    assert serialize(forget_blocks(t)) == "{[d([e],[f([g])],[h])]}"
    assert is_plain(forget_blocks(t))


def test_build_root():
    t1, t2 = parse("{[e]}"), parse("{[f,g]}")
    assert serialize(build_root("d", (t1, t2))) == "{[d([e],[f,g])]}"
    assert serialize(build_root("d", ())) == "{[d]}"
    assert serialize(build_root("d", (EMPTY,))) == "{[d]}"


# --- surgery -----------------------------------------------------------------

def build_ref_map(t):
    return {ptree.ser_dec(nd[0]): r for r, nd in vertices(t)}


def test_graft_goldens():
    tdeux = parse("{[r([l])]}")
    tun = parse("{[m]}")
    refs = build_ref_map(tdeux)
    assert serialize(graft_at(tdeux, refs["r"], NEW_BLOCK, tun)) == "{[r([l],[m])]}"
    assert serialize(graft_at(tdeux, refs["r"], 0, tun)) == "{[r([l,m])]}"
    assert serialize(graft_at(tdeux, refs["l"], NEW_BLOCK, tun)) == "{[r([l([m])])]}"


def test_graft_multi_root():
    # grafting a two-root one-block tree keeps its roots in one block
    t = parse("{[r]}")
    h = parse("{[a,b]}")
    refs = build_ref_map(t)
    assert serialize(graft_at(t, refs["r"], NEW_BLOCK, h)) == "{[r([a,b])]}"


def test_shift():
    t = parse("{[r([l])]}")
    refs = build_ref_map(t)
    assert serialize(shift_at(t, refs["l"], 2)) == "{[r([l:2])]}"
    assert shift_at(t, refs["l"], -1) is None
    t2 = parse("{[r:1([l])]}")
    refs2 = build_ref_map(t2)
    assert serialize(shift_at(t2, refs2["r:1"], -1)) == "{[r([l])]}"


# --- ideals and splitting ------------------------------------------------------

def test_ideals_chain():
    c3 = parse("{[a([b([c])])]}")
    ids = ideals(c3)
    assert len(ids) == 4
    got = set()
    for I in ids:
        R, P = split_ideal(c3, I)
        got.add((serialize(R), tuple(ptree.ser_node(n) for n in P)))
    assert got == {
        ("{[a([b([c])])]}", ()),
        ("{[a([b:1])]}", ("c",)),
        ("{[a:1]}", ("b([c])",)),
        ("{}", ("a([b([c])])",)),
    }


def test_ideals_partial_block_no_bump():
    # removing part of a block shrinks it without a counter bump
    t = parse("{[a([b,c])]}")
    refs = build_ref_map(t)
    I = frozenset([refs["b"]])
    R, P = split_ideal(t, I)
    assert serialize(R) == "{[a([c])]}"
    assert tuple(ptree.ser_node(n) for n in P) == ("b",)
    # removing the whole block does bump
    R2, P2 = split_ideal(t, frozenset([refs["b"], refs["c"]]))
    assert serialize(R2) == "{[a:1]}"


def test_split_no_bump_mode():
    t = parse("{[a([b])]}")
    refs = build_ref_map(t)
    R, P = split_ideal(t, frozenset([refs["b"]]), bump=False)
    assert serialize(R) == "{[a]}"


def test_ideal_count_is_antichain_free():
    # every subset of leaves of a corolla is an ideal: corolla with 3 leaves
    t = parse("{[a([b],[c],[d])]}")
    assert len(ideals(t)) == 8 + 1  # 2^3 leaf subsets plus the full set


# --- restriction, varsigma -----------------------------------------------------

def test_restrict_floats_orphans():
    c3 = parse("{[a([b([c])])]}")
    refs = build_ref_map(c3)
    sub = restrict(c3, frozenset([refs["a"], refs["c"]]))
    assert serialize(sub) == "{[a],[c]}"
    assert not is_one_rooted(sub)
    sub2 = restrict(c3, frozenset([refs["a"], refs["b"]]))
    assert serialize(sub2) == "{[a([b])]}"


def test_restrict_block_grouping():
    # two same-block children whose parent is removed stay in one block
    t = parse("{[a([b,c])]}")
    refs = build_ref_map(t)
    sub = restrict(t, frozenset([refs["b"], refs["c"]]))
    assert serialize(sub) == "{[b,c]}"


def test_varsigma():
    assert varsigma(parse("{[d]}")) == 0
    assert varsigma(parse("{[d([e])]}")) == 1
    assert varsigma(parse("{[d([e,f])]}")) == 0
    assert varsigma(parse("{[d([e],[f])]}")) == 2
    assert varsigma(parse("{[d([e,f],[g])]}")) == 1


# --- coarsenings -----------------------------------------------------------------

def test_coarsening_multiplicities():
    t41 = parse("{[d([d],[d],[d])]}")
    c = Counter(serialize(x) for x in coarsenings(t41))
    assert c == {"{[d([d],[d],[d])]}": 1,
                 "{[d([d,d],[d])]}": 3,
                 "{[d([d,d,d])]}": 1}


def test_coarsening_order():
    t31 = parse("{[d([d],[d])]}")
    h31 = parse("{[d([d,d])]}")
    assert coarsens_to(t31, h31)
    assert not coarsens_to(h31, t31)
    assert coarsens_to(t31, t31)
    # chain: merging at different depths composes
    t = parse("{[d([d([d],[d])],[d])]}")
    cs = set(map(serialize, coarsenings(t)))
    assert "{[d([d,d([d,d])])]}" in cs
    assert len(cs) == 4


def test_set_partitions_count():
    # Bell numbers
    assert sum(1 for _ in set_partitions(list(range(4)))) == 15
    assert sum(1 for _ in set_partitions([])) == 1


# --- admissible partitions and contraction ----------------------------------------

def test_admissible_partitions():
    assert len(admissible_partitions(parse("{[d]}"))) == 1
    assert len(admissible_partitions(parse("{[d([e])]}"))) == 1
    assert len(admissible_partitions(parse("{[d([e,f])]}"))) == 2
    assert len(admissible_partitions(parse("{[d([e],[f])]}"))) == 1


def test_contract_golden():
    t = parse("{[d([d])]}")
    (ap,) = admissible_partitions(t)
    a = "<{[d]}>"
    assert serialize(contract(t, ap)) == "{[%s([%s])]}" % (a, a)

    h31 = parse("{[d([d,d])]}")
    out = sorted(serialize(contract(h31, ap)) for ap in admissible_partitions(h31))
    assert "{[<{[d([d,d])]}>]}" in out
    assert "{[%s([%s],[%s])]}" % (a, a, a) in out
