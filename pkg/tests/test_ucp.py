import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from comprelie.lincomb import (
    LinComb, unit, bilinear_extend, tensor2, tensor_apply2,
    tensor_flatten_left, tensor_flatten_right, tensor_swap23,
)
from comprelie.ptree import (
    EMPTY, parse, serialize, drop_counters, forget_blocks, mul_merge,
    mul_disjoint, nvertices, enum_partitioned, enum_plain_forests,
    shift_at, vertices, is_plain,
)
from comprelie.shuffle import bullet_tvf, words_of_length
from comprelie.ucp import (
    ucp_bullet, cp_bullet, cp_bullet_with_map, hck_bullet,
    mul_merge_lc, mul_disjoint_lc,
    coproduct_ucp, coproduct_cp, coproduct_hck, counit, reduced_coproduct,
    counter_elimination, counter_elimination_recursive, identity_map,
    delta_perm, kernel_delta_dim,
    cm_grow, cm_x, cm_delta_closed, cm_delta_oracle,
)

P = parse


def lc(*pairs):
    return LinComb([(P(s), c) for s, c in pairs])


def lc2(*pairs):
    return LinComb([(((P(a), P(b))), c) for a, b, c in pairs])


# --- grafting products -------------------------------------------------------

def test_ucp_bullet_goldens():
    assert ucp_bullet(P("{[d:2]}"), P("{[e:5]}")) == lc(("{[d:2([e:5])]}", 1))
    assert ucp_bullet(P("{[d]}"), P("{[e,f]}")) == lc(("{[d([e,f])]}", 1))
    assert ucp_bullet(P("{[d]}"), P("{[e([f])]}")) == lc(("{[d([e([f])])]}", 1))
    # grafting at either vertex of the chain
    assert ucp_bullet(P("{[d([e])]}"), P("{[f]}")) == lc(
        ("{[d([e([f])])]}", 1), ("{[d([e],[f])]}", 1))


def test_ucp_bullet_unit_right():
    # grafting the unit bumps one counter per vertex
    assert ucp_bullet(P("{[d:3]}"), EMPTY) == lc(("{[d:4]}", 1))
    assert ucp_bullet(P("{[d([e])]}"), EMPTY) == lc(
        ("{[d:1([e])]}", 1), ("{[d([e:1])]}", 1))
    assert ucp_bullet(P("{[d([e],[f])]}"), EMPTY) == lc(
        ("{[d:1([e],[f])]}", 1), ("{[d([e:1],[f])]}", 1),
        ("{[d([e],[f:1])]}", 1))


def test_bullet_left_unit_vanishes():
    assert ucp_bullet(EMPTY, P("{[d]}")).is_zero()
    assert ucp_bullet(EMPTY, EMPTY).is_zero()
    assert cp_bullet(EMPTY, P("{[d]}")).is_zero()
    assert hck_bullet(EMPTY, P("{[d]}")).is_zero()


def test_cp_bullet_counts_vertices():
    t = P("{[d([e],[f])]}")
    assert cp_bullet(t, EMPTY) == LinComb([(t, 3)])


def test_hck_bullet_splits_blocks():
    # grafting a two-tree forest attaches both roots as separate children
    f, g = P("{[d]}"), P("{[e],[f]}")
    assert hck_bullet(f, g) == lc(("{[d([e],[f])]}", 1))
    assert hck_bullet(P("{[d],[e]}"), EMPTY) == lc(("{[d],[e]}", 2))


DLAB = ("d",)
ABLAB = ("a", "b")
CP3 = [t for n in range(4) for t in enum_partitioned(n, DLAB)]
CP3AB = [t for n in range(4) for t in enum_partitioned(n, ABLAB)]


def prelie_defect(bullet, a, b, c):
    lhs = bullet(a, b).map_linear(lambda x: bullet(x, c)) \
        - bullet(b, c).map_linear(lambda x: bullet(a, x))
    rhs = bullet(a, c).map_linear(lambda x: bullet(x, b)) \
        - bullet(c, b).map_linear(lambda x: bullet(a, x))
    return lhs - rhs


def leibniz_defect(bullet, mul, a, b, c):
    lhs = mul(a, b).map_linear(lambda x: bullet(x, c))
    rhs = bilinear_extend(mul, bullet(a, c), unit(b)) \
        + bilinear_extend(mul, unit(a), bullet(b, c))
    return lhs - rhs


@given(st.sampled_from(CP3), st.sampled_from(CP3), st.sampled_from(CP3))
@settings(max_examples=60, deadline=None)
def test_cp_prelie_identity(a, b, c):
    assert prelie_defect(cp_bullet, a, b, c).is_zero()


@given(st.sampled_from(CP3AB), st.sampled_from(CP3AB), st.sampled_from(CP3AB))
@settings(max_examples=60, deadline=None)
def test_cp_leibniz(a, b, c):
    assert leibniz_defect(cp_bullet, mul_merge_lc, a, b, c).is_zero()


def bump_some(trees):
    """A few counter-decorated variants of each tree."""
    out = list(trees)
    for t in trees:
        for ref, _ in vertices(t):
            out.append(shift_at(t, ref, +1))
    return out


UCP2 = bump_some([t for n in range(3) for t in enum_partitioned(n, ABLAB)])


def test_ucp_prelie_and_leibniz():
    pool = sorted(set(UCP2), key=serialize)[::2]  # spread over the 26 variants
    for a, b, c in itertools.product(pool, repeat=3):
        assert prelie_defect(ucp_bullet, a, b, c).is_zero(), (
            serialize(a), serialize(b), serialize(c))
        assert leibniz_defect(ucp_bullet, mul_merge_lc, a, b, c).is_zero()


HF3 = [f for n in range(4) for f in enum_plain_forests(n, DLAB)]


@given(st.sampled_from(HF3), st.sampled_from(HF3), st.sampled_from(HF3))
@settings(max_examples=60, deadline=None)
def test_hck_prelie_and_leibniz(a, b, c):
    assert prelie_defect(hck_bullet, a, b, c).is_zero()
    assert leibniz_defect(hck_bullet, mul_disjoint_lc, a, b, c).is_zero()


# --- cutting coproducts ------------------------------------------------------

def test_coproduct_ucp_goldens():
    t = P("{[d([e])]}")
    assert coproduct_ucp(t) == lc2(
        ("{[d([e])]}", "{}", 1), ("{}", "{[d([e])]}", 1),
        ("{[d:1]}", "{[e]}", 1))
    t = P("{[d([e],[f])]}")
    assert coproduct_ucp(t) == lc2(
        ("{[d([e],[f])]}", "{}", 1), ("{}", "{[d([e],[f])]}", 1),
        ("{[d:1([e])]}", "{[f]}", 1), ("{[d:1([f])]}", "{[e]}", 1),
        ("{[d:2]}", "{[e,f]}", 1))
    # one shared block: partial removals do not bump the counter
    t = P("{[d([e,f])]}")
    assert coproduct_ucp(t) == lc2(
        ("{[d([e,f])]}", "{}", 1), ("{}", "{[d([e,f])]}", 1),
        ("{[d([e])]}", "{[f]}", 1), ("{[d([f])]}", "{[e]}", 1),
        ("{[d:1]}", "{[e,f]}", 1))
    t = P("{[d([e([f])])]}")
    assert coproduct_ucp(t) == lc2(
        ("{[d([e([f])])]}", "{}", 1), ("{}", "{[d([e([f])])]}", 1),
        ("{[d([e:1])]}", "{[f]}", 1), ("{[d:1]}", "{[e([f])]}", 1))


def test_coproduct_cp_goldens():
    assert coproduct_cp(P("{[d([e],[f])]}")) == lc2(
        ("{[d([e],[f])]}", "{}", 1), ("{}", "{[d([e],[f])]}", 1),
        ("{[d([e])]}", "{[f]}", 1), ("{[d([f])]}", "{[e]}", 1),
        ("{[d]}", "{[e,f]}", 1))
    assert coproduct_cp(P("{[d([e([f])])]}")) == lc2(
        ("{[d([e([f])])]}", "{}", 1), ("{}", "{[d([e([f])])]}", 1),
        ("{[d([e])]}", "{[f]}", 1), ("{[d]}", "{[e([f])]}", 1))


def test_coproduct_hck_goldens():
    assert coproduct_hck(P("{[d([e],[f])]}")) == lc2(
        ("{[d([e],[f])]}", "{}", 1), ("{}", "{[d([e],[f])]}", 1),
        ("{[d([e])]}", "{[f]}", 1), ("{[d([f])]}", "{[e]}", 1),
        ("{[d]}", "{[e],[f]}", 1))
    # forests split vertex by vertex
    assert coproduct_hck(P("{[d],[e]}")) == lc2(
        ("{[d],[e]}", "{}", 1), ("{}", "{[d],[e]}", 1),
        ("{[d]}", "{[e]}", 1), ("{[e]}", "{[d]}", 1))
    assert coproduct_hck(EMPTY) == lc2(("{}", "{}", 1))


def coassoc_defect(cop, t):
    once = cop(t)
    left = tensor_flatten_left(tensor_apply2(once, cop, unit))
    right = tensor_flatten_right(tensor_apply2(once, unit, cop))
    return left - right


def test_coassociativity_all_three():
    for t in bump_some([x for n in range(4) for x in enum_partitioned(n, DLAB)]):
        assert coassoc_defect(coproduct_ucp, t).is_zero(), serialize(t)
    for t in CP3AB:
        assert coassoc_defect(coproduct_cp, t).is_zero()
    for f in HF3:
        assert coassoc_defect(coproduct_hck, f).is_zero()


def test_counit_laws():
    for t in UCP2:
        d = coproduct_ucp(t)
        lhs = LinComb()
        for (a, b), c in d.items():
            lhs.add_term(b, c * counit(a))
        rhs = LinComb()
        for (a, b), c in d.items():
            rhs.add_term(a, c * counit(b))
        assert lhs == unit(t) and rhs == unit(t)


def test_coproduct_multiplicative():
    for mul, cop, pool in [
            (mul_merge, coproduct_ucp, UCP2[:14]),
            (mul_merge, coproduct_cp, CP3AB[:14]),
            (mul_disjoint, coproduct_hck, HF3[:14])]:
        for a, b in itertools.product(pool, repeat=2):
            lhs = cop(mul(a, b))
            rhs = LinComb()
            for (a1, a2), c1 in cop(a).items():
                for (b1, b2), c2 in cop(b).items():
                    rhs.add_term((mul(a1, b1), mul(a2, b2)), c1 * c2)
            assert lhs == rhs, (serialize(a), serialize(b))


def bullet_compat_defect(bullet, mul, cop, a, b):
    # cop(a • b) = a' (x) a''•b  +  a'•b' (x) a''·b''
    lhs = bullet(a, b).map_linear(cop)
    rhs = LinComb()
    for (a1, a2), c in cop(a).items():
        rhs.iadd_scaled(c, tensor2(unit(a1), bullet(a2, b)))
        for (b1, b2), c2 in cop(b).items():
            rhs.iadd_scaled(
                c * c2, tensor2(bullet(a1, b1), unit(mul(a2, b2))))
    return lhs - rhs


def test_bullet_coproduct_compatibility():
    for bullet, mul, cop, pool in [
            (ucp_bullet, mul_merge, coproduct_ucp, UCP2[:16]),
            (cp_bullet, mul_merge, coproduct_cp, CP3AB[:16]),
            (hck_bullet, mul_disjoint, coproduct_hck, HF3[:16])]:
        for a, b in itertools.product(pool, repeat=2):
            assert bullet_compat_defect(bullet, mul, cop, a, b).is_zero(), (
                serialize(a), serialize(b))


# --- quotients ---------------------------------------------------------------

def test_drop_counters_intertwines():
    for t in UCP2:
        lhs = coproduct_ucp(t).map_keys(
            lambda k: (drop_counters(k[0]), drop_counters(k[1])))
        assert lhs == coproduct_cp(drop_counters(t))
        for u in UCP2[:10]:
            lhs2 = ucp_bullet(t, u).map_keys(drop_counters)
            rhs2 = cp_bullet(drop_counters(t), drop_counters(u))
            assert lhs2 == rhs2


def test_forget_blocks_intertwines():
    for t in CP3AB:
        lhs = coproduct_cp(t).map_keys(
            lambda k: (forget_blocks(k[0]), forget_blocks(k[1])))
        assert lhs == coproduct_hck(forget_blocks(t))
        for u in CP3AB[:10]:
            assert (cp_bullet(t, u).map_keys(forget_blocks)
                    == hck_bullet(forget_blocks(t), forget_blocks(u)))


NILP = {"a": unit("b"), "b": LinComb()}
GEN = {"a": LinComb({"a": Fraction(1, 2), "b": Fraction(3)}),
       "b": LinComb({"a": Fraction(-1), "b": Fraction(2, 5)})}


def counterful(budget=2):
    seen = set()
    for n in range(4):
        for t in enum_partitioned(n, ABLAB):
            frontier = [t]
            seen.add(t)
            for _ in range(budget):
                nxt = []
                for s in frontier:
                    for ref, _ in vertices(s):
                        s2 = shift_at(s, ref, +1)
                        if s2 not in seen:
                            seen.add(s2)
                            nxt.append(s2)
                frontier = nxt
    return sorted(seen, key=serialize)


@pytest.mark.parametrize("fmap", [identity_map(ABLAB), NILP, GEN],
                         ids=["id", "nilpotent", "generic"])
def test_counter_elimination_gate(fmap):
    # the closed per-vertex rule against the structural recursion through
    # the symmetric-word extension, on every tree with <= 3 vertices and
    # total counter <= 2
    closed = counter_elimination(fmap)
    rec = counter_elimination_recursive(fmap)
    for t in counterful():
        assert closed(t) == rec(t), serialize(t)


def test_counter_elimination_identity_is_drop_counters():
    closed = counter_elimination(identity_map(ABLAB))
    for t in counterful():
        assert closed(t) == unit(drop_counters(t))


def test_counter_elimination_is_morphism():
    phi = counter_elimination(GEN)
    bf = cp_bullet_with_map(GEN)
    pool = counterful()[:30]
    for t, u in itertools.product(pool, repeat=2):
        assert (ucp_bullet(t, u).map_linear(phi)
                == bilinear_extend(bf, phi(t), phi(u)))
        assert (phi(mul_merge(t, u))
                == bilinear_extend(mul_merge_lc, phi(t), phi(u)))


def test_cp_bullet_with_map_unit_case():
    bf = cp_bullet_with_map(NILP)
    assert bf(P("{[a([a])]}"), EMPTY) == lc(
        ("{[a([b])]}", 1), ("{[b([a])]}", 1))
    assert bf(P("{[b]}"), EMPTY).is_zero()
    # non-unit right argument falls back to plain grafting
    assert bf(P("{[a]}"), P("{[b]}")) == cp_bullet(P("{[a]}"), P("{[b]}"))


# --- block-pruning coproduct -------------------------------------------------

def test_delta_perm_goldens():
    assert delta_perm(P("{[d]}")).is_zero()
    assert delta_perm(P("{[d,d,d]}")).is_zero()
    assert delta_perm(P("{[d([d])]}")) == lc2(("{[d]}", "{[d]}", 1))
    assert delta_perm(P("{[d([d],[d])]}")) == lc2(("{[d([d])]}", "{[d]}", 2))
    assert delta_perm(P("{[d([d,d])]}")) == lc2(("{[d]}", "{[d,d]}", 1))
    assert delta_perm(P("{[d([d([d])])]}")) == lc2(("{[d]}", "{[d([d])]}", 1))
    assert delta_perm(P("{[d,d([d])]}")) == lc2(("{[d,d]}", "{[d]}", 1))


def test_delta_perm_permutative():
    # (delta (x) id) o delta is symmetric in the last two legs
    for t in [x for n in range(5) for x in enum_partitioned(n, DLAB)]:
        twice = tensor_flatten_left(
            tensor_apply2(delta_perm(t), delta_perm, unit))
        assert twice == tensor_swap23(twice), serialize(t)


def test_delta_perm_product_rule():
    # delta(x . y) = x' . y (x) x'' + x . y' (x) y''
    pool = [x for n in range(1, 4) for x in enum_partitioned(n, DLAB)]
    for a, b in itertools.product(pool, repeat=2):
        lhs = delta_perm(mul_merge(a, b))
        rhs = delta_perm(a).map_keys(lambda k: (mul_merge(k[0], b), k[1])) \
            + delta_perm(b).map_keys(lambda k: (mul_merge(a, k[0]), k[1]))
        assert lhs == rhs


def test_delta_perm_bullet_rule_cp():
    # delta(x • y) = (#roots x) x (x) y + x'•y (x) x'' + x' (x) x''•y
    pool = [x for n in range(1, 4) for x in enum_partitioned(n, DLAB)]
    for a, b in itertools.product(pool, repeat=2):
        lhs = cp_bullet(a, b).map_linear(delta_perm)
        rhs = LinComb([((a, b), Fraction(len(a[0])))])
        da = delta_perm(a)
        rhs += tensor_apply2(da, lambda x: cp_bullet(x, b), unit)
        rhs += tensor_apply2(da, unit, lambda x: cp_bullet(x, b))
        assert lhs == rhs, (serialize(a), serialize(b))


def test_delta_perm_bullet_unit_rule_ucp():
    # delta(x • unit) = x'•unit (x) x'' + x' (x) x''•unit
    for a in bump_some([x for n in range(1, 4)
                        for x in enum_partitioned(n, DLAB)]):
        lhs = ucp_bullet(a, EMPTY).map_linear(delta_perm)
        da = delta_perm(a)
        rhs = tensor_apply2(da, lambda x: ucp_bullet(x, EMPTY), unit) \
            + tensor_apply2(da, unit, lambda x: ucp_bullet(x, EMPTY))
        assert lhs == rhs, serialize(a)


def test_kernel_delta_dims():
    # frozen: dim ker on the n-vertex slice, one and two decorations
    assert [kernel_delta_dim(n, DLAB) for n in range(1, 7)] == [
        1, 1, 1, 2, 4, 14]
    assert [kernel_delta_dim(n, ("d", "e")) for n in range(1, 6)] == [
        2, 3, 6, 25, 122]


# --- Connes-Moscovici elements -----------------------------------------------

def test_cm_x_goldens():
    assert cm_x(("d",)) == lc(("{[d]}", 1))
    assert cm_x(("d", "d")) == lc(("{[d([d])]}", 1))
    assert cm_x(("d", "d", "d")) == lc(
        ("{[d([d([d])])]}", 1), ("{[d([d],[d])]}", 1))
    assert cm_x(("d",) * 4) == lc(
        ("{[d([d([d([d])])])]}", 1), ("{[d([d([d],[d])])]}", 1),
        ("{[d([d([d])],[d])]}", 3), ("{[d([d],[d],[d])]}", 1))


def test_cm_x_stays_a_tree():
    # each growth step grafts at every existing vertex, so the total mass
    # after k letters is (k-1)!
    x = cm_x(("a", "b", "a", "b"))
    assert sum(x.values()) == 6
    assert all(is_plain(t) and len(t) == 1 for t in x)


def test_cm_bullet_unit_counts_letters():
    for k in range(1, 5):
        x = cm_x(("d",) * k)
        assert x.map_linear(lambda t: hck_bullet(t, EMPTY)) == x.scale(k)


def test_cm_delta_closed_small():
    assert cm_delta_closed(("i", "j")) == LinComb([((("i",), ("j",)), 1)])
    assert cm_delta_closed(("d", "d", "d")) == LinComb([
        ((("d",), ("d", "d")), 1), ((("d", "d"), ("d",)), 3)])
    # positions not containing the first letter contribute nothing
    assert cm_delta_closed(("a", "b")) == LinComb([((("a",), ("b",)), 1)])


@pytest.mark.parametrize("word", [
    ("d", "d"), ("d", "d", "d"), ("d",) * 4,
    ("a", "b"), ("a", "b", "a"), ("b", "a", "a"),
])
def test_cm_delta_closed_matches_oracle(word):
    letters = tuple(sorted(set(word)))
    assert cm_delta_closed(word) == cm_delta_oracle(word, letters)


def test_cm_delta_duality_with_letter_insertion():
    # <delta X_w, X_u (x) X_v> = coefficient of w in the insertion product
    # u • v of the word algebra with f = identity
    fid = {"a": unit("a"), "b": unit("b")}
    for k in range(2, 5):
        for w in words_of_length(ABLAB, k):
            dl = cm_delta_closed(w)
            for lu in range(1, k):
                for u in words_of_length(ABLAB, lu):
                    for v in words_of_length(ABLAB, k - lu):
                        assert dl[(u, v)] == bullet_tvf(fid, u, v)[w]


def test_cm_growth_coproduct_recursion():
    # Delta(X_{w d}) = X' (x) X''•leaf + X'•leaf (x) X'' + X'•unit (x) X''·leaf
    for word in [("d", "d"), ("d", "d", "d"), ("a", "b", "a")]:
        w, d = word[:-1], word[-1]
        leaf = P("{[%s]}" % d)
        x = cm_x(w)
        lhs = cm_x(word).map_linear(coproduct_hck)
        dx = x.map_linear(coproduct_hck)
        rhs = tensor_apply2(dx, unit, lambda t: hck_bullet(t, leaf))
        rhs += tensor_apply2(dx, lambda t: hck_bullet(t, leaf), unit)
        rhs += tensor_apply2(dx, lambda t: hck_bullet(t, EMPTY),
                             lambda t: unit(mul_disjoint(t, leaf)))
        assert lhs == rhs, word


def test_cm_grow_is_a_derivation():
    # N_d(x·y) = N_d(x)·y + x·N_d(y)
    pool = HF3[:10]
    for a, b in itertools.product(pool, repeat=2):
        lhs = cm_grow(unit(mul_disjoint(a, b)), "d")
        rhs = bilinear_extend(mul_disjoint_lc, cm_grow(unit(a), "d"), unit(b)) \
            + bilinear_extend(mul_disjoint_lc, unit(a), cm_grow(unit(b), "d"))
        assert lhs == rhs
