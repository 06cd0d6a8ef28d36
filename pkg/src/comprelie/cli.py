"""Command-line front end.

Verbs:
  enum       list canonical basis elements of a given size
  eval       apply `prelie` or `mul` of an algebra to two linear combinations
  coprod     apply an algebra's coproduct
  delta      block-pruning coproduct of a partitioned tree
  kerdelta   kernel dimension of the block-pruning coproduct per degree
  cm         Connes-Moscovici elements and their index-word coproduct
  diamond    grafting products dual to the cutting coproducts
  theta      contraction morphism onto trees over the generator alphabet
  psi        block-coarsening morphism (or its inverse)
  rigidity   cofreeness isomorphisms (iso) and the counterexample (obstruction)
  check      run the axiom sweeps, optionally the harness self-test

Linear combinations on the command line look like the output format:
terms `coeff*KEY` or bare `KEY`, joined by ` + ` or ` - ` (spaces required
around the sign).  Tree keys use the `{[d:k([e],[f])]}` grammar, word keys
are dot-separated letters with `eps` for the empty word.

Exit codes: 0 ok, 1 a requested check failed, 2 bad arguments or
unparseable input, 3 resource bound exceeded.  Degree-like flags above 5
need --force; the COMPRELIE_MAXDEG environment variable (default 7) is a
hard ceiling.  Identical invocations produce byte-identical output.
"""

import argparse
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Optional

from .axioms import run_all, selftest_gaps
from .dual import diamond_cp, diamond_ext, diamond_ucp, psi_inverse, psi_map, theta
from .handles import HANDLE_NAMES, get_handle
from .lincomb import (LinComb, fmt_lincomb, fmt_scalar, fmt_tensor2,
                      parse_scalar, unit)
from .ptree import (EMPTY, ParseError, enum_one_rooted, enum_partitioned,
                    enum_plain_forests, enum_plain_trees, is_partitioned_tree,
                    parse, serialize)
from .rigidity import TruncatedBialgebra, build_hopf_iso, build_omega, cofree_obstruction
from .shuffle import fmt_word, parse_word
from .ucp import cm_delta_closed, cm_x, delta_perm, kernel_delta_dim

SOFT_BOUND = 5
WORD_ALGEBRAS = ("tvf", "degneg1")


class CliError(Exception):
    """Bad input on the command line (exit 2)."""


class ResourceBound(Exception):
    """A degree flag exceeds its bound (exit 3)."""


def guard(value: int, force: bool, what: str = "degree") -> None:
    """Refuse degree-like values beyond the soft bound (without --force)
    or beyond the COMPRELIE_MAXDEG hard ceiling (always)."""
    cap = int(os.environ.get("COMPRELIE_MAXDEG", "7"))
    if value > cap:
        raise ResourceBound(
            f"{what} {value} exceeds COMPRELIE_MAXDEG={cap}")
    if value > SOFT_BOUND and not force:
        raise ResourceBound(
            f"{what} {value} exceeds the default bound {SOFT_BOUND}; "
            "pass --force to proceed")


def labels_from(args) -> tuple:
    """--alphabet a,b,c wins; else --labels k means d1..dk."""
    if getattr(args, "alphabet", None):
        return tuple(p.strip() for p in args.alphabet.split(",") if p.strip())
    return tuple(f"d{i}" for i in range(1, args.labels + 1))


def parse_lincomb(text: str, parse_key: Callable) -> LinComb:
    """Parse the output format back into a LinComb (`0` is the zero)."""
    s = text.strip()
    if s in ("", "0"):
        return LinComb()
    out = LinComb()
    sign = Fraction(1)
    for i, tok in enumerate(re.split(r" ([+-]) ", s)):
        if i % 2:
            sign = Fraction(1 if tok == "+" else -1)
            continue
        term = tok.strip()
        if not term:
            raise CliError(f"empty term in {text!r}")
        coeff = sign
        if "*" in term:
            cs, term = term.split("*", 1)
            coeff *= parse_scalar(cs)
        elif term.startswith("-"):
            coeff, term = -coeff, term[1:].strip()
        out.iadd_scaled(coeff, unit(parse_key(term)))
    return out


def key_io(algebra: str) -> tuple:
    """(parse, format) for the algebra's basis keys."""
    if algebra in WORD_ALGEBRAS:
        return parse_word, fmt_word
    return parse, serialize


def handle_for(name: str, labels: tuple, alphabet: Optional[tuple],
               abc: Optional[tuple] = None):
    if name in WORD_ALGEBRAS:
        kw = {"alphabet": alphabet} if alphabet else {}
        if name == "degneg1" and abc:
            kw.update(zip("abc", abc))
        return get_handle(name, **kw)
    return get_handle(name, labels=labels)


def parse_tree(text: str):
    try:
        return parse(text)
    except ParseError as e:
        raise CliError(str(e))


# ---------------------------------------------------------------------------
# Verbs.
# ---------------------------------------------------------------------------

_ENUMERATORS = {
    "partitioned": enum_partitioned,
    "one-rooted": enum_one_rooted,
    "plain-trees": enum_plain_trees,
    "plain-forests": enum_plain_forests,
}


def cmd_enum(args) -> int:
    guard(args.n, args.force, "--n")
    items = _ENUMERATORS[args.mode](args.n, labels_from(args))
    for line in sorted(serialize(t) for t in items):
        print(line)
    return 0


def cmd_eval(args) -> int:
    alg = handle_for(args.algebra, ("d",), None)
    parse_key, key_str = key_io(args.algebra)
    op = alg.prelie if args.op == "prelie" else alg.mul
    if op is None:
        raise CliError(f"{args.algebra} has no commutative product")
    x = parse_lincomb(args.x, parse_key)
    y = parse_lincomb(args.y, parse_key)
    out = LinComb()
    for kx, cx in x.items():
        for ky, cy in y.items():
            out.iadd_scaled(cx * cy, op(kx, ky))
    print(fmt_lincomb(out, key_str))
    return 0


def cmd_coprod(args) -> int:
    alg = handle_for(args.algebra, ("d",), None)
    if alg.coproduct is None:
        raise CliError(f"{args.algebra} has no coproduct")
    parse_key, key_str = key_io(args.algebra)
    x = parse_lincomb(args.x, parse_key)
    print(fmt_tensor2(x.map_linear(alg.coproduct), key_str))
    return 0


def cmd_delta(args) -> int:
    t = parse_tree(args.tree)
    if not is_partitioned_tree(t):
        raise CliError(f"{serialize(t)} is not a partitioned tree")
    print(fmt_tensor2(delta_perm(t), serialize))
    return 0


def cmd_kerdelta(args) -> int:
    guard(args.degree, args.force, "--degree")
    print(kernel_delta_dim(args.degree, labels_from(args)))
    return 0


def cmd_cm(args) -> int:
    word = parse_word(args.word)
    if not word:
        raise CliError("the index word must be nonempty")
    guard(len(word), args.force, "word length")
    if args.show == "x":
        print(fmt_lincomb(cm_x(word), serialize))
    else:
        print(fmt_tensor2(cm_delta_closed(word), fmt_word))
    return 0


_DIAMONDS = {"ucp": diamond_ucp, "cp": diamond_cp, "ext": diamond_ext}


def cmd_diamond(args) -> int:
    x = parse_lincomb(args.x, parse)
    y = parse_lincomb(args.y, parse)
    op = _DIAMONDS[args.variant]
    out = LinComb()
    for kx, cx in x.items():
        for ky, cy in y.items():
            out.iadd_scaled(cx * cy, op(kx, ky))
    print(fmt_lincomb(out, serialize))
    return 0


def cmd_theta(args) -> int:
    x = parse_lincomb(args.tree, parse)
    print(fmt_lincomb(x.map_linear(theta), serialize))
    return 0


def cmd_psi(args) -> int:
    x = parse_lincomb(args.tree, parse)
    fn = psi_inverse if args.inverse else psi_map
    print(fmt_lincomb(x.map_linear(fn), serialize))
    return 0


def cmd_rigidity_iso(args) -> int:
    guard(args.maxdeg, args.force, "--maxdeg")
    alg = get_handle(args.algebra, labels=labels_from(args))
    tb = TruncatedBialgebra(alg, args.maxdeg)
    om = build_omega(tb)
    iso = build_hopf_iso(tb, om)
    for n in range(1, args.maxdeg + 1):
        print(f"degree {n}")
        print("words: " + " ".join(fmt_word(w) for w in om.words(n)))
        print("basis: " + " ".join(alg.key_str(k) for k in tb.slices[n]))
        print("omega:")
        for row in om.matrix(n):
            print(_fmt_row(row))
        print("F:")
        for row in iso.matrix(n):
            print(_fmt_row(row))
    reports = iso.run_checks()
    print("checks:")
    for r in reports:
        print(r.line())
    return 0 if all(r.ok for r in reports) else 1


def _fmt_row(row) -> str:
    return " ".join(fmt_scalar(c) for c in row)


def cmd_rigidity_obstruction(args) -> int:
    labels = labels_from(args)
    sol = cofree_obstruction(labels, counter_cap=args.cap)
    if sol is None:
        print("infeasible")
    else:
        print("solution: " + fmt_lincomb(sol, serialize))
    return 0


_CHECK_ORDER = ("ucp", "cp", "hck", "tvf", "degneg1", "dual-cp", "dual-ucp")


def _check_job(spec) -> list:
    name, labels, alphabet, abc, maxdeg, mode, seed, samples = spec
    alg = handle_for(name, labels, alphabet, abc)
    return [r.line() for r in
            run_all(alg, maxdeg, mode=mode, seed=seed, samples=samples)]


def cmd_check(args) -> int:
    guard(args.maxdeg, args.force, "--maxdeg")
    names = list(_CHECK_ORDER) if args.algebra == "all" else [args.algebra]
    labels = labels_from(args)
    alphabet = tuple(args.alphabet.split(",")) if args.alphabet else None
    abc = (tuple(parse_scalar(p) for p in args.abc.split(","))
           if args.abc else None)
    if abc is not None and len(abc) != 3:
        raise CliError("--abc needs exactly three rationals")
    specs = [(n, labels, alphabet, abc, args.maxdeg, args.mode, args.seed,
              args.samples) for n in names]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            blocks = list(pool.map(_check_job, specs))
    else:
        blocks = [_check_job(s) for s in specs]
    failed = False
    for block in blocks:
        for line in block:
            print(line)
            failed = failed or " FAIL" in line
    if args.selftest:
        for name in names:
            alg = handle_for(name, labels, alphabet, abc)
            gaps = selftest_gaps(alg, min(args.maxdeg, 3))
            if gaps:
                print(f"selftest {name} FAIL gaps={','.join(gaps)}")
                failed = True
            else:
                print(f"selftest {name} PASS")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------

def _add_alphabet_flags(p, default_labels: int = 1) -> None:
    p.add_argument("--labels", type=int, default=default_labels,
                   metavar="K", help="use the alphabet d1..dK (default %(default)s)")
    p.add_argument("--alphabet", metavar="A,B,C",
                   help="explicit comma-separated alphabet (overrides --labels)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="comprelie",
        description="Exact computer algebra for Com-PreLie (bi)algebras "
                    "on partitioned rooted trees and shuffle algebras.")
    sub = top.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("enum", help="list basis elements of size n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=sorted(_ENUMERATORS), default="partitioned")
    _add_alphabet_flags(p)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("eval", help="apply prelie or mul to two elements")
    p.add_argument("--algebra", choices=HANDLE_NAMES, required=True)
    p.add_argument("--op", choices=("prelie", "mul"), default="prelie")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("coprod", help="apply an algebra's coproduct")
    p.add_argument("--algebra", choices=HANDLE_NAMES, required=True)
    p.add_argument("x")
    p.set_defaults(func=cmd_coprod)

    p = sub.add_parser("delta", help="block-pruning coproduct of a partitioned tree")
    p.add_argument("tree")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("kerdelta", help="kernel dimension of the block-pruning coproduct")
    p.add_argument("--degree", type=int, required=True)
    _add_alphabet_flags(p)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_kerdelta)

    p = sub.add_parser("cm", help="Connes-Moscovici element of an index word")
    p.add_argument("word", help="dot-separated letters, e.g. d.e.f")
    p.add_argument("--show", choices=("x", "delta"), default="x",
                   help="the element itself or its index-word coproduct")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_cm)

    p = sub.add_parser("diamond", help="grafting products dual to the cutting coproducts")
    p.add_argument("--variant", choices=sorted(_DIAMONDS), default="cp")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_diamond)

    p = sub.add_parser("theta", help="contraction onto trees over the generator alphabet")
    p.add_argument("tree")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("psi", help="block-coarsening morphism")
    p.add_argument("tree")
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("rigidity", help="cofreeness isomorphisms and the obstruction")
    rsub = p.add_subparsers(dest="subverb", required=True)
    q = rsub.add_parser("iso", help="matrices of omega and F per degree, plus checks")
    q.add_argument("--algebra", choices=("cp", "hck"), required=True)
    q.add_argument("--maxdeg", type=int, default=4)
    _add_alphabet_flags(q)
    q.add_argument("--force", action="store_true")
    q.set_defaults(func=cmd_rigidity_iso)
    q = rsub.add_parser("obstruction",
                        help="solvability of the degree-2 primitive-pair equation")
    _add_alphabet_flags(q, default_labels=2)
    q.add_argument("--cap", type=int, default=2, help="counter cap")
    q.set_defaults(func=cmd_rigidity_obstruction)

    p = sub.add_parser("check", help="axiom sweeps over basis tuples")
    p.add_argument("--algebra", choices=HANDLE_NAMES + ("all",), required=True)
    p.add_argument("--maxdeg", type=int, default=3)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--selftest", action="store_true",
                   help="also verify the sweeps catch seeded corruptions")
    p.add_argument("--abc", metavar="A,B,C",
                   help="parameters of the degree -1 family "
                        "(preLie iff a*a - a + b*c = 0)")
    p.add_argument("--jobs", type=int, default=1)
    _add_alphabet_flags(p)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_check)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceBound as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (CliError, ParseError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
