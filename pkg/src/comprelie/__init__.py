"""Exact-arithmetic computer algebra for Com-PreLie algebras and bialgebras.

Subpackages cover: sparse rational linear combinations (`lincomb`), exact
linear algebra (`linalg`), decorated partitioned rooted trees (`ptree`) and
the free Com-PreLie structures built on them (`ucp`), shuffle-algebra
constructions (`shuffle`), the symmetric-tensor extension of a preLie
product (`oudom`), graded duals and tree combinatorics on them (`dual`),
rigidity isomorphisms onto shuffle algebras (`rigidity`), a generic
axiom-checking harness (`axioms`, `handles`), and a command line (`cli`).

All scalar arithmetic is exact (`fractions.Fraction`); there are no
tolerances anywhere.
"""

__version__ = "0.1.0"
