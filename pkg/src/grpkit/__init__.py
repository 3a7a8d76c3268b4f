"""grpkit: computational tools for finitely presented groups.

Core pieces:

- :mod:`grpkit.presentations` — words, presentations, input language, catalog
- :mod:`grpkit.coset_enum`    — Todd-Coxeter coset enumeration
- :mod:`grpkit.low_index`     — low-index subgroup enumeration (one per
  conjugacy class, canonical order)
- :mod:`grpkit.rewrite`       — Reidemeister-Schreier subgroup presentations
- :mod:`grpkit.intlinalg`     — exact integer linear algebra (Smith form,
  abelian invariants, mapping-torus homology)
- :mod:`grpkit.permgrp`       — permutation groups (order, membership,
  normal closure, simplicity)
- :mod:`grpkit.arith`         — prime splitting in small number fields
- :mod:`grpkit.quotients`     — counting homomorphisms/epimorphisms onto
  finite permutation groups
- :mod:`grpkit.scenarios`     — end-to-end computations that tie the pieces
  together
- :mod:`grpkit.cli`           — the ``grpkit`` command line tool
"""

from grpkit.presentations import (
    ParseError,
    Presentation,
    Word,
    catalog,
    catalog_keys,
    parse_presentation,
    parse_word,
)

__version__ = "0.1.0"

__all__ = [
    "ParseError",
    "Presentation",
    "Word",
    "catalog",
    "catalog_keys",
    "parse_presentation",
    "parse_word",
    "__version__",
]
