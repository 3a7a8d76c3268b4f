"""Todd-Coxeter coset enumeration (HLT strategy with lookahead).

A coset table for a subgroup H of the group G presented on g generators is a
list of rows, one per coset of H, each with 2g columns ordered

    gen 1, gen 1 inverse, gen 2, gen 2 inverse, ...

Row entries are coset numbers; coset 0 is H itself.  A finished table is

- complete: no empty slots,
- consistent: coset^x == target exactly when target^(x inverse) == coset,
- closed under the relators: every relator traces to the identity at every
  coset,
- closed under the subgroup generators: each traces from coset 0 back to 0,
- standardized: cosets are numbered in first-appearance order when rows are
  read top to bottom, left to right (so equal subgroups give equal tables).
"""

from __future__ import annotations

from collections import deque

from grpkit.errors import CosetLimitError
from grpkit.presentations import Presentation, Word, cyclically_reduce

DEFAULT_MAX_COSETS = 10**6

UNDEF = -1


def col_of(letter):
    """Column index of a signed generator letter."""
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


def inverse_column(col):
    return col ^ 1


def standardize_rows(rows):
    """Relabel cosets in first-appearance order (row-major, left to right).

    Returns ``(new_rows, relabel)`` where ``relabel[old] = new``.  Applying
    this to an already standardized table is the identity.  Coset 0 keeps its
    label.
    """
    n = len(rows)
    relabel = [UNDEF] * n
    relabel[0] = 0
    order = [0]
    for row_new in range(n):
        if row_new >= len(order):
            raise ValueError("coset table is not transitive")
        row = rows[order[row_new]]
        for target in row:
            if target != UNDEF and relabel[target] == UNDEF:
                relabel[target] = len(order)
                order.append(target)
    new_rows = [
        [UNDEF if x == UNDEF else relabel[x] for x in rows[old]] for old in order
    ]
    return new_rows, relabel


class CosetTable:
    """A finished coset table; see the module docstring for the invariants."""

    __slots__ = ("presentation", "rows", "subgroup_generators")

    def __init__(self, presentation, rows, subgroup_generators=()):
        self.presentation = presentation
        self.rows = [list(row) for row in rows]
        self.subgroup_generators = tuple(Word(w) for w in subgroup_generators)
        ncols = 2 * presentation.n_generators
        if any(len(row) != ncols for row in self.rows):
            raise ValueError("row width does not match the generator count")

    @property
    def index(self):
        return len(self.rows)

    @property
    def n_columns(self):
        return 2 * self.presentation.n_generators

    def apply(self, coset, letter):
        """Image of a coset under one signed generator letter."""
        return self.rows[coset][col_of(letter)]

    def trace(self, coset, word):
        for letter in Word(word):
            coset = self.rows[coset][col_of(letter)]
        return coset

    def generator_permutations(self):
        """The coset action: one permutation (as a list) per generator."""
        return [
            [row[2 * i] for row in self.rows]
            for i in range(self.presentation.n_generators)
        ]

    def flat(self):
        """The table as one flat tuple (the canonical comparison key)."""
        return tuple(x for row in self.rows for x in row)

    def is_standardized(self):
        _, relabel = standardize_rows(self.rows)
        return all(relabel[i] == i for i in range(len(self.rows)))

    def verify(self):
        """Check every invariant; raises ValueError naming the first failure."""
        n = len(self.rows)
        ncols = self.n_columns
        for c, row in enumerate(self.rows):
            for col, target in enumerate(row):
                if not (0 <= target < n):
                    raise ValueError(f"incomplete table: coset {c} column {col}")
                if self.rows[target][inverse_column(col)] != c:
                    raise ValueError(
                        f"inconsistent table: coset {c} column {col} -> {target}"
                    )
        for relator in self.presentation.relators:
            for c in range(n):
                if self.trace(c, relator) != c:
                    raise ValueError(f"relator {relator!r} does not fix coset {c}")
        for word in self.subgroup_generators:
            if self.trace(0, word) != 0:
                raise ValueError(f"subgroup generator {word!r} does not fix coset 0")
        if not self.is_standardized():
            raise ValueError("table is not standardized")
        return True

    def __eq__(self, other):
        return (
            isinstance(other, CosetTable)
            and self.presentation == other.presentation
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"<CosetTable: index {self.index} on {self.presentation.generators}>"


class _NeedLookahead(Exception):
    """Internal signal: the live-coset ceiling was hit mid-definition."""


def enumerate_cosets(presentation, subgroup_generators=(), max_cosets=DEFAULT_MAX_COSETS):
    """Enumerate the cosets of the subgroup generated by the given words.

    Returns a standardized :class:`CosetTable`.  Raises
    :class:`~grpkit.errors.CosetLimitError` if more than ``max_cosets`` live
    cosets are needed even after a lookahead pass reclaims dead ones (the
    subgroup may well have infinite index in that case).
    """
    if not isinstance(presentation, Presentation):
        raise TypeError("enumerate_cosets expects a Presentation")
    ngens = presentation.n_generators
    ncols = 2 * ngens
    relators = []
    for r in presentation.relators:
        reduced = cyclically_reduce(r.letters)
        if reduced:
            relators.append(reduced)
    subgroup_words = []
    for w in subgroup_generators:
        word = Word(w)
        if any(abs(x) > ngens for x in word):
            raise ValueError(f"subgroup generator {word!r} uses an undefined generator")
        if word.letters:
            subgroup_words.append(word.letters)
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")

    table = [[UNDEF] * ncols]
    parent = [0]
    dead = 0
    mutations = 0

    def rep(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def new_coset():
        nonlocal mutations
        if len(table) - dead >= max_cosets:
            raise _NeedLookahead
        table.append([UNDEF] * ncols)
        parent.append(len(parent))
        mutations += 1
        return len(table) - 1

    def merge(a, b, queue):
        nonlocal dead, mutations
        a, b = rep(a), rep(b)
        if a != b:
            if a > b:
                a, b = b, a
            parent[b] = a
            dead += 1
            mutations += 1
            queue.append(b)

    def coincidence(a, b):
        queue = deque()
        merge(a, b, queue)
        while queue:
            gamma = queue.popleft()
            row = table[gamma]
            for col in range(ncols):
                delta = row[col]
                if delta == UNDEF:
                    continue
                icol = inverse_column(col)
                if table[delta][icol] == gamma:
                    table[delta][icol] = UNDEF
                mu = rep(gamma)
                nu = rep(delta)
                existing = table[mu][col]
                if existing != UNDEF:
                    merge(nu, existing, queue)
                else:
                    back = table[nu][icol]
                    if back != UNDEF:
                        merge(mu, back, queue)
                    else:
                        table[mu][col] = nu
                        table[nu][icol] = mu

    def scan(alpha, word, fill):
        """Trace ``word`` at coset ``alpha`` both ways; deduce, merge, or

        (when ``fill``) define new cosets to finish the scan.
        Returns True if the scan completed.
        """
        f = alpha
        i = 0
        b = alpha
        j = len(word) - 1
        while True:
            while i <= j:
                target = table[f][col_of(word[i])]
                if target == UNDEF:
                    break
                f = target
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return True
            while j >= i:
                target = table[b][col_of(-word[j])]
                if target == UNDEF:
                    break
                b = target
                j -= 1
            if j < i:
                coincidence(f, b)
                return True
            if j == i:
                nonlocal mutations
                col = col_of(word[i])
                table[f][col] = b
                table[b][inverse_column(col)] = f
                mutations += 1
                return True
            if not fill:
                return False
            col = col_of(word[i])
            fresh = new_coset()
            table[f][col] = fresh
            table[fresh][inverse_column(col)] = f

    def lookahead():
        """Scan everything without defining, hoping coincidences free rows."""
        for c in range(len(table)):
            if rep(c) != c:
                continue
            for relator in relators:
                scan(c, relator, fill=False)
                if rep(c) != c:
                    break
        for word in subgroup_words:
            scan(rep(0), word, fill=False)

    def compact():
        """Drop dead rows, renumber, reset the union-find."""
        nonlocal table, parent, dead
        live = [c for c in range(len(table)) if rep(c) == c]
        remap = [UNDEF] * len(table)
        for new, old in enumerate(live):
            remap[old] = new
        new_table = []
        for old in live:
            new_table.append(
                [UNDEF if x == UNDEF else remap[rep(x)] for x in table[old]]
            )
        table = new_table
        parent = list(range(len(table)))
        dead = 0
        return remap

    def process_row(alpha):
        """Scan every relator at alpha, then define cosets for its holes."""
        for relator in relators:
            scan(alpha, relator, fill=True)
            if rep(alpha) != alpha:
                return
        row = table[alpha]
        for col in range(ncols):
            if row[col] == UNDEF:
                fresh = new_coset()
                row[col] = fresh
                table[fresh][inverse_column(col)] = alpha
                if rep(alpha) != alpha:
                    return

    # Repeat full passes until one changes nothing.  A pass scans the
    # subgroup generators at coset 0, then every relator at every live coset,
    # filling holes as it goes.  Coincidence processing can poke holes in
    # rows already visited, which the next pass repairs; a pass with no
    # mutations certifies the table complete and closed.
    while True:
        try:
            before = mutations
            for word in subgroup_words:
                scan(rep(0), word, fill=True)
            alpha = 0
            while alpha < len(table):
                if rep(alpha) == alpha:
                    process_row(alpha)
                alpha += 1
            if mutations == before:
                break
        except _NeedLookahead:
            lookahead()
            if dead == 0:
                raise CosetLimitError(
                    f"needed more than {max_cosets} live cosets"
                ) from None
            compact()

    if dead:
        compact()
    rows, _ = standardize_rows(table)
    result = CosetTable(presentation, rows, subgroup_words)
    result.verify()
    return result
