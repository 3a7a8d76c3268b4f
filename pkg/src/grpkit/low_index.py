"""Low-index subgroup enumeration (one representative per conjugacy class).

Backtracking search over partial coset tables in the style of Sims: branch on
the first empty slot in row-major order, propagate forced entries by scanning
relator rotations, and prune branches whose table could only complete to a
lex-larger conjugate of a table found elsewhere in the tree ("first in
class").  Completed tables are point stabilizers: the subgroup of index n
fixing coset 0, one per conjugacy class.

Tables come out standardized by construction: new cosets are introduced only
at branch slots, which move strictly forward, so coset numbers agree with
first-appearance order.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field

from grpkit.coset_enum import UNDEF, CosetTable, col_of
from grpkit.errors import NodeBudgetError
from grpkit.presentations import Presentation, Word, cyclically_reduce

DEFAULT_NODE_BUDGET = 10**9
NODE_BUDGET_ENV = "GRPKIT_NODE_BUDGET"

# outcomes of the relabel-and-compare walk
_SMALLER, _EQUAL, _LARGER, _UNDECIDED = range(4)


@dataclass(frozen=True)
class SubgroupClassRecord:
    """One conjugacy class of finite-index subgroups.

    ``representative`` is the coset table of one member (the stabilizer of
    coset 0), ``class_size`` the number of conjugates (index of the
    normalizer), and ``generators_as_words`` nontrivial Schreier generators
    of the representative.
    """

    representative: CosetTable
    index: int
    class_size: int
    generators_as_words: tuple = field(compare=False)

    def sort_key(self):
        return (self.index, self.representative.flat())


def node_budget_default():
    value = os.environ.get(NODE_BUDGET_ENV)
    if value is None:
        return DEFAULT_NODE_BUDGET
    try:
        parsed = int(value)
        if parsed < 1:
            raise ValueError
    except ValueError:
        raise ValueError(f"{NODE_BUDGET_ENV} must be a positive integer") from None
    return parsed


def _rotations_by_column(relators, ncols):
    """Distinct cyclic rotations of each relator, keyed by first column.

    Each rotation is a pair (forward columns, backward columns) ready for
    two-pointer scanning.
    """
    by_col = [[] for _ in range(ncols)]
    seen = [set() for _ in range(ncols)]
    for relator in relators:
        cols = tuple(col_of(x) for x in relator)
        for s in range(len(cols)):
            rot = cols[s:] + cols[:s]
            first = rot[0]
            if rot not in seen[first]:
                seen[first].add(rot)
                by_col[first].append((rot, tuple(c ^ 1 for c in rot)))
    return by_col


def _relabel_walk(tab, n, ncols, beta, nu, order):
    """Compare the table BFS-relabeled from ``beta`` against itself.

    Walks positions row-major in the new numbering, comparing each relabeled
    entry with the original entry at the same position.  Returns _SMALLER /
    _EQUAL / _LARGER for the first difference, or _UNDECIDED if an empty slot
    was reached first (only possible on partial tables).
    """
    for i in range(n):
        nu[i] = -1
    nu[beta] = 0
    order[0] = beta
    count = 1
    for k in range(n):
        if k >= count:
            return _UNDECIDED
        row = order[k] * ncols
        orig_row = k * ncols
        for c in range(ncols):
            e = tab[row + c]
            if e == UNDEF:
                return _UNDECIDED
            o = tab[orig_row + c]
            if o == UNDEF:
                return _UNDECIDED
            v = nu[e]
            if v == -1:
                v = count
                nu[e] = v
                order[count] = e
                count += 1
            if v != o:
                return _SMALLER if v < o else _LARGER
    return _EQUAL


def _search(presentation, from_index, to_index, node_budget, on_complete):
    ngens = presentation.n_generators
    ncols = 2 * ngens
    relators = []
    for r in presentation.relators:
        reduced = cyclically_reduce(r.letters)
        if reduced:
            relators.append(reduced)
    rotations = _rotations_by_column(relators, ncols)

    tab = [UNDEF] * (to_index * ncols)
    trail = []
    nu = [-1] * to_index
    order = [0] * to_index
    nodes = 0

    n = 1  # number of cosets so far

    def scan(alpha, fwd, bwd, stack):
        """Scan one relator rotation at ``alpha``.

        Completes, deduces a single missing entry, or stops at a gap.
        Returns False exactly when a completed scan mismatches (dead branch).
        """
        f = alpha
        i = 0
        b = alpha
        j = len(fwd) - 1
        while True:
            while i <= j:
                t = tab[f * ncols + fwd[i]]
                if t == UNDEF:
                    break
                f = t
                i += 1
            if i > j:
                return f == b
            while j >= i:
                t = tab[b * ncols + bwd[j]]
                if t == UNDEF:
                    break
                b = t
                j -= 1
            if j < i:
                return f == b
            if j == i:
                c = fwd[i]
                p1 = f * ncols + c
                p2 = b * ncols + (c ^ 1)
                tab[p1] = b
                tab[p2] = f
                trail.append(p1)
                trail.append(p2)
                stack.append((f, c))
                return True
            return True  # gap of two or more: nothing to conclude yet

    def propagate(stack):
        while stack:
            gamma, c = stack.pop()
            delta = tab[gamma * ncols + c]
            for fwd, bwd in rotations[c]:
                if not scan(gamma, fwd, bwd, stack):
                    return False
            for fwd, bwd in rotations[c ^ 1]:
                if not scan(delta, fwd, bwd, stack):
                    return False
        return True

    def first_in_class_partial():
        for beta in range(1, n):
            if _relabel_walk(tab, n, ncols, beta, nu, order) == _SMALLER:
                return False
        return True

    def complete_table():
        if n < from_index:
            return
        fixed = 1
        for beta in range(1, n):
            outcome = _relabel_walk(tab, n, ncols, beta, nu, order)
            if outcome == _SMALLER:
                return
            if outcome == _EQUAL:
                fixed += 1
        on_complete([tab[r * ncols : (r + 1) * ncols] for r in range(n)], n, fixed)

    def dfs():
        nonlocal n, nodes
        # branch slot: first empty position
        pos = -1
        limit = n * ncols
        for p in range(limit):
            if tab[p] == UNDEF:
                pos = p
                break
        if pos == -1:
            complete_table()
            return
        alpha, c = divmod(pos, ncols)
        ic = c ^ 1
        candidates = [beta for beta in range(n) if tab[beta * ncols + ic] == UNDEF]
        if n < to_index:
            candidates.append(n)
        for beta in candidates:
            mark = len(trail)
            old_n = n
            if beta == n:
                # a definition step: the table grows by one coset
                nodes += 1
                if nodes > node_budget:
                    raise NodeBudgetError(
                        f"low-index search exceeded {node_budget} definitions"
                    )
                n += 1
            p2 = beta * ncols + ic
            tab[pos] = beta
            tab[p2] = alpha
            trail.append(pos)
            trail.append(p2)
            stack = [(alpha, c)]
            if propagate(stack) and first_in_class_partial():
                dfs()
            while len(trail) > mark:
                tab[trail.pop()] = UNDEF
            n = old_n

    dfs()


def _transversal_letters(rows, ncols):
    """Per coset, the first-appearance path from coset 0 as signed letters."""
    n = len(rows)
    words = [None] * n
    words[0] = ()
    for gamma in range(n):
        row = words[gamma]
        for c in range(ncols):
            target = rows[gamma][c]
            if words[target] is None:
                letter = c // 2 + 1 if c % 2 == 0 else -(c // 2 + 1)
                words[target] = row + (letter,)
    return words


def schreier_generator_words(rows, ncols):
    """Nontrivial Schreier generators read off a standardized table."""
    transversal = _transversal_letters(rows, ncols)
    out = []
    for gamma in range(len(rows)):
        for g in range(ncols // 2):
            target = rows[gamma][2 * g]
            letters = (
                transversal[gamma]
                + (g + 1,)
                + tuple(-x for x in reversed(transversal[target]))
            )
            word = Word(letters)
            if not word.is_identity():
                out.append(word)
    return out


def _build_record(presentation, rows, n, fixed, ncols):
    generators = tuple(schreier_generator_words(rows, ncols))
    table = CosetTable(presentation, rows, generators)
    return SubgroupClassRecord(
        representative=table,
        index=n,
        class_size=n // fixed,
        generators_as_words=generators,
    )


def normalizer_index(presentation, table):
    """Index of the normalizer of the coset-0 stabilizer (its class size).

    Counts the base points whose BFS relabeling reproduces the table: those
    are the cosets with the same stabilizer, so the subgroup has
    ``n // count`` distinct conjugates.
    """
    if not isinstance(table, CosetTable):
        raise TypeError("expected a CosetTable")
    table.verify()
    rows = table.rows
    n = len(rows)
    ncols = 2 * presentation.n_generators
    flat = [entry for row in rows for entry in row]
    nu = [-1] * n
    order = [0] * n
    fixed = 1
    for beta in range(1, n):
        if _relabel_walk(flat, n, ncols, beta, nu, order) == _EQUAL:
            fixed += 1
    return n // fixed


def core_table(presentation, table):
    """Image of the coset action; its kernel is the subgroup's normal core."""
    from grpkit.permgrp import Permutation, PermutationGroup

    if not isinstance(table, CosetTable):
        raise TypeError("expected a CosetTable")
    table.verify()
    gens = [Permutation(images) for images in table.generator_permutations()]
    return PermutationGroup(gens, degree=table.index)


# Completed searches are memoized per process: the search is a pure function
# of (presentation structure, index window, budget), and a manifest run asks
# for the same expensive windows many times.  Raw table rows are cached, never
# record objects, so each caller gets records bound to its own presentation.
_cache_guard = threading.Lock()
_result_cache = {}
_key_locks = {}
_CACHE_LIMIT = 256


def clear_search_cache():
    """Drop all memoized search results (mainly for tests)."""
    with _cache_guard:
        _result_cache.clear()
        _key_locks.clear()


def low_index_subgroups(
    presentation, from_index=1, to_index=None, node_budget=None, engine="auto"
):
    """All conjugacy classes of subgroups with index in [from_index, to_index].

    Returns :class:`SubgroupClassRecord` objects sorted by (index, table),
    which is a total order: equal tables mean equal subgroups.

    ``engine`` selects the search implementation: "python" is the reference,
    "numba" the compiled one, and "auto" (default) uses the compiled engine
    when available.  Both produce identical records.
    """
    if not isinstance(presentation, Presentation):
        raise TypeError("low_index_subgroups expects a Presentation")
    if to_index is None:
        to_index = from_index
    if from_index < 1 or to_index < from_index:
        raise ValueError("need 1 <= from_index <= to_index")
    if node_budget is None:
        node_budget = node_budget_default()
    ncols = 2 * presentation.n_generators

    kernel = None
    if engine == "auto":
        try:
            from grpkit import _low_index_kernel as kernel
        except ImportError:
            kernel = None
    elif engine == "numba":
        from grpkit import _low_index_kernel as kernel
    elif engine != "python":
        raise ValueError(f"unknown engine {engine!r}")

    key = (
        presentation.n_generators,
        tuple(r.letters for r in presentation.relators),
        from_index,
        to_index,
        node_budget,
        "python" if kernel is None else "numba",
    )
    with _cache_guard:
        key_lock = _key_locks.setdefault(key, threading.Lock())
    with key_lock:
        with _cache_guard:
            cached = _result_cache.get(key)
            if cached is not None:
                # least-recently-used: re-insert so long-lived expensive
                # entries outlast bursts of small searches
                _result_cache.pop(key)
                _result_cache[key] = cached
        if cached is None:
            cached = [
                (tuple(map(tuple, rows)), n, fixed)
                for rows, n, fixed in _run_search(
                    presentation, from_index, to_index, node_budget, kernel, ncols
                )
            ]
            with _cache_guard:
                if len(_result_cache) >= _CACHE_LIMIT:
                    _result_cache.pop(next(iter(_result_cache)))
                _result_cache[key] = cached

    records = [
        _build_record(presentation, [list(row) for row in rows], n, fixed, ncols)
        for rows, n, fixed in cached
    ]
    records.sort(key=SubgroupClassRecord.sort_key)
    return records


def _run_search(presentation, from_index, to_index, node_budget, kernel, ncols):
    results = []
    if kernel is not None:
        relators = []
        for r in presentation.relators:
            reduced = cyclically_reduce(r.letters)
            if reduced:
                relators.append(reduced)
        rotations = _rotations_by_column(relators, ncols)
        found, status, _nodes = kernel.run(
            ncols, from_index, to_index, node_budget, rotations
        )
        if status == kernel.STATUS_BUDGET:
            raise NodeBudgetError(
                f"low-index search exceeded {node_budget} definitions"
            )
        results.extend(found)
    else:
        def on_complete(rows, n, fixed):
            results.append((rows, n, fixed))

        _search(presentation, from_index, to_index, node_budget, on_complete)
    return results
