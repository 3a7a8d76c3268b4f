"""Presentations of finite-index subgroups by Reidemeister-Schreier rewriting.

Given a complete standardized coset table for a subgroup H of the group
presented by ``p``, the Schreier transversal is read off the table's
first-appearance paths, the nontrivial Schreier generators become the
generators of H, and each relator of ``p`` conjugated by each transversal
representative is rewritten as a word in those generators.  The result is a
presentation of H itself.

Simplification (:func:`tietze_simplify`) applies only conservative Tietze
moves, so the group -- and in particular its abelianization -- is untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

from grpkit.coset_enum import CosetTable, col_of
from grpkit.presentations import Presentation, Word, cyclically_reduce, free_reduce


@dataclass(frozen=True)
class SchreierData:
    """Transversal and Schreier generators read off a coset table.

    ``transversal[i]`` is the first-appearance word carrying coset 0 to coset
    ``i`` (coset 0 gets the empty word); ``subgroup_generators`` are the
    freely nontrivial Schreier generators, in table scan order, as words in
    the ambient group's generators.
    """

    transversal: tuple
    subgroup_generators: tuple


def _check_table(table):
    if not isinstance(table, CosetTable):
        raise TypeError("expected a CosetTable")
    table.verify()


def _transversal_words(rows, ncols):
    n = len(rows)
    words = [None] * n
    words[0] = ()
    for gamma in range(n):
        path = words[gamma]
        for c in range(ncols):
            target = rows[gamma][c]
            if words[target] is None:
                letter = c // 2 + 1 if c % 2 == 0 else -(c // 2 + 1)
                words[target] = path + (letter,)
    return [Word(letters) for letters in words]


def _slot_map(rows, ngens, transversal):
    """Number the nontrivial Schreier generators.

    Returns ``(slots, generators)`` where ``slots[coset][gen-1]`` is the
    1-based subgroup generator at table slot (coset, gen), or 0 when the slot
    lies on the spanning tree (its Schreier generator reduces to nothing),
    and ``generators[k-1]`` is subgroup generator k as an ambient word.
    """
    slots = [[0] * ngens for _ in rows]
    generators = []
    for gamma in range(len(rows)):
        for g in range(1, ngens + 1):
            target = rows[gamma][col_of(g)]
            sigma = free_reduce(
                transversal[gamma].letters
                + (g,)
                + tuple(-x for x in reversed(transversal[target].letters))
            )
            if sigma:
                generators.append(Word(sigma))
                slots[gamma][g - 1] = len(generators)
    return slots, generators


def schreier_data(presentation, table):
    """Schreier transversal and generators for the coset-0 stabilizer."""
    _check_table(table)
    rows = table.rows
    transversal = _transversal_words(rows, 2 * presentation.n_generators)
    _, generators = _slot_map(rows, presentation.n_generators, transversal)
    return SchreierData(
        transversal=tuple(transversal), subgroup_generators=tuple(generators)
    )


def rewritten_relator_words(presentation, table):
    """Every relator conjugate rewritten in the Schreier generators.

    Yields one word per (coset, relator) pair -- index times the number of
    relators in all -- cyclically reduced, possibly empty.  Together with the
    nontrivial Schreier generators these words present the stabilizer.
    """
    _check_table(table)
    rows = table.rows
    ngens = presentation.n_generators
    transversal = _transversal_words(rows, 2 * ngens)
    slots, _ = _slot_map(rows, ngens, transversal)
    out = []
    for gamma in range(len(rows)):
        for relator in presentation.relators:
            cur = gamma
            letters = []
            for letter in relator.letters:
                if letter > 0:
                    slot = slots[cur][letter - 1]
                    if slot:
                        letters.append(slot)
                    cur = rows[cur][col_of(letter)]
                else:
                    nxt = rows[cur][col_of(letter)]
                    slot = slots[nxt][-letter - 1]
                    if slot:
                        letters.append(-slot)
                    cur = nxt
            if cur != gamma:
                raise AssertionError("table does not satisfy a relator")
            out.append(Word(cyclically_reduce(tuple(letters))))
    return out


def reidemeister_schreier(presentation, table):
    """A presentation of the subgroup whose coset table is ``table``.

    The generators are the nontrivial Schreier generators (named x1, x2,
    ...); the relators are the rewritten relator conjugates with trivial
    ones dropped.  No simplification beyond free and cyclic reduction is
    applied; see :func:`tietze_simplify` for that.
    """
    _check_table(table)
    rows = table.rows
    ngens = presentation.n_generators
    transversal = _transversal_words(rows, 2 * ngens)
    _, generators = _slot_map(rows, ngens, transversal)
    relators = rewritten_relator_words(presentation, table)
    names = [f"x{i}" for i in range(1, len(generators) + 1)]
    return Presentation(names, relators)


def _substitute(letters, target, replacement):
    """Replace generator ``target`` by the word ``replacement`` in letters."""
    out = []
    for letter in letters:
        if letter == target:
            out.extend(replacement)
        elif letter == -target:
            out.extend(-x for x in reversed(replacement))
        else:
            out.append(letter)
    return free_reduce(tuple(out))


def _drop_generator(letters, target):
    """Renumber letters after deleting generator ``target``."""
    out = []
    for letter in letters:
        mag = abs(letter)
        if mag > target:
            mag -= 1
        out.append(mag if letter > 0 else -mag)
    return tuple(out)


def _canonical_relator(letters):
    """Least cyclic rotation of a relator or its inverse, for deduplication."""
    best = None
    for word in (letters, tuple(-x for x in reversed(letters))):
        for i in range(len(word)):
            rot = word[i:] + word[:i]
            if best is None or rot < best:
                best = rot
    return best


def tietze_simplify(presentation, effort=3):
    """Shrink a presentation by conservative Tietze moves.

    Repeatedly: cyclically reduce relators, drop trivial and duplicate ones,
    and eliminate any generator that occurs exactly once in some relator by
    solving that relator for it.  Presents the same group, never increases
    the generator count, and leaves the abelianization unchanged.  ``effort``
    bounds both the number of passes and the tolerated intermediate growth
    in total relator length.
    """
    if effort < 1:
        raise ValueError("effort must be a positive integer")
    names = list(presentation.generators)
    relators = [cyclically_reduce(r.letters) for r in presentation.relators]
    budget = effort * (sum(len(r) for r in relators) + 100)

    for _ in range(effort * max(len(names), 1)):
        # drop trivial relators and duplicates (up to rotation and inversion)
        seen = set()
        kept = []
        for r in relators:
            if not r:
                continue
            key = _canonical_relator(r)
            if key in seen:
                continue
            seen.add(key)
            kept.append(r)
        relators = kept

        # find a generator occurring exactly once in some relator
        move = None
        for ridx in sorted(range(len(relators)), key=lambda i: len(relators[i])):
            r = relators[ridx]
            counts = {}
            for letter in r:
                counts[abs(letter)] = counts.get(abs(letter), 0) + 1
            for pos, letter in enumerate(r):
                if counts[abs(letter)] != 1:
                    continue
                # rotate so the single occurrence leads: x^e w = 1
                rest = r[pos + 1 :] + r[:pos]
                if letter > 0:
                    replacement = tuple(-x for x in reversed(rest))
                else:
                    replacement = rest
                grown = sum(
                    len(other) + (len(replacement) - 1) * sum(
                        1 for x in other if abs(x) == abs(letter)
                    )
                    for other in relators
                )
                if grown > budget:
                    continue
                move = (abs(letter), replacement, ridx)
                break
            if move:
                break
        if move is None:
            break

        target, replacement, source_idx = move
        new_relators = []
        for i, other in enumerate(relators):
            if i == source_idx:
                continue
            substituted = _substitute(other, target, replacement)
            new_relators.append(
                cyclically_reduce(_drop_generator(substituted, target))
            )
        relators = new_relators
        del names[target - 1]
        if not names:
            # everything collapsed: keep one generator with a trivial relator
            return Presentation(
                presentation.generators[:1], [Word((1,))]
            )

    return Presentation(names, [Word(r) for r in relators if r])
