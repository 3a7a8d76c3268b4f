"""Counting homomorphisms and epimorphisms onto finite permutation groups.

The counts are over tuples of generator images: a homomorphism from a
finitely presented group is exactly a tuple (one target element per
generator) under which every relator evaluates to the identity, and it is an
epimorphism when the images generate the whole target.  Aut(target) acts
freely on epimorphism tuples, so the number of epimorphisms up to
automorphism is total / |Aut|, and non-divisibility can only mean a bug.

The search prunes by element order (a relator x^k forces the image of x to
have order dividing k) and by evaluating each relator as soon as the last
generator it mentions has been assigned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from grpkit.errors import OrderBudgetError
from grpkit.permgrp import Permutation, PermutationGroup
from grpkit.presentations import Presentation, Word

DEFAULT_TARGET_ORDER_BUDGET = 10**4
AUT_ENUMERATION_LIMIT = 200


class NonDivisibleError(RuntimeError):
    """|Aut(target)| failed to divide the epimorphism total.

    The automorphism group acts freely on epimorphism tuples, so this
    signals an implementation bug (or a wrong supplied aut_order), never a
    legitimate answer."""


@dataclass(frozen=True)
class EpiCount:
    """Epimorphism census onto one finite target."""

    total: int
    aut_order: int

    @property
    def classes(self):
        return self.total // self.aut_order


def element_order(perm):
    """Multiplicative order of a permutation (lcm of its cycle lengths)."""
    order = 1
    for cycle in perm.cycles():
        order = math.lcm(order, len(cycle))
    return order


def _check_target(target):
    if not isinstance(target, PermutationGroup):
        raise TypeError("target must be a PermutationGroup")
    order = target.order()
    if order > DEFAULT_TARGET_ORDER_BUDGET:
        raise OrderBudgetError(
            f"target order {order} exceeds the counting budget "
            f"{DEFAULT_TARGET_ORDER_BUDGET}"
        )
    return order


def _pure_power_exponents(presentation):
    """For each generator, the gcd of the exponents k over relators that are
    a power of that single generator; 0 means unconstrained."""
    constraints = [0] * presentation.n_generators
    for relator in presentation.relators:
        letters = relator.letters
        if not letters:
            continue
        gen = abs(letters[0])
        if all(abs(letter) == gen for letter in letters):
            exponent = abs(sum(1 if letter > 0 else -1 for letter in letters))
            if exponent == 0:
                # e.g. x * x^-1 trimmed elsewhere; no constraint
                continue
            constraints[gen - 1] = math.gcd(constraints[gen - 1], exponent)
    return constraints


def _relators_by_last_generator(presentation):
    """Relator letter tuples grouped by the largest generator they mention,
    so each group can be checked as soon as that generator is assigned."""
    grouped = [[] for _ in range(presentation.n_generators)]
    for relator in presentation.relators:
        if relator.letters:
            last = max(abs(letter) for letter in relator.letters) - 1
            grouped[last].append(relator.letters)
    return grouped


def _evaluates_to_identity(letters, images, inverses, identity):
    acc = identity
    for letter in letters:
        step = images[letter - 1] if letter > 0 else inverses[-letter - 1]
        acc = acc * step
    return acc.is_identity()


def _satisfying_tuples(presentation, target, prune_orders=True):
    """Yield every generator-image tuple under which all relators die."""
    degree = target.degree
    identity = Permutation.identity(degree)
    elements = list(target.elements())
    if prune_orders:
        constraints = _pure_power_exponents(presentation)
    else:
        constraints = [0] * presentation.n_generators
    candidates = []
    for gen_constraint in constraints:
        if gen_constraint == 0:
            candidates.append(elements)
        else:
            candidates.append(
                [e for e in elements if gen_constraint % element_order(e) == 0]
            )
    grouped = _relators_by_last_generator(presentation)
    k = presentation.n_generators
    images = [identity] * k
    inverses = [identity] * k

    def assign(position):
        if position == k:
            yield tuple(images)
            return
        for choice in candidates[position]:
            images[position] = choice
            inverses[position] = ~choice
            if all(
                _evaluates_to_identity(letters, images, inverses, identity)
                for letters in grouped[position]
            ):
                yield from assign(position + 1)

    yield from assign(0)


def count_homomorphisms(presentation, target):
    """Number of homomorphisms into the target (surjective or not)."""
    if not isinstance(presentation, Presentation):
        raise TypeError("expected a Presentation")
    _check_target(target)
    return sum(1 for _ in _satisfying_tuples(presentation, target))


def _count_surjections(presentation, target, prune_orders=True):
    target_order = target.order()
    degree = target.degree
    transitive = target.is_transitive()
    order_memo = {}
    total = 0
    for images in _satisfying_tuples(presentation, target, prune_orders):
        moving = frozenset(p.images for p in images if not p.is_identity())
        cached = order_memo.get(moving)
        if cached is None:
            if transitive and not _transitive_on_points(images, degree):
                cached = 0  # proper subgroup: not even transitive
            else:
                cached = PermutationGroup(list(images), degree=degree).order()
            order_memo[moving] = cached
        if cached == target_order:
            total += 1
    return total


def _transitive_on_points(perms, degree):
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for p in perms:
            y = p(x)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen) == degree


def count_epimorphisms(presentation, target, aut_order=None, prune_orders=True):
    """Epimorphism census from a presentation onto a permutation group.

    ``aut_order`` may be supplied (it is then verified to divide the total)
    or omitted, in which case |Aut(target)| is enumerated from scratch;
    enumeration is gated to targets of order at most 200.
    """
    if not isinstance(presentation, Presentation):
        raise TypeError("expected a Presentation")
    order = _check_target(target)
    if aut_order is None:
        aut_order = automorphism_group_order(target)
    elif not isinstance(aut_order, int) or aut_order < 1:
        raise ValueError("aut_order must be a positive integer")
    total = _count_surjections(presentation, target, prune_orders)
    if total % aut_order:
        raise NonDivisibleError(
            f"aut order {aut_order} does not divide the epimorphism total "
            f"{total}; Aut acts freely, so one of the two is wrong"
        )
    return EpiCount(total=total, aut_order=aut_order)


def regular_presentation(group):
    """A presentation of a finite permutation group on its own generators.

    Breadth-first search of the Cayley graph (the regular representation)
    yields a spanning tree; every non-tree edge x --g--> y contributes the
    relator w_x g w_y^-1, where w_x is the tree word reaching x.  Those
    relators present the group.
    """
    gens = group.generators
    if not gens:
        return Presentation(("x1",), (Word((1, 1)), Word((1, 1, 1))))
    identity = Permutation.identity(group.degree)
    words = {identity: ()}
    ordering = [identity]
    frontier = [identity]
    while frontier:
        x = frontier.pop(0)
        for j, g in enumerate(gens, start=1):
            y = x * g
            if y not in words:
                words[y] = words[x] + (j,)
                ordering.append(y)
                frontier.append(y)
    relators = []
    for x in ordering:
        for j, g in enumerate(gens, start=1):
            y = x * g
            if words[y] != words[x] + (j,):
                inverse = tuple(-letter for letter in reversed(words[y]))
                relators.append(Word(words[x] + (j,) + inverse))
    names = tuple(f"x{i}" for i in range(1, len(gens) + 1))
    return Presentation(names, tuple(r for r in relators if r.letters))


def automorphism_group_order(group):
    """|Aut(G)| by counting epimorphisms from G's own presentation onto G.

    Every surjective endomorphism of a finite group is an automorphism, so
    the census of relator-satisfying generating tuples is exactly Aut(G).
    Gated to small groups: the regular representation has |G| elements.
    """
    order = group.order()
    if order > AUT_ENUMERATION_LIMIT:
        raise OrderBudgetError(
            f"automorphism enumeration is limited to groups of order "
            f"{AUT_ENUMERATION_LIMIT}; got {order}"
        )
    if order == 1:
        return 1
    presentation = regular_presentation(group)
    return _count_surjections(presentation, group)


_BUILTIN_TARGETS = {
    "Z2": ((0, 1),),
    "Z3": ((0, 1, 2),),
    "Z5": ((0, 1, 2, 3, 4),),
    "S3": ((0, 1), (0, 1, 2)),
    "A4": ((0, 1, 2), (1, 2, 3)),
    "A5": ((0, 1, 2), (0, 1, 2, 3, 4)),
    "PSL27": ((0, 1, 2, 3, 4, 5, 6), ((0, 7), (1, 6), (2, 3), (4, 5))),
}


def builtin_target(name):
    """Well-known small targets by name (for the command line)."""
    if name not in _BUILTIN_TARGETS:
        known = ", ".join(sorted(_BUILTIN_TARGETS))
        raise KeyError(f"no built-in target {name!r} (known: {known})")
    spec = _BUILTIN_TARGETS[name]
    degree = 8 if name == "PSL27" else max(max(c) for c in _flatten(spec)) + 1
    gens = []
    for entry in spec:
        cycles = entry if isinstance(entry[0], tuple) else (entry,)
        gens.append(Permutation.from_cycles(degree, cycles))
    return PermutationGroup(gens, degree=degree)


def _flatten(spec):
    for entry in spec:
        if isinstance(entry[0], tuple):
            yield from entry
        else:
            yield entry
