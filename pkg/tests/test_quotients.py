"""Homomorphism/epimorphism counting against closed forms and brute force."""

import pytest

from grpkit.coset_enum import enumerate_cosets
from grpkit.errors import OrderBudgetError
from grpkit.intlinalg import abelian_invariants
from grpkit.permgrp import Permutation, PermutationGroup
from grpkit.presentations import catalog, parse_presentation
from grpkit.quotients import (
    EpiCount,
    NonDivisibleError,
    automorphism_group_order,
    builtin_target,
    count_epimorphisms,
    count_homomorphisms,
    element_order,
    regular_presentation,
)

Z_PRESENTATION = parse_presentation("group< a | >")


def cyclic_target(n):
    return PermutationGroup([Permutation(tuple(range(1, n)) + (0,))], degree=n)


def test_builtin_target_orders():
    expected = {"Z2": 2, "Z3": 3, "Z5": 5, "S3": 6, "A4": 12, "A5": 60, "PSL27": 168}
    for name, order in expected.items():
        assert builtin_target(name).order() == order
    with pytest.raises(KeyError):
        builtin_target("Q8")


def test_psl27_target_is_simple():
    assert builtin_target("PSL27").is_simple()


def test_element_order():
    assert element_order(Permutation.identity(4)) == 1
    assert element_order(Permutation.from_cycles(6, [(0, 1), (2, 3, 4)])) == 6


def test_count_homomorphisms_examples():
    involution = parse_presentation("group< a | a^2 >")
    s3 = builtin_target("S3")
    # identity and the three transpositions
    assert count_homomorphisms(involution, s3) == 4
    trivial = PermutationGroup([], degree=1)
    assert count_homomorphisms(catalog("Gamma"), trivial) == 1
    assert count_epimorphisms(involution, s3, aut_order=6).total == 0


def test_epi_example_cyclic3():
    pres = parse_presentation("group< a | a^3 >")
    result = count_epimorphisms(pres, cyclic_target(3), aut_order=2)
    assert result == EpiCount(total=2, aut_order=2)
    assert result.classes == 1


def test_homs_bound_epis():
    pres = catalog("Gamma")
    a4 = builtin_target("A4")
    homs = count_homomorphisms(pres, a4)
    epis = count_epimorphisms(pres, a4).total
    assert homs >= epis


GAMMA_TARGET_CLASSES = [("A4", None, 24, 1), ("A5", 120, 120, 1), ("PSL27", 336, 336, 2)]


@pytest.mark.parametrize("name, supplied, aut, classes", GAMMA_TARGET_CLASSES)
def test_gamma_epi_census(name, supplied, aut, classes):
    result = count_epimorphisms(catalog("Gamma"), builtin_target(name), aut_order=supplied)
    assert result.aut_order == aut
    assert result.classes == classes
    assert result.total == aut * classes


def test_automorphism_orders_in_repo():
    expected = {"Z2": 1, "Z3": 2, "Z5": 4, "S3": 6, "A4": 24, "A5": 120, "PSL27": 336}
    for name, order in expected.items():
        assert automorphism_group_order(builtin_target(name)) == order
    assert automorphism_group_order(cyclic_target(6)) == 2
    assert automorphism_group_order(PermutationGroup([], degree=1)) == 1


def test_regular_presentation_presents_the_group():
    for name in ("S3", "A4"):
        group = builtin_target(name)
        pres = regular_presentation(group)
        table = enumerate_cosets(pres)
        assert table.index == group.order()


def abelian_epi_total(invariants, p):
    """#Epi(G, Z/p) = p^m - 1 with m the invariant factors killed by p."""
    m = sum(1 for d in invariants if d == 0 or d % p == 0)
    return p**m - 1


@pytest.mark.parametrize("group", ["Gamma", "GammaW", "Lambda0", "Lambda2"])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_abelian_epi_counts_follow_invariants(group, p):
    pres = catalog(group)
    expected = abelian_epi_total(abelian_invariants(pres), p)
    result = count_epimorphisms(pres, cyclic_target(p), aut_order=p - 1)
    assert result.total == expected


def test_free_group_epi_counts():
    # a free group of rank 1 surjects Z/n in phi(n) ways
    assert count_epimorphisms(Z_PRESENTATION, cyclic_target(5), aut_order=4).total == 4
    assert count_epimorphisms(Z_PRESENTATION, cyclic_target(3), aut_order=2).total == 2


@pytest.mark.parametrize("name", ["S3", "A4", "Z5", "A5"])
def test_pruning_soundness(name):
    target = builtin_target(name) if name != "Z5" else cyclic_target(5)
    aut = automorphism_group_order(target)
    pres = catalog("Gamma")
    with_pruning = count_epimorphisms(pres, target, aut_order=aut, prune_orders=True)
    without = count_epimorphisms(pres, target, aut_order=aut, prune_orders=False)
    assert with_pruning.total == without.total


def test_non_divisible_aut_order_rejected():
    with pytest.raises(NonDivisibleError):
        count_epimorphisms(catalog("Gamma"), builtin_target("A4"), aut_order=7)


def test_target_order_budget():
    s8 = PermutationGroup(
        [
            Permutation.from_cycles(8, [(0, 1)]),
            Permutation(tuple(range(1, 8)) + (0,)),
        ]
    )
    with pytest.raises(OrderBudgetError):
        count_homomorphisms(catalog("Gamma"), s8)
    with pytest.raises(OrderBudgetError):
        automorphism_group_order(s8)


def test_aut_verified_against_wrong_supply():
    # a supplied aut_order that happens to divide is trusted (division only)
    result = count_epimorphisms(catalog("Gamma"), builtin_target("A4"), aut_order=12)
    assert result.total == 24 and result.classes == 2


def test_type_errors():
    with pytest.raises(TypeError):
        count_homomorphisms("not a presentation", builtin_target("S3"))
    with pytest.raises(TypeError):
        count_epimorphisms(catalog("Gamma"), "not a group")
    with pytest.raises(ValueError):
        count_epimorphisms(catalog("Gamma"), builtin_target("S3"), aut_order=0)


def brute_force_epis(presentation, target):
    """Reference count: no pruning, no memoization, explicit generation."""
    elements = list(target.elements())
    k = presentation.n_generators
    total = 0
    stack = [()]
    while stack:
        partial = stack.pop()
        if len(partial) == k:
            ok = True
        else:
            stack.extend(partial + (e,) for e in elements)
            continue
        for relator in presentation.relators:
            acc = Permutation.identity(target.degree)
            for letter in relator.letters:
                img = partial[abs(letter) - 1]
                acc = acc * (img if letter > 0 else ~img)
            if not acc.is_identity():
                ok = False
                break
        if ok and PermutationGroup(list(partial), degree=target.degree).order() == target.order():
            total += 1
    return total


@pytest.mark.parametrize(
    "text, name",
    [
        ("group< a, b | a^2, b^3, (a*b)^3 >", "A4"),
        ("group< a, b | a^2, b^2, (a*b)^3 >", "S3"),
        ("group< a | a^6 >", "S3"),
    ],
)
def test_against_brute_force_oracle(text, name):
    pres = parse_presentation(text)
    target = builtin_target(name)
    aut = automorphism_group_order(target)
    fast = count_epimorphisms(pres, target, aut_order=aut).total
    assert fast == brute_force_epis(pres, target)
