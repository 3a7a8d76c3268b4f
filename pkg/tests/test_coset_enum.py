import pytest

from grpkit.coset_enum import (
    CosetTable,
    col_of,
    enumerate_cosets,
    inverse_column,
    standardize_rows,
)
from grpkit.errors import CosetLimitError, ResourceLimitError
from grpkit.presentations import catalog, parse_presentation, parse_word

Z6 = parse_presentation("group<a | a^6>")
S3 = parse_presentation("group<a, b | a^2, b^3, (a*b)^2>")
A4 = parse_presentation("group<a, b | a^2, b^3, (a*b)^3>")
D6 = parse_presentation("group<r, s | r^6, s^2, (r*s)^2>")
Q8 = parse_presentation("group<a, b | a^4, a^2*b^-2, b^-1*a*b*a>")


def sub(p, *words):
    return [parse_word(w, p.generators) for w in words]


def test_column_layout():
    assert col_of(1) == 0
    assert col_of(-1) == 1
    assert col_of(3) == 4
    assert col_of(-3) == 5
    assert inverse_column(0) == 1
    assert inverse_column(5) == 4


@pytest.mark.parametrize(
    "presentation, order",
    [(Z6, 6), (S3, 6), (A4, 12), (D6, 12), (Q8, 8)],
)
def test_group_orders_via_trivial_subgroup(presentation, order):
    t = enumerate_cosets(presentation)
    assert t.index == order
    assert t.verify()


@pytest.mark.parametrize(
    "presentation, words, index",
    [
        (Z6, ["a^2"], 2),
        (Z6, ["a^3"], 3),
        (S3, ["b"], 2),
        (S3, ["a"], 3),
        (A4, ["b"], 4),
        (A4, ["a", "b*a*b^-1"], 3),
        (D6, ["r"], 2),
        (D6, ["s", "r*s*r^-1"], 2),
        (D6, ["s", "r^3"], 3),
        (Q8, ["a"], 2),
    ],
)
def test_subgroup_indexes(presentation, words, index):
    t = enumerate_cosets(presentation, sub(presentation, *words))
    assert t.index == index
    assert t.verify()


def test_whole_group_has_index_one():
    t = enumerate_cosets(S3, sub(S3, "a", "b"))
    assert t.index == 1


def test_coincidence_collapse():
    p = parse_presentation("group<a | a^2, a^3>")
    assert enumerate_cosets(p).index == 1
    p = parse_presentation("group<a, b | a, b>")
    assert enumerate_cosets(p).index == 1


def test_infinite_index_raises_limit_error():
    free = parse_presentation("group<a, b | >")
    with pytest.raises(CosetLimitError):
        enumerate_cosets(free, max_cosets=500)
    integers = parse_presentation("group<a | >")
    with pytest.raises(ResourceLimitError):
        enumerate_cosets(integers, max_cosets=100)


def test_tight_budget_still_finishes():
    assert enumerate_cosets(Z6, max_cosets=6).index == 6


def test_table_is_standardized_and_transitive():
    t = enumerate_cosets(A4, sub(A4, "b"))
    rows, relabel = standardize_rows(t.rows)
    assert rows == t.rows
    assert relabel == list(range(t.index))


def test_standardize_is_idempotent():
    for words in ([], ["a"], ["b"]):
        t = enumerate_cosets(S3, sub(S3, *words))
        once, _ = standardize_rows(t.rows)
        twice, _ = standardize_rows(once)
        assert once == twice == t.rows


def test_apply_and_trace():
    t = enumerate_cosets(S3, sub(S3, "a"))
    w = parse_word("a*b", S3.generators)
    c = t.trace(0, w)
    assert c == t.apply(t.apply(0, 1), 2)
    # tracing any relator fixes every coset
    for relator in S3.relators:
        for coset in range(t.index):
            assert t.trace(coset, relator) == coset


def test_generator_permutations_are_bijections():
    t = enumerate_cosets(A4, sub(A4, "b"))
    perms = t.generator_permutations()
    assert len(perms) == 2
    for perm in perms:
        assert sorted(perm) == list(range(t.index))


def test_coset_action_is_transitive_from_zero():
    t = enumerate_cosets(D6, sub(D6, "s"))
    seen = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for col in range(t.n_columns):
            nxt = t.rows[c][col]
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    assert seen == set(range(t.index))


def test_flat_tuple_matches_rows():
    t = enumerate_cosets(Z6, sub(Z6, "a^3"))
    assert t.flat() == tuple(x for row in t.rows for x in row)


def test_verify_rejects_broken_tables():
    t = enumerate_cosets(S3, sub(S3, "a"))
    broken = CosetTable(S3, [row[:] for row in t.rows], t.subgroup_generators)
    broken.rows[1][0] = 2 if broken.rows[1][0] != 2 else 0
    with pytest.raises(ValueError):
        broken.verify()


def test_catalog_group_finite_quotient_index():
    # Adding relators that kill a known finite quotient: the single-relator
    # quotient <a,b,c | ..., a> of this reflection-style group is finite.
    p = catalog("Gamma")
    t = enumerate_cosets(p, sub(p, "a", "b*c"))
    assert t.verify()
    assert t.index >= 1


def test_sympy_oracle_agreement():
    sympy = pytest.importorskip("sympy")
    from sympy.combinatorics.free_groups import free_group
    from sympy.combinatorics.fp_groups import FpGroup

    F, a, b = free_group("a b")
    cases = [
        (S3, FpGroup(F, [a**2, b**3, (a * b) ** 2]), [[1], [2]]),
        (A4, FpGroup(F, [a**2, b**3, (a * b) ** 3]), [[1], [2], [1, 2]]),
    ]
    for ours_p, theirs_g, letter_sets in cases:
        for letters in letter_sets:
            words = [ours_p.generators[i - 1] for i in letters]
            ours = enumerate_cosets(ours_p, sub(ours_p, *words)).index
            gens = [a, b]
            theirs = theirs_g.coset_enumeration([gens[i - 1] for i in letters]).n
            assert ours == theirs
