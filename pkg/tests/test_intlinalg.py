import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from grpkit.intlinalg import (
    abelian_invariants,
    abelianized_relation_matrix,
    char_poly,
    determinant,
    diagonal_of,
    format_invariants,
    identity_matrix,
    invariants_from_diagonal,
    mapping_torus_h1,
    mat_mul,
    mat_pow,
    smith_normal_form,
    torus_bundle_torsion,
    transvection,
)
from grpkit.presentations import catalog, parse_presentation

FIBER_ACTION = [
    [0, 1, 2, 1],
    [-1, 1, 2, 1],
    [0, 0, 2, 1],
    [1, 0, -1, 0],
]

SOL_MONODROMY = [[-3, 1], [-1, 0]]


def test_mat_pow_sixth_power():
    expected = [
        [18, 17, 88, 57],
        [9, 9, 48, 31],
        [14, 12, 66, 43],
        [3, 2, 9, 6],
    ]
    assert mat_pow(FIBER_ACTION, 6) == expected


def test_char_poly_of_fiber_action():
    # t^4 - 3t^3 + 3t^2 - 3t + 1
    assert char_poly(FIBER_ACTION) == [1, -3, 3, -3, 1]


def test_determinant_values():
    assert determinant(FIBER_ACTION) == 1
    assert determinant(SOL_MONODROMY) == 1
    assert determinant([[2, 0], [0, 3]]) == 6
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0


def test_smith_form_small_example():
    d, u, v = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert diagonal_of(d) == [2, 2, 156]


def test_smith_form_witnesses():
    a = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    d, u, v = smith_normal_form(a)
    assert mat_mul(mat_mul(u, a), v) == d
    assert determinant(u) in (1, -1)
    assert determinant(v) in (1, -1)


def test_smith_form_zero_matrix():
    d, u, v = smith_normal_form([[0, 0], [0, 0]])
    assert diagonal_of(d) == [0, 0]


def test_mapping_torus_h1_golden():
    assert mapping_torus_h1(FIBER_ACTION, 6) == [5, 55, 0]


def test_mapping_torus_h1_identity_monodromy():
    # Trivial bundle over the circle: H1 = Z^(k+1).
    assert mapping_torus_h1(identity_matrix(2), 1) == [0, 0, 0]


def test_mapping_torus_h1_rejects_singular():
    with pytest.raises(ValueError):
        mapping_torus_h1([[2, 0], [0, 1]], 1)


def test_torus_bundle_torsion_golden():
    assert torus_bundle_torsion(SOL_MONODROMY, 1) == 5
    assert torus_bundle_torsion(SOL_MONODROMY, 2) == 5
    assert torus_bundle_torsion(SOL_MONODROMY, 4) == 45


def test_torus_bundle_torsion_rejects_det_minus_one():
    with pytest.raises(ValueError):
        torus_bundle_torsion([[0, 1], [1, 0]], 1)


def test_transvection_genus_one():
    j = [[0, 1], [-1, 0]]
    assert transvection(j, [1, 0]) == [[1, -1], [0, 1]]
    assert determinant(transvection(j, [3, 5])) == 1


def test_abelian_invariants_of_catalog_groups():
    expected = {
        "Gamma": [3],
        "Gamma0": [2],
        "Lambda0": [2, 2],
        "Lambda1": [2],
        "Lambda2": [6],
        "GammaW": [5, 5],
        "GammaXC2": [6],
        "Gamma0XC2": [2, 2],
    }
    for name, invariants in expected.items():
        assert abelian_invariants(catalog(name)) == invariants, name


def test_abelian_invariants_free_group():
    p = parse_presentation("group<a, b | >")
    assert abelian_invariants(p) == [0, 0]


def test_relation_matrix():
    p = parse_presentation("group<a, b | a^3, (b*a^-1)^2>")
    assert abelianized_relation_matrix(p) == [[3, 0], [-2, 2]]


def test_format_invariants():
    assert format_invariants([5, 55, 0]) == "[ 5, 55, 0 ]"
    assert format_invariants([]) == "[]"


# ---------------------------------------------------------------------------
# Properties, cross-checked against sympy
# ---------------------------------------------------------------------------

entries = st.integers(min_value=-9, max_value=9)


@st.composite
def int_matrices(draw, max_dim=4, square=False):
    rows = draw(st.integers(1, max_dim))
    cols = rows if square else draw(st.integers(1, max_dim))
    return [[draw(entries) for _ in range(cols)] for _ in range(rows)]


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_smith_form_properties(a):
    nrows, ncols = len(a), len(a[0])
    d, u, v = smith_normal_form(a)
    assert mat_mul(mat_mul(u, a), v) == d
    assert determinant(u) in (1, -1)
    assert determinant(v) in (1, -1)
    diag = diagonal_of(d)
    for i in range(nrows):
        for j in range(ncols):
            if i != j:
                assert d[i][j] == 0
    assert all(x >= 0 for x in diag)
    for x, y in zip(diag, diag[1:]):
        if y:
            assert x != 0 and y % x == 0
        # zeros only at the end
        if x == 0:
            assert y == 0


@settings(max_examples=40, deadline=None)
@given(int_matrices())
def test_smith_form_matches_sympy(a):
    d, _, _ = smith_normal_form(a)
    ours = [x for x in diagonal_of(d) if x]
    theirs = sympy_snf(sympy.Matrix(a), domain=sympy.ZZ)
    k = min(theirs.rows, theirs.cols)
    them = sorted(abs(theirs[i, i]) for i in range(k) if theirs[i, i])
    assert sorted(ours) == them


@settings(max_examples=40, deadline=None)
@given(int_matrices(square=True))
def test_determinant_matches_sympy(a):
    assert determinant(a) == sympy.Matrix(a).det()


@settings(max_examples=40, deadline=None)
@given(int_matrices(square=True))
def test_char_poly_matches_sympy(a):
    ours = char_poly(a)
    theirs = sympy.Matrix(a).charpoly().all_coeffs()
    assert ours == [int(c) for c in theirs]


@settings(max_examples=30, deadline=None)
@given(int_matrices(square=True), st.integers(0, 5))
def test_mat_pow_matches_sympy(a, e):
    assert mat_pow(a, e) == (sympy.Matrix(a) ** e).tolist()


@settings(max_examples=30, deadline=None)
@given(int_matrices(square=True))
def test_char_poly_constant_term_is_det(a):
    n = len(a)
    coeffs = char_poly(a)
    assert coeffs[-1] == (-1) ** n * determinant(a)
