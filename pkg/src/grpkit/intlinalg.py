"""Exact integer linear algebra on plain Python ints.

Everything here runs on arbitrary-precision integers: group orders and Smith
form intermediates routinely exceed 64 bits, so fixed-width arrays are not an
option.  Matrices are lists of lists of ints, rows first.
"""

from __future__ import annotations

from grpkit.presentations import Presentation


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai, oi = a[i], out[i]
        for k in range(inner):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(cols):
                    oi[j] += aik * bk[j]
    return out

def mat_pow(a, exponent):
    if exponent < 0:
        raise ValueError("negative matrix powers are not supported")
    result = identity_matrix(len(a))
    base = [row[:] for row in a]
    while exponent:
        if exponent & 1:
            result = mat_mul(result, base)
        exponent >>= 1
        if exponent:
            base = mat_mul(base, base)
    return result


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def trace(a):
    return sum(a[i][i] for i in range(len(a)))


def determinant(matrix):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def char_poly(matrix):
    """Characteristic polynomial det(tI - A), coefficients leading-first.

    Uses the Faddeev-LeVerrier recurrence; every division is exact and is
    checked.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("char_poly needs a square matrix")
    a = [[int(x) for x in row] for row in matrix]
    coeffs = [1]
    m = identity_matrix(n)
    for k in range(1, n + 1):
        am = mat_mul(a, m)
        t = trace(am)
        if t % k:
            raise ArithmeticError("Faddeev-LeVerrier trace was not divisible")
        c = -t // k
        coeffs.append(c)
        for i in range(n):
            am[i][i] += c
        m = am
    return coeffs


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------

def smith_normal_form(matrix):
    """Return (d, u, v) with u * matrix * v = d in Smith normal form.

    d is diagonal with nonnegative entries, each dividing the next, zeros
    last; u and v are unimodular.  Pivoting always picks a smallest-magnitude
    nonzero entry, which keeps intermediate growth tolerable.
    """
    a = [[int(x) for x in row] for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    if any(len(row) != ncols for row in a):
        raise ValueError("ragged matrix")
    u = identity_matrix(nrows)
    v = identity_matrix(ncols)

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, mult):
        # row[dst] += mult * row[src]
        asrc, adst = a[src], a[dst]
        for j in range(ncols):
            adst[j] += mult * asrc[j]
        usrc, udst = u[src], u[dst]
        for j in range(nrows):
            udst[j] += mult * usrc[j]

    def add_col(src, dst, mult):
        for row in a:
            row[dst] += mult * row[src]
        for row in v:
            row[dst] += mult * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def clear_position(t):
        """Diagonalize at (t, t), clearing row t and column t."""
        while True:
            pivot_i = pivot_j = -1
            best = None
            for i in range(t, nrows):
                row = a[i]
                for j in range(t, ncols):
                    x = row[j]
                    if x and (best is None or abs(x) < best):
                        best = abs(x)
                        pivot_i, pivot_j = i, j
            if best is None:
                return False
            swap_rows(t, pivot_i)
            swap_cols(t, pivot_j)
            dirty = False
            pivot = a[t][t]
            for i in range(t + 1, nrows):
                x = a[i][t]
                if x:
                    q = x // pivot
                    if q:
                        add_row(t, i, -q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                x = a[t][j]
                if x:
                    q = x // pivot
                    if q:
                        add_col(t, j, -q)
                    if a[t][j]:
                        dirty = True
            if not dirty:
                return True

    rank_bound = min(nrows, ncols)
    t = 0
    while t < rank_bound:
        if not clear_position(t):
            break
        t += 1

    # Nonnegative diagonal.
    for i in range(rank_bound):
        if a[i][i] < 0:
            negate_row(i)

    # Enforce the divisibility chain d[i] | d[i+1].
    changed = True
    while changed:
        changed = False
        for i in range(rank_bound - 1):
            x, y = a[i][i], a[i + 1][i + 1]
            if y and (x == 0 or y % x):
                # Fold the next diagonal entry into column i and re-clear.
                add_col(i + 1, i, 1)
                clear_position(i)
                for k in (i, i + 1):
                    if a[k][k] < 0:
                        negate_row(k)
                changed = True
    return a, u, v


def diagonal_of(matrix):
    n = min(len(matrix), len(matrix[0]) if matrix else 0)
    return [matrix[i][i] for i in range(n)]


def invariants_from_diagonal(diagonal, ncols):
    """Torsion entries (> 1, ascending) followed by one 0 per free rank."""
    rank = sum(1 for d in diagonal if d != 0)
    torsion = [d for d in diagonal if d > 1]
    return torsion + [0] * (ncols - rank)


def abelianized_relation_matrix(presentation):
    """Rows: exponent-sum vectors of the relators over the generators."""
    n = presentation.n_generators
    rows = []
    for relator in presentation.relators:
        row = [0] * n
        for letter in relator:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        rows.append(row)
    return rows


def abelian_invariants(presentation):
    """Invariant factors of the abelianization, torsion first, zeros for rank.

    ``[]`` means the trivial group; ``[2, 6, 0]`` means Z/2 x Z/6 x Z.
    """
    if not isinstance(presentation, Presentation):
        raise TypeError("abelian_invariants expects a Presentation")
    rows = abelianized_relation_matrix(presentation)
    if not rows:
        return [0] * presentation.n_generators
    d, _, _ = smith_normal_form(rows)
    return invariants_from_diagonal(diagonal_of(d), presentation.n_generators)


def format_invariants(invariants):
    """Render an invariant list the way ``[ 2, 6, 0 ]`` or ``[]``."""
    if not invariants:
        return "[]"
    return "[ " + ", ".join(str(x) for x in invariants) + " ]"


# --------------------------------------------------------------------------
# Mapping tori
# --------------------------------------------------------------------------

def mapping_torus_h1(matrix, power=1):
    """First homology of the mapping torus of an automorphism of Z^k.

    For m in GL(k, Z) the bundle over the circle with monodromy m^power has
    H1 = Z + coker(m^power - 1); the result uses the same invariant-list
    convention as :func:`abelian_invariants`.
    """
    k = len(matrix)
    if any(len(row) != k for row in matrix):
        raise ValueError("monodromy matrix must be square")
    if power < 1:
        raise ValueError("power must be a positive integer")
    if determinant(matrix) not in (1, -1):
        raise ValueError("monodromy must be invertible over the integers")
    m = mat_pow(matrix, power)
    b = mat_sub(m, identity_matrix(k))
    d, _, _ = smith_normal_form(b)
    fiber = invariants_from_diagonal(diagonal_of(d), k)
    torsion = [x for x in fiber if x != 0]
    zeros = [x for x in fiber if x == 0]
    return torsion + zeros + [0]


def torus_bundle_torsion(matrix, power=1):
    """Order of the torsion of H1 for a torus bundle with the given monodromy.

    The monodromy must lie in SL(2, Z); the answer is |trace(m^power) - 2|,
    with 0 meaning the torsion subgroup is infinite (reducible case).
    """
    if len(matrix) != 2 or any(len(row) != 2 for row in matrix):
        raise ValueError("torus bundle monodromy must be 2x2")
    if determinant(matrix) != 1:
        raise ValueError("monodromy must have determinant 1")
    if power < 1:
        raise ValueError("power must be a positive integer")
    m = mat_pow(matrix, power)
    return abs(trace(m) - 2)


def transvection(form, vector):
    """The symplectic transvection x -> x + <x, c> c written as a matrix.

    ``form`` is the matrix j of the symplectic pairing and ``vector`` the
    (column) vector c; the result is I + c (j c)^T.
    """
    n = len(form)
    if len(vector) != n:
        raise ValueError("vector length must match the form")
    jc = mat_vec(form, vector)
    out = identity_matrix(n)
    for i in range(n):
        ci = vector[i]
        if ci:
            row = out[i]
            for k in range(n):
                row[k] += ci * jc[k]
    return out
