"""Prime splitting in small number fields and related finite-group orders.

A number field here is given by a monic irreducible integer polynomial of
degree at most 3 whose discriminant is squarefree.  Under that hypothesis the
equation order is maximal, so the factorization of a rational prime p in the
ring of integers mirrors the factorization of the polynomial mod p
(Dedekind's criterion): each irreducible factor of degree f with multiplicity
e contributes a prime ideal with residue degree f and ramification index e.

Degree <= 3 keeps factorization elementary: extract roots mod p with
multiplicity; whatever remains of degree 2 or 3 has no roots and is therefore
irreducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class NotPrimeError(ValueError):
    """The argument was required to be a rational prime."""


class NonSquarefreeDiscriminantError(ValueError):
    """The polynomial's discriminant has a square factor, so the equation
    order may not be maximal and root-pattern splitting is unreliable."""


@dataclass(frozen=True)
class FieldSpec:
    """A number field defined by a monic integer polynomial.

    ``min_poly`` lists coefficients from the constant term up, ending with
    the leading 1; e.g. x^2 + x + 1 is (1, 1, 1).
    """

    label: str
    min_poly: tuple

    def __post_init__(self):
        poly = tuple(int(c) for c in self.min_poly)
        object.__setattr__(self, "min_poly", poly)
        if len(poly) < 2 or poly[-1] != 1:
            raise ValueError("min_poly must be monic of degree >= 1")
        if self.degree > 3:
            raise ValueError("only degrees 1..3 are supported")

    @property
    def degree(self):
        return len(self.min_poly) - 1

    def discriminant(self):
        return poly_discriminant(self.min_poly)


@dataclass(frozen=True)
class PrimeSplitting:
    """Factorization pattern of a rational prime in a number field.

    ``factors`` is a sorted tuple of (residue_degree, ramification) pairs,
    one per prime ideal above p; sum of e*f equals the field degree.
    """

    field: str
    p: int
    factors: tuple

    def is_inert(self):
        return len(self.factors) == 1 and self.factors[0][1] == 1

    def is_ramified(self):
        return any(e > 1 for _, e in self.factors)

    def residue_degrees(self):
        return tuple(f for f, _ in self.factors)


@dataclass(frozen=True)
class CongruenceQuotient:
    """Finite linear quotients attached to the primes above p: one
    PSL(2, F_{p^f}) target per unramified prime ideal of residue degree f,
    and a single target for a ramified p.  ``targets`` pairs each field size
    with its multiplicity."""

    p: int
    targets: tuple


FIELDS = {
    # x^2 + x + 1, discriminant -3: the field of cube roots of unity
    "Qomega": FieldSpec("Qomega", (1, 1, 1)),
    # x^3 - x^2 + 1, discriminant -23
    "Kweeks": FieldSpec("Kweeks", (1, 0, -1, 1)),
}


def field_spec(name):
    """Look up a built-in field by label."""
    if isinstance(name, FieldSpec):
        return name
    if name not in FIELDS:
        known = ", ".join(FIELDS)
        raise KeyError(f"no field {name!r} (known: {known})")
    return FIELDS[name]


def poly_discriminant(coeffs):
    """Discriminant of a monic polynomial of degree 1, 2 or 3."""
    degree = len(coeffs) - 1
    if degree == 1:
        return 1
    if degree == 2:
        c, b, _ = coeffs
        return b * b - 4 * c
    if degree == 3:
        d, c, b, _ = coeffs
        return (
            18 * b * c * d
            - 4 * b**3 * d
            + b**2 * c**2
            - 4 * c**3
            - 27 * d**2
        )
    raise ValueError("only degrees 1..3 are supported")


def is_prime(n):
    """Deterministic primality test for machine-size integers."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin bases for n < 3.3 * 10^24
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit):
    """Ascending list of primes <= limit (simple sieve)."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


def _squarefree(n):
    n = abs(n)
    if n == 0:
        return False
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        if n % i == 0:
            n //= i
        i += 1
    return True


def _divide_out_root(coeffs, root, p):
    """Synthetic division of a monic polynomial by (x - root) over GF(p).

    Returns the quotient's coefficients (constant term first); the remainder
    is known to vanish when root actually is a root.
    """
    quotient = []
    carry = 0
    for c in reversed(coeffs):
        carry = (carry * root + c) % p
        quotient.append(carry)
    # quotient holds [leading, ..., remainder]; drop the remainder and the
    # shift the rest down one degree
    quotient.pop()
    quotient.reverse()
    return quotient


def _eval_mod(coeffs, x, p):
    value = 0
    for c in reversed(coeffs):
        value = (value * x + c) % p
    return value


def split_prime(field, p):
    """Factor the rational prime p in the given number field.

    Returns a :class:`PrimeSplitting` whose factors are (f, e) pairs sorted
    by residue degree, ties broken by larger ramification first.
    """
    spec = field_spec(field)
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not a rational prime")
    if not _squarefree(spec.discriminant()):
        raise NonSquarefreeDiscriminantError(
            f"discriminant {spec.discriminant()} of {spec.label} is not "
            "squarefree; root-pattern factorization does not apply"
        )
    coeffs = [c % p for c in spec.min_poly]
    factors = []
    # pull out linear factors with multiplicity
    for root in range(p):
        multiplicity = 0
        while len(coeffs) > 2 and _eval_mod(coeffs, root, p) == 0:
            coeffs = _divide_out_root(coeffs, root, p)
            multiplicity += 1
        if len(coeffs) == 2 and (coeffs[0] + root) % p == 0:
            # the remaining monic linear factor is exactly (x - root)
            coeffs = [1]
            multiplicity += 1
        if multiplicity:
            factors.append((1, multiplicity))
    remaining_degree = len(coeffs) - 1
    if remaining_degree > 0:
        # no roots remain, so a degree-2 or degree-3 remainder is irreducible
        factors.append((remaining_degree, 1))
    factors.sort(key=lambda fe: (fe[0], -fe[1]))
    splitting = PrimeSplitting(spec.label, p, tuple(factors))
    assert sum(f * e for f, e in splitting.factors) == spec.degree
    return splitting


def qomega_rule_pattern(p):
    """Closed-form splitting pattern of p in the field of cube roots of
    unity: 3 ramifies, p = 1 mod 6 splits, p = 2 or p = -1 mod 6 is inert."""
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not a rational prime")
    if p == 3:
        return ((1, 2),)
    if p % 6 == 1:
        return ((1, 1), (1, 1))
    return ((2, 1),)


def bianchi_quotient_catalog(p):
    """Congruence quotient targets above p for the cube-root-of-unity field.

    Derived from :func:`split_prime`: each unramified prime of residue
    degree f yields one PSL(2, F_{p^f}) target; a ramified p yields a single
    PSL(2, F_p) target.
    """
    splitting = split_prime("Qomega", p)
    sizes = []
    for f, e in splitting.factors:
        sizes.append(p**f)
    counts = {}
    for q in sizes:
        counts[q] = counts.get(q, 0) + 1
    targets = tuple(sorted(counts.items()))
    return CongruenceQuotient(p, targets)


def _prime_power_base(q):
    for p in primes_up_to(int(math.isqrt(q)) + 1):
        if q % p == 0:
            n = q
            while n % p == 0:
                n //= p
            return p if n == 1 else None
    return q if is_prime(q) else None


def psl2_order(q):
    """Order of PSL(2, F_q): q(q-1)(q+1)/gcd(2, q-1)."""
    if not isinstance(q, int) or q < 2 or _prime_power_base(q) is None:
        raise ValueError(f"{q} is not a prime power")
    return q * (q - 1) * (q + 1) // math.gcd(2, q - 1)
