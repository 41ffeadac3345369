import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gsp6.ff import (
    ExtField,
    PrimeField,
    UniPoly,
    count_roots,
    distinct_degree_counts,
    ext_field_build,
    factor_count,
    is_prime,
    legendre,
    quad_char,
    squarefree_decomposition,
)

SMALL_ODD_PRIMES = [p for p in range(3, 32) if sympy.isprime(p)]


def test_is_prime_matches_sympy():
    for n in range(-5, 3000):
        assert is_prime(n) == sympy.isprime(n), n
    for n in (2**61 - 1, 2**61 + 1, 1000000007 * 998244353):
        assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize("n, ell, expected", [(0, 7, 0), (2, 7, 1), (313, 13, 1), (3, 7, -1)])
def test_legendre_examples(n, ell, expected):
    assert legendre(n, ell) == expected


@pytest.mark.parametrize("ell", SMALL_ODD_PRIMES)
def test_legendre_euler_and_multiplicative(ell):
    for a in range(ell):
        e = pow(a, (ell - 1) // 2, ell)
        assert legendre(a, ell) == (e if e <= 1 else -1)
        for b in range(ell):
            assert legendre(a * b, ell) == legendre(a, ell) * legendre(b, ell)


@given(st.integers(-10**30, 10**30), st.sampled_from(SMALL_ODD_PRIMES))
def test_legendre_periodic(n, ell):
    assert legendre(n, ell) == legendre(n % ell, ell)


def test_ext_field_build_first_irreducible():
    assert ext_field_build(3, 2).modulus_poly == (1, 0, 1)
    assert ext_field_build(47, 3).order == 103823


@pytest.mark.parametrize("q", [3, 5, 7, 11])
@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_ext_field_modulus_is_smallest_irreducible(q, r):
    K = ext_field_build(q, r)
    x = sympy.Symbol("x")
    # first irreducible in the documented scan order
    for n in range(q**r):
        low = [(n // q**i) % q for i in range(r)]
        poly = sympy.Poly(list(reversed(low + [1])), x, modulus=q)
        if poly.is_irreducible:
            assert K.modulus_poly == tuple(low) + (1,)
            break
    assert ext_field_build(q, r) == K


def test_ext_field_rejects_reducible():
    with pytest.raises(ValueError):
        ExtField(PrimeField(3), 2, (2, 0, 1))  # X^2 - 1


@pytest.mark.parametrize("q, r", [(3, 2), (5, 2), (3, 3), (7, 2)])
def test_ext_field_is_a_field(q, r):
    K = ext_field_build(q, r)
    elems = list(K.elements())
    assert len(set(elems)) == K.order
    for x in elems:
        if not K.is_zero(x):
            assert K.mul(x, K.inv(x)) == K.one
        assert K.pow(x, K.order) == x
        assert K.element(K.index(x)) == x
    for x, y in itertools.islice(itertools.product(elems, repeat=2), 0, None, 7):
        assert K.frobenius(K.mul(x, y)) == K.mul(K.frobenius(x), K.frobenius(y))
        assert K.sub(K.add(x, y), y) == x


def test_quad_char_examples():
    K = ext_field_build(3, 2)
    assert quad_char(K, K.zero) == 0
    assert quad_char(K, K.one) == 1
    # a generator of the cyclic group of order 8 is a non-square
    gens = [x for x in K.elements() if not K.is_zero(x)
            and all(K.pow(x, k) != K.one for k in (1, 2, 4))]
    assert gens
    assert all(quad_char(K, g) == -1 for g in gens)


@pytest.mark.parametrize("q, r", [(3, 2), (5, 2), (3, 3), (7, 1), (11, 2)])
def test_quad_char_counts_squares(q, r):
    K = ext_field_build(q, r)
    squares = {K.mul(x, x) for x in K.elements()}
    for x in K.elements():
        expected = 0 if K.is_zero(x) else (1 if x in squares else -1)
        assert quad_char(K, x) == expected


def test_count_roots_examples():
    F3, F7 = PrimeField(3), PrimeField(7)
    assert count_roots(UniPoly(F3, (1, 0, 1))) == 0
    assert count_roots(UniPoly(F7, (6, 0, 1))) == 2
    with pytest.raises(ValueError):
        count_roots(UniPoly(F3, ()))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_count_roots_matches_enumeration(data):
    q, r = data.draw(st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (31, 1)]))
    K = ext_field_build(q, r)
    deg = data.draw(st.integers(1, 7))
    coeffs = [K.element(data.draw(st.integers(0, K.order - 1))) for _ in range(deg)]
    f = UniPoly(K, tuple(coeffs) + (K.one,))
    naive = sum(1 for x in K.elements() if K.is_zero(f(x)))
    assert count_roots(f) == naive


def _sympy_factor_count(coeffs, p):
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
    _, facs = poly.factor_list()
    return len(facs), all(e == 1 for _, e in facs)


def test_factor_count_examples():
    assert factor_count(UniPoly(PrimeField(3), (1, 0, 1))) == (1, True)
    assert factor_count(UniPoly(PrimeField(5), (4, 0, 0, 0, 0, 0, 1))) == _sympy_factor_count(
        [4, 0, 0, 0, 0, 0, 1], 5)
    assert factor_count(UniPoly(PrimeField(7), (1, 5, 1))) == (1, False)
    with pytest.raises(ValueError):
        factor_count(UniPoly(PrimeField(7), (1, 2)))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([3, 5, 7, 13]), st.lists(st.integers(0, 12), min_size=1, max_size=9))
def test_factor_count_matches_sympy(p, low):
    coeffs = [c % p for c in low] + [1]
    assert factor_count(UniPoly(PrimeField(p), tuple(coeffs))) == _sympy_factor_count(coeffs, p)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(0, 6), min_size=1, max_size=10))
def test_squarefree_decomposition_recomposes(p, low):
    F = PrimeField(p)
    f = UniPoly(F, tuple(c % p for c in low) + (1,))
    parts = squarefree_decomposition(f)
    prod = UniPoly(F, (1,))
    for g, e in parts:
        assert g.is_squarefree()
        for _ in range(e):
            prod = prod * g
    assert prod == f
    for (g, _), (h, _) in itertools.combinations(parts, 2):
        assert g.gcd(h).degree == 0


def test_distinct_degree_counts():
    F = PrimeField(5)
    # (X-1)(X-2)(X^2+2)(X^3+X+1), all irreducible pieces over F_5
    f = UniPoly(F, (4, 1)) * UniPoly(F, (3, 1)) * UniPoly(F, (2, 0, 1)) * UniPoly(F, (1, 1, 0, 1))
    assert distinct_degree_counts(f.monic()) == {1: 2, 2: 1, 3: 1}
