"""Prime fields, small extension fields F_{q^r} and dense univariate
polynomials over them.

Prime-field elements are plain ints in ``[0, p)``; extension-field elements
are tuples of ``r`` ints (coefficients of 1, t, ..., t^(r-1) modulo the
defining polynomial).  Both field classes expose the same small arithmetic surface
so that :class:`UniPoly` works over either.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

__all__ = [
    "is_prime",
    "legendre",
    "PrimeField",
    "ExtField",
    "UniPoly",
    "ext_field_build",
    "count_roots",
    "quad_char",
    "squarefree_decomposition",
    "distinct_degree_counts",
    "factor_count",
]

# Deterministic Miller-Rabin witnesses for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic primality test (exact for every n below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def legendre(n: int, ell: int) -> int:
    """Legendre symbol (n / ell) for an odd prime ell."""
    if ell % 2 == 0 or not is_prime(ell):
        raise ValueError(f"legendre needs an odd prime modulus, got {ell}")
    n %= ell
    if n == 0:
        return 0
    return 1 if pow(n, (ell - 1) // 2, ell) == 1 else -1


class PrimeField:
    """The field Z/pZ."""

    degree = 1

    def __init__(self, modulus: int):
        if modulus < 3 or not is_prime(modulus):
            raise ValueError(f"PrimeField modulus must be an odd prime, got {modulus}")
        self.p = modulus
        self.modulus = modulus
        self.order = modulus
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __call__(self, n: int) -> int:
        return n % self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def neg(self, x):
        return -x % self.p

    def mul(self, x, y):
        return x * y % self.p

    def scale(self, x, n: int):
        return x * n % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def pow(self, x, e: int):
        return pow(x, e, self.p)

    def is_zero(self, x) -> bool:
        return x % self.p == 0

    def elements(self):
        return iter(range(self.p))

    def quad_char(self, x) -> int:
        return legendre(x, self.p)


class ExtField:
    """F_{q^r} = F_q[t] / (modulus_poly), elements as r-tuples low degree first."""

    def __init__(self, base: PrimeField, degree: int, modulus_poly: tuple[int, ...]):
        if degree < 1 or degree > 6:
            raise ValueError("only degrees 1 to 6 are supported")
        modulus_poly = tuple(c % base.p for c in modulus_poly)
        if len(modulus_poly) != degree + 1 or modulus_poly[-1] != 1:
            raise ValueError("modulus polynomial must be monic of the given degree")
        if degree > 1 and not _irreducible_over(base, modulus_poly):
            raise ValueError("modulus polynomial is reducible")
        self.base = base
        self.p = base.p
        self.degree = degree
        self.modulus_poly = modulus_poly
        self.order = base.p ** degree
        self.zero = (0,) * degree
        self.one = (1,) + (0,) * (degree - 1)
        # t^k reduced, for k < 2r - 1
        red = []
        for k in range(2 * degree - 1):
            if k < degree:
                red.append(tuple(int(i == k) for i in range(degree)))
            else:
                prev = red[-1]
                top = prev[-1]
                shifted = (0,) + prev[:-1]
                red.append(tuple((s - top * m) % self.p for s, m in zip(shifted, modulus_poly)))
        self._red = tuple(red)

    def __repr__(self):
        return f"ExtField({self.p}^{self.degree}, modulus={self.modulus_poly})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.p == self.p
            and other.modulus_poly == self.modulus_poly
        )

    def __hash__(self):
        return hash(("E", self.p, self.modulus_poly))

    def __call__(self, value) -> tuple:
        if isinstance(value, int):
            return self.from_int(value)
        value = tuple(value)
        if len(value) != self.degree:
            raise ValueError("wrong number of coordinates")
        return tuple(v % self.p for v in value)

    def from_int(self, n: int) -> tuple:
        return (n % self.p,) + (0,) * (self.degree - 1)

    def gen(self) -> tuple:
        """The class of t (for degree 1 this is 0, the root of X)."""
        if self.degree == 1:
            return (0,)
        return (0, 1) + (0,) * (self.degree - 2)

    def add(self, x, y):
        p = self.p
        return tuple((a + b) % p for a, b in zip(x, y))

    def sub(self, x, y):
        p = self.p
        return tuple((a - b) % p for a, b in zip(x, y))

    def neg(self, x):
        p = self.p
        return tuple(-a % p for a in x)

    def scale(self, x, n: int):
        p = self.p
        return tuple(a * n % p for a in x)

    def mul(self, x, y):
        r, p = self.degree, self.p
        prod = [0] * (2 * r - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        out = [0] * r
        for k, c in enumerate(prod):
            if c:
                for j, m in enumerate(self._red[k]):
                    out[j] += c * m
        return tuple(v % p for v in out)

    def pow(self, x, e: int):
        if e < 0:
            x, e = self.inv(x), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def inv(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        return self.pow(x, self.order - 2)

    def is_zero(self, x) -> bool:
        return not any(x)

    def frobenius(self, x):
        return self.pow(x, self.p)

    def elements(self):
        for digits in itertools.product(range(self.p), repeat=self.degree):
            yield tuple(reversed(digits))

    def index(self, x) -> int:
        """Integer code sum x_i q^i, the ordering used by the counting kernels."""
        n = 0
        for c in reversed(x):
            n = n * self.p + c
        return n

    def element(self, n: int) -> tuple:
        out = []
        for _ in range(self.degree):
            n, c = divmod(n, self.p)
            out.append(c)
        return tuple(out)

    def quad_char(self, x) -> int:
        return quad_char(self, x)


def _eval_int_poly(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


@lru_cache(maxsize=None)
def _irreducible_over(F: PrimeField, coeffs: tuple[int, ...]) -> bool:
    # no root settles degree <= 3; higher degrees go through factor counting
    if any(_eval_int_poly(coeffs, x, F.p) == 0 for x in range(F.p)):
        return False
    if len(coeffs) <= 4:
        return True
    return factor_count(UniPoly(F, coeffs)) == (1, True)


def ext_field_build(q: int, r: int) -> ExtField:
    """F_{q^r} with the smallest monic irreducible modulus.

    Candidates X^r + c_{r-1} X^{r-1} + ... + c_0 are scanned in increasing
    order of the integer sum c_i q^i (c_{r-1} most significant).
    """
    base = PrimeField(q)
    if r == 1:
        return ExtField(base, 1, (0, 1))
    for n in range(q ** r):
        low = []
        m = n
        for _ in range(r):
            m, c = divmod(m, q)
            low.append(c)
        cand = tuple(low) + (1,)
        if all(_eval_int_poly(cand, x, q) for x in range(q)) and _irreducible_over(base, cand):
            return ExtField(base, r, cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def quad_char(K, x) -> int:
    """Quadratic character of K evaluated at x (0 at 0)."""
    if K.is_zero(x):
        return 0
    v = K.pow(x, (K.order - 1) // 2)
    if v == K.one:
        return 1
    if v == K.neg(K.one):
        return -1
    raise AssertionError("Euler criterion returned a non-unit")


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies X^i."""

    field: object
    coeffs: tuple = field(default=())

    def __post_init__(self):
        K = self.field
        cs = [K(c) for c in self.coeffs]
        while cs and K.is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def x(cls, K):
        return cls(K, (K.zero, K.one))

    @classmethod
    def constant(cls, K, c):
        return cls(K, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1]

    def __repr__(self):
        return f"UniPoly({self.coeffs})"

    def __add__(self, other):
        K = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly(K, tuple(
            K.add(a[i] if i < len(a) else K.zero, b[i] if i < len(b) else K.zero)
            for i in range(n)
        ))

    def __neg__(self):
        return UniPoly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        K = self.field
        if self.is_zero() or other.is_zero():
            return UniPoly(K, ())
        out = [K.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if K.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = K.add(out[i + j], K.mul(a, b))
        return UniPoly(K, tuple(out))

    def scale(self, c):
        return UniPoly(self.field, tuple(self.field.mul(c, a) for a in self.coeffs))

    def monic(self):
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic form")
        return self.scale(self.field.inv(self.lead()))

    def __divmod__(self, other):
        K = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = K.inv(other.lead())
        quot = [K.zero] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if K.is_zero(c):
                continue
            c = K.mul(c, inv_lead)
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = K.sub(rem[k - dq + j], K.mul(c, b))
        return UniPoly(K, tuple(quot)), UniPoly(K, tuple(rem[:dq]))

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __call__(self, x):
        K = self.field
        acc = K.zero
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, x), c)
        return acc

    def derivative(self):
        K = self.field
        return UniPoly(K, tuple(K.scale(c, i) for i, c in enumerate(self.coeffs) if i))

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a if a.is_zero() else a.monic()

    def powmod(self, e: int, mod):
        result = UniPoly(self.field, (self.field.one,)) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree == 0


def count_roots(f: UniPoly) -> int:
    """Number of distinct roots of f in its coefficient field."""
    if f.is_zero():
        raise ValueError("count_roots of the zero polynomial")
    if f.degree == 0:
        return 0
    K = f.field
    X = UniPoly.x(K)
    frob = X.powmod(K.order, f)
    return f.gcd(frob - X).degree


def _pth_root(f: UniPoly) -> UniPoly:
    """Inverse of the Frobenius map on F_p[X] (only prime fields are needed)."""
    K = f.field
    p = K.p
    if K.degree != 1:
        raise NotImplementedError("p-th roots only over prime fields")
    return UniPoly(K, tuple(f.coeffs[i] for i in range(0, len(f.coeffs), p)))


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Squarefree factorization of a monic f over a prime field.

    Returns pairs (g_i, i) with f = prod g_i^i, each g_i squarefree and coprime.
    """
    K = f.field
    p = K.p
    out = []
    f = f.monic()
    i = 1
    fp = f.derivative()
    if fp.is_zero():
        return [(g, e * p) for g, e in squarefree_decomposition(_pth_root(f))]
    c = f.gcd(fp)
    w = f // c
    while w.degree > 0:
        y = w.gcd(c)
        fac = w // y
        if fac.degree > 0:
            out.append((fac.monic(), i))
        i += 1
        w, c = y, c // y
    if c.degree > 0:
        out.extend((g, e * p) for g, e in squarefree_decomposition(_pth_root(c)))
    return out


def distinct_degree_counts(f: UniPoly) -> dict[int, int]:
    """For squarefree monic f over a prime field: {degree: number of irreducible factors}."""
    K = f.field
    X = UniPoly.x(K)
    counts = {}
    h = X % f if f.degree > 0 else X
    k = 0
    while f.degree > 0:
        k += 1
        if 2 * k > f.degree:
            counts[f.degree] = counts.get(f.degree, 0) + 1
            break
        h = h.powmod(K.order, f)
        g = f.gcd(h - X)
        if g.degree > 0:
            counts[k] = g.degree // k
            f = f // g
            h = h % f
    return counts


def factor_count(f: UniPoly) -> tuple[int, bool]:
    """(number of distinct monic irreducible factors, squarefree?) for monic f."""
    if f.is_zero() or f.lead() != f.field.one:
        raise ValueError("factor_count needs a nonzero monic polynomial")
    if f.degree == 0:
        return 0, True
    # an irreducible factor can show up in more than one squarefree part
    radical = UniPoly(f.field, (f.field.one,))
    for g, _ in squarefree_decomposition(f):
        radical = radical * (g // radical.gcd(g))
    s = sum(distinct_degree_counts(radical).values())
    fp = f.derivative()
    squarefree = not fp.is_zero() and f.gcd(fp).degree == 0
    return s, squarefree
