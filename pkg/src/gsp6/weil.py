"""Weil q-polynomials of degree 4 and 6: construction, discriminants, exact
Weil tests, reduction modulo a prime, and the mod-ell predicates used to
select a Frobenius polynomial.

Integer coefficient lists in this module are written highest degree first,
the way the polynomials are usually printed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .ff import PrimeField, UniPoly, factor_count, is_prime, legendre

__all__ = [
    "WeilSextic",
    "WeilQuartic",
    "SexticDiscParts",
    "HalouiReport",
    "disc_parts_sextic",
    "disc_parts_quartic",
    "discriminant",
    "resultant",
    "is_weil_quartic_sufficient",
    "is_weil_quartic_exact",
    "haloui_report",
    "is_weil_sextic_haloui",
    "is_weil_sextic_exact",
    "guaranteed_weil_window",
    "is_ordinary",
    "reduce_mod",
    "factor_count_mod",
    "is_irreducible_mod",
    "stickelberger_check",
    "is_absolutely_simple",
    "twist",
]


@dataclass(frozen=True)
class WeilSextic:
    """X^6 + aX^5 + bX^4 + cX^3 + qbX^2 + q^2aX + q^3."""

    q: int
    a: int
    b: int
    c: int

    def coefficients(self) -> list[int]:
        q, a, b, c = self.q, self.a, self.b, self.c
        return [1, a, b, c, q * b, q * q * a, q ** 3]

    def real_weil(self) -> list[int]:
        """h with P(X) = X^3 h(X + q/X)."""
        q, a, b, c = self.q, self.a, self.b, self.c
        return [1, a, b - 3 * q, c - 2 * a * q]

    def to_dict(self) -> dict:
        return {"q": self.q, "a": self.a, "b": self.b, "c": self.c}

    def to_json(self) -> str:
        d = self.to_dict()
        d["coefficients"] = [str(x) for x in self.coefficients()]
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "WeilSextic":
        w = cls(int(d["q"]), int(d["a"]), int(d["b"]), int(d["c"]))
        if "coefficients" in d:
            coeffs = [int(x) for x in d["coefficients"]]
            if coeffs != w.coefficients():
                raise ValueError("coefficient vector does not match (q, a, b, c)")
        check_symmetry(w.coefficients(), w.q)
        return w

    @classmethod
    def from_json(cls, s: str) -> "WeilSextic":
        return cls.from_dict(json.loads(s))

    @classmethod
    def from_coefficients(cls, coeffs, q: int) -> "WeilSextic":
        coeffs = [int(x) for x in coeffs]
        if len(coeffs) != 7 or coeffs[0] != 1:
            raise ValueError("expected a monic degree-6 coefficient vector")
        check_symmetry(coeffs, q)
        return cls(q, coeffs[1], coeffs[2], coeffs[3])


def check_symmetry(coeffs, q: int) -> None:
    """coeff[6-i] == q^(3-i) coeff[i] for i = 0, 1, 2."""
    for i in range(3):
        if coeffs[6 - i] != q ** (3 - i) * coeffs[i]:
            raise ValueError(f"functional equation fails at degree {i}")


@dataclass(frozen=True)
class WeilQuartic:
    """X^4 + uX^3 + vX^2 + uqX + q^2."""

    q: int
    u: int
    v: int

    def coefficients(self) -> list[int]:
        return [1, self.u, self.v, self.u * self.q, self.q ** 2]

    def real_weil(self) -> list[int]:
        return [1, self.u, self.v - 2 * self.q]


class SexticDiscParts(NamedTuple):
    gamma: int
    delta: int


def disc_parts_sextic(w: WeilSextic) -> SexticDiscParts:
    """Gamma and delta with disc(P) = q^6 Gamma^2 delta."""
    q, a, b, c = w.q, w.a, w.b, w.c
    gamma = (
        8 * q * a**4 + 9 * q**2 * a**2 - 42 * q * a**2 * b + a**2 * b**2
        - 4 * a**3 * c + 108 * q**3 - 108 * q**2 * b + 36 * q * b**2
        - 4 * b**3 + 54 * q * a * c + 18 * a * b * c - 27 * c**2
    )
    delta = (c + 2 * a * q) ** 2 - 4 * q * (b + q) ** 2
    return SexticDiscParts(gamma, delta)


def disc_parts_quartic(w: WeilQuartic) -> tuple[int, int]:
    """(kappa, delta) with disc(Q) = q^2 kappa^2 delta."""
    q, u, v = w.q, w.u, w.v
    kappa = -u * u + 4 * (v - 2 * q)
    delta = (v + 2 * q) ** 2 - 4 * q * u * u
    return kappa, delta


def _det_bareiss(m: list[list[int]]) -> int:
    n = len(m)
    m = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(f: list[int], g: list[int]) -> int:
    """Sylvester resultant of two integer polynomials (highest degree first)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return 1
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return _det_bareiss(rows)


def discriminant(f: list[int]) -> int:
    """disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lead(f)."""
    n = len(f) - 1
    df = [c * (n - i) for i, c in enumerate(f[:-1])]
    res = resultant(f, df)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    value, rem = divmod(sign * res, f[0])
    assert rem == 0
    return value


# -- exact real-root location -------------------------------------------------

def _sign_surd(A: Fraction, B: Fraction, q: int) -> int:
    """Sign of A + B*sqrt(q), q not a square."""
    sa = (A > 0) - (A < 0)
    sb = (B > 0) - (B < 0)
    if sb == 0 or sa == sb:
        return sa if sa else sb
    if sa == 0:
        return sb
    return sa if A * A > q * B * B else sb


def _eval_at_surd(poly: list[Fraction], s: int, q: int) -> tuple[Fraction, Fraction]:
    """poly(s * 2 sqrt q) as A + B sqrt q; poly is lowest degree first."""
    A = Fraction(0)
    B = Fraction(0)
    for k, c in enumerate(poly):
        scale = c * (2 * s) ** k * q ** (k // 2)
        if k % 2:
            B += scale
        else:
            A += scale
    return A, B


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _divmod_q(f, g):
    f = list(f)
    out = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    lead = g[-1]
    for k in range(len(f) - len(g), -1, -1):
        c = f[k + len(g) - 1] / lead
        out[k] = c
        for j, b in enumerate(g):
            f[k + j] -= c * b
    return _trim(out), _trim(f[: len(g) - 1])


def _gcd_q(f, g):
    f, g = _trim(f), _trim(g)
    while g:
        f, g = g, _divmod_q(f, g)[1]
    return [c / f[-1] for c in f]


def _deriv(p):
    return [c * k for k, c in enumerate(p)][1:]


def _all_roots_in_window(h_high_first: list[int], q: int) -> bool:
    """True iff every complex root of h is real and lies in [-2 sqrt q, 2 sqrt q]."""
    h = [Fraction(c) for c in reversed(h_high_first)]
    h = _trim(h)
    g = _gcd_q(h, _deriv(h))
    sf = _divmod_q(h, g)[0] if len(g) > 1 else h
    need = len(sf) - 1
    found = 0
    # both endpoints are roots iff x^2 - 4q divides the squarefree part
    if _eval_at_surd(sf, 1, q) == (0, 0):
        sf, rem = _divmod_q(sf, [Fraction(-4 * q), Fraction(0), Fraction(1)])
        assert not rem
        found += 2
    if len(sf) > 1:
        seq = [sf, _trim(_deriv(sf))]
        while len(seq[-1]) > 1:
            r = _divmod_q(seq[-2], seq[-1])[1]
            if not r:
                break
            seq.append([-c for c in r])

        def variations(s):
            signs = [_sign_surd(*_eval_at_surd(p, s, q), q) for p in seq]
            signs = [x for x in signs if x]
            return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

        found += variations(-1) - variations(1)
    return found == need


def is_weil_sextic_exact(w: WeilSextic) -> bool:
    """Every complex root of the sextic has absolute value sqrt(q)."""
    return _all_roots_in_window(w.real_weil(), w.q)


def is_weil_quartic_exact(w: WeilQuartic) -> bool:
    return _all_roots_in_window(w.real_weil(), w.q)


def is_weil_quartic_sufficient(w: WeilQuartic) -> bool:
    """|u| <= 4 sqrt q and 2|u| sqrt q - 2q <= v <= u^2/4 + 2q, decided exactly."""
    q, u, v = w.q, w.u, w.v
    if u * u > 16 * q:
        return False
    if v + 2 * q < 0 or 4 * u * u * q > (v + 2 * q) ** 2:
        return False
    return 4 * v <= u * u + 8 * q


class HalouiReport(NamedTuple):
    cond1: bool
    cond2: bool
    cond3: bool
    cond4: bool
    indeterminate: bool

    @property
    def passed(self) -> bool:
        return self.cond1 and self.cond2 and self.cond3 and self.cond4


def haloui_report(w: WeilSextic) -> HalouiReport:
    """The four coefficient inequalities, with condition (3) taken verbatim
    from the published statement (radicand a^2 - 3b^2 + 9q).

    ``indeterminate`` is set when that radicand is negative; condition (3)
    is then reported as failed.
    """
    q, a, b, c = w.q, w.a, w.b, w.c
    cond1 = a * a < 36 * q
    # 4 sqrt(q)|a| - 9q < b  and  b <= a^2/3 + 3q
    left = b + 9 * q > 0 and 16 * q * a * a < (b + 9 * q) ** 2
    cond2 = left and 3 * b <= a * a + 9 * q
    radicand = a * a - 3 * b * b + 9 * q
    indeterminate = radicand < 0
    if indeterminate:
        cond3 = False
    else:
        mid = Fraction(-2 * a**3, 27) + Fraction(a * b, 3) + q * a
        cond3 = (c - mid) ** 2 <= Fraction(4, 729) * radicand**3
    # -2qa - 2 sqrt(q) b - 2q sqrt(q) < c < -2qa + 2 sqrt(q) b + 2q sqrt(q)
    d = c + 2 * q * a
    half = 2 * (b + q)
    cond4 = (
        _sign_surd(Fraction(d), Fraction(half), q) > 0
        and _sign_surd(Fraction(-d), Fraction(half), q) > 0
    )
    return HalouiReport(cond1, cond2, cond3, cond4, indeterminate)


def is_weil_sextic_haloui(w: WeilSextic) -> bool:
    return haloui_report(w).passed


def guaranteed_weil_window(ell: int, q: int) -> bool:
    """q > 1.82 ell^2, compared in integers."""
    return 100 * q > 182 * ell * ell


def is_ordinary(w: WeilSextic) -> bool:
    return gcd(w.c, w.q) == 1


def reduce_mod(poly, ell: int) -> UniPoly:
    """Coefficientwise reduction of an integer polynomial (highest degree first)."""
    return UniPoly(PrimeField(ell), tuple(int(c) for c in reversed(list(poly))))


def factor_count_mod(f: UniPoly) -> tuple[int, bool]:
    return factor_count(f)


def is_irreducible_mod(w: WeilSextic, ell: int) -> bool:
    if w.q % ell == 0:
        raise ValueError("ell divides q")
    f = reduce_mod(w.coefficients(), ell)
    s, squarefree = factor_count(f)
    return s == 1 and squarefree


def stickelberger_check(poly, ell: int) -> bool:
    """(disc/ell) == (-1)^(n - s) for a monic integer polynomial."""
    poly = [int(c) for c in poly]
    if poly[0] != 1:
        raise ValueError("polynomial must be monic")
    if ell % 2 == 0 or not is_prime(ell):
        raise ValueError("ell must be an odd prime")
    disc = discriminant(poly)
    if disc % ell == 0:
        raise ValueError("ell divides the discriminant")
    n = len(poly) - 1
    s, _ = factor_count(reduce_mod(poly, ell))
    return legendre(disc, ell) == (-1) ** (n - s)


def is_absolutely_simple(w: WeilSextic, ell: int) -> bool:
    """An ordinary simple 3-fold is absolutely simple unless its Frobenius
    polynomial is X^6 + cX^3 + q^3."""
    if not is_ordinary(w):
        raise ValueError("sextic is not ordinary")
    if not is_irreducible_mod(w, ell):
        raise ValueError("sextic is not irreducible modulo ell")
    return not (w.a == 0 and w.b == 0)


def twist(w: WeilSextic) -> WeilSextic:
    """Frobenius polynomial of the quadratic twist, P(-X)."""
    return WeilSextic(w.q, -w.a, w.b, -w.c)
