"""Counting Weil polynomials modulo ell: closed forms and exhaustive census.

The closed forms count degree-4 and degree-6 Weil shapes by the quadratic
character of their discriminant modulo ell; :func:`brute_census` recomputes
every quantity by enumeration so the two can be compared.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from .ff import PrimeField, UniPoly, factor_count, is_prime, legendre
from .weil import (
    WeilQuartic,
    WeilSextic,
    disc_parts_quartic,
    disc_parts_sextic,
    guaranteed_weil_window,
    is_weil_quartic_exact,
    is_weil_sextic_exact,
)

__all__ = [
    "CensusReport",
    "prelim_count",
    "d4",
    "n4_t4_bounds",
    "m_formula",
    "w_formula",
    "d6_lower",
    "r6_upper",
    "margin",
    "margin_from_symbols",
    "quartic_window",
    "brute_census",
]

COST_GUARD = 31


def _check_ell(ell: int) -> None:
    if ell <= 3 or not is_prime(ell):
        raise ValueError(f"closed forms need a prime ell > 3, got {ell}")


def prelim_count(D: int, eps: int, ell: int) -> int:
    """#{x in F_ell : ((x^2 - D)/ell) = eps} = (ell - 1 - eps - (D/ell)) / 2."""
    if ell <= 2:
        raise ValueError("ell must be odd")
    if D % ell == 0:
        raise ValueError("D must be nonzero modulo ell")
    if eps not in (-1, 1):
        raise ValueError("eps must be +1 or -1")
    return (ell - 1 - eps - legendre(D, ell)) // 2


def d4(eps: int, ell: int, q: int) -> int:
    """Number of (u, v) in F_ell^2 whose quartic has discriminant character eps."""
    _check_ell(ell)
    if q % ell == 0:
        raise ValueError("q must differ from ell")
    lq = legendre(q, ell)
    if eps == -1:
        return (ell - 1) * (ell - lq) // 2
    if eps == 1:
        return (ell - 3) * (ell - lq) // 2 + 1
    raise ValueError("eps must be +1 or -1")


def quartic_window(ell: int, q: int) -> bool:
    """q > 1.67 ell^2, the regime where every boxed quartic is Weil."""
    return 100 * q > 167 * ell * ell


def n4_t4_bounds(ell: int, q: int) -> tuple[Fraction, Fraction, bool]:
    _check_ell(ell)
    lq = legendre(q, ell)
    n4 = Fraction((ell + 1) * (ell - 1), 4)
    t4 = Fraction((ell - 3) * (ell - lq), 4) + Fraction((ell - 1) * (ell + 1), 8)
    return n4, t4, quartic_window(ell, q)


def m_formula(ell: int, q: int) -> Fraction:
    lq, lm1 = legendre(q, ell), legendre(-1, ell)
    return (
        Fraction((ell - 1) ** 2 * (ell - 1 - lq), 2)
        + Fraction((ell - 1) * lq * (1 - lm1), 2)
    )


def w_formula(ell: int, q: int) -> int:
    return ell * (ell - 1)


def d6_lower(ell: int, q: int) -> Fraction:
    _check_ell(ell)
    return m_formula(ell, q) - w_formula(ell, q)


def r6_upper(ell: int, q: int) -> Fraction:
    _check_ell(ell)
    e = legendre(q, ell)
    F = Fraction
    return (
        F(3, 8) * ell**3 - F(5, 8) * ell**2 * e - ell**2
        + F(3, 2) * ell * e + F(5, 8) * ell - F(3, 8) * e - F(1, 2)
    )


def margin_from_symbols(ell: int, lq: int, lmq: int) -> Fraction:
    """Lower bound for D6*- minus R6 given (q/ell) = lq and (-q/ell) = lmq."""
    F = Fraction
    return (
        F(1, 8) * ell**3 + F(1, 8) * ell**2 * lq - F(1, 2) * ell * lmq
        - F(3, 2) * ell**2 + F(1, 2) * lmq + F(15, 8) * ell - F(5, 8) * lq
    )


def margin(ell: int, q: int) -> Fraction:
    _check_ell(ell)
    return margin_from_symbols(ell, legendre(q, ell), legendre(-q, ell))


@dataclass
class CensusReport:
    ell: int
    q: int
    # exhaustive counts
    d4_minus: int
    d4_plus: int
    d4_zero: int
    n4: int
    t4: int
    m_count: int
    w_count: int
    d6_star_minus: int | None = None
    r6: int | None = None
    # closed forms (None when ell <= 3, where they are not stated)
    d4_minus_formula: int | None = None
    d4_plus_formula: int | None = None
    n4_bound: Fraction | None = None
    t4_bound: Fraction | None = None
    quartic_equality: bool | None = None
    m_formula: Fraction | None = None
    w_formula: int | None = None
    d6_lower: Fraction | None = None
    r6_upper: Fraction | None = None
    margin: Fraction | None = None

    @property
    def d6_minus_r6(self) -> int | None:
        if self.d6_star_minus is None:
            return None
        return self.d6_star_minus - self.r6

    def to_dict(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            out[k] = str(v) if isinstance(v, Fraction) else v
        out["d6_minus_r6"] = self.d6_minus_r6
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "CensusReport":
        kwargs = {}
        for name, f in cls.__dataclass_fields__.items():
            v = d.get(name)
            if v is not None and "Fraction" in str(f.type):
                v = Fraction(v)
            kwargs[name] = v
        return cls(**kwargs)


def _box(ell: int) -> range:
    h = (ell - 1) // 2
    return range(-h, h + 1)


def _quartic_census(ell: int, q: int, window: bool):
    F = PrimeField(ell)
    dm = dp = dz = n4 = t4 = 0
    for u in _box(ell):
        for v in _box(ell):
            w = WeilQuartic(q, u, v)
            kappa, delta = disc_parts_quartic(w)
            chi = legendre(q * q * kappa * kappa * delta, ell)
            if chi == -1:
                dm += 1
            elif chi == 1:
                dp += 1
            else:
                dz += 1
            if not (window or is_weil_quartic_exact(w)):
                continue
            f = UniPoly(F, tuple(reversed(w.coefficients())))
            s, squarefree = factor_count(f)
            if s == 1 and squarefree:
                n4 += 1
            elif s == 2 and squarefree:
                t4 += 1
    return dm, dp, dz, n4, t4


def _sextic_slab(ell: int, q: int, a: int, with_factor: bool, window: bool):
    """Counts for a fixed a: (M, W, D6*-, R6)."""
    F = PrimeField(ell)
    m = w_ = d6 = r6 = 0
    for b in _box(ell):
        for c in _box(ell):
            wp = WeilSextic(q, a, b, c)
            gamma, delta = disc_parts_sextic(wp)
            chi_delta = legendre(delta, ell)
            if a % ell and gamma % ell == 0:
                w_ += 1
            if a % ell == 0 or c % ell == 0:
                continue
            if chi_delta == -1:
                m += 1
                if gamma % ell:
                    d6 += 1
                    if with_factor and (window or is_weil_sextic_exact(wp)):
                        f = UniPoly(F, tuple(reversed(wp.coefficients())))
                        s, squarefree = factor_count(f)
                        if not (s == 1 and squarefree):
                            r6 += 1
    return m, w_, d6, r6


def brute_census(ell: int, q: int, include_degree6: bool = False,
                 threads: int = 1, cost_guard: int = COST_GUARD) -> CensusReport:
    """Exhaustive census over the box [-(ell-1)/2, (ell-1)/2].

    The degree-6 slabs (one per value of a) may run on several threads; the
    merged totals do not depend on how the slabs were scheduled.
    """
    if ell % 2 == 0 or not is_prime(ell) or not is_prime(q):
        raise ValueError("ell and q must be primes, ell odd")
    if ell == q:
        raise ValueError("ell must differ from q")
    if ell > cost_guard:
        raise ValueError(f"ell = {ell} exceeds the census cost guard {cost_guard}")

    window4 = quartic_window(ell, q)
    dm, dp, dz, n4, t4 = _quartic_census(ell, q, window4)

    window6 = guaranteed_weil_window(ell, q)
    slabs = list(_box(ell))
    job = lambda a: _sextic_slab(ell, q, a, include_degree6, window6)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(job, slabs))
    else:
        parts = [job(a) for a in slabs]
    m = sum(p[0] for p in parts)
    w_ = sum(p[1] for p in parts)

    report = CensusReport(ell, q, dm, dp, dz, n4, t4, m, w_)
    if include_degree6:
        report.d6_star_minus = sum(p[2] for p in parts)
        report.r6 = sum(p[3] for p in parts)
    if ell > 3:
        report.d4_minus_formula = d4(-1, ell, q)
        report.d4_plus_formula = d4(1, ell, q)
        report.n4_bound, report.t4_bound, report.quartic_equality = n4_t4_bounds(ell, q)
        report.m_formula = m_formula(ell, q)
        report.w_formula = w_formula(ell, q)
        report.d6_lower = d6_lower(ell, q)
        report.r6_upper = r6_upper(ell, q)
        report.margin = margin(ell, q)
    return report
