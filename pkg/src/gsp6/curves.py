"""Genus-3 curve equations, smoothness, point counting over F_{q^r} and
recovery of the Frobenius polynomial from point counts.

A hyperelliptic equation y^2 = g(x) is stored through the coefficients of
g (terms with j = 0); a plane quartic f(x, y) = 0 through all of its terms.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ff import PrimeField, UniPoly, count_roots, ext_field_build, is_prime, quad_char
from .weil import (
    WeilSextic,
    is_irreducible_mod,
    is_ordinary,
    is_weil_sextic_exact,
    twist,
)

__all__ = [
    "HYPERELLIPTIC",
    "QUARTIC",
    "CurveEquation",
    "PointCounts",
    "CurveNotFound",
    "InconsistentCounts",
    "parse_poly",
    "is_smooth_hyperelliptic",
    "is_smooth_quartic",
    "is_smooth",
    "brute_singular_scan",
    "singular_closure_scan",
    "smooth_quartics_mask",
    "smooth_quartic_table",
    "quartic_coeff_vector",
    "search_admissible",
    "count_points",
    "point_counts",
    "naive_count_points",
    "frobenius_from_counts",
    "predicted_counts",
    "accepts",
    "evaluate_candidate",
    "candidates",
    "curve_search",
    "SEARCH_WHITELIST",
]

HYPERELLIPTIC = "hyperelliptic"
QUARTIC = "quartic"

# (ell, q) pairs outside q > 1.82 ell^2 with ell >= 13 for which a suitable
# Frobenius polynomial is known to exist.
SEARCH_WHITELIST = frozenset({(3, 19), (5, 47), (7, 97), (11, 223)})


class CurveNotFound(LookupError):
    pass


class InconsistentCounts(ValueError):
    pass


_TERM = re.compile(r"^(\d*)(?:(?<=\d)\*(?=[xy]))?((?:[xy](?:\^\d+)?(?:\*(?=[xy]))?)*)$")


def parse_poly(text: str) -> dict[tuple[int, int], int]:
    """Parse a sum of terms like ``3*x^2*y - y^4 + 7`` into {(i, j): c}."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    terms: dict[tuple[int, int], int] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM.match(body)
        if not m:
            raise ValueError(f"cannot parse term {body!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        i = j = 0
        for var, exp in re.findall(r"([xy])(?:\^(\d+))?", m.group(2)):
            e = int(exp) if exp else 1
            if var == "x":
                i += e
            else:
                j += e
        if not m.group(1) and not m.group(2):
            raise ValueError(f"cannot parse term {body!r}")
        c = coeff if sign == "+" else -coeff
        terms[(i, j)] = terms.get((i, j), 0) + c
    return {k: v for k, v in terms.items() if v}


@dataclass(frozen=True)
class CurveEquation:
    kind: str
    terms: tuple  # sorted ((i, j), c) pairs, c != 0 (reduced into [0, q) over F_q)
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in (HYPERELLIPTIC, QUARTIC):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        raw = dict(self.terms) if not isinstance(self.terms, dict) else self.terms
        clean = {}
        for (i, j), c in raw.items():
            c = int(c)
            if self.modulus is not None:
                c %= self.modulus
            if c:
                clean[(int(i), int(j))] = c
        if self.kind == HYPERELLIPTIC:
            if any(j for _, j in clean):
                raise ValueError("hyperelliptic terms store g(x) and must have j = 0")
            deg = max((i for i, _ in clean), default=-1)
            if deg not in (7, 8):
                raise ValueError(f"g(x) must have degree 7 or 8, got {deg}")
        else:
            if any(i + j > 4 for i, j in clean):
                raise ValueError("quartic terms must have total degree <= 4")
            if not any(i + j == 4 for i, j in clean):
                raise ValueError("quartic must have total degree exactly 4")
        object.__setattr__(self, "terms", tuple(sorted(clean.items())))

    # -- constructors -------------------------------------------------------
    @classmethod
    def hyperelliptic(cls, g, modulus=None):
        """y^2 = g(x); g given lowest degree first or as a string."""
        if isinstance(g, str):
            t = parse_poly(g)
            if any(j for _, j in t):
                raise ValueError("g must be a polynomial in x")
            return cls(HYPERELLIPTIC, t, modulus)
        return cls(HYPERELLIPTIC, {(i, 0): c for i, c in enumerate(g)}, modulus)

    @classmethod
    def quartic(cls, f, modulus=None):
        if isinstance(f, str):
            f = parse_poly(f)
        return cls(QUARTIC, dict(f), modulus)

    # -- views ----------------------------------------------------------------
    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.terms)

    def g_coeffs(self) -> list[int]:
        if self.kind != HYPERELLIPTIC:
            raise TypeError("not a hyperelliptic equation")
        d = self.as_dict()
        deg = max(i for i, _ in d)
        return [d.get((i, 0), 0) for i in range(deg + 1)]

    @property
    def degree(self) -> int:
        if self.kind == HYPERELLIPTIC:
            return max(i for (i, _), _ in self.terms)
        return 4

    def f_terms(self) -> dict[tuple[int, int], int]:
        """Terms of f(x, y) (for hyperelliptic: y^2 - g(x))."""
        if self.kind == QUARTIC:
            return self.as_dict()
        out = {(i, 0): -c for (i, _), c in self.terms}
        out[(0, 2)] = 1
        if self.modulus is not None:
            out = {k: v % self.modulus for k, v in out.items()}
        return out

    def constant_term(self) -> int:
        """f(0, 0)."""
        return self.f_terms().get((0, 0), 0)

    def reduce(self, q: int) -> "CurveEquation":
        return CurveEquation(self.kind, self.as_dict(), q)

    def lift(self) -> "CurveEquation":
        """Forget the modulus (coefficients are kept as stored)."""
        return CurveEquation(self.kind, self.as_dict(), None)

    def __str__(self):
        parts = []
        for (i, j), c in sorted(self.terms, key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
            mono = "*".join(
                ([f"x^{i}" if i > 1 else "x"] if i else []) + ([f"y^{j}" if j > 1 else "y"] if j else [])
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        body = " + ".join(parts).replace("+ -", "- ")
        ring = f" over F_{self.modulus}" if self.modulus else ""
        if self.kind == HYPERELLIPTIC:
            return f"y^2 = {body}{ring}"
        return f"{body} = 0{ring}"

    # -- serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "modulus": self.modulus,
            "terms": [{"i": i, "j": j, "c": str(c)} for (i, j), c in self.terms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "CurveEquation":
        terms = {}
        for t in d["terms"]:
            key = (int(t["i"]), int(t["j"]))
            terms[key] = terms.get(key, 0) + int(t["c"])
        mod = d.get("modulus")
        return cls(d["kind"], terms, int(mod) if mod is not None else None)

    @classmethod
    def from_json(cls, s: str) -> "CurveEquation":
        return cls.from_dict(json.loads(s))


@dataclass(frozen=True)
class PointCounts:
    q: int
    N1: int
    N2: int
    N3: int

    def __post_init__(self):
        for r, n in enumerate((self.N1, self.N2, self.N3), start=1):
            # N_r <= q^r + 1 + 6 q^(r/2), checked as (N_r - q^r - 1)^2 <= 36 q^r
            slack = n - self.q**r - 1
            if n < 0 or (slack > 0 and slack * slack > 36 * self.q**r):
                raise ValueError(f"N{r} = {n} violates the Weil bound")


# -- smoothness --------------------------------------------------------------

def _field_of(e: CurveEquation, q: int | None = None) -> int:
    q = q if q is not None else e.modulus
    if q is None:
        raise ValueError("curve has no finite-field modulus")
    if q % 2 == 0 or not is_prime(q):
        raise ValueError(f"q must be an odd prime, got {q}")
    return q


def is_smooth_hyperelliptic(e: CurveEquation) -> bool:
    if e.kind != HYPERELLIPTIC:
        raise TypeError("not a hyperelliptic equation")
    q = _field_of(e)
    g = UniPoly(PrimeField(q), tuple(e.g_coeffs()))
    if g.degree not in (7, 8):
        return False
    return g.gcd(g.derivative()).degree == 0


def _monomials(deg: int) -> list[tuple[int, int, int]]:
    return [(i, j, deg - i - j) for i in range(deg, -1, -1) for j in range(deg - i, -1, -1)]


def _homogeneous(e: CurveEquation) -> dict[tuple[int, int, int], int]:
    return {(i, j, 4 - i - j): c for (i, j), c in e.f_terms().items()}


def _partials(F: dict, q: int) -> list[dict]:
    out = []
    for v in range(3):
        d = {}
        for mono, c in F.items():
            if mono[v]:
                m = list(mono)
                m[v] -= 1
                val = c * mono[v] % q
                if val:
                    d[tuple(m)] = val
        out.append(d)
    return out


_MONO7 = {m: k for k, m in enumerate(_monomials(7))}
_MONO4 = _monomials(4)
_MONO4_INDEX = {m: k for k, m in enumerate(_MONO4)}


def _macaulay_template():
    """Entry (row, col) of the degree-7 Macaulay matrix of the partials is
    coeff[src] * mult, rows indexed by (partial, degree-4 multiplier)."""
    src = np.full((45, 36), -1, dtype=np.int64)
    mult = np.zeros((45, 36), dtype=np.int64)
    row = 0
    for v in range(3):
        for mono in _MONO4:
            for k, fm in enumerate(_MONO4):
                if not fm[v]:
                    continue
                d = list(fm)
                d[v] -= 1
                col = _MONO7[(d[0] + mono[0], d[1] + mono[1], d[2] + mono[2])]
                src[row, col] = k
                mult[row, col] = fm[v]
            row += 1
    return src, mult


_MAC_SRC, _MAC_MULT = _macaulay_template()


def quartic_coeff_vector(e: CurveEquation) -> np.ndarray:
    """Coefficients of the homogenization in the order of ``_MONO4``."""
    vec = np.zeros(15, dtype=np.int64)
    for m, c in _homogeneous(e).items():
        vec[_MONO4_INDEX[m]] = c
    return vec


def smooth_quartics_mask(coeffs: np.ndarray, q: int) -> np.ndarray:
    """Vectorised :func:`is_smooth_quartic` over rows of 15 coefficients."""
    from . import _kernels

    coeffs = np.ascontiguousarray(np.asarray(coeffs, dtype=np.int64) % q)
    return _kernels.macaulay_smooth_many(coeffs, _MAC_SRC, _MAC_MULT, q)


def _monomial_symmetries(q: int):
    """Coordinate changes X_i -> lam_i X_s(i) together with F -> mu F."""
    perms, muls = [], []
    units = range(1, q)
    for sigma in itertools.permutations(range(3)):
        for lam in itertools.product(units, repeat=3):
            for mu in units:
                perm, mul = [], []
                for m in _MONO4:
                    image = [0, 0, 0]
                    for i in range(3):
                        image[sigma[i]] = m[i]
                    perm.append(_MONO4_INDEX[tuple(image)])
                    mul.append(mu * pow(lam[0], m[0], q) * pow(lam[1], m[1], q)
                               * pow(lam[2], m[2], q) % q)
                perms.append(perm)
                muls.append(mul)
    return np.array(perms, dtype=np.int64), np.array(muls, dtype=np.int64)


def smooth_quartic_table(q: int = 3, max_entries: int = 20_000_000) -> np.ndarray:
    """Smoothness of all q^15 ternary quartic forms, indexed by base-q digits
    in the order of ``_MONO4``.  Only the zero form and lower-degree
    leftovers are meaningless entries; they come out as not smooth."""
    from . import _kernels

    if q**15 > max_entries:
        raise ValueError(f"{q}^15 forms exceed the table limit")
    perms, muls = _monomial_symmetries(q)
    return _kernels.macaulay_smooth_table(q, _MAC_SRC, _MAC_MULT, perms, muls)


def is_smooth_quartic(e: CurveEquation) -> bool:
    """No singular point over the algebraic closure of F_q.

    The three partial derivatives of F(X, Y, Z) are ternary cubics.  They
    have a common projective zero iff they fail to span all 36 monomials of
    degree 7: three cubics without common zero form a complete intersection
    whose quotient ring vanishes from degree 7 on, while a common zero keeps
    every graded piece nonzero.  With q odd, Euler's relation puts F in the
    ideal of its partials.
    """
    if e.kind != QUARTIC:
        raise TypeError("not a quartic equation")
    q = _field_of(e)
    return bool(smooth_quartics_mask(quartic_coeff_vector(e)[None, :], q)[0])


def is_smooth(e: CurveEquation) -> bool:
    if e.kind == HYPERELLIPTIC:
        return is_smooth_hyperelliptic(e)
    return is_smooth_quartic(e)


# -- vectorised field arithmetic for the enumeration oracles ----------------------

class _VecField:
    def __init__(self, q: int, r: int):
        self.K = ext_field_build(q, r)
        self.q, self.r = q, r
        self.red = np.array(self.K._red, dtype=np.int64)

    def all_elements(self) -> np.ndarray:
        n = self.q ** self.r
        idx = np.arange(n, dtype=np.int64)
        return np.stack([(idx // self.q**k) % self.q for k in range(self.r)], axis=1)

    def mul(self, A, B):
        q, r = self.q, self.r
        prod = np.zeros(A.shape[:-1] + (2 * r - 1,), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                prod[..., i + j] += A[..., i] * B[..., j] % q
        out = np.zeros(A.shape, dtype=np.int64)
        for k in range(2 * r - 1):
            pk = prod[..., k] % q
            for j in range(r):
                if self.red[k, j]:
                    out[..., j] += pk * self.red[k, j]
        return out % q

    def powers(self, A, n):
        out = [np.zeros_like(A)]
        out[0][..., 0] = 1
        for _ in range(n):
            out.append(self.mul(out[-1], A))
        return out


def _eval_homogeneous(VF, poly: dict, pw):
    """Evaluate a ternary form with F_q coefficients at points given by powers."""
    X, Y, Z = pw
    first = X[0]
    acc = np.zeros_like(first)
    for (i, j, k), c in poly.items():
        acc = (acc + c * VF.mul(VF.mul(X[i], Y[j]), Z[k])) % VF.q
    return acc


def _projective_points(VF):
    E = VF.all_elements()
    n = E.shape[0]
    one = np.zeros((1, VF.r), dtype=np.int64)
    one[0, 0] = 1
    zero = np.zeros((1, VF.r), dtype=np.int64)
    # [x : y : 1]
    xs = np.repeat(E, n, axis=0)
    ys = np.tile(E, (n, 1))
    zs = np.repeat(one, n * n, axis=0)
    # [x : 1 : 0] and [1 : 0 : 0]
    xs = np.concatenate([xs, E, one])
    ys = np.concatenate([ys, np.repeat(one, n, axis=0), zero])
    zs = np.concatenate([zs, np.repeat(zero, n, axis=0), zero])
    return xs, ys, zs


SCAN_GUARD = 2000


@lru_cache(maxsize=8)
def _scan_tables(q: int, r: int):
    """Index triples of P^2(F_{q^r}) and a table of element powers 0..4."""
    VF = _VecField(q, r)
    n = q**r
    E = VF.all_elements()
    P = np.zeros((n, 5, 3), dtype=np.int64)
    for d, pw in enumerate(VF.powers(E, 4)):
        P[:, d, :r] = pw
    idx = np.arange(n, dtype=np.int64)
    one = 1  # index of the element 1
    pts = np.concatenate([
        np.stack([np.repeat(idx, n), np.tile(idx, n), np.full(n * n, one)], axis=1),
        np.stack([idx, np.full(n, one), np.zeros(n, dtype=np.int64)], axis=1),
        np.array([[one, 0, 0]], dtype=np.int64),
    ])
    return pts, P


def _forms_array(polys: list[dict]) -> np.ndarray:
    width = max(len(p) for p in polys) + 1
    out = np.full((len(polys), width, 4), -1, dtype=np.int64)
    for f, poly in enumerate(polys):
        for t, ((i, j, k), c) in enumerate(sorted(poly.items())):
            out[f, t] = (i, j, k, c)
    return out


def brute_singular_scan(e: CurveEquation, r: int, guard: int = SCAN_GUARD) -> list:
    """All points of P^2(F_{q^r}) where F and its three partials vanish.

    Points come back as coordinate triples, each coordinate an r-tuple over
    F_q (lowest power of the generator first).
    """
    from . import _kernels

    q = _field_of(e)
    if r < 1 or q**r > guard:
        raise ValueError(f"q^r = {q**r} exceeds the scan guard {guard}")
    F = {m: c % q for m, c in _homogeneous(e).items() if c % q}
    polys = [F] + [p for p in _partials(F, q) if p]
    VF = _VecField(q, r)
    if r <= 3:
        pts, P = _scan_tables(q, r)
        _, red, _, _ = _kernel_tables(q, r)
        n = q**r
        forms = _forms_array(polys)
        C = np.zeros((5, 5), dtype=np.int64)
        for (i, j, _), c in F.items():
            C[i, j] = c
        affine = _kernels.singular_affine(n, P, C, forms[1:], red, q)
        mask = np.concatenate([affine, _kernels.singular_mask(pts[n * n:], P, forms, red, q)])
        E = VF.all_elements()
        return [tuple(tuple(int(v) for v in E[i]) for i in pts[k]) for k in np.nonzero(mask)[0]]
    # larger extensions: plain vectorised evaluation
    xs, ys, zs = _projective_points(VF)
    mask = np.ones(xs.shape[0], dtype=bool)
    for s in range(0, xs.shape[0], 100_000):
        sl = slice(s, s + 100_000)
        pw = tuple(VF.powers(a[sl], 4) for a in (xs, ys, zs))
        for poly in polys:
            mask[sl] &= ~_eval_homogeneous(VF, poly, pw).any(axis=1)
    return [
        (tuple(int(v) for v in xs[k]), tuple(int(v) for v in ys[k]), tuple(int(v) for v in zs[k]))
        for k in np.nonzero(mask)[0]
    ]


def singular_closure_scan(e: CurveEquation, guard: int = 10**4) -> bool:
    """True when some singular point turns up over F_{q^r} for r <= 4.

    A singular plane quartic always has a singular point over such a field
    (the finitely many singular points of a reduced quartic fall into
    Frobenius orbits of size at most four), so this is a complete, if slow,
    smoothness oracle.
    """
    q = _field_of(e)
    return any(brute_singular_scan(e, r, guard) for r in (3, 4, 2, 1) if q**r <= guard)


# -- point counting -------------------------------------------------------------

@lru_cache(maxsize=None)
def _kernel_tables(q: int, r: int):
    K = ext_field_build(q, r)
    red = np.zeros((5, 3), dtype=np.int64)
    for k in range(5):
        if k < 2 * r - 1:
            red[k, :r] = K._red[k]
    frob = np.zeros((3, 3), dtype=np.int64)
    for j in range(r):
        tj = K.pow(K.gen(), j) if r > 1 else K.one
        img = K.frobenius(tj)
        frob[:r, j] = img
    leg = np.array([quad_char(PrimeField(q), v) for v in range(q)], dtype=np.int64)
    return K, red, frob, leg


def _default_threads(threads):
    if threads is None:
        threads = int(os.environ.get("GSP6_THREADS", "1"))
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def _split(n: int, parts: int):
    step = -(-n // parts)
    return [(s, min(s + step, n)) for s in range(0, n, step)]


def _infinity_count(e: CurveEquation, q: int, r: int) -> int:
    K = ext_field_build(q, r)
    if e.kind == HYPERELLIPTIC:
        g = e.g_coeffs()
        if len(g) - 1 == 7:
            return 1
        return 1 + quad_char(K, K.from_int(g[8]))
    f = e.f_terms()
    top = [f.get((i, 4 - i), 0) % q for i in range(5)]  # coefficient of X^i Y^(4-i)
    pts = count_roots(UniPoly(K, tuple(K.from_int(c) for c in top)))
    if top[4] == 0:  # [1 : 0 : 0]
        pts += 1
    return pts


def count_points(e: CurveEquation, r: int, threads: int | None = None,
                 check_smooth: bool = True) -> int:
    """Number of F_{q^r}-points of the smooth projective model of e."""
    from . import _kernels

    q = _field_of(e)
    if r not in (1, 2, 3):
        raise ValueError("r must be 1, 2 or 3")
    if check_smooth and not is_smooth(e):
        raise ValueError("curve is not smooth")
    threads = _default_threads(threads)
    K, red, frob, leg = _kernel_tables(q, r)
    n = q**r
    if e.kind == HYPERELLIPTIC:
        g = np.array([c % q for c in e.g_coeffs()], dtype=np.int64)

        def job(span):
            return _kernels.hyperelliptic_affine(span[0], span[1], q, r, red, frob, g, leg), 0
    else:
        C = np.zeros((5, 5), dtype=np.int64)
        for (i, j), c in e.f_terms().items():
            C[i, j] = c % q

        def job(span):
            return _kernels.quartic_affine(span[0], span[1], q, r, red, frob, C)

    spans = _split(n, threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(job, spans))
    else:
        results = [job(s) for s in spans]
    affine = sum(int(a) for a, _ in results)
    if any(b for _, b in results):
        raise AssertionError("f(x0, y) vanishes identically: curve has a line component")
    return affine + _infinity_count(e, q, r)


def point_counts(e: CurveEquation, threads: int | None = None,
                 check_smooth: bool = True) -> PointCounts:
    q = _field_of(e)
    if check_smooth and not is_smooth(e):
        raise ValueError("curve is not smooth")
    return PointCounts(q, *(count_points(e, r, threads, check_smooth=False) for r in (1, 2, 3)))


def naive_count_points(e: CurveEquation, r: int, guard: int = 10**4) -> int:
    """Enumeration oracle independent of the counting kernels.

    Hyperelliptic: affine solutions of y^2 = g(x) via a table of squares,
    plus the points w^2 = t^8 g(1/t) at t = 0 of the second chart.
    Quartic: every point of P^2(F_{q^r}) is tested.
    """
    q = _field_of(e)
    n = q**r
    VF = _VecField(q, r)
    E = VF.all_elements()
    if e.kind == HYPERELLIPTIC:
        if n > guard:
            raise ValueError("field too large for the naive oracle")
        code = lambda A: sum(A[..., k] * q**k for k in range(r))  # noqa: E731
        sq = np.bincount(code(VF.mul(E, E)), minlength=n)
        g = e.g_coeffs()
        acc = np.zeros_like(E)
        for c in reversed(g):
            acc = VF.mul(acc, E)
            acc[:, 0] = (acc[:, 0] + c) % q
        affine = int(sq[code(acc)].sum())
        # chart at infinity: t = 0 leaves w^2 = coefficient of x^8
        lead = np.zeros((1, r), dtype=np.int64)
        lead[0, 0] = g[8] % q if len(g) == 9 else 0
        return affine + int(sq[code(lead)][0])
    if n * n > guard * guard // 20:
        raise ValueError("field too large for the naive quartic oracle")
    F = {m: c % q for m, c in _homogeneous(e).items() if c % q}
    xs, ys, zs = _projective_points(VF)
    total = 0
    chunk = 200_000
    for s in range(0, xs.shape[0], chunk):
        pw = tuple(VF.powers(a[s:s + chunk], 4) for a in (xs, ys, zs))
        val = _eval_homogeneous(VF, F, pw)
        total += int((~val.any(axis=1)).sum())
    return total


# -- Frobenius polynomial from counts ---------------------------------------

def frobenius_from_counts(pc: PointCounts) -> WeilSextic:
    q = pc.q
    s1, s2, s3 = (q**r + 1 - n for r, n in ((1, pc.N1), (2, pc.N2), (3, pc.N3)))
    e1 = s1
    e2, r2 = divmod(e1 * s1 - s2, 2)
    if r2:
        raise InconsistentCounts("inconsistent point counts: 2 e2 is odd")
    e3, r3 = divmod(e2 * s1 - e1 * s2 + s3, 3)
    if r3:
        raise InconsistentCounts("inconsistent point counts: 3 e3 not divisible by 3")
    return WeilSextic(q, -e1, e2, -e3)


def predicted_counts(w: WeilSextic, r: int) -> int:
    e1, e2, e3 = -w.a, w.b, -w.c
    s1 = e1
    s2 = e1 * s1 - 2 * e2
    s3 = e1 * s2 - e2 * s1 + 3 * e3
    return w.q**r + 1 - (s1, s2, s3)[r - 1]


# -- search ---------------------------------------------------------------------

def accepts(w: WeilSextic, ell: int) -> bool:
    return (
        is_ordinary(w)
        and w.a % ell != 0
        and is_irreducible_mod(w, ell)
        and is_weil_sextic_exact(w)
    )


def evaluate_candidate(e: CurveEquation, ell: int, threads: int | None = None):
    """(weil, twist_flag, counts) if the smooth curve e qualifies, else None."""
    if not is_smooth(e):
        return None
    q = e.modulus
    n1 = count_points(e, 1, threads, check_smooth=False)
    if (n1 - q - 1) % ell == 0:  # a = N1 - q - 1
        return None
    n2 = count_points(e, 2, threads, check_smooth=False)
    n3 = count_points(e, 3, threads, check_smooth=False)
    pc = PointCounts(q, n1, n2, n3)
    w = frobenius_from_counts(pc)
    if accepts(w, ell):
        return w, False, pc
    # P(-X) passes exactly when P(X) does; kept for equations realising the twist
    if accepts(twist(w), ell):
        return twist(w), True, pc
    return None


def _centered(q: int):
    yield 0
    for v in range(1, q // 2 + 1):
        yield v
        yield -v


def _sparse_hyperelliptic(q: int):
    seen = set()
    order = list(_centered(q))
    for h in range(q // 2 + 1):
        for s in order:
            for t in order:
                if max(abs(s), abs(t)) == h:
                    seen.add((s, t))
                    yield {(7, 0): 1, (1, 0): s, (0, 0): t}
    # wider supports: one extra middle term
    for h in range(1, q // 2 + 1):
        for k in range(2, 7):
            for u in order:
                if u == 0 or abs(u) > h:
                    continue
                for s in order:
                    for t in order:
                        if max(abs(u), abs(s), abs(t)) == h:
                            yield {(7, 0): 1, (k, 0): u, (1, 0): s, (0, 0): t}


_QUARTIC_MONOS = [(i, j) for d in range(4, -1, -1) for i in range(d, -1, -1) for j in [d - i]]


def _diagonal_index(support) -> int:
    """Index of the lattice spanned by exponent differences in Z^2; 1 means
    no nontrivial diagonal substitution x -> s x, y -> t y fixes the curve."""
    base = support[0]
    diffs = [(i - base[0], j - base[1]) for i, j in support[1:]]
    g = 0
    for (a, b), (c, d) in itertools.combinations(diffs, 2):
        g = math.gcd(g, a * d - b * c)
    return g


def _sparse_quartic(q: int):
    """Supports by size with coefficients +-1 (first coefficient 1); in each
    size, supports without diagonal symmetry come before the rest."""
    for size in range(3, len(_QUARTIC_MONOS) + 1):
        supports = [s for s in itertools.combinations(_QUARTIC_MONOS, size)
                    if any(i + j == 4 for i, j in s)]
        supports.sort(key=lambda s: _diagonal_index(s) != 1)
        for support in supports:
            for signs in itertools.product((1, -1), repeat=size - 1):
                yield dict(zip(support, (1,) + signs))


def _random_candidates(q: int, kind: str, seed: int):
    rng = random.Random(seed)
    while True:
        if kind == HYPERELLIPTIC:
            deg = rng.choice((7, 8))
            g = {(i, 0): rng.randrange(q) for i in range(deg)}
            g[(deg, 0)] = rng.randrange(1, q)
            yield g
        else:
            f = {m: rng.randrange(q) for m in _QUARTIC_MONOS}
            if any(f[m] for m in _QUARTIC_MONOS if sum(m) == 4):
                yield f


def candidates(q: int, kind: str, strategy: str, seed: int = 0):
    """Deterministic stream of candidate equations over F_q."""
    if strategy in ("sparse", "sparse-hyperelliptic"):
        gen = _sparse_hyperelliptic(q) if kind == HYPERELLIPTIC else _sparse_quartic(q)
    elif strategy == "random":
        gen = _random_candidates(q, kind, seed)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    for terms in gen:
        try:
            yield CurveEquation(kind, terms, q)
        except ValueError:
            continue


def search_admissible(ell: int, q: int) -> bool:
    return 100 * q > 182 * ell * ell or (ell, q) in SEARCH_WHITELIST


def curve_search(ell: int, q: int, kind: str = HYPERELLIPTIC, strategy: str = "sparse",
                 seed: int = 0, limit: int = 10_000, threads: int | None = None,
                 start: int = 0):
    """First candidate (in the strategy's order) whose Frobenius polynomial is
    ordinary, Weil, irreducible mod ell and has trace prime to ell.

    Returns (equation over F_q, WeilSextic, twist_flag, index of the hit).
    """
    if not search_admissible(ell, q):
        raise ValueError(f"q = {q} is outside the admissible range for ell = {ell}")
    if q % 2 == 0 or q == ell or not is_prime(q) or not is_prime(ell):
        raise ValueError("ell and q must be distinct primes with q odd")
    stream = candidates(q, kind, strategy, seed)
    for idx, e in enumerate(itertools.islice(stream, start, start + limit), start=start):
        hit = evaluate_candidate(e, ell, threads)
        if hit is not None:
            w, flag, _ = hit
            return e, w, flag, idx
    raise CurveNotFound(f"no suitable curve among {limit} candidates")
