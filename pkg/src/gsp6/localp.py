"""Congruence templates at an auxiliary prime p forcing a single node in the
reduction, and a checker for integral equations against them.

Type H:  g(x) = x (x - p) m(x) with m squarefree mod p and m(0) != 0 mod p,
         so y^2 = g(x) reduces to y^2 = x^2 m(x) with one node at the origin.
Type Q:  f = x^4 + y^4 + x^2 - y^2 + p x, reducing to the nodal quartic
         x^2 - y^2 + x^4 + y^4.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .curves import HYPERELLIPTIC, QUARTIC, CurveEquation
from .ff import PrimeField, UniPoly, is_prime

__all__ = [
    "TypeHTemplate",
    "TypeQTemplate",
    "LocalPReport",
    "make_fp_typeH",
    "make_fp_typeQ",
    "make_fp",
    "check_localp",
    "default_m",
    "valuation",
    "template_from_dict",
]

Q_TEMPLATE_MOD_P = {(4, 0): 1, (0, 4): 1, (2, 0): 1, (0, 2): -1}


def _check_odd_prime(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def valuation(n: int, p: int) -> float:
    """p-adic valuation; infinite for 0."""
    if n == 0:
        return float("inf")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trim(c: list[int]) -> list[int]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _nodal_cofactor_ok(m_mod_p: list[int], p: int) -> bool:
    """m mod p squarefree with nonzero constant term (lowest degree first)."""
    m = _trim([c % p for c in m_mod_p])
    if len(m) < 2 or m[0] == 0:
        return False
    return UniPoly(PrimeField(p), tuple(m)).is_squarefree()


@dataclass(frozen=True)
class TypeHTemplate:
    p: int
    m: tuple  # integer coefficients, lowest degree first

    def __post_init__(self):
        _check_odd_prime(self.p)
        m = tuple(int(c) for c in _trim(list(self.m)))
        if len(m) - 1 not in (5, 6):
            raise ValueError("m must have degree 5 or 6")
        if m[-1] % self.p == 0:
            raise ValueError("leading coefficient of m must be a unit mod p")
        if not _nodal_cofactor_ok(list(m), self.p):
            raise ValueError("m mod p must be squarefree with nonzero roots")
        object.__setattr__(self, "m", m)

    @property
    def kind(self) -> str:
        return "H"

    def g(self) -> list[int]:
        return _poly_mul([0, -self.p, 1], list(self.m))

    def to_dict(self) -> dict:
        return {"type": "H", "p": self.p, "m": [str(c) for c in self.m]}


@dataclass(frozen=True)
class TypeQTemplate:
    p: int

    def __post_init__(self):
        _check_odd_prime(self.p)

    @property
    def kind(self) -> str:
        return "Q"

    def terms(self) -> dict[tuple[int, int], int]:
        return {(4, 0): 1, (0, 4): 1, (2, 0): 1, (0, 2): -1, (1, 0): self.p}

    def to_dict(self) -> dict:
        return {"type": "Q", "p": self.p}


def template_from_dict(d: dict):
    if d["type"] == "H":
        return TypeHTemplate(int(d["p"]), tuple(int(c) for c in d["m"]))
    if d["type"] == "Q":
        return TypeQTemplate(int(d["p"]))
    raise ValueError(f"unknown template type {d['type']!r}")


def make_fp_typeH(t: TypeHTemplate) -> CurveEquation:
    return CurveEquation.hyperelliptic(t.g())


def make_fp_typeQ(t: TypeQTemplate) -> CurveEquation:
    return CurveEquation.quartic(t.terms())


def make_fp(t) -> CurveEquation:
    return make_fp_typeH(t) if isinstance(t, TypeHTemplate) else make_fp_typeQ(t)


def default_m(p: int) -> tuple:
    """(x-1)...(x-5) when its roots stay distinct and nonzero mod p; otherwise
    the lexicographically first monic quintic (coefficients in [0, p), top
    coefficient first) that is squarefree mod p with m(0) != 0."""
    _check_odd_prime(p)
    m = [1]
    for k in range(1, 6):
        m = _poly_mul(m, [-k, 1])
    if p > 5:
        return tuple(m)
    for n in range(p**5):
        digits = []
        for _ in range(5):
            n, d = divmod(n, p)
            digits.append(d)
        cand = digits + [1]  # the x^4 coefficient is the most significant digit
        if _nodal_cofactor_ok(cand, p):
            return tuple(cand)
    raise AssertionError("no squarefree quintic found")  # unreachable


@dataclass
class LocalPReport:
    type: str
    p: int
    congruence_ok: bool
    valuation_ok: bool
    node_shape_ok: bool
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.congruence_ok and self.valuation_ok and self.node_shape_ok

    def to_dict(self) -> dict:
        return {
            "type": self.type,
            "p": self.p,
            "congruence_ok": self.congruence_ok,
            "valuation_ok": self.valuation_ok,
            "node_shape_ok": self.node_shape_ok,
            "passed": self.passed,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "LocalPReport":
        return cls(d["type"], int(d["p"]), d["congruence_ok"], d["valuation_ok"],
                   d["node_shape_ok"], d.get("details", {}))


def _divide_by_x_xminusp(g: list[int], p: int) -> list[int] | None:
    """Cofactor of x(x - p) in g modulo p^2, or None if it does not divide."""
    mod = p * p
    rem = [c % mod for c in g]
    n = len(rem) - 1
    quot = [0] * (n - 1)
    # divide by x^2 - p x, which is monic
    for k in range(n, 1, -1):
        c = rem[k]
        quot[k - 2] = c
        rem[k] = 0
        rem[k - 1] = (rem[k - 1] + c * p) % mod
    if rem[0] % mod or rem[1] % mod:
        return None
    return quot


def _coefficient_report(f: dict, expected: dict, modulus: int) -> tuple[bool, dict]:
    ok = True
    rows = {}
    for key in sorted(set(f) | set(expected)):
        got = f.get(key, 0) % modulus
        want = expected.get(key, 0) % modulus
        rows[f"{key[0]},{key[1]}"] = {"residue": got, "expected": want, "ok": got == want}
        ok &= got == want
    return ok, rows


def check_localp(f: CurveEquation, p: int, t="infer") -> LocalPReport:
    """Check f against the type H or Q conditions at p.

    ``t`` is a template or "infer"; inference reads the type off the kind of
    f and, for type H, recovers m as the cofactor of x(x - p) modulo p^2.
    """
    _check_odd_prime(p)
    if f.modulus is not None:
        raise ValueError("check_localp expects an equation over the integers")
    if t != "infer":
        expected_kind = HYPERELLIPTIC if isinstance(t, TypeHTemplate) else QUARTIC
        if f.kind != expected_kind:
            raise ValueError(f"template type {t.kind} does not match a {f.kind} equation")
        if t.p != p:
            raise ValueError(f"template prime {t.p} differs from p = {p}")

    const = f.constant_term()
    valuation_ok = const == 0 or valuation(const, p) > 2
    details: dict = {"f00": str(const), "v_p_f00": None if const == 0 else valuation(const, p)}

    if f.kind == HYPERELLIPTIC:
        g = f.g_coeffs()
        if t == "infer":
            m = _divide_by_x_xminusp(g, p)
            details["inferred_m"] = None if m is None else [str(c) for c in m]
            if m is None or len(_trim([c % p for c in m])) - 1 not in (5, 6):
                congruence_ok = False
                expected = None
            else:
                congruence_ok = True
                expected = _poly_mul([0, -p, 1], m)
        else:
            expected = t.g()
        if expected is not None:
            congruence_ok, rows = _coefficient_report(
                {(i, 0): c for i, c in enumerate(g)},
                {(i, 0): c for i, c in enumerate(expected)}, p * p)
            details["mod_p2"] = rows
        # reduction must be x^2 times a squarefree cofactor prime to x
        gbar = _trim([c % p for c in g])
        node_shape_ok = (
            len(gbar) > 3 and gbar[0] == 0 and gbar[1] == 0 and gbar[2] != 0
            and _nodal_cofactor_ok(gbar[2:], p)
        )
        return LocalPReport("H", p, congruence_ok, valuation_ok, node_shape_ok, details)

    terms = f.as_dict()
    tmpl = TypeQTemplate(p).terms()
    congruence_ok, rows = _coefficient_report(terms, tmpl, p * p)
    details["mod_p2"] = rows
    node_shape_ok, _ = _coefficient_report(terms, Q_TEMPLATE_MOD_P, p)
    return LocalPReport("Q", p, congruence_ok, valuation_ok, node_shape_ok, details)
