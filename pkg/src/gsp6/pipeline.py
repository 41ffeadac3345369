"""From a target (ell, p, q) to an integral genus-3 equation with a
re-verifiable certificate that its mod-ell Galois image is all of GSp_6.

The steps: find admissible Frobenius sextics, find a curve over F_q
realising one, glue it to a nodal template at p by coefficientwise CRT
modulo p^3 q, and record every hypothesis check in a certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .curves import (
    HYPERELLIPTIC,
    QUARTIC,
    CurveEquation,
    curve_search,
    frobenius_from_counts,
    is_smooth,
    point_counts,
    search_admissible,
)
from .ff import is_prime
from .localp import (
    TypeHTemplate,
    TypeQTemplate,
    check_localp,
    default_m,
    make_fp,
    template_from_dict,
)
from .weil import (
    WeilSextic,
    guaranteed_weil_window,
    is_absolutely_simple,
    is_irreducible_mod,
    is_ordinary,
    is_weil_sextic_exact,
    twist,
)

__all__ = [
    "CHECK_NAMES",
    "COMPONENT_GROUP_ORDER",
    "SurjectivityCertificate",
    "CongruenceAudit",
    "search_weil_triples",
    "crt_lift",
    "check_congruence",
    "audit_lift",
    "build_certificate",
    "verify",
    "run_pipeline",
    "q_window_or_whitelist",
]

# Order of the component group at p of the Neron model for either template;
# a property of the templates, recorded rather than recomputed.
COMPONENT_GROUP_ORDER = 2

CHECK_NAMES = (
    "distinct_primes",
    "q_window_or_whitelist",
    "localp_pass",
    "fq_smooth",
    "weil_ordinary",
    "weil_irreducible_mod_ell",
    "trace_nonzero_mod_ell",
    "abs_simple",
    "divisibility_6pqa_phip",
    "congruence_p3",
    "congruence_q",
)


def _box(ell: int) -> range:
    h = (ell - 1) // 2
    return range(-h, h + 1)


def _search_key(t: tuple[int, int, int]):
    return tuple(abs(v) for v in t) + tuple(v < 0 for v in t)


def search_weil_triples(ell: int, q: int, max_results: int | None = None) -> list[tuple[int, int, int]]:
    """Ordinary Weil triples in the box with a != 0 mod ell, irreducible mod
    ell, in order of (|a|, |b|, |c|) with positive signs first."""
    if ell < 3 or not is_prime(ell):
        raise ValueError("ell must be a prime >= 3")
    if q == ell or q % 2 == 0 or not is_prime(q):
        raise ValueError("q must be an odd prime different from ell")
    window = guaranteed_weil_window(ell, q)
    triples = sorted(
        ((a, b, c) for a in _box(ell) for b in _box(ell) for c in _box(ell)),
        key=_search_key,
    )
    out = []
    for a, b, c in triples:
        if a % ell == 0:
            continue
        w = WeilSextic(q, a, b, c)
        if not is_ordinary(w) or not is_irreducible_mod(w, ell):
            continue
        if not (window or is_weil_sextic_exact(w)):
            continue
        out.append((a, b, c))
        if max_results is not None and len(out) >= max_results:
            break
    return out


def _centered(v: int, M: int) -> int:
    v %= M
    return v - M if 2 * v > M else v


def crt_lift(fp: CurveEquation, fq: CurveEquation, p: int, q: int) -> CurveEquation:
    """Coefficientwise CRT: f = fp mod p^3, f = fq mod q, centered mod p^3 q."""
    if fp.kind != fq.kind:
        raise ValueError(f"cannot glue a {fp.kind} equation to a {fq.kind} one")
    if p == q:
        raise ValueError("p and q must differ")
    if p % 2 == 0 or q % 2 == 0 or not is_prime(p) or not is_prime(q):
        raise ValueError("p and q must be odd primes")
    if fp.kind == HYPERELLIPTIC and fp.degree != fq.degree:
        raise ValueError("hyperelliptic templates of different degree cannot be glued")
    P3 = p**3
    M = P3 * q
    inv = pow(P3, -1, q)
    A, B = fp.as_dict(), fq.as_dict()
    terms = {}
    for key in set(A) | set(B):
        a, b = A.get(key, 0), B.get(key, 0)
        # x = a + P3 * t with t = (b - a) / P3 mod q
        terms[key] = _centered(a + P3 * ((b - a) * inv % q), M)
    return CurveEquation(fp.kind, terms, None)


def check_congruence(f: CurveEquation, g: CurveEquation, modulus: int) -> bool:
    """All coefficients over the union of supports agree modulo ``modulus``."""
    if f.kind != g.kind:
        raise ValueError("equations of different kinds")
    A, B = f.as_dict(), g.as_dict()
    return all((A.get(k, 0) - B.get(k, 0)) % modulus == 0 for k in set(A) | set(B))


@dataclass
class CongruenceAudit:
    """Per-monomial comparison of a given integral lift with the classes
    forced by fp (mod p^3) and fq (mod q)."""

    p: int
    q: int
    rows: dict = field(default_factory=dict)

    @property
    def flagged(self) -> list[tuple[int, int]]:
        return sorted(k for k, r in self.rows.items() if not (r["ok_p3"] and r["ok_q"]))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "rows": [
                {"i": i, "j": j, **{k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v)
                                    for k, v in r.items()}}
                for (i, j), r in sorted(self.rows.items())
            ],
            "flagged": [list(k) for k in self.flagged],
        }


def audit_lift(f: CurveEquation, fp: CurveEquation, fq: CurveEquation, p: int, q: int) -> CongruenceAudit:
    expected = crt_lift(fp, fq, p, q).as_dict()
    F, A, B = f.as_dict(), fp.as_dict(), fq.as_dict()
    audit = CongruenceAudit(p, q)
    for key in sorted(set(F) | set(A) | set(B)):
        c = F.get(key, 0)
        audit.rows[key] = {
            "given": c,
            "expected_class": expected.get(key, 0),
            "ok_p3": (c - A.get(key, 0)) % p**3 == 0,
            "ok_q": (c - B.get(key, 0)) % q == 0,
        }
    return audit


def q_window_or_whitelist(ell: int, q: int) -> bool:
    return search_admissible(ell, q)


@dataclass
class SurjectivityCertificate:
    ell: int
    p: int
    q: int
    f: CurveEquation
    fp: CurveEquation
    fq: CurveEquation
    weil: WeilSextic
    twist_flag: bool
    checks: dict
    conclusion: bool
    template: dict | None = None
    phi_p_order: int = COMPONENT_GROUP_ORDER

    def to_dict(self) -> dict:
        return {
            "ell": str(self.ell),
            "p": str(self.p),
            "q": str(self.q),
            "f": self.f.to_dict(),
            "fp": self.fp.to_dict(),
            "fq": self.fq.to_dict(),
            "weil": {k: str(v) for k, v in self.weil.to_dict().items()},
            "twist_flag": self.twist_flag,
            "template": self.template,
            "phi_p_order": str(self.phi_p_order),
            "checks": {k: self.checks[k] for k in CHECK_NAMES},
            "conclusion": self.conclusion,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "SurjectivityCertificate":
        return cls(
            ell=int(d["ell"]),
            p=int(d["p"]),
            q=int(d["q"]),
            f=CurveEquation.from_dict(d["f"]),
            fp=CurveEquation.from_dict(d["fp"]),
            fq=CurveEquation.from_dict(d["fq"]),
            weil=WeilSextic.from_dict(d["weil"]),
            twist_flag=bool(d["twist_flag"]),
            checks={k: bool(v) for k, v in d["checks"].items()},
            conclusion=bool(d["conclusion"]),
            template=d.get("template"),
            phi_p_order=int(d.get("phi_p_order", COMPONENT_GROUP_ORDER)),
        )

    @classmethod
    def from_json(cls, s: str) -> "SurjectivityCertificate":
        return cls.from_dict(json.loads(s))


def _safe(fn) -> bool:
    # a malformed input makes the check fail instead of aborting the audit
    try:
        return bool(fn())
    except (ValueError, TypeError, ArithmeticError):
        return False


def build_certificate(ell: int, p: int, q: int, f: CurveEquation, fp: CurveEquation,
                      fq: CurveEquation, weil: WeilSextic, twist_flag: bool,
                      template=None, threads: int | None = None) -> SurjectivityCertificate:
    primes_ok = all(is_prime(n) and n % 2 == 1 for n in (ell, p, q))
    distinct = primes_ok and len({ell, p, q}) == 3 and ell >= 5

    def localp():
        t = template_from_dict(template) if isinstance(template, dict) else (template or "infer")
        return check_localp(f, p, t).passed

    def fq_ok():
        if fq.modulus != q or weil.q != q or not is_smooth(fq):
            return False
        recovered = frobenius_from_counts(point_counts(fq, threads, check_smooth=False))
        return recovered == (twist(weil) if twist_flag else weil)

    def divisibility():
        return (6 * p * q * weil.a * COMPONENT_GROUP_ORDER) % ell != 0

    checks = {
        "distinct_primes": distinct,
        "q_window_or_whitelist": _safe(lambda: q_window_or_whitelist(ell, q)),
        "localp_pass": _safe(localp),
        "fq_smooth": _safe(fq_ok),
        "weil_ordinary": _safe(lambda: is_ordinary(weil)),
        "weil_irreducible_mod_ell": _safe(lambda: is_irreducible_mod(weil, ell)),
        "trace_nonzero_mod_ell": _safe(lambda: weil.a % ell != 0),
        "abs_simple": _safe(lambda: is_absolutely_simple(weil, ell)),
        "divisibility_6pqa_phip": _safe(divisibility),
        "congruence_p3": _safe(lambda: f.modulus is None and check_congruence(f, fp, p**3)),
        "congruence_q": _safe(lambda: f.modulus is None and check_congruence(f, fq, q)),
    }
    if isinstance(template, (TypeHTemplate, TypeQTemplate)):
        template = template.to_dict()
    return SurjectivityCertificate(ell, p, q, f, fp, fq, weil, twist_flag, checks,
                                   all(checks.values()), template)


def verify(cert: SurjectivityCertificate, threads: int | None = None) -> bool:
    """Recompute every check from the certificate's own data; true only if
    all pass and agree with what the certificate records."""
    if cert.phi_p_order != COMPONENT_GROUP_ORDER:
        return False
    fresh = build_certificate(cert.ell, cert.p, cert.q, cert.f, cert.fp, cert.fq,
                              cert.weil, cert.twist_flag, cert.template, threads)
    return fresh.conclusion and fresh.checks == cert.checks and cert.conclusion


def _template_for(kind: str, p: int, fq: CurveEquation):
    if kind == QUARTIC:
        return TypeQTemplate(p)
    m = list(default_m(p))
    if fq.degree == 8:
        # one more simple nonzero root keeps the node unique
        for k in range(1, p):
            cand = [0] * (len(m) + 1)
            for i, c in enumerate(m):
                cand[i + 1] += c
                cand[i] -= k * c
            try:
                return TypeHTemplate(p, tuple(cand))
            except ValueError:
                continue
        raise ValueError(f"no degree-6 nodal cofactor modulo {p}")
    return TypeHTemplate(p, tuple(m))


def run_pipeline(ell: int, p: int, q: int, kind: str = HYPERELLIPTIC, seed: int = 0,
                 limit: int = 10_000, strategy: str = "sparse",
                 threads: int | None = None) -> SurjectivityCertificate:
    if ell < 5 or not is_prime(ell):
        raise ValueError("ell must be a prime >= 5")
    if p in (2, q, ell) or not is_prime(p):
        raise ValueError("p must be an odd prime different from ell and q")
    if not search_admissible(ell, q):
        raise ValueError(f"q = {q} is neither in the window for ell = {ell} nor whitelisted")
    if not search_weil_triples(ell, q, max_results=1):
        raise ValueError("no admissible Weil sextic in the box")
    fq, weil, twist_flag, _ = curve_search(ell, q, kind, strategy, seed, limit, threads)
    template = _template_for(kind, p, fq)
    fp = make_fp(template)
    f = crt_lift(fp, fq, p, q)
    return build_certificate(ell, p, q, f, fp, fq, weil, twist_flag, template, threads)

