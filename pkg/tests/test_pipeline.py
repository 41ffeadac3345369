import dataclasses
import itertools
import json
import random

import pytest
import sympy

from gsp6.curves import HYPERELLIPTIC, CurveEquation, CurveNotFound
from gsp6.localp import TypeHTemplate, TypeQTemplate, make_fp
from gsp6.pipeline import (
    CHECK_NAMES,
    SurjectivityCertificate,
    audit_lift,
    build_certificate,
    check_congruence,
    crt_lift,
    q_window_or_whitelist,
    run_pipeline,
    search_weil_triples,
    verify,
)
from gsp6.weil import WeilSextic, is_weil_sextic_exact

M5 = (-120, 274, -225, 85, -15, 1)  # (x-1)...(x-5)
LIFTED_G = [25039, -33803, -35995, 27231, -27231, 33804, -14085, 1]
GIVEN_QUARTIC = "x^4 + 486*x^3*y + y^4 + 486*x*y^2 - 485*x^2 + 485*y^2 - 1455*x + 486"


@pytest.fixture(scope="module")
def example_h():
    fp = make_fp(TypeHTemplate(7, M5))
    fq = CurveEquation.hyperelliptic("x^7 + x - 1", 313)
    f = crt_lift(fp, fq, 7, 313)
    return f, fp, fq


@pytest.fixture(scope="module")
def example_cert(example_h):
    f, fp, fq = example_h
    return build_certificate(13, 7, 313, f, fp, fq, WeilSextic(313, 12, 234, 9862), False,
                             TypeHTemplate(7, M5))


# -- Weil triples ------------------------------------------------------------------------

@pytest.mark.parametrize("ell,q,triple", [(5, 47, (1, 1, 1)), (13, 311, (1, 0, 3)),
                                          (3, 19, (1, 0, 1))])
def test_search_contains_examples(ell, q, triple):
    assert triple in search_weil_triples(ell, q)


def test_search_order_and_limit():
    assert search_weil_triples(5, 47, max_results=1) == [(1, 1, 1)]
    full = search_weil_triples(7, 97)
    assert full[:3] == search_weil_triples(7, 97, max_results=3)
    keys = [tuple(abs(v) for v in t) for t in full]
    assert keys == sorted(keys)


@pytest.mark.parametrize("ell,q", [(3, 19), (5, 47), (7, 97)])
def test_search_matches_direct_filter(ell, q):
    x = sympy.Symbol("x")
    h = (ell - 1) // 2
    box = range(-h, h + 1)
    expected = set()
    for a, b, c in itertools.product(box, repeat=3):
        if a % ell == 0 or sympy.gcd(c, q) != 1:
            continue
        w = WeilSextic(q, a, b, c)
        if not sympy.Poly(w.coefficients(), x, modulus=ell).is_irreducible:
            continue
        if is_weil_sextic_exact(w):
            expected.add((a, b, c))
    assert set(search_weil_triples(ell, q)) == expected


def test_search_guards():
    with pytest.raises(ValueError):
        search_weil_triples(5, 5)
    with pytest.raises(ValueError):
        search_weil_triples(4, 47)


def test_window_or_whitelist():
    assert q_window_or_whitelist(13, 313)
    assert q_window_or_whitelist(5, 47)
    assert not q_window_or_whitelist(13, 307)
    assert q_window_or_whitelist(7, 97)
    assert not q_window_or_whitelist(7, 89)


# -- CRT lifting ----------------------------------------------------------------------------

def test_lift_example_h(example_h):
    f, fp, fq = example_h
    assert f.g_coeffs() == LIFTED_G
    assert f.g_coeffs()[6] % 343 == (-22) % 343 and f.g_coeffs()[6] % 313 == 0
    assert check_congruence(f, fp, 343) and check_congruence(f, fq, 313)


def test_lift_example_q():
    fp = make_fp(TypeQTemplate(3))
    fq = CurveEquation.quartic("x^4 + y^3 + x^3*y + x*y^2 + 1", 97)
    f = crt_lift(fp, fq, 3, 97)
    assert f.as_dict()[(1, 0)] == 1164
    assert (1164 - (-1455)) % (27 * 97) == 0
    assert f.as_dict()[(0, 3)] == 486


def test_audit_given_quartic():
    fp = make_fp(TypeQTemplate(3))
    fq3 = CurveEquation.quartic("x^4 + y^3 + x^3*y + x*y^2 + 1", 97)
    given = CurveEquation.quartic(GIVEN_QUARTIC)
    audit = audit_lift(given, fp, fq3, 3, 97)
    rows = audit.rows
    assert rows[(0, 3)]["expected_class"] == 486 and rows[(0, 3)]["given"] == 0
    assert rows[(1, 0)]["ok_p3"] and rows[(1, 0)]["ok_q"]
    # the given y^4 coefficient only fits an f_q containing y^4
    assert audit.flagged == [(0, 3), (0, 4)]
    fq4 = CurveEquation.quartic("x^4 + y^4 + x^3*y + x*y^2 + 1", 97)
    assert audit_lift(given, fp, fq4, 3, 97).flagged == []
    json.dumps(audit.to_dict())


def test_lift_idempotent_on_common_value():
    fp = CurveEquation.hyperelliptic([0, 5, 0, 0, 0, 0, 0, 1])
    f = crt_lift(fp, fp.reduce(11), 5, 11)
    assert f == fp


def test_lift_errors():
    h = CurveEquation.hyperelliptic("x^7 + 1")
    with pytest.raises(ValueError):
        crt_lift(h, CurveEquation.quartic("x^4 + 1", 11), 5, 11)
    with pytest.raises(ValueError):
        crt_lift(h, h.reduce(5), 5, 5)
    with pytest.raises(ValueError):
        crt_lift(h, CurveEquation.hyperelliptic("x^8 + 1", 11), 5, 11)


@pytest.mark.parametrize("seed", range(100))
def test_lift_random_templates(seed):
    rng = random.Random(seed)
    p, q = rng.choice([(3, 97), (5, 47), (7, 313), (11, 19)])
    if rng.random() < 0.5:
        fp = make_fp(TypeQTemplate(p))
        terms = {(i, j): rng.randrange(q) for i in range(5) for j in range(5 - i)}
        terms[(4, 0)] = rng.randrange(1, q)
        fq = CurveEquation.quartic(terms, q)
    else:
        while True:
            m = tuple(rng.randrange(-9, 10) for _ in range(5)) + (1,)
            try:
                fp = make_fp(TypeHTemplate(p, m))
                break
            except ValueError:
                continue
        fq = CurveEquation.hyperelliptic([rng.randrange(q) for _ in range(7)] + [1], q)
    f = crt_lift(fp, fq, p, q)
    M = p**3 * q
    assert all(-M < 2 * c <= M for _, c in f.terms)
    assert check_congruence(f, fp, p**3) and check_congruence(f, fq, q)


def test_check_congruence_reflexive():
    f = CurveEquation.quartic(GIVEN_QUARTIC)
    for m in (2, 27, 97, 10**9):
        assert check_congruence(f, f, m)


# -- certificates ------------------------------------------------------------------------------

def test_example_certificate(example_cert):
    assert example_cert.conclusion
    assert set(example_cert.checks) == set(CHECK_NAMES)
    assert example_cert.phi_p_order == 2


def test_certificate_json_round_trip(example_cert):
    s = example_cert.to_json()
    again = SurjectivityCertificate.from_json(s)
    assert again.to_json() == s
    d = json.loads(s)
    assert d["ell"] == "13" and d["weil"]["c"] == "9862"
    assert verify(again)


def test_certificate_failures(example_h):
    f, fp, fq = example_h
    w = WeilSextic(313, 12, 234, 9862)
    bad_ell = build_certificate(313, 7, 313, f, fp, fq, w, False)
    assert not bad_ell.checks["distinct_primes"] and not bad_ell.conclusion

    g = f.g_coeffs()
    g[0] += 1
    bumped = build_certificate(13, 7, 313, CurveEquation.hyperelliptic(g), fp, fq, w, False)
    assert not bumped.checks["congruence_p3"] and not bumped.conclusion

    wrong = build_certificate(13, 7, 313, f, fp, fq, WeilSextic(313, 1, 0, 4), False)
    assert not wrong.checks["fq_smooth"] and not wrong.conclusion
    # the twist flag makes the recorded sextic the twist of the measured one
    twisted = build_certificate(13, 7, 313, f, fp, fq, WeilSextic(313, -12, 234, -9862), True)
    assert twisted.checks["fq_smooth"]


def test_tampered_certificate_fails(example_cert):
    d = example_cert.to_dict()
    d["weil"]["c"] = "9863"
    d["weil"].pop("coefficients", None)
    assert not verify(SurjectivityCertificate.from_dict(d))
    fake = dataclasses.replace(example_cert, checks={**example_cert.checks, "abs_simple": False})
    assert not verify(fake)
    assert not verify(dataclasses.replace(example_cert, phi_p_order=4))


def test_small_pipeline_runs():
    cert = run_pipeline(5, 7, 47, HYPERELLIPTIC)
    assert cert.conclusion
    assert verify(SurjectivityCertificate.from_json(cert.to_json()))
    again = run_pipeline(5, 7, 47, HYPERELLIPTIC, threads=2)
    assert again.to_json() == cert.to_json()


def test_pipeline_degree8_template():
    cert = run_pipeline(5, 3, 47, HYPERELLIPTIC, strategy="random", seed=1, limit=500)
    assert cert.conclusion
    assert cert.fq.degree == 8 and cert.fp.degree == 8


def test_pipeline_preconditions():
    with pytest.raises(ValueError):
        run_pipeline(5, 5, 47)
    with pytest.raises(ValueError):
        run_pipeline(5, 47, 47)
    with pytest.raises(ValueError):
        run_pipeline(3, 7, 19)
    with pytest.raises(ValueError):
        run_pipeline(13, 7, 307)
    with pytest.raises(CurveNotFound):
        run_pipeline(5, 7, 47, HYPERELLIPTIC, limit=0)
