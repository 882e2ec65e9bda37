import threading
from fractions import Fraction
from math import comb

import pytest

from quadcong.bernoulli import (
    BernoulliCache,
    bernoulli,
    bernoulli_poly,
    carlitz_check,
    gen_bernoulli,
    lemma_power_sum_nonprincipal,
    lemma_power_sum_principal,
    power_sum_closed,
    power_sum_direct,
    power_sum_restricted,
    sun_congruence_check,
)
from quadcong.characters import QuadChar, is_fundamental_discriminant
from quadcong.padic import INF, vp
from quadcong.primes import primes_up_to

from oracles import bernoulli_akiyama_tanigawa, gen_bernoulli_series, tangent_bernoulli

CHI3 = QuadChar(-3)
CHI4 = QuadChar(-4)
CHI5 = QuadChar(5)
CHI8N = QuadChar(-8)
PRINCIPAL = QuadChar.principal()

SMALL_SET = (PRINCIPAL, CHI3, CHI4, CHI5, CHI8N, QuadChar(8), QuadChar(12), QuadChar(13))


def test_bernoulli_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    for n in (3, 5, 7, 99):
        assert bernoulli(n) == 0
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_bernoulli_against_triangle_oracle():
    oracle = bernoulli_akiyama_tanigawa(60)
    for n in range(61):
        assert bernoulli(n) == oracle[n], n


def test_bernoulli_against_tangent_oracle():
    for m in (20, 40, 60, 120):
        assert bernoulli(2 * m) == tangent_bernoulli(m), m


def test_von_staudt_clausen_denominators():
    for k in range(1, 31):
        expected = 1
        for q in primes_up_to(2 * k + 1):
            if (2 * k) % (q - 1) == 0:
                expected *= q
        assert bernoulli(2 * k).denominator == expected, 2 * k


def test_bernoulli_poly():
    assert bernoulli_poly(2, Fraction(1, 2)) == Fraction(-1, 12)
    assert bernoulli_poly(1, 1) == Fraction(1, 2)
    for n in (0, 1, 2, 5, 8):
        assert bernoulli_poly(n, 0) == bernoulli(n)


def test_gen_bernoulli_values():
    for chi in SMALL_SET:
        if not chi.is_principal:
            assert gen_bernoulli(0, chi) == 0
    assert gen_bernoulli(1, CHI3) == Fraction(-1, 3)
    assert gen_bernoulli(2, CHI5) == Fraction(4, 5)
    assert gen_bernoulli(1, CHI8N) == -1
    assert gen_bernoulli(3, CHI8N) == 9
    assert gen_bernoulli(9, CHI8N) == -2256633
    assert gen_bernoulli(3, CHI4) == Fraction(3, 2)
    assert gen_bernoulli(9, CHI4) == Fraction(-12465, 2)


def test_gen_bernoulli_principal_convention():
    assert gen_bernoulli(1, PRINCIPAL) == Fraction(1, 2)
    for n in (0, 2, 3, 4, 7, 12):
        assert gen_bernoulli(n, PRINCIPAL) == bernoulli(n)


def test_gen_bernoulli_against_series_oracle():
    """Generating-function division cross-check for n <= 8."""
    for chi in SMALL_SET:
        f = chi.conductor
        for n in range(9):
            expected = gen_bernoulli_series(n, f, chi)
            assert gen_bernoulli(n, chi) == expected, (chi.discriminant, n)


def test_gen_bernoulli_matches_literal_polynomial_formula():
    """The production path only reorganizes f^(n-1) sum chi(a) B_n(a/f)."""
    for chi in (CHI3, CHI5, CHI8N):
        f = chi.conductor
        for n in range(11):
            literal = Fraction(f) ** (n - 1) * sum(
                chi(a) * bernoulli_poly(n, Fraction(a, f)) for a in range(1, f + 1)
            )
            assert gen_bernoulli(n, chi) == literal, (chi.discriminant, n)


def test_gen_bernoulli_parity_vanishing():
    for chi in SMALL_SET:
        for n in range(21):
            if chi.is_principal:
                continue
            if chi.parity != (-1) ** n:
                assert gen_bernoulli(n, chi) == 0, (chi.discriminant, n)
            elif n >= 1:
                assert gen_bernoulli(n, chi) != 0, (chi.discriminant, n)


def test_power_sum_direct():
    assert power_sum_direct(2, 5, PRINCIPAL) == 11
    assert power_sum_direct(4, 5, PRINCIPAL) == Fraction(979, 5)
    assert power_sum_direct(1, 3, CHI3) == Fraction(-1, 3)
    assert power_sum_direct(0, 10, PRINCIPAL) == 1
    with pytest.raises(ValueError):
        power_sum_direct(2, 7, CHI5)  # conductor does not divide F


def test_power_sum_restricted():
    assert power_sum_restricted(2, 5, PRINCIPAL, 5) == 6
    # p > F and p coprime to F: nothing is removed
    assert power_sum_restricted(3, 6, CHI3, 11) == power_sum_direct(3, 6, CHI3)


def test_restricted_identity():
    """P'(k,F,chi) = P(k,F,chi) - chi(p) p^(k-1) P(k,f,chi)."""
    for chi in (PRINCIPAL, CHI3, CHI5):
        f = chi.conductor
        for p in (3, 5, 7):
            if f % p == 0:
                continue
            F = p * f
            for k in range(0, 12):
                lhs = power_sum_restricted(k, F, chi, p)
                rhs = power_sum_direct(k, F, chi) - chi(p) * Fraction(p) ** (k - 1) * power_sum_direct(k, f, chi)
                assert lhs == rhs, (chi.discriminant, p, k)


def test_power_sum_closed_examples():
    assert power_sum_closed(2, 5, PRINCIPAL) == 11
    assert power_sum_closed(4, 5, PRINCIPAL) == Fraction(979, 5)


def test_power_sum_closed_equals_direct_full_grid():
    """Exact rational equality on the acceptance grid (k <= 40, F <= 200)."""
    for chi in SMALL_SET:
        f = chi.conductor
        for F in range(f, 201, f):
            for k in range(41):
                assert power_sum_closed(k, F, chi) == power_sum_direct(k, F, chi), (
                    chi.discriminant, F, k,
                )


def test_power_sum_closed_printed_j0_term_regression():
    """The variant with F^k B_0 (no 1/(k+1)) breaks for the principal character.

    For non-principal characters B_0 vanishes and the two agree; the
    failure at (k, F) = (2, 5) is why the corrected coefficient ships.
    """
    def printed(k, F, chi):
        total = Fraction(F) ** k * gen_bernoulli(0, chi)
        for j in range(1, k + 1):
            total += comb(k, j - 1) * gen_bernoulli(j, chi) / j * F ** (k - j)
        return total

    assert printed(2, 5, PRINCIPAL) != power_sum_direct(2, 5, PRINCIPAL)
    for k in range(1, 15):
        assert printed(k, 15, CHI3) == power_sum_direct(k, 15, CHI3), k


def test_carlitz_examples():
    assert carlitz_check(2, CHI5, 3)
    assert carlitz_check(6, QuadChar(12), 7)
    assert carlitz_check(1, CHI3, 5)
    with pytest.raises(ValueError):
        carlitz_check(2, CHI5, 5)  # p divides the conductor
    with pytest.raises(ValueError):
        carlitz_check(2, PRINCIPAL, 7)


def test_carlitz_full_grid():
    discs = [n for n in range(-60, 61) if is_fundamental_discriminant(n)]
    ps = [p for p in primes_up_to(50) if p > 2]
    for delta in discs:
        chi = QuadChar(delta)
        for p in ps:
            if chi.conductor % p == 0:
                continue
            for n in range(1, 31):
                assert carlitz_check(n, chi, p), (delta, p, n)


def test_lemma_nonprincipal_cases():
    rep = lemma_power_sum_nonprincipal(4, CHI5, 7)  # parity match, k even
    assert rep.holds and rep.statement_id == "POWER_SUM_NONPRINCIPAL_A"
    rep = lemma_power_sum_nonprincipal(5, CHI5, 7)  # parity mismatch
    assert rep.holds and rep.statement_id == "POWER_SUM_NONPRINCIPAL_B"
    rep = lemma_power_sum_nonprincipal(3, CHI3, 5)  # odd chi, k = 3: exact
    assert rep.holds and rep.difference_valuation == INF
    assert rep.lhs == rep.rhs == Fraction(-223, 3)
    with pytest.raises(ValueError):
        lemma_power_sum_nonprincipal(2, CHI5, 7)
    with pytest.raises(ValueError):
        lemma_power_sum_nonprincipal(4, CHI5, 5)
    with pytest.raises(ValueError):
        lemma_power_sum_nonprincipal(4, PRINCIPAL, 7)


def test_lemma_nonprincipal_printed_variants_fail():
    """The two printed slips: F B_1 in the k = 3 identity, F/2 in case (b).

    Both are contradicted by exact evaluation; the corrected forms (F^2 B_1
    and k F / 2) are what the implementation carries.
    """
    F = 15
    P = power_sum_direct(3, F, CHI3)
    assert P != gen_bernoulli(3, CHI3) + F * gen_bernoulli(1, CHI3)
    assert P == gen_bernoulli(3, CHI3) + F * F * gen_bernoulli(1, CHI3)

    F = 35
    P = power_sum_direct(5, F, CHI5)
    assert vp(P - Fraction(F, 2) * gen_bernoulli(4, CHI5), 7) < 2
    assert vp(P - Fraction(5 * F, 2) * gen_bernoulli(4, CHI5), 7) >= 2


def test_lemma_nonprincipal_full_grid():
    discs = [n for n in range(-40, 41) if is_fundamental_discriminant(n)]
    for p in (5, 7, 11, 13, 17):
        for delta in discs:
            chi = QuadChar(delta)
            if chi.conductor % p == 0:
                continue
            for k in range(3, 31):
                rep = lemma_power_sum_nonprincipal(k, chi, p)
                assert rep.holds, (delta, p, k)


def test_lemma_principal_cases():
    rep = lemma_power_sum_principal(4, 5)  # (p-1) | k
    assert rep.holds and rep.statement_id == "POWER_SUM_PRINCIPAL_A"
    assert rep.difference_valuation == 2
    rep = lemma_power_sum_principal(6, 5)
    assert rep.holds and rep.statement_id == "POWER_SUM_PRINCIPAL_B"
    rep = lemma_power_sum_principal(5, 7)
    assert rep.holds and rep.statement_id == "POWER_SUM_PRINCIPAL_C"
    with pytest.raises(ValueError):
        lemma_power_sum_principal(2, 7)
    with pytest.raises(ValueError):
        lemma_power_sum_principal(20, 5)  # k = p(p-1)
    with pytest.raises(ValueError):
        lemma_power_sum_principal(5, 3)


def test_lemma_principal_full_grid():
    for p in (5, 7, 11, 13, 17):
        for k in range(3, min(31, p * (p - 1))):
            rep = lemma_power_sum_principal(k, p)
            assert rep.holds, (p, k)


def test_sun_congruence_examples():
    # b = 2 at p = 3 violates the hypothesis (p-1 = 2 divides b), even
    # though the congruence happens to hold numerically there
    with pytest.raises(ValueError):
        sun_congruence_check(2, 2, CHI5, 3)
    rep = sun_congruence_check(1, 2, CHI3, 5)  # odd character, live instance
    assert rep.holds and rep.difference_valuation < INF
    rep = sun_congruence_check(2, 3, CHI5, 7)
    assert rep.holds
    rep = sun_congruence_check(2, 1, CHI5, 7)  # k = 1 collapses to an identity
    assert rep.holds and rep.difference_valuation == INF
    with pytest.raises(ValueError):
        sun_congruence_check(4, 2, CHI5, 5)  # (p-1) | b
    with pytest.raises(ValueError):
        sun_congruence_check(2, 2, CHI5, 5)  # p divides conductor


def test_sun_congruence_grid():
    for p in (3, 5, 7, 11):
        for chi in SMALL_SET:
            if chi.conductor % p == 0:
                continue
            for b in range(1, 7):
                if b % (p - 1) == 0:
                    continue
                for k in range(1, 5):
                    rep = sun_congruence_check(b, k, chi, p)
                    assert rep.holds, (p, chi.discriminant, b, k)


def test_sun_congruence_series_proof_instance():
    """The instance b = r, k = (p^2+3)/2 that powers the a_1 closed form."""
    from quadcong.characters import split_character

    for d, p in ((65, 5), (14, 7)):
        split = split_character(d, p, check=False)
        r = split.r
        k = (p * p + 3) // 2
        rep = sun_congruence_check(r, k, split.psi, p)
        assert rep.holds, (d, p)
        assert rep.k == k


def test_cache_concurrent_use_and_consistency():
    cache = BernoulliCache()
    errors = []

    def work(base):
        try:
            for n in range(base, base + 40):
                cache.bernoulli(n)
                cache.gen_bernoulli(n % 12, CHI5)
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(b,)) for b in (0, 20, 40, 60)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert not errors
    fresh = BernoulliCache()
    for n in range(0, 100, 7):
        assert cache.bernoulli(n) == fresh.bernoulli(n)
    for n in range(12):
        assert cache.get(n, 5) is None or cache.get(n, 5) == fresh.gen_bernoulli(n, CHI5)
