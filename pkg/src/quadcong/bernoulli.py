"""Bernoulli numbers, generalized Bernoulli numbers, and power sums.

Conventions matter here and are easy to get wrong:

* plain B_n follows the generating function x/(e^x - 1), so B_1 = -1/2;
* the principal character's sequence follows t e^t/(e^t - 1) instead, so
  its index-1 value is +1/2 while agreeing with B_n everywhere else.
  The two live under distinct cache keys (disc None vs disc 1).

The closed power-sum formula stores the index-0 term as F^k B_{0,chi}/(k+1);
the commonly printed variant without the 1/(k+1) fails the exact identity
against the literal sum already at k = 2 for the principal character (a
regression test pins this down).
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from .characters import QuadChar, char_values
from .padic import vp
from .primes import is_prime
from .reports import CongruenceReport, make_report


class BernoulliCache:
    """Exact cache of B_n and B_{n,chi} keyed by (n, discriminant-or-None).

    Reads are lock-free; writes are serialized so concurrent scan workers
    can share one instance.  Entries are never evicted.
    """

    def __init__(self) -> None:
        self._values: dict[tuple[int, int | None], Fraction] = {
            (0, None): Fraction(1),
            (1, None): Fraction(-1, 2),
        }
        self._even_max = 0
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._values)

    def get(self, n: int, disc: int | None) -> Fraction | None:
        return self._values.get((n, disc))

    def put(self, n: int, disc: int | None, value: Fraction) -> None:
        with self._lock:
            self._values[(n, disc)] = value

    def entries(self) -> list[tuple[int, int | None, Fraction]]:
        with self._lock:
            return [(n, disc, v) for (n, disc), v in sorted(
                self._values.items(), key=lambda kv: (kv[0][1] is not None, kv[0][1] or 0, kv[0][0])
            )]

    def merge(self, entries) -> int:
        """Install (n, disc, Fraction) triples; returns how many were new."""
        added = 0
        with self._lock:
            for n, disc, v in entries:
                if (n, disc) not in self._values:
                    self._values[(n, disc)] = v
                    added += 1
        return added

    # -- plain Bernoulli numbers ------------------------------------------

    def bernoulli(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("Bernoulli index must be >= 0")
        if n == 0:
            return Fraction(1)
        if n == 1:
            return Fraction(-1, 2)
        if n % 2 == 1:
            return Fraction(0)
        got = self._values.get((n, None))
        if got is not None:
            return got
        with self._lock:
            self._extend_even(n)
            return self._values[(n, None)]

    def _extend_even(self, n: int) -> None:
        # binomial recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0, walking only
        # the even indices plus the fixed j=1 term; binomials are updated
        # incrementally rather than recomputed.
        for m in range(self._even_max + 2, n + 1, 2):
            acc = Fraction(-(m + 1), 2)  # j = 1 term: C(m+1,1) * B_1
            binom = 1  # C(m+1, 0)
            for j in range(0, m - 1, 2):
                bj = self._values[(j, None)] if j else Fraction(1)
                acc += binom * bj
                binom = binom * (m + 1 - j) * (m - j) // ((j + 1) * (j + 2))
            self._values[(m, None)] = -acc / (m + 1)
        self._even_max = max(self._even_max, n)

    # -- generalized Bernoulli numbers ------------------------------------

    def gen_bernoulli(self, n: int, chi: QuadChar) -> Fraction:
        if n < 0:
            raise ValueError("Bernoulli index must be >= 0")
        if chi.is_principal:
            if n == 1:
                return Fraction(1, 2)
            return self.bernoulli(n)
        key = (n, chi.discriminant)
        got = self._values.get(key)
        if got is not None:
            return got
        value = self._gen_bernoulli_compute(n, chi)
        with self._lock:
            self._values[key] = value
        return value

    def _gen_bernoulli_compute(self, n: int, chi: QuadChar) -> Fraction:
        # Finite Bernoulli-polynomial formula f^(n-1) sum_a chi(a) B_n(a/f),
        # expanded so all inner arithmetic is on integers:
        #   B_{n,chi} = (1/f) sum_j C(n,j) B_j f^j T_{n-j},
        #   T_k = sum_{a=1}^{f} chi(a) a^k.
        f = chi.conductor
        vals = char_values(chi, f)
        T = [0] * (n + 1)
        for a in range(1, f + 1):
            cv = vals[a]
            if cv == 0:
                continue
            pw = 1
            if cv == 1:
                for kk in range(n + 1):
                    T[kk] += pw
                    pw *= a
            else:
                for kk in range(n + 1):
                    T[kk] -= pw
                    pw *= a
        total = Fraction(0)
        fj = 1
        for j in range(n + 1):
            if j <= 1 or j % 2 == 0:
                bj = self.bernoulli(j)
                if bj:
                    total += comb(n, j) * bj * fj * T[n - j]
            fj *= f
        return total / f


DEFAULT_CACHE = BernoulliCache()


def bernoulli(n: int, cache: BernoulliCache | None = None) -> Fraction:
    """B_n with B_1 = -1/2 (odd indices > 1 vanish)."""
    return (cache or DEFAULT_CACHE).bernoulli(n)


def bernoulli_poly(n: int, x: Fraction | int, cache: BernoulliCache | None = None) -> Fraction:
    """Bernoulli polynomial B_n(x) = sum_j C(n,j) B_j x^(n-j)."""
    if n < 0:
        raise ValueError("Bernoulli index must be >= 0")
    c = cache or DEFAULT_CACHE
    x = Fraction(x)
    total = Fraction(0)
    xp = Fraction(1)
    # evaluate from j = n down so powers of x build up incrementally
    for j in range(n, -1, -1):
        bj = c.bernoulli(j)
        if bj:
            total += comb(n, j) * bj * xp
        xp *= x
    return total


def gen_bernoulli(n: int, chi: QuadChar, cache: BernoulliCache | None = None) -> Fraction:
    """Generalized Bernoulli number B_{n,chi} (exact rational)."""
    return (cache or DEFAULT_CACHE).gen_bernoulli(n, chi)


# -- power sums -------------------------------------------------------------


def _require_conductor_divides(chi: QuadChar, F: int) -> None:
    if F < 1 or F % chi.conductor != 0:
        raise ValueError(f"F = {F} must be a positive multiple of the conductor {chi.conductor}")


def power_sum_direct(k: int, F: int, chi: QuadChar) -> Fraction:
    """(1/F) sum_{a=1}^{F} chi(a) a^k, evaluated literally."""
    if k < 0:
        raise ValueError("k must be >= 0")
    _require_conductor_divides(chi, F)
    vals = char_values(chi, F)
    total = 0
    for a in range(1, F + 1):
        cv = vals[a]
        if cv:
            total += a ** k if cv == 1 else -(a ** k)
    return Fraction(total, F)


def power_sum_restricted(k: int, F: int, chi: QuadChar, p: int) -> Fraction:
    """(1/F) sum over 1 <= a <= F with p not dividing a of chi(a) a^k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    _require_conductor_divides(chi, F)
    vals = char_values(chi, F)
    total = 0
    for a in range(1, F + 1):
        if a % p == 0:
            continue
        cv = vals[a]
        if cv:
            total += a ** k if cv == 1 else -(a ** k)
    return Fraction(total, F)


def power_sum_closed(k: int, F: int, chi: QuadChar, cache: BernoulliCache | None = None) -> Fraction:
    """Power sum via generalized Bernoulli numbers.

    (1/(k+1)) sum_{j=0}^{k} C(k+1, j) B_{j,chi} F^(k-j); exactly equal to
    power_sum_direct for every admissible input (the principal character
    needs both the 1/(k+1) on the j=0 term and the +1/2 index-1 value).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    _require_conductor_divides(chi, F)
    c = cache or DEFAULT_CACHE
    total = Fraction(0)
    Fp = F ** k
    for j in range(k + 1):
        bj = c.gen_bernoulli(j, chi)
        if bj:
            total += comb(k + 1, j) * bj * Fp
        if j < k:
            Fp //= F
    return total / (k + 1)


# -- arithmetic facts about B_{n,chi} ---------------------------------------


def carlitz_check(n: int, chi: QuadChar, p: int, cache: BernoulliCache | None = None) -> bool:
    """Is B_{n,chi}/n p-integral?  (True is the theorem's prediction.)

    Applies to non-principal chi with p coprime to the conductor; a
    conductor with two or more prime factors even makes B_{n,chi}/n an
    algebraic integer, but only p-integrality is decided here.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if chi.is_principal:
        raise ValueError("integrality statement needs a non-principal character")
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if chi.conductor % p == 0:
        raise ValueError(f"p = {p} divides the conductor {chi.conductor}; statement does not apply")
    return vp(gen_bernoulli(n, chi, cache) / n, p) >= 0


def lemma_power_sum_nonprincipal(
    k: int, chi: QuadChar, p: int, cache: BernoulliCache | None = None
) -> CongruenceReport:
    """Depth-2 power-sum reduction P(k, pf, chi) for non-principal chi.

    Parity matching chi(-1) = (-1)^k gives P = B_{k,chi} mod p^2; the
    opposite parity gives P = (k F / 2) B_{k-1,chi} mod p^2.  For k = 3
    with odd chi the statement sharpens to the exact identity
    P = B_{3,chi} + F^2 B_{1,chi} (note F squared: the F^1 variant one
    sometimes sees printed is already false for chi of discriminant -3
    at p = 5, where P(3,15) = -223/3 = B_3 + 225 B_1).
    """
    if chi.is_principal:
        raise ValueError("use lemma_power_sum_principal for the principal character")
    if k < 3:
        raise ValueError("statement needs k >= 3")
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    f = chi.conductor
    if f % p == 0:
        raise ValueError(f"p = {p} must not divide the conductor {f}")
    c = cache or DEFAULT_CACHE
    F = p * f
    lhs = power_sum_direct(k, F, chi)
    if chi.parity == (-1) ** k:
        if k == 3 and chi.parity == -1:
            rhs = c.gen_bernoulli(3, chi) + F * F * c.gen_bernoulli(1, chi)
            stmt = "POWER_SUM_NONPRINCIPAL_K3_EXACT"
        else:
            rhs = c.gen_bernoulli(k, chi)
            stmt = "POWER_SUM_NONPRINCIPAL_A"
    else:
        rhs = Fraction(k * F, 2) * c.gen_bernoulli(k - 1, chi)
        stmt = "POWER_SUM_NONPRINCIPAL_B"
    return make_report(stmt, lhs, rhs, p, depth=2, d=chi.discriminant, k=k)


def lemma_power_sum_principal(k: int, p: int, cache: BernoulliCache | None = None) -> CongruenceReport:
    """Depth-2 reduction of P(k, p) for the principal character, 3 <= k < p(p-1).

    (p-1) | k        : P + 1/p = B_k + 1/p mod p^2
    k even otherwise : P = B_k + F^2 k(k-1) B_{k-2} / 6 mod p^2
    k odd            : P = (F k / 2) B_{k-1} mod p^2
    """
    if p <= 3 or not is_prime(p):
        raise ValueError(f"statement needs a prime p > 3, got {p}")
    if not 3 <= k < p * (p - 1):
        raise ValueError(f"k = {k} outside the admissible range [3, p(p-1))")
    c = cache or DEFAULT_CACHE
    F = p
    chi0 = QuadChar.principal()
    P = power_sum_direct(k, F, chi0)
    if k % (p - 1) == 0:
        lhs = P + Fraction(1, p)
        rhs = c.bernoulli(k) + Fraction(1, p)
        stmt = "POWER_SUM_PRINCIPAL_A"
    elif k % 2 == 0:
        lhs = P
        rhs = c.bernoulli(k) + Fraction(F * F * k * (k - 1), 6) * c.bernoulli(k - 2)
        stmt = "POWER_SUM_PRINCIPAL_B"
    else:
        lhs = P
        rhs = Fraction(F * k, 2) * c.bernoulli(k - 1)
        stmt = "POWER_SUM_PRINCIPAL_C"
    return make_report(stmt, lhs, rhs, p, depth=2, k=k)


def sun_congruence_check(
    b: int, k: int, chi: QuadChar, p: int, cache: BernoulliCache | None = None
) -> CongruenceReport:
    """Depth-2 index-shift congruence for B_{n,chi}/n.

    B_{k(p-1)+b,chi}/(k(p-1)+b) =
        k B_{p-1+b,chi}/(p-1+b) - (k-1)(1 - chi(p) p^(b-1)) B_{b,chi}/b  mod p^2,
    for b not divisible by p-1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if b < 1 or b % (p - 1) == 0:
        raise ValueError(f"b = {b} must be positive and not divisible by p - 1 = {p - 1}")
    if chi.conductor % p == 0:
        raise ValueError(f"p = {p} must not divide the conductor {chi.conductor}")
    c = cache or DEFAULT_CACHE
    n1 = k * (p - 1) + b
    n2 = (p - 1) + b
    lhs = c.gen_bernoulli(n1, chi) / n1
    euler = 1 - chi(p) * p ** (b - 1)
    rhs = k * c.gen_bernoulli(n2, chi) / n2 - (k - 1) * euler * c.gen_bernoulli(b, chi) / b
    return make_report("SUN_INDEX_SHIFT", lhs, rhs, p, depth=2, d=chi.discriminant, k=k)
