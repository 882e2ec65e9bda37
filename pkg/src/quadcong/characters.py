"""Quadratic Dirichlet characters through the Kronecker symbol.

A character is indexed by a fundamental discriminant; evaluation is
kronecker(disc, n).  The principal character uses the sentinel
discriminant 1 (conductor 1, value 1 everywhere).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .primes import is_prime


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers, standard conventions."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    res = 1
    if n < 0:
        n = -n
        if a < 0:
            res = -res
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if a % 8 in (3, 5):
                res = -res
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                res = -res
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a %= n
    return res if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) via Euler's criterion; p an odd prime."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"legendre needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return r - p if r > 1 else r


def _squarefree_abs(n: int) -> bool:
    n = abs(n)
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        i += 1
    return True


def is_fundamental_discriminant(n: int) -> bool:
    """True for discriminants of quadratic fields (the sentinel 1 is excluded)."""
    if n == 0 or n == 1:
        return False
    if n % 4 == 1:  # Python mod keeps this correct for negative n
        return _squarefree_abs(n)
    if n % 4 == 0:
        m = n // 4
        return m % 4 in (2, 3) and _squarefree_abs(m)
    return False


@dataclass(frozen=True)
class QuadChar:
    """Primitive quadratic character of a fundamental discriminant.

    discriminant = 1 denotes the principal character (conductor 1,
    identically 1 -- including on arguments sharing a factor with
    anything, matching the convention used throughout).
    """

    discriminant: int

    def __post_init__(self) -> None:
        if self.discriminant != 1 and not is_fundamental_discriminant(self.discriminant):
            raise ValueError(f"{self.discriminant} is not a fundamental discriminant")

    @classmethod
    def principal(cls) -> "QuadChar":
        return cls(1)

    @property
    def is_principal(self) -> bool:
        return self.discriminant == 1

    @property
    def conductor(self) -> int:
        return 1 if self.is_principal else abs(self.discriminant)

    @property
    def parity(self) -> int:
        """chi(-1): +1 (even) for positive discriminant, -1 (odd) for negative."""
        return 1 if self.discriminant > 0 else -1

    def __call__(self, a: int) -> int:
        return eval_char(self, a)


def eval_char(chi: QuadChar, a: int) -> int:
    """chi(a); zero whenever gcd(a, conductor) > 1, and 1 everywhere if principal."""
    if chi.is_principal:
        return 1
    return kronecker(chi.discriminant, a)


def char_values(chi: QuadChar, n: int) -> list[int]:
    """[chi(0), chi(1), ..., chi(n)] built by a multiplicative sieve.

    Complete multiplicativity of the bottom argument of the Kronecker
    symbol lets us evaluate only at primes.
    """
    vals = [0] * (n + 1)
    if n >= 1:
        vals[1] = 1
    if chi.is_principal:
        return [1] * (n + 1)
    spf = list(range(n + 1))
    for p in range(2, isqrt(n) + 1):
        if spf[p] == p:
            for q in range(p * p, n + 1, p):
                if spf[q] == q:
                    spf[q] = p
    for a in range(2, n + 1):
        p = spf[a]
        if p == a:
            vals[a] = kronecker(chi.discriminant, a)
        else:
            vals[a] = vals[p] * vals[a // p]
    return vals


@dataclass(frozen=True)
class CharacterSplit:
    """Factorization chi_D = (./p) * psi of the character of Q(sqrt(d)), d = p*m.

    psi is the primitive quadratic character of conductor delta^2 * m,
    obtained by dividing the field discriminant D by p* = (-1)^((p-1)/2) p.
    """

    d: int
    p: int
    m: int
    delta: int
    chi_d: QuadChar
    psi: QuadChar

    @property
    def D(self) -> int:
        return self.delta * self.delta * self.d

    @property
    def r(self) -> int:
        return (self.p - 1) // 2


def split_character(d: int, p: int, check: bool = True) -> CharacterSplit:
    """Split the character of Q(sqrt(d)) at the prime p | d.

    Requires d squarefree, d = p*m with p > 3 prime and p coprime to m.
    With check=True the defining pointwise identity
    chi_D(a) = (a/p) * psi(a) is verified for every a = 1..D coprime to D.
    """
    from .quadfield import is_squarefree  # local import to avoid a cycle

    if p <= 3 or not is_prime(p):
        raise ValueError(f"split needs a prime p > 3, got {p}")
    if d <= 1 or d % p != 0:
        raise ValueError(f"p = {p} must divide d = {d}")
    if not is_squarefree(d):
        raise ValueError(f"d = {d} is not squarefree")
    m = d // p
    delta = 1 if d % 4 == 1 else 2
    D = delta * delta * d
    pstar = p if p % 4 == 1 else -p
    dm, rem = divmod(D, pstar)
    if rem:
        raise ValueError(f"discriminant {D} not divisible by p* = {pstar}")
    chi_d = QuadChar(D)
    psi = QuadChar(dm)
    if psi.conductor != delta * delta * m:
        raise ValueError(f"split of (d={d}, p={p}) produced conductor {psi.conductor}")
    split = CharacterSplit(d=d, p=p, m=m, delta=delta, chi_d=chi_d, psi=psi)
    if check:
        chiv = char_values(chi_d, D)
        psiv = char_values(psi, D)
        for a in range(1, D + 1):
            if gcd(a, D) != 1:
                continue
            if chiv[a] != legendre(a, p) * psiv[a]:
                raise AssertionError(f"character split identity fails at a={a}, d={d}, p={p}")
    return split
