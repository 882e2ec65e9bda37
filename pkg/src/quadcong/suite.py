"""Named congruence checks and grid scans.

Each check evaluates both sides of one published congruence exactly and
returns a CongruenceReport whose verdict is the valuation test
v_p(lhs - rhs) >= depth.  Detector statements (super-AACM, super-Wilson)
are one-directional: a failed congruence disproves the super property,
a held one proves nothing.

Two displayed identities are implemented in corrected form, with the
printed variants preserved in the regression tests:

* the Wilson-quotient depth-2 identity carries k^2 (not k) on the
  Bernoulli-difference block -- forced by its own derivation through the
  series coefficient a_1 and confirmed numerically (the printed form
  already fails at p = 7, k = 2);
* the depth-1 Wilson congruence B_{k(p-1)} + 1/p - 1 = k W_p (mod p) is
  checked as printed, but it is genuinely false at p = 3 (k = 4 is the
  smallest counterexample), consistent with every derivation in sight
  assuming p > 3.  The default scan floor p_min = 7 keeps it out of
  gates; lowering p_min to 3 reproduces the failure honestly.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import get_context

from .bernoulli import BernoulliCache, DEFAULT_CACHE
from .characters import split_character
from .lseries import wilson_quotient
from .padic import unit_log_series
from .primes import is_prime, primes_up_to
from .quadfield import class_number, fundamental_unit, is_squarefree, vp_u
from .reports import CongruenceReport, make_report

AAC_CLASSICAL = "AAC_CLASSICAL"
THM1 = "THM1"
COR_EXACT_DIV = "COR_EXACT_DIV"
SUPER_AACM_CRIT = "SUPER_AACM_CRIT"
LEHMER_THM2 = "LEHMER_THM2"
LEHMER_DIFF = "LEHMER_DIFF"
THM3 = "THM3"
SUPER_WILSON_CRIT = "SUPER_WILSON_CRIT"

STATEMENTS = (
    AAC_CLASSICAL,
    THM1,
    COR_EXACT_DIV,
    SUPER_AACM_CRIT,
    LEHMER_THM2,
    LEHMER_DIFF,
    THM3,
    SUPER_WILSON_CRIT,
)

# detector statements: "holds" is the anomaly, not the expectation
DETECTORS = frozenset({SUPER_AACM_CRIT, SUPER_WILSON_CRIT})


def _require_split_shape(d: int, p: int, p_floor: int) -> None:
    if p <= p_floor or not is_prime(p):
        raise ValueError(f"need a prime p > {p_floor}, got {p}")
    if d <= 5:
        raise ValueError(f"need d > 5, got {d}")
    if d % p != 0 or (d // p) % p == 0:
        raise ValueError(f"d = {d} must be p * m with p = {p} exactly dividing")
    if not is_squarefree(d):
        raise ValueError(f"d = {d} is not squarefree")


def check_aac_classical(p: int, cache: BernoulliCache | None = None) -> CongruenceReport:
    """Depth-1 congruence 2 h u / t = -B_r / r (mod p) for prime d = p = 1 mod 4."""
    t0 = time.perf_counter()
    if p < 5 or p % 4 != 1 or not is_prime(p):
        raise ValueError(f"need a prime p = 1 mod 4, p >= 5; got {p}")
    c = cache or DEFAULT_CACHE
    unit = fundamental_unit(p)
    h, _ = class_number(p)
    r = (p - 1) // 2
    lhs = Fraction(2 * h * unit.u, unit.t)
    rhs = -c.bernoulli(r) / r
    return make_report(AAC_CLASSICAL, lhs, rhs, p, depth=1, d=p, started=t0)


def check_theorem1(d: int, p: int, cache: BernoulliCache | None = None) -> CongruenceReport:
    """Depth-2 unit/class-number congruence for d = p m squarefree, d > 5.

    (4h/delta)(u/t + (d/3)(u/t)^3)
        = -3 (1 - psi(p) p^(r-1)) B_{r,psi}/r + B_{3r,psi}/(3r)  (mod p^2).

    Defined for p > 3; at p = 5 the truncation argument behind the left
    side thins out, so callers gate p = 5 separately (the check itself
    stays faithful and simply reports the verdict).
    """
    t0 = time.perf_counter()
    _require_split_shape(d, p, p_floor=3)
    c = cache or DEFAULT_CACHE
    split = split_character(d, p, check=False)
    unit = fundamental_unit(d)
    h, _ = class_number(d)
    r = split.r
    lhs = Fraction(4 * h, split.delta) * unit_log_series(d, unit.t, unit.u, 1)
    euler = 1 - split.psi(p) * p ** (r - 1)
    rhs = -3 * euler * c.gen_bernoulli(r, split.psi) / r + c.gen_bernoulli(3 * r, split.psi) / (3 * r)
    return make_report(THM1, lhs, rhs, p, depth=2, d=d, started=t0)


def check_corollary_exact_division(
    d: int, p: int, cache: BernoulliCache | None = None
) -> CongruenceReport:
    """Depth-1 congruence for p exactly dividing u (p > 5).

    (2h/delta)(u/(pt)) = (1/p)(3 B_{r,psi} - B_{3r,psi}/3)  (mod p).
    Raises if v_p(u) != 1: the statement's hypothesis fails and no verdict
    is meaningful.
    """
    t0 = time.perf_counter()
    _require_split_shape(d, p, p_floor=5)
    c = cache or DEFAULT_CACHE
    unit = fundamental_unit(d)
    v = 0
    uu = unit.u
    while uu % p == 0:
        uu //= p
        v += 1
    if v != 1:
        raise ValueError(f"statement needs v_p(u) = 1; v_{p}(u) = {v} for d = {d}")
    split = split_character(d, p, check=False)
    h, _ = class_number(d)
    r = split.r
    lhs = Fraction(2 * h, split.delta) * Fraction(unit.u, p * unit.t)
    rhs = (3 * c.gen_bernoulli(r, split.psi) - c.gen_bernoulli(3 * r, split.psi) / 3) / p
    return make_report(COR_EXACT_DIV, lhs, rhs, p, depth=1, d=d, started=t0)


def check_super_aacm_criterion(
    d: int, p: int, cache: BernoulliCache | None = None
) -> CongruenceReport:
    """Depth-2 detector 9 B_{r,psi} = B_{3r,psi} (mod p^2), p > 5, p | d.

    Contrapositive use only: failure certifies p^2 does not divide u.
    """
    t0 = time.perf_counter()
    _require_split_shape(d, p, p_floor=5)
    c = cache or DEFAULT_CACHE
    split = split_character(d, p, check=False)
    r = split.r
    lhs = 9 * c.gen_bernoulli(r, split.psi)
    rhs = c.gen_bernoulli(3 * r, split.psi)
    return make_report(SUPER_AACM_CRIT, lhs, rhs, p, depth=2, d=d, started=t0)


def check_lehmer_thm2(p: int, k: int, cache: BernoulliCache | None = None) -> CongruenceReport:
    """Depth-1 Wilson-quotient congruence B_{k(p-1)} + 1/p - 1 = k W_p (mod p).

    Checked literally for any odd prime; genuinely false at p = 3 for
    k = 1 mod 3, k > 1 (see module docstring), true for p > 3.
    """
    t0 = time.perf_counter()
    if p < 3 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    if k < 1:
        raise ValueError("k must be >= 1")
    c = cache or DEFAULT_CACHE
    lhs = c.bernoulli(k * (p - 1)) + Fraction(1, p) - 1
    rhs = k * wilson_quotient(p)
    return make_report(LEHMER_THM2, lhs, rhs, p, depth=1, k=k, started=t0)


def check_lehmer_diff(p: int, cache: BernoulliCache | None = None) -> CongruenceReport:
    """Depth-1 congruence B_{2(p-1)} - B_{p-1} = W_p (mod p)."""
    t0 = time.perf_counter()
    if p < 3 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    c = cache or DEFAULT_CACHE
    lhs = c.bernoulli(2 * (p - 1)) - c.bernoulli(p - 1)
    rhs = wilson_quotient(p)
    return make_report(LEHMER_DIFF, lhs, rhs, p, depth=1, started=t0)


def check_theorem3(p: int, k: int, cache: BernoulliCache | None = None) -> CongruenceReport:
    """Depth-2 Wilson-quotient identity, k^2-corrected.

    k(p-1) W_p (1 + p W_p / 2)
        = -B_{k(p-1)} + R + k^2 (B_{2(p-1)} - B_{p-1}) - (k^2/2)(B_{2(p-1)} - R)
    (mod p^2), R = 1 - 1/p.  The variant with k in place of k^2 appears in
    print but contradicts its own proof and fails numerically for every
    k >= 2; both facts are pinned by tests.
    """
    t0 = time.perf_counter()
    if p <= 5 or not is_prime(p):
        raise ValueError(f"need a prime p > 5, got {p}")
    if k < 1:
        raise ValueError("k must be >= 1")
    c = cache or DEFAULT_CACHE
    w = wilson_quotient(p)
    R = 1 - Fraction(1, p)
    b1 = c.bernoulli(p - 1)
    b2 = c.bernoulli(2 * (p - 1))
    lhs = k * (p - 1) * w * (1 + p * w / 2)
    k2 = k * k
    rhs = -c.bernoulli(k * (p - 1)) + R + k2 * (b2 - b1) - Fraction(k2, 2) * (b2 - R)
    return make_report(THM3, lhs, rhs, p, depth=2, k=k, started=t0)


def check_super_wilson_criterion(p: int, cache: BernoulliCache | None = None) -> CongruenceReport:
    """Depth-2 detector 4(B_{p-1} - R) = B_{2(p-1)} - R (mod p^2).

    Contrapositive use only: failure certifies p is not super-Wilson
    (p^2 does not divide W_p).
    """
    t0 = time.perf_counter()
    if p <= 3 or not is_prime(p):
        raise ValueError(f"need a prime p > 3, got {p}")
    c = cache or DEFAULT_CACHE
    R = 1 - Fraction(1, p)
    lhs = 4 * (c.bernoulli(p - 1) - R)
    rhs = c.bernoulli(2 * (p - 1)) - R
    return make_report(SUPER_WILSON_CRIT, lhs, rhs, p, depth=2, started=t0)


# -- scans --------------------------------------------------------------------


@dataclass(frozen=True)
class ScanConfig:
    """Grid description for a scan over one statement."""

    statement: str
    d_max: int | None = None
    p_min: int = 7
    p_max: int | None = None
    k_max: int = 5
    include_p5: bool = False
    long_running: bool = False
    jobs: int = 1
    kappa: int = 2

    def __post_init__(self) -> None:
        if self.statement not in STATEMENTS:
            raise ValueError(f"unknown statement {self.statement!r}")
        if self.kappa < 2:
            raise ValueError("kappa must be >= 2")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def _squarefree_pm_grid(d_max: int, ps: list[int]) -> list[tuple[int, int]]:
    grid = []
    for p in ps:
        for m in range(1, d_max // p + 1):
            d = p * m
            if d > 5 and m % p != 0 and is_squarefree(d):
                grid.append((d, p))
    return sorted(grid)


def build_instances(cfg: ScanConfig) -> list[tuple]:
    """The deterministic instance list for a scan config."""
    stmt = cfg.statement
    if stmt in (THM1, SUPER_AACM_CRIT, COR_EXACT_DIV):
        if cfg.d_max is None or cfg.p_max is None:
            raise ValueError(f"{stmt} scans need d_max and p_max")
        p_lo = max(cfg.p_min, 7)
        ps = [p for p in primes_up_to(cfg.p_max) if p >= p_lo]
        if stmt == THM1 and cfg.include_p5 and cfg.p_max >= 5:
            ps = [5] + ps  # advisory instances, outside the default gate
        grid = _squarefree_pm_grid(cfg.d_max, ps)
        if stmt == COR_EXACT_DIV:
            grid = [(d, p) for (d, p) in grid if vp_u(d, p) == 1]
        return [(stmt, d, p, None) for d, p in grid]
    if cfg.p_max is None:
        raise ValueError(f"{stmt} scans need p_max")
    primes = [p for p in primes_up_to(cfg.p_max) if p >= cfg.p_min]
    if stmt == AAC_CLASSICAL:
        return [(stmt, None, p, None) for p in primes if p % 4 == 1 and p >= 5]
    if stmt == LEHMER_THM2:
        return [(stmt, None, p, k) for p in primes if p >= 3
                for k in range(1, cfg.k_max + 1)]
    if stmt == LEHMER_DIFF:
        return [(stmt, None, p, None) for p in primes if p >= 3]
    if stmt == THM3:
        return [(stmt, None, p, k) for p in primes if p > 5
                for k in range(1, cfg.k_max + 1)]
    if stmt == SUPER_WILSON_CRIT:
        return [(stmt, None, p, None) for p in primes if p > 3]
    raise ValueError(f"unknown statement {stmt!r}")


def run_instance(instance: tuple) -> CongruenceReport:
    """Evaluate one (statement, d, p, k) instance against the default cache."""
    stmt, d, p, k = instance
    if stmt == AAC_CLASSICAL:
        return check_aac_classical(p)
    if stmt == THM1:
        return check_theorem1(d, p)
    if stmt == COR_EXACT_DIV:
        return check_corollary_exact_division(d, p)
    if stmt == SUPER_AACM_CRIT:
        return check_super_aacm_criterion(d, p)
    if stmt == LEHMER_THM2:
        return check_lehmer_thm2(p, k)
    if stmt == LEHMER_DIFF:
        return check_lehmer_diff(p)
    if stmt == THM3:
        return check_theorem3(p, k)
    if stmt == SUPER_WILSON_CRIT:
        return check_super_wilson_criterion(p)
    raise ValueError(f"unknown statement {stmt!r}")


def _worker(instance: tuple):
    try:
        before = {(n, disc) for n, disc, _ in DEFAULT_CACHE.entries()}
        report = run_instance(instance)
        entries = [(n, disc, str(v.numerator), str(v.denominator))
                   for n, disc, v in DEFAULT_CACHE.entries() if (n, disc) not in before]
        return report, entries, None
    except Exception as exc:  # aggregated, never aborts the scan
        return None, [], f"{instance}: {exc}"


@dataclass
class ScanResult:
    reports: list[CongruenceReport] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    alerts: list[str] = field(default_factory=list)
    new_cache_entries: list[tuple] = field(default_factory=list)


def scan(cfg: ScanConfig, cache: BernoulliCache | None = None) -> ScanResult:
    """Run every instance of the configured grid; deterministic report order.

    Instances are independent; with jobs > 1 they are farmed to forked
    workers, each of which starts from a copy of the shared cache and
    ships back what it computed so the parent can persist it.
    """
    instances = build_instances(cfg)
    result = ScanResult()
    if cfg.jobs == 1 or len(instances) <= 1:
        for inst in instances:
            try:
                result.reports.append(run_instance(inst))
            except Exception as exc:
                result.errors.append(f"{inst}: {exc}")
    else:
        ctx = get_context("fork")
        with ctx.Pool(processes=cfg.jobs) as pool:
            for report, entries, err in pool.imap(_worker, instances, chunksize=4):
                if err is not None:
                    result.errors.append(err)
                    continue
                result.reports.append(report)
                result.new_cache_entries.extend(entries)
        if result.new_cache_entries:
            merged = []
            for n, disc, num, den in result.new_cache_entries:
                merged.append((n, disc, Fraction(int(num), int(den))))
            (cache or DEFAULT_CACHE).merge(merged)
    result.reports.sort(key=lambda r: r.sort_key())
    # weak-divisibility alert: d^kappa | u never expected; surface any
    # p-power divisibility of u at or beyond the configured kappa
    if cfg.statement in (THM1, SUPER_AACM_CRIT):
        for rep in result.reports:
            if rep.d is not None:
                v = vp_u(rep.d, rep.p)
                if v >= cfg.kappa:
                    result.alerts.append(
                        f"v_{rep.p}(u) = {v} >= kappa = {cfg.kappa} at d = {rep.d}"
                    )
    return result
