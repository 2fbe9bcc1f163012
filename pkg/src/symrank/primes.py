"""Prime generation, gap-condition scanning, and selection of the consecutive
prime pair that realizes the bound pipeline's threshold inequalities.

A gap policy is a pair (alpha, x_alpha) asserting that consecutive primes
satisfy l_{k+1} - l_k <= l_k**alpha from x_alpha on.  Three policies are
supported: the Baker-Harman-Pintz exponent 21/40 (whose validity floor has
never been published), Dudek's exponent 2/3 with the explicit floor
exp(exp(33.3)), and an empirical policy whose floor is established by an
exhaustive sieve scan up to a stated limit.  exp(exp(33.3)) is kept symbolic
throughout: it is around 10**(1.2*10**14) and must never be materialized.

All gap comparisons are exact integer arithmetic: with alpha = c/d in lowest
terms, gap <= l**alpha is decided as gap**d <= l**c.
"""

from __future__ import annotations

import enum
import time
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .ntheory import is_prime

DEFAULT_SIEVE_LIMIT = 10_000_000
SIEVE_MEMORY_CAP = 1_000_000_000
DUDEK_X_ALPHA_EXPR = "exp(exp(33.3))"


class PairSelectionError(ValueError):
    """Pair selection cannot proceed (threshold below 2)."""


def _sieve_flags(limit: int) -> bytearray:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    i = 2
    while i * i <= limit:
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
        i += 1
    return flags


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to `limit`, ascending, with ordered lookups."""

    limit: int
    primes: tuple[int, ...]

    def __contains__(self, n: int) -> bool:
        i = bisect_left(self.primes, n)
        return i < len(self.primes) and self.primes[i] == n

    def prev_prime(self, x: int) -> int:
        """Largest prime <= x."""
        i = bisect_right(self.primes, x)
        if i == 0:
            raise ValueError(f"no prime <= {x}")
        return self.primes[i - 1]

    def next_prime(self, x: int) -> int:
        """Smallest prime > x."""
        i = bisect_right(self.primes, x)
        if i >= len(self.primes):
            raise ValueError(f"next prime after {x} exceeds table limit {self.limit}")
        return self.primes[i]

    def count_between(self, lo: int, hi: int) -> int:
        """Number of primes p with lo < p < hi."""
        return bisect_left(self.primes, hi) - bisect_right(self.primes, lo)


def sieve(limit: int) -> PrimeTable:
    """Eratosthenes table of all primes <= limit."""
    if limit < 2:
        raise ValueError("sieve limit must be >= 2")
    if limit > SIEVE_MEMORY_CAP:
        raise ValueError(f"sieve limit {limit} exceeds memory cap {SIEVE_MEMORY_CAP}")
    flags = _sieve_flags(limit)
    return PrimeTable(limit, tuple(i for i in range(2, limit + 1) if flags[i]))


@dataclass(frozen=True)
class GapScan:
    """Result of scanning successor gaps against l**alpha below a limit."""

    limit: int
    alpha: Fraction
    violations: tuple[int, ...]
    max_gap_seen: int
    runtime_ms: float

    def to_json_dict(self, include_timing: bool = True) -> dict:
        out = {
            "limit": self.limit,
            "alpha": f"{self.alpha.numerator}/{self.alpha.denominator}",
            "violations": list(self.violations),
            "max_gap_seen": self.max_gap_seen,
        }
        if include_timing:
            out["runtime_ms"] = self.runtime_ms
        return out


def verify_gaps(limit: int, alpha: Fraction) -> GapScan:
    """Every prime l < limit whose successor gap exceeds l**alpha.

    The comparison is exact: gap**d <= l**c with alpha = c/d in lowest terms.
    The successor of the largest prime below `limit` is always included in the
    scan, extending the sieve past `limit` as needed.
    """
    if limit < 3:
        raise ValueError("gap scan limit must be >= 3")
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    start = time.monotonic()
    c, d = alpha.numerator, alpha.denominator
    margin = 2000  # covers the successor of the last prime below any limit under the cap
    while True:
        table = sieve(limit + margin)
        if table.primes[-1] >= limit:
            break
        margin *= 4
    violations = []
    max_gap = 0
    primes = table.primes
    for i in range(len(primes) - 1):
        l = primes[i]
        if l >= limit:
            break
        gap = primes[i + 1] - l
        if gap > max_gap:
            max_gap = gap
        if gap**d > l**c:
            violations.append(l)
    runtime_ms = (time.monotonic() - start) * 1000.0
    return GapScan(limit, alpha, tuple(violations), max_gap, runtime_ms)


# ---------------------------------------------------------------------------
# extended integers: finite, unknown, or linear in the symbolic Dudek floor


@dataclass(frozen=True)
class ExtendedInt:
    """A finite rational, an unknown, or coeff*exp(exp(33.3)) + offset."""

    kind: str  # "finite" | "unknown" | "symbolic"
    value: Fraction | None = None
    coeff: Fraction | None = None
    offset: Fraction | None = None

    @classmethod
    def finite(cls, v) -> "ExtendedInt":
        return cls("finite", value=Fraction(v))

    @classmethod
    def unknown(cls) -> "ExtendedInt":
        return cls("unknown")

    @classmethod
    def symbolic(cls, coeff=1, offset=0) -> "ExtendedInt":
        return cls("symbolic", coeff=Fraction(coeff), offset=Fraction(offset))

    def scale_add(self, a, b) -> "ExtendedInt":
        """a*self + b, staying in the extended domain."""
        a, b = Fraction(a), Fraction(b)
        if self.kind == "finite":
            return ExtendedInt.finite(a * self.value + b)
        if self.kind == "unknown":
            return ExtendedInt.unknown()
        return ExtendedInt("symbolic", coeff=a * self.coeff, offset=a * self.offset + b)

    def satisfied_by(self, n: int) -> bool:
        """Whether n >= self is certain.

        Unknown thresholds can never be certified.  Symbolic thresholds carry
        a positive multiple of exp(exp(33.3)), astronomically above any
        representable n, so they are never satisfied either.
        """
        if self.kind == "finite":
            return Fraction(n) >= self.value
        return False

    def render(self) -> str:
        if self.kind == "finite":
            v = self.value
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        if self.kind == "unknown":
            return "unknown"
        def frac(x: Fraction) -> str:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        head = DUDEK_X_ALPHA_EXPR if self.coeff == 1 else f"{frac(self.coeff)}*{DUDEK_X_ALPHA_EXPR}"
        if self.offset == 0:
            return head
        return f"{head}+{frac(self.offset)}" if self.offset > 0 else f"{head}-{frac(-self.offset)}"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class GapPolicy:
    """The (alpha, x_alpha) pair justifying the gap condition in the pipeline."""

    name: str  # "bhp" | "dudek" | "empirical"
    alpha: Fraction
    x_alpha: ExtendedInt
    verified_limit: int | None = None  # empirical: sieve-checked up to here

    def __post_init__(self):
        if self.name == "bhp":
            if self.alpha != Fraction(21, 40) or self.x_alpha.kind != "unknown":
                raise ValueError("bhp policy requires alpha=21/40 and unknown x_alpha")
        elif self.name == "dudek":
            if self.alpha != Fraction(2, 3) or self.x_alpha.kind != "symbolic":
                raise ValueError("dudek policy requires alpha=2/3 and symbolic x_alpha")
        elif self.name == "empirical":
            if not 0 < self.alpha < 1:
                raise ValueError("empirical alpha must lie in (0, 1)")
            if self.x_alpha.kind != "finite" or self.verified_limit is None:
                raise ValueError("empirical policy requires a finite floor and a sieve limit")
        else:
            raise ValueError(f"unknown policy name {self.name!r}")

    @classmethod
    def bhp(cls) -> "GapPolicy":
        return cls("bhp", Fraction(21, 40), ExtendedInt.unknown())

    @classmethod
    def dudek(cls) -> "GapPolicy":
        return cls("dudek", Fraction(2, 3), ExtendedInt.symbolic())

    @classmethod
    def empirical(cls, alpha, floor: int, verified_limit: int) -> "GapPolicy":
        return cls("empirical", Fraction(alpha), ExtendedInt.finite(floor), verified_limit)

    @classmethod
    def empirical_from_sieve(cls, alpha, limit: int) -> "GapPolicy":
        """Empirical policy whose floor is the smallest prime from which the
        gap condition is violation-free up to `limit`."""
        scan = verify_gaps(limit, Fraction(alpha))
        table = sieve(max(100, (scan.violations[-1] if scan.violations else 2) + 200))
        floor = table.next_prime(scan.violations[-1]) if scan.violations else 2
        return cls.empirical(alpha, floor, limit)

    def to_json_dict(self) -> dict:
        out = {
            "name": self.name,
            "alpha": f"{self.alpha.numerator}/{self.alpha.denominator}",
            "x_alpha": self.x_alpha.render(),
        }
        if self.verified_limit is not None:
            out["verified_limit"] = self.verified_limit
        return out


class PairFamily(enum.Enum):
    """Which threshold inequality governs the pair, by target field and level.

    Generic families use the level-11 curve family (valid for p != 11) and the
    threshold (2n-p-1)/(p-3); eleven families use the level-23 family for
    p = 11 and the threshold (n-p+1)/(p-3).  Degenerate level factors are
    skipped during selection: l = p (bad reduction) always, l = 11 in generic
    families and l = 23 in eleven families (level not squarefree).
    """

    QUADRATIC_GENERIC = "quadratic-generic"
    QUADRATIC_ELEVEN = "quadratic-eleven"
    PRIME_GENERIC = "prime-generic"
    PRIME_ELEVEN = "prime-eleven"

    @property
    def is_eleven(self) -> bool:
        return self in (PairFamily.QUADRATIC_ELEVEN, PairFamily.PRIME_ELEVEN)

    def validate_p(self, p: int) -> None:
        if p < 5 or not is_prime(p):
            raise ValueError(f"p must be a prime >= 5, got {p}")
        if self.is_eleven and p != 11:
            raise ValueError(f"{self.value} family requires p = 11")
        if not self.is_eleven and p == 11:
            raise ValueError(f"{self.value} family requires p != 11")

    def threshold(self, p: int, n: int) -> Fraction:
        if self.is_eleven:
            return Fraction(n - p + 1, p - 3)
        return Fraction(2 * n - p - 1, p - 3)

    def skip_set(self, p: int) -> frozenset[int]:
        return frozenset({p, 23 if self.is_eleven else 11})


@dataclass(frozen=True)
class PrimePair:
    """Consecutive primes realizing l_k <= T < l_{k+1}, with any skips noted.

    When `skipped` is nonempty the two primes are not literally consecutive:
    degenerate level factors between them were passed over.
    """

    l_k: int
    l_k1: int
    threshold: Fraction
    gap: int
    skipped: tuple[int, ...] = field(default=())


def select_pair(
    p: int, n: int, family: PairFamily, table: PrimeTable | None = None
) -> PrimePair:
    """The prime pair realizing the family's threshold inequalities.

    l_k is the largest non-degenerate prime <= T and l_{k+1} the next
    non-degenerate prime after it; the threshold comparison is exact rational
    arithmetic, and l_k = T is accepted (the defining inequality at l_k is
    non-strict).
    """
    family.validate_p(p)
    threshold = family.threshold(p, n)
    if threshold < 2:
        raise PairSelectionError(
            f"n too small for family: threshold {threshold} < 2 (p={p}, n={n}, {family.value})"
        )
    t_floor = int(threshold)  # threshold >= 2 > 0, so int() floors
    if table is None or table.limit < 2 * t_floor + 2000:
        table = sieve(max(100, 2 * t_floor + 2000))
    skips = family.skip_set(p)
    skipped = []
    l_k = table.prev_prime(t_floor)
    while l_k in skips:
        skipped.append(l_k)
        l_k = table.prev_prime(l_k - 1)
    l_k1 = table.next_prime(l_k)
    while l_k1 in skips:
        if l_k1 not in skipped:
            skipped.append(l_k1)
        l_k1 = table.next_prime(l_k1)
    assert l_k <= threshold < l_k1
    return PrimePair(l_k, l_k1, threshold, l_k1 - l_k, tuple(sorted(set(skipped))))


def policy_floor(policy: GapPolicy, family: PairFamily, p: int) -> ExtendedInt:
    """The n-threshold above which the closed-form bound is unconditional.

    Generic families require n >= (p-3)/2 * x_alpha + (p+1)/2; eleven families
    require n >= (p-3) * x_alpha + (p-1).  Unknown or symbolic x_alpha
    propagates to an unknown or symbolic threshold.
    """
    family.validate_p(p)
    if family.is_eleven:
        return policy.x_alpha.scale_add(p - 3, p - 1)
    return policy.x_alpha.scale_add(Fraction(p - 3, 2), Fraction(p + 1, 2))
