"""Genus and rational-point data for the two modular-curve families the bound
pipeline relies on, plus the general genus formula for X0(N) as a cross-check.

The two families are X0(11*l) with genus l (for prime l not in {11, p}) and
X0(23*l) with genus 2l+1 (for prime l not in {23, 11}), reduced modulo the
working characteristic p.  Their supersingular points give lower bounds on
the number of points rational over GF(p^2): (p-1)(l+1) for the first family
and 2(p-1)(l+1) for the second.  Descending to GF(p), the identity
N1(over p^2) = N1(over p) + 2*N2(over p) turns the same number into a lower
bound on N1 + 2*N2.  Both closed-form genus facts are cross-checked against
the general formula on every construction.

No exact point counts are computed here, only the family lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .ntheory import divisors, euler_phi, factorize, is_prime


@dataclass(frozen=True)
class Gamma0Data:
    """Index, elliptic point counts, cusp count and genus of X0(N)."""

    N: int
    mu: int
    nu2: int
    nu3: int
    nu_inf: int
    genus: int

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "mu": self.mu,
            "nu2": self.nu2,
            "nu3": self.nu3,
            "nu_inf": self.nu_inf,
            "genus": self.genus,
        }


def _sym_minus_one(p: int) -> int:
    # (-1 | p) by residue class mod 4, with the p = 2 convention 0
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def _sym_minus_three(p: int) -> int:
    # (-3 | p) by residue class mod 3, with the p = 3 convention 0
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def genus_X0(N: int) -> Gamma0Data:
    """Genus of the modular curve X0(N) from index and torsion data.

    mu is the index of Gamma_0(N); nu2 and nu3 count elliptic points of order
    2 and 3; nu_inf counts cusps; the genus follows from
    genus = 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2.  Exact arithmetic for all
    N >= 1, including the 4|N and 9|N degenerate rules.
    """
    if N < 1:
        raise ValueError("level must be >= 1")
    fac = factorize(N) if N > 1 else {}
    mu = N
    for p in fac:
        mu = mu // p * (p + 1)
    if N % 4 == 0:
        nu2 = 0
    else:
        nu2 = 1
        for p in fac:
            nu2 *= 1 + _sym_minus_one(p)
    if N % 9 == 0:
        nu3 = 0
    else:
        nu3 = 1
        for p in fac:
            nu3 *= 1 + _sym_minus_three(p)
    nu_inf = sum(euler_phi(gcd(d, N // d)) for d in divisors(N))
    genus = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(nu_inf, 2)
    if genus.denominator != 1 or genus < 0:
        raise AssertionError(f"genus formula produced {genus} for N={N}")
    return Gamma0Data(N, mu, nu2, nu3, nu_inf, int(genus))


@dataclass(frozen=True)
class CurveFamilyData:
    """One member of a curve family, reduced mod p, with its point bounds.

    n1_lower_p2 bounds the number of degree-1 places over GF(p^2);
    n1_2n2_lower_p bounds N1 + 2*N2 over GF(p) and equals n1_lower_p2 by the
    descent identity.
    """

    family: str  # "11l" | "23l"
    l: int
    N: int
    genus: int
    p: int
    n1_lower_p2: int
    n1_2n2_lower_p: int

    def __post_init__(self):
        if self.n1_2n2_lower_p != self.n1_lower_p2:
            raise AssertionError("descent identity violated")

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "l": self.l,
            "N": self.N,
            "genus": self.genus,
            "p": self.p,
            "n1_lower_p2": self.n1_lower_p2,
            "n1_2n2_lower_p": self.n1_2n2_lower_p,
        }


def family_data(p: int, l: int) -> CurveFamilyData:
    """Family member for characteristic p and level factor l.

    p != 11 selects the 11l family (genus l, N1 over GF(p^2) at least
    (p-1)(l+1)); p = 11 selects the 23l family (genus 2l+1, bound
    2(p-1)(l+1)).  Degenerate l (= p, or the family's fixed factor) is
    rejected.  The genus closed form is cross-checked against genus_X0.
    """
    if p < 5 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 5, got {p}")
    if not is_prime(l):
        raise ValueError(f"level factor must be prime, got {l}")
    if p == 11:
        if l in (23, 11):
            raise ValueError(f"degenerate level factor l={l} for the 23l family")
        family, N, genus = "23l", 23 * l, 2 * l + 1
        n1 = 2 * (p - 1) * (l + 1)
    else:
        if l in (11, p):
            raise ValueError(f"degenerate level factor l={l} for the 11l family (p={p})")
        family, N, genus = "11l", 11 * l, l
        n1 = (p - 1) * (l + 1)
    check = genus_X0(N).genus
    if check != genus:
        raise AssertionError(f"family genus {genus} disagrees with formula {check} at N={N}")
    return CurveFamilyData(family, l, N, genus, p, n1, n1)


def check_rr_hypothesis(q: int, n: int, g: int) -> bool:
    """Decide 2g+1 <= q**((n-1)/2) * (sqrt(q)-1) exactly.

    The single half-integer power is isolated and the inequality squared once,
    so the decision is pure big-integer arithmetic.  For odd n the condition
    becomes (2g+1 + q**((n-1)/2))**2 <= q**n; for even n it becomes
    q**(n/2) - (2g+1) >= 0 and (q**(n/2) - (2g+1))**2 >= q**(n-1).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if q < 2 or g < 0:
        raise ValueError("q must be >= 2 and g >= 0")
    a = 2 * g + 1
    if n % 2 == 1:
        m = (n - 1) // 2
        return (a + q**m) ** 2 <= q**n
    lhs = q ** (n // 2) - a
    return lhs >= 0 and lhs * lhs >= q ** (n - 1)
