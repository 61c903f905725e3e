"""Factorial moments of diagonal statistics and Poisson comparisons.

The joint cell laws on the second and third diagonals have product
form, so the r-th factorial moment of each diagonal count is r! times
a sum of products over admissible column r-subsets.  A change of
variables turns those sums into complete monotone-tuple sums that a
small two-dimensional recurrence evaluates exactly, which is what
makes sizes in the hundreds reachable: no tableau is ever enumerated.

Moment sequences convert to exact laws by inclusion-exclusion (the
count's support is finite, so finitely many factorial moments pin the
distribution down), and total variation distances to the Poisson
limits are evaluated in interval arithmetic with an analytically
summed tail, escalating the working precision until the enclosure is
tighter than the requested tolerance.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath

from . import dpcount
from .measure import Weights, _as_fraction, falling_factorial, rising_factorial
from .pmf import Pmf

#: Limit law rates: symbol counts on either diagonal tend to
#: Poisson(1/2), nonempty counts to Poisson(1).
POISSON_RATES: Dict[str, Fraction] = {
    "A2": Fraction(1, 2),
    "B2": Fraction(1, 2),
    "X2": Fraction(1),
    "A3": Fraction(1, 2),
    "X3": Fraction(1),
}

CSV_HEADER = "n,r1,r2,r3,r4,tv"

_KINDS = ("alpha", "beta", "nonempty")
_MODES = ("exact_dp", "main_term")


def second_diag_max_count(n: int) -> int:
    """Most cells the second diagonal can hold: no two adjacent."""
    return n // 2


def third_diag_max_count(n: int) -> int:
    """Most cells the third diagonal can hold.

    Columns at distance exactly two exclude each other, so the odd and
    even column positions form two independent exclusion paths.
    """
    m = n - 2
    if m <= 0:
        return 0
    odd, even = (m + 1) // 2, m // 2
    return (odd + 1) // 2 + (even + 1) // 2


def _tuple_sum_table(factor: Callable[[int, int], Fraction], tmax: int,
                     kmax: int) -> List[List[Fraction]]:
    """Sums of factor products over monotone tuples.

    ``T[t][k]`` is the sum over non-decreasing tuples
    ``0 <= u_1 <= ... <= u_k <= t - 1`` of ``prod_l factor(u_l + 1, l)``,
    via ``T[t][k] = T[t-1][k] + factor(t, k) * T[t][k-1]`` (the last
    coordinate either stays below t - 1 or sits exactly there).
    """
    table = [[Fraction(1)] + [Fraction(0)] * kmax]
    for t in range(1, tmax + 1):
        row = [Fraction(1)]
        for k in range(1, kmax + 1):
            row.append(table[t - 1][k] + factor(t, k) * row[k - 1])
        table.append(row)
    return table


def _check_kind(kind: str) -> None:
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")


def _check_r(R: int, cap: int) -> None:
    if not 1 <= R <= cap + 1:
        raise ValueError(f"R must lie in 1..{cap + 1}, got {R}")


def factorial_moments_second_diag(n: int, w: Weights, kind: str,
                                  R: int) -> List[Fraction]:
    """Exact factorial moments 1..R of a second-diagonal count.

    The moment is r! times the sum of the closed joint laws over
    column r-subsets; subsets with adjacent columns carry no mass, and
    the gap-two subsets reindex to monotone tuples.
    """
    _check_kind(kind)
    if n < 1:
        raise ValueError("n must be at least 1")
    _check_r(R, second_diag_max_count(n))
    if kind == "beta":
        return factorial_moments_second_diag(n, w.swapped(), "alpha", R)
    s = n + w.a + w.b
    if kind == "nonempty":
        return [
            Fraction(math.factorial(r) * math.comb(n - r, r))
            / rising_factorial(s - r, r)
            for r in range(1, R + 1)
        ]
    table = _tuple_sum_table(lambda t, k: w.b + t - 1, max(n - 1, 0), R)
    out = []
    for r in range(1, R + 1):
        t = n - 2 * r + 1
        total = table[t][r] if t >= 1 else Fraction(0)
        out.append(math.factorial(r) * total / falling_factorial(s - 1, 2 * r)
                   if total else Fraction(0))
    return out


def factorial_moments_third_diag(n: int, w: Weights, kind: str, R: int,
                                 mode: str = "exact_dp") -> List[Fraction]:
    """Factorial moments 1..R of a third-diagonal count.

    ``exact_dp`` reads the exact law off the counting engine, so every
    admissible column pattern contributes, including the
    lower-probability adjacent ones.  ``main_term`` sums the
    leading-order product laws over column subsets with all gaps at
    least three; the two agree up to one extra power of 1/(n+a+b).
    """
    _check_kind(kind)
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    if n < 1:
        raise ValueError("n must be at least 1")
    _check_r(R, third_diag_max_count(n))
    if kind == "beta":
        return factorial_moments_third_diag(n, w.swapped(), "alpha", R, mode)
    if mode == "exact_dp":
        law = dpcount.statistic_pmf(n, w, "A3" if kind == "alpha" else "X3")
        return [law.factorial_moment(r) for r in range(1, R + 1)]
    s = n + w.a + w.b
    if kind == "nonempty":
        return [
            Fraction(math.factorial(r) * math.comb(max(n - 2 * r, 0), r))
            / rising_factorial(s - r, r)
            for r in range(1, R + 1)
        ]
    table = _tuple_sum_table(lambda t, k: w.b + t + k - 2, max(n - 2, 0), R)
    out = []
    for r in range(1, R + 1):
        t = n - 3 * r + 1
        total = table[t][r] if t >= 1 else Fraction(0)
        out.append(math.factorial(r) * total / falling_factorial(s - 1, 2 * r)
                   if total else Fraction(0))
    return out


def pmf_from_factorial_moments(m: Sequence) -> Pmf:
    """Invert factorial moments into the law they came from.

    ``m[r]`` is the r-th factorial moment, so ``m[0]`` must equal 1,
    and moments beyond ``len(m) - 1`` are taken to vanish; that is
    exact precisely when the support fits in ``0..len(m) - 1``.
    Inconsistent input surfaces as a negative reconstructed mass.
    """
    mus = [_as_fraction(x, f"m[{i}]") for i, x in enumerate(m)]
    if not mus or mus[0] != 1:
        raise ValueError("m[0] must be 1, the zeroth factorial moment")
    top = len(mus) - 1
    masses = []
    for k in range(top + 1):
        mass = sum(
            (-1) ** (r - k) * mus[r]
            / (math.factorial(k) * math.factorial(r - k))
            for r in range(k, top + 1)
        )
        if mass < 0:
            raise ValueError(
                f"moments are inconsistent: reconstructed mass at {k} is {mass}"
            )
        masses.append(mass)
    return Pmf(tuple(masses))


def exact_statistic_pmf(n: int, w: Weights, statistic: str) -> Pmf:
    """The exact law of a named diagonal statistic.

    Second-diagonal counts go through the closed moment formulas and
    inversion, which works at any size; the rest need the counting
    engine and inherit its size limit.
    """
    if statistic in ("A2", "B2", "X2"):
        kind = {"A2": "alpha", "B2": "beta", "X2": "nonempty"}[statistic]
        cap = second_diag_max_count(n)
        mus = [Fraction(1)]
        if cap >= 1:
            mus.extend(factorial_moments_second_diag(n, w, kind, cap))
        return pmf_from_factorial_moments(mus)
    if statistic in ("A3", "X3", "Nalpha", "Nbeta"):
        return dpcount.statistic_pmf(n, w, statistic)
    raise ValueError(f"unknown statistic {statistic!r}")


def tv_to_poisson(p: Pmf, lam, precision: float = 1e-12) -> float:
    """Total variation distance between a finite law and Poisson(lam).

    The Poisson mass beyond the law's support all counts toward the
    distance, so the infinite tail reduces to 1 minus a finite sum and
    the whole distance is a finite expression.  It is evaluated in
    interval arithmetic, doubling the working precision until the
    enclosure is narrower than ``precision``.
    """
    lam = _as_fraction(lam, "lam")
    if lam <= 0:
        raise ValueError("lam must be positive")
    if precision <= 0:
        raise ValueError("precision must be positive")
    top = p.max_value
    saved = mpmath.iv.dps
    try:
        for dps in (40, 80, 160, 320, 640):
            mpmath.iv.dps = dps
            lam_iv = mpmath.iv.mpf(lam.numerator) / mpmath.iv.mpf(lam.denominator)
            decay = mpmath.iv.exp(-lam_iv)
            power = mpmath.iv.mpf(1)
            gap = mpmath.iv.mpf(0)
            seen = mpmath.iv.mpf(0)
            for k in range(top + 1):
                pois = decay * power / math.factorial(k)
                mass = p.mass(k)
                exact = mpmath.iv.mpf(mass.numerator) / mpmath.iv.mpf(mass.denominator)
                gap += abs(exact - pois)
                seen += pois
                power *= lam_iv
            tv = (gap + (1 - seen)) / 2
            if float(mpmath.mpf(tv.delta)) < precision:
                return float(mpmath.mpf(tv.mid))
    finally:
        mpmath.iv.dps = saved
    raise ArithmeticError("could not enclose the distance tightly enough")


@dataclass(frozen=True, slots=True)
class ConvergenceRow:
    """One size's moment profile and Poisson distance."""

    n: int
    moments: Tuple[Fraction, Fraction, Fraction, Fraction]
    tv: float

    def as_csv(self) -> str:
        return ",".join(
            [str(self.n)]
            + [repr(float(mu)) for mu in self.moments]
            + [repr(self.tv)]
        )


def _convergence_row(args) -> ConvergenceRow:
    n, w, statistic, lam = args
    law = exact_statistic_pmf(n, w, statistic)
    moments = tuple(law.factorial_moment(r) for r in range(1, 5))
    return ConvergenceRow(n=n, moments=moments, tv=tv_to_poisson(law, lam))


def convergence_report(ns: Sequence[int], w: Weights, statistic: str,
                       lam=None, threads: Optional[int] = None) -> List[ConvergenceRow]:
    """Exact moments and Poisson distance across a range of sizes.

    Each row holds the first four factorial moments of the statistic's
    exact law (beyond the support they are exact zeros) and its total
    variation distance to the statistic's own Poisson limit; a ``lam``
    that contradicts that pairing is rejected rather than silently
    gauged against the wrong target.
    """
    ns = [int(n) for n in ns]
    if not ns or any(n < 1 for n in ns):
        raise ValueError("ns must be a nonempty list of positive sizes")
    rate = POISSON_RATES.get(statistic)
    if rate is None:
        raise ValueError(f"{statistic!r} has no Poisson limit pairing")
    if lam is None:
        lam = rate
    elif _as_fraction(lam, "lam") != rate:
        raise ValueError(
            f"{statistic} pairs with Poisson({rate}); refusing lam={lam}"
        )
    jobs = [(n, w, statistic, lam) for n in ns]
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_convergence_row, jobs))
    return [_convergence_row(job) for job in jobs]
