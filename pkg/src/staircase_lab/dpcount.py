"""Transfer-matrix counting over staircase tableaux.

The enumeration oracle answers every question by visiting all
``(n+1)!`` tableaux; this module answers the same questions in
polynomial time per state by sweeping columns left to right and
remembering only what the filling rules can still see: one bit per
live row ("does it hold a symbol yet", which decides whether a beta
may land there) and one flag per column ("is there a symbol above in
this column", which decides whether an alpha may land).  Weights
attach locally: a column's ``a`` factor is resolved the moment its
topmost symbol turns out to be a beta, a row's ``b`` factor the moment
its first symbol turns out to be an alpha.

State space is ``2^height`` per column, so sizes up to :data:`N_DP`
are practical.  Two interchangeable engines cover it:

* ``fractions``: a dictionary sweep in exact rational arithmetic,
  simple enough to audit by eye, for small sizes;
* ``crt``: numpy sweeps over residues modulo enough 31-bit primes to
  cover an a-priori bound on the scaled integer total, recombined by
  the Chinese remainder theorem.  Exact, with no modular inversions of
  data values, so parameters whose denominators share factors with a
  prime cost nothing.

Both engines honour :class:`~staircase_lab.constraints.ConstraintSet`
restrictions box by box, which is what turns the partition sum into
joint probabilities of cell events.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .constraints import ConstraintSet, Requirement
from .core import Box, second_diagonal, staircase_boxes, third_diagonal
from .formulas import BoxLaw
from .measure import Weights
from .pmf import Pmf

#: Largest size the counting engines accept; 2^22 states per column is
#: roughly the point where the arrays stop being cheap.
N_DP = 22

_ENGINES = ("auto", "crt", "fractions")


def sweep_order(n: int) -> Tuple[Box, ...]:
    """The box order both engines fill: by column, top to bottom."""
    return tuple((i, j) for j in range(1, n + 1) for i in range(1, n + 2 - j))


# ----------------------------------------------------------------------
# scaled integer weights and the prime plan

@dataclass(frozen=True, slots=True)
class ScaledWeights:
    """(a, b) = (pa/q, pb/q) over the least common denominator q.

    Scaling every tableau weight by ``q^(2n)`` makes all four local
    factors integers: an alpha contributes ``q * pb`` in a clean row
    and ``q`` in a dirty one, a beta ``q * pa`` as the column's topmost
    symbol and ``q`` otherwise.
    """

    q: int
    pa: int
    pb: int

    @classmethod
    def of(cls, w: Weights) -> "ScaledWeights":
        q = math.lcm(w.a.denominator, w.b.denominator)
        return cls(q, int(w.a * q), int(w.b * q))

    def factors(self) -> Tuple[int, int, int, int]:
        """(alpha clean, alpha dirty, beta topmost, beta below)."""
        return (self.q * self.pb, self.q, self.q * self.pa, self.q)

    def total_bound(self, n: int) -> int:
        """The scaled unconstrained total, prod_i (q(pa+pb) + i q^2).

        Every quantity either engine reads out (constrained totals,
        per-count masses) is a subsum of it, so it bounds them all.
        """
        return math.prod(
            self.q * (self.pa + self.pb) + i * self.q * self.q for i in range(n)
        )


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x % p == 0:
            return x == p
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:  # deterministic far beyond 64 bits
        y = pow(base, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(s - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def _primes_covering(bound: int) -> Tuple[int, ...]:
    """Distinct primes below 2^31 whose product exceeds ``bound``."""
    primes: List[int] = []
    candidate = (1 << 31) - 1
    product = 1
    while product <= bound:
        while not _is_prime(candidate):
            candidate -= 2
        primes.append(candidate)
        product *= candidate
        candidate -= 2
    return tuple(primes)


def _crt(residues: Sequence[int], primes: Sequence[int]) -> int:
    """The unique x with x = r_i mod p_i, 0 <= x < prod p_i."""
    x, modulus = 0, 1
    for r, p in zip(residues, primes):
        x += (r - x) * pow(modulus, -1, p) % p * modulus
        modulus *= p
    return x


# ----------------------------------------------------------------------
# shared per-box bookkeeping

def _allowed_map(n: int, c: Optional[ConstraintSet]) -> Dict[Box, str]:
    """Cell codes each box may take, merging rules and constraints."""
    if c is not None and c.n != n:
        raise ValueError(f"constraints built for size {c.n}, not {n}")
    out = {}
    for box in staircase_boxes(n):
        codes = set(".AB") if box[0] + box[1] <= n else set("AB")
        if c is not None:
            codes &= c.allowed_cells(box)
        out[box] = "".join(sorted(codes))
    return out


def _check_args(n: int, engine: str) -> None:
    if not 1 <= n <= N_DP:
        raise ValueError(f"size must be in 1..{N_DP}, got {n}")
    if engine not in _ENGINES:
        raise ValueError(f"engine must be one of {_ENGINES}, got {engine!r}")


# ----------------------------------------------------------------------
# exact-rational reference engine

def _partition_fractions(n: int, w: Weights, allowed: Dict[Box, str]) -> Fraction:
    a, b = w.a, w.b
    states: Dict[int, Fraction] = {0: Fraction(1)}
    for j in range(1, n + 1):
        height = n + 1 - j
        col: Dict[Tuple[int, bool], Fraction] = {
            (mask, False): wt for mask, wt in states.items()
        }
        for i in range(1, height + 1):
            codes = allowed[(i, j)]
            bit = 1 << (i - 1)
            new: Dict[Tuple[int, bool], Fraction] = defaultdict(Fraction)
            for (mask, above), wt in col.items():
                if "." in codes:
                    new[(mask, above)] += wt
                if "A" in codes and not above:
                    new[(mask | bit, True)] += wt if mask & bit else wt * b
                if "B" in codes and not mask & bit:
                    new[(mask | bit, True)] += wt * a if not above else wt
            col = new
        # the bottom row retires; its diagonal box guarantees its bit
        states = defaultdict(Fraction)
        for (mask, _), wt in col.items():
            states[mask & ((1 << (height - 1)) - 1)] += wt
    return states.get(0, Fraction(0))


# ----------------------------------------------------------------------
# CRT engine

def _sweep_mod_p(n: int, p: int, factors: Tuple[int, int, int, int],
                 allowed: Dict[Box, str], slots: int,
                 bump: Optional[Dict[Box, str]] = None) -> np.ndarray:
    """One full column sweep modulo ``p``.

    Arrays hold one row of length ``2^height`` per counter value
    (``slots`` of them); ``bump`` maps a box to the cell codes that
    push mass up one counter slot there.  Returns the ``slots`` final
    residues.  Raises if mass ever tries to leave the top slot, which
    would mean the counter was sized below the statistic's true range.
    """
    f_acl, f_adr, f_btop, f_blow = (f % p for f in factors)
    state0 = np.zeros((slots, 1 << n), dtype=np.int64)
    state0[0, 0] = 1
    state1 = np.zeros_like(state0)

    def deposit(dst: np.ndarray, src: np.ndarray, f: int, lift: bool) -> None:
        term = src * f % p
        if lift:
            if src[-1].any():
                raise RuntimeError("statistic counter overflowed its cap")
            dst[1:] += term[:-1]
        else:
            dst += term

    for j in range(1, n + 1):
        height = n + 1 - j
        for i in range(1, height + 1):
            box = (i, j)
            codes = allowed[box]
            lifted = bump.get(box, "") if bump else ""
            seg, half = 1 << (height - i), 1 << (i - 1)
            s0 = state0.reshape(slots, seg, 2, half)
            s1 = state1.reshape(slots, seg, 2, half)
            new0 = np.zeros_like(state0)
            new1 = np.zeros_like(state1)
            n1 = new1.reshape(slots, seg, 2, half)
            if "." in codes:
                new0 += state0
                new1 += state1
            if "A" in codes:
                deposit(n1[:, :, 1, :], s0[:, :, 0, :], f_acl, "A" in lifted)
                deposit(n1[:, :, 1, :], s0[:, :, 1, :], f_adr, "A" in lifted)
            if "B" in codes:
                deposit(n1[:, :, 1, :], s0[:, :, 0, :], f_btop, "B" in lifted)
                deposit(n1[:, :, 1, :], s1[:, :, 0, :], f_blow, "B" in lifted)
            state0 = new0
            state1 = new1 % p
        assert not state0.any()  # the diagonal box cannot stay empty
        merged = (state0 + state1) % p
        state0 = merged.reshape(slots, 2, 1 << (height - 1))[:, 1, :].copy()
        state1 = np.zeros_like(state0)
    return state0[:, 0]


def _masses_crt(n: int, w: Weights, allowed: Dict[Box, str], slots: int,
                bump: Optional[Dict[Box, str]] = None) -> List[int]:
    """Scaled integer masses per counter slot, exactly reconstructed."""
    scaled = ScaledWeights.of(w)
    primes = _primes_covering(scaled.total_bound(n))
    per_prime = [
        _sweep_mod_p(n, p, scaled.factors(), allowed, slots, bump) for p in primes
    ]
    return [
        _crt([int(res[k]) for res in per_prime], primes) for k in range(slots)
    ]


# ----------------------------------------------------------------------
# public operations

def constrained_partition(n: int, w: Weights, c: Optional[ConstraintSet] = None,
                          engine: str = "auto") -> Fraction:
    """Sum of normalized weights over tableaux satisfying ``c``.

    With no constraints this is ``(a + b)^(rising n)``.  Unsatisfiable
    constraint sets simply sum an empty set of tableaux and return 0.
    """
    _check_args(n, engine)
    allowed = _allowed_map(n, c)
    if engine == "fractions":
        return _partition_fractions(n, w, allowed)
    scaled = ScaledWeights.of(w)
    total = _masses_crt(n, w, allowed, slots=1)[0]
    return Fraction(total, scaled.q ** (2 * n))


def event_prob(n: int, w: Weights, c: ConstraintSet,
               engine: str = "auto") -> Fraction:
    """Probability that a random tableau satisfies every constraint."""
    return constrained_partition(n, w, c, engine) / w.normalizer(n)


def conditional_cell_law(n: int, w: Weights, box: Box,
                         given: Optional[ConstraintSet] = None,
                         engine: str = "auto") -> BoxLaw:
    """Law of one cell conditioned on an arbitrary cell event.

    Computed as a ratio of constrained partition sums.  Conditioning
    on an impossible event raises.
    """
    _check_args(n, engine)
    base = given if given is not None else ConstraintSet.empty(n)
    denominator = constrained_partition(n, w, base, engine)
    if denominator == 0:
        raise ValueError("conditioning event has probability zero")
    values = {}
    for name, req in (("alpha", Requirement.MUST_ALPHA),
                      ("beta", Requirement.MUST_BETA),
                      ("empty", Requirement.MUST_EMPTY)):
        extended = ConstraintSet(base.n, base.items + ((box, req),))
        values[name] = constrained_partition(n, w, extended, engine) / denominator
    return BoxLaw(**values)


def _statistic_plan(n: int, statistic: str) -> Tuple[Dict[Box, str], int]:
    """Which boxes bump the counter, and the statistic's largest value.

    Caps are structural: second-diagonal boxes can never be filled in
    adjacent columns, third-diagonal boxes never exactly two columns
    apart, and the whole tableau holds at most n alphas and n betas.
    The sweep itself verifies the cap by refusing to overflow it.
    """
    if statistic in ("Nalpha", "Nbeta"):
        boxes = tuple(staircase_boxes(n))
        return {box: statistic[1].upper() for box in boxes}, n
    if statistic in ("A2", "B2", "X2"):
        boxes = second_diagonal(n)
        cap = (len(boxes) + 1) // 2
    elif statistic in ("A3", "X3"):
        boxes = third_diagonal(n)
        m = len(boxes)
        # no two filled boxes sit at distance 2, so filled columns form
        # independent sets of two parity paths
        cap = ((m + 1) // 2 + 1) // 2 + (m // 2 + 1) // 2
    else:
        raise ValueError(f"unknown statistic {statistic!r}")
    codes = {"A": "A", "B": "B", "X": "AB"}[statistic[0]]
    return {box: codes for box in boxes}, cap


def statistic_pmf(n: int, w: Weights, statistic: str) -> Pmf:
    """Exact law of a named counting statistic, in one counting sweep.

    The sweep carries the running count as an extra array axis; one
    sentinel slot past the structural cap stays empty and any attempt
    to spill past it raises rather than miscounting.
    """
    _check_args(n, "auto")
    bump, cap = _statistic_plan(n, statistic)
    allowed = _allowed_map(n, None)
    masses = _masses_crt(n, w, allowed, slots=cap + 2, bump=bump)
    scaled = ScaledWeights.of(w)
    if sum(masses) != scaled.total_bound(n):
        raise RuntimeError("statistic masses do not add up to the partition total")
    if masses[-1] != 0:
        raise RuntimeError("statistic reached past its structural cap")
    return Pmf.from_weighted_counts(
        {k: Fraction(m) for k, m in enumerate(masses) if m}
    )
