"""The bridge between weighted tableaux and the open boundary-driven
exclusion process.

A four-symbol tableau's main diagonal encodes a particle configuration
(its type), and the tableau weight, after filling every empty box with
a hop rate u or q, gives that configuration's stationary weight.  This
module computes the stationary law two independent ways:

* summing u/q-filled four-symbol tableau weights by type, and
* solving the continuous-time Markov generator exactly,

so their agreement is a machine-checked fact rather than an assumption.
The mapping from diagonal symbols to occupied sites exists in two
plausible readings, and ``cross_validate`` settles empirically which
one the generator actually certifies.

Sites are numbered 1..n from the top end of the diagonal, and a state
packs site 1 into the most significant bit of its index.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .core import Tableau
from .enumeration import enumerate_tableaux
from .measure import _as_fraction
from .pmf import Pmf

CONVENTIONS = ("paper_alpha_gamma", "alpha_delta")

_N_TABLEAUX = 8
_N_GENERATOR = 10


@dataclass(frozen=True, slots=True)
class AsepParams:
    """Rates of the open exclusion process.

    Particles enter at site 1 with rate alpha and leave it with rate
    gamma; they enter at site n with rate delta and leave it with rate
    beta; in the bulk they hop right with rate u and left with rate q.
    """

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    u: Fraction = Fraction(1)
    q: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "u", "q"):
            value = _as_fraction(getattr(self, name), name)
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
            object.__setattr__(self, name, value)
        if self.alpha + self.delta == 0:
            raise ValueError("some entry rate (alpha or delta) must be positive")
        if self.u + self.q == 0:
            raise ValueError("some hop rate (u or q) must be positive")

    def rate_of(self, code: str) -> Fraction:
        return {"A": self.alpha, "B": self.beta, "G": self.gamma,
                "D": self.delta, "u": self.u, "q": self.q}[code]

    def unit_u(self) -> "AsepParams":
        """Time-rescaled so the right-hop rate is 1."""
        if self.u == 0:
            raise ValueError("u must be positive to normalize by it")
        return AsepParams(self.alpha / self.u, self.beta / self.u,
                          self.gamma / self.u, self.delta / self.u,
                          Fraction(1), self.q / self.u)

    def as_dict(self) -> Dict[str, str]:
        return {name: str(getattr(self, name))
                for name in ("alpha", "beta", "gamma", "delta", "u", "q")}


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def tableau_type(t: Tableau, convention: str = "alpha_delta") -> Tuple[int, ...]:
    """The particle configuration a tableau's diagonal encodes.

    Site i reads the i-th diagonal entry; which two symbols mean
    "filled" is the convention choice that cross_validate resolves.
    """
    _check_convention(convention)
    filled = "AG" if convention == "paper_alpha_gamma" else "AD"
    return tuple(int(code in filled) for code in t.diagonal_entries())


def state_index(state: Sequence[int]) -> int:
    """Pack a configuration into an integer, site 1 most significant."""
    index = 0
    for bit in state:
        index = index * 2 + (1 if bit else 0)
    return index


def index_state(index: int, n: int) -> Tuple[int, ...]:
    return tuple((index >> (n - i)) & 1 for i in range(1, n + 1))


@dataclass(frozen=True, slots=True)
class FilledGrid:
    """A tableau with every empty box resolved to a hop-rate letter."""

    tableau: Tableau
    rows: Tuple[str, ...]

    def weight(self, p: AsepParams) -> Fraction:
        """Product of one rate per box, symbols and fill letters alike."""
        return math.prod(
            (p.rate_of(code) for row in self.rows for code in row),
            start=Fraction(1),
        )

    def fill_counts(self) -> Tuple[int, int]:
        """(number of u boxes, number of q boxes)."""
        joined = "".join(self.rows)
        return joined.count("u"), joined.count("q")


def uq_fill(t: Tableau) -> FilledGrid:
    """Resolve every empty box to u or q.

    Boxes left of a beta become u and boxes left of a delta become q;
    since a beta or delta is always the leftmost symbol of its row,
    these are exactly the empties whose nearest symbol to the right is
    one of the two.  Every other empty box sits above some symbol in
    its column (the diagonal box at the bottom is never empty) and
    becomes u when the nearest one below is an alpha or a delta, q
    when it is a beta or a gamma.
    """
    n = t.n
    out = []
    for i in range(1, n + 1):
        row = t.rows[i - 1]
        cells = []
        for j in range(1, n + 2 - i):
            code = row[j - 1]
            if code != ".":
                cells.append(code)
                continue
            right = next(c for c in row[j:] if c != ".")
            if right in "BD":
                cells.append("u" if right == "B" else "q")
            else:
                below = next(
                    c for k in range(i + 1, n + 2 - j)
                    if (c := t.rows[k - 1][j - 1]) != "."
                )
                cells.append("u" if below in "AD" else "q")
        out.append("".join(cells))
    return FilledGrid(tableau=t, rows=tuple(out))


# ----------------------------------------------------------------------
# stationary law via weighted tableaux

def _column_type_split(rows: Tuple[str, ...], nearest_right: List[str],
                       j: int, n: int, rates: Tuple[int, ...],
                       u_pow: List[int], q_pow: List[int],
                       convention: str) -> Tuple[int, int]:
    """Sum the four-symbol expansions of one column of a two-symbol
    tableau, split by whether the diagonal choice reads as filled.

    State: (filled bit, whether the nearest symbol below the current
    box is an alpha or a delta).  Each beta/delta choice also pays for
    the j-1 empty boxes to its left, which is what makes columns
    independent.
    """
    ra, rb, rg, rd, ru, rq = rates
    height = n + 1 - j
    # slot (bit, flag); the diagonal box of the column seeds it
    acc = [0, 0, 0, 0]
    diag = rows[height - 1][j - 1]
    if diag == "A":
        alpha_filled = 1  # alpha reads filled under both conventions
        gamma_filled = 1 if convention == "paper_alpha_gamma" else 0
        acc[2 * alpha_filled + 1] += ra
        acc[2 * gamma_filled + 0] += rg
    else:
        beta_filled = 0  # beta reads empty under both conventions
        delta_filled = 0 if convention == "paper_alpha_gamma" else 1
        acc[2 * beta_filled + 0] += rb * u_pow[j - 1]
        acc[2 * delta_filled + 1] += rd * q_pow[j - 1]
    for i in range(height - 1, 0, -1):
        code = rows[i - 1][j - 1]
        if code == ".":
            if nearest_right[(i - 1) * n + (j - 1)] in "BD":
                continue  # paid for by that beta/delta choice
            acc = [acc[0] * rq, acc[1] * ru, acc[2] * rq, acc[3] * ru]
        elif code == "A":
            acc = [
                (acc[0] + acc[1]) * rg,
                (acc[0] + acc[1]) * ra,
                (acc[2] + acc[3]) * rg,
                (acc[2] + acc[3]) * ra,
            ]
        else:
            fb, fd = rb * u_pow[j - 1], rd * q_pow[j - 1]
            acc = [
                (acc[0] + acc[1]) * fb,
                (acc[0] + acc[1]) * fd,
                (acc[2] + acc[3]) * fb,
                (acc[2] + acc[3]) * fd,
            ]
    return acc[0] + acc[1], acc[2] + acc[3]


def steady_state_via_tableaux(n: int, p: AsepParams,
                              convention: str = "alpha_delta") -> Pmf:
    """Stationary law as normalized type-grouped tableau weights.

    Streams the two-symbol tableaux and sums each one's four-symbol
    u/q-filled expansion column by column, so no four-symbol tableau
    is ever materialized.  All six rates are cleared to integers
    first; every filled grid carries exactly one rate per box, so the
    common scale cancels in the normalization.
    """
    _check_convention(convention)
    if not 1 <= n <= _N_TABLEAUX:
        raise ValueError(f"supported sizes are 1..{_N_TABLEAUX}, got {n}")
    scale = math.lcm(*(getattr(p, f).denominator
                       for f in ("alpha", "beta", "gamma", "delta", "u", "q")))
    rates = tuple(int(getattr(p, f) * scale)
                  for f in ("alpha", "beta", "gamma", "delta", "u", "q"))
    u_pow = [rates[4] ** k for k in range(n)]
    q_pow = [rates[5] ** k for k in range(n)]
    totals = [0] * (1 << n)
    for t in enumerate_tableaux(n):
        nearest_right = [""] * (n * n)
        for i in range(1, n + 1):
            row = t.rows[i - 1]
            seen = ""
            for j in range(n + 1 - i, 0, -1):
                if row[j - 1] != ".":
                    seen = row[j - 1]
                nearest_right[(i - 1) * n + (j - 1)] = seen
        vec = [1]
        # column j holds site n+1-j, so ascending columns leave site 1
        # in the most significant bit of the index
        for j in range(1, n + 1):
            we, wf = _column_type_split(t.rows, nearest_right, j, n, rates,
                                        u_pow, q_pow, convention)
            vec = [x * we for x in vec] + [x * wf for x in vec]
        for idx, value in enumerate(vec):
            totals[idx] += value
    return Pmf.from_weighted_counts(
        {idx: Fraction(value) for idx, value in enumerate(totals) if value}
    )


# ----------------------------------------------------------------------
# stationary law via the Markov generator

def _transitions(n: int, p: AsepParams, s: int) -> Iterable[Tuple[int, Fraction]]:
    top = 1 << (n - 1)  # site 1
    if s & top:
        if p.gamma:
            yield s ^ top, p.gamma
    elif p.alpha:
        yield s ^ top, p.alpha
    if s & 1:  # site n
        if p.beta:
            yield s ^ 1, p.beta
    elif p.delta:
        yield s ^ 1, p.delta
    for i in range(n - 1):  # bond between sites n-1-i and n-i
        pair = 0b11 << i
        both = s & pair
        if both == (0b10 << i):
            if p.u:
                yield s ^ pair, p.u
        elif both == (0b01 << i):
            if p.q:
                yield s ^ pair, p.q


def _check_irreducible(n: int, p: AsepParams) -> None:
    size = 1 << n
    for reverse in (False, True):
        edges: List[List[int]] = [[] for _ in range(size)]
        for s in range(size):
            for t, _ in _transitions(n, p, s):
                if reverse:
                    edges[t].append(s)
                else:
                    edges[s].append(t)
        seen = {0}
        queue = deque([0])
        while queue:
            for t in edges[queue.popleft()]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        if len(seen) != size:
            raise ValueError(
                "the chain is reducible with these rates; "
                "the stationary law is not unique"
            )


def steady_state_via_generator(n: int, p: AsepParams) -> Pmf:
    """Exact stationary vector of the continuous-time generator.

    Builds the transpose generator over all 2^n configurations,
    swaps one (redundant) balance equation for the normalization, and
    solves by fraction-exact elimination.  The rows of the transpose
    generator sum to zero, so dropping any one of them keeps full
    information and the replaced system is nonsingular for an
    irreducible chain.
    """
    if not 1 <= n <= _N_GENERATOR:
        raise ValueError(f"supported sizes are 1..{_N_GENERATOR}, got {n}")
    _check_irreducible(n, p)
    size = 1 << n
    matrix = [[Fraction(0)] * (size + 1) for _ in range(size)]
    for s in range(size):
        for t, rate in _transitions(n, p, s):
            matrix[t][s] += rate
            matrix[s][s] -= rate
    matrix[-1] = [Fraction(1)] * size + [Fraction(1)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if matrix[r][col])
        matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
        lead = matrix[col][col]
        for r in range(size):
            if r != col and matrix[r][col]:
                factor = matrix[r][col] / lead
                matrix[r] = [x - factor * y
                             for x, y in zip(matrix[r], matrix[col])]
    masses = {s: matrix[s][size] / matrix[s][s] for s in range(size)}
    return Pmf.from_weighted_counts({s: m for s, m in masses.items() if m})


# ----------------------------------------------------------------------
# the two routes against each other

def cross_validate(n: int, p: AsepParams,
                   conventions: Sequence[str] = CONVENTIONS) -> Dict:
    """Compare both stationary-law routes state by state.

    The comparison runs at u rescaled to 1: the generator's law is
    invariant under uniform time scaling, the tableau weights are not,
    and unit u is where they are claimed to coincide.  The report is
    JSON-ready, and a mismatch is an outcome, not an error.
    """
    if not 1 <= n <= 6:
        raise ValueError(f"cross-validation supports sizes 1..6, got {n}")
    for convention in conventions:
        _check_convention(convention)
    scaled = p.unit_u()
    generator = steady_state_via_generator(n, scaled)
    report = {
        "n": n,
        "params": p.as_dict(),
        "rescaled_params": scaled.as_dict(),
        "conventions": [],
        "matching_conventions": [],
    }
    for convention in conventions:
        tableaux = steady_state_via_tableaux(n, scaled, convention)
        per_state = []
        for s in range(1 << n):
            t_prob, g_prob = tableaux.mass(s), generator.mass(s)
            per_state.append({
                "state": "".join(map(str, index_state(s, n))),
                "tableaux_prob": str(t_prob),
                "generator_prob": str(g_prob),
                "equal": t_prob == g_prob,
            })
        matches = all(entry["equal"] for entry in per_state)
        report["conventions"].append({
            "convention": convention,
            "per_state": per_state,
            "matches": matches,
        })
        if matches:
            report["matching_conventions"].append(convention)
    return report
