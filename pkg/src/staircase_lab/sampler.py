"""Exact random generation of weighted staircase tableaux.

Two interchangeable backends draw from the same measure:

* ``enum_alias``: materialize every tableau once per (n, a, b) with its
  scaled integer weight, then invert a uniform integer draw into the
  cumulative table.  Exact, and cheap per draw, but the table has
  ``(n+1)!`` entries.
* ``chain_rule``: walk the column sweep box by box, drawing each cell
  from its exact conditional law given everything placed so far.  The
  conditionals come from backward completion tables: integer counts
  (held as residues modulo the counting engine's primes) of the total
  weight of ways to finish the tableau from each reachable state.  No
  rejection and no rounding; every draw consumes one uniform integer
  below the exact number of weighted continuations.

Both backends take the caller's :class:`random.Random` stream, so a
seed pins down the whole sample sequence.  Batch draws walk all
samples through one column at a time so the backward tables for a
column are built once per batch rather than once per draw; a batch of
k therefore consumes the stream in a different order than k single
draws (each path is deterministic on its own).
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import Tableau, diagonal_statistic
from .dpcount import N_DP, ScaledWeights, _crt, _primes_covering
from .enumeration import N_ENUM, enumerate_tableaux
from .measure import FourWeights, Weights
from .pmf import Pmf

_METHODS = ("enum_alias", "chain_rule")

#: Peak bytes the chain-rule backward tables may claim; one column of
#: size-n tables is (n+1) levels of (primes, 2, 2^n) int64 arrays, so
#: this caps the practical size around 16..18 depending on the weights.
_MEM_BUDGET = 1_500_000_000


# ----------------------------------------------------------------------
# enum_alias backend

_alias_cache: Dict[Tuple[int, Weights], Tuple[List[Tuple[str, ...]], List[int]]] = {}


def _alias_table(n: int, w: Weights) -> Tuple[List[Tuple[str, ...]], List[int]]:
    table = _alias_cache.get((n, w))
    if table is None:
        scaled = ScaledWeights.of(w)
        rows_list: List[Tuple[str, ...]] = []
        cumulative: List[int] = []
        running = 0
        for t in enumerate_tableaux(n):
            joined = "".join(t.rows)
            na, nb = joined.count("A"), joined.count("B")
            running += (scaled.pa ** (n - na) * scaled.pb ** (n - nb)
                        * scaled.q ** (na + nb))
            rows_list.append(t.rows)
            cumulative.append(running)
        if running != scaled.total_bound(n):
            raise RuntimeError("alias table weights do not sum to the partition total")
        table = _alias_cache[(n, w)] = (rows_list, cumulative)
    return table


def _sample_enum(n: int, w: Weights, rng: random.Random, count: int) -> List[Tableau]:
    rows_list, cumulative = _alias_table(n, w)
    total = cumulative[-1]
    return [
        Tableau._trusted(rows_list[bisect.bisect_right(cumulative, rng.randrange(total))])
        for _ in range(count)
    ]


# ----------------------------------------------------------------------
# chain_rule backend

class _ChainTables:
    """Backward completion counts for one (n, w), shared across draws.

    ``boundary[j]`` holds, per prime, the weighted number of ways to
    fill columns j..n starting from each dirty-row mask (the column-j
    flag "symbol above" being necessarily clear at entry).  The
    per-box tables inside one column are rebuilt on demand since they
    dominate memory.
    """

    def __init__(self, n: int, w: Weights):
        self.n = n
        self.scaled = ScaledWeights.of(w)
        boxes = n * (n + 1) // 2
        worst = max(self.scaled.factors())
        self.primes = _primes_covering((3 * worst) ** boxes)
        plan = len(self.primes)
        peak = 8 * plan * 2 * (1 << n) * (n + 2) + 8 * plan * (1 << (n + 1))
        if peak > _MEM_BUDGET:
            raise ValueError(
                f"chain_rule tables for n={n} with these weights would need "
                f"about {peak / 1e9:.1f} GB; use a smaller size"
            )
        self._pvec = np.array(self.primes, dtype=np.int64).reshape(plan, 1, 1)
        self._facs = np.array(
            [[f % p for f in self.scaled.factors()] for p in self.primes],
            dtype=np.int64,
        ).reshape(plan, 4, 1, 1)
        self.boundary: List[Optional[np.ndarray]] = [None] * (n + 2)
        self.boundary[n + 1] = np.ones((plan, 1), dtype=np.int64)
        for j in range(n, 0, -1):
            self.boundary[j] = self._column_levels(j)[0][:, 0, :].copy()

    def _column_levels(self, j: int) -> List[np.ndarray]:
        """Completion counts at every box of column j, bottom-up.

        ``levels[i-1][p, above, mask]`` counts completions starting
        just before box i of the column; ``levels[height]`` encodes the
        hand-off to the next column: the departing diagonal row's bit
        must be set, and its mask bit is dropped.
        """
        n, height = self.n, self.n + 1 - j
        plan = len(self.primes)
        after = np.zeros((plan, 2, 1 << height), dtype=np.int64)
        after.reshape(plan, 2, 2, 1 << (height - 1))[:, :, 1, :] = \
            self.boundary[j + 1][:, None, :]
        levels = [after]
        f = self._facs
        for i in range(height, 0, -1):
            nxt = levels[-1]
            cur = np.zeros_like(nxt)
            if i < height:  # the diagonal box may not stay empty
                cur += nxt
            seg, half = 1 << (height - i), 1 << (i - 1)
            cur_v = cur.reshape(plan, 2, seg, 2, half)
            set_next = nxt.reshape(plan, 2, seg, 2, half)[:, 1, :, 1, :]
            cur_v[:, 0, :, 0, :] += set_next * f[:, 0] % self._pvec  # alpha, clean row
            cur_v[:, 0, :, 1, :] += set_next * f[:, 1] % self._pvec  # alpha, dirty row
            cur_v[:, 0, :, 0, :] += set_next * f[:, 2] % self._pvec  # beta, topmost
            cur_v[:, 1, :, 0, :] += set_next * f[:, 3] % self._pvec  # beta, below
            levels.append(cur % self._pvec)
        levels.reverse()
        return levels

    def reconstruct(self, level: np.ndarray, above: int, mask: int) -> int:
        return _crt([int(level[k, above, mask]) for k in range(len(self.primes))],
                    self.primes)


_chain_cache: Dict[Tuple[int, Weights], _ChainTables] = {}


def _chain_tables(n: int, w: Weights) -> _ChainTables:
    tables = _chain_cache.get((n, w))
    if tables is None:
        tables = _chain_cache[(n, w)] = _ChainTables(n, w)
    return tables


def _choice_weights(tables: _ChainTables, levels: List[np.ndarray], i: int,
                    height: int, mask: int, above: int) -> List[Tuple[str, int, int, int]]:
    """Continuation counts of each legal cell at box i of a column.

    Returns (cell code, count, next mask, next flag) with count > 0,
    in the fixed order empty, alpha, beta.
    """
    nxt = levels[i]
    bit = 1 << (i - 1)
    facs = tables.scaled.factors()
    out = []
    if i < height:
        count = tables.reconstruct(nxt, above, mask)
        if count:
            out.append((".", count, mask, above))
    if not above:
        f = facs[1] if mask & bit else facs[0]
        count = f * tables.reconstruct(nxt, 1, mask | bit)
        if count:
            out.append(("A", count, mask | bit, 1))
    if not mask & bit:
        f = facs[2] if not above else facs[3]
        count = f * tables.reconstruct(nxt, 1, mask | bit)
        if count:
            out.append(("B", count, mask | bit, 1))
    return out


def _sample_chain(n: int, w: Weights, rng: random.Random, count: int) -> List[Tableau]:
    tables = _chain_tables(n, w)
    grids = [[] for _ in range(count)]  # per walker: list of column strings
    masks = [0] * count
    for j in range(1, n + 1):
        height = n + 1 - j
        levels = tables._column_levels(j)
        flags = [0] * count
        cells = [[] for _ in range(count)]
        for i in range(1, height + 1):
            memo: Dict[Tuple[int, int], List[Tuple[str, int, int, int]]] = {}
            for k in range(count):
                key = (masks[k], flags[k])
                choices = memo.get(key)
                if choices is None:
                    choices = memo[key] = _choice_weights(
                        tables, levels, i, height, *key
                    )
                draw = rng.randrange(sum(c[1] for c in choices))
                for code, weight, mask, flag in choices:
                    if draw < weight:
                        break
                    draw -= weight
                cells[k].append(code)
                masks[k], flags[k] = mask, flag
        keep = (1 << (height - 1)) - 1
        for k in range(count):
            grids[k].append("".join(cells[k]))
            masks[k] &= keep
    return [
        Tableau._trusted(tuple(
            "".join(grid[c][i] for c in range(n - i)) for i in range(n)
        ))
        for grid in grids
    ]


# ----------------------------------------------------------------------
# public surface

def sample(n: int, w: Weights, rng: random.Random,
           method: str = "chain_rule") -> Tableau:
    """Draw one tableau distributed exactly as the (a, b) measure."""
    return sample_many(n, w, rng, 1, method)[0]


def sample_many(n: int, w: Weights, rng: random.Random, count: int,
                method: str = "chain_rule") -> List[Tableau]:
    """Draw a batch, walking all samples through each column together."""
    if count < 1:
        raise ValueError("need at least one sample")
    if method == "enum_alias":
        if not 1 <= n <= N_ENUM:
            raise ValueError(f"enum_alias supports sizes 1..{N_ENUM}, got {n}")
        return _sample_enum(n, w, rng, count)
    if method == "chain_rule":
        if not 1 <= n <= N_DP:
            raise ValueError(f"chain_rule supports sizes 1..{N_DP}, got {n}")
        return _sample_chain(n, w, rng, count)
    raise ValueError(f"method must be one of {_METHODS}, got {method!r}")


def randomize_four_params(t: Tableau, fw: FourWeights,
                          rng: random.Random) -> Tableau:
    """Independently relabel alphas to gammas and betas to deltas.

    Each alpha becomes a gamma with probability gamma/(alpha+gamma) and
    each beta a delta with probability delta/(beta+delta), drawn
    exactly (an integer below the denominator, compared to the
    numerator), visiting boxes in row-major order.
    """
    p_gamma = fw.gamma / (fw.alpha + fw.gamma)
    p_delta = fw.delta / (fw.beta + fw.delta)

    def flip(p: Fraction) -> bool:
        return p != 0 and rng.randrange(p.denominator) < p.numerator

    rows = []
    for row in t.rows:
        cells = []
        for code in row:
            if code == "A" and flip(p_gamma):
                code = "G"
            elif code == "B" and flip(p_delta):
                code = "D"
            cells.append(code)
        rows.append("".join(cells))
    return Tableau(tuple(rows))


@dataclass(frozen=True, slots=True)
class EmpiricalLaw:
    """A Monte Carlo law with its per-bin binomial standard errors."""

    pmf: Pmf
    draws: int
    stderr: Tuple[float, ...]


def empirical_pmf(n: int, w: Weights, statistic: str, samples: int,
                  rng: random.Random, method: str = "chain_rule") -> EmpiricalLaw:
    """Sample the named statistic and tabulate its empirical law."""
    if samples < 1:
        raise ValueError("need at least one sample")
    counts: Dict[int, int] = {}
    batch = sample_many(n, w, rng, samples, method)
    for t in batch:
        k = diagonal_statistic(t, statistic)
        counts[k] = counts.get(k, 0) + 1
    pmf = Pmf.from_weighted_counts(
        {k: Fraction(c, samples) for k, c in counts.items()}
    )
    stderr = tuple(
        math.sqrt(float(m) * float(1 - m) / samples) for m in pmf.masses
    )
    return EmpiricalLaw(pmf=pmf, draws=samples, stderr=stderr)
