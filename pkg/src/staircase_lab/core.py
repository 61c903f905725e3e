"""Staircase tableaux as immutable grid objects.

A staircase tableau of size ``n`` lives on the Young-diagram shape
``(n, n-1, ..., 1)``.  Rows are numbered 1..n from the top and columns
1..n from the left, so box ``(i, j)`` exists exactly when
``i + j <= n + 1``.  Row 1 therefore touches the north-west corner and
the boxes ``(i, n+1-i)`` form the main diagonal running from the
north-east corner down to the south-west corner.

Boxes hold one of the symbols alpha/beta/gamma/delta or stay empty,
subject to three filling rules:

* every main-diagonal box holds a symbol,
* all boxes above an alpha or gamma in the same column are empty,
* all boxes left of a beta or delta in the same row are empty.

The one-character cell codes used throughout are ``A`` (alpha), ``B``
(beta), ``G`` (gamma), ``D`` (delta) and ``.`` (empty), which is also
the on-disk text format (a size line followed by one row per line).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Tuple

Box = Tuple[int, int]


class CellState(str, enum.Enum):
    """Content of a single box, interchangeable with its one-char code."""

    EMPTY = "."
    ALPHA = "A"
    BETA = "B"
    GAMMA = "G"
    DELTA = "D"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


_CELL_CHARS = frozenset(".ABGD")
_COLUMN_BLOCKERS = frozenset("AG")  # symbols that force empty boxes above
_ROW_BLOCKERS = frozenset("BD")  # symbols that force empty boxes to the left


class SymbolCounts(NamedTuple):
    alpha: int
    beta: int
    gamma: int
    delta: int


def staircase_boxes(n: int) -> Iterator[Box]:
    """Yield every box of the size-``n`` staircase in row-major order."""
    for i in range(1, n + 1):
        for j in range(1, n + 2 - i):
            yield (i, j)


def main_diagonal(n: int) -> Tuple[Box, ...]:
    """Boxes ``(n+1-j, j)`` for ``j = 1..n``, listed by column."""
    return tuple((n + 1 - j, j) for j in range(1, n + 1))


def second_diagonal(n: int) -> Tuple[Box, ...]:
    """Boxes ``(n-j, j)`` for ``j = 1..n-1``, one step inside the main one."""
    return tuple((n - j, j) for j in range(1, n))


def third_diagonal(n: int) -> Tuple[Box, ...]:
    """Boxes ``(n-j-1, j)`` for ``j = 1..n-2``, two steps inside."""
    return tuple((n - j - 1, j) for j in range(1, n - 1))


def in_staircase(n: int, box: Box) -> bool:
    i, j = box
    return 1 <= i and 1 <= j and i + j <= n + 1


@dataclass(frozen=True, slots=True)
class Tableau:
    """An immutable staircase filling.

    ``rows[i-1]`` is the string of cell codes for row ``i``; row ``i``
    has ``n + 1 - i`` characters.  The shape is enforced on
    construction, the filling rules are not: :meth:`validate` reports
    rule violations so that illegal fillings can be represented and
    rejected explicitly where that matters.
    """

    rows: Tuple[str, ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if n < 1:
            raise ValueError("a tableau needs at least one row")
        for i, row in enumerate(self.rows, start=1):
            if not isinstance(row, str) or len(row) != n + 1 - i:
                raise ValueError(
                    f"row {i} must be a string of length {n + 1 - i}, got {row!r}"
                )
            bad = set(row) - _CELL_CHARS
            if bad:
                raise ValueError(f"row {i} holds unknown cell codes {sorted(bad)}")

    # ------------------------------------------------------------------
    # construction helpers

    @classmethod
    def from_rows(cls, rows: Iterable[str]) -> "Tableau":
        return cls(tuple(rows))

    @classmethod
    def _trusted(cls, rows: Tuple[str, ...]) -> "Tableau":
        # Fast path for the enumerator and sampler, which construct
        # millions of tableaux whose shape is correct by construction.
        # Skips __post_init__; do not feed it unchecked input.
        t = object.__new__(cls)
        object.__setattr__(t, "rows", rows)
        return t

    @classmethod
    def from_cells(cls, n: int, cells: Mapping[Box, str]) -> "Tableau":
        """Build a tableau from a sparse ``{(i, j): code}`` mapping.

        Unmentioned boxes stay empty.  Boxes outside the staircase raise.
        """
        grid = [["."] * (n + 1 - i) for i in range(1, n + 1)]
        for (i, j), code in cells.items():
            if not in_staircase(n, (i, j)):
                raise ValueError(f"box ({i}, {j}) lies outside the size-{n} staircase")
            code = str(code)
            if code not in _CELL_CHARS:
                raise ValueError(f"unknown cell code {code!r} for box ({i}, {j})")
            grid[i - 1][j - 1] = code
        return cls(tuple("".join(row) for row in grid))

    @classmethod
    def parse(cls, text: str) -> "Tableau":
        """Parse the text format: a size line, then one row per line."""
        lines = [line.rstrip("\n") for line in text.strip().splitlines()]
        if not lines:
            raise ValueError("empty tableau text")
        try:
            n = int(lines[0].strip())
        except ValueError as exc:
            raise ValueError(f"first line must be the size, got {lines[0]!r}") from exc
        if len(lines) != n + 1:
            raise ValueError(f"expected {n} row lines after the size, got {len(lines) - 1}")
        return cls(tuple(line.strip() for line in lines[1:]))

    # ------------------------------------------------------------------
    # basic geometry

    @property
    def n(self) -> int:
        return len(self.rows)

    def cell(self, i: int, j: int) -> str:
        if not in_staircase(self.n, (i, j)):
            raise ValueError(f"box ({i}, {j}) lies outside the size-{self.n} staircase")
        return self.rows[i - 1][j - 1]

    def boxes(self) -> Iterator[Box]:
        return staircase_boxes(self.n)

    def diagonal_entries(self) -> str:
        """Main-diagonal cell codes read from the north-east end down."""
        return "".join(self.rows[i - 1][self.n - i] for i in range(1, self.n + 1))

    def symbol_counts(self) -> SymbolCounts:
        joined = "".join(self.rows)
        return SymbolCounts(
            alpha=joined.count("A"),
            beta=joined.count("B"),
            gamma=joined.count("G"),
            delta=joined.count("D"),
        )

    # ------------------------------------------------------------------
    # rule checking

    def validate(self) -> Tuple[str, ...]:
        """Return a description of every violated filling rule."""
        n = self.n
        problems = []
        for i in range(1, n + 1):
            if self.rows[i - 1][n - i] == ".":
                problems.append(f"main-diagonal box ({i}, {n + 1 - i}) is empty")
        for i in range(1, n + 1):
            row = self.rows[i - 1]
            for j in range(1, n + 2 - i):
                code = row[j - 1]
                if code in _COLUMN_BLOCKERS:
                    for k in range(1, i):
                        if self.rows[k - 1][j - 1] != ".":
                            problems.append(
                                f"box ({k}, {j}) above the {code} at ({i}, {j}) is not empty"
                            )
                if code in _ROW_BLOCKERS:
                    for k in range(1, j):
                        if row[k - 1] != ".":
                            problems.append(
                                f"box ({i}, {k}) left of the {code} at ({i}, {j}) is not empty"
                            )
        return tuple(problems)

    @property
    def is_valid(self) -> bool:
        return not self.validate()

    # ------------------------------------------------------------------
    # transforms

    def subtableau(self, i: int, j: int) -> "Tableau":
        """Drop the first ``i - 1`` rows and ``j - 1`` columns.

        The result is the staircase tableau of size ``n - i - j + 2``
        rooted at box ``(i, j)``; validity of the filling is preserved.
        """
        n = self.n
        if not in_staircase(n, (i, j)):
            raise ValueError(f"box ({i}, {j}) lies outside the size-{n} staircase")
        size = n - i - j + 2
        rows = tuple(
            self.rows[i + k - 2][j - 1 : j + size - k] for k in range(1, size + 1)
        )
        return Tableau(rows)

    def delete_row_col(self, i: int, j: int) -> "Tableau":
        """Remove row ``i`` and column ``j`` entirely, re-indexing the rest.

        Only deletions whose leftover rows again form the staircase
        shape ``(n-1, ..., 1)`` are meaningful; anything else raises.
        """
        n = self.n
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"row {i} / column {j} out of range for size {n}")
        kept = []
        for r in range(1, n + 1):
            if r == i:
                continue
            row = self.rows[r - 1]
            kept.append(row[: j - 1] + row[j:] if j <= len(row) else row)
        for k, row in enumerate(kept, start=1):
            if len(row) != n - k:
                raise ValueError(
                    f"deleting row {i} and column {j} does not leave the "
                    f"size-{n - 1} staircase shape"
                )
        return Tableau(tuple(kept))

    def transpose(self) -> "Tableau":
        """Reflect across the NW-SE axis, swapping alpha/beta and gamma/delta.

        Applying it twice gives back the original tableau, and it maps
        valid fillings to valid fillings because the column and row
        rules trade places along with the symbols.
        """
        n = self.n
        swap = {"A": "B", "B": "A", "G": "D", "D": "G", ".": "."}
        rows = tuple(
            "".join(swap[self.rows[i - 1][j - 1]] for i in range(1, n + 2 - j))
            for j in range(1, n + 1)
        )
        return Tableau(rows)

    # ------------------------------------------------------------------
    # text format

    def to_text(self) -> str:
        return "\n".join((str(self.n), *self.rows))

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.to_text()


#: Counting statistics of a tableau that the distribution machinery knows
#: by name.  ``A2``/``B2``/``X2`` count alphas, betas, and nonempty boxes
#: on the second diagonal; ``A3``/``X3`` do the same on the third;
#: ``Nalpha``/``Nbeta`` count symbols over the whole tableau.
STATISTIC_NAMES = ("A2", "B2", "X2", "A3", "X3", "Nalpha", "Nbeta")


def diagonal_statistic(t: Tableau, name: str) -> int:
    """Evaluate one of the named counting statistics on a tableau."""
    if name == "Nalpha":
        return t.symbol_counts().alpha
    if name == "Nbeta":
        return t.symbol_counts().beta
    if name in ("A2", "B2", "X2"):
        boxes = second_diagonal(t.n)
    elif name in ("A3", "X3"):
        boxes = third_diagonal(t.n)
    else:
        raise ValueError(f"unknown statistic {name!r}; expected one of {STATISTIC_NAMES}")
    cells = [t.cell(i, j) for i, j in boxes]
    if name.startswith("A"):
        return cells.count("A")
    if name.startswith("B"):
        return cells.count("B")
    return sum(1 for c in cells if c != ".")
