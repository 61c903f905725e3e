"""Cell-level events expressed as per-box requirements.

A :class:`ConstraintSet` pins selected boxes to a requirement drawn from
:class:`Requirement` and leaves every other box free.  The enumeration
and counting backends both consume these objects, so a single event
description can be priced by two independent engines.  A set may be
unsatisfiable (for instance ``MUST_EMPTY`` on a main-diagonal box);
that is not an error, it is simply an event of probability zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Tuple

from .core import Box, Tableau, in_staircase, second_diagonal, third_diagonal


class Requirement(enum.Enum):
    FREE = "free"
    MUST_ALPHA = "alpha"
    MUST_BETA = "beta"
    MUST_NONEMPTY = "nonempty"
    MUST_EMPTY = "empty"


#: Cell codes compatible with each requirement, for alpha/beta tableaux.
_ALLOWED = {
    Requirement.FREE: frozenset(".AB"),
    Requirement.MUST_ALPHA: frozenset("A"),
    Requirement.MUST_BETA: frozenset("B"),
    Requirement.MUST_NONEMPTY: frozenset("AB"),
    Requirement.MUST_EMPTY: frozenset("."),
}


@dataclass(frozen=True, slots=True)
class ConstraintSet:
    """A frozen mapping from boxes to requirements at a fixed size.

    The items are stored sorted so equal events hash and compare equal
    regardless of construction order; counting backends rely on that to
    cache work per event.
    """

    n: int
    items: Tuple[Tuple[Box, Requirement], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("size must be at least 1")
        seen = set()
        for box, req in self.items:
            if not in_staircase(self.n, box):
                raise ValueError(f"box {box} lies outside the size-{self.n} staircase")
            if not isinstance(req, Requirement):
                raise TypeError(f"requirement for box {box} must be a Requirement")
            if box in seen:
                raise ValueError(f"box {box} is constrained twice")
            seen.add(box)

    @classmethod
    def of(cls, n: int, boxes: Mapping[Box, Requirement]) -> "ConstraintSet":
        items = tuple(sorted(
            (box, req) for box, req in boxes.items() if req is not Requirement.FREE
        ))
        return cls(n, items)

    @classmethod
    def empty(cls, n: int) -> "ConstraintSet":
        return cls(n, ())

    def as_dict(self) -> Dict[Box, Requirement]:
        return dict(self.items)

    def allowed_cells(self, box: Box) -> frozenset:
        """Cell codes an alpha/beta tableau may hold at ``box``."""
        for item_box, req in self.items:
            if item_box == box:
                return _ALLOWED[req]
        return _ALLOWED[Requirement.FREE]

    def satisfied_by(self, t: Tableau) -> bool:
        if t.n != self.n:
            raise ValueError(f"tableau has size {t.n}, constraints have size {self.n}")
        return all(t.cell(i, j) in _ALLOWED[req] for (i, j), req in self.items)


def _diagonal_event(boxes: Tuple[Box, ...], n: int, cols: Iterable[int],
                    req: Requirement, what: str) -> ConstraintSet:
    cols = tuple(cols)
    if any(not 1 <= c <= len(boxes) for c in cols):
        raise ValueError(f"{what} columns must lie in 1..{len(boxes)}, got {cols}")
    if len(set(cols)) != len(cols):
        raise ValueError(f"{what} columns must be distinct, got {cols}")
    return ConstraintSet.of(n, {boxes[c - 1]: req for c in cols})


def second_diag_event(n: int, cols: Iterable[int], req: Requirement) -> ConstraintSet:
    """Require ``req`` at the second-diagonal boxes in the given columns."""
    return _diagonal_event(second_diagonal(n), n, cols, req, "second-diagonal")


def third_diag_event(n: int, cols: Iterable[int], req: Requirement) -> ConstraintSet:
    """Require ``req`` at the third-diagonal boxes in the given columns."""
    return _diagonal_event(third_diagonal(n), n, cols, req, "third-diagonal")
