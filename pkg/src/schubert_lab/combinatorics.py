"""Partitions and standard Young tableaux.

Partitions are plain tuples of positive integers in weakly decreasing order
(trailing zeros stripped).  The Grassmannian context ``(r, d)`` is passed
separately wherever a bounding box matters.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import DomainError

Partition = tuple


def make_partition(parts: Iterable[int]) -> Partition:
    """Validate and normalize a partition, dropping trailing zeros."""
    parts = tuple(int(p) for p in parts)
    if any(p < 0 for p in parts):
        raise DomainError(f"negative part in {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise DomainError(f"parts of {parts} are not weakly decreasing")
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if text in ("", "()", "0"):
        return ()
    try:
        return make_partition(int(p) for p in text.split(","))
    except ValueError as exc:
        raise DomainError(f"bad partition {text!r}: {exc}") from exc


def size(mu: Partition) -> int:
    return sum(mu)


def part(mu: Partition, i: int) -> int:
    """``mu_i`` with 1-based ``i``; zero beyond the last row."""
    return mu[i - 1] if 1 <= i <= len(mu) else 0


def fits_box(mu: Partition, r: int, d: int) -> bool:
    return len(mu) <= r and (not mu or mu[0] <= d - r)


def complement(mu: Partition, r: int, d: int) -> Partition:
    """Complement of ``mu`` in the ``r x (d-r)`` box, rotated by 180 degrees."""
    mu = make_partition(mu)
    if r < 0 or d < r or not fits_box(mu, r, d):
        raise DomainError(f"{mu} does not fit the {r} x {d - r} box")
    return make_partition(d - r - part(mu, r + 1 - i) for i in range(1, r + 1))


def l_vector(mu: Partition, r: int) -> tuple[int, ...]:
    """Boxes of ``mu`` strictly below row ``i``, for ``i = 1..r-1``."""
    if len(mu) > r:
        raise DomainError(f"{mu} has more than {r} rows")
    return tuple(sum(mu[i:]) for i in range(1, r))


def addable_rows(mu: Partition) -> list[int]:
    """1-based rows where a box can be added keeping a partition."""
    return [i for i in range(1, len(mu) + 2) if i == 1 or part(mu, i) < part(mu, i - 1)]


def removable_rows(mu: Partition) -> list[int]:
    return [i for i in range(1, len(mu) + 1) if part(mu, i) > part(mu, i + 1)]


def add_box(mu: Partition, row: int) -> Partition:
    if row not in addable_rows(mu):
        raise DomainError(f"cannot add a box to {mu} in row {row}")
    parts = list(mu) + [0]
    parts[row - 1] += 1
    return make_partition(parts)


def remove_box(mu: Partition, row: int) -> Partition:
    if row not in removable_rows(mu):
        raise DomainError(f"cannot remove a box from {mu} in row {row}")
    parts = list(mu)
    parts[row - 1] -= 1
    return make_partition(parts)


def partitions_of(n: int, max_rows: int | None = None, max_cols: int | None = None) -> list[Partition]:
    """All partitions of ``n`` (reverse lexicographic), optionally bounded."""
    out = []

    def rec(remaining, largest, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if max_rows is not None and len(prefix) >= max_rows:
            return
        for p in range(min(remaining, largest), 0, -1):
            rec(remaining - p, p, prefix + [p])

    rec(n, n if max_cols is None else max_cols, [])
    return out


@lru_cache(maxsize=None)
def count_syt(mu: Partition) -> int:
    """Number of standard tableaux via the branching rule."""
    if size(mu) == 0:
        return 1
    return sum(count_syt(remove_box(mu, i)) for i in removable_rows(mu))


@dataclass(frozen=True)
class StandardTableau:
    """A standard filling, stored as a tuple of rows."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows if len(row) > 0)
        object.__setattr__(self, "rows", rows)
        make_partition(len(row) for row in rows)
        entries = sorted(x for row in rows for x in row)
        if entries != list(range(1, len(entries) + 1)):
            raise DomainError(f"entries of {rows} are not 1..n")
        for i, row in enumerate(rows):
            if any(row[j] >= row[j + 1] for j in range(len(row) - 1)):
                raise DomainError(f"row {i + 1} of {rows} does not increase")
            if i > 0 and any(rows[i - 1][j] >= row[j] for j in range(len(row))):
                raise DomainError(f"column condition fails in {rows}")

    @property
    def shape(self) -> Partition:
        return tuple(len(row) for row in self.rows)

    @property
    def n(self) -> int:
        return sum(len(row) for row in self.rows)

    @cached_property
    def positions(self) -> dict[int, tuple[int, int]]:
        """Entry -> (row, column), both 1-based."""
        return {x: (i + 1, j + 1) for i, row in enumerate(self.rows) for j, x in enumerate(row)}

    def row_of(self, a: int) -> int:
        return self.positions[a][0]

    def content(self, a: int) -> int:
        i, j = self.positions[a]
        return j - i

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    def __str__(self) -> str:
        return " / ".join(" ".join(str(x) for x in row) for row in self.rows)


def content_vector(T: StandardTableau) -> tuple[int, ...]:
    return tuple(T.content(a) for a in range(1, T.n + 1))


def restrict(T: StandardTableau, k: int) -> StandardTableau:
    """The subtableau holding entries ``1..k``."""
    if not 1 <= k <= T.n:
        raise DomainError(f"restriction level {k} outside 1..{T.n}")
    return StandardTableau(tuple(tuple(x for x in row if x <= k) for row in T.rows))


def tableau_from_contents(contents: Sequence[int]) -> StandardTableau:
    """Rebuild the tableau whose content vector is ``contents``.

    Entry ``a`` goes to the next free box on diagonal ``contents[a-1]``;
    raises DomainError if the result is not standard.
    """
    used: dict[int, int] = {}
    rows: list[list[int]] = []
    for a, c in enumerate(contents, start=1):
        k = used.get(c, 0)
        used[c] = k + 1
        i, j = (k + 1, k + 1 + c) if c >= 0 else (k + 1 - c, k + 1)
        while len(rows) < i:
            rows.append([])
        if len(rows[i - 1]) != j - 1:
            raise DomainError(f"contents {tuple(contents)} do not form a standard tableau")
        rows[i - 1].append(a)
    return StandardTableau(tuple(tuple(r) for r in rows))


def enumerate_syt(mu: Partition) -> list[StandardTableau]:
    """All standard tableaux of shape ``mu``, ordered lexicographically by content vector."""
    mu = make_partition(mu)
    n = size(mu)
    found = []

    def rec(shape: Partition, contents: list[int]):
        if len(contents) == n:
            if shape == mu:
                found.append(tableau_from_contents(contents))
            return
        for i in addable_rows(shape):
            if part(shape, i) < part(mu, i):
                new = add_box(shape, i)
                rec(new, contents + [part(new, i) - i])

    rec((), [])
    found.sort(key=content_vector)
    return found


def tableau_chain(T: StandardTableau) -> list[Partition]:
    """Shapes of ``T|_1, T|_2, ..., T``."""
    return [restrict(T, k).shape for k in range(1, T.n + 1)]


def parse_tableau(text: str) -> StandardTableau:
    """Parse ``"1 2/3"`` style row syntax."""
    try:
        rows = [tuple(int(x) for x in row.replace(",", " ").split()) for row in text.split("/")]
    except ValueError as exc:
        raise DomainError(f"bad tableau {text!r}") from exc
    return StandardTableau(tuple(rows))
