"""Table data model, row/column permutations, and numeric rank computation.

All types here are immutable after construction and all operations are pure,
so values can be shared freely across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DimensionMismatchError
from .rng import SplitMix64

_DECIMAL_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)$")
_COLON_RE = re.compile(r"^(\d+):([0-5]\d)$")


@dataclass(frozen=True)
class Table:
    """A header row plus a rectangular grid of body cells.

    Header texts may repeat; duplicate columns are legal table content.
    """

    headers: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        headers = tuple(str(h) for h in self.headers)
        if len(headers) < 1:
            raise DimensionMismatchError("a table needs at least one column")
        norm_rows = []
        for i, row in enumerate(self.rows):
            row = tuple(str(c) for c in row)
            if len(row) != len(headers):
                raise DimensionMismatchError(
                    f"row {i} has {len(row)} cells, expected {len(headers)}"
                )
            norm_rows.append(row)
        object.__setattr__(self, "headers", headers)
        object.__setattr__(self, "rows", tuple(norm_rows))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.headers)


@dataclass(frozen=True)
class TableTextPair:
    """A table paired with a sentence, plus optional gold answer cells."""

    sentence: str
    table: Table
    gold_cells: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "gold_cells",
                           frozenset((int(r), int(c)) for r, c in self.gold_cells))
        for r, c in self.gold_cells:
            if not (0 <= r < self.table.n_rows and 0 <= c < self.table.n_cols):
                raise DimensionMismatchError(
                    f"gold cell ({r}, {c}) outside {self.table.n_rows}x{self.table.n_cols} table"
                )


@dataclass(frozen=True)
class TablePermutation:
    """A pair of bijections on row and column indices.

    ``row_perm[i]`` is the destination index of source row ``i`` (likewise for
    columns): permuting puts input cell ``(i, j)`` at output position
    ``(row_perm[i], col_perm[j])``.  ``seed`` records provenance; -1 means the
    permutation was built by hand rather than drawn from a seed.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    seed: int = -1

    def __post_init__(self):
        object.__setattr__(self, "row_perm", tuple(int(i) for i in self.row_perm))
        object.__setattr__(self, "col_perm", tuple(int(i) for i in self.col_perm))
        for name, perm in (("row_perm", self.row_perm), ("col_perm", self.col_perm)):
            if sorted(perm) != list(range(len(perm))):
                raise DimensionMismatchError(f"{name} {perm} is not a bijection")

    @classmethod
    def identity(cls, n_rows: int, n_cols: int) -> "TablePermutation":
        return cls(tuple(range(n_rows)), tuple(range(n_cols)))

    @property
    def is_identity(self) -> bool:
        return (self.row_perm == tuple(range(len(self.row_perm)))
                and self.col_perm == tuple(range(len(self.col_perm))))

    def inverse(self) -> "TablePermutation":
        inv_r = [0] * len(self.row_perm)
        inv_c = [0] * len(self.col_perm)
        for i, j in enumerate(self.row_perm):
            inv_r[j] = i
        for i, j in enumerate(self.col_perm):
            inv_c[j] = i
        return TablePermutation(tuple(inv_r), tuple(inv_c))


@dataclass(frozen=True)
class RankAssignment:
    """Per-cell numeric rank; 0 means the cell carries no rank.

    Within a rankable column ranks are dense, start at 1 at the smallest
    value, and ties share a rank, so the assignment depends only on cell
    values and never on row order.
    """

    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "grid",
                           tuple(tuple(int(v) for v in row) for row in self.grid))
        for row in self.grid:
            if any(v < 0 for v in row):
                raise ValueError("ranks must be non-negative")

    def rank(self, row: int, col: int) -> int:
        return self.grid[row][col]


def parse_numeric(text: str) -> float | None:
    """Parse a cell as a number, or return None.

    Accepts plain decimal literals (optional sign and fraction) and x:yy
    colon durations, which are converted to total seconds (``"5:02"`` ->
    302.0).  Anything else, including dates and thousands separators, is
    deliberately not a number here.
    """
    text = text.strip()
    if _DECIMAL_RE.match(text):
        return float(text)
    m = _COLON_RE.match(text)
    if m:
        return float(int(m.group(1)) * 60 + int(m.group(2)))
    return None


def compute_ranks(table: Table) -> RankAssignment:
    """Dense ranks for every fully numeric column, ascending from 1.

    A column is rankable when every non-empty cell parses via
    :func:`parse_numeric`; otherwise the whole column degrades to rank 0.
    Empty cells never carry a rank.
    """
    n_rows, n_cols = table.n_rows, table.n_cols
    grid = [[0] * n_cols for _ in range(n_rows)]
    for c in range(n_cols):
        parsed: dict[int, float] = {}
        rankable = True
        for r in range(n_rows):
            text = table.rows[r][c].strip()
            if not text:
                continue
            value = parse_numeric(text)
            if value is None:
                rankable = False
                break
            parsed[r] = value
        if not rankable:
            continue
        ordered = sorted(set(parsed.values()))
        rank_of = {v: i + 1 for i, v in enumerate(ordered)}
        for r, v in parsed.items():
            grid[r][c] = rank_of[v]
    return RankAssignment(tuple(tuple(row) for row in grid))


def random_permutation(n_rows: int, n_cols: int, seed: int) -> TablePermutation:
    """Uniform row and column permutations drawn from one splitmix64 stream.

    Rows are shuffled first, then columns, so results are reproducible
    bit-for-bit from the seed alone.
    """
    if n_rows < 0 or n_cols < 0:
        raise DimensionMismatchError("table dimensions cannot be negative")
    gen = SplitMix64(seed)
    return TablePermutation(gen.shuffled_range(n_rows), gen.shuffled_range(n_cols), seed=seed)


def permute_table(pair: TableTextPair, perm: TablePermutation) -> TableTextPair:
    """Shuffle rows and columns (headers included) and remap gold cells.

    Output cell ``(i, j)`` holds input cell ``(row_perm^-1(i), col_perm^-1(j))``;
    the sentence is untouched.
    """
    table = pair.table
    if len(perm.row_perm) != table.n_rows or len(perm.col_perm) != table.n_cols:
        raise DimensionMismatchError(
            f"permutation for {len(perm.row_perm)}x{len(perm.col_perm)} does not fit "
            f"a {table.n_rows}x{table.n_cols} table"
        )
    headers = [""] * table.n_cols
    for c, text in enumerate(table.headers):
        headers[perm.col_perm[c]] = text
    rows = [[""] * table.n_cols for _ in range(table.n_rows)]
    for r in range(table.n_rows):
        for c in range(table.n_cols):
            rows[perm.row_perm[r]][perm.col_perm[c]] = table.rows[r][c]
    gold = frozenset((perm.row_perm[r], perm.col_perm[c]) for r, c in pair.gold_cells)
    return TableTextPair(sentence=pair.sentence, table=Table(headers, rows), gold_cells=gold)
