"""Deterministic tokenization and flattening of table-text pairs.

A pair becomes one flat token sequence — ``[CLS]``, sentence, ``[SEP]``,
header cells left to right, body cells row-major — where every token carries
its structural annotation plus the id streams consumed by the encoder.  Which
positional streams are populated depends on the positional scheme:

    rc-gp  global positions + column ids + row ids
    c-gp   global positions + column ids
    gp     global positions only
    pcp    per-cell positions only (restart at 0 inside every table cell)

Under ``pcp`` no stream encodes row, column, or inter-cell order, which is
what makes the encoder's output independent of table ordering.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, SequenceTooLongError
from .table import RankAssignment, TableTextPair

CLS_SURFACE = "[CLS]"
SEP_SURFACE = "[SEP]"

DEFAULT_VOCAB_SIZE = 30_000
DEFAULT_MAX_LENGTH = 512

# FNV-1a, 64-bit: offset basis and prime from Fowler/Noll/Vo.
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


class TokenKind(enum.Enum):
    CLS = "cls"
    SEP = "sep"
    SENTENCE = "sentence"
    HEADER = "header"
    CELL = "cell"


class PositionalScheme(enum.Enum):
    RC_GP = "rc-gp"
    C_GP = "c-gp"
    GP = "gp"
    PCP = "pcp"


#: Token kinds that belong to the sentence segment (segment id 0).
SENTENCE_KINDS = frozenset({TokenKind.CLS, TokenKind.SEP, TokenKind.SENTENCE})


@dataclass(frozen=True)
class TokenAnnotation:
    """Structural coordinates of one token.

    ``column`` is 1-based (0 = not a table token); ``row`` is the 1-based body
    row (0 = header row or not a table token); ``cell_ordinal`` indexes the
    enclosing cell in linearization order, -1 for non-table tokens.
    """

    kind: TokenKind
    row: int = 0
    column: int = 0
    cell_ordinal: int = -1

    def __post_init__(self):
        if self.kind is TokenKind.HEADER:
            ok = self.row == 0 and self.column >= 1 and self.cell_ordinal >= 0
        elif self.kind is TokenKind.CELL:
            ok = self.row >= 1 and self.column >= 1 and self.cell_ordinal >= 0
        else:
            ok = self.row == 0 and self.column == 0 and self.cell_ordinal == -1
        if not ok:
            raise ValueError(f"inconsistent annotation: {self!r}")

    @property
    def is_sentence_like(self) -> bool:
        return self.kind in SENTENCE_KINDS


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, and split out punctuation characters.

    Runs of alphanumeric characters stay together; every other non-space
    character becomes its own token.  ``"5:02"`` -> ``["5", ":", "02"]``.
    """
    tokens: list[str] = []
    run: list[str] = []
    for ch in text.lower():
        if ch.isspace():
            if run:
                tokens.append("".join(run))
                run = []
        elif ch.isalnum():
            run.append(ch)
        else:
            if run:
                tokens.append("".join(run))
                run = []
            tokens.append(ch)
    if run:
        tokens.append("".join(run))
    return tokens


def token_id(surface: str, vocab_size: int = DEFAULT_VOCAB_SIZE) -> int:
    """Stable token id: FNV-1a (64-bit) of the UTF-8 surface, mod vocab size."""
    if vocab_size < 1:
        raise ValueError(f"vocab size must be positive, got {vocab_size}")
    h = _FNV_OFFSET
    for byte in surface.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h % vocab_size


@dataclass(frozen=True)
class LinearizedSequence:
    """Flat token sequence with per-token annotations and id streams.

    The arrays are parallel: ``token_ids``, ``segment_ids``, ``rank_ids``,
    ``global_pos``, ``per_cell_pos``, ``column_ids`` and ``row_ids`` all have
    one entry per token.  Streams not emitted by ``scheme`` are all zero.
    Arrays are write-protected; treat instances as immutable.
    """

    surfaces: tuple[str, ...]
    annotations: tuple[TokenAnnotation, ...]
    token_ids: np.ndarray
    segment_ids: np.ndarray
    rank_ids: np.ndarray
    global_pos: np.ndarray
    per_cell_pos: np.ndarray
    column_ids: np.ndarray
    row_ids: np.ndarray
    scheme: PositionalScheme

    def __post_init__(self):
        n = len(self.surfaces)
        for name in ("annotations", "token_ids", "segment_ids", "rank_ids",
                     "global_pos", "per_cell_pos", "column_ids", "row_ids"):
            if len(getattr(self, name)) != n:
                raise DimensionMismatchError(f"stream {name} has wrong length")
        for name in ("token_ids", "segment_ids", "rank_ids", "global_pos",
                     "per_cell_pos", "column_ids", "row_ids"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.surfaces)

    def cell_token_indices(self) -> dict[tuple[int, int], list[int]]:
        """Token indices of each body cell, keyed by 0-based (row, col)."""
        cells: dict[tuple[int, int], list[int]] = {}
        for i, ann in enumerate(self.annotations):
            if ann.kind is TokenKind.CELL:
                cells.setdefault((ann.row - 1, ann.column - 1), []).append(i)
        return cells

    def intra_cell_index(self, i: int) -> int:
        """Position of token ``i`` within its enclosing cell (0 for non-table)."""
        ordinal = self.annotations[i].cell_ordinal
        if ordinal < 0:
            return 0
        j = i
        while j > 0 and self.annotations[j - 1].cell_ordinal == ordinal:
            j -= 1
        return i - j


def linearize(
    pair: TableTextPair,
    ranks: RankAssignment,
    scheme: PositionalScheme,
    max_length: int = DEFAULT_MAX_LENGTH,
    vocab_size: int = DEFAULT_VOCAB_SIZE,
) -> LinearizedSequence:
    """Flatten a pair into a LinearizedSequence under the given scheme.

    ``ranks`` must have been computed from ``pair.table``.  Sequences longer
    than ``max_length`` are an error; silent truncation would drop different
    rows depending on table order and break order-invariance guarantees.
    """
    table = pair.table
    if len(ranks.grid) != table.n_rows or any(len(r) != table.n_cols for r in ranks.grid):
        raise DimensionMismatchError(
            f"rank grid does not match a {table.n_rows}x{table.n_cols} table"
        )

    surfaces: list[str] = [CLS_SURFACE]
    anns: list[TokenAnnotation] = [TokenAnnotation(TokenKind.CLS)]
    rank_ids: list[int] = [0]

    for tok in tokenize(pair.sentence):
        surfaces.append(tok)
        anns.append(TokenAnnotation(TokenKind.SENTENCE))
        rank_ids.append(0)

    surfaces.append(SEP_SURFACE)
    anns.append(TokenAnnotation(TokenKind.SEP))
    rank_ids.append(0)

    for c, header in enumerate(table.headers):
        for tok in tokenize(header):
            surfaces.append(tok)
            anns.append(TokenAnnotation(TokenKind.HEADER, row=0, column=c + 1,
                                        cell_ordinal=c))
            rank_ids.append(0)

    n_cols = table.n_cols
    for r in range(table.n_rows):
        for c in range(n_cols):
            ordinal = n_cols + r * n_cols + c
            for tok in tokenize(table.rows[r][c]):
                surfaces.append(tok)
                anns.append(TokenAnnotation(TokenKind.CELL, row=r + 1, column=c + 1,
                                            cell_ordinal=ordinal))
                rank_ids.append(ranks.grid[r][c])

    n = len(surfaces)
    if n > max_length:
        raise SequenceTooLongError(
            f"linearized sequence has {n} tokens, maximum is {max_length}"
        )

    token_ids = [token_id(s, vocab_size) for s in surfaces]
    segment_ids = [0 if a.is_sentence_like else 1 for a in anns]

    per_cell = [0] * n
    if scheme is PositionalScheme.PCP:
        running = 0
        prev_ordinal = None
        for i, ann in enumerate(anns):
            if ann.cell_ordinal < 0:
                per_cell[i] = running
                running += 1
            else:
                if ann.cell_ordinal != prev_ordinal:
                    running = 0
                    prev_ordinal = ann.cell_ordinal
                per_cell[i] = running
                running += 1

    emit_global = scheme in (PositionalScheme.RC_GP, PositionalScheme.C_GP,
                             PositionalScheme.GP)
    emit_col = scheme in (PositionalScheme.RC_GP, PositionalScheme.C_GP)
    emit_row = scheme is PositionalScheme.RC_GP

    global_pos = list(range(n)) if emit_global else [0] * n
    column_ids = [a.column for a in anns] if emit_col else [0] * n
    row_ids = [a.row for a in anns] if emit_row else [0] * n

    return LinearizedSequence(
        surfaces=tuple(surfaces),
        annotations=tuple(anns),
        token_ids=np.array(token_ids, dtype=np.int64),
        segment_ids=np.array(segment_ids, dtype=np.int64),
        rank_ids=np.array(rank_ids, dtype=np.int64),
        global_pos=np.array(global_pos, dtype=np.int64),
        per_cell_pos=np.array(per_cell, dtype=np.int64),
        column_ids=np.array(column_ids, dtype=np.int64),
        row_ids=np.array(row_ids, dtype=np.int64),
        scheme=scheme,
    )
