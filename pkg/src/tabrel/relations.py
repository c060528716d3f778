"""Pairwise structural relations between linearized tokens.

Every ordered token pair (query i, key j) gets exactly one of 13 relation
types.  The encoder turns these into learnable per-head attention bias
scalars, which is how table structure reaches the model without any ordered
row/column ids.  Type codes are a fixed artifact convention:

     0  OTHERS                  fallback; never masked away by default, so
                                cells can still attend across rows/columns
     1  SAME_ROW                both cells in the same body row
     2  SAME_COLUMN             both cells in the same column
     3  HEADER_TO_COLUMN_CELL   header attending to a cell of its column
     4  CELL_TO_COLUMN_HEADER   cell attending to its own column header
     5  HEADER_TO_SENTENCE      6  CELL_TO_SENTENCE
     7  SENTENCE_TO_HEADER      8  SENTENCE_TO_CELL
     9  SENTENCE_TO_SENTENCE   10  HEADER_TO_SAME_HEADER
    11  HEADER_TO_OTHER_HEADER 12  SAME_CELL

[CLS] and [SEP] count as sentence tokens.  SAME_CELL wins over SAME_ROW and
SAME_COLUMN for intra-cell pairs; header identity is by cell, not by text,
so duplicate header texts in different columns are still 11.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import AblationError
from .linearize import LinearizedSequence, TokenAnnotation, TokenKind


class BiasType(enum.IntEnum):
    OTHERS = 0
    SAME_ROW = 1
    SAME_COLUMN = 2
    HEADER_TO_COLUMN_CELL = 3
    CELL_TO_COLUMN_HEADER = 4
    HEADER_TO_SENTENCE = 5
    CELL_TO_SENTENCE = 6
    SENTENCE_TO_HEADER = 7
    SENTENCE_TO_CELL = 8
    SENTENCE_TO_SENTENCE = 9
    HEADER_TO_SAME_HEADER = 10
    HEADER_TO_OTHER_HEADER = 11
    SAME_CELL = 12


N_BIAS_TYPES = 13

#: Everything carrying same-column information (used by the ablation study).
COLUMN_RELATED_TYPES = frozenset({
    BiasType.SAME_COLUMN,
    BiasType.HEADER_TO_COLUMN_CELL,
    BiasType.CELL_TO_COLUMN_HEADER,
})


def classify_relation(a: TokenAnnotation, b: TokenAnnotation) -> BiasType:
    """Relation type of query token ``a`` attending to key token ``b``."""
    a_sent, b_sent = a.is_sentence_like, b.is_sentence_like
    if a_sent and b_sent:
        return BiasType.SENTENCE_TO_SENTENCE
    if a_sent:
        return (BiasType.SENTENCE_TO_HEADER if b.kind is TokenKind.HEADER
                else BiasType.SENTENCE_TO_CELL)
    if b_sent:
        return (BiasType.HEADER_TO_SENTENCE if a.kind is TokenKind.HEADER
                else BiasType.CELL_TO_SENTENCE)
    a_header = a.kind is TokenKind.HEADER
    b_header = b.kind is TokenKind.HEADER
    if a_header and b_header:
        return (BiasType.HEADER_TO_SAME_HEADER if a.column == b.column
                else BiasType.HEADER_TO_OTHER_HEADER)
    if a_header:
        return (BiasType.HEADER_TO_COLUMN_CELL if a.column == b.column
                else BiasType.OTHERS)
    if b_header:
        return (BiasType.CELL_TO_COLUMN_HEADER if a.column == b.column
                else BiasType.OTHERS)
    if a.row == b.row and a.column == b.column:
        return BiasType.SAME_CELL
    if a.row == b.row:
        return BiasType.SAME_ROW
    if a.column == b.column:
        return BiasType.SAME_COLUMN
    return BiasType.OTHERS


class BiasTypeMatrix:
    """n x n grid of relation type codes; row = query token, column = key."""

    def __init__(self, types: np.ndarray):
        types = np.asarray(types, dtype=np.int64)
        if types.ndim != 2 or types.shape[0] != types.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {types.shape}")
        if types.size and (types.min() < 0 or types.max() >= N_BIAS_TYPES):
            raise ValueError("type codes must lie in [0, 13)")
        types.flags.writeable = False
        self.types = types

    @property
    def n(self) -> int:
        return self.types.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, BiasTypeMatrix) and np.array_equal(self.types, other.types)


def bias_type_matrix(seq: LinearizedSequence) -> BiasTypeMatrix:
    """Materialize classify_relation over all ordered token pairs.

    Vectorized; agrees entry-for-entry with calling :func:`classify_relation`
    in a double loop.
    """
    anns = seq.annotations
    n = len(anns)
    sent = np.array([a.is_sentence_like for a in anns], dtype=bool)
    header = np.array([a.kind is TokenKind.HEADER for a in anns], dtype=bool)
    cell = np.array([a.kind is TokenKind.CELL for a in anns], dtype=bool)
    row = np.array([a.row for a in anns], dtype=np.int64)
    col = np.array([a.column for a in anns], dtype=np.int64)

    same_row = row[:, None] == row[None, :]
    same_col = col[:, None] == col[None, :]

    m = np.zeros((n, n), dtype=np.int64)
    m[np.ix_(sent, sent)] = BiasType.SENTENCE_TO_SENTENCE
    m[np.ix_(sent, header)] = BiasType.SENTENCE_TO_HEADER
    m[np.ix_(sent, cell)] = BiasType.SENTENCE_TO_CELL
    m[np.ix_(header, sent)] = BiasType.HEADER_TO_SENTENCE
    m[np.ix_(cell, sent)] = BiasType.CELL_TO_SENTENCE

    hh = np.outer(header, header)
    m[hh & same_col] = BiasType.HEADER_TO_SAME_HEADER
    m[hh & ~same_col] = BiasType.HEADER_TO_OTHER_HEADER

    m[np.outer(header, cell) & same_col] = BiasType.HEADER_TO_COLUMN_CELL
    m[np.outer(cell, header) & same_col] = BiasType.CELL_TO_COLUMN_HEADER

    cc = np.outer(cell, cell)
    m[cc & same_row & ~same_col] = BiasType.SAME_ROW
    m[cc & same_col & ~same_row] = BiasType.SAME_COLUMN
    m[cc & same_row & same_col] = BiasType.SAME_CELL
    return BiasTypeMatrix(m)


def ablate_types(matrix: BiasTypeMatrix, remove: frozenset[int] | set[int]) -> BiasTypeMatrix:
    """Remap every entry whose type is in ``remove`` to OTHERS.

    Removing OTHERS itself is rejected: it is the fallback, not a bias.
    """
    remove = {BiasType(t) for t in remove}
    if BiasType.OTHERS in remove:
        raise AblationError("cannot ablate the OTHERS fallback type")
    if not remove:
        return matrix
    mask = np.isin(matrix.types, [int(t) for t in remove])
    return BiasTypeMatrix(np.where(mask, int(BiasType.OTHERS), matrix.types))
