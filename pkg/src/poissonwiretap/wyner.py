"""Constant-weight codebooks for the Poisson channel (Wyner's construction).

A code with M rows and column weight k lists all C(M, k) binary M-vectors
with exactly k ones as columns; the horizon [0, T] splits into C(M, k) equal
slots and codeword m transmits 1 on slot n iff matrix(m, n) = 1.  Every
codeword then has duty cycle exactly k/M, and any ordered row pair is
(1, 0) on exactly a k(M-k)/(M(M-1)) fraction of slots.

Columns are enumerated in lexicographic k-subset order so traces are
reproducible.  Small codes store the bit matrix densely; larger ones
regenerate columns on the fly from the subset enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .pointprocess import ArrivalProcess, Waveform, count_in_intervals

# The asymptotic regime is handled analytically elsewhere; combinatorial
# materialization stops well before it.
MAX_COLUMNS = 1 << 40
DENSE_COLUMN_LIMIT = 1 << 20


class WynerCode:
    """Built by :func:`build_code`; immutable after construction."""

    def __init__(self, m_rows: int, k_ones: int, horizon: float, dense: bool):
        self.m_rows = m_rows
        self.k_ones = k_ones
        self.horizon = float(horizon)
        self.n_cols = comb(m_rows, k_ones)
        self.slot_len = self.horizon / self.n_cols
        self._matrix = None
        if dense:
            idx = np.fromiter(
                (i for col in combinations(range(m_rows), k_ones) for i in col),
                dtype=np.int64,
                count=self.n_cols * k_ones,
            ).reshape(self.n_cols, k_ones)
            mat = np.zeros((m_rows, self.n_cols), dtype=np.uint8)
            mat[idx.ravel(), np.repeat(np.arange(self.n_cols), k_ones)] = 1
            self._matrix = mat

    @property
    def matrix(self) -> np.ndarray:
        """Dense bit matrix (rows x columns); only for densely stored codes."""
        if self._matrix is None:
            raise ValueError("code too large for a dense matrix")
        return self._matrix

    @property
    def is_dense(self) -> bool:
        return self._matrix is not None

    def column_members(self, n: int) -> tuple[int, ...]:
        """Rows that are 1 in column n (the n-th k-subset in lex order)."""
        if not 0 <= n < self.n_cols:
            raise IndexError(f"column {n} out of range")
        if self._matrix is not None:
            return tuple(np.flatnonzero(self._matrix[:, n]))
        return _unrank_subset(n, self.m_rows, self.k_ones)

    def row_mask(self, m: int) -> np.ndarray:
        """Boolean slot mask of codeword m."""
        if not 0 <= m < self.m_rows:
            raise IndexError(f"row {m} out of range")
        if self._matrix is not None:
            return self._matrix[m].astype(bool)
        mask = np.empty(self.n_cols, dtype=bool)
        for n, col in enumerate(combinations(range(self.m_rows), self.k_ones)):
            mask[n] = m in col
        return mask

    def slot_cuts(self) -> np.ndarray:
        """Slot boundaries 0 = t_0 < ... < t_N = horizon, endpoint-exact."""
        return self.horizon * np.arange(self.n_cols + 1) / self.n_cols


def _unrank_subset(rank: int, m: int, k: int) -> tuple[int, ...]:
    """rank-th k-subset of {0..m-1} in lexicographic order."""
    members = []
    remaining = k
    for element in range(m):
        if remaining == 0:
            break
        below = comb(m - element - 1, remaining - 1)
        if rank < below:
            members.append(element)
            remaining -= 1
        else:
            rank -= below
    return tuple(members)


def build_code(m_rows: int, k_ones: int, horizon: float, dense: bool | None = None) -> WynerCode:
    """Construct the code; dense=None picks storage by column count."""
    if not (1 <= k_ones < m_rows):
        raise ValueError(f"need 1 <= k_ones < m_rows, got k={k_ones}, M={m_rows}")
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    n_cols = comb(m_rows, k_ones)
    if n_cols > MAX_COLUMNS:
        raise ValueError(f"C({m_rows},{k_ones}) = {n_cols} exceeds the {MAX_COLUMNS} column guard")
    if dense is None:
        dense = n_cols <= DENSE_COLUMN_LIMIT
    return WynerCode(m_rows, k_ones, horizon, dense)


def codeword_waveform(code: WynerCode, m: int) -> Waveform:
    """{0,1} waveform of row m: one slot per column."""
    return Waveform(code.horizon, code.slot_cuts(), code.row_mask(m).astype(float))


def pairwise_overlap_fraction(code: WynerCode, m: int, m_other: int) -> float:
    """Fraction of slots where row m is 1 and row m_other is 0."""
    if not (0 <= m < code.m_rows and 0 <= m_other < code.m_rows):
        raise IndexError("row index out of range")
    if m == m_other:
        raise ValueError("rows must be distinct")
    if code.is_dense:
        row_a = code.matrix[m].astype(bool)
        row_b = code.matrix[m_other].astype(bool)
        return float(np.count_nonzero(row_a & ~row_b)) / code.n_cols
    # Columns containing m but not m_other: choose the other k-1 ones from
    # the remaining M-2 rows.
    return comb(code.m_rows - 2, code.k_ones - 1) / code.n_cols


@dataclass(frozen=True)
class SubcodePartition:
    """Equal contiguous blocks of rows, one block per message."""

    n_messages: int
    codewords_per_message: int

    def rows_of(self, message: int) -> range:
        if not 0 <= message < self.n_messages:
            raise IndexError(f"message {message} out of range")
        start = message * self.codewords_per_message
        return range(start, start + self.codewords_per_message)

    def message_of(self, row: int) -> int:
        return row // self.codewords_per_message


def partition(code: WynerCode, n_messages: int) -> SubcodePartition:
    """Split the rows into n_messages equal contiguous subcodes."""
    if n_messages < 1:
        raise ValueError("need at least one message")
    if code.m_rows % n_messages != 0:
        raise ValueError(f"{n_messages} messages do not divide {code.m_rows} rows")
    return SubcodePartition(n_messages, code.m_rows // n_messages)


def encode(
    code: WynerCode, part: SubcodePartition, message: int, rng: np.random.Generator
) -> tuple[int, Waveform]:
    """Stochastic encoder: uniform row inside the message's subcode."""
    rows = part.rows_of(message)
    row = int(rng.integers(rows.start, rows.stop))
    return row, codeword_waveform(code, row)


def decision_statistics(code: WynerCode, arrivals: ArrivalProcess) -> np.ndarray:
    """Per-row arrival counts over the slots where the row transmits 1."""
    if arrivals.horizon != code.horizon:
        raise ValueError(f"horizon mismatch: {arrivals.horizon} vs {code.horizon}")
    counts = count_in_intervals(arrivals, code.slot_cuts())
    if code.is_dense:
        return code.matrix.astype(np.int64) @ counts
    psi = np.zeros(code.m_rows, dtype=np.int64)
    for n, col in enumerate(combinations(range(code.m_rows), code.k_ones)):
        c = counts[n]
        if c:
            for row in col:
                psi[row] += c
    return psi


def ml_decode(code: WynerCode, arrivals: ArrivalProcess, candidate_rows=None) -> int:
    """Maximum-likelihood row: argmax of the slot-count statistic.

    Ties resolve to the smallest row index.  candidate_rows restricts the
    search (subcode decoding); None means all rows.
    """
    psi = decision_statistics(code, arrivals)
    if candidate_rows is None:
        return int(np.argmax(psi))
    rows = np.fromiter(candidate_rows, dtype=np.int64)
    return int(rows[np.argmax(psi[rows])])
