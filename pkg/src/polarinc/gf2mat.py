"""Dense GF(2) matrices packed 64 columns to a little-endian uint64 word.

Column ``j`` of a row lives in word ``j // 64`` at bit ``j % 64``.  Bits past
``cols`` in the last word are always zero; :func:`audit_padding` checks this.

``BitMatrix`` values are immutable: the word array is read-only and every
operation returns a new matrix.
"""

from __future__ import annotations

import re
from typing import Sequence

import numpy as np

from .errors import (
    BitMatrixFormatError,
    DimensionMismatch,
    IndexOutOfBounds,
    MalformedHeader,
    NotSquare,
    TruncatedPayload,
)

WORD = 64
_DT = np.dtype("<u8")


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def _pad_mask(cols: int) -> np.uint64:
    r = cols % WORD
    return np.uint64(0xFFFFFFFFFFFFFFFF) if r == 0 else np.uint64((1 << r) - 1)


class BitMatrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        w = _nwords(cols)
        if data is None:
            data = np.zeros((rows, w), dtype=_DT)
        else:
            data = np.array(data, dtype=_DT, copy=True).reshape(rows, w)
            if w:
                data[:, -1] &= _pad_mask(cols)
        data.setflags(write=False)
        self.rows, self.cols, self.data = rows, cols, data

    @classmethod
    def _wrap(cls, rows: int, cols: int, data: np.ndarray) -> "BitMatrix":
        # internal: takes ownership of a correctly padded array
        m = cls.__new__(cls)
        data.setflags(write=False)
        m.rows, m.cols, m.data = rows, cols, data
        return m

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        a = np.asarray(array)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        rows, cols = a.shape
        w = _nwords(cols)
        bits = (a.astype(np.int64) & 1).astype(np.uint8)
        if w * WORD != cols:
            bits = np.pad(bits, ((0, 0), (0, w * WORD - cols)))
        packed = np.packbits(bits, axis=1, bitorder="little")
        data = np.ascontiguousarray(packed).view(_DT).reshape(rows, w).copy()
        return cls._wrap(rows, cols, data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        return cls.from_dense(np.array(rows, dtype=np.uint8).reshape(len(rows), cols))

    # -- views -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        """Unpacked uint8 array of shape (rows, cols)."""
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        raw = np.ascontiguousarray(self.data).view(np.uint8).reshape(self.rows, -1)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.cols]

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexOutOfBounds(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return int((self.data[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    __hash__ = None

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"

    def row_sums(self) -> np.ndarray:
        """Integer number of ones in each row."""
        return self.to_dense().sum(axis=1, dtype=np.int64)

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def with_flipped(self, i: int, j: int) -> "BitMatrix":
        """Copy with entry (i, j) toggled."""
        self[i, j]  # bounds check
        data = self.data.copy()
        data[i, j // WORD] ^= np.uint64(1) << np.uint64(j % WORD)
        return BitMatrix._wrap(self.rows, self.cols, data)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.transpose()


# -- predicates and elementwise operations ------------------------------------


def audit_padding(M: BitMatrix) -> bool:
    """True when no bit beyond ``cols`` is set and the word layout is consistent."""
    if M.data.shape != (M.rows, _nwords(M.cols)):
        return False
    if M.rows == 0 or M.cols == 0:
        return True
    return not np.any(M.data[:, -1] & ~_pad_mask(M.cols))


def is_zero(M: BitMatrix) -> bool:
    return not M.data.any()


def is_identity(M: BitMatrix) -> bool:
    return M.rows == M.cols and M == BitMatrix.identity(M.rows)


def add2(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot add {A.rows}x{A.cols} and {B.rows}x{B.cols}")
    return BitMatrix._wrap(A.rows, A.cols, A.data ^ B.data)


def add_identity(M: BitMatrix) -> BitMatrix:
    if M.rows != M.cols:
        raise NotSquare(f"{M.rows}x{M.cols} matrix has no identity to add")
    return add2(M, BitMatrix.identity(M.rows))


def _check_index(idx, bound: int, what: str) -> np.ndarray:
    if isinstance(idx, slice):
        idx = range(bound)[idx]
    arr = np.asarray(idx, dtype=np.int64).reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() >= bound):
        raise IndexOutOfBounds(f"{what} index outside [0, {bound})")
    return arr


def submatrix(M: BitMatrix, rows, cols) -> BitMatrix:
    """Restriction to the given row and column indices, kept in the given order."""
    r = _check_index(rows, M.rows, "row")
    c = _check_index(cols, M.cols, "column")
    return BitMatrix.from_dense(M.to_dense()[np.ix_(r, c)])


def block2x2(A: BitMatrix, B: BitMatrix, C: BitMatrix, D: BitMatrix) -> BitMatrix:
    """Assemble [[A, B], [C, D]]."""
    if A.rows != B.rows or C.rows != D.rows or A.cols != C.cols or B.cols != D.cols:
        raise DimensionMismatch("blocks do not line up")
    top = np.hstack([A.to_dense(), B.to_dense()])
    bottom = np.hstack([C.to_dense(), D.to_dense()])
    return BitMatrix.from_dense(np.vstack([top, bottom]))


def block_diag(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    return block2x2(A, BitMatrix.zeros(A.rows, B.cols), BitMatrix.zeros(B.rows, A.cols), B)


def first_difference(A: BitMatrix, B: BitMatrix) -> tuple[int, int] | None:
    """Row-major first position where two equal-shape matrices differ."""
    if A.shape != B.shape:
        raise DimensionMismatch("shapes differ")
    diff = np.argwhere(A.to_dense() != B.to_dense())
    return None if len(diff) == 0 else (int(diff[0][0]), int(diff[0][1]))


# -- rank, product, power -------------------------------------------------------


def rank2(M: BitMatrix) -> int:
    """Rank over GF(2).

    Columns are scanned left to right; the pivot is the first not-yet-used
    row with a 1 in that column, and it is XORed into every later row that
    has the bit set.  Works on a copy.
    """
    W = M.data.copy()
    W.setflags(write=True)
    rank = 0
    for col in range(M.cols):
        if rank == M.rows:
            break
        w = col // WORD
        bit = np.uint64(1) << np.uint64(col % WORD)
        hits = np.flatnonzero(W[rank:, w] & bit)
        if hits.size == 0:
            continue
        piv = rank + hits[0]
        if piv != rank:
            W[[rank, piv]] = W[[piv, rank]]
        below = rank + 1 + np.flatnonzero(W[rank + 1 :, w] & bit)
        if below.size:
            W[below, w:] ^= W[rank, w:]
        rank += 1
    return rank


def matmul2(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    """Product over GF(2) by the method of four Russians.

    Each byte of A's packed rows selects one of 256 precomputed XOR
    combinations of eight consecutive rows of B.
    """
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    wb = _nwords(B.cols)
    C = np.zeros((A.rows, wb), dtype=_DT)
    if A.rows == 0 or A.cols == 0 or wb == 0:
        return BitMatrix._wrap(A.rows, B.cols, C)
    abytes = np.ascontiguousarray(A.data).view(np.uint8).reshape(A.rows, -1)
    ngroups = (A.cols + 7) // 8
    table = np.zeros((256, wb), dtype=_DT)
    for g in range(ngroups):
        lo = 8 * g
        table[:] = 0
        for k in range(min(8, B.rows - lo)):
            table[1 << k : 2 << k] = table[: 1 << k] ^ B.data[lo + k]
        C ^= table[abytes[:, g]]
    return BitMatrix._wrap(A.rows, B.cols, C)


def matpow2(M: BitMatrix, k: int) -> BitMatrix:
    if M.rows != M.cols:
        raise NotSquare(f"cannot raise a {M.rows}x{M.cols} matrix to a power")
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = BitMatrix.identity(M.rows)
    base = M
    while k:
        if k & 1:
            result = matmul2(result, base)
        k >>= 1
        if k:
            base = matmul2(base, base)
    return result


# -- BITMAT v1 serialization ----------------------------------------------------

_HEADER = re.compile(rb"^BITMAT 1 (\d+) (\d+)$")


def serialize(M: BitMatrix) -> bytes:
    """``BITMAT 1 <rows> <cols>`` then one line of 0/1 characters per row."""
    out = [f"BITMAT 1 {M.rows} {M.cols}\n".encode("ascii")]
    dense = M.to_dense() + ord("0")
    for row in dense.astype(np.uint8):
        out.append(row.tobytes() + b"\n")
    return b"".join(out)


def deserialize(blob: bytes) -> BitMatrix:
    if isinstance(blob, str):
        blob = blob.encode("ascii")
    head, sep, body = blob.partition(b"\n")
    m = _HEADER.match(head)
    if not sep or not m:
        raise MalformedHeader(f"not a BITMAT v1 header: {head[:40]!r}")
    rows, cols = int(m.group(1)), int(m.group(2))
    lines = body.split(b"\n")
    if len(lines) < rows + 1:
        raise TruncatedPayload(f"expected {rows} newline-terminated rows, stream ends early")
    if lines[rows:] != [b""]:
        raise BitMatrixFormatError("trailing data after the last row")
    dense = np.zeros((rows, cols), dtype=np.uint8)
    for i, line in enumerate(lines[:rows]):
        if len(line) != cols:
            raise TruncatedPayload(f"row {i} has {len(line)} characters, expected {cols}")
        arr = np.frombuffer(line, dtype=np.uint8)
        if np.any((arr != ord("0")) & (arr != ord("1"))):
            raise BitMatrixFormatError(f"row {i} contains characters other than 0 and 1")
        dense[i] = arr - ord("0")
    return BitMatrix.from_dense(dense)
