"""Dense GF(2) linear algebra on bit-packed arrays.

Matrices pack each row into 64-bit words (entry (r, c) is bit c % 64 of
word c // 64), so row addition is a whole-word XOR and elimination on an
n x n matrix costs about n^2/64 word operations per pivot. Bit vectors are
plain numpy uint8 arrays of 0/1.

Public index convention: rows, columns and permutation images are 1-based,
matching the usual notation for coupled-code sections x_1..x_kL; internal
numpy layout is 0-based.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, ParameterError, SingularMatrixError

WORD = 64


def pack_rows(dense):
    """Pack a 2-D 0/1 array into rows of uint64 words (little bit order)."""
    a = np.ascontiguousarray(dense, dtype=np.uint8)
    if a.ndim != 2:
        raise DimensionError(f"expected 2-D array, got {a.ndim}-D")
    rows, cols = a.shape
    nwords = max(1, -(-cols // WORD))
    padded = np.zeros((rows, nwords * WORD), dtype=np.uint8)
    padded[:, :cols] = a
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64)


def unpack_rows(words, cols):
    """Inverse of pack_rows: uint64 word rows back to a 0/1 uint8 array."""
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :cols].copy()


class Gf2Matrix:
    """Dense binary matrix with bit-packed rows."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows, cols, words):
        if rows < 0 or cols < 0:
            raise DimensionError("negative dimensions")
        self.rows = rows
        self.cols = cols
        self.words = words  # (rows, nwords) uint64

    @classmethod
    def from_dense(cls, dense):
        a = np.asarray(dense, dtype=np.uint8)
        return cls(a.shape[0], a.shape[1], pack_rows(a))

    @classmethod
    def zeros(cls, rows, cols):
        nwords = max(1, -(-cols // WORD))
        return cls(rows, cols, np.zeros((rows, nwords), dtype=np.uint64))

    @classmethod
    def identity(cls, n):
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    def to_dense(self):
        return unpack_rows(self.words, self.cols)

    def copy(self):
        return Gf2Matrix(self.rows, self.cols, self.words.copy())

    def __eq__(self, other):
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and np.array_equal(self.words, other.words))

    def __repr__(self):
        return f"Gf2Matrix({self.rows}x{self.cols})"

    def popcount(self):
        """Number of 1 entries."""
        return int(np.bitwise_count(self.words).sum())

    def matvec(self, v):
        """A @ v over GF(2); v is a 0/1 array of length cols."""
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.cols,):
            raise DimensionError(f"vector length {v.shape} != cols {self.cols}")
        vw = pack_rows(v[None, :])[0]
        acc = np.bitwise_count(self.words & vw[None, :]).sum(axis=1)
        return (acc & 1).astype(np.uint8)

    def _eliminate(self, aug_words):
        """Full Gauss-Jordan in place on copies; returns (W, aug, pivot_cols).

        Pivot choice is deterministic: columns scanned left to right, and
        within a column the lowest remaining row wins, so identical inputs
        always reduce identically.
        """
        W = self.words.copy()
        A = None if aug_words is None else aug_words.copy()
        pivots = []
        row = 0
        for col in range(self.cols):
            if row == self.rows:
                break
            w, b = divmod(col, WORD)
            mask = np.uint64(1 << b)
            below = np.nonzero(W[row:, w] & mask)[0]
            if below.size == 0:
                continue
            p = row + int(below[0])
            if p != row:
                W[[row, p]] = W[[p, row]]
                if A is not None:
                    A[[row, p]] = A[[p, row]]
            hit = np.nonzero(W[:, w] & mask)[0]
            hit = hit[hit != row]
            if hit.size:
                W[hit] ^= W[row]
                if A is not None:
                    A[hit] ^= A[row]
            pivots.append(col)
            row += 1
        return W, A, pivots

    def rank(self):
        """GF(2) rank by elimination."""
        _, _, pivots = self._eliminate(None)
        return len(pivots)

    def inverse(self):
        """Inverse over GF(2); raises SingularMatrixError if rank-deficient."""
        if self.rows != self.cols:
            raise DimensionError(f"inverse of non-square {self.rows}x{self.cols}")
        ident = Gf2Matrix.identity(self.rows)
        _, inv_words, pivots = self._eliminate(ident.words)
        if len(pivots) != self.rows:
            raise SingularMatrixError(
                f"matrix rank {len(pivots)} < {self.rows}, not invertible")
        return Gf2Matrix(self.rows, self.cols, inv_words)

    def solve(self, b):
        """Solve A x = b; raises SingularMatrixError unless A is invertible.

        No partial or least-norm solutions: a singular system is an error
        even when it happens to be consistent.
        """
        if self.rows != self.cols:
            raise DimensionError(f"solve with non-square {self.rows}x{self.cols}")
        b = np.asarray(b, dtype=np.uint8)
        if b.shape != (self.rows,):
            raise DimensionError(f"rhs length {b.shape} != rows {self.rows}")
        _, xw, pivots = self._eliminate(pack_rows(b[:, None]))
        if len(pivots) != self.rows:
            raise SingularMatrixError(
                f"matrix rank {len(pivots)} < {self.rows}, system not uniquely solvable")
        return unpack_rows(xw, 1)[:, 0]


def rank(a):
    return a.rank()


def solve_dense(a, b):
    return a.solve(b)


class PermutationMap:
    """Bijection p on [1, M] acting on length-M bit vectors.

    apply() realizes the permutation matrix P with P[i, j] = 1 iff i = p(j):
    output position p(j) receives input position j.
    """

    __slots__ = ("_img0",)

    def __init__(self, image):
        img = np.asarray(image, dtype=np.int64)
        if img.ndim != 1 or img.size == 0:
            raise ParameterError("permutation image must be a non-empty sequence")
        if not np.array_equal(np.sort(img), np.arange(1, img.size + 1)):
            raise ParameterError("image is not a bijection on [1, M]")
        self._img0 = img - 1

    @property
    def M(self):
        return self._img0.size

    @property
    def image(self):
        """1-based image: image[j-1] = p(j)."""
        return tuple(int(t) + 1 for t in self._img0)

    @classmethod
    def identity(cls, M):
        return cls(np.arange(1, M + 1))

    @classmethod
    def cyclic(cls, M, shift=1):
        """p(j) = j + shift (mod M, 1-based)."""
        return cls((np.arange(M) + shift) % M + 1)

    @classmethod
    def random(cls, M, rng):
        return cls(rng.permutation(M) + 1)

    def apply(self, v):
        """(P v): out[p(j)] = v[j]."""
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.M,):
            raise DimensionError(f"vector length {v.shape} != {self.M}")
        out = np.empty(self.M, dtype=np.uint8)
        out[self._img0] = v
        return out

    def apply_inverse(self, v):
        """(P^-1 v): out[j] = v[p(j)]."""
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.M,):
            raise DimensionError(f"vector length {v.shape} != {self.M}")
        return v[self._img0]

    def inverse(self):
        inv = np.empty(self.M, dtype=np.int64)
        inv[self._img0] = np.arange(1, self.M + 1)
        return PermutationMap(inv)

    def matrix(self):
        m = np.zeros((self.M, self.M), dtype=np.uint8)
        m[self._img0, np.arange(self.M)] = 1
        return m

    def __eq__(self, other):
        if not isinstance(other, PermutationMap):
            return NotImplemented
        return np.array_equal(self._img0, other._img0)

    def __repr__(self):
        return f"PermutationMap(M={self.M})"


def apply_permutation(p, v):
    return p.apply(v)


class ShiftBlock:
    """One-step delay block: output bit r is input bit r-1, output bit 1 is 0.

    As a matrix this is the subdiagonal shift (1s at (r, r-1) for r >= 2,
    first row zero). It is singular - the last input bit is dropped - so it
    is deliberately not a PermutationMap.
    """

    __slots__ = ("M",)

    def __init__(self, M):
        if M < 1:
            raise ParameterError("M must be >= 1")
        self.M = M

    def apply(self, v):
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.M,):
            raise DimensionError(f"vector length {v.shape} != {self.M}")
        out = np.zeros(self.M, dtype=np.uint8)
        out[1:] = v[:-1]
        return out

    def matrix(self):
        m = np.zeros((self.M, self.M), dtype=np.uint8)
        r = np.arange(1, self.M)
        m[r, r - 1] = 1
        return m

    def __eq__(self, other):
        if not isinstance(other, ShiftBlock):
            return NotImplemented
        return self.M == other.M

    def __repr__(self):
        return f"ShiftBlock(M={self.M})"


class MaskedPermutation:
    """Permutation block with selected output rows cleared to zero.

    Every permutation matrix satisfies 1^T P = 1^T, which forces the
    termination square of an unmodified coupled code to be singular no
    matter how the permutations are drawn. Rank repair breaks that
    invariant by deleting single 1-entries, one per cleared output row;
    the result is this block kind. Singular on purpose, like ShiftBlock
    (which is a cyclic permutation with output row 1 cleared).
    """

    __slots__ = ("perm", "cleared")

    def __init__(self, perm, cleared_rows):
        if not isinstance(perm, PermutationMap):
            raise ParameterError("perm must be a PermutationMap")
        rows = tuple(sorted(int(r) for r in cleared_rows))
        if not rows:
            raise ParameterError("cleared_rows must name at least one row")
        if len(set(rows)) != len(rows):
            raise ParameterError("cleared_rows contains duplicates")
        if rows[0] < 1 or rows[-1] > perm.M:
            raise ParameterError(f"cleared row outside [1, {perm.M}]")
        self.perm = perm
        self.cleared = rows

    @property
    def M(self):
        return self.perm.M

    def with_cleared(self, row):
        """New block with one more output row cleared."""
        return MaskedPermutation(self.perm, self.cleared + (row,))

    def apply(self, v):
        out = self.perm.apply(v)
        out[np.asarray(self.cleared) - 1] = 0
        return out

    def matrix(self):
        m = self.perm.matrix()
        m[np.asarray(self.cleared) - 1, :] = 0
        return m

    def __eq__(self, other):
        if not isinstance(other, MaskedPermutation):
            return NotImplemented
        return self.perm == other.perm and self.cleared == other.cleared

    def __repr__(self):
        return f"MaskedPermutation(M={self.M}, cleared={self.cleared})"
