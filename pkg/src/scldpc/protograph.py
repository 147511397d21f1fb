"""Coupled-chain protograph construction, design rates, bit accounting.

A (dl, dr, L) chain couples L positions of a regular (dl, dr) code with
k = dr/dl sections per position. The base matrix is band binary: check row i
has its 1s in columns {i*k - dr + j : j in [1, dr]} clipped to [1, kL]. That
single support rule generates everything else in the library (lifting,
encoding order, density evolution).

The original chain has L + dl - 1 rows so that every column has weight
exactly dl. The modified chain drops the bottom dl - 2 rows, leaving L + 1
rows and lighter rightmost columns; it trades boundary protection for a
smaller rate loss and a cheap termination stage.
"""
from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class CodeParams:
    """Chain parameters; modified selects the reduced-row variant."""

    dl: int
    dr: int
    L: int
    modified: bool = False

    def __post_init__(self):
        if self.dl < 2:
            raise ParameterError(f"dl must be >= 2, got {self.dl}")
        if self.dr % self.dl != 0:
            raise ParameterError(
                f"dr must be a multiple of dl, got dr={self.dr}, dl={self.dl}")
        if self.dr // self.dl < 2:
            raise ParameterError(
                f"k = dr/dl must be >= 2, got {self.dr}/{self.dl}")
        if self.L < self.dl:
            raise ParameterError(f"L must be >= dl, got L={self.L}, dl={self.dl}")

    @property
    def k(self):
        return self.dr // self.dl

    @property
    def n_rows(self):
        return self.L + 1 if self.modified else self.L + self.dl - 1

    @property
    def n_cols(self):
        return self.k * self.L


@dataclass(frozen=True, eq=False)
class BaseMatrix:
    """Binary protograph adjacency plus its parameters."""

    params: CodeParams
    entries: np.ndarray  # (n_rows, n_cols) uint8

    @property
    def rows(self):
        return self.params.n_rows

    @property
    def cols(self):
        return self.params.n_cols

    def col_of(self, i, j):
        """Column of band position j in row i (may fall outside [1, cols])."""
        return i * self.params.k - self.params.dr + j

    def row_band(self, i):
        """Valid (j, col) band positions of row i, 1-based, ascending."""
        p = self.params
        if not 1 <= i <= self.rows:
            raise ParameterError(f"row {i} outside [1, {self.rows}]")
        out = []
        for j in range(1, p.dr + 1):
            c = self.col_of(i, j)
            if 1 <= c <= self.cols:
                out.append((j, c))
        return out

    def row_support(self, i):
        """1-based columns with a 1 in row i."""
        return tuple(c for _, c in self.row_band(i))

    def col_support(self, c):
        """1-based rows with a 1 in column c."""
        if not 1 <= c <= self.cols:
            raise ParameterError(f"column {c} outside [1, {self.cols}]")
        return tuple(int(r) + 1 for r in np.nonzero(self.entries[:, c - 1])[0])

    def __eq__(self, other):
        if not isinstance(other, BaseMatrix):
            return NotImplemented
        return self.params == other.params and np.array_equal(
            self.entries, other.entries)


def build_base(params):
    """Construct the band base matrix for the given parameters."""
    rows, cols = params.n_rows, params.n_cols
    m = np.zeros((rows, cols), dtype=np.uint8)
    for i in range(1, rows + 1):
        lo = max(1, i * params.k - params.dr + 1)
        hi = min(cols, i * params.k)
        m[i - 1, lo - 1:hi] = 1
    return BaseMatrix(params=params, entries=m)


def design_rate(params):
    """Design rate as an exact fraction.

    Original: (k-1)/k - (dl-1)/(kL); modified: (k-1)/k - 1/(kL). The modified
    chain recovers (dl-2)/(kL) of the coupling rate loss.
    """
    k = params.k
    loss = 1 if params.modified else params.dl - 1
    return Fraction(k - 1, k) - Fraction(loss, k * params.L)


def rate_string(params):
    """Design rate rounded half-up to 5 decimals, as a string."""
    r = design_rate(params)
    with decimal.localcontext() as ctx:
        ctx.prec = 50
        d = decimal.Decimal(r.numerator) / decimal.Decimal(r.denominator)
        return str(d.quantize(decimal.Decimal("0.00001"), decimal.ROUND_HALF_UP))


@dataclass(frozen=True)
class BitAccounting:
    """Partition of the kL sections into information and parity roles."""

    n_info: int
    n_seq: int
    n_term: int
    info_positions: tuple
    seq_parity_positions: tuple
    term_parity_positions: tuple


def bit_accounting(params):
    """Section roles: info, sequential parity (every k-th), termination tail.

    n_seq sections are computed one per sequential stage; the final n_term
    sections are determined jointly by the termination solve. Everything
    else carries information bits.
    """
    k, L, dl = params.k, params.L, params.dl
    n = params.n_cols
    if params.modified:
        n_seq = L - 1
        n_term = 2
    else:
        n_seq = L - ceil((dl - 1) / (k - 1))
        n_term = dl - 1 + ceil((dl - 1) / (k - 1))
    n_info = n - params.n_rows
    seq = tuple(k * i for i in range(1, n_seq + 1))
    term = tuple(range(n - n_term + 1, n + 1))
    taken = set(seq) | set(term)
    info = tuple(c for c in range(1, n + 1) if c not in taken)
    if len(info) != n_info:
        raise ParameterError(
            f"section roles do not partition cleanly for {params}")
    return BitAccounting(n_info=n_info, n_seq=n_seq, n_term=n_term,
                         info_positions=info, seq_parity_positions=seq,
                         term_parity_positions=term)
