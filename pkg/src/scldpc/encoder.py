"""Encoding: sequential parity stages plus a termination stage.

Sequential stage i places the k-1 information sections before section ik
and then fixes x_{ik} by inverting the single new permutation on check row
i. Syndromes are kept incrementally: placing a section immediately XORs
its contribution into every check row touching it, so each stage is O(M)
and the termination-stage syndromes are already available when the last
stage finishes.

Termination determines the final n_term sections at once. Original codes
solve the dense termination square (cached inverse; O(M^2) bit operations
per codeword). Patched modified codes run the 2M-XOR accumulator
recursion: x_{kL-1,i} = x_{kL,i-1} ^ s_{L,i} and x_{kL,i} = x_{kL-1,i} ^
s_{L+1,i}, with x_{kL,0} = 0 supplied by the delay block's empty first row.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, StateError, TerminationError
from .gf2 import SingularMatrixError
from .protograph import bit_accounting


@dataclass
class OpCounter:
    """Counts XOR bit-accumulations performed by termination routines."""

    xor_ops: int = 0

    def add(self, n):
        self.xor_ops += int(n)


@dataclass(eq=False)
class Codeword:
    """kL sections of M bits each."""

    sections: np.ndarray  # (kL, M) uint8

    def section(self, j):
        """1-based section accessor."""
        return self.sections[j - 1]

    @property
    def bits(self):
        return self.sections.reshape(-1)

    def __eq__(self, other):
        if not isinstance(other, Codeword):
            return NotImplemented
        return np.array_equal(self.sections, other.sections)


@dataclass(eq=False)
class EncoderState:
    """Partially determined codeword plus incremental syndromes."""

    code: object
    stage: int = 1  # next sequential stage
    sections: np.ndarray = None
    determined: np.ndarray = None
    syndromes: np.ndarray = None  # (n_rows, M)
    _acct: object = field(default=None, repr=False)

    @classmethod
    def fresh(cls, code):
        base = code.base
        return cls(code=code,
                   sections=np.zeros((base.cols, code.M), dtype=np.uint8),
                   determined=np.zeros(base.cols, dtype=bool),
                   syndromes=np.zeros((base.rows, code.M), dtype=np.uint8),
                   _acct=bit_accounting(code.params))

    def place(self, col, value):
        """Fix section col and fold it into every touching check row."""
        if self.determined[col - 1]:
            raise StateError(f"section {col} already determined")
        value = np.asarray(value, dtype=np.uint8)
        if value.shape != (self.code.M,):
            raise DimensionError(f"section value must have length {self.code.M}")
        self.sections[col - 1] = value
        self.determined[col - 1] = True
        for i in self.code.base.col_support(col):
            blk = self.code.block_at(i, col)
            self.syndromes[i - 1] ^= blk.apply(value)


def sequential_step(state, i, info_chunk):
    """Run sequential stage i: place k-1 info sections, return parity x_{ik}.

    info_chunk holds the k-1 sections for positions (i-1)k+1 .. ik-1 in
    order. The parity is the permutation inverse of check row i's current
    syndrome, which at this point has absorbed every determined section.
    """
    code = state.code
    p = code.params
    if i != state.stage:
        raise StateError(f"stage {i} out of order; next stage is {state.stage}")
    if i > state._acct.n_seq:
        raise StateError(f"stage {i} beyond the {state._acct.n_seq} sequential stages")
    chunk = np.asarray(info_chunk, dtype=np.uint8)
    if chunk.shape != (p.k - 1, code.M):
        raise DimensionError(f"info chunk must be ({p.k - 1}, {code.M})")
    for t, col in enumerate(range((i - 1) * p.k + 1, i * p.k)):
        state.place(col, chunk[t])
    parity = code.block_at(i, i * p.k).apply_inverse(state.syndromes[i - 1])
    state.place(i * p.k, parity)
    state.stage += 1
    return parity


class _TermSolver:
    """Cached dense solver for the original code's termination square."""

    def __init__(self, code):
        ht = code.term_matrix()
        try:
            self.inverse = ht.inverse()
        except SingularMatrixError as exc:
            raise TerminationError(
                f"termination block is singular ({exc}); run repair_term_rank "
                f"or use the modified construction") from exc
        # One XOR accumulation per 1-entry of the inverse per solve.
        self.ops_per_solve = self.inverse.popcount()

    def solve(self, syndrome):
        return self.inverse.matvec(syndrome)


def _term_solver(code):
    if code._term_cache is None:
        code._term_cache = _TermSolver(code)
    return code._term_cache


def terminate_generic(code, state, counter=None):
    """Solve the dense termination square; returns (n_term, M) sections."""
    if code.params.modified:
        raise StateError("generic termination is the original codes' path")
    acct = state._acct
    rows = code.term_rows()
    s = np.concatenate([state.syndromes[i - 1] for i in rows])
    solver = _term_solver(code)
    x = solver.solve(s)
    if counter is not None:
        counter.add(solver.ops_per_solve)
    return x.reshape(acct.n_term, code.M)


def terminate_accumulator(s_l, s_l1, counter=None):
    """Accumulator recursion: exactly 2M XORs for the last two sections."""
    s_l = np.asarray(s_l, dtype=np.uint8)
    s_l1 = np.asarray(s_l1, dtype=np.uint8)
    if s_l.shape != s_l1.shape or s_l.ndim != 1:
        raise DimensionError("syndromes must be equal-length vectors")
    M = s_l.shape[0]
    a = s_l.tolist()
    b = s_l1.tolist()
    x1 = [0] * M
    x2 = [0] * M
    prev = 0
    for i in range(M):
        x1[i] = prev ^ a[i]
        x2[i] = x1[i] ^ b[i]
        prev = x2[i]
    if counter is not None:
        counter.add(2 * M)
    return (np.array(x1, dtype=np.uint8), np.array(x2, dtype=np.uint8))


def encode(code, info, counter=None):
    """Encode n_info*M information bits into a codeword.

    Original codes need a full-rank termination square (fresh full-rank
    draw or rank-repaired); modified codes must carry the accumulator
    patch.
    """
    p = code.params
    acct = bit_accounting(p)
    info = np.asarray(info, dtype=np.uint8).reshape(-1)
    if info.shape != (acct.n_info * code.M,):
        raise DimensionError(
            f"expected {acct.n_info * code.M} info bits, got {info.size}")
    if p.modified and code.patch.kind != "accumulator":
        raise StateError("modified code lacks the accumulator patch")
    info = info.reshape(acct.n_info, code.M)
    state = EncoderState.fresh(code)
    pos = 0
    for i in range(1, acct.n_seq + 1):
        sequential_step(state, i, info[pos:pos + p.k - 1])
        pos += p.k - 1
    for col in acct.info_positions:
        if col > acct.n_seq * p.k:
            state.place(col, info[pos])
            pos += 1
    assert pos == acct.n_info
    if p.modified:
        x1, x2 = terminate_accumulator(
            state.syndromes[p.L - 1], state.syndromes[p.L], counter)
        state.place(p.n_cols - 1, x1)
        state.place(p.n_cols, x2)
    else:
        tail = terminate_generic(code, state, counter)
        for t, col in enumerate(acct.term_parity_positions):
            state.place(col, tail[t])
    # every check row absorbed all of its sections; zero syndromes == valid
    assert not state.syndromes.any()
    return Codeword(sections=state.sections)


def verify_codeword(code, cw):
    """True iff every lifted check equation holds."""
    sections = cw.sections if isinstance(cw, Codeword) else np.asarray(cw, dtype=np.uint8)
    if sections.shape != (code.base.cols, code.M):
        raise DimensionError(
            f"codeword must be ({code.base.cols}, {code.M}), got {sections.shape}")
    for i in range(1, code.base.rows + 1):
        acc = np.zeros(code.M, dtype=np.uint8)
        for _, c in code.base.row_band(i):
            acc ^= code.block_at(i, c).apply(sections[c - 1])
        if acc.any():
            return False
    return True
