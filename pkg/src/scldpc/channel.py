"""Erasure channel, peeling decoder, and Monte Carlo harness.

Decoding is synchronous peeling on the expanded Tanner graph: in each
sweep, every check with exactly one erased neighbour resolves it to the
XOR of its known neighbours. On the erasure channel this reaches the same
fixpoint as message-passing, in any processing order, so one sweep here
corresponds to one message-passing iteration.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .encoder import Codeword, verify_codeword
from .errors import DimensionError, ParameterError
from .gf2 import MaskedPermutation, PermutationMap


def _tanner(code):
    """CSR adjacency (check -> bit) of the expanded matrix; cached."""
    if code._tanner_cache is not None:
        return code._tanner_cache
    M = code.M
    chk_parts = []
    bit_parts = []
    for i in range(1, code.base.rows + 1):
        for j, c in code.base.row_band(i):
            blk = code.blocks[(i, j)]
            if isinstance(blk, PermutationMap):
                rows = np.asarray(blk.image, dtype=np.int64) - 1
                cols = np.arange(M, dtype=np.int64)
            elif isinstance(blk, MaskedPermutation):
                rows = np.asarray(blk.perm.image, dtype=np.int64) - 1
                cols = np.arange(M, dtype=np.int64)
                keep = ~np.isin(rows, np.asarray(blk.cleared) - 1)
                rows, cols = rows[keep], cols[keep]
            else:  # delay block: check row r wired to bit r-1 of the section
                rows = np.arange(1, M, dtype=np.int64)
                cols = np.arange(M - 1, dtype=np.int64)
            chk_parts.append((i - 1) * M + rows)
            bit_parts.append((c - 1) * M + cols)
    chk = np.concatenate(chk_parts)
    bit = np.concatenate(bit_parts)
    order = np.argsort(chk, kind="stable")
    chk_bit = bit[order]
    counts = np.bincount(chk, minlength=code.n_checks)
    ptr = np.zeros(code.n_checks + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    code._tanner_cache = (ptr, chk_bit)
    return code._tanner_cache


@dataclass(eq=False)
class ReceivedWord:
    """Channel output: bit values with an erasure mask."""

    values: np.ndarray  # (kL, M) uint8, 0 where erased
    erased: np.ndarray  # (kL, M) bool
    epsilon: float
    channel_seed: int


def transmit(cw, epsilon, seed):
    """Erase each bit independently with probability epsilon."""
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"epsilon must be in [0, 1], got {epsilon}")
    sections = cw.sections if isinstance(cw, Codeword) else np.asarray(cw, dtype=np.uint8)
    rng = np.random.default_rng(seed)
    erased = rng.random(sections.shape) < epsilon
    values = sections.copy()
    values[erased] = 0
    return ReceivedWord(values=values, erased=erased, epsilon=epsilon,
                        channel_seed=int(seed))


@dataclass(eq=False)
class DecodeResult:
    status: str  # success | stalled
    iterations_used: int
    per_section_erasures: np.ndarray  # (kL,) unresolved erasures per section
    resolved_word: Codeword | None = None


def decode(code, rw, max_iter=None):
    """Peel until every erasure is resolved or no check can act."""
    shape = (code.base.cols, code.M)
    if rw.values.shape != shape or rw.erased.shape != shape:
        raise DimensionError(f"received word must have shape {shape}")
    ptr, chk_bit = _tanner(code)
    val = rw.values.reshape(-1).astype(np.uint8)
    val[rw.erased.reshape(-1)] = 0
    erased = rw.erased.reshape(-1).copy()
    it = 0
    while erased.any() and (max_iter is None or it < max_iter):
        e_on_edge = erased[chk_bit].astype(np.int64)
        n_erased = np.add.reduceat(e_on_edge, ptr[:-1])
        ready = n_erased == 1
        if not ready.any():
            break
        target = np.add.reduceat(np.where(e_on_edge, chk_bit, 0), ptr[:-1])[ready]
        parity = (np.add.reduceat(val[chk_bit], ptr[:-1]) & 1)[ready]
        # duplicate targets agree: each ready check recovers the same bit
        val[target] = parity
        erased[target] = False
        it += 1
    ok = not erased.any()
    per_section = erased.reshape(shape).sum(axis=1)
    word = Codeword(sections=val.reshape(shape)) if ok else None
    if word is not None and not verify_codeword(code, word):
        raise AssertionError("peeling produced an invalid word")
    return DecodeResult(status="success" if ok else "stalled",
                        iterations_used=it,
                        per_section_erasures=per_section,
                        resolved_word=word)


def _wilson(successes, n, z=1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if n == 0:
        return (0.0, 1.0)
    phat = successes / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(eq=False)
class SimReport:
    """Aggregated Monte Carlo results for one (code, epsilon) point."""

    params: dict
    M: int
    epsilon: float
    trials: int
    seed: int
    fer: float
    ber: float
    ci: tuple  # 95% Wilson interval for the frame error rate
    per_section_ber: list
    frames_failed: int

    def to_dict(self):
        return {
            "params": self.params,
            "M": self.M,
            "epsilon": self.epsilon,
            "trials": self.trials,
            "seed": self.seed,
            "fer": self.fer,
            "ber": self.ber,
            "ci": list(self.ci),
            "per_section_ber": self.per_section_ber,
            "frames_failed": self.frames_failed,
        }


def run_monte_carlo(code, epsilon, trials, seed):
    """Frame/bit erasure rates over independent trials.

    Transmits the all-zero codeword: the channel erases independently of
    bit values and peeling progress depends only on the erasure pattern,
    so by linearity the error statistics are those of any codeword.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    p = code.params
    zero = Codeword(sections=np.zeros((code.base.cols, code.M), dtype=np.uint8))
    root = np.random.SeedSequence(seed)
    failed = 0
    residual_bits = 0
    per_section = np.zeros(code.base.cols, dtype=np.int64)
    for child in root.spawn(trials):
        rng = np.random.default_rng(child)
        erased = rng.random((code.base.cols, code.M)) < epsilon
        rw = ReceivedWord(values=zero.sections.copy(), erased=erased,
                          epsilon=epsilon, channel_seed=int(seed))
        res = decode(code, rw)
        if res.status != "success":
            failed += 1
        residual_bits += int(res.per_section_erasures.sum())
        per_section += res.per_section_erasures
    n_bits = code.n_bits * trials
    report = SimReport(
        params={"dl": p.dl, "dr": p.dr, "L": p.L, "modified": p.modified},
        M=code.M, epsilon=epsilon, trials=trials, seed=int(seed),
        fer=failed / trials,
        ber=residual_bits / n_bits,
        ci=_wilson(failed, trials),
        per_section_ber=(per_section / (trials * code.M)).tolist(),
        frames_failed=failed)
    return report
