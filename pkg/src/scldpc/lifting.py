"""Lifting a base matrix into a full code by per-edge permutations.

Each 1-entry of the base matrix becomes an M x M block. Freshly lifted
codes use one uniformly random permutation per edge, drawn from a stream
seeded by (master seed, attempt, row, band position) so any edge is
reproducible independently of generation order; attempt 0 is the initial
draw, attempts >= 1 are rank-repair redraws.

Termination lives in the bottom-right n_term x n_term block square. For
modified codes the accumulator patch replaces the four blocks of that
square with [[I, S], [I, I]] (S the one-step delay), which makes it
invertible for every M with an O(M) solve. For original codes the square
is singular for EVERY permutation assignment: 1^T P = 1^T for any
permutation matrix, so whenever a set of termination rows has section
supports that cancel mod 2 (at least two rows always cover all the
termination sections, so such sets always exist), the all-ones functional
on those rows is a left null vector no matter what was drawn. Resampling
therefore only shakes the corank down to the structural bound; actual
repair deletes single 1-entries picked from left null vectors, turning a
few permutation blocks into MaskedPermutations, until the square is
invertible. That is the same trick the accumulator patch plays (the delay
block is a cyclic permutation with one output row cleared).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterError, RankRepairError, StateError
from .gf2 import Gf2Matrix, MaskedPermutation, PermutationMap, ShiftBlock, unpack_rows
from .protograph import BaseMatrix, bit_accounting, build_base


@dataclass(frozen=True)
class TermPatch:
    """How the termination square was made solvable."""

    kind: str = "none"  # none | accumulator | rank-repaired
    repair_attempts: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "accumulator", "rank-repaired"):
            raise ParameterError(f"unknown patch kind {self.kind!r}")


@dataclass(eq=False)
class LiftedCode:
    """A lifted code: base matrix, lifting number, per-edge blocks.

    blocks maps (row i, band position j), both 1-based, to a PermutationMap,
    a MaskedPermutation (rank-repaired entries), or a ShiftBlock (only the
    patched accumulator block). Treat instances as immutable; the
    underscored fields cache derived structures.
    """

    base: BaseMatrix
    M: int
    blocks: dict
    seed: int
    patch: TermPatch = field(default_factory=TermPatch)
    _term_cache: object = field(default=None, init=False, repr=False)
    _tanner_cache: object = field(default=None, init=False, repr=False)

    @property
    def params(self):
        return self.base.params

    @property
    def n_bits(self):
        return self.base.cols * self.M

    @property
    def n_checks(self):
        return self.base.rows * self.M

    def block_at(self, i, col):
        """Block at check row i, section col (both 1-based), or None."""
        j = col - i * self.params.k + self.params.dr
        return self.blocks.get((i, j))

    def term_rows(self):
        """1-based check rows of the termination square (the last n_term)."""
        n_term = bit_accounting(self.params).n_term
        return tuple(range(self.base.rows - n_term + 1, self.base.rows + 1))

    def term_cols(self):
        """1-based sections of the termination square (the last n_term)."""
        n_term = bit_accounting(self.params).n_term
        return tuple(range(self.base.cols - n_term + 1, self.base.cols + 1))

    def term_matrix(self):
        """The dense n_term*M square termination block as a Gf2Matrix."""
        rows = self.term_rows()
        cols = self.term_cols()
        n = len(rows) * self.M
        dense = np.zeros((n, n), dtype=np.uint8)
        for bi, i in enumerate(rows):
            for bj, c in enumerate(cols):
                blk = self.block_at(i, c)
                if blk is not None:
                    dense[bi * self.M:(bi + 1) * self.M,
                          bj * self.M:(bj + 1) * self.M] = blk.matrix()
        return Gf2Matrix.from_dense(dense)

    def cleared_entries(self):
        """Deleted 1-entries from rank repair: sorted (row, section, bit row)."""
        k, dr = self.params.k, self.params.dr
        out = []
        for (i, j), blk in self.blocks.items():
            if isinstance(blk, MaskedPermutation):
                c = i * k - dr + j
                out.extend((i, c, r) for r in blk.cleared)
        return sorted(out)

    def to_dense(self):
        """Fully expanded parity-check matrix (desk-scale M only)."""
        out = np.zeros((self.n_checks, self.n_bits), dtype=np.uint8)
        for i in range(1, self.base.rows + 1):
            for j, c in self.base.row_band(i):
                blk = self.blocks[(i, j)]
                out[(i - 1) * self.M:i * self.M,
                    (c - 1) * self.M:c * self.M] = blk.matrix()
        return out


def _edge_perm(seed, attempt, i, j, M):
    ss = np.random.SeedSequence(entropy=(seed, attempt, i, j))
    return PermutationMap.random(M, np.random.default_rng(ss))


def lift(base, M, seed):
    """Draw one random permutation per base edge; deterministic in seed."""
    if M < 1:
        raise ParameterError(f"lifting number M must be >= 1, got {M}")
    seed = int(seed)
    blocks = {}
    for i in range(1, base.rows + 1):
        for j, _ in base.row_band(i):
            blocks[(i, j)] = _edge_perm(seed, 0, i, j, M)
    return LiftedCode(base=base, M=M, blocks=blocks, seed=seed)


def apply_accumulator_patch(code):
    """Replace the modified code's termination square with [[I, S], [I, I]].

    Row L couples section kL-1 through I and section kL through the delay S;
    row L+1 couples both through I. The resulting square is unit lower
    bidiagonal after reduction, hence invertible for every M, and the
    termination solve becomes a 2M-XOR running parity.
    """
    p = code.params
    if not p.modified:
        raise StateError("accumulator patch applies to modified codes only")
    if code.patch.kind != "none":
        raise StateError(f"code already patched ({code.patch.kind})")
    k, dr, L = p.k, p.dr, p.L
    blocks = dict(code.blocks)
    ident = PermutationMap.identity(code.M)
    # (row, band position) of sections kL-1 and kL in rows L and L+1
    blocks[(L, dr - 1)] = ident
    blocks[(L, dr)] = ShiftBlock(code.M)
    blocks[(L + 1, dr - k - 1)] = ident
    blocks[(L + 1, dr - k)] = ident
    return replace(code, blocks=blocks, patch=TermPatch(kind="accumulator"))


def term_corank_bound(base):
    """Structural lower bound on the termination square's corank.

    Permutation blocks satisfy 1^T P = 1^T, so any set of termination rows
    whose section supports inside the termination columns cancel mod 2
    yields a left null vector for every permutation assignment. The bound
    is n_term minus the GF(2) rank of the support-pattern matrix; it
    depends only on (dl, dr, L), never on M or the seed, and it is at
    least 1 for every valid parameter choice (at least two rows cover all
    the termination sections).
    """
    acct = bit_accounting(base.params)
    n_term = acct.n_term
    rows = range(base.rows - n_term + 1, base.rows + 1)
    cols = range(base.cols - n_term + 1, base.cols + 1)
    pattern = np.array([[base.entries[i - 1, c - 1] for c in cols] for i in rows])
    return n_term - Gf2Matrix.from_dense(pattern).rank()


def _clear_entry(blocks, key, row):
    blk = blocks[key]
    if isinstance(blk, MaskedPermutation):
        if row in blk.cleared:
            return None
        return blk.with_cleared(row)
    return MaskedPermutation(blk, (row,))


def repair_term_rank(code, max_attempts=20):
    """Make the termination square invertible: resample, then delete entries.

    Phase 1 redraws the square's permutations with fresh seeds per attempt.
    Resampling alone can never finish the job (see term_corank_bound), so
    it stops once the corank reaches the structural bound or the attempt
    budget runs out, keeping the best draw seen. Phase 2 deletes single
    1-entries, each picked deterministically from a left null vector of the
    current square and kept only when the rank rises, until the square is
    invertible; the touched blocks become MaskedPermutations. Returns the
    code unchanged when the square is somehow already invertible;
    repair_attempts on the result counts only phase-1 redraws.
    """
    p = code.params
    if p.modified:
        raise StateError("rank repair applies to original codes only")
    M = code.M
    n = len(code.term_rows()) * M
    best_rank = code.term_matrix().rank()
    if best_rank == n:
        return code
    term_edges = []
    cols = set(code.term_cols())
    for i in code.term_rows():
        for j, c in code.base.row_band(i):
            if c in cols:
                term_edges.append((i, j))
    bound = term_corank_bound(code.base)
    best_blocks, best_attempt = dict(code.blocks), 0
    attempt = 0
    while n - best_rank > bound and attempt < max_attempts:
        attempt += 1
        blocks = dict(code.blocks)
        for i, j in term_edges:
            blocks[(i, j)] = _edge_perm(code.seed, attempt, i, j, M)
        r = replace(code, blocks=blocks).term_matrix().rank()
        if r > best_rank:
            best_rank, best_blocks, best_attempt = r, blocks, attempt
    blocks = best_blocks
    budget = (n - best_rank) + 8
    cleared = 0
    first_col = min(cols)
    while True:
        square = replace(code, blocks=blocks).term_matrix()
        _, transform, pivots = square._eliminate(Gf2Matrix.identity(n).words)
        rank = len(pivots)
        if rank == n:
            break
        if cleared >= budget:
            raise RankRepairError(
                f"termination square still singular after {cleared} entry "
                f"deletions (rank {rank} of {n}); this should not happen")
        # Deleting entry (r, c) raises the rank exactly when e_r is outside
        # the column space and e_c outside the row space, i.e. when some
        # left null vector is nonzero at r and some right null vector at c.
        # Transform rows beyond the pivot count span the left null space;
        # the transpose gives the right one.
        left_ok = unpack_rows(transform[rank:], n).any(axis=0)
        _, tr_transform, tr_pivots = Gf2Matrix.from_dense(
            square.to_dense().T)._eliminate(Gf2Matrix.identity(n).words)
        right_ok = unpack_rows(tr_transform[len(tr_pivots):], n).any(axis=0)
        accepted = False
        for bi, i in enumerate(code.term_rows()):
            for r_local in np.flatnonzero(left_ok[bi * M:(bi + 1) * M]):
                row = int(r_local) + 1
                for j, c in code.base.row_band(i):
                    if c not in cols:
                        continue
                    blk = blocks[(i, j)]
                    perm = blk.perm if isinstance(blk, MaskedPermutation) else blk
                    if isinstance(blk, MaskedPermutation) and row in blk.cleared:
                        continue
                    inp = int(np.nonzero(perm._img0 == r_local)[0][0])
                    if not right_ok[(c - first_col) * M + inp]:
                        continue
                    trial = dict(blocks)
                    trial[(i, j)] = _clear_entry(blocks, (i, j), row)
                    blocks, cleared, accepted = trial, cleared + 1, True
                    break
                if accepted:
                    break
            if accepted:
                break
        if not accepted:
            raise RankRepairError(
                f"no single-entry deletion raises the termination square "
                f"rank above {rank} of {n}; this should not happen")
    return replace(
        code, blocks=blocks,
        patch=TermPatch(kind="rank-repaired", repair_attempts=best_attempt))


def full_rank_status(code, max_M=64):
    """Rank status of the whole lifted matrix: checked for small M only.

    Returns ("full-rank" | "deficient" | "assumed", rank or None). Before
    repair an original chain is always deficient: its column weights are
    all dl, so row subsets chosen by a parity pattern with period dl cancel
    on every section (a (dl-1)-dimensional forced left null space). Entry
    deletion during repair breaks some or all of those; the accumulator
    patch provably breaks all of them for the modified chain. Design rates
    count all checks as independent either way.
    """
    if code.M > max_M:
        return "assumed", None
    r = Gf2Matrix.from_dense(code.to_dense()).rank()
    return ("full-rank" if r == code.n_checks else "deficient"), r


def make_code(params, M, seed, max_attempts=20):
    """Construct, then patch (modified) or rank-repair (original)."""
    code = lift(build_base(params), M, seed)
    if params.modified:
        return apply_accumulator_patch(code)
    return repair_term_rank(code, max_attempts=max_attempts)
