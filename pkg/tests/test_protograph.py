"""Base matrices, design rates, and section bookkeeping."""
from fractions import Fraction

import numpy as np
import pytest

from scldpc.errors import ParameterError
from scldpc.protograph import (
    BitAccounting,
    CodeParams,
    build_base,
    bit_accounting,
    design_rate,
    rate_string,
)


def dense_from_spans(spans, cols):
    """Rows given as 1-based (first, last) column spans."""
    out = np.zeros((len(spans), cols), dtype=np.uint8)
    for r, (lo, hi) in enumerate(spans):
        out[r, lo - 1:hi] = 1
    return out


# ------------------------------------------------------------- parameters

def test_params_validation():
    with pytest.raises(ParameterError):
        CodeParams(dl=1, dr=2, L=5)
    with pytest.raises(ParameterError):
        CodeParams(dl=3, dr=7, L=9)
    with pytest.raises(ParameterError):
        CodeParams(dl=3, dr=3, L=9)  # k = 1
    with pytest.raises(ParameterError):
        CodeParams(dl=3, dr=6, L=2)  # L < dl


def test_params_shapes():
    p = CodeParams(3, 6, 9)
    assert (p.k, p.n_rows, p.n_cols) == (2, 11, 18)
    assert CodeParams(3, 6, 9, modified=True).n_rows == 10
    q = CodeParams(4, 12, 9)
    assert (q.k, q.n_rows, q.n_cols) == (3, 12, 27)
    assert CodeParams(4, 12, 9, modified=True).n_rows == 10


# ------------------------------------------------------------ base matrix

def test_modified_4_12_9_golden():
    # hand-expanded 10x27 instance: four growing head rows, five full
    # sliding rows of width 12, one truncated tail row
    spans = [(1, 3), (1, 6), (1, 9), (1, 12), (4, 15), (7, 18),
             (10, 21), (13, 24), (16, 27), (19, 27)]
    base = build_base(CodeParams(4, 12, 9, modified=True))
    assert np.array_equal(base.entries, dense_from_spans(spans, 27))


def test_original_4_12_9_golden():
    # same head and band, plus two more tail rows; all column weights dl
    spans = [(1, 3), (1, 6), (1, 9), (1, 12), (4, 15), (7, 18),
             (10, 21), (13, 24), (16, 27), (19, 27), (22, 27), (25, 27)]
    base = build_base(CodeParams(4, 12, 9))
    assert np.array_equal(base.entries, dense_from_spans(spans, 27))
    assert np.array_equal(base.entries.sum(axis=0), np.full(27, 4))


def test_original_3_6_3_golden():
    spans = [(1, 2), (1, 4), (1, 6), (3, 6), (5, 6)]
    base = build_base(CodeParams(3, 6, 3))
    assert np.array_equal(base.entries, dense_from_spans(spans, 6))
    assert np.array_equal(base.entries.sum(axis=0), np.full(6, 3))


def test_original_column_weights_always_dl():
    for dl, dr in ((3, 6), (4, 8), (3, 9), (4, 12), (5, 10)):
        for L in (dl, dl + 3, 17):
            base = build_base(CodeParams(dl, dr, L))
            assert np.array_equal(base.entries.sum(axis=0),
                                  np.full(base.cols, dl)), (dl, dr, L)


def test_modified_drops_bottom_rows():
    orig = build_base(CodeParams(4, 8, 9))
    mod = build_base(CodeParams(4, 8, 9, modified=True))
    assert np.array_equal(mod.entries, orig.entries[:mod.rows])


def test_row_band_and_supports():
    base = build_base(CodeParams(3, 6, 9))
    # row 5 of the (3,6,9) chain spans columns 5..10
    assert base.row_support(5) == tuple(range(5, 11))
    assert base.row_band(5) == [(j, 2 * 5 - 6 + j) for j in range(1, 7)]
    assert base.col_support(1) == (1, 2, 3)
    assert base.col_support(18) == (9, 10, 11)
    for i in range(1, base.rows + 1):
        assert np.array_equal(
            np.nonzero(base.entries[i - 1])[0] + 1, base.row_support(i))


def test_support_range_checks():
    base = build_base(CodeParams(3, 6, 9))
    with pytest.raises(ParameterError):
        base.row_band(0)
    with pytest.raises(ParameterError):
        base.row_band(12)
    with pytest.raises(ParameterError):
        base.col_support(19)


def test_base_equality():
    a = build_base(CodeParams(3, 6, 9))
    assert a == build_base(CodeParams(3, 6, 9))
    assert a != build_base(CodeParams(3, 6, 9, modified=True))


# ------------------------------------------------------------------ rates

def test_design_rate_exact_fractions():
    assert design_rate(CodeParams(3, 6, 9)) == Fraction(7, 18)
    assert design_rate(CodeParams(3, 6, 9, modified=True)) == Fraction(4, 9)
    assert design_rate(CodeParams(4, 12, 9)) == Fraction(5, 9)
    assert design_rate(CodeParams(4, 12, 9, modified=True)) == Fraction(17, 27)


def test_rate_string_rounding():
    assert rate_string(CodeParams(3, 6, 9)) == "0.38889"
    assert rate_string(CodeParams(3, 6, 9, modified=True)) == "0.44444"
    assert rate_string(CodeParams(3, 6, 17)) == "0.44118"
    assert rate_string(CodeParams(4, 8, 17)) == "0.41176"
    assert rate_string(CodeParams(4, 12, 65, modified=True)) == "0.66154"


# every rate the library prints for the standard parameter grid, from the
# closed forms (k-1)/k - (dl-1)/(kL) and (k-1)/k - 1/(kL)
RATE_GRID = {
    (3, 6): {9: ("0.38889", "0.44444"), 17: ("0.44118", "0.47059"),
             33: ("0.46970", "0.48485"), 65: ("0.48462", "0.49231")},
    (4, 8): {9: ("0.33333", "0.44444"), 17: ("0.41176", "0.47059"),
             33: ("0.45455", "0.48485"), 65: ("0.47692", "0.49231")},
    (3, 9): {9: ("0.59259", "0.62963"), 17: ("0.62745", "0.64706"),
             33: ("0.64646", "0.65657"), 65: ("0.65641", "0.66154")},
    (4, 12): {9: ("0.55556", "0.62963"), 17: ("0.60784", "0.64706"),
              33: ("0.63636", "0.65657"), 65: ("0.65128", "0.66154")},
}


def test_rate_grid():
    for (dl, dr), per_l in RATE_GRID.items():
        for L, (orig, mod) in per_l.items():
            assert rate_string(CodeParams(dl, dr, L)) == orig, (dl, dr, L)
            assert rate_string(CodeParams(dl, dr, L, modified=True)) == mod


def test_rate_approaches_limit():
    limit = Fraction(1, 2)
    prev = Fraction(0)
    for L in (3, 9, 33, 129, 513):
        r = design_rate(CodeParams(3, 6, L))
        assert prev < r < limit
        prev = r
    assert limit - design_rate(CodeParams(3, 6, 9, modified=True)) == \
        Fraction(1, 18)


# --------------------------------------------------------- bit accounting

def test_bit_accounting_4_12_9():
    acct = bit_accounting(CodeParams(4, 12, 9))
    assert (acct.n_info, acct.n_seq, acct.n_term) == (15, 7, 5)
    assert acct.seq_parity_positions == (3, 6, 9, 12, 15, 18, 21)
    assert acct.term_parity_positions == (23, 24, 25, 26, 27)
    mod = bit_accounting(CodeParams(4, 12, 9, modified=True))
    assert (mod.n_info, mod.n_seq, mod.n_term) == (17, 8, 2)
    assert mod.term_parity_positions == (26, 27)
    assert 25 in mod.info_positions


def test_bit_accounting_partitions():
    for dl, dr in ((3, 6), (4, 8), (3, 9), (4, 12)):
        for L in (9, 17):
            for modified in (False, True):
                p = CodeParams(dl, dr, L, modified=modified)
                acct = bit_accounting(p)
                groups = (set(acct.info_positions),
                          set(acct.seq_parity_positions),
                          set(acct.term_parity_positions))
                assert sum(len(g) for g in groups) == p.n_cols
                assert set.union(*groups) == set(range(1, p.n_cols + 1))
                assert len(acct.info_positions) == acct.n_info
                assert acct.n_info == p.n_cols - p.n_rows
                if modified:
                    assert acct.n_term == 2
                    assert acct.n_seq == L - 1


def test_bit_accounting_is_a_dataclass_snapshot():
    acct = bit_accounting(CodeParams(3, 6, 9))
    assert isinstance(acct, BitAccounting)
    assert (acct.n_info, acct.n_seq, acct.n_term) == (7, 7, 4)
