"""Erasure channel, peeling decoder, Monte Carlo harness."""
import json

import numpy as np
import pytest

from scldpc.channel import ReceivedWord, _wilson, decode, run_monte_carlo, transmit
from scldpc.encoder import Codeword, encode
from scldpc.errors import DimensionError, ParameterError
from scldpc.lifting import make_code
from scldpc.protograph import CodeParams, bit_accounting


def encoded_word(code, seed):
    acct = bit_accounting(code.params)
    rng = np.random.default_rng(seed)
    info = rng.integers(0, 2, acct.n_info * code.M, dtype=np.uint8)
    return encode(code, info)


# ---------------------------------------------------------------- channel

def test_transmit_extremes():
    code = make_code(CodeParams(3, 6, 9, modified=True), M=4, seed=0)
    cw = encoded_word(code, 1)
    clean = transmit(cw, 0.0, seed=5)
    assert not clean.erased.any()
    assert np.array_equal(clean.values, cw.sections)
    wiped = transmit(cw, 1.0, seed=5)
    assert wiped.erased.all()
    assert not wiped.values.any()


def test_transmit_keeps_unerased_values():
    code = make_code(CodeParams(3, 6, 9, modified=True), M=8, seed=0)
    cw = encoded_word(code, 2)
    rw = transmit(cw, 0.4, seed=9)
    assert np.array_equal(rw.values[~rw.erased], cw.sections[~rw.erased])
    assert not rw.values[rw.erased].any()


def test_transmit_erasure_fraction_concentrates():
    bits = Codeword(sections=np.zeros((100, 1000), dtype=np.uint8))
    rw = transmit(bits, 0.3, seed=77)
    assert abs(rw.erased.mean() - 0.3) < 0.01


def test_transmit_validates_epsilon():
    cw = Codeword(sections=np.zeros((2, 2), dtype=np.uint8))
    with pytest.raises(ParameterError):
        transmit(cw, -0.1, seed=0)
    with pytest.raises(ParameterError):
        transmit(cw, 1.5, seed=0)


# ---------------------------------------------------------------- decoder

def test_decode_nothing_erased():
    code = make_code(CodeParams(3, 6, 9), M=4, seed=3)
    cw = encoded_word(code, 0)
    res = decode(code, transmit(cw, 0.0, seed=1))
    assert res.status == "success"
    assert res.iterations_used == 0
    assert res.resolved_word == cw


def test_decode_single_erasure_one_iteration():
    code = make_code(CodeParams(3, 6, 9), M=2, seed=3)
    cw = encoded_word(code, 4)
    for section in (1, 5, 18):
        erased = np.zeros((18, 2), dtype=bool)
        erased[section - 1, 0] = True
        values = cw.sections.copy()
        values[erased] = 0
        rw = ReceivedWord(values=values, erased=erased, epsilon=0.0,
                          channel_seed=0)
        res = decode(code, rw)
        assert res.status == "success"
        assert res.iterations_used == 1
        assert res.resolved_word == cw


def test_decode_recovers_transmitted_word_below_threshold():
    code = make_code(CodeParams(3, 6, 9), M=64, seed=5)
    for seed in (0, 1, 2):
        cw = encoded_word(code, seed)
        res = decode(code, transmit(cw, 0.3, seed=seed + 10))
        assert res.status == "success"
        assert res.resolved_word == cw
        assert not res.per_section_erasures.any()


def test_decode_stalls_when_everything_is_erased():
    # minimum check degree is 2, so no check ever sees exactly one erasure
    code = make_code(CodeParams(3, 6, 3, modified=True), M=1, seed=0)
    rw = ReceivedWord(values=np.zeros((6, 1), dtype=np.uint8),
                      erased=np.ones((6, 1), dtype=bool),
                      epsilon=1.0, channel_seed=0)
    res = decode(code, rw)
    assert res.status == "stalled"
    assert res.iterations_used == 0
    assert res.resolved_word is None
    assert res.per_section_erasures.sum() == 6


def test_decode_never_adds_erasures():
    code = make_code(CodeParams(3, 6, 9), M=16, seed=7)
    cw = encoded_word(code, 3)
    rw = transmit(cw, 0.55, seed=21)
    res = decode(code, rw)
    start = rw.erased.sum(axis=1)
    assert (res.per_section_erasures <= start).all()


def test_decode_respects_iteration_cap():
    code = make_code(CodeParams(3, 6, 9), M=16, seed=7)
    cw = encoded_word(code, 3)
    rw = transmit(cw, 0.45, seed=2)
    full = decode(code, rw)
    if full.iterations_used > 1:
        capped = decode(code, rw, max_iter=1)
        assert capped.iterations_used == 1
        assert capped.per_section_erasures.sum() >= full.per_section_erasures.sum()


def test_decode_shape_guard():
    code = make_code(CodeParams(3, 6, 9), M=2, seed=1)
    rw = ReceivedWord(values=np.zeros((18, 3), dtype=np.uint8),
                      erased=np.zeros((18, 3), dtype=bool),
                      epsilon=0.1, channel_seed=0)
    with pytest.raises(DimensionError):
        decode(code, rw)


# ------------------------------------------------------------ Monte Carlo

def test_monte_carlo_no_noise():
    code = make_code(CodeParams(3, 6, 9, modified=True), M=8, seed=1)
    report = run_monte_carlo(code, 0.0, trials=5, seed=3)
    assert report.fer == 0.0
    assert report.ber == 0.0
    assert report.frames_failed == 0
    assert report.ci[0] == 0.0


def test_monte_carlo_below_threshold_regression():
    code = make_code(CodeParams(3, 6, 9), M=256, seed=11)
    report = run_monte_carlo(code, 0.40, trials=200, seed=17)
    assert report.fer < 0.1
    assert report.ber < 1e-2


def test_monte_carlo_above_threshold_fails():
    code = make_code(CodeParams(3, 6, 9), M=64, seed=11)
    report = run_monte_carlo(code, 0.60, trials=30, seed=17)
    assert report.fer > 0.9
    assert report.ber > 1e-1


def test_monte_carlo_is_seeded():
    code = make_code(CodeParams(3, 6, 9, modified=True), M=16, seed=2)
    a = run_monte_carlo(code, 0.35, trials=20, seed=5)
    b = run_monte_carlo(code, 0.35, trials=20, seed=5)
    assert a.to_dict() == b.to_dict()
    with pytest.raises(ParameterError):
        run_monte_carlo(code, 0.35, trials=0, seed=5)


def test_report_round_trips_through_json():
    code = make_code(CodeParams(3, 6, 9, modified=True), M=4, seed=2)
    report = run_monte_carlo(code, 0.2, trials=10, seed=1)
    doc = json.loads(json.dumps(report.to_dict()))
    assert doc["trials"] == 10
    assert doc["M"] == 4
    assert set(doc) == {"params", "M", "epsilon", "trials", "seed", "fer",
                        "ber", "ci", "per_section_ber", "frames_failed"}
    assert len(doc["per_section_ber"]) == 18
    assert 0.0 <= doc["ci"][0] <= doc["ci"][1] <= 1.0


def test_wilson_interval_hand_value():
    lo, hi = _wilson(5, 10)
    assert round(lo, 4) == 0.2366
    assert round(hi, 4) == 0.7634
    assert _wilson(0, 0) == (0.0, 1.0)
    lo0, hi0 = _wilson(0, 50)
    assert lo0 < 1e-12 and 0.0 < hi0 < 0.1
