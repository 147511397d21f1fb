"""Density evolution: reference loop vs compiled kernel, thresholds."""
import numpy as np
import pytest

from scldpc.de import (
    DEState,
    ThresholdResult,
    bp_threshold,
    converges,
    de_step,
    default_threads,
    threshold_rows,
    threshold_table,
    trajectory,
)
from scldpc.errors import ParameterError
from scldpc.protograph import CodeParams, build_base


def first_iteration_below(base, epsilon, target, iters):
    traj = trajectory(base, epsilon, iters)
    hits = np.nonzero(traj.max(axis=1) < target)[0]
    assert hits.size, "did not reach target within the window"
    return int(hits[0])


# ------------------------------------------------------------- dual route

def test_reference_step_matches_kernel_bitwise():
    # the plain-Python recursion and the compiled kernel must agree on
    # every float of every iteration, not just approximately
    for modified in (False, True):
        base = build_base(CodeParams(4, 12, 9, modified=modified))
        eps = 0.35
        traj = trajectory(base, eps, 30)
        state = DEState.initial(base, eps)
        assert np.array_equal(traj[0], state.marginals)
        for it in range(1, 31):
            state = de_step(base, eps, state)
            assert np.array_equal(traj[it], state.marginals), (modified, it)
        assert state.iteration == 30


def test_reference_convergence_count_matches_kernel():
    base = build_base(CodeParams(3, 6, 9))
    eps = 0.30
    ok, iters = converges(base, eps)
    assert ok
    state = DEState.initial(base, eps)
    count = 0
    while state.marginals.max() >= 1e-10:
        state = de_step(base, eps, state)
        count += 1
        assert count <= 1000
    assert count == iters


# ------------------------------------------------------------- fixpoints

def test_epsilon_zero_converges_immediately():
    base = build_base(CodeParams(3, 6, 9))
    ok, iters = converges(base, 0.0)
    assert ok and iters == 1
    state = de_step(base, 0.0, DEState.initial(base, 0.0))
    assert not state.marginals.any()
    assert not state.v2c.any()


def test_epsilon_one_is_an_exact_fixpoint():
    # with every check degree >= 2 the all-ones message state maps to
    # itself, so the run exits on the repeated-state rule at iteration 1
    for modified in (False, True):
        base = build_base(CodeParams(3, 6, 9, modified=modified))
        ok, iters = converges(base, 1.0)
        assert (ok, iters) == (False, 1)
        state = de_step(base, 1.0, DEState.initial(base, 1.0))
        assert (state.v2c == 1.0).all()
        assert (state.c2v == 1.0).all()
        assert (state.marginals == 1.0).all()


def test_marginals_decrease_below_threshold():
    base = build_base(CodeParams(3, 6, 9))
    traj = trajectory(base, 0.45, 50)
    peaks = traj.max(axis=1)
    assert (np.diff(peaks) <= 0).all()
    assert peaks[-1] < peaks[0]


def test_boundary_sections_drain_first():
    # the original chain drains from both ends; the reduced-row chain has
    # a weakened right end, so only the left boundary leads there, which
    # is exactly why it converges slower
    orig = trajectory(build_base(CodeParams(3, 6, 9)), 0.45, 8)
    mid = 9
    assert orig[5, 0] < orig[5, mid]
    assert orig[5, -1] < orig[5, mid]
    mod = trajectory(build_base(CodeParams(3, 6, 9, modified=True)), 0.45, 8)
    assert mod[5, 0] < mod[5, mid]
    assert mod[5, -1] > mod[5, 0]


def test_epsilon_validation():
    base = build_base(CodeParams(3, 6, 9))
    state = DEState.initial(base, 0.5)
    with pytest.raises(ParameterError):
        de_step(base, 1.2, state)
    with pytest.raises(ParameterError):
        converges(base, -0.5)
    with pytest.raises(ParameterError):
        trajectory(base, 2.0, 5)
    with pytest.raises(ParameterError):
        bp_threshold(base, bisection_tol=0.0)


# ------------------------------------------------------------- thresholds

def test_threshold_bracket_invariants():
    base = build_base(CodeParams(3, 6, 9))
    res = bp_threshold(base)
    lo, hi = res.bracket
    assert hi - lo <= 1e-6 * (1 + 1e-9)
    assert lo <= res.epsilon_star <= hi
    assert converges(base, lo)[0]
    assert not converges(base, hi)[0]
    assert res.de_params["bisection_tol"] == 1e-6


def test_threshold_values_L9():
    # pinned outputs of the deterministic bisection at L = 9
    cases = [
        (CodeParams(3, 6, 9), 0.512034),
        (CodeParams(3, 6, 9, modified=True), 0.491743),
        (CodeParams(4, 12, 9), 0.343235),
        (CodeParams(4, 12, 9, modified=True), 0.330969),
    ]
    for params, expect in cases:
        res = bp_threshold(build_base(params))
        assert abs(res.epsilon_star - expect) < 2e-6, params


def test_threshold_coarse_tolerance_is_faster_but_consistent():
    base = build_base(CodeParams(3, 6, 9))
    coarse = bp_threshold(base, bisection_tol=1e-3)
    fine = bp_threshold(base)
    assert abs(coarse.epsilon_star - fine.epsilon_star) <= 1e-3


def test_threshold_table_matches_serial():
    cells = [(3, 6, 9, False), (3, 6, 9, True)]
    table = threshold_table(cells, threads=2)
    for (params, res), cell in zip(table, cells):
        assert params == CodeParams(*cell)
        direct = bp_threshold(build_base(params))
        assert res.epsilon_star == direct.epsilon_star
        assert isinstance(res, ThresholdResult)
    rows = threshold_rows(table)
    assert rows[0]["variant"] == "original"
    assert rows[1]["variant"] == "modified"
    assert set(rows[0]) == {"dl", "dr", "L", "variant", "threshold", "rate"}


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv("SCC_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("SCC_THREADS", "zero")
    with pytest.raises(ParameterError):
        default_threads()
    monkeypatch.setenv("SCC_THREADS", "0")
    with pytest.raises(ParameterError):
        default_threads()
    monkeypatch.delenv("SCC_THREADS")
    assert default_threads() >= 1


# ------------------------------------------------------------ trajectories

def test_trajectory_shape_and_start():
    base = build_base(CodeParams(3, 6, 9))
    traj = trajectory(base, 0.37, 12)
    assert traj.shape == (13, 18)
    assert (traj[0] == 0.37).all()


def test_trajectory_iteration_counts_4_12_9():
    # pinned first iterations with max marginal below 1e-6 at eps = 0.3;
    # the reduced-row chain converges strictly slower
    orig = build_base(CodeParams(4, 12, 9))
    mod = build_base(CodeParams(4, 12, 9, modified=True))
    it_orig = first_iteration_below(orig, 0.3, 1e-6, 60)
    it_mod = first_iteration_below(mod, 0.3, 1e-6, 60)
    assert it_orig == 12
    assert it_mod == 39
    assert it_mod > it_orig
    assert first_iteration_below(orig, 0.3, 1e-10, 60) == 13
    assert first_iteration_below(mod, 0.3, 1e-10, 60) == 48
