"""Protograph density evolution on the erasure channel.

Tracks one erasure probability per directed protograph edge in the
infinite-lifting limit. One iteration, with epsilon the channel erasure
rate:

    v2c(v->c) = eps * prod_{c' in N(v), c' != c} c2v(c'->v)
    c2v(c->v) = 1 - prod_{v' in N(c), v' != v} (1 - v2c(v'->c))
    p(v)      = eps * prod_{c in N(v)} c2v(c->v)

starting from c2v = 1 (everything erased) and p^(0) = eps. A parameter
point converges when max_v p(v) drops below a target within an iteration
budget; the belief-propagation threshold is the bisection boundary of
convergence in epsilon.

Two interchangeable implementations: a plain-Python reference (de_step)
and a numba kernel with the same loop structure and float semantics, used
for trajectories and threshold searches. Both exit early on success and
when the message state repeats exactly (a float fixpoint stays fixed, so
that exit equals running out the iteration budget).

Edges are enumerated row-major over the base matrix, so message vectors
index identically everywhere.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ParameterError
from .protograph import CodeParams, build_base, design_rate

DE_TARGET = 1e-10
DE_MAX_ITER = 200_000
BISECTION_TOL = 1e-6


def _graph(base):
    """Flat edge arrays: row-major edge list plus per-variable gather lists."""
    rows = []
    cols = []
    for i in range(1, base.rows + 1):
        for _, c in base.row_band(i):
            rows.append(i - 1)
            cols.append(c - 1)
    edge_chk = np.array(rows, dtype=np.int64)
    edge_var = np.array(cols, dtype=np.int64)
    chk_ptr = np.zeros(base.rows + 1, dtype=np.int64)
    np.cumsum(np.bincount(edge_chk, minlength=base.rows), out=chk_ptr[1:])
    order = np.argsort(edge_var, kind="stable")
    var_eid = order.astype(np.int64)
    var_ptr = np.zeros(base.cols + 1, dtype=np.int64)
    np.cumsum(np.bincount(edge_var, minlength=base.cols), out=var_ptr[1:])
    return edge_var, edge_chk, chk_ptr, var_ptr, var_eid


@dataclass(eq=False)
class DEState:
    """Per-edge messages and per-variable marginals at iteration ell."""

    v2c: np.ndarray
    c2v: np.ndarray
    marginals: np.ndarray
    iteration: int = 0

    @classmethod
    def initial(cls, base, epsilon):
        n_edges = int(base.entries.sum())
        return cls(v2c=np.full(n_edges, epsilon),
                   c2v=np.ones(n_edges),
                   marginals=np.full(base.cols, epsilon),
                   iteration=0)


def de_step(base, epsilon, state):
    """One synchronous iteration; plain reference implementation."""
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"epsilon must be in [0, 1], got {epsilon}")
    _, _, chk_ptr, var_ptr, var_eid = _graph(base)
    v2c = np.empty_like(state.v2c)
    c2v = np.empty_like(state.c2v)
    p = np.empty_like(state.marginals)
    for v in range(base.cols):
        es = var_eid[var_ptr[v]:var_ptr[v + 1]]
        for a in range(es.size):
            prod = epsilon
            for b in range(es.size):
                if b != a:
                    prod *= state.c2v[es[b]]
            v2c[es[a]] = prod
    for c in range(base.rows):
        lo, hi = chk_ptr[c], chk_ptr[c + 1]
        for a in range(lo, hi):
            prod = 1.0
            for b in range(lo, hi):
                if b != a:
                    prod *= 1.0 - v2c[b]
            c2v[a] = 1.0 - prod
    for v in range(base.cols):
        es = var_eid[var_ptr[v]:var_ptr[v + 1]]
        prod = epsilon
        for e in es:
            prod *= c2v[e]
        p[v] = prod
    return DEState(v2c=v2c, c2v=c2v, marginals=p, iteration=state.iteration + 1)


@njit(cache=True, nogil=True)
def _kernel_step(eps, c2v_in, v2c, c2v, p, chk_ptr, var_ptr, var_eid):
    n_var = var_ptr.shape[0] - 1
    n_chk = chk_ptr.shape[0] - 1
    for v in range(n_var):
        lo, hi = var_ptr[v], var_ptr[v + 1]
        for a in range(lo, hi):
            prod = eps
            for b in range(lo, hi):
                if b != a:
                    prod *= c2v_in[var_eid[b]]
            v2c[var_eid[a]] = prod
    for c in range(n_chk):
        lo, hi = chk_ptr[c], chk_ptr[c + 1]
        for a in range(lo, hi):
            prod = 1.0
            for b in range(lo, hi):
                if b != a:
                    prod *= 1.0 - v2c[b]
            c2v[a] = 1.0 - prod
    for v in range(n_var):
        lo, hi = var_ptr[v], var_ptr[v + 1]
        prod = eps
        for a in range(lo, hi):
            prod *= c2v[var_eid[a]]
        p[v] = prod


@njit(cache=True, nogil=True)
def _kernel_run(eps, target, max_iter, chk_ptr, var_ptr, var_eid, n_edges):
    """Run to convergence/fixpoint/budget; returns (converged, iterations)."""
    c2v = np.ones(n_edges)
    v2c = np.empty(n_edges)
    c2v_new = np.empty(n_edges)
    n_var = var_ptr.shape[0] - 1
    p = np.empty(n_var)
    for it in range(1, max_iter + 1):
        _kernel_step(eps, c2v, v2c, c2v_new, p, chk_ptr, var_ptr, var_eid)
        pmax = 0.0
        for v in range(n_var):
            if p[v] > pmax:
                pmax = p[v]
        if pmax < target:
            return True, it
        same = True
        for e in range(n_edges):
            if c2v_new[e] != c2v[e]:
                same = False
                break
        if same:
            return False, it
        c2v, c2v_new = c2v_new, c2v
    return False, max_iter


@njit(cache=True, nogil=True)
def _kernel_trajectory(eps, iters, chk_ptr, var_ptr, var_eid, n_edges, out):
    c2v = np.ones(n_edges)
    v2c = np.empty(n_edges)
    c2v_new = np.empty(n_edges)
    n_var = var_ptr.shape[0] - 1
    p = np.empty(n_var)
    for v in range(n_var):
        out[0, v] = eps
    for it in range(1, iters + 1):
        _kernel_step(eps, c2v, v2c, c2v_new, p, chk_ptr, var_ptr, var_eid)
        for v in range(n_var):
            out[it, v] = p[v]
        c2v, c2v_new = c2v_new, c2v


def converges(base, epsilon, target=DE_TARGET, max_iter=DE_MAX_ITER):
    """(converged, iterations used) for one epsilon."""
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"epsilon must be in [0, 1], got {epsilon}")
    _, _, chk_ptr, var_ptr, var_eid = _graph(base)
    ok, iters = _kernel_run(epsilon, target, max_iter, chk_ptr, var_ptr,
                            var_eid, int(base.entries.sum()))
    return bool(ok), int(iters)


def trajectory(base, epsilon, iters):
    """Marginal erasure probabilities p[ell][v], ell in [0, iters]."""
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"epsilon must be in [0, 1], got {epsilon}")
    _, _, chk_ptr, var_ptr, var_eid = _graph(base)
    out = np.empty((iters + 1, base.cols))
    _kernel_trajectory(epsilon, iters, chk_ptr, var_ptr, var_eid,
                       int(base.entries.sum()), out)
    return out


@dataclass(frozen=True)
class ThresholdResult:
    epsilon_star: float
    bracket: tuple
    de_params: dict


def bp_threshold(base, bisection_tol=BISECTION_TOL, de_target=DE_TARGET,
                 max_iter=DE_MAX_ITER):
    """Bisect the convergence boundary of density evolution in epsilon.

    The lower bracket end always converges (epsilon = 0 trivially does) and
    the upper end never does (at epsilon = 1 the all-ones message state is
    an exact fixpoint of the recursion for any check degrees >= 2).
    """
    if bisection_tol <= 0 or de_target <= 0:
        raise ParameterError("tolerances must be positive")
    lo, hi = 0.0, 1.0
    while hi - lo > bisection_tol:
        mid = (lo + hi) / 2
        ok, _ = converges(base, mid, target=de_target, max_iter=max_iter)
        if ok:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(epsilon_star=(lo + hi) / 2, bracket=(lo, hi),
                           de_params={"target": de_target, "max_iter": max_iter,
                                      "bisection_tol": bisection_tol})


def default_threads():
    env = os.environ.get("SCC_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ParameterError(f"SCC_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise ParameterError(f"SCC_THREADS must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def threshold_table(cells, threads=None, **kwargs):
    """bp_threshold over many parameter cells on a worker pool.

    cells: iterable of CodeParams (or (dl, dr, L, modified) tuples).
    Returns rows of (params, ThresholdResult) in input order. The kernel
    releases the interpreter lock, so threads give real parallelism.
    """
    params = [c if isinstance(c, CodeParams) else CodeParams(*c) for c in cells]
    threads = threads or default_threads()

    def job(p):
        return bp_threshold(build_base(p), **kwargs)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(job, params))
    return list(zip(params, results))


def threshold_rows(pairs):
    """CSV-ready dict rows for (params, ThresholdResult) pairs."""
    rows = []
    for p, res in pairs:
        rows.append({
            "dl": p.dl, "dr": p.dr, "L": p.L,
            "variant": "modified" if p.modified else "original",
            "threshold": res.epsilon_star,
            "rate": float(design_rate(p)),
        })
    return rows
