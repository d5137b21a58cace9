"""Hot numerical kernels: closed-form mutual information and greedy ordering.

Two implementations live side by side.  The loop kernels are compiled with
numba when it is importable and QDARWIN_DISABLE_NUMBA is not set; otherwise a
vectorized pure-numpy path takes over.  Both paths must agree to 1e-12 (see
tests/test_kernels.py) and benchmarks/bench_kernels.py times one against the
other.

All inputs here are capture-renormalized: branch masses p lie in [0, 1], the
interference amplitudes a and a_tot are divided by sqrt(e0 e1), so the atom
window is a closed unit-norm system and purity identities hold exactly.
Amplitude convention: a = sum phi^(1)* phi^(0).
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("QDARWIN_DISABLE_NUMBA", "").lower() not in (
    "1",
    "true",
    "yes",
)

_TINY = 1e-300  # below this a branch mass is treated as exactly empty


def _h2_scalar(x: float) -> float:
    # Binary entropy of eigenvalue gap x: H((1+x)/2) in bits.
    if x < 0.0:
        x = 0.0
    elif x > 1.0:
        x = 1.0
    u = 0.5 * (1.0 + x)
    v = 0.5 * (1.0 - x)
    out = 0.0
    if u > 0.0:
        out -= u * math.log2(u)
    if v > 0.0:
        out -= v * math.log2(v)
    return out


def _fock_mi_scalar(
    p0: float,
    p1: float,
    a_re: float,
    a_im: float,
    n: int,
    at_re: float,
    at_im: float,
) -> float:
    # Photon-number resolved MI for one fragment.  The complement conditional
    # probabilities at n-k photons coincide with the fragment ones at k, so a
    # single Bayes weight pair (w0, w1) serves both entropy terms.
    q0 = 1.0 - p0
    q1 = 1.0 - p1
    ac_re = at_re - a_re
    ac_im = at_im - a_im

    at_abs = math.sqrt(at_re * at_re + at_im * at_im)
    if at_abs > 1.0:
        at_abs = 1.0
    dtot = at_abs**n

    g2 = 0.0
    if p0 * p1 > _TINY:
        g2 = (a_re * a_re + a_im * a_im) / (p0 * p1)
        if g2 > 1.0:
            g2 = 1.0
    gc2 = 0.0
    if q0 * q1 > _TINY:
        gc2 = (ac_re * ac_re + ac_im * ac_im) / (q0 * q1)
        if gc2 > 1.0:
            gc2 = 1.0
    lg2 = math.log(g2) if g2 > 0.0 else -math.inf
    lgc2 = math.log(gc2) if gc2 > 0.0 else -math.inf

    lp0 = math.log(p0) if p0 > 0.0 else -math.inf
    lq0 = math.log(q0) if q0 > 0.0 else -math.inf
    lp1 = math.log(p1) if p1 > 0.0 else -math.inf
    lq1 = math.log(q1) if q1 > 0.0 else -math.inf

    mi = _h2_scalar(dtot)
    lgam = math.lgamma(n + 1.0)
    for k in range(n + 1):
        j = n - k
        lb = lgam - math.lgamma(k + 1.0) - math.lgamma(j + 1.0)
        l0 = lb + (k * lp0 if k else 0.0) + (j * lq0 if j else 0.0)
        l1 = lb + (k * lp1 if k else 0.0) + (j * lq1 if j else 0.0)
        w0 = math.exp(l0) if l0 > -math.inf else 0.0
        w1 = math.exp(l1) if l1 > -math.inf else 0.0
        tot = w0 + w1
        if tot <= 0.0:
            continue
        pk = 0.5 * tot
        ps0 = w0 / tot
        var4 = 4.0 * ps0 * (1.0 - ps0)

        omg = -math.expm1(k * lg2) if k else 0.0
        omgc = -math.expm1(j * lgc2) if j else 0.0
        df = math.sqrt(max(0.0, 1.0 - var4 * omg))
        dfc = math.sqrt(max(0.0, 1.0 - var4 * omgc))
        mi += pk * (_h2_scalar(df) - _h2_scalar(dfc))
    return mi


def _fock_mi_batch_loop(p0, p1, a_re, a_im, n, at_re, at_im, out):
    for i in range(p0.shape[0]):
        out[i] = _fock_mi_scalar(p0[i], p1[i], a_re[i], a_im[i], n, at_re, at_im)
    return out


def _coherent_mi_scalar(log_df: float, log_dtot: float) -> float:
    # log_df, log_dtot: log-magnitudes of D_F and D_tot (both <= 0).
    if log_df > 0.0:
        log_df = 0.0
    if log_dtot > log_df:
        log_dtot = log_df
    return (
        _h2_scalar(math.exp(log_dtot))
        + _h2_scalar(math.exp(log_df))
        - _h2_scalar(math.exp(log_dtot - log_df))
    )


def _coherent_mi_batch_loop(log_df, log_dtot, out):
    for i in range(log_df.shape[0]):
        out[i] = _coherent_mi_scalar(log_df[i], log_dtot)
    return out


def _greedy_fock_loop(p0a, p1a, are_a, aim_a, n, at_re, at_im, order):
    n_atoms = p0a.shape[0]
    used = np.zeros(n_atoms, dtype=np.bool_)
    c0 = 0.0
    c1 = 0.0
    cre = 0.0
    cim = 0.0
    for step in range(n_atoms):
        best = -1
        best_mi = -1.0
        for i in range(n_atoms):
            if used[i]:
                continue
            mi = _fock_mi_scalar(
                c0 + p0a[i], c1 + p1a[i], cre + are_a[i], cim + aim_a[i], n, at_re, at_im
            )
            if mi > best_mi:
                best_mi = mi
                best = i
        order[step] = best
        used[best] = True
        c0 += p0a[best]
        c1 += p1a[best]
        cre += are_a[best]
        cim += aim_a[best]
    return order


def _greedy_coherent_loop(w, nbar, log_dtot, order):
    # Greedy argmax of Eq.-style MI; monotone in the accumulated weight, but
    # evaluated honestly so ties resolve exactly like the Fock variant.
    n_atoms = w.shape[0]
    used = np.zeros(n_atoms, dtype=np.bool_)
    acc = 0.0
    for step in range(n_atoms):
        best = -1
        best_mi = -1.0
        for i in range(n_atoms):
            if used[i]:
                continue
            mi = _coherent_mi_scalar(-0.5 * nbar * (acc + w[i]), log_dtot)
            if mi > best_mi:
                best_mi = mi
                best = i
        order[step] = best
        used[best] = True
        acc += w[best]
    return order


def _curve_fock_loop(p0a, p1a, are_a, aim_a, order, n, at_re, at_im, out):
    c0 = 0.0
    c1 = 0.0
    cre = 0.0
    cim = 0.0
    for f in range(order.shape[0]):
        i = order[f]
        c0 += p0a[i]
        c1 += p1a[i]
        cre += are_a[i]
        cim += aim_a[i]
        out[f] = _fock_mi_scalar(c0, c1, cre, cim, n, at_re, at_im)
    return out


def _curve_coherent_loop(w, order, nbar, log_dtot, out):
    acc = 0.0
    for f in range(order.shape[0]):
        acc += w[order[f]]
        out[f] = _coherent_mi_scalar(-0.5 * nbar * acc, log_dtot)
    return out


if USE_NUMBA:
    _h2_scalar = numba.njit(cache=True)(_h2_scalar)
    _fock_mi_scalar = numba.njit(cache=True)(_fock_mi_scalar)
    _fock_mi_batch_loop = numba.njit(cache=True)(_fock_mi_batch_loop)
    _coherent_mi_scalar = numba.njit(cache=True)(_coherent_mi_scalar)
    _coherent_mi_batch_loop = numba.njit(cache=True)(_coherent_mi_batch_loop)
    _greedy_fock_loop = numba.njit(cache=True)(_greedy_fock_loop)
    _greedy_coherent_loop = numba.njit(cache=True)(_greedy_coherent_loop)
    _curve_fock_loop = numba.njit(cache=True)(_curve_fock_loop)
    _curve_coherent_loop = numba.njit(cache=True)(_curve_coherent_loop)


# ---------------------------------------------------------------------------
# Pure-numpy path.  Vectorized over fragments; the greedy/curve drivers loop
# over steps in python with batched candidate evaluation.
# ---------------------------------------------------------------------------


def _h2_vec(x):
    x = np.clip(x, 0.0, 1.0)
    u = 0.5 * (1.0 + x)
    v = 0.5 * (1.0 - x)
    with np.errstate(divide="ignore", invalid="ignore"):
        tu = np.where(u > 0.0, u * np.log2(np.where(u > 0.0, u, 1.0)), 0.0)
        tv = np.where(v > 0.0, v * np.log2(np.where(v > 0.0, v, 1.0)), 0.0)
    return -(tu + tv)


def _fock_mi_batch_np(p0, p1, a_re, a_im, n, at_re, at_im):
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    a_re = np.asarray(a_re, dtype=float)
    a_im = np.asarray(a_im, dtype=float)
    q0 = 1.0 - p0
    q1 = 1.0 - p1
    ac_re = at_re - a_re
    ac_im = at_im - a_im

    at_abs = min(1.0, math.hypot(at_re, at_im))
    dtot = at_abs**n

    def _lg2(num2, den):
        out = np.full_like(den, -np.inf)
        ok = den > _TINY
        with np.errstate(divide="ignore"):
            ratio = np.where(ok, np.minimum(num2 / np.where(ok, den, 1.0), 1.0), 0.0)
            out[ok] = np.log(ratio[ok])
        return out

    lg2 = _lg2(a_re**2 + a_im**2, p0 * p1)
    lgc2 = _lg2(ac_re**2 + ac_im**2, q0 * q1)

    with np.errstate(divide="ignore"):
        lp = np.stack([np.log(np.maximum(p0, 0.0)), np.log(np.maximum(p1, 0.0))])
        lq = np.stack([np.log(np.maximum(q0, 0.0)), np.log(np.maximum(q1, 0.0))])

    k = np.arange(n + 1, dtype=float)
    j = n - k
    lb = (
        math.lgamma(n + 1.0)
        - np.array([math.lgamma(v + 1.0) for v in k])
        - np.array([math.lgamma(v + 1.0) for v in j])
    )
    with np.errstate(invalid="ignore"):
        lw = (
            lb[None, None, :]
            + np.where(k[None, None, :] == 0.0, 0.0, k[None, None, :] * lp[:, :, None])
            + np.where(j[None, None, :] == 0.0, 0.0, j[None, None, :] * lq[:, :, None])
        )
    w = np.exp(lw)  # exp(-inf) = 0; shape (2, m, n+1)
    tot = w[0] + w[1]
    pk = 0.5 * tot
    ps0 = np.where(tot > 0.0, w[0] / np.where(tot > 0.0, tot, 1.0), 0.5)
    var4 = 4.0 * ps0 * (1.0 - ps0)

    with np.errstate(invalid="ignore"):
        omg = np.where(k[None, :] == 0.0, 0.0, -np.expm1(k[None, :] * lg2[:, None]))
        omgc = np.where(j[None, :] == 0.0, 0.0, -np.expm1(j[None, :] * lgc2[:, None]))
    df = np.sqrt(np.clip(1.0 - var4 * omg, 0.0, 1.0))
    dfc = np.sqrt(np.clip(1.0 - var4 * omgc, 0.0, 1.0))
    return _h2_vec(dtot) + np.sum(pk * (_h2_vec(df) - _h2_vec(dfc)), axis=-1)


def _coherent_mi_batch_np(log_df, log_dtot):
    log_df = np.minimum(np.asarray(log_df, dtype=float), 0.0)
    ld = np.minimum(log_dtot, log_df)
    return _h2_vec(np.exp(ld)) + _h2_vec(np.exp(log_df)) - _h2_vec(np.exp(ld - log_df))


def _greedy_fock_np(p0a, p1a, are_a, aim_a, n, at_re, at_im, order):
    n_atoms = p0a.shape[0]
    alive = np.ones(n_atoms, dtype=bool)
    c = np.zeros(4)
    for step in range(n_atoms):
        idx = np.nonzero(alive)[0]
        mi = _fock_mi_batch_np(
            c[0] + p0a[idx], c[1] + p1a[idx], c[2] + are_a[idx], c[3] + aim_a[idx], n, at_re, at_im
        )
        best = idx[int(np.argmax(mi))]  # argmax keeps the lowest (k, l) on ties
        order[step] = best
        alive[best] = False
        c += (p0a[best], p1a[best], are_a[best], aim_a[best])
    return order


def _greedy_coherent_np(w, nbar, log_dtot, order):
    n_atoms = w.shape[0]
    alive = np.ones(n_atoms, dtype=bool)
    acc = 0.0
    for step in range(n_atoms):
        idx = np.nonzero(alive)[0]
        mi = _coherent_mi_batch_np(-0.5 * nbar * (acc + w[idx]), log_dtot)
        best = idx[int(np.argmax(mi))]
        order[step] = best
        alive[best] = False
        acc += w[best]
    return order


def _curve_fock_np(p0a, p1a, are_a, aim_a, order, n, at_re, at_im, out):
    out[:] = _fock_mi_batch_np(
        np.cumsum(p0a[order]),
        np.cumsum(p1a[order]),
        np.cumsum(are_a[order]),
        np.cumsum(aim_a[order]),
        n,
        at_re,
        at_im,
    )
    return out


def _curve_coherent_np(w, order, nbar, log_dtot, out):
    out[:] = _coherent_mi_batch_np(-0.5 * nbar * np.cumsum(w[order]), log_dtot)
    return out


# ---------------------------------------------------------------------------
# Dispatching wrappers.
# ---------------------------------------------------------------------------


def fock_mi_batch(p0, p1, a_re, a_im, n: int, at_re: float, at_im: float) -> np.ndarray:
    """Closed-form Fock MI for a batch of fragment overlap stats."""
    p0 = np.ascontiguousarray(p0, dtype=float)
    p1 = np.ascontiguousarray(p1, dtype=float)
    a_re = np.ascontiguousarray(a_re, dtype=float)
    a_im = np.ascontiguousarray(a_im, dtype=float)
    if USE_NUMBA:
        out = np.empty(p0.shape[0])
        return _fock_mi_batch_loop(p0, p1, a_re, a_im, n, at_re, at_im, out)
    return _fock_mi_batch_np(p0, p1, a_re, a_im, n, at_re, at_im)


def coherent_mi_batch(log_df, log_dtot: float) -> np.ndarray:
    """Eq.-(3)-style MI from log|D_F| values and a shared log|D_tot|."""
    log_df = np.ascontiguousarray(log_df, dtype=float)
    if USE_NUMBA:
        out = np.empty(log_df.shape[0])
        return _coherent_mi_batch_loop(log_df, log_dtot, out)
    return _coherent_mi_batch_np(log_df, log_dtot)


def greedy_fock(p0a, p1a, are_a, aim_a, n: int, at_re: float, at_im: float) -> np.ndarray:
    order = np.empty(len(p0a), dtype=np.int64)
    args = (
        np.ascontiguousarray(p0a, dtype=float),
        np.ascontiguousarray(p1a, dtype=float),
        np.ascontiguousarray(are_a, dtype=float),
        np.ascontiguousarray(aim_a, dtype=float),
        n,
        at_re,
        at_im,
        order,
    )
    return _greedy_fock_loop(*args) if USE_NUMBA else _greedy_fock_np(*args)


def greedy_coherent(w, nbar: float, log_dtot: float) -> np.ndarray:
    order = np.empty(len(w), dtype=np.int64)
    w = np.ascontiguousarray(w, dtype=float)
    if USE_NUMBA:
        return _greedy_coherent_loop(w, nbar, log_dtot, order)
    return _greedy_coherent_np(w, nbar, log_dtot, order)


def curve_fock(p0a, p1a, are_a, aim_a, order, n: int, at_re: float, at_im: float) -> np.ndarray:
    out = np.empty(len(order))
    args = (
        np.ascontiguousarray(p0a, dtype=float),
        np.ascontiguousarray(p1a, dtype=float),
        np.ascontiguousarray(are_a, dtype=float),
        np.ascontiguousarray(aim_a, dtype=float),
        np.ascontiguousarray(order, dtype=np.int64),
        n,
        at_re,
        at_im,
        out,
    )
    return _curve_fock_loop(*args) if USE_NUMBA else _curve_fock_np(*args)


def curve_coherent(w, order, nbar: float, log_dtot: float) -> np.ndarray:
    out = np.empty(len(order))
    w = np.ascontiguousarray(w, dtype=float)
    order = np.ascontiguousarray(order, dtype=np.int64)
    if USE_NUMBA:
        return _curve_coherent_loop(w, order, nbar, log_dtot, out)
    return _curve_coherent_np(w, order, nbar, log_dtot, out)
