"""Kernel dispatch: the accelerated and plain-numpy paths must agree."""

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from qdarwin import _kernels as K

_CASE_SCRIPT = r"""
import json, sys
import numpy as np
from qdarwin import _kernels as K

rng = np.random.default_rng(42)
m = 40
v = rng.normal(size=(2, m)) + 1j * rng.normal(size=(2, m))
v /= np.linalg.norm(v, axis=1, keepdims=True)
p0 = np.abs(v[0]) ** 2
p1 = np.abs(v[1]) ** 2
aa = np.conj(v[1]) * v[0]
at = complex(np.sum(aa))
w = np.abs(v[0] - v[1]) ** 2
order = rng.permutation(m).astype(np.int64)

out = {
    "numba": K.USE_NUMBA,
    "fock_mi": K.fock_mi_batch(p0, p1, aa.real, aa.imag, 3, at.real, at.imag).tolist(),
    "coh_mi": K.coherent_mi_batch(-0.5 * 2.0 * np.cumsum(w[order]) / 2.0,
                                  -0.5 * 2.0 * w.sum() / 2.0).tolist(),
    "greedy_fock": K.greedy_fock(p0, p1, aa.real, aa.imag, 2, at.real, at.imag).tolist(),
    "greedy_coh": K.greedy_coherent(w, 1.5, -0.75 * w.sum()).tolist(),
    "curve_fock": K.curve_fock(p0, p1, aa.real, aa.imag, order, 2, at.real, at.imag).tolist(),
    "curve_coh": K.curve_coherent(w, order, 1.5, -0.75 * w.sum()).tolist(),
}
json.dump(out, sys.stdout)
"""


def _run_case(disable_numba: bool) -> dict:
    env = dict(os.environ)
    env.pop("QDARWIN_DISABLE_NUMBA", None)
    if disable_numba:
        env["QDARWIN_DISABLE_NUMBA"] = "1"
    res = subprocess.run(
        [sys.executable, "-c", _CASE_SCRIPT], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(res.stdout)


@pytest.mark.skipif(not K.HAS_NUMBA, reason="numba not installed")
def test_cross_path_agreement():
    fast = _run_case(disable_numba=False)
    slow = _run_case(disable_numba=True)
    assert fast["numba"] is True and slow["numba"] is False
    for key in ("fock_mi", "coh_mi", "curve_fock", "curve_coh"):
        a, b = np.array(fast[key]), np.array(slow[key])
        assert np.max(np.abs(a - b)) < 1e-12, key
    # greedy selections must be identical, not merely close
    assert fast["greedy_fock"] == slow["greedy_fock"]
    assert fast["greedy_coh"] == slow["greedy_coh"]


def test_env_flag_selects_numpy_path():
    out = _run_case(disable_numba=True)
    assert out["numba"] is False


def test_h2_scalar_edges():
    assert K._h2_scalar(0.0) == 1.0
    assert K._h2_scalar(1.0) == 0.0
    # h2(|D|) = H((1+|D|)/2)
    d = 0.5
    p = (1 + d) / 2
    want = -(p * math.log2(p) + (1 - p) * math.log2(1 - p))
    assert K._h2_scalar(d) == pytest.approx(want, abs=1e-15)


def test_h2_vec_matches_scalar():
    xs = np.array([0.0, 1e-12, 0.3, 0.9999, 1.0])
    vec = K._h2_vec(xs)
    for x, v in zip(xs, vec):
        assert v == pytest.approx(K._h2_scalar(float(x)), abs=1e-15)


def test_fock_mi_batch_against_scalar():
    rng = np.random.default_rng(5)
    v = rng.normal(size=(2, 6)) + 1j * rng.normal(size=(2, 6))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    p0, p1 = np.abs(v[0]) ** 2, np.abs(v[1]) ** 2
    aa = np.conj(v[1]) * v[0]
    at = complex(np.sum(aa))
    batch = K.fock_mi_batch(p0, p1, aa.real, aa.imag, 4, at.real, at.imag)
    for i in range(6):
        one = K._fock_mi_scalar(p0[i], p1[i], aa.real[i], aa.imag[i], 4, at.real, at.imag)
        assert batch[i] == pytest.approx(one, abs=1e-14)
