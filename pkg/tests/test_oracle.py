import math

import numpy as np
import pytest

import qdarwin as qd
from qdarwin.oracle import _compositions

from test_info import FROZEN_3MODE, V3_0, V3_1


def _wrap(v0, v1):
    m = v0.size
    return qd.from_arrays(1.0, (0, 0), (0, m - 1), v0.reshape(1, m), v1.reshape(1, m))


def test_compositions_count_and_order():
    combos = list(_compositions(3, 3))
    assert len(combos) == math.comb(3 + 2, 2)
    assert combos[0] == (0, 0, 3) and combos[-1] == (3, 0, 0)
    assert all(sum(c) == 3 for c in combos)
    assert combos == sorted(combos)


def test_vn_entropy_known_spectra():
    assert qd.vn_entropy(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-12)
    assert qd.vn_entropy(np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)


def test_single_photon_which_path_is_a_bell_state():
    c = _wrap(np.array([1.0, 0.0], complex), np.array([0.0, 1.0], complex))
    state = qd.build_fock_state(c, [0, 1], 1)
    info = qd.oracle_info(state, [0])
    assert info.s_sys == pytest.approx(1.0, abs=1e-12)
    assert info.mi == pytest.approx(1.0, abs=1e-12)
    # any qubit basis leaves the conditioned field pure on the full fragment
    full = qd.oracle_info(state, [0, 1])
    for th, ph in [(0.0, 0.0), (1.0, 2.0), (np.pi / 2, 0.5)]:
        assert full.holevo(th, ph) == pytest.approx(full.s_frag, abs=1e-12)


def test_identical_branches_carry_no_information():
    v = np.array([0.6, 0.8], complex)
    state = qd.build_fock_state(_wrap(v, v), [0, 1], 2)
    info = qd.oracle_info(state, [0])
    assert info.s_sys == pytest.approx(0.0, abs=1e-12)
    assert info.mi == pytest.approx(0.0, abs=1e-12)


def test_fock_state_purity_and_norm():
    c = _wrap(V3_0, V3_1)
    state = qd.build_fock_state(c, [0, 1, 2], 3)
    rho, basis = qd.partial_trace(state, [0, 1, 2])
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
    assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-12)
    assert len(basis) == math.comb(3 + 2, 2)


@pytest.mark.parametrize("n", [2, 4])
def test_oracle_reproduces_frozen_constants(n):
    # same numbers as the closed forms: three-way agreement with the
    # standalone generator
    mi_ref, chi_ref, _, _ = FROZEN_3MODE[n]
    state = qd.build_fock_state(_wrap(V3_0, V3_1), [0, 1, 2], n)
    info = qd.oracle_info(state, [0, 1])
    assert info.mi == pytest.approx(mi_ref, abs=1e-12)
    assert info.holevo(1.1, 0.7) == pytest.approx(chi_ref, abs=1e-12)


def test_coherent_overlap_law():
    # S(S) = h2(|<beta|alpha>|) with |<beta|alpha>| = e^{-|a-b|^2/2} per mode
    v0 = np.array([0.8, 0.6], complex)
    v1 = np.array([0.5 * np.exp(0.4j), math.sqrt(0.75)], complex)
    nbar = 1.2
    state = qd.build_coherent_state(_wrap(v0, v1), [0, 1], nbar, trunc_tol=1e-12)
    a0, a1 = math.sqrt(nbar) * v0, math.sqrt(nbar) * v1
    ov = math.exp(-0.5 * float(np.sum(np.abs(a0 - a1) ** 2)))
    info = qd.oracle_info(state, [0, 1])
    assert info.s_sys == pytest.approx(qd.binary_entropy(ov), abs=1e-9)


def test_coherent_truncation_bookkeeping():
    c = _wrap(np.array([1.0, 0.0], complex), np.array([0.0, 1.0], complex))
    tight = qd.build_coherent_state(c, [0, 1], 2.0, trunc_tol=1e-12)
    loose = qd.build_coherent_state(c, [0, 1], 2.0, trunc_tol=1e-4)
    assert max(tight.truncation) < max(loose.truncation)
    assert tight.dim > loose.dim


def test_mass_tol_guards_dropped_modes():
    c = _wrap(V3_0, V3_1)
    with pytest.raises(ValueError, match="mass|residual"):
        qd.build_fock_state(c, [0, 1], 2, mass_tol=1e-9)  # drops 41% of mode 2
    state = qd.build_fock_state(c, [0, 1], 2, mass_tol=0.9)
    assert state.mass_residual[0] == pytest.approx(abs(V3_0[2]) ** 2, abs=1e-12)


def test_mode_list_validation():
    c = _wrap(V3_0, V3_1)
    with pytest.raises(ValueError, match="duplicates"):
        qd.build_fock_state(c, [0, 0, 1], 1, mass_tol=1.0)
    with pytest.raises(ValueError, match="outside"):
        qd.build_fock_state(c, [0, 7], 1, mass_tol=1.0)
    state = qd.build_fock_state(c, [0, 1, 2], 1)
    with pytest.raises(ValueError, match="not part"):
        qd.partial_trace(state, [3])
