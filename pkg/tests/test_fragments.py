import math

import numpy as np
import pytest

import qdarwin as qd
from qdarwin.fragments import Fragment

from conftest import random_branch_coeffs


@pytest.fixture()
def coeffs():
    return random_branch_coeffs(np.random.default_rng(11), 8)


def test_overlap_stats_are_direct_sums(coeffs):
    flat = coeffs.flat()
    idx = np.array([1, 4, 6])
    ov = qd.overlap_stats(coeffs, idx)
    comp = np.setdiff1d(np.arange(8), idx)
    assert ov.p0 == pytest.approx(np.sum(np.abs(flat[0, idx]) ** 2), abs=1e-15)
    assert ov.p1 == pytest.approx(np.sum(np.abs(flat[1, idx]) ** 2), abs=1e-15)
    assert ov.a == pytest.approx(np.sum(np.conj(flat[1, idx]) * flat[0, idx]), abs=1e-15)
    assert ov.p0c == pytest.approx(np.sum(np.abs(flat[0, comp]) ** 2), abs=1e-15)
    assert ov.ac == pytest.approx(np.sum(np.conj(flat[1, comp]) * flat[0, comp]), abs=1e-15)


def test_fragment_complement_and_union(coeffs):
    f = Fragment.from_indices([0, 3], 8)
    c = f.complement()
    assert sorted(np.concatenate([f.indices, c.indices]).tolist()) == list(range(8))
    u = f.union(Fragment.from_indices([3, 5], 8))
    assert sorted(u.indices.tolist()) == [0, 3, 5]


def test_fragment_from_atoms_maps_through_grid(six_atom):
    _, _, grid, coeffs = six_atom
    atoms = [grid.atoms()[0], grid.atoms()[4]]
    f = Fragment.from_atoms(coeffs, atoms)
    assert f.indices.tolist() == [0, 4]
    assert f.n_grid == 6


def test_complement_overlap_swaps_roles(coeffs):
    ov = qd.overlap_stats(coeffs, np.array([0, 2, 5]))
    co = ov.complement()
    assert co.p0 == ov.p0c and co.p1c == ov.p1
    assert co.a == ov.ac and co.ac == ov.a
    assert co.e0 == ov.e0 and co.e1 == ov.e1


def test_empty_fragment(coeffs):
    ov = qd.overlap_stats(coeffs, np.array([], dtype=np.int64))
    assert ov.p0 == 0.0 and ov.a == 0.0
    assert ov.g == 0.0
    # complement carries everything
    assert ov.p0c == pytest.approx(ov.e0, abs=1e-15)


def test_accumulator_matches_batch(coeffs):
    acc = qd.OverlapAccumulator(coeffs)
    chosen = []
    rng = np.random.default_rng(3)
    for idx in rng.permutation(8)[:5]:
        acc.add(int(idx))
        chosen.append(int(idx))
        a = acc.snapshot()
        b = qd.overlap_stats(coeffs, np.array(chosen))
        for name in ("p0", "p1", "a", "p0c", "p1c", "ac"):
            assert getattr(a, name) == pytest.approx(getattr(b, name), abs=1e-13), name


def test_normalized_overlap_g_is_cauchy_schwarz_bounded(coeffs):
    for idx in ([0], [1, 2], [0, 1, 2, 3, 4, 5, 6, 7]):
        ov = qd.overlap_stats(coeffs, np.array(idx))
        assert abs(ov.g) <= 1.0 + 1e-12


def test_polar_log_round_trip():
    p = qd.PolarLog(log_abs=-2.5, phase=0.75)
    assert p.abs == pytest.approx(math.exp(-2.5))
    assert p.value == pytest.approx(math.exp(-2.5) * np.exp(0.75j))


def test_coherent_decoherence_formula(coeffs):
    # D_F = exp(nbar (conj(a) - (p0 + p1)/2)) on raw sums
    ov = qd.overlap_stats(coeffs, np.array([1, 3, 4]))
    for nbar in (0.3, 2.0):
        d = qd.coherent_decoherence(ov, nbar)
        want = np.exp(nbar * (np.conj(ov.a) - 0.5 * (ov.p0 + ov.p1)))
        assert d.value == pytest.approx(want, abs=1e-14)
        assert d.abs <= 1.0 + 1e-12


def test_coherent_decoherence_product_over_disjoint_fragments(coeffs):
    # factorization over disjoint atom sets, in log space
    a = qd.coherent_decoherence(qd.overlap_stats(coeffs, np.array([0, 1])), 1.3)
    b = qd.coherent_decoherence(qd.overlap_stats(coeffs, np.array([2, 7])), 1.3)
    ab = qd.coherent_decoherence(qd.overlap_stats(coeffs, np.array([0, 1, 2, 7])), 1.3)
    assert a.log_abs + b.log_abs == pytest.approx(ab.log_abs, abs=1e-13)


def test_atom_overlaps_layout(six_atom):
    # masses and interference renormalized by the window captures, w raw
    _, _, _, coeffs = six_atom
    ao = qd.atom_overlaps(coeffs)
    flat = coeffs.flat()
    e0, e1 = coeffs.captures
    root = math.sqrt(e0 * e1)
    assert ao.p0 == pytest.approx(np.abs(flat[0]) ** 2 / e0, abs=1e-15)
    assert ao.p1 == pytest.approx(np.abs(flat[1]) ** 2 / e1, abs=1e-15)
    assert ao.a_re + 1j * ao.a_im == pytest.approx(
        np.conj(flat[1]) * flat[0] / root, abs=1e-15
    )
    assert ao.w == pytest.approx(np.abs(flat[0] - flat[1]) ** 2, abs=1e-14)
    assert np.sum(ao.p0) == pytest.approx(1.0, abs=1e-14)
    assert ao.log_dtot_per_nbar == pytest.approx(-0.5 * np.sum(ao.w), abs=1e-14)
