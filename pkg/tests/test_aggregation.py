import numpy as np
import pytest

import qdarwin as qd
from qdarwin.aggregation import MICurve

from conftest import random_branch_coeffs


@pytest.fixture()
def coeffs():
    return random_branch_coeffs(np.random.default_rng(23), 10)


def _per_atom_mi(coeffs, probe):
    return np.array(
        [qd.mutual_info(qd.overlap_stats(coeffs, np.array([i])), probe) for i in range(10)]
    )


def test_order_random_is_a_seeded_permutation(six_atom):
    _, _, grid, _ = six_atom
    a = qd.order_random(grid, 0)
    b = qd.order_random(grid, 0)
    c = qd.order_random(grid, 1)
    assert sorted(a.tolist()) == list(range(grid.n_atoms))
    assert a.tolist() == b.tolist()
    assert a.tolist() != c.tolist()


def test_order_naive_sorts_by_single_atom_mi(coeffs):
    probe = qd.FockProbe(2)
    order = qd.order_naive(coeffs, probe, seed=0)
    vals = _per_atom_mi(coeffs, probe)[order]
    assert np.all(np.diff(vals) <= 1e-12)


def test_order_naive_shuffles_ties_by_seed():
    # two pairs of identical atoms force tie classes
    v = np.array([0.5, 0.5, 0.5, 0.5], complex)
    c = qd.from_arrays(1.0, (0, 0), (0, 3), v.reshape(1, 4), (v * np.exp(0.5j)).reshape(1, 4))
    probe = qd.CoherentProbe(2.0)
    orders = {tuple(qd.order_naive(c, probe, seed=s).tolist()) for s in range(8)}
    assert len(orders) > 1  # ties really get shuffled
    for o in orders:
        assert sorted(o) == [0, 1, 2, 3]


def test_order_smart_greedy_is_locally_optimal(coeffs):
    # each pick maximizes joint MI given the already-chosen prefix
    probe = qd.FockProbe(3)
    order = qd.order_smart(coeffs, probe)
    chosen: list[int] = []
    for step in range(4):
        rest = [i for i in range(10) if i not in chosen]
        gains = {
            i: qd.mutual_info(qd.overlap_stats(coeffs, np.array(chosen + [i])), probe)
            for i in rest
        }
        best = max(gains.values())
        assert gains[int(order[step])] == pytest.approx(best, abs=1e-12)
        chosen.append(int(order[step]))


def test_build_curve_matches_prefix_stats(coeffs):
    for probe in (qd.FockProbe(2), qd.CoherentProbe(1.5)):
        curve = qd.build_curve(coeffs, probe, "smart")
        assert curve.sizes.tolist() == list(range(1, 11))
        assert curve.f == pytest.approx(curve.sizes / 10)
        for i, size in enumerate(curve.sizes):
            direct = qd.mutual_info(qd.overlap_stats(coeffs, curve.order[:size]), probe)
            assert curve.mi[i] == pytest.approx(direct, abs=1e-12)
        ss = qd.system_entropy(qd.total_overlap(coeffs), probe)
        assert curve.s_sys == pytest.approx(ss, abs=1e-12)
        assert curve.mi_over_ss[-1] == pytest.approx(curve.mi[-1] / ss, abs=1e-12)


def test_build_curve_random_averaging(coeffs):
    probe = qd.CoherentProbe(1.0)
    curve = qd.build_curve(coeffs, probe, "random", seed=3, n_seeds=5)
    assert curve.ordering == "random" and curve.n_seeds == 5
    assert curve.order is None and curve.mi_std is not None
    singles = [
        qd.build_curve(coeffs, probe, qd.order_random(coeffs.grid, 3 + i)).mi
        for i in range(5)
    ]
    stack = np.stack(singles)
    assert curve.mi == pytest.approx(stack.mean(axis=0), abs=1e-12)
    assert curve.mi_std == pytest.approx(stack.std(axis=0, ddof=1), abs=1e-12)


def test_build_curve_explicit_order(coeffs):
    order = np.arange(10)[::-1].copy()
    curve = qd.build_curve(coeffs, qd.FockProbe(1), order)
    assert curve.ordering == "explicit"
    assert curve.order.tolist() == order.tolist()


def test_build_curve_holevo_points(coeffs):
    probe = qd.FockProbe(2)
    curve = qd.build_curve(coeffs, probe, "smart", holevo=True, n_chi=4)
    assert curve.chi_sizes is not None and curve.chi_sizes[0] == 1
    assert curve.chi_sizes[-1] == 10
    for s, chi in zip(curve.chi_sizes, curve.chi):
        direct = qd.optimize_holevo(qd.overlap_stats(coeffs, curve.order[:s]), probe)
        assert chi == pytest.approx(direct.holevo, abs=1e-9)
        mi_at = curve.mi[list(curve.sizes).index(s)]
        assert -1e-9 <= chi <= mi_at + 1e-9


def _flat_curve(ratios):
    r = np.asarray(ratios, float)
    n = r.size
    return MICurve(
        ordering="explicit",
        sizes=np.arange(1, n + 1),
        f=np.arange(1, n + 1) / n,
        mi=r,  # placeholder, detector only reads mi_over_ss
        mi_over_ss=r,
        s_sys=1.0,
    )


class TestPlateauDetector:
    def test_wide_plateau_detected(self):
        curve = _flat_curve([0.2, 0.95, 1.0, 1.05, 1.0, 0.98, 1.9, 2.0])
        res = qd.detect_plateau(curve, delta=0.1, min_width_fraction=0.25)
        assert res.present
        assert (res.start, res.stop) == (1, 6)
        assert res.width_fraction == pytest.approx(5 / 8)

    def test_narrow_run_rejected(self):
        curve = _flat_curve([0.2, 0.4, 1.0, 1.6, 1.8, 2.0, 2.0, 2.0])
        res = qd.detect_plateau(curve, delta=0.1, min_width_fraction=0.25)
        assert not res.present
        assert res.width_fraction == pytest.approx(1 / 8)

    def test_no_run_at_all(self):
        curve = _flat_curve([0.2, 0.4, 0.6, 1.6, 1.8, 2.0])
        res = qd.detect_plateau(curve, delta=0.1)
        assert not res.present and res.start is None
        assert res.width_fraction == 0.0

    def test_run_to_the_end_counts(self):
        curve = _flat_curve([0.3, 0.92, 1.0, 1.05])
        res = qd.detect_plateau(curve, delta=0.1, min_width_fraction=0.5)
        assert res.present and (res.start, res.stop) == (1, 4)

    def test_nan_cells_break_runs(self):
        r = np.array([1.0, np.nan, 1.0, 1.0])
        res = qd.detect_plateau(_flat_curve(r), delta=0.1, min_width_fraction=0.5)
        assert res.present and (res.start, res.stop) == (2, 4)
