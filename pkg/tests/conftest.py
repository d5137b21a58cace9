import numpy as np
import pytest

import qdarwin as qd

# acceptance tests append one line each; printed after the run so they stay
# visible regardless of output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def six_atom():
    """Band-centered six-atom window: small enough for dense oracles."""
    wp = qd.gaussian_wavepacket(3.0 * np.pi / 1.05, 1.0)
    scat = qd.ScatteringModel(2.325, 2.925)
    grid = qd.build_grid(wp, scat, 1.05, eps_grid=1e-4)
    coeffs = qd.branch_coefficients(wp, scat, grid)
    assert grid.n_atoms == 6
    return wp, scat, grid, coeffs


@pytest.fixture(scope="session")
def narrow_pulse():
    """sigma T = 0.1 lattice at full separation (sigma dtau = 6), ~113 atoms."""
    wp = qd.gaussian_wavepacket(6.0, 1.0)
    scat = qd.ScatteringModel(0.0, 6.0)
    grid = qd.build_grid(wp, scat, 0.1, eps_grid=1e-4)
    coeffs = qd.branch_coefficients(wp, scat, grid)
    return wp, scat, grid, coeffs


def random_branch_coeffs(rng, n_modes, k_range=None):
    """Synthetic unit-norm branch pair wrapped as BranchCoefficients."""
    v = rng.normal(size=(2, n_modes)) + 1j * rng.normal(size=(2, n_modes))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    if k_range is None:
        k_range = (0, 0)
    n_k = k_range[1] - k_range[0] + 1
    shape = (n_k, n_modes // n_k)
    return qd.from_arrays(1.0, k_range, (0, shape[1] - 1), v[0].reshape(shape), v[1].reshape(shape))
