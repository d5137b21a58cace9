"""Time-frequency (Wigner) view of the branch wavepackets and the lattice.

The probe Wigner function is a Gaussian blob; a Shannon atom's is the
classic boxcar-band kernel sin(L(omega) u)/u with a slope kink at the band
center.  Pairing the two gives each atom's share of branch mass and
interference amplitude directly in phase space, with the same Moyal values
as the spectral coefficients.  Used for the atom-resolved information maps
and as an independent route onto the overlap statistics.

Conventions: W is normalized against the measure dt domega / (2 pi), so
(1/2pi) Int W_f W_g dt domega = |<f, g>|^2; frequency marginal 2 pi
|phi(omega)|^2, time marginal |x(t)|^2.  The time integral against a
Gaussian is analytic (a scaled complex error function); only the frequency
axis is quadrature, Gauss-Legendre per half-band so the kink never sits
inside a panel, with a node-doubling error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fragments import FragmentOverlap
from .info import Probe, mutual_info
from .signal import AtomGrid, ScatteringModel, Wavepacket, _scaled_erf


def wigner_gaussian(
    wp: Wavepacket, t: np.ndarray, omega: np.ndarray, t_center: float = 0.0
) -> np.ndarray:
    """W of the probe packet delayed by t_center, on broadcast (t, omega).

    W(t, omega) = (2/eta) exp(-(omega-omega0)^2/sigma^2 - sigma^2 (t-tc)^2)
    with eta the retained spectral fraction (1 + erf(omega0/sigma))/2; the
    omega < 0 truncation itself is neglected, consistent with the
    omega0 >= 5 sigma guard.
    """
    t = np.asarray(t, dtype=float)
    omega = np.asarray(omega, dtype=float)
    eta = wp.norm / (wp.sigma * math.sqrt(math.pi))
    v = (omega - wp.omega0) / wp.sigma
    return (2.0 / eta) * np.exp(-(v**2) - (wp.sigma * (t - t_center)) ** 2)


def wigner_atom(
    period: float, k: int, l: int, t: np.ndarray, omega: np.ndarray
) -> np.ndarray:
    """W of Shannon atom (k, l): (T/pi) sin(L(omega) u)/u on its band.

    u = t - l T and L(omega) = 2 min(omega - a_k, b_k - omega) inside the
    band [a_k, b_k] = [2 pi k / T, 2 pi (k+1) / T], zero outside.
    """
    t = np.asarray(t, dtype=float)
    omega = np.asarray(omega, dtype=float)
    a = 2.0 * math.pi * k / period
    b = 2.0 * math.pi * (k + 1) / period
    L = 2.0 * np.minimum(omega - a, b - omega)
    u = t - l * period
    with np.errstate(invalid="ignore"):
        core = np.where(u == 0.0, L, np.sin(L * u) / np.where(u == 0.0, 1.0, u))
    return np.where(L > 0.0, (period / math.pi) * core, 0.0)


def wigner_product_mass(
    f, g, t_span: tuple[float, float], omega_span: tuple[float, float], order: int = 96
) -> float:
    """(1/2pi) Int f(t,omega) g(t,omega) dt domega over a rectangle, by
    tensor Gauss-Legendre of the given order per axis."""
    x, wx = np.polynomial.legendre.leggauss(order)
    t = 0.5 * (t_span[1] - t_span[0]) * x + 0.5 * (t_span[0] + t_span[1])
    w = 0.5 * (omega_span[1] - omega_span[0]) * x + 0.5 * (omega_span[0] + omega_span[1])
    tt, ww = np.meshgrid(t, w, indexing="ij")
    vals = f(tt, ww) * g(tt, ww)
    scale = 0.25 * (t_span[1] - t_span[0]) * (omega_span[1] - omega_span[0])
    return float(scale * np.einsum("i,j,ij->", wx, wx, vals) / (2.0 * math.pi))


def _sinc_gauss_time(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Int sin(L u)/u e^{-sigma^2 (u - Delta)^2} du = pi Re F(x, y) for
    x = L/(2 sigma), y = -sigma Delta, F the scaled complex error function."""
    return math.pi * np.real(_scaled_erf(x, y))


@dataclass(frozen=True)
class TFAtomTable:
    """Per-atom branch masses and interference amplitudes from phase space.

    Arrays are flat over the grid in row-major (k, l) order, matching the
    spectral coefficient tables; gl_error is the node-doubling estimate of
    the frequency quadrature error, already below the requested tolerance.
    """

    grid: AtomGrid
    p0: np.ndarray
    p1: np.ndarray
    a: np.ndarray
    gl_error: float

    def totals(self) -> tuple[float, float, complex]:
        return float(self.p0.sum()), float(self.p1.sum()), complex(self.a.sum())

    def fragment_overlap(self, indices: np.ndarray) -> FragmentOverlap:
        """Overlap statistics of the atom subset, complement by subtraction."""
        idx = np.asarray(indices, dtype=np.int64)
        e0, e1, a_tot = self.totals()
        p0 = float(self.p0[idx].sum())
        p1 = float(self.p1[idx].sum())
        a = complex(self.a[idx].sum())
        return FragmentOverlap(
            p0=p0, p1=p1, a=a, p0c=e0 - p0, p1c=e1 - p1, ac=a_tot - a, e0=e0, e1=e1
        )


def _tf_table_at_order(
    wp: Wavepacket, scat: ScatteringModel, grid: AtomGrid, order: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    sig = wp.sigma
    T = grid.period
    eta = wp.norm / (sig * math.sqrt(math.pi))
    ls = np.arange(grid.l_range[0], grid.l_range[1] + 1)
    deltas = [scat.tau0 - ls * T, scat.tau1 - ls * T, scat.tau_bar - ls * T]

    x, wx = np.polynomial.legendre.leggauss(order)
    n_l = ls.size
    p0 = np.empty((grid.n_k, n_l))
    p1 = np.empty((grid.n_k, n_l))
    a = np.empty((grid.n_k, n_l), dtype=complex)
    # overall factor: W prefactors (2/eta)(T/pi), measure 1/(2 pi), analytic
    # t-integral contributes pi, leaving T/(pi eta) against the omega sum
    pref = T / (math.pi * eta)
    support = 8.5 * sig
    for ik in range(grid.n_k):
        k = grid.k_range[0] + ik
        lo = 2.0 * math.pi * k / T
        hi = 2.0 * math.pi * (k + 1) / T
        mid = 0.5 * (lo + hi)
        # restrict to where the spectral Gaussian is nonzero; a band that is
        # wide compared to sigma would otherwise starve the quadrature
        lo_eff = max(lo, wp.omega0 - support)
        hi_eff = min(hi, wp.omega0 + support)
        if lo_eff >= hi_eff:
            p0[ik] = 0.0
            p1[ik] = 0.0
            a[ik] = 0.0
            continue
        panels = (
            ((lo_eff, mid), (mid, hi_eff))
            if lo_eff < mid < hi_eff
            else ((lo_eff, hi_eff),)
        )
        nodes, wgts = [], []
        for a_edge, b_edge in panels:
            nodes.append(0.5 * (b_edge - a_edge) * x + 0.5 * (a_edge + b_edge))
            wgts.append(0.5 * (b_edge - a_edge) * wx)
        omega = np.concatenate(nodes)
        wgt = np.concatenate(wgts)
        L = 2.0 * np.minimum(omega - lo, hi - omega)
        gauss = np.exp(-(((omega - wp.omega0) / sig) ** 2))
        xarg = L / (2.0 * sig)

        # (nodes, l) tables of Re F(L/2sigma, -sigma Delta) per branch center
        t0, t1, tbar = (
            np.real(_scaled_erf(xarg[:, None], -sig * d[None, :])) for d in deltas
        )
        p0[ik] = pref * np.einsum("i,i,il->l", wgt, gauss, t0)
        p1[ik] = pref * np.einsum("i,i,il->l", wgt, gauss, t1)
        phase = np.exp(-1j * omega * scat.dtau)
        a[ik] = pref * np.einsum("i,i,i,il->l", wgt, gauss, phase, tbar)
    return p0.reshape(-1), p1.reshape(-1), a.reshape(-1)


def atom_tf_overlaps(
    wp: Wavepacket,
    scat: ScatteringModel,
    grid: AtomGrid,
    order: int = 48,
    tol: float = 1e-6,
) -> TFAtomTable:
    """Per-atom (p0, p1, a) from Wigner pairings over the whole grid.

    The time axis is integrated in closed form; the frequency axis runs
    Gauss-Legendre per half-band (the atom kernel kinks at the band center)
    at the given order and again at double order.  The larger-order table is
    returned; the difference must undercut tol.
    """
    # far columns see the band edges through Re F terms oscillating like
    # sin(2 x y) with y = sigma Delta, so the node count must cover the
    # worst phase span of one panel (width at most half a band)
    T = grid.period
    t_lo = grid.l_range[0] * T
    t_hi = grid.l_range[1] * T
    delta_max = max(
        abs(c - t) for c in (scat.tau0, scat.tau1, scat.tau_bar) for t in (t_lo, t_hi)
    )
    phase = math.pi / (T * wp.sigma) * wp.sigma * delta_max
    order = max(order, int(phase) + 32)
    if 2 * order > 4096:
        raise ValueError(
            f"band-edge oscillations need quadrature order {order} (cap 2048); "
            "shrink the time range or the delay"
        )
    coarse = _tf_table_at_order(wp, scat, grid, order)
    fine = _tf_table_at_order(wp, scat, grid, 2 * order)
    err = max(
        float(np.max(np.abs(c - f))) for c, f in zip(coarse, fine)
    )
    if err > tol:
        raise ValueError(
            f"frequency quadrature error {err:.2e} above {tol} at order {order}; "
            "raise order"
        )
    return TFAtomTable(grid=grid, p0=fine[0], p1=fine[1], a=fine[2], gl_error=err)


@dataclass(frozen=True)
class TFMap:
    """Atom-resolved information map on the time-frequency lattice."""

    grid: AtomGrid
    k: np.ndarray
    l: np.ndarray
    t_center: np.ndarray
    omega_center: np.ndarray
    mi: np.ndarray


def atomic_mi_map(table: TFAtomTable, probe: Probe) -> TFMap:
    """Single-atom mutual information per lattice cell, from the TF table."""
    grid = table.grid
    n = grid.n_atoms
    mi = np.empty(n)
    for i in range(n):
        mi[i] = mutual_info(table.fragment_overlap(np.array([i])), probe)
    atoms = np.array(grid.atoms())
    ks, ls = atoms[:, 0], atoms[:, 1]
    return TFMap(
        grid=grid,
        k=ks,
        l=ls,
        t_center=ls * grid.period,
        omega_center=2.0 * math.pi * (ks + 0.5) / grid.period,
        mi=mi,
    )


def coherent_atomic_decoherence(table: TFAtomTable, nbar: float) -> np.ndarray:
    """|D| each single atom imprints on the qubit for a coherent probe.

    The per-atom weight is p0 + p1 - 2 Re a, the phase-space version of
    |phi^(0) - phi^(1)|^2 summed over the cell.
    """
    if nbar < 0.0:
        raise ValueError(f"nbar must be nonnegative, got {nbar}")
    w = table.p0 + table.p1 - 2.0 * np.real(table.a)
    return np.exp(-0.5 * nbar * np.clip(w, 0.0, None))
