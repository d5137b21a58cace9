"""Fragment growth strategies and redundancy curves.

A detector accumulates lattice atoms one at a time; the order decides how
fast the qubit record becomes readable.  Three strategies:

* random: seeded uniform shuffles, averaged over many seeds;
* naive: atoms ranked by their single-atom mutual information (equal-MI
  classes shuffled so the arbitrary internal order carries no signal);
* smart: greedy, each step adding the atom that maximizes the joint mutual
  information of the grown fragment.

Curves report I(S,F) against the captured fraction f of atoms, plus the
plateau detector that classifies them.  The prefix scans run in the
:mod:`._kernels` hot loops; the per-point values agree with the direct
:func:`.info.mutual_info` evaluation to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .fragments import AtomOverlaps, atom_overlaps, overlap_stats, total_overlap
from .info import CoherentProbe, Probe, optimize_holevo, system_entropy
from .signal import AtomGrid, BranchCoefficients

_TIE_TOL = 1e-12


def _per_atom_mi(ao: AtomOverlaps, probe: Probe) -> np.ndarray:
    if isinstance(probe, CoherentProbe):
        return _kernels.coherent_mi_batch(
            -0.5 * probe.nbar * ao.w, probe.nbar * ao.log_dtot_per_nbar
        )
    at = ao.a_tot_norm
    return _kernels.fock_mi_batch(
        ao.p0, ao.p1, ao.a_re, ao.a_im, probe.n, at.real, at.imag
    )


def order_random(grid: AtomGrid, seed: int) -> np.ndarray:
    """Uniform random atom order for one seed."""
    return np.random.default_rng(seed).permutation(grid.n_atoms).astype(np.int64)


def order_naive(coeffs: BranchCoefficients, probe: Probe, seed: int) -> np.ndarray:
    """Atoms by decreasing single-atom mutual information.

    Atoms whose MI values chain within 1e-12 bits of each other form a tie
    class; each class is shuffled with the seed so that lattice enumeration
    order cannot leak into the ranking.
    """
    mi = _per_atom_mi(atom_overlaps(coeffs), probe)
    order = np.argsort(-mi, kind="stable").astype(np.int64)
    vals = mi[order]
    rng = np.random.default_rng(seed)
    start = 0
    for i in range(1, order.size + 1):
        if i == order.size or vals[i - 1] - vals[i] > _TIE_TOL:
            if i - start > 1:
                order[start:i] = rng.permutation(order[start:i])
            start = i
    return order


def order_smart(coeffs: BranchCoefficients, probe: Probe) -> np.ndarray:
    """Greedy order: each step adds the joint-MI argmax atom.

    Ties go to the smallest flat index, i.e. lexicographic (k, l).
    """
    ao = atom_overlaps(coeffs)
    if isinstance(probe, CoherentProbe):
        return _kernels.greedy_coherent(
            ao.w, probe.nbar, probe.nbar * ao.log_dtot_per_nbar
        )
    at = ao.a_tot_norm
    return _kernels.greedy_fock(
        ao.p0, ao.p1, ao.a_re, ao.a_im, probe.n, at.real, at.imag
    )


def _prefix_curve(ao: AtomOverlaps, order: np.ndarray, probe: Probe) -> np.ndarray:
    if isinstance(probe, CoherentProbe):
        return _kernels.curve_coherent(
            ao.w, order, probe.nbar, probe.nbar * ao.log_dtot_per_nbar
        )
    at = ao.a_tot_norm
    return _kernels.curve_fock(
        ao.p0, ao.p1, ao.a_re, ao.a_im, order, probe.n, at.real, at.imag
    )


@dataclass(frozen=True)
class MICurve:
    """I(S,F) against fragment size for one growth strategy.

    sizes runs 1..n_atoms; f = sizes/n_atoms.  For the random strategy mi is
    the seed average and mi_std the sample standard deviation (ddof=1); both
    orderings that are deterministic store the atom order they used.  chi is
    the angle-optimized Holevo information on a log-spaced subset of sizes
    (chi_sizes), present only when requested.
    """

    ordering: str
    sizes: np.ndarray
    f: np.ndarray
    mi: np.ndarray
    mi_over_ss: np.ndarray
    s_sys: float
    mi_std: np.ndarray | None = None
    order: np.ndarray | None = None
    chi_sizes: np.ndarray | None = None
    chi: np.ndarray | None = None
    seed: int | None = None
    n_seeds: int | None = None

    @property
    def n_atoms(self) -> int:
        return int(self.sizes[-1])


def _chi_points(
    coeffs: BranchCoefficients, order: np.ndarray, probe: Probe, sizes: np.ndarray
) -> np.ndarray:
    out = np.empty(sizes.size)
    for i, m in enumerate(sizes):
        ov = overlap_stats(coeffs, order[:m])
        out[i] = optimize_holevo(ov, probe).holevo
    return out


def build_curve(
    coeffs: BranchCoefficients,
    probe: Probe,
    ordering: str | np.ndarray = "smart",
    *,
    seed: int = 0,
    n_seeds: int = 64,
    holevo: bool = False,
    n_chi: int = 16,
) -> MICurve:
    """Redundancy curve for one probe and growth strategy.

    ordering is "smart", "naive", "random", or an explicit atom order; the
    random strategy averages n_seeds shuffles seeded seed, seed+1, ....
    holevo=True adds the optimized chi on n_chi log-spaced fragment sizes
    (averaged over shuffles for the random strategy).
    """
    ao = atom_overlaps(coeffs)
    m = ao.p0.size
    sizes = np.arange(1, m + 1, dtype=np.int64)
    f = sizes / m
    ss = system_entropy(total_overlap(coeffs), probe)
    chi_sizes = None
    if holevo:
        chi_sizes = np.unique(
            np.rint(np.geomspace(1, m, min(n_chi, m))).astype(np.int64)
        )

    if isinstance(ordering, np.ndarray):
        label, orders = "explicit", [np.asarray(ordering, dtype=np.int64)]
    elif ordering == "random":
        label = "random"
        orders = [order_random(coeffs.grid, seed + i) for i in range(n_seeds)]
    elif ordering == "naive":
        label, orders = "naive", [order_naive(coeffs, probe, seed)]
    elif ordering == "smart":
        label, orders = "smart", [order_smart(coeffs, probe)]
    else:
        raise ValueError(f"unknown ordering {ordering!r}")

    curves = np.stack([_prefix_curve(ao, o, probe) for o in orders])
    mi = curves.mean(axis=0)
    mi_std = curves.std(axis=0, ddof=1) if len(orders) > 1 else None
    chi = None
    if holevo:
        chis = np.stack([_chi_points(coeffs, o, probe, chi_sizes) for o in orders])
        chi = chis.mean(axis=0)

    ratio = mi / ss if ss > 0.0 else np.full(m, np.nan)
    return MICurve(
        ordering=label,
        sizes=sizes,
        f=f,
        mi=mi,
        mi_over_ss=ratio,
        s_sys=ss,
        mi_std=mi_std,
        order=orders[0] if len(orders) == 1 else None,
        chi_sizes=chi_sizes,
        chi=chi,
        seed=seed,
        n_seeds=len(orders) if label == "random" else None,
    )


@dataclass(frozen=True)
class PlateauResult:
    """Widest classical plateau of a redundancy curve.

    start/stop index the curve arrays as a half-open range; width_fraction is
    its length over the total atom count.
    """

    present: bool
    start: int | None
    stop: int | None
    width_fraction: float


def detect_plateau(
    curve: MICurve, delta: float = 0.1, min_width_fraction: float = 0.25
) -> PlateauResult:
    """Scan for a contiguous run of sizes with |I/S(S) - 1| <= delta.

    The plateau is present when the widest such run spans at least
    min_width_fraction of all atoms.
    """
    ok = np.abs(curve.mi_over_ss - 1.0) <= delta
    ok &= np.isfinite(curve.mi_over_ss)
    best_len, best_start, run_start = 0, None, None
    for i, flag in enumerate(ok):
        if flag and run_start is None:
            run_start = i
        if (not flag or i == ok.size - 1) and run_start is not None:
            end = i + 1 if flag else i
            if end - run_start > best_len:
                best_len, best_start = end - run_start, run_start
            run_start = None
    if best_len == 0:
        return PlateauResult(present=False, start=None, stop=None, width_fraction=0.0)
    frac = best_len / ok.size
    return PlateauResult(
        present=frac >= min_width_fraction,
        start=best_start,
        stop=best_start + best_len,
        width_fraction=frac,
    )
