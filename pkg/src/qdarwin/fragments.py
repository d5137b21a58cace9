"""Fragments of the scattered field and their scalar overlap statistics.

A fragment is the set of Shannon atoms one observer reads out.  Every
information quantity downstream depends on the fragment only through five
numbers: the two branch masses p_F(s) = sum_F |phi^(s)_{k,l}|^2, the complex
interference amplitude a_F = sum_F phi^(1)* phi^(0), and their complements.
This module computes those sums, their normalized coherence
g_F = a_F / sqrt(p_F(0) p_F(1)), and the coherent-probe decoherence factor
D_F = prod_F <q phi^(1)_{kl} | q phi^(0)_{kl}> in log-polar form.

Masses here are raw window sums, bounded by the grid's energy capture per
branch; the capture values ride along so entropy-level code can renormalize
to the closed-system convention when it needs to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signal import BranchCoefficients


@dataclass(frozen=True, eq=False)
class Fragment:
    """A duplicate-free subset of grid atoms, stored as sorted flat indices."""

    indices: np.ndarray
    n_grid: int

    @classmethod
    def from_indices(cls, indices, n_grid: int) -> "Fragment":
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= n_grid):
            raise ValueError(f"atom index outside grid of {n_grid} atoms")
        return cls(indices=idx, n_grid=int(n_grid))

    @classmethod
    def from_atoms(cls, coeffs: BranchCoefficients, atoms) -> "Fragment":
        grid = coeffs.grid
        return cls.from_indices([grid.atom_index(k, l) for k, l in atoms], grid.n_atoms)

    @property
    def size(self) -> int:
        return int(self.indices.size)

    def complement(self) -> "Fragment":
        mask = np.ones(self.n_grid, dtype=bool)
        mask[self.indices] = False
        return Fragment(indices=np.nonzero(mask)[0].astype(np.int64), n_grid=self.n_grid)

    def union(self, other: "Fragment") -> "Fragment":
        if other.n_grid != self.n_grid:
            raise ValueError("fragments live on different grids")
        return Fragment.from_indices(
            np.concatenate([self.indices, other.indices]), self.n_grid
        )


@dataclass(frozen=True)
class PolarLog:
    """A complex number kept as (log-magnitude, phase) to dodge underflow."""

    log_abs: float
    phase: float

    @property
    def abs(self) -> float:
        return math.exp(self.log_abs)

    @property
    def value(self) -> complex:
        return self.abs * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class FragmentOverlap:
    """Raw overlap sums for a fragment, its complement, and the grid totals.

    p0, p1, a describe the fragment; p0c, p1c, ac its complement within the
    window (complements are formed by subtraction from the totals, so the
    additivity identities hold to the last bit).  e0, e1 are the per-branch
    energy captures of the whole window, i.e. the totals the *_norm accessors
    renormalize by.
    """

    p0: float
    p1: float
    a: complex
    p0c: float
    p1c: float
    ac: complex
    e0: float
    e1: float

    @property
    def a_tot(self) -> complex:
        return self.a + self.ac

    @property
    def g(self) -> complex:
        if self.p0 * self.p1 <= 0.0:
            return 0.0 + 0.0j
        return self.a / math.sqrt(self.p0 * self.p1)

    @property
    def gc(self) -> complex:
        if self.p0c * self.p1c <= 0.0:
            return 0.0 + 0.0j
        return self.ac / math.sqrt(self.p0c * self.p1c)

    # Closed-system (capture-renormalized) values.
    @property
    def p0_norm(self) -> float:
        return self.p0 / self.e0

    @property
    def p1_norm(self) -> float:
        return self.p1 / self.e1

    @property
    def p0c_norm(self) -> float:
        return self.p0c / self.e0

    @property
    def p1c_norm(self) -> float:
        return self.p1c / self.e1

    @property
    def a_norm(self) -> complex:
        return self.a / math.sqrt(self.e0 * self.e1)

    @property
    def ac_norm(self) -> complex:
        return self.ac / math.sqrt(self.e0 * self.e1)

    def complement(self) -> "FragmentOverlap":
        return FragmentOverlap(
            p0=self.p0c,
            p1=self.p1c,
            a=self.ac,
            p0c=self.p0,
            p1c=self.p1,
            ac=self.a,
            e0=self.e0,
            e1=self.e1,
        )


def overlap_stats(coeffs: BranchCoefficients, fragment) -> FragmentOverlap:
    """Overlap sums for a fragment given as a Fragment or flat index array.

    Empty fragments are fine and return zeros (with g = 0 by convention).
    """
    idx = fragment.indices if isinstance(fragment, Fragment) else np.asarray(fragment, dtype=np.int64)
    flat = coeffs.flat()
    e0, e1 = coeffs.captures
    if idx.size:
        f0 = flat[0, idx]
        f1 = flat[1, idx]
        p0 = float(np.sum(np.abs(f0) ** 2))
        p1 = float(np.sum(np.abs(f1) ** 2))
        a = complex(np.sum(np.conj(f1) * f0))
    else:
        p0 = p1 = 0.0
        a = 0.0 + 0.0j
    return FragmentOverlap(
        p0=p0, p1=p1, a=a, p0c=e0 - p0, p1c=e1 - p1, ac=coeffs.a_tot - a, e0=e0, e1=e1
    )


def total_overlap(coeffs: BranchCoefficients) -> FragmentOverlap:
    """The full window as a fragment (empty complement)."""
    e0, e1 = coeffs.captures
    return FragmentOverlap(
        p0=e0, p1=e1, a=coeffs.a_tot, p0c=0.0, p1c=0.0, ac=0.0 + 0.0j, e0=e0, e1=e1
    )


class OverlapAccumulator:
    """Grow a fragment one atom at a time with O(1) updates per atom."""

    def __init__(self, coeffs: BranchCoefficients):
        self._flat = coeffs.flat()
        self._e = coeffs.captures
        self._a_tot = coeffs.a_tot
        self._p0 = 0.0
        self._p1 = 0.0
        self._a = 0.0 + 0.0j

    def add(self, index: int) -> None:
        f0 = self._flat[0, index]
        f1 = self._flat[1, index]
        self._p0 += abs(f0) ** 2
        self._p1 += abs(f1) ** 2
        self._a += np.conj(f1) * f0

    def snapshot(self) -> FragmentOverlap:
        e0, e1 = self._e
        return FragmentOverlap(
            p0=self._p0,
            p1=self._p1,
            a=complex(self._a),
            p0c=e0 - self._p0,
            p1c=e1 - self._p1,
            ac=complex(self._a_tot - self._a),
            e0=e0,
            e1=e1,
        )


@dataclass(frozen=True)
class AtomOverlaps:
    """Per-atom statistics, in flat row-major atom order.

    p0, p1, a_re, a_im are capture-renormalized single-atom masses and
    interference amplitudes (the inputs the Fock kernels want); w is the raw
    coherent weight |phi^(0) - phi^(1)|^2 per atom, whose running sum gives
    -2 log|D_F| / nbar.
    """

    p0: np.ndarray
    p1: np.ndarray
    a_re: np.ndarray
    a_im: np.ndarray
    w: np.ndarray
    a_tot_norm: complex
    log_dtot_per_nbar: float  # log|D_tot| at nbar = 1, raw convention


def atom_overlaps(coeffs: BranchCoefficients) -> AtomOverlaps:
    flat = coeffs.flat()
    e0, e1 = coeffs.captures
    root = math.sqrt(e0 * e1)
    aa = np.conj(flat[1]) * flat[0]
    w = np.abs(flat[0] - flat[1]) ** 2
    return AtomOverlaps(
        p0=np.abs(flat[0]) ** 2 / e0,
        p1=np.abs(flat[1]) ** 2 / e1,
        a_re=aa.real / root,
        a_im=aa.imag / root,
        w=w,
        a_tot_norm=complex(coeffs.a_tot / root),
        log_dtot_per_nbar=-0.5 * float(w.sum()),
    )


def coherent_decoherence(ov: FragmentOverlap, nbar: float) -> PolarLog:
    """D_F for a coherent probe of mean photon number nbar = q^2.

    D_F = exp( nbar (conj(a_F) - (p0 + p1)/2) ), the product of per-atom
    coherent-state overlaps <q phi^(1)_kl | q phi^(0)_kl>.  Raw (unrenormalized)
    sums enter here: on a truncated window the untracked tail modes simply
    contribute no distinguishability.
    """
    if nbar < 0.0:
        raise ValueError(f"nbar must be nonnegative, got {nbar}")
    log_abs = nbar * (ov.a.real - 0.5 * (ov.p0 + ov.p1))
    return PolarLog(log_abs=log_abs, phase=-nbar * ov.a.imag)
