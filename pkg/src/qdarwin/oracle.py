"""Brute-force density-matrix reference for small mode sets.

Everything in :mod:`.info` is a closed form derived by hand.  This module
rebuilds the same quantities the slow, honest way: write out the global pure
state on an explicit occupation basis over a handful of lattice modes, trace
out what is not observed by summing occupations, and diagonalize.  None of
the closed-form machinery is imported, so agreement is evidence, not
tautology.

The probe pulse must be essentially contained in the listed modes: branch
coefficients are renormalized on the restricted set and the discarded mass is
required to be tiny, making the restricted state an exact closed system that
matches the capture-renormalized bookkeeping of the analytic path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .signal import BranchCoefficients

_EIGH_DIM_MAX = 4096
_STATE_DIM_MAX = 1_000_000


@dataclass(frozen=True)
class OracleState:
    """Global pure state (|0>|field_0> + |1>|field_1>)/sqrt(2) on an explicit
    occupation basis over the listed lattice modes.

    basis[i] is the occupation tuple of state-vector slot i, amps[s, i] the
    field amplitude of qubit branch s, mass_residual[s] the branch mass the
    mode restriction discarded (before renormalization), truncation[s] the
    probability weight lost to the per-mode photon cutoffs (coherent states
    only; exactly 0.0 for Fock states).
    """

    modes: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    amps: np.ndarray
    mass_residual: tuple[float, float]
    truncation: tuple[float, float] = (0.0, 0.0)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def mode_positions(self, modes: Sequence[int]) -> list[int]:
        pos = {m: i for i, m in enumerate(self.modes)}
        missing = [m for m in modes if m not in pos]
        if missing:
            raise ValueError(f"modes {missing} not part of this oracle state")
        return [pos[m] for m in modes]


def _restricted_vectors(
    coeffs: BranchCoefficients, modes: Sequence[int], mass_tol: float
) -> tuple[np.ndarray, np.ndarray, tuple[float, float]]:
    flat = coeffs.flat()
    modes = np.asarray(list(modes), dtype=np.int64)
    if modes.size == 0:
        raise ValueError("mode list is empty")
    if len(np.unique(modes)) != modes.size:
        raise ValueError("mode list contains duplicates")
    if modes.min() < 0 or modes.max() >= flat.shape[1]:
        raise ValueError("mode index outside the coefficient table")
    sub = flat[:, modes]
    total = np.sum(np.abs(flat) ** 2, axis=1)
    kept = np.sum(np.abs(sub) ** 2, axis=1)
    residual = total - kept
    if np.any(residual > mass_tol):
        raise ValueError(
            f"restricted modes miss branch mass {residual.tolist()} "
            f"(> {mass_tol}); pass a mode list that contains the pulse"
        )
    c = sub / np.sqrt(kept)[:, None]
    return c, modes, (float(residual[0]), float(residual[1]))


def _compositions(n: int, m: int):
    """All occupation tuples of n photons over m modes, lexicographic."""
    if m == 1:
        yield (n,)
        return
    for head in range(n + 1):
        for rest in _compositions(n - head, m - 1):
            yield (head, *rest)


def build_fock_state(
    coeffs: BranchCoefficients,
    modes: Sequence[int],
    n: int,
    mass_tol: float = 1e-6,
) -> OracleState:
    """n probe photons distributed over the listed modes, per branch.

    Branch s occupies (sum_i c_si a_i^dag)^n / sqrt(n!) |vac> with c_s the
    renormalized restricted coefficients; the amplitude on occupation
    (k_1..k_m) is sqrt(n!/prod k_i!) prod_i c_si^{k_i}.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    c, modes, residual = _restricted_vectors(coeffs, modes, mass_tol)
    m = modes.size
    basis = tuple(_compositions(n, m))
    if len(basis) > _STATE_DIM_MAX:
        raise ValueError(f"occupation basis of {len(basis)} states is too large")
    lgn = special.gammaln(n + 1.0)
    amps = np.empty((2, len(basis)), dtype=complex)
    for i, occ in enumerate(basis):
        mult = math.exp(0.5 * (lgn - sum(special.gammaln(k + 1.0) for k in occ)))
        for s in range(2):
            prod = 1.0 + 0.0j
            for ci, ki in zip(c[s], occ):
                if ki:
                    prod *= ci**ki
            amps[s, i] = mult * prod
    return OracleState(
        modes=tuple(int(x) for x in modes), basis=basis, amps=amps, mass_residual=residual
    )


def build_coherent_state(
    coeffs: BranchCoefficients,
    modes: Sequence[int],
    nbar: float,
    trunc_tol: float = 1e-8,
    mass_tol: float = 1e-6,
) -> OracleState:
    """Product of per-mode coherent states |sqrt(nbar) c_si> per branch.

    Per-mode photon cutoffs grow until the Poisson tail beyond them is below
    trunc_tol split evenly over modes, for both branches; the discarded
    weight is renormalized away and reported per branch.
    """
    if nbar < 0.0:
        raise ValueError(f"nbar must be nonnegative, got {nbar}")
    c, modes, residual = _restricted_vectors(coeffs, modes, mass_tol)
    m = modes.size
    alpha = np.sqrt(nbar) * c
    lam = np.abs(alpha) ** 2

    dims = []
    per_mode_tol = trunc_tol / m
    for i in range(m):
        d = 1
        while max(float(special.pdtrc(d - 1, lam[s, i])) for s in range(2)) > per_mode_tol:
            d += 1
            if d > 512:
                raise ValueError("coherent cutoff search did not converge")
        dims.append(d)
    if math.prod(dims) > _STATE_DIM_MAX:
        raise ValueError(f"product basis of {math.prod(dims)} states is too large")

    basis = []
    for flat_idx in range(math.prod(dims)):
        occ = []
        rem = flat_idx
        for d in reversed(dims):
            occ.append(rem % d)
            rem //= d
        basis.append(tuple(reversed(occ)))
    basis = tuple(basis)

    amps = np.empty((2, len(basis)), dtype=complex)
    truncation = []
    for s in range(2):
        vec = np.ones(1, dtype=complex)
        for i in range(m):
            ks = np.arange(dims[i])
            mode = np.exp(-0.5 * lam[s, i] - 0.5 * special.gammaln(ks + 1.0)) * alpha[
                s, i
            ] ** ks
            vec = np.kron(vec, mode)
        norm2 = float(np.sum(np.abs(vec) ** 2))
        truncation.append(1.0 - norm2)
        amps[s] = vec / math.sqrt(norm2)
    return OracleState(
        modes=tuple(int(x) for x in modes),
        basis=basis,
        amps=amps,
        mass_residual=residual,
        truncation=(truncation[0], truncation[1]),
    )


def partial_trace(
    state: OracleState, frag_modes: Sequence[int]
) -> tuple[np.ndarray, tuple[tuple[int, ...], ...]]:
    """rho on qubit (x) fragment occupations, tracing everything else.

    Returns the (2 d, 2 d) matrix indexed s*d + f and the fragment occupation
    basis of length d.  Tracing is occupation bookkeeping: entries couple
    basis states whose complement occupations match exactly.
    """
    keep = state.mode_positions(frag_modes)
    drop = [i for i in range(len(state.modes)) if i not in keep]

    frag_index: dict[tuple[int, ...], int] = {}
    frag_of = np.empty(state.dim, dtype=np.int64)
    comp_groups: dict[tuple[int, ...], list[int]] = {}
    for i, occ in enumerate(state.basis):
        f = tuple(occ[p] for p in keep)
        if f not in frag_index:
            frag_index[f] = len(frag_index)
        frag_of[i] = frag_index[f]
        comp_groups.setdefault(tuple(occ[p] for p in drop), []).append(i)

    d = len(frag_index)
    if 2 * d > _EIGH_DIM_MAX:
        raise ValueError(f"reduced dimension {2 * d} exceeds {_EIGH_DIM_MAX}")
    rho = np.zeros((2 * d, 2 * d), dtype=complex)
    for members in comp_groups.values():
        # within one complement group the fragment occupations are all
        # distinct, so plain assignment scatters without collisions
        idx = np.asarray(members)
        sub = np.zeros((2, d), dtype=complex)
        sub[:, frag_of[idx]] = state.amps[:, idx]
        flat = sub.reshape(2 * d)
        rho += np.outer(flat, np.conj(flat))
    return 0.5 * rho, tuple(frag_index)


def vn_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits via dense diagonalization."""
    if rho.shape[0] > _EIGH_DIM_MAX:
        raise ValueError(f"dimension {rho.shape[0]} exceeds {_EIGH_DIM_MAX}")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    w = w[w > 1e-14]
    return float(-np.sum(w * np.log2(w)))


@dataclass(frozen=True)
class OracleInfo:
    """Entropies of one fragment cut, with the measurement bound on tap."""

    s_sys: float
    s_frag: float
    s_joint: float
    holevo: Callable[[float, float], float] = field(repr=False)

    @property
    def mi(self) -> float:
        return self.s_sys + self.s_frag - self.s_joint


def oracle_info(state: OracleState, frag_modes: Sequence[int]) -> OracleInfo:
    """Mutual information and Holevo bound for one fragment, by force.

    holevo(theta, phi) projects the qubit on the basis
    cos(t/2)|0> + e^{i p} sin(t/2)|1>, sin(t/2)|0> - e^{i p} cos(t/2)|1>
    and returns S(rho_F) - sum_eps p_eps S(rho_F | eps).
    """
    rho_sf, frag_basis = partial_trace(state, frag_modes)
    d = len(frag_basis)
    blocks = [[rho_sf[s * d : (s + 1) * d, t * d : (t + 1) * d] for t in range(2)] for s in range(2)]
    rho_f = blocks[0][0] + blocks[1][1]
    rho_s = np.array(
        [[np.trace(blocks[0][0]), np.trace(blocks[0][1])],
         [np.trace(blocks[1][0]), np.trace(blocks[1][1])]]
    )
    s_f = vn_entropy(rho_f)

    def holevo(theta: float, phi: float) -> float:
        outcomes = (
            np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi)]),
            np.array([math.sin(theta / 2), -math.cos(theta / 2) * np.exp(1j * phi)]),
        )
        acc = s_f
        for vec in outcomes:
            blk = sum(
                np.conj(vec[s]) * vec[t] * blocks[s][t] for s in range(2) for t in range(2)
            )
            p = float(np.trace(blk).real)
            if p > 1e-15:
                acc -= p * vn_entropy(blk / p)
        return acc

    return OracleInfo(
        s_sys=vn_entropy(rho_s), s_frag=s_f, s_joint=vn_entropy(rho_sf), holevo=holevo
    )
