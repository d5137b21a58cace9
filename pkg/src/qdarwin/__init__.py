"""Quantum Darwinism in a scattered transmission-line wavepacket.

A qubit imprints its pointer state on a propagating probe pulse as a
branch-dependent delay; this package computes how redundantly that record is
written across time-frequency fragments of the outgoing field.
"""

from .aggregation import (
    MICurve,
    PlateauResult,
    build_curve,
    detect_plateau,
    order_naive,
    order_random,
    order_smart,
)
from .fragments import (
    AtomOverlaps,
    Fragment,
    FragmentOverlap,
    OverlapAccumulator,
    PolarLog,
    atom_overlaps,
    coherent_decoherence,
    overlap_stats,
    total_overlap,
)
from .info import (
    CoherentProbe,
    FockPhotonStats,
    FockProbe,
    InfoBreakdown,
    binary_entropy,
    coherent_mutual_info,
    discord_decomposition,
    fock_mutual_info,
    fock_photon_stats,
    frequency_band_overlap,
    holevo_coherent,
    holevo_fock,
    mutual_info,
    optimize_holevo,
    system_entropy,
    time_window_overlap,
)
from .oracle import (
    OracleInfo,
    OracleState,
    build_coherent_state,
    build_fock_state,
    oracle_info,
    partial_trace,
    vn_entropy,
)
from .signal import (
    AtomGrid,
    BranchCoefficients,
    ScatteringModel,
    Wavepacket,
    autocorrelation,
    branch_coefficients,
    build_grid,
    from_arrays,
    gaussian_wavepacket,
)
from .wigner import (
    TFAtomTable,
    TFMap,
    atom_tf_overlaps,
    atomic_mi_map,
    coherent_atomic_decoherence,
    wigner_atom,
    wigner_gaussian,
    wigner_product_mass,
)

__all__ = [
    "AtomGrid",
    "AtomOverlaps",
    "BranchCoefficients",
    "CoherentProbe",
    "FockPhotonStats",
    "FockProbe",
    "Fragment",
    "FragmentOverlap",
    "InfoBreakdown",
    "MICurve",
    "OracleInfo",
    "OracleState",
    "OverlapAccumulator",
    "PlateauResult",
    "PolarLog",
    "ScatteringModel",
    "TFAtomTable",
    "TFMap",
    "Wavepacket",
    "atom_overlaps",
    "atom_tf_overlaps",
    "atomic_mi_map",
    "autocorrelation",
    "binary_entropy",
    "branch_coefficients",
    "build_coherent_state",
    "build_curve",
    "build_fock_state",
    "build_grid",
    "coherent_atomic_decoherence",
    "coherent_decoherence",
    "coherent_mutual_info",
    "detect_plateau",
    "discord_decomposition",
    "fock_mutual_info",
    "fock_photon_stats",
    "frequency_band_overlap",
    "from_arrays",
    "gaussian_wavepacket",
    "holevo_coherent",
    "holevo_fock",
    "mutual_info",
    "optimize_holevo",
    "oracle_info",
    "order_naive",
    "order_random",
    "order_smart",
    "overlap_stats",
    "partial_trace",
    "system_entropy",
    "time_window_overlap",
    "total_overlap",
    "vn_entropy",
    "wigner_atom",
    "wigner_gaussian",
    "wigner_product_mass",
]

__version__ = "0.1.0"
