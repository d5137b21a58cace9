"""Deterministic CSV/JSON emission for curves and maps.

Output is meant to be diffed and consumed by external plotting: RFC 4180 CSV
through the stdlib csv writer, floats at 17 significant digits so values
round-trip exactly, a JSON sidecar next to every CSV carrying the schema
version and run parameters, and no timestamps or environment echoes anywhere.
Rerunning the same configuration must reproduce every byte, so files are
written to a temporary sibling and atomically renamed into place.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .aggregation import MICurve
from .info import CoherentProbe, FockProbe, Probe
from .signal import AtomGrid
from .wigner import TFMap

SCHEMA_VERSION = 1

CURVE_COLUMNS = ["f", "k", "l", "mi_bits", "mi_over_ss", "mi_std", "chi_bits"]
MAP_COLUMNS = ["k", "l", "t_center", "omega_center", "mi_bits"]
HOLEVO_COLUMNS = [
    "f",
    "size",
    "mi_bits",
    "chi_bits",
    "cond_mi_bits",
    "discord_bits",
    "theta",
    "phi",
]


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def probe_to_dict(probe: Probe) -> dict:
    if isinstance(probe, CoherentProbe):
        return {"kind": "coherent", "nbar": probe.nbar}
    return {"kind": "fock", "n": probe.n}


def probe_from_dict(d: dict) -> Probe:
    kind = d.get("kind")
    if kind == "coherent":
        return CoherentProbe(float(d["nbar"]))
    if kind == "fock":
        return FockProbe(int(d["n"]))
    raise ValueError(f"probe kind must be 'coherent' or 'fock', got {kind!r}")


def _grid_meta(grid: AtomGrid) -> dict:
    return {
        "period": grid.period,
        "k_range": list(grid.k_range),
        "l_range": list(grid.l_range),
        "n_atoms": grid.n_atoms,
        "energy_capture": list(grid.energy_capture),
        "eps_grid": grid.eps_grid,
    }


def _write_sidecar(csv_path: Path, payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
    _atomic_write(csv_path.with_suffix(".json"), text)


def write_curve_csv(
    path: str | Path,
    curve: MICurve,
    grid: AtomGrid,
    probe: Probe,
    meta: dict | None = None,
) -> Path:
    """Curve CSV plus JSON sidecar; returns the CSV path.

    One row per fragment size.  k and l identify the atom added at that step
    and stay empty for seed-averaged random curves, as do mi_std for
    deterministic ones and chi_bits away from the sizes it was evaluated at.
    """
    path = Path(path)
    atoms = np.array(grid.atoms())
    chi_at: dict[int, float] = {}
    if curve.chi is not None:
        chi_at = {int(s): float(c) for s, c in zip(curve.chi_sizes, curve.chi)}

    rows = []
    for i in range(curve.sizes.size):
        size = int(curve.sizes[i])
        if curve.order is not None:
            k, l = (str(int(v)) for v in atoms[curve.order[i]])
        else:
            k, l = "", ""
        rows.append(
            [
                _fmt(curve.f[i]),
                k,
                l,
                _fmt(curve.mi[i]),
                _fmt(curve.mi_over_ss[i]) if np.isfinite(curve.mi_over_ss[i]) else "",
                _fmt(curve.mi_std[i]) if curve.mi_std is not None else "",
                _fmt(chi_at[size]) if size in chi_at else "",
            ]
        )

    buf = []
    out = csv.writer(_ListLines(buf), lineterminator="\r\n")
    out.writerow(CURVE_COLUMNS)
    out.writerows(rows)
    _atomic_write(path, "".join(buf))

    payload = {
        "kind": "curve",
        "columns": CURVE_COLUMNS,
        "probe": probe_to_dict(probe),
        "ordering": curve.ordering,
        "s_sys_bits": curve.s_sys,
        "seed": curve.seed,
        "n_seeds": curve.n_seeds,
        "grid": _grid_meta(grid),
    }
    if meta:
        payload.update(meta)
    _write_sidecar(path, payload)
    return path


def write_map_csv(
    path: str | Path, tfmap: TFMap, probe: Probe, meta: dict | None = None
) -> Path:
    """Atom-resolved MI map CSV plus JSON sidecar; returns the CSV path."""
    path = Path(path)
    rows = [
        [
            str(int(tfmap.k[i])),
            str(int(tfmap.l[i])),
            _fmt(tfmap.t_center[i]),
            _fmt(tfmap.omega_center[i]),
            _fmt(tfmap.mi[i]),
        ]
        for i in range(tfmap.mi.size)
    ]
    buf = []
    out = csv.writer(_ListLines(buf), lineterminator="\r\n")
    out.writerow(MAP_COLUMNS)
    out.writerows(rows)
    _atomic_write(path, "".join(buf))

    payload = {
        "kind": "map",
        "columns": MAP_COLUMNS,
        "probe": probe_to_dict(probe),
        "grid": _grid_meta(tfmap.grid),
    }
    if meta:
        payload.update(meta)
    _write_sidecar(path, payload)
    return path


def write_holevo_csv(
    path: str | Path,
    sizes: np.ndarray,
    breakdowns: list,
    n_atoms: int,
    grid: AtomGrid,
    probe: Probe,
    ordering: str,
    meta: dict | None = None,
) -> Path:
    """Measurement-optimized accessibility along an ordering, one row per size."""
    path = Path(path)
    rows = []
    for size, bd in zip(sizes, breakdowns):
        rows.append(
            [
                _fmt(size / n_atoms),
                str(int(size)),
                _fmt(bd.mi),
                _fmt(bd.holevo),
                _fmt(bd.cond_mi) if bd.cond_mi is not None else "",
                _fmt(bd.discord),
                _fmt(bd.optimal_angles[0]),
                _fmt(bd.optimal_angles[1]),
            ]
        )
    buf = []
    out = csv.writer(_ListLines(buf), lineterminator="\r\n")
    out.writerow(HOLEVO_COLUMNS)
    out.writerows(rows)
    _atomic_write(path, "".join(buf))

    payload = {
        "kind": "holevo",
        "columns": HOLEVO_COLUMNS,
        "probe": probe_to_dict(probe),
        "ordering": ordering,
        "grid": _grid_meta(grid),
    }
    if meta:
        payload.update(meta)
    _write_sidecar(path, payload)
    return path


class _ListLines:
    """File-like shim collecting csv.writer output into a list of strings."""

    def __init__(self, sink: list):
        self.sink = sink

    def write(self, s: str) -> None:
        self.sink.append(s)
