import csv
import json
import subprocess
import sys

import numpy as np
import pytest

import qdarwin as qd
from qdarwin.cli import ConfigError, load_config, main

BASE = """
[signal]
omega0 = 8.975979010256552
sigma = 1.0
tau0 = 2.325
tau1 = 2.925

[grid]
period = 1.05
eps_grid = 1e-4

[[probes]]
kind = "fock"
n = 2

[[probes]]
kind = "coherent"
nbar = 1.0

[curves]
orderings = ["smart", "random"]
seed = 0
n_seeds = 3
holevo = true
n_chi = 3
"""


@pytest.fixture()
def cfg_path(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text(BASE)
    return p


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestConfig:
    def test_defaults_and_required(self, cfg_path):
        cfg = load_config(cfg_path)
        assert cfg.period == 1.05
        assert cfg.eps_grid == 1e-4
        assert cfg.orderings == ("smart", "random")
        assert cfg.n_chi == 3
        assert cfg.emit_maps is False
        assert cfg.max_atoms == 4096

    def test_missing_table(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text("[grid]\nperiod = 1.0\n")
        with pytest.raises(ConfigError, match=r"\[signal\].*required"):
            load_config(p)

    def test_missing_key(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text(BASE.replace("tau1 = 2.925\n", ""))
        with pytest.raises(ConfigError, match="tau1.*required"):
            load_config(p)

    def test_wrong_type(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text(BASE.replace('sigma = 1.0', 'sigma = "one"'))
        with pytest.raises(ConfigError, match="expected float, got str"):
            load_config(p)

    def test_unknown_ordering(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text(BASE.replace('"random"', '"greedy"'))
        with pytest.raises(ConfigError, match="not one of random, naive, smart"):
            load_config(p)

    def test_no_probes(self, tmp_path):
        p = tmp_path / "bad.toml"
        body = "\n".join(
            ln for ln in BASE.splitlines() if not ln.startswith(("[[probes", "kind", "n ", "nbar"))
        )
        p.write_text(body)
        with pytest.raises(ConfigError, match="at least one probe"):
            load_config(p)

    def test_error_exit_code(self, tmp_path, capsys):
        p = tmp_path / "bad.toml"
        p.write_text("[signal]\n")
        rc = main(["curve", "--config", str(p), "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "config error:" in capsys.readouterr().err


class TestCurveCommand:
    def test_outputs_and_values(self, cfg_path, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["curve", "--config", str(cfg_path), "--out", str(out)]) == 0
        names = sorted(p.name for p in out.glob("*.csv"))
        assert names == [
            "curve_coherent_nbar1_random.csv",
            "curve_coherent_nbar1_smart.csv",
            "curve_fock_n2_random.csv",
            "curve_fock_n2_smart.csv",
        ]
        printed = capsys.readouterr().out
        for n in names:
            assert f"wrote {out / n}" in printed

        # spot-check one curve against the library path
        wp = qd.gaussian_wavepacket(8.975979010256552, 1.0)
        scat = qd.ScatteringModel(2.325, 2.925)
        grid = qd.build_grid(wp, scat, 1.05, eps_grid=1e-4)
        coeffs = qd.branch_coefficients(wp, scat, grid)
        curve = qd.build_curve(coeffs, qd.FockProbe(2), "smart", holevo=True, n_chi=3)
        _, rows = _rows(out / "curve_fock_n2_smart.csv")
        assert [float(r[3]) for r in rows] == pytest.approx(curve.mi, abs=0)

    def test_seed_override_touches_random_only(self, cfg_path, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["curve", "--config", str(cfg_path), "--out", str(a)])
        main(["curve", "--config", str(cfg_path), "--out", str(b), "--seed", "7"])
        same = "curve_fock_n2_smart.csv"
        diff = "curve_fock_n2_random.csv"
        assert (a / same).read_bytes() == (b / same).read_bytes()
        assert (a / diff).read_bytes() != (b / diff).read_bytes()

    def test_rerun_is_byte_identical(self, cfg_path, tmp_path):
        out = tmp_path / "out"
        main(["curve", "--config", str(cfg_path), "--out", str(out)])
        first = {p.name: p.read_bytes() for p in out.iterdir()}
        main(["curve", "--config", str(cfg_path), "--out", str(out)])
        assert {p.name: p.read_bytes() for p in out.iterdir()} == first


class TestOtherCommands:
    def test_holevo_discord_identity(self, cfg_path, tmp_path):
        out = tmp_path / "out"
        assert main(["holevo", "--config", str(cfg_path), "--out", str(out)]) == 0
        header, rows = _rows(out / "holevo_fock_n2_smart.csv")
        i_mi, i_chi, i_disc = (header.index(c) for c in ("mi_bits", "chi_bits", "discord_bits"))
        for r in rows:
            assert float(r[i_disc]) == float(r[i_mi]) - float(r[i_chi])

    def test_map_command(self, cfg_path, tmp_path):
        cfg2 = cfg_path.read_text() + "\n[maps]\norder = 48\ntol = 1e-6\n"
        p = cfg_path.with_name("maps.toml")
        p.write_text(cfg2)
        out = tmp_path / "out"
        assert main(["map", "--config", str(p), "--out", str(out)]) == 0
        header, rows = _rows(out / "map_fock_n2.csv")
        assert header[0] == "k" and len(rows) == 6

    def test_sweep_manifest(self, cfg_path, tmp_path):
        cfg2 = cfg_path.read_text() + "\n[maps]\n"
        p = cfg_path.with_name("sweep.toml")
        p.write_text(cfg2)
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(p), "--out", str(out)]) == 0
        man = json.loads((out / "manifest.json").read_text())
        assert man["schema_version"] == 1
        assert man["kind"] == "sweep"
        assert man["files"] == sorted(man["files"])
        assert len(man["files"]) == 2 * 2 + 2  # probes x orderings + maps
        for name in man["files"]:
            assert (out / name).is_file()
            assert (out / name).with_suffix(".json").is_file()


class TestOracleCheck:
    def _config(self, tmp_path, tol):
        body = BASE + f"\n[oracle]\nn = [1]\nmass_tol = 1e-3\ntol = {tol}\n"
        p = tmp_path / "oracle.toml"
        p.write_text(body)
        return p

    def test_passes_at_sane_tolerance(self, tmp_path, capsys):
        out = tmp_path / "out"
        p = self._config(tmp_path, "1e-6")
        assert main(["oracle-check", "--config", str(p), "--out", str(out)]) == 0
        report = json.loads((out / "oracle_check.json").read_text())
        assert report["pass"] is True
        assert report["n_atoms"] == 6
        assert report["results"][0]["n_fragments"] == 63
        assert "ok" in capsys.readouterr().out

    def test_fails_at_absurd_tolerance(self, tmp_path, capsys):
        out = tmp_path / "out"
        p = self._config(tmp_path, "1e-20")
        assert main(["oracle-check", "--config", str(p), "--out", str(out)]) == 1
        report = json.loads((out / "oracle_check.json").read_text())
        assert report["pass"] is False
        assert "FAIL" in capsys.readouterr().out


def test_console_entry_point(cfg_path, tmp_path):
    out = tmp_path / "out"
    proc = subprocess.run(
        [sys.executable, "-m", "qdarwin.cli", "curve", "--config", str(cfg_path), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "curve_fock_n2_smart.csv").is_file()
