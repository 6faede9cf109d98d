import json
from pathlib import Path

import numpy as np
import pytest

from schmidt_cert.cli import main
from schmidt_cert.errors import ConfigError
from schmidt_cert.experiments import (
    ExperimentConfig,
    build_state,
    run_certify,
    run_complexity_scan,
    run_fermion,
    run_fig2,
    run_mu_scan,
)


def small_fig2(out, seed=7, **overrides):
    raw = {
        "seed": seed,
        "out_dir": str(out),
        "n_seeds": 2,
        "n_A": 3,
        "n_B": 3,
        "chi": 2,
        "k_values": [8],
        "top_k": 4,
    }
    raw.update(overrides)
    return ExperimentConfig.from_dict("fig2", raw)


class TestConfig:
    def test_rejects_unknown_keys(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict("fig2", {"not_a_key": 1})

    def test_rejects_unknown_experiment(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict("fig9", {})

    def test_rejects_bad_rotation(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict("fig2", {"rotations": ["fourier"]})

    def test_rejects_bad_noise(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict("fig2", {"noise": {"mode": "shots"}})

    def test_build_state_kinds(self, tmp_path, rng):
        from schmidt_cert import save_state, maximally_entangled

        assert build_state({"kind": "max_ent", "chi": 2, "n_A": 2, "n_B": 2}).n == 4
        assert build_state(
            {"kind": "random_schmidt", "spectrum": [0.5, 0.5], "n_A": 2, "n_B": 2, "seed": 3}
        ).n == 4
        path = tmp_path / "s.txt"
        save_state(maximally_entangled(2, 1, 1), path)
        assert build_state({"kind": "file", "path": str(path)}).n == 2
        with pytest.raises(ConfigError):
            build_state({"kind": "werner"})


class TestFig2Runner:
    def test_outputs_and_full_series(self, tmp_path):
        result = run_fig2(small_fig2(tmp_path))
        rows = Path(result["csv"]).read_text().strip().splitlines()
        assert rows[0] == "experiment,state,rotation,k,seed,sv_index,sv_value"
        full_rows = [r for r in rows[1:] if ",full," in r]
        # chi^2 = 4 identical normalized values for the full CM series
        values = {float(r.rsplit(",", 1)[1]) for r in full_rows}
        assert len(full_rows) == 4 and max(values) - min(values) < 1e-12
        reports = json.loads(Path(result["reports"]).read_text())
        assert len(reports) == 2 * 1 * 2  # seeds x K x rotations

    def test_byte_identical_reruns(self, tmp_path):
        r1 = run_fig2(small_fig2(tmp_path / "a"))
        r2 = run_fig2(small_fig2(tmp_path / "b"))
        assert Path(r1["csv"]).read_bytes() == Path(r2["csv"]).read_bytes()
        assert Path(r1["reports"]).read_bytes() == Path(r2["reports"]).read_bytes()

    def test_threads_do_not_change_output(self, tmp_path):
        r1 = run_fig2(small_fig2(tmp_path / "a"))
        r2 = run_fig2(small_fig2(tmp_path / "b", threads=2))
        assert Path(r1["csv"]).read_bytes() == Path(r2["csv"]).read_bytes()

    def test_seed_changes_output(self, tmp_path):
        r1 = run_fig2(small_fig2(tmp_path / "a", seed=1))
        r2 = run_fig2(small_fig2(tmp_path / "b", seed=2))
        assert Path(r1["csv"]).read_bytes() != Path(r2["csv"]).read_bytes()


class TestFermionRunner:
    def test_small_chain(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "fermion",
            {
                "seed": 3,
                "out_dir": str(tmp_path),
                "length": 6,
                "interactions": [0.0],
                "k_values": [8],
                "n_seeds": 2,
                "top_k": 8,
            },
        )
        result = run_fermion(cfg)
        assert result["summary"]["U=0"]["chi"] >= 1
        rows = Path(result["csv"]).read_text().strip().splitlines()
        assert len(rows) > 1
        assert Path(tmp_path / "fermion_summary.json").exists()


class TestScanRunners:
    def test_complexity_scan_schema(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "complexity-scan",
            {
                "seed": 5,
                "out_dir": str(tmp_path),
                "chis": [1, 2],
                "local_qubits": [3],
                "k_values": [4, 16],
                "trials": 5,
            },
        )
        rows = Path(run_complexity_scan(cfg)["csv"]).read_text().strip().splitlines()
        assert rows[0] == "chi,d,K,rotation,trials,successes,mu0_or_bound"
        assert len(rows) == 1 + 2 * 2 * 2
        # chi = 1 always succeeds: the identity row alone carries the rank
        for row in rows[1:]:
            chi, d, k, basis, trials, successes, mu = row.split(",")
            if chi == "1":
                assert successes == trials
            if basis == "computational":
                assert float(mu) == float(d) * float(chi)

    def test_mu_scan(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "mu-scan",
            {
                "seed": 5,
                "out_dir": str(tmp_path),
                "chis": [2],
                "local_qubits": [3],
                "n_draws": 4,
            },
        )
        result = run_mu_scan(cfg)
        rows = Path(result["csv"]).read_text().strip().splitlines()
        assert rows[0] == "chi,d,basis,trial,mu"
        comp = [r for r in rows[1:] if ",computational," in r]
        assert all(float(r.rsplit(",", 1)[1]) == 16.0 for r in comp)  # d*chi = 8*2
        assert "chi=2,d=8" in result["summary"]


class TestCertifyRunner:
    def test_writes_validated_report(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            "certify",
            {
                "seed": 9,
                "out_dir": str(tmp_path),
                "state": {"kind": "max_ent", "chi": 2, "n_A": 2, "n_B": 2},
                "k": 10,
                "rotation": "haar",
            },
        )
        result = run_certify(cfg)
        payload = json.loads(Path(result["report"]).read_text())
        assert payload["certified_chi"] == result["certified_chi"] <= 2
        assert payload["rotation_descriptor"] == "haar"


class TestCli:
    def test_exit_zero_and_output(self, tmp_path, capsys):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"chis": [1], "local_qubits": [2], "n_draws": 2}))
        code = main(
            ["mu-scan", "--config", str(config), "--seed", "4", "--out", str(tmp_path / "o")]
        )
        assert code == 0
        assert (tmp_path / "o" / "mu_scan.csv").exists()

    def test_config_error_exit_two(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"bogus": True}))
        assert main(["fig2", "--config", str(config)]) == 2

    def test_missing_config_exit_two(self, tmp_path):
        assert main(["fig2", "--config", str(tmp_path / "nope.json")]) == 2

    def test_resource_error_exit_three(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"local_qubits": [7], "chis": [2], "n_draws": 2}))
        assert main(["mu-scan", "--config", str(config), "--out", str(tmp_path / "o")]) == 3

    def test_cli_reruns_are_byte_identical(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(
            json.dumps({"chis": [2], "local_qubits": [3], "k_values": [6], "trials": 3})
        )
        for sub in ("a", "b"):
            assert (
                main(
                    [
                        "complexity-scan",
                        "--config",
                        str(config),
                        "--seed",
                        "11",
                        "--out",
                        str(tmp_path / sub),
                    ]
                )
                == 0
            )
        assert (tmp_path / "a" / "complexity.csv").read_bytes() == (
            tmp_path / "b" / "complexity.csv"
        ).read_bytes()
