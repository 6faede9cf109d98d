import numpy as np
import pytest

from schmidt_cert import (
    ResourceError,
    apply_gates_to_vector,
    brickwork_circuit,
    brickwork_gates,
    enumerate_all,
    haar_unitary,
    load_unitary,
    save_unitary,
)
from schmidt_cert.cm import pauli_sandwich
from schmidt_cert.seeding import derive_rng


class TestHaar:
    @pytest.mark.parametrize("dim", [2, 4, 16, 64])
    def test_unitarity(self, dim, rng):
        u = haar_unitary(dim, rng).entries
        assert np.abs(u @ u.conj().T - np.eye(dim)).max() <= 1e-10

    def test_first_moment(self):
        # E[U |0><0| U^dag] = I/2; 20000 draws, entrywise within 0.02
        rng = np.random.default_rng(7)
        acc = np.zeros((2, 2), dtype=complex)
        draws = 20_000
        for _ in range(draws):
            col = haar_unitary(2, rng).entries[:, 0]
            acc += np.outer(col, col.conj())
        assert np.abs(acc / draws - np.eye(2) / 2).max() < 0.02

    def test_seed_determinism(self):
        a = haar_unitary(8, np.random.default_rng(3)).entries
        b = haar_unitary(8, np.random.default_rng(3)).entries
        assert np.array_equal(a, b)

    def test_rejects_dim_one(self, rng):
        with pytest.raises(ValueError):
            haar_unitary(1, rng)


class TestBrickwork:
    def test_depth_zero_rejected(self, rng):
        with pytest.raises(ValueError):
            brickwork_gates(4, 0, rng)

    @pytest.mark.parametrize("m,depth", [(2, 1), (3, 3), (6, 6)])
    def test_unitarity(self, m, depth, rng):
        u = brickwork_circuit(m, depth, rng).entries
        assert np.abs(u @ u.conj().T - np.eye(1 << m)).max() <= 1e-9

    def test_depth_one_is_single_even_layer(self, rng):
        gates = brickwork_gates(5, 1, rng)
        assert [q for _, q in gates] == [0, 2]

    def test_dense_guard(self, rng):
        with pytest.raises(ResourceError):
            brickwork_circuit(8, 2, rng)

    def test_gate_streaming_matches_dense(self, rng):
        state_rng = np.random.default_rng(11)
        vec = state_rng.standard_normal(16) + 1j * state_rng.standard_normal(16)
        vec /= np.linalg.norm(vec)
        gates = brickwork_gates(4, 3, np.random.default_rng(5))
        dense = brickwork_circuit(4, 3, np.random.default_rng(5)).entries
        assert np.abs(apply_gates_to_vector(vec, gates, 4) - dense @ vec).max() < 1e-12

    def test_anticoncentration_on_vacuum(self):
        # Monte-Carlo calibration (tools/calibrate.py, fixture
        # calibration/calibration.json): per-seed max_P |<P>| over the 4095
        # non-identity Paulis ranged 0.41..0.64 for depth 6 on 6 qubits, and
        # Haar states land in the same band; a computational-basis state
        # scores exactly 1.0.  Frozen gate: <= 0.7 in at least 90% of seeds.
        paulis = enumerate_all(6, include_identity=False)
        ok = 0
        for seed in range(20):
            rng = derive_rng(2026, "brickwork-anticoncentration", seed)
            vec = np.zeros(64, dtype=complex)
            vec[0] = 1.0
            vec = apply_gates_to_vector(vec, brickwork_gates(6, 6, rng), 6)
            col = vec.reshape(64, 1)
            worst = max(abs(pauli_sandwich(col, p)[0, 0]) for p in paulis)
            ok += worst <= 0.7
        assert ok >= 18

    def test_first_moment_approaches_haar(self):
        # depth >= m: E[U |0><0| U^dag] entrywise within 0.05 of I/4
        rng = np.random.default_rng(21)
        acc = np.zeros((4, 4), dtype=complex)
        draws = 4000
        for _ in range(draws):
            vec = np.zeros(4, dtype=complex)
            vec[0] = 1.0
            vec = apply_gates_to_vector(vec, brickwork_gates(2, 2, rng), 2)
            acc += np.outer(vec, vec.conj())
        assert np.abs(acc / draws - np.eye(4) / 4).max() < 0.05


class TestUnitaryFile:
    def test_round_trip(self, tmp_path, rng):
        u = haar_unitary(4, rng)
        path = tmp_path / "u.txt"
        save_unitary(u, path)
        loaded = load_unitary(path)
        assert np.abs(loaded.entries - u.entries).max() < 1e-15
