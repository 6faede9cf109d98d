import numpy as np
import pytest

from conftest import brute_force_full_cm, dense_pair_expectation
from schmidt_cert import (
    NoiseModel,
    PauliOp,
    PauliSet,
    ResourceError,
    UnsupportedConfigurationError,
    build_full_cm,
    build_projected_cm,
    build_UL,
    enumerate_all,
    frame_matrix,
    frame_vectors,
    haar_unitary,
    load_projected_cm,
    maximally_entangled,
    mu0,
    mu0_exact,
    mu0_sampled_bound,
    projected_cm_spectrum,
    random_schmidt_state,
    sample_pauli_set,
    save_projected_cm,
    schmidt_decompose,
)
from schmidt_cert.certify import numerical_rank, singular_spectrum
from schmidt_cert.state import SchmidtData, StateVector


def pauli_set_from_strings(*texts):
    members = tuple(PauliOp.from_string(t) for t in texts)
    return PauliSet(members, members[0].m, len(members))


class TestSamplePauliSet:
    def test_k64_m6_duplicates_are_rare(self):
        # birthday bound: expected collisions 64^2 / (2 * 4095) ~ 0.5 per set
        distinct = [
            sample_pauli_set(6, 64, np.random.default_rng([5, s])).distinct
            for s in range(20)
        ]
        assert sum(d >= 63 for d in distinct) >= 10
        assert min(d <= 64 for d in distinct)

    def test_k1(self, rng):
        s = sample_pauli_set(3, 1, rng)
        assert s.distinct == 1 and not s.members[0].is_identity

    def test_seed_determinism(self):
        a = sample_pauli_set(4, 30, np.random.default_rng(8))
        b = sample_pauli_set(4, 30, np.random.default_rng(8))
        assert a.members == b.members

    def test_rejects_identity_member(self):
        with pytest.raises(ValueError):
            PauliSet((PauliOp.identity(2),), 2, 1)


class TestBuildProjectedCM:
    def test_bell_with_z(self):
        cm = build_projected_cm(maximally_entangled(2, 1, 1), pauli_set_from_strings("Z"))
        assert cm.labels == ("I", "Z")
        assert np.abs(cm.entries - np.eye(2)).max() < 1e-12

    def test_identity_entry_is_one(self, rng):
        psi = random_schmidt_state([0.5, 0.3, 0.2], 3, 3, rng)
        cm = build_projected_cm(psi, sample_pauli_set(3, 10, rng))
        assert abs(cm.entries[0, 0] - 1) < 1e-12

    def test_shots_mode_large_n(self, rng):
        psi = maximally_entangled(2, 1, 1)
        cm = build_projected_cm(psi, pauli_set_from_strings("Z"), NoiseModel.shots(10**6), rng)
        assert abs(cm.entries[1, 1] - 1.0) <= 0.005  # binomial se at p=(1+T)/2
        assert abs(cm.entries[0, 1]) <= 0.005

    def test_unequal_bipartition_unsupported(self, rng):
        psi = random_schmidt_state([1.0], 1, 2, rng)
        with pytest.raises(UnsupportedConfigurationError):
            build_projected_cm(psi, sample_pauli_set(1, 2, rng))

    def test_matches_entrywise_expectations(self, rng):
        from schmidt_cert import pauli_pair_expectation

        psi = random_schmidt_state([0.6, 0.4], 2, 2, rng)
        s = sample_pauli_set(2, 8, rng)
        cm = build_projected_cm(psi, s)
        paulis = (PauliOp.identity(2),) + s.members
        for i, p in enumerate(paulis):
            for j, q in enumerate(paulis):
                assert abs(cm.entries[i, j] - pauli_pair_expectation(psi, p, q)) < 1e-12

    def test_gaussian_std_matches_sigma(self):
        # per-entry deviations across 10000 builds of a tiny CM
        psi = maximally_entangled(2, 1, 1)
        s = pauli_set_from_strings("Z")
        exact = build_projected_cm(psi, s).entries
        sigma = 0.05
        devs = []
        master = np.random.default_rng(17)
        for _ in range(10_000):
            noisy = build_projected_cm(psi, s, NoiseModel.gaussian(sigma), master)
            devs.append(noisy.entries - exact)
        std = np.asarray(devs).std(axis=0)
        assert np.abs(std - sigma).max() < 0.05 * sigma

    def test_noise_is_reproducible(self):
        psi = maximally_entangled(2, 2, 2)
        s = sample_pauli_set(2, 6, np.random.default_rng(3))
        a = build_projected_cm(psi, s, NoiseModel.shots(100), np.random.default_rng(4))
        b = build_projected_cm(psi, s, NoiseModel.shots(100), np.random.default_rng(4))
        assert np.array_equal(a.entries, b.entries)


class TestBuildFullCM:
    def test_product_state_rank_one(self, rng):
        full = build_full_cm(random_schmidt_state([1.0], 2, 2, rng))
        svals = singular_spectrum(full)
        assert numerical_rank(svals, 1e-8) == 1

    def test_bell_full_cm_against_brute_force(self):
        psi = maximally_entangled(2, 1, 1)
        full = build_full_cm(psi)
        assert np.abs(full - brute_force_full_cm(psi)).max() < 1e-12
        assert numerical_rank(singular_spectrum(full), 1e-8) == 4

    def test_matches_brute_force_random_state(self, rng):
        psi = random_schmidt_state([0.7, 0.3], 2, 2, rng)
        assert np.abs(build_full_cm(psi) - brute_force_full_cm(psi)).max() < 1e-10

    @pytest.mark.parametrize("m,chi", [(2, 2), (3, 4), (4, 3)])
    def test_frobenius_norm_is_d(self, m, chi, rng):
        # the quoted "Frobenius 2-norm d^2" refers to the squared norm:
        # sum of squared entries of the full CM of a pure state is exactly d^2
        lam = rng.dirichlet(np.ones(chi) * 3)
        psi = random_schmidt_state(np.sort(lam)[::-1], m, m, rng)
        full = build_full_cm(psi)
        assert abs(np.linalg.norm(full) - (1 << m)) < 1e-8

    def test_unequal_split_unsupported(self, rng):
        with pytest.raises(UnsupportedConfigurationError):
            build_full_cm(random_schmidt_state([1.0], 1, 2, rng))


class TestFrameVectors:
    def test_identity_row_is_diagonal(self, rng):
        data = schmidt_decompose(random_schmidt_state([0.5, 0.5], 3, 3, rng))
        [fv] = frame_vectors(data, [PauliOp.identity(3)])
        d, chi = 8, 2
        expected = np.eye(chi).reshape(-1) / np.sqrt(d)
        assert np.abs(fv.coords - expected).max() < 1e-12

    def test_identity_deflates_to_zero(self, rng):
        data = schmidt_decompose(random_schmidt_state([0.6, 0.4], 2, 2, rng))
        [fv] = frame_vectors(data, [PauliOp.identity(2)], deflate=True)
        assert np.abs(fv.coords).max() < 1e-12

    @pytest.mark.parametrize("m,chi", [(2, 2), (3, 4)])
    def test_completeness(self, m, chi, rng):
        lam = np.sort(rng.dirichlet(np.ones(chi) * 3))[::-1]
        data = schmidt_decompose(random_schmidt_state(lam, m, m, rng))
        rows = frame_matrix(data.left_basis, enumerate_all(m, include_identity=True))
        gram = rows.conj().T @ rows  # sum_P |v_P><v_P| transposed into coords
        assert np.abs(gram.T - np.eye(chi * chi)).max() < 1e-10

    @pytest.mark.parametrize("m,chi", [(2, 2), (3, 3)])
    def test_deflated_completeness(self, m, chi, rng):
        lam = np.sort(rng.dirichlet(np.ones(chi) * 3))[::-1]
        data = schmidt_decompose(random_schmidt_state(lam, m, m, rng))
        rows = frame_matrix(
            data.left_basis, enumerate_all(m, include_identity=True), deflate=True
        )
        resolved = np.einsum("pi,pj->ij", rows.conj(), rows)
        e_i = (np.eye(chi).reshape(-1) / np.sqrt(chi)).astype(complex)
        expected = np.eye(chi * chi) - np.outer(e_i, e_i.conj())
        assert np.abs(resolved - expected).max() < 1e-9


class TestMu0:
    def test_computational_closed_form(self):
        # index-set bases: mu0 = d * chi, attained by diagonal (x = 0) Paulis
        for m, chi in [(2, 2), (3, 4), (3, 8)]:
            eye = np.eye(1 << m, dtype=complex)
            data = SchmidtData(np.full(chi, 1 / chi), eye[:, :chi], eye[:, :chi])
            assert abs(mu0_exact(data) - (1 << m) * chi) < 1e-12

    def test_single_qubit_chi1(self):
        eye = np.eye(2, dtype=complex)
        data = SchmidtData(np.array([1.0]), eye[:, :1], eye[:, :1])
        assert abs(mu0_exact(data) - 2.0) < 1e-12

    def test_sampled_bound_is_lower_bound(self, rng):
        basis = haar_unitary(16, rng).entries[:, :2]
        data = SchmidtData(np.array([0.5, 0.5]), basis, basis)
        bound = mu0_sampled_bound(data, rng, draws=40)
        assert bound <= mu0_exact(data) + 1e-12


class TestBuildUL:
    def test_d2_computational(self):
        ul = build_UL(np.eye(2, dtype=complex))
        assert np.abs(ul @ ul.conj().T - np.eye(4)).max() <= 1e-12

    @pytest.mark.parametrize("d", [4, 8])
    def test_haar_basis_unitary(self, d, rng):
        ul = build_UL(haar_unitary(d, rng).entries)
        assert np.abs(ul @ ul.conj().T - np.eye(d * d)).max() <= 1e-10

    def test_row_and_column_norms(self, rng):
        ul = build_UL(haar_unitary(4, rng).entries)
        assert np.abs(np.linalg.norm(ul, axis=0) - 1).max() <= 1e-10
        assert np.abs(np.linalg.norm(ul, axis=1) - 1).max() <= 1e-10

    def test_resource_guard(self, rng):
        with pytest.raises(ResourceError):
            build_UL(np.eye(32, dtype=complex))


class TestSpectrumFactorization:
    @pytest.mark.parametrize("m,chi,k", [(2, 2, 10), (3, 3, 25), (4, 4, 40)])
    def test_rank_consistency_direct_vs_frame_side(self, m, chi, k, rng):
        # rank(T_S) built directly equals the rank of the Schmidt-weighted
        # frame factorization; the two routes share no code path.
        lam = np.sort(1 + rng.random(chi))[::-1]
        lam /= lam.sum()
        psi = random_schmidt_state(lam, m, m, rng)
        data = schmidt_decompose(psi)
        s = sample_pauli_set(m, k, rng)
        direct = build_projected_cm(psi, s)
        rank_direct = numerical_rank(singular_spectrum(direct.entries), 1e-9)
        svals = projected_cm_spectrum(data.left_basis, data.right_basis, data.coefficients, s)
        rank_frame = numerical_rank(np.sort(svals)[::-1] / direct.dim, 1e-9)
        assert rank_direct == rank_frame

    def test_spectrum_values_match_direct(self, rng):
        psi = maximally_entangled(3, 3, 3)
        data = schmidt_decompose(psi)
        s = sample_pauli_set(3, 20, rng)
        direct = build_projected_cm(psi, s)
        direct_svals = np.linalg.svd(direct.entries, compute_uv=False)
        fast = np.sort(
            projected_cm_spectrum(data.left_basis, data.right_basis, data.coefficients, s)
        )[::-1]
        assert np.abs(direct_svals - fast).max() < 1e-10

    def test_monotone_in_set_size(self, rng):
        psi = maximally_entangled(4, 3, 3)
        full = enumerate_all(3, include_identity=False)
        order = rng.permutation(len(full))
        ranks = []
        for count in (5, 15, 30, 63):
            members = tuple(full[i] for i in order[:count])
            s = PauliSet(members, 3, count)
            cm = build_projected_cm(psi, s)
            ranks.append(numerical_rank(singular_spectrum(cm.entries), 1e-9))
        assert ranks == sorted(ranks)

    def test_gaussian_rank_stability_calibrated(self):
        # Calibration (tools/calibrate.py): on the rotated chi=4, d=64 trial
        # configuration with K=64 and gaussian eps=0.01, ranks at the shared
        # noise-aware threshold were exact in {6..9} and noisy in {7..10};
        # |noisy - exact| <= 2 in 50/50 seeds and the noisy rank never
        # exceeded the exact 1e-7 rank (16).  Frozen gates below.
        from schmidt_cert import apply_local_unitary
        from schmidt_cert.certify import default_threshold
        from schmidt_cert.seeding import derive_rng

        psi = maximally_entangled(4, 6, 6)
        noise = NoiseModel.gaussian(0.01)
        within_two = 0
        never_over = True
        for seed in range(50):
            rng = derive_rng(2026, "gaussian-rank-stability", seed)
            s = sample_pauli_set(6, 64, rng, seed=seed)
            rotated = apply_local_unitary(
                psi, haar_unitary(64, rng), haar_unitary(64, rng)
            )
            exact_cm = build_projected_cm(rotated, s)
            noisy_cm = build_projected_cm(rotated, s, noise, rng)
            thr = default_threshold(s.distinct, noise)
            r_exact = numerical_rank(singular_spectrum(exact_cm.entries), thr)
            r_noisy = numerical_rank(singular_spectrum(noisy_cm.entries), thr)
            within_two += abs(r_exact - r_noisy) <= 2
            never_over &= r_noisy <= numerical_rank(
                singular_spectrum(exact_cm.entries), 1e-7
            )
        assert within_two >= 45
        assert never_over


class TestProjectedCMFile:
    def test_round_trip(self, tmp_path, rng):
        psi = random_schmidt_state([0.5, 0.5], 2, 2, rng)
        s = sample_pauli_set(2, 6, rng, seed=11)
        cm = build_projected_cm(psi, s)
        path = tmp_path / "cm.csv"
        save_projected_cm(cm, path)
        loaded = load_projected_cm(path)
        assert loaded.labels == cm.labels
        assert np.array_equal(loaded.entries, cm.entries)  # 17 digits: lossless
        assert loaded.meta["seed"] == 11

    def test_noisy_round_trip_keeps_noise_mode(self, tmp_path, rng):
        psi = maximally_entangled(2, 1, 1)
        cm = build_projected_cm(
            psi, pauli_set_from_strings("X"), NoiseModel.gaussian(0.2), rng
        )
        path = tmp_path / "cm.csv"
        save_projected_cm(cm, path)
        assert load_projected_cm(path).noise.sigma == 0.2

    def test_rejects_malformed_header(self, tmp_path):
        path = tmp_path / "cm.csv"
        path.write_text("nope,I\nI,1.0\n")
        with pytest.raises(ValueError):
            load_projected_cm(path)
