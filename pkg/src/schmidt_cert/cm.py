"""Correlation matrices of bipartite states over the Pauli basis.

The full correlation matrix of a state psi on an equal d x d bipartition has
entries <psi| P tensor Q |psi> over all d^2 Pauli pairs; its rank equals the
squared Schmidt number.  The protocol works with the projected matrix T_S
restricted to a sampled Pauli set S plus the identity.

This module also exposes the theory-side objects used to analyse T_S: the
frame vectors v_P of Schmidt-basis matrix elements, the anticoncentration
statistic mu0, and the d^2 x d^2 change-of-basis matrix whose unitarity
underlies the rank identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ResourceError, UnsupportedConfigurationError
from .pauli import (
    MAX_DENSE_QUBITS,
    PauliOp,
    enumerate_all,
    parity_signs,
    phase_i_power,
    sample_uniform_nonidentity,
)
from .state import SchmidtData, StateVector

ENTRY_IMAG_ATOL = 1e-9


@dataclass(frozen=True)
class PauliSet:
    """An ordered, de-duplicated sample of non-identity Paulis on m qubits.

    ``num_draws`` is the i.i.d. draw count K of the protocol; repeated draws
    are removed (a repeated row/column cannot change the rank) so
    ``len(members)`` may be smaller.
    """

    members: tuple[PauliOp, ...]
    m: int
    num_draws: int
    seed: object = None

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise ValueError("members contain duplicates")
        for p in self.members:
            if p.m != self.m:
                raise ValueError("member qubit count mismatch")
            if p.is_identity:
                raise ValueError("identity is implicit and may not be a member")

    @property
    def distinct(self) -> int:
        return len(self.members)


def sample_pauli_set(m: int, k: int, rng: np.random.Generator, seed=None) -> PauliSet:
    """K i.i.d. uniform draws from the non-identity Paulis, duplicates removed."""
    if k < 1:
        raise ValueError("K must be at least 1")
    seen = {}
    for _ in range(k):
        p = sample_uniform_nonidentity(m, rng)
        seen.setdefault((p.x_int, p.z_int), p)
    return PauliSet(tuple(seen.values()), m, k, seed)


@dataclass(frozen=True)
class NoiseModel:
    """Entry-wise measurement noise: exact | shots(N) | gaussian(sigma)."""

    mode: str
    shots_per_entry: int | None = None
    sigma: float | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "shots", "gaussian"):
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.mode == "shots" and (self.shots_per_entry is None or self.shots_per_entry < 1):
            raise ValueError("shots mode needs N >= 1")
        if self.mode == "gaussian" and (self.sigma is None or self.sigma < 0):
            raise ValueError("gaussian mode needs sigma >= 0")

    @classmethod
    def exact(cls) -> "NoiseModel":
        return cls("exact")

    @classmethod
    def shots(cls, n: int) -> "NoiseModel":
        return cls("shots", shots_per_entry=int(n))

    @classmethod
    def gaussian(cls, sigma: float) -> "NoiseModel":
        return cls("gaussian", sigma=float(sigma))

    @property
    def eps_hat(self) -> float:
        """Known per-entry noise scale: 0, 1/sqrt(N), or sigma."""
        if self.mode == "exact":
            return 0.0
        if self.mode == "shots":
            return 1.0 / np.sqrt(self.shots_per_entry)
        return self.sigma

    def describe(self) -> dict:
        return {"mode": self.mode, "shots": self.shots_per_entry, "sigma": self.sigma}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        return cls(d["mode"], d.get("shots"), d.get("sigma"))


@dataclass(frozen=True)
class ProjectedCM:
    """(K+1) x (K+1) real matrix of Pauli-pair expectations, identity first."""

    entries: np.ndarray
    labels: tuple[str, ...]
    noise: NoiseModel
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.labels)
        if self.entries.shape != (n, n):
            raise ValueError("entries shape does not match labels")
        if self.labels[0] != "I":
            raise ValueError("first label must be the identity")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("entries must be finite")
        if self.noise.mode == "exact":
            if abs(self.entries[0, 0] - 1.0) > 1e-12:
                raise ValueError("exact CM must have entry (I, I) = 1")
            if np.abs(self.entries).max() > 1 + 1e-12:
                raise ValueError("exact CM entries must lie in [-1, 1]")
        self.entries.flags.writeable = False

    @property
    def dim(self) -> int:
        return len(self.labels)


def _pauli_state_stack(mat: np.ndarray, paulis, side: str) -> np.ndarray:
    """Stack of (P tensor I)|psi> (side 'A') or (I tensor Q)|psi> (side 'B').

    ``mat`` is the (d_A, d_B) amplitude matrix; rows of the result are the
    flattened transformed states.
    """
    d = mat.shape[0] if side == "A" else mat.shape[1]
    idx = np.arange(d)
    out = np.empty((len(paulis), mat.size), dtype=complex)
    for t, p in enumerate(paulis):
        signs = parity_signs(idx ^ p.x_int, p.z_int)
        phase = phase_i_power(bin(p.x_int & p.z_int).count("1"))
        if side == "A":
            out[t] = (phase * signs[:, None] * mat[idx ^ p.x_int, :]).reshape(-1)
        else:
            out[t] = (phase * signs[None, :] * mat[:, idx ^ p.x_int]).reshape(-1)
    return out


def _entry_rng(base_seed: int, i: int, j: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([base_seed, i, j]))


def _apply_noise(exact: np.ndarray, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Per-entry noise with seeds derived per (i, j), so the result does not
    depend on evaluation order and entries may be drawn concurrently."""
    if noise.mode == "exact":
        return exact
    if rng is None:
        raise ValueError("noisy construction needs an rng")
    base = int(rng.integers(0, 2**63))
    noisy = np.empty_like(exact)
    n = exact.shape[0]
    if noise.mode == "shots":
        shots = noise.shots_per_entry
        for i in range(n):
            for j in range(n):
                p = min(max((1.0 + exact[i, j]) / 2.0, 0.0), 1.0)
                ones = _entry_rng(base, i, j).binomial(shots, p)
                noisy[i, j] = 2.0 * ones / shots - 1.0
    else:
        for i in range(n):
            for j in range(n):
                noisy[i, j] = exact[i, j] + noise.sigma * _entry_rng(base, i, j).standard_normal()
    return noisy


def build_projected_cm(
    psi: StateVector,
    pauli_set: PauliSet,
    noise: NoiseModel | None = None,
    rng: np.random.Generator | None = None,
) -> ProjectedCM:
    """T_S over S union {I}: entry (P, Q) = <psi| P tensor Q |psi>.

    Exact entries are assembled from the stacked transformed states
    (P tensor I)|psi> and (I tensor Q)|psi> -- the same O(2^n)-per-operator
    arithmetic as :func:`~schmidt_cert.state.pauli_pair_expectation`, batched
    into one matrix product.  Shots mode replaces each entry by the mean of N
    two-outcome measurements; gaussian mode adds N(0, sigma^2).
    """
    noise = noise or NoiseModel.exact()
    if psi.n_A != psi.n_B:
        raise UnsupportedConfigurationError(
            f"projected CM requires an equal bipartition, got {psi.n_A}|{psi.n_B}"
        )
    if pauli_set.m != psi.n_A:
        raise ValueError(f"Pauli set on {pauli_set.m} qubits, sides have {psi.n_A}")
    paulis = (PauliOp.identity(pauli_set.m),) + pauli_set.members
    mat = psi.as_matrix()
    rows = _pauli_state_stack(mat, paulis, "A")
    cols = _pauli_state_stack(mat, paulis, "B")
    entries = np.conj(rows) @ cols.T
    worst = np.abs(entries.imag).max()
    if worst > ENTRY_IMAG_ATOL:
        raise AssertionError(f"CM imaginary residue {worst}")
    exact = entries.real
    noisy = _apply_noise(exact, noise, rng)
    labels = ("I",) + tuple(p.to_string() for p in pauli_set.members)
    meta = {
        "k_drawn": pauli_set.num_draws,
        "distinct": pauli_set.distinct,
        "seed": pauli_set.seed,
        "state": psi.descriptor,
        "noise": noise.describe(),
    }
    return ProjectedCM(noisy, labels, noise, meta)


def build_full_cm(psi: StateVector) -> np.ndarray:
    """Full CM over all 4^m Pauli pairs in canonical order (identity first).

    Row P is computed from the transformed state (P tensor I)|psi>; the
    column sweep over all W(x, z) on the B side reduces to one gather plus a
    Walsh (sign-character) transform per x, giving O(d^4 poly) total work
    without any Schmidt decomposition.
    """
    if psi.n_A != psi.n_B:
        raise UnsupportedConfigurationError("full CM requires an equal bipartition")
    m = psi.n_A
    if m > MAX_DENSE_QUBITS:
        raise ResourceError(f"full CM requested for m={m} > {MAX_DENSE_QUBITS}")
    d = 1 << m
    idx = np.arange(d)
    xor_table = idx[:, None] ^ idx[None, :]
    and_counts = np.bitwise_count(idx[:, None] & idx[None, :]).astype(np.int64)
    walsh_t = (1 - 2 * (and_counts & 1)).T  # symmetric, kept for clarity
    iphase = 1j ** (and_counts % 4)
    mat = psi.as_matrix()
    full = np.empty((d * d, d * d))
    for code in range(d * d):
        x, z = code >> m, code & (d - 1)
        signs = parity_signs(idx ^ x, z)
        phase = phase_i_power(bin(x & z).count("1"))
        transformed = phase * signs[:, None] * mat[idx ^ x, :]
        cross = np.conj(mat.T) @ transformed  # cross[b, b'] = <psi col_b, row_b'>
        gathered = cross[xor_table, idx[None, :]]  # [x_B, b] = cross[b ^ x_B, b]
        row = (gathered @ walsh_t) * iphase
        if np.abs(row.imag).max() > ENTRY_IMAG_ATOL:
            raise AssertionError("full CM imaginary residue")
        full[code] = row.real.reshape(-1)
    return full


# ---------------------------------------------------------------------------
# Frame vectors, mu statistics and the change-of-basis oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrameVector:
    """chi^2-dimensional vector of Schmidt-basis matrix elements of one Pauli."""

    coords: np.ndarray  # index (i, j) flattened row-major
    label: PauliOp
    deflated: bool


def pauli_sandwich(basis_cols: np.ndarray, p: PauliOp) -> np.ndarray:
    """Matrix of <b_i| P |b_j> over the given orthonormal columns."""
    d = basis_cols.shape[0]
    if d != 1 << p.m:
        raise ValueError(f"basis lives in dimension {d}, Pauli acts on 2^{p.m}")
    idx = np.arange(d)
    signs = parity_signs(idx ^ p.x_int, p.z_int)
    phase = phase_i_power(bin(p.x_int & p.z_int).count("1"))
    transformed = phase * signs[:, None] * basis_cols[idx ^ p.x_int, :]
    return basis_cols.conj().T @ transformed


def frame_matrix(basis_cols: np.ndarray, paulis, deflate: bool = False) -> np.ndarray:
    """Rows v_P[(i, j)] = <b_i| P |b_j> / sqrt(d), optionally deflated.

    Deflation projects out the normalized diagonal direction
    e_I = sum_i e_(ii) / sqrt(chi).
    """
    d = basis_cols.shape[0]
    chi = basis_cols.shape[1]
    out = np.empty((len(paulis), chi * chi), dtype=complex)
    for t, p in enumerate(paulis):
        out[t] = pauli_sandwich(basis_cols, p).reshape(-1)
    out /= np.sqrt(d)
    if deflate:
        diag = np.arange(chi) * (chi + 1)
        mean = out[:, diag].sum(axis=1) / chi
        out[:, diag] -= mean[:, None]
    return out


def frame_vectors(schmidt: SchmidtData, paulis, deflate: bool = False) -> list[FrameVector]:
    rows = frame_matrix(schmidt.left_basis, paulis, deflate)
    return [FrameVector(row, p, deflate) for row, p in zip(rows, paulis)]


def mu0(schmidt: SchmidtData, paulis) -> float:
    """d * max over the given Paulis of sum_ij |<l_i| P |l_j>|^2.

    Pass the full non-identity enumeration for the exact statistic
    (:func:`mu0_exact`); over a sampled subset the result is a monotone
    lower bound (:func:`mu0_sampled_bound`).
    """
    basis = schmidt.left_basis
    d = basis.shape[0]
    best = 0.0
    for p in paulis:
        weight = float(np.sum(np.abs(pauli_sandwich(basis, p)) ** 2))
        if weight > best:
            best = weight
    return d * best


def mu0_exact(schmidt: SchmidtData) -> float:
    d = schmidt.left_basis.shape[0]
    m = int(np.log2(d))
    return mu0(schmidt, enumerate_all(m, include_identity=False))


def mu0_sampled_bound(
    schmidt: SchmidtData, rng: np.random.Generator, draws: int = 100_000
) -> float:
    """Sampled-max lower bound for systems too large to enumerate."""
    d = schmidt.left_basis.shape[0]
    m = int(np.log2(d))
    paulis = (sample_uniform_nonidentity(m, rng) for _ in range(draws))
    return mu0(schmidt, paulis)


def build_UL(schmidt_basis: np.ndarray) -> np.ndarray:
    """d^2 x d^2 matrix (1/sqrt(d)) <l_j| P |l_i> |e_P><e_ij| over all P.

    Unitary for every full orthonormal basis; kept as a small-scale oracle
    (d <= 16) for the rank identity of the full CM.
    """
    d = schmidt_basis.shape[0]
    if schmidt_basis.shape != (d, d):
        raise ValueError("a full d x d orthonormal basis is required")
    if d > 16:
        raise ResourceError(f"build_UL limited to d <= 16, got {d}")
    m = int(np.log2(d))
    paulis = enumerate_all(m, include_identity=True)
    out = np.empty((d * d, d * d), dtype=complex)
    for t, p in enumerate(paulis):
        out[t] = pauli_sandwich(schmidt_basis, p).T.reshape(-1)
    return out / np.sqrt(d)


def projected_cm_spectrum(
    left_basis: np.ndarray,
    right_basis: np.ndarray,
    coefficients: np.ndarray,
    pauli_set: PauliSet,
    error_budget: float = 0.0,
) -> np.ndarray:
    """Singular values of T_S computed from Schmidt data, without building T_S.

    Uses the factorization T_S = d F_L diag(sqrt(lam_i lam_j)) F_R^T with
    frame-matrix factors, and reads the spectrum off a QR-compressed core.
    With ``error_budget > 0`` columns are dropped smallest-first while the
    provable spectral-norm perturbation sum ||a_c|| ||b_c|| stays below the
    budget; values within the budget of a threshold are then undecidable.

    Values are *unnormalized*; divide by ``pauli_set.distinct + 1`` to
    compare against normalized thresholds.  This is the frame side of the
    rank identity; tests check it against the directly built matrix.
    """
    d = left_basis.shape[0]
    paulis = [PauliOp.identity(pauli_set.m)] + list(pauli_set.members)
    lam = np.asarray(coefficients, dtype=float)
    weights = np.sqrt(np.outer(lam, lam)).reshape(-1)
    left = d * frame_matrix(left_basis, paulis) * weights
    right = frame_matrix(right_basis, paulis)
    if error_budget > 0:
        products = np.linalg.norm(left, axis=0) * np.linalg.norm(right, axis=0)
        order = np.argsort(products)
        cumulative = np.cumsum(products[order])
        dropped = order[cumulative <= error_budget]
        keep = np.setdiff1d(np.arange(left.shape[1]), dropped)
        left, right = left[:, keep], right[:, keep]
    n_rows = left.shape[0]
    if left.shape[1] == 0:
        return np.zeros(n_rows)
    r_left = np.linalg.qr(left, mode="r")
    r_right = np.linalg.qr(right, mode="r")
    core = np.linalg.svd(r_left @ r_right.T, compute_uv=False)
    spectrum = np.zeros(n_rows)
    spectrum[: core.size] = core
    return spectrum


# ---------------------------------------------------------------------------
# CSV serialization: first row/column are operator labels, 17 significant
# digits, metadata sidecar '<path>.meta.json'.
# ---------------------------------------------------------------------------


def save_projected_cm(cm: ProjectedCM, path) -> None:
    path = Path(path)
    lines = ["label," + ",".join(cm.labels)]
    for label, row in zip(cm.labels, cm.entries):
        lines.append(label + "," + ",".join(f"{v:.17g}" for v in row))
    path.write_text("\n".join(lines) + "\n")
    sidecar = {"noise": cm.noise.describe(), "meta": cm.meta}
    Path(str(path) + ".meta.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def load_projected_cm(path) -> ProjectedCM:
    path = Path(path)
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    if header[0] != "label" or header[1] != "I":
        raise ValueError("malformed projected-CM CSV header")
    labels = tuple(header[1:])
    entries = np.empty((len(labels), len(labels)))
    for i, line in enumerate(lines[1:]):
        cells = line.split(",")
        if cells[0] != labels[i]:
            raise ValueError(f"row label {cells[0]!r} does not match column order")
        entries[i] = [float(c) for c in cells[1:]]
    sidecar_path = Path(str(path) + ".meta.json")
    noise, meta = NoiseModel.exact(), {}
    if sidecar_path.exists():
        sidecar = json.loads(sidecar_path.read_text())
        noise = NoiseModel.from_dict(sidecar["noise"])
        meta = sidecar["meta"]
    return ProjectedCM(entries, labels, noise, meta)
