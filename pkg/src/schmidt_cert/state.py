"""Dense statevectors of bipartite n-qubit systems.

Basis convention: amplitude index ``b`` encodes the qubit string with qubit
0 as the most significant bit, and the A subsystem occupies the first
(high-order) ``n_A`` qubits.  Reshaping the amplitude vector to a
``(2^n_A, 2^n_B)`` matrix therefore puts A on rows, which is the matrix
whose singular value decomposition yields the Schmidt form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import ResourceError
from .pauli import PauliOp, parity_signs, phase_i_power

NORM_ATOL = 1e-10
DEFAULT_SCHMIDT_CUTOFF = 1e-7
MAX_CHAIN_SITES = 14


@lru_cache(maxsize=8)
def _indices(n: int) -> np.ndarray:
    return np.arange(1 << n)


class StateVector:
    """A normalized pure state on ``n_A + n_B`` qubits with a fixed bipartition."""

    __slots__ = ("amplitudes", "n_A", "n_B", "descriptor")

    def __init__(self, amplitudes, n_A: int, n_B: int, descriptor: str = "custom"):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1).copy()
        n = n_A + n_B
        if n_A < 1 or n_B < 1:
            raise ValueError("bipartition sizes must be positive")
        if amps.size != 1 << n:
            raise ValueError(
                f"amplitude count {amps.size} does not match 2^{n} for n_A={n_A}, n_B={n_B}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"state norm {norm} too far from 1")
        amps /= norm  # remove residual rounding; keeps norm within 1e-10
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "n_A", n_A)
        object.__setattr__(self, "n_B", n_B)
        object.__setattr__(self, "descriptor", descriptor)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @property
    def n(self) -> int:
        return self.n_A + self.n_B

    @property
    def d_A(self) -> int:
        return 1 << self.n_A

    @property
    def d_B(self) -> int:
        return 1 << self.n_B

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (d_A, d_B), A subsystem on rows."""
        return self.amplitudes.reshape(self.d_A, self.d_B)

    def __repr__(self) -> str:
        return f"StateVector(n_A={self.n_A}, n_B={self.n_B}, {self.descriptor!r})"


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt spectrum and bases of a bipartite pure state.

    ``coefficients`` are the probabilities lambda_i (squared singular values)
    in non-increasing order; the bases hold |l_i> / |r_i> as orthonormal
    columns.  Reconstruction uses a plain (non-conjugated) product:
    amplitude(a, b) = sum_i sqrt(lambda_i) left[a, i] right[b, i].
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    cutoff: float = DEFAULT_SCHMIDT_CUTOFF

    def __post_init__(self):
        lam = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", lam)
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("empty Schmidt spectrum")
        if np.any(np.diff(lam) > 1e-12):
            raise ValueError("Schmidt coefficients must be non-increasing")
        if abs(lam.sum() - 1.0) > 1e-8:
            raise ValueError(f"Schmidt coefficients sum to {lam.sum()}, not 1")
        if np.any(lam <= self.cutoff**2):
            raise ValueError("retained coefficients must exceed cutoff^2")
        for name, basis in (("left", self.left_basis), ("right", self.right_basis)):
            gram = basis.conj().T @ basis
            if np.abs(gram - np.eye(self.chi)).max() > 1e-8:
                raise ValueError(f"{name} basis columns are not orthonormal")

    @property
    def chi(self) -> int:
        return len(self.coefficients)

    def reconstruct(self, descriptor: str = "reconstructed") -> StateVector:
        mat = (self.left_basis * np.sqrt(self.coefficients)) @ self.right_basis.T
        n_A = int(round(math.log2(self.left_basis.shape[0])))
        n_B = int(round(math.log2(self.right_basis.shape[0])))
        return StateVector(mat.reshape(-1), n_A, n_B, descriptor)


def maximally_entangled(chi: int, n_A: int, n_B: int) -> StateVector:
    """sum_{i<chi} |i>_A |i>_B / sqrt(chi) in the computational basis."""
    d_A, d_B = 1 << n_A, 1 << n_B
    if not 1 <= chi <= min(d_A, d_B):
        raise ValueError(f"chi={chi} exceeds min(d_A, d_B)={min(d_A, d_B)}")
    amps = np.zeros(d_A * d_B, dtype=complex)
    amps[np.arange(chi) * d_B + np.arange(chi)] = 1.0 / math.sqrt(chi)
    return StateVector(amps, n_A, n_B, f"max_ent(chi={chi})")


def random_schmidt_state(
    spectrum, n_A: int, n_B: int, rng: np.random.Generator
) -> StateVector:
    """State with the given Schmidt spectrum and Haar-random local bases.

    The left/right bases are the first ``chi`` columns of two independent
    Haar-random unitaries.
    """
    from .random_unitary import haar_unitary  # local import to avoid a cycle

    lam = np.asarray(spectrum, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("spectrum must be a non-empty sequence")
    if np.any(lam <= 0) or abs(lam.sum() - 1.0) > 1e-8:
        raise ValueError("spectrum entries must be positive and sum to 1")
    d_A, d_B = 1 << n_A, 1 << n_B
    chi = lam.size
    if chi > min(d_A, d_B):
        raise ValueError(f"spectrum length {chi} exceeds min(d_A, d_B)")
    left = haar_unitary(d_A, rng).entries[:, :chi]
    right = haar_unitary(d_B, rng).entries[:, :chi]
    mat = (left * np.sqrt(lam)) @ right.T
    return StateVector(mat.reshape(-1), n_A, n_B, f"random_schmidt(chi={chi})")


def _unitary_entries(u, dim: int, name: str) -> np.ndarray:
    mat = np.asarray(getattr(u, "entries", u), dtype=complex)
    if mat.shape != (dim, dim):
        raise ValueError(f"{name} has shape {mat.shape}, expected ({dim}, {dim})")
    if np.abs(mat @ mat.conj().T - np.eye(dim)).max() > 1e-8:
        raise ValueError(f"{name} is not unitary within 1e-8")
    return mat


def apply_local_unitary(psi: StateVector, u_A, u_B) -> StateVector:
    """(U_A tensor U_B)|psi>; the Schmidt spectrum is invariant."""
    mat_a = _unitary_entries(u_A, psi.d_A, "U_A")
    mat_b = _unitary_entries(u_B, psi.d_B, "U_B")
    rotated = mat_a @ psi.as_matrix() @ mat_b.T
    return StateVector(
        rotated.reshape(-1), psi.n_A, psi.n_B, f"rotated({psi.descriptor})"
    )


def pauli_pair_expectation(psi: StateVector, p: PauliOp, q: PauliOp) -> float:
    """<psi| (P tensor Q) |psi> for P on the A side and Q on the B side.

    Computed in O(2^n) from the symplectic action on basis states; no dense
    operator is materialized.  The result of the Hermitian observable is
    real; an imaginary residue above 1e-10 raises.
    """
    if p.m != psi.n_A:
        raise ValueError(f"P acts on {p.m} qubits, A side has {psi.n_A}")
    if q.m != psi.n_B:
        raise ValueError(f"Q acts on {q.m} qubits, B side has {psi.n_B}")
    x_int = (p.x_int << psi.n_B) | q.x_int
    z_int = (p.z_int << psi.n_B) | q.z_int
    idx = _indices(psi.n)
    amps = psi.amplitudes
    signs = parity_signs(idx, z_int)
    phase = phase_i_power(
        bin(p.x_int & p.z_int).count("1") + bin(q.x_int & q.z_int).count("1")
    )
    value = phase * np.sum(amps * signs * np.conj(amps[idx ^ x_int]))
    if abs(value.imag) > 1e-10:
        raise AssertionError(f"expectation has imaginary residue {value.imag}")
    return float(value.real)


def schmidt_decompose(psi: StateVector, cutoff: float = DEFAULT_SCHMIDT_CUTOFF) -> SchmidtData:
    """SVD of the amplitude matrix, keeping singular values > cutoff."""
    u, s, vh = np.linalg.svd(psi.as_matrix(), full_matrices=False)
    keep = int(np.sum(s > cutoff))
    keep = max(keep, 1)
    data = SchmidtData(
        coefficients=(s[:keep] ** 2),
        left_basis=u[:, :keep],
        right_basis=vh[:keep, :].T,
        cutoff=cutoff,
    )
    residual = np.linalg.norm(
        data.reconstruct().amplitudes - psi.amplitudes / np.linalg.norm(psi.amplitudes)
    )
    if residual > 1e-7:
        raise AssertionError(f"Schmidt reconstruction residual {residual} > 1e-7")
    return data


# ---------------------------------------------------------------------------
# Spinless fermion chain:  H = -t sum_i (c_i^+ c_{i+1} + h.c.) + U sum_i n_i n_{i+1}
# on an open chain, mapped to qubits by Jordan-Wigner with site i on qubit i.
# Nearest-neighbour hopping carries no string sign in this ordering.
# ---------------------------------------------------------------------------


def _sector_states(length: int, filled: int) -> list[int]:
    return sorted(
        sum(1 << (length - 1 - site) for site in comb)
        for comb in combinations(range(length), filled)
    )


def _sector_hamiltonian(states: list[int], length: int, t: float, u_int: float) -> np.ndarray:
    pos = {s: k for k, s in enumerate(states)}
    dim = len(states)
    ham = np.zeros((dim, dim))
    for k, s in enumerate(states):
        diag = 0.0
        for i in range(length - 1):
            hi = 1 << (length - 1 - i)
            lo = 1 << (length - 2 - i)
            occ_i = bool(s & hi)
            occ_j = bool(s & lo)
            if occ_i and occ_j:
                diag += u_int
            if occ_i != occ_j:
                ham[k, pos[s ^ hi ^ lo]] -= t
        ham[k, k] = diag
    return ham


def fermion_chain_hamiltonian_apply(vec: np.ndarray, length: int, t: float, u_int: float) -> np.ndarray:
    """H|v> on the full 2^length space without materializing H (test oracle)."""
    idx = _indices(length)
    out = np.zeros_like(vec, dtype=complex)
    diag = np.zeros(len(vec))
    for i in range(length - 1):
        hi = 1 << (length - 1 - i)
        lo = 1 << (length - 2 - i)
        b1 = (idx & hi) != 0
        b2 = (idx & lo) != 0
        hop = b1 != b2
        out[idx[hop] ^ (hi | lo)] += -t * vec[idx[hop]]
        diag += u_int * (b1 & b2)
    return out + diag * vec


def free_fermion_ground_energy(length: int, t: float) -> float:
    """Sum of negative single-particle modes of the open hopping chain."""
    h = np.zeros((length, length))
    for i in range(length - 1):
        h[i, i + 1] = h[i + 1, i] = -t
    modes = np.linalg.eigvalsh(h)
    return float(modes[modes < 0].sum())


def fermion_chain_ground_state(
    length: int, t: float, u_int: float, n_A: int
) -> StateVector:
    """Ground state of the interacting chain as a qubit StateVector.

    Particle number is conserved, so each filling sector is diagonalized
    densely and the global minimum selected.  Degenerate ground spaces are
    resolved deterministically by basis alignment: scanning computational
    basis vectors in index order, the first one with non-vanishing projection
    onto the ground space is projected and normalized.
    """
    if length > MAX_CHAIN_SITES:
        raise ResourceError(f"chain length {length} > {MAX_CHAIN_SITES}")
    if not 1 <= n_A < length:
        raise ValueError("n_A must split the chain into two non-empty parts")

    sectors = []
    e_min = np.inf
    for filled in range(length + 1):
        states = _sector_states(length, filled)
        ham = _sector_hamiltonian(states, length, t, u_int)
        evals, evecs = np.linalg.eigh(ham)
        sectors.append((states, evals, evecs))
        e_min = min(e_min, evals[0])

    degeneracy_tol = 1e-9 * max(1.0, abs(e_min))
    state_to_sector = {}
    for sector_id, (states, _, _) in enumerate(sectors):
        for row, s in enumerate(states):
            state_to_sector[s] = (sector_id, row)

    for j in range(1 << length):
        sector_id, row = state_to_sector[j]
        states, evals, evecs = sectors[sector_id]
        ground_cols = evecs[:, evals <= e_min + degeneracy_tol]
        if ground_cols.shape[1] == 0:
            continue
        overlap = ground_cols[row, :]
        weight = np.linalg.norm(overlap)
        if weight > 1e-12:
            local = ground_cols @ overlap / weight
            full = np.zeros(1 << length, dtype=complex)
            full[np.array(states)] = local
            return StateVector(
                full, n_A, length - n_A,
                f"fermion_chain(L={length},t={t},U={u_int})",
            )
    raise AssertionError("ground space projection failed for every basis vector")


# ---------------------------------------------------------------------------
# Text serialization: header "n n_A n_B", then one line per nonzero
# amplitude: "<bitstring> <re> <im>" with 17 significant digits.
# ---------------------------------------------------------------------------


def save_state(psi: StateVector, path) -> None:
    lines = [f"{psi.n} {psi.n_A} {psi.n_B}"]
    for b, amp in enumerate(psi.amplitudes):
        if amp != 0:
            bits = format(b, f"0{psi.n}b")
            lines.append(f"{bits} {amp.real:.17g} {amp.imag:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_state(path) -> StateVector:
    lines = Path(path).read_text().strip().splitlines()
    try:
        n, n_A, n_B = (int(tok) for tok in lines[0].split())
    except (ValueError, IndexError) as exc:
        raise ValueError(f"malformed state file header: {lines[:1]}") from exc
    if n != n_A + n_B:
        raise ValueError(f"header inconsistent: n={n}, n_A+n_B={n_A + n_B}")
    amps = np.zeros(1 << n, dtype=complex)
    for line in lines[1:]:
        bits, re, im = line.split()
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ValueError(f"bad basis bitstring {bits!r}")
        amps[int(bits, 2)] = float(re) + 1j * float(im)
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValueError("state file contains no amplitude mass")
    return StateVector(amps / norm, n_A, n_B, f"file({Path(path).name})")
