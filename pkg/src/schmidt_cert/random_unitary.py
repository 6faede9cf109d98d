"""Local random unitaries: exact Haar samples and brickwork random circuits.

The brickwork construction stands in for pseudorandom unitaries: alternating
even/odd layers of independent Haar-random two-qubit gates on neighbouring
pairs.  It makes no cryptographic claim; what the certification protocol
needs is that the rotated Schmidt vectors are anticoncentrated over the
Pauli basis, which shallow brickwork provides empirically (depth defaults to
the local qubit count).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ResourceError

UNITARITY_ATOL = 1e-10
MAX_BRICKWORK_DENSE_QUBITS = 7


@dataclass(frozen=True)
class LocalUnitary:
    """A concrete unitary with a record of how it was generated."""

    dim: int
    entries: np.ndarray
    provenance: str

    def __post_init__(self):
        if self.entries.shape != (self.dim, self.dim):
            raise ValueError(f"entries shape {self.entries.shape} != ({self.dim}, {self.dim})")
        defect = np.abs(
            self.entries @ self.entries.conj().T - np.eye(self.dim)
        ).max()
        if defect > UNITARITY_ATOL:
            raise ValueError(f"unitarity defect {defect} exceeds {UNITARITY_ATOL}")
        self.entries.flags.writeable = False


def haar_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: complex Ginibre, QR, phase-corrected R diagonal."""
    ginibre = (
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    ) / np.sqrt(2)
    q, r = np.linalg.qr(ginibre)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_unitary(dim: int, rng: np.random.Generator) -> LocalUnitary:
    if dim < 2:
        raise ValueError("dim must be at least 2")
    return LocalUnitary(dim, haar_matrix(dim, rng), "haar")


def brickwork_gates(
    m: int, depth: int, rng: np.random.Generator
) -> list[tuple[np.ndarray, int]]:
    """Gate list [(4x4 unitary, left qubit index), ...] in application order.

    Layer 2k couples pairs (0,1), (2,3), ...; layer 2k+1 couples (1,2),
    (3,4), ....  Qubit 0 is the most significant bit of state indices.
    """
    if m < 2:
        raise ValueError("brickwork needs at least 2 qubits")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    gates = []
    for layer in range(depth):
        for q in range(layer % 2, m - 1, 2):
            gates.append((haar_matrix(4, rng), q))
    return gates


def apply_two_qubit_gate(vec: np.ndarray, gate: np.ndarray, q: int, m: int) -> np.ndarray:
    """Apply a 4x4 gate on adjacent qubits (q, q+1) of an m-qubit vector."""
    shaped = vec.reshape(1 << q, 4, 1 << (m - q - 2))
    return np.einsum("ab,xby->xay", gate, shaped).reshape(vec.shape)


def apply_gates_to_vector(vec: np.ndarray, gates, m: int) -> np.ndarray:
    out = np.asarray(vec, dtype=complex)
    for gate, q in gates:
        out = apply_two_qubit_gate(out, gate, q, m)
    return out


def brickwork_circuit(m: int, depth: int | None = None, rng: np.random.Generator | None = None) -> LocalUnitary:
    """Dense 2^m x 2^m brickwork unitary (materialized only for m <= 7).

    For larger m, use :func:`brickwork_gates` and stream the gates onto
    state vectors instead of materializing the matrix.
    """
    if rng is None:
        raise ValueError("rng is required")
    if depth is None:
        depth = m
    if m > MAX_BRICKWORK_DENSE_QUBITS:
        raise ResourceError(
            f"dense brickwork requested for m={m} > {MAX_BRICKWORK_DENSE_QUBITS}; "
            "use brickwork_gates with apply_gates_to_vector"
        )
    gates = brickwork_gates(m, depth, rng)
    dim = 1 << m
    mat = np.eye(dim, dtype=complex)
    for gate, q in gates:
        # apply to each column; the column axis rides along as trailing index
        shaped = mat.reshape(1 << q, 4, 1 << (m - q - 2), dim)
        mat = np.einsum("ab,xbyc->xayc", gate, shaped).reshape(dim, dim)
    return LocalUnitary(dim, mat, f"brickwork(depth={depth})")


def save_unitary(u: LocalUnitary, path) -> None:
    """Debug dump: dim header, then row-major 're im' pairs."""
    lines = [str(u.dim)]
    for row in u.entries:
        lines.append(" ".join(f"{v.real:.17g} {v.imag:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_unitary(path) -> LocalUnitary:
    lines = Path(path).read_text().strip().splitlines()
    dim = int(lines[0])
    rows = []
    for line in lines[1 : dim + 1]:
        vals = [float(tok) for tok in line.split()]
        rows.append([complex(re, im) for re, im in zip(vals[::2], vals[1::2])])
    return LocalUnitary(dim, np.array(rows, dtype=complex), "file")
