"""Pauli group algebra in the symplectic bitstring representation.

An m-qubit Pauli operator is encoded by two bitstrings ``x, z`` of length m:

    W(x, z) = prod_k  i^(x_k z_k) X_k^(x_k) Z_k^(z_k)

so that every W is Hermitian and squares to the identity.  Qubit 0 is the
leftmost letter of the text form ("XIZY") and the most significant bit of
the integer encodings.  The canonical enumeration order is lexicographic on
the concatenated bitstring x||z, i.e. on the integer code ``x_int * 2^m +
z_int``; the identity is code 0.

The action on a computational basis state is

    W(x, z)|b> = i^(x.z) (-1)^(z.b) |b xor x>

with bitwise dot products.  Note the (-1) power on z.b: the commonly quoted
variant with i^(z.b) is inconsistent with the definition above (it fails on
Y|1> = -i|0>), which the dense oracle in this module confirms.  Products are
tracked only up to a global phase: downstream code consumes expectation
values of individual Hermitian W operators, never relative phases between
products.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceError

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}

# Size guards: dense matrices at 2^6 = 64, enumeration at 4^7 = 16384 entries.
MAX_DENSE_QUBITS = 6
MAX_ENUMERATION_QUBITS = 7

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_bits(bits, name: str) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D bit sequence")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError(f"{name} must contain only bits 0/1")
    return arr


def _bits_to_int(bits: np.ndarray) -> int:
    # qubit 0 is the most significant bit
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def _int_to_bits(value: int, m: int) -> np.ndarray:
    return np.array([(value >> (m - 1 - k)) & 1 for k in range(m)], dtype=np.uint8)


def parity(value: int) -> int:
    return bin(value).count("1") & 1


def parity_signs(values: np.ndarray, mask: int) -> np.ndarray:
    """(-1)^popcount(values & mask) as an int8 array of +/-1."""
    counts = np.bitwise_count(values & mask).astype(np.int8)
    return (1 - 2 * (counts & 1)).astype(np.int8)


def phase_i_power(exponent: int) -> complex:
    return (1j) ** (exponent % 4)


class PauliOp:
    """A Hermitian Pauli operator W(x, z) on m qubits."""

    __slots__ = ("x", "z", "m", "x_int", "z_int")

    def __init__(self, x, z):
        x = _as_bits(x, "x")
        z = _as_bits(z, "z")
        if len(x) != len(z):
            raise ValueError(f"x and z lengths differ: {len(x)} vs {len(z)}")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "m", len(x))
        object.__setattr__(self, "x_int", _bits_to_int(x))
        object.__setattr__(self, "z_int", _bits_to_int(z))

    def __setattr__(self, name, value):
        raise AttributeError("PauliOp is immutable")

    @classmethod
    def identity(cls, m: int) -> "PauliOp":
        return cls(np.zeros(m, dtype=np.uint8), np.zeros(m, dtype=np.uint8))

    @classmethod
    def from_ints(cls, x_int: int, z_int: int, m: int) -> "PauliOp":
        return cls(_int_to_bits(x_int, m), _int_to_bits(z_int, m))

    @classmethod
    def from_code(cls, code: int, m: int) -> "PauliOp":
        """Inverse of :attr:`code` (canonical enumeration index)."""
        return cls.from_ints(code >> m, code & ((1 << m) - 1), m)

    @classmethod
    def from_string(cls, text: str) -> "PauliOp":
        try:
            pairs = [_LETTER_TO_BITS[c] for c in text]
        except KeyError as exc:
            raise ValueError(f"invalid Pauli letter in {text!r}") from exc
        if not pairs:
            raise ValueError("empty Pauli string")
        x, z = zip(*pairs)
        return cls(x, z)

    @property
    def code(self) -> int:
        """Canonical enumeration index: x||z read as an integer, qubit 0 MSB."""
        return (self.x_int << self.m) | self.z_int

    @property
    def is_identity(self) -> bool:
        return self.x_int == 0 and self.z_int == 0

    def to_string(self) -> str:
        return "".join(_BITS_TO_LETTER[(int(a), int(b))] for a, b in zip(self.x, self.z))

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"PauliOp({self.to_string()!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliOp)
            and self.m == other.m
            and self.x_int == other.x_int
            and self.z_int == other.z_int
        )

    def __hash__(self) -> int:
        return hash((self.m, self.x_int, self.z_int))


def _check_same_m(p: PauliOp, q: PauliOp) -> None:
    if p.m != q.m:
        raise ValueError(f"qubit counts differ: {p.m} vs {q.m}")


def apply_to_basis(p: PauliOp, b) -> tuple[np.ndarray, complex]:
    """Action on a computational basis state: W|b> = phase * |b_out>.

    Parameters
    ----------
    p : PauliOp
    b : bit sequence of length ``p.m``

    Returns
    -------
    (b_out, phase) with ``b_out = b xor x`` and
    ``phase = i^(x.z) * (-1)^(z.b)``, a unit complex number.
    """
    b = _as_bits(b, "b")
    if len(b) != p.m:
        raise ValueError(f"basis string has length {len(b)}, expected {p.m}")
    b_out = np.bitwise_xor(b, p.x)
    b_int = _bits_to_int(b)
    phase = phase_i_power(bin(p.x_int & p.z_int).count("1")) * (
        -1 if parity(p.z_int & b_int) else 1
    )
    return b_out, phase


def symplectic_product(p: PauliOp, q: PauliOp) -> int:
    """(x.z' + x'.z) mod 2; zero exactly when the two operators commute."""
    _check_same_m(p, q)
    return (parity(p.x_int & q.z_int) + parity(q.x_int & p.z_int)) & 1


def multiply_up_to_phase(p: PauliOp, q: PauliOp) -> PauliOp:
    """The Pauli slot of the product: (x xor x', z xor z').

    The dense product W(p) W(q) equals the returned operator times a global
    unit phase in {1, i, -1, -i}; that phase is deliberately not tracked.
    """
    _check_same_m(p, q)
    return PauliOp.from_ints(p.x_int ^ q.x_int, p.z_int ^ q.z_int, p.m)


def to_dense(p: PauliOp) -> np.ndarray:
    """Explicit 2^m x 2^m matrix, built as a Kronecker product (test oracle)."""
    if p.m > MAX_DENSE_QUBITS:
        raise ResourceError(
            f"dense Pauli requested for m={p.m} > {MAX_DENSE_QUBITS}"
        )
    mat = np.array([[1.0]], dtype=complex)
    for xb, zb in zip(p.x, p.z):
        factor = (1j ** int(xb * zb)) * (
            (_X2 if xb else _I2) @ (_Z2 if zb else _I2)
        )
        mat = np.kron(mat, factor)
    return mat


def sample_uniform_nonidentity(m: int, rng: np.random.Generator) -> PauliOp:
    """One uniform draw from the 4^m - 1 non-identity Paulis."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if m <= 15:
        code = int(rng.integers(1, 4**m))
        return PauliOp.from_code(code, m)
    while True:  # rejection on the identity, hit with probability 4^-m
        bits = rng.integers(0, 2, size=2 * m, dtype=np.uint8)
        if bits.any():
            return PauliOp(bits[:m], bits[m:])


def enumerate_all(m: int, include_identity: bool = False) -> list[PauliOp]:
    """All Paulis on m qubits in canonical (x||z lexicographic) order."""
    if m > MAX_ENUMERATION_QUBITS:
        raise ResourceError(
            f"enumeration requested for m={m} > {MAX_ENUMERATION_QUBITS}"
        )
    start = 0 if include_identity else 1
    return [PauliOp.from_code(code, m) for code in range(start, 4**m)]
