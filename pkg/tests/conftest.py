import numpy as np
import pytest

from schmidt_cert import PauliOp, StateVector, to_dense


def dense_pair_expectation(psi: StateVector, p: PauliOp, q: PauliOp) -> float:
    """Oracle: build P tensor Q densely and evaluate <psi|M|psi>."""
    mat = np.kron(to_dense(p), to_dense(q))
    val = np.vdot(psi.amplitudes, mat @ psi.amplitudes)
    assert abs(val.imag) < 1e-10
    return float(val.real)


def brute_force_full_cm(psi: StateVector):
    """Oracle: full CM entry by entry from dense operators (tiny m only)."""
    from schmidt_cert import enumerate_all

    paulis = enumerate_all(psi.n_A, include_identity=True)
    t = np.empty((len(paulis), len(paulis)))
    for i, p in enumerate(paulis):
        for j, q in enumerate(paulis):
            t[i, j] = dense_pair_expectation(psi, p, q)
    return t


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
