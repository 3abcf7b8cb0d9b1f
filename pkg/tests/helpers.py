"""Shared test utilities: phase alignment and dense-matrix references."""

import numpy as np


def align_phase(u, reference):
    """Multiply u by the unit phase that best matches it to reference,
    using the largest-magnitude entry of the reference as the anchor."""
    idx = np.unravel_index(np.argmax(np.abs(reference)), reference.shape)
    phase = reference[idx] / u[idx]
    phase /= abs(phase)
    return u * phase


def max_phase_deviation(u, reference):
    return np.max(np.abs(align_phase(u, reference) - reference))


def embed_dense(unitary, qubits, n_qubits):
    """Full 2**n x 2**n matrix acting as ``unitary`` on the given qubits
    (qubits[0] is the most significant bit of the small matrix's index) and
    identity elsewhere.  Built index by index, independent of any axis
    shuffling the simulator does."""
    unitary = np.asarray(unitary, dtype=complex)
    k = len(qubits)
    dim = 2 ** n_qubits
    full = np.zeros((dim, dim), dtype=complex)
    rest = [q for q in range(n_qubits) if q not in qubits]
    for col in range(dim):
        small_col = 0
        for pos, q in enumerate(qubits):
            small_col |= ((col >> q) & 1) << (k - 1 - pos)
        for small_row in range(2 ** k):
            amp = unitary[small_row, small_col]
            if amp == 0:
                continue
            row = 0
            for pos, q in enumerate(qubits):
                row |= ((small_row >> (k - 1 - pos)) & 1) << q
            for q in rest:
                row |= ((col >> q) & 1) << q
            full[row, col] += amp
    return full


def random_state(rng, n_qubits):
    """A normalized random complex vector."""
    vec = rng.standard_normal(2 ** n_qubits) + 1j * rng.standard_normal(2 ** n_qubits)
    return vec / np.linalg.norm(vec)


def random_unitary(rng, dim):
    """Haar-ish random unitary from the QR decomposition of a Ginibre
    matrix."""
    mat = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(mat)
    return q * (np.diag(r) / np.abs(np.diag(r)))
