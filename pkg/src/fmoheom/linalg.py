"""Dense complex linear algebra for small Hermitian matrices.

Everything in the simulator lives in dimension 7 (site basis) or 4
(chromophore pair), so plain dense numpy arrays are used throughout.
All tolerances are relative to the largest matrix entry so the checks
are scale-free.
"""

import numpy as np

# Pauli matrices sigma_1, sigma_2, sigma_3 in the computational basis.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class NonHermitianError(ValueError):
    """Raised when a matrix required to be Hermitian is not, beyond tolerance."""


def hermiticity_defect(a):
    """Return max|a - a^dagger| over all entries."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def check_hermitian(a, rtol=1e-9, name="matrix"):
    """Validate that `a` is square and Hermitian to a relative tolerance.

    The defect max|A - A^dagger| is compared against rtol * max|A|
    (with a floor of rtol for near-zero matrices).
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    scale = max(float(np.max(np.abs(a))), 1.0) if a.size else 1.0
    defect = hermiticity_defect(a)
    if defect > rtol * scale:
        raise NonHermitianError(
            f"{name} is not Hermitian: defect {defect:.3e} exceeds "
            f"{rtol:.1e} * max|entry| = {rtol * scale:.3e}"
        )
    return a


def hermitian_eigen(a, rtol=1e-9):
    """Eigendecomposition of a Hermitian matrix with a fixed phase convention.

    Returns (eigenvalues ascending, eigenvector matrix with eigenvectors as
    columns). Each eigenvector is rotated by a global phase so that its
    largest-magnitude component is real and positive, which makes the sign
    pattern of the coefficients deterministic.
    """
    a = check_hermitian(a, rtol=rtol, name="eigen input")
    vals, vecs = np.linalg.eigh(a)
    vecs = vecs.copy()
    for i in range(vecs.shape[1]):
        v = vecs[:, i]
        j = int(np.argmax(np.abs(v)))
        phase = v[j] / abs(v[j])
        vecs[:, i] = v / phase
    return vals, vecs


def trace_distance(a, b, rtol=1e-6):
    """Trace distance (1/2) sum |eigenvalues of A - B| between Hermitian matrices.

    The relative Hermiticity tolerance is loose by default because the
    inputs are typically states sampled along an integrated trajectory.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    check_hermitian(a, rtol=rtol, name="trace_distance A")
    check_hermitian(b, rtol=rtol, name="trace_distance B")
    d = a - b
    d = 0.5 * (d + d.conj().T)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(d))))


def commutator(a, b):
    """[A, B] = AB - BA."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def anticommutator(a, b):
    """{A, B} = AB + BA."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a @ b + b @ a
