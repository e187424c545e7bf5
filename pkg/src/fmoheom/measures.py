"""Bipartite correlation measures for chromophore pairs.

The reduced two-chromophore state is a 4x4 Hermitian matrix over the
product basis (both ground, n excited, m excited, both excited); its
double-excitation sector is empty because the model is restricted to one
excitation. Measures are evaluated on the trace-carrying reduced state
(trace <= 1 when trapping is active) without renormalization.

Each measure has two routes: a closed form valid for this single-excitation
family, and the general-purpose construction (Horodecki correlation matrix,
Wootters spin-flip) used as an independent cross-check.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import PAULI, SIGMA_Y, check_hermitian

# Basis ordering of the 4x4 pair state, qubit m first:
# index 0 = |0_m 0_n>, 1 = |0_m 1_n>, 2 = |1_m 0_n>, 3 = |1_m 1_n>.
GROUND_GROUND, N_EXCITED, M_EXCITED, DOUBLE = 0, 1, 2, 3


@dataclass(frozen=True)
class ReducedPairState:
    """Two-chromophore reduced state for sites m < n (1-based)."""

    m: int
    n: int
    matrix: np.ndarray
    source_trace: float

    @property
    def pop_m(self):
        return float(self.matrix[M_EXCITED, M_EXCITED].real)

    @property
    def pop_n(self):
        return float(self.matrix[N_EXCITED, N_EXCITED].real)

    @property
    def coherence(self):
        """The site-basis coherence rho_mn (complex)."""
        return complex(self.matrix[N_EXCITED, M_EXCITED])


def reduce_pair(rho, m, n):
    """Trace out all chromophores except m and n from the 7x7 state.

    The ground-ground population is Tr(rho) - rho_mm - rho_nn; the
    double-excitation row and column are identically zero.
    """
    if m == n:
        raise ValueError("pair sites must differ")
    if m > n:
        m, n = n, m
    rho = check_hermitian(rho, rtol=1e-6, name="full state")
    dim = rho.shape[0]
    if not (1 <= m <= dim and 1 <= n <= dim):
        raise ValueError(f"pair ({m},{n}) outside 1..{dim}")
    tr = float(np.trace(rho).real)
    if tr > 1.0 + 1e-9:
        raise ValueError(f"state trace {tr} exceeds 1")
    p_m = float(rho[m - 1, m - 1].real)
    p_n = float(rho[n - 1, n - 1].real)
    c = complex(rho[m - 1, n - 1])
    gg = tr - p_m - p_n
    if gg < -1e-9:
        raise ValueError(
            f"negative ground-ground population {gg:.3e}; full state is corrupted"
        )
    mat = np.zeros((4, 4), dtype=complex)
    mat[GROUND_GROUND, GROUND_GROUND] = gg
    mat[N_EXCITED, N_EXCITED] = p_n
    mat[M_EXCITED, M_EXCITED] = p_m
    mat[N_EXCITED, M_EXCITED] = c
    mat[M_EXCITED, N_EXCITED] = np.conj(c)
    return ReducedPairState(m=m, n=n, matrix=mat, source_trace=tr)


def correlation_matrix(rho4):
    """3x3 Pauli correlation matrix t_ab = Tr(rho sigma_a x sigma_b)."""
    rho4 = check_hermitian(rho4, rtol=1e-6, name="pair state")
    t = np.empty((3, 3))
    for a in range(3):
        for b in range(3):
            t[a, b] = np.trace(rho4 @ np.kron(PAULI[a], PAULI[b])).real
    return t


def horodecki_M(rho4):
    """Sum of the two largest eigenvalues of T^T T.

    The state violates the CHSH inequality iff M > 1; the Cirel'son bound
    caps M at 2 for physical states.
    """
    t = correlation_matrix(rho4)
    evals = np.linalg.eigvalsh(t.T @ t)
    return float(evals[-1] + evals[-2])


def nonlocality_B(rho4):
    """CHSH nonlocality measure sqrt(max(M - 1, 0)) in [0, 1]."""
    return float(np.sqrt(max(horodecki_M(rho4) - 1.0, 0.0)))


@dataclass(frozen=True)
class PairMeasures:
    B: float
    C: float
    l1: float
    mu1: float
    mu3: float


def closed_form_measures(reduced):
    """Closed-form B, concurrence and l1 coherence for a single-excitation pair.

    The correlation-matrix spectrum for this family is mu1 = mu2 =
    4|rho_mn|^2 and mu3 = (Tr - 2(rho_mm + rho_nn))^2, so
    M = max(8|rho_mn|^2, 4|rho_mn|^2 + mu3); concurrence and l1 coherence
    both equal 2|rho_mn|.
    """
    c_abs = abs(reduced.coherence)
    mu1 = 4.0 * c_abs ** 2
    mu3 = (reduced.source_trace - 2.0 * (reduced.pop_m + reduced.pop_n)) ** 2
    m_val = max(2.0 * mu1, mu1 + mu3)
    b = float(np.sqrt(max(m_val - 1.0, 0.0)))
    c = 2.0 * c_abs
    return PairMeasures(B=b, C=c, l1=c, mu1=mu1, mu3=mu3)


def wootters_concurrence(rho4):
    """Wootters concurrence from the spin-flipped R operator.

    Conjugation is taken in the computational product basis. For
    single-excitation reduced states this equals 2|rho_mn| including the
    trace-deficient case.
    """
    rho4 = check_hermitian(rho4, rtol=1e-6, name="pair state")
    evals = np.linalg.eigvalsh(rho4)
    if evals[0] < -1e-8 * max(evals[-1], 1.0):
        raise ValueError(f"pair state is not positive (min eigenvalue {evals[0]:.3e})")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    # The eigenvalues of R = sqrt(sqrt(rho) rho_tilde sqrt(rho)) are the
    # square roots of the eigenvalues of rho @ rho_tilde.
    rho_tilde = yy @ rho4.conj() @ yy
    lam2 = np.linalg.eigvals(rho4 @ rho_tilde)
    lam = np.sort(np.sqrt(np.clip(lam2.real, 0.0, None)))[::-1]
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0))


def positivity_bound_check(reduced, tol=1e-9):
    """|rho_mn| <= sqrt(rho_mm rho_nn), forced by positivity of the pair state."""
    bound = np.sqrt(max(reduced.pop_m, 0.0) * max(reduced.pop_n, 0.0))
    return abs(reduced.coherence) <= bound + tol


@dataclass(frozen=True)
class CorrelationTimeSeries:
    """Per-pair measures along a trajectory, on the trajectory's output grid."""

    m: int
    n: int
    times_fs: np.ndarray
    B: np.ndarray
    C: np.ndarray
    l1: np.ndarray
    mu1: np.ndarray
    mu3: np.ndarray


def pair_series(trajectory, m, n):
    """Closed-form measures for pair (m, n) at every output time."""
    T = trajectory.times_fs.shape[0]
    cols = {k: np.empty(T) for k in ("B", "C", "l1", "mu1", "mu3")}
    for i in range(T):
        meas = closed_form_measures(reduce_pair(trajectory.rhos[i], m, n))
        cols["B"][i] = meas.B
        cols["C"][i] = meas.C
        cols["l1"][i] = meas.l1
        cols["mu1"][i] = meas.mu1
        cols["mu3"][i] = meas.mu3
    mm, nn = min(m, n), max(m, n)
    return CorrelationTimeSeries(m=mm, n=nn, times_fs=trajectory.times_fs, **cols)


def all_pairs(n_sites=7):
    return [(m, n) for m in range(1, n_sites + 1) for n in range(m + 1, n_sites + 1)]
