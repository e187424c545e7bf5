"""FMO monomer model: Hamiltonian, physical parameters, units, initial states.

Energies enter in cm^-1 and are converted to angular frequency (rad/fs)
with hbar = 1, so femtoseconds are the native time unit of the dynamics.
Site indices are 1-based in every public interface.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .linalg import hermitian_eigen

# Speed of light in cm/fs; 1 cm^-1 corresponds to 2*pi*c rad/fs.
C_CM_PER_FS = 2.99792458e-5
CM_TO_RADFS = 2.0 * np.pi * C_CM_PER_FS
# Boltzmann constant in cm^-1 per kelvin.
KB_CM_PER_K = 0.69503


@dataclass(frozen=True)
class UnitSystem:
    cm_to_radfs: float = CM_TO_RADFS
    kB_cm_per_K: float = KB_CM_PER_K


# Electronic Hamiltonian of one FMO monomer (Chlorobaculum tepidum) in cm^-1.
# The common 12210 cm^-1 offset on the diagonal is dropped: it shifts every
# single-excitation state equally and only contributes a global phase.
FMO_HAMILTONIAN_CM = np.array(
    [
        [200.0, -87.7, 5.5, -5.9, 6.7, -13.7, -9.9],
        [-87.7, 320.0, 30.8, 8.2, 0.7, 11.8, 4.3],
        [5.5, 30.8, 0.0, -53.5, -2.2, -9.6, 6.0],
        [-5.9, 8.2, -53.5, 110.0, -70.7, -17.0, -63.3],
        [6.7, 0.7, -2.2, -70.7, 270.0, 81.1, -1.3],
        [-13.7, 11.8, -9.6, -17.0, 81.1, 420.0, 39.7],
        [-9.9, 4.3, 6.0, -63.3, -1.3, 39.7, 230.0],
    ]
)


def _default_hamiltonian():
    return FMO_HAMILTONIAN_CM.copy()


@dataclass(frozen=True)
class SystemParams:
    """Physical and numerical parameters of one simulation.

    lambda_cm / gamma_inv_fs are uniform across sites (scalars broadcast
    to all 7 chromophores); gamma_inv_fs is the bath relaxation time scale,
    i.e. gamma_k = 1 / gamma_inv_fs.
    """

    n_sites: int = 7
    hamiltonian_cm: np.ndarray = field(default_factory=_default_hamiltonian)
    lambda_cm: float = 35.0
    gamma_inv_fs: float = 50.0
    temperature_K: float = 300.0
    trap_rate_inv_ps: float = 1.0
    trap_sites: tuple = (3, 4)
    truncation_N: int = 12
    t_end_fs: float = 1000.0
    dt_out_fs: float = 1.0

    def __post_init__(self):
        h = np.asarray(self.hamiltonian_cm, dtype=float)
        if h.shape != (self.n_sites, self.n_sites):
            raise ValueError(f"hamiltonian must be {self.n_sites}x{self.n_sites}")
        if np.max(np.abs(h - h.T)) > 1e-12 * max(np.max(np.abs(h)), 1.0):
            raise ValueError("hamiltonian_cm must be symmetric")
        if self.lambda_cm <= 0:
            raise ValueError("lambda_cm must be positive")
        if self.gamma_inv_fs <= 0:
            raise ValueError("gamma_inv_fs must be positive")
        if self.temperature_K <= 0:
            raise ValueError("temperature_K must be positive")
        if self.trap_rate_inv_ps < 0:
            raise ValueError("trap_rate_inv_ps must be nonnegative")
        if self.truncation_N < 0:
            raise ValueError("truncation_N must be nonnegative")
        if self.t_end_fs <= 0 or self.dt_out_fs <= 0:
            raise ValueError("t_end_fs and dt_out_fs must be positive")
        for s in self.trap_sites:
            if not 1 <= s <= self.n_sites:
                raise ValueError(f"trap site {s} outside 1..{self.n_sites}")
        object.__setattr__(self, "hamiltonian_cm", h)

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)

    @property
    def trap_rate_inv_fs(self):
        """Trap rate r_trap in fs^-1 (input time scale is in ps)."""
        if self.trap_rate_inv_ps == 0:
            return 0.0
        return 1.0 / (self.trap_rate_inv_ps * 1000.0)


def build_hamiltonian(params, units=UnitSystem()):
    """Electronic Hamiltonian as a complex matrix in rad/fs."""
    return params.hamiltonian_cm.astype(complex) * units.cm_to_radfs


@dataclass(frozen=True)
class ExcitonBasis:
    """Eigenstates of the electronic Hamiltonian, ordered by increasing energy.

    coeffs[r, k] is the real coefficient c_rk of exciton r (0-based row r-1)
    on site k (0-based column k-1); the phase convention makes the
    largest-magnitude coefficient of each exciton positive.
    """

    energies_cm: np.ndarray
    coeffs: np.ndarray

    def weight(self, r, x):
        """Population weight |c_rx|^2 of exciton r on site x (both 1-based)."""
        return float(self.coeffs[r - 1, x - 1] ** 2)


def exciton_basis(params):
    """Diagonalize the electronic Hamiltonian (in cm^-1) into exciton states."""
    vals, vecs = hermitian_eigen(params.hamiltonian_cm.astype(complex))
    gaps = np.diff(vals)
    if np.any(gaps < 1.0):
        raise ValueError(
            f"exciton energies nearly degenerate (min gap {gaps.min():.3g} cm^-1); "
            "ascending ordering is ill-defined"
        )
    coeffs = vecs.T.real  # real symmetric input, imaginary parts are exactly 0
    return ExcitonBasis(energies_cm=vals, coeffs=coeffs)


def _check_site(x, n_sites=7):
    if not 1 <= x <= n_sites:
        raise ValueError(f"site index {x} outside 1..{n_sites}")


def localized_state(x, n_sites=7):
    """Density matrix |x><x| for an excitation localized on chromophore x."""
    _check_site(x, n_sites)
    rho = np.zeros((n_sites, n_sites), dtype=complex)
    rho[x - 1, x - 1] = 1.0
    return rho


def fret_state(x, basis):
    """FRET initial state: mixture of excitons weighted by their site-x amplitude.

    rho = sum_r c_rx^2 |e_r><e_r|, which is stationary under the electronic
    Hamiltonian but carries site-basis coherences.
    """
    n = basis.coeffs.shape[0]
    _check_site(x, n)
    rho = np.zeros((n, n), dtype=complex)
    for r in range(n):
        v = basis.coeffs[r]
        rho += v[x - 1] ** 2 * np.outer(v, v)
    return rho


@dataclass(frozen=True)
class ThermalPrefactors:
    """Per-site bath coefficients in consistent rad/fs powers (hbar = 1).

    lam: reorganization energies (rad/fs); gamma: relaxation rates (fs^-1);
    theta_comm: 2*lambda/beta (rad^2/fs^2), coefficient of the commutator
    part of the downward coupling; theta_anti: lambda*gamma (rad/fs^2),
    coefficient of its anticommutator part.
    """

    lam: np.ndarray
    gamma: np.ndarray
    theta_comm: np.ndarray
    theta_anti: np.ndarray


def thermal_prefactors(params, units=UnitSystem()):
    """Convert bath parameters to the coefficient families used by the hierarchy."""
    n = params.n_sites
    lam = np.full(n, params.lambda_cm * units.cm_to_radfs)
    gamma = np.full(n, 1.0 / params.gamma_inv_fs)
    kT_radfs = units.kB_cm_per_K * params.temperature_K * units.cm_to_radfs
    theta_comm = 2.0 * lam * kT_radfs  # 2*lambda/beta with beta = 1/kT
    theta_anti = lam * gamma
    return ThermalPrefactors(lam=lam, gamma=gamma, theta_comm=theta_comm,
                             theta_anti=theta_anti)
