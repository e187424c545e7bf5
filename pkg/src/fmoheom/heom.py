"""Hierarchically coupled equations of motion for the FMO monomer.

The full hierarchy state is a (count, n, n) complex array of auxiliary
operators zeta(n); slot 0 is the physical density operator. The right-hand
side is evaluated vectorized over all hierarchy nodes, with missing
neighbors (above the truncation depth, or n_k = 0) routed to a padded
zero block. Integration uses the adaptive Dormand-Prince 5(4) pair
(scipy's RK45) with per-step dense output sampled onto a uniform grid.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import RK45

from .hierarchy import enumerate_hierarchy
from .linalg import commutator, anticommutator
from .model import UnitSystem, build_hamiltonian, thermal_prefactors


@dataclass(frozen=True)
class IntegratorConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    initial_step_fs: float = 0.01
    max_step_fs: float = 10.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.initial_step_fs <= 0 or self.max_step_fs <= 0:
            raise ValueError("step sizes must be positive")


class IntegrationError(RuntimeError):
    """Integration failed (step-size underflow or tolerance not met)."""


def shifted_hamiltonian(params, units=UnitSystem()):
    """H_e plus the site reorganization shifts, in rad/fs."""
    h = build_hamiltonian(params, units)
    lam = thermal_prefactors(params, units).lam
    return h + np.diag(lam.astype(complex))


def apply_liouvillian(g, h_shifted):
    """Unitary part: [H_e + sum_k lambda_k |k><k|, g]."""
    return commutator(h_shifted, g)


def _projector(k, n):
    v = np.zeros((n, n), dtype=complex)
    v[k - 1, k - 1] = 1.0
    return v


def apply_phi(k, g):
    """Upward coupling Phi_k g = i [|k><k|, g] (k is 1-based)."""
    g = np.asarray(g, dtype=complex)
    return 1j * commutator(_projector(k, g.shape[0]), g)


def apply_theta(k, g, prefactors):
    """Downward coupling Theta_k g = i (2 lam_k / beta) [V_k, g] + lam_k gamma_k {V_k, g}."""
    g = np.asarray(g, dtype=complex)
    v = _projector(k, g.shape[0])
    return (1j * prefactors.theta_comm[k - 1] * commutator(v, g)
            + prefactors.theta_anti[k - 1] * anticommutator(v, g))


def apply_trapping(g, trap_sites, r_trap):
    """Reaction-center trapping: -r_trap sum_s {|s><s|, g} over trap sites."""
    if r_trap < 0:
        raise ValueError("trap rate must be nonnegative")
    g = np.asarray(g, dtype=complex)
    out = np.zeros_like(g)
    for s in trap_sites:
        out -= r_trap * anticommutator(_projector(s, g.shape[0]), g)
    return out


@dataclass(frozen=True)
class Trajectory:
    """Physical density operator sampled on a uniform output grid."""

    times_fs: np.ndarray  # (T,)
    rhos: np.ndarray      # (T, n, n) complex
    hierarchy_count: int

    def populations(self):
        """Real site populations, shape (T, n)."""
        return np.real(np.einsum("tii->ti", self.rhos))

    def traces(self):
        return np.real(np.trace(self.rhos, axis1=1, axis2=2))


class HEOMPropagator:
    """Precomputed HEOM right-hand side and integrator for fixed parameters."""

    def __init__(self, params, config=None, units=UnitSystem()):
        self.params = params
        self.config = config or IntegratorConfig()
        self.units = units
        self.space = enumerate_hierarchy(params.n_sites, params.truncation_N)
        self.pref = thermal_prefactors(params, units)
        self.h_shifted = shifted_hamiltonian(params, units)

        n = params.n_sites
        count = self.space.count
        # Missing neighbors point at the padded zero block at index `count`.
        self._ip = np.where(self.space.neighbors_plus >= 0,
                            self.space.neighbors_plus, count)
        self._im = np.where(self.space.neighbors_minus >= 0,
                            self.space.neighbors_minus, count)
        self._nk = self.space.indices.astype(float)          # (count, n)
        self._damp = self._nk @ self.pref.gamma              # (count,)
        self._trap_rate = params.trap_rate_inv_fs
        self._trap_idx = [s - 1 for s in params.trap_sites]
        self._pad = np.zeros((count + 1, n, n), dtype=complex)

    @property
    def count(self):
        return self.space.count

    def initial_hierarchy(self, rho0):
        """Factorized initial condition: physical state at the top, auxiliaries zero."""
        rho0 = np.asarray(rho0, dtype=complex)
        n = self.params.n_sites
        if rho0.shape != (n, n):
            raise ValueError(f"initial state must be {n}x{n}")
        z = np.zeros((self.count, n, n), dtype=complex)
        z[0] = rho0
        return z

    def rhs(self, t, zetas):
        """Time derivative of the full hierarchy state, shape (count, n, n)."""
        zetas = np.asarray(zetas)
        if zetas.shape != self._pad[:-1].shape:
            raise ValueError(f"hierarchy state must have shape "
                             f"{self._pad[:-1].shape}, got {zetas.shape}")
        pad = self._pad
        pad[:-1] = zetas
        pad[-1] = 0.0
        z = pad[:-1]

        h = self.h_shifted
        dz = -1j * (np.matmul(h, z) - np.matmul(z, h))
        dz -= self._damp[:, None, None] * z

        a = self.pref.theta_comm
        b = self.pref.theta_anti
        for k in range(self.params.n_sites):
            zp = pad[self._ip[:, k]]
            # Phi_k zeta(n_{k+}) = i [V_k, .]: adds i*row_k, subtracts i*col_k.
            dz[:, k, :] += 1j * zp[:, k, :]
            dz[:, :, k] -= 1j * zp[:, :, k]
            zm = pad[self._im[:, k]]
            c = self._nk[:, k][:, None]
            # n_k Theta_k zeta(n_{k-}): commutator + anticommutator pieces.
            dz[:, k, :] += c * ((1j * a[k] + b[k]) * zm[:, k, :])
            dz[:, :, k] += c * ((-1j * a[k] + b[k]) * zm[:, :, k])

        if self._trap_rate > 0:
            r = self._trap_rate
            for s in self._trap_idx:
                dz[:, s, :] -= r * z[:, s, :]
                dz[:, :, s] -= r * z[:, :, s]
        return dz

    def _rhs_flat(self, t, y):
        n = self.params.n_sites
        return self.rhs(t, y.reshape(self.count, n, n)).reshape(-1)

    def run(self, rho0, t_end_fs=None, dt_out_fs=None):
        """Integrate from a factorized initial condition; return a Trajectory.

        Only the physical operator zeta(0) is stored at output times, via
        the integrator's dense output, so memory stays flat in the grid size.
        """
        t_end = float(t_end_fs if t_end_fs is not None else self.params.t_end_fs)
        dt_out = float(dt_out_fs if dt_out_fs is not None else self.params.dt_out_fs)
        n = self.params.n_sites
        n_out = int(round(t_end / dt_out))
        times = np.arange(n_out + 1) * dt_out

        y0 = self.initial_hierarchy(rho0).reshape(-1)
        rhos = np.empty((n_out + 1, n, n), dtype=complex)
        rhos[0] = np.asarray(rho0, dtype=complex)

        solver = RK45(
            self._rhs_flat, 0.0, y0, t_bound=t_end,
            rtol=self.config.rel_tol, atol=self.config.abs_tol,
            first_step=self.config.initial_step_fs,
            max_step=self.config.max_step_fs,
        )
        next_i = 1
        while solver.status == "running":
            solver.step()
            if solver.status == "failed":
                raise IntegrationError(
                    f"Dormand-Prince step failed at t = {solver.t:.6g} fs "
                    "(step-size underflow or tolerance not met)"
                )
            interp = None
            while next_i <= n_out and times[next_i] <= solver.t + 1e-12:
                if interp is None:
                    interp = solver.dense_output()
                y = interp(min(times[next_i], solver.t))
                rhos[next_i] = y[: n * n].reshape(n, n)
                next_i += 1
        if next_i <= n_out:
            raise IntegrationError(
                f"integration stopped at t = {solver.t:.6g} fs before reaching "
                f"{t_end:.6g} fs"
            )
        return Trajectory(times_fs=times, rhos=rhos, hierarchy_count=self.count)


def integrate(rho0, params, config=None):
    """One-shot integration with parameters taken from `params`."""
    return HEOMPropagator(params, config).run(rho0)


def convergence_study(rho0, params, n_values, config=None):
    """Trace-distance convergence D(N, N+1) maximized over the output grid.

    Returns a list of (N, D) pairs for every N in `n_values`. Trajectories
    are shared between adjacent truncation levels.
    """
    from .linalg import trace_distance

    n_values = sorted(set(int(v) for v in n_values))
    needed = sorted(set(n_values) | {v + 1 for v in n_values})
    trajs = {}
    for n_trunc in needed:
        p = params.with_overrides(truncation_N=n_trunc)
        trajs[n_trunc] = HEOMPropagator(p, config).run(rho0)
    out = []
    for n_trunc in n_values:
        a, b = trajs[n_trunc], trajs[n_trunc + 1]
        d = max(
            trace_distance(ra, rb, rtol=1e-4)
            for ra, rb in zip(a.rhos, b.rhos)
        )
        out.append((n_trunc, d))
    return out
