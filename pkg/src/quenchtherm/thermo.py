"""Equilibrium objects and the three internal-energy definitions.

Everything works at a single inverse temperature beta (k_B = 1).  Partition
functions are always evaluated through shifted exponentials so large
beta * ||H|| cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite, StepTooLarge
from .operators import (
    DensityMatrix,
    Operator,
    hermitian_eig,
    identity,
    partial_trace,
)

DEFAULT_STEP_FRACTION = 1e-4


def _log_partition(evals: np.ndarray, beta: float) -> float:
    """ln Tr e^{-beta H} from the spectrum, overflow-safe."""
    shift = evals.min()
    return float(np.log(np.exp(-beta * (evals - shift)).sum()) - beta * shift)


@dataclass(frozen=True)
class GibbsEnsemble:
    """A Hamiltonian, its thermal state at beta, and ln Z."""

    hamiltonian: Operator
    beta: float
    state: DensityMatrix
    log_partition: float


@dataclass(frozen=True)
class MeanForceBundle:
    """Mean-force Hamiltonian, its beta-derivative companion, ln Z*_S and F_S."""

    h_star: Operator
    e_star: Operator
    log_z_star: float
    f_s: float


def _check_beta(beta: float):
    if not (np.isfinite(beta) and beta > 0):
        raise ValueError(f"beta must be positive and finite, got {beta}")


def gibbs(h: Operator, beta: float) -> GibbsEnsemble:
    """Thermal state e^{-beta H} / Z with its log partition function."""
    _check_beta(beta)
    dec = hermitian_eig(h)
    shift = dec.eigenvalues.min()
    weights = np.exp(-beta * (dec.eigenvalues - shift))
    z_shifted = weights.sum()
    state_mat = dec.apply(lambda _: weights / z_shifted)
    state = DensityMatrix(Operator(state_mat, h.dims))
    log_z = float(np.log(z_shifted) - beta * shift)
    return GibbsEnsemble(h, beta, state, log_z)


def log_partition(h: Operator, beta: float) -> float:
    _check_beta(beta)
    return _log_partition(hermitian_eig(h).eigenvalues, beta)


def mean_force_hamiltonian(h_sur: Operator, h_r: Operator, beta: float) -> Operator:
    """Effective system Hamiltonian reproducing the reduced thermal state.

    Computed as -(1/beta) [ln Tr_R e^{-beta H_SUR} - (ln Z_R) 1_S], with the
    trace evaluated on the shifted exponential for numerical safety.
    """
    _check_beta(beta)
    dec = hermitian_eig(h_sur)
    shift = dec.eigenvalues.min()
    exp_shifted = Operator(
        dec.apply(lambda ev: np.exp(-beta * (ev - shift))), h_sur.dims
    )
    traced = partial_trace(exp_shifted, "S")
    tdec = hermitian_eig(traced)
    if tdec.eigenvalues.min() <= 0:
        raise NotPositiveDefinite(
            f"Tr_R e^(-beta H) has eigenvalue {tdec.eigenvalues.min():.3e}"
        )
    # ln Tr_R e^{-beta H} = ln(traced) - beta * shift * 1_S
    log_traced = tdec.apply(np.log)
    d_s = traced.side
    log_z_r = log_partition(h_r, beta)
    mat = -(1.0 / beta) * (
        log_traced - (beta * shift + log_z_r) * np.eye(d_s)
    )
    return Operator(0.5 * (mat + mat.conj().T), (d_s,))


def effective_energy_operator(
    h_sur: Operator, h_r: Operator, beta: float, step: float | None = None
) -> Operator:
    """beta-derivative of beta * H*(beta) by central differences.

    Uses one Richardson extrapolation level: with D(h) the centered
    difference at step h, returns (4 D(h/2) - D(h)) / 3, symmetrized.
    """
    _check_beta(beta)
    if step is None:
        step = beta * DEFAULT_STEP_FRACTION
    if step >= beta:
        raise StepTooLarge(f"step {step} must be smaller than beta {beta}")

    def centered(h: float) -> np.ndarray:
        hi = mean_force_hamiltonian(h_sur, h_r, beta + h).matrix
        lo = mean_force_hamiltonian(h_sur, h_r, beta - h).matrix
        return ((beta + h) * hi - (beta - h) * lo) / (2.0 * h)

    d_full = centered(step)
    d_half = centered(step / 2.0)
    mat = (4.0 * d_half - d_full) / 3.0
    d_s = mat.shape[0]
    return Operator(0.5 * (mat + mat.conj().T), (d_s,))


def mean_force_bundle(
    h_sur: Operator, h_r: Operator, beta: float, step: float | None = None
) -> MeanForceBundle:
    h_star = mean_force_hamiltonian(h_sur, h_r, beta)
    e_star = effective_energy_operator(h_sur, h_r, beta, step)
    log_z_star = log_partition(h_star, beta)
    return MeanForceBundle(h_star, e_star, log_z_star, -log_z_star / beta)


def internal_energy_diff(
    rho_sur: DensityMatrix, h_sur: Operator, h_r: Operator, beta: float
) -> float:
    """Total internal energy minus the bare reservoir's equilibrium energy."""
    if rho_sur.dims != h_sur.dims:
        raise DimensionMismatch(f"dims {rho_sur.dims} vs {h_sur.dims}")
    u_total = h_sur.expectation(rho_sur.op)
    pi_r0 = gibbs(h_r, beta).state
    u_r0 = h_r.expectation(pi_r0.op)
    return u_total - u_r0


def internal_energy_hstar(rho_s: DensityMatrix, h_star: Operator) -> float:
    return h_star.expectation(rho_s.op)


def internal_energy_estar(rho_s: DensityMatrix, e_star: Operator) -> float:
    return e_star.expectation(rho_s.op)


def free_energies(
    h_sur: Operator, h_r: Operator, beta: float
) -> tuple[float, float, float]:
    """(F_SUR, F_S, F_R); F_S comes independently from the mean-force spectrum."""
    log_z_sur = log_partition(h_sur, beta)
    log_z_r = log_partition(h_r, beta)
    h_star = mean_force_hamiltonian(h_sur, h_r, beta)
    log_z_star = log_partition(h_star, beta)
    return (-log_z_sur / beta, -log_z_star / beta, -log_z_r / beta)


def thermal_entropy(u_s: float, f_s: float, beta: float) -> float:
    """Dimensionless thermodynamic entropy beta * (U_S - F_S)."""
    return beta * (u_s - f_s)


def embed_system(h_s: Operator, d_r: int) -> Operator:
    """Lift an operator on S to S (x) R as h_s (x) 1_R."""
    from .operators import tensor_product

    return tensor_product(h_s, identity(d_r))


def embed_reservoir(h_r: Operator, d_s: int) -> Operator:
    """Lift an operator on R to S (x) R as 1_S (x) h_r."""
    from .operators import tensor_product

    return tensor_product(identity(d_s), h_r)
