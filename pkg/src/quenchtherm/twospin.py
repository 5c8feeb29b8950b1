"""Closed-form ground truth for the two-spin benchmark model.

The model is H = (eps/2) sz_S + (alpha/2) sz_R + gamma sz_S sz_R
+ chi sx_S sx_R on two qubits.  Every thermodynamic quantity of its sudden
quenches has an explicit scalar expression; this module evaluates those
expressions directly, sharing no linear-algebra code with the generic
engine so the two can check each other.

Conventions: eta_pm = sqrt((eps/2 +- alpha/2)^2 + chi^2) and
a_pm = (eps +- alpha)/2.  X_pm are the (unnormalized) populations of the
reduced thermal state in the sz_S eigenbasis, with Z_SUR = X_- + X_+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .operators import Operator

VIOLATION_THRESHOLD = 1e-6


@dataclass(frozen=True)
class TwoSpinParams:
    epsilon: float
    alpha: float
    gamma: float
    chi: float
    beta: float

    def __post_init__(self):
        for name in ("epsilon", "alpha", "gamma", "chi", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class ClosedFormStatics:
    """Partition function, reduced-state populations, and effective operators."""

    z_sur: float
    x_minus: float
    x_plus: float
    d_beta_x_minus: float
    d_beta_x_plus: float
    h_star_diag: tuple[float, float]
    e_star_diag: tuple[float, float]


@dataclass(frozen=True)
class OracleLedger:
    """Closed-form counterpart of the generic engine's quench ledger."""

    w_diff: float
    w_hstar: float
    w_estar: float
    q_diff: float
    q_hstar: float
    q_estar: float
    delta_f_s: float
    delta_s_diff: float
    delta_s_hstar: float
    delta_s_estar: float
    diss_diff: float
    diss_hstar: float
    diss_estar: float
    second_law_w: tuple[bool, bool, bool]
    second_law_q: tuple[bool, bool, bool]
    beta: float
    z_sur: float
    x_minus: float
    x_plus: float
    d_beta_x_minus: float
    d_beta_x_plus: float

    FIELDS = (
        "w_diff", "w_hstar", "w_estar",
        "q_diff", "q_hstar", "q_estar",
        "delta_f_s",
        "delta_s_diff", "delta_s_hstar", "delta_s_estar",
        "diss_diff", "diss_hstar", "diss_estar",
    )

    def numeric_fields(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.FIELDS}


def _ratio(a: float, eta: float) -> float:
    # a/eta is bounded by 1 since eta^2 = a^2 + chi^2; at eta = 0 both vanish
    return a / eta if eta > 0 else 0.0


def closed_form_statics(p: TwoSpinParams) -> ClosedFormStatics:
    """Evaluate Z_SUR, X_pm, their beta-derivatives, H*_S and E*_S."""
    b = p.beta
    eta_p = math.sqrt((p.epsilon / 2 + p.alpha / 2) ** 2 + p.chi**2)
    eta_m = math.sqrt((p.epsilon / 2 - p.alpha / 2) ** 2 + p.chi**2)
    a_p = (p.epsilon + p.alpha) / 2
    a_m = (p.epsilon - p.alpha) / 2
    em = math.exp(-b * p.gamma)
    ep = math.exp(b * p.gamma)

    z_sur = 2 * em * math.cosh(b * eta_p) + 2 * ep * math.cosh(b * eta_m)

    def x(sign: float) -> float:
        return em * (
            math.cosh(b * eta_p) + sign * _ratio(a_p, eta_p) * math.sinh(b * eta_p)
        ) + ep * (
            math.cosh(b * eta_m) + sign * _ratio(a_m, eta_m) * math.sinh(b * eta_m)
        )

    def dx(sign: float) -> float:
        # term-wise beta-derivative of x(sign); d/dbeta of e^{-+ b gamma} brings
        # down -+ gamma, cosh/sinh differentiate to eta sinh / eta cosh, and the
        # (a/eta) sinh term differentiates to a cosh
        term_p = em * (
            -p.gamma * (math.cosh(b * eta_p) + sign * _ratio(a_p, eta_p) * math.sinh(b * eta_p))
            + eta_p * math.sinh(b * eta_p)
            + sign * a_p * math.cosh(b * eta_p)
        )
        term_m = ep * (
            p.gamma * (math.cosh(b * eta_m) + sign * _ratio(a_m, eta_m) * math.sinh(b * eta_m))
            + eta_m * math.sinh(b * eta_m)
            + sign * a_m * math.cosh(b * eta_m)
        )
        return term_p + term_m

    x_minus, x_plus = x(-1.0), x(+1.0)
    dx_minus, dx_plus = dx(-1.0), dx(+1.0)

    denom = 2 * math.cosh(b * p.alpha / 2)
    h_star = (-math.log(x_minus / denom) / b, -math.log(x_plus / denom) / b)
    tanh_term = (p.alpha / 2) * math.tanh(b * p.alpha / 2)
    e_star = (-dx_minus / x_minus + tanh_term, -dx_plus / x_plus + tanh_term)

    return ClosedFormStatics(z_sur, x_minus, x_plus, dx_minus, dx_plus, h_star, e_star)


def _assemble(beta, works, heats, delta_f_s, entropies, statics_b) -> OracleLedger:
    diss = tuple(w - delta_f_s for w in works)
    flags_w = tuple(d >= -VIOLATION_THRESHOLD for d in diss)
    flags_q = tuple(
        ds / beta - q >= -VIOLATION_THRESHOLD for ds, q in zip(entropies, heats)
    )
    return OracleLedger(
        w_diff=works[0], w_hstar=works[1], w_estar=works[2],
        q_diff=heats[0], q_hstar=heats[1], q_estar=heats[2],
        delta_f_s=delta_f_s,
        delta_s_diff=entropies[0], delta_s_hstar=entropies[1],
        delta_s_estar=entropies[2],
        diss_diff=diss[0], diss_hstar=diss[1], diss_estar=diss[2],
        second_law_w=flags_w, second_law_q=flags_q, beta=beta,
        z_sur=statics_b.z_sur,
        x_minus=statics_b.x_minus, x_plus=statics_b.x_plus,
        d_beta_x_minus=statics_b.d_beta_x_minus,
        d_beta_x_plus=statics_b.d_beta_x_plus,
    )


def system_quench_ledger(p_a: TwoSpinParams, epsilon_b: float) -> OracleLedger:
    """Closed-form ledger for an abrupt change of the system field epsilon."""
    b = p_a.beta
    p_b = replace(p_a, epsilon=epsilon_b)
    sa = closed_form_statics(p_a)
    sb = closed_form_statics(p_b)

    em = math.exp(-b * p_a.gamma)
    ep = math.exp(b * p_a.gamma)
    eta_p_a = math.sqrt((p_a.epsilon / 2 + p_a.alpha / 2) ** 2 + p_a.chi**2)
    eta_m_a = math.sqrt((p_a.epsilon / 2 - p_a.alpha / 2) ** 2 + p_a.chi**2)
    eta_p_b = math.sqrt((epsilon_b / 2 + p_a.alpha / 2) ** 2 + p_a.chi**2)
    eta_m_b = math.sqrt((epsilon_b / 2 - p_a.alpha / 2) ** 2 + p_a.chi**2)
    a_p_a, a_m_a = (p_a.epsilon + p_a.alpha) / 2, (p_a.epsilon - p_a.alpha) / 2
    a_p_b, a_m_b = (epsilon_b + p_a.alpha) / 2, (epsilon_b - p_a.alpha) / 2

    w_diff = (p_a.epsilon - epsilon_b) / sa.z_sur * (
        _ratio(a_p_a, eta_p_a) * em * math.sinh(b * eta_p_a)
        + _ratio(a_m_a, eta_m_a) * ep * math.sinh(b * eta_m_a)
    )
    w_hstar = -1.0 / (b * sa.z_sur) * (
        sa.x_minus * math.log(sb.x_minus / sa.x_minus)
        + sa.x_plus * math.log(sb.x_plus / sa.x_plus)
    )
    w_estar = (
        sa.d_beta_x_minus
        - sa.x_minus / sb.x_minus * sb.d_beta_x_minus
        + sa.d_beta_x_plus
        - sa.x_plus / sb.x_plus * sb.d_beta_x_plus
    ) / sa.z_sur

    g = p_a.gamma
    q_diff = (
        2 * g * (em * math.cosh(b * eta_p_b) - ep * math.cosh(b * eta_m_b))
        - 2 * eta_p_b * em * math.sinh(b * eta_p_b)
        - 2 * eta_m_b * ep * math.sinh(b * eta_m_b)
    ) / sb.z_sur + (
        2 * g * (-em * math.cosh(b * eta_p_a) + ep * math.cosh(b * eta_m_a))
        + 2 * em * math.sinh(b * eta_p_a) * (a_p_b * a_p_a + p_a.chi**2) / eta_p_a
        + 2 * ep * math.sinh(b * eta_m_a) * (a_m_b * a_m_a + p_a.chi**2) / eta_m_a
    ) / sa.z_sur
    q_hstar = (
        (sa.x_minus / sa.z_sur - sb.x_minus / sb.z_sur) * math.log(sb.x_minus)
        + (sa.x_plus / sa.z_sur - sb.x_plus / sb.z_sur) * math.log(sb.x_plus)
    ) / b
    q_estar = (
        (sa.x_minus / sa.z_sur - sb.x_minus / sb.z_sur)
        * sb.d_beta_x_minus / sb.x_minus
        + (sa.x_plus / sa.z_sur - sb.x_plus / sb.z_sur)
        * sb.d_beta_x_plus / sb.x_plus
    )

    delta_f_s = -math.log(
        (em * math.cosh(b * eta_p_b) + ep * math.cosh(b * eta_m_b))
        / (em * math.cosh(b * eta_p_a) + ep * math.cosh(b * eta_m_a))
    ) / b

    ds_diff = -b * (
        (sb.d_beta_x_minus + sb.d_beta_x_plus) / sb.z_sur
        - (sa.d_beta_x_minus + sa.d_beta_x_plus) / sa.z_sur
    ) + math.log(sb.z_sur / sa.z_sur)
    ds_hstar = (
        sb.x_minus / sb.z_sur * math.log(sb.z_sur / sb.x_minus)
        - sa.x_minus / sa.z_sur * math.log(sa.z_sur / sa.x_minus)
        + sb.x_plus / sb.z_sur * math.log(sb.z_sur / sb.x_plus)
        - sa.x_plus / sa.z_sur * math.log(sa.z_sur / sa.x_plus)
    )

    return _assemble(
        b,
        (w_diff, w_hstar, w_estar),
        (q_diff, q_hstar, q_estar),
        delta_f_s,
        (ds_diff, ds_hstar, ds_diff),
        sb,
    )


def interaction_quench_ledger(
    epsilon: float, alpha: float, gamma_b: float, chi_b: float, beta: float
) -> OracleLedger:
    """Closed-form ledger for abruptly switching the couplings on from zero."""
    b = beta
    p_b = TwoSpinParams(epsilon, alpha, gamma_b, chi_b, beta)
    sb = closed_form_statics(p_b)

    eta_p = math.sqrt((epsilon / 2 + alpha / 2) ** 2 + chi_b**2)
    eta_m = math.sqrt((epsilon / 2 - alpha / 2) ** 2 + chi_b**2)
    a_p, a_m = (epsilon + alpha) / 2, (epsilon - alpha) / 2
    g = gamma_b
    em = math.exp(-b * g)
    ep = math.exp(b * g)
    ce = math.cosh(b * epsilon / 2)
    ca = math.cosh(b * alpha / 2)
    te = (epsilon / 2) * math.tanh(b * epsilon / 2)
    ta = (alpha / 2) * math.tanh(b * alpha / 2)
    # initial-state Boltzmann weights of S in the sz_S eigenbasis
    pop_m = math.exp(-b * epsilon / 2) / (2 * ce)
    pop_p = math.exp(b * epsilon / 2) / (2 * ce)

    free_term = (
        2 * a_p * math.sinh(b * a_p)
        - 2 * g * math.cosh(b * a_p)
        + 2 * a_m * math.sinh(b * a_m)
        + 2 * g * math.cosh(b * a_m)
    ) / (4 * ce * ca)
    w_diff = te + ta - free_term
    w_hstar = -(
        (pop_m * math.log(sb.x_minus) + pop_p * math.log(sb.x_plus))
        - math.log(2 * ca)
    ) / b + te
    w_estar = te + ta - (
        pop_m * sb.d_beta_x_minus / sb.x_minus
        + pop_p * sb.d_beta_x_plus / sb.x_plus
    )

    q_diff = (
        2 * g * (em * math.cosh(b * eta_p) - ep * math.cosh(b * eta_m))
        - 2 * eta_p * em * math.sinh(b * eta_p)
        - 2 * eta_m * ep * math.sinh(b * eta_m)
    ) / sb.z_sur + free_term
    q_hstar = (
        (pop_m - sb.x_minus / sb.z_sur) * math.log(sb.x_minus)
        + (pop_p - sb.x_plus / sb.z_sur) * math.log(sb.x_plus)
    ) / b
    q_estar = (
        (pop_m / sb.x_minus - 1.0 / sb.z_sur) * sb.d_beta_x_minus
        + (pop_p / sb.x_plus - 1.0 / sb.z_sur) * sb.d_beta_x_plus
    )

    delta_f_s = -math.log(
        (em * math.cosh(b * eta_p) + ep * math.cosh(b * eta_m)) / (2 * ce * ca)
    ) / b

    ds_diff = (
        b * te + b * ta
        - b * (sb.d_beta_x_minus + sb.d_beta_x_plus) / sb.z_sur
        + math.log(sb.z_sur / (4 * ce * ca))
    )
    ds_hstar = (
        b * te
        - (sb.x_minus * math.log(sb.x_minus) + sb.x_plus * math.log(sb.x_plus))
        / sb.z_sur
        + math.log(2 * ca)
        + math.log(sb.z_sur / (4 * ce * ca))
    )

    return _assemble(
        b,
        (w_diff, w_hstar, w_estar),
        (q_diff, q_hstar, q_estar),
        delta_f_s,
        (ds_diff, ds_hstar, ds_diff),
        sb,
    )


def two_spin_hamiltonian(p: TwoSpinParams) -> Operator:
    """The 4x4 benchmark Hamiltonian, S qubit leading."""
    sz = np.diag([1.0, -1.0]).astype(complex)
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    mat = (
        (p.epsilon / 2) * np.kron(sz, eye)
        + (p.alpha / 2) * np.kron(eye, sz)
        + p.gamma * np.kron(sz, sz)
        + p.chi * np.kron(sx, sx)
    )
    return Operator(mat, (2, 2))


def reservoir_hamiltonian(p: TwoSpinParams) -> Operator:
    """Bare reservoir term (alpha/2) sz_R."""
    return Operator((p.alpha / 2) * np.diag([1.0, -1.0]).astype(complex), (2,))


def build_lgt_hamiltonian(
    epsilon: float, alpha: float, chi: float, k: float
) -> Operator:
    """Gauss-law penalty variant: replace the zz coupling by k(1 - sz_S sz_R).

    Equals the plain model at gamma = -k, shifted by +k times the identity;
    large k energetically confines weight to the eigenvalue-1 eigenspace of
    sz_S sz_R.
    """
    if k < 0:
        raise ValueError(f"penalty strength k must be nonnegative, got {k}")
    base = two_spin_hamiltonian(TwoSpinParams(epsilon, alpha, -k, chi, 1.0))
    return Operator(base.matrix + k * np.eye(4), (2, 2))
