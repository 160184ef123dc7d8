"""Moment operators of the phase-state ensemble, the first/second moment
identities for ``S_theta``, and its analytic gradient and Hessian."""

from dataclasses import dataclass

import numpy as np

from .core import _dims, as_density_matrix, l2_coherence

MAX_OPERATOR_DIM = 64


@dataclass(frozen=True)
class MomentOperators:
    first: np.ndarray
    second: np.ndarray

    @property
    def d(self):
        return self.first.shape[0]


@dataclass(frozen=True)
class PhaseGradient:
    components: np.ndarray
    hessian: np.ndarray


def swap_operator(d):
    """``S |j>|k> = |k>|j>`` on ``C^d (x) C^d`` with index ``j * d + k``."""
    S = np.zeros((d * d, d * d))
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    S[(k * d + j).ravel(), (j * d + k).ravel()] = 1.0
    return S


def diagonal_pair_projector(d):
    """``sum_j |jj><jj|``."""
    P = np.zeros((d * d, d * d))
    idx = np.arange(d) * (d + 1)
    P[idx, idx] = 1.0
    return P


def moment_operators(d):
    """First and second moments of ``|theta><theta|`` under uniform phases.

    The second moment is a ``d^2 x d^2`` dense matrix and is only built for
    ``d <= 64``.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if d > MAX_OPERATOR_DIM:
        raise ValueError(f"second-moment operator is dense d^4; refusing d={d} > {MAX_OPERATOR_DIM}")
    first = np.eye(d, dtype=complex) / d
    second = (np.eye(d * d) + swap_operator(d) - diagonal_pair_projector(d)).astype(complex) / d**2
    return MomentOperators(first, second)


def haar_second_moment(d):
    """Second moment of Haar-random pure states, ``(1 + S) / (d (d + 1))``."""
    return (np.eye(d * d) + swap_operator(d)).astype(complex) / (d * (d + 1))


def design_defect(d):
    """Phase-ensemble second moment minus the Haar one.

    Equals ``(1/d^2 - 1/(d(d+1))) (1 + S) - (1/d^2) sum_j |jj><jj|``; nonzero
    for every ``d >= 2``, so the ensemble is a 1-design but not a 2-design.
    """
    return moment_operators(d).second - haar_second_moment(d)


def mean_superposition(rho):
    """Average of ``S_theta(rho)`` over uniform phases: always ``1/d``."""
    return 1.0 / as_density_matrix(rho).shape[0]


def second_moment(rho):
    """Average of ``S_theta(rho)^2``: ``(1 + C_l2(rho)) / d^2``."""
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    return (1.0 + l2_coherence(rho)) / d**2


def second_moment_from_operator(rho):
    """``tr(rho (x) rho . M2)`` using the explicit moment operator."""
    rho = as_density_matrix(rho)
    M2 = moment_operators(rho.shape[0]).second
    return float(np.trace(np.kron(rho, rho) @ M2).real)


def gradient(rho, theta):
    """Analytic gradient and Hessian of ``theta -> S_theta(rho)``.

    With ``rho_jk = |rho_jk| e^{i phi_jk}`` and ``x_jk = phi_jk - (theta_j - theta_k)``:

        dS/dtheta_j          = (2/d) sum_{k != j} |rho_jk| sin(x_jk)
        d2S/dtheta_j dtheta_k = (2/d) |rho_jk| cos(x_jk),  j != k

    and the Hessian diagonal is minus its off-diagonal row sum.
    """
    rho, theta = _dims(rho, theta)
    d = theta.size
    mod = np.abs(rho)
    np.fill_diagonal(mod, 0.0)
    x = np.angle(rho) - (theta[:, None] - theta[None, :])
    components = (2.0 / d) * (mod * np.sin(x)).sum(axis=1)
    H = (2.0 / d) * mod * np.cos(x)
    H = 0.5 * (H + H.T)
    np.fill_diagonal(H, 0.0)
    np.fill_diagonal(H, -H.sum(axis=1))
    return PhaseGradient(components, H)


def gradient_integral_identities(rho):
    """Phase averages of ``|grad S|^2`` and ``||Hess S||_F^2``: ``(2C/d^2, 4C/d^2)``."""
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    c = l2_coherence(rho)
    return 2.0 * c / d**2, 4.0 * c / d**2
