"""State algebra: phase states, diagonal unitaries, the Fourier matrix,
the superposition value ``S_theta(rho) = <theta|rho|theta>``, l2-coherence
and the two channels built from the phase-state ensemble.

States are plain numpy arrays.  The ``check_*`` helpers validate and return
them; everything else assumes a valid input and only checks shapes.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

__all__ = [
    "InvalidStateError",
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "canonical_phases",
    "make_phase_state",
    "diagonal_unitary",
    "fourier_matrix",
    "check_pure_state",
    "check_density_matrix",
    "as_density_matrix",
    "pure_to_density",
    "superposition_value",
    "superposition_value_conjugated",
    "protocol_value",
    "l2_coherence",
    "decoherence_channel",
    "theta_channel",
    "tensor_state",
    "random_density_matrix",
    "random_pure_state",
    "random_phases",
    "matrix_to_json",
    "matrix_from_json",
    "density_from_json",
    "phases_to_json",
    "phases_from_json",
]


class InvalidStateError(ValueError):
    """Raised when an array violates a state invariant.

    ``invariant`` names the violated property (``"hermitian"``, ``"trace"``,
    ``"psd"``, ``"norm"``, ``"shape"``, ``"finite"``).
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    trace: float = 1e-10
    eig_floor: float = -1e-9
    norm: float = 1e-10
    imag: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()


def canonical_phases(theta):
    """Return ``theta`` as a float array reduced into ``[0, 2*pi)``."""
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size < 1:
        raise InvalidStateError("shape", f"phase vector must be 1-D and non-empty, got {theta.shape}")
    if not np.all(np.isfinite(theta)):
        raise InvalidStateError("finite", "phase vector has non-finite entries")
    out = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    out[out >= TWO_PI] = 0.0
    return out


def make_phase_state(theta):
    """Maximally superposed state ``(1/sqrt d) sum_j e^{i theta_j} |j>``."""
    theta = np.asarray(theta, dtype=float)
    return np.exp(1j * theta) / np.sqrt(theta.size)


def diagonal_unitary(theta):
    return np.diag(np.exp(1j * np.asarray(theta, dtype=float)))


def fourier_matrix(d):
    """Unitary DFT with entries ``omega^{jk} / sqrt(d)``, ``omega = e^{2 pi i/d}``."""
    if d < 1:
        raise ValueError("dimension must be positive")
    j = np.arange(d)
    # reduce jk mod d before exponentiating to keep the phases accurate
    return np.exp(TWO_PI * 1j * (np.outer(j, j) % d) / d) / np.sqrt(d)


def check_pure_state(psi, tol=DEFAULT_TOLERANCES):
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size < 1:
        raise InvalidStateError("shape", f"pure state must be a non-empty vector, got {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise InvalidStateError("finite", "amplitudes must be finite")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > tol.norm:
        raise InvalidStateError("norm", f"sum |a_j|^2 = {norm2!r}, expected 1")
    return psi


def check_density_matrix(rho, tol=DEFAULT_TOLERANCES):
    """Validate Hermiticity, unit trace and positivity; return ``rho`` as complex."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
        raise InvalidStateError("shape", f"density matrix must be square, got {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("finite", "entries must be finite")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > tol.hermitian:
        raise InvalidStateError("hermitian", f"max |rho_jk - conj(rho_kj)| = {herm:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol.trace:
        raise InvalidStateError("trace", f"trace = {tr.real:.12g}{tr.imag:+.3e}j, expected 1")
    lam_min = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lam_min < tol.eig_floor:
        raise InvalidStateError("psd", f"smallest eigenvalue {lam_min:.3e} below {tol.eig_floor:.1e}")
    return rho


def pure_to_density(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def as_density_matrix(state):
    """Accept a density matrix or a state vector and return a matrix."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        return pure_to_density(state)
    return state


def _dims(rho, theta):
    rho = as_density_matrix(rho)
    theta = np.asarray(theta, dtype=float)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError("shape", f"expected a square matrix, got {rho.shape}")
    if theta.shape != (rho.shape[0],):
        raise ValueError(f"dimension mismatch: state has d={rho.shape[0]}, phase vector has shape {theta.shape}")
    return rho, theta


def _finish(z, tol):
    if abs(z.imag) > tol.imag:
        raise InvalidStateError("hermitian", f"imaginary residue {z.imag:.3e} in <theta|rho|theta>")
    return float(min(1.0, max(0.0, z.real)))


def superposition_value(rho, theta, tol=DEFAULT_TOLERANCES):
    """``S_theta(rho) = (1/d) sum_jk rho_jk exp(-i (theta_j - theta_k))``.

    ``rho`` may also be a state vector.  The result is clamped into [0, 1].
    """
    rho, theta = _dims(rho, theta)
    u = np.exp(1j * theta)
    z = np.vdot(u, rho @ u) / theta.size
    return _finish(z, tol)


def superposition_value_conjugated(rho, theta, tol=DEFAULT_TOLERANCES):
    """Same quantity evaluated as ``<0| U^dag rho U |0>`` with ``|0> = F|0>``."""
    rho, theta = _dims(rho, theta)
    U = diagonal_unitary(theta)
    zero = fourier_matrix(theta.size)[:, 0]
    z = np.vdot(zero, U.conj().T @ rho @ U @ zero)
    return _finish(z, tol)


def protocol_value(rho, theta, tol=DEFAULT_TOLERANCES):
    """Probability of outcome 0 after rotating by ``(U_theta F)^dag``.

    This is the measurement route: the rotated state
    ``F^dag U^dag rho U F`` is formed explicitly and its ``(0, 0)`` entry read.
    """
    rho, theta = _dims(rho, theta)
    W = diagonal_unitary(theta) @ fourier_matrix(theta.size)
    rotated = W.conj().T @ rho @ W
    return _finish(rotated[0, 0], tol)


def l2_coherence(rho):
    """Sum of squared moduli of the off-diagonal entries."""
    rho = as_density_matrix(rho)
    a2 = np.abs(rho) ** 2
    return float(a2.sum() - np.trace(a2))


def decoherence_channel(rho):
    rho = as_density_matrix(rho)
    return np.diag(np.diag(rho))


def theta_channel(rho):
    """Channel induced by the phase-state ensemble: ``(1 + rho - D(rho)) / d``."""
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    return (np.eye(d) + rho - decoherence_channel(rho)) / d


def tensor_state(rho_a, rho_b):
    """Kronecker product; basis ``|jk>`` sits at index ``j * d_b + k``."""
    return np.kron(as_density_matrix(rho_a), as_density_matrix(rho_b))


def random_density_matrix(d, rng, rank=None):
    """Ginibre-induced random state ``G G^dag / tr(G G^dag)`` with G of shape (d, rank)."""
    k = d if rank is None else rank
    G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = G @ G.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_pure_state(d, rng):
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return psi / np.linalg.norm(psi)


def random_phases(d, rng):
    return rng.uniform(0.0, TWO_PI, size=d)


# --- JSON forms ---------------------------------------------------------


def matrix_to_json(matrix):
    matrix = np.asarray(matrix, dtype=complex)
    return {"d": int(matrix.shape[0]), "re": matrix.real.tolist(), "im": matrix.imag.tolist()}


def matrix_from_json(obj):
    try:
        d = int(obj["d"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError("shape", f"malformed matrix JSON: {exc}") from None
    if re.shape != (d, d) or im.shape != (d, d):
        raise InvalidStateError("shape", f"declared d={d} but got re{re.shape}, im{im.shape}")
    return re + 1j * im


def density_from_json(obj, tol=DEFAULT_TOLERANCES):
    return check_density_matrix(matrix_from_json(obj), tol)


def phases_to_json(theta):
    return {"phases": [float(x) for x in np.asarray(theta, dtype=float)]}


def phases_from_json(obj):
    try:
        phases = obj["phases"]
    except (KeyError, TypeError):
        raise InvalidStateError("shape", "phase JSON needs a 'phases' list") from None
    return canonical_phases(phases)
