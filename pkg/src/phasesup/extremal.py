"""Minimum and maximum of ``theta -> S_theta(rho)``.

Pure states have closed forms with explicit attaining phases.  Mixed states
are handled by multi-start gradient ascent on the phase torus with the
global phase fixed (``theta_0 = 0``).  An exhaustive lattice search is
provided as an independent oracle for small ``d``.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .core import (
    TWO_PI,
    as_density_matrix,
    canonical_phases,
    check_pure_state,
    fourier_matrix,
    superposition_value,
)
from .rng import stream, uniform_phases

METHODS = ("closed-form", "multi-start-gradient", "grid")


@dataclass(frozen=True)
class ExtremalResult:
    value: float
    theta: np.ndarray
    method: str
    converged: bool = True
    restarts_used: int = 0
    residual: float = 0.0

    def to_json(self):
        out = asdict(self)
        out["theta"] = {"phases": [float(x) for x in self.theta]}
        return out


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iterations: int = 5000
    armijo_c1: float = 1e-4
    shrink: float = 0.5
    initial_step: float | None = None
    grad_tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


# --- pure states --------------------------------------------------------


def _max_index(r):
    # lowest index among the maximal moduli
    return int(np.argmax(r))


def _triangle_angle(a, b, c):
    """Angle between sides ``a`` and ``b`` of a triangle whose third side is ``c``.

    Half-angle form, which stays accurate for nearly flat triangles where
    the law-of-cosines ``arccos`` loses half the digits.
    """
    s = 0.5 * (a + b + c)
    num = max(0.0, (s - a) * (s - b))
    den = max(0.0, s * (s - c))
    return 2.0 * np.arctan2(np.sqrt(num), np.sqrt(den))


def _polygon_terms(r, j0):
    """Complex terms ``w_j`` with ``|w_j| = r_j``, ``w_{j0} = -r_{j0}`` and ``sum w = 0``.

    Requires ``r[j0] = max(r)`` and ``r[j0] <= sum of the others``.  The
    remaining nonzero terms, largest first, are placed one at a time: each
    term and the resultant still owed by the terms after it form a triangle
    with the current target, and the owed length is picked inside the range
    that the later terms can realise.
    """
    d = r.size
    w = np.zeros(d, dtype=complex)
    w[j0] = -r[j0]
    rest = [j for j in np.argsort(-r, kind="stable") if j != j0 and r[j] > 0.0]
    if not rest:
        return w
    lengths = r[rest]
    tail_sum = np.concatenate([np.cumsum(lengths[::-1])[::-1], [0.0]])
    tail_lo = np.concatenate([np.maximum(0.0, 2.0 * lengths - tail_sum[:-1]), [0.0]])

    target = complex(r[j0])
    for i, j in enumerate(rest):
        rj = lengths[i]
        L = abs(target)
        direction = target / L if L > 0.0 else 1.0 + 0.0j
        if i == len(rest) - 1:
            w[j] = rj * direction
            break
        owed = min(max(abs(L - rj), tail_lo[i + 1]), tail_sum[i + 1])
        if L > 0.0:
            w[j] = rj * direction * np.exp(1j * _triangle_angle(L, rj, owed))
        else:
            w[j] = rj
        target = target - w[j]
    return w


def smin_pure(psi):
    """Minimum superposition of a pure state with an attaining phase vector.

    ``S_min = (1/d) max(0, 2 max|a_j| - sum|a_j|)^2``.  When one amplitude
    dominates, the minimiser aligns every phase with its amplitude and flips
    the dominant one by pi; otherwise the phased amplitudes are arranged into
    a closed polygon so the overlap vanishes.
    """
    a = check_pure_state(psi)
    d = a.size
    r = np.abs(a)
    gamma = np.angle(a)
    j0 = _max_index(r)
    excess = 2.0 * r[j0] - r.sum()
    if excess > 0.0:
        theta = gamma.copy()
        theta[j0] += np.pi
        value = excess * excess / d
        residual = 0.0
    else:
        w = _polygon_terms(r, j0)
        theta = gamma - np.angle(w)
        value = 0.0
        residual = float(abs(np.sum(np.exp(-1j * theta) * a)))
    return ExtremalResult(min(1.0, value), canonical_phases(theta), "closed-form", residual=residual)


def smax_pure(psi):
    """``S_max = (1/d) (sum_j |a_j|)^2``, attained at ``theta_j = arg a_j``."""
    a = check_pure_state(psi)
    r = np.abs(a)
    value = min(1.0, r.sum() ** 2 / a.size)
    return ExtremalResult(value, canonical_phases(np.angle(a)), "closed-form")


# --- mixed states -------------------------------------------------------


def _initial_phases(rho, mode, cfg):
    d = rho.shape[0]
    _, vecs = np.linalg.eigh(rho)
    top = vecs[:, -1]
    top = top / np.linalg.norm(top)
    warm = smax_pure(top).theta if mode == "max" else smin_pure(top).theta
    init = np.empty((cfg.restarts, d))
    init[0] = warm
    for k in range(1, cfg.restarts):
        init[k] = uniform_phases(stream(cfg.seed, k), 1, d)[0]
    return init


def extremize_mixed(rho, mode="max", cfg=None):
    """Numerical ``min_theta`` / ``max_theta`` of ``S_theta(rho)``.

    Each restart runs Armijo gradient ascent (descent for ``mode="min"``)
    using the analytic gradient.  Restart 0 is warm-started from the
    closed-form solution for the top eigenvector; the others start from
    uniform phases drawn from stream ``(cfg.seed, k)``.  The best restart
    wins; ``converged`` is false only if no restart met the gradient test.
    """
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    cfg = cfg or OptimizerConfig()
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    if d == 1:
        return ExtremalResult(superposition_value(rho, np.zeros(1)), np.zeros(1), "closed-form")
    sign = 1.0 if mode == "max" else -1.0
    step0 = cfg.initial_step if cfg.initial_step is not None else float(d)
    init = _initial_phases(rho, mode, cfg)
    thetas, values, _iters, conv = _kernels.ascend(
        rho, init, sign, cfg.max_iterations, cfg.grad_tol, cfg.armijo_c1, cfg.shrink, step0
    )
    best = int(np.argmax(sign * values))
    theta = canonical_phases(thetas[best])
    return ExtremalResult(
        superposition_value(rho, theta),
        theta,
        "multi-start-gradient",
        converged=bool(conv.any()),
        restarts_used=cfg.restarts,
    )


def s_min(rho, cfg=None):
    """Closed form for rank-one input, optimizer otherwise."""
    state = np.asarray(rho, dtype=complex)
    if state.ndim == 1:
        return smin_pure(state)
    return extremize_mixed(state, "min", cfg)


def s_max(rho, cfg=None):
    state = np.asarray(rho, dtype=complex)
    if state.ndim == 1:
        return smax_pure(state)
    return extremize_mixed(state, "max", cfg)


def grid_extremum(rho, mode="max", points=200):
    """Exhaustive lattice search with ``theta_0 = 0`` and ``points`` values per free angle.

    Cost is ``points^(d-1)``; intended only as an oracle for ``d <= 4``.
    """
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    if d == 1:
        return ExtremalResult(float(rho[0, 0].real), np.zeros(1), "grid")
    if d > 4:
        raise ValueError("grid oracle is limited to d <= 4")
    axis = TWO_PI * np.arange(points) / points
    # the innermost (d - 2) angles are enumerated in one block, the first free angle is looped
    inner = np.stack(np.meshgrid(*([axis] * (d - 2)), indexing="ij"), axis=-1).reshape(-1, d - 2) if d > 2 else np.zeros((1, 0))
    best_val = np.inf if mode == "min" else -np.inf
    best_theta = None
    for t1 in axis:
        block = np.empty((inner.shape[0], d))
        block[:, 0] = 0.0
        block[:, 1] = t1
        block[:, 2:] = inner
        u = np.exp(1j * block)
        vals = np.einsum("nj,jk,nk->n", u.conj(), rho, u).real / d
        k = int(np.argmin(vals) if mode == "min" else np.argmax(vals))
        if (mode == "min" and vals[k] < best_val) or (mode == "max" and vals[k] > best_val):
            best_val = float(vals[k])
            best_theta = block[k].copy()
    return ExtremalResult(min(1.0, max(0.0, best_val)), best_theta, "grid")


# --- bounds -------------------------------------------------------------


def smax_eigen_bound(rho):
    """Largest eigenvalue of ``rho``, an upper bound on ``S_max(rho)``."""
    rho = as_density_matrix(rho)
    return float(np.linalg.eigvalsh(rho)[-1])


def eigen_bound_tight(rho, tol=1e-8):
    """Whether ``S_max(rho)`` equals the largest eigenvalue.

    Equality holds iff the top eigenspace contains a uniform-modulus vector.
    For a simple top eigenvalue that is a direct modulus test on the
    eigenvector; for a degenerate one the projector onto the eigenspace is
    maximised over phase states instead.
    """
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    lam, vecs = np.linalg.eigh(rho)
    top = lam[-1]
    in_space = lam >= top - tol
    if in_space.sum() == 1:
        return bool(np.max(np.abs(np.abs(vecs[:, -1]) - 1.0 / np.sqrt(d))) <= np.sqrt(tol))
    if in_space.all():
        return True
    V = vecs[:, in_space]
    P = V @ V.conj().T
    best = extremize_mixed(P / in_space.sum(), "max", OptimizerConfig(restarts=8)).value
    return bool(abs(best * in_space.sum() - 1.0) <= np.sqrt(tol))


def z_orbit_values(rho):
    """``S_k(rho) = <0| Z^{-k} rho Z^k |0>`` for ``k = 0..d-1``; they sum to 1."""
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    zero = fourier_matrix(d)[:, 0]
    omega = np.exp(TWO_PI * 1j * np.arange(d) / d)
    out = np.empty(d)
    for k in range(d):
        v = omega**k * zero
        out[k] = np.vdot(v, rho @ v).real
    return out


def z_orbit_bounds(rho):
    """``(S'_min, S'_max)``: extremes of the discrete Z-orbit, sandwiched by ``S_min``/``S_max``."""
    vals = z_orbit_values(rho)
    return float(vals.min()), float(vals.max())
