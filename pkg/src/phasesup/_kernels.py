"""Hot inner loops, each with a numba implementation and a numpy fallback.

Conventions shared by every kernel:

* ``rho`` is a C-contiguous ``complex128`` (d, d) array.
* ``thetas`` is a C-contiguous ``float64`` (n, d) array of phase vectors, one
  per row; ``u = exp(1j * theta)`` so that ``|theta> = u / sqrt(d)``.

The public names at the bottom (``quad_values``, ``grad_hess_sq``, ...) are
bound to one of the two implementations according to
:data:`phasesup._backend.USE_NUMBA`.  Both sets stay importable through
:data:`NUMBA_KERNELS` and :data:`NUMPY_KERNELS` for benchmarking and
cross-checking.
"""

import math

import numpy as np

from ._backend import HAS_NUMBA, USE_NUMBA, njit

# line-search constants shared by both ascent implementations
ARMIJO_GROW = 2.0
MIN_STEP = 1e-14
STALL_GRAD = 1e-6


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------


def _quad_values_np(rho, W):
    return (W.conj() * (W @ rho.T)).sum(axis=1).real


def _grad_hess_sq_np(rho, thetas):
    d = thetas.shape[1]
    u = np.exp(1j * thetas)
    off = rho - np.diag(np.diag(rho))  # the diagonal is real and contributes nothing
    z = u.conj() * (u @ off.T)
    grad = (2.0 / d) * z.imag
    g2 = (grad * grad).sum(axis=1)
    M = (2.0 / d) * (u.conj()[:, :, None] * rho[None, :, :] * u[:, None, :]).real
    idx = np.arange(d)
    M[:, idx, idx] = 0.0
    diag = -M.sum(axis=2)
    h2 = (M * M).sum(axis=(1, 2)) + (diag * diag).sum(axis=1)
    return g2, h2


def _channel_samples_np(rho, thetas):
    d = thetas.shape[1]
    u = np.exp(1j * thetas)
    s = _quad_values_np(rho, u) / d
    return s[:, None, None] * u[:, :, None] * u.conj()[:, None, :]


def _value_grad_np(rho, thetas, sign):
    d = thetas.shape[1]
    u = np.exp(1j * thetas)
    z = u.conj() * (u @ rho.T)
    f = sign * z.sum(axis=1).real / d
    g = sign * (2.0 / d) * z.imag
    g[:, 0] = 0.0
    return f, g


def _ascend_np(rho, init, sign, max_iter, gtol, c1, shrink, step0):
    R = init.shape[0]
    theta = init - init[:, :1]
    f, g = _value_grad_np(rho, theta, sign)
    step = np.full(R, step0)
    iters = np.zeros(R, dtype=np.int64)
    converged = np.zeros(R, dtype=np.bool_)
    active = np.ones(R, dtype=np.bool_)
    for _ in range(max_iter):
        gn2 = (g * g).sum(axis=1)
        done = active & (np.sqrt(gn2) < gtol)
        converged |= done
        active &= ~done
        if not active.any():
            break
        pending = active.copy()
        while pending.any():
            idx = np.flatnonzero(pending)
            trial = theta[idx] + step[idx, None] * g[idx]
            ft, gt = _value_grad_np(rho, trial, sign)
            ok = ft >= f[idx] + c1 * step[idx] * gn2[idx]
            acc = idx[ok]
            theta[acc] = trial[ok]
            f[acc] = ft[ok]
            g[acc] = gt[ok]
            step[acc] *= ARMIJO_GROW
            iters[acc] += 1
            pending[acc] = False
            rej = idx[~ok]
            step[rej] *= shrink
            dead = rej[step[rej] < MIN_STEP]
            active[dead] = False
            pending[dead] = False
            converged[dead] = np.sqrt(gn2[dead]) <= max(gtol, STALL_GRAD)
    return theta, sign * f, iters, converged


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------


@njit
def _quad_values_nb(rho, W):
    n, d = W.shape
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(d):
            y = 0j
            for k in range(d):
                y += rho[j, k] * W[i, k]
            acc += (W[i, j].conjugate() * y).real
        out[i] = acc
    return out


@njit
def _grad_hess_sq_nb(rho, thetas):
    n, d = thetas.shape
    g2 = np.empty(n)
    h2 = np.empty(n)
    u = np.empty(d, dtype=np.complex128)
    scale = 2.0 / d
    for i in range(n):
        for j in range(d):
            u[j] = complex(math.cos(thetas[i, j]), math.sin(thetas[i, j]))
        gs = 0.0
        hs = 0.0
        for j in range(d):
            gj = 0.0
            row = 0.0
            for k in range(d):
                if k == j:
                    continue
                w = u[j].conjugate() * rho[j, k] * u[k]
                gj += w.imag
                hjk = scale * w.real
                hs += hjk * hjk
                row += hjk
            gj *= scale
            gs += gj * gj
            hs += row * row
        g2[i] = gs
        h2[i] = hs
    return g2, h2


@njit
def _channel_samples_nb(rho, thetas):
    n, d = thetas.shape
    out = np.empty((n, d, d), dtype=np.complex128)
    u = np.empty(d, dtype=np.complex128)
    for i in range(n):
        for j in range(d):
            u[j] = complex(math.cos(thetas[i, j]), math.sin(thetas[i, j]))
        s = 0.0
        for j in range(d):
            y = 0j
            for k in range(d):
                y += rho[j, k] * u[k]
            s += (u[j].conjugate() * y).real
        s /= d
        for j in range(d):
            for k in range(d):
                out[i, j, k] = s * u[j] * u[k].conjugate()
    return out


@njit
def _value_grad_nb(rho, theta, sign, u, g):
    d = theta.shape[0]
    for j in range(d):
        u[j] = complex(math.cos(theta[j]), math.sin(theta[j]))
    f = 0.0
    for j in range(d):
        y = 0j
        for k in range(d):
            y += rho[j, k] * u[k]
        z = u[j].conjugate() * y
        f += z.real
        g[j] = sign * (2.0 / d) * z.imag
    g[0] = 0.0
    return sign * f / d


@njit
def _ascend_nb(rho, init, sign, max_iter, gtol, c1, shrink, step0):
    R, d = init.shape
    thetas = np.empty((R, d))
    values = np.empty(R)
    iters = np.zeros(R, dtype=np.int64)
    converged = np.zeros(R, dtype=np.bool_)
    u = np.empty(d, dtype=np.complex128)
    g = np.empty(d)
    gt = np.empty(d)
    trial = np.empty(d)
    stall = max(gtol, STALL_GRAD)
    for r in range(R):
        theta = init[r] - init[r, 0]
        f = _value_grad_nb(rho, theta, sign, u, g)
        step = step0
        for _ in range(max_iter):
            gn2 = 0.0
            for j in range(d):
                gn2 += g[j] * g[j]
            if math.sqrt(gn2) < gtol:
                converged[r] = True
                break
            dead = False
            while True:
                for j in range(d):
                    trial[j] = theta[j] + step * g[j]
                ft = _value_grad_nb(rho, trial, sign, u, gt)
                if ft >= f + c1 * step * gn2:
                    break
                step *= shrink
                if step < MIN_STEP:
                    dead = True
                    break
            if dead:
                converged[r] = math.sqrt(gn2) <= stall
                break
            for j in range(d):
                theta[j] = trial[j]
                g[j] = gt[j]
            f = ft
            step *= ARMIJO_GROW
            iters[r] += 1
        thetas[r] = theta
        values[r] = sign * f
    return thetas, values, iters, converged


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

NUMPY_KERNELS = {
    "quad_values": _quad_values_np,
    "grad_hess_sq": _grad_hess_sq_np,
    "channel_samples": _channel_samples_np,
    "ascend": _ascend_np,
}

NUMBA_KERNELS = (
    {
        "quad_values": _quad_values_nb,
        "grad_hess_sq": _grad_hess_sq_nb,
        "channel_samples": _channel_samples_nb,
        "ascend": _ascend_nb,
    }
    if HAS_NUMBA
    else None
)

_ACTIVE = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS


def _c(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def _r(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def quad_values(rho, W):
    """``Re(w^H rho w)`` for every row ``w`` of ``W``."""
    return _ACTIVE["quad_values"](_c(rho), _c(W))


def phase_values(rho, thetas):
    """Superposition values ``<theta|rho|theta>`` for a batch of phase vectors."""
    thetas = _r(np.atleast_2d(thetas))
    d = thetas.shape[1]
    return quad_values(rho, np.exp(1j * thetas)) / d


def grad_hess_sq(rho, thetas):
    """Squared gradient norm and squared Hessian Frobenius norm per phase vector."""
    return _ACTIVE["grad_hess_sq"](_c(rho), _r(np.atleast_2d(thetas)))


def channel_samples(rho, thetas):
    """``d |theta><theta| rho |theta><theta|`` for every phase vector."""
    return _ACTIVE["channel_samples"](_c(rho), _r(np.atleast_2d(thetas)))


def ascend(rho, init, sign, max_iter, gtol, c1, shrink, step0):
    """Gauge-fixed Armijo gradient ascent of ``sign * S`` from each row of ``init``.

    Returns ``(thetas, values, iterations, converged)`` per restart, where
    ``values`` are the superposition values (sign removed).
    """
    return _ACTIVE["ascend"](
        _c(rho), _r(np.atleast_2d(init)), float(sign), int(max_iter),
        float(gtol), float(c1), float(shrink), float(step0),
    )
