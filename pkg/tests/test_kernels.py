"""The numba and numpy kernel paths must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from phasesup import _kernels
from phasesup._backend import HAS_NUMBA, backend_name
from phasesup.core import random_density_matrix, random_phases, superposition_value
from phasesup.moments import gradient

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


@pytest.fixture
def batch(rng):
    rho = random_density_matrix(5, rng)
    thetas = rng.uniform(0, 2 * np.pi, size=(64, 5))
    return rho, thetas


def test_numpy_kernels_against_scalar_code(batch):
    rho, th = batch
    np_k = _kernels.NUMPY_KERNELS
    vals = np_k["quad_values"](rho, np.exp(1j * th)) / 5
    np.testing.assert_allclose(vals, [superposition_value(rho, t) for t in th], atol=1e-14)
    g2, h2 = np_k["grad_hess_sq"](rho, th)
    ref = [gradient(rho, t) for t in th]
    np.testing.assert_allclose(g2, [np.sum(r.components**2) for r in ref], atol=1e-14)
    np.testing.assert_allclose(h2, [np.sum(r.hessian**2) for r in ref], atol=1e-14)
    ch = np_k["channel_samples"](rho, th)
    u = np.exp(1j * th) / np.sqrt(5)
    expected = np.array([5 * np.outer(v, v.conj()) @ rho @ np.outer(v, v.conj()) for v in u])
    np.testing.assert_allclose(ch, expected, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("name", ["quad_values", "grad_hess_sq", "channel_samples"])
def test_backends_agree(batch, name):
    rho, th = batch
    arg = np.exp(1j * th) if name == "quad_values" else th
    a = _kernels.NUMPY_KERNELS[name](rho, np.ascontiguousarray(arg))
    b = _kernels.NUMBA_KERNELS[name](rho, np.ascontiguousarray(arg))
    for x, y in zip(np.atleast_1d(a) if name != "grad_hess_sq" else a,
                    np.atleast_1d(b) if name != "grad_hess_sq" else b):
        np.testing.assert_allclose(x, y, atol=1e-13)


@needs_numba
def test_ascent_backends_agree(rng):
    rho = random_density_matrix(4, rng)
    init = rng.uniform(0, 2 * np.pi, size=(6, 4))
    init[:, 0] = 0.0
    for sign in (1.0, -1.0):
        a = _kernels.NUMPY_KERNELS["ascend"](rho, init.copy(), sign, 3000, 1e-8, 1e-4, 0.5, 4.0)
        b = _kernels.NUMBA_KERNELS["ascend"](rho, init.copy(), sign, 3000, 1e-8, 1e-4, 0.5, 4.0)
        np.testing.assert_allclose(a[1], b[1], atol=1e-10)
        assert np.array_equal(a[3], b[3])


def test_env_flag_selects_numpy():
    code = "from phasesup._backend import backend_name; print(backend_name())"
    env = dict(os.environ, PHASESUP_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    assert backend_name() in ("numpy", "numba")
