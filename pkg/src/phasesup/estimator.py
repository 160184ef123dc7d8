"""Monte-Carlo estimates of phase averages.

Samples are indexed globally: sample ``i`` is row ``i % BLOCK`` of the
stream ``(seed, i // BLOCK)``.  Any split of ``[0, n)`` into contiguous
ranges therefore sees the same phase vectors, and partial runs merge through
their ``(count, mean, M2)`` triples.

``estimate_coherence`` reaches ``S_theta`` through the measurement route:
prepare ``F|0>``, apply ``U_theta``, and read the overlap with ``rho``.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import as_density_matrix, fourier_matrix
from .rng import stream, uniform_phases

BLOCK = 8192
TARGETS = ("mean", "second_moment", "coherence", "gradient_sq", "hessian_sq", "channel")
CSV_FIELDS = ("target", "d", "samples", "estimate", "stderr", "seed")


@dataclass(frozen=True)
class RunningStats:
    """Count, mean and sum of squared deviations of a batch of samples."""

    count: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def from_samples(cls, x):
        x = np.asarray(x, dtype=float)
        mean = x.mean(axis=0)
        return cls(x.shape[0], mean, ((x - mean) ** 2).sum(axis=0))

    def merge(self, other):
        if self.count == 0:
            return other
        if other.count == 0:
            return self
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / n)
        m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / n)
        return RunningStats(n, mean, m2)

    @property
    def variance(self):
        return self.m2 / (self.count - 1)

    @property
    def stderr(self):
        return np.sqrt(self.variance / self.count)


@dataclass(frozen=True)
class EstimateReport:
    target: str
    d: int
    samples: int
    estimate: float
    sample_variance: float
    standard_error: float
    seed: int

    @classmethod
    def from_stats(cls, target, d, stats, seed):
        return cls(target, d, stats.count, float(stats.mean), float(stats.variance),
                   float(stats.stderr), int(seed))

    def stats(self):
        return RunningStats(self.samples, np.float64(self.estimate),
                            np.float64(self.sample_variance * (self.samples - 1)))

    def within(self, truth, k=5.0, atol=1e-12):
        """``|estimate - truth| <= k * SE`` (plus ``atol`` for zero-variance integrands)."""
        return abs(self.estimate - truth) <= k * self.standard_error + atol

    def to_json(self):
        return {
            "target": self.target, "d": self.d, "samples": self.samples,
            "estimate": self.estimate, "sample_variance": self.sample_variance,
            "standard_error": self.standard_error, "seed": self.seed,
        }

    def csv_row(self):
        return [self.target, self.d, self.samples, repr(self.estimate),
                repr(self.standard_error), self.seed]


@dataclass(frozen=True)
class MatrixEstimate:
    """Entrywise Monte-Carlo estimate of a complex matrix."""

    target: str
    samples: int
    estimate: np.ndarray
    stderr_re: np.ndarray
    stderr_im: np.ndarray
    seed: int

    def z_scores(self, truth):
        """Largest real/imaginary deviation per entry in units of its SE (SE floored at 1e-300)."""
        diff = self.estimate - np.asarray(truth)
        zr = np.abs(diff.real) / np.maximum(self.stderr_re, 1e-300)
        zi = np.abs(diff.imag) / np.maximum(self.stderr_im, 1e-300)
        return np.maximum(zr, zi)

    def within(self, truth, k=5.0, atol=1e-12):
        diff = self.estimate - np.asarray(truth)
        ok_re = np.abs(diff.real) <= k * self.stderr_re + atol
        ok_im = np.abs(diff.imag) <= k * self.stderr_im + atol
        return bool(np.all(ok_re & ok_im))


def reports_to_csv(reports):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rep in reports:
        writer.writerow(rep.csv_row())
    return buf.getvalue()


def merge_reports(a, b):
    """Combine two reports on disjoint sample ranges of the same target."""
    if (a.target, a.d, a.seed) != (b.target, b.d, b.seed):
        raise ValueError("reports describe different runs")
    return EstimateReport.from_stats(a.target, a.d, a.stats().merge(b.stats()), a.seed)


# --- sampling -----------------------------------------------------------


def sample_phase(d, gen):
    """One phase vector with i.i.d. uniform entries from generator ``gen``."""
    return uniform_phases(gen, 1, d)[0]


def phase_blocks(d, n, seed, start=0):
    """Yield the phase vectors for global sample indices ``[start, start + n)`` blockwise."""
    stop = start + n
    i = start
    while i < stop:
        b, off = divmod(i, BLOCK)
        rows = min(BLOCK, off + (stop - i))
        thetas = uniform_phases(stream(seed, b), rows, d)[off:]
        yield thetas
        i += thetas.shape[0]


def _collect(per_block, d, n, seed, start):
    total = None
    for thetas in phase_blocks(d, n, seed, start):
        st = RunningStats.from_samples(per_block(thetas))
        total = st if total is None else total.merge(st)
    return total


def _check_n(n):
    if n < 2:
        raise ValueError("need at least 2 samples")


def _protocol_vectors(d, thetas):
    # U_theta F |0>
    return np.exp(1j * thetas) * fourier_matrix(d)[:, 0][None, :]


def estimate_mean_superposition(rho, n=100_000, seed=0, start=0):
    _check_n(n)
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    st = _collect(lambda th: _kernels.phase_values(rho, th), d, n, seed, start)
    return EstimateReport.from_stats("mean", d, st, seed)


def estimate_second_moment(rho, n=400_000, seed=0, start=0):
    _check_n(n)
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    st = _collect(lambda th: _kernels.phase_values(rho, th) ** 2, d, n, seed, start)
    return EstimateReport.from_stats("second_moment", d, st, seed)


def protocol_samples(rho, thetas):
    """``S_theta`` for each row, computed as ``<0| F^dag U^dag rho U F |0>``."""
    rho = as_density_matrix(rho)
    return _kernels.quad_values(rho, _protocol_vectors(rho.shape[0], np.atleast_2d(thetas)))


def estimate_coherence(rho, n=400_000, seed=0, start=0):
    """Estimate ``C_l2(rho)`` as ``d^2 <S_theta^2> - 1`` using the measurement route."""
    _check_n(n)
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    st = _collect(lambda th: d * d * protocol_samples(rho, th) ** 2 - 1.0, d, n, seed, start)
    return EstimateReport.from_stats("coherence", d, st, seed)


def estimate_gradient_identities(rho, n=400_000, seed=0, start=0):
    """Phase averages of ``|grad S|^2`` and ``||Hess S||_F^2`` from the same samples."""
    _check_n(n)
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    st = _collect(lambda th: np.stack(_kernels.grad_hess_sq(rho, th), axis=1), d, n, seed, start)
    g = RunningStats(st.count, st.mean[0], st.m2[0])
    h = RunningStats(st.count, st.mean[1], st.m2[1])
    return (EstimateReport.from_stats("gradient_sq", d, g, seed),
            EstimateReport.from_stats("hessian_sq", d, h, seed))


def _matrix_stats(sample_fn, d, n, seed, start):
    def per_block(th):
        X = sample_fn(th)
        return np.stack([X.real, X.imag], axis=1)

    return _collect(per_block, d, n, seed, start)


def _matrix_estimate(target, st, seed):
    se = st.stderr
    return MatrixEstimate(target, st.count, st.mean[0] + 1j * st.mean[1], se[0], se[1], int(seed))


def estimate_channel(rho, n=100_000, seed=0, start=0):
    """Sampled ``(d/n) sum_i |theta_i><theta_i| rho |theta_i><theta_i|``."""
    _check_n(n)
    rho = as_density_matrix(rho)
    d = rho.shape[0]
    st = _matrix_stats(lambda th: _kernels.channel_samples(rho, th), d, n, seed, start)
    return _matrix_estimate("channel", st, seed)


def estimate_first_moment_operator(d, n=100_000, seed=0, start=0):
    """Sampled average of ``|theta><theta|``."""
    _check_n(n)

    def sample(th):
        u = np.exp(1j * th) / np.sqrt(d)
        return u[:, :, None] * u.conj()[:, None, :]

    return _matrix_estimate("first_moment_operator", _matrix_stats(sample, d, n, seed, start), seed)


def estimate_second_moment_operator(d, n=100_000, seed=0, start=0):
    """Sampled average of ``|theta><theta| (x) |theta><theta|`` (small ``d`` only)."""
    _check_n(n)
    if d > 4:
        raise ValueError("sampled second-moment operator is limited to d <= 4")

    def sample(th):
        u = np.exp(1j * th) / np.sqrt(d)
        uu = (u[:, :, None] * u[:, None, :]).reshape(th.shape[0], d * d)
        return uu[:, :, None] * uu.conj()[:, None, :]

    return _matrix_estimate("second_moment_operator", _matrix_stats(sample, d, n, seed, start), seed)
