"""Superposition along Grover search.

The evolution stays in the plane spanned by ``|M>`` (uniform over marked
items) and ``|M_perp>`` (uniform over the rest), so everything has a closed
form in the two overlap coefficients ``(s_t, c_t)``.  A dense N-vector
simulation is provided as a cross-check.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .extremal import smax_pure, smin_pure

MAX_CROSSCHECK_N = 1 << 12
CSV_FIELDS = ("t", "P", "Smax", "Smin", "N", "M", "beta", "phi")


@dataclass(frozen=True)
class GroverConfig:
    """Database size ``N``, marked count ``M`` and an optional generalized start.

    The start is ``sin(beta/2)|M> + e^{i phi} cos(beta/2)|M_perp>``;
    ``beta=None`` means the uniform superposition (``beta = alpha``, ``phi = 0``).
    """

    N: int
    M: int = 1
    marked_set: tuple | None = None
    beta: float | None = None
    phi: float = 0.0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if not 1 <= self.M < self.N:
            raise ValueError("need 1 <= M < N")
        if self.marked_set is not None:
            marked = tuple(sorted({int(j) for j in self.marked_set}))
            if len(marked) != self.M or marked[0] < 0 or marked[-1] >= self.N:
                raise ValueError(f"marked_set must hold {self.M} distinct indices in [0, {self.N})")
            object.__setattr__(self, "marked_set", marked)
        if self.beta is not None and not 0.0 <= self.beta <= math.pi:
            raise ValueError("beta must lie in [0, pi]")

    @property
    def alpha(self):
        return 2.0 * math.asin(math.sqrt(self.M / self.N))

    @property
    def start_angle(self):
        return self.alpha if self.beta is None else self.beta

    @property
    def standard_start(self):
        return self.beta is None or (math.isclose(self.beta, self.alpha, rel_tol=0, abs_tol=1e-15)
                                     and self.phi == 0.0)

    @property
    def marked(self):
        if self.marked_set is not None:
            return np.array(self.marked_set)
        return np.arange(self.M)


@dataclass
class GroverTrace:
    cfg: GroverConfig
    t: list = field(default_factory=list)
    s: list = field(default_factory=list)
    c: list = field(default_factory=list)
    P: list = field(default_factory=list)
    smax: list = field(default_factory=list)
    smin: list = field(default_factory=list)

    def rows(self):
        beta = self.cfg.start_angle
        for k in range(len(self.t)):
            yield (self.t[k], self.P[k], self.smax[k], self.smin[k],
                   self.cfg.N, self.cfg.M, beta, self.cfg.phi)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in self.rows():
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
        return buf.getvalue()

    def to_json(self):
        return [dict(zip(CSV_FIELDS, row)) for row in self.rows()]


def evolve(cfg, t):
    """Overlaps ``(s_t, c_t)`` of ``(DO)^t |psi_0>`` with ``|M>`` and ``|M_perp>``.

    Each Grover iteration rotates the plane by ``alpha``, so
    ``s_t = s_0 cos(t alpha) + c_0 sin(t alpha)`` and
    ``c_t = c_0 cos(t alpha) - s_0 sin(t alpha)``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    a = cfg.alpha
    half = cfg.start_angle / 2.0
    s0 = complex(math.sin(half))
    c0 = complex(math.cos(half)) * complex(math.cos(cfg.phi), math.sin(cfg.phi))
    if cfg.standard_start:
        x = (0.5 + t) * a
        return complex(math.sin(x)), complex(math.cos(x))
    ct, st = math.cos(t * a), math.sin(t * a)
    return s0 * ct + c0 * st, c0 * ct - s0 * st


def success_probability(cfg, t):
    s, _ = evolve(cfg, t)
    return abs(s) ** 2


def t_opt(N, M):
    """Iterations maximising the first success peak: ``floor(pi/4 sqrt(N/M))``."""
    if not 1 <= M < N:
        raise ValueError("need 1 <= M < N")
    return int(math.floor(math.pi / 4.0 * math.sqrt(N / M)))


def smax_evolved(cfg, t):
    """Maximal superposition of the state after ``t`` iterations."""
    a = cfg.alpha
    if cfg.standard_start:
        return max(math.cos(t * a) ** 2, math.cos((t + 1) * a) ** 2)
    s, c = evolve(cfg, t)
    sh, ch = math.sin(a / 2.0), math.cos(a / 2.0)
    return abs(sh * s) ** 2 + abs(ch * c) ** 2 + abs(s * c * math.sin(a))


def _moduli_excess(cfg, s, c):
    # 2 max|a_j| - sum|a_j| for M copies of |s|/sqrt(M) and N-M copies of |c|/sqrt(N-M)
    M, R = cfg.M, cfg.N - cfg.M
    am, ar = abs(s) / math.sqrt(M), abs(c) / math.sqrt(R)
    total = M * am + R * ar
    return 2.0 * max(am, ar) - total


def smin_evolved(cfg, t):
    """Minimal superposition after ``t`` iterations.

    Zero whenever ``M >= 2`` and ``N - M >= 2``; otherwise a single amplitude
    may dominate, e.g. for ``M = 1`` the value is
    ``(1/N) max(0, |s_t| - sqrt(N-1) |c_t|)^2``.
    """
    if cfg.M >= 2 and cfg.N - cfg.M >= 2:
        return 0.0
    s, c = evolve(cfg, t)
    excess = _moduli_excess(cfg, s, c)
    return max(0.0, excess) ** 2 / cfg.N


def complementarity(cfg, t):
    """Both sides of ``S_max = (sqrt((1-P)(1-M/N)) + sqrt(P M/N))^2``.

    Only defined for the uniform start while ``(1/2 + t) alpha`` lies in
    ``[0, pi/2]``; anything else raises ``ValueError``.
    """
    if not cfg.standard_start:
        raise ValueError("complementarity identity is stated for the uniform initial state only")
    if t < 0 or (0.5 + t) * cfg.alpha > math.pi / 2.0 + 1e-12:
        raise ValueError(f"t={t} leaves the first quarter period ((1/2 + t) alpha > pi/2)")
    P = success_probability(cfg, t)
    q = cfg.M / cfg.N
    rhs = (math.sqrt(max(0.0, (1.0 - P) * (1.0 - q))) + math.sqrt(P * q)) ** 2
    return smax_evolved(cfg, t), rhs


def initial_vector(cfg):
    N = cfg.N
    marked = np.zeros(N, dtype=bool)
    marked[cfg.marked] = True
    half = cfg.start_angle / 2.0
    psi = np.empty(N, dtype=complex)
    psi[marked] = math.sin(half) / math.sqrt(cfg.M)
    psi[~marked] = np.exp(1j * cfg.phi) * math.cos(half) / math.sqrt(N - cfg.M)
    return psi, marked


def evolved_vector(cfg, t):
    """Dense ``(DO)^t |psi_0>`` with ``D = 2|phi_0><phi_0| - 1`` and ``O = 1 - 2|M><M|``."""
    if cfg.N > MAX_CROSSCHECK_N:
        raise ValueError(f"dense simulation limited to N <= {MAX_CROSSCHECK_N}")
    psi, marked = initial_vector(cfg)
    N = cfg.N
    phi0 = np.full(N, 1.0 / math.sqrt(N))
    m_vec = np.where(marked, 1.0 / math.sqrt(cfg.M), 0.0)
    for _ in range(t):
        psi = psi - 2.0 * m_vec * np.vdot(m_vec, psi)
        psi = 2.0 * phi0 * np.vdot(phi0, psi) - psi
    return psi, marked


def full_state_crosscheck(cfg, t):
    """Largest deviation between the dense simulation and the closed forms at step ``t``.

    Compares the two overlaps, the weight outside their span, the success
    probability, and ``S_max`` / ``S_min`` of the dense vector (via the
    pure-state closed forms) against the two-level formulas.
    """
    psi, marked = evolved_vector(cfg, t)
    m_vec = np.where(marked, 1.0 / math.sqrt(cfg.M), 0.0)
    r_vec = np.where(marked, 0.0, 1.0 / math.sqrt(cfg.N - cfg.M))
    s_sim, c_sim = np.vdot(m_vec, psi), np.vdot(r_vec, psi)
    s, c = evolve(cfg, t)
    leak = np.linalg.norm(psi - s_sim * m_vec - c_sim * r_vec)
    dev = [
        abs(s_sim - s),
        abs(c_sim - c),
        leak,
        abs(float(np.sum(np.abs(psi[marked]) ** 2)) - success_probability(cfg, t)),
        abs(smax_pure(psi / np.linalg.norm(psi)).value - smax_evolved(cfg, t)),
        abs(smin_pure(psi / np.linalg.norm(psi)).value - smin_evolved(cfg, t)),
    ]
    return float(max(dev))


def sweep(cfg, t_max):
    """``(P_t, S_max, S_min)`` for ``t = 0..t_max``."""
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    trace = GroverTrace(cfg)
    for t in range(t_max + 1):
        s, c = evolve(cfg, t)
        trace.t.append(t)
        trace.s.append(s)
        trace.c.append(c)
        trace.P.append(abs(s) ** 2)
        trace.smax.append(smax_evolved(cfg, t))
        trace.smin.append(smin_evolved(cfg, t))
    return trace
