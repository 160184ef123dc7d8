"""Paradigmatic states with closed-form reference values.

Each constructor returns a :class:`CatalogEntry` whose ``reference`` maps a
quantity id (``"S_0"``, ``"S_min"``, ``"S_max"``) to its expected value, or
to :data:`DERIVED` when no trustworthy closed form exists and the value has
to come from an oracle.  Multi-qubit states use ``np.kron`` ordering, which
for every entry here gives the same matrix as the little-endian labelling.
"""

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .core import InvalidStateError, check_density_matrix, pure_to_density

DERIVED = "derived"

PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    state: np.ndarray
    reference: dict
    pure: np.ndarray | None = None
    notes: tuple = field(default_factory=tuple)

    @property
    def d(self):
        return self.state.shape[0]


def _entry(name, rho, reference, pure=None, notes=()):
    try:
        rho = check_density_matrix(rho)
    except InvalidStateError as exc:
        raise InvalidStateError(exc.invariant, f"{name}: {exc}") from None
    return CatalogEntry(name, rho, dict(reference), pure, tuple(notes))


def _basis(d, *indices, coeffs=None):
    v = np.zeros(d, dtype=complex)
    coeffs = coeffs or [1.0] * len(indices)
    for j, a in zip(indices, coeffs):
        v[j] += a
    return v / np.linalg.norm(v)


def qubit_bloch(r1, r2, r3):
    """``rho = (1 + r . sigma) / 2``; ``S_min/max = (1 -/+ sqrt(r1^2 + r2^2)) / 2``."""
    norm2 = r1 * r1 + r2 * r2 + r3 * r3
    if norm2 > 1.0 + 1e-12:
        raise InvalidStateError("psd", f"Bloch vector ({r1}, {r2}, {r3}) lies outside the unit ball")
    rho = (np.eye(2) + r1 * PAULI[1] + r2 * PAULI[2] + r3 * PAULI[3]) / 2
    transverse = math.hypot(r1, r2)
    ref = {
        "S_0": (1.0 + r1) / 2.0,
        "S_min": (1.0 - transverse) / 2.0,
        "S_max": (1.0 + transverse) / 2.0,
    }
    notes = ("S_min + S_max = 1 for every qubit state",)
    pure = None
    if abs(norm2 - 1.0) <= 1e-12:
        lam, vecs = np.linalg.eigh(rho)
        pure = vecs[:, -1]
    return _entry(f"qubit:{r1},{r2},{r3}", rho, ref, pure, notes)


_BELL = {
    "phi+": ((0, 3), (1.0, 1.0)),
    "phi-": ((0, 3), (1.0, -1.0)),
    "psi+": ((1, 2), (1.0, 1.0)),
    "psi-": ((1, 2), (1.0, -1.0)),
}


def bell_vector(kind):
    try:
        idx, coeffs = _BELL[kind]
    except KeyError:
        raise ValueError(f"unknown Bell state {kind!r}; expected one of {sorted(_BELL)}") from None
    return _basis(4, *idx, coeffs=list(coeffs))


def bell(kind):
    psi = bell_vector(kind)
    ref = {"S_0": 0.5 if kind.endswith("+") else 0.0, "S_min": 0.0, "S_max": 0.5}
    return _entry(f"bell:{kind}", pure_to_density(psi), ref, psi)


def werner(p):
    """``p |Psi-><Psi-| + (1 - p) 1/4``."""
    rho = p * pure_to_density(bell_vector("psi-")) + (1 - p) * np.eye(4) / 4
    ref = {"S_0": (1 - p) / 4, "S_min": (1 - p) / 4, "S_max": (1 + p) / 4}
    return _entry(f"werner:{p}", rho, ref)


def isotropic(p):
    """``p |Psi+><Psi+| + (1 - p) 1/4``."""
    rho = p * pure_to_density(bell_vector("psi+")) + (1 - p) * np.eye(4) / 4
    ref = {"S_0": (1 + p) / 4, "S_min": (1 - p) / 4, "S_max": (1 + p) / 4}
    return _entry(f"isotropic:{p}", rho, ref)


def w_vector():
    # |001>, |010>, |100> sit at indices 1, 2, 4
    return _basis(8, 1, 2, 4)


def ghz_vector():
    return _basis(8, 0, 7)


def w_state():
    psi = w_vector()
    return _entry("w", pure_to_density(psi), {"S_0": 3 / 8, "S_min": 0.0, "S_max": 3 / 8}, psi)


def ghz_state():
    psi = ghz_vector()
    return _entry("ghz", pure_to_density(psi), {"S_0": 1 / 4, "S_min": 0.0, "S_max": 1 / 4}, psi)


def w_mixed(p):
    """``(1 - p)|W><W| + p 1/8``."""
    rho = (1 - p) * pure_to_density(w_vector()) + p * np.eye(8) / 8
    ref = {"S_0": (3 - 2 * p) / 8, "S_min": p / 8, "S_max": (3 - 2 * p) / 8}
    return _entry(f"w-mixed:{p}", rho, ref)


def ghz_mixed(p):
    """``(1 - p)|GHZ><GHZ| + p 1/8``.

    Its phase profile is ``p/8 + (1 - p)/16 |e^{i theta_0} + e^{i theta_7}|^2``.
    """
    rho = (1 - p) * pure_to_density(ghz_vector()) + p * np.eye(8) / 8
    ref = {"S_0": (2 - p) / 8, "S_min": p / 8, "S_max": (2 - p) / 8}
    notes = ("phase profile carries +(1-p)/16 |e^{i t0} + e^{i t7}|^2; a minus sign would contradict S_0 = (2-p)/8",)
    return _entry(f"ghz-mixed:{p}", rho, ref, notes=notes)


def ghz_mixed_profile(p, theta):
    """Closed-form ``S_theta(G_p)`` with the sign that reproduces ``S_0 = (2-p)/8``."""
    return p / 8 + (1 - p) / 16 * abs(np.exp(1j * theta[0]) + np.exp(1j * theta[7])) ** 2


def bell_diagonal(c1, c2, c3):
    """``(1 + sum_j c_j sigma_j (x) sigma_j) / 4``.

    ``S_theta`` depends on ``cos(theta_3 - theta_0)`` with weight
    ``(c1 - c2)/8`` and on ``cos(theta_2 - theta_1)`` with weight
    ``(c1 + c2)/8``; ``S_max`` is left to the oracles and
    :func:`bell_diagonal_smax_candidates` lists the competing closed forms.
    """
    rho = np.eye(4, dtype=complex)
    for j, c in zip((1, 2, 3), (c1, c2, c3)):
        rho = rho + c * np.kron(PAULI[j], PAULI[j])
    rho = rho / 4
    m = max(abs(c1), abs(c2))
    ref = {"S_0": (1 + c1) / 4, "S_min": (1 - m) / 4, "S_max": DERIVED}
    notes = (f"alternative S_max (3 - m)/4 = {(3 - m) / 4:.6g}; direct maximisation gives (1 + m)/4 = {(1 + m) / 4:.6g}",)
    return _entry(f"bell-diagonal:{c1},{c2},{c3}", rho, ref, notes=notes)


def bell_diagonal_smax_candidates(c1, c2):
    m = max(abs(c1), abs(c2))
    return {"alternative": (3 - m) / 4, "direct": (1 + m) / 4}


def spin_coherent_vector(j, zeta):
    """Amplitudes ``sqrt(C(2j, j-m)) zeta^(j-m) / (1+|zeta|^2)^j`` for ``m = -j..j``."""
    two_j = 2 * j
    if abs(two_j - round(two_j)) > 1e-12 or two_j < 0:
        raise ValueError(f"spin j={j} must be a non-negative half-integer")
    n = int(round(two_j))
    zeta = complex(zeta)
    norm = (1 + abs(zeta) ** 2) ** (n / 2)
    # index i <-> m = -j + i, so j - m = n - i
    return np.array([math.sqrt(math.comb(n, n - i)) * zeta ** (n - i) / norm for i in range(n + 1)],
                    dtype=complex)


def spin_coherent(j, zeta):
    psi = spin_coherent_vector(j, zeta)
    n = psi.size - 1
    zeta = complex(zeta)
    denom = (n + 1) * (1 + abs(zeta) ** 2) ** n
    b = np.array([math.sqrt(math.comb(n, i)) * abs(zeta) ** (n - i) for i in range(n + 1)])
    smax = b.sum() ** 2 / denom
    gap = 2 * b.max() - b.sum()
    smin = gap**2 / denom if gap >= 0 else 0.0
    s0 = abs(sum(math.sqrt(math.comb(n, i)) * zeta ** (n - i) for i in range(n + 1))) ** 2 / denom
    return _entry(f"spin:{j},{zeta}", pure_to_density(psi), {"S_0": s0, "S_min": smin, "S_max": smax}, psi)


# --- names --------------------------------------------------------------

DEFAULT_NAMES = (
    "qubit:0.6,0,0", "bell:phi+", "bell:phi-", "bell:psi+", "bell:psi-",
    "werner:0.5", "isotropic:0.5", "w", "ghz", "w-mixed:0.4", "ghz-mixed:0.5",
    "bell-diagonal:0.5,0.2,0", "spin:1,1",
)


def _floats(arg, count, name):
    parts = [p for p in arg.split(",") if p]
    if len(parts) != count:
        raise ValueError(f"{name} expects {count} comma-separated numbers, got {arg!r}")
    return [float(p) for p in parts]


def from_name(name):
    """Build an entry from a name such as ``ghz``, ``werner:0.5`` or ``spin:1.5,0.3+0.2j``."""
    key, _, arg = name.strip().partition(":")
    key = key.lower()
    if key == "bell":
        return bell(arg.lower() or "phi+")
    if key in ("w", "ghz") and not arg:
        return w_state() if key == "w" else ghz_state()
    if key == "qubit":
        return qubit_bloch(*_floats(arg, 3, key))
    if key == "bell-diagonal":
        return bell_diagonal(*_floats(arg, 3, key))
    if key in ("werner", "isotropic", "w-mixed", "ghz-mixed"):
        (p,) = _floats(arg, 1, key)
        return {"werner": werner, "isotropic": isotropic, "w-mixed": w_mixed, "ghz-mixed": ghz_mixed}[key](p)
    if key == "spin":
        m = re.fullmatch(r"\s*([^,]+),(.+)", arg)
        if not m:
            raise ValueError(f"spin expects 'j,zeta', got {arg!r}")
        return spin_coherent(float(m.group(1)), complex(m.group(2).replace(" ", "")))
    raise ValueError(f"unknown catalog entry {name!r}")
