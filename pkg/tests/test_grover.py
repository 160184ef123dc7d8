import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phasesup import grover
from phasesup.extremal import smax_pure, smin_pure
from phasesup.grover import (
    GroverConfig,
    complementarity,
    evolve,
    evolved_vector,
    full_state_crosscheck,
    smax_evolved,
    smin_evolved,
    success_probability,
    sweep,
    t_opt,
)


def test_config_validation():
    for args in ((1, 1), (4, 0), (4, 4)):
        with pytest.raises(ValueError):
            GroverConfig(*args)
    with pytest.raises(ValueError):
        GroverConfig(8, 2, marked_set=(1, 1))
    with pytest.raises(ValueError):
        GroverConfig(8, 1, beta=4.0)
    assert GroverConfig(8, 2, marked_set=(5, 3)).marked_set == (3, 5)


def test_evolve_examples():
    cfg = GroverConfig(150, 3)
    s, c = evolve(cfg, 0)
    assert s == pytest.approx(math.sqrt(3 / 150)) and c == pytest.approx(math.sqrt(147 / 150))
    four = GroverConfig(4, 1)
    assert four.alpha == pytest.approx(math.pi / 3)
    assert abs(evolve(four, 1)[0]) == pytest.approx(1.0)
    inside = GroverConfig(20, 2, beta=math.pi)
    for t in range(6):
        assert abs(evolve(inside, t)[0]) == pytest.approx(abs(math.cos(t * inside.alpha)), abs=1e-14)


def test_success_probability_examples():
    assert success_probability(GroverConfig(150), 0) == pytest.approx(1 / 150)
    assert success_probability(GroverConfig(4), 1) == pytest.approx(1.0)
    assert success_probability(GroverConfig(150), t_opt(150, 1)) >= 0.99


def test_t_opt_examples():
    assert t_opt(4, 1) == 1
    assert t_opt(150, 1) == 9
    assert t_opt(100, 25) == 1
    with pytest.raises(ValueError):
        t_opt(4, 4)


def test_smax_examples():
    assert smax_evolved(GroverConfig(150), 0) == pytest.approx(1.0)
    assert smax_evolved(GroverConfig(4), 1) == pytest.approx(0.25)
    cfg = GroverConfig(150)
    assert abs(smax_evolved(cfg, 9) - (1 - success_probability(cfg, 9))) <= 2 / 150


def test_smin_examples():
    for t in range(5):
        assert smin_evolved(GroverConfig(8, 2), t) == 0.0
    assert smin_evolved(GroverConfig(4), 1) == pytest.approx(0.25)
    assert smin_evolved(GroverConfig(150), 0) == 0.0


def test_smin_single_marked_form():
    cfg = GroverConfig(150)
    for t in range(21):
        x = (0.5 + t) * cfg.alpha
        expected = max(0.0, abs(math.sin(x)) - math.sqrt(149) * abs(math.cos(x))) ** 2 / 150
        assert smin_evolved(cfg, t) == pytest.approx(expected, abs=1e-15)


def test_complementarity_identity_and_domain():
    cfg = GroverConfig(150)
    for t in range(10):
        lhs, rhs = complementarity(cfg, t)
        assert abs(lhs - rhs) <= 1e-10
    assert complementarity(cfg, 0) == pytest.approx((1.0, 1.0))
    with pytest.raises(ValueError):
        complementarity(cfg, 10)
    with pytest.raises(ValueError):
        complementarity(GroverConfig(150, beta=1.0), 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 4000), st.data())
def test_complementarity_band(N, data):
    M = data.draw(st.integers(1, max(1, N // 16)))
    cfg = GroverConfig(N, M)
    q = M / N
    span = 3 * math.sqrt(q)
    t = 0
    while (0.5 + t) * cfg.alpha <= math.pi / 2:
        lhs, rhs = complementarity(cfg, t)
        assert abs(lhs - rhs) <= 1e-10
        assert abs(lhs + success_probability(cfg, t) - 1) <= span
        t += 1


def test_complementarity_excess_exact_bound():
    # S_max + P - 1 = q(2P - 1) + 2 sqrt(P(1-P) q(1-q)) <= q + sqrt(q)
    cfg = GroverConfig(150)
    q = 1 / 150
    worst = 0.0
    for t in range(10):
        P = success_probability(cfg, t)
        exc = smax_evolved(cfg, t) + P - 1
        assert exc == pytest.approx(q * (2 * P - 1) + 2 * math.sqrt(P * (1 - P) * q * (1 - q)), abs=1e-12)
        worst = max(worst, abs(exc))
    assert worst <= q + math.sqrt(q)


@pytest.mark.parametrize("N,M,tmax", [(150, 1, 20), (8, 2, 3), (64, 3, 10), (9, 8, 4)])
def test_full_state_crosscheck(N, M, tmax):
    cfg = GroverConfig(N, M)
    for t in range(tmax + 1):
        assert full_state_crosscheck(cfg, t) <= 1e-8


@pytest.mark.parametrize("beta,phi", [(0.3, 0.0), (1.2, 2.0), (math.pi / 2, 4.5), (math.pi, 1.0), (0.0, 0.7)])
def test_general_start_matches_dense_state(beta, phi):
    cfg = GroverConfig(40, 3, beta=beta, phi=phi)
    for t in range(12):
        psi, _ = evolved_vector(cfg, t)
        assert abs(np.vdot(psi, psi) - 1) <= 1e-10
        s, c = evolve(cfg, t)
        assert abs(s) ** 2 + abs(c) ** 2 == pytest.approx(1.0, abs=1e-10)
        assert smax_evolved(cfg, t) == pytest.approx(smax_pure(psi).value, abs=1e-8)
        assert full_state_crosscheck(cfg, t) <= 1e-8


def test_general_start_single_marked_smin():
    cfg = GroverConfig(30, 1, beta=2.5, phi=1.1)
    for t in range(10):
        psi, _ = evolved_vector(cfg, t)
        assert smin_evolved(cfg, t) == pytest.approx(smin_pure(psi).value, abs=1e-12)


def test_standard_start_via_explicit_beta():
    cfg = GroverConfig(150)
    alt = GroverConfig(150, beta=cfg.alpha, phi=0.0)
    for t in range(15):
        assert evolve(alt, t)[0] == pytest.approx(evolve(cfg, t)[0], abs=1e-12)
        assert smax_evolved(alt, t) == pytest.approx(smax_evolved(cfg, t), abs=1e-12)


def test_relabeling_invariance():
    a = sweep(GroverConfig(40, 1, marked_set=(3,)), 12)
    b = sweep(GroverConfig(40, 1, marked_set=(0,)), 12)
    assert a.to_csv() == b.to_csv()
    for t in range(12):
        assert full_state_crosscheck(GroverConfig(40, 1, marked_set=(3,)), t) <= 1e-8


def test_dense_limit():
    with pytest.raises(ValueError):
        evolved_vector(GroverConfig(5000), 1)


def test_sweep_fig1_shape():
    cfg = GroverConfig(150)
    trace = sweep(cfg, 20)
    assert len(trace.t) == 21
    assert int(np.argmax(trace.P[:15])) == 9
    assert all(trace.smax[t + 1] < trace.smax[t] for t in range(9))
    assert all(v >= 1 / 150 for v in trace.smax)
    for s, c in zip(trace.s, trace.c):
        assert abs(s) ** 2 + abs(c) ** 2 == pytest.approx(1.0, abs=1e-10)
    lines = trace.to_csv().splitlines()
    assert lines[0] == ",".join(grover.CSV_FIELDS) and len(lines) == 22
    assert trace.to_json()[9]["t"] == 9
    with pytest.raises(ValueError):
        sweep(cfg, -1)
