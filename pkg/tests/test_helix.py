import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import OMEGA_R
from helix_steiner import HelixParams, InfeasibleConfiguration, RadiusWarning
from helix_steiner.helix import (
    a_coefficient,
    build_point_set,
    full_tree_feasible,
    make_skip_sequences,
    steiner_point_analytic,
    steiner_radius,
    terminal_point,
)

omegas = st.floats(0.01, 2 * math.pi - 0.01)
WIN_LO, WIN_HI = math.acos(0.25), 2 * math.pi - math.acos(0.25)
pitches = st.floats(1e-3, 5.0)


def test_params_validation():
    with pytest.raises(ValueError):
        HelixParams(0.0, 1.0)
    with pytest.raises(ValueError):
        HelixParams(2 * math.pi, 1.0)
    with pytest.raises(ValueError):
        HelixParams(1.0, 0.0)
    with pytest.raises(ValueError):
        HelixParams(float("nan"), 1.0)


@pytest.mark.parametrize(
    "m, omega, expected",
    [(1, math.pi, 3.0), (1, OMEGA_R, 7 / 3), (2, OMEGA_R, 11 / 9), (3, OMEGA_R, -17 / 27)],
)
def test_a_coefficient(m, omega, expected):
    assert a_coefficient(m, omega) == pytest.approx(expected, abs=1e-14)


@given(st.integers(1, 1000), st.floats(-1e4, 1e4))
def test_a_coefficient_range(m, omega):
    assert -1.0 <= a_coefficient(m, omega) <= 3.0


def test_steiner_radius(crit):
    assert steiner_radius(1, crit) == pytest.approx(math.sqrt(21) / 21, abs=1e-14)
    # sqrt(66)/11 by exact simplification
    assert steiner_radius(2, crit) == pytest.approx(math.sqrt(66) / 11, abs=1e-14)
    assert steiner_radius(1, HelixParams(math.pi / 3, 0.7)) is None
    assert steiner_radius(3, crit) is None


def test_radius_above_one_warns():
    with pytest.warns(RadiusWarning):
        r = steiner_radius(1, HelixParams(math.pi / 2, 1.0))
    assert r == pytest.approx(math.pi / 2 / math.sqrt(2), abs=1e-14)


def test_full_tree_feasible(crit):
    assert full_tree_feasible(1, crit)
    assert not full_tree_feasible(1, HelixParams(math.pi / 3 + 1e-9, 1e6))
    assert full_tree_feasible(1, HelixParams(math.pi, 1e-12))
    assert not full_tree_feasible(3, crit)


@given(st.integers(1, 30), omegas, pitches)
def test_feasible_iff_radius_inside(m, omega, a):
    p = HelixParams(omega, a)
    A = a_coefficient(m, omega)
    if A <= 0:
        assert not full_tree_feasible(m, p)
        return
    r = m * p.step / math.sqrt(A * (1 + A))
    if abs(r - 1) > 1e-9:
        assert full_tree_feasible(m, p) == (r <= 1)


def test_skip_sequences_examples():
    seqs = make_skip_sequences(7, 2, "terminal")
    assert [list(s.indices()) for s in seqs] == [[0, 2, 4, 6], [1, 3, 5]]
    assert [s.l_max for s in seqs] == [3, 2]
    (one,) = make_skip_sequences(7, 1, "terminal")
    assert one.l_max == 6 and list(one.indices()) == list(range(7))
    assert [s.l_max for s in make_skip_sequences(10, 3, "steiner")] == [2, 2, 2]


def test_skip_sequences_reject():
    with pytest.raises(ValueError):
        make_skip_sequences(5, 5)
    with pytest.raises(ValueError):
        make_skip_sequences(2, 1)


@given(st.integers(3, 200), st.data())
def test_skip_sequences_partition(n, data):
    m = data.draw(st.integers(1, n - 1))
    term = sorted(i for s in make_skip_sequences(n, m, "terminal") for i in s.indices())
    assert term == list(range(n))
    stn = sorted(i for s in make_skip_sequences(n, m, "steiner") for i in s.indices())
    assert stn == list(range(n - 1))
    for s in make_skip_sequences(n, m):
        assert 0 <= s.offset <= m - 1


def test_terminal_points(crit):
    assert terminal_point(0, crit) == (1.0, 0.0, 0.0)
    p = terminal_point(1, HelixParams(math.pi / 2, 1.0))
    assert p == pytest.approx((0.0, 1.0, math.pi / 2), abs=1e-15)
    # cos 3w = 22/27, sin 3w = 7 sqrt5/27, z = sqrt30/3
    p3 = terminal_point(3, crit)
    assert p3 == pytest.approx((22 / 27, 7 * math.sqrt(5) / 27, math.sqrt(30) / 3), abs=1e-14)


def test_steiner_points(crit):
    r1 = math.sqrt(21) / 21
    assert steiner_point_analytic(0, 1, crit) == pytest.approx((r1, 0, 0), abs=1e-15)
    with pytest.warns(RadiusWarning):
        s = steiner_point_analytic(2, 1, HelixParams(math.pi / 2, 1.0))
    assert s == pytest.approx((-1.1107207345395916, 0, math.pi), abs=1e-14)
    with pytest.raises(InfeasibleConfiguration):
        steiner_point_analytic(1, 3, crit)


def test_build_point_set(crit):
    ps = build_point_set(3, 1, crit)
    assert ps.terminals.shape == (3, 3) and ps.steiner_seed.shape == (1, 3)
    assert np.allclose(ps.steiner_seed[0], steiner_point_analytic(1, 1, crit), atol=1e-15)
    ps = build_point_set(7, 2, crit)
    assert np.allclose(ps.terminals, [terminal_point(i, crit) for i in range(7)], atol=1e-15)
    ps = build_point_set(30, 1, crit)
    assert len(ps.steiner_seed) == 28
    assert np.allclose(np.hypot(ps.steiner_seed[:, 0], ps.steiner_seed[:, 1]),
                       0.21821789023599238, atol=1e-12)
    with pytest.raises(InfeasibleConfiguration):
        build_point_set(10, 3, crit)


@settings(max_examples=300)
@given(st.integers(0, 1000), st.integers(1, 20), st.floats(WIN_LO, WIN_HI), st.floats(0.01, 1.5))
def test_chord_identities(i, m, omega, a):
    p = HelixParams(omega, a)
    A = a_coefficient(m, omega)
    d2 = np.sum(np.subtract(terminal_point(i + m, p), terminal_point(i, p)) ** 2)
    assert d2 == pytest.approx((m * a * omega) ** 2 + 1 + A, rel=1e-11)
    if A <= 1e-6:
        return
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RadiusWarning)
        r = steiner_radius(m, p)
        si, sj = steiner_point_analytic(i, m, p), steiner_point_analytic(i + m, m, p)
    chord = math.dist(si, sj)
    assert chord == pytest.approx(m * a * omega * math.sqrt((1 + A) / A), rel=1e-9)
    gap = math.dist(terminal_point(i, p), si)
    assert gap == pytest.approx(abs(1 - r), abs=1e-10 * max(1, r))
    lhs = (1 - r) + m * a * omega * math.sqrt((1 + A) / A)
    rhs = 1 + m * a * omega * math.sqrt(A / (1 + A))
    assert lhs == pytest.approx(rhs, rel=1e-12)
