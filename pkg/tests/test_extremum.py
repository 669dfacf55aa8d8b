import math

import numpy as np
import pytest

from conftest import A_R, OMEGA_R, RHO_R
from helix_steiner import ConvergenceError, EmptyDomainError, HelixParams
from helix_steiner.extremum import (
    GRAHAM_HWANG,
    FeasibleDomain,
    GridSpec,
    certify,
    certify_minimum,
    domain_contains,
    domain_slice,
    refine_critical,
    scan,
)
from helix_steiner.srf import graham_hwang_window, srf

LO, HI = graham_hwang_window()


@pytest.fixture(scope="module")
def coarse():
    return scan(GridSpec.default(80, 80))


def test_domain_examples():
    assert domain_contains(OMEGA_R, A_R)
    assert not domain_contains(1.0, 0.3)
    assert not domain_contains(math.pi, 1e3)
    # far past the r_1 = 1 curve at omega = pi (a = sqrt(12)/pi)
    assert domain_contains(math.pi, 1.10)
    assert not domain_contains(math.pi, 1.11)


def test_scan_matches_pointwise_evaluation(coarse):
    rng = np.random.default_rng(11)
    for _ in range(300):
        i, j = rng.integers(0, 80, size=2)
        om, a = float(coarse.omega[i]), float(coarse.a[j])
        assert coarse.in_domain[i, j] == domain_contains(om, a)
        s = srf(HelixParams(om, a))
        assert coarse.rho[i, j] == pytest.approx(s.rho, rel=1e-13)
        assert coarse.m_star[i, j] == s.m_star


def test_scan_deterministic_across_threads():
    spec = GridSpec.default(60, 50)
    one, four = scan(spec, threads=1), scan(spec, threads=4)
    assert np.array_equal(one.rho, four.rho, equal_nan=True)
    assert np.array_equal(one.in_domain, four.in_domain)
    assert one.minimum == four.minimum and one.argmin == four.argmin


def test_scan_default_grid():
    res = scan(GridSpec.default())
    om, a, rho = res.minimum
    # grid minimum sits on a kink of the max-surface: error is first order in the cell size
    assert RHO_R <= rho < RHO_R + 2e-3
    d_om = (HI - LO) / 399
    d_a = 1.5 / 400
    assert abs(om - OMEGA_R) <= d_om and abs(a - A_R) <= d_a
    dom_rho = res.rho[res.in_domain]
    assert (dom_rho >= GRAHAM_HWANG).all()


def test_scan_tiny_grids():
    res = scan(GridSpec(OMEGA_R, OMEGA_R, 1, 0.0, A_R, 1))
    assert res.rho.shape == (1, 1)
    assert res.minimum[2] == pytest.approx(RHO_R, abs=1e-12)
    res = scan(GridSpec(2.0, 2.6, 2, 0.0, 0.4, 2))
    assert res.minimum[2] == np.nanmin(np.where(res.in_domain, res.rho, np.nan))


def test_scan_excluding_critical_cell():
    res = scan(GridSpec(2.6, 3.4, 40, 0.0, 1.5, 40))
    assert res.minimum[2] > RHO_R + 1e-3


def test_scan_rejects_bad_grids():
    with pytest.raises(ValueError):
        scan(GridSpec(1.0, 2.0, 10, 0.0, 1.5, 10))
    with pytest.raises(ValueError):
        scan(GridSpec(LO, HI, 0, 0.0, 1.5, 10))
    with pytest.raises(EmptyDomainError):
        scan(GridSpec(3.0, 3.1, 5, 1.4, 1.5, 5))


def test_domain_slices_stable_under_refinement(coarse):
    for om in coarse.omega[::8]:
        s1 = domain_slice(float(om), steps=200)
        s2 = domain_slice(float(om), steps=400)
        assert len(s1) == len(s2)
        for (a1, b1), (a2, b2) in zip(s1, s2):
            assert a1 == pytest.approx(a2, abs=1e-10) and b1 == pytest.approx(b2, abs=1e-10)


def test_domain_slice_upper_edge_is_r1_curve():
    A1 = 1 - 2 * math.cos(math.pi)
    (lo, hi), = domain_slice(math.pi)[-1:]
    assert hi == pytest.approx(math.sqrt(A1 * (1 + A1)) / math.pi, abs=1e-11)


@pytest.mark.parametrize("start", [(2.0, 0.4), (2.5, 0.2), (1.8, 0.5), (2.2961, 0.26625)])
def test_refine_converges(start):
    r = refine_critical(start)
    assert abs(r.omega - OMEGA_R) < 1e-9 and abs(r.a - A_R) < 1e-9
    assert abs(r.rho - RHO_R) < 1e-10
    assert max(map(abs, r.residuals)) < 1e-12


def test_refine_exact_start_and_mirror_root():
    assert refine_critical((OMEGA_R, A_R)).iterations == 0
    # omega -> 2 pi - omega with a * omega fixed leaves every density unchanged
    mirror = refine_critical((4.0, 0.23))
    assert mirror.omega == pytest.approx(2 * math.pi - OMEGA_R, abs=1e-9)
    assert mirror.a * mirror.omega == pytest.approx(A_R * OMEGA_R, abs=1e-9)
    assert mirror.rho == pytest.approx(RHO_R, abs=1e-10)


def test_refine_below_rounding_floor():
    with pytest.raises(ConvergenceError) as info:
        refine_critical((2.0, 0.4), tol=1e-15)
    assert "rounding floor" in str(info.value)


def test_certificate_passes_at_coarse_resolution():
    cert, res, refined = certify(GridSpec.default(50, 50))
    assert cert.passed, cert.violations
    assert cert.boundary_margin > 0.01


def test_certificate_reports_corrupted_sample(coarse):
    res = scan(GridSpec.default(80, 80))
    i, j = 40, 30
    res.rho[i, j] = 0.5
    res.in_domain[i, j] = True
    refined = refine_critical((OMEGA_R, A_R))
    cert = certify_minimum(res, refined)
    assert not cert.passed
    hit = [v for v in cert.violations if v["check"] == "below_refined"]
    assert [(v["i"], v["j"]) for v in hit] == [(i, j)]
    assert any(v["check"] == "graham_hwang_floor" for v in cert.violations)


def test_certificate_schema(coarse):
    cert = certify_minimum(coarse, refine_critical((OMEGA_R, A_R)))
    d = cert.to_dict()
    assert d["schema_version"] == 1
    assert set(d) >= {"grid", "refined", "scan_minimum", "boundary_margin", "passed", "violations"}
    assert d["grid"]["n_omega"] == 80


def test_feasible_domain_members():
    dom = FeasibleDomain.default()
    assert dom.contains(OMEGA_R, A_R)
    assert not dom.contains(OMEGA_R, -1.0)
