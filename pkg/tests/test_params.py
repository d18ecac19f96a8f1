import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from dislocated_dirac.errors import BranchPointError, DomainError
from dislocated_dirac.params import (Region, SpectralPoint, classify_region, compute_params, corners,
                                     exact_resolvent_norm_outside, in_spectrum, limit_params_at_branch,
                                     raw_params, resolvent_norm_bounds_outside, sqrt_principal)

finite = st.floats(-8, 8, allow_nan=False)
mass = st.sampled_from([0.0, 0.5, 1.0, 2.0])


def off_corners(z, m, tol=1e-3):
    return min(abs(z - c) for c in corners(m)) > tol


# sqrt_principal

@pytest.mark.parametrize("c, expected", [(1, 1), (-1, 1j), (2j, 1 + 1j)])
def test_sqrt_principal_examples(c, expected):
    assert sqrt_principal(c) == pytest.approx(expected, abs=1e-15)


@given(finite, finite)
def test_sqrt_principal_right_half_plane(a, b):
    r = sqrt_principal(complex(a, b))
    assert r.real >= 0
    assert r * r == pytest.approx(complex(a, b), abs=1e-12 * (1 + abs(complex(a, b))))


def test_sqrt_principal_negative_axis_has_positive_imag():
    assert sqrt_principal(-4.0).imag == pytest.approx(2.0)


# compute_params

def test_massless_band_values():
    q = compute_params(SpectralPoint(0.0, 0.5, 0.0))
    assert q.mu_plus == pytest.approx(0.5)
    assert q.mu_minus == pytest.approx(1.5)
    assert q.w_plus == pytest.approx(1j)
    assert q.w_minus == pytest.approx(-1j)


def test_massless_above_band_k_vanishes():
    q = compute_params(SpectralPoint(0.0, 2.0, 0.0))
    assert abs(q.k) < 1e-15
    assert abs(q.w_plus) == pytest.approx(1.0)
    assert abs(q.w_minus) == pytest.approx(1.0)


def test_branch_point_raises():
    with pytest.raises(BranchPointError):
        compute_params(SpectralPoint(1.0, 1.0, 1.0))
    with pytest.raises(BranchPointError):
        compute_params(SpectralPoint(-2.0, -1.0 + 1e-9, 2.0))


def test_step_offset_fields():
    q = compute_params(SpectralPoint(3.0, 0.2, 1.0), step_offset=0.5)
    z = complex(3.0, 0.2)
    assert q.mu0 == pytest.approx(np.sqrt((1.5 + z) * (0.5 - z)))
    assert q.w0 == pytest.approx(np.sqrt(0.5 - z) / np.sqrt(1.5 + z))
    assert compute_params(SpectralPoint(3.0, 0.2, 1.0)).mu0 is None


def test_slopes_use_quotient_of_roots():
    # the root of the quotient differs from the quotient of roots here
    m, z = 1.0, complex(-3.0, 0.5)
    _, _, wm, wp, _ = raw_params(m, z)
    assert wp == pytest.approx(np.sqrt(m + 1j - z) / np.sqrt(m - 1j + z))


def test_negative_mass_rejected():
    with pytest.raises(DomainError):
        SpectralPoint(0, 0, -1)


# branch limits

def test_branch_limit_k_at_upper_right():
    assert limit_params_at_branch("m+i", 1.0).k == -1


def test_branch_limit_ratio_at_lower_right():
    lim = limit_params_at_branch("m-i", 1.0)
    assert lim.finite_combination == ("mu_minus/w_minus", 2)


@pytest.mark.parametrize("corner", ["m+i", "m-i", "-m+i", "-m-i"])
def test_branch_limits_match_small_offset(corner):
    m = 1.0
    lim = limit_params_at_branch(corner, m)
    c = lim.corner
    # approach from the resolvent side, away from the rays
    z = c + 1e-7 * (-np.sign(c.real) + 1j * -np.sign(c.imag))
    q = compute_params(SpectralPoint.from_complex(z, m))
    vals = {"mu_plus/w_plus": q.mu_plus / q.w_plus, "mu_minus/w_minus": q.mu_minus / q.w_minus,
            "mu_plus*w_plus": q.mu_plus * q.w_plus, "mu_minus*w_minus": q.mu_minus * q.w_minus}
    name, value = lim.finite_combination
    assert vals[name] == pytest.approx(value, abs=1e-3)
    assert q.k == pytest.approx(lim.k, abs=1e-3)
    assert q.mu_plus == pytest.approx(lim.mu_plus, abs=1e-3)
    assert q.mu_minus == pytest.approx(lim.mu_minus, abs=1e-3)
    for got, want in ((q.w_plus, lim.w_plus), (q.w_minus, lim.w_minus)):
        if want is None:
            assert abs(got) > 1e2
        else:
            assert got == pytest.approx(want, abs=1e-3)


@pytest.mark.parametrize("offset", [1e-4, 1e-6, 1e-8])
def test_branch_limit_square_root_rate(offset):
    # the parameters approach the corner values like sqrt(|z - corner|)
    lim = limit_params_at_branch("m+i", 1.0)
    q = compute_params(SpectralPoint.from_complex(1 + 1j + offset * (1 + 1j), 1.0))
    rate = np.sqrt(abs(offset * (1 + 1j)))
    assert abs(q.k - lim.k) <= 3 * rate
    assert abs(q.w_minus - lim.w_minus) <= 3 * rate
    assert abs(q.mu_plus - lim.mu_plus) <= 3 * rate


# regions

@pytest.mark.parametrize("tau, delta, m, region", [
    (3.0, 0.5, 1.0, Region.W), (10.0, 2.0, 1.0, Region.U), (0.3, 0.5, 0.0, Region.SPECTRUM),
    (2.0, 1.0, 1.0, Region.SPECTRUM), (0.5, 1.0, 1.0, Region.D), (0.0, 5.0, 0.0, Region.OUTSIDE)])
def test_classify_examples(tau, delta, m, region):
    assert classify_region(SpectralPoint(tau, delta, m)).region is region


def test_d_box_reports_corner():
    tag = classify_region(SpectralPoint(1.2, -0.8, 1.0))
    assert tag.region is Region.D and tag.corner == complex(1, -1)


@given(finite, st.floats(-3, 3, allow_nan=False), mass)
def test_classify_is_a_partition(tau, delta, m):
    tag = classify_region(SpectralPoint(tau, delta, m))
    assert isinstance(tag.region, Region)
    assert (tag.region is Region.SPECTRUM) == bool(in_spectrum(m, complex(tau, delta)))
    assert tag.region is not Region.BAND


# exact norm outside the band

def test_exact_norm_examples():
    assert exact_resolvent_norm_outside(SpectralPoint(5, 3, 1)) == pytest.approx(0.5)
    assert exact_resolvent_norm_outside(SpectralPoint(0, 2, 0)) == pytest.approx(1.0)
    assert exact_resolvent_norm_outside(SpectralPoint(0, 3, 2)) is None
    with pytest.raises(DomainError):
        exact_resolvent_norm_outside(SpectralPoint(0, 0.5, 1))


def test_bounds_outside_ordered():
    lo, hi = resolvent_norm_bounds_outside(SpectralPoint(0.5, 2.0, 2.0))
    assert 0 < lo <= hi == pytest.approx(1.0)


# invariants

@given(finite, st.floats(-3, 3, allow_nan=False), mass)
def test_defining_relations(tau, delta, m):
    z = complex(tau, delta)
    assume(off_corners(z, m))
    mu_m, mu_p, wm, wp, k = raw_params(m, z)
    assert wp**2 * (m - 1j + z) == pytest.approx(m + 1j - z, rel=1e-12, abs=1e-12)
    assert wm**2 * (m + 1j + z) == pytest.approx(m - 1j - z, rel=1e-12, abs=1e-12)
    assert mu_p**2 == pytest.approx((m - 1j + z) * (m + 1j - z), rel=1e-12, abs=1e-12)
    if abs(wp + wm) > 1e-12:
        assert k * (wp + wm) == pytest.approx(wp - wm, rel=1e-13, abs=1e-13)


@given(finite, st.floats(-3, 3, allow_nan=False), mass)
def test_conjugation_symmetry(tau, delta, m):
    z = complex(tau, delta)
    assume(off_corners(z, m) and not in_spectrum(m, z))
    a = raw_params(m, z)
    b = raw_params(m, np.conj(z))
    assert np.conj(a[1]) == pytest.approx(b[0], abs=1e-14 * (1 + abs(a[1])))
    assert np.conj(a[3]) == pytest.approx(b[2], abs=1e-14 * (1 + abs(a[3])))


@given(finite, st.sampled_from([-1.0, 1.0, 0.3, -2.5, 1.0 + 1e-9]), mass)
def test_real_part_positivity_predicate(tau, delta, m):
    z = complex(tau, delta)
    assume(off_corners(z, m, 1e-6))
    mu_m, mu_p, *_ = raw_params(m, z)
    on_rays = abs(delta) == 1 and abs(tau) >= m
    assert ((mu_m.real > 0) and (mu_p.real > 0)) == (not on_rays)
