"""Seeded diagonal orbits, skewed-basis variants, rank-one perturbations."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitframes import (
    NormalOrbitSpec,
    build_normal_pair,
    build_riesz_pair,
    certificate_bounds,
    excluded_tau,
    frame_bounds,
    perturb_tau,
    riesz_certificate_bounds,
    synthesis_matrix,
)

CAPACITY_HALF = 76.36141955583651
CONTAIN_SLACK = 1e-9
RESIDUAL_TOL = 1e-12


def random_spec(seed, size=3, r_lo=0.2, r_hi=0.7):
    """Well-separated zeros (angularly spread) with nonzero weights."""
    rng = np.random.default_rng(seed)
    j = np.arange(size)
    angles = 2.0 * np.pi * (j + 0.5 * rng.uniform(size=size)) / size
    radii = rng.uniform(r_lo, r_hi, size)
    zeros = radii * np.exp(1j * angles)
    coeffs = rng.uniform(0.3, 1.5, size) * np.exp(2j * np.pi * rng.uniform(size=size))
    return NormalOrbitSpec(zeros=zeros, coeffs=coeffs)


class TestNormalOrbitSpec:
    def test_unit_weights(self):
        spec = NormalOrbitSpec(zeros=[0.0, 0.5], coeffs=[1.0, np.sqrt(0.75)])
        assert spec.alpha == pytest.approx(1.0, rel=1e-14)
        assert spec.beta == pytest.approx(1.0, rel=1e-14)
        assert spec.delta == pytest.approx(0.5, rel=1e-14)
        assert spec.capacity == pytest.approx(CAPACITY_HALF, rel=1e-14)
        assert spec.size == 2

    def test_rejects_zero_weight(self):
        with pytest.raises(ValueError, match="nonzero"):
            NormalOrbitSpec(zeros=[0.1, 0.2], coeffs=[1.0, 0.0])

    def test_rejects_duplicate_zeros(self):
        with pytest.raises(ValueError, match="certificate"):
            NormalOrbitSpec(zeros=[0.3, 0.3], coeffs=[1.0, 1.0])

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            NormalOrbitSpec(zeros=[0.3], coeffs=[1.0, 1.0])

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="at least one"):
            NormalOrbitSpec(zeros=[], coeffs=[])

    def test_rejects_negative_tail_energy(self):
        with pytest.raises(ValueError, match="tail energy"):
            NormalOrbitSpec(zeros=[0.3], coeffs=[1.0], tail_energy=-0.5)

    def test_arrays_frozen(self):
        spec = NormalOrbitSpec(zeros=[0.3], coeffs=[1.0])
        with pytest.raises(ValueError):
            spec.zeros[0] = 0.0

    def test_caller_array_untouched(self):
        zeros = np.array([0.3 + 0j, -0.2])
        NormalOrbitSpec(zeros=zeros, coeffs=[1.0, 1.0])
        zeros[0] = 0.0  # must not raise; the constructed object owns a copy

    def test_to_dict(self):
        spec = NormalOrbitSpec(zeros=[0.5j], coeffs=[2.0])
        d = spec.to_dict()
        assert d["zeros"] == [[0.0, 0.5]]
        assert d["coeffs"] == [[2.0, 0.0]]
        assert d["delta"] == 1.0
        assert d["finite_model"] is True


class TestCertificateBounds:
    def test_single_zero(self):
        spec = NormalOrbitSpec(zeros=[0.5], coeffs=[np.sqrt(0.75)])
        lo, hi = certificate_bounds(spec)
        assert lo == pytest.approx(0.5, rel=1e-14)
        assert hi == pytest.approx(2.0, rel=1e-14)

    def test_pair_at_half_separation(self):
        spec = NormalOrbitSpec(zeros=[0.0, 0.5], coeffs=[1.0, np.sqrt(0.75)])
        lo, hi = certificate_bounds(spec)
        assert lo == pytest.approx(1.0 / CAPACITY_HALF, rel=1e-12)
        assert hi == pytest.approx(CAPACITY_HALF, rel=1e-12)

    def test_weights_scale_quadratically(self):
        base = NormalOrbitSpec(zeros=[0.2, -0.4j], coeffs=[1.0, 0.5])
        doubled = NormalOrbitSpec(zeros=[0.2, -0.4j], coeffs=[2.0, 1.0])
        lo1, hi1 = certificate_bounds(base)
        lo2, hi2 = certificate_bounds(doubled)
        assert lo2 == pytest.approx(4.0 * lo1, rel=1e-14)
        assert hi2 == pytest.approx(4.0 * hi1, rel=1e-14)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_contains_measured_bounds(self, seed):
        spec = random_spec(seed)
        lo, hi = certificate_bounds(spec)
        report = frame_bounds(build_normal_pair(spec))
        tail = report.tail_estimate
        assert tail is not None
        # The finite window can only lose energy, and the loss is bounded
        # by the tail; the upper bound is monotone in the window.
        assert report.upper_bound <= hi * (1.0 + CONTAIN_SLACK)
        assert report.lower_bound >= lo - tail - CONTAIN_SLACK * lo
        assert report.lower_bound > 0.0


class TestBuildNormalPair:
    def test_diagonal_orbit_columns(self):
        spec = NormalOrbitSpec(zeros=[0.5, -0.25], coeffs=[1.0, 2.0])
        orbit_spec = build_normal_pair(spec, n_max=6)
        U = synthesis_matrix(orbit_spec)
        for n in range(7):
            expected = np.array([0.5**n * 1.0, (-0.25) ** n * 2.0])
            assert np.max(np.abs(U[:, n] - expected)) < 1e-15

    def test_column_energy_identity(self):
        spec = random_spec(7)
        U = synthesis_matrix(build_normal_pair(spec, n_max=40))
        n = np.arange(41)
        profile = np.abs(spec.zeros[:, None]) ** (2 * n[None, :])
        expected = profile.T @ (np.abs(spec.coeffs) ** 2)
        assert np.max(np.abs(np.linalg.norm(U, axis=0) ** 2 - expected)) < 1e-13

    def test_auto_depth_floor(self):
        spec = NormalOrbitSpec(zeros=[0.1], coeffs=[1.0])
        assert build_normal_pair(spec).n_max >= 64

    def test_explicit_depth_honored(self):
        spec = NormalOrbitSpec(zeros=[0.1], coeffs=[1.0])
        assert build_normal_pair(spec, n_max=97).n_max == 97


class TestRieszPair:
    def test_identity_reduces_to_diagonal(self):
        spec = random_spec(2)
        W = np.eye(spec.size)
        riesz = build_riesz_pair(spec, W, n_max=50)
        diag = build_normal_pair(spec, n_max=50)
        assert np.allclose(riesz.T, diag.T, rtol=0, atol=1e-15)
        assert np.allclose(riesz.f0, diag.f0, rtol=0, atol=1e-15)
        lo_r, hi_r = riesz_certificate_bounds(spec, W)
        lo_d, hi_d = certificate_bounds(spec)
        assert lo_r == pytest.approx(lo_d, rel=1e-14)
        assert hi_r == pytest.approx(hi_d, rel=1e-14)

    def test_generator_keeps_spectrum(self):
        spec = random_spec(4)
        rng = np.random.default_rng(5)
        W = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
        orbit_spec = build_riesz_pair(spec, W, n_max=50)
        eigs = np.sort_complex(np.linalg.eigvals(orbit_spec.T))
        assert np.max(np.abs(eigs - np.sort_complex(spec.zeros))) < 1e-10

    def test_skewed_dual_biorthogonality(self):
        rng = np.random.default_rng(9)
        W = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        W += 4.0 * np.eye(4)
        duals = np.linalg.inv(W).conj().T
        gram = duals.conj().T @ W
        assert np.max(np.abs(gram - np.eye(4))) < 1e-12

    def test_diag_1_2_certificates(self):
        spec = NormalOrbitSpec(zeros=[0.0, 0.5], coeffs=[1.0, np.sqrt(0.75)])
        W = np.diag([1.0, 2.0])
        lo, hi = riesz_certificate_bounds(spec, W)
        base_lo, base_hi = certificate_bounds(spec)
        assert lo == pytest.approx(base_lo, rel=1e-14)
        assert hi == pytest.approx(4.0 * base_hi, rel=1e-14)
        report = frame_bounds(build_riesz_pair(spec, W))
        assert lo * (1.0 - CONTAIN_SLACK) - report.tail_estimate <= report.lower_bound
        assert report.upper_bound <= hi * (1.0 + CONTAIN_SLACK)
        # The conservative quarter-scaled window also holds here.
        assert base_lo / 4.0 <= report.lower_bound
        assert report.upper_bound <= base_hi * 4.0

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_certificate_contains_measured(self, seed):
        spec = random_spec(seed, size=2)
        rng = np.random.default_rng(seed + 1)
        W = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        W += 3.0 * np.eye(2)
        lo, hi = riesz_certificate_bounds(spec, W)
        report = frame_bounds(build_riesz_pair(spec, W))
        tail = report.tail_estimate
        assert tail is not None
        assert report.upper_bound <= hi * (1.0 + CONTAIN_SLACK)
        assert report.lower_bound >= lo - tail - CONTAIN_SLACK * lo

    def test_rejects_wrong_shape(self):
        spec = random_spec(0, size=2)
        with pytest.raises(ValueError, match="2x2"):
            build_riesz_pair(spec, np.eye(3))

    def test_rejects_ill_conditioned(self):
        spec = random_spec(0, size=2)
        with pytest.raises(ValueError, match="condition"):
            build_riesz_pair(spec, np.diag([1.0, 2e6]))


class TestExcludedTau:
    def test_closed_form(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75], coeffs=[2.0, 1.0])
        bad = excluded_tau(spec, 0, 1)
        assert bad == pytest.approx((0.5 - 0.75) * 1.0 / 2.0)

    def test_excluded_value_rejected(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75, 0.875], coeffs=[1.0, 1.0, 1.0])
        bad = excluded_tau(spec, 0, 1)
        with pytest.raises(ValueError, match="excluded"):
            perturb_tau(spec, 0, 1, bad)
        with pytest.raises(ValueError, match="excluded"):
            perturb_tau(spec, 0, 1, bad * (1.0 + 1e-13))

    def test_nearby_value_accepted(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75, 0.875], coeffs=[1.0, 1.0, 1.0])
        bad = excluded_tau(spec, 0, 1)
        pair = perturb_tau(spec, 0, 1, bad * 1.001)
        assert pair.certificate_lower > 0.0


class TestPerturbTau:
    def test_zero_strength_keeps_diagonal(self):
        spec = NormalOrbitSpec(zeros=[0.5, -0.25], coeffs=[1.0, 1.0])
        pair = perturb_tau(spec, 0, 1, 0.0)
        assert np.array_equal(pair.orbit.T, np.diag(spec.zeros))

    def test_generator_entry_and_spectrum(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75, 0.875], coeffs=[1.0, 1.0, 1.0])
        tau = 0.1
        pair = perturb_tau(spec, 0, 1, tau)
        T = pair.orbit.T
        assert T[1, 0] == tau
        eigs = np.sort_complex(np.linalg.eigvals(np.asarray(T)))
        assert np.max(np.abs(eigs - np.sort_complex(spec.zeros))) < 1e-12

    def test_eigensystem_closed_forms(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75, 0.875], coeffs=[1.0, 1.0, 1.0])
        tau = 0.3 - 0.1j
        k, l = 0, 1
        pair = perturb_tau(spec, k, l, tau)
        d = spec.zeros[k] - spec.zeros[l]
        assert pair.h_basis[l, k] == tau
        assert pair.h_basis[k, k] == d
        assert pair.g_basis[k, l] == -np.conj(tau) / np.conj(d)
        assert pair.g_basis[k, k] == 1.0 / np.conj(d)
        assert pair.biorthogonality_residual < RESIDUAL_TOL
        assert pair.diagonalization_residual < RESIDUAL_TOL

    def test_dual_gram_block_spectrum(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75, 0.875], coeffs=[1.0, 1.0, 1.0])
        pair = perturb_tau(spec, 0, 1, 0.4j)
        dual_gram = np.linalg.inv(pair.h_basis.conj().T @ pair.h_basis)
        w = np.linalg.eigvalsh(dual_gram)
        assert pair.riesz_lower == pytest.approx(float(w[0]), rel=1e-12)
        assert pair.riesz_upper == pytest.approx(float(w[-1]), rel=1e-12)
        assert pair.riesz_lower <= 1.0 <= pair.riesz_upper

    def test_normality_gap_is_tau_squared(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75, 0.875], coeffs=[1.0, 1.0, 1.0])
        tau = 0.25
        k = 0
        pair = perturb_tau(spec, k, 1, tau)
        T = np.asarray(pair.orbit.T)
        e_k = np.zeros(3)
        e_k[k] = 1.0
        gap = np.linalg.norm(T @ e_k) ** 2 - np.linalg.norm(T.conj().T @ e_k) ** 2
        assert gap == pytest.approx(tau**2, rel=1e-13)

    def test_certificate_contains_measured(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75, 0.875], coeffs=[1.0, 1.0, 1.0])
        pair = perturb_tau(spec, 0, 1, 0.1)
        report = frame_bounds(pair.orbit)
        tail = report.tail_estimate
        assert tail is not None
        assert report.upper_bound <= pair.certificate_upper * (1.0 + CONTAIN_SLACK)
        assert report.lower_bound >= pair.certificate_lower - tail - CONTAIN_SLACK

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_containment_random(self, seed):
        spec = random_spec(seed, size=3, r_hi=0.6)
        rng = np.random.default_rng(seed + 13)
        tau = complex(*rng.uniform(-0.3, 0.3, 2))
        bad = excluded_tau(spec, 1, 2)
        if abs(tau - bad) < 1e-6 * max(1.0, abs(bad)):
            tau += 0.1
        pair = perturb_tau(spec, 1, 2, tau)
        report = frame_bounds(pair.orbit)
        assert report.upper_bound <= pair.certificate_upper * (1.0 + CONTAIN_SLACK)
        floor = pair.certificate_lower - report.tail_estimate
        assert report.lower_bound >= floor - CONTAIN_SLACK * pair.certificate_lower

    def test_index_validation(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75], coeffs=[1.0, 1.0])
        with pytest.raises(ValueError, match="indices"):
            perturb_tau(spec, 0, 5, 0.1)
        with pytest.raises(ValueError, match="distinct"):
            perturb_tau(spec, 1, 1, 0.1)

    def test_to_dict_keys(self):
        spec = NormalOrbitSpec(zeros=[0.5, 0.75], coeffs=[1.0, 1.0])
        d = perturb_tau(spec, 0, 1, 0.05).to_dict()
        assert d["tau"] == [0.05, 0.0]
        assert set(d) >= {
            "riesz_lower",
            "riesz_upper",
            "certificate_lower",
            "certificate_upper",
            "biorthogonality_residual",
        }
