"""Accuracy metric, moment errors, density grids, toy block-Gaussian fits."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ndtr

from momprop.diagnostics import (DensityGrid, ToyGaussianSpec, accuracy,
                                 gaussian_density, gaussian_grid_range,
                                 ig_density, ig_grid_range, make_points,
                                 moment_errors, t_density, toy_gaussian_mp)
from momprop.exceptions import DomainError
from momprop.reports import MomentSummary


class TestAccuracy:
    def test_identical_densities(self):
        pts = make_points(-8.0, 8.0)
        g = gaussian_density(pts, 0.0, 1.0)
        assert accuracy(g, g) == pytest.approx(1.0)

    def test_unit_shift_closed_form(self):
        # single crossing at 0.5: accuracy = 1 - (Phi(0.5) - Phi(-0.5))
        pts = make_points(-8.0, 9.0)
        p = gaussian_density(pts, 0.0, 1.0)
        q = gaussian_density(pts, 1.0, 1.0)
        expect = 1.0 - (ndtr(0.5) - ndtr(-0.5))
        assert accuracy(p, q) == pytest.approx(expect, abs=1e-5)
        assert expect == pytest.approx(0.6170750774519738, rel=1e-12)

    def test_disjoint_densities(self):
        pts = make_points(-8.0, 18.0, 8001)
        p = gaussian_density(pts, 0.0, 1.0)
        q = gaussian_density(pts, 10.0, 1.0)
        assert accuracy(p, q) == pytest.approx(0.0, abs=1e-6)

    def test_mismatched_grids_rejected(self):
        p = gaussian_density(make_points(-8.0, 8.0), 0.0, 1.0)
        q = gaussian_density(make_points(-8.0, 8.5), 0.0, 1.0)
        with pytest.raises(DomainError):
            accuracy(p, q)

    @given(st.floats(-2.0, 2.0), st.floats(0.2, 3.0),
           st.floats(-2.0, 2.0), st.floats(0.2, 3.0))
    @settings(max_examples=50, deadline=None)
    def test_symmetric_and_bounded(self, m1, v1, m2, v2):
        pts = make_points(-25.0, 25.0)
        p = gaussian_density(pts, m1, v1)
        q = gaussian_density(pts, m2, v2)
        a = accuracy(p, q)
        b = accuracy(q, p)
        assert a == pytest.approx(b, abs=1e-12)
        assert -1e-9 <= a <= 1.0 + 1e-9


class TestDensityGrids:
    def test_gaussian_mass(self):
        lo, hi = gaussian_grid_range(2.0, 4.0)
        g = gaussian_density(make_points(lo, hi), 2.0, 4.0)
        assert g.mass() == pytest.approx(1.0, abs=1e-6)

    def test_t_mass(self):
        g = t_density(make_points(-40.0, 40.0, 8001), 0.0, 1.5, 5.0)
        assert 0.99 <= g.mass() <= 1.01

    def test_ig_mass_with_quantile_range(self):
        lo, hi = ig_grid_range(2.51, 18.45)
        g = ig_density(make_points(lo, hi), 2.51, 18.45)
        assert 0.99 <= g.mass() <= 1.01

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            DensityGrid(points=[0.0, 1.0], values=[1.0])
        with pytest.raises(DomainError):
            DensityGrid(points=[1.0, 0.0], values=[1.0, 1.0])
        with pytest.raises(DomainError):
            DensityGrid(points=[0.0, 1.0], values=[-1.0, 1.0])


class TestMomentErrors:
    def test_identical_summaries(self):
        s = MomentSummary("a", mean=[1.0, 2.0], cov=np.eye(2))
        me, se = moment_errors(s, s)
        assert me == pytest.approx(np.zeros(2))
        assert se == pytest.approx(np.zeros(2))

    def test_reference_sd_error(self):
        a = MomentSummary("mfvb", mean=[0.908], cov=[[1.47]])
        b = MomentSummary("exact", mean=[0.908], cov=[[2.44]])
        _, se = moment_errors(a, b)
        assert se[0] == pytest.approx(np.sqrt(1.47) - np.sqrt(2.44),
                                      rel=1e-12)
        assert se[0] == pytest.approx(-0.350, abs=5e-4)

    def test_dimension_mismatch(self):
        a = MomentSummary("a", mean=[0.0], cov=[[1.0]])
        b = MomentSummary("b", mean=[0.0, 1.0], cov=np.eye(2))
        with pytest.raises(DomainError):
            moment_errors(a, b)


class TestToyGaussian:
    def test_block_independent(self):
        spec = ToyGaussianSpec(mu=np.zeros(3), Sigma=np.eye(3), split=1)
        q1, q2, m1, m2 = toy_gaussian_mp(spec)
        assert q1.cov == pytest.approx(np.eye(1))
        assert q2.cov == pytest.approx(np.eye(2))
        assert m1.cov == pytest.approx(q1.cov)
        assert m2.cov == pytest.approx(q2.cov)

    def test_strong_coupling_reference(self):
        spec = ToyGaussianSpec(mu=[0.0, 0.0],
                               Sigma=[[1.0, 0.9], [0.9, 1.0]], split=1)
        q1, q2, m1, m2 = toy_gaussian_mp(spec, eps=1e-14, max_iter=100_000)
        assert q1.cov[0, 0] == pytest.approx(1.0, abs=1e-10)
        assert q2.cov[0, 0] == pytest.approx(1.0, abs=1e-10)
        assert m1.cov[0, 0] == pytest.approx(0.19, rel=1e-12)
        assert m2.cov[0, 0] == pytest.approx(0.19, rel=1e-12)

    def test_random_spd_blocks_recovered(self):
        rng = np.random.default_rng(31)
        a = rng.standard_normal((5, 5))
        Sigma = a @ a.T + 5 * np.eye(5)
        spec = ToyGaussianSpec(mu=rng.standard_normal(5), Sigma=Sigma,
                               split=2)
        q1, q2, m1, m2 = toy_gaussian_mp(spec, eps=1e-14, max_iter=100_000)
        assert np.max(np.abs(q1.cov - Sigma[:2, :2])) <= 1e-10
        assert np.max(np.abs(q2.cov - Sigma[2:, 2:])) <= 1e-10

    def test_mfvb_variances_below_mp(self):
        rng = np.random.default_rng(37)
        for _ in range(5):
            a = rng.standard_normal((4, 4))
            Sigma = a @ a.T + 4 * np.eye(4)
            spec = ToyGaussianSpec(mu=np.zeros(4), Sigma=Sigma, split=2)
            q1, q2, m1, m2 = toy_gaussian_mp(spec, eps=1e-13,
                                             max_iter=100_000)
            assert np.all(np.diag(m1.cov) <= np.diag(q1.cov) + 1e-12)
            assert np.all(np.diag(m2.cov) <= np.diag(q2.cov) + 1e-12)
            if np.max(np.abs(Sigma[:2, 2:])) > 1e-9:
                assert np.all(np.diag(m1.cov) < np.diag(q1.cov))

    def test_split_validation(self):
        with pytest.raises(DomainError):
            ToyGaussianSpec(mu=np.zeros(2), Sigma=np.eye(2), split=2)
