import math

import numpy as np
import pytest

from isacbeam import (Scenario, beam_pattern, build_grid, build_objective,
                      design_objective, make_pattern_spec, pattern_mse,
                      steering_vector)

PAPER_BANDS = ((10.0, 30.0), (40.0, 60.0))


def scenario(**kw):
    base = dict(n_bs=8, n_c=3, user_angles_deg=(-70.0, -40.0, -10.0),
                sinr_thresholds=(10.0,) * 3, p_t=100.0, noise_power=1.0,
                grid_size=400, objective_bands=PAPER_BANDS, rng_seed=0)
    base.update(kw)
    return Scenario(**base)


class TestBuildGrid:
    def test_four_points(self):
        np.testing.assert_allclose(build_grid(4), [-0.5, 0.0, 0.5, 1.0], atol=1e-15)

    def test_m400(self):
        g = build_grid(400)
        assert g.size == 400
        assert g[-1] == 1.0
        np.testing.assert_allclose(np.diff(g), 2.0 / 400, atol=1e-15)

    def test_range_contract(self):
        for m in (2, 3, 17, 1001):
            g = build_grid(m)
            assert np.all(g > -1.0) and np.all(g <= 1.0)
            assert np.all(np.diff(g) > 0)

    def test_too_small(self):
        with pytest.raises(ValueError):
            build_grid(1)


class TestBuildObjective:
    def test_paper_band_gain(self):
        # sqrt(2*3*100 / (sin30-sin10+sin60-sin40)): denominator ~0.54959
        sc = scenario()
        b = build_objective(sc, build_grid(400))
        gain = b[b > 0][0]
        denom = (math.sin(math.radians(30)) - math.sin(math.radians(10))
                 + math.sin(math.radians(60)) - math.sin(math.radians(40)))
        assert abs(denom - 0.54959) < 1e-5
        assert abs(gain - 33.0413) < 1e-3
        assert abs(gain ** 2 * denom - 2 * sc.n_rf * sc.p_t) < 1e-9

    def test_full_range_unit_gain(self):
        sc = scenario(n_c=1, n_t=0, user_angles_deg=(0.0,), sinr_thresholds=(1.0,),
                      p_t=1.0, objective_bands=((-89.999999, 90.0),))
        b = build_objective(sc, build_grid(64))
        assert abs(b.max() - 1.0) < 1e-6

    def test_zero_outside_bands(self):
        sc = scenario()
        grid = build_grid(400)
        b = build_objective(sc, grid)
        idx = int(np.argmin(np.abs(grid)))          # 0 degrees
        assert b[idx] == 0.0

    def test_band_edges_inclusive(self):
        # grid point 0.5 = sin(30 deg) sits exactly on a band edge
        sc = scenario()
        grid = build_grid(4)
        b = build_objective(sc, grid)
        assert b[2] > 0.0

    def test_zero_measure_band_rejected(self):
        sc = scenario()
        sc.objective_bands = ((10.0, 10.0),)
        with pytest.raises(ValueError):
            build_objective(sc, build_grid(16))

    def test_band_energy_integral(self):
        # sum b^2 * spacing ~ 2 n_rf p_t within band-quantization error
        sc = scenario(grid_size=4000)
        grid = build_grid(4000)
        b = build_objective(sc, grid)
        total = float(np.sum(b ** 2) * (2.0 / 4000))
        assert abs(total / (2 * sc.n_rf * sc.p_t) - 1.0) < 0.01


class TestBeamPattern:
    def test_zero_beam(self):
        spec = make_pattern_spec(scenario(grid_size=32))
        np.testing.assert_array_equal(beam_pattern(spec.phi, np.zeros(8, complex)),
                                      np.zeros(32))

    def test_matched_beam_peak(self):
        # conj steering scaled by sqrt(n_bs) projects to sqrt(n_bs) at its grid point
        sc = scenario(grid_size=32)
        spec = make_pattern_spec(sc)
        k = 20
        f_sum = math.sqrt(sc.n_bs) * np.conj(steering_vector(sc.n_bs, spec.grid[k]))
        pat = beam_pattern(spec.phi, f_sum)
        assert abs(pat[k] - math.sqrt(sc.n_bs)) < 1e-12

    def test_global_phase_invariance(self):
        spec = make_pattern_spec(scenario(grid_size=32))
        rng = np.random.default_rng(0)
        f = rng.normal(size=8) + 1j * rng.normal(size=8)
        c = np.exp(1j * 1.234)
        np.testing.assert_allclose(beam_pattern(spec.phi, f),
                                   beam_pattern(spec.phi, c * f), atol=1e-12)

    def test_shape_mismatch(self):
        spec = make_pattern_spec(scenario(grid_size=32))
        with pytest.raises(ValueError):
            beam_pattern(spec.phi, np.zeros(9, complex))


class TestPatternMse:
    def test_exact_match_zero(self):
        sc = scenario(grid_size=32)
        spec = make_pattern_spec(sc)
        rng = np.random.default_rng(1)
        f = rng.normal(size=(3, sc.n_bs)) + 1j * rng.normal(size=(3, sc.n_bs))
        b = beam_pattern(spec.phi, f.sum(axis=0))
        assert pattern_mse(spec.phi, f, b, sc.n_rf, sc.p_t) < 1e-25

    def test_zero_beams_against_objective(self):
        sc = scenario(grid_size=100)
        spec = make_pattern_spec(sc)
        f = np.zeros((sc.n_rf, sc.n_bs), complex)
        expected = float(sum(v * v for v in spec.b)) / (sc.n_rf * sc.p_t)
        assert abs(pattern_mse(spec.phi, f, spec.b, sc.n_rf, sc.p_t) - expected) < 1e-12

    def test_power_denominator_linearity(self):
        sc = scenario(grid_size=64)
        spec = make_pattern_spec(sc)
        rng = np.random.default_rng(2)
        f = rng.normal(size=(3, sc.n_bs)) + 1j * rng.normal(size=(3, sc.n_bs))
        m1 = pattern_mse(spec.phi, f, spec.b, sc.n_rf, sc.p_t)
        m2 = pattern_mse(spec.phi, f, spec.b, sc.n_rf, 2 * sc.p_t)
        assert abs(m2 - m1 / 2) < 1e-12

    def test_nonnegative(self):
        sc = scenario(grid_size=64)
        spec = make_pattern_spec(sc)
        rng = np.random.default_rng(3)
        for _ in range(20):
            f = rng.normal(size=(3, sc.n_bs)) + 1j * rng.normal(size=(3, sc.n_bs))
            assert pattern_mse(spec.phi, f, spec.b, sc.n_rf, sc.p_t) >= 0.0

    def test_shape_mismatch(self):
        sc = scenario(grid_size=64)
        spec = make_pattern_spec(sc)
        with pytest.raises(ValueError):
            pattern_mse(spec.phi, np.zeros((3, 5), complex), spec.b, 3, 100.0)


class TestPatternSpecInvariants:
    def test_rows_are_transposed_steering(self):
        sc = scenario(grid_size=40)
        spec = make_pattern_spec(sc)
        for m in (0, 7, 39):
            np.testing.assert_allclose(spec.phi[m],
                                       steering_vector(sc.n_bs, spec.grid[m]),
                                       atol=1e-14)

    def test_a_diag_equals_b(self):
        spec = make_pattern_spec(scenario())
        np.testing.assert_array_equal(spec.a_diag, spec.b)

    def test_design_objective_definition(self):
        sc = scenario(grid_size=32)
        spec = make_pattern_spec(sc)
        rng = np.random.default_rng(4)
        f_sum = rng.normal(size=sc.n_bs) + 1j * rng.normal(size=sc.n_bs)
        p = np.exp(1j * rng.uniform(0, 2 * np.pi, 32))
        direct = np.linalg.norm(spec.d_diag * (spec.phi @ f_sum - spec.b * p))
        assert abs(design_objective(spec, f_sum, p) - direct) < 1e-12
