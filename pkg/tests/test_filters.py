import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from imufuse.angles import GRAVITY, ImuSample, Vec3, pitch_from_accel
from imufuse.filters import (
    EstimateSeries,
    GammaConfig,
    KalmanModel,
    KalmanTuning,
    complementary_step,
    final_drift,
    gamma,
    kalman_tuning_from_noise,
    kf_predict,
    kf_update,
    max_abs_error,
    rmse,
    run_estimator,
    score,
)
from imufuse.simulate import (
    NoiseConfig,
    TrajectoryConfig,
    TruthSeries,
    add_noise,
    generate_trajectory,
    ideal_imu,
)

DEFAULT_GAMMA = GammaConfig()


def _sample(ax, ay, az, gy=0.0, t=0.0):
    return ImuSample(t=t, accel=Vec3(ax, ay, az), gyro=Vec3(0.0, gy, 0.0))


class TestGamma:
    def test_at_rest_is_zero(self):
        assert gamma((0.0, 0.0, 9.81), DEFAULT_GAMMA) == 0.0

    def test_linear_midpoint(self):
        cfg = GammaConfig(accel_scale=4.905)
        assert gamma((0.0, 0.0, 9.81 - 0.5 * 4.905), cfg) == pytest.approx(
            0.5, abs=1e-12
        )

    def test_clamps_at_unity(self):
        cfg = GammaConfig(accel_scale=1.0)
        assert gamma((0.0, 0.0, 9.81 + 10.0), cfg) == 1.0

    def test_invalid_scale_rejected(self):
        with pytest.raises(ValueError, match="accel_scale"):
            GammaConfig(accel_scale=0.0)

    @given(st.floats(min_value=-100.0, max_value=100.0))
    def test_in_unit_interval(self, az):
        assert 0.0 <= gamma((0.0, 0.0, az), DEFAULT_GAMMA) <= 1.0

    @given(
        st.floats(min_value=0.0, max_value=50.0),
        st.floats(min_value=0.0, max_value=50.0),
    )
    def test_monotone_in_dynamic_acceleration(self, d_small, d_big):
        lo, hi = sorted((d_small, d_big))
        cfg = GammaConfig(accel_scale=3.0)
        assert gamma((0.0, 0.0, 9.81 - lo), cfg) <= gamma((0.0, 0.0, 9.81 - hi), cfg)


class TestComplementaryStep:
    def test_pure_accelerometer_endpoint(self):
        # a_z = g forces gamma = 0: output is exactly the accelerometer pitch
        sample = _sample(2.0, 0.0, DEFAULT_GAMMA.g, gy=5.0)
        out = complementary_step(0.7, sample, 0.01, DEFAULT_GAMMA)
        assert out == pitch_from_accel(sample.accel)

    def test_pure_gyro_endpoint(self):
        # |g - a_z| >= accel_scale forces gamma = 1: output is the gyro step
        sample = _sample(1.0, 0.0, DEFAULT_GAMMA.g - 10.0, gy=0.3)
        out = complementary_step(0.2, sample, 0.01, DEFAULT_GAMMA)
        assert out == pytest.approx(0.2 + 0.3 * 0.01, abs=1e-15)

    def test_quarter_weight_blend(self):
        cfg = GammaConfig(accel_scale=4.905)
        az = cfg.g - 0.25 * cfg.accel_scale  # gamma = 0.25
        ax = math.tan(0.2) * az  # accelerometer pitch = 0.2
        sample = _sample(ax, 0.0, az, gy=0.0)
        out = complementary_step(0.4, sample, 0.01, cfg)  # gyro pitch stays 0.4
        assert out == pytest.approx(0.2 * 0.75 + 0.4 * 0.25, abs=1e-12)

    def test_propagates_zero_accel_error(self):
        with pytest.raises(ValueError, match="indeterminate orientation"):
            complementary_step(0.0, _sample(0.0, 0.0, 0.0), 0.01, DEFAULT_GAMMA)

    @given(
        st.floats(min_value=-1.0, max_value=1.0),
        st.floats(min_value=-5.0, max_value=5.0),
        st.floats(min_value=-3.0, max_value=25.0),
        st.floats(min_value=-5.0, max_value=5.0),
    )
    def test_output_is_convex_blend(self, prev, ax, az, gy):
        sample = _sample(ax, 0.0, az, gy=gy)
        if ax == 0.0 and az == 0.0:
            return
        pacc = pitch_from_accel(sample.accel)
        pgyro = prev + gy * 0.01
        out = complementary_step(prev, sample, 0.01, DEFAULT_GAMMA)
        assert min(pacc, pgyro) - 1e-12 <= out <= max(pacc, pgyro) + 1e-12


def _model(x=(0.0, 0.0), p=((0.1, 0.0), (0.0, 0.01)), q=(4e-8, 4.225e-5), r=0.0026):
    return KalmanModel(
        x=np.array(x, dtype=float),
        P=np.array(p, dtype=float),
        Q=np.diag(q).astype(float),
        R=r,
    )


class TestKalmanPredict:
    def test_bias_free_propagation(self):
        out = kf_predict(_model(), gyro_y=0.1, dt=0.01)
        assert out.x[0] == pytest.approx(0.001, abs=1e-12)
        assert out.x[1] == 0.0

    def test_bias_cancels_rate(self):
        out = kf_predict(_model(x=(0.0, 0.1)), gyro_y=0.1, dt=0.01)
        assert out.x[0] == 0.0

    def test_covariance_arithmetic(self):
        model = _model(p=((1.0, 0.0), (0.0, 1.0)), q=(0.0, 0.0))
        out = kf_predict(model, gyro_y=0.0, dt=0.01)
        F = np.array([[1.0, -0.01], [0.0, 1.0]])
        np.testing.assert_allclose(out.P, F @ F.T, atol=1e-15)
        assert np.trace(out.P) == pytest.approx(2.0001, abs=1e-12)

    def test_non_positive_dt_rejected(self):
        with pytest.raises(ValueError, match="non-positive timestep"):
            kf_predict(_model(), gyro_y=0.0, dt=0.0)


class TestKalmanUpdate:
    def test_zero_prior_uncertainty_ignores_measurement(self):
        model = _model(p=((1e-15, 0.0), (0.0, 1e-15)), r=1.0)
        out = kf_update(model, 0.2)
        np.testing.assert_allclose(out.x, model.x, atol=1e-12)

    def test_uninformative_measurement_ignored(self):
        model = _model(p=((1.0, 0.0), (0.0, 1.0)), r=1e12)
        out = kf_update(model, 0.2)
        np.testing.assert_allclose(out.x, model.x, atol=1e-6)

    def test_half_gain(self):
        model = _model(p=((1.0, 0.0), (0.0, 1.0)), r=1.0)
        out = kf_update(model, 0.2)
        assert out.x[0] == pytest.approx(0.1, abs=1e-12)

    def test_posterior_pitch_variance_shrinks(self):
        model = _model(p=((0.5, 0.1), (0.1, 0.2)), r=0.3)
        out = kf_update(model, 0.05)
        assert out.P[0, 0] <= model.P[0, 0]

    def test_non_positive_r_rejected(self):
        with pytest.raises(ValueError, match="R must be > 0"):
            kf_update(_model(r=0.0), 0.1)


class TestKalmanCovarianceHealth:
    def test_psd_through_random_cycles(self):
        rng = np.random.default_rng(20)
        model = _model()
        worst_asym = 0.0
        mats = []
        for _ in range(2000):
            a = rng.standard_normal((2, 2))
            model = KalmanModel(
                x=model.x,
                P=model.P,
                Q=0.01 * (a @ a.T),
                R=float(np.exp(rng.uniform(-6, 2))),
            )
            model = kf_predict(model, rng.standard_normal(), rng.uniform(1e-3, 0.1))
            model = kf_update(model, rng.standard_normal())
            worst_asym = max(worst_asym, abs(model.P[0, 1] - model.P[1, 0]))
            mats.append(model.P)
        assert worst_asym == 0.0
        eigs = np.linalg.eigvalsh(np.array(mats))
        assert eigs.min() >= -1e-12

    def test_trace_non_decreasing_along_filter_run(self):
        # the pitch/bias cross-covariance stays non-positive on real runs,
        # which keeps the predict step from shrinking the trace
        truth = generate_trajectory(TrajectoryConfig())
        noisy = add_noise(ideal_imu(truth), NoiseConfig(seed=4))
        tuning = kalman_tuning_from_noise(NoiseConfig(), noisy.dt)
        model = KalmanModel.initial(pitch_from_accel(noisy.accel[0]), tuning)
        for k in range(1, len(noisy)):
            before = np.trace(model.P)
            model = kf_predict(model, noisy.gyro[k, 1], noisy.dt)
            assert np.trace(model.P) >= before - 1e-15
            model = kf_update(model, pitch_from_accel(noisy.accel[k]))


class TestRunEstimator:
    def setup_method(self):
        self.truth = generate_trajectory(TrajectoryConfig())
        self.ideal = ideal_imu(self.truth)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unknown estimator kind"):
            run_estimator(self.ideal, "madgwick")

    def test_gyro_only_matches_euler_recurrence(self):
        est = run_estimator(self.ideal, "gyro_only")
        pitch = pitch_from_accel(self.ideal.accel[0])
        expected = [pitch]
        for k in range(1, len(self.ideal)):
            pitch = pitch + self.ideal.gyro[k, 1] * self.ideal.dt
            expected.append(pitch)
        np.testing.assert_array_equal(est.pitch, np.array(expected))

    def test_accel_only_recovers_truth(self):
        est = run_estimator(self.ideal, "accel_only")
        np.testing.assert_allclose(est.pitch, self.truth.pitch, atol=1e-9)

    def test_complementary_beats_gyro_on_noisy_seeds(self):
        for seed in (0, 7, 42):
            noisy = add_noise(self.ideal, NoiseConfig(seed=seed))
            comp = run_estimator(noisy, "complementary")
            gyro = run_estimator(noisy, "gyro_only")
            assert rmse(comp, self.truth) < rmse(gyro, self.truth)

    def test_tiny_accel_scale_degenerates_to_gyro_only(self):
        noisy = add_noise(self.ideal, NoiseConfig(seed=2))
        assert np.all(noisy.accel[:, 2] != DEFAULT_GAMMA.g)
        comp = run_estimator(
            noisy, "complementary", gamma_cfg=GammaConfig(accel_scale=1e-12)
        )
        gyro = run_estimator(noisy, "gyro_only")
        np.testing.assert_allclose(comp.pitch, gyro.pitch, atol=1e-12)

    def test_level_accel_degenerates_to_accel_only(self):
        from imufuse.simulate import ImuSeries

        rng = np.random.default_rng(8)
        n = 100
        accel = np.column_stack(
            [rng.normal(0, 1, n), rng.normal(0, 1, n), np.full(n, DEFAULT_GAMMA.g)]
        )
        series = ImuSeries(
            t=np.arange(n) * 0.01, accel=accel, gyro=rng.normal(0, 1, (n, 3))
        )
        comp = run_estimator(series, "complementary")
        acc = run_estimator(series, "accel_only")
        np.testing.assert_allclose(comp.pitch, acc.pitch, atol=1e-12)

    def test_zero_accel_mid_series_fails_with_index(self):
        from imufuse.simulate import ImuSeries

        accel = np.tile([0.0, 0.0, 9.81], (10, 1))
        accel[6] = 0.0
        series = ImuSeries(t=np.arange(10) * 0.01, accel=accel, gyro=np.zeros((10, 3)))
        for kind in ("accel_only", "complementary", "kalman"):
            with pytest.raises(ValueError, match="sample 6"):
                run_estimator(series, kind)

    def test_initial_pitch_override(self):
        est = run_estimator(self.ideal, "gyro_only", initial_pitch=0.25)
        assert est.pitch[0] == 0.25

    def test_estimates_on_input_timestamps(self):
        noisy = add_noise(self.ideal, NoiseConfig(seed=1))
        for kind in ("complementary", "gyro_only", "accel_only", "kalman"):
            est = run_estimator(noisy, kind)
            assert len(est) == len(noisy)
            np.testing.assert_array_equal(est.t, noisy.t)

    def test_kalman_converges_on_static_bias(self):
        static = generate_trajectory(TrajectoryConfig(amplitude=0.0))
        imu = ideal_imu(static)
        from imufuse.simulate import ImuSeries

        gyro = imu.gyro.copy()
        gyro[:, 1] += 0.1  # constant injected bias, noise-free accel
        biased = ImuSeries(t=imu.t, accel=imu.accel, gyro=gyro)
        est = run_estimator(biased, "kalman")
        assert abs(est.pitch[-1] - 0.0) <= 0.01

    def test_accepts_sample_list(self):
        samples = [self.ideal.sample(i) for i in range(5)]
        est = run_estimator(samples, "accel_only")
        assert len(est) == 5


class TestMetrics:
    def _truth(self, pitch):
        n = len(pitch)
        return TruthSeries(
            t=np.arange(n) * 0.01,
            pitch=np.asarray(pitch, dtype=float),
            pitch_rate=np.zeros(n),
            linear_accel=np.zeros((n, 3)),
        )

    def _estimates(self, truth, offset=0.0):
        return EstimateSeries(
            name="test", t=truth.t.copy(), pitch=truth.pitch + offset
        )

    def test_rmse_zero_on_equal(self):
        truth = self._truth([0.1, 0.2, -0.3])
        assert rmse(self._estimates(truth), truth) == 0.0

    def test_rmse_constant_offset(self):
        truth = self._truth(np.linspace(-0.4, 0.4, 17))
        assert rmse(self._estimates(truth, 0.25), truth) == pytest.approx(
            0.25, abs=1e-12
        )

    def test_rmse_against_elementwise_reference(self):
        # brute-force oracle: explicit loop over a frozen 10-sample pair
        est_pitch = [0.11, -0.42, 0.73, 0.05, -0.88, 0.31, 0.62, -0.17, 0.29, -0.55]
        truth_pitch = [0.13, -0.40, 0.70, 0.00, -0.80, 0.35, 0.60, -0.20, 0.30, -0.50]
        truth = self._truth(truth_pitch)
        est = EstimateSeries(name="test", t=truth.t.copy(), pitch=np.array(est_pitch))
        acc = 0.0
        for a, b in zip(est_pitch, truth_pitch):
            acc += (a - b) ** 2
        expected = math.sqrt(acc / len(est_pitch))
        assert rmse(est, truth) == pytest.approx(expected, abs=1e-12)

    def test_final_drift(self):
        truth = self._truth([0.0, 0.1, 0.2])
        assert final_drift(self._estimates(truth), truth) == 0.0
        assert final_drift(self._estimates(truth, 0.3), truth) == pytest.approx(
            0.3, abs=1e-12
        )
        assert final_drift(self._estimates(truth, -0.3), truth) == pytest.approx(
            0.3, abs=1e-12
        )

    def test_max_abs_error(self):
        truth = self._truth([0.0, 0.0, 0.0, 0.0])
        est = EstimateSeries(
            name="test", t=truth.t.copy(), pitch=np.array([0.1, -0.7, 0.2, 0.0])
        )
        assert max_abs_error(est, truth) == pytest.approx(0.7, abs=1e-15)

    def test_length_mismatch_rejected(self):
        truth = self._truth([0.0, 0.1])
        est = EstimateSeries(name="test", t=np.array([0.0]), pitch=np.array([0.0]))
        with pytest.raises(ValueError, match="length mismatch"):
            rmse(est, truth)

    def test_timestamp_mismatch_rejected(self):
        truth = self._truth([0.0, 0.1])
        est = EstimateSeries(
            name="test", t=truth.t + 0.005, pitch=truth.pitch.copy()
        )
        with pytest.raises(ValueError, match="timestamp mismatch"):
            final_drift(est, truth)

    def test_score_fills_metrics(self):
        truth = self._truth([0.0, 0.1, 0.2])
        scored = score(self._estimates(truth, 0.1), truth)
        assert scored.rmse == pytest.approx(0.1, abs=1e-12)
        assert scored.final_error == pytest.approx(0.1, abs=1e-12)


class TestKalmanTuning:
    def test_derived_from_noise_model(self):
        tuning = kalman_tuning_from_noise(
            NoiseConfig(sigma_accel=0.5, sigma_gyro=0.02, sigma_rw=0.065), dt=0.01
        )
        assert tuning.q_pitch == pytest.approx(0.02**2 * 0.01**2, abs=1e-15)
        assert tuning.q_bias == pytest.approx(0.065**2 * 0.01, abs=1e-15)
        assert tuning.r == pytest.approx((0.5 / GRAVITY) ** 2, abs=1e-15)

    def test_rejects_bad_dt(self):
        with pytest.raises(ValueError, match="non-positive timestep"):
            kalman_tuning_from_noise(NoiseConfig(), dt=0.0)
