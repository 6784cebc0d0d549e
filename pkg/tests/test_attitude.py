import io
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from runge_guard import chebyshev as cheb
from runge_guard.attitude import (
    PicardConfig,
    ReconstructionConfig,
    accumulate,
    attitude_error,
    interval_window,
    quatfiter_integrate,
    reconstruct_omega,
    run_sequence,
)
from runge_guard.chebyshev import ChebSeries
from runge_guard.errors import BoundaryWindowError, ContiguityError
from runge_guard.interp_core import EFH_BAC, POLY_BAC, POLY_PLAIN, SCHEMES, SampleWindow
from runge_guard.motion import (
    ConingParams,
    GyroModel,
    IncrementStream,
    coning_omega,
    coning_quaternion,
    exact_increment,
    synthesize,
)
from runge_guard.quaternion import Quaternion

P = ConingParams.from_degrees(1.0, 50.0)
DT = 1e-3


def window_from_increments(inc, N, d):
    values = accumulate(np.vstack([np.zeros((1, 3)), inc]))
    return SampleWindow(0.0, DT, N, values, d, d)


def exact_omega_series(t0, t_N, scale=1.0, n=30):
    return cheb.fit(lambda tau: scale * coning_omega(t0 + t_N * (1 + tau) / 2, P), n, None, t_N)


class TestConfig:
    def test_defaults(self):
        cfg = ReconstructionConfig()
        assert (cfg.N, cfg.d, cfg.scheme) == (8, 8, POLY_BAC)
        assert cfg.n_theta == 24 and cfg.P_theta == 100

    def test_plain_borrows_nothing(self):
        assert ReconstructionConfig(8, 8, POLY_PLAIN).borrow == 0

    def test_fallback_is_plain(self):
        fb = ReconstructionConfig(8, 4, EFH_BAC).fallback()
        assert fb.scheme == POLY_PLAIN and fb.n_theta == 16

    @pytest.mark.parametrize("kw", [{"N": 0}, {"d": -1}, {"scheme": "spline"}, {"n_theta": 10, "P_theta": 5}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            ReconstructionConfig(**kw)

    def test_picard_invalid(self):
        with pytest.raises(ValueError):
            PicardConfig(max_iters=0)


class TestAccumulate:
    def test_zero(self):
        assert np.array_equal(accumulate(np.zeros((10, 3))), np.zeros((10, 3)))

    def test_equal_increments(self):
        d, N = 3, 4
        v = np.array([0.25, -1.0, 3.0])
        out = accumulate(np.tile(v, (N + 2 * d + 1, 1)))
        for j in range(-d, N + d + 1):
            assert np.array_equal(out[j + d], (j + d + 1) * v)

    def test_differences_recover_increments(self):
        inc = synthesize(P, GyroModel(), 1.0).increments
        sums = accumulate(inc)
        back = np.diff(np.vstack([np.zeros((1, 3)), sums]), axis=0)
        # exact up to rounding of the running sum itself
        assert np.all(np.abs(back - inc) <= 2 * np.spacing(np.abs(sums)))

    def test_missing_sample(self):
        inc = np.zeros((5, 3))
        inc[2, 1] = np.nan
        with pytest.raises(ContiguityError):
            accumulate(inc)

    def test_timestamp_gap(self):
        with pytest.raises(ContiguityError):
            accumulate(np.zeros((4, 3)), t_end=[0.001, 0.002, 0.004, 0.005])


class TestReconstruct:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_constant_rate(self, scheme):
        inc = np.tile([0.1 * DT, 0.0, 0.0], (24, 1))
        om = reconstruct_omega(window_from_increments(inc, 8, 8), ReconstructionConfig(8, 8, scheme))
        tau = np.linspace(-1, 1, 33)
        assert np.max(np.abs(om(tau) - [0.1, 0.0, 0.0])) <= 1e-12

    @pytest.mark.parametrize("scheme", SCHEMES)
    @pytest.mark.parametrize("N", [2, 8])
    def test_linear_rate(self, scheme, N):
        a, b = np.array([0.3, -0.1, 0.05]), np.array([2.0, 1.0, -4.0])
        tk = (np.arange(-N, 2 * N + 1)) * DT
        # omega = a + b t integrated over each step
        inc = a * DT + b * (tk[1:] ** 2 - tk[:-1] ** 2)[:, None] / 2
        om = reconstruct_omega(window_from_increments(inc, N, N), ReconstructionConfig(N, N, scheme))
        tau = np.linspace(-1, 1, 33)
        t = N * DT * (1 + tau) / 2
        assert np.max(np.abs(om(tau) - (a + b * t[:, None]))) <= 1e-11

    def test_bac_beats_plain_on_coning(self):
        N = 8
        k = 10
        t = np.arange((k - 1) * N, (k + 2) * N + 1) * DT
        inc = exact_increment(t[:-1], t[1:], P)
        tau = np.linspace(-1, 1, 101)
        truth = coning_omega(k * N * DT + N * DT * (1 + tau) / 2, P)
        errs = {}
        for scheme in (POLY_PLAIN, POLY_BAC):
            om = reconstruct_omega(window_from_increments(inc, N, N), ReconstructionConfig(N, N, scheme))
            errs[scheme] = np.max(np.abs(om(tau) - truth))
        assert errs[POLY_BAC] <= 1e-2 * errs[POLY_PLAIN]

    def test_missing_margin(self):
        w = SampleWindow(0.0, DT, 8, np.zeros((12, 3)), 3, 0)
        with pytest.raises(BoundaryWindowError):
            reconstruct_omega(w, ReconstructionConfig(8, 8, POLY_BAC))

    def test_window_mismatch(self):
        w = SampleWindow(0.0, DT, 4, np.zeros((5, 3)))
        with pytest.raises(ValueError):
            reconstruct_omega(w, ReconstructionConfig(8, 0, POLY_PLAIN))


class TestPicard:
    def test_zero_rate_is_fixed_point(self):
        q0 = Quaternion.from_rotation_vector([0.1, 0.2, -0.3])
        res = quatfiter_integrate(ChebSeries(np.zeros((1, 3)), 0.008), q0)
        assert res.iterations == 1 and res.converged
        assert np.array_equal(res.q_end.as_array(), q0.as_array())

    @pytest.mark.parametrize("w", [0.7, -12.0, 40.0])
    def test_single_axis(self, w):
        t_N = 0.01
        q0 = Quaternion.from_axis_angle([1, 2, 3], 0.5)
        res = quatfiter_integrate(ChebSeries([[w, 0.0, 0.0]], t_N), q0)
        ref = q0 * Quaternion(math.cos(w * t_N / 2), math.sin(w * t_N / 2), 0, 0)
        assert np.max(np.abs(res.q_end.as_array() - ref.as_array())) <= 1e-13

    def test_exact_coning_one_interval(self):
        t_N = 8 * DT
        om = exact_omega_series(0.0, t_N, n=24)
        q, _ = quatfiter_integrate(om, coning_quaternion(0.0, P))
        assert attitude_error(coning_quaternion(t_N, P), q) < 1e-12

    def test_norm_kept_when_converged(self):
        om = exact_omega_series(0.5, 8 * DT)
        res = quatfiter_integrate(om, Quaternion.identity())
        assert res.converged and abs(res.norm_error) <= 1e-12

    def test_non_convergence_is_reported(self):
        om = ChebSeries([[300.0, 200.0, -100.0]], 0.05)
        res = quatfiter_integrate(om, Quaternion.identity(), PicardConfig(max_iters=3))
        assert not res.converged and res.iterations == 3 and res.residual > 1e-15

    def test_derivative_matches_kinematics(self):
        om = exact_omega_series(0.2, 8 * DT)
        res = quatfiter_integrate(om, coning_quaternion(0.2, P))
        dq = cheb.differentiate(res.series)
        for tau in np.linspace(-0.9, 0.9, 7):
            q = Quaternion.from_array(res.series(tau))
            rhs = (q * Quaternion(0.0, *om(tau))).as_array() * 0.5
            assert np.allclose(dq(tau), rhs, atol=1e-11)


class TestError:
    def test_identical(self):
        q = coning_quaternion(0.3, P)
        assert attitude_error(q, q) == 0.0

    def test_double_cover(self):
        q = coning_quaternion(0.3, P)
        assert attitude_error(q, -q) == 0.0

    def test_small_rotation(self):
        q = coning_quaternion(0.3, P)
        est = q * Quaternion.from_axis_angle([0, 0, 1], 1e-4)
        assert attitude_error(q, est) == pytest.approx(2 * math.sin(5e-5), abs=1e-9)

    def test_non_unit_warns(self):
        q = Quaternion(2.0, 0.0, 0.0, 0.0)
        with pytest.warns(UserWarning):
            assert attitude_error(Quaternion.identity(), q) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6))
def test_error_is_symmetric(v):
    a = Quaternion.from_rotation_vector(v[:3])
    b = Quaternion.from_rotation_vector(v[3:])
    assert abs(attitude_error(a, b) - attitude_error(b, a)) <= 1e-15


class TestSequence:
    def test_zero_motion(self):
        stream = IncrementStream(DT, np.zeros((80, 3)))
        for scheme in SCHEMES:
            res = run_sequence(stream, ReconstructionConfig(8, 8, scheme))
            assert np.all(res.errors < 1e-14)
            assert res.all_converged

    def test_boundaries_flagged(self):
        stream = synthesize(P, GyroModel(), 0.08)
        res = run_sequence(stream, ReconstructionConfig(8, 8, POLY_BAC), truth=P)
        assert list(res.boundary) == [True] + [False] * 8 + [True]
        assert np.isnan(res.errors_excl[[0, -1]]).all()
        assert res.records[-1].t_end == pytest.approx(0.08)

    def test_stream_must_tile(self):
        with pytest.raises(ValueError):
            run_sequence(IncrementStream(DT, np.zeros((20, 3))), ReconstructionConfig(8, 8))

    def test_interval_window_zero_start(self):
        stream = synthesize(P, GyroModel(), 0.05)
        w = interval_window(stream, 2, 8, 8)
        assert (w.left, w.right) == (8, 8)
        assert np.array_equal(w.values[0], np.zeros(3))
        first = interval_window(stream, 0, 8, 8)
        assert first.left == 0

    def test_chaining_consistency(self):
        N = 8
        t_N = N * DT
        q = coning_quaternion(0.0, P)
        for k in range(2):
            step, _ = quatfiter_integrate(exact_omega_series(k * t_N, t_N), Quaternion.identity())
            q = (q * step).normalized()
        assert attitude_error(coning_quaternion(2 * t_N, P), q) <= 1e-11

    def test_csv_export(self):
        stream = synthesize(P, GyroModel(seed=9), 0.04)
        res = run_sequence(stream, ReconstructionConfig(8, 8, EFH_BAC), truth=P)
        buf = io.StringIO()
        res.to_csv(buf)
        lines = buf.getvalue().splitlines()
        assert "# seed = 9" in lines
        assert "# scheme = efh_bac" in lines
        header = lines.index("interval,t_end,err_rad,boundary,err_rad_excl,converged")
        assert len(lines) - header - 1 == 5

    def test_rerun_is_bitwise(self):
        stream = synthesize(P, GyroModel(noise="arw", noise_level=1e-5, seed=3), 0.2)
        a = run_sequence(stream, ReconstructionConfig(8, 8, POLY_BAC), truth=P)
        b = run_sequence(stream, ReconstructionConfig(8, 8, POLY_BAC), truth=P)
        assert a.to_csv() == b.to_csv()


# Robustness of the coning scenario (1 deg, 50 Hz, 1000 Hz, N = d = 8) to
# numerical knobs, on a shortened run.

@pytest.fixture(scope="module")
def short_run():
    return synthesize(P, GyroModel(), 2.0)


def test_sampling_density_insensitive(short_run):
    for scheme in SCHEMES:
        base = run_sequence(short_run, ReconstructionConfig(8, 8, scheme), truth=P)
        dense = run_sequence(short_run, ReconstructionConfig(8, 8, scheme, P_theta=200), truth=P)
        assert np.max(np.abs(base.errors - dense.errors)) < 1e-12


def test_tolerance_is_dominated(short_run):
    for scheme in SCHEMES:
        tight = run_sequence(short_run, ReconstructionConfig(8, 8, scheme), PicardConfig(tol=1e-15), truth=P)
        loose = run_sequence(short_run, ReconstructionConfig(8, 8, scheme), PicardConfig(tol=1e-13), truth=P)
        delta = abs(tight.max_error_excl_boundary() - loose.max_error_excl_boundary())
        assert delta < tight.max_error_excl_boundary()


@pytest.mark.parametrize("c", [0.5, 2.0])
def test_scheme_ordering_survives_scaling(short_run, c):
    N, t_N = 8, 8 * DT
    # truth for the scaled rate, chained from exact-rate Picard steps
    table = [coning_quaternion(0.0, P)]
    for k in range(len(short_run) // N):
        step, _ = quatfiter_integrate(exact_omega_series(k * t_N, t_N, c), Quaternion.identity())
        table.append((table[-1] * step).normalized())

    def truth(t):
        return table[int(round(t / t_N))]

    scaled = IncrementStream(DT, short_run.increments * c)
    errs = []
    for scheme in (POLY_PLAIN, EFH_BAC, POLY_BAC):
        res = run_sequence(scaled, ReconstructionConfig(N, N, scheme), truth_fn=truth)
        errs.append(res.errors_excl[1:-1])
    errs = np.array(errs)
    assert np.all((errs[0] > errs[1]) & (errs[1] > errs[2]))


def test_picard_defaults_converge_quickly(short_run):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        res = run_sequence(short_run, ReconstructionConfig(8, 8, POLY_BAC), truth=P)
    assert res.all_converged
    assert max(r.iterations for r in res.records) < 15
