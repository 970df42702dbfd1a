import math

import numpy as np
import pytest

from sinterbench.errors import ConfigError
from sinterbench.thermal import (GridSpec, GridState, LumpedParams, LumpedState,
                                 MaterialParams, heat_source, spot_temperature,
                                 steady_state_temperature, step_grid, step_lumped)

UNIT_BEAM = MaterialParams(absorptivity=1.0, beam_radius=1.0, penetration_depth=1.0)


class TestHeatSource:
    def test_center_value(self):
        q = heat_source(UNIT_BEAM, 1.0, (0, 0, 0), (0, 0, 0))
        assert q == pytest.approx(2.0 / math.pi, rel=1e-12)

    def test_zero_power(self):
        assert heat_source(UNIT_BEAM, 0.0, (0.3, -0.1, 0.2), (0, 0, 0)) == 0.0

    def test_one_radius_off_axis(self):
        q = heat_source(UNIT_BEAM, 1.0, (1, 0, 0), (0, 0, 0))
        assert q == pytest.approx((2.0 / math.pi) * math.exp(-2.0), rel=1e-12)

    def test_radially_monotone(self):
        center = (0.0, 0.0, 0.0)
        prev = math.inf
        for r in (0.0, 0.1, 0.5, 1.0, 2.0):
            q = heat_source(UNIT_BEAM, 1.0, (r, 0, 0), center)
            assert q < prev or r == 0.0
            prev = q

    def test_negative_power_rejected(self):
        with pytest.raises(ConfigError):
            heat_source(UNIT_BEAM, -1.0, (0, 0, 0), (0, 0, 0))

    def test_non_finite_rejected(self):
        with pytest.raises(ConfigError):
            heat_source(UNIT_BEAM, 1.0, (math.nan, 0, 0), (0, 0, 0))


def _spec(n=5, d=1e-4, dt=None, boundary=25.0):
    params = MaterialParams()
    tmp = GridSpec(nx=n, ny=n, nz=n, dx=d, dy=d, dz=d, dt=1e-3, boundary=boundary)
    if dt is None:
        dt = 0.5 * tmp.stability_limit(params)
    return GridSpec(nx=n, ny=n, nz=n, dx=d, dy=d, dz=d, dt=dt, boundary=boundary), params


class TestStepGrid:
    def test_uniform_field_unchanged(self):
        spec, params = _spec()
        state = GridState(temps=np.full((5, 5, 5), 25.0))
        out = step_grid(state, spec, params, 0.0, (0, 0, 0))
        np.testing.assert_allclose(out.temps, 25.0)
        assert out.t == 1

    def test_hot_cell_diffuses(self):
        # 3-point stencil hand calculation: interior hot cell loses
        # dt*alpha*6*delta/dx^2, each face neighbor gains dt*alpha*delta/dx^2.
        spec, params = _spec(n=5)
        delta = 10.0
        T = np.full((5, 5, 5), 25.0)
        T[2, 2, 2] += delta
        out = step_grid(GridState(temps=T), spec, params, 0.0, (0, 0, 0)).temps
        alpha = params.k / (params.rho * params.c)
        gain = spec.dt * alpha * delta / spec.dx**2
        assert out[2, 2, 2] == pytest.approx(25.0 + delta - 6 * gain, rel=1e-12)
        for idx in ((1, 2, 2), (3, 2, 2), (2, 1, 2), (2, 3, 2), (2, 2, 1), (2, 2, 3)):
            assert out[idx] == pytest.approx(25.0 + gain, rel=1e-12)

    def test_source_deposits_closed_form(self):
        spec, params = _spec(n=5)
        state = GridState(temps=np.full((5, 5, 5), 25.0))
        center = (2.5 * spec.dx, 2.5 * spec.dy, 2.5 * spec.dz)
        out = step_grid(state, spec, params, 1.0, center).temps
        q_center = heat_source(params, 1.0, center, center)
        expected = 25.0 + spec.dt * q_center / (params.rho * params.c)
        assert out[2, 2, 2] == pytest.approx(expected, rel=1e-12)

    def test_unstable_dt_names_limit(self):
        spec, params = _spec()
        bad = GridSpec(nx=5, ny=5, nz=5, dx=spec.dx, dy=spec.dy, dz=spec.dz,
                       dt=10 * spec.stability_limit(params), boundary=25.0)
        with pytest.raises(ConfigError, match="admissible dt"):
            step_grid(GridState(temps=np.full((5, 5, 5), 25.0)), bad, params, 0.0, (0, 0, 0))

    def test_discrete_maximum_principle(self):
        spec, params = _spec(n=6)
        rng = np.random.default_rng(1)
        T = rng.uniform(20.0, 80.0, (6, 6, 6))
        lo = min(T.min(), spec.boundary)
        hi = max(T.max(), spec.boundary)
        state = GridState(temps=T)
        for _ in range(20):
            state = step_grid(state, spec, params, 0.0, (0, 0, 0))
            assert state.temps.min() >= lo - 1e-9
            assert state.temps.max() <= hi + 1e-9


class TestStepLumped:
    def test_fixed_point(self):
        lp = LumpedParams()
        power = 2.0
        t_star = steady_state_temperature(lp, power)
        out = step_lumped(LumpedState(t_spot=t_star), lp, power, 1.0)
        assert out.t_spot == pytest.approx(t_star, rel=1e-12)

    def test_ambient_rest(self):
        lp = LumpedParams()
        out = step_lumped(LumpedState(t_spot=lp.t_amb), lp, 0.0, 1.0)
        assert out.t_spot == lp.t_amb

    def test_hand_value(self):
        lp = LumpedParams(c_eff=10.0, h_loss=0.01404, t_amb=25.0, absorptivity=1.0)
        out = step_lumped(LumpedState(t_spot=165.0), lp, 0.25, 1.0)
        assert out.t_spot == pytest.approx(164.8284, abs=1e-4)

    def test_monotone_convergence_to_fixed_point(self):
        lp = LumpedParams()
        power = 2.0
        t_star = steady_state_temperature(lp, power)
        for t0 in (t_star - 30.0, t_star + 30.0):
            state = LumpedState(t_spot=t0)
            gaps = []
            for _ in range(50):
                state = step_lumped(state, lp, power, 1.0)
                gaps.append(state.t_spot - t_star)
            signs = set(np.sign(g) for g in gaps if g != 0)
            assert len(signs) <= 1  # no overshoot at this dt
            assert abs(gaps[-1]) < abs(gaps[0])

    def test_bad_dt(self):
        with pytest.raises(ConfigError):
            step_lumped(LumpedState(t_spot=25.0), LumpedParams(), 1.0, 0.0)


class TestSpotTemperature:
    def test_lumped(self):
        assert spot_temperature(LumpedState(t_spot=167.5)) == 167.5

    def test_uniform_grid(self):
        spec, params = _spec()
        state = GridState(temps=np.full((5, 5, 5), 31.0))
        c = (2.5 * spec.dx, 2.5 * spec.dy, 2.5 * spec.dz)
        assert spot_temperature(state, center=c, spec=spec) == 31.0

    def test_heated_grid_consistent_with_step(self):
        spec, params = _spec()
        c = (2.5 * spec.dx, 2.5 * spec.dy, 2.5 * spec.dz)
        out = step_grid(GridState(temps=np.full((5, 5, 5), 25.0)), spec, params, 1.0, c)
        assert spot_temperature(out, center=c, spec=spec) == out.temps[2, 2, 2]

    def test_center_outside_grid(self):
        spec, _ = _spec()
        state = GridState(temps=np.full((5, 5, 5), 25.0))
        with pytest.raises(ConfigError):
            spot_temperature(state, center=(1.0, 0.0, 0.0), spec=spec)


def test_steady_power_matches_loss_balance():
    lp = LumpedParams()
    p_ss = lp.h_loss * (167.5 - lp.t_amb) / lp.absorptivity
    assert steady_state_temperature(lp, p_ss) == pytest.approx(167.5, abs=1e-9)
    assert 1.8 <= p_ss <= 2.3
