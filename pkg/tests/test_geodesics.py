"""Integrator semantics, geodesic oracles, incompleteness constructions,
parallel transport, the scalar comparison bound, and the reduced flow."""

import math

from fractions import Fraction as F

import numpy as np
import pytest

import semigeo as sg
from semigeo.errors import DomainError, NonTangentError, RhsDomainError


class TestIntegrate:
    def test_constant_rhs_zero(self):
        sys0 = sg.ODESystem(2, lambda t, y: np.zeros(2), "rest")
        traj = sg.integrate(sys0, [1.0, -2.0], (0.0, 3.0))
        assert traj.status.kind == sg.COMPLETED
        assert np.allclose(traj.states, [1.0, -2.0])

    def test_quadratic_blowup_near_one(self):
        # y' = y^2, y(0) = 1 has the closed form 1/(1 - t).
        sys1 = sg.ODESystem(1, lambda t, y: y * y, "quadratic")
        cfg = sg.IntegratorConfig(blowup_threshold=1e8)
        traj = sg.integrate(sys1, [1.0], (0.0, 2.0), cfg)
        assert traj.status.kind == sg.BLOWUP
        assert abs(traj.status.time - 1.0) <= 1e-3
        assert traj.status.norm >= 1e8

    def test_quadratic_default_config_terminates(self):
        # With the default 1e12 threshold and 1e-12 min step the step size
        # underflows just before the norm threshold; either terminal status
        # demonstrates the finite-time breakdown.
        sys1 = sg.ODESystem(1, lambda t, y: y * y, "quadratic")
        traj = sg.integrate(sys1, [1.0], (0.0, 2.0))
        assert traj.status.kind in (sg.BLOWUP, sg.STEP_UNDERFLOW)
        assert abs(traj.status.time - 1.0) <= 1e-3

    def test_rotation_norm_conserved(self):
        rot = sg.ODESystem(2, lambda t, y: np.array([-y[1], y[0]]), "rotation")
        traj = sg.integrate(rot, [1.0, 0.0], (0.0, 100.0))
        norms = np.linalg.norm(traj.states, axis=1)
        assert np.abs(norms - 1.0).max() <= 1e-8
        # closed form (cos t, sin t)
        assert np.abs(traj.states[:, 0] - np.cos(traj.times)).max() <= 1e-6

    def test_rk4_fixed_step(self):
        rot = sg.ODESystem(2, lambda t, y: np.array([-y[1], y[0]]), "rotation")
        cfg = sg.IntegratorConfig(method="rk4", initial_step=1e-3)
        traj = sg.integrate(rot, [1.0, 0.0], (0.0, 1.0), cfg)
        assert traj.status.kind == sg.COMPLETED
        assert traj.states[-1][0] == pytest.approx(math.cos(1.0), abs=1e-9)

    def test_times_strictly_increasing(self):
        rot = sg.ODESystem(2, lambda t, y: np.array([-y[1], y[0]]), "rotation")
        traj = sg.integrate(rot, [1.0, 0.0], (0.0, 5.0))
        assert np.all(np.diff(traj.times) > 0)

    def test_bad_span_and_bad_state(self):
        sys0 = sg.ODESystem(1, lambda t, y: y, "exp")
        with pytest.raises(DomainError):
            sg.integrate(sys0, [1.0], (1.0, 0.0))
        with pytest.raises(DomainError):
            sg.integrate(sys0, [1.0, 2.0], (0.0, 1.0))

    def test_initial_domain_error_propagates(self):
        chart = sg.hyperbolic(2)
        system = sg.geodesic_rhs(chart)
        with pytest.raises(RhsDomainError):
            sg.integrate(system, [0.0, -1.0, 0.0, 1.0], (0.0, 1.0))


class TestGeodesicRhs:
    def test_flat_straight_line(self):
        chart = sg.euclidean(2)
        traj = sg.integrate(sg.geodesic_rhs(chart), [0.0, 0.0, 0.3, -0.4], (0.0, 2.0))
        assert np.allclose(traj.final_state[:2], [0.6, -0.8], atol=1e-10)

    def test_sphere_equator_period(self):
        # The equator |x| = 1 is a unit-speed great circle: position
        # (cos t, sin t), period 2 pi.
        chart = sg.sphere(2)
        traj = sg.integrate(sg.geodesic_rhs(chart), [1.0, 0.0, 0.0, 1.0], (0.0, 2 * math.pi))
        assert np.abs(traj.final_state - np.array([1.0, 0.0, 0.0, 1.0])).max() <= 1e-4
        mid = traj.states[np.searchsorted(traj.times, math.pi / 3)]
        assert mid[0] == pytest.approx(math.cos(traj.times[np.searchsorted(traj.times, math.pi / 3)]), abs=1e-5)

    def test_hyperbolic_vertical_exponential(self):
        chart = sg.hyperbolic(2)
        traj = sg.integrate(sg.geodesic_rhs(chart), [0.0, 1.0, 0.0, 1.0], (0.0, 1.0))
        assert traj.final_state[1] == pytest.approx(math.e, abs=1e-5)
        assert abs(traj.final_state[0]) <= 1e-10

    @pytest.mark.parametrize("builder", [sg.sphere, sg.hyperbolic])
    def test_energy_conservation(self, builder):
        chart = builder(2)
        rng = np.random.default_rng(3)
        lo, hi = chart.sample_box
        y0 = np.concatenate([rng.uniform(lo, hi), rng.standard_normal(2)])
        traj = sg.integrate(sg.geodesic_rhs(chart), y0, (0.0, 1.0))
        e0 = sg.velocity_norm_sq(chart, traj.states[0])
        drift = max(abs(sg.velocity_norm_sq(chart, s) - e0) for s in traj.states)
        assert drift <= 1e-6


class TestWarpedGeodesics:
    def test_plain_product_decouples(self):
        spec = sg.plain_product(sg.hyperbolic(2), sg.flat_torus(2))
        system = sg.warped_geodesic_rhs(spec)
        y0 = np.array([0.0, 1.0, 0.2, 0.0, 0.0, 1.0, 0.7, 0.0])
        traj = sg.integrate(system, y0, (0.0, 1.0))
        # base: vertical hyperbolic geodesic y = e^t; fiber: straight line
        assert traj.final_state[1] == pytest.approx(math.e, abs=1e-5)
        assert traj.final_state[2] == pytest.approx(0.2 + 0.7, abs=1e-10)

    def test_matches_assembled_chart(self):
        spec = sg.incompleteness_space(2, 2, 1.0)
        direct = sg.warped_geodesic_rhs(spec)
        assembled = sg.geodesic_rhs(sg.assemble(spec))
        y0 = np.array([0.1, 1.2, 0.3, 0.4, 0.2, 0.5, 0.6, -0.1])
        ta = sg.integrate(direct, y0, (0.0, 1.0))
        tb = sg.integrate(assembled, y0, (0.0, 1.0))
        assert np.abs(ta.final_state - tb.final_state).max() <= 1e-5

    @pytest.mark.parametrize("causal,target", [("lightlike", 0.0), ("timelike", -1.0)])
    def test_causal_norm_conserved(self, causal, target):
        spec = sg.incompleteness_space(2, 2, 1.0)
        chart = sg.assemble(spec)
        system = sg.warped_geodesic_rhs(spec)
        if causal == "lightlike":
            y0 = np.array([0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0])
        else:
            s0 = 3.0
            y0 = np.array([0.0, 1.0, 0.0, 0.0, 0.0, -s0, math.sqrt(s0 * s0 - 1.0), 0.0])
        traj = sg.integrate(system, y0, (0.0, 0.25))
        for state in traj.states[:: max(1, len(traj.states) // 10)]:
            assert sg.velocity_norm_sq(chart, state) == pytest.approx(target, abs=1e-6)

    def test_twisted_rejected(self):
        warp = sg.Warping(value=lambda b, f: 0.1 * math.sin(f[0]), description="twist")
        spec = sg.twisted_product(sg.hyperbolic(2), sg.flat_torus(2), warp)
        with pytest.raises(DomainError):
            sg.warped_geodesic_rhs(spec)


class TestClosedFormS:
    def test_lightlike_values(self):
        assert sg.lightlike_s(0.0, 1.0, 1.0, 0.0) == 0.0
        # s -> infinity approaching t = -1 from above
        assert sg.lightlike_s(-1.0 + 1e-9, 1.0, 1.0, 0.0) > 20.0
        assert sg.lightlike_singular_time(1.0, 1.0) == -1.0

    def test_timelike_values(self):
        # k = 1, C1 = 1/2: singular time log(2)/2, s'(0) = 3
        tstar = sg.timelike_singular_time(1.0, 0.5)
        assert tstar == pytest.approx(0.5 * math.log(2.0))
        h = 1e-6
        sp0 = (sg.timelike_s(h, 1.0, 0.5, 0.0) - sg.timelike_s(-h, 1.0, 0.5, 0.0)) / (2 * h)
        assert sp0 == pytest.approx(3.0, abs=1e-6)

    def test_singularity_errors(self):
        with pytest.raises(DomainError):
            sg.lightlike_s(-1.0, 1.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            sg.timelike_s(0.0, 1.0, 1.0, 0.0)  # C1 e^0 = 1
        with pytest.raises(DomainError):
            sg.timelike_s(0.0, 1.0, -0.5, 0.0)

    @pytest.mark.parametrize("kind", ["lightlike", "timelike"])
    @pytest.mark.parametrize("k", [0.25, 1.0, 4.0])
    def test_ode_residuals(self, kind, k):
        c1 = 1.0 if kind == "lightlike" else 0.5
        rng = np.random.default_rng(0)
        count = 0
        while count < 30:
            t = rng.uniform(-2.0, 2.0)
            # keep the log argument comfortably away from the singularity
            w = math.sqrt(k) * t + c1 if kind == "lightlike" else c1 * math.exp(2 * math.sqrt(k) * t) - 1
            if not 0.3 <= abs(w) <= 5.0:
                continue
            count += 1
            assert sg.s_ode_residual(kind, t, k, c1, 0.0) <= 1e-6


class TestIncompleteness:
    def test_demo_k_one(self):
        rep = sg.incompleteness_demo(2, 2, 1.0)
        assert rep.lightlike.status_kind in (sg.BLOWUP, sg.STEP_UNDERFLOW)
        assert rep.lightlike.relative_error <= 1e-2
        assert rep.lightlike.predicted_breakdown == -1.0
        assert rep.timelike.relative_error <= 1e-2
        assert rep.timelike.predicted_breakdown == pytest.approx(0.5 * math.log(2.0))
        assert rep.control_lightlike_status == sg.COMPLETED
        assert rep.control_timelike_status == sg.COMPLETED

    def test_lightlike_base_tracks_closed_form(self):
        # gamma_B(t) = gamma_0(s(t)): the base height follows
        # x_l(tau) = x_l(0) * (1 - tau) for k = 1, C1 = 1 (reversed time).
        spec = sg.incompleteness_space(2, 2, 1.0)
        run = sg.breakdown_run(spec, "lightlike", 1.0, 1.0)
        traj = run.trajectory
        keep = traj.times <= 0.9
        heights = traj.states[keep, 1]
        assert np.abs(heights - (1.0 - traj.times[keep])).max() <= 1e-3

    def test_timelike_validates_c1(self):
        spec = sg.incompleteness_space(2, 2, 1.0)
        with pytest.raises(DomainError):
            sg.breakdown_run(spec, "timelike", 1.0, 1.5)

    def test_demo_rejects_low_dims(self):
        with pytest.raises(DomainError):
            sg.incompleteness_demo(1, 2, 1.0)


class TestParallelTransport:
    def test_flat_chart_constant(self):
        chart = sg.euclidean(2)
        traj = sg.integrate(sg.geodesic_rhs(chart), [0.0, 0.0, 1.0, 0.5], (0.0, 2.0))
        out = sg.parallel_transport(chart, traj, [0.3, -0.7])
        assert np.abs(out.states - np.array([0.3, -0.7])).max() <= 1e-10

    def test_sphere_latitude_holonomy(self):
        # Transport around the latitude with cos(theta) = 0.6 (stereographic
        # radius tan(theta/2) = 0.5) rotates by 2 pi (1 - cos theta).
        chart = sg.sphere(2)
        r0 = 0.5
        phis = np.linspace(0.0, 2 * math.pi, 4001)
        pos = np.stack([r0 * np.cos(phis), r0 * np.sin(phis)], axis=1)
        vel = np.stack([-r0 * np.sin(phis), r0 * np.cos(phis)], axis=1)
        curve = sg.make_curve(phis, pos, vel)
        out = sg.parallel_transport(chart, curve, [1.0, 0.0])
        g = chart.metric_at(np.array([r0, 0.0]))
        v0 = np.array([1.0, 0.0])
        v1 = out.final_state
        cosang = float(v0 @ g @ v1) / math.sqrt(float(v0 @ g @ v0) * float(v1 @ g @ v1))
        angle = math.acos(max(-1.0, min(1.0, cosang)))
        assert angle == pytest.approx(2 * math.pi * (1 - 0.6), abs=1e-4)
        # transport preserves the metric norm
        assert float(v1 @ g @ v1) == pytest.approx(float(v0 @ g @ v0), abs=1e-6)

    def test_product_verticality_preserved(self):
        # Parallel fields along horizontal curves stay vertical: the base
        # block of V(t) remains at zero.
        spec = sg.plain_product(sg.hyperbolic(2), sg.flat_torus(2))
        chart = sg.assemble(spec)
        y0 = np.array([0.0, 1.0, 0.5, 0.5, 0.3, 0.4, 0.0, 0.0])  # horizontal velocity
        geod = sg.integrate(sg.geodesic_rhs(chart), y0, (0.0, 2.0))
        out = sg.parallel_transport(chart, geod, [0.0, 0.0, 1.0, -0.5])
        assert np.abs(out.states[:, :2]).max() <= 1e-6

    def test_warped_verticality_preserved(self):
        spec = sg.incompleteness_space(2, 2, 1.0)
        chart = sg.assemble(spec)
        y0 = np.array([0.0, 1.0, 0.5, 0.5, 0.3, 0.4, 0.0, 0.0])
        geod = sg.integrate(sg.geodesic_rhs(chart), y0, (0.0, 1.0))
        out = sg.parallel_transport(chart, geod, [0.0, 0.0, 1.0, -0.5])
        assert np.abs(out.states[:, :2]).max() <= 1e-6


class TestHorizontality:
    def test_plain_product_exact(self):
        spec = sg.plain_product(sg.hyperbolic(2), sg.flat_torus(2))
        chart = sg.assemble(spec)
        y0 = np.array([0.0, 1.0, 0.5, 0.5, 0.3, 0.4, 0.0, 0.0])
        traj = sg.integrate(sg.geodesic_rhs(chart), y0, (0.0, 2.0))
        assert sg.horizontality_check(spec, traj) <= 1e-10

    def test_warped_small(self):
        spec = sg.incompleteness_space(2, 2, 1.0)
        chart = sg.assemble(spec)
        y0 = np.array([0.0, 1.0, 0.5, 0.5, 0.3, 0.4, 0.0, 0.0])
        traj = sg.integrate(sg.geodesic_rhs(chart), y0, (0.0, 1.0))
        assert sg.horizontality_check(spec, traj) <= 1e-6

    def test_negative_control(self):
        spec = sg.incompleteness_space(2, 2, 1.0)
        chart = sg.assemble(spec)
        y0 = np.array([0.0, 1.0, 0.5, 0.5, 0.3, 0.4, 0.5, 0.0])  # vertical component
        traj = sg.integrate(sg.geodesic_rhs(chart), y0, (0.0, 1.0))
        assert sg.horizontality_check(spec, traj) > 0.1


class TestRiccati:
    def test_tanh_oracle(self):
        rep = sg.riccati_experiment(1.0, [0.0], 50.0)
        run = rep.runs[0]
        assert run.bounded and run.sup_abs_forward < 1.0
        # compare against h(t) = tanh(t) directly
        sys_f = sg.ODESystem(1, lambda t, y: np.array([1.0 - y[0] ** 2]), "riccati")
        traj = sg.integrate(sys_f, [0.0], (0.0, 10.0))
        assert np.abs(traj.states[:, 0] - np.tanh(traj.times)).max() <= 1e-8

    def test_equilibrium(self):
        rep = sg.riccati_experiment(1.0, [1.0, -1.0], 50.0)
        for run in rep.runs:
            assert run.bounded
            assert run.sup_abs_forward == pytest.approx(1.0, abs=1e-9)

    def test_outside_bound_blows_up(self):
        rep = sg.riccati_experiment(1.0, [-1.5, 1.5], 50.0)
        r_minus, r_plus = rep.runs
        assert r_minus.forward_status == sg.BLOWUP
        assert r_plus.backward_status == sg.BLOWUP
        assert rep.all_expectations_met

    def test_interval_bound_sweep(self):
        # k = 2: the float endpoints +-sqrt(2) square to just above k, so
        # they sit dynamically outside the invariant interval; the report
        # classifies by h0^2 <= k and expects their one-sided blow-up.
        k = 2.0
        h0s = np.linspace(-math.sqrt(k), math.sqrt(k), 7)
        rep = sg.riccati_experiment(k, h0s, 50.0)
        assert rep.all_expectations_met
        for run in rep.runs:
            if run.h0 * run.h0 <= k:
                assert run.bounded
                assert max(run.sup_abs_forward, run.sup_abs_backward) <= math.sqrt(k) + 1e-6


class TestReducedFlowIntegration:
    def test_rotation_closed_form(self):
        params = sg.ModelParams(F("-0.8"), F("0.1"))
        traj, rep = sg.euler_arnold_integrate(
            sg.basis_element("e2"), sg.basis_element("f1"), params, 50.0
        )
        assert rep.status_kind == sg.COMPLETED
        assert rep.closed_form_max_dev <= 1e-6
        # explicit rotation: Gamma_2(u) = cos(tu) f1 + sin(tu) f3
        t = -0.8
        dev_f1 = np.abs(traj.states[:, 4] - np.cos(t * traj.times)).max()
        dev_f3 = np.abs(traj.states[:, 6] - np.sin(t * traj.times)).max()
        assert max(dev_f1, dev_f3) <= 1e-6

    def test_gamma1_and_bnorm_drift(self):
        params = sg.ModelParams(F("-0.8"), F("0.1"))
        _, rep = sg.euler_arnold_integrate(
            sg.basis_element("e2") + sg.basis_element("e3").scale(F(1, 2)),
            sg.basis_element("f1") + sg.basis_element("f4"),
            params,
            100.0,
        )
        assert rep.gamma1_drift <= 1e-8
        assert rep.bnorm_drift <= 1e-6

    def test_constant_when_either_part_vanishes(self):
        params = sg.ModelParams(F("-0.8"), F("0.1"))
        traj, _ = sg.euler_arnold_integrate(sg.zero_element(), sg.basis_element("f1"), params, 10.0)
        assert np.abs(traj.states - traj.states[0]).max() <= 1e-12
        traj, _ = sg.euler_arnold_integrate(sg.basis_element("e2"), sg.zero_element(), params, 10.0)
        assert np.abs(traj.states - traj.states[0]).max() <= 1e-12

    def test_block_validation(self):
        params = sg.ModelParams(F("-0.8"), F("0.1"))
        with pytest.raises(NonTangentError):
            sg.euler_arnold_integrate(sg.basis_element("f1"), sg.basis_element("f2"), params, 1.0)
