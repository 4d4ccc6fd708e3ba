"""Godunov engines: fluxes, CFL, stepping, ledgers and schemes."""

import math

import numpy as np
import pytest

from arflux.errors import DegenerateSpeeds, NonphysicalCell
from arflux.fvm import (
    ConservationLedger,
    Flux2,
    SchemeKind,
    SimGrid,
    SimState,
    cfl_dt,
    constrained_flux_rs1,
    decode_velocity,
    godunov_flux,
    interface_flux_arrays,
    riemann_initial_condition,
    run,
    step_classical,
    step_rs1,
    step_rs2_freeze,
    step_rs2_ghost,
)
from arflux.model import PressureLaw, StatePV, StateRY, flux, to_conserved, w_of
from arflux.riemann import sample, solve_classical

P1 = PressureLaw(1.0)


def uniform_state(grid, s, p):
    return riemann_initial_condition(grid, s, s, p)


class TestSimGrid:
    def test_interface_at_zero(self):
        grid = SimGrid(dx=0.1, n_left=3, n_right=2)
        assert grid.n_cells == 5
        assert grid.interfaces()[grid.interface_index] == pytest.approx(0.0)
        assert grid.centers()[0] == pytest.approx(-0.25)

    def test_from_domain(self):
        grid = SimGrid.from_domain(-1.0, 1.0, 0.002)
        assert grid.n_left == grid.n_right == 500
        with pytest.raises(ValueError):
            SimGrid.from_domain(-1.0, 1.0, 0.003)

    def test_validation(self):
        with pytest.raises(ValueError):
            SimGrid(dx=-0.1, n_left=1, n_right=1)
        with pytest.raises(ValueError):
            SimGrid(dx=0.1, n_left=0, n_right=1)


class TestGodunovFlux:
    def test_equal_states(self):
        u = to_conserved(StatePV(1.5, 3.0), P1)
        assert godunov_flux(u, u, P1) == pytest.approx(Flux2(4.5, 20.25))

    def test_transonic_rarefaction(self):
        f = godunov_flux(StateRY(4.0, 18.0), StateRY(1.5, 6.75), P1)
        assert f == (pytest.approx(5.0625), pytest.approx(22.78125))

    def test_reversed_shock(self):
        # rho_m = 4, shock speed -1 < 0, contact speed 0.5 > 0
        f = godunov_flux(StateRY(1.5, 6.75), StateRY(4.0, 18.0), P1)
        assert f == (pytest.approx(2.0), pytest.approx(9.0))

    @pytest.mark.parametrize("gamma", [1.0, 2.0])
    def test_vectorized_matches_scalar(self, gamma):
        p = PressureLaw(gamma)
        rng = np.random.default_rng(17)
        rho_l = rng.uniform(0.1, 5, 400)
        v_l = rng.uniform(0.1, 5, 400)
        rho_r = rng.uniform(0.1, 5, 400)
        v_r = rng.uniform(0.0, 5, 400)
        keep = v_l + p(rho_l) > v_r + 1e-6
        rho_l, v_l, rho_r, v_r = (a[keep] for a in (rho_l, v_l, rho_r, v_r))
        f1, f2 = interface_flux_arrays(rho_l, v_l, rho_r, v_r, p)
        for i in range(len(rho_l)):
            ref = godunov_flux(to_conserved(StatePV(rho_l[i], v_l[i]), p),
                               to_conserved(StatePV(rho_r[i], v_r[i]), p), p)
            assert f1[i] == pytest.approx(ref.f1, abs=1e-10)
            assert f2[i] == pytest.approx(ref.f2, abs=1e-10)


class TestConstrainedFluxRS1:
    def test_examples(self):
        assert constrained_flux_rs1(Flux2(4.5, 20.25), 3.0) == \
            (pytest.approx(3.0), pytest.approx(13.5))
        assert constrained_flux_rs1(Flux2(2.0, 9.0), 3.0) == Flux2(2.0, 9.0)
        assert constrained_flux_rs1(Flux2(0.0, 0.0), 3.0) == Flux2(0.0, 0.0)

    def test_cap_preserves_w(self):
        f = constrained_flux_rs1(Flux2(4.5, 20.25), 3.0)
        assert f.f2 / f.f1 == pytest.approx(20.25 / 4.5)


class TestCFL:
    def test_examples(self):
        grid = SimGrid.from_domain(-1.0, 1.0, 0.002)
        state = uniform_state(grid, StatePV(1.5, 3.0), P1)
        assert cfl_dt(state, grid, P1) == pytest.approx(1.0 / 3000.0)
        state = uniform_state(grid, StatePV(4.0, 0.5), P1)
        assert cfl_dt(state, grid, P1) == pytest.approx(0.001 / 3.5)

    def test_mixed_takes_global_max(self):
        grid = SimGrid.from_domain(-1.0, 1.0, 0.002)
        state = riemann_initial_condition(grid, StatePV(4.0, 0.5),
                                          StatePV(1.5, 3.0), P1)
        assert cfl_dt(state, grid, P1) == pytest.approx(0.001 / 3.5)

    def test_degenerate(self):
        # cells at rest just above the vacuum cutoff with gamma = 2:
        # the only speed is rho*p'(rho) = 2*rho**2 ~ 8e-20
        grid = SimGrid(0.1, 2, 2)
        rho = 2e-10
        state = SimState(0.0, 0, np.full(4, rho), np.full(4, rho ** 3))
        with pytest.raises(DegenerateSpeeds):
            cfl_dt(state, grid, PressureLaw(2.0))


class TestStepClassical:
    def test_uniform_state_unchanged(self):
        grid = SimGrid(0.1, 5, 5)
        state = uniform_state(grid, StatePV(1.5, 3.0), P1)
        new, rec = step_classical(state, grid, P1, dt=0.01)
        assert np.allclose(new.rho, state.rho, atol=1e-14)
        assert np.allclose(new.y, state.y, atol=1e-14)
        assert rec.y_defect_step == 0.0

    def test_single_step_update_formula(self):
        grid = SimGrid(0.1, 5, 5)
        l, r = StatePV(1.5, 3.0), StatePV(2.0, 1.0)
        state = riemann_initial_condition(grid, l, r, P1)
        dt = cfl_dt(state, grid, P1)
        new, _ = step_classical(state, grid, P1, dt)
        f_star = godunov_flux(to_conserved(l, P1), to_conserved(r, P1), P1)
        fl, fr = flux(l, P1), flux(r, P1)
        c = dt / grid.dx
        k = grid.interface_index
        # only the two cells adjacent to x=0 change, by the flux difference
        assert np.allclose(new.rho[:k - 1], l.rho) and np.allclose(new.rho[k + 1:], r.rho)
        assert new.rho[k - 1] == pytest.approx(l.rho - c * (f_star.f1 - fl.f1))
        assert new.rho[k] == pytest.approx(r.rho - c * (fr.f1 - f_star.f1))
        assert new.y[k - 1] == pytest.approx(l.rho * w_of(l, P1) - c * (f_star.f2 - fl.f2))
        assert new.y[k] == pytest.approx(r.rho * w_of(r, P1) - c * (fr.f2 - f_star.f2))

    def test_totals_change_by_boundary_fluxes(self):
        grid = SimGrid(0.05, 10, 10)
        state = riemann_initial_condition(grid, StatePV(1.5, 3.0),
                                          StatePV(2.0, 1.0), P1)
        dt = cfl_dt(state, grid, P1)
        new, rec = step_classical(state, grid, P1, dt)
        d_rho = (new.rho.sum() - state.rho.sum()) * grid.dx
        d_y = (new.y.sum() - state.y.sum()) * grid.dx
        assert d_rho == pytest.approx(dt * (rec.f_bd_left[0] - rec.f_bd_right[0]), abs=1e-13)
        assert d_y == pytest.approx(dt * (rec.f_bd_left[1] - rec.f_bd_right[1]), abs=1e-13)


class TestStepRS1:
    def test_first_step_conserves(self):
        grid = SimGrid.from_domain(-1.0, 1.0, 0.002)
        state = uniform_state(grid, StatePV(1.5, 3.0), P1)
        dt = cfl_dt(state, grid, P1)
        new, rec = step_rs1(state, grid, 3.0, P1, dt)
        k = grid.interface_index
        # both adjacent cells changed (the interface flux was capped)
        assert new.rho[k - 1] != pytest.approx(1.5)
        assert new.rho[k] != pytest.approx(1.5)
        # interior conservation: boundary fluxes balance at a uniform state
        assert new.rho.sum() == pytest.approx(state.rho.sum(), rel=1e-12)
        assert new.y.sum() == pytest.approx(state.y.sum(), rel=1e-12)

    def test_large_q_equals_classical(self):
        grid = SimGrid(0.05, 10, 10)
        state = riemann_initial_condition(grid, StatePV(1.5, 3.0),
                                          StatePV(2.0, 1.0), P1)
        dt = cfl_dt(state, grid, P1)
        a, _ = step_rs1(state, grid, 1e6, P1, dt)
        b, _ = step_classical(state, grid, P1, dt)
        assert np.array_equal(a.rho, b.rho) and np.array_equal(a.y, b.y)


class TestStepRS2:
    def test_ghost_one_active_step(self):
        grid = SimGrid(0.1, 5, 5)
        state = uniform_state(grid, StatePV(1.5, 3.0), P1)
        dt = cfl_dt(state, grid, P1)
        new, rec = step_rs2_ghost(state, grid, 3.0, P1, dt)
        # f2_plus = q*(v_1 + p(q/v_1)) = 3*(3 + 1) = 12, f2_minus = q*w = 13.5
        assert rec.y_defect_step == pytest.approx(dt * (13.5 - 12.0))
        k = grid.interface_index
        c = dt / grid.dx
        assert new.y[k] == pytest.approx(state.y[k] - c * (20.25 - 12.0))
        # rho is conserved across the interface: capped flux on both sides
        assert new.rho.sum() == pytest.approx(state.rho.sum(), rel=1e-12)

    def test_ghost_inactive_is_classical(self):
        grid = SimGrid(0.05, 10, 10)
        state = riemann_initial_condition(grid, StatePV(1.5, 3.0),
                                          StatePV(2.0, 1.0), P1)
        dt = cfl_dt(state, grid, P1)
        a, _ = step_rs2_ghost(state, grid, 1e6, P1, dt)
        b, _ = step_classical(state, grid, P1, dt)
        assert np.array_equal(a.rho, b.rho) and np.array_equal(a.y, b.y)

    def test_freeze_one_active_step(self):
        grid = SimGrid(0.1, 5, 5)
        state = uniform_state(grid, StatePV(1.5, 3.0), P1)
        dt = cfl_dt(state, grid, P1)
        new, rec = step_rs2_freeze(state, grid, 3.0, P1, dt)
        k = grid.interface_index
        # frozen velocity: v_1 stays exactly 3
        v = decode_velocity(new, P1)
        assert v[k] == pytest.approx(3.0, abs=1e-13)
        # rho conserved, positive y-defect recorded
        assert new.rho.sum() == pytest.approx(state.rho.sum(), rel=1e-12)
        assert rec.y_defect_step > 0.0

    def test_freeze_inactive_is_classical(self):
        grid = SimGrid(0.05, 10, 10)
        state = riemann_initial_condition(grid, StatePV(1.5, 3.0),
                                          StatePV(2.0, 1.0), P1)
        dt = cfl_dt(state, grid, P1)
        a, _ = step_rs2_freeze(state, grid, 1e6, P1, dt)
        b, _ = step_classical(state, grid, P1, dt)
        assert np.array_equal(a.rho, b.rho) and np.array_equal(a.y, b.y)


class TestRun:
    def test_t_final_zero_is_initial_projection(self):
        grid = SimGrid(0.1, 5, 5)
        res = run(StatePV(1.5, 3.0), StatePV(1.5, 3.0), grid, 3.0, P1,
                  SchemeKind.RS1, t_final=0.0)
        assert res.final.n == 0
        assert np.allclose(res.final.rho, 1.5)

    def test_ledgers_close(self):
        grid = SimGrid.from_domain(-0.5, 0.5, 0.01)
        for scheme in SchemeKind:
            res = run(StatePV(1.5, 3.0), StatePV(1.5, 3.0), grid, 3.0, P1,
                      scheme, t_final=0.05)
            assert np.abs(res.ledger.rho_closure_residuals()).max() <= 1e-11
            assert np.abs(res.ledger.y_closure_residuals()).max() <= 1e-11

    def test_rs1_max_principle(self):
        grid = SimGrid.from_domain(-0.5, 0.5, 0.01)
        res = run(StatePV(4.0, 0.5), StatePV(1.5, 3.0), grid, 3.0, P1,
                  SchemeKind.RS1, t_final=0.1)
        assert res.max_principle.overshoot <= 1e-11
        assert res.max_principle.undershoot <= 1e-11

    def test_snapshot_times_hit_exactly(self):
        grid = SimGrid.from_domain(-0.5, 0.5, 0.01)
        res = run(StatePV(1.5, 3.0), StatePV(1.5, 3.0), grid, 3.0, P1,
                  SchemeKind.RS1, t_final=0.1, snapshot_times=[0.03, 0.07])
        assert [t for t, _ in res.snapshots] == pytest.approx([0.03, 0.07, 0.1])

    def test_off_invariant_data_warns(self):
        grid = SimGrid(0.1, 5, 5)
        with pytest.warns(UserWarning):
            run(StatePV(1.5, 3.0), StatePV(2.0, 1.0), grid, 3.0, P1,
                SchemeKind.RS1, t_final=0.02)

    def test_rs2_activation_below_reading_differs(self):
        # the literal "below" reading never fires on Test-1a-like data
        grid = SimGrid.from_domain(-0.5, 0.5, 0.01)
        res_e = run(StatePV(1.5, 3.0), StatePV(1.5, 3.0), grid, 3.0, P1,
                    SchemeKind.RS2_FREEZE, t_final=0.05)
        res_b = run(StatePV(1.5, 3.0), StatePV(1.5, 3.0), grid, 3.0, P1,
                    SchemeKind.RS2_FREEZE, t_final=0.05, rs2_activation="below")
        assert res_e.ledger.y_defect_cum[-1] > 0.0
        assert not np.array_equal(res_e.final.rho, res_b.final.rho)

    def test_convergence_to_rs1_fan(self):
        from arflux.fvm import l1_error_rho
        from arflux.riemann import solve_rs1
        l = r = StatePV(1.5, 3.0)
        fan = solve_rs1(l, r, 3.0, P1)
        errors = []
        for dx in (0.02, 0.01):
            grid = SimGrid.from_domain(-1.0, 1.0, dx)
            res = run(l, r, grid, 3.0, P1, SchemeKind.RS1, t_final=0.2)
            errors.append(l1_error_rho(res, fan, grid, 0.2, P1))
        assert errors[1] < errors[0]
