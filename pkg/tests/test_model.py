"""States, pressure law, fluxes and eigenstructure."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from arflux.model import (
    Flux2,
    PressureLaw,
    StatePV,
    StateRY,
    eigenvalues,
    flux,
    lax1_velocity,
    lax2_velocity,
    riemann_invariants,
    to_conserved,
    to_primitive,
    w_of,
)
from arflux.errors import NegativeVelocity

P1 = PressureLaw(1.0)
P2 = PressureLaw(2.0)


class TestPressureLaw:
    def test_gamma_below_one_rejected(self):
        with pytest.raises(ValueError):
            PressureLaw(0.5)

    def test_power_law_values(self):
        assert P1(2.0) == 2.0
        assert P2(2.0) == 4.0
        assert P1.deriv(7.0) == 1.0
        assert P2.deriv(3.0) == 6.0

    def test_inverse(self):
        for p in (P1, P2, PressureLaw(1.7)):
            for val in (0.3, 1.0, 4.5):
                assert p(p.inverse(val)) == pytest.approx(val, abs=1e-14)

    def test_sonic_density_is_sonic(self):
        # p(rho) + rho p'(rho) = w at the sonic density
        for p in (P1, P2, PressureLaw(1.3)):
            for w in (0.5, 3.0, 4.5):
                rho = p.sonic_density(w)
                assert p(rho) + rho * p.deriv(rho) == pytest.approx(w, abs=1e-12)

    def test_structural_hypotheses(self):
        # p(0)=0, p'>0, rho*p(rho) strictly convex, p -> infinity
        rho = np.linspace(1e-6, 50.0, 100_000)
        for p in (P1, P2, PressureLaw(1.5)):
            assert p(0.0) == 0.0
            assert (p.deriv(rho) > 0).all()
            # (rho*p)'' = 2p' + rho*p'' > 0
            assert (2 * p.deriv(rho) + rho * p.deriv2(rho) > 0).all()
            assert p(1e9) > 1e6


class TestStates:
    def test_vacuum_rejected(self):
        with pytest.raises(ValueError):
            StatePV(0.0, 1.0)
        with pytest.raises(ValueError):
            StateRY(-1.0, 1.0)

    def test_negative_velocity_rejected_but_roundoff_clamped(self):
        with pytest.raises(ValueError):
            StatePV(1.0, -0.1)
        assert StatePV(1.0, -1e-13).v == 0.0

    def test_conversion_examples(self):
        assert to_conserved(StatePV(1.5, 3.0), P1) == StateRY(1.5, 6.75)
        assert to_conserved(StatePV(4.0, 0.5), P1) == StateRY(4.0, 18.0)
        assert to_conserved(StatePV(1.0, 0.0), P1) == StateRY(1.0, 1.0)
        assert to_primitive(StateRY(1.5, 6.75), P1) == StatePV(1.5, 3.0)
        assert to_primitive(StateRY(4.0, 18.0), P1) == StatePV(4.0, 0.5)
        # boundary of admissibility: y = rho*p(rho) decodes to v = 0
        assert to_primitive(StateRY(2.0, 2.0 * P1(2.0)), P1).v == 0.0

    def test_negative_momentum_decoding_raises(self):
        with pytest.raises(NegativeVelocity):
            to_primitive(StateRY(2.0, 1.0), P1)

    @given(rho=st.floats(0.01, 100.0), v=st.floats(0.0, 100.0),
           gamma=st.floats(1.0, 3.0))
    def test_roundtrip(self, rho, v, gamma):
        p = PressureLaw(gamma)
        s = StatePV(rho, v)
        back = to_primitive(to_conserved(s, p), p)
        assert back.rho == rho
        assert back.v == pytest.approx(v, abs=1e-9 * max(1.0, s.rho * (v + p(rho))))


class TestFluxAndEigen:
    def test_flux_examples(self):
        assert flux(StatePV(1.5, 3.0), P1) == Flux2(4.5, 20.25)
        assert flux(StatePV(4.0, 0.5), P1) == Flux2(2.0, 9.0)
        assert flux(StatePV(3.0, 0.0), P1) == Flux2(0.0, 0.0)

    def test_eigenvalue_examples(self):
        assert eigenvalues(StatePV(1.5, 3.0), P1) == (1.5, 3.0)
        assert eigenvalues(StatePV(4.0, 0.5), P1) == (-3.5, 0.5)
        # lambda_1 vanishes when v = rho for gamma = 1
        lam1, _ = eigenvalues(StatePV(2.0, 2.0), P1)
        assert lam1 == 0.0

    def test_hyperbolicity_and_genuine_nonlinearity(self):
        # lambda_1 < lambda_2 away from vacuum and grad(lambda_1).r_1 > 0
        rng = np.random.default_rng(0)
        rho = rng.uniform(1e-3, 50.0, size=100_000)
        v = rng.uniform(0.0, 50.0, size=100_000)
        for p in (P1, P2):
            lam1 = v - rho * p.deriv(rho)
            assert (lam1 < v).all()
            assert (2 * p.deriv(rho) + rho * p.deriv2(rho) > 0).all()

    def test_lax_curves(self):
        s0 = StatePV(1.5, 3.0)
        assert lax1_velocity(1.5, s0, P1) == 3.0
        assert lax1_velocity(4.0, s0, P1) == pytest.approx(0.5)
        hat_rho = (4.5 + np.sqrt(8.25)) / 2
        assert lax1_velocity(hat_rho, s0, P1) == pytest.approx(4.5 - hat_rho)
        for s in (s0, StatePV(4.0, 0.5), StatePV(1.0, 3.0)):
            assert lax2_velocity(2.0, s) == s.v

    def test_riemann_invariants(self):
        assert riemann_invariants(StatePV(1.5, 3.0), P1) == (3.0, 4.5)
        assert riemann_invariants(StatePV(4.0, 0.5), P1) == (0.5, 4.5)
        # w -> v as rho -> 0+
        assert w_of(StatePV(1e-9, 2.0), P1) == pytest.approx(2.0, abs=1e-8)
