import numpy as np
import pytest

from weakcz import fock, imperfections as imp, optical


def haar_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_setup_params(rng):
    return imp.SetupParams(
        R=rng.uniform(0.2, 0.45), R_H=rng.uniform(0.0, 0.06),
        visibility=rng.uniform(0.85, 1.0), phi_x_deg=rng.uniform(1.0, 44.0),
        phi_y_deg=rng.uniform(-44.0, 44.0), phi_a_deg=rng.uniform(0.0, 44.0))


class TestTwoPhotonEvolution:
    def test_hong_ou_mandel_dip(self):
        net = fock.ModeNetwork(("a", "b"),
                               optical.beam_splitter_heisenberg(1 / np.sqrt(2)))
        state = fock.evolve_two_photons(
            net, fock.TwoPhotonState.from_mode_pair(2, 0, 1))
        assert abs(state.amplitude(0, 1)) < 1e-12
        assert abs(state.amplitude(0, 0)) ** 2 == pytest.approx(0.5)
        assert abs(state.amplitude(1, 1)) ** 2 == pytest.approx(0.5)

    def test_identity_network(self):
        net = fock.ModeNetwork(("a", "b", "c"), np.eye(3))
        state = fock.TwoPhotonState.from_mode_pair(3, 0, 2)
        out = fock.evolve_two_photons(net, state)
        assert np.allclose(out.coeff, state.coeff)

    def test_two_thirds_coincidence_amplitude(self):
        t = np.sqrt(1.0 / 3.0)  # R = 2/3
        net = fock.ModeNetwork(("a", "b"), optical.beam_splitter_heisenberg(t))
        state = fock.evolve_two_photons(
            net, fock.TwoPhotonState.from_mode_pair(2, 0, 1))
        assert state.amplitude(0, 1).real == pytest.approx(-1.0 / 3.0)

    def test_norm_conserved_by_random_unitary(self):
        rng = np.random.default_rng(51)
        n = 6
        net = fock.ModeNetwork(tuple(f"m{i}" for i in range(n)),
                               haar_unitary(rng, n))
        coeff = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        coeff = coeff + coeff.T
        state = fock.TwoPhotonState(coeff / np.linalg.norm(coeff))
        n_in = state.norm()
        n_out = fock.evolve_two_photons(net, state).norm()
        assert abs(n_out - n_in) < 1e-12

    def test_exchange_symmetric_input(self):
        rng = np.random.default_rng(52)
        net = fock.ModeNetwork(("a", "b", "c", "d"), haar_unitary(rng, 4))
        out_jk = fock.evolve_two_photons(net, fock.TwoPhotonState.from_mode_pair(4, 1, 3))
        out_kj = fock.evolve_two_photons(net, fock.TwoPhotonState.from_mode_pair(4, 3, 1))
        assert np.allclose(out_jk.coeff, out_kj.coeff)

    def test_dimension_mismatch_rejected(self):
        net = fock.ModeNetwork(("a", "b"), np.eye(2))
        with pytest.raises(ValueError):
            fock.evolve_two_photons(net, fock.TwoPhotonState.from_mode_pair(3, 0, 1))

    def test_bosonic_normalization_of_double_occupancy(self):
        state = fock.TwoPhotonState.from_mode_pair(2, 1, 1)
        assert state.amplitude(1, 1) == pytest.approx(1.0)
        assert state.norm() == pytest.approx(1.0)


class TestDistinguishableEvolution:
    def test_identity_gives_product(self):
        net = fock.ModeNetwork(("a", "b", "c"), np.eye(3))
        joint = fock.distinguishable_evolve(net, 0, 2)
        expected = np.zeros((3, 3))
        expected[0, 2] = 1.0
        assert np.allclose(joint, expected)

    def test_central_splitter_transmission_product(self):
        t = 0.8
        net = fock.ModeNetwork(("a", "b"), optical.beam_splitter_heisenberg(t))
        joint = fock.distinguishable_evolve(net, 0, 1)
        assert joint[0, 1] == pytest.approx(t * t)  # both transmitted

    def test_no_symmetrization(self):
        rng = np.random.default_rng(53)
        net = fock.ModeNetwork(("a", "b", "c"), haar_unitary(rng, 3))
        joint = fock.distinguishable_evolve(net, 0, 1)
        s = net.unitary
        assert np.allclose(joint, np.outer(s[:, 0], s[:, 1]))


class TestModeNetwork:
    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            fock.ModeNetwork(("a", "b"), np.array([[1.0, 0.0], [1.0, 1.0]]))

    def test_staged_parts_compose_to_full_unitary(self):
        rng = np.random.default_rng(54)
        staged = fock.experiment_network(random_setup_params(rng))
        rebuilt = staged.suffix @ (
            staged.central_transmit + staged.central_reflect) @ staged.prefix
        assert np.allclose(rebuilt, staged.network.unitary, atol=1e-12)


class TestPostselection:
    def test_no_bypass_two_thirds_recovers_scaled_cz(self):
        R = 2.0 / 3.0
        t = np.sqrt(1 - R)
        p = optical.OpticalSchemeParams(R=R, t_x=1.0, t_y=1.0, t_a=t, t_b=t)
        staged = fock.bypass_network(p)
        states = [
            fock.evolve_two_photons(
                staged.network,
                fock.TwoPhotonState.from_mode_pair(
                    staged.network.n_modes, *staged.input_modes(k)))
            for k in range(4)
        ]
        m = fock.postselect_coincidence(states, staged.a_rails, staged.b_rails)
        assert np.allclose(m, np.diag([1 / 3, 1 / 3, 1 / 3, -1 / 3]), atol=1e-12)

    def test_cz_condition_solution_diagonal_with_sign_flip(self):
        sol = optical.solve_cz_conditions(0.35, 0.75)
        w = fock.bypass_amplitudes_oracle(sol)
        mags = [abs(x) for x in w]
        assert max(mags) - min(mags) < 1e-12
        assert w[3].real < 0

    def test_requires_four_inputs(self):
        with pytest.raises(ValueError):
            fock.postselect_coincidence([], (0, 1), (2, 3))


class TestOracleEquivalence:
    def test_ideal_amplitudes_match_closed_form(self):
        rng = np.random.default_rng(55)
        for _ in range(10):
            p = optical.OpticalSchemeParams(
                R=rng.uniform(0.05, 0.95), t_x=rng.uniform(0.2, 1.0),
                t_y=rng.uniform(0.2, 1.0), t_a=rng.uniform(0.2, 1.0),
                t_b=rng.uniform(0.2, 1.0))
            w_closed = optical.bypass_amplitudes(p)
            w_oracle = fock.bypass_amplitudes_oracle(p)
            assert max(abs(a - b) for a, b in zip(w_closed, w_oracle)) < 1e-12

    def test_experiment_coefficients_match_model(self):
        rng = np.random.default_rng(56)
        for _ in range(3):
            p = random_setup_params(rng)
            staged = fock.experiment_network(p)
            ci = imp.coefficients_indistinguishable(p)
            mi = fock.conditional_map_interfering(staged)
            assert mi[0, 0] == pytest.approx(ci.beta_00, abs=1e-12)
            assert mi[1, 1] == pytest.approx(ci.beta_01, abs=1e-12)
            assert mi[2, 2] == pytest.approx(ci.beta_10, abs=1e-12)
            assert mi[3, 3] == pytest.approx(ci.beta_11, abs=1e-12)
            assert mi[3, 2] == pytest.approx(ci.gamma_11, abs=1e-12)
            assert mi[2, 3] == pytest.approx(ci.gamma_10, abs=1e-12)

            ct = imp.coefficients_transmitted(p)
            mt = fock.conditional_map_transmitted(staged)
            assert np.allclose(np.diag(mt),
                               [ct.beta_00, ct.beta_01, ct.beta_10, ct.beta_11],
                               atol=1e-12)

            cr = imp.coefficients_reflected(p)
            mr = fock.conditional_map_reflected(staged)
            assert mr[2, 2] == pytest.approx(cr.beta_10, abs=1e-12)
            assert mr[3, 3] == pytest.approx(cr.beta_11, abs=1e-12)
            assert mr[3, 2] == pytest.approx(cr.gamma_11, abs=1e-12)
            assert mr[2, 3] == pytest.approx(cr.gamma_10, abs=1e-12)
            assert np.max(np.abs(mr[:2, :])) == 0.0

    def test_process_matrix_equivalence(self):
        rng = np.random.default_rng(57)
        for _ in range(3):
            p = random_setup_params(rng)
            dev = np.max(np.abs(imp.process_matrix(p) - fock.process_matrix_oracle(p)))
            assert dev < 1e-12
