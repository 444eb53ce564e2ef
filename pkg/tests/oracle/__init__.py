import pytest

from dataclasses import replace

from killingbeck.model import (
    Channel,
    InvalidInput,
    PhysicalParams,
    PotentialParams,
    canonical_coefficients,
    energy_quantities,
)
from killingbeck.oracle import (
    IntegrationError,
    NotFound,
    ShootResult,
    ShootingConfig,
    SturmViolation,
    UnsupportedRegime,
    _check_sturm,
    effective_rhs,
    shoot,
    solve_numeric,
    verify,
    verify_energy,
)
from killingbeck.series import coefficients, termination_check
from killingbeck.solver import ansatz_params
from .._util import PHYS, expected_nodes, terminating


class TestEffectiveRhs:
    def test_free_equation(self):
        pot = PotentialParams(a=0.0)
        phys = PhysicalParams(5.0)
        rhs = effective_rhs(2.0, 1.0, pot, phys, Channel(-2))
        assert rhs == pytest.approx(6 / 4 + 24.0)

    def test_potential_drops_at_pspin_point(self):
        pot = PotentialParams(a=0.04, b=0.01, c=1.0)
        rhs = effective_rhs(1.5, -0.5, pot, PHYS, Channel(-1))
        assert rhs == pytest.approx(2 / 1.5 ** 2)

    def test_published_example(self):
        pot = PotentialParams(a=0.01, b=0.0033293, c=1.0)
        energy = -0.4955
        q = energy_quantities(energy, PHYS)
        expected = 2 + q.gamma_tilde * (0.01 + 0.0033293 - 1) + q.beta_tilde_sq
        assert q.gamma_tilde == pytest.approx(0.0045)
        rhs = effective_rhs(1.0, energy, pot, PHYS, Channel(-1))
        assert rhs == pytest.approx(expected, rel=1e-14)

    def test_matches_canonical_coefficients(self):
        pot = PotentialParams(a=0.01, b=0.0033293, c=1.0)
        c = canonical_coefficients(pot, PHYS, Channel(-1), -0.4955)
        r = 2.5
        expected = -(c.A1 / r ** 2 + c.A2 / r - c.A3 - c.A4 * r - c.A5 * r ** 2)
        rhs = effective_rhs(r, -0.4955, pot, PHYS, Channel(-1))
        assert rhs == pytest.approx(expected, rel=1e-12)


class TestConfig:
    @pytest.mark.parametrize('kwargs', [
        {'r_min': 0.0},
        {'r_min': 1.0, 'r_match': 0.5},
        {'r_match': 2.0, 'r_max': 1.0},
        {'steps': 999},
        {'e_bracket': (1.0, 0.5)},
        {'tol_E': 0.0},
        {'scan_points': 1},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInput):
            ShootingConfig(**kwargs)

    def test_bracket_required(self):
        sol = terminating()
        nodes = expected_nodes(sol)
        with pytest.raises(InvalidInput):
            solve_numeric(sol.potential, PHYS, sol.channel, nodes, ShootingConfig())


class TestShoot:
    def test_unsupported_without_tail(self):
        pot = PotentialParams(a=0.0, c=1.0)
        with pytest.raises(UnsupportedRegime):
            shoot(6.0, pot, PhysicalParams(5.0), Channel(1))

    def test_unsupported_below_threshold(self):
        sol = terminating()
        with pytest.raises(UnsupportedRegime):
            shoot(-0.6, sol.potential, PHYS, sol.channel)

    def test_eigenvalue_matches(self):
        sol = terminating()
        x = sol.gamma_tilde
        cfg = ShootingConfig(e_bracket=(-0.5 + x / 4, -0.5 + 4 * x))
        numeric = solve_numeric(sol.potential, PHYS, sol.channel, 0, cfg)
        result = shoot(numeric.energy, sol.potential, PHYS, sol.channel)
        assert numeric.converged
        assert numeric.node_count == result.node_count == 0
        assert abs(result.wronskian) < 1e-6


class TestVerify:
    @pytest.mark.parametrize('kappa', [-2, -1, 1, 2])
    @pytest.mark.parametrize('degree', [0, 1, 2])
    @pytest.mark.parametrize('a', [0.01, 0.1])
    def test_quasi_exact_energy_reproduced(self, kappa, degree, a):
        sol = terminating(kappa, degree, a)
        nodes = expected_nodes(sol)
        report = verify(sol, node_count=nodes)
        assert report.converged
        assert report.node_count == nodes
        assert report.abs_diff < 1e-5

    @pytest.mark.parametrize('kappa', [-2, -1, 1, 2])
    @pytest.mark.parametrize('degree', [0, 1])
    @pytest.mark.parametrize('a', [0.01, 0.1])
    def test_step_halving(self, kappa, degree, a):
        sol = terminating(kappa, degree, a)
        nodes = expected_nodes(sol)
        coarse = verify(sol, node_count=nodes)
        fine = verify(sol, cfg=ShootingConfig(steps=32000), node_count=nodes)
        assert abs(coarse.E_numeric - fine.E_numeric) < 1e-7

    def test_wrong_energy_offset(self):
        sol = terminating()
        nodes = expected_nodes(sol)
        x = sol.gamma_tilde
        cfg = ShootingConfig(e_bracket=(-0.5 + x / 4, -0.5 + 4 * x))
        report = verify_energy(
            sol.energy + 1e-3, sol.potential, PHYS, sol.channel, nodes, cfg
        )
        assert report.abs_diff == pytest.approx(1e-3, abs=2e-5)

    def test_perturbed_strength_breaks_termination(self):
        sol = terminating()
        nodes = expected_nodes(sol)
        pot = replace(sol.potential, b=1.1 * sol.b)
        x = sol.gamma_tilde
        cfg = ShootingConfig(e_bracket=(-0.5 + x / 4, -0.5 + 4 * x))
        report = verify_energy(sol.energy, pot, PHYS, sol.channel, nodes, cfg)
        assert report.E_numeric != pytest.approx(sol.energy, abs=1e-8)

        x_numeric = energy_quantities(report.E_numeric, PHYS).gamma_tilde
        ansatz = ansatz_params(pot, x_numeric, sol.channel)
        canonical = canonical_coefficients(pot, PHYS, sol.channel, report.E_numeric)
        series = coefficients(ansatz, canonical, 6)
        assert not termination_check(series, 0)[0]

    def test_missing_node_count(self):
        sol = terminating()
        x = sol.gamma_tilde
        cfg = ShootingConfig(e_bracket=(-0.5 + x / 4, -0.5 + 4 * x))
        with pytest.raises(NotFound) as info:
            verify_energy(sol.energy, sol.potential, PHYS, sol.channel, 40, cfg)
        assert 'while verifying' in info.value.args[-1]

    def test_default_bracket_needs_positive_gamma(self):
        sol = terminating()
        nodes = expected_nodes(sol)
        with pytest.raises(InvalidInput):
            verify_energy(-0.6, sol.potential, PHYS, sol.channel, nodes)


class TestErrors:
    def test_sturm_violation(self):
        roots = [
            (ShootResult(-0.49, 0.0, 0.0, 2), None),
            (ShootResult(-0.48, 0.0, 0.0, 1), None),
        ]
        with pytest.raises(SturmViolation):
            _check_sturm(roots, PHYS)

    def test_sturm_ignores_unbound_side(self):
        roots = [
            (ShootResult(-0.6, 0.0, 0.0, 3), None),
            (ShootResult(-0.49, 0.0, 0.0, 0), None),
            (ShootResult(-0.48, 0.0, 0.0, 1), None),
        ]
        _check_sturm(roots, PHYS)

    def test_overflow_without_renormalization(self):
        sol = terminating()
        cfg = ShootingConfig(decay_exponent=800.0, renorm_every=10 ** 9)
        with pytest.raises(IntegrationError):
            shoot(sol.energy, sol.potential, PHYS, sol.channel, cfg)

    def test_bracket_below_threshold(self):
        sol = terminating()
        cfg = ShootingConfig(e_bracket=(-0.7, -0.4))
        with pytest.raises(UnsupportedRegime):
            solve_numeric(sol.potential, PHYS, sol.channel, 0, cfg)

    def test_verification_context(self):
        sol = terminating()
        cfg = ShootingConfig(e_bracket=(-0.7, -0.4))
        with pytest.raises(UnsupportedRegime) as info:
            verify_energy(sol.energy, sol.potential, PHYS, sol.channel, 0, cfg)
        assert 'while verifying' in info.value.args[-1]
