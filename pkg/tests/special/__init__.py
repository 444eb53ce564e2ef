import math
import pytest

from killingbeck.model import (
    Channel,
    DomainError,
    InvalidInput,
    PhysicalParams,
    PotentialParams,
)
from killingbeck.solver import energy_residual
from killingbeck.special import (
    OscillatorSpec,
    coulomb_check,
    coulomb_energy,
    limit_consistency,
    oscillator_check,
    oscillator_energy,
)


class TestCoulomb:
    def test_ground_state(self):
        assert coulomb_energy(1.0, 1, 0, 5.0) == pytest.approx(-3.0)

    def test_excited_state(self):
        assert coulomb_energy(1.0, 1, 1, 5.0) == pytest.approx(-75 / 17)
        assert coulomb_energy(1.0, 2, 0, 5.0) == coulomb_energy(1.0, 1, 1, 5.0)

    @pytest.mark.parametrize('c, n, expected', [
        (1.0, 1, -3.0),
        (2.0, 1, 0.0),
        (4.0, 1, 3.0),
        (1.0, 2, -75 / 17),
        (2.0, 2, -3.0),
    ])
    def test_closed_form(self, c, n, expected):
        assert abs(coulomb_energy(c, n, 0, 5.0) - expected) < 1e-12

    def test_zero_crossing(self):
        assert coulomb_energy(2.0, 1, 0, 5.0) == 0.0

    @pytest.mark.parametrize('c', [0.0, 0.5, 3.0, 100.0])
    def test_bound_window(self, c):
        energy = coulomb_energy(c, 1, 0, 5.0)
        assert -5.0 <= energy < 5.0

    def test_levels_decrease_with_principal_number(self):
        energies = [coulomb_energy(1.0, n, 0, 5.0) for n in range(1, 6)]
        assert energies == sorted(energies, reverse=True)

    @pytest.mark.parametrize('args', [
        (-1.0, 1, 0, 5.0),
        (1.0, 0, 0, 5.0),
        (1.0, 1, -1, 5.0),
        (1.0, 1, 0, 0.0),
    ])
    def test_invalid(self, args):
        with pytest.raises(InvalidInput):
            coulomb_energy(*args)

    @pytest.mark.parametrize('c', [0.5, 1.0, 2.0])
    @pytest.mark.parametrize('n', [1, 2, 3])
    @pytest.mark.parametrize('l_tilde', [0, 1])
    def test_shooting_check(self, c, n, l_tilde):
        report = coulomb_check(c, n, l_tilde, 5.0)
        assert report.converged
        assert report.node_count == n - 1
        assert report.abs_diff < 1e-6

    def test_check_needs_coupling(self):
        with pytest.raises(InvalidInput):
            coulomb_check(0.0, 1, 0, 5.0)


class TestOscillator:
    def test_published_level(self):
        energy = oscillator_energy(OscillatorSpec(1.0, 0, 0, 5.0))
        assert energy == pytest.approx(5.2156, abs=1e-4)

    def test_vanishing_frequency(self):
        energy = oscillator_energy(OscillatorSpec(1e-8, 0, 0, 5.0))
        assert energy == pytest.approx(5.0, abs=1e-10)

    @pytest.mark.parametrize('n_r', [0, 1])
    @pytest.mark.parametrize('l_tilde', [0, 1])
    def test_mapped_energy_equation(self, n_r, l_tilde):
        spec = OscillatorSpec(1.0, n_r, l_tilde, 5.0)
        x = oscillator_energy(spec) - spec.mass
        residual = energy_residual(
            x, spec.potential(), spec.physical(), spec.channel()
        )
        assert abs(residual) < 1e-10

    def test_mapping(self):
        spec = OscillatorSpec(2.0, 1, 2, 5.0)
        assert spec.potential() == PotentialParams(a=10.0)
        assert spec.physical() == PhysicalParams(5.0)
        assert spec.channel() == Channel(3, 4)

    @pytest.mark.parametrize('kwargs', [
        {'omega': 0.0},
        {'n_r': -1},
        {'l_tilde': -1},
        {'mass': -5.0},
    ])
    def test_invalid(self, kwargs):
        args = {'omega': 1.0, 'n_r': 0, 'l_tilde': 0, 'mass': 5.0, **kwargs}
        with pytest.raises(InvalidInput):
            OscillatorSpec(**args)

    @pytest.mark.parametrize('omega', [0.3, 1.0, 3.0])
    @pytest.mark.parametrize('n_r', [0, 1, 2])
    @pytest.mark.parametrize('l_tilde', [0, 1])
    def test_shooting_check(self, omega, n_r, l_tilde):
        report = oscillator_check(OscillatorSpec(omega, n_r, l_tilde, 5.0))
        assert report.converged
        assert report.node_count == n_r
        assert report.abs_diff < 1e-6


class TestLimitConsistency:
    def test_gaps_shrink(self):
        report = limit_consistency(
            PotentialParams(a=1.0), PhysicalParams(5.0), Channel(1, 2)
        )
        assert report.gaps[0] < 1e-10
        assert report.monotone
        assert all(order > 1 for order in report.orders[1:])
        assert math.isnan(report.orders[0])
        assert report.coulomb is None

    def test_coulomb_side_checked_by_oracle(self):
        report = limit_consistency(
            PotentialParams(a=1.0, c=1.0), PhysicalParams(5.0), Channel(2, 4)
        )
        check = report.coulomb
        assert check.E_analytic == pytest.approx(coulomb_energy(1.0, 2, 1, 5.0))
        assert check.converged
        assert check.node_count == 1
        assert check.abs_diff < 1e-6

    def test_reference_energy(self):
        report = limit_consistency(
            PotentialParams(a=1.0), PhysicalParams(5.0), Channel(1, 2)
        )
        spec = OscillatorSpec(math.sqrt(0.4), 0, 0, 5.0)
        assert report.oscillator_energy == pytest.approx(oscillator_energy(spec))

    def test_needs_exact_symmetry(self):
        with pytest.raises(InvalidInput):
            limit_consistency(
                PotentialParams(a=1.0), PhysicalParams(5.0, -5.5), Channel(1, 2)
            )

    @pytest.mark.parametrize('ch', [Channel(-1, 2), Channel(1, 1)])
    def test_unmapped_channel(self, ch):
        with pytest.raises(DomainError):
            limit_consistency(PotentialParams(a=1.0), PhysicalParams(5.0), ch)
