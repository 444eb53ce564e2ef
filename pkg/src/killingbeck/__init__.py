"""Dirac bound states of the Killingbeck potential under pseudospin symmetry."""
import os as _os
from pathlib import Path as _Path

from .model import (
    Channel,
    DegenerateChannel,
    DomainError,
    IndexConvention,
    InvalidInput,
    KillingbeckError,
    PhysicalParams,
    PotentialParams,
    canonical_coefficients,
    channel_from_kappa,
    energy_quantities,
    kappas_for_l_tilde,
    pseudospin_partner,
)
from .series import coefficients, termination_check
from .solver import (
    QuasiExactSolution,
    SearchConfig,
    ansatz_params,
    constrained_b,
    energy_residual,
    solve_by_termination,
    solve_energy,
)
from .wavefunction import build_wavefunction, eval_F, eval_G
from .oracle import ShootingConfig, shoot, solve_numeric, verify
from .special import (
    OscillatorSpec,
    coulomb_energy,
    limit_consistency,
    oscillator_energy,
)

_version_file = _Path(_os.path.realpath(__file__)).parent / "VERSION"
__version__ = _version_file.read_text().strip()

__all__ = [
    'Channel', 'DegenerateChannel', 'DomainError', 'IndexConvention',
    'InvalidInput', 'KillingbeckError', 'PhysicalParams', 'PotentialParams',
    'canonical_coefficients', 'channel_from_kappa', 'energy_quantities',
    'kappas_for_l_tilde', 'pseudospin_partner', 'coefficients',
    'termination_check', 'QuasiExactSolution', 'SearchConfig', 'ansatz_params',
    'constrained_b', 'energy_residual', 'solve_by_termination', 'solve_energy',
    'build_wavefunction', 'eval_F', 'eval_G', 'ShootingConfig', 'shoot',
    'solve_numeric', 'verify', 'OscillatorSpec', 'coulomb_energy',
    'limit_consistency', 'oscillator_energy',
]
