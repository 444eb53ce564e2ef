"""
Spinor components of quasi-exact solutions.

G(r) = exp(p r^2 / 2 + q r) r^d P(r) with the series polynomial P,
F(r) = [G'(r) - (kappa / r) G(r)] / (M - E + C_ps) evaluated analytically.
"""
import math

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.integrate import simpson

from .model import InvalidInput, KillingbeckError, canonical_coefficients
from .series import (
    SeriesCoefficients,
    coefficients,
    termination_check,
    upper_coefficients,
)
from .solver import QuasiExactSolution
from .warn import logger, tagged

# Boundary samples of G must stay below this fraction of max |G|
DECAY_THRESHOLD = 1e-4


class NumericOverflow(KillingbeckError):
    """Sampled spinor components are not finite."""


class SingularEnergy(KillingbeckError, ZeroDivisionError):
    """M - E + C_ps vanishes, the upper component is undefined."""


@dataclass(frozen=True)
class GridConfig:
    """
    Sampling grid of the spinor components.

    The grid runs from ``r_min`` to the radius where the exponent
    p r^2 / 2 + q r reaches ``cutoff_exponent``. It is the image of a
    uniform grid in s under r = r_min + (r_cut - r_min) sinh(k s) / sinh(k)
    with ``stretch`` k: dense near the origin, sparse in the exponential
    tail. ``stretch`` 0 gives a uniform grid.
    """

    points: int = 4001
    r_min: float = 1e-6
    cutoff_exponent: float = -40.0
    buffer: int = 6
    stretch: float = 3.0

    def __post_init__(self):
        if self.points < 5:
            raise InvalidInput('Grid needs at least 5 points')
        if not self.r_min > 0:
            raise InvalidInput(f'r_min must be positive, got {self.r_min}')
        if not self.cutoff_exponent < 0:
            raise InvalidInput('cutoff_exponent must be negative')
        if self.buffer < 1:
            raise InvalidInput('buffer must be >= 1')
        if not (0 <= self.stretch <= 20):
            raise InvalidInput(f'stretch must lie in [0, 20], got {self.stretch}')

    def radii(self, r_cut: float) -> np.ndarray:
        """Grid points from ``r_min`` to ``r_cut``."""
        s = np.linspace(0.0, 1.0, self.points)
        if self.stretch == 0:
            shape = s
        else:
            shape = np.sinh(self.stretch * s) / math.sinh(self.stretch)
        r = self.r_min + (r_cut - self.r_min) * shape
        r[-1] = r_cut
        return r


@dataclass(frozen=True)
class RadialWavefunction:
    """Normalized samples of the spinor components."""

    grid: np.ndarray
    G: np.ndarray
    F: np.ndarray
    norm: float
    node_count_G: int

    def normalization(self) -> float:
        """Simpson quadrature of F^2 + G^2 over the grid."""
        return float(simpson(self.F ** 2 + self.G ** 2, x=self.grid))

    @property
    def boundary_ratio(self) -> float:
        """Largest end-point |G| relative to max |G|."""
        peak = np.max(np.abs(self.G))
        return float(max(abs(self.G[0]), abs(self.G[-1])) / peak)


def series_for(sol: QuasiExactSolution, buffer: int = 6) -> SeriesCoefficients:
    """Series coefficients of a solution up to ``degree + buffer``."""
    canonical = canonical_coefficients(
        sol.potential, sol.physical, sol.channel, sol.energy
    )
    return coefficients(sol.ansatz, canonical, sol.degree + buffer)


def _radii(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise InvalidInput('Radii must be positive')
    return r


def _prefactor(sol: QuasiExactSolution, r: np.ndarray, power: float):
    p, q = sol.ansatz.p, sol.ansatz.q
    return np.exp(p * r ** 2 / 2 + q * r) * r ** power


def eval_G(sol: QuasiExactSolution, coeffs: SeriesCoefficients, r):
    """Lower component at ``r``, the polynomial truncated after the degree."""
    r = _radii(r)
    poly = coeffs.polynomial(sol.degree)
    return _prefactor(sol, r, sol.ansatz.delta) * poly(r)


def eval_F(sol: QuasiExactSolution, coeffs: SeriesCoefficients, r):
    """Upper component at ``r`` from the analytic derivative of G."""
    r = _radii(r)
    denominator = -sol.gamma_tilde
    if denominator == 0:
        raise SingularEnergy('M - E + C_ps = 0 at the exact p-spin point')
    u = upper_coefficients(coeffs, sol.channel.kappa, sol.degree)
    bracket = np.polynomial.Polynomial(u)(r)
    return _prefactor(sol, r, sol.ansatz.delta - 1) * bracket / denominator


def cutoff_radius(sol: QuasiExactSolution, exponent: float = -40.0) -> float:
    """Radius where p r^2 / 2 + q r equals ``exponent``."""
    p, q = sol.ansatz.p, sol.ansatz.q
    return (-q - math.sqrt(q ** 2 + 2 * p * exponent)) / p


def count_sign_changes(values: np.ndarray) -> int:
    """Sign changes of the nonzero entries."""
    signs = np.sign(values[values != 0])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def build_wavefunction(
    sol: QuasiExactSolution, grid: GridConfig = None
) -> RadialWavefunction:
    """Sample, normalize and count the nodes of a solution's spinor."""
    grid = grid or GridConfig()
    coeffs = series_for(sol, grid.buffer)
    terminated, trailing = termination_check(coeffs, sol.degree, grid.buffer)
    if not terminated:
        logger.warning(tagged(
            'termination',
            f'Series does not terminate at degree {sol.degree} '
            f'(trailing |a_k| = {trailing:.3e}), sampling the truncated '
            'polynomial',
        ))

    r_cut = cutoff_radius(sol, grid.cutoff_exponent)
    if r_cut <= grid.r_min:
        raise InvalidInput(
            f'Cutoff radius {r_cut:.3e} fm does not exceed r_min'
        )
    r = grid.radii(r_cut)
    G = eval_G(sol, coeffs, r)
    F = eval_F(sol, coeffs, r)
    if not (np.all(np.isfinite(G)) and np.all(np.isfinite(F))):
        raise NumericOverflow(
            f'Non-finite spinor samples for E = {sol.energy!r}'
        )

    integral = simpson(F ** 2 + G ** 2, x=r)
    if not integral > 0:
        raise NumericOverflow('Spinor norm vanishes or is not finite')
    norm = 1 / math.sqrt(integral)
    wf = RadialWavefunction(r, norm * G, norm * F, norm, count_sign_changes(G))
    if wf.boundary_ratio >= DECAY_THRESHOLD:
        logger.warning(tagged(
            'decay', f'Boundary |G| ratio {wf.boundary_ratio:.3e} on the grid'
        ))
    return wf


def _central(values: np.ndarray) -> np.ndarray:
    # five-point stencil in the uniform grid coordinate, interior points
    return (
        values[:-4] - 8 * values[1:-3] + 8 * values[3:-1] - values[4:]
    ) / 12


def dirac_residuals(
    wf: RadialWavefunction, sol: QuasiExactSolution
) -> Tuple[float, float]:
    """
    Relative residuals of the first-order Dirac system on interior points.

    F' + kappa F / r = (M + E - Delta) G and
    G' - kappa G / r = (M - E + C_ps) F. Derivatives are fourth-order
    central differences in the uniform coordinate that the grid is mapped
    from, divided by the difference of the grid itself.
    """
    r, F, G = wf.grid, wf.F, wf.G
    kappa = sol.channel.kappa
    mass, c_ps = sol.physical.mass, sol.physical.c_ps
    dr = _central(r)
    dF = _central(F) / dr
    dG = _central(G) / dr
    r, F, G = r[2:-2], F[2:-2], G[2:-2]

    lhs_a = dF + kappa * F / r
    rhs_a = (mass + sol.energy - sol.potential(r)) * G
    lhs_b = dG - kappa * G / r
    rhs_b = (mass - sol.energy + c_ps) * F

    def relative(lhs, rhs):
        return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))

    return relative(lhs_a, rhs_a), relative(lhs_b, rhs_b)
