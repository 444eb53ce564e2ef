"""
Physical quantities, unit conventions and derived-parameter algebra.

Natural units with hbar = c = 1 are used throughout:
energies and masses in fm^-1, lengths in fm.
The quadratic strength ``a`` is in fm^-3, the linear strength ``b`` in fm^-2
and the Coulomb strength ``c`` is dimensionless.
"""
import math

from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple


class KillingbeckError(Exception):
    """Base class of all errors raised by the package."""


class InvalidInput(KillingbeckError, ValueError):
    """Input violates a documented precondition."""


class DomainError(InvalidInput):
    """Input lies outside the general quasi-exact path."""


class DegenerateChannel(InvalidInput):
    """Series index expression n + delta - 1 vanishes."""


class IndexConvention(str, Enum):
    """Exponent used in the index expressions of the energy equation."""

    regular_delta = 'regular-delta'
    paper_kappa = 'paper-kappa'


def _check_finite(**values: float):
    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidInput(f'{name} must be finite, got {value!r}')


@dataclass(frozen=True)
class PotentialParams:
    """
    Killingbeck coefficients of the potential a r^2 + b r - c / r.

    ``c > 0`` is the attractive convention used by the quasi-exact path.
    Negative ``c`` is accepted for the Coulomb-limit oracle runs.
    """

    a: float
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        _check_finite(a=self.a, b=self.b, c=self.c)
        if self.a < 0:
            raise InvalidInput(f'Quadratic strength a must be >= 0, got {self.a}')

    def __call__(self, r):
        """Evaluate the potential at radius ``r``."""
        return self.a * r ** 2 + self.b * r - self.c / r

    def scaled(self, s: float) -> 'PotentialParams':
        """Rescale the unit of length by ``s``."""
        return replace(self, a=self.a / s ** 3, b=self.b / s ** 2)


@dataclass(frozen=True)
class PhysicalParams:
    """Fermion mass and pseudospin constant Sigma(r) = C_ps."""

    mass: float
    c_ps: float = 0.0

    def __post_init__(self):
        _check_finite(mass=self.mass, c_ps=self.c_ps)
        if self.mass <= 0:
            raise InvalidInput(f'Mass must be positive, got {self.mass}')

    def scaled(self, s: float) -> 'PhysicalParams':
        """Rescale the unit of length by ``s``."""
        return PhysicalParams(self.mass / s, self.c_ps / s)


@dataclass(frozen=True)
class Channel:
    """
    Quantum labels of a lower-component state.

    Parameters
    ----------
    kappa
        spin-orbit quantum number, nonzero
    n
        series index of the energy equation, n >= 1
    """

    kappa: int
    n: int = 1

    def __post_init__(self):
        if int(self.kappa) != self.kappa or self.kappa == 0:
            raise InvalidInput(f'kappa must be a nonzero integer, got {self.kappa}')
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInput(f'Series index n must be >= 1, got {self.n}')

    @property
    def l_tilde(self) -> int:
        """Pseudo-orbital quantum number, k(k - 1) = l~(l~ + 1)."""
        return -self.kappa if self.kappa < 0 else self.kappa - 1

    @property
    def l(self) -> int:  # NOQA: E743
        """Orbital quantum number of the upper component."""
        return self.kappa if self.kappa > 0 else -self.kappa - 1

    @property
    def j(self) -> float:
        """Total angular momentum."""
        return abs(self.kappa) - 0.5

    @property
    def delta(self) -> int:
        """Regular Frobenius exponent, the larger root of d(d - 1) = k(k - 1)."""
        return max(self.kappa, 1 - self.kappa)

    def index_exponent(self, convention: IndexConvention) -> int:
        """Exponent entering n + d - 1 and n + d - 3/2."""
        if IndexConvention(convention) is IndexConvention.paper_kappa:
            return self.kappa
        return self.delta

    def with_n(self, n: int) -> 'Channel':
        """Copy of the channel with a different series index."""
        return replace(self, n=n)


def channel_from_kappa(kappa: int, n: int = 1) -> Channel:
    """Create a channel with derived l~ and regular exponent."""
    return Channel(kappa, n)


def kappas_for_l_tilde(l_tilde: int) -> Tuple[int, ...]:
    """Spin-orbit numbers sharing the pseudo-orbital number ``l_tilde``."""
    if int(l_tilde) != l_tilde or l_tilde < 0:
        raise InvalidInput(f'l_tilde must be a non-negative integer, got {l_tilde}')
    if l_tilde == 0:
        return (1,)
    return (-l_tilde, l_tilde + 1)


def pseudospin_partner(kappa: int) -> int:
    """Other member of the pseudospin doublet of ``kappa``."""
    channel = channel_from_kappa(kappa)
    if channel.l_tilde == 0:
        raise InvalidInput('kappa = 1 (l~ = 0) is a pseudospin singlet')
    return 1 - channel.kappa


@dataclass(frozen=True)
class EnergyQuantities:
    """Energy-dependent combinations of the lower-component equation."""

    energy: float
    mass: float
    c_ps: float

    @property
    def gamma_tilde(self) -> float:
        """E - M - C_ps."""
        return self.energy - self.mass - self.c_ps

    @property
    def beta_tilde_sq(self) -> float:
        """(M + E)(M - E + C_ps), which equals -(M + E) * gamma_tilde."""
        return (self.mass + self.energy) * (self.mass - self.energy + self.c_ps)


def energy_quantities(energy: float, phys: PhysicalParams) -> EnergyQuantities:
    """Bundle an energy with the physical parameters."""
    return EnergyQuantities(energy, phys.mass, phys.c_ps)


@dataclass(frozen=True)
class CanonicalCoefficients:
    """
    Coefficients of G'' + [A1/r^2 + A2/r - A3 - A4 r - A5 r^2] G = 0.

    Always built by :func:`canonical_coefficients`.
    """

    A1: float
    A2: float
    A3: float
    A4: float
    A5: float


def canonical_coefficients(
    pot: PotentialParams, phys: PhysicalParams, ch: Channel, energy: float
) -> CanonicalCoefficients:
    """Derive the canonical coefficients at ``energy``."""
    quantities = energy_quantities(energy, phys)
    gamma = quantities.gamma_tilde
    return CanonicalCoefficients(
        A1=-ch.kappa * (ch.kappa - 1),
        A2=gamma * pot.c,
        A3=quantities.beta_tilde_sq,
        A4=gamma * pot.b,
        A5=gamma * pot.a,
    )
