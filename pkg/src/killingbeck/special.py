"""
Coulomb and harmonic-oscillator limits under exact pseudospin symmetry.

Both limits are derived for C_ps = 0.
The Coulomb levels lie at gamma_tilde < 0, where the term
gamma_tilde * (-c / r) binds only for the mirrored coupling,
so their shooting checks run at c -> -c.
"""
import math

from dataclasses import dataclass, replace
from typing import Optional, Tuple

from scipy.optimize import brentq

from .model import (
    Channel,
    DomainError,
    InvalidInput,
    PhysicalParams,
    PotentialParams,
)
from .oracle import ShootingConfig, VerificationReport, verify_energy
from .solver import SearchConfig, solve_energy
from .warn import logger, tagged


def _check_levels(n: int, l_tilde: int, mass: float):
    if int(n) != n or n < 1:
        raise InvalidInput(f'n must be >= 1, got {n}')
    if int(l_tilde) != l_tilde or l_tilde < 0:
        raise InvalidInput(f'l_tilde must be >= 0, got {l_tilde}')
    if not mass > 0:
        raise InvalidInput(f'Mass must be positive, got {mass}')


def coulomb_energy(c: float, n: int, l_tilde: int, mass: float) -> float:
    """
    Closed-form Coulomb level E = M (c^2 - 4 N^2) / (c^2 + 4 N^2).

    Parameters
    ----------
    c
        Coulomb strength, c >= 0
    n
        principal index, n >= 1
    l_tilde
        pseudo-orbital number, N = n + l_tilde
    mass
        fermion mass in fm^-1
    """
    _check_levels(n, l_tilde, mass)
    if not (math.isfinite(c) and c >= 0):
        raise InvalidInput(f'Coulomb strength must be >= 0, got {c}')
    big_n = n + l_tilde
    return mass * (c ** 2 - 4 * big_n ** 2) / (c ** 2 + 4 * big_n ** 2)


@dataclass(frozen=True)
class OscillatorSpec:
    """Oscillator level with a = M omega^2 / 2."""

    omega: float
    n_r: int
    l_tilde: int
    mass: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise InvalidInput(f'omega must be positive, got {self.omega}')
        if int(self.n_r) != self.n_r or self.n_r < 0:
            raise InvalidInput(f'n_r must be >= 0, got {self.n_r}')
        _check_levels(1, self.l_tilde, self.mass)

    def potential(self) -> PotentialParams:
        return PotentialParams(a=self.mass * self.omega ** 2 / 2)

    def physical(self) -> PhysicalParams:
        return PhysicalParams(self.mass)

    def channel(self) -> Channel:
        """Channel kappa = l~ + 1 at series index n = 2 (n_r + 1)."""
        return Channel(self.l_tilde + 1, 2 * (self.n_r + 1))


def oscillator_energy(spec: OscillatorSpec) -> float:
    """Unique root E > M of (E + M) sqrt((E - M) / (2M)) = (2 n_r + l~ + 3/2) w."""
    mass = spec.mass
    rhs = (2 * spec.n_r + spec.l_tilde + 1.5) * spec.omega

    def lhs(u: float) -> float:
        return (u + 2 * mass) * math.sqrt(u / (2 * mass)) - rhs

    upper = rhs ** 2 / (2 * mass)
    u = brentq(lhs, 0.0, upper, xtol=1e-14, maxiter=200)
    return mass + u


@dataclass(frozen=True)
class LimitReport:
    """
    Continuity of the general energies towards the oscillator limit.

    ``gaps[i]`` is |E_general - E_osc| at b and c of order ``epsilons[i]``
    and ``orders`` the observed convergence orders between neighbors.
    The general solver rejects a = 0, so the Coulomb side is compared
    with the shooting oracle only: ``coulomb`` holds that check, or None
    when the potential carries no Coulomb coupling.
    """

    oscillator_energy: float
    epsilons: Tuple[float, ...]
    energies: Tuple[float, ...]
    gaps: Tuple[float, ...]
    orders: Tuple[float, ...]
    coulomb: Optional[VerificationReport] = None

    @property
    def monotone(self) -> bool:
        """Whether the gaps shrink with epsilon."""
        nonzero = [g for e, g in zip(self.epsilons, self.gaps) if e > 0]
        return all(a > b for a, b in zip(nonzero[:-1], nonzero[1:]))


def limit_consistency(
    pot: PotentialParams,
    phys: PhysicalParams,
    ch: Channel,
    epsilons: Tuple[float, ...] = (0.0, 1e-2, 1e-3, 1e-4),
) -> LimitReport:
    """
    Compare the energy equation at b = c = epsilon with the oscillator level.

    The Coulomb level with the same l~ and radial node count is checked
    against the shooting oracle at coupling ``pot.c`` when it is positive.
    """
    if phys.c_ps != 0:
        raise InvalidInput('The special-case limits require C_ps = 0')
    if ch.kappa < 1 or ch.n % 2:
        raise DomainError(
            'The oscillator mapping needs kappa = l~ + 1 > 0 and even n'
        )
    spec = OscillatorSpec(
        omega=math.sqrt(2 * pot.a / phys.mass),
        n_r=ch.n // 2 - 1,
        l_tilde=ch.l_tilde,
        mass=phys.mass,
    )
    reference = oscillator_energy(spec)
    search = SearchConfig(tol_x=1e-15)

    energies, gaps = [], []
    for eps in epsilons:
        solutions = solve_energy(replace(pot, b=eps, c=eps), phys, ch, search)
        if not solutions:
            raise DomainError(f'No general solution at epsilon = {eps}')
        nearest = min(solutions, key=lambda s: abs(s.energy - reference))
        energies.append(nearest.energy)
        gaps.append(abs(nearest.energy - reference))

    orders = []
    for (e0, g0), (e1, g1) in zip(
        zip(epsilons[:-1], gaps[:-1]), zip(epsilons[1:], gaps[1:])
    ):
        if e0 > 0 and e1 > 0 and g0 > 0 and g1 > 0:
            orders.append(math.log(g0 / g1) / math.log(e0 / e1))
        else:
            orders.append(math.nan)
    coulomb = None
    if pot.c > 0:
        coulomb = coulomb_check(pot.c, spec.n_r + 1, spec.l_tilde, phys.mass)
    report = LimitReport(
        reference, tuple(epsilons), tuple(energies), tuple(gaps), tuple(orders),
        coulomb,
    )
    logger.info(tagged('limit', f'Oscillator gaps {report.gaps}'))
    return report


def coulomb_check(
    c: float, n: int, l_tilde: int, mass: float, cfg: ShootingConfig = None
) -> VerificationReport:
    """Shooting check of a Coulomb level at the mirrored coupling."""
    if not c > 0:
        raise InvalidInput('The Coulomb check needs c > 0')
    energy = coulomb_energy(c, n, l_tilde, mass)
    upper = mass if n == 1 else coulomb_energy(c, n - 1, l_tilde, mass)
    lower = coulomb_energy(c, n + 1, l_tilde, mass)
    cfg = cfg or ShootingConfig()
    if cfg.e_bracket is None:
        bracket = ((energy + lower) / 2, (energy + upper) / 2)
        cfg = replace(cfg, e_bracket=bracket)
    return verify_energy(
        energy,
        PotentialParams(a=0.0, c=-c),
        PhysicalParams(mass),
        Channel(l_tilde + 1, n),
        node_count=n - 1,
        cfg=cfg,
    )


def oscillator_check(
    spec: OscillatorSpec, cfg: ShootingConfig = None
) -> VerificationReport:
    """Shooting check of an oscillator level."""
    return verify_energy(
        oscillator_energy(spec),
        spec.potential(),
        spec.physical(),
        spec.channel(),
        node_count=spec.n_r,
        cfg=cfg,
    )
