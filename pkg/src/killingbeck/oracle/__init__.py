"""
Shooting solver of the lower-component equation at fixed (a, b, c).

G'' = [kappa (kappa - 1) / r^2 + gamma_tilde (a r^2 + b r - c / r)
+ beta_tilde^2] G is integrated outward from r_min and inward from r_max
and the two pieces are matched at r_match.
The oracle depends on nothing but the core model.
"""
import math

from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ..model import (
    Channel,
    InvalidInput,
    KillingbeckError,
    PhysicalParams,
    PotentialParams,
    energy_quantities,
)
from ..warn import logger, tagged
from .integrate import rk4_sweep


class UnsupportedRegime(KillingbeckError):
    """No normalizable asymptotic solution at the trial energy."""


class IntegrationError(KillingbeckError):
    """Integration produced non-finite values."""


class NotFound(KillingbeckError):
    """No eigenvalue with the requested node count in the bracket."""


class SturmViolation(KillingbeckError):
    """Node counts do not increase with energy."""


@dataclass(frozen=True)
class ShootingConfig:
    """
    Shooting parameters.

    Parameters
    ----------
    r_min
        start of the outward integration in fm
    r_match, r_max
        matching and end radius in fm, derived from the energies when None
    steps
        Runge-Kutta steps in ln r between r_min and r_max
    e_bracket
        energy search interval in fm^-1
    tol_E
        bracket width of a converged eigenvalue in fm^-1
    defect_tol
        log-derivative mismatch of a converged eigenvalue in fm^-1
    scan_points
        energies of the initial scan
    decay_exponent
        decay of the asymptotic solution between the outer turning point
        and r_max
    renorm_every
        steps between rescalings of the integrated solution
    """

    r_min: float = 1e-4
    r_match: Optional[float] = None
    r_max: Optional[float] = None
    steps: int = 16000
    e_bracket: Optional[Tuple[float, float]] = None
    tol_E: float = 1e-9
    defect_tol: float = 1e-8
    scan_points: int = 200
    decay_exponent: float = 45.0
    renorm_every: int = 100

    def __post_init__(self):
        if not self.r_min > 0:
            raise InvalidInput(f'r_min must be positive, got {self.r_min}')
        if self.r_match is not None and not self.r_match > self.r_min:
            raise InvalidInput('r_match must exceed r_min')
        if self.r_max is not None:
            lower = self.r_match if self.r_match is not None else self.r_min
            if not self.r_max > lower:
                raise InvalidInput('r_max must exceed r_match and r_min')
        if self.steps < 1000:
            raise InvalidInput(f'steps must be >= 1000, got {self.steps}')
        if self.e_bracket is not None:
            lo, hi = self.e_bracket
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise InvalidInput(f'Invalid energy bracket {self.e_bracket}')
        if self.tol_E <= 0 or self.defect_tol <= 0:
            raise InvalidInput('Tolerances must be positive')
        if self.scan_points < 2 or self.renorm_every < 1:
            raise InvalidInput('scan_points must be >= 2, renorm_every >= 1')
        if not self.decay_exponent > 0:
            raise InvalidInput('decay_exponent must be positive')


@dataclass(frozen=True)
class ShootResult:
    """
    Matching data of one trial energy.

    ``wronskian`` is sin of the phase-plane angle between the two pieces,
    continuous in the energy and zero exactly at eigenvalues.
    """

    energy: float
    match_defect: float
    wronskian: float
    node_count: int


@dataclass(frozen=True)
class NumericEigenvalue:
    """Converged shooting eigenvalue."""

    energy: float
    node_count: int
    match_defect: float
    width: float
    converged: bool
    r_match: float
    r_max: float


@dataclass(frozen=True)
class VerificationReport:
    """Analytic energy against the shooting eigenvalue."""

    E_analytic: float
    E_numeric: float
    abs_diff: float
    node_count: int
    match_defect: float
    converged: bool


def effective_rhs(r, energy: float, pot: PotentialParams,
                  phys: PhysicalParams, ch: Channel):
    """Coupling f in G'' = f G."""
    quantities = energy_quantities(energy, phys)
    return (
        ch.kappa * (ch.kappa - 1) / r ** 2
        + quantities.gamma_tilde * pot(r)
        + quantities.beta_tilde_sq
    )


class _Problem:
    """Energy-dependent coefficients of the Liouville-transformed equation."""

    def __init__(self, energies, pot: PotentialParams, phys: PhysicalParams,
                 ch: Channel):
        self.energies = np.atleast_1d(np.asarray(energies, dtype=float))
        self.pot = pot
        self.ch = ch
        self.delta = ch.delta
        quantities = energy_quantities(self.energies, phys)
        self.x = quantities.gamma_tilde
        self.beta2 = quantities.beta_tilde_sq
        self.k0 = ch.kappa * (ch.kappa - 1) + 0.25
        self.c1 = -self.x * pot.c
        self.c2 = self.beta2
        self.c3 = self.x * pot.b
        self.c4 = self.x * pot.a
        self._check_regime()

    def _check_regime(self):
        pot = self.pot
        if pot.a > 0:
            bad = self.x <= 0
            reason = 'a > 0 needs gamma_tilde > 0'
        elif pot.b != 0:
            bad = self.x * pot.b <= 0
            reason = 'a = 0 needs gamma_tilde * b > 0'
        else:
            bad = self.beta2 <= 0
            reason = 'a = b = 0 needs beta_tilde^2 > 0'
        if np.any(bad):
            energy = self.energies[np.argmax(bad)]
            raise UnsupportedRegime(
                f'No normalizable tail at E = {energy!r}: {reason}'
            )

    def f(self, r, i: int):
        """Coupling of G'' = f G for energy ``i``."""
        return (
            self.k0 - 0.25
            + r * (self.c1[i] + r * (self.c2[i] + r * (self.c3[i] + r * self.c4[i])))
        ) / r ** 2

    def decay_phase(self, r, i: int):
        """Leading WKB exponent of the decaying solution."""
        x, beta2, pot = self.x[i], self.beta2[i], self.pot
        if pot.a > 0:
            s = math.sqrt(x * pot.a)
            return s * r ** 2 / 2 + x * pot.b / (2 * s) * r
        if pot.b != 0:
            return 2 / 3 * math.sqrt(x * pot.b) * r ** 1.5
        return math.sqrt(beta2) * r

    def log_derivative(self, r):
        """Asymptotic G'/G at ``r`` for every energy."""
        pot = self.pot
        if pot.a > 0:
            s = np.sqrt(self.x * pot.a)
            return -(s * r + self.x * pot.b / (2 * s))
        if pot.b != 0:
            f = np.array([self.f(r, i) for i in range(len(self.energies))])
            return -np.sqrt(np.maximum(f, 0.0))
        return -np.sqrt(self.beta2)

    def turning_point(self, i: int, r_min: float, r_far: float) -> float:
        """Outer classical turning point, else the minimum of f."""
        radii = np.geomspace(r_min, r_far, 4000)
        f = self.f(radii, i)
        entering = np.flatnonzero((f[:-1] < 0) & (f[1:] >= 0))
        if len(entering) == 0:
            return float(radii[np.argmin(f)])
        j = entering[-1]
        return brentq(lambda r: self.f(r, i), radii[j], radii[j + 1])

    def decay_radius(self, i: int, phase: float) -> float:
        """Radius where the decay phase reaches ``phase``."""
        hi = 1.0
        while self.decay_phase(hi, i) < phase:
            hi *= 2
        return brentq(lambda r: self.decay_phase(r, i) - phase, 0.0, hi)


@dataclass(frozen=True)
class _Geometry:
    r_min: float
    r_match: float
    r_max: float
    steps: int
    match_index: int

    @property
    def h(self) -> float:
        return (math.log(self.r_max) - math.log(self.r_min)) / self.steps

    def half_radii(self) -> np.ndarray:
        t = math.log(self.r_min) + 0.5 * self.h * np.arange(2 * self.steps + 1)
        return np.exp(t)


def _geometry(problem: _Problem, cfg: ShootingConfig) -> _Geometry:
    mid = len(problem.energies) // 2
    r_far = problem.decay_radius(mid, 4 * cfg.decay_exponent)
    r_far = max(r_far, 10 * cfg.r_min)
    r_match = cfg.r_match
    if r_match is None:
        r_match = problem.turning_point(mid, cfg.r_min, r_far)
        r_match = max(r_match, 10 * cfg.r_min)
    r_max = cfg.r_max
    if r_max is None:
        r_max = 0.0
        for i in range(len(problem.energies)):
            turn = max(problem.turning_point(i, cfg.r_min, r_far), r_match)
            phase = problem.decay_phase(turn, i) + cfg.decay_exponent
            r_max = max(r_max, problem.decay_radius(i, phase))
    if not r_max > r_match:
        raise InvalidInput(
            f'r_max = {r_max:.6e} fm does not exceed r_match = {r_match:.6e} fm'
        )
    t_min, t_max = math.log(cfg.r_min), math.log(r_max)
    index = round((math.log(r_match) - t_min) / (t_max - t_min) * cfg.steps)
    index = min(max(index, 1), cfg.steps - 1)
    geometry = _Geometry(cfg.r_min, r_match, r_max, cfg.steps, index)
    t_match = t_min + index * geometry.h
    return replace(geometry, r_match=math.exp(t_match))


def _integrate(problem: _Problem, geometry: _Geometry, cfg: ShootingConfig):
    radii = geometry.half_radii()
    m = 2 * geometry.match_index
    coefficients = (problem.k0, problem.c1, problem.c2, problem.c3, problem.c4)

    r0 = radii[0]
    lead = -problem.x * problem.pot.c / (2 * problem.delta)
    y_out = 1 + lead * r0
    dy_out = (problem.delta - 0.5) * y_out + lead * r0
    y_out, dy_out, nodes_out = rk4_sweep(
        radii[:m + 1], *coefficients, y_out, dy_out, geometry.h,
        cfg.renorm_every,
    )

    r_end = radii[-1]
    y_in = np.ones_like(problem.energies)
    dy_in = r_end * problem.log_derivative(r_end) - 0.5 + np.zeros_like(y_in)
    y_in, dy_in, nodes_in = rk4_sweep(
        np.ascontiguousarray(radii[m:][::-1]), *coefficients, y_in, dy_in,
        -geometry.h, cfg.renorm_every,
    )

    values = np.concatenate([y_out, dy_out, y_in, dy_in])
    if not np.all(np.isfinite(values)):
        raise IntegrationError(
            'Non-finite solution despite renormalization; '
            'reduce the step or the decay exponent'
        )
    return (y_out, dy_out), (y_in, dy_in), nodes_out + nodes_in


def _shoot(problem: _Problem, geometry: _Geometry,
           cfg: ShootingConfig) -> List[ShootResult]:
    (y_o, dy_o), (y_i, dy_i), nodes = _integrate(problem, geometry, cfg)
    with np.errstate(divide='ignore', invalid='ignore'):
        defect = (dy_o / y_o - dy_i / y_i) / geometry.r_match
    wronskian = (dy_o * y_i - y_o * dy_i) / np.sqrt(
        (y_o ** 2 + dy_o ** 2) * (y_i ** 2 + dy_i ** 2)
    )
    return [
        ShootResult(float(e), float(d), float(w), int(n))
        for e, d, w, n in zip(problem.energies, defect, wronskian, nodes)
    ]


def shoot(energy: float, pot: PotentialParams, phys: PhysicalParams,
          ch: Channel, cfg: ShootingConfig = None) -> ShootResult:
    """Match outward and inward solutions at one trial energy."""
    cfg = cfg or ShootingConfig()
    problem = _Problem([energy], pot, phys, ch)
    return _shoot(problem, _geometry(problem, cfg), cfg)[0]


class _Refiner:
    def __init__(self, pot, phys, ch, geometry, cfg):
        self.pot = pot
        self.phys = phys
        self.ch = ch
        self.geometry = geometry
        self.cfg = cfg

    def __call__(self, energies) -> List[ShootResult]:
        problem = _Problem(energies, self.pot, self.phys, self.ch)
        return _shoot(problem, self.geometry, self.cfg)

    def narrow(self, lo: ShootResult, hi: ShootResult, sections: int = 16):
        """Shrink a sign-change bracket by multisection."""
        energies = np.linspace(lo.energy, hi.energy, sections + 1)[1:-1]
        results = [lo] + self(energies) + [hi]
        for left, right in zip(results[:-1], results[1:]):
            if left.wronskian == 0:
                return left, left
            if np.sign(left.wronskian) != np.sign(right.wronskian):
                return left, right
        return results[-2], results[-1]

    def refine(self, lo: ShootResult, hi: ShootResult, full: bool):
        """Narrow until converged, or a fixed coarse width when not ``full``."""
        cfg = self.cfg
        coarse = max(1e3 * cfg.tol_E, 1e-6 * abs(hi.energy - lo.energy))
        while True:
            width = hi.energy - lo.energy
            mid = self([0.5 * (lo.energy + hi.energy)])[0]
            ulp = 4 * np.spacing(max(abs(lo.energy), abs(hi.energy)))
            if not full and width < coarse:
                return mid, width, False
            if width < cfg.tol_E and abs(mid.match_defect) < cfg.defect_tol:
                return mid, width, True
            if width <= ulp:
                return mid, width, False
            lo, hi = self.narrow(lo, hi)


def _check_sturm(roots: List[Tuple[ShootResult, float]], phys: PhysicalParams):
    previous = None
    for mid, _ in roots:
        if energy_quantities(mid.energy, phys).gamma_tilde <= 0:
            continue
        if previous is not None and mid.node_count <= previous.node_count:
            raise SturmViolation(
                f'Node count {mid.node_count} at E = {mid.energy!r} does not '
                f'exceed {previous.node_count} at E = {previous.energy!r}'
            )
        previous = mid


def solve_numeric(
    pot: PotentialParams,
    phys: PhysicalParams,
    ch: Channel,
    node_count: Optional[int],
    cfg: ShootingConfig,
    near: float = None,
) -> NumericEigenvalue:
    """
    Shooting eigenvalue with ``node_count`` nodes inside ``cfg.e_bracket``.

    When ``node_count`` is None the eigenvalue nearest ``near`` is returned.
    """
    if cfg.e_bracket is None:
        raise InvalidInput('solve_numeric needs an energy bracket')
    if node_count is None and near is None:
        raise InvalidInput('Give a node count or a reference energy')
    lo, hi = cfg.e_bracket
    energies = np.linspace(lo, hi, cfg.scan_points)
    geometry = _geometry(_Problem(energies, pot, phys, ch), cfg)
    refiner = _Refiner(pot, phys, ch, geometry, cfg)
    scan = refiner(energies)

    coarse = []
    for left, right in zip(scan[:-1], scan[1:]):
        if left.wronskian == 0 or (
            np.sign(left.wronskian) != np.sign(right.wronskian)
            and right.wronskian != 0
        ):
            mid, _, _ = refiner.refine(left, right, full=False)
            coarse.append((mid, (left, right)))
    _check_sturm(coarse, phys)
    logger.debug(tagged('oracle', ', '.join(
        f'{mid.energy:.8e} ({mid.node_count} nodes)' for mid, _ in coarse
    )))

    if node_count is not None:
        candidates = [c for c in coarse if c[0].node_count == node_count]
    else:
        candidates = list(coarse)
    if not candidates:
        found = sorted({mid.node_count for mid, _ in coarse})
        raise NotFound(
            f'No eigenvalue with {node_count} nodes in [{lo!r}, {hi!r}]; '
            f'node counts found: {found}'
        )
    if near is not None:
        candidates.sort(key=lambda c: abs(c[0].energy - near))
    _, (left, right) = candidates[0]

    mid, width, converged = refiner.refine(left, right, full=True)
    if not converged:
        logger.warning(tagged(
            'oracle', f'Eigenvalue near {mid.energy!r} did not reach the '
            f'defect tolerance (|D| = {abs(mid.match_defect):.3e})'
        ))
    return NumericEigenvalue(
        energy=mid.energy,
        node_count=mid.node_count,
        match_defect=mid.match_defect,
        width=width,
        converged=converged,
        r_match=geometry.r_match,
        r_max=geometry.r_max,
    )


def verify_energy(
    energy: float,
    pot: PotentialParams,
    phys: PhysicalParams,
    ch: Channel,
    node_count: int = None,
    cfg: ShootingConfig = None,
) -> VerificationReport:
    """Compare an energy with the shooting eigenvalue at the same potential."""
    cfg = cfg or ShootingConfig()
    if cfg.e_bracket is None:
        x = energy_quantities(energy, phys).gamma_tilde
        if not x > 0:
            raise InvalidInput(
                'A default bracket needs gamma_tilde > 0, pass e_bracket'
            )
        base = phys.mass + phys.c_ps
        cfg = replace(cfg, e_bracket=(base + x / 4, base + 4 * x))
    try:
        numeric = solve_numeric(pot, phys, ch, node_count, cfg, near=energy)
    except KillingbeckError as e:
        e.args = e.args + (f'while verifying E = {energy!r} for {ch}',)
        raise
    return VerificationReport(
        E_analytic=energy,
        E_numeric=numeric.energy,
        abs_diff=abs(numeric.energy - energy),
        node_count=numeric.node_count,
        match_defect=numeric.match_defect,
        converged=numeric.converged,
    )


def verify(sol, phys: PhysicalParams = None, cfg: ShootingConfig = None,
           node_count: int = None) -> VerificationReport:
    """
    Verify a quasi-exact solution at its solved linear strength.

    ``sol`` needs ``energy``, ``potential``, ``physical`` and ``channel``.
    """
    phys = phys or sol.physical
    return verify_energy(
        sol.energy, sol.potential, phys, sol.channel, node_count, cfg
    )
