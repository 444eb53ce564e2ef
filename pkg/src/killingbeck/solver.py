"""
Quasi-exact solutions of the lower-component equation.

Two solvers are provided.
:func:`solve_energy` solves the closed energy equation in x = gamma_tilde
with the linear strength b constrained by the potential-parameter relation.
:func:`solve_by_termination` solves the joint termination conditions
a_{n_r + 1} = 0 and Z_{n_r} = 0 of the series recurrence for (x, b).
"""
import math

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Tuple

import numpy as np
from scipy.optimize import brentq

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
    energy_quantities,
)
from .series import coefficients
from .warn import logger, tagged


class NoConvergence(KillingbeckError):
    """
    Iteration did not converge.

    ``best`` holds the best iterate, ``(x,)`` for a scalar polish
    and ``(x, b)`` for the termination system, ``residual`` its residual.
    """

    def __init__(self, msg: str, best: Tuple[float, ...], residual: float):
        super().__init__(msg)
        self.best = best
        self.residual = residual


class SolverMethod(str, Enum):
    """Origin of a quasi-exact solution."""

    eq19 = 'eq19'
    recurrence = 'recurrence'


@dataclass(frozen=True)
class AnsatzParams:
    """Exponent coefficients of exp(p r^2 / 2 + q r) r^delta."""

    p: float
    q: float
    delta: float


@dataclass(frozen=True)
class SearchConfig:
    """
    Root search over x = gamma_tilde.

    Parameters
    ----------
    x_min, x_max
        ends of the geometric scan grid in fm^-1
    points
        number of grid points
    tol_root
        absolute residual that a polished root must reach
    tol_x
        absolute bracket width of the polish in fm^-1
    convention
        exponent used in the index expressions of the energy equation
    max_iter
        iteration cap of the polish and of the Newton refinement
    newton_tol
        residual below which the termination system counts as solved
    """

    x_min: float = 1e-12
    x_max: float = 50.0
    points: int = 2000
    tol_root: float = 1e-12
    tol_x: float = 1e-15
    convention: IndexConvention = IndexConvention.regular_delta
    max_iter: int = 100
    newton_tol: float = 1e-13

    def __post_init__(self):
        if not (0 < self.x_min < self.x_max) or not math.isfinite(self.x_max):
            raise InvalidInput(
                f'Invalid search bracket ({self.x_min}, {self.x_max}]'
            )
        if self.points < 2:
            raise InvalidInput('Search grid needs at least 2 points')
        if self.tol_root <= 0 or self.tol_x <= 0 or self.newton_tol <= 0:
            raise InvalidInput('Tolerances must be positive')
        if self.max_iter < 1:
            raise InvalidInput('max_iter must be >= 1')
        object.__setattr__(self, 'convention', IndexConvention(self.convention))

    def grid(self) -> np.ndarray:
        """Geometric scan grid."""
        return np.geomspace(self.x_min, self.x_max, self.points)


@dataclass(frozen=True)
class QuasiExactSolution:
    """
    Self-consistent energy and linear strength.

    ``potential`` carries the solved b, ``degree`` the polynomial degree
    of the lower component and ``bracket`` the sign-change bracket
    in x that the root was polished in.
    """

    energy: float
    b: float
    ansatz: AnsatzParams
    channel: Channel
    residual: float
    method: SolverMethod
    degree: int
    potential: PotentialParams
    physical: PhysicalParams
    bracket: Tuple[float, float] = field(default=(math.nan, math.nan))

    @property
    def gamma_tilde(self) -> float:
        """E - M - C_ps."""
        return energy_quantities(self.energy, self.physical).gamma_tilde


def _require_general_path(pot: PotentialParams):
    if pot.a <= 0:
        raise DomainError(
            'The quasi-exact ansatz requires a > 0; '
            'use the special-case Coulomb solver for a = 0'
        )
    if pot.c < 0:
        raise DomainError(
            f'The quasi-exact path uses the attractive convention c >= 0, got {pot.c}'
        )


def ansatz_params(
    pot: PotentialParams, gamma_tilde: float, ch: Channel
) -> AnsatzParams:
    """Decaying ansatz parameters p = -sqrt(x a), q = x b / (2 p)."""
    if pot.a <= 0:
        raise DomainError(
            'The Gaussian ansatz requires a > 0; '
            'use the special-case solvers for a = 0'
        )
    if not gamma_tilde > 0:
        raise DomainError(
            f'The Gaussian ansatz requires gamma_tilde > 0, got {gamma_tilde}'
        )
    p = -math.sqrt(gamma_tilde * pot.a)
    q = gamma_tilde * pot.b / (2 * p)
    return AnsatzParams(p, q, ch.delta)


def _index_base(ch: Channel, convention: IndexConvention) -> int:
    base = ch.n + ch.index_exponent(convention) - 1
    if base == 0:
        raise DegenerateChannel(
            f'n + {ch.index_exponent(convention)} - 1 = 0 for n = {ch.n}, '
            f'kappa = {ch.kappa} ({IndexConvention(convention).value})'
        )
    return base


def constrained_b(
    pot: PotentialParams,
    ch: Channel,
    gamma_tilde: float,
    convention: IndexConvention = IndexConvention.regular_delta,
) -> float:
    """Linear strength b = c sqrt(a x) / (n + d - 1) on the constraint surface."""
    if pot.a <= 0 or not gamma_tilde > 0:
        raise DomainError('The constraint requires a > 0 and gamma_tilde > 0')
    base = _index_base(ch, convention)
    return pot.c * math.sqrt(pot.a * gamma_tilde) / base


def energy_residual(
    x: float,
    pot: PotentialParams,
    phys: PhysicalParams,
    ch: Channel,
    convention: IndexConvention = IndexConvention.regular_delta,
) -> float:
    """
    Residual of the energy equation at x = gamma_tilde.

    R(x) = (M + E) x - 2 sqrt(a x) (n + d - 3/2) + x^2 c^2 / (4 (n + d - 1)^2)
    with E = x + M + C_ps.
    """
    if x < 0:
        raise InvalidInput(f'x = gamma_tilde must be >= 0, got {x}')
    base = _index_base(ch, convention)
    energy = x + phys.mass + phys.c_ps
    shifted = base - 0.5
    return (
        (phys.mass + energy) * x
        - 2 * math.sqrt(pot.a) * math.sqrt(x) * shifted
        + x ** 2 * pot.c ** 2 / (4 * base ** 2)
    )


def _brackets(xs: np.ndarray, values: np.ndarray) -> List[Tuple[float, float]]:
    """Sign-change brackets, exact zeros as zero-width brackets."""
    found = []
    finite = np.isfinite(values)
    for i in range(len(xs)):
        if finite[i] and values[i] == 0:
            found.append((xs[i], xs[i]))
        elif (
            i + 1 < len(xs)
            and finite[i] and finite[i + 1]
            and values[i] != 0 and values[i + 1] != 0
            and np.sign(values[i]) != np.sign(values[i + 1])
        ):
            found.append((xs[i], xs[i + 1]))
    return found


def _polish(
    func: Callable[[float], float],
    bracket: Tuple[float, float],
    search: SearchConfig,
    xtol: float,
) -> float:
    lo, hi = bracket
    if lo == hi:
        return lo
    root, result = brentq(
        func, lo, hi, xtol=xtol, maxiter=search.max_iter, full_output=True,
        disp=False,
    )
    if not result.converged:
        best = root if math.isfinite(root) and lo <= root <= hi else (lo + hi) / 2
        residual = abs(func(best))
        logger.warning(tagged(
            'polish', f'No convergence in bracket [{lo:.6e}, {hi:.6e}] '
            f'after {result.iterations} iterations'
        ))
        raise NoConvergence(
            f'Root polish did not converge in bracket [{lo:.6e}, {hi:.6e}]',
            best=(float(best),),
            residual=float(residual),
        )
    return root


def solve_energy(
    pot: PotentialParams,
    phys: PhysicalParams,
    ch: Channel,
    search: SearchConfig = None,
) -> List[QuasiExactSolution]:
    """
    Solve the energy equation for every sign change in the search grid.

    The linear strength of ``pot`` is ignored: it is replaced by the
    constrained value at each root.
    """
    _require_general_path(pot)
    search = search or SearchConfig()
    convention = search.convention

    def residual(x: float) -> float:
        return energy_residual(x, pot, phys, ch, convention)

    xs = search.grid()
    values = np.array([residual(x) for x in xs])
    solutions = []
    for bracket in _brackets(xs, values):
        x = _polish(residual, bracket, search, search.tol_x)
        value = abs(residual(x))
        if value >= search.tol_root:
            logger.warning(tagged(
                'residual', f'Discarding x = {x:.12e} with |R| = {value:.3e}'
            ))
            continue
        b = constrained_b(pot, ch, x, convention)
        solved = replace(pot, b=b)
        solutions.append(QuasiExactSolution(
            energy=x + phys.mass + phys.c_ps,
            b=b,
            ansatz=ansatz_params(solved, x, ch),
            channel=ch,
            residual=value,
            method=SolverMethod.eq19,
            degree=ch.n - 1,
            potential=solved,
            physical=phys,
            bracket=bracket,
        ))
    logger.debug(tagged(
        'solve', f'{len(solutions)} energy-equation roots for {ch}'
    ))
    return sorted(solutions, key=lambda s: s.energy)


def termination_residual(
    x: float,
    b: float,
    pot: PotentialParams,
    phys: PhysicalParams,
    ch: Channel,
    degree: int,
) -> Tuple[float, float]:
    """Trailing coefficient a_{degree + 1} and factor Z_degree at (x, b)."""
    trial = replace(pot, b=b)
    ansatz = ansatz_params(trial, x, ch)
    canonical = canonical_coefficients(trial, phys, ch, x + phys.mass + phys.c_ps)
    series = coefficients(ansatz, canonical, degree + 1)
    return float(series.values[degree + 1]), float(series.Z[degree])


class _ReducedTermination:
    """
    Termination condition reduced to x alone.

    Z_degree = 0 fixes q^2 = 2 sqrt(a x) (degree + d + 1/2) - (M + E) x,
    the decaying root q <= 0 fixes b = 2 p q / x.
    """

    def __init__(self, pot, phys, ch, degree):
        self.pot = pot
        self.phys = phys
        self.ch = ch
        self.degree = degree
        self.shift = degree + ch.delta + 0.5
        self.boundary = None

    def q_squared(self, x: float) -> float:
        energy = x + self.phys.mass + self.phys.c_ps
        return (
            2 * math.sqrt(self.pot.a * x) * self.shift
            - (self.phys.mass + energy) * x
        )

    def b(self, x: float) -> float:
        if x == self.boundary:
            return 0.0
        q = -math.sqrt(max(self.q_squared(x), 0.0))
        return 2 * math.sqrt(self.pot.a * x) * -q / x

    def __call__(self, x: float) -> float:
        return termination_residual(
            x, self.b(x), self.pot, self.phys, self.ch, self.degree
        )[0]

    def scan_grid(self, xs: np.ndarray) -> np.ndarray:
        """Truncate the grid where q^2 turns negative, ending on q = 0."""
        q2 = np.array([self.q_squared(x) for x in xs])
        negative = np.flatnonzero(q2 < 0)
        if len(negative) == 0:
            return xs
        i = negative[0]
        if i == 0:
            return xs[:0]
        end = brentq(
            self.q_squared, xs[i - 1], xs[i], xtol=1e-300, maxiter=200,
        )
        self.boundary = end
        return np.append(xs[:i], end)


def _newton(system, seed, search: SearchConfig):
    """Damped Newton iteration with a forward-difference Jacobian."""
    point = np.array(seed, dtype=float)
    values = np.array(system(*point))
    norm = float(np.max(np.abs(values)))
    for _ in range(search.max_iter):
        if norm <= search.newton_tol:
            return point, norm
        steps = np.array([
            1e-7 * point[0],
            1e-7 * max(abs(point[1]), math.sqrt(abs(point[0])) * 1e-3, 1e-12),
        ])
        jacobian = np.empty((2, 2))
        for col in range(2):
            shifted = point.copy()
            shifted[col] += steps[col]
            jacobian[:, col] = (np.array(system(*shifted)) - values) / steps[col]
        try:
            delta = np.linalg.solve(jacobian, -values)
        except np.linalg.LinAlgError:
            break

        damping = 1.0
        for _ in range(40):
            trial = point + damping * delta
            if trial[0] > 0:
                trial_values = np.array(system(*trial))
                trial_norm = float(np.max(np.abs(trial_values)))
                if trial_norm < norm:
                    break
            damping /= 2
        else:
            break
        point, values, norm = trial, trial_values, trial_norm
    if norm <= search.newton_tol:
        return point, norm
    raise NoConvergence(
        f'Termination system did not converge from seed {tuple(seed)}',
        best=(float(point[0]), float(point[1])),
        residual=norm,
    )


def solve_by_termination(
    pot: PotentialParams,
    phys: PhysicalParams,
    ch: Channel,
    degree: int = None,
    search: SearchConfig = None,
) -> List[QuasiExactSolution]:
    """
    Solve the joint termination conditions for (E, b).

    Parameters
    ----------
    pot
        potential with a > 0 and c >= 0, its b is an unknown
    phys
        mass and pseudospin constant
    ch
        channel, ``degree`` defaults to ``ch.n - 1``
    degree
        polynomial degree n_r of the terminating series
    search
        scan grid and tolerances

    Returns
    -------
    list
        solutions with b >= 0, sorted by energy
    """
    _require_general_path(pot)
    search = search or SearchConfig()
    degree = ch.n - 1 if degree is None else degree
    if int(degree) != degree or degree < 0:
        raise InvalidInput(f'Polynomial degree must be >= 0, got {degree}')
    ch = ch.with_n(degree + 1)

    reduced = _ReducedTermination(pot, phys, ch, degree)
    xs = reduced.scan_grid(search.grid())
    values = np.array([reduced(x) for x in xs])

    def system(x: float, b: float) -> Tuple[float, float]:
        return termination_residual(x, b, pot, phys, ch, degree)

    solutions = []
    for bracket in _brackets(xs, values):
        x = _polish(reduced, bracket, search, xtol=1e-300)
        (x, b), norm = _newton(system, (x, reduced.b(x)), search)
        solved = replace(pot, b=b)
        solutions.append(QuasiExactSolution(
            energy=x + phys.mass + phys.c_ps,
            b=b,
            ansatz=ansatz_params(solved, x, ch),
            channel=ch,
            residual=norm,
            method=SolverMethod.recurrence,
            degree=degree,
            potential=solved,
            physical=phys,
            bracket=bracket,
        ))
    logger.debug(tagged(
        'solve', f'{len(solutions)} terminating solutions of degree {degree}'
    ))
    return sorted(solutions, key=lambda s: s.energy)


def compare_solutions(
    first: List[QuasiExactSolution], second: List[QuasiExactSolution]
) -> List[Tuple[QuasiExactSolution, float]]:
    """Pair each solution of ``first`` with |dE| to the nearest of ``second``."""
    paired = []
    for solution in first:
        diffs = [abs(solution.energy - other.energy) for other in second]
        paired.append((solution, min(diffs) if diffs else math.nan))
    return paired
