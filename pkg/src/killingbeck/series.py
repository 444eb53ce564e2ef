"""
Series coefficients of the lower component and their truncation.

The lower component is expanded as
G(r) = exp(p r^2 / 2 + q r) r^d sum_k a_k r^k with a_0 = 1.
Inserting it into the canonical equation gives the recurrence

    X_m a_m + Y_{m-1} a_{m-1} + Z_{m-2} a_{m-2}
        + (2pq - A4) a_{m-3} + (p^2 - A5) a_{m-4} = 0

with X_m = (m + d)(m + d - 1) + A1, Y_j = 2q(j + d) + A2
and Z_j = q^2 + 2p(j + d + 1/2) - A3.
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .model import CanonicalCoefficients, InvalidInput, KillingbeckError

if TYPE_CHECKING:  # pragma: no cover
    from .solver import AnsatzParams


class SingularRecurrence(KillingbeckError):
    """Leading recurrence factor X_m vanishes."""


@dataclass(frozen=True)
class SeriesCoefficients:
    """
    Recurrence output.

    ``values[k]`` is a_k and ``X[k]``, ``Y[k]``, ``Z[k]`` are the
    factors with index k, so that X[m], Y[m - 1] and Z[m - 2]
    multiply a_m, a_{m-1} and a_{m-2}.
    """

    values: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    ansatz: 'AnsatzParams'
    canonical: CanonicalCoefficients

    @property
    def K(self) -> int:
        """Highest computed index."""
        return len(self.values) - 1

    def polynomial(self, degree: int = None) -> Polynomial:
        """Polynomial sum_k a_k r^k, truncated after ``degree``."""
        stop = self.K if degree is None else min(degree, self.K)
        return Polynomial(self.values[:stop + 1])

    def recurrence_residual(self) -> np.ndarray:
        """Left-hand side of the recurrence for m = 1..K."""
        p, q = self.ansatz.p, self.ansatz.q
        c3 = 2 * p * q - self.canonical.A4
        c4 = p ** 2 - self.canonical.A5
        a = self.values
        residual = np.zeros(self.K)
        for m in range(1, self.K + 1):
            total = self.X[m] * a[m] + self.Y[m - 1] * a[m - 1]
            if m >= 2:
                total += self.Z[m - 2] * a[m - 2]
            if m >= 3:
                total += c3 * a[m - 3]
            if m >= 4:
                total += c4 * a[m - 4]
            residual[m - 1] = total
        return residual


def recurrence_factors(
    ansatz: 'AnsatzParams', canonical: CanonicalCoefficients, K: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Factor sequences X, Y and Z for indices 0..K."""
    d = ansatz.delta
    k = np.arange(K + 1, dtype=float)
    X = (k + d) * (k + d - 1) + canonical.A1
    Y = 2 * ansatz.q * (k + d) + canonical.A2
    Z = ansatz.q ** 2 + 2 * ansatz.p * (k + d + 0.5) - canonical.A3
    return X, Y, Z


def coefficients(
    ansatz: 'AnsatzParams', canonical: CanonicalCoefficients, K: int
) -> SeriesCoefficients:
    """Generate a_0..a_K from the four-term recurrence."""
    if K < 0:
        raise InvalidInput(f'Highest index K must be >= 0, got {K}')
    X, Y, Z = recurrence_factors(ansatz, canonical, K)
    c3 = 2 * ansatz.p * ansatz.q - canonical.A4
    c4 = ansatz.p ** 2 - canonical.A5

    a = np.zeros(K + 1)
    a[0] = 1.0
    for m in range(1, K + 1):
        if X[m] == 0:
            raise SingularRecurrence(
                f'X_{m} = 0 for exponent d = {ansatz.delta}; '
                'the exponent is not the regular root'
            )
        total = Y[m - 1] * a[m - 1]
        if m >= 2:
            total += Z[m - 2] * a[m - 2]
        if m >= 3:
            total += c3 * a[m - 3]
        if m >= 4:
            total += c4 * a[m - 4]
        a[m] = -total / X[m]
    return SeriesCoefficients(a, X, Y, Z, ansatz, canonical)


def termination_check(
    coeffs: SeriesCoefficients, degree: int, buffer: int = 6
) -> Tuple[bool, float]:
    """
    Check that the series terminates after ``degree``.

    Returns
    -------
    terminated
        whether every trailing |a_k| with degree < k <= degree + buffer
        is below 1e-10 times the largest leading |a_k|
    trailing
        largest trailing |a_k|
    """
    if degree < 0 or buffer < 1:
        raise InvalidInput('Degree must be >= 0 and buffer >= 1')
    if coeffs.K < degree + buffer:
        raise InvalidInput(
            f'Need coefficients up to index {degree + buffer}, have {coeffs.K}'
        )
    leading = np.max(np.abs(coeffs.values[:degree + 1]))
    trailing = float(np.max(np.abs(coeffs.values[degree + 1:degree + buffer + 1])))
    return bool(trailing < 1e-10 * leading), trailing


def explicit_coefficients(
    ansatz: 'AnsatzParams', canonical: CanonicalCoefficients
) -> Tuple[float, float, float]:
    """a_1, a_2 and a_3 in expanded product form."""
    X, Y, Z = recurrence_factors(ansatz, canonical, 3)
    c3 = 2 * ansatz.p * ansatz.q - canonical.A4
    a1 = -Y[0] / X[1]
    bracket = Y[0] * Y[1] / X[1] - Z[0]
    a2 = bracket / X[2]
    a3 = -c3 / X[3] + Z[1] * Y[0] / (X[1] * X[3]) - Y[2] * bracket / (X[2] * X[3])
    return float(a1), float(a2), float(a3)


def upper_coefficients(
    coeffs: SeriesCoefficients, kappa: int, degree: int = None
) -> np.ndarray:
    """
    Polynomial coefficients of the upper-component bracket.

    (d/dr - kappa/r) G = exp(p r^2 / 2 + q r) r^(d - 1) sum_k u_k r^k
    with u_k = (k + d - kappa) a_k + q a_{k-1} + p a_{k-2}.
    """
    stop = coeffs.K if degree is None else min(degree, coeffs.K)
    a = coeffs.values[:stop + 1]
    p, q, d = coeffs.ansatz.p, coeffs.ansatz.q, coeffs.ansatz.delta
    u = np.zeros(stop + 3)
    k = np.arange(stop + 1)
    u[:stop + 1] += (k + d - kappa) * a
    u[1:stop + 2] += q * a
    u[2:stop + 3] += p * a
    return u


def polynomial_nodes(coeffs: SeriesCoefficients, degree: int) -> int:
    """Number of positive real roots of the truncated polynomial."""
    poly = coeffs.polynomial(degree).trim()
    if poly.degree() < 1:
        return 0
    roots = poly.roots()
    scale = max(1.0, float(np.max(np.abs(roots))))
    real = roots[np.abs(roots.imag) <= 1e-9 * scale].real
    return int(np.count_nonzero(real > 0))
