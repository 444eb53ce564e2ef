"""
Fixed-step Runge-Kutta sweep of y'' = g(t) y, vectorized over energies.

The independent variable is t = ln r and
g = k0 + r (c1 + r (c2 + r (c3 + r c4))) with per-energy coefficients.
The kernel is compiled with numba when it is importable.
"""
import numpy as np


def _noop_jit(f, *args, **kwargs):
    return f


def _have_numba():
    try:
        import numba  # NOQA: F401

        return True
    except ImportError:
        return False


# True if importing numba succeeded
HAVE_NUMBA = _have_numba()

if HAVE_NUMBA:
    from numba import njit
else:
    njit = _noop_jit


@njit
def _coupling(r, k0, c1, c2, c3, c4):
    return k0 + r * (c1 + r * (c2 + r * (c3 + r * c4)))


@njit
def rk4_sweep(radii, k0, c1, c2, c3, c4, y, dy, h, renorm_every):
    """
    Integrate from ``radii[0]`` to ``radii[-1]``.

    Parameters
    ----------
    radii
        radii at every half step, ``2 * steps + 1`` entries
    k0
        energy-independent part of the coupling
    c1, c2, c3, c4
        per-energy coupling coefficients
    y, dy
        initial y and dy/dt per energy
    h
        signed step in t
    renorm_every
        steps between rescalings to unit sup-norm

    Returns
    -------
    tuple
        final y, final dy/dt and the number of sign changes of y
    """
    y = y.copy()
    dy = dy.copy()
    nodes = np.zeros(y.shape[0], dtype=np.int64)
    steps = (radii.shape[0] - 1) // 2
    half = 0.5 * h
    g2 = _coupling(radii[0], k0, c1, c2, c3, c4)
    for k in range(steps):
        g0 = g2
        g1 = _coupling(radii[2 * k + 1], k0, c1, c2, c3, c4)
        g2 = _coupling(radii[2 * k + 2], k0, c1, c2, c3, c4)

        k1y = dy
        k1d = g0 * y
        k2y = dy + half * k1d
        k2d = g1 * (y + half * k1y)
        k3y = dy + half * k2d
        k3d = g1 * (y + half * k2y)
        k4y = dy + h * k3d
        k4d = g2 * (y + h * k3y)

        y_new = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        dy = dy + h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d)
        nodes += np.where(y_new * y < 0, 1, 0)
        y = y_new

        if (k + 1) % renorm_every == 0:
            scale = np.maximum(np.abs(y), np.abs(dy))
            scale = np.where(scale > 0, scale, 1.0)
            y = y / scale
            dy = dy / scale
    return y, dy, nodes
