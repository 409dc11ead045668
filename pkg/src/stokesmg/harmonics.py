"""Harmonic mode pairs and the two-color Jacobi relaxation in Fourier space.

Under standard coarsening, the modes theta and theta + (pi, pi) alias to
the same coarse-grid mode.  A two-color (red-black) point relaxation
leaves each such pair invariant, so its action is a 2x2 complex matrix
per pair.  Matrices here are plain numpy arrays ordered so that index 0
is the low-frequency member of the pair and index 1 the aliased high
partner; the ideal coarse-grid projector is then literally diag(0, 1).

Red points are those with even index sum k1 + k2 and are relaxed first.
"""

import math
from dataclasses import dataclass

import numpy as np

from .stencil import Frequency, Stencil2D, symbol_grid

PI = math.pi


@dataclass(frozen=True)
class HarmonicPair:
    """A low-frequency base mode and its aliasing high-frequency partner.

    base lies in (-pi/2, pi/2]^2; high is base + (pi, pi) reduced into
    (-pi, pi]^2.
    """

    base: Frequency
    high: Frequency


def harmonics_of(base: Frequency) -> HarmonicPair:
    """Build the aliasing pair for a low-frequency base mode.

    Raises ValueError if base is not in (-pi/2, pi/2]^2.
    """
    if not base.is_low():
        raise ValueError(f"base frequency {base.as_tuple()} is outside (-pi/2, pi/2]^2")
    return HarmonicPair(base, Frequency(base.theta1 + PI, base.theta2 + PI))


def evaluate_mode(theta: Frequency, k: tuple[int, int], h: float = 1.0) -> complex:
    """Value of the grid mode exp(i theta . k) at integer grid index k.

    The physical point is x = (k1*h, k2*h); the value does not depend on
    h, which is accepted only for signature symmetry with grid code.
    """
    k1, k2 = k
    return complex(np.exp(1j * (theta.theta1 * k1 + theta.theta2 * k2)))


def jacobi_symbol(s: Stencil2D, theta: Frequency) -> complex:
    """Error-propagation symbol 1 - symbol(theta)/center of point Jacobi."""
    if s.center == 0:
        raise ValueError(f"stencil {s.name!r} has zero center coefficient")
    return 1.0 - complex(symbol_grid(s, theta.theta1, theta.theta2)) / s.center


def color_factors(s: Stencil2D, pair: HarmonicPair) -> tuple[np.ndarray, np.ndarray]:
    """The 2x2 representations of the red and black half-sweeps.

    Returns (red, black).  With a0, a1 the Jacobi symbols at the two pair
    members, the red factor relaxes even-sum points:

        red   = 1/2 [[a0 + 1, a1 - 1], [a0 - 1, a1 + 1]]
        black = 1/2 [[a0 + 1, 1 - a1], [1 - a0, a1 + 1]]
    """
    a0 = jacobi_symbol(s, pair.base)
    a1 = jacobi_symbol(s, pair.high)
    red = 0.5 * np.array([[a0 + 1, a1 - 1], [a0 - 1, a1 + 1]], dtype=complex)
    black = 0.5 * np.array([[a0 + 1, 1 - a1], [1 - a0, a1 + 1]], dtype=complex)
    return red, black


def two_color_rep(s: Stencil2D, pair: HarmonicPair) -> np.ndarray:
    """Representation of one full undamped red-black Jacobi sweep.

    The black half-sweep uses fresh red values, so the composite matrix
    is black @ red.
    """
    red, black = color_factors(s, pair)
    return black @ red


def rep_grid(s: Stencil2D, t1, t2) -> np.ndarray:
    """Vectorized two-color representation over base-frequency arrays.

    t1, t2 are broadcastable arrays of base frequencies; the result has
    shape broadcast(t1, t2).shape + (2, 2).
    """
    if s.center == 0:
        raise ValueError(f"stencil {s.name!r} has zero center coefficient")
    a0 = 1.0 - symbol_grid(s, t1, t2) / s.center
    a1 = 1.0 - symbol_grid(s, np.asarray(t1) + PI, np.asarray(t2) + PI) / s.center
    out = np.empty(a0.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 0.25 * ((a0 + 1) ** 2 + (1 - a1) * (a0 - 1))
    out[..., 0, 1] = 0.25 * ((a0 + 1) * (a1 - 1) + (1 - a1) * (a1 + 1))
    out[..., 1, 0] = 0.25 * ((1 - a0) * (a0 + 1) + (a1 + 1) * (a0 - 1))
    out[..., 1, 1] = 0.25 * ((1 - a0) * (a1 - 1) + (a1 + 1) ** 2)
    return out


def projected_eigenvalue_grid(s: Stencil2D, t1, t2) -> np.ndarray:
    """Nonzero eigenvalue of diag(0,1) @ rep over base-frequency arrays.

    The projected matrix has a zero first row, so this is just the
    (1, 1) entry of the representation.
    """
    if s.center == 0:
        raise ValueError(f"stencil {s.name!r} has zero center coefficient")
    a0 = 1.0 - symbol_grid(s, t1, t2) / s.center
    a1 = 1.0 - symbol_grid(s, np.asarray(t1) + PI, np.asarray(t2) + PI) / s.center
    return 0.25 * ((1 - a0) * (a1 - 1) + (a1 + 1) ** 2)


def _lattice_index(theta: float, n_grid: int) -> int:
    j = theta * n_grid / (2.0 * PI)
    ji = round(j)
    if abs(j - ji) > 1e-9:
        raise ValueError(f"frequency {theta} is not a multiple of 2*pi/{n_grid}")
    return ji % n_grid


def numerical_lfa_oracle(s: Stencil2D, pair: HarmonicPair, n_grid: int) -> np.ndarray:
    """Measure the two-color sweep matrix on a concrete periodic grid.

    Performs one undamped red-black Jacobi sweep (red = even index sum,
    first) on each of the pair's modes over an n_grid x n_grid periodic
    grid and projects the images back onto the pair by discrete inner
    products.  Both pair frequencies must lie on the sampling lattice
    (integer multiples of 2*pi/n_grid) so the modes are exactly periodic.

    This is an independent check of the closed-form representation; no
    symbols are used.
    """
    if n_grid % 2 != 0 or n_grid < 8:
        raise ValueError(f"n_grid must be even and >= 8, got {n_grid}")
    for th in (pair.base, pair.high):
        _lattice_index(th.theta1, n_grid)
        _lattice_index(th.theta2, n_grid)
    if s.center == 0:
        raise ValueError(f"stencil {s.name!r} has zero center coefficient")

    k1, k2 = np.meshgrid(np.arange(n_grid), np.arange(n_grid), indexing="ij")
    red = (k1 + k2) % 2 == 0
    modes = [np.exp(1j * (th.theta1 * k1 + th.theta2 * k2))
             for th in (pair.base, pair.high)]

    def apply_periodic(g):
        out = np.zeros_like(g)
        for (o1, o2), coef in s.entries.items():
            out += coef * np.roll(g, (-o1, -o2), axis=(0, 1))
        return out

    m = np.zeros((2, 2), dtype=complex)
    for col, phi in enumerate(modes):
        e = phi.copy()
        e = np.where(red, e - apply_periodic(e) / s.center, e)
        e = np.where(~red, e - apply_periodic(e) / s.center, e)
        for row, psi in enumerate(modes):
            m[row, col] = np.mean(e * np.conj(psi))
    return m
