"""Compact 2D difference stencils and their Fourier symbols.

A stencil is a finite map from integer offsets (k1, k2) to real
coefficients that already carry their mesh scaling (1/h^p).  The Fourier
symbol of a stencil is the scalar multiplier it applies to the grid mode
exp(i theta . x / h); evaluating symbols over frequency grids is the
workhorse of the smoothing analysis.
"""

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def reduce_angle(t: float) -> float:
    """Reduce an angle into the half-open interval (-pi, pi]."""
    r = math.remainder(t, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


@dataclass(frozen=True)
class Frequency:
    """A Fourier frequency theta = (theta1, theta2).

    Components are normalized into (-pi, pi] on construction, so two
    frequencies that differ by a multiple of 2*pi compare equal up to
    floating-point reduction error.
    """

    theta1: float
    theta2: float

    def __post_init__(self):
        object.__setattr__(self, "theta1", reduce_angle(self.theta1))
        object.__setattr__(self, "theta2", reduce_angle(self.theta2))

    def as_tuple(self) -> tuple[float, float]:
        return (self.theta1, self.theta2)

    def is_low(self) -> bool:
        """True if the frequency lies in the low range (-pi/2, pi/2]^2."""
        half = 0.5 * math.pi
        return (-half < self.theta1 <= half) and (-half < self.theta2 <= half)

    def s_coordinates(self) -> tuple[float, float]:
        """The (sin^2(theta1/2), sin^2(theta2/2)) coordinates."""
        return (math.sin(0.5 * self.theta1) ** 2, math.sin(0.5 * self.theta2) ** 2)


@dataclass(frozen=True)
class Stencil2D:
    """A compact difference stencil with fully scaled coefficients.

    Attributes
    ----------
    entries : dict
        Map from integer offset (k1, k2) to the coefficient, with the
        1/h^p mesh scaling already applied.  Must contain (0, 0).
    h : float
        Mesh size the coefficients were built for.
    name : str
        Identifier tag, e.g. "laplacian".
    """

    entries: dict
    h: float
    name: str

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError(f"mesh size must be positive, got {self.h}")
        if (0, 0) not in self.entries:
            raise ValueError("stencil must contain the center offset (0, 0)")

    @property
    def center(self) -> float:
        """Coefficient at offset (0, 0)."""
        return self.entries[(0, 0)]


_UNSCALED = {
    # 5-point negative Laplacian, scale 1/h^2
    "laplacian": {(0, 0): 4.0, (1, 0): -1.0, (-1, 0): -1.0,
                  (0, 1): -1.0, (0, -1): -1.0},
    # central first derivatives, scale 1/(2h)
    "ddx": {(0, 0): 0.0, (-1, 0): -1.0, (1, 0): 1.0},
    "ddy": {(0, 0): 0.0, (0, -1): -1.0, (0, 1): 1.0},
    # 13-point biharmonic, scale 1/h^4
    "biharmonic": {(0, 0): 20.0,
                   (1, 0): -8.0, (-1, 0): -8.0, (0, 1): -8.0, (0, -1): -8.0,
                   (1, 1): 2.0, (1, -1): 2.0, (-1, 1): 2.0, (-1, -1): 2.0,
                   (2, 0): 1.0, (-2, 0): 1.0, (0, 2): 1.0, (0, -2): 1.0},
    # negative 5-point Laplacian on the doubled mesh, scale 1/(4h^2)
    "laplacian_2h": {(0, 0): 4.0, (2, 0): -1.0, (-2, 0): -1.0,
                     (0, 2): -1.0, (0, -2): -1.0},
}

OPERATOR_KINDS = ("laplacian", "ddx", "ddy", "biharmonic", "laplacian_2h",
                  "pressure_block")

_C_DEPENDENT = ("pressure_block",)


def make_operator(kind: str, h: float = 1.0, c: float | None = None) -> Stencil2D:
    """Build one of the built-in difference operators.

    Parameters
    ----------
    kind : str
        One of ``OPERATOR_KINDS``.  "pressure_block" is the stabilized
        pressure operator c*h^2*biharmonic + laplacian_2h and requires c.
    h : float
        Mesh size, > 0.
    c : float, optional
        Stabilization parameter, required (and > 0) for c-dependent kinds.
    """
    if h <= 0:
        raise ValueError(f"mesh size must be positive, got {h}")
    if kind in _C_DEPENDENT:
        if c is None:
            raise ValueError(f"operator {kind!r} requires the stabilization parameter c")
        if c <= 0:
            raise ValueError(f"stabilization parameter must be positive, got {c}")
    elif kind not in _UNSCALED:
        raise ValueError(f"unknown operator kind {kind!r}; choose from {OPERATOR_KINDS}")

    if kind == "pressure_block":
        entries = {}
        for off, val in _UNSCALED["biharmonic"].items():
            entries[off] = c * h**2 * val / h**4
        for off, val in _UNSCALED["laplacian_2h"].items():
            entries[off] = entries.get(off, 0.0) + val / (4.0 * h**2)
        return Stencil2D(entries, h, kind)

    scale = {"laplacian": 1.0 / h**2,
             "ddx": 1.0 / (2.0 * h),
             "ddy": 1.0 / (2.0 * h),
             "biharmonic": 1.0 / h**4,
             "laplacian_2h": 1.0 / (4.0 * h**2)}[kind]
    entries = {off: val * scale for off, val in _UNSCALED[kind].items()}
    return Stencil2D(entries, h, kind)


def symbol_grid(s: Stencil2D, t1, t2):
    """Fourier symbol of the stencil at frequencies (t1, t2).

    t1, t2 may be scalars or broadcastable numpy arrays; the result is
    complex with the same shape.
    """
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    out = np.zeros(np.broadcast(t1, t2).shape, dtype=complex)
    for (k1, k2), coef in s.entries.items():
        out += coef * np.exp(1j * (t1 * k1 + t2 * k2))
    return out


def symbol(s: Stencil2D, theta: Frequency) -> complex:
    """Fourier symbol sum_k l_k exp(i theta . k) at a single frequency."""
    return complex(symbol_grid(s, theta.theta1, theta.theta2))


def apply_stencil(s: Stencil2D, g: np.ndarray, point: tuple[int, int]) -> float:
    """Apply the stencil to grid function g at an index pair.

    Every accessed index must lie inside g; an out-of-range offset raises
    IndexError (negative indices are rejected rather than wrapped).
    """
    i, j = point
    acc = 0.0
    n1, n2 = g.shape
    for (k1, k2), coef in s.entries.items():
        a, b = i + k1, j + k2
        if not (0 <= a < n1 and 0 <= b < n2):
            raise IndexError(f"stencil offset ({k1}, {k2}) at point {point} "
                             f"leaves the grid of shape {g.shape}")
        acc += coef * g[a, b]
    return acc
