"""Closed-form optima for the stabilized pressure operator.

Analytic expressions for the extreme projected eigenvalues of the
two-color Jacobi sweep applied to the pressure block c*h^2*biharmonic +
laplacian_2h, as functions of the stabilization parameter c, together
with the derived optimal damping omega_opt(c) and factor rho_opt(c),
their limits, and the zone boundaries.  The frequency sweep in
``stokesmg.smoothing`` is the independent referee for every expression
here; all surds are evaluated exactly as displayed, without algebraic
simplification.

c = 1/8 is a removable singularity of the general expressions (matching
(1-8c)^2 factors cancel); within |c - 1/8| <= 1e-6 the dedicated values
are returned instead of evaluating the 0/0 form.
"""

import math
from dataclasses import dataclass

# Poisson block: extreme eigenvalues are 0 and -1/8, hence these optima.
POISSON_OMEGA = 16.0 / 17.0
POISSON_RHO = 1.0 / 17.0

# pressure block at c = 1/8: extrema (1/49, -23/98)
RHO_AT_C_EIGHTH = 25.0 / 217.0
# damping at c = 1/8 consistent with 2/(2 - s_max - s_min); also the
# limit of omega_opt(c) as c -> 1/8
OMEGA_AT_C_EIGHTH = 28.0 / 31.0
# alternative tabulated candidate; fails the optimum identity by a
# factor of 2 and is kept only so the verification table can report
# which value the sweep supports
OMEGA_AT_C_EIGHTH_ALT = 98.0 / 217.0

RHO_LIMIT_LARGE_C = 11.0 / 43.0
OMEGA_LIMIT_LARGE_C = 50.0 / 43.0
OMEGA_GLOBAL_MIN_REF = 0.834733
C0_REF = 0.0360548

_C_EIGHTH_WINDOW = 1e-6


@dataclass(frozen=True)
class CZoneReport:
    """Zone bounds for rho_opt at a given stabilization parameter."""

    c: float
    rho_lower: float
    rho_upper: float
    zone_tag: str  # "above_1_27" or "below_1_27"


def _radicand(c: float) -> float:
    # 82944 c^4 - 6912 c^3 + 336 c^2 + 24 c + 1, positive for all c > 0
    return (((82944.0 * c - 6912.0) * c + 336.0) * c + 24.0) * c + 1.0


def _shared_denominator(c: float) -> float:
    poly = ((((((52199424.0 * c - 2985984.0) * c - 2115072.0) * c + 157248.0) * c
              + 2736.0) * c - 36.0) * c - 1.0)
    r = _radicand(c)
    return poly + r * math.sqrt(r)


def projected_eigenvalue_s(s1: float, s2: float, c: float) -> float:
    """Nonzero projected eigenvalue of the pressure block in s-coordinates.

    s_i = sin^2(theta_i / 2); the low-frequency box maps to [0, 1/2]^2.
    This rational form is the cross-check target for the symbol-based
    eigenvalue computed in ``stokesmg.harmonics``.
    """
    d = 1.0 + 20.0 * c
    q = s1 - s1 * s1 + s2 - s2 * s2
    t = s1 + s2
    return (4.0 * (-q - 4.0 * c * (t - 2.0) ** 2) * (q + 4.0 * c * t * t)
            + (d - 2.0 * q - 8.0 * c * (t - 2.0) ** 2) ** 2) / (d * d)


def eigenvalue_at_origin(c: float) -> float:
    """Projected eigenvalue at s = (0, 0); this is s_max for every c > 0."""
    if c <= 0:
        raise ValueError(f"stabilization parameter must be positive, got {c}")
    return ((1.0 - 12.0 * c) / (1.0 + 20.0 * c)) ** 2


def critical_point(c: float) -> float:
    """Interior stationary point s1 = s2 = s* of the projected eigenvalue.

    Valid for c > 0 away from the removable singularity at c = 1/8; the
    returned value lies in [0, 1/2] and the eigenvalue gradient vanishes
    there.
    """
    if c <= 0:
        raise ValueError(f"stabilization parameter must be positive, got {c}")
    if abs(c - 0.125) <= 1e-9:
        raise ValueError("critical point formula degenerates at c = 1/8")
    num = -1.0 + 36.0 * c - 480.0 * c * c + math.sqrt(_radicand(c))
    return -num / (96.0 * c * (-1.0 + 8.0 * c))


def eigenvalue_at_critical(c: float) -> float:
    """Projected eigenvalue at the critical point; this is s_min.

    Lies in (-1, 0) for every admissible c.
    """
    if c <= 0:
        raise ValueError(f"stabilization parameter must be positive, got {c}")
    if abs(c - 0.125) <= 1e-9:
        raise ValueError("closed form degenerates at c = 1/8")
    poly = ((((((20348928.0 * c - 3649536.0) * c + 483840.0) * c - 5184.0) * c
              - 1008.0) * c + 36.0) * c + 1.0)
    r = _radicand(c)
    num = poly - r * math.sqrt(r)
    den = 1728.0 * c * c * (1.0 - 8.0 * c) ** 2 * (1.0 + 20.0 * c) ** 2
    return num / den


def rho_opt_closed(c: float) -> float:
    """Optimal one-stage smoothing factor of the pressure block."""
    if c <= 0:
        raise ValueError(f"stabilization parameter must be positive, got {c}")
    if abs(c - 0.125) <= _C_EIGHTH_WINDOW:
        return RHO_AT_C_EIGHTH
    poly = ((((((-4423680.0 * c - 2985984.0) * c + 539136.0) * c - 63936.0) * c
              + 2736.0) * c - 36.0) * c - 1.0)
    r = _radicand(c)
    return (poly + r * math.sqrt(r)) / _shared_denominator(c)


def omega_opt_closed(c: float) -> float:
    """Optimal one-stage damping parameter of the pressure block."""
    if c <= 0:
        raise ValueError(f"stabilization parameter must be positive, got {c}")
    if abs(c - 0.125) <= _C_EIGHTH_WINDOW:
        return OMEGA_AT_C_EIGHTH
    num = 3456.0 * (1.0 - 8.0 * c) ** 2 * c * c * (20.0 * c + 1.0) ** 2
    return num / _shared_denominator(c)


def poisson_optimum() -> tuple[float, float]:
    """Optimal (omega, rho) of the two-color Jacobi sweep for the Laplacian."""
    return POISSON_OMEGA, POISSON_RHO


def find_c0(tol: float = 1e-8) -> float:
    """Root of rho_opt(c) = 11/43 in (1/28, 1/27), by bisection.

    rho_opt is monotone decreasing on the bracket; a sign change is
    verified before bisecting and its absence raises RuntimeError, which
    would indicate a defect in the closed forms.
    """
    lo, hi = 1.0 / 28.0, 1.0 / 27.0
    target = RHO_LIMIT_LARGE_C
    flo = rho_opt_closed(lo) - target
    fhi = rho_opt_closed(hi) - target
    if flo <= 0 or fhi >= 0:
        raise RuntimeError(f"root not bracketed: f(1/28)={flo:.3e}, f(1/27)={fhi:.3e}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rho_opt_closed(mid) - target > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zone_of(c: float, check_tol: float = 1e-12) -> CZoneReport:
    """Tabulated zone bounds for rho_opt(c), verified against the value.

    For c > 1/27 the tabulated zone is [25/217, 11/43]; for 0 < c <= 1/27
    it is [rho_opt(1/27), 1), inclusive at the left endpoint.  The check
    raises ValueError when rho_opt(c) falls outside the zone.  That
    genuinely happens for c in roughly (0.1252, 0.1346): the true curve
    dips to about 0.1151262 at c = 0.12946, which is 8.1e-5 below the
    tabulated lower bound 25/217; see the package notes.
    """
    if c <= 0:
        raise ValueError(f"stabilization parameter must be positive, got {c}")
    rho = rho_opt_closed(c)
    if c > 1.0 / 27.0:
        report = CZoneReport(c, RHO_AT_C_EIGHTH, RHO_LIMIT_LARGE_C, "above_1_27")
    else:
        report = CZoneReport(c, rho_opt_closed(1.0 / 27.0), 1.0, "below_1_27")
    if not (report.rho_lower - check_tol <= rho <= report.rho_upper + check_tol):
        raise ValueError(f"rho_opt({c}) = {rho:.9f} violates the tabulated zone "
                         f"[{report.rho_lower:.9f}, {report.rho_upper:.9f}]")
    return report
