"""The parameter map between Dirac and boundary-Laplacian eigenpairs.

The bridge is theta_factor(theta) = (1 - sin theta)/cos theta, a strictly
decreasing bijection of (-pi/2, pi/2) onto (0, +inf), equal to
tan(pi/4 - theta/2) by the half-angle identity.  A Dirac pair
(theta, lambda) with lambda > m corresponds to the boundary pair
(a, mu) = ((lambda + m) * theta_factor(theta), lambda^2 - m^2), and the
inverse map recovers (theta, lambda) from (a, mu).

Transfers between a reference disk and another domain locate parameters
through monotone callbacks supplied by the caller (closed-form on the
disk, particular-solutions solver elsewhere); each callback must declare
its bracket and monotonicity direction so the bisection stays safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.optimize import brentq

__all__ = [
    "ParamQuad",
    "MonotoneCallback",
    "TransferUndefinedError",
    "ZigzagExcludedError",
    "vartheta",
    "vartheta_inv",
    "theta_factor_extended",
    "t_map",
    "t_inv",
    "transfer_a",
    "transfer_theta",
    "neg_mass_cross",
]

HALF_PI = math.pi / 2


class ZigzagExcludedError(ValueError):
    """Raised when theta touches +-pi/2, where this parametrization degenerates."""


class TransferUndefinedError(ValueError):
    """Raised when a transfer target lies outside the evaluator's range."""


@dataclass(frozen=True)
class ParamQuad:
    """A consistent Dirac/boundary parameter tuple (theta, lam, a, mu; m)."""

    theta: float
    lam: float
    a: float
    mu: float
    m: float

    def residuals(self) -> tuple[float, float]:
        """Defects of the two defining relations (should both be ~0)."""
        ra = self.a - (self.lam + self.m) * vartheta(self.theta)
        rmu = self.mu - (self.lam**2 - self.m**2)
        return ra, rmu


@dataclass(frozen=True)
class MonotoneCallback:
    """A monotone evaluator with a declared bracket.

    ``direction`` is 'increasing' or 'decreasing'; ``bracket`` is an
    (lo, hi) interval on which fn is defined and monotone.
    """

    fn: Callable[[float], float]
    bracket: tuple[float, float]
    direction: str

    def __post_init__(self):
        if self.direction not in ("increasing", "decreasing"):
            raise ValueError("direction must be 'increasing' or 'decreasing'")
        if not self.bracket[0] < self.bracket[1]:
            raise ValueError("bracket must satisfy lo < hi")

    def solve(self, target: float, xtol_rel: float = 1e-13) -> float:
        """Parameter value where fn equals target, by bracketed root finding."""
        lo, hi = self.bracket
        flo, fhi = self.fn(lo), self.fn(hi)
        s = 1.0 if self.direction == "increasing" else -1.0
        if not (min(flo, fhi) <= target <= max(flo, fhi)):
            raise TransferUndefinedError(
                f"transfer undefined: target {target} outside callback range ({flo}, {fhi})"
            )
        xtol = xtol_rel * max(abs(lo), abs(hi), 1.0)
        return brentq(lambda x: s * (self.fn(x) - target), lo, hi, xtol=xtol, rtol=4e-16)


def vartheta(theta: float) -> float:
    """(1 - sin theta)/cos theta on (-pi/2, pi/2), computed stably.

    tan(pi/4 - theta/2) avoids the 0/0 cancellation near theta = pi/2.
    """
    if not -HALF_PI < theta < HALF_PI:
        raise ZigzagExcludedError(f"zigzag excluded: theta = {theta}")
    return math.tan(0.25 * math.pi - 0.5 * theta)


def theta_factor_extended(theta: float) -> float:
    """(1 - sin theta)/cos theta for any theta with cos theta != 0.

    Negative on (pi/2, 3pi/2); used by the disk spectrum scans that cover
    the full parameter circle.
    """
    c = math.cos(theta)
    if abs(c) < 1e-14:
        raise ZigzagExcludedError(f"zigzag excluded: theta = {theta}")
    return (1.0 - math.sin(theta)) / c


def vartheta_inv(y: float) -> float:
    """Inverse of vartheta: pi/2 - 2 atan(y), for y > 0."""
    if y <= 0:
        raise ValueError("vartheta_inv requires y > 0")
    return HALF_PI - 2.0 * math.atan(y)


def t_map(theta: float, lam: float, m: float = 0.0) -> tuple[float, float]:
    """(theta, lambda) -> (a, mu) = ((lambda + m) vartheta(theta), lambda^2 - m^2)."""
    if lam <= m:
        raise ValueError(f"t_map requires lambda > m (got lambda={lam}, m={m})")
    return (lam + m) * vartheta(theta), lam * lam - m * m


def t_inv(a: float, mu: float, m: float = 0.0) -> tuple[float, float]:
    """(a, mu) -> (theta, lambda); exact inverse of t_map."""
    if a <= 0 or mu <= 0:
        raise ValueError("t_inv requires a > 0 and mu > 0")
    lam = math.sqrt(mu + m * m)
    return vartheta_inv(a / (lam + m)), lam


def transfer_a(theta: float, m: float, lam_disk_value: float, mu_evaluator: MonotoneCallback) -> float:
    """Boundary parameter a with mu_Omega(a) = lambda_D(theta)^2 - m^2.

    This is the pointwise transfer of a Dirac comparison at theta into a
    boundary-Laplacian comparison; the target must lie in the evaluator's
    declared range (0, Lambda_Omega).
    """
    if mu_evaluator.direction != "increasing":
        raise ValueError("mu evaluator must be declared increasing")
    target = lam_disk_value**2 - m * m
    if target <= 0:
        raise TransferUndefinedError("transfer undefined: lambda_D^2 - m^2 must be positive")
    return mu_evaluator.solve(target)


def transfer_theta(a: float, m: float, mu_disk_value: float, lam_evaluator: MonotoneCallback) -> float:
    """Angle theta with lambda_Omega(theta) = sqrt(mu_D(a) + m^2).

    Mirrored transfer of a boundary comparison at a into a Dirac
    comparison at theta.
    """
    if lam_evaluator.direction != "decreasing":
        raise ValueError("lambda evaluator must be declared decreasing")
    if mu_disk_value <= 0:
        raise TransferUndefinedError("transfer undefined: mu_D(a) must be positive")
    target = math.sqrt(mu_disk_value + m * m)
    return lam_evaluator.solve(target)


def neg_mass_cross(s_omega: float, m: float, area: float | None = None) -> dict:
    """Crossing angle for the level |m| when the mass is negative.

    Returns theta_star = vartheta_inv(2|m| / S_Omega) together with the
    area-based lower bound vartheta_inv(|m| sqrt(area/pi)) when the area
    is supplied (equality exactly for disks), and the mirrored value
    pi - vartheta_inv(2|m| / S_Omega) valid for positive mass on the
    complementary parameter branch.
    """
    if s_omega <= 0:
        raise ValueError("s_omega must be positive")
    if m >= 0:
        raise ValueError("neg_mass_cross expects m < 0")
    am = abs(m)
    theta_star = vartheta_inv(2.0 * am / s_omega)
    out = {
        "theta_star": theta_star,
        "mirror_theta_star": math.pi - theta_star,
    }
    if area is not None:
        out["lower_bound"] = vartheta_inv(am * math.sqrt(area / math.pi))
        out["mirror_upper_bound"] = math.pi - out["lower_bound"]
    return out
