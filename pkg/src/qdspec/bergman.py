"""Sharp boundary-to-area quotient for holomorphic functions.

S_Omega is the infimum of  int_{bdry} |u|^2 / int_Omega |u|^2  over
nonzero holomorphic u with square-integrable trace.  It equals the
zero-parameter slope of the first boundary-Laplacian eigenvalue,
lim_{a -> 0} mu_Omega(a)/a, and is bounded below by 2 sqrt(pi/area)
with equality exactly for disks; both facts are checked numerically
here.

The computation is a Galerkin restriction to holomorphic polynomials
about the centroid (dense in the Bergman space of our domain classes),
giving a generalized eigenvalue problem B w = s A w between the
boundary and domain Gram matrices of the scaled monomials.  The domain
Gram reduces to a boundary contour integral through the complex Green
identity

    int_Omega z^m conj(z)^n dA = (1 / (2i(n+1))) oint z^m conj(z)^{n+1} dz,

so a single quadrature engine serves both matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .geometry import BoundaryCurve, build_grid

__all__ = ["GramPair", "GramConditioningError", "gram_pair", "s_omega", "carleman_check", "slope_check"]


class GramConditioningError(RuntimeError):
    pass


@dataclass(frozen=True)
class GramPair:
    """Domain and boundary Gram matrices of scaled monomials.

    Monomials are ((z - z0)/rho)^m for m = 0..N; A is the domain Gram
    (positive definite), B the boundary Gram (positive semidefinite),
    so A[0, 0] is the area and B[0, 0] the perimeter.
    """

    degree: int
    center: complex
    rho: float
    domain_gram: np.ndarray
    boundary_gram: np.ndarray

    def hermiticity_defects(self) -> tuple[float, float]:
        """Max asymmetry of each Gram relative to its largest entry."""
        a, b = self.domain_gram, self.boundary_gram
        da = float(np.max(np.abs(a - a.conj().T)) / max(np.max(np.abs(a)), 1e-300))
        db = float(np.max(np.abs(b - b.conj().T)) / max(np.max(np.abs(b)), 1e-300))
        return da, db


def gram_pair(curve: BoundaryCurve, N: int, M: int = 1024) -> GramPair:
    """Assemble the Gram pair by boundary quadrature only."""
    if N > 40:
        raise ValueError("degree N must be at most 40")
    g = build_grid(curve, M)
    dt = 2.0 * math.pi / M
    z, zp = g.points, g.velocities
    area = float(np.real(np.sum(np.conj(z) * zp) * dt / 2j))
    center = complex(np.sum(z * np.conj(z) * zp) * dt / 2j) / area
    rho = float(np.min(np.abs(z - center)))

    rel = (z - center) / rho
    powers = rel[None, :] ** np.arange(N + 1)[:, None]          # (N+1, M)
    B = (powers * g.weights) @ powers.conj().T
    # A_{mn} = (1/(2i(n+1))) oint phi^m conj(phi^n) conj(z - z0) dz; the
    # leftover conj(z - z0) is the antiderivative factor of the Green
    # reduction and is deliberately unscaled.
    ncol = np.arange(N + 1)
    base = (powers * (np.conj(z - center) * zp * dt)[None, :]) @ powers.conj().T
    A = base / (2j * (ncol[None, :] + 1))
    return GramPair(degree=N, center=center, rho=rho, domain_gram=A, boundary_gram=B)


def _smallest_pair(pair: GramPair):
    A = 0.5 * (pair.domain_gram + pair.domain_gram.conj().T)
    B = 0.5 * (pair.boundary_gram + pair.boundary_gram.conj().T)
    try:
        vals, vecs = sla.eigh(B, A)
    except (sla.LinAlgError, ValueError) as exc:
        raise GramConditioningError("reduce N or rescale") from exc
    if vals[0] <= 0:
        raise GramConditioningError("reduce N or rescale")
    return float(vals[0]), vecs[:, 0]


def s_omega(curve: BoundaryCurve, N: int = 25, M: int = 1024) -> dict:
    """Galerkin value of S_Omega at polynomial degree N.

    Returns the smallest generalized eigenvalue and its coefficient
    vector in the scaled-monomial basis; the generalized eigenvector
    property is exactly the discrete stationarity relation
    S * (A w) = (B w).
    """
    pair = gram_pair(curve, N, M)
    s, w = _smallest_pair(pair)
    return {"S": s, "coefficients": w, "gram": pair}


def carleman_check(curve: BoundaryCurve, N: int = 25, M: int = 1024) -> dict:
    """Compare S_Omega against the sharp disk bound 2 sqrt(pi/area)."""
    s = s_omega(curve, N, M)["S"]
    g = build_grid(curve, M)
    dt = 2.0 * math.pi / M
    area = float(np.real(np.sum(np.conj(g.points) * g.velocities) * dt / 2j))
    bound = 2.0 * math.sqrt(math.pi / area)
    return {"S": s, "bound": bound, "margin": s - bound, "area": area}


def stabilized_s_omega(curve: BoundaryCurve, start: int = 10, step: int = 5,
                       max_degree: int = 40, tol: float = 1e-6, M: int = 1024) -> dict:
    """Increase the degree until |S(N) - S(N+step)| < tol.

    S(N) is nonincreasing in N (nested trial spaces), so stabilization
    certifies convergence from above.
    """
    table = []
    N = start
    s_prev = s_omega(curve, N, M)["S"]
    table.append((N, s_prev))
    while N + step <= max_degree:
        s_next = s_omega(curve, N + step, M)["S"]
        table.append((N + step, s_next))
        if abs(s_next - s_prev) < tol:
            return {"S": s_next, "N": N + step, "table": table}
        N += step
        s_prev = s_next
    raise GramConditioningError("reduce N or rescale: no stabilization within degree budget")


def slope_check(curve: BoundaryCurve, a_values, mps_solver, N: int = 25, M: int = 1024) -> dict:
    """Compare the measured small-parameter slope of mu(a)/a against S_Omega.

    ``a_values`` must be small (<= 1e-2) and sorted descending; the
    extrapolant is the Richardson limit of the ratios, which converge
    linearly in a.
    """
    a_values = sorted(a_values, reverse=True)
    if a_values[0] > 1e-2:
        raise ValueError("slope check expects a values at most 1e-2")
    ratios = []
    for a in a_values:
        mu = mps_solver.mu_first_value(a)
        ratios.append(mu / a)
    # linear-in-a Richardson step from the two smallest parameters
    a1, a2 = a_values[-2], a_values[-1]
    r1, r2 = ratios[-2], ratios[-1]
    extrapolant = r2 + (r2 - r1) * a2 / (a1 - a2)
    s = stabilized_s_omega(curve, start=min(N, 15), max_degree=max(N, 30), M=M)["S"]
    return {
        "a_values": list(a_values),
        "ratios": ratios,
        "limit_estimate": extrapolant,
        "S": s,
        "discrepancy": abs(extrapolant - s),
    }
