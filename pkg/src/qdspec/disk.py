"""Disk spectra of the boundary-parameter Laplacian and Dirac families.

On a disk of radius R, separation of variables in polar coordinates
turns the eigenvalue problem -Delta u = mu u with boundary condition
2 conj(nu) dbar(u) + a u = 0 into the implicit equation

    a R J_k(x) = x J_{k+1}(x),        x = R sqrt(mu),

one equation per angular order k (signed; negative orders enter through
J_{-k} = (-1)^k J_k).  The derivation uses 2 conj(nu) dbar = d_r +
(i/r) d_phi on the circle and J_k' - (k/x) J_k = -J_{k+1}; it is
validated against the independent particular-solutions solver in the
test suite before anything downstream trusts it.

For fixed a > 0 and any signed k, the ratio x J_{k+1}(x)/J_k(x) is a
Mittag-Leffler sum that is strictly monotone between consecutive zeros
of J_{|k|}, so the equation has exactly one root in each interval
(j_{|k|,n-1}, j_{|k|,n}); root bracketing below relies on this.

Dirac eigenvalue curves are obtained from the Robin branches through
the parameter map a = (lambda + m) * theta_factor(theta),
mu = lambda^2 - m^2, solved as a fixed point in the mu variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bessel import bessel_zero, jn_signed
from .parammap import vartheta, theta_factor_extended

__all__ = [
    "DiskBranch",
    "RootLocalizationError",
    "robin_disk_eigs",
    "robin_disk_first",
    "dirichlet_disk_first",
    "dirac_disk_first",
    "dirac_disk_branch",
    "zigzag_levels",
    "disk_curves",
    "dirac_disk_spectrum_window",
    "branch_rows",
]


class RootLocalizationError(RuntimeError):
    """Raised when a bracketing step fails to isolate a root."""


@dataclass(frozen=True)
class DiskBranch:
    """One (k, n) eigenvalue branch sampled on a parameter grid."""

    k: int
    n: int
    param: np.ndarray        # a-values (robin) or theta-values (dirac)
    values: np.ndarray       # mu or lambda along the branch
    mass: float = 0.0
    operator: str = "robin"


def _implicit(R: float, a: float, k: int):
    def h(x):
        return a * R * jn_signed(k, x) - x * jn_signed(k + 1, x)

    return h


def _robin_root(R: float, a: float, k: int, n: int) -> float:
    """n-th positive root of the implicit disk equation, as x = R sqrt(mu)."""
    ka = abs(k)
    lo = 0.0 if n == 1 else bessel_zero(ka, n - 1)
    hi = bessel_zero(ka, n)
    h = _implicit(R, a, k)
    # evaluate just inside the endpoints; at interval ends J_{|k|} vanishes
    eps = 1e-13 * max(hi, 1.0)
    x0 = lo + eps if n > 1 else min(1e-9, 1e-6 * hi)
    x1 = hi - eps
    f0, f1 = h(x0), h(x1)
    if f0 * f1 > 0.0 or f0 == 0.0:
        # first root very close to 0 (small a) or underflow at x0:
        # rescan the interval on a log grid for the sign change
        grid = np.geomspace(max(x0, 1e-13), x1, 120)
        vals = h(grid)
        sgn = np.sign(vals)
        idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
        if len(idx) == 0:
            raise RootLocalizationError(
                f"root localization failed for k={k}, n={n}, a={a} on interval ({lo}, {hi})"
            )
        x0, x1 = grid[idx[0]], grid[idx[0] + 1]
    return brentq(h, x0, x1, xtol=1e-15, rtol=4e-16)


def robin_disk_eigs(R: float, a: float, k: int, n_max: int) -> list[float]:
    """First n_max eigenvalues mu on the angular-order-k branch of the disk.

    Each root is confined between consecutive zeros of J_{|k|} and refined
    to machine tolerance; the residual of a R J_k(x) = x J_{k+1}(x) is
    re-checked by the caller's tests.
    """
    if R <= 0 or a <= 0:
        raise ValueError("R and a must be positive")
    if abs(k) > 40 or n_max > 20:
        raise ValueError("supported range: |k| <= 40, n_max <= 20")
    return [(_robin_root(R, a, k, n) / R) ** 2 for n in range(1, n_max + 1)]


def robin_disk_first(R: float, a: float) -> float:
    """Smallest eigenvalue mu_D(a) over all angular orders.

    Scans k outward from 0 and stops once the leading root for |k| = K
    exceeds the running minimum by 10%; zero interlacing makes larger
    |k| monotonically worse, so the truncation is safe.
    """
    best = robin_disk_eigs(R, a, 0, 1)[0]
    K = 1
    while K <= 40:
        cands = [robin_disk_eigs(R, a, k, 1)[0] for k in (K, -K)]
        best = min(best, *cands)
        if min(cands) > 1.1 * best:
            return best
        K += 1
    return best


def dirichlet_disk_first(R: float) -> float:
    """First Dirichlet eigenvalue (j_{0,1} / R)^2 of the disk."""
    if R <= 0:
        raise ValueError("R must be positive")
    return (bessel_zero(0, 1) / R) ** 2


def _dirac_fixed_point(R: float, m: float, theta: float, mu_of_a, mu_hi: float) -> float:
    """Solve mu = mu_branch((sqrt(mu + m^2) + m) * vartheta(theta)) in mu.

    Both sides are monotone in mu, so a sign change brackets the unique
    crossing; see the parameter-map module for the monotonicity facts.
    """
    vt = vartheta(theta)

    def g(mu):
        lam = math.sqrt(mu + m * m)
        return mu - mu_of_a((lam + m) * vt)

    hi = mu_hi * (1.0 - 1e-12)
    if g(hi) <= 0.0:
        raise RootLocalizationError("fixed-point bracket failed at the Dirichlet end")
    lo = 0.5 * hi
    for _ in range(200):
        if g(lo) < 0.0:
            break
        lo *= 0.5
    else:
        raise RootLocalizationError("fixed-point bracket failed near mu = 0")
    mu = brentq(g, lo, hi, xtol=1e-15, rtol=4e-16)
    return math.sqrt(mu + m * m)


def dirac_disk_first(R: float, m: float, theta: float) -> float:
    """First nonnegative Dirac eigenvalue lambda_D(theta) on the disk.

    Requires m >= 0 and theta strictly inside (-pi/2, pi/2); the zigzag
    endpoints are handled by zigzag_levels instead.
    """
    if m < 0:
        raise ValueError("dirac_disk_first expects m >= 0")
    lam = _dirac_fixed_point(R, m, theta, lambda a: robin_disk_first(R, a), dirichlet_disk_first(R))
    return lam


def dirac_disk_branch(R: float, m: float, theta: float, k: int, n: int) -> float:
    """Dirac branch value: the (k, n) Robin branch pushed through the map."""
    mu_hi = (bessel_zero(abs(k), n) / R) ** 2
    return _dirac_fixed_point(R, m, theta, lambda a: robin_disk_eigs(R, a, k, n)[n - 1], mu_hi)


def zigzag_levels(R: float, m: float, sign: int, count: int = 8) -> dict:
    """Spectrum description at the zigzag parameter values.

    The operator at theta = sign * pi/2 has the flat level sign * m plus
    the two families +-sqrt(Lambda + m^2) over the Dirichlet spectrum of
    the disk.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    lams = []
    for k in range(0, count + 1):
        for n in range(1, count + 1):
            lam = (bessel_zero(k, n) / R) ** 2
            mult = 1 if k == 0 else 2
            lams.extend([lam] * mult)
    lams = sorted(lams)[:count]
    sq = [math.sqrt(v + m * m) for v in lams]
    return {
        "flat_level": sign * m,
        "positive": sq,
        "negative": [-v for v in sq],
        "dirichlet_levels": lams,
    }


def disk_curves(R: float, m: float, operator: str, grid, branches) -> list[DiskBranch]:
    """Branch tables mu_{k,n}(a) or lambda_{k,n}(theta) on a parameter grid.

    ``branches`` is an iterable of (k, n) pairs; output is sorted by
    branch then parameter so sweep parallelism cannot reorder it.
    """
    grid = np.asarray(grid, dtype=float)
    out = []
    for k, n in sorted(branches):
        if operator == "robin":
            vals = np.array([robin_disk_eigs(R, a, k, n)[n - 1] for a in grid])
        elif operator == "dirac":
            vals = np.array([dirac_disk_branch(R, m, th, k, n) for th in grid])
        else:
            raise ValueError(f"unknown operator {operator!r}")
        out.append(DiskBranch(k=k, n=n, param=grid.copy(), values=vals, mass=m, operator=operator))
    return out


def dirac_disk_spectrum_window(
    R: float,
    m: float,
    theta: float,
    lam_min: float,
    lam_max: float,
    k_range: int = 8,
    resolution: float = 2.0e-3,
) -> list[float]:
    """All Dirac disk eigenvalues with lam_min <= lambda <= lam_max.

    Works for any theta with cos(theta) != 0 (including the band
    (pi/2, 3pi/2), where the boundary factor is negative) and both
    spectrum signs, by scanning the implicit equation directly in
    lambda.  Only |lambda| > |m| is representable in this basis; the
    window is clipped accordingly.
    """
    vt = theta_factor_extended(theta)
    guard = abs(m) + max(1e-9, 1e-9 * abs(m))
    segments = []
    if lam_min < -guard:
        segments.append((lam_min, min(lam_max, -guard)))
    if lam_max > guard:
        segments.append((max(lam_min, guard), lam_max))

    found: list[float] = []
    for k in range(-k_range, k_range + 1):
        for lo, hi in segments:
            if hi <= lo:
                continue
            npts = max(16, int((hi - lo) / resolution))
            lams = np.linspace(lo, hi, npts)
            xs = R * np.sqrt(lams * lams - m * m)
            vals = (lams + m) * vt * R * jn_signed(k, xs) - xs * jn_signed(k + 1, xs)

            def d(lam, k=k):
                x = R * math.sqrt(lam * lam - m * m)
                return (lam + m) * vt * R * jn_signed(k, x) - x * jn_signed(k + 1, x)

            sgn = np.sign(vals)
            idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
            for i in idx:
                found.append(brentq(d, lams[i], lams[i + 1], xtol=1e-14, rtol=4e-16))
    return sorted(found)


def branch_rows(branches: list[DiskBranch]):
    """Rows (param, k, n, value) for CSV emission, deterministically ordered."""
    rows = []
    for b in sorted(branches, key=lambda br: (br.k, br.n)):
        for p, v in zip(b.param, b.values):
            rows.append((float(p), b.k, b.n, float(v)))
    return rows
