"""Eigenvalues on smooth domains by the method of particular solutions.

Trial functions are exact Helmholtz solutions J_k(c r) e^{i k phi}
(polar coordinates about an interior expansion center, c = sqrt(mu)),
so the PDE is satisfied identically and only the boundary condition is
enforced, sampled at the quadrature nodes.  Eigenvalues are parameter
values where the boundary collocation block loses rank relative to an
interior normalization block (the Betcke-Trefethen regularization of
the classical point-matching approach): we scan the smallest
generalized singular value sigma(mu) of the boundary block against the
interior block and refine its dips.

The dbar derivative of a basis element is again a basis element one
order up:  dbar[J_k(c r) e^{i k phi}] = -(c/2) J_{k+1}(c r) e^{i(k+1)phi};
this identity powers both the boundary rows of the Robin-type condition
2 conj(nu) dbar(u) + a u = 0 and the reconstruction of the second Dirac
spinor component.  It is verified against finite differences in the
test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bessel import bessel_zero, jn_table
from .geometry import BoundaryCurve, QuadratureGrid, build_grid, interior_quadrature
from .parammap import vartheta

__all__ = [
    "MpsConfig",
    "MpsSolver",
    "EigenSolution",
    "EigenvalueNotFoundError",
    "BasisDegenerateError",
    "sigma_min_scan",
    "mu_first",
    "dirichlet_first",
    "lambda_first",
    "reconstruct_dirac_pair",
]


class EigenvalueNotFoundError(RuntimeError):
    pass


class BasisDegenerateError(RuntimeError):
    pass


@dataclass(frozen=True)
class MpsConfig:
    """Discretization parameters for the particular-solutions solver."""

    K: int = 16                      # angular orders -K..K
    M: int = 256                     # boundary quadrature nodes
    n_interior: int | None = None    # defaults to 2(2K+1)
    seed: int = 1234
    interior_radius_fraction: float = 0.5
    dip_tol: float = 1.0e-8          # acceptance tolerance on sigma_min
    max_escalations: int = 2         # K -> K+8 steps when the dip floor stalls

    def resolved_interior(self) -> int:
        return self.n_interior if self.n_interior is not None else 2 * (2 * self.K + 1)


@dataclass(frozen=True)
class EigenSolution:
    """An accepted eigenvalue with its trial-space coefficients.

    ``orders`` are the angular orders of ``coefficients``; the expansion
    is u = sum_k coeff_k J_k(c r) e^{i k phi} about ``center`` with
    c = sqrt(eigenvalue).  The coefficient vector is normalized to unit
    L2 norm over the domain, and ``boundary_residual`` is the discrete
    boundary L2 norm of the boundary condition applied to u.
    """

    eigenvalue: float
    orders: np.ndarray
    coefficients: np.ndarray
    boundary_residual: float
    sigma_min: float
    K: int
    M: int
    kind: str                 # "robin" or "dirichlet"
    a: float | None
    center: complex


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _refine_dip(f, xs, fs, rel_tol=1e-12, max_iter=90):
    """Minimize a V-shaped dip given a 3-point bracket.

    Golden-section steps narrow the bracket; once it is small, the two
    line segments on either side of the vertex are intersected, which
    converges much faster than pure golden section on the nearly
    piecewise-linear dips produced by the singular-value scan.
    """
    (xa, xb, xc) = xs
    (fa, fb, fc) = fs
    pts = {xa: fa, xb: fb, xc: fc}

    def insert(x):
        if x not in pts:
            pts[x] = f(x)
        return pts[x]

    for _ in range(max_iter):
        width = xc - xa
        scale = max(abs(xb), 1e-300)
        if width <= rel_tol * scale:
            break
        xfit = None
        if width < 1e-4 * scale and len(pts) >= 5:
            left = sorted((x, v) for x, v in pts.items() if x < xb)[-2:]
            right = sorted((x, v) for x, v in pts.items() if x > xb)[:2]
            if len(left) == 2 and len(right) == 2:
                (l2, fl2), (l1, fl1) = left
                (r1, fr1), (r2, fr2) = right
                ml = (fl1 - fl2) / (l1 - l2)
                mr = (fr2 - fr1) / (r2 - r1)
                if ml < 0.0 < mr:
                    xv = (fl1 - fr1 + mr * r1 - ml * l1) / (mr - ml)
                    if xa < xv < xc and abs(xv - xb) > 1e-18 * scale:
                        xfit = xv
        if xfit is None:
            # plain golden-section step into the larger side
            if (xc - xb) > (xb - xa):
                xfit = xb + (1.0 - _GOLDEN) * (xc - xb)
            else:
                xfit = xb - (1.0 - _GOLDEN) * (xb - xa)
        fv = insert(xfit)
        if xfit < xb:
            if fv < fb:
                xc, fc, xb, fb = xb, fb, xfit, fv
            else:
                xa, fa = xfit, fv
        else:
            if fv < fb:
                xa, fa, xb, fb = xb, fb, xfit, fv
            else:
                xc, fc = xfit, fv
    return xb, fb


class MpsSolver:
    """Particular-solutions eigenvalue solver for one domain.

    Immutable after construction: the boundary grid, interior
    normalization points and expansion center are fixed, so instances
    are safe to share across parallel sweep workers.
    """

    def __init__(self, curve: BoundaryCurve, config: MpsConfig = MpsConfig()):
        if config.M < 4 * (2 * config.K + 1):
            raise ValueError("M must be at least 4(2K+1) boundary nodes")
        self.curve = curve
        self.config = config
        self.grid: QuadratureGrid = build_grid(curve, config.M)
        dt = 2.0 * math.pi / config.M
        z, zp = self.grid.points, self.grid.velocities
        self.area = float(np.real(np.sum(np.conj(z) * zp) * dt / 2j))
        self.perimeter = self.grid.perimeter
        # expansion center: area centroid via the complex Green identity
        self.center = complex(np.sum(z * np.conj(z) * zp) * dt / 2j) / self.area
        self.inradius = float(np.min(np.abs(z - self.center)))
        rng = np.random.default_rng(config.seed)
        n_int = config.resolved_interior()
        rr = config.interior_radius_fraction * self.inradius * np.sqrt(rng.random(n_int))
        th = 2.0 * math.pi * rng.random(n_int)
        self.interior_points = self.center + rr * np.exp(1j * th)
        # precomputed polar data about the center
        self._rb = np.abs(z - self.center)
        self._pb = np.angle(z - self.center)
        self._ri = np.abs(self.interior_points - self.center)
        self._pi = np.angle(self.interior_points - self.center)
        self._sqrt_w = np.sqrt(self.grid.weights)
        self._dirichlet_cache: float | None = None
        self._escalated: "MpsSolver | None" = None
        nq = max(24, config.M // 8)
        self._norm_pts, self._norm_wts = interior_quadrature(curve, n_radial=nq, n_angular=4 * nq)
        self._norm_rel = np.abs(self._norm_pts - self.center)
        self._norm_ang = np.angle(self._norm_pts - self.center)

    # ------------------------------------------------------------------
    # matrix assembly and the sigma landscape
    # ------------------------------------------------------------------

    def _signed_tables(self, c: float):
        """J tables for orders -K-1..K+1 on boundary and interior nodes."""
        K = self.config.K
        tab_b = jn_table(K + 1, c * self._rb)
        tab_i = jn_table(K, c * self._ri)
        return tab_b, tab_i

    @staticmethod
    def _pick(tab: np.ndarray, k: int) -> np.ndarray:
        ka = abs(k)
        sign = 1.0 if (k >= 0 or ka % 2 == 0) else -1.0
        return sign * tab[ka]

    def _blocks(self, a: float | None, mu: float):
        """Boundary and interior collocation blocks at frequency sqrt(mu).

        Boundary rows carry sqrt(arc weights); for the Robin-type rows
        the whole block is divided by max(a, c) so that the dip
        tolerance is meaningful across parameter scales.
        """
        K = self.config.K
        c = math.sqrt(mu)
        tab_b, tab_i = self._signed_tables(c)
        ks = np.arange(-K, K + 1)
        Eb = np.exp(1j * np.outer(self._pb, ks))          # (M, 2K+1)
        Ei = np.exp(1j * np.outer(self._pi, ks))
        Ub = np.empty((len(self._rb), len(ks)), dtype=complex)
        Ai = np.empty((len(self._ri), len(ks)), dtype=complex)
        for j, k in enumerate(ks):
            Ub[:, j] = self._pick(tab_b, k) * Eb[:, j]
            Ai[:, j] = self._pick(tab_i, k) * Ei[:, j]
        if a is None:
            Ab = Ub * self._sqrt_w[:, None]
        else:
            eb_shift = np.exp(1j * self._pb)
            Db = np.empty_like(Ub)
            for j, k in enumerate(ks):
                Db[:, j] = -(c / 2.0) * self._pick(tab_b, k + 1) * Eb[:, j] * eb_shift
            Ab = (2.0 * np.conj(self.grid.normals)[:, None] * Db + a * Ub) * self._sqrt_w[:, None]
            Ab /= max(a, c)
        return Ab, Ai

    def sigma_value(self, a: float | None, mu: float) -> float:
        """Smallest generalized singular value of boundary vs interior block."""
        return self._sigma(a, mu)[0]

    def _sigma(self, a: float | None, mu: float, want_vector: bool = False):
        Ab, Ai = self._blocks(a, mu)
        stacked = np.vstack([Ab, Ai])
        norms = np.linalg.norm(stacked, axis=0)
        keep = norms > 1e-280
        if not np.any(keep):
            raise BasisDegenerateError("basis degenerate: increase interior points or reduce K")
        stacked = stacked[:, keep] / norms[keep]
        Q, R = np.linalg.qr(stacked)
        QB = Q[: len(self._rb)]
        if want_vector:
            U, S, Vh = np.linalg.svd(QB)
            smin = S[-1]
            y = Vh[-1].conj()
            coeff = np.zeros(len(keep), dtype=complex)
            coeff[keep] = np.linalg.solve(R, y) / norms[keep]
        else:
            smin = np.linalg.svd(QB, compute_uv=False)[-1]
            coeff = None
        gsv = smin / math.sqrt(max(1.0 - smin * smin, 1e-300))
        return gsv, coeff

    def sigma_min_scan(self, a: float | None, mu_window, grid_points: int):
        """(mu, sigma) samples over a mu window; dips flag eigenvalues."""
        lo, hi = mu_window
        if not (0.0 < lo < hi):
            raise ValueError("mu window must satisfy 0 < lo < hi")
        mus = np.linspace(lo, hi, grid_points)
        return [(float(mu), self.sigma_value(a, mu)) for mu in mus]

    # ------------------------------------------------------------------
    # eigenvalue extraction
    # ------------------------------------------------------------------

    def _first_dip(self, a: float | None, window, grid_points: int):
        """Leftmost dip of sigma in the window, refined; None if no dip accepted."""
        samples = self.sigma_min_scan(a, window, grid_points)
        mus = np.array([s[0] for s in samples])
        sig = np.array([s[1] for s in samples])
        order = [i for i in range(len(mus)) if
                 (i == 0 or sig[i] <= sig[i - 1]) and (i == len(mus) - 1 or sig[i] <= sig[i + 1])]
        f = lambda mu: self.sigma_value(a, mu)
        for i in sorted(order):
            ia, ic = max(i - 1, 0), min(i + 1, len(mus) - 1)
            if ia == i:
                ic = i + 1 if i + 1 < len(mus) else i
            xs = (mus[ia], mus[i], mus[ic])
            if not (xs[0] < xs[1] < xs[2]):
                # edge candidate: synthesize an outward point
                h = mus[1] - mus[0]
                xs = (mus[i] - h, mus[i], mus[i] + h)
                if xs[0] <= 0.0:
                    xs = (mus[i] / 2.0, mus[i], mus[i] + h)
            fs = (f(xs[0]) if xs[0] != mus[ia] else sig[ia],
                  sig[i],
                  f(xs[2]) if xs[2] != mus[ic] else sig[ic])
            if not (fs[1] <= fs[0] and fs[1] <= fs[2]):
                continue
            mu_star, s_star = _refine_dip(f, xs, fs)
            if s_star < self.config.dip_tol:
                return mu_star, s_star
        return None

    def _with_escalated_K(self) -> "MpsSolver":
        if self._escalated is None:
            cfg = self.config
            bigger = MpsConfig(
                K=cfg.K + 8,
                M=max(cfg.M, 4 * (2 * (cfg.K + 8) + 1)),
                n_interior=None,
                seed=cfg.seed,
                interior_radius_fraction=cfg.interior_radius_fraction,
                dip_tol=cfg.dip_tol,
                max_escalations=cfg.max_escalations - 1,
            )
            self._escalated = MpsSolver(self.curve, bigger)
        return self._escalated

    def _locate_first(self, a: float | None, window, grid_points: int):
        hit = self._first_dip(a, window, grid_points)
        if hit is not None:
            return self, hit
        if self.config.max_escalations > 0:
            solver = self._with_escalated_K()
            return solver._locate_first(a, window, grid_points)
        raise EigenvalueNotFoundError("eigenvalue not found: enlarge K/M")

    def dirichlet_first_value(self) -> float:
        """First Dirichlet eigenvalue (cached); window from the two-sided
        disk bounds: Faber-Krahn from below, the inscribed disk from above."""
        if self._dirichlet_cache is None:
            j01 = bessel_zero(0, 1)
            lo = 0.90 * math.pi * j01**2 / self.area
            hi = 1.05 * (j01 / self.inradius) ** 2
            solver, (mu, _) = self._locate_first(None, (lo, hi), 140)
            self._dirichlet_cache = mu
        return self._dirichlet_cache

    def dirichlet_first(self) -> EigenSolution:
        mu = self.dirichlet_first_value()
        return self._package(None, mu, kind="dirichlet")

    def _mu_window(self, a: float, window=None):
        lam_d = self.dirichlet_first_value()
        hi_bound = min(a * self.perimeter / self.area, lam_d) * 1.01
        if window is None:
            return (1e-9 * hi_bound, hi_bound)
        lo = max(window[0], 1e-12 * hi_bound)
        hi = min(window[1], hi_bound) if window[1] is not None else hi_bound
        if not lo < hi:
            lo, hi = 1e-9 * hi_bound, hi_bound
        return (lo, hi)

    def mu_first_value(self, a: float, window=None, grid_points: int = 120) -> float:
        """First eigenvalue mu_Omega(a); cheap form without coefficients."""
        if a <= 0:
            raise ValueError("a must be positive")
        win = self._mu_window(a, window)
        pts = grid_points if window is None else max(14, min(grid_points, 40))
        solver, (mu, _) = self._locate_first(a, win, pts)
        return mu

    def mu_first(self, a: float, window=None) -> EigenSolution:
        if a <= 0:
            raise ValueError("a must be positive")
        win = self._mu_window(a, window)
        solver, (mu, _) = self._locate_first(a, win, 120)
        return solver._package(a, mu, kind="robin")

    def lambda_first(self, m: float, theta: float, mu_xtol_rel: float = 1e-12) -> EigenSolution:
        """First nonnegative Dirac eigenvalue via the fixed point in mu.

        Solves mu = mu_Omega((sqrt(mu + m^2) + m) vartheta(theta)) by
        bracketed root finding; evaluated (a, mu) pairs certify narrow
        scan windows for later evaluations because mu_Omega is
        increasing.
        """
        if m < 0:
            raise ValueError("lambda_first expects m >= 0")
        vt = vartheta(theta)
        lam_d = self.dirichlet_first_value()
        seen: dict[float, float] = {}

        def mu_of(aa: float) -> float:
            if aa not in seen:
                lows = [v for k, v in seen.items() if k < aa]
                highs = [v for k, v in seen.items() if k > aa]
                win = (
                    max(lows) * (1 - 1e-6) if lows else 0.0,
                    min(highs) * (1 + 1e-6) if highs else None,
                )
                window = None if (not lows and not highs) else win
                seen[aa] = self.mu_first_value(aa, window=window)
            return seen[aa]

        def g(mu: float) -> float:
            lam = math.sqrt(mu + m * m)
            return mu - mu_of((lam + m) * vt)

        lo, hi = 1e-12 * lam_d, lam_d * (1.0 - 1e-10)
        glo, ghi = g(lo), g(hi)
        if glo >= 0.0 or ghi <= 0.0:
            raise EigenvalueNotFoundError("eigenvalue not found: enlarge K/M")
        mu_star = brentq(g, lo, hi, xtol=mu_xtol_rel * lam_d, rtol=4e-16)
        a_star = (math.sqrt(mu_star + m * m) + m) * vt
        sol = self.mu_first(a_star, window=(mu_star * (1 - 1e-7), mu_star * (1 + 1e-7)))
        lam = math.sqrt(sol.eigenvalue + m * m)
        return EigenSolution(
            eigenvalue=lam,
            orders=sol.orders,
            coefficients=sol.coefficients,
            boundary_residual=sol.boundary_residual,
            sigma_min=sol.sigma_min,
            K=sol.K,
            M=sol.M,
            kind="dirac",
            a=a_star,
            center=sol.center,
        )

    # ------------------------------------------------------------------
    # solution packaging and pointwise evaluation
    # ------------------------------------------------------------------

    def _package(self, a: float | None, mu: float, kind: str) -> EigenSolution:
        sigma, coeff = self._sigma(a, mu, want_vector=True)
        K = self.config.K
        orders = np.arange(-K, K + 1)
        norm = self.interior_norm(orders, coeff, mu)
        if not norm > 0:
            raise BasisDegenerateError("basis degenerate: increase interior points or reduce K")
        coeff = coeff / norm
        bc = self.boundary_condition_values(orders, coeff, mu, a)
        residual = float(np.sqrt(np.sum(np.abs(bc) ** 2 * self.grid.weights)))
        return EigenSolution(
            eigenvalue=mu,
            orders=orders,
            coefficients=coeff,
            boundary_residual=residual,
            sigma_min=sigma,
            K=K,
            M=self.config.M,
            kind=kind,
            a=a,
            center=self.center,
        )

    def eval_expansion(self, orders, coeffs, mu: float, points, derivative: str = "none"):
        """Evaluate u, dbar(u) or dz(u) of a coefficient expansion."""
        c = math.sqrt(mu)
        rel = np.asarray(points) - self.center
        r = np.abs(rel)
        ph = np.angle(rel)
        kmax = int(np.max(np.abs(orders))) + 1
        tab = jn_table(kmax, c * r.ravel())
        out = np.zeros(r.size, dtype=complex)
        for k, ck in zip(orders, coeffs):
            if ck == 0:
                continue
            if derivative == "none":
                out += ck * self._pick(tab, k) * np.exp(1j * k * ph.ravel())
            elif derivative == "dbar":
                out += ck * (-(c / 2.0)) * self._pick(tab, k + 1) * np.exp(1j * (k + 1) * ph.ravel())
            elif derivative == "dz":
                out += ck * (c / 2.0) * self._pick(tab, k - 1) * np.exp(1j * (k - 1) * ph.ravel())
            else:
                raise ValueError("derivative must be 'none', 'dbar' or 'dz'")
        return out.reshape(r.shape)

    def boundary_condition_values(self, orders, coeffs, mu: float, a: float | None):
        """Pointwise boundary defect: 2 conj(nu) dbar(u) + a u, or the trace."""
        z = self.grid.points
        u = self.eval_expansion(orders, coeffs, mu, z)
        if a is None:
            return u
        du = self.eval_expansion(orders, coeffs, mu, z, derivative="dbar")
        return 2.0 * np.conj(self.grid.normals) * du + a * u

    def interior_norm(self, orders, coeffs, mu: float) -> float:
        """L2(Omega) norm of the expansion via the polar interior quadrature."""
        vals = self.eval_expansion(orders, coeffs, mu, self._norm_pts)
        return float(np.sqrt(np.sum(np.abs(vals) ** 2 * self._norm_wts)))


def reconstruct_dirac_pair(solution: EigenSolution, m: float, lam: float) -> dict:
    """Second spinor component v = (-2i/(lambda+m)) dbar(u) as coefficients.

    The dbar identity shifts every order up by one with factor -c/2, so
    v lives in the same trial family with orders shifted by one.
    """
    if lam <= m:
        raise ValueError("requires lambda > m")
    c = math.sqrt(solution.eigenvalue if solution.kind != "dirac" else lam * lam - m * m)
    factor = 1j * c / (lam + m)
    return {
        "u_orders": solution.orders.copy(),
        "u_coefficients": solution.coefficients.copy(),
        "v_orders": solution.orders + 1,
        "v_coefficients": factor * solution.coefficients,
    }


# ---------------------------------------------------------------------------
# module-level convenience wrappers
# ---------------------------------------------------------------------------


def sigma_min_scan(curve: BoundaryCurve, a: float, mu_window, grid_points: int, K: int = 16, M: int = 256):
    solver = MpsSolver(curve, MpsConfig(K=K, M=M))
    return solver.sigma_min_scan(a, mu_window, grid_points)


def mu_first(curve: BoundaryCurve, a: float, K: int = 16, M: int = 256) -> EigenSolution:
    return MpsSolver(curve, MpsConfig(K=K, M=M)).mu_first(a)


def dirichlet_first(curve: BoundaryCurve, K: int = 16, M: int = 256) -> EigenSolution:
    return MpsSolver(curve, MpsConfig(K=K, M=M)).dirichlet_first()


def lambda_first(curve: BoundaryCurve, m: float, theta: float, K: int = 16, M: int = 256) -> EigenSolution:
    return MpsSolver(curve, MpsConfig(K=K, M=M)).lambda_first(m, theta)
