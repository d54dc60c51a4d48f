"""Exact Hardy/Bergman norms on the unit disk via Taylor coefficients.

For f = sum a_n z^n the squared norms are sum |a_n|^2 (boundary mean
square) and sum |a_n|^2/(n+1) (area mean square, with the 1/pi
normalization), so finite coefficient arrays compute them exactly up to
an explicit tail.  The fourth-power area norm uses ||f||_{A4}^4 =
||f^2||_{A2}^2 with f^2 formed by coefficient convolution.

The embedding inequality ||f||_{A4} <= ||f||_{H2} is saturated exactly
by the coefficient-geometric family a_n = c1 c2^n, i.e. f =
c1/(1 - c2 z); those series and the conformal pullbacks built from the
same 1/(1 - c2 z) structure carry certified geometric tail bounds, so
equality claims reduce to verified finite computations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TaylorSeries",
    "MobiusMap",
    "polynomial_series",
    "extremal_series",
    "norms",
    "vukotic_gap",
    "radial_mean_square",
    "pullback_series",
    "pullback_identity",
]


@dataclass(frozen=True)
class TaylorSeries:
    """Truncated power series on the unit disk.

    ``tail`` bounds the l2 norm of the dropped coefficient tail (zero
    for exact polynomials); ``truncated`` marks series whose tail is
    unknown rather than certified.
    """

    coefficients: np.ndarray
    tail: float = 0.0
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=complex))
        if len(self.coefficients) > 10**4 + 1:
            raise ValueError("series truncation limited to 10^4 coefficients")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        # Horner evaluation; adequate for |z| <= 1 test probes
        out = np.zeros_like(np.asarray(z, dtype=complex))
        for c in self.coefficients[::-1]:
            out = out * z + c
        return out


def polynomial_series(coefficients) -> TaylorSeries:
    """Exact polynomial: no tail."""
    return TaylorSeries(np.asarray(coefficients, dtype=complex), tail=0.0, truncated=False)


def extremal_series(c1: complex, c2: complex, N: int) -> TaylorSeries:
    """The equality family a_n = c1 c2^n truncated at degree N."""
    if abs(c2) >= 1:
        raise ValueError("requires |c2| < 1")
    n = np.arange(N + 1)
    coeffs = c1 * np.power(complex(c2), n)
    q = abs(c2)
    tail = abs(c1) * q ** (N + 1) / math.sqrt(1.0 - q * q)
    return TaylorSeries(coeffs, tail=tail, truncated=False)


def norms(f: TaylorSeries) -> dict:
    """Boundary (H2) and area (A2, A4) mean-square norms of the series."""
    a = f.coefficients
    n = np.arange(len(a))
    h2sq = float(np.sum(np.abs(a) ** 2))
    a2sq = float(np.sum(np.abs(a) ** 2 / (n + 1)))
    sq = np.convolve(a, a)
    m = np.arange(len(sq))
    a4sq = math.sqrt(float(np.sum(np.abs(sq) ** 2 / (m + 1))))
    return {
        "H2": math.sqrt(h2sq),
        "A2": math.sqrt(a2sq),
        "A4": math.sqrt(a4sq),
        "tail": f.tail,
    }


def vukotic_gap(f: TaylorSeries) -> float:
    """||f||_H2 - ||f||_A4; nonnegative up to the certified tail."""
    ns = norms(f)
    return ns["H2"] - ns["A4"]


def radial_mean_square(f: TaylorSeries, r: float, quad_points: int = 512) -> float:
    """Direct quadrature of the circle mean of |f|^2 at radius r."""
    phi = 2.0 * math.pi * np.arange(quad_points) / quad_points
    vals = f(r * np.exp(1j * phi))
    return math.sqrt(float(np.mean(np.abs(vals) ** 2)))


@dataclass(frozen=True)
class MobiusMap:
    """F(z) = c4/(1 - c2 z) + c5 (or the affine c4 z + c5 when c2 = 0).

    With |c2| < 1 the unit disk maps onto a disk, so boundary integrals
    on the image have closed-form geometry to test against.
    """

    c2: complex
    c4: complex
    c5: complex = 0.0

    def __post_init__(self):
        if abs(self.c2) >= 1:
            raise ValueError("invalid map: requires |c2| < 1")
        if self.c4 == 0:
            raise ValueError("invalid map: c4 must be nonzero")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.c2 == 0:
            return self.c4 * z + self.c5
        return self.c4 / (1.0 - self.c2 * z) + self.c5

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        if self.c2 == 0:
            return np.full_like(z, self.c4)
        return self.c4 * self.c2 / (1.0 - self.c2 * z) ** 2

    def image_disk(self) -> tuple[complex, float]:
        """Center and radius of F(unit disk)."""
        if self.c2 == 0:
            return complex(self.c5), abs(self.c4)
        d = 1.0 - abs(self.c2) ** 2
        return complex(self.c4 / d + self.c5), abs(self.c4) * abs(self.c2) / d


def _binomial_row(s: int, n: np.ndarray) -> np.ndarray:
    """C(n + s - 1, s - 1) for the power series of 1/(1 - q z)^s."""
    out = np.ones_like(n, dtype=float)
    for i in range(1, s):
        out = out * (n + i) / i
    return out


def pullback_series(u: TaylorSeries, F: MobiusMap, N: int = 400) -> TaylorSeries:
    """Series of f = u(F) (dF)^{1/2} on the unit disk with certified tail.

    For the affine case this is polynomial composition; otherwise u(F)
    expands in powers of g = 1/(1 - c2 z), each of which has the exact
    binomial series, so f = sum beta_s g^s with s up to deg(u) + 1.
    """
    b = u.coefficients
    root = cmath.sqrt(complex(F.c4)) if F.c2 == 0 else cmath.sqrt(complex(F.c4 * F.c2))
    if F.c2 == 0:
        # Horner composition with the linear map c5 + c4 z
        lin = np.array([F.c5, F.c4], dtype=complex)
        comp = np.array([b[-1]], dtype=complex)
        for coeff in b[-2::-1]:
            comp = np.convolve(comp, lin)
            comp[0] += coeff
        return TaylorSeries(root * comp, tail=0.0, truncated=u.truncated)

    # beta over powers of g: u(c5 + c4 g) * sqrt(c4 c2) g
    beta_g = np.zeros(len(b) + 1, dtype=complex)
    for j, bj in enumerate(b):
        if bj == 0:
            continue
        # (c5 + c4 g)^j by binomial expansion in g
        for p in range(j + 1):
            beta_g[p + 1] += bj * math.comb(j, p) * (F.c5 ** (j - p)) * (F.c4 ** p)
    beta_g *= root

    n = np.arange(N + 1)
    coeffs = np.zeros(N + 1, dtype=complex)
    q = complex(F.c2)
    qn = np.power(q, n)
    for s in range(1, len(beta_g)):
        if beta_g[s] == 0:
            continue
        coeffs += beta_g[s] * _binomial_row(s, n) * qn

    # certified l2 tail: |a_n| <= ub(n) with ub geometric-with-polynomial factor
    qa = abs(q)
    smax = len(beta_g) - 1
    amps = np.abs(beta_g)
    tail_sq = 0.0
    nn = N + 1
    term = (sum(amps[s] * _binomial_row(s, np.array([nn]))[0] for s in range(1, smax + 1)) * qa**nn) ** 2
    while term > 1e-320 and nn < N + 4000:
        tail_sq += term
        nn += 1
        term = (sum(amps[s] * _binomial_row(s, np.array([nn]))[0] for s in range(1, smax + 1)) * qa**nn) ** 2
    # geometric remainder once the polynomial factor growth is dominated
    ratio = qa * qa * (1.0 + smax / max(nn, 1)) ** (2 * (smax - 1) if smax > 1 else 0)
    if ratio < 1.0:
        tail_sq += term * ratio / (1.0 - ratio)
    return TaylorSeries(coeffs, tail=math.sqrt(tail_sq), truncated=u.truncated)


def boundary_norm_on_image(u: TaylorSeries, F: MobiusMap, M: int = 2048) -> float:
    """L2 norm of u over the image boundary by trapezoidal quadrature."""
    phi = 2.0 * math.pi * np.arange(M) / M
    zb = np.exp(1j * phi)
    vals = u(F(zb))
    speed = np.abs(F.derivative(zb))
    return math.sqrt(float(np.sum(np.abs(vals) ** 2 * speed) * (2.0 * math.pi / M)))


def pullback_identity(u: TaylorSeries, F: MobiusMap, M: int = 2048, N: int = 400) -> dict:
    """Check sqrt(2 pi) ||f||_H2 = ||u||_{L2(boundary of F(D))}.

    The left side comes from the certified coefficient series of the
    pullback, the right side from boundary quadrature on the image
    domain; the defect should vanish to quadrature accuracy plus the
    series tail.
    """
    f = pullback_series(u, F, N=N)
    lhs = math.sqrt(2.0 * math.pi) * norms(f)["H2"]
    rhs = boundary_norm_on_image(u, F, M=M)
    return {"lhs": lhs, "rhs": rhs, "defect": abs(lhs - rhs), "tail": f.tail}
