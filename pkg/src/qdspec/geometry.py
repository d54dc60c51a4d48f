"""Planar domains given by smooth boundary parametrizations.

A domain is one of three curve families (disk, ellipse, star-shaped
radial-Fourier), all simple closed C^2 curves by construction.  Every
solver in the package reduces its integrals to boundary quadrature on
the periodic trapezoidal grid built here, so tangents, normals and
curvature are computed from the analytic derivatives of the
parametrization, never from differencing.

Orientation convention: the parametrization runs counterclockwise, the
outward normal ``nu`` and unit tangent ``tau`` satisfy ``tau = i*nu``
in complex notation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "BoundaryCurve",
    "QuadratureGrid",
    "InvalidCurveError",
    "DomainSpecError",
    "disk",
    "ellipse",
    "radial_fourier",
    "build_grid",
    "measure",
    "normalize_area",
    "interior_quadrature",
    "load_domain",
    "parse_domain_spec",
]


class InvalidCurveError(ValueError):
    """Raised when curve parameters do not describe a valid Jordan curve."""


class DomainSpecError(ValueError):
    """Raised on malformed domain-spec files (unknown keys, bad values)."""


@dataclass(frozen=True)
class BoundaryCurve:
    """A parametrized boundary of a bounded simply connected domain.

    kind is one of ``disk``, ``ellipse``, ``radial_fourier``.  For the
    radial-Fourier family the boundary is r(t) = c0 + sum_k (cos_k cos(kt)
    + sin_k sin(kt)) traced about ``center``; positivity of r is required.
    """

    kind: str
    radius: float = 0.0
    semi_major: float = 0.0
    semi_minor: float = 0.0
    c0: float = 0.0
    cos_coeffs: tuple[float, ...] = field(default_factory=tuple)
    sin_coeffs: tuple[float, ...] = field(default_factory=tuple)
    center: complex = 0.0 + 0.0j

    def __post_init__(self):
        if self.kind == "disk":
            if self.radius <= 0:
                raise InvalidCurveError("disk radius must be positive")
        elif self.kind == "ellipse":
            if self.semi_major <= 0 or self.semi_minor <= 0:
                raise InvalidCurveError("ellipse semi-axes must be positive")
        elif self.kind == "radial_fourier":
            t = np.linspace(0.0, 2 * np.pi, 4096, endpoint=False)
            if np.min(self._radial(t)) <= 0:
                raise InvalidCurveError("invalid curve: radial function not positive")
        else:
            raise InvalidCurveError(f"unknown curve kind {self.kind!r}")

    # -- parametrization and its analytic derivatives -------------------

    def _radial(self, t: np.ndarray) -> np.ndarray:
        r = np.full_like(t, self.c0, dtype=float)
        for k, c in enumerate(self.cos_coeffs, start=1):
            r += c * np.cos(k * t)
        for k, s in enumerate(self.sin_coeffs, start=1):
            r += s * np.sin(k * t)
        return r

    def _radial_d(self, t: np.ndarray) -> np.ndarray:
        r = np.zeros_like(t, dtype=float)
        for k, c in enumerate(self.cos_coeffs, start=1):
            r -= c * k * np.sin(k * t)
        for k, s in enumerate(self.sin_coeffs, start=1):
            r += s * k * np.cos(k * t)
        return r

    def _radial_dd(self, t: np.ndarray) -> np.ndarray:
        r = np.zeros_like(t, dtype=float)
        for k, c in enumerate(self.cos_coeffs, start=1):
            r -= c * k * k * np.cos(k * t)
        for k, s in enumerate(self.sin_coeffs, start=1):
            r -= s * k * k * np.sin(k * t)
        return r

    def point(self, t: np.ndarray) -> np.ndarray:
        """Boundary point z(t) as a complex array."""
        t = np.asarray(t, dtype=float)
        if self.kind == "disk":
            return self.center + self.radius * np.exp(1j * t)
        if self.kind == "ellipse":
            return self.center + self.semi_major * np.cos(t) + 1j * self.semi_minor * np.sin(t)
        return self.center + self._radial(t) * np.exp(1j * t)

    def velocity(self, t: np.ndarray) -> np.ndarray:
        """dz/dt from the analytic derivative of the parametrization."""
        t = np.asarray(t, dtype=float)
        if self.kind == "disk":
            return 1j * self.radius * np.exp(1j * t)
        if self.kind == "ellipse":
            return -self.semi_major * np.sin(t) + 1j * self.semi_minor * np.cos(t)
        return (self._radial_d(t) + 1j * self._radial(t)) * np.exp(1j * t)

    def acceleration(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "disk":
            return -self.radius * np.exp(1j * t)
        if self.kind == "ellipse":
            return -self.semi_major * np.cos(t) - 1j * self.semi_minor * np.sin(t)
        r, rd, rdd = self._radial(t), self._radial_d(t), self._radial_dd(t)
        return (rdd - r + 2j * rd) * np.exp(1j * t)

    # -- exact bookkeeping ----------------------------------------------

    def area_exact(self) -> float:
        """Closed-form enclosed area (all three families admit one)."""
        if self.kind == "disk":
            return math.pi * self.radius**2
        if self.kind == "ellipse":
            return math.pi * self.semi_major * self.semi_minor
        coeff_energy = sum(c * c for c in self.cos_coeffs) + sum(s * s for s in self.sin_coeffs)
        return math.pi * (self.c0**2 + 0.5 * coeff_energy)

    def inradius(self) -> float:
        """Distance from ``center`` to the nearest boundary point."""
        if self.kind == "disk":
            return self.radius
        if self.kind == "ellipse":
            return min(self.semi_major, self.semi_minor)
        t = np.linspace(0.0, 2 * np.pi, 4096, endpoint=False)
        return float(np.min(self._radial(t)))

    def boundary_radius(self, phi: np.ndarray) -> np.ndarray:
        """Radial extent of the domain about ``center`` at polar angle phi.

        Valid because all supported kinds are star-shaped about their center.
        """
        phi = np.asarray(phi, dtype=float)
        if self.kind == "disk":
            return np.full_like(phi, self.radius)
        if self.kind == "ellipse":
            a, b = self.semi_major, self.semi_minor
            return a * b / np.sqrt((b * np.cos(phi)) ** 2 + (a * np.sin(phi)) ** 2)
        return self._radial(phi)

    def scaled(self, factor: float) -> "BoundaryCurve":
        """Dilation about the center by ``factor``."""
        if self.kind == "disk":
            return replace(self, radius=self.radius * factor)
        if self.kind == "ellipse":
            return replace(self, semi_major=self.semi_major * factor, semi_minor=self.semi_minor * factor)
        return replace(
            self,
            c0=self.c0 * factor,
            cos_coeffs=tuple(c * factor for c in self.cos_coeffs),
            sin_coeffs=tuple(s * factor for s in self.sin_coeffs),
        )


def disk(radius: float, center: complex = 0.0) -> BoundaryCurve:
    return BoundaryCurve(kind="disk", radius=radius, center=center)


def ellipse(semi_major: float, semi_minor: float, center: complex = 0.0) -> BoundaryCurve:
    return BoundaryCurve(kind="ellipse", semi_major=semi_major, semi_minor=semi_minor, center=center)


def radial_fourier(c0: float, cos_coeffs=(), sin_coeffs=(), center: complex = 0.0) -> BoundaryCurve:
    return BoundaryCurve(
        kind="radial_fourier",
        c0=c0,
        cos_coeffs=tuple(cos_coeffs),
        sin_coeffs=tuple(sin_coeffs),
        center=center,
    )


@dataclass(frozen=True)
class QuadratureGrid:
    """Periodic trapezoidal boundary grid.

    points, tangents and normals are complex arrays of length M;
    weights are arc-length weights so that sum(weights) ~= perimeter
    with spectral accuracy on these smooth curves.
    """

    t: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    curvatures: np.ndarray
    velocities: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.points)

    @property
    def perimeter(self) -> float:
        return float(np.sum(self.weights))


def build_grid(curve: BoundaryCurve, M: int) -> QuadratureGrid:
    """Equispaced-in-parameter periodic quadrature grid with M nodes.

    Requires M >= 16 and even; the trapezoidal rule is spectrally
    accurate for the smooth closed curves supported here.
    """
    if M < 16 or M % 2 != 0:
        raise ValueError("node count M must be even and at least 16")
    t = 2 * np.pi * np.arange(M) / M
    if curve.kind == "radial_fourier" and np.min(curve._radial(t)) <= 0:
        raise InvalidCurveError("invalid curve: radial function not positive at a node")
    z = curve.point(t)
    zp = curve.velocity(t)
    zpp = curve.acceleration(t)
    speed = np.abs(zp)
    tau = zp / speed
    nu = -1j * tau
    w = speed * (2 * np.pi / M)
    # signed curvature Im(conj(z') z'') / |z'|^3
    kappa = np.imag(np.conj(zp) * zpp) / speed**3
    return QuadratureGrid(t=t, points=z, tangents=tau, normals=nu, weights=w, curvatures=kappa, velocities=zp)


def measure(curve: BoundaryCurve, M: int = 256) -> dict:
    """Area and perimeter from boundary quadrature.

    The area uses the complex Green identity area = (1/2i) oint conj(z) dz,
    which keeps every domain integral in the package on the boundary grid.
    """
    g = build_grid(curve, M)
    dt = 2 * np.pi / M
    area = float(np.real(np.sum(np.conj(g.points) * g.velocities) * dt / 2j))
    return {"area": area, "perimeter": g.perimeter}


def normalize_area(curve: BoundaryCurve, target_area: float) -> BoundaryCurve:
    """Rescale the curve about its center so the enclosed area is target_area."""
    if target_area <= 0:
        raise ValueError("target_area must be positive")
    return curve.scaled(math.sqrt(target_area / curve.area_exact()))


def interior_quadrature(curve: BoundaryCurve, n_radial: int = 48, n_angular: int = 256):
    """Tensor quadrature over the domain interior.

    Gauss-Legendre in the radial direction along rays from the center,
    trapezoidal in angle; exact enough for the smooth integrands used in
    norm checks.  Returns (points, weights) with complex points.
    """
    phi = 2 * np.pi * np.arange(n_angular) / n_angular
    rmax = curve.boundary_radius(phi)
    xg, wg = np.polynomial.legendre.leggauss(n_radial)
    # map [-1, 1] -> [0, rmax(phi)] for each ray
    r = 0.5 * rmax[None, :] * (xg[:, None] + 1.0)
    wr = 0.5 * rmax[None, :] * wg[:, None]
    pts = curve.center + r * np.exp(1j * phi[None, :])
    wts = wr * r * (2 * np.pi / n_angular)
    return pts.ravel(), wts.ravel()


_SCALAR_KEYS = {"radius", "semi_major", "semi_minor", "c0", "normalize_area"}


def parse_domain_spec(text: str) -> BoundaryCurve:
    """Parse a ``key = value`` domain-spec file into a BoundaryCurve.

    Lines starting with ``#`` (or inline ``#`` suffixes) are comments.
    Unknown keys are a hard error.
    """
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainSpecError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in entries:
            raise DomainSpecError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value

    if "kind" not in entries:
        raise DomainSpecError("missing required key 'kind'")
    kind = entries.pop("kind").replace("-", "_")
    if kind not in ("disk", "ellipse", "radial_fourier"):
        raise DomainSpecError(f"unknown kind {kind!r}")

    scalars: dict[str, float] = {}
    cos_coeffs: dict[int, float] = {}
    sin_coeffs: dict[int, float] = {}
    for key, value in entries.items():
        try:
            number = float(value)
        except ValueError as exc:
            raise DomainSpecError(f"key {key!r}: not a number: {value!r}") from exc
        if key in _SCALAR_KEYS:
            scalars[key] = number
        elif key.startswith("cos") and key[3:].isdigit():
            cos_coeffs[int(key[3:])] = number
        elif key.startswith("sin") and key[3:].isdigit():
            sin_coeffs[int(key[3:])] = number
        else:
            raise DomainSpecError(f"unknown key {key!r}")

    target = scalars.pop("normalize_area", None)
    if kind == "disk":
        allowed = {"radius"}
    elif kind == "ellipse":
        allowed = {"semi_major", "semi_minor"}
    else:
        allowed = {"c0"}
    extra = set(scalars) - allowed
    if extra or (cos_coeffs or sin_coeffs) and kind != "radial_fourier":
        bad = sorted(extra) or sorted(f"cos{k}" for k in cos_coeffs) + sorted(f"sin{k}" for k in sin_coeffs)
        raise DomainSpecError(f"keys {bad} not valid for kind {kind!r}")
    missing = allowed - set(scalars)
    if missing:
        raise DomainSpecError(f"missing keys {sorted(missing)} for kind {kind!r}")

    if kind == "disk":
        curve = disk(scalars["radius"])
    elif kind == "ellipse":
        curve = ellipse(scalars["semi_major"], scalars["semi_minor"])
    else:
        kmax = max([0, *cos_coeffs, *sin_coeffs])
        curve = radial_fourier(
            scalars["c0"],
            cos_coeffs=tuple(cos_coeffs.get(k, 0.0) for k in range(1, kmax + 1)),
            sin_coeffs=tuple(sin_coeffs.get(k, 0.0) for k in range(1, kmax + 1)),
        )
    if target is not None:
        curve = normalize_area(curve, target)
    return curve


def load_domain(path) -> BoundaryCurve:
    """Read a domain-spec text file; see parse_domain_spec."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_domain_spec(fh.read())
