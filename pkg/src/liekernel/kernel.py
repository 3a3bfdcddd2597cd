"""Evolution kernels: dual series on compact groups, domain-restricted path
sums on non-compact groups, and the rank-1 closed forms used as oracles.

Conventions.  The complex power (4 pi i t)^{-n/2} is exp(-(n/2) Log(4 pi i t))
with the principal logarithm; heat mode substitutes t = -i tau, which makes
the argument positive real, and the real-time phase follows by continuity
from the lower half plane.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import roots_legendre

from .errors import (
    ArgumentError,
    BranchPointError,
    ConvergenceError,
    PoleError,
    ResourceError,
    SingularPointError,
    UnsupportedOperationError,
)
from .lattice import RadialPoint, WindingLattice, domain_sublattice, enumerate_points, winding_lattice
from .rootsys import RootSystem
from .volumes import coset_volume, group_volume
from .weyl import WeylGroup, generate_weyl_group, weyl_function

__all__ = [
    "TimeMode",
    "TimeParameter",
    "ConvergenceTag",
    "KernelValue",
    "KernelRequest",
    "compact_pathsum",
    "compact_spectral",
    "noncompact_pathsum",
    "su2_resolvent",
    "su2_resolvent_poles",
    "su2_spectral_series",
    "su2_pathsum_series",
    "su11_kernel_d0",
    "su11_resolvent_d0",
    "radial_convolve",
    "integrate_central_su2",
]

_WALL_TOL = 1e-12


class TimeMode(enum.Enum):
    REAL_TIME = "real"
    HEAT = "heat"


class ConvergenceTag(enum.Enum):
    CONVERGENT = "CONVERGENT"
    OSCILLATORY = "OSCILLATORY"
    GROWING = "GROWING"


@dataclass(frozen=True)
class TimeParameter:
    """Evolution time: real time t (with damping epsilon) or heat time tau."""

    value: float
    mode: TimeMode = TimeMode.REAL_TIME
    epsilon: float = 0.0

    def __post_init__(self):
        if self.mode is TimeMode.HEAT and not self.value > 0:
            raise ArgumentError(f"heat mode needs tau > 0, got {self.value}")
        if self.epsilon < 0:
            raise ArgumentError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.mode is TimeMode.REAL_TIME and self.value == 0:
            raise ArgumentError("real time t must be nonzero")

    @classmethod
    def heat(cls, tau: float) -> "TimeParameter":
        return cls(value=tau, mode=TimeMode.HEAT)

    @classmethod
    def real(cls, t: float, epsilon: float = 0.0) -> "TimeParameter":
        return cls(value=t, mode=TimeMode.REAL_TIME, epsilon=epsilon)

    @property
    def effective(self) -> complex:
        """Complex time entering every formula."""
        if self.mode is TimeMode.HEAT:
            return -1j * self.value
        return self.value - 1j * self.epsilon

    @property
    def conditionally_convergent(self) -> bool:
        return self.mode is TimeMode.REAL_TIME and self.epsilon == 0.0

    def decay_scale(self) -> float:
        """t-like scale controlling the Gaussian decay of lattice weights.

        In heat mode this is tau; with damping it is |t|^2/epsilon.  Without
        damping the lattice sum only converges conditionally, so a finite
        Abel-style window |t|^2 / (1e-3 |t|) stands in and the result is
        tagged OSCILLATORY.
        """
        if self.mode is TimeMode.HEAT:
            return self.value
        t = abs(self.effective) ** 2
        eps = self.epsilon if self.epsilon > 0 else 1e-3 * abs(self.value)
        return t / eps


@dataclass(frozen=True)
class KernelValue:
    value: complex
    tag: ConvergenceTag
    warning: str | None = None

    def __complex__(self):
        return complex(self.value)


@dataclass
class KernelRequest:
    """One kernel evaluation: where, when, and how hard to truncate."""

    rs: RootSystem
    phi: RadialPoint
    time: TimeParameter
    domain: object | None = None
    tol: float = 1e-14
    level_cutoff: int | None = None
    wall_limit: bool = False

    def __post_init__(self):
        if self.phi.rank != self.rs.rank:
            raise ArgumentError("radial point rank does not match root system rank")
        if self.domain is None and not self.phi.is_compact:
            raise ArgumentError("mixed-signature point needs an evolution domain")
        if self.domain is not None:
            dsig = tuple(getattr(self.domain, "signature"))
            if dsig != self.phi.signature:
                raise ArgumentError(
                    f"point signature {self.phi.signature} does not match domain {dsig}"
                )


_lattice_cache: dict[tuple, WindingLattice] = {}


def _full_lattice(rs: RootSystem) -> WindingLattice:
    key = rs.cache_key()
    if key not in _lattice_cache:
        _lattice_cache[key] = winding_lattice(rs)
    return _lattice_cache[key]


def _prefactor(n: int, t: complex) -> complex:
    return np.exp(-(n / 2.0) * np.log(4j * np.pi * t))


def _pathsum_terms(rs: RootSystem, cv: np.ndarray, points: np.ndarray, t: complex) -> complex:
    """Sum of van Vleck terms over the given winding points."""
    denom = np.prod(2.0 * np.sin(rs.positive_roots @ cv / 2.0))
    shifted = cv[None, :] + 2.0 * np.pi * points
    nums = np.prod(shifted @ rs.positive_roots.T, axis=1)
    action = np.einsum("ki,ki->k", shifted, shifted)
    phases = np.exp(1j * rs.lam * action / (4.0 * t) + 1j * (rs.rho @ rs.rho) / rs.lam * t)
    return complex((nums / denom) @ phases)


def _wall_guard(rs: RootSystem, phi_real: np.ndarray, wall_limit: bool):
    w = weyl_function(rs, phi_real)
    if abs(w) > _WALL_TOL:
        return False
    if not wall_limit:
        half = rs.positive_roots @ phi_real / 2.0
        worst = int(np.argmin(np.abs(np.sin(half))))
        raise SingularPointError(
            f"phi lies on a Weyl wall (|w|={abs(w):.2e}); vanishing factor from positive root "
            f"#{worst} = {rs.positive_roots[worst]}; set wall_limit=True for the extrapolated value"
        )
    return True


def _wall_extrapolate(evaluate, phi_values: np.ndarray, direction: np.ndarray) -> complex:
    """Symmetric epsilon-offset + one Richardson step in eps^2."""
    results = []
    for eps in (2e-5, 1e-5):
        pair = (evaluate(phi_values + eps * direction) + evaluate(phi_values - eps * direction)) / 2.0
        results.append(pair)
    f1, f2 = results  # eps and eps/2
    return complex(f2 + (f2 - f1) / 3.0)


def compact_pathsum(req: KernelRequest) -> KernelValue:
    """Kernel on a compact group as the sum over classical paths."""
    if req.domain is not None or not req.phi.is_compact:
        raise ArgumentError("compact_pathsum needs a compact request (no domain)")
    rs = req.rs
    t = req.time.effective
    lat = _full_lattice(rs)
    pref = _prefactor(rs.n, t)
    x = np.asarray(req.phi.values, dtype=float)

    def evaluate(values: np.ndarray) -> complex:
        points = enumerate_points(lat, RadialPoint.real(values), req.time.decay_scale(), req.tol, lam=rs.lam)
        return pref * _pathsum_terms(rs, values.astype(complex), points, t)

    if _wall_guard(rs, x, req.wall_limit):
        value = _wall_extrapolate(evaluate, x, rs.rho)
    else:
        value = evaluate(x)

    if req.time.conditionally_convergent:
        return KernelValue(
            value,
            ConvergenceTag.OSCILLATORY,
            warning="real time with epsilon=0: lattice tail does not decay; "
            "sum truncated on an Abel window",
        )
    return KernelValue(value, ConvergenceTag.CONVERGENT)


def _spectral_levels(rs: RootSystem, t_like: float, tol: float, level_cutoff: int | None):
    """Dominant weights retained by the spectral truncation rule.

    Retains every l whose Boltzmann-like weight exp(-lambda_l * t_like) is
    within tol * 1e-6 of the largest (the margin absorbs dimension growth).
    """
    if level_cutoff is not None:
        lmax = level_cutoff
    else:
        lam_cut = math.log(1.0 / (tol * 1e-6)) / t_like
        # per-axis bound: lambda grows at least quadratically along each label
        lmax = 0
        for axis in range(rs.rank):
            lo, hi = 0, 4
            while _casimir_at(rs, axis, hi) < lam_cut:
                hi *= 2
                if hi > 10**6:
                    raise ResourceError("spectral cutoff needs > 1e6 levels; use the path sum")
            lmax = max(lmax, hi)
    labels = []
    lam_cut = math.log(1.0 / (tol * 1e-6)) / t_like if level_cutoff is None else None
    for l in itertools.product(range(lmax + 1), repeat=rs.rank):
        lam_l = _casimir_vec(rs, np.array(l))
        if lam_cut is None or lam_l <= lam_cut:
            labels.append(np.array(l))
    return labels


def _casimir_vec(rs: RootSystem, l: np.ndarray) -> float:
    nvec = (l + 1) @ rs.weights
    return float((nvec @ nvec - rs.rho @ rs.rho) / rs.lam)


def _casimir_at(rs: RootSystem, axis: int, value: int) -> float:
    l = np.zeros(rs.rank, dtype=int)
    l[axis] = value
    return _casimir_vec(rs, l)


_spectral_cache: dict = {}


def _spectral_data(rs: RootSystem, t_like: float, tol: float, level_cutoff: int | None):
    """Vectorized representation data for the retained dominant weights."""
    key = (rs.cache_key(), round(float(t_like), 12), tol, level_cutoff)
    cached = _spectral_cache.get(key)
    if cached is not None:
        return cached
    group = generate_weyl_group(rs)
    labels = _spectral_levels(rs, t_like, tol, level_cutoff)
    nvecs = (np.array(labels) + 1) @ rs.weights
    lam_l = (np.einsum("li,li->l", nvecs, nvecs) - rs.rho @ rs.rho) / rs.lam
    dims = np.prod(nvecs @ rs.positive_roots.T, axis=1) / np.prod(rs.positive_roots @ rs.rho)
    orbits = np.einsum("kij,lj->lki", group.matrices, nvecs)  # (L, |W|, r)
    data = (lam_l, dims, orbits, group.parities.astype(complex))
    if len(_spectral_cache) > 64:
        _spectral_cache.clear()
    _spectral_cache[key] = data
    return data


def compact_spectral(req: KernelRequest) -> KernelValue:
    """Kernel on a compact group as the sum over unitary representations."""
    if req.domain is not None or not req.phi.is_compact:
        raise ArgumentError("compact_spectral needs a compact request (no domain)")
    if req.time.conditionally_convergent:
        raise ConvergenceError(
            "spectral series does not converge for real time with epsilon=0; "
            "supply an Abel regulator epsilon > 0 or use heat mode"
        )
    rs = req.rs
    t = req.time.effective
    vg = group_volume(rs)
    x = np.asarray(req.phi.values, dtype=float)
    lam_l, dims, orbits, parities = _spectral_data(
        rs, req.time.decay_scale(), req.tol, req.level_cutoff
    )

    def evaluate(values: np.ndarray) -> complex:
        w = weyl_function(rs, values)
        numer = np.exp(1j * (orbits @ values)) @ parities  # (L,)
        chi = numer / ((2j) ** rs.p * w)
        return complex((dims * chi * np.exp(-1j * lam_l * t)).sum() / vg)

    if _wall_guard(rs, x, req.wall_limit):
        value = _wall_extrapolate(evaluate, x, rs.rho)
    else:
        value = evaluate(x)
    return KernelValue(value, ConvergenceTag.CONVERGENT)


def noncompact_pathsum(req: KernelRequest) -> KernelValue:
    """Kernel on a non-compact evolution domain by the restricted path sum."""
    if req.domain is None:
        raise ArgumentError("noncompact_pathsum needs an evolution domain")
    rs = req.rs
    t = req.time.effective
    sub = domain_sublattice(_full_lattice(rs), req.domain)
    pref = _prefactor(rs.n, t)
    cv = req.phi.complex_vector()

    phi_r = req.phi.phi_vector()
    if _wall_guard_restricted(rs, req):
        # offset the real coordinates along a direction inside the real span
        direction = _real_span_direction(rs, req.phi)

        def evaluate(values):
            pt = RadialPoint(tuple(values), req.phi.signature)
            points = enumerate_points(sub, pt, req.time.decay_scale(), req.tol, lam=rs.lam)
            return pref * _pathsum_terms(rs, pt.complex_vector(), points, t)

        value = _wall_extrapolate(evaluate, np.asarray(req.phi.values), direction)
    else:
        points = enumerate_points(sub, req.phi, req.time.decay_scale(), req.tol, lam=rs.lam)
        value = pref * _pathsum_terms(rs, cv, points, t)

    tag, warning = _noncompact_tag(rs, req, t)
    return KernelValue(value, tag, warning)


def _real_span_direction(rs: RootSystem, phi: RadialPoint) -> np.ndarray:
    direction = np.zeros(rs.rank)
    for j in phi.real_axes:
        direction[j] = rs.rho[j] if abs(rs.rho[j]) > 1e-9 else 1.0
    if not phi.real_axes:
        direction[:] = 0.0
    return direction


def _wall_guard_restricted(rs: RootSystem, req: KernelRequest) -> bool:
    """Wall handling for mixed points: only exact zeros of w count.

    With imaginary coordinates present, w is complex and vanishes only when
    some alpha.(phi,i theta) hits 2 pi Z on a root orthogonal to the open
    directions; |w| below tolerance is then a genuine singular evaluation.
    """
    w = weyl_function(rs, req.phi.complex_vector())
    if abs(w) > _WALL_TOL:
        return False
    if not req.wall_limit:
        raise SingularPointError(
            f"radial point sits on a wall of the restricted problem (|w|={abs(w):.2e}); "
            "set wall_limit=True for the extrapolated value"
        )
    return True


def _noncompact_tag(rs: RootSystem, req: KernelRequest, t: complex):
    theta = req.phi.theta_vector()
    theta2 = float(theta @ theta)
    # real part of the theta-direction exponent i*lam*(-theta^2)/(4t)
    growth = float(np.real(1j * rs.lam * (-theta2) / (4.0 * t)))
    if req.time.mode is TimeMode.HEAT:
        if theta2 > 0 and growth > 0:
            return (
                ConvergenceTag.GROWING,
                "heat mode on an open torus direction: the theta exponent grows; "
                "no stable heat solution exists on this domain",
            )
        return ConvergenceTag.CONVERGENT, None
    if req.time.conditionally_convergent:
        return (
            ConvergenceTag.OSCILLATORY,
            "real time with epsilon=0: conditionally defined, truncated on an Abel window",
        )
    if growth > 1e-15:
        return (
            ConvergenceTag.GROWING,
            "damping epsilon > 0 makes the open-direction factor grow",
        )
    return ConvergenceTag.CONVERGENT, None


# ---------------------------------------------------------------------------
# rank-1 closed forms (oracles)
# ---------------------------------------------------------------------------


def su2_resolvent(phi: float, lam: complex) -> complex:
    """Radial resolvent on the compact rank-1 group, phi in (0, 2 pi).

    Closed form sin(k(2 pi - phi)) / (8 sqrt2 pi sin(2 k pi) sin(phi/2))
    with k^2 = 1/4 + 2 lam; simple poles at lam = (n^2 - 1)/8.
    """
    if not 0.0 < phi < 2.0 * np.pi:
        raise ArgumentError(f"phi must lie in (0, 2 pi), got {phi}")
    lam = complex(lam)
    n_near = round(math.sqrt(max(8.0 * lam.real + 1.0, 0.0)))
    if abs(lam - (n_near**2 - 1) / 8.0) < 1e-12 and abs(lam.imag) < 1e-12:
        raise PoleError(
            f"lambda = {lam} sits on the resolvent pole (n^2-1)/8 with n = {n_near}",
            index=n_near,
        )
    k = np.sqrt(0.25 + 2.0 * lam)
    return complex(
        np.sin(k * (2.0 * np.pi - phi))
        / (8.0 * np.sqrt(2.0) * np.pi * np.sin(2.0 * np.pi * k) * np.sin(phi / 2.0))
    )


def su2_resolvent_poles(lam_max: float) -> list:
    """Locate resolvent poles on the real axis up to lam_max.

    Scans sin(2 pi k(lam)) for sign changes and polishes with brentq; no
    knowledge of the (n^2-1)/8 pattern enters.
    """

    def h(lam):
        return math.sin(2.0 * np.pi * math.sqrt(0.25 + 2.0 * lam))

    lo = -1.0 / 8.0 + 1e-9
    grid = np.linspace(lo, lam_max, max(1000, int((lam_max - lo) * 400)))
    vals = [h(x) for x in grid]
    poles = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            poles.append(float(a))
        elif fa * fb < 0:
            poles.append(float(brentq(h, a, b, xtol=1e-14)))
    return poles


def su2_spectral_series(phi: float, time: TimeParameter, nmax: int = 400) -> complex:
    """Printed rank-1 spectral series with prefactor 1/(32 sqrt2 pi^2).

    The character ratio uses the half-angle sin(n phi/2)/sin(phi/2) that the
    path sum and the resolvent contour fix; see the tests for the term-match
    against the generic engine.
    """
    t = time.effective
    n = np.arange(1, nmax + 1)
    terms = n * np.sin(n * phi / 2.0) / np.sin(phi / 2.0) * np.exp(-1j * (n**2 - 1) / 8.0 * t)
    return complex(terms.sum() / (32.0 * np.sqrt(2.0) * np.pi**2))


def su2_pathsum_series(phi: float, time: TimeParameter, mmax: int = 40) -> complex:
    """Printed rank-1 path sum: (phi + 4 pi m)/(2 sin(phi/2)) van Vleck terms."""
    t = time.effective
    m = np.arange(-mmax, mmax + 1)
    x = phi + 4.0 * np.pi * m
    terms = x / (2.0 * np.sin(phi / 2.0)) * np.exp(1j * x**2 / (2.0 * t) + 1j * t / 8.0)
    return complex(_prefactor(3, t) * terms.sum())


def su11_kernel_d0(theta: float, time: TimeParameter) -> complex:
    """Closed-form kernel on the fully open rank-1 domain."""
    if theta <= 0:
        raise ArgumentError(f"theta must be positive, got {theta}")
    t = time.effective
    return complex(
        _prefactor(3, t)
        * theta
        / (2.0 * np.sinh(theta / 2.0))
        * np.exp(-1j * theta**2 / (2.0 * t) + 1j * t / 8.0)
    )


def su11_resolvent_d0(theta: float, lam: complex) -> complex:
    """Resolvent on the open rank-1 domain, decaying branch.

    exp(-sqrt(1/4 + 2 lam) theta) / (8 sqrt2 pi sinh(theta/2)) with the
    principal square root; for 1/4 + 2 lam < 0 this is the boundary value
    from the upper half lambda plane, matching the printed piecewise form.
    """
    if theta <= 0:
        raise ArgumentError(f"theta must be positive, got {theta}")
    lam = complex(lam)
    if abs(0.25 + 2.0 * lam) < 1e-12:
        raise BranchPointError("lambda = -1/8 is the branch point of the open-domain resolvent")
    root = np.sqrt(0.25 + 2.0 * lam)
    return complex(np.exp(-root * theta) / (8.0 * np.sqrt(2.0) * np.pi * np.sinh(theta / 2.0)))


# ---------------------------------------------------------------------------
# rank-1 radial convolution (semigroup harness)
# ---------------------------------------------------------------------------


def radial_convolve(rs: RootSystem, f_samples, g_samples, gauss_order: int = 48):
    """Convolution of two central functions on the rank-1 compact group.

    Both inputs are samples on the uniform alcove grid [0, 2 pi] (endpoints
    included).  The class angle of a product follows the two-argument cosine
    rule, the coset average is a single Legendre quadrature, and g is cubic-
    spline interpolated.  Only rank 1 ships; the composed radial coordinate
    has no closed two-argument form we implement beyond it.
    """
    if rs.rank != 1:
        raise UnsupportedOperationError("radial_convolve is implemented for rank 1 only")
    f_samples = np.asarray(f_samples)
    g_samples = np.asarray(g_samples)
    if f_samples.shape != g_samples.shape or f_samples.ndim != 1 or len(f_samples) < 8:
        raise ArgumentError("f and g must be equal-length 1-d sample arrays (>= 8 points)")
    npts = len(f_samples)
    grid = np.linspace(0.0, 2.0 * np.pi, npts)
    vgt = coset_volume(rs)
    measure = rs.lam ** 0.5 * 2.0 ** (rs.n - rs.rank) * np.sin(grid / 2.0) ** 2

    nodes, wts = roots_legendre(gauss_order)
    spline = CubicSpline(grid, g_samples)

    cos_half = np.cos(grid / 2.0)
    sin_half = np.sin(grid / 2.0)
    out = np.empty(npts, dtype=np.result_type(f_samples, g_samples, np.float64))
    for i, x in enumerate(grid):
        cx, sx = np.cos(x / 2.0), np.sin(x / 2.0)
        # class angle of y^{-1} x over axis angle u = cos(omega)
        arg = cx * cos_half[:, None] + sx * sin_half[:, None] * nodes[None, :]
        c = 2.0 * np.arccos(np.clip(arg, -1.0, 1.0))
        inner = (spline(c) * wts[None, :]).sum(axis=1) * (vgt / 2.0)
        out[i] = _simpson(f_samples * measure * inner, grid)
    return out


def _simpson(y, x):
    from scipy.integrate import simpson

    return simpson(y, x=x)


def integrate_central_su2(rs: RootSystem, func) -> float:
    """Integral of a central function against the invariant measure (rank 1)."""
    if rs.rank != 1:
        raise UnsupportedOperationError("implemented for rank 1 only")
    vgt = coset_volume(rs)

    def integrand(x):
        return float(
            np.real(func(x)) * vgt * rs.lam**0.5 * 2.0 ** (rs.n - rs.rank) * np.sin(x / 2.0) ** 2
        )

    val, _ = quad(integrand, 0.0, 2.0 * np.pi, limit=300)
    return val
