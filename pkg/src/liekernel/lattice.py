"""Winding lattices, domain sublattices, image sets, and alcove reduction.

The compact winding lattice is spanned by the simple coroots; translations of
the radial vector by 2*pi times a lattice point leave every central function
unchanged.  On a non-compact evolution domain only the sublattice that
vanishes along the imaginary coordinate directions survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy
from sympy.matrices.normalforms import hermite_normal_form

from .errors import ArgumentError, InternalError, ResourceError
from .rootsys import RootSystem
from .weyl import WeylElement, WeylGroup, reflection_matrix

__all__ = [
    "REAL",
    "IMAGINARY",
    "RadialPoint",
    "WindingLattice",
    "winding_lattice",
    "domain_sublattice",
    "enumerate_points",
    "image_set",
    "canonicalize",
    "reduce_lexmax",
]

REAL = "R"
IMAGINARY = "I"

_POINT_CAP = 10**7
_WALL_EPS = 1e-12


@dataclass(frozen=True)
class RadialPoint:
    """Radial coordinates with a per-axis real/imaginary signature.

    ``values[j]`` stores phi_j on REAL axes and theta_j on IMAGINARY axes;
    the complex radial vector has component phi_j or i*theta_j respectively.
    """

    values: tuple
    signature: tuple

    def __post_init__(self):
        if len(self.values) != len(self.signature):
            raise ArgumentError("values and signature must have equal length")
        if any(s not in (REAL, IMAGINARY) for s in self.signature):
            raise ArgumentError(f"signature entries must be 'R' or 'I', got {self.signature}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "signature", tuple(self.signature))

    @classmethod
    def real(cls, values) -> "RadialPoint":
        values = np.atleast_1d(np.asarray(values, dtype=float))
        return cls(tuple(values), (REAL,) * len(values))

    @classmethod
    def mixed(cls, values, signature) -> "RadialPoint":
        values = np.atleast_1d(np.asarray(values, dtype=float))
        return cls(tuple(values), tuple(signature))

    @property
    def rank(self) -> int:
        return len(self.values)

    @property
    def real_axes(self) -> tuple:
        return tuple(j for j, s in enumerate(self.signature) if s == REAL)

    @property
    def imag_axes(self) -> tuple:
        return tuple(j for j, s in enumerate(self.signature) if s == IMAGINARY)

    @property
    def is_compact(self) -> bool:
        return not self.imag_axes

    def complex_vector(self) -> np.ndarray:
        factors = np.where(np.array(self.signature) == REAL, 1.0 + 0j, 1j)
        return np.asarray(self.values) * factors

    def phi_vector(self) -> np.ndarray:
        """Real parts as a full-rank vector (zeros on imaginary axes)."""
        mask = np.array(self.signature) == REAL
        return np.where(mask, np.asarray(self.values), 0.0)

    def theta_vector(self) -> np.ndarray:
        mask = np.array(self.signature) == IMAGINARY
        return np.where(mask, np.asarray(self.values), 0.0)


@dataclass(frozen=True)
class WindingLattice:
    """Integer lattice of winding vectors inside root space.

    ``generators`` are the basis vectors (rows); ``coeffs`` expresses each
    basis vector as integer combinations of the parent compact lattice's
    simple coroots, so sublattices remember where they came from.
    """

    generators: np.ndarray
    coeffs: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def rank(self) -> int:
        return self.generators.shape[1] if self.generators.ndim == 2 else 0

    @property
    def active_mask(self) -> np.ndarray:
        """Which parent coroot directions participate in this lattice."""
        if self.dim == 0:
            return np.zeros(self.coeffs.shape[1], dtype=bool)
        return (self.coeffs != 0).any(axis=0)

    def point(self, mcoeffs) -> np.ndarray:
        return np.asarray(mcoeffs, dtype=float) @ self.generators


def winding_lattice(rs: RootSystem) -> WindingLattice:
    """Full compact winding lattice spanned by the simple coroots."""
    return WindingLattice(generators=rs.coroots, coeffs=np.eye(rs.rank, dtype=int))


def _rationalize(x: float) -> Fraction:
    frac = Fraction(x).limit_denominator(10**6)
    if abs(float(frac) - x) > 1e-9:
        raise InternalError(f"winding-generator component {x} is not rational after row scaling")
    return frac


_sublattice_cache: dict = {}


def domain_sublattice(lat: WindingLattice, domain) -> WindingLattice:
    """Restrict a winding lattice to vectors vanishing on imaginary axes.

    ``domain`` is anything carrying a ``signature`` attribute or a signature
    sequence itself.  The resulting basis is unique (row Hermite normal form
    of the integer coefficient matrix), which keeps emitted tables stable.
    """
    signature = getattr(domain, "signature", domain)
    signature = tuple(signature)
    if len(signature) != lat.rank:
        raise ArgumentError(
            f"signature rank {len(signature)} does not match lattice rank {lat.rank}"
        )
    cache_key = (lat.generators.tobytes(), lat.coeffs.tobytes(), signature)
    cached = _sublattice_cache.get(cache_key)
    if cached is not None:
        return cached
    imag_axes = [j for j, s in enumerate(signature) if s == IMAGINARY]
    if not imag_axes:
        _sublattice_cache[cache_key] = lat
        return lat

    rows = []
    for j in imag_axes:
        row = [lat.generators[i][j] for i in range(lat.dim)]
        nonzero = [abs(x) for x in row if abs(x) > 1e-12]
        scale = min(nonzero) if nonzero else 1.0
        rows.append([_rationalize(x / scale) for x in row])
    constraint = sympy.Matrix(rows)
    null = constraint.nullspace()
    if not null:
        sub = WindingLattice(
            generators=np.zeros((0, lat.rank)), coeffs=np.zeros((0, lat.coeffs.shape[1]), dtype=int)
        )
        _sublattice_cache[cache_key] = sub
        return sub
    basis = []
    for vec in null:
        mult = sympy.lcm([sympy.fraction(x)[1] for x in vec])
        ints = [sympy.Integer(x * mult) for x in vec]
        g = sympy.gcd(ints)
        basis.append([x // g for x in ints])
    hnf = hermite_normal_form(sympy.Matrix(basis).T).T
    rel = np.array(hnf.tolist(), dtype=int)
    generators = rel.astype(float) @ lat.generators
    coeffs = rel @ lat.coeffs
    sub = WindingLattice(generators=generators, coeffs=coeffs)
    _sublattice_cache[cache_key] = sub
    return sub


def enumerate_points(lat: WindingLattice, phi, t_like: float, tol: float, lam: float = 1.0) -> np.ndarray:
    """Lattice points whose Gaussian path weight survives a relative cutoff.

    A point m is kept while exp(-lam |phi + 2 pi m|^2 / (4 t_like)) is at
    least ``tol`` times the largest such weight.  Points come back sorted by
    distance then lexicographically.
    """
    if tol <= 0:
        raise ArgumentError(f"tol must be positive, got {tol}")
    if t_like <= 0:
        raise ArgumentError(f"t_like must be positive, got {t_like}")
    rank = lat.rank
    if lat.dim == 0:
        return np.zeros((1, rank))
    x0 = _real_vector(phi, rank)

    gens = lat.generators
    gram = gens @ gens.T
    center = np.linalg.solve(gram, gens @ (-x0 / (2.0 * np.pi)))
    c_star = np.round(center).astype(int)
    d2_min = _dist2(x0, c_star, gens)
    # the rounded center is not always the true closest point; scan neighbors
    for delta in np.ndindex(*(3,) * lat.dim):
        cand = c_star + np.array(delta) - 1
        d2_min = min(d2_min, _dist2(x0, cand, gens))

    radius2 = d2_min + 4.0 * t_like * np.log(1.0 / tol) / lam
    inv_gram = np.linalg.inv(gram)
    spans = np.sqrt(np.maximum(np.diag(inv_gram), 0.0)) * np.sqrt(max(radius2, 0.0)) / (2.0 * np.pi)
    lows = np.floor(center - spans - 1).astype(int)
    highs = np.ceil(center + spans + 1).astype(int)
    count = np.prod(highs - lows + 1.0)
    if count > _POINT_CAP:
        raise ResourceError(
            f"lattice cutoff needs ~{int(count)} candidate points (> {_POINT_CAP}); "
            "increase tol or shorten the time step"
        )

    axes = [np.arange(lo, hi + 1) for lo, hi in zip(lows, highs)]
    mesh = np.meshgrid(*axes, indexing="ij")
    coeffs = np.stack([m.ravel() for m in mesh], axis=-1)
    pts = coeffs @ gens
    d2 = ((x0 + 2.0 * np.pi * pts) ** 2).sum(axis=1)
    keep = d2 <= radius2 + 1e-12 * max(1.0, radius2)
    pts = pts[keep]
    d2 = d2[keep]
    order = np.lexsort(tuple(np.round(pts[:, j], 9) for j in range(rank - 1, -1, -1)) + (np.round(d2, 9),))
    return pts[order]


def _real_vector(phi, rank: int) -> np.ndarray:
    if isinstance(phi, RadialPoint):
        vec = phi.phi_vector()
    else:
        vec = np.real(np.asarray(phi, dtype=complex))
    if vec.shape != (rank,):
        raise ArgumentError(f"phi must have length {rank}, got shape {vec.shape}")
    return vec.astype(float)


def _dist2(x0, coeffs, gens) -> float:
    v = x0 + 2.0 * np.pi * (np.asarray(coeffs, dtype=float) @ gens)
    return float(v @ v)


def image_set(
    rs: RootSystem,
    group: WeylGroup,
    lat: WindingLattice,
    phi,
    t_like: float = 1.0,
    tol: float = 1e-14,
) -> list:
    """Signed images sigma(phi + 2 pi m) of a radial point.

    Returns ``(point, sign)`` pairs with sign the parity of the reflection,
    for every Weyl element and every lattice point inside the cutoff.
    """
    cv = phi.complex_vector() if isinstance(phi, RadialPoint) else np.asarray(phi, dtype=complex)
    points = enumerate_points(lat, phi, t_like, tol, lam=rs.lam)
    out = []
    for elem in group:
        for m in points:
            out.append((elem.matrix @ (cv + 2.0 * np.pi * m), elem.parity))
    return out


def _coeffs_of(lat: WindingLattice, vector: np.ndarray) -> np.ndarray:
    sol, *_ = np.linalg.lstsq(lat.generators.T, vector, rcond=None)
    rounded = np.round(sol)
    if not np.allclose(sol, rounded, atol=1e-8) or not np.allclose(
        rounded @ lat.generators, vector, atol=1e-8
    ):
        raise InternalError(f"vector {vector} is not a lattice point")
    return rounded.astype(int)


def canonicalize(
    rs: RootSystem, group: WeylGroup, lat: WindingLattice, phi: RadialPoint
) -> tuple:
    """Reduce a radial point to its canonical representative.

    Compact points land in the Weyl alcove (gamma.phi >= 0 for simple roots,
    highest_root.phi <= 2 pi).  Mixed points get their real coordinates
    reduced modulo the domain sublattice, then the lexicographically largest
    image under the signature-preserving Weyl elements is chosen.  Returns
    ``(canonical, sigma, m)`` with ``canonical = sigma(phi + 2 pi m)`` and
    ``m`` integer coefficients over the simple coroots.
    """
    if phi.is_compact:
        return _canonicalize_compact(rs, lat, phi)
    return _canonicalize_mixed(rs, group, lat, phi)


def _canonicalize_compact(rs: RootSystem, lat: WindingLattice, phi: RadialPoint):
    x = np.asarray(phi.values, dtype=float)
    sigma = np.eye(rs.rank)
    mcoeffs = np.zeros(rs.rank, dtype=int)
    highest = rs.highest_root
    hvee = 2.0 * highest / (highest @ highest)
    hvee_coeffs = _coeffs_of(lat, hvee)
    simple_refl = [reflection_matrix(g) for g in rs.simple_roots]
    refl_h = reflection_matrix(highest)

    for _ in range(100000):
        moved = False
        for g, refl in zip(rs.simple_roots, simple_refl):
            if g @ x < -_WALL_EPS:
                x = refl @ x
                sigma = refl @ sigma
                moved = True
        if highest @ x > 2.0 * np.pi + _WALL_EPS:
            x = refl_h @ x + 2.0 * np.pi * hvee
            sigma = refl_h @ sigma
            mcoeffs = mcoeffs + _coeffs_of(lat, sigma.T @ hvee)
            moved = True
        if not moved:
            break
    else:
        raise InternalError("alcove reduction did not terminate")

    parity = int(round(np.linalg.det(sigma)))
    return (
        RadialPoint.real(x),
        WeylElement(matrix=sigma, parity=parity),
        mcoeffs,
    )


def _signature_preserving(group: WeylGroup, signature) -> list:
    """Weyl elements mapping the real and imaginary axis spans to themselves."""
    real_axes = [j for j, s in enumerate(signature) if s == REAL]
    imag_axes = [j for j, s in enumerate(signature) if s == IMAGINARY]
    if not real_axes or not imag_axes:
        return list(group.elements)
    blocks = group.matrices[:, imag_axes][:, :, real_axes]
    mask = np.abs(blocks).max(axis=(1, 2)) <= 1e-10
    return [e for e, ok in zip(group.elements, mask) if ok]


def reduce_lexmax(group: WeylGroup, lat: WindingLattice, phi: RadialPoint):
    """Deterministic orbit representative under W x lattice translations.

    Babai-reduces the coordinates modulo the sublattice of ``lat`` compatible
    with the point's signature, then keeps the lexicographically largest
    image under the signature-preserving Weyl elements.  Complete: orbit
    companions map to the same representative (cell reduction kills lattice
    offsets exactly, and candidates range over the full stabilizer coset).
    Returns ``(canonical, sigma, m)`` with canonical = sigma(phi + 2 pi m),
    m in integer coordinates over ``lat``'s basis.
    """
    sub = domain_sublattice(lat, phi.signature)
    values = np.asarray(phi.values, dtype=float)
    candidates = []
    for elem in _signature_preserving(group, phi.signature):
        y = elem.matrix @ values
        if sub.dim:
            center = np.linalg.solve(sub.generators @ sub.generators.T, sub.generators @ y)
            c = -np.round(center / (2.0 * np.pi)).astype(int)
            y = y + 2.0 * np.pi * (c @ sub.generators)
            full = c @ sub.coeffs
        else:
            full = np.zeros(lat.coeffs.shape[1], dtype=int)
        key = tuple(np.round(y, 10))
        candidates.append((key, y, elem, full))
    key, y, elem, full = max(candidates, key=lambda item: item[0])
    # m is applied before sigma: canonical = sigma(phi + 2 pi m)
    mcoeffs = _coeffs_of(lat, elem.matrix.T @ (full @ lat.generators))
    return RadialPoint(tuple(y), phi.signature), elem, mcoeffs


def _canonicalize_mixed(rs: RootSystem, group: WeylGroup, lat: WindingLattice, phi: RadialPoint):
    return reduce_lexmax(group, lat, phi)
