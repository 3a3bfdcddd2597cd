"""Weyl group machinery: reflections, characters, dimensions, and the
exponential-sum calculus behind the intertwining operator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, InternalError, SingularPointError
from .rootsys import RootSystem

__all__ = [
    "WeylElement",
    "WeylGroup",
    "ExpSum",
    "generate_weyl_group",
    "weyl_function",
    "character",
    "dimension",
    "casimir_eigenvalue",
    "apply_intertwiner",
    "symmetrize",
]

_CLOSURE_CAP = 10**6
_MERGE_DECIMALS = 9
_WALL_TOL = 1e-12


@dataclass(frozen=True)
class WeylElement:
    """One orthogonal transform of root space with its parity."""

    matrix: np.ndarray
    parity: int

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v

    def __repr__(self):
        return f"WeylElement(parity={self.parity:+d})"


class WeylGroup:
    """Finite reflection group; elements listed once, identity first."""

    def __init__(self, elements: list[WeylElement]):
        self.elements = elements
        self.matrices = np.stack([e.matrix for e in elements])
        self.parities = np.array([e.parity for e in elements])

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"WeylGroup(order={self.order})"


def reflection_matrix(root: np.ndarray) -> np.ndarray:
    root = np.asarray(root, dtype=float)
    return np.eye(len(root)) - 2.0 * np.outer(root, root) / (root @ root)


_group_cache: dict[tuple, WeylGroup] = {}


def generate_weyl_group(rs: RootSystem) -> WeylGroup:
    """Closure of the simple-root reflections, deduplicated on a rounded grid."""
    key = rs.cache_key()
    cached = _group_cache.get(key)
    if cached is not None:
        return cached

    gens = [reflection_matrix(g) for g in rs.simple_roots]
    identity = np.eye(rs.rank)
    seen = {tuple(np.round(identity, _MERGE_DECIMALS).ravel()): identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for m in frontier:
            for g in gens:
                cand = g @ m
                k = tuple(np.round(cand, _MERGE_DECIMALS).ravel())
                if k not in seen:
                    if len(seen) >= _CLOSURE_CAP:
                        raise InternalError(
                            f"Weyl closure for {rs.name} exceeded {_CLOSURE_CAP} elements; "
                            "root system looks malformed"
                        )
                    seen[k] = cand
                    fresh.append(cand)
        frontier = fresh

    elements = []
    for m in seen.values():
        det = np.linalg.det(m)
        parity = int(round(det))
        if abs(det - parity) > 1e-9 or parity not in (-1, 1):
            raise InternalError("Weyl element determinant is not +-1")
        elements.append(WeylElement(matrix=m, parity=parity))
    elements.sort(key=lambda e: tuple(np.round(e.matrix, _MERGE_DECIMALS).ravel()), reverse=True)
    group = WeylGroup(elements)
    _group_cache[key] = group
    return group


@dataclass(frozen=True)
class ExpSum:
    """Finite sum of complex exponentials sum_k c_k exp(i v_k . phi).

    Frequencies are real r-vectors; evaluation accepts complex phi, which is
    how the non-compact radial points enter.
    """

    coeffs: np.ndarray
    freqs: np.ndarray

    @staticmethod
    def from_terms(terms) -> "ExpSum":
        coeffs = np.array([c for c, _ in terms], dtype=complex)
        freqs = np.array([np.asarray(v, dtype=float) for _, v in terms])
        return ExpSum(coeffs, freqs).merged()

    @staticmethod
    def single(coeff, freq) -> "ExpSum":
        return ExpSum(np.array([coeff], dtype=complex), np.atleast_2d(np.asarray(freq, float)))

    def merged(self) -> "ExpSum":
        """Canonical form: distinct frequencies (rounded-grid key), sorted."""
        buckets: dict[tuple, list] = {}
        for c, v in zip(self.coeffs, self.freqs):
            key = tuple(np.round(v, _MERGE_DECIMALS))
            if key in buckets:
                buckets[key][0] += c
            else:
                buckets[key] = [c, v]
        items = sorted(buckets.items())
        coeffs = np.array([c for _, (c, _) in items], dtype=complex)
        freqs = np.array([v for _, (_, v) in items]) if items else np.zeros((0, self.freqs.shape[1]))
        keep = coeffs != 0
        return ExpSum(coeffs[keep], freqs[keep])

    def evaluate(self, phi) -> complex:
        if len(self.coeffs) == 0:
            return 0j
        phi = np.asarray(phi)
        return complex(self.coeffs @ np.exp(1j * (self.freqs @ phi)))

    def map_coeffs(self, factor_of_freq) -> "ExpSum":
        factors = np.array([factor_of_freq(v) for v in self.freqs], dtype=complex)
        return ExpSum(self.coeffs * factors, self.freqs).merged()

    def __len__(self):
        return len(self.coeffs)


def weyl_function(rs: RootSystem, phi) -> complex:
    """w(phi) = prod over positive roots of sin(alpha.phi/2); complex-safe."""
    phi = np.asarray(phi)
    half = rs.positive_roots @ phi / 2.0
    return complex(np.prod(np.sin(half)))


def _check_dominant(l, rank) -> np.ndarray:
    l = np.asarray(l)
    if l.shape != (rank,):
        raise ArgumentError(f"weight vector must have length {rank}, got shape {l.shape}")
    li = np.round(l).astype(int)
    if not np.allclose(l, li) or (li < 0).any():
        raise ArgumentError(f"dominant weight must be componentwise nonnegative integers, got {l}")
    return li


def character_numerator(rs: RootSystem, l, group: WeylGroup | None = None) -> ExpSum:
    """Signed Weyl orbit sum of exp(i (l+rho).phi) as an ExpSum."""
    group = group or generate_weyl_group(rs)
    li = _check_dominant(l, rs.rank)
    nvec = (li + 1) @ rs.weights
    freqs = np.einsum("kij,j->ki", group.matrices, nvec)
    return ExpSum(group.parities.astype(complex), freqs).merged()


def character(rs: RootSystem, l, phi, group: WeylGroup | None = None, limit: bool = False) -> complex:
    """Weyl character chi_l(phi).

    At Weyl walls the quotient is 0/0; pass ``limit=True`` to evaluate by
    offsetting along rho and extrapolating, which at phi=0 returns the
    representation dimension.
    """
    group = group or generate_weyl_group(rs)
    num = character_numerator(rs, l, group)
    phi = np.asarray(phi, dtype=complex if np.iscomplexobj(phi) else float)

    def direct(point):
        w = weyl_function(rs, point)
        return num.evaluate(point) / ((2j) ** rs.p * w)

    w0 = weyl_function(rs, phi)
    if abs(w0) > _WALL_TOL:
        return direct(phi)
    if not limit:
        half = rs.positive_roots @ phi / 2.0
        worst = int(np.argmin(np.abs(np.sin(half))))
        raise SingularPointError(
            f"phi lies on a Weyl wall: sin(alpha.phi/2) vanishes for positive root "
            f"#{worst} = {rs.positive_roots[worst]}; request limit mode for wall values"
        )
    return _offset_limit(direct, phi, rs.rho)


def _offset_limit(f, point, direction, eps0: float = 0.05, levels: int = 4) -> complex:
    """phi -> point limit of f along +-eps*direction, Richardson in eps^2.

    Symmetric averaging removes odd orders, so Neville extrapolation on the
    eps^2 grid converges fast while keeping eps large enough that the 0/0
    cancellation stays well above float noise.
    """
    eps = eps0 / 2.0 ** np.arange(levels)
    vals = np.array(
        [(f(point + e * direction) + f(point - e * direction)) / 2.0 for e in eps],
        dtype=complex,
    )
    x = eps**2
    for level in range(1, levels):
        vals[: levels - level] = vals[1 : levels - level + 1] + (
            vals[1 : levels - level + 1] - vals[: levels - level]
        ) * x[1 : levels - level + 1] / (x[: levels - level] - x[1 : levels - level + 1])
    return complex(vals[0])


def dimension(rs: RootSystem, l, group: WeylGroup | None = None) -> int:
    """Representation dimension by the product formula, checked to be integral."""
    li = _check_dominant(l, rs.rank)
    nvec = (li + 1) @ rs.weights
    value = float(np.prod(rs.positive_roots @ nvec) / np.prod(rs.positive_roots @ rs.rho))
    nearest = round(value)
    if abs(value - nearest) > 1e-9 * max(1.0, abs(value)):
        raise InternalError(f"dimension formula gave non-integer {value} for l={li}")
    return int(nearest)


def casimir_eigenvalue(rs: RootSystem, l) -> float:
    """Laplacean eigenvalue (|l+rho|^2 - |rho|^2)/lambda."""
    li = _check_dominant(l, rs.rank)
    nvec = (li + 1) @ rs.weights
    return float((nvec @ nvec - rs.rho @ rs.rho) / rs.lam)


def apply_intertwiner(rs: RootSystem, f: ExpSum) -> ExpSum:
    """Apply the product of directional derivatives along the positive roots.

    On an exponential exp(i v.phi) each factor alpha.grad contributes
    i(alpha.v), so the term picks up prod over alpha>0 of i(alpha.v).  The
    operator flips the symmetry class under Weyl reflections.
    """
    pos = rs.positive_roots

    def factor(v):
        return complex(np.prod(1j * (pos @ v)))

    return f.map_coeffs(factor)


def symmetrize(group: WeylGroup, f: ExpSum, signed: bool = False) -> ExpSum:
    """Sum of f composed with every Weyl element, optionally parity-weighted.

    exp(i v . (sigma phi)) = exp(i (sigma^T v) . phi), so each term's
    frequency orbit is generated by the transposed matrices.
    """
    coeffs = []
    freqs = []
    for elem in group:
        weight = elem.parity if signed else 1
        coeffs.append(weight * f.coeffs)
        freqs.append(f.freqs @ elem.matrix)
    return ExpSum(np.concatenate(coeffs), np.vstack(freqs)).merged()


def weyl_order_from_intertwiner(rs: RootSystem) -> float:
    """N(W) via the identity (2^p / prod alpha.rho) * (D w)(0).

    Builds w as an ExpSum through the denominator identity
    (2i)^p w = signed symmetrization of exp(i rho.phi).
    """
    group = generate_weyl_group(rs)
    denom = symmetrize(group, ExpSum.single(1.0, rs.rho), signed=True)
    w_sum = ExpSum(denom.coeffs / (2j) ** rs.p, denom.freqs)
    dw = apply_intertwiner(rs, w_sum)
    value = dw.evaluate(np.zeros(rs.rank))
    scale = 2.0**rs.p / float(np.prod(rs.positive_roots @ rs.rho))
    result = scale * value
    if abs(result.imag) > 1e-9 * max(1.0, abs(result)):
        raise InternalError(f"intertwiner order identity returned non-real {result}")
    return result.real
