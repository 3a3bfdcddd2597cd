"""Classical root systems and the derived constants everything else consumes.

Simple roots are stored as explicit Cartesian vectors in rank-dimensional
Euclidean space.  For A1, A2, A3, B2 and C3 the coordinates reproduce the
per-family conventions used by the reference tables of the non-compact group
catalogue, so winding vectors and eigenvalue phrases compare verbatim; the
remaining supported systems use compatible standard realizations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ArgumentError, ConfigurationError, InternalError

__all__ = ["RootSystem", "build_root_system", "cartan_matrix", "rescale"]

_DEDUP_DECIMALS = 10


@dataclass(frozen=True)
class RootSystem:
    """Root data of one classical family at fixed rank.

    Attributes
    ----------
    family : str
        One of ``"A" "B" "C" "D"``.
    rank : int
        Rank r of the algebra (dimension of the root space).
    simple_roots : ndarray, shape (r, r)
        Simple roots as rows.
    positive_roots : ndarray, shape (p, r)
        All positive roots, ordered by height then coordinates.
    highest_root : ndarray, shape (r,)
    highest_root_coeffs : ndarray of int, shape (r,)
        Expansion of the highest root over the simple roots.
    weights : ndarray, shape (r, r)
        Fundamental weights as rows; ``simple_roots[i] @ weights[j]``
        equals ``|gamma_i|^2/2 * delta_ij``.
    rho : ndarray, shape (r,)
        Half sum of the positive roots.
    lam : float
        Scale factor 2/r * sum of squared positive-root lengths.
    n : int
        Group dimensionality, n = 2p + r.
    p : int
        Number of positive roots.
    """

    family: str
    rank: int
    simple_roots: np.ndarray
    positive_roots: np.ndarray
    highest_root: np.ndarray
    highest_root_coeffs: np.ndarray
    weights: np.ndarray
    rho: np.ndarray
    lam: float
    n: int
    p: int

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def coroots(self) -> np.ndarray:
        """Simple coroots 2*gamma_i/|gamma_i|^2 as rows.

        Squared norms are snapped to the nearest quarter-integer (they are
        exactly 1 or 2 in every stored convention, up to rescale factors),
        which keeps integer coroot components free of last-bit noise.
        """
        g = self.simple_roots
        norms = (g * g).sum(axis=1, keepdims=True)
        snapped = np.round(norms * 4.0) / 4.0
        norms = np.where(np.abs(snapped - norms) < 1e-12, snapped, norms)
        return 2.0 * g / norms

    def cache_key(self):
        return (self.family, self.rank, self.simple_roots.round(12).tobytes())

    def __repr__(self):
        return f"RootSystem({self.name}, n={self.n}, p={self.p})"


def _simple_roots(family: str, rank: int) -> np.ndarray:
    """Cartesian simple roots in the package's fixed per-family convention."""
    s2h = np.sqrt(2.0) / 2.0  # exact half of sqrt(2); doubling is lossless
    s3h = np.sqrt(3.0) / 2.0
    if family == "A":
        if rank == 1:
            return np.array([[1.0]])
        if rank == 2:
            return np.array([[1.0, 0.0], [-0.5, s3h]])
        if rank == 3:
            return np.array(
                [
                    [1.0, 0.0, 0.0],
                    [-0.5, s2h, -0.5],
                    [0.0, 0.0, 1.0],
                ]
            )
        # general rank: Cholesky realization of the unit-length Gram matrix
        gram = np.eye(rank)
        for i in range(rank - 1):
            gram[i, i + 1] = gram[i + 1, i] = -0.5
        return np.linalg.cholesky(gram)
    if family == "B":
        g = np.zeros((rank, rank))
        for i in range(rank - 1):
            g[i, i], g[i, i + 1] = 1.0, -1.0
        g[rank - 1, rank - 1] = 1.0
        return g
    if family == "C":
        if rank == 3:
            return np.array(
                [
                    [1.0, 0.0, 0.0],
                    [-0.5, 0.5, -s2h],
                    [0.0, 0.0, 2 * s2h],
                ]
            )
        # orthogonal axes f_i of squared length 1/2
        g = np.zeros((rank, rank))
        for i in range(rank - 1):
            g[i, i], g[i, i + 1] = s2h, -s2h
        g[rank - 1, rank - 1] = 2 * s2h
        return g
    if family == "D":
        g = np.zeros((rank, rank))
        for i in range(rank - 1):
            g[i, i], g[i, i + 1] = 1.0, -1.0
        g[rank - 1, rank - 2] = 1.0
        g[rank - 1, rank - 1] = 1.0
        return g
    raise ConfigurationError(f"unknown family {family!r}; supported: A, B, C, D")


def _close_roots(simple: np.ndarray) -> list[np.ndarray]:
    """Full root set by reflection closure, full precision vectors."""
    store: dict[tuple, np.ndarray] = {}
    for v in list(simple) + list(-simple):
        store[tuple(np.round(v, _DEDUP_DECIMALS))] = np.asarray(v, dtype=float)
    changed = True
    while changed:
        changed = False
        current = list(store.values())
        for a in current:
            aa = a @ a
            for b in current:
                r = b - 2.0 * (a @ b) / aa * a
                key = tuple(np.round(r, _DEDUP_DECIMALS))
                if key not in store:
                    store[key] = r
                    changed = True
    return list(store.values())


def build_root_system(family: str, rank: int) -> RootSystem:
    """Construct the root system of a classical family.

    Parameters
    ----------
    family : str
        ``"A"``, ``"B"``, ``"C"`` or ``"D"``.
    rank : int
        Rank; A/B/C need rank >= 1 (B/C are degenerate below 2 and are
        accepted from 2), D needs rank >= 3.

    Returns
    -------
    RootSystem
    """
    family = family.upper()
    if family not in "ABCD" or len(family) != 1:
        raise ConfigurationError(f"unknown family {family!r}; supported: A, B, C, D")
    if rank < 1:
        raise ConfigurationError(f"rank must be >= 1, got {rank}")
    if family in "BC" and rank < 2:
        raise ConfigurationError(f"{family}-family needs rank >= 2, got {rank}")
    if family == "D" and rank < 3:
        raise ConfigurationError(f"D-family needs rank >= 3, got {rank} (D3 ~ A3 is the smallest)")

    simple = _simple_roots(family, rank)
    records = []
    for v in _close_roots(simple):
        coeffs = np.linalg.solve(simple.T, v)
        rounded = np.round(coeffs)
        if not np.allclose(coeffs, rounded, atol=1e-8):
            raise InternalError(f"non-integral root expansion for {family}{rank}: {coeffs}")
        ci = rounded.astype(int)
        if coeffs.sum() > 1e-9:
            if (ci < 0).any():
                raise InternalError(f"mixed-sign positive root in {family}{rank}: {ci}")
            records.append((int(ci.sum()), tuple(np.round(v, _DEDUP_DECIMALS)), v, ci))
    records.sort(key=lambda rec: (rec[0], rec[1]))
    positive = np.array([rec[2] for rec in records])
    p = len(positive)

    n = 2 * p + rank
    rho = positive.sum(axis=0) / 2.0
    lam = 2.0 / rank * float((positive**2).sum())
    highest = positive[-1]
    highest_coeffs = records[-1][3]
    if (highest_coeffs <= 0).any():
        raise InternalError(f"highest-root coefficients not positive: {highest_coeffs}")

    # fundamental weights from gamma_i . w_j = (gamma_i^2/2) delta_ij
    half_norms = np.diag((simple**2).sum(axis=1) / 2.0)
    weights = np.linalg.solve(simple, half_norms).T

    rs = RootSystem(
        family=family,
        rank=rank,
        simple_roots=simple,
        positive_roots=positive,
        highest_root=highest,
        highest_root_coeffs=highest_coeffs,
        weights=weights,
        rho=rho,
        lam=lam,
        n=n,
        p=p,
    )
    _validate(rs)
    return rs


def _validate(rs: RootSystem) -> None:
    if rs.p != (rs.n - rs.rank) // 2:
        raise InternalError("positive-root count inconsistent with dimensionality")
    ratio = float(rs.rho @ rs.rho) / rs.lam
    if abs(ratio - rs.n / 24.0) > 1e-12:
        raise InternalError(f"rho^2/lambda = {ratio} != n/24 = {rs.n / 24} for {rs.name}")


def cartan_matrix(rs: RootSystem) -> np.ndarray:
    """Integer Cartan matrix M_jk = 2 gamma_j.gamma_k / gamma_j^2."""
    g = rs.simple_roots
    raw = 2.0 * (g @ g.T) / (g * g).sum(axis=1, keepdims=True)
    m = np.round(raw).astype(int)
    if not np.allclose(raw, m, atol=1e-9):
        raise InternalError(f"non-integral Cartan matrix for {rs.name}")
    return m


def rescale(rs: RootSystem, factor: float) -> RootSystem:
    """Rescale every root and weight by ``factor`` (lambda scales by factor^2)."""
    if not factor > 0:
        raise ArgumentError(f"rescale factor must be positive, got {factor}")
    return replace(
        rs,
        simple_roots=rs.simple_roots * factor,
        positive_roots=rs.positive_roots * factor,
        highest_root=rs.highest_root * factor,
        weights=rs.weights * factor,
        rho=rs.rho * factor,
        lam=rs.lam * factor**2,
    )
