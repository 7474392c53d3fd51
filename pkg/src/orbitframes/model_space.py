"""Model spaces of finite inner functions and their compressed shift.

For a finite product h of degree d the space ``H_h = L2+ minus h L2+`` has
dimension d.  It carries the compression ``A_h`` of the coordinate shift,
whose matrix is assembled here in an orthonormal basis of rational functions
(one factor of the product peeled off per basis element).  The orbit of the
projected constant under ``A_h`` is the prototype frame the rest of the
package analyzes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import coeffs as cs
from .blaschke import BlaschkeProduct, ZeroFunction, taylor_coeffs
from .config import max_truncation
from .coeffs import CoeffVec
from .errors import NumericalError

#: Basis Gram residual the truncation doubling aims for.
GRAM_TARGET = 1e-10

#: Residual past which a build is refused outright.
GRAM_FAIL = 1e-8

__all__ = [
    "GRAM_TARGET",
    "GRAM_FAIL",
    "ModelSpace",
    "build_model_space",
    "basis_coordinates",
    "project_model",
    "projected_monomial",
    "orbit",
    "decay_profile",
    "minimal_polynomial_check",
]


def _factor_series(lam: complex, n_trunc: int) -> np.ndarray:
    """Expansion of (z - lam) / (1 - conj(lam) z) on [0, n_trunc]."""
    out = np.empty(n_trunc + 1, dtype=np.complex128)
    out[0] = -lam
    if n_trunc >= 1:
        out[1:] = (1.0 - abs(lam) ** 2) * np.conj(lam) ** np.arange(n_trunc)
    return out


def _tm_expansions(zeros: np.ndarray, n_trunc: int) -> np.ndarray:
    """Coefficient rows of the orthonormal basis, shape (d, n_trunc + 1).

    Element k is the normalized reproducing-kernel factor for zero k times
    the product of the first k disk factors; orthonormality is exact in
    exact arithmetic for any zero list, repeated zeros included.
    """
    d = len(zeros)
    rows = np.zeros((d, n_trunc + 1), dtype=np.complex128)
    partial = np.zeros(n_trunc + 1, dtype=np.complex128)
    partial[0] = 1.0
    for k, lam in enumerate(zeros):
        szego = np.sqrt(1.0 - abs(lam) ** 2) * np.conj(lam) ** np.arange(n_trunc + 1)
        rows[k] = np.convolve(szego, partial)[: n_trunc + 1]
        if k < d - 1:
            partial = np.convolve(partial, _factor_series(lam, n_trunc))[: n_trunc + 1]
    return rows


@dataclass(frozen=True)
class ModelSpace:
    """Finite-dimensional model space with its compressed shift.

    ``basis`` holds coefficient windows of the orthonormal basis on
    [0, trunc_n].  ``shift_matrix[k, j]`` is the pairing of the shifted
    j-th basis element against the k-th, so columns are images and the
    matrix acts on coordinate vectors.  ``phi`` holds the coordinates of
    the projected constant.
    """

    h: BlaschkeProduct
    trunc_n: int
    basis: tuple[CoeffVec, ...]
    shift_matrix: np.ndarray
    phi: np.ndarray
    gram_residual: float

    @property
    def dim(self) -> int:
        return self.h.degree

    def to_dict(self) -> dict:
        """JSON-ready summary (complex entries as [re, im] pairs)."""
        return {
            "zeros": [[z.real, z.imag] for z in self.h.zeros],
            "constant": [self.h.constant.real, self.h.constant.imag],
            "dim": self.dim,
            "trunc_n": self.trunc_n,
            "shift_matrix": [
                [[v.real, v.imag] for v in row] for row in self.shift_matrix
            ],
            "phi": [[v.real, v.imag] for v in self.phi],
            "gram_residual": self.gram_residual,
        }


def build_model_space(h: BlaschkeProduct, n_trunc: int | None = None) -> ModelSpace:
    """Construct the model space of ``h`` at a certified truncation.

    Parameters
    ----------
    h : BlaschkeProduct
        Nonconstant finite product; the flat-zero marker and degree-0
        products are rejected (their "model space" is all of L2+ or {0}).
    n_trunc : int, optional
        Starting coefficient window, at least ``max(8 * degree, 64)``
        (the default).  The window is doubled until the basis Gram matrix
        is within 1e-10 of the identity; if the configured ceiling is hit
        first and the residual still exceeds 1e-8 the build fails.
    """
    if isinstance(h, ZeroFunction):
        raise ValueError(
            "the flat-zero symbol has no finite model space; its orbit case "
            "is an orthonormal basis and needs no compression"
        )
    if not isinstance(h, BlaschkeProduct):
        raise TypeError(f"expected a BlaschkeProduct, got {type(h).__name__}")
    d = h.degree
    if d < 1:
        raise ValueError("degree-0 products have a trivial model space")
    floor = max(8 * d, 64)
    if n_trunc is None:
        n_trunc = floor
    else:
        n_trunc = int(n_trunc)
        if n_trunc < floor:
            raise ValueError(
                f"truncation {n_trunc} is below the floor {floor} for degree {d}"
            )
    cap = max_truncation()
    if n_trunc > cap:
        raise ValueError(f"truncation {n_trunc} exceeds the ceiling {cap}")

    n = n_trunc
    while True:
        rows = _tm_expansions(h.zeros, n)
        gram = rows @ rows.conj().T
        residual = float(np.linalg.norm(gram - np.eye(d), 2))
        if residual <= GRAM_TARGET:
            break
        if 2 * n > cap:
            if residual > GRAM_FAIL:
                raise NumericalError(
                    f"basis Gram residual {residual:.3e} at truncation {n} "
                    f"(ceiling {cap}); zeros too close to the boundary for "
                    f"this window"
                )
            break
        n *= 2

    # The pairing of shifted element j against element i vanishes
    # identically for i < j (the later elements vanish at the earlier
    # zeros), so only the lower triangle carries information; the upper
    # residue is truncation noise and is dropped.
    shift = np.conj(rows[:, 1:]) @ rows[:, :-1].T
    shift = np.tril(shift)
    phi = np.conj(rows[:, 0])
    basis = tuple(CoeffVec(0, row) for row in rows)
    return ModelSpace(
        h=h,
        trunc_n=n,
        basis=basis,
        shift_matrix=shift,
        phi=phi,
        gram_residual=residual,
    )


def basis_coordinates(ms: ModelSpace, f: CoeffVec) -> np.ndarray:
    """Coordinates ``<f, e_k>`` of a coefficient window in the stored basis."""
    return np.array([cs.inner_product(f, e) for e in ms.basis])


def project_model(ms: ModelSpace, f: CoeffVec) -> CoeffVec:
    """Orthogonal projection of ``f`` onto the model space.

    Computes ``h * P_minus(f * conj(h))`` and returns its window restricted
    to [0, trunc_n].  ``f`` must be supported on nonnegative indices.
    Internal expansions run past the stored window so the returned
    coefficients match the basis-coordinate path to float accuracy.
    """
    trimmed = cs.trim(f)
    if len(trimmed.coeffs) and trimmed.lo < 0:
        raise ValueError(
            f"projection input must be supported on indices >= 0, "
            f"window starts at {trimmed.lo}"
        )
    if len(trimmed.coeffs) == 0:
        return CoeffVec(0, [])
    ext = ms.trunc_n + max(trimmed.hi, 0) + 8
    h_t = taylor_coeffs(ms.h, ext)
    g = cs.multiply(trimmed, cs.conj_reflect(h_t))
    inner = cs.project_minus(g)
    out = cs.multiply(h_t, inner)
    return cs.restrict(out, 0, ms.trunc_n)


def projected_monomial(ms: ModelSpace, m: int) -> np.ndarray:
    """Coordinates of the projected monomial ``z^m`` in the stored basis.

    Uses the closed form: the projection of ``z^m`` equals
    ``z^m - sum_{n=0}^{m} conj(h_{m-n}) z^n h`` with ``h_k`` the Taylor
    coefficients of h.  Must agree with ``project_model`` on the monomial
    and with column m of the shift-orbit of phi.
    """
    m = int(m)
    if m < 0 or m > ms.trunc_n - ms.h.degree:
        raise ValueError(
            f"monomial index {m} outside [0, {ms.trunc_n - ms.h.degree}] "
            f"for truncation {ms.trunc_n}"
        )
    ext = ms.trunc_n + m
    h_t = taylor_coeffs(ms.h, ext)
    q = CoeffVec(0, np.conj(h_t.coeffs[m::-1]))
    proj = cs.add(cs.monomial(m), cs.scale(cs.multiply(q, h_t), -1.0))
    rows = _tm_expansions(ms.h.zeros, proj.hi)
    return np.conj(rows[:, : len(proj.coeffs)]) @ proj.coeffs


def orbit(ms: ModelSpace, n_max: int) -> np.ndarray:
    """Coordinates of ``A^n phi`` for n = 0..n_max, shape (n_max + 1, dim)."""
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    out = np.empty((n_max + 1, ms.dim), dtype=np.complex128)
    v = ms.phi.astype(np.complex128)
    for n in range(n_max + 1):
        out[n] = v
        if n < n_max:
            v = ms.shift_matrix @ v
    return out


def decay_profile(ms: ModelSpace, f: np.ndarray, n_max: int) -> np.ndarray:
    """Norms ``||A^n f||`` for n = 0..n_max of a coordinate vector f."""
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    if f.shape != (ms.dim,):
        raise ValueError(f"expected a coordinate vector of length {ms.dim}")
    out = np.empty(int(n_max) + 1)
    v = f.copy()
    for n in range(int(n_max) + 1):
        out[n] = np.linalg.norm(v)
        if n < n_max:
            v = ms.shift_matrix @ v
    return out


def minimal_polynomial_check(ms: ModelSpace) -> float:
    """Spectral norm of ``prod_j (A - l_j I)``; near zero when h annihilates A."""
    d = ms.dim
    acc = np.eye(d, dtype=np.complex128)
    for lam in ms.h.zeros:
        acc = (ms.shift_matrix - lam * np.eye(d)) @ acc
    return float(np.linalg.norm(acc, 2))
