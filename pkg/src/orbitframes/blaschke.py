"""Finite products of disk automorphism factors and their separation data.

A finite product ``B(z) = c * prod_j (z - l_j) / (1 - conj(l_j) z)`` with
all ``|l_j| < 1`` and ``|c| = 1`` is inner: unimodular on the unit circle,
vanishing exactly at its zero list (with multiplicity).  The separation
constant of the zero list and the capacity function built from it drive
every frame-bound certificate in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coeffs import CoeffVec
from .errors import NumericalError

#: Margin inside the open unit disk required of every zero.
EPS_DISK = 1e-10

#: Distance to a factor pole below which evaluation refuses to proceed.
POLE_TOL = 1e-12

__all__ = [
    "EPS_DISK",
    "POLE_TOL",
    "validate_zeros",
    "BlaschkeProduct",
    "ZeroFunction",
    "ZERO_FUNCTION",
    "carleson_delta",
    "delta_capacity",
    "evaluate",
    "taylor_coeffs",
]


def validate_zeros(zeros, eps_disk: float = EPS_DISK) -> np.ndarray:
    """Return the zeros as a complex array, all strictly inside the disk.

    Points with ``|l| > 1 - eps_disk`` are rejected: the factor expansions
    scale like ``1 / (1 - |l|^2)`` and lose all accuracy at the boundary.
    """
    arr = np.atleast_1d(np.asarray(zeros, dtype=np.complex128)).reshape(-1)
    if arr.size == 0:
        return arr
    radii = np.abs(arr)
    worst = int(np.argmax(radii))
    if radii[worst] > 1.0 - eps_disk:
        raise ValueError(
            f"zero {arr[worst]} has modulus {radii[worst]:.17g}; "
            f"all zeros must satisfy |l| <= {1.0 - eps_disk:.12g}"
        )
    return arr


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite inner function given by its zero list and a unimodular constant.

    The constant is carried through evaluation and coefficient expansion but
    two products that differ only in the constant describe the same model
    space; equality-sensitive consumers ignore it.
    """

    zeros: np.ndarray
    constant: complex = 1.0 + 0j

    def __post_init__(self) -> None:
        arr = validate_zeros(self.zeros)
        arr.setflags(write=False)
        object.__setattr__(self, "zeros", arr)
        c = complex(self.constant)
        if abs(abs(c) - 1.0) > 1e-12:
            raise ValueError(f"constant must be unimodular, got |c| = {abs(c):.17g}")
        object.__setattr__(self, "constant", c)

    @property
    def degree(self) -> int:
        return len(self.zeros)


class ZeroFunction:
    """Marker for the identically zero symbol.

    The flat-zero case corresponds to an orthonormal-basis orbit (no model
    space to compress to); constructors that need a nonzero inner function
    reject it with a pointed message instead of failing downstream.
    """

    def __repr__(self) -> str:  # pragma: no cover
        return "ZeroFunction()"


ZERO_FUNCTION = ZeroFunction()


def carleson_delta(zeros) -> float:
    """Uniform separation constant of a finite zero list.

    Returns ``inf_j prod_{k != j} |(l_j - l_k) / (1 - conj(l_j) l_k)|``.
    A single zero gives 1 (empty product); a repeated zero gives exactly 0.
    """
    arr = validate_zeros(zeros)
    d = len(arr)
    if d <= 1:
        return 1.0
    diff = arr[:, None] - arr[None, :]
    num = np.abs(diff)
    off_diag = ~np.eye(d, dtype=bool)
    if np.any(num[off_diag] == 0.0):
        return 0.0
    den = np.abs(1.0 - np.conj(arr)[:, None] * arr[None, :])
    ratio = np.where(off_diag, num / den, 1.0)
    return float(np.min(np.prod(ratio, axis=1)))


def delta_capacity(delta: float) -> float:
    """Capacity ``(2 / delta^4) * (1 - 2 log delta)`` of a separation constant.

    Decreasing in delta on (0, 1]; the value at 1 is 2.  A nonpositive
    delta means the zeros are not uniformly separated and no finite
    certificate exists.
    """
    delta = float(delta)
    if delta <= 0.0:
        raise ValueError(
            "separation constant must be positive; delta <= 0 admits no certificate"
        )
    if delta > 1.0:
        raise ValueError(f"separation constant cannot exceed 1, got {delta:.17g}")
    return (2.0 / delta**4) * (1.0 - 2.0 * math.log(delta))


def evaluate(b: BlaschkeProduct, z):
    """Evaluate the product at a point or array of points.

    Raises ``NumericalError`` when a point is within ``POLE_TOL`` of a
    factor pole ``1 / conj(l_j)``.
    """
    z = np.asarray(z, dtype=np.complex128)
    out = np.full(z.shape, b.constant, dtype=np.complex128)
    for lam in b.zeros:
        den = 1.0 - np.conj(lam) * z
        bad = np.abs(den) < POLE_TOL
        if np.any(bad):
            where = z[bad].reshape(-1)[0] if z.shape else complex(z)
            raise NumericalError(
                f"evaluation point {where} is within {POLE_TOL:.1e} of the "
                f"pole of the factor with zero {lam}"
            )
        out = out * (z - lam) / den
    if out.shape == ():
        return complex(out)
    return out


def taylor_coeffs(b: BlaschkeProduct, n_trunc: int) -> CoeffVec:
    """First ``n_trunc + 1`` Taylor coefficients, window [0, n_trunc].

    Each factor ``(z - l) / (1 - conj(l) z)`` expands as ``-l`` followed by
    ``(1 - |l|^2) conj(l)^(m-1)`` at index m >= 1; the product is built by
    exact polynomial multiplication of these expansions, so the returned
    coefficients are the true Taylor values.  The discarded tail is bounded
    by a constant times ``max_j |l_j| ** n_trunc``.
    """
    n_trunc = int(n_trunc)
    if n_trunc < b.degree:
        raise ValueError(
            f"truncation {n_trunc} is below the product degree {b.degree}"
        )
    acc = np.zeros(n_trunc + 1, dtype=np.complex128)
    acc[0] = 1.0
    for lam in b.zeros:
        fac = np.empty(n_trunc + 1, dtype=np.complex128)
        fac[0] = -lam
        if n_trunc >= 1:
            fac[1:] = (1.0 - abs(lam) ** 2) * np.conj(lam) ** np.arange(n_trunc)
        acc = np.convolve(acc, fac)[: n_trunc + 1]
    return CoeffVec(0, acc * b.constant)
