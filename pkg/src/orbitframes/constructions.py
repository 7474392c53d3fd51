"""Orbit constructions with certified frame bounds.

Three builders around a common diagonal model: a normal generator
diag(lambda_j) with seed weights c_j, its similarity images W diag W^{-1},
and a rank-one perturbation diag + tau * e_l e_k^* that stays similar to
the diagonal but is never normal for tau != 0.  Certificates come from
the separation capacity of the zero set: measured frame bounds of the
truncated orbit always land inside [alpha/Delta, beta*Delta] up to the
reported tail, with similarity widening the interval by the extreme
squared singular values of the change of basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .blaschke import carleson_delta, delta_capacity, validate_zeros
from .config import max_truncation
from .orbits import OrbitSpec

#: Condition ceiling for the Riesz-pair change of basis.
RIESZ_COND_MAX = 1e6

#: Relative distance to the excluded perturbation value that is rejected.
EXCLUDED_TAU_RTOL = 1e-12

#: Relative tail target used when a truncation depth is chosen automatically.
AUTO_TAIL_REL = 1e-13

__all__ = [
    "NormalOrbitSpec",
    "PerturbedPair",
    "build_normal_pair",
    "certificate_bounds",
    "build_riesz_pair",
    "riesz_certificate_bounds",
    "excluded_tau",
    "perturb_tau",
]


@dataclass(frozen=True)
class NormalOrbitSpec:
    """Zeros, seed weights, and the derived certificate constants.

    alpha and beta are the exact comparability constants of the finite
    data, inf and sup of |c_j|^2 / (1 - |lambda_j|^2); delta is the
    separation of the zeros and capacity its certificate factor.
    ``tail_energy`` optionally records the seed energy beyond the finite
    block when the caller has a closed form for it; ``None`` means the
    model is taken as genuinely finite.
    """

    zeros: np.ndarray
    coeffs: np.ndarray
    tail_energy: float | None = None
    alpha: float = field(init=False)
    beta: float = field(init=False)
    delta: float = field(init=False)
    capacity: float = field(init=False)

    def __post_init__(self) -> None:
        zeros = np.array(validate_zeros(self.zeros))
        coeffs = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if coeffs.shape[0] != zeros.shape[0]:
            raise ValueError(
                f"{coeffs.shape[0]} seed weights for {zeros.shape[0]} zeros"
            )
        if zeros.shape[0] == 0:
            raise ValueError("at least one zero is required")
        weights = np.abs(coeffs) ** 2 / (1.0 - np.abs(zeros) ** 2)
        alpha = float(np.min(weights))
        beta = float(np.max(weights))
        if alpha <= 0.0:
            raise ValueError("every seed weight must be nonzero")
        if self.tail_energy is not None and not self.tail_energy >= 0.0:
            raise ValueError("tail energy must be nonnegative")
        delta = carleson_delta(zeros)
        capacity = delta_capacity(delta)
        zeros.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "capacity", capacity)

    @property
    def size(self) -> int:
        return self.zeros.shape[0]

    def to_dict(self) -> dict:
        return {
            "zeros": [[z.real, z.imag] for z in self.zeros],
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
            "alpha": self.alpha,
            "beta": self.beta,
            "delta": self.delta,
            "capacity": self.capacity,
            "tail_energy": self.tail_energy,
            "finite_model": self.tail_energy is None,
        }


def _auto_n_max(rho: float, lead: float, target: float) -> int:
    """Smallest depth whose geometric tail bound drops below target."""
    cap = max_truncation()
    if rho <= 0.0 or lead <= 0.0:
        return 64
    r2 = rho * rho
    tail0 = lead * r2 / (1.0 - r2)
    if tail0 <= target:
        return 64
    need = math.log(target / tail0) / math.log(r2)
    return int(min(cap, max(64, math.ceil(need) + 1)))


def build_normal_pair(spec: NormalOrbitSpec, n_max: int | None = None) -> OrbitSpec:
    """One-sided orbit of (diag(zeros), coeffs).

    When ``n_max`` is omitted a depth is chosen so the geometric tail
    bound falls below a small fraction of the lower certificate (capped
    at the configured truncation ceiling).
    """
    if n_max is None:
        lo, _ = certificate_bounds(spec)
        rho = float(np.max(np.abs(spec.zeros)))
        lead = float(np.linalg.norm(spec.coeffs)) ** 2
        n_max = _auto_n_max(rho, lead, AUTO_TAIL_REL * lo)
    return OrbitSpec(
        T=np.diag(spec.zeros), f0=spec.coeffs, index_set="N", n_max=int(n_max)
    )


def certificate_bounds(spec: NormalOrbitSpec) -> tuple[float, float]:
    """Certified frame-bound interval (alpha/capacity, beta*capacity)."""
    return spec.alpha / spec.capacity, spec.beta * spec.capacity


def build_riesz_pair(
    spec: NormalOrbitSpec, W: np.ndarray, n_max: int | None = None
) -> OrbitSpec:
    """Orbit of (W diag(zeros) W^{-1}, W coeffs) for invertible W.

    The generator acts as the diagonal model on the skewed basis W e_j
    with dual expansion along (W^{-1})^* e_j; the seed is chosen so its
    dual components are exactly the diagonal model's weights.
    """
    W = np.asarray(W, dtype=np.complex128)
    if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] != spec.size:
        raise ValueError(
            f"change of basis must be {spec.size}x{spec.size}, got {W.shape}"
        )
    cond = float(np.linalg.cond(W))
    if not np.isfinite(cond) or cond > RIESZ_COND_MAX:
        raise ValueError(
            f"change of basis needs condition below {RIESZ_COND_MAX:.0e}, "
            f"got {cond:.3e}"
        )
    W_inv = np.linalg.solve(W, np.eye(spec.size))
    T = W @ np.diag(spec.zeros) @ W_inv
    f0 = W @ spec.coeffs
    if n_max is None:
        lo, _ = riesz_certificate_bounds(spec, W)
        rho = float(np.max(np.abs(spec.zeros)))
        lead = cond * cond * float(np.linalg.norm(f0)) ** 2
        n_max = _auto_n_max(rho, lead, AUTO_TAIL_REL * lo)
    return OrbitSpec(T=T, f0=f0, index_set="N", n_max=int(n_max))


def riesz_certificate_bounds(
    spec: NormalOrbitSpec, W: np.ndarray
) -> tuple[float, float]:
    """Certificate widened by the extreme squared singular values of W.

    The skewed dual system (W^{-1})^* e_j has Riesz bounds
    1/smax(W)^2 and 1/smin(W)^2; dividing the diagonal certificate by
    them gives (alpha/capacity * smin^2, beta*capacity * smax^2).
    """
    svals = np.linalg.svd(np.asarray(W, dtype=np.complex128), compute_uv=False)
    lo, hi = certificate_bounds(spec)
    return lo * float(svals[-1]) ** 2, hi * float(svals[0]) ** 2


def excluded_tau(spec: NormalOrbitSpec, k: int, l: int) -> complex:
    """The one perturbation strength that kills the seed's l-component.

    At tau = (lambda_k - lambda_l) c_l / c_k the seed becomes orthogonal
    to the dual eigenvector attached to lambda_l, the orbit loses that
    spectral direction, and no frame is possible.
    """
    d = spec.zeros[k] - spec.zeros[l]
    return complex(d * spec.coeffs[l] / spec.coeffs[k])


@dataclass(frozen=True)
class PerturbedPair:
    """Rank-one perturbed orbit with its materialized eigensystem.

    ``h_basis`` columns are eigenvectors of the perturbed generator,
    ``g_basis`` the biorthogonal duals; ``riesz_lower``/``riesz_upper``
    are the Gram eigenvalue bounds of the dual system from the explicit
    2x2 block, and the certificate transports the diagonal one through
    that system.  The two residuals record how well the materialized
    identities hold in floating point.
    """

    orbit: OrbitSpec
    spec: NormalOrbitSpec
    k: int
    l: int
    tau: complex
    g_basis: np.ndarray
    h_basis: np.ndarray
    riesz_lower: float
    riesz_upper: float
    certificate_lower: float
    certificate_upper: float
    biorthogonality_residual: float
    diagonalization_residual: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "tau": [self.tau.real, self.tau.imag],
            "riesz_lower": self.riesz_lower,
            "riesz_upper": self.riesz_upper,
            "certificate_lower": self.certificate_lower,
            "certificate_upper": self.certificate_upper,
            "biorthogonality_residual": self.biorthogonality_residual,
            "diagonalization_residual": self.diagonalization_residual,
        }


def perturb_tau(
    spec: NormalOrbitSpec,
    k: int,
    l: int,
    tau: complex,
    n_max: int | None = None,
) -> PerturbedPair:
    """Orbit of diag(zeros) + tau * e_l e_k^* with the diagonal's seed.

    The perturbed generator keeps the zeros as eigenvalues; its
    eigenvectors h_j and duals g_j differ from the standard basis only
    on the (k, l) plane, where with d = lambda_k - lambda_l:

        h_l = e_l                      g_l = e_l - conj(tau)/conj(d) e_k
        h_k = tau e_l + d e_k          g_k = e_k / conj(d)

    Rejects tau at the excluded value (relative distance below 1e-12),
    where the seed loses its l-th spectral component.
    """
    J = spec.size
    if not 0 <= k < J or not 0 <= l < J:
        raise ValueError(f"indices must lie in [0, {J}), got k={k}, l={l}")
    if k == l:
        raise ValueError("perturbation needs two distinct indices")
    d = complex(spec.zeros[k] - spec.zeros[l])
    if d == 0:
        raise ValueError("the two selected zeros coincide; no eigenbasis splits them")
    tau = complex(tau)
    bad = excluded_tau(spec, k, l)
    if abs(tau - bad) <= EXCLUDED_TAU_RTOL * abs(bad):
        raise ValueError(
            f"tau = {tau} is the excluded value (lambda_k - lambda_l) c_l / c_k; "
            f"the perturbed orbit drops a spectral direction"
        )

    T = np.diag(spec.zeros).astype(np.complex128)
    T[l, k] += tau

    h_basis = np.eye(J, dtype=np.complex128)
    g_basis = np.eye(J, dtype=np.complex128)
    h_basis[l, k] = tau
    h_basis[k, k] = d
    g_basis[k, l] = -np.conj(tau) / np.conj(d)
    g_basis[k, k] = 1.0 / np.conj(d)

    biorth = float(
        np.linalg.norm(g_basis.conj().T @ h_basis - np.eye(J), 2)
    )
    diag_res = float(
        np.linalg.norm(
            T - h_basis @ np.diag(spec.zeros) @ g_basis.conj().T, 2
        )
    )

    # Gram of the dual system deviates from identity only on a 2x2 block
    # whose inverse spectrum has the closed form below.
    trace = 1.0 + abs(tau) ** 2 + abs(d) ** 2
    det = abs(d) ** 2
    disc = math.sqrt(max(trace * trace - 4.0 * det, 0.0))
    block_hi = (trace + disc) / 2.0
    block_lo = (trace - disc) / 2.0
    riesz_lower = 1.0 / block_hi
    riesz_upper = 1.0 / block_lo

    # Seed components along the dual system; the perturbed pair is the
    # h-basis transport of the diagonal model with these weights.
    c_dual = g_basis.conj().T @ spec.coeffs
    dual_spec = NormalOrbitSpec(zeros=spec.zeros, coeffs=c_dual)
    lo, hi = certificate_bounds(dual_spec)
    cert_lower = lo * block_lo
    cert_upper = hi * block_hi

    if n_max is None:
        rho = float(np.max(np.abs(spec.zeros)))
        lead = (block_hi / block_lo) * float(np.linalg.norm(spec.coeffs)) ** 2
        n_max = _auto_n_max(rho, lead, AUTO_TAIL_REL * cert_lower)
    orbit = OrbitSpec(T=T, f0=spec.coeffs, index_set="N", n_max=int(n_max))

    return PerturbedPair(
        orbit=orbit,
        spec=spec,
        k=k,
        l=l,
        tau=tau,
        g_basis=g_basis,
        h_basis=h_basis,
        riesz_lower=riesz_lower,
        riesz_upper=riesz_upper,
        certificate_lower=cert_lower,
        certificate_upper=cert_upper,
        biorthogonality_residual=biorth,
        diagonalization_residual=diag_res,
    )
