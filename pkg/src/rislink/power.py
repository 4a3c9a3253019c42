"""Spatial-frequency waterfilling over all (subcarrier, eigen-stream) pairs.

Per subcarrier, the equivalent channel's noise-normalized Gram matrix is
eigen-decomposed; a single cutoff shared by every (k, g) pair is found by
bisection so the allocated powers meet the total budget, and the transmit
covariances are rebuilt in the per-subcarrier eigenbases.
"""

from dataclasses import dataclass

import numpy as np

# Streams with eigenvalues at or below these thresholds get zero power.
ABS_EIG_FLOOR = 1e-15
REL_EIG_FLOOR = 1e-12

BISECT_MAX_ITER = 200
BUDGET_RTOL = 1e-12


@dataclass
class PowerAllocation:
    """Waterfilled per-subcarrier covariances and their eigen factorization.

    q[k] = u[k] diag(p[k]) u[k]^H, sum of all powers equals the budget, and
    cutoff is the shared Lagrangian threshold (active pairs fill to 1/cutoff).
    """

    q: np.ndarray  # (K, N_t, N_t) Hermitian PSD
    u: np.ndarray  # (K, N_t, N_s) orthonormal columns
    p: np.ndarray  # (K, N_s) nonnegative
    cutoff: float
    total_power: float


def channel_eigvals(heq, noise_var: float, n_streams: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Top eigenpairs of (1/noise_var) * H_eq[k]^H H_eq[k] per subcarrier.

    `heq` is a (K, N_r, N_t) stack or an EquivalentChannel. Returns
    (eigenvalues (K, N_s) in descending order, eigenvectors (K, N_t, N_s)).
    """
    h = np.asarray(getattr(heq, "heq", heq), dtype=complex)
    gram = h.conj().transpose(0, 2, 1) @ h / noise_var
    vals, vecs = np.linalg.eigh(0.5 * (gram + gram.conj().transpose(0, 2, 1)))
    n_s = min(h.shape[1], h.shape[2]) if n_streams is None else n_streams
    return vals[:, ::-1][:, :n_s], vecs[:, :, ::-1][:, :, :n_s]  # eigh is ascending


def waterfill(eigenvalues, total_power: float, meter=None) -> tuple[np.ndarray, float]:
    """Waterfill a power budget over channel eigenvalues.

    Solves P_i = max(0, 1/cutoff - 1/lam_i) with the single cutoff chosen by
    bisection so that sum(P) equals `total_power`. Eigenvalues at or below
    the numerical floor are excluded and receive zero power.

    Returns (powers in the input's shape, cutoff).
    """
    lams = np.asarray(eigenvalues, dtype=float)
    if total_power <= 0:
        raise ValueError("total power budget must be positive")
    flat = lams.reshape(-1)
    active = flat > max(ABS_EIG_FLOOR, REL_EIG_FLOOR * np.max(flat, initial=0.0))
    if not np.any(active):
        raise ValueError("waterfilling needs at least one positive eigenvalue")

    lam = flat[active]
    inv_lam = 1.0 / lam
    if meter is not None:
        meter.real_ops += lam.size  # stream-gain reciprocals

    def allocated(cutoff):
        return np.maximum(0.0, 1.0 / cutoff - inv_lam)

    # The optimum satisfies 1/cutoff <= total_power + sum(1/lam) (at least one
    # active stream), so [that bound, max(lam)] brackets the root of the
    # decreasing map cutoff -> sum(allocated).
    lo = 1.0 / (total_power + inv_lam.sum())
    hi = float(np.max(lam))
    cutoff = hi
    powers = allocated(cutoff)
    for _ in range(BISECT_MAX_ITER):
        cutoff = 0.5 * (lo + hi)
        powers = allocated(cutoff)
        if meter is not None:
            meter.real_ops += 1 + lam.size  # water level + per-stream fill
        total = powers.sum()
        if abs(total - total_power) < BUDGET_RTOL * total_power:
            break
        if total > total_power:
            lo = cutoff
        else:
            hi = cutoff

    out = np.zeros(flat.shape)
    out[active] = powers
    return out.reshape(lams.shape), float(cutoff)


def build_covariances(u: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Q[k] = U[k] diag(p[k]) U[k]^H from eigenbases (K, N_t, N_s) and powers (K, N_s)."""
    return np.einsum("ktg,kg,ksg->kts", u, p, u.conj())


def waterfill_covariances(heq, total_power: float, noise_var: float = 1.0,
                          n_streams: int | None = None, meter=None) -> PowerAllocation:
    """Eigen-decompose, waterfill across all (subcarrier, stream) pairs and rebuild Q[k]."""
    lams, u = channel_eigvals(heq, noise_var, n_streams)
    p, cutoff = waterfill(lams, total_power, meter)
    return PowerAllocation(q=build_covariances(u, p), u=u, p=p, cutoff=cutoff, total_power=total_power)
