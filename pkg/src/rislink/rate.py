"""Equivalent channel assembly and the spectral-efficiency objective.

The equivalent per-subcarrier channel is the direct path plus the RIS cascade,
H_eq[k] = sqrt(rho_d) H3[k] + sqrt(rho_i) H2[k] diag(phi) H1[k], with a single
phase diagonal shared by all subcarriers. Spectral efficiency is the
subcarrier-averaged log-det rate of that channel under per-subcarrier
transmit covariances.
"""

from dataclasses import dataclass

import numpy as np

from .channel import FreqChannelSet
from .propagation import LinkGains

LN2 = float(np.log(2.0))
UNIT_MODULUS_TOL = 1e-12


@dataclass
class RisPhases:
    """Unit-modulus diagonal of the RIS reflection matrix."""

    diag: np.ndarray  # (N_RIS,) complex, |diag[i]| = 1

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=complex)
        if self.diag.ndim != 1:
            raise ValueError("phase diagonal must be one-dimensional")
        if np.max(np.abs(np.abs(self.diag) - 1.0), initial=0.0) > UNIT_MODULUS_TOL:
            raise ValueError("phase diagonal entries must have unit modulus")

    @property
    def n_elements(self) -> int:
        return self.diag.shape[0]

    @classmethod
    def from_angles(cls, angles) -> "RisPhases":
        return cls(np.exp(1j * np.asarray(angles, dtype=float)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "RisPhases":
        """Phases drawn uniformly from [0, 2*pi)."""
        return cls.from_angles(rng.uniform(0.0, 2.0 * np.pi, size=n))


@dataclass
class EquivalentChannel:
    """Equivalent channel stack plus the gain-folded link stacks that built it.

    The pathloss amplitudes are folded into h1 and h3 once (h1 carries
    sqrt(rho_indirect), h3 carries sqrt(rho_direct)) so downstream gradient
    algebra can treat the folded stacks as the bare channel matrices.
    """

    heq: np.ndarray  # (K, N_r, N_t)
    h1: np.ndarray  # (K, N_RIS, N_t), sqrt(rho_indirect) folded in
    h2: np.ndarray  # (K, N_r, N_RIS)
    h3: np.ndarray  # (K, N_r, N_t), sqrt(rho_direct) folded in
    phi: RisPhases

    @property
    def n_subcarriers(self) -> int:
        return self.heq.shape[0]


def combine_links(h1: np.ndarray, h2: np.ndarray, h3: np.ndarray, phi_diag: np.ndarray) -> np.ndarray:
    """h3 + h2 diag(phi) h1 per subcarrier, on already gain-folded stacks."""
    return h3 + (h2 * phi_diag[None, None, :]) @ h1


def equivalent_channel(channels: FreqChannelSet, phi: RisPhases, gains: LinkGains | None = None) -> EquivalentChannel:
    """Assemble the equivalent channel from link stacks, phases and gains.

    With `gains` given, sqrt(rho) amplitudes are folded into the h1/h3 stacks;
    with gains=None the stacks are used as-is (already folded or unit-gain).
    """
    if phi.n_elements != channels.h1.shape[1]:
        raise ValueError(
            f"phase count {phi.n_elements} does not match RIS element count {channels.h1.shape[1]}"
        )
    if gains is None:
        h1, h3 = channels.h1, channels.h3
    else:
        h1 = np.sqrt(gains.rho_indirect) * channels.h1
        h3 = np.sqrt(gains.rho_direct) * channels.h3
    heq = combine_links(h1, channels.h2, h3, phi.diag)
    return EquivalentChannel(heq=heq, h1=h1, h2=channels.h2, h3=h3, phi=phi)


def rate_from_heq(heq: np.ndarray, q: np.ndarray, noise_var: float) -> float:
    """(1/K) sum_k log2 det(I + heq Q heq^H / noise_var), no input validation.

    The log-det argument is Hermitian-symmetrized and factorized by Cholesky;
    it is positive definite by construction for PSD Q.
    """
    n_r = heq.shape[1]
    m = np.eye(n_r) + (heq @ q @ heq.conj().transpose(0, 2, 1)) / noise_var
    m = 0.5 * (m + m.conj().transpose(0, 2, 1))
    chol = np.linalg.cholesky(m)
    diags = np.real(np.einsum("kii->ki", chol))
    return float(2.0 * np.sum(np.log(diags)) / (LN2 * heq.shape[0]))


def spectral_efficiency(eq: EquivalentChannel, q, noise_var: float, check_psd: bool = True) -> float:
    """Spectral efficiency in bits/s/Hz of the equivalent channel under Q[k].

    `q` is a (K, N_t, N_t) covariance stack or a PowerAllocation carrying one.
    Raises if any Q[k] has an eigenvalue below -1e-9 (non-PSD); pass
    check_psd=False on hot paths where Q is PSD by construction.
    """
    q_stack = np.asarray(getattr(q, "q", q), dtype=complex)
    if q_stack.shape[0] != eq.n_subcarriers:
        raise ValueError("covariance stack must have one matrix per subcarrier")
    if check_psd:
        eigs = np.linalg.eigvalsh(0.5 * (q_stack + q_stack.conj().transpose(0, 2, 1)))
        # tolerance is relative to the covariance scale so legitimate
        # allocations at large power budgets do not trip on rounding
        scale = max(1.0, float(np.max(np.abs(eigs), initial=0.0)))
        if np.min(eigs) < -1e-9 * scale:
            raise ValueError(f"covariance is not PSD (min eigenvalue {np.min(eigs):.3e})")
    return rate_from_heq(eq.heq, q_stack, noise_var)


def received_signal(eq: EquivalentChannel, x: np.ndarray, noise_var: float, rng: np.random.Generator) -> np.ndarray:
    """y[k] = H_eq[k] x[k] + v[k] with v[k] ~ CN(0, noise_var I)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (eq.n_subcarriers, eq.heq.shape[2]):
        raise ValueError(f"x must be (K, N_t) = ({eq.n_subcarriers}, {eq.heq.shape[2]})")
    clean = np.einsum("krt,kt->kr", eq.heq, x)
    shape = clean.shape
    noise = np.sqrt(noise_var / 2.0) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return clean + noise
