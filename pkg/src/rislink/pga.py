"""Projected gradient ascent on the RIS phase diagonal with joint power updates.

The ascent direction comes from the closed-form Wirtinger derivative of the
sum-log-det objective with respect to the phase diagonal. Each iteration takes
a gradient step, projects every entry back onto the unit circle, re-optimizes
the per-subcarrier covariances by waterfilling, and re-evaluates the rate;
steps that do not improve the rate are reverted and the learning rate is cut
by 10.
"""

from dataclasses import dataclass

import numpy as np

from . import flops
from .channel import FreqChannelSet
from .power import PowerAllocation, waterfill_covariances
from .rate import LN2, EquivalentChannel, RisPhases, combine_links, equivalent_channel, rate_from_heq

MU_FLOOR = 1e-12


@dataclass
class PgaResult:
    """Best iterate of one optimization run."""

    phi: RisPhases
    power: PowerAllocation
    rate: float
    trace: np.ndarray  # accepted rate after each iteration, index 0 = initialization
    iterations: int
    converged: bool


def gradient_phi(channels, q, phi: RisPhases | None = None, noise_var: float = 1.0, meter=None) -> np.ndarray:
    """Wirtinger gradient of sum_k log2 det A_k w.r.t. the phase diagonal.

    With A_k = I + H_eq[k] Q[k] H_eq[k]^H / noise_var, X_k = H2[k]/noise_var,
    Y_k = H1[k] Q[k] H3[k]^H and Z_k = H1[k] Q[k] H1[k]^H Phi^H H2[k]^H, the
    i-th component is sum_k [(Y_k + Z_k) A_k^{-1} X_k]_{ii} / ln 2 (the
    derivative holds Phi^H fixed; the ascent direction in the complex plane is
    the conjugate of the returned vector).

    `channels` is a FreqChannelSet with pathloss already folded into h1/h3
    (then `phi` is required) or an EquivalentChannel (its phases are used).
    """
    if isinstance(channels, EquivalentChannel):
        eq = channels
    elif isinstance(channels, FreqChannelSet):
        if phi is None:
            raise ValueError("phi is required when passing a FreqChannelSet")
        eq = equivalent_channel(channels, phi)
    else:
        raise TypeError(f"unsupported channel container {type(channels)!r}")

    q_stack = np.asarray(getattr(q, "q", q), dtype=complex)
    k, n_r, n_t = eq.heq.shape
    n_ris = eq.h1.shape[1]
    if meter is not None:
        flops.record_gradient(meter, k, n_r, n_t, n_ris)

    h2h = eq.h2.conj().transpose(0, 2, 1)
    h1q = eq.h1 @ q_stack
    y = h1q @ eq.h3.conj().transpose(0, 2, 1)
    z = (h1q @ eq.h1.conj().transpose(0, 2, 1) * eq.phi.diag.conj()[None, None, :]) @ h2h
    a = np.eye(n_r) + (eq.heq @ q_stack @ eq.heq.conj().transpose(0, 2, 1)) / noise_var
    ainv_x = np.linalg.solve(a, eq.h2) / noise_var
    per_k = np.einsum("kir,kri->ki", y + z, ainv_x)
    return per_k.sum(axis=0) / LN2


def project_unit_modulus(values, fallback=None) -> RisPhases:
    """Normalize each entry onto the unit circle.

    Zero-modulus entries keep the corresponding `fallback` value (a RisPhases
    or complex array), or 1+0j when no fallback is given.
    """
    v = np.asarray(values, dtype=complex)
    mag = np.abs(v)
    zero = mag == 0.0
    if fallback is None:
        fb = np.ones_like(v)
    else:
        fb = np.asarray(getattr(fallback, "diag", fallback), dtype=complex)
    out = np.where(zero, fb, v / np.where(zero, 1.0, mag))
    return RisPhases(out)


def pga_optimize(channels: FreqChannelSet, total_power: float, *, noise_var: float = 1.0,
                 mu0: float = 0.1, epsilon: float = 1e-3, max_iter: int = 200,
                 n_streams: int | None = None, rng: np.random.Generator | None = None,
                 phi0: RisPhases | None = None, meter=None) -> PgaResult:
    """Jointly optimize RIS phases and per-subcarrier covariances.

    `channels` must carry the pathloss-folded link stacks. Phases initialize
    uniformly at random on the unit circle (or from `phi0`); each iteration
    ascends along the conjugate gradient with rate mu, projects onto the unit
    circle, waterfills the covariances and evaluates the rate. A non-improving
    step is reverted and mu shrinks by 10. The loop stops when the candidate
    rate changes by less than `epsilon`, when mu underflows its floor, or at
    the iteration cap; the best (last accepted) iterate is returned either way.
    """
    if mu0 <= 0 or epsilon <= 0 or max_iter < 1:
        raise ValueError("need mu0 > 0, epsilon > 0 and a positive iteration cap")
    n_ris = channels.h1.shape[1]
    if phi0 is not None:
        phi = phi0
    else:
        if rng is None:
            raise ValueError("rng is required when phi0 is not given")
        phi = RisPhases.random(n_ris, rng)

    k, n_r, n_t = channels.h3.shape
    if meter is not None:
        meter.start()
        flops.record_rate_eval(meter, k, n_r, n_t, n_ris)
        flops.record_waterfilling(meter, k, n_r, n_t, n_ris)

    eq = equivalent_channel(channels, phi)
    alloc = waterfill_covariances(eq.heq, total_power, noise_var, n_streams, meter)
    rate = rate_from_heq(eq.heq, alloc.q, noise_var)

    trace = [rate]
    mu = mu0
    iterations = 0
    converged = False
    while iterations < max_iter:
        grad = gradient_phi(eq, alloc.q, noise_var=noise_var, meter=meter)
        if meter is not None:
            flops.record_phase_update(meter, n_ris)
            flops.record_rate_eval(meter, k, n_r, n_t, n_ris)
            flops.record_waterfilling(meter, k, n_r, n_t, n_ris)
        # Scale-free step: mu bounds the largest per-element phase rotation,
        # so progress per iteration does not collapse at low-rate operating
        # points where the raw gradient is far below the stopping threshold.
        scale = np.max(np.abs(grad))
        if scale == 0.0:
            converged = True
            break
        new_phi = project_unit_modulus(phi.diag + (mu / scale) * grad.conj(), fallback=phi)
        new_heq = combine_links(eq.h1, eq.h2, eq.h3, new_phi.diag)
        new_alloc = waterfill_covariances(new_heq, total_power, noise_var, n_streams, meter)
        new_rate = rate_from_heq(new_heq, new_alloc.q, noise_var)
        iterations += 1

        delta = new_rate - rate
        if new_rate > rate:
            phi = new_phi
            eq = EquivalentChannel(heq=new_heq, h1=eq.h1, h2=eq.h2, h3=eq.h3, phi=new_phi)
            alloc = new_alloc
            rate = new_rate
        else:
            mu /= 10.0
        trace.append(rate)
        if abs(delta) < epsilon:
            converged = True
            break
        if mu < MU_FLOOR:
            break

    if meter is not None:
        meter.iterations += iterations
        meter.stop()
    return PgaResult(phi=phi, power=alloc, rate=rate, trace=np.asarray(trace),
                     iterations=iterations, converged=converged)
