"""Throughput scaling with baud-rate at a fixed photon budget per second.

At photon flux N and baud-rate b the transmitter loads n = N/b photons
into each pulse.  Pushing b up, a per-pulse (heterodyne/homodyne) receiver
saturates: b*log2(1 + tau*(N/b)/(1+nu)) climbs to the hard ceiling
N*tau/((1+nu)*ln 2).  A joint-detection receiver does not: with zero
noise its bits/s grow without bound, and with a fixed noise *flux* the
growth is logarithmic in b.  The baud-rate where the joint-detection
rate first exceeds the per-pulse ceiling is computed by
:func:`quantum_limit_crossover`.

Hadamard receivers interfere blocks of k pulses and, on a noiseless
channel, reach (b/k)*(1 - exp(-k*tau*N/b))*log2(k) bits per second; they
are a physically realizable stand-in for full joint detection at low
photon number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .rates import (
    LN2,
    holevo_se_from_totals,
    shannon_se_from_totals,
    thermal_entropy,
)


def _check_common(photon_flux: float, tau: float, nu: float, baud: float) -> None:
    if photon_flux < 0:
        raise ValueError(f"photon flux must be non-negative, got {photon_flux}")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"attenuation must lie in [0, 1], got {tau}")
    if nu < 0:
        raise ValueError(f"noise must be non-negative, got {nu}")
    if baud <= 0:
        raise ValueError(f"baud rate must be positive, got {baud}")


def ossr_rate_limit(photon_flux: float, tau: float, nu: float = 0.0) -> float:
    """Ceiling on per-pulse detection: N*tau/((1+nu)*ln 2) bits per second."""
    return photon_flux * tau / ((1.0 + nu) * LN2)


def ojdr_rate_limit(photon_flux: float, tau: float, nu: float) -> float:
    """High-baud limit of joint detection at fixed per-pulse noise.

    N*tau*log2(1 + 1/nu); infinite when the channel is noiseless.
    """
    if nu == 0.0:
        return math.inf
    return photon_flux * tau * math.log1p(1.0 / nu) / LN2


def rate_ossr(photon_flux: float, tau: float, nu: float, baud: float) -> float:
    """Per-pulse (heterodyne) bits per second at the given baud-rate."""
    _check_common(photon_flux, tau, nu, baud)
    return baud * shannon_se_from_totals(tau, nu, photon_flux / baud)


def rate_ojdr(photon_flux: float, tau: float, nu: float, baud: float) -> float:
    """Joint-detection bits per second at fixed per-pulse noise ``nu``."""
    _check_common(photon_flux, tau, nu, baud)
    return baud * holevo_se_from_totals(tau, nu, photon_flux / baud)


def rate_ojdr_noise_flux(photon_flux: float, tau: float, noise_flux: float, baud: float) -> float:
    """Joint-detection bits per second at fixed noise photons per second.

    The per-pulse noise is noise_flux/baud, so the rate is
    b*(g((tau*N + noise_flux)/b) - g(noise_flux/b)); asymptotically it
    tracks tau*N*log2(b/(tau*N + noise_flux)) up to an additive constant.
    """
    _check_common(photon_flux, tau, noise_flux, baud)
    received = (tau * photon_flux + noise_flux) / baud
    return baud * (thermal_entropy(received) - thermal_entropy(noise_flux / baud))


def rate_hadamard(photon_flux: float, tau: float, baud: float, order: int) -> float:
    """Noiseless Hadamard-receiver bits per second for block size ``order``."""
    if order < 2 or (order & (order - 1)) != 0:
        raise ValueError(f"order must be a power of two >= 2, got {order}")
    _check_common(photon_flux, tau, 0.0, baud)
    occupancy = -math.expm1(-order * tau * photon_flux / baud)
    return (baud / order) * occupancy * math.log2(order)


def quantum_limit_crossover(
    photon_flux: float,
    tau: float,
    nu: float = 0.0,
    bracket: tuple[float, float] = (1.0, 1e18),
    rel_tol: float = 1e-6,
) -> float | None:
    """Baud-rate where joint detection first beats the per-pulse ceiling.

    Solves rate_ojdr(N, tau, nu, b) = N*tau/((1+nu)*ln 2) by bisection;
    the left side grows monotonically in b, so the crossing is unique.
    Returns None when no crossover exists, i.e. when the joint-detection
    asymptote never exceeds the ceiling (possible only for noisy channels).
    """
    if photon_flux * tau <= 0:
        raise ValueError("crossover needs a positive received photon flux")
    if nu < 0:
        raise ValueError(f"noise must be non-negative, got {nu}")
    bound = ossr_rate_limit(photon_flux, tau, nu)
    if not ojdr_rate_limit(photon_flux, tau, nu) > bound:
        return None

    def gap(b: float) -> float:
        return rate_ojdr(photon_flux, tau, nu, b) - bound

    lo, hi = bracket
    while gap(lo) > 0.0 and lo > 1e-30:
        lo /= 1e6
    while gap(hi) < 0.0 and hi < 1e30:
        hi *= 10.0
    if gap(lo) > 0.0 or gap(hi) < 0.0:
        raise RuntimeError("failed to bracket the quantum-limit crossover")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if gap(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class BaudScan:
    """Per-pulse vs joint-detection rate curves over a baud-rate sweep.

    ``noise`` is interpreted per pulse when ``noise_is_flux`` is False and
    as photons per second (split over pulses as noise/b) otherwise.
    """

    photon_flux: float
    tau: float
    noise: float
    noise_is_flux: bool
    baud_points: tuple[float, ...]
    rates_ossr: tuple[float, ...]
    rates_ojdr: tuple[float, ...]


def scan_baud_rates(
    photon_flux: float,
    tau: float,
    noise: float,
    baud_points: Sequence[float],
    noise_is_flux: bool = False,
) -> BaudScan:
    """Evaluate both receiver families on an ascending baud-rate grid."""
    points = tuple(float(b) for b in baud_points)
    if not points:
        raise ValueError("baud_points must be non-empty")
    if any(b2 <= b1 for b1, b2 in zip(points, points[1:])):
        raise ValueError("baud_points must be strictly ascending")
    ossr = []
    ojdr = []
    for b in points:
        per_pulse_noise = noise / b if noise_is_flux else noise
        ossr.append(b * shannon_se_from_totals(tau, per_pulse_noise, photon_flux / b))
        if noise_is_flux:
            ojdr.append(rate_ojdr_noise_flux(photon_flux, tau, noise, b))
        else:
            ojdr.append(rate_ojdr(photon_flux, tau, noise, b))
    return BaudScan(
        photon_flux=photon_flux,
        tau=tau,
        noise=noise,
        noise_is_flux=noise_is_flux,
        baud_points=points,
        rates_ossr=tuple(ossr),
        rates_ojdr=tuple(ojdr),
    )
