"""Spectral-efficiency functionals and their gain derivatives.

All logarithms are base 2 and all spectral efficiencies (SE) are bits per
pulse, which for the narrowband channels modelled here equals bits/s/Hz.
Three receiver families are covered, each paired with the SE it attains
on a channel with end-to-end attenuation tau and added noise nu:

    heterodyne   log2(1 + tau*n / (1 + nu))          per-pulse detection
    holevo       g(tau*n + nu) - g(nu)               joint detection over
                                                     long pulse blocks
    homodyne     log2(1 + 4*tau*n / (1 + 2*nu))      per-pulse, single
                                                     quadrature

where g is the entropy of a bosonic thermal state.  The Holevo SE is
never below the heterodyne one, which is what makes joint detection
interesting for amplifier energy budgets.

The gain derivatives all share the channel-coefficient derivatives

    d tau / d G_i = tau / G_i
    d nu  / d G_i = (nu - nu_future[i] + tau_future[i]) / G_i,

and reduce to compact closed forms in beta[i] = tau_future[i] -
nu_future[i].  For the Holevo SE the sign of the derivative is governed
by beta[i] alone in two regimes: beta[i] <= 0 makes it positive for every
n > 0 (amplifier worth running at maximum), beta[i] >= 1/2 makes it
negative (amplifier best left off); in between the sign depends on the
operating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .link import ChannelCoefficients

LN2 = math.log(2.0)


@dataclass(frozen=True)
class Receiver:
    """Detection strategy marker.

    ``kind`` is one of ``"heterodyne"``, ``"holevo"``, ``"homodyne"`` or
    ``"hadamard"``; only the Hadamard receiver carries an ``order`` (the
    number of pulses it interferes, a power of two).
    """

    kind: str
    order: int | None = None

    _KINDS = ("heterodyne", "holevo", "homodyne", "hadamard")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown receiver kind {self.kind!r}")
        if self.kind == "hadamard":
            k = self.order
            if k is None or k < 2 or (k & (k - 1)) != 0:
                raise ValueError(f"hadamard order must be a power of two >= 2, got {k}")
        elif self.order is not None:
            raise ValueError(f"{self.kind} receiver takes no order")

    @classmethod
    def hadamard(cls, order: int) -> "Receiver":
        return cls("hadamard", order)


HETERODYNE = Receiver("heterodyne")
HOLEVO = Receiver("holevo")
HOMODYNE = Receiver("homodyne")


def thermal_entropy(x: float) -> float:
    """Entropy in bits of a bosonic thermal state with mean photon number x.

    Equals (x+1)*log2(x+1) - x*log2(x), evaluated in the rearranged form
    log2(1+x) + x*log2(1 + 1/x) which has no catastrophic cancellation for
    large x and extends continuously to 0 at x = 0.
    """
    if x < 0:
        raise ValueError(f"mean photon number must be non-negative, got {x}")
    if x == 0.0:
        return 0.0
    return (math.log1p(x) + x * math.log1p(1.0 / x)) / LN2


def thermal_entropy_slope(x: float) -> float:
    """Derivative of :func:`thermal_entropy`: log2(1 + 1/x), +inf at x = 0."""
    if x < 0:
        raise ValueError(f"mean photon number must be non-negative, got {x}")
    if x == 0.0:
        return math.inf
    return math.log1p(1.0 / x) / LN2


# --- SE values from end-to-end totals -------------------------------------

def shannon_se_from_totals(tau: float, nu: float, n: float) -> float:
    if n < 0:
        raise ValueError(f"photon number must be non-negative, got {n}")
    return math.log1p(tau * n / (1.0 + nu)) / LN2


def holevo_se_from_totals(tau: float, nu: float, n: float) -> float:
    if n < 0:
        raise ValueError(f"photon number must be non-negative, got {n}")
    return thermal_entropy(tau * n + nu) - thermal_entropy(nu)


def homodyne_se_from_totals(tau: float, nu: float, n: float) -> float:
    if n < 0:
        raise ValueError(f"photon number must be non-negative, got {n}")
    return math.log1p(4.0 * tau * n / (1.0 + 2.0 * nu)) / LN2


def shannon_se(coeffs: ChannelCoefficients, n: float) -> float:
    """Heterodyne (Shannon) SE in bits per pulse."""
    return shannon_se_from_totals(coeffs.tau, coeffs.nu, n)


def holevo_se(coeffs: ChannelCoefficients, n: float) -> float:
    """Joint-detection (Holevo) SE in bits per pulse; >= shannon_se always."""
    return holevo_se_from_totals(coeffs.tau, coeffs.nu, n)


def homodyne_se(coeffs: ChannelCoefficients, n: float) -> float:
    """Single-quadrature homodyne SE in bits per pulse."""
    return homodyne_se_from_totals(coeffs.tau, coeffs.nu, n)


def se_for(receiver: Receiver, coeffs: ChannelCoefficients, n: float) -> float:
    if receiver.kind == "heterodyne":
        return shannon_se(coeffs, n)
    if receiver.kind == "holevo":
        return holevo_se(coeffs, n)
    if receiver.kind == "homodyne":
        return homodyne_se(coeffs, n)
    raise ValueError(f"no per-pulse SE functional for receiver {receiver.kind!r}")


# --- gain derivatives ------------------------------------------------------

def _check_index(coeffs: ChannelCoefficients, i: int) -> None:
    if not 1 <= i <= coeffs.segments:
        raise IndexError(f"gain index must satisfy 1 <= i <= {coeffs.segments}, got {i}")


def shannon_gain_gradient(coeffs: ChannelCoefficients, n: float, i: int) -> float:
    """d(shannon_se)/dG_i, 1-based i.

    Non-negative for i < K and zero only at i = K: with a heterodyne
    receiver, running every usable amplifier as hard as allowed is optimal.
    """
    _check_index(coeffs, i)
    if n == 0.0:
        return 0.0
    snr = coeffs.tau * n / (1.0 + coeffs.nu)
    dsnr = (snr / coeffs.gains[i - 1]) * (1.0 - coeffs.beta[i]) / (1.0 + coeffs.nu)
    return dsnr / ((1.0 + snr) * LN2)


def holevo_gain_gradient(coeffs: ChannelCoefficients, n: float, i: int) -> float:
    """d(holevo_se)/dG_i, 1-based i.

    Written as [h(tau*n + nu) - h(nu)] / G_i with
    h(x) = (x + beta[i]) * log2(1 + 1/x).  On a noiseless line (nu = 0) the
    limit is returned: -inf for beta[i] > 0, +inf for beta[i] < 0, and the
    finite h(tau*n) / G_i when beta[i] = 0.
    """
    _check_index(coeffs, i)
    if n == 0.0:
        return 0.0
    b = coeffs.beta[i]
    x = coeffs.tau * n + coeffs.nu
    term1 = (x + b) * math.log1p(1.0 / x) / LN2
    if coeffs.nu == 0.0:
        if b == 0.0:
            term2 = 0.0
        else:
            return -math.inf if b > 0 else math.inf
    else:
        term2 = (coeffs.nu + b) * math.log1p(1.0 / coeffs.nu) / LN2
    return (term1 - term2) / coeffs.gains[i - 1]


def homodyne_gain_gradient(coeffs: ChannelCoefficients, n: float, i: int) -> float:
    """d(homodyne_se)/dG_i, 1-based i; its sign is the sign of 1 - 2*beta[i]."""
    _check_index(coeffs, i)
    if n == 0.0:
        return 0.0
    snr = 4.0 * coeffs.tau * n / (1.0 + 2.0 * coeffs.nu)
    dsnr = (snr / coeffs.gains[i - 1]) * (1.0 - 2.0 * coeffs.beta[i]) / (1.0 + 2.0 * coeffs.nu)
    return dsnr / ((1.0 + snr) * LN2)


def se_gain_gradient(receiver: Receiver, coeffs: ChannelCoefficients, n: float, i: int) -> float:
    if receiver.kind == "heterodyne":
        return shannon_gain_gradient(coeffs, n, i)
    if receiver.kind == "holevo":
        return holevo_gain_gradient(coeffs, n, i)
    if receiver.kind == "homodyne":
        return homodyne_gain_gradient(coeffs, n, i)
    raise ValueError(f"no gain derivative for receiver {receiver.kind!r}")
