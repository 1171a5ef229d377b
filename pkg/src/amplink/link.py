"""Multi-span amplified fiber link model.

A link of length L is divided into K equally long fiber segments.  Each
segment attenuates the mean photon number by eta = exp(-alpha*L/K) and is
followed by a quantum-limited amplifier of gain G_i >= 1, which maps a
mean photon number m to G_i*m + (G_i - 1); the additive term is the
minimum noise quantum mechanics allows.  The amplifier after the last
segment is always off (G_K = 1): it would act after detection and cannot
help.

Mean-energy bookkeeping along the line is captured by two coefficient
families.  With tau_0 = 1 and nu_0 = 0, the prefix coefficients obey

    tau_i = G_i * eta * tau_{i-1}
    nu_i  = G_i * eta * nu_{i-1} + G_i - 1,

so the field after segment i carries signal tau_i*n plus noise nu_i for
an input of n photons per pulse.  The complementary "future" coefficients
describe the remaining line seen from segment i,

    tau_future[i] = eta^(K-i) * prod_{j>i} G_j
    nu_future[i]  = sum_{j>i} (G_j - 1) * tau_future[j],

and satisfy the decomposition tau = tau_future[i]*tau_i and
nu = tau_future[i]*nu_i + nu_future[i] for every i.  The combination
beta[i] = tau_future[i] - nu_future[i] classifies how the spectral
efficiency of a joint-detection receiver responds to gain i; it is
non-decreasing in i and equals 1 at i = K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True)
class LinkConfig:
    """Physical description of an equally spaced multi-span link.

    alpha      attenuation coefficient in 1/km
    length_km  total fiber length
    segments   number K of fiber segments (K - 1 usable in-line amplifiers)
    photons    mean photon number per pulse at the transmitter; this is also
               the power cap the field must respect at every amplifier output
    """

    alpha: float
    length_km: float
    segments: int
    photons: float

    def __post_init__(self) -> None:
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if not self.length_km > 0:
            raise ValueError(f"length_km must be positive, got {self.length_km}")
        if int(self.segments) != self.segments or self.segments < 1:
            raise ValueError(f"segments must be a positive integer, got {self.segments}")
        if not self.photons >= 0:
            raise ValueError(f"photons must be non-negative, got {self.photons}")

    @property
    def eta(self) -> float:
        """Per-segment transmissivity exp(-alpha*L/K), in (0, 1]."""
        return math.exp(-self.alpha * self.length_km / self.segments)


@dataclass(frozen=True)
class GainProfile:
    """Ordered amplifier gains G_1..G_K; the last entry is always 1."""

    gains: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.gains) < 1:
            raise ValueError("gain profile must contain at least one entry")
        for j, g in enumerate(self.gains, start=1):
            if not math.isfinite(g) or g < 1.0:
                raise ValueError(f"gain {j} must be finite and >= 1, got {g}")
        if self.gains[-1] != 1.0:
            raise ValueError(f"last gain must be 1 (amplifier after the receiver is off), got {self.gains[-1]}")

    @classmethod
    def off(cls, segments: int) -> "GainProfile":
        """All amplifiers off: pure-loss line."""
        return cls((1.0,) * segments)

    @classmethod
    def fully_amplified(cls, config: LinkConfig) -> "GainProfile":
        """Every in-line amplifier at the largest cap-respecting gain."""
        g = max_gain(config)
        return cls((g,) * (config.segments - 1) + (1.0,))

    def __len__(self) -> int:
        return len(self.gains)

    def __iter__(self) -> Iterator[float]:
        return iter(self.gains)

    def __getitem__(self, j: int) -> float:
        return self.gains[j]


@dataclass(frozen=True)
class ChannelCoefficients:
    """All attenuation/noise bookkeeping for one (link, gain profile) pair.

    Sequences are indexed by prefix length i = 0..K, so tau_prefix[0] = 1,
    nu_prefix[0] = 0, tau_future[K] = 1, nu_future[K] = 0.  ``tau`` and
    ``nu`` are the end-to-end totals tau_prefix[K], nu_prefix[K].  The
    originating per-segment transmissivity and gains are kept so that
    derivative formulas can be evaluated from this object alone.
    """

    eta: float
    gains: tuple[float, ...]
    tau_prefix: tuple[float, ...]
    nu_prefix: tuple[float, ...]
    tau_future: tuple[float, ...]
    nu_future: tuple[float, ...]
    beta: tuple[float, ...]
    tau: float
    nu: float

    @property
    def segments(self) -> int:
        return len(self.gains)


def coefficients_for(eta: float, gains: Sequence[float]) -> ChannelCoefficients:
    """Run the loss/amplification recursion for raw gain values.

    Low-level entry used by the optimizers; most callers want
    :func:`propagate`, which validates the profile against a config.
    """
    K = len(gains)
    tau_prefix = [1.0] * (K + 1)
    nu_prefix = [0.0] * (K + 1)
    t = 1.0
    v = 0.0
    for j in range(K):
        g = gains[j]
        t *= eta * g
        v = g * eta * v + (g - 1.0)
        tau_prefix[j + 1] = t
        nu_prefix[j + 1] = v

    tau_future = [1.0] * (K + 1)
    nu_future = [0.0] * (K + 1)
    t = 1.0
    v = 0.0
    for j in range(K - 1, -1, -1):
        g = gains[j]  # this is G_{j+1}, the first gain "after" prefix j
        v = (g - 1.0) * t + v
        t *= eta * g
        tau_future[j] = t
        nu_future[j] = v

    beta = [tau_future[i] - nu_future[i] for i in range(K + 1)]
    return ChannelCoefficients(
        eta=eta,
        gains=tuple(gains),
        tau_prefix=tuple(tau_prefix),
        nu_prefix=tuple(nu_prefix),
        tau_future=tuple(tau_future),
        nu_future=tuple(nu_future),
        beta=tuple(beta),
        tau=tau_prefix[K],
        nu=nu_prefix[K],
    )


def propagate(config: LinkConfig, profile: GainProfile) -> ChannelCoefficients:
    """Compute all channel coefficients of ``profile`` on ``config``."""
    if len(profile) != config.segments:
        raise ValueError(
            f"profile has {len(profile)} gains but the link has {config.segments} segments"
        )
    return coefficients_for(config.eta, profile.gains)


def max_gain(config: LinkConfig) -> float:
    """Largest gain that keeps the field at the power cap.

    Applying this gain to a pulse attenuated by one segment restores its
    signal-plus-noise energy exactly to the cap:
    g*(eta*n) + g - 1 = n for g = (1+n)/(1+eta*n).
    """
    n = config.photons
    return (1.0 + n) / (1.0 + config.eta * n)


def check_power_constraint(
    config: LinkConfig,
    coeffs: ChannelCoefficients,
    rel_tol: float = 1e-9,
) -> tuple[bool, int | None]:
    """Check tau_i*n + nu_i <= cap at every amplifier output i = 1..K.

    Returns ``(True, None)`` when the cap holds everywhere, otherwise
    ``(False, i)`` with the smallest violating 1-based index.  ``rel_tol``
    absorbs floating-point drift at the exactly saturating profile.
    """
    n = config.photons
    limit = n * (1.0 + rel_tol)
    for i in range(1, coeffs.segments + 1):
        if coeffs.tau_prefix[i] * n + coeffs.nu_prefix[i] > limit:
            return False, i
    return True, None


def swap_gains(profile: GainProfile, i: int) -> GainProfile:
    """Exchange gains i and i+1 (1-based); the last gain never moves.

    The swap leaves the end-to-end attenuation unchanged and, when
    G_i < G_{i+1}, lowers the end-to-end noise by exactly
    tau_future[i+1] * (G_{i+1} - G_i) * (1 - eta).
    """
    K = len(profile)
    if not 1 <= i <= K - 2:
        raise IndexError(f"swap index must satisfy 1 <= i <= {K - 2}, got {i}")
    g = list(profile.gains)
    g[i - 1], g[i] = g[i], g[i - 1]
    return GainProfile(tuple(g))


def noise_by_matrix_product(eta: float, gains: Sequence[float]) -> float:
    """End-to-end noise via 2x2 transfer matrices.

    Each segment-plus-amplifier acts on (noise, 1) as the matrix
    [[eta*G, G-1], [0, 1]]; chaining them reproduces the noise recursion.
    Kept as an independent route for cross-checking ``coefficients_for``.
    """
    m00, m01 = 1.0, 0.0  # running product, top row only (bottom row stays (0, 1))
    for g in gains:
        # left-multiply by [[eta*g, g-1], [0, 1]]
        m00, m01 = eta * g * m00, eta * g * m01 + (g - 1.0)
    return m01
