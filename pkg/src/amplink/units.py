"""Photon-level unit conversions.

Every other module in this package works in dimensionless mean photon
numbers per pulse (equivalently, field energy in units of the photon
energy at the carrier wavelength).  This module is the only place where
joules, watts and wavelengths appear.
"""

from __future__ import annotations

from dataclasses import dataclass

# Exact by SI definition (CODATA 2018).
PLANCK_CONSTANT_JS = 6.62607015e-34
SPEED_OF_LIGHT_M_S = 299792458.0


def photon_energy(wavelength_m: float) -> float:
    """Energy in joules of one photon at the given vacuum wavelength."""
    if wavelength_m <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength_m}")
    return PLANCK_CONSTANT_JS * SPEED_OF_LIGHT_M_S / wavelength_m


def photons_per_pulse(power_w: float, wavelength_m: float, baud_rate: float) -> float:
    """Mean photon number per pulse for a transmitter of the given average power.

    Inverts power = photon_energy(wavelength) * n * baud_rate.
    """
    if power_w < 0:
        raise ValueError(f"power must be non-negative, got {power_w}")
    if baud_rate <= 0:
        raise ValueError(f"baud rate must be positive, got {baud_rate}")
    return power_w / (photon_energy(wavelength_m) * baud_rate)


def photon_flux(power_w: float, wavelength_m: float) -> float:
    """Photons per second emitted at the given average power."""
    if power_w < 0:
        raise ValueError(f"power must be non-negative, got {power_w}")
    return power_w / photon_energy(wavelength_m)


@dataclass(frozen=True)
class PhysicalParams:
    """Transmitter operating point: power, pulse rate and carrier wavelength."""

    power_w: float
    baud_rate: float
    wavelength_m: float = 1550e-9

    def __post_init__(self) -> None:
        if self.wavelength_m <= 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength_m}")
        if self.power_w < 0:
            raise ValueError(f"power must be non-negative, got {self.power_w}")
        if self.baud_rate <= 0:
            raise ValueError(f"baud rate must be positive, got {self.baud_rate}")

    @property
    def photon_energy_j(self) -> float:
        return photon_energy(self.wavelength_m)

    @property
    def photons_per_pulse(self) -> float:
        return photons_per_pulse(self.power_w, self.wavelength_m, self.baud_rate)

    @property
    def photon_flux(self) -> float:
        return photon_flux(self.power_w, self.wavelength_m)
