"""Rydberg pair interactions, lifetimes and trap-release heating."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .atomic import RydbergState, photoionization_cross_section, photoionization_rate
from .errors import ValidationError
from .units import CONST

MICRON3 = 1e-18

# n = 50 S-state anchors for the nS+nS <-> nP+(n-1)P channel
ANCHOR_N = 50
ANCHOR_C3 = 2 * math.pi * 5.75e9 * MICRON3  # rad/s m^3
ANCHOR_DEFECT = -2 * math.pi * 3000e6  # rad/s
ANCHOR_DIPOLE = 3300.0  # e a_0, field-mixed D state


@dataclass(frozen=True)
class PairConfig:
    """Two-atom geometry and channel parameters (anchors refer to n = 50)."""

    n: int = 50
    channel: str = "S_vdW"
    separation: float = 10e-6
    angle: float = 0.0
    c3_anchor: float = ANCHOR_C3
    defect_anchor: float = ANCHOR_DEFECT
    dipole_anchor: float = ANCHOR_DIPOLE

    def __post_init__(self):
        if self.channel not in ("S_vdW", "field_mixed_dipole"):
            raise ValidationError("channel must be 'S_vdW' or 'field_mixed_dipole'")
        if self.separation <= 0:
            raise ValidationError("separation must be positive")
        if self.n < 5:
            raise ValidationError("principal quantum number must be at least 5")
        if self.channel == "field_mixed_dipole" and self.dipole_anchor <= 0:
            raise ValidationError("dipole moment must be positive")

    @property
    def c3(self) -> float:
        """C3 scaled as n^4 from the anchor (two n^2 dipoles)."""
        return self.c3_anchor * (self.n / ANCHOR_N) ** 4

    @property
    def defect(self) -> float:
        """Energy defect scaled as n^-3 from the anchor."""
        return self.defect_anchor * (ANCHOR_N / self.n) ** 3

    @property
    def dipole(self) -> float:
        return self.dipole_anchor * (self.n / ANCHOR_N) ** 2


def exchange_coupling(pair: PairConfig, separation=None):
    r = pair.separation if separation is None else np.asarray(separation, float)
    return pair.c3 / r**3


def vdw_potential(pair: PairConfig, separation=None):
    """Two-channel pair shift V = delta/2 + sqrt(4 U3^2/3 + delta^2/4) in rad/s."""
    if pair.channel != "S_vdW":
        raise ValidationError("vdw_potential needs the S_vdW channel")
    u3 = exchange_coupling(pair, separation)
    d = pair.defect
    root = np.sqrt(4 * u3**2 / 3 + d**2 / 4)
    if d < 0:
        # rationalized to avoid cancellation far outside the crossover
        return (4 * u3**2 / 3) / (root - d / 2)
    return d / 2 + root


def vdw_asymptote(pair: PairConfig, separation=None):
    """Large-separation limit -4 U3^2 / (3 delta)."""
    u3 = exchange_coupling(pair, separation)
    return -4 * u3**2 / (3 * pair.defect)


def vdw_scaled(n: int, separation: float, anchor: PairConfig | None = None) -> float:
    """Asymptotic van der Waals shift at level n, scaled as n^11 from the n=50 anchor."""
    anchor = anchor or PairConfig(n=ANCHOR_N)
    base = PairConfig(n=ANCHOR_N, c3_anchor=anchor.c3_anchor, defect_anchor=anchor.defect_anchor)
    return float(vdw_asymptote(base, separation)) * (n / ANCHOR_N) ** 11


def dipole_dipole(pair: PairConfig, separation=None, angle=None):
    """mu^2 (1 - 3 cos^2 theta) / (4 pi eps0 hbar R^3) in rad/s."""
    if pair.channel != "field_mixed_dipole":
        raise ValidationError("dipole_dipole needs the field_mixed_dipole channel")
    r = pair.separation if separation is None else np.asarray(separation, float)
    th = pair.angle if angle is None else np.asarray(angle, float)
    mu = pair.dipole * CONST.e * CONST.a_0
    return mu**2 * (1 - 3 * np.cos(th) ** 2) / (4 * math.pi * CONST.epsilon_0 * CONST.hbar * r**3)


# ---------------------------------------------------------------------------
# lifetimes


def zero_temperature_rate(state: RydbergState) -> float:
    sp = state.species
    if state.L not in sp.lifetime_tau0_ns:
        raise ValidationError(f"no lifetime scaling for L={state.L}")
    tau = sp.lifetime_tau0_ns[state.L] * 1e-9 * state.n_star ** sp.lifetime_exponent[state.L]
    return 1.0 / tau


def blackbody_rate(state: RydbergState, temperature: float) -> float:
    """4 alpha^3 k_B T / (3 hbar n*^2)."""
    if temperature < 0:
        raise ValidationError("temperature must be non-negative")
    return 4 * CONST.alpha**3 * CONST.k_B * temperature / (3 * CONST.hbar * state.n_star**2)


def radiative_lifetime(state: RydbergState, temperature: float = 300.0) -> float:
    return 1.0 / (zero_temperature_rate(state) + blackbody_rate(state, temperature))


@dataclass(frozen=True)
class LifetimeBreakdown:
    radiative_rate: float
    blackbody_rate: float
    photoionization_rate: float
    cross_section_cm2: float

    @property
    def total_rate(self) -> float:
        return self.radiative_rate + self.blackbody_rate + self.photoionization_rate

    @property
    def lifetime(self) -> float:
        return 1.0 / self.total_rate

    @property
    def photoionization_lifetime(self) -> float:
        return math.inf if self.photoionization_rate == 0 else 1.0 / self.photoionization_rate


def total_lifetime(state: RydbergState, temperature: float, intensity: float,
                   trap_wavelength: float = 1.01e-6) -> LifetimeBreakdown:
    """Radiative, blackbody and trap-light photoionization decay combined."""
    if intensity < 0:
        raise ValidationError("intensity must be non-negative")
    omega = 2 * math.pi * CONST.c / trap_wavelength
    if intensity == 0:
        sigma, gamma = 0.0, 0.0
    else:
        sigma = photoionization_cross_section(state, trap_wavelength)
        gamma = photoionization_rate(sigma, intensity, omega)
    return LifetimeBreakdown(zero_temperature_rate(state), blackbody_rate(state, temperature),
                             gamma, sigma)


def release_heating(temperature: float, omega: float, duration: float) -> float:
    """Mean heating T_a (omega t)^2 / 2 while the trap is off for ``duration``."""
    if duration < 0:
        raise ValidationError("duration must be non-negative")
    return temperature * 0.5 * (omega * duration) ** 2
