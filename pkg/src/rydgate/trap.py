"""Far-off-resonance optical trap: geometry, depth, motion and loss/heating times."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .atomic import RB87, SpeciesData
from .errors import ConfigurationError, ValidationError
from .units import ANGSTROM3_TO_SI, CONST, gaussian_peak_intensity, light_shift

INFINITE_TIME = math.inf  # sentinel for mechanisms that are switched off


@dataclass(frozen=True)
class NoiseSpectrum:
    """One-sided spectral density as a piecewise-constant table.

    ``edges`` has one more entry than ``values``; bin i covers
    [edges[i], edges[i+1]). Lookups outside the table raise ConfigurationError.
    """

    edges: tuple
    values: tuple

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        values = tuple(float(v) for v in self.values)
        if len(edges) != len(values) + 1 or not values:
            raise ValidationError("noise spectrum needs len(edges) == len(values) + 1")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValidationError("noise spectrum edges must increase")
        if any(v < 0 for v in values):
            raise ValidationError("noise spectral density must be non-negative")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "values", values)

    @classmethod
    def flat(cls, value: float) -> "NoiseSpectrum":
        return cls((0.0, math.inf), (value,))

    def at(self, frequency: float) -> float:
        idx = int(np.searchsorted(self.edges, frequency, side="right")) - 1
        if idx < 0 or idx >= len(self.values):
            raise ConfigurationError(
                f"noise spectrum has no entry at {frequency:.6g} Hz "
                f"(covers {self.edges[0]:.6g} to {self.edges[-1]:.6g} Hz)")
        return self.values[idx]


@dataclass(frozen=True)
class TrapConfig:
    """Trap laser and atom parameters. Energies are in kelvin, lengths in meters.

    Give either ``depth`` (the signed peak light shift U_m) or ``power``; when
    both are None the depth defaults to -1 mK.
    """

    wavelength: float = 1.01e-6
    waist: float = 2.5e-6
    depth: float | None = None
    power: float | None = None
    temperature: float = 50e-6
    pressure_mbar: float = 1e-10
    background_temperature: float = 300.0
    alpha0: float = 114.0  # scalar polarizability (A^3)
    alpha1: float = -6.0  # vector polarizability (A^3)
    intensity_noise: NoiseSpectrum = field(default_factory=lambda: NoiseSpectrum.flat(1e-12))
    pointing_noise: NoiseSpectrum = field(default_factory=lambda: NoiseSpectrum.flat((5.6e-13) ** 2))
    steering_noise: NoiseSpectrum = field(default_factory=lambda: NoiseSpectrum.flat(6.5e-14))
    intensity_drift: float = 1e-4
    species: SpeciesData = field(default=RB87, repr=False)

    def __post_init__(self):
        if self.wavelength <= 0 or self.waist <= self.wavelength / 2:
            raise ValidationError("waist must exceed half the trap wavelength")
        if self.temperature <= 0:
            raise ValidationError("atom temperature must be positive")
        if self.pressure_mbar <= 0:
            raise ValidationError("pressure must be positive")
        if self.background_temperature <= 0:
            raise ValidationError("background temperature must be positive")
        if self.power is not None and self.power < 0:
            raise ValidationError("laser power must be non-negative")
        if self.intensity_drift < 0:
            raise ValidationError("intensity drift must be non-negative")
        if self.power is not None and self.depth is not None:
            raise ValidationError("give either depth or power, not both")
        if abs(self.trap_depth) <= self.temperature:
            raise ValidationError("atom temperature must be below the trap depth")

    @property
    def trap_depth(self) -> float:
        """Signed peak potential U_m in kelvin."""
        if self.power is not None:
            return depth_from_power(self.power, self.waist, self.alpha0)
        return self.depth if self.depth is not None else -1e-3

    @property
    def rayleigh_length(self) -> float:
        return math.pi * self.waist**2 / self.wavelength

    @property
    def omega(self) -> float:
        return 2 * math.pi * CONST.c / self.wavelength

    @property
    def peak_intensity(self) -> float:
        """Peak intensity consistent with the trap depth and alpha0."""
        alpha_si = self.alpha0 * ANGSTROM3_TO_SI
        e2 = 4 * abs(self.trap_depth) * CONST.k_B / abs(alpha_si)
        return CONST.epsilon_0 * CONST.c * e2 / 2


@dataclass(frozen=True)
class TrapDerived:
    rayleigh_length: float
    depth_ratio: float  # chi = |U_m| / T_a
    anisotropy: float  # xi_f = pi w / lambda
    omega_x: float
    omega_y: float
    omega_z: float
    x_variance: float
    z_variance: float
    velocity_variance: float


def depth_from_power(power: float, waist: float, alpha0: float) -> float:
    """Signed peak depth (K) of a Gaussian beam: U_m = -alpha0 |E|^2 / 4."""
    intensity = gaussian_peak_intensity(power, waist)
    return light_shift(alpha0 * ANGSTROM3_TO_SI, intensity) / CONST.k_B


def potential(cfg: TrapConfig, x, y, z):
    """Gaussian-beam trap potential (K) at position(s) x, y, z (m)."""
    x, y, z = np.asarray(x, float), np.asarray(y, float), np.asarray(z, float)
    zr = 1.0 + (z / cfg.rayleigh_length) ** 2
    w2 = cfg.waist**2 * zr
    out = cfg.trap_depth * np.exp(-2 * (x**2 + y**2) / w2) / zr
    return float(out) if out.ndim == 0 else out


def capture_volume(cfg: TrapConfig) -> float:
    """Volume (cm^3) where |U| exceeds the atom temperature, from the closed form."""
    chi = abs(cfg.trap_depth) / cfg.temperature
    return capture_volume_for(cfg.waist, cfg.rayleigh_length, chi)


def capture_volume_for(waist: float, rayleigh: float, chi: float) -> float:
    if chi <= 1:
        warnings.warn("trap depth does not exceed the atom temperature: zero capture volume",
                      RuntimeWarning, stacklevel=2)
        return 0.0
    zm = rayleigh * math.sqrt(chi - 1)
    vol = (4 * math.pi / 3) * waist**2 * zm + (2 * math.pi / 9) * waist**2 / rayleigh**2 * (
        zm**3 - 6 * rayleigh**3 * math.atan(zm / rayleigh))
    return vol * 1e6


def vibration_frequencies(cfg: TrapConfig) -> tuple[float, float]:
    """Radial and axial angular oscillation frequencies (rad/s)."""
    u_over_m = abs(cfg.trap_depth) * CONST.k_B / cfg.species.mass
    wx = 2.0 / cfg.waist * math.sqrt(u_over_m)
    wz = math.sqrt(2.0) / cfg.rayleigh_length * math.sqrt(u_over_m)
    return wx, wz


def thermal_variances(cfg: TrapConfig) -> tuple[float, float, float]:
    """Thermal <x^2>, <z^2> (m^2) and per-axis <v^2> (m^2/s^2)."""
    ratio = cfg.temperature / abs(cfg.trap_depth)
    x2 = cfg.waist**2 / 4 * ratio
    z2 = math.pi**2 * cfg.waist**4 / (2 * cfg.wavelength**2) * ratio
    v2 = cfg.temperature * CONST.k_B / cfg.species.mass
    return x2, z2, v2


def derive(cfg: TrapConfig) -> TrapDerived:
    wx, wz = vibration_frequencies(cfg)
    x2, z2, v2 = thermal_variances(cfg)
    return TrapDerived(
        rayleigh_length=cfg.rayleigh_length,
        depth_ratio=abs(cfg.trap_depth) / cfg.temperature,
        anisotropy=math.pi * cfg.waist / cfg.wavelength,
        omega_x=wx, omega_y=wx, omega_z=wz,
        x_variance=x2, z_variance=z2, velocity_variance=v2,
    )


def collision_T1(cfg: TrapConfig) -> float:
    """Loss time from background-gas collisions (s)."""
    tb = cfg.background_temperature
    density = cfg.pressure_mbar * 100.0 / (CONST.k_B * tb)
    speed = math.sqrt(3 * CONST.k_B * tb / cfg.species.mass)
    return 1.0 / (speed * density * cfg.species.sigma_collision)


@dataclass(frozen=True)
class RayleighResult:
    cross_section_cm2: float
    heating_time: float  # |U_m| / (dE/dt)
    doubling_T1: float  # time to double the thermal energy


def rayleigh_scattering(cfg: TrapConfig) -> RayleighResult:
    """Elastic scattering cross section and heating times."""
    k = 2 * math.pi / cfg.wavelength
    alpha_m3 = abs(cfg.alpha0) * 1e-30  # polarizability volume
    sigma = 8 * math.pi / 3 * k**4 * alpha_m3**2
    heating = 2 * alpha_m3 * cfg.species.mass * cfg.wavelength / (CONST.hbar * sigma)
    doubling = heating * cfg.temperature / abs(cfg.trap_depth)
    return RayleighResult(sigma * 1e4, heating, doubling)


@dataclass(frozen=True)
class RamanScatteringResult:
    cross_section_cm2: float
    T1: float


def raman_scattering_T1(cfg: TrapConfig, alpha1: float | None = None) -> RamanScatteringResult:
    """Spin-changing scattering cross section and the resulting T1."""
    a1 = cfg.alpha1 if alpha1 is None else alpha1
    k = 2 * math.pi / cfg.wavelength
    a1_m3 = abs(a1) * 1e-30
    sigma = 4 * math.pi / 3 * k**4 * a1_m3**2
    if a1 == 0:
        return RamanScatteringResult(0.0, INFINITE_TIME)
    depth_j = abs(cfg.trap_depth) * CONST.k_B
    t1 = 3 * CONST.hbar * cfg.wavelength**3 * abs(cfg.alpha0) * 1e-30 / (
        16 * math.pi**3 * depth_j * a1_m3**2)
    return RamanScatteringResult(sigma * 1e4, t1)


@dataclass(frozen=True)
class NoiseHeatingResult:
    intensity_T1: float
    pointing_T1: float
    steering_T1: float


def _escape_time(rate_coefficient: float, log_factor: float) -> float:
    return INFINITE_TIME if rate_coefficient == 0 else log_factor / rate_coefficient


def noise_heating_T1s(cfg: TrapConfig) -> NoiseHeatingResult:
    """Escape times from intensity, pointing and beam-steering noise.

    The radial trap frequency nu is used; the intensity spectrum is read at
    2 nu, the position and angle spectra at nu.
    """
    d = derive(cfg)
    nu = d.omega_x / (2 * math.pi)
    log_factor = math.log(d.depth_ratio)
    base = math.pi**2 * nu**2
    s_i = cfg.intensity_noise.at(2 * nu)
    s_x = cfg.pointing_noise.at(nu)
    s_t = cfg.steering_noise.at(nu)
    return NoiseHeatingResult(
        intensity_T1=_escape_time(base * s_i, log_factor),
        pointing_T1=_escape_time(base * s_x / d.x_variance, log_factor),
        steering_T1=_escape_time(base * d.anisotropy**2 * s_t, log_factor),
    )


TECHNICAL_NOISE_T1 = 20.0  # engineering estimate for the three noise channels together
