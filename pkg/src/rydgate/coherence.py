"""Ground-state dephasing mechanisms and the storage-coherence budget.

Two routes to the trap-induced hyperfine shift are provided. ``beta`` is the
static-polarizability ratio built from the 5P and 4D term energies; the
dispersive ratio differentiates the D1/D2 light shift with respect to the
transition frequency and captures the frequency dependence at the trap
wavelength. The intensity-drift estimate uses the former, the motional
estimate the latter (see the decisions ledger kept with the project).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .atomic import INVERSE_CM_TO_RAD_S, RB87, SpeciesData
from .budget import Budget
from .errors import ValidationError
from .trap import (
    INFINITE_TIME,
    TECHNICAL_NOISE_T1,
    TrapConfig,
    collision_T1,
    raman_scattering_T1,
    rayleigh_scattering,
)
from .units import CONST


# ---------------------------------------------------------------------------
# hyperfine light shift


def _centroid_cm(species: SpeciesData, n: int, L: int) -> float:
    lo, hi = species.term_energy_cm(n, L, L - 0.5), species.term_energy_cm(n, L, L + 0.5)
    return (2 * L * lo + (2 * L + 2) * hi) / (4 * L + 2)


def hyperfine_stark_beta(species: SpeciesData = RB87) -> float:
    """Dimensionless ratio beta of the hyperfine correction to the scalar light shift."""
    hf_cm = species.omega_hf / INVERSE_CM_TO_RAD_S
    e5p = _centroid_cm(species, 5, 1)
    e4d = _centroid_cm(species, 4, 2)
    return 2 * hf_cm * (1 / (2 * e5p) + 1 / e4d)


def dispersive_shift_ratio(omega_f: float, species: SpeciesData = RB87) -> float:
    """Differential hyperfine light shift divided by the scalar shift.

    Each D line contributes w_j * w0_j / (w0_j^2 - w^2) with oscillator weights
    1/3 (D1) and 2/3 (D2); the hyperfine levels see the lines displaced by the
    ground splitting, so the ratio is omega_hf times the log-derivative.
    """
    lines = [(1 / 3, species.term_energy_cm(5, 1, 0.5) * INVERSE_CM_TO_RAD_S),
             (2 / 3, species.term_energy_cm(5, 1, 1.5) * INVERSE_CM_TO_RAD_S)]
    shift = sum(w * w0 / (w0**2 - omega_f**2) for w, w0 in lines)
    slope = sum(w * (w0**2 + omega_f**2) / (w0**2 - omega_f**2) ** 2 for w, w0 in lines)
    return species.omega_hf * slope / shift


def hyperfine_shift_hz(depth_kelvin: float, ratio: float) -> float:
    """Hyperfine frequency shift (Hz) ratio * |U| for a depth in kelvin."""
    return ratio * abs(depth_kelvin) * CONST.k_B / CONST.h


def intensity_drift_T2(beta: float, depth_kelvin: float, drift: float) -> float:
    """T2 = 2 pi hbar / (beta U delta I / I)."""
    if drift == 0 or depth_kelvin == 0 or beta == 0:
        return INFINITE_TIME
    return 1.0 / (hyperfine_shift_hz(depth_kelvin, beta) * drift)


def motional_T2(cfg: TrapConfig, compensation_factor: float = 1.0) -> float:
    """Dephasing from thermal motion sampling intensity variations of order T_a/2|U_m|."""
    if compensation_factor < 1:
        raise ValidationError("compensation factor must be at least 1")
    ratio = dispersive_shift_ratio(cfg.omega, cfg.species)
    shift = hyperfine_shift_hz(cfg.trap_depth, ratio) * cfg.temperature / (2 * abs(cfg.trap_depth))
    return compensation_factor / shift


# ---------------------------------------------------------------------------
# Zeeman shifts


class BasisChoice(str, enum.Enum):
    CLOCK = "clock_mF0"
    MAGIC_LOW_FIELD = "magic_1m1_2p1"
    MAGIC_HIGH_FIELD = "magic_1m1_2m1"


BASIS_STATES = {
    BasisChoice.CLOCK: ((1, 0), (2, 0)),
    BasisChoice.MAGIC_LOW_FIELD: ((1, -1), (2, 1)),
    BasisChoice.MAGIC_HIGH_FIELD: ((1, -1), (2, -1)),
}


def breit_rabi_energy(F: int, m: int, field_gauss: float, species: SpeciesData = RB87) -> float:
    """Ground-state energy / hbar (rad/s) of |F, m> for J=1/2 at the given field."""
    i_spin = species.nuclear_spin
    dE = species.omega_hf
    b = field_gauss * 1e-4
    mu = CONST.mu_B / CONST.hbar
    x = (species.g_j - species.g_i) * mu * b / dE
    sign = 1 if F == i_spin + 0.5 else -1
    base = -dE / (2 * (2 * i_spin + 1)) + species.g_i * mu * m * b
    if abs(m) == i_spin + 0.5:
        # stretched states: the square root is the perfect square (1 +- x)
        return dE * i_spin / (2 * i_spin + 1) + (m / abs(m)) * (
            species.g_j / 2 + i_spin * species.g_i) * mu * b
    return base + sign * dE / 2 * math.sqrt(1 + 4 * m * x / (2 * i_spin + 1) + x * x)


def qubit_frequency(basis: BasisChoice, field_gauss: float, species: SpeciesData = RB87) -> float:
    (fa, ma), (fb, mb) = BASIS_STATES[BasisChoice(basis)]
    return breit_rabi_energy(fb, mb, field_gauss, species) - breit_rabi_energy(fa, ma, field_gauss, species)


def magic_field(basis: BasisChoice, species: SpeciesData = RB87) -> float:
    """Bias field (G) where the qubit frequency is stationary in B."""
    basis = BasisChoice(basis)
    if basis is BasisChoice.CLOCK:
        return 0.0
    if basis is BasisChoice.MAGIC_HIGH_FIELD:
        mu = CONST.mu_B / CONST.hbar
        return species.omega_hf / (2 * (species.g_j - species.g_i) * mu) * 1e4
    h = 1e-4

    def slope(b):
        return (qubit_frequency(basis, b + h, species) - qubit_frequency(basis, b - h, species)) / (2 * h)

    return brentq(slope, 0.5, 20.0, xtol=1e-12)


def zeeman_T2(basis: BasisChoice, field_fluctuation: float, bias: float | None = None,
              species: SpeciesData = RB87) -> float:
    """T2 = 2 pi / |omega(B0 + dB) - omega(B0)| with B0 the magic field or a given bias (G)."""
    if field_fluctuation == 0:
        raise ValidationError("field fluctuation must be non-zero")
    b0 = magic_field(basis, species) if bias is None else bias
    dw = qubit_frequency(basis, b0 + field_fluctuation, species) - qubit_frequency(basis, b0, species)
    return INFINITE_TIME if dw == 0 else 2 * math.pi / abs(dw)


# ---------------------------------------------------------------------------
# vector light shift


def _g_f(F: int, species: SpeciesData) -> float:
    i, s = species.nuclear_spin, 0.5
    return (F * (F + 1) + s * (s + 1) - i * (i + 1)) / (F * (F + 1))


def vector_shift_T2(alpha0: float, alpha1: float, ellipticity: float, drift: float,
                    depth_kelvin: float, basis: BasisChoice = BasisChoice.MAGIC_HIGH_FIELD,
                    species: SpeciesData = RB87) -> float:
    """Dephasing from the vector light shift under intensity drift.

    The vector part of the shift is (alpha1/alpha0) |U| <S_z> sqrt(1 - eps^2)
    with <S_z> = g_F m_F / 2, so the differential shift scales with the
    difference of g_F m_F between the two basis states.
    """
    if not 0 <= abs(ellipticity) <= 1:
        raise ValidationError("ellipticity parameter must lie in [-1, 1]")
    (fa, ma), (fb, mb) = BASIS_STATES[BasisChoice(basis)]
    dgm = _g_f(fb, species) * mb - _g_f(fa, species) * ma
    circ = math.sqrt(1 - ellipticity**2)
    shift = abs(alpha1 / alpha0) * abs(depth_kelvin) * CONST.k_B * abs(dgm) / 2 * circ * drift
    return INFINITE_TIME if shift == 0 else 2 * math.pi * CONST.hbar / shift


# ---------------------------------------------------------------------------
# storage budget

TABLE1_MECHANISMS = (
    "background gas collisions",
    "Rayleigh scattering",
    "Raman scattering",
    "laser noise heating",
    "AC Stark shift - intensity noise",
    "AC Stark shift - motional",
    "background B field",
)


def assemble_table1(rows: dict) -> Budget:
    """Build the storage budget from a mapping mechanism -> (kind, value, category)."""
    budget = Budget("ground-state coherence")
    for name, (kind, value, category) in rows.items():
        budget.add(name, kind, value, category)
    budget.require(TABLE1_MECHANISMS)
    return budget


def storage_budget(cfg: TrapConfig | None = None, compensation_factor: float = 100.0,
                   field_fluctuation: float = 1e-3, bias: float = 15e-3,
                   technical_noise_T1: float = TECHNICAL_NOISE_T1) -> Budget:
    """Compute every storage mechanism for the clock basis and assemble the budget."""
    cfg = cfg or TrapConfig()
    beta = hyperfine_stark_beta(cfg.species)
    rows = {
        "background gas collisions": ("T1", collision_T1(cfg), "trap loss"),
        "Rayleigh scattering": ("T1", rayleigh_scattering(cfg).doubling_T1, "photon scattering"),
        "Raman scattering": ("T1", raman_scattering_T1(cfg).T1, "photon scattering"),
        "laser noise heating": ("T1", technical_noise_T1, "laser noise"),
        "AC Stark shift - intensity noise": (
            "T2", intensity_drift_T2(beta, cfg.trap_depth, cfg.intensity_drift), "AC Stark"),
        "AC Stark shift - motional": ("T2", motional_T2(cfg, compensation_factor), "AC Stark"),
        "background B field": (
            "T2", zeeman_T2(BasisChoice.CLOCK, field_fluctuation, bias, cfg.species), "magnetic field"),
    }
    return assemble_table1(rows)
