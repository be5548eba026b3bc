"""Single-qubit stimulated Raman rotations and their error budget.

Detunings are angular (rad/s). Light-shift "K factors" are encoded as lists of
(weight, offset) pairs meaning sum weight / (detuning + offset); this keeps the
Zeeman-state ledger and the polarization-leakage table evaluable at any
detuning instead of being frozen numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .atomic import RB87, SpeciesData
from .budget import Budget
from .errors import ConfigurationError, NearResonanceError, ValidationError
from .trap import TrapConfig, derive
from .units import CONST, gaussian_peak_intensity

RESONANCE_GUARD = 2 * math.pi * 50e6
D1_WAVELENGTH = 794.979e-9

Terms = tuple  # tuple of (weight, offset) pairs


def _offsets(species: SpeciesData) -> tuple[float, float]:
    return species.excited_hf_width, species.omega_hf


def k_factor(terms, detuning: float) -> float:
    return float(sum(w / (detuning + off) for w, off in terms))


def main_k_terms(species: SpeciesData = RB87) -> Terms:
    de, _ = _offsets(species)
    return ((1.0, 0.0), (3.0, -de))


def ledger_terms(species: SpeciesData = RB87) -> dict:
    """Light-shift weights for each |F, m_F> with two sigma+ beams near D1."""
    de, w = _offsets(species)
    return {
        (1, -1): ((1, 0.0), (1, -de), (1, -w), (1, -de - w)),
        (1, 0): ((1, 0.0), (3, -de), (1, -w), (3, -de - w)),
        (1, 1): ((6, -de), (6, -de - w)),
        (2, -2): ((6, w), (2, -de + w), (6, 0.0), (2, -de)),
        (2, -1): ((3, w), (3, -de + w), (3, 0.0), (3, -de)),
        (2, 0): ((1, w), (3, -de + w), (1, 0.0), (3, -de)),
        (2, 1): ((2, -de + w), (2, -de)),
        (2, 2): (),
    }


QUBIT_A = (1, 0)
QUBIT_B = (2, 0)


@dataclass(frozen=True)
class RamanConfig:
    """Raman beam parameters; ``detuning`` is Delta_11 in rad/s.

    Polarization impurities left as None use the focusing estimate.
    """

    detuning: float = -2 * math.pi * 100e9
    beam_power: float = 100e-6
    waist: float = 5e-6
    site_spacing: float = 8e-6
    wavelength: float = D1_WAVELENGTH
    radial_element: float = 5.13  # <5S|r|5P> in a_0
    angular_factor: float = 1.0 / 9.0
    eps_1m: complex | None = None
    eps_10: complex | None = None
    eps_2m: complex | None = None
    eps_20: complex | None = None
    intensity_noise: float = 1e-4
    phase_noise: float = 1e-3
    detector_efficiency: float = 0.5
    propagation: str = "co"
    two_photon_detuning: float = 0.0
    preparation_error: float = 1e-4
    species: SpeciesData = field(default=RB87, repr=False)

    def __post_init__(self):
        if self.waist <= self.wavelength / 2:
            raise ValidationError("Raman waist must exceed half the wavelength")
        if self.beam_power < 0:
            raise ValidationError("Raman beam power must be non-negative")
        if self.site_spacing < 0:
            raise ValidationError("site spacing must be non-negative")
        if self.propagation not in ("co", "counter"):
            raise ValidationError("propagation must be 'co' or 'counter'")
        if not 0 < self.detector_efficiency <= 1:
            raise ValidationError("detector efficiency must lie in (0, 1]")
        if self.intensity_noise < 0 or self.phase_noise < 0:
            raise ValidationError("noise levels must be non-negative")
        for name in ("eps_1m", "eps_10", "eps_2m", "eps_20"):
            v = getattr(self, name)
            if v is not None and abs(v) >= 0.1:
                raise ValidationError(f"{name} must satisfy |eps| < 0.1 (linearized regime)")

    @property
    def intensity(self) -> float:
        return gaussian_peak_intensity(self.beam_power, self.waist)

    @property
    def light_shift_scale(self) -> float:
        """e^2 R^2 I / (eps0 c hbar) in joule-seconds-per-second (multiply by K/72)."""
        r = self.radial_element * CONST.a_0
        return CONST.e**2 * r**2 * self.intensity / (CONST.epsilon_0 * CONST.c * CONST.hbar)


# ---------------------------------------------------------------------------
# Rabi rates and rotations


def raman_rabi(cfg: RamanConfig) -> float:
    """Effective two-photon Rabi frequency |Omega_R| (rad/s) for sigma+ beams near D1."""
    d = cfg.detuning
    de = cfg.species.excited_hf_width
    for name, res in (("F'=1", 0.0), ("F'=2", de)):
        if abs(d - res) < RESONANCE_GUARD:
            raise NearResonanceError(f"5S-5P1/2 {name}", d - res)
    r = cfg.radial_element * CONST.a_0
    pref = 2 * CONST.e**2 * r**2 / (CONST.epsilon_0 * CONST.c * CONST.hbar**2)
    return pref * cfg.angular_factor * cfg.intensity * abs((d - de / 4) / (2 * d * (d - de)))


def spont_emission_prob(detuning: float, tau_excited: float) -> float:
    """Scattering probability during a pi pulse, pi / (2 |Delta| tau)."""
    if math.isinf(tau_excited):
        return 0.0
    return math.pi / (2 * abs(detuning) * tau_excited)


@dataclass(frozen=True)
class RotationMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValidationError("rotation matrix must be 2x2")
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "RotationMatrix") -> "RotationMatrix":
        return RotationMatrix(self.matrix @ other.matrix)

    def apply(self, state) -> np.ndarray:
        return self.matrix @ np.asarray(state, dtype=complex)

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix @ self.matrix.conj().T - np.eye(2))))

    def transition_probability(self) -> float:
        return float(abs(self.matrix[1, 0]) ** 2)


def rotation(rabi: complex, detuning: float, t: float) -> RotationMatrix:
    """Two-level rotation for complex Rabi frequency, two-photon detuning and duration."""
    rabi = complex(rabi)
    gen = math.sqrt(abs(rabi) ** 2 + detuning**2)
    if gen == 0:
        return RotationMatrix(np.eye(2))
    c, s = math.cos(gen * t / 2), math.sin(gen * t / 2)
    ep, em = np.exp(0.5j * detuning * t), np.exp(-0.5j * detuning * t)
    m = np.array([
        [ep * (c - 1j * detuning / gen * s), 1j * ep * rabi.conjugate() / gen * s],
        [1j * em * rabi / gen * s, em * (c + 1j * detuning / gen * s)],
    ])
    return RotationMatrix(m)


def rotation_angles(theta: float, phi: float) -> RotationMatrix:
    """Resonant rotation by pulse area theta about an axis at azimuth phi."""
    return rotation(theta * np.exp(1j * phi), 0.0, 1.0)


def pulse_transition_probability(rabi: float, detuning: float, t: float) -> float:
    """Off-resonant Rabi formula |c_b(t)|^2 starting from |a>."""
    gen2 = abs(rabi) ** 2 + detuning**2
    if gen2 == 0:
        return 0.0
    return abs(rabi) ** 2 / gen2 * math.sin(math.sqrt(gen2) * t / 2) ** 2


def fidelity(actual, ideal: RotationMatrix, psi0=(1.0, 0.0)) -> float:
    """Average of |<R0 psi|R psi>|^2 over one or several sampled rotations."""
    samples = [actual] if isinstance(actual, RotationMatrix) else list(actual)
    if not samples:
        raise ValidationError("need at least one rotation sample")
    psi = np.asarray(psi0, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    target = ideal.apply(psi)
    vals = [abs(np.vdot(target, r.apply(psi))) ** 2 for r in samples]
    return float(min(1.0, max(0.0, np.mean(vals))))


# ---------------------------------------------------------------------------
# Stark ledger


@dataclass(frozen=True)
class StarkLedgerRow:
    state: tuple
    k_factor: float  # s/rad
    shift_kelvin: float
    differential_mhz: float  # relative to |a> (F=1) or |b> (F=2)


@dataclass(frozen=True)
class StarkLedger:
    rows: tuple

    def row(self, F: int, m: int) -> StarkLedgerRow:
        for r in self.rows:
            if r.state == (F, m):
                return r
        raise KeyError((F, m))

    def shift(self, F: int, m: int) -> float:
        return self.row(F, m).shift_kelvin


def _shift_joule(cfg: RamanConfig, terms) -> float:
    return cfg.light_shift_scale * k_factor(terms, cfg.detuning) / 72.0


def stark_ledger(cfg: RamanConfig) -> StarkLedger:
    terms = ledger_terms(cfg.species)
    shifts = {s: _shift_joule(cfg, t) for s, t in terms.items()}
    rows = []
    for state, t in terms.items():
        ref = shifts[QUBIT_A] if state[0] == 1 else shifts[QUBIT_B]
        rows.append(StarkLedgerRow(
            state=state,
            k_factor=k_factor(t, cfg.detuning),
            shift_kelvin=shifts[state] / CONST.k_B,
            differential_mhz=(shifts[state] - ref) / CONST.h / 1e6,
        ))
    return StarkLedger(tuple(rows))


def differential_shift(cfg: RamanConfig, state) -> float:
    """Light shift of ``state`` relative to its qubit reference, in rad/s."""
    terms = ledger_terms(cfg.species)
    ref = QUBIT_A if state[0] == 1 else QUBIT_B
    return (_shift_joule(cfg, terms[tuple(state)]) - _shift_joule(cfg, terms[ref])) / CONST.hbar


# ---------------------------------------------------------------------------
# motional effects


def mean_raman_depth(cfg: RamanConfig) -> float:
    """|U_R| (K): average light shift of the two qubit states at beam centre."""
    led = stark_ledger(cfg)
    return abs(led.shift(*QUBIT_A) + led.shift(*QUBIT_B)) / 2


def pulse_heating_bound(cfg: RamanConfig, trap: TrapConfig, rabi: float | None = None) -> float:
    """Worst-case heating (K) from one pi pulse."""
    rabi = raman_rabi(cfg) if rabi is None else rabi
    wx = derive(trap).omega_x
    return (2 * math.pi * mean_raman_depth(cfg) * trap.waist**2 / (2 * cfg.waist**2)
            * trap.temperature / abs(trap.trap_depth) * wx / rabi)


def operations_before_heating(cfg: RamanConfig, trap: TrapConfig, threshold: float = 1e-4) -> float:
    return threshold / pulse_heating_bound(cfg, trap)


def intensity_spread(cfg: RamanConfig, trap: TrapConfig) -> float:
    """s = (T_a/|U_m|)(w_f0/w0)^2, the relative intensity sampled by thermal motion."""
    return trap.temperature / abs(trap.trap_depth) * (trap.waist / cfg.waist) ** 2


@dataclass(frozen=True)
class StarkPhaseResult:
    mean_phase: float  # thermal-average differential phase of a pi/2 pulse
    phase_variance: float
    error: float
    series_mean: float  # leading-order expansion in omega_ba / Delta
    series_variance: float
    peak_coefficient: float  # phase per unit of I/<I>


def stark_phase_error(cfg: RamanConfig, trap: TrapConfig) -> StarkPhaseResult:
    """Differential Stark phase of a pi/2 pulse and its thermal spread.

    The pulse length is set by the thermally averaged Rabi frequency, so the
    phase at position r is coefficient * I(r)/<I>. With <E^2> = E0^2/(1+s) and
    <E^4> = E0^4/(1+2s) the variance is coefficient^2 s^2/(1+2s).
    """
    terms = ledger_terms(cfg.species)
    k_diff = k_factor(terms[QUBIT_B], cfg.detuning) - k_factor(terms[QUBIT_A], cfg.detuning)
    k_main = k_factor(main_k_terms(cfg.species), cfg.detuning)
    coeff = (math.pi / 2) * k_diff / (2 * k_main)
    s = intensity_spread(cfg, trap)
    variance = coeff**2 * s**2 / (1 + 2 * s)
    d, de, w = cfg.detuning, cfg.species.excited_hf_width, cfg.species.omega_hf
    series = -(math.pi / 2) * w / d - (3 * math.pi / 8) * de * w / d**2
    series_var = s**2 * series**2
    return StarkPhaseResult(coeff, variance, variance / 4, series, series_var, coeff)


def sample_stark_phase(cfg: RamanConfig, trap: TrapConfig, n_samples: int,
                       seed: int) -> np.ndarray:
    """Monte-Carlo differential phases from Boltzmann-sampled transverse positions."""
    if n_samples < 1:
        raise ValidationError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    sigma = math.sqrt(derive(trap).x_variance)
    xy = rng.normal(0.0, sigma, size=(n_samples, 2))
    rel = np.exp(-2 * np.sum(xy**2, axis=1) / cfg.waist**2)
    s = intensity_spread(cfg, trap)
    return stark_phase_error(cfg, trap).peak_coefficient * rel * (1 + s)


def doppler_variance(k_eff: float, rabi: float, temperature: float, mass: float) -> float:
    """<eps_2^2> = (pi^2/4) k_eff^2 (T/m) / Omega^2 for a pi/2 pulse."""
    return math.pi**2 / 4 * k_eff**2 * temperature * CONST.k_B / mass / rabi**2


@dataclass(frozen=True)
class MotionalErrorResult:
    area_variance: float  # <eps_1^2>
    doppler_variance: float  # <eps_2^2>
    error: float


def motional_rotation_error(cfg: RamanConfig, trap: TrapConfig) -> MotionalErrorResult:
    rabi = raman_rabi(cfg)
    e1 = math.pi**2 / 4 * intensity_spread(cfg, trap) ** 2
    if cfg.propagation == "co":
        k_eff = cfg.species.omega_hf / CONST.c
    else:
        k_eff = 2 * 2 * math.pi / cfg.wavelength
    e2 = doppler_variance(k_eff, rabi, trap.temperature, cfg.species.mass)
    return MotionalErrorResult(e1, e2, (e1 + e2) / 4)


def crosstalk_error(waist: float, spacing: float) -> float:
    """pi/2-pulse fidelity error at a neighbouring site."""
    return math.pi**2 / 16 * math.exp(-4 * spacing**2 / waist**2)


# ---------------------------------------------------------------------------
# polarization leakage


def focusing_impurity(cfg: RamanConfig, trap: TrapConfig) -> float:
    """|eps| ~ sqrt(<x^2>)/z_R from the longitudinal field of a focused beam."""
    k = 2 * math.pi / cfg.wavelength
    return trap.waist / (k * cfg.waist**2) * math.sqrt(trap.temperature / abs(trap.trap_depth))


def leakage_channels(species: SpeciesData = RB87) -> dict:
    """(initial, target) -> list of (impurity name, conjugate?, K terms)."""
    de, w = _offsets(species)
    r3, r6 = math.sqrt(3), math.sqrt(6)
    a, b = QUBIT_A, QUBIT_B
    return {
        (a, (1, -1)): [("eps_10", False, ((-2, -de),)), ("eps_20", False, ((-2, -de - w),))],
        (a, (1, 1)): [("eps_10", True, ((1, 0.0), (-3, -de))),
                      ("eps_20", True, ((1, -w), (-3, -de - w)))],
        (a, (2, -2)): [("eps_1m", False, ((-r6, 0.0), (r6, -de)))],
        (a, (2, -1)): [("eps_10", False, ((2 * r3, -de),))],
        (a, (2, 1)): [("eps_20", True, ((-r3, 0.0), (-r3, -de)))],
        (a, (2, 2)): [("eps_2m", True, ((r6, 0.0), (-r6, -de)))],
        (b, (1, -1)): [("eps_20", False, ((-2, 0.0),))],
        (b, (1, 1)): [("eps_10", True, ((-1, 0.0), (3, -de)))],
        (b, (2, -2)): [("eps_1m", False, ((-r6, w), (r6, -de + w))),
                       ("eps_2m", False, ((-r6, 0.0), (r6, -de)))],
        (b, (2, -1)): [("eps_10", False, ((2 * r3, w),)), ("eps_20", False, ((2 * r3, 0.0),))],
        (b, (2, 1)): [("eps_10", True, ((r3, w), (r3, -de + w))),
                      ("eps_20", True, ((r3, 0.0), (r3, -de)))],
        (b, (2, 2)): [("eps_1m", True, ((-r6, w), (r6, -de + w))),
                      ("eps_2m", True, ((-r6, 0.0), (r6, -de)))],
    }


@dataclass(frozen=True)
class LeakageChannel:
    initial: tuple
    target: tuple
    relative_rabi: complex  # leak Rabi / main Rabi
    detuning: float  # rad/s
    amplitude: complex


@dataclass(frozen=True)
class LeakageResult:
    channels: tuple
    probability_a: float
    probability_b: float

    @property
    def decoherence(self) -> float:
        return max(self.probability_a, self.probability_b)

    @property
    def max_amplitude(self) -> float:
        return max((abs(c.amplitude) for c in self.channels), default=0.0)


def polarization_leakage(cfg: RamanConfig, trap: TrapConfig) -> LeakageResult:
    """Amplitudes of out-of-basis states after a pi pulse with impure polarization."""
    if cfg.two_photon_detuning != 0:
        raise ConfigurationError("leakage analysis assumes the qubit transition is on resonance")
    default = focusing_impurity(cfg, trap)
    eps = {n: (default if getattr(cfg, n) is None else complex(getattr(cfg, n)))
           for n in ("eps_1m", "eps_10", "eps_2m", "eps_20")}
    rabi = raman_rabi(cfg)
    k_main = k_factor(main_k_terms(cfg.species), cfg.detuning)
    t_pi = math.pi / rabi
    channels = []
    prob = {QUBIT_A: 0.0, QUBIT_B: 0.0}
    for (init, target), parts in leakage_channels(cfg.species).items():
        k_leak = sum((np.conj(eps[n]) if conj else eps[n]) * k_factor(t, cfg.detuning)
                     for n, conj, t in parts)
        rel = complex(k_leak / k_main)
        om = rel * rabi
        det = differential_shift(cfg, target)
        gen = math.sqrt(abs(om) ** 2 + det**2)
        amp = 0j if gen == 0 else om / gen * math.sin(gen * t_pi / 2)
        channels.append(LeakageChannel(init, target, rel, det, amp))
        prob[init] += abs(amp) ** 2
    return LeakageResult(tuple(channels), prob[QUBIT_A], prob[QUBIT_B])


# ---------------------------------------------------------------------------
# laser noise


@dataclass(frozen=True)
class LaserNoiseResult:
    intensity_error: float  # from the configured relative intensity noise
    phase_error: float
    shot_noise_floor: float  # minimum achievable delta I / I
    limited_intensity_error: float  # with delta I / I raised to the shot-noise floor


def laser_noise_errors(cfg: RamanConfig) -> LaserNoiseResult:
    rabi = raman_rabi(cfg)
    t_half = math.pi / (2 * rabi)
    omega_light = 2 * math.pi * CONST.c / cfg.wavelength
    floor = math.sqrt(4 * CONST.hbar * omega_light / (cfg.detector_efficiency * cfg.beam_power * t_half))
    phase = (1 - math.cos(cfg.phase_noise)) / 2
    return LaserNoiseResult(
        intensity_error=cfg.intensity_noise**2 / 4,
        phase_error=phase,
        shot_noise_floor=floor,
        limited_intensity_error=max(cfg.intensity_noise, floor) ** 2 / 4,
    )


# ---------------------------------------------------------------------------
# single-qubit budget

TABLE2_MECHANISMS = (
    "spontaneous emission", "AC Stark shifts", "atomic motion", "spatial crosstalk",
    "polarization leakage", "laser intensity noise", "laser phase noise",
)


def assemble_table2(rows: dict) -> Budget:
    """Budget from mechanism -> (kind, value, category); sums each column separately."""
    budget = Budget("single-qubit operations")
    for name, (kind, value, category) in rows.items():
        budget.add(name, kind, value, category)
    return budget


def single_qubit_budget(cfg: RamanConfig | None = None, trap: TrapConfig | None = None) -> Budget:
    cfg = cfg or RamanConfig()
    trap = trap or TrapConfig()
    noise = laser_noise_errors(cfg)
    rows = {
        "spontaneous emission": ("decoherence",
                                 spont_emission_prob(cfg.detuning, cfg.species.tau_d1), "speed"),
        "AC Stark shifts": ("error", stark_phase_error(cfg, trap).error, "Raman light shift"),
        "atomic motion": ("error", motional_rotation_error(cfg, trap).error, "localization"),
        "spatial crosstalk": ("error", crosstalk_error(cfg.waist, cfg.site_spacing), "localization"),
        "polarization leakage": ("decoherence", polarization_leakage(cfg, trap).decoherence,
                                 "polarization"),
        "laser intensity noise": ("error", noise.limited_intensity_error, "laser noise"),
        "laser phase noise": ("error", noise.phase_error, "laser noise"),
    }
    budget = assemble_table2(rows)
    budget.require(TABLE2_MECHANISMS)
    return budget
