"""Rb-87 data, quantum-defect Coulomb wavefunctions and derived atomic response.

Radial functions are computed in atomic units on a logarithmic grid
``r_i = R_MIN * exp(i * STEP)`` shared by all bound states, so matrix elements
between bound states never need resampling. Continuum functions add a uniform
outer grid where the Coulomb asymptotic series is evaluated directly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import loggamma
from sympy import Rational
from sympy.physics.wigner import wigner_3j, wigner_6j

from .errors import IntegrationError, NearResonanceError, NumericalError, ValidationError
from .units import (
    ANGSTROM3_TO_SI,
    AU_POLARIZABILITY,
    AU_TIME,
    CONST,
    field_amplitude_squared,
)

R_MIN = 0.05  # inner cutoff (a_0)
STEP = 0.002  # log-grid step for bound states
CONTINUUM_STEP = 0.0005  # finer step so oscillatory overlaps converge
ANGSTROM3_PER_AU = AU_POLARIZABILITY / ANGSTROM3_TO_SI
CM2_PER_AU_AREA = (CONST.a_0 * 100.0) ** 2
GUARD_BAND = 2 * math.pi * 50e6  # rad/s
INVERSE_CM_TO_RAD_S = 2 * math.pi * CONST.c * 100.0


def _half(x: float) -> Rational:
    return Rational(int(round(2 * x)), 2)


# ---------------------------------------------------------------------------
# species data


@dataclass(frozen=True)
class SpeciesData:
    """Constants bundle for one alkali species (defaults: Rb-87)."""

    name: str = "Rb87"
    mass: float = 86.909180527 * CONST.amu
    omega_hf: float = 2 * math.pi * 6834.682610904e6
    gamma_d2: float = 2 * math.pi * 5.98e6
    tau_d1: float = 27.7e-9
    fine_structure_hz: float = 7120e9
    excited_hf_width: float = 2 * math.pi * 817e6
    nuclear_spin: float = 1.5
    g_s: float = 2.0023193043622
    g_j: float = 2.00233113
    g_i: float = -0.0009951414
    sigma_collision: float = 2.5e-17  # m^2 (2.5e-13 cm^2)
    saturation_intensity: float = 16.69  # W/m^2, D2 cycling transition
    rydberg_constant_cm: float = 109736.605
    ionization_limit_cm: float = 33690.8048
    # Rydberg-Ritz parameters (delta_0, delta_2) keyed by (L, 2J); standard
    # microwave/laser spectroscopy values for Rb.
    quantum_defects: Mapping = field(
        default_factory=lambda: {
            (0, 1): (3.1311804, 0.1784),
            (1, 1): (2.6548849, 0.2900),
            (1, 3): (2.6416737, 0.2950),
            (2, 3): (1.34809171, -0.60286),
            (2, 5): (1.34646572, -0.59600),
            (3, 5): (0.0165192, -0.085),
            (3, 7): (0.0165437, -0.086),
            (4, 7): (0.004, 0.0),
            (4, 9): (0.004, 0.0),
        }
    )
    # measured term energies (cm^-1 above 5S_1/2) for low states where the
    # Rydberg-Ritz extrapolation is poor; keyed by (n, L, 2J)
    low_terms: Mapping = field(
        default_factory=lambda: {
            (5, 0, 1): 0.0,
            (6, 0, 1): 20132.510,
            (7, 0, 1): 26311.437,
            (8, 0, 1): 29046.816,
            (5, 1, 1): 12578.950,
            (5, 1, 3): 12816.545,
            (6, 1, 1): 23715.081,
            (6, 1, 3): 23792.591,
            (7, 1, 1): 27835.020,
            (7, 1, 3): 27870.110,
            (4, 2, 5): 19355.203,
            (4, 2, 3): 19355.649,
            (5, 2, 5): 25700.536,
            (5, 2, 3): 25703.498,
            (6, 2, 5): 28687.127,
            (6, 2, 3): 28689.390,
            (4, 3, 7): 26792.092,
            (4, 3, 5): 26792.118,
        }
    )
    lifetime_tau0_ns: Mapping = field(
        default_factory=lambda: {0: 1.43, 1: 2.76, 2: 2.09, 3: 0.76}
    )
    lifetime_exponent: Mapping = field(
        default_factory=lambda: {0: 2.94, 1: 3.02, 2: 2.85, 3: 2.95}
    )

    def __post_init__(self):
        scalars = [self.mass, self.omega_hf, self.gamma_d2, self.tau_d1,
                   self.fine_structure_hz, self.excited_hf_width,
                   self.sigma_collision, self.saturation_intensity]
        if any(v <= 0 for v in scalars):
            raise ValidationError("species constants must be positive")

    def lowest_n(self, L: int) -> int:
        return {0: 5, 1: 5, 2: 4, 3: 4}.get(L, L + 1)

    def quantum_defect(self, n: int, L: int, J: float) -> float:
        key = (L, int(round(2 * J)))
        if (n, L, key[1]) in self.low_terms:
            return n - self._n_star_from_term(self.low_terms[(n, L, key[1])])
        if key not in self.quantum_defects:
            return 0.0
        d0, d2 = self.quantum_defects[key]
        return d0 + d2 / (n - d0) ** 2

    def threshold_defect(self, L: int) -> float:
        """J-weighted quantum defect at the ionization limit (continuum phase)."""
        num = den = 0.0
        for twoj in (2 * L - 1, 2 * L + 1):
            if twoj < 1:
                continue
            d0 = self.quantum_defects.get((L, twoj), (0.0, 0.0))[0]
            num += (twoj + 1) * d0
            den += twoj + 1
        return num / den

    def _n_star_from_term(self, term_cm: float) -> float:
        return math.sqrt(self.rydberg_constant_cm / (self.ionization_limit_cm - term_cm))

    def term_energy_cm(self, n: int, L: int, J: float) -> float:
        """Term energy above the ground state in cm^-1."""
        key = (n, L, int(round(2 * J)))
        if key in self.low_terms:
            return self.low_terms[key]
        ns = n - self.quantum_defect(n, L, J)
        return self.ionization_limit_cm - self.rydberg_constant_cm / ns**2


RB87 = SpeciesData()


# ---------------------------------------------------------------------------
# states and radial functions


@dataclass(frozen=True)
class RydbergState:
    n: int
    L: int
    J: float
    species: SpeciesData = field(default=RB87, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1 or self.L < 0 or self.L >= self.n:
            raise ValidationError(f"invalid state n={self.n}, L={self.L}")
        if abs(abs(self.L - self.J) - 0.5) > 1e-9 or self.J < 0.5:
            raise ValidationError(f"J={self.J} incompatible with L={self.L}")

    @property
    def quantum_defect(self) -> float:
        return self.species.quantum_defect(self.n, self.L, self.J)

    @property
    def n_star(self) -> float:
        return self.n - self.quantum_defect

    @property
    def term_cm(self) -> float:
        return self.species.term_energy_cm(self.n, self.L, self.J)

    def omega_to(self, other: "RydbergState") -> float:
        """Signed angular transition frequency E(other) - E(self) over hbar."""
        return (other.term_cm - self.term_cm) * INVERSE_CM_TO_RAD_S

    def label(self) -> str:
        return f"{self.n}{'SPDFGHIK'[self.L]}{int(round(2 * self.J))}/2"


@dataclass(frozen=True)
class RadialFunction:
    """Radial function u(r) = r R(r) sampled on ``grid`` (a_0)."""

    grid: np.ndarray
    values: np.ndarray
    normalization: str  # "bound" or "continuum"
    L: int
    n_star: float | None = None
    energy: float | None = None  # Hartree

    def norm(self) -> float:
        return float(np.trapezoid(self.values**2, self.grid))

    def node_count(self, threshold: float = 1e-6) -> int:
        u = self.values
        big = np.abs(u) > threshold * np.max(np.abs(u))
        s = np.sign(u[big])
        return int(np.count_nonzero(s[1:] != s[:-1]))

    def principal_node_count(self, quantum_defect: float = 0.0) -> int:
        """Nodes including the floor(delta) core nodes cut off by the Coulomb model.

        A pure Coulomb solution at n* = n - delta carries n - L - 1 - floor(delta)
        outer nodes; the integer part of the quantum defect counts the core nodes.
        """
        return self.node_count() + int(math.floor(quantum_defect))

    def expectation_r(self) -> float:
        return float(np.trapezoid(self.values**2 * self.grid, self.grid))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r_a0", "value"])
            for r, v in zip(self.grid, self.values):
                w.writerow([f"{r:.9g}", f"{v:.9g}"])


def _log_grid(r_max: float, step: float = STEP) -> np.ndarray:
    count = int(math.ceil(math.log(r_max / R_MIN) / step)) + 1
    return R_MIN * np.exp(step * np.arange(count))


def _numerov_inward(g: np.ndarray, v_last: float, v_prev: float,
                    step: float = STEP) -> np.ndarray:
    """Integrate v'' = g v from the end of the grid toward index 0."""
    n = len(g)
    h2 = step * step / 12.0
    f = 1.0 - h2 * g
    v = np.zeros(n)
    v[-1], v[-2] = v_last, v_prev
    for i in range(n - 2, 0, -1):
        v[i - 1] = ((12.0 - 10.0 * f[i]) * v[i] - f[i + 1] * v[i + 1]) / f[i - 1]
        if abs(v[i - 1]) > 1e200:
            v[i - 1:] *= 1e-200
    return v


def _cut_core_divergence(r: np.ndarray, u: np.ndarray, L: int, energy: float) -> np.ndarray:
    """Zero the irregular growth of a pure-Coulomb solution inside the core.

    Inside the inner classical turning point the physical function must decay
    toward the origin; where the non-integer Coulomb solution instead grows we
    truncate at the innermost local minimum of |u|.
    """
    if L == 0:
        return u
    kin = 2.0 * (energy + 1.0 / r) - L * (L + 1) / r**2
    forbidden = np.nonzero(kin < 0)[0]
    inner = forbidden[forbidden < np.argmax(kin)] if len(forbidden) else forbidden
    if len(inner) == 0:
        return u
    i = int(inner[-1])
    a = np.abs(u)
    while i > 0 and a[i - 1] <= a[i]:
        i -= 1
    out = u.copy()
    out[:i] = 0.0
    return out


@lru_cache(maxsize=512)
def _bound_cached(n_star: float, L: int) -> tuple[np.ndarray, np.ndarray]:
    energy = -0.5 / n_star**2
    r_max = max(3.0 * n_star**2, 2.0 * n_star**2 + 30.0 * n_star) + 20.0
    r = _log_grid(r_max)
    g = 2.0 * r**2 * (-1.0 / r - energy) + (L + 0.5) ** 2
    kappa = math.sqrt(max(g[-1], 1e-12))
    v = _numerov_inward(g, 1e-12, 1e-12 * math.exp(STEP * kappa))
    u = v * np.sqrt(r)
    if not np.all(np.isfinite(u)):
        raise IntegrationError(f"non-finite Numerov solution for n*={n_star}, L={L}")
    u = _cut_core_divergence(r, u, L, energy)
    norm = np.trapezoid(u**2, r)
    if not np.isfinite(norm) or norm <= 0:
        raise IntegrationError(f"normalization failed for n*={n_star}, L={L}")
    u = u / math.sqrt(norm)
    # sign convention: outermost lobe positive
    tail = u[np.abs(u) > 1e-3 * np.max(np.abs(u))]
    if tail[-1] < 0:
        u = -u
    u.setflags(write=False)
    r.setflags(write=False)
    return r, u


def bound_wavefunction(state: RydbergState | None = None, *, n_star: float | None = None,
                       L: int | None = None) -> RadialFunction:
    """Unit-normalized quantum-defect Coulomb radial function u(r).

    Inward Numerov integration of the pure Coulomb equation at energy
    -1/(2 n*^2) from beyond the outer turning point down to ``R_MIN``.
    Pass either a ``RydbergState`` or explicit ``n_star``/``L`` (hydrogen tests).
    """
    if state is not None:
        n_star, L = state.n_star, state.L
    if n_star is None or L is None:
        raise ValidationError("need a state or n_star and L")
    if n_star <= L:
        raise ValidationError(f"n*={n_star} must exceed L={L}")
    r, u = _bound_cached(round(float(n_star), 10), int(L))
    return RadialFunction(r, u, "bound", int(L), n_star=float(n_star),
                          energy=-0.5 / n_star**2)


# ---------------------------------------------------------------------------
# continuum


def coulomb_asymptotic(L: int, eta: float, rho: np.ndarray, terms: int = 60):
    """Regular and irregular Coulomb functions from the large-rho asymptotic series."""
    rho = np.asarray(rho, dtype=float)
    sigma = float(np.imag(loggamma(L + 1 + 1j * eta)))
    theta = rho - eta * np.log(2 * rho) - L * math.pi / 2 + sigma
    fk = np.ones_like(rho)
    gk = np.zeros_like(rho)
    f_sum, g_sum = fk.copy(), gk.copy()
    last = np.full_like(rho, np.inf)
    for k in range(terms):
        a = (2 * k + 1) * eta / ((2 * k + 2) * rho)
        b = (L * (L + 1) - k * (k + 1) + eta**2) / ((2 * k + 2) * rho)
        fk, gk = a * fk - b * gk, a * gk + b * fk
        size = np.abs(fk) + np.abs(gk)
        active = size < last  # stop each point once the series starts diverging
        f_sum += np.where(active, fk, 0.0)
        g_sum += np.where(active, gk, 0.0)
        last = np.where(active, size, 0.0)
        if np.all(size < 1e-16):
            break
    F = g_sum * np.cos(theta) + f_sum * np.sin(theta)
    G = f_sum * np.cos(theta) - g_sum * np.sin(theta)
    return F, G


def continuum_wavefunction(energy: float, L: int, phase_shift: float = 0.0,
                           r_outer: float = 0.0) -> RadialFunction:
    """Energy-normalized Coulomb continuum function.

    Asymptotically sqrt(2/(pi k)) sin(theta_L + phase_shift) in atomic units,
    where ``phase_shift`` is pi times the quantum defect. Numerov is used inside
    a matching radius; beyond it the asymptotic series is evaluated directly on
    a uniform grid that extends to ``r_outer``.
    """
    if energy <= 0:
        raise ValidationError("continuum energy must be positive")
    k = math.sqrt(2.0 * energy)
    eta = -1.0 / k
    rho_c = max(60.0, 6.0 * (eta**2 + L * (L + 1)))
    r_c = rho_c / k
    r_in = _log_grid(r_c, CONTINUUM_STEP)
    amp = math.sqrt(2.0 / (math.pi * k))
    cs, sn = math.cos(phase_shift), math.sin(phase_shift)

    def exact_far(rr):
        F, G = coulomb_asymptotic(L, eta, k * rr)
        return amp * (cs * F + sn * G)

    g = 2.0 * r_in**2 * (-1.0 / r_in - energy) + (L + 0.5) ** 2
    end = exact_far(r_in[-2:]) / np.sqrt(r_in[-2:])
    v = _numerov_inward(g, end[1], end[0], CONTINUUM_STEP)
    u_in = v * np.sqrt(r_in)
    u_in = _cut_core_divergence(r_in, u_in, L, energy)
    dr = min(0.05 * 2 * math.pi / k, r_in[-1] - r_in[-2])
    r_out_end = max(r_outer, r_c + 50 * 2 * math.pi / k)
    r_out = np.arange(r_in[-1] + dr, r_out_end + dr, dr)
    u_out = exact_far(r_out)
    r = np.concatenate([r_in, r_out])
    u = np.concatenate([u_in, u_out])
    return RadialFunction(r, u, "continuum", L, energy=energy)


# ---------------------------------------------------------------------------
# matrix elements and angular factors


def radial_overlap(f1: RadialFunction, f2: RadialFunction, power: int = 1) -> float:
    """Quadrature of int u1 r^power u2 dr; resamples onto the finer grid if needed."""
    if f1.grid.shape == f2.grid.shape and np.array_equal(f1.grid, f2.grid):
        return float(np.trapezoid(f1.values * f2.values * f1.grid**power, f1.grid))
    a, b = (f1, f2) if len(f1.grid) >= len(f2.grid) else (f2, f1)
    n_common = min(len(a.grid), len(b.grid))
    if a.grid[:n_common].shape == b.grid[:n_common].shape and np.allclose(
            a.grid[:n_common], b.grid[:n_common], rtol=1e-12, atol=0):
        r = a.grid[:n_common]
        return float(np.trapezoid(a.values[:n_common] * b.values[:n_common] * r**power, r))
    # continuum-style mixed grid: interpolate the other function onto ``fine``
    fine, other = (f1, f2) if f1.normalization == "continuum" else (f2, f1)
    r = fine.grid
    inside = (r >= other.grid[0]) & (r <= other.grid[-1])
    spline = CubicSpline(np.log(other.grid), other.values)
    vals = np.zeros_like(r)
    vals[inside] = spline(np.log(r[inside]))
    return float(np.trapezoid(fine.values * vals * r**power, r))


def radial_matrix_element(s1: RydbergState, s2: RydbergState) -> float:
    """Radial integral <s1|r|s2> in a_0."""
    return radial_overlap(bound_wavefunction(s1), bound_wavefunction(s2))


@lru_cache(maxsize=None)
def angular_factor_sq(L: int, J: float, Lp: int, Jp: float) -> float:
    """|<L J||d||L' J'>|^2 / (e a_0 R)^2 in the 3j (Edmonds) reduced-element convention.

    Equals (2J+1)(2J'+1) {L J 1/2; J' L' 1}^2 max(L, L').
    """
    if abs(L - Lp) != 1:
        return 0.0
    six = wigner_6j(L, _half(J), Rational(1, 2), _half(Jp), Lp, 1)
    return float((2 * J + 1) * (2 * Jp + 1) * six**2 * max(L, Lp))


def reduced_dipole(s1: RydbergState, s2: RydbergState) -> float:
    """|<s1||D||s2>| in e a_0 (3j convention)."""
    return math.sqrt(angular_factor_sq(s1.L, s1.J, s2.L, s2.J)) * abs(
        radial_matrix_element(s1, s2))


@lru_cache(maxsize=None)
def _threej_sq(j1: float, m1: float, j2: float, m2: float) -> float:
    """(j1 1 j2; -m1 q m2)^2 with q = m1 - m2."""
    q = m1 - m2
    if abs(q) > 1:
        return 0.0
    val = wigner_3j(_half(j1), 1, _half(j2), _half(-m1), int(round(q)), _half(m2))
    return float(val) ** 2


# ---------------------------------------------------------------------------
# polarizabilities


def intermediate_states(state: RydbergState, window: int = 15) -> list[RydbergState]:
    """Dipole-allowed states within +-window in n plus the two lowest doublets."""
    sp = state.species
    out = []
    for Lp in (state.L - 1, state.L + 1):
        if Lp < 0:
            continue
        n_lo = sp.lowest_n(Lp)
        ns = set(range(max(n_lo, state.n - window), state.n + window + 1))
        ns.update({n_lo, n_lo + 1})
        for Jp in (Lp - 0.5, Lp + 0.5):
            if Jp < 0.5 or abs(Jp - state.J) > 1:
                continue
            for n in sorted(ns):
                if n > Lp:
                    out.append(RydbergState(n, Lp, Jp, sp))
    return out


def _transition_terms(state, omega_f, window, guard):
    terms = []
    for other in intermediate_states(state, window):
        w_if = state.omega_to(other)
        if abs(abs(w_if) - omega_f) < guard:
            raise NearResonanceError(f"{state.label()}-{other.label()}", abs(w_if) - omega_f)
        d2 = angular_factor_sq(state.L, state.J, other.L, other.J) * radial_matrix_element(
            state, other) ** 2
        terms.append((other, w_if, d2))
    return terms


def scalar_polarizability(state: RydbergState, omega_f: float, window: int = 15,
                          guard: float = GUARD_BAND) -> float:
    """Sum-over-states scalar polarizability in A^3.

    alpha0 = (2/3 hbar) (1/(2J+1)) sum w_if |<||D||>|^2 / (w_if^2 - w_f^2)
    with w_if = (E_f - E_i)/hbar.
    """
    total = 0.0
    for _, w_if, d2 in _transition_terms(state, omega_f, window, guard):
        w = w_if * AU_TIME
        wf = omega_f * AU_TIME
        total += w * d2 / (w * w - wf * wf)
    alpha_au = 2.0 / 3.0 / (2 * state.J + 1) * total
    return alpha_au * ANGSTROM3_PER_AU


def _sigma_plus_polarizability(state: RydbergState, m: float, omega_f: float,
                               window: int, guard: float) -> float:
    wf = omega_f * AU_TIME
    total = 0.0
    for other, w_if, d2 in _transition_terms(state, omega_f, window, guard):
        w = w_if * AU_TIME
        absorb = _threej_sq(other.J, m + 1, state.J, m) if abs(m + 1) <= other.J else 0.0
        emit = _threej_sq(other.J, m - 1, state.J, m) if abs(m - 1) <= other.J else 0.0
        total += d2 * (absorb / (w - wf) + emit / (w + wf))
    return total * ANGSTROM3_PER_AU


def vector_polarizability(state: RydbergState, omega_f: float, window: int = 15,
                          guard: float = GUARD_BAND) -> float:
    """Vector polarizability alpha1 in A^3 for a J = 1/2 state.

    Defined as alpha(sigma+, m_J=+1/2) - alpha(sigma+, m_J=-1/2), so that the
    shift of a hyperfine level is -(1/4)|E|^2 alpha1 <S_z> with <S_z> = g_F m_F / 2.
    """
    if abs(state.J - 0.5) > 1e-9:
        raise ValidationError("vector polarizability implemented for J=1/2 only")
    return (_sigma_plus_polarizability(state, 0.5, omega_f, window, guard)
            - _sigma_plus_polarizability(state, -0.5, omega_f, window, guard))


def free_electron_polarizability(omega_f: float) -> float:
    """-e^2/(m_e w^2) in A^3."""
    si = -CONST.e**2 / (CONST.m_e * omega_f**2)
    return si / ANGSTROM3_TO_SI


# ---------------------------------------------------------------------------
# photoionization


def photoionization_cross_section(state: RydbergState, wavelength: float) -> float:
    """Photoionization cross section (cm^2) from oscillator-strength density.

    sigma = 2 pi^2 (hbar e^2 / m c) df/dE with
    df/dE = sum_L' 2 m w L_> / (3 hbar (2L+1)) |int u r phi dr|^2.
    """
    omega = 2 * math.pi * CONST.c / wavelength * AU_TIME
    bound = bound_wavefunction(state)
    e_c = omega - 0.5 / state.n_star**2
    if e_c <= 0:
        raise ValidationError("photon energy below the ionization threshold")
    dfde = 0.0
    for Lp in (state.L - 1, state.L + 1):
        if Lp < 0:
            continue
        delta = state.species.threshold_defect(Lp)
        cont = continuum_wavefunction(e_c, Lp, math.pi * delta, r_outer=bound.grid[-1])
        overlap = radial_overlap(bound, cont)
        dfde += 2.0 * omega * max(state.L, Lp) / (3.0 * (2 * state.L + 1)) * overlap**2
    sigma_au = 2.0 * math.pi**2 * CONST.alpha * dfde
    return sigma_au * CM2_PER_AU_AREA


def photoionization_rate(sigma_cm2: float, intensity: float, omega_f: float) -> float:
    """gamma = sigma I / (hbar w) in 1/s (intensity in W/m^2)."""
    if intensity < 0:
        raise ValidationError("intensity must be non-negative")
    return sigma_cm2 * 1e-4 * intensity / (CONST.hbar * omega_f)


# ---------------------------------------------------------------------------
# polarizability balancing


@dataclass(frozen=True)
class BalancingResult:
    detuning: float  # rad/s
    rabi: float  # rad/s
    p_max: float


def balancing_detuning(rydberg_j: float, dipole_ea0: float, alpha_ground: float,
                       alpha_background: float, depth_kelvin: float) -> BalancingResult:
    """Detuning from the nD-6P resonance that equalizes ground and Rydberg polarizabilities.

    ``dipole_ea0`` is the reduced element <nD||D||6P> (e a_0); polarizabilities
    in A^3. The leakage Rabi frequency uses the peak trap field for the given
    ground-state depth and the m_J = 3/2 angular factor 1/sqrt(15).
    """
    if dipole_ea0 == 0:
        raise NumericalError("zero transition dipole: balancing detuning undefined")
    d_si = dipole_ea0 * CONST.e * CONST.a_0
    dalpha = (alpha_ground - alpha_background) * ANGSTROM3_TO_SI
    if dalpha == 0:
        raise NumericalError("ground and background polarizabilities are equal")
    detuning = d_si**2 / (3 * CONST.hbar * (2 * rydberg_j + 1) * dalpha)
    e2 = 4 * abs(depth_kelvin) * CONST.k_B / abs(alpha_ground * ANGSTROM3_TO_SI)
    rabi = math.sqrt(e2) * d_si / (CONST.hbar * math.sqrt(15.0))
    p_max = rabi**2 / (rabi**2 + detuning**2)
    return BalancingResult(detuning, rabi, p_max)


def peak_field_squared_for_depth(depth_kelvin: float, alpha_angstrom3: float) -> float:
    return 4 * abs(depth_kelvin) * CONST.k_B / abs(alpha_angstrom3 * ANGSTROM3_TO_SI)


__all__ = [
    "SpeciesData", "RB87", "RydbergState", "RadialFunction", "bound_wavefunction",
    "continuum_wavefunction", "coulomb_asymptotic", "radial_overlap",
    "radial_matrix_element", "reduced_dipole", "angular_factor_sq",
    "scalar_polarizability", "vector_polarizability", "free_electron_polarizability",
    "photoionization_cross_section", "photoionization_rate", "balancing_detuning",
    "BalancingResult", "intermediate_states", "field_amplitude_squared",
]
