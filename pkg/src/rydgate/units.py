"""Dimensioned scalars, CODATA constants and unit conversions.

Everything is stored internally in SI. Temperature-as-energy (k_B = 1 style)
and Angstrom^3 polarizabilities are only input/output skins.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import constants as _sc

from .errors import UnitMismatchError


@dataclass(frozen=True)
class Constants:
    """Physical constants (CODATA values shipped with scipy)."""

    k_B: float = _sc.k
    hbar: float = _sc.hbar
    h: float = _sc.h
    e: float = _sc.e
    epsilon_0: float = _sc.epsilon_0
    c: float = _sc.c
    m_e: float = _sc.m_e
    a_0: float = _sc.physical_constants["Bohr radius"][0]
    alpha: float = _sc.fine_structure
    amu: float = _sc.physical_constants["atomic mass constant"][0]
    mu_B: float = _sc.physical_constants["Bohr magneton"][0]
    hartree: float = _sc.physical_constants["Hartree energy"][0]


CONST = Constants()

# frequently used derived factors
AU_TIME = CONST.hbar / CONST.hartree  # seconds per atomic unit of time
AU_POLARIZABILITY = 4 * math.pi * CONST.epsilon_0 * CONST.a_0**3  # SI per a.u.
ANGSTROM3_TO_SI = 4 * math.pi * CONST.epsilon_0 * 1e-30


class Unit(str, enum.Enum):
    KELVIN_ENERGY = "kelvin-energy"
    JOULE = "joule"
    HERTZ = "hertz"
    RAD_PER_S = "rad_per_s"
    METER = "meter"
    WATT_PER_M2 = "watt_per_m2"
    ANGSTROM3_POLARIZABILITY = "angstrom3_polarizability"
    SI_POLARIZABILITY = "SI_polarizability"
    TESLA = "tesla"
    GAUSS = "gauss"
    VOLT_PER_CM = "volt_per_cm"
    SECOND = "second"
    PASCAL = "pascal"
    MBAR = "mbar"

    def __str__(self):
        return self.value


# unit -> (dimension, factor to canonical SI)
_TABLE = {
    Unit.JOULE: ("energy", 1.0),
    Unit.KELVIN_ENERGY: ("energy", CONST.k_B),
    Unit.RAD_PER_S: ("angular_rate", 1.0),
    Unit.HERTZ: ("angular_rate", 2 * math.pi),
    Unit.METER: ("length", 1.0),
    Unit.WATT_PER_M2: ("intensity", 1.0),
    Unit.SI_POLARIZABILITY: ("polarizability", 1.0),
    Unit.ANGSTROM3_POLARIZABILITY: ("polarizability", ANGSTROM3_TO_SI),
    Unit.TESLA: ("magnetic_field", 1.0),
    Unit.GAUSS: ("magnetic_field", 1e-4),
    Unit.VOLT_PER_CM: ("electric_field", 100.0),
    Unit.SECOND: ("time", 1.0),
    Unit.PASCAL: ("pressure", 1.0),
    Unit.MBAR: ("pressure", 100.0),
}


def dimension(unit: Unit | str) -> str:
    return _TABLE[Unit(unit)][0]


@dataclass(frozen=True)
class Quantity:
    """A float tagged with a unit. Arithmetic requires identical units."""

    value: float
    unit: Unit

    def __post_init__(self):
        object.__setattr__(self, "unit", Unit(self.unit))
        object.__setattr__(self, "value", float(self.value))

    @property
    def si(self) -> float:
        return self.value * _TABLE[self.unit][1]

    def to(self, target: Unit | str) -> "Quantity":
        return convert(self, target)

    def _check(self, other):
        if not isinstance(other, Quantity):
            return NotImplemented
        if other.unit != self.unit:
            raise UnitMismatchError(self.unit, other.unit)
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value + other.value, self.unit)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value - other.value, self.unit)

    def __neg__(self):
        return Quantity(-self.value, self.unit)

    def __mul__(self, scalar):
        if isinstance(scalar, Quantity):
            raise UnitMismatchError(self.unit, scalar.unit)
        return Quantity(self.value * float(scalar), self.unit)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Quantity):
            raise UnitMismatchError(self.unit, scalar.unit)
        return Quantity(self.value / float(scalar), self.unit)

    def __lt__(self, other):
        return self.value < self._check(other).value

    def __le__(self, other):
        return self.value <= self._check(other).value


def convert(q: Quantity, target: Unit | str) -> Quantity:
    """Express ``q`` in ``target`` units; raises UnitMismatchError across dimensions."""
    target = Unit(target)
    dim_src, f_src = _TABLE[q.unit]
    dim_dst, f_dst = _TABLE[target]
    if dim_src != dim_dst:
        raise UnitMismatchError(q.unit, target)
    if q.unit == target:
        return q
    return Quantity(q.value * f_src / f_dst, target)


def kelvin_to_joule(t_kelvin: float) -> float:
    return t_kelvin * CONST.k_B


def joule_to_kelvin(energy: float) -> float:
    return energy / CONST.k_B


def angstrom3_to_si(alpha: float) -> float:
    return alpha * ANGSTROM3_TO_SI


def si_to_angstrom3(alpha: float) -> float:
    return alpha / ANGSTROM3_TO_SI


def gaussian_peak_intensity(power: float, waist: float) -> float:
    """Peak intensity 2P/(pi w^2) of a TEM00 beam."""
    return 2.0 * power / (math.pi * waist**2)


def field_amplitude_squared(intensity: float) -> float:
    """|E|^2 for a field of the given intensity, using I = eps0 c |E|^2 / 2."""
    return 2.0 * intensity / (CONST.epsilon_0 * CONST.c)


def light_shift(alpha_si: float, intensity: float) -> float:
    """AC Stark shift U = -alpha |E|^2 / 4 in joules."""
    return -0.25 * alpha_si * field_amplitude_squared(intensity)


def intensity_for_depth(depth_kelvin: float, alpha_angstrom3: float) -> float:
    """Peak intensity giving a trap depth |U| (kelvin) for scalar polarizability in A^3."""
    e2 = 4.0 * abs(depth_kelvin) * CONST.k_B / abs(angstrom3_to_si(alpha_angstrom3))
    return CONST.epsilon_0 * CONST.c * e2 / 2.0
