"""Fluorescence state detection with Poisson photon counts and background."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class ReadoutConfig:
    collection_fraction: float = 0.05  # Omega_d / 4 pi
    detuning_ratio: float = -0.5  # Delta / gamma
    saturation: float = 1.0  # I / I_s
    linewidth: float = 2 * math.pi * 6e6  # gamma (rad/s)
    efficiency: float = 0.6
    background_rate: float = 1e4  # counts/s

    def __post_init__(self):
        if not 0 < self.efficiency <= 1:
            raise ValidationError("detection efficiency must lie in (0, 1]")
        if not 0 < self.collection_fraction < 1:
            raise ValidationError("collection fraction must lie in (0, 1)")
        if self.background_rate < 0:
            raise ValidationError("background rate must be non-negative")
        if self.saturation < 0 or self.linewidth <= 0:
            raise ValidationError("saturation must be >= 0 and linewidth > 0")


def expected_counts(cfg: ReadoutConfig, duration: float) -> float:
    """Mean number of detected signal photons in ``duration`` seconds."""
    s = cfg.saturation
    return (cfg.efficiency * cfg.collection_fraction * cfg.linewidth * duration / 2
            * s / (1 + 4 * cfg.detuning_ratio**2 + s))


def poisson_cdf_below(x: float, n: int) -> float:
    """P(N < n) for N ~ Poisson(x): e^-x sum_{k<n} x^k/k!, i.e. Gamma(n, x)/Gamma(n)."""
    if n <= 0:
        return 0.0
    if x == 0:
        return 1.0
    term = math.exp(-x)
    total = term
    for k in range(1, n):
        term *= x / k
        total += term
    return min(total, 1.0)


def measurement_error(q: float, b: float, n_c: int) -> float:
    """Probability of a wrong bright/dark call with threshold n_c.

    E = P_q(N < n_c) + P_b(N >= n_c), clamped to [0, 1] against round-off.
    """
    if n_c < 1 or int(n_c) != n_c:
        raise ValidationError("cutoff must be a positive integer")
    if q < 0 or b < 0:
        raise ValidationError("mean counts must be non-negative")
    n_c = int(n_c)
    err = poisson_cdf_below(q, n_c) + 1.0 - poisson_cdf_below(b, n_c)
    return min(max(err, 0.0), 1.0)


def optimal_cutoff(q: float, b: float) -> tuple[int, float]:
    """Threshold minimizing the error over 1..ceil(q)+10 sqrt(q); ties go low."""
    upper = max(1, int(math.ceil(q + 10 * math.sqrt(q))))
    best_n, best_e = 1, measurement_error(q, b, 1)
    for n in range(2, upper + 1):
        e = measurement_error(q, b, n)
        if e < best_e:
            best_n, best_e = n, e
    return best_n, best_e


@dataclass(frozen=True)
class DetectionCurve:
    background_rate: float
    durations: np.ndarray
    errors: np.ndarray
    cutoffs: np.ndarray

    def best(self) -> tuple[float, float, int]:
        i = int(np.argmin(self.errors))
        return float(self.durations[i]), float(self.errors[i]), int(self.cutoffs[i])


def detection_curve(cfg: ReadoutConfig, durations, background_rate: float | None = None) -> DetectionCurve:
    b0 = cfg.background_rate if background_rate is None else background_rate
    durations = np.asarray(durations, dtype=float)
    errs, cuts = [], []
    for tau in durations:
        n, e = optimal_cutoff(expected_counts(cfg, tau), b0 * tau)
        errs.append(e)
        cuts.append(n)
    return DetectionCurve(b0, durations, np.array(errs), np.array(cuts, dtype=int))


def detection_curves(cfg: ReadoutConfig, durations, background_rates=(1e3, 1e4)) -> list[DetectionCurve]:
    return [detection_curve(cfg, durations, b0) for b0 in background_rates]
