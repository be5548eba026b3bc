"""Tabular datasets behind every CLI subcommand.

Each builder is pure: it takes a RunConfig and returns a Report whose tables
are plain rows of numbers and strings, plus a few human-readable summary
lines. Writing and plotting live in :mod:`rydgate.report`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gate as pg
from .atomic import RydbergState, photoionization_cross_section, photoionization_rate
from .coherence import (
    BasisChoice,
    hyperfine_stark_beta,
    intensity_drift_T2,
    magic_field,
    storage_budget,
    zeeman_T2,
)
from .config import RunConfig
from .raman import polarization_leakage, raman_rabi, single_qubit_budget, stark_ledger
from .readout import detection_curves
from .rydberg import (
    LifetimeBreakdown,
    PairConfig,
    dipole_dipole,
    radiative_lifetime,
    total_lifetime,
    vdw_asymptote,
    vdw_potential,
    vdw_scaled,
)
from .units import CONST

TWO_PI = 2 * math.pi
L_LABELS = "SPDFGH"


@dataclass
class Table:
    name: str
    columns: list
    rows: list = field(default_factory=list)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"table '{self.name}' expects {len(self.columns)} values")
        self.rows.append(list(values))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]


@dataclass
class Report:
    subcommand: str
    tables: list = field(default_factory=list)
    summary: list = field(default_factory=list)

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)

    def new_table(self, name: str, columns) -> Table:
        t = Table(name, list(columns))
        self.tables.append(t)
        return t


def _budget_table(report: Report, name: str, budget) -> Table:
    t = report.new_table(name, ["mechanism", "category", "kind", "value"])
    for rec in budget.records():
        t.add(rec["mechanism"], rec["category"], rec["kind"], rec["value"])
    return t


# ---------------------------------------------------------------------------


def budget_report(cfg: RunConfig) -> Report:
    rep = Report("budget")
    budget = storage_budget(cfg.trap)
    _budget_table(rep, "storage budget", budget)

    zt = rep.new_table("zeeman dephasing", ["basis", "bias_G", "fluctuation_G", "T2_s"])
    for basis in BasisChoice:
        b0 = magic_field(basis, cfg.trap.species)
        for db in (1e-3, -1e-3):
            zt.add(basis.value, b0, db, zeeman_T2(basis, db, b0, cfg.trap.species))
    for bias in (15e-3, 1.0):
        zt.add(BasisChoice.CLOCK.value, bias, 1e-3, zeeman_T2(BasisChoice.CLOCK, 1e-3, bias, cfg.trap.species))

    beta = hyperfine_stark_beta(cfg.trap.species)
    dt = rep.new_table("hyperfine drift dephasing", ["depth_mK", "intensity_drift", "T2_s"])
    for depth in (0.1e-3, 0.3e-3, 1e-3):
        for drift in np.logspace(-6, -2, 17):
            dt.add(depth * 1e3, float(drift), intensity_drift_T2(beta, depth, float(drift)))

    rep.summary += [f"combined T1 = {budget.combined_T1:.4g} s",
                    f"combined T2 = {budget.combined_T2:.4g} s"]
    return rep


def single_qubit_report(cfg: RunConfig) -> Report:
    rep = Report("single-qubit")
    budget = single_qubit_budget(cfg.raman, cfg.trap)
    _budget_table(rep, "single-qubit budget", budget)

    lt = rep.new_table("raman light shifts", ["F", "m_F", "shift_mK", "differential_MHz"])
    for row in stark_ledger(cfg.raman).rows:
        lt.add(row.state[0], row.state[1], row.shift_kelvin * 1e3, row.differential_mhz)

    leak = polarization_leakage(cfg.raman, cfg.trap)
    ct = rep.new_table("polarization leakage",
                       ["initial", "target", "relative_rabi_abs", "detuning_MHz", "amplitude_abs"])
    for ch in leak.channels:
        ct.add(f"|{ch.initial[0]},{ch.initial[1]}>", f"|{ch.target[0]},{ch.target[1]}>",
               abs(ch.relative_rabi), ch.detuning / TWO_PI / 1e6, abs(ch.amplitude))

    rep.summary += [f"Raman Rabi frequency / 2pi = {raman_rabi(cfg.raman) / TWO_PI / 1e6:.4g} MHz",
                    f"total decoherence = {budget.combined('decoherence'):.4g}",
                    f"total rotation error = {budget.combined('error'):.4g}"]
    return rep


def gate_opt_report(cfg: RunConfig, regime: str | None = None) -> Report:
    regime = pg.normalize_regime(regime or cfg.gate.regime)
    rep = Report("gate-opt")
    tau, w = cfg.gate.lifetime, cfg.gate.omega_ba
    lo, hi = (1e6, 1e9) if regime == "large_rabi" else (1e6, 1e10)
    fixed = TWO_PI * np.logspace(math.log10(lo), math.log10(hi), 31)
    curve = pg.optimum_curve(regime, fixed, tau, w)
    partner = "dd_shift" if regime == "large_rabi" else "rabi"
    own = "rabi" if regime == "large_rabi" else "dd_shift"
    ct = rep.new_table("optimum curve", [f"{own}_over_2pi_MHz", f"{partner}_opt_over_2pi_MHz",
                                         "gate_time_us", "error"])
    for rec in curve.records():
        ct.add(rec["fixed_over_2pi_hz"] / 1e6, rec["optimum_over_2pi_hz"] / 1e6,
               rec["gate_time_s"] * 1e6, rec["error"])

    best, e_min = pg.absolute_optimum(regime, tau, w)
    num_best, num_min = pg.golden_minimize(
        lambda x: (pg.optimize_large_rabi if regime == "large_rabi" else pg.optimize_large_dd)(x, tau, w).error,
        best)
    partner_opt, table_min = pg.numerical_optimum(regime, best, tau, w)
    at = rep.new_table("absolute optimum", ["quantity", "closed_form", "numerical"])
    at.add(f"{own}_over_2pi_MHz", best / TWO_PI / 1e6, num_best / TWO_PI / 1e6)
    at.add("minimum_error", e_min, num_min)
    closed_partner = (pg.optimize_large_rabi if regime == "large_rabi" else pg.optimize_large_dd)(best, tau, w)
    at.add(f"{partner}_at_optimum_over_2pi_MHz", closed_partner.optimum / TWO_PI / 1e6,
           partner_opt / TWO_PI / 1e6)
    at.add("tabulated_average_minimum", closed_partner.error, table_min)

    g = cfg.gate if regime == cfg.gate.regime else pg.GateConfig(None, None, tau, w, regime)
    table = pg.error_table(g)
    et = rep.new_table("error table", ["input", "decoherence", "rotation", "total"])
    for rec in table.records():
        et.add(rec["input"], rec["decoherence"], rec["rotation"], rec["total"])

    xt = rep.new_table("auxiliary errors", ["separation_um", "quantity", "value"])
    for sep in (10e-6, 20e-6, 50e-6):
        aux = pg.auxiliary_errors(g, cfg.trap, sep)
        xt.add(sep * 1e6, "separation_error", aux.separation_error)
        xt.add(sep * 1e6, "heating_power_uK_per_us", aux.heating_power)
    xt.add(0.0, "doppler_error_co", aux.doppler_co)
    xt.add(0.0, "doppler_error_counter", aux.doppler_counter)
    xt.add(0.0, "vibrational_spacing_uK", aux.vibrational_spacing * 1e6)

    rep.summary += [f"regime {regime}: best {own}/2pi = {best / TWO_PI / 1e6:.4g} MHz, "
                    f"minimum error = {e_min:.3g}"]
    return rep


def _pot_separations():
    return np.linspace(2e-6, 20e-6, 37)


def interactions_report(cfg: RunConfig) -> Report:
    rep = Report("interactions")
    pair = PairConfig(n=50, channel="S_vdW", c3_anchor=cfg.pair.c3_anchor,
                      defect_anchor=cfg.pair.defect_anchor)
    vt = rep.new_table("van der Waals potential", ["n", "separation_um", "exact_MHz", "asymptote_MHz"])
    seps = _pot_separations()
    for n in (50, 70, 100):
        p = PairConfig(n=n, channel="S_vdW", c3_anchor=pair.c3_anchor, defect_anchor=pair.defect_anchor)
        exact, asym = vdw_potential(p, seps), vdw_asymptote(p, seps)
        for r, e, a in zip(seps, exact, asym):
            vt.add(n, r * 1e6, e / TWO_PI / 1e6, a / TWO_PI / 1e6)
    st = rep.new_table("van der Waals scaling", ["n", "separation_um", "shift_MHz"])
    for n in range(50, 101, 5):
        st.add(n, 10.0, vdw_scaled(n, 10e-6, pair) / TWO_PI / 1e6)
    dt = rep.new_table("field-mixed dipole shift", ["n", "separation_um", "shift_MHz"])
    for n in (50, 70, 95):
        p = PairConfig(n=n, channel="field_mixed_dipole", dipole_anchor=cfg.pair.dipole_anchor,
                       angle=cfg.pair.angle)
        for r, v in zip(seps, dipole_dipole(p, seps)):
            dt.add(n, r * 1e6, abs(v) / TWO_PI / 1e6)
    v100 = vdw_scaled(100, 10e-6, pair) / TWO_PI / 1e6
    d70 = abs(dipole_dipole(PairConfig(n=70, channel="field_mixed_dipole", separation=8e-6))) / TWO_PI / 1e6
    rep.summary += [f"n=100 van der Waals shift at 10 um = {v100:.3g} MHz",
                    f"n=70 field-mixed dipole shift at 8 um = {d70:.3g} MHz"]
    return rep


def lifetimes_report(cfg: RunConfig) -> Report:
    rep = Report("lifetimes")
    t = rep.new_table("radiative lifetime", ["n", "L", "temperature_K", "lifetime_us"])
    species = cfg.trap.species
    for L in range(4):
        for temp in (0.0, 300.0):
            for n in range(20, 121, 5):
                st = RydbergState(n, L, L + 0.5, species)
                t.add(n, L_LABELS[L], temp, radiative_lifetime(st, temp) * 1e6)
    worst = min(radiative_lifetime(RydbergState(65, L, L + 0.5, species), 300.0) for L in range(4))
    rep.summary.append(f"shortest S/P/D/F lifetime at n=65, 300 K = {worst * 1e6:.4g} us")
    return rep


def readout_report(cfg: RunConfig) -> Report:
    rep = Report("readout")
    t = rep.new_table("detection error", ["background_per_s", "duration_us", "error", "cutoff"])
    durations = np.arange(1, 151) * 1e-6
    for curve in detection_curves(cfg.readout, durations, (1e3, cfg.readout.background_rate)):
        for tau, e, n in zip(curve.durations, curve.errors, curve.cutoffs):
            t.add(curve.background_rate, tau * 1e6, e, int(n))
        tb, eb, nb = curve.best()
        rep.summary.append(f"background {curve.background_rate:.3g}/s: minimum error {eb:.3g} "
                           f"at {tb * 1e6:.0f} us, cutoff {nb}")
    return rep


def photoionization_report(cfg: RunConfig) -> Report:
    rep = Report("photoionization")
    species, lam = cfg.trap.species, cfg.trap.wavelength
    ct = rep.new_table("cross sections", ["n", "L", "wavelength_um", "sigma_cm2"])
    for n in (50, 90):
        for L in range(6):
            ct.add(n, L_LABELS[L], lam * 1e6,
                   photoionization_cross_section(RydbergState(n, L, L + 0.5, species), lam))
    intensity = cfg.trap.peak_intensity
    lt = rep.new_table("lifetime in trap light",
                       ["n", "L", "radiative_rate", "blackbody_rate", "photoionization_rate",
                        "lifetime_us", "photoionization_lifetime_us"])
    for n in (50, 70, 80, 90):
        for L in (1, 2):
            br: LifetimeBreakdown = total_lifetime(RydbergState(n, L, L + 0.5, species), 300.0,
                                                    intensity, lam)
            lt.add(n, L_LABELS[L], br.radiative_rate, br.blackbody_rate, br.photoionization_rate,
                   br.lifetime * 1e6, br.photoionization_lifetime * 1e6)
    omega = TWO_PI * CONST.c / lam
    ref = photoionization_rate(1e-20, intensity, omega)
    rt = rep.new_table("reference rate", ["sigma_cm2", "intensity_W_per_m2", "rate_per_s"])
    rt.add(1e-20, intensity, ref)
    rep.summary.append(f"rate for 1e-20 cm^2 at trap peak intensity = {ref:.3g} /s")
    return rep


LADDER = (0.1, 0.05, 0.025)


def simulate_report(cfg: RunConfig, regime: str | None = None, seed: int | None = None) -> Report:
    regime = pg.normalize_regime(regime or cfg.gate.regime)
    seed = cfg.run.seed if seed is None else seed
    rep = Report("simulate")
    g = cfg.gate if regime == cfg.gate.regime else pg.GateConfig(
        None, None, cfg.gate.lifetime, cfg.gate.omega_ba, regime)
    res = pg.simulate_protocol(g, seed, cfg.run.n_samples)
    table = pg.error_table(g)
    pt = rep.new_table("protocol", ["input", "phase_sign", "phase_rad", "rotation", "decoherence",
                                    "tabulated_rotation", "tabulated_decoherence"])
    for s in pg.INPUTS:
        pt.add(s, res.truth_table[s], float(np.angle(res.amplitudes[s])), res.rotation[s],
               res.decoherence[s], table.rotation[s], table.decoherence[s])
    lt = rep.new_table("ladder convergence", ["regime", "ratio", "input", "column", "simulated",
                                              "tabulated", "relative_deviation"])
    for reg in pg.REGIMES:
        for ratio in LADDER:
            lc = pg.ladder_config(reg, ratio, cfg.gate.lifetime, cfg.gate.omega_ba)
            sim = pg.simulate_protocol(lc, seed, cfg.run.n_samples)
            tab = pg.error_table(lc)
            for s in pg.INPUTS:
                for col in ("rotation", "decoherence"):
                    a, b = getattr(sim, col)[s], getattr(tab, col)[s]
                    lt.add(reg, ratio, s, col, a, b, abs(a / b - 1))
    signs = " ".join(f"{s}:{res.truth_table[s]:+d}" for s in pg.INPUTS)
    rep.summary.append(f"regime {regime} truth table {signs}")
    return rep


BUILDERS = {
    "budget": budget_report,
    "single-qubit": single_qubit_report,
    "gate-opt": gate_opt_report,
    "interactions": interactions_report,
    "lifetimes": lifetimes_report,
    "readout": readout_report,
    "photoionization": photoionization_report,
    "simulate": simulate_report,
}
