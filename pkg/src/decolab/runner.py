"""Execute a RunConfig: evaluate the model, write files, assemble a report.

Every run writes its data files plus a structured-text report.txt.  With
verification enabled the report also carries the oracle cross-checks for
the mode (quadrature normalization and field-ratio recovery for cat runs,
master-equation integration for spin runs), and the run only counts as
passed if every check lands inside its tolerance.
"""

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import cat_free, cat_oscillator, oracle, spin_bloch
from .config import RunConfig
from .core import ConfigError
from .output import (
    STRUCTURED,
    config_hash,
    data_extension,
    format_float,
    write_sections,
    write_table,
)

NORMALIZATION_TOL = 1e-6
TERM_INVARIANCE_TOL = 1e-6
RATIO_TOL = 1e-10
BOUNDS_TOL = 1e-12
REVIVAL_TOL = 1e-15
MINIMUM_TOL = 1e-12
LINDBLAD_TOL = 1e-6
QUADRATURE_TOL = 1e-9


@dataclass(frozen=True)
class VerificationCheck:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


@dataclass
class RunReport:
    mode: str
    output_dir: str
    files: list
    warnings: list
    verification: list | None

    @property
    def passed(self) -> bool:
        if self.verification is None:
            return True
        return all(check.passed for check in self.verification)

    def exit_code(self) -> int:
        return 0 if self.passed else 1


def _collect_warnings(caught) -> list:
    seen = []
    for w in caught:
        text = str(w.message)
        if text not in seen:
            seen.append(text)
    return seen


def _time_grid(config: RunConfig) -> np.ndarray:
    return np.linspace(config.t_start, config.t_end, config.n_samples)


def _base_meta(config: RunConfig, kind: str) -> dict:
    return {
        "kind": kind,
        "config_sha256": config_hash(config.source_text),
        "mode": config.mode,
        "unit_system": config.unit_system,
    }


def _kinematics_for(params, constants):
    """Reservoir kinematics for regimes that define the full density, else None."""
    if params.regime == "free":
        return cat_free.free_kinematics(params.cat.mass, constants)
    if params.regime == "ohmic-high-t":
        return cat_free.ohmic_high_t_kinematics(
            params.cat.mass, params.reservoir.temperature, params.reservoir.gamma, constants
        )
    return None


def _attenuation_curve(params, constants, times) -> np.ndarray:
    kin = _kinematics_for(params, constants)
    if kin is not None:
        return np.array([
            cat_free.attenuation_exact(params.cat, kin, float(t)) for t in times
        ])
    zeta = params.reservoir.zeta_for(params.cat.mass)
    if params.regime == "low-t":
        return np.array([
            cat_free.attenuation_low_t(params.cat, zeta, float(t), constants) for t in times
        ])
    return np.array([
        cat_free.attenuation_decoupled_high_t(
            params.cat, zeta, params.reservoir.temperature, float(t), constants
        )
        for t in times
    ])


def _snapshot_grid(params, w2: float) -> np.ndarray:
    if params.x_min is not None:
        return np.linspace(params.x_min, params.x_max, params.x_samples)
    return cat_free.default_grid(params.cat, w2, params.x_samples)


def _run_free_cat(config: RunConfig, out: Path, notes: list):
    params = config.free_cat
    constants = config.constants
    times = _time_grid(config)
    ext = data_extension(config.fmt)
    files = []

    curve = _attenuation_curve(params, constants, times)
    meta = _base_meta(config, "attenuation-curve")
    meta["regime"] = params.regime
    name = f"attenuation{ext}"
    write_table(out / name, meta, ["t", "a"], np.column_stack([times, curve]), config.fmt)
    files.append(name)

    kin = _kinematics_for(params, constants)
    snap_times = np.linspace(config.t_start, config.t_end, params.snapshots) if params.snapshots else []
    fields = []
    if kin is None and params.snapshots:
        notes.append(
            f"regime {params.regime!r} defines only the attenuation factor, not the "
            "coordinate-space density; snapshots skipped"
        )
    elif kin is not None:
        for i, t in enumerate(snap_times):
            w2 = cat_free.packet_variance(kin, params.cat.sigma, float(t))
            field = cat_free.cat_probability(
                params.cat, kin, float(t), _snapshot_grid(params, w2)
            )
            fields.append(field)
            meta = _base_meta(config, "cat-field")
            meta["regime"] = params.regime
            meta["time"] = format_float(t)
            meta["w2"] = format_float(field.w2)
            name = f"catfield_{i:02d}{ext}"
            write_table(
                out / name,
                meta,
                ["x", "P_total", "P1", "P2", "P_interference_term"],
                np.column_stack([field.x, field.total, field.p1, field.p2, field.interference]),
                config.fmt,
            )
            files.append(name)

    checks = None
    if config.verify:
        checks = [_bounds_check(curve)]
        if kin is not None and fields:
            checks.extend(_field_checks(params, kin, snap_times))
    return files, checks


def _bounds_check(curve: np.ndarray) -> VerificationCheck:
    # a must stay inside (0, 1]; deviation is the worst excursion
    dev = max(float(np.max(curve)) - 1.0, 0.0)
    if np.any(curve <= 0.0):
        dev = max(dev, float(np.max(-curve)) + 1e-9)
    return VerificationCheck("attenuation_bounds", dev, BOUNDS_TOL)


def _field_checks(params, kin, snap_times) -> list:
    spec = params.cat
    norm_dev = 0.0
    ratio_dev = 0.0
    term_integrals = {"P1": [], "P2": [], "interference": []}
    for t in snap_times:
        pw = cat_free.cat_pointwise(spec, kin, float(t))
        half = spec.d / 2.0 + 10.0 * math.sqrt(pw.w2)
        total = oracle.integrate_adaptive(pw.total, -half, half, tol=QUADRATURE_TOL)
        norm_dev = max(norm_dev, abs(total.value - 1.0))
        term_integrals["P1"].append(oracle.integrate_adaptive(pw.p1, -half, half, tol=QUADRATURE_TOL).value)
        term_integrals["P2"].append(oracle.integrate_adaptive(pw.p2, -half, half, tol=QUADRATURE_TOL).value)
        term_integrals["interference"].append(
            2.0 * oracle.integrate_adaptive(pw.interference, -half, half, tol=QUADRATURE_TOL).value
        )

        field = cat_free.cat_probability(spec, kin, float(t))
        recovered = cat_free.attenuation_from_field(field).value
        exact = cat_free.attenuation_exact(spec, kin, float(t))
        if exact > 1e-100:
            ratio_dev = max(ratio_dev, abs(recovered - exact) / exact)
        else:
            ratio_dev = max(ratio_dev, abs(recovered - exact))

    invariance_dev = max(
        max(vals) - min(vals) for vals in term_integrals.values()
    )
    return [
        VerificationCheck("normalization", norm_dev, NORMALIZATION_TOL),
        VerificationCheck("term_time_invariance", invariance_dev, TERM_INVARIANCE_TOL),
        VerificationCheck("attenuation_ratio_identity", ratio_dev, RATIO_TOL),
    ]


def _run_oscillator(config: RunConfig, out: Path, notes: list):
    params = config.oscillator
    spec = params.spec
    constants = config.constants
    times = _time_grid(config)
    ext = data_extension(config.fmt)
    files = []

    curve = np.array([
        cat_oscillator.attenuation_oscillator(spec, float(t), constants) for t in times
    ])
    meta = _base_meta(config, "attenuation-curve")
    name = f"attenuation{ext}"
    write_table(out / name, meta, ["t", "a"], np.column_stack([times, curve]), config.fmt)
    files.append(name)

    if params.n_revivals is not None:
        n = params.n_revivals
    else:
        # revivals inside the sampled window
        n = max(0, int(math.floor(spec.omega * config.t_end / math.pi + 0.5)))
    revivals = cat_oscillator.revival_times(spec, n)
    meta = _base_meta(config, "revival-times")
    name = f"revivals{ext}"
    write_table(out / name, meta, ["t_revival"], revivals.reshape(-1, 1), config.fmt)
    files.append(name)

    checks = None
    if config.verify:
        checks = []
        if len(revivals):
            dev = max(
                abs(cat_oscillator.attenuation_oscillator(spec, float(t), constants) - 1.0)
                for t in revivals
            )
            checks.append(VerificationCheck("revival_unity", dev, REVIVAL_TOL))
        floor = cat_oscillator.minimum_attenuation(spec, constants)
        dev = abs(cat_oscillator.attenuation_oscillator(spec, 0.0, constants) - floor)
        checks.append(VerificationCheck("minimum_closed_form", dev, MINIMUM_TOL))
    return files, checks


def _run_spin(config: RunConfig, out: Path, notes: list):
    params = config.spin
    spec = params.spec
    constants = config.constants
    times = _time_grid(config)
    ext = data_extension(config.fmt)
    files = []

    initial = np.array(params.initial)
    rows = []
    for t in times:
        p = spin_bloch.bloch_evolve(spec, initial, float(t), constants)
        rho = spin_bloch.density_from_polarization(p)
        rows.append([
            t, p[0], p[1], p[2],
            rho[0, 0].real, rho[1, 1].real, abs(rho[0, 1]),
        ])
    meta = _base_meta(config, "bloch-trajectory")
    name = f"bloch_trajectory{ext}"
    write_table(
        out / name,
        meta,
        ["t", "P_x", "P_y", "P_z", "rho_pp", "rho_mm", "abs_rho_pm"],
        rows,
        config.fmt,
    )
    files.append(name)

    t1, t2 = spin_bloch.relaxation_times(spec, constants)
    summary = {
        "nbar": format_float(spin_bloch.nbar(spec.omega, spec.temperature, constants)),
        "p0": format_float(spin_bloch.equilibrium_polarization(spec, constants)),
        "t1": format_float(t1),
        "t2": format_float(t2),
    }
    if spec.g_n is not None and spec.mu0 is not None:
        summary["m0"] = format_float(spin_bloch.saturation_magnetization(spec, constants))
    write_sections(out / "equilibrium.txt", {
        "meta": _base_meta(config, "equilibrium-summary"),
        "equilibrium": summary,
    })
    files.append("equilibrium.txt")

    checks = None
    if config.verify:
        dt = min(t1, config.t_end) / 400.0
        dev = oracle.lindblad_bloch_deviation(spec, initial, config.t_end, dt, constants)
        checks = [VerificationCheck("lindblad_vs_analytic", dev, LINDBLAD_TOL)]
    return files, checks


def run(config: RunConfig) -> RunReport:
    """Execute one configuration and write all of its outputs."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if config.mode == "free-cat":
            files, checks = _run_free_cat(config, out, notes)
        elif config.mode == "oscillator-cat":
            files, checks = _run_oscillator(config, out, notes)
        else:
            files, checks = _run_spin(config, out, notes)
    collected = _collect_warnings(caught) + notes

    report = RunReport(
        mode=config.mode,
        output_dir=str(out),
        files=files,
        warnings=collected,
        verification=checks,
    )
    _write_report(config, out, report)
    return report


def _write_report(config: RunConfig, out: Path, report: RunReport) -> None:
    sections = {
        "report": {
            "mode": config.mode,
            "config_sha256": config_hash(config.source_text),
            "unit_system": config.unit_system,
            "format": config.fmt,
            "verify": str(config.verify).lower(),
            "status": "pass" if report.passed else "fail",
        },
        "files": {f"f{i}": name for i, name in enumerate(report.files)},
        "warnings": {f"w{i}": text for i, text in enumerate(report.warnings)},
    }
    if report.verification is not None:
        ver = {}
        for i, check in enumerate(report.verification):
            ver[f"c{i}_name"] = check.name
            ver[f"c{i}_deviation"] = format_float(check.deviation)
            ver[f"c{i}_tolerance"] = format_float(check.tolerance)
            ver[f"c{i}_pass"] = str(check.passed).lower()
        sections["verification"] = ver
    write_sections(out / "report.txt", sections)


def compare_regimes(config: RunConfig) -> Path:
    """Tabulate entangled high-T decay against the decoupled-start decay.

    Needs a free-cat config whose regime supplies a positive temperature
    and a resolvable coupling zeta (gamma works too, via zeta = gamma m).
    Returns the path of the written table.
    """
    if config.mode != "free-cat":
        raise ConfigError(f"compare-regimes needs a free-cat config, got mode {config.mode!r}")
    params = config.free_cat
    if params.reservoir.temperature <= 0:
        raise ConfigError(
            f"compare-regimes needs a positive temperature; regime {params.regime!r} "
            "does not provide one"
        )
    constants = config.constants
    zeta = params.reservoir.zeta_for(params.cat.mass)
    times = _time_grid(config)
    entangled = np.array([
        cat_free.attenuation_high_t(params.cat, params.reservoir.temperature, float(t), constants)
        for t in times
    ])
    decoupled = np.array([
        cat_free.attenuation_decoupled_high_t(
            params.cat, zeta, params.reservoir.temperature, float(t), constants
        )
        for t in times
    ])
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = _base_meta(config, "regime-comparison")
    meta["zeta"] = format_float(zeta)
    path = out / f"regime_comparison{data_extension(config.fmt)}"
    write_table(
        path,
        meta,
        ["t", "a_high_t_entangled", "a_decoupled_hpz"],
        np.column_stack([times, entangled, decoupled]),
        config.fmt,
    )
    return path
