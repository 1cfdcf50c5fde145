"""Command-line front end.

Five experiment families are dispatched from a JSON config document:

    spectrum       band dispersion and spectrum-reality classification
    zak            Zak phase by closed form, quadrature, and Wilson loop
    evolve         flux-driven wavepacket dynamics on the SSH ring
    scatter        interferometer transmission / confinement scenario
    network-check  full-network vs virtual-chain spectral equality

Every run writes plain CSV artifacts (full double precision) plus a flat
``manifest.txt`` recording parameters, tool version, and derived quantities.
Runs are fully deterministic: identical configs give byte-identical CSVs.

Exit codes: 0 ok, 2 validation, 3 numerical (EP / convergence / timing), 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, bloch, dynamics, lattice, scatter, zak
from .errors import ConfigError, NhsshError, ParseError, ValidationError

_COMMANDS = ("spectrum", "zak", "evolve", "scatter", "network-check")

# defaults merged into each command's parameter set
_DEFAULTS = {
    "spectrum": {"flux": 0.0, "n_k": 400},
    "zak": {"flux": 0.0, "n_k": 400, "n_quad": 4096, "band": 1},
    "evolve": {
        "flux": 0.0,
        "beta": 0.0015,
        "k0": np.pi / 4.0,
        "alpha": 0.05,
        "band": 1,
        "dt": 0.02,
        "record_dt": 1.0,
        "protocol": "linear",
        "erf_scale": 0.002,
        "T": None,
    },
    "scatter": {
        "timing": "during_transit",
        "rate": 0.012,
        "k0": np.pi / 4.0,
        "alpha": 0.04,
        "dt": 0.02,
        "record_dt": 1.0,
        "threshold": 0.99,
        "settle": 75.0,
        "max_imag_energy_bound": 1e-8,
        "total_time": None,
    },
    "network-check": {"flux": 0.0},
}

_REQUIRED = {
    "spectrum": ("delta", "Delta"),
    "zak": ("delta", "Delta"),
    "evolve": ("n_cells", "delta", "Delta", "center"),
    "scatter": ("n_a", "n_b", "n_d", "delta", "Delta", "center"),
    "network-check": ("n_a", "n_b", "n_d", "delta", "Delta"),
}


@dataclass
class RunConfig:
    command: str
    params: dict

    def normalized(self) -> str:
        return json.dumps({"command": self.command, **self.params}, sort_keys=True)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config document; fill defaults.

    Raises ParseError (with line/column) for malformed JSON and
    ValidationError (naming the field) for missing or out-of-range values.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc.msg}", line=exc.lineno, column=exc.colno)
    if not isinstance(raw, dict):
        raise ValidationError("config must be a JSON object", field=None)
    command = raw.pop("command", None)
    if command not in _COMMANDS:
        raise ValidationError(f"command must be one of {_COMMANDS}, got {command!r}", field="command")
    params = dict(_DEFAULTS[command])
    params.update(raw)
    for name in _REQUIRED[command]:
        if name not in params or params[name] is None:
            raise ValidationError(f"missing required field {name!r}", field=name)
    for name, value in params.items():
        if isinstance(value, bool) or value is None or isinstance(value, str):
            continue
        if not isinstance(value, (int, float)):
            raise ValidationError(f"field {name!r} must be a number", field=name)
        if not np.isfinite(value):
            raise ValidationError(f"field {name!r} must be finite", field=name)
    return RunConfig(command=command, params=params)


def _write_manifest(out: Path, config: RunConfig, derived: dict) -> None:
    lines = [f"version = {__version__}", f"command = {config.command}"]
    for key in sorted(config.params):
        lines.append(f"{key} = {config.params[key]}")
    for key in sorted(derived):
        lines.append(f"{key} = {derived[key]}")
    (out / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _csv_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([x if isinstance(x, (str, int)) else f"{x:.17g}" for x in row])


def _run_spectrum(p: dict, out: Path, config: RunConfig) -> None:
    model = bloch.SshModel(p["delta"], p["Delta"], p["flux"])
    n_k = int(p["n_k"])
    ks = 2.0 * np.pi * np.arange(n_k) / n_k
    eps = bloch.dispersion(model, ks, band=+1)
    _csv_rows(
        out / "spectrum.csv",
        ["k", "re_eps_plus", "im_eps_plus", "re_eps_minus", "im_eps_minus"],
        [(k, e.real, e.imag, -e.real, -e.imag) for k, e in zip(ks, eps)],
    )
    rep = bloch.spectrum_reality(model, n_k)
    _write_manifest(out, config, {
        "classification": rep.classification,
        "min_margin": rep.min_margin,
        "k_at_min": rep.k_at_min,
    })


def _run_zak(p: dict, out: Path, config: RunConfig) -> None:
    model = bloch.SshModel(p["delta"], p["Delta"], p["flux"])
    band = int(p["band"])
    closed = zak.zak_closed_form(p["delta"], p["Delta"], int(p["n_quad"]), band=band)
    quad = zak.zak_quadrature(model, band, int(p["n_quad"]))
    wilson = zak.zak_wilson_loop(model, band, int(p["n_k"]))
    gamma = zak.adiabatic_phase(model, band, np.pi, int(p["n_quad"]))
    _csv_rows(
        out / "zak.csv",
        ["method", "band", "n", "re", "im"],
        [
            ("closed_form", closed.band, closed.n_k, closed.value.real, closed.value.imag),
            ("quadrature", quad.band, quad.n_k, quad.value.real, quad.value.imag),
            ("wilson_loop", wilson.band, wilson.n_k, wilson.value.real, wilson.value.imag),
            ("adiabatic_pi", gamma.band, int(p["n_quad"]), gamma.gamma.real, gamma.gamma.imag),
        ],
    )
    _write_manifest(out, config, {
        "xi": -gamma.gamma.imag,
        "wilson_minus_closed_re": wilson.value.real - closed.value.real,
        "wilson_minus_closed_im": wilson.value.imag - closed.value.imag,
    })


def _run_evolve(p: dict, out: Path, config: RunConfig) -> None:
    spec = lattice.SshRingSpec(int(p["n_cells"]), p["delta"], p["Delta"], p["flux"])
    beta = p["beta"]
    if p["protocol"] == "linear":
        protocol = dynamics.FluxProtocol(kind="linear", rate=beta)
        T = p["T"] if p["T"] is not None else np.pi / beta
    else:
        scale = p["erf_scale"]
        center = 4.5 / scale
        protocol = dynamics.FluxProtocol(kind="erf", erf_scale=scale, erf_center=center)
        T = p["T"] if p["T"] is not None else 2.0 * center
    wp = dynamics.WavepacketSpec(
        center=p["center"], width_param=p["alpha"], central_momentum=p["k0"]
    )
    band = int(p["band"])
    psi0 = dynamics.make_band_gwp(wp, spec, band=band)
    ledger = dynamics.ramp_phase_ledger(spec, band, beta, p["k0"])
    result = dynamics.evolve(
        dynamics.ring_ramp(spec, protocol),
        psi0,
        T,
        p["dt"],
        record_dt=p["record_dt"],
        ring=True,
        phase_ledger=ledger,
    )
    dynamics.write_summary_csv(out / "summary.csv", result)
    dynamics.write_snapshot_csv(out / "snapshots.csv", result)
    fid = dynamics.fidelity(psi0, result.final_state)
    _write_manifest(out, config, {
        "alpha_dynamic": ledger.alpha,
        "gamma_re": ledger.gamma.real,
        "gamma_im": ledger.gamma.imag,
        "xi": ledger.xi,
        "predicted_norm_gain": np.exp(2.0 * ledger.xi),
        "final_dirac_norm": result.dirac_norm[-1],
        "final_fidelity_abs": abs(fid),
        "center_start": result.center_traj[0],
        "center_final": result.center_traj[-1],
    })


def _run_scatter(p: dict, out: Path, config: RunConfig) -> None:
    spec = lattice.NetworkSpec(
        int(p["n_a"]), int(p["n_b"]), int(p["n_d"]), p["delta"], p["Delta"]
    )
    protocol = dynamics.FluxProtocol(kind="linear", rate=p["rate"])
    wp = dynamics.WavepacketSpec(
        center=p["center"], width_param=p["alpha"], central_momentum=p["k0"]
    )
    if p["total_time"] is None:
        raise ValidationError("missing required field 'total_time'", field="total_time")
    scenario = scatter.ScatterScenario(
        network=spec,
        wavepacket=wp,
        protocol=protocol,
        impulse_timing=p["timing"],
        total_time=p["total_time"],
        ring_threshold=p["threshold"],
        impulse_settle=p["settle"],
    )
    report = scatter.run_scenario(
        scenario,
        dt=p["dt"],
        record_dt=p["record_dt"],
        max_imag_energy_bound=p["max_imag_energy_bound"],
    )
    scatter.write_scatter_csv(out / "scatter.csv", report)
    derived = {
        "transmission": report.transmission,
        "confinement": report.confinement,
        "impulse_time": report.impulse_time,
        "max_imag_energy": report.max_imag_energy,
    }
    try:
        t_pred, c_pred = scatter.confinement_prediction(p["delta"], p["Delta"])
        derived["predicted_transmit"] = t_pred
        derived["predicted_confine"] = c_pred
    except NhsshError:
        derived["predicted_transmit"] = "n/a (broken spectrum)"
        derived["predicted_confine"] = "n/a (broken spectrum)"
    _write_manifest(out, config, derived)


def _run_network_check(p: dict, out: Path, config: RunConfig) -> None:
    spec = lattice.NetworkSpec(
        int(p["n_a"]), int(p["n_b"]), int(p["n_d"]), p["delta"], p["Delta"], p["flux"]
    )
    h_net = lattice.build_network(spec)
    parts = lattice.virtual_decompose(spec)
    h_virtual = lattice.assemble_virtual(*parts)
    u = lattice.virtual_basis_map(spec)
    eig_net = np.sort_complex(np.linalg.eigvals(h_net))
    eig_vir = np.sort_complex(np.linalg.eigvals(h_virtual))
    mismatch = float(np.max(np.abs(eig_net - eig_vir)))
    unitarity = float(np.max(np.abs(u @ u.conj().T - np.eye(len(u)))))
    transform = float(np.max(np.abs(u @ h_net @ u.conj().T - h_virtual)))
    _csv_rows(
        out / "network_eigs.csv",
        ["re_network", "im_network", "re_virtual", "im_virtual"],
        [(a.real, a.imag, b.real, b.imag) for a, b in zip(eig_net, eig_vir)],
    )
    t_ad, t_bd = parts[3], parts[4]
    _write_manifest(out, config, {
        "max_spectral_mismatch": mismatch,
        "unitarity_residual": unitarity,
        "transform_residual": transform,
        "t_ad": t_ad.real,
        "t_bd_im": t_bd.imag,
        "passed": mismatch < 1e-10 and unitarity < 1e-12,
    })


_RUNNERS = {
    "spectrum": _run_spectrum,
    "zak": _run_zak,
    "evolve": _run_evolve,
    "scatter": _run_scatter,
    "network-check": _run_network_check,
}


def run(config: RunConfig, out_dir) -> None:
    """Execute one validated config, writing artifacts into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _RUNNERS[config.command](config.params, out, config)


def _parse_sweep(sweep: str):
    try:
        key, rng = sweep.split("=", 1)
        start, stop, count = rng.split(":")
        return key, np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise ValidationError(f"bad --sweep syntax {sweep!r}: {exc}", field="sweep")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="nhssh", description="non-Hermitian SSH simulation toolkit"
    )
    ap.add_argument("--config", required=True, help="path to a JSON config document")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--dt", type=float, default=None, help="override time step")
    ap.add_argument("--nk", type=int, default=None, help="override k-grid size")
    ap.add_argument("--sweep", default=None, help="key=start:stop:count parameter sweep")
    args = ap.parse_args(argv)

    try:
        config = parse_config(Path(args.config).read_text(encoding="utf-8"))
        if args.dt is not None:
            config.params["dt"] = args.dt
        if args.nk is not None:
            config.params["n_k"] = args.nk
        if args.sweep:
            key, values = _parse_sweep(args.sweep)
            if key not in config.params:
                raise ValidationError(f"sweep key {key!r} not in config", field=key)
            for i, value in enumerate(values):
                point = RunConfig(config.command, dict(config.params, **{key: float(value)}))
                run(point, Path(args.out) / f"sweep_{key}_{i:03d}")
        else:
            run(config, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NhsshError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
