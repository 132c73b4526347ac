"""Batch front end: ``bso-sim <config-path> [--out DIR] [--mode MODE]``.

The configuration is a flat ``key = value`` file with dotted keys::

    mode = bso
    field.g0M = 0.2
    field.tau_sw = 100
    numerics.t_end = 400

Blank lines and ``#`` comments are ignored.  Field and beam values may be
given in any units; they are rescaled to omega = 1 before running, and
all emitted times are in units of 1/omega.

Exit status: 0 success, 1 configuration or output error, 2 numerical
accuracy failure.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _svg
from .analytic import analytic_trajectory, pi_half_time, saturated_pi_half_time
from .beam import BeamParams, beam_coefficients, lock_in_dc
from .dynamics import default_step, final_populations, integrate_full
from .errors import AccuracyError, ConfigError, DomainError, SearchError, StepSizeError
from .field import FieldParams, eta, switching_profile
from .floquet import integrate_floquet
from .signal import bso_envelope, bso_residual

MODES = ("trajectory", "bso", "phi_sweep", "beam", "lockin", "oracle_compare")
ORACLE_BOUND = 5.0  # multiples of eta0^2

# key -> (type, default); ``None`` default means required
KEYS = {
    "mode": (str, None),
    "field.g0M": (float, None),
    "field.omega": (float, 1.0),
    "field.phi": (float, 0.0),
    "field.tau_sw": (float, 100.0),
    "field.compensate_bs_shift": (bool, True),
    "field.compensation": (str, "continuous"),
    "numerics.dt": (float, 0.0),
    "numerics.stride": (int, 10),
    "numerics.t_end": (float, 0.0),
    "numerics.nodes": (int, 8),
    "output.dir": (str, "."),
    "output.csv": (bool, True),
    "output.svg": (bool, False),
    "phi_sweep.points": (int, 32),
    "phi_sweep.cycles": (int, -1),
    "beam.u": (float, None),
    "beam.z0": (float, 0.0),
    "beam.z_sw": (float, None),
    "beam.tau_bar": (float, 0.0),
    "beam.v_max": (float, 5.0),
    "beam.spread": (float, 0.0),
    "beam.periods": (int, 8),
    "beam.samples_per_period": (int, 32),
    "lockin.points": (int, 16),
    "lockin.periods": (float, 64.0),
    "lockin.f0": (float, 1.0),
    "oracle.etas": (str, "0.01,0.05,0.1"),
}
BEAM_MODES = ("beam", "lockin")


@dataclass
class RunConfig:
    mode: str
    field: FieldParams
    beam: BeamParams | None = None
    values: dict = field(default_factory=dict)
    time_scale: float = 1.0  # omega in the units of the config file

    @property
    def out_dir(self) -> Path:
        return Path(self.values["output.dir"])

    def get(self, key):
        return self.values[key]


def _convert(key, kind, raw):
    try:
        if kind is bool:
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as {kind.__name__}") from None


def parse_config(text: str) -> dict:
    """Parse flat ``key = value`` text into a dict of typed values."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _convert(key, KEYS[key][0], raw)
    return values


def build_config(values: dict, mode: str | None = None, out: str | None = None) -> RunConfig:
    values = dict(values)
    if mode is not None:
        values["mode"] = mode
    if out is not None:
        values["output.dir"] = out
    m = values.get("mode")
    if m is None:
        raise ConfigError("missing required key 'mode'")
    if m not in MODES:
        raise ConfigError(f"mode: {m!r} is not one of {', '.join(MODES)}")
    required = ["field.g0M"] + (["beam.u", "beam.z_sw"] if m in BEAM_MODES else [])
    for key in required:
        if key not in values:
            raise ConfigError(f"missing required key {key!r} for mode {m!r}")
    for key, (_, default) in KEYS.items():
        if default is not None:
            values.setdefault(key, default)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            raw = FieldParams(
                g0M=values["field.g0M"], omega=values["field.omega"], phi=values["field.phi"],
                tau_sw=values["field.tau_sw"],
                compensate_bs_shift=values["field.compensate_bs_shift"],
                compensation=values["field.compensation"],
            )
        p = raw.normalized()
    except DomainError as exc:
        raise ConfigError(f"field: {exc}") from None

    beam = None
    if m in BEAM_MODES:
        w = raw.omega
        u = values["beam.u"] / w  # length per unit of 1/omega
        try:
            kw = dict(nodes=values["numerics.nodes"], v_max=values["beam.v_max"],
                      spread=values["beam.spread"] or None)
            if values["beam.tau_bar"] > 0:
                beam = BeamParams(u, values["beam.z0"], values["beam.z_sw"],
                                  values["beam.tau_bar"] * w, **kw)
            else:
                beam = BeamParams.matched(p, u, values["beam.z_sw"], values["beam.z0"], **kw)
        except DomainError as exc:
            raise ConfigError(f"beam: {exc}") from None
    return RunConfig(m, p, beam, values, raw.omega)


def load_config(path, mode=None, out=None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return build_config(parse_config(text), mode, out)


def _fmt(x) -> str:
    return f"{x:.12g}"


def _csv(cfg: RunConfig, columns, rows) -> str:
    params = dict(cfg.field.as_dict())
    if cfg.beam is not None:
        params.update(u=cfg.beam.u, z0=cfg.beam.z0, z_sw=cfg.beam.z_sw,
                      tau_bar=cfg.beam.tau_bar, nodes=cfg.beam.nodes,
                      v_max=cfg.beam.v_max, spread=cfg.beam.spread)
    desc = " ".join(
        f"{k}={_fmt(v) if isinstance(v, float) else v}" for k, v in params.items()
    )
    lines = [f"# bso-sim mode={cfg.mode} units=omega {desc}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _dt(cfg):
    return cfg.get("numerics.dt") * cfg.time_scale or default_step(cfg.field)


def _t_end(cfg):
    t_end = cfg.get("numerics.t_end") * cfg.time_scale
    if t_end > 0:
        return t_end
    p = cfg.field
    return pi_half_time(p, cycles=4) if p.g0M > 0 else 100.0


def run_trajectory(cfg):
    p = cfg.field
    tr = integrate_full(p, _t_end(cfg), _dt(cfg), cfg.get("numerics.stride")).to_lab()
    a = tr.amplitudes
    rows = np.column_stack([tr.times, a[:, 0].real, a[:, 0].imag, a[:, 1].real,
                            a[:, 1].imag, tr.populations])
    cols = ["t", "re_c0", "im_c0", "re_c1", "im_c1", "pop1"]
    plot = (tr.times, [("|C1|^2", tr.populations)], "t (1/omega)", "excited population",
            "Population of |1>")
    return {"trajectory": (cols, rows)}, {"trajectory": plot}


def run_bso(cfg):
    p = cfg.field
    tr = integrate_full(p, _t_end(cfg), _dt(cfg), cfg.get("numerics.stride"))
    t = tr.times
    resid = bso_residual(tr)
    rabi = tr.populations - resid
    model = np.asarray(bso_envelope(p, t)) * np.sin(2 * (p.omega * t + p.phi))
    g0 = np.asarray(switching_profile(p, t))
    rows = np.column_stack([t, tr.populations, rabi, resid, model, g0])
    cols = ["t", "pop1", "rabi", "residual", "first_order", "g0"]
    plot = (t, [("numerical", resid), ("first order", model)], "t (1/omega)",
            "|C1|^2 - sin^2(g0' t/2)", "Bloch-Siegert oscillation")
    return {"bso": (cols, rows)}, {"bso": plot}


def run_phi_sweep(cfg):
    p = cfg.field
    cycles = cfg.get("phi_sweep.cycles")
    tau = saturated_pi_half_time(p) if cycles < 0 else pi_half_time(p, cycles)
    n = cfg.get("phi_sweep.points")
    phis = np.arange(n) * math.pi / n
    pops = final_populations(p, phis, tau, _dt(cfg))
    first = 0.5 * (1 + 2 * eta(p, tau) * np.sin(2 * (p.omega * tau + phis)))
    rows = np.column_stack([phis, np.full(n, tau), pops, first])
    cols = ["phi", "tau", "pop1", "first_order"]
    plot = (phis, [("numerical", pops), ("first order", first)], "phi (rad)",
            "readout population", "Readout after pi/2 pulse vs field phase")
    return {"phi_sweep": (cols, rows)}, {"phi_sweep": plot}


def run_beam(cfg):
    p, b = cfg.field, cfg.beam
    a, amp = beam_coefficients(b, p)
    spp = cfg.get("beam.samples_per_period")
    n = cfg.get("beam.periods") * spp
    t = np.arange(n) * (math.pi / p.omega) / spp
    s = a + amp * np.sin(2 * (p.omega * t + p.phi))
    mono = 0.5 + p.eta0 * np.sin(2 * (p.omega * t + p.phi))
    rows = np.column_stack([t, s, mono])
    cols = ["t", "S", "monovelocity"]
    plot = (t, [("beam average", s), ("monovelocity", mono)], "t (1/omega)", "S(t)",
            "Beam-averaged readout")
    return {"beam": (cols, rows)}, {"beam": plot}


def run_lockin(cfg):
    p, b = cfg.field, cfg.beam
    n = cfg.get("lockin.points")
    thetas = np.arange(n) * 2 * math.pi / n
    kw = dict(periods=cfg.get("lockin.periods"), f0=cfg.get("lockin.f0"))
    dc = np.array([lock_in_dc(b, p, th, **kw) for th in thetas])
    rows = np.column_stack([thetas, dc, dc / dc[0], np.cos(thetas)])
    cols = ["theta", "dc", "dc_ratio", "cos_theta"]
    plot = (thetas, [("dc / dc(0)", dc / dc[0]), ("cos theta", np.cos(thetas))], "theta (rad)",
            "normalized dc", "Lock-in output")
    return {"lockin": (cols, rows)}, {"lockin": plot}


def run_oracle_compare(cfg):
    base = cfg.field
    try:
        etas = [float(s) for s in cfg.get("oracle.etas").split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"oracle.etas: cannot read {cfg.get('oracle.etas')!r}") from None
    pointwise, summary = [], []
    for e in etas:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                p = FieldParams(4 * e * base.omega, base.omega, base.phi, base.tau_sw,
                                base.compensate_bs_shift, base.compensation)
            except DomainError as exc:
                raise ConfigError(f"oracle.etas: {exc}") from None
        tau = pi_half_time(p)
        stride = cfg.get("numerics.stride")
        full = integrate_full(p, tau, stride=stride)
        flo = integrate_floquet(p, tau, stride=stride).resummed()
        ana = analytic_trajectory(p, full.times)
        d_ff = full.populations - flo.populations
        d_fa = full.populations - ana.populations
        d_la = flo.populations - ana.populations
        for row in zip(full.times, d_ff, d_fa, d_la):
            pointwise.append((e, *row))
        worst = max(np.max(np.abs(d_ff)), np.max(np.abs(d_fa)), np.max(np.abs(d_la)))
        bound = ORACLE_BOUND * e * e
        summary.append((e, tau, np.max(np.abs(d_ff)), np.max(np.abs(d_fa)),
                        np.max(np.abs(d_la)), bound, float(worst <= bound)))
    files = {
        "oracle_compare": (["eta0", "t", "full_minus_floquet", "full_minus_analytic",
                            "floquet_minus_analytic"], pointwise),
        "oracle_compare_summary": (["eta0", "tau", "max_full_floquet", "max_full_analytic",
                                    "max_floquet_analytic", "bound", "pass"], summary),
    }
    s = np.array(summary)
    plot = (s[:, 0], [("worst / bound", np.max(s[:, 2:5], axis=1) / s[:, 5])], "eta0",
            "max deviation / 5 eta0^2", "Cross-solver agreement")
    return files, {"oracle_compare": plot}


RUNNERS = {
    "trajectory": run_trajectory,
    "bso": run_bso,
    "phi_sweep": run_phi_sweep,
    "beam": run_beam,
    "lockin": run_lockin,
    "oracle_compare": run_oracle_compare,
}


def run(cfg: RunConfig) -> tuple[int, list[Path]]:
    """Execute one configuration; return (exit status, written files)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        tables, plots = RUNNERS[cfg.mode](cfg)
    out = cfg.out_dir
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"output.dir: cannot create {out}: {exc.strerror}") from None
    docs = {}
    if cfg.get("output.csv"):
        for name, (cols, rows) in tables.items():
            docs[out / f"{name}.csv"] = _csv(cfg, cols, rows)
    if cfg.get("output.svg"):
        for name, args in plots.items():
            docs[out / f"{name}.svg"] = _svg.line_plot(*args)
    written = []
    for path, text in docs.items():
        try:
            path.write_text(text)
        except OSError as exc:
            raise ConfigError(f"output.dir: cannot write {path}: {exc.strerror}") from None
        written.append(path)
    status = 0
    if cfg.mode == "oracle_compare":
        status = 0 if all(row[-1] for row in tables["oracle_compare_summary"][1]) else 2
    return status, written


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="bso-sim", description=__doc__.split("\n")[0])
    ap.add_argument("config", help="flat key = value run configuration")
    ap.add_argument("--out", help="output directory (overrides output.dir)")
    ap.add_argument("--mode", choices=MODES, help="override the configured mode")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config, args.mode, args.out)
        status, written = run(cfg)
    except (ConfigError, DomainError, StepSizeError) as exc:
        print(f"bso-sim: config error: {exc}", file=sys.stderr)
        return 1
    except (AccuracyError, SearchError) as exc:
        print(f"bso-sim: numerical failure: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    if status == 2:
        print("bso-sim: oracle comparison exceeded the 5 eta0^2 bound", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
