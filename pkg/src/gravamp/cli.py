"""Command-line interface: parameter sweeps, oracle comparisons, weak values.

Configuration files are flat ``key = value [unit]`` documents with ``#``
comments.  Keys:

    source = point | cylinder
    M      = <mass>            point source mass            (kg, g, u, eV ...)
    rho    = <line density>    cylinder mass per length     (kg/m)
    l      = <length>          cylinder reference radius    (m, cm, mm, um)
    R      = <length>          atom-source distance
    N      = <count>           atoms in the ensemble
    m1     = <mass>            lower-level rest energy      (u, kg, eV ...)
    dm     = <energy>          level splitting              (eV, meV ...)
    d      = <length>          initial pointer width
    T      = <time>            evolution time, or a sweep:  start .. stop s / points
    fast_phase = on | off      keep the internal-energy phase N dm T

Sweeps are half open: points are start + (stop-start) k/points for
k = 1..points, so T = start is excluded and doubling ``points`` keeps every
shared time bit-identical.  All numeric output is deterministic: rerunning a
command, or running it with a different --workers count, yields identical
bytes.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

from . import analytic, gravity, units, wavepacket
from . import weakcore
from .errors import (ConfigError, GridEscapeError, GridUnrepresentableError,
                     PostSelectionExtinguished, PostSelectionSingular)

# Unit tables used by the config grammar.  Natural factors are single
# products so that values round exactly once.
_LENGTH_NATURAL = {"m": units.M_INV_EV, "cm": 1e-2 * units.M_INV_EV,
                   "mm": 1e-3 * units.M_INV_EV, "um": 1e-6 * units.M_INV_EV}
_TIME_NATURAL = {"s": units.S_INV_EV, "ms": 1e-3 * units.S_INV_EV,
                 "us": 1e-6 * units.S_INV_EV}
_TIME_SECONDS = {"s": 1.0, "ms": 1e-3, "us": 1e-6}
_MASS_NATURAL = {"kg": units.KG_EV, "g": 1e-3 * units.KG_EV, "u": units.U_EV,
                 "eV": 1.0, "MeV": 1e6, "GeV": 1e9}
_ENERGY_NATURAL = {"eV": 1.0, "meV": 1e-3, "ueV": 1e-6, "neV": 1e-9,
                   "keV": 1e3, "MeV": 1e6}
_LINE_DENSITY_NATURAL = {"kg/m": units.KG_PER_M_EV2}

_KNOWN_KEYS = ("source", "M", "rho", "l", "R", "N", "m1", "dm", "d", "T",
               "fast_phase")

_COLUMNS = ("T_seconds", "f_rad", "g", "amp_leading", "leading_diverged",
            "amp_exact", "p_tran", "x_cl_m", "x_mean_m", "variance_m2")

# Oracle/analytic agreement below this is a clean match for the verdict.
_AGREEMENT_TOL = 1e-6


@dataclass(frozen=True)
class ValueWithUnit:
    value: float
    unit: str


@dataclass(frozen=True)
class TimeGrid:
    start: float
    stop: float
    unit: str
    points: int


@dataclass(frozen=True)
class RunConfig:
    """A fully parsed run request, values kept in their original units."""

    source_kind: str
    source_mass: Optional[ValueWithUnit]
    line_density: Optional[ValueWithUnit]
    cylinder_radius: Optional[ValueWithUnit]
    distance: ValueWithUnit
    n_atoms: float
    m1: ValueWithUnit
    dm: ValueWithUnit
    d: ValueWithUnit
    time: Union[ValueWithUnit, TimeGrid]
    fast_phase: bool

    def params(self) -> analytic.EnsembleParams:
        return analytic.EnsembleParams(
            n_atoms=self.n_atoms,
            m1=_to_natural(self.m1, _MASS_NATURAL, "m1"),
            dm=_to_natural(self.dm, _ENERGY_NATURAL, "dm"),
            d=_to_natural(self.d, _LENGTH_NATURAL, "d"),
        )

    def source(self) -> gravity.GravitySource:
        if self.source_kind == "point":
            return gravity.PointMass(_to_natural(self.source_mass,
                                                 _MASS_NATURAL, "M"))
        return gravity.Cylinder(
            line_density=_to_natural(self.line_density, _LINE_DENSITY_NATURAL,
                                     "rho"),
            radius=_to_natural(self.cylinder_radius, _LENGTH_NATURAL, "l"),
        )

    def distance_natural(self) -> float:
        return _to_natural(self.distance, _LENGTH_NATURAL, "R")

    def times(self) -> list[tuple[float, float]]:
        """(seconds, natural) pairs for every requested evolution time."""
        if isinstance(self.time, ValueWithUnit):
            spans = [(self.time.value, self.time.unit)]
        else:
            grid = self.time
            span = grid.stop - grid.start
            spans = [(grid.start + span * (k + 1) / grid.points, grid.unit)
                     for k in range(grid.points)]
        return [(v * _TIME_SECONDS[u], v * _TIME_NATURAL[u]) for v, u in spans]


def _to_natural(vu: ValueWithUnit, table: dict, key: str) -> float:
    if vu.unit not in table:
        raise ConfigError("key %r: unsupported unit %r (known: %s)"
                          % (key, vu.unit, ", ".join(sorted(table))))
    return vu.value * table[vu.unit]


def _parse_float(token: str, key: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ConfigError("key %r: cannot parse number %r" % (key, token))
    if not math.isfinite(value):
        raise ConfigError("key %r: value must be finite" % key)
    return value


def _parse_value_unit(tokens: list[str], key: str, table: dict) -> ValueWithUnit:
    if len(tokens) != 2:
        raise ConfigError("key %r: expected '<number> <unit>'" % key)
    vu = ValueWithUnit(_parse_float(tokens[0], key), tokens[1])
    _to_natural(vu, table, key)       # unit check
    return vu


def _parse_time(tokens: list[str]) -> Union[ValueWithUnit, TimeGrid]:
    if ".." in tokens:
        # start .. stop unit / points
        if (len(tokens) != 6 or tokens[1] != ".." or tokens[4] != "/"):
            raise ConfigError(
                "key 'T': sweep must look like 'start .. stop <unit> / <points>'")
        start = _parse_float(tokens[0], "T")
        stop = _parse_float(tokens[2], "T")
        unit = tokens[3]
        if unit not in _TIME_NATURAL:
            raise ConfigError("key 'T': unsupported time unit %r" % unit)
        try:
            points = int(tokens[5])
        except ValueError:
            raise ConfigError("key 'T': point count must be an integer")
        if points < 1:
            raise ConfigError("key 'T': point count must be positive")
        if start < 0.0 or not stop > start:
            raise ConfigError("key 'T': need 0 <= start < stop")
        return TimeGrid(start, stop, unit, points)
    vu = _parse_value_unit(tokens, "T", _TIME_NATURAL)
    if vu.value <= 0.0:
        raise ConfigError("key 'T': evolution time must be positive")
    return vu


def parse_config(text: str) -> RunConfig:
    """Parse a config document; unknown keys, duplicates and bad units fail."""
    raw: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.strip()
        if not body or body.startswith("#"):
            continue
        if "=" not in body:
            raise ConfigError("line %d: expected 'key = value'" % lineno)
        key, _, rhs = body.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError("line %d: unknown key %r" % (lineno, key))
        if key in raw:
            raise ConfigError("line %d: duplicate key %r" % (lineno, key))
        tokens = rhs.split()
        if not tokens:
            raise ConfigError("line %d: key %r has no value" % (lineno, key))
        raw[key] = tokens

    def need(key: str) -> list[str]:
        if key not in raw:
            raise ConfigError("missing required key %r" % key)
        return raw[key]

    kind_tokens = need("source")
    if kind_tokens != ["point"] and kind_tokens != ["cylinder"]:
        raise ConfigError("key 'source': must be 'point' or 'cylinder'")
    kind = kind_tokens[0]

    source_mass = line_density = cylinder_radius = None
    if kind == "point":
        source_mass = _parse_value_unit(need("M"), "M", _MASS_NATURAL)
        for forbidden in ("rho", "l"):
            if forbidden in raw:
                raise ConfigError("key %r only applies to cylinder sources"
                                  % forbidden)
    else:
        line_density = _parse_value_unit(need("rho"), "rho",
                                         _LINE_DENSITY_NATURAL)
        cylinder_radius = _parse_value_unit(need("l"), "l", _LENGTH_NATURAL)
        if "M" in raw:
            raise ConfigError("key 'M' only applies to point sources")

    n_tokens = need("N")
    if len(n_tokens) != 1:
        raise ConfigError("key 'N': expected a bare count")
    n_atoms = _parse_float(n_tokens[0], "N")

    fast_phase = False
    if "fast_phase" in raw:
        flag = raw["fast_phase"]
        if flag == ["on"] or flag == ["true"]:
            fast_phase = True
        elif flag == ["off"] or flag == ["false"]:
            fast_phase = False
        else:
            raise ConfigError("key 'fast_phase': must be on or off")

    config = RunConfig(
        source_kind=kind,
        source_mass=source_mass,
        line_density=line_density,
        cylinder_radius=cylinder_radius,
        distance=_parse_value_unit(need("R"), "R", _LENGTH_NATURAL),
        n_atoms=n_atoms,
        m1=_parse_value_unit(need("m1"), "m1", _MASS_NATURAL),
        dm=_parse_value_unit(need("dm"), "dm", _ENERGY_NATURAL),
        d=_parse_value_unit(need("d"), "d", _LENGTH_NATURAL),
        time=_parse_time(need("T")),
        fast_phase=fast_phase,
    )
    # Construct the physics objects once so every range error surfaces here.
    try:
        config.params()
        config.source()
        if not config.distance_natural() > 0.0:
            raise ValueError("distance must be positive")
    except ValueError as exc:
        raise ConfigError(str(exc))
    return config


def emit_config_lines(config: RunConfig) -> list[str]:
    """Canonical config lines; parsing them reproduces ``config`` exactly."""
    lines = ["source = %s" % config.source_kind]
    if config.source_kind == "point":
        lines.append("M = %r %s" % (config.source_mass.value,
                                    config.source_mass.unit))
    else:
        lines.append("rho = %r %s" % (config.line_density.value,
                                      config.line_density.unit))
        lines.append("l = %r %s" % (config.cylinder_radius.value,
                                    config.cylinder_radius.unit))
    lines.append("R = %r %s" % (config.distance.value, config.distance.unit))
    lines.append("N = %r" % (config.n_atoms,))
    lines.append("m1 = %r %s" % (config.m1.value, config.m1.unit))
    lines.append("dm = %r %s" % (config.dm.value, config.dm.unit))
    lines.append("d = %r %s" % (config.d.value, config.d.unit))
    if isinstance(config.time, TimeGrid):
        lines.append("T = %r .. %r %s / %d" % (config.time.start,
                                               config.time.stop,
                                               config.time.unit,
                                               config.time.points))
    else:
        lines.append("T = %r %s" % (config.time.value, config.time.unit))
    lines.append("fast_phase = %s" % ("on" if config.fast_phase else "off"))
    return lines


def _config_json(config: RunConfig) -> dict:
    doc: dict = {"source": config.source_kind}
    if config.source_kind == "point":
        doc["M"] = {"value": config.source_mass.value,
                    "unit": config.source_mass.unit}
    else:
        doc["rho"] = {"value": config.line_density.value,
                      "unit": config.line_density.unit}
        doc["l"] = {"value": config.cylinder_radius.value,
                    "unit": config.cylinder_radius.unit}
    doc["R"] = {"value": config.distance.value, "unit": config.distance.unit}
    doc["N"] = config.n_atoms
    doc["m1"] = {"value": config.m1.value, "unit": config.m1.unit}
    doc["dm"] = {"value": config.dm.value, "unit": config.dm.unit}
    doc["d"] = {"value": config.d.value, "unit": config.d.unit}
    if isinstance(config.time, TimeGrid):
        doc["T"] = {"start": config.time.start, "stop": config.time.stop,
                    "unit": config.time.unit, "points": config.time.points}
    else:
        doc["T"] = {"value": config.time.value, "unit": config.time.unit}
    doc["fast_phase"] = config.fast_phase
    return doc


# ----------------------------------------------------------------- commands

@dataclass(frozen=True)
class ScanResult:
    config: RunConfig
    rows: list[dict]


def _row(config_parts, t_pair: tuple[float, float]) -> dict:
    params, source, r, fast = config_parts
    t_seconds, t_natural = t_pair
    pt = analytic.amplification_point(params, source, r, t_natural, fast)
    return {
        "T_seconds": t_seconds,
        "f_rad": pt.f,
        "g": pt.g,
        "amp_leading": pt.amp_leading,
        "leading_diverged": pt.leading_diverged,
        "amp_exact": pt.amp_exact,
        "p_tran": pt.transition_probability,
        "x_cl_m": pt.x_cl * units.HBAR_C_EV_M,
        "x_mean_m": pt.x_mean * units.HBAR_C_EV_M,
        "variance_m2": pt.variance_leading * units.HBAR_C_EV_M ** 2,
    }


def run_scan(config: RunConfig, workers: int = 1) -> ScanResult:
    """Evaluate the amplification point at every requested time."""
    parts = (config.params(), config.source(), config.distance_natural(),
             config.fast_phase)
    pairs = config.times()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: _row(parts, p), pairs))
    else:
        rows = [_row(parts, p) for p in pairs]
    return ScanResult(config=config, rows=rows)


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return "%.16e" % value


def scan_to_csv(result: ScanResult) -> str:
    lines = ["# gravamp scan"]
    lines += ["# " + line for line in emit_config_lines(result.config)]
    lines.append(",".join(_COLUMNS))
    for row in result.rows:
        lines.append(",".join(_format_cell(row[c]) for c in _COLUMNS))
    return "\n".join(lines) + "\n"


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def scan_to_json(result: ScanResult) -> str:
    doc = {
        "config": _config_json(result.config),
        "columns": list(_COLUMNS),
        "rows": [{c: _json_safe(row[c]) for c in _COLUMNS}
                 for row in result.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def _single_time(config: RunConfig) -> tuple[float, float]:
    pairs = config.times()
    if len(pairs) != 1:
        raise ConfigError("this command needs a single T, not a sweep "
                          "(use --T or a scalar T in the config)")
    return pairs[0]


def run_point(config: RunConfig) -> dict:
    """One fully annotated parameter point."""
    t_seconds, t_natural = _single_time(config)
    params = config.params()
    source = config.source()
    r = config.distance_natural()
    row = _row((params, source, r, config.fast_phase),
               (t_seconds, t_natural))
    beta = analytic.amplification_prefactor(params, t_natural)
    doc = {c: _json_safe(row[c]) for c in _COLUMNS}
    doc["T_natural"] = t_natural
    doc["beta"] = beta
    doc["amp_exact_alt"] = analytic.amp_exact_alt(params, source, r, t_natural,
                                                  config.fast_phase)
    doc["surviving_atoms"] = analytic.surviving_atoms(params, row["p_tran"])
    doc["width_mismatch"] = analytic.width_mismatch(params, t_natural)
    doc["linearization_validity"] = gravity.linearization_validity(
        source, r, t_natural)
    return doc


def _rel_diff(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _verdict(rel_default: float, rel_alt: float) -> str:
    if rel_default <= _AGREEMENT_TOL < rel_alt:
        return "default"
    if rel_alt <= _AGREEMENT_TOL < rel_default:
        return "alternative"
    if rel_default * 10.0 <= rel_alt:
        return "default"
    if rel_alt * 10.0 <= rel_default:
        return "alternative"
    return "ambiguous"


def run_compare(config: RunConfig, oracle: str = "closed",
                grid_points: int = wavepacket.DEFAULT_GRID_POINTS,
                grid_steps: int = wavepacket.DEFAULT_GRID_STEPS) -> dict:
    """Analytic formulas against wave-packet oracles at a single time.

    The verdict states which orientation of the exact formula the oracle
    supports; 'default' is the one shipped as ``amp_exact``.
    """
    if oracle not in ("closed", "grid", "both"):
        raise ConfigError("oracle must be 'closed', 'grid' or 'both'")
    t_seconds, t_natural = _single_time(config)
    params = config.params()
    source = config.source()
    r = config.distance_natural()
    fast = config.fast_phase

    lead = analytic.amp_leading(params, source, r, t_natural, fast)
    amp_default = analytic.amp_exact(params, source, r, t_natural, fast)
    amp_alt = analytic.amp_exact_alt(params, source, r, t_natural, fast)
    pf = analytic.phase_functions(params, source, r, t_natural, fast)
    p_tran = analytic.transition_probability_from_phase(pf.f, pf.g)

    report: dict = {
        "config": _config_json(config),
        "T_seconds": t_seconds,
        "analytic": {
            "f_rad": pf.f,
            "g": pf.g,
            "beta": analytic.amplification_prefactor(params, t_natural),
            "amp_leading": _json_safe(lead.value),
            "leading_diverged": lead.diverged,
            "amp_exact": amp_default,
            "amp_exact_alt": amp_alt,
            "p_tran": p_tran,
            "surviving_atoms": analytic.surviving_atoms(params, p_tran),
        },
        "oracle": {},
        "agreement": {},
    }

    modes = {"closed": ["closed_form"], "grid": ["grid"],
             "both": ["closed_form", "grid"]}[oracle]
    verdict_rel: Optional[tuple[float, float]] = None
    for mode in modes:
        try:
            res = wavepacket.oracle_amplification(
                params, source, r, t_natural, mode=mode,
                include_fast_phase=fast, grid_points=grid_points,
                grid_steps=grid_steps)
        except GridUnrepresentableError as exc:
            if oracle == "grid":
                # Sole oracle requested and it cannot run: hard failure.
                raise
            report["oracle"][mode] = {"status": "not_representable",
                                      "reason": exc.reason}
            continue
        entry = {
            "status": "ok",
            "amplification": res.amplification,
            "norm": res.norm,
            "mean_m": res.mean * units.HBAR_C_EV_M,
            "variance_m2": res.variance * units.HBAR_C_EV_M ** 2,
            "backend": res.backend,
            "degenerate": res.degenerate,
        }
        report["oracle"][mode] = entry
        rel_default = _rel_diff(amp_default, res.amplification)
        rel_alt = _rel_diff(amp_alt, res.amplification)
        report["agreement"][mode] = {
            "rel_diff_exact": rel_default,
            "rel_diff_alt": rel_alt,
            "rel_diff_p_tran": _rel_diff(p_tran, res.norm),
        }
        if verdict_rel is None or mode == "closed_form":
            verdict_rel = (rel_default, rel_alt)
    report["sign_convention"] = ("undetermined" if verdict_rel is None
                                 else _verdict(*verdict_rel))
    return report


def _parse_complex_entry(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if (isinstance(obj, list) and len(obj) == 2
            and all(isinstance(v, (int, float)) for v in obj)):
        return complex(obj[0], obj[1])
    raise ConfigError("matrix/vector entries must be numbers or [re, im]")


def run_weakvalue(doc: dict) -> dict:
    """Weak value and optional pointer shift from a JSON request."""
    if not isinstance(doc, dict):
        raise ConfigError("weak-value input must be a JSON object")
    for key in ("observable", "psi_initial", "psi_final"):
        if key not in doc:
            raise ConfigError("weak-value input needs %r" % key)
    try:
        observable = [[_parse_complex_entry(e) for e in row]
                      for row in doc["observable"]]
        psi_i = [_parse_complex_entry(e) for e in doc["psi_initial"]]
        psi_f = [_parse_complex_entry(e) for e in doc["psi_final"]]
    except TypeError:
        raise ConfigError("observable must be a matrix and states vectors")
    try:
        wv = weakcore.weak_value(observable, psi_i, psi_f)
    except ValueError as exc:
        raise ConfigError(str(exc))
    out = {
        "weak_value": [wv.value.real, wv.value.imag],
        "overlap": [wv.overlap.real, wv.overlap.imag],
        "conditioning": wv.conditioning,
    }
    mode = doc.get("mode")
    if mode is not None:
        try:
            out["pointer_shift"] = weakcore.pointer_shift_leading(
                wv, mode, coupling=doc.get("coupling"), width=doc.get("width"))
        except ValueError as exc:
            raise ConfigError(str(exc))
        out["mode"] = mode
    return out


# ------------------------------------------------------------------- driver

def _read_text(path: str) -> str:
    try:
        with open(path, "r") as handle:
            return handle.read()
    except OSError as exc:
        raise ConfigError("cannot read %s: %s" % (path, exc))


def _load_config(args) -> RunConfig:
    config = parse_config(_read_text(args.config))
    if getattr(args, "fast_phase", None) is not None:
        config = dataclasses.replace(config,
                                     fast_phase=args.fast_phase == "on")
    if getattr(args, "T", None) is not None:
        value, unit = args.T
        time = _parse_time([value, unit])
        config = dataclasses.replace(config, time=time)
    return config


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _cmd_scan(args) -> str:
    result = run_scan(_load_config(args), workers=args.workers)
    if args.format == "json":
        return scan_to_json(result)
    return scan_to_csv(result)


def _cmd_point(args) -> str:
    return json.dumps(run_point(_load_config(args)), indent=2) + "\n"


def _cmd_compare(args) -> str:
    report = run_compare(_load_config(args), oracle=args.oracle,
                         grid_points=args.grid_points,
                         grid_steps=args.grid_steps)
    return json.dumps(report, indent=2) + "\n"


def _cmd_weakvalue(args) -> str:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        text = _read_text(args.input)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("invalid JSON: %s" % exc)
    return json.dumps(run_weakvalue(doc), indent=2) + "\n"


def _cmd_golden(args) -> str:
    if args.action != "regenerate":
        raise ConfigError("unknown golden action %r" % args.action)
    config = parse_config(_read_text(args.config))
    text = scan_to_csv(run_scan(config, workers=args.workers))
    parent = os.path.dirname(args.golden_output)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(args.golden_output, "w", newline="") as handle:
        handle.write(text)
    return "wrote %s\n" % args.golden_output


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravamp",
        description="Amplified gravitational pointer shifts for post-selected "
                    "atom ensembles.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="config file path")
        p.add_argument("--output", default=None, help="write here instead of stdout")
        p.add_argument("--fast-phase", dest="fast_phase",
                       choices=("on", "off"), default=None,
                       help="override the config's fast_phase switch")

    scan = sub.add_parser("scan", help="sweep T and tabulate the amplification")
    common(scan)
    scan.add_argument("--format", choices=("csv", "json"), default="csv")
    scan.add_argument("--workers", type=int, default=1,
                      help="worker threads (output is identical for any value)")
    scan.set_defaults(func=_cmd_scan)

    point = sub.add_parser("point", help="full report for a single T")
    common(point)
    point.add_argument("--T", nargs=2, metavar=("VALUE", "UNIT"), default=None,
                       help="override the config's T")
    point.set_defaults(func=_cmd_point)

    compare = sub.add_parser(
        "compare", help="check the formulas against wave-packet oracles")
    common(compare)
    compare.add_argument("--T", nargs=2, metavar=("VALUE", "UNIT"), default=None)
    compare.add_argument("--oracle", choices=("closed", "grid", "both"),
                         default="closed")
    compare.add_argument("--grid-points", type=int,
                         default=wavepacket.DEFAULT_GRID_POINTS)
    compare.add_argument("--grid-steps", type=int,
                         default=wavepacket.DEFAULT_GRID_STEPS)
    compare.set_defaults(func=_cmd_compare)

    weak = sub.add_parser("weakvalue", help="weak value from a JSON request")
    weak.add_argument("input", help="JSON file path, or - for stdin")
    weak.add_argument("--output", default=None)
    weak.set_defaults(func=_cmd_weakvalue)

    golden = sub.add_parser("golden", help="maintain golden outputs")
    golden.add_argument("action", choices=("regenerate",))
    golden.add_argument("--config", default="configs/benchmark.cfg")
    golden.add_argument("--output", dest="golden_output",
                        default="golden/benchmark_scan.csv")
    golden.add_argument("--workers", type=int, default=1)
    golden.set_defaults(func=_cmd_golden)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 1
    except PostSelectionSingular as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (GridEscapeError, PostSelectionExtinguished,
            GridUnrepresentableError) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3
    except ValueError as exc:
        print("invalid parameters: %s" % exc, file=sys.stderr)
        return 1
    _write_output(text, getattr(args, "output", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
