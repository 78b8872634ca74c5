"""gaussmode command line.

Subcommands: point, sweep, phase, te, check.  Data goes to stdout as CSV
(default), a JSON object or NDJSON; diagnostics go to stderr.

Exit codes: 0 success, 1 oracle check failure, 2 point outside a stable
sector, 64 usage error, 65 invalid sweep or grid specification.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import GaussModeError, OutOfSector, SpecInvalid, ThermalUndefined
from .model import (
    ModelParams,
    SectorTag,
    View,
    _boundaries,
    classify_sector,
    sector_from_boundaries,
)
from .oracle import FockConfig, PanelRow, compare_panel, extended_panel, standard_panel
from .report import analyze
from .thermo import (
    OUTPUTS,
    SweepSpec,
    limit_temperature,
    parallel_map,
    run_sweep,
)

EX_OK, EX_CHECK, EX_SECTOR, EX_USAGE, EX_DATAERR = 0, 1, 2, 64, 65

_LN2 = math.log(2.0)
_ENTROPIC = {"S_x", "S_y", "D_x", "D_y"}

POINT_COLUMNS = (
    "view", "kx", "ky", "omega", "temperature", "sector", "near_boundary",
    "f_x", "f_y", "fp_plus", "fp_minus", "ft_plus", "ft_minus",
    "S_x", "S_y", "N", "D_x", "D_y", "Lz", "omega_bar", "omega_bar_g", "T_E", "error",
)
PHASE_COLUMNS = (
    "ratio", "omega_scaled", "kx", "ky", "omega", "sector", "closed_sector",
    "near_boundary", "omega_c", "omega_c1", "omega_c2", "omega_c3", "omega_low",
)
TE_COLUMNS = ("ratio", "omega", "sector", "T_E", "exact_zero")
CHECK_COLUMNS = (
    "view", "kx", "ky", "omega", "temperature",
    "err_S_x", "err_S_y", "err_N", "err_Lz", "err_E0", "pass",
)
LZ_COLUMNS = ("omega", "Lz", "S_x", "S_y")

# a phase cell closer than this to a closed-form boundary is flagged
PHASE_EDGE_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- formatting


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def _jsonable(value):
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, np.bool_):
        return bool(value)
    return value


class Emitter:
    """Serialises rows with a fixed column set per command."""

    def __init__(self, args, columns, stream):
        self.fmt = "ndjson" if args.ndjson else args.format
        self.header = not args.no_header
        self.bits = args.bits
        self.columns = tuple(columns)
        self.stream = stream
        self.command = " ".join(["gaussmode", *args.argv])

    def _meta(self):
        return {
            "version": __version__,
            "command": self.command,
            "units": "dimensionless, hbar = Omega_0 = 1; entropies in " + ("bits" if self.bits else "nats"),
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        }

    def _convert(self, row):
        out = {}
        for c in self.columns:
            v = row.get(c)
            if self.bits and c in _ENTROPIC and v is not None:
                v = v / _LN2
            out[c] = v
        return out

    def emit(self, rows):
        rows = [self._convert(r) for r in rows]
        w = self.stream
        if self.fmt == "csv":
            if self.header:
                for k, v in self._meta().items():
                    w.write(f"# {k}: {v}\n")
            writer = csv.writer(w, lineterminator="\n")
            writer.writerow(self.columns)
            for r in rows:
                writer.writerow([_fmt(r[c]) for c in self.columns])
        elif self.fmt == "json":
            doc = {"meta": self._meta()} if self.header else {}
            doc["columns"] = list(self.columns)
            doc["rows"] = [{c: _jsonable(r[c]) for c in self.columns} for r in rows]
            w.write(json.dumps(doc, allow_nan=False) + "\n")
        else:
            if self.header:
                w.write(json.dumps({"meta": self._meta()}) + "\n")
            for r in rows:
                w.write(json.dumps({c: _jsonable(r[c]) for c in self.columns}, allow_nan=False) + "\n")


# ---------------------------------------------------------------- commands


def _params(args, **override) -> ModelParams:
    vals = {"kx": args.kx, "ky": args.ky, "omega": args.omega, "temperature": args.temp}
    vals.update(override)
    return ModelParams(View(args.view), float(vals["kx"]), float(vals["ky"]),
                       float(vals["omega"]), float(vals["temperature"]))


def point_row(params: ModelParams) -> tuple[dict, int]:
    """Row for ``point`` and the exit code it implies."""
    row = {c: None for c in POINT_COLUMNS}
    row.update(view=params.view.value, kx=params.kx, ky=params.ky,
               omega=params.omega, temperature=params.temperature)
    cls = classify_sector(params)
    row["sector"] = cls.tag.value
    row["near_boundary"] = cls.near_boundary
    try:
        rep = analyze(params)
    except (OutOfSector, ThermalUndefined) as exc:
        row["error"] = type(exc).__name__
        return row, EX_SECTOR
    d = rep.as_dict()
    for c in POINT_COLUMNS[5:-2]:
        v = d.get(c)
        row[c] = None if isinstance(v, float) and math.isnan(v) else v
    if rep.sector is SectorTag.A:
        row["T_E"] = limit_temperature(params.with_temperature(0.0)).t_e
    return row, EX_OK


def cmd_point(args, out) -> int:
    params = _params(args)
    row, code = point_row(params)
    Emitter(args, POINT_COLUMNS, out).emit([row])
    if code:
        print(f"gaussmode: {row['error']}: sector {row['sector']}", file=sys.stderr)
    return code


def _split_outputs(text):
    return tuple(s.strip() for s in text.split(",") if s.strip())


def cmd_sweep(args, out) -> int:
    base = _params(args)
    if args.axis == "lz":
        spec = SweepSpec("omega", args.from_, args.to, args.samples, base, ("Lz", "S"), args.log)
        rows = run_sweep(spec)
        Emitter(args, LZ_COLUMNS, out).emit(rows)
        return EX_OK
    outputs = _split_outputs(args.outputs) if args.outputs is not None else OUTPUTS
    spec = SweepSpec(args.axis, args.from_, args.to, args.samples, base, outputs, args.log)
    Emitter(args, spec.columns(), out).emit(run_sweep(spec))
    return EX_OK


def _grid(lo, hi, n, what):
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo or (n > 1 and hi == lo):
        raise SpecInvalid(f"bad {what} grid [{lo}, {hi}] x {n}")
    return np.linspace(lo, hi, n)


def phase_cell(view: View, kx_scale: float, ratio: float, omega_scaled: float) -> dict:
    """Sector of one phase-diagram cell.

    FIXED_K: k_x = sign(ratio) |k_x|, k_y = ratio |k_x|, omega in units of
    sqrt|k_x|.  FIXED_KPRIME: k'_x = |k'_x| > 0, k'_y = ratio k'_x, omega in
    units of sqrt(k'_x).
    """
    scale = abs(kx_scale)
    if scale == 0:
        raise SpecInvalid("kx scale must be nonzero")
    if view is View.FIXED_K:
        kx = math.copysign(scale, ratio) if ratio != 0 else scale
    else:
        kx = scale
    ky = ratio * scale
    omega = omega_scaled * math.sqrt(scale)
    params = ModelParams(view, kx, ky, omega)
    cls = classify_sector(params)
    b = _boundaries(kx, ky, view)
    edges = [v for v in (b.omega_c, b.omega_c1, b.omega_c2, b.omega_c3, b.omega_low)
             if v is not None and math.isfinite(v)]
    critical_ratios = (0.0,) if view is View.FIXED_K else (0.0, 1.0, -1.0, -3.0)
    near = (
        cls.near_boundary
        or any(abs(omega - e) <= PHASE_EDGE_TOL * max(1.0, e) for e in edges)
        or any(abs(ratio - r) <= PHASE_EDGE_TOL for r in critical_ratios)
        or omega == 0
    )
    return {
        "ratio": ratio, "omega_scaled": omega_scaled, "kx": kx, "ky": ky, "omega": omega,
        "sector": cls.tag.value, "closed_sector": sector_from_boundaries(params).value,
        "near_boundary": near,
        "omega_c": b.omega_c, "omega_c1": b.omega_c1, "omega_c2": b.omega_c2,
        "omega_c3": b.omega_c3, "omega_low": b.omega_low,
    }


def phase_rows(view: View, kx_scale, ratios, omegas) -> list[dict]:
    cells = [(float(r), float(w)) for r in ratios for w in omegas]
    return parallel_map(lambda c: phase_cell(view, kx_scale, *c), cells)


def cmd_phase(args, out) -> int:
    ratios = _grid(args.ratio_from, args.ratio_to, args.ratio_samples, "ratio")
    omegas = _grid(args.omega_from, args.omega_to, args.omega_samples, "omega")
    if omegas[0] < 0:
        raise SpecInvalid("omega grid must be >= 0")
    rows = phase_rows(View(args.view), args.kx, ratios, omegas)
    Emitter(args, PHASE_COLUMNS, out).emit(rows)
    return EX_OK


def te_rows(view: View, kx: float, ratios, omegas) -> list[dict]:
    def cell(c):
        ratio, w = c
        params = ModelParams(view, kx, ratio * kx, w)
        tag = classify_sector(params).tag
        row = {"ratio": ratio, "omega": w, "sector": tag.value, "T_E": None, "exact_zero": None}
        if tag is SectorTag.A:
            lt = limit_temperature(params)
            row["T_E"], row["exact_zero"] = lt.t_e, lt.exact_zero
        return row

    return parallel_map(cell, [(float(r), float(w)) for r in ratios for w in omegas])


def cmd_te(args, out) -> int:
    if args.ratios:
        try:
            ratios = [float(s) for s in _split_outputs(args.ratios)]
        except ValueError as exc:
            raise SpecInvalid(f"bad ratio list: {exc}") from None
    else:
        ratios = [args.ky / args.kx] if args.kx else []
    if not ratios:
        raise SpecInvalid("no ratios")
    if args.log:
        if args.from_ <= 0:
            raise SpecInvalid("log grid needs from > 0")
        omegas = np.geomspace(args.from_, args.to, args.samples)
    else:
        omegas = _grid(args.from_, args.to, args.samples, "omega")
    Emitter(args, TE_COLUMNS, out).emit(te_rows(View(args.view), args.kx, ratios, omegas))
    return EX_OK


def check_rows(panel: str, n_max: int, tol: float) -> tuple[list[dict], bool]:
    points = standard_panel() if panel == "standard" else extended_panel()
    results: list[PanelRow] = compare_panel(points, FockConfig(n_max))
    rows, ok = [], True
    for r in results:
        p = r.params
        errs = r.errors
        passed = max(errs) <= tol
        ok &= passed
        rows.append(dict(zip(CHECK_COLUMNS, (p.view.value, p.kx, p.ky, p.omega, p.temperature,
                                             *errs, passed))))
    return rows, ok


def cmd_check(args, out) -> int:
    rows, ok = check_rows(args.panel, args.nmax, args.tol)
    Emitter(args, CHECK_COLUMNS, out).emit(rows)
    if not ok:
        print("gaussmode: oracle check failed", file=sys.stderr)
    return EX_OK if ok else EX_CHECK


# ---------------------------------------------------------------- parsing


def _common(p: argparse.ArgumentParser, kx=1.0, ky=0.25, omega=1.0):
    p.add_argument("--view", choices=[v.value for v in View], default=View.FIXED_K.value)
    p.add_argument("--kx", type=float, default=kx)
    p.add_argument("--ky", type=float, default=ky)
    p.add_argument("--omega", type=float, default=omega)
    p.add_argument("--temp", type=float, default=0.0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--ndjson", action="store_true", help="one JSON object per line")
    p.add_argument("--no-header", action="store_true", help="omit provenance lines")
    p.add_argument("--bits", action="store_true", help="entropies and discords in bits")
    p.add_argument("--config", metavar="PATH", help="key=value file of long options")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaussmode", description="Gaussian entanglement of two rotating modes.")
    parser.add_argument("--version", action="version", version=f"gaussmode {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", help="every measure at one parameter point")
    _common(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="measures along one axis")
    _common(p)
    p.add_argument("--axis", choices=("omega", "temperature", "ky_ratio", "lz"), default="omega")
    p.add_argument("--from", dest="from_", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--log", action="store_true", help="geometric grid")
    p.add_argument("--outputs", help="comma list from " + ",".join(OUTPUTS))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("phase", help="stability sector map")
    _common(p)
    p.add_argument("--ratio-from", type=float, default=-4.0)
    p.add_argument("--ratio-to", type=float, default=2.0)
    p.add_argument("--ratio-samples", type=int, default=61)
    p.add_argument("--omega-from", type=float, default=0.0)
    p.add_argument("--omega-to", type=float, default=3.0)
    p.add_argument("--omega-samples", type=int, default=61)
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("te", help="limit temperature versus omega")
    _common(p)
    p.add_argument("--ratios", help="comma list of k_y/k_x values")
    p.add_argument("--from", dest="from_", type=float, default=0.01)
    p.add_argument("--to", type=float, default=3.0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--log", action="store_true")
    p.set_defaults(func=cmd_te)

    p = sub.add_parser("check", help="compare gaussian and Fock routes")
    _common(p)
    p.add_argument("--nmax", type=int, default=40)
    p.add_argument("--panel", choices=("standard", "extended"), default="standard")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_check)
    return parser


def _config_tokens(path: str) -> list[str]:
    tokens = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            flag = "--" + key.replace("_", "-") if key != "from" else "--from"
            low = value.lower()
            if low in ("true", "yes", "on"):
                tokens.append(flag)
            elif low in ("false", "no", "off"):
                continue
            else:
                tokens.append(f"{flag}={value}")
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    """Insert config-file options right after the subcommand so that
    explicit flags, parsed later, override them."""
    for i, tok in enumerate(argv):
        path = None
        if tok == "--config" and i + 1 < len(argv):
            path, rest = argv[i + 1], argv[:i] + argv[i + 2:]
        elif tok.startswith("--config="):
            path, rest = tok.split("=", 1)[1], argv[:i] + argv[i + 1:]
        if path is not None:
            try:
                extra = _config_tokens(path)
            except OSError as exc:
                raise UsageError(f"cannot read config: {exc}") from None
            return rest[:1] + extra + rest[1:]
    return argv


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    try:
        expanded = _expand_config(argv)
        args = build_parser().parse_args(expanded)
    except UsageError as exc:
        print(f"gaussmode: usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    args.argv = argv
    try:
        return args.func(args, out)
    except SpecInvalid as exc:
        print(f"gaussmode: invalid specification: {exc}", file=sys.stderr)
        return EX_DATAERR
    except ValueError as exc:
        print(f"gaussmode: usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except GaussModeError as exc:
        print(f"gaussmode: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_SECTOR


def run(argv) -> tuple[int, str]:
    """Invoke ``main`` capturing stdout; convenience for tests and notebooks."""
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
