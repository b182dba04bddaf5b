"""Command-line front end.

    cornellqes mass-table [--species NAME] [--check]
    cornellqes energy   [params] [--level printed|termination]
    cornellqes scan     [params] --axis {a,b,B,nu} --range LO:HI:STEPS [--check-affine]
    cornellqes thermo   [params] (--T T | --T-range LO:HI:STEPS) [--method ...] [--theta --xi]
    cornellqes validate [params] [--T T] [--N N]

Parameters start from ``--preset`` (default charmonium), are overridden by a
``--config`` file, which is in turn overridden by explicit flags.

Exit codes: 0 success, 1 a requested check failed, 2 invalid input,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from cornellqes import audit, oracle, spectrum, thermo
from cornellqes.errors import CornellQESError, GridTooCoarse, NonConvergent
from cornellqes.model import FieldConfig, PhysParams, QuantumState, derive_scales, preset, preset_names

log = logging.getLogger("cornellqes")

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
MASS_TOL = 1e-6
METHODS = ("exact", "closed", "limit")

_FLOAT_KEYS = ("mu", "a", "b", "g", "B", "nu", "quark_mass", "T", "theta", "xi")
_INT_KEYS = ("n", "m", "N")
_STR_KEYS = ("preset", "species", "axis", "range", "T_range", "method", "level")
CONFIG_KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever ``sys.stderr`` is at emit time."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def _setup_logging(verbose: bool):
    if not any(isinstance(h, _StderrHandler) for h in log.handlers):
        h = _StderrHandler()
        h.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
        log.addHandler(h)
        log.propagate = False
    log.setLevel(logging.INFO if verbose else logging.WARNING)


class UsageError(CornellQESError):
    """Bad flag or config value (exit 2)."""


def fmt(x) -> str:
    """9 significant digits, scientific notation; ints and strings verbatim."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.8e}"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _finite_float(key, text):
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"{key}: not a number: {text!r}") from None
    if not math.isfinite(v):
        raise UsageError(f"{key}: must be finite, got {text!r}")
    return v


def _int(key, text):
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{key}: not an integer: {text!r}") from None


def convert(key: str, text: str):
    if key in _FLOAT_KEYS:
        return _finite_float(key, text)
    if key in _INT_KEYS:
        return _int(key, text)
    return text


def parse_config(path: str) -> dict:
    """Read ``key = value`` lines (UTF-8, ``#`` comments, last duplicate wins).

    Keys may use ``-`` or ``_``.  Raises :class:`UsageError` naming the line.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or not key or not value:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            parsed = convert(key, value)
        except UsageError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
        if key in out:
            log.warning("%s:%d: duplicate key %r, last value wins", path, lineno, key)
        out[key] = parsed
    _check_ranges(out, source=path)
    return out


def _check_ranges(values: dict, source: str):
    """Surface parameter invariants at parse time."""
    try:
        for key in ("mu", "a"):
            if key in values and not values[key] > 0:
                raise UsageError(f"{key} must be > 0, got {values[key]}")
        for key in ("b", "g", "B"):
            if key in values and values[key] < 0:
                raise UsageError(f"{key} must be >= 0, got {values[key]}")
        if "n" in values and values["n"] < 1:
            raise UsageError(f"n must be >= 1, got {values['n']}")
    except UsageError as exc:
        raise UsageError(f"{source}: {exc}") from None


@dataclass
class RunConfig:
    command: str
    params: PhysParams
    fields: FieldConfig
    n: int = 1
    m: int = 1
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def get(self, key, default=None):
        v = self.extra.get(key)
        return default if v is None else v


def parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be LO:HI:STEPS, got {text!r}")
    lo, hi = _finite_float("range", parts[0]), _finite_float("range", parts[1])
    steps = _int("range", parts[2])
    if not lo < hi:
        raise UsageError(f"range needs LO < HI, got {text!r}")
    if steps < 2:
        raise UsageError(f"range needs STEPS >= 2, got {text!r}")
    return lo, hi, steps


def build_config(args: argparse.Namespace) -> RunConfig:
    values = parse_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    _check_ranges(values, source="flags")
    name = values.get("preset", "charmonium")
    base, fields = preset(name)
    pkw = {k: values[k] for k in ("mu", "a", "b", "g", "quark_mass") if k in values}
    params = base.replace(**pkw)
    fields = fields.replace(**{k: values[k] for k in ("B", "nu") if k in values})
    n, m = values.get("n", 1), values.get("m", 1)
    QuantumState(n, m)
    extra = {k: v for k, v in values.items() if k not in ("mu", "a", "b", "g", "quark_mass", "B", "nu", "n", "m")}
    return RunConfig(args.command, params, fields, n, m, args.out, extra)


# ------------------------------------------------------------------ commands


def cmd_mass_table(cfg: RunConfig) -> tuple[str, int]:
    species = cfg.get("species")
    rows = spectrum.mass_table(species)
    if species is not None and not rows:
        raise UsageError(f"unknown species {species!r}; choose from {preset_names()}")
    text = to_csv(
        ("species", "n", "m", "B", "nu", "g", "E", "M"),
        [(r.species, r.n, r.m, r.B, r.nu, r.g, r.E, r.M) for r in rows],
    )
    code = EXIT_OK
    if cfg.get("check"):
        ref = {(d["species"], d["n"], d["m"], d["B"]): d["M"] for d in spectrum.mass_table_reference()}
        for r in rows:
            M_ref = ref[(r.species, r.n, r.m, r.B)]
            rel = abs(r.M - M_ref) / abs(M_ref)
            if rel > MASS_TOL:
                log.error("mass mismatch %s n=%d m=%d B=%g: %.10g vs %.10g (rel %.2e)", r.species, r.n, r.m, r.B, r.M, M_ref, rel)
                code = EXIT_CHECK
    return text, code


def cmd_energy(cfg: RunConfig) -> tuple[str, int]:
    level = cfg.get("level", "printed")
    if level == "printed":
        res = spectrum.energy(cfg.params, cfg.fields, cfg.n, cfg.m)
    else:
        res = spectrum.energy_termination(cfg.params, cfg.fields, cfg.n, cfg.m)
    M = 2.0 * cfg.params.quark_mass + res.E if cfg.params.quark_mass is not None else math.nan
    return to_csv(("n", "m", "E", "M"), [(cfg.n, cfg.m, res.E, M)]), EXIT_OK


def _is_affine(xs, ys, rtol=1e-9) -> bool:
    xs, ys = np.asarray(xs), np.asarray(ys)
    coef = np.polyfit(xs, ys, 1)
    resid = ys - np.polyval(coef, xs)
    return bool(np.max(np.abs(resid)) <= rtol * max(1.0, np.max(np.abs(ys))))


def cmd_scan(cfg: RunConfig) -> tuple[str, int]:
    axis = cfg.get("axis")
    if axis not in spectrum.SCAN_AXES:
        raise UsageError(f"--axis must be one of {spectrum.SCAN_AXES}, got {axis!r}")
    if cfg.get("range") is None:
        raise UsageError("scan needs --range LO:HI:STEPS")
    lo, hi, steps = parse_range(cfg.get("range"))
    rows = spectrum.scan_energy(cfg.params, cfg.fields, cfg.n, cfg.m, axis, lo, hi, steps)
    for r in rows:
        if not r.valid:
            log.warning("scan point %s=%g is outside the model's domain", axis, r.x)
    code = EXIT_OK
    if cfg.get("check_affine"):
        good = [r for r in rows if r.valid]
        if len(good) < 2 or not _is_affine([r.x for r in good], [r.E for r in good]):
            log.error("E is not affine in %s over the scanned range", axis)
            code = EXIT_CHECK
    return to_csv(("x", "E"), [(r.x, r.E) for r in rows]), code


def _temperatures(cfg: RunConfig) -> np.ndarray:
    if cfg.get("T_range") is not None:
        lo, hi, steps = parse_range(cfg.get("T_range"))
        Ts = np.linspace(lo, hi, steps)
    elif cfg.get("T") is not None:
        Ts = np.array([cfg.get("T")])
    else:
        raise UsageError("thermo needs --T or --T-range")
    if np.any(Ts <= 0):
        raise UsageError("temperatures must be > 0")
    return Ts


def cmd_thermo(cfg: RunConfig) -> tuple[str, int]:
    method = cfg.get("method", "closed")
    methods = METHODS if method == "all" else (method,)
    if any(mt not in METHODS for mt in methods):
        raise UsageError(f"--method must be one of {METHODS + ('all',)}, got {method!r}")
    theta, xi = cfg.get("theta"), cfg.get("xi")
    ladder = None
    if (theta is None) != (xi is None):
        raise UsageError("--theta and --xi go together")
    if theta is not None:
        if not theta > 0:
            raise UsageError("--theta must be > 0")
        ladder = thermo.Ladder(theta, xi)
    rows = []
    for T in _temperatures(cfg):
        T = float(T)
        for mt in methods:
            try:
                if mt == "exact":
                    p = thermo.thermo_exact_ladder(ladder, T) if ladder else thermo.thermo_exact(cfg.params, cfg.fields, cfg.m, T)
                elif mt == "closed":
                    p = thermo.thermo_closed_ladder(ladder, T) if ladder else thermo.thermo_closed(cfg.params, cfg.fields, cfg.m, T)
                else:
                    lad = ladder or thermo.ladder_of(derive_scales(cfg.params, cfg.fields, cfg.m))
                    p = thermo.limit_small(lad, 1.0 / T)
                rows.append((p.T, p.G, p.U, p.C_V, p.F, p.S, p.I, p.M, mt))
            except NonConvergent as exc:
                log.warning("T=%g method=%s: %s", T, mt, exc)
                rows.append((T,) + (math.nan,) * 7 + (mt,))
    return to_csv(("T", "G", "U", "Cv", "F", "S", "I", "M", "method"), rows), EXIT_OK


def cmd_validate(cfg: RunConfig) -> tuple[str, int]:
    """Text report on stdout; audit table as CSV to ``--out`` when given."""
    T = cfg.get("T", 1.0)
    N = cfg.get("N", 4000)
    report = oracle.validate_quasi_exact(cfg.params, cfg.fields, cfg.n, cfg.m, N=N)
    entries = audit.full_audit(cfg.params, cfg.fields, cfg.n, cfg.m, T)
    lines = [
        f"quasi-exact check  n={cfg.n} m={cfg.m} B={cfg.fields.B:g} nu={cfg.fields.nu:g}",
        f"  constraint g      {fmt(report.constraint_g)}",
        f"  printed level     {fmt(report.printed_E)}",
        f"  termination level {fmt(report.termination_E)}",
        "  branch                  g                closed E         extrapolated E   richardson err   gap              residual         nodes(a/n)",
    ]
    for b in report.branches:
        nodes = f"{'-' if b.analytic_nodes is None else b.analytic_nodes}/{b.numeric_nodes}"
        lines.append(
            f"  {b.label:22s}  {fmt(b.g):15s}  {fmt(b.closed_form_E):15s}  {fmt(b.extrapolated_E):15s}  "
            f"{fmt(b.richardson_error):15s}  {fmt(b.abs_gap):15s}  {fmt(b.residual_norm):15s}  {nodes}"
        )
    lines.append(f"audit  T={T:g}")
    lines.append("  key                                       printed          reference        rel diff")
    for e in entries:
        lines.append(f"  {e.key:40s}  {fmt(e.printed):15s}  {fmt(e.reference):15s}  {fmt(e.rel_diff)}")
    text = "\n".join(lines) + "\n"
    csv_text = to_csv(
        ("key", "printed", "reference", "abs_diff", "rel_diff", "description"),
        [(e.key, e.printed, e.reference, e.abs_diff, e.rel_diff, e.description) for e in entries],
    )
    if cfg.out:
        sys.stdout.write(text)
        return csv_text, EXIT_OK
    return text, EXIT_OK


COMMANDS = {
    "mass-table": cmd_mass_table,
    "energy": cmd_energy,
    "scan": cmd_scan,
    "thermo": cmd_thermo,
    "validate": cmd_validate,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _finite(text):
    try:
        return _finite_float("value", text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("model parameters")
    g.add_argument("--preset", choices=preset_names(), default=None, help="starting parameter set (default charmonium)")
    g.add_argument("--mu", type=_finite, help="reduced mass")
    g.add_argument("--a", type=_finite, help="harmonic strength")
    g.add_argument("--b", type=_finite, help="linear strength")
    g.add_argument("--g", type=_finite, help="Coulomb strength")
    g.add_argument("--B", type=_finite, help="magnetic field (mu * omega_c)")
    g.add_argument("--nu", type=_finite, help="AB flux in units of the flux quantum")
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--quark-mass", dest="quark_mass", type=_finite)
    common.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    common.add_argument("--config", metavar="PATH", help="key = value parameter file")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="cornellqes", description="Cornell-plus-harmonic quantum dot in B and AB flux.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mass-table", parents=[common], help="heavy-quarkonium mass table")
    p.add_argument("--species", help="charmonium or bottomonium")
    p.add_argument("--check", action="store_true", help=f"exit 1 unless masses match the stored table to {MASS_TOL:g}")

    p = sub.add_parser("energy", parents=[common], help="single level")
    p.add_argument("--level", choices=("printed", "termination"))

    p = sub.add_parser("scan", parents=[common], help="level along one parameter")
    p.add_argument("--axis", choices=spectrum.SCAN_AXES)
    p.add_argument("--range", metavar="LO:HI:STEPS")
    p.add_argument("--check-affine", action="store_true", help="exit 1 unless E is affine in the scanned parameter")

    p = sub.add_parser("thermo", parents=[common], help="thermodynamic functions")
    p.add_argument("--T", type=_finite)
    p.add_argument("--T-range", dest="T_range", metavar="LO:HI:STEPS")
    p.add_argument("--method", choices=METHODS + ("all",))
    p.add_argument("--theta", type=_finite, help="ladder spacing (with --xi, bypasses the model)")
    p.add_argument("--xi", type=_finite, help="ladder offset")

    p = sub.add_parser("validate", parents=[common], help="oracle comparison and audit table")
    p.add_argument("--T", type=_finite, help="temperature for the thermodynamic audit (default 1)")
    p.add_argument("--N", type=int, help="grid points for the eigensolver (default 4000)")
    return parser


def main(argv=None) -> int:
    _setup_logging(verbose=False)
    try:
        args = build_parser().parse_args(argv)
        _setup_logging(args.verbose)
        cfg = build_config(args)
        for flag in ("check", "check_affine"):
            if getattr(args, flag, False):
                cfg.extra[flag] = True
        text, code = COMMANDS[args.command](cfg)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except (NonConvergent, GridTooCoarse) as exc:
        log.error("not converged: %s", exc)
        return EXIT_NUMERIC
    except (CornellQESError, ValueError, KeyError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INPUT
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            log.error("cannot write %s: %s", cfg.out, exc)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
