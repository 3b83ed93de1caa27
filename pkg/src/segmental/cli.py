"""Command-line experiments: interpolants, Lebesgue sweeps, basis plots.

Every command writes CSV files into ``--out``; ``--svg`` adds a polyline
plot of the same series.  Exit codes: 0 ok, 1 some rows failed, 2 bad
arguments.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import svg
from .basis import nodal_interpolant
from .conditioning import (
    chebyshev_nodes,
    full_report,
    lebesgue_constant,
    nodal_lebesgue_constant,
    operator_norm,
)
from .errors import EvaluationError, SingularSystem
from .interpolation import interpolate, lagrange_basis, segment_integrals
from .quadrature import MeasurementVector, gauss_legendre, measure_vector
from .segments import (
    SegmentSet,
    cl_arc_midpoints,
    make_arc_uniform,
    make_chebyshev_lobatto,
    make_cl_overlapping,
    make_equidistant,
    parse_segments_csv,
)

FAMILIES = ("eq", "cl", "clo", "arc")
NODAL_LIMIT_LAMBDA = 1e-6


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Preset:
    func: Callable
    quad_n: int = 64
    panels: int = 1


def _poly_preset(text: str) -> Preset:
    try:
        coeffs = [float(c) for c in text.split(",") if c.strip()]
    except ValueError:
        raise UsageError(f"bad polynomial coefficients {text!r}") from None
    if not coeffs:
        raise UsageError("poly: needs at least one coefficient")
    c = np.array(coeffs)
    return Preset(lambda x: np.polynomial.polynomial.polyval(x, c))


PRESETS = {
    "runge10": Preset(lambda x: 1.0 / (1.0 + 10.0 * x * x)),
    "cospi": Preset(lambda x: np.cos(np.pi * x)),
    "sinpi": Preset(lambda x: np.sin(np.pi * x)),
    "abs": Preset(np.abs, quad_n=16, panels=32),
    "step": Preset(np.sign, quad_n=16, panels=32),
}


def get_preset(name: str) -> Preset:
    if name.startswith("poly:"):
        return _poly_preset(name[5:])
    try:
        return PRESETS[name]
    except KeyError:
        raise UsageError(f"unknown function preset {name!r}; choose from "
                         f"{', '.join(sorted(PRESETS))} or poly:c0,c1,...") from None


def arc_family(r: int, lam: float) -> SegmentSet:
    """CL arc midpoints with arc radius lam * pi / r."""
    taus = np.sort(cl_arc_midpoints(r))
    return make_arc_uniform(taus, lam * math.pi / r, allow_wrap=True)


def make_family(family: str, r: int, lam: float = 0.5) -> SegmentSet:
    if family == "eq":
        return make_equidistant(r)
    if family == "cl":
        return make_chebyshev_lobatto(r)
    if family == "clo":
        return make_cl_overlapping(r)
    if family == "arc":
        return arc_family(r, lam)
    raise UsageError(f"unknown family {family!r}")


@dataclass
class ExperimentConfig:
    command: str
    family: str = "cl"
    r: int = 5
    r_min: int = 2
    r_max: int = 20
    lambdas: tuple = (0.5,)
    fn: str = "runge10"
    grid: int = 1001
    out: Path = Path(".")
    svg: bool = False
    segments_file: Optional[Path] = None
    mu_file: Optional[Path] = None
    quad_n: Optional[int] = None
    quad_panels: Optional[int] = None
    indices: tuple = (1,)
    files: list = field(default_factory=list)

    def validate(self):
        if self.family not in FAMILIES:
            raise UsageError(f"family must be one of {FAMILIES}")
        if self.r < 1 or self.r_min < 1 or self.r_max < self.r_min:
            raise UsageError("need r >= 1 and 1 <= r-min <= r-max")
        if any(not 0.0 < lam < 1.0 for lam in self.lambdas):
            raise UsageError("lambda values must lie in (0, 1)")
        if self.grid < 2:
            raise UsageError("grid needs at least 2 points")


def _write_csv(cfg: ExperimentConfig, name: str, header: Sequence[str], rows) -> Path:
    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / name
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])
    cfg.files.append(path)
    return path


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return v


def _write_svg(cfg: ExperimentConfig, name: str, x, series: dict, log_y: bool = False, title: str = ""):
    if not cfg.svg:
        return
    path = cfg.out / name
    path.write_text(svg.polyline_plot(x, series, log_y=log_y, title=title))
    cfg.files.append(path)


def _quad_for(cfg: ExperimentConfig, preset: Preset):
    n = cfg.quad_n or preset.quad_n
    panels = cfg.quad_panels or preset.panels
    return gauss_legendre(n), panels


def _problem(cfg: ExperimentConfig):
    if cfg.segments_file:
        segset = parse_segments_csv(Path(cfg.segments_file).read_text())
    else:
        segset = make_family(cfg.family, cfg.r, cfg.lambdas[0])
    preset = None
    if cfg.mu_file:
        mu = MeasurementVector.from_csv(Path(cfg.mu_file).read_text())
    else:
        preset = get_preset(cfg.fn)
        rule, panels = _quad_for(cfg, preset)
        mu = measure_vector(preset.func, segset, rule, panels)
    return segset, mu, preset


def cmd_interp(cfg: ExperimentConfig) -> int:
    segset, mu, preset = _problem(cfg)
    interp = interpolate(segset, mu)
    lo, hi = segset.interval
    x = np.linspace(lo, hi, cfg.grid)
    p = interp(x)
    fx = preset.func(x) if preset else None
    rows = [(xi, pi, None if fx is None else fi) for xi, pi, fi in
            zip(x, p, fx if fx is not None else [None] * x.size)]
    _write_csv(cfg, "interpolant.csv", ["x", "p", "f"], rows)
    _write_csv(cfg, "segments.csv", ["i", "alpha", "beta"],
               [(i, s.alpha, s.beta) for i, s in enumerate(segset.segments, start=1)])
    (cfg.out / "coefficients.csv").write_text(interp.to_csv())
    cfg.files.append(cfg.out / "coefficients.csv")
    series = {"p": p}
    if fx is not None:
        series["f"] = fx
    _write_svg(cfg, "interpolant.svg", x, series, title=f"{cfg.family} r={segset.r}")
    d = interp.diagnostics
    msg = f"path={d.path} cond={d.cond_estimate:.3e} residual={d.residual_inf:.3e}"
    if fx is not None:
        msg += f" max|p-f|={float(np.max(np.abs(p - fx))):.6e}"
    print(msg)
    return 0


def _nodal_reference(segset: SegmentSet) -> Optional[float]:
    if segset.family in ("eq", "cl"):
        return nodal_lebesgue_constant(segset.chain_nodes(), segset.interval)
    if segset.family == "clo":
        return nodal_lebesgue_constant(np.concatenate([[-1.0], segset.betas]))
    return None


def cmd_lebesgue_sweep(cfg: ExperimentConfig) -> int:
    report_rows, summary, failed = [], [], False
    for r in range(cfg.r_min, cfg.r_max + 1):
        try:
            segset = make_family(cfg.family, r, cfg.lambdas[0])
            rep = full_report(segset)
            report_rows.extend(rep.csv_rows())
            summary.append((r, rep.lambda_const, rep.op_norm, _nodal_reference(segset),
                            rep.lambda_const / (math.log(r) + math.pi / 2), "ok"))
        except (SingularSystem, ValueError) as exc:
            failed = True
            report_rows.append([r, None, None, None, None, "error", None, None])
            summary.append((r, None, None, None, None, f"error: {type(exc).__name__}"))
    _write_csv(cfg, "lebesgue.csv", ["r", "lambda", "argmax", "opnorm", "h", "bound_name", "lower", "upper"],
               report_rows)
    _write_csv(cfg, "lebesgue_summary.csv",
               ["r", "lambda", "opnorm", "nodal_lambda_r_plus_1", "lambda_over_log", "status"], summary)
    ok = [row for row in summary if row[-1] == "ok"]
    if ok:
        series = {"segmental": [row[1] for row in ok]}
        if all(row[3] is not None for row in ok):
            series["nodal"] = [row[3] for row in ok]
        _write_svg(cfg, "lebesgue.svg", [row[0] for row in ok], series, log_y=True,
                   title=f"Lebesgue constants ({cfg.family})")
    return 1 if failed else 0


def cmd_c2_sweep(cfg: ExperimentConfig) -> int:
    lambdas = sorted(set(cfg.lambdas))
    header = ["r"] + [f"lambda_{lam!r}" for lam in lambdas] + ["nodal_surrogate", "nodal_chebyshev"]
    rows, failed = [], False
    for r in range(cfg.r_min, cfg.r_max + 1):
        row = [r]
        for lam in lambdas + [NODAL_LIMIT_LAMBDA]:
            try:
                row.append(lebesgue_constant(arc_family(r, lam)).value)
            except (SingularSystem, ValueError) as exc:
                failed = True
                row.append(f"error:{type(exc).__name__}")
        row.append(nodal_lebesgue_constant(chebyshev_nodes(r)))
        rows.append(row)
    _write_csv(cfg, "c2_sweep.csv", header, rows)
    if cfg.svg:
        rs = [row[0] for row in rows]
        series = {}
        for k, name in enumerate(header[1:], start=1):
            col = [row[k] for row in rows]
            if all(isinstance(v, float) for v in col):
                series[name] = col
        _write_svg(cfg, "c2_sweep.svg", rs, series, title="arc-uniform Lebesgue constants")
    return 1 if failed else 0


def cmd_clo_gap(cfg: ExperimentConfig) -> int:
    rows = []
    for r in range(cfg.r_min, cfg.r_max + 1):
        clo = make_cl_overlapping(r)
        basis = lagrange_basis(clo)
        lam = lebesgue_constant(clo, basis=basis).value
        op = operator_norm(clo, basis=basis).value
        cl_op = operator_norm(make_chebyshev_lobatto(r)).value
        rows.append((r, lam, op, lam - op, cl_op))
    _write_csv(cfg, "clo_gap.csv", ["r", "lambda_clo", "opnorm_clo", "gap", "opnorm_cl"], rows)
    _write_svg(cfg, "clo_gap.svg", [row[0] for row in rows],
               {"lambda_clo": [row[1] for row in rows], "opnorm_clo": [row[2] for row in rows]},
               log_y=True, title="CLO: Lebesgue constant vs operator norm")
    return 0


def runge_curves(r: int, x: np.ndarray) -> dict:
    """Segmental and nodal interpolants of 1/(1+10x^2) on equidistant and CL/Chebyshev data."""
    f = PRESETS["runge10"].func
    rule = gauss_legendre(64)
    out = {"f": f(x)}
    for name, segset in (("seg_eq", make_equidistant(r)), ("seg_cl", make_chebyshev_lobatto(r))):
        out[name] = interpolate(segset, measure_vector(f, segset, rule))(x)
    for name, nodes in (("nodal_eq", np.linspace(-1.0, 1.0, r)), ("nodal_cheb", chebyshev_nodes(r))):
        out[name] = nodal_interpolant(nodes, f(nodes))(x)
    return out


def cmd_runge_demo(cfg: ExperimentConfig) -> int:
    x = np.linspace(-1.0, 1.0, cfg.grid)
    curves = runge_curves(cfg.r, x)
    names = ["f", "seg_eq", "seg_cl", "nodal_eq", "nodal_cheb"]
    _write_csv(cfg, "runge.csv", ["x"] + names, zip(x, *(curves[n] for n in names)))
    _write_svg(cfg, "runge.svg", x, {n: curves[n] for n in names}, title=f"Runge function, r={cfg.r}")
    errs = {n: float(np.max(np.abs(curves[n] - curves["f"]))) for n in names[1:]}
    print(" ".join(f"max_err_{n}={e:.6e}" for n, e in errs.items()))
    return 0


def cmd_basis(cfg: ExperimentConfig) -> int:
    segset = make_family(cfg.family, cfg.r, cfg.lambdas[0])
    for j in cfg.indices:
        if not 1 <= j <= segset.r:
            raise UsageError(f"basis index {j} outside 1..{segset.r}")
    basis = lagrange_basis(segset)
    x = np.linspace(*segset.interval, cfg.grid)
    cols = {f"l_{j}": basis[j - 1](x) for j in cfg.indices}
    _write_csv(cfg, "basis.csv", ["x"] + list(cols), zip(x, *cols.values()))
    _write_svg(cfg, "basis.svg", x, cols, title=f"Lagrange basis ({cfg.family}, r={segset.r})")
    duality = np.array([segment_integrals(p, segset) for p in basis]).T
    print(f"max |integral_s_i l_j - delta_ij| = {float(np.max(np.abs(duality - np.eye(segset.r)))):.3e}")
    return 0


COMMANDS = {
    "interp": cmd_interp,
    "lebesgue-sweep": cmd_lebesgue_sweep,
    "c2-sweep": cmd_c2_sweep,
    "clo-gap": cmd_clo_gap,
    "runge-demo": cmd_runge_demo,
    "basis": cmd_basis,
}


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="segmental", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = {"interp": 5, "runge-demo": 10, "basis": 5}
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--family", choices=FAMILIES, default="cl")
        p.add_argument("--r", type=int, default=defaults.get(name, 5))
        p.add_argument("--r-min", type=int, default=2)
        p.add_argument("--r-max", type=int, default=20)
        p.add_argument("--lambda", dest="lambdas", type=_float_list, default=(0.5,))
        p.add_argument("--fn", default="runge10")
        p.add_argument("--grid", type=int, default=1001)
        p.add_argument("--out", type=Path, default=Path("."))
        p.add_argument("--svg", action="store_true")
        p.add_argument("--segments-file", type=Path)
        p.add_argument("--mu-file", type=Path)
        p.add_argument("--quad-n", type=int)
        p.add_argument("--quad-panels", type=int)
        p.add_argument("--index", dest="indices", type=_int_list, default=(1,))
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = ExperimentConfig(**{k: v for k, v in vars(args).items()})
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SingularSystem, EvaluationError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
