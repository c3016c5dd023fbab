"""Command-line front end: ``cascade-photons {evolve,steady,tomography,pdf,sweep}``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import dynamics, tomography
from .dynamics import PRESETS, SystemParams
from .entanglement import (
    assemble_pdf,
    cdf,
    haar_concurrences,
    histogram_pdf,
    invariants_from_state,
)
from .errors import NumericalError, ValidationError
from .qmath import check_density_matrix, hermitian_eig, purity

PARAM_NAMES = ("omega1", "omega2", "delta1", "delta2", "gamma2", "gamma3")


@dataclass
class RunConfig:
    params: SystemParams
    t_max: float = 20.0
    dt: float = 1e-3
    sample_every: int = 100
    n_bins: int = 400
    mc_samples: int = 0
    seed: int = 42
    out: str | None = None
    fmt: str | None = None

    def __post_init__(self):
        if not self.dt > 0 or not self.t_max > 0:
            raise ValidationError("--dt and --t-max must be positive")
        if self.n_bins < 16:
            raise ValidationError("--bins must be at least 16")
        if self.sample_every < 1:
            raise ValidationError("--sample-every must be at least 1")
        if self.mc_samples and self.mc_samples < 10_000:
            raise ValidationError("--mc-samples must be 0 or at least 10000")


def _num(v) -> str:
    return repr(float(v))


def _complex_pair(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _matrix_pairs(m) -> list[list[list[float]]]:
    return [[_complex_pair(v) for v in row] for row in np.asarray(m)]


def _csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([x if isinstance(x, str) else _num(x) for x in r])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _photon_steady(params: SystemParams):
    rho_a = dynamics.steady_state(params)
    rho_g = tomography.atomic_to_photon(rho_a)
    check_density_matrix(rho_g, "photon state")
    return rho_a, rho_g


def cmd_evolve(cfg: RunConfig) -> str:
    trace = dynamics.evolve(dynamics.GROUND, cfg.params, cfg.t_max, cfg.dt, cfg.sample_every)
    for r in trace.rho:
        check_density_matrix(r)
    p = trace.populations
    if (cfg.fmt or "csv") == "json":
        return _json_text({
            "params": asdict(cfg.params),
            "t": trace.t.tolist(),
            "p00": p[:, 0].tolist(), "p01": p[:, 1].tolist(), "p11": p[:, 2].tolist(),
            "purity": trace.purity.tolist(),
        })
    rows = zip(trace.t, p[:, 0], p[:, 1], p[:, 2], trace.purity)
    return _csv_text(["t", "p00", "p01", "p11", "purity"], rows)


def cmd_steady(cfg: RunConfig) -> str:
    rho_a, rho_g = _photon_steady(cfg.params)
    residual = float(np.max(np.abs(dynamics.lindblad_rhs(rho_a, cfg.params))))
    gap = float(np.max(np.abs(rho_a - dynamics.nullspace_steady_state(cfg.params))))
    if (cfg.fmt or "json") == "csv":
        rows = [(str(i), str(j), m.real, m.imag) for (i, j), m in np.ndenumerate(rho_g)]
        return _csv_text(["row", "col", "re", "im"], rows,
                         [f"purity={_num(purity(rho_g))}", f"residual={_num(residual)}"])
    return _json_text({
        "params": asdict(cfg.params),
        "basis": ["00", "01", "10", "11"],
        "photon_rho": _matrix_pairs(rho_g),
        "atomic_rho": _matrix_pairs(rho_a),
        "purity": purity(rho_g),
        "residual": residual,
        "nullspace_gap": gap,
    })


def cmd_tomography(cfg: RunConfig, verify: bool = False) -> tuple[str, int]:
    rho_a, rho_g = _photon_steady(cfg.params)
    obs = tomography.atomic_observables(rho_a)
    fobs = tomography.field_observables(rho_g)
    record = {
        "params": asdict(cfg.params),
        "atomic": {"p2": obs.p2, "p3": obs.p3, "s1": _complex_pair(obs.s1),
                   "s2": _complex_pair(obs.s2), "c13": _complex_pair(obs.c13)},
        "field": {"a1": _complex_pair(fobs.a1), "a2": _complex_pair(fobs.a2),
                  "n1": fobs.n1, "n2": fobs.n2, "anom": _complex_pair(fobs.anom),
                  "g2": fobs.g2},
    }
    status = 0
    if verify:
        err = float(np.max(np.abs(tomography.reconstruct(obs) - rho_g)))
        record["roundtrip_error"] = err
        if err > 1e-9:
            status = 2
    if (cfg.fmt or "json") == "csv":
        names = ["p2", "p3", "s1_re", "s1_im", "s2_re", "s2_im", "c13_re", "c13_im"]
        rows = list(zip(names, obs.as_reals()))
        rows += [("a1_re", fobs.a1.real), ("a1_im", fobs.a1.imag),
                 ("a2_re", fobs.a2.real), ("a2_im", fobs.a2.imag), ("n1", fobs.n1),
                 ("n2", fobs.n2), ("anom_re", fobs.anom.real), ("anom_im", fobs.anom.imag),
                 ("g2", fobs.g2)]
        if verify:
            rows.append(("roundtrip_error", record["roundtrip_error"]))
        return _csv_text(["name", "value"], rows), status
    return _json_text(record), status


def _pdf_bundle(cfg: RunConfig):
    _, rho_g = _photon_steady(cfg.params)
    inv = invariants_from_state(rho_g)
    curve = assemble_pdf(inv, cfg.n_bins)
    parts = curve.meta["parts"]
    grid = curve.grid
    d2 = inv.w2 * parts["rho2"].density if "rho2" in parts else np.zeros_like(grid)
    d3 = inv.w3 * parts["rho3"].density if "rho3" in parts else np.zeros_like(grid)
    mc = None
    if cfg.mc_samples:
        vecs = hermitian_eig(rho_g).eigenvectors
        h2 = histogram_pdf(haar_concurrences(vecs[:, :2], cfg.mc_samples, cfg.seed), cfg.n_bins)
        h3 = histogram_pdf(haar_concurrences(vecs[:, :3], cfg.mc_samples, cfg.seed + 1), cfg.n_bins)
        mc_density = inv.w2 * h2.density + inv.w3 * h3.density
        mc_cdf = (inv.w1 * (grid >= inv.e1) + inv.w2 * cdf(h2).values + inv.w3 * cdf(h3).values)
        mc = (mc_density, mc_cdf)
    return inv, curve, d2, d3, cdf(curve).values, mc


def cmd_pdf(cfg: RunConfig) -> str:
    inv, curve, d2, d3, cvals, mc = _pdf_bundle(cfg)
    if (cfg.fmt or "csv") == "json":
        out = {
            "params": asdict(cfg.params),
            "invariants": inv.as_dict(),
            "deltas": [list(d) for d in curve.deltas],
            "E": curve.grid.tolist(),
            "pdf_total": curve.density.tolist(),
            "pdf_d2": d2.tolist(),
            "pdf_d3": d3.tolist(),
            "cdf": cvals.tolist(),
            "defect": curve.defect,
        }
        if mc is not None:
            out["mc_pdf"], out["mc_cdf"] = mc[0].tolist(), mc[1].tolist()
        return _json_text(out)
    comments = [f"delta E={_num(loc)} weight={_num(w)}" for loc, w in curve.deltas]
    comments += [f"{k}={_num(v)}" for k, v in inv.as_dict().items()]
    header = ["E", "pdf_total", "pdf_d2", "pdf_d3", "cdf"]
    cols = [curve.grid, curve.density, d2, d3, cvals]
    if mc is not None:
        header += ["mc_pdf", "mc_cdf"]
        cols += list(mc)
    return _csv_text(header, zip(*cols), comments)


def sweep_rows(base: SystemParams, param: str, start: float, stop: float, steps: int):
    if param not in PARAM_NAMES:
        raise ValidationError(f"unknown sweep parameter {param!r}")
    if not start < stop or steps < 2:
        raise ValidationError("sweep needs from < to and steps >= 2")
    rows = []
    for value in np.linspace(start, stop, steps):
        p = base.replace(**{param: float(value)})
        row = {param: float(value)}
        try:
            _, rho_g = _photon_steady(p)
            inv = invariants_from_state(rho_g)
            row.update(w1=inv.w1, w2=inv.w2, w3=inv.w3, e1=inv.e1, e_cusp=inv.e_cusp,
                       e_max=inv.e_max, corr=abs(rho_g[0, 3]), error="")
        except NumericalError as exc:
            row.update({k: float("nan") for k in ("w1", "w2", "w3", "e1", "e_cusp", "e_max", "corr")})
            row["error"] = str(exc)
        rows.append(row)
    return rows


def cmd_sweep(cfg: RunConfig, param: str, start: float, stop: float, steps: int) -> str:
    rows = sweep_rows(cfg.params, param, start, stop, steps)
    if (cfg.fmt or "csv") == "json":
        return _json_text({"params": asdict(cfg.params), "param": param, "rows": rows})
    header = [param, "w1", "w2", "w3", "e1", "e_cusp", "e_max", "corr", "error"]
    return _csv_text(header, ([r[h] for h in header] for r in rows))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("system")
    g.add_argument("--preset", choices=sorted(PRESETS))
    for name in PARAM_NAMES:
        g.add_argument(f"--{name}", type=float, default=None)
    r = common.add_argument_group("run")
    r.add_argument("--t-max", type=float, default=20.0)
    r.add_argument("--dt", type=float, default=1e-3)
    r.add_argument("--sample-every", type=int, default=100)
    r.add_argument("--bins", type=int, default=400)
    r.add_argument("--mc-samples", type=int, default=0)
    r.add_argument("--seed", type=int, default=42)
    r.add_argument("--out", default=None, help="output path (default: stdout)")
    r.add_argument("--format", choices=("csv", "json"), default=None)

    parser = _Parser(prog="cascade-photons", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("evolve", parents=[common], help="population and purity trace")
    sub.add_parser("steady", parents=[common], help="steady-state density matrices")
    tp = sub.add_parser("tomography", parents=[common], help="eight-number tomography")
    tp.add_argument("--verify", action="store_true")
    sub.add_parser("pdf", parents=[common], help="entanglement PDF and CDF")
    sp = sub.add_parser("sweep", parents=[common], help="invariants along a parameter line")
    sp.add_argument("--param", default="omega1", choices=PARAM_NAMES)
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--steps", type=int, default=20)
    return parser


def config_from_args(args) -> RunConfig:
    base = PRESETS[args.preset] if args.preset else SystemParams()
    overrides = {n: getattr(args, n) for n in PARAM_NAMES if getattr(args, n) is not None}
    return RunConfig(
        params=base.replace(**overrides),
        t_max=args.t_max, dt=args.dt, sample_every=args.sample_every,
        n_bins=args.bins, mc_samples=args.mc_samples, seed=args.seed,
        out=args.out, fmt=args.format,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status = 0
    try:
        cfg = config_from_args(args)
        if args.command == "evolve":
            text = cmd_evolve(cfg)
        elif args.command == "steady":
            text = cmd_steady(cfg)
        elif args.command == "tomography":
            text, status = cmd_tomography(cfg, args.verify)
        elif args.command == "pdf":
            text = cmd_pdf(cfg)
        else:
            text = cmd_sweep(cfg, args.param, args.start, args.stop, args.steps)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    _emit(text, cfg.out)
    if status:
        print("round-trip error exceeds 1e-9", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
