"""Command-line front end.

    expsub analyze FILE [--mode exact|sampled] [--angular-res DEG] ...
    expsub nn|nv|amoeba|ranks|homoclinic|oracle|render FILE ...

Exit codes: 0 ok, 1 undecided regions under --strict, 2 parse error,
3 budget exhausted, 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from . import amoeba as am
from . import formats
from .expansivity import AnalysisConfig, analyze, fill_ray_gaps, nv_from_cloud, ranks, variety_cloud
from .geometry import SphericalSet, circle_directions, fibonacci_sphere
from .groebner import BudgetExceeded, nn_set
from .laurent import ParseError

log = logging.getLogger("expsub")

COMMANDS = ("analyze", "nn", "nv", "amoeba", "homoclinic", "oracle", "ranks", "render")
EXIT_OK, EXIT_STRICT, EXIT_PARSE, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4


@dataclass
class JobSpec:
    command: str
    input: str
    mode: str = "exact"
    angular_res: float = 0.5
    residual_tol: float = am.DEFAULT_RESIDUAL_TOL
    gb_budget: int = 20000
    radius: float | None = None
    grid: int | None = None
    seed: int = 0
    strict: bool = False
    fmt: str = "report"
    out: str | None = None
    svg: str | None = None
    samples: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not os.path.exists(self.input):
            raise FileNotFoundError(self.input)
        for name in ("angular_res", "residual_tol", "gb_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("radius", "grid", "samples"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")
        if self.mode not in ("exact", "sampled"):
            raise ValueError("mode must be exact or sampled")
        if self.fmt not in ("report", "svg", "both"):
            raise ValueError("format must be report, svg or both")

    def config(self, param_map=None, ranks_on=False) -> AnalysisConfig:
        return AnalysisConfig(mode=self.mode, angular_res_deg=self.angular_res,
                              residual_tol=self.residual_tol, gb_budget=self.gb_budget,
                              seed=self.seed, param_map=param_map, compute_ranks=ranks_on)


def _emit(job: JobSpec, doc: dict | str, svg: str | None, stem: str):
    text = doc if isinstance(doc, str) else formats.dumps(doc)
    if job.fmt in ("report", "both"):
        if job.out:
            with open(job.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    if svg is not None and job.fmt in ("svg", "both"):
        path = job.svg or (os.path.splitext(job.out)[0] + ".svg" if job.out else f"{stem}.svg")
        with open(path, "w") as fh:
            fh.write(svg)
        log.info("figure written to %s", path)


def _set_doc(s: SphericalSet) -> dict:
    return {"kind": s.mode, "summary": s.describe(), "set": s.to_dict()}


def _undecided(s: SphericalSet) -> bool:
    from .geometry import SampledMask

    if s.mask is None:
        return False
    return any((m.flags == -1).any() for m in s.mask.leaves()) if isinstance(s.mask, SampledMask) else False


def run(job: JobSpec) -> int:
    from .render import render_cloud, render_sset, render_window

    if job.command == "render":
        with open(job.input) as fh:
            text = fh.read()
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            obj = None
        if obj is not None:
            sset = obj.get("n", obj)
            sset = SphericalSet.from_dict(sset.get("set", sset))
        else:
            spec = formats.parse_input(text)
            sset = analyze(spec.target(), job.config(spec.param_map)).n
        job.fmt = "svg"
        _emit(job, "", render_sset(sset, title="N"), "render")
        return EXIT_OK

    spec = formats.read_input(job.input)
    names = spec.vars
    stem = os.path.splitext(os.path.basename(job.input))[0]
    cfg = job.config(spec.param_map, ranks_on=job.command == "ranks")
    if job.radius is not None:
        cfg.grid = am.AmoebaGrid(radius=job.radius)

    if job.command == "analyze":
        rep = analyze(spec.target(), cfg)
        doc = formats.report_dict(rep, names)
        svg = render_sset(rep.n, title="N") if rep.ideal.dim in (2, 3) else None
        _emit(job, doc, svg, stem)
        if job.strict and (rep.undecided or _undecided(rep.n)):
            return EXIT_STRICT
        return EXIT_OK

    a = spec.ideal()
    if job.command == "nn":
        certs: list = []
        s = nn_set(a, job.mode, job.angular_res, job.gb_budget, certs=certs)
        doc = {"nn": _set_doc(s), "certificates": [formats.cert_dict(c, names) for c in certs],
               "provenance": cfg.provenance()}
        _emit(job, doc, render_sset(s, title="N^n") if a.dim in (2, 3) else None, stem)
        if job.strict and any(c.verdict == "undecided" for c in certs):
            return EXIT_STRICT
        return EXIT_OK

    if job.command in ("nv", "amoeba"):
        cloud = fill_ray_gaps(a, variety_cloud(a, cfg), cfg)
        if job.command == "amoeba":
            svg = render_cloud(cloud.X, title="amoeba") if len(cloud) and a.dim >= 2 else None
            doc = cloud.to_text()
            if job.fmt == "report" and not job.out:
                sys.stdout.write(doc)
                return EXIT_OK
            _emit(job, doc, svg, stem)
            return EXIT_OK
        s = nv_from_cloud(a, cloud, cfg)
        tendrils = [[round(float(x), 6) for x in u] for u in am.asymptotic_directions(cloud)]
        doc = {"nv": _set_doc(s), "cloud_points": len(cloud), "asymptotic_directions": tendrils,
               "provenance": cfg.provenance()}
        _emit(job, doc, render_sset(s, title="N^v") if a.dim in (2, 3) else None, stem)
        return EXIT_OK

    if job.command == "ranks":
        rk = ranks(a, cfg, n_samples=job.samples)
        _emit(job, {"ranks": formats.ranks_dict(rk), "provenance": cfg.provenance()}, None, stem)
        return EXIT_OK

    if job.command == "homoclinic":
        from .homoclinic import convolution_check, principal_homoclinic

        gens = a.nonzero_gens
        if len(gens) != 1:
            raise ValueError("homoclinic needs a principal ideal")
        N = int(job.radius or 16)
        w = principal_homoclinic(gens[0], N, job.grid)
        defect = convolution_check(gens[0], w)
        doc = {"window": {"N": N, "grid": w.meta["grid"], "doubling_error": w.meta["doubling_error"]},
               "convolution_defect": {"mod1": defect.mod1, "lift": defect.lift},
               "values": w.to_text()}
        svg = None
        if w.dim == 2:
            svg = render_window(w.values, title="homoclinic point")
        elif w.dim == 1:
            svg = render_window(w.values[:, None], title="homoclinic point")
        _emit(job, formats._num(doc), svg, stem)
        return EXIT_OK

    if job.command == "oracle":
        from .fporacle import FpSystem, direction_expansive_empirical
        from .laurent import Direction

        sys_ = FpSystem.from_ideal(a, spec.modulus)
        if a.dim == 2:
            dirs = circle_directions(job.samples or 360)
        elif a.dim == 3:
            dirs = fibonacci_sphere(job.samples or 100)
        else:
            raise ValueError("the oracle handles d = 2 or 3")
        rows = []
        for u in dirs:
            r = direction_expansive_empirical(sys_, Direction.from_vector(tuple(u)), R=job.radius)
            rows.append({"direction": [round(float(x), 9) for x in u], "expansive": r.expansive,
                         "coded": r.coded, "targets": r.targets, "conclusive": r.conclusive})
        doc = {"modulus": sys_.p, "directions": rows,
               "nonexpansive": [r["direction"] for r in rows if not r["expansive"]]}
        _emit(job, doc, None, stem)
        return EXIT_OK
    raise AssertionError(job.command)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expsub", description="Expansive subdynamics of algebraic Z^d-actions")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="ideal file, or a saved report for render")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--angular-res", type=float, default=0.5, help="degrees")
    p.add_argument("--residual-tol", type=float, default=am.DEFAULT_RESIDUAL_TOL)
    p.add_argument("--gb-budget", type=int, default=20000, help="critical pairs per basis")
    p.add_argument("--radius", type=float, help="amoeba log-radius, homoclinic window or oracle radius")
    p.add_argument("--grid", type=int, help="Fourier grid size")
    p.add_argument("--samples", type=int, help="directions (oracle) or planes per k (ranks)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true", help="exit 1 when undecided regions remain")
    p.add_argument("--format", dest="fmt", choices=("report", "svg", "both"), default="report")
    p.add_argument("-o", "--out", help="report path (default stdout)")
    p.add_argument("--svg", help="figure path")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    opts = vars(args)
    opts.pop("verbose")
    try:
        job = JobSpec(**opts)
        return run(job)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
