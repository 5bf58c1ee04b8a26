"""Command-line front end: three-gap reports, the full analysis pipeline, oracle runs, comparisons and plots."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import _backend
from .circle_pd import circle_diagrams
from .diagrams import INF, PersistenceDiagram, dumps, fmt_float, load_diagram
from .kunneth import GridSpec, grid_diagrams
from .metrics_bounds import ErrorRectangle, bottleneck, contains, error_rectangles, hausdorff_bound
from .numtheory import three_gap
from .rips_oracle import DEFAULT_BUDGET, BudgetExceededError, FiniteMetricSpace, metric_from_cloud, rips_persistence
from .sliding_window import ExponentialSum, SWParams, default_tau, embed, scaled_coeffs, sw_matrix, trajectory
from .spectrum import dft, estimate_frequencies, truncate_series

EXIT_OK, EXIT_VALIDATION, EXIT_INGESTION, EXIT_BUDGET = 0, 2, 3, 4


class IngestionError(Exception):
    """Input file missing, unreadable or malformed."""


# ---------------------------------------------------------------- ingestion


def read_signal_csv(path) -> np.ndarray:
    """One sample per line as ``re,im`` or a single real column; a header line is skipped."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    out = []
    for i, row in enumerate(rows):
        try:
            vals = [float(c) for c in row]
        except ValueError:
            if i == 0:
                continue  # header
            raise IngestionError(f"{path}:{i + 1}: not a number: {row!r}") from None
        if len(vals) == 1:
            out.append(complex(vals[0], 0.0))
        elif len(vals) == 2:
            out.append(complex(vals[0], vals[1]))
        else:
            raise IngestionError(f"{path}:{i + 1}: expected 1 or 2 columns, got {len(vals)}")
    if len(out) < 2:
        raise IngestionError(f"{path}: need at least two samples")
    x = np.array(out)
    return x.real.copy() if not np.any(x.imag) else x


def read_matrix_csv(path) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
        return np.array([[float(c) for c in r] for r in rows], dtype=np.float64)
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise IngestionError(f"{path}: {exc}") from exc


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IngestionError(f"{path}: invalid JSON: {exc}") from exc


def _load_diagram(path) -> PersistenceDiagram:
    _load_json(path)  # surfaces parse errors as ingestion failures
    try:
        return load_diagram(path)
    except ValueError as exc:
        raise IngestionError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------- analysis


@dataclass
class AnalysisConfig:
    input: str | None = None
    synth: ExponentialSum | None = None
    sample_step: float = 0.1
    length: int = 20000
    n_peaks: int = 2
    d: int = 1
    tau: float | None = None
    T: int = 2000
    T_prime: int = 500
    dims: int = 2
    oracle: bool = False
    oracle_T: int = 300
    budget: int = DEFAULT_BUDGET
    timings: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self):
        if (self.input is None) == (self.synth is None):
            raise ValueError("give exactly one of an input CSV or a synthetic signal")
        if not self.sample_step > 0:
            raise ValueError("sample step must be positive")
        if self.n_peaks < 1:
            raise ValueError("n_peaks must be >= 1")
        if self.T_prime < 1 or self.T_prime > self.T:
            raise ValueError(f"need 1 <= T' <= T, got T'={self.T_prime}, T={self.T}")
        if self.dims < 0 or self.dims > self.n_peaks:
            raise ValueError(f"dims={self.dims} exceeds the number of independent frequencies ({self.n_peaks})")
        if self.oracle_T < 1:
            raise ValueError("oracle T must be >= 1")


def _sw_cloud(cfg: AnalysisConfig, samples: np.ndarray, tau: float, T: int) -> np.ndarray:
    """Sliding-window cloud at integer times ``0..T`` of the original signal."""
    params = SWParams(cfg.d, tau, 1.0, T)
    if cfg.synth is not None:
        return embed(cfg.synth, params)
    # resample the record at unit spacing in time units, then interpolate the lag
    pos = np.arange(0.0, (len(samples) - 1) * cfg.sample_step + 1e-9, 1.0) / cfg.sample_step
    grid = np.arange(len(samples))
    unit = np.interp(pos, grid, samples.real) + 1j * np.interp(pos, grid, samples.imag)
    return embed(unit, params, interpolate=True)


def _rank_pairs(grid_dgm: PersistenceDiagram, oracle_dgm: PersistenceDiagram, n: int):
    """Pair the ``n`` most persistent points of each diagram by persistence rank."""
    return list(zip(grid_dgm.most_persistent(n), oracle_dgm.most_persistent(n)))


def containment(grid_dgm: PersistenceDiagram, oracle_dgm: PersistenceDiagram, lambda_gh: float,
                cond_k: float, n: int) -> list[dict]:
    out = []
    for (a, b), (x, y) in _rank_pairs(grid_dgm, oracle_dgm, n):
        rect = error_rectangles(PersistenceDiagram.from_pairs(grid_dgm.dim, [(a, b)]), lambda_gh, cond_k)[0]
        out.append({
            "grid_point": [fmt_float(a), fmt_float(b)],
            "oracle_point": [fmt_float(x), fmt_float(y)],
            "rectangle": rect.to_dict(),
            "contained": contains(rect, (x, y)),
        })
    return out


def analyze(cfg: AnalysisConfig) -> dict:
    cfg.validate()
    clock = {}
    t0 = time.perf_counter()
    if cfg.synth is not None:
        samples = cfg.synth(np.arange(cfg.length) * cfg.sample_step)
    else:
        samples = read_signal_csv(cfg.input)
    samples = np.asarray(samples)
    if not np.any(samples):
        raise ValueError("signal is identically zero; no spectral peaks")
    spec = dft(samples, cfg.sample_step)
    try:
        peaks = estimate_frequencies(spec, cfg.n_peaks)
    except ValueError as exc:
        raise ValueError(f"spectrum: {exc}") from exc
    fsum = truncate_series(peaks, K=1, n_base=cfg.n_peaks)
    t1 = time.perf_counter()
    clock["spectrum"] = t1 - t0

    tau = cfg.tau if cfg.tau is not None else default_tau(fsum.freqs)
    sw = sw_matrix(fsum, SWParams(cfg.d, tau, 1.0, cfg.T))
    radii = tuple(float(r) for r in np.abs(scaled_coeffs(fsum, cfg.d)))
    grid = GridSpec(radii, fsum.freqs, cfg.T_prime)
    circles = []
    for r, w in zip(grid.radii, grid.omegas):
        gs = three_gap(w, cfg.T_prime)
        d0, d1 = circle_diagrams(w, cfg.T_prime)
        circles.append({"omega": fmt_float(w), "radius": fmt_float(r), "gaps": _gap_dict(gs),
                        "dgm0": d0.to_dict(), "dgm1": d1.to_dict()})
    t2 = time.perf_counter()
    clock["three_gap"] = t2 - t1

    gdgms = grid_diagrams(grid, cfg.dims)
    t3 = time.perf_counter()
    clock["kunneth"] = t3 - t2

    haus = hausdorff_bound(trajectory(fsum, cfg.T, cfg.d), grid)
    t4 = time.perf_counter()
    clock["hausdorff"] = t4 - t3

    rects = {str(d.dim): [r.to_dict() for r in error_rectangles(d, haus.value, sw.cond_k)] for d in gdgms if d.dim >= 1}
    t5 = time.perf_counter()
    clock["rectangles"] = t5 - t4
    clock["pipeline_total"] = t5 - t0

    bundle = {
        "config": {"sample_step": fmt_float(cfg.sample_step), "n_samples": int(len(samples)), "n_peaks": cfg.n_peaks,
                   "d": cfg.d, "tau": fmt_float(tau), "T": cfg.T, "T_prime": cfg.T_prime, "dims": cfg.dims},
        "frequencies": [{"freq": fmt_float(w), "coeff": [fmt_float(c.real), fmt_float(c.imag)]}
                        for w, c in zip(fsum.freqs, fsum.coeffs)],
        "cond_k": fmt_float(sw.cond_k),
        "sigma": [fmt_float(sw.sigma_min), fmt_float(sw.sigma_max)],
        "circles": circles,
        "grid": [d.to_dict() for d in gdgms],
        "lambda_gh": {"value": fmt_float(haus.value), "traj_to_grid": fmt_float(haus.traj_to_grid),
                      "grid_to_traj": fmt_float(haus.grid_to_traj), "note": haus.note},
        "rectangles": rects,
    }
    if cfg.oracle:
        bundle["oracle"] = _oracle_block(cfg, samples, fsum, tau, sw.cond_k, clock)
    if cfg.timings:
        bundle["timings"] = {k: round(v, 6) for k, v in clock.items()}
        bundle["backend"] = _backend.BACKEND
    return bundle


def _oracle_block(cfg, samples, fsum, tau, cond_k, clock) -> dict:
    """Exact Rips diagrams of the sliding-window cloud at reduced ``T``, checked against the grid rectangles."""
    To = min(cfg.oracle_T, cfg.T)
    Tp = max(1, round(cfg.T_prime * To / cfg.T))
    t0 = time.perf_counter()
    cloud = _sw_cloud(cfg, samples, tau, To)
    odgms = rips_persistence(metric_from_cloud(cloud), cfg.dims, budget=cfg.budget)
    t1 = time.perf_counter()
    clock["oracle"] = t1 - t0
    radii = tuple(float(r) for r in np.abs(scaled_coeffs(fsum, cfg.d)))
    grid = GridSpec(radii, fsum.freqs, Tp)
    gdgms = grid_diagrams(grid, cfg.dims)
    lam = hausdorff_bound(trajectory(fsum, To, cfg.d), grid).value
    n_factors = len(fsum.freqs)
    checks = {str(ell): containment(gdgms[ell], odgms[ell], lam, cond_k, comb(n_factors, ell))
              for ell in range(1, cfg.dims + 1)}
    return {
        "T": To,
        "T_prime": Tp,
        "lambda_gh": fmt_float(lam),
        "diagrams": [d.to_dict() for d in odgms],
        "bottleneck": {str(ell): fmt_float(bottleneck(gdgms[ell], odgms[ell])) for ell in range(cfg.dims + 1)},
        "containment": checks,
        "all_contained": all(c["contained"] for v in checks.values() for c in v),
    }


def _gap_dict(gs) -> dict:
    return {
        "k": gs.k, "r": gs.r, "s": gs.s, "q_k": gs.q_k,
        "delta": [fmt_float(gs.delta_a), fmt_float(gs.delta_b), fmt_float(gs.delta_c)],
        "counts": [gs.n_a, gs.n_b, gs.n_c],
    }


def bundle_csv(bundle: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "dim", "birth", "death", "mult", "x0", "x1", "y0", "y1", "admissible"])
    for dgm in bundle["grid"]:
        for p in dgm["points"]:
            w.writerow(["grid", dgm["dim"], p["birth"], p["death"], p["mult"], "", "", "", "", ""])
    for dim, rects in sorted(bundle["rectangles"].items()):
        for r in rects:
            w.writerow(["rect", dim, *r["source"], r["mult"], *r["x"], *r["y"], int(r["admissible"])])
    for dgm in bundle.get("oracle", {}).get("diagrams", []):
        for p in dgm["points"]:
            w.writerow(["oracle", dgm["dim"], p["birth"], p["death"], p["mult"], "", "", "", "", ""])
    return buf.getvalue()


# ---------------------------------------------------------------- plotting


def _rect_list(obj, dim: int) -> list[dict]:
    if isinstance(obj, dict) and "rectangles" in obj:
        obj = obj["rectangles"]
    if isinstance(obj, dict):
        obj = obj.get(str(dim), [])
    if not isinstance(obj, list):
        raise IngestionError("rectangles must be a list or a mapping from dimension to list")
    return obj


def render_svg(dgm: PersistenceDiagram, rects: list[dict] | None = None, size: int = 400) -> str:
    """SVG 1.1 persistence diagram; one ``<rect>`` per admissible rectangle, infinite deaths on a top band."""
    rects = [r for r in rects or [] if r.get("admissible")]
    vals = [v for b, d, _ in dgm.points for v in (b, d) if math.isfinite(v)]
    for r in rects:
        vals += [float(x) for x in r["x"] + r["y"]]
    hi = max(vals) * 1.05 if vals and max(vals) > 0 else 1.0
    pad, band = 40, 20
    span = size - 2 * pad

    def sx(v):
        return pad + span * v / hi

    def sy(v):
        return size - pad - span * v / hi

    top = pad - band / 2
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<line x1="{pad}" y1="{size - pad}" x2="{size - pad}" y2="{size - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{size - pad}" x2="{pad}" y2="{pad - band}" stroke="black"/>',
        f'<line x1="{pad}" y1="{size - pad}" x2="{size - pad}" y2="{pad}" stroke="gray" stroke-dasharray="4 3"/>',
        f'<line x1="{pad}" y1="{top:.2f}" x2="{size - pad}" y2="{top:.2f}" stroke="gray" stroke-dasharray="1 3"/>',
        f'<text x="{pad - 4}" y="{top + 4:.2f}" font-size="10" text-anchor="end">inf</text>',
        f'<text x="{size / 2:.0f}" y="{size - 8}" font-size="11" text-anchor="middle">birth</text>',
        f'<text x="12" y="{size / 2:.0f}" font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 12 {size / 2:.0f})">death</text>',
        f'<text x="{size - pad}" y="{size - pad + 14}" font-size="10" text-anchor="end">{hi:.4g}</text>',
    ]
    for r in rects:
        x0, x1 = (float(v) for v in r["x"])
        y0, y1 = (float(v) for v in r["y"])
        parts.append(f'<rect x="{sx(x0):.2f}" y="{sy(y1):.2f}" width="{sx(x1) - sx(x0):.2f}" '
                     f'height="{sy(y0) - sy(y1):.2f}" fill="orange" fill-opacity="0.15" stroke="orange"/>')
    for b, d, m in dgm.points:
        y = top if not math.isfinite(d) else sy(d)
        parts.append(f'<circle cx="{sx(b):.2f}" cy="{y:.2f}" r="{3 + min(m, 5) - 1}" fill="steelblue"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------- commands


def _omega(value: float, radians: bool) -> float:
    return value / (2.0 * math.pi) if radians else value


def _signal_from_args(args) -> ExponentialSum | None:
    if not args.freq:
        return None
    coeffs = args.coeff or ["1"] * len(args.freq)
    if len(coeffs) != len(args.freq):
        raise ValueError("give one --coeff per --freq (or none)")
    try:
        cs = [complex(c.replace(" ", "")) for c in coeffs]
    except ValueError as exc:
        raise ValueError(f"bad coefficient: {exc}") from exc
    return ExponentialSum(tuple(cs), tuple(_omega(w, args.radians) for w in args.freq))


def cmd_threegap(args) -> str:
    w = _omega(args.omega, args.radians)
    gs = three_gap(w, args.T)
    d0, d1 = circle_diagrams(w, args.T)
    return dumps({"omega": fmt_float(w), "T": args.T, "gaps": _gap_dict(gs), "dgm0": d0.to_dict(), "dgm1": d1.to_dict()})


def cmd_analyze(args) -> str:
    cfg = AnalysisConfig(
        input=args.input, synth=_signal_from_args(args), sample_step=args.step, length=args.length,
        n_peaks=args.n_peaks, d=args.d, tau=args.tau, T=args.T, T_prime=args.T_prime, dims=args.dims,
        oracle=args.oracle, oracle_T=args.oracle_T, budget=args.budget, timings=args.timings,
    )
    bundle = analyze(cfg)
    if args.plot:
        dim = "1" if cfg.dims >= 1 else "0"
        dgm = PersistenceDiagram.from_dict(bundle["grid"][int(dim)])
        _write(args.plot, render_svg(dgm, bundle["rectangles"].get(dim, [])))
    return bundle_csv(bundle) if args.format == "csv" else dumps(bundle)


def cmd_synth(args) -> str:
    sig = _signal_from_args(args)
    if sig is None:
        raise ValueError("synth needs at least one --freq")
    if args.length < 2:
        raise ValueError("length must be >= 2")
    x = sig(np.arange(args.length) * args.step)
    buf = io.StringIO()
    buf.write("re,im\n")
    for v in x:
        buf.write(f"{v.real:.17g},{v.imag:.17g}\n")
    return buf.getvalue()


def cmd_rips(args) -> str:
    data = read_matrix_csv(args.input)
    if args.points:
        space = metric_from_cloud(data.astype(np.complex128))
    else:
        space = FiniteMetricSpace(data)
    thr = INF if args.threshold is None else args.threshold
    dgms = rips_persistence(space, args.max_dim, thr, budget=args.budget)
    return dumps({"diagrams": [d.to_dict() for d in dgms]})


def cmd_bottleneck(args) -> str:
    a, b = _load_diagram(args.a), _load_diagram(args.b)
    return dumps({"bottleneck": fmt_float(bottleneck(a, b))})


def cmd_plot(args) -> str:
    dgm = _load_diagram(args.diagram)
    rects = _rect_list(_load_json(args.rects), dgm.dim) if args.rects else []
    svg = render_svg(dgm, rects)
    _write(args.out, svg)
    return dumps({"out": args.out, "rectangles": sum(1 for r in rects if r.get("admissible")), "points": len(dgm.points)})


def _write(path: str, text: str):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IngestionError(f"cannot write {path}: {exc}") from exc


def _signal_args(p: argparse.ArgumentParser):
    p.add_argument("--freq", type=float, action="append", help="frequency of one term (repeatable)")
    p.add_argument("--coeff", action="append", help="complex coefficient of the matching term, e.g. 0.7071+0j")
    p.add_argument("--radians", action="store_true", help="frequencies are angular; divide by 2 pi")
    p.add_argument("--step", type=float, default=0.1, help="sample spacing in time units")
    p.add_argument("--length", type=int, default=20000, help="number of synthetic samples")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qpd", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threegap", help="gap structure and circle diagrams of {t omega mod 1}")
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--radians", action="store_true", help="omega is angular; divide by 2 pi")
    p.set_defaults(func=cmd_threegap)

    p = sub.add_parser("analyze", help="spectrum -> three-gap -> Kunneth -> error rectangles")
    p.add_argument("--input", help="CSV of samples (re,im or a single real column)")
    _signal_args(p)
    p.add_argument("--n-peaks", type=int, default=2)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--T", type=int, default=2000)
    p.add_argument("--T-prime", type=int, default=500)
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--plot", help="write an SVG of the dim-1 grid diagram and its rectangles")
    p.add_argument("--oracle", action="store_true", help="also run the exact Rips oracle at reduced T")
    p.add_argument("--oracle-T", type=int, default=300)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (output no longer byte-stable)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="write samples of an exponential sum as CSV")
    _signal_args(p)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("rips", help="exact Rips persistence of a distance matrix or point cloud CSV")
    p.add_argument("input")
    p.add_argument("--points", action="store_true", help="rows are Euclidean coordinates, not distances")
    p.add_argument("--max-dim", type=int, default=1)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_rips)

    p = sub.add_parser("bottleneck", help="bottleneck distance between two diagram JSON files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("plot", help="render a diagram (and admissible rectangles) as SVG")
    p.add_argument("diagram")
    p.add_argument("--rects", help="rectangle list, or an analyze bundle")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
        if getattr(args, "out", None) and args.command == "synth":
            _write(args.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except IngestionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGESTION
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
