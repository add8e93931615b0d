"""Command-line entry point.

Every command prints one JSON document ``{"command", "result", "manifest"}``
to stdout. Files written by ``sample`` and ``ronkin`` get a sidecar
``<file>.manifest.json``. Exit codes: 0 ok, 1 identity check failed
(nonzero residual), 2 usage error, 3 genericity / stabilization / extent
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .crystal import (
    TorusWeights,
    evaluate_weight,
    gamma,
    legged_counting_series,
    mcmahon_identity_residual,
    plane_partitions_by_size,
    vertex_series,
    weight,
)
from .errors import ExtentCapError, GenericityError, PrecisionGuardError, StabilizationError
from .exactq import QSeries, mcmahon
from .gwside import DescendentQuery, descendent_p1, mcmahon_asymptotics
from .observables import (
    ch3_closed_form,
    ch4_closed_form,
    differential_algebra_report,
    expectation_ch,
)
from .partitions import Partition2D
from .ronkin import ronkin
from .sampler import ChainConfig, exact_mean_volume, export_rescaled_shape, run_chains

EXIT_RESIDUAL = 1
EXIT_USAGE = 2
EXIT_GENERICITY = 3


class UsageError(Exception):
    pass


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _manifest(args, result, files=(), seeds=(), truncations=None) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return {
        "command": args.command,
        "flags": flags,
        "seeds": list(seeds),
        "truncation": truncations or {},
        "version": __version__,
        "output_digests": {"stdout_result": _digest(_canonical(result)), **dict(files)},
    }


def _write_file(path: str, data: bytes, manifest_base: dict) -> tuple[str, str]:
    Path(path).write_bytes(data)
    d = _digest(data)
    side = dict(manifest_base, output_digests={path: d})
    Path(path + ".manifest.json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")
    return path, d


def _parse_t(text: str) -> TorusWeights:
    try:
        return TorusWeights.of(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--t expects three rationals a,b,c: {exc}") from None


def _parse_ints(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _parse_legs(text: str):
    parts = text.split(";")
    if len(parts) != 3:
        raise UsageError("--legs expects three partitions separated by ';', e.g. '2,1;1;'")
    try:
        return tuple(Partition2D(_parse_ints(p)) for p in parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# commands -----------------------------------------------------------------


def cmd_mcmahon(args):
    return {"series": mcmahon(args.trunc).to_json()}, 0, {}


def cmd_vertex_check(args):
    t = _parse_t(args.t)
    res = mcmahon_identity_residual(t, args.trunc)
    result = {
        "t": [str(x) for x in t],
        "gamma": _frac_str(gamma(t)),
        "vertex_series": vertex_series(t, args.trunc).to_json(),
        "residual": res.to_json(),
        "residual_is_zero": res.is_zero(),
    }
    return result, 0 if res.is_zero() else EXIT_RESIDUAL, {}


def cmd_weights(args):
    t = _parse_t(args.t)
    rows = []
    for pi in plane_partitions_by_size(args.size)[args.size]:
        w = weight(pi)
        row = {"partition": pi.to_json(), "weight": w.to_json()}
        try:
            row["value"] = _frac_str(evaluate_weight(w, t))
        except GenericityError as exc:
            row["value"] = None
            row["error"] = str(exc)
        rows.append(row)
    return {"t": [str(x) for x in t], "size": args.size, "weights": rows}, 0, {}


def cmd_observables(args):
    t = _parse_t(args.t)
    target = expectation_ch(args.k, t, args.trunc)
    r3 = expectation_ch(3, t, args.trunc) - ch3_closed_form(t, args.trunc)
    r4 = expectation_ch(4, t, args.trunc) - ch4_closed_form(t, args.trunc)
    report = differential_algebra_report(5, t, args.fit_trunc)
    report.pop("series")
    ok = r3.is_zero() and r4.is_zero()
    result = {
        "t": [str(x) for x in t],
        "k": args.k,
        "expectation": target.to_json(),
        "ch3_residual": r3.to_json(),
        "ch4_residual": r4.to_json(),
        "closed_forms_hold": ok,
        "ch5_fit": report,
    }
    return result, 0 if ok else EXIT_RESIDUAL, {}


def cmd_gw_p1(args):
    tau = _parse_ints(args.tau)
    q = DescendentQuery(args.d, tuple(tau))
    return {"d": args.d, "tau": tau, "value": _frac_str(descendent_p1(q))}, 0, {}


def cmd_asymptotics(args):
    return mcmahon_asymptotics(args.u, args.gmax, args.trunc), 0, {}


def _svg_heatmap(pi, Q: float) -> bytes:
    cells = export_rescaled_shape(pi, Q)
    size = 12
    rows = len(pi.heights)
    hmax = max((h for _, _, h in cells), default=1.0)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{max(rows, 1) * size}" '
        f'height="{max(rows, 1) * size}">'
    ]
    for i, row in enumerate(pi.heights):
        for j, h in enumerate(row):
            if not h:
                continue
            level = int(round(255 * (1 - h * (-np.log(Q)) / hmax)))
            out.append(
                f'<rect x="{j * size}" y="{i * size}" width="{size}" height="{size}" '
                f'fill="rgb({level},{level},255)"/>'
            )
    out.append("</svg>\n")
    return "\n".join(out).encode()


def cmd_sample(args):
    if args.chains < 1:
        raise UsageError("--chains must be >= 1")
    try:
        configs = [
            ChainConfig(args.q, args.steps, args.seed + c, burnin=args.burnin, max_extent=args.max_extent)
            for c in range(args.chains)
        ]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = run_chains(configs, workers=args.threads)
    chains = [r.summary() for r in results]
    # deterministic fold over chains in seed order
    n = sum(r.config.steps for r in results)
    mean = sum(r.mean * r.config.steps for r in results) / n
    se = float(np.sqrt(sum((r.stderr * r.config.steps) ** 2 for r in results))) / n
    exact = exact_mean_volume(args.q)
    result = {
        "chains": chains,
        "mean_volume": mean,
        "stderr": se,
        "exact_mean_volume": exact,
        "z_score": (mean - exact) / se if se else None,
        "precision": "float64",
    }
    files = {}
    final = results[0].final
    base = {"command": "sample", "version": __version__, "seeds": [c.seed for c in configs]}
    if args.shape:
        lines = ["x,y,h"] + [f"{x:.12g},{y:.12g},{h:.12g}" for x, y, h in export_rescaled_shape(final, args.q)]
        k, d = _write_file(args.shape, ("\n".join(lines) + "\n").encode(), base)
        files[k] = d
    if args.svg:
        k, d = _write_file(args.svg, _svg_heatmap(final, args.q), base)
        files[k] = d
    if args.compare:
        # both surfaces on the sampled cells' grid; no coordinate change is applied
        heights = {(x, y): h for x, y, h in export_rescaled_shape(final, args.q)}
        lines = ["x,y,h_sampled,ronkin"] + [
            f"{x:.12g},{y:.12g},{h:.12g},{ronkin(x, y, 128):.12g}" for (x, y), h in sorted(heights.items())
        ]
        k, d = _write_file(args.compare, ("\n".join(lines) + "\n").encode(), base)
        files[k] = d
    return result, 0, {"files": files, "seeds": [c.seed for c in configs]}


def cmd_ronkin(args):
    if args.grid < 64:
        raise UsageError("--grid must be >= 64")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    xs = np.linspace(-args.range, args.range, args.points)
    rows = [(float(x), float(y), ronkin(x, y, args.grid)) for x in xs for y in xs]
    result = {"grid": args.grid, "range": args.range, "points": args.points, "precision": "float64"}
    files = {}
    if args.out:
        lines = ["x,y,ronkin"] + [f"{x:.12g},{y:.12g},{v:.12g}" for x, y, v in rows]
        k, d = _write_file(args.out, ("\n".join(lines) + "\n").encode(), {"command": "ronkin", "version": __version__})
        files[k] = d
    else:
        result["values"] = [{"x": x, "y": y, "ronkin": v} for x, y, v in rows]
    return result, 0, {"files": files}


def cmd_legged(args):
    legs = _parse_legs(args.legs)
    try:
        series = legged_counting_series(*legs, args.trunc)
    except ValueError as exc:
        if isinstance(exc, StabilizationError):
            raise
        raise UsageError(str(exc)) from None
    return {"legs": [p.to_json() for p in legs], "series": series.to_json()}, 0, {}


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dtcrystal", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--threads", type=int, default=1, help="worker processes where a command can use them")
    # --threads is accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mcmahon", parents=[common], help="McMahon function coefficients")
    s.add_argument("--trunc", type=int, required=True)
    s.set_defaults(func=cmd_mcmahon)

    s = sub.add_parser("vertex-check", parents=[common], help="vertex series vs M(-q)^(-gamma)")
    s.add_argument("--t", required=True)
    s.add_argument("--trunc", type=int, required=True)
    s.set_defaults(func=cmd_vertex_check)

    s = sub.add_parser("weights", parents=[common], help="list factored weights of all plane partitions of a size")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--t", required=True)
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("observables", parents=[common], help="<ch_k> and the closed-form checks")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--t", required=True)
    s.add_argument("--trunc", type=int, required=True)
    s.add_argument("--fit-trunc", type=int, default=10, help="truncation for the ch_5 basis fit")
    s.set_defaults(func=cmd_observables)

    s = sub.add_parser("gw-p1", parents=[common], help="P^1 descendent invariant of the point class")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--tau", default="", help="comma-separated k_i")
    s.set_defaults(func=cmd_gw_p1)

    s = sub.add_parser("asymptotics", parents=[common], help="ln M(e^-u) against its small-u expansion")
    s.add_argument("--u", type=float, required=True)
    s.add_argument("--gmax", type=int, required=True)
    s.add_argument("--trunc", type=int, default=None)
    s.set_defaults(func=cmd_asymptotics)

    s = sub.add_parser("sample", parents=[common], help="Metropolis sampling at fugacity Q")
    s.add_argument("--q", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--burnin", type=int, default=10_000)
    s.add_argument("--max-extent", type=int, default=256)
    s.add_argument("--chains", type=int, default=1, help="independent chains with seeds seed, seed+1, ...")
    s.add_argument("--shape", help="CSV of the rescaled final shape")
    s.add_argument("--svg", help="SVG heatmap of the final shape")
    s.add_argument("--compare", help="CSV of sampled heights next to Ronkin values on the same grid")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("ronkin", parents=[common], help="Ronkin function of z + w = 1 on a square grid")
    s.add_argument("--grid", type=int, default=256, help="quadrature nodes per angle")
    s.add_argument("--range", type=float, required=True)
    s.add_argument("--points", type=int, default=21, help="evaluation points per axis")
    s.add_argument("--out", help="CSV output path")
    s.set_defaults(func=cmd_ronkin)

    s = sub.add_parser("legged", parents=[common], help="counting series of legged configurations")
    s.add_argument("--legs", required=True, help="'lambda;mu;nu', parts comma-separated")
    s.add_argument("--trunc", type=int, required=True)
    s.set_defaults(func=cmd_legged)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, code, extra = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except PrecisionGuardError as exc:
        print(f"dtcrystal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GenericityError, StabilizationError, ExtentCapError) as exc:
        print(f"dtcrystal: error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    manifest = _manifest(
        args,
        result,
        files=extra.get("files", {}).items(),
        seeds=extra.get("seeds", ()),
        truncations={k: getattr(args, k) for k in ("trunc", "fit_trunc") if getattr(args, k, None) is not None},
    )
    doc = {"command": args.command, "result": result, "manifest": manifest}
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
