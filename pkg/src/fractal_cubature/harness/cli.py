"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..cubature import apply_rule, build_mesh, h_integrate
from ..errors import NumericalError, ValidationError
from ..ifs import chaos_sample
from ..moments import compute_moments
from . import output
from .config import build_system, load_system
from .experiments import converge_h, converge_p, reference_value, rule_for
from .gallery import available, gallery
from .integrands import DEFAULT_KAPPA, helmholtz_integrand


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse number list {text!r}") from exc


def _degrees(text: str) -> list[int]:
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse degree list {text!r}") from exc


def _system(args):
    if args.config and args.gallery:
        raise ValidationError("give either --config or --gallery, not both")
    if args.config:
        return load_system(Path(args.config).read_text(encoding="utf-8"))
    if args.gallery:
        return build_system(gallery(args.gallery, external_constants=args.external_constants))
    raise ValidationError("a system is required: --config PATH or --gallery NAME")


def _diameter(args, system) -> float:
    return args.diameter if args.diameter else system.diameter(seed=args.seed)


def _integrand(args, system):
    x0 = _floats(args.x0) if args.x0 else None
    if x0 is not None and len(x0) != system.ifs.dim:
        raise ValidationError(f"--x0 needs {system.ifs.dim} coordinates")
    return helmholtz_integrand(args.kappa, x0, dim=system.ifs.dim)


def _figure_path(args) -> Path | None:
    if args.out is None or args.no_plot:
        return None
    return Path(args.out).with_suffix(".png")


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_gallery(args) -> int:
    if not args.name:
        print("\n".join(available(args.external_constants)))
        return 0
    text = gallery(args.name, external_constants=args.external_constants).to_json()
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_sample(args) -> int:
    system = _system(args)
    pts = chaos_sample(system.ifs, system.measure, args.count, args.seed)
    output.write_points(pts, args.out)
    fig = _figure_path(args)
    if fig:
        from .plotting import plot_points

        plot_points(pts, fig)
    return 0


def cmd_moments(args) -> int:
    system = _system(args)
    table = compute_moments(system.ifs, system.measure, args.degree)
    output.write_moments(table, args.out)
    return 0


def cmd_weights(args) -> int:
    system = _system(args)
    rule = rule_for(system, args.degree)
    diag = output.rule_diagnostics(rule)
    if args.out is None:
        _print_json(diag)
        return 0
    output.write_rule(rule, args.out)
    Path(args.out).with_suffix(".json").write_text(json.dumps(diag, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    fig = _figure_path(args)
    if fig:
        from .plotting import plot_weights

        plot_weights(rule, fig)
    return 0


def cmd_mesh(args) -> int:
    system = _system(args)
    mesh = build_mesh(system.ifs, system.measure, args.h, _diameter(args, system))
    output.write_mesh(mesh, args.out)
    return 0


def cmd_integrate(args) -> int:
    system = _system(args)
    f = _integrand(args, system)
    rule = rule_for(system, args.degree)
    payload = {"system": system.name, "degree": args.degree, "M": rule.size}
    if args.h is None:
        value = complex(apply_rule(rule, f))
    else:
        mesh = build_mesh(system.ifs, system.measure, args.h, _diameter(args, system))
        value = complex(h_integrate(rule, mesh, f))
        payload.update(h=args.h, words=len(mesh))
    payload.update(value_re=value.real, value_im=value.imag)
    _print_json(payload)
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return 0


def _emit_result(args, result) -> int:
    output.emit(result, args.format, args.out)
    fig = _figure_path(args)
    if fig:
        from .plotting import plot_convergence

        plot_convergence(result, fig)
    return 0


def _reference(args, system, f, diam):
    ref = reference_value(system, f, h=args.reference_h, diameter=diam)
    print(f"reference = {ref.value!r} (error proxy {ref.error_proxy:.2e}, {ref.words} words)", file=sys.stderr)
    return ref.value


def cmd_converge_p(args) -> int:
    system = _system(args)
    f = _integrand(args, system)
    ref = _reference(args, system, f, _diameter(args, system))
    result = converge_p(system, f, _degrees(args.degrees), reference=ref, timing=not args.no_timing)
    return _emit_result(args, result)


def cmd_converge_h(args) -> int:
    system = _system(args)
    f = _integrand(args, system)
    diam = _diameter(args, system)
    ref = _reference(args, system, f, diam)
    if args.h:
        hs = _floats(args.h)
    else:
        h0 = args.h0 if args.h0 else diam / 2.0
        hs = [h0 / 2**i for i in range(args.halvings + 1)]
    result = converge_h(system, f, args.degree, hs, reference=ref, diameter=diam, timing=not args.no_timing)
    print(f"fitted order = {result.fitted_order:.3f}", file=sys.stderr)
    return _emit_result(args, result)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fractal-cubature", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, system=True):
        if system:
            p.add_argument("--config", help="system JSON file")
            p.add_argument("--gallery", help="built-in system name, e.g. cantor or vicsek:0.4")
            p.add_argument("--diameter", type=float, help="override the attractor diameter estimate")
        p.add_argument("--external-constants", action="store_true", help="enable externally sourced gallery systems")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--no-plot", action="store_true", help="skip the figure written next to --out")

    def integrand_opts(p):
        p.add_argument("--kappa", type=float, default=DEFAULT_KAPPA)
        p.add_argument("--x0", help="singularity location, comma separated (use --x0=-1,0 for negatives)")
        p.add_argument("--reference-h", type=float, help="coarse h of the reference computation")

    p = sub.add_parser("gallery", help="list built-in systems or print one as config JSON")
    p.add_argument("name", nargs="?")
    common(p, system=False)
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("sample", help="chaos-game points on the attractor")
    common(p)
    p.add_argument("--count", type=int, default=10_000)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("moments", help="polynomial moments up to a total degree")
    common(p)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("weights", help="cubature rule on the tensor Chebyshev grid of degree N")
    common(p)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("mesh", help="word mesh L_h")
    common(p)
    p.add_argument("--h", type=float, required=True)
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("integrate", help="integrate the Helmholtz kernel (p-version, or h-version with --h)")
    common(p)
    integrand_opts(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--h", type=float)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("converge-p", help="error against N")
    common(p)
    integrand_opts(p)
    p.add_argument("--degrees", default="2:20", help="'lo:hi' or comma list")
    p.add_argument("--no-timing", action="store_true", help="write 0 runtimes for byte-reproducible output")
    p.set_defaults(func=cmd_converge_p)

    p = sub.add_parser("converge-h", help="error against h")
    common(p)
    integrand_opts(p)
    p.add_argument("--degree", type=int, default=1, help="tensor degree k of the base rule")
    p.add_argument("--h", help="comma-separated descending h values")
    p.add_argument("--h0", type=float, help="first h when --h is not given (default diameter/2)")
    p.add_argument("--halvings", type=int, default=4)
    p.add_argument("--no-timing", action="store_true", help="write 0 runtimes for byte-reproducible output")
    p.set_defaults(func=cmd_converge_h)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
