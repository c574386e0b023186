"""Command-line front end: JSON on stdout, summaries on stderr.

Exit codes: 0 pass, 1 check failure, 2 validation error, 64 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .construct import (
    MIXED_TOL,
    ORBIT_TOL,
    InvariantPointDescriptor,
    build,
    build_proper,
    equivariance_report,
    evaluate_detailed,
    properness_report,
)
from .ellipsoid import loewner_ellipsoid
from .errors import AffinvError, ValidationError
from .geometry import ConvexBody, hausdorff_distance
from .orbit import BumpParams, orbit_distance
from .points import BaseInvariantPointId, check_inclusion, evaluate_base
from .sampling import default_seed
from .svg import emit_svg
from .symmetry import affine_symmetry_group, fixed_point_set

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64
REALIZE_TOL = 1e-6
INCLUSION_TOL = 1e-6

log = logging.getLogger("affinv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(obj, out: str | None = None):
    text = _dump(obj)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    print(text)


def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"IoError: cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def load_body(ref: str) -> ConvexBody:
    """Read a body file, or a corpus fixture given as ``corpus:NAME``."""
    if ref.startswith("corpus:"):
        try:
            return corpus_mod.get(ref.split(":", 1)[1]).body
        except KeyError:
            raise ValidationError(f"no corpus fixture named {ref[7:]!r}") from None
    data = _read_json(ref)
    try:
        return ConvexBody.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed body JSON in {ref}: {exc}") from None


def load_descriptor(path: str) -> InvariantPointDescriptor:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ValidationError("descriptor JSON must be an object")
    return InvariantPointDescriptor.from_dict(data)


def _vec(v) -> list:
    return [float(c) for c in np.asarray(v).ravel()]


# subcommands -----------------------------------------------------------------

def cmd_compute(args) -> int:
    K = load_body(args.body)
    pid = BaseInvariantPointId.parse(args.point)
    out = {"point_id": pid.value, "point": _vec(evaluate_base(pid, K))}
    if pid is BaseInvariantPointId.LOEWNER_CENTER:
        E = loewner_ellipsoid(K)
        out["ellipsoid"] = E.to_dict()
        out["gap"] = E.gap
    _emit(out)
    return EXIT_OK


def cmd_symmetry(args) -> int:
    G = affine_symmetry_group(load_body(args.body), args.tol)
    _emit(G.to_dict())
    print(f"stabilizer order {G.order}", file=sys.stderr)
    return EXIT_OK


def cmd_fixed_set(args) -> int:
    S = fixed_point_set(affine_symmetry_group(load_body(args.body)))
    out = S.to_dict()
    out["dim"] = S.dim
    _emit(out)
    return EXIT_OK


def cmd_dist(args) -> int:
    A, K = load_body(args.body), load_body(args.base)
    if args.mode == "hausdorff":
        _emit({"hausdorff": hausdorff_distance(A, K)})
    else:
        _emit(orbit_distance(A, K).to_dict())
    return EXIT_OK


def cmd_construct(args) -> int:
    K = load_body(args.body)
    bump = BumpParams(args.inner, args.outer)
    if args.proper:
        desc = build_proper(K, args.target, args.base_point, bump, seed=args.seed)
        print(f"calibration: {desc.calibration}", file=sys.stderr)
    else:
        desc = build(K, args.target, args.base_point, bump)
    _emit(desc.to_dict(), args.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    desc = load_descriptor(args.descriptor)
    tr = evaluate_detailed(desc, load_body(args.body))
    _emit({
        "point": _vec(tr.point),
        "weight": tr.weight,
        "objective": tr.objective,
        "orbit_point": None if tr.orbit_point is None else _vec(tr.orbit_point),
        "base_value": _vec(tr.base_value),
    })
    return EXIT_OK


def default_descriptor() -> InvariantPointDescriptor:
    return build(corpus_mod.SQUARE, (0.0, 0.0))


def run_verify_suite(args) -> tuple[int, dict]:
    """Realization, equivariance, inclusion and (proper mode) properness checks."""
    desc = load_descriptor(args.descriptor) if args.descriptor else default_descriptor()
    K = desc.base_body
    checks = {}

    trace = evaluate_detailed(desc, K)
    err = float(np.linalg.norm(trace.point - desc.x))
    checks["realization"] = {"error": err, "tolerance": REALIZE_TOL * K.diameter,
                             "pass": err <= REALIZE_TOL * K.diameter}

    eq = equivariance_report(desc, args.trials, args.seed, noise_level=args.noise)
    eq_dict = eq.to_dict()
    if not args.full_trials:
        eq_dict.pop("trials")
    checks["equivariance"] = eq_dict

    G = affine_symmetry_group(K)
    checks["inclusion"] = {pid.value: check_inclusion(pid, K, INCLUSION_TOL, G).to_dict()
                           for pid in BaseInvariantPointId}
    checks["inclusion"]["pass"] = all(v["pass"] for v in checks["inclusion"].values())

    if desc.proper_mode:
        checks["properness"] = properness_report(desc, args.properness_trials, args.seed).to_dict()

    failures = sorted(name for name, c in checks.items() if not c["pass"])
    report = {
        "descriptor": desc.to_dict(),
        "seed": args.seed,
        "checks": checks,
        "failures": failures,
        "continuity": "empirical only: the orbit distance is continuous where the optimizer "
                      "tracks the true minimum; seam continuity is not certified",
        "pass": not failures,
    }
    if args.figures:
        fig_dir = Path(args.figures)
        fig_dir.mkdir(parents=True, exist_ok=True)
        from .plotting import plot_bodies, plot_equivariance
        plot_equivariance(eq, fig_dir / "equivariance.png", ORBIT_TOL, MIXED_TOL)
        plot_bodies([K], [desc.x], fig_dir / "descriptor.png", "base body and target")
        emit_svg([K], [desc.x], fig_dir / "descriptor.svg")
        report["figures"] = sorted(p.name for p in fig_dir.iterdir()
                                   if p.name in ("equivariance.png", "descriptor.png", "descriptor.svg"))
    return (EXIT_OK if not failures else EXIT_FAIL), report


def cmd_verify(args) -> int:
    code, report = run_verify_suite(args)
    _emit(report, args.out)
    eq = report["checks"]["equivariance"]
    print(f"equivariance max rel err {eq['max_rel_err']:.3e} (orbit {eq['max_orbit_err']:.3e}); "
          f"failures: {', '.join(report['failures']) or 'none'}", file=sys.stderr)
    return code


def cmd_plot(args) -> int:
    bodies = [load_body(b) for b in args.body or []]
    points = [tuple(p) for p in args.point or []]
    if args.descriptor:
        desc = load_descriptor(args.descriptor)
        bodies.insert(0, desc.base_body)
        points.insert(0, tuple(desc.target))
    written = [str(emit_svg(bodies, points, args.out))]
    if args.png:
        from .plotting import plot_bodies
        written.append(str(plot_bodies(bodies, points, args.png)))
    _emit({"written": written, "bodies": len(bodies), "points": len(points)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="affinv", description="Affine invariant points of convex polygons.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("compute", help="evaluate a built-in invariant point")
    s.add_argument("--point", required=True, choices=["centroid", "loewner-center", "loewner_center"])
    s.add_argument("--body", required=True)
    s.set_defaults(func=cmd_compute)

    s = sub.add_parser("symmetry", help="affine stabilizer of a body")
    s.add_argument("--body", required=True)
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(func=cmd_symmetry)

    s = sub.add_parser("fixed-set", help="points fixed by the stabilizer")
    s.add_argument("--body", required=True)
    s.set_defaults(func=cmd_fixed_set)

    s = sub.add_parser("dist", help="orbit or Hausdorff distance")
    s.add_argument("--mode", choices=["orbit", "hausdorff"], default="orbit")
    s.add_argument("--body", required=True)
    s.add_argument("--base", required=True)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("construct", help="build a descriptor with p(K) = target")
    s.add_argument("--body", required=True)
    s.add_argument("--target", required=True, type=float, nargs="+")
    s.add_argument("--proper", action="store_true")
    s.add_argument("--base-point", default="centroid")
    s.add_argument("--inner", type=float, default=BumpParams().inner)
    s.add_argument("--outer", type=float, default=BumpParams().outer)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("evaluate", help="evaluate a descriptor on a body")
    s.add_argument("--descriptor", required=True)
    s.add_argument("--body", required=True)
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("verify", help="run the verification suite")
    s.add_argument("--descriptor", help="defaults to the square-center descriptor")
    s.add_argument("--trials", type=int, default=90)
    s.add_argument("--properness-trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--noise", type=float, default=0.005)
    s.add_argument("--figures", help="directory for PNG/SVG figures")
    s.add_argument("--full-trials", action="store_true", help="include per-trial records")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("plot", help="render bodies and points to SVG (and PNG)")
    s.add_argument("--body", action="append")
    s.add_argument("--point", action="append", type=float, nargs=2)
    s.add_argument("--descriptor")
    s.add_argument("--out", required=True)
    s.add_argument("--png")
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "seed", "absent") is None:
        args.seed = default_seed()
    try:
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AffinvError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"IoError: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
