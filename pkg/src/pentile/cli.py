"""Command-line front end.

Subcommands tie the catalog, solver, tiling generator, verifier and
statistics together into reproducible runs. Angles are degrees at this
surface and radians inside; numeric output is rounded to nine significant
digits so identical configurations give identical bytes.

Exit codes: 0 success (property holds), 1 a checked property fails,
2 usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import arrangement, render, stats, tiling, verifier
from .catalog import TYPE_IDS, get_type_spec, representative
from .errors import ParseError, PentileError
from .pentagon import (
    Pentagon,
    pentagon_from_json_dict,
    satisfied_relations,
)

DEFAULT_TOL_DEG = 1e-4


def _round9(obj):
    """Round every float to 9 significant digits, recursively."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.9g}")
    if isinstance(obj, dict):
        return {k: _round9(x) for k, x in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(x) for x in obj]
    return obj


def _emit(document, out_path: str | None) -> None:
    text = json.dumps(_round9(document), sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_text(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_json(report) -> dict:
    return {"pass": report.ok, "violations": report.violations,
            "metrics": report.metrics}


def _load_json_file(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None


def _resolve_pentagon(args) -> Pentagon:
    if getattr(args, "pentagon", None):
        return pentagon_from_json_dict(_load_json_file(args.pentagon))
    if getattr(args, "type", None) is not None:
        return representative(args.type).pentagon
    raise ParseError("give a pentagon with --pentagon FILE or --type ID")


def _resolve_recipe(args) -> tiling.TilingRecipe:
    if getattr(args, "recipe", None):
        return tiling.load_recipe(_load_json_file(args.recipe))
    if getattr(args, "type", None) is None:
        raise ParseError("give a recipe with --recipe FILE or --type ID")
    pentagon = (_resolve_pentagon(args) if getattr(args, "pentagon", None)
                else representative(args.type).pentagon)
    return tiling.builtin_recipe(args.type, pentagon)


def _resolve_patch(args) -> arrangement.Patch:
    if getattr(args, "patch", None):
        return arrangement.patch_from_json_dict(
            _load_json_file(args.patch), snap_eps=args.snap_eps)
    recipe = _resolve_recipe(args)
    if args.r is None:
        raise ParseError("give --r to generate a patch")
    return tiling.generate_patch(recipe, args.r, snap_eps=args.snap_eps)


def _spec_json(type_id: int) -> dict:
    spec = get_type_spec(type_id)
    rep = representative(type_id)
    return {
        "id": spec.id,
        "angle_equations": [eq.text.replace(" ", "")
                            for eq in spec.angle_eqs],
        "edge_classes": ["=".join(cls) for cls in spec.edge_classes],
        "edge_equations": [eq.text.replace(" ", "")
                           for eq in spec.edge_eqs],
        "degrees_of_freedom": spec.dof,
        "representative": {
            "angles_deg": [math.degrees(a) for a in rep.pentagon.angles],
            "edges": list(rep.pentagon.edges),
            "note": rep.note,
        },
    }


def cmd_catalog(args) -> int:
    if args.action == "show" and args.id is None:
        raise ParseError("catalog show needs a Type id")
    if args.action == "list":
        _emit([{"id": tid,
                "angle_equations": [eq.text.replace(" ", "") for eq in
                                    get_type_spec(tid).angle_eqs],
                "degrees_of_freedom": get_type_spec(tid).dof}
               for tid in TYPE_IDS], args.out)
        return 0
    _emit(_spec_json(args.id), args.out)
    return 0


def cmd_theorem1(args) -> int:
    pentagon = _resolve_pentagon(args)
    tol = math.radians(args.tol_deg)
    hits = satisfied_relations(pentagon, tol=tol)
    _emit({"satisfied": [rel.name for rel in hits],
           "holds": bool(hits),
           "tol_deg": args.tol_deg}, args.out)
    return 0 if hits else 1


def cmd_tile(args) -> int:
    recipe = _resolve_recipe(args)
    if args.r is None:
        raise ParseError("give --r, the patch radius")
    patch = tiling.generate_patch(recipe, args.r, snap_eps=args.snap_eps)
    document = patch.to_json_dict()
    document["recipe"] = recipe.to_json_dict()
    _emit(document, args.out)
    if args.svg:
        _write_text(render.patch_to_svg(patch), args.svg)
    return 0


def cmd_verify(args) -> int:
    reports = []
    if args.patch:
        patch = _resolve_patch(args)
        reports.append(verifier.verify_patch(patch, tol=args.area_tol))
    else:
        recipe = _resolve_recipe(args)
        reports.append(verifier.check_periodicity(recipe, tol=args.area_tol))
        if args.r is not None:
            patch = tiling.generate_patch(recipe, args.r,
                                          snap_eps=args.snap_eps)
            reports.append(verifier.verify_patch(patch, tol=args.area_tol))
    report = reports[0]
    for extra in reports[1:]:
        report = report.merge(extra)
    _emit(_report_json(report), args.out)
    return 0 if report.ok else 1


def cmd_stats(args) -> int:
    patch = _resolve_patch(args)
    st = stats.compute_stats(patch, mode=args.mode)
    document = {
        "mode": st.mode, "r": st.r,
        "v": st.v, "e": st.e, "t": st.t,
        "t_h": {str(h): n for h, n in sorted(st.t_h.items())},
        "v_j": {str(j): n for j, n in sorted(st.v_j.items())},
        "average_valence": stats.average_valence(st),
        "average_adjacents": stats.average_adjacents(st),
    }
    if st.mode == stats.FULL:
        document["euler_residual"] = stats.euler_residual(st)
    _emit(document, args.out)
    return 0


def cmd_sweep(args) -> int:
    recipe = _resolve_recipe(args)
    radii = _parse_radii(args.radii)
    limit = stats.limit_sweep(recipe, radii)
    document = limit.to_json_dict()
    document["per_radius_balance_residual"] = (
        stats.per_radius_balance_residuals(limit))
    _emit(document, args.out)
    if args.csv:
        import io

        buffer = io.StringIO()
        stats.write_sweep_csv(limit, buffer)
        _write_text(buffer.getvalue(), args.csv)
    return 0


def cmd_render(args) -> int:
    patch = _resolve_patch(args)
    _write_text(render.patch_to_svg(patch), args.out)
    return 0


def _parse_radii(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"bad radii list {text!r}; "
                         "expected comma-separated numbers") from None


def _add_pentagon_args(sub, with_type=True):
    if with_type:
        sub.add_argument("--type", type=int, help="catalog Type id")
    sub.add_argument("--pentagon", help="pentagon JSON file")


def _add_patch_args(sub):
    sub.add_argument("--recipe", help="tiling recipe JSON file")
    sub.add_argument("--patch", help="patch JSON file")
    sub.add_argument("--r", type=float, help="patch disk radius")
    sub.add_argument("--snap-eps", type=float, default=None,
                     help="vertex merge distance override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pentile",
        description="Convex pentagon tilings: catalog, patches, statistics.")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("catalog", help="list the 15 Types or show one")
    sub.add_argument("action", choices=["list", "show"])
    sub.add_argument("id", type=int, nargs="?",
                     help="Type id, required for show")
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_catalog)

    sub = commands.add_parser(
        "theorem1", help="which three-angle relations a pentagon satisfies")
    _add_pentagon_args(sub)
    sub.add_argument("--tol-deg", type=float, default=DEFAULT_TOL_DEG)
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_theorem1)

    sub = commands.add_parser("tile", help="generate a patch as JSON")
    _add_pentagon_args(sub)
    _add_patch_args(sub)
    sub.add_argument("--out")
    sub.add_argument("--svg")
    sub.set_defaults(func=cmd_tile)

    sub = commands.add_parser("verify", help="check recipe or patch health")
    _add_pentagon_args(sub)
    _add_patch_args(sub)
    sub.add_argument("--area-tol", type=float, default=verifier.AREA_TOL)
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_verify)

    sub = commands.add_parser("stats", help="count vertices, edges, tiles")
    _add_pentagon_args(sub)
    _add_patch_args(sub)
    sub.add_argument("--mode", choices=[stats.FULL, stats.INTERIOR],
                     default=stats.FULL)
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_stats)

    sub = commands.add_parser(
        "sweep", help="limit statistics over growing radii")
    _add_pentagon_args(sub)
    sub.add_argument("--recipe", help="tiling recipe JSON file")
    sub.add_argument("--radii", required=True,
                     help="comma-separated increasing radii")
    sub.add_argument("--snap-eps", type=float, default=None)
    sub.add_argument("--out")
    sub.add_argument("--csv")
    sub.set_defaults(func=cmd_sweep)

    sub = commands.add_parser("render", help="patch to SVG")
    _add_pentagon_args(sub)
    _add_patch_args(sub)
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PentileError as exc:
        _error_json(exc)
        return 2


def _error_json(exc: Exception) -> None:
    sys.stderr.write(json.dumps(
        {"error": type(exc).__name__, "message": str(exc)},
        sort_keys=True) + "\n")


if __name__ == "__main__":
    sys.exit(main())
