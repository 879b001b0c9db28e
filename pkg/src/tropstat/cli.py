"""Command-line surface: file I/O, subcommands, and report emission.

Every command prints one JSON result envelope to stdout (floats rendered
with 12 significant digits, keys sorted, so seeded runs are byte
deterministic) and communicates failure through the exit-code contract:

    0 ok, 2 parse error, 3 dimension mismatch, 4 solver failure,
    5 bad parameter, 6 not separable, 7 not ultrametric.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .core import TropicalPoint, trop_distance
from .datagen import SimConfig, simulate_equidistant
from .experimental import fit_lda, fit_regression, lda_objective, regression_objective
from .location import (
    check_ultrametric_closure,
    fermat_weber,
    frechet_mean,
)
from .pca import fit_principal_polytope, pca_coordinates
from .svm import (
    LabeledSample,
    NotSeparableError,
    classify,
    load_model,
    model_to_dict,
    save_model,
    train_hard,
    train_soft,
    training_accuracy,
)
from .treeio import (
    DissimilarityMap,
    NewickError,
    cophenetic,
    parse_newick,
    serialize_newick,
    three_point_check,
    topology_id,
    ultrametric_to_tree,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_SOLVER = 4
EXIT_BAD_PARAM = 5
EXIT_NOT_SEPARABLE = 6
EXIT_NOT_ULTRAMETRIC = 7


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _round_floats(obj):
    """Re-render every float at 12 significant digits for stable output."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def emit(command, result, diagnostics=None, seed=None, status="ok", quiet=False):
    envelope = {
        "command": command,
        "status": status,
        "result": _round_floats(result),
        "diagnostics": _round_floats(diagnostics or {}),
        "seed": seed,
        "version": __version__,
    }
    if not quiet or status == "error":
        print(json.dumps(envelope, sort_keys=True))
    return envelope


def parse_vector(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise CliError(f"bad inline vector {text!r}: {exc}", EXIT_PARSE)


def read_points(path: str, header: bool) -> list[list[float]]:
    rows = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            for lineno, row in enumerate(reader, start=1):
                if header and lineno == 1:
                    continue
                if not row:
                    continue
                try:
                    rows.append([float(cell) for cell in row])
                except ValueError as exc:
                    raise CliError(f"{path}:{lineno}: {exc}", EXIT_PARSE)
                if len(rows) > 1 and len(rows[-1]) != len(rows[0]):
                    raise CliError(
                        f"{path}:{lineno}: ragged row ({len(rows[-1])} cells, "
                        f"expected {len(rows[0])})",
                        EXIT_PARSE,
                    )
    except OSError as exc:
        raise CliError(str(exc), EXIT_PARSE)
    if not rows:
        raise CliError(f"{path}: no data rows", EXIT_PARSE)
    return rows


def _points(rows) -> list[TropicalPoint]:
    try:
        return [TropicalPoint(tuple(r)) for r in rows]
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE)


def write_svg(path: str, coords, labels=None):
    """Minimal scatter plot; one circle marker per sample point."""
    xs = [c[0] for c in coords]
    ys = [c[1] for c in coords]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    span_x = max(hi_x - lo_x, 1e-9)
    span_y = max(hi_y - lo_y, 1e-9)
    W = H = 400
    pad = 30
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
    ]
    palette = ["#1f77b4", "#d62728"]
    for idx, (x, y) in enumerate(coords):
        px = pad + (x - lo_x) / span_x * (W - 2 * pad)
        py = H - pad - (y - lo_y) / span_y * (H - 2 * pad)
        color = palette[labels[idx] % 2] if labels else palette[0]
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="{color}"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


def cmd_metric(args):
    if "," in args.a:
        va, vb = parse_vector(args.a), parse_vector(args.b)
    else:
        va = read_points(args.a, args.header)[0]
        vb = read_points(args.b, args.header)[0]
    if len(va) != len(vb):
        raise CliError("vectors have different dimensions", EXIT_DIMENSION)
    d = trop_distance(TropicalPoint(tuple(va)), TropicalPoint(tuple(vb)))
    return emit("metric", {"distance": d}, quiet=args.quiet)


def _location(args, command):
    rows = read_points(args.points, args.header)
    pts = _points(rows)
    try:
        res = fermat_weber(pts) if command == "fw" else frechet_mean(pts)
    except (RuntimeError, ValueError) as exc:
        raise CliError(str(exc), EXIT_SOLVER)
    diagnostics = dict(res.diagnostics)
    if args.check_ultrametric:
        n = args.check_ultrametric
        if res.point.dim != n * (n - 1) // 2:
            raise CliError(
                f"dimension {res.point.dim} is not C({n},2)", EXIT_DIMENSION
            )
        closure = check_ultrametric_closure(res, n, tol=args.tol)
        diagnostics["ultrametric_closure"] = res.diagnostics["ultrametric_closure"]
        diagnostics["closure"] = bool(closure)
    result = {
        "point": list(res.point.coords),
        "objective": res.objective,
        "method": res.method,
    }
    return emit(command, result, diagnostics, quiet=args.quiet)


def cmd_pca(args):
    rows = read_points(args.points, args.header)
    pts = _points(rows)
    if not (1 <= args.s <= len(pts)):
        raise CliError(f"s={args.s} out of range 1..{len(pts)}", EXIT_BAD_PARAM)
    model = fit_principal_polytope(pts, args.s, seed=args.seed or 0)
    result = {
        "vertices": [list(v.coords) for v in model.polytope.vertices],
        "vertex_indices": list(model.vertex_indices),
        "objective": model.objective,
        "trace": list(model.trace),
    }
    diagnostics = {}
    if args.out_prefix:
        if args.s != 3:
            diagnostics["plots"] = "skipped (2-D coordinates require s=3)"
        else:
            coords = pca_coordinates(model, pts)
            csv_path = f"{args.out_prefix}.coords.csv"
            with open(csv_path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                for x, y in coords:
                    writer.writerow([f"{x:.12g}", f"{y:.12g}"])
            svg_path = f"{args.out_prefix}.svg"
            write_svg(svg_path, coords)
            diagnostics["coords_csv"] = csv_path
            diagnostics["svg"] = svg_path
    return emit("pca", result, diagnostics, seed=args.seed or 0, quiet=args.quiet)


def cmd_svm(args):
    if args.action == "train":
        rows = read_points(args.data, args.header)
        labels = []
        feats = []
        for row in rows:
            label = row[-1]
            if label not in (0.0, 1.0):
                raise CliError(f"label {label} is not 0/1", EXIT_PARSE)
            labels.append(int(label))
            feats.append(row[:-1])
        sample = LabeledSample(
            tuple(TropicalPoint(tuple(f)) for f in feats), tuple(labels)
        )
        try:
            if args.mode == "hard":
                model = train_hard(sample)
            else:
                model = train_soft(sample, args.C)
        except NotSeparableError as exc:
            raise CliError(str(exc), EXIT_NOT_SEPARABLE)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_BAD_PARAM)
        if args.model_out:
            save_model(model, args.model_out)
        result = model_to_dict(model)
        diagnostics = {
            "training_accuracy": training_accuracy(model, sample),
            "slack_summary": model.slack_summary,
            "objective": model.objective,
        }
        return emit("svm-train", result, diagnostics, quiet=args.quiet)
    # predict
    if not args.model:
        raise CliError("predict requires --model", EXIT_BAD_PARAM)
    try:
        model = load_model(args.model)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise CliError(f"bad model file: {exc}", EXIT_PARSE)
    if model.omega.dim != len(read_points(args.data, args.header)[0]):
        raise CliError("model and data dimensions differ", EXIT_DIMENSION)
    rows = read_points(args.data, args.header)
    labels = [classify(model, TropicalPoint(tuple(r))) for r in rows]
    for label in labels:
        print(label)
    return emit("svm-predict", {"labels": labels}, quiet=True)


def _read_newick_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise CliError(str(exc), EXIT_PARSE)
    trees = []
    for lineno, line in enumerate(lines, start=1):
        try:
            trees.append(parse_newick(line))
        except NewickError as exc:
            raise CliError(f"{path}:{lineno}: {exc}", EXIT_PARSE)
    if not trees:
        raise CliError(f"{path}: no trees", EXIT_PARSE)
    return trees


def cmd_tree(args):
    if args.action == "newick2ultra":
        trees = _read_newick_lines(args.input)
        vectors = [cophenetic(t) for t in trees]
        lines = [",".join(f"{v:.12g}" for v in u.values) for u in vectors]
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
        else:
            for line in lines:
                print(line)
        result = {
            "n_trees": len(trees),
            "n_leaves": vectors[0].n_leaves,
            "leaf_names": list(vectors[0].leaf_names),
            "vectors": [list(u.values) for u in vectors],
        }
        return emit("tree-newick2ultra", result, quiet=True if not args.out else args.quiet)

    if args.action == "ultra2newick":
        rows = read_points(args.input, args.header)
        newicks = []
        for lineno, row in enumerate(rows, start=1):
            u = _row_to_map(row, lineno)
            if not three_point_check(u, tol=args.tol):
                raise CliError(
                    f"row {lineno} fails the three-point condition",
                    EXIT_NOT_ULTRAMETRIC,
                )
            newicks.append(serialize_newick(ultrametric_to_tree(u, tol=args.tol)))
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write("\n".join(newicks) + "\n")
        else:
            for line in newicks:
                print(line)
        return emit("tree-ultra2newick", {"n_trees": len(newicks)},
                    quiet=True if not args.out else args.quiet)

    if args.action == "check":
        rows = read_points(args.input, args.header)
        verdicts = []
        maps = []
        for lineno, row in enumerate(rows, start=1):
            u = _row_to_map(row, lineno)
            maps.append(u)
            verdicts.append(bool(three_point_check(u, tol=args.tol)))
        result = {
            "all_ultrametric": all(verdicts),
            "verdicts": verdicts,
            "n_leaves": maps[0].n_leaves,
        }
        if maps[0].n_leaves == 4 and all(verdicts):
            ids = {topology_id(ultrametric_to_tree(u, tol=args.tol)) for u in maps}
            result["topology_count"] = len(ids)
        return emit("tree-check", result, quiet=args.quiet)

    # simulate
    if args.n is None or args.count is None:
        raise CliError("simulate requires --n and --count", EXIT_BAD_PARAM)
    try:
        cfg = SimConfig(args.n, args.height, args.seed or 0, args.count)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_BAD_PARAM)
    trees = simulate_equidistant(cfg)
    lines = [serialize_newick(t) for t in trees]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    ids = {topology_id(t) for t in trees}
    result = {
        "n_trees": len(trees),
        "n_leaves": args.n,
        "height": args.height,
        "distinct_topologies": len(ids),
    }
    return emit("tree-simulate", result, seed=args.seed or 0,
                quiet=True if not args.out else args.quiet)


def _row_to_map(row, lineno):
    e = len(row)
    n = round((1 + (1 + 8 * e) ** 0.5) / 2)
    if n * (n - 1) // 2 != e:
        raise CliError(
            f"row {lineno}: length {e} is not a binomial C(N,2)", EXIT_DIMENSION
        )
    width = len(str(n))
    names = tuple(f"t{k:0{width}d}" for k in range(1, n + 1))
    try:
        return DissimilarityMap(n, tuple(row), names)
    except ValueError as exc:
        raise CliError(f"row {lineno}: {exc}", EXIT_PARSE)


def cmd_lda(args):
    S1 = _points(read_points(args.class0, args.header))
    S2 = _points(read_points(args.class1, args.header))
    if S1[0].dim != S2[0].dim:
        raise CliError("class files have different dimensions", EXIT_DIMENSION)
    cand = fit_lda(S1, S2, seed=args.seed or 0)
    result = {
        "experimental": True,
        "objective": cand.objective,
        "vertices": [list(v.coords) for v in cand.polytope.vertices],
        "mu1": list(cand.mu1.coords),
        "mu2": list(cand.mu2.coords),
        "s1": cand.s1,
        "s2": cand.s2,
    }
    return emit("lda", result, seed=args.seed or 0, quiet=args.quiet)


def cmd_regress(args):
    rows = read_points(args.data, args.header)
    if len(rows[0]) < 2:
        raise CliError("need at least one feature column plus a response", EXIT_PARSE)
    data = [(tuple(r[:-1]), r[-1]) for r in rows]
    model = fit_regression(data, seed=args.seed or 0)
    result = {
        "experimental": True,
        "beta": list(model.beta),
        "residual_sum": model.residual_sum,
    }
    diagnostics = {
        "recomputed_residual": regression_objective(model.beta, data),
    }
    return emit("regress", result, diagnostics, seed=args.seed or 0, quiet=args.quiet)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropstat",
        description="Tropical (max-plus) statistics over the projective torus "
        "and the space of ultrametric trees.",
    )
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--header", action="store_true",
                        help="CSV inputs carry a header row")
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="tropical distance of two vectors")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_metric)

    for name in ("fw", "frechet"):
        p = sub.add_parser(name)
        p.add_argument("points")
        p.add_argument("--check-ultrametric", type=int, metavar="N", default=None)
        p.set_defaults(func=lambda args, name=name: _location(args, name))

    p = sub.add_parser("pca")
    p.add_argument("points")
    p.add_argument("-s", type=int, required=True)
    p.add_argument("--out-prefix", default=None)
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("svm")
    p.add_argument("action", choices=["train", "predict"])
    p.add_argument("data")
    p.add_argument("--mode", choices=["hard", "soft"], default="hard")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--model-out", default=None)
    p.add_argument("--model", default=None)
    p.set_defaults(func=cmd_svm)

    p = sub.add_parser("tree")
    p.add_argument(
        "action", choices=["newick2ultra", "ultra2newick", "check", "simulate"]
    )
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--height", type=float, default=1.0)
    p.add_argument("--count", type=int, default=None)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("lda")
    p.add_argument("class0")
    p.add_argument("class1")
    p.set_defaults(func=cmd_lda)

    p = sub.add_parser("regress")
    p.add_argument("data")
    p.set_defaults(func=cmd_regress)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("svm", "tree") and args.action != "simulate" and (
            getattr(args, "data", None) is None and getattr(args, "input", None) is None
        ):
            raise CliError("missing input file", EXIT_BAD_PARAM)
        args.func(args)
        return EXIT_OK
    except CliError as exc:
        emit(args.command, {"message": str(exc)}, status="error", quiet=False)
        return exc.code
    except NewickError as exc:
        emit(args.command, {"message": str(exc)}, status="error", quiet=False)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
