"""Batch command-line interface.

Subcommands: synth, train, reproduce, condition, blend, compare. Report
commands emit delimited numeric series (csv or json) and render a PNG
figure alongside each output file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import baselines, metrics, promp, riemannian_promp, synth
from .basis import BasisConfig, phase_from_times
from .errors import ConvergenceError, GeoPrompError, InvalidArgumentError
from .gaussians import RiemannianGaussian
from .io import (
    columns_for_tag,
    file_checksum,
    load_model,
    read_trajectory,
    save_model,
    write_trajectory,
)
from .manifolds import Euclidean, Sphere, manifold_from_tag
from .plotting import plot_metric_bars, plot_series
from .promp import EuclideanPromp, ViaPoint
from .riemannian_promp import FullPosePromp, RiemannianPromp

EXIT_INVALID = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _csv_lines(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _parse_vector(text, name):
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise InvalidArgumentError(f"cannot parse {name}: {text!r}") from exc


def _parse_sigma(text, dim):
    values = _parse_vector(text, "--via-sigma")
    if values.size == 1:
        return float(values[0]) * np.eye(dim)
    if values.size == dim * dim:
        return values.reshape(dim, dim)
    raise InvalidArgumentError(
        f"--via-sigma needs 1 (isotropic) or {dim * dim} (full matrix) values"
    )


def _scale_sigma(cov, factor):
    return factor * cov


def _add_hyper_flags(p):
    p.add_argument("--n-basis", type=int, default=30)
    p.add_argument("--width", type=float, default=0.01)
    p.add_argument("--lambda", dest="ridge", type=float, default=promp.DEFAULT_RIDGE)
    p.add_argument("--lambda-reg", dest="weight_reg", type=float, default=1e-6)
    p.add_argument("--eta", type=float, default=0.005)
    p.add_argument("--eta-max", type=float, default=0.03)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=2000)


def _add_output_flags(p):
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true", help="skip the PNG next to --out")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="geopromp",
        description="Learn, adapt, and blend trajectory distributions on "
        "spheres and full-pose spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic demonstration files")
    p.add_argument("--kind", choices=("letter-curve", "reorient-like", "key-turn-like", "import-2d"), required=True)
    p.add_argument("--letter", default="s")
    p.add_argument("--n-demos", type=int, default=8)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--noise", type=float, default=0.03)
    p.add_argument("--rotation-deg", type=float, default=90.0)
    p.add_argument("--radius", type=float, default=synth.DEFAULT_LIFT_RADIUS)
    p.add_argument("--input", help="2D CSV curve for --kind import-2d")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train a model from demonstration files")
    p.add_argument("demos", nargs="+")
    _add_hyper_flags(p)
    p.add_argument("--resample", type=int, default=riemannian_promp.DEFAULT_RESAMPLE)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("reproduce", help="emit the marginal mean and std band")
    p.add_argument("model")
    _add_output_flags(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("condition", help="via-point conditioning, then reproduce")
    p.add_argument("model")
    p.add_argument("--via-phase", type=float)
    p.add_argument("--via-time", type=float, help="seconds; mapped via the mean demo duration")
    p.add_argument("--via-position", help="x,y,z target for the position part")
    p.add_argument("--via-quat", help="qw,qx,qy,qz target for the orientation part")
    p.add_argument("--via-point", help="ambient target for plain S2/S3/R models")
    p.add_argument("--via-sigma", default="1e-3")
    p.add_argument("--out-model", help="also save the conditioned model here")
    _add_output_flags(p)
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("blend", help="crossfade two models with a sigmoid schedule")
    p.add_argument("models", nargs=2)
    p.add_argument("--alpha-mid", type=float, default=0.5)
    p.add_argument("--alpha-k", type=float, default=15.0)
    _add_output_flags(p)
    p.set_defaults(func=cmd_blend)

    p = sub.add_parser("compare", help="Riemannian vs Euler vs unit-norm on one dataset")
    p.add_argument("demos", nargs="+")
    _add_hyper_flags(p)
    p.add_argument("--via-phase", type=float, default=0.8)
    p.add_argument("--via-quat", required=True)
    p.add_argument("--via-sigma", default="1e-3")
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_compare)

    return parser


def cmd_synth(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.kind == "letter-curve":
        demos = synth.make_letter_demos(
            args.letter, args.n_demos, args.samples, args.noise, args.seed, args.radius
        )
        tag = "S2"
    elif args.kind == "import-2d":
        if not args.input:
            raise InvalidArgumentError("--kind import-2d requires --input")
        curve = np.loadtxt(args.input, delimiter=",", comments="#", ndmin=2)
        if curve.shape[1] != 2:
            raise InvalidArgumentError("--input must be a two-column 2D curve")
        demos = []
        base = synth.lift_2d_to_s2(curve, args.radius)
        s2 = Sphere(2)
        for d in range(args.n_demos):
            rng = np.random.default_rng(args.seed + 1000 * d)
            eps = synth.smooth_noise(rng, base.shape[0], 2, args.noise)
            points = np.vstack([s2.exp(q, e) for q, e in zip(base, eps)])
            times = np.linspace(0.0, synth.DEFAULT_DURATION, base.shape[0])
            demos.append((times, points))
        tag = "S2"
    elif args.kind == "reorient-like":
        demos = synth.make_reorient_demos(
            args.n_demos, args.samples, args.rotation_deg, args.noise, args.seed
        )
        tag = "R3xS3"
    else:
        demos = synth.make_keyturn_demos(
            args.n_demos, args.samples, args.rotation_deg, args.noise, args.seed
        )
        tag = "R3xS3"
    for i, (times, values) in enumerate(demos):
        write_trajectory(out_dir / f"demo_{i:02d}.csv", tag, times, values)
    print(f"wrote {len(demos)} {tag} demos to {out_dir}")


def _load_demos(paths):
    tag = None
    demos = []
    for path in paths:
        t, times, values = read_trajectory(path)
        if tag is None:
            tag = t
        elif t != tag:
            raise InvalidArgumentError(f"{path}: manifold tag {t} differs from {tag}")
        demos.append((times, values))
    return tag, demos


def cmd_train(args):
    tag, demos = _load_demos(args.demos)
    config = BasisConfig(args.n_basis, args.width)
    manifold = manifold_from_tag(tag)
    fit_kwargs = dict(
        eta=args.eta,
        eta_max=args.eta_max,
        tol=args.tol,
        max_iter=args.max_iter,
        weight_reg=args.weight_reg,
        resample_size=args.resample,
    )
    if tag == "R3xS3":
        model = riemannian_promp.fullpose_fit(demos, config, ridge=args.ridge, **fit_kwargs)
    elif isinstance(manifold, Sphere):
        if manifold.m == 3:
            model = riemannian_promp.fit_s3(demos, config, **fit_kwargs)
        else:
            model = riemannian_promp.fit(demos, config, manifold, **fit_kwargs)
    elif isinstance(manifold, Euclidean):
        model = promp.fit(demos, config, ridge=args.ridge, weight_reg=args.weight_reg)
    else:
        raise InvalidArgumentError(f"cannot train on manifold tag {tag}")
    metadata = {
        "manifold": tag,
        "hyperparameters": {
            "n_basis": args.n_basis,
            "width": args.width,
            "lambda": args.ridge,
            "lambda_reg": args.weight_reg,
            "eta": args.eta,
            "eta_max": args.eta_max,
            "tol": args.tol,
            "max_iter": args.max_iter,
        },
        "mean_duration": float(np.mean([t[-1] - t[0] for t, _ in demos])),
        "demo_checksums": {str(p): file_checksum(p) for p in args.demos},
    }
    save_model(args.out, model, metadata)
    print(f"trained {tag} model -> {args.out}")


def _model_tag(model):
    from .manifolds import manifold_tag

    if isinstance(model, FullPosePromp):
        return "R3xS3"
    if isinstance(model, RiemannianPromp):
        return manifold_tag(model.manifold)
    return f"R{model.dim}"


def _series(model, phases):
    """(mean, std, mean_labels, std_labels) over a phase grid."""
    if isinstance(model, FullPosePromp):
        rows_mean, rows_std = [], []
        for z in phases:
            pos, ori = model.marginal(z)
            rows_mean.append(np.concatenate([pos.mean, ori.mean]))
            rows_std.append(
                np.concatenate(
                    [np.sqrt(np.diag(pos.covariance)), np.sqrt(np.diag(ori.covariance))]
                )
            )
        labels = columns_for_tag("R3xS3")
        std_labels = ["std_x", "std_y", "std_z", "std_t1", "std_t2", "std_t3"]
        return np.vstack(rows_mean), np.vstack(rows_std), labels, std_labels
    if isinstance(model, RiemannianPromp):
        rows_mean, rows_std = [], []
        for z in phases:
            g = model.marginal(z)
            rows_mean.append(g.mean)
            rows_std.append(np.sqrt(np.diag(g.covariance)))
        labels = columns_for_tag(_model_tag(model))
        m = model.manifold.intrinsic_dim
        std_labels = [f"std_t{i + 1}" for i in range(m)]
        return np.vstack(rows_mean), np.vstack(rows_std), labels, std_labels
    rows_mean, rows_std = [], []
    for z in phases:
        g = model.marginal(z)
        rows_mean.append(g.mean)
        rows_std.append(np.sqrt(np.diag(g.covariance)))
    labels = columns_for_tag(f"R{model.dim}")
    return np.vstack(rows_mean), np.vstack(rows_std), labels, [f"std_{c}" for c in labels]


def _write_series(args, phases, mean, std, labels, std_labels, title):
    out = Path(args.out)
    if args.format == "csv":
        rows = np.column_stack([phases, mean, std])
        out.write_text(_csv_lines(["phase"] + labels + std_labels, rows))
    else:
        doc = {
            "phases": phases.tolist(),
            "columns": labels,
            "mean": mean.tolist(),
            "std_columns": std_labels,
            "std": std.tolist(),
        }
        out.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if not args.no_figure:
        plot_series(out.with_suffix(".png"), phases, mean, std=None, labels=labels, title=title)
    print(f"wrote series -> {out}")


def cmd_reproduce(args):
    model, _ = load_model(args.model)
    phases = np.linspace(0.0, 1.0, args.grid)
    mean, std, labels, std_labels = _series(model, phases)
    _write_series(args, phases, mean, std, labels, std_labels, "marginal mean")


def _resolve_phase(args, metadata):
    if args.via_phase is not None:
        return args.via_phase
    if args.via_time is not None:
        duration = metadata.get("mean_duration")
        if not duration:
            raise InvalidArgumentError("--via-time needs a model trained with duration metadata")
        return riemannian_promp.time_to_phase(args.via_time, duration)
    raise InvalidArgumentError("need --via-phase or --via-time")


def cmd_condition(args):
    model, metadata = load_model(args.model)
    z = _resolve_phase(args, metadata)
    if isinstance(model, FullPosePromp):
        pos_via = None
        ori_via = None
        if args.via_position:
            target = _parse_vector(args.via_position, "--via-position")
            pos_via = ViaPoint(z, target, _parse_sigma(args.via_sigma, 3))
        if args.via_quat:
            target = _parse_vector(args.via_quat, "--via-quat")
            ori_via = ViaPoint(z, target, _parse_sigma(args.via_sigma, 3))
        if pos_via is None and ori_via is None:
            raise InvalidArgumentError("full-pose conditioning needs --via-position and/or --via-quat")
        conditioned = model.condition(pos_via, ori_via)
    elif isinstance(model, RiemannianPromp):
        text = args.via_point or args.via_quat
        if not text:
            raise InvalidArgumentError("need --via-point (or --via-quat for S3 models)")
        target = _parse_vector(text, "--via-point")
        via = ViaPoint(z, target, _parse_sigma(args.via_sigma, model.manifold.intrinsic_dim))
        conditioned = model.condition(via)
    else:
        if not args.via_point:
            raise InvalidArgumentError("need --via-point for Euclidean models")
        target = _parse_vector(args.via_point, "--via-point")
        via = ViaPoint(z, target, _parse_sigma(args.via_sigma, model.dim))
        conditioned = model.condition(via)
    if args.out_model:
        save_model(args.out_model, conditioned, metadata)
    phases = np.linspace(0.0, 1.0, args.grid)
    mean, std, labels, std_labels = _series(conditioned, phases)
    _write_series(args, phases, mean, std, labels, std_labels, f"conditioned at z={z:.3f}")


def _sigmoid_alphas(phases, mid, k):
    a2 = 1.0 / (1.0 + np.exp(-k * (phases - mid)))
    return np.column_stack([1.0 - a2, a2])


def cmd_blend(args):
    model_a, _ = load_model(args.models[0])
    model_b, _ = load_model(args.models[1])
    if type(model_a) is not type(model_b):
        raise InvalidArgumentError("can only blend models of the same kind")
    phases = np.linspace(0.0, 1.0, args.grid)
    alphas = _sigmoid_alphas(phases, args.alpha_mid, args.alpha_k)
    rows_mean, rows_std = [], []
    if isinstance(model_a, FullPosePromp):
        for z, a in zip(phases, alphas):
            pos, ori = riemannian_promp.fullpose_blend([model_a, model_b], a, z)
            rows_mean.append(np.concatenate([pos.mean, ori.mean]))
            rows_std.append(
                np.concatenate(
                    [np.sqrt(np.diag(pos.covariance)), np.sqrt(np.diag(ori.covariance))]
                )
            )
        labels = columns_for_tag("R3xS3")
        std_labels = ["std_x", "std_y", "std_z", "std_t1", "std_t2", "std_t3"]
    elif isinstance(model_a, RiemannianPromp):
        for z, a in zip(phases, alphas):
            g = riemannian_promp.blend([model_a, model_b], a, z)
            rows_mean.append(g.mean)
            rows_std.append(np.sqrt(np.diag(g.covariance)))
        labels = columns_for_tag(_model_tag(model_a))
        std_labels = [f"std_t{i + 1}" for i in range(model_a.manifold.intrinsic_dim)]
    else:
        for z, a in zip(phases, alphas):
            g = promp.blend([model_a, model_b], a, z)
            rows_mean.append(g.mean)
            rows_std.append(np.sqrt(np.diag(g.covariance)))
        labels = columns_for_tag(f"R{model_a.dim}")
        std_labels = [f"std_{c}" for c in labels]
    mean = np.vstack(rows_mean)
    std = np.vstack(rows_std)
    _write_series(args, phases, mean, std, labels, std_labels, "sigmoid blend")


def cmd_compare(args):
    tag, demos = _load_demos(args.demos)
    if tag == "R3xS3":
        quat_demos = [(t, v[:, 3:]) for t, v in demos]
    elif tag == "S3":
        quat_demos = demos
    else:
        raise InvalidArgumentError("compare needs S3 or R3xS3 demonstrations")
    config = BasisConfig(args.n_basis, args.width)
    fit_kwargs = dict(
        eta=args.eta, eta_max=args.eta_max, tol=args.tol, max_iter=args.max_iter,
        weight_reg=args.weight_reg,
    )
    riem = riemannian_promp.fit_s3(quat_demos, config, **fit_kwargs)
    euler = baselines.fit_euler(quat_demos, config, ridge=args.ridge, weight_reg=args.weight_reg)
    unitnorm = baselines.fit_unitnorm(quat_demos, config, ridge=args.ridge, weight_reg=args.weight_reg)

    z_star = args.via_phase
    y_star = _parse_vector(args.via_quat, "--via-quat")
    y_star = y_star / np.linalg.norm(y_star)
    phases = np.linspace(0.0, 1.0, args.grid)
    duration = float(np.mean([t[-1] - t[0] for t, _ in quat_demos]))
    dt = duration / (args.grid - 1)

    # One physical via-point tolerance for all approaches: --via-sigma is a
    # variance in quaternion tangent-space units (half rotation angle), so the
    # Euler-angle baseline, which conditions in full-rotation-angle units,
    # receives 4x the variance.
    riem_cond = riem.condition(ViaPoint(z_star, y_star, _parse_sigma(args.via_sigma, 3)))
    euler_cond = euler.condition(ViaPoint(z_star, y_star, _scale_sigma(_parse_sigma(args.via_sigma, 3), 4.0)))
    unit_cond = unitnorm.condition(ViaPoint(z_star, y_star, _parse_sigma(args.via_sigma, 4)))

    paths = {
        "riemannian": (riem.mean_trajectory(phases), riem_cond.mean_trajectory(phases)),
        "euler": (euler.mean_trajectory(phases), euler_cond.mean_trajectory(phases)),
        "unit_norm": (unitnorm.mean_trajectory(phases), unit_cond.mean_trajectory(phases)),
    }
    s3 = Sphere(3)
    table = {}
    for name, (ref, cond) in paths.items():
        table[name] = {
            "jerkiness": metrics.jerkiness(cond, dt),
            "tracking_accuracy": metrics.tracking_accuracy(s3, cond, phases, z_star, y_star),
            "deviation_from_mean": metrics.deviation_from_mean(s3, cond, ref),
        }
    raw = unit_cond.raw_mean_trajectory(phases)
    min_norm = float(np.min(np.linalg.norm(raw, axis=1)))

    out = Path(args.out)
    meta = {
        "euler_convention": "ZYX-intrinsic",
        "jerkiness": "sum of squared central third differences / dt^5, quaternion components",
        "unit_norm_min_raw_norm": min_norm,
        "via_phase": z_star,
        "via_sigma": args.via_sigma,
        "via_sigma_units": "quaternion tangent-space variance; Euler baseline uses 4x (angle units)",
    }
    if args.format == "json":
        out.write_text(json.dumps({"metrics": table, "metadata": meta}, indent=1, sort_keys=True) + "\n")
    else:
        lines = ["approach,jerkiness,tracking_accuracy,deviation_from_mean"]
        for name, row in table.items():
            lines.append(
                f"{name},{_fmt(row['jerkiness'])},{_fmt(row['tracking_accuracy'])},"
                f"{_fmt(row['deviation_from_mean'])}"
            )
        lines.append(f"# unit_norm_min_raw_norm,{_fmt(min_norm)}")
        lines.append("# euler_convention,ZYX-intrinsic")
        out.write_text("\n".join(lines) + "\n")
    if not args.no_figure:
        plot_series(
            out.with_suffix(".png"),
            phases,
            paths["riemannian"][1],
            labels=["qw", "qx", "qy", "qz"],
            extra={"euler": paths["euler"][1], "unit_norm": paths["unit_norm"][1]},
            title="conditioned mean paths",
        )
        by_metric = {
            m: {name: table[name][m] for name in table}
            for m in ("jerkiness", "tracking_accuracy", "deviation_from_mean")
        }
        plot_metric_bars(out.with_suffix(".metrics.png"), by_metric, title="via-point comparison")
    print(f"wrote comparison report -> {out}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (InvalidArgumentError, GeoPrompError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
