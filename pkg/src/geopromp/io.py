"""File formats: delimited trajectory files and JSON model files.

Trajectory files are human-diffable CSV with a comment header carrying the
manifold tag and sample count. Model files are JSON; floats round-trip
exactly, so a saved and reloaded model answers every query bit-identically.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from pathlib import Path

import numpy as np

from .basis import BasisConfig
from .errors import InvalidArgumentError
from .gaussians import EuclideanGaussian
from .manifolds import Euclidean, Product, Sphere, manifold_from_tag, manifold_tag
from .promp import EuclideanPromp
from .riemannian_promp import FullPosePromp, RiemannianPromp

TOOL_VERSION = "geopromp 0.1.0"
_QUAT_NORM_TOL = 1e-6


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def columns_for_tag(tag: str) -> list[str]:
    if tag == "R3xS3":
        return ["x", "y", "z", "qw", "qx", "qy", "qz"]
    if tag == "S3":
        return ["qw", "qx", "qy", "qz"]
    if tag == "S2":
        return ["x", "y", "z"]
    manifold = manifold_from_tag(tag)
    if isinstance(manifold, Euclidean):
        if manifold.n <= 3:
            return ["x", "y", "z"][: manifold.n]
        return [f"d{i}" for i in range(1, manifold.n + 1)]
    raise InvalidArgumentError(f"no column layout for manifold tag {tag!r}")


def write_trajectory(path, tag: str, times, values) -> None:
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    cols = columns_for_tag(tag)
    if values.shape != (times.size, len(cols)):
        raise InvalidArgumentError(
            f"expected {times.size} rows x {len(cols)} columns for tag {tag}"
        )
    lines = [
        "# geopromp-trajectory",
        f"# manifold: {tag}",
        f"# samples: {times.size}",
        "time," + ",".join(cols),
    ]
    for t, row in zip(times, values):
        lines.append(",".join([_fmt(t)] + [_fmt(v) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def _quat_slices(tag: str):
    """Column slices (within the value block) holding quaternion factors."""
    manifold = manifold_from_tag(tag)
    factors = manifold.factors if isinstance(manifold, Product) else (manifold,)
    out, k = [], 0
    for f in factors:
        if isinstance(f, Sphere) and f.m == 3:
            out.append(slice(k, k + 4))
        k += f.ambient_dim
    return out


def read_trajectory(path):
    """Returns (tag, times, values). Quaternion columns are checked for unit
    norm and re-normalized with a warning when off by more than 1e-6."""
    text = Path(path).read_text()
    tag = None
    declared = None
    rows = []
    header = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("manifold:"):
                tag = body.split(":", 1)[1].strip()
            elif body.startswith("samples:"):
                declared = int(body.split(":", 1)[1].strip())
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(v) for v in line.split(",")])
    if tag is None or header is None:
        raise InvalidArgumentError(f"{path}: missing manifold header or column row")
    cols = columns_for_tag(tag)
    if header != ["time"] + cols:
        raise InvalidArgumentError(f"{path}: column names do not match manifold tag {tag}")
    data = np.asarray(rows, dtype=float)
    if data.ndim != 2 or data.shape[1] != len(cols) + 1:
        raise InvalidArgumentError(f"{path}: malformed data rows")
    if declared is not None and declared != data.shape[0]:
        raise InvalidArgumentError(f"{path}: sample count header disagrees with data")
    times = data[:, 0]
    values = data[:, 1:]
    for s in _quat_slices(tag):
        norms = np.linalg.norm(values[:, s], axis=1)
        if np.any(np.abs(norms - 1.0) > _QUAT_NORM_TOL):
            warnings.warn(f"{path}: quaternion rows off unit norm; re-normalizing")
            values[:, s] /= norms[:, None]
    return tag, times, values


def file_checksum(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _basis_to_dict(b: BasisConfig):
    return {"n_basis": b.n_basis, "width": b.width, "centers": list(b.centers)}


def _basis_from_dict(d):
    return BasisConfig(d["n_basis"], d["width"], tuple(d["centers"]))


def _gaussian_to_dict(g: EuclideanGaussian):
    return {"mean": g.mean.tolist(), "covariance": g.covariance.tolist()}


def _gaussian_from_dict(d):
    return EuclideanGaussian(np.array(d["mean"]), np.array(d["covariance"]))


def _euclidean_to_dict(model: EuclideanPromp):
    return {
        "kind": "euclidean",
        "dim": model.dim,
        "basis": _basis_to_dict(model.basis),
        "weights": _gaussian_to_dict(model.weights),
        "noise": model.noise.tolist(),
    }


def _riemannian_to_dict(model: RiemannianPromp):
    return {
        "kind": "riemannian",
        "manifold": manifold_tag(model.manifold),
        "basis": _basis_to_dict(model.basis),
        "base": model.base.tolist(),
        "weights": _gaussian_to_dict(model.weights),
        "noise": model.noise.tolist(),
    }


def _model_to_dict(model):
    if isinstance(model, FullPosePromp):
        return {
            "kind": "fullpose",
            "position": _euclidean_to_dict(model.position),
            "orientation": _riemannian_to_dict(model.orientation),
        }
    if isinstance(model, RiemannianPromp):
        return _riemannian_to_dict(model)
    if isinstance(model, EuclideanPromp):
        return _euclidean_to_dict(model)
    raise InvalidArgumentError(f"cannot serialize model of type {type(model).__name__}")


def _model_from_dict(d):
    kind = d["kind"]
    if kind == "fullpose":
        return FullPosePromp(_model_from_dict(d["position"]), _model_from_dict(d["orientation"]))
    if kind == "euclidean":
        return EuclideanPromp(
            _basis_from_dict(d["basis"]), d["dim"], _gaussian_from_dict(d["weights"]), np.array(d["noise"])
        )
    if kind == "riemannian":
        return RiemannianPromp(
            manifold_from_tag(d["manifold"]),
            _basis_from_dict(d["basis"]),
            np.array(d["base"]),
            _gaussian_from_dict(d["weights"]),
            np.array(d["noise"]),
        )
    raise InvalidArgumentError(f"unknown model kind {kind!r}")


def save_model(path, model, metadata: dict | None = None) -> None:
    doc = {"format": "geopromp-model", "tool": TOOL_VERSION, "model": _model_to_dict(model)}
    doc["metadata"] = metadata or {}
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def load_model(path):
    """Returns (model, metadata)."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{path}: not a valid model file ({exc})") from exc
    if doc.get("format") != "geopromp-model":
        raise InvalidArgumentError(f"{path}: not a geopromp model file")
    return _model_from_dict(doc["model"]), doc.get("metadata", {})
