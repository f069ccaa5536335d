"""Reading and writing models (JSON) and datasets (CSV) at full precision."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .model import RELU, Activation, Dataset, ParamDomain, ShallowParams

PathLike = Union[str, Path]


def model_to_dict(theta: ShallowParams, act: Activation = RELU) -> dict:
    return {
        "omega": theta.omega.tolist(),
        "a": theta.a.tolist(),
        "b": theta.b.tolist(),
        "dim": theta.dim,
        "domain": theta.domain.to_dict() if theta.domain is not None else None,
        "activation": act.to_dict(),
    }


def model_from_dict(d: dict) -> tuple:
    """Returns ``(theta, activation)``."""
    for key in ("omega", "a", "b"):
        if key not in d:
            raise ValueError(f"model document lacks field {key!r}")
    omega = np.asarray(d["omega"], dtype=float)
    a = np.asarray(d["a"], dtype=float)
    if omega.size == 0:
        a = np.zeros((0, int(d.get("dim", 0))))
    domain = ParamDomain.from_dict(d["domain"]) if d.get("domain") else None
    act = Activation.from_dict(d.get("activation") or {})
    return ShallowParams(omega, a, d["b"], domain), act


def save_model(path: PathLike, theta: ShallowParams, act: Activation = RELU) -> None:
    # json writes floats with repr, which round-trips exactly
    Path(path).write_text(json.dumps(model_to_dict(theta, act), indent=1) + "\n")


def load_model(path: PathLike) -> tuple:
    return model_from_dict(json.loads(Path(path).read_text()))


def save_dataset(path: PathLike, data: Dataset) -> None:
    header = [f"x{k + 1}" for k in range(data.dim)] + ["y"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for x, y in zip(data.features, data.labels):
            w.writerow([repr(float(v)) for v in x] + [repr(float(y))])


def load_dataset(path: PathLike, delimiter: Optional[str] = None) -> Dataset:
    with open(path, newline="") as fh:
        text = fh.read()
    if delimiter is None:
        delimiter = csv.Sniffer().sniff(text.splitlines()[0], delimiters=",;\t ").delimiter
    rows = list(csv.reader(text.splitlines(), delimiter=delimiter))
    if not rows:
        raise ValueError(f"{path}: empty dataset file")
    header = [h.strip() for h in rows[0]]
    if header[-1] != "y" or any(h != f"x{k + 1}" for k, h in enumerate(header[:-1])):
        raise ValueError(f"{path}: expected header x1,...,xd,y, got {header}")
    body = [r for r in rows[1:] if r]
    arr = np.array(body, dtype=float).reshape(len(body), len(header))
    return Dataset(arr[:, :-1], arr[:, -1])
