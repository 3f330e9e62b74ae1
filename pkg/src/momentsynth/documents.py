"""JSON document formats for problems, measures, and reports.

Complex numbers are stored as {re, im} pairs and floats round-trip exactly
(serialization relies on Python's shortest exact float representation), so
parse(serialize(x)) reproduces x field for field.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .lattice import MomentSpec
from .measures import AtomicMeasure
from .verify import Report


def problem_to_doc(spec: MomentSpec) -> dict:
    return {
        "n": spec.n,
        "moments": [
            {"k": list(k), "re": v.real, "im": v.imag}
            for k, v in zip(spec.indices, spec.values)
        ],
    }


def problem_from_doc(doc: dict) -> MomentSpec:
    if not isinstance(doc, dict):
        raise ValueError("problem document must be a JSON object")
    try:
        n = int(doc["n"])
        moments = doc["moments"]
        items = [
            (tuple(int(e) for e in entry["k"]), complex(float(entry["re"]), float(entry["im"])))
            for entry in moments
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed problem document: {exc}") from exc
    return MomentSpec.from_items(n, items)


def measure_to_doc(measure: AtomicMeasure) -> dict:
    return {
        "n": measure.n,
        "scale": measure.scale,
        "atoms": [
            {
                "z": [{"re": z.real, "im": z.imag} for z in row],
                "w": float(w),
            }
            for row, w in zip(measure.atoms, measure.weights)
        ],
    }


def measure_from_doc(doc: dict) -> AtomicMeasure:
    if not isinstance(doc, dict):
        raise ValueError("measure document must be a JSON object")
    try:
        n = int(doc["n"])
        scale = float(doc["scale"])
        atoms = [
            [complex(float(z["re"]), float(z["im"])) for z in entry["z"]]
            for entry in doc["atoms"]
        ]
        weights = [float(entry["w"]) for entry in doc["atoms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed measure document: {exc}") from exc
    for row in atoms:
        if len(row) != n:
            raise ValueError(f"atom has {len(row)} coordinates, expected {n}")
    return AtomicMeasure(
        n,
        np.array(atoms, dtype=complex).reshape(-1, n),
        np.array(weights, dtype=float),
        scale=scale,
    )


def report_to_doc(rep: Report) -> dict:
    doc = {
        "max_residual": rep.max_residual,
        "total_mass": rep.total_mass,
        "support_radius": rep.support_radius,
        "atom_count": rep.atom_count,
        "residuals": [
            {"k": list(k), "abs_err": r}
            for k, r in zip(rep.indices, rep.residuals)
        ],
        "config": None,
    }
    if rep.config is not None:
        cfg = rep.config
        doc["config"] = {
            "tol": cfg.tol,
            "grid": cfg.grid,
            "max_refine_iters": cfg.max_refine_iters,
            "margin": cfg.margin,
            "m": cfg.m,
            "weight_prune": cfg.weight_prune,
            "seed": cfg.seed,
            "normalize": cfg.normalize,
            "box_degree": cfg.box_degree,
        }
    return doc


def write_doc(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def read_doc(path: Path) -> dict:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON: {exc}") from exc
