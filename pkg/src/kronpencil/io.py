"""JSON problem and solution files.

Complex scalars are stored as [re, im] pairs (bare reals are accepted on
input); floats go through Python's shortest round-trip repr, so parsing a
serialized report reproduces every number exactly.
"""

import json

import numpy as np

from .driver import Solution, SolveReport
from .problem import SolverConfig

CHART_EPS = 1e-8


def _entry_to_complex(v):
    if isinstance(v, (int, float)):
        return complex(v, 0.0)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"matrix entries must be numbers or [re, im] pairs, got {v!r}")


def _matrix_from_json(rows):
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValueError("matrices must be non-empty nested arrays")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise ValueError("matrix rows must be non-empty and of equal length")
    return np.array([[_entry_to_complex(v) for v in r] for r in rows], dtype=complex)


def _matrix_to_json(mat):
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(mat, dtype=complex)]


def _vector_to_json(vec):
    return [[float(v.real), float(v.imag)] for v in np.asarray(vec, dtype=complex).ravel()]


def _vector_from_json(entries):
    return np.array([_entry_to_complex(v) for v in entries], dtype=complex)


def load_problem(path):
    """Read a problem file; returns (a0, a1, a2, metadata)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        mats = tuple(_matrix_from_json(doc[key]) for key in ("A0", "A1", "A2"))
    except KeyError as exc:
        raise ValueError(f"problem file missing matrix {exc}") from exc
    if not (mats[0].shape == mats[1].shape == mats[2].shape):
        raise ValueError("A0, A1, A2 must share one shape")
    meta = {k: doc[k] for k in doc if k not in ("A0", "A1", "A2")}
    return (*mats, meta)


def save_problem(path, a0, a1, a2, **meta):
    doc = dict(meta)
    doc["A0"] = _matrix_to_json(a0)
    doc["A1"] = _matrix_to_json(a1)
    doc["A2"] = _matrix_to_json(a2)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def solution_to_dict(sol):
    d = {
        "lambda": _vector_to_json(sol.lam),
        "x": _vector_to_json(sol.x),
        "residual": float(sol.residual),
        "sigma_min_ratio": float(sol.sigma_min_ratio),
        "decomposable": bool(sol.decomposable),
        "continuum": bool(sol.continuum),
    }
    if abs(sol.lam[0]) > CHART_EPS:
        chart = sol.lam[1:] / sol.lam[0]
        d["lambda_chart_lambda0_eq_1"] = _vector_to_json(chart)
    if sol.lam_family is not None:
        d["lambda_family"] = [
            _vector_to_json(sol.lam_family[:, k]) for k in range(sol.lam_family.shape[1])
        ]
    return d


def solution_from_dict(d):
    fam = None
    if "lambda_family" in d:
        fam = np.column_stack([_vector_from_json(col) for col in d["lambda_family"]])
    return Solution(
        lam=_vector_from_json(d["lambda"]),
        x=_vector_from_json(d["x"]),
        residual=float(d["residual"]),
        sigma_min_ratio=float(d.get("sigma_min_ratio", 0.0)),
        decomposable=bool(d["decomposable"]),
        continuum=bool(d["continuum"]),
        lam_family=fam,
    )


def report_to_dict(report):
    return {
        "solutions": [solution_to_dict(s) for s in report.solutions],
        "report": {
            "path": report.path,
            "seed": report.config.seed,
            "tolerances": {
                "rank_tol": report.config.rank_tol,
                "residual_tol": report.config.residual_tol,
            },
            "alpha_used": None
            if report.alpha_used is None
            else _vector_to_json(report.alpha_used),
            "gamma_condition": report.gamma_condition,
        },
    }


def report_from_dict(doc):
    meta = doc["report"]
    tols = meta["tolerances"]
    config = SolverConfig(
        rank_tol=float(tols["rank_tol"]),
        residual_tol=float(tols["residual_tol"]),
        seed=int(meta["seed"]),
    )
    alpha = None if meta["alpha_used"] is None else _vector_from_json(meta["alpha_used"])
    return SolveReport(
        solutions=[solution_from_dict(d) for d in doc["solutions"]],
        path=meta["path"],
        alpha_used=alpha,
        gamma_condition=meta["gamma_condition"],
        config=config,
    )


def save_report(path_or_stream, report):
    doc = report_to_dict(report)
    if hasattr(path_or_stream, "write"):
        json.dump(doc, path_or_stream, indent=1)
        path_or_stream.write("\n")
    else:
        with open(path_or_stream, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")


def load_report(path):
    with open(path, "r", encoding="utf-8") as fh:
        return report_from_dict(json.load(fh))
