"""Structured-text (JSON) reading and writing of the value types.

Three kinds of document share one schema family, tagged by ``kind``:

``circle-diffeo``
    ``{"schema_version": 1, "kind": "circle-diffeo", "shift": s,
    "cos": [a1, ...], "sin": [b1, ...]}`` for the lift
    ``theta + s + sum a_n cos(n theta) + b_n sin(n theta)``.

``vector-field``
    Same coefficient layout under ``const``/``cos``/``sin`` for
    ``xi(theta) d/dtheta``.

``orbit-point``
    A quadratic differential stored losslessly through the discrete Fourier
    coefficients of its sample grid (``const``/``cos``/``sin``/``nyquist``
    plus the even ``grid`` size) together with the central ``charge``.

Numbers are written as plain JSON floats, which round-trip float64 exactly.
"""

from __future__ import annotations

import json
from typing import Any, TextIO

import numpy as np

from .circle import CircleDiffeo, VectorFieldS1
from .numerics import PeriodicSamples
from .orbits import OrbitPoint
from .schwarzian import QuadraticDifferential

SCHEMA_VERSION = 1


class SerializationError(ValueError):
    """Malformed or unsupported document content."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise SerializationError(message)


def _finite_scalar(doc: dict, key: str) -> float:
    _require(key in doc, f"missing field {key!r}")
    value = doc[key]
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"field {key!r} must be a number")
    _require(np.isfinite(value), f"field {key!r} must be finite")
    return float(value)


def _finite_array(doc: dict, key: str) -> np.ndarray:
    _require(key in doc, f"missing field {key!r}")
    value = doc[key]
    _require(isinstance(value, list), f"field {key!r} must be an array")
    arr = np.asarray(value, dtype=float) if value else np.zeros(0)
    _require(arr.ndim == 1, f"field {key!r} must be one-dimensional")
    _require(bool(np.all(np.isfinite(arr))), f"field {key!r} must be finite")
    return arr


def _check_header(doc: Any, kind: str) -> dict:
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require("schema_version" in doc, "missing field 'schema_version'")
    _require(doc["schema_version"] == SCHEMA_VERSION,
             f"unsupported schema_version {doc['schema_version']!r}")
    _require(doc.get("kind") == kind,
             f"expected kind {kind!r}, got {doc.get('kind')!r}")
    return doc


# -- document <-> object ------------------------------------------------------


def diffeo_to_doc(d: CircleDiffeo) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "circle-diffeo",
        "shift": float(d.shift),
        "cos": [float(v) for v in d.cos],
        "sin": [float(v) for v in d.sin],
    }


def diffeo_from_doc(doc: Any) -> CircleDiffeo:
    doc = _check_header(doc, "circle-diffeo")
    shift = _finite_scalar(doc, "shift")
    cos = _finite_array(doc, "cos")
    sin = _finite_array(doc, "sin")
    return CircleDiffeo(shift, cos, sin)


def vector_field_to_doc(xi: VectorFieldS1) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "vector-field",
        "const": float(xi.const),
        "cos": [float(v) for v in xi.cos],
        "sin": [float(v) for v in xi.sin],
    }


def vector_field_from_doc(doc: Any) -> VectorFieldS1:
    doc = _check_header(doc, "vector-field")
    const = _finite_scalar(doc, "const")
    cos = _finite_array(doc, "cos")
    sin = _finite_array(doc, "sin")
    return VectorFieldS1(const, cos, sin)


def orbit_point_to_doc(p: OrbitPoint) -> dict:
    v = p.q.samples.values
    k = v.size
    c = np.fft.rfft(v) / k
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "orbit-point",
        "charge": float(p.charge),
        "grid": int(k),
        "const": float(c[0].real),
        "cos": [float(x) for x in 2.0 * c[1:-1].real],
        "sin": [float(x) for x in -2.0 * c[1:-1].imag],
        "nyquist": float(c[-1].real),
    }


def orbit_point_from_doc(doc: Any) -> OrbitPoint:
    doc = _check_header(doc, "orbit-point")
    charge = _finite_scalar(doc, "charge")
    _require("grid" in doc, "missing field 'grid'")
    grid = doc["grid"]
    _require(isinstance(grid, int) and not isinstance(grid, bool),
             "field 'grid' must be an integer")
    _require(grid >= 8 and grid % 2 == 0, "field 'grid' must be even and >= 8")
    const = _finite_scalar(doc, "const")
    cos = _finite_array(doc, "cos")
    sin = _finite_array(doc, "sin")
    nyquist = _finite_scalar(doc, "nyquist")
    _require(cos.size == sin.size, "fields 'cos' and 'sin' must match in length")
    _require(cos.size == grid // 2 - 1,
             "coefficient count must be grid/2 - 1 to restore the sample grid")
    spectrum = np.empty(grid // 2 + 1, dtype=complex)
    spectrum[0] = const
    spectrum[1:-1] = 0.5 * (cos - 1j * sin)
    spectrum[-1] = nyquist
    values = np.fft.irfft(spectrum * grid)
    return OrbitPoint(QuadraticDifferential(PeriodicSamples(values)), charge)


# -- file helpers -------------------------------------------------------------


def dump_document(doc: dict, fp: TextIO) -> None:
    json.dump(doc, fp, indent=2, sort_keys=True)
    fp.write("\n")


def load_document(fp: TextIO) -> Any:
    try:
        return json.load(fp)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from None


def save_diffeo(d: CircleDiffeo, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        dump_document(diffeo_to_doc(d), fp)


def load_diffeo(path: str) -> CircleDiffeo:
    with open(path, "r", encoding="utf-8") as fp:
        return diffeo_from_doc(load_document(fp))


def save_vector_field(xi: VectorFieldS1, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        dump_document(vector_field_to_doc(xi), fp)


def load_vector_field(path: str) -> VectorFieldS1:
    with open(path, "r", encoding="utf-8") as fp:
        return vector_field_from_doc(load_document(fp))


def save_orbit_point(p: OrbitPoint, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        dump_document(orbit_point_to_doc(p), fp)


def load_orbit_point(path: str) -> OrbitPoint:
    with open(path, "r", encoding="utf-8") as fp:
        return orbit_point_from_doc(load_document(fp))
