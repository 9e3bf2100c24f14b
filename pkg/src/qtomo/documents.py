"""JSON matrix documents exchanged by the CLI.

A document is an object with a ``kind`` tag.  Matrix kinds carry ``rows``,
``cols`` and row-major ``data``; complex kinds (density, unitary) store each
entry as ``[re, im]``.  Probability vectors carry ``length`` and a flat list.
Composite kinds (pair, affine, samples) nest the simple ones.

Numbers are written rounded to 15 significant digits, so
load(dump(x)) dumped again is byte-identical.
"""

from __future__ import annotations

import json

import numpy as np

from .embedding import AffineBlock
from .errors import ValidationError
from .hermitian import DensityMatrix, SpectralPair, UnitaryMatrix
from .simplex import ProbabilityVector, validate_stochastic
from .tomography import TomogramSample

MATRIX_KINDS = ("density", "unitary", "stochastic", "real")
COMPLEX_KINDS = ("density", "unitary")


def canonical_float(x: float) -> float:
    y = float(f"{float(x):.15g}")
    return 0.0 if y == 0.0 else y


def _complex_rows(a):
    return [[[canonical_float(z.real), canonical_float(z.imag)] for z in row] for row in a]


def _real_rows(a):
    return [[canonical_float(x) for x in row] for row in a]


def to_document(obj, kind: str | None = None) -> dict:
    """Serialize a library value (or a raw array with an explicit ``kind``)."""
    if isinstance(obj, DensityMatrix):
        kind, arr = "density", obj.data
    elif isinstance(obj, UnitaryMatrix):
        kind, arr = "unitary", obj.data
    elif isinstance(obj, ProbabilityVector):
        return {"kind": "probability", "length": len(obj), "data": [canonical_float(x) for x in obj.components]}
    elif isinstance(obj, SpectralPair):
        return {"kind": "pair", "frame": to_document(obj.frame), "spectrum": to_document(obj.spectrum)}
    elif isinstance(obj, AffineBlock):
        return {
            "kind": "affine",
            "linear": to_document(obj.linear, "real"),
            "translation": [canonical_float(x) for x in obj.translation],
        }
    elif hasattr(obj, "entries") and hasattr(obj, "is_bistochastic"):
        kind, arr = "stochastic", obj.entries
    else:
        if kind is None:
            raise ValidationError("to_document: kind is required for raw arrays")
        arr = np.asarray(obj)
        if kind == "probability":
            return {"kind": kind, "length": int(arr.size), "data": [canonical_float(x) for x in arr]}
    arr = np.asarray(arr)
    rows, cols = arr.shape
    data = _complex_rows(arr) if kind in COMPLEX_KINDS else _real_rows(np.real(arr))
    return {"kind": kind, "rows": rows, "cols": cols, "data": data}


def _matrix_data(doc, kind):
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        data = doc["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{kind} document: missing or malformed field ({exc})") from exc
    if kind in COMPLEX_KINDS:
        try:
            arr = np.array([[complex(re, im) for re, im in row] for row in data])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{kind} document: complex entries must be [re, im] pairs") from exc
    else:
        arr = np.array(data, dtype=float)
    if arr.shape != (rows, cols):
        raise ValidationError(f"{kind} document: declared {rows}x{cols}, data is {arr.shape}")
    return arr


def from_document(doc: dict, expect: str | tuple | None = None):
    """Parse and validate a document; the declared kind picks the validator."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("document: expected an object with a 'kind' field")
    kind = doc["kind"]
    if expect is not None:
        allowed = (expect,) if isinstance(expect, str) else expect
        if kind not in allowed:
            raise ValidationError(f"document: expected kind {' or '.join(allowed)}, got {kind!r}")
    if kind == "density":
        return DensityMatrix(_matrix_data(doc, kind))
    if kind == "unitary":
        return UnitaryMatrix(_matrix_data(doc, kind))
    if kind == "stochastic":
        return validate_stochastic(_matrix_data(doc, kind))
    if kind == "real":
        return _matrix_data(doc, kind)
    if kind == "probability":
        data = np.array(doc.get("data", []), dtype=float)
        if "length" in doc and int(doc["length"]) != data.size:
            raise ValidationError(f"probability document: declared length {doc['length']}, data has {data.size}")
        return ProbabilityVector(data)
    if kind == "pair":
        return SpectralPair(from_document(doc["frame"], "unitary"), from_document(doc["spectrum"], "probability"))
    if kind == "affine":
        return AffineBlock(from_document(doc["linear"], "real"), np.array(doc["translation"], dtype=float))
    if kind == "samples":
        return [
            TomogramSample(from_document(s["frame"], "unitary"), ProbabilityVector(s["probabilities"]))
            for s in doc["samples"]
        ]
    raise ValidationError(f"document: unknown kind {kind!r}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def load(path, expect=None):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return from_document(doc, expect)


def samples_document(samples) -> dict:
    return {
        "kind": "samples",
        "samples": [
            {"frame": to_document(s.frame), "probabilities": [canonical_float(x) for x in s.probabilities.components]}
            for s in samples
        ],
    }
