"""JSON wire formats.

Matrix format (shared by every module and the CLI):

    {"dim": d, "entries": [[[re, im], ... d items], ... d rows]}

Vectors are a single list of ``[re, im]`` pairs. Automorphism files are
``{"T": <matrix>, "conjugate": bool, "X": <matrix>}`` where ``T`` may be an
arbitrary (non-Hermitian) complex matrix.

Writers emit the exact stored values (shortest round-trip decimal, full
double precision). Readers reject non-square, non-finite or, for Hermitian
inputs, asymmetric data.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ValidationError
from .hermitian import MAX_DIM, HermitianMatrix

__all__ = [
    "matrix_to_dict",
    "matrix_from_dict",
    "hermitian_from_dict",
    "complex_matrix_from_dict",
    "vector_to_list",
    "vector_from_list",
    "load_hermitian",
    "dumps",
]


def matrix_to_dict(arr: np.ndarray) -> dict:
    arr = np.asarray(arr, dtype=np.complex128)
    return {
        "dim": int(arr.shape[0]),
        "entries": [
            [[float(z.real), float(z.imag)] for z in row] for row in arr
        ],
    }


def _entries_to_array(obj: dict) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ValidationError("matrix JSON must have 'dim' and 'entries'")
    d = obj["dim"]
    if not isinstance(d, int) or d < 1 or d > MAX_DIM:
        raise ValidationError(f"matrix dim must be an integer in [1, {MAX_DIM}]")
    rows = obj["entries"]
    if len(rows) != d or any(len(r) != d for r in rows):
        raise ValidationError("matrix entries are not a d x d grid")
    out = np.empty((d, d), dtype=np.complex128)
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            if len(cell) != 2:
                raise ValidationError("each entry must be an [re, im] pair")
            re, im = float(cell[0]), float(cell[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ValidationError("matrix entries must be finite")
            out[i, j] = complex(re, im)
    return out


def complex_matrix_from_dict(obj: dict) -> np.ndarray:
    """General complex square matrix (no Hermitian requirement)."""
    return _entries_to_array(obj)


def hermitian_from_dict(obj: dict) -> HermitianMatrix:
    return HermitianMatrix.from_array(_entries_to_array(obj))


def matrix_from_dict(obj: dict) -> HermitianMatrix:
    return hermitian_from_dict(obj)


def vector_to_list(x: np.ndarray) -> list:
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in x]


def vector_from_list(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ValidationError("vector JSON must be a non-empty list of [re, im] pairs")
    out = np.empty(len(obj), dtype=np.complex128)
    for i, cell in enumerate(obj):
        if not isinstance(cell, list) or len(cell) != 2:
            raise ValidationError("each vector entry must be an [re, im] pair")
        re, im = float(cell[0]), float(cell[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValidationError("vector entries must be finite")
        out[i] = complex(re, im)
    return out


def load_hermitian(text: str) -> HermitianMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc
    return hermitian_from_dict(obj)


def dumps(obj) -> str:
    """Deterministic JSON encoding: fixed key order, no whitespace padding."""
    return json.dumps(obj, separators=(",", ":"))
