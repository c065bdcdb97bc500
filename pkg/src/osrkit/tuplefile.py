"""Tuple file format: a self-describing JSON document.

Fields: ``n``, ``d``, ``matrices`` (d nested n x n arrays of [re, im] entry
pairs, row-major) and an optional ``name``.  Entry pairs avoid complex
literal ambiguity and are trivially producible from any environment.

    {
      "name": "shift pair",
      "n": 2,
      "d": 2,
      "matrices": [
        [[[0,0],[2,0]], [[0,0],[0,0]]],
        [[[0,0],[0,0]], [[2,0],[0,0]]]
      ]
    }

The content digest is the sha256 of the canonical serialization of the
parsed document, so the same tuple hashes identically whether it arrives
from a file or over the wire.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import TupleFileError
from .tuples import MatrixTuple

__all__ = [
    "TupleFile",
    "parse_tuple_document",
    "load_tuple_file",
    "matrix_to_pairs",
    "pairs_to_matrix",
]


def matrix_to_pairs(m: np.ndarray) -> list:
    """n x n complex matrix -> nested row-major [re, im] pairs (no -0.0)."""
    return [
        [[float(z.real) + 0.0, float(z.imag) + 0.0] for z in row]
        for row in np.asarray(m)
    ]


def pairs_to_matrix(rows: list, n: int, which: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != n:
        raise TupleFileError(f"{which}: expected {n} rows, got {_shape_word(rows)}")
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise TupleFileError(
                f"{which}, row {i}: expected {n} entries, got {_shape_word(row)}"
            )
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, (int, float)) for v in pair)
            ):
                raise TupleFileError(
                    f"{which}, entry ({i},{j}): expected an [re, im] pair, got {pair!r}"
                )
            re, im = float(pair[0]), float(pair[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise TupleFileError(f"{which}, entry ({i},{j}): non-finite value")
            out[i, j] = complex(re, im)
    return out


def _shape_word(obj) -> str:
    return f"list of length {len(obj)}" if isinstance(obj, list) else type(obj).__name__


@dataclass(frozen=True)
class TupleFile:
    matrix_tuple: MatrixTuple
    name: str | None = None
    digest: str = ""

    @property
    def n(self) -> int:
        return self.matrix_tuple.n

    @property
    def d(self) -> int:
        return self.matrix_tuple.d

    def canonical_document(self) -> dict:
        doc = {
            "n": self.n,
            "d": self.d,
            "matrices": [matrix_to_pairs(m) for m in self.matrix_tuple],
        }
        if self.name is not None:
            doc["name"] = self.name
        return doc


def _digest(doc: dict) -> str:
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def parse_tuple_document(doc) -> TupleFile:
    """Validate a parsed JSON document into a TupleFile."""
    if not isinstance(doc, dict):
        raise TupleFileError(f"tuple document must be an object, got {type(doc).__name__}")
    for key in ("n", "d", "matrices"):
        if key not in doc:
            raise TupleFileError(f"tuple document is missing the '{key}' field")
    n, d = doc["n"], doc["d"]
    if not isinstance(n, int) or n < 1:
        raise TupleFileError(f"'n' must be a positive integer, got {n!r}")
    if not isinstance(d, int) or d < 1:
        raise TupleFileError(f"'d' must be a positive integer, got {d!r}")
    mats_field = doc["matrices"]
    if not isinstance(mats_field, list) or len(mats_field) != d:
        raise TupleFileError(
            f"'matrices' must list exactly d = {d} matrices, got {_shape_word(mats_field)}"
        )
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise TupleFileError(f"'name' must be a string, got {name!r}")
    mats = [
        pairs_to_matrix(rows, n, which=f"matrix {idx}")
        for idx, rows in enumerate(mats_field)
    ]
    canonical = {"n": n, "d": d, "matrices": [matrix_to_pairs(m) for m in mats]}
    if name is not None:
        canonical["name"] = name
    return TupleFile(
        matrix_tuple=MatrixTuple(tuple(mats)), name=name, digest=_digest(canonical)
    )


def load_tuple_file(path: str) -> TupleFile:
    """Read and validate a tuple file from disk."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise TupleFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TupleFileError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    try:
        return parse_tuple_document(doc)
    except TupleFileError as exc:
        raise TupleFileError(f"{path}: {exc}") from exc
