"""Curve files: JSON descriptions of psi_0.

    {"n": 5, "backend": "exact", "compact": true,
     "frames": [["1", "0", "2z", "2z^2", "z^2"], ["0", "1", "0", "z^2", "0"]]}

An optional ``"weights"`` list (one positive rational per coordinate, given
as a number or a ``"p/q"`` string) selects the Hermitian form
``sum w_i |v_i|^2``; an optional ``"description"`` string is ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import jsonschema

from .algebra.parse import parse_float_poly, parse_hol
from .curves import HolCurve
from .errors import DimensionMismatch, PolySyntaxError
from .oracle import FloatCurve

SCHEMA = {
    "type": "object",
    "required": ["n", "backend", "compact", "frames"],
    "additionalProperties": False,
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "backend": {"enum": ["exact", "float"]},
        "compact": {"type": "boolean"},
        "frames": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        },
        "weights": {"type": "array", "items": {"type": ["number", "string"]}},
        "description": {"type": "string"},
    },
}


class CurveFileError(PolySyntaxError):
    """A curve file that is not valid JSON, breaks the schema, or has a bad entry."""


@dataclass(frozen=True)
class CurveFile:
    n: int
    backend: str
    compact: bool
    frames: tuple
    weights: tuple | None = None
    description: str = ""

    @classmethod
    def from_dict(cls, data: dict) -> CurveFile:
        try:
            jsonschema.validate(data, SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise CurveFileError(f"schema violation at {where}: {exc.message}") from None
        n = data["n"]
        for i, v in enumerate(data["frames"]):
            if len(v) != n:
                raise CurveFileError(f"frame vector {i} has {len(v)} entries, expected {n}")
        weights = data.get("weights")
        if weights is not None:
            if len(weights) != n:
                raise CurveFileError(f"{len(weights)} weights for dimension {n}")
            try:
                weights = tuple(_weight(w, data["backend"]) for w in weights)
            except (ValueError, ZeroDivisionError) as exc:
                raise CurveFileError(f"bad weight: {exc}") from None
        return cls(n, data["backend"], data["compact"], tuple(tuple(v) for v in data["frames"]),
                   weights, data.get("description", ""))

    @classmethod
    def loads(cls, text: str) -> CurveFile:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CurveFileError(f"invalid JSON: {exc.msg}", exc.pos) from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> CurveFile:
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    def to_dict(self) -> dict:
        out = {"n": self.n, "backend": self.backend, "compact": self.compact,
               "frames": [list(v) for v in self.frames]}
        if self.weights is not None:
            out["weights"] = [str(w) if isinstance(w, Fraction) else w for w in self.weights]
        if self.description:
            out["description"] = self.description
        return out

    def build(self):
        """HolCurve for the exact backend, FloatCurve for the float one."""
        try:
            if self.backend == "exact":
                frame = [[_located(parse_hol, s, i, c) for c, s in enumerate(v)]
                         for i, v in enumerate(self.frames)]
                return HolCurve(self.n, frame, self.weights, self.compact)
            entries = [[_located(lambda t: parse_float_poly(t, holomorphic=True), s, i, c)
                        for c, s in enumerate(v)] for i, v in enumerate(self.frames)]
            return FloatCurve.from_entries(self.n, entries, self.weights, self.compact)
        except DimensionMismatch as exc:
            raise CurveFileError(str(exc)) from None


def _weight(w, backend):
    if isinstance(w, bool):
        raise ValueError("booleans are not weights")
    if isinstance(w, int):
        return Fraction(w)
    if isinstance(w, float):
        if backend == "exact":
            return Fraction(str(w))
        return w
    w = w.strip()
    return Fraction(w) if backend == "exact" or "/" in w else float(w)


def _located(fn, text, i, c):
    try:
        return fn(text)
    except PolySyntaxError as exc:
        exc.args = (f"frames[{i}][{c}]: {exc.args[0]}",)
        raise
