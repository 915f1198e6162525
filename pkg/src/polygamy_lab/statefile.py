"""JSON state files with explicit ``[re, im]`` pairs.

Pure::

    {"kind": "pure", "layout": [2, 2],
     "amplitudes": [[0.7071067811865476, 0.0], [0.0, 0.0], ...]}

Mixed::

    {"kind": "mixed", "layout": [2, 2],
     "matrix": [[[0.5, 0.0], [0.0, 0.0], ...], ...]}

Floats are written with ``repr`` so a file read back gives the same bits.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import PolygamyLabError
from .linalg import DensityOperator, StateVector


class StateFileError(PolygamyLabError):
    """Malformed or invalid state file; the message names the field."""


def _fail(where: str, msg: str):
    raise StateFileError(f"{where}: {msg}")


def _complex(pair, where: str) -> complex:
    if not isinstance(pair, list) or len(pair) != 2:
        _fail(where, f"expected an [re, im] pair, got {pair!r}")
    for x in pair:
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            _fail(where, f"expected finite numbers, got {pair!r}")
    return complex(pair[0], pair[1])


def _layout(doc, where: str) -> list[int]:
    dims = doc.get("layout")
    if not isinstance(dims, list) or not dims:
        _fail(f"{where}.layout", "expected a nonempty list of dimensions")
    for i, d in enumerate(dims):
        if isinstance(d, bool) or not isinstance(d, int) or d < 2:
            _fail(f"{where}.layout[{i}]", f"expected an integer >= 2, got {d!r}")
    return dims


def state_from_dict(doc, where: str = "state") -> StateVector | DensityOperator:
    if not isinstance(doc, dict):
        _fail(where, "expected a JSON object")
    kind = doc.get("kind")
    dims = _layout(doc, where)
    total = int(np.prod(dims))
    try:
        if kind == "pure":
            amps = doc.get("amplitudes")
            if not isinstance(amps, list) or len(amps) != total:
                _fail(f"{where}.amplitudes", f"expected a list of {total} [re, im] pairs")
            a = [_complex(p, f"{where}.amplitudes[{i}]") for i, p in enumerate(amps)]
            return StateVector(a, dims)
        if kind == "mixed":
            rows = doc.get("matrix")
            if not isinstance(rows, list) or len(rows) != total:
                _fail(f"{where}.matrix", f"expected {total} rows")
            m = np.empty((total, total), dtype=np.complex128)
            for i, row in enumerate(rows):
                if not isinstance(row, list) or len(row) != total:
                    _fail(f"{where}.matrix[{i}]", f"expected {total} [re, im] pairs")
                for j, p in enumerate(row):
                    m[i, j] = _complex(p, f"{where}.matrix[{i}][{j}]")
            return DensityOperator(m, dims)
    except ValueError as exc:
        # invariant violations from the state constructors
        raise StateFileError(f"{where}: {exc}") from None
    _fail(f"{where}.kind", f"expected 'pure' or 'mixed', got {kind!r}")


def load_state(path) -> StateVector | DensityOperator:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StateFileError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return state_from_dict(doc, str(path))


def _pair(z) -> str:
    return f"[{float(z.real)!r}, {float(z.imag)!r}]"


def dumps_state(state: StateVector | DensityOperator) -> str:
    dims = ", ".join(str(d) for d in state.layout.dims)
    if isinstance(state, StateVector):
        body = ",\n    ".join(_pair(z) for z in state.amplitudes)
        return f'{{\n  "kind": "pure",\n  "layout": [{dims}],\n  "amplitudes": [\n    {body}\n  ]\n}}\n'
    rows = ",\n    ".join("[" + ", ".join(_pair(z) for z in row) + "]" for row in state.matrix)
    return f'{{\n  "kind": "mixed",\n  "layout": [{dims}],\n  "matrix": [\n    {rows}\n  ]\n}}\n'


def save_state(state: StateVector | DensityOperator, path) -> Path:
    path = Path(path)
    path.write_text(dumps_state(state))
    return path
