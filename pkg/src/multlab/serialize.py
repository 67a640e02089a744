"""Binary-free serialization: JSON documents and headed CSV tables.

Grid data travels as JSON arrays or as CSV columns preceded by a one-line
JSON header carrying {dims, spacing}; zonal expansions as {n, coeffs};
numeric tables as plain CSV.  All floats are written with repr (shortest
round-trip), so identical data yields identical bytes.
"""

from __future__ import annotations

import json
from typing import Sequence

import numpy as np

from .errors import DomainError
from .grids import GridFunction, Symbol, Weight
from .spherical import ZonalExpansion

__all__ = [
    "grid_to_json", "grid_from_json", "symbol_to_json", "symbol_from_json",
    "weight_to_json", "weight_from_json", "expansion_to_json", "expansion_from_json",
    "grid_to_csv", "grid_from_csv", "table_to_csv", "dumps_json",
]


def _complex_pairs(samples: np.ndarray) -> list:
    flat = samples.ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _from_pairs(pairs, dims) -> np.ndarray:
    arr = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    return arr.reshape(tuple(dims))


def grid_to_json(f: GridFunction) -> dict:
    return {"kind": "grid_function", "dims": list(f.dims),
            "spacing": list(f.spacing), "samples": _complex_pairs(f.samples)}


def grid_from_json(doc: dict) -> GridFunction:
    if doc.get("kind") != "grid_function":
        raise DomainError("document is not a grid function")
    return GridFunction(samples=_from_pairs(doc["samples"], doc["dims"]),
                        spacing=tuple(doc["spacing"]))


def symbol_to_json(m: Symbol) -> dict:
    return {"kind": "symbol", "dims": list(m.dims), "samples": _complex_pairs(m.samples)}


def symbol_from_json(doc: dict) -> Symbol:
    if doc.get("kind") != "symbol":
        raise DomainError("document is not a symbol")
    return Symbol(samples=_from_pairs(doc["samples"], doc["dims"]))


def weight_to_json(w: Weight) -> dict:
    return {"kind": "weight", "dims": list(w.dims),
            "samples": [float(v) for v in w.samples.ravel()]}


def weight_from_json(doc: dict) -> Weight:
    if doc.get("kind") != "weight":
        raise DomainError("document is not a weight")
    return Weight(samples=np.array(doc["samples"], dtype=float).reshape(tuple(doc["dims"])))


def expansion_to_json(e: ZonalExpansion) -> dict:
    return {"kind": "zonal_expansion", "n": e.n,
            "coeffs": _complex_pairs(e.coeffs), "cancellation": e.cancellation}


def expansion_from_json(doc: dict) -> ZonalExpansion:
    if doc.get("kind") != "zonal_expansion":
        raise DomainError("document is not a zonal expansion")
    coeffs = np.array([complex(re, im) for re, im in doc["coeffs"]], dtype=complex)
    return ZonalExpansion(n=int(doc["n"]), coeffs=coeffs,
                          cancellation=bool(doc.get("cancellation", False)))


def grid_to_csv(f: GridFunction) -> str:
    header = json.dumps({"dims": list(f.dims), "spacing": list(f.spacing)},
                        sort_keys=True, separators=(",", ":"))
    lines = [f"# {header}", "re,im"]
    for z in f.samples.ravel():
        lines.append(f"{z.real!r},{z.imag!r}")
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str) -> GridFunction:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise DomainError("missing {dims, spacing} header line")
    meta = json.loads(lines[0][1:].strip())
    values = []
    for ln in lines[2:]:
        re_s, im_s = ln.split(",")
        values.append(complex(float(re_s), float(im_s)))
    return GridFunction(samples=np.array(values).reshape(tuple(meta["dims"])),
                        spacing=tuple(meta["spacing"]))


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def table_to_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise DomainError("row width does not match the header")
        lines.append(",".join(_format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def dumps_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
