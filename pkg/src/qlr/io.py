"""JSON instance and report serialization.

Floats are written with 17 significant digits so that every value
round-trips exactly and identical inputs give identical bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .core import BlochProjector, Instance, InstanceError, LocalTerm, diagonal_psi, singlet_psi
from .gadgets import TIMInstance


def format_float(x: float) -> str:
    s = format(float(x), ".17g")
    if "." not in s and "e" not in s:
        s += ".0"
    return s


def _encode(obj: Any, indent: int | None, level: int) -> str:
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        items = [(json.dumps(str(k), ensure_ascii=False), _encode(v, indent, level + 1)) for k, v in obj.items()]
        if not items:
            return "{}"
        if indent is None:
            return "{" + ", ".join(f"{k}: {v}" for k, v in items) + "}"
        pad, inner = " " * (indent * level), " " * (indent * (level + 1))
        return "{\n" + ",\n".join(f"{inner}{k}: {v}" for k, v in items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        parts = [_encode(v, indent, level + 1) for v in obj]
        if not parts:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj)
        if indent is None or flat:
            return "[" + ", ".join(parts) + "]"
        pad, inner = " " * (indent * level), " " * (indent * (level + 1))
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int | None = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def write_json(obj: Any, path: str | Path | None) -> str:
    text = dumps(obj)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# --- instances -----------------------------------------------------------------------


def _psi_to_json(psi: np.ndarray) -> dict:
    if np.allclose(psi, singlet_psi(), atol=1e-15):
        return {"form": "singlet"}
    if abs(psi[1]) == 0 and abs(psi[2]) == 0 and psi[0].imag == 0 and psi[3].imag == 0:
        return {"form": "diagonal", "alpha": float(psi[0].real), "beta": float(psi[3].real)}
    return {"form": "raw", "amplitudes": [[float(z.real), float(z.imag)] for z in psi]}


def _psi_from_json(d: dict) -> np.ndarray:
    form = d.get("form")
    if form == "singlet":
        return singlet_psi()
    if form == "diagonal":
        v = np.array([float(d["alpha"]), 0.0, 0.0, float(d["beta"])], dtype=complex)
        # keep stored amplitudes bit-exact unless they actually need normalizing
        return v if abs(np.linalg.norm(v) - 1.0) <= 1e-14 else diagonal_psi(v[0].real, v[3].real)
    if form == "raw":
        amps = d["amplitudes"]
        return np.array([complex(a[0], a[1]) if isinstance(a, list) else complex(a) for a in amps])
    raise InstanceError(f"unknown psi form {form!r}")


def instance_to_json(inst: Instance | TIMInstance) -> dict:
    if isinstance(inst, TIMInstance):
        return {
            "kind": "tim",
            "n": inst.n,
            "edges": [{"u": u, "v": v, "w": w} for (u, v), w in zip(inst.edges, inst.weights)],
            "fields": list(inst.fields),
        }
    out: dict = {
        "kind": inst.kind,
        "n": inst.n,
        "vertices": [
            {"id": i, "c": float(t.c), "bloch": [t.projector.ax, t.projector.ay, t.projector.az],
             "offset": float(t.offset)}
            for i, t in enumerate(inst.terms)
        ],
    }
    if inst.kind == "pcvc":
        out["edges"] = [{"u": u, "v": v, "penalty": p} for (u, v), p in zip(inst.edges, inst.penalties)]
    else:
        out["edges"] = [{"u": u, "v": v} for u, v in inst.edges]
    if inst.psi is not None:
        out["psi"] = _psi_to_json(inst.psi)
    out["offset"] = float(inst.offset)
    return out


def instance_from_json(d: dict) -> Instance | TIMInstance:
    try:
        kind = d["kind"]
        n = int(d["n"])
        if kind == "tim":
            edges = [(e["u"], e["v"]) for e in d.get("edges", [])]
            weights = [float(e.get("w", 0.0)) for e in d.get("edges", [])]
            return TIMInstance(n, tuple(edges), tuple(weights), tuple(d.get("fields", [0.0] * n)))
        verts = sorted(d["vertices"], key=lambda v: v["id"])
        if [v["id"] for v in verts] != list(range(n)):
            raise InstanceError("vertex ids must be 0..n-1")
        terms = [
            LocalTerm(float(v["c"]), BlochProjector.from_vector(v.get("bloch", [0.0, 0.0, -1.0])),
                      float(v.get("offset", 0.0)))
            for v in verts
        ]
        edges = [(int(e["u"]), int(e["v"])) for e in d.get("edges", [])]
        pens = [float(e.get("penalty", 0.0)) for e in d.get("edges", [])] if kind == "pcvc" else None
        psi = _psi_from_json(d["psi"]) if d.get("psi") is not None else None
        return Instance(n, edges, terms, kind, penalties=pens, psi=psi, offset=float(d.get("offset", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(f"malformed instance JSON: {exc!r}") from exc


def load_instance(path: str | Path) -> Instance | TIMInstance:
    with open(path, encoding="utf-8") as fh:
        return instance_from_json(json.load(fh))


def save_instance(inst: Instance | TIMInstance, path: str | Path | None) -> str:
    return write_json(instance_to_json(inst), path)


def state_to_json(bloch: np.ndarray) -> list[list[float]]:
    return [[float(x) + 0.0 for x in row] for row in np.asarray(bloch)]
