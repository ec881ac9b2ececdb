"""Instance builders for the perturbative reductions and the PXP model.

``tim_to_tvc`` embeds a transverse-field Ising model (TIM) in the low
covering-subspace spectrum of a TVC instance; ``reduce_degree`` splits a
high-degree vertex into a three-qubit path; ``pxp_instance`` writes the
PXP model as a TVC instance.  Per-qubit contributions are summed as Pauli
fields first and factored into a ``LocalTerm`` once.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    BlochProjector,
    Instance,
    InstanceError,
    LocalTerm,
    assemble_local_term,
    canonicalize,
)
from .exact import covering_hamiltonian, ground_energy_tvc

MAX_TIM_DEGREE = 3


@dataclass(frozen=True)
class TIMInstance:
    """``H = sum_ij w_ij Z_i Z_j + sum_i h_i X_i`` with ``h_i <= 0``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[float, ...]
    fields: tuple[float, ...]

    def __post_init__(self):
        if len(self.edges) != len(self.weights):
            raise InstanceError("one coupling per edge required")
        if len(self.fields) != self.n:
            raise InstanceError(f"expected {self.n} fields, got {len(self.fields)}")
        merged: dict[tuple[int, int], float] = {}
        for (u, v), w in zip(self.edges, self.weights):
            u, v = int(u), int(v)
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"invalid edge ({u},{v})")
            key = (min(u, v), max(u, v))
            merged[key] = merged.get(key, 0.0) + float(w)
        keys = sorted(merged)
        object.__setattr__(self, "edges", tuple(keys))
        object.__setattr__(self, "weights", tuple(merged[k] for k in keys))
        object.__setattr__(self, "fields", tuple(float(h) for h in self.fields))
        for i, h in enumerate(self.fields):
            if h > 0:
                raise InstanceError(f"vertex {i}: field h={h!r} > 0")

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def tim_hamiltonian(tim: TIMInstance) -> np.ndarray:
    """Dense ``2^n`` matrix of the TIM Hamiltonian (qubit 0 most significant)."""
    n = tim.n
    x = np.arange(1 << n)
    z = [1 - 2 * ((x >> (n - 1 - i)) & 1) for i in range(n)]
    H = np.diag(sum((w * z[u] * z[v] for (u, v), w in zip(tim.edges, tim.weights)), np.zeros(x.size)))
    for i, h in enumerate(tim.fields):
        if h != 0:
            H[x, x ^ (1 << (n - 1 - i))] += h
    return H


def tim_spectrum(tim: TIMInstance, k: int) -> np.ndarray:
    return np.linalg.eigvalsh(tim_hamiltonian(tim))[:k]


# --- TIM -> TVC ---------------------------------------------------------------


def _vertex_x_scale(d: int, delta: float, h: float) -> float:
    # flipping an encoded vertex of degree d costs 2d + 2 physical flips
    return -(delta ** ((d + 4) / 8.0)) * math.sqrt((7 - d) * abs(h))


def edge_qubit_layout(tim: TIMInstance) -> list[dict[str, int]]:
    """Physical qubit indices of the four edge qubits of every TIM edge."""
    base = 2 * tim.n
    out = []
    for e in range(len(tim.edges)):
        q = base + 4 * e
        out.append({"ij": q, "ij~": q + 1, "i~j": q + 2, "i~j~": q + 3})
    return out


def tim_to_tvc(tim: TIMInstance, delta: float, perturb: bool = True) -> Instance:
    """TVC instance whose low covering spectrum tracks ``tim``.

    Vertex ``i`` becomes the dual-rail pair ``(2i, 2i+1)``; each TIM edge
    adds four edge qubits, each tied to one rail of either endpoint.  With
    ``perturb=False`` only ``Delta H_0`` is emitted.
    """
    if not delta > 0:
        raise InstanceError(f"Delta must be positive, got {delta!r}")
    deg = tim.degrees()
    for i, d in enumerate(deg):
        if d > MAX_TIM_DEGREE:
            raise InstanceError(f"vertex {i} has degree {d} > {MAX_TIM_DEGREE}")
    nq = 2 * tim.n + 4 * len(tim.edges)
    hx = np.zeros(nq)
    hz = np.zeros(nq)
    edges = [(2 * i, 2 * i + 1) for i in range(tim.n)]
    for i in range(tim.n):
        hz[2 * i] = hz[2 * i + 1] = -3.5 * delta
        if perturb and tim.fields[i] != 0:
            hx[2 * i] = hx[2 * i + 1] = _vertex_x_scale(deg[i], delta, tim.fields[i])
    layout = edge_qubit_layout(tim)
    for (i, j), w, q in zip(tim.edges, tim.weights, layout):
        rails = {"ij": (2 * i, 2 * j), "ij~": (2 * i, 2 * j + 1),
                 "i~j": (2 * i + 1, 2 * j), "i~j~": (2 * i + 1, 2 * j + 1)}
        for key, (a, b) in rails.items():
            edges += [(a, q[key]), (b, q[key])]
            hz[q[key]] = -0.5 * delta
        if perturb:
            hz[q["ij"]] += 0.5 * w
            hz[q["i~j~"]] += 0.5 * w
            hz[q["ij~"]] -= 0.5 * w
            hz[q["i~j"]] -= 0.5 * w
            if tim.fields[i] != 0 or tim.fields[j] != 0:
                for key in rails:
                    hx[q[key]] = -(delta ** 0.875)
    bad = [k for k in range(nq) if hz[k] > 0]
    if bad:
        raise InstanceError(f"Delta={delta!r} too small: combined Z field > 0 on qubits {bad}")
    terms = [assemble_local_term(hx[k], 0.0, hz[k]) for k in range(nq)]
    return Instance(nq, edges, terms, "tvc", offset=-delta * len(tim.edges))


def encoded_ground_count(tim: TIMInstance, delta: float = 1.0, tol: float = 1e-9) -> int:
    """Number of ground states of ``Delta H_0`` in the covering subspace."""
    H, _ = covering_hamiltonian(tim_to_tvc(tim, delta, perturb=False))
    diag = H.diagonal().real
    return int(np.sum(diag <= diag.min() + tol))


# --- degree reduction --------------------------------------------------------------


def reduce_degree(inst: Instance, delta: float) -> Instance:
    """Split the highest-degree vertex into a path ``v_a - v_b - v_c``.

    Ties go to the lowest index.  ``v_a`` keeps index ``v`` and the first
    ``ceil(d/2)`` incident edges (ordered by neighbour); ``v_b = n`` and
    ``v_c = n + 1`` takes the rest.  The encoded qubit is ``|0> ~ |010>``,
    ``|1> ~ |101>``.  The transverse field reappears at third order from
    ``g Delta^{2/3}`` X fields with ``g = cbrt(hx_v)``; the unequal
    second-order shifts of the two encoded states are cancelled by an
    extra Z field and a constant.  The result is in the canonical frame of
    ``inst``, which leaves the spectrum unchanged.  Instances of maximum
    degree at most 3 are returned unchanged.
    """
    if not delta > 0:
        raise InstanceError(f"Delta must be positive, got {delta!r}")
    if inst.kind != "tvc":
        raise InstanceError(f"reduce_degree needs a tvc instance, got {inst.kind}")
    deg = inst.degrees()
    if max(deg, default=0) <= MAX_TIM_DEGREE:
        return inst
    canon, _ = canonicalize(inst)
    v = max(range(inst.n), key=lambda i: (deg[i], -i))
    hx_v, _, hz_v, e_v = canon.terms[v].fields()
    n = inst.n
    va, vb, vc = v, n, n + 1
    nbrs = sorted(u for e in canon.edges for u in e if v in e and u != v)
    split = (len(nbrs) + 1) // 2
    to_c = set(nbrs[split:])
    edges = []
    for a, b in canon.edges:
        if v in (a, b):
            u = b if a == v else a
            edges.append((vc, u) if u in to_c else (va, u))
        else:
            edges.append((a, b))
    edges += [(va, vb), (vb, vc)]
    g = float(np.cbrt(hx_v))
    t = g * delta ** (2.0 / 3.0)
    zc = 0.75 * g * g * delta ** (1.0 / 3.0)
    z_end = -0.5 * delta + 0.5 * hz_v + 0.5 * zc
    if z_end > 0:
        raise InstanceError(f"Delta={delta!r} too small for vertex {v}: combined Z field > 0")
    terms = list(canon.terms)
    terms[va] = assemble_local_term(t, 0.0, z_end)
    terms += [assemble_local_term(t, 0.0, -delta), assemble_local_term(t, 0.0, z_end)]
    offset = canon.offset + e_v + 1.25 * g * g * delta ** (1.0 / 3.0)
    return Instance(n + 2, edges, terms, "tvc", offset=offset)


def reduce_to_degree3(inst: Instance, delta: float, max_steps: int = 10_000) -> Instance:
    """Apply :func:`reduce_degree` until the maximum degree is at most 3."""
    for _ in range(max_steps):
        if max(inst.degrees(), default=0) <= MAX_TIM_DEGREE:
            return inst
        inst = reduce_degree(inst, delta)
    raise RuntimeError("degree reduction did not terminate")


# --- PXP -----------------------------------------------------------------------------


def pxp_instance(n: int, edges, weights: Sequence[float]) -> Instance:
    """``-sum_i w_i Pi_i X_i`` as TVC: ``phi_i = (I-X)/2``, ``c_i = 2 w_i``.

    The constant ``-sum_i w_i`` is carried as the global offset, so the
    covering-subspace energy equals the PXP energy.
    """
    w = [float(x) for x in weights]
    if len(w) != n:
        raise InstanceError(f"expected {n} weights, got {len(w)}")
    if any(x < 0 for x in w):
        raise InstanceError("PXP weights must be non-negative")
    minus_x = BlochProjector(-1.0, 0.0, 0.0)
    terms = [LocalTerm(2.0 * x, minus_x) for x in w]
    return Instance(n, edges, terms, "tvc", offset=-sum(w))


def pxp_hamiltonian(n: int, edges, weights: Sequence[float]) -> np.ndarray:
    """Dense ``-sum_i w_i (prod_{j~i} |1><1|_j) X_i`` on all ``2^n`` states."""
    x = np.arange(1 << n)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    H = np.zeros((x.size, x.size))
    for i, w in enumerate(weights):
        ok = np.ones(x.size, dtype=bool)
        for j in adj[i]:
            ok &= ((x >> (n - 1 - j)) & 1).astype(bool)
        src = x[ok]
        H[src ^ (1 << (n - 1 - i)), src] -= w
    return H


def chain_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


# --- convergence sweeps ----------------------------------------------------------------


@dataclass
class GapRow:
    delta: float
    dim: int
    eigs: list[float]
    gaps: list[float]
    tim_gaps: list[float]

    @property
    def gap_errors(self) -> list[float]:
        return [abs(a - b) for a, b in zip(self.gaps, self.tim_gaps)]

    @property
    def max_gap_error(self) -> float:
        return max(self.gap_errors, default=0.0)


@dataclass
class ConvergenceReport:
    k: int
    tim_eigs: list[float]
    rows: list[GapRow] = field(default_factory=list)

    @property
    def errors(self) -> list[float]:
        return [r.max_gap_error for r in self.rows]

    def monotone(self, slack: float = 0.05) -> bool:
        e = self.errors
        return all(b <= a * (1.0 + slack) for a, b in zip(e, e[1:]))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "tim_eigs": list(self.tim_eigs),
            "rows": [
                {"delta": r.delta, "dim": r.dim, "eigs": r.eigs, "gaps": r.gaps,
                 "tim_gaps": r.tim_gaps, "gap_error": r.max_gap_error}
                for r in self.rows
            ],
            "monotone": self.monotone(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        m = self.k - 1
        wr.writerow(["delta", "dim", "gap_error"]
                    + [f"gap_{j}" for j in range(1, m + 1)]
                    + [f"tim_gap_{j}" for j in range(1, m + 1)])
        for r in self.rows:
            wr.writerow([_g(r.delta), r.dim, _g(r.max_gap_error)]
                        + [_g(x) for x in r.gaps] + [_g(x) for x in r.tim_gaps])
        return buf.getvalue()


def _g(x: float) -> str:
    return format(float(x), ".17g")


def gadget_convergence(tim: TIMInstance, deltas: Sequence[float], k: int = 4,
                       threads: int = 1) -> ConvergenceReport:
    """Compare low gadget gaps ``E_m - E_0`` with exact TIM gaps per Delta."""
    k = min(k, 1 << tim.n)
    tim_eigs = tim_spectrum(tim, k)
    tim_gaps = [float(e - tim_eigs[0]) for e in tim_eigs[1:]]

    def one(delta: float) -> GapRow:
        rep = ground_energy_tvc(tim_to_tvc(tim, delta), k)
        eigs = rep.eigs
        return GapRow(float(delta), rep.dim, eigs, [e - eigs[0] for e in eigs[1:]], tim_gaps)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(one, deltas))
    else:
        rows = [one(d) for d in deltas]
    return ConvergenceReport(k, [float(e) for e in tim_eigs], rows)


def degree_reduction_errors(inst: Instance, deltas: Sequence[float]) -> list[float]:
    """``|E_0(reduced) - E_0(inst)|`` for each Delta (covering oracle)."""
    exact = ground_energy_tvc(inst).ground
    return [abs(ground_energy_tvc(reduce_degree(inst, d)).ground - exact) for d in deltas]


__all__ = [
    "ConvergenceReport",
    "GapRow",
    "TIMInstance",
    "chain_edges",
    "degree_reduction_errors",
    "encoded_ground_count",
    "gadget_convergence",
    "pxp_hamiltonian",
    "pxp_instance",
    "reduce_degree",
    "reduce_to_degree3",
    "tim_hamiltonian",
    "tim_spectrum",
    "tim_to_tvc",
]
