"""Domain types and pure operations shared by every solver.

A single-qubit rank-1 projector is stored by its unit Bloch vector ``a``::

    phi = (I + ax X + ay Y + az Z) / 2

and a product state by one Bloch vector ``r`` per qubit, so that
``Tr[phi rho] = (1 + a.r) / 2``.  Qubit 0 is the most significant bit of a
computational-basis index everywhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

KINDS = ("tvc", "pcvc", "evc")

UNIT_TOL = 1e-9
SIGN_TOL = 1e-9
FEASIBILITY_TOL = 1e-9

_SQRT_HALF = 1.0 / math.sqrt(2.0)


class InstanceError(ValueError):
    """Raised when an instance violates the preconditions of an operation."""


@dataclass(frozen=True)
class BlochProjector:
    ax: float
    ay: float
    az: float

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "BlochProjector":
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.ax, self.ay, self.az])

    @property
    def norm(self) -> float:
        return math.sqrt(self.ax**2 + self.ay**2 + self.az**2)

    def antipode(self) -> "BlochProjector":
        """Bloch vector of ``I - phi``."""
        return BlochProjector(-self.ax, -self.ay, -self.az)

    def matrix(self) -> np.ndarray:
        return 0.5 * np.array(
            [[1 + self.az, self.ax - 1j * self.ay], [self.ax + 1j * self.ay, 1 - self.az]]
        )


KET0 = BlochProjector(0.0, 0.0, 1.0)
KET1 = BlochProjector(0.0, 0.0, -1.0)


@dataclass(frozen=True)
class LocalTerm:
    """``c * phi + offset * I`` on one qubit."""

    c: float
    projector: BlochProjector = KET1
    offset: float = 0.0

    def fields(self) -> tuple[float, float, float, float]:
        """Pauli coefficients ``(hx, hy, hz, e)`` of the term."""
        p = self.projector
        h = 0.5 * self.c
        return (h * p.ax, h * p.ay, h * p.az, self.offset + h)

    def matrix(self) -> np.ndarray:
        return self.c * self.projector.matrix() + self.offset * np.eye(2)


def assemble_local_term(hx: float, hy: float, hz: float, e: float = 0.0) -> LocalTerm:
    """Factor ``hx X + hy Y + hz Z + e I`` as ``c * phi + offset`` with ``c >= 0``.

    A zero field yields ``c = 0`` with the conventional projector ``|1><1|``.
    """
    mag = math.sqrt(hx * hx + hy * hy + hz * hz)
    if mag == 0.0:
        return LocalTerm(0.0, KET1, float(e))
    proj = BlochProjector(hx / mag, hy / mag, hz / mag)
    return LocalTerm(2.0 * mag, proj, float(e) - mag)


def _normalize_edges(edges, penalties):
    merged: dict[tuple[int, int], float] = {}
    for k, (u, v) in enumerate(edges):
        u, v = int(u), int(v)
        key = (u, v) if u <= v else (v, u)
        p = 0.0 if penalties is None else float(penalties[k])
        merged[key] = merged.get(key, 0.0) + p
    keys = sorted(merged)
    pen = None if penalties is None else tuple(merged[k] for k in keys)
    return tuple(keys), pen


@dataclass(frozen=True, eq=False)
class Instance:
    """Graph, one ``LocalTerm`` per vertex, and the edge-constraint kind.

    ``kind`` is ``"tvc"`` (hard ``|00>`` constraints), ``"pcvc"`` (per-edge
    penalty ``c_ij (I+Z)(I+Z)/4``) or ``"evc"`` (shared two-qubit state
    ``psi`` forbidden on every edge).  Edges are stored oriented ``u <= v``,
    sorted and de-duplicated; duplicate penalties are summed.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    terms: tuple[LocalTerm, ...]
    kind: str = "tvc"
    penalties: tuple[float, ...] | None = None
    psi: np.ndarray | None = None
    offset: float = 0.0

    def __post_init__(self):
        pens = self.penalties
        if self.kind == "pcvc" and pens is None:
            pens = (0.0,) * len(self.edges)
        edges, pens = _normalize_edges(self.edges, pens if self.kind == "pcvc" else None)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "penalties", pens)
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.psi is not None:
            object.__setattr__(self, "psi", np.asarray(self.psi, dtype=complex).reshape(4))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            if u != v:
                adj[u].append(v)
                adj[v].append(u)
        return adj

    def degrees(self) -> list[int]:
        return [len(a) for a in self.neighbors()]

    def total_offset(self) -> float:
        return self.offset + sum(t.offset for t in self.terms)

    def with_terms(self, terms: Iterable[LocalTerm]) -> "Instance":
        return replace(self, terms=tuple(terms))


@dataclass(frozen=True, eq=False)
class ProductState:
    """Per-qubit Bloch vectors ``r_i`` with ``|r_i| <= 1``."""

    bloch: np.ndarray

    def __post_init__(self):
        b = np.array(self.bloch, dtype=float).reshape(-1, 3)
        b.setflags(write=False)
        object.__setattr__(self, "bloch", b)

    @property
    def n(self) -> int:
        return self.bloch.shape[0]

    @classmethod
    def from_bits(cls, bits: Sequence[int] | str) -> "ProductState":
        return cls(np.array([[0.0, 0.0, 1.0 - 2.0 * int(b)] for b in bits]).reshape(-1, 3))

    @classmethod
    def from_projectors(cls, projs: Sequence[BlochProjector]) -> "ProductState":
        return cls(np.array([p.vector for p in projs]).reshape(-1, 3))

    def is_physical(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.linalg.norm(self.bloch, axis=1) <= 1.0 + tol))

    def density(self, i: int) -> np.ndarray:
        x, y, z = self.bloch[i]
        return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])


@dataclass
class ValidationReport:
    ok: bool
    issues: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_instance(inst: Instance) -> ValidationReport:
    issues: list[str] = []
    if inst.kind not in KINDS:
        issues.append(f"unknown kind {inst.kind!r}")
    if len(inst.terms) != inst.n:
        issues.append(f"expected {inst.n} vertex terms, got {len(inst.terms)}")
    for u, v in inst.edges:
        if u == v:
            issues.append(f"self-loop on vertex {u}")
        if not (0 <= u < inst.n and 0 <= v < inst.n):
            issues.append(f"edge ({u},{v}) out of range")
    for i, t in enumerate(inst.terms):
        vals = (t.c, t.offset, t.projector.ax, t.projector.ay, t.projector.az)
        if not all(math.isfinite(x) for x in vals):
            issues.append(f"vertex {i}: non-finite value")
            continue
        if t.c < 0:
            issues.append(f"vertex {i}: negative weight c={t.c!r}")
        if abs(t.projector.norm - 1.0) > UNIT_TOL:
            issues.append(f"vertex {i}: projector not rank-1 (|a|={t.projector.norm!r})")
        if inst.kind in ("tvc", "pcvc") and t.projector.az > SIGN_TOL:
            issues.append(f"vertex {i}: Tr[Z phi] > 0 (az={t.projector.az!r})")
    if inst.kind == "pcvc":
        pens = inst.penalties or ()
        if len(pens) != inst.m:
            issues.append("penalty count does not match edge count")
        for (u, v), p in zip(inst.edges, pens):
            if not math.isfinite(p) or p < 0:
                issues.append(f"edge ({u},{v}): negative penalty {p!r}")
    if inst.kind == "evc":
        if inst.psi is None:
            issues.append("evc instance without constraint state psi")
        else:
            psi = inst.psi
            nrm = float(np.linalg.norm(psi))
            if abs(nrm - 1.0) > UNIT_TOL:
                issues.append(f"psi not normalized (norm={nrm!r})")
            if not is_swap_invariant(psi):
                issues.append("psi projector is not SWAP-invariant")
    return ValidationReport(not issues, issues)


SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def is_swap_invariant(psi: np.ndarray, tol: float = 1e-10) -> bool:
    psi = np.asarray(psi, dtype=complex).reshape(4)
    proj = np.outer(psi, psi.conj())
    return bool(np.max(np.abs(SWAP @ proj @ SWAP - proj)) <= tol)


def diagonal_psi(alpha: float, beta: float) -> np.ndarray:
    """``alpha|00> + beta|11>`` normalized."""
    v = np.array([alpha, 0.0, 0.0, beta], dtype=complex)
    return v / np.linalg.norm(v)


def singlet_psi() -> np.ndarray:
    return np.array([0.0, _SQRT_HALF, -_SQRT_HALF, 0.0], dtype=complex)


# --- canonicalization -------------------------------------------------------


@dataclass(frozen=True)
class Rotation:
    """Z-axis rotation by ``angle`` followed by optional Z conjugation."""

    angle: float = 0.0
    flip: bool = False

    def apply(self, v: Sequence[float]) -> np.ndarray:
        x, y, z = v
        ca, sa = math.cos(self.angle), math.sin(self.angle)
        x, y = ca * x - sa * y, sa * x + ca * y
        if self.flip:
            x, y = -x, -y
        return np.array([x, y, z])

    def invert(self, v: Sequence[float]) -> np.ndarray:
        x, y, z = v
        if self.flip:
            x, y = -x, -y
        ca, sa = math.cos(self.angle), math.sin(self.angle)
        return np.array([ca * x + sa * y, -sa * x + ca * y, z])


def _canonical_rotation(p: BlochProjector) -> Rotation:
    if p.ay == 0.0:
        return Rotation(0.0, p.ax > 0.0)
    return Rotation(math.pi - math.atan2(p.ay, p.ax), False)


def canonicalize(inst: Instance) -> tuple[Instance, tuple[Rotation, ...]]:
    """Rotate every projector into the stoquastic half-plane ``ay = 0, ax <= 0``.

    Only Z-axis rotations are used, so diagonal constraints and penalties are
    untouched.  Returns the rotated instance and the per-qubit rotation log.
    """
    if inst.kind == "evc":
        raise InstanceError("canonicalize applies to tvc/pcvc instances only")
    rots = []
    terms = []
    for i, t in enumerate(inst.terms):
        if t.projector.az > SIGN_TOL:
            raise InstanceError(f"vertex {i}: Tr[Z phi] > 0 (az={t.projector.az!r})")
        rot = _canonical_rotation(t.projector)
        p = t.projector
        transverse = math.hypot(p.ax, p.ay)
        if rot.angle == 0.0:
            new = BlochProjector(-abs(p.ax), 0.0, p.az)
        else:
            new = BlochProjector(-transverse, 0.0, p.az)
        rots.append(rot)
        terms.append(replace(t, projector=new))
    return inst.with_terms(terms), tuple(rots)


def rotate_state(state: ProductState, rots: Sequence[Rotation]) -> ProductState:
    """Map a state from the original frame into the canonical frame."""
    return ProductState(np.array([r.apply(v) for r, v in zip(rots, state.bloch)]).reshape(-1, 3))


def unrotate_state(state: ProductState, rots: Sequence[Rotation]) -> ProductState:
    """Map a canonical-frame state back into the original frame."""
    return ProductState(np.array([r.invert(v) for r, v in zip(rots, state.bloch)]).reshape(-1, 3))


# --- product-state evaluation -----------------------------------------------


def _check_dims(inst: Instance, state: ProductState) -> None:
    if state.n != inst.n:
        raise InstanceError(f"state has {state.n} qubits, instance has {inst.n}")


def term_expectation(term: LocalTerm, r: Sequence[float]) -> float:
    a = term.projector
    return term.offset + term.c * 0.5 * (1.0 + a.ax * r[0] + a.ay * r[1] + a.az * r[2])


def evaluate(inst: Instance, state: ProductState) -> float:
    """Exact ``Tr[H rho]`` for a product state (constraints excluded)."""
    _check_dims(inst, state)
    r = state.bloch
    total = inst.offset
    for t, ri in zip(inst.terms, r):
        total += term_expectation(t, ri)
    if inst.kind == "pcvc":
        for (u, v), p in zip(inst.edges, inst.penalties):
            total += p * 0.25 * (1.0 + r[u, 2]) * (1.0 + r[v, 2])
    return float(total)


def edge_constraint_expectation(inst: Instance, state: ProductState, u: int, v: int) -> float:
    if inst.kind == "evc":
        psi = inst.psi
        rho = np.kron(state.density(u), state.density(v))
        return float(np.real(psi.conj() @ rho @ psi))
    return 0.25 * (1.0 + state.bloch[u, 2]) * (1.0 + state.bloch[v, 2])


def feasibility(inst: Instance, state: ProductState, tol: float = FEASIBILITY_TOL) -> bool:
    """True iff every edge constraint expectation is at most ``tol``.

    Penalty instances have no hard constraints and are always feasible.
    """
    _check_dims(inst, state)
    if inst.kind == "pcvc":
        return True
    return all(edge_constraint_expectation(inst, state, u, v) <= tol for u, v in inst.edges)
