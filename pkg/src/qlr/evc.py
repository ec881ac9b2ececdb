"""Polynomial-time solver for entangled vertex cover.

An entangled constraint state is first brought to one of two canonical
forms by a single-qubit unitary ``U`` (``U (x) U psi``): ``alpha|00> +
beta|11>`` with ``alpha, beta >= 0`` or the singlet.  Constraint closure
then forces the feasible amplitudes to be permutation symmetric within
parts of the graph, and the objective reduces to a small Hermitian
eigenproblem in a Dicke-type basis:

* case 1 (bipartite, diagonal psi): basis ``{|0>, |a>, |b>}``, dim ``n+1``;
* case 2 (singlet): Dicke basis ``{|a>}``, dim ``n+1``;
* case 3 (non-bipartite, diagonal psi): basis ``{|e>, |o>}``, dim 2.

Amplitudes are kept per Hamming sector.  A sector ``(a, b)`` carries
``C(|A|, a) C(|B|, b)`` equal bitstring amplitudes, so the normalized
sector coefficient picks up a ``sqrt`` of that multiplicity in addition to
the geometric factor ``(-alpha/beta)^j`` fixed by the constraint.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .core import (
    SWAP,
    BlochProjector,
    Instance,
    InstanceError,
    is_swap_invariant,
)

TAKAGI_TOL = 1e-10
CLASSICAL_TOL = 1e-12
RECONSTRUCT_CAP_N = 14

_PAULI_TRIPLE = ("00", "01", "10", "11")


# --- constraint canonicalization --------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConstraintState:
    """Canonical form of a SWAP-invariant constraint state.

    ``U (x) U raw ~ canonical`` where ``canonical`` is ``alpha|00> +
    beta|11>`` (``form="diagonal"``) or ``(|01> - |10>)/sqrt 2``
    (``form="singlet"``).
    """

    form: str
    alpha: float
    beta: float
    unitary: np.ndarray
    raw: np.ndarray

    @property
    def canonical(self) -> np.ndarray:
        if self.form == "singlet":
            return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
        return np.array([self.alpha, 0.0, 0.0, self.beta], dtype=complex)

    @property
    def classical(self) -> bool:
        return self.form == "diagonal" and min(self.alpha, self.beta) <= CLASSICAL_TOL

    def rotated_back(self) -> np.ndarray:
        """``U^dag (x) U^dag`` applied to the canonical state."""
        Ud = self.unitary.conj().T
        return np.kron(Ud, Ud) @ self.canonical


def _takagi_2x2(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(s, T)`` with ``M = T diag(s) T^T``, ``T`` unitary, ``s >= 0``."""
    V, s, Wh = np.linalg.svd(M)
    W = Wh.conj().T
    groups: list[list[int]] = []
    for k in range(2):
        for g in groups:
            if abs(s[g[0]] - s[k]) <= TAKAGI_TOL:
                g.append(k)
                break
        else:
            groups.append([k])
    blocks = []
    for g in groups:
        Z = V[:, g].T @ W[:, g]
        blocks.append(scipy.linalg.sqrtm(Z) if s[g[0]] > TAKAGI_TOL else np.eye(len(g)))
    Q = scipy.linalg.block_diag(*blocks)
    T = V @ Q.conj()
    # the zero block is not pinned by the sqrtm step; any unitary completion works
    if s[-1] <= TAKAGI_TOL:
        T = _complete_unitary(T[:, 0]) if s[0] > TAKAGI_TOL else np.eye(2, dtype=complex)
    return s, T


def _complete_unitary(col: np.ndarray) -> np.ndarray:
    col = col / np.linalg.norm(col)
    other = np.array([-np.conj(col[1]), np.conj(col[0])])
    return np.column_stack([col, other])


def _closest_to_identity(U: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Use the residual gauge freedom of ``U M U^T = diag(s)`` to approach ``I``."""
    if s[0] > TAKAGI_TOL and abs(s[0] - s[1]) <= TAKAGI_TOL:
        # any real orthogonal O keeps O diag(s) O^T = diag(s)
        P, _ = scipy.linalg.polar(U.real.T)
        return P @ U if np.linalg.norm(U.real) > 0 else U
    out = U.copy()
    for k in range(2):
        if s[k] > TAKAGI_TOL:
            if out[k, k].real < 0:
                out[k] = -out[k]
        else:
            z = out[k, k]
            if abs(z) > 0:
                out[k] = out[k] * (abs(z) / z)
    return out


def takagi_canonicalize(psi) -> ConstraintState:
    """Canonical form of a SWAP-invariant two-qubit constraint state."""
    raw = np.asarray(psi, dtype=complex).reshape(4)
    nrm = float(np.linalg.norm(raw))
    if nrm <= TAKAGI_TOL:
        raise InstanceError("constraint state is zero")
    if not is_swap_invariant(raw):
        raise InstanceError("constraint state is not SWAP-invariant")
    raw = raw / nrm
    if np.linalg.norm(SWAP @ raw + raw) <= 1e-10:
        return ConstraintState("singlet", 0.0, 0.0, np.eye(2, dtype=complex), raw)
    M = raw.reshape(2, 2)
    M = 0.5 * (M + M.T)
    s, T = _takagi_2x2(M)
    candidates = []
    for perm in ((0, 1), (1, 0)):
        P = np.eye(2)[list(perm)]
        s_p = s[list(perm)]
        U = _closest_to_identity(P @ T.conj().T, s_p)
        candidates.append((np.linalg.norm(U - np.eye(2)), perm[0], s_p, U))
    _, _, s_best, U = min(candidates, key=lambda c: (round(c[0], 12), c[1]))
    return ConstraintState("diagonal", float(s_best[0]), float(s_best[1]), U, raw)


def _rotate_projector(p: BlochProjector, U: np.ndarray) -> BlochProjector:
    m = U @ p.matrix() @ U.conj().T
    v = np.array([2.0 * m[1, 0].real, 2.0 * m[1, 0].imag, (m[0, 0] - m[1, 1]).real])
    v /= np.linalg.norm(v)
    return BlochProjector.from_vector(v)


def canonical_instance(inst: Instance, state: ConstraintState | None = None) -> Instance:
    """The equivalent instance in the frame where ``psi`` is canonical.

    Feasible states map as ``|g'> = U^{(x)n} |g>`` so every projector is
    conjugated as ``phi' = U phi U^dag``.
    """
    state = state or takagi_canonicalize(inst.psi)
    U = state.unitary
    terms = [
        t if t.c == 0.0 else type(t)(t.c, _rotate_projector(t.projector, U), t.offset)
        for t in inst.terms
    ]
    return Instance(inst.n, inst.edges, terms, "evc", psi=state.canonical, offset=inst.offset)


# --- graph structure ------------------------------------------------------------


@dataclass(frozen=True)
class ComponentClass:
    case: str  # "1", "2", "3" or "classical"
    vertices: tuple[int, ...]
    A: tuple[int, ...] = ()
    B: tuple[int, ...] = ()


def _components(inst: Instance) -> list[tuple[list[int], dict[int, int] | None]]:
    """Connected components with a 2-colouring (``None`` if not bipartite)."""
    adj = inst.neighbors()
    colour: dict[int, int] = {}
    out = []
    for s in range(inst.n):
        if s in colour:
            continue
        colour[s] = 0
        comp, ok = [s], True
        q = deque([s])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    comp.append(v)
                    q.append(v)
                elif colour[v] == colour[u]:
                    ok = False
        comp.sort()
        out.append((comp, {v: colour[v] for v in comp} if ok else None))
    return out


def classify(inst: Instance, state: ConstraintState | None = None) -> list[ComponentClass]:
    """Case tag per connected component, in order of smallest vertex.

    Bipartitions put the smallest vertex of the component in ``A``.
    """
    state = state or takagi_canonicalize(inst.psi)
    deg = inst.degrees()
    out = []
    for comp, col in _components(inst):
        verts = tuple(comp)
        if state.form == "singlet":
            out.append(ComponentClass("2", verts))
            continue
        has_edges = any(deg[v] for v in comp)
        if state.classical and has_edges:
            out.append(ComponentClass("classical", verts))
        elif col is not None:
            A = tuple(v for v in comp if col[v] == 0)
            B = tuple(v for v in comp if col[v] == 1)
            out.append(ComponentClass("1", verts, A, B))
        else:
            out.append(ComponentClass("3", verts))
    return out


@dataclass
class Closure:
    eps: set[tuple[int, int]]
    psi: set[tuple[int, int]]
    trace: list[tuple[str, tuple[int, int], tuple[int, int], tuple[int, int]]] = field(
        default_factory=list
    )


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def closure_edges(edges, A, B=(), case: str = "1", audit: bool = False) -> Closure:
    """Derived epsilon- and psi-pairs of one connected component.

    The default returns the closed form.  With ``audit=True`` the pair
    rules ``psi+psi -> eps``, ``eps+psi -> psi`` and ``eps+eps -> eps`` are
    applied to the original edges until nothing new appears, and every
    derivation step is recorded in ``trace``.
    """
    verts = sorted(set(A) | set(B))
    if not audit:
        allp = {_pair(i, j) for i, j in combinations(verts, 2)}
        if case == "1":
            same = {_pair(i, j) for S in (A, B) for i, j in combinations(S, 2)}
            return Closure(same, allp - same)
        if case == "2":
            return Closure(allp, set())
        if case == "3":
            return Closure(set(allp), set(allp))
        raise ValueError(f"unknown case {case!r}")

    rel: dict[tuple[int, int], set[str]] = {}
    base = "eps" if case == "2" else "psi"
    for u, v in edges:
        rel.setdefault(_pair(u, v), set()).add(base)
    rules = {("psi", "psi"): "eps", ("eps", "psi"): "psi", ("psi", "eps"): "psi", ("eps", "eps"): "eps"}
    trace = []
    changed = True
    while changed:
        changed = False
        for j in verts:
            for i in verts:
                for k in verts:
                    if len({i, j, k}) < 3:
                        continue
                    for r1 in sorted(rel.get(_pair(i, j), ())):
                        for r2 in sorted(rel.get(_pair(j, k), ())):
                            new = rules[(r1, r2)]
                            ik = _pair(i, k)
                            if new not in rel.get(ik, ()):
                                rel.setdefault(ik, set()).add(new)
                                trace.append((f"{r1}+{r2}->{new}", _pair(i, j), _pair(j, k), ik))
                                changed = True
    eps = {p for p, r in rel.items() if "eps" in r}
    psi = {p for p, r in rel.items() if "psi" in r}
    return Closure(eps, psi, trace)


# --- Dicke matrix elements ---------------------------------------------------------


def dicke_matrix_element(op: str, bra, ket, sizes, side: str | None = None) -> float:
    """``<bra| op_i |ket>`` for a single site ``i`` in normalized Dicke states.

    ``op`` is ``"00"``, ``"01"``, ``"10"`` or ``"11"`` for ``|x><y|``.  Plain
    form: ``bra``, ``ket`` are Hamming weights and ``sizes`` is ``n``.
    Bipartite form: ``bra = (a, b)``, ``ket = (a', b')``, ``sizes =
    (|A|, |B|)`` and ``side`` is ``"A"`` or ``"B"`` for the part holding
    ``i``.  Out-of-range weights give 0.
    """
    if op not in _PAULI_TRIPLE:
        raise ValueError(f"unknown operator {op!r}")
    if side is not None:
        (a, b), (a2, b2) = bra, ket
        NA, NB = sizes
        if side == "A":
            if b != b2 or not 0 <= b <= NB:
                return 0.0
            return dicke_matrix_element(op, a, a2, NA)
        if side == "B":
            if a != a2 or not 0 <= a <= NA:
                return 0.0
            return dicke_matrix_element(op, b, b2, NB)
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    n = int(sizes)
    a, a2 = int(bra), int(ket)
    if n <= 0 or not (0 <= a <= n and 0 <= a2 <= n):
        return 0.0
    if op == "00":
        return (n - a) / n if a == a2 else 0.0
    if op == "11":
        return a / n if a == a2 else 0.0
    if op == "01":
        return math.sqrt((a + 1) * (n - a)) / n if a2 == a + 1 else 0.0
    return math.sqrt((a2 + 1) * (n - a2)) / n if a == a2 + 1 else 0.0


def _aggregate(inst: Instance, verts) -> np.ndarray:
    P = np.zeros((2, 2), dtype=complex)
    for v in verts:
        t = inst.terms[v]
        P += t.c * t.projector.matrix()
    return P


def dicke_block(P: np.ndarray, N: int) -> np.ndarray:
    """Dicke-basis block (``a = 0..N``) of ``sum_i Q_i`` with ``P = sum_i Q``.

    ``P`` is the aggregate of the per-site 2x2 operators.  Every site has
    the same Dicke matrix elements, so the block equals the single-site
    elements of ``P``.
    """
    H = np.zeros((N + 1, N + 1), dtype=complex)
    if N == 0:
        return H
    for a in range(N + 1):
        for a2 in range(max(a - 1, 0), min(a + 2, N + 1)):
            for op in _PAULI_TRIPLE:
                x, y = int(op[0]), int(op[1])
                if P[x, y] != 0:
                    H[a, a2] += P[x, y] * dicke_matrix_element(op, a, a2, N)
    return H


def _log_binom(n: int, k: np.ndarray) -> np.ndarray:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _geometric_column(r: float, j: np.ndarray, logmult: np.ndarray) -> np.ndarray:
    """Normalized ``r^j sqrt(mult)`` evaluated in log space."""
    if j.size == 1:
        return np.ones(1)
    if r == 0.0:
        out = np.where(j == 0, 1.0, 0.0)
        return out / np.linalg.norm(out)
    logw = j * math.log(abs(r)) + 0.5 * logmult
    logw -= logw.max()
    w = np.exp(logw) * np.where((j % 2 == 1) & (r < 0), -1.0, 1.0)
    return w / np.linalg.norm(w)


# --- reduced eigenproblems ------------------------------------------------------------


@dataclass
class ComponentSolution:
    case: str
    vertices: tuple[int, ...]
    energy: float
    matrix: np.ndarray
    amplitudes: np.ndarray
    weights: np.ndarray  # sector coefficients per basis vector (columns)
    sector_shape: tuple[int, ...]
    A: tuple[int, ...] = ()
    B: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def sector_amplitudes(self) -> np.ndarray:
        return (self.weights @ self.amplitudes).reshape(self.sector_shape)


@dataclass
class EVCSolveResult:
    energy: float
    components: list[ComponentSolution]
    constraint: ConstraintState | None = None
    n: int = 0

    @property
    def case(self) -> str:
        tags = sorted({c.case for c in self.components})
        return ",".join(tags)

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.components), default=0)

    @property
    def matrix(self) -> np.ndarray:
        if len(self.components) != 1:
            raise ValueError("matrix is defined per component for disconnected instances")
        return self.components[0].matrix

    def to_json(self) -> dict:
        out: dict = {"case": self.case, "energy": self.energy, "dim": self.dim}
        if len(self.components) == 1:
            c = self.components[0]
            out["amplitudes"] = _amps_json(c.amplitudes)
            if c.case == "1":
                out["partition"] = {"A": list(c.A), "B": list(c.B)}
        else:
            out["components"] = [
                {"case": c.case, "vertices": list(c.vertices), "energy": c.energy, "dim": c.dim,
                 "amplitudes": _amps_json(c.amplitudes),
                 **({"partition": {"A": list(c.A), "B": list(c.B)}} if c.case == "1" else {})}
                for c in self.components
            ]
        return out


def _amps_json(v: np.ndarray) -> list:
    if np.allclose(np.imag(v), 0.0, atol=1e-15):
        return [float(x) for x in np.real(v)]
    return [[float(x.real), float(x.imag)] for x in v]


def _diag_coeffs(inst: Instance) -> tuple[float, float]:
    psi = inst.psi
    if psi is None or np.max(np.abs(psi[1:3])) > 1e-10:
        raise InstanceError("instance constraint is not in diagonal canonical form")
    return float(psi[0].real), float(psi[3].real)


def _lowest(M: np.ndarray) -> tuple[float, np.ndarray]:
    M = 0.5 * (M + M.conj().T)
    if np.allclose(M.imag, 0.0):
        M = M.real
    w, V = np.linalg.eigh(M)
    v = V[:, 0]
    k = int(np.argmax(np.abs(v)))
    v = v * (abs(v[k]) / v[k])  # fixed global phase
    if np.allclose(np.imag(v), 0.0):
        v = np.real(v)
    return float(w[0]), v


def _offsets(inst: Instance, verts, whole: bool) -> float:
    return sum(inst.terms[v].offset for v in verts) + (inst.offset if whole else 0.0)


def _wrap(inst: Instance, comp: ComponentSolution, verts) -> EVCSolveResult:
    whole = len(verts) == inst.n
    energy = comp.energy + (inst.offset if whole else 0.0)
    return EVCSolveResult(energy, [comp], None, inst.n)


def _case1(inst: Instance, A, B) -> ComponentSolution:
    alpha, beta = _diag_coeffs(inst)
    A, B = tuple(sorted(A)), tuple(sorted(B))
    NA, NB = len(A), len(B)
    H = np.kron(dicke_block(_aggregate(inst, A), NA), np.eye(NB + 1)) + np.kron(
        np.eye(NA + 1), dicke_block(_aggregate(inst, B), NB)
    )
    r = 0.0 if min(NA, NB) == 0 else -alpha / beta
    starts = [(0, 0)] + [(a, 0) for a in range(1, NA + 1)] + [(0, b) for b in range(1, NB + 1)]
    W = np.zeros(((NA + 1) * (NB + 1), len(starts)))
    for k, (a0, b0) in enumerate(starts):
        j = np.arange(min(NA - a0, NB - b0) + 1)
        logm = _log_binom(NA, a0 + j) + _log_binom(NB, b0 + j)
        W[(a0 + j) * (NB + 1) + (b0 + j), k] = _geometric_column(r, j, logm)
    M = W.T @ H @ W
    e, v = _lowest(M)
    return ComponentSolution("1", tuple(sorted(A + B)),
                             e + _offsets(inst, A + B, False), M, v, W, (NA + 1, NB + 1), A, B)


def _case2(inst: Instance, verts) -> ComponentSolution:
    verts = tuple(sorted(verts))
    N = len(verts)
    M = dicke_block(_aggregate(inst, verts), N)
    e, v = _lowest(M)
    return ComponentSolution("2", verts, e + _offsets(inst, verts, False), M, v, np.eye(N + 1), (N + 1,))


def _case3(inst: Instance, verts) -> ComponentSolution:
    alpha, beta = _diag_coeffs(inst)
    verts = tuple(sorted(verts))
    N = len(verts)
    H = dicke_block(_aggregate(inst, verts), N)
    r = -alpha / beta
    W = np.zeros((N + 1, 2))
    for k, parity in enumerate((0, 1)):
        a = np.arange(parity, N + 1, 2)
        W[a, k] = _geometric_column(r, (a - parity) // 2, _log_binom(N, a))
    M = W.T @ H @ W
    e, v = _lowest(M)
    return ComponentSolution("3", verts, e + _offsets(inst, verts, False), M, v, W, (N + 1,))


def solve_case1(inst: Instance, A, B) -> EVCSolveResult:
    """Bipartite component with canonical ``psi = alpha|00> + beta|11>``.

    ``inst`` must already be in the canonical frame (see
    :func:`canonical_instance`).  The global offset is included only when
    ``A`` and ``B`` cover every vertex.
    """
    return _wrap(inst, _case1(inst, A, B), tuple(A) + tuple(B))


def solve_case2(inst: Instance, vertices=None) -> EVCSolveResult:
    """Singlet constraint: symmetric subspace of the component."""
    verts = tuple(range(inst.n)) if vertices is None else tuple(vertices)
    return _wrap(inst, _case2(inst, verts), verts)


def solve_case3(inst: Instance, vertices=None) -> EVCSolveResult:
    """Non-bipartite component with canonical diagonal ``psi``."""
    verts = tuple(range(inst.n)) if vertices is None else tuple(vertices)
    return _wrap(inst, _case3(inst, verts), verts)


def solve_evc(inst: Instance) -> EVCSolveResult:
    """Exact EVC ground energy as a sum over connected components."""
    if inst.kind != "evc":
        raise InstanceError(f"kind/algo mismatch: evc solver needs an evc instance, got {inst.kind}")
    if inst.psi is None:
        raise InstanceError("evc instance without constraint state psi")
    state = takagi_canonicalize(inst.psi)
    canon = canonical_instance(inst, state)
    comps = []
    for cc in classify(canon, state):
        if cc.case == "classical":
            raise InstanceError(
                "constraint state is a product state (alpha*beta = 0); "
                "use the tvc/exact route instead of the entangled solver"
            )
        if cc.case == "1":
            comps.append(_case1(canon, cc.A, cc.B))
        elif cc.case == "2":
            comps.append(_case2(canon, cc.vertices))
        else:
            comps.append(_case3(canon, cc.vertices))
    energy = float(sum(c.energy for c in comps) + inst.offset)
    return EVCSolveResult(energy, comps, state, inst.n)


# --- reconstruction -------------------------------------------------------------------


def _popcount(x: np.ndarray, mask_bits: list[int], n: int) -> np.ndarray:
    out = np.zeros(x.shape, dtype=np.int64)
    for v in mask_bits:
        out += (x >> (n - 1 - v)) & 1
    return out


def _component_vector(comp: ComponentSolution, x: np.ndarray, n: int) -> np.ndarray:
    sec = comp.sector_amplitudes()
    if comp.case == "1":
        NA, NB = len(comp.A), len(comp.B)
        a = _popcount(x, list(comp.A), n)
        b = _popcount(x, list(comp.B), n)
        mult = np.exp(_log_binom(NA, a) + _log_binom(NB, b))
        return sec[a, b] / np.sqrt(mult)
    N = len(comp.vertices)
    a = _popcount(x, list(comp.vertices), n)
    return sec[a] / np.sqrt(np.exp(_log_binom(N, a)))


def reconstruct_state(result: EVCSolveResult, n: int | None = None, frame: str = "raw") -> np.ndarray:
    """Full ``2^n`` amplitude vector of the optimal state.

    ``frame="canonical"`` returns the state for the rotated constraint;
    ``frame="raw"`` (default) undoes the Takagi rotation qubit by qubit.
    """
    n = result.n if n is None else n
    if n > RECONSTRUCT_CAP_N:
        raise InstanceError(f"n={n} exceeds reconstruction cap {RECONSTRUCT_CAP_N}")
    x = np.arange(1 << n, dtype=np.int64)
    vec = np.ones(x.size, dtype=complex)
    for comp in result.components:
        vec *= _component_vector(comp, x, n)
    vec /= np.linalg.norm(vec)
    if frame == "raw" and result.constraint is not None:
        Ud = result.constraint.unitary.conj().T
        if not np.allclose(Ud, np.eye(2)):
            vec = apply_single_qubit(vec, Ud, n)
    return vec


def apply_single_qubit(vec: np.ndarray, U: np.ndarray, n: int) -> np.ndarray:
    """``U^{(x)n} vec``."""
    t = vec.reshape((2,) * n)
    for q in range(n):
        t = np.moveaxis(np.tensordot(U, t, axes=([1], [q])), 0, q)
    return t.reshape(-1)


def constraint_expectations(inst: Instance, vec: np.ndarray) -> np.ndarray:
    """``<v| (|psi><psi|)_ij |v>`` for every edge."""
    n = inst.n
    t = np.asarray(vec, dtype=complex).reshape((2,) * n)
    psi = np.conj(inst.psi).reshape(2, 2)
    out = []
    for u, v in inst.edges:
        c = np.tensordot(psi, t, axes=([0, 1], [u, v]))
        out.append(float(np.vdot(c, c).real))
    return np.array(out)


def state_energy(inst: Instance, vec: np.ndarray) -> float:
    """``<v|H|v>`` for a full state vector, offsets included."""
    n = inst.n
    t = np.asarray(vec, dtype=complex).reshape((2,) * n)
    total = inst.offset
    for q, term in enumerate(inst.terms):
        m = term.matrix()
        mt = np.moveaxis(np.tensordot(m, t, axes=([1], [q])), 0, q)
        total += float(np.vdot(t, mt).real)
    return float(total)


__all__ = [
    "ComponentClass",
    "ComponentSolution",
    "ConstraintState",
    "EVCSolveResult",
    "canonical_instance",
    "classify",
    "closure_edges",
    "constraint_expectations",
    "dicke_block",
    "dicke_matrix_element",
    "reconstruct_state",
    "solve_case1",
    "solve_case2",
    "solve_case3",
    "solve_evc",
    "state_energy",
    "takagi_canonicalize",
]
