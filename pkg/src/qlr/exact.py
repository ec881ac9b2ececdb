"""Exact ground-energy oracles for desk-scale instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .core import Instance, InstanceError

DENSE_LIMIT = 2048
COVER_CAP_N = 24
COVER_CAP_DIM = 1 << 20
FULL_CAP_N = 20
NULLSPACE_CAP_N = 12
NULL_THRESHOLD = 1e-9
MAX_K = 16


class OracleCapError(InstanceError):
    """Instance too large for an exact oracle."""


class EigenSolverError(RuntimeError):
    pass


@dataclass
class SpectrumReport:
    dim: int
    eigs: list[float]
    basis: str
    infeasible: bool = False

    @property
    def ground(self) -> float:
        if self.infeasible:
            raise InstanceError("no feasible state")
        return self.eigs[0]

    def to_json(self) -> dict:
        return {"dim": self.dim, "eigs": list(self.eigs), "basis": self.basis, "infeasible": self.infeasible}


# --- eigen-solvers ------------------------------------------------------------


def _start_vector(dim: int) -> np.ndarray:
    v = np.ones(dim)
    v += 1e-3 * np.cos(np.arange(dim) * 0.7381)
    return v / np.linalg.norm(v)


def _check_hermitian(M, tol: float = 1e-10) -> None:
    if M.shape[0] != M.shape[1]:
        raise ValueError("matrix is not square")
    diff = M - M.conj().T
    err = abs(diff).max() if sp.issparse(diff) else np.max(np.abs(diff), initial=0.0)
    if err > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {err:.3g})")


def lowest_eigenvalues(M, k: int = 1, tol: float = 1e-10, method: str = "auto") -> np.ndarray:
    """The ``k`` smallest eigenvalues of a Hermitian matrix, ascending.

    ``method`` is ``"dense"``, ``"iterative"`` or ``"auto"`` (dense up to
    ``DENSE_LIMIT`` rows).  Diagonal sparse matrices are read off directly.
    """
    _check_hermitian(M)
    dim = M.shape[0]
    k = min(k, dim)
    if dim == 0:
        return np.empty(0)
    if sp.issparse(M):
        M = M.tocsr()
        off = M - sp.diags(M.diagonal())
        if off.count_nonzero() == 0:
            return np.sort(np.real(M.diagonal()))[:k]
    if method == "auto":
        method = "dense" if dim <= DENSE_LIMIT else "iterative"
    if method == "iterative" and dim <= k + 1:
        method = "dense"
    if method == "dense":
        A = M.toarray() if sp.issparse(M) else np.asarray(M)
        return np.linalg.eigvalsh(A)[:k]
    try:
        vals = eigsh(
            M, k=k, which="SA", v0=_start_vector(dim), tol=tol * 1e-2,
            ncv=min(dim, max(2 * k + 1, 32)), maxiter=50 * dim, return_eigenvectors=False,
        )
    except ArpackNoConvergence as exc:
        resid = "unknown"
        if exc.eigenvalues is not None and len(exc.eigenvalues):
            resid = f"{len(exc.eigenvalues)} of {k} converged"
        raise EigenSolverError(f"Lanczos iteration did not converge ({resid})") from exc
    return np.sort(np.real(vals))


def smallest_eigenvalue(M, tol: float = 1e-10, method: str = "auto") -> float:
    return float(lowest_eigenvalues(M, 1, tol=tol, method=method)[0])


# --- Hilbert-space helpers -----------------------------------------------------


def bit(x: np.ndarray, i: int, n: int) -> np.ndarray:
    return (x >> (n - 1 - i)) & 1


def enumerate_covers(n: int, edges, cap: int = COVER_CAP_N) -> np.ndarray:
    """Basis indices whose 0-set is independent in the graph, ascending.

    Index ``x`` encodes the bitstring with qubit 0 as most significant bit.
    """
    if n > cap:
        raise OracleCapError(f"n={n} exceeds cover enumeration cap {cap}")
    x = np.arange(1 << n, dtype=np.int64)
    keep = np.ones(x.size, dtype=bool)
    for u, v in edges:
        keep &= (bit(x, u, n) | bit(x, v, n)).astype(bool)
    return x[keep]


def bitstring(x: int, n: int) -> str:
    return format(int(x), f"0{n}b") if n else ""


def _term_elements(inst: Instance):
    """Per-site 2x2 matrices ``c phi`` (offsets handled separately)."""
    return [t.c * t.projector.matrix() for t in inst.terms]


def one_local_hamiltonian(inst: Instance, basis: np.ndarray | None = None) -> sp.csr_matrix:
    """Sparse ``sum_i c_i phi_i + offsets`` on ``basis`` (default: full space).

    Off-diagonal entries between basis states outside ``basis`` are dropped,
    which is exactly the restriction to a computational-basis subspace.
    """
    n = inst.n
    if basis is None:
        basis = np.arange(1 << n, dtype=np.int64)
    dim = basis.size
    mats = _term_elements(inst)
    cplx = any(abs(m[0, 1].imag) > 0 for m in mats)
    dtype = complex if cplx else float
    diag = np.full(dim, inst.total_offset(), dtype=dtype)
    rows, cols, vals = [], [], []
    for i, m in enumerate(mats):
        b = bit(basis, i, n)
        diag += np.where(b == 0, m[0, 0], m[1, 1]).real
        amp = m[0, 1] if cplx else m[0, 1].real
        if amp == 0:
            continue
        flipped = basis ^ (1 << (n - 1 - i))
        pos = np.searchsorted(basis, flipped)
        pos_c = np.minimum(pos, dim - 1)
        ok = basis[pos_c] == flipped
        src = np.nonzero(ok)[0]
        dst = pos_c[ok]
        # <x|phi|y> with x_i=0, y_i=1 is m[0,1]; the transpose is m[1,0]
        v = np.where(b[src] == 0, amp, np.conj(amp))
        rows.append(src)
        cols.append(dst)
        vals.append(v)
    H = sp.diags(diag, format="csr", dtype=dtype)
    if rows:
        off = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
        )
        H = H + off
    return H


def penalty_diagonal(inst: Instance, basis: np.ndarray) -> np.ndarray:
    n = inst.n
    out = np.zeros(basis.size)
    for (u, v), p in zip(inst.edges, inst.penalties or ()):
        both_zero = (bit(basis, u, n) == 0) & (bit(basis, v, n) == 0)
        out += p * both_zero
    return out


# --- oracles -----------------------------------------------------------------------


def covering_hamiltonian(inst: Instance) -> tuple[sp.csr_matrix, np.ndarray]:
    covers = enumerate_covers(inst.n, inst.edges)
    if covers.size > COVER_CAP_DIM:
        raise OracleCapError(f"covering subspace dimension {covers.size} exceeds cap")
    return one_local_hamiltonian(inst, covers), covers


def ground_energy_tvc(inst: Instance, k: int = 1) -> SpectrumReport:
    """Lowest eigenvalues of the objective restricted to the covering subspace."""
    if inst.kind not in ("tvc",):
        raise InstanceError(f"covering oracle needs a tvc instance, got {inst.kind}")
    H, covers = covering_hamiltonian(inst)
    eigs = lowest_eigenvalues(H, min(k, MAX_K))
    return SpectrumReport(int(covers.size), [float(e) for e in eigs], "covering")


def full_hamiltonian(inst: Instance) -> sp.csr_matrix:
    if inst.n > FULL_CAP_N:
        raise OracleCapError(f"n={inst.n} exceeds full-space cap {FULL_CAP_N}")
    basis = np.arange(1 << inst.n, dtype=np.int64)
    H = one_local_hamiltonian(inst, basis)
    if inst.kind == "pcvc":
        H = H + sp.diags(penalty_diagonal(inst, basis), format="csr")
    return H


def ground_energy_full(inst: Instance, k: int = 1) -> SpectrumReport:
    """Lowest eigenvalues of the unconstrained Hamiltonian on all ``2^n`` states."""
    if inst.kind != "pcvc":
        raise InstanceError(f"full-space oracle needs a pcvc instance, got {inst.kind}")
    H = full_hamiltonian(inst)
    eigs = lowest_eigenvalues(H, min(k, MAX_K))
    return SpectrumReport(1 << inst.n, [float(e) for e in eigs], "full")


def two_qubit_operator(n: int, i: int, j: int, op: np.ndarray) -> sp.csr_matrix:
    """Sparse embedding of a 4x4 operator acting on qubits ``(i, j)``."""
    x = np.arange(1 << n, dtype=np.int64)
    bi, bj = bit(x, i, n), bit(x, j, n)
    local_in = 2 * bi + bj
    base = x & ~((1 << (n - 1 - i)) | (1 << (n - 1 - j)))
    rows, cols, vals = [], [], []
    for out in range(4):
        target = base | ((out >> 1) << (n - 1 - i)) | ((out & 1) << (n - 1 - j))
        v = op[out, local_in]
        nz = v != 0
        rows.append(target[nz])
        cols.append(x[nz])
        vals.append(v[nz])
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(1 << n, 1 << n)
    )


def constraint_sum(n: int, edges, psi: np.ndarray) -> sp.csr_matrix:
    proj = np.outer(psi, np.conj(psi))
    C = sp.csr_matrix((1 << n, 1 << n), dtype=complex)
    for u, v in edges:
        C = C + two_qubit_operator(n, u, v, proj)
    return C


def nullspace_basis(n: int, edges, psi: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning the joint kernel of all edge constraints."""
    C = constraint_sum(n, edges, psi).toarray()
    if np.allclose(C.imag, 0.0):
        C = C.real
    w, V = np.linalg.eigh(C)
    return V[:, w < NULL_THRESHOLD]


def ground_energy_nullspace(inst: Instance, k: int = 1, psi: np.ndarray | None = None) -> SpectrumReport:
    """Objective restricted to the nullspace of ``sum_ij |psi><psi|_ij``.

    ``psi`` overrides the instance's constraint state, which lets tvc
    instances be checked with ``psi = |00>``.
    """
    if psi is None:
        if inst.psi is None:
            raise InstanceError("no constraint state psi")
        psi = inst.psi
    if inst.n > NULLSPACE_CAP_N:
        raise OracleCapError(f"n={inst.n} exceeds nullspace cap {NULLSPACE_CAP_N}")
    Q = nullspace_basis(inst.n, inst.edges, np.asarray(psi, dtype=complex))
    if Q.shape[1] == 0:
        return SpectrumReport(0, [], "nullspace", infeasible=True)
    H = one_local_hamiltonian(inst).toarray()
    Hq = Q.conj().T @ H @ Q
    Hq = 0.5 * (Hq + Hq.conj().T)
    eigs = np.linalg.eigvalsh(Hq)[: min(k, MAX_K)]
    return SpectrumReport(int(Q.shape[1]), [float(e) for e in eigs], "nullspace")


def ground_energy(inst: Instance, k: int = 1) -> SpectrumReport:
    """Dispatch to the oracle that matches ``inst.kind``."""
    if inst.kind == "tvc":
        return ground_energy_tvc(inst, k)
    if inst.kind == "pcvc":
        return ground_energy_full(inst, k)
    if inst.kind == "evc":
        return ground_energy_nullspace(inst, k)
    raise InstanceError(f"unknown kind {inst.kind}")
