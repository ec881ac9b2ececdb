"""Local-ratio product-state approximation algorithms.

Each solver peels non-negative edge terms ``w_ij H_ij`` off the objective
until every edge is settled, then picks a product state that pays nothing on
the remainder ``R``.  The decomposition is returned as a :class:`Certificate`
so the approximation guarantee can be re-checked edge by edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    KET1,
    BlochProjector,
    Instance,
    InstanceError,
    ProductState,
    Rotation,
    canonicalize,
    evaluate,
    feasibility,
    rotate_state,
    unrotate_state,
)

WEIGHT_EPS = 1e-12
TVC_RATIO = 2.0 + math.sqrt(2.0)
TPCVC_RATIO = 4.194
CLASSICAL_RATIO = 2.0
RATIO_SLACK = 1e-7


@dataclass
class Round:
    edge: tuple[int, int]
    w: float
    mu_star: float
    term: str
    lam: float = 0.0
    local_ratio: float = float("nan")


@dataclass
class Certificate:
    """Decomposition ``H = R + sum_ij w_ij H_ij`` in the canonical frame."""

    kind: str
    rounds: list[Round]
    residual: list[float]
    residual_penalties: list[float] | None = None
    rotations: tuple[Rotation, ...] = ()
    alpha: float = TVC_RATIO

    @property
    def alpha_effective(self) -> float:
        vals = [r.local_ratio for r in self.rounds if math.isfinite(r.local_ratio)]
        return float(max(vals, default=0.0))

    def to_json(self) -> dict:
        return {
            "rounds": [
                {"edge": list(r.edge), "w": r.w, "mu_star": r.mu_star, "local_ratio": r.local_ratio}
                for r in self.rounds
            ],
            "residual": list(self.residual),
            "alpha_effective": self.alpha_effective,
        }


def _edge_order(inst: Instance, tie_break: Sequence[tuple[int, int]] | None):
    if tie_break is None:
        return list(range(inst.m))
    index = {e: k for k, e in enumerate(inst.edges)}
    order = []
    for u, v in tie_break:
        key = (u, v) if u <= v else (v, u)
        if key not in index:
            raise InstanceError(f"tie-break edge ({u},{v}) not in instance")
        order.append(index[key])
    seen = set(order)
    order += [k for k in range(inst.m) if k not in seen]
    return order


def _clamp(x: float) -> float:
    return 0.0 if x <= WEIGHT_EPS else x


# --- classical vertex cover ------------------------------------------------------


def lr_classical_vc(inst: Instance, tie_break=None) -> tuple[set[int], Certificate]:
    """Bar-Yehuda/Even local ratio for weighted vertex cover.

    Every vertex must carry the diagonal projector ``|1><1|``.
    """
    for i, t in enumerate(inst.terms):
        p = t.projector
        if abs(p.az + 1.0) > 1e-12 or p.ax != 0.0 or p.ay != 0.0:
            raise InstanceError(f"vertex {i} is not diagonal |1><1|")
    c = [float(t.c) for t in inst.terms]
    cover = {i for i in range(inst.n) if c[i] <= WEIGHT_EPS}
    rounds = []
    for k in _edge_order(inst, tie_break):
        u, v = inst.edges[k]
        if u in cover or v in cover:
            continue
        w = min(c[u], c[v])
        c[u], c[v] = _clamp(c[u] - w), _clamp(c[v] - w)
        rounds.append(Round((u, v), w, 1.0, "x_u + x_v"))
        cover.update(i for i in (u, v) if c[i] == 0.0)
    for r in rounds:
        u, v = r.edge
        r.local_ratio = float((u in cover) + (v in cover))
    cert = Certificate("classical", rounds, c, alpha=CLASSICAL_RATIO,
                       rotations=tuple(Rotation() for _ in range(inst.n)))
    return cover, cert


# --- transverse vertex cover -------------------------------------------------


def edge_restricted_min(az_i: float, az_j: float) -> float:
    """Minimum of ``Tr[(phi_i + phi_j) rho]`` over states orthogonal to ``|00>``.

    Both projectors are canonical (``ay = 0``, ``ax = -sqrt(1 - az^2)``).
    """
    for a in (az_i, az_j):
        if not (-1.0 - 1e-9 <= a <= 1e-9):
            raise ValueError(f"az={a!r} outside [-1, 0]")
    a = min(max(az_i, -1.0), 0.0)
    k = 0.5 * (a + min(max(az_j, -1.0), 0.0))
    disc = 2.0 * a * a - 4.0 * a * k + k * k + 2.0
    return 0.5 * (2.0 - k - math.sqrt(disc))


def _final_state(inst: Instance, c: list[float]) -> list[BlochProjector]:
    deg = inst.degrees()
    out = []
    for i, t in enumerate(inst.terms):
        if c[i] == 0.0 and deg[i] > 0:
            out.append(KET1)
        else:
            out.append(t.projector.antipode())
    return out


def _phi_expect(p: BlochProjector, r: np.ndarray) -> float:
    return 0.5 * (1.0 + p.ax * r[0] + p.ay * r[1] + p.az * r[2])


def lr_tvc(inst: Instance, tie_break=None) -> tuple[ProductState, Certificate]:
    """Local-ratio product state for transverse vertex cover.

    Edges are taken in lexicographic order (or ``tie_break`` order); an edge
    is selected while both endpoint weights are positive, and
    ``w = min(c_u, c_v)`` is subtracted from both.  The state is returned in
    the frame of ``inst``.
    """
    if inst.kind != "tvc":
        raise InstanceError(f"lr_tvc needs a tvc instance, got {inst.kind}")
    canon, rots = canonicalize(inst)
    c = [_clamp(float(t.c)) for t in canon.terms]
    rounds = []
    for k in _edge_order(canon, tie_break):
        u, v = canon.edges[k]
        if c[u] == 0.0 or c[v] == 0.0:
            continue
        w = min(c[u], c[v])
        c[u], c[v] = _clamp(c[u] - w), _clamp(c[v] - w)
        mu = edge_restricted_min(canon.terms[u].projector.az, canon.terms[v].projector.az)
        rounds.append(Round((u, v), w, mu, "phi_u + phi_v"))
    projs = _final_state(canon, c)
    state = ProductState.from_projectors(projs)
    for r in rounds:
        u, v = r.edge
        val = _phi_expect(canon.terms[u].projector, state.bloch[u]) + _phi_expect(
            canon.terms[v].projector, state.bloch[v]
        )
        r.local_ratio = float(val / r.mu_star)
    cert = Certificate("tvc", rounds, c, rotations=rots, alpha=TVC_RATIO)
    return unrotate_state(state, rots), cert


# --- transverse prize-collecting vertex cover -----------------------------------


def pcvc_lambda(az_i: float, az_j: float) -> float:
    """Penalty multiplier that equalizes ``|11>`` and ``(I-phi)(I-phi)`` costs."""
    return 2.0 / (1.0 - az_i) + 2.0 / (1.0 - az_j)


def pcvc_edge_matrix(p_i: BlochProjector, p_j: BlochProjector, lam: float) -> np.ndarray:
    """``phi_i + phi_j + lam (I+Z)(I+Z)/4`` as a 4x4 matrix."""
    eye = np.eye(2)
    H = np.kron(p_i.matrix(), eye) + np.kron(eye, p_j.matrix())
    H[0, 0] += lam
    return H


def pcvc_edge_min(p_i: BlochProjector, p_j: BlochProjector, lam: float) -> float:
    return float(np.linalg.eigvalsh(pcvc_edge_matrix(p_i, p_j, lam))[0])


def lr_tpcvc(inst: Instance, tie_break=None) -> tuple[ProductState, Certificate]:
    """Local-ratio product state for the prize-collecting variant.

    An edge is selected while ``c_u``, ``c_v`` and ``c_uv`` are all positive;
    ``w = min(c_u, c_v, c_uv / lam)``.
    """
    if inst.kind != "pcvc":
        raise InstanceError(f"lr_tpcvc needs a pcvc instance, got {inst.kind}")
    canon, rots = canonicalize(inst)
    c = [_clamp(float(t.c)) for t in canon.terms]
    pen = [_clamp(float(p)) for p in canon.penalties]
    rounds = []
    for k in _edge_order(canon, tie_break):
        u, v = canon.edges[k]
        if c[u] == 0.0 or c[v] == 0.0 or pen[k] == 0.0:
            continue
        pu, pv = canon.terms[u].projector, canon.terms[v].projector
        lam = pcvc_lambda(pu.az, pv.az)
        w = min(c[u], c[v], pen[k] / lam)
        c[u], c[v] = _clamp(c[u] - w), _clamp(c[v] - w)
        pen[k] = _clamp(pen[k] - lam * w)
        rounds.append(Round((u, v), w, pcvc_edge_min(pu, pv, lam), "phi_u + phi_v + lam P00", lam))
    projs = _final_state(canon, c)
    state = ProductState.from_projectors(projs)
    for r in rounds:
        u, v = r.edge
        ru, rv = state.bloch[u], state.bloch[v]
        val = (
            _phi_expect(canon.terms[u].projector, ru)
            + _phi_expect(canon.terms[v].projector, rv)
            + r.lam * 0.25 * (1.0 + ru[2]) * (1.0 + rv[2])
        )
        r.local_ratio = float(val / r.mu_star)
    cert = Certificate("pcvc", rounds, c, residual_penalties=pen, rotations=rots, alpha=TPCVC_RATIO)
    return unrotate_state(state, rots), cert


def solve_lr(inst: Instance, tie_break=None) -> tuple[ProductState, Certificate]:
    if inst.kind == "tvc":
        return lr_tvc(inst, tie_break)
    if inst.kind == "pcvc":
        return lr_tpcvc(inst, tie_break)
    raise InstanceError(f"kind/algo mismatch: local ratio does not apply to {inst.kind}")


# --- certification --------------------------------------------------------------


@dataclass
class CertReport:
    ok: bool
    alpha_effective: float
    checks: dict[str, bool]
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "alpha_effective": self.alpha_effective,
                "checks": dict(self.checks), "failures": list(self.failures)}


def certify(inst: Instance, state: ProductState, cert: Certificate,
            alpha: float | None = None, tol: float = 1e-9) -> CertReport:
    """Re-derive every claim of a local-ratio certificate.

    Checks (a) non-negative weights and remainder, (b) exact reconstruction
    of the objective, (c) per-edge ratio against ``alpha`` and (d) zero cost
    on the remainder, plus feasibility for constrained kinds.
    """
    alpha = cert.alpha if alpha is None else alpha
    failures: list[str] = []
    if cert.kind == "classical":
        canon, rots = inst, tuple(Rotation() for _ in range(inst.n))
    else:
        canon, rots = canonicalize(inst)
    s = rotate_state(state, rots)
    r = s.bloch

    # (a)
    nonneg = True
    for rd in cert.rounds:
        if not rd.w >= 0:
            nonneg = False
            failures.append(f"(a) edge {rd.edge}: negative weight w={rd.w!r}")
    for i, x in enumerate(cert.residual):
        if not x >= 0:
            nonneg = False
            failures.append(f"(a) vertex {i}: negative residual {x!r}")
    for k, x in enumerate(cert.residual_penalties or ()):
        if not x >= 0:
            nonneg = False
            failures.append(f"(a) edge {canon.edges[k]}: negative residual penalty {x!r}")

    # (b)
    recon = list(cert.residual)
    recon_pen = list(cert.residual_penalties or [0.0] * canon.m)
    index = {e: k for k, e in enumerate(canon.edges)}
    for rd in cert.rounds:
        u, v = rd.edge
        recon[u] += rd.w
        recon[v] += rd.w
        if cert.kind == "pcvc":
            recon_pen[index[(u, v)]] += rd.lam * rd.w
    exact_recon = True
    for i, t in enumerate(canon.terms):
        if abs(recon[i] - t.c) > 1e-10:
            exact_recon = False
            failures.append(f"(b) vertex {i}: reconstructed weight {recon[i]!r} != {t.c!r}")
    if cert.kind == "pcvc":
        for k, p in enumerate(canon.penalties):
            if abs(recon_pen[k] - p) > 1e-10:
                exact_recon = False
                failures.append(f"(b) edge {canon.edges[k]}: reconstructed penalty mismatch")

    # (c)
    ratios = []
    ratio_ok = True
    for rd in cert.rounds:
        u, v = rd.edge
        if cert.kind == "classical":
            val = 0.5 * (1 - r[u, 2]) + 0.5 * (1 - r[v, 2])
            mu = 1.0
        else:
            pu, pv = canon.terms[u].projector, canon.terms[v].projector
            val = _phi_expect(pu, r[u]) + _phi_expect(pv, r[v])
            if cert.kind == "pcvc":
                lam = pcvc_lambda(pu.az, pv.az)
                val += lam * 0.25 * (1 + r[u, 2]) * (1 + r[v, 2])
                mu = pcvc_edge_min(pu, pv, lam)
            else:
                mu = edge_restricted_min(pu.az, pv.az)
        ratio = val / mu if mu > 0 else (0.0 if val <= tol else math.inf)
        ratios.append(ratio)
        if ratio > alpha + RATIO_SLACK:
            ratio_ok = False
            failures.append(f"(c) edge {rd.edge}: local ratio {ratio:.9g} > {alpha:.9g}")

    # (d)
    rem = 0.0
    for i, x in enumerate(cert.residual):
        p = KET1 if cert.kind == "classical" else canon.terms[i].projector
        rem += x * _phi_expect(p, r[i])
    for k, x in enumerate(cert.residual_penalties or ()):
        u, v = canon.edges[k]
        rem += x * 0.25 * (1 + r[u, 2]) * (1 + r[v, 2])
    rem_ok = bool(abs(rem) <= tol)
    if not rem_ok:
        failures.append(f"(d) remainder cost {rem:.3g} != 0")

    feas_ok = True
    if cert.kind in ("tvc", "classical"):
        for u, v in canon.edges:
            val = 0.25 * (1 + r[u, 2]) * (1 + r[v, 2])
            if val > tol:
                feas_ok = False
                failures.append(f"feasibility: edge ({u},{v}) constraint expectation {val:.3g}")

    checks = {"nonnegative": nonneg, "reconstruction": exact_recon, "local_ratio": ratio_ok,
              "remainder_zero": rem_ok, "feasible": feas_ok}
    return CertReport(all(checks.values()), float(max(ratios, default=0.0)), checks, failures)


def approximation_ratio(inst: Instance, state: ProductState, exact: float) -> float | None:
    """``energy / exact`` when the exact value is meaningfully positive."""
    e = evaluate(inst, state)
    if exact > 1e-12:
        return e / exact
    return None


__all__ = [
    "Certificate",
    "CertReport",
    "Round",
    "TVC_RATIO",
    "TPCVC_RATIO",
    "certify",
    "edge_restricted_min",
    "feasibility",
    "lr_classical_vc",
    "lr_tpcvc",
    "lr_tvc",
    "pcvc_lambda",
    "solve_lr",
]
