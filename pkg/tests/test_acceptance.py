"""Acceptance criteria 1-9; each test prints one PASS/FAIL line."""

import math
import time

import numpy as np

from conftest import X, covering_indices, site_op
from qlr.cli import main
from qlr.core import BlochProjector, Instance, LocalTerm, assemble_local_term, evaluate, feasibility
from qlr.evc import constraint_expectations, reconstruct_state, solve_evc
from qlr.exact import ground_energy, ground_energy_full, ground_energy_tvc
from qlr.gadgets import TIMInstance, chain_edges, degree_reduction_errors, gadget_convergence, pxp_instance
from qlr.generate import make_rng, random_instance
from qlr.localratio import TPCVC_RATIO, TVC_RATIO, lr_tpcvc, lr_tvc

MINUS_X = BlochProjector(-1.0, 0.0, 0.0)
SEED = 20240611


def _params(index: int, n_max: int, n_min: int = 2):
    rng = make_rng(SEED, 500_000 + index)
    return int(rng.integers(n_min, n_max + 1)), float(rng.uniform(0.05, 0.6))


def test_c1_tvc_worst_case(acceptance_record):
    t0 = time.perf_counter()
    inst = Instance(2, [(0, 1)], [LocalTerm(1.0, MINUS_X)] * 2)
    state, _ = lr_tvc(inst)
    energy = evaluate(inst, state)
    exact = ground_energy_tvc(inst).ground
    ratio = energy / exact
    wall = time.perf_counter() - t0
    ok = (abs(energy - 1) <= 1e-6 and abs(exact - (1 - math.sqrt(2) / 2)) <= 1e-6
          and abs(ratio - (2 + math.sqrt(2))) <= 1e-6 and wall < 1.0)
    acceptance_record(1, ok, f"energy={energy:.9f} exact={exact:.9f} ratio={ratio:.9f} time={wall:.3f}s")
    assert ok


def test_c2_tvc_ratio_soundness(acceptance_record):
    t0 = time.perf_counter()
    worst, bad = 0.0, []
    for i in range(200):
        n, density = _params(i, 10)
        inst = random_instance("tvc", n, density, SEED, i)
        state, _ = lr_tvc(inst)
        exact = ground_energy_tvc(inst).ground
        energy = evaluate(inst, state)
        if not feasibility(inst, state, 1e-9):
            bad.append(f"{i}: infeasible")
        if energy > (TVC_RATIO + 1e-7) * exact + 1e-12:
            bad.append(f"{i}: ratio {energy / exact}")
        if exact > 1e-12:
            worst = max(worst, energy / exact)
    wall = time.perf_counter() - t0
    ok = not bad and wall < 60
    acceptance_record(2, ok, f"200 instances, max ratio={worst:.6f} <= {TVC_RATIO:.6f}, violations={len(bad)}, time={wall:.1f}s")
    assert ok, bad


def test_c3_classical_specialization(acceptance_record):
    worst, bad = 0.0, []
    for i in range(200):
        n, density = _params(i, 12)
        inst = random_instance("tvc", n, density, SEED, 10_000 + i, diagonal=True)
        state, _ = lr_tvc(inst)
        exact = ground_energy_tvc(inst).ground
        energy = evaluate(inst, state)
        if energy > (2 + 1e-9) * exact + 1e-12:
            bad.append(f"{i}: ratio {energy / exact}")
        worst = max(worst, energy / exact)
    ok = not bad
    acceptance_record(3, ok, f"200 diagonal instances (n<=12), max ratio={worst:.6f} <= 2")
    assert ok, bad


def test_c4_tpcvc(acceptance_record):
    inst = Instance(2, [(0, 1)], [LocalTerm(1.0, MINUS_X)] * 2, "pcvc", penalties=[4.0])
    state, _ = lr_tpcvc(inst)
    energy = evaluate(inst, state)
    lam = ground_energy_full(inst).ground
    roots = np.roots([1.0, 4.0, -1.0, -2.0])
    u = max(r.real for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1)
    ratio = energy / lam
    single_ok = (abs(energy - 1) <= 1e-9 and abs(lam - (1 - u)) <= 1e-9
                 and abs(ratio - 4.19387) <= 2e-3 and ratio <= TPCVC_RATIO)
    worst, bad = 0.0, []
    for i in range(200):
        n, density = _params(i, 10)
        r = random_instance("pcvc", n, density, SEED, 20_000 + i)
        st, _ = lr_tpcvc(r)
        ex = ground_energy(r).ground
        e = evaluate(r, st)
        if e > (TPCVC_RATIO + 1e-7) * ex + 1e-12:
            bad.append(f"{i}: ratio {e / ex}")
        worst = max(worst, e / ex)
    ok = single_ok and not bad
    acceptance_record(4, ok, f"edge ratio={ratio:.6f} (lambda_min={lam:.7f}); 200 random max ratio={worst:.6f} <= 4.194")
    assert ok, bad


def test_c5_evc_oracle_equivalence(acceptance_record):
    t0 = time.perf_counter()
    worst_e = worst_c = 0.0
    bad = []
    setups = [("1", "bipartite", "diagonal", 2), ("2", "any", "singlet", 2), ("3", "nonbipartite", "diagonal", 3)]
    for case, shape, psi, n_min in setups:
        for i in range(100):
            n, density = _params(30_000 + i, 9, n_min)
            inst = random_instance("evc", n, density, SEED, 30_000 + 1000 * int(case) + i, psi=psi, shape=shape)
            res = solve_evc(inst)
            exact = ground_energy(inst).ground
            vec = reconstruct_state(res)
            err = abs(res.energy - exact)
            viol = float(constraint_expectations(inst, vec).max(initial=0.0))
            worst_e, worst_c = max(worst_e, err), max(worst_c, viol)
            if res.case != case or err > 1e-8 or viol > 1e-8 or res.dim > n + 2:
                bad.append(f"case {case} #{i}: tag={res.case} err={err:.2e} viol={viol:.2e} dim={res.dim}")
    wall = time.perf_counter() - t0
    ok = not bad and wall < 120
    acceptance_record(5, ok, f"300 instances, max |solver-oracle|={worst_e:.2e}, max constraint={worst_c:.2e}, time={wall:.1f}s")
    assert ok, bad


def test_c6_gadget_convergence(acceptance_record):
    tim = TIMInstance(2, ((0, 1),), (1.0,), (-0.5, -0.5))
    rep = gadget_convergence(tim, [8.0, 16.0, 32.0, 64.0], k=4)
    errs = rep.errors
    mono = rep.monotone(0.05)
    ok = mono and errs[-1] <= 5e-2
    acceptance_record(6, ok, f"gap errors {', '.join(f'{e:.4f}' for e in errs)}; monotone={mono}; final <= 5e-2: {errs[-1] <= 5e-2}")
    assert ok


def test_c7_degree_reduction(acceptance_record):
    fields = [(-0.4, -0.3), (-0.3, -0.2), (-0.25, -0.1), (-0.35, -0.3), (-0.2, -0.25)]
    inst = Instance(5, [(0, k) for k in range(1, 5)], [assemble_local_term(hx, 0.0, hz) for hx, hz in fields])
    errs = degree_reduction_errors(inst, [16.0, 32.0, 64.0])
    factors = [a / b for a, b in zip(errs, errs[1:])]
    ok = all(1.5 <= f <= 3.0 for f in factors)
    acceptance_record(7, ok, f"errors {', '.join(f'{e:.4g}' for e in errs)}; shrink factors {', '.join(f'{f:.3f}' for f in factors)} (need [1.5, 3])")
    assert ok


def _pxp_dense(n, edges, w):
    P1 = np.diag([0.0, 1.0])
    H = np.zeros((1 << n, 1 << n))
    for i in range(n):
        term = site_op(X, i, n).real
        for u, v in edges:
            if i in (u, v):
                term = site_op(P1, v if u == i else u, n).real @ term
        H -= w[i] * term
    return H


def test_c8_pxp_consistency(acceptance_record):
    worst = 0.0
    for n in range(1, 9):
        w = np.linspace(0.4, 1.3, n)
        edges = chain_edges(n)
        idx = covering_indices(n, edges)
        want = np.linalg.eigvalsh(_pxp_dense(n, edges, w)[np.ix_(idx, idx)])[0]
        worst = max(worst, abs(ground_energy_tvc(pxp_instance(n, edges, w)).ground - want))
    ok = worst <= 1e-10
    acceptance_record(8, ok, f"chains n=1..8, max |E_tvc - E_pxp|={worst:.2e}")
    assert ok


def test_c9_bench_determinism(acceptance_record, tmp_path, capsys):
    outs = []
    for k in range(2):
        p = tmp_path / f"run{k}.csv"
        main(["bench", "--suite", "tvc-small", "--trials", "50", "--seed", "7", "--threads", str(1 + 3 * k), "--out", str(p)])
        outs.append(p.read_bytes())
    capsys.readouterr()
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    acceptance_record(9, ok, f"two bench runs (threads 1 vs 4) byte-identical: {ok} ({len(outs[0])} bytes)")
    assert ok
