"""Seeded random instances.

Every instance is drawn from its own PCG64 stream, obtained by spawning
``SeedSequence(seed)`` at the instance index, so the output depends only on
``(seed, index, parameters)`` and not on how many instances were drawn
before it or on which thread drew it.
"""

from __future__ import annotations

import math

import numpy as np

from .core import KET1, BlochProjector, Instance, InstanceError, LocalTerm, diagonal_psi, singlet_psi

PRNG_NAME = f"numpy.random.PCG64 via SeedSequence(seed, spawn_key=(index,)), numpy {np.__version__}"
PSI_FORMS = ("singlet", "bell", "diagonal", "random")
GRAPH_SHAPES = ("any", "bipartite", "nonbipartite")


def make_rng(seed: int, index: int = 0) -> np.random.Generator:
    if seed < 0 or seed >= 1 << 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _uniform_open_closed(rng: np.random.Generator, size=None, high: float = 1.0):
    # rng.random() lies in [0, 1); 1 - u lies in (0, 1]
    return high * (1.0 - rng.random(size))


def random_connected_graph(rng: np.random.Generator, n: int, density: float,
                           shape: str = "any") -> list[tuple[int, int]]:
    """Random spanning tree plus a ``density`` fraction of the remaining pairs.

    ``shape="bipartite"`` keeps every edge across a random 2-colouring;
    ``shape="nonbipartite"`` adds one edge inside a colour class if the
    draw happens to be bipartite (needs ``n >= 3``).
    """
    if not 0 < density <= 1:
        raise ValueError(f"density must lie in (0, 1], got {density!r}")
    if shape not in GRAPH_SHAPES:
        raise ValueError(f"unknown graph shape {shape!r}")
    if shape == "nonbipartite" and n < 3:
        raise ValueError("a non-bipartite graph needs n >= 3")
    if n <= 1:
        return []
    order = rng.permutation(n)
    colour = np.zeros(n, dtype=int)
    if shape == "bipartite":
        colour[order[1:]] = rng.integers(0, 2, n - 1)
        colour[order[1]] = 1
    edges = set()
    for k in range(1, n):
        v = int(order[k])
        earlier = order[:k]
        if shape == "bipartite":
            earlier = earlier[colour[earlier] != colour[v]]
        u = int(rng.choice(earlier))
        edges.add((min(u, v), max(u, v)))
    rest = [(u, v) for u in range(n) for v in range(u + 1, n)
            if (u, v) not in edges and (shape != "bipartite" or colour[u] != colour[v])]
    extra = int(round(density * len(rest)))
    if extra:
        for k in rng.choice(len(rest), size=extra, replace=False):
            edges.add(rest[int(k)])
    col = _two_colouring(n, edges) if shape == "nonbipartite" else None
    if col is not None:
        same = [(u, v) for u in range(n) for v in range(u + 1, n) if col[u] == col[v]]
        edges.add(same[int(rng.integers(len(same)))])
    return sorted(edges)


def _two_colouring(n: int, edges) -> list[int] | None:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    col = [-1] * n
    for s in range(n):
        if col[s] >= 0:
            continue
        col[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if col[v] < 0:
                    col[v] = 1 - col[u]
                    stack.append(v)
                elif col[v] == col[u]:
                    return None
    return col


def stoquastic_projector(rng: np.random.Generator) -> BlochProjector:
    """Uniform angle on the quarter circle ``ay = 0``, ``ax <= 0``, ``az <= 0``."""
    theta = rng.uniform(0.0, 0.5 * math.pi)
    return BlochProjector(-math.sin(theta), 0.0, -math.cos(theta))


def sphere_projector(rng: np.random.Generator) -> BlochProjector:
    v = rng.normal(size=3)
    return BlochProjector.from_vector(v / np.linalg.norm(v))


def random_psi(rng: np.random.Generator, form: str) -> np.ndarray:
    if form == "singlet":
        return singlet_psi()
    if form == "bell":
        return diagonal_psi(1.0, 1.0)
    if form == "diagonal":
        theta = rng.uniform(0.05, 0.5 * math.pi - 0.05)
        return diagonal_psi(math.cos(theta), math.sin(theta))
    if form == "random":
        # symmetric two-qubit state: random symmetric 2x2 amplitude matrix
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        psi = np.array([z[0], z[1], z[1], z[2]])
        return psi / np.linalg.norm(psi)
    raise InstanceError(f"unknown psi form {form!r}")


def random_instance(kind: str, n: int, density: float, seed: int, index: int = 0,
                    psi: str | None = None, shape: str = "any", diagonal: bool = False) -> Instance:
    """Deterministic random instance of the given kind.

    Weights ``c_i ~ U(0, 1]``; tvc/pcvc projectors lie on the stoquastic
    quarter circle (or are ``|1><1|`` with ``diagonal=True``); pcvc
    penalties ``~ U(0, 2]``; evc projectors are uniform on the sphere.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = make_rng(seed, index)
    edges = random_connected_graph(rng, n, density, shape)
    c = _uniform_open_closed(rng, n)
    if kind in ("tvc", "pcvc"):
        projs = [KET1 if diagonal else stoquastic_projector(rng) for _ in range(n)]
    elif kind == "evc":
        projs = [KET1 if diagonal else sphere_projector(rng) for _ in range(n)]
    else:
        raise InstanceError(f"unknown kind {kind!r}")
    terms = [LocalTerm(float(ci), p) for ci, p in zip(c, projs)]
    if kind == "pcvc":
        pens = _uniform_open_closed(rng, len(edges), 2.0)
        return Instance(n, edges, terms, "pcvc", penalties=[float(p) for p in pens])
    if kind == "evc":
        return Instance(n, edges, terms, "evc", psi=random_psi(rng, psi or "bell"))
    return Instance(n, edges, terms, "tvc")
