"""Monotone packing constraint sets and their edge structure.

A server configuration is a tuple of per-type customer counts.  A packing
set is a finite, downward-closed family of feasible configurations; every
state transition of the system moves one customer along an "edge", the pair
of configurations (k - e_i, k).
"""

from __future__ import annotations

import itertools
from typing import Iterable, NamedTuple

import numpy as np

Config = tuple[int, ...]


class Edge(NamedTuple):
    """Arrival/departure transition (k - e_i, k) for one customer type.

    ``config`` and ``parent`` are indices into the canonical order of the
    nonzero configurations; ``parent`` is -1 when k - e_i is the empty
    configuration.  ``count`` is k_i, the multiplicity of the moving type.
    """

    config: int
    parent: int
    ctype: int
    count: int


def _as_config(raw, num_types: int) -> Config:
    k = tuple(int(v) for v in raw)
    if len(k) != num_types:
        raise ValueError(f"configuration {k} has dimension {len(k)}, expected {num_types}")
    if any(v < 0 for v in k):
        raise ValueError(f"configuration {k} has a negative entry")
    return k


def _downward_closure(configs: Iterable[Config]) -> set[Config]:
    closed: set[Config] = set()
    stack = list(configs)
    while stack:
        k = stack.pop()
        if k in closed:
            continue
        closed.add(k)
        for i, v in enumerate(k):
            if v > 0:
                stack.append(k[:i] + (v - 1,) + k[i + 1 :])
    return closed


def is_downward_closed(num_types: int, configs: Iterable[Config]) -> bool:
    """True iff the family contains every componentwise-smaller configuration."""
    have = set(configs)
    return _downward_closure(have) == have


class PackingSet:
    """Immutable monotone family of server configurations plus its edge set.

    Configurations are held in canonical (lexicographic) order so every
    vector over the nonzero configurations has a stable index layout across
    runs.  Instances are safe to share between threads.
    """

    __slots__ = (
        "num_types",
        "configs",
        "nonzero",
        "index",
        "edges",
        "edges_by_type",
        "accepting",
        "creation_edge",
        "kmat",
        "sum_counts",
        "kappa",
        "closure_added",
    )

    def __init__(self, num_types: int, closed: set[Config], closure_added: tuple[Config, ...]):
        zero = (0,) * num_types
        nonzero = tuple(sorted(k for k in closed if k != zero))
        if not nonzero:
            raise ValueError("packing set has no nonzero configuration")
        self.num_types = num_types
        self.configs = tuple(sorted(closed))
        self.nonzero = nonzero
        self.index = {k: j for j, k in enumerate(nonzero)}
        self.closure_added = closure_added

        kmat = np.array(nonzero, dtype=np.int64).reshape(len(nonzero), num_types)
        kmat.setflags(write=False)
        self.kmat = kmat
        self.sum_counts = tuple(int(sum(k)) for k in nonzero)
        self.kappa = 1 + max(self.sum_counts)

        edges = []
        for j, k in enumerate(nonzero):
            for i in range(num_types):
                if k[i] == 0:
                    continue
                below = k[:i] + (k[i] - 1,) + k[i + 1 :]
                if below not in closed:  # cannot happen for a closed family
                    raise ValueError(f"family not downward closed at {k} type {i}")
                parent = -1 if below == zero else self.index[below]
                edges.append(Edge(j, parent, i, k[i]))
        self.edges = tuple(edges)
        self.edges_by_type = tuple(
            tuple(e for e in edges if e.ctype == i) for i in range(num_types)
        )
        self.creation_edge = tuple(
            next(e for e in edges if e.ctype == i and e.parent == -1)
            for i in range(num_types)
        )
        # accepting[i]: configurations that can still fit a type-i customer,
        # paired with the edge an arrival there would traverse.
        edge_at = {(e.config, e.ctype): e for e in edges}
        accepting = []
        for i in range(num_types):
            pairs = []
            for j, k in enumerate(nonzero):
                above = k[:i] + (k[i] + 1,) + k[i + 1 :]
                if above in self.index:
                    pairs.append((j, edge_at[(self.index[above], i)]))
            accepting.append(tuple(pairs))
        self.accepting = tuple(accepting)

    def __len__(self) -> int:
        return len(self.nonzero)

    def __repr__(self) -> str:
        return (
            f"PackingSet(num_types={self.num_types}, |K|={len(self.nonzero)}, "
            f"kappa={self.kappa})"
        )

    def min_admissible_p(self) -> float:
        """Smallest power-law exponent with a proven sublinear gap: 1 - 1/(8*kappa)."""
        return 1.0 - 1.0 / (8.0 * self.kappa)

    def labels(self) -> tuple[str, ...]:
        """Per-configuration column labels, e.g. ``x_2_0`` for k=(2,0)."""
        return tuple("x_" + "_".join(str(v) for v in k) for k in self.nonzero)


def build_explicit(num_types: int, configs: Iterable[Iterable[int]]) -> PackingSet:
    """Packing set from explicitly listed configurations.

    The family is closed downward and extended with every unit vector, so
    the result is always a valid monotone set; configurations implied by
    closure (beyond the listed ones and the empty one) are reported in
    ``closure_added``.
    """
    given = {_as_config(k, num_types) for k in configs}
    if not given:
        raise ValueError("need at least one configuration")
    units = {
        tuple(1 if j == i else 0 for j in range(num_types)) for i in range(num_types)
    }
    zero = (0,) * num_types
    closed = _downward_closure(given | units | {zero})
    added = tuple(sorted(closed - given - {zero}))
    return PackingSet(num_types, closed, added)


def build_vector_packing(sizes, capacity) -> PackingSet:
    """Packing set {k >= 0 : sum_i k_i * size_i <= capacity componentwise}.

    ``sizes`` is one resource-demand vector per customer type; ``capacity``
    is the per-server resource vector.  The family is monotone by
    construction.  Every type must fit alone in a server, and every type
    must consume at least one resource (otherwise the family is infinite).
    """
    size_vecs = [np.asarray(s, dtype=float).reshape(-1) for s in sizes]
    cap = np.asarray(capacity, dtype=float).reshape(-1)
    num_types = len(size_vecs)
    if num_types == 0:
        raise ValueError("need at least one customer type")
    for i, s in enumerate(size_vecs):
        if s.shape != cap.shape:
            raise ValueError(f"size vector of type {i} has shape {s.shape}, capacity {cap.shape}")
        if np.any(s < 0) or np.any(cap < 0):
            raise ValueError("sizes and capacity must be nonnegative")
        if np.any(s > cap):
            raise ValueError(f"type {i} does not fit alone in a server")
        if not np.any(s > 0):
            raise ValueError(f"type {i} has zero size; the feasible family would be infinite")

    max_count = []
    for s in size_vecs:
        pos = s > 0
        max_count.append(int(np.min(np.floor(cap[pos] / s[pos]))))

    closed: set[Config] = set()
    for k in itertools.product(*(range(m + 1) for m in max_count)):
        load = sum(v * s for v, s in zip(k, size_vecs))
        if np.all(load <= cap + 1e-12):
            closed.add(k)
    return PackingSet(num_types, closed, ())
