"""Orientability of the bipartite leaf pseudograph.

A leaf with n keys induces a graph with n edges over n node labels:
edge k runs between ``endpoint0[k]`` (in [0, ceil(n/2))) and
``endpoint1[k]`` (in [n - ceil(n/2), n)); for odd n the two ranges share
the middle label.  The leaf is usable iff the graph can be oriented so
that every node receives exactly one edge, which holds iff every
connected component has as many edges as nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class LeafGraph:
    n: int
    endpoint0: np.ndarray  # uint8, values in [0, ceil(n/2))
    endpoint1: np.ndarray  # uint8, values in [n - ceil(n/2), n)

    def __post_init__(self):
        half = (self.n + 1) // 2
        e0 = np.asarray(self.endpoint0, dtype=np.uint8)
        e1 = np.asarray(self.endpoint1, dtype=np.uint8)
        if e0.shape != (self.n,) or e1.shape != (self.n,):
            raise ValueError("endpoint arrays must have length n")
        if self.n and (e0.max(initial=0) >= half or e1.min(initial=self.n) < self.n - half):
            raise ValueError("endpoint out of partition range")
        object.__setattr__(self, "endpoint0", e0)
        object.__setattr__(self, "endpoint1", e1)


@dataclass(frozen=True)
class OrientationBits:
    """Per-key choice bit: 0 = endpoint0, 1 = endpoint1."""

    f: np.ndarray  # uint8


def _scratch(n: int):
    return (
        np.empty(n, np.int64),
        np.empty(n, np.int64),
        np.empty(n, np.int64),
    )


def is_orientable(g: LeafGraph) -> bool:
    """Linear-time union-find check for indegree-1 orientability."""
    n = g.n
    if n == 0:
        return True
    half = (n + 1) // 2
    # endpoint1 is shifted back to half-range for the kernel
    oldv = (g.endpoint1 - np.uint8(n - half)).astype(np.uint8)
    parent, csize, cedges = _scratch(n)
    return bool(_kernels._orientable(
        g.endpoint0, oldv, n, n - half, parent, csize, cedges))


def orient(g: LeafGraph) -> OrientationBits:
    """Return assignment bits making key -> chosen endpoint a bijection.

    Deterministic: forced degree-1 assignments first, then each cycle is
    walked from its smallest node.  Raises ValueError on non-orientable
    input.
    """
    n = g.n
    if n == 0:
        return OrientationBits(f=np.zeros(0, np.uint8))
    if not is_orientable(g):
        raise ValueError("graph is not orientable")
    half = (n + 1) // 2
    oldv = (g.endpoint1 - np.uint8(n - half)).astype(np.uint8)
    f = np.zeros(n, np.uint8)
    deg = np.empty(n, np.int64)
    exor = np.empty(n, np.int64)
    adj_off = np.empty(n + 1, np.int64)
    adj_edge = np.empty(2 * n, np.int64)
    used = np.empty(n, np.bool_)
    stack = np.empty(n, np.int64)
    _kernels._orient(g.endpoint0, oldv, n, n - half, deg, exor, adj_off,
                     adj_edge, used, stack, f)
    # cheap direct verification: the induced map must be a bijection
    pos = np.where(f == 0, g.endpoint0, g.endpoint1)
    if len(set(pos.tolist())) != n:
        raise AssertionError("orientation failed bijectivity verification")
    return OrientationBits(f=f)
