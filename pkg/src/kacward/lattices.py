"""Lattice patch generators and the high-temperature Ising conversion.

Both generators use exact integer coordinates and free (open) boundaries;
periodic boundaries would break the straight-line embedding hypothesis.
The Ising conversion maps couplings to tanh weights and tracks the
prefactor in log space so large lattices stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .graph import EmbeddedGraph
from .transition import kac_ward_determinant, partition_function_kw

_LOG_OVERFLOW = 709.0


@dataclass(frozen=True)
class IsingInstance:
    """An Ising model on an embedded graph; the graph's weight field is ignored."""

    graph: EmbeddedGraph
    beta: float
    couplings: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "couplings", tuple(float(j) for j in self.couplings))
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")
        if len(self.couplings) != self.graph.num_edges:
            raise ValueError(
                f"expected {self.graph.num_edges} couplings, got {len(self.couplings)}"
            )
        if not all(math.isfinite(j) for j in self.couplings):
            raise ValueError("couplings must be finite")


def uniform_ising(g: EmbeddedGraph, beta: float, coupling: float = 1.0) -> IsingInstance:
    return IsingInstance(graph=g, beta=beta, couplings=(coupling,) * g.num_edges)


def gen_square(width: int, height: int, weight: float) -> EmbeddedGraph:
    """width x height grid of unit squares, free boundary, uniform weight."""
    if width < 1 or height < 1:
        raise ValueError("lattice dimensions must be positive")
    cols = width + 1

    def vid(i: int, j: int) -> int:
        return j * cols + i

    vertices = [(float(i), float(j)) for j in range(height + 1) for i in range(cols)]
    edges = []
    for j in range(height + 1):
        for i in range(width):
            edges.append((vid(i, j), vid(i + 1, j), weight))
    for j in range(height):
        for i in range(cols):
            edges.append((vid(i, j), vid(i, j + 1), weight))
    return EmbeddedGraph(vertices, edges)


def gen_hex(rows: int, cols: int, weight: float) -> EmbeddedGraph:
    """Honeycomb patch drawn as a brick wall (rows x cols bricks), free boundary.

    Each brick is a 2 x 1 rectangle with mid-top and mid-bottom vertices;
    alternate rows shift by one unit, so every vertex has degree at most 3
    and all coordinates are exact small integers.
    """
    if rows < 1 or cols < 1:
        raise ValueError("lattice dimensions must be positive")
    vertex_set = set()
    edge_set = set()

    def add_edge(a, b):
        vertex_set.add(a)
        vertex_set.add(b)
        edge_set.add((min(a, b), max(a, b)))

    for r in range(rows):
        off = r % 2
        for c in range(cols):
            x0 = off + 2 * c
            y0, y1 = r, r + 1
            add_edge((x0, y0), (x0 + 1, y0))
            add_edge((x0 + 1, y0), (x0 + 2, y0))
            add_edge((x0, y1), (x0 + 1, y1))
            add_edge((x0 + 1, y1), (x0 + 2, y1))
            add_edge((x0, y0), (x0, y1))
            add_edge((x0 + 2, y0), (x0 + 2, y1))

    coords = sorted(vertex_set, key=lambda p: (p[1], p[0]))
    index = {p: i for i, p in enumerate(coords)}
    edges = sorted(
        (min(index[a], index[b]), max(index[a], index[b])) for a, b in edge_set
    )
    return EmbeddedGraph(
        [(float(x), float(y)) for x, y in coords],
        [(u, v, weight) for u, v in edges],
    )


class HighTemperatureWeights(NamedTuple):
    graph: EmbeddedGraph
    prefactor: float
    log_prefactor: float


def _log_cosh(y: float) -> float:
    # log(cosh(y)) without overflow for large |y|.
    return float(np.logaddexp(y, -y)) - math.log(2.0)


def ising_to_even_weights(inst: IsingInstance) -> HighTemperatureWeights:
    """High-temperature expansion: weights tanh(beta*J), prefactor 2^|V| prod cosh(beta*J).

    The Ising partition function equals prefactor times the even-subgraph
    generating function at the returned weights, all of which lie in (-1, 1).
    """
    g = inst.graph
    # tanh saturates to +-1.0 in floats around |arg| ~ 19; the conversion
    # contract wants the open interval, so step one ulp inward.
    one_minus = math.nextafter(1.0, 0.0)
    weights = [
        max(-one_minus, min(one_minus, math.tanh(inst.beta * j)))
        for j in inst.couplings
    ]
    log_prefactor = g.num_vertices * math.log(2.0) + sum(
        _log_cosh(inst.beta * j) for j in inst.couplings
    )
    prefactor = math.exp(log_prefactor) if log_prefactor < _LOG_OVERFLOW else math.inf
    return HighTemperatureWeights(
        graph=g.with_weights(weights),
        prefactor=prefactor,
        log_prefactor=log_prefactor,
    )


def ising_partition_kw(inst: IsingInstance) -> tuple[float, float]:
    """(Z_ising, log Z_ising) via the determinant route.

    The log value is assembled entirely in log space and stays finite even
    when the linear value overflows.
    """
    conv = ising_to_even_weights(inst)
    det = kac_ward_determinant(conv.graph)
    z_even = partition_function_kw(conv.graph)
    log_z = conv.log_prefactor + 0.5 * det.log_abs_det
    return conv.prefactor * z_even, log_z
