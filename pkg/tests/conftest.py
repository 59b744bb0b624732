"""Shared fixtures: small named graphs and the random planar corpus."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.spatial import Delaunay, QhullError

from kacward import EmbeddedGraph, validate_embedding

CORPUS_SIZE = 200
CORPUS_MAX_EDGES = 20
CORPUS_SEED = 20240913


def make_triangle(weight=0.5, weights=None):
    ws = weights if weights is not None else [weight] * 3
    return EmbeddedGraph(
        [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
        [(0, 1, ws[0]), (1, 2, ws[1]), (2, 0, ws[2])],
    )


def make_path3(weight=0.5):
    # 3-vertex path with a right-angle bend.
    return EmbeddedGraph(
        [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)],
        [(0, 1, weight), (1, 2, weight)],
    )


def make_single_edge(weight=0.7):
    return EmbeddedGraph([(0.0, 0.0), (1.0, 0.0)], [(0, 1, weight)])


def make_square_cycle(weight=0.5):
    return EmbeddedGraph(
        [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        [(0, 1, weight), (1, 2, weight), (2, 3, weight), (3, 0, weight)],
    )


def make_bowtie(weight=0.5, weights=None):
    ws = weights if weights is not None else [weight] * 6
    return EmbeddedGraph(
        [(0.0, 0.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, 1.0), (1.0, -1.0)],
        [
            (0, 1, ws[0]),
            (0, 2, ws[1]),
            (1, 2, ws[2]),
            (0, 3, ws[3]),
            (0, 4, ws[4]),
            (3, 4, ws[5]),
        ],
    )


def make_wheel(spokes=6, weight=0.5):
    # Hub at the origin, rim on the unit circle; hub degree = spokes.
    import math

    vertices = [(0.0, 0.0)]
    for k in range(spokes):
        a = 2 * math.pi * k / spokes
        vertices.append((math.cos(a), math.sin(a)))
    edges = [(0, k + 1, weight) for k in range(spokes)]
    edges += [(k + 1, (k + 1) % spokes + 1, weight) for k in range(spokes)]
    return EmbeddedGraph(vertices, edges)


def disjoint_union(g1: EmbeddedGraph, g2: EmbeddedGraph, gap=10.0):
    """Place g2 to the right of g1 with clearance, renumbering its vertices."""
    max_x = max((p.x for p in g1.vertices), default=0.0)
    min_x = min((p.x for p in g2.vertices), default=0.0)
    shift = max_x - min_x + gap
    vertices = [(p.x, p.y) for p in g1.vertices]
    vertices += [(p.x + shift, p.y) for p in g2.vertices]
    off = g1.num_vertices
    edges = [(e.u, e.v, e.weight) for e in g1.edges]
    edges += [(e.u + off, e.v + off, e.weight) for e in g2.edges]
    return EmbeddedGraph(vertices, edges)


def random_planar_graph(rng: np.random.Generator, max_edges=CORPUS_MAX_EDGES):
    """Random points -> Delaunay triangulation -> random edge deletion."""
    while True:
        n = int(rng.integers(4, 11))
        pts = rng.uniform(0.0, 10.0, size=(n, 2))
        try:
            tri = Delaunay(pts)
        except QhullError:
            continue
        edge_set = set()
        for simplex in tri.simplices:
            for a, b in ((0, 1), (1, 2), (2, 0)):
                u, v = int(simplex[a]), int(simplex[b])
                edge_set.add((min(u, v), max(u, v)))
        edges = sorted(edge_set)
        keep = [e for e in edges if rng.random() > 0.2]
        if len(keep) < 3:
            keep = edges[:3]
        while len(keep) > max_edges:
            keep.pop(int(rng.integers(len(keep))))
        weights = rng.uniform(0.0, 1.0, size=len(keep))
        g = EmbeddedGraph(
            [(float(x), float(y)) for x, y in pts],
            [(u, v, float(w)) for (u, v), w in zip(keep, weights)],
        )
        if validate_embedding(g).ok:
            return g


@pytest.fixture(scope="session")
def corpus():
    rng = np.random.default_rng(CORPUS_SEED)
    return [random_planar_graph(rng) for _ in range(CORPUS_SIZE)]


@pytest.fixture
def triangle():
    return make_triangle()


@pytest.fixture
def bowtie():
    return make_bowtie()


@pytest.fixture
def square_cycle():
    return make_square_cycle()
