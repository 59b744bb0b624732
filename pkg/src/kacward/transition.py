"""Kac-Ward transition matrix, determinant, and the even-subgraph partition function.

The transition matrix is the dense complex matrix on directed edges with
entry ``x_e * exp(i * angle / 2)`` wherever a non-backtracking step from one
directed edge to the next is possible.  The determinant of ``I - transition``
equals the square of the even-subgraph generating function, which is how
``partition_function_kw`` evaluates it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .graph import EmbeddedGraph, max_degree, require_valid_embedding, turning_angle

# exp(709) is the last finite double; past this the linear determinant overflows.
_LOG_OVERFLOW = 709.0


@dataclass(frozen=True)
class TransitionMatrix:
    """Dense complex transition matrix on the 2|E| directed edges."""

    size: int
    entries: np.ndarray


@dataclass(frozen=True)
class DetResult:
    """Determinant of (I - transition) in both linear and log form.

    ``det`` reproduces ``exp(log_abs_det + 1j * phase)`` whenever the linear
    value does not overflow; for very large graphs only the log form is
    meaningful.
    """

    det: complex
    log_abs_det: float
    phase: float


def build_transition_matrix(g: EmbeddedGraph) -> TransitionMatrix:
    """Assemble the directed-edge transition matrix for a validated graph."""
    require_valid_embedding(g)
    n = g.num_directed
    m = np.zeros((n, n), dtype=np.complex128)
    for d in range(n):
        w = g.directed_weight(d)
        for f in g.out_edges(g.head(d)):
            if f == (d ^ 1):
                continue
            m[d, f] = w * cmath.exp(0.5j * turning_angle(g, d, f))
    return TransitionMatrix(size=n, entries=m)


def kac_ward_determinant(g: EmbeddedGraph) -> DetResult:
    """det(I - transition), via pivoted LU in log form to avoid overflow."""
    tm = build_transition_matrix(g)
    a = np.eye(tm.size, dtype=np.complex128) - tm.entries
    sign, log_abs = np.linalg.slogdet(a)
    sign = complex(sign)
    log_abs = float(log_abs)
    if sign == 0:
        raise NumericalError("determinant is zero")
    phase = cmath.phase(sign)
    if log_abs < _LOG_OVERFLOW:
        mag = math.exp(log_abs)
    else:
        mag = math.inf
    det = complex(mag * sign.real, mag * sign.imag)
    return DetResult(det=det, log_abs_det=log_abs, phase=phase)


def partition_function_kw(g: EmbeddedGraph) -> float:
    """Even-subgraph generating function, as the square root of the determinant.

    Returns the nonnegative root.  For nonnegative weights this is the
    generating function itself (every monomial is nonnegative and the empty
    subgraph contributes 1); for mixed-sign weights it is its absolute value.
    """
    r = kac_ward_determinant(g)
    if not math.isfinite(abs(r.det)):
        # Linear value overflowed: fall back to a phase test.
        if abs(math.sin(r.phase)) > 1e-9 or math.cos(r.phase) <= 0:
            raise NumericalError(
                f"determinant not real-nonnegative (phase {r.phase:.3e})"
            )
        half = 0.5 * r.log_abs_det
        return math.exp(half) if half < _LOG_OVERFLOW else math.inf
    tol = 1e-9 * max(1.0, abs(r.det))
    if abs(r.det.imag) > tol or r.det.real < -tol:
        raise NumericalError(
            f"determinant not real-nonnegative (det = {r.det!r}); "
            "invalid embedding or numerical failure"
        )
    return math.sqrt(max(r.det.real, 0.0))


def check_convergence_radius(g: EmbeddedGraph) -> bool:
    """True iff max |weight| < 1 / (max_degree - 1); trivially true for degree <= 1."""
    delta = max_degree(g)
    if delta <= 1:
        return True
    top = max((abs(e.weight) for e in g.edges), default=0.0)
    return top < 1.0 / (delta - 1)
