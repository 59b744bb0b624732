"""Non-backtracking walk and loop calculus on directed edges.

A walk of length n is a sequence of n+1 directed edge ids where each entry
continues from the head of the previous one and never immediately reverses
it.  A loop is a walk of length at least 2 whose first and last entries
coincide; loops are *rooted* objects, so a cyclic shift is a different loop.

Weights: every walk carries the product of transition-matrix entries along
its steps, which factors as ``exp(i * turning_sum / 2) * edge_product`` with
``turning_sum`` the accumulated signed turning angle and ``edge_product``
the product of traversed edge weights.  The final entry of the sequence is
not traversed, so its weight and no further angle enter the product.

"Visits" of an edge are counted over the first n entries only, matching the
weight convention.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph import EmbeddedGraph, max_degree, turning_angle
from .transition import build_transition_matrix, check_convergence_radius

MAX_LOOP_LEN_CAP = 16


@dataclass(frozen=True, eq=False)
class Walk:
    """Non-backtracking sequence of directed edges; ``steps`` has length n+1."""

    steps: tuple[int, ...]

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise ValueError("a walk needs at least one directed edge")
        for a, b in zip(steps, steps[1:]):
            if b == (a ^ 1):
                raise ValueError(f"backtracking step {a} -> {b}")

    @property
    def length(self) -> int:
        return len(self.steps) - 1

    @property
    def first(self) -> int:
        return self.steps[0]

    @property
    def last(self) -> int:
        return self.steps[-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Walk):
            return NotImplemented
        return self.steps == other.steps

    def __hash__(self) -> int:
        return hash(self.steps)

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.steps!r}"


@dataclass(frozen=True, eq=False, repr=False)
class Loop(Walk):
    """A walk of length >= 2 that starts and ends with the same directed edge."""

    def __post_init__(self):
        super().__post_init__()
        if self.steps[0] != self.steps[-1]:
            raise ValueError("a loop must end with its first directed edge")
        if self.length < 2:
            raise ValueError("a loop must have length at least 2")


@dataclass(frozen=True)
class WalkWeight:
    """Weight data of a walk: complex value, turning-angle sum, edge-weight product."""

    value: complex
    turning_sum: float
    edge_product: float


@dataclass(frozen=True)
class LoopStats:
    """Block multiplicity and per-directed-edge visit counts of a loop."""

    multiplicity: int
    visits: dict[int, int]


def _check_in_graph(g: EmbeddedGraph, w: Walk) -> None:
    n2 = g.num_directed
    for s in w.steps:
        if not 0 <= s < n2:
            raise ValueError(f"directed edge id {s} out of range [0, {n2})")
    for a, b in zip(w.steps, w.steps[1:]):
        if g.tail(b) != g.head(a):
            raise ValueError(f"steps {a} -> {b} are not consecutive")


def walk_weight(g: EmbeddedGraph, w: Walk) -> WalkWeight:
    """Evaluate the walk weight; the empty walk (length 0) weighs (1, 0, 1)."""
    _check_in_graph(g, w)
    turning = 0.0
    product = 1.0
    for a, b in zip(w.steps, w.steps[1:]):
        turning += turning_angle(g, a, b)
        product *= g.directed_weight(a)
    return WalkWeight(
        value=cmath.exp(0.5j * turning) * product,
        turning_sum=turning,
        edge_product=product,
    )


def _promote(steps: tuple[int, ...]) -> Walk:
    if len(steps) >= 3 and steps[0] == steps[-1]:
        return Loop(steps)
    return Walk(steps)


def concat(w1: Walk, w2: Walk) -> Walk:
    """Join two walks overlapping on one directed edge (last of w1 = first of w2)."""
    if w1.last != w2.first:
        raise ValueError(
            f"cannot concatenate: walk ends at {w1.last}, next starts at {w2.first}"
        )
    return _promote(w1.steps + w2.steps[1:])


def reverse_walk(w: Walk) -> Walk:
    """Traverse the walk backwards along reversed directed edges."""
    return _promote(tuple((s ^ 1) for s in reversed(w.steps)))


def is_self_avoiding(g: EmbeddedGraph, l: Loop) -> bool:
    """True iff every vertex of the loop appears in exactly two traversed edges."""
    counts: dict[int, int] = {}
    for s in l.steps[:-1]:
        for v in (g.tail(s), g.head(s)):
            counts[v] = counts.get(v, 0) + 1
    return all(c == 2 for c in counts.values())


def multiplicity(l: Loop) -> int:
    """Largest m such that the traversed sequence is m identical blocks."""
    body = l.steps[:-1]
    n = len(body)
    for m in range(n, 0, -1):
        if n % m:
            continue
        block = n // m
        if all(body[i] == body[i % block] for i in range(n)):
            return m
    return 1


def loop_stats(l: Loop) -> LoopStats:
    visits: dict[int, int] = {}
    for s in l.steps[:-1]:
        visits[s] = visits.get(s, 0) + 1
    return LoopStats(multiplicity=multiplicity(l), visits=visits)


def _check_len_cap(max_len: int) -> None:
    if max_len > MAX_LOOP_LEN_CAP:
        raise ValueError(
            f"enumeration length {max_len} exceeds cap {MAX_LOOP_LEN_CAP}"
        )


def enumerate_walks(
    g: EmbeddedGraph, max_len: int, start: int | None = None
) -> list[Walk]:
    """All walks of length 0..max_len, from one start edge or from every edge.

    Deterministic: starts ascend, and continuations are explored in ascending
    directed-edge id order, so the output is in lexicographic step order.
    """
    _check_len_cap(max_len)
    if start is not None and not 0 <= start < g.num_directed:
        raise ValueError(f"start edge {start} out of range")
    roots = range(g.num_directed) if start is None else (start,)
    out: list[Walk] = []

    def extend(seq: list[int]) -> None:
        out.append(Walk(tuple(seq)))
        if len(seq) > max_len:
            return
        last = seq[-1]
        for f in g.out_edges(g.head(last)):
            if f == (last ^ 1):
                continue
            seq.append(f)
            extend(seq)
            seq.pop()

    for r in roots:
        extend([r])
    return out


def _collect_rooted_loops(g: EmbeddedGraph, max_len: int, root: int) -> list[Loop]:
    found: list[Loop] = []

    def extend(seq: list[int]) -> None:
        last = seq[-1]
        for f in g.out_edges(g.head(last)):
            if f == (last ^ 1):
                continue
            if f == root and len(seq) >= 2:
                found.append(Loop(tuple(seq) + (root,)))
            if len(seq) < max_len:
                seq.append(f)
                extend(seq)
                seq.pop()

    extend([root])
    return found


@lru_cache(maxsize=64)
def _all_rooted_loops(g: EmbeddedGraph, max_len: int) -> tuple[Loop, ...]:
    loops: list[Loop] = []
    for root in range(g.num_directed):
        loops.extend(_collect_rooted_loops(g, max_len, root))
    return tuple(loops)


def enumerate_rooted_loops(
    g: EmbeddedGraph, max_len: int, root: int | None = None
) -> list[Loop]:
    """All loops of length 2..max_len rooted at ``root`` (or at every edge).

    A loop and its cyclic shifts are distinct objects with distinct roots;
    each step sequence appears exactly once.  Deterministic lexicographic
    order per root, roots ascending.
    """
    _check_len_cap(max_len)
    if root is None:
        return list(_all_rooted_loops(g, max_len))
    if not 0 <= root < g.num_directed:
        raise ValueError(f"root edge {root} out of range")
    return _collect_rooted_loops(g, max_len, root)


def truncated_loop_sum(g: EmbeddedGraph, max_n: int) -> complex:
    """Sum of trace(transition^n) / n for n = 1..max_n.

    Within the convergence radius this is a truncation of the negated
    log-determinant of (I - transition), and term by term it equals the
    weight sum of all rooted loops of each length.
    """
    if not check_convergence_radius(g):
        raise ValueError(
            "weights outside the convergence radius max|x| < 1/(max_degree - 1)"
        )
    m = build_transition_matrix(g).entries
    total = 0.0 + 0.0j
    power = np.eye(m.shape[0], dtype=np.complex128)
    for n in range(1, max_n + 1):
        power = power @ m
        total += complex(np.trace(power)) / n
    return total


def _visits_both(steps: tuple[int, ...], e: int) -> bool:
    body = steps[:-1]
    return e in body and (e ^ 1) in body


def specific_cancellation_involution(g: EmbeddedGraph, l: Loop, e: int) -> Loop:
    """The weight-negating pairing on loops that visit both ``e`` and its reversal.

    Locates the first traversal of ``e`` or its reversal and the last
    traversal of the opposite direction, and reverses the stretch between
    them.  The result has the same length, root, and edge-weight product,
    and its complex weight is exactly negated; applying the map twice gives
    back the original loop.
    """
    _check_in_graph(g, l)
    body = l.steps[:-1]
    if not _visits_both(l.steps, e):
        raise ValueError(
            f"loop does not visit both directed edge {e} and its reversal"
        )
    lo = next(i for i, s in enumerate(body) if s == e or s == (e ^ 1))
    target = body[lo] ^ 1
    hi = max(i for i, s in enumerate(body) if s == target)
    mid = tuple((s ^ 1) for s in reversed(l.steps[lo : hi + 1]))
    result = l.steps[: lo + 1] + mid[1:] + l.steps[hi + 1 :]
    try:
        out = Loop(result)
        _check_in_graph(g, out)
    except ValueError as exc:  # pragma: no cover - internal consistency guard
        raise RuntimeError(f"involution produced an invalid loop: {exc}") from exc
    return out


def decompose_at_root(l: Loop, e: int) -> list[Loop]:
    """Split a loop rooted at ``e`` into its single-visit factors.

    Requires the loop to start at ``e``, never traverse the reversal of
    ``e``, and traverse ``e`` some k >= 1 times; returns the k loops that
    each traverse ``e`` exactly once and concatenate back to the original.
    """
    body = l.steps[:-1]
    if l.first != e:
        raise ValueError(f"loop is rooted at {l.first}, not at {e}")
    if (e ^ 1) in body:
        raise ValueError(f"loop visits the reversal of {e}")
    positions = [i for i, s in enumerate(body) if s == e]
    cuts = positions + [len(l.steps) - 1]
    return [
        Loop(l.steps[cuts[j] : cuts[j + 1] + 1]) for j in range(len(positions))
    ]


@dataclass(frozen=True)
class GenericCancellationReport:
    """Two truncated sides of the single-visit factorization identity."""

    lhs: complex
    rhs: complex
    gap: float
    bound: float


def verify_generic_cancellation(
    g: EmbeddedGraph, e: int, max_n: int
) -> GenericCancellationReport:
    """Compare exp(-weight sum over loops through ``e`` avoiding its reversal)
    against 1 minus the weight of single-visit loops rooted at ``e``.

    Both sides are truncated at loop length ``max_n``; the report carries the
    truncation bound C * rho^(max_n+1) / (1 - rho) with rho the branching
    contraction (max_degree - 1) * max|x| and C = 2|E| * max(1, max|x|),
    a deliberately crude rooted-loop count.
    """
    _check_len_cap(max_n)
    if not 0 <= e < g.num_directed:
        raise ValueError(f"directed edge {e} out of range")
    delta = max_degree(g)
    top = max((abs(edge.weight) for edge in g.edges), default=0.0)
    rho = max(delta - 1, 0) * top
    if rho >= 1.0:
        raise ValueError(
            f"outside convergence radius: (max_degree - 1) * max|x| = {rho:.3g} >= 1"
        )
    loops = _all_rooted_loops(g, max_n)
    rev = e ^ 1
    wsum = 0.0 + 0.0j
    single = 0.0 + 0.0j
    for l in loops:
        body = l.steps[:-1]
        if rev in body or e not in body:
            continue
        lam = walk_weight(g, l).value
        wsum += lam / l.length
        if l.first == e and body.count(e) == 1:
            single += lam
    lhs = cmath.exp(-wsum)
    rhs = 1.0 - single
    c = 2 * g.num_edges * max(1.0, top)
    bound = c * rho ** (max_n + 1) / (1.0 - rho) if rho > 0 else 0.0
    return GenericCancellationReport(
        lhs=lhs, rhs=rhs, gap=abs(lhs - rhs), bound=bound
    )
