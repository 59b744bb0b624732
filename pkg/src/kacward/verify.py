"""Machine checks of the identities behind the determinant method, desk scale.

Each check returns a pass/fail verdict plus a short deterministic detail
string; the first counterexample (edge, length, values) is reported on
failure.  The CLI turns these into a table and a nonzero exit code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decoration import decorate
from .graph import EmbeddedGraph, max_degree
from .loops import (
    concat,
    enumerate_rooted_loops,
    enumerate_walks,
    is_self_avoiding,
    reverse_walk,
    verify_generic_cancellation,
    walk_weight,
)
from .oracle import partition_function_oracle
from .transition import build_transition_matrix


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool | None  # None means skipped
    detail: str

    @property
    def status(self) -> str:
        if self.passed is None:
            return "skip"
        return "pass" if self.passed else "FAIL"


def _fmt(x: float) -> str:
    return format(x, ".3e")


def _check_kw_vs_oracle(g: EmbeddedGraph, corrupt: bool) -> CheckResult:
    tm = build_transition_matrix(g).entries
    if corrupt and tm.size:
        nz = np.nonzero(tm)
        if len(nz[0]):
            tm = tm.copy()
            tm[nz[0][0], nz[1][0]] *= 1.01  # deliberate fault for testing
    det = complex(np.linalg.det(np.eye(tm.shape[0], dtype=complex) - tm))
    z = partition_function_oracle(g)
    diff = abs(det - z * z)
    tol = 1e-9 * max(1.0, z * z)
    return CheckResult(
        "kw-vs-oracle",
        diff <= tol,
        f"|det - Z^2| = {_fmt(diff)} (tol {_fmt(tol)})",
    )


def _check_weight_properties(g: EmbeddedGraph, max_len: int) -> CheckResult:
    name = "weight-properties"
    walks = enumerate_walks(g, max(max_len // 2, 1))
    weight_of = {w.steps: walk_weight(g, w).value for w in walks}
    by_first: dict[int, list] = {}
    for w in walks:
        by_first.setdefault(w.first, []).append(w)

    # Multiplicativity over composable enumerated pairs (tolerance is
    # relative with floor 1 so heavy weights do not trip rounding).
    for w1 in walks:
        for w2 in by_first.get(w1.last, ()):
            joined = concat(w1, w2)
            got = walk_weight(g, joined).value
            expect = weight_of[w1.steps] * weight_of[w2.steps]
            if abs(got - expect) > 1e-12 * max(1.0, abs(expect)):
                return CheckResult(
                    name,
                    False,
                    f"multiplicativity fails for {w1.steps}+{w2.steps}: "
                    f"|diff| = {_fmt(abs(got - expect))}",
                )

    # Walks from an edge to its reversal are purely imaginary and
    # reversal-antisymmetric.
    deep_walks = enumerate_walks(g, max_len)
    for w in deep_walks:
        if w.last != (w.first ^ 1):
            continue
        lam = walk_weight(g, w).value
        lam_rev = walk_weight(g, reverse_walk(w)).value
        tol = 1e-12 * max(1.0, abs(lam))
        if abs(lam.real) > tol or abs(lam + lam_rev) > tol:
            return CheckResult(
                name,
                False,
                f"reversal-pair walk {w.steps}: re = {_fmt(abs(lam.real))}, "
                f"|lam + lam_rev| = {_fmt(abs(lam + lam_rev))}",
            )

    # Loops are real and reversal-symmetric; self-avoiding loops weigh
    # minus their edge product.
    for l in enumerate_rooted_loops(g, max_len):
        ww = walk_weight(g, l)
        lam_rev = walk_weight(g, reverse_walk(l)).value
        tol = 1e-12 * max(1.0, abs(ww.value))
        if abs(ww.value.imag) > tol or abs(ww.value - lam_rev) > tol:
            return CheckResult(
                name,
                False,
                f"loop {l.steps}: im = {_fmt(abs(ww.value.imag))}, "
                f"|lam - lam_rev| = {_fmt(abs(ww.value - lam_rev))}",
            )
        if is_self_avoiding(g, l) and abs(ww.value + ww.edge_product) > tol:
            return CheckResult(
                name,
                False,
                f"self-avoiding loop {l.steps}: "
                f"|lam + x| = {_fmt(abs(ww.value + ww.edge_product))}",
            )
    return CheckResult(name, True, f"walk/loop lengths up to {max_len}")


def _check_specific_cancellation(g: EmbeddedGraph, max_len: int) -> CheckResult:
    name = "specific-cancellation"
    loops = enumerate_rooted_loops(g, max_len)
    sums: dict[tuple[int, int], complex] = {}
    mags: dict[tuple[int, int], float] = {}
    for l in loops:
        body = set(l.steps[:-1])
        lam = walk_weight(g, l).value
        for k in {s >> 1 for s in body}:
            if 2 * k in body and 2 * k + 1 in body:
                for e in (2 * k, 2 * k + 1):
                    key = (e, l.length)
                    sums[key] = sums.get(key, 0.0) + lam
                    mags[key] = mags.get(key, 0.0) + abs(lam)
    worst_key = None
    worst_ratio = 0.0
    for key, total in sums.items():
        tol = 1e-12 * max(mags[key], 1.0)
        ratio = abs(total) / tol
        if ratio > worst_ratio:
            worst_ratio = ratio
            worst_key = key
        if abs(total) > tol:
            return CheckResult(
                name,
                False,
                f"edge {key[0]} length {key[1]}: |sum| = {_fmt(abs(total))} "
                f"(tol {_fmt(tol)})",
            )
    detail = f"{len(sums)} (edge, length) classes"
    if worst_key is not None:
        detail += f", worst |sum|/tol = {_fmt(worst_ratio)}"
    return CheckResult(name, True, detail)


def _check_generic_cancellation(g: EmbeddedGraph, max_len: int) -> CheckResult:
    name = "generic-cancellation"
    delta = max_degree(g)
    top = max((abs(e.weight) for e in g.edges), default=0.0)
    if max(delta - 1, 0) * top >= 1.0:
        return CheckResult(
            name, None, "skipped: weights outside the convergence radius"
        )
    worst_gap = 0.0
    worst_edge = -1
    for e in range(g.num_directed):
        report = verify_generic_cancellation(g, e, max_len)
        if report.gap > report.bound:
            return CheckResult(
                name,
                False,
                f"edge {e}: gap = {_fmt(report.gap)} exceeds bound {_fmt(report.bound)}",
            )
        if report.gap > worst_gap:
            worst_gap = report.gap
            worst_edge = e
    return CheckResult(
        name, True, f"worst gap = {_fmt(worst_gap)} (edge {worst_edge})"
    )


def _check_trace_identity(g: EmbeddedGraph, max_len: int) -> CheckResult:
    name = "trace-identity"
    top = min(8, max_len)
    m = build_transition_matrix(g).entries
    loop_sums = {n: 0.0 + 0.0j for n in range(1, top + 1)}
    for l in enumerate_rooted_loops(g, top):
        loop_sums[l.length] += walk_weight(g, l).value
    power = np.eye(m.shape[0], dtype=complex)
    worst = 0.0
    for n in range(1, top + 1):
        power = power @ m
        trace = complex(np.trace(power))
        diff = abs(trace - loop_sums[n])
        worst = max(worst, diff)
        if diff > 1e-11 * max(1.0, abs(trace)):
            return CheckResult(
                name,
                False,
                f"length {n}: |trace - loop sum| = {_fmt(diff)}",
            )
    return CheckResult(name, True, f"lengths 1..{top}, worst diff = {_fmt(worst)}")


def _check_decoration(g: EmbeddedGraph) -> CheckResult:
    name = "decoration"
    if max_degree(g) <= 3:
        return CheckResult(name, None, "skipped: graph already trivalent")
    dec = decorate(g)
    if max_degree(dec.decorated) > 3:
        return CheckResult(name, False, "decorated graph is not trivalent")
    z0 = partition_function_oracle(g)
    z1 = partition_function_oracle(dec.decorated)
    diff = abs(z0 - z1)
    tol = 1e-12 * max(abs(z0), 1.0)
    return CheckResult(
        name,
        diff <= tol,
        f"|Z - Z_decorated| = {_fmt(diff)} (tol {_fmt(tol)})",
    )


def run_suite(
    g: EmbeddedGraph, max_len: int, corrupt_transition: bool = False
) -> list[CheckResult]:
    """Run every check; ``corrupt_transition`` injects a deliberate fault."""
    return [
        _check_kw_vs_oracle(g, corrupt_transition),
        _check_weight_properties(g, max_len),
        _check_specific_cancellation(g, max_len),
        _check_generic_cancellation(g, max_len),
        _check_trace_identity(g, max_len),
        _check_decoration(g),
    ]
