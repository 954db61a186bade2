"""Runtime convergence checks: dense state-consistency oracles, exact
per-step progress identities, minimum-gap tracking, and the worst-case
gap-bound evaluations.

Bound violations are reported, never asserted fatally: the constant
2*max_offdiag - min_offdiag in the common gap bound rests on a premise the
derivation does not spell out, so the hard assertions live in the exact
per-step identities instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyTrace, IdentityViolated, TooFewPoints
from .matrix import SimilarityMatrix
from .solvers import GOOD_KINDS, SolverKind, SolverState, StepKind, StepRecord

IDENTITY_RTOL = 1e-9


@dataclass
class ConsistencyReport:
    max_r_deviation: float
    max_f_deviation: float

    def ok(self, tol: float = 1e-8) -> bool:
        return self.max_r_deviation <= tol and self.max_f_deviation <= tol


@dataclass
class ProgressViolation:
    t: int
    kind: StepKind
    expected: float
    actual: float


@dataclass
class BoundReport:
    t: int
    min_gap: float
    bound_value: float
    satisfied: bool
    beta: float
    good_steps: int
    drop_steps: int
    swap_steps: int
    support0: int


def check_state(state: SolverState, A: SimilarityMatrix) -> ConsistencyReport:
    """Dense recomputation of r = A x and f = x'Ax versus the caches."""
    r_true = A.entries @ state.x.coords
    f_true = float(r_true @ state.x.coords)
    return ConsistencyReport(
        max_r_deviation=float(np.max(np.abs(state.r - r_true), initial=0.0)),
        max_f_deviation=abs(state.f - f_true) / max(1.0, abs(f_true)),
    )


def _expected_gain(rec: StepRecord, A: SimilarityMatrix) -> float:
    f = rec.f_before
    if rec.kind is StepKind.FW_GOOD:
        return (rec.r_s - f) ** 2 / (2.0 * rec.r_s - f)
    if rec.kind is StepKind.PAIRWISE_GOOD:
        a_ij = float(A.entries[rec.s_index, rec.v_index])
        return (rec.r_s - rec.r_v) ** 2 / (2.0 * a_ij)
    if rec.kind is StepKind.AWAY_GOOD:
        return (f - rec.r_v) ** 2 / (2.0 * rec.r_v - f)
    raise ValueError(f"no progress identity for {rec.kind}")


def check_progress(
    trace: list[StepRecord],
    A: SimilarityMatrix,
    raise_on_violation: bool = True,
) -> list[ProgressViolation]:
    """Verify each good step's exact objective-gain identity and the
    gap-versus-progress inequalities. Drop and swap steps carry no gap
    bound and are skipped."""
    _, max_off = _extremes(A)
    violations: list[ProgressViolation] = []
    for rec in trace:
        if rec.kind not in GOOD_KINDS:
            continue
        gain = rec.f_after - rec.f_before
        expected = _expected_gain(rec, A)
        scale = max(abs(expected), abs(rec.f_before), 1e-300)
        if abs(gain - expected) > IDENTITY_RTOL * scale:
            violations.append(
                ProgressViolation(rec.t, rec.kind, expected, gain))
            continue
        # Gap-vs-progress inequalities (small slack for rounding).
        slack = 1.0 + 1e-9
        if rec.kind is StepKind.FW_GOOD:
            bound = 4.0 * (2.0 * rec.r_s - rec.f_before) * gain
        elif rec.kind is StepKind.PAIRWISE_GOOD:
            bound = 8.0 * max_off * gain
        else:  # AWAY_GOOD: the away branch implies gap/2 < f - r_v
            away_gap = rec.f_before - rec.r_v
            bound = 4.0 * away_gap * away_gap
        if rec.gap**2 > bound * slack + 1e-15:
            violations.append(
                ProgressViolation(rec.t, rec.kind, bound, rec.gap**2))
    if violations and raise_on_violation:
        v = violations[0]
        raise IdentityViolated(
            f"step {v.t} ({v.kind.value}): expected {v.expected}, "
            f"got {v.actual}")
    return violations


def _extremes(A: SimilarityMatrix) -> tuple[float, float]:
    mask = ~np.eye(A.n, dtype=bool)
    off = A.entries[mask]
    return float(off.min()), float(off.max())


def min_gap(trace: list[StepRecord]) -> float:
    if not trace:
        raise EmptyTrace("no steps recorded")
    return min(rec.gap for rec in trace)


def step_counts(trace: list[StepRecord]) -> tuple[int, int, int]:
    good = sum(1 for r in trace if r.kind in GOOD_KINDS)
    drops = sum(1 for r in trace if r.kind is StepKind.DROP)
    swaps = sum(1 for r in trace if r.kind is StepKind.SWAP)
    return good, drops, swaps


def theorem_bound(
    trace: list[StepRecord],
    solver_kind: SolverKind,
    min_offdiag: float,
    max_offdiag: float,
    support0: int,
    n: int | None = None,
    f0: float | None = None,
) -> BoundReport:
    """Evaluate the worst-case minimum-gap bound for the given solver
    using the realized objective gain f(x_t) - f(x_0) from the trace."""
    if not trace:
        raise EmptyTrace("no steps recorded")
    if f0 is None:
        f0 = trace[0].f_before
    t = len(trace)
    gain = max(trace[-1].f_after - f0, 0.0)
    g_min = min_gap(trace)
    good, drops, swaps = step_counts(trace)
    if solver_kind is SolverKind.FW:
        beta = 2.0 * max_offdiag - min_offdiag
        bound = 2.0 * math.sqrt(max(beta, 0.0) * gain / t)
    elif solver_kind is SolverKind.AFW:
        beta = 2.0 * max_offdiag - min_offdiag
        denom = t + 1 - support0
        if denom <= 0:
            bound = math.inf
        else:
            bound = 2.0 * math.sqrt(2.0 * max(beta, 0.0) * gain / denom)
    elif solver_kind is SolverKind.PFW:
        beta = 2.0 * max_offdiag
        if n is None:
            raise ValueError("PFW bound needs the dimension n")
        # 2*sqrt(6 n! max_offdiag gain / t), with n! in log space.
        if gain <= 0 or max_offdiag <= 0:
            bound = 0.0 if gain <= 0 else math.inf
        else:
            log_b = (math.log(2.0) + 0.5 * (
                math.log(6.0) + math.lgamma(n + 1)
                + math.log(max_offdiag) + math.log(gain) - math.log(t)))
            bound = math.exp(log_b) if log_b < 700 else math.inf
    else:
        raise ValueError("no gap bound for replicator dynamics")
    # A bound beyond the largest possible gap is trivially satisfied
    # (the gap never exceeds 2*max_offdiag on the simplex).
    satisfied = g_min <= bound or bound > 2.0 * max_offdiag
    return BoundReport(
        t=t,
        min_gap=g_min,
        bound_value=bound,
        satisfied=satisfied,
        beta=beta,
        good_steps=good,
        drop_steps=drops,
        swap_steps=swaps,
        support0=support0,
    )


def decay_fit(min_gap_curve) -> float:
    """Least-squares slope of log(min gap so far) versus log(iteration)."""
    g = np.asarray(min_gap_curve, dtype=float)
    if g.size < 20:
        raise TooFewPoints("need at least 20 samples for a decay fit")
    t = np.arange(1, g.size + 1, dtype=float)
    mask = g > 0
    if mask.sum() < 20:
        raise TooFewPoints("need at least 20 positive gaps")
    slope = np.polyfit(np.log(t[mask]), np.log(g[mask]), 1)[0]
    return float(slope)


def running_min_gaps(trace: list[StepRecord]) -> np.ndarray:
    if not trace:
        raise EmptyTrace("no steps recorded")
    return np.minimum.accumulate([rec.gap for rec in trace])
