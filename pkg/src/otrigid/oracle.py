"""Brute-force enumeration of all integral plans on tiny instances.

Ground truth for the solver and for claims quantified over every optimal
plan.  Enumeration is row-by-row backtracking over integer matrices with
fixed margins (row sums S/m, column sums S/n), pruned by remaining column
capacity.
"""
from __future__ import annotations

from dataclasses import dataclass

from .instance import Instance
from .solver import TransportPlan, scaled_objective

DEFAULT_CAP = 10**7
OPT_REL_TOL = 1e-12


class OracleCapExceeded(RuntimeError):
    """Instance has more integral plans than the enumeration cap allows."""


@dataclass(frozen=True)
class OracleResult:
    min_cost: float  # objective value (already divided by the scale)
    optimal_plans: tuple  # all integral plans attaining min_cost within 1e-12
    enumerated_count: int


def _row_fills(row_sum, caps, j=0, prefix=()):
    """All ways to split row_sum over columns j.. within per-column caps."""
    if j == len(caps) - 1:
        if row_sum <= caps[j]:
            yield prefix + (row_sum,)
        return
    tail_cap = sum(caps[j + 1 :])
    lo = max(0, row_sum - tail_cap)
    hi = min(caps[j], row_sum)
    for q in range(lo, hi + 1):
        yield from _row_fills(row_sum - q, caps, j + 1, prefix + (q,))


def enumerate_plans(inst: Instance, cap: int = DEFAULT_CAP):
    """Yield every integer matrix with row sums S/m and column sums S/n once.

    Raises OracleCapExceeded when more than ``cap`` plans exist.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    m, n = inst.m, inst.n
    S = inst.scale
    row_sum = S // m
    count = 0

    def recurse(i, rem_cols, rows):
        nonlocal count
        if i == m:
            count += 1
            if count > cap:
                raise OracleCapExceeded(f"more than {cap} integral plans")
            flows = tuple(
                (ii, j, f) for ii, row in enumerate(rows) for j, f in enumerate(row) if f
            )
            yield TransportPlan(m, n, S, flows)
            return
        for row in _row_fills(row_sum, rem_cols):
            new_rem = tuple(r - q for r, q in zip(rem_cols, row))
            # a column demanding more than the remaining rows can supply is dead
            if max(new_rem) <= (m - i - 1) * row_sum:
                yield from recurse(i + 1, new_rem, rows + (row,))

    yield from recurse(0, (S // n,) * n, ())


def brute_force_solve(inst: Instance, cap: int = DEFAULT_CAP) -> OracleResult:
    """Exact minimum over all integral plans, returning every argmin plan."""
    best = None
    optimal = []
    count = 0
    for plan in enumerate_plans(inst, cap):
        count += 1
        cost = scaled_objective(inst, plan)
        if best is None or cost < best - OPT_REL_TOL * max(abs(best), 1.0):
            best = cost
            optimal = [p for p in optimal if _close(scaled_objective(inst, p), best)]
            optimal.append(plan)
        elif _close(cost, best):
            optimal.append(plan)
    if best is None:
        raise AssertionError("transportation problem is always feasible")
    return OracleResult(
        min_cost=best / inst.scale,
        optimal_plans=tuple(optimal),
        enumerated_count=count,
    )


def _close(cost, best):
    return cost <= best + OPT_REL_TOL * max(abs(best), 1.0)
