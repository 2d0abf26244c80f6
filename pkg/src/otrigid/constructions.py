"""Permutation decomposition of square plans and the gcd dummy-point construction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .instance import CostMatrix, Instance
from .solver import TransportPlan, solve

DEFAULT_GCD_GUARD = 10_000


class GuardExceeded(ValueError):
    """The expanded lcm(m, n) problem is larger than the caller allowed."""


@dataclass(frozen=True)
class PermutationDecomposition:
    """Convex combination of permutations recombining exactly to an m = n plan.

    terms: ((sigma, weight), ...) with sigma a tuple mapping row -> column and
    weight a positive Fraction; weights sum to exactly 1.
    """

    n: int
    terms: tuple

    def __post_init__(self):
        if sum(w for _, w in self.terms) != 1:
            raise ValueError("decomposition weights must sum to exactly 1")

    def recombine(self) -> np.ndarray:
        """Exact rational n x n mass matrix sum_k weight_k * P(sigma_k)."""
        dense = np.full((self.n, self.n), Fraction(0), dtype=object)
        for sigma, w in self.terms:
            for i, j in enumerate(sigma):
                dense[i, j] += w
        return dense


def _perfect_matching(support_by_row, n):
    """Kuhn's augmenting-path matching on the support; deterministic scan order."""
    match_col = [-1] * n  # column -> row

    def try_row(row, visited):
        for col in support_by_row[row]:
            if visited[col]:
                continue
            visited[col] = True
            if match_col[col] < 0 or try_row(match_col[col], visited):
                match_col[col] = row
                return True
        return False

    for row in range(n):
        if not try_row(row, [False] * n):
            return None
    sigma = [-1] * n
    for col, row in enumerate(match_col):
        sigma[row] = col
    return tuple(sigma)


def birkhoff_decompose(plan: TransportPlan) -> PermutationDecomposition:
    """Greedy extraction of permutations from a square doubly stochastic plan.

    Each round finds a perfect matching inside the current support (one exists
    by Hall's theorem), subtracts the minimum flow along it and repeats; every
    round zeroes at least one entry, so the number of terms is at most
    support_size - n + 1.
    """
    if plan.m != plan.n:
        raise ValueError("Birkhoff decomposition requires m = n")
    plan.validate()
    n = plan.n
    S = plan.scale
    residual = plan.flow_dict()
    terms = []
    while residual:
        support_by_row = [[] for _ in range(n)]
        for (i, j) in sorted(residual):
            support_by_row[i].append(j)
        sigma = _perfect_matching(support_by_row, n)
        if sigma is None:
            raise AssertionError("support of a feasible square plan must contain a matching")
        w = min(residual[(i, sigma[i])] for i in range(n))
        terms.append((sigma, Fraction(w, S // n)))
        for i in range(n):
            arc = (i, sigma[i])
            residual[arc] -= w
            if residual[arc] == 0:
                del residual[arc]
    return PermutationDecomposition(n=n, terms=tuple(terms))


def gcd_construct(inst: Instance, guard: int = DEFAULT_GCD_GUARD) -> TransportPlan:
    """Optimal plan with fanout <= n/gcd(m,n) and fanin <= m/gcd(m,n).

    Each source is split into n/g co-located dummies and each target into m/g
    dummies (g = gcd(m, n)); the expanded L x L problem (L = lcm(m, n)) is an
    assignment problem whose integral optimum is a permutation, which collapses
    back to an optimal m x n plan with the stated bounds.
    """
    m, n = inst.m, inst.n
    g = math.gcd(m, n)
    L = math.lcm(m, n)
    if L > guard:
        raise GuardExceeded(
            f"expanded problem size lcm({m},{n}) = {L} exceeds guard {guard}"
        )
    row_copies = n // g  # dummies per source
    col_copies = m // g  # dummies per target
    expanded_c = np.repeat(np.repeat(inst.costs.c, row_copies, axis=0), col_copies, axis=1)
    expanded = Instance(CostMatrix(expanded_c))
    perm_plan = solve(expanded)  # scale L, a permutation

    collapsed = {}
    for a, b, f in perm_plan.flows:
        key = (a // row_copies, b // col_copies)
        collapsed[key] = collapsed.get(key, 0) + f
    flows = tuple((i, j, f) for (i, j), f in sorted(collapsed.items()))
    plan = TransportPlan(m, n, L, flows)
    plan.validate()
    return plan
