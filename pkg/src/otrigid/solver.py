"""Exact network simplex for the scaled transportation problem.

Flows are integers at scale S (a multiple of lcm(m, n)); each source emits
S/m units and each target absorbs S/n units.  The solver maintains a
spanning-tree basis on the bipartite graph K_{m,n}, starts from the
northwest-corner basis and pivots with Bland's rule, so termination is
guaranteed under degeneracy and the returned plan is a polytope vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .instance import Instance

DEFAULT_DUAL_TOL = 1e-9
UNCROSS_TIE_TOL = 1e-12

_MAX_PIVOTS = 50_000_000  # safety valve; never hit in practice
_DEGENERATE_SWITCH = 1000  # consecutive zero-step pivots before Bland takes over
_REFRESH_EVERY = 1024  # full potential recompute cadence (caps rounding drift)
_ENTER_TOL = 1e-11  # entering threshold relative to max|c|; filters potential
# propagation noise on exactly tied costs (e.g. duplicated dummy rows), which
# otherwise produces endless zero-improvement pivots


@dataclass(frozen=True)
class TransportPlan:
    """Sparse integer flow matrix at scale S; mass_ij = f_ij / S.

    Row sums are S/m and column sums S/n exactly (integer arithmetic).
    ``flows`` lists (i, j, f_ij) with f_ij >= 1 in (i asc, j asc) order.
    """

    m: int
    n: int
    scale: int
    flows: tuple  # ((i, j, f), ...)

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(sorted(map(tuple, self.flows))))

    def validate(self):
        """Check exact integral feasibility; raises ValueError on violation."""
        if self.scale % self.m or self.scale % self.n:
            raise ValueError("scale must be divisible by both m and n")
        row = [0] * self.m
        col = [0] * self.n
        seen = set()
        for i, j, f in self.flows:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise ValueError(f"flow index ({i},{j}) out of range")
            if f < 1:
                raise ValueError(f"flow ({i},{j}) must be a positive integer")
            if (i, j) in seen:
                raise ValueError(f"duplicate flow entry ({i},{j})")
            seen.add((i, j))
            row[i] += f
            col[j] += f
        if any(r != self.scale // self.m for r in row):
            raise ValueError("source not exactly depleted")
        if any(c != self.scale // self.n for c in col):
            raise ValueError("target not exactly filled")

    @property
    def support_size(self):
        return len(self.flows)

    def flow_dict(self):
        return {(i, j): f for i, j, f in self.flows}

    def targets_of(self, i):
        """Sorted target indices receiving positive mass from source i."""
        return [j for ii, j, _ in self.flows if ii == i]

    def to_dense(self):
        dense = np.zeros((self.m, self.n), dtype=np.int64)
        for i, j, f in self.flows:
            dense[i, j] = f
        return dense


@dataclass(frozen=True)
class DualCertificate:
    """Potentials (u, v) with u_i + v_j <= c_ij everywhere, tight on the support."""

    u: np.ndarray
    v: np.ndarray
    tol: float


@dataclass(frozen=True)
class Crossing:
    """A 2x2 all-positive sub-plan: sources i < i2 both feed targets j < j2."""

    i: int
    i2: int
    j: int
    j2: int
    costs: Optional[tuple] = None  # (c_ij, c_ij2, c_i2j, c_i2j2) when known


class SupportCycleError(ValueError):
    """The plan's support contains a cycle, so it is not a basic solution."""


def _northwest_corner(m, n, supply, demand):
    """Initial spanning-tree basis: staircase allocation, m+n-1 arcs."""
    flows = {}
    i = j = 0
    rem_rows = [supply] * m
    rem_cols = [demand] * n
    while True:
        q = min(rem_rows[i], rem_cols[j])
        flows[(i, j)] = q
        rem_rows[i] -= q
        rem_cols[j] -= q
        if i == m - 1 and j == n - 1:
            break
        if rem_rows[i] == 0 and i < m - 1:
            i += 1
        else:
            j += 1
    return flows


def _potentials(adj, c, m, n):
    """Propagate u_i + v_j = c_ij along the spanning tree, u_0 = 0.

    ``c`` is a nested list; returns plain float lists.
    """
    u = [0.0] * m
    v = [0.0] * n
    seen = bytearray(m + n)
    seen[0] = 1
    stack = [0]
    while stack:
        node = stack.pop()
        if node < m:
            ui = u[node]
            crow = c[node]
            for nb in adj[node]:
                if not seen[nb]:
                    seen[nb] = 1
                    v[nb - m] = crow[nb - m] - ui
                    stack.append(nb)
        else:
            vj = v[node - m]
            for nb in adj[node]:
                if not seen[nb]:
                    seen[nb] = 1
                    u[nb] = c[nb][node - m] - vj
                    stack.append(nb)
    return u, v


def _shift_subtree(adj, u, v, m, n, ei, ej, delta):
    """Shift potentials on the entering arc's target-side component by delta.

    Global shifts leave all reduced costs invariant, so only the component of
    the new tree reachable from target ej without crossing the entering arc
    needs adjusting: v += delta, u -= delta there restores tightness.
    """
    seen = bytearray(m + n)
    seen[ei] = 1  # block the entering arc itself
    seen[m + ej] = 1
    v[ej] += delta
    stack = [m + ej]
    while stack:
        node = stack.pop()
        for nb in adj[node]:
            if not seen[nb]:
                seen[nb] = 1
                if nb < m:
                    u[nb] -= delta
                else:
                    v[nb - m] += delta
                stack.append(nb)


def _tree_path(adj, a, b, nnodes):
    """Node path a..b in the spanning tree."""
    parent = [-2] * nnodes
    parent[a] = -1
    stack = [a]
    while stack:
        x = stack.pop()
        if x == b:
            break
        for nb in adj[x]:
            if parent[nb] == -2:
                parent[nb] = x
                stack.append(nb)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def solve(inst: Instance) -> TransportPlan:
    """Minimize sum c_ij * f_ij / S over integral plans; returns a vertex plan."""
    m, n = inst.m, inst.n
    S = inst.scale
    c_np = inst.costs.c
    c = c_np.tolist()
    supply = S // m
    demand = S // n

    flows = _northwest_corner(m, n, supply, demand)
    nnodes = m + n
    adj = [set() for _ in range(nnodes)]
    for (i, j) in flows:
        adj[i].add(m + j)
        adj[m + j].add(i)
    basic_mask = np.zeros(m * n, dtype=bool)
    for (i, j) in flows:
        basic_mask[i * n + j] = True

    u, v = _potentials(adj, c, m, n)
    enter_cut = -_ENTER_TOL * inst.costs.max_abs
    degenerate_run = 0
    bland = False
    refreshed = True  # potentials are exact tree propagations, not shifted
    for pivot in range(_MAX_PIVOTS):
        if pivot % _REFRESH_EVERY == _REFRESH_EVERY - 1 and not refreshed:
            u, v = _potentials(adj, c, m, n)
            refreshed = True
        flat = (
            (c_np - np.asarray(u)[:, None]) - np.asarray(v)[None, :]
        ).ravel()
        if bland:
            cand = np.flatnonzero(flat < enter_cut)
            if cand.size:
                cand = cand[~basic_mask[cand]]
            no_entering = cand.size == 0
            enter = int(cand[0]) if cand.size else -1  # Bland: lowest index
        else:
            masked = np.where(basic_mask, 0.0, flat)
            enter = int(np.argmin(masked))  # Dantzig: most negative, lowest index
            no_entering = masked[enter] >= enter_cut
        if no_entering:
            if refreshed:
                break
            # incremental shifts accumulate rounding; confirm optimality
            # against freshly propagated potentials before stopping
            u, v = _potentials(adj, c, m, n)
            refreshed = True
            continue
        ei, ej = divmod(enter, n)

        path = _tree_path(adj, ei, m + ej, nnodes)
        minus = []
        plus = []
        for t in range(len(path) - 1):
            a, b = path[t], path[t + 1]
            arc = (a, b - m) if a < m else (b, a - m)
            (minus if t % 2 == 0 else plus).append(arc)
        theta = min(flows[a] for a in minus)
        if not bland:
            # Dantzig can stall on degenerate pivots; a long zero-step run
            # switches permanently to Bland's rule, which cannot cycle
            degenerate_run = degenerate_run + 1 if theta == 0 else 0
            if degenerate_run > _DEGENERATE_SWITCH:
                bland = True
        leaving = min(
            (a for a in minus if flows[a] == theta), key=lambda a: a[0] * n + a[1]
        )
        for a in minus:
            flows[a] -= theta
        for a in plus:
            flows[a] += theta
        flows[(ei, ej)] = theta
        del flows[leaving]
        adj[leaving[0]].discard(m + leaving[1])
        adj[m + leaving[1]].discard(leaving[0])
        adj[ei].add(m + ej)
        adj[m + ej].add(ei)
        basic_mask[leaving[0] * n + leaving[1]] = False
        basic_mask[enter] = True
        _shift_subtree(adj, u, v, m, n, ei, ej, float(flat[enter]))
        refreshed = False
    else:
        raise RuntimeError("network simplex exceeded the pivot safety limit")

    support = tuple(
        (i, j, int(f)) for (i, j), f in sorted(flows.items()) if f >= 1
    )
    plan = TransportPlan(m, n, S, support)
    return plan


def objective(inst: Instance, plan: TransportPlan) -> float:
    """Total transport cost sum c_ij * f_ij / S."""
    if plan.m != inst.m or plan.n != inst.n:
        raise ValueError("plan dimensions do not match instance")
    c = inst.costs.c
    total = sum(c[i, j] * f for i, j, f in plan.flows)
    return total / plan.scale


def scaled_objective(inst: Instance, plan: TransportPlan) -> float:
    """Integer-weighted cost sum c_ij * f_ij (no division by the scale)."""
    if plan.m != inst.m or plan.n != inst.n:
        raise ValueError("plan dimensions do not match instance")
    c = inst.costs.c
    return sum(c[i, j] * f for i, j, f in plan.flows)


def verify_optimality(
    inst: Instance, plan: TransportPlan, tol: float = DEFAULT_DUAL_TOL
) -> Optional[DualCertificate]:
    """Certify optimality by complementary slackness, or return None.

    Potentials are propagated along the support forest; the per-component
    additive freedom is then fixed by solving the induced difference
    constraints (Bellman-Ford over components) so that a valid certificate is
    found whenever one exists.  Raises SupportCycleError if the support is not
    a forest.
    """
    plan.validate()
    m, n = inst.m, inst.n
    c = inst.costs.c
    nnodes = m + n
    adj = [[] for _ in range(nnodes)]
    for i, j, _ in plan.flows:
        adj[i].append(m + j)
        adj[m + j].append(i)
    if plan.support_size > nnodes - 1:
        raise SupportCycleError("support has more than m+n-1 edges")

    u = np.zeros(m)
    v = np.zeros(n)
    comp = [-1] * nnodes
    ncomp = 0
    for root in range(nnodes):
        if comp[root] >= 0:
            continue
        comp[root] = ncomp
        stack = [root]
        edges = 0
        nodes = 0
        while stack:
            x = stack.pop()
            nodes += 1
            edges += len(adj[x])
            for nb in adj[x]:
                if comp[nb] < 0:
                    comp[nb] = ncomp
                    if x < m:
                        v[nb - m] = c[x, nb - m] - u[x]
                    else:
                        u[nb] = c[nb, x - m] - v[x - m]
                    stack.append(nb)
        if edges // 2 >= nodes:
            raise SupportCycleError("support contains a cycle")
        ncomp += 1

    abs_tol = tol * max(inst.costs.max_abs, 1.0)
    comp_s = np.array(comp[:m])
    comp_t = np.array(comp[m:])
    red = (c - u[:, None]) - v[None, :]

    # shift component k's potentials by delta_k: constraints
    # delta_a - delta_b <= min reduced cost over (i in a, j in b)
    w = np.full((ncomp, ncomp), np.inf)
    np.minimum.at(w, (comp_s[:, None], comp_t[None, :]), red)
    delta = _solve_difference_constraints(w, abs_tol)
    if delta is None:
        return None
    u = u + delta[comp_s]
    v = v - delta[comp_t]
    red = (c - u[:, None]) - v[None, :]
    if np.min(red) < -abs_tol:
        return None
    for i, j, _ in plan.flows:
        if abs(red[i, j]) > abs_tol:
            return None
    return DualCertificate(u=u, v=v, tol=tol)


def _solve_difference_constraints(w, abs_tol):
    """Bellman-Ford for delta_a - delta_b <= w[a, b]; None if infeasible."""
    k = w.shape[0]
    diag = np.diagonal(w)
    if np.any(diag < -abs_tol):
        return None  # reduced cost negative inside a component
    w = w.copy()
    np.fill_diagonal(w, np.maximum(diag, 0.0))
    delta = np.zeros(k)
    for _ in range(k):
        # relax: delta_a <= delta_b + w[a, b]
        best = np.min(delta[None, :] + w, axis=1)
        if not np.any(best < delta):
            return delta
        delta = np.minimum(delta, best)
    # one more sweep: any further strict improvement beyond tolerance means
    # a negative cycle, i.e. the plan is not optimal
    best = np.min(delta[None, :] + w, axis=1)
    if np.any(best < delta - abs_tol):
        return None
    return delta


def find_crossings(plan: TransportPlan, inst: Optional[Instance] = None):
    """All (i<i2, j<j2) quadruples where all four flows are positive.

    Enumerated by intersecting per-source sorted target lists, so the cost is
    proportional to the overlap rather than m^2 n^2.  Costs are attached when
    an instance is supplied.
    """
    by_source = [[] for _ in range(plan.m)]
    for i, j, _ in plan.flows:
        by_source[i].append(j)
    out = []
    c = inst.costs.c if inst is not None else None
    for i in range(plan.m):
        ti = set(by_source[i])
        if not ti:
            continue
        for i2 in range(i + 1, plan.m):
            common = sorted(ti.intersection(by_source[i2]))
            for a in range(len(common)):
                for b in range(a + 1, len(common)):
                    j, j2 = common[a], common[b]
                    costs = None
                    if c is not None:
                        costs = (
                            float(c[i, j]),
                            float(c[i, j2]),
                            float(c[i2, j]),
                            float(c[i2, j2]),
                        )
                    out.append(Crossing(i, i2, j, j2, costs))
    return out


def uncross(inst: Instance, plan: TransportPlan) -> TransportPlan:
    """Remove crossings by pushing flow around 4-cycles, never increasing cost.

    Each step picks the first crossing in (i, i2, j, j2) order and pushes the
    full min flow in the cost-non-increasing direction, zeroing one entry, so
    the support shrinks every step and the loop terminates.  Ties within
    1e-12*max|c| push in the direction that zeroes the lexicographically
    smallest entry.
    """
    plan.validate()
    c = inst.costs.c
    tie_tol = UNCROSS_TIE_TOL * max(inst.costs.max_abs, 0.0)
    flows = plan.flow_dict()

    while True:
        crossing = _first_crossing(flows, plan.m)
        if crossing is None:
            break
        i, i2, j, j2 = crossing
        # pushing eps onto the (i,j),(i2,j2) diagonal changes cost by eps*gain
        gain = (c[i, j] + c[i2, j2]) - (c[i, j2] + c[i2, j])
        if abs(gain) <= tie_tol:
            # tie: zero the lexicographically smallest entry among the two
            # candidates (the min-flow decreased arc of each direction)
            down_a = _zeroed_arc(flows, (i, j2), (i2, j))  # +diagonal push
            down_b = _zeroed_arc(flows, (i, j), (i2, j2))  # -diagonal push
            push_diag = down_a < down_b
        else:
            push_diag = gain < 0
        if push_diag:
            eps = min(flows[(i, j2)], flows[(i2, j)])
            _push(flows, (i, j), (i2, j2), (i, j2), (i2, j), eps)
        else:
            eps = min(flows[(i, j)], flows[(i2, j2)])
            _push(flows, (i, j2), (i2, j), (i, j), (i2, j2), eps)

    support = tuple((i, j, f) for (i, j), f in sorted(flows.items()))
    return TransportPlan(plan.m, plan.n, plan.scale, support)


def _zeroed_arc(flows, a1, a2):
    """The arc a push in this direction zeroes: min flow, lex tie-break."""
    f1, f2 = flows[a1], flows[a2]
    if f1 != f2:
        return a1 if f1 < f2 else a2
    return min(a1, a2)


def _push(flows, up1, up2, down1, down2, eps):
    flows[up1] = flows.get(up1, 0) + eps
    flows[up2] = flows.get(up2, 0) + eps
    for arc in (down1, down2):
        flows[arc] -= eps
        if flows[arc] == 0:
            del flows[arc]


def _first_crossing(flows, m):
    by_source = [[] for _ in range(m)]
    for (i, j) in flows:
        by_source[i].append(j)
    for lst in by_source:
        lst.sort()
    for i in range(m):
        ti = set(by_source[i])
        if len(ti) < 2:
            continue
        for i2 in range(i + 1, m):
            common = sorted(ti.intersection(by_source[i2]))
            if len(common) >= 2:
                return i, i2, common[0], common[1]
    return None
