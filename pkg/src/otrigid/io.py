"""File formats: instance JSON, plan CSV, stats JSON, decomposition JSON.

All emitters are deterministic: identical inputs produce byte-identical
files.
"""
from __future__ import annotations

import csv
import json
import math
from fractions import Fraction

import numpy as np

from .analysis import rigidity_report
from .constructions import PermutationDecomposition
from .instance import CostMatrix, Geometry, Instance, PointCloud
from .solver import TransportPlan, find_crossings


def instance_to_dict(inst: Instance) -> dict:
    out = {"m": inst.m, "n": inst.n, "costs": inst.costs.c.tolist()}
    if inst.geometry is not None:
        out["geometry"] = {
            "sources": inst.geometry.sources.points.tolist(),
            "targets": inst.geometry.targets.points.tolist(),
            "p": inst.geometry.p,
        }
    return out


def instance_from_dict(data: dict) -> Instance:
    costs = CostMatrix(np.array(data["costs"], dtype=float))
    if costs.m != data["m"] or costs.n != data["n"]:
        raise ValueError("declared m, n do not match the cost matrix shape")
    geometry = None
    if data.get("geometry") is not None:
        g = data["geometry"]
        geometry = Geometry(
            PointCloud(np.array(g["sources"], dtype=float), "source"),
            PointCloud(np.array(g["targets"], dtype=float), "target"),
            float(g["p"]),
        )
    return Instance(costs, geometry)


def save_instance(inst: Instance, path):
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh)
        fh.write("\n")


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def plan_csv_lines(plan: TransportPlan):
    """Rows 'i,j,num,den' in (i asc, j asc) order, mass in lowest terms."""
    lines = ["i,j,num,den"]
    for i, j, f in plan.flows:
        frac = Fraction(f, plan.scale)
        lines.append(f"{i},{j},{frac.numerator},{frac.denominator}")
    return lines


def save_plan_csv(plan: TransportPlan, path):
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(plan_csv_lines(plan)) + "\n")


def load_plan_csv(path, m=None, n=None, scale=None) -> TransportPlan:
    """Rebuild a plan from CSV; m, n, scale are inferred when omitted.

    Inference assumes a feasible plan (every source and target appears); the
    scale is the smallest integer making all masses and both marginals
    integral.
    """
    masses = []
    with open(path) as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            masses.append(
                (int(row["i"]), int(row["j"]), Fraction(int(row["num"]), int(row["den"])))
            )
    if not masses:
        raise ValueError("plan CSV has no support entries")
    if m is None:
        m = max(i for i, _, _ in masses) + 1
    if n is None:
        n = max(j for _, j, _ in masses) + 1
    if scale is None:
        scale = math.lcm(math.lcm(m, n), *(q.denominator for _, _, q in masses))
    flows = []
    for i, j, q in masses:
        f = q * scale
        if f.denominator != 1:
            raise ValueError(f"mass at ({i},{j}) is not integral at scale {scale}")
        flows.append((i, j, int(f)))
    return TransportPlan(m, n, scale, tuple(flows))


def stats_dict(plan: TransportPlan, crossings: int | None = None) -> dict:
    """The stats JSON payload for a plan."""
    rep = rigidity_report(plan)
    if crossings is None:
        crossings = len(find_crossings(plan))
    return {
        "m": plan.m,
        "n": plan.n,
        "support_size": rep.support_size,
        "t": list(rep.t),
        "ell": list(rep.ell),
        "t_min": rep.t_min,
        "t_max": rep.t_max,
        "t_mean": rep.support_size / plan.m,
        "ell_mean": rep.support_size / plan.n,
        "bounds": {"b1": rep.bound1_ok, "b2": rep.bound2_ok, "b3": rep.bound3_ok},
        "crossings": crossings,
    }


def save_stats_json(plan: TransportPlan, path, crossings=None):
    with open(path, "w") as fh:
        json.dump(stats_dict(plan, crossings), fh, sort_keys=True)
        fh.write("\n")


def decomposition_to_dict(dec: PermutationDecomposition) -> dict:
    return {
        "terms": [
            {"perm": list(sigma), "num": w.numerator, "den": w.denominator}
            for sigma, w in dec.terms
        ]
    }


def decomposition_from_dict(data: dict) -> PermutationDecomposition:
    terms = tuple(
        (tuple(t["perm"]), Fraction(t["num"], t["den"])) for t in data["terms"]
    )
    n = len(terms[0][0])
    return PermutationDecomposition(n=n, terms=terms)


def save_decomposition_json(dec: PermutationDecomposition, path):
    with open(path, "w") as fh:
        json.dump(decomposition_to_dict(dec), fh)
        fh.write("\n")


def load_decomposition_json(path) -> PermutationDecomposition:
    with open(path) as fh:
        return decomposition_from_dict(json.load(fh))
