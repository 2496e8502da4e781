"""Execution-time model of one push-relabel kernel iteration.

A worker's time is the sum over its vertices of neighbour scanning
(``k * d(v)``) plus either a push (``lambda_v = 1``) or a relabel
(``lambda_v = 0``). The iteration lasts as long as the slowest worker.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, Union

Cost = Union[float, Mapping[int, float]]


@dataclass(frozen=True)
class CostModelParams:
    k: float
    push: Cost
    relabel: Cost
    assignment: Mapping[int, int]  # vertex -> worker
    lambdas: Mapping[int, int]  # vertex -> 1 (push) or 0 (relabel)

    def __post_init__(self):
        bad = {v: lam for v, lam in self.lambdas.items() if lam not in (0, 1)}
        if bad:
            raise ValueError(f"lambda must be 0 or 1, got {bad}")
        if set(self.assignment) != set(self.lambdas):
            missing = set(self.assignment) ^ set(self.lambdas)
            raise ValueError(f"assignment and lambdas must cover the same vertices; differ on {sorted(missing)}")


def _at(cost: Cost, v: int) -> float:
    return cost[v] if isinstance(cost, Mapping) else cost


def worker_loads(degrees: Mapping[int, int] | Sequence[int], params: CostModelParams) -> dict[int, float]:
    loads: dict[int, float] = {}
    for v, worker in params.assignment.items():
        lam = params.lambdas[v]
        t = params.k * degrees[v] + lam * _at(params.push, v) + (1 - lam) * _at(params.relabel, v)
        loads[worker] = loads.get(worker, 0) + t
    return loads


def cost_model_estimate(degrees: Mapping[int, int] | Sequence[int], params: CostModelParams) -> float:
    loads = worker_loads(degrees, params)
    return max(loads.values(), default=0)


def read_assignment(path: str | Path) -> tuple[dict[int, int], dict[int, int], dict[int, int]]:
    """Parse a ``vertex,worker,degree,lambda`` CSV into (assignment, degrees, lambdas)."""
    assignment: dict[int, int] = {}
    degrees: dict[int, int] = {}
    lambdas: dict[int, int] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"vertex", "worker", "degree", "lambda"}
        if reader.fieldnames is None or set(reader.fieldnames) != expected:
            raise ValueError(f"assignment header must be vertex,worker,degree,lambda; got {reader.fieldnames}")
        for row in reader:
            v = int(row["vertex"])
            assignment[v] = int(row["worker"])
            degrees[v] = int(row["degree"])
            lambdas[v] = int(row["lambda"])
    return assignment, degrees, lambdas
