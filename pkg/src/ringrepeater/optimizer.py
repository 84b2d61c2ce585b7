"""Cost-function search over station count and code configuration.

Exhaustive grid over (m, N, switch layer): every decision variable is a
small integer, the grid is cheap to evaluate, and a deterministic
tie-break keeps results reproducible regardless of evaluation order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from ringrepeater.rates import ChannelParams, RateReport, TimingParams, ring_rate
from ringrepeater.ringcodes import RingCodeSpec


@dataclass(frozen=True)
class SearchBounds:
    """Search limits: at most seven concatenation layers and stations no
    closer than 1 km; switch layers range over everything admissible."""

    N_max: int = 7
    L0_min: float = 1.0
    m_max: Optional[int] = None

    def __post_init__(self):
        if self.N_max < 1 or self.L0_min <= 0:
            raise ValueError("invalid search bounds")

    def station_range(self, L: float) -> range:
        top = int(math.floor(L / self.L0_min - 1 + 1e-9))
        if self.m_max is not None:
            top = min(top, self.m_max)
        return range(0, max(top, 0) + 1)

    def switch_layers(self, N: int):
        """Admissible switch layers: fuse-all layers need joint inputs."""
        yield N
        for sw in range(2, N):
            yield sw


@dataclass
class OptimizationResult:
    feasible: bool
    L: float
    lam: float
    report: Optional[RateReport] = None
    cost: float = math.inf
    trace: Optional[list] = None

    def csv_row(self, channel: Optional[ChannelParams] = None) -> dict:
        row = {"L_km": self.L, "lambda": self.lam}
        if self.report is None:
            row.update({"m": "", "N": "", "Ntilde": "", "L0_km": "", "R_hz": 0.0,
                        "q": "", "mu": "", "eps_d": "", "tau0_s": "", "NE": "",
                        "cost": ""})
            return row
        rep = self.report
        row.update(rep.csv_row())
        row["L0_km"] = self.L / (rep.m + 1)
        row["cost"] = self.cost
        # order the columns as documented
        ordered = ["L_km", "lambda", "m", "N", "Ntilde", "L0_km", "R_hz", "q",
                   "mu", "eps_d", "tau0_s", "NE", "cost"]
        return {k: row[k] for k in ordered}

    def to_json(self) -> str:
        payload = {"feasible": self.feasible, "L_km": self.L, "lambda": self.lam,
                   "cost": self.cost if self.feasible else None}
        if self.report is not None:
            payload["report"] = json.loads(self.report.to_json())
        return json.dumps(payload, indent=2, sort_keys=True)


CSV_COLUMNS = ["L_km", "lambda", "m", "N", "Ntilde", "L0_km", "R_hz", "q", "mu",
               "eps_d", "tau0_s", "NE", "cost"]


def cost(report: RateReport, channel: ChannelParams, timing: TimingParams) -> float:
    """C = (1/R) * (N_E m L_att) / (tau_gen L); infeasible rates cost inf."""
    if report.R <= 0.0:
        return math.inf
    tau_gen_s = timing.tau_gen * 1e-9
    denom = report.R * tau_gen_s * channel.L
    if denom <= 0.0:  # rate small enough to underflow
        return math.inf
    return (report.N_E * channel.m * channel.L_att) / denom


def optimize(L: float, lam: float, timing: TimingParams,
             bounds: Optional[SearchBounds] = None,
             eta_d: float = 0.95, L_att: float = 20.0,
             keep_trace: bool = False) -> OptimizationResult:
    """Exhaustive grid search minimizing the cost function.

    Ties break deterministically toward smaller N, then smaller m, then
    smaller switch layer, so repeated runs (and any parallel evaluation
    order) return identical results.
    """
    if bounds is None:
        bounds = SearchBounds()
    best_key = None
    best: Optional[tuple[RateReport, float]] = None
    trace = [] if keep_trace else None
    for m in bounds.station_range(L):
        channel = ChannelParams(L=L, m=m, eta_d=eta_d, L_att=L_att)
        for n_layers in range(1, bounds.N_max + 1):
            for sw in bounds.switch_layers(n_layers):
                spec = RingCodeSpec(4, n_layers, switch_layer=sw)
                report = ring_rate(channel, timing, spec, lam)
                c = cost(report, channel, timing)
                if trace is not None and math.isfinite(c):
                    trace.append((c, report))
                if not math.isfinite(c):
                    continue
                key = (c, n_layers, m, sw)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (report, c)
    if best is None:
        return OptimizationResult(feasible=False, L=L, lam=lam, trace=trace)
    return OptimizationResult(feasible=True, L=L, lam=lam, report=best[0],
                              cost=best[1], trace=trace)


def sweep(L_list, lambda_list, timing: TimingParams,
          bounds: Optional[SearchBounds] = None,
          eta_d: float = 0.95, L_att: float = 20.0) -> list[OptimizationResult]:
    """One optimization per (L, lambda) cell."""
    if not L_list or not lambda_list:
        raise ValueError("sweep needs non-empty parameter lists")
    results = []
    for lam in lambda_list:
        for L in L_list:
            results.append(optimize(L, lam, timing, bounds, eta_d=eta_d, L_att=L_att))
    return results
