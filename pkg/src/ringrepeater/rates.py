"""End-to-end repeater figures of merit.

Secret key rate of the one-way chain: m equally spaced stations each
generate a two-qubit line of concatenated rings; neighboring stations'
rings are fused, and a Bell pair forms when every logical fusion succeeds
with no error-detection click. Key rate uses the six-state secret fraction
with one-way post-processing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from ringrepeater.analytics import FtFusionStats, ft_fusion_stats
from ringrepeater.ringcodes import RingCodeSpec, resource_counts


@dataclass(frozen=True)
class ChannelParams:
    """Repeater channel: total distance, station count, and efficiencies.

    L0 = L/(m+1) is the station spacing (at least 1 km), eta_t the fiber
    transmission per segment, and eta = eta_t * eta_d the total efficiency
    each photon experiences.
    """

    L: float
    m: int
    eta_d: float = 0.95
    L_att: float = 20.0

    def __post_init__(self):
        if self.L <= 0 or self.L_att <= 0:
            raise ValueError("distances must be positive")
        if self.m < 0:
            raise ValueError("station count cannot be negative")
        if not 0 < self.eta_d <= 1:
            raise ValueError("detection efficiency must lie in (0, 1]")
        if self.L0 < 1.0 - 1e-12:
            raise ValueError("station spacing below the 1 km limit")

    @property
    def L0(self) -> float:
        return self.L / (self.m + 1)

    @property
    def eta_t(self) -> float:
        return math.exp(-self.L0 / self.L_att)

    @property
    def eta(self) -> float:
        return self.eta_t * self.eta_d


@dataclass(frozen=True)
class TimingParams:
    """Operation durations in nanoseconds."""

    tau_gen: float = 1.0
    tau_cz: float = 10.0
    tau_m: float = 10.0

    def __post_init__(self):
        if min(self.tau_gen, self.tau_cz, self.tau_m) <= 0:
            raise ValueError("durations must be positive")


@dataclass(frozen=True)
class RateReport:
    """Secret key rate and the configuration that produced it."""

    R: float
    q: float
    mu: float
    P_B: float
    tau0: float
    m: int
    N: int
    switch_layer: int
    p_s: float
    eps_s: float
    eps_d: float

    @property
    def config(self) -> tuple[int, int, int]:
        return (self.m, self.N, self.switch_layer)

    @property
    def N_E(self) -> int:
        return self.N + 1  # memory spins plus the optically active one

    def to_json(self) -> str:
        return json.dumps(
            {
                "R_hz": self.R,
                "q": self.q,
                "mu": self.mu,
                "P_B": self.P_B,
                "tau0_s": self.tau0,
                "m": self.m,
                "N": self.N,
                "Ntilde": self.switch_layer,
                "N_E": self.N_E,
                "p_s": self.p_s,
                "eps_s": self.eps_s,
                "eps_d": self.eps_d,
            },
            indent=2,
            sort_keys=True,
        )

    def csv_row(self) -> dict:
        return {
            "m": self.m,
            "N": self.N,
            "Ntilde": self.switch_layer,
            "R_hz": self.R,
            "q": self.q,
            "mu": self.mu,
            "eps_d": self.eps_d,
            "tau0_s": self.tau0,
            "NE": self.N_E,
        }


def bell_probability(p_s_link: float, m: int) -> float:
    """All m+1 link fusions succeed."""
    if not 0.0 <= p_s_link <= 1.0:
        raise ValueError("link success probability out of range")
    if m < 0:
        raise ValueError("station count cannot be negative")
    return p_s_link ** (m + 1)


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def secret_fraction(q: float) -> float:
    """Six-state secret fraction with one-way post-processing, clamped at 0.

    mu(q) = 1 - H(q) - q - (1-q) H((1 - 3q/2)/(1 - q)); negative values mean
    no key can be distilled and are reported as zero.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError("Bell error rate must lie in [0, 1)")
    if q == 0.0:
        return 1.0
    inner = (1.0 - 1.5 * q) / (1.0 - q)
    if inner < 0.0:
        return 0.0
    mu = 1.0 - _binary_entropy(q) - q - (1.0 - q) * _binary_entropy(inner)
    return max(0.0, mu)


def end_to_end_error(eps_s: float, m: int) -> float:
    """q = 1 - (1 - eps_s)^(m+1) for independent per-station errors."""
    if not 0.0 <= eps_s <= 1.0:
        raise ValueError("per-station error out of range")
    if m < 0:
        raise ValueError("station count cannot be negative")
    return 1.0 - (1.0 - eps_s) ** (m + 1)


def generation_time(spec: RingCodeSpec, timing: TimingParams) -> float:
    """Per-station generation time tau0 in seconds.

    The two-qubit line doubles all single-ring operations, plus the line
    join: one Hadamard (costed at the entangling-gate time, no separate
    single-qubit spin-gate time is given), two entangling gates, and one
    spin measurement.
    """
    f_cz, f_m, f_p = resource_counts(spec)
    single = f_p * timing.tau_gen + f_cz * timing.tau_cz + f_m * timing.tau_m
    join = timing.tau_cz + 2 * timing.tau_cz + timing.tau_m
    return (2 * single + join) * 1e-9


def ring_rate(channel: ChannelParams, timing: TimingParams, spec: RingCodeSpec,
              lam: float) -> RateReport:
    """Secret key rate of the ring repeater chain.

    R = (1 - eps_d)^(m+1) mu(q) p_s^(m+1) / tau0 with per-station fusion
    statistics evaluated at the link transmission eta_t * eta_d; an
    error-detection click anywhere aborts the round.
    """
    stats: FtFusionStats = ft_fusion_stats(channel.eta, lam, spec.N, spec.switch_layer)
    m = channel.m
    q = end_to_end_error(stats.eps, m)
    mu = secret_fraction(q) if q < 1.0 else 0.0
    p_b = bell_probability(stats.p_s, m)
    tau0 = generation_time(spec, timing)
    rate = (1.0 - stats.eps_d) ** (m + 1) * mu * p_b / tau0
    return RateReport(
        R=rate,
        q=q,
        mu=mu,
        P_B=p_b,
        tau0=tau0,
        m=m,
        N=spec.N,
        switch_layer=spec.switch_layer,
        p_s=stats.p_s,
        eps_s=stats.eps,
        eps_d=stats.eps_d,
    )
