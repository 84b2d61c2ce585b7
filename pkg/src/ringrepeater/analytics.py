"""Closed-form and recursive probability engine for concatenated ring codes.

Layer convention: layer 0 is a physical photon, layer 1 a bare four-qubit
ring, layer k a ring of layer-(k-1) objects. Fusion-distribution layers
count the fused objects' constituents instead, with layer 1 the physical
fusion and layer 2 the bare-ring logical fusion; this mirrors the recursion
base (a bare-ring fusion composes physical fusions one level down).

All recursions run in 64-bit floats; probabilities are clamped to [0, 1]
only at the output boundary, with a warning if clamping exceeds 1e-9.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

_CLAMP_TOL = 1e-9


def _clamp(p: float, name: str) -> float:
    if p < -_CLAMP_TOL or p > 1.0 + _CLAMP_TOL:
        warnings.warn(f"{name} = {p!r} clamped to [0, 1]", RuntimeWarning, stacklevel=3)
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class FusionDistribution:
    """Logical-fusion outcome probabilities at one layer.

    For layers >= 2 this is a joint distribution (sums to one, p_y = 0).
    At the physical base layer the failure entries are per-configuration
    probabilities (the chance of failing in that basis when it is the
    configured failure basis), not a joint distribution.
    """

    p_s: float
    p_x: float
    p_y: float
    p_z: float
    p_l: float

    def as_dict(self) -> dict[str, float]:
        return {"p_s": self.p_s, "p_x": self.p_x, "p_y": self.p_y,
                "p_z": self.p_z, "p_l": self.p_l}


@dataclass(frozen=True)
class PauliMeasStats:
    """Logical Pauli measurement statistics at one layer.

    eta_bar: logical transmission; eps: undetected logical error;
    eps_d: detection probability; zeta: clean probability. The last three
    are conditioned on transmission and partition unity.
    """

    eta_bar: float
    eps: float
    eps_d: float
    zeta: float


@dataclass(frozen=True)
class FtFusionStats:
    """Fault-tolerant logical fusion statistics.

    eps is the undetected parity error normalized by the fusion success
    probability (as the fuse-all recursion defines it); conditional_error
    additionally conditions on not detecting an error.
    """

    p_s: float
    eps: float
    eps_d: float
    zeta: float

    @property
    def conditional_error(self) -> float:
        denom = self.eps + self.zeta
        return self.eps / denom if denom > 0 else 0.0


# -- transmission -------------------------------------------------------------


def _transmission_step(eta: float) -> float:
    return eta**4 + 4 * (1 - eta) * eta**3 + 2 * (1 - eta) ** 2 * eta**2


def logical_transmission(eta: float, N: int) -> float:
    """Transmission of a passive logical Pauli measurement at depth N.

    N=1 is the bare-ring closed form; deeper layers iterate the same map
    on the logical transmission of the layer below.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if N < 1:
        raise ValueError("N must be at least 1")
    value = eta
    for _ in range(N):
        value = _transmission_step(value)
    return _clamp(value, "logical transmission")


# -- Pauli measurement statistics ---------------------------------------------


def pauli_meas_stats(eta: float, lam: float, N: int) -> PauliMeasStats:
    """Error-detection statistics of the passive logical Pauli measurement.

    Base layer: eps0 = 2*lambda/3 (depolarizing), no detection. Each layer
    measures both weight-2 patterns; disagreement heralds an error, and a
    detection click below selects the other pattern above.
    """
    if not 0.0 <= lam <= 0.75:
        raise ValueError("lambda must lie in [0, 3/4] for a depolarizing channel")
    if N < 1:
        raise ValueError("N must be at least 1")
    eta_k = eta
    eps = 2.0 * lam / 3.0
    eps_d = 0.0
    zeta = 1.0 - eps
    for _ in range(N):
        eta_next = _transmission_step(eta_k)
        if eta_next <= 0.0:
            # conditioning on transmission of an impossible event
            return PauliMeasStats(eta_bar=0.0, eps=0.0, eps_d=0.0, zeta=1.0)
        e4 = eta_k**4
        new_eps = (
            e4 * (4 * eps**2 * zeta**2
                  + 2 * (4 * eps_d * (1 - eps_d) + 2 * eps_d**2) * eps * zeta)
            + (eta_next - e4) * 2 * eps * zeta
        ) / eta_next
        new_eps_d = (
            (eta_next - e4) * (2 * eps_d * (1 - eps_d) + eps_d**2)
            + e4 * (4 * (eps * zeta**3 + eps**3 * zeta)
                    + 4 * (eps_d**2 * (1 - eps_d) ** 2 + eps_d**3 * (1 - eps_d))
                    + eps_d**4)
        ) / eta_next
        eps, eps_d = new_eps, new_eps_d
        zeta = 1.0 - eps - eps_d
        eta_k = eta_next
    return PauliMeasStats(
        eta_bar=_clamp(eta_k, "eta_bar"),
        eps=_clamp(eps, "eps"),
        eps_d=_clamp(eps_d, "eps_d"),
        zeta=_clamp(zeta, "zeta"),
    )


# -- fusion success -------------------------------------------------------------


def bare_ring_fusion_success(eta: float) -> float:
    """Success probability of the adaptive bare-ring logical fusion.

    Fuse code-qubit pairs in emission order until one succeeds, then
    complete the two logical parities with single-qubit measurements:
    p_s = p_f = eta^2/2 per physical fusion, p_l = 1 - eta^2.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    p_s = p_f = eta**2 / 2.0
    p_l = 1.0 - eta**2
    value = (
        p_s * (eta**3 + 3 * (1 - eta) * eta**2) ** 2
        + p_f * p_s * (eta**2 + 2 * (1 - eta) * eta) ** 2
        + p_l * p_s * (eta**4 + eta**2 * p_f)
        + p_f**2 * p_s * (eta**2 + p_f)
    )
    return _clamp(value, "bare ring fusion success")


def concat_fusion_distribution(eta: float, N: int) -> FusionDistribution:
    """Adaptive logical-fusion outcome distribution at layer N.

    Layer 1 is the physical fusion (per-configuration failure entries);
    layer 2 reduces exactly to the bare-ring closed form. The recursion
    advances the per-object transmission with the logical-transmission map
    one level behind the fusion layer.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if N < 1:
        raise ValueError("N must be at least 1")
    p_s = p_x = p_y = p_z = eta**2 / 2.0
    p_l = 1.0 - eta**2
    tilde_x = tilde_z = 0.0
    eta_k = eta  # transmission of the objects being fused (layer N-1)
    for _ in range(N - 1):
        e = eta_k
        new_s = (
            p_s * (e**3 + 3 * (1 - e) * e**2) ** 2
            + p_x * p_s * (e**2 + 2 * (1 - e) * e) ** 2
            + (p_l + tilde_z) * p_s * (e**4 + e**2 * p_y)
            + p_x**2 * p_s * (e**2 + p_z)
            + tilde_x * p_l * p_s * e**2
        )
        new_x = p_l * p_s * (1 - e**2) * (e**2 + p_y) + p_x**2 * p_z**2
        new_z = (
            p_s * e**2 * (2 * e**2 * (1 - e) ** 2 + 4 * e * (1 - e) ** 3 + (1 - e) ** 4)
            + p_x * p_s * (1 - (e**2 + 2 * e * (1 - e)) ** 2)
            + p_x * p_l * e**4
            + p_l**2 * e**4
        )
        new_y = 0.0
        new_l = 1.0 - new_s - new_x - new_y - new_z
        p_s, p_x, p_y, p_z, p_l = new_s, new_x, new_y, new_z, new_l
        tilde_x, tilde_z = p_x, p_z
        eta_k = _transmission_step(eta_k)
    return FusionDistribution(
        p_s=_clamp(p_s, "p_s"),
        p_x=_clamp(p_x, "p_x"),
        p_y=_clamp(p_y, "p_y"),
        p_z=_clamp(p_z, "p_z"),
        p_l=_clamp(p_l, "p_l"),
    )


# -- fault-tolerant fusion -------------------------------------------------------


def _xor_combine(*components: tuple[float, float, float]) -> tuple[float, float, float]:
    """Compose (error, detected, clean) components of a parity estimate.

    A flag anywhere flags the parity; in the unflagged sector flips
    accumulate as XOR. Each component satisfies e + d + z = 1 and so does
    the result.
    """
    e_tot, d_tot, z_tot = 0.0, 0.0, 1.0
    for (e, d, z) in components:
        e_new = e_tot * z + z_tot * e
        z_new = z_tot * z + e_tot * e
        d_new = 1.0 - (1.0 - d_tot) * (1.0 - d)
        e_tot, d_tot, z_tot = e_new, d_new, z_new
    return e_tot, d_tot, z_tot


def _switch_layer_seed(eta: float, lam: float, switch: int) -> tuple[float, float, float]:
    """(eps, eps_d, zeta) of the parities leaving the adaptive layers.

    Errors in the adaptive regime cannot be detected or corrected from
    fusion outcomes, so each parity accumulates: the two photons of the one
    successful physical fusion flip it with probability 2*lambda/3 each,
    and every adaptive layer above contributes two single-qubit logical
    measurement chains whose statistics follow the Pauli recursion.
    """
    eps0 = 2.0 * lam / 3.0
    components = [(eps0, 0.0, 1.0 - eps0), (eps0, 0.0, 1.0 - eps0)]
    for layer in range(2, switch + 1):
        if layer == 2:
            sub = (eps0, 0.0, 1.0 - eps0)  # completion singles are photons
        else:
            s = pauli_meas_stats(eta, lam, layer - 2)
            sub = (s.eps, s.eps_d, s.zeta)
        components.append(sub)
        components.append(sub)
    return _xor_combine(*components)


def ft_fusion_stats(eta: float, lam: float, N: int, switch: int) -> FtFusionStats:
    """Fault-tolerant logical fusion: loss protection below the switch
    layer, fuse-all error protection above it.

    Layers <= switch follow the adaptive recursion; layers above attempt a
    fusion of every code-qubit pair, and when all four succeed the doubled
    parities allow the same detect-and-select correction as the Pauli
    measurement. The fuse-all recursion needs joint failure inputs, so it
    starts no lower than layer 3 (switch >= 2 whenever N > switch).
    """
    if not 1 <= switch <= N:
        raise ValueError("switch layer must satisfy 1 <= switch <= N")
    if N > switch and switch < 2:
        raise ValueError("fuse-all layers need joint failure inputs: switch must be >= 2")
    dist = concat_fusion_distribution(eta, switch)
    if N == switch:
        eps, eps_d, zeta = _switch_layer_seed(eta, lam, switch)
        return FtFusionStats(p_s=dist.p_s, eps=eps, eps_d=eps_d, zeta=zeta)
    p_s, p_x, p_y, p_z, p_l = dist.p_s, dist.p_x, dist.p_y, dist.p_z, dist.p_l
    eps, eps_d, zeta = _switch_layer_seed(eta, lam, switch)
    eta_k = eta
    for _ in range(switch - 1):
        eta_k = _transmission_step(eta_k)
    for _ in range(switch + 1, N + 1):
        e = eta_k
        new_s = (
            p_s**4
            + p_s * p_z * (e**2 + 2 * e * (1 - e)) ** 2
            + p_s * p_x * e**2
            + p_s * (p_x + p_z + 2 * p_l) * e**4
            + p_s**2 * ((p_l + p_z) * e**2 + p_x)
            + p_s**3 * (1 - p_s)
        )
        if new_s <= 0.0:
            return FtFusionStats(p_s=0.0, eps=0.0, eps_d=0.0, zeta=1.0)
        new_eps_d = p_s**4 * (
            4 * (eps * zeta**3 + eps**3 * zeta)
            + 4 * (eps_d**2 * (1 - eps_d) ** 2 + eps_d**3 * (1 - eps_d))
            + eps_d**4
        ) / new_s
        new_eps = p_s**4 * (
            4 * eps**2 * zeta**2
            + 2 * (4 * eps_d * (1 - eps_d) + 2 * eps_d**2) * eps * zeta
        ) / new_s
        # failure/loss structure above the switch follows the adaptive
        # bookkeeping with the fuse-all success fed in
        new_x = p_l * p_s * (1 - e**2) * (e**2 + p_y) + p_x**2 * p_z**2
        new_z = (
            p_s * e**2 * (2 * e**2 * (1 - e) ** 2 + 4 * e * (1 - e) ** 3 + (1 - e) ** 4)
            + p_x * p_s * (1 - (e**2 + 2 * e * (1 - e)) ** 2)
            + p_x * p_l * e**4
            + p_l**2 * e**4
        )
        p_s = new_s
        p_x, p_y, p_z = new_x, 0.0, new_z
        p_l = max(0.0, 1.0 - p_s - p_x - p_z)
        eps, eps_d = new_eps, new_eps_d
        zeta = 1.0 - eps - eps_d
        eta_k = _transmission_step(eta_k)
    return FtFusionStats(
        p_s=_clamp(p_s, "p_s"),
        eps=_clamp(eps, "eps"),
        eps_d=_clamp(eps_d, "eps_d"),
        zeta=_clamp(zeta, "zeta"),
    )
