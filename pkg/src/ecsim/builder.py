"""Small-scale channel builder: cluster delays, powers, and CIR assembly.

Cluster delays follow the exponential law

    tau_n = -r_tau * DS * ln(x_n),        x_n uniform in (0, 1],

and the unnormalized cluster powers follow the single-slope profile

    P_n = exp(-tau_n * (r_tau - 1) / (r_tau * DS)) * 10**(z_n / 10),

with z_n ~ N(0, zeta^2) the per-cluster shadow term.  Powers consume the
raw (pre-shift) delays; the min-subtraction only affects emitted delays
and cancels out of the power normalization.

In LOS condition the earliest-delay cluster slot carries the
deterministic LOS component (the cluster count includes it) and the
remaining clusters form the stochastic multipath.  The emitted delays of
a LOS build are stretched by the K-dependent scaling constant

    C_tau = 0.7705 - 0.0433*K + 0.0002*K^2 + 0.000017*K^3   (K in dB)

when the scenario enables ``los_delay_scaling``, compensating the delay
spread compression caused by the dominant zero-delay component.

Stream consumption order per build (fixed, documented): x_1..x_N, then
z_1..z_N, then one uniform phase per stochastic cluster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

import numpy as np

from .largescale import LspState
from .scenario import ScenarioParams, ValidationError

PURE_NLOS_K_DB = float("-inf")


class DegenerateDraw(ValueError):
    """A uniform draw of exactly zero makes ln(x) undefined."""


class AllZeroPower(ValueError):
    """Normalization requires at least one strictly positive power."""


class MissingLOS(ValueError):
    """The operation requires a CIR that carries a LOS cluster."""


class ClusterOrigin(Enum):
    LOS = "los"
    STATISTICAL = "statistical"
    GROUND_REFLECTION = "ground-reflection"


class BuilderTag(Enum):
    EC = "ec"
    LC = "lc"
    NONE = "none"


@dataclass(frozen=True)
class ClusterDraw:
    """The random variates behind one cluster: x in (0,1], z in dB."""

    x: float
    z_db: float


@dataclass(frozen=True)
class Cluster:
    delay: float                # excess delay relative to the LOS, seconds
    power: float                # linear power
    phase: float                # radians in [0, 2*pi)
    origin: ClusterOrigin = ClusterOrigin.STATISTICAL
    builder_tag: BuilderTag = BuilderTag.NONE


@dataclass(frozen=True)
class BuilderTrace:
    """Raw variates and intermediates kept for oracle comparison."""

    x: tuple[float, ...]
    z_db: tuple[float, ...]
    raw_delays: tuple[float, ...]
    raw_powers: tuple[float, ...]


@dataclass(frozen=True)
class Cir:
    """Wideband CIR: clusters ordered by delay plus link bookkeeping.

    ``total_power_target_db`` is the net link loss (pathloss minus shadow
    fading); the linear cluster powers sum to 10**(-target/10).
    """

    clusters: tuple[Cluster, ...]
    los_delay_abs: float
    total_power_target_db: float
    lsp: LspState
    trace: BuilderTrace | None = None

    @property
    def target_linear(self) -> float:
        return 10.0 ** (-self.total_power_target_db / 10.0)

    def total_power(self) -> float:
        return sum(c.power for c in self.clusters)

    def los_cluster(self) -> Cluster:
        for c in self.clusters:
            if c.origin is ClusterOrigin.LOS:
                return c
        raise MissingLOS("CIR has no LOS cluster")

    def has_los(self) -> bool:
        return any(c.origin is ClusterOrigin.LOS for c in self.clusters)

    def nlos_clusters(self) -> tuple[Cluster, ...]:
        return tuple(c for c in self.clusters if c.origin is not ClusterOrigin.LOS)


def los_delay_scale(k_db: float) -> float:
    """K-dependent delay stretch applied in LOS condition (clamped)."""
    c = 0.7705 - 0.0433 * k_db + 0.0002 * k_db**2 + 0.000017 * k_db**3
    return float(min(max(c, 0.05), 2.0))


def raw_cluster_delays(
    scenario: ScenarioParams, lsp: LspState, draws: Sequence[ClusterDraw]
) -> np.ndarray:
    """Pre-shift delays -r_tau*DS*ln(x_n), in draw order."""
    x = np.array([d.x for d in draws], dtype=float)
    if np.any(x <= 0.0):
        raise DegenerateDraw("uniform variate x must lie in (0, 1]")
    return -scenario.r_tau * lsp.ds * np.log(x)


def draw_cluster_delays(
    scenario: ScenarioParams, lsp: LspState, draws: Sequence[ClusterDraw]
) -> np.ndarray:
    """Emitted delays: raw delays shifted so min(tau) = 0, ascending."""
    raw = raw_cluster_delays(scenario, lsp, draws)
    shifted = np.sort(raw) - raw.min()
    return shifted


def draw_cluster_powers(
    scenario: ScenarioParams,
    lsp: LspState,
    delays_raw: Sequence[float],
    draws: Sequence[ClusterDraw],
) -> np.ndarray:
    """Unnormalized cluster powers from the pre-shift delays."""
    tau = np.asarray(delays_raw, dtype=float)
    z = np.array([d.z_db for d in draws], dtype=float)
    if tau.shape != z.shape:
        raise ValueError("delays_raw and draws must have matching length")
    slope = (scenario.r_tau - 1.0) / (scenario.r_tau * lsp.ds)
    return np.exp(-tau * slope) * 10.0 ** (z / 10.0)


def apply_k_and_normalize(
    clusters: Sequence[Cluster], lsp: LspState, total_power_target_db: float
) -> Cir:
    """Scale NLOS powers to the target and realize the Ricean K-factor.

    With a finite K the NLOS powers are scaled to sum to 1/(K_lin+1) of
    the target and a LOS cluster with power K_lin/(K_lin+1) is inserted
    at zero delay (phase is a placeholder until geometry assigns it).
    With the pure-NLOS sentinel (k_db = -inf) the powers are scaled to
    the full target and no LOS cluster is added.
    """
    if not clusters:
        raise AllZeroPower("cluster list is empty")
    total = sum(c.power for c in clusters)
    if not total > 0.0:
        raise AllZeroPower("all cluster powers are zero")
    target = 10.0 ** (-total_power_target_db / 10.0)

    out: list[Cluster] = []
    if math.isinf(lsp.k_db) and lsp.k_db < 0:
        scale = target / total
    else:
        k_lin = 10.0 ** (lsp.k_db / 10.0)
        scale = target / ((k_lin + 1.0) * total)
        out.append(
            Cluster(
                delay=0.0,
                power=target * k_lin / (k_lin + 1.0),
                phase=0.0,
                origin=ClusterOrigin.LOS,
            )
        )
    out.extend(replace(c, power=c.power * scale) for c in clusters)
    out.sort(key=lambda c: (c.delay, c.origin is not ClusterOrigin.LOS))
    return Cir(
        clusters=tuple(out),
        los_delay_abs=0.0,
        total_power_target_db=total_power_target_db,
        lsp=lsp,
    )


def build_statistical_cir(
    scenario: ScenarioParams,
    lsp: LspState,
    rng: np.random.Generator,
    builder_tag: BuilderTag = BuilderTag.NONE,
    total_power_target_db: float = 0.0,
) -> Cir:
    """Compose draws -> delays -> powers -> normalization into a CIR.

    In LOS condition (finite k_db) the earliest cluster becomes the LOS
    slot: its power draw is discarded and the other N-1 clusters form
    the normalized stochastic set.  The pure-NLOS sentinel keeps all N
    clusters.  Stochastic clusters get independent uniform phases.
    """
    n = scenario.num_clusters
    los_mode = not (math.isinf(lsp.k_db) and lsp.k_db < 0)
    if los_mode and n < 2:
        raise ValidationError("scenario.num_clusters must be >= 2 in LOS condition")

    x = 1.0 - rng.random(n)  # uniform in (0, 1]
    z = scenario.zeta_db * rng.standard_normal(n)
    draws = [ClusterDraw(x=float(xi), z_db=float(zi)) for xi, zi in zip(x, z)]

    raw = raw_cluster_delays(scenario, lsp, draws)
    order = np.argsort(raw, kind="stable")
    shifted = raw[order] - raw[order[0]]
    if los_mode and scenario.los_delay_scaling:
        shifted = shifted / los_delay_scale(lsp.k_db)
    powers = draw_cluster_powers(scenario, lsp, raw, draws)[order]

    if los_mode:
        stoch_delays, stoch_powers = shifted[1:], powers[1:]
    else:
        stoch_delays, stoch_powers = shifted, powers

    phases = rng.uniform(0.0, 2.0 * math.pi, len(stoch_delays))
    stochastic = [
        Cluster(delay=float(t), power=float(p), phase=float(ph), builder_tag=builder_tag)
        for t, p, ph in zip(stoch_delays, stoch_powers, phases)
    ]
    cir = apply_k_and_normalize(stochastic, lsp, total_power_target_db)
    trace = BuilderTrace(
        x=tuple(float(v) for v in x),
        z_db=tuple(float(v) for v in z),
        raw_delays=tuple(float(v) for v in raw),
        raw_powers=tuple(float(v) for v in draw_cluster_powers(scenario, lsp, raw, draws)),
    )
    return replace(cir, trace=trace)
