"""Large-scale parameter generation: delay spread, K-factor, shadow fading.

Every draw consumes Gaussians from the supplied stream in a fixed,
documented order so that golden test vectors survive refactors:
g1 -> delay spread, g2 -> K-factor, g3 -> shadow fading.  Spatially
consistent fields use one child stream per parameter, derived from the
seed as ``SeedSequence((seed, lane))`` with lanes 0/1/2 for DS/K/SF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .scenario import ScenarioParams


@dataclass(frozen=True)
class LspState:
    """One realization of the large-scale parameters of a link."""

    ds: float     # delay spread, seconds
    k_db: float   # Ricean K-factor, dB (-inf denotes a pure-NLOS build)
    sf_db: float  # shadow fading, dB

    def validate(self) -> "LspState":
        if not self.ds > 0:
            raise ValueError(f"delay spread must be positive (got {self.ds})")
        if math.isnan(self.k_db) or math.isnan(self.sf_db) or math.isinf(self.sf_db):
            raise ValueError("k_db and sf_db must be finite (k_db may be -inf)")
        return self


def _mix_matrix(scenario: ScenarioParams) -> np.ndarray:
    """Cholesky factor of the DS/K/SF cross-correlation matrix."""
    r = np.array(
        [
            [1.0, scenario.xcorr_ds_k, scenario.xcorr_ds_sf],
            [scenario.xcorr_ds_k, 1.0, scenario.xcorr_k_sf],
            [scenario.xcorr_ds_sf, scenario.xcorr_k_sf, 1.0],
        ]
    )
    try:
        return np.linalg.cholesky(r)
    except np.linalg.LinAlgError:
        raise ValueError("LSP cross-correlation matrix is not positive definite") from None


def draw_lsps(scenario: ScenarioParams, rng: np.random.Generator) -> LspState:
    """Draw one independent LSP realization.

    ds = 10**(mu_lgDS + sigma_lgDS*g1), k_db = mu_K + sigma_K*g2,
    sf_db = sigma_SF*g3, with g1, g2, g3 standard normal in that order.
    """
    g = rng.standard_normal(3)
    g = _mix_matrix(scenario) @ g
    return LspState(
        ds=10.0 ** (scenario.mu_lg_ds + scenario.sigma_lg_ds * g[0]),
        k_db=scenario.mu_k_db + scenario.sigma_k_db * g[1],
        sf_db=scenario.sigma_sf_db * g[2],
    )


def lsp_field_at(
    scenario: ScenarioParams,
    positions: Sequence[Sequence[float]],
    rng_seed: int,
) -> list[LspState]:
    """Spatially correlated LSPs at a list of positions.

    Each underlying Gaussian field has exponential autocorrelation
    exp(-d/d_decorr) with the scenario's per-parameter decorrelation
    distance, realized exactly on the given positions via the Cholesky
    factor of the covariance matrix.  Identical positions receive
    identical values, and the output is a deterministic function of
    (seed, positions).
    """
    if len(positions) == 0:
        raise ValueError("positions must be nonempty")
    pos = np.asarray(positions, dtype=float).reshape(len(positions), 3)
    uniq, inverse = np.unique(pos, axis=0, return_inverse=True)
    n = len(uniq)
    dist = np.linalg.norm(uniq[:, None, :] - uniq[None, :, :], axis=-1)

    fields = np.empty((3, len(pos)))
    decorr = (scenario.decorr_ds_m, scenario.decorr_k_m, scenario.decorr_sf_m)
    for lane, d0 in enumerate(decorr):
        cov = np.exp(-dist / d0)
        chol = np.linalg.cholesky(cov + 1e-12 * np.eye(n))
        g = np.random.default_rng(np.random.SeedSequence((rng_seed, lane))).standard_normal(n)
        fields[lane] = (chol @ g)[inverse]

    fields = _mix_matrix(scenario) @ fields
    return [
        LspState(
            ds=10.0 ** (scenario.mu_lg_ds + scenario.sigma_lg_ds * fields[0, i]),
            k_db=scenario.mu_k_db + scenario.sigma_k_db * fields[1, i],
            sf_db=scenario.sigma_sf_db * fields[2, i],
        )
        for i in range(len(pos))
    ]
