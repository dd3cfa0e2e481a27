"""Scenario tables, link geometry, and pathloss models.

A scenario bundles the statistical parameters that drive channel
generation: the delay-scaling factor, cluster count, the lognormal
delay-spread law, the Ricean K-factor and shadow-fading laws, the
per-cluster shadowing spread, and spatial decorrelation distances.
Scenario values are immutable after construction and safe to share
across parallel workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

SPEED_OF_LIGHT = 299792458.0  # m/s


class ParseError(ValueError):
    """A config file (or --set override) could not be parsed."""


class ValidationError(ValueError):
    """A configuration value violates an invariant; message names it."""


class PathlossModel(Enum):
    FREE_SPACE = "free-space"
    INF_LOS = "inf-los"


@dataclass(frozen=True)
class ScenarioParams:
    """Statistical scenario table for one propagation condition.

    ``mu_lg_ds``/``sigma_lg_ds`` parameterize the lognormal delay spread
    (log10 seconds), ``mu_k_db``/``sigma_k_db`` the normal Ricean
    K-factor in dB, ``sigma_sf_db`` the shadow fading, and ``zeta_db``
    the per-cluster shadowing spread.  ``los_delay_scaling`` enables the
    K-factor dependent stretching of cluster delays in LOS condition.
    """

    name: str
    r_tau: float
    num_clusters: int
    mu_lg_ds: float
    sigma_lg_ds: float
    mu_k_db: float
    sigma_k_db: float
    sigma_sf_db: float
    zeta_db: float
    decorr_ds_m: float
    decorr_k_m: float
    decorr_sf_m: float
    pathloss_model: PathlossModel = PathlossModel.FREE_SPACE
    los_delay_scaling: bool = True
    xcorr_ds_k: float = 0.0
    xcorr_ds_sf: float = 0.0
    xcorr_k_sf: float = 0.0

    def validate(self) -> "ScenarioParams":
        if not self.r_tau > 1.0:
            raise ValidationError(f"scenario.r_tau must exceed 1 (got {self.r_tau})")
        if self.num_clusters < 1:
            raise ValidationError(f"scenario.num_clusters must be >= 1 (got {self.num_clusters})")
        for key in ("sigma_lg_ds", "sigma_k_db", "sigma_sf_db", "zeta_db"):
            if getattr(self, key) < 0:
                raise ValidationError(f"scenario.{key} must be >= 0")
        for key in ("decorr_ds_m", "decorr_k_m", "decorr_sf_m"):
            if not getattr(self, key) > 0:
                raise ValidationError(f"scenario.{key} must be > 0")
        for key in ("xcorr_ds_k", "xcorr_ds_sf", "xcorr_k_sf"):
            if not -1.0 <= getattr(self, key) <= 1.0:
                raise ValidationError(f"scenario.{key} must lie in [-1, 1]")
        return self


@dataclass(frozen=True)
class GeometryLink:
    """Base-station / terminal geometry for one link."""

    bs_position: tuple[float, float, float]
    ue_position: tuple[float, float, float]
    carrier_frequency: float

    def validate(self) -> "GeometryLink":
        if tuple(self.bs_position) == tuple(self.ue_position):
            raise ValidationError("geometry: bs_position must differ from ue_position")
        if not self.carrier_frequency > 0:
            raise ValidationError("geometry.carrier_hz must be > 0")
        return self

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def distance_3d(self) -> float:
        return math.dist(self.bs_position, self.ue_position)

    def with_ue_height(self, z: float) -> "GeometryLink":
        x, y, _ = self.ue_position
        return GeometryLink(self.bs_position, (x, y, z), self.carrier_frequency)


def pathloss_db(link: GeometryLink, scenario: ScenarioParams) -> float:
    """Pathloss of the direct link in dB.

    Free-space mode evaluates 20*log10(4*pi*d*f/c).  Table mode uses the
    indoor-factory LOS fit from 3GPP TR 38.901 Table 7.4.1-1:
    31.84 + 21.50*log10(d_3D) + 19.00*log10(f_GHz).
    """
    d = link.distance_3d
    if scenario.pathloss_model is PathlossModel.FREE_SPACE:
        return 20.0 * math.log10(4.0 * math.pi * d * link.carrier_frequency / SPEED_OF_LIGHT)
    f_ghz = link.carrier_frequency / 1e9
    return 31.84 + 21.50 * math.log10(d) + 19.00 * math.log10(f_ghz)
