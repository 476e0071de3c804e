"""Run configuration and tolerance defaults shared by every numerical routine."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

PRECISION_MODES = ("exact", "float64", "float-extended")


@dataclass(frozen=True)
class Tolerances:
    # polynomial algebra
    pivot: float = 1e-9
    roundtrip: float = 1e-10
    # Bethe ansatz
    bae_residual: float = 1e-12
    hessian: float = 1e-10
    pole: float = 1e-12
    root_collision: float = 1e-8
    newton_max_iter: int = 50
    # spectra
    commutator: float = 1e-12
    imag: float = 1e-8
    separation: float = 1e-6
    eigen_match: float = 1e-6
    eigen_match_margin: float = 1e-4
    eigen_residual: float = 1e-12
    snap: float = 0.25
    snap_margin: float = 0.3
    # labelling
    realness: float = 1e-8
    theta_match: float = 1e-8
    wronskian_match: float = 1e-8
    divergence: float = 1e6
    collision: float = 1e-6

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"tolerance {f.name} must be positive")

    def replace(self, **overrides) -> "Tolerances":
        known = {f.name: f.type for f in dataclasses.fields(self)}
        cast = {}
        for key, value in overrides.items():
            if key not in known:
                raise KeyError(f"unknown tolerance {key!r}")
            cast[key] = int(value) if key == "newton_max_iter" else float(value)
        return dataclasses.replace(self, **cast)


@dataclass(frozen=True)
class RunConfig:
    precision: str = "float64"
    tol: Tolerances = field(default_factory=Tolerances)
    # gluing scale R = asymptotic_scale * (1 + max|z|)
    asymptotic_scale: float = 1e3
    # EL section is followed to s = z_n + section_reach * gap
    section_reach: float = 1e9
    transport_t0: float = 1e2
    transport_tmax: float = 1e6
    multistarts: int = 32
    seed: int = 0
    extended_dps: int = 32

    def __post_init__(self):
        if self.precision not in PRECISION_MODES:
            raise ValueError(f"precision must be one of {PRECISION_MODES}")
        if self.asymptotic_scale <= 1 or self.section_reach <= 1:
            raise ValueError("scales must exceed 1")

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT = RunConfig()
