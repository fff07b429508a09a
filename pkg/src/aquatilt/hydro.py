"""Medium-dependent environmental forces.

Gravity, buoyancy with its restoring torque, quadratic + linear drag and
diagonal added mass. Depth is the world z coordinate (NED, surface at
z = 0); the air/water handover is a linear ramp over a thin submersion
band, since transition hydrodynamics are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frames import BodyWrench, GeometryParams, VehicleState, rotate_world_to_body, vec3

GRAVITY = 9.81


@dataclass(frozen=True)
class Medium:
    """Per-axis drag and added-mass coefficients of one fluid."""

    density: float
    drag_linear: np.ndarray = field(default_factory=vec3)
    drag_quadratic: np.ndarray = field(default_factory=vec3)
    added_mass: np.ndarray = field(default_factory=lambda: np.zeros(6))
    rot_drag_quadratic: np.ndarray = field(default_factory=vec3)

    def __post_init__(self):
        if self.density <= 0:
            raise ValueError("density must be positive")
        for name in ("drag_linear", "drag_quadratic", "added_mass",
                     "rot_drag_quadratic"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if np.any(arr < 0):
                raise ValueError(f"{name} entries must be non-negative")
            object.__setattr__(self, name, arr)


def air_medium() -> Medium:
    return Medium(
        density=1.225,
        drag_linear=vec3(0.0, 0.0, 0.0),
        drag_quadratic=vec3(0.25, 0.25, 0.35),
        added_mass=np.zeros(6),
        rot_drag_quadratic=vec3(0.002, 0.002, 0.002),
    )


def water_medium(g: GeometryParams | None = None) -> Medium:
    g = g or GeometryParams()
    # added mass: 30% of mass translational, 20% of inertia rotational
    inertia_diag = np.diag(np.asarray(g.inertia, dtype=float))
    return Medium(
        density=1000.0,
        drag_linear=vec3(2.0, 2.0, 3.0),
        drag_quadratic=vec3(45.0, 45.0, 55.0),
        added_mass=np.concatenate([0.3 * g.mass * np.ones(3),
                                   0.2 * inertia_diag]),
        rot_drag_quadratic=vec3(0.6, 0.6, 0.8),
    )


def vacuum_medium() -> Medium:
    """Drag-free, buoyancy-free preset for integrator verification."""
    return Medium(density=1e-9)


@dataclass(frozen=True)
class BuoyancyModel:
    displaced_volume: float = 1.63e-3
    cob_offset: np.ndarray = field(default_factory=lambda: vec3(0, 0, -0.03))
    submersion_band: float = 0.2

    def __post_init__(self):
        if self.displaced_volume <= 0:
            raise ValueError("displaced_volume must be positive")
        if self.submersion_band <= 0:
            raise ValueError("submersion_band must be positive")
        object.__setattr__(self, "cob_offset",
                           np.asarray(self.cob_offset, dtype=float))


def submerged_fraction(z: float, band: float) -> float:
    """0 fully in air, 1 fully in water, linear ramp across the band."""
    if z <= -band / 2:
        return 0.0
    if z >= band / 2:
        return 1.0
    return (z + band / 2) / band


def medium_at_depth(z: float, air: Medium, water: Medium,
                    band: float) -> tuple[Medium, float]:
    """Blend air/water properties linearly by submerged fraction."""
    f = submerged_fraction(z, band)
    if f == 0.0:
        return air, 0.0
    if f == 1.0:
        return water, 1.0
    mix = Medium(
        density=(1 - f) * air.density + f * water.density,
        drag_linear=(1 - f) * air.drag_linear + f * water.drag_linear,
        drag_quadratic=(1 - f) * air.drag_quadratic + f * water.drag_quadratic,
        added_mass=(1 - f) * air.added_mass + f * water.added_mass,
        rot_drag_quadratic=((1 - f) * air.rot_drag_quadratic
                            + f * water.rot_drag_quadratic),
    )
    return mix, f


def buoyancy_wrench(state: VehicleState, b: BuoyancyModel,
                    water_density: float, fraction: float,
                    gravity: float = GRAVITY) -> BodyWrench:
    """Buoyant force at the center of buoyancy, in the body frame.

    The offset between the centers of buoyancy and gravity provides the
    restoring torque: moment = cob_offset x F_body.
    """
    if fraction <= 0.0:
        return BodyWrench()
    magnitude = water_density * gravity * b.displaced_volume * fraction
    force_world = vec3(0.0, 0.0, -magnitude)  # up is -z in NED
    force_body = rotate_world_to_body(state.attitude, force_world)
    moment = np.cross(b.cob_offset, force_body)
    return BodyWrench(force_body, moment)


def gravity_wrench(state: VehicleState, mass: float,
                   gravity: float = GRAVITY) -> BodyWrench:
    force_world = vec3(0.0, 0.0, mass * gravity)
    return BodyWrench(rotate_world_to_body(state.attitude, force_world), vec3())


def drag_wrench(state: VehicleState, m: Medium) -> BodyWrench:
    """Dissipative per-axis drag on body velocity and body rates."""
    v = state.velocity
    w = state.body_rates
    force = -(m.drag_linear * v + m.drag_quadratic * np.abs(v) * v)
    moment = -m.rot_drag_quadratic * np.abs(w) * w
    return BodyWrench(force, moment)
