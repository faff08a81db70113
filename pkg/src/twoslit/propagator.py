"""Closed-form free-particle kernel and plane-to-plane propagation.

The kernel between transverse points over a flight time T (hbar = 1):

    K(x_b, x_a; T) = sqrt(m / (2 pi i T)) * exp(i m (x_b - x_a)^2 / (2 T))

propagate() realizes the superposition integral by midpoint quadrature
on the input grid.  Summation order per output point is fixed, so the
result is bit-identical for any thread count (see kernels).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .apparatus import Particle
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid request on [lo, hi].

    cell_centered=False: n nodes including both endpoints (screen-type
    grids).  cell_centered=True: n midpoints of equal cells (quadrature
    grids for apertures and the detection disc).  Points are built
    symmetrically about the interval midpoint so that a sign-symmetric
    interval yields an exactly sign-symmetric point set.
    """

    lo: float
    hi: float
    n: int
    cell_centered: bool = False

    def points_and_spacing(self) -> tuple[np.ndarray, float]:
        if not (self.hi > self.lo):
            raise InvalidArgumentError(f"grid bounds must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.n < 1 or (not self.cell_centered and self.n < 2):
            raise InvalidArgumentError(f"grid needs at least {1 if self.cell_centered else 2} points, got {self.n}")
        span = self.hi - self.lo
        mid = 0.5 * (self.lo + self.hi)
        if self.cell_centered:
            dx = span / self.n
        else:
            dx = span / (self.n - 1)
        offsets = np.arange(self.n, dtype=np.float64) - 0.5 * (self.n - 1)
        return mid + offsets * dx, dx


@dataclass(frozen=True)
class PlaneField:
    """Complex amplitude sampled on a uniform transverse grid at one plane."""

    z_label: str
    x: np.ndarray
    values: np.ndarray
    dx: float

    def __post_init__(self):
        if self.x.size < 1 or self.x.size != self.values.size:
            raise InvalidArgumentError("field needs matching, non-empty grid and values")
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("field values must be finite")

    @property
    def grid_min(self) -> float:
        return float(self.x[0])

    @property
    def grid_max(self) -> float:
        return float(self.x[-1])


def free_kernel(x_b: float, x_a: float, mass: float, time: float) -> complex:
    """Free kernel value; modulus sqrt(m/(2 pi T)) for any positions."""
    if not (time > 0.0):
        raise InvalidArgumentError(f"time must be > 0, got {time}")
    if not (mass > 0.0):
        raise InvalidArgumentError(f"mass must be > 0, got {mass}")
    pref = cmath.sqrt(mass / (2.0j * math.pi * time))
    d = x_b - x_a
    return pref * cmath.exp(1j * (mass * d * d / (2.0 * time)))


def _kernel_prefactor(mass: float, time: float) -> complex:
    return cmath.sqrt(mass / (2.0j * math.pi * time))


def point_source_field(source_x: float, target: GridSpec, L: float, particle: Particle) -> PlaneField:
    """Field a distance L downstream of a point source: one kernel fan."""
    if not (L > 0.0):
        raise InvalidArgumentError(f"L must be > 0, got {L}")
    x, dx = target.points_and_spacing()
    t = L / particle.velocity
    coef = particle.mass / (2.0 * t)
    pref = _kernel_prefactor(particle.mass, t)
    d = x - source_x
    values = pref * np.exp(1j * (coef * d * d))
    return PlaneField(z_label=f"z+{L:g}", x=x, values=values, dx=dx)


def propagate(field_in: PlaneField, L: float, particle: Particle, target: GridSpec) -> PlaneField:
    """Midpoint-quadrature kernel propagation onto the target grid."""
    if not (L > 0.0):
        raise InvalidArgumentError(f"L must be > 0, got {L}")
    if field_in.values.size == 0:
        raise InvalidArgumentError("cannot propagate an empty field")
    x_out, dx_out = target.points_and_spacing()
    t = L / particle.velocity
    coef = particle.mass / (2.0 * t)
    pref = _kernel_prefactor(particle.mass, t)
    out = kernels.propagate_sum(x_out, field_in.x, field_in.values, field_in.dx, pref, coef)
    return PlaneField(z_label=f"{field_in.z_label}+{L:g}", x=x_out, values=out, dx=dx_out)


def apply_aperture(field: PlaneField, open_intervals: list[tuple[float, float]]) -> PlaneField:
    """Zero the field outside the union of open intervals."""
    ivs = sorted(open_intervals)
    for lo, hi in ivs:
        if not (lo < hi):
            raise InvalidArgumentError(f"aperture interval must satisfy lo < hi, got ({lo}, {hi})")
    for (_, hi1), (lo2, _) in zip(ivs, ivs[1:]):
        if lo2 < hi1:
            raise InvalidArgumentError("aperture intervals overlap")
    keep = np.zeros(field.x.size, dtype=bool)
    for lo, hi in ivs:
        keep |= (field.x >= lo) & (field.x <= hi)
    return PlaneField(
        z_label=field.z_label,
        x=field.x,
        values=np.where(keep, field.values, 0.0 + 0.0j),
        dx=field.dx,
    )


def transmitted_power(field: PlaneField, interval: tuple[float, float] | None = None) -> float:
    """Quadrature integral of |field|^2, optionally over one interval."""
    w = np.abs(field.values) ** 2
    if interval is not None:
        lo, hi = interval
        mask = (field.x >= lo) & (field.x <= hi)
        w = w[mask]
    return float(np.sum(w) * field.dx)
