"""Channel amplitudes on the screen: two-slit, one-slit, the null- and
detected-measurement channels, their probabilistic mixture, and a
momentum-kick reference model.

Channel construction
--------------------
no_detector      point source -> both slit apertures -> screen (coherent)
one_slit_A/B     same with a single aperture
null_detection   psi_A(x) + W(x) * psi_stub(x): the B amplitude survives
                 only as the stub terminated on the detection disc, and
                 it contributes on the screen only inside the geometric
                 crossing window W of straight lines from slit A through
                 the disc
detected_at_B    the disc re-emits what it captured: the B stub plus
                 whatever part of A's forward cone lies inside the disc
                 (zero once the cone and disc are disjoint)
kick_reference   |psi_A|^2 + |psi_B|^2 + 2*gamma*Re(psi_A conj(psi_B))
                 with gamma = exp(-(pi*d/lambda_ph)^2 / 2), an
                 independent decoherence surrogate used as an oracle

The disc restriction multiplies by a flat-top window with C-infinity
edges (support exactly [x_B - rho, x_B + rho]); a hard edge would add
knife-edge ripples that are artifacts of the restriction, not of the
model.  All propagation is the midpoint-quadrature kernel sum, so every
channel is deterministic to the bit for any thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .apparatus import Apparatus, DetectorConfig, Particle, validate
from .errors import InvalidArgumentError, InvalidStateError, PhysicsValidationError
from .propagator import GridSpec, PlaneField, point_source_field, propagate, transmitted_power

# Flat fraction of the disc window; the outer 1 - DISC_EDGE_FLAT of each
# side is the C-infinity bump edge exp(1 - 1/(1 - t^2)).  The flat core
# must reach past |u| = 0.5 so that at d = rho/2 the trapped slit-A
# amplitude (centered at u = -0.5) re-emits both directions unattenuated.
DISC_EDGE_FLAT = 0.8

# Disc quadrature: points per radian of the fastest integrand phase.
_DISC_POINTS_PER_RADIAN = 4.0
_DISC_N_MIN = 128
_DISC_N_MAX = 32768


@dataclass(frozen=True)
class ChannelField:
    channel: str  # no_detector | one_slit_A | one_slit_B | null_detection | detected_at_B
    field: PlaneField
    probability_weight: float


@dataclass(frozen=True)
class CrossingWindow:
    """Slope band of straight lines from slit A passing within rho of
    the disc center, and its image on the screen plane."""

    slope_lo: float
    slope_hi: float
    screen_lo: float
    screen_hi: float

    def intersects(self, lo: float, hi: float) -> bool:
        return self.screen_hi >= lo and self.screen_lo <= hi


def screen_grid(apparatus: Apparatus) -> GridSpec:
    return GridSpec(apparatus.screen_min, apparatus.screen_max, apparatus.screen_samples)


def _aperture_grid(apparatus: Apparatus, interval: tuple[float, float]) -> GridSpec:
    lo, hi = interval
    return GridSpec(lo, hi, apparatus.aperture_samples, cell_centered=True)


def barrier_field(apparatus: Apparatus, particle: Particle, slit: str) -> PlaneField:
    """Source amplitude across one slit aperture at the barrier plane."""
    if slit == "A":
        interval = apparatus.slit_A_interval
    elif slit == "B":
        interval = apparatus.slit_B_interval
    else:
        raise InvalidArgumentError(f"slit must be 'A' or 'B', got {slit!r}")
    return point_source_field(
        apparatus.source_x, _aperture_grid(apparatus, interval), apparatus.L1, particle
    )


def _check_valid(apparatus: Apparatus, detector: DetectorConfig, particle: Particle) -> None:
    report = validate(apparatus, detector, particle)
    if not report.ok:
        raise PhysicsValidationError(report)


def one_slit_amplitude(apparatus: Apparatus, particle: Particle, slit: str) -> ChannelField:
    f = barrier_field(apparatus, particle, slit)
    out = propagate(f, apparatus.L2, particle, screen_grid(apparatus))
    return ChannelField(channel=f"one_slit_{slit}", field=out, probability_weight=1.0)


def two_slit_amplitude(apparatus: Apparatus, particle: Particle) -> ChannelField:
    """Coherent sum of the two one-slit screen amplitudes."""
    a = one_slit_amplitude(apparatus, particle, "A").field
    b = one_slit_amplitude(apparatus, particle, "B").field
    out = PlaneField(z_label=a.z_label, x=a.x, values=a.values + b.values, dx=a.dx)
    return ChannelField(channel="no_detector", field=out, probability_weight=1.0)


def disc_window(u: np.ndarray) -> np.ndarray:
    """Flat-top window on [-1, 1]: 1 on |u| <= DISC_EDGE_FLAT, bump edge
    outside, exactly 0 for |u| >= 1."""
    au = np.abs(np.asarray(u, dtype=np.float64))
    w = np.zeros_like(au)
    w[au <= DISC_EDGE_FLAT] = 1.0
    edge = (au > DISC_EDGE_FLAT) & (au < 1.0)
    t = (au[edge] - DISC_EDGE_FLAT) / (1.0 - DISC_EDGE_FLAT)
    w[edge] = np.exp(1.0 - 1.0 / (1.0 - t * t))
    return w


def _disc_grid(apparatus: Apparatus, detector: DetectorConfig, particle: Particle) -> GridSpec:
    """Disc-plane grid fine enough for the incoming stub phase and the
    outgoing screen phase."""
    rho = detector.radius_rho
    eps = detector.depth_epsilon
    p = particle.momentum
    x_b = apparatus.slit_B_center
    screen_abs = max(abs(apparatus.screen_min), abs(apparatus.screen_max))
    rate = p * ((rho + apparatus.slit_width) / eps + (screen_abs + rho + abs(x_b)) / (apparatus.L2 - eps))
    n = int(math.ceil(2.0 * rho * rate * _DISC_POINTS_PER_RADIAN))
    n = min(max(n, _DISC_N_MIN), _DISC_N_MAX)
    return GridSpec(x_b - rho, x_b + rho, n, cell_centered=True)


def _require_detector(apparatus: Apparatus, detector: DetectorConfig) -> None:
    if not detector.enabled:
        raise InvalidStateError("detector is disabled")
    if not (detector.depth_epsilon < apparatus.L2):
        raise InvalidArgumentError(
            f"depth_epsilon={detector.depth_epsilon} must be smaller than L2={apparatus.L2}"
        )


def stub_source(apparatus: Apparatus, detector: DetectorConfig, particle: Particle) -> PlaneField:
    """Slit-B amplitude carried to the disc plane and terminated there:
    propagated over epsilon, then restricted to the disc window."""
    _require_detector(apparatus, detector)
    grid = _disc_grid(apparatus, detector, particle)
    f = propagate(barrier_field(apparatus, particle, "B"), detector.depth_epsilon, particle, grid)
    w = disc_window((f.x - apparatus.slit_B_center) / detector.radius_rho)
    return PlaneField(z_label=f.z_label, x=f.x, values=f.values * w, dx=f.dx)


def trapped_a_source(
    apparatus: Apparatus, detector: DetectorConfig, particle: Particle
) -> PlaneField | None:
    """Part of slit A's amplitude captured by the disc.

    A's forward cone is bounded by the straight lines from the source
    through the slit edges, advanced by epsilon to the disc plane.
    Returns None (an exact zero contribution) when that cone misses the
    disc support entirely; otherwise the A amplitude at the disc plane
    restricted by the disc window.
    """
    _require_detector(apparatus, detector)
    eps = detector.depth_epsilon
    rho = detector.radius_rho
    lo_edge, hi_edge = apparatus.slit_A_interval
    src = apparatus.source_x
    cone_lo = lo_edge + eps * (lo_edge - src) / apparatus.L1
    cone_hi = hi_edge + eps * (hi_edge - src) / apparatus.L1
    disc_lo = apparatus.slit_B_center - rho
    disc_hi = apparatus.slit_B_center + rho
    if cone_hi <= disc_lo or cone_lo >= disc_hi:
        return None
    grid = _disc_grid(apparatus, detector, particle)
    f = propagate(barrier_field(apparatus, particle, "A"), eps, particle, grid)
    w = disc_window((f.x - apparatus.slit_B_center) / rho)
    return PlaneField(z_label=f.z_label, x=f.x, values=f.values * w, dx=f.dx)


def crossing_window(apparatus: Apparatus, detector: DetectorConfig) -> CrossingWindow:
    """Slope band [(d - rho)/eps, (d + rho)/eps] from slit A, imaged to
    the screen as x = slit_A_center + slope * L2."""
    if not detector.enabled:
        raise InvalidStateError("detector is disabled")
    if not (detector.depth_epsilon > 0.0):
        raise InvalidArgumentError(f"depth_epsilon must be > 0, got {detector.depth_epsilon}")
    d = apparatus.slit_separation
    s_lo = (d - detector.radius_rho) / detector.depth_epsilon
    s_hi = (d + detector.radius_rho) / detector.depth_epsilon
    return CrossingWindow(
        slope_lo=s_lo,
        slope_hi=s_hi,
        screen_lo=apparatus.slit_A_center + s_lo * apparatus.L2,
        screen_hi=apparatus.slit_A_center + s_hi * apparatus.L2,
    )


def detection_probability(
    apparatus: Apparatus, detector: DetectorConfig, particle: Particle
) -> float:
    """Probability that the detector fires: disc-captured B power over
    total transmitted power (or the configured override)."""
    _require_detector(apparatus, detector)
    if detector.detection_probability_override is not None:
        return detector.detection_probability_override
    captured = transmitted_power(stub_source(apparatus, detector, particle))
    total = transmitted_power(barrier_field(apparatus, particle, "A")) + transmitted_power(
        barrier_field(apparatus, particle, "B")
    )
    return min(max(captured / total, 0.0), 1.0)


def null_channel_amplitude(
    apparatus: Apparatus, detector: DetectorConfig, particle: Particle
) -> ChannelField:
    """Screen amplitude when the detector stays silent.

    psi_A plus the terminated B stub, the latter masked to the crossing
    window (ramped over one grid cell).  When the window misses the
    screen entirely the A amplitude is returned unchanged.
    """
    _require_detector(apparatus, detector)
    psi_a = one_slit_amplitude(apparatus, particle, "A").field
    weight = 1.0 - detection_probability(apparatus, detector, particle)
    win = crossing_window(apparatus, detector)
    dx = psi_a.dx
    if not win.intersects(psi_a.grid_min - dx, psi_a.grid_max + dx):
        return ChannelField(channel="null_detection", field=psi_a, probability_weight=weight)
    src = stub_source(apparatus, detector, particle)
    psi_stub = propagate(src, apparatus.L2 - detector.depth_epsilon, particle, screen_grid(apparatus))
    ramp_lo = (psi_a.x - (win.screen_lo - dx)) / dx
    ramp_hi = ((win.screen_hi + dx) - psi_a.x) / dx
    w = np.clip(np.minimum(ramp_lo, ramp_hi), 0.0, 1.0)
    values = psi_a.values + w * psi_stub.values
    field = PlaneField(z_label=psi_a.z_label, x=psi_a.x, values=values, dx=dx)
    return ChannelField(channel="null_detection", field=field, probability_weight=weight)


def detected_channel_amplitude(
    apparatus: Apparatus,
    detector: DetectorConfig,
    particle: Particle,
    include_trapped: bool = True,
) -> ChannelField:
    """Screen amplitude after a detection at B: the disc re-emits the
    stub plus the trapped part of A's cone.  include_trapped=False gives
    the stub-only re-emission (the no-interference baseline)."""
    _require_detector(apparatus, detector)
    src = stub_source(apparatus, detector, particle)
    if include_trapped:
        trapped = trapped_a_source(apparatus, detector, particle)
        if trapped is not None:
            src = PlaneField(
                z_label=src.z_label, x=src.x, values=src.values + trapped.values, dx=src.dx
            )
    out = propagate(src, apparatus.L2 - detector.depth_epsilon, particle, screen_grid(apparatus))
    weight = detection_probability(apparatus, detector, particle)
    return ChannelField(channel="detected_at_B", field=out, probability_weight=weight)


def combined_intensity(null: ChannelField, det: ChannelField, p_det: float):
    """Convex mixture of the unit-area channel intensities."""
    from .analysis import IntensityProfile, intensity

    if not (0.0 <= p_det <= 1.0):
        raise InvalidArgumentError(f"p_det must lie in [0,1], got {p_det}")
    fa, fb = null.field, det.field
    if fa.x.size != fb.x.size or not np.array_equal(fa.x, fb.x):
        raise InvalidArgumentError("null and detected channels are on different grids")
    if p_det == 0.0:
        return intensity(fa, normalize=True)
    if p_det == 1.0:
        return intensity(fb, normalize=True)
    i_null = intensity(fa, normalize=True)
    i_det = intensity(fb, normalize=True)
    vals = (1.0 - p_det) * i_null.values + p_det * i_det.values
    return IntensityProfile(x=fa.x, values=vals, dx=fa.dx, normalized=True)


def kick_visibility_factor(d: float, photon_wavelength: float) -> float:
    """gamma = exp(-(pi d / lambda_ph)^2 / 2)."""
    u = math.pi * d / photon_wavelength
    return math.exp(-0.5 * u * u)


def kick_reference_intensity(
    apparatus: Apparatus, detector: DetectorConfig, particle: Particle
):
    """Two-slit pattern with the cross term damped by gamma(d, lambda_ph)."""
    from .analysis import IntensityProfile

    if not detector.enabled:
        raise InvalidStateError("detector is disabled")
    a = one_slit_amplitude(apparatus, particle, "A").field
    b = one_slit_amplitude(apparatus, particle, "B").field
    gamma = kick_visibility_factor(apparatus.slit_separation, detector.photon_wavelength)
    vals = (
        np.abs(a.values) ** 2
        + np.abs(b.values) ** 2
        + 2.0 * gamma * np.real(a.values * np.conj(b.values))
    )
    area = float(np.trapezoid(vals, a.x))
    if not (area > 0.0):
        raise InvalidArgumentError("kick reference pattern has zero total intensity")
    return IntensityProfile(x=a.x, values=vals / area, dx=a.dx, normalized=True)
