"""Winding angle fields on a uniform ring grid.

The compact direction is a circle of circumference L sampled at N points
x_j = j*L/N.  A winding field assigns an angle theta(x_j) that advances by
2*pi*w over one circuit; w is the integer winding number.  The gradient of
such a field is a closed one-form pointing along the ring whose loop
integral (holonomy) is quantized in units of 2*pi.

Angles are stored as raw samples, not equivalence classes.  Whenever a
winding count or a gradient is needed, successive differences are wrapped
into (-pi, pi] first, so samples may be reduced mod 2*pi (as `involute`
produces) without losing the circuit count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


def wrap_angle(delta: np.ndarray | float) -> np.ndarray | float:
    """Wrap angle difference(s) into (-pi, pi]."""
    return math.pi - np.mod(math.pi - np.asarray(delta, dtype=float), TWO_PI)


def circuit_increments(samples: np.ndarray) -> np.ndarray:
    """Wrapped successive differences around one full circuit.

    The closing difference samples[0] - samples[-1] is included, so the
    result sums to 2*pi times the winding of the sampled sequence.
    """
    theta = np.asarray(samples, dtype=float)
    return wrap_angle(np.roll(theta, -1) - theta)


@dataclass(frozen=True)
class ThetaField:
    """Sampled angle field on the ring.

    samples[j] is the angle at x_j = j*circumference/sites; the field is
    required to close up with total increment 2*pi*winding.
    """

    samples: np.ndarray
    winding: int
    circumference: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 4:
            raise DomainError("need a 1-d angle field with at least 4 samples")
        if not np.all(np.isfinite(samples)):
            raise DomainError("angle samples must be finite")
        if self.circumference <= 0.0 or not math.isfinite(self.circumference):
            raise DomainError("circumference must be positive and finite")
        if self.winding != int(self.winding):
            raise DomainError("winding must be an integer")
        object.__setattr__(self, "winding", int(self.winding))
        total = float(np.sum(circuit_increments(samples)))
        target = TWO_PI * self.winding
        if abs(total - target) > 1e-9 * (1.0 + abs(self.winding)):
            raise DomainError(
                f"samples wind {total / TWO_PI:.6f} circuits, expected {self.winding}"
            )

    @property
    def sites(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class WindingGradient:
    """Constant gradient data extracted from a winding field.

    k is a 3-vector along the ring axis (components 0 and 1 are transverse
    and vanish for fields built here); holonomy is the loop integral of the
    gradient; scale is a dimensionless convention knob multiplying k wherever
    it enters an energy shift.
    """

    k: np.ndarray
    holonomy: float
    scale: float = 1.0

    def __post_init__(self) -> None:
        k = np.asarray(self.k, dtype=float)
        object.__setattr__(self, "k", k)
        if k.shape != (3,):
            raise DomainError("k must be a 3-vector")
        if not np.all(np.isfinite(k)) or not math.isfinite(self.holonomy):
            raise DomainError("gradient data must be finite")
        if not math.isfinite(self.scale):
            raise DomainError("scale must be finite")


def build_theta(sites: int, circumference: float, winding: int) -> ThetaField:
    """Canonical linear ramp theta(x) = 2*pi*winding*x/circumference.

    sites must be at least 4 and large enough to resolve the winding
    (|winding| < sites/2); otherwise the sampled ramp aliases to a different
    circuit count and construction fails.
    """
    if sites < 4:
        raise DomainError("need at least 4 sites")
    if circumference <= 0.0:
        raise DomainError("circumference must be positive")
    samples = TWO_PI * winding * np.arange(sites) / float(sites)
    return ThetaField(samples=samples, winding=winding, circumference=float(circumference))


def gradient_field(theta: ThetaField, scale: float = 1.0) -> WindingGradient:
    """Extract the ring-direction gradient and its holonomy.

    The gradient is sampled as wrapped forward differences over the grid
    spacing and the holonomy is its trapezoidal loop integral, which for the
    uniform periodic grid is exactly the sum of wrapped increments.  For any
    valid field this lands within 1e-10*(1+|w|) of 2*pi*w; for w = 0 ramps
    it is exactly 0.0.
    """
    increments = circuit_increments(theta.samples)
    holonomy = float(np.sum(increments))
    target = TWO_PI * theta.winding
    if abs(holonomy - target) > 1e-10 * (1.0 + abs(theta.winding)):
        raise DomainError("holonomy quadrature inconsistent with winding")
    k_ring = holonomy / theta.circumference
    return WindingGradient(
        k=np.array([0.0, 0.0, k_ring]), holonomy=holonomy, scale=float(scale)
    )


def involute(theta: ThetaField) -> ThetaField:
    """The angle involution theta(x) -> -theta(x) reduced mod 2*pi.

    Negates the winding.  Applying it twice returns a field whose samples
    equal the original mod 2*pi and whose winding equals the original.
    """
    samples = np.mod(-theta.samples, TWO_PI)
    return ThetaField(
        samples=samples, winding=-theta.winding, circumference=theta.circumference
    )


def involuted(field: WindingGradient) -> WindingGradient:
    """Gradient-level involution: flips k and the holonomy, keeps the scale."""
    return WindingGradient(k=-field.k, holonomy=-field.holonomy, scale=field.scale)


def pointwise_gradient(theta: ThetaField) -> np.ndarray:
    """Per-site ring derivative of the angle, from wrapped forward differences.

    Constant for the canonical ramps; used as the multiplier field in the
    exotic Dirac operator.
    """
    spacing = theta.circumference / theta.sites
    return circuit_increments(theta.samples) / spacing
