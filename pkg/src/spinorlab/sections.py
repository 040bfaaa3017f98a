"""Sampled spinor sections and the half-angle map between structures.

Sections of the two spinor structures are sampled on the same ring grid as
the angle fields: an (N, 4) complex array of spinor values at x_j = j*L/N.
The map between structures is pointwise multiplication by the unimodular
half phase U(x) = exp(i*theta(x)/2), built from the unwrapped angle so the
lift through the double cover is smooth.  U^2 is single-valued with the
winding of theta; U itself is single-valued only for even winding, so the
image of a periodic section picks up an antiperiodic boundary sector when
the winding is odd.  Each section carries that sector as a flag and the
ring derivative respects it (antiperiodic data is differentiated on the
doubled ring, never by re-using the phase factor, so the intertwining
checks below are not circular).

Operator conventions, fixed once here: with the Dirac-representation
matrices and the mode ansatz exp(-i*E*t + i*(p1*x1 + p2*x2)) chi(x3), the
standard operator acts as

    D0 chi = (E*g0 - p1*g1 - p2*g2 - m) chi + i*g3 chi'

and the shifted operators differ by the multiplier induced by the half
phase,

    D_plus  = D0 - (s/2) * theta'(x) * g3,
    D_minus = D0 + (s/2) * theta'(x) * g3,

so that at convention scale s = 1 the identities

    U * (D_plus psi)  = D0 (U * psi)       (exotic section psi)
    U * (D0 psi)      = D_minus (U * psi)

hold exactly; the residual functions report how far a given section is
from them.  Plane-wave kernel modes of D_plus at ring momentum q sit at
E = sqrt(m^2 + p1^2 + p2^2 + (q + (s/2)*k3)^2); relative to the closed
dispersion form elsewhere in this package this is the opposite shift sign
at half magnitude, which is a pure labelling convention (flip the winding
to swap them) and is pinned here so the residuals vanish with U = e^{i
theta/2} literally.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .dispersion import Structure
from .errors import DomainError
from .gamma import GAMMA0, GAMMA1, GAMMA2, GAMMA3
from .winding import ThetaField, WindingGradient, pointwise_gradient

__all__ = [
    "SampledSection",
    "HalfWindingPhase",
    "half_phase",
    "to_standard",
    "to_exotic",
    "ring_derivative",
    "standard_dirac",
    "exotic_dirac",
    "intertwining_residual",
    "commutation_residual",
    "density_residual",
    "grid_norm",
    "random_band_limited_section",
    "plane_wave_section",
    "kernel_mode",
    "section_to_json",
    "section_from_json",
]


@dataclass(frozen=True)
class SampledSection:
    """Spinor values on the ring grid, tagged by structure and boundary sector."""

    values: np.ndarray
    structure: Structure
    circumference: float
    antiperiodic: bool = False

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        if values.ndim != 2 or values.shape[1] != 4 or values.shape[0] < 4:
            raise DomainError("section values must be an (N, 4) array with N >= 4")
        if not np.all(np.isfinite(values)):
            raise DomainError("section values must be finite")
        if self.circumference <= 0.0 or not math.isfinite(self.circumference):
            raise DomainError("circumference must be positive and finite")
        if not isinstance(self.structure, Structure):
            raise DomainError("structure must be a Structure value")

    @property
    def sites(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class HalfWindingPhase:
    """Unimodular samples of exp(i*theta/2); squares to winding w."""

    values: np.ndarray
    winding: int
    circumference: float

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size < 4:
            raise DomainError("phase must be a 1-d array with at least 4 samples")
        if np.max(np.abs(np.abs(values) - 1.0)) > 1e-12:
            raise DomainError("phase samples must be unimodular")


def half_phase(theta: ThetaField) -> HalfWindingPhase:
    """Half-angle phase of a winding field, lifted smoothly.

    The samples are unwrapped before halving; halving the mod-2*pi
    representative instead would flip sign from sample to sample, which is
    precisely the double-valuedness this map exists to absorb.
    """
    unwrapped = np.unwrap(theta.samples)
    return HalfWindingPhase(
        values=np.exp(0.5j * unwrapped),
        winding=theta.winding,
        circumference=theta.circumference,
    )


def _check_grid(section: SampledSection, phase: HalfWindingPhase) -> None:
    if section.sites != phase.values.size:
        raise DomainError("section and phase live on different grids")
    if abs(section.circumference - phase.circumference) > 1e-12 * phase.circumference:
        raise DomainError("section and phase circumferences differ")


def to_standard(section: SampledSection, phase: HalfWindingPhase) -> SampledSection:
    """Carry an exotic section to the standard structure (multiply by U)."""
    _check_grid(section, phase)
    if section.structure is not Structure.EXOTIC:
        raise DomainError("to_standard expects an exotic section")
    return SampledSection(
        values=section.values * phase.values[:, None],
        structure=Structure.STANDARD,
        circumference=section.circumference,
        antiperiodic=section.antiperiodic ^ (phase.winding % 2 == 1),
    )


def to_exotic(section: SampledSection, phase: HalfWindingPhase) -> SampledSection:
    """Inverse map: standard to exotic (multiply by conj(U))."""
    _check_grid(section, phase)
    if section.structure is not Structure.STANDARD:
        raise DomainError("to_exotic expects a standard section")
    return SampledSection(
        values=section.values * np.conj(phase.values)[:, None],
        structure=Structure.EXOTIC,
        circumference=section.circumference,
        antiperiodic=section.antiperiodic ^ (phase.winding % 2 == 1),
    )


def ring_derivative(
    values: np.ndarray, circumference: float, antiperiodic: bool = False
) -> np.ndarray:
    """Spectral d/dx along the ring, exact for band-limited data.

    Antiperiodic data is extended to the doubled ring as [v, -v], where it
    is an honest periodic function with odd half-integer harmonics, then
    differentiated there and restricted back.
    """
    values = np.asarray(values, dtype=complex)
    n = values.shape[0]
    if antiperiodic:
        extended = np.concatenate([values, -values], axis=0)
        return ring_derivative(extended, 2.0 * circumference, False)[:n]
    freqs = 2j * math.pi * np.fft.fftfreq(n, d=circumference / n)
    spectrum = np.fft.fft(values, axis=0)
    if values.ndim == 1:
        return np.fft.ifft(freqs * spectrum, axis=0)
    return np.fft.ifft(freqs[:, None] * spectrum, axis=0)


def _mode_term(
    values: np.ndarray, mass: float, p_transverse, energy: float
) -> np.ndarray:
    p1, p2 = (float(p_transverse[0]), float(p_transverse[1]))
    out = -mass * values
    if energy != 0.0:
        out = out + energy * (values @ GAMMA0.T)
    if p1 != 0.0:
        out = out - p1 * (values @ GAMMA1.T)
    if p2 != 0.0:
        out = out - p2 * (values @ GAMMA2.T)
    return out


def standard_dirac(
    section: SampledSection,
    mass: float,
    p_transverse=(0.0, 0.0),
    energy: float = 0.0,
) -> SampledSection:
    """Apply the standard operator D0 on a mode ansatz section."""
    if mass < 0.0 or not math.isfinite(mass):
        raise DomainError("mass must be finite and non-negative")
    derivative = ring_derivative(
        section.values, section.circumference, section.antiperiodic
    )
    values = _mode_term(section.values, mass, p_transverse, energy)
    values = values + 1j * (derivative @ GAMMA3.T)
    return replace(section, values=values)


def exotic_dirac(
    section: SampledSection,
    theta: ThetaField,
    mass: float,
    direction: str,
    scale: float = 1.0,
    p_transverse=(0.0, 0.0),
    energy: float = 0.0,
) -> SampledSection:
    """Apply a shifted operator D_plus or D_minus (see module docstring)."""
    if direction not in ("plus", "minus"):
        raise DomainError("direction must be 'plus' or 'minus'")
    if theta.sites != section.sites:
        raise DomainError("section and angle field live on different grids")
    if abs(theta.circumference - section.circumference) > 1e-12 * section.circumference:
        raise DomainError("section and angle field circumferences differ")
    base = standard_dirac(section, mass, p_transverse, energy)
    sign = -1.0 if direction == "plus" else 1.0
    multiplier = sign * 0.5 * scale * pointwise_gradient(theta)
    values = base.values + multiplier[:, None] * (section.values @ GAMMA3.T)
    return replace(section, values=values)


def grid_norm(values: np.ndarray, circumference: float) -> float:
    """Discrete L2 norm over the grid, sqrt(sum |v|^2 * L/N)."""
    values = np.asarray(values)
    return float(
        math.sqrt(np.sum(np.abs(values) ** 2) * circumference / values.shape[0])
    )


def intertwining_residual(
    section: SampledSection,
    theta: ThetaField,
    mass: float,
    direction: str = "plus",
    scale: float = 1.0,
    p_transverse=(0.0, 0.0),
    energy: float = 0.0,
) -> float:
    """Grid norm of the failure of the half-phase operator identity.

    direction 'plus' measures ||U*(D_plus psi) - D0(U*psi)|| on an exotic
    section psi; direction 'minus' measures ||U*(D0 psi) - D_minus(U*psi)||.
    Both vanish to rounding at scale 1 for band-limited sections.
    """
    phase = half_phase(theta)
    if direction == "plus":
        inner = exotic_dirac(section, theta, mass, "plus", scale, p_transverse, energy)
        lhs = to_standard(inner, phase)
        rhs = standard_dirac(to_standard(section, phase), mass, p_transverse, energy)
    elif direction == "minus":
        lhs = to_standard(standard_dirac(section, mass, p_transverse, energy), phase)
        rhs = exotic_dirac(
            to_standard(section, phase), theta, mass, "minus", scale, p_transverse, energy
        )
    else:
        raise DomainError("direction must be 'plus' or 'minus'")
    return grid_norm(lhs.values - rhs.values, section.circumference)


def commutation_residual(
    section: SampledSection, field: WindingGradient, phase: HalfWindingPhase
) -> float:
    """Sup-norm commutator of the phase with the induced multiplier.

    The multiplier is a constant matrix times a pointwise factor, so it
    commutes with multiplication by U up to rounding; with zero winding both
    sides are identically zero and the residual is exactly 0.0.
    """
    _check_grid(section, phase)
    multiplier = -0.5 * field.scale * field.k[2]
    shifted = multiplier * (section.values @ GAMMA3.T)
    lhs = shifted * phase.values[:, None]
    rhs = multiplier * ((section.values * phase.values[:, None]) @ GAMMA3.T)
    return float(np.max(np.abs(lhs - rhs)))


def density_residual(section: SampledSection, phase: HalfWindingPhase) -> float:
    """Max pointwise change of the spinor density under the phase map."""
    _check_grid(section, phase)
    before = np.sum(np.abs(section.values) ** 2, axis=1)
    after = np.sum(np.abs(section.values * phase.values[:, None]) ** 2, axis=1)
    return float(np.max(np.abs(after - before)))


def random_band_limited_section(
    sites: int,
    circumference: float,
    rng: np.random.Generator,
    structure: Structure = Structure.EXOTIC,
) -> SampledSection:
    """Random section with harmonics |n| <= sites/4, unit sup density.

    Band limiting keeps the spectral derivative exact; the normalization
    keeps unimodularity rounding below 1e-15 in the density check.
    """
    if sites < 8:
        raise DomainError("need at least 8 sites for a band-limited section")
    x = np.arange(sites) * (circumference / sites)
    cutoff = sites // 4
    values = np.zeros((sites, 4), dtype=complex)
    for n in range(-cutoff, cutoff + 1):
        coeffs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        values += np.exp(2j * math.pi * n * x / circumference)[:, None] * coeffs
    density = np.max(np.sum(np.abs(values) ** 2, axis=1))
    values /= math.sqrt(density)
    return SampledSection(
        values=values, structure=structure, circumference=float(circumference)
    )


def plane_wave_section(
    sites: int,
    circumference: float,
    harmonic: int,
    spinor: np.ndarray,
    structure: Structure = Structure.EXOTIC,
) -> SampledSection:
    """Single harmonic exp(2*pi*i*n*x/L) times a constant spinor."""
    spinor = np.asarray(spinor, dtype=complex)
    if spinor.shape != (4,):
        raise DomainError("spinor must have 4 components")
    x = np.arange(sites) * (circumference / sites)
    wave = np.exp(2j * math.pi * harmonic * x / circumference)
    return SampledSection(
        values=wave[:, None] * spinor[None, :],
        structure=structure,
        circumference=float(circumference),
    )


def kernel_mode(
    theta: ThetaField,
    mass: float,
    harmonic: int,
    p_transverse=(0.0, 0.0),
    operator: str = "plus",
    scale: float = 1.0,
) -> tuple[SampledSection, float]:
    """Exact plane-wave kernel element of D_plus, D_minus or D0.

    Returns an exotic section at ring harmonic n together with the on-shell
    energy E = sqrt(m^2 + p1^2 + p2^2 + q_eff^2), where q_eff absorbs the
    operator's multiplier shift.  The spinor is built with the on-shell
    projector, so applying the chosen operator at that energy annihilates
    the section up to rounding.
    """
    if operator not in ("plus", "minus", "free"):
        raise DomainError("operator must be 'plus', 'minus' or 'free'")
    q = 2.0 * math.pi * harmonic / theta.circumference
    k3 = float(np.mean(pointwise_gradient(theta)))
    if operator == "plus":
        q_eff = q + 0.5 * scale * k3
    elif operator == "minus":
        q_eff = q - 0.5 * scale * k3
    else:
        q_eff = q
    p1, p2 = (float(p_transverse[0]), float(p_transverse[1]))
    energy = math.sqrt(mass**2 + p1**2 + p2**2 + q_eff**2)
    onshell = (
        energy * GAMMA0 - p1 * GAMMA1 - p2 * GAMMA2 - q_eff * GAMMA3
        + mass * np.eye(4)
    )
    spinor = None
    for column in range(4):
        candidate = onshell[:, column]
        if np.linalg.norm(candidate) > 1e-8:
            spinor = candidate / np.linalg.norm(candidate)
            break
    if spinor is None:
        raise DomainError("on-shell projector vanished; no kernel spinor")
    section = plane_wave_section(
        theta.sites, theta.circumference, harmonic, spinor, Structure.EXOTIC
    )
    return section, energy


def section_to_json(section: SampledSection) -> str:
    """Serialize as JSON with values stored as [re, im] pairs."""
    payload = {
        "structure": section.structure.value,
        "circumference": section.circumference,
        "antiperiodic": section.antiperiodic,
        "values": [
            [[float(v.real), float(v.imag)] for v in row] for row in section.values
        ],
    }
    return json.dumps(payload)


def section_from_json(text: str) -> SampledSection:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid section JSON: {exc}") from None
    try:
        values = np.array(
            [[complex(re, im) for re, im in row] for row in payload["values"]]
        )
        return SampledSection(
            values=values,
            structure=Structure(payload["structure"]),
            circumference=float(payload["circumference"]),
            antiperiodic=bool(payload.get("antiperiodic", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed section JSON: {exc}") from None
