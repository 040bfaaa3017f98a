"""Spectral ring oracle: twisted boundary conditions, diagonalized densely.

This module is the brute-force cross-check for the closed dispersion
formulas.  The generator -i d/dx on a ring of N sites with boundary twist
Phi is built as an explicit N x N matrix (Fourier differentiation matrix
plus the constant twist offset) and handed to a dense Hermitian
eigensolver; nothing downstream assumes the analytic quantization

    e_n = (2*pi*n + Phi) / L,   n = ceil(-N/2) .. floor(N/2) - 1,

which is instead what the numerical spectrum is tested against.  The
dictionary between boundary twist and spinor structure: the trivial
structure is twist 0, the exotic one twist pi (the half phase halves the
2*pi holonomy of the winding gradient).  The Dirac ring operator is the
2N x 2N matrix sigma1 x (-i d/dx + Phi/L) + m * sigma3 x 1, whose spectrum
comes out symmetric under E -> -E; single-particle energies are
E_n = sqrt(m^2 + e_n^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import Branch, ModeSpec, Structure, dispersion_exact
from .errors import DomainError
from .winding import WindingGradient

TWO_PI = 2.0 * math.pi

STRUCTURE_TWIST = {Structure.STANDARD: 0.0, Structure.EXOTIC: math.pi}


@dataclass(frozen=True)
class RingSpec:
    sites: int
    circumference: float
    twist: float
    mass: float = 0.0

    def __post_init__(self) -> None:
        # even only: the symmetric mode range ceil(-N/2)..floor(N/2)-1 covers
        # all N grid modes exactly when N is even
        if self.sites < 4 or self.sites % 2 != 0:
            raise DomainError("need an even number of sites, at least 4")
        if self.circumference <= 0.0 or not math.isfinite(self.circumference):
            raise DomainError("circumference must be positive and finite")
        if not math.isfinite(self.twist):
            raise DomainError("twist must be finite")
        if self.mass < 0.0 or not math.isfinite(self.mass):
            raise DomainError("mass must be finite and non-negative")


@dataclass(frozen=True)
class Spectrum:
    """Distinct levels in ascending order with their multiplicities."""

    eigenvalues: tuple[float, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.eigenvalues) != len(self.multiplicities):
            raise DomainError("eigenvalues and multiplicities must align")
        if any(m < 1 for m in self.multiplicities):
            raise DomainError("multiplicities must be positive")
        if any(
            b < a for a, b in zip(self.eigenvalues, self.eigenvalues[1:])
        ):
            raise DomainError("eigenvalues must be sorted ascending")

    @property
    def total_count(self) -> int:
        return int(sum(self.multiplicities))


def _group_levels(values: np.ndarray, tol: float = 1e-12) -> Spectrum:
    levels: list[float] = []
    counts: list[int] = []
    for value in np.sort(values):
        if levels and abs(value - levels[-1]) <= tol:
            counts[-1] += 1
        else:
            levels.append(float(value))
            counts.append(1)
    return Spectrum(eigenvalues=tuple(levels), multiplicities=tuple(counts))


def _generator_matrix(spec: RingSpec) -> np.ndarray:
    """Dense twisted generator -i d/dx + twist/L on the N-site ring."""
    n = spec.sites
    # Fourier differentiation matrix: derivative of each identity column.
    freqs = 2j * math.pi * np.fft.fftfreq(n, d=spec.circumference / n)
    deriv = np.fft.ifft(freqs[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    matrix = -1j * deriv + (spec.twist / spec.circumference) * np.eye(n)
    return 0.5 * (matrix + matrix.conj().T)


def ring_spectrum(spec: RingSpec, first_order: bool = True) -> Spectrum:
    """Numerical spectrum of the twisted ring operator.

    first_order=True diagonalizes the generator itself (N momentum levels,
    one per mode index).  first_order=False diagonalizes the massive Dirac
    ring operator (2N levels, symmetric under E -> -E).
    """
    generator = _generator_matrix(spec)
    if first_order:
        eigenvalues = np.linalg.eigvalsh(generator)
        return _group_levels(eigenvalues)
    sigma1 = np.array([[0.0, 1.0], [1.0, 0.0]])
    sigma3 = np.array([[1.0, 0.0], [0.0, -1.0]])
    hamiltonian = np.kron(sigma1, generator) + spec.mass * np.kron(
        sigma3, np.eye(spec.sites)
    )
    eigenvalues = np.linalg.eigvalsh(hamiltonian)
    return _group_levels(eigenvalues)


def mode_indices(spec: RingSpec) -> np.ndarray:
    """Symmetric mode index range ceil(-N/2) .. floor(N/2) - 1."""
    return np.arange(math.ceil(-spec.sites / 2), math.floor(spec.sites / 2))


def analytic_levels(spec: RingSpec) -> np.ndarray:
    """The quantization the numerics must reproduce; kept for tests and reports."""
    return np.sort((TWO_PI * mode_indices(spec) + spec.twist) / spec.circumference)


def dirac_ring_spectrum(spec: RingSpec, structure: Structure) -> Spectrum:
    """Positive-branch Dirac energies for a spin structure on the ring.

    The twist is dictated by the structure (0 or pi); spec.twist is ignored
    here so callers cannot desynchronize the dictionary.  Levels within
    1e-12 are merged, which is where the degeneracy lifting between the two
    structures becomes visible.
    """
    if not isinstance(structure, Structure):
        raise DomainError("structure must be a Structure value")
    base = RingSpec(
        sites=spec.sites,
        circumference=spec.circumference,
        twist=STRUCTURE_TWIST[structure],
        mass=spec.mass,
    )
    momenta = ring_spectrum(base, first_order=True)
    energies = [
        math.sqrt(spec.mass**2 + e**2)
        for e, mult in zip(momenta.eigenvalues, momenta.multiplicities)
        for _ in range(mult)
    ]
    return _group_levels(np.array(energies))


@dataclass(frozen=True)
class DispersionMatchReport:
    """Outcome of the lattice-versus-closed-form comparison."""

    deviations: tuple[float, ...]
    max_deviation: float
    tol: float
    passed: bool


def verify_dispersion(
    spec: RingSpec,
    field: WindingGradient,
    p_transverse=(0.0, 0.0),
    tol: float = 1e-12,
) -> DispersionMatchReport:
    """Compare twisted-lattice energies against the closed dispersion form.

    The lattice side takes the numerical momentum levels e_n and forms
    sqrt(m^2 + |p_t|^2 + e_n^2).  The continuum side evaluates the closed
    form on integer-quantized base momenta 2*pi*n/L with the branch that
    adds the field shift s*k3 (the standard branch when the shift is zero).
    Both energy lists are sorted and compared elementwise; the caller is
    responsible for matching s*k3 to the twist (pi/L shift for twist pi),
    and a mismatch is exactly what the report is meant to expose.  A field
    whose holonomy and k3 imply a different circumference than the lattice
    is rejected.
    """
    if tol <= 0.0 or not math.isfinite(tol):
        raise DomainError("tol must be positive")
    if field.k[0] != 0.0 or field.k[1] != 0.0:
        raise DomainError("field must point along the ring")
    k3 = float(field.k[2])
    length = spec.circumference
    if k3 != 0.0:
        implied = field.holonomy / k3
        if abs(implied - length) > 1e-9 * length:
            raise DomainError(
                f"field implies circumference {implied:.12g}, lattice has {length:.12g}"
            )
    shift = field.scale * k3
    branch = Branch.STANDARD if shift == 0.0 else Branch.EXOTIC_MINUS

    momenta = ring_spectrum(spec, first_order=True)
    p1, p2 = (float(p_transverse[0]), float(p_transverse[1]))
    lattice = np.sort(
        [
            math.sqrt(spec.mass**2 + p1**2 + p2**2 + e**2)
            for e, mult in zip(momenta.eigenvalues, momenta.multiplicities)
            for _ in range(mult)
        ]
    )
    continuum = np.sort(
        [
            dispersion_exact(
                ModeSpec(spec.mass, np.array([p1, p2, TWO_PI * n / length]), branch),
                field,
            )
            for n in mode_indices(spec)
        ]
    )
    deviations = tuple(float(d) for d in np.abs(lattice - continuum))
    max_deviation = float(max(deviations))
    return DispersionMatchReport(
        deviations=deviations,
        max_deviation=max_deviation,
        tol=float(tol),
        passed=max_deviation <= tol,
    )
