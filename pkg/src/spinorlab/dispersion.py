"""Mode energies for the three dispersion branches on the ring.

A mode carries a mass m, a 3-momentum p (component 2 along the ring), and a
branch label.  The standard branch ignores the winding gradient; the two
exotic branches see it with opposite signs.  Two formulas are provided and
deliberately kept apart:

* semiclassical: E = (|p|^2 + m^2) * (1 -+ s*(k.p) / (2*(|p|^2 + m^2))),
  the first-order splitting written exactly as it is usually quoted, with
  no correction for the standard branch (which returns |p|^2 + m^2);
* exact: E = sqrt(m^2 + |p -+ s*k|^2), the closed form whose expansion
  reproduces the semiclassical gap to first order in k.

The sign convention ties the energetically favoured branch to the sign of
k.p: for s*(k.p) > 0 the plus branch lies lower under both formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .winding import WindingGradient


class Branch(Enum):
    STANDARD = "standard"
    EXOTIC_PLUS = "exotic_plus"
    EXOTIC_MINUS = "exotic_minus"


class Structure(Enum):
    """Which of the two inequivalent spinor structures a mode lives on."""

    STANDARD = "standard"
    EXOTIC = "exotic"


class KernelClass(Enum):
    """Whether a mode annihilates the standard operator or only the shifted one."""

    STANDARD_DIRAC = "standard_dirac"
    AMORPHOUS = "amorphous"


class Preference(Enum):
    PREFER_PLUS = "prefer_plus"
    PREFER_MINUS = "prefer_minus"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ModeSpec:
    mass: float
    momentum: np.ndarray
    branch: Branch

    def __post_init__(self) -> None:
        momentum = np.asarray(self.momentum, dtype=float)
        object.__setattr__(self, "momentum", momentum)
        if momentum.shape != (3,):
            raise DomainError("momentum must be a 3-vector")
        if not np.all(np.isfinite(momentum)):
            raise DomainError("momentum must be finite")
        if not math.isfinite(self.mass) or self.mass < 0.0:
            raise DomainError("mass must be finite and non-negative")
        if not isinstance(self.branch, Branch):
            raise DomainError("branch must be a Branch value")


@dataclass(frozen=True)
class SectorLabel:
    structure: Structure
    kernel: KernelClass


def _signed_shift(field: WindingGradient, momentum: np.ndarray) -> float:
    return field.scale * float(np.dot(field.k, momentum))


def dispersion_semiclassical(mode: ModeSpec, field: WindingGradient) -> float:
    """First-order branch energy; the standard branch returns |p|^2 + m^2.

    Rejects modes with m = 0 and p = 0, where the printed correction is
    undefined.
    """
    base = mode.mass**2 + float(np.dot(mode.momentum, mode.momentum))
    if mode.branch is Branch.STANDARD:
        return base
    if base == 0.0:
        raise DomainError("semiclassical correction undefined at m = 0, p = 0")
    correction = _signed_shift(field, mode.momentum) / (2.0 * base)
    if mode.branch is Branch.EXOTIC_PLUS:
        return base * (1.0 - correction)
    return base * (1.0 + correction)


def dispersion_exact(mode: ModeSpec, field: WindingGradient) -> float:
    """Closed-form branch energy sqrt(m^2 + |p -+ s*k|^2).

    Plus branch shifts by -s*k, minus by +s*k, standard not at all; always
    at least m (rest floor).
    """
    if mode.branch is Branch.STANDARD:
        shifted = mode.momentum
    elif mode.branch is Branch.EXOTIC_PLUS:
        shifted = mode.momentum - field.scale * field.k
    else:
        shifted = mode.momentum + field.scale * field.k
    return math.sqrt(mode.mass**2 + float(np.dot(shifted, shifted)))


def degeneracy_gap(
    mass: float, momentum: np.ndarray, field: WindingGradient, formula: str = "semiclassical"
) -> float:
    """Energy splitting E_minus - E_plus between the exotic branches.

    For the semiclassical formula the splitting collapses algebraically to
    s*(k.p), and that identity is what is returned (the two first-order
    terms cancel exactly, so subtracting the evaluated branch energies would
    only add rounding noise).  For the exact formula the actual difference
    of the two square roots is returned.
    """
    if formula == "semiclassical":
        return field.scale * float(np.dot(field.k, np.asarray(momentum, dtype=float)))
    if formula == "exact":
        minus = ModeSpec(mass, momentum, Branch.EXOTIC_MINUS)
        plus = ModeSpec(mass, momentum, Branch.EXOTIC_PLUS)
        return dispersion_exact(minus, field) - dispersion_exact(plus, field)
    raise DomainError(f"unknown formula {formula!r}")


def default_degeneracy_tol(mass: float, momentum: np.ndarray) -> float:
    """Scale-aware threshold below which the branches count as degenerate."""
    p = np.asarray(momentum, dtype=float)
    return 1e-12 * (mass**2 + float(np.dot(p, p)) + 1.0)


def preferred_branch(
    field: WindingGradient, momentum: np.ndarray, tol: float | None = None
) -> Preference:
    """Which exotic branch lies lower, by the sign of s*(k.p).

    Strictly greater than tol prefers plus, strictly less than -tol prefers
    minus, anything in between is degenerate.  tol must be positive; when
    omitted it defaults to the scale-aware threshold at m = 0.
    """
    momentum = np.asarray(momentum, dtype=float)
    if tol is None:
        tol = default_degeneracy_tol(0.0, momentum)
    if tol <= 0.0 or not math.isfinite(tol):
        raise DomainError("tol must be positive")
    signed = _signed_shift(field, momentum)
    if signed > tol:
        return Preference.PREFER_PLUS
    if signed < -tol:
        return Preference.PREFER_MINUS
    return Preference.DEGENERATE


def classify_mode(
    residual_standard: float,
    residual_exotic: float,
    structure: Structure,
    tol: float,
) -> SectorLabel:
    """Label a mode by structure and by which operator kernel it sits in.

    A mode annihilated by the standard operator (residual_standard <= tol)
    carries the standard Dirac kernel label; otherwise it is amorphous.  The
    exotic-operator residual is accepted for reporting symmetry but does not
    enter the decision.
    """
    if residual_standard < 0.0 or residual_exotic < 0.0:
        raise DomainError("residuals must be non-negative")
    if tol <= 0.0 or not math.isfinite(tol):
        raise DomainError("tol must be positive")
    if not isinstance(structure, Structure):
        raise DomainError("structure must be a Structure value")
    kernel = (
        KernelClass.STANDARD_DIRAC if residual_standard <= tol else KernelClass.AMORPHOUS
    )
    return SectorLabel(structure=structure, kernel=kernel)
