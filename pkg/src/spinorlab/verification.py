"""Named invariant checks, grouped into suites for the verify command.

Each check returns its name, a pass flag, and a short detail string.  The
suites are deliberately cheap (seconds, not minutes); the package test
suite runs the same invariants at the full advertised sample sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import chains, magma
from .dispersion import (
    Branch,
    ModeSpec,
    Preference,
    Structure,
    degeneracy_gap,
    dispersion_exact,
    dispersion_semiclassical,
    preferred_branch,
)
from .errors import DomainError
from .lattice import (
    RingSpec,
    analytic_levels,
    dirac_ring_spectrum,
    ring_spectrum,
    verify_dispersion,
)
from .sections import (
    commutation_residual,
    density_residual,
    exotic_dirac,
    grid_norm,
    half_phase,
    intertwining_residual,
    kernel_mode,
    random_band_limited_section,
    standard_dirac,
    to_exotic,
    to_standard,
)
from .winding import (
    WindingGradient,
    build_theta,
    gradient_field,
    involute,
    involuted,
    wrap_angle,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _ring_field(winding: int, sites: int = 64, length: float = TWO_PI, scale: float = 1.0):
    theta = build_theta(sites, length, winding)
    return theta, gradient_field(theta, scale=scale)


def winding_checks(seed: int = 7) -> list[Check]:
    checks = []
    _, field = _ring_field(1, sites=64, length=1.0)
    err = abs(field.holonomy - TWO_PI)
    checks.append(Check("holonomy-wound", err <= 1e-10, f"|holonomy - 2pi| = {err:.3g}"))

    _, flat = _ring_field(0, sites=64, length=1.0)
    checks.append(
        Check("holonomy-flat", flat.holonomy == 0.0, f"holonomy = {flat.holonomy!r}")
    )

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        sites = int(rng.integers(8, 128))
        length = float(rng.uniform(0.5, 20.0))
        winding = int(rng.integers(-3, 4))
        field = gradient_field(build_theta(sites, length, winding))
        worst = max(worst, abs(field.holonomy - TWO_PI * winding) / (1.0 + abs(winding)))
    checks.append(Check("holonomy-random", worst <= 1e-10, f"worst scaled error {worst:.3g}"))

    theta = build_theta(48, 3.0, 2)
    twice = involute(involute(theta))
    same = np.max(np.abs(wrap_angle(twice.samples - theta.samples))) < 1e-9
    same = same and twice.winding == theta.winding
    flipped = gradient_field(involute(theta))
    mirror = involuted(gradient_field(theta))
    same_k = np.allclose(flipped.k, mirror.k, atol=1e-15)
    checks.append(Check("involution", same and same_k, "double involution restores field"))
    return checks


def dispersion_checks(samples: int = 400, seed: int = 11) -> list[Check]:
    checks = []

    def mode(branch: Branch) -> ModeSpec:
        return ModeSpec(1.0, np.array([0.0, 0.0, 0.5]), branch)

    probe = WindingGradient(k=np.array([0.0, 0.0, 0.01]), holonomy=0.02 * math.pi, scale=1.0)
    e_plus = dispersion_semiclassical(mode(Branch.EXOTIC_PLUS), probe)
    e_minus = dispersion_semiclassical(mode(Branch.EXOTIC_MINUS), probe)
    ok = abs(e_plus - 1.2475) <= 1e-12 and abs(e_minus - 1.2525) <= 1e-12
    gap = degeneracy_gap(1.0, np.array([0.0, 0.0, 0.5]), probe, "semiclassical")
    ok = ok and gap == 0.005
    checks.append(Check("frozen-first-order", ok, f"E+ {e_plus!r}, E- {e_minus!r}, gap {gap!r}"))

    exact_plus = dispersion_exact(mode(Branch.EXOTIC_PLUS), probe)
    exact_minus = dispersion_exact(mode(Branch.EXOTIC_MINUS), probe)
    ok = (
        abs(exact_plus - math.sqrt(1.2401)) <= 1e-12
        and abs(exact_minus - math.sqrt(1.2601)) <= 1e-12
    )
    checks.append(Check("frozen-closed-form", ok, f"E+ {exact_plus!r}, E- {exact_minus!r}"))

    rng = np.random.default_rng(seed)
    violations = 0
    worst_expansion = 0.0
    for _ in range(samples):
        mass = float(rng.uniform(0.2, 2.0))
        momentum = rng.uniform(-2.0, 2.0, size=3)
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        k = direction * rng.uniform(1e-6, 1.0) * 1e-2 * (np.linalg.norm(momentum) + mass)
        field = WindingGradient(k=k, holonomy=0.0, scale=1.0)
        kp = float(np.dot(k, momentum))
        gap_semi = degeneracy_gap(mass, momentum, field, "semiclassical")
        gap_exact = degeneracy_gap(mass, momentum, field, "exact")
        if np.sign(gap_semi) != np.sign(kp) or np.sign(gap_exact) != np.sign(kp):
            violations += 1
        predicted = 2.0 * kp / math.sqrt(mass**2 + float(np.dot(momentum, momentum)))
        excess = abs(gap_exact - predicted) - 10.0 * float(np.dot(k, k))
        worst_expansion = max(worst_expansion, excess)
    checks.append(Check("gap-sign", violations == 0, f"{violations} sign violations"))
    checks.append(
        Check("gap-expansion", worst_expansion <= 0.0, f"worst excess {worst_expansion:.3g}")
    )

    flat = gradient_field(build_theta(64, TWO_PI, 0))
    momentum = np.array([0.3, -0.2, 0.7])
    semi = {
        b: dispersion_semiclassical(ModeSpec(0.5, momentum, b), flat) for b in Branch
    }
    exact = {b: dispersion_exact(ModeSpec(0.5, momentum, b), flat) for b in Branch}
    collapse = len({round(v, 15) for v in semi.values()}) == 1
    collapse = collapse and len({round(v, 15) for v in exact.values()}) == 1
    checks.append(Check("flat-collapse", collapse, "all branches agree at k = 0"))

    pref = preferred_branch(probe, np.array([0.3, 0.4, 0.0]))
    checks.append(
        Check(
            "perpendicular-degenerate",
            pref is Preference.DEGENERATE,
            f"k.p = 0 classified {pref.value}",
        )
    )
    return checks


def sections_checks(sections: int = 6, seed: int = 3) -> list[Check]:
    checks = []
    sites, length = 64, TWO_PI
    theta = build_theta(sites, length, 1)
    phase = half_phase(theta)
    rng = np.random.default_rng(seed)

    worst_plus = worst_minus = worst_comm = worst_density = worst_round = 0.0
    field = gradient_field(theta)
    for _ in range(sections):
        section = random_band_limited_section(sites, length, rng)
        worst_plus = max(
            worst_plus, intertwining_residual(section, theta, 1.0, "plus")
        )
        worst_minus = max(
            worst_minus, intertwining_residual(section, theta, 1.0, "minus")
        )
        worst_comm = max(worst_comm, commutation_residual(section, field, phase))
        worst_density = max(worst_density, density_residual(section, phase))
        back = to_exotic(to_standard(section, phase), phase)
        worst_round = max(worst_round, float(np.max(np.abs(back.values - section.values))))
    checks.append(Check("intertwine-plus", worst_plus <= 1e-10, f"max {worst_plus:.3g}"))
    checks.append(Check("intertwine-minus", worst_minus <= 1e-10, f"max {worst_minus:.3g}"))
    checks.append(Check("phase-commutation", worst_comm <= 1e-15, f"max {worst_comm:.3g}"))
    checks.append(Check("density-invariance", worst_density <= 1e-15, f"max {worst_density:.3g}"))
    checks.append(Check("map-roundtrip", worst_round <= 1e-15, f"max {worst_round:.3g}"))

    section, energy = kernel_mode(theta, 1.0, harmonic=2)
    ker = grid_norm(
        exotic_dirac(section, theta, 1.0, "plus", energy=energy).values, length
    )
    mapped = grid_norm(
        standard_dirac(to_standard(section, phase), 1.0, energy=energy).values, length
    )
    ok = ker <= 1e-10 and mapped <= 1e-10
    checks.append(
        Check("kernel-transport", ok, f"kernel {ker:.3g}, mapped {mapped:.3g}")
    )

    flat_phase = half_phase(build_theta(sites, length, 0))
    section = random_band_limited_section(sites, length, rng)
    image = to_standard(section, flat_phase)
    identity = np.array_equal(image.values, section.values) and not image.antiperiodic
    checks.append(Check("flat-identity", identity, "zero winding maps sections unchanged"))
    return checks


def algebra_checks() -> list[Check]:
    checks = []
    report = magma.analyze(magma.builtin("z2"))
    ok = (
        report.identities == ("S",)
        and report.is_group
        and not report.commutativity_violations
        and report.associativity_violations == 0
    )
    checks.append(Check("z2-group", ok, "parity table is the 2-element group"))

    std = magma.builtin("prefer_standard")
    report = magma.analyze(std)
    dot = magma.DOT
    ok = (
        report.identities == (f"({dot},ab)",)
        and report.absorbers == (f"(ab,{dot})",)
        and report.commutativity_violations == (("(a,b)", "(b,a)"),)
        and report.associativity_violations > 0
        and not report.is_group
    )
    checks.append(
        Check(
            "prefer-standard-structure",
            ok,
            f"single commuting failure {report.commutativity_violations}",
        )
    )

    exo = magma.builtin("prefer_exotic")
    report = magma.analyze(exo)
    ok = (
        report.identities == (f"(ab,{dot})",)
        and report.absorbers == (f"({dot},ab)",)
        and report.commutativity_violations == ()
        and not report.is_group
    )
    checks.append(Check("prefer-exotic-structure", ok, "mirror table, no commuting failure"))

    roundtrip = magma.from_json(magma.to_json(std))
    ok = roundtrip.carrier == std.carrier and roundtrip.table == std.table
    checks.append(Check("magma-json", ok, "JSON round-trip preserves the table"))
    return checks


def chains_checks() -> list[Check]:
    checks = []
    up = WindingGradient(k=np.array([0.0, 0.0, 1.0]), holonomy=TWO_PI)
    momentum = np.array([0.0, 0.0, 0.5])
    dot = magma.DOT

    ctx = chains.build_context(up, momentum)
    final, trace = chains.run_chain(
        f"({dot},ab)", [chains.ChainEvent("(b,a)")], ctx
    )
    checks.append(
        Check(
            "chain-identity-start",
            final == "(b,a)" and trace[0].table == "prefer_standard",
            f"final {final}",
        )
    )

    final, trace = chains.run_chain(
        "(a,b)", [chains.ChainEvent("(a,b)", involute_first=True)], ctx
    )
    ok = final == "(a,b)" and trace[0].table == "prefer_exotic"
    checks.append(Check("chain-involution-swap", ok, f"table {trace[0].table}"))

    final, trace = chains.run_chain(
        "(a,b)",
        [chains.ChainEvent("(b,a)", involute_first=True),
         chains.ChainEvent("(b,a)", involute_first=True)],
        ctx,
    )
    ok = trace[0].table == "prefer_exotic" and trace[1].table == "prefer_standard"
    checks.append(Check("chain-double-involution", ok, "two flips restore the table"))

    perp = chains.build_context(up, np.array([1.0, 0.0, 0.0]))
    final, _ = chains.run_chain(
        "S", [chains.ChainEvent("C"), chains.ChainEvent("C")], perp
    )
    checks.append(Check("chain-parity", final == "S", f"C twice is even, final {final}"))

    try:
        chains.run_chain("S", [chains.ChainEvent(f"(ab,{dot})")], perp)
        ok = False
    except DomainError:
        ok = True
    checks.append(Check("chain-degenerate-guard", ok, "absorber label rejected under z2"))

    absorber = f"(ab,{dot})"
    final, _ = chains.run_chain(
        "(a,b)",
        [chains.ChainEvent(absorber), chains.ChainEvent("(b,a)"),
         chains.ChainEvent(f"({dot},ab)")],
        ctx,
    )
    checks.append(
        Check(
            "chain-absorber",
            final == absorber,
            "absorbing state persists while the table is fixed",
        )
    )
    return checks


def lattice_checks() -> list[Check]:
    checks = []
    trivial = RingSpec(sites=8, circumference=TWO_PI, twist=0.0)
    exotic = RingSpec(sites=8, circumference=TWO_PI, twist=math.pi)
    err0 = np.max(
        np.abs(np.array(ring_spectrum(trivial).eigenvalues) - analytic_levels(trivial))
    )
    err1 = np.max(
        np.abs(np.array(ring_spectrum(exotic).eigenvalues) - analytic_levels(exotic))
    )
    ok = err0 <= 1e-12 and err1 <= 1e-12
    checks.append(Check("quantization", ok, f"integer {err0:.3g}, half-integer {err1:.3g}"))

    massive = RingSpec(sites=8, circumference=TWO_PI, twist=0.0, mass=1.0)
    spectrum = dirac_ring_spectrum(massive, Structure.STANDARD)
    ok = (
        abs(spectrum.eigenvalues[0] - 1.0) <= 1e-9
        and spectrum.multiplicities[0] == 1
        and spectrum.multiplicities[1] == 2
    )
    spectrum = dirac_ring_spectrum(massive, Structure.EXOTIC)
    ok = ok and abs(spectrum.eigenvalues[0] - math.sqrt(1.25)) <= 1e-9
    ok = ok and spectrum.multiplicities[0] == 2
    checks.append(Check("degeneracy-lifting", ok, "ground multiplicity 1 vs 2"))

    full = ring_spectrum(massive, first_order=False)
    values = np.array(
        [v for v, m in zip(full.eigenvalues, full.multiplicities) for _ in range(m)]
    )
    sym = float(np.max(np.abs(np.sort(values) - np.sort(-values))))
    checks.append(Check("charge-symmetry", sym <= 1e-12, f"E -> -E asymmetry {sym:.3g}"))

    theta = build_theta(8, TWO_PI, 1)
    field = gradient_field(theta, scale=0.5)
    report = verify_dispersion(
        RingSpec(sites=8, circumference=TWO_PI, twist=math.pi, mass=1.0), field
    )
    checks.append(
        Check("lattice-vs-closed-form", report.passed, f"max deviation {report.max_deviation:.3g}")
    )

    flat = gradient_field(build_theta(8, TWO_PI, 0))
    mismatch = verify_dispersion(
        RingSpec(sites=8, circumference=TWO_PI, twist=math.pi, mass=1.0), flat
    )
    checks.append(
        Check(
            "twist-mismatch-detected",
            not mismatch.passed and mismatch.max_deviation > 0.01,
            f"max deviation {mismatch.max_deviation:.3g}",
        )
    )
    return checks


SUITES = {
    "winding": winding_checks,
    "dispersion": dispersion_checks,
    "sections": sections_checks,
    "algebra": algebra_checks,
    "chains": chains_checks,
    "lattice": lattice_checks,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        out: list[Check] = []
        for suite in SUITES.values():
            out.extend(suite())
        return out
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return SUITES[name]()
