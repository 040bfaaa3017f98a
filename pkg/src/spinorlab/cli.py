"""Command line front end.

Subcommands: dispersion, sweep, preference, ring-spectrum, map-check,
algebra (analyze | compose | chain), verify.  Reports are emitted as CSV
(12 significant digits, parameters echoed as leading comment lines) or
JSON (fixed key order, round-trip-exact floats).  Identical invocations
produce byte-identical output; wall time is measured but only ever printed
to stderr, and only with --timing.

Exit codes: 0 success / verification passed, 1 verification failed,
2 usage error, 3 domain error (bad input to the mathematics or an
unreadable/unwritable file).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .chains import ChainEvent, build_context, run_chain, select_table
from .dispersion import (
    Branch,
    ModeSpec,
    Structure,
    default_degeneracy_tol,
    degeneracy_gap,
    dispersion_exact,
    dispersion_semiclassical,
    preferred_branch,
)
from .errors import DomainError
from .lattice import RingSpec, mode_indices, ring_spectrum, verify_dispersion
from .magma import FiniteMagma, analyze, builtin, compose, from_json
from .sections import (
    commutation_residual,
    density_residual,
    exotic_dirac,
    grid_norm,
    half_phase,
    intertwining_residual,
    kernel_mode,
    random_band_limited_section,
    section_from_json,
    standard_dirac,
    to_exotic,
    to_standard,
)
from .verification import run_suite
from .winding import WindingGradient, build_theta, gradient_field

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CommandRequest:
    command: str
    options: dict


@dataclass(frozen=True)
class RunReport:
    command: str
    parameters: dict
    payload: dict
    header: tuple[str, ...] | None = None
    rows: tuple[tuple, ...] | None = None
    exit_code: int = 0
    wall_time: float = 0.0
    text: str | None = None


def _fmt12(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _render_csv(report: RunReport) -> str:
    lines = [f"# {key} = {_fmt12(value)}" for key, value in report.parameters.items()]
    if report.header is not None:
        lines.append(",".join(report.header))
        for row in report.rows or ():
            lines.append(",".join(_fmt12(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _render_json(report: RunReport) -> str:
    document = {"command": report.command, "parameters": report.parameters}
    document.update(report.payload)
    # tabular commands carry their data in rows; structured ones in payload
    if report.header is not None and not report.payload:
        document["rows"] = [
            dict(zip(report.header, row)) for row in (report.rows or ())
        ]
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def emit(report: RunReport, fmt: str, destination: str | None) -> None:
    """Render a report and write it to a file or stdout."""
    if report.text is not None:
        rendered = report.text
    elif fmt == "csv":
        rendered = _render_csv(report)
    elif fmt == "json":
        rendered = _render_json(report)
    else:
        raise DomainError(f"unknown format {fmt!r}")
    if destination is None or destination == "-":
        sys.stdout.write(rendered)
    else:
        Path(destination).write_text(rendered)


def _parse_vector(text: str, dims: int, flag: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != dims:
        raise DomainError(f"{flag} expects {dims} comma-separated numbers, got {text!r}")
    try:
        return np.array([float(part) for part in parts])
    except ValueError:
        raise DomainError(f"{flag} expects numbers, got {text!r}") from None


def _load_config(path: str | None) -> dict[str, float]:
    """Read 'key = value' lines; keys: scale, tol."""
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read config {path!r}: {exc}") from None
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno} is not 'key = value': {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in ("scale", "tol"):
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = float(value.strip())
        except ValueError:
            raise DomainError(f"config line {lineno}: bad number {value.strip()!r}") from None
    return values


def _resolve(options: dict, key: str, fallback):
    """Flag wins over config file; config wins over the built-in default."""
    flag = options.get(key)
    if flag is not None:
        return flag
    config = _load_config(options.get("config"))
    if key in config:
        return config[key]
    return fallback


def _field_from_options(options: dict) -> WindingGradient:
    k = _parse_vector(options["k"], 3, "--k")
    scale = float(_resolve(options, "scale", 1.0))
    # holonomy consistent with a unit-circumference generating ramp; only
    # k and scale enter the dispersion formulas
    return WindingGradient(k=k, holonomy=float(k[2]), scale=scale)


def _run_dispersion(options: dict) -> RunReport:
    mass = float(options["m"])
    momentum = _parse_vector(options["p"], 3, "--p")
    field = _field_from_options(options)
    formula = options.get("formula") or "both"
    if formula not in ("semiclassical", "exact", "both"):
        raise DomainError(f"unknown formula {formula!r}")

    parameters = {
        "m": mass,
        "p": options["p"],
        "k": options["k"],
        "scale": field.scale,
        "formula": formula,
    }
    branches = {}
    for branch in Branch:
        entry = {}
        if formula in ("semiclassical", "both"):
            entry["semiclassical"] = dispersion_semiclassical(
                ModeSpec(mass, momentum, branch), field
            )
        if formula in ("exact", "both"):
            entry["exact"] = dispersion_exact(ModeSpec(mass, momentum, branch), field)
        branches[branch.value] = entry
    payload = {"branches": branches, "gaps": {}}
    if formula in ("semiclassical", "both"):
        payload["gaps"]["semiclassical"] = degeneracy_gap(
            mass, momentum, field, "semiclassical"
        )
    if formula in ("exact", "both"):
        payload["gaps"]["exact"] = degeneracy_gap(mass, momentum, field, "exact")

    columns = ["branch"]
    if formula in ("semiclassical", "both"):
        columns.append("e_semiclassical")
    if formula in ("exact", "both"):
        columns.append("e_exact")
    rows = []
    for branch in Branch:
        row: list = [branch.value]
        if formula in ("semiclassical", "both"):
            row.append(branches[branch.value]["semiclassical"])
        if formula in ("exact", "both"):
            row.append(branches[branch.value]["exact"])
        rows.append(tuple(row))
    return RunReport(
        command="dispersion",
        parameters=parameters,
        payload=payload,
        header=tuple(columns),
        rows=tuple(rows),
    )


def _run_sweep(options: dict) -> RunReport:
    mass = float(options["m"])
    field = _field_from_options(options)
    p_transverse = _parse_vector(options.get("p_transverse") or "0,0", 2, "--p-transverse")
    start, stop = float(options["p3_min"]), float(options["p3_max"])
    count = int(options["count"])
    if count < 0:
        raise DomainError("--count must be non-negative")
    parameters = {
        "m": mass,
        "k": options["k"],
        "scale": field.scale,
        "p_transverse": options.get("p_transverse") or "0,0",
        "p3_min": start,
        "p3_max": stop,
        "count": count,
    }
    header = (
        "p3",
        "e_plus_semiclassical",
        "e_minus_semiclassical",
        "e_plus_exact",
        "e_minus_exact",
        "gap_semiclassical",
        "gap_exact",
    )
    rows = []
    values = np.linspace(start, stop, count) if count else []
    for p3 in values:
        momentum = np.array([p_transverse[0], p_transverse[1], float(p3)])
        rows.append(
            (
                float(p3),
                dispersion_semiclassical(ModeSpec(mass, momentum, Branch.EXOTIC_PLUS), field),
                dispersion_semiclassical(ModeSpec(mass, momentum, Branch.EXOTIC_MINUS), field),
                dispersion_exact(ModeSpec(mass, momentum, Branch.EXOTIC_PLUS), field),
                dispersion_exact(ModeSpec(mass, momentum, Branch.EXOTIC_MINUS), field),
                degeneracy_gap(mass, momentum, field, "semiclassical"),
                degeneracy_gap(mass, momentum, field, "exact"),
            )
        )
    return RunReport(
        command="sweep",
        parameters=parameters,
        payload={},
        header=header,
        rows=tuple(rows),
    )


def _run_preference(options: dict) -> RunReport:
    momentum = _parse_vector(options["p"], 3, "--p")
    field = _field_from_options(options)
    tol = _resolve(options, "tol", None)
    tol = float(tol) if tol is not None else default_degeneracy_tol(0.0, momentum)
    preference = preferred_branch(field, momentum, tol)
    table = select_table(field, momentum, tol)
    signed = field.scale * float(np.dot(field.k, momentum))
    parameters = {
        "p": options["p"],
        "k": options["k"],
        "scale": field.scale,
        "tol": tol,
    }
    payload = {
        "signed_shift": signed,
        "preference": preference.value,
        "table": table,
    }
    return RunReport(
        command="preference",
        parameters=parameters,
        payload=payload,
        header=("signed_shift", "preference", "table"),
        rows=((signed, preference.value, table),),
    )


def _run_ring_spectrum(options: dict) -> RunReport:
    sites = int(options["sites"])
    length = float(options["length"])
    mass = float(options["m"])
    twist_flag = options.get("twist")
    structure_flag = options.get("structure")
    if twist_flag is not None and structure_flag is not None:
        raise DomainError("give either --twist or --structure, not both")
    if twist_flag is not None:
        twist = float(twist_flag)
    else:
        structure = Structure(structure_flag or "standard")
        twist = 0.0 if structure is Structure.STANDARD else math.pi
    spec = RingSpec(sites=sites, circumference=length, twist=twist, mass=mass)
    momenta = ring_spectrum(spec, first_order=True)
    flat = [
        e
        for e, mult in zip(momenta.eigenvalues, momenta.multiplicities)
        for _ in range(mult)
    ]
    energies = [math.sqrt(mass**2 + e**2) for e in flat]
    level_count: dict[int, int] = {}
    for index, energy in enumerate(energies):
        level_count[index] = sum(
            1 for other in energies if abs(other - energy) <= 1e-12
        )
    order = sorted(range(len(flat)), key=lambda i: (energies[i], flat[i]))
    count = options.get("count")
    limit = int(count) if count is not None else len(order)
    if limit < 0:
        raise DomainError("--count must be non-negative")
    rows = []
    for i in order[:limit]:
        e = flat[i]
        n = round((e * length - twist) / TWO_PI)
        rows.append((int(n), e, energies[i], level_count[i]))
    parameters = {
        "sites": sites,
        "length": length,
        "twist": twist,
        "m": mass,
        "count": limit,
    }
    return RunReport(
        command="ring-spectrum",
        parameters=parameters,
        payload={},
        header=("n", "e_n", "energy", "multiplicity"),
        rows=tuple(rows),
    )


def _run_map_check(options: dict) -> RunReport:
    sites = int(options["sites"])
    length = float(options["length"])
    winding = int(options["winding"])
    mass = float(options["m"])
    scale = float(_resolve(options, "scale", 1.0))
    tol = float(_resolve(options, "tol", 1e-10))
    draws = int(options["sections"])
    seed = int(options["seed"])

    theta = build_theta(sites, length, winding)
    phase = half_phase(theta)
    field = gradient_field(theta, scale=scale)
    rng = np.random.default_rng(seed)

    sections = []
    if options.get("section_file"):
        try:
            text = Path(options["section_file"]).read_text()
        except OSError as exc:
            raise DomainError(f"cannot read section file: {exc}") from None
        sections.append(section_from_json(text))
    sections.extend(
        random_band_limited_section(sites, length, rng) for _ in range(draws)
    )
    if not sections:
        raise DomainError("nothing to check: no sections requested")

    worst = {
        "intertwine_plus": 0.0,
        "intertwine_minus": 0.0,
        "commutation": 0.0,
        "density": 0.0,
        "roundtrip": 0.0,
    }
    for section in sections:
        worst["intertwine_plus"] = max(
            worst["intertwine_plus"],
            intertwining_residual(section, theta, mass, "plus", scale),
        )
        worst["intertwine_minus"] = max(
            worst["intertwine_minus"],
            intertwining_residual(section, theta, mass, "minus", scale),
        )
        worst["commutation"] = max(
            worst["commutation"], commutation_residual(section, field, phase)
        )
        worst["density"] = max(worst["density"], density_residual(section, phase))
        back = to_exotic(to_standard(section, phase), phase)
        worst["roundtrip"] = float(
            max(worst["roundtrip"], np.max(np.abs(back.values - section.values)))
        )

    kernel_section, energy = kernel_mode(theta, mass, harmonic=1, scale=scale)
    kernel_residual = grid_norm(
        exotic_dirac(kernel_section, theta, mass, "plus", scale, energy=energy).values,
        length,
    )
    mapped_residual = grid_norm(
        standard_dirac(to_standard(kernel_section, phase), mass, energy=energy).values,
        length,
    )

    passed = (
        worst["intertwine_plus"] <= tol
        and worst["intertwine_minus"] <= tol
        and worst["commutation"] <= 1e-15
        and worst["density"] <= 1e-15
        and worst["roundtrip"] <= 1e-15
        and kernel_residual <= tol
        and mapped_residual <= tol * (1.0 + 1e-6)
    )
    parameters = {
        "sites": sites,
        "length": length,
        "winding": winding,
        "m": mass,
        "scale": scale,
        "tol": tol,
        "sections": len(sections),
        "seed": seed,
    }
    payload = {
        "residuals": worst,
        "kernel_residual": kernel_residual,
        "mapped_kernel_residual": mapped_residual,
        "passed": passed,
    }
    return RunReport(
        command="map-check",
        parameters=parameters,
        payload=payload,
        exit_code=0 if passed else 1,
    )


def _magma_from_options(options: dict) -> FiniteMagma:
    name = options.get("table")
    path = options.get("table_file")
    if (name is None) == (path is None):
        raise DomainError("give exactly one of --table or --table-file")
    if name is not None:
        return builtin(name)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read table file: {exc}") from None
    return from_json(text)


def _run_algebra_analyze(options: dict) -> RunReport:
    magma_obj = _magma_from_options(options)
    report = analyze(magma_obj)
    payload = {
        "name": magma_obj.name,
        "carrier": list(magma_obj.carrier),
        "table": [list(row) for row in magma_obj.table],
        "identities": list(report.identities),
        "absorbers": list(report.absorbers),
        "commutativity_violations": [list(pair) for pair in report.commutativity_violations],
        "associativity_violations": report.associativity_violations,
        "associativity_witness": list(report.associativity_witness)
        if report.associativity_witness
        else None,
        "is_group": report.is_group,
    }
    return RunReport(
        command="algebra analyze",
        parameters={"table": magma_obj.name},
        payload=payload,
    )


def _run_algebra_compose(options: dict) -> RunReport:
    magma_obj = _magma_from_options(options)
    result = compose(magma_obj, options["left"], options["right"])
    return RunReport(
        command="algebra compose",
        parameters={"table": magma_obj.name},
        payload={"left": options["left"], "right": options["right"], "result": result},
        header=("left", "right", "result"),
        rows=((options["left"], options["right"], result),),
    )


def _run_algebra_chain(options: dict) -> RunReport:
    momentum = _parse_vector(options["p"], 3, "--p")
    field = _field_from_options(options)
    tol = _resolve(options, "tol", None)
    tol = float(tol) if tol is not None else None
    context = build_context(field, momentum, tol)
    try:
        text = Path(options["events"]).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read events file: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid events JSON: {exc}") from None
    if not isinstance(raw, list):
        raise DomainError("events JSON must be a list of {operand, involute} objects")
    events = []
    for item in raw:
        if not isinstance(item, dict) or "operand" not in item:
            raise DomainError("each event needs an 'operand' key")
        events.append(
            ChainEvent(
                operand=str(item["operand"]),
                involute_first=bool(item.get("involute", False)),
            )
        )
    final, trace = run_chain(options["initial"], events, context)
    parameters = {
        "p": options["p"],
        "k": options["k"],
        "scale": field.scale,
        "tol": context.tol,
        "initial": options["initial"],
        "events": options["events"],
    }
    payload = {
        "initial_table": context.active_table,
        "final": final,
        "trace": [
            {"step": s.step, "table": s.table, "state": s.state} for s in trace
        ],
    }
    return RunReport(command="algebra chain", parameters=parameters, payload=payload)


def _run_verify(options: dict) -> RunReport:
    checks = run_suite(options.get("suite") or "all")
    lines = [
        f"{'PASS' if check.passed else 'FAIL'} {check.name}: {check.detail}"
        for check in checks
    ]
    failed = sum(1 for check in checks if not check.passed)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return RunReport(
        command="verify",
        parameters={"suite": options.get("suite") or "all"},
        payload={"checks": len(checks), "failed": failed},
        exit_code=0 if failed == 0 else 1,
        text="\n".join(lines) + "\n",
    )


_RUNNERS = {
    "dispersion": _run_dispersion,
    "sweep": _run_sweep,
    "preference": _run_preference,
    "ring-spectrum": _run_ring_spectrum,
    "map-check": _run_map_check,
    "algebra analyze": _run_algebra_analyze,
    "algebra compose": _run_algebra_compose,
    "algebra chain": _run_algebra_chain,
    "verify": _run_verify,
}


def run_command(request: CommandRequest) -> RunReport:
    if request.command not in _RUNNERS:
        raise DomainError(f"unknown command {request.command!r}")
    started = time.perf_counter()
    report = _RUNNERS[request.command](request.options)
    elapsed = time.perf_counter() - started
    return RunReport(
        command=report.command,
        parameters=report.parameters,
        payload=report.payload,
        header=report.header,
        rows=report.rows,
        exit_code=report.exit_code,
        wall_time=elapsed,
        text=report.text,
    )


def _add_common(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default=default_format)
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--config", default=None, help="key = value file for scale/tol")
    parser.add_argument("--timing", action="store_true", help="print wall time to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinorlab",
        description="Ring spinor structures: dispersion splitting, spectral checks, "
        "composition tables.",
    )
    parser.add_argument("--version", action="version", version=f"spinorlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", help="branch energies at one momentum")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--p", required=True, help="momentum as x,y,z")
    p.add_argument("--k", required=True, help="winding gradient as x,y,z")
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--formula", choices=("semiclassical", "exact", "both"), default="both")
    _add_common(p, "csv")

    p = sub.add_parser("sweep", help="branch energies over a ring-momentum range")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--k", required=True, help="winding gradient as x,y,z")
    p.add_argument("--p-transverse", dest="p_transverse", default=None, help="px,py")
    p.add_argument("--p3-min", dest="p3_min", type=float, required=True)
    p.add_argument("--p3-max", dest="p3_max", type=float, required=True)
    p.add_argument("--count", type=int, required=True, help="number of sample points")
    p.add_argument("--scale", type=float, default=None)
    _add_common(p, "csv")

    p = sub.add_parser("preference", help="which branch the field sign prefers")
    p.add_argument("--p", required=True, help="momentum as x,y,z")
    p.add_argument("--k", required=True, help="winding gradient as x,y,z")
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    _add_common(p, "json")

    p = sub.add_parser("ring-spectrum", help="twisted ring levels and multiplicities")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--length", type=float, required=True)
    p.add_argument("--m", type=float, default=0.0)
    p.add_argument("--twist", type=float, default=None)
    p.add_argument("--structure", choices=("standard", "exotic"), default=None)
    p.add_argument("--count", type=int, default=None, help="emit only this many rows")
    _add_common(p, "csv")

    p = sub.add_parser("map-check", help="residuals of the half-phase operator identities")
    p.add_argument("--sites", type=int, default=64)
    p.add_argument("--length", type=float, default=TWO_PI)
    p.add_argument("--winding", type=int, default=1)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--sections", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--section-file", dest="section_file", default=None)
    _add_common(p, "json")

    algebra = sub.add_parser("algebra", help="finite composition tables")
    algebra_sub = algebra.add_subparsers(dest="subcommand", required=True)

    p = algebra_sub.add_parser("analyze", help="exhaustive structure report")
    p.add_argument("--table", choices=("z2", "prefer_standard", "prefer_exotic"), default=None)
    p.add_argument("--table-file", dest="table_file", default=None, help="magma JSON file")
    _add_common(p, "json")

    p = algebra_sub.add_parser("compose", help="one table lookup")
    p.add_argument("--table", choices=("z2", "prefer_standard", "prefer_exotic"), default=None)
    p.add_argument("--table-file", dest="table_file", default=None)
    p.add_argument("left")
    p.add_argument("right")
    _add_common(p, "json")

    p = algebra_sub.add_parser("chain", help="evaluate an event chain")
    p.add_argument("--events", required=True, help="JSON list of {operand, involute}")
    p.add_argument("--initial", required=True)
    p.add_argument("--p", required=True, help="momentum as x,y,z")
    p.add_argument("--k", required=True, help="winding gradient as x,y,z")
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    _add_common(p, "json")

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument(
        "--suite",
        choices=("all", "winding", "dispersion", "sections", "algebra", "chains", "lattice"),
        default="all",
    )
    _add_common(p, "json")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    options = vars(args).copy()
    command = options.pop("command")
    if "subcommand" in options:
        command = f"{command} {options.pop('subcommand')}"
    fmt = options.pop("format")
    destination = options.pop("out")
    timing = options.pop("timing")
    try:
        report = run_command(CommandRequest(command=command, options=options))
        emit(report, fmt, destination)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if timing:
        print(f"wall time: {report.wall_time:.6f} s", file=sys.stderr)
    return report.exit_code


def console_main() -> None:
    sys.exit(main())
