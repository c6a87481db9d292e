#!/usr/bin/env python3
"""
entrocone command line

Structure validation, marginal cone pipelines, membership checks, smooth
entropy calculators, AEP experiments and golden reproduction of the
scenario catalog.

Usage:
    entrocone structure validate ic.struct
    entrocone cone outer --catalog C3 --out c3.hrep
    entrocone check vector --cone c3.hrep --vector 11,14,14,20,20,23,28
    entrocone smooth hmineps --spec 3/4,1/4 --eps 1/4
    entrocone reproduce pienaar-a

Results go to standard output (or --out); progress is logged to standard
error. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from causal.postselect import postselect
from causal.structure import CausalStructure, CausalStructureError, read_structure
from entspace.coords import CoordSystem, EntropySpaceError
from entspace.distribution import entropy_vector, read_distribution
from entspace.strategy import StrategyError
from loguru import logger
from pipeline.builders import (
    INNER_MODES,
    LATENT_RANK,
    inner_marginal_classical,
    nonshannon_exprs,
    outer_marginal_classical,
    outer_marginal_quantum,
)
from pipeline.catalog import CatalogError, catalog, catalog_loader, get_all_scenarios
from pipeline.marginal import MarginalFamily, PipelineError, coords_of
from pipeline.reproduce import reproduce
from pipeline.verification import VerificationError
from ratgeo.cone import GeometryError, HCone, VCone
from ratgeo.cone_io import format_hrep, format_vrep, parse_hrep, parse_vrep
from ratgeo.double_description import h_to_v, v_to_h
from ratgeo.lp import LPError
from ratgeo.membership import contains_point
from ratgeo.rational import RationalParseError, as_row
from settings import settings
from smoothrt.aep import aep_rates
from smoothrt.entropies import (
    ADIABATIC,
    THEORIES,
    h_hyp_eps,
    h_min,
    h_min_eps,
    h_zero_eps,
    s_minus,
    s_plus,
)
from smoothrt.majorization import SmoothingError, eps_majorizes, smoothing_witness
from smoothrt.spectrum import Spectrum, SpectrumError
from smoothrt.transforms import embezzling_spectrum, prob_transform_possible

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

FORMATS = ("hrep", "vrep", "text")

DOMAIN_ERRORS = (
    CatalogError,
    CausalStructureError,
    EntropySpaceError,
    GeometryError,
    LPError,
    PipelineError,
    RationalParseError,
    SmoothingError,
    SpectrumError,
    StrategyError,
    VerificationError,
    OSError,
)


@dataclass
class RunConfig:
    """Options shared by every subcommand."""

    subcommand: str
    inputs: List[Path] = field(default_factory=list)
    tolerance: float = 1e-9
    stride: Optional[int] = None
    workers: Optional[int] = None
    output_format: str = "hrep"
    out: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.tolerance < 0:
            raise ValueError(f"Tolerance must be nonnegative, got {self.tolerance}")
        if self.output_format not in FORMATS:
            raise ValueError(f"Unknown output format {self.output_format}")


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None):
    """Send log records to standard error, and to a file when configured."""
    level = (level or settings.LOG_LEVEL).upper()
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:HH:mm:ss} | {level} | {message}")
    target = log_file or settings.LOG_FILE
    if target:
        logger.add(target, level=level, rotation="10 MB")


def existing_path(text: str) -> Path:
    path = Path(text)
    if not path.exists():
        raise argparse.ArgumentTypeError(f"{text} does not exist")
    return path


def nonnegative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return value


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    out.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {out}")


def _read_cone(path: Path):
    """Read an H- or V-representation, recognised by its RAYS section."""
    text = path.read_text(encoding="utf-8")
    hook = CoordSystem.from_subset_names
    if any(line.strip() == "RAYS" for line in text.splitlines()):
        return parse_vrep(text, label_hook=hook)
    return parse_hrep(text, label_hook=hook)


def _as_hcone(cone) -> HCone:
    return v_to_h(cone) if isinstance(cone, VCone) else cone


def _format_cone(cone: HCone, fmt: str) -> str:
    if fmt == "vrep":
        return format_vrep(h_to_v(cone))
    if fmt == "text":
        coords = coords_of(cone)
        return (
            f"{coords.dim} coordinates: {coords}\n"
            f"{len(cone.equalities)} equalities, "
            f"{len(cone.inequalities)} inequalities\n"
        )
    return format_hrep(cone)


# --------------------------------------------------------------------------
# structure


def cmd_structure(args: argparse.Namespace, config: RunConfig) -> int:
    structure = read_structure(args.file)
    lines = [
        f"structure {structure.label}: valid",
        f"observed: {' '.join(structure.observed_nodes())}",
        f"latent: {' '.join(structure.latent_nodes()) or '-'}",
        f"quantum: {' '.join(structure.quantum_nodes()) or '-'}",
        f"order: {' '.join(structure.topological_order())}",
    ]
    _emit("\n".join(lines), None)
    return EXIT_OK


# --------------------------------------------------------------------------
# cone


def _parse_postselect(items: Sequence[str]) -> List[Tuple[str, int]]:
    selections = []
    for item in items:
        node, sep, value = item.partition("=")
        if not sep:
            selections.append((node, 2))
            continue
        try:
            selections.append((node, int(value)))
        except ValueError:
            raise PipelineError(f"Invalid post-selection '{item}', expected NODE=k")
    return selections


def _cone_inputs(
    args: argparse.Namespace,
) -> Tuple[CausalStructure, MarginalFamily, List[str], Optional[str]]:
    nonshannon = list(args.nonshannon or [])
    inner_mode = args.mode
    if args.catalog:
        scenario = catalog(args.catalog, args.n)
        structure, family = scenario.structure, scenario.family
        inner_mode = inner_mode or scenario.inner_mode
    else:
        structure = read_structure(args.structure)
        family = None
    for node, k in _parse_postselect(args.postselect or []):
        structure = postselect(structure, node, k)
        family = None
    if args.marginal == "postselected":
        family = MarginalFamily.postselected(structure)
    elif args.marginal and args.marginal != "all":
        family = MarginalFamily.parse(args.marginal, structure.observed_nodes())
        family.validate(structure)
    if family is None:
        family = MarginalFamily.all_observed(structure)
    return structure, family, nonshannon, inner_mode


def cmd_cone(args: argparse.Namespace, config: RunConfig) -> int:
    if args.kind == "convert":
        return _convert(args, config)
    if not (args.catalog or args.structure):
        logger.error(f"cone {args.kind} needs --structure or --catalog")
        return EXIT_USAGE
    structure, family, nonshannon, inner_mode = _cone_inputs(args)
    extra = nonshannon_exprs(structure, nonshannon) if nonshannon else []
    logger.info(f"Stage: {args.kind} cone of {structure.label} onto {family}")
    if args.kind == "inner":
        cone = inner_marginal_classical(
            structure,
            inner_mode or LATENT_RANK,
            family,
            stride=config.stride,
            workers=config.workers,
        )
    elif args.kind == "quantum" or not structure.is_classical():
        cone = outer_marginal_quantum(
            structure,
            family,
            purify=args.purify,
            extra=extra,
            stride=config.stride,
            workers=config.workers,
        )
    else:
        cone = outer_marginal_classical(
            structure, family, extra, config.stride, config.workers
        )
    _emit(_format_cone(cone, config.output_format), config.out)
    return EXIT_OK


def _convert(args: argparse.Namespace, config: RunConfig) -> int:
    if args.input is None:
        logger.error("cone convert needs --in")
        return EXIT_USAGE
    cone = _read_cone(args.input)
    if args.to == "vrep":
        result = format_vrep(h_to_v(_as_hcone(cone)))
    else:
        result = format_hrep(_as_hcone(cone))
    _emit(result, config.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# check


def cmd_check(args: argparse.Namespace, config: RunConfig) -> int:
    cone = _as_hcone(_read_cone(args.cone))
    if args.what == "vector":
        if not args.vector:
            raise PipelineError("check vector needs --vector")
        vector = list(as_row(args.vector.split(",")))
    else:
        if not args.dist:
            raise PipelineError("check dist needs --dist")
        coords = coords_of(cone)
        vector = list(entropy_vector(read_distribution(args.dist), coords).values)
    report = contains_point(cone, vector, tol=config.tolerance)
    _emit(report.describe(), None)
    return EXIT_OK


# --------------------------------------------------------------------------
# smooth


def _spectrum(text: Optional[str], option: str) -> Spectrum:
    if not text:
        raise SpectrumError(f"Missing {option}")
    return Spectrum.parse(text)


def cmd_smooth(args: argparse.Namespace, config: RunConfig) -> int:
    eps = args.eps
    if args.quantity == "embezzle":
        if args.m is None:
            raise SmoothingError("embezzle needs --m")
        _emit(str(embezzling_spectrum(args.m, eps)), None)
        return EXIT_OK

    s = _spectrum(args.spec, "--spec")
    if args.quantity in ("transform", "prob-transform"):
        target = _spectrum(args.target, "--target")
        if args.quantity == "transform":
            if eps_majorizes(s, target, eps):
                witness = smoothing_witness(s, target, eps)
                _emit(f"possible witness={witness}", None)
            else:
                _emit("impossible", None)
        else:
            result = prob_transform_possible(s, target, eps)
            text = "possible" if result.possible else "impossible"
            if result.mixture is not None:
                text += " witness=" + ",".join(str(x) for x in result.mixture)
            _emit(text, None)
        return EXIT_OK

    reports: Dict[str, Callable[[], str]] = {
        "hmin": lambda: h_min(s).line(),
        "h0": lambda: h_zero_eps(s, eps).line(),
        "hmineps": lambda: h_min_eps(s, eps).line(),
        "hhyp": lambda: h_hyp_eps(s, eps).line(),
        "sminus": lambda: f"{s_minus(s, eps, args.theory):.12g} bits",
        "splus": lambda: f"{s_plus(s, eps, args.theory):.12g} bits",
    }
    _emit(reports[args.quantity](), None)
    return EXIT_OK


# --------------------------------------------------------------------------
# aep


def cmd_aep(args: argparse.Namespace, config: RunConfig) -> int:
    base = _spectrum(args.spec, "--spec")
    rates = aep_rates(base, args.eps, args.n, workers=config.workers)
    lines = [f"H={base.shannon_entropy():.12g}"] + [rate.line() for rate in rates]
    _emit("\n".join(lines), config.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# catalog and reproduce


def cmd_catalog(args: argparse.Namespace, config: RunConfig) -> int:
    lines = []
    for name in get_all_scenarios():
        entry = catalog_loader.get_scenario_config(name)
        golden = ",".join(entry.get("expected") or {}) or "-"
        slow = " slow" if entry.get("slow") else ""
        lines.append(f"{name}\t{entry.get('name', name)}\tgolden={golden}{slow}")
    _emit("\n".join(lines), None)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace, config: RunConfig) -> int:
    if args.name == "all":
        names = []
        for name in get_all_scenarios():
            entry = catalog_loader.get_scenario_config(name)
            if entry.get("expected") and (args.include_slow or not entry.get("slow")):
                names.append(name)
    else:
        names = [args.name]
    passed = True
    for name in names:
        report = reproduce(
            catalog(name), config.tolerance, config.stride, config.workers
        )
        _emit("\n".join(report.lines() + [report.summary()]), None)
        passed = passed and report.passed
    return EXIT_OK if passed else EXIT_DOMAIN


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrocone", description="Entropy cones of causal structures"
    )
    parser.add_argument(
        "--tolerance", type=nonnegative_float, default=None, help="Numeric tolerance"
    )
    parser.add_argument("--stride", type=int, default=None, help="Redundancy stride")
    parser.add_argument("--threads", type=int, default=None, help="Worker processes")
    parser.add_argument("--log-level", default=None, help="Log level (default INFO)")
    parser.add_argument("--log-file", default=None, help="Also log to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    structure = commands.add_parser("structure", help="Causal structure files")
    structure.add_argument("action", choices=["validate"])
    structure.add_argument("file", type=existing_path)
    structure.set_defaults(handler=cmd_structure)

    cone = commands.add_parser("cone", help="Marginal cone pipelines")
    cone.add_argument("kind", choices=["outer", "inner", "quantum", "convert"])
    source = cone.add_mutually_exclusive_group()
    source.add_argument("--structure", type=existing_path)
    source.add_argument("--catalog")
    cone.add_argument("--n", type=int, default=None, help="Size of generated scenarios")
    cone.add_argument("--nonshannon", action="append", help="zy, matus:smax=k, ...")
    cone.add_argument("--marginal", help="all, postselected or X,Y;Y,Z")
    cone.add_argument("--postselect", action="append", help="NODE=k")
    cone.add_argument("--mode", choices=list(INNER_MODES), default=None)
    cone.add_argument("--purify", action="store_true")
    cone.add_argument("--in", dest="input", type=existing_path)
    cone.add_argument("--to", choices=["vrep", "hrep"], default="vrep")
    cone.add_argument("--format", choices=list(FORMATS), default="hrep")
    cone.add_argument("--out", type=Path)
    cone.set_defaults(handler=cmd_cone)

    check = commands.add_parser("check", help="Cone membership")
    check.add_argument("what", choices=["vector", "dist"])
    check.add_argument("--cone", type=existing_path, required=True)
    check.add_argument("--vector", help="Comma-separated entries")
    check.add_argument("--dist", type=existing_path)
    check.set_defaults(handler=cmd_check)

    smooth = commands.add_parser("smooth", help="Smooth entropies and transformations")
    smooth.add_argument(
        "quantity",
        choices=[
            "hmin",
            "h0",
            "hmineps",
            "hhyp",
            "splus",
            "sminus",
            "transform",
            "prob-transform",
            "embezzle",
        ],
    )
    smooth.add_argument("--spec", help='Spectrum, e.g. "3/4,1/4" or "1/8x8"')
    smooth.add_argument("--target", help="Target spectrum for transformations")
    smooth.add_argument("--eps", default="0")
    smooth.add_argument("--theory", choices=list(THEORIES), default=ADIABATIC)
    smooth.add_argument("--m", type=int, default=None, help="Meter rank (embezzle)")
    smooth.set_defaults(handler=cmd_smooth)

    aep = commands.add_parser("aep", help="Asymptotic equipartition rates")
    aep.add_argument("--spec", required=True)
    aep.add_argument("--eps", required=True)
    aep.add_argument("--n", type=int, nargs="+", required=True)
    aep.add_argument("--out", type=Path)
    aep.set_defaults(handler=cmd_aep)

    listing = commands.add_parser("catalog", help="Scenario catalog")
    listing.add_argument("action", choices=["list"])
    listing.set_defaults(handler=cmd_catalog)

    repro = commands.add_parser("reproduce", help="Check golden expectations")
    repro.add_argument("name", help="Catalog key or 'all'")
    repro.add_argument("--include-slow", action="store_true")
    repro.set_defaults(handler=cmd_reproduce)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    inputs = [
        p
        for p in (
            getattr(args, "file", None),
            getattr(args, "structure", None),
            getattr(args, "input", None),
            getattr(args, "cone", None),
            getattr(args, "dist", None),
        )
        if p is not None
    ]
    return RunConfig(
        subcommand=args.command,
        inputs=inputs,
        tolerance=settings.TOLERANCE if args.tolerance is None else args.tolerance,
        stride=args.stride,
        workers=args.threads,
        output_format=getattr(args, "format", "hrep"),
        out=getattr(args, "out", None),
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Execute one command line.

    Returns:
        Exit code: 0 success, 1 domain error, 2 usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    configure_logging(args.log_level, args.log_file)
    try:
        config = _run_config(args)
    except ValueError as e:
        logger.error(str(e))
        return EXIT_USAGE
    try:
        return args.handler(args, config)
    except DOMAIN_ERRORS as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
