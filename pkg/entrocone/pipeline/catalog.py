#!/usr/bin/env python3
"""
Scenario Catalog

Loads the causal scenarios of config/scenarios.yaml: their structures,
marginal families, strategies and golden cones. Data paths in the catalog
are relative to the pipeline data directory (settings.DATA_DIR overrides it).
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml  # type: ignore
from causal.postselect import postselect
from causal.structure import (
    LATENT_QUANTUM,
    CausalStructure,
    CausalStructureError,
    read_structure,
)
from entspace.coords import CoordSystem
from entspace.expressions import EntropyExpr
from entspace.strategy import Strategy, StrategyError, parse_strategy
from loguru import logger
from pipeline.builders import INNER_MODES
from pipeline.gluing import ns_glued_cone, shannon_block
from pipeline.lines import pn_dij_strategies, pn_reduced_cone, pn_structure
from pipeline.marginal import MarginalFamily, PipelineError, coords_of
from pipeline.verification import (
    VerificationReport,
    match_strategies,
    verify_rays_achievable,
)
from ratgeo.cone import GeometryError, HCone, VCone
from ratgeo.cone_io import read_hrep, read_vrep
from ratgeo.double_description import h_to_v
from settings import settings

GENERATOR_LINES = "lines"
GENERATOR_GLUING = "gluing"


class CatalogError(Exception):
    """Exception raised for catalog-related errors."""

    pass


@dataclass
class Scenario:
    """
    A cataloged causal scenario.

    Attributes:
        name: Catalog key
        title: Human readable name
        structure: Causal structure after quantum marking and post-selection
        family: Marginal family the cones are computed for
        strategies: Strategies certifying the rays of `expected[verify]`
        aliases: Strategy variable -> coordinate variable renaming
        expected: Golden cones (HCone / VCone) and ray counts (int)
        nonshannon: Non-Shannon augmentation specs for the outer cone
        inner_mode: Inner approximation mode, if the scenario has one
        verify: Key of the expected ray table the strategies belong to
        slow: Whether reproducing the scenario is a long run
        blocks: Variable sets of a glued scenario, one Shannon block each
        extra_rows: Rows added on top of the glued blocks
        witness: Whether reproduction searches a strict-inclusion witness
    """

    name: str
    title: str
    structure: CausalStructure
    family: MarginalFamily
    strategies: List[Strategy] = field(default_factory=list)
    aliases: Dict[str, str] = field(default_factory=dict)
    expected: Dict[str, Any] = field(default_factory=dict)
    nonshannon: List[str] = field(default_factory=list)
    inner_mode: Optional[str] = None
    verify: Optional[str] = None
    slow: bool = False
    description: str = ""
    blocks: List[Tuple[str, ...]] = field(default_factory=list)
    extra_rows: List[EntropyExpr] = field(default_factory=list)
    witness: bool = False

    @property
    def coords(self) -> CoordSystem:
        return self.family.coords()

    def glued_cone(self) -> HCone:
        """
        Raises:
            CatalogError: If the scenario is not built from blocks
        """
        if not self.blocks:
            raise CatalogError(f"Scenario '{self.name}' is not a glued scenario")
        return ns_glued_cone(
            [shannon_block(b) for b in self.blocks],
            extra=self.extra_rows,
            coords=self.coords,
        )

    def golden(self, key: str) -> Any:
        """
        Raises:
            CatalogError: If the scenario has no such expectation
        """
        if key not in self.expected:
            raise CatalogError(
                f"Scenario '{self.name}' has no expected '{key}'. "
                f"Available: {sorted(self.expected)}"
            )
        return self.expected[key]

    def verification_rays(self) -> VCone:
        """Rays the strategies are meant to hit (H-form goldens are converted)."""
        if self.verify is None:
            raise CatalogError(f"Scenario '{self.name}' has nothing to verify")
        golden = self.golden(self.verify)
        return h_to_v(golden) if isinstance(golden, HCone) else golden

    def verify_strategies(self, tol: Optional[float] = None) -> VerificationReport:
        """
        Pair the strategies with the verification rays and check each pair.

        Rays without a matching strategy are reported pending.
        """
        rays = self.verification_rays()
        coords = coords_of(rays, self.coords.subset_names())
        matched = match_strategies(rays, self.strategies, coords, self.aliases, tol)
        return verify_rays_achievable(rays, matched, coords, self.aliases, tol)


class CatalogLoader:
    """
    Loads and manages scenario definitions.

    Handles the YAML catalog, validation, default merging and the data files
    scenarios refer to.
    """

    def __init__(
        self,
        config_path: Optional[Union[str, Path]] = None,
        data_dir: Optional[Union[str, Path]] = None,
    ) -> None:
        """
        Initialize the catalog loader.

        Args:
            config_path: Path to the catalog file. If None, uses default path.
            data_dir: Directory of structure, cone and strategy files. If None,
                uses settings.DATA_DIR or the packaged data directory.
        """
        current_dir = Path(__file__).parent
        if config_path is None:
            self.config_path = current_dir / "config" / "scenarios.yaml"
        else:
            self.config_path = Path(config_path)
        if data_dir is not None:
            self.data_dir = Path(data_dir)
        elif settings.DATA_DIR is not None:
            self.data_dir = Path(settings.DATA_DIR)
        else:
            self.data_dir = current_dir / "data"
        self.config_data: Dict[str, Any] = {}
        self.scenarios: Dict[str, Dict[str, Any]] = {}
        self.defaults: Dict[str, Any] = {}
        self.validation_rules: Dict[str, Any] = {}

        logger.info(f"CatalogLoader initialized with path: {self.config_path}")

    def load_config(self) -> Dict[str, Any]:
        """
        Load the catalog from YAML.

        Returns:
            Complete catalog dictionary

        Raises:
            CatalogError: If the file cannot be loaded or parsed
        """
        try:
            if not self.config_path.exists():
                raise CatalogError(f"Catalog file not found: {self.config_path}")

            with open(self.config_path, "r", encoding="utf-8") as file:
                self.config_data = yaml.safe_load(file)

            if not self.config_data:
                raise CatalogError("Catalog file is empty or invalid")

            self.scenarios = self.config_data.get("scenarios", {}) or {}
            self.defaults = self.config_data.get("defaults", {}) or {}
            self.validation_rules = self.config_data.get("validation", {}) or {}

            logger.info(f"Loaded catalog with {len(self.scenarios)} scenarios")
            return self.config_data

        except CatalogError:
            raise
        except yaml.YAMLError as e:
            raise CatalogError(f"Failed to parse YAML catalog: {e}")
        except Exception as e:
            raise CatalogError(f"Failed to load catalog: {e}")

    def get_scenario_config(self, scenario_name: str) -> Dict[str, Any]:
        """
        Configuration of one scenario with defaults merged.

        Raises:
            CatalogError: If the scenario is unknown or its entry is invalid
        """
        if not self.config_data:
            self.load_config()

        if scenario_name not in self.scenarios:
            available = list(self.scenarios.keys())
            raise CatalogError(
                f"Scenario '{scenario_name}' not found. "
                f"Available scenarios: {available}"
            )

        merged = self._merge_with_defaults(self.scenarios[scenario_name] or {})
        self._validate_scenario_config(scenario_name, merged)

        logger.debug(f"Retrieved configuration for scenario: {scenario_name}")
        return merged

    def get_all_scenarios(self) -> List[str]:
        if not self.config_data:
            self.load_config()

        return list(self.scenarios.keys())

    def _merge_with_defaults(self, config: Dict[str, Any]) -> Dict[str, Any]:
        merged = dict(config)
        for key, value in self.defaults.items():
            if key not in merged:
                merged[key] = value.copy() if hasattr(value, "copy") else value
        if "parameters" in self.defaults and "parameters" in config:
            merged["parameters"] = {
                **self.defaults["parameters"],
                **config["parameters"],
            }
        return merged

    def _validate_scenario_config(self, name: str, config: Dict[str, Any]) -> None:
        """
        Raises:
            CatalogError: If the entry misses fields or uses unknown values
        """
        for required in self.validation_rules.get("required_fields", []):
            if required not in config:
                raise CatalogError(
                    f"Scenario '{name}' missing required field: {required}"
                )

        generators = self.validation_rules.get("generators", [])
        generator = config.get("generator")
        if generator is not None and generator not in generators:
            raise CatalogError(
                f"Scenario '{name}' has unknown generator: {generator}. "
                f"Supported: {generators}"
            )
        if generator is None and "structure" not in config:
            raise CatalogError(f"Scenario '{name}' needs a structure or a generator")

        inner = config.get("inner")
        if inner is not None and inner not in INNER_MODES:
            raise CatalogError(
                f"Scenario '{name}' has unsupported inner mode: {inner}. "
                f"Supported: {list(INNER_MODES)}"
            )

        expected_keys = self.validation_rules.get("expected_keys", [])
        for key in config.get("expected", {}) or {}:
            if expected_keys and key not in expected_keys:
                raise CatalogError(
                    f"Scenario '{name}' has unknown expectation: {key}. "
                    f"Supported: {expected_keys}"
                )

        verify = config.get("verify")
        expected = config.get("expected") or {}
        if verify is not None and generator is None and verify not in expected:
            raise CatalogError(
                f"Scenario '{name}' verifies '{verify}', which it does not expect"
            )

        limits = self.validation_rules.get("cardinality_limits", {})
        cardinality = config.get("cardinality", 2)
        if limits and not (limits.get("min", 1) <= cardinality <= limits.get("max", 2)):
            raise CatalogError(
                f"Scenario '{name}' cardinality ({cardinality}) outside valid range: "
                f"{limits.get('min', 1)}-{limits.get('max', 2)}"
            )

    def reload_config(self) -> Dict[str, Any]:
        logger.info("Reloading catalog from file")
        return self.load_config()

    def validate_all_scenarios(self) -> Dict[str, bool]:
        """
        Validate every catalog entry.

        Returns:
            Scenario name -> whether its entry is valid
        """
        if not self.config_data:
            self.load_config()

        results = {}
        for scenario_name in self.scenarios:
            try:
                self.get_scenario_config(scenario_name)
                results[scenario_name] = True
                logger.debug(f"Scenario '{scenario_name}' configuration is valid")
            except CatalogError as e:
                results[scenario_name] = False
                logger.error(
                    f"Scenario '{scenario_name}' configuration is invalid: {e}"
                )

        valid_count = sum(results.values())
        logger.info(f"Catalog validation: {valid_count}/{len(results)} scenarios valid")
        return results

    def _path(self, relative: str) -> Path:
        path = self.data_dir / relative
        if not path.exists():
            raise CatalogError(f"Catalog data file not found: {path}")
        return path

    def _structure(self, name: str, config: Dict[str, Any]) -> CausalStructure:
        try:
            structure = read_structure(self._path(config["structure"]))
            quantum = config.get("quantum") or []
            if quantum:
                unknown = [q for q in quantum if q not in structure.latent_nodes()]
                if unknown:
                    raise CatalogError(
                        f"Scenario '{name}' marks {unknown} quantum, "
                        "but they are not latent nodes"
                    )
                nodes = {
                    n: LATENT_QUANTUM if n in quantum else kind
                    for n, kind in structure.nodes.items()
                }
                structure = CausalStructure(nodes, structure.edges, name=structure.name)
            for node in config.get("postselect") or []:
                structure = postselect(structure, node, config.get("cardinality", 2))
        except CausalStructureError as e:
            raise CatalogError(f"Scenario '{name}': {e}")
        return structure.with_name(name)

    def _family(
        self, config: Dict[str, Any], structure: CausalStructure
    ) -> MarginalFamily:
        spec = config.get("family", "all")
        if spec == "all":
            return MarginalFamily.all_observed(structure)
        if spec == "postselected":
            return MarginalFamily.postselected(structure)
        family = MarginalFamily.parse(spec, structure.observed_nodes())
        family.validate(structure)
        return family

    def _strategies(self, name: str, relative: str) -> List[Strategy]:
        with open(self._path(relative), "r", encoding="utf-8") as file:
            entries = yaml.safe_load(file) or []
        strategies = []
        for index, entry in enumerate(entries, start=1):
            label = str(entry.get("name", f"{name}-{index}"))
            try:
                strategies.append(parse_strategy(entry["text"], name=label))
            except KeyError:
                raise CatalogError(f"Strategy {index} in {relative} has no text")
            except StrategyError as e:
                raise CatalogError(f"Strategy '{label}' in {relative}: {e}")
        return strategies

    def _expected(self, config: Dict[str, Any]) -> Dict[str, Any]:
        hook = CoordSystem.from_subset_names
        expected: Dict[str, Any] = {}
        for key, value in (config.get("expected") or {}).items():
            if isinstance(value, int):
                expected[key] = value
            elif str(value).endswith(".hrep"):
                expected[key] = read_hrep(self._path(value), label_hook=hook)
            elif str(value).endswith(".vrep"):
                expected[key] = read_vrep(self._path(value), label_hook=hook)
            else:
                raise CatalogError(f"Unsupported expectation {key}: {value}")
        return expected

    def load_scenario(self, scenario_name: str, n: Optional[int] = None) -> Scenario:
        """
        Build a scenario with its structure, strategies and golden data.

        Args:
            scenario_name: Catalog key
            n: Size parameter for generated scenarios (line-like P_n)

        Raises:
            CatalogError: If the entry or any file it names is invalid
        """
        config = self.get_scenario_config(scenario_name)
        if config.get("generator") == GENERATOR_LINES:
            return self._lines_scenario(scenario_name, config, n)
        if n is not None:
            raise CatalogError(f"Scenario '{scenario_name}' takes no size parameter")
        if config.get("generator") == GENERATOR_GLUING:
            return self._glued_scenario(scenario_name, config)

        try:
            structure = self._structure(scenario_name, config)
            family = self._family(config, structure)
            strategies = (
                self._strategies(scenario_name, config["strategies"])
                if config.get("strategies")
                else []
            )
            expected = self._expected(config)
        except (PipelineError, GeometryError, OSError, yaml.YAMLError) as e:
            raise CatalogError(f"Scenario '{scenario_name}': {e}")

        verify = config.get("verify")
        if verify is not None and strategies:
            rays = expected[verify]
            if not isinstance(rays, VCone) or len(rays) != len(strategies):
                raise CatalogError(
                    f"Scenario '{scenario_name}' lists {len(strategies)} strategies "
                    f"for '{verify}'"
                )

        scenario = Scenario(
            name=scenario_name,
            title=config.get("name", scenario_name),
            structure=structure,
            family=family,
            strategies=strategies,
            aliases=dict(config.get("aliases") or {}),
            expected=expected,
            nonshannon=list(config.get("nonshannon") or []),
            inner_mode=config.get("inner"),
            verify=verify,
            slow=bool(config.get("slow", False)),
            description=config.get("description", ""),
            witness=bool(config.get("witness", False)),
        )
        logger.info(
            f"Loaded scenario {scenario_name}: {len(structure.nodes)} nodes, "
            f"{scenario.coords.dim} marginal coordinates, "
            f"{len(strategies)} strategies"
        )
        return scenario

    def _lines_scenario(
        self, name: str, config: Dict[str, Any], n: Optional[int]
    ) -> Scenario:
        size = n if n is not None else int((config.get("parameters") or {}).get("n", 4))
        if size < 2:
            raise CatalogError(f"Scenario '{name}' needs n >= 2, got {size}")
        structure = pn_structure(size)
        reduced: HCone = pn_reduced_cone(size)
        return Scenario(
            name=name,
            title=f"{config.get('name', name)} (n={size})",
            structure=structure,
            family=MarginalFamily.all_observed(structure),
            strategies=pn_dij_strategies(size),
            expected={"reduced": reduced, "reduced_ray_count": size * (size + 1) // 2},
            inner_mode=config.get("inner"),
            verify="reduced",
            slow=size > 5,
            description=config.get("description", ""),
        )

    def _glued_scenario(self, name: str, config: Dict[str, Any]) -> Scenario:
        parameters = config.get("parameters") or {}
        specs = parameters.get("blocks") or []
        if not specs:
            raise CatalogError(f"Scenario '{name}' lists no blocks to glue")
        blocks = [
            tuple(v.strip() for v in str(spec).split(",") if v.strip())
            for spec in specs
        ]
        family = MarginalFamily.from_subsets(blocks)
        extra_rows: List[EntropyExpr] = []
        if parameters.get("extra"):
            try:
                cone = read_hrep(
                    self._path(parameters["extra"]),
                    label_hook=CoordSystem.from_subset_names,
                )
            except (GeometryError, OSError) as e:
                raise CatalogError(f"Scenario '{name}': {e}")
            extra_rows = [
                EntropyExpr.from_row(row, coords_of(cone)) for row in cone.inequalities
            ]
        structure = CausalStructure.build(observed=family.variables, name=name)
        return Scenario(
            name=name,
            title=config.get("name", name),
            structure=structure,
            family=family,
            expected=self._expected(config),
            slow=bool(config.get("slow", False)),
            description=config.get("description", ""),
            blocks=blocks,
            extra_rows=extra_rows,
        )


# Global catalog loader instance
catalog_loader = CatalogLoader()


def catalog(name: str, n: Optional[int] = None) -> Scenario:
    """
    Convenience function to load a scenario.

    Args:
        name: Catalog key, e.g. "C3", "BI" or "pienaar-a"
        n: Size of parameterised scenarios ("P")
    """
    return catalog_loader.load_scenario(name, n)


def get_scenario_config(name: str) -> Dict[str, Any]:
    return catalog_loader.get_scenario_config(name)


def get_all_scenarios() -> List[str]:
    """Convenience function to list the catalog keys."""
    return catalog_loader.get_all_scenarios()
