"""Marginal cone pipelines, the scenario catalog and achievability checks."""

from pipeline.builders import (
    INNER_MODES,
    inner_marginal_classical,
    nonshannon_exprs,
    outer_marginal_classical,
    outer_marginal_quantum,
    relevant_nonshannon_tuples,
)
from pipeline.catalog import CatalogError, Scenario, catalog, get_all_scenarios
from pipeline.gluing import ns_glued_cone, shannon_block
from pipeline.lines import pn_reduced_cone, pn_structure
from pipeline.marginal import MarginalFamily, PipelineError
from pipeline.reproduce import ReproductionReport, reproduce
from pipeline.triangle import enumerate_two_to_one, strict_inclusion_witness
from pipeline.verification import (
    VerificationError,
    VerificationReport,
    verify_rays_achievable,
)

__all__ = [
    "CatalogError",
    "INNER_MODES",
    "MarginalFamily",
    "PipelineError",
    "ReproductionReport",
    "Scenario",
    "VerificationError",
    "VerificationReport",
    "catalog",
    "enumerate_two_to_one",
    "get_all_scenarios",
    "inner_marginal_classical",
    "nonshannon_exprs",
    "ns_glued_cone",
    "outer_marginal_classical",
    "outer_marginal_quantum",
    "pn_reduced_cone",
    "pn_structure",
    "relevant_nonshannon_tuples",
    "reproduce",
    "shannon_block",
    "strict_inclusion_witness",
    "verify_rays_achievable",
]
