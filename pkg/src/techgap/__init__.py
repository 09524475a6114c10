"""Technology-gap discovery over an ontology-backed knowledge graph."""

from .ontology import (
    ConceptNode,
    ExpansionQuery,
    OntologyEdge,
    OntologyGraph,
    PathLabel,
    load_ontology,
)
from .ingest import (
    DataEdge,
    FundingRecord,
    NewsDocument,
    PartnershipRecord,
    PatentRecord,
    derive_relationships,
    load_source,
)
from .stores import ViewSnapshot, materialize_view, refresh
from .analytics import (
    QuasiClique,
    RoiSubgraph,
    TemporalCommunityIndex,
    build_temporal_index,
    clustering_coefficient,
    detect_densifying_regions,
    ego_network,
    k_truss,
    quasi_cliques,
    truss_decomposition,
)
from .landscape import Landscape, construct_landscape, kpi_cube, run_landscape
from .gap import ConditionSet, GapQuery, GapResult, kpi_distance, run_gap
from .generator import GapPlant, RoiPlant, SyntheticScenario, generate_scenario
from .workspace import Workspace

__version__ = "0.1.0"
