"""dockdrill: drilldown engine for multi-body protein docking ensembles.

Builds the contact hierarchy of a complex ensemble (configurations, protein
pairs, amino-acid pairs), evaluates an ordered multi-level filter queue,
scores similarity against a primary configuration, and computes the spatial
density overviews and exploded layouts behind the 3D views. A session HTTP
API and a batch CLI expose the same engine.
"""

__version__ = "0.1.0"

from .constants import charge_class, hydrophobicity, vdw_radius
from .errors import (
    DegenerateGeometryError,
    DockdrillError,
    EmptyStructureError,
    InputError,
    IntegrityError,
    MappingError,
    ParseError,
    UnknownEntityError,
)
from .pdb import Atom, format_structure, parse_structure_file
from .ingest import (
    ChainMapping,
    PropertyTable,
    RawEnsemble,
    load_ensemble,
    load_reference_configuration,
    read_mapping_file,
    read_property_table,
)
from .hierarchy import (
    AminoAcid,
    ComplexConfiguration,
    ComplexEnsemble,
    ProteinPairConfiguration,
    ProteinPairEnsemble,
    Reference,
    aap_key,
    build_hierarchy,
    detect_contacts,
    pair_key,
)
from .aggregates import (
    PPEAggregate,
    overview_model,
    ppe_aggregate,
    protein_view_model,
    residue_matrix_model,
)
from .filters import (
    FilterQueue,
    FilterRecord,
    Selection,
    SubjectSpec,
    VisibilityState,
    cell_marks,
    evaluate,
    propagate_selection,
    resolve_subject,
)
from .similarity import (
    cc_similarity,
    contact_zone_model,
    ppc_similarity,
    rank_by_similarity,
    rank_candidates,
    similarity_column,
)
from .spatial import (
    DensityField,
    ExplodedLayout,
    RigidTransform,
    TriangleMesh,
    compute_density,
    density_at_points,
    exploded_layout,
    extract_isosurface,
    kabsch_superpose,
    rmsd,
)

__all__ = [name for name in dir() if not name.startswith("_")]
