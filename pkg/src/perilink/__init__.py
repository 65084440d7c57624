"""Peripheral structures of link groups.

Diagram-level data (PD codes, linking numbers, Wirtinger presentations and
longitudes), finite-quotient enumeration, exact integer group homology with
the commuting-pair and secondary obstruction products, realizability
verdicts, and a constructive ribbon-link builder.
"""

from .catalog import (
    CATALOG_GROUP_NAMES,
    CORPUS_NAMES,
    catalog_group,
    catalog_groups,
    corpus,
    corpus_diagram,
    corpus_presentation,
)
from .diagram import (
    AmbiguousOrientationError,
    Crossing,
    LinkDiagram,
    PDError,
    canonical,
    linking_number,
    multi_connected_sum,
    multi_connected_sum_with_maps,
    parse_pd,
    reverse_orientations,
    reverse_orientations_with_map,
    self_writhe,
    split_union_unknot,
    to_text,
)
from .groups import (
    Abelianization,
    CapExceeded,
    FiniteGroup,
    GroupError,
    GroupPresentation,
    abelianization,
    alternating_group,
    build_group,
    conjugator,
    cyclic_group,
    dicyclic_group,
    dihedral_group,
    direct_product,
    evaluate_word,
    normal_closure,
    permutation_group,
    symmetric_group,
)
from .homenum import (
    Homomorphism,
    PeripheralSystem,
    SearchLimitExceeded,
    enumerate_homs,
    is_meridional,
    peripheral_system,
)
from .homology import (
    ChainVector,
    HomologyClass,
    HomologyGroup,
    ObstructionError,
    QGroup,
    bar_boundary,
    homology_group,
    jl_product,
    pontryagin,
    pontryagin_sum,
    q_group,
)
from .realize import (
    ConstructionError,
    RibbonInput,
    RibbonInputError,
    RibbonRealization,
    Verdict,
    balanced_twist_families,
    check_full,
    check_weak,
    construct_ribbon,
    quadratic_twist_family,
    reversed_realization,
    sum_realization,
    verify_realization,
)
from .snf import smith_normal_form
from .words import Word
from .wirtinger import (
    WirtingerPresentation,
    longitude_raw,
    preferred_longitude,
    preferred_system,
    presentation,
)

__version__ = "0.1.0"
