"""Broadcast capacity analysis and max-weight broadcast policy simulation
for multihop wireless networks."""

from .capacity import (
    CapacityResult,
    MulticlassCapacityResult,
    cut_bound_oracle,
    lambda_dag,
    multiclass_capacity,
    proper_cuts,
    sparse_support,
)
from .errors import (
    DagcastError,
    DomainError,
    InvariantViolation,
    ResourceLimitError,
    StructuralError,
)
from .graph import (
    PRIMARY,
    WIRED,
    Activation,
    CycleReport,
    Network,
    ProperCut,
    TopologicalOrder,
    cut_value,
    enumerate_activations,
    is_dag,
    is_matching,
    make_network,
    min_in_degree,
    validate_topology,
)
from .multiclass import (
    ClassSpec,
    MulticlassState,
    admit_packet,
    combined_weights,
    make_classes,
    multiclass_step,
)
from .policy import (
    DeficitView,
    PolicyState,
    SlotDecision,
    compute_deficits,
    compute_weights,
    deficit_minimizers,
    max_weight_activation,
    policy_step,
)
from .rng import SplitMix64
from .scenarios import scenario, scenario_names
from .sim import (
    ArrivalProcess,
    RunMetrics,
    multiclass_fraction_curve,
    run,
    sweep,
)
from .trees import (
    Arborescence,
    TreePacking,
    count_arborescences,
    enumerate_arborescences,
    exchange_packing_edges,
    first_arborescences,
    fixed_arborescence,
    is_arborescence,
    max_disjoint_packing,
    tree_restricted_capacity,
)

__version__ = "0.1.0"
