"""Cycle-length statistics for turbo-decoding and LDPC graphs."""

__version__ = "0.1.0"

from .census import (  # noqa: E402
    CycleCensus,
    census,
    count_cycles_at_node,
    count_cycles_with_u_nodes,
    min_cycle_length_at_node,
)
from .errors import ConstructionFailure, InvalidParameterError  # noqa: E402
from .estimator import (  # noqa: E402
    EmbedBounds,
    TheoryCurve,
    embed_prob_bounds,
    k_half,
    ldpc_embed_prob,
    ldpc_prob_no_cycle_leq,
    prob_no_cycle_exact_len,
    prob_no_cycle_leq,
    prob_no_cycle_leq_closed,
    prob_no_cycle_leq_with_u,
    theory_curve,
)
from .experiment import (  # noqa: E402
    ExperimentConfig,
    SimulationReport,
    compare_report,
    estimate_sigma,
    independence_report,
    run_simulation,
)
from .graphs import (  # noqa: E402
    LdpcGraph,
    Permutation,
    TurboGraph,
    build_ldpc_graph,
    build_turbo_graph,
    gen_random_permutation,
    gen_s_random_permutation,
    verify_s_property,
)
from .pictures import (  # noqa: E402
    cycle_choices,
    enumerate_pictures,
    ldpc_picture_count,
    path_choices,
    picture_count,
    total_pictures,
)
