"""riplab: model-based RIP-1 measurement matrices at desk scale.

Build (sample + verify) sparse measurement matrices for block-, tree- and
general-sparse signal models, certify their RIP-1 constants exactly or by
Monte Carlo, sparsify certified matrices, decode by exhaustive l1 regression,
and evaluate the row-count bounds the constructions live between.
"""

from .bounds import (BoundQuery, collision_tail_estimate, counting_check,
                     eval_bound, evaluate, packing_oracle, packing_witness)
from .errors import (CapError, CertificationError, InputError, LpError,
                     ModelUnsupportedError, PlanInfeasibleError, RiplabError)
from .models import (Model, count_sparse_sets, enumerate_members,
                     enumerate_sparse_sets, format_model, format_support,
                     is_member, is_sparse, model_partition, model_size,
                     parse_model, parse_support, project, random_member,
                     tree_cover)
from .recovery import (RecoveryResult, chain_inequalities, l1_regress,
                       recover, rip_for_recovery)
from .sketch import (BipartiteGraph, MeasurementMatrix, PlanParams, neighbors,
                     plan_params, sample_graph, to_matrix)
from .sparsify import SparsifyOutcome, model_sparsify, sparsify
from .verify import (ExpansionReport, RipReport, SlackReport, expansion_check,
                     generalized_expander_slack, norm_gap_check,
                     rip1_interval, row_max_sum, sign_vector)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
