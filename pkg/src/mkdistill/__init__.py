"""GHZ-diagonal N-qubit states, the Mermin-Klyshko operator and bipartite distillability."""
from .bec import BeCertificate, Verdict, be_state, certify, certify_state, j_set, verify_pair_blocking
from .bell import (MeasurementFrame, MkValueResult, align_phases, canonical_mk_operator,
                   mk_operator, mk_value, random_violating_state, violates_mk)
from .dense import PT, densify, extract_lambda, is_npt, partial_transpose, psi_j
from .family import LambdaState, delta, ghz_state, new_lambda_state, random_family_state
from .splits import (Split, SplitReport, distillation_probability_bound, enumerate_distillable,
                     find_distillable_pair, is_pair_distillable, is_split_distillable,
                     min_distillable_bound, separating_splits, split_from_index)

__version__ = "0.1.0"
