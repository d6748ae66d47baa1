"""Guessing decoders for binary linear block codes.

GRAND guesses full-length noise patterns and checks the syndrome; GCD guesses
information-part patterns and re-encodes. Both are maximum-likelihood under
soft-weight ordering. The analysis module estimates query counts by saddle
point without decoding.
"""

from .analysis import (BudgetReport, QuerySample, TailQuery, bsc_exact_counts,
                       estimate_query_count, fer_gap_bound, grand_query_lower_bound,
                       min_required_budget, ops_model, rcu_bound, saddlepoint_tail)
from .channels import ChannelSpec, ReceivedWord, awgn, bsc, simulate_transmission
from .decoders import DecodeOutcome, SoftOutput, StopRule, gcd, grand
from .errors import (CapacityError, CodeFormatError, DegenerateCodeError, GuessDecError,
                     InputError, PatternBudgetError, ResolutionError)
from .gf2core import LinearCode, brute_force_mld, load_code, random_linear_code, to_systematic
from .harness import AnalysisConfig, ReportRow, SimConfig, emit_report, run_analysis, run_simulation
from .patterns import PatternStream, Tep, compute_weights, next_pattern

__version__ = "0.1.0"
