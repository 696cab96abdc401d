"""Graph dynamic random walk engine.

Single-pass weighted reservoir sampling (sequential and block parallel with a
division-free integer acceptance test), relation-constrained and second-order
walkers over CSR graphs, counter-based multi-stream random numbers, and a
trace-driven simulator for degree-aware caching and dynamic burst memory
access.  Every sampling path is validated against statistical oracles; see
the validation module and the test suite.
"""

from .errors import (ConfigError, FormatError, GdrwError, ParseError,
                     SamplingError, TraceValidationError)
from .fixedpoint import FRACTION_BITS, ONE, decode, encode
from .graph import (CsrGraph, from_edges, has_edge, load_edge_list,
                    neighbors_info, read_binary, rmat_generate,
                    with_random_labels, with_random_weights, write_binary)
from .memsim import (AccessTrace, BurstPlan, DegreeAwareCache,
                     DirectMappedCache, MetricsReport, burst_plan,
                     derive_trace, simulate_trace)
from .rng import RngStream, fork_streams
from .sampler import (Reservoir, WeightBlock, block_prefix_sum,
                      exact_distribution, inverse_transform_many,
                      inverse_transform_sample, sample_index_many,
                      selector_accepts, wrs_block_step, wrs_sequential)
from .walkers import (MetaPath, Node2Vec, StationaryStats, StepContext,
                      Termination, WalkQuery, WalkResult, generate_queries,
                      metapath_weight, node2vec_weight, run_batch, run_query,
                      stationary_stats, step, verify_result)

__version__ = "0.1.0"
