"""Arc-consistency toolkit for simple temporal networks.

Exact interval algebra, the network models and their text formats, a
centralized sweep solver with a shortest-path oracle, a deterministic
multi-agent runtime running the distributed protocol, workload generators,
and a benchmarking CLI.
"""

from .bench import CSV_COLUMNS, RunMetrics, emit_csv, parse_bench_config, read_metrics_csv, run_bench
from .distributed import DistributedRun, SolverAgent, solve_distributed
from .errors import (
    BoundOverflowError,
    DeadlockError,
    FormatError,
    GenerationError,
    ProtocolError,
    RunawayError,
    StnacError,
    ValidationError,
)
from .intervals import EMPTY, Interval, interval, point
from .mastn import (
    AgentView,
    ExternalConstraint,
    FlatIndex,
    Mastn,
    agent_adjacency,
    agent_view,
    components,
    flatten,
    parse_mastn,
    serialize_mastn,
)
from .oracle import (
    NegativeCycle,
    minimal_constraint_matrix,
    oracle_minimal_constraint,
    oracle_minimal_domains,
)
from .rng import SplitMix64
from .sim import (
    AgentMessage,
    AuditResult,
    LogEntry,
    MsgKind,
    SimConfig,
    SimReport,
    TreeInfo,
    audit_privacy,
    dump_log,
    echo_setup,
    run_simulation,
)
from .solver import (
    AcClosure,
    AcInconsistent,
    AcOutcome,
    enforce_ac,
    extract_bound_solution,
    is_arc_consistent,
    sample_solution,
    verify_assignment,
)
from .stn import DEFAULT_MAGNITUDE_CAP, ConstraintUpdate, Stn, parse_stn, serialize_stn
from .workloads import (
    FAMILIES,
    GenSpec,
    gen_factory_mastn,
    gen_grid_stn,
    gen_random_mastn,
    gen_random_stn,
    gen_scale_free_stn,
    generate,
    render_generated,
)

__version__ = "0.1.0"
