"""moorelearn: learn deterministic complete Moore machines from I/O traces.

The package provides three passive learning algorithms (a prefix-tree
baseline, per-output-bit RPNI with a product construction, and a joint
red-blue merging algorithm that recovers the target machine from a
characteristic sample), plus characteristic-sample generation, random minimal
machine generation, equivalence/isomorphism checking, three-tier accuracy
evaluation, and a benchmark harness.  See the README for the CLI and file
formats.
"""

from ._kernels import ENGINE_ENV_VAR, NUMBA_AVAILABLE, default_engine, get_kernels
from .automata import (
    Alphabet,
    Dfa,
    Mark,
    MooreMachine,
    Word,
    complete_dfa_with_self_loops,
    complete_with_self_loops,
    equivalent,
    isomorphic,
    length_lex_key,
    minimize,
    product_aligned,
    product_general,
    run,
)
from .charsample import (
    CharacteristicViolation,
    CharSampleReport,
    characteristic_sample,
    is_characteristic,
    min_distinguishing_suffix,
    nucleus,
    random_minimal_moore,
    shortest_prefixes,
)
from .errors import (
    AlphabetMismatchError,
    EmptyTestSetError,
    GenerationFailureError,
    InconsistentTracesError,
    InvalidCodeError,
    MarkConflictError,
    MooreLearnError,
    SkeletonMismatchError,
    TraceParseError,
    UndefinedTransitionError,
)
from .formats import (
    load_benchmark_config,
    load_machine,
    load_traces,
    machine_from_json,
    machine_to_dot,
    machine_to_json,
    parse_benchmark_config,
    parse_traces,
    save_machine,
    save_traces,
    traces_from_json,
    traces_to_json,
    write_traces,
)
from .evaluation import (
    ALGORITHMS,
    AccuracyPolicy,
    BenchmarkConfig,
    BenchmarkResult,
    accuracy,
    benchmark_csv,
    format_benchmark_table,
    generate_test_set,
    run_benchmark,
    score_trace,
)
from .learners import (
    LearnResult,
    LearnStats,
    PtaProduct,
    RedBlueState,
    UndoLog,
    build_ptap,
    learn_mooremi,
    learn_prpni,
    learn_ptap,
    mooremi_merge,
    rpni,
)
from .traces import (
    ExamplePartition,
    MooreExample,
    MooreTrace,
    OutputEncoding,
    TraceSet,
    make_encoding,
    partition_examples,
    traces_to_examples,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
