"""On-the-fly emptiness checks for Büchi and generalized Büchi automata.

Typical use::

    from buchi import ExplicitGBA, explicit_provider, ascc_check
    g = ExplicitGBA(2, 0, [[1], [0]], [0, 1], k=1)
    verdict, metrics = ascc_check(explicit_provider(g))

``run_algorithm`` picks the compiled kernels for explicit inputs when they
are available (see ``buchi.kernels``).
"""

from .automata import (
    AutomatonProvider,
    ExplicitGBA,
    ExplicitProvider,
    InternStore,
    Verdict,
    acc_indices,
    acc_mask,
    decode_state,
    degeneralize,
    encode_state,
    explicit_provider,
    full_mask,
    is_weak,
    materialize,
    scc_decompose,
)
from .bench import BenchReport, DiffSummary, Instance, percentage_table, run_bench, run_check, run_differential
from .bitstate import BitstateTable, bitstate_check
from .errors import (
    BuchiError,
    CapacityError,
    ConfigError,
    ContractError,
    FormatError,
    GuardSyntaxError,
    InvariantViolation,
)
from .formats import format_gba, load_gba, parse_gba, save_gba
from .generators import GenConfig, gen_gba_ring, gen_nonacc_scc_chain, gen_trivial_accepting, generate, random_gba, weak_random
from .guards import eval_guard, format_guard, parse_guard
from .kernels import ALGORITHMS, BACKEND, COMPILED, run_algorithm
from .metrics import Metrics
from .ndfs import and_check, ndfs_baseline, sd_check
from .oracle import exhaustive_emptiness, oracle_emptiness, validate_lasso
from .product import (
    KripkeStructure,
    LabeledGBA,
    eager_product,
    load_kripke,
    load_labeled_gba,
    parse_kripke,
    parse_labeled_gba,
    product_provider,
)
from .scc_algos import ascc_check, c99_check, gv_check

__version__ = "0.1.0"
