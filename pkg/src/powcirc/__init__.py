"""Power circuits, compact signed-digit arithmetic and the Baumslag group word problem."""
from .arena import Arena, pc_reduce_sequential
from .arith import (
    ArithCircuit,
    ArithGate,
    arith_eval_exact,
    arith_from_json,
    arith_to_json,
    arith_to_pc,
    pc_to_arith,
)
from .baumslag import (
    Beta,
    BrittonWord,
    BsPair,
    bg_naive_oracle,
    bg_parse,
    bg_tower_word,
    bg_word_problem,
    britton_merge,
    britton_pinch_qk,
    britton_pinch_test,
    britton_reduce,
    bs_identity,
    bs_inv,
    bs_letter,
    bs_mul,
    is_britton_reduced,
    word_inverse,
)
from .core import (
    DEFAULT_BUDGET_BITS,
    EMPTY,
    Marking,
    PowerCircuit,
    pc_clone_marking,
    pc_depth,
    pc_disjoint_union,
    pc_eval_exact,
    pc_marking_add,
    pc_marking_mul_pow2,
    pc_marking_negate,
    pc_node_exponents,
    pc_tower_chain,
    pc_validate,
    tower,
)
from .dyadic import (
    PcDyadic,
    dy_add,
    dy_compare,
    dy_from_fraction,
    dy_from_int,
    dy_from_json,
    dy_from_marking,
    dy_is_integer,
    dy_log2_quotient,
    dy_negate,
    dy_shift,
    dy_sign,
    dy_to_integer_marking,
    dy_to_json,
    dy_value,
)
from .errors import *  # noqa: F401,F403
from .gadget import (
    BoolCircuit,
    BoolGate,
    GadgetResult,
    bool_eval,
    bool_from_json,
    bool_normalize,
    bool_to_json,
    bool_to_pc_gadget,
    log_star,
)
from .jsonio import (
    circuit_from_json,
    circuit_to_json,
    dumps,
    loads,
    reduced_from_json,
    reduced_to_json,
    word_from_json,
    word_to_json,
)
from .reduce import (
    Chain,
    ReducedPC,
    ReductionResult,
    ReductionState,
    pc_compare,
    pc_reduce,
    pc_sign,
    rpc_compare_compact,
    rpc_extend_chains,
    rpc_initial_chain,
    rpc_insert_nodes,
    rpc_maximal_chains,
    rpc_trim,
    rpc_update_markings,
    rpc_update_nodes,
)
from .sdr import (
    Ordering,
    SignedDigitRep,
    cr,
    sdr_add,
    sdr_compact,
    sdr_compare,
    sdr_is_compact,
    sdr_max_compact,
    sdr_oracle_unique,
    sdr_value,
)

__version__ = "0.1.0"
