"""Exact arithmetic for abelian-by-cyclic groups: ball enumeration,
conjugacy invariants, class-growth ratios, Folner-box experiments and
unit-root spectral tables."""

from .conjugacy import (
    UnionFind,
    are_conjugate,
    brute_force_partition,
    conjugacy_key,
    matrix_quotient,
)
from .enumeration import (
    BallIndex,
    CacheCorruptError,
    CacheError,
    CacheVersionError,
    ResourceCapError,
    enumerate_ball,
    load_index,
    save_index,
)
from .folner import (
    congruence_witness,
    finite_n_solutions,
    folner_box,
    left_defect,
    right_defect,
    separating_translate,
    translate_experiment,
    window_nonempty,
)
from .groups import (
    BaumslagSolitarContext,
    Element,
    GroupContext,
    LamplighterContext,
    MatrixContext,
    load_matrix_config,
    make_bs,
    make_lamplighter,
    make_matrix_context,
    parse_group_descriptor,
)
from .linalg import (
    det_int,
    integer_kernel_basis,
    smith_normal_form,
    unimodular_inverse,
)
from .ratios import decay_fit, ratio_table, threshold_function, write_csv
from .spectral import (
    cyclotomic_orders,
    epsilon_norm_table,
    periodic_subgroup_basis,
    relative_growth_table,
    unit_root_period,
    unit_root_projection,
)
from .words import (
    Word,
    cyclic_reduce,
    evaluate,
    format_word,
    parse_word,
    to_staircase,
)

__version__ = "0.1.0"
