"""Attribute value reordering for block-coded (HOLAP) data cubes."""
from .cost import (
    DEFAULT_PARAMS,
    BlockShape,
    CostParams,
    block_grid,
    classify_blocks,
    fractional_holap_cost,
    holap_cost,
    per_cell_cost,
    rolap_cost,
)
from .cube import (
    CubeDims,
    Normalization,
    Permutation,
    SliceRef,
    SparseCube,
    apply,
    compose,
    density,
    equivalence_class_cardinality,
    from_dense,
    from_tuples,
    invert,
    slice_count,
    slice_counts,
)
from .datagen import KernelSpec, NoiseSpec, add_noise, is_kernel, kernel_cube, random_normalization
from .experiment import ExperimentConfig, ExperimentReport, preset, run_experiment
from .heuristics import (
    HEURISTICS,
    frequency_sort,
    greedy_sort,
    greedy_sort_trace,
    iterated_matching,
    optimal_size2,
    pairing_weights,
    run_heuristic,
)
from .ingest import export_cube, export_normalization, import_cube, import_normalization, load_relation, read_csv
from .matching import WeightMatrix, brute_force_matching, min_weight_perfect_matching
from .stats import FractionalAllocationCube, fs_bound, independence_sum, independent_allocation_cube

__all__ = [
    "add_noise",
    "apply",
    "block_grid",
    "BlockShape",
    "brute_force_matching",
    "classify_blocks",
    "compose",
    "CostParams",
    "CubeDims",
    "DEFAULT_PARAMS",
    "density",
    "equivalence_class_cardinality",
    "ExperimentConfig",
    "ExperimentReport",
    "export_cube",
    "export_normalization",
    "fractional_holap_cost",
    "FractionalAllocationCube",
    "frequency_sort",
    "from_dense",
    "from_tuples",
    "fs_bound",
    "greedy_sort",
    "greedy_sort_trace",
    "HEURISTICS",
    "holap_cost",
    "import_cube",
    "import_normalization",
    "independence_sum",
    "independent_allocation_cube",
    "invert",
    "is_kernel",
    "iterated_matching",
    "kernel_cube",
    "KernelSpec",
    "load_relation",
    "min_weight_perfect_matching",
    "NoiseSpec",
    "Normalization",
    "optimal_size2",
    "pairing_weights",
    "per_cell_cost",
    "Permutation",
    "preset",
    "random_normalization",
    "read_csv",
    "rolap_cost",
    "run_experiment",
    "run_heuristic",
    "slice_count",
    "slice_counts",
    "SliceRef",
    "SparseCube",
    "WeightMatrix",
]

__version__ = "0.1.0"
