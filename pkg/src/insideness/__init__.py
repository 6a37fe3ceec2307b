"""Digital Jordan curves, exact insideness ground truth, and the
hand-constructed networks that solve the problem exactly."""

__version__ = "0.1.0"

from .grid import (
    BinaryImage,
    InvalidCurveError,
    JordanCurve,
    Pixel,
    Violation,
    ViolationKind,
    is_border,
    neighbors4,
    neighbors8,
    render_cycle,
    require_jordan_curve,
    validate_cycle_witness,
    validate_jordan_curve,
)
from .oracles import (
    CURVE,
    INSIDE,
    OUTSIDE,
    CrossingsField,
    InsidenessMask,
    flood_fill_outside,
    horizontal_crossings,
    masks_equal_on_background,
    per_image_accuracy,
    ray_parity_insideness,
)
from .generators import (
    DEFAULT_SIZES,
    Dataset,
    GeneratorParams,
    RetryExhausted,
    build_dataset,
    derive_seed,
    dissimilar,
    gen_digs,
    gen_polar,
    gen_random_walk,
    gen_spiral,
    generate_curve,
    segment4,
)
from .networks import (
    ConvLayerSpec,
    RayNetSpec,
    boolean_and_net,
    boolean_not_net,
    build_dilated_ray_net,
    build_parity_head,
    build_ray_net,
    conv2d,
    eval_net,
    load_net,
    net_from_text,
    net_to_text,
    network_crossings,
    parity,
    save_net,
)
from .recurrent import (
    ColoringResult,
    ColoringState,
    ConvLstmSpec,
    GateSpec,
    NoConvergence,
    build_coloring_convlstm,
    build_identity_convlstm,
    coloring_step_rnn,
    coloring_truth_table,
    convlstm_step,
    run_coloring,
    run_convlstm,
    stack_convlstms,
    unroll_stack,
)
from .enumeration import (
    CycleEnumeration,
    SizeTooLarge,
    canonicalize_cycle,
    enumerate_grid_cycles,
    enumerate_jordan_curves_exact,
    jordan_lower_bound,
    pad,
    upsample_cycle,
    upsampled_curves,
)
from .netpbm import read_pbm, read_pgm, write_pbm, write_pgm
from .storage import LoadedDataset, load_dataset, write_dataset
from .report import ImageResult, VerificationReport, render_report_figure, write_report
from .solvers import ANALYTIC_SOLVERS, SOLVERS, get_solver
