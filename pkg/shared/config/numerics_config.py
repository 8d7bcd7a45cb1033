"""
Numerical configuration settings shared across all laboratory modules
"""

# Brownian path simulation
MAX_BUNDLE_ELEMENTS = 250_000_000  # M*N*d cap (float64 => ~2 GB)
PATH_BLOCK_SIZE = 4096  # paths per worker task
BUNDLE_MAGIC = b"BSDEPATH"
BUNDLE_FORMAT_VERSION = 1

# Envelope (inf/sup-convolution) evaluation
DEFAULT_ENVELOPE_TOL = 1e-6
SOLVER_ENVELOPE_TOL = 1e-4  # envelopes evaluated inside backward solves
MAX_ENVELOPE_DIM = 2
COARSE_POINTS_1D = 129  # first-level stencil per axis, one search axis
REFINE_POINTS_1D = 17  # zoom stencil per axis, one search axis
COARSE_POINTS_ND = 33  # first-level stencil per axis, several search axes
REFINE_POINTS_ND = 9
MAX_ZOOM_LEVELS = 60
JOINT_COERCIVITY_FLOOR = 0.5  # replaces (n-1) when n == 1 for joint kinds
ENVELOPE_BATCH_SIZE = 8192  # max query points per chunk
ENVELOPE_CHUNK_ELEMENTS = 1 << 20  # max candidate evaluations held at once
ENVELOPE_TRACKS = 3  # coarse candidates refined independently

# Backward solver
DEFAULT_PICARD_ITERS = 20
DEFAULT_PICARD_TOL = 1e-10
BISECTION_ITERS = 200
MAX_CONDITION_NUMBER = 1e12
DEFAULT_POLY_DEGREE = 3
DEFAULT_LOCAL_BINS = 50
DEFAULT_BETAS = (0.25, 0.5, 0.75)
CLASS_D_LEVELS = (1.0, 10.0, 100.0)
EPS_REG_MULTIPLIER = 3.0

# Assumption lattice
LATTICE_T_COUNT = 32
LATTICE_T_MIN_FRACTION = 1e-4
LATTICE_B_COUNT = 16
LATTICE_MAGNITUDE_EXPONENTS = (-2, -1, 0, 1, 2, 3, 4)
LATTICE_PAIR_COUNT = 10_000
PROBE_DEPTH = 40  # one-sided limit probes y0 -/+ 2^-j, j = 1..40
PROBE_TAIL = 10  # probes inspected for the limit verdict
PROBE_MAX_MAGNITUDE = 10.0  # one-sided probes only at |y0|, |z0| <= this
CHECK_ATOL = 1e-12
CHECK_RTOL = 1e-10
PROBE_ATOL = 1e-6
H3_RADII = (1.0, 10.0)
H3_PATHS = 8
H3_STEPS = 32
H3_Y_POINTS = 41
OSGOOD_DECADES = (2, 4, 6, 8, 10, 12, 14, 16)
OSGOOD_RATIO = 0.5

# Experiments
STAT_MULTIPLIER = 3.0
DETERMINISTIC_SLACK = 1e-6
TAIL_RATIO_MAX = 0.5
CONTROL_POWER_FACTOR = 5.0

# Concurrency
WORKERS_ENV_VAR = "BSDE_LAB_WORKERS"
MAX_DEFAULT_WORKERS = 8

# Report emission
REPORT_SCHEMA_VERSION = "1.0"
CSV_COLUMNS = ["n_or_level", "y0", "stderr", "gap", "verdict"]
