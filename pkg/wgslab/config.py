import math
import os

from dotenv import load_dotenv

load_dotenv()

TOOL_VERSION = "0.4.0"

# =============================================================================
# ENVIRONMENT
# =============================================================================

# Worker pool size override for grid scans
WORKERS_ENV = "WGSLAB_WORKERS"

# Where CSV/JSON run outputs land when --outdir is not given
OUTPUT_DIR = os.getenv("WGSLAB_OUTPUT_DIR", "results")

LOG_LEVEL = os.getenv("WGSLAB_LOG_LEVEL", "WARNING")

# =============================================================================
# CAPACITY LIMITS
# =============================================================================

# Largest N for which a dense N x N weight matrix is materialized
DENSE_WEIGHT_CAP = 4096

# Dense state vectors (2^N complex amplitudes)
MAX_STATE_QUBITS = 20

# Exhaustive bipartition search
MAX_BRUTE_QUBITS = 16

# Closed-form subset density matrices
MAX_RDM_SUBSET = 12

# Complement sites contracted per block in rdm_subset
RDM_BLOCK_SITES = 2048

# Spectrum checks against the dense oracle
MAX_CHECK_QUBITS = 14
MAX_CHECK_SUBSET = 10

# Exhaustive subset scans in max_eig_over_subsets
MAX_EXHAUSTIVE_SUBSET = 6
MAX_EXHAUSTIVE_SITES = 24

# =============================================================================
# NUMERICAL POLICY
# =============================================================================

# |cos| below this counts as an exact zero factor
COS_FLOOR = 1e-300

# Running log-products below this underflow exp() to 0.0
LOG_UNDERFLOW = -745.0

# Tail factors with t/(2 r^alpha) below this use the power-sum series
SERIES_X_MAX = 1e-2

# Finite-difference step for d/dt and d/dalpha
FD_STEP = 1e-5

# Left/right derivative mismatch that marks a kink
KINK_THRESHOLD = 1e-2

# Simpson quadrature grid for time averages
SIMPSON_POINTS = 6001
DEFAULT_T = 3 * math.pi

# Half-width of the jump probe around a candidate alpha*
DEFAULT_DELTA = 0.001

# A cell difference is a jump when it exceeds this multiple of the median
JUMP_FACTOR = 10.0
JUMP_WINDOW = 10

# |gbar_2pi| below this is finite-difference rounding noise (about eps / FD_STEP) and counts as zero
GBAR_NOISE_FLOOR = 1e-8

# N_sat scans stop here
NSAT_CAP = 10**6

# |d<G>/dalpha| below this marks the quasi-local to local knee
KNEE_THRESHOLD = 1e-3

# Deformation angle range in degrees
THETA_MIN_DEG = 90.0
THETA_MAX_DEG = 150.0

# Honeycomb approach offsets (degrees either side of 120)
HONEYCOMB_THETA = 120.0
HONEYCOMB_OFFSETS = (0.5, 0.2, 0.1)

# Random subsets drawn by the sampled subset scan
DEFAULT_SUBSET_SAMPLES = 1000


def get_worker_count(flag: int | None = None) -> int:
    """
    Resolve the worker pool size.

    Args:
        flag: Value given on the command line, if any

    Returns:
        Explicit flag, else WGSLAB_WORKERS, else the machine's CPU count

    Raises:
        ValueError: If the resolved value is not a positive integer
    """
    if flag is not None:
        workers = flag
    else:
        raw = os.getenv(WORKERS_ENV)
        if raw:
            try:
                workers = int(raw)
            except ValueError:
                raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
        else:
            workers = os.cpu_count() or 1

    if workers < 1:
        raise ValueError(f"Worker count must be positive, got {workers}")
    return workers
