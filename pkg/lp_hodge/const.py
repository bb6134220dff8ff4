"""Constants for the lp-hodge package."""

from fractions import Fraction

# Package constants
DOMAIN = "lp_hodge"
REPORT_SCHEMA = "lp-hodge-report/1"
INFINITY = "inf"

# Exit codes of the command line interface
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_SOLVER_FAILED = 3

# Exterior algebra limits
MAX_FRAME_DIMENSION = 16

# Root system types and their minimal ranks
ROOT_TYPES = ["A", "B", "C", "D", "E", "F", "G"]
MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}
EXCEPTIONAL_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}

# Closed forms of n_G(1) for the split cases
SPLIT_N1_FORMULA = {
    "A": lambda n: 2 * n - 2,
    "B": lambda n: 4 * n - 6,
    "C": lambda n: 2 * n - 2,
    "D": lambda n: 4 * n - 8,
    "G": lambda n: 4,
    "F": lambda n: 14,
    "E": lambda n: {6: 20, 7: 32, 8: 56}[n],
}

# Araki multiplicities (short, long) of the restricted C_n cases
RESTRICTED_CN_MULTIPLICITIES = {1: (2, 1), 2: (4, 3), 3: (4, 1), 4: (8, 1)}

# Sample ranks used by the Gromov table rows
GROMOV_TABLE_RANKS = [("A", 4), ("B", 4), ("C", 4), ("D", 5), ("G", 2), ("F", 4), ("E", 6), ("E", 7), ("E", 8)]
GROMOV_TABLE_RESTRICTED_RANK = 3

# Verdicts
VERDICT_VANISHES_REDUCED = "vanishes-reduced"
VERDICT_VANISHES_TORSION = "vanishes-torsion"
VERDICT_P2_RULE = "p2-middle-degree-rule"
VERDICT_NOT_COVERED = "not-covered"
VERDICT_NOT_APPLICABLE = "not-applicable"

# Default configuration values
DEFAULT_GAUSS_NODES = 12
DEFAULT_RADIAL_NODES_PER_UNIT = 48
DEFAULT_N_MC = 200_000
DEFAULT_SEED = 20240611
DEFAULT_SCHEME = "auto"
DEFAULT_BOCHNER_CONVENTION = "positive"
DEFAULT_TOL_GRAD = 1e-10
DEFAULT_TOL_UNIQ = 1e-6
DEFAULT_MAX_ITER = 200
DEFAULT_EPS_START = 1e-2
DEFAULT_EPS_STOP = 1e-12
DEFAULT_EPS_FACTOR = 0.1
DEFAULT_GRID_N_MAX = 8
DEFAULT_GRID_P_VALUES = [1.1, 1.5, 2.0, 3.0, 10.0]
DEFAULT_GRID_DELTA_VALUES = [0.1, 0.25, 0.5, 0.75, 1.0]
DEFAULT_GRID_R_VALUES = [0.1, 1.0, 10.0]
DEFAULT_WORKERS = 4

# Quadrature schemes
SCHEME_AUTO = "auto"
SCHEME_PRODUCT_GAUSS = "product-gauss"
SCHEME_MONTE_CARLO = "monte-carlo"
PRODUCT_GAUSS_MAX_DIMENSION = 5

# Bochner Laplacian conventions
CONVENTION_POSITIVE = "positive"
CONVENTION_ANALYST = "analyst"

# Richardson extrapolation radii for small-radius limits
RICHARDSON_BASE_RADIUS = 1e-2

# Bochner finite-difference meshes
BOCHNER_BASE_MESH = 0.04
BOCHNER_SAMPLE_POINTS = 24

# Boundary value of the p=2 rule
P_TWO = Fraction(2)

# Verification suites
SUITES = ["exterior", "roots", "pinching", "monotonicity", "limits", "bochner", "decay", "discrete"]
