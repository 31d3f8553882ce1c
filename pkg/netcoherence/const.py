"""Constants used by the module."""
from fractions import Fraction

# Exit codes shared by the exceptions and the command line.
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

# Edge list interchange format.
COMMENT_PREFIXES = ("%", "#")
MANIFEST_SUFFIX = ".manifest.json"

# Output precision, significant digits.
FLOAT_DIGITS = 12

# Dense eigendecomposition / pseudoinverse is the reference path up to here.
DENSE_LIMIT = 5000
DEFLATED_BLOCK = 256

# Vertex labels are stored as signed 64-bit integers.
LABEL_LIMIT = 2**63

# Rows scanned per chunk of the breadth first all pairs sweep.
BFS_CHUNK = 512

# Deterministic families stop here.
CAPACITY_LIMIT = 10**7

# Residual and route agreement tolerances.
ROUTE_RTOL = 1e-8
EIGEN_RESIDUAL_RTOL = 1e-8
BOUND_SLACK = 1e-9

# Random families.
RNG_ALGORITHM = "numpy.random.PCG64"
BA_SEED_SIZE = 8
HDRAN_MIN_DIMENSION = 2

FAMILY_BA = "ba"
FAMILY_HDRAN = "hdran"
FAMILY_PSEUDOFRACTAL = "pseudofractal"
FAMILY_CLIQUE4 = "clique4"
FAMILY_PATH = "path"
FAMILY_CYCLE = "cycle"
FAMILY_STAR = "star"
FAMILY_COMPLETE = "complete"
FAMILY_RING_LATTICE = "ring_lattice"
FAMILY_TORUS = "torus"

RANDOM_FAMILIES = (FAMILY_BA, FAMILY_HDRAN)
ITERATED_FAMILIES = (FAMILY_PSEUDOFRACTAL, FAMILY_CLIQUE4)
REFERENCE_FAMILIES = (
    FAMILY_PATH,
    FAMILY_CYCLE,
    FAMILY_STAR,
    FAMILY_COMPLETE,
    FAMILY_RING_LATTICE,
    FAMILY_TORUS,
)
FAMILIES = RANDOM_FAMILIES + ITERATED_FAMILIES + REFERENCE_FAMILIES

# Closed form limits of the first order coherence.
PSEUDOFRACTAL_LIMIT = Fraction(25, 84)
CLIQUE4_LIMIT = Fraction(39, 176)

# Kirchhoff indices of T_0 = K_4: (R, R*, R+).
CLIQUE4_INITIAL = (Fraction(3), Fraction(27), Fraction(18))

# Noisy consensus simulation.
SCHEME_EULER = "euler_maruyama"
SCHEME_EXACT = "exact_gaussian"
SCHEMES = (SCHEME_EULER, SCHEME_EXACT)
SIM_DT_FACTOR = 0.1
SIM_EXACT_DT_FACTOR = 0.25
SIM_BURN_IN_MIXING_TIMES = 10
SIM_BLOWUP_FACTOR = 1e6
SIM_WITHIN_REPLICA_BATCHES = 10
SIM_DEFAULT_SAMPLES = 10000
SIM_DEFAULT_REPLICAS = 4
