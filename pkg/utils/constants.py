# constants.py

# Lattice Constants
DEFAULT_N_SITES = 256
MIN_N_SITES = 8
DISPLAY_TIME_FACTOR = 1000.0  # natural time x 10^3 gives the display axis
ORACLE_MAX_SITES = 64  # dense oracle is O(N^3)

POSITION = 'position'
MOMENTUM = 'momentum'

# Distance conventions for pointer kernels on the ring
MINIMAL_IMAGE = 'minimal_image'
LINEAR = 'linear'
DISTANCE_CONVENTIONS = (MINIMAL_IMAGE, LINEAR)

# Tolerances
NORM_TOLERANCE = 1e-12
HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10
DIAGONAL_IMAG_TOLERANCE = 1e-12
EVENT_TIME_TOLERANCE = 1e-9  # display units; merges record and measurement times
RECORD_TOLERANCE = 1e-9  # Hermiticity and trace drift allowed in a recorded state

# Measurement kinds (scenario [measurement] kind)
MEASUREMENT_KINDS = ('none', 'region_pvm', 'pointer', 'custom_kernel')

# State builders (scenario [state] kind)
STATE_KINDS = ('gaussian', 'position_eigenstate')
DEFAULT_PACKET_WIDTH = 8.0

# Fraction of the momentum zone, either side of k = N/2, treated as the
# Bragg wrap region
WRAP_WINDOW_FRACTION = 1 / 8
WRAP_WEIGHT_LIMIT = 1e-8

# Output files
POSITIONS_CSV = 'positions.csv'
MOMENTA_CSV = 'momenta.csv'
SUMMARY_CSV = 'summary.csv'
SWEEP_CSV = 'sweep.csv'
CONVERGENCE_CSV = 'convergence.csv'
CSV_FLOAT_FORMAT = '%.17g'

SUMMARY_COLUMNS = [
    'time_display', 'purity', 'expected_momentum', 'momentum_variance',
    'negative_momentum_fraction'
]
SWEEP_COLUMNS = [
    'label', 'time_display', 'initial_region_mass', 'forward_mass', 'purity',
    'expected_momentum', 'momentum_variance', 'position_variance',
    'negative_momentum_fraction'
]
