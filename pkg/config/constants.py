"""Workbench Constants"""

# Truncation and cube caps
DEFAULT_LEVEL_BOUND = 3
MAX_LEVEL_BOUND = 4
MAX_CUBE_DIM = 4
MAX_HOM_SET = 1_000_000
MAX_FIBER = 100_000

# Realizability
LITERAL_BOUND = 8
STEP_BUDGET = 2_000
TRACKER_SIZE_BOUND = 3
ORTHOGONALITY_SIZE_BOUND = 7
MAX_MAP_SPACE = 4_096

# Counterexample window
N_BOUND = 16
FIBER_WIDTH = 4
WINDOW_LEVELS = 2
MIN_CANDIDATES = 1_000

DEFAULT_SEED = 0
VARIANTS = ("B_ord", "B")
