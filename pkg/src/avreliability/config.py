"""Package-wide defaults.

Kept in one place so the CLI flags, the library defaults, and the test
suite agree on the same numbers.
"""

# Seed used wherever randomness is not explicitly supplied (CLI --seed,
# oracle mixture sampling, fixture expansion in the demos).
DEFAULT_SEED = 42

# Root-finding tolerances: relative on the solved quantity, with an
# absolute floor for quantities that may legitimately be zero.
REL_TOL = 1e-9
ABS_TOL = 1e-12

# Model fitting uses at least this many events.
DEFAULT_MIN_FIT = 10

# One-step-ahead evaluation starts here so early unstable fits do not
# dominate calibration statistics.
DEFAULT_ROLLING_START = 50

# Recalibration needs this many prior predictions before it activates.
DEFAULT_WARMUP = 20

# Log densities are floored here before prequential comparisons; this is
# the smallest log a float64 can exponentiate without underflowing to 0.
LOG_DENSITY_FLOOR = -745.0
