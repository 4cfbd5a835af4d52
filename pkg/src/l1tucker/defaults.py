"""Single source for every numeric default used across the library.

CLI commands echo this table into their output CSVs as ``#``-prefixed
comment lines so result files carry their own provenance.
"""
from __future__ import annotations

# Convergence threshold on the relative metric increase, shared by the
# alternating L1-PCA solver and the orthogonal-iteration outer loops.
TOL = 1e-6

# Absolute fallback applied when the previous metric is zero and the
# relative increase is undefined.
ABS_TOL = 1e-12

# Iteration budget of the alternating L1-PCA solver: FACTOR * n_rows,
# hard-capped so degenerate inputs cannot stall a run.
AO_ITER_FACTOR = 100
AO_ITER_CAP = 1000

# Outer sweep cap for the orthogonal-iteration refiners.
MAX_OUTER_ITERS = 100

# Orthonormality test: max |U^T U - I| entries must stay below this.
ORTHONORMAL_TOL = 1e-10

# Singular values below CUTOFF * sigma_max count as zero for rank decisions.
RANK_CUTOFF = 1e-12

# Reconstruction-study synthesis: core entry std and dense noise std.
CORE_STD = 3.0
AWGN_STD = 1.0

# Classification-study corruption: per-pixel noise RMS as a multiple of the
# average pixel RMS of the clean training stack.
NOISE_RMS_RATIO = 10.0


def defaults_table() -> dict[str, float | int]:
    """Return the defaults as an ordered name -> value mapping."""
    return {
        "tol": TOL,
        "abs_tol": ABS_TOL,
        "ao_iter_factor": AO_ITER_FACTOR,
        "ao_iter_cap": AO_ITER_CAP,
        "max_outer_iters": MAX_OUTER_ITERS,
        "orthonormal_tol": ORTHONORMAL_TOL,
        "rank_cutoff": RANK_CUTOFF,
        "core_std": CORE_STD,
        "awgn_std": AWGN_STD,
        "noise_rms_ratio": NOISE_RMS_RATIO,
    }
