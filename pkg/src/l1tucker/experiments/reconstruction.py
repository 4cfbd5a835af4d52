"""Outlier-corrupted tensor reconstruction study.

Per trial a low-multilinear-rank tensor is synthesized, corrupted by dense
Gaussian noise plus a sparse set of high-variance outliers, decomposed by
every requested solver, and scored by the normalized squared reconstruction
error against the clean tensor. Trials are paired: for a fixed (seed, trial)
every solver and every swept parameter value sees the same clean tensor, the
same dense noise, outlier positions that are prefixes of one permutation,
and outlier values scaled from one normal draw.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .. import defaults
from ..decomposition import TuckerModel, hooi, hosvd, l1_hooi, l1_hosvd, reconstruct
from ..sampling import STREAM_CORRUPT, STREAM_DATA, haar_basis, standard_normal, stream_rng
from ..tensor import frobenius_norm
from ..validation import check_ranks, check_tensor
from .results import ResultRow, ResultTable, aggregate

SOLVER_NAMES = ("hosvd", "hooi", "l1-hosvd", "l1-hooi")

_SWEEPABLE = ("outlier_std", "outlier_count", "awgn_std")


@dataclass(frozen=True)
class ReconExperimentSpec:
    """Configuration of one reconstruction study (JSON fields map one-to-one)."""

    shape: tuple[int, ...]
    ranks: tuple[int, ...]
    core_std: float = defaults.CORE_STD
    awgn_std: float = defaults.AWGN_STD
    outlier_count: int = 0
    outlier_std: float = 0.0
    trials: int = 1
    seed: int = 0
    solvers: tuple[str, ...] = SOLVER_NAMES

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(d) for d in self.shape))
        object.__setattr__(self, "ranks", check_ranks(self.ranks, self.shape))
        object.__setattr__(self, "solvers", tuple(self.solvers))
        size = int(np.prod(self.shape))
        if not 0 <= self.outlier_count <= size:
            raise ValueError(f"outlier_count must lie in [0, {size}]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name in self.solvers:
            if name not in SOLVER_NAMES:
                raise ValueError(f"unknown solver {name!r}")

    @property
    def corruption_ratio(self) -> float:
        return self.outlier_count / float(np.prod(self.shape))


def solve(name: str, x: np.ndarray, ranks) -> TuckerModel:
    """Run one named decomposer with library-default settings."""
    if name == "hosvd":
        return hosvd(x, ranks)
    if name == "hooi":
        return hooi(x, ranks)[0]
    if name == "l1-hosvd":
        return l1_hosvd(x, ranks)
    if name == "l1-hooi":
        return l1_hooi(x, ranks)[0]
    raise ValueError(f"unknown solver {name!r}")


def gen_tucker_tensor(
    spec: ReconExperimentSpec, rng: np.random.Generator
) -> tuple[np.ndarray, TuckerModel]:
    """Synthesize a tensor with exact multilinear ranks ``spec.ranks``.

    Core entries are i.i.d. Gaussian with std ``spec.core_std``; bases are
    Gaussian-orthonormalized. Returns the tensor and the generating model.
    """
    bases = [haar_basis(rng, d, r) for d, r in zip(spec.shape, spec.ranks)]
    core = spec.core_std * standard_normal(rng, spec.ranks)
    truth = TuckerModel(bases, core)
    return truth.expand(core), truth


def corrupt(x: np.ndarray, spec: ReconExperimentSpec, rng: np.random.Generator) -> np.ndarray:
    """Add dense Gaussian noise everywhere plus sparse Gaussian outliers.

    Consumes ``rng`` in a fixed order: dense noise values, one position
    permutation (outlier positions are its first ``outlier_count`` entries,
    in the first-index-fastest linear order), then outlier values. The draw
    sizes do not depend on the noise scales, so corruptions at different
    ``outlier_std``/``awgn_std`` (or nested ``outlier_count``) share
    realizations.
    """
    x = check_tensor(x)
    size = x.size
    if not 0 <= spec.outlier_count <= size:
        raise ValueError(f"outlier_count must lie in [0, {size}]")
    noise = standard_normal(rng, x.shape)
    perm = rng.permutation(size)
    values = standard_normal(rng, spec.outlier_count)
    out = x + spec.awgn_std * noise
    if spec.outlier_count:
        positions = np.unravel_index(perm[: spec.outlier_count], x.shape, order="F")
        out[positions] += spec.outlier_std * values
    return out


def nse(x_true: np.ndarray, x_hat: np.ndarray) -> float:
    """Normalized squared error ``||x_true - x_hat||_F^2 / ||x_true||_F^2``."""
    x_true = check_tensor(x_true)
    x_hat = check_tensor(x_hat)
    if x_true.shape != x_hat.shape:
        raise ValueError(f"shape mismatch {x_true.shape} vs {x_hat.shape}")
    denom = frobenius_norm(x_true) ** 2
    if denom == 0.0:
        raise ValueError("reference tensor is zero; NSE undefined")
    return frobenius_norm(x_true - x_hat) ** 2 / denom


def _run_trial(
    spec: ReconExperimentSpec, trial: int, param_name: str, values
) -> dict[tuple[str, float], float | None]:
    """NSE per (solver, value) for one trial; None marks a solver failure."""
    x_clean, _ = gen_tucker_tensor(spec, stream_rng(spec.seed, trial, STREAM_DATA))
    out: dict[tuple[str, float], float | None] = {}
    for value in values:
        point = replace(spec, **{param_name: value})
        x_corr = corrupt(x_clean, point, stream_rng(spec.seed, trial, STREAM_CORRUPT))
        for name in spec.solvers:
            try:
                model = solve(name, x_corr, spec.ranks)
                out[(name, value)] = nse(x_clean, reconstruct(x_corr, model))
            except Exception:
                out[(name, value)] = None
    return out


def run_reconstruction_sweep(
    spec: ReconExperimentSpec,
    param_name: str = "outlier_std",
    values=(0.0,),
    n_workers: int = 1,
) -> ResultTable:
    """Mean NSE per solver across ``values`` of one swept spec field.

    Trials are independent work units; ``n_workers`` > 1 runs them on a
    thread pool with results reduced in trial order, so the output is
    identical to the serial run.
    """
    if param_name not in _SWEEPABLE:
        raise ValueError(f"param_name must be one of {_SWEEPABLE}")
    values = [
        int(v) if param_name == "outlier_count" else float(v) for v in values
    ]
    for v in values:
        replace(spec, **{param_name: v})  # validate every grid point upfront

    if n_workers == 0:
        import os

        n_workers = os.cpu_count() or 1
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            per_trial = list(
                pool.map(
                    lambda t: _run_trial(spec, t, param_name, values),
                    range(spec.trials),
                )
            )
    else:
        per_trial = [
            _run_trial(spec, t, param_name, values) for t in range(spec.trials)
        ]

    table = ResultTable()
    for name in spec.solvers:
        for value in values:
            scores = [r[(name, value)] for r in per_trial]
            ok = [s for s in scores if s is not None]
            n_fail = len(scores) - len(ok)
            if n_fail:
                table.failures[(name, float(value))] = n_fail
            if not ok:
                continue
            mean, err = aggregate(ok)
            table.rows.append(
                ResultRow(name, param_name, float(value), mean, err, len(ok))
            )
    return table
